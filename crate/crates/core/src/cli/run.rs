use super::config::{Scenario, ScenarioConfig};
use super::snapshot::Snapshot;
use crate::dynamics::{
    self, from_potential, gaussian_t_pulse, mode_amplitude, scalar_mode, transverse_wave,
    zero_state, DiagnosticsRow,
};
use crate::error::{Error, Result};
use crate::field::FieldState;
use crate::grid::ScalarField;
use crate::manufactured::{potential, TrigPotential};
use crate::thermo::{self, SeebeckProfile, ThomsonScenario};
use std::f64::consts::{PI, TAU};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub const CSV_HEADER: &str = "step,t,energy_u,pseudo_energy_q,divB_l2,gauss_residual_l2,maxT";

/// `{:.16e}`: 17 significant digits, enough to re-parse to the same double.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn csv_row(r: &DiagnosticsRow) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        r.step,
        format_number(r.t),
        format_number(r.energy_u),
        format_number(r.pseudo_energy_q),
        format_number(r.div_b_l2),
        format_number(r.gauss_residual_l2),
        format_number(r.max_t)
    )
}

/// What a run produced.
#[derive(Debug, Clone, Default)]
pub struct RunReport {
    pub csv_path: PathBuf,
    pub snapshots: Vec<PathBuf>,
    pub rows: usize,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// `dir/stem_000128.ext` for periodic snapshots.
pub fn snapshot_step_path(base: &Path, step: usize) -> PathBuf {
    let stem = base
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("snapshot");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}_{step:06}.{ext}"),
        None => format!("{stem}_{step:06}"),
    };
    base.with_file_name(name)
}

pub fn initial_state(cfg: &ScenarioConfig) -> Result<FieldState> {
    let grid = cfg.grid()?;
    let c = cfg.c;
    match &cfg.scenario {
        Scenario::Zero => Ok(zero_state(grid, c)),
        Scenario::TransverseWave { amplitude, mode } => transverse_wave(grid, *amplitude, *mode, c),
        Scenario::ScalarMode { epsilon, mode } => scalar_mode(grid, *epsilon, *mode, c),
        Scenario::GaussianTPulse { amplitude, width } => {
            gaussian_t_pulse(grid, *amplitude, *width, c)
        }
        Scenario::FromPotential {
            n_modes,
            max_wavenumber,
        } => {
            let tp = TrigPotential::random_for(&grid, cfg.seed, *n_modes, *max_wavenumber);
            from_potential(&potential(&tp, grid, 0.0, 1, c))
        }
        other => Err(Error::Config {
            key: "scenario".into(),
            reason: format!("{} does not evolve fields", other.name()),
        }),
    }
}

/// Runs the configured scenario, writing CSV and snapshots and logging to
/// `log`. A non-finite abort keeps the rows written so far.
pub fn execute(cfg: &ScenarioConfig, log: &mut dyn Write) -> Result<RunReport> {
    cfg.validate()?;
    if cfg.scenario.is_evolution() {
        execute_evolution(cfg, log)
    } else {
        execute_thermo(cfg, log)
    }
}

fn execute_evolution(cfg: &ScenarioConfig, log: &mut dyn Write) -> Result<RunReport> {
    let grid = cfg.grid()?;
    let evo = cfg.evolution()?;
    let sources = cfg.sources()?;
    let initial = initial_state(cfg)?;
    writeln!(log, "scenario: {}", cfg.scenario.name())?;
    writeln!(log, "grid: {:?} spacing {:?}", grid.dims(), grid.spacing())?;
    writeln!(
        log,
        "dt: {} ({} steps), cfl limit {} x safety {}",
        evo.dt,
        evo.steps,
        dynamics::cfl_limit(&grid, cfg.c),
        evo.cfl_safety
    )?;
    writeln!(log, "source mode: {:?}", sources.mode())?;
    match evo.spectral_filter {
        Some(f) => writeln!(
            log,
            "spectral filter: sharp low-pass, cutoff {f} of Nyquist"
        )?,
        None => writeln!(log, "spectral filter: off")?,
    }

    let mut csv = create(&cfg.output.csv_path)?;
    writeln!(csv, "{CSV_HEADER}")?;
    let mut report = RunReport {
        csv_path: cfg.output.csv_path.clone(),
        ..Default::default()
    };
    let mut io_error: Option<std::io::Error> = None;
    let mut snapshot_error: Option<Error> = None;
    let mut max_q_drift = 0.0_f64;
    let initial_row = dynamics::diagnostics(0, &initial, &sources);
    let (q0, u0) = (initial_row.pseudo_energy_q, initial_row.energy_u);
    writeln!(log, "initial: {}", csv_row(&initial_row))?;
    let snapshot_every = cfg.output.snapshot_every;
    let snapshot_base = cfg.output.snapshot_path.clone();

    let outcome = dynamics::run_observed(initial, &sources, &evo, |row, state| {
        if io_error.is_none() {
            if let Err(e) = writeln!(csv, "{}", csv_row(row)) {
                io_error = Some(e);
            }
        }
        report.rows += 1;
        max_q_drift = max_q_drift.max((row.pseudo_energy_q - q0).abs());
        if let (Some(k), Some(base)) = (snapshot_every, snapshot_base.as_ref()) {
            if row.step % k == 0 && snapshot_error.is_none() {
                let path = snapshot_step_path(base, row.step);
                match Snapshot::from_state(state, &sources).write(&path) {
                    Ok(()) => report.snapshots.push(path),
                    Err(e) => snapshot_error = Some(e),
                }
            }
        }
    });
    csv.flush()?;
    if let Some(e) = io_error {
        return Err(e.into());
    }
    if let Some(e) = snapshot_error {
        return Err(e);
    }
    let summary = match outcome {
        Ok(s) => s,
        Err(e) => {
            writeln!(
                log,
                "aborted: {e}; {} rows kept in {}",
                report.rows,
                report.csv_path.display()
            )?;
            return Err(e);
        }
    };
    if let (None, Some(base)) = (snapshot_every, snapshot_base.as_ref()) {
        Snapshot::from_state(&summary.final_state, &sources).write(base)?;
        report.snapshots.push(base.clone());
    }

    let last = dynamics::diagnostics(evo.steps, &summary.final_state, &sources);
    writeln!(log, "final: {}", csv_row(&last))?;
    let norm = if u0 > 0.0 { u0 } else { 1.0 };
    writeln!(
        log,
        "pseudo-energy drift (relative to initial energy): {:e}",
        max_q_drift / norm
    )?;
    scenario_report(cfg, &summary.final_state, log)?;
    writeln!(
        log,
        "wrote {} rows to {}",
        report.rows,
        report.csv_path.display()
    )?;
    for p in &report.snapshots {
        writeln!(log, "snapshot: {}", p.display())?;
    }
    Ok(report)
}

/// Comparisons against the closed-form evolution where one exists.
fn scenario_report(cfg: &ScenarioConfig, f: &FieldState, log: &mut dyn Write) -> Result<()> {
    let grid = *f.grid();
    let t = f.time;
    let c = cfg.c;
    match cfg.scenario {
        Scenario::TransverseWave { amplitude, mode } => {
            let k = TAU * mode as f64 / grid.lengths()[0];
            let exact = ScalarField::from_fn(grid, |p| amplitude * (k * (p[0] - c * t)).sin());
            let err = f.electric.component_field(1).sub(&exact).l2() / exact.l2();
            writeln!(
                log,
                "transverse wave: relative L2 error of E_y vs exact = {err:e}"
            )?;
        }
        Scenario::ScalarMode { epsilon, mode } => {
            let dx = grid.dx;
            let k = TAU * mode as f64 / grid.lengths()[0];
            let rate = c * (k * dx).sin() / dx;
            let amp = mode_amplitude(&f.temporal, [mode, 0, 0]).0;
            let expected = epsilon * (rate * t).cosh();
            writeln!(
                log,
                "scalar mode: amplitude {amp:e}, eps*cosh(rate t) = {expected:e}, relative deviation {:e}",
                amp / expected - 1.0
            )?;
        }
        _ => {}
    }
    Ok(())
}

fn execute_thermo(cfg: &ScenarioConfig, log: &mut dyn Write) -> Result<RunReport> {
    let c = cfg.c;
    let mut rows: Vec<(String, f64)> = Vec::new();
    match &cfg.scenario {
        Scenario::HeatBalance {
            current,
            grad_k,
            de_dt,
        } => {
            let m = cfg.material()?;
            // curl B from the Ampère-like law so that the balance must close
            let curl_b =
                [0, 1, 2].map(|a| de_dt[a] / c + m.dtdk * grad_k[a] + 4.0 * PI / c * current[a]);
            let h = thermo::heat_balance(*current, m, *grad_k, curl_b, *de_dt, c)?;
            rows.extend([
                ("joule".into(), h.joule),
                ("thomson".into(), h.thomson),
                ("curl_term".into(), h.curl_term),
                ("displacement_term".into(), h.displacement_term),
                ("sum".into(), h.sum()),
                ("relative_residual".into(), h.relative_residual()),
            ]);
        }
        Scenario::ThomsonReversal {
            current,
            grad_k,
            curl_b,
        } => {
            let m = cfg.material()?;
            let out = thermo::thomson_reversal_experiment(&ThomsonScenario {
                current: *current,
                grad_k: *grad_k,
                curl_b: *curl_b,
                material: m,
                c,
            })?;
            let dq = thermo::thomson_heat(*current, *grad_k, m, c)?.dq_dt;
            rows.extend([
                ("dq_dt_forward".into(), out.dq_forward),
                ("dq_dt_reversed".into(), out.dq_reversed),
                ("dq_dt_formula".into(), dq),
                ("h_t_estimate".into(), out.h_t_estimate),
                ("h_t_formula".into(), out.h_t_formula),
                (
                    "h_t_relative_error".into(),
                    (out.h_t_estimate / out.h_t_formula - 1.0).abs(),
                ),
            ]);
        }
        Scenario::SeebeckJump {
            base,
            jump,
            width,
            cells,
            length,
            v,
        } => {
            let profile = SeebeckProfile {
                base: *base,
                jump: *jump,
                width: *width,
                cells: *cells,
                length: *length,
            };
            let r = thermo::seebeck_jump(&profile, *v, c)?;
            rows.extend([
                ("kick".into(), r.kick),
                ("kick_closed_form".into(), v / c * jump),
                (
                    "max_e_t".into(),
                    r.e_t.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ),
            ]);
        }
        Scenario::HeatedBall {
            radius,
            kdot,
            radii,
        } => {
            let dtdk = cfg.material.map(|m| m.dtdk).unwrap_or_default();
            let ball = thermo::heated_ball_field(*radius, dtdk, *kdot, c)?;
            rows.push(("source_density".into(), ball.source_density()));
            for r in radii {
                rows.push((format!("e_t_at_r={r}"), ball.field_at(*r)));
            }
        }
        other => unreachable!("{} is an evolution scenario", other.name()),
    }
    writeln!(log, "scenario: {}", cfg.scenario.name())?;
    let mut csv = create(&cfg.output.csv_path)?;
    writeln!(csv, "quantity,value")?;
    for (q, v) in &rows {
        writeln!(csv, "{q},{}", format_number(*v))?;
        writeln!(log, "  {q:<22} {v:.10e}")?;
    }
    csv.flush()?;
    writeln!(
        log,
        "wrote {} rows to {}",
        rows.len(),
        cfg.output.csv_path.display()
    )?;
    Ok(RunReport {
        csv_path: cfg.output.csv_path.clone(),
        snapshots: Vec::new(),
        rows: rows.len(),
    })
}
