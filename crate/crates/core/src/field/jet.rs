use super::QuatField;
use crate::error::{invalid, Result};
use crate::grid::Grid;

/// A quaternion field and its time derivatives at one instant.
///
/// `derivative(0)` is the value, `derivative(j)` is `∂ʲ/∂tʲ`. Built either
/// from analytic derivatives or from uniformly spaced frames, in which case
/// every level is obtained by repeating the centered stencil
/// `(f[n+1] − f[n−1]) / 2dt`, the same stencil used in space.
#[derive(Debug, Clone)]
pub struct QuatJet {
    levels: Vec<QuatField>,
    time: f64,
    c: f64,
}

impl QuatJet {
    pub fn from_derivatives(levels: Vec<QuatField>, time: f64, c: f64) -> Result<Self> {
        if levels.is_empty() {
            return Err(invalid("levels", "a jet needs at least its value"));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(invalid(
                "c",
                format!("characteristic speed must be positive, got {c}"),
            ));
        }
        let grid = *levels[0].grid();
        for l in &levels[1..] {
            grid.ensure_same(l.grid())?;
        }
        Ok(Self { levels, time, c })
    }

    /// Value held fixed in time: all `order` derivatives are zero.
    pub fn constant(value: QuatField, order: usize, time: f64, c: f64) -> Self {
        let grid = *value.grid();
        let mut levels = vec![value];
        levels.extend((0..order).map(|_| QuatField::zeros(grid)));
        Self { levels, time, c }
    }

    /// Centered jet from `2m + 1` frames spaced `dt`, evaluated at the middle
    /// frame (time `t_center`); yields `m` derivatives.
    pub fn from_frames(frames: &[QuatField], dt: f64, t_center: f64, c: f64) -> Result<Self> {
        if frames.is_empty() || frames.len() % 2 == 0 {
            return Err(invalid(
                "frames",
                format!("need an odd number of frames, got {}", frames.len()),
            ));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid(
                "dt",
                format!("frame spacing must be positive, got {dt}"),
            ));
        }
        let m = frames.len() / 2;
        let mut current: Vec<QuatField> = frames.to_vec();
        let mut levels = vec![current[m].clone()];
        let inv = 0.5 / dt;
        for j in 1..=m {
            current = (1..current.len() - 1)
                .map(|n| current[n + 1].sub(&current[n - 1]).scale(inv))
                .collect();
            levels.push(current[m - j].clone());
        }
        Self::from_derivatives(levels, t_center, c)
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn value(&self) -> &QuatField {
        &self.levels[0]
    }

    pub fn derivative(&self, j: usize) -> &QuatField {
        &self.levels[j]
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn grid(&self) -> &Grid {
        self.levels[0].grid()
    }

    /// Keeps only the first `order` derivatives.
    pub fn truncated(&self, order: usize) -> Self {
        Self {
            levels: self.levels[..=order.min(self.order())].to_vec(),
            time: self.time,
            c: self.c,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion;

    #[test]
    fn frames_give_centered_derivatives() {
        let g = Grid::line(4, 1.0).unwrap();
        // f(t) = t² sampled at t = -2, -1, 0, 1, 2 (dt = 1)
        let frames: Vec<QuatField> = [-2.0_f64, -1.0, 0.0, 1.0, 2.0]
            .iter()
            .map(|&t| QuatField::from_fn(g, |_| Quaternion::scalar(t * t)))
            .collect();
        let jet = QuatJet::from_frames(&frames, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(jet.order(), 2);
        assert_eq!(jet.value().scalar.values()[0], 0.0);
        assert_eq!(jet.derivative(1).scalar.values()[0], 0.0);
        // wide second difference: (4 − 0 + 4) / 4 = 2
        assert_eq!(jet.derivative(2).scalar.values()[0], 2.0);
    }

    #[test]
    fn rejects_even_frame_counts_and_bad_speed() {
        let g = Grid::line(4, 1.0).unwrap();
        let f = QuatField::zeros(g);
        assert!(QuatJet::from_frames(&[f.clone(), f.clone()], 0.1, 0.0, 1.0).is_err());
        assert!(QuatJet::from_derivatives(vec![f], 0.0, 0.0).is_err());
    }
}
