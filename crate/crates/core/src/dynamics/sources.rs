use crate::error::Result;
use crate::field::SourceDensities;
use crate::grid::{Grid, ScalarField, VectorField};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceMode {
    /// The temporal terms themselves play the part of charge and current;
    /// nothing extra is added to the evolution.
    IdentifiedWithT,
    /// Prescribed `ρ` and `J` enter the evolution.
    Explicit,
}

/// Prescribed densities varying linearly in time:
/// `ρ(t) = ρ₀ + t ρ̇`, `J(t) = J₀ + t J̇`.
#[derive(Debug, Clone)]
pub struct ExplicitSources {
    pub rho: ScalarField,
    pub current: VectorField,
    pub rho_rate: ScalarField,
    pub current_rate: VectorField,
}

impl ExplicitSources {
    pub fn constant(rho: ScalarField, current: VectorField) -> Result<Self> {
        rho.grid().ensure_same(current.grid())?;
        let grid = *rho.grid();
        Ok(Self {
            rho,
            current,
            rho_rate: ScalarField::zeros(grid),
            current_rate: VectorField::zeros(grid),
        })
    }

    pub fn with_rates(mut self, rho_rate: ScalarField, current_rate: VectorField) -> Result<Self> {
        self.rho.grid().ensure_same(rho_rate.grid())?;
        self.rho.grid().ensure_same(current_rate.grid())?;
        self.rho_rate = rho_rate;
        self.current_rate = current_rate;
        Ok(self)
    }

    pub fn grid(&self) -> &Grid {
        self.rho.grid()
    }

    pub fn at(&self, t: f64) -> SourceDensities {
        let mut rho = self.rho.clone();
        rho.axpy(t, &self.rho_rate);
        let mut current = self.current.clone();
        current.axpy(t, &self.current_rate);
        SourceDensities { rho, current }
    }
}

#[derive(Debug, Clone)]
pub enum Sources {
    IdentifiedWithT,
    Explicit(ExplicitSources),
}

impl Sources {
    pub fn mode(&self) -> SourceMode {
        match self {
            Sources::IdentifiedWithT => SourceMode::IdentifiedWithT,
            Sources::Explicit(_) => SourceMode::Explicit,
        }
    }

    /// Densities entering the evolution at time `t`; `None` when the
    /// temporal field is the source.
    pub fn densities_at(&self, t: f64) -> Option<SourceDensities> {
        match self {
            Sources::IdentifiedWithT => None,
            Sources::Explicit(ex) => Some(ex.at(t)),
        }
    }

    pub(crate) fn check_grid(&self, grid: &Grid) -> Result<()> {
        match self {
            Sources::IdentifiedWithT => Ok(()),
            Sources::Explicit(ex) => grid.ensure_same(ex.grid()),
        }
    }
}
