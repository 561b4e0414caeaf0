//! Multiphoton phase estimation with Fourier-type interferometers.

mod mordor;
mod qufti;
mod search;
mod strategy;

pub use mordor::{
    dephased_coincidence, mordor_coefficients, mordor_coincidence, mordor_dP, mordor_delta_phi_small_angle,
    mordor_permanent_analytic, mordor_unitary_closed, mordor_unitary_product, MordorModel, SINGULAR_RADIUS,
};
pub use qufti::{qufti_coincidence, qufti_dP, qufti_delta_phi, qufti_permanent_analytic, qufti_unitary, rencontres};
pub use search::{delta_strategy_delta_phi, qft_optimality_search, SearchReport};
pub use strategy::{strategy_sensitivity, PhaseStrategy, SensitivityFlag, SensitivityReport, StrategyKind};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlib::{ComplexMatrix, UnitaryMatrix};
use crate::scalar::{cis, Real, C};

/// `Δφ = √(P − P²) / (√runs · |∂P/∂φ|)`, with a flag for the `P ∈ {0, 1}`
/// boundary where the numerator vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseUncertainty<T> {
    pub delta_phi: T,
    pub at_boundary: bool,
}

pub fn error_propagation<T: Real>(p: T, dp: T, runs: usize) -> Result<PhaseUncertainty<T>> {
    let slack = T::lit(1e3) * T::epsilon();
    if !(p >= -slack && p <= T::one() + slack) {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    if runs == 0 {
        return Err(Error::InvalidArgument("at least one run is required".into()));
    }
    if dp == T::zero() || !dp.is_finite() {
        return Err(Error::UndefinedSensitivity);
    }
    let p = p.max(T::zero()).min(T::one());
    let var = p * (T::one() - p);
    Ok(PhaseUncertainty {
        delta_phi: var.sqrt() / (T::count(runs).sqrt() * dp.abs()),
        at_boundary: var == T::zero(),
    })
}

/// Mach-Zehnder interferometer: two symmetric 50:50 couplers around a phase
/// `φ` in the first arm.
pub fn mzi_matrix<T: Real>(phi: T) -> Result<UnitaryMatrix<T>> {
    let e = cis(phi);
    let one = C::new(T::one(), T::zero());
    let i = C::new(T::zero(), T::one());
    let h = T::lit(0.5);
    let m = ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
        (0, 0) => (one - e) * h,
        (1, 1) => -(one - e) * h,
        _ => i * (one + e) * h,
    });
    UnitaryMatrix::new(m)
}

/// Resource conventions for the shot-noise and Heisenberg baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineModel {
    /// `N = n` photons passing a single phase.
    QuftiGlobal,
    /// `N = Σ_j (j−1)²`, the phase-weighted count for a linear gradient.
    MordorGradient,
    /// `N = 1 + n(n−1)/2` phase-shifter passes.
    Orc,
}

impl std::str::FromStr for BaselineModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qufti_global" => Ok(Self::QuftiGlobal),
            "mordor_gradient" => Ok(Self::MordorGradient),
            "orc" => Ok(Self::Orc),
            other => Err(Error::InvalidArgument(format!("unknown baseline model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Baselines<T> {
    pub resources: u64,
    pub snl: T,
    pub hl: T,
}

/// `(1/√N, 1/N)` for the chosen resource count.
pub fn snl_hl_baselines<T: Real>(n: usize, model: BaselineModel) -> Result<Baselines<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument("baselines need n ≥ 2".into()));
    }
    let k = n as u64;
    let resources = match model {
        BaselineModel::QuftiGlobal => k,
        BaselineModel::MordorGradient => k * (k - 1) * (2 * k - 1) / 6,
        BaselineModel::Orc => 1 + k * (k - 1) / 2,
    };
    let big_n = T::from_u64(resources).unwrap();
    Ok(Baselines { resources, snl: T::one() / big_n.sqrt(), hl: T::one() / big_n })
}

/// Heralding success probability `(η_s η_d)^n`.
pub fn efficiency<T: Real>(n: usize, eta_source: T, eta_detector: T) -> Result<T> {
    for eta in [eta_source, eta_detector] {
        if !(eta >= T::zero() && eta <= T::one()) {
            return Err(Error::InvalidArgument(format!("efficiency {eta} outside [0, 1]")));
        }
    }
    Ok((eta_source * eta_detector).powi(n as i32))
}
