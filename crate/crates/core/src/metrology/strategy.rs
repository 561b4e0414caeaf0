use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrology::error_propagation;
use crate::netlib::{qft_matrix, ComplexMatrix};
use crate::permanent::permanent_fast;
use crate::scalar::{cis, Real, C};

/// Named ways of spreading a single phase over the internal modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    /// `f_j = 1/n`
    Constant,
    /// `f_j = √j`
    Sublinear,
    /// `f_j = j`
    Linear,
    /// `f_j = j²`
    Quadratic,
    /// `f_j = 2^j`
    Exponential,
    /// `f_j = δ_{j1}`
    Delta,
    /// `f_j = j − 1`, the linear gradient of the phase-gradient interferometer
    Gradient,
    Custom,
}

impl std::str::FromStr for StrategyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "constant" => Self::Constant,
            "sublinear" => Self::Sublinear,
            "linear" => Self::Linear,
            "quadratic" => Self::Quadratic,
            "exponential" => Self::Exponential,
            "delta" => Self::Delta,
            "gradient" => Self::Gradient,
            other => return Err(Error::InvalidArgument(format!("unknown phase strategy '{other}'"))),
        })
    }
}

/// Relative phase weights `f_j`; mode `j` picks up `e^{i f_j φ}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseStrategy<T> {
    pub kind: StrategyKind,
    pub weights: Vec<T>,
}

impl<T: Real> PhaseStrategy<T> {
    /// Unnormalised weights of a named strategy (one-based `j`).
    pub fn named(kind: StrategyKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("strategy needs at least one mode".into()));
        }
        let f = |j: usize| -> T {
            let x = T::count(j);
            match kind {
                StrategyKind::Constant => T::one() / T::count(n),
                StrategyKind::Sublinear => x.sqrt(),
                StrategyKind::Linear => x,
                StrategyKind::Quadratic => x * x,
                StrategyKind::Exponential => T::lit(2.0).powi(j as i32),
                StrategyKind::Delta => T::from_u8(u8::from(j == 1)).unwrap(),
                StrategyKind::Gradient => x - T::one(),
                StrategyKind::Custom => unreachable!(),
            }
        };
        if kind == StrategyKind::Custom {
            return Err(Error::InvalidArgument("custom strategies are built from weights".into()));
        }
        Ok(Self { kind, weights: (1..=n).map(f).collect() })
    }

    pub fn from_weights(weights: Vec<T>) -> Self {
        Self { kind: StrategyKind::Custom, weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Rescales to `Σ f_j = 1`. Each weight must then be strictly below one,
    /// except for a strategy with a single non-zero weight (the delta case).
    pub fn normalize(&self) -> Result<Self> {
        if self.weights.iter().any(|w| !(*w >= T::zero()) || !w.is_finite()) {
            return Err(Error::InvalidArgument("strategy weights must be finite and non-negative".into()));
        }
        let total: T = self.weights.iter().copied().sum();
        if !(total > T::zero()) {
            return Err(Error::InvalidArgument("strategy weights sum to zero".into()));
        }
        let weights: Vec<T> = self.weights.iter().map(|&w| w / total).collect();
        let support = weights.iter().filter(|&&w| w > T::zero()).count();
        if support > 1 && weights.iter().any(|&w| w >= T::one()) {
            return Err(Error::InvalidArgument("normalised weight reached 1".into()));
        }
        Ok(Self { kind: self.kind, weights })
    }
}

/// Outcome class of a numeric sensitivity evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivityFlag {
    Ok,
    /// `P ∈ {0, 1}`; the reported `Δφ` is zero.
    Boundary,
    /// `∂P/∂φ` vanished to working precision; `Δφ` is reported as infinite.
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityReport<T> {
    pub n: usize,
    pub varphi: T,
    #[serde(rename = "P")]
    pub p: T,
    #[serde(rename = "dP")]
    pub dp_dphi: T,
    pub delta_phi: T,
    pub snl: T,
    pub hl: T,
    pub flag: SensitivityFlag,
}

const DERIVATIVE_FLOOR: f64 = 1e-14;

/// Numeric `Δφ` for `U = V · Φ(f) · V†` with `V` the Fourier matrix, using
/// central differences with step `1e−6 · max(1, |φ|)`.
pub fn strategy_sensitivity<T: Real>(n: usize, strategy: &PhaseStrategy<T>, phi: T) -> Result<SensitivityReport<T>> {
    if strategy.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: strategy.len() });
    }
    let f = strategy.normalize()?;
    let v = qft_matrix::<T>(n)?;
    let vd = v.adjoint();
    let prob = |x: T| -> Result<T> {
        let d: Vec<C<T>> = f.weights.iter().map(|&w| cis(w * x)).collect();
        let u = v.matmul(&ComplexMatrix::diagonal(&d))?.matmul(&vd)?;
        Ok(permanent_fast(&u)?.norm_sqr())
    };
    let h = T::lit(1e-6) * T::one().max(phi.abs());
    let p = prob(phi)?;
    let (hi, lo) = (prob(phi + h)?, prob(phi - h)?);
    // differences at the rounding floor of P carry no signal
    let noise = T::lit(1024.0) * T::epsilon() * T::one().max(p);
    let dp = if (hi - lo).abs() <= noise { T::zero() } else { (hi - lo) / (h + h) };
    let snl = T::one() / T::count(n).sqrt();
    let hl = T::one() / T::count(n);
    let (delta_phi, flag) = if dp.abs() < T::lit(DERIVATIVE_FLOOR) {
        (T::infinity(), SensitivityFlag::Undefined)
    } else {
        let e = error_propagation(p, dp, 1)?;
        (e.delta_phi, if e.at_boundary { SensitivityFlag::Boundary } else { SensitivityFlag::Ok })
    };
    Ok(SensitivityReport { n, varphi: phi, p, dp_dphi: dp, delta_phi, snl, hl, flag })
}
