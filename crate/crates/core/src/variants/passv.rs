use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fock::{enumerate_configurations, truncated_evolution, FockState, OccupationVector};
use crate::netlib::UnitaryMatrix;
use crate::scalar::{Real, C};
use crate::variants::{squeezed_vacuum_coefficients, SqueezingParameter};

const MAX_MODES: usize = 3;
const MAX_ADDED: usize = 2;
const MAX_CUTOFF: usize = 20;

/// Per-mode parity: `+1` for an even photon count, `−1` for odd.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ParityOutcome {
    pub signs: Vec<i8>,
}

impl ParityOutcome {
    pub fn of(s: &OccupationVector) -> Self {
        Self { signs: s.counts().iter().map(|&k| if k % 2 == 0 { 1 } else { -1 }).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassvKind {
    /// `a†` applied to each of the first `n` squeezed modes.
    Added,
    /// `a` applied instead; undefined without squeezing.
    Subtracted,
}

/// Parity statistics plus the probability mass lost to the photon cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityDistribution<T> {
    pub probabilities: BTreeMap<ParityOutcome, T>,
    pub truncation_deficit: T,
}

impl<T: Real> ParityDistribution<T> {
    pub fn get(&self, signs: &[i8]) -> T {
        self.probabilities.get(&ParityOutcome { signs: signs.to_vec() }).copied().unwrap_or(T::zero())
    }

    /// Builds parity statistics from a photon-number distribution; outcomes
    /// with zero probability are omitted.
    pub fn from_occupations<'a>(entries: impl IntoIterator<Item = (&'a OccupationVector, T)>) -> Self {
        let mut probabilities = BTreeMap::new();
        for (s, p) in entries.into_iter().filter(|(_, p)| *p > T::zero()) {
            *probabilities.entry(ParityOutcome::of(s)).or_insert(T::zero()) += p;
        }
        Self { probabilities, truncation_deficit: T::zero() }
    }

    /// Largest pointwise difference over the union of outcomes.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.probabilities
            .keys()
            .chain(other.probabilities.keys())
            .map(|k| (self.get(&k.signs) - other.get(&k.signs)).abs())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> Serialize for ParityDistribution<T> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            signs: &'a [i8],
            p: f64,
        }
        ser.collect_seq(self.probabilities.iter().map(|(k, p)| Entry { signs: &k.signs, p: p.to_f64().unwrap() }))
    }
}

/// `(1 + sinh² r)^{−n/2}`, the normalisation of `n` photon-added squeezed
/// vacua.
pub fn passv_normalization<T: Real>(n: usize, xi: SqueezingParameter<T>) -> T {
    (T::one() + xi.r.sinh().powi(2)).powf(-T::count(n) / T::lit(2.0))
}

/// Parity-sampling statistics of squeezed vacua in every mode with a photon
/// added to (or removed from) the first `n` modes, sent through the real
/// orthogonal network `o`.
///
/// The input is truncated to at most `cutoff` photons in total before the
/// exact sector-wise evolution, so the returned probabilities sum to
/// `1 − truncation_deficit`.
pub fn passv_parity_distribution<T: Real>(
    o: &UnitaryMatrix<T>,
    n: usize,
    xi: SqueezingParameter<T>,
    cutoff: usize,
    kind: PassvKind,
) -> Result<ParityDistribution<T>> {
    let m = o.dim();
    let max_imag = o.max_imag();
    if max_imag > T::lit(1e-12) {
        return Err(Error::NotReal { max_imag: max_imag.to_f64().unwrap() });
    }
    if m > MAX_MODES {
        return Err(Error::Guard { what: "parity oracle modes", size: m as u128, limit: MAX_MODES as u128 });
    }
    if n > MAX_ADDED.min(m) {
        return Err(Error::Guard { what: "parity oracle photons", size: n as u128, limit: MAX_ADDED.min(m) as u128 });
    }
    if cutoff > MAX_CUTOFF {
        return Err(Error::Guard { what: "parity oracle cutoff", size: cutoff as u128, limit: MAX_CUTOFF as u128 });
    }
    if kind == PassvKind::Subtracted && xi.r == T::zero() {
        return Err(Error::InvalidArgument("photon subtraction from the vacuum gives the zero vector".into()));
    }

    let base = squeezed_vacuum_coefficients(xi, cutoff + 1).coefficients;
    let zero = C::new(T::zero(), T::zero());
    let modified: Vec<C<T>> = (0..=cutoff)
        .map(|k| match kind {
            PassvKind::Added if k == 0 => zero,
            PassvKind::Added => base[k - 1] * T::count(k).sqrt(),
            PassvKind::Subtracted => base[k + 1] * T::count(k + 1).sqrt(),
        })
        .collect();
    let scale = match kind {
        PassvKind::Added => passv_normalization(n, xi),
        PassvKind::Subtracted => xi.r.sinh().powi(n as i32).recip(),
    };

    let mut state = FockState::new();
    let mut kept = T::zero();
    for total in 0..=cutoff {
        for s in enumerate_configurations(m, total)? {
            let amp = s.counts().iter().enumerate().fold(C::new(scale, T::zero()), |acc, (j, &k)| {
                acc * if j < n { modified[k] } else { base[k] }
            });
            if amp.norm_sqr() > T::zero() {
                kept += amp.norm_sqr();
                state.insert(s, amp);
            }
        }
    }
    let evolved = truncated_evolution(o, &state, cutoff)?;
    let mut dist = ParityDistribution::from_occupations(evolved.iter().map(|(s, a)| (s, a.norm_sqr())));
    dist.truncation_deficit = (T::one() - kept).max(T::zero());
    Ok(dist)
}
