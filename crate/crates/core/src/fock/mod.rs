//! Fock-space description of photons in passive networks.

mod distribution;
mod evolution;
mod oracle;

pub use distribution::{output_distribution, sample, sample_counts, total_variation, FockDistribution};
pub use evolution::{truncated_evolution, FockState, SECTOR_LIMIT};
pub use oracle::{polynomial_oracle, CreationPolynomial};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlib::UnitaryMatrix;
use crate::permanent::permanent_repeated;
use crate::scalar::{Real, C};

/// Upper bound on the number of configurations any enumeration may produce.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

/// Photon counts per mode, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OccupationVector(pub Vec<usize>);

impl OccupationVector {
    pub fn new(counts: Vec<usize>) -> Self {
        Self(counts)
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// `Π_i k_i!` as a float.
    pub fn factorial_product<T: Real>(&self) -> T {
        self.0.iter().map(|&k| factorial::<T>(k)).fold(T::one(), |a, b| a * b)
    }
}

impl From<Vec<usize>> for OccupationVector {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorial<T: Real>(k: usize) -> T {
    (1..=k).fold(T::one(), |acc, i| acc * T::count(i))
}

/// `C(m + K − 1, K)`, saturating at `u128::MAX`.
pub fn configuration_count(m: usize, photons: usize) -> u128 {
    if m == 0 {
        return u128::from(photons == 0);
    }
    // C(m + K − 1, K) = Π_{i=1..K} (m − 1 + i) / i, exact at every step
    let mut acc: u128 = 1;
    for i in 1..=photons as u128 {
        match acc.checked_mul(m as u128 - 1 + i) {
            Some(v) => acc = v / i,
            None => return u128::MAX,
        }
    }
    acc
}

/// All ways of distributing `photons` over `m` modes, in ascending
/// lexicographic order.
pub fn enumerate_configurations(m: usize, photons: usize) -> Result<Vec<OccupationVector>> {
    if m == 0 {
        return Err(Error::InvalidArgument("at least one mode is required".into()));
    }
    let count = configuration_count(m, photons);
    if count > ENUMERATION_LIMIT {
        return Err(Error::Guard { what: "configuration count", size: count, limit: ENUMERATION_LIMIT });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0usize; m];
    fill(&mut cur, 0, photons, &mut out);
    Ok(out)
}

fn fill(cur: &mut [usize], pos: usize, left: usize, out: &mut Vec<OccupationVector>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(OccupationVector(cur.to_vec()));
        return;
    }
    for k in 0..=left {
        cur[pos] = k;
        fill(cur, pos + 1, left - k, out);
    }
    cur[pos] = 0;
}

/// `⟨s| Û |k⟩ = perm(U_{k,s}) / √(Π k_i! Π s_j!)`.
pub fn amplitude<T: Real>(u: &UnitaryMatrix<T>, input: &OccupationVector, output: &OccupationVector) -> Result<C<T>> {
    check_modes(u, input)?;
    check_modes(u, output)?;
    let perm = permanent_repeated(u.matrix(), input.counts(), output.counts())?;
    let norm = (input.factorial_product::<T>() * output.factorial_product::<T>()).sqrt();
    Ok(perm / norm)
}

pub(crate) fn check_modes<T: Real>(u: &UnitaryMatrix<T>, v: &OccupationVector) -> Result<()> {
    if v.modes() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: v.modes() });
    }
    Ok(())
}

/// Outcome of [`validate_bs_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BsValidation {
    /// `m ≥ n²`: collision-free outputs dominate.
    pub birthday_ok: bool,
    /// `n ≤ m^{1/6}`; only evaluated in strict mode.
    pub hiding_ok: Option<bool>,
}

impl BsValidation {
    pub fn passes(&self) -> bool {
        self.birthday_ok && self.hiding_ok.unwrap_or(true)
    }
}

/// Checks the mode/photon regime of a boson-sampling instance using exact
/// integer comparisons (`n² ≤ m` and `n⁶ ≤ m`).
pub fn validate_bs_instance(m: usize, n: usize, strict: bool) -> BsValidation {
    let pow = |k: u32| (n as u128).checked_pow(k);
    let birthday_ok = pow(2).is_some_and(|v| v <= m as u128);
    let hiding_ok = strict.then(|| pow(6).is_some_and(|v| v <= m as u128));
    BsValidation { birthday_ok, hiding_ok }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::ComplexMatrix;

    fn bs5050() -> UnitaryMatrix<f64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        UnitaryMatrix::new(
            ComplexMatrix::from_rows(&[vec![C::new(s, 0.0), C::new(0.0, s)], vec![C::new(0.0, s), C::new(s, 0.0)]])
                .unwrap(),
        )
        .unwrap()
    }

    fn ov(v: &[usize]) -> OccupationVector {
        OccupationVector(v.to_vec())
    }

    #[test]
    fn enumeration_order_and_counts() {
        let e = enumerate_configurations(2, 2).unwrap();
        assert_eq!(e, vec![ov(&[0, 2]), ov(&[1, 1]), ov(&[2, 0])]);
        assert_eq!(enumerate_configurations(3, 0).unwrap(), vec![ov(&[0, 0, 0])]);
        assert_eq!(enumerate_configurations(5, 4).unwrap().len(), 70);
        assert_eq!(configuration_count(30, 12), 7_898_654_920);
        assert!(matches!(enumerate_configurations(30, 12), Err(Error::Guard { .. })));
    }

    #[test]
    fn hom_amplitudes() {
        let u = bs5050();
        let coinc = amplitude(&u, &ov(&[1, 1]), &ov(&[1, 1])).unwrap();
        assert!(coinc.norm() < 1e-15);
        let bunched = amplitude(&u, &ov(&[1, 1]), &ov(&[2, 0])).unwrap();
        assert!((bunched.norm_sqr() - 0.5).abs() < 1e-15);
        assert!(matches!(amplitude(&u, &ov(&[1, 0]), &ov(&[1, 1])), Err(Error::PhotonMismatch { .. })));
        assert!(matches!(amplitude(&u, &ov(&[1, 0, 0]), &ov(&[1, 0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn bs_regime() {
        let v = validate_bs_instance(100, 10, true);
        assert!(v.birthday_ok);
        assert_eq!(v.hiding_ok, Some(false));
        assert!(!v.passes());
        assert!(validate_bs_instance(1_000_000, 10, true).passes());
        assert!(!validate_bs_instance(99, 10, false).passes());
        assert_eq!(validate_bs_instance(99, 10, false).hiding_ok, None);
    }

    #[test]
    fn display() {
        assert_eq!(ov(&[1, 0, 3]).to_string(), "(1,0,3)");
    }
}
