use rand::Rng;
use rand_distr::{Distribution, StandardNormal, StandardUniform};

use crate::error::{Error, Result};
use crate::netlib::{reck, BeamsplitterElement, ComplexMatrix, ReckDecomposition, UnitaryMatrix};
use crate::scalar::{Real, C};

/// Haar-random `n × n` unitary.
///
/// Columns of a complex Ginibre matrix are orthonormalised with two passes of
/// Gram-Schmidt. The triangular factor then has a positive real diagonal, which
/// is the phase fix making the distribution exactly Haar.
pub fn haar_unitary<T, R>(n: usize, rng: &mut R) -> Result<UnitaryMatrix<T>>
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    check_size(n)?;
    let half = T::lit(0.5).sqrt();
    loop {
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            let re: T = rng.sample(StandardNormal);
            let im: T = rng.sample(StandardNormal);
            C::new(re * half, im * half)
        });
        if let Some(q) = orthonormalize(g) {
            return UnitaryMatrix::new(q);
        }
    }
}

/// Haar-random real orthogonal matrix (stored with zero imaginary parts).
pub fn haar_orthogonal<T, R>(n: usize, rng: &mut R) -> Result<UnitaryMatrix<T>>
where
    T: Real,
    R: Rng + ?Sized,
    StandardNormal: Distribution<T>,
{
    check_size(n)?;
    loop {
        let g = ComplexMatrix::from_fn(n, n, |_, _| C::new(rng.sample(StandardNormal), T::zero()));
        if let Some(q) = orthonormalize(g) {
            return UnitaryMatrix::new(q);
        }
    }
}

/// Random unitary built from a full triangular mesh of couplers with uniform
/// `η ∈ [0,1]`, `τ ∈ [0,2π)` and uniform output phases. Not Haar distributed.
pub fn reck_random_unitary<T, R>(n: usize, rng: &mut R) -> Result<UnitaryMatrix<T>>
where
    T: Real,
    R: Rng + ?Sized,
    StandardUniform: Distribution<T>,
{
    check_size(n)?;
    let mut elements = Vec::with_capacity(n * (n - 1) / 2);
    for (p, q) in reck::mesh_order(n) {
        let eta: T = rng.sample(StandardUniform);
        let u: T = rng.sample(StandardUniform);
        elements.push(BeamsplitterElement::new(p, q, eta, u * T::TAU())?);
    }
    let output_phases = (0..n).map(|_| rng.sample::<T, _>(StandardUniform) * T::TAU()).collect();
    ReckDecomposition { modes: n, elements, output_phases }.recompose()
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be at least 1".into()));
    }
    Ok(())
}

/// Column-wise Gram-Schmidt with re-orthogonalisation; `None` if rank deficient.
fn orthonormalize<T: Real>(mut m: ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let n = m.rows();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let mut dot = C::new(T::zero(), T::zero());
                for i in 0..n {
                    dot += m[(i, k)].conj() * m[(i, j)];
                }
                for i in 0..n {
                    let v = m[(i, k)];
                    m[(i, j)] -= v * dot;
                }
            }
        }
        let norm = (0..n).map(|i| m[(i, j)].norm_sqr()).sum::<T>().sqrt();
        if !(norm > T::epsilon()) {
            return None;
        }
        for i in 0..n {
            m[(i, j)] /= norm;
        }
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1, 2, 5, 16] {
            let u = haar_unitary::<f64, _>(n, &mut rng).unwrap();
            assert!(u.unitarity_residual().unwrap() < 1e-13);
        }
    }

    #[test]
    fn haar_f32() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary::<f32, _>(8, &mut rng).unwrap();
        assert!(u.unitarity_residual().unwrap() < 1e-5);
    }

    #[test]
    fn orthogonal_is_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let o = haar_orthogonal::<f64, _>(6, &mut rng).unwrap();
        assert!(o.is_real(0.0));
        assert!(o.unitarity_residual().unwrap() < 1e-13);
    }

    #[test]
    fn seeded_reproducible() {
        let a = haar_unitary::<f64, _>(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = haar_unitary::<f64, _>(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mesh_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = reck_random_unitary::<f64, _>(7, &mut rng).unwrap();
        assert!(u.unitarity_residual().unwrap() < 1e-12);
        assert!(haar_unitary::<f64, _>(0, &mut rng).is_err());
    }

    #[test]
    fn haar_first_moment() {
        // E|U_00|² = 1/n, E|U_00|⁴ = 2/(n(n+1)) for Haar measure
        let n = 4;
        let trials = 4000;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let (mut m2, mut m4) = (0.0, 0.0);
        for _ in 0..trials {
            let u = haar_unitary::<f64, _>(n, &mut rng).unwrap();
            let p = u[(0, 0)].norm_sqr();
            m2 += p;
            m4 += p * p;
        }
        m2 /= trials as f64;
        m4 /= trials as f64;
        assert!((m2 - 0.25).abs() < 0.01, "{m2}");
        assert!((m4 - 0.1).abs() < 0.01, "{m4}");
    }
}
