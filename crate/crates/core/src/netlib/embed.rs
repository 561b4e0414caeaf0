use crate::error::Result;
use crate::netlib::{ComplexMatrix, UnitaryMatrix};
use crate::scalar::{Real, C};

/// Real `2m × 2m` representation `[[Re U, −Im U], [Im U, Re U]]` of an
/// `m`-mode unitary; the result is orthogonal with unit determinant.
pub fn embed_su_in_so<T: Real>(u: &UnitaryMatrix<T>) -> Result<UnitaryMatrix<T>> {
    let m = u.dim();
    let real = |x: T| C::new(x, T::zero());
    let out = ComplexMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let z = u[(i % m, j % m)];
        match (i < m, j < m) {
            (true, true) | (false, false) => real(z.re),
            (true, false) => real(-z.im),
            (false, true) => real(z.im),
        }
    });
    UnitaryMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::haar_unitary;
    use crate::scalar::cis;
    use rand::SeedableRng;

    #[test]
    fn single_phase_is_rotation() {
        let th = 0.83_f64;
        let u = UnitaryMatrix::new(ComplexMatrix::diagonal(&[cis(th)])).unwrap();
        let r = embed_su_in_so(&u).unwrap();
        assert!((r[(0, 0)].re - th.cos()).abs() < 1e-15);
        assert!((r[(0, 1)].re + th.sin()).abs() < 1e-15);
        assert!((r[(1, 0)].re - th.sin()).abs() < 1e-15);
        assert!((r[(1, 1)].re - th.cos()).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_and_real() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let u = haar_unitary::<f64, _>(5, &mut rng).unwrap();
        let r = embed_su_in_so(&u).unwrap();
        assert!(r.is_real(0.0));
        assert!(r.unitarity_residual().unwrap() < 1e-12);
    }
}
