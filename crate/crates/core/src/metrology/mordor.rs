use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlib::{qft_matrix, ComplexMatrix, UnitaryMatrix};
use crate::scalar::{cis, Real, C};

/// Exclusion radius around the removable singularities of the closed form.
pub const SINGULAR_RADIUS: f64 = 1e-8;

/// Fourier interferometer with a linear phase gradient: `V · Φ(φ) · Θ(θ) · V†`
/// where `Φ_jj = e^{ijφ}` and `Θ_jj = e^{ijθ}` (zero-based `j`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MordorModel<T> {
    pub n: usize,
    pub varphi: T,
    pub theta: T,
}

impl<T: Real> MordorModel<T> {
    pub fn new(n: usize, varphi: T) -> Self {
        Self { n, varphi, theta: T::zero() }
    }

    pub fn unitary(&self) -> Result<UnitaryMatrix<T>> {
        mordor_unitary_product(self.n, self.varphi, self.theta)
    }

    pub fn coincidence(&self) -> Result<T> {
        mordor_coincidence(self.n, self.varphi + self.theta)
    }
}

pub fn mordor_unitary_product<T: Real>(n: usize, phi: T, theta: T) -> Result<UnitaryMatrix<T>> {
    let v = qft_matrix::<T>(n)?;
    let phases: Vec<C<T>> = (0..n).map(|j| cis(T::count(j) * (phi + theta))).collect();
    let inner = v.matmul(&ComplexMatrix::diagonal(&phases))?;
    UnitaryMatrix::new(inner.matmul(&v.adjoint())?)
}

/// Entrywise closed form `(1 − e^{inφ}) / (n(e^{2πi(j−k)/n} − e^{iφ}))`.
///
/// This form corresponds to the Fourier convention with `ω^{−jk}` and equals
/// `D† · Uᵀ · D` (with `D = diag(ω^j)`) for the product construction `U`;
/// every permanent and output probability agrees between the two.
pub fn mordor_unitary_closed<T: Real>(n: usize, phi: T) -> Result<UnitaryMatrix<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument("closed form needs n ≥ 2".into()));
    }
    let step = T::TAU() / T::count(n);
    let radius = T::lit(SINGULAR_RADIUS);
    for k in 0..n {
        let d = crate::netlib::wrap_phase(phi - step * T::count(k));
        if d.min(T::TAU() - d) < radius {
            return Err(Error::SingularPhase { phi: phi.to_f64().unwrap(), radius: SINGULAR_RADIUS });
        }
    }
    let numer = C::new(T::one(), T::zero()) - cis(T::count(n) * phi);
    let e = cis(phi);
    let nn = T::count(n);
    let m = ComplexMatrix::from_fn(n, n, |j, k| {
        let w = cis(step * T::count((j + n - k) % n));
        numer / ((w - e) * nn)
    });
    UnitaryMatrix::new(m)
}

/// `(a_n(j), b_n(j)) = (2j(n−j), n² − 2jn + 2j²)`.
pub fn mordor_coefficients(n: u64, j: u64) -> (u64, u64) {
    (2 * j * (n - j), n * n + 2 * j * j - 2 * j * n)
}

fn check_range(n: usize) -> Result<()> {
    if !(2..=30).contains(&n) {
        return Err(Error::InvalidArgument(format!("n = {n} outside 2..=30")));
    }
    Ok(())
}

/// `n^{−(n−1)} Π_{j=1}^{n−1} (j e^{inφ} + n − j)`.
pub fn mordor_permanent_analytic<T: Real>(n: usize, phi: T) -> Result<C<T>> {
    check_range(n)?;
    let e = cis(T::count(n) * phi);
    let nn = T::count(n);
    Ok((1..n).fold(C::new(T::one(), T::zero()), |acc, j| {
        acc * (e * T::count(j) + T::count(n - j)) / nn
    }))
}

/// Coincidence probability with cosine contrast scaled by `visibility`.
fn coincidence_with_visibility<T: Real>(n: usize, phi: T, visibility: T) -> T {
    let c = (T::count(n) * phi).cos() * visibility;
    let n2 = T::count(n * n);
    (1..n).fold(T::one(), |acc, j| {
        let (a, b) = mordor_coefficients(n as u64, j as u64);
        acc * (T::from_u64(a).unwrap() * c + T::from_u64(b).unwrap()) / n2
    })
}

/// `n^{−(2n−2)} Π_j (a_n(j) cos nφ + b_n(j))`: one photon in every output.
pub fn mordor_coincidence<T: Real>(n: usize, phi: T) -> Result<T> {
    check_range(n)?;
    Ok(coincidence_with_visibility(n, phi, T::one()))
}

/// `|∂P/∂φ| = nP|sin nφ| Σ_j |a_n(j) / (a_n(j) cos nφ + b_n(j))|`.
#[allow(non_snake_case)]
pub fn mordor_dP<T: Real>(n: usize, phi: T) -> Result<T> {
    let p = mordor_coincidence(n, phi)?;
    let c = (T::count(n) * phi).cos();
    let s: T = (1..n)
        .map(|j| {
            let (a, b) = mordor_coefficients(n as u64, j as u64);
            let a = T::from_u64(a).unwrap();
            (a / (a * c + T::from_u64(b).unwrap())).abs()
        })
        .sum();
    Ok(T::count(n) * p * (T::count(n) * phi).sin().abs() * s)
}

/// `√(3 / (2n(n+1)(n−1)))`.
pub fn mordor_delta_phi_small_angle<T: Real>(n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidArgument("n ≥ 2 required".into()));
    }
    let k = T::count(n);
    Ok((T::lit(3.0) / (T::lit(2.0) * k * (k + T::one()) * (k - T::one()))).sqrt())
}

/// Coincidence probability under Gaussian per-mode dephasing of mean-square
/// `chi_sq`: the fringe `cos nφ` is damped by `e^{−n² χ²/2}`.
pub fn dephased_coincidence<T: Real>(n: usize, phi: T, chi_sq: T) -> Result<T> {
    check_range(n)?;
    if !(chi_sq >= T::zero()) {
        return Err(Error::InvalidArgument("mean-square dephasing must be non-negative".into()));
    }
    let damp = (-T::count(n * n) * chi_sq / T::lit(2.0)).exp();
    Ok(coincidence_with_visibility(n, phi, damp))
}
