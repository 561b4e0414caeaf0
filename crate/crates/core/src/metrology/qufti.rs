use crate::error::{Error, Result};
use crate::netlib::{ComplexMatrix, UnitaryMatrix};
use crate::scalar::{cis, Real, C};

/// `V · X · V†` with `X` the identity except `X_00 = e^{iφ}`; entrywise
/// `(e^{iφ} + δ_jk n − 1)/n`.
pub fn qufti_unitary<T: Real>(n: usize, phi: T) -> Result<UnitaryMatrix<T>> {
    if n < 2 {
        return Err(Error::InvalidArgument("QuFTI needs n ≥ 2".into()));
    }
    let e = cis(phi);
    let nn = T::count(n);
    let m = ComplexMatrix::from_fn(n, n, |j, k| {
        let d = if j == k { nn - T::one() } else { -T::one() };
        (e + d) / nn
    });
    UnitaryMatrix::new(m)
}

/// Permutations of `n` elements with exactly `k` fixed points,
/// `(n!/k!) Σ_{j=0}^{n−k} (−1)^j / j!`, evaluated in exact integers.
pub fn rencontres(n: u32, k: u32) -> Result<u128> {
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    if n > 30 {
        return Err(Error::Guard { what: "rencontres n", size: n as u128, limit: 30 });
    }
    // n!/(k! j!) = C(n, k) · (n−k)!/j!, all integers
    let choose = binomial(n, k);
    let m = n - k;
    let mut total: i128 = 0;
    for j in 0..=m {
        let falling: u128 = ((j + 1)..=m).map(u128::from).product();
        let term = (choose * falling) as i128;
        total += if j % 2 == 0 { term } else { -term };
    }
    Ok(total as u128)
}

fn binomial(n: u32, k: u32) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

fn check_range(n: usize) -> Result<()> {
    if !(2..=30).contains(&n) {
        return Err(Error::InvalidArgument(format!("n = {n} outside 2..=30")));
    }
    Ok(())
}

/// Returns `(F, ∂F/∂φ)` for `F = n^{−n} Σ_k D_{n,k} A^k B^{n−k}` with
/// `A = e^{iφ} + n − 1`, `B = e^{iφ} − 1`.
fn permanent_and_derivative<T: Real>(n: usize, phi: T) -> Result<(C<T>, C<T>)> {
    check_range(n)?;
    let nn = T::count(n);
    let e = cis(phi);
    let a = (e + (nn - T::one())) / nn;
    let b = (e - T::one()) / nn;
    let de = C::new(T::zero(), T::one()) * e / nn;
    let mut f = C::new(T::zero(), T::zero());
    let mut df = C::new(T::zero(), T::zero());
    for k in 0..=n {
        let d = T::from_u128(rencontres(n as u32, k as u32)?).unwrap();
        if d == T::zero() {
            continue;
        }
        let ak = a.powu(k as u32);
        let bk = b.powu((n - k) as u32);
        f += ak * bk * d;
        let mut g = C::new(T::zero(), T::zero());
        if k > 0 {
            g += a.powu(k as u32 - 1) * bk * T::count(k);
        }
        if k < n {
            g += ak * b.powu((n - k - 1) as u32) * T::count(n - k);
        }
        df += g * de * d;
    }
    Ok((f, df))
}

pub fn qufti_permanent_analytic<T: Real>(n: usize, phi: T) -> Result<C<T>> {
    permanent_and_derivative(n, phi).map(|(f, _)| f)
}

/// `|perm U|²`: one photon in each output for one photon in each input.
pub fn qufti_coincidence<T: Real>(n: usize, phi: T) -> Result<T> {
    qufti_permanent_analytic(n, phi).map(|f| f.norm_sqr())
}

/// Analytic `∂P/∂φ = 2 Re(F* ∂F/∂φ)`.
#[allow(non_snake_case)]
pub fn qufti_dP<T: Real>(n: usize, phi: T) -> Result<T> {
    let (f, df) = permanent_and_derivative(n, phi)?;
    Ok(T::lit(2.0) * (f.conj() * df).re)
}

/// Small-angle limit `1/(2√2 √((n−1)/n))`.
pub fn qufti_delta_phi<T: Real>(n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::InvalidArgument("n ≥ 2 required".into()));
    }
    let k = T::count(n);
    Ok(T::one() / (T::lit(8.0).sqrt() * ((k - T::one()) / k).sqrt()))
}
