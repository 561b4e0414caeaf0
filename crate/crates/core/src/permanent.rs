//! Matrix permanents.
//!
//! Three independent evaluators are provided so that each can serve as an
//! oracle for the others: the permutation sum, cofactor expansion along the
//! first row, and Glynn's signed-sum formula walked in Gray-code order.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::netlib::ComplexMatrix;
use crate::scalar::{Real, C};

pub const DEFINITIONAL_MAX: usize = 9;
pub const LAPLACE_MAX: usize = 11;
pub const FAST_MAX: usize = 30;

/// Below this size the Gray-code walk runs as a single chunk.
const PARALLEL_MIN: usize = 14;
/// The sign-vector space is always split into this many chunks once it is
/// large enough, regardless of how many threads execute them.
const CHUNK_BITS: usize = 6;

fn zero<T: Real>() -> C<T> {
    C::new(T::zero(), T::zero())
}

fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::Guard { what: "permanent size", size: n as u128, limit: limit as u128 });
    }
    Ok(())
}

/// `Σ_σ Π_i a_{i,σ(i)}` over all `n!` permutations (Heap's algorithm).
pub fn permanent_definitional<T: Real>(a: &ComplexMatrix<T>) -> Result<C<T>> {
    let n = a.ensure_square()?;
    guard(n, DEFINITIONAL_MAX)?;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let term = |p: &[usize]| p.iter().enumerate().fold(C::new(T::one(), T::zero()), |acc, (i, &j)| acc * a[(i, j)]);
    let mut total = term(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            total += term(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// Cofactor expansion along the first row, all signs positive.
pub fn permanent_laplace<T: Real>(a: &ComplexMatrix<T>) -> Result<C<T>> {
    let n = a.ensure_square()?;
    guard(n, LAPLACE_MAX)?;
    let mut cols: Vec<usize> = (0..n).collect();
    Ok(laplace_rec(a, 0, &mut cols))
}

fn laplace_rec<T: Real>(a: &ComplexMatrix<T>, row: usize, cols: &mut Vec<usize>) -> C<T> {
    if cols.len() == 1 {
        return a[(row, cols[0])];
    }
    let mut acc = zero();
    for k in 0..cols.len() {
        let c = cols.remove(k);
        let entry = a[(row, c)];
        if entry.re != T::zero() || entry.im != T::zero() {
            acc += entry * laplace_rec(a, row + 1, cols);
        }
        cols.insert(k, c);
    }
    acc
}

/// Glynn's formula `2^{1−n} Σ_δ (Π δ) Π_j Σ_i δ_i a_ij` with `δ_0 = +1`,
/// enumerated in Gray-code order so each step updates the column sums in
/// `O(n)`. Total cost `O(2^{n−1} n)`.
///
/// The result is bit-for-bit independent of the rayon thread count: the sign
/// space is cut into a fixed number of chunks and the partial sums are added
/// in chunk order.
pub fn permanent_fast<T: Real>(a: &ComplexMatrix<T>) -> Result<C<T>> {
    let n = a.ensure_square()?;
    guard(n, FAST_MAX)?;
    if n == 1 {
        return Ok(a[(0, 0)]);
    }
    let free = n - 1; // δ_1 … δ_{n−1} flip, δ_0 stays +1
    let total: u64 = 1u64 << free;
    let chunk_bits = if n >= PARALLEL_MIN { CHUNK_BITS.min(free) } else { 0 };
    let chunks = 1u64 << chunk_bits;
    let len = total / chunks;
    let partials: Vec<C<T>> = (0..chunks).into_par_iter().map(|c| glynn_chunk(a, c * len, len)).collect();
    let sum = partials.into_iter().fold(zero(), |acc, x| acc + x);
    let scale = T::lit(0.5).powi(free as i32);
    Ok(sum * scale)
}

/// Sums Glynn terms for Gray-code indices `start .. start + len`.
fn glynn_chunk<T: Real>(a: &ComplexMatrix<T>, start: u64, len: u64) -> C<T> {
    let n = a.rows();
    let gray = start ^ (start >> 1);
    // bit b of the Gray code set means δ_{b+1} = −1
    let mut neg = vec![false; n];
    for b in 0..(n - 1) {
        neg[b + 1] = (gray >> b) & 1 == 1;
    }
    let mut sums: Vec<C<T>> = (0..n)
        .map(|j| (0..n).fold(zero(), |acc, i| if neg[i] { acc - a[(i, j)] } else { acc + a[(i, j)] }))
        .collect();
    let mut negative = gray.count_ones() % 2 == 1;
    let mut acc = zero();
    let two = T::lit(2.0);
    for step in 0..len {
        let prod = sums.iter().fold(C::new(T::one(), T::zero()), |p, &s| p * s);
        if negative {
            acc -= prod;
        } else {
            acc += prod;
        }
        let idx = start + step + 1;
        if step + 1 == len {
            break;
        }
        let row = idx.trailing_zeros() as usize + 1;
        let was_neg = neg[row];
        neg[row] = !was_neg;
        negative = !negative;
        for (j, s) in sums.iter_mut().enumerate() {
            let d = a[(row, j)] * two;
            if was_neg {
                *s += d;
            } else {
                *s -= d;
            }
        }
    }
    acc
}

/// `U_{k,s}`: row `i` of `u` repeated `input[i]` times and column `j`
/// repeated `output[j]` times.
pub fn build_repeated_matrix<T: Real>(u: &ComplexMatrix<T>, input: &[usize], output: &[usize]) -> Result<ComplexMatrix<T>> {
    let m = u.ensure_square()?;
    for v in [input, output] {
        if v.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: v.len() });
        }
    }
    let (nin, nout): (usize, usize) = (input.iter().sum(), output.iter().sum());
    if nin != nout {
        return Err(Error::PhotonMismatch { input: nin, output: nout });
    }
    if nin == 0 {
        return Err(Error::InvalidArgument("repeated matrix of zero photons is empty".into()));
    }
    let rows: Vec<usize> = expand(input);
    let cols: Vec<usize> = expand(output);
    Ok(ComplexMatrix::from_fn(nin, nin, |i, j| u[(rows[i], cols[j])]))
}

fn expand(counts: &[usize]) -> Vec<usize> {
    counts.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat_n(i, k)).collect()
}

/// `perm(U_{k,s})` without materialising the repeated matrix.
///
/// Glynn's sum collapses over identical rows: only the number `w_i` of
/// negative signs among the copies of row `i` matters, weighted by
/// `C(k_i, w_i)`. The cost is `Π (k_i + 1)` products, and the cheaper of the
/// row and column sides is chosen. Returns 1 for the vacuum.
pub fn permanent_repeated<T: Real>(u: &ComplexMatrix<T>, input: &[usize], output: &[usize]) -> Result<C<T>> {
    let m = u.ensure_square()?;
    for v in [input, output] {
        if v.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: v.len() });
        }
    }
    let (nin, nout): (usize, usize) = (input.iter().sum(), output.iter().sum());
    if nin != nout {
        return Err(Error::PhotonMismatch { input: nin, output: nout });
    }
    if nin == 0 {
        return Ok(C::new(T::one(), T::zero()));
    }
    let cost = |k: &[usize]| k.iter().fold(1f64, |p, &x| p * (x as f64 + 1.0));
    let (rows, cols, transposed) = if cost(input) <= cost(output) { (input, output, false) } else { (output, input, true) };
    let limit = 1u128 << 40;
    if cost(rows) > limit as f64 {
        return Err(Error::Guard { what: "multiplicity sum terms", size: cost(rows) as u128, limit });
    }
    let entry = |i: usize, j: usize| if transposed { u[(j, i)] } else { u[(i, j)] };
    // fix one sign of the first occupied row class to +1
    let first = rows.iter().position(|&k| k > 0).unwrap();
    let occupied: Vec<usize> = (0..m).filter(|&i| rows[i] > 0).collect();
    let active_cols: Vec<usize> = (0..m).filter(|&j| cols[j] > 0).collect();
    let binom_rows: Vec<Vec<T>> = occupied
        .iter()
        .map(|&i| {
            let k = if i == first { rows[i] - 1 } else { rows[i] };
            binomial_row::<T>(k)
        })
        .collect();

    let mut w = vec![0usize; occupied.len()];
    let mut total = zero();
    loop {
        let mut weight = T::one();
        let mut sign_neg = false;
        for (slot, &wi) in w.iter().enumerate() {
            weight *= binom_rows[slot][wi];
            sign_neg ^= wi % 2 == 1;
        }
        let mut prod = C::new(weight, T::zero());
        for &j in &active_cols {
            let mut s = zero();
            for (slot, &i) in occupied.iter().enumerate() {
                let coeff = rows[i] as i64 - 2 * w[slot] as i64;
                if coeff != 0 {
                    s += entry(i, j) * T::from_i64(coeff).unwrap();
                }
            }
            prod *= s.powu(cols[j] as u32);
        }
        if sign_neg {
            total -= prod;
        } else {
            total += prod;
        }
        // odometer over w_i ∈ [0, k_i] (first class capped at k_i − 1)
        let mut slot = 0;
        loop {
            if slot == w.len() {
                let scale = T::lit(0.5).powi(nin as i32 - 1);
                return Ok(total * scale);
            }
            let cap = binom_rows[slot].len() - 1;
            if w[slot] < cap {
                w[slot] += 1;
                break;
            }
            w[slot] = 0;
            slot += 1;
        }
    }
}

fn binomial_row<T: Real>(k: usize) -> Vec<T> {
    let mut row = vec![T::one(); k + 1];
    for i in 1..=k {
        row[i] = row[i - 1] * T::count(k + 1 - i) / T::count(i);
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlib::{haar_unitary, qft_matrix};
    use crate::scalar::rel_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn all_ones(n: usize) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(n, n, |_, _| c(1.0, 0.0))
    }

    #[test]
    fn ones_matrix_gives_factorial() {
        let mut fact = 1.0;
        for n in 1..=9 {
            fact *= n as f64;
            let a = all_ones(n);
            assert_eq!(permanent_definitional(&a).unwrap(), c(fact, 0.0));
            assert_eq!(permanent_laplace(&a).unwrap(), c(fact, 0.0));
            assert!(rel_diff(permanent_fast(&a).unwrap(), c(fact, 0.0)) < 1e-13);
        }
    }

    #[test]
    fn two_by_two() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 0.0)]]).unwrap();
        assert_eq!(permanent_definitional(&a).unwrap(), c(10.0, 0.0));
        assert_eq!(permanent_laplace(&a).unwrap(), c(10.0, 0.0));
        assert_eq!(permanent_fast(&a).unwrap(), c(10.0, 0.0));
    }

    #[test]
    fn hom_dip_for_5050() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bs = ComplexMatrix::from_rows(&[vec![c(s, 0.0), c(0.0, s)], vec![c(0.0, s), c(s, 0.0)]]).unwrap();
        assert!(permanent_fast(&bs).unwrap().norm() < 1e-15);
        assert!(permanent_definitional(&bs).unwrap().norm() < 1e-15);
    }

    #[test]
    fn guards_and_shape() {
        assert!(matches!(permanent_definitional(&all_ones(10)), Err(Error::Guard { .. })));
        assert!(matches!(permanent_laplace(&all_ones(12)), Err(Error::Guard { .. })));
        assert!(matches!(permanent_fast(&all_ones(31)), Err(Error::Guard { .. })));
        let rect = ComplexMatrix::<f64>::zeros(2, 3);
        assert!(matches!(permanent_fast(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn fast_matches_definitional_on_haar() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..=8 {
            let u = haar_unitary::<f64, _>(n, &mut rng).unwrap();
            let d = permanent_definitional(u.matrix()).unwrap();
            let f = permanent_fast(u.matrix()).unwrap();
            let l = permanent_laplace(u.matrix()).unwrap();
            assert!(rel_diff(d, f) < 1e-12);
            assert!(rel_diff(d, l) < 1e-12);
        }
    }

    #[test]
    fn parallel_split_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let u = haar_unitary::<f64, _>(16, &mut rng).unwrap();
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = pool1.install(|| permanent_fast(u.matrix()).unwrap());
        let b = pool4.install(|| permanent_fast(u.matrix()).unwrap());
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn chunked_walk_equals_single_walk() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_unitary::<f64, _>(15, &mut rng).unwrap();
        let whole = glynn_chunk(u.matrix(), 0, 1 << 14) * 0.5f64.powi(14);
        assert!(rel_diff(whole, permanent_fast(u.matrix()).unwrap()) < 1e-13);
    }

    #[test]
    fn repeated_matrix_layout() {
        let u = ComplexMatrix::from_fn(3, 3, |i, j| c((10 * i + j) as f64, 0.0));
        let r = build_repeated_matrix(&u, &[1, 0, 3], &[2, 1, 1]).unwrap();
        assert_eq!(r.rows(), 4);
        let row0: Vec<f64> = r.row(0).iter().map(|z| z.re).collect();
        assert_eq!(row0, vec![0.0, 0.0, 1.0, 2.0]);
        for i in 1..4 {
            let row: Vec<f64> = r.row(i).iter().map(|z| z.re).collect();
            assert_eq!(row, vec![20.0, 20.0, 21.0, 22.0]);
        }
        assert!(matches!(build_repeated_matrix(&u, &[1, 0, 0], &[0, 2, 0]), Err(Error::PhotonMismatch { .. })));
    }

    #[test]
    fn multiplicity_sum_matches_expanded() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let u = haar_unitary::<f64, _>(4, &mut rng).unwrap();
        let cases: [(&[usize], &[usize]); 5] = [
            (&[1, 1, 1, 1], &[1, 1, 1, 1]),
            (&[3, 0, 1, 0], &[0, 2, 0, 2]),
            (&[0, 0, 5, 0], &[1, 1, 2, 1]),
            (&[2, 2, 2, 0], &[0, 3, 3, 0]),
            (&[1, 0, 0, 0], &[0, 0, 0, 1]),
        ];
        for (k, s) in cases {
            let direct = permanent_fast(&build_repeated_matrix(u.matrix(), k, s).unwrap()).unwrap();
            let collapsed = permanent_repeated(u.matrix(), k, s).unwrap();
            assert!(rel_diff(direct, collapsed) < 1e-12, "{k:?} {s:?}");
        }
        assert_eq!(permanent_repeated(u.matrix(), &[0; 4], &[0; 4]).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn qft_permanent_n2_vanishes() {
        let v = qft_matrix::<f64>(2).unwrap();
        assert!(permanent_fast(v.matrix()).unwrap().norm() < 1e-15);
    }
}
