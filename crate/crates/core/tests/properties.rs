use linopt::fock::*;
use linopt::metrology::*;
use linopt::netlib::*;
use linopt::permanent::*;
use linopt::scalar::{cis, rel_diff};
use linopt::variants::*;
use linopt::{Complex64, Matrix, Unitary};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn haar(n: usize, seed: u64) -> Unitary {
    haar_unitary(n, &mut rng(seed)).unwrap()
}

fn complex_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n)
        .prop_map(move |v| Matrix::new(n, n, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap())
}

fn sized_matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(complex_matrix)
}

fn occupation(m: usize, photons: usize) -> impl Strategy<Value = OccupationVector> {
    prop::collection::vec(0..m, photons).prop_map(move |modes| {
        let mut k = vec![0; m];
        modes.into_iter().for_each(|j| k[j] += 1);
        OccupationVector(k)
    })
}

fn instance(max_m: usize, max_n: usize) -> impl Strategy<Value = (Unitary, OccupationVector)> {
    (1..=max_m, 0..=max_n, any::<u64>()).prop_flat_map(|(m, n, seed)| (Just(haar(m, seed)), occupation(m, n)))
}

fn permuted(m: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(rows[i], cols[j])])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_unitaries_are_unitary(n in 1usize..=10, seed in any::<u64>()) {
        let mut r = rng(seed);
        for u in [
            haar_unitary::<f64, _>(n, &mut r).unwrap(),
            haar_orthogonal(n, &mut r).unwrap(),
            reck_random_unitary(n, &mut r).unwrap(),
            qft_matrix(n).unwrap(),
        ] {
            prop_assert!(u.unitarity_residual().unwrap() <= 1e-10);
        }
    }

    #[test]
    fn generators_depend_only_on_seed(n in 1usize..=6, seed in any::<u64>()) {
        prop_assert_eq!(haar(n, seed), haar(n, seed));
        let a: Unitary = reck_random_unitary(n, &mut rng(seed)).unwrap();
        let b: Unitary = reck_random_unitary(n, &mut rng(seed)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn beamsplitter_blocks_conserve_energy(eta in 0.0..=1.0f64, tau in 0.0..(2.0 * PI)) {
        let e = BeamsplitterElement::new(0, 1, eta, tau).unwrap();
        let [[t, r], [r2, t2]] = e.block();
        prop_assert!((t.norm_sqr() + r.norm_sqr() - 1.0).abs() <= 1e-12);
        prop_assert!((t2.norm_sqr() + r2.norm_sqr() - 1.0).abs() <= 1e-12);
        prop_assert!((t * r2.conj() + r * t2.conj()).norm() <= 1e-12);
    }

    #[test]
    fn qft_row_sums(n in 1usize..=16) {
        let q = qft_matrix::<f64>(n).unwrap();
        for i in 0..n {
            let s: Complex64 = q.row(i).iter().sum();
            let expected = if i == 0 { (n as f64).sqrt() } else { 0.0 };
            prop_assert!((s - expected).norm() <= 1e-12, "row {} sums to {}", i, s);
        }
    }

    #[test]
    fn reck_round_trip(n in 1usize..=8, seed in any::<u64>()) {
        let u = haar(n, seed);
        let d = reck_decompose(&u).unwrap();
        prop_assert!(d.elements.len() <= n * (n - 1) / 2);
        prop_assert!(d.recompose().unwrap().max_abs_diff(&u).unwrap() <= 1e-10);
    }

    #[test]
    fn embedding_is_a_homomorphism(m in 1usize..=4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (u, v) = (haar(m, s1), haar(m, s2));
        let lhs = embed_su_in_so(&u.compose(&v).unwrap()).unwrap();
        let rhs = embed_su_in_so(&u).unwrap().matmul(&embed_su_in_so(&v).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10);
    }

    #[test]
    fn permanent_algorithms_agree(a in sized_matrix(7)) {
        let d = permanent_definitional(&a).unwrap();
        prop_assert!(rel_diff(d, permanent_laplace(&a).unwrap()) <= 1e-10);
        prop_assert!(rel_diff(d, permanent_fast(&a).unwrap()) <= 1e-10);
    }

    #[test]
    fn permanent_ignores_row_and_column_order(a in sized_matrix(8), seed in any::<u64>()) {
        let n = a.rows();
        let mut r = rng(seed);
        let (mut rows, mut cols): (Vec<usize>, Vec<usize>) = ((0..n).collect(), (0..n).collect());
        rows.shuffle(&mut r);
        cols.shuffle(&mut r);
        let p = permanent_fast(&a).unwrap();
        prop_assert!(rel_diff(p, permanent_fast(&permuted(&a, &rows, &cols)).unwrap()) <= 1e-12);
    }

    #[test]
    fn permanent_is_linear_in_each_row(a in sized_matrix(8), row in any::<prop::sample::Index>(), c in (-2.0..2.0f64, -2.0..2.0f64)) {
        let c = Complex64::new(c.0, c.1);
        let i = row.index(a.rows());
        let scaled = Matrix::from_fn(a.rows(), a.cols(), |r, j| if r == i { a[(r, j)] * c } else { a[(r, j)] });
        let p = permanent_fast(&a).unwrap();
        prop_assert!(rel_diff(permanent_fast(&scaled).unwrap(), p * c) <= 1e-12 || (p * c).norm() < 1e-300);
    }

    #[test]
    fn permanent_commutes_with_conjugation(a in sized_matrix(8)) {
        let conj = permanent_fast(&a.map(|z| z.conj())).unwrap();
        prop_assert!(rel_diff(conj, permanent_fast(&a).unwrap().conj()) <= 1e-12);
    }

    #[test]
    fn normalization((u, k) in instance(6, 3)) {
        let d = output_distribution(&u, &k).unwrap();
        prop_assert!((d.total_mass() - 1.0).abs() <= 1e-9);
        prop_assert_eq!(d.entries().len() as u128, configuration_count(u.dim(), k.total()));
    }

    #[test]
    fn amplitudes_match_polynomial_oracle((u, k) in instance(5, 3)) {
        let poly = polynomial_oracle(&u, &k).unwrap();
        for s in enumerate_configurations(u.dim(), k.total()).unwrap() {
            prop_assert!((amplitude(&u, &k, &s).unwrap() - poly.amplitude(&k, &s)).norm() <= 1e-10);
        }
    }

    #[test]
    fn identity_network_is_a_point_mass(k in (1usize..=6, 0usize..=4).prop_flat_map(|(m, n)| occupation(m, n))) {
        let d = output_distribution(&Unitary::identity(k.modes()), &k).unwrap();
        prop_assert_eq!(d.get(&k), 1.0);
        prop_assert!(d.entries().iter().all(|(s, p)| s == &k || *p == 0.0));
    }

    #[test]
    fn mode_relabelling_permutes_the_distribution((u, k) in instance(5, 3), seed in any::<u64>()) {
        let m = u.dim();
        let mut pi: Vec<usize> = (0..m).collect();
        pi.shuffle(&mut rng(seed));
        let relabel = |s: &OccupationVector| OccupationVector((0..m).map(|i| s.counts()[pi[i]]).collect());
        let v = Unitary::new(permuted(u.matrix(), &pi, &pi)).unwrap();
        let (d, e) = (output_distribution(&u, &k).unwrap(), output_distribution(&v, &relabel(&k)).unwrap());
        for (s, p) in d.entries() {
            prop_assert!((e.get(&relabel(s)) - p).abs() <= 1e-14);
        }
    }

    #[test]
    fn total_variation_is_a_metric((u, k) in instance(4, 3), seed in any::<u64>()) {
        let d = output_distribution(&u, &k).unwrap();
        let v = haar(u.dim(), seed);
        let e = output_distribution(&v, &k).unwrap();
        let tv = total_variation(&d, &e).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&tv));
        prop_assert_eq!(tv, total_variation(&e, &d).unwrap());
        prop_assert_eq!(total_variation(&d, &d).unwrap(), 0.0);
    }

    #[test]
    fn mordor_coefficient_identity(n in 2u64..=30, j in any::<prop::sample::Index>()) {
        let j = 1 + j.index(n as usize - 1) as u64;
        let (a, b) = mordor_coefficients(n, j);
        prop_assert_eq!(a + b, n * n);
    }

    #[test]
    fn coincidence_is_squared_permanent(n in 2usize..=12, phi in -PI..PI) {
        let p = mordor_permanent_analytic(n, phi).unwrap();
        prop_assert!((p.norm_sqr() - mordor_coincidence(n, phi).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn coincidences_are_periodic(n in 2usize..=12, phi in -PI..PI, k in -3i32..=3) {
        let shift = 2.0 * PI * k as f64;
        let m = (mordor_coincidence(n, phi).unwrap() - mordor_coincidence(n, phi + shift / n as f64).unwrap()).abs();
        let q = (qufti_coincidence(n, phi).unwrap() - qufti_coincidence(n, phi + shift).unwrap()).abs();
        prop_assert!(m <= 1e-12 && q <= 1e-12, "mordor {} qufti {}", m, q);
    }

    #[test]
    fn mordor_derivative_matches_finite_differences(n in 2usize..=10, phi in -3.0..3.0f64) {
        prop_assume!((n as f64 * phi).sin().abs() > 0.1);
        let h = 1e-6;
        let fd = (mordor_coincidence(n, phi + h).unwrap() - mordor_coincidence(n, phi - h).unwrap()) / (2.0 * h);
        // mordor_dP is the magnitude of the slope
        let exact = mordor_dP(n, phi).unwrap();
        prop_assume!(exact > 1e-3);
        prop_assert!(((fd.abs() - exact) / exact).abs() <= 1e-5, "fd {} exact {}", fd, exact);
    }

    #[test]
    fn shot_noise_never_beats_heisenberg(n in 2usize..=200) {
        for model in [BaselineModel::QuftiGlobal, BaselineModel::MordorGradient, BaselineModel::Orc] {
            let b = snl_hl_baselines::<f64>(n, model).unwrap();
            prop_assert!(b.snl >= b.hl);
        }
    }

    #[test]
    fn coherent_tail_is_bounded(re in -2.0..2.0f64, im in -2.0..2.0f64, cutoff in 0usize..=30) {
        let alpha = Complex64::new(re, im);
        let state = coherent_coefficients(alpha, cutoff).unwrap();
        let x = alpha.norm_sqr();
        let first = (-x).exp() * x.powi(cutoff as i32 + 1) / (1..=cutoff as u64 + 1).map(|k| k as f64).product::<f64>();
        // the first omitted Poisson term bounds the tail from below; a geometric
        // majorant bounds it from above once the terms decrease
        prop_assert!(state.norm_deficit >= first * (1.0 - 1e-9) - 1e-15);
        let ratio = x / (cutoff as f64 + 2.0);
        if ratio < 1.0 {
            prop_assert!(state.norm_deficit <= first / (1.0 - ratio) * (1.0 + 1e-9) + 1e-15);
        }
    }

    #[test]
    fn squeezed_vacuum_is_even(r in 0.0..1.5f64, theta in 0.0..(2.0 * PI), cutoff in 0usize..=40) {
        let s = squeezed_vacuum_coefficients(SqueezingParameter::new(r, theta).unwrap(), cutoff);
        prop_assert!(s.coefficients.iter().skip(1).step_by(2).all(|c| *c == Complex64::new(0.0, 0.0)));
        let total: f64 = s.probabilities().iter().sum();
        prop_assert!((total + s.norm_deficit - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn displacement_preserves_total_intensity(m in 1usize..=8, seed in any::<u64>(), phases in prop::collection::vec((0.0..2.0f64, 0.0..(2.0 * PI)), 8)) {
        let alphas: Vec<Complex64> = phases[..m].iter().map(|&(r, t)| cis(t) * r).collect();
        let out = displace_through_network(&haar(m, seed), &alphas).unwrap();
        let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        prop_assert!((norm(&out) - norm(&alphas)).abs() <= 1e-12 * norm(&alphas).max(1.0));
    }

    #[test]
    fn single_photon_parity_is_squeezing_independent(eta in 0.0..=1.0f64, r in 0.0..0.4f64) {
        let o = beamsplitter_unitary(&BeamsplitterElement::new(0, 1, eta, 0.0).unwrap(), 2).unwrap();
        let k = OccupationVector(vec![1, 0]);
        let bs = output_distribution(&o, &k).unwrap();
        let reference = ParityDistribution::from_occupations(bs.entries().iter().map(|(s, p)| (s, *p)));
        let d = passv_parity_distribution(&o, 1, SqueezingParameter::real(r).unwrap(), 20, PassvKind::Added).unwrap();
        prop_assert!(d.max_abs_diff(&reference) <= 1e-6);
    }
}

#[test]
fn all_ones_permanent_is_factorial() {
    let mut fact = 1.0f64;
    for n in 1..=12 {
        fact *= n as f64;
        let j = Matrix::from_fn(n, n, |_, _| Complex64::new(1.0, 0.0));
        assert_eq!(permanent_fast(&j).unwrap(), Complex64::new(fact, 0.0), "n = {n}");
    }
}

#[test]
fn haar_second_moment() {
    let mut r = rng(2024);
    let draws = 10_000;
    let xs: Vec<f64> = (0..draws).map(|_| haar_unitary::<f64, _>(6, &mut r).unwrap()[(0, 0)].norm_sqr()).collect();
    let mean = xs.iter().sum::<f64>() / draws as f64;
    // |U_11|² ~ Beta(1, 5): variance 5 / (36 · 7)
    let sigma = (5.0 / 252.0 / draws as f64).sqrt();
    assert!((mean - 1.0 / 6.0).abs() <= 3.0 * sigma, "mean {mean}");
}

#[test]
fn sampler_matches_mzi_distribution() {
    for (i, phi) in [0.3, 1.1, 2.4].into_iter().enumerate() {
        let u = mzi_matrix(phi).unwrap();
        let exact = output_distribution(&u, &OccupationVector(vec![1, 1])).unwrap();
        let counts = sample_counts(&exact, 100_000, &mut rng(i as u64));
        let empirical: f64 = exact
            .entries()
            .iter()
            .map(|(s, p)| (counts.get(s).copied().unwrap_or(0) as f64 / 1e5 - p).abs())
            .sum::<f64>()
            / 2.0;
        assert!(empirical <= 0.02, "phi = {phi}: tv = {empirical}");
    }
}

#[test]
fn single_precision_pipeline() {
    let u: linopt::Unitary32 = haar_unitary(4, &mut rng(3)).unwrap();
    let d = output_distribution(&u, &OccupationVector(vec![1, 1, 0, 1])).unwrap();
    assert!((d.total_mass() - 1.0).abs() <= 1e-4);
}

#[test]
fn reck_random_against_haar_statistics() {
    // recorded for comparison only; no equality of measures is asserted
    let draws = 5000;
    let bins = 10;
    let mut r = rng(77);
    let mut hist = |make: &mut dyn FnMut(&mut ChaCha8Rng) -> Unitary| {
        let mut h = vec![0usize; bins];
        let mut mean = 0.0;
        for _ in 0..draws {
            let x = make(&mut r)[(0, 0)].norm_sqr();
            mean += x / draws as f64;
            h[((x * bins as f64) as usize).min(bins - 1)] += 1;
        }
        (h, mean)
    };
    let (haar_h, haar_mean) = hist(&mut |r| haar_unitary(4, r).unwrap());
    let (reck_h, reck_mean) = hist(&mut |r| reck_random_unitary(4, r).unwrap());
    println!("|U_11|^2, n = 4, {draws} draws, {bins} bins on [0,1]");
    println!("haar mean {haar_mean:.4} {haar_h:?}");
    println!("reck mean {reck_mean:.4} {reck_h:?}");
    assert_eq!(haar_h.iter().sum::<usize>(), draws);
    assert_eq!(reck_h.iter().sum::<usize>(), draws);
}
