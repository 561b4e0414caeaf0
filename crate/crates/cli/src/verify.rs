use std::path::PathBuf;

use clap::{Args, ValueEnum};
use linopt::fock::{output_distribution, OccupationVector};
use linopt::metrology::{
    mordor_coincidence, mordor_permanent_analytic, mordor_unitary_product, qufti_permanent_analytic, qufti_unitary,
};
use linopt::netlib::{beamsplitter_unitary, BeamsplitterElement, ComplexMatrix};
use linopt::permanent::{permanent_definitional, permanent_fast, permanent_laplace};
use linopt::scalar::{rel_diff, rel_diff_real};
use linopt::variants::{
    pacs_postselection, passv_parity_distribution, ParityDistribution, PassvKind, SqueezingParameter,
};
use linopt::{Complex64, Matrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::output::{emit, Format, Meta};
use crate::{params, CliError, RunConfig};

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Permanents,
    Mordor,
    Qufti,
    Passv,
    Pacs,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Largest matrix size exercised (suite default when absent)
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Random matrices for the permanents suite
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Extra permanent cases: {"cases": [{"name", "matrix", "permanent": [re, im]}]}
    #[arg(long)]
    pub fixture: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Case {
    name: String,
    n: usize,
    phi: Option<f64>,
    analytic: serde_json::Value,
    numeric: serde_json::Value,
    rel_err: f64,
    tolerance: f64,
}

impl Case {
    fn passed(&self) -> bool {
        self.rel_err <= self.tolerance
    }
}

fn cpx(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

#[derive(Deserialize)]
struct Fixture {
    cases: Vec<FixtureCase>,
}

#[derive(Deserialize)]
struct FixtureCase {
    name: String,
    matrix: Matrix,
    permanent: [f64; 2],
}

fn cap(max_n: Option<usize>, default: usize, hard: usize) -> Result<usize, CliError> {
    let n = max_n.unwrap_or(default);
    if !(2..=hard).contains(&n) {
        return Err(CliError::usage(format!("--max-n must lie in 2..={hard}")));
    }
    Ok(n)
}

fn phi_grid() -> impl Iterator<Item = f64> {
    (0..25).map(|k| -3.0 + 6.0 * k as f64 / 24.0 + 0.013)
}

fn permanents(rc: &RunConfig, a: &VerifyArgs, cases: &mut Vec<Case>) -> Result<(), CliError> {
    let max_n = cap(a.max_n, 7, 9)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rc.seed);
    for t in 0..a.trials {
        let n = rng.random_range(2..=max_n);
        let m = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let d = permanent_definitional(&m)?;
        let l = permanent_laplace(&m)?;
        let f = permanent_fast(&m)?;
        let err = rel_diff(d, l).max(rel_diff(d, f));
        cases.push(Case { name: format!("random-{t}"), n, phi: None, analytic: cpx(d), numeric: cpx(f), rel_err: err, tolerance: 1e-10 });
    }
    if let Some(path) = &a.fixture {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read fixture: {e}")))?;
        let fx: Fixture = serde_json::from_str(&text).map_err(|e| CliError::usage(format!("malformed fixture: {e}")))?;
        for c in fx.cases {
            let n = c.matrix.ensure_square()?;
            let claimed = Complex64::new(c.permanent[0], c.permanent[1]);
            let f = permanent_fast(&c.matrix)?;
            let mut err = rel_diff(claimed, f);
            if n <= 9 {
                err = err.max(rel_diff(claimed, permanent_definitional(&c.matrix)?));
            }
            cases.push(Case { name: c.name, n, phi: None, analytic: cpx(claimed), numeric: cpx(f), rel_err: err, tolerance: 1e-10 });
        }
    }
    Ok(())
}

fn mordor(a: &VerifyArgs, cases: &mut Vec<Case>) -> Result<(), CliError> {
    let max_n = cap(a.max_n, 12, 16)?;
    for n in 2..=max_n {
        for phi in phi_grid() {
            let analytic = mordor_permanent_analytic(n, phi)?;
            let numeric = permanent_fast(mordor_unitary_product(n, phi, 0.0)?.matrix())?;
            cases.push(Case {
                name: format!("mordor-perm-n{n}"),
                n,
                phi: Some(phi),
                analytic: cpx(analytic),
                numeric: cpx(numeric),
                rel_err: rel_diff(analytic, numeric),
                tolerance: 1e-9,
            });
            let p = mordor_coincidence(n, phi)?;
            cases.push(Case {
                name: format!("mordor-coincidence-n{n}"),
                n,
                phi: Some(phi),
                analytic: json!(p),
                numeric: json!(analytic.norm_sqr()),
                rel_err: rel_diff_real(p, analytic.norm_sqr()),
                tolerance: 1e-12,
            });
        }
    }
    Ok(())
}

fn qufti(a: &VerifyArgs, cases: &mut Vec<Case>) -> Result<(), CliError> {
    let max_n = cap(a.max_n, 12, 16)?;
    for n in 2..=max_n {
        for phi in phi_grid() {
            let analytic = qufti_permanent_analytic(n, phi)?;
            let numeric = permanent_fast(qufti_unitary(n, phi)?.matrix())?;
            cases.push(Case {
                name: format!("qufti-perm-n{n}"),
                n,
                phi: Some(phi),
                analytic: cpx(analytic),
                numeric: cpx(numeric),
                rel_err: rel_diff(analytic, numeric),
                tolerance: 1e-9,
            });
        }
    }
    Ok(())
}

fn passv(cases: &mut Vec<Case>) -> Result<(), CliError> {
    for eta in [0.3, 0.5, 0.8] {
        let o = beamsplitter_unitary(&BeamsplitterElement::new(0, 1, eta, 0.0)?, 2)?;
        let bs = output_distribution(&o, &OccupationVector(vec![1, 0]))?;
        let reference = ParityDistribution::from_occupations(bs.entries().iter().map(|(s, p)| (s, *p)));
        for r in [0.0, 0.2, 0.4] {
            let d = passv_parity_distribution(&o, 1, SqueezingParameter::real(r)?, 20, PassvKind::Added)?;
            cases.push(Case {
                name: format!("passv-eta{eta}-r{r}"),
                n: 1,
                phi: None,
                analytic: serde_json::to_value(&reference).unwrap(),
                numeric: serde_json::to_value(&d).unwrap(),
                rel_err: d.max_abs_diff(&reference),
                tolerance: if r == 0.0 { 1e-10 } else { 1e-6 },
            });
        }
    }
    Ok(())
}

fn pacs(cases: &mut Vec<Case>) -> Result<(), CliError> {
    for n in 1..=20u64 {
        let x = BigRational::new(BigInt::from(3), BigInt::from(7));
        let mut total = BigRational::from_integer(BigInt::from(0));
        for i in 0..=n {
            total += pacs_postselection(n, &x, i)?;
        }
        let exact = total == BigRational::from_integer(BigInt::from(1));
        cases.push(Case {
            name: format!("pacs-sum-n{n}"),
            n: n as usize,
            phi: None,
            analytic: json!("1"),
            numeric: json!(total.to_string()),
            rel_err: if exact { 0.0 } else { 1.0 },
            tolerance: 0.0,
        });
    }
    let n = 1_000_000u64;
    let pn = pacs_postselection(n, &(1.0 / n as f64), n)?;
    let inv_e = (-1f64).exp();
    cases.push(Case { name: "pacs-limit-inverse-e".into(), n: n as usize, phi: None, analytic: json!(inv_e), numeric: json!(pn), rel_err: (pn - inv_e).abs(), tolerance: 1e-5 });
    let p0 = pacs_postselection(n, &((n * n) as f64), 0)?;
    cases.push(Case { name: "pacs-limit-one".into(), n: n as usize, phi: None, analytic: json!(1.0), numeric: json!(p0), rel_err: (p0 - 1.0).abs(), tolerance: 1e-5 });
    Ok(())
}

pub fn verify(rc: &RunConfig, a: &VerifyArgs) -> Result<(), CliError> {
    let mut cases = Vec::new();
    match a.suite {
        Suite::Permanents => permanents(rc, a, &mut cases)?,
        Suite::Mordor => mordor(a, &mut cases)?,
        Suite::Qufti => qufti(a, &mut cases)?,
        Suite::Passv => passv(&mut cases)?,
        Suite::Pacs => pacs(&mut cases)?,
    }
    let max_residual = cases.iter().map(|c| c.rel_err).fold(0.0, f64::max);
    let failures: Vec<&str> = cases.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let meta = Meta { subcommand: "verify", params: params(a), seed: rc.seed };
    let body = match rc.format.unwrap_or(Format::Json) {
        Format::Json => meta.json_document(json!({
            "suite": a.suite,
            "cases": cases,
            "max_residual": max_residual,
            "failures": failures,
            "passed": failures.is_empty(),
        })),
        Format::Csv => {
            let mut s = meta.csv_header() + "name,n,phi,rel_err,tolerance,passed\n";
            for c in &cases {
                let phi = c.phi.map(crate::output::num).unwrap_or_default();
                s.push_str(&format!("{},{},{},{},{},{}\n", c.name, c.n, phi, crate::output::num(c.rel_err), crate::output::num(c.tolerance), c.passed()));
            }
            s
        }
    };
    emit(rc.out.as_ref(), &body)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::verification(format!("{} case(s) out of tolerance, first: {}", failures.len(), failures[0])))
    }
}
