use clap::Args;
use linopt::fock::{output_distribution, sample as draw, validate_bs_instance, OccupationVector};
use linopt::metrology::{
    error_propagation, mordor_dP, mordor_delta_phi_small_angle, qufti_dP, qufti_delta_phi, snl_hl_baselines,
    strategy_sensitivity, BaselineModel, PhaseStrategy, SensitivityFlag, StrategyKind,
};
use linopt::netlib::{embed_su_in_so, reck_decompose, MatrixRecord};
use linopt::permanent::permanent_fast;
use linopt::variants::{pacs_postselection, pacs_regime, spacs_wigner_grid};
use linopt::{Complex64, Unitary};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::output::{emit, num, Format, Meta};
use crate::source::{load_matrix, parse_counts};
use crate::{params, CliError, RunConfig};

const SWEEP_MAX_N: usize = 20;

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    /// Preset or JSON matrix file
    #[arg(long)]
    pub matrix: String,
    /// Input occupation, e.g. 1,1,0
    #[arg(long)]
    pub input: String,
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct DistributionArgs {
    #[arg(long)]
    pub matrix: String,
    #[arg(long)]
    pub input: String,
}

#[derive(Args, Debug, Serialize)]
pub struct SensitivityArgs {
    /// mordor, qufti, or strategy:<constant|sublinear|linear|quadratic|exponential|delta|gradient>
    #[arg(long)]
    pub family: String,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub phi: f64,
    /// qufti_global, mordor_gradient or orc (default depends on the family)
    #[arg(long)]
    pub baseline: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct WignerArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha_im: f64,
    #[arg(long, default_value_t = 3.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 61)]
    pub steps: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct PacsArgs {
    #[arg(long)]
    pub n: u64,
    /// Comma-separated intensities; defaults to a log sweep from 1/n² to n²
    #[arg(long)]
    pub alpha_sq: Option<String>,
    #[arg(long, default_value_t = 41)]
    pub points: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct BaselinesArgs {
    #[arg(long, default_value = "orc")]
    pub model: String,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 10)]
    pub n_max: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct MatrixArgs {
    #[arg(long)]
    pub matrix: String,
}

fn meta<'a, T: Serialize>(name: &'a str, args: &T, rc: &RunConfig) -> Meta<'a> {
    let mut p = params(args);
    p["strict"] = json!(rc.strict);
    Meta { subcommand: name, params: p, seed: rc.seed }
}

fn load_input(matrix: &str, input: &str) -> Result<(Unitary, OccupationVector), CliError> {
    let k = parse_counts(input)?;
    let u = load_matrix(matrix, Some(k.len()))?;
    if u.dim() != k.len() {
        return Err(CliError::usage(format!("input has {} modes but the matrix has {}", k.len(), u.dim())));
    }
    Ok((u, OccupationVector(k)))
}

fn check_instance(rc: &RunConfig, m: usize, n: usize) -> Result<(), CliError> {
    if rc.strict {
        let v = validate_bs_instance(m, n, true);
        if !v.passes() {
            return Err(CliError::usage(format!(
                "instance m = {m}, n = {n} fails strict validation (m ≥ n²: {}, n ≤ m^(1/6): {})",
                v.birthday_ok,
                v.hiding_ok.unwrap_or(false)
            )));
        }
    }
    Ok(())
}

pub fn sample(rc: &RunConfig, a: &SampleArgs) -> Result<(), CliError> {
    let (u, k) = load_input(&a.matrix, &a.input)?;
    check_instance(rc, u.dim(), k.total())?;
    let dist = output_distribution(&u, &k)?;
    let draws = draw(&dist, a.count, &mut ChaCha8Rng::seed_from_u64(rc.seed));
    let m = meta("sample", a, rc);
    let body = match rc.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = m.csv_header();
            for d in &draws {
                let row: Vec<String> = d.counts().iter().map(usize::to_string).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => m.json_document(json!(draws)),
    };
    emit(rc.out.as_ref(), &body)
}

pub fn distribution(rc: &RunConfig, a: &DistributionArgs) -> Result<(), CliError> {
    let (u, k) = load_input(&a.matrix, &a.input)?;
    check_instance(rc, u.dim(), k.total())?;
    let dist = output_distribution(&u, &k)?;
    let m = meta("distribution", a, rc);
    let body = match rc.format.unwrap_or(Format::Json) {
        Format::Csv => m.csv_header() + &dist.to_csv(),
        Format::Json => m.json_document(serde_json::to_value(&dist).unwrap()),
    };
    emit(rc.out.as_ref(), &body)
}

#[derive(Serialize)]
struct SweepRow {
    n: usize,
    phi: f64,
    #[serde(rename = "P")]
    p: f64,
    #[serde(rename = "dP")]
    dp: f64,
    delta_phi: f64,
    snl: f64,
    hl: f64,
    delta_phi_closed: Option<f64>,
    sub_shotnoise: Option<bool>,
    flag: SensitivityFlag,
}

enum Family {
    Mordor,
    Qufti,
    Strategy(StrategyKind),
}

fn parse_family(s: &str) -> Result<Family, CliError> {
    match s.split_once(':') {
        None if s == "mordor" => Ok(Family::Mordor),
        None if s == "qufti" => Ok(Family::Qufti),
        Some(("strategy", name)) => Ok(Family::Strategy(name.parse()?)),
        _ => Err(CliError::usage(format!("unknown family '{s}'"))),
    }
}

fn analytic_row(n: usize, phi: f64, p: f64, dp: f64, closed: f64, b: BaselineModel) -> Result<SweepRow, CliError> {
    let base = snl_hl_baselines::<f64>(n, b)?;
    let (delta_phi, flag) = match error_propagation(p, dp, 1) {
        Ok(e) if e.at_boundary => (e.delta_phi, SensitivityFlag::Boundary),
        Ok(e) => (e.delta_phi, SensitivityFlag::Ok),
        Err(linopt::Error::UndefinedSensitivity) => (f64::INFINITY, SensitivityFlag::Undefined),
        Err(e) => return Err(e.into()),
    };
    Ok(SweepRow {
        n,
        phi,
        p,
        dp,
        delta_phi,
        snl: base.snl,
        hl: base.hl,
        delta_phi_closed: Some(closed),
        sub_shotnoise: Some(closed < base.snl),
        flag,
    })
}

pub fn sensitivity(rc: &RunConfig, a: &SensitivityArgs) -> Result<(), CliError> {
    let family = parse_family(&a.family)?;
    if a.n_min < 2 || a.n_min > a.n_max || a.n_max > SWEEP_MAX_N {
        return Err(CliError::usage(format!("n range must satisfy 2 ≤ n-min ≤ n-max ≤ {SWEEP_MAX_N}")));
    }
    let baseline: BaselineModel = match &a.baseline {
        Some(s) => s.parse()?,
        None if matches!(family, Family::Mordor) => BaselineModel::MordorGradient,
        None => BaselineModel::QuftiGlobal,
    };
    let phi = a.phi;
    let mut rows = Vec::new();
    for n in a.n_min..=a.n_max {
        let row = match family {
            Family::Mordor => {
                let u = linopt::metrology::mordor_unitary_product(n, phi, 0.0)?;
                let p = permanent_fast(&u)?.norm_sqr();
                let dp = mordor_dP(n, phi)?;
                analytic_row(n, phi, p, dp, mordor_delta_phi_small_angle(n)?, baseline)?
            }
            Family::Qufti => {
                let u = linopt::metrology::qufti_unitary(n, phi)?;
                let p = permanent_fast(&u)?.norm_sqr();
                analytic_row(n, phi, p, qufti_dP(n, phi)?, qufti_delta_phi(n)?, baseline)?
            }
            Family::Strategy(kind) => {
                let r = strategy_sensitivity(n, &PhaseStrategy::named(kind, n)?, phi)?;
                let base = snl_hl_baselines::<f64>(n, baseline)?;
                let closed = (kind == StrategyKind::Delta).then(|| qufti_delta_phi(n)).transpose()?;
                SweepRow {
                    n,
                    phi,
                    p: r.p,
                    dp: r.dp_dphi,
                    delta_phi: r.delta_phi,
                    snl: base.snl,
                    hl: base.hl,
                    delta_phi_closed: closed,
                    sub_shotnoise: (r.flag == SensitivityFlag::Ok).then_some(r.delta_phi < base.snl),
                    flag: r.flag,
                }
            }
        };
        rows.push(row);
    }
    let m = meta("sensitivity", a, rc);
    let body = match rc.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = m.csv_header();
            s.push_str("n,phi,P,dP,delta_phi,snl,hl,delta_phi_closed,sub_shotnoise,flag\n");
            let opt = |x: Option<String>| x.unwrap_or_default();
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.n,
                    num(r.phi),
                    num(r.p),
                    num(r.dp),
                    num(r.delta_phi),
                    num(r.snl),
                    num(r.hl),
                    opt(r.delta_phi_closed.map(num)),
                    opt(r.sub_shotnoise.map(|b| b.to_string())),
                    serde_json::to_value(r.flag).unwrap().as_str().unwrap()
                ));
            }
            s
        }
        Format::Json => m.json_document(json!(rows)),
    };
    emit(rc.out.as_ref(), &body)
}

pub fn wigner(rc: &RunConfig, a: &WignerArgs) -> Result<(), CliError> {
    let grid = spacs_wigner_grid(Complex64::new(a.alpha_re, a.alpha_im), a.extent, a.steps)?;
    let m = meta("wigner", a, rc);
    let body = match rc.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = m.csv_header() + "x,y,W\n";
            for (x, y, w) in &grid {
                s.push_str(&format!("{},{},{}\n", num(*x), num(*y), num(*w)));
            }
            s
        }
        Format::Json => m.json_document(json!(grid.iter().map(|(x, y, w)| json!({"x": x, "y": y, "W": w})).collect::<Vec<_>>())),
    };
    emit(rc.out.as_ref(), &body)
}

pub fn pacs(rc: &RunConfig, a: &PacsArgs) -> Result<(), CliError> {
    if a.n == 0 {
        return Err(CliError::usage("n must be at least 1"));
    }
    let xs: Vec<f64> = match &a.alpha_sq {
        Some(list) => list
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::usage(format!("bad intensity '{t}'"))))
            .collect::<Result<_, _>>()?,
        None => {
            if a.points < 2 {
                return Err(CliError::usage("--points must be at least 2"));
            }
            let n = a.n as f64;
            (0..a.points).map(|k| n.powf(-2.0 + 4.0 * k as f64 / (a.points - 1) as f64)).collect()
        }
    };
    let mut rows = Vec::new();
    for &x in &xs {
        let regime = pacs_regime(a.n, x)?;
        rows.push((x, regime, pacs_postselection(a.n, &x, a.n)?, pacs_postselection(a.n, &x, 0)?));
    }
    let m = meta("pacs", a, rc);
    let body = match rc.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = m.csv_header() + "alpha_sq,regime,p_n,p_0\n";
            for (x, r, pn, p0) in &rows {
                let r = serde_json::to_value(r).unwrap();
                s.push_str(&format!("{},{},{},{}\n", num(*x), r.as_str().unwrap(), num(*pn), num(*p0)));
            }
            s
        }
        Format::Json => m.json_document(json!(rows
            .iter()
            .map(|(x, r, pn, p0)| json!({"alpha_sq": x, "regime": r, "p_n": pn, "p_0": p0}))
            .collect::<Vec<_>>())),
    };
    emit(rc.out.as_ref(), &body)
}

pub fn baselines(rc: &RunConfig, a: &BaselinesArgs) -> Result<(), CliError> {
    let model: BaselineModel = a.model.parse()?;
    if a.n_min < 2 || a.n_min > a.n_max {
        return Err(CliError::usage("n range must satisfy 2 ≤ n-min ≤ n-max"));
    }
    let rows: Vec<_> = (a.n_min..=a.n_max)
        .map(|n| snl_hl_baselines::<f64>(n, model).map(|b| (n, b)))
        .collect::<Result<_, _>>()?;
    let m = meta("baselines", a, rc);
    let body = match rc.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = m.csv_header() + "n,N,snl,hl\n";
            for (n, b) in &rows {
                s.push_str(&format!("{},{},{},{}\n", n, b.resources, num(b.snl), num(b.hl)));
            }
            s
        }
        Format::Json => m.json_document(json!(rows
            .iter()
            .map(|(n, b)| json!({"n": n, "N": b.resources, "snl": b.snl, "hl": b.hl}))
            .collect::<Vec<_>>())),
    };
    emit(rc.out.as_ref(), &body)
}

pub fn reck(rc: &RunConfig, a: &MatrixArgs) -> Result<(), CliError> {
    let u = load_matrix(&a.matrix, None)?;
    let d = reck_decompose(&u)?;
    let residual = d.recompose()?.max_abs_diff(&u)?;
    let m = meta("reck", a, rc);
    let body = match rc.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = m.csv_header() + "kind,mode_p,mode_q,eta,tau\n";
            for e in &d.elements {
                s.push_str(&format!("coupler,{},{},{},{}\n", e.mode_p, e.mode_q, num(e.eta), num(e.tau)));
            }
            for (j, p) in d.output_phases.iter().enumerate() {
                s.push_str(&format!("phase,{j},{j},,{}\n", num(*p)));
            }
            s
        }
        Format::Json => {
            let mut v = serde_json::to_value(&d).unwrap();
            v["residual"] = json!(residual);
            m.json_document(v)
        }
    };
    emit(rc.out.as_ref(), &body)
}

pub fn embed(rc: &RunConfig, a: &MatrixArgs) -> Result<(), CliError> {
    let u = load_matrix(&a.matrix, None)?;
    let r = embed_su_in_so(&u)?;
    let m = meta("embed", a, rc);
    let body = match rc.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let mut s = m.csv_header() + "row,col,value\n";
            for i in 0..r.rows() {
                for j in 0..r.cols() {
                    s.push_str(&format!("{i},{j},{}\n", num(r[(i, j)].re)));
                }
            }
            s
        }
        Format::Json => m.json_document(serde_json::to_value(MatrixRecord::from(r)).unwrap()),
    };
    emit(rc.out.as_ref(), &body)
}
