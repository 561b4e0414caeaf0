//! Matrix presets and file loading.

use std::fs;

use linopt::metrology::{mordor_unitary_product, mzi_matrix, qufti_unitary};
use linopt::netlib::{beamsplitter_unitary, haar_orthogonal, haar_unitary, qft_matrix, BeamsplitterElement};
use linopt::Unitary;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

/// Resolves `identity[:n]`, `bs5050`, `mzi:φ`, `qft:n`, `mordor:n:φ`,
/// `qufti:n:φ`, `haar:n:seed`, `orth:n:seed`, or a JSON matrix file.
///
/// `default_dim` sizes a bare `identity`.
pub fn load_matrix(spec: &str, default_dim: Option<usize>) -> Result<Unitary, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = |what: &str| CliError::usage(format!("malformed preset '{spec}': {what}"));
    let int = |s: &str| s.parse::<usize>().map_err(|_| bad("expected an integer"));
    let real = |s: &str| s.parse::<f64>().map_err(|_| bad("expected a number"));
    let seed = |s: &str| s.parse::<u64>().map_err(|_| bad("expected a seed"));
    let u = match parts.as_slice() {
        ["identity"] => Unitary::identity(default_dim.ok_or_else(|| bad("size not implied; use identity:<n>"))?),
        ["identity", n] => Unitary::identity(int(n)?.max(1)),
        ["bs5050"] => beamsplitter_unitary(&BeamsplitterElement::new(0, 1, 0.5, std::f64::consts::FRAC_PI_2)?, 2)?,
        ["mzi", phi] => mzi_matrix(real(phi)?)?,
        ["qft", n] => qft_matrix(int(n)?)?,
        ["mordor", n, phi] => mordor_unitary_product(int(n)?, real(phi)?, 0.0)?,
        ["qufti", n, phi] => qufti_unitary(int(n)?, real(phi)?)?,
        ["haar", n, s] => haar_unitary(int(n)?, &mut ChaCha8Rng::seed_from_u64(seed(s)?))?,
        ["orth", n, s] => haar_orthogonal(int(n)?, &mut ChaCha8Rng::seed_from_u64(seed(s)?))?,
        _ => {
            let text = fs::read_to_string(spec).map_err(|e| CliError::usage(format!("cannot read matrix file '{spec}': {e}")))?;
            serde_json::from_str(&text).map_err(|e| CliError::usage(format!("malformed matrix file '{spec}': {e}")))?
        }
    };
    Ok(u)
}

/// Parses `1,0,2` into counts.
pub fn parse_counts(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::usage(format!("bad occupation list '{s}'"))))
        .collect()
}
