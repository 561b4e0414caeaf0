use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netlib::builders::wrap_phase;
use crate::netlib::{BeamsplitterElement, ComplexMatrix, UnitaryMatrix};
use crate::scalar::{cis, Real, C};

/// Triangular coupler mesh plus output phases.
///
/// The represented unitary is `E_1 E_2 ⋯ E_N · diag(e^{iφ_j})`, with `E_k`
/// the coupler matrices in the order stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReckDecomposition<T> {
    pub modes: usize,
    pub elements: Vec<BeamsplitterElement<T>>,
    pub output_phases: Vec<T>,
}

/// Adjacent mode pairs visited when nulling below-diagonal entries: column by
/// column, bottom row upwards.
pub(crate) fn mesh_order(n: usize) -> impl Iterator<Item = (usize, usize)> {
    mesh_sweep(n).map(|(_, p, q)| (p, q))
}

/// `(column, upper row, lower row)` for each nulling step.
fn mesh_sweep(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n.saturating_sub(1)).flat_map(move |c| ((c + 1)..n).rev().map(move |q| (c, q - 1, q)))
}

/// Factorises `u` into at most `n(n−1)/2` couplers and `n` output phases.
pub fn reck_decompose<T: Real>(u: &UnitaryMatrix<T>) -> Result<ReckDecomposition<T>> {
    let n = u.dim();
    let mut m = u.matrix().clone();
    let mut elements = Vec::new();
    let tiny = T::min_positive_value().sqrt();
    for (c, p, q) in mesh_sweep(n) {
        let a = m[(p, c)];
        let b = m[(q, c)];
        if b.norm() <= tiny {
            continue;
        }
        let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let eta = (a.norm() / rho).powi(2).min(T::one());
        let alpha = if a.norm() <= tiny { T::zero() } else { a.arg() };
        let step = BeamsplitterElement::new(p, q, eta, alpha - b.arg())?;
        step.apply_left(&mut m);
        m[(q, c)] = C::new(T::zero(), T::zero());
        elements.push(step.inverse());
    }
    let output_phases = (0..n).map(|j| wrap_phase(m[(j, j)].arg())).collect();
    Ok(ReckDecomposition { modes: n, elements, output_phases })
}

impl<T: Real> ReckDecomposition<T> {
    /// Rebuilds the unitary from its factors.
    pub fn recompose(&self) -> Result<UnitaryMatrix<T>> {
        if self.output_phases.len() != self.modes {
            return Err(Error::DimensionMismatch { expected: self.modes, found: self.output_phases.len() });
        }
        let d: Vec<_> = self.output_phases.iter().map(|&p| cis(p)).collect();
        let mut m = ComplexMatrix::diagonal(&d);
        for e in self.elements.iter().rev() {
            for idx in [e.mode_p, e.mode_q] {
                if idx >= self.modes {
                    return Err(Error::ModeOutOfRange { index: idx, modes: self.modes });
                }
            }
            e.apply_left(&mut m);
        }
        UnitaryMatrix::new(m)
    }
}
