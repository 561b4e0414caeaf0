use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{amplitude, check_modes, configuration_count, enumerate_configurations, OccupationVector};
use crate::netlib::UnitaryMatrix;
use crate::scalar::{Real, C};

/// Sparse superposition of Fock configurations.
pub type FockState<T> = BTreeMap<OccupationVector, C<T>>;

/// Largest photon-number sector [`truncated_evolution`] will build.
pub const SECTOR_LIMIT: u128 = 100_000;

/// Applies the network to a superposition of configurations with at most
/// `cutoff` photons in total.
///
/// The network conserves photon number, so each sector `K` evolves
/// independently through the matrix `T_{s,k} = ⟨s|Û|k⟩`. Every configuration of
/// each populated sector appears in the result.
pub fn truncated_evolution<T: Real>(u: &UnitaryMatrix<T>, state: &FockState<T>, cutoff: usize) -> Result<FockState<T>> {
    let m = u.dim();
    let mut sectors: BTreeMap<usize, Vec<(&OccupationVector, C<T>)>> = BTreeMap::new();
    for (k, amp) in state {
        check_modes(u, k)?;
        if k.total() > cutoff {
            return Err(Error::InvalidArgument(format!("configuration {k} exceeds the photon cutoff {cutoff}")));
        }
        sectors.entry(k.total()).or_default().push((k, *amp));
    }
    for &photons in sectors.keys() {
        let size = configuration_count(m, photons);
        if size > SECTOR_LIMIT {
            return Err(Error::Guard { what: "sector size", size, limit: SECTOR_LIMIT });
        }
    }
    let mut out = FockState::new();
    for (photons, inputs) in sectors {
        let outputs = enumerate_configurations(m, photons)?;
        let amps: Vec<C<T>> = outputs
            .par_iter()
            .map(|s| {
                inputs.iter().try_fold(C::new(T::zero(), T::zero()), |acc, (k, psi)| {
                    Ok(acc + amplitude(u, k, s)? * *psi)
                })
            })
            .collect::<Result<_>>()?;
        out.extend(outputs.into_iter().zip(amps));
    }
    Ok(out)
}
