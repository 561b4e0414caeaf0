use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, StandardUniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{amplitude, check_modes, enumerate_configurations, OccupationVector};
use crate::netlib::UnitaryMatrix;
use crate::scalar::Real;

/// Output probabilities over every configuration of `n` photons in `m` modes,
/// sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDistribution<T: Real> {
    modes: usize,
    photons: usize,
    entries: Vec<(OccupationVector, T)>,
}

impl<T: Real> FockDistribution<T> {
    /// Validates keys, non-negativity and unit total mass.
    pub fn new(modes: usize, photons: usize, mut entries: Vec<(OccupationVector, T)>) -> Result<Self> {
        let mut total = T::zero();
        for (s, p) in &entries {
            if s.modes() != modes {
                return Err(Error::DimensionMismatch { expected: modes, found: s.modes() });
            }
            if s.total() != photons {
                return Err(Error::PhotonMismatch { input: photons, output: s.total() });
            }
            if !(*p >= T::zero()) {
                return Err(Error::InvalidArgument(format!("negative or NaN probability at {s}")));
            }
            total += *p;
        }
        if (total - T::one()).abs() > T::normalization_tol() {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}, not 1")));
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("duplicate configuration".into()));
        }
        Ok(Self { modes, photons, entries })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn entries(&self) -> &[(OccupationVector, T)] {
        &self.entries
    }

    /// Probability of `s`; zero for configurations not listed.
    pub fn get(&self, s: &OccupationVector) -> T {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(s))
            .map(|i| self.entries[i].1)
            .unwrap_or(T::zero())
    }

    pub fn total_mass(&self) -> T {
        self.entries.iter().map(|(_, p)| *p).sum()
    }

    /// `s,p` rows with probabilities at 17 significant digits; the
    /// configuration is written as space-separated counts.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,p\n");
        for (s, p) in &self.entries {
            let counts: Vec<String> = s.counts().iter().map(usize::to_string).collect();
            out.push_str(&format!("{},{:.16e}\n", counts.join(" "), p.to_f64().unwrap()));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct EntryRecord {
    s: Vec<usize>,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct DistributionRecord {
    m: usize,
    n: usize,
    entries: Vec<EntryRecord>,
}

impl<T: Real> Serialize for FockDistribution<T> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        DistributionRecord {
            m: self.modes,
            n: self.photons,
            entries: self
                .entries
                .iter()
                .map(|(s, p)| EntryRecord { s: s.0.clone(), p: p.to_f64().unwrap() })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de, T: Real> Deserialize<'de> for FockDistribution<T> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = DistributionRecord::deserialize(de)?;
        let entries = r
            .entries
            .into_iter()
            .map(|e| (OccupationVector(e.s), T::from_f64(e.p).unwrap_or(T::nan())))
            .collect();
        FockDistribution::new(r.m, r.n, entries).map_err(serde::de::Error::custom)
    }
}

/// `|⟨s|Û|k⟩|²` for every output `s` with the same photon number as `input`.
pub fn output_distribution<T: Real>(u: &UnitaryMatrix<T>, input: &OccupationVector) -> Result<FockDistribution<T>> {
    check_modes(u, input)?;
    let configs = enumerate_configurations(u.dim(), input.total())?;
    let probs: Vec<T> = configs
        .par_iter()
        .map(|s| amplitude(u, input, s).map(|a| a.norm_sqr()))
        .collect::<Result<_>>()?;
    let entries = configs.into_iter().zip(probs).collect();
    FockDistribution::new(u.dim(), input.total(), entries)
}

/// Draws `count` configurations by inverse-CDF lookup; the sequence is fixed
/// by the generator state.
pub fn sample<T, R>(dist: &FockDistribution<T>, count: usize, rng: &mut R) -> Vec<OccupationVector>
where
    T: Real,
    R: Rng + ?Sized,
    StandardUniform: Distribution<T>,
{
    let mut cdf = Vec::with_capacity(dist.entries.len());
    let mut acc = T::zero();
    for (_, p) in &dist.entries {
        acc += *p;
        cdf.push(acc);
    }
    let last_nonzero = dist.entries.iter().rposition(|(_, p)| *p > T::zero()).unwrap_or(0);
    (0..count)
        .map(|_| {
            let u: T = rng.sample(StandardUniform);
            let target = u * acc;
            let idx = cdf.partition_point(|&c| c <= target).min(last_nonzero);
            dist.entries[idx].0.clone()
        })
        .collect()
}

/// Histogram of [`sample`] draws.
pub fn sample_counts<T, R>(dist: &FockDistribution<T>, count: usize, rng: &mut R) -> BTreeMap<OccupationVector, usize>
where
    T: Real,
    R: Rng + ?Sized,
    StandardUniform: Distribution<T>,
{
    let mut hist = BTreeMap::new();
    for s in sample(dist, count, rng) {
        *hist.entry(s).or_insert(0) += 1;
    }
    hist
}

/// `½ Σ_s |p(s) − q(s)|` over the union of supports.
pub fn total_variation<T: Real>(p: &FockDistribution<T>, q: &FockDistribution<T>) -> Result<T> {
    if p.modes != q.modes || p.photons != q.photons {
        return Err(Error::ShapeMismatch(format!(
            "({} modes, {} photons) vs ({} modes, {} photons)",
            p.modes, p.photons, q.modes, q.photons
        )));
    }
    let mut keys: Vec<&OccupationVector> = p.entries.iter().chain(&q.entries).map(|(s, _)| s).collect();
    keys.sort();
    keys.dedup();
    let sum: T = keys.into_iter().map(|s| (p.get(s) - q.get(s)).abs()).sum();
    Ok(sum * T::lit(0.5))
}
