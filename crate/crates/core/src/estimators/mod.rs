//! Stochastic reliability estimators: crude Monte Carlo, BAT-MCS
//! (stratified on the first β arcs), and cBAT-MCS (stratified on the
//! non-zero assignments of a layer-cut).

mod allocation;
mod stream;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

pub use allocation::{allocate_budget, BudgetAllocation};
pub use stream::{
    derive_seed, RandomStream, ReplayDraws, ReplaySource, StreamSource, UniformSource,
};

use crate::enumeration::{superfamily, superfamily_nonzero, Superfamily};
use crate::error::{Error, Result};
use crate::net_model::{ArcId, Network, PartialAssignment, StateVector};
use crate::scalar::{one_minus, Probability};
use crate::traversal::{find_layer_cuts, select_super_cut, LayerCut, LayeredSearch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Crude,
    BatMcs,
    CbatMcs,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Crude, Method::BatMcs, Method::CbatMcs];

    pub fn name(self) -> &'static str {
        match self {
            Method::Crude => "crude",
            Method::BatMcs => "batmcs",
            Method::CbatMcs => "cbatmcs",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "crude" => Ok(Method::Crude),
            "batmcs" | "bat_mcs" => Ok(Method::BatMcs),
            "cbatmcs" | "cbat_mcs" => Ok(Method::CbatMcs),
            other => Err(Error::Domain(format!("unknown method `{other}`"))),
        }
    }
}

/// How an estimate was assembled from pass counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorFormula {
    /// N_pass / N_sim.
    PassRatio,
    /// Sum over strata of Pr(X) * N_pass(X) / N_sim(X).
    WeightedStrata,
    /// γ * N_pass; valid only for exact proportional allocation.
    PooledGamma,
}

impl EstimatorFormula {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorFormula::PassRatio => "pass_ratio",
            EstimatorFormula::WeightedStrata => "weighted_strata",
            EstimatorFormula::PooledGamma => "pooled_gamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratumTally<P> {
    pub assignment: PartialAssignment,
    pub probability: P,
    pub n_sim: u64,
    pub n_pass: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate<P> {
    pub value: P,
    pub method: Method,
    pub formula: EstimatorFormula,
    pub n_sim: u64,
    pub n_pass: u64,
    /// Empty for crude sampling.
    pub per_stratum: Vec<StratumTally<P>>,
    /// Normalization factor (cBAT-MCS only).
    pub gamma: Option<P>,
    /// Stratifying layer-cut (cBAT-MCS only).
    pub cut: Option<LayerCut>,
    pub seed: Option<u64>,
    pub wall_time: Duration,
}

// Free-arc layout of one stratum.
struct Sampler {
    template: Vec<bool>,
    free: Vec<(usize, f64)>,
}

impl Sampler {
    fn new<P: Probability>(net: &Network<P>, fixed: &PartialAssignment) -> Result<Self> {
        fixed.validate(net)?;
        let lookup = fixed.to_lookup(net.arc_count());
        let template = lookup.iter().map(|s| s.unwrap_or(false)).collect();
        let free = lookup
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(i, _)| (i, net.probabilities()[i].approx_f64()))
            .collect();
        Ok(Sampler { template, free })
    }

    // One draw per free arc, ascending arc id; working iff draw <= Pr(a).
    fn fill<U: UniformSource>(&self, source: &mut U, state: &mut [bool]) {
        for &(arc, p) in &self.free {
            state[arc] = source.next_uniform() <= p;
        }
    }

    fn count_passes<P, U: UniformSource>(
        &self,
        net: &Network<P>,
        trials: u64,
        source: &mut U,
    ) -> u64 {
        let mut state = self.template.clone();
        let mut search = LayeredSearch::new();
        let mut passes = 0;
        for _ in 0..trials {
            self.fill(source, &mut state);
            if search.connected(net, |a| state[a]) {
                passes += 1;
            }
        }
        passes
    }
}

/// Draws a full state vector: fixed arcs copied, free arcs sampled in
/// ascending arc-id order with one uniform draw each.
pub fn sample_state<P: Probability, U: UniformSource>(
    net: &Network<P>,
    fixed: &PartialAssignment,
    source: &mut U,
) -> Result<StateVector> {
    let sampler = Sampler::new(net, fixed)?;
    let mut state = sampler.template.clone();
    sampler.fill(source, &mut state);
    Ok(StateVector::from_bools(state))
}

fn clamp_unit<P: Probability>(value: P) -> P {
    if value > P::one() {
        P::one()
    } else {
        value
    }
}

/// Crude Monte Carlo: N_pass / N_sim over independent full-state samples
/// drawn from stream 0.
pub fn crude_mcs<P: Probability, S: StreamSource>(
    net: &Network<P>,
    n_sim: u64,
    source: &S,
) -> Result<Estimate<P>> {
    if n_sim == 0 {
        return Err(Error::Domain("n_sim must be positive".into()));
    }
    let start = Instant::now();
    let sampler = Sampler::new(net, &PartialAssignment::empty())?;
    let n_pass = sampler.count_passes(net, n_sim, &mut source.stream(0));
    Ok(Estimate {
        value: P::from_count(n_pass) / P::from_count(n_sim),
        method: Method::Crude,
        formula: EstimatorFormula::PassRatio,
        n_sim,
        n_pass,
        per_stratum: Vec::new(),
        gamma: None,
        cut: None,
        seed: source.seed(),
        wall_time: start.elapsed(),
    })
}

/// Sum over strata of `Pr(X) * N_pass(X) / N_sim(X)`. Strata without
/// trials contribute nothing.
pub fn weighted_stratum_sum<P: Probability>(
    probabilities: &[P],
    passes: &[u64],
    sims: &[u64],
) -> P {
    probabilities
        .iter()
        .zip(passes)
        .zip(sims)
        .filter(|(_, &sims)| sims > 0)
        .fold(P::zero(), |acc, ((p, &pass), &sims)| {
            acc + p.clone() * P::from_count(pass) / P::from_count(sims)
        })
}

/// γ = (1 - Pr(all cut arcs failed)) / N_sim.
pub fn normalization_factor<P: Probability>(
    net: &Network<P>,
    cut: &LayerCut,
    n_sim: u64,
) -> Result<P> {
    if n_sim == 0 {
        return Err(Error::Domain("n_sim must be positive".into()));
    }
    let live = one_minus(&net.zero_assignment_probability(&cut.arcs)?);
    Ok(live / P::from_count(n_sim))
}

/// γ computed the long way: the summed probability of every non-zero cut
/// assignment, divided by N_sim. Cross-check for [`normalization_factor`].
pub fn normalization_factor_by_enumeration<P: Probability>(
    net: &Network<P>,
    cut: &LayerCut,
    n_sim: u64,
) -> Result<P> {
    if n_sim == 0 {
        return Err(Error::Domain("n_sim must be positive".into()));
    }
    let total = superfamily_nonzero(&cut.arcs)?
        .members
        .iter()
        .map(|m| net.assignment_probability(m))
        .try_fold(P::zero(), |acc, p| p.map(|p| acc + p))?;
    Ok(total / P::from_count(n_sim))
}

/// Variance scaling factor (1 - Pr(all cut arcs failed))^2.
pub fn variance_scale<P: Probability>(net: &Network<P>, cut: &LayerCut) -> Result<P> {
    let live = one_minus(&net.zero_assignment_probability(&cut.arcs)?);
    Ok(live.clone() * live)
}

/// Trials needed for relative error `epsilon` at confidence `1 - alpha`:
/// ceil(z²(1-R) / (ε² R)) with z the two-sided normal critical value.
pub fn required_sample_size(reliability_guess: f64, epsilon: f64, alpha: f64) -> Result<u64> {
    if !(reliability_guess > 0.0 && reliability_guess <= 1.0) {
        return Err(Error::Domain(format!(
            "reliability guess {reliability_guess} outside (0, 1]"
        )));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon {epsilon} must be positive")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1)")));
    }
    let z = Normal::standard().inverse_cdf(1.0 - alpha / 2.0);
    let n = z * z * (1.0 - reliability_guess) / (epsilon * epsilon * reliability_guess);
    Ok(n.ceil() as u64)
}

/// Strata, weights and trial budget of a stratified estimator, fixed before
/// any sampling happens.
#[derive(Debug, Clone, PartialEq)]
pub struct StratifiedPlan<P> {
    pub method: Method,
    pub strata: Superfamily,
    pub probabilities: Vec<P>,
    pub allocation: BudgetAllocation,
    pub gamma: Option<P>,
    pub cut: Option<LayerCut>,
}

fn check_stratum_budget(b: usize, n_sim: u64, nonzero_only: bool) -> Result<()> {
    let strata = if b >= 64 {
        u128::MAX
    } else {
        (1u128 << b) - nonzero_only as u128
    };
    if (n_sim as u128) < strata {
        return Err(Error::BudgetTooSmall {
            n_sim,
            strata: usize::try_from(strata).unwrap_or(usize::MAX),
        });
    }
    Ok(())
}

impl<P: Probability> StratifiedPlan<P> {
    /// Strata over every assignment of arcs a1..aβ.
    pub fn bat_mcs(net: &Network<P>, beta: usize, n_sim: u64) -> Result<Self> {
        if beta == 0 || beta >= net.arc_count() {
            return Err(Error::Domain(format!(
                "beta must satisfy 1 <= beta < m = {}, got {beta}",
                net.arc_count()
            )));
        }
        check_stratum_budget(beta, n_sim, false)?;
        let arcs: Vec<ArcId> = (1..=beta).map(ArcId).collect();
        let strata = superfamily(&arcs)?;
        Self::assemble(net, Method::BatMcs, strata, n_sim, None)
    }

    /// Strata over the non-zero assignments of the selected super-cut.
    pub fn cbat_mcs(net: &Network<P>, n_sim: u64) -> Result<Self> {
        let cuts = find_layer_cuts(net)?;
        let cut = select_super_cut(net, &cuts)?;
        check_stratum_budget(cut.len(), n_sim, true)?;
        let strata = superfamily_nonzero(&cut.arcs)?;
        Self::assemble(net, Method::CbatMcs, strata, n_sim, Some(cut))
    }

    fn assemble(
        net: &Network<P>,
        method: Method,
        strata: Superfamily,
        n_sim: u64,
        cut: Option<LayerCut>,
    ) -> Result<Self> {
        let probabilities = strata
            .members
            .iter()
            .map(|m| net.assignment_probability(m))
            .collect::<Result<Vec<P>>>()?;
        let allocation = if probabilities.iter().all(|p| *p <= P::zero()) {
            // Every stratum is impossible; spread trials evenly so the
            // bookkeeping still adds up. Their weight zeroes the estimate.
            let mut uniform = allocate_budget(&vec![P::one(); probabilities.len()], n_sim)?;
            uniform.exact = false;
            uniform
        } else {
            allocate_budget(&probabilities, n_sim)?
        };
        let gamma = match &cut {
            Some(cut) => Some(normalization_factor(net, cut, n_sim)?),
            None => None,
        };
        Ok(StratifiedPlan {
            method,
            strata,
            probabilities,
            allocation,
            gamma,
            cut,
        })
    }

    pub fn n_sim(&self) -> u64 {
        self.allocation.total()
    }

    /// Reliability estimate from per-stratum pass counts. cBAT-MCS with
    /// exact allocation uses γ·N_pass; every other case the weighted sum.
    pub fn combine(&self, passes: &[u64]) -> (P, EstimatorFormula) {
        match (&self.gamma, self.allocation.exact) {
            (Some(gamma), true) => {
                let total: u64 = passes.iter().sum();
                (
                    gamma.clone() * P::from_count(total),
                    EstimatorFormula::PooledGamma,
                )
            }
            _ => (
                weighted_stratum_sum(&self.probabilities, passes, &self.allocation.counts),
                EstimatorFormula::WeightedStrata,
            ),
        }
    }

    /// Runs every stratum's trials on its own sub-stream (index = stratum
    /// position) and combines the pass counts.
    pub fn run<S: StreamSource>(&self, net: &Network<P>, source: &S) -> Result<Estimate<P>> {
        let start = Instant::now();
        let samplers = self
            .strata
            .members
            .iter()
            .map(|m| Sampler::new(net, m))
            .collect::<Result<Vec<_>>>()?;
        let passes: Vec<u64> = samplers
            .par_iter()
            .zip(&self.allocation.counts)
            .enumerate()
            .map(|(i, (sampler, &trials))| {
                sampler.count_passes(net, trials, &mut source.stream(i as u64))
            })
            .collect();

        let (value, formula) = self.combine(&passes);
        let per_stratum = self
            .strata
            .members
            .iter()
            .zip(&self.probabilities)
            .zip(self.allocation.counts.iter().zip(&passes))
            .map(
                |((assignment, probability), (&n_sim, &n_pass))| StratumTally {
                    assignment: assignment.clone(),
                    probability: probability.clone(),
                    n_sim,
                    n_pass,
                },
            )
            .collect();
        Ok(Estimate {
            value: clamp_unit(value),
            method: self.method,
            formula,
            n_sim: self.n_sim(),
            n_pass: passes.iter().sum(),
            per_stratum,
            gamma: self.gamma.clone(),
            cut: self.cut.clone(),
            seed: source.seed(),
            wall_time: start.elapsed(),
        })
    }
}

/// BAT-MCS with the first `beta` arcs as supervector.
pub fn bat_mcs<P: Probability, S: StreamSource>(
    net: &Network<P>,
    beta: usize,
    n_sim: u64,
    source: &S,
) -> Result<Estimate<P>> {
    StratifiedPlan::bat_mcs(net, beta, n_sim)?.run(net, source)
}

/// cBAT-MCS: stratified on the non-zero assignments of the
/// maximal-probability minimal-size layer-cut.
pub fn cbat_mcs<P: Probability, S: StreamSource>(
    net: &Network<P>,
    n_sim: u64,
    source: &S,
) -> Result<Estimate<P>> {
    StratifiedPlan::cbat_mcs(net, n_sim)?.run(net, source)
}

/// Runs `method` with its default parameters; `beta` only matters for BAT-MCS.
pub fn estimate<P: Probability, S: StreamSource>(
    net: &Network<P>,
    method: Method,
    n_sim: u64,
    beta: usize,
    source: &S,
) -> Result<Estimate<P>> {
    match method {
        Method::Crude => crude_mcs(net, n_sim, source),
        Method::BatMcs => bat_mcs(net, beta, n_sim, source),
        Method::CbatMcs => cbat_mcs(net, n_sim, source),
    }
}

#[cfg(test)]
mod tests;
