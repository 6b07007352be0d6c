//! Proportional trial budgets over strata.

use crate::error::{Error, Result};
use crate::scalar::Probability;

/// Trial counts aligned with a stratum sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetAllocation {
    pub counts: Vec<u64>,
    /// True when every proportional quota was already a positive whole number.
    pub exact: bool,
}

impl BudgetAllocation {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Splits `n_sim` trials across strata in proportion to their weights.
///
/// Quotas are `n_sim * p_i / sum(p)`. When they are all positive integers
/// they are used as-is. Otherwise each count starts at `max(floor(q_i), 1)`
/// and is then corrected one unit at a time until the total is `n_sim`:
/// the stratum furthest below its quota (`q_i - c_i` largest, lowest index
/// first) gains a unit, and if the floor of one pushed the total over budget
/// the stratum furthest above its quota with a count above one gives a
/// unit back. Without any floor-raise this is the largest-remainder rule.
pub fn allocate_budget<P: Probability>(weights: &[P], n_sim: u64) -> Result<BudgetAllocation> {
    if weights.is_empty() {
        return Err(Error::InvalidWeights("no strata".into()));
    }
    if (n_sim as u128) < weights.len() as u128 {
        return Err(Error::BudgetTooSmall {
            n_sim,
            strata: weights.len(),
        });
    }
    if weights.iter().any(|w| *w < P::zero()) {
        return Err(Error::InvalidWeights("negative weight".into()));
    }
    let total = weights.iter().fold(P::zero(), |acc, w| acc + w.clone());
    if total <= P::zero() {
        return Err(Error::InvalidWeights("weights sum to zero".into()));
    }

    let budget = P::from_count(n_sim);
    let quotas: Vec<P> = weights
        .iter()
        .map(|w| budget.clone() * w.clone() / total.clone())
        .collect();

    let whole: Option<Vec<u64>> = quotas
        .iter()
        .map(|q| q.as_whole().filter(|&k| k > 0))
        .collect();
    if let Some(counts) = whole {
        if counts.iter().sum::<u64>() == n_sim {
            return Ok(BudgetAllocation {
                counts,
                exact: true,
            });
        }
    }

    let mut counts: Vec<u64> = quotas.iter().map(|q| q.floor_whole().max(1)).collect();
    let mut assigned: u64 = counts.iter().sum();
    let gap = |q: &P, c: u64| q.clone() - P::from_count(c);

    while assigned < n_sim {
        let mut best = 0;
        for i in 1..counts.len() {
            if gap(&quotas[i], counts[i]) > gap(&quotas[best], counts[best]) {
                best = i;
            }
        }
        counts[best] += 1;
        assigned += 1;
    }
    while assigned > n_sim {
        let mut best: Option<usize> = None;
        for i in 0..counts.len() {
            if counts[i] <= 1 {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => gap(&quotas[i], counts[i]) < gap(&quotas[b], counts[b]),
            };
            if better {
                best = Some(i);
            }
        }
        let i = best.expect("n_sim >= strata leaves a count above one");
        counts[i] -= 1;
        assigned -= 1;
    }

    Ok(BudgetAllocation {
        counts,
        exact: false,
    })
}
