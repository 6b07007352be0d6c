//! Binary-addition-tree enumeration, superfamilies, and brute-force exact
//! reliability.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::net_model::{ArcId, Network, PartialAssignment, StateVector};
use crate::scalar::{one_minus, Probability};
use crate::traversal::LayeredSearch;

/// Default cap on the number of enumerated arcs (2^30 states).
pub const DEFAULT_ENUMERATION_LIMIT: usize = 30;

/// Hard cap imposed by the packed-word representation.
pub const MAX_ENUMERATION_LIMIT: usize = 63;

// States per parallel chunk. Fixed, so sums never depend on thread count.
const CHUNK_BITS: usize = 14;

/// One binary-addition step on a packed vector of `len` coordinates: set the
/// first zero coordinate and clear every coordinate below it. `None` once
/// the vector is all ones.
pub fn bat_step(mask: u64, len: usize) -> Option<u64> {
    let k = mask.trailing_ones() as usize;
    if k >= len {
        None
    } else {
        Some((mask | 1 << k) & !((1u64 << k) - 1))
    }
}

/// Sequential enumerator over all binary vectors of a fixed length,
/// starting from the zero vector.
#[derive(Debug, Clone)]
pub struct BatCursor {
    current: StateVector,
    exhausted: bool,
}

impl BatCursor {
    pub fn new(len: usize) -> Self {
        BatCursor {
            current: StateVector::zeros(len),
            exhausted: false,
        }
    }

    /// Resumes enumeration from an arbitrary vector.
    pub fn starting_at(current: StateVector) -> Self {
        BatCursor {
            current,
            exhausted: false,
        }
    }

    pub fn current(&self) -> &StateVector {
        &self.current
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Advances to the next vector; `None` (and exhausted) after all ones.
    pub fn bat_next(&mut self) -> Option<&StateVector> {
        if self.exhausted {
            return None;
        }
        let bits = self.current.bits_mut();
        match bits.iter().position(|&b| !b) {
            Some(k) => {
                bits[k] = true;
                bits[..k].iter_mut().for_each(|b| *b = false);
                Some(&self.current)
            }
            None => {
                self.exhausted = true;
                None
            }
        }
    }

    /// Iterator over every vector, the starting vector included.
    pub fn into_vectors(self) -> impl Iterator<Item = StateVector> {
        let mut cursor = self;
        let mut first = Some(cursor.current.clone());
        std::iter::from_fn(move || first.take().or_else(|| cursor.bat_next().cloned()))
    }
}

/// All assignments of a fixed arc subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superfamily {
    pub cut_arcs: Vec<ArcId>,
    pub members: Vec<PartialAssignment>,
}

impl Superfamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn build_superfamily(arcs: &[ArcId], skip_zero: bool) -> Result<Superfamily> {
    if arcs.is_empty() {
        return Err(Error::EmptyArcList);
    }
    if arcs.len() > MAX_ENUMERATION_LIMIT {
        return Err(Error::TooManyArcs {
            arcs: arcs.len(),
            limit: MAX_ENUMERATION_LIMIT,
        });
    }
    // Validates distinctness once.
    PartialAssignment::new(arcs.iter().map(|&a| (a, false)).collect())?;

    let members = BatCursor::new(arcs.len())
        .into_vectors()
        .filter(|x| !skip_zero || x.bits().iter().any(|&b| b))
        .map(|x| PartialAssignment::from_states(arcs, &x.digits()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Superfamily {
        cut_arcs: arcs.to_vec(),
        members,
    })
}

/// Every assignment of `arcs`, in binary-addition order.
pub fn superfamily(arcs: &[ArcId]) -> Result<Superfamily> {
    build_superfamily(arcs, false)
}

/// Every assignment of `arcs` with at least one working arc.
pub fn superfamily_nonzero(arcs: &[ArcId]) -> Result<Superfamily> {
    build_superfamily(arcs, true)
}

/// Exact two-terminal reliability by enumerating all 2^m states.
pub fn exact_reliability<P: Probability>(net: &Network<P>) -> Result<P> {
    exact_reliability_with_limit(net, DEFAULT_ENUMERATION_LIMIT)
}

pub fn exact_reliability_with_limit<P: Probability>(net: &Network<P>, limit: usize) -> Result<P> {
    conditional_reliability_with_limit(net, &PartialAssignment::empty(), limit)
}

/// Exact probability that source and sink connect given the fixed arc
/// states, enumerating every assignment of the remaining arcs.
pub fn conditional_reliability<P: Probability>(
    net: &Network<P>,
    fixed: &PartialAssignment,
) -> Result<P> {
    conditional_reliability_with_limit(net, fixed, DEFAULT_ENUMERATION_LIMIT)
}

pub fn conditional_reliability_with_limit<P: Probability>(
    net: &Network<P>,
    fixed: &PartialAssignment,
    limit: usize,
) -> Result<P> {
    fixed.validate(net)?;
    let lookup = fixed.to_lookup(net.arc_count());
    let free: Vec<usize> = (0..net.arc_count())
        .filter(|&i| lookup[i].is_none())
        .collect();
    let limit = limit.min(MAX_ENUMERATION_LIMIT);
    if free.len() > limit {
        return Err(Error::TooManyArcs {
            arcs: free.len(),
            limit,
        });
    }

    let mut base = vec![false; net.arc_count()];
    for (i, state) in lookup.iter().enumerate() {
        base[i] = state.unwrap_or(false);
    }
    let free_probs: Vec<(P, P)> = free
        .iter()
        .map(|&i| {
            let p = net.probabilities()[i].clone();
            let q = one_minus(&p);
            (p, q)
        })
        .collect();

    let total_states: u64 = 1 << free.len();
    let chunk = 1u64 << CHUNK_BITS.min(free.len());
    let chunks = total_states / chunk;

    let partials: Vec<P> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut search = LayeredSearch::new();
            let mut state = base.clone();
            let mut sum = P::zero();
            let mut mask = c * chunk;
            let end = mask + chunk - 1;
            loop {
                for (bit, &arc) in free.iter().enumerate() {
                    state[arc] = mask >> bit & 1 == 1;
                }
                if search.connected(net, |a| state[a]) {
                    let weight =
                        free_probs
                            .iter()
                            .enumerate()
                            .fold(P::one(), |acc, (bit, (p, q))| {
                                acc * if mask >> bit & 1 == 1 {
                                    p.clone()
                                } else {
                                    q.clone()
                                }
                            });
                    sum = sum + weight;
                }
                if mask == end {
                    break;
                }
                mask = bat_step(mask, free.len()).expect("chunk stays inside the state space");
            }
            sum
        })
        .collect();

    Ok(partials.into_iter().fold(P::zero(), |acc, s| acc + s))
}
