//! Seeded random networks with a guaranteed source-to-sink path.

use crate::error::{Error, Result};
use crate::estimators::{RandomStream, UniformSource};
use crate::net_model::Network;
use crate::scalar::Probability;
use crate::traversal::LayeredSearch;

const MAX_ATTEMPTS: usize = 10_000;

/// How arc working probabilities are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcProbabilities {
    /// Every arc gets the same probability.
    Fixed(f64),
    /// Independent uniform draws from `[low, high]`, rounded to three decimals.
    Uniform { low: f64, high: f64 },
}

/// Random simple graph on `nodes` nodes with `arcs` distinct arcs, source 1
/// and sink `nodes`. Arc sets are redrawn until the sink is reachable.
pub fn random_network<P: Probability>(
    nodes: usize,
    arcs: usize,
    probabilities: ArcProbabilities,
    seed: u64,
) -> Result<Network<P>> {
    if nodes < 2 {
        return Err(Error::Domain(
            "random networks need at least two nodes".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = (1..=nodes)
        .flat_map(|u| (u + 1..=nodes).map(move |v| (u, v)))
        .collect();
    if arcs == 0 || arcs > pairs.len() {
        return Err(Error::Domain(format!(
            "arc count {arcs} outside 1..={} for {nodes} nodes",
            pairs.len()
        )));
    }
    match probabilities {
        ArcProbabilities::Fixed(p) if !(0.0..=1.0).contains(&p) => {
            return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
        }
        ArcProbabilities::Uniform { low, high } if !(0.0 <= low && low <= high && high <= 1.0) => {
            return Err(Error::Domain(format!(
                "range [{low}, {high}] not inside [0, 1]"
            )));
        }
        _ => {}
    }

    let mut rng = RandomStream::new(seed);
    let mut search = LayeredSearch::new();
    for _ in 0..MAX_ATTEMPTS {
        // Partial Fisher-Yates over the candidate pairs.
        let mut pool = pairs.clone();
        for i in 0..arcs {
            let j = i
                + ((rng.next_uniform() * (pool.len() - i) as f64) as usize).min(pool.len() - i - 1);
            pool.swap(i, j);
        }
        pool.truncate(arcs);

        let mut chosen = Vec::with_capacity(arcs);
        for &(u, v) in &pool {
            let p = match probabilities {
                ArcProbabilities::Fixed(p) => p,
                ArcProbabilities::Uniform { low, high } => {
                    (low + (high - low) * rng.next_uniform()).clamp(low, high)
                }
            };
            let text = match probabilities {
                ArcProbabilities::Fixed(_) => format!("{p}"),
                ArcProbabilities::Uniform { .. } => format!("{p:.3}"),
            };
            let p = P::parse_decimal(&text)
                .ok_or_else(|| Error::Domain(format!("unrepresentable probability {text}")))?;
            chosen.push((u, v, p));
        }
        let net = Network::new(nodes, 1, nodes, chosen)?;
        if search.connected(&net, |_| true) {
            return Ok(net);
        }
    }
    Err(Error::Domain(format!(
        "no connected network with {nodes} nodes and {arcs} arcs after {MAX_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traversal::compute_layers;

    #[test]
    fn generated_networks_are_valid_and_connected() {
        for seed in 0..50 {
            let net: Network<f64> = random_network(
                7,
                10,
                ArcProbabilities::Uniform {
                    low: 0.5,
                    high: 0.95,
                },
                seed,
            )
            .unwrap();
            assert_eq!(net.arc_count(), 10);
            assert!(compute_layers(&net).is_ok());
            assert!(net.probabilities().iter().all(|p| (0.5..=0.95).contains(p)));
        }
    }

    #[test]
    fn same_seed_same_network() {
        let a: Network<f64> = random_network(6, 8, ArcProbabilities::Fixed(0.9), 4).unwrap();
        let b: Network<f64> = random_network(6, 8, ArcProbabilities::Fixed(0.9), 4).unwrap();
        assert_eq!(a, b);
        let c: Network<f64> = random_network(6, 8, ArcProbabilities::Fixed(0.9), 5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn complete_graph_and_bad_requests() {
        let net: Network<f64> = random_network(4, 6, ArcProbabilities::Fixed(0.5), 0).unwrap();
        assert_eq!(net.arc_count(), 6);
        assert!(random_network::<f64>(4, 7, ArcProbabilities::Fixed(0.5), 0).is_err());
        assert!(random_network::<f64>(1, 1, ArcProbabilities::Fixed(0.5), 0).is_err());
        assert!(random_network::<f64>(4, 3, ArcProbabilities::Fixed(1.5), 0).is_err());
        // A single arc only works as the direct 1-5 arc; retries find it.
        assert!(random_network::<f64>(5, 1, ArcProbabilities::Fixed(0.5), 0).is_ok());
    }
}
