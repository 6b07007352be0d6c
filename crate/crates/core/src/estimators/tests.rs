use super::*;
use crate::enumeration::{conditional_reliability, exact_reliability};
use crate::net_model::canonical_bridge;
use crate::scalar::Rational;

fn rat(s: &str) -> Rational {
    Rational::parse_decimal(s).unwrap()
}

fn ids(raw: &[usize]) -> Vec<ArcId> {
    raw.iter().map(|&i| ArcId(i)).collect()
}

// Draw rows of the 16-trial worked example: (ρ1..ρ5) and the states they imply.
const DRAW_ROWS: [([f64; 5], [u8; 5]); 16] = [
    (
        [0.92168, 0.71974, 0.73371, 0.40070, 0.15396],
        [0, 1, 0, 1, 1],
    ),
    (
        [0.40533, 0.33365, 0.66730, 0.83186, 0.01404],
        [1, 1, 1, 0, 1],
    ),
    (
        [0.71173, 0.83719, 0.66681, 0.31019, 0.47161],
        [1, 0, 1, 1, 1],
    ),
    (
        [0.33772, 0.36953, 0.55257, 0.62505, 0.83836],
        [1, 1, 1, 0, 0],
    ),
    (
        [0.39771, 0.73576, 0.35345, 0.86882, 0.08958],
        [1, 1, 1, 0, 1],
    ),
    (
        [0.78790, 0.43831, 0.72763, 0.14010, 0.01628],
        [1, 1, 0, 1, 1],
    ),
    (
        [0.56750, 0.02068, 0.04221, 0.40355, 0.28200],
        [1, 1, 1, 1, 1],
    ),
    (
        [0.78631, 0.79431, 0.96743, 0.57409, 0.86514],
        [1, 1, 0, 1, 0],
    ),
    (
        [0.34288, 0.56388, 0.52413, 0.17044, 0.41365],
        [1, 1, 1, 1, 1],
    ),
    (
        [0.94191, 0.66559, 0.92689, 0.86024, 0.49946],
        [0, 1, 0, 0, 1],
    ),
    (
        [0.19682, 0.65801, 0.28775, 0.15021, 0.93827],
        [1, 1, 1, 1, 0],
    ),
    (
        [0.31759, 0.88889, 0.38306, 0.99749, 0.31031],
        [1, 0, 1, 0, 1],
    ),
    (
        [0.75611, 0.33225, 0.90883, 0.33284, 0.89182],
        [1, 1, 0, 1, 0],
    ),
    (
        [0.02275, 0.35458, 0.20985, 0.98929, 0.54591],
        [1, 1, 1, 0, 0],
    ),
    (
        [0.20804, 0.99488, 0.07421, 0.93896, 0.18774],
        [1, 0, 1, 0, 1],
    ),
    (
        [0.75760, 0.00952, 0.14548, 0.54478, 0.78840],
        [1, 1, 1, 1, 0],
    ),
];

#[test]
fn sampled_states_follow_draw_threshold() {
    let net: Network<f64> = canonical_bridge();
    for (draws, states) in DRAW_ROWS {
        let mut replay = ReplayDraws::new(draws.to_vec());
        let x = sample_state(&net, &PartialAssignment::empty(), &mut replay).unwrap();
        assert_eq!(x.digits(), states.to_vec());
        assert_eq!(replay.remaining(), 0);
    }
}

#[test]
fn fixed_arcs_are_copied() {
    let net: Network<f64> = canonical_bridge();
    let fixed = PartialAssignment::from_states(&ids(&[4, 5]), &[1, 1]).unwrap();
    let mut stream = RandomStream::new(3);
    for _ in 0..50 {
        let x = sample_state(&net, &fixed, &mut stream).unwrap();
        assert!(x.get(ArcId(4)) && x.get(ArcId(5)));
    }
    // Only the three free arcs consume draws.
    let mut replay = ReplayDraws::new(vec![0.95, 0.1, 0.1]);
    let x = sample_state(&net, &fixed, &mut replay).unwrap();
    assert_eq!(x.digits(), vec![0, 1, 1, 1, 1]);
}

#[test]
fn crude_degenerate_networks() {
    let sure = canonical_bridge::<f64>()
        .map_probabilities(|_| 1.0)
        .unwrap();
    let e = crude_mcs(&sure, 1000, &RandomStream::new(1)).unwrap();
    assert_eq!(e.value, 1.0);
    assert_eq!(e.n_pass, 1000);

    let bridge: Network<f64> = canonical_bridge();
    let cut_dead = bridge
        .map_probabilities(|p| if *p == 0.6 || *p == 0.5 { 0.0 } else { *p })
        .unwrap();
    let e = crude_mcs(&cut_dead, 1000, &RandomStream::new(1)).unwrap();
    assert_eq!(e.value, 0.0);
    assert!(crude_mcs(&bridge, 0, &RandomStream::new(1)).is_err());
}

#[test]
fn crude_replay_is_pass_ratio() {
    let net: Network<f64> = canonical_bridge();
    let draws: Vec<f64> = DRAW_ROWS.iter().flat_map(|(d, _)| d.to_vec()).collect();
    let source = ReplaySource {
        streams: vec![draws],
    };
    let e = crude_mcs(&net, 16, &source).unwrap();
    // Connectivity verdicts come from the bridge topology, not the printed column.
    let passes = DRAW_ROWS
        .iter()
        .filter(|(_, s)| plsa_connected_digits(&net, s))
        .count() as u64;
    assert_eq!(e.n_pass, passes);
    assert_eq!(e.n_pass, 14);
    assert_eq!(e.value, e.n_pass as f64 / 16.0);
    assert_eq!(e.formula, EstimatorFormula::PassRatio);
}

fn plsa_connected_digits(net: &Network<f64>, digits: &[u8]) -> bool {
    crate::traversal::plsa_connected(net, &StateVector::from_digits(digits)).unwrap()
}

#[test]
fn bat_weighted_sum_worked_example() {
    let probs = [rat("0.02"), rat("0.18"), rat("0.08"), rat("0.72")];
    let value = weighted_stratum_sum(&probs, &[0, 2, 1, 8], &[1, 3, 2, 10]);
    assert_eq!(value, rat("0.736"));

    let value: f64 = weighted_stratum_sum(&[0.02, 0.18, 0.08, 0.72], &[0, 2, 1, 8], &[1, 3, 2, 10]);
    assert!((value - 0.7360).abs() < 1e-12);
    // Strata without trials contribute nothing.
    assert_eq!(weighted_stratum_sum(&[0.5, 0.5], &[0, 1], &[0, 1]), 0.5);
}

#[test]
fn bat_plan_uses_first_beta_arcs() {
    let net: Network<f64> = canonical_bridge();
    let plan = StratifiedPlan::bat_mcs(&net, 2, 16).unwrap();
    assert_eq!(plan.strata.cut_arcs, ids(&[1, 2]));
    assert_eq!(plan.allocation.counts, vec![1, 3, 1, 11]);
    assert!(!plan.allocation.exact);
    let (value, formula) = plan.combine(&[0, 2, 1, 8]);
    assert_eq!(formula, EstimatorFormula::WeightedStrata);
    assert!((value - (0.18 * 2.0 / 3.0 + 0.08 + 0.72 * 8.0 / 11.0)).abs() < 1e-12);
}

#[test]
fn bat_preconditions() {
    let single: Network<f64> = Network::new(2, 1, 2, [(1, 2, 0.5)]).unwrap();
    assert!(matches!(
        bat_mcs(&single, 1, 10, &RandomStream::new(0)),
        Err(Error::Domain(_))
    ));
    let net: Network<f64> = canonical_bridge();
    assert!(bat_mcs(&net, 0, 10, &RandomStream::new(0)).is_err());
    assert_eq!(
        bat_mcs(&net, 3, 7, &RandomStream::new(0)).unwrap_err(),
        Error::BudgetTooSmall {
            n_sim: 7,
            strata: 8
        }
    );

    let sure = net.map_probabilities(|_| 1.0).unwrap();
    let e = bat_mcs(&sure, 2, 100, &RandomStream::new(0)).unwrap();
    assert_eq!(e.value, 1.0);
}

#[test]
fn normalization_factor_values() {
    let net: Network<Rational> = canonical_bridge();
    let cut = LayerCut {
        arcs: ids(&[4, 5]),
        index: 2,
    };
    assert_eq!(normalization_factor(&net, &cut, 16).unwrap(), rat("0.05"));
    assert_eq!(
        normalization_factor(&net, &cut, 16).unwrap() * rat("13"),
        rat("0.65")
    );

    let fnet: Network<f64> = canonical_bridge();
    let gamma = normalization_factor(&fnet, &cut, 16).unwrap();
    assert!((gamma - 0.05).abs() < 1e-15);
    let long_way = normalization_factor_by_enumeration(&fnet, &cut, 16).unwrap();
    assert!((gamma - long_way).abs() < 1e-12);

    let sure = fnet.map_probabilities(|_| 1.0).unwrap();
    assert_eq!(normalization_factor(&sure, &cut, 8).unwrap(), 0.125);

    let halves: Network<f64> =
        Network::new(3, 1, 3, [(1, 2, 0.5), (1, 3, 0.5), (2, 3, 0.5)]).unwrap();
    let cut = LayerCut {
        arcs: ids(&[1, 2]),
        index: 1,
    };
    assert!((normalization_factor(&halves, &cut, 3).unwrap() - 0.25).abs() < 1e-15);
    assert!(normalization_factor(&halves, &cut, 0).is_err());
}

#[test]
fn cbat_plan_for_bridge() {
    let net: Network<Rational> = canonical_bridge();
    let plan = StratifiedPlan::cbat_mcs(&net, 16).unwrap();
    assert_eq!(plan.cut.as_ref().unwrap().arcs, ids(&[4, 5]));
    assert_eq!(plan.probabilities, vec![rat("0.3"), rat("0.2"), rat("0.3")]);
    assert_eq!(
        plan.allocation,
        BudgetAllocation {
            counts: vec![6, 4, 6],
            exact: true
        }
    );
    assert_eq!(plan.gamma, Some(rat("0.05")));
    let (value, formula) = plan.combine(&[4, 3, 6]);
    assert_eq!(value, rat("0.65"));
    assert_eq!(formula, EstimatorFormula::PooledGamma);
}

#[test]
fn cbat_replay_of_worked_draws() {
    let net: Network<f64> = canonical_bridge();
    let blocks: Vec<Vec<f64>> = vec![
        vec![
            0.92168, 0.71974, 0.73371, 0.40533, 0.33365, 0.66730, 0.71173, 0.83719, 0.66681,
            0.33772, 0.36953, 0.55257, 0.39771, 0.73576, 0.35345, 0.78790, 0.43831, 0.72763,
        ],
        vec![
            0.56750, 0.02068, 0.04221, 0.78631, 0.79431, 0.96743, 0.34288, 0.56388, 0.52413,
            0.94191, 0.66559, 0.92689,
        ],
        vec![
            0.19682, 0.65801, 0.28775, 0.31759, 0.88889, 0.38306, 0.75611, 0.33225, 0.90883,
            0.02275, 0.35458, 0.20985, 0.20804, 0.99488, 0.07421, 0.75760, 0.00952, 0.14548,
        ],
    ];
    let e = cbat_mcs(&net, 16, &ReplaySource { streams: blocks }).unwrap();
    let passes: Vec<u64> = e.per_stratum.iter().map(|s| s.n_pass).collect();
    assert_eq!(passes, vec![5, 4, 6]);
    assert_eq!(e.formula, EstimatorFormula::PooledGamma);
    assert_eq!(e.value, e.gamma.unwrap() * e.n_pass as f64);
    assert!((e.value - 0.75).abs() < 1e-12);
}

#[test]
fn cbat_degenerate_and_errors() {
    let sure = canonical_bridge::<f64>()
        .map_probabilities(|_| 1.0)
        .unwrap();
    let e = cbat_mcs(&sure, 300, &RandomStream::new(5)).unwrap();
    assert_eq!(e.value, 1.0);

    let net: Network<f64> = canonical_bridge();
    assert_eq!(
        cbat_mcs(&net, 2, &RandomStream::new(5)).unwrap_err(),
        Error::BudgetTooSmall {
            n_sim: 2,
            strata: 3
        }
    );
    let split: Network<f64> = Network::new(4, 1, 4, [(1, 2, 0.5), (3, 4, 0.5)]).unwrap();
    assert_eq!(
        cbat_mcs(&split, 100, &RandomStream::new(5)).unwrap_err(),
        Error::SinkUnreachable
    );

    // Cut arcs that never work: every stratum is impossible.
    let dead = net
        .map_probabilities(|p| if *p == 0.6 || *p == 0.5 { 0.0 } else { *p })
        .unwrap();
    let e = cbat_mcs(&dead, 30, &RandomStream::new(5)).unwrap();
    assert_eq!(e.value, 0.0);
    assert_eq!(e.n_sim, 30);
}

#[test]
fn rounded_cbat_uses_weighted_sum() {
    let net: Network<f64> = canonical_bridge();
    let plan = StratifiedPlan::cbat_mcs(&net, 17).unwrap();
    assert!(!plan.allocation.exact);
    let (_, formula) = plan.combine(&[1, 1, 1]);
    assert_eq!(formula, EstimatorFormula::WeightedStrata);
}

#[test]
fn stratified_tallies_add_up() {
    let net: Network<f64> = canonical_bridge();
    for method in [Method::BatMcs, Method::CbatMcs] {
        let e = estimate(&net, method, 997, 2, &RandomStream::new(11)).unwrap();
        assert_eq!(e.per_stratum.iter().map(|s| s.n_sim).sum::<u64>(), e.n_sim);
        assert_eq!(
            e.per_stratum.iter().map(|s| s.n_pass).sum::<u64>(),
            e.n_pass
        );
        assert_eq!(e.n_sim, 997);
        assert!(e.per_stratum.iter().all(|s| s.n_pass <= s.n_sim));
        assert!((0.0..=1.0).contains(&e.value));
    }
}

#[test]
fn estimates_are_deterministic() {
    let net: Network<f64> = canonical_bridge();
    for method in Method::ALL {
        let a = estimate(&net, method, 5000, 2, &RandomStream::new(99)).unwrap();
        let b = estimate(&net, method, 5000, 2, &RandomStream::new(99)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.per_stratum, b.per_stratum);
        assert_eq!(a.seed, Some(99));
        let c = estimate(&net, method, 5000, 2, &RandomStream::new(100)).unwrap();
        assert_ne!(a.n_pass, c.n_pass, "{method}: seeds should decorrelate");
    }
}

#[test]
fn exact_expectation_matches_reliability() {
    let net: Network<Rational> = canonical_bridge();
    let exact = exact_reliability(&net).unwrap();
    for plan in [
        StratifiedPlan::bat_mcs(&net, 2, 16).unwrap(),
        StratifiedPlan::cbat_mcs(&net, 16).unwrap(),
        StratifiedPlan::cbat_mcs(&net, 17).unwrap(),
    ] {
        let conditionals: Vec<Rational> = plan
            .strata
            .members
            .iter()
            .map(|m| conditional_reliability(&net, m).unwrap())
            .collect();
        let expected = match (&plan.gamma, plan.allocation.exact) {
            (Some(gamma), true) => plan
                .allocation
                .counts
                .iter()
                .zip(&conditionals)
                .fold(Rational::from_count(0), |acc, (&n, c)| {
                    acc + gamma.clone() * Rational::from_count(n) * c.clone()
                }),
            _ => plan
                .probabilities
                .iter()
                .zip(&conditionals)
                .fold(Rational::from_count(0), |acc, (p, c)| {
                    acc + p.clone() * c.clone()
                }),
        };
        assert_eq!(expected, exact);
    }
}

#[test]
fn sample_size_planning() {
    assert_eq!(required_sample_size(0.9, 0.01, 0.05).unwrap(), 4269);
    assert_eq!(required_sample_size(0.5, 0.1, 0.05).unwrap(), 385);
    assert_eq!(required_sample_size(1.0, 0.01, 0.05).unwrap(), 0);
    assert!(required_sample_size(0.0, 0.01, 0.05).is_err());
    assert!(required_sample_size(0.9, 0.0, 0.05).is_err());
    assert!(required_sample_size(0.9, 0.01, 1.0).is_err());
}

#[test]
fn variance_scale_values() {
    let net: Network<Rational> = canonical_bridge();
    let cut = LayerCut {
        arcs: ids(&[4, 5]),
        index: 2,
    };
    assert_eq!(variance_scale(&net, &cut).unwrap(), rat("0.64"));
    let sure = net.map_probabilities(|_| rat("1")).unwrap();
    assert_eq!(variance_scale(&sure, &cut).unwrap(), rat("1"));
    let other = LayerCut {
        arcs: ids(&[1, 2]),
        index: 1,
    };
    assert!(variance_scale(&net, &other).unwrap() <= rat("1"));
}

#[test]
fn method_names_round_trip() {
    for m in Method::ALL {
        assert_eq!(m.name().parse::<Method>().unwrap(), m);
    }
    assert!("mcs".parse::<Method>().is_err());
}
