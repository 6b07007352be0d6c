//! Repeated-run experiments over networks, methods and budget tiers.

use rayon::prelude::*;
use reliacut::enumeration::{exact_reliability_with_limit, DEFAULT_ENUMERATION_LIMIT};
use reliacut::estimators::{derive_seed, estimate, StratifiedPlan};
use reliacut::{parse_network, Method, Network, RandomStream};

use crate::config::ExperimentConfig;
use crate::error::{BenchError, Result};
use crate::format::{round_significant, Sig10};
use crate::report::{Comparison, NetworkSummary, ReportRow, RunReport};
use crate::stats::welch_p_value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Record per-run wall time. Off by default so reports are reproducible
    /// byte for byte.
    pub timing: bool,
    /// Largest arc count for which the exact value is enumerated.
    pub exact_limit: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            timing: false,
            exact_limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

pub fn tier_name(index: usize) -> String {
    format!("Ex{}", index + 1)
}

/// Seed for one run: base seed mixed with network, method, tier and run index.
pub fn run_seed(base: u64, network: usize, method: usize, tier: usize, run: usize) -> u64 {
    derive_seed(
        base,
        &[network as u64, method as u64, tier as u64, run as u64],
    )
}

struct LoadedNetwork {
    label: String,
    net: Network<f64>,
    exact: Option<f64>,
}

fn load_networks(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<LoadedNetwork>> {
    cfg.networks
        .iter()
        .map(|entry| {
            let text = std::fs::read_to_string(&entry.path).map_err(|source| BenchError::Io {
                path: entry.path.clone(),
                source,
            })?;
            let net: Network<f64> = parse_network(&text).map_err(|source| BenchError::Network {
                path: entry.path.clone(),
                source,
            })?;
            let exact = if net.arc_count() <= opts.exact_limit {
                let r = exact_reliability_with_limit(&net, opts.exact_limit).map_err(|source| {
                    BenchError::Network {
                        path: entry.path.clone(),
                        source,
                    }
                })?;
                Some(round_significant(r))
            } else {
                None
            };
            Ok(LoadedNetwork {
                label: entry.label.clone(),
                net,
                exact,
            })
        })
        .collect()
}

// Rejects budgets and beta values a method cannot run with, before any sampling.
fn check_feasible(cfg: &ExperimentConfig, nets: &[LoadedNetwork]) -> Result<()> {
    for n in nets {
        for &method in &cfg.methods {
            for &n_sim in &cfg.nsim {
                let plan = match method {
                    Method::Crude => Ok(()),
                    Method::BatMcs => StratifiedPlan::bat_mcs(&n.net, cfg.beta, n_sim).map(|_| ()),
                    Method::CbatMcs => StratifiedPlan::cbat_mcs(&n.net, n_sim).map(|_| ()),
                };
                plan.map_err(|source| BenchError::Estimation {
                    context: format!("{} / {} / n_sim {}", n.label, method, n_sim),
                    source,
                })?;
            }
        }
    }
    Ok(())
}

pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport> {
    cfg.validate()?;
    let nets = load_networks(cfg, opts)?;
    check_feasible(cfg, &nets)?;

    let mut jobs = Vec::new();
    for ni in 0..nets.len() {
        for mi in 0..cfg.methods.len() {
            for ti in 0..cfg.nsim.len() {
                for run in 0..cfg.nrun {
                    jobs.push((ni, mi, ti, run));
                }
            }
        }
    }
    let outcomes: Vec<(f64, f64)> = jobs
        .par_iter()
        .map(|&(ni, mi, ti, run)| {
            let (net, method, n_sim) = (&nets[ni].net, cfg.methods[mi], cfg.nsim[ti]);
            let stream = RandomStream::new(run_seed(cfg.seed, ni, mi, ti, run));
            let e = estimate(net, method, n_sim, cfg.beta, &stream).map_err(|source| {
                BenchError::Estimation {
                    context: format!(
                        "{} / {} / n_sim {} / run {}",
                        nets[ni].label, method, n_sim, run
                    ),
                    source,
                }
            })?;
            Ok((
                round_significant(e.value),
                round_significant(e.wall_time.as_secs_f64()),
            ))
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut chunks = outcomes.chunks(cfg.nrun);
    for n in &nets {
        for &method in &cfg.methods {
            for (ti, &n_sim) in cfg.nsim.iter().enumerate() {
                let chunk = chunks.next().expect("one chunk per cell");
                let estimates = chunk.iter().map(|o| o.0).collect();
                let times = opts.timing.then(|| chunk.iter().map(|o| o.1).collect());
                rows.push(ReportRow::from_runs(
                    &n.label,
                    method.name(),
                    &tier_name(ti),
                    n_sim,
                    estimates,
                    n.exact,
                    times,
                )?);
            }
        }
    }

    let comparisons = compare_methods(cfg, &nets, &rows)?;
    Ok(RunReport {
        seed: cfg.seed,
        beta: cfg.beta,
        networks: nets
            .iter()
            .map(|n| NetworkSummary {
                network: n.label.clone(),
                nodes: n.net.node_count(),
                arcs: n.net.arc_count(),
                exact: n.exact.map(Sig10),
            })
            .collect(),
        rows,
        comparisons,
    })
}

fn compare_methods(
    cfg: &ExperimentConfig,
    nets: &[LoadedNetwork],
    rows: &[ReportRow],
) -> Result<Vec<Comparison>> {
    let tiers = cfg.nsim.len();
    let methods = cfg.methods.len();
    let row = |ni: usize, mi: usize, ti: usize| &rows[(ni * methods + mi) * tiers + ti];
    let mut out = Vec::new();
    for (ni, n) in nets.iter().enumerate() {
        for ti in 0..tiers {
            for a in 0..methods {
                for b in a + 1..methods {
                    let (ra, rb) = (row(ni, a, ti), row(ni, b, ti));
                    let estimate_p = welch_p_value(&ra.estimate_values(), &rb.estimate_values())?;
                    let abs_error_p = match n.exact {
                        Some(r) => {
                            let errs = |row: &ReportRow| -> Vec<f64> {
                                row.estimates.iter().map(|e| (r - e.0).abs()).collect()
                            };
                            Some(Sig10(welch_p_value(&errs(ra), &errs(rb))?))
                        }
                        None => None,
                    };
                    let time_p = match (&ra.timing, &rb.timing) {
                        (Some(ta), Some(tb)) => {
                            let secs = |t: &crate::report::Timing| -> Vec<f64> {
                                t.runs_s.iter().map(|s| s.0).collect()
                            };
                            Some(Sig10(welch_p_value(&secs(ta), &secs(tb))?))
                        }
                        _ => None,
                    };
                    out.push(Comparison {
                        network: n.label.clone(),
                        tier: tier_name(ti),
                        method_a: ra.method.clone(),
                        method_b: rb.method.clone(),
                        estimate_p: Sig10(estimate_p),
                        abs_error_p,
                        time_p,
                    });
                }
            }
        }
    }
    Ok(out)
}
