//! JSON views printed by the `estimate` and `cuts` subcommands.

use reliacut::estimators::Estimate;
use reliacut::traversal::{layer_cut_partition, LayerCut};
use reliacut::{select_super_cut, ArcId, Network};
use serde::Serialize;

use crate::format::Sig10;

#[derive(Debug, Serialize)]
pub struct CutView {
    /// Position of the cut between layers `index` and `index + 1`.
    pub index: usize,
    pub arcs: Vec<usize>,
    pub all_failed_probability: Sig10,
}

#[derive(Debug, Serialize)]
pub struct StratumView {
    pub arcs: Vec<usize>,
    pub states: Vec<u8>,
    pub probability: Sig10,
    pub n_sim: u64,
    pub n_pass: u64,
}

#[derive(Debug, Serialize)]
pub struct EstimateView {
    pub method: String,
    pub value: Sig10,
    pub formula: String,
    pub n_sim: u64,
    pub n_pass: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Sig10>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<Vec<usize>>,
    pub per_stratum: Vec<StratumView>,
    pub seed: Option<u64>,
    pub wall_time_s: Sig10,
}

#[derive(Debug, Serialize)]
pub struct CutsView {
    pub layers: Vec<Vec<usize>>,
    pub cuts: Vec<CutView>,
    pub residual: Vec<usize>,
    pub super_cut: CutView,
}

fn ids(arcs: &[ArcId]) -> Vec<usize> {
    arcs.iter().map(|a| a.0).collect()
}

pub fn estimate_view(e: &Estimate<f64>) -> EstimateView {
    EstimateView {
        method: e.method.name().to_string(),
        value: Sig10(e.value),
        formula: e.formula.name().to_string(),
        n_sim: e.n_sim,
        n_pass: e.n_pass,
        gamma: e.gamma.map(Sig10),
        cut: e.cut.as_ref().map(|c| ids(&c.arcs)),
        per_stratum: e
            .per_stratum
            .iter()
            .map(|s| StratumView {
                arcs: s.assignment.arcs().map(|a| a.0).collect(),
                states: s.assignment.states(),
                probability: Sig10(s.probability),
                n_sim: s.n_sim,
                n_pass: s.n_pass,
            })
            .collect(),
        seed: e.seed,
        wall_time_s: Sig10(e.wall_time.as_secs_f64()),
    }
}

fn cut_view(net: &Network<f64>, cut: &LayerCut) -> reliacut::Result<CutView> {
    Ok(CutView {
        index: cut.index,
        arcs: ids(&cut.arcs),
        all_failed_probability: Sig10(net.zero_assignment_probability(&cut.arcs)?),
    })
}

pub fn cuts_view(net: &Network<f64>) -> reliacut::Result<CutsView> {
    let partition = layer_cut_partition(net)?;
    let chosen = select_super_cut(net, &partition.cuts)?;
    Ok(CutsView {
        layers: partition.layers.layers.clone(),
        cuts: partition
            .cuts
            .iter()
            .map(|c| cut_view(net, c))
            .collect::<reliacut::Result<_>>()?,
        residual: ids(&partition.residual),
        super_cut: cut_view(net, &chosen)?,
    })
}
