//! Layered source-to-sink search, layer decomposition, layer-cuts, and
//! selection of the super-cut used to stratify the sampler.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::net_model::{ArcId, Network, StateVector};
use crate::scalar::Probability;

/// Reusable scratch space for layered connectivity searches.
///
/// One instance per thread; queries never share mutable state.
#[derive(Debug, Default, Clone)]
pub struct LayeredSearch {
    visited: Vec<bool>,
    current: Vec<usize>,
    next: Vec<usize>,
}

impl LayeredSearch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Whether the sink is reachable from the source using only arcs for
    /// which `is_up(arc_index)` holds. Expands one layer per iteration and
    /// stops as soon as the sink enters a layer or a layer comes out empty,
    /// so at most n-1 expansions run.
    pub fn connected<P>(&mut self, net: &Network<P>, is_up: impl Fn(usize) -> bool) -> bool {
        let n = net.node_count();
        let (source, sink) = (net.source() - 1, net.sink() - 1);
        self.visited.clear();
        self.visited.resize(n, false);
        self.current.clear();
        self.current.push(source);
        self.visited[source] = true;

        while !self.current.is_empty() {
            self.next.clear();
            for &u in &self.current {
                for &(v, arc) in net.neighbours(u) {
                    if !self.visited[v] && is_up(arc) {
                        if v == sink {
                            return true;
                        }
                        self.visited[v] = true;
                        self.next.push(v);
                    }
                }
            }
            std::mem::swap(&mut self.current, &mut self.next);
        }
        false
    }

    pub fn connected_state<P>(&mut self, net: &Network<P>, state: &StateVector) -> bool {
        let bits = state.bits();
        self.connected(net, |arc| bits[arc])
    }

    /// Packed-word variant: bit i of `mask` is the state of arc i+1.
    pub fn connected_mask<P>(&mut self, net: &Network<P>, mask: u64) -> bool {
        self.connected(net, |arc| mask >> arc & 1 == 1)
    }
}

/// Whether the sink is reachable from the source in the subnetwork of working arcs.
pub fn plsa_connected<P: Probability>(net: &Network<P>, state: &StateVector) -> Result<bool> {
    net.check_length(state)?;
    Ok(LayeredSearch::new().connected_state(net, state))
}

/// Breadth layers L1..Lλ of node ids (1-based, each layer sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub layers: Vec<Vec<usize>>,
}

impl LayerDecomposition {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    /// 1-based index of the layer holding `node`.
    pub fn layer_of(&self, node: usize) -> Option<usize> {
        self.layers
            .iter()
            .position(|layer| layer.binary_search(&node).is_ok())
            .map(|i| i + 1)
    }
}

fn layer_sweep<P>(net: &Network<P>, stop_at_sink: bool) -> Result<LayerDecomposition> {
    let n = net.node_count();
    let mut visited = vec![false; n];
    let source = net.source() - 1;
    visited[source] = true;
    let mut layers = vec![vec![source]];
    let mut sink_seen = false;

    loop {
        let mut next = Vec::new();
        for &u in layers.last().expect("non-empty") {
            for &(v, _) in net.neighbours(u) {
                if !visited[v] {
                    visited[v] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        sink_seen |= next.contains(&(net.sink() - 1));
        layers.push(next);
        if sink_seen && stop_at_sink {
            break;
        }
    }

    if !sink_seen {
        return Err(Error::SinkUnreachable);
    }
    Ok(LayerDecomposition {
        layers: layers
            .into_iter()
            .map(|layer| layer.into_iter().map(|v| v + 1).collect())
            .collect(),
    })
}

/// Layer decomposition of the full network, halting at the sink's layer.
pub fn compute_layers<P>(net: &Network<P>) -> Result<LayerDecomposition> {
    layer_sweep(net, true)
}

/// Layer decomposition continued until no new node is reachable.
pub fn compute_all_layers<P>(net: &Network<P>) -> Result<LayerDecomposition> {
    layer_sweep(net, false)
}

/// Arcs joining layer `index` to layer `index + 1`, ascending arc id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerCut {
    pub arcs: Vec<ArcId>,
    pub index: usize,
}

impl LayerCut {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }
}

/// Every arc of the network sorted into a layer-cut or the residual set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerCutPartition {
    pub layers: LayerDecomposition,
    /// Cuts between consecutive layers up to the sink's layer. Each one
    /// separates source from sink.
    pub cuts: Vec<LayerCut>,
    /// Arcs in no cut: arcs inside a layer, arcs past the sink's layer, and
    /// arcs between unreachable nodes.
    pub residual: Vec<ArcId>,
}

/// Layers, layer-cuts and residual arc set.
///
/// Layer k < λ contributes cut c_k only when the sink lies beyond layer k:
/// arcs between layers at or after the sink's layer do not separate the
/// terminals and go to the residual set instead.
pub fn layer_cut_partition<P>(net: &Network<P>) -> Result<LayerCutPartition> {
    let layers = compute_all_layers(net)?;
    let mut layer_of = vec![0usize; net.node_count() + 1];
    for (i, layer) in layers.layers.iter().enumerate() {
        for &v in layer {
            layer_of[v] = i + 1;
        }
    }
    let sink_layer = layer_of[net.sink()];

    let mut cuts: Vec<LayerCut> = (1..sink_layer)
        .map(|index| LayerCut {
            arcs: Vec::new(),
            index,
        })
        .collect();
    let mut residual = Vec::new();
    for arc in net.arcs() {
        let (lu, lv) = (layer_of[arc.u], layer_of[arc.v]);
        let low = lu.min(lv);
        if lu != 0 && lv != 0 && lu.abs_diff(lv) == 1 && low < sink_layer {
            cuts[low - 1].arcs.push(arc.id);
        } else {
            residual.push(arc.id);
        }
    }
    Ok(LayerCutPartition {
        layers,
        cuts,
        residual,
    })
}

/// Layer-cuts c1..c(k-1) where k is the sink's layer.
pub fn find_layer_cuts<P>(net: &Network<P>) -> Result<Vec<LayerCut>> {
    Ok(layer_cut_partition(net)?.cuts)
}

/// Chooses the cut with the fewest arcs; among equally small cuts the one
/// most likely to fail entirely, then the lowest layer index.
pub fn select_super_cut<P: Probability>(net: &Network<P>, cuts: &[LayerCut]) -> Result<LayerCut> {
    let mut best: Option<(&LayerCut, P)> = None;
    for cut in cuts {
        let zero = net.zero_assignment_probability(&cut.arcs)?;
        let better = match &best {
            None => true,
            Some((current, current_zero)) => match cut.len().cmp(&current.len()) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => match zero.partial_cmp(current_zero) {
                    Some(Ordering::Greater) => true,
                    Some(Ordering::Less) => false,
                    _ => cut.index < current.index,
                },
            },
        };
        if better {
            best = Some((cut, zero));
        }
    }
    best.map(|(cut, _)| cut.clone()).ok_or(Error::EmptyCutList)
}
