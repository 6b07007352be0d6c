//! Network data model, the line-oriented network file format, and
//! probabilities of full and partial arc-state assignments.
//!
//! File format (`#` starts a comment, blank lines ignored):
//!
//! ```text
//! nodes 4
//! source 1
//! sink 4
//! arc 1 2 0.9
//! arc 1 3 0.8
//! ```
//!
//! Arcs are numbered 1..m in file order; that order is also the coordinate
//! order of state vectors (arc 1 is the least-significant coordinate).

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{one_minus, Probability};

/// 1-based arc identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcId(pub usize);

impl ArcId {
    /// Zero-based position in the arc sequence.
    pub fn index(self) -> usize {
        self.0 - 1
    }

    pub fn from_index(index: usize) -> Self {
        ArcId(index + 1)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

/// An undirected arc between two 1-based node ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub id: ArcId,
    pub u: usize,
    pub v: usize,
}

/// Undirected binary-state network with a designated source and sink.
///
/// Immutable after construction; the adjacency index is built once and shared
/// by every connectivity query.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<P> {
    node_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
    probabilities: Vec<P>,
    // Per node (0-based): (neighbour 0-based, arc index 0-based), ascending arc id.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl<P> Network<P> {
    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Result<&Arc> {
        self.check_arc(id)?;
        Ok(&self.arcs[id.index()])
    }

    pub fn probabilities(&self) -> &[P] {
        &self.probabilities
    }

    pub fn probability(&self, id: ArcId) -> Result<&P> {
        self.check_arc(id)?;
        Ok(&self.probabilities[id.index()])
    }

    /// Neighbours of a 0-based node as `(node, arc index)`, ascending arc id.
    pub(crate) fn neighbours(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.arcs.iter().map(|a| a.id)
    }

    fn check_arc(&self, id: ArcId) -> Result<()> {
        if id.0 == 0 || id.0 > self.arcs.len() {
            Err(Error::UnknownArc(id))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_length(&self, state: &StateVector) -> Result<()> {
        if state.len() != self.arcs.len() {
            Err(Error::LengthMismatch {
                expected: self.arcs.len(),
                actual: state.len(),
            })
        } else {
            Ok(())
        }
    }
}

impl<P: Probability> Network<P> {
    /// Builds and validates a network. `arcs` holds `(u, v, probability)` in
    /// arc-id order.
    pub fn new(
        node_count: usize,
        source: usize,
        sink: usize,
        arcs: impl IntoIterator<Item = (usize, usize, P)>,
    ) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::NoNodes);
        }
        for node in [source, sink] {
            if node == 0 || node > node_count {
                return Err(Error::NodeOutOfRange { node, node_count });
            }
        }
        if source == sink {
            return Err(Error::SourceIsSink(source));
        }

        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut arc_list = Vec::new();
        let mut probabilities = Vec::new();
        let mut adjacency = vec![Vec::new(); node_count];
        for (index, (u, v, p)) in arcs.into_iter().enumerate() {
            let id = ArcId::from_index(index);
            for node in [u, v] {
                if node == 0 || node > node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { arc: id.0, node: u });
            }
            if !p.is_unit_interval() {
                return Err(Error::ProbabilityOutOfRange {
                    arc: id.0,
                    value: p.to_text(),
                });
            }
            let key = (u.min(v), u.max(v));
            if let Some(&previous) = seen.get(&key) {
                return Err(Error::DuplicateArc {
                    arc: id.0,
                    u,
                    v,
                    previous,
                });
            }
            seen.insert(key, id.0);
            adjacency[u - 1].push((v - 1, index));
            adjacency[v - 1].push((u - 1, index));
            arc_list.push(Arc { id, u, v });
            probabilities.push(p);
        }

        Ok(Network {
            node_count,
            source,
            sink,
            arcs: arc_list,
            probabilities,
            adjacency,
        })
    }

    /// Probability of a partial assignment: the product of `Pr(a)` over
    /// working arcs and `1 - Pr(a)` over failed arcs. Empty assignments have
    /// probability one.
    pub fn assignment_probability(&self, assignment: &PartialAssignment) -> Result<P> {
        let mut product = P::one();
        for &(id, state) in assignment.entries() {
            let p = self.probability(id)?;
            product = product * if state { p.clone() } else { one_minus(p) };
        }
        Ok(product)
    }

    /// Probability that every listed arc has failed.
    pub fn zero_assignment_probability(&self, arcs: &[ArcId]) -> Result<P> {
        let mut product = P::one();
        for (i, &id) in arcs.iter().enumerate() {
            if arcs[..i].contains(&id) {
                return Err(Error::RepeatedArc(id));
            }
            product = product * one_minus(self.probability(id)?);
        }
        Ok(product)
    }

    /// Probability of a full state vector.
    pub fn state_probability(&self, state: &StateVector) -> Result<P> {
        self.check_length(state)?;
        Ok(self
            .probabilities
            .iter()
            .zip(state.bits())
            .fold(P::one(), |acc, (p, &up)| {
                acc * if up { p.clone() } else { one_minus(p) }
            }))
    }

    /// Same topology with probabilities converted through `f`.
    pub fn map_probabilities<Q: Probability>(
        &self,
        mut f: impl FnMut(&P) -> Q,
    ) -> Result<Network<Q>> {
        Network::new(
            self.node_count,
            self.source,
            self.sink,
            self.arcs
                .iter()
                .zip(&self.probabilities)
                .map(|(a, p)| (a.u, a.v, f(p))),
        )
    }

    /// Renders the network in the file format accepted by [`parse_network`].
    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "nodes {}\nsource {}\nsink {}\n",
            self.node_count, self.source, self.sink
        );
        for (arc, p) in self.arcs.iter().zip(&self.probabilities) {
            out.push_str(&format!("arc {} {} {}\n", arc.u, arc.v, p.to_text()));
        }
        out
    }
}

/// The four-node bridge network used throughout the worked examples:
/// a1:1-2, a2:1-3, a3:2-3, a4:2-4, a5:3-4 with working probabilities
/// 0.9, 0.8, 0.7, 0.6, 0.5, source 1 and sink 4.
pub fn canonical_bridge<P: Probability>() -> Network<P> {
    let p = |text: &str| P::parse_decimal(text).expect("literal probability");
    Network::new(
        4,
        1,
        4,
        [
            (1, 2, p("0.9")),
            (1, 3, p("0.8")),
            (2, 3, p("0.7")),
            (2, 4, p("0.6")),
            (3, 4, p("0.5")),
        ],
    )
    .expect("bridge network is valid")
}

/// Parses the network file format. Errors carry the 1-based line number.
pub fn parse_network<P: Probability>(text: &str) -> Result<Network<P>> {
    let mut header: [Option<usize>; 3] = [None; 3];
    let keywords = ["nodes", "source", "sink"];
    let mut arcs = Vec::new();
    let mut arc_lines = Vec::new();

    for (number, raw) in text.lines().enumerate() {
        let line_no = number + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| Error::Syntax {
            line: line_no,
            message,
        };
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap_or_default();
        let fields: Vec<&str> = tokens.collect();

        let expected_header = header.iter().position(Option::is_none);
        match (keyword, expected_header) {
            (_, Some(slot)) => {
                if keyword != keywords[slot] {
                    return Err(syntax(format!(
                        "expected `{} <id>`, found `{content}`",
                        keywords[slot]
                    )));
                }
                if fields.len() != 1 {
                    return Err(syntax(format!("`{keyword}` takes exactly one integer")));
                }
                let value = fields[0].parse::<usize>().map_err(|_| {
                    syntax(format!("`{}` is not a non-negative integer", fields[0]))
                })?;
                header[slot] = Some(value);
            }
            ("arc", None) => {
                if fields.len() != 3 {
                    return Err(syntax("expected `arc <u> <v> <p>`".to_string()));
                }
                let node = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| syntax(format!("`{s}` is not a node id")))
                };
                let u = node(fields[0])?;
                let v = node(fields[1])?;
                let p = P::parse_decimal(fields[2])
                    .ok_or_else(|| syntax(format!("`{}` is not a probability", fields[2])))?;
                arcs.push((u, v, p));
                arc_lines.push(line_no);
            }
            _ => return Err(syntax(format!("unexpected `{keyword}`"))),
        }
    }

    let [Some(nodes), Some(source), Some(sink)] = header else {
        let missing = keywords[header.iter().position(Option::is_none).unwrap_or(0)];
        return Err(Error::Syntax {
            line: text.lines().count().max(1),
            message: format!("missing `{missing}` line"),
        });
    };

    Network::new(nodes, source, sink, arcs).map_err(|err| locate(err, &arc_lines))
}

// Attach the offending line to validation errors that name an arc.
fn locate(err: Error, arc_lines: &[usize]) -> Error {
    let arc = match &err {
        Error::ProbabilityOutOfRange { arc, .. }
        | Error::DuplicateArc { arc, .. }
        | Error::SelfLoop { arc, .. } => Some(*arc),
        _ => None,
    };
    match arc.and_then(|a| arc_lines.get(a - 1)) {
        Some(&line) => Error::Syntax {
            line,
            message: err.to_string(),
        },
        None => err,
    }
}

/// Full assignment of states to all m arcs; position i holds the state of arc i+1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateVector(Vec<bool>);

impl StateVector {
    pub fn zeros(len: usize) -> Self {
        StateVector(vec![false; len])
    }

    pub fn ones(len: usize) -> Self {
        StateVector(vec![true; len])
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        StateVector(bits)
    }

    /// From 0/1 digits; any non-zero digit counts as working.
    pub fn from_digits(digits: &[u8]) -> Self {
        StateVector(digits.iter().map(|&d| d != 0).collect())
    }

    /// Unpacks a machine word: bit i holds coordinate i+1.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        StateVector((0..len).map(|i| mask >> i & 1 == 1).collect())
    }

    /// Packs into a machine word; `None` past 64 coordinates.
    pub fn to_mask(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(
            self.0
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, &b)| m | (b as u64) << i),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.0
    }

    pub fn get(&self, id: ArcId) -> bool {
        self.0[id.index()]
    }

    pub fn set(&mut self, id: ArcId, state: bool) {
        self.0[id.index()] = state;
    }

    pub fn digits(&self) -> Vec<u8> {
        self.0.iter().map(|&b| b as u8).collect()
    }
}

/// States for a subset of arcs, kept in the given order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PartialAssignment {
    entries: Vec<(ArcId, bool)>,
}

impl PartialAssignment {
    pub fn new(entries: Vec<(ArcId, bool)>) -> Result<Self> {
        for (i, (id, _)) in entries.iter().enumerate() {
            if entries[..i].iter().any(|(other, _)| other == id) {
                return Err(Error::RepeatedArc(*id));
            }
        }
        Ok(PartialAssignment { entries })
    }

    /// Zips arc ids with 0/1 states.
    pub fn from_states(arcs: &[ArcId], states: &[u8]) -> Result<Self> {
        if arcs.len() != states.len() {
            return Err(Error::LengthMismatch {
                expected: arcs.len(),
                actual: states.len(),
            });
        }
        Self::new(
            arcs.iter()
                .copied()
                .zip(states.iter().map(|&s| s != 0))
                .collect(),
        )
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[(ArcId, bool)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.entries.iter().map(|e| e.0)
    }

    pub fn states(&self) -> Vec<u8> {
        self.entries.iter().map(|e| e.1 as u8).collect()
    }

    /// Checks every arc exists in `net`.
    pub fn validate<P: Probability>(&self, net: &Network<P>) -> Result<()> {
        for (id, _) in &self.entries {
            net.check_arc(*id)?;
        }
        Ok(())
    }

    /// Per-arc fixed state lookup sized to `arc_count`.
    pub(crate) fn to_lookup(&self, arc_count: usize) -> Vec<Option<bool>> {
        let mut lookup = vec![None; arc_count];
        for &(id, state) in &self.entries {
            lookup[id.index()] = Some(state);
        }
        lookup
    }
}
