//! Relative interaction matrices and the structure of their digraphs.
//!
//! The digraph `G(C)` has an edge `i -> j` iff `c_ij > 0`. Every equilibrium
//! and convergence statement downstream dispatches on [`classify`]: strongly
//! connected networks, networks whose condensation has a single sink
//! (globally reachable nodes), and networks with several sinks.

use std::ops::Deref;

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;

/// Tolerance used when validating row sums and diagonals.
pub const VALIDATION_TOL: f64 = 1e-9;

/// 0-based node index. External formats use 1-based ids.
pub type NodeId = usize;

/// Constant row-stochastic matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeInteractionMatrix {
    m: SquareMatrix,
}

impl RelativeInteractionMatrix {
    /// Validates a raw matrix and renormalizes each row to sum to 1.
    ///
    /// Rows whose sum is within `tol` of 1 are rescaled unless they already
    /// sum to 1 up to summation round-off, so validating a validated matrix
    /// changes nothing. Diagonal entries and
    /// negative entries within `tol` of 0 are snapped to 0. Anything further
    /// off is rejected.
    pub fn validate<R: AsRef<[f64]>>(raw: &[R], tol: f64) -> Result<Self> {
        let n = raw.len();
        for (i, row) in raw.iter().enumerate() {
            let len = row.as_ref().len();
            if len != n {
                return Err(Error::NonSquare { row: i, len, expected: n });
            }
        }
        if n < 2 {
            return Err(Error::TooSmall { n, min: 2 });
        }

        let mut m = SquareMatrix::from_rows(raw);
        for i in 0..n {
            for j in 0..n {
                let v = m[(i, j)];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if v < 0.0 {
                    if v < -tol {
                        return Err(Error::NegativeEntry { row: i, col: j, value: v });
                    }
                    m[(i, j)] = 0.0;
                }
            }
            let d = m[(i, i)];
            if d > tol {
                return Err(Error::DiagonalNonzero { node: i, value: d });
            }
            m[(i, i)] = 0.0;

            let sum = m.row_sum(i);
            if (sum - 1.0).abs() > tol {
                return Err(Error::RowSumOutOfTolerance { row: i, sum });
            }
            if (sum - 1.0).abs() > n as f64 * f64::EPSILON {
                m.row_mut(i).iter_mut().for_each(|v| *v /= sum);
            }
        }
        Ok(Self { m })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::validate(rows, VALIDATION_TOL)
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.m
    }

    pub fn has_edge(&self, i: NodeId, j: NodeId) -> bool {
        self.m[(i, j)] > 0.0
    }

    /// Out-neighbours of `i` in `G(C)`.
    pub fn successors(&self, i: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.m
            .row(i)
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.0)
            .map(|(j, _)| j)
    }
}

impl Deref for RelativeInteractionMatrix {
    type Target = SquareMatrix;

    fn deref(&self) -> &SquareMatrix {
        &self.m
    }
}

/// Strongly connected components of `G(C)` and the condensation digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Components in reverse topological order: every edge between
    /// components goes from a later component to an earlier one, so the
    /// sinks come first among their descendants. Nodes inside a component
    /// are sorted.
    pub components: Vec<Vec<NodeId>>,
    /// `component_of[i]` indexes into `components`.
    pub component_of: Vec<usize>,
    /// Deduplicated, sorted condensation edges `(from, to)`.
    pub edges: Vec<(usize, usize)>,
}

impl Condensation {
    /// Indices of components with no outgoing condensation edge.
    pub fn sink_components(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.components.len()];
        for &(a, _) in &self.edges {
            has_out[a] = true;
        }
        (0..self.components.len()).filter(|&k| !has_out[k]).collect()
    }
}

/// Tarjan's algorithm, iterative so deep chains cannot overflow the stack.
pub fn strongly_connected_components(c: &RelativeInteractionMatrix) -> Condensation {
    let n = c.n();
    let adj: Vec<Vec<NodeId>> = (0..n).map(|i| c.successors(i).collect()).collect();

    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<NodeId> = Vec::new();
    let mut next_index = 0;
    let mut components: Vec<Vec<NodeId>> = Vec::new();

    // (node, position in its adjacency list)
    let mut call: Vec<(NodeId, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }

            call.pop();
            if let Some(&(parent, _)) = call.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                components.push(comp);
            }
        }
    }

    let mut component_of = vec![0; n];
    for (k, comp) in components.iter().enumerate() {
        for &i in comp {
            component_of[i] = k;
        }
    }
    let mut edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| adj[i].iter().map(move |&j| (i, j)))
        .map(|(i, j)| (component_of[i], component_of[j]))
        .filter(|(a, b)| a != b)
        .collect();
    edges.sort_unstable();
    edges.dedup();

    Condensation { components, component_of, edges }
}

/// Nodes reachable from every node of `G(C)`. Non-empty iff the
/// condensation has exactly one sink, in which case it is that sink.
pub fn globally_reachable_set(c: &RelativeInteractionMatrix) -> Vec<NodeId> {
    let cond = strongly_connected_components(c);
    match cond.sink_components().as_slice() {
        [k] => cond.components[*k].clone(),
        _ => Vec::new(),
    }
}

/// Star center of the subgraph induced by `nodes`, if any.
///
/// `h` is a center when every other node of the subset gives weight 1 to
/// `h`, and `h` gives positive weight to every other node of the subset.
/// Subsets with fewer than 3 nodes never have a center.
pub fn star_center(c: &RelativeInteractionMatrix, nodes: &[NodeId]) -> Option<NodeId> {
    if nodes.len() < 3 {
        return None;
    }
    // Only the node that the first non-center points to can be the center.
    let probe = |i: NodeId| {
        nodes
            .iter()
            .copied()
            .find(|&h| h != i && (c[(i, h)] - 1.0).abs() <= VALIDATION_TOL)
    };
    let candidates = [probe(nodes[0]), probe(nodes[1])];
    candidates.into_iter().flatten().find(|&h| {
        nodes.iter().all(|&i| {
            i == h || ((c[(i, h)] - 1.0).abs() <= VALIDATION_TOL && c[(h, i)] > 0.0)
        })
    })
}

/// Classification of `G(C)` driving the equilibrium analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureKind {
    /// `G(C)` is strongly connected.
    Irreducible { star_center: Option<NodeId> },
    /// One condensation sink: the globally reachable nodes, `1 <= r < n`.
    ReducibleReachable { reachable: Vec<NodeId>, star_center: Option<NodeId> },
    /// `K >= 2` condensation sinks. `permutation` lists sink nodes first, in
    /// sink order, then the non-sink nodes.
    MultiSink {
        sinks: Vec<Vec<NodeId>>,
        non_sink: Vec<NodeId>,
        permutation: Vec<NodeId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkStructure {
    n: usize,
    kind: StructureKind,
}

impl NetworkStructure {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &StructureKind {
        &self.kind
    }

    /// Two-node strongly connected network: every point of the simplex is
    /// fixed under the single-timescale map.
    pub fn is_degenerate(&self) -> bool {
        self.n == 2 && matches!(self.kind, StructureKind::Irreducible { .. })
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self.kind, StructureKind::Irreducible { .. })
    }

    /// Node sets of the condensation sinks (the whole node set when
    /// irreducible).
    pub fn sinks(&self) -> Vec<Vec<NodeId>> {
        match &self.kind {
            StructureKind::Irreducible { .. } => vec![(0..self.n).collect()],
            StructureKind::ReducibleReachable { reachable, .. } => vec![reachable.clone()],
            StructureKind::MultiSink { sinks, .. } => sinks.clone(),
        }
    }

    /// Nodes outside every sink.
    pub fn non_sink_nodes(&self) -> Vec<NodeId> {
        let mut in_sink = vec![false; self.n];
        for sink in self.sinks() {
            for i in sink {
                in_sink[i] = true;
            }
        }
        (0..self.n).filter(|&i| !in_sink[i]).collect()
    }

    /// Star center of the (unique) sink, for the single-sink variants.
    pub fn star_center(&self) -> Option<NodeId> {
        match &self.kind {
            StructureKind::Irreducible { star_center }
            | StructureKind::ReducibleReachable { star_center, .. } => *star_center,
            StructureKind::MultiSink { .. } => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.kind {
            StructureKind::Irreducible { .. } => "irreducible",
            StructureKind::ReducibleReachable { .. } => "reducible with globally reachable nodes",
            StructureKind::MultiSink { .. } => "reducible with multiple sinks",
        }
    }
}

/// Classifies `G(C)` into exactly one [`StructureKind`].
pub fn classify(c: &RelativeInteractionMatrix) -> NetworkStructure {
    let n = c.n();
    let cond = strongly_connected_components(c);

    let mut sinks: Vec<Vec<NodeId>> = cond
        .sink_components()
        .into_iter()
        .map(|k| cond.components[k].clone())
        .collect();
    sinks.sort_by_key(|s| s[0]);

    let kind = if cond.components.len() == 1 {
        let all: Vec<NodeId> = (0..n).collect();
        StructureKind::Irreducible { star_center: star_center(c, &all) }
    } else if sinks.len() == 1 {
        let reachable = sinks.pop().unwrap();
        let star_center = star_center(c, &reachable);
        StructureKind::ReducibleReachable { reachable, star_center }
    } else {
        let mut in_sink = vec![false; n];
        sinks.iter().flatten().for_each(|&i| in_sink[i] = true);
        let non_sink: Vec<NodeId> = (0..n).filter(|&i| !in_sink[i]).collect();
        let permutation = sinks.iter().flatten().chain(&non_sink).copied().collect();
        StructureKind::MultiSink { sinks, non_sink, permutation }
    };
    NetworkStructure { n, kind }
}
