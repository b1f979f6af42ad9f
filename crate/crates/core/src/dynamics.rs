//! Self-weight dynamics.
//!
//! The single-timescale map is `F(x) = Cᵀ(x − x²) + x²`, i.e.
//! `x(t+1) = W(x(t))ᵀ x(t)`. The original DeGroot-Friedkin map sends `x` to
//! the social power the group ends up with after reaching consensus under
//! `W(x)`, which is the dominant left eigenvector of `W(x)` when it is
//! unique.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{self, SquareMatrix};
use crate::netcore::{classify, NetworkStructure, NodeId, RelativeInteractionMatrix, StructureKind};
use crate::spectral::{self, SPECTRAL_TOL};

/// Simplex membership tolerance for sums, and the distance from a vertex
/// below which a state counts as autocratic.
pub const SIMPLEX_TOL: f64 = 1e-9;

/// A point of the simplex: self-weights, equivalently perceived social power.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfWeightVector(Vec<f64>);

impl SelfWeightVector {
    /// Checks simplex membership within [`SIMPLEX_TOL`]. Tiny negative
    /// entries are snapped to zero; the sum is left untouched.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NotInSimplex { reason: "empty vector".into() });
        }
        for (i, v) in values.iter_mut().enumerate() {
            if !v.is_finite() || *v < -SIMPLEX_TOL || *v > 1.0 + SIMPLEX_TOL {
                return Err(Error::NotInSimplex {
                    reason: format!("entry {} = {v} outside [0, 1]", i + 1),
                });
            }
            *v = v.max(0.0);
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::NotInSimplex { reason: format!("entries sum to {sum}") });
        }
        Ok(Self(values))
    }

    /// Wraps values produced by a map known to preserve the simplex.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    /// The autocratic configuration `e_i` (0-based `i`).
    pub fn vertex(n: usize, i: NodeId) -> Self {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Self(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Node holding (within [`SIMPLEX_TOL`]) all the mass, if any.
    pub fn vertex_index(&self) -> Option<NodeId> {
        self.0.iter().position(|&v| v >= 1.0 - SIMPLEX_TOL)
    }

    pub fn is_vertex(&self) -> bool {
        self.vertex_index().is_some()
    }

    pub fn distance(&self, other: &SelfWeightVector) -> f64 {
        linalg::max_abs_diff(&self.0, &other.0)
    }
}

impl std::ops::Index<usize> for SelfWeightVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

fn check_dim(c: &RelativeInteractionMatrix, x: &SelfWeightVector) -> Result<()> {
    if x.len() != c.n() {
        return Err(Error::DimensionMismatch { expected: c.n(), got: x.len() });
    }
    Ok(())
}

pub(crate) fn st_step_into(c: &SquareMatrix, x: &[f64], out: &mut [f64]) {
    for (o, &xi) in out.iter_mut().zip(x) {
        *o = xi * xi;
    }
    for (i, &xi) in x.iter().enumerate() {
        let yi = xi - xi * xi;
        if yi == 0.0 {
            continue;
        }
        for (o, &cij) in out.iter_mut().zip(c.row(i)) {
            *o += cij * yi;
        }
    }
}

/// One step of the single-timescale map `F(x) = Cᵀ(x − x²) + x²`.
///
/// Vertices are mapped to themselves exactly. Panics if the dimensions
/// disagree.
pub fn st_df_step(c: &RelativeInteractionMatrix, x: &SelfWeightVector) -> SelfWeightVector {
    assert_eq!(c.n(), x.len(), "dimension mismatch");
    let mut out = vec![0.0; x.len()];
    st_step_into(c, x.values(), &mut out);
    SelfWeightVector(out)
}

/// Infinite orbit `x(1), x(2), …` of the single-timescale map.
pub struct Orbit<'a> {
    c: &'a SquareMatrix,
    x: Vec<f64>,
    scratch: Vec<f64>,
}

impl Iterator for Orbit<'_> {
    type Item = SelfWeightVector;

    fn next(&mut self) -> Option<SelfWeightVector> {
        st_step_into(self.c, &self.x, &mut self.scratch);
        std::mem::swap(&mut self.x, &mut self.scratch);
        Some(SelfWeightVector(self.x.clone()))
    }
}

pub fn st_orbit<'a>(c: &'a RelativeInteractionMatrix, x0: &SelfWeightVector) -> Orbit<'a> {
    assert_eq!(c.n(), x0.len(), "dimension mismatch");
    Orbit { c: c.as_matrix(), x: x0.values().to_vec(), scratch: vec![0.0; x0.len()] }
}

/// The original DeGroot-Friedkin map, with the per-network data it needs
/// precomputed.
///
/// For every sink `k` of the condensation of `G(C)` the new self-weights on
/// the sink are `ζ_k · v_k`, where `v_k` is the dominant left eigenvector of
/// the sink block `W_kk(x)`. Writing `vᵀW = vᵀ` entrywise gives
/// `v_i (1 − x_i) = Σ_j v_j (1 − x_j) c_ji`, so `v ∘ (1 − x)` is the
/// centrality of `C_kk` and `v_i ∝ c_i / (1 − x_i)`; a sink node with
/// `x_i = 1` takes the whole block. The sink masses `ζ_k` are the column sums of
/// `lim W(x)^t` divided by `n`: each sink keeps its own rows and collects the
/// absorption probabilities `(I − C_MM)⁻¹ C_Mk 1` of the non-sink rows. The
/// factor `I − diag(x_M)` cancels in that product, so `ζ` depends on `C`
/// only. Non-sink nodes get zero.
#[derive(Debug, Clone)]
pub struct DfMap {
    n: usize,
    sinks: Vec<Vec<NodeId>>,
    centrality: Vec<Vec<f64>>,
    sink_mass: Vec<f64>,
}

impl DfMap {
    pub fn new(c: &RelativeInteractionMatrix, structure: &NetworkStructure) -> Result<Self> {
        let n = c.n();
        let sinks = structure.sinks();
        let centrality = sinks
            .iter()
            .map(|s| spectral::dominant_left_eigenvector(&c.principal_submatrix(s), SPECTRAL_TOL))
            .collect::<Result<Vec<_>>>()?;
        let sink_mass = if sinks.len() == 1 {
            vec![1.0]
        } else {
            absorbed_sink_mass(c, &sinks, &structure.non_sink_nodes())?
        };
        Ok(Self { n, sinks, centrality, sink_mass })
    }

    /// Long-run share of social power held by each sink.
    pub fn sink_mass(&self) -> &[f64] {
        &self.sink_mass
    }

    pub fn step(&self, x: &SelfWeightVector) -> Result<SelfWeightVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: x.len() });
        }
        let mut out = vec![0.0; self.n];
        for ((sink, c), &mass) in self.sinks.iter().zip(&self.centrality).zip(&self.sink_mass) {
            if let Some(&i) = sink.iter().find(|&&i| x[i] >= 1.0) {
                out[i] = mass;
                continue;
            }
            let y: Vec<f64> = sink.iter().zip(c).map(|(&i, ci)| ci / (1.0 - x[i])).collect();
            let total: f64 = y.iter().sum();
            for (&i, yi) in sink.iter().zip(y) {
                out[i] = mass * yi / total;
            }
        }
        Ok(SelfWeightVector(out))
    }
}

fn absorbed_sink_mass(
    c: &RelativeInteractionMatrix,
    sinks: &[Vec<NodeId>],
    non_sink: &[NodeId],
) -> Result<Vec<f64>> {
    let n = c.n();
    let m = non_sink.len();
    let k = sinks.len();
    let mut mass: Vec<f64> = sinks.iter().map(|s| s.len() as f64).collect();
    if m > 0 {
        let mut a = DMatrix::<f64>::identity(m, m);
        let mut r = DMatrix::<f64>::zeros(m, k);
        for (p, &i) in non_sink.iter().enumerate() {
            for (q, &j) in non_sink.iter().enumerate() {
                a[(p, q)] -= c[(i, j)];
            }
            for (s, sink) in sinks.iter().enumerate() {
                r[(p, s)] = sink.iter().map(|&j| c[(i, j)]).sum();
            }
        }
        let absorb = linalg::solve(a, r).ok_or_else(|| {
            Error::InvalidArgument("non-sink block has no path to a sink".into())
        })?;
        for (s, m) in mass.iter_mut().enumerate() {
            *m += absorb.column(s).sum();
        }
    }
    Ok(mass.into_iter().map(|v| v / n as f64).collect())
}

/// One step of the original DeGroot-Friedkin map.
pub fn df_step(c: &RelativeInteractionMatrix, x: &SelfWeightVector) -> Result<SelfWeightVector> {
    check_dim(c, x)?;
    DfMap::new(c, &classify(c))?.step(x)
}

/// Total self-weight `ζ_k` held by each sink.
pub fn sink_power(structure: &NetworkStructure, x: &SelfWeightVector) -> Result<Vec<f64>> {
    let StructureKind::MultiSink { sinks, .. } = structure.kind() else {
        return Err(Error::StructureMismatch { expected: "multi-sink" });
    };
    if x.len() != structure.n() {
        return Err(Error::DimensionMismatch { expected: structure.n(), got: x.len() });
    }
    Ok(sinks.iter().map(|s| s.iter().map(|&i| x[i]).sum()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    SingleTimescale,
    OriginalDf,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::SingleTimescale => "single-timescale",
            Model::OriginalDf => "original-df",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationOptions {
    /// Step-delta threshold `‖x(t+1) − x(t)‖∞` for convergence.
    pub tol: f64,
    pub max_steps: usize,
    /// Keep every `record_every`-th state; the initial and final states are
    /// always kept.
    pub record_every: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_steps: 1_000_000, record_every: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Converged { at: usize, limit: SelfWeightVector },
    MaxStepsReached,
    VertexAbsorbed { at: usize, vertex: NodeId },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Converged { at, .. } => write!(f, "converged step={at}"),
            Status::MaxStepsReached => f.write_str("max_steps_reached"),
            Status::VertexAbsorbed { at, vertex } => {
                write!(f, "vertex_absorbed step={at} vertex={}", vertex + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: Model,
    /// Time index of each recorded state.
    pub times: Vec<usize>,
    pub states: Vec<SelfWeightVector>,
    /// `ζ(t)` for each recorded state; present for multi-sink networks.
    pub sink_power: Option<Vec<Vec<f64>>>,
    /// `‖x(t+1) − x(t)‖∞` for every step taken.
    pub step_deltas: Vec<f64>,
    pub status: Status,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.step_deltas.len()
    }

    pub fn final_state(&self) -> &SelfWeightVector {
        self.states.last().expect("trajectory always holds x(0)")
    }

    pub fn n(&self) -> usize {
        self.final_state().len()
    }
}

enum Stepper<'a> {
    SingleTimescale(&'a RelativeInteractionMatrix),
    OriginalDf(DfMap),
}

impl Stepper<'_> {
    fn step(&self, x: &SelfWeightVector) -> Result<SelfWeightVector> {
        match self {
            Stepper::SingleTimescale(c) => Ok(st_df_step(c, x)),
            Stepper::OriginalDf(map) => map.step(x),
        }
    }
}

struct Recorder<'a> {
    structure: &'a NetworkStructure,
    times: Vec<usize>,
    states: Vec<SelfWeightVector>,
    sink_power: Option<Vec<Vec<f64>>>,
}

impl Recorder<'_> {
    fn record(&mut self, t: usize, x: &SelfWeightVector) {
        if self.times.last() == Some(&t) {
            return;
        }
        if let Some(zeta) = self.sink_power.as_mut() {
            zeta.push(sink_power(self.structure, x).expect("structure checked"));
        }
        self.times.push(t);
        self.states.push(x.clone());
    }
}

/// Iterates the chosen map from `x0`.
///
/// Stops with [`Status::Converged`] once a step moves less than `opts.tol`
/// and the fixed-point residual of the new state is below `10·opts.tol`.
/// Under the single-timescale map every vertex is fixed, so reaching one
/// stops the run with [`Status::VertexAbsorbed`]. Mass is never
/// renormalized; a drift of the total beyond [`SIMPLEX_TOL`] is reported as
/// [`Error::MassDrift`].
pub fn simulate(
    model: Model,
    c: &RelativeInteractionMatrix,
    x0: &SelfWeightVector,
    opts: &SimulationOptions,
) -> Result<Trajectory> {
    if x0.len() != c.n() {
        return Err(Error::InvalidInitial(format!(
            "x0 has {} entries, network has {} nodes",
            x0.len(),
            c.n()
        )));
    }
    // x0 may have been built without validation by from_raw paths.
    SelfWeightVector::new(x0.values().to_vec())
        .map_err(|e| Error::InvalidInitial(e.to_string()))?;
    if opts.record_every == 0 {
        return Err(Error::InvalidArgument("record_every must be at least 1".into()));
    }
    let structure = classify(c);
    simulate_classified(model, c, &structure, x0, opts)
}

pub(crate) fn simulate_classified(
    model: Model,
    c: &RelativeInteractionMatrix,
    structure: &NetworkStructure,
    x0: &SelfWeightVector,
    opts: &SimulationOptions,
) -> Result<Trajectory> {
    let multisink = matches!(structure.kind(), StructureKind::MultiSink { .. });
    let mut rec = Recorder {
        structure,
        times: Vec::new(),
        states: Vec::new(),
        sink_power: multisink.then(Vec::new),
    };
    rec.record(0, x0);
    let mut step_deltas = Vec::new();

    let finish = |rec: Recorder, step_deltas, status| Trajectory {
        model,
        times: rec.times,
        states: rec.states,
        sink_power: rec.sink_power,
        step_deltas,
        status,
    };

    if let (Model::SingleTimescale, Some(v)) = (model, x0.vertex_index()) {
        return Ok(finish(rec, step_deltas, Status::VertexAbsorbed { at: 0, vertex: v }));
    }
    if structure.is_degenerate() {
        let status = Status::Converged { at: 0, limit: x0.clone() };
        return Ok(finish(rec, step_deltas, status));
    }

    let stepper = match model {
        Model::SingleTimescale => Stepper::SingleTimescale(c),
        Model::OriginalDf => Stepper::OriginalDf(DfMap::new(c, structure)?),
    };
    let mass0 = x0.sum();
    let mut x = x0.clone();
    let mut t = 0;
    let status = loop {
        if t == opts.max_steps {
            break Status::MaxStepsReached;
        }
        let next = stepper.step(&x)?;
        let delta = next.distance(&x);
        step_deltas.push(delta);
        t += 1;
        let drift = (next.sum() - mass0).abs();
        if drift > SIMPLEX_TOL {
            return Err(Error::MassDrift { step: t, drift });
        }
        x = next;
        if t % opts.record_every == 0 {
            rec.record(t, &x);
        }

        if model == Model::SingleTimescale {
            if let Some(v) = x.vertex_index() {
                break Status::VertexAbsorbed { at: t, vertex: v };
            }
        }
        if delta < opts.tol {
            let residual = stepper.step(&x)?.distance(&x);
            if residual < 10.0 * opts.tol {
                break Status::Converged { at: t, limit: x.clone() };
            }
        }
    };
    rec.record(t, &x);
    Ok(finish(rec, step_deltas, status))
}
