//! Equilibria of the single-timescale map and comparison with the original
//! DeGroot-Friedkin model.
//!
//! A non-vertex fixed point satisfies `x − x² = Cᵀ(x − x²)`, so `x − x²` is a
//! multiple `α` of a dominant left eigenvector of `C`. On a sink with
//! centrality `c` and total power `ζ` this gives `x_i (1 − x_i) = α c_i` with
//! `Σ x_i = ζ`.

use std::fmt;

use crate::dynamics::{
    self, sink_power, simulate_classified, st_df_step, Model, SelfWeightVector,
    SimulationOptions, Trajectory, SIMPLEX_TOL,
};
use crate::error::{Error, Result};
use crate::netcore::{classify, NetworkStructure, NodeId, RelativeInteractionMatrix, StructureKind};
use crate::spectral::{centrality_profile, CentralityProfile};

/// Step tolerance of the interior equilibrium solver.
pub const EQUILIBRIUM_TOL: f64 = 1e-13;
/// Iteration cap of the interior equilibrium solver.
pub const EQUILIBRIUM_MAX_ITERS: usize = 100_000;
/// Centralities closer than this count as tied.
pub const TIE_TOL: f64 = 1e-9;
/// A centrality this close to 1/2 (with full mass) is a star center.
const CENTER_DOMINANT_MARGIN: f64 = 1e-12;

/// `‖F(x) − x‖∞` for the single-timescale map.
pub fn fixed_point_residual(c: &RelativeInteractionMatrix, x: &SelfWeightVector) -> f64 {
    st_df_step(c, x).distance(x)
}

/// The interior fixed point on a sink with centrality `c` holding total
/// power `total_mass`.
///
/// Iterates `x ← total_mass · y / Σy` with `y_i = c_i / (1 − x_i)` from
/// `x = total_mass · c` until successive iterates differ by less than `tol`.
/// The fixed point has `x_i (1 − x_i) = α c_i` for a single `α`, and this
/// iteration selects the root of each quadratic that lies on the simplex
/// face. Two-entry inputs use the closed form `(ζ/2, ζ/2)`.
pub fn solve_interior_equilibrium(c: &[f64], total_mass: f64, tol: f64) -> Result<Vec<f64>> {
    if c.len() < 2 {
        return Err(Error::DimensionTooSmall { len: c.len() });
    }
    if let Some(bad) = c.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "centrality entries must be positive, got {bad}"
        )));
    }
    if !(total_mass > 0.0 && total_mass <= 1.0 + SIMPLEX_TOL) {
        return Err(Error::InvalidArgument(format!(
            "total mass must lie in (0, 1], got {total_mass}"
        )));
    }
    let c_sum: f64 = c.iter().sum();
    let c_max = c.iter().copied().fold(0.0, f64::max) / c_sum;
    let full_mass = total_mass >= 1.0 - CENTER_DOMINANT_MARGIN;
    if full_mass && c_max >= 0.5 - CENTER_DOMINANT_MARGIN {
        return Err(Error::CenterDominant { max: c_max });
    }
    if c.len() == 2 {
        return Ok(vec![total_mass / 2.0; 2]);
    }

    let mut x: Vec<f64> = c.iter().map(|ci| total_mass * ci / c_sum).collect();
    let mut y = vec![0.0; c.len()];
    for _ in 0..EQUILIBRIUM_MAX_ITERS {
        for ((yi, ci), xi) in y.iter_mut().zip(c).zip(&x) {
            *yi = ci / (1.0 - xi);
        }
        let s: f64 = y.iter().sum();
        let mut diff = 0.0f64;
        for (xi, yi) in x.iter_mut().zip(&y) {
            let next = total_mass * yi / s;
            diff = diff.max((next - *xi).abs());
            *xi = next;
        }
        if diff < tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { max_iters: EQUILIBRIUM_MAX_ITERS })
}

/// `α_i = x_i (1 − x_i) / c_i` for each entry. At an interior equilibrium
/// all entries agree.
pub fn implied_scale(x: &[f64], c: &[f64]) -> Vec<f64> {
    x.iter().zip(c).map(|(xi, ci)| xi * (1.0 - xi) / ci).collect()
}

/// `max α_i − min α_i` of [`implied_scale`].
pub fn scale_spread(x: &[f64], c: &[f64]) -> f64 {
    let a = implied_scale(x, c);
    let hi = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = a.iter().copied().fold(f64::INFINITY, f64::min);
    hi - lo
}

/// Equilibrium of a two-node sink holding power `ζ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwoNodeEquilibrium {
    /// `ζ < 1`: both nodes hold `ζ/2`.
    Point([f64; 2]),
    /// `ζ = 1`: every `(α, 1 − α)` is fixed; `α` depends on the trajectory.
    Family,
}

pub fn two_node_equilibrium(zeta: f64) -> TwoNodeEquilibrium {
    if zeta >= 1.0 - CENTER_DOMINANT_MARGIN {
        TwoNodeEquilibrium::Family
    } else {
        TwoNodeEquilibrium::Point([zeta / 2.0; 2])
    }
}

/// Which convergence regime a network and initial state fall into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `x0` is a vertex; every vertex is fixed under the single-timescale map.
    AutocraticStart,
    /// Strongly connected two-node network: every point is fixed.
    TwoNodeNetwork,
    IrreducibleStar,
    IrreducibleGeneral,
    /// Exactly two globally reachable nodes.
    ReachablePair,
    ReachableStar,
    ReachableGeneral,
    MultiSink,
}

impl Regime {
    pub fn of(structure: &NetworkStructure, x0: &SelfWeightVector) -> Regime {
        if x0.is_vertex() {
            return Regime::AutocraticStart;
        }
        match structure.kind() {
            StructureKind::Irreducible { .. } if structure.is_degenerate() => Regime::TwoNodeNetwork,
            StructureKind::Irreducible { star_center: Some(_) } => Regime::IrreducibleStar,
            StructureKind::Irreducible { star_center: None } => Regime::IrreducibleGeneral,
            StructureKind::ReducibleReachable { reachable, .. } if reachable.len() == 2 => {
                Regime::ReachablePair
            }
            StructureKind::ReducibleReachable { star_center: Some(_), .. } => Regime::ReachableStar,
            StructureKind::ReducibleReachable { star_center: None, .. } => Regime::ReachableGeneral,
            StructureKind::MultiSink { .. } => Regime::MultiSink,
        }
    }

    /// Whether both models are expected to reach the same limit.
    pub fn models_agree(self) -> Option<bool> {
        match self {
            Regime::TwoNodeNetwork
            | Regime::IrreducibleStar
            | Regime::IrreducibleGeneral
            | Regime::ReachableStar
            | Regime::ReachableGeneral => Some(true),
            Regime::MultiSink => Some(false),
            // Depends on where x0 sits.
            Regime::AutocraticStart | Regime::ReachablePair => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::AutocraticStart => "autocratic initial state (fixed vertex)",
            Regime::TwoNodeNetwork => "two-node network (every state fixed)",
            Regime::IrreducibleStar => "irreducible star (autocrat at the center)",
            Regime::IrreducibleGeneral => "irreducible non-star (unique interior equilibrium)",
            Regime::ReachablePair => "two globally reachable nodes (one-parameter family)",
            Regime::ReachableStar => "globally reachable star (autocrat at the center)",
            Regime::ReachableGeneral => "globally reachable non-star (unique equilibrium on reachable nodes)",
            Regime::MultiSink => "multiple sinks (family indexed by sink power)",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prediction {
    /// The initial vertex itself.
    Vertex { node: NodeId },
    StarAutocrat { center: NodeId },
    UniqueInterior { x: SelfWeightVector, alpha: f64 },
    /// `(α, 1 − α)` on `support`, zero elsewhere; `α` is set by the trajectory.
    TwoNodeFamily { support: [NodeId; 2] },
    /// `x*(ζ*)` for the sink power `ζ*` the trajectory settles on; see
    /// [`assemble_multisink_equilibrium`].
    MultiSinkFamily { sinks: Vec<Vec<NodeId>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumPrediction {
    pub kind: Prediction,
    pub regime: Regime,
}

impl EquilibriumPrediction {
    /// The predicted limit when it is a single point.
    pub fn point(&self, n: usize) -> Option<SelfWeightVector> {
        match &self.kind {
            Prediction::Vertex { node } => Some(SelfWeightVector::vertex(n, *node)),
            Prediction::StarAutocrat { center } => Some(SelfWeightVector::vertex(n, *center)),
            Prediction::UniqueInterior { x, .. } => Some(x.clone()),
            Prediction::TwoNodeFamily { .. } | Prediction::MultiSinkFamily { .. } => None,
        }
    }
}

/// Predicts the single-timescale limit from `x0` without simulating.
pub fn predict_limit(
    c: &RelativeInteractionMatrix,
    structure: &NetworkStructure,
    profile: &CentralityProfile,
    x0: &SelfWeightVector,
) -> Result<EquilibriumPrediction> {
    let n = c.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
    }
    let regime = Regime::of(structure, x0);
    let kind = match regime {
        Regime::AutocraticStart => Prediction::Vertex { node: x0.vertex_index().unwrap() },
        Regime::TwoNodeNetwork => Prediction::TwoNodeFamily { support: [0, 1] },
        Regime::ReachablePair => {
            let sink = &profile.sinks[0];
            Prediction::TwoNodeFamily { support: [sink[0], sink[1]] }
        }
        Regime::IrreducibleStar | Regime::ReachableStar => Prediction::StarAutocrat {
            center: structure.star_center().expect("star regime has a center"),
        },
        Regime::IrreducibleGeneral | Regime::ReachableGeneral => {
            let sink = &profile.sinks[0];
            let local = solve_interior_equilibrium(&profile.per_sink[0], 1.0, EQUILIBRIUM_TOL)?;
            let alpha = mean(&implied_scale(&local, &profile.per_sink[0]));
            let mut x = vec![0.0; n];
            for (&i, v) in sink.iter().zip(local) {
                x[i] = v;
            }
            Prediction::UniqueInterior { x: SelfWeightVector::from_raw(x), alpha }
        }
        Regime::MultiSink => Prediction::MultiSinkFamily { sinks: profile.sinks.clone() },
    };
    Ok(EquilibriumPrediction { kind, regime })
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Result of [`assemble_multisink_equilibrium`].
#[derive(Debug, Clone, PartialEq)]
pub enum AssembledEquilibrium {
    Point(SelfWeightVector),
    /// A two-node sink holds all the power, so the equilibrium is
    /// `(α, 1 − α)` on `support` for a trajectory-dependent `α`.
    TwoNodeFamily { sink: usize, support: [NodeId; 2] },
}

impl AssembledEquilibrium {
    /// The member of the family with the given `α` (ignored for points).
    pub fn with_alpha(&self, n: usize, alpha: f64) -> SelfWeightVector {
        match self {
            AssembledEquilibrium::Point(x) => x.clone(),
            AssembledEquilibrium::TwoNodeFamily { support, .. } => {
                let mut x = vec![0.0; n];
                x[support[0]] = alpha;
                x[support[1]] = 1.0 - alpha;
                SelfWeightVector::from_raw(x)
            }
        }
    }

    pub fn point(&self) -> Option<&SelfWeightVector> {
        match self {
            AssembledEquilibrium::Point(x) => Some(x),
            AssembledEquilibrium::TwoNodeFamily { .. } => None,
        }
    }
}

/// The equilibrium `x*(ζ*)` of a multi-sink network for given sink powers.
///
/// Non-sink nodes get zero, two-node sinks split their power evenly, larger
/// sinks get the interior solution for their own centrality and power, and
/// a sink with zero power gets zeros. A larger sink holding all the power
/// behaves like an irreducible network: a star sink then yields its center
/// as autocrat.
pub fn assemble_multisink_equilibrium(
    structure: &NetworkStructure,
    profile: &CentralityProfile,
    zeta: &[f64],
    tol: f64,
) -> Result<AssembledEquilibrium> {
    let StructureKind::MultiSink { sinks, .. } = structure.kind() else {
        return Err(Error::StructureMismatch { expected: "multi-sink" });
    };
    if zeta.len() != sinks.len() {
        return Err(Error::DimensionMismatch { expected: sinks.len(), got: zeta.len() });
    }
    let total: f64 = zeta.iter().sum();
    if zeta.iter().any(|z| !z.is_finite() || *z < -SIMPLEX_TOL) || (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::NotInSimplex { reason: format!("sink powers {zeta:?}") });
    }

    let mut x = vec![0.0; structure.n()];
    for (k, (sink, &z)) in sinks.iter().zip(zeta).enumerate() {
        if z <= 0.0 {
            continue;
        }
        if sink.len() == 2 {
            match two_node_equilibrium(z) {
                TwoNodeEquilibrium::Point(p) => {
                    x[sink[0]] = p[0];
                    x[sink[1]] = p[1];
                }
                TwoNodeEquilibrium::Family => {
                    return Ok(AssembledEquilibrium::TwoNodeFamily {
                        sink: k,
                        support: [sink[0], sink[1]],
                    });
                }
            }
            continue;
        }
        let c_kk = &profile.per_sink[k];
        match solve_interior_equilibrium(c_kk, z.min(1.0), tol) {
            Ok(local) => {
                for (&i, v) in sink.iter().zip(local) {
                    x[i] = v;
                }
            }
            Err(Error::CenterDominant { .. }) => {
                let center = (0..sink.len())
                    .max_by(|&a, &b| c_kk[a].total_cmp(&c_kk[b]))
                    .expect("non-empty sink");
                x[sink[center]] = 1.0;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(AssembledEquilibrium::Point(SelfWeightVector::from_raw(x)))
}

/// Side-by-side run of the single-timescale and original models.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub regime: Regime,
    pub single_timescale: Trajectory,
    pub original_df: Trajectory,
    pub limit_st: SelfWeightVector,
    pub limit_df: SelfWeightVector,
    pub limit_distance: f64,
    pub steps_st: usize,
    pub steps_df: usize,
    /// `(t, ‖x_st(t) − x_df(t)‖∞)` at every time recorded by both runs.
    pub per_step_distance: Vec<(usize, f64)>,
    /// Sink powers of both limits, for multi-sink networks.
    pub sink_totals: Option<(Vec<f64>, Vec<f64>)>,
}

pub fn compare_models(
    c: &RelativeInteractionMatrix,
    x0: &SelfWeightVector,
    opts: &SimulationOptions,
) -> Result<ComparisonReport> {
    let structure = classify(c);
    let st = dynamics::simulate(Model::SingleTimescale, c, x0, opts)?;
    let df = simulate_classified(Model::OriginalDf, c, &structure, x0, opts)?;

    let limit_st = st.final_state().clone();
    let limit_df = df.final_state().clone();
    let mut per_step_distance = Vec::new();
    let (mut a, mut b) = (0, 0);
    while a < st.times.len() && b < df.times.len() {
        match st.times[a].cmp(&df.times[b]) {
            std::cmp::Ordering::Less => a += 1,
            std::cmp::Ordering::Greater => b += 1,
            std::cmp::Ordering::Equal => {
                per_step_distance.push((st.times[a], st.states[a].distance(&df.states[b])));
                a += 1;
                b += 1;
            }
        }
    }
    let sink_totals = match structure.kind() {
        StructureKind::MultiSink { .. } => {
            Some((sink_power(&structure, &limit_st)?, sink_power(&structure, &limit_df)?))
        }
        _ => None,
    };
    Ok(ComparisonReport {
        regime: Regime::of(&structure, x0),
        limit_distance: limit_st.distance(&limit_df),
        steps_st: st.steps(),
        steps_df: df.steps(),
        single_timescale: st,
        original_df: df,
        limit_st,
        limit_df,
        per_step_distance,
        sink_totals,
    })
}

/// Convenience: the single-timescale limit from `x0` together with the
/// equilibrium assembled from the sink powers it settles on (multi-sink
/// networks only).
pub fn realized_multisink_equilibrium(
    c: &RelativeInteractionMatrix,
    x0: &SelfWeightVector,
    opts: &SimulationOptions,
) -> Result<(Trajectory, AssembledEquilibrium)> {
    let structure = classify(c);
    let profile = centrality_profile(c, &structure)?;
    let tr = simulate_classified(Model::SingleTimescale, c, &structure, x0, opts)?;
    let zeta = sink_power(&structure, tr.final_state())?;
    let eq = assemble_multisink_equilibrium(&structure, &profile, &zeta, EQUILIBRIUM_TOL)?;
    Ok((tr, eq))
}
