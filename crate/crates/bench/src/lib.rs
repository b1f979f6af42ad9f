//! Fixtures shared by the benchmarks.

use powerflow_core::io::build_doubly_stochastic_random;
use powerflow_core::{RelativeInteractionMatrix, SelfWeightVector};

/// A dense irreducible network of `n` nodes and a fixed interior state.
pub fn fixture(n: usize) -> (RelativeInteractionMatrix, SelfWeightVector) {
    let c = build_doubly_stochastic_random(n, 7).expect("n >= 3");
    let raw: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let total: f64 = raw.iter().sum();
    let x = SelfWeightVector::new(raw.into_iter().map(|v| v / total).collect()).expect("simplex");
    (c, x)
}
