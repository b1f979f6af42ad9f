use powerflow_core::SelfWeightVector;

/// `{1,2,5}` from 0-based ids.
pub fn fmt_nodes(nodes: &[usize]) -> String {
    let ids: Vec<String> = nodes.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", ids.join(","))
}

pub fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(f64::to_string).collect();
    format!("({})", parts.join(", "))
}

/// `e_k` for states within 1e-3 of a vertex, the vector otherwise.
pub fn limit_label(x: &SelfWeightVector) -> String {
    let n = x.len();
    (0..n)
        .find(|&i| x.distance(&SelfWeightVector::vertex(n, i)) < 1e-3)
        .map(|i| format!("e_{}", i + 1))
        .unwrap_or_else(|| fmt_vec(x.values()))
}
