//! Network files, canonical network builders and trajectory export.
//!
//! All files use 1-based node ids. Two network formats are understood:
//!
//! * dense matrix: one row per line, entries separated by commas and/or
//!   whitespace;
//! * adjacency list: `i: j k l` meaning node `i` seeks advice from `j`, `k`
//!   and `l`. Each listed advisor gets weight `1/n_i`. Self-nominations are
//!   dropped because the diagonal of `C` must be zero.
//!
//! Lines starting with `#` are comments in both formats.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::netcore::{RelativeInteractionMatrix, VALIDATION_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkFormat {
    DenseMatrix,
    AdjacencyList,
}

impl NetworkFormat {
    /// Adjacency lists are recognised by a `:` on the first data line.
    pub fn detect(text: &str) -> NetworkFormat {
        let first = data_lines(text).next().map(|(_, l)| l).unwrap_or("");
        if first.contains(':') {
            NetworkFormat::AdjacencyList
        } else {
            NetworkFormat::DenseMatrix
        }
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn load_network(path: impl AsRef<Path>, format: Option<NetworkFormat>) -> Result<RelativeInteractionMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_network(&text, format)
}

pub fn parse_network(text: &str, format: Option<NetworkFormat>) -> Result<RelativeInteractionMatrix> {
    match format.unwrap_or_else(|| NetworkFormat::detect(text)) {
        NetworkFormat::DenseMatrix => parse_dense(text),
        NetworkFormat::AdjacencyList => parse_adjacency(text),
    }
}

pub fn parse_dense(text: &str) -> Result<RelativeInteractionMatrix> {
    let mut rows = Vec::new();
    for (line, content) in data_lines(text) {
        let row = content
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    message: format!("bad number {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    RelativeInteractionMatrix::validate(&rows, VALIDATION_TOL)
}

/// Advice lists, 0-based, in node order. The node count is the largest id
/// mentioned anywhere in the file.
pub fn parse_advice_lists(text: &str) -> Result<Vec<Vec<usize>>> {
    let parse_id = |line: usize, tok: &str| -> Result<usize> {
        match tok.parse::<usize>() {
            Ok(id) if id >= 1 => Ok(id - 1),
            _ => Err(Error::Parse { line, message: format!("bad node id {tok:?}") }),
        }
    };

    let mut lists: Vec<Option<Vec<usize>>> = Vec::new();
    let mut n = 0;
    for (line, content) in data_lines(text) {
        let (head, tail) = content
            .split_once(':')
            .ok_or_else(|| Error::Parse { line, message: "expected \"i: j k ...\"".into() })?;
        let i = parse_id(line, head.trim())?;
        let mut advisors = tail
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| parse_id(line, tok))
            .collect::<Result<Vec<usize>>>()?;
        advisors.retain(|&j| j != i);
        advisors.sort_unstable();
        advisors.dedup();

        n = advisors.iter().copied().chain([i]).fold(n, |acc, v| acc.max(v + 1));
        if lists.len() < n {
            lists.resize(n, None);
        }
        match &mut lists[i] {
            Some(existing) => {
                existing.extend(advisors);
                existing.sort_unstable();
                existing.dedup();
            }
            slot => *slot = Some(advisors),
        }
    }
    lists.resize(n, None);
    lists
        .into_iter()
        .enumerate()
        .map(|(i, l)| match l {
            Some(l) if !l.is_empty() => Ok(l),
            _ => Err(Error::EmptyAdviceSet { node: i + 1 }),
        })
        .collect()
}

pub fn parse_adjacency(text: &str) -> Result<RelativeInteractionMatrix> {
    advice_matrix(&parse_advice_lists(text)?)
}

/// `c_ij = 1/n_i` for each of the `n_i` advisors `j` of node `i`.
pub fn advice_matrix(lists: &[Vec<usize>]) -> Result<RelativeInteractionMatrix> {
    let n = lists.len();
    let mut rows = vec![vec![0.0; n]; n];
    for (i, advisors) in lists.iter().enumerate() {
        if advisors.is_empty() {
            return Err(Error::EmptyAdviceSet { node: i + 1 });
        }
        let w = 1.0 / advisors.len() as f64;
        for &j in advisors {
            if j >= n {
                return Err(Error::InvalidArgument(format!("advisor {} out of range", j + 1)));
            }
            rows[i][j] = w;
        }
    }
    RelativeInteractionMatrix::validate(&rows, VALIDATION_TOL)
}

/// Writes a dense matrix file. Values use the shortest decimal form that
/// parses back to the same `f64`, which needs at most 17 significant digits.
pub fn write_dense(c: &SquareMatrix, out: &mut impl Write) -> Result<()> {
    for row in c.rows() {
        let line: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn save_dense(c: &SquareMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_dense(c, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Star with center 1: node 1 spreads weight `1/(n−1)` over everyone, every
/// other node listens only to node 1.
pub fn build_star(n: usize) -> Result<RelativeInteractionMatrix> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let mut rows = vec![vec![0.0; n]; n];
    let spread = 1.0 / (n - 1) as f64;
    rows[0][1..].fill(spread);
    for row in &mut rows[1..] {
        row[0] = 1.0;
    }
    RelativeInteractionMatrix::validate(&rows, VALIDATION_TOL)
}

/// Directed ring `i -> i+1 mod n`.
pub fn build_ring(n: usize) -> Result<RelativeInteractionMatrix> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[(i + 1) % n] = 1.0;
    }
    RelativeInteractionMatrix::validate(&rows, VALIDATION_TOL)
}

/// Random zero-diagonal doubly stochastic matrix, deterministic in `seed`.
///
/// A random convex combination of the cyclic shift and a few random
/// derangements, symmetrized. The cyclic shift keeps the result irreducible.
pub fn build_doubly_stochastic_random(n: usize, seed: u64) -> Result<RelativeInteractionMatrix> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perms: Vec<Vec<usize>> = vec![(0..n).map(|i| (i + 1) % n).collect()];
    let extra = rng.random_range(1..=n);
    for _ in 0..extra {
        perms.push(random_derangement(n, &mut rng));
    }
    let weights: Vec<f64> = perms.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();

    let mut m = SquareMatrix::zeros(n);
    for (perm, w) in perms.iter().zip(&weights) {
        for (i, &j) in perm.iter().enumerate() {
            m[(i, j)] += 0.5 * w / total;
            m[(j, i)] += 0.5 * w / total;
        }
    }
    RelativeInteractionMatrix::validate(&m.to_rows(), VALIDATION_TOL)
}

fn random_derangement(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        p.shuffle(rng);
        if p.iter().enumerate().all(|(i, &j)| i != j) {
            return p;
        }
    }
}

/// Writes `t,x_1,…,x_n[,zeta_1,…,zeta_K]` rows followed by a
/// `# status=…` line.
pub fn write_trajectory(tr: &Trajectory, out: &mut impl Write) -> Result<()> {
    if tr.states.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let n = tr.n();
    let mut header: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=n).map(|i| format!("x_{i}")))
        .collect();
    if let Some(zeta) = tr.sink_power.as_ref().and_then(|z| z.first()) {
        header.extend((1..=zeta.len()).map(|k| format!("zeta_{k}")));
    }
    writeln!(out, "{}", header.join(","))?;

    for (row, (t, x)) in tr.times.iter().zip(&tr.states).enumerate() {
        let mut fields = vec![t.to_string()];
        fields.extend(x.values().iter().map(f64::to_string));
        if let Some(zeta) = &tr.sink_power {
            fields.extend(zeta[row].iter().map(f64::to_string));
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    writeln!(out, "# status={} model={} steps={}", tr.status, tr.model, tr.steps())?;
    Ok(())
}

pub fn write_trajectory_csv(tr: &Trajectory, path: impl AsRef<Path>) -> Result<()> {
    if tr.states.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let mut out = BufWriter::new(File::create(path)?);
    write_trajectory(tr, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Two trajectories on a common time axis:
/// `t,st_x_1,…,st_x_n,df_x_1,…,df_x_n,distance`. Rows are written for the
/// times recorded by both runs.
pub fn write_comparison(st: &Trajectory, df: &Trajectory, out: &mut impl Write) -> Result<()> {
    if st.states.is_empty() || df.states.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    let n = st.n();
    let header: Vec<String> = std::iter::once("t".to_string())
        .chain((1..=n).map(|i| format!("st_x_{i}")))
        .chain((1..=n).map(|i| format!("df_x_{i}")))
        .chain(std::iter::once("distance".to_string()))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for (t, a) in st.times.iter().zip(&st.states) {
        let Ok(k) = df.times.binary_search(t) else { continue };
        let b = &df.states[k];
        let mut fields = vec![t.to_string()];
        fields.extend(a.values().iter().map(f64::to_string));
        fields.extend(b.values().iter().map(f64::to_string));
        fields.push(a.distance(b).to_string());
        writeln!(out, "{}", fields.join(","))?;
    }
    writeln!(out, "# status_st={} status_df={}", st.status, df.status)?;
    Ok(())
}
