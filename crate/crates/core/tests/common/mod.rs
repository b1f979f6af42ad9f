#![allow(dead_code)]

use powerflow_core::{classify, RelativeInteractionMatrix, SelfWeightVector};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normalize_rows(rows: &mut [Vec<f64>]) {
    for row in rows {
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= s);
    }
}

/// Any valid `C`: each row has a random nonempty off-diagonal support.
pub fn random_valid(n: usize, rng: &mut impl Rng) -> RelativeInteractionMatrix {
    let density = rng.random_range(0.15..1.0);
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let forced = *others.choose(rng).unwrap();
        for &j in &others {
            if j == forced || rng.random::<f64>() < density {
                row[j] = rng.random_range(0.05..1.0);
            }
        }
    }
    normalize_rows(&mut rows);
    RelativeInteractionMatrix::from_rows(&rows).unwrap()
}

/// Strongly connected `C`: a random Hamiltonian cycle plus random extra edges.
pub fn random_irreducible(n: usize, rng: &mut impl Rng) -> RelativeInteractionMatrix {
    let rows = irreducible_rows(n, rng);
    RelativeInteractionMatrix::from_rows(&rows).unwrap()
}

fn irreducible_rows(n: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let density = rng.random_range(0.0..0.8);
    let mut rows = vec![vec![0.0; n]; n];
    for k in 0..n {
        let (i, j) = (order[k], order[(k + 1) % n]);
        rows[i][j] = rng.random_range(0.05..1.0);
    }
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i != j && *v == 0.0 && rng.random::<f64>() < density {
                *v = rng.random_range(0.05..1.0);
            }
        }
    }
    normalize_rows(&mut rows);
    rows
}

/// Strongly connected and not a star; needs `n >= 3`.
pub fn random_irreducible_non_star(n: usize, rng: &mut impl Rng) -> RelativeInteractionMatrix {
    loop {
        let c = random_irreducible(n, rng);
        if classify(&c).star_center().is_none() {
            return c;
        }
    }
}

/// Places independent irreducible blocks on `blocks` and gives each
/// remaining node random edges, including at least one edge into a sink
/// node with weight share at least `sink_share`.
pub fn random_with_sinks(
    n: usize,
    blocks: &[Vec<usize>],
    sink_share: f64,
    rng: &mut impl Rng,
) -> RelativeInteractionMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    let mut in_sink = vec![false; n];
    for block in blocks {
        let local = irreducible_rows(block.len(), rng);
        for (a, &i) in block.iter().enumerate() {
            in_sink[i] = true;
            for (b, &j) in block.iter().enumerate() {
                rows[i][j] = local[a][b];
            }
        }
    }
    let sink_nodes: Vec<usize> = (0..n).filter(|&i| in_sink[i]).collect();
    for i in (0..n).filter(|&i| !in_sink[i]) {
        let mut other = vec![0.0; n];
        for (j, v) in other.iter_mut().enumerate() {
            if j != i && rng.random::<f64>() < 0.5 {
                *v = rng.random_range(0.05..1.0);
            }
        }
        let s: f64 = other.iter().sum();
        let target = *sink_nodes.choose(rng).unwrap();
        if s == 0.0 {
            other[target] = 1.0;
        } else {
            other.iter_mut().for_each(|v| *v *= (1.0 - sink_share) / s);
            other[target] += sink_share;
        }
        rows[i] = other;
    }
    RelativeInteractionMatrix::from_rows(&rows).unwrap()
}

/// Interior point: normalized exponential samples.
pub fn random_interior(n: usize, rng: &mut impl Rng) -> SelfWeightVector {
    let v: Vec<f64> = (0..n).map(|_| Distribution::<f64>::sample(&Exp1, rng) + 1e-3).collect();
    let s: f64 = v.iter().sum();
    SelfWeightVector::new(v.into_iter().map(|x: f64| x / s).collect()).unwrap()
}

/// Point of the simplex that may sit on a face.
pub fn random_simplex(n: usize, rng: &mut impl Rng) -> SelfWeightVector {
    loop {
        let v: Vec<f64> = (0..n)
            .map(|_| if rng.random::<f64>() < 0.3 { 0.0 } else { Distribution::<f64>::sample(&Exp1, rng) })
            .collect();
        let s: f64 = v.iter().sum();
        if s > 0.0 {
            return SelfWeightVector::new(v.into_iter().map(|x: f64| x / s).collect()).unwrap();
        }
    }
}

/// The star with center `h` where the center's weights are random.
pub fn random_star(n: usize, h: usize, rng: &mut impl Rng) -> RelativeInteractionMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for i in (0..n).filter(|&i| i != h) {
        rows[i][h] = 1.0;
        rows[h][i] = rng.random_range(0.05..1.0);
    }
    normalize_rows(&mut rows);
    RelativeInteractionMatrix::from_rows(&rows).unwrap()
}

pub fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
