//! Physical analogies on graphs: explicit-Euler diffusion along edges, the
//! stationary distribution of a weighted random walk, and the linear-subgraph
//! (cycle cover) expansions of the determinant and permanent.

use crate::graph::{GraphKind, WeightedDigraph};
use crate::spectra::{Complex, ComplexMatrix};
use thiserror::Error;

pub const COATES_MAX_N: usize = 10;
pub const PERMANENT_MAX_N: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalogyError {
    #[error("graph must have unit real edge weights for diffusion")]
    NotUnitWeights,
    #[error("edge weights must be real and nonnegative")]
    NotRealWeights,
    #[error("loops are not supported here")]
    LoopsUnsupported,
    #[error("vector has length {0}, expected {1}")]
    DimensionMismatch(usize, usize),
    #[error("explicit Euler unstable: dt*alpha*max_degree = {0} >= 1")]
    StabilityViolation(f64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {0} has zero strength")]
    ZeroStrength(usize),
    #[error("matrix of size {0} exceeds the limit {1}")]
    SizeLimit(usize, usize),
    #[error("matrix must be square")]
    NotSquare,
}

/// Amount of the diffusing quantity per vertex after `t` time units.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionState {
    pub psi: Vec<f64>,
    pub t: f64,
}

/// Explicit-Euler integration of `d psi/dt = alpha (A - D) psi` on an
/// undirected unit-weight graph. Mass is conserved; with
/// `dt * alpha * d_max < 1` the iteration is stable and converges to the
/// uniform vector on connected graphs.
pub fn diffuse(
    g: &WeightedDigraph,
    psi0: &[f64],
    alpha: f64,
    dt: f64,
    steps: usize,
) -> Result<DiffusionState, AnalogyError> {
    if g.kind() != GraphKind::EdgeUnit
        || g.edges()
            .iter()
            .any(|e| e.weight.im != 0.0 || (e.weight.re - 1.0).abs() > 1e-12)
    {
        return Err(AnalogyError::NotUnitWeights);
    }
    let n = g.vertex_count();
    if psi0.len() != n {
        return Err(AnalogyError::DimensionMismatch(psi0.len(), n));
    }
    let d_max = g.degrees().iter().cloned().fold(0.0, f64::max);
    let guard = dt * alpha * d_max;
    if guard.is_nan() || guard >= 1.0 || dt <= 0.0 {
        return Err(AnalogyError::StabilityViolation(guard));
    }
    let mut psi = psi0.to_vec();
    let mut delta = vec![0.0; n];
    for _ in 0..steps {
        for d in delta.iter_mut() {
            *d = 0.0;
        }
        for e in g.edges() {
            let (i, j) = (e.from - 1, e.to - 1);
            let flow = psi[j] - psi[i];
            delta[i] += flow;
            delta[j] -= flow;
        }
        for (p, d) in psi.iter_mut().zip(delta.iter()) {
            *p += dt * alpha * d;
        }
    }
    Ok(DiffusionState {
        psi,
        t: dt * steps as f64,
    })
}

/// Stationary distribution `gamma_j = w_j / (2w)` of the random walk with
/// transition probabilities proportional to edge weights; `w_j` is the total
/// weight at vertex j and `w` the total over unordered edges. Requires a
/// connected loop-free graph with real nonnegative weights and positive
/// strength everywhere.
pub fn stationary_distribution(g: &WeightedDigraph) -> Result<Vec<f64>, AnalogyError> {
    if !g.loops().is_empty() {
        return Err(AnalogyError::LoopsUnsupported);
    }
    if g.edges()
        .iter()
        .any(|e| e.weight.im != 0.0 || e.weight.re < 0.0)
    {
        return Err(AnalogyError::NotRealWeights);
    }
    if !g.is_connected() {
        return Err(AnalogyError::Disconnected);
    }
    let n = g.vertex_count();
    let mut strength = vec![0.0; n];
    let mut total = 0.0;
    for e in g.edges() {
        let w = e.weight.re;
        strength[e.from - 1] += w;
        strength[e.to - 1] += w;
        total += w;
    }
    for (i, &s) in strength.iter().enumerate() {
        if s <= 0.0 {
            return Err(AnalogyError::ZeroStrength(i + 1));
        }
    }
    Ok(strength.iter().map(|s| s / (2.0 * total)).collect())
}

/// Row-stochastic transition matrix `p_ij = w_ij / sum_k w_ik` of the walk.
pub fn transition_matrix(g: &WeightedDigraph) -> Result<Vec<Vec<f64>>, AnalogyError> {
    let n = g.vertex_count();
    let mut w = vec![vec![0.0; n]; n];
    for e in g.edges() {
        if e.weight.im != 0.0 || e.weight.re < 0.0 {
            return Err(AnalogyError::NotRealWeights);
        }
        w[e.from - 1][e.to - 1] = e.weight.re;
        w[e.to - 1][e.from - 1] = e.weight.re;
    }
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        let row: f64 = w[i].iter().sum();
        if row <= 0.0 {
            return Err(AnalogyError::ZeroStrength(i + 1));
        }
        for j in 0..n {
            p[i][j] = w[i][j] / row;
        }
    }
    Ok(p)
}

/// Determinant via linear subgraphs of the Coates digraph:
/// `det(A) = (-1)^n sum_L (-1)^{c(L)} w(L)` where L ranges over spanning
/// subgraphs with all in- and out-degrees one (permutations supported on
/// nonzero entries) and c(L) counts their cycles.
pub fn coates_determinant(a: &ComplexMatrix) -> Result<Complex, AnalogyError> {
    if !a.is_square() {
        return Err(AnalogyError::NotSquare);
    }
    let n = a.rows();
    if n > COATES_MAX_N {
        return Err(AnalogyError::SizeLimit(n, COATES_MAX_N));
    }
    if n == 0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    let mut used = vec![false; n];
    let mut perm = vec![0usize; n];
    let mut acc = Complex::new(0.0, 0.0);
    enumerate_linear_subgraphs(a, 0, &mut used, &mut perm, Complex::new(1.0, 0.0), &mut acc);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(acc * sign)
}

fn enumerate_linear_subgraphs(
    a: &ComplexMatrix,
    row: usize,
    used: &mut Vec<bool>,
    perm: &mut Vec<usize>,
    weight: Complex,
    acc: &mut Complex,
) {
    let n = a.rows();
    if row == n {
        let c = cycle_count(perm);
        let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
        *acc += weight * sign;
        return;
    }
    for col in 0..n {
        if used[col] || a[(row, col)].norm_sqr() == 0.0 {
            continue;
        }
        used[col] = true;
        perm[row] = col;
        enumerate_linear_subgraphs(a, row + 1, used, perm, weight * a[(row, col)], acc);
        used[col] = false;
    }
}

fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = perm[v];
        }
    }
    cycles
}

/// Permanent via Ryser's inclusion-exclusion over column subsets (Gray-code
/// order): `perm(A) = (-1)^n sum_{S != empty} (-1)^{|S|} prod_i sum_{j in S} a_ij`.
pub fn permanent(a: &ComplexMatrix) -> Result<Complex, AnalogyError> {
    if !a.is_square() {
        return Err(AnalogyError::NotSquare);
    }
    let n = a.rows();
    if n > PERMANENT_MAX_N {
        return Err(AnalogyError::SizeLimit(n, PERMANENT_MAX_N));
    }
    if n == 0 {
        return Ok(Complex::new(1.0, 0.0));
    }
    let mut row_sums = vec![Complex::new(0.0, 0.0); n];
    let mut total = Complex::new(0.0, 0.0);
    let mut prev_gray = 0usize;
    for k in 1usize..(1 << n) {
        let gray = k ^ (k >> 1);
        let changed = gray ^ prev_gray;
        let j = changed.trailing_zeros() as usize;
        let sign = if gray & changed != 0 { 1.0 } else { -1.0 };
        for (i, rs) in row_sums.iter_mut().enumerate() {
            *rs += a[(i, j)] * sign;
        }
        prev_gray = gray;
        let prod: Complex = row_sums.iter().product();
        let subset_sign = if gray.count_ones() % 2 == (n as u32) % 2 {
            1.0
        } else {
            -1.0
        };
        total += prod * subset_sign;
    }
    Ok(total)
}

/// Permutation-sum definition of the permanent; the validation oracle for
/// Ryser's method (kept independent of it).
pub fn permanent_by_definition(a: &ComplexMatrix) -> Result<Complex, AnalogyError> {
    if !a.is_square() {
        return Err(AnalogyError::NotSquare);
    }
    let n = a.rows();
    if n > 8 {
        return Err(AnalogyError::SizeLimit(n, 8));
    }
    fn rec(
        a: &ComplexMatrix,
        row: usize,
        used: &mut Vec<bool>,
        weight: Complex,
        acc: &mut Complex,
    ) {
        let n = a.rows();
        if row == n {
            *acc += weight;
            return;
        }
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                rec(a, row + 1, used, weight * a[(row, col)], acc);
                used[col] = false;
            }
        }
    }
    let mut acc = Complex::new(0.0, 0.0);
    rec(a, 0, &mut vec![false; n], Complex::new(1.0, 0.0), &mut acc);
    Ok(acc)
}
