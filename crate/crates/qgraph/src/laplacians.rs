//! Adjacency, degree, Laplacian and incidence matrices for every graph
//! flavor, plus the path-weight predicates behind the zero-eigenvalue
//! characterizations.
//!
//! Conventions that make the whole suite close to machine precision:
//!
//! - Vertex-weighted adjacency entries are `a_ij = conj(s_i) * s_j` with one
//!   fixed principal root `s_i = principal_sqrt(w_i)` per vertex. Each entry
//!   is a square root of `conj(w_i) * w_j`, chosen consistently so that
//!   `L = N⁻(N⁻)†` holds exactly and `(conj(s_1), ..., conj(s_n))` spans the
//!   kernel of L. Taking the principal root of the product instead breaks
//!   both whenever vertex phases differ by more than pi.
//! - Loop columns of the signless incidence carry `sqrt(2 r)`: the loop enters
//!   the degree once and the adjacency diagonal once, so Q gains `2r`.

use crate::graph::{GraphError, GraphKind, WeightedDigraph};
use crate::spectra::{principal_sqrt, Complex, ComplexMatrix};
use thiserror::Error;

/// Relative threshold below which an eigenvalue counts as zero.
pub const ZERO_EIG_RELATIVE: f64 = 1e-8;

/// Multiplicity of the eigenvalue 0 in an ascending spectrum.
pub fn kernel_multiplicity(values: &[f64]) -> usize {
    let lam_max = values.last().copied().unwrap_or(0.0).max(1.0);
    values
        .iter()
        .filter(|&&l| l.abs() <= ZERO_EIG_RELATIVE * lam_max)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFlavor {
    /// L = D - A
    Combinatorial,
    /// Q = D + A
    Signless,
}

impl MatrixFlavor {
    fn sign(self) -> f64 {
        match self {
            MatrixFlavor::Combinatorial => -1.0,
            MatrixFlavor::Signless => 1.0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaplacianError {
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("operation requires kind {0:?}")]
    WrongKind(GraphKind),
    #[error("path predicate is only offered for n <= {0}")]
    TooLarge(usize),
    #[error("vector has length {0}, expected {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn vertex_roots(g: &WeightedDigraph) -> Vec<Complex> {
    g.vertex_weights()
        .iter()
        .map(|&w| principal_sqrt(w))
        .collect()
}

/// Hermitian adjacency matrix of the graph.
pub fn adjacency(g: &WeightedDigraph) -> ComplexMatrix {
    let n = g.vertex_count();
    let mut a = ComplexMatrix::zeros(n, n);
    match g.kind() {
        GraphKind::EdgeUnit | GraphKind::EdgeLoop => {
            for e in g.edges() {
                a[(e.from - 1, e.to - 1)] = e.weight;
                a[(e.to - 1, e.from - 1)] = e.weight.conj();
            }
            for l in g.loops() {
                a[(l.vertex - 1, l.vertex - 1)] = Complex::new(l.weight, 0.0);
            }
        }
        GraphKind::VertexWeighted => {
            let s = vertex_roots(g);
            for e in g.edges() {
                let entry = s[e.from - 1].conj() * s[e.to - 1];
                a[(e.from - 1, e.to - 1)] = entry;
                a[(e.to - 1, e.from - 1)] = entry.conj();
            }
        }
    }
    a
}

/// D ± A. For edge-loop graphs the loop cancels on the combinatorial
/// diagonal and contributes 2r on the signless one.
pub fn laplacian(g: &WeightedDigraph, flavor: MatrixFlavor) -> ComplexMatrix {
    let n = g.vertex_count();
    let mut m = adjacency(g).scale(Complex::new(flavor.sign(), 0.0));
    for (i, &d) in g.degrees().iter().enumerate() {
        m[(i, i)] += Complex::new(d, 0.0);
        m[(i, i)] = Complex::new(m[(i, i)].re, 0.0);
    }
    debug_assert_eq!(m.rows(), n);
    m
}

/// Vertex-by-edge incidence matrix whose Gram product recovers the Laplacian:
/// `incidence(g, C) * incidence(g, C)† == laplacian(g, C)` and likewise for
/// the signless flavor. Loop columns appear only for signless edge-loop
/// graphs; an edgeless graph yields an n x 0 matrix.
pub fn incidence(g: &WeightedDigraph, flavor: MatrixFlavor) -> ComplexMatrix {
    let n = g.vertex_count();
    let sign = Complex::new(flavor.sign(), 0.0);
    let with_loops = flavor == MatrixFlavor::Signless && g.kind() == GraphKind::EdgeLoop;
    let cols = g.edges().len() + if with_loops { g.loops().len() } else { 0 };
    let mut m = ComplexMatrix::zeros(n, cols);
    match g.kind() {
        GraphKind::EdgeUnit => {
            for (c, e) in g.edges().iter().enumerate() {
                m[(e.from - 1, c)] = Complex::new(1.0, 0.0);
                m[(e.to - 1, c)] = sign * e.weight.conj();
            }
        }
        GraphKind::VertexWeighted => {
            let s = vertex_roots(g);
            for (c, e) in g.edges().iter().enumerate() {
                m[(e.from - 1, c)] = s[e.to - 1];
                m[(e.to - 1, c)] = sign * s[e.from - 1];
            }
        }
        GraphKind::EdgeLoop => {
            for (c, e) in g.edges().iter().enumerate() {
                let sw = principal_sqrt(e.weight);
                m[(e.from - 1, c)] = sw;
                m[(e.to - 1, c)] = sign * sw.conj();
            }
            if with_loops {
                for (k, l) in g.loops().iter().enumerate() {
                    m[(l.vertex - 1, g.edges().len() + k)] =
                        Complex::new((2.0 * l.weight).sqrt(), 0.0);
                }
            }
        }
    }
    m
}

/// Edge-sum quadratic form `x† (D ± A) x`, evaluated without building the
/// matrix. Edge-loop graphs use normalized weights `w/|w|`, so the value
/// equals the quadratic form of the normalized-weight graph; the signless
/// flavor adds `2 r_i |x_i|^2` per loop.
pub fn quad_form(
    g: &WeightedDigraph,
    flavor: MatrixFlavor,
    x: &[Complex],
) -> Result<f64, LaplacianError> {
    let n = g.vertex_count();
    if x.len() != n {
        return Err(LaplacianError::DimensionMismatch(x.len(), n));
    }
    let sign = Complex::new(flavor.sign(), 0.0);
    let mut total = 0.0;
    match g.kind() {
        GraphKind::EdgeUnit => {
            for e in g.edges() {
                total += (x[e.from - 1] + sign * e.weight * x[e.to - 1]).norm_sqr();
            }
        }
        GraphKind::VertexWeighted => {
            let s = vertex_roots(g);
            for e in g.edges() {
                let term =
                    x[e.from - 1] * s[e.to - 1].conj() + sign * x[e.to - 1] * s[e.from - 1].conj();
                total += term.norm_sqr();
            }
        }
        GraphKind::EdgeLoop => {
            for e in g.edges() {
                let unit = e.weight / e.weight.norm();
                total += (x[e.from - 1] + sign * unit * x[e.to - 1]).norm_sqr();
            }
            if flavor == MatrixFlavor::Signless {
                for l in g.loops() {
                    total += 2.0 * l.weight * x[l.vertex - 1].norm_sqr();
                }
            }
        }
    }
    Ok(total)
}

/// Copy of an edge-loop graph with every edge weight normalized to unit
/// modulus (loops unchanged); identity on other kinds. This is the graph
/// whose `D ± A` the edge-loop `quad_form` evaluates.
pub fn normalized_weight_graph(g: &WeightedDigraph) -> WeightedDigraph {
    if g.kind() != GraphKind::EdgeLoop {
        return g.clone();
    }
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.from, e.to, e.weight / e.weight.norm()))
        .collect();
    let loops = g.loops().iter().map(|l| (l.vertex, l.weight)).collect();
    WeightedDigraph::edge_loop(g.vertex_count(), edges, loops)
        .expect("normalization keeps invariants")
}

const PATH_PREDICATE_MAX_N: usize = 10;
const PATH_WEIGHT_TOL: f64 = 1e-9;

/// Path-weight condition for the least eigenvalue of D ± A to be zero on a
/// connected graph.
///
/// Signless: across every pair of simple skeleton paths between two fixed
/// vertices, weights must agree when path lengths share parity and be
/// opposite otherwise (equivalently, `(-1)^len * W` is constant per vertex
/// pair). Combinatorial: the sign-free rule, `W` itself constant. Edge-loop
/// weights enter normalized to unit modulus; a connected signless edge-loop
/// graph with a loop never qualifies.
pub fn zero_eig_path_predicate(
    g: &WeightedDigraph,
    flavor: MatrixFlavor,
) -> Result<bool, LaplacianError> {
    if g.kind() == GraphKind::VertexWeighted {
        return Err(LaplacianError::WrongKind(g.kind()));
    }
    if !g.is_connected() {
        return Err(LaplacianError::DisconnectedGraph);
    }
    let n = g.vertex_count();
    if n > PATH_PREDICATE_MAX_N {
        return Err(LaplacianError::TooLarge(PATH_PREDICATE_MAX_N));
    }
    if flavor == MatrixFlavor::Signless && !g.loops().is_empty() {
        // r|x_i|^2 > 0 forces x = 0 on a connected graph.
        return Ok(false);
    }
    let normalize = g.kind() == GraphKind::EdgeLoop;
    for u in 1..=n {
        for v in (u + 1)..=n {
            let paths = g.enumerate_simple_paths(u, v, n)?;
            let mut reference: Option<Complex> = None;
            for p in &paths {
                let mut w = p.weight;
                if normalize {
                    w /= w.norm();
                }
                if flavor == MatrixFlavor::Signless && p.len() % 2 == 1 {
                    w = -w;
                }
                match reference {
                    None => reference = Some(w),
                    Some(r) => {
                        if (w - r).norm() > PATH_WEIGHT_TOL {
                            return Ok(false);
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// The vector spanning the combinatorial kernel of a vertex-weighted graph:
/// component-wise conjugated principal roots of the vertex weights. With the
/// adjacency convention above, `L * v = 0` holds identically.
pub fn vertex_weighted_kernel_vector(g: &WeightedDigraph) -> Result<Vec<Complex>, LaplacianError> {
    if g.kind() != GraphKind::VertexWeighted {
        return Err(LaplacianError::WrongKind(g.kind()));
    }
    Ok(vertex_roots(g).into_iter().map(|s| s.conj()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_graph;
    use crate::spectra::{hermitian_eigen, is_psd};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn example_2_2() -> WeightedDigraph {
        parse_graph("graph edge-unit n=4\nedge 1 2 1\nedge 1 4 0+1i\nedge 2 3 0+1i\nedge 4 2 0+1i")
            .unwrap()
    }

    fn example_2_8() -> WeightedDigraph {
        parse_graph("graph vertex n=4\nvw 1 -1i\nvw 2 1\nvw 3 1i\nvw 4 1\nedge 1 2\nedge 1 4\nedge 2 3\nedge 4 2")
            .unwrap()
    }

    #[test]
    fn adjacency_unweighted_example() {
        // 5-vertex unweighted graph: edges 1-2, 1-3, 1-4, 2-3, 3-4, 3-5, 4-5.
        let g = WeightedDigraph::edge_unit(
            5,
            [(1, 2), (1, 3), (1, 4), (2, 3), (3, 4), (3, 5), (4, 5)]
                .iter()
                .map(|&(i, j)| (i, j, c(1.0, 0.0)))
                .collect(),
        )
        .unwrap();
        let expect = ComplexMatrix::from_real_rows(&[
            vec![0., 1., 1., 1., 0.],
            vec![1., 0., 1., 0., 0.],
            vec![1., 1., 0., 1., 1.],
            vec![1., 0., 1., 0., 1.],
            vec![0., 0., 1., 1., 0.],
        ]);
        assert_eq!(adjacency(&g), expect);
    }

    #[test]
    fn adjacency_edgeless_is_zero() {
        let g = WeightedDigraph::edge_unit(3, vec![]).unwrap();
        assert_eq!(adjacency(&g), ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn laplacian_example_2_2_exact() {
        let l = laplacian(&example_2_2(), MatrixFlavor::Combinatorial);
        let expect = ComplexMatrix::from_rows(&[
            vec![c(2., 0.), c(-1., 0.), c(0., 0.), c(0., -1.)],
            vec![c(-1., 0.), c(3., 0.), c(0., -1.), c(0., 1.)],
            vec![c(0., 0.), c(0., 1.), c(1., 0.), c(0., 0.)],
            vec![c(0., 1.), c(0., -1.), c(0., 0.), c(2., 0.)],
        ]);
        assert_eq!(l.max_abs_diff(&expect), 0.0);
    }

    #[test]
    fn example_2_8_signless_matches_printed_entries() {
        let q = laplacian(&example_2_8(), MatrixFlavor::Signless);
        let sqrt_i = Complex::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let sqrt_mi = sqrt_i.conj();
        let expect = ComplexMatrix::from_rows(&[
            vec![c(2., 0.), sqrt_i, c(0., 0.), sqrt_i],
            vec![sqrt_mi, c(3., 0.), sqrt_i, c(1., 0.)],
            vec![c(0., 0.), sqrt_mi, c(1., 0.), c(0., 0.)],
            vec![sqrt_mi, c(1., 0.), c(0., 0.), c(2., 0.)],
        ]);
        assert!(q.max_abs_diff(&expect) <= 1e-12);
    }

    #[test]
    fn isolated_vertex_laplacian() {
        let g = WeightedDigraph::edge_unit(1, vec![]).unwrap();
        assert_eq!(
            laplacian(&g, MatrixFlavor::Combinatorial),
            ComplexMatrix::zeros(1, 1)
        );
    }

    #[test]
    fn edge_loop_signless_k2() {
        let (r1, w) = (0.8, Complex::from_polar(1.0, 1.1));
        let g = WeightedDigraph::edge_loop(2, vec![(1, 2, w)], vec![(1, r1)]).unwrap();
        let q = laplacian(&g, MatrixFlavor::Signless);
        let expect = ComplexMatrix::from_rows(&[
            vec![c(2.0 * r1 + 1.0, 0.0), w],
            vec![w.conj(), c(1.0, 0.0)],
        ]);
        assert!(q.max_abs_diff(&expect) <= 1e-12);
        // Loops cancel out of L entirely.
        let l = laplacian(&g, MatrixFlavor::Combinatorial);
        let no_loop = WeightedDigraph::edge_loop(2, vec![(1, 2, w)], vec![]).unwrap();
        assert!(l.max_abs_diff(&laplacian(&no_loop, MatrixFlavor::Combinatorial)) <= 1e-15);
    }

    #[test]
    fn incidence_k2() {
        let w = Complex::from_polar(1.0, 0.4);
        let g = WeightedDigraph::edge_unit(2, vec![(1, 2, w)]).unwrap();
        let m = incidence(&g, MatrixFlavor::Combinatorial);
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert_eq!(m[(0, 0)], c(1.0, 0.0));
        assert_eq!(m[(1, 0)], -w.conj());
        let gram = m.mul(&m.dagger());
        assert!(gram.max_abs_diff(&laplacian(&g, MatrixFlavor::Combinatorial)) <= 1e-15);
    }

    #[test]
    fn incidence_edgeless() {
        let g = WeightedDigraph::edge_unit(3, vec![]).unwrap();
        let m = incidence(&g, MatrixFlavor::Combinatorial);
        assert_eq!((m.rows(), m.cols()), (3, 0));
        assert_eq!(
            laplacian(&g, MatrixFlavor::Combinatorial),
            ComplexMatrix::zeros(3, 3)
        );
    }

    #[test]
    fn incidence_factorization_example_2_2() {
        let g = example_2_2();
        for flavor in [MatrixFlavor::Combinatorial, MatrixFlavor::Signless] {
            let m = incidence(&g, flavor);
            let err = m.mul(&m.dagger()).max_abs_diff(&laplacian(&g, flavor));
            assert!(err <= 1e-12, "err={err}");
        }
    }

    #[test]
    fn factorization_fuzz_all_kinds() {
        use crate::fuzz::random_graph;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for t in 0..600 {
            let kind = match t % 3 {
                0 => GraphKind::EdgeUnit,
                1 => GraphKind::VertexWeighted,
                _ => GraphKind::EdgeLoop,
            };
            let g = random_graph(kind, 1 + t % 8, &mut rng);
            for flavor in [MatrixFlavor::Combinatorial, MatrixFlavor::Signless] {
                let m = incidence(&g, flavor);
                let k = laplacian(&g, flavor);
                assert!(m.mul(&m.dagger()).max_abs_diff(&k) <= 1e-11);
                assert!(is_psd(&k, 1e-9).unwrap());
            }
        }
    }

    #[test]
    fn quad_form_trivial_and_kernel() {
        let g = WeightedDigraph::edge_unit(2, vec![(1, 2, c(1.0, 0.0))]).unwrap();
        let ones = vec![c(1.0, 0.0); 2];
        assert!(
            quad_form(&g, MatrixFlavor::Combinatorial, &ones)
                .unwrap()
                .abs()
                <= 1e-15
        );
        assert!(quad_form(&g, MatrixFlavor::Combinatorial, &[c(1.0, 0.0)]).is_err());

        let vw = example_2_8();
        let v = vertex_weighted_kernel_vector(&vw).unwrap();
        assert!(
            quad_form(&vw, MatrixFlavor::Combinatorial, &v)
                .unwrap()
                .abs()
                <= 1e-12
        );
    }

    // Matrix-product oracle: the edge-sum formula equals x'(D±A)x built from
    // the (normalized, for edge-loop) weights.
    #[test]
    fn quad_form_matches_matrix_oracle() {
        use crate::fuzz::random_graph;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for t in 0..300 {
            let kind = match t % 3 {
                0 => GraphKind::EdgeUnit,
                1 => GraphKind::VertexWeighted,
                _ => GraphKind::EdgeLoop,
            };
            let g = random_graph(kind, 2 + t % 6, &mut rng);
            let n = g.vertex_count();
            let x: Vec<Complex> = (0..n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            for flavor in [MatrixFlavor::Combinatorial, MatrixFlavor::Signless] {
                let direct = quad_form(&g, flavor, &x).unwrap();
                let k = laplacian(&normalized_weight_graph(&g), flavor);
                let kx = k.mul_vec(&x);
                let via_matrix: Complex = x.iter().zip(kx.iter()).map(|(a, b)| a.conj() * b).sum();
                assert!(
                    (direct - via_matrix.re).abs() <= 1e-10 * (1.0 + direct.abs()),
                    "{kind:?} {flavor:?}: {direct} vs {via_matrix}"
                );
            }
        }
    }

    #[test]
    fn predicate_examples() {
        // The example graph has no zero eigenvalue for either flavor.
        assert!(!zero_eig_path_predicate(&example_2_2(), MatrixFlavor::Combinatorial).unwrap());
        // Unweighted path graph: single path per pair, condition trivially holds.
        let p3 =
            WeightedDigraph::edge_unit(3, vec![(1, 2, c(1.0, 0.0)), (2, 3, c(1.0, 0.0))]).unwrap();
        assert!(zero_eig_path_predicate(&p3, MatrixFlavor::Combinatorial).unwrap());
        let disc = WeightedDigraph::edge_unit(3, vec![(1, 2, c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            zero_eig_path_predicate(&disc, MatrixFlavor::Combinatorial),
            Err(LaplacianError::DisconnectedGraph)
        ));
        assert!(matches!(
            zero_eig_path_predicate(&example_2_8(), MatrixFlavor::Combinatorial),
            Err(LaplacianError::WrongKind(_))
        ));
    }

    // Eigensolver oracle: predicate agrees with lambda_min <= threshold on
    // random connected unit-weight trees and graphs.
    #[test]
    fn predicate_matches_eigensolver() {
        use crate::fuzz::{random_connected_graph, random_graph};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(55);
        let mut zeros_seen = 0;
        for t in 0..500 {
            let kind = if t % 2 == 0 {
                GraphKind::EdgeUnit
            } else {
                GraphKind::EdgeLoop
            };
            let g = if t % 3 == 0 {
                random_connected_graph(kind, 2 + t % 6, &mut rng)
            } else {
                let g = random_graph(kind, 2 + t % 6, &mut rng);
                if !g.is_connected() {
                    continue;
                }
                g
            };
            for flavor in [MatrixFlavor::Combinatorial, MatrixFlavor::Signless] {
                let eig = hermitian_eigen(&laplacian(&g, flavor), 1e-10).unwrap();
                let has_zero = kernel_multiplicity(&eig.values) > 0;
                let pred = zero_eig_path_predicate(&g, flavor).unwrap();
                assert_eq!(pred, has_zero, "kind={:?} flavor={flavor:?}", g.kind());
                if has_zero {
                    zeros_seen += 1;
                }
            }
        }
        assert!(
            zeros_seen > 20,
            "oracle too weak: only {zeros_seen} zero cases"
        );
    }

    #[test]
    fn kernel_vector_cases() {
        let ones = WeightedDigraph::vertex_weighted(3, vec![(1, 2), (2, 3)], vec![c(1.0, 0.0); 3])
            .unwrap();
        assert_eq!(
            vertex_weighted_kernel_vector(&ones).unwrap(),
            vec![c(1.0, 0.0); 3]
        );

        let g = example_2_8();
        let v = vertex_weighted_kernel_vector(&g).unwrap();
        let l = laplacian(&g, MatrixFlavor::Combinatorial);
        let lv = l.mul_vec(&v);
        let norm: f64 = lv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm <= 1e-10 * l.frobenius_norm());
        // Connected vertex-weighted graphs have a one-dimensional kernel.
        let eig = hermitian_eigen(&l, 1e-10).unwrap();
        assert_eq!(kernel_multiplicity(&eig.values), 1);
    }
}
