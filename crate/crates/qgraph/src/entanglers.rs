//! Generalized graph products on single-qubit adjacency matrices, the matrix
//! function chains they are built from, Bell and Werner state generation, and
//! a randomized separability experiment for the two-term product
//! `A(G) (x) f(A(H)) + I (x) g(A(H))`.

use crate::spectra::{kron, Complex, ComplexMatrix};
use crate::states::{density_from_graph, ppt_verdict, DensityMatrix, StateError};
use crate::{graph::WeightedDigraph, laplacians::MatrixFlavor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const HERMITIAN_RESULT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProductError {
    #[error("expected a {0}x{0} matrix, got {1}x{2}")]
    WrongDimension(usize, usize, usize),
    #[error("dagger-of-whole must be the last element of a chain")]
    DaggerNotLast,
    #[error("recipe has no function pairs")]
    EmptyRecipe,
    #[error("product is not Hermitian (deviation {0:.3e})")]
    NotHermitianResult(f64),
    #[error("product has a nonzero diagonal entry ({0:.3e}) but the recipe forbids one")]
    NonzeroDiagonal(f64),
    #[error("product diagonal entry {0} is negative; cannot be read as a loop weight")]
    NegativeDiagonal(usize),
    #[error("total degree of the product is zero")]
    DegreeZero,
    #[error("weight must be nonzero")]
    ZeroWeight,
    #[error("weight must have unit modulus, got {0}")]
    NotUnitModulus(f64),
    #[error("loop weight {0} must be positive")]
    NonPositiveLoop(f64),
    #[error("experiment needs at least one trial")]
    ZeroTrials,
    #[error(transparent)]
    State(#[from] StateError),
}

/// One step of a matrix function chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum MatrixFn {
    Identity,
    RightMul { matrix: ComplexMatrix },
    LeftMul { matrix: ComplexMatrix },
    DaggerOfWhole,
}

/// Composable description of the `f_i`/`g_i` matrix functions: the chain is
/// evaluated left to right on a 2x2 input, with at most one trailing
/// dagger-of-the-whole. Covers the shapes `XJ`, `JX`, `XK†`, `(Z X† Z)J`,
/// `(XJ)†` used by the product constructions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFunctionSpec {
    pub chain: Vec<MatrixFn>,
}

impl MatrixFunctionSpec {
    pub fn new(chain: Vec<MatrixFn>) -> Self {
        Self { chain }
    }

    pub fn identity() -> Self {
        Self {
            chain: vec![MatrixFn::Identity],
        }
    }

    pub fn right_mul(matrix: ComplexMatrix) -> Self {
        Self {
            chain: vec![MatrixFn::RightMul { matrix }],
        }
    }

    pub fn left_mul(matrix: ComplexMatrix) -> Self {
        Self {
            chain: vec![MatrixFn::LeftMul { matrix }],
        }
    }

    /// Append a dagger of the whole composition.
    pub fn then_dagger(mut self) -> Self {
        self.chain.push(MatrixFn::DaggerOfWhole);
        self
    }

    /// Evaluate the chain on a 2x2 matrix.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix, ProductError> {
        check_2x2(x)?;
        let mut acc = x.clone();
        for (idx, step) in self.chain.iter().enumerate() {
            match step {
                MatrixFn::Identity => {}
                MatrixFn::RightMul { matrix } => {
                    check_2x2(matrix)?;
                    acc = acc.mul(matrix);
                }
                MatrixFn::LeftMul { matrix } => {
                    check_2x2(matrix)?;
                    acc = matrix.mul(&acc);
                }
                MatrixFn::DaggerOfWhole => {
                    if idx + 1 != self.chain.len() {
                        return Err(ProductError::DaggerNotLast);
                    }
                    acc = acc.dagger();
                }
            }
        }
        Ok(acc)
    }
}

/// Evaluate a matrix function chain on a 2x2 input.
pub fn apply_fn(
    spec: &MatrixFunctionSpec,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix, ProductError> {
    spec.apply(x)
}

fn check_2x2(m: &ComplexMatrix) -> Result<(), ProductError> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(ProductError::WrongDimension(2, m.rows(), m.cols()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecipePair {
    pub f: MatrixFunctionSpec,
    pub g: MatrixFunctionSpec,
}

/// A sum-of-Kronecker-terms product: `sum_i f_i(A(G)) (x) g_i(A(H))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductRecipe {
    pub pairs: Vec<RecipePair>,
    /// The general product definition demands a hollow result; loop-carrying
    /// inputs legitimately leave their loop weights on the diagonal.
    #[serde(default)]
    pub require_zero_diagonal: bool,
}

/// Default for the hollow-result requirement: on unless either input carries
/// a diagonal (loop) entry.
pub fn default_require_zero_diagonal(ag: &ComplexMatrix, ah: &ComplexMatrix) -> bool {
    let has_diag = |m: &ComplexMatrix| (0..m.rows()).any(|i| m[(i, i)].norm() > 0.0);
    !(has_diag(ag) || has_diag(ah))
}

/// Two-term product `A(G) (x) f(A(H)) + I_2 (x) g(A(H))`.
pub fn product_fg(
    ag: &ComplexMatrix,
    ah: &ComplexMatrix,
    f: &MatrixFunctionSpec,
    g: &MatrixFunctionSpec,
) -> Result<ComplexMatrix, ProductError> {
    check_2x2(ag)?;
    check_2x2(ah)?;
    let first = kron(ag, &f.apply(ah)?);
    let second = kron(&ComplexMatrix::identity(2), &g.apply(ah)?);
    Ok(first.add(&second))
}

/// Multi-term product `sum_i f_i(A(G)) (x) g_i(A(H))`, validated Hermitian
/// and, when the recipe requires it, hollow.
pub fn product_multi(
    ag: &ComplexMatrix,
    ah: &ComplexMatrix,
    recipe: &ProductRecipe,
) -> Result<ComplexMatrix, ProductError> {
    check_2x2(ag)?;
    check_2x2(ah)?;
    if recipe.pairs.is_empty() {
        return Err(ProductError::EmptyRecipe);
    }
    let mut acc = ComplexMatrix::zeros(4, 4);
    for pair in &recipe.pairs {
        acc = acc.add(&kron(&pair.f.apply(ag)?, &pair.g.apply(ah)?));
    }
    let herm = acc.hermiticity_error();
    if herm > HERMITIAN_RESULT_TOL * (1.0 + acc.max_abs()) {
        return Err(ProductError::NotHermitianResult(herm));
    }
    if recipe.require_zero_diagonal {
        let worst = (0..4).map(|i| acc[(i, i)].norm()).fold(0.0, f64::max);
        if worst > HERMITIAN_RESULT_TOL * (1.0 + acc.max_abs()) {
            return Err(ProductError::NonzeroDiagonal(worst));
        }
    }
    Ok(acc)
}

/// Density matrix of a product adjacency with degrees read off the matrix
/// itself: `d_i = sum_j |a_ij|`, the diagonal treated as a loop weight.
/// `K = D -/+ A` per flavor, normalized by its trace.
pub fn density_from_product(
    aprod: &ComplexMatrix,
    flavor: MatrixFlavor,
) -> Result<DensityMatrix, ProductError> {
    let n = aprod.rows();
    if !aprod.is_square() {
        return Err(ProductError::WrongDimension(n, aprod.rows(), aprod.cols()));
    }
    let herm = aprod.hermiticity_error();
    if herm > HERMITIAN_RESULT_TOL * (1.0 + aprod.max_abs()) {
        return Err(ProductError::NotHermitianResult(herm));
    }
    // Diagonal entries play the role of loop weights; roundoff residue from
    // chain arithmetic is allowed, genuinely negative entries are not.
    for i in 0..n {
        if aprod[(i, i)].re < -HERMITIAN_RESULT_TOL * (1.0 + aprod.max_abs()) {
            return Err(ProductError::NegativeDiagonal(i + 1));
        }
    }
    let degrees: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| aprod[(i, j)].norm()).sum())
        .collect();
    build_density(aprod, &degrees, flavor)
}

/// Density matrix of a product adjacency over *vertex-weighted* inputs: the
/// degree of product vertex k is the sum of |W_l| over its neighbors, with
/// W the per-vertex product weights. This is the degree rule the closed-form
/// Bell constructions use; row-modulus sums would erase the weight asymmetry
/// that makes them non-maximally entangled.
pub fn density_from_product_weighted(
    aprod: &ComplexMatrix,
    vertex_weights: &[Complex],
    flavor: MatrixFlavor,
) -> Result<DensityMatrix, ProductError> {
    let n = aprod.rows();
    if !aprod.is_square() || vertex_weights.len() != n {
        return Err(ProductError::WrongDimension(
            n,
            aprod.rows(),
            vertex_weights.len(),
        ));
    }
    let herm = aprod.hermiticity_error();
    if herm > HERMITIAN_RESULT_TOL * (1.0 + aprod.max_abs()) {
        return Err(ProductError::NotHermitianResult(herm));
    }
    let degrees: Vec<f64> = (0..n)
        .map(|i| {
            let neighbor_sum: f64 = (0..n)
                .filter(|&j| j != i && aprod[(i, j)].norm() > 0.0)
                .map(|j| vertex_weights[j].norm())
                .sum();
            neighbor_sum + aprod[(i, i)].norm()
        })
        .collect();
    build_density(aprod, &degrees, flavor)
}

fn build_density(
    aprod: &ComplexMatrix,
    degrees: &[f64],
    flavor: MatrixFlavor,
) -> Result<DensityMatrix, ProductError> {
    let sign = match flavor {
        MatrixFlavor::Combinatorial => -1.0,
        MatrixFlavor::Signless => 1.0,
    };
    let mut k = aprod.scale(Complex::new(sign, 0.0));
    for (i, &d) in degrees.iter().enumerate() {
        k[(i, i)] = Complex::new(k[(i, i)].re + d, 0.0);
    }
    let tr = k.trace().re;
    if tr <= 0.0 {
        return Err(ProductError::DegreeZero);
    }
    Ok(DensityMatrix::from_matrix(
        k.scale(Complex::new(1.0 / tr, 0.0)),
    )?)
}

// Constant matrices the product constructions are phrased in.

/// `J = [[0,0],[0,1]]`
pub fn j_mat() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]])
}

/// `P = [[0,1],[0,0]]`
pub fn p_mat() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]])
}

/// `Z = [[0,-1],[1,0]]`
pub fn z_mat() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]])
}

/// `K(w) = [[0, conj(w)],[0,0]]`
pub fn k_mat(w: Complex) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex::new(0.0, 0.0), w.conj()],
        vec![Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)],
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiMinus,
    PhiPlus,
    PsiMinus,
    PsiPlus,
}

impl BellKind {
    pub fn flavor(self) -> MatrixFlavor {
        match self {
            BellKind::PhiMinus | BellKind::PsiMinus => MatrixFlavor::Combinatorial,
            BellKind::PhiPlus | BellKind::PsiPlus => MatrixFlavor::Signless,
        }
    }

    fn is_phi(self) -> bool {
        matches!(self, BellKind::PhiMinus | BellKind::PhiPlus)
    }
}

/// The two-pair recipe generating the Phi or Psi family: `f1(X) = XJ`,
/// `f2(X) = (XJ)†`; Phi pairs them as (f1,f1),(f2,f2), Psi crosses them.
pub fn bell_recipe(kind: BellKind) -> ProductRecipe {
    let f1 = MatrixFunctionSpec::right_mul(j_mat());
    let f2 = MatrixFunctionSpec::right_mul(j_mat()).then_dagger();
    let pairs = if kind.is_phi() {
        vec![
            RecipePair {
                f: f1.clone(),
                g: f1,
            },
            RecipePair {
                f: f2.clone(),
                g: f2,
            },
        ]
    } else {
        vec![
            RecipePair {
                f: f1.clone(),
                g: f2.clone(),
            },
            RecipePair { f: f2, g: f1 },
        ]
    };
    ProductRecipe {
        pairs,
        require_zero_diagonal: true,
    }
}

/// Per-vertex weights of the product of two weighted single-qubit graphs, in
/// tensor order (1,1'), (1,2'), (2,1'), (2,2').
pub fn product_vertex_weights(g: (Complex, Complex), h: (Complex, Complex)) -> [Complex; 4] {
    [g.0 * h.0, g.0 * h.1, g.1 * h.0, g.1 * h.1]
}

/// Closed-form Bell-family density matrix from two vertex-weighted K2 graphs
/// with weights (w1, w2) and (w1p, w2p). Unit weights give the four exact
/// Bell projectors; any nonzero weights give a pure NPT state.
pub fn bell_pair(
    kind: BellKind,
    w1: Complex,
    w2: Complex,
    w1p: Complex,
    w2p: Complex,
) -> Result<DensityMatrix, ProductError> {
    for w in [w1, w2, w1p, w2p] {
        if w.norm() == 0.0 {
            return Err(ProductError::ZeroWeight);
        }
    }
    let g = WeightedDigraph::vertex_weighted(2, vec![(1, 2)], vec![w1, w2])
        .expect("nonzero weights are valid");
    let h = WeightedDigraph::vertex_weighted(2, vec![(1, 2)], vec![w1p, w2p])
        .expect("nonzero weights are valid");
    let ag = crate::laplacians::adjacency(&g);
    let ah = crate::laplacians::adjacency(&h);
    let aprod = product_multi(&ag, &ah, &bell_recipe(kind))?;
    let weights = product_vertex_weights((w1, w2), (w1p, w2p));
    density_from_product_weighted(&aprod, &weights, kind.flavor())
}

/// Product of two single-qubit loop graphs (loop r1 at the first vertex of G,
/// loop r2 at the second vertex of H, unit edge weights w, wp): returns the
/// combinatorial-flavor density (a |Psi-> projector when w = wp) and the
/// signless-flavor Werner-family density with diagonal
/// (2r1, 1, 1, 2r2)/(2(1 + r1 + r2)).
pub fn werner_from_loops(
    w: Complex,
    wp: Complex,
    r1: f64,
    r2: f64,
) -> Result<(DensityMatrix, DensityMatrix), ProductError> {
    for z in [w, wp] {
        let m = z.norm();
        if m == 0.0 {
            return Err(ProductError::ZeroWeight);
        }
        if (m - 1.0).abs() > crate::graph::UNIT_MODULUS_TOL {
            return Err(ProductError::NotUnitModulus(m));
        }
    }
    for r in [r1, r2] {
        if r.is_nan() || r <= 0.0 {
            return Err(ProductError::NonPositiveLoop(r));
        }
    }
    let zero = Complex::new(0.0, 0.0);
    let mid = w * wp.conj();
    let aprod = ComplexMatrix::from_rows(&[
        vec![Complex::new(r1, 0.0), zero, zero, zero],
        vec![zero, zero, mid, zero],
        vec![zero, mid.conj(), zero, zero],
        vec![zero, zero, zero, Complex::new(r2, 0.0)],
    ]);
    let bell = density_from_product(&aprod, MatrixFlavor::Combinatorial)?;
    let werner = density_from_product(&aprod, MatrixFlavor::Signless)?;
    Ok((bell, werner))
}

/// One separability trial outcome inside [`separability_experiment`].
#[derive(Debug, Clone, Copy, PartialEq)]
enum TrialOutcome {
    Separable {
        min_eigenvalue: f64,
        borderline: bool,
    },
    Npt {
        min_eigenvalue: f64,
    },
    /// All-zero product: no density matrix, trivially separable.
    Trivial,
}

/// Report of the randomized two-term-product separability experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparabilityReport {
    pub trials: usize,
    pub separable_count: usize,
    pub npt_count: usize,
    pub borderline_count: usize,
    pub trivial_count: usize,
    /// Smallest partial-transpose eigenvalue seen; absent when every trial
    /// degenerated to the zero product.
    pub min_pt_eigenvalue: Option<f64>,
    /// NPT verdicts among the injected degenerate configurations.
    pub degenerate_npt_count: usize,
}

/// Randomized check that the two-term product of single-qubit graphs is
/// always separable under the combinatorial flavor.
///
/// Each trial draws a unit weight for A(G), a random Hermitian target for
/// f(A(H)) and a hollow Hermitian target for g(A(H)) (entries bounded by 2),
/// realizes them as left-multiplication chains against an invertible A(H),
/// and applies the PPT test to the resulting density. Four degenerate
/// configurations (vanishing block determinant) are injected ahead of the
/// random trials.
pub fn separability_experiment(
    trials: usize,
    seed: u64,
) -> Result<SeparabilityReport, ProductError> {
    if trials == 0 {
        return Err(ProductError::ZeroTrials);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SeparabilityReport {
        trials,
        separable_count: 0,
        npt_count: 0,
        borderline_count: 0,
        trivial_count: 0,
        min_pt_eigenvalue: None,
        degenerate_npt_count: 0,
    };

    let zero2 = ComplexMatrix::zeros(2, 2);
    let hollow = |g12: Complex| {
        ComplexMatrix::from_rows(&[
            vec![Complex::new(0.0, 0.0), g12],
            vec![g12.conj(), Complex::new(0.0, 0.0)],
        ])
    };
    let diag2 = |a: f64, d: f64| ComplexMatrix::from_real_rows(&[vec![a, 0.0], vec![0.0, d]]);

    // Degenerate configurations where the upper-left block of the partial
    // transpose is singular: (f, g) pairs.
    let degenerate: Vec<(ComplexMatrix, ComplexMatrix)> = vec![
        (zero2.clone(), hollow(Complex::new(1.0, 0.0))), // d1 = |g12|
        (zero2.clone(), zero2.clone()),                  // everything zero
        (diag2(1.3, 0.0), zero2.clone()),                // d1 = |f11|
        (diag2(0.0, 0.9), zero2.clone()),                // only f22 nonzero
    ];

    for (f_target, g_target) in degenerate {
        let outcome = run_trial(&mut rng, Some((f_target, g_target)))?;
        record(&mut report, outcome);
        if matches!(outcome, TrialOutcome::Npt { .. }) {
            report.degenerate_npt_count += 1;
        }
    }
    for _ in 0..trials {
        let outcome = run_trial(&mut rng, None)?;
        record(&mut report, outcome);
    }
    Ok(report)
}

fn track_min(slot: &mut Option<f64>, candidate: f64) {
    *slot = Some(slot.map_or(candidate, |m| m.min(candidate)));
}

fn record(report: &mut SeparabilityReport, outcome: TrialOutcome) {
    match outcome {
        TrialOutcome::Separable {
            min_eigenvalue,
            borderline,
        } => {
            report.separable_count += 1;
            track_min(&mut report.min_pt_eigenvalue, min_eigenvalue);
            if borderline {
                report.borderline_count += 1;
            }
        }
        TrialOutcome::Npt { min_eigenvalue } => {
            report.npt_count += 1;
            track_min(&mut report.min_pt_eigenvalue, min_eigenvalue);
        }
        TrialOutcome::Trivial => report.trivial_count += 1,
    }
}

fn run_trial(
    rng: &mut ChaCha8Rng,
    forced: Option<(ComplexMatrix, ComplexMatrix)>,
) -> Result<TrialOutcome, ProductError> {
    let omega = Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let ag = ComplexMatrix::from_rows(&[
        vec![Complex::new(0.0, 0.0), omega],
        vec![omega.conj(), Complex::new(0.0, 0.0)],
    ]);
    let omega_h = Complex::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    let ah = ComplexMatrix::from_rows(&[
        vec![Complex::new(0.0, 0.0), omega_h],
        vec![omega_h.conj(), Complex::new(0.0, 0.0)],
    ]);

    let (f_target, g_target) = match forced {
        Some(pair) => pair,
        None => {
            let mut f = ComplexMatrix::zeros(2, 2);
            f[(0, 0)] = Complex::new(rng.gen_range(-2.0..2.0), 0.0);
            f[(1, 1)] = Complex::new(rng.gen_range(-2.0..2.0), 0.0);
            let f12 = Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            f[(0, 1)] = f12;
            f[(1, 0)] = f12.conj();
            let g12 = Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            (f, hollow_of(g12))
        }
    };

    // Realize the targets as chains: LeftMul(T * A(H)^{-1}) applied to A(H).
    let ah_inv = ComplexMatrix::from_rows(&[
        vec![
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0) / omega_h.conj(),
        ],
        vec![Complex::new(1.0, 0.0) / omega_h, Complex::new(0.0, 0.0)],
    ]);
    let f_spec = MatrixFunctionSpec::left_mul(f_target.mul(&ah_inv));
    let g_spec = MatrixFunctionSpec::left_mul(g_target.mul(&ah_inv));
    let aprod = product_fg(&ag, &ah, &f_spec, &g_spec)?;

    match density_from_product(&aprod, MatrixFlavor::Combinatorial) {
        Ok(sigma) => {
            let verdict = ppt_verdict(&sigma)?;
            Ok(if verdict.separable {
                TrialOutcome::Separable {
                    min_eigenvalue: verdict.min_eigenvalue,
                    borderline: verdict.borderline,
                }
            } else {
                TrialOutcome::Npt {
                    min_eigenvalue: verdict.min_eigenvalue,
                }
            })
        }
        Err(ProductError::DegreeZero) => Ok(TrialOutcome::Trivial),
        Err(e) => Err(e),
    }
}

fn hollow_of(g12: Complex) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex::new(0.0, 0.0), g12],
        vec![g12.conj(), Complex::new(0.0, 0.0)],
    ])
}

/// The worked two-qubit example: adjacency matrices `[[0,1],[1,0]]` and
/// `[[1,0],[0,0]]` with the recipe (XJ (x) XP) + ((XJ)† (x) P†X); evaluates to
/// the antidiagonal-corner matrix whose signless density is the Bell
/// projector onto (|00> + |11>)/sqrt(2).
pub fn bell_corner_recipe() -> ProductRecipe {
    ProductRecipe {
        pairs: vec![
            RecipePair {
                f: MatrixFunctionSpec::right_mul(j_mat()),
                g: MatrixFunctionSpec::right_mul(p_mat()),
            },
            RecipePair {
                f: MatrixFunctionSpec::right_mul(j_mat()).then_dagger(),
                g: MatrixFunctionSpec::left_mul(p_mat().dagger()),
            },
        ],
        require_zero_diagonal: false,
    }
}

/// Re-export of the graph-side density map for pipelines that start from a
/// parsed graph rather than a raw product matrix.
pub fn density_of_graph(
    g: &WeightedDigraph,
    flavor: MatrixFlavor,
) -> Result<DensityMatrix, StateError> {
    density_from_graph(g, flavor)
}
