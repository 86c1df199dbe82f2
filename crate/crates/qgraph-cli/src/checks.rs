//! Property suites behind `qgraph check`: structural theorems run either on
//! one parsed graph or on a stream of seeded random graphs, with a
//! counterexample dump on the first failure of each property.

use qgraph::dsl::serialize_graph;
use qgraph::entanglers::separability_experiment;
use qgraph::fuzz::random_graph;
use qgraph::laplacians::{
    incidence, kernel_multiplicity, laplacian, vertex_weighted_kernel_vector,
    zero_eig_path_predicate, MatrixFlavor,
};
use qgraph::spectra::{hermitian_eigen, is_psd, kron, numerical_rank, Complex, ComplexMatrix};
use qgraph::states::{
    classify, density_from_graph, ppt_separable_2q, spectral_mixture, DensityMatrix, StateError,
    StateKind,
};
use qgraph::{GraphKind, WeightedDigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

pub const FACTORIZATION_TOL: f64 = 1e-11;
pub const PSD_TOL: f64 = 1e-9;

#[derive(Serialize, Clone)]
pub struct PropertyResult {
    pub name: String,
    pub pass: bool,
    pub cases: usize,
    pub counterexample: Option<Value>,
}

pub struct PropertySet {
    results: Vec<PropertyResult>,
}

impl PropertySet {
    fn new() -> Self {
        Self {
            results: Vec::new(),
        }
    }

    fn property(&mut self, name: &str) -> usize {
        self.results.push(PropertyResult {
            name: name.to_string(),
            pass: true,
            cases: 0,
            counterexample: None,
        });
        self.results.len() - 1
    }

    fn record(&mut self, idx: usize, ok: bool, dump: impl FnOnce() -> Value) {
        let slot = &mut self.results[idx];
        slot.cases += 1;
        if !ok && slot.pass {
            slot.pass = false;
            slot.counterexample = Some(dump());
        }
    }

    pub fn results(self) -> Vec<PropertyResult> {
        self.results
    }
}

fn graph_dump(g: &WeightedDigraph, detail: String) -> Value {
    serde_json::json!({ "graph": serialize_graph(g), "detail": detail })
}

/// Factorization, PSD, spectral and kernel-count properties of one graph.
pub fn laplacian_suite(graphs: &[WeightedDigraph]) -> Vec<PropertyResult> {
    let mut set = PropertySet::new();
    let p_fact = set.property("incidence_factorization");
    let p_psd = set.property("laplacians_psd");
    let p_trace = set.property("eigenvalue_sum_matches_trace");
    let p_kernel = set.property("kernel_multiplicity_matches_components");
    let p_vw = set.property("vertex_weighted_kernel_vector");

    for g in graphs {
        for flavor in [MatrixFlavor::Combinatorial, MatrixFlavor::Signless] {
            let k = laplacian(g, flavor);
            let m = incidence(g, flavor);
            let err = m.mul(&m.dagger()).max_abs_diff(&k);
            set.record(p_fact, err <= FACTORIZATION_TOL, || {
                graph_dump(g, format!("{flavor:?}: ||K - M M'||_max = {err:.3e}"))
            });
            let psd = is_psd(&k, PSD_TOL).unwrap_or(false);
            set.record(p_psd, psd, || graph_dump(g, format!("{flavor:?} not PSD")));

            match hermitian_eigen(&k, 1e-10) {
                Ok(eig) => {
                    let sum: f64 = eig.values.iter().sum();
                    let drift = (sum - k.trace().re).abs();
                    let ok = drift <= 1e-9 * (1.0 + k.frobenius_norm());
                    set.record(p_trace, ok, || {
                        graph_dump(g, format!("{flavor:?}: trace drift {drift:.3e}"))
                    });

                    let mult = kernel_multiplicity(&eig.values);
                    if let Some(expected) = expected_kernel_multiplicity(g, flavor) {
                        set.record(p_kernel, mult == expected, || {
                            graph_dump(
                                g,
                                format!("{flavor:?}: multiplicity {mult}, qualifying components {expected}"),
                            )
                        });
                    }
                }
                Err(e) => {
                    set.record(p_trace, false, || {
                        graph_dump(g, format!("eigen failed: {e}"))
                    });
                }
            }
        }
        if g.kind() == GraphKind::VertexWeighted {
            let v = vertex_weighted_kernel_vector(g).expect("kind checked");
            let l = laplacian(g, MatrixFlavor::Combinatorial);
            let lv = l.mul_vec(&v);
            let norm: f64 = lv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            set.record(p_vw, norm <= 1e-10 * (1.0 + l.frobenius_norm()), || {
                graph_dump(g, format!("kernel residual {norm:.3e}"))
            });
        }
    }
    set.results()
}

/// Expected multiplicity of the zero eigenvalue, when a structural rule
/// applies (skipped for path predicates beyond their size limit).
fn expected_kernel_multiplicity(g: &WeightedDigraph, flavor: MatrixFlavor) -> Option<usize> {
    let comps = g.underlying_components();
    match g.kind() {
        GraphKind::VertexWeighted => Some(
            comps
                .iter()
                .filter(|comp| {
                    let sub = g.induced_subgraph(comp).expect("component vertices");
                    match flavor {
                        MatrixFlavor::Combinatorial => true,
                        MatrixFlavor::Signless => !sub.has_odd_cycle(),
                    }
                })
                .count(),
        ),
        _ => {
            if g.vertex_count() > 10 {
                return None;
            }
            let mut count = 0;
            for comp in &comps {
                let sub = g.induced_subgraph(comp).expect("component vertices");
                match zero_eig_path_predicate(&sub, flavor) {
                    Ok(true) => count += 1,
                    Ok(false) => {}
                    Err(_) => return None,
                }
            }
            Some(count)
        }
    }
}

/// Density invariants and the rank-one (pure-state) characterization.
pub fn purity_suite(graphs: &[WeightedDigraph]) -> Vec<PropertyResult> {
    let mut set = PropertySet::new();
    let p_density = set.property("density_invariants");
    let p_class = set.property("pure_iff_single_edge_rule");
    let p_mix = set.property("mixture_reconstruction");
    let p_loops = set.property("looped_connected_full_rank_signless");

    for g in graphs {
        for flavor in [MatrixFlavor::Combinatorial, MatrixFlavor::Signless] {
            let rho = match density_from_graph(g, flavor) {
                Ok(rho) => rho,
                Err(StateError::DegreeZero) => continue,
                Err(e) => {
                    set.record(p_density, false, || {
                        graph_dump(g, format!("{flavor:?}: {e}"))
                    });
                    continue;
                }
            };
            let tr_ok = (rho.matrix().trace().re - 1.0).abs() <= 1e-12;
            set.record(p_density, tr_ok, || {
                graph_dump(g, format!("{flavor:?}: trace off"))
            });

            let one_edge = g.edges().len() == 1;
            let expected_pure = match flavor {
                MatrixFlavor::Combinatorial => one_edge,
                MatrixFlavor::Signless => {
                    (one_edge && g.loops().is_empty())
                        || (g.edges().is_empty() && g.loops().len() == 1)
                }
            };
            let class = classify(&rho);
            set.record(
                p_class,
                (class.kind == StateKind::Pure) == expected_pure,
                || {
                    graph_dump(
                        g,
                        format!(
                            "{flavor:?}: purity {} but expected pure = {expected_pure}",
                            class.purity
                        ),
                    )
                },
            );

            match spectral_mixture(&rho) {
                Ok(mix) => {
                    let n = rho.dim();
                    let mut rebuilt = ComplexMatrix::zeros(n, n);
                    for (p, v) in &mix.terms {
                        for i in 0..n {
                            for j in 0..n {
                                rebuilt[(i, j)] += v[i] * v[j].conj() * *p;
                            }
                        }
                    }
                    let err = rebuilt.max_abs_diff(rho.matrix());
                    set.record(p_mix, err <= 1e-9, || {
                        graph_dump(g, format!("{flavor:?}: mixture rebuild error {err:.3e}"))
                    });
                }
                Err(e) => set.record(p_mix, false, || graph_dump(g, format!("{e}"))),
            }

            if flavor == MatrixFlavor::Signless && !g.loops().is_empty() && g.is_connected() {
                let rank = numerical_rank(rho.matrix(), 1e-8).unwrap_or(0);
                set.record(p_loops, rank == g.vertex_count(), || {
                    graph_dump(g, format!("signless rank {rank} < n"))
                });
            }
        }
    }
    set.results()
}

/// Separability properties: the randomized product experiment plus PPT on
/// explicit product states; graphs on four vertices get a PPT consistency
/// check of their own density matrices.
pub fn separability_suite(
    graphs: &[WeightedDigraph],
    trials: usize,
    seed: u64,
) -> Vec<PropertyResult> {
    let mut set = PropertySet::new();
    let p_exp = set.property("two_term_products_stay_ppt");
    let p_prod = set.property("product_states_ppt");
    let p_file = set.property("four_vertex_ppt_consistency");

    match separability_experiment(trials.max(1), seed) {
        Ok(report) => {
            let ok = report.npt_count == 0 && report.degenerate_npt_count == 0;
            set.record(p_exp, ok, || {
                serde_json::json!({
                    "detail": format!("{} NPT of {} trials", report.npt_count, report.trials),
                    "min_pt_eigenvalue": report.min_pt_eigenvalue,
                })
            });
        }
        Err(e) => set.record(
            p_exp,
            false,
            || serde_json::json!({ "detail": format!("{e}") }),
        ),
    }

    // Random product states are always PPT.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..trials.clamp(1, 200) {
        let qubit = |rng: &mut ChaCha8Rng| {
            let mut b = ComplexMatrix::zeros(2, 2);
            for i in 0..2 {
                for j in 0..2 {
                    b[(i, j)] = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            let gram = b.mul(&b.dagger());
            gram.scale(Complex::new(1.0 / gram.trace().re, 0.0))
        };
        let (a, b) = (qubit(&mut rng), qubit(&mut rng));
        let rho = DensityMatrix::from_matrix(kron(&a, &b)).expect("product of states is a state");
        let ok = ppt_separable_2q(&rho).unwrap_or(false);
        set.record(
            p_prod,
            ok,
            || serde_json::json!({ "detail": "product state judged NPT" }),
        );
    }

    for g in graphs {
        if g.vertex_count() != 4 {
            continue;
        }
        for flavor in [MatrixFlavor::Combinatorial, MatrixFlavor::Signless] {
            if let Ok(rho) = density_from_graph(g, flavor) {
                // The verdict must agree with a direct PSD check of the
                // partial transpose.
                let pt = qgraph::spectra::partial_transpose_b(rho.matrix()).expect("4x4");
                let direct = is_psd(&pt, PSD_TOL).unwrap_or(false);
                let verdict = ppt_separable_2q(&rho).unwrap_or(!direct);
                set.record(p_file, verdict == direct, || {
                    graph_dump(
                        g,
                        format!("{flavor:?}: verdict {verdict} vs direct {direct}"),
                    )
                });
            }
        }
    }
    set.results()
}

/// Compare a graph's spectra against golden eigenvalues.
pub fn golden_suite(
    g: &WeightedDigraph,
    golden_l: Option<&[f64]>,
    golden_q: Option<&[f64]>,
    tolerance: f64,
) -> Vec<PropertyResult> {
    let mut set = PropertySet::new();
    let p_l = set.property("golden_spectrum_combinatorial");
    let p_q = set.property("golden_spectrum_signless");
    let mut check = |idx: usize, flavor: MatrixFlavor, expect: Option<&[f64]>| {
        let Some(expect) = expect else { return };
        let eig = hermitian_eigen(&laplacian(g, flavor), 1e-10).expect("laplacian is Hermitian");
        let ok = eig.values.len() == expect.len()
            && eig
                .values
                .iter()
                .zip(expect.iter())
                .all(|(got, want)| (got - want).abs() <= tolerance);
        set.record(idx, ok, || {
            graph_dump(
                g,
                format!(
                    "{flavor:?}: spectrum {:?} vs golden {:?} (tol {tolerance})",
                    eig.values, expect
                ),
            )
        });
    };
    check(p_l, MatrixFlavor::Combinatorial, golden_l);
    check(p_q, MatrixFlavor::Signless, golden_q);
    set.results().into_iter().filter(|r| r.cases > 0).collect()
}

/// Random graphs for the fuzz mode: kinds cycle per trial, sizes cycle up to
/// the bound.
pub fn fuzz_graphs(max_n: usize, trials: usize, seed: u64) -> Vec<WeightedDigraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|t| {
            let kind = match t % 3 {
                0 => GraphKind::EdgeUnit,
                1 => GraphKind::VertexWeighted,
                _ => GraphKind::EdgeLoop,
            };
            random_graph(kind, 1 + t % max_n.max(1), &mut rng)
        })
        .collect()
}
