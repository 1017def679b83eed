//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test -p charkit-cli --test acceptance -- --nocapture`.

use std::process::Command;
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use charkit::cyclotomic;
use charkit::families;
use charkit::group::{Group, DEFAULT_ORDER_CAP};
use charkit::lab::{Lab, TheoremSet};
use charkit::orbit::{orbit_count, VectorAction};
use charkit::report::{run_verify, VerifyReport};
use charkit::CharacterTable;

mod float_oracle;

fn corpus() -> &'static Vec<Arc<Group>> {
    static CORPUS: OnceLock<Vec<Arc<Group>>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        families::builtin_corpus()
            .iter()
            .map(|e| e.build(DEFAULT_ORDER_CAP).expect("corpus builds"))
            .collect()
    })
}

fn report() -> &'static VerifyReport {
    static REPORT: OnceLock<VerifyReport> = OnceLock::new();
    REPORT.get_or_init(|| run_verify(corpus(), TheoremSet::all()).expect("corpus verification runs"))
}

fn criterion(name: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("ACCEPTANCE {name}: PASS"),
        Err(msg) => {
            println!("ACCEPTANCE {name}: FAIL — {msg}");
            panic!("acceptance criterion {name} failed: {msg}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

/// Exact cyclotomic value of Σ_c |C_c|·χᵢ(c)·conj(χⱼ(c)) minus δᵢⱼ·|G|;
/// row orthogonality holds iff this is the zero value.
fn row_orthogonality_defect(t: &CharacterTable, i: usize, j: usize) -> Vec<i64> {
    let g = t.group();
    let e = g.exponent();
    let mut acc = vec![0i64; e];
    for (c, cls) in g.classes().iter().enumerate() {
        let prod = cyclotomic::convolve(
            t.character(i).multiplicities(c),
            &cyclotomic::reflect(t.character(j).multiplicities(c)),
        );
        for (k, v) in prod.iter().enumerate() {
            acc[k] += cls.size() as i64 * v;
        }
    }
    if i == j {
        acc[0] -= g.order() as i64;
    }
    acc
}

/// Exact cyclotomic value of Σ_χ χ(c)·conj(χ(d)) minus δ_cd·|G|/|C_c|.
fn column_orthogonality_defect(t: &CharacterTable, c: usize, d: usize) -> Vec<i64> {
    let g = t.group();
    let e = g.exponent();
    let mut acc = vec![0i64; e];
    for chi in t.irreducibles() {
        let prod = cyclotomic::convolve(
            chi.multiplicities(c),
            &cyclotomic::reflect(chi.multiplicities(d)),
        );
        for (k, v) in prod.iter().enumerate() {
            acc[k] += v;
        }
    }
    if c == d {
        acc[0] -= (g.order() / g.classes()[c].size()) as i64;
    }
    acc
}

#[test]
fn criterion_01_table_correctness() {
    criterion("1 table-correctness", || {
        let started = Instant::now();
        for group in corpus() {
            let t = CharacterTable::build(group).map_err(|e| e.to_string())?;
            let k = group.class_count();
            ensure!(t.len() == k, "{}: row count != class count", group.name());
            let sum_sq: i64 = t.irreducibles().iter().map(|f| f.degree() * f.degree()).sum();
            ensure!(
                sum_sq == group.order() as i64,
                "{}: sum of squared degrees is {sum_sq}, order {}",
                group.name(),
                group.order()
            );
            ensure!(
                t.irreducibles().iter().all(|f| f.lift_consistent()),
                "{}: a multiplicity vector does not reproduce its modular image",
                group.name()
            );
            for i in 0..k {
                for j in 0..k {
                    ensure!(
                        cyclotomic::is_zero_value(&row_orthogonality_defect(&t, i, j)),
                        "{}: exact row orthogonality fails at ({i}, {j})",
                        group.name()
                    );
                    ensure!(
                        cyclotomic::is_zero_value(&column_orthogonality_defect(&t, i, j)),
                        "{}: exact column orthogonality fails at ({i}, {j})",
                        group.name()
                    );
                }
            }
            if group.order() <= 48 {
                float_oracle::check_table_against_oracle(group, &t, 1e-6)?;
            }
        }
        let elapsed = started.elapsed();
        ensure!(
            elapsed.as_secs() < 120,
            "full corpus table pass took {elapsed:?}, over the 2 minute budget"
        );
        Ok(())
    });
}

#[test]
fn criterion_02_extraspecial_example_regression() {
    criterion("2 extraspecial-example", || {
        for (name, p) in [
            ("extraspecial-27", 3usize),
            ("extraspecial-27-exp9", 3),
            ("extraspecial-125", 5),
        ] {
            let group = families::group_from_name(name, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
            let lab = Lab::new(group.clone()).map_err(|e| e.to_string())?;
            let chi = lab
                .table()
                .irreducibles()
                .iter()
                .position(|f| f.degree() == p as i64)
                .ok_or_else(|| format!("{name}: no degree-{p} character"))?;
            let psi = lab.table().conjugate_index(chi);
            ensure!(
                lab.table().character(chi).degree() == p as i64
                    && lab.table().character(psi).degree() == p as i64,
                "{name}: χ and ψ must have degree {p}"
            );

            // Ker(χψ) equals the center (computed by brute commutation)
            let pair = lab.pair(chi, psi).map_err(|e| e.to_string())?;
            let center: Vec<usize> = (0..group.order())
                .filter(|&z| (0..group.order()).all(|x| group.mul(z, x) == group.mul(x, z)))
                .collect();
            let kernel: Vec<usize> = pair.kernel.members().iter().collect();
            ensure!(kernel == center, "{name}: Ker(χψ) is not the center");
            ensure!(pair.kernel.order() == p, "{name}: center must have order {p}");

            // η = p², every constituent linear, dl(Ker α / Ker χψ) = 1
            ensure!(
                pair.decomposition.eta == p * p,
                "{name}: η = {}, expected {}",
                pair.decomposition.eta,
                p * p
            );
            for &(alpha, _) in &pair.decomposition.constituents {
                ensure!(
                    lab.table().character(alpha).is_linear(),
                    "{name}: constituent {alpha} is not linear"
                );
            }
            let records = lab
                .check_all(chi, psi, TheoremSet::none())
                .map_err(|e| e.to_string())?;
            for r in &records {
                ensure!(
                    r.dl == 1,
                    "{name}: dl(Ker α/Ker χψ) = {} for α = {}, expected 1",
                    r.dl,
                    r.alpha
                );
                ensure!(!r.coprime_degrees, "{name}: (χ(1), ψ(1)) = {p}, not coprime");
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_theorem_b_coprime_degrees() {
    criterion("3 theorem-B", || {
        let rep = report();
        let coprime: Vec<_> = rep.records.iter().filter(|r| r.coprime_degrees).collect();
        ensure!(!coprime.is_empty(), "no coprime-degree pairs in the corpus");
        for r in &coprime {
            ensure!(
                r.predicates.theorem_b == Some(true),
                "dl = {} > 1 for {} (χ={}, ψ={}, α={})",
                r.dl,
                r.group,
                r.chi,
                r.psi,
                r.alpha
            );
            ensure!(
                r.predicates.theorem_b_commutator == Some(true),
                "[K,K] ⊄ Ker(χψ) for {} (χ={}, ψ={}, α={})",
                r.group,
                r.chi,
                r.psi,
                r.alpha
            );
        }
        // a pair with nontrivial coprime degrees must be exercised
        ensure!(
            coprime.iter().any(|r| !r.has_linear_constituent || r.eta > 1),
            "coprime sweep looks degenerate"
        );
        // the CLI run with --theorems B must exit 0
        let out = Command::new(env!("CARGO_BIN_EXE_charkit"))
            .args(["verify", "--corpus", "builtin", "--max-order", "100", "--theorems", "B"])
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(
            out.status.code() == Some(0),
            "verify --theorems B exited with {:?}",
            out.status.code()
        );
        Ok(())
    });
}

#[test]
fn criterion_04_supersolvable_bound() {
    criterion("4 supersolvable-2eta-minus-1", || {
        let rep = report();
        let applicable: Vec<_> = rep.records.iter().filter(|r| r.supersolvable).collect();
        ensure!(!applicable.is_empty(), "no supersolvable records");
        for r in applicable {
            ensure!(
                r.predicates.supersolvable_bound == Some(true),
                "dl = {} > 2η − 1 = {} for {} (χ={}, ψ={}, α={})",
                r.dl,
                2 * r.eta - 1,
                r.group,
                r.chi,
                r.psi,
                r.alpha
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_05_common_constituent_always_exists() {
    criterion("5 common-constituent", || {
        // the full run with chains enabled builds the common constituent for
        // every (G, χ, ψ, α); any failure would have aborted run_verify
        let rep = report();
        ensure!(
            rep.records.iter().all(|r| r.predicates.chain_bounds.is_some()),
            "some record is missing its chain, so its common constituent was never built"
        );
        // direct spot sweep on two groups with nonlinear characters
        for name in ["s4", "extraspecial-27"] {
            let group = families::group_from_name(name, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
            let lab = Lab::new(group).map_err(|e| e.to_string())?;
            let k = lab.table().len();
            for chi in 0..k {
                for psi in 0..k {
                    let pair = lab.pair(chi, psi).map_err(|e| e.to_string())?;
                    for &(alpha, _) in &pair.decomposition.constituents {
                        let (ctx, theta) = lab
                            .common_constituent(chi, psi, alpha)
                            .map_err(|e| format!("{name} (χ={chi}, ψ={psi}, α={alpha}): {e}"))?;
                        // θ really lies under both χ and ψ̄ on K
                        let chi_k = lab
                            .table()
                            .restrict_to_group(lab.table().character(chi), &ctx.group)
                            .map_err(|e| e.to_string())?;
                        let psi_bar_k = lab
                            .table()
                            .restrict_to_group(&lab.table().character(psi).conjugate(), &ctx.group)
                            .map_err(|e| e.to_string())?;
                        let theta_f = ctx.table.character(theta);
                        ensure!(
                            chi_k.inner_product(theta_f).map_err(|e| e.to_string())? > 0
                                && psi_bar_k.inner_product(theta_f).map_err(|e| e.to_string())? > 0,
                            "{name}: constituent not under both restrictions"
                        );
                    }
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_chain_properties() {
    criterion("6 chain-properties", || {
        let rep = report();
        for r in &rep.records {
            ensure!(
                r.predicates.chain_bounds == Some(true),
                "chain bounds fail for {} (χ={}, ψ={}, α={})",
                r.group,
                r.chi,
                r.psi,
                r.alpha
            );
            ensure!(
                r.predicates.s_delta_nonempty == Some(true),
                "an S_Δ set along a chain is empty for {} (χ={}, ψ={}, α={})",
                r.group,
                r.chi,
                r.psi,
                r.alpha
            );
        }
        // a chain with r ≥ 1 must occur (the degree-4 character of d4xd4)
        let group = families::group_from_name("d4xd4", DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
        let lab = Lab::new(group).map_err(|e| e.to_string())?;
        let chi = lab
            .table()
            .irreducibles()
            .iter()
            .position(|f| f.degree() == 4)
            .unwrap();
        let psi = lab.table().conjugate_index(chi);
        let chain = lab.build_chain(chi, psi, 0).map_err(|e| e.to_string())?;
        ensure!(chain.r() >= 1, "expected a descending chain on d4xd4");
        let pair = lab.pair(chi, psi).map_err(|e| e.to_string())?;
        let eval = lab.evaluate_chain(&chain, &pair, 0);
        ensure!(eval.r < eval.eta, "r < η fails on the witness chain");
        ensure!(eval.s_delta_nonempty, "S_Δ empty on the witness chain");
        ensure!(eval.s_delta_disjoint, "S_Δ sets overlap on the witness chain");
        ensure!(eval.alpha_excluded, "α inside an S_Δ set on the witness chain");
        ensure!(eval.tail_abelian, "chain tail not abelian over Ker(χψ)");
        Ok(())
    });
}

#[test]
fn criterion_07_linear_constituent_suite() {
    criterion("7 linear-constituent-suite", || {
        let mut nontrivial_cases = 0usize;
        for group in corpus() {
            let lab = Lab::new(group.clone()).map_err(|e| e.to_string())?;
            let k = lab.table().len();
            for chi in 0..k {
                for psi in 0..k {
                    let outcome = lab.section4(chi, psi).map_err(|e| e.to_string())?;
                    if outcome.skipped.is_some() {
                        continue;
                    }
                    let tag = format!("{} (χ={chi}, ψ={psi})", group.name());
                    ensure!(
                        outcome.psi_is_alpha1_conj_chi == Some(true),
                        "ψ ≠ α₁χ̄ for {tag}"
                    );
                    ensure!(
                        outcome.multiset_matches == Some(true),
                        "multiplicity multisets of χψ and χχ̄ differ for {tag}"
                    );
                    ensure!(outcome.a1_is_one == Some(true), "a₁ ≠ 1 for {tag}");
                    if lab.table().character(chi).degree() > 1 {
                        nontrivial_cases += 1;
                        ensure!(
                            outcome.another_multiplicity_one == Some(true),
                            "no second multiplicity-1 constituent for {tag}"
                        );
                        ensure!(
                            outcome.distinct_prime_bound == Some(true),
                            "distinct prime bound fails for {tag}"
                        );
                        if lab.classification().supersolvable {
                            ensure!(
                                outcome.prime_count_bound == Some(true),
                                "prime-with-multiplicity bound fails for {tag}"
                            );
                        }
                    }
                }
            }
        }
        ensure!(nontrivial_cases > 0, "no χ(1) > 1 cases with a linear constituent");
        Ok(())
    });
}

#[test]
fn criterion_08_centralizer_sections_abelian() {
    criterion("8 centralizer-sections", || {
        let rep = report();
        for r in &rep.records {
            ensure!(
                r.predicates.centralizer_sections == Some(true),
                "a centralizer section is nonabelian for {} (χ={}, ψ={}, α={})",
                r.group,
                r.chi,
                r.psi,
                r.alpha
            );
        }
        // non-vacuous witness: triples with abelian sections exist on d4xd4
        let group = families::group_from_name("d4xd4", DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
        let lab = Lab::new(group).map_err(|e| e.to_string())?;
        let chi = lab
            .table()
            .irreducibles()
            .iter()
            .position(|f| f.degree() == 4)
            .unwrap();
        let psi = lab.table().conjugate_index(chi);
        let chain = lab.build_chain(chi, psi, 0).map_err(|e| e.to_string())?;
        ensure!(!chain.triples.is_empty(), "witness chain has no triples");
        let mut sections = 0usize;
        for triple in &chain.triples {
            for l in lab.abelian_sections_over(triple) {
                sections += 1;
                ensure!(
                    lab.centralizer_section_abelian(triple, l),
                    "centralizer section fails on the d4xd4 witness"
                );
            }
        }
        ensure!(sections > 0, "no abelian sections over the witness triples");
        Ok(())
    });
}

#[test]
fn criterion_09_orbit_counting() {
    criterion("9 orbit-counting", || {
        // trivial group on GF(2)²: every nonzero vector alone
        let trivial = VectorAction { q: 2, dim: 2, generators: vec![] };
        let s = orbit_count(&trivial, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
        ensure!(s.m == 3, "trivial action: m = {}, expected 3", s.m);

        // all of GL(2,2) is transitive on the three nonzero vectors
        let gl22 = VectorAction {
            q: 2,
            dim: 2,
            generators: vec![vec![vec![1, 1], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]],
        };
        let s = orbit_count(&gl22, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
        ensure!(s.m == 1, "GL(2,2): m = {}, expected 1", s.m);
        ensure!(s.group_order == 6, "GL(2,2): order = {}", s.group_order);

        // its cyclic subgroup of order 3 is still transitive, with dl = 1
        let c3 = VectorAction {
            q: 2,
            dim: 2,
            generators: vec![vec![vec![0, 1], vec![1, 1]]],
        };
        let s = orbit_count(&c3, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
        ensure!(s.m == 1 && s.dl == 1, "C₃ on GF(2)²: m = {}, dl = {}", s.m, s.dl);

        // orbit sizes always partition the nonzero vectors and divide |G|
        for action in [
            trivial,
            gl22,
            c3,
            VectorAction {
                q: 3,
                dim: 2,
                generators: vec![vec![vec![0, 2], vec![1, 0]]],
            },
            VectorAction {
                q: 5,
                dim: 1,
                generators: vec![vec![vec![2]]],
            },
        ] {
            let s = orbit_count(&action, DEFAULT_ORDER_CAP).map_err(|e| e.to_string())?;
            let total: usize = s.orbit_sizes.iter().sum();
            let points = (action.q as usize).pow(action.dim as u32) - 1;
            ensure!(total == points, "orbit sizes sum to {total}, expected {points}");
            ensure!(
                s.orbit_sizes.iter().all(|&o| s.group_order % o == 0),
                "an orbit size fails to divide the group order"
            );
        }
        Ok(())
    });
}

#[test]
fn criterion_10_report_determinism() {
    criterion("10 determinism", || {
        let dir = std::env::temp_dir();
        let out1 = dir.join("charkit-acceptance-run1.jsonl");
        let out2 = dir.join("charkit-acceptance-run2.jsonl");
        for out in [&out1, &out2] {
            let status = Command::new(env!("CARGO_BIN_EXE_charkit"))
                .args(["verify", "--corpus", "builtin"])
                .arg("--out")
                .arg(out)
                .status()
                .map_err(|e| e.to_string())?;
            ensure!(status.code() == Some(0), "verify exited with {:?}", status.code());
        }
        let a = std::fs::read(&out1).map_err(|e| e.to_string())?;
        let b = std::fs::read(&out2).map_err(|e| e.to_string())?;
        ensure!(!a.is_empty(), "empty report");
        ensure!(a == b, "consecutive verify runs differ");
        Ok(())
    });
}

/// The Theorem-B coprimality flag must match an independent gcd.
#[test]
fn coprime_flags_are_consistent() {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let rep = report();
    for group in corpus().iter().take(3) {
        let lab = Lab::new(group.clone()).unwrap();
        for r in rep.records.iter().filter(|r| r.group == group.name()) {
            let a = lab.table().character(r.chi).degree() as u64;
            let b = lab.table().character(r.psi).degree() as u64;
            assert_eq!(r.coprime_degrees, gcd(a, b) == 1);
        }
    }
}
