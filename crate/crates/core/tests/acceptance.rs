//! Acceptance criteria 1-11, one line each. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use invforge::classical;
use invforge::gf::make_field;
use invforge::groups::{FieldMatrix, FormKind, FormMatrix, Group};
use invforge::invariants::{self, dickson_c, dickson_d, SteinbergFamily};
use invforge::mpoly::{SparsePoly, VarGrid};
use invforge::ratexpr::{RatExpr, EXACT_TERM_THRESHOLD};
use invforge::report::VerdictReport;
use invforge::suite::{run_claim, GroupName, SuiteParams};
use invforge::verify::{self, InvarianceMode};

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(30);
const LIMIT_3: Duration = Duration::from_secs(60);
const LIMIT_4: Duration = Duration::from_secs(60);
const LIMIT_5: Duration = Duration::from_secs(120);
const LIMIT_6: Duration = Duration::from_secs(300);
const LIMIT_7_EACH: Duration = Duration::from_secs(60);
const LIMIT_8: Duration = Duration::from_secs(120);
const LIMIT_9: Duration = Duration::from_secs(60);
const LIMIT_10: Duration = Duration::from_secs(10);
const LIMIT_11: Duration = Duration::from_secs(120);

const PROB_TRIALS: u32 = 20;
const SAMPLES: usize = 50;
const SEED: u64 = 20240611;

type Outcome = Result<(), String>;

fn check(rep: VerdictReport) -> Outcome {
    if rep.passed() {
        Ok(())
    } else {
        Err(format!("{} {:?}: {}", rep.claim, rep.params, rep.witness.unwrap_or_default()))
    }
}

fn ensure(ok: bool, what: impl Into<String>) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(limit: Duration, start: Instant) -> Outcome {
    let elapsed = start.elapsed();
    ensure(elapsed <= limit, format!("took {elapsed:?}, limit {limit:?}"))
}

fn family(p: u64, n: usize, m: usize) -> SteinbergFamily {
    SteinbergFamily::build(&make_field(p, 1).unwrap(), m, n).unwrap()
}

fn c1_dickson() -> Outcome {
    let start = Instant::now();
    let f2 = make_field(2, 1).unwrap();
    let g = VarGrid::new(1, 2).unwrap();
    let oracle = SparsePoly::parse(&f2, g, "x[1,1]^2 + x[1,1]*x[1,2] + x[1,2]^2").unwrap();
    ensure(dickson_c(&f2, g, 1, 1).unwrap() == oracle, "c_{2,1} over F_2")?;
    for p in [2, 3] {
        let spec = make_field(p, 1).unwrap();
        let dnn = dickson_d(&spec, g, 2, 1).unwrap();
        for s in 0..2 {
            let d = dickson_d(&spec, g, s, 1).unwrap();
            ensure(d.exact_div(&dnn).is_ok(), format!("d_2{s} / d_22 over F_{p}"))?;
        }
    }
    within(LIMIT_1, start)
}

fn c2_lemma27() -> Outcome {
    let start = Instant::now();
    for (q, n, m) in [(2, 2, 2), (3, 2, 2), (2, 3, 3)] {
        check(invariants::lemma_27(&family(q, n, m)).unwrap())?;
    }
    within(LIMIT_2, start)
}

fn c3_cramer_chain() -> Outcome {
    let start = Instant::now();
    let fam = family(2, 2, 2);
    for k in 1..=3 {
        check(invariants::cramer_21(&fam, k).unwrap())?;
        check(invariants::chain_24(&fam, k).unwrap())?;
    }
    let fam = family(3, 2, 2);
    for k in 1..=3 {
        check(invariants::chain_24_probabilistic(&fam, k, PROB_TRIALS, SEED).unwrap())?;
    }
    within(LIMIT_3, start)
}

fn c4_prop32() -> Outcome {
    let start = Instant::now();
    for q in [2, 3] {
        check(invariants::prop32_membership(&family(q, 2, 2)).unwrap())?;
    }
    within(LIMIT_4, start)
}

fn c5_invariance() -> Outcome {
    let start = Instant::now();
    let cases: [(u64, usize, Option<usize>); 3] = [(2, 2, None), (3, 2, Some(SAMPLES)), (2, 3, Some(SAMPLES))];
    for (q, n, samples) in cases {
        let spec = make_field(q, 1).unwrap();
        let gl = Group::general(&spec, n);
        let elements = match samples {
            Some(c) => gl.sample(c, SEED).unwrap(),
            None => gl.enumerate(1000).unwrap(),
        };
        ensure(samples.is_some() || elements.len() == 6, "|GL_2(F_2)| = 6")?;
        let fam = SteinbergFamily::build(&spec, n, n).unwrap();
        let gens: Vec<_> = fam.generators().unwrap().into_iter().map(|((i, j), r)| (format!("{i},{j}"), r)).collect();
        let mode = InvarianceMode::Invariant;
        check(verify::invariance_report("invariance", &gens, &elements, mode, invforge::report::Method::Exact).unwrap())?;
        let mut polys = vec![("l_0".to_string(), RatExpr::from_poly(fam.ell0().clone()))];
        for k in 0..=2 {
            for i in 1..=n {
                for j in 1..=n {
                    polys.push((format!("{i},{j},{k}"), RatExpr::from_poly(fam.lijk(i, j, k).unwrap())));
                }
            }
        }
        let mode = InvarianceMode::DetInvariant;
        check(verify::invariance_report("det_invariance", &polys, &elements, mode, invforge::report::Method::Exact).unwrap())?;
    }
    within(LIMIT_5, start)
}

fn c6_stabilizer() -> Outcome {
    let start = Instant::now();
    for (q, expected, total) in [(2, 6u64, 36u64), (3, 48, 2304)] {
        let rep = verify::stabilizer_enumeration(&family(q, 2, 2), 1_000_000, EXACT_TERM_THRESHOLD, SEED).unwrap();
        ensure(rep.params["elements"] == total, format!("{total} tuples"))?;
        ensure(rep.params["fixing"] == expected, format!("stabilizer of order {expected} at q={q}"))?;
        ensure(rep.params["diagonal"] == expected, "diagonal count")?;
        check(rep)?;
    }
    within(LIMIT_6, start)
}

fn c7_jacobian() -> Outcome {
    for (q, n, m) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)] {
        let start = Instant::now();
        let gens: Vec<RatExpr> = family(q, n, m).generators().unwrap().into_iter().map(|(_, r)| r).collect();
        ensure(gens.len() == m * n, format!("count at ({q},{n},{m})"))?;
        check(verify::jacobian_independence(&gens, SEED, 8).unwrap())?;
        within(LIMIT_7_EACH, start)?;
    }
    let f2 = make_field(2, 1).unwrap();
    let f3 = make_field(3, 1).unwrap();
    let f9 = make_field(3, 2).unwrap();
    let forms = [
        (FormMatrix::standard(FormKind::Symmetric, 2, &f3).unwrap(), 2),
        (FormMatrix::standard(FormKind::Alternate, 2, &f2).unwrap(), 2),
        (FormMatrix::standard(FormKind::Hermitian, 2, &f9).unwrap(), 1),
    ];
    for (form, m) in forms {
        let start = Instant::now();
        let fam = classical::theorem41_generators(&form, m).unwrap();
        ensure(fam.generators.len() == m * form.size(), format!("count for {:?}", form.kind()))?;
        let gens: Vec<RatExpr> = fam.generators.into_iter().map(|(_, g)| RatExpr::from_poly(g)).collect();
        check(verify::jacobian_independence(&gens, SEED, 8).unwrap())?;
        within(LIMIT_7_EACH, start)?;
    }
    Ok(())
}

fn c8_classical() -> Outcome {
    let start = Instant::now();
    let f2 = make_field(2, 1).unwrap();
    let f3 = make_field(3, 1).unwrap();
    let f9 = make_field(3, 2).unwrap();
    for rows in [[vec![1, 0], vec![0, 1]], [vec![1, 0], vec![0, 2]]] {
        let form = FormMatrix::new(FormKind::Symmetric, FieldMatrix::from_rows(&f3, &rows).unwrap()).unwrap();
        check(classical::orth_42(&form, 2).unwrap())?;
        check(classical::orth_43(&form, 2).unwrap())?;
    }
    check(classical::unit_44(&FormMatrix::standard(FormKind::Hermitian, 2, &f9).unwrap(), 2).unwrap())?;
    for size in [2, 4] {
        check(classical::sp_row(&FormMatrix::standard(FormKind::Alternate, size, &f2).unwrap(), 1).unwrap())?;
    }
    within(LIMIT_8, start)
}

fn c9_chu() -> Outcome {
    let start = Instant::now();
    let f3 = make_field(3, 1).unwrap();
    let form = FormMatrix::standard(FormKind::Symmetric, 2, &f3).unwrap();
    let rep = classical::chu_converse(&form, 1000).unwrap();
    ensure(rep.params["elements"] == 48, "all of GL_2(F_3)")?;
    ensure(rep.notes.iter().any(|n| n.starts_with("8 elements")), "fixing set has the order of O_2(F_3)")?;
    check(rep)?;
    within(LIMIT_9, start)
}

fn c10_cor25() -> Outcome {
    let start = Instant::now();
    check(invariants::cor25_n1(&family(3, 1, 3)).unwrap())?;
    within(LIMIT_10, start)
}

fn suite_lines() -> Vec<String> {
    let mut runs: Vec<(&str, SuiteParams)> = Vec::new();
    let mut prob = SuiteParams::new(3, 1, 2, 2);
    prob.trials = Some(PROB_TRIALS);
    prob.k = Some(2);
    prob.seed = SEED;
    runs.push(("chain_24", prob));
    let mut sampled = SuiteParams::new(3, 1, 2, 2);
    sampled.samples = Some(SAMPLES);
    sampled.seed = SEED;
    runs.push(("invariance", sampled));
    let mut jac = SuiteParams::new(2, 1, 2, 2);
    jac.seed = SEED;
    runs.push(("jacobian", jac));
    runs.push(("lemma_27", SuiteParams::new(2, 1, 2, 2)));
    runs.push(("stabilizer", SuiteParams::new(2, 1, 2, 2)));
    let mut sp = SuiteParams::new(2, 1, 4, 4);
    sp.group = GroupName::Sp;
    sp.samples = Some(SAMPLES);
    sp.seed = SEED;
    runs.push(("classical_invariance", sp));
    runs.into_iter().map(|(c, p)| run_claim(c, &p).unwrap().to_json_line()).collect()
}

fn c11_determinism() -> Outcome {
    let start = Instant::now();
    let first = suite_lines();
    let second = suite_lines();
    ensure(first == second, "reports differ between runs")?;
    within(LIMIT_11, start)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Dickson reproduction", c1_dickson),
        ("l_0^(q-1+n) = det(l_ij)", c2_lemma27),
        ("Cramer and chain identities", c3_cramer_chain),
        ("localizer membership equalities", c4_prop32),
        ("invariance and det-invariance", c5_invariance),
        ("Galois stabilizer enumeration", c6_stabilizer),
        ("Jacobian independence", c7_jacobian),
        ("classical determinant identities", c8_classical),
        ("orthogonal converse", c9_chu),
        ("one-dimensional generators", c10_cor25),
        ("determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS {name} ({secs:.2}s)", idx + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {why}", idx + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
