use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use invforge::classical::theorem41_generators;
use invforge::groups::FormKind;
use invforge::invariants::{dickson_c, dickson_d, frobenius_column, SteinbergFamily};
use invforge::mpoly::{PolyMatrix, VarGrid};
use invforge::report::{Method, Verdict, VerdictReport};
use invforge::suite::{run_claim, GroupName, SuiteError, SuiteParams};

use crate::config::Task;

/// Sizes timed by the bench task.
pub const BENCH_SIZES: std::ops::RangeInclusive<usize> = 2..=4;

#[derive(Debug, Default)]
pub struct Outputs {
    pub construct: Option<String>,
    pub reports: Vec<VerdictReport>,
    pub bench: Option<BenchReport>,
}

#[derive(Debug, Serialize)]
pub struct BenchEntry {
    pub family: String,
    pub p: u64,
    pub e: u32,
    pub n: usize,
    pub terms: usize,
    pub cofactor_ms: f64,
    pub bareiss_ms: f64,
    pub agree: bool,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub entries: Vec<BenchEntry>,
    pub ell0_terms: usize,
}

fn error_report(claim: &str, params: &SuiteParams, err: &SuiteError) -> VerdictReport {
    let mut rep = VerdictReport::new(claim, Method::Exact)
        .param("p", params.p)
        .param("e", params.e)
        .param("m", params.m as u64)
        .param("n", params.n as u64);
    rep.fail(format!("error: {err}"));
    rep
}

fn claim_report(claim: &str, params: &SuiteParams) -> VerdictReport {
    run_claim(claim, params).unwrap_or_else(|e| error_report(claim, params, &e))
}

pub fn run_tasks(tasks: &[Task], params: &SuiteParams) -> Outputs {
    let mut out = Outputs::default();
    for task in tasks {
        match task {
            Task::Construct => match construct(params) {
                Ok(text) => out.construct = Some(text),
                Err(e) => out.reports.push(error_report("construct", params, &e)),
            },
            Task::Verify(claim) => out.reports.push(claim_report(claim, params)),
            Task::Stabilizer => out.reports.push(claim_report("stabilizer", params)),
            Task::Jacobian => out.reports.push(claim_report("jacobian", params)),
            Task::Bench => match bench(params) {
                Ok((report, verdict)) => {
                    out.bench = Some(report);
                    out.reports.push(verdict);
                }
                Err(e) => out.reports.push(error_report("bench", params, &e)),
            },
        }
    }
    out
}

/// Canonical text of the constructed invariants, one `name = polynomial` per line.
pub fn construct(params: &SuiteParams) -> Result<String, SuiteError> {
    let spec = params.spec()?;
    let mut lines = Vec::new();
    match params.group {
        GroupName::GL | GroupName::SL => {
            let n = params.n;
            let grid = VarGrid::new(1, n)?;
            for i in 0..=n {
                lines.push(format!("d[{n},{i}] = {}", dickson_d(&spec, grid, i, 1)?));
            }
            for s in 0..n {
                lines.push(format!("c[{n},{s}] = {}", dickson_c(&spec, grid, s, 1)?));
            }
            let fam = SteinbergFamily::build(&spec, params.m, n)?;
            lines.push(format!("l_0 = {}", fam.ell0()));
            for i in 1..=params.m {
                for j in 1..=n {
                    lines.push(format!("l[{i},{j}] = {}", fam.lij(i, j)?));
                }
            }
        }
        _ => {
            let form = params.form_matrix()?;
            let symbol = match form.kind() {
                FormKind::Alternate => "Q",
                FormKind::Hermitian => "H",
                FormKind::Symmetric => "P",
            };
            for ((i, k), g) in theorem41_generators(&form, params.m)?.generators {
                lines.push(format!("{symbol}[{i},1]^({k}) = {g}"));
            }
        }
    }
    let mut text = lines.join("\n");
    text.push('\n');
    Ok(text)
}

fn time_both(m: &PolyMatrix) -> Result<(f64, f64, bool, usize), SuiteError> {
    let start = Instant::now();
    let a = m.det_cofactor()?;
    let cofactor = start.elapsed().as_secs_f64() * 1e3;
    let start = Instant::now();
    let b = m.det_bareiss()?;
    let bareiss = start.elapsed().as_secs_f64() * 1e3;
    Ok((cofactor, bareiss, a == b, a.num_terms()))
}

/// Times cofactor and Bareiss determinants on Dickson and `L_ij^{(k)}` matrices.
/// The report carries only the agreement verdict; timings go to `bench.json`.
pub fn bench(params: &SuiteParams) -> Result<(BenchReport, VerdictReport), SuiteError> {
    let spec = params.spec()?;
    let mut entries = Vec::new();
    let mut verdict = VerdictReport::new("bench", Method::Exact).param("p", params.p).param("e", params.e);
    for n in BENCH_SIZES {
        let grid = VarGrid::new(1, n)?;
        let cols = (1..=n as u32).map(|t| frobenius_column(&spec, grid, 1, t)).collect::<Result<Vec<_>, _>>()?;
        let dickson = PolyMatrix::from_columns(cols)?;
        let fam = SteinbergFamily::build(&spec, n, n)?;
        let mut lcols = fam.l0()?.transpose();
        let replaced = frobenius_column(&spec, fam.grid(), 1, 1)?;
        for (r, v) in replaced.into_iter().enumerate() {
            lcols.set(0, r, v);
        }
        for (family, m) in [("dickson", dickson), ("l_ij", lcols.transpose())] {
            let (cofactor_ms, bareiss_ms, agree, terms) = time_both(&m)?;
            if !agree {
                verdict.fail(format!("{family} at n={n}"));
            }
            entries.push(BenchEntry { family: family.into(), p: params.p, e: params.e, n, terms, cofactor_ms, bareiss_ms, agree });
        }
    }
    let ell0_terms = SteinbergFamily::build(&spec, params.m, params.n)?.ell0().num_terms();
    verdict.note(format!("l_0 at m={}, n={} has {ell0_terms} terms", params.m, params.n));
    Ok((BenchReport { entries, ell0_terms }, verdict))
}

/// `0` all pass, `1` any fail, `3` inconclusive without failures.
pub fn exit_code(reports: &[VerdictReport]) -> i32 {
    match reports.iter().map(|r| r.verdict).max() {
        Some(Verdict::Fail) => 1,
        Some(Verdict::Inconclusive) => 3,
        _ => 0,
    }
}

pub fn write_outputs(dir: &Path, out: &Outputs) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    if let Some(text) = &out.construct {
        fs::write(dir.join("construct.txt"), text)?;
    }
    if !out.reports.is_empty() {
        let mut text = String::new();
        for r in &out.reports {
            text.push_str(&r.to_json_line());
            text.push('\n');
        }
        fs::write(dir.join("reports.jsonl"), text)?;
    }
    if let Some(b) = &out.bench {
        fs::write(dir.join("bench.json"), serde_json::to_string_pretty(b).expect("bench serializes") + "\n")?;
    }
    Ok(())
}
