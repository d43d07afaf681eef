//! Verification engines: invariance reports, Jacobian-criterion independence,
//! stabilizer enumeration over `GL(W)^n`, and the `eta_s` membership check.

use rayon::prelude::*;

use crate::groups::{act_per_copy, act_rat, FieldMatrix, Group, GroupError};
use crate::invariants::{InvariantError, SteinbergFamily};
use crate::mpoly::{PolyMatrix, SparsePoly};
use crate::ratexpr::{equal_auto, Extension, RatError, RatExpr};
use crate::report::{Method, Verdict, VerdictReport};
use crate::rng::SplitMix64;

/// Trials for probabilistic fixing tests in the stabilizer enumeration.
pub const STABILIZER_TRIALS: u32 = 30;

/// Default number of evaluation points tried by the Jacobian check.
pub const DEFAULT_JACOBIAN_RETRIES: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{0}")]
    Unsupported(String),
    #[error("{count} generators exceed {vars} variables")]
    TooManyGenerators { count: usize, vars: usize },
    #[error("enumeration of {estimate} elements exceeds cap {cap}")]
    CapExceeded { estimate: u64, cap: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rat(#[from] RatError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

type Result<T> = std::result::Result<T, VerifyError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvarianceMode {
    /// `act(s, f) = f`.
    Invariant,
    /// `act(s, f) = det(s) f`.
    DetInvariant,
}

/// Checks every labelled generator against every element, in order; the first
/// failure is the witness.
pub fn invariance_report(
    claim: &str,
    generators: &[(String, RatExpr)],
    elements: &[FieldMatrix],
    mode: InvarianceMode,
    method: Method,
) -> Result<VerdictReport> {
    let mut rep = VerdictReport::new(claim, method)
        .param("generators", generators.len() as u64)
        .param("elements", elements.len() as u64)
        .param(
            "mode",
            match mode {
                InvarianceMode::Invariant => "invariant",
                InvarianceMode::DetInvariant => "det_invariant",
            },
        );
    let failures: Vec<Option<String>> = elements
        .par_iter()
        .map(|s| -> Result<Option<String>> {
            for (label, g) in generators {
                let image = act_rat(s, g)?;
                let expected = match mode {
                    InvarianceMode::Invariant => g.clone(),
                    InvarianceMode::DetInvariant => {
                        RatExpr::new(g.num().scale(s.det()), g.den().clone())?
                    }
                };
                if !image.equal_exact(&expected)? {
                    return Ok(Some(format!("sigma={s} moves {label}")));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    if let Some(w) = failures.into_iter().flatten().next() {
        rep.fail(w);
    }
    Ok(rep)
}

/// Rank of a row-major `rows x cols` matrix over `spec`.
fn rank(spec: &crate::gf::FieldSpec, mut a: Vec<u32>, rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else { continue };
        for k in 0..cols {
            a.swap(r * cols + k, p * cols + k);
        }
        let inv = spec.inv(a[r * cols + c]).expect("nonzero pivot");
        for i in 0..rows {
            if i != r && a[i * cols + c] != 0 {
                let f = spec.mul(a[i * cols + c], inv);
                for k in c..cols {
                    a[i * cols + k] = spec.sub(a[i * cols + k], spec.mul(f, a[r * cols + k]));
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Jacobian criterion: full rank at one extension-field point proves
/// algebraic independence; deficiency at every sampled point is inconclusive.
pub fn jacobian_independence(generators: &[RatExpr], seed: u64, retries: u32) -> Result<VerdictReport> {
    let first = generators.first().ok_or_else(|| VerifyError::Unsupported("no generators".into()))?;
    let (spec, grid) = (first.spec().clone(), first.grid());
    let nvars = grid.nvars();
    let k = generators.len();
    if k > nvars {
        return Err(VerifyError::TooManyGenerators { count: k, vars: nvars });
    }
    let mut rep = VerdictReport::new("jacobian", Method::Probabilistic)
        .param("p", spec.p())
        .param("e", spec.e())
        .param("m", grid.m() as u64)
        .param("n", grid.n() as u64)
        .param("generators", k as u64)
        .with_trials(retries)
        .with_seed(seed);
    let deg = |f: &SparsePoly| f.total_degree().unwrap_or(0);
    let bound: u64 = generators.iter().map(|g| deg(g.num()) + deg(g.den())).sum::<u64>().max(1);
    let ext = Extension::for_degree_bound(&spec, bound)?;
    let big = ext.big().clone();
    let partials: Vec<Vec<(SparsePoly, SparsePoly)>> = generators
        .iter()
        .map(|g| (0..nvars).map(|v| (g.num().derivative(v), g.den().derivative(v))).collect())
        .collect();
    let mut best = 0;
    for t in 0..retries {
        let mut rng = SplitMix64::for_trial(seed, t as u64);
        let point = ext.random_point(&mut rng, nvars);
        let dens: Vec<u32> = generators.iter().map(|g| ext.eval(g.den(), &point)).collect();
        if dens.contains(&0) {
            continue;
        }
        let mut jac = Vec::with_capacity(k * nvars);
        for (g, (row, &d)) in generators.iter().zip(partials.iter().zip(&dens)) {
            let nv = ext.eval(g.num(), &point);
            let d2inv = big.inv(big.mul(d, d)).expect("nonzero");
            for (dn, dd) in row {
                let v = big.sub(big.mul(ext.eval(dn, &point), d), big.mul(nv, ext.eval(dd, &point)));
                jac.push(big.mul(v, d2inv));
            }
        }
        let r = rank(&big, jac, k, nvars);
        best = best.max(r);
        if r == k {
            rep.note(format!("rank {k} at {}", ext.format_point(grid, &point)));
            return Ok(rep);
        }
    }
    rep.combine(Verdict::Inconclusive);
    rep.note(format!("maximal sampled rank {best} of {k}"));
    Ok(rep)
}

/// Enumerates `GL_n(F_q)^n` and checks that the tuples fixing every
/// `l_ij / l_0` are exactly the diagonal ones. Generators are compared
/// exactly when the cross-multiplied size estimate is at most
/// `term_threshold`, otherwise probabilistically.
pub fn stabilizer_enumeration(fam: &SteinbergFamily, cap: u64, term_threshold: usize, seed: u64) -> Result<VerdictReport> {
    let n = fam.n();
    if fam.m() != n {
        return Err(VerifyError::Unsupported("stabilizer enumeration needs m = n".into()));
    }
    let spec = fam.spec();
    let gl = Group::general(spec, n).enumerate(cap)?;
    let estimate = (gl.len() as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    if estimate > cap {
        return Err(VerifyError::CapExceeded { estimate, cap });
    }
    let mut rep = VerdictReport::new("stabilizer", Method::Enumeration)
        .param("p", spec.p())
        .param("e", spec.e())
        .param("n", n as u64)
        .param("elements", estimate)
        .with_seed(seed);
    let gens = fam.generators()?;
    let g = gl.len();
    // (index, fixes, diagonal, decided probabilistically as equal)
    let results: Vec<(u64, bool, bool, bool)> = (0..estimate)
        .into_par_iter()
        .map(|idx| -> Result<(u64, bool, bool, bool)> {
            let mut rest = idx as usize;
            let tuple: Vec<FieldMatrix> = (0..n)
                .map(|_| {
                    let s = gl[rest % g].clone();
                    rest /= g;
                    s
                })
                .collect();
            let diagonal = tuple.iter().all(|s| *s == tuple[0]);
            let mut prob_equal = false;
            for (_, gen) in &gens {
                let image = act_per_copy(&tuple, gen)?;
                let out = equal_auto(&image, gen, term_threshold, STABILIZER_TRIALS, seed ^ idx)?;
                if !out.equal {
                    return Ok((idx, false, diagonal, false));
                }
                prob_equal |= out.method == Method::Probabilistic;
            }
            Ok((idx, true, diagonal, prob_equal))
        })
        .collect::<Result<_>>()?;
    let fixing = results.iter().filter(|r| r.1).count();
    let diagonal = results.iter().filter(|r| r.2).count();
    for &(idx, fixes, diag, prob) in &results {
        if fixes != diag {
            let which = if diag { "diagonal tuple moves a generator" } else { "non-diagonal tuple fixes all generators" };
            rep.fail(format!("tuple #{idx}: {which}"));
        } else if fixes && prob {
            rep.combine(Verdict::Inconclusive);
            rep.note(format!("tuple #{idx} fixed only probabilistically"));
        }
    }
    rep.params.insert("fixing".into(), (fixing as u64).into());
    rep.params.insert("diagonal".into(), (diagonal as u64).into());
    Ok(rep)
}

/// `eta_s = det(X_1, X_s, X_1^q, ..., X_1^{q^{n-2}})`.
pub fn eta(fam: &SteinbergFamily, s: usize) -> Result<SparsePoly> {
    let n = fam.n();
    if s < 2 || s > n {
        return Err(InvariantError::IndexOutOfRange { i: 1, j: s }.into());
    }
    let col = |c, t| crate::invariants::frobenius_column(fam.spec(), fam.grid(), c, t);
    let mut cols = vec![col(1, 0)?, col(s, 0)?];
    for t in 1..=(n as u32 - 2) {
        cols.push(col(1, t)?);
    }
    Ok(PolyMatrix::from_columns(cols).map_err(InvariantError::from)?.determinant().map_err(InvariantError::from)?)
}

/// Negates the leading term, or drops it in characteristic 2.
pub fn corrupt(f: &SparsePoly) -> SparsePoly {
    let Some((mono, c)) = f.leading_term() else { return f.clone() };
    let lead = SparsePoly::build(f.spec(), f.grid(), &[(f.spec().element(c), mono.exponents().to_vec())])
        .expect("leading term is valid");
    if f.spec().p() == 2 {
        f - &lead
    } else {
        f - &(&lead + &lead)
    }
}

/// `l_0 f_s = eta_s` with `f_s = det(Y_1, Y_s, Y_1^{(1)}, ..., Y_1^{(n-2)})`
/// built from the chain products, and `(eta_s / l_0)^{q-1}` fixed by `elements`.
pub fn eta_membership_check(fam: &SteinbergFamily, s: usize, elements: &[FieldMatrix], corrupted: bool) -> Result<VerdictReport> {
    let n = fam.n();
    if fam.m() != n {
        return Err(VerifyError::Unsupported("eta check needs m = n".into()));
    }
    let spec = fam.spec();
    let mut rep = VerdictReport::new("eta", Method::Exact)
        .param("p", spec.p())
        .param("e", spec.e())
        .param("n", n as u64)
        .param("s", s as u64)
        .param("elements", elements.len() as u64);
    if corrupted {
        rep.params.insert("corrupted".into(), true.into());
    }
    let mut eta_s = eta(fam, s)?;
    if corrupted {
        eta_s = corrupt(&eta_s);
    }
    let mut cols = Vec::with_capacity(n);
    let mut den_exp = 0u64;
    let p0 = PolyMatrix::identity(spec, fam.grid(), n);
    cols.push(p0.column(0));
    cols.push(p0.column(s - 1));
    for t in 1..=(n as u32 - 2) {
        let (prod, e) = fam.chain_product(t)?;
        cols.push(prod.column(0));
        den_exp += e;
    }
    let det = PolyMatrix::from_columns(cols).map_err(InvariantError::from)?.determinant().map_err(InvariantError::from)?;
    if fam.ell0() * &det != &eta_s * &fam.ell0().pow(den_exp) {
        rep.fail("eta_s != l_0 f_s");
    } else if let Some(f) = RatExpr::new(eta_s.clone(), fam.ell0().clone())?.as_polynomial() {
        rep.note(format!("f_s has {} terms", f.num_terms()));
    }
    let ratio = RatExpr::new(eta_s, fam.ell0().clone())?.pow(fam.q() - 1);
    let inv = invariance_report("eta", &[("eta_s^(q-1)/l_0^(q-1)".into(), ratio)], elements, InvarianceMode::Invariant, Method::Exact)?;
    if let Some(w) = inv.witness {
        rep.fail(w);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::invariants::dickson_c;
    use crate::mpoly::VarGrid;
    use crate::ratexpr::EXACT_TERM_THRESHOLD;

    #[test]
    fn dickson_invariance_and_probe() {
        let f2 = make_field(2, 1).unwrap();
        let g = VarGrid::new(1, 2).unwrap();
        let c21 = RatExpr::from_poly(dickson_c(&f2, g, 1, 1).unwrap());
        let all = Group::general(&f2, 2).enumerate(100).unwrap();
        let rep = invariance_report("invariance", &[("c21".into(), c21.clone())], &all, InvarianceMode::Invariant, Method::Enumeration).unwrap();
        assert!(rep.passed());
        let bad = RatExpr::from_poly(c21.num() + &SparsePoly::var(&f2, g, 1, 1).unwrap());
        let rep = invariance_report("invariance", &[("probe".into(), bad)], &all, InvarianceMode::Invariant, Method::Enumeration).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert!(rep.witness.unwrap().starts_with("sigma="));
    }

    #[test]
    fn det_invariance_on_sl() {
        let f3 = make_field(3, 1).unwrap();
        let fam = SteinbergFamily::build(&f3, 2, 2).unwrap();
        let sl = Group::special(&f3, 2).sample(10, 4).unwrap();
        let l0 = vec![("l_0".to_string(), RatExpr::from_poly(fam.ell0().clone()))];
        assert!(invariance_report("det", &l0, &sl, InvarianceMode::DetInvariant, Method::Exact).unwrap().passed());
        assert!(invariance_report("det", &l0, &sl, InvarianceMode::Invariant, Method::Exact).unwrap().passed());
    }

    #[test]
    fn jacobian_examples() {
        let f3 = make_field(3, 1).unwrap();
        let g = VarGrid::new(1, 2).unwrap();
        let x = |j| RatExpr::from_poly(SparsePoly::var(&f3, g, 1, j).unwrap());
        assert!(jacobian_independence(&[x(1), x(2)], 1, 4).unwrap().passed());
        let dep = jacobian_independence(&[x(1), x(1).pow(2)], 1, 4).unwrap();
        assert_eq!(dep.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn stabilizer_small() {
        let f2 = make_field(2, 1).unwrap();
        let fam = SteinbergFamily::build(&f2, 2, 2).unwrap();
        let rep = stabilizer_enumeration(&fam, 1000, EXACT_TERM_THRESHOLD, 0).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.params["fixing"], 6);
        assert!(matches!(stabilizer_enumeration(&fam, 10, EXACT_TERM_THRESHOLD, 0), Err(VerifyError::CapExceeded { .. })));
    }

    #[test]
    fn eta_cases() {
        let f2 = make_field(2, 1).unwrap();
        let fam = SteinbergFamily::build(&f2, 2, 2).unwrap();
        assert_eq!(eta(&fam, 2).unwrap(), *fam.ell0());
        let all = Group::general(&f2, 2).enumerate(100).unwrap();
        assert!(eta_membership_check(&fam, 2, &all, false).unwrap().passed());
        let f3 = make_field(3, 1).unwrap();
        let fam3 = SteinbergFamily::build(&f3, 3, 3).unwrap();
        let sample = Group::general(&f3, 3).sample(5, 2).unwrap();
        assert!(eta_membership_check(&fam3, 2, &sample, false).unwrap().passed());
        assert_eq!(eta_membership_check(&fam3, 2, &sample, true).unwrap().verdict, Verdict::Fail);
    }
}
