//! Bilinear and sesquilinear vector invariants `Q`, `H`, `P` of the
//! symplectic, unitary and orthogonal groups, their generator families, and
//! the determinant-transfer identities.
//!
//! Form groups `{T : T F tT = F}` fix these invariants under `act` by `tT`,
//! so every invariance check here acts by the transpose.

use crate::gf::FieldSpec;
use crate::groups::{act, FieldMatrix, FormKind, FormMatrix, Group, GroupError};
use crate::invariants::{InvariantError, SteinbergFamily};
use crate::mpoly::{PolyError, PolyMatrix, SparsePoly, VarGrid};
use crate::report::{Method, VerdictReport};

/// Largest Frobenius exponent a classical identity check may build.
pub const EXPONENT_BUDGET: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassicalError {
    #[error("{0}")]
    KindParamMismatch(String),
    #[error("the transfer identity is implemented for m >= n only")]
    BranchUnsupported,
    #[error("exponent {0} exceeds the budget")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

type Result<T> = std::result::Result<T, ClassicalError>;

fn checked_pow(base: u64, k: u32) -> Result<u64> {
    match base.checked_pow(k) {
        Some(v) if v <= EXPONENT_BUDGET => Ok(v),
        Some(v) => Err(ClassicalError::BudgetExceeded(v)),
        None => Err(ClassicalError::BudgetExceeded(u64::MAX)),
    }
}

/// `r` with `q = r^2` for a hermitian form; `q` otherwise.
fn frobenius_base(form: &FormMatrix) -> u64 {
    match form.kind() {
        FormKind::Hermitian => form.spec().half_order().expect("validated hermitian form") as u64,
        _ => form.spec().q() as u64,
    }
}

fn column(spec: &FieldSpec, grid: VarGrid, copy: usize, exp: u64) -> Result<Vec<SparsePoly>> {
    Ok(SparsePoly::column(spec, grid, copy, exp)?)
}

/// `tu F v` for columns `u`, `v`.
pub fn pairing(u: &[SparsePoly], form: &FieldMatrix, v: &[SparsePoly]) -> SparsePoly {
    let n = form.size();
    let mut acc = SparsePoly::zero(u[0].spec(), u[0].grid());
    for a in 0..n {
        let mut inner = SparsePoly::zero(u[0].spec(), u[0].grid());
        for b in 0..n {
            let c = form.get(a, b);
            if c != 0 {
                inner = &inner + &v[b].scale(c);
            }
        }
        acc = &acc + &(&u[a] * &inner);
    }
    acc
}

/// The matrix `(tl_a F r_b)` for column lists `left`, `right`.
pub fn gram(left: &[Vec<SparsePoly>], form: &FieldMatrix, right: &[Vec<SparsePoly>]) -> Result<PolyMatrix> {
    let rows = left.iter().map(|u| right.iter().map(|v| pairing(u, form, v)).collect()).collect();
    Ok(PolyMatrix::from_rows(rows)?)
}

/// Exponent carried by `X_j` in the `k`-th symbol: `q^k`, or `r^{2k+1}` for hermitian forms.
pub fn symbol_exponent(form: &FormMatrix, k: u32) -> Result<u64> {
    match form.kind() {
        FormKind::Hermitian => checked_pow(frobenius_base(form), 2 * k + 1),
        _ => checked_pow(form.spec().q() as u64, k),
    }
}

/// `Q_ij^{(k)}`, `H_ij^{(k)}` or `P_ij^{(k)}` by the kind of `form`, on `grid`.
pub fn bilinear_invariant(form: &FormMatrix, grid: VarGrid, i: usize, j: usize, k: u32) -> Result<SparsePoly> {
    if form.kind() == FormKind::Alternate && k == 0 {
        return Err(ClassicalError::KindParamMismatch("symplectic symbols need k >= 1".into()));
    }
    bilinear_value(form, grid, i, j, k)
}

/// As [`bilinear_invariant`] without the `k >= 1` restriction for alternate forms.
pub fn bilinear_value(form: &FormMatrix, grid: VarGrid, i: usize, j: usize, k: u32) -> Result<SparsePoly> {
    if grid.n() != form.size() {
        return Err(GroupError::SizeMismatch.into());
    }
    let spec = form.spec();
    let u = column(spec, grid, i, 1)?;
    let v = column(spec, grid, j, symbol_exponent(form, k)?)?;
    Ok(pairing(&u, form.matrix(), &v))
}

/// Generators `Q_{i1}^{(k)}`, `H_{i1}^{(k)}` or `P_{i1}^{(k)}` for `m` copies.
#[derive(Debug, Clone)]
pub struct BilinearFamily {
    pub form: FormMatrix,
    pub m: usize,
    pub grid: VarGrid,
    /// `((i, k), generator)`.
    pub generators: Vec<((usize, u32), SparsePoly)>,
}

impl BilinearFamily {
    pub fn kind(&self) -> FormKind {
        self.form.kind()
    }

    pub fn group(&self) -> Group {
        Group::with_form(self.form.clone())
    }
}

/// Symplectic (size `2n`): `k = 1..=2n`; unitary and orthogonal (size `n`): `k = 0..n`.
pub fn theorem41_generators(form: &FormMatrix, m: usize) -> Result<BilinearFamily> {
    let size = form.size();
    let grid = VarGrid::new(m, size)?;
    let ks: Vec<u32> = match form.kind() {
        FormKind::Alternate => (1..=size as u32).collect(),
        _ => (0..size as u32).collect(),
    };
    let mut generators = Vec::with_capacity(m * ks.len());
    for i in 1..=m {
        for &k in &ks {
            generators.push(((i, k), bilinear_invariant(form, grid, i, 1, k)?));
        }
    }
    Ok(BilinearFamily { form: form.clone(), m, grid, generators })
}

/// Checks `act(tT, g) = g` for every generator and element.
pub fn family_invariance(family: &BilinearFamily, elements: &[FieldMatrix], method: Method) -> Result<VerdictReport> {
    let mut rep = form_report("invariance", &family.form).param("m", family.m as u64);
    rep.method = method;
    rep.params.insert("elements".into(), (elements.len() as u64).into());
    for t in elements {
        let s = t.transpose();
        for ((i, k), g) in &family.generators {
            if act(&s, g)? != *g {
                rep.fail(format!("element {t} moves generator i={i}, k={k}"));
                return Ok(rep);
            }
        }
    }
    Ok(rep)
}

fn form_report(claim: &str, form: &FormMatrix) -> VerdictReport {
    let spec = form.spec();
    VerdictReport::new(claim, Method::Exact)
        .param("p", spec.p())
        .param("e", spec.e())
        .param("size", form.size() as u64)
        .param("form", form.matrix().to_string())
}

fn require(form: &FormMatrix, kind: FormKind, claim: &str) -> Result<()> {
    if form.kind() != kind {
        return Err(ClassicalError::KindParamMismatch(format!("{claim} needs a {kind:?} form")));
    }
    Ok(())
}

/// Powers of `X_1` and the twisted `X~` used by the orthogonal and unitary
/// transfer identities. Returns `(F, X~, X~ twisted)`.
fn transfer_columns(
    form: &FormMatrix,
    grid: VarGrid,
    j: usize,
) -> Result<(Vec<Vec<SparsePoly>>, Vec<Vec<SparsePoly>>, Vec<Vec<SparsePoly>>)> {
    let spec = form.spec();
    let n = form.size() as u32;
    // orthogonal: step q, offset 0; unitary: step r^2, offset r
    let (offset, step) = match form.kind() {
        FormKind::Hermitian => {
            let r = frobenius_base(form);
            (r, r * r)
        }
        _ => (1, spec.q() as u64),
    };
    let x1 = |t: u32| -> Result<Vec<SparsePoly>> { column(spec, grid, 1, offset * checked_pow(step, t)?) };
    let f = (0..n).map(x1).collect::<Result<Vec<_>>>()?;
    let mut tilde = (0..n - 1).map(x1).collect::<Result<Vec<_>>>()?;
    tilde.push(column(spec, grid, j, 1)?);
    let mut twisted = (1..n).map(x1).collect::<Result<Vec<_>>>()?;
    twisted.push(column(spec, grid, j, step)?);
    Ok((f, tilde, twisted))
}

/// `det(tX~ A F)^q = (det A det(tF A F))^{(q-1)/2} det(tX~^{(q)} A F)`, and its
/// unitary analogue with `r^2` and `(r^2 - 1)/2`.
fn transfer_det_identity(form: &FormMatrix, j: usize, claim: &str) -> Result<VerdictReport> {
    let n = form.size();
    let grid = VarGrid::new(j.max(2), n)?;
    let mut rep = form_report(claim, form).param("j", j as u64);
    if j < 2 {
        return Err(ClassicalError::KindParamMismatch("j must be at least 2".into()));
    }
    let spec = form.spec();
    let step = match form.kind() {
        FormKind::Hermitian => frobenius_base(form).pow(2),
        _ => spec.q() as u64,
    };
    let (f, tilde, twisted) = transfer_columns(form, grid, j)?;
    let a = form.matrix();
    let lhs = gram(&tilde, a, &f)?.determinant()?.pow(step);
    let g = gram(&f, a, &f)?.determinant()?.scale(a.det());
    let rhs = &g.pow((step - 1) / 2) * &gram(&twisted, a, &f)?.determinant()?;
    if lhs != rhs {
        rep.fail("determinant identity does not hold");
    }
    Ok(rep)
}

/// Orthogonal determinant transfer at copy `j`.
pub fn orth_42(form: &FormMatrix, j: usize) -> Result<VerdictReport> {
    require(form, FormKind::Symmetric, "orth_42")?;
    transfer_det_identity(form, j, "orth_42")
}

/// Unitary determinant transfer at copy `j`.
pub fn unit_44(form: &FormMatrix, j: usize) -> Result<VerdictReport> {
    require(form, FormKind::Hermitian, "unit_44")?;
    let mut rep = transfer_det_identity(form, j, "unit_44")?;
    let grid = VarGrid::new(j, form.size())?;
    let r = frobenius_base(form);
    let (f, _, twisted) = transfer_columns(form, grid, j)?;
    let a = form.matrix();
    let n = form.size();
    for (b, col) in f.iter().enumerate() {
        let entry = pairing(&twisted[n - 1], a, col);
        let claimed = if b == 0 {
            bilinear_value(form, grid, 1, j, 0)?.pow(r)
        } else {
            bilinear_value(form, grid, j, 1, b as u32 - 1)?.pow(r * r)
        };
        if entry != claimed {
            rep.fail(format!("last Gram row, column {}", b + 1));
        }
    }
    rep.note("rows from X_1 pair powers with an even gap and are not hermitian symbols");
    Ok(rep)
}

/// Entries of `tX~^{(q)} A F` are the claimed powers of `P_11` and `P_j1`, `P_1j`.
pub fn orth_43(form: &FormMatrix, j: usize) -> Result<VerdictReport> {
    require(form, FormKind::Symmetric, "orth_43")?;
    if j < 2 {
        return Err(ClassicalError::KindParamMismatch("j must be at least 2".into()));
    }
    let n = form.size();
    let grid = VarGrid::new(j, n)?;
    let q = form.spec().q() as u64;
    let mut rep = form_report("orth_43", form).param("j", j as u64);
    let (f, _, twisted) = transfer_columns(form, grid, j)?;
    let actual = gram(&twisted, form.matrix(), &f)?;
    let p = |i, jj, k| bilinear_value(form, grid, i, jj, k);
    let mut claimed = Vec::with_capacity(n);
    for a in 1..n {
        let row = (1..=n)
            .map(|b| {
                if a + 1 >= b {
                    Ok(p(1, 1, (a + 1 - b) as u32)?.pow(checked_pow(q, b as u32 - 1)?))
                } else {
                    Ok(p(1, 1, (b - 1 - a) as u32)?.pow(checked_pow(q, a as u32)?))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        claimed.push(row);
    }
    let mut last = vec![p(1, j, 1)?];
    for b in 2..=n {
        last.push(p(j, 1, b as u32 - 2)?.pow(q));
    }
    claimed.push(last);
    let claimed = PolyMatrix::from_rows(claimed)?;
    for r in 0..n {
        for c in 0..n {
            if actual.get(r, c) != claimed.get(r, c) {
                rep.fail(format!("entry ({}, {})", r + 1, c + 1));
            }
        }
    }
    if actual.determinant()? != claimed.determinant()? {
        rep.fail("determinants differ");
    }
    Ok(rep)
}

/// Row `tX_i^q K (X_1^q, ..., X_1^{q^{2n}})` equals `((Q_{i1}^{(b-1)})^q)_b`;
/// its first entry vanishes for `i = 1`.
pub fn sp_row(form: &FormMatrix, i: usize) -> Result<VerdictReport> {
    require(form, FormKind::Alternate, "sp_row")?;
    let size = form.size();
    let grid = VarGrid::new(i.max(1), size)?;
    let spec = form.spec();
    let q = spec.q() as u64;
    let mut rep = form_report("sp_row", form).param("i", i as u64);
    let left = column(spec, grid, i, q)?;
    for b in 1..=size as u32 {
        let right = column(spec, grid, 1, checked_pow(q, b)?)?;
        let entry = pairing(&left, form.matrix(), &right);
        if entry != bilinear_value(form, grid, i, 1, b - 1)?.pow(q) {
            rep.fail(format!("entry {b}"));
        }
        if b == 1 {
            if i == 1 && !entry.is_zero() {
                rep.fail("first entry is nonzero for i = 1");
            }
            if i != 1 {
                rep.note(format!("first entry is (Q_{i}1^(0))^q with {} terms", entry.num_terms()));
            }
        }
    }
    Ok(rep)
}

/// `l_ij det(tL_0 F G) = l_0 det(tL_ij F G)` with `G` the kind's Gram columns
/// of `X_1` powers, for the `m >= n` Steinberg family.
pub fn transfer_quotient(form: &FormMatrix, m: usize, i: usize, j: usize) -> Result<VerdictReport> {
    let n = form.size();
    if m < n {
        return Err(ClassicalError::BranchUnsupported);
    }
    let spec = form.spec();
    let fam = SteinbergFamily::build(spec, m, n)?;
    let grid = fam.grid();
    let mut rep = form_report("transfer_quotient", form).param("m", m as u64).param("i", i as u64).param("j", j as u64);
    let q = spec.q() as u64;
    let g: Vec<Vec<SparsePoly>> = match form.kind() {
        FormKind::Symmetric => (0..n as u32).map(|t| column(spec, grid, 1, checked_pow(q, t)?)).collect::<Result<_>>()?,
        FormKind::Alternate => (1..=n as u32).map(|t| column(spec, grid, 1, checked_pow(q, t)?)).collect::<Result<_>>()?,
        FormKind::Hermitian => {
            let r = frobenius_base(form);
            (0..n as u32).map(|t| column(spec, grid, 1, checked_pow(r, 2 * t + 1)?)).collect::<Result<_>>()?
        }
    };
    let cols = |descr: &[(usize, u32)]| -> Result<Vec<Vec<SparsePoly>>> {
        descr.iter().map(|&(c, t)| column(spec, grid, c, checked_pow(q, t)?)).collect()
    };
    let a = form.matrix();
    let base = gram(&cols(fam.l0_columns())?, a, &g)?.determinant()?;
    let replaced = gram(&cols(&fam.lijk_columns(i, j, 1)?)?, a, &g)?.determinant()?;
    let lij = fam.lij(i, j)?;
    if base.is_zero() {
        rep.fail("denominator Gram determinant vanishes");
    } else if &lij * &base != fam.ell0() * &replaced {
        rep.fail("cross-multiplied determinants differ");
    }
    Ok(rep)
}

/// Over `GL_2(F_3)` by exhaustion: `T` fixes `P_11^{(0)}` and `P_11^{(1)}` under
/// `act(tT, .)` exactly when `T` is in the orthogonal group of `form`.
pub fn chu_converse(form: &FormMatrix, cap: u64) -> Result<VerdictReport> {
    require(form, FormKind::Symmetric, "chu_converse")?;
    let n = form.size();
    let grid = VarGrid::new(1, n)?;
    let spec = form.spec();
    let mut rep = form_report("chu_converse", form);
    rep.method = Method::Enumeration;
    let gens = (0..n as u32).map(|k| bilinear_value(form, grid, 1, 1, k)).collect::<Result<Vec<_>>>()?;
    let orth = Group::with_form(form.clone());
    let all = Group::general(spec, n).enumerate(cap)?;
    let mut fixing = 0u64;
    for t in &all {
        let s = t.transpose();
        let mut fixes = true;
        for g in &gens {
            if act(&s, g)? != *g {
                fixes = false;
                break;
            }
        }
        let member = orth.is_member(t)?;
        fixing += fixes as u64;
        if fixes != member {
            rep.fail(format!("element {t}: fixes={fixes}, member={member}"));
        }
    }
    rep.params.insert("elements".into(), (all.len() as u64).into());
    rep.note(format!("{fixing} elements fix every generator"));
    Ok(rep)
}
