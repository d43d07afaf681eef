//! Dickson invariants, the Steinberg generator families `l_ij / l_0` for both
//! `m >= n` and `m < n`, the auxiliary generating sets, and the identity
//! checks relating them.
//!
//! Columns are addressed as `(copy, t)`, meaning `X_copy^{q^t}`.

use crate::gf::FieldSpec;
use crate::mpoly::{PolyError, PolyMatrix, SparsePoly, VarGrid};
use crate::ratexpr::{Extension, RatError, RatExpr};
use crate::report::{Method, Verdict, VerdictReport};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("index ({i}, {j}) out of range")]
    IndexOutOfRange { i: usize, j: usize },
    #[error("removed index ({i}, {j}) must satisfy 1 <= i <= min(m, n), 1 <= j <= n")]
    BadRemovedIndex { i: usize, j: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Rat(#[from] RatError),
}

type Result<T> = std::result::Result<T, InvariantError>;

fn q_pow(spec: &FieldSpec, t: u32) -> u64 {
    (spec.q() as u64).checked_pow(t).expect("exponent overflow")
}

/// `X_copy^{q^t}` as a column of polynomials.
pub fn frobenius_column(spec: &FieldSpec, grid: VarGrid, copy: usize, t: u32) -> Result<Vec<SparsePoly>> {
    Ok(SparsePoly::column(spec, grid, copy, q_pow(spec, t))?)
}

/// `d_{n,i}` on copy `copy`: the determinant of `(X, X^q, ..., X^{q^n})` with the
/// `X^{q^i}` column deleted. `n` is the grid width.
pub fn dickson_d(spec: &FieldSpec, grid: VarGrid, i: usize, copy: usize) -> Result<SparsePoly> {
    let n = grid.n();
    if i > n || copy == 0 || copy > grid.m() {
        return Err(InvariantError::IndexOutOfRange { i: copy, j: i });
    }
    let cols = (0..=n as u32)
        .filter(|&t| t as usize != i)
        .map(|t| frobenius_column(spec, grid, copy, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolyMatrix::from_columns(cols)?.determinant()?)
}

/// `c_{n,s} = d_{n,s} / d_{n,n}`, always a polynomial.
pub fn dickson_c(spec: &FieldSpec, grid: VarGrid, s: usize, copy: usize) -> Result<SparsePoly> {
    if s >= grid.n() {
        return Err(InvariantError::IndexOutOfRange { i: copy, j: s });
    }
    let d = dickson_d(spec, grid, s, copy)?;
    let dnn = dickson_d(spec, grid, grid.n(), copy)?;
    Ok(d.exact_div(&dnn).expect("Dickson quotients are polynomials"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `m >= n`: `L_0 = (X_1, ..., X_n)`.
    MGeN,
    /// `m < n`: `L_0 = (X_1, ..., X_{m-1}, X_m^{q^{n-m}}, X_m, ..., X_m^{q^{n-m-1}})`.
    MLtN,
}

/// The Steinberg construction for `m` copies of an `n`-dimensional space.
#[derive(Debug, Clone)]
pub struct SteinbergFamily {
    spec: FieldSpec,
    m: usize,
    n: usize,
    branch: Branch,
    grid: VarGrid,
    l0_cols: Vec<(usize, u32)>,
    ell0: SparsePoly,
}

impl SteinbergFamily {
    pub fn build(spec: &FieldSpec, m: usize, n: usize) -> Result<Self> {
        let grid = VarGrid::new(m, n)?;
        let (branch, l0_cols) = if m >= n {
            (Branch::MGeN, (1..=n).map(|i| (i, 0)).collect())
        } else {
            let gap = (n - m) as u32;
            let mut cols: Vec<(usize, u32)> = (1..m).map(|i| (i, 0)).collect();
            cols.push((m, gap));
            cols.extend((0..gap).map(|t| (m, t)));
            (Branch::MLtN, cols)
        };
        let mut fam = SteinbergFamily {
            spec: spec.clone(),
            m,
            n,
            branch,
            grid,
            l0_cols,
            ell0: SparsePoly::zero(spec, grid),
        };
        fam.ell0 = fam.det_of(&fam.l0_cols.clone())?;
        assert!(!fam.ell0.is_zero(), "l_0 is nonzero");
        Ok(fam)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.spec.q() as u64
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn grid(&self) -> VarGrid {
        self.grid
    }

    pub fn ell0(&self) -> &SparsePoly {
        &self.ell0
    }

    /// Number of `i` indices carried internally: `m` for `m >= n`, `n` otherwise.
    pub fn internal_rows(&self) -> usize {
        self.m.max(self.n)
    }

    /// Column descriptors of `L_0`.
    pub fn l0_columns(&self) -> &[(usize, u32)] {
        &self.l0_cols
    }

    fn det_of(&self, cols: &[(usize, u32)]) -> Result<SparsePoly> {
        Ok(self.matrix_of(cols)?.determinant()?)
    }

    fn matrix_of(&self, cols: &[(usize, u32)]) -> Result<PolyMatrix> {
        let cols = cols
            .iter()
            .map(|&(c, t)| frobenius_column(&self.spec, self.grid, c, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix::from_columns(cols)?)
    }

    pub fn l0(&self) -> Result<PolyMatrix> {
        self.matrix_of(&self.l0_cols)
    }

    /// `L = (X_1, ..., X_m)`, extended by `X_m^q, ..., X_m^{q^{n-m}}` when `m < n`.
    pub fn l_matrix(&self) -> Result<PolyMatrix> {
        let mut cols: Vec<(usize, u32)> = (1..=self.m).map(|i| (i, 0)).collect();
        if self.m < self.n {
            cols.extend((1..=(self.n - self.m) as u32).map(|t| (self.m, t)));
        }
        self.matrix_of(&cols)
    }

    /// The column that replaces column `j` in `L_{ij}^{(k)}`.
    pub fn source_column(&self, i: usize, k: u32) -> Result<(usize, u32)> {
        if i == 0 || i > self.internal_rows() {
            return Err(InvariantError::IndexOutOfRange { i, j: 0 });
        }
        Ok(match self.branch {
            Branch::MGeN if i <= self.n => (i, k),
            Branch::MGeN => (i, 0),
            Branch::MLtN => {
                let (c, t) = self.l0_cols[i - 1];
                (c, t + k)
            }
        })
    }

    /// Columns of `L_{ij}^{(k)}`.
    pub fn lijk_columns(&self, i: usize, j: usize, k: u32) -> Result<Vec<(usize, u32)>> {
        if j == 0 || j > self.n {
            return Err(InvariantError::IndexOutOfRange { i, j });
        }
        let mut cols = self.l0_cols.clone();
        cols[j - 1] = self.source_column(i, k)?;
        Ok(cols)
    }

    /// `l_{ij}^{(k)} = det(L_{ij}^{(k)})`.
    pub fn lijk(&self, i: usize, j: usize, k: u32) -> Result<SparsePoly> {
        self.det_of(&self.lijk_columns(i, j, k)?)
    }

    /// `l_{ij} = l_{ij}^{(1)}`.
    pub fn lij(&self, i: usize, j: usize) -> Result<SparsePoly> {
        self.lijk(i, j, 1)
    }

    /// The exposed generators `l_ij / l_0`, `1 <= i <= m`, `1 <= j <= n`, row-major.
    pub fn generators(&self) -> Result<Vec<((usize, usize), RatExpr)>> {
        let mut out = Vec::with_capacity(self.m * self.n);
        for i in 1..=self.m {
            for j in 1..=self.n {
                out.push(((i, j), RatExpr::new(self.lij(i, j)?, self.ell0.clone())?));
            }
        }
        Ok(out)
    }

    /// `(l_{ij}^{(k)})` over the internal `n x n` block as a matrix indexed `[i][j]`.
    pub fn ell_matrix(&self, k: u32) -> Result<PolyMatrix> {
        let rows = (1..=self.n)
            .map(|i| (1..=self.n).map(|j| self.lijk(i, j, k)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix::from_rows(rows)?)
    }

    /// Numerator of the chain product `M M^{[q]} ... M^{[q^{k-1}]}` with
    /// `M[j][i] = l_ij / l_0`, and the exponent `(q^k - 1)/(q - 1)` of its
    /// common denominator `l_0`. For `k = 0` the product is the identity.
    pub fn chain_product(&self, k: u32) -> Result<(PolyMatrix, u64)> {
        let base = self.ell_matrix(1)?.transpose();
        let mut acc = PolyMatrix::identity(&self.spec, self.grid, self.n);
        let mut exponent = 0u64;
        for t in 0..k {
            acc = acc.mul(&base.map(|f| f.frobenius_power_poly(t)))?;
            exponent += q_pow(&self.spec, t);
        }
        Ok((acc, exponent))
    }

    fn report(&self, claim: &str, method: Method) -> VerdictReport {
        VerdictReport::new(claim, method)
            .param("p", self.spec.p())
            .param("e", self.spec.e())
            .param("q", self.spec.q())
            .param("m", self.m as u64)
            .param("n", self.n as u64)
    }
}

/// `B`, `D`, their reductions, and the localizing element of the `m = n` case.
#[derive(Debug, Clone)]
pub struct AuxSets {
    pub b: Vec<((usize, usize), SparsePoly)>,
    pub b_prime: Vec<((usize, usize), SparsePoly)>,
    pub d: Vec<((usize, usize), SparsePoly)>,
    pub d_prime: Vec<((usize, usize), SparsePoly)>,
    pub removed: (usize, usize),
    /// `l = l_0^{r(q-1)-n} prod_i d_nn^{(i)}`; only for `m = n`.
    pub ell_localizer: Option<SparsePoly>,
    pub r: u64,
}

/// Minimal positive `r` with `r (q - 1) >= n`.
pub fn localizer_r(q: u64, n: usize) -> u64 {
    (n as u64).div_ceil(q - 1).max(1)
}

/// `l = l_0^{r(q-1)-n} prod_i d_nn^{(i)}` for a family with `m = n`.
pub fn localizer(fam: &SteinbergFamily) -> Result<SparsePoly> {
    if fam.m != fam.n {
        return Err(InvariantError::Unsupported("the localizer needs m = n".into()));
    }
    let r = localizer_r(fam.q(), fam.n);
    let mut ell = fam.ell0.pow(r * (fam.q() - 1) - fam.n as u64);
    for i in 1..=fam.n {
        ell = &ell * &dickson_d(&fam.spec, fam.grid, fam.n, i)?;
    }
    Ok(ell)
}

pub fn aux_sets(fam: &SteinbergFamily, removed: (usize, usize)) -> Result<AuxSets> {
    let (ri, rj) = removed;
    if ri == 0 || ri > fam.m.min(fam.n) || rj == 0 || rj > fam.n {
        return Err(InvariantError::BadRemovedIndex { i: ri, j: rj });
    }
    let scale = fam.ell0.pow(fam.q() - 2);
    let mut d = Vec::new();
    for i in 1..=fam.m {
        for j in 1..=fam.n {
            d.push(((i, j), fam.lij(i, j)?));
        }
    }
    let b: Vec<_> = d.iter().map(|(idx, l)| (*idx, &scale * l)).collect();
    let keep = |v: &Vec<((usize, usize), SparsePoly)>| v.iter().filter(|(idx, _)| *idx != removed).cloned().collect();
    let ell_localizer = if fam.m == fam.n { Some(localizer(fam)?) } else { None };
    Ok(AuxSets {
        b_prime: keep(&b),
        d_prime: keep(&d),
        b,
        d,
        removed,
        ell_localizer,
        r: localizer_r(fam.q(), fam.n),
    })
}

/// `L_0 Y_i^{(k)} = X_i^{q^k}` entrywise (cleared of `l_0`), and the
/// determinant identity `det(l_ij^{(t)})_{t != s} = l_0^{n-1} d_ns^{(i)}`.
pub fn cramer_21(fam: &SteinbergFamily, k: u32) -> Result<VerdictReport> {
    let mut rep = fam.report("cramer_21", Method::Exact).param("k", k);
    let l0 = fam.l0()?;
    let n = fam.n;
    for i in 1..=fam.internal_rows() {
        let (copy, t) = fam.source_column(i, k)?;
        let target = frobenius_column(&fam.spec, fam.grid, copy, t)?;
        let ys = (1..=n).map(|j| fam.lijk(i, j, k)).collect::<Result<Vec<_>>>()?;
        for r in 0..n {
            let mut lhs = SparsePoly::zero(&fam.spec, fam.grid);
            for (j, y) in ys.iter().enumerate() {
                lhs = &lhs + &(l0.get(r, j) * y);
            }
            if lhs != &fam.ell0 * &target[r] {
                rep.fail(format!("Cramer row {} for i={i}", r + 1));
            }
        }
    }
    let ell_pow = fam.ell0.pow(n as u64 - 1);
    let copies = if fam.branch == Branch::MGeN { n } else { fam.internal_rows() };
    for i in 1..=copies {
        for s in 0..=n {
            let cols = (0..=n as u32)
                .filter(|&t| t as usize != s)
                .map(|t| (1..=n).map(|j| fam.lijk(i, j, t)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let lhs = PolyMatrix::from_columns(cols)?.determinant()?;
            let rhs_core = if fam.branch == Branch::MGeN {
                dickson_d(&fam.spec, fam.grid, s, i)?
            } else {
                let src: Vec<(usize, u32)> =
                    (0..=n as u32).filter(|&t| t as usize != s).map(|t| fam.source_column(i, t)).collect::<Result<_>>()?;
                fam.det_of(&src)?
            };
            if lhs != &ell_pow * &rhs_core {
                rep.fail(format!("determinant identity for i={i}, s={s}"));
            }
        }
    }
    Ok(rep)
}

/// `(l_ij^{(k)} / l_0)` equals the product of Frobenius-twisted `(l_ij / l_0)`
/// matrices, checked exactly after clearing denominators.
pub fn chain_24(fam: &SteinbergFamily, k: u32) -> Result<VerdictReport> {
    let mut rep = fam.report("chain_24", Method::Exact).param("k", k);
    let (prod, exponent) = fam.chain_product(k)?;
    let target = fam.ell_matrix(k)?.transpose();
    let den = fam.ell0.pow(exponent);
    for r in 0..fam.n {
        for c in 0..fam.n {
            if &fam.ell0 * prod.get(r, c) != target.get(r, c) * &den {
                rep.fail(format!("entry ({}, {})", r + 1, c + 1));
            }
        }
    }
    Ok(rep)
}

/// Probabilistic form of [`chain_24`]: both sides are evaluated at random
/// points of an extension field, the left side as a product of evaluated
/// matrices, without ever forming the product polynomials.
pub fn chain_24_probabilistic(fam: &SteinbergFamily, k: u32, trials: u32, seed: u64) -> Result<VerdictReport> {
    let mut rep = fam.report("chain_24", Method::Probabilistic).param("k", k).with_trials(trials).with_seed(seed);
    let n = fam.n;
    let ells = fam.ell_matrix(1)?;
    let targets = fam.ell_matrix(k)?;
    let exponent: u64 = (0..k).map(|t| q_pow(&fam.spec, t)).sum();
    let deg0 = fam.ell0.total_degree().unwrap_or(0);
    let top = (0..n * n).filter_map(|x| targets.get(x / n, x % n).total_degree()).max().unwrap_or(0);
    let bound = (top + exponent * deg0).max(deg0 + k as u64 * (deg0 + (0..n * n).filter_map(|x| ells.get(x / n, x % n).total_degree()).max().unwrap_or(0)) * q_pow(&fam.spec, k));
    let ext = Extension::for_degree_bound(&fam.spec, bound)?;
    rep.note(format!("evaluation field {}", ext.big()));
    let big = ext.big().clone();
    let nvars = fam.grid.nvars();
    let mut skipped = 0;
    for trial in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, trial as u64);
        let point = loop {
            let pt = ext.random_point(&mut rng, nvars);
            if ext.eval(&fam.ell0, &pt) != 0 {
                break Some(pt);
            }
            skipped += 1;
            if skipped > 64 * trials {
                break None;
            }
        };
        let Some(point) = point else {
            rep.combine(Verdict::Inconclusive);
            rep.note("denominator vanished at every sampled point");
            break;
        };
        let inv0 = big.inv(ext.eval(&fam.ell0, &point)).expect("nonzero");
        // M[j][i] = l_ij / l_0 at the point
        let mut m = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                m[j * n + i] = big.mul(ext.eval(ells.get(i, j), &point), inv0);
            }
        }
        let mut acc: Vec<u32> = (0..n * n).map(|x| u32::from(x / n == x % n)).collect();
        for t in 0..k {
            let qt = q_pow(&fam.spec, t);
            let twisted: Vec<u32> = m.iter().map(|&v| big.pow(v, qt)).collect();
            let mut next = vec![0u32; n * n];
            for r in 0..n {
                for c in 0..n {
                    next[r * n + c] = (0..n).fold(0, |s, x| big.add(s, big.mul(acc[r * n + x], twisted[x * n + c])));
                }
            }
            acc = next;
        }
        for i in 0..n {
            for j in 0..n {
                let rhs = big.mul(ext.eval(targets.get(i, j), &point), inv0);
                if acc[j * n + i] != rhs {
                    rep.fail(ext.format_point(fam.grid, &point));
                    return Ok(rep);
                }
            }
        }
    }
    Ok(rep)
}

/// `l_0^{q-1+n} = det(l_ij)` over the internal `n x n` block.
pub fn lemma_27(fam: &SteinbergFamily) -> Result<VerdictReport> {
    let mut rep = fam.report("lemma_27", Method::Exact);
    let lhs = fam.ell0.pow(fam.q() - 1 + fam.n as u64);
    let rhs = fam.ell_matrix(1)?.determinant()?;
    if lhs != rhs {
        rep.fail("l_0^(q-1+n) != det(l_ij)");
    }
    rep.note(format!("det(l_ij) has {} terms", rhs.num_terms()));
    Ok(rep)
}

/// Membership equalities for the localizer `l` (family with `m = n`):
/// `c_ns^{(i)} l = l_0^{r(q-1)-n} d_ns^{(i)} prod_{j != i} d_nn^{(j)}`,
/// `l l_0^n = l_0^{r(q-1)} prod d_nn^{(i)}`, and
/// `d_ns^{(i)} / l_0` as a determinant of chain products of `(l_ij / l_0)`.
pub fn prop32_membership(fam: &SteinbergFamily) -> Result<VerdictReport> {
    if fam.m != fam.n {
        return Err(InvariantError::Unsupported("prop32_membership needs m = n".into()));
    }
    let mut rep = fam.report("prop32_membership", Method::Exact);
    let (spec, grid, n) = (&fam.spec, fam.grid, fam.n);
    let q = fam.q();
    let r = localizer_r(q, n);
    let ell = localizer(fam)?;
    if ell.is_zero() {
        rep.fail("l = 0");
        return Ok(rep);
    }
    rep.params.insert("r".into(), r.into());
    let excess = fam.ell0.pow(r * (q - 1) - n as u64);
    let dnn = (1..=n).map(|i| dickson_d(spec, grid, n, i)).collect::<Result<Vec<_>>>()?;
    let prod_all = dnn.iter().fold(SparsePoly::one(spec, grid), |a, d| &a * d);
    if &ell * &fam.ell0.pow(n as u64) != &fam.ell0.pow(r * (q - 1)) * &prod_all {
        rep.fail("l * l_0^n != l_0^(r(q-1)) * prod d_nn");
    }
    let chains = (0..=n as u32).map(|t| fam.chain_product(t)).collect::<Result<Vec<_>>>()?;
    for i in 1..=n {
        let others = dnn.iter().enumerate().filter(|(j, _)| j + 1 != i).fold(SparsePoly::one(spec, grid), |a, (_, d)| &a * d);
        for s in 0..n {
            let dns = dickson_d(spec, grid, s, i)?;
            let cns = dickson_c(spec, grid, s, i)?;
            if &cns * &ell != &(&excess * &dns) * &others {
                rep.fail(format!("c_ns * l identity for i={i}, s={s}"));
            }
            let mut cols = Vec::with_capacity(n);
            let mut den = SparsePoly::one(spec, grid);
            for (t, (prod, exponent)) in chains.iter().enumerate() {
                if t == s {
                    continue;
                }
                cols.push(prod.column(i - 1));
                den = &den * &fam.ell0.pow(*exponent);
            }
            let det = PolyMatrix::from_columns(cols)?.determinant()?;
            if &fam.ell0 * &det != &dns * &den {
                rep.fail(format!("d_ns / l_0 from chain products for i={i}, s={s}"));
            }
        }
    }
    Ok(rep)
}

/// For `n = 1` the generators are `x[1,1]^{q-1}` and `x[i,1]/x[1,1]`.
pub fn cor25_n1(fam: &SteinbergFamily) -> Result<VerdictReport> {
    if fam.n != 1 {
        return Err(InvariantError::Unsupported("cor25_n1 needs n = 1".into()));
    }
    let mut rep = fam.report("cor25_n1", Method::Exact);
    let (spec, grid) = (&fam.spec, fam.grid);
    let x = |i| SparsePoly::var(spec, grid, i, 1);
    for ((i, _), g) in fam.generators()? {
        let expected = if i == 1 {
            RatExpr::from_poly(SparsePoly::var_pow(spec, grid, 1, 1, fam.q() - 1)?)
        } else {
            RatExpr::new(x(i)?, x(1)?)?
        };
        if !g.equal_exact(&expected)? {
            rep.fail(format!("generator for i={i}"));
        }
    }
    Ok(rep)
}

/// For `m < n`, `l_ij / l_0` is constant for `m < i <= n`.
pub fn m_lt_n_constants(fam: &SteinbergFamily) -> Result<VerdictReport> {
    if fam.branch != Branch::MLtN {
        return Err(InvariantError::Unsupported("constant rows exist only for m < n".into()));
    }
    let mut rep = fam.report("m_lt_n_constant", Method::Exact);
    for i in fam.m + 1..=fam.n {
        for j in 1..=fam.n {
            let g = RatExpr::new(fam.lij(i, j)?, fam.ell0.clone())?;
            match g.constant_value() {
                Some(c) => rep.note(format!("l[{i},{j}]/l_0 = {}", fam.spec.format_raw(c))),
                None => rep.fail(format!("l[{i},{j}]/l_0 is not constant")),
            }
        }
    }
    Ok(rep)
}

/// Which generating set the removed element is recovered from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rearrangement {
    /// From `{l_0^{q-1}}` and the remaining `l_ij / l_0`.
    Quotients,
    /// From `{l_0}` and the remaining `l_ij`.
    Polynomials,
}

/// Solves `det(l_ij) = l_0^{q-1+n}` along the removed element's row and
/// checks the solution equals the removed element exactly.
pub fn rearrangement(fam: &SteinbergFamily, removed: (usize, usize), variant: Rearrangement) -> Result<VerdictReport> {
    let (ri, rj) = removed;
    if ri == 0 || ri > fam.m.min(fam.n) || rj == 0 || rj > fam.n {
        return Err(InvariantError::BadRemovedIndex { i: ri, j: rj });
    }
    let claim = match variant {
        Rearrangement::Quotients => "thm33_rearrange",
        Rearrangement::Polynomials => "cor34_rearrange",
    };
    let mut rep = fam.report(claim, Method::Exact).param("i", ri as u64).param("j", rj as u64);
    let n = fam.n;
    let (spec, grid) = (&fam.spec, fam.grid);
    let ells = fam.ell_matrix(1)?;
    let entry = |r: usize, c: usize| -> Result<RatExpr> {
        Ok(match variant {
            Rearrangement::Quotients => RatExpr::new(ells.get(r, c).clone(), fam.ell0.clone())?,
            Rearrangement::Polynomials => RatExpr::from_poly(ells.get(r, c).clone()),
        })
    };
    let cofactor = |c: usize| -> Result<RatExpr> {
        let rows: Vec<usize> = (0..n).filter(|&r| r != ri - 1).collect();
        let cols: Vec<usize> = (0..n).filter(|&k| k != c).collect();
        let sign_neg = (ri - 1 + c) % 2 == 1;
        let det = rat_det(&rows, &cols, &entry, spec, grid)?;
        Ok(if sign_neg { det.neg() } else { det })
    };
    let key = cofactor(rj - 1)?;
    if key.is_zero() {
        rep.fail("ZeroCofactor");
        return Ok(rep);
    }
    let total = match variant {
        Rearrangement::Quotients => RatExpr::from_poly(fam.ell0.pow(fam.q() - 1)),
        Rearrangement::Polynomials => RatExpr::from_poly(fam.ell0.pow(fam.q() - 1 + n as u64)),
    };
    let mut rest = total;
    for c in (0..n).filter(|&c| c != rj - 1) {
        rest = rest.checked_sub(&entry(ri - 1, c)?.checked_mul(&cofactor(c)?)?)?;
    }
    let solved = rest.checked_div(&key)?;
    if !solved.equal_exact(&entry(ri - 1, rj - 1)?)? {
        rep.fail("rearranged expression differs from the removed element");
    }
    Ok(rep)
}

fn rat_det(
    rows: &[usize],
    cols: &[usize],
    entry: &dyn Fn(usize, usize) -> Result<RatExpr>,
    spec: &FieldSpec,
    grid: VarGrid,
) -> Result<RatExpr> {
    if rows.is_empty() {
        return Ok(RatExpr::from_poly(SparsePoly::one(spec, grid)));
    }
    let mut acc = RatExpr::from_poly(SparsePoly::zero(spec, grid));
    for (pos, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&k| k != c).collect();
        let term = entry(rows[0], c)?.checked_mul(&rat_det(&rows[1..], &rest, entry, spec, grid)?)?;
        acc = if pos % 2 == 0 { acc.checked_add(&term)? } else { acc.checked_sub(&term)? };
    }
    Ok(acc)
}

/// The substitution from `n` copies to `m < n` copies: fixes `X_1..X_{m-1}`,
/// sends `X_m -> X_m^{q^{n-m}}` and `X_{m+k} -> X_m^{q^{k-1}}`.
pub fn pi_specialize(f: &SparsePoly, m: usize) -> Result<SparsePoly> {
    let (spec, grid) = (f.spec(), f.grid());
    let n = grid.n();
    if grid.m() != n || m == 0 || m >= n {
        return Err(PolyError::GridMismatch.into());
    }
    let target = VarGrid::new(m, n)?;
    let mut assignment = Vec::with_capacity(grid.nvars());
    for c in 1..=n {
        let (copy, t) = match c {
            c if c < m => (c, 0),
            c if c == m => (m, (n - m) as u32),
            c => (m, (c - m - 1) as u32),
        };
        for j in 1..=n {
            assignment.push(SparsePoly::var_pow(spec, target, copy, j, q_pow(spec, t))?);
        }
    }
    Ok(f.substitute(&assignment)?)
}

/// `pi` carries the `n`-copy family onto the `m`-copy family: `pi(l_0)` and
/// every `pi(l_ij)` match the `m < n` construction, and `pi(l_0)`, `pi(l)` are nonzero.
pub fn pi_check(spec: &FieldSpec, m: usize, n: usize) -> Result<VerdictReport> {
    let full = SteinbergFamily::build(spec, n, n)?;
    let small = SteinbergFamily::build(spec, m, n)?;
    let mut rep = small.report("pi_specialize", Method::Exact);
    let p0 = pi_specialize(full.ell0(), m)?;
    if p0.is_zero() {
        rep.fail("pi(l_0) = 0");
    }
    if p0 != *small.ell0() {
        rep.fail("pi(l_0) differs from the m < n l_0");
    }
    for i in 1..=n {
        for j in 1..=n {
            if pi_specialize(&full.lij(i, j)?, m)? != small.lij(i, j)? {
                rep.fail(format!("pi(l[{i},{j}])"));
            }
        }
    }
    let ell = pi_specialize(&localizer(&full)?, m)?;
    if ell.is_zero() {
        rep.fail("pi(l) = 0");
    }
    rep.note(format!("pi(l_0) has {} terms, pi(l) has {} terms", p0.num_terms(), ell.num_terms()));
    Ok(rep)
}

/// Whether each exposed `l_ij / l_0` divides exactly, as data.
pub fn polynomial_quotients(fam: &SteinbergFamily) -> Result<Vec<((usize, usize), bool)>> {
    Ok(fam.generators()?.into_iter().map(|(idx, g)| (idx, g.as_polynomial().is_some())).collect())
}
