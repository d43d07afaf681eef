//! Matrix groups GL, SL, Sp, U, O over small finite fields: membership,
//! sampling, enumeration, and the substitution action on polynomials in `m`
//! copies of `W`.
//!
//! Action convention: `act(s, f)` substitutes `X_i -> s X_i` in every copy, so
//! `x[i,j] -> sum_k s[j,k] x[i,k]` and `act(s, act(t, f)) = act(t s, f)`.

use std::fmt;

use rayon::prelude::*;

use crate::gf::{FieldError, FieldSpec};
use crate::mpoly::{PolyError, SparsePoly, VarGrid};
use crate::ratexpr::{RatError, RatExpr};
use crate::rng::SplitMix64;

/// Default bound on the number of elements an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// Matrices scanned by rejection sampling or filter enumeration at most.
const FILTER_SPACE_LIMIT: u64 = 10_000_000;

/// Length of the random words used for generator-word sampling.
pub const WORD_LENGTH: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("matrix sizes do not match")]
    SizeMismatch,
    #[error("an alternate form needs even size, got {0}")]
    OddSizeAlternate(usize),
    #[error("symmetric and hermitian forms need odd characteristic")]
    EvenCharForbidden,
    #[error("hermitian forms need a field of square order")]
    WrongFieldForUnitary,
    #[error("matrix is not a valid {0} form")]
    InvalidForm(&'static str),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not a member of {0}")]
    NotMember(String),
    #[error("no sample found within budget")]
    BudgetExceeded,
    #[error("enumeration of about {estimate} elements exceeds cap {cap}")]
    CapExceeded { estimate: u64, cap: u64 },
    #[error("cannot parse matrix: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Rat(#[from] RatError),
}

/// A square matrix of raw field values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    spec: FieldSpec,
    n: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Rows separated by `;`, entries by `,`.
impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|r| (0..self.n).map(|c| self.spec.format_raw(self.get(r, c))).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&rows.join(";"))
    }
}

impl FieldMatrix {
    pub fn new(spec: &FieldSpec, n: usize, entries: Vec<u32>) -> Result<Self, GroupError> {
        if entries.len() != n * n || n == 0 {
            return Err(GroupError::SizeMismatch);
        }
        if entries.iter().any(|&a| a >= spec.q()) {
            return Err(GroupError::Parse("entry outside the field".into()));
        }
        Ok(FieldMatrix { spec: spec.clone(), n, entries })
    }

    pub fn from_rows(spec: &FieldSpec, rows: &[Vec<i64>]) -> Result<Self, GroupError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GroupError::SizeMismatch);
        }
        Self::new(spec, n, rows.iter().flatten().map(|&v| spec.from_int(v)).collect())
    }

    pub fn identity(spec: &FieldSpec, n: usize) -> Self {
        let entries = (0..n * n).map(|k| u32::from(k / n == k % n)).collect();
        FieldMatrix { spec: spec.clone(), n, entries }
    }

    /// Parses `a,b;c,d` with field-element text entries.
    pub fn parse(spec: &FieldSpec, text: &str) -> Result<Self, GroupError> {
        let rows: Vec<&str> = text.trim().split(';').collect();
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != n {
                return Err(GroupError::Parse(format!("`{text}` is not square")));
            }
            for cell in cells {
                entries.push(spec.parse_raw(cell)?);
            }
        }
        Self::new(spec, n, entries)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.n + c]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn mul(&self, other: &Self) -> Result<Self, GroupError> {
        if self.n != other.n || self.spec != other.spec {
            return Err(GroupError::SizeMismatch);
        }
        let s = &self.spec;
        let n = self.n;
        let mut entries = vec![0; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = (0..n).fold(0, |acc, k| s.add(acc, s.mul(self.get(r, k), other.get(k, c))));
            }
        }
        Ok(FieldMatrix { spec: s.clone(), n, entries })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n)).collect();
        FieldMatrix { spec: self.spec.clone(), n, entries }
    }

    /// Entry-wise `a -> a^{sqrt(q)}`; requires an even extension degree.
    pub fn conj(&self) -> Self {
        FieldMatrix { entries: self.entries.iter().map(|&a| self.spec.conj(a)).collect(), ..self.clone() }
    }

    pub fn scale_row(&self, r: usize, c: u32) -> Self {
        let mut out = self.clone();
        for k in 0..self.n {
            out.entries[r * self.n + k] = self.spec.mul(self.get(r, k), c);
        }
        out
    }

    pub fn det(&self) -> u32 {
        let s = &self.spec;
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1u32;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| a[r * n + k] != 0) else {
                return 0;
            };
            if piv != k {
                for c in 0..n {
                    a.swap(k * n + c, piv * n + c);
                }
                det = s.neg(det);
            }
            let pv = a[k * n + k];
            det = s.mul(det, pv);
            let inv = s.inv(pv).expect("pivot is nonzero");
            for r in k + 1..n {
                let factor = s.mul(a[r * n + k], inv);
                if factor == 0 {
                    continue;
                }
                for c in k..n {
                    a[r * n + c] = s.sub(a[r * n + c], s.mul(factor, a[k * n + c]));
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        let s = &self.spec;
        let n = self.n;
        let mut a = self.entries.clone();
        let mut b = Self::identity(s, n).entries;
        for k in 0..n {
            let piv = (k..n).find(|&r| a[r * n + k] != 0)?;
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
                b.swap(k * n + c, piv * n + c);
            }
            let inv = s.inv(a[k * n + k])?;
            for c in 0..n {
                a[k * n + c] = s.mul(a[k * n + c], inv);
                b[k * n + c] = s.mul(b[k * n + c], inv);
            }
            for r in 0..n {
                let factor = a[r * n + k];
                if r == k || factor == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = s.sub(a[r * n + c], s.mul(factor, a[k * n + c]));
                    b[r * n + c] = s.sub(b[r * n + c], s.mul(factor, b[k * n + c]));
                }
            }
        }
        Some(FieldMatrix { spec: s.clone(), n, entries: b })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.spec, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormKind {
    Alternate,
    Hermitian,
    Symmetric,
}

impl FormKind {
    fn name(self) -> &'static str {
        match self {
            FormKind::Alternate => "alternate",
            FormKind::Hermitian => "hermitian",
            FormKind::Symmetric => "symmetric",
        }
    }
}

/// A validated nonsingular alternate, hermitian or symmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormMatrix {
    kind: FormKind,
    matrix: FieldMatrix,
}

impl FormMatrix {
    pub fn new(kind: FormKind, matrix: FieldMatrix) -> Result<Self, GroupError> {
        let s = matrix.spec().clone();
        let n = matrix.size();
        match kind {
            FormKind::Alternate => {
                if n % 2 == 1 {
                    return Err(GroupError::OddSizeAlternate(n));
                }
                let ok = (0..n).all(|i| {
                    matrix.get(i, i) == 0 && (0..n).all(|j| matrix.get(i, j) == s.neg(matrix.get(j, i)))
                });
                if !ok {
                    return Err(GroupError::InvalidForm(kind.name()));
                }
            }
            FormKind::Symmetric => {
                if s.p() == 2 {
                    return Err(GroupError::EvenCharForbidden);
                }
                if matrix.transpose() != matrix {
                    return Err(GroupError::InvalidForm(kind.name()));
                }
            }
            FormKind::Hermitian => {
                if s.p() == 2 {
                    return Err(GroupError::EvenCharForbidden);
                }
                if s.e() % 2 == 1 {
                    return Err(GroupError::WrongFieldForUnitary);
                }
                if matrix.transpose().conj() != matrix {
                    return Err(GroupError::InvalidForm(kind.name()));
                }
            }
        }
        if matrix.det() == 0 {
            return Err(GroupError::Singular);
        }
        Ok(FormMatrix { kind, matrix })
    }

    /// Alternate: `[[0, I], [-I, 0]]`; hermitian and symmetric: identity.
    pub fn standard(kind: FormKind, size: usize, spec: &FieldSpec) -> Result<Self, GroupError> {
        let matrix = match kind {
            FormKind::Alternate => {
                if size % 2 == 1 || size == 0 {
                    return Err(GroupError::OddSizeAlternate(size));
                }
                let h = size / 2;
                let mut entries = vec![0; size * size];
                for k in 0..h {
                    entries[k * size + h + k] = 1;
                    entries[(h + k) * size + k] = spec.neg(1);
                }
                FieldMatrix::new(spec, size, entries)?
            }
            _ => FieldMatrix::identity(spec, size),
        };
        Self::new(kind, matrix)
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn spec(&self) -> &FieldSpec {
        self.matrix.spec()
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupKind {
    General,
    Special,
    Symplectic(FormMatrix),
    Unitary(FormMatrix),
    Orthogonal(FormMatrix),
}

/// A classical group of `size x size` matrices over `spec`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Group {
    kind: GroupKind,
    size: usize,
    spec: FieldSpec,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GroupKind::General => "GL",
            GroupKind::Special => "SL",
            GroupKind::Symplectic(_) => "Sp",
            GroupKind::Unitary(_) => "U",
            GroupKind::Orthogonal(_) => "O",
        };
        write!(f, "{name}_{}({})", self.size, self.spec)?;
        if let Some(form) = self.form() {
            write!(f, "[{}]", form.matrix())?;
        }
        Ok(())
    }
}

impl Group {
    pub fn general(spec: &FieldSpec, n: usize) -> Self {
        Group { kind: GroupKind::General, size: n, spec: spec.clone() }
    }

    pub fn special(spec: &FieldSpec, n: usize) -> Self {
        Group { kind: GroupKind::Special, size: n, spec: spec.clone() }
    }

    pub fn with_form(form: FormMatrix) -> Self {
        let size = form.size();
        let spec = form.spec().clone();
        let kind = match form.kind() {
            FormKind::Alternate => GroupKind::Symplectic(form),
            FormKind::Hermitian => GroupKind::Unitary(form),
            FormKind::Symmetric => GroupKind::Orthogonal(form),
        };
        Group { kind, size, spec }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn form(&self) -> Option<&FormMatrix> {
        match &self.kind {
            GroupKind::Symplectic(f) | GroupKind::Unitary(f) | GroupKind::Orthogonal(f) => Some(f),
            _ => None,
        }
    }

    /// Checks the defining relation exactly.
    pub fn is_member(&self, t: &FieldMatrix) -> Result<bool, GroupError> {
        if t.size() != self.size || t.spec() != &self.spec {
            return Err(GroupError::SizeMismatch);
        }
        let det = t.det();
        if det == 0 {
            return Ok(false);
        }
        Ok(match &self.kind {
            GroupKind::General => true,
            GroupKind::Special => det == 1,
            GroupKind::Symplectic(f) | GroupKind::Orthogonal(f) => {
                t.mul(f.matrix())?.mul(&t.transpose())? == *f.matrix()
            }
            GroupKind::Unitary(f) => t.mul(f.matrix())?.mul(&t.transpose().conj())? == *f.matrix(),
        })
    }

    /// `|GL_n(F_q)|`, an upper bound for every group here.
    pub fn gl_order(&self) -> u128 {
        gl_order(self.spec.q() as u128, self.size as u32)
    }

    /// Every element exactly once, in lexicographic order of the entry list.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<FieldMatrix>, GroupError> {
        let estimate = match self.kind {
            GroupKind::Special => self.gl_order() / (self.spec.q() as u128 - 1),
            _ => self.gl_order(),
        };
        let space = (self.spec.q() as u128).pow((self.size * self.size) as u32);
        if estimate > cap as u128 || space > FILTER_SPACE_LIMIT as u128 {
            return Err(GroupError::CapExceeded { estimate: estimate.min(u64::MAX as u128) as u64, cap });
        }
        let values = self.spec.enumerate_raw();
        let q = values.len() as u64;
        let nn = self.size * self.size;
        let out: Vec<FieldMatrix> = (0..space as u64)
            .into_par_iter()
            .filter_map(|idx| {
                let mut entries = vec![0u32; nn];
                let mut rest = idx;
                for k in (0..nn).rev() {
                    entries[k] = values[(rest % q) as usize];
                    rest /= q;
                }
                let t = FieldMatrix { spec: self.spec.clone(), n: self.size, entries };
                self.is_member(&t).expect("sizes match").then_some(t)
            })
            .collect();
        Ok(out)
    }

    fn random_matrix(&self, rng: &mut SplitMix64) -> FieldMatrix {
        let q = self.spec.q() as u64;
        let entries = (0..self.size * self.size).map(|_| rng.below(q) as u32).collect();
        FieldMatrix { spec: self.spec.clone(), n: self.size, entries }
    }

    fn random_invertible(&self, rng: &mut SplitMix64) -> FieldMatrix {
        loop {
            let t = self.random_matrix(rng);
            if t.det() != 0 {
                return t;
            }
        }
    }

    /// One element drawn from `rng`. GL and SL are uniform; Sp/U/O use
    /// rejection from GL when the matrix space is small and random words in
    /// validated reflections or transvections otherwise (not uniform).
    pub fn random_element_with(&self, rng: &mut SplitMix64) -> Result<FieldMatrix, GroupError> {
        match &self.kind {
            GroupKind::General => Ok(self.random_invertible(rng)),
            GroupKind::Special => {
                let t = self.random_invertible(rng);
                let inv = self.spec.inv(t.det()).expect("invertible");
                Ok(t.scale_row(0, inv))
            }
            _ => {
                let space = (self.spec.q() as u128).pow((self.size * self.size) as u32);
                if space <= FILTER_SPACE_LIMIT as u128 {
                    for _ in 0..FILTER_SPACE_LIMIT {
                        let t = self.random_invertible(rng);
                        if self.is_member(&t)? {
                            return Ok(t);
                        }
                    }
                }
                self.random_word(rng)
            }
        }
    }

    /// `count` elements from one stream seeded with `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<FieldMatrix>, GroupError> {
        let mut rng = SplitMix64::new(seed);
        (0..count).map(|_| self.random_element_with(&mut rng)).collect()
    }

    fn random_word(&self, rng: &mut SplitMix64) -> Result<FieldMatrix, GroupError> {
        let mut acc = FieldMatrix::identity(&self.spec, self.size);
        let mut used = 0;
        let mut attempts = 0;
        while used < WORD_LENGTH {
            attempts += 1;
            if attempts > 64 * WORD_LENGTH {
                return Err(GroupError::BudgetExceeded);
            }
            let Some(g) = self.random_generator(rng)? else { continue };
            if !self.is_member(&g)? {
                continue;
            }
            acc = acc.mul(&g)?;
            used += 1;
        }
        Ok(acc)
    }

    /// A transvection (Sp) or reflection (O, U) built from a random vector.
    fn random_generator(&self, rng: &mut SplitMix64) -> Result<Option<FieldMatrix>, GroupError> {
        let s = &self.spec;
        let n = self.size;
        let q = s.q() as u64;
        let w: Vec<u32> = (0..n).map(|_| rng.below(q) as u32).collect();
        if w.iter().all(|&a| a == 0) {
            return Ok(None);
        }
        let form = self.form().expect("only form groups use words").matrix();
        let fw: Vec<u32> = (0..n).map(|r| (0..n).fold(0, |acc, k| s.add(acc, s.mul(form.get(r, k), w[k])))).collect();
        let outer = |coef: u32, left: &[u32], right: &[u32]| {
            let mut entries = FieldMatrix::identity(s, n).entries;
            for r in 0..n {
                for c in 0..n {
                    entries[r * n + c] = s.add(entries[r * n + c], s.mul(coef, s.mul(left[r], right[c])));
                }
            }
            FieldMatrix { spec: s.clone(), n, entries }
        };
        Ok(match &self.kind {
            // I + a K w tw
            GroupKind::Symplectic(_) => {
                let a = 1 + rng.below(q - 1) as u32;
                Some(outer(a, &fw, &w))
            }
            // I - (2 / tw A w) A w tw
            GroupKind::Orthogonal(_) => {
                let h = (0..n).fold(0, |acc, k| s.add(acc, s.mul(w[k], fw[k])));
                s.inv(h).map(|hi| outer(s.neg(s.mul(s.from_int(2), hi)), &fw, &w))
            }
            // I - c H w w*, c = (1 - l)/h with l^{r+1} = 1
            GroupKind::Unitary(_) => {
                let wc: Vec<u32> = w.iter().map(|&a| s.conj(a)).collect();
                let h = (0..n).fold(0, |acc, k| s.add(acc, s.mul(wc[k], fw[k])));
                let r = s.half_order().expect("unitary field has square order") as u64;
                let norm_one: Vec<u32> = s.enumerate_raw().into_iter().filter(|&l| l != 0 && s.pow(l, r + 1) == 1).collect();
                let l = norm_one[rng.below(norm_one.len() as u64) as usize];
                s.inv(h).map(|hi| outer(s.neg(s.mul(s.sub(1, l), hi)), &fw, &wc))
            }
            _ => None,
        })
    }
}

pub fn gl_order(q: u128, n: u32) -> u128 {
    let qn = q.pow(n);
    (0..n).map(|i| qn - q.pow(i)).product()
}

/// A matrix tagged with the group it was checked against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    matrix: FieldMatrix,
    group: Group,
}

impl GroupElement {
    pub fn new(matrix: FieldMatrix, group: &Group) -> Result<Self, GroupError> {
        if !group.is_member(&matrix)? {
            return Err(GroupError::NotMember(group.to_string()));
        }
        Ok(GroupElement { matrix, group: group.clone() })
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn group(&self) -> &Group {
        &self.group
    }
}

/// The substitution `x[i,j] -> sum_k s_i[j,k] x[i,k]`, with `mats[i-1]` acting on copy `i`.
fn linear_assignment(mats: &[&FieldMatrix], grid: VarGrid, spec: &FieldSpec) -> Result<Vec<SparsePoly>, GroupError> {
    let n = grid.n();
    let mut out = Vec::with_capacity(grid.nvars());
    for (i, sigma) in mats.iter().enumerate() {
        if sigma.size() != n || sigma.spec() != spec {
            return Err(GroupError::SizeMismatch);
        }
        for j in 0..n {
            let mut image = SparsePoly::zero(spec, grid);
            for k in 0..n {
                let c = sigma.get(j, k);
                if c != 0 {
                    image = &image + &SparsePoly::var(spec, grid, i + 1, k + 1)?.scale(c);
                }
            }
            out.push(image);
        }
    }
    Ok(out)
}

pub fn act(sigma: &FieldMatrix, f: &SparsePoly) -> Result<SparsePoly, GroupError> {
    let mats = vec![sigma; f.grid().m()];
    Ok(f.substitute(&linear_assignment(&mats, f.grid(), f.spec())?)?)
}

pub fn act_rat(sigma: &FieldMatrix, f: &RatExpr) -> Result<RatExpr, GroupError> {
    let mats = vec![sigma; f.grid().m()];
    Ok(f.substitute(&linear_assignment(&mats, f.grid(), f.spec())?)?)
}

/// Block-diagonal action: `sigmas[i]` acts on copy `i + 1`.
pub fn act_per_copy(sigmas: &[FieldMatrix], f: &RatExpr) -> Result<RatExpr, GroupError> {
    if sigmas.len() != f.grid().m() {
        return Err(GroupError::SizeMismatch);
    }
    let mats: Vec<&FieldMatrix> = sigmas.iter().collect();
    Ok(f.substitute(&linear_assignment(&mats, f.grid(), f.spec())?)?)
}
