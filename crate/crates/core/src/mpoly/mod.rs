//! Sparse multivariate polynomials over a [`FieldSpec`] in the grid variables
//! `x[i,j]` (`i` = copy of `W`, `j` = coordinate), with exact division,
//! substitution and polynomial matrices.

mod matrix;
mod text;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gf::{FieldElement, FieldSpec};

pub use matrix::{PolyMatrix, COFACTOR_MAX_SIZE};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("grid must have m >= 1 and n >= 1 (got {m}x{n})")]
    InvalidGrid { m: usize, n: usize },
    #[error("exponent vector has {got} entries, grid has {expected} variables")]
    BadExponentArity { expected: usize, got: usize },
    #[error("operands live in different fields")]
    SpecMismatch,
    #[error("operands live on different variable grids")]
    GridMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("divisor does not divide the dividend")]
    NotDivisible,
    #[error("assignment has {got} entries, {expected} variables need a value")]
    MissingAssignment { expected: usize, got: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("variable x[{i},{j}] is outside the grid")]
    IndexOutOfRange { i: usize, j: usize },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// The variable set `{x[i,j] | 1 <= i <= m, 1 <= j <= n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarGrid {
    m: usize,
    n: usize,
}

impl VarGrid {
    pub fn new(m: usize, n: usize) -> Result<Self, PolyError> {
        if m == 0 || n == 0 {
            return Err(PolyError::InvalidGrid { m, n });
        }
        Ok(VarGrid { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.m * self.n
    }

    /// Flat index of `x[i,j]` (1-based indices, row-major over copies).
    pub fn index(&self, i: usize, j: usize) -> Result<usize, PolyError> {
        if i == 0 || j == 0 || i > self.m || j > self.n {
            return Err(PolyError::IndexOutOfRange { i, j });
        }
        Ok((i - 1) * self.n + (j - 1))
    }

    /// Inverse of [`VarGrid::index`].
    pub fn var_of(&self, idx: usize) -> (usize, usize) {
        (idx / self.n + 1, idx % self.n + 1)
    }
}

/// Exponent vector, ordered graded reverse-lexicographically with variables
/// ordered by `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u64]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u64>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u64] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, assuming `other` divides `self`.
    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Equal degree: the smaller exponent in the last differing variable wins.
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `F[x[i,j]]`. Terms are kept in a map ordered by [`Monomial`];
/// zero coefficients are never stored. Coefficients are raw field values of
/// `spec`.
#[derive(Clone)]
pub struct SparsePoly {
    spec: FieldSpec,
    grid: VarGrid,
    terms: BTreeMap<Monomial, u32>,
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.grid == other.grid && self.terms == other.terms
    }
}

impl Eq for SparsePoly {}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({})", self)
    }
}

fn accumulate(spec: &FieldSpec, acc: &mut HashMap<Monomial, u32>, mono: Monomial, c: u32) {
    if c == 0 {
        return;
    }
    let entry = acc.entry(mono).or_insert(0);
    *entry = spec.add(*entry, c);
}

impl SparsePoly {
    pub fn zero(spec: &FieldSpec, grid: VarGrid) -> Self {
        SparsePoly { spec: spec.clone(), grid, terms: BTreeMap::new() }
    }

    pub fn constant(spec: &FieldSpec, grid: VarGrid, raw: u32) -> Self {
        let mut p = Self::zero(spec, grid);
        if raw != 0 {
            p.terms.insert(Monomial::one(grid.nvars()), raw);
        }
        p
    }

    pub fn one(spec: &FieldSpec, grid: VarGrid) -> Self {
        Self::constant(spec, grid, 1)
    }

    /// `x[i,j]^exp`.
    pub fn var_pow(spec: &FieldSpec, grid: VarGrid, i: usize, j: usize, exp: u64) -> Result<Self, PolyError> {
        let idx = grid.index(i, j)?;
        let mut exps = vec![0; grid.nvars()];
        exps[idx] = exp;
        let mut p = Self::zero(spec, grid);
        p.terms.insert(Monomial::from_exponents(exps), 1);
        Ok(p)
    }

    pub fn var(spec: &FieldSpec, grid: VarGrid, i: usize, j: usize) -> Result<Self, PolyError> {
        Self::var_pow(spec, grid, i, j, 1)
    }

    /// The column `X_copy^{exp} = (x[copy,1]^exp, ..., x[copy,n]^exp)`.
    pub fn column(spec: &FieldSpec, grid: VarGrid, copy: usize, exp: u64) -> Result<Vec<Self>, PolyError> {
        (1..=grid.n()).map(|j| Self::var_pow(spec, grid, copy, j, exp)).collect()
    }

    /// Builds a polynomial from `(coefficient, exponent vector)` pairs, merging
    /// duplicates and dropping zeros.
    pub fn build(spec: &FieldSpec, grid: VarGrid, terms: &[(FieldElement, Vec<u64>)]) -> Result<Self, PolyError> {
        let mut acc = HashMap::new();
        for (c, exps) in terms {
            if c.spec() != spec {
                return Err(PolyError::SpecMismatch);
            }
            if exps.len() != grid.nvars() {
                return Err(PolyError::BadExponentArity { expected: grid.nvars(), got: exps.len() });
            }
            accumulate(spec, &mut acc, Monomial::from_exponents(exps.clone()), c.raw());
        }
        Ok(Self::from_map(spec, grid, acc))
    }

    fn from_map(spec: &FieldSpec, grid: VarGrid, acc: HashMap<Monomial, u32>) -> Self {
        SparsePoly { spec: spec.clone(), grid, terms: acc.into_iter().filter(|(_, c)| *c != 0).collect() }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn grid(&self) -> VarGrid {
        self.grid
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical order (descending grevlex), raw coefficients.
    pub fn raw_terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FieldElement)> + '_ {
        self.raw_terms().map(|(m, c)| (m, self.spec.element(c)))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u32)> {
        self.terms.iter().next_back().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, exps: &[u64]) -> u32 {
        self.terms.get(&Monomial::from_exponents(exps.to_vec())).copied().unwrap_or(0)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<u32> {
        if self.is_zero() {
            Some(0)
        } else if self.is_constant() {
            self.leading_term().map(|(_, c)| c)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.spec != other.spec {
            Err(PolyError::SpecMismatch)
        } else if self.grid != other.grid {
            Err(PolyError::GridMismatch)
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        for (m, &c) in &other.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    *v = self.spec.add(*v, c);
                    if *v == 0 {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c);
                }
            }
        }
        Ok(SparsePoly { spec: self.spec.clone(), grid: self.grid, terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.spec, self.grid));
        }
        let mut acc = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                accumulate(&self.spec, &mut acc, ma.mul(mb), self.spec.mul(ca, cb));
            }
        }
        Ok(Self::from_map(&self.spec, self.grid, acc))
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| self.spec.neg(c))
    }

    /// Multiplies every coefficient by the raw field value `c`.
    pub fn scale(&self, c: u32) -> Self {
        if c == 0 {
            return Self::zero(&self.spec, self.grid);
        }
        self.map_coefficients(|v| self.spec.mul(v, c))
    }

    fn map_coefficients(&self, f: impl Fn(u32) -> u32) -> Self {
        SparsePoly {
            spec: self.spec.clone(),
            grid: self.grid,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f(c))).filter(|(_, c)| *c != 0).collect(),
        }
    }

    /// `self^{p^k}`, computed term-wise: in characteristic `p` the map is additive.
    pub fn frobenius_p(&self, k: u32) -> Self {
        if k == 0 {
            return self.clone();
        }
        let factor = (self.spec.p() as u64).pow(k);
        SparsePoly {
            spec: self.spec.clone(),
            grid: self.grid,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| {
                    let exps = m.0.iter().map(|&e| e.checked_mul(factor).expect("exponent overflow")).collect();
                    (Monomial(exps), self.spec.frob_p(c, k as u64))
                })
                .collect(),
        }
    }

    /// `self^{q^k}` with `q` the field order.
    pub fn frobenius_power_poly(&self, k: u32) -> Self {
        self.frobenius_p(k * self.spec.e())
    }

    /// `self^k`, splitting `k` into base-`p` digits so that `p`-th powers are free.
    pub fn pow(&self, k: u64) -> Self {
        let p = self.spec.p() as u64;
        let mut result = Self::one(&self.spec, self.grid);
        let mut rest = k;
        let mut place = 0u32;
        let mut small: Vec<SparsePoly> = vec![Self::one(&self.spec, self.grid)];
        while rest > 0 {
            let digit = (rest % p) as usize;
            if digit > 0 {
                while small.len() <= digit {
                    let next = small.last().unwrap() * self;
                    small.push(next);
                }
                result = &result * &small[digit].frobenius_p(place);
            }
            rest /= p;
            place += 1;
        }
        result
    }

    /// Formal partial derivative with respect to the flat variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let p = self.spec.p() as u64;
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            let e = m.0[var];
            if e % p == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            let coef = self.spec.mul(c, (e % p) as u32);
            terms.insert(Monomial(exps), coef);
        }
        SparsePoly { spec: self.spec.clone(), grid: self.grid, terms }
    }

    /// Exact quotient `self / divisor` by multivariate reduction against the
    /// leading term of the divisor; the remainder must vanish.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.compatible(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = self.spec.inv(lead_c).expect("leading coefficient is nonzero");
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, &c)) = rem.iter().next_back() {
            if !lead_m.divides(m) {
                return Err(PolyError::NotDivisible);
            }
            let qm = m.div(lead_m);
            let qc = self.spec.mul(c, lead_inv);
            for (dm, &dc) in &divisor.terms {
                let target = dm.mul(&qm);
                let sub = self.spec.mul(qc, dc);
                let v = rem.get(&target).copied().unwrap_or(0);
                let nv = self.spec.sub(v, sub);
                if nv == 0 {
                    rem.remove(&target);
                } else {
                    rem.insert(target, nv);
                }
            }
            quot.insert(qm, qc);
        }
        Ok(SparsePoly { spec: self.spec.clone(), grid: self.grid, terms: quot })
    }

    /// Ring homomorphism sending the flat variable `v` to `assignment[v]`.
    /// The image lives on the assignment's grid.
    pub fn substitute(&self, assignment: &[SparsePoly]) -> Result<SparsePoly, PolyError> {
        let nvars = self.grid.nvars();
        if assignment.len() != nvars {
            return Err(PolyError::MissingAssignment { expected: nvars, got: assignment.len() });
        }
        let target_grid = assignment[0].grid;
        for a in assignment {
            if a.spec != self.spec {
                return Err(PolyError::SpecMismatch);
            }
            if a.grid != target_grid {
                return Err(PolyError::GridMismatch);
            }
        }
        let mut powers: Vec<HashMap<u64, SparsePoly>> = vec![HashMap::new(); nvars];
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, &c) in &self.terms {
            let mut term = SparsePoly::constant(&self.spec, target_grid, c);
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers[v].entry(e).or_insert_with(|| assignment[v].pow(e));
                term = &term * pw;
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                accumulate(&self.spec, &mut acc, tm, tc);
            }
        }
        Ok(SparsePoly::from_map(&self.spec, target_grid, acc))
    }

    /// Evaluates at a point given as raw values of `spec`, one per flat variable.
    pub fn evaluate_raw(&self, point: &[u32]) -> Result<u32, PolyError> {
        if point.len() != self.grid.nvars() {
            return Err(PolyError::MissingAssignment { expected: self.grid.nvars(), got: point.len() });
        }
        let s = &self.spec;
        let mut total = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t = s.mul(t, s.pow(x, e));
                }
            }
            total = s.add(total, t);
        }
        Ok(total)
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement, PolyError> {
        if point.iter().any(|x| x.spec() != &self.spec) {
            return Err(PolyError::SpecMismatch);
        }
        let raw: Vec<u32> = point.iter().map(FieldElement::raw).collect();
        Ok(self.spec.element(self.evaluate_raw(&raw)?))
    }

    /// Re-homes the polynomial on a grid with the same number of columns and
    /// at least as many copies (variables keep their `(i, j)` names).
    pub fn embed_in_grid(&self, grid: VarGrid) -> Result<SparsePoly, PolyError> {
        if grid.n != self.grid.n || grid.m < self.grid.m {
            return Err(PolyError::GridMismatch);
        }
        let extra = grid.nvars() - self.grid.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let mut exps = m.0.to_vec();
                exps.extend(std::iter::repeat(0).take(extra));
                (Monomial::from_exponents(exps), c)
            })
            .collect();
        Ok(SparsePoly { spec: self.spec.clone(), grid, terms })
    }

    /// Sends every coefficient through `f` into `target` (used for field embeddings).
    pub fn map_into_field(&self, target: &FieldSpec, f: impl Fn(u32) -> u32) -> SparsePoly {
        SparsePoly {
            spec: target.clone(),
            grid: self.grid,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f(c))).filter(|(_, c)| *c != 0).collect(),
        }
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&SparsePoly> for &SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: &SparsePoly) -> SparsePoly {
                self.$checked(rhs).expect("polynomials from different rings")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl std::ops::Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn grid(m: usize, n: usize) -> VarGrid {
        VarGrid::new(m, n).unwrap()
    }

    fn x(spec: &FieldSpec, g: VarGrid, i: usize, j: usize) -> SparsePoly {
        SparsePoly::var(spec, g, i, j).unwrap()
    }

    #[test]
    fn build_merges_and_drops() {
        let f2 = make_field(2, 1).unwrap();
        let g = grid(1, 2);
        assert!(SparsePoly::build(&f2, g, &[]).unwrap().is_zero());
        let one = f2.one();
        let p = SparsePoly::build(&f2, g, &[(one.clone(), vec![1, 0]), (one.clone(), vec![1, 0])]).unwrap();
        assert!(p.is_zero());
        let f3 = make_field(3, 1).unwrap();
        let p = SparsePoly::build(&f3, g, &[(f3.element(2), vec![2, 0]), (f3.one(), vec![0, 1])]).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(
            SparsePoly::build(&f3, g, &[(f3.one(), vec![1])]).unwrap_err(),
            PolyError::BadExponentArity { expected: 2, got: 1 }
        );
        assert_eq!(SparsePoly::build(&f3, g, &[(f2.one(), vec![1, 0])]).unwrap_err(), PolyError::SpecMismatch);
    }

    #[test]
    fn grevlex_order() {
        // x11^2*x12 > x11*x12^2 (smaller exponent in the last variable wins)
        let a = Monomial::from_exponents(vec![2, 1]);
        let b = Monomial::from_exponents(vec![1, 2]);
        assert!(a > b);
        let c = Monomial::from_exponents(vec![0, 4]);
        assert!(c > a);
        // grevlex: x1*x3 < x2^2 for three variables
        let d = Monomial::from_exponents(vec![1, 0, 1]);
        let e = Monomial::from_exponents(vec![0, 2, 0]);
        assert!(d < e);
    }

    #[test]
    fn freshman_dream_and_cross_terms() {
        let f2 = make_field(2, 1).unwrap();
        let g = grid(1, 2);
        let s = &x(&f2, g, 1, 1) + &x(&f2, g, 1, 2);
        let sq = &s * &s;
        let expect = &SparsePoly::var_pow(&f2, g, 1, 1, 2).unwrap() + &SparsePoly::var_pow(&f2, g, 1, 2, 2).unwrap();
        assert_eq!(sq, expect);

        let f3 = make_field(3, 1).unwrap();
        let g = grid(2, 1);
        let a = &x(&f3, g, 1, 1) + &x(&f3, g, 2, 1);
        let b = &x(&f3, g, 1, 1) + &x(&f3, g, 2, 1).scale(2);
        let prod = &a * &b;
        let expect = &SparsePoly::var_pow(&f3, g, 1, 1, 2).unwrap() + &SparsePoly::var_pow(&f3, g, 2, 1, 2).unwrap().scale(2);
        assert_eq!(prod, expect);
        assert_eq!(&a * &SparsePoly::one(&f3, g), a);
    }

    #[test]
    fn frobenius_matches_repeated_multiplication() {
        let f3 = make_field(3, 1).unwrap();
        let g = grid(1, 2);
        let f = &(&x(&f3, g, 1, 1) + &x(&f3, g, 1, 2).scale(2)) * &x(&f3, g, 1, 2);
        let f = &f + &SparsePoly::one(&f3, g);
        assert_eq!(f.frobenius_power_poly(0), f);
        assert_eq!(f.frobenius_power_poly(1), &(&f * &f) * &f);
        assert_eq!(f.pow(7), &f.pow(3) * &f.pow(4));
        assert_eq!(f.pow(0), SparsePoly::one(&f3, g));
    }

    #[test]
    fn exact_division() {
        let f3 = make_field(3, 1).unwrap();
        let g = grid(1, 2);
        let a = &x(&f3, g, 1, 1) + &x(&f3, g, 1, 2).scale(2);
        let b = &(&x(&f3, g, 1, 1) * &x(&f3, g, 1, 2)) + &SparsePoly::one(&f3, g);
        assert_eq!((&a * &b).exact_div(&a).unwrap(), b);
        assert_eq!(a.exact_div(&a).unwrap(), SparsePoly::one(&f3, g));
        assert_eq!(x(&f3, g, 1, 1).exact_div(&x(&f3, g, 1, 2)).unwrap_err(), PolyError::NotDivisible);
        assert_eq!(a.exact_div(&SparsePoly::zero(&f3, g)).unwrap_err(), PolyError::DivisionByZero);
        let near = &(&a * &b) + &SparsePoly::one(&f3, g);
        assert_eq!(near.exact_div(&a).unwrap_err(), PolyError::NotDivisible);
    }

    #[test]
    fn substitution_and_evaluation() {
        let f2 = make_field(2, 1).unwrap();
        let g = grid(1, 2);
        let f = &(&x(&f2, g, 1, 1) * &x(&f2, g, 1, 2)) + &SparsePoly::one(&f2, g);
        let ident = vec![x(&f2, g, 1, 1), x(&f2, g, 1, 2)];
        assert_eq!(f.substitute(&ident).unwrap(), f);
        assert_eq!(f.evaluate_raw(&[1, 1]).unwrap(), 0);
        assert_eq!(f.evaluate_raw(&[1, 0]).unwrap(), 1);
        assert!(matches!(f.substitute(&ident[..1]), Err(PolyError::MissingAssignment { .. })));
        // variable-wise q-th powers equal the Frobenius over F_q
        let f = &f + &x(&f2, g, 1, 1);
        let qth: Vec<SparsePoly> = (1..=2).map(|j| SparsePoly::var_pow(&f2, g, 1, j, 2).unwrap()).collect();
        assert_eq!(f.substitute(&qth).unwrap(), f.frobenius_power_poly(1));
    }

    #[test]
    fn derivative_kills_p_multiples() {
        let f3 = make_field(3, 1).unwrap();
        let g = grid(1, 1);
        let f = &SparsePoly::var_pow(&f3, g, 1, 1, 3).unwrap() + &SparsePoly::var_pow(&f3, g, 1, 1, 2).unwrap();
        assert_eq!(f.derivative(0), x(&f3, g, 1, 1).scale(2));
    }

    #[test]
    fn embed_keeps_names() {
        let f2 = make_field(2, 1).unwrap();
        let small = grid(2, 2);
        let big = grid(3, 2);
        let p = x(&f2, small, 2, 1);
        assert_eq!(p.embed_in_grid(big).unwrap(), x(&f2, big, 2, 1));
        assert!(p.embed_in_grid(grid(3, 3)).is_err());
    }
}
