//! Rational expressions `num/den` over [`SparsePoly`], never reduced.
//!
//! Equality is semantic: exact by cross-multiplication, or probabilistic by
//! evaluation at random points of an extension field large enough for the
//! Schwartz-Zippel bound.

use std::fmt;

use crate::gf::{make_field, FieldError, FieldSpec, DEFAULT_FIELD_CAP};
use crate::mpoly::{PolyError, SparsePoly, VarGrid};
use crate::report::Method;
use crate::rng::SplitMix64;

/// Cross-multiplied term-count estimate above which [`equal_auto`] samples.
pub const EXACT_TERM_THRESHOLD: usize = 1_000_000;

/// Default number of evaluation trials for probabilistic equality.
pub const DEFAULT_TRIALS: u32 = 20;

/// Attempts per trial at drawing a point where no denominator vanishes.
const POINT_ATTEMPTS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RatError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("no extension field below the cap {cap} exceeds 4 * {bound}")]
    DegreeBoundOverflow { bound: u64, cap: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct RatExpr {
    num: SparsePoly,
    den: SparsePoly,
}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatExpr({self})")
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl RatExpr {
    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<Self, RatError> {
        if den.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        if num.spec() != den.spec() {
            return Err(PolyError::SpecMismatch.into());
        }
        if num.grid() != den.grid() {
            return Err(PolyError::GridMismatch.into());
        }
        Ok(RatExpr { num, den })
    }

    pub fn from_poly(f: SparsePoly) -> Self {
        let den = SparsePoly::one(f.spec(), f.grid());
        RatExpr { num: f, den }
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    pub fn spec(&self) -> &FieldSpec {
        self.num.spec()
    }

    pub fn grid(&self) -> VarGrid {
        self.num.grid()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RatError> {
        if self.den == other.den {
            return Ok(RatExpr { num: self.num.checked_add(&other.num)?, den: self.den.clone() });
        }
        let num = self.num.checked_mul(&other.den)?.checked_add(&other.num.checked_mul(&self.den)?)?;
        Ok(RatExpr { num, den: self.den.checked_mul(&other.den)? })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RatError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RatError> {
        Ok(RatExpr { num: self.num.checked_mul(&other.num)?, den: self.den.checked_mul(&other.den)? })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, RatError> {
        if other.num.is_zero() {
            return Err(RatError::ZeroDenominator);
        }
        Ok(RatExpr { num: self.num.checked_mul(&other.den)?, den: self.den.checked_mul(&other.num)? })
    }

    pub fn neg(&self) -> Self {
        RatExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn pow(&self, k: u64) -> Self {
        RatExpr { num: self.num.pow(k), den: self.den.pow(k) }
    }

    /// `self^{q^k}`, term-wise on both parts.
    pub fn frobenius_power(&self, k: u32) -> Self {
        RatExpr { num: self.num.frobenius_power_poly(k), den: self.den.frobenius_power_poly(k) }
    }

    /// Applies a substitution to both parts.
    pub fn substitute(&self, assignment: &[SparsePoly]) -> Result<Self, RatError> {
        RatExpr::new(self.num.substitute(assignment)?, self.den.substitute(assignment)?)
    }

    /// Largest total degree among numerator and denominator.
    pub fn degree_bound(&self) -> u64 {
        self.num.total_degree().unwrap_or(0).max(self.den.total_degree().unwrap_or(0))
    }

    /// `a.num * b.den == b.num * a.den` as polynomials.
    pub fn equal_exact(&self, other: &Self) -> Result<bool, RatError> {
        Ok(self.num.checked_mul(&other.den)? == other.num.checked_mul(&self.den)?)
    }

    /// The polynomial this expression equals, when the division is exact.
    pub fn as_polynomial(&self) -> Option<SparsePoly> {
        self.num.exact_div(&self.den).ok()
    }

    /// The constant value (raw) when `num = c * den`.
    pub fn constant_value(&self) -> Option<u32> {
        if self.num.is_zero() {
            return Some(0);
        }
        let (nm, nc) = self.num.leading_term()?;
        let (dm, dc) = self.den.leading_term()?;
        if nm != dm {
            return None;
        }
        let c = self.spec().mul(nc, self.spec().inv(dc)?);
        (self.den.scale(c) == self.num).then_some(c)
    }

    fn cross_terms(&self, other: &Self) -> usize {
        self.num.num_terms() * other.den.num_terms() + other.num.num_terms() * self.den.num_terms()
    }
}

macro_rules! forward_rat_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&RatExpr> for &RatExpr {
            type Output = RatExpr;
            fn $method(self, rhs: &RatExpr) -> RatExpr {
                self.$checked(rhs).expect("expressions from different rings")
            }
        }
    };
}

forward_rat_op!(Add, add, checked_add);
forward_rat_op!(Sub, sub, checked_sub);
forward_rat_op!(Mul, mul, checked_mul);

/// A field `F_{p^{e s}}` holding a copy of `F_{p^e}`, used as evaluation domain.
#[derive(Debug, Clone)]
pub struct Extension {
    base: FieldSpec,
    big: FieldSpec,
    image: Vec<u32>,
}

impl Extension {
    /// Smallest extension with more than `4 * bound` elements.
    pub fn for_degree_bound(base: &FieldSpec, bound: u64) -> Result<Self, RatError> {
        let target = 4u128 * bound.max(1) as u128;
        let q = base.q() as u128;
        let mut s = 1u32;
        let mut order = q;
        while order <= target {
            s += 1;
            order *= q;
            if order > DEFAULT_FIELD_CAP as u128 {
                return Err(RatError::DegreeBoundOverflow { bound, cap: DEFAULT_FIELD_CAP });
            }
        }
        Self::with_degree(base, s)
    }

    /// `F_{p^{e s}}` with the embedding sending `t` to a root of the base modulus.
    pub fn with_degree(base: &FieldSpec, s: u32) -> Result<Self, RatError> {
        let big = make_field(base.p() as u64, base.e() * s)?;
        let image = if base.e() == 1 {
            (0..base.q()).collect()
        } else {
            let modulus: Vec<u32> = base.modulus().to_vec();
            let root = big
                .enumerate_raw()
                .into_iter()
                .find(|&a| {
                    modulus.iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, a), c)) == 0
                })
                .expect("base field embeds in its extension");
            (0..base.q())
                .map(|raw| {
                    base.coeffs(raw).iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, root), c))
                })
                .collect()
        };
        Ok(Extension { base: base.clone(), big, image })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn big(&self) -> &FieldSpec {
        &self.big
    }

    pub fn embed(&self, raw: u32) -> u32 {
        self.image[raw as usize]
    }

    /// Evaluates a base-field polynomial at a point of the big field.
    pub fn eval(&self, f: &SparsePoly, point: &[u32]) -> u32 {
        let big = &self.big;
        let mut total = 0;
        for (m, c) in f.raw_terms() {
            let mut t = self.embed(c);
            for (&x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = big.mul(t, big.pow(x, e));
                    if t == 0 {
                        break;
                    }
                }
            }
            total = big.add(total, t);
        }
        total
    }

    /// `num/den` at `point`, or `None` where the denominator vanishes.
    pub fn eval_rat(&self, r: &RatExpr, point: &[u32]) -> Option<u32> {
        let d = self.eval(&r.den, point);
        let inv = self.big.inv(d)?;
        Some(self.big.mul(self.eval(&r.num, point), inv))
    }

    pub fn random_point(&self, rng: &mut SplitMix64, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|_| rng.below(self.big.q() as u64) as u32).collect()
    }

    pub fn format_point(&self, grid: VarGrid, point: &[u32]) -> String {
        let coords: Vec<String> = point
            .iter()
            .enumerate()
            .map(|(v, &x)| {
                let (i, j) = grid.var_of(v);
                format!("x[{i},{j}]={}", self.big.format_raw(x))
            })
            .collect();
        format!("{} in {}", coords.join(", "), self.big)
    }
}

/// Result of [`equal_probabilistic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbOutcome {
    pub equal: bool,
    /// Rendered point where the sides differ.
    pub witness: Option<String>,
    /// Trials that found no point with nonvanishing denominators.
    pub skipped: u32,
    pub trials: u32,
}

/// Schwartz-Zippel comparison. Trial `t` draws from `SplitMix64::for_trial(seed, t)`;
/// points where a denominator vanishes are redrawn, never evaluated.
pub fn equal_probabilistic(a: &RatExpr, b: &RatExpr, trials: u32, seed: u64) -> Result<ProbOutcome, RatError> {
    if a.spec() != b.spec() {
        return Err(PolyError::SpecMismatch.into());
    }
    if a.grid() != b.grid() {
        return Err(PolyError::GridMismatch.into());
    }
    let deg = |f: &SparsePoly| f.total_degree().unwrap_or(0);
    let bound = (deg(&a.num) + deg(&b.den))
        .max(deg(&b.num) + deg(&a.den))
        .max(deg(&a.den) + deg(&b.den));
    let ext = Extension::for_degree_bound(a.spec(), bound)?;
    let nvars = a.grid().nvars();
    let mut skipped = 0;
    for t in 0..trials {
        let mut rng = SplitMix64::for_trial(seed, t as u64);
        let mut found = None;
        for _ in 0..POINT_ATTEMPTS {
            let point = ext.random_point(&mut rng, nvars);
            if let (Some(va), Some(vb)) = (ext.eval_rat(a, &point), ext.eval_rat(b, &point)) {
                found = Some((point, va, vb));
                break;
            }
        }
        match found {
            None => skipped += 1,
            Some((point, va, vb)) if va != vb => {
                return Ok(ProbOutcome {
                    equal: false,
                    witness: Some(ext.format_point(a.grid(), &point)),
                    skipped,
                    trials,
                });
            }
            Some(_) => {}
        }
    }
    Ok(ProbOutcome { equal: true, witness: None, skipped, trials })
}

/// Outcome of [`equal_auto`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoOutcome {
    pub method: Method,
    pub equal: bool,
    pub witness: Option<String>,
}

/// Exact comparison when the cross-multiplied term-count estimate is at most
/// `term_threshold`, otherwise probabilistic with `trials` trials.
pub fn equal_auto(
    a: &RatExpr,
    b: &RatExpr,
    term_threshold: usize,
    trials: u32,
    seed: u64,
) -> Result<AutoOutcome, RatError> {
    if a.cross_terms(b) <= term_threshold {
        Ok(AutoOutcome { method: Method::Exact, equal: a.equal_exact(b)?, witness: None })
    } else {
        let out = equal_probabilistic(a, b, trials, seed)?;
        Ok(AutoOutcome { method: Method::Probabilistic, equal: out.equal, witness: out.witness })
    }
}
