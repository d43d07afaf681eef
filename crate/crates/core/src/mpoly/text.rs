//! Canonical text form: terms in descending grevlex order joined by `" + "`,
//! each term `c*x[i,j]^e*...` with `^1` and unit coefficients elided.
//! Coefficients outside the prime subfield of an extension are parenthesized,
//! e.g. `(1+t)*x[1,1]`.

use std::fmt;

use super::{accumulate, Monomial, PolyError, SparsePoly, VarGrid};
use crate::gf::FieldSpec;
use std::collections::HashMap;

impl SparsePoly {
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    fn format_coefficient(&self, c: u32) -> String {
        let s = self.spec.format_raw(c);
        if self.spec.in_prime_subfield(c) {
            s
        } else {
            format!("({s})")
        }
    }

    /// Parses the canonical form (and any reordering of it).
    pub fn parse(spec: &FieldSpec, grid: VarGrid, text: &str) -> Result<SparsePoly, PolyError> {
        let err = |msg: &str| PolyError::Parse(format!("{msg} in `{text}`"));
        let text = text.trim();
        if text.is_empty() {
            return Err(err("empty input"));
        }
        let mut acc = HashMap::new();
        for term in split_top_level(text, '+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(err("empty term"));
            }
            let mut coef = 1u32;
            let mut exps = vec![0u64; grid.nvars()];
            for factor in split_top_level(term, '*') {
                let factor = factor.trim();
                if let Some(rest) = factor.strip_prefix("x[") {
                    let (inside, power) = rest.split_once(']').ok_or_else(|| err("unterminated variable"))?;
                    let (i, j) = inside.split_once(',').ok_or_else(|| err("malformed variable"))?;
                    let i: usize = i.trim().parse().map_err(|_| err("bad copy index"))?;
                    let j: usize = j.trim().parse().map_err(|_| err("bad coordinate index"))?;
                    let e: u64 = match power.strip_prefix('^') {
                        Some(e) => e.parse().map_err(|_| err("bad exponent"))?,
                        None if power.is_empty() => 1,
                        None => return Err(err("trailing characters after variable")),
                    };
                    exps[grid.index(i, j)?] += e;
                } else {
                    let v = spec.parse_raw(factor).map_err(|_| err("bad coefficient"))?;
                    coef = spec.mul(coef, v);
                }
            }
            accumulate(spec, &mut acc, Monomial::from_exponents(exps), coef);
        }
        Ok(SparsePoly::from_map(spec, grid, acc))
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (idx, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..idx]);
                start = idx + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.raw_terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let (i, j) = self.grid.var_of(v);
                    if e == 1 {
                        format!("x[{i},{j}]")
                    } else {
                        format!("x[{i},{j}]^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                f.write_str(&self.format_coefficient(c))?;
            } else if c == 1 {
                f.write_str(&factors.join("*"))?;
            } else {
                write!(f, "{}*{}", self.format_coefficient(c), factors.join("*"))?;
            }
        }
        Ok(())
    }
}
