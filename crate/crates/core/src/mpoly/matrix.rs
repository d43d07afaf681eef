use super::{PolyError, SparsePoly, VarGrid};
use crate::gf::FieldSpec;

/// Matrices up to this size use cofactor expansion; larger ones use Bareiss.
pub const COFACTOR_MAX_SIZE: usize = 4;

/// A dense rectangular matrix of polynomials sharing one field and grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    spec: FieldSpec,
    grid: VarGrid,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    /// Row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<SparsePoly>) -> Result<Self, PolyError> {
        if entries.len() != rows * cols || entries.is_empty() {
            return Err(PolyError::DimensionMismatch);
        }
        let spec = entries[0].spec().clone();
        let grid = entries[0].grid();
        for e in &entries {
            if e.spec() != &spec {
                return Err(PolyError::SpecMismatch);
            }
            if e.grid() != grid {
                return Err(PolyError::GridMismatch);
            }
        }
        Ok(PolyMatrix { rows, cols, spec, grid, entries })
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: Vec<Vec<SparsePoly>>) -> Result<Self, PolyError> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(PolyError::DimensionMismatch);
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in &columns {
                entries.push(c[r].clone());
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn from_rows(rows: Vec<Vec<SparsePoly>>) -> Result<Self, PolyError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(PolyError::DimensionMismatch);
        }
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn identity(spec: &FieldSpec, grid: VarGrid, n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { SparsePoly::one(spec, grid) } else { SparsePoly::zero(spec, grid) })
            .collect();
        PolyMatrix { rows: n, cols: n, spec: spec.clone(), grid, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn grid(&self) -> VarGrid {
        self.grid
    }

    pub fn get(&self, r: usize, c: usize) -> &SparsePoly {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: SparsePoly) {
        assert!(value.spec() == &self.spec && value.grid() == self.grid);
        self.entries[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<SparsePoly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let entries = (0..self.cols)
            .flat_map(|c| (0..self.rows).map(move |r| (r, c)))
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        PolyMatrix { rows: self.cols, cols: self.rows, spec: self.spec.clone(), grid: self.grid, entries }
    }

    pub fn map(&self, f: impl Fn(&SparsePoly) -> SparsePoly) -> Self {
        PolyMatrix { entries: self.entries.iter().map(f).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PolyError> {
        if self.cols != other.rows {
            return Err(PolyError::DimensionMismatch);
        }
        if self.spec != other.spec {
            return Err(PolyError::SpecMismatch);
        }
        if self.grid != other.grid {
            return Err(PolyError::GridMismatch);
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = SparsePoly::zero(&self.spec, self.grid);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(r, k) * other.get(k, c));
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix { rows: self.rows, cols: other.cols, spec: self.spec.clone(), grid: self.grid, entries })
    }

    fn check_square(&self) -> Result<(), PolyError> {
        if self.rows == self.cols {
            Ok(())
        } else {
            Err(PolyError::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Exact determinant: cofactor expansion up to [`COFACTOR_MAX_SIZE`], Bareiss above.
    pub fn determinant(&self) -> Result<SparsePoly, PolyError> {
        self.check_square()?;
        if self.rows <= COFACTOR_MAX_SIZE {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion along the first row.
    pub fn det_cofactor(&self) -> Result<SparsePoly, PolyError> {
        self.check_square()?;
        let cols: Vec<usize> = (0..self.cols).collect();
        Ok(self.cofactor_rec(0, &cols))
    }

    fn cofactor_rec(&self, row: usize, cols: &[usize]) -> SparsePoly {
        if cols.is_empty() {
            return SparsePoly::one(&self.spec, self.grid);
        }
        if cols.len() == 1 {
            return self.get(row, cols[0]).clone();
        }
        let mut acc = SparsePoly::zero(&self.spec, self.grid);
        for (pos, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&k| k != c).collect();
            let minor = self.cofactor_rec(row + 1, &rest);
            if minor.is_zero() {
                continue;
            }
            let term = entry * &minor;
            acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Fraction-free Gaussian elimination. Every division is exact by
    /// Sylvester's identity, so a failing division is an internal error.
    pub fn det_bareiss(&self) -> Result<SparsePoly, PolyError> {
        self.check_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(SparsePoly::one(&self.spec, self.grid));
        }
        let mut a: Vec<Vec<SparsePoly>> =
            (0..n).map(|r| (0..n).map(|c| self.get(r, c).clone()).collect()).collect();
        let mut negate = false;
        let mut prev = SparsePoly::one(&self.spec, self.grid);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return Ok(SparsePoly::zero(&self.spec, self.grid)),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
                }
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if negate { det.neg() } else { det })
    }
}
