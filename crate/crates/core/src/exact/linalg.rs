use std::fmt;

use super::{ExactError, RationalFunction, Result, VarTable};

/// Small dense square-or-rectangular matrix over rational functions.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    vars: VarTable,
    rows: usize,
    cols: usize,
    data: Vec<RationalFunction>,
}

impl Matrix {
    pub fn zeros(vars: &VarTable, rows: usize, cols: usize) -> Self {
        Matrix { vars: vars.clone(), rows, cols, data: vec![RationalFunction::zero(vars); rows * cols] }
    }

    pub fn identity(vars: &VarTable, n: usize) -> Self {
        let mut m = Self::zeros(vars, n, n);
        for i in 0..n {
            m.set(i, i, RationalFunction::one(vars));
        }
        m
    }

    pub fn diagonal(vars: &VarTable, diag: &[RationalFunction]) -> Self {
        let mut m = Self::zeros(vars, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_fn(
        vars: &VarTable,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> RationalFunction,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { vars: vars.clone(), rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RationalFunction) {
        self.data[i * self.cols + j] = v;
    }

    fn vars(&self) -> VarTable {
        self.vars.clone()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(ExactError::VarTableMismatch);
        }
        let vars = self.vars();
        let mut out = Matrix::zeros(&vars, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).try_add(&a.try_mul(b)?)?;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RationalFunction) -> Matrix {
        Matrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            vars: self.vars.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let vars = self.vars();
        let mut m = Matrix::zeros(&vars, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Kronecker product, row index `i * other.rows + k`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let vars = self.vars();
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut m = Matrix::zeros(&vars, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        m
    }

    /// Determinant by Gaussian elimination over the function field.
    pub fn det(&self) -> Result<RationalFunction> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let vars = self.vars();
        let mut a = self.data.clone();
        let mut det = RationalFunction::one(&vars);
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return Ok(RationalFunction::zero(&vars));
            };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pivot = a[col * n + col].clone();
            det = det.try_mul(&pivot)?;
            let pinv = pivot.inv()?;
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let f = a[r * n + col].try_mul(&pinv)?.reduce();
                for j in col..n {
                    if !a[col * n + j].is_zero() {
                        a[r * n + j] = a[r * n + j].try_sub(&f.try_mul(&a[col * n + j])?)?.reduce();
                    }
                }
            }
        }
        Ok(det.reduce())
    }

    /// `det(1 - scalar * self)` by dense elimination.
    pub fn det_one_minus(&self, scalar: &RationalFunction) -> Result<RationalFunction> {
        let vars = self.vars();
        Matrix::identity(&vars, self.rows).sub(&self.scale(scalar)).det()
    }

    /// For a monomial matrix (at most one nonzero entry per row and column),
    /// the factors `1 - scalar^L * w` of `det(1 - scalar * self)`, one per
    /// cycle of length `L` and weight `w`. `None` if the matrix is not
    /// monomial.
    pub fn det_one_minus_factors(&self, scalar: &RationalFunction) -> Option<Vec<RationalFunction>> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        // image[j] = (i, entry) with entry = self[i][j] != 0
        let mut image: Vec<Option<usize>> = vec![None; n];
        let mut row_used = vec![false; n];
        for j in 0..n {
            for i in 0..n {
                if !self.get(i, j).is_zero() {
                    if image[j].is_some() || row_used[i] {
                        return None;
                    }
                    image[j] = Some(i);
                    row_used[i] = true;
                }
            }
        }
        let vars = self.vars();
        let one = RationalFunction::one(&vars);
        let mut seen = vec![false; n];
        let mut factors = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut j = start;
            let mut weight = one.clone();
            let mut len = 0;
            let closed = loop {
                seen[j] = true;
                let Some(i) = image[j] else { break false };
                weight = &weight * self.get(i, j);
                len += 1;
                if i == start {
                    break true;
                }
                if seen[i] {
                    break false;
                }
                j = i;
            };
            if closed {
                let s = scalar.powi(len).ok()?;
                factors.push(&one - &(&s * &weight));
            }
        }
        Some(factors)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}
