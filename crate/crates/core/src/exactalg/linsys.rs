use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Dense matrix of rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<Rational>>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![Rational::zero(); cols]; rows],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::MalformedSystem("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| super::int(v)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r][c]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out.data[j][i] = v.clone();
            }
        }
        out
    }
}

/// Exact rank by Gaussian elimination.
pub fn rank(m: &Matrix) -> usize {
    let mut red = RowReducer::new(m.cols);
    for row in &m.data {
        red.add_row(row.clone(), Rational::zero());
    }
    red.rank()
}

/// `matrix * v = rhs`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: Matrix,
    pub rhs: Vec<Rational>,
}

/// A particular solution (free coordinates set to zero) plus a null-space
/// basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<Rational>,
    pub null_basis: Vec<Vec<Rational>>,
    pub rank: usize,
}

impl Solution {
    pub fn nullity(&self) -> usize {
        self.null_basis.len()
    }
}

impl LinearSystem {
    pub fn new(matrix: Matrix, rhs: Vec<Rational>) -> Result<Self> {
        if rhs.len() != matrix.rows {
            return Err(Error::MalformedSystem(format!(
                "{} rows but {} right-hand-side entries",
                matrix.rows,
                rhs.len()
            )));
        }
        Ok(LinearSystem { matrix, rhs })
    }

    /// Exact solve. `Ok(None)` means the system is inconsistent.
    pub fn solve_exact(&self) -> Result<Option<Solution>> {
        if self.rhs.len() != self.matrix.rows {
            return Err(Error::MalformedSystem("dimension mismatch".into()));
        }
        let mut red = RowReducer::new(self.matrix.cols);
        for (row, b) in self.matrix.data.iter().zip(&self.rhs) {
            if row.len() != self.matrix.cols {
                return Err(Error::MalformedSystem("ragged rows".into()));
            }
            red.add_row(row.clone(), b.clone());
        }
        Ok(red.solution())
    }
}

/// Outcome of feeding one equation to a [`RowReducer`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOutcome {
    Independent,
    Dependent,
    Inconsistent,
}

/// Incremental reduced row echelon form of an augmented system. Pivot
/// columns are chosen as the first nonzero column of each reduced row, so
/// the final form (and the particular solution) does not depend on the
/// order in which equations arrive.
#[derive(Clone, Debug)]
pub struct RowReducer {
    cols: usize,
    // (pivot column, coefficients, rhs); pivot entries are 1 and each pivot
    // column is zero in every other stored row.
    rows: Vec<(usize, Vec<Rational>, Rational)>,
    inconsistent: bool,
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            rows: Vec::new(),
            inconsistent: false,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    pub fn add_row(&mut self, mut row: Vec<Rational>, mut rhs: Rational) -> RowOutcome {
        assert_eq!(row.len(), self.cols);
        for (p, r, b) in &self.rows {
            let f = row[*p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            rhs -= &f * b;
        }
        let Some(p) = row.iter().position(|v| !v.is_zero()) else {
            if rhs.is_zero() {
                return RowOutcome::Dependent;
            }
            self.inconsistent = true;
            return RowOutcome::Inconsistent;
        };
        let inv = Rational::one() / &row[p];
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        rhs *= &inv;
        for (_, r, b) in self.rows.iter_mut() {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            *b -= &f * &rhs;
        }
        let pos = self.rows.partition_point(|(q, _, _)| *q < p);
        self.rows.insert(pos, (p, row, rhs));
        RowOutcome::Independent
    }

    /// Particular solution with free coordinates zero, plus null basis;
    /// `None` if inconsistent.
    pub fn solution(&self) -> Option<Solution> {
        if self.inconsistent {
            return None;
        }
        let mut particular = vec![Rational::zero(); self.cols];
        let mut is_pivot = vec![false; self.cols];
        for (p, _, b) in &self.rows {
            particular[*p] = b.clone();
            is_pivot[*p] = true;
        }
        let mut null_basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (p, r, _) in &self.rows {
                if !r[f].is_zero() {
                    v[*p] = -r[f].clone();
                }
            }
            // first nonzero entry 1
            let lead = v
                .iter()
                .find(|e| !e.is_zero())
                .cloned()
                .expect("free column");
            null_basis.push(v.into_iter().map(|e| e / &lead).collect());
        }
        Some(Solution {
            particular,
            null_basis,
            rank: self.rows.len(),
        })
    }
}
