//! Exact linear algebra over the rationals by Gaussian elimination.

use num_traits::{One, Zero};

use super::rat::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    values: Vec<Rat>,
    combination: Vec<Rat>,
}

/// Incrementally built row-echelon basis of a subspace of `Q^width`.
///
/// Every stored row also remembers how it was obtained from the inserted
/// generators, so membership tests can report the coefficients.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    generators: usize,
    rows: Vec<Row>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon { width, generators: 0, rows: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    fn eliminate(&self, values: &mut [Rat], combination: &mut Vec<Rat>) {
        for row in &self.rows {
            if values[row.pivot].is_zero() {
                continue;
            }
            let factor = values[row.pivot].clone();
            for (v, r) in values.iter_mut().zip(&row.values).skip(row.pivot) {
                if !r.is_zero() {
                    *v -= &factor * r;
                }
            }
            if combination.len() < row.combination.len() {
                combination.resize(row.combination.len(), Rat::zero());
            }
            for (c, r) in combination.iter_mut().zip(&row.combination) {
                if !r.is_zero() {
                    *c -= &factor * r;
                }
            }
        }
    }

    /// Adds a generator. Returns `true` when it enlarged the span.
    pub fn insert(&mut self, values: Vec<Rat>) -> Result<bool> {
        if values.len() != self.width {
            return Err(Error::DimensionMismatch { expected: self.width, found: values.len() });
        }
        let mut values = values;
        let index = self.generators;
        self.generators += 1;
        let mut combination = vec![Rat::zero(); index + 1];
        combination[index] = Rat::one();
        self.eliminate(&mut values, &mut combination);
        let Some(pivot) = values.iter().position(|v| !v.is_zero()) else {
            return Ok(false);
        };
        let inv = values[pivot].recip();
        for v in values.iter_mut().skip(pivot) {
            *v *= &inv;
        }
        for c in combination.iter_mut() {
            *c *= &inv;
        }
        self.rows.push(Row { pivot, values, combination });
        Ok(true)
    }

    /// Remainder of `target` after elimination; zero iff `target` is in the span.
    pub fn remainder(&self, target: &[Rat]) -> Vec<Rat> {
        let mut values = target.to_vec();
        let mut combination = Vec::new();
        self.eliminate(&mut values, &mut combination);
        values
    }

    pub fn contains(&self, target: &[Rat]) -> bool {
        self.remainder(target).iter().all(Zero::is_zero)
    }

    /// Coefficients `c` with `target = sum c_i * generator_i`, or `None` when
    /// `target` is outside the span. Generators that were dependent at
    /// insertion get coefficient zero.
    pub fn express(&self, target: &[Rat]) -> Option<Vec<Rat>> {
        let mut values = target.to_vec();
        let mut combination = vec![Rat::zero(); self.generators];
        self.eliminate(&mut values, &mut combination);
        if values.iter().all(Zero::is_zero) {
            Some(combination.into_iter().map(|c| -c).collect())
        } else {
            None
        }
    }
}

/// Solves `sum c_i * rows[i] = target` exactly.
pub fn rat_linear_solve(rows: &[Vec<Rat>], target: &[Rat]) -> Result<Option<Vec<Rat>>> {
    let mut ech = Echelon::new(target.len());
    for r in rows {
        ech.insert(r.clone())?;
    }
    Ok(ech.express(target))
}

pub fn rank(rows: &[Vec<Rat>]) -> Result<usize> {
    let Some(first) = rows.first() else { return Ok(0) };
    let mut ech = Echelon::new(first.len());
    for r in rows {
        ech.insert(r.clone())?;
    }
    Ok(ech.rank())
}

/// Basis of `{x : A x = 0}` for the matrix with the given rows.
pub fn null_space(rows: &[Vec<Rat>], width: usize) -> Vec<Vec<Rat>> {
    // reduced row echelon form
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[r].clone();
                for (v, p) in m[i].iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Rat::zero(); width];
        x[free] = Rat::one();
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = -m[i][free].clone();
        }
        basis.push(x);
    }
    basis
}

pub fn determinant(matrix: &[Vec<Rat>]) -> Rat {
    let n = matrix.len();
    let mut m = matrix.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= &m[col][col];
        let inv = m[col][col].recip();
        for i in col + 1..n {
            if m[i][col].is_zero() {
                continue;
            }
            let f = &m[i][col] * &inv;
            let pivot_row = m[col].clone();
            for (v, p) in m[i].iter_mut().zip(&pivot_row).skip(col) {
                *v -= &f * p;
            }
        }
    }
    det
}
