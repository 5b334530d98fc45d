//! Dense matrices over a [`Field`], used for derivation-basis changes, Lie
//! algebra maps and linear solves over the scalar field.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<F>>,
}

/// Matrices with exact rational entries.
pub type RationalMatrix = Matrix<BigRational>;

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    Inconsistent,
    Underdetermined,
}

impl<F: Field> Matrix<F> {
    pub fn new(data: Vec<Vec<F>>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![vec![F::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = F::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i]
    }

    pub fn data(&self) -> &[Vec<F>] {
        &self.data
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j][i] = self.data[i][j].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::RankMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = F::zero();
                for k in 0..self.cols {
                    if !self.data[i][k].is_zero() && !other.data[k][j].is_zero() {
                        acc = acc + self.data[i][k].clone() * other.data[k][j].clone();
                    }
                }
                m.data[i][j] = acc;
            }
        }
        Ok(m)
    }

    /// Row echelon form: returns the reduced matrix and pivot columns.
    fn rref(mut a: Vec<Vec<F>>, cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
        let rows = a.len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = F::one() / a[r][c].clone();
            for x in a[r].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            for i in 0..rows {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    let pivot_row = a[r].clone();
                    for (x, y) in a[i].iter_mut().zip(pivot_row) {
                        *x = x.clone() - f.clone() * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        Self::rref(self.data.clone(), self.cols).1.len()
    }

    /// Two-sided inverse of a square matrix.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        let aug = self
            .data
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
                row
            })
            .collect();
        let (red, pivots) = Self::rref(aug, n);
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return Err(Error::SingularMatrix);
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            data: red.into_iter().map(|r| r[n..].to_vec()).collect(),
        })
    }

    /// `L` with `L A = I` for a matrix of full column rank.
    pub fn left_inverse(&self) -> Result<Self> {
        let at = self.transpose();
        let gram = at.mul(self)?;
        gram.inverse()?.mul(&at)
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[F]) -> Solution<F> {
        let aug = self
            .data
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut row = r.clone();
                row.push(bi.clone());
                row
            })
            .collect();
        let (red, pivots) = Self::rref(aug, self.cols + 1);
        if pivots.contains(&self.cols) {
            return Solution::Inconsistent;
        }
        if pivots.len() < self.cols {
            return Solution::Underdetermined;
        }
        Solution::Unique((0..self.cols).map(|i| red[i][self.cols].clone()).collect())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

impl RationalMatrix {
    pub fn from_ints(data: &[&[i64]]) -> Result<Self> {
        Self::new(
            data.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }
}

impl<F: fmt::Display> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_sl2_matrix() {
        let m = RationalMatrix::from_ints(&[&[2, 1], &[1, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv, RationalMatrix::from_ints(&[&[1, -1], &[-1, 2]]).unwrap());
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn singular_matrix() {
        let m = RationalMatrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn left_inverse_of_tall_matrix() {
        let m = RationalMatrix::from_ints(&[&[1, 0], &[0, 1], &[0, 0]]).unwrap();
        let l = m.left_inverse().unwrap();
        assert!(l.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn solve_cases() {
        let m = RationalMatrix::from_ints(&[&[1, 1], &[1, -1]]).unwrap();
        let r = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(m.solve(&[r(2), r(0)]), Solution::Unique(vec![r(1), r(1)]));
        let s = RationalMatrix::from_ints(&[&[1, 1], &[2, 2]]).unwrap();
        assert_eq!(s.solve(&[r(1), r(3)]), Solution::Inconsistent);
        assert_eq!(s.solve(&[r(1), r(2)]), Solution::Underdetermined);
    }
}
