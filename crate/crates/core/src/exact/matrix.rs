use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

use super::{ExactError, Rational};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(
            rows.iter().all(|r| r.len() == ncols),
            "ragged rows in RationalMatrix::from_rows"
        );
        Self {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Rational>]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(
                col.len(),
                nrows,
                "ragged columns in RationalMatrix::from_columns"
            );
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, ExactError> {
        if self.cols != v.len() {
            return Err(ExactError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| super::dot(self.row(i), v)).collect())
    }

    /// Each row scaled by the lcm of its denominators, giving an integer
    /// matrix with the same row space.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| integer_row(self.row(i))).collect()
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}

/// One step of Bareiss elimination below pivot `(r, c)`. Every division is
/// exact: the updated entries are minors of the input.
fn bareiss_step(a: &mut [Vec<BigInt>], r: usize, c: usize, prev: &BigInt) {
    let (top, rest) = a.split_at_mut(r + 1);
    let pivot_row = &top[r];
    let pivot = &pivot_row[c];
    for row in rest.iter_mut() {
        let factor = row[c].clone();
        for j in (c + 1)..row.len() {
            let num = pivot * &row[j] - &factor * &pivot_row[j];
            debug_assert!((&num % prev).is_zero());
            row[j] = num / prev;
        }
        row[c] = BigInt::zero();
    }
}

/// Exact rank via fraction-free (Bareiss) elimination.
pub fn rank(a: &RationalMatrix) -> usize {
    let mut m = a.integer_rows();
    let (rows, cols) = (a.rows, a.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        bareiss_step(&mut m, r, c, &prev);
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Solves `A x = b` exactly for square `A`.
///
/// The augmented system is cleared of denominators row by row, reduced to
/// upper-triangular form by Bareiss elimination, then back-substituted.
pub fn rat_solve(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>, ExactError> {
    let n = a.rows;
    if a.cols != n {
        return Err(ExactError::DimensionMismatch {
            expected: n,
            got: a.cols,
        });
    }
    if b.len() != n {
        return Err(ExactError::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.push(b[i].clone());
            integer_row(&row)
        })
        .collect();
    let mut prev = BigInt::one();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !m[i][c].is_zero())
            .ok_or(ExactError::Singular)?;
        m.swap(c, p);
        bareiss_step(&mut m, c, c, &prev);
        prev = m[c][c].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in (i + 1)..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v, 1)).collect())
                .collect(),
        )
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn solve_identity() {
        let x = rat_solve(&RationalMatrix::identity(3), &v(&[1, 2, 3])).unwrap();
        assert_eq!(x, v(&[1, 2, 3]));
    }

    #[test]
    fn solve_singular() {
        assert_eq!(
            rat_solve(&m(&[&[1, 1], &[1, 1]]), &v(&[1, 0])),
            Err(ExactError::Singular)
        );
    }

    #[test]
    fn solve_two_by_two() {
        // 2x + y = 1, x + y = 0  =>  x = 1, y = -1
        let a = m(&[&[2, 1], &[1, 1]]);
        let x = rat_solve(&a, &v(&[1, 0])).unwrap();
        assert_eq!(x, v(&[1, -1]));
        assert_eq!(a.mul_vec(&x).unwrap(), v(&[1, 0]));
    }

    #[test]
    fn solve_with_fractions_and_pivoting() {
        let a = RationalMatrix::from_rows(vec![
            vec![rat(0, 1), rat(1, 2), rat(1, 3)],
            vec![rat(2, 3), rat(0, 1), rat(-1, 4)],
            vec![rat(1, 5), rat(1, 7), rat(0, 1)],
        ]);
        let b = vec![rat(1, 1), rat(-2, 9), rat(3, 11)];
        let x = rat_solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);
    }

    #[test]
    fn solve_dimension_mismatch() {
        assert!(matches!(
            rat_solve(&RationalMatrix::identity(2), &v(&[1, 2, 3])),
            Err(ExactError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            rat_solve(&m(&[&[1, 2, 3]]), &v(&[1])),
            Err(ExactError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RationalMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&RationalMatrix::identity(4)), 4);
        // single column (-3, 3, 0)^T from S = {(1,-1,0), (-2,2,0)}
        assert_eq!(rank(&m(&[&[-3], &[3], &[0]])), 1);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]])), 2);
        assert_eq!(rank(&m(&[&[0, 0, 1, 2], &[0, 0, 2, 4]])), 1);
        assert_eq!(rank(&RationalMatrix::zeros(0, 3)), 0);
    }

    #[test]
    fn transpose_and_mul() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6]]);
        let ata = a.transpose().mul(&a).unwrap();
        assert_eq!(ata, m(&[&[17, 22, 27], &[22, 29, 36], &[27, 36, 45]]));
        assert!(a.mul(&a).is_err());
    }
}
