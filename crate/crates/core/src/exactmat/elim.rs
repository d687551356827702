//! Exact elimination: rank, determinant, inverse and characteristic polynomial.

use num_traits::{One, Zero};

use super::matrix::CMatrix;
use super::scalar::GaussianRational;
use crate::error::{Error, Result};

/// Row-reduces a copy of `a` to echelon form and returns `(echelon, pivot_columns)`.
fn echelon(a: &CMatrix) -> (CMatrix, Vec<usize>) {
    let mut m = a.clone();
    let (rows, cols) = m.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = m[(p, j)].clone();
                m[(p, j)] = m[(r, j)].clone();
                m[(r, j)] = tmp;
            }
        }
        let inv = m[(r, c)].inv().expect("pivot is nonzero");
        for i in r + 1..rows {
            if m[(i, c)].is_zero() {
                continue;
            }
            let factor = &m[(i, c)] * &inv;
            for j in c..cols {
                let delta = &factor * &m[(r, j)];
                m[(i, j)] -= &delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

impl CMatrix {
    pub fn rank(&self) -> usize {
        echelon(self).1.len()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows()
    }

    /// Determinant by Bareiss' fraction-free elimination.
    pub fn determinant(&self) -> Result<GaussianRational> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows();
        if n == 0 {
            return Ok(GaussianRational::one());
        }
        let mut m = self.clone();
        let mut sign_flip = false;
        let mut prev = GaussianRational::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return Ok(GaussianRational::zero());
                };
                for j in 0..n {
                    let tmp = m[(p, j)].clone();
                    m[(p, j)] = m[(k, j)].clone();
                    m[(k, j)] = tmp;
                }
                sign_flip = !sign_flip;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = &num / &prev;
                }
                m[(i, k)] = GaussianRational::zero();
            }
            prev = m[(k, k)].clone();
        }
        let det = m[(n - 1, n - 1)].clone();
        Ok(if sign_flip { -det } else { det })
    }

    /// Exact inverse by Gauss–Jordan elimination on `[A | I]`.
    pub fn inverse(&self) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(Error::Singular(format!(
                "cannot invert a {}x{} matrix",
                self.rows(),
                self.cols()
            )));
        }
        let n = self.rows();
        let mut aug = CMatrix::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &CMatrix::identity(n));
        for c in 0..n {
            let p = (c..n)
                .find(|&i| !aug[(i, c)].is_zero())
                .ok_or_else(|| Error::Singular(format!("rank deficient {n}x{n} matrix")))?;
            if p != c {
                for j in 0..2 * n {
                    let tmp = aug[(p, j)].clone();
                    aug[(p, j)] = aug[(c, j)].clone();
                    aug[(c, j)] = tmp;
                }
            }
            let inv = aug[(c, c)].inv().expect("pivot is nonzero");
            for j in c..2 * n {
                aug[(c, j)] = &aug[(c, j)] * &inv;
            }
            for i in 0..n {
                if i == c || aug[(i, c)].is_zero() {
                    continue;
                }
                let factor = aug[(i, c)].clone();
                for j in c..2 * n {
                    let delta = &factor * &aug[(c, j)];
                    aug[(i, j)] -= &delta;
                }
            }
        }
        Ok(aug.block(0, n, n, n))
    }

    /// Coefficients of `det(xI − A)`, constant term first, leading 1 last.
    ///
    /// Faddeev–LeVerrier recursion; exact over any field of characteristic 0.
    pub fn char_poly(&self) -> Result<Vec<GaussianRational>> {
        if !self.is_square() {
            return Err(Error::Shape("characteristic polynomial of a non-square matrix".into()));
        }
        let n = self.rows();
        let mut coeffs = vec![GaussianRational::zero(); n + 1];
        coeffs[n] = GaussianRational::one();
        let mut m = CMatrix::zeros(n, n);
        for k in 1..=n {
            let mut next = self.matmul(&m)?;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let t = self.matmul(&m)?.trace();
            coeffs[n - k] = -(&t / &GaussianRational::from(k as i64));
        }
        Ok(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::scalar::rational;

    #[test]
    fn rank_examples() {
        assert_eq!(CMatrix::identity(3).rank(), 3);
        assert_eq!(CMatrix::from_ints(&[&[0, 1], &[0, 0]]).rank(), 1);
        assert_eq!(CMatrix::zeros(2, 5).rank(), 0);
        assert_eq!(CMatrix::from_ints(&[&[1, 2, 3], &[2, 4, 6]]).rank(), 1);
    }

    #[test]
    fn inverse_examples() {
        let two = CMatrix::from_ints(&[&[2]]);
        assert_eq!(
            two.inverse().unwrap(),
            CMatrix::scalar(GaussianRational::real(rational(1, 2)))
        );
        let a = CMatrix::from_rows(vec![
            vec![GaussianRational::from_ints(1, 1), GaussianRational::from(2)],
            vec![GaussianRational::i(), GaussianRational::from_ints(3, -1)],
        ])
        .unwrap();
        assert!(a.inverse().unwrap().matmul(&a).unwrap().is_identity());
        assert!(matches!(
            CMatrix::from_ints(&[&[1, 2], &[2, 4]]).inverse(),
            Err(Error::Singular(_))
        ));
        assert!(matches!(CMatrix::zeros(2, 3).inverse(), Err(Error::Singular(_))));
    }

    #[test]
    fn determinant_examples() {
        let a = CMatrix::from_ints(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]);
        // cofactor expansion along the first row: -1·(27-30) + 2·(21-24)
        assert_eq!(a.determinant().unwrap(), GaussianRational::from(-3));
        let i = GaussianRational::i();
        let b = CMatrix::from_rows(vec![
            vec![i.clone(), GaussianRational::from(1)],
            vec![GaussianRational::from(1), i.clone()],
        ])
        .unwrap();
        assert_eq!(b.determinant().unwrap(), GaussianRational::from(-2));
        assert!(CMatrix::from_ints(&[&[1, 2], &[2, 4]]).determinant().unwrap().is_zero());
    }

    #[test]
    fn char_poly_examples() {
        // (x-1)^2 = 1 - 2x + x^2
        let p = CMatrix::identity(2).char_poly().unwrap();
        assert_eq!(p, vec![1.into(), (-2).into(), 1.into()]);
        // [[0,-1],[1,0]]: x^2 + 1
        let r = CMatrix::from_ints(&[&[0, -1], &[1, 0]]).char_poly().unwrap();
        assert_eq!(r, vec![1.into(), 0.into(), 1.into()]);
    }
}
