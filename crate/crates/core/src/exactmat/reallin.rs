//! Real-linear systems in the entries of an unknown complex matrix.
//!
//! Equations such as `S̄J = JS` are linear over ℝ but not over ℂ, so they are
//! solved after realification. The convention is fixed: entry `(i, j)` of an
//! `m × n` unknown is `x + iy` with real unknown `x` at index `2(i·n + j)` and
//! `y` at index `2(i·n + j) + 1`. Every complex equation contributes its real
//! and imaginary parts as two real equations.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;

use super::matrix::CMatrix;
use super::scalar::{GaussianRational, Rational};
use crate::error::{Error, Result};

/// `Σ coeff·x_var + constant` over the real unknowns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearForm {
    terms: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn variable(var: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(var, Rational::one());
        Self {
            terms,
            constant: Rational::zero(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.terms.iter().map(|(&v, c)| (v, c))
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &LinearForm, factor: &Rational) {
        if factor.is_zero() {
            return;
        }
        for (&v, c) in &other.terms {
            let entry = self.terms.entry(v).or_insert_with(Rational::zero);
            *entry += c * factor;
            if entry.is_zero() {
                self.terms.remove(&v);
            }
        }
        self.constant += &other.constant * factor;
    }

    fn scaled(&self, factor: &Rational) -> LinearForm {
        let mut out = LinearForm::default();
        out.add_scaled(self, factor);
        out
    }
}

/// A complex quantity whose real and imaginary parts are real-linear forms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymScalar {
    pub re: LinearForm,
    pub im: LinearForm,
}

impl SymScalar {
    fn constant(z: &GaussianRational) -> Self {
        Self {
            re: LinearForm::constant(z.re.clone()),
            im: LinearForm::constant(z.im.clone()),
        }
    }

    fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: self.im.scaled(&-Rational::one()),
        }
    }

    /// `self += z · other`.
    fn add_product(&mut self, z: &GaussianRational, other: &SymScalar) {
        // (a + bi)(u + iv) = (au − bv) + i(av + bu)
        self.re.add_scaled(&other.re, &z.re);
        self.re.add_scaled(&other.im, &-z.im.clone());
        self.im.add_scaled(&other.im, &z.re);
        self.im.add_scaled(&other.re, &z.im);
    }
}

/// A matrix of [`SymScalar`] entries: an affine real-linear expression in the
/// unknown matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SymScalar>,
}

impl SymMatrix {
    pub fn constant(m: &CMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.entries().iter().map(SymScalar::constant).collect(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(SymScalar::conj).collect(),
        }
    }

    fn at(&self, i: usize, j: usize) -> &SymScalar {
        &self.data[i * self.cols + j]
    }

    /// `a · self`.
    pub fn left_mul(&self, a: &CMatrix) -> Result<Self> {
        if a.cols() != self.rows {
            return Err(Error::Shape("left factor does not match expression rows".into()));
        }
        let mut data = vec![SymScalar::default(); a.rows() * self.cols];
        for i in 0..a.rows() {
            for k in 0..a.cols() {
                let z = &a[(i, k)];
                if z.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    data[i * self.cols + j].add_product(z, self.at(k, j));
                }
            }
        }
        Ok(Self {
            rows: a.rows(),
            cols: self.cols,
            data,
        })
    }

    /// `self · a`.
    pub fn right_mul(&self, a: &CMatrix) -> Result<Self> {
        if self.cols != a.rows() {
            return Err(Error::Shape("right factor does not match expression columns".into()));
        }
        let mut data = vec![SymScalar::default(); self.rows * a.cols()];
        for k in 0..self.cols {
            for j in 0..a.cols() {
                let z = &a[(k, j)];
                if z.is_zero() {
                    continue;
                }
                for i in 0..self.rows {
                    data[i * a.cols() + j].add_product(z, self.at(i, k));
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: a.cols(),
            data,
        })
    }

    pub fn scale(&self, z: &GaussianRational) -> Self {
        let data = self
            .data
            .iter()
            .map(|e| {
                let mut out = SymScalar::default();
                out.add_product(z, e);
                out
            })
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    fn combine(&self, other: &Self, sign: &Rational) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape("expression shapes differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut out = a.clone();
                out.re.add_scaled(&b.re, sign);
                out.im.add_scaled(&b.im, sign);
                out
            })
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.combine(other, &Rational::one())
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.combine(other, &-Rational::one())
    }
}

/// Accumulates real-linear equations on an unknown `rows × cols` complex matrix.
#[derive(Clone, Debug)]
pub struct RealLinearSystem {
    rows: usize,
    cols: usize,
    equations: Vec<LinearForm>,
}

/// Affine solution space: `particular + span_ℝ(basis)`.
#[derive(Clone, Debug)]
pub struct RealSolution {
    pub particular: CMatrix,
    pub basis: Vec<CMatrix>,
}

impl RealLinearSystem {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            equations: Vec::new(),
        }
    }

    pub fn num_unknowns(&self) -> usize {
        2 * self.rows * self.cols
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    /// The unknown matrix itself as an expression.
    pub fn unknown(&self) -> SymMatrix {
        let data = (0..self.rows * self.cols)
            .map(|e| SymScalar {
                re: LinearForm::variable(2 * e),
                im: LinearForm::variable(2 * e + 1),
            })
            .collect();
        SymMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Adds the constraint `expr = 0`, entry by entry, real and imaginary parts.
    pub fn require_zero(&mut self, expr: &SymMatrix) {
        for e in &expr.data {
            for part in [&e.re, &e.im] {
                if !part.is_zero() {
                    self.equations.push(part.clone());
                }
            }
        }
    }

    pub fn solve(&self) -> Result<RealSolution> {
        // Echelon rows keyed by leading variable; each row has leading coefficient 1.
        let mut pivots: BTreeMap<usize, LinearForm> = BTreeMap::new();
        for eq in &self.equations {
            let mut eq = eq.clone();
            let mut cursor = 0;
            while let Some((v, c)) = eq.terms.range(cursor..).next().map(|(&v, c)| (v, c.clone())) {
                if let Some(row) = pivots.get(&v) {
                    eq.add_scaled(row, &-c);
                }
                cursor = v + 1;
            }
            let Some((lead, c)) = eq.terms.iter().next().map(|(&v, c)| (v, c.clone())) else {
                if !eq.constant.is_zero() {
                    return Err(Error::NoSolution);
                }
                continue;
            };
            let inv = Rational::one() / &c;
            pivots.insert(lead, eq.scaled(&inv));
        }

        // Back substitution, highest pivot first, leaves only free variables.
        let keys: Vec<usize> = pivots.keys().rev().copied().collect();
        for &p in &keys {
            let mut row = pivots.remove(&p).expect("pivot row present");
            let deps: Vec<(usize, Rational)> = row
                .terms
                .range(p + 1..)
                .filter(|(v, _)| pivots.contains_key(v))
                .map(|(&v, c)| (v, c.clone()))
                .collect();
            for (v, c) in deps {
                row.add_scaled(&pivots[&v], &-c);
            }
            pivots.insert(p, row);
        }

        let n = self.num_unknowns();
        let free: Vec<usize> = (0..n).filter(|v| !pivots.contains_key(v)).collect();
        let free_pos: BTreeMap<usize, usize> = free.iter().enumerate().map(|(k, &v)| (v, k)).collect();

        let mut particular = CMatrix::zeros(self.rows, self.cols);
        let mut basis: Vec<CMatrix> = free
            .iter()
            .map(|&f| {
                let mut m = CMatrix::zeros(self.rows, self.cols);
                self.set_real(&mut m, f, Rational::one());
                m
            })
            .collect();
        for (&p, row) in &pivots {
            self.set_real(&mut particular, p, -row.constant.clone());
            for (&v, c) in row.terms.range(p + 1..) {
                self.set_real(&mut basis[free_pos[&v]], p, -c.clone());
            }
        }
        Ok(RealSolution { particular, basis })
    }

    fn set_real(&self, m: &mut CMatrix, var: usize, value: Rational) {
        let e = var / 2;
        let z = &mut m[(e / self.cols, e % self.cols)];
        if var % 2 == 0 {
            z.re = value;
        } else {
            z.im = value;
        }
    }
}

impl RealSolution {
    /// Dimension of the solution space over ℝ.
    pub fn real_dim(&self) -> usize {
        self.basis.len()
    }

    /// `particular + Σ coeffs[k]·basis[k]`.
    pub fn combination(&self, coeffs: &[Rational]) -> CMatrix {
        assert_eq!(coeffs.len(), self.basis.len(), "one coefficient per basis element");
        let mut out = self.particular.clone();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            out = out
                .plus(&b.scale(&GaussianRational::real(c.clone())))
                .expect("basis shapes agree");
        }
        out
    }

    /// Draws random integer combinations until one is nonsingular.
    pub fn sample_nonsingular<R: Rng>(&self, rng: &mut R, attempts: usize) -> Option<CMatrix> {
        (0..attempts).find_map(|_| {
            let coeffs: Vec<Rational> = (0..self.basis.len())
                .map(|_| Rational::from_integer(rng.gen_range(-3i64..=3).into()))
                .collect();
            let s = self.combination(&coeffs);
            s.is_nonsingular().then_some(s)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_constraint_leaves_everything_free() {
        let mut sys = RealLinearSystem::new(2, 2);
        let s = sys.unknown();
        let zero = CMatrix::zeros(2, 2);
        let expr = s.conj().right_mul(&zero).unwrap().minus(&s.left_mul(&zero).unwrap()).unwrap();
        sys.require_zero(&expr);
        assert_eq!(sys.solve().unwrap().real_dim(), 8);
    }

    #[test]
    fn semicommutant_of_two_by_two_jordan_block() {
        // S̄J = JS with J = [[0,1],[0,0]] reads s21 = 0 and s22 = conj(s11):
        // four real constraints on eight unknowns.
        let j = CMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let mut sys = RealLinearSystem::new(2, 2);
        let s = sys.unknown();
        let expr = s.conj().right_mul(&j).unwrap().minus(&s.left_mul(&j).unwrap()).unwrap();
        sys.require_zero(&expr);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.real_dim(), 4);
        for b in &sol.basis {
            assert_eq!(b.conj().matmul(&j).unwrap(), j.matmul(b).unwrap());
        }
    }

    #[test]
    fn s_equals_i_conj_s() {
        // x + iy = i(x − iy) = y + ix forces x = y.
        let mut sys = RealLinearSystem::new(1, 1);
        let s = sys.unknown();
        let expr = s.minus(&s.conj().scale(&GaussianRational::i())).unwrap();
        sys.require_zero(&expr);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.real_dim(), 1);
        let b = &sol.basis[0][(0, 0)];
        assert_eq!(b.re, b.im);
    }

    #[test]
    fn affine_and_inconsistent_systems() {
        // S = 2 + i on 1x1 has the unique solution 2 + i.
        let target = CMatrix::scalar(GaussianRational::from_ints(2, 1));
        let mut sys = RealLinearSystem::new(1, 1);
        let expr = sys.unknown().minus(&SymMatrix::constant(&target)).unwrap();
        sys.require_zero(&expr);
        let sol = sys.solve().unwrap();
        assert_eq!(sol.real_dim(), 0);
        assert_eq!(sol.particular, target);

        // S = 1 and S = 2 together are inconsistent.
        let mut sys = RealLinearSystem::new(1, 1);
        let s = sys.unknown();
        sys.require_zero(&s.minus(&SymMatrix::constant(&CMatrix::from_ints(&[&[1]]))).unwrap());
        sys.require_zero(&s.minus(&SymMatrix::constant(&CMatrix::from_ints(&[&[2]]))).unwrap());
        assert_eq!(sys.solve().unwrap_err(), Error::NoSolution);
    }
}
