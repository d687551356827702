//! All matrices `S` with `S̄J = JS` for a nilpotent block-Jordan `J`.
//!
//! Partition `S` conformally to `J` into blocks `S_ij` (size `p_iq_i × p_jq_j`)
//! and `q_i × q_j` subblocks. Then `S̄J = JS` holds exactly when every `S_ij` is
//! built from `min(p_i, p_j)` free subblocks `C_ij⁽⁰⁾, C_ij⁽¹⁾, …` laid along
//! generalized diagonals: row `a` of the template carries
//! `C_ij⁽⁰⁾, C_ij⁽¹⁾, …` when `a` is even and their conjugates when `a` is odd.
//! For `p_i ≤ p_j` the template is flush with the right edge of `S_ij`, for
//! `p_i ≥ p_j` with the top edge; everything else is zero.

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmat::random::{random_matrix, random_nonsingular, seeded_rng};
use crate::exactmat::{CMatrix, GaussianRational, RealLinearSystem, RealSolution};
use crate::nilstruct::{build_j, is_upper_block_triangular, to_weyr, weyr_permutation, Partition};

/// Free parameters `C_ij⁽ᵏ⁾`, indexed `[i][j][k]` with 0-based strips.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommutantParams {
    blocks: Vec<Vec<Vec<CMatrix>>>,
}

impl CommutantParams {
    pub fn zeros(part: &Partition) -> Self {
        let t = part.strips();
        let blocks = (0..t)
            .map(|i| {
                (0..t)
                    .map(|j| {
                        let (pi, pj) = (part.part(i), part.part(j));
                        vec![CMatrix::zeros(pi.q, pj.q); pi.p.min(pj.p)]
                    })
                    .collect()
            })
            .collect();
        Self { blocks }
    }

    /// Parameters with every diagonal `C_ii⁽⁰⁾ = I` and everything else zero,
    /// i.e. the identity matrix.
    pub fn identity(part: &Partition) -> Self {
        let mut out = Self::zeros(part);
        for i in 0..part.strips() {
            out.blocks[i][i][0] = CMatrix::identity(part.part(i).q);
        }
        out
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &CMatrix {
        &self.blocks[i][j][k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, c: CMatrix) {
        self.blocks[i][j][k] = c;
    }

    /// Number of parameter subblocks for the pair `(i, j)`.
    pub fn count(&self, i: usize, j: usize) -> usize {
        self.blocks[i][j].len()
    }

    fn check(&self, part: &Partition) -> Result<()> {
        let t = part.strips();
        if self.blocks.len() != t || self.blocks.iter().any(|row| row.len() != t) {
            return Err(Error::Shape("parameters do not match the number of strips".into()));
        }
        for i in 0..t {
            for j in 0..t {
                let (pi, pj) = (part.part(i), part.part(j));
                let list = &self.blocks[i][j];
                if list.len() != pi.p.min(pj.p) || list.iter().any(|c| c.shape() != (pi.q, pj.q)) {
                    return Err(Error::Shape(format!(
                        "parameters for block ({}, {}) must be {} subblocks of size {}x{}",
                        i + 1,
                        j + 1,
                        pi.p.min(pj.p),
                        pi.q,
                        pj.q
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Subblock positions `(row substrip a, column substrip b, k)` of the
/// template for block `S_ij`, all 0-based.
fn template(pi: usize, pj: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    let m = pi.min(pj);
    let shift = pj.saturating_sub(pi);
    (0..m).flat_map(move |a| (0..m - a).map(move |k| (a, shift + a + k, k)))
}

pub fn synthesize_s(part: &Partition, params: &CommutantParams) -> Result<CMatrix> {
    params.check(part)?;
    let n = part.size();
    let mut s = CMatrix::zeros(n, n);
    for i in 0..part.strips() {
        for j in 0..part.strips() {
            for (a, b, k) in template(part.part(i).p, part.part(j).p) {
                let c = params.get(i, j, k);
                let block = if a % 2 == 0 { c.clone() } else { c.conj() };
                s.set_block(part.substrip_offset(i, a), part.substrip_offset(j, b), &block);
            }
        }
    }
    Ok(s)
}

/// Reads `C_ij⁽ᵏ⁾` from the first template row of each block and verifies that
/// `s` is exactly the matrix these parameters synthesize.
pub fn extract_params(part: &Partition, s: &CMatrix) -> Result<CommutantParams> {
    part.check_square(s)?;
    let mut params = CommutantParams::zeros(part);
    for i in 0..part.strips() {
        for j in 0..part.strips() {
            let (pi, pj) = (part.part(i), part.part(j));
            let shift = pj.p.saturating_sub(pi.p);
            for k in 0..pi.p.min(pj.p) {
                let r0 = part.substrip_offset(i, 0);
                let c0 = part.substrip_offset(j, shift + k);
                params.set(i, j, k, s.block(r0, c0, pi.q, pj.q));
            }
        }
    }
    if synthesize_s(part, &params)? != *s {
        return Err(Error::Contract(
            "matrix does not have the block form of a solution of conj(S)J = JS".into(),
        ));
    }
    Ok(params)
}

/// `conj(S)·J = J·S`.
pub fn check_semicommute(j: &CMatrix, s: &CMatrix) -> Result<bool> {
    if !j.is_square() || j.shape() != s.shape() {
        return Err(Error::Shape(format!(
            "semicommutation needs equal square matrices, got {:?} and {:?}",
            j.shape(),
            s.shape()
        )));
    }
    Ok(s.conj().matmul(j)? == j.matmul(s)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommutantDim {
    pub complex_dim: usize,
    pub real_dim: usize,
}

/// `Σ_{i,j} min(p_i, p_j)·q_i·q_j` complex parameters.
pub fn commutant_dim(part: &Partition) -> CommutantDim {
    let parts = part.parts();
    let complex_dim = parts
        .iter()
        .flat_map(|a| parts.iter().map(move |b| a.p.min(b.p) * a.q * b.q))
        .sum();
    CommutantDim {
        complex_dim,
        real_dim: 2 * complex_dim,
    }
}

/// Solves `S̄J − JS = 0` directly in the `2N²` real unknowns.
pub fn oracle_commutant(part: &Partition) -> Result<RealSolution> {
    let j = build_j(part);
    let n = part.size();
    let mut sys = RealLinearSystem::new(n, n);
    let s = sys.unknown();
    sys.require_zero(&s.conj().right_mul(&j)?.minus(&s.left_mul(&j)?)?);
    sys.solve()
}

/// Nonsingularity read off the diagonal parameters `C_ii⁽⁰⁾` alone.
pub fn is_nonsingular_structured(part: &Partition, params: &CommutantParams) -> Result<bool> {
    params.check(part)?;
    Ok((0..part.strips()).all(|i| params.get(i, i, 0).is_nonsingular()))
}

/// Whether `S^#` is upper block triangular in the permuted substrip layout.
pub fn weyr_triangularity_check(part: &Partition, params: &CommutantParams) -> Result<bool> {
    if !part.is_descending() {
        return Err(Error::Precondition(format!(
            "partition {part} must satisfy p1 > p2 > ... > pt"
        )));
    }
    let s_sharp = to_weyr(&synthesize_s(part, params)?, part)?;
    Ok(is_upper_block_triangular(&s_sharp, &weyr_permutation(part).block_sizes))
}

/// Whether a nonzero subblock at row substrip `α` and column substrip `β`
/// always has `β ≥ α`.
pub fn support_is_substrip_ordered(part: &Partition, s: &CMatrix) -> bool {
    let subs = part.substrips();
    subs.iter().all(|r| {
        subs.iter().all(|c| {
            c.substrip >= r.substrip
                || s.block_is_zero(
                    part.offset(*r).unwrap(),
                    part.offset(*c).unwrap(),
                    part.substrip_size(*r),
                    part.substrip_size(*c),
                )
        })
    })
}

pub fn random_params<R: Rng>(part: &Partition, rng: &mut R, nonsingular: bool) -> CommutantParams {
    let mut params = CommutantParams::zeros(part);
    for i in 0..part.strips() {
        for j in 0..part.strips() {
            let (qi, qj) = (part.part(i).q, part.part(j).q);
            for k in 0..params.count(i, j) {
                let c = if nonsingular && i == j && k == 0 {
                    random_nonsingular(rng, qi)
                } else {
                    random_matrix(rng, qi, qj)
                };
                params.set(i, j, k, c);
            }
        }
    }
    params
}

/// Deterministic pseudo-random parameters for `seed`.
pub fn sample_commutant(part: &Partition, seed: u64, nonsingular: bool) -> CommutantParams {
    random_params(part, &mut seeded_rng(seed), nonsingular)
}

/// One complex basis direction: parameter `C_ij⁽ᵏ⁾` with a single entry set.
#[derive(Clone, Debug, Serialize)]
pub struct BasisElement {
    /// 1-based strips `(i, j)`.
    pub block: (usize, usize),
    pub k: usize,
    /// 0-based entry inside the parameter subblock.
    pub entry: (usize, usize),
    /// `"1"` or `"i"`.
    pub unit: &'static str,
    pub matrix: CMatrix,
}

/// Real basis of the commutant: every parameter entry set to `1` and to `i`.
pub fn parameter_basis(part: &Partition) -> Result<Vec<BasisElement>> {
    let zero = CommutantParams::zeros(part);
    let mut out = Vec::with_capacity(commutant_dim(part).real_dim);
    for i in 0..part.strips() {
        for j in 0..part.strips() {
            let (qi, qj) = (part.part(i).q, part.part(j).q);
            for k in 0..zero.count(i, j) {
                for r in 0..qi {
                    for c in 0..qj {
                        for (unit, z) in [("1", GaussianRational::one()), ("i", GaussianRational::i())] {
                            let mut params = zero.clone();
                            let mut block = CMatrix::zeros(qi, qj);
                            block[(r, c)] = z;
                            params.set(i, j, k, block);
                            out.push(BasisElement {
                                block: (i + 1, j + 1),
                                k,
                                entry: (r, c),
                                unit,
                                matrix: synthesize_s(part, &params)?,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nilstruct::build_j;
    use num_traits::Zero;

    fn part(v: &[(usize, usize)]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn zero_j_imposes_nothing() {
        let p = part(&[(1, 3)]);
        let mut params = CommutantParams::zeros(&p);
        let c = CMatrix::from_fn(3, 3, |i, j| g(i as i64, j as i64 - 1));
        params.set(0, 0, 0, c.clone());
        assert_eq!(synthesize_s(&p, &params).unwrap(), c);
        assert_eq!(commutant_dim(&p).complex_dim, 9);
    }

    #[test]
    fn two_by_two_jordan_block() {
        let p = part(&[(2, 1)]);
        let (c, c1) = (g(2, 3), g(-1, 5));
        let mut params = CommutantParams::zeros(&p);
        params.set(0, 0, 0, CMatrix::scalar(c.clone()));
        params.set(0, 0, 1, CMatrix::scalar(c1.clone()));
        let s = synthesize_s(&p, &params).unwrap();
        let expected =
            CMatrix::from_rows(vec![vec![c.clone(), c1], vec![GaussianRational::zero(), c.conj()]]).unwrap();
        assert_eq!(s, expected);
        assert!(check_semicommute(&build_j(&p), &s).unwrap());
    }

    #[test]
    fn semicommute_examples() {
        let j = CMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        assert!(check_semicommute(&j, &CMatrix::identity(2)).unwrap());
        assert!(check_semicommute(&CMatrix::zeros(2, 2), &CMatrix::from_ints(&[&[1, 2], &[3, 4]])).unwrap());
        // conj(S)J = [[0,1],[0,0]] but JS = [[0,-1],[0,0]]: s22 must equal conj(s11)
        assert!(!check_semicommute(&j, &CMatrix::from_ints(&[&[1, 0], &[0, -1]])).unwrap());
        let d = CMatrix::from_rows(vec![vec![g(0, 1), g(0, 0)], vec![g(0, 0), g(0, -1)]]).unwrap();
        assert!(check_semicommute(&j, &d).unwrap());
        assert!(check_semicommute(&j, &CMatrix::identity(3)).is_err());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(commutant_dim(&part(&[(4, 1), (2, 1)])).complex_dim, 10);
        let d = commutant_dim(&part(&[(3, 2), (2, 1)]));
        assert_eq!((d.complex_dim, d.real_dim), (22, 44));
        // independent count from the realified system
        assert_eq!(oracle_commutant(&part(&[(3, 2), (2, 1)])).unwrap().real_dim(), 44);
        assert_eq!(oracle_commutant(&part(&[(4, 1), (2, 1)])).unwrap().real_dim(), 20);
    }

    #[test]
    fn equal_orders_agree_under_both_alignments() {
        // p_i = p_j: right-aligned shift is zero, so both templates coincide.
        let a: Vec<_> = template(3, 3).collect();
        let top: Vec<_> = (0..3usize).flat_map(|r| (0..3 - r).map(move |k| (r, r + k, k))).collect();
        assert_eq!(a, top);
    }

    #[test]
    fn structured_nonsingularity_examples() {
        let p = part(&[(3, 2), (1, 1)]);
        let mut params = sample_commutant(&p, 5, false);
        params.set(0, 0, 0, CMatrix::identity(2));
        params.set(1, 1, 0, CMatrix::identity(1));
        assert!(is_nonsingular_structured(&p, &params).unwrap());
        assert!(synthesize_s(&p, &params).unwrap().is_nonsingular());
        params.set(0, 0, 0, CMatrix::from_ints(&[&[1, 2], &[2, 4]]));
        assert!(!is_nonsingular_structured(&p, &params).unwrap());
        assert!(synthesize_s(&p, &params).unwrap().determinant().unwrap().is_zero());

        let p = part(&[(2, 1)]);
        let mut params = CommutantParams::zeros(&p);
        params.set(0, 0, 0, CMatrix::from_ints(&[&[2]]));
        params.set(0, 0, 1, CMatrix::from_ints(&[&[999]]));
        assert!(is_nonsingular_structured(&p, &params).unwrap());
    }

    #[test]
    fn triangularity_precondition_and_trivial_case() {
        let asc = part(&[(2, 1), (3, 1)]);
        let params = CommutantParams::identity(&asc);
        assert!(matches!(weyr_triangularity_check(&asc, &params), Err(Error::Precondition(_))));
        let single = part(&[(1, 4)]);
        assert!(weyr_triangularity_check(&single, &sample_commutant(&single, 1, false)).unwrap());
        let three = part(&[(5, 1), (3, 2), (2, 1)]);
        assert!(weyr_triangularity_check(&three, &sample_commutant(&three, 9, false)).unwrap());
    }

    #[test]
    fn sampling_is_deterministic() {
        let p = part(&[(3, 2), (1, 1)]);
        assert_eq!(sample_commutant(&p, 42, false), sample_commutant(&p, 42, false));
        assert_ne!(sample_commutant(&p, 42, false), sample_commutant(&p, 43, false));
        for seed in 0..5 {
            let params = sample_commutant(&p, seed, true);
            assert!(is_nonsingular_structured(&p, &params).unwrap());
            let s = synthesize_s(&p, &params).unwrap();
            assert!(check_semicommute(&build_j(&p), &s).unwrap());
            assert!(support_is_substrip_ordered(&p, &s));
        }
    }

    #[test]
    fn extraction_round_trip_and_rejection() {
        let p = part(&[(4, 1), (2, 2)]);
        let params = sample_commutant(&p, 3, false);
        let s = synthesize_s(&p, &params).unwrap();
        assert_eq!(extract_params(&p, &s).unwrap(), params);
        let mut bad = s.clone();
        bad[(5, 0)] = g(1, 0);
        assert!(matches!(extract_params(&p, &bad), Err(Error::Contract(_))));
    }

    #[test]
    fn shape_errors() {
        let p = part(&[(2, 1)]);
        let other = CommutantParams::zeros(&part(&[(2, 2)]));
        assert!(matches!(synthesize_s(&p, &other), Err(Error::Shape(_))));
    }

    #[test]
    fn basis_spans_commutant_dimension() {
        let p = part(&[(3, 1), (1, 2)]);
        let basis = parameter_basis(&p).unwrap();
        assert_eq!(basis.len(), commutant_dim(&p).real_dim);
        let j = build_j(&p);
        assert!(basis.iter().all(|b| check_semicommute(&j, &b.matrix).unwrap()));
    }
}
