//! Nilpotent block-Jordan matrices `J_{p₁}(0_{q₁}) ⊕ … ⊕ J_{p_t}(0_{q_t})`,
//! their strip/substrip layout, and the substrip permutation to Weyr form.
//!
//! Strip `i` has size `p_i·q_i` and splits into `p_i` substrips of size `q_i`.
//! Substrip `α` of strip `i` is written `α,i`. The Weyr rearrangement `M ↦ M^#`
//! reorders substrips (rows and columns simultaneously) so that the pairs
//! `(α, i)` appear in lexicographic order.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{CMatrix, GaussianRational};

/// One direct summand `J_p(0_q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, usize)", into = "(usize, usize)")]
pub struct Part {
    pub p: usize,
    pub q: usize,
}

impl From<(usize, usize)> for Part {
    fn from((p, q): (usize, usize)) -> Self {
        Part { p, q }
    }
}

impl From<Part> for (usize, usize) {
    fn from(part: Part) -> Self {
        (part.p, part.q)
    }
}

/// The block data `(p₁, q₁), …, (p_t, q_t)` with pairwise distinct `p_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr")]
pub struct Partition {
    parts: Vec<Part>,
}

#[derive(Deserialize)]
struct PartitionRepr {
    parts: Vec<Part>,
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = Error;
    fn try_from(r: PartitionRepr) -> Result<Self> {
        Partition::new(r.parts.into_iter().map(Into::into).collect())
    }
}

/// Substrip `substrip` of strip `strip`, both counted from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubstripIndex {
    pub strip: usize,
    pub substrip: usize,
}

impl SubstripIndex {
    pub fn new(strip: usize, substrip: usize) -> Self {
        Self { strip, substrip }
    }
}

impl fmt::Display for SubstripIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.substrip, self.strip)
    }
}

impl Partition {
    pub fn new(parts: Vec<(usize, usize)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Precondition("partition has no parts".into()));
        }
        for (k, &(p, q)) in parts.iter().enumerate() {
            if p == 0 || q == 0 {
                return Err(Error::Precondition(format!("part {} = ({p}, {q}) must be positive", k + 1)));
            }
            if parts[..k].iter().any(|&(p2, _)| p2 == p) {
                return Err(Error::Precondition(format!("repeated block order p = {p}")));
            }
        }
        Ok(Self {
            parts: parts.into_iter().map(Part::from).collect(),
        })
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    /// Number of strips `t`.
    pub fn strips(&self) -> usize {
        self.parts.len()
    }

    pub fn part(&self, strip: usize) -> Part {
        self.parts[strip]
    }

    /// Total size `N = Σ p_i·q_i`.
    pub fn size(&self) -> usize {
        self.parts.iter().map(|pt| pt.p * pt.q).sum()
    }

    /// `p₁ > p₂ > … > p_t`.
    pub fn is_descending(&self) -> bool {
        self.parts.windows(2).all(|w| w[0].p > w[1].p)
    }

    /// The same parts sorted so that `p₁ > p₂ > …`, with `order[k]` the
    /// original position of the `k`-th canonical part.
    pub fn canonical(&self) -> (Partition, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.parts.len()).collect();
        order.sort_by(|&a, &b| self.parts[b].p.cmp(&self.parts[a].p));
        let parts = order.iter().map(|&k| self.parts[k]).collect();
        (Partition { parts }, order)
    }

    /// Row/column offset of strip `strip` (0-based).
    pub fn strip_offset(&self, strip: usize) -> usize {
        self.parts[..strip].iter().map(|pt| pt.p * pt.q).sum()
    }

    /// Offset of substrip `alpha` (0-based) of strip `strip` (0-based).
    pub fn substrip_offset(&self, strip: usize, alpha: usize) -> usize {
        debug_assert!(alpha < self.parts[strip].p);
        self.strip_offset(strip) + alpha * self.parts[strip].q
    }

    /// Offset of a 1-based [`SubstripIndex`].
    pub fn offset(&self, idx: SubstripIndex) -> Result<usize> {
        self.check_index(idx)?;
        Ok(self.substrip_offset(idx.strip - 1, idx.substrip - 1))
    }

    pub fn check_index(&self, idx: SubstripIndex) -> Result<()> {
        let ok = idx.strip >= 1
            && idx.strip <= self.strips()
            && idx.substrip >= 1
            && idx.substrip <= self.parts[idx.strip - 1].p;
        if ok {
            Ok(())
        } else {
            Err(Error::Shape(format!("substrip {idx} is outside the partition")))
        }
    }

    /// Substrip size `q_i` of the strip holding `idx`.
    pub fn substrip_size(&self, idx: SubstripIndex) -> usize {
        self.parts[idx.strip - 1].q
    }

    /// All substrips in their natural order `1,1 … p₁,1 | 1,2 … p₂,2 | …`.
    pub fn substrips(&self) -> Vec<SubstripIndex> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, pt)| (1..=pt.p).map(move |a| SubstripIndex::new(i + 1, a)))
            .collect()
    }

    pub fn check_square(&self, m: &CMatrix) -> Result<()> {
        let n = self.size();
        if m.shape() != (n, n) {
            return Err(Error::Shape(format!(
                "expected {n}x{n} for the partition, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.parts.iter().map(|pt| format!("{}:{}", pt.p, pt.q)).collect();
        write!(f, "{}", items.join(","))
    }
}

/// Parses the flag syntax `p1:q1,p2:q2,...`.
impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(',')
            .map(|item| {
                let (p, q) = item
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected p:q, got {item:?}")))?;
                let num = |x: &str| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("invalid count {x:?}")))
                };
                Ok((num(p)?, num(q)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// `J_p(0_q)`: a `p × p` grid of `q × q` subblocks with `I_q` on the block superdiagonal.
pub fn build_block(p: usize, q: usize) -> CMatrix {
    let mut m = CMatrix::zeros(p * q, p * q);
    for a in 0..p.saturating_sub(1) {
        for k in 0..q {
            m[(a * q + k, (a + 1) * q + k)] = GaussianRational::one();
        }
    }
    m
}

pub fn build_j(part: &Partition) -> CMatrix {
    let blocks: Vec<CMatrix> = part.parts().iter().map(|pt| build_block(pt.p, pt.q)).collect();
    CMatrix::direct_sum(&blocks)
}

/// The lexicographic reordering of substrips.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeyrPermutation {
    /// `order[k]` is the substrip placed at position `k` of `M^#`.
    pub order: Vec<SubstripIndex>,
    /// `scalar[new] = old` for individual rows/columns.
    pub scalar: Vec<usize>,
    /// Sizes of the substrips in the new order.
    pub block_sizes: Vec<usize>,
}

impl WeyrPermutation {
    /// The permutation matrix `P` with `M^# = P⁻¹·M·P`; `P[old][new] = 1`.
    pub fn matrix(&self) -> CMatrix {
        let n = self.scalar.len();
        let mut p = CMatrix::zeros(n, n);
        for (new, &old) in self.scalar.iter().enumerate() {
            p[(old, new)] = GaussianRational::one();
        }
        p
    }
}

pub fn weyr_permutation(part: &Partition) -> WeyrPermutation {
    let mut order = part.substrips();
    order.sort_by_key(|idx| (idx.substrip, idx.strip));
    let mut scalar = Vec::with_capacity(part.size());
    let mut block_sizes = Vec::with_capacity(order.len());
    for idx in &order {
        let off = part.substrip_offset(idx.strip - 1, idx.substrip - 1);
        let q = part.substrip_size(*idx);
        scalar.extend(off..off + q);
        block_sizes.push(q);
    }
    WeyrPermutation {
        order,
        scalar,
        block_sizes,
    }
}

/// `M^# = P⁻¹·M·P`.
pub fn to_weyr(m: &CMatrix, part: &Partition) -> Result<CMatrix> {
    part.check_square(m)?;
    let perm = weyr_permutation(part);
    let n = m.rows();
    Ok(CMatrix::from_fn(n, n, |a, b| m[(perm.scalar[a], perm.scalar[b])].clone()))
}

/// Inverse of [`to_weyr`]: `P·M^#·P⁻¹`.
pub fn from_weyr(m: &CMatrix, part: &Partition) -> Result<CMatrix> {
    part.check_square(m)?;
    let perm = weyr_permutation(part);
    let n = m.rows();
    let mut out = CMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            out[(perm.scalar[a], perm.scalar[b])] = m[(a, b)].clone();
        }
    }
    Ok(out)
}

/// Whether every block strictly below the block diagonal is zero.
pub fn is_upper_block_triangular(m: &CMatrix, block_sizes: &[usize]) -> bool {
    let mut offsets = Vec::with_capacity(block_sizes.len());
    let mut acc = 0;
    for &s in block_sizes {
        offsets.push(acc);
        acc += s;
    }
    if m.shape() != (acc, acc) {
        return false;
    }
    (0..block_sizes.len()).all(|a| {
        (0..a).all(|b| m.block_is_zero(offsets[a], offsets[b], block_sizes[a], block_sizes[b]))
    })
}

/// Weyr structure `n_α = Σ_{p_i ≥ α} q_i`, `α = 1..max p`.
pub fn weyr_structure(part: &Partition) -> Vec<usize> {
    let max_p = part.parts().iter().map(|pt| pt.p).max().unwrap_or(0);
    (1..=max_p)
        .map(|a| part.parts().iter().filter(|pt| pt.p >= a).map(|pt| pt.q).sum())
        .collect()
}

/// Whether `m` is the nilpotent Weyr matrix of the given (weakly decreasing)
/// structure: block `(α, α+1)` is `[I; 0]` and every other block is zero.
pub fn is_nilpotent_weyr(m: &CMatrix, structure: &[usize]) -> bool {
    if structure.windows(2).any(|w| w[0] < w[1]) {
        return false;
    }
    let n: usize = structure.iter().sum();
    if m.shape() != (n, n) {
        return false;
    }
    let mut offsets = vec![0];
    for &s in structure {
        offsets.push(offsets.last().unwrap() + s);
    }
    let mut expected = CMatrix::zeros(n, n);
    for a in 0..structure.len().saturating_sub(1) {
        let r0 = offsets[a];
        let c0 = offsets[a + 1];
        for k in 0..structure[a + 1] {
            expected[(r0 + k, c0 + k)] = GaussianRational::one();
        }
    }
    *m == expected
}

/// Nilpotency index: the least `k` with `mᵏ = 0`, or `None` if `m` is not nilpotent.
pub fn nilpotency_index(m: &CMatrix) -> Option<usize> {
    if !m.is_square() {
        return None;
    }
    let mut power = CMatrix::identity(m.rows());
    for k in 1..=m.rows().max(1) {
        power = power.matmul(m).ok()?;
        if power.entries().iter().all(Zero::is_zero) {
            return Some(k);
        }
    }
    None
}
