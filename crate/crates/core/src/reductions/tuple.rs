//! Tuples `(X₁, …, X_p; Y₁, …, Y_q)` of `n × n` matrices where the `X_i` are
//! reduced by similarity and the `Y_j` by consimilarity through one common
//! transforming matrix `C` (or its conjugate, alternately).
//!
//! The encoding is `J = J_m(0_n)` with `M` the direct sum of a `(p+1)`-block
//! matrix carrying `X₁, …, X_p` on its block superdiagonal and
//! `Y₁ ⊕ … ⊕ Y_q` (`p` odd) or `0 ⊕ Y₁ ⊕ … ⊕ Y_q` (`p` even).

use serde::{Deserialize, Serialize};

use super::{assemble, Encoding, EncodingKind, Placement, SlotCheck};
use crate::commutant::extract_params;
use crate::error::{Error, Result};
use crate::exactmat::CMatrix;
use crate::nilstruct::{build_j, Partition, SubstripIndex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr")]
pub struct TupleInstance {
    pub n: usize,
    #[serde(rename = "X")]
    pub xs: Vec<CMatrix>,
    #[serde(rename = "Y")]
    pub ys: Vec<CMatrix>,
}

#[derive(Deserialize)]
struct TupleRepr {
    n: usize,
    #[serde(rename = "X")]
    xs: Vec<CMatrix>,
    #[serde(rename = "Y")]
    ys: Vec<CMatrix>,
}

impl TryFrom<TupleRepr> for TupleInstance {
    type Error = Error;
    fn try_from(r: TupleRepr) -> Result<Self> {
        TupleInstance::new(r.n, r.xs, r.ys)
    }
}

impl TupleInstance {
    pub fn new(n: usize, xs: Vec<CMatrix>, ys: Vec<CMatrix>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("tuple matrices must have size n >= 1".into()));
        }
        if let Some(bad) = xs.iter().chain(&ys).find(|m| m.shape() != (n, n)) {
            return Err(Error::Shape(format!(
                "tuple matrices must be {n}x{n}, got {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        Ok(Self { n, xs, ys })
    }

    pub fn p(&self) -> usize {
        self.xs.len()
    }

    pub fn q(&self) -> usize {
        self.ys.len()
    }

    /// Block position (1-based) of `Y₁`; always odd.
    fn first_y_block(&self) -> usize {
        let p = self.p();
        if p % 2 == 1 {
            p + 2
        } else {
            p + 3
        }
    }

    /// Number `m` of `n × n` diagonal blocks of `M`.
    pub fn block_count(&self) -> usize {
        self.first_y_block() - 1 + self.q()
    }

    /// The tuple obtained from `C` by the defining rules:
    /// `X_k ↦ conj(C)⁻¹X_k·conj(C)` (k odd), `C⁻¹X_kC` (k even),
    /// `Y_k ↦ conj(C)⁻¹Y_kC` (k odd), `C⁻¹Y_k·conj(C)` (k even).
    pub fn transform(&self, c: &CMatrix) -> Result<TupleInstance> {
        let cb = c.conj();
        let (ci, cbi) = (c.inverse()?, cb.inverse()?);
        let xs = self
            .xs
            .iter()
            .enumerate()
            .map(|(k, x)| {
                if k % 2 == 0 {
                    CMatrix::chain(&[&cbi, x, &cb])
                } else {
                    CMatrix::chain(&[&ci, x, c])
                }
            })
            .collect::<Result<_>>()?;
        let ys = self
            .ys
            .iter()
            .enumerate()
            .map(|(k, y)| {
                if k % 2 == 0 {
                    CMatrix::chain(&[&cbi, y, c])
                } else {
                    CMatrix::chain(&[&ci, y, &cb])
                }
            })
            .collect::<Result<_>>()?;
        TupleInstance::new(self.n, xs, ys)
    }
}

fn tuple_partition(n: usize, m: usize) -> Result<Partition> {
    Partition::new(vec![(m, n)])
}

fn layout(inst: &TupleInstance) -> Vec<Placement> {
    let at = |b| SubstripIndex::new(1, b);
    let y0 = inst.first_y_block();
    let xs = (1..=inst.p()).map(|k| Placement::new(format!("X{k}"), at(k), at(k + 1)));
    let ys = (0..inst.q()).map(|k| Placement::new(format!("Y{}", k + 1), at(y0 + k), at(y0 + k)));
    xs.chain(ys).collect()
}

pub fn encode_tuple(inst: &TupleInstance) -> Encoding {
    let m_blocks = inst.block_count();
    let partition = tuple_partition(inst.n, m_blocks).expect("validated instance gives a valid partition");
    let placement = layout(inst);
    let m = assemble(&partition, placement.iter().zip(inst.xs.iter().chain(&inst.ys).cloned()))
        .expect("validated instance blocks are n x n");
    Encoding {
        kind: EncodingKind::Tuple {
            n: inst.n,
            p: inst.p(),
            q: inst.q(),
        },
        j: build_j(&partition),
        m,
        partition,
        placement,
    }
}

fn check_same_shape(a: &TupleInstance, b: &TupleInstance, c: &CMatrix) -> Result<()> {
    if a.n != b.n || a.p() != b.p() || a.q() != b.q() || c.shape() != (a.n, a.n) {
        return Err(Error::Shape("tuples and C must share n, p and q".into()));
    }
    Ok(())
}

/// The inverse-free forms `X_k·conj(C) = conj(C)·X′_k` (k odd),
/// `X_kC = CX′_k` (k even), `Y_kC = conj(C)·Y′_k` (k odd),
/// `Y_k·conj(C) = CY′_k` (k even).
pub fn tuple_relations(c: &CMatrix, a: &TupleInstance, b: &TupleInstance) -> Result<Vec<SlotCheck>> {
    check_same_shape(a, b, c)?;
    let cb = c.conj();
    let mut out = Vec::with_capacity(a.p() + a.q());
    for (k, (x, x2)) in a.xs.iter().zip(&b.xs).enumerate() {
        let s = if k % 2 == 0 { &cb } else { c };
        out.push(SlotCheck {
            slot: format!("X{}", k + 1),
            holds: x.matmul(s)? == s.matmul(x2)?,
        });
    }
    for (k, (y, y2)) in a.ys.iter().zip(&b.ys).enumerate() {
        let (right, left) = if k % 2 == 0 { (c, &cb) } else { (&cb, c) };
        out.push(SlotCheck {
            slot: format!("Y{}", k + 1),
            holds: y.matmul(right)? == left.matmul(y2)?,
        });
    }
    Ok(out)
}

/// Whether `b` is obtained from `a` by the rules of [`TupleInstance::transform`].
pub fn verify_tuple_conditions(c: &CMatrix, a: &TupleInstance, b: &TupleInstance) -> Result<bool> {
    check_same_shape(a, b, c)?;
    Ok(a.transform(c)? == *b)
}

/// `C ⊕ C̄ ⊕ C ⊕ …` with `m` summands.
pub fn witness_tuple(c: &CMatrix, m: usize) -> Result<CMatrix> {
    if !c.is_square() || !c.is_nonsingular() {
        return Err(Error::Singular("witness C must be square and nonsingular".into()));
    }
    let cb = c.conj();
    let parts: Vec<CMatrix> = (0..m).map(|k| if k % 2 == 0 { c.clone() } else { cb.clone() }).collect();
    Ok(CMatrix::direct_sum(&parts))
}

/// The leading `n × n` block of `s`, after checking `conj(S)·J = J·S` for
/// `J = J_m(0_n)`.
pub fn extract_tuple_witness(s: &CMatrix, n: usize, m: usize) -> Result<CMatrix> {
    extract_params(&tuple_partition(n, m)?, s)?;
    let c = s.block(0, 0, n, n);
    if !c.is_nonsingular() {
        return Err(Error::Singular("leading block of S is singular".into()));
    }
    Ok(c)
}

pub(super) fn decode(enc: &Encoding) -> Result<TupleInstance> {
    let EncodingKind::Tuple { n, p, q } = enc.kind else {
        return Err(Error::Contract("not a tuple encoding".into()));
    };
    let zeros = TupleInstance::new(n, vec![CMatrix::zeros(n, n); p], vec![CMatrix::zeros(n, n); q])?;
    if enc.partition != tuple_partition(n, zeros.block_count())? || enc.placement != layout(&zeros) {
        return Err(Error::Contract("tuple encoding has a nonstandard layout".into()));
    }
    let mut blocks = enc
        .placement
        .iter()
        .map(|pl| enc.block(pl.row, pl.col))
        .collect::<Result<Vec<_>>>()?;
    let ys = blocks.split_off(p);
    let inst = TupleInstance::new(n, blocks, ys)?;
    if encode_tuple(&inst).m != enc.m {
        return Err(Error::Contract("M has nonzero entries outside the tuple slots".into()));
    }
    Ok(inst)
}
