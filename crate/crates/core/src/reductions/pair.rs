//! Pairs `(X, Y)` up to consimilarity `(X, Y) ↦ conj(C)⁻¹(X, Y)C`, encoded as
//! a pair `(J, M)` whose semilinear operators commute.

use serde::{Deserialize, Serialize};

use super::{assemble, Encoding, EncodingKind, Placement, SlotCheck};
use crate::commutant::extract_params;
use crate::error::{Error, Result};
use crate::exactmat::CMatrix;
use crate::nilstruct::{build_j, Partition, SubstripIndex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PairRepr")]
pub struct PairInstance {
    #[serde(rename = "X")]
    pub x: CMatrix,
    #[serde(rename = "Y")]
    pub y: CMatrix,
}

#[derive(Deserialize)]
struct PairRepr {
    #[serde(rename = "X")]
    x: CMatrix,
    #[serde(rename = "Y")]
    y: CMatrix,
}

impl TryFrom<PairRepr> for PairInstance {
    type Error = Error;
    fn try_from(r: PairRepr) -> Result<Self> {
        PairInstance::new(r.x, r.y)
    }
}

impl PairInstance {
    pub fn new(x: CMatrix, y: CMatrix) -> Result<Self> {
        if !x.is_square() || x.shape() != y.shape() {
            return Err(Error::Shape(format!(
                "X and Y must be square of equal size, got {:?} and {:?}",
                x.shape(),
                y.shape()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.rows()
    }

    /// `(conj(C)⁻¹XC, conj(C)⁻¹YC)`.
    pub fn transform(&self, c: &CMatrix) -> Result<PairInstance> {
        let inv = c.conj().inverse()?;
        PairInstance::new(CMatrix::chain(&[&inv, &self.x, c])?, CMatrix::chain(&[&inv, &self.y, c])?)
    }
}

/// `J₄(0_n) ⊕ J₁(0_n)`.
pub fn pair_partition(n: usize) -> Result<Partition> {
    Partition::new(vec![(4, n), (1, n)])
}

fn layout() -> Vec<Placement> {
    let at = SubstripIndex::new;
    vec![
        Placement::new("X", at(1, 1), at(1, 3)),
        Placement::new("Y", at(1, 1), at(2, 1)),
        Placement::new("conj(X)", at(1, 2), at(1, 4)),
        Placement::new("I", at(2, 1), at(1, 4)),
    ]
}

/// `M` carries `X`, `Y`, `conj(X)` and `I` in the 5×5 grid of `n × n` blocks
/// at positions (1,3), (1,5), (2,4) and (5,4).
pub fn encode_commuting_pair(x: &CMatrix, y: &CMatrix) -> Result<Encoding> {
    let inst = PairInstance::new(x.clone(), y.clone())?;
    let n = inst.n();
    let partition = pair_partition(n)?;
    let placement = layout();
    let blocks = [x.clone(), y.clone(), x.conj(), CMatrix::identity(n)];
    let m = assemble(&partition, placement.iter().zip(blocks))?;
    Ok(Encoding {
        kind: EncodingKind::CommutingPair { n },
        j: build_j(&partition),
        m,
        partition,
        placement,
    })
}

/// `diag(C, C̄, C, C̄, C)`.
pub fn witness_commuting_pair(c: &CMatrix) -> Result<CMatrix> {
    if !c.is_square() || !c.is_nonsingular() {
        return Err(Error::Singular("witness C must be square and nonsingular".into()));
    }
    let cb = c.conj();
    Ok(CMatrix::direct_sum(&[c.clone(), cb.clone(), c.clone(), cb, c.clone()]))
}

/// The leading `n × n` block of `s`, after checking that `s` solves
/// `conj(S)·J = J·S`.
pub fn extract_commuting_witness(s: &CMatrix, n: usize) -> Result<CMatrix> {
    let part = pair_partition(n)?;
    extract_params(&part, s)?;
    let c = s.block(0, 0, n, n);
    if !c.is_nonsingular() {
        return Err(Error::Singular("leading block of S is singular".into()));
    }
    Ok(c)
}

/// `XC = C̄X′` and `YC = C̄Y′`.
pub fn pair_relations(c: &CMatrix, a: &PairInstance, b: &PairInstance) -> Result<Vec<SlotCheck>> {
    let cb = c.conj();
    Ok(vec![
        SlotCheck {
            slot: "X".into(),
            holds: a.x.matmul(c)? == cb.matmul(&b.x)?,
        },
        SlotCheck {
            slot: "Y".into(),
            holds: a.y.matmul(c)? == cb.matmul(&b.y)?,
        },
    ])
}

pub(super) fn decode(enc: &Encoding) -> Result<PairInstance> {
    let EncodingKind::CommutingPair { n } = enc.kind else {
        return Err(Error::Contract("not a commuting-pair encoding".into()));
    };
    if enc.partition != pair_partition(n)? || enc.placement != layout() {
        return Err(Error::Contract("commuting-pair encoding has a nonstandard layout".into()));
    }
    let at = SubstripIndex::new;
    let x = enc.block(at(1, 1), at(1, 3))?;
    let y = enc.block(at(1, 1), at(2, 1))?;
    if encode_commuting_pair(&x, &y)?.m != enc.m {
        return Err(Error::Contract("M is not the commuting-pair encoding of its X and Y blocks".into()));
    }
    PairInstance::new(x, y)
}
