//! Encodings of three classification problems into pairs `(J, M)` up to
//! consimilarity: commuting pairs of semilinear operators, mixed tuples of
//! similarity and consimilarity data, and representations of biquivers.
//!
//! Every encoding fixes `J = J_{p₁}(0_{q₁}) ⊕ … ⊕ J_{p_t}(0_{q_t})` and places
//! the instance data as subblocks of `M`. The [`Placement`] list records where
//! each named slot lives so that encodings can be decoded and compared.

mod pair;
mod quiver;
mod tuple;

pub use pair::{
    encode_commuting_pair, extract_commuting_witness, pair_relations, pair_partition, witness_commuting_pair,
    PairInstance,
};
pub use quiver::{
    default_partition, encode_biquiver, extract_biquiver_witness, placement_plan, witness_biquiver, BiquiverInstance,
    BiquiverOptions, PartitionOverride,
};
pub use tuple::{
    encode_tuple, extract_tuple_witness, tuple_relations, verify_tuple_conditions, witness_tuple, TupleInstance,
};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::commutant::check_semicommute;
use crate::error::{Error, Result};
use crate::exactmat::{CMatrix, RealLinearSystem, RealSolution};
use crate::nilstruct::{build_j, Partition, SubstripIndex};

/// Which reduction produced an encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum EncodingKind {
    CommutingPair { n: usize },
    Tuple { n: usize, p: usize, q: usize },
    Biquiver,
}

/// A named subblock of `M` at row substrip `row` and column substrip `col`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub slot: String,
    pub row: SubstripIndex,
    pub col: SubstripIndex,
}

impl Placement {
    fn new(slot: impl Into<String>, row: SubstripIndex, col: SubstripIndex) -> Self {
        Self {
            slot: slot.into(),
            row,
            col,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EncodingRepr")]
pub struct Encoding {
    pub kind: EncodingKind,
    #[serde(rename = "J")]
    pub j: CMatrix,
    #[serde(rename = "M")]
    pub m: CMatrix,
    pub partition: Partition,
    pub placement: Vec<Placement>,
}

#[derive(Deserialize)]
struct EncodingRepr {
    kind: EncodingKind,
    #[serde(rename = "J")]
    j: CMatrix,
    #[serde(rename = "M")]
    m: CMatrix,
    partition: Partition,
    placement: Vec<Placement>,
}

impl TryFrom<EncodingRepr> for Encoding {
    type Error = Error;
    fn try_from(r: EncodingRepr) -> Result<Self> {
        let enc = Encoding {
            kind: r.kind,
            j: r.j,
            m: r.m,
            partition: r.partition,
            placement: r.placement,
        };
        enc.validate()?;
        Ok(enc)
    }
}

impl Encoding {
    /// `J` matches the partition, `M` has the right size, and every placement
    /// names a valid substrip pair.
    pub fn validate(&self) -> Result<()> {
        if self.j != build_j(&self.partition) {
            return Err(Error::Contract("J is not the block-Jordan matrix of the partition".into()));
        }
        self.partition.check_square(&self.m)?;
        for pl in &self.placement {
            self.partition.check_index(pl.row)?;
            self.partition.check_index(pl.col)?;
        }
        Ok(())
    }

    /// The subblock of `M` at a row and a column substrip.
    pub fn block(&self, row: SubstripIndex, col: SubstripIndex) -> Result<CMatrix> {
        block_of(&self.partition, &self.m, row, col)
    }

    pub fn slot(&self, name: &str) -> Option<&Placement> {
        self.placement.iter().find(|pl| pl.slot == name)
    }

    /// The pair `(J, M)` as a [`MatrixPair`](crate::semilinear::MatrixPair).
    pub fn pair(&self) -> crate::semilinear::MatrixPair {
        crate::semilinear::MatrixPair {
            first: self.j.clone(),
            second: self.m.clone(),
        }
    }
}

fn block_of(part: &Partition, m: &CMatrix, row: SubstripIndex, col: SubstripIndex) -> Result<CMatrix> {
    let r0 = part.offset(row)?;
    let c0 = part.offset(col)?;
    Ok(m.block(r0, c0, part.substrip_size(row), part.substrip_size(col)))
}

/// Writes each `(placement, block)` into a zero matrix of the partition's size.
fn assemble<'a>(part: &Partition, blocks: impl IntoIterator<Item = (&'a Placement, CMatrix)>) -> Result<CMatrix> {
    let n = part.size();
    let mut m = CMatrix::zeros(n, n);
    for (pl, b) in blocks {
        let shape = (part.substrip_size(pl.row), part.substrip_size(pl.col));
        if b.shape() != shape {
            return Err(Error::Shape(format!(
                "slot {:?} needs a {}x{} block, got {}x{}",
                pl.slot,
                shape.0,
                shape.1,
                b.rows(),
                b.cols()
            )));
        }
        m.set_block(part.offset(pl.row)?, part.offset(pl.col)?, &b);
    }
    Ok(m)
}

/// Checks that every horizontal and every vertical substrip of `m` contains at
/// most one nonzero subblock.
pub fn check_substrip_uniqueness(part: &Partition, m: &CMatrix) -> Result<()> {
    part.check_square(m)?;
    let subs = part.substrips();
    let nonzero = |r: &SubstripIndex, c: &SubstripIndex| {
        !m.block_is_zero(
            part.offset(*r).unwrap(),
            part.offset(*c).unwrap(),
            part.substrip_size(*r),
            part.substrip_size(*c),
        )
    };
    for r in &subs {
        let count = subs.iter().filter(|c| nonzero(r, c)).count();
        if count > 1 {
            return Err(Error::Contract(format!(
                "horizontal substrip {r} has {count} nonzero subblocks"
            )));
        }
    }
    for c in &subs {
        let count = subs.iter().filter(|r| nonzero(r, c)).count();
        if count > 1 {
            return Err(Error::Contract(format!("vertical substrip {c} has {count} nonzero subblocks")));
        }
    }
    Ok(())
}

/// An instance of any of the three source problems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Instance {
    Tuple(TupleInstance),
    Pair(PairInstance),
    Biquiver(BiquiverInstance),
}

/// Recovers the instance an encoding was built from, rejecting matrices that
/// are not exactly an encoding of the declared kind.
pub fn decode(enc: &Encoding) -> Result<Instance> {
    enc.validate()?;
    match &enc.kind {
        EncodingKind::CommutingPair { .. } => pair::decode(enc).map(Instance::Pair),
        EncodingKind::Tuple { .. } => tuple::decode(enc).map(Instance::Tuple),
        EncodingKind::Biquiver => quiver::decode(enc).map(Instance::Biquiver),
    }
}

/// Two encodings can be compared when they share kind, partition and layout.
pub fn check_compatible(a: &Encoding, b: &Encoding) -> Result<()> {
    if a.kind != b.kind {
        return Err(Error::Contract("encodings are of different kinds".into()));
    }
    if a.partition != b.partition {
        return Err(Error::Contract(format!(
            "encodings use different partitions {} and {}",
            a.partition, b.partition
        )));
    }
    if a.placement != b.placement {
        return Err(Error::Contract("encodings use different placements".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    /// `conj(S)·J = J·S`.
    pub commutant_ok: bool,
    /// `M·S = conj(S)·M′`.
    pub transport_ok: bool,
    pub nonsingular: bool,
}

impl WitnessReport {
    pub fn all_ok(&self) -> bool {
        self.commutant_ok && self.transport_ok && self.nonsingular
    }
}

/// Whether `s` carries `(J, M)` to `(J, M′)` by consimilarity.
pub fn verify_witness(enc: &Encoding, enc2: &Encoding, s: &CMatrix) -> Result<WitnessReport> {
    enc.validate()?;
    enc2.validate()?;
    if enc.j != enc2.j {
        return Err(Error::Contract("encodings have different J".into()));
    }
    enc.partition.check_square(s)?;
    Ok(WitnessReport {
        commutant_ok: check_semicommute(&enc.j, s)?,
        transport_ok: enc.m.matmul(s)? == s.conj().matmul(&enc2.m)?,
        nonsingular: s.is_nonsingular(),
    })
}

/// All `S` (singular ones included) with `conj(S)·J = J·S` and
/// `M·S = conj(S)·M′`, solved over the realified unknowns.
pub fn joint_oracle(enc: &Encoding, enc2: &Encoding) -> Result<RealSolution> {
    if enc.j != enc2.j {
        return Err(Error::Contract("encodings have different J".into()));
    }
    let n = enc.partition.size();
    let mut sys = RealLinearSystem::new(n, n);
    let s = sys.unknown();
    sys.require_zero(&s.conj().right_mul(&enc.j)?.minus(&s.left_mul(&enc.j)?)?);
    sys.require_zero(&s.left_mul(&enc.m)?.minus(&s.conj().right_mul(&enc2.m)?)?);
    sys.solve()
}

/// A nonsingular element of the joint solution space, if random sampling finds one.
pub fn sample_joint_witness<R: Rng>(enc: &Encoding, enc2: &Encoding, rng: &mut R, attempts: usize) -> Result<Option<CMatrix>> {
    Ok(joint_oracle(enc, enc2)?.sample_nonsingular(rng, attempts))
}

/// Whether one named relation between the decoded instances holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlotCheck {
    pub slot: String,
    pub holds: bool,
}

/// Source-problem witness read off a consimilarity `S` between two encodings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extraction {
    /// `[C]` for pairs and tuples, `[S_1, …, S_t]` for biquivers.
    pub witnesses: Vec<CMatrix>,
    pub relations: Vec<SlotCheck>,
}

impl Extraction {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
    }
}

/// Extracts the source-problem witness from `s` and checks every defining
/// relation between the decoded instances.
pub fn extract_witness(enc: &Encoding, enc2: &Encoding, s: &CMatrix) -> Result<Extraction> {
    check_compatible(enc, enc2)?;
    let (a, b) = (decode(enc)?, decode(enc2)?);
    match (&enc.kind, a, b) {
        (EncodingKind::CommutingPair { n }, Instance::Pair(x), Instance::Pair(y)) => {
            let c = extract_commuting_witness(s, *n)?;
            let relations = pair_relations(&c, &x, &y)?;
            Ok(Extraction {
                witnesses: vec![c],
                relations,
            })
        }
        (EncodingKind::Tuple { n, .. }, Instance::Tuple(x), Instance::Tuple(y)) => {
            let c = extract_tuple_witness(s, *n, x.block_count())?;
            let relations = tuple_relations(&c, &x, &y)?;
            Ok(Extraction {
                witnesses: vec![c],
                relations,
            })
        }
        (EncodingKind::Biquiver, Instance::Biquiver(x), Instance::Biquiver(y)) => {
            let witnesses = extract_biquiver_witness(enc, s)?;
            let relations = quiver::arrow_relations(&x, &y, &witnesses)?;
            Ok(Extraction { witnesses, relations })
        }
        _ => Err(Error::Contract("decoded instance does not match the encoding kind".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::random::{random_matrix, random_nonsingular, seeded_rng};

    #[test]
    fn encoding_json_round_trip() {
        let mut rng = seeded_rng(1);
        let enc = encode_commuting_pair(&random_matrix(&mut rng, 2, 2), &random_matrix(&mut rng, 2, 2)).unwrap();
        let text = serde_json::to_string(&enc).unwrap();
        assert!(text.contains(r#""kind":{"type":"commuting-pair","n":2}"#));
        let back: Encoding = serde_json::from_str(&text).unwrap();
        assert_eq!(back, enc);

        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["J"] = serde_json::to_value(CMatrix::zeros(10, 10)).unwrap();
        assert!(serde_json::from_value::<Encoding>(value).is_err());
    }

    #[test]
    fn uniqueness_check() {
        let part = Partition::new(vec![(2, 1), (1, 1)]).unwrap();
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 1)] = 1.into();
        assert!(check_substrip_uniqueness(&part, &m).is_ok());
        m[(0, 2)] = 1.into();
        assert!(matches!(check_substrip_uniqueness(&part, &m), Err(Error::Contract(_))));
        m[(0, 2)] = 0.into();
        m[(2, 1)] = 1.into();
        assert!(check_substrip_uniqueness(&part, &m).is_err());
    }

    #[test]
    fn verify_witness_reports() {
        let mut rng = seeded_rng(3);
        let x = random_matrix(&mut rng, 1, 1);
        let y = random_matrix(&mut rng, 1, 1);
        let c = random_nonsingular(&mut rng, 1);
        let enc = encode_commuting_pair(&x, &y).unwrap();
        let s = witness_commuting_pair(&c).unwrap();
        let report = verify_witness(&enc, &enc, &s).unwrap();
        assert!(report.commutant_ok && report.nonsingular);
        let id = CMatrix::identity(5);
        assert!(verify_witness(&enc, &enc, &id).unwrap().all_ok());
        assert!(verify_witness(&enc, &enc, &CMatrix::zeros(4, 4)).is_err());
    }
}
