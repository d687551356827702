//! Representations of a biquiver encoded as a pair `(J, M)`.
//!
//! Vertex `i` becomes the strip of `J_{p_i}(0_{q_i})` with `q_i = dim 𝓡_i`.
//! The matrix of an arrow `α: i → j` or `α: i ⇢ j` sits in a horizontal
//! substrip of strip `j` and a vertical substrip of strip `i`: the row
//! substrip index is even for full arrows and odd for dashed ones, the column
//! substrip index is odd, and no substrip is used twice.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{assemble, check_substrip_uniqueness, Encoding, EncodingKind, Placement, SlotCheck};
use crate::biquiver::{arrow_relation_holds, Arrow, ArrowKind, Biquiver, Representation};
use crate::commutant::extract_params;
use crate::error::{Error, Result};
use crate::exactmat::CMatrix;
use crate::nilstruct::{build_j, Partition, SubstripIndex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr")]
pub struct BiquiverInstance {
    pub biquiver: Biquiver,
    pub representation: Representation,
}

#[derive(Deserialize)]
struct InstanceRepr {
    biquiver: Biquiver,
    representation: Representation,
}

impl TryFrom<InstanceRepr> for BiquiverInstance {
    type Error = Error;
    fn try_from(r: InstanceRepr) -> Result<Self> {
        BiquiverInstance::new(r.biquiver, r.representation)
    }
}

impl BiquiverInstance {
    pub fn new(biquiver: Biquiver, representation: Representation) -> Result<Self> {
        representation.validate(&biquiver)?;
        Ok(Self {
            biquiver,
            representation,
        })
    }
}

/// User-chosen block orders `p_i`, optionally with the dimensions `q_i`
/// (which must then agree with the representation).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOverride(pub Vec<(usize, Option<usize>)>);

impl From<&Partition> for PartitionOverride {
    fn from(part: &Partition) -> Self {
        Self(part.parts().iter().map(|pt| (pt.p, Some(pt.q))).collect())
    }
}

/// Parses `p1,p2,...` or `p1:q1,p2:q2,...`.
impl FromStr for PartitionOverride {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("invalid count {x:?}")))
        };
        s.split(',')
            .map(|item| match item.split_once(':') {
                Some((p, q)) => Ok((num(p)?, Some(num(q)?))),
                None => Ok((num(item)?, None)),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiquiverOptions {
    pub partition: Option<PartitionOverride>,
}

impl BiquiverOptions {
    pub fn with_partition(part: &Partition) -> Self {
        Self {
            partition: Some(part.into()),
        }
    }
}

/// `p_i ≥ max(1, 2n(i))`, pairwise distinct. Vertices are served in order of
/// decreasing `n(i)` (ties by index) and each takes the least free value not
/// below its bound.
pub fn default_partition(bq: &Biquiver, dims: &[usize]) -> Result<Partition> {
    let t = bq.vertex_count();
    if dims.len() != t {
        return Err(Error::Shape(format!("{} dimensions for {t} vertices", dims.len())));
    }
    let mut order: Vec<usize> = (0..t).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(bq.incidence(i + 1)), i));
    let mut ps = vec![0; t];
    for i in order {
        let mut p = (2 * bq.incidence(i + 1)).max(1);
        while ps.contains(&p) {
            p += 1;
        }
        ps[i] = p;
    }
    Partition::new(ps.into_iter().zip(dims.iter().copied()).collect())
}

fn resolve_partition(bq: &Biquiver, dims: &[usize], opts: &BiquiverOptions) -> Result<Partition> {
    let Some(PartitionOverride(items)) = &opts.partition else {
        return default_partition(bq, dims);
    };
    if items.len() != dims.len() {
        return Err(Error::Precondition(format!(
            "partition has {} parts for {} vertices",
            items.len(),
            dims.len()
        )));
    }
    let mut parts = Vec::with_capacity(items.len());
    for (k, (&(p, q), &dim)) in items.iter().zip(dims).enumerate() {
        if let Some(q) = q {
            if q != dim {
                return Err(Error::Precondition(format!(
                    "partition gives q = {q} for vertex {} of dimension {dim}",
                    k + 1
                )));
            }
        }
        parts.push((p, dim));
    }
    Partition::new(parts)
}

fn capacity(strip: usize, class: &'static str, needed: usize, available: usize) -> Error {
    Error::Capacity {
        strip,
        class,
        needed,
        available,
    }
}

/// Where each arrow goes for the given partition.
///
/// Row substrips are handed out per target strip in arrow order, the least
/// free even index to full arrows and the least free odd index to dashed ones.
/// Column substrips are then handed out in order of row position (strip, then
/// substrip), the least free odd index of the source strip.
pub fn placement_plan(bq: &Biquiver, part: &Partition) -> Result<Vec<Placement>> {
    let t = bq.vertex_count();
    if part.strips() != t {
        return Err(Error::Shape(format!("partition has {} strips for {t} vertices", part.strips())));
    }
    for v in 1..=t {
        let p = part.part(v - 1).p;
        let (odd, even) = (p.div_ceil(2), p / 2);
        let arrows_in = bq.arrows().iter().filter(|a| a.target == v);
        let full = arrows_in.clone().filter(|a| a.kind == ArrowKind::Full).count();
        let dashed = arrows_in.count() - full;
        let out = bq.arrows().iter().filter(|a| a.source == v).count();
        if full > even {
            return Err(capacity(v, "even row", full, even));
        }
        if dashed > odd {
            return Err(capacity(v, "odd row", dashed, odd));
        }
        if out > odd {
            return Err(capacity(v, "odd column", out, odd));
        }
    }

    let mut next_even = vec![2usize; t];
    let mut next_odd = vec![1usize; t];
    let rows: Vec<SubstripIndex> = bq
        .arrows()
        .iter()
        .map(|a| {
            let next = match a.kind {
                ArrowKind::Full => &mut next_even[a.target - 1],
                ArrowKind::Dashed => &mut next_odd[a.target - 1],
            };
            let idx = SubstripIndex::new(a.target, *next);
            *next += 2;
            idx
        })
        .collect();

    let mut by_row: Vec<usize> = (0..bq.arrows().len()).collect();
    by_row.sort_by_key(|&k| rows[k]);
    let mut next_col = vec![1usize; t];
    let mut cols = vec![SubstripIndex::new(0, 0); rows.len()];
    for k in by_row {
        let src = bq.arrows()[k].source;
        cols[k] = SubstripIndex::new(src, next_col[src - 1]);
        next_col[src - 1] += 2;
    }

    Ok(bq
        .arrows()
        .iter()
        .zip(rows.into_iter().zip(cols))
        .map(|(a, (row, col))| Placement::new(a.id.clone(), row, col))
        .collect())
}

pub fn encode_biquiver(bq: &Biquiver, rep: &Representation, opts: &BiquiverOptions) -> Result<Encoding> {
    rep.validate(bq)?;
    let partition = resolve_partition(bq, &rep.dims, opts)?;
    let placement = placement_plan(bq, &partition)?;
    let m = assemble(&partition, placement.iter().map(|pl| (pl, rep.mat(&pl.slot).clone())))?;
    Ok(Encoding {
        kind: EncodingKind::Biquiver,
        j: build_j(&partition),
        m,
        partition,
        placement,
    })
}

/// Block-diagonal `S` with `S_i` at the odd substrips of strip `i` and
/// `conj(S_i)` at the even ones.
pub fn witness_biquiver(enc: &Encoding, s_list: &[CMatrix]) -> Result<CMatrix> {
    let part = &enc.partition;
    if s_list.len() != part.strips() {
        return Err(Error::Shape(format!(
            "{} base-change matrices for {} strips",
            s_list.len(),
            part.strips()
        )));
    }
    let mut diag = Vec::new();
    for (i, (s, pt)) in s_list.iter().zip(part.parts()).enumerate() {
        if s.shape() != (pt.q, pt.q) {
            return Err(Error::Shape(format!("S_{} must be {}x{}", i + 1, pt.q, pt.q)));
        }
        if !s.is_nonsingular() {
            return Err(Error::Singular(format!("S_{}", i + 1)));
        }
        let sb = s.conj();
        diag.extend((0..pt.p).map(|a| if a % 2 == 0 { s.clone() } else { sb.clone() }));
    }
    Ok(CMatrix::direct_sum(&diag))
}

/// `S_i` read from the first diagonal subblock of strip `i`, after checking
/// that `s` solves `conj(S)·J = J·S`.
pub fn extract_biquiver_witness(enc: &Encoding, s: &CMatrix) -> Result<Vec<CMatrix>> {
    let part = &enc.partition;
    extract_params(part, s)?;
    (0..part.strips())
        .map(|i| {
            let (off, q) = (part.strip_offset(i), part.part(i).q);
            let si = s.block(off, off, q, q);
            if si.is_nonsingular() {
                Ok(si)
            } else {
                Err(Error::Singular(format!("diagonal block S_{} is singular", i + 1)))
            }
        })
        .collect()
}

/// Per arrow, the relation `R·S_i = S_j·R′` (full) or `R·S_i = conj(S_j)·R′` (dashed).
pub(super) fn arrow_relations(a: &BiquiverInstance, b: &BiquiverInstance, s_list: &[CMatrix]) -> Result<Vec<SlotCheck>> {
    if a.biquiver != b.biquiver || s_list.len() != a.biquiver.vertex_count() {
        return Err(Error::Shape("representations and witnesses do not match".into()));
    }
    a.biquiver
        .arrows()
        .iter()
        .map(|arrow| {
            let holds = arrow_relation_holds(
                arrow,
                a.representation.mat(&arrow.id),
                b.representation.mat(&arrow.id),
                &s_list[arrow.source - 1],
                &s_list[arrow.target - 1],
            )?;
            Ok(SlotCheck {
                slot: arrow.id.clone(),
                holds,
            })
        })
        .collect()
}

/// Rebuilds the biquiver and its representation: each slot is an arrow from
/// its column strip to its row strip, dashed exactly when the row substrip
/// index is odd.
pub(super) fn decode(enc: &Encoding) -> Result<BiquiverInstance> {
    let part = &enc.partition;
    let mut arrows = Vec::with_capacity(enc.placement.len());
    let mut mats = BTreeMap::new();
    for pl in &enc.placement {
        if pl.col.substrip % 2 == 0 {
            return Err(Error::Contract(format!(
                "slot {:?} sits in even column substrip {}",
                pl.slot, pl.col
            )));
        }
        let kind = if pl.row.substrip % 2 == 0 {
            ArrowKind::Full
        } else {
            ArrowKind::Dashed
        };
        arrows.push(Arrow::new(&pl.slot, pl.col.strip, pl.row.strip, kind));
        mats.insert(pl.slot.clone(), enc.block(pl.row, pl.col)?);
    }
    let biquiver = Biquiver::new(part.strips(), arrows)?;
    let dims = part.parts().iter().map(|pt| pt.q).collect();
    let representation = Representation::new(&biquiver, dims, mats)?;
    let rebuilt = assemble(part, enc.placement.iter().map(|pl| (pl, representation.mat(&pl.slot).clone())))?;
    if rebuilt != enc.m {
        return Err(Error::Contract("M has nonzero entries outside the arrow slots".into()));
    }
    check_substrip_uniqueness(part, &enc.m)?;
    BiquiverInstance::new(biquiver, representation)
}
