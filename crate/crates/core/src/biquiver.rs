//! Biquivers (directed graphs with full and dashed arrows), their
//! representations, and the action of base change.
//!
//! A representation assigns a dimension `q_i` to each vertex and a `q_j × q_i`
//! matrix to each arrow `i → j` or `i ⇢ j`. Changing bases by nonsingular
//! `S_1, …, S_t` sends `R_α` to `S_j⁻¹·R_α·S_i` for a full arrow and to
//! `conj(S_j)⁻¹·R_α·S_i` for a dashed one.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::random::{random_matrix, random_nonsingular, seeded_rng};
use crate::exactmat::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowKind {
    /// A linear map.
    Full,
    /// A semilinear map.
    Dashed,
}

/// An arrow `source → target`; vertices are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
    pub kind: ArrowKind,
}

impl Arrow {
    pub fn new(id: &str, source: usize, target: usize, kind: ArrowKind) -> Self {
        Self {
            id: id.to_string(),
            source,
            target,
            kind,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BiquiverRepr")]
pub struct Biquiver {
    vertices: usize,
    arrows: Vec<Arrow>,
}

#[derive(Deserialize)]
struct BiquiverRepr {
    vertices: usize,
    arrows: Vec<Arrow>,
}

impl TryFrom<BiquiverRepr> for Biquiver {
    type Error = Error;
    fn try_from(r: BiquiverRepr) -> Result<Self> {
        Biquiver::new(r.vertices, r.arrows)
    }
}

impl Biquiver {
    /// Loops and parallel arrows are allowed; ids must be unique.
    pub fn new(vertices: usize, arrows: Vec<Arrow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for a in &arrows {
            if !seen.insert(a.id.as_str()) {
                return Err(Error::Precondition(format!("duplicate arrow id {:?}", a.id)));
            }
            for v in [a.source, a.target] {
                if v == 0 || v > vertices {
                    return Err(Error::Precondition(format!(
                        "arrow {:?} has endpoint {v} outside 1..={vertices}",
                        a.id
                    )));
                }
            }
        }
        Ok(Self { vertices, arrows })
    }

    /// The six-arrow biquiver on three vertices with
    /// `A: 2 ⇢ 1`, `B: 3 → 1`, `C: 2 ⇢ 2`, `D: 2 → 3`, `E: 2 ⇢ 3`, `F: 3 → 3`.
    pub fn six_arrow_example() -> Self {
        use ArrowKind::{Dashed, Full};
        Self::new(
            3,
            vec![
                Arrow::new("A", 2, 1, Dashed),
                Arrow::new("B", 3, 1, Full),
                Arrow::new("C", 2, 2, Dashed),
                Arrow::new("D", 2, 3, Full),
                Arrow::new("E", 2, 3, Dashed),
                Arrow::new("F", 3, 3, Full),
            ],
        )
        .expect("example biquiver is well formed")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.id == id)
    }

    /// Number of arrow ends at `vertex` (1-based); a loop counts twice.
    pub fn incidence(&self, vertex: usize) -> usize {
        self.arrows
            .iter()
            .map(|a| usize::from(a.source == vertex) + usize::from(a.target == vertex))
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub mats: BTreeMap<String, CMatrix>,
}

impl Representation {
    pub fn new(bq: &Biquiver, dims: Vec<usize>, mats: BTreeMap<String, CMatrix>) -> Result<Self> {
        let rep = Self { dims, mats };
        rep.validate(bq)?;
        Ok(rep)
    }

    /// Every arrow has a matrix of shape `q_target × q_source` and no extra
    /// matrices are present.
    pub fn validate(&self, bq: &Biquiver) -> Result<()> {
        if self.dims.len() != bq.vertex_count() {
            return Err(Error::Shape(format!(
                "{} dimensions for {} vertices",
                self.dims.len(),
                bq.vertex_count()
            )));
        }
        for a in bq.arrows() {
            let m = self
                .mats
                .get(&a.id)
                .ok_or_else(|| Error::Shape(format!("no matrix for arrow {:?}", a.id)))?;
            let expected = (self.dims[a.target - 1], self.dims[a.source - 1]);
            if m.shape() != expected {
                return Err(Error::Shape(format!(
                    "arrow {:?} needs a {}x{} matrix, got {}x{}",
                    a.id,
                    expected.0,
                    expected.1,
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if let Some(extra) = self.mats.keys().find(|id| bq.arrow(id).is_none()) {
            return Err(Error::Shape(format!("matrix for unknown arrow {extra:?}")));
        }
        Ok(())
    }

    pub fn mat(&self, id: &str) -> &CMatrix {
        &self.mats[id]
    }
}

fn check_base_change(rep: &Representation, s: &[CMatrix]) -> Result<()> {
    if s.len() != rep.dims.len() {
        return Err(Error::Shape(format!(
            "{} base-change matrices for {} vertices",
            s.len(),
            rep.dims.len()
        )));
    }
    for (k, (m, &q)) in s.iter().zip(&rep.dims).enumerate() {
        if m.shape() != (q, q) {
            return Err(Error::Shape(format!("base change at vertex {} must be {q}x{q}", k + 1)));
        }
        if !m.is_nonsingular() {
            return Err(Error::Singular(format!("base change at vertex {}", k + 1)));
        }
    }
    Ok(())
}

/// Transforms every arrow matrix by the base change `s[0], …, s[t-1]`.
pub fn base_change(bq: &Biquiver, rep: &Representation, s: &[CMatrix]) -> Result<Representation> {
    rep.validate(bq)?;
    check_base_change(rep, s)?;
    let mut inv_plain = Vec::with_capacity(s.len());
    let mut inv_conj = Vec::with_capacity(s.len());
    for m in s {
        inv_plain.push(m.inverse()?);
        inv_conj.push(m.conj().inverse()?);
    }
    let mut mats = BTreeMap::new();
    for a in bq.arrows() {
        let left = match a.kind {
            ArrowKind::Full => &inv_plain[a.target - 1],
            ArrowKind::Dashed => &inv_conj[a.target - 1],
        };
        let r = CMatrix::chain(&[left, rep.mat(&a.id), &s[a.source - 1]])?;
        mats.insert(a.id.clone(), r);
    }
    Ok(Representation {
        dims: rep.dims.clone(),
        mats,
    })
}

/// Whether `base_change(rep, s) = other` exactly.
pub fn equiv_check(bq: &Biquiver, rep: &Representation, other: &Representation, s: &[CMatrix]) -> Result<bool> {
    other.validate(bq)?;
    Ok(base_change(bq, rep, s)? == *other)
}

/// The inverse-free form of the base-change relation for one arrow:
/// `R·S_source = S_target·R′` (full) or `R·S_source = conj(S_target)·R′` (dashed).
pub fn arrow_relation_holds(
    arrow: &Arrow,
    r: &CMatrix,
    r_new: &CMatrix,
    s_source: &CMatrix,
    s_target: &CMatrix,
) -> Result<bool> {
    let lhs = r.matmul(s_source)?;
    let rhs = match arrow.kind {
        ArrowKind::Full => s_target.matmul(r_new)?,
        ArrowKind::Dashed => s_target.conj().matmul(r_new)?,
    };
    Ok(lhs == rhs)
}

pub fn random_rep_with<R: Rng>(bq: &Biquiver, dims: &[usize], rng: &mut R) -> Result<Representation> {
    if dims.len() != bq.vertex_count() {
        return Err(Error::Shape("one dimension per vertex".into()));
    }
    let mats = bq
        .arrows()
        .iter()
        .map(|a| (a.id.clone(), random_matrix(rng, dims[a.target - 1], dims[a.source - 1])))
        .collect();
    Ok(Representation {
        dims: dims.to_vec(),
        mats,
    })
}

/// Deterministic random representation for `seed`.
pub fn random_rep(bq: &Biquiver, dims: &[usize], seed: u64) -> Result<Representation> {
    random_rep_with(bq, dims, &mut seeded_rng(seed))
}

pub fn random_base_change_with<R: Rng>(dims: &[usize], rng: &mut R) -> Vec<CMatrix> {
    dims.iter().map(|&q| random_nonsingular(rng, q)).collect()
}

/// Deterministic nonsingular base-change matrices for `seed`.
pub fn random_base_change(dims: &[usize], seed: u64) -> Vec<CMatrix> {
    random_base_change_with(dims, &mut seeded_rng(seed))
}

/// A biquiver with `1..=max_vertices` vertices and `0..=max_arrows` arrows of
/// random endpoints and kinds, named `a1, a2, …`.
pub fn random_biquiver<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> Biquiver {
    let t = rng.gen_range(1..=max_vertices.max(1));
    let count = rng.gen_range(0..=max_arrows);
    let arrows = (1..=count)
        .map(|k| {
            let kind = if rng.gen_bool(0.5) { ArrowKind::Full } else { ArrowKind::Dashed };
            Arrow::new(&format!("a{k}"), rng.gen_range(1..=t), rng.gen_range(1..=t), kind)
        })
        .collect();
    Biquiver::new(t, arrows).expect("generated endpoints are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmat::GaussianRational;

    #[test]
    fn random_biquivers_are_valid() {
        let mut rng = seeded_rng(6);
        for _ in 0..20 {
            let bq = random_biquiver(&mut rng, 3, 5);
            assert!((1..=3).contains(&bq.vertex_count()) && bq.arrows().len() <= 5);
            let dims = vec![2; bq.vertex_count()];
            random_rep(&bq, &dims, 0).unwrap().validate(&bq).unwrap();
        }
    }

    fn identities(dims: &[usize]) -> Vec<CMatrix> {
        dims.iter().map(|&q| CMatrix::identity(q)).collect()
    }

    #[test]
    fn validation() {
        assert!(Biquiver::new(2, vec![Arrow::new("a", 1, 3, ArrowKind::Full)]).is_err());
        assert!(Biquiver::new(
            2,
            vec![Arrow::new("a", 1, 2, ArrowKind::Full), Arrow::new("a", 2, 1, ArrowKind::Dashed)]
        )
        .is_err());
        let bq = Biquiver::six_arrow_example();
        assert_eq!((bq.incidence(1), bq.incidence(2), bq.incidence(3)), (2, 5, 5));
        let rep = random_rep(&bq, &[1, 2, 3], 0).unwrap();
        assert_eq!(rep.mat("A").shape(), (1, 2));
        assert_eq!(rep.mat("B").shape(), (1, 3));
        assert_eq!(rep.mat("D").shape(), (3, 2));
        let mut bad = rep.clone();
        bad.mats.insert("A".into(), CMatrix::zeros(2, 2));
        assert!(matches!(bad.validate(&bq), Err(Error::Shape(_))));
        let mut extra = rep.clone();
        extra.mats.insert("Z".into(), CMatrix::zeros(1, 1));
        assert!(extra.validate(&bq).is_err());
    }

    #[test]
    fn json_schema() {
        let text = r#"{"vertices":2,"arrows":[{"id":"a","source":2,"target":1,"kind":"dashed"}]}"#;
        let bq: Biquiver = serde_json::from_str(text).unwrap();
        assert_eq!(bq.arrows()[0].kind, ArrowKind::Dashed);
        assert_eq!(serde_json::to_string(&bq).unwrap(), text);
        let bad = r#"{"vertices":1,"arrows":[{"id":"a","source":2,"target":1,"kind":"full"}]}"#;
        assert!(serde_json::from_str::<Biquiver>(bad).is_err());
    }

    #[test]
    fn identity_base_change() {
        let bq = Biquiver::six_arrow_example();
        let rep = random_rep(&bq, &[2, 1, 2], 4).unwrap();
        assert_eq!(base_change(&bq, &rep, &identities(&rep.dims)).unwrap(), rep);
        assert!(equiv_check(&bq, &rep, &rep, &identities(&rep.dims)).unwrap());
    }

    #[test]
    fn dashed_loop_scalar() {
        let bq = Biquiver::new(2, vec![Arrow::new("g", 2, 2, ArrowKind::Dashed)]).unwrap();
        let mut mats = BTreeMap::new();
        mats.insert("g".to_string(), CMatrix::from_ints(&[&[1]]));
        let rep = Representation::new(&bq, vec![1, 1], mats).unwrap();
        let s = vec![CMatrix::identity(1), CMatrix::scalar(GaussianRational::i())];
        let out = base_change(&bq, &rep, &s).unwrap();
        assert_eq!(out.mat("g"), &CMatrix::from_ints(&[&[-1]]));
    }

    #[test]
    fn action_law() {
        let bq = Biquiver::six_arrow_example();
        for seed in 0..4 {
            let dims = [1 + seed as usize % 2, 2, 1 + (seed as usize / 2) % 2];
            let rep = random_rep(&bq, &dims, seed).unwrap();
            let s = random_base_change(&dims, 100 + seed);
            let t = random_base_change(&dims, 200 + seed);
            let st: Vec<CMatrix> = s.iter().zip(&t).map(|(a, b)| a.matmul(b).unwrap()).collect();
            let twice = base_change(&bq, &base_change(&bq, &rep, &s).unwrap(), &t).unwrap();
            assert_eq!(twice, base_change(&bq, &rep, &st).unwrap());
        }
    }

    #[test]
    fn equiv_detects_perturbation() {
        let bq = Biquiver::six_arrow_example();
        let dims = [1, 2, 2];
        let rep = random_rep(&bq, &dims, 8).unwrap();
        let s = random_base_change(&dims, 9);
        let moved = base_change(&bq, &rep, &s).unwrap();
        assert!(equiv_check(&bq, &rep, &moved, &s).unwrap());
        let mut perturbed = moved.clone();
        let mut f = perturbed.mats["F"].clone();
        f[(0, 0)] = &f[(0, 0)] + &GaussianRational::from(1);
        perturbed.mats.insert("F".into(), f);
        assert!(!equiv_check(&bq, &rep, &perturbed, &s).unwrap());
        for a in bq.arrows() {
            let (src, tgt) = (&s[a.source - 1], &s[a.target - 1]);
            assert!(arrow_relation_holds(a, rep.mat(&a.id), moved.mat(&a.id), src, tgt).unwrap());
        }
    }

    #[test]
    fn base_change_errors() {
        let bq = Biquiver::six_arrow_example();
        let rep = random_rep(&bq, &[1, 1, 1], 0).unwrap();
        let singular = vec![CMatrix::identity(1), CMatrix::zeros(1, 1), CMatrix::identity(1)];
        assert!(matches!(base_change(&bq, &rep, &singular), Err(Error::Singular(_))));
        assert!(matches!(base_change(&bq, &rep, &identities(&[1, 1])), Err(Error::Shape(_))));
        let generated = random_base_change(&[2, 3], 1);
        assert!(generated.iter().all(CMatrix::is_nonsingular));
        assert_eq!(random_base_change(&[2, 3], 1), generated);
    }
}
