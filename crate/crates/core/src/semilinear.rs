//! Semilinear maps in coordinates and the consimilarity action on matrix pairs.
//!
//! A semilinear map `𝒜: U ⇢ V` with matrix `A` in fixed bases acts on
//! coordinate vectors by `[𝒜u] = conj(A·[u])`. Under a change of bases with
//! transition matrices `S` (domain) and `T` (codomain) the matrix becomes
//! `conj(T)⁻¹·A·S`; on a single space this is consimilarity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmat::{CMatrix, GaussianRational};

/// The matrix of a semilinear map in fixed bases: `codomain_dim × domain_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMatrix {
    mat: CMatrix,
}

impl SemilinearMatrix {
    pub fn new(mat: CMatrix) -> Self {
        Self { mat }
    }

    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    pub fn domain_dim(&self) -> usize {
        self.mat.cols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.mat.rows()
    }

    /// Coordinates of `𝒜u`: `conj(A·u)`.
    pub fn apply(&self, u: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        Ok(self.mat.mul_vec(u)?.iter().map(GaussianRational::conj).collect())
    }

    /// The matrix `conj(A)·B` of the linear map `𝒜∘ℬ`.
    pub fn compose(&self, inner: &SemilinearMatrix) -> Result<CMatrix> {
        if self.domain_dim() != inner.codomain_dim() {
            return Err(Error::Shape(format!(
                "cannot compose a map on dimension {} after one into dimension {}",
                self.domain_dim(),
                inner.codomain_dim()
            )));
        }
        self.mat.conj().matmul(&inner.mat)
    }

    /// Matrix in new bases: `conj(S_cod)⁻¹·A·S_dom`.
    pub fn change_of_basis(&self, s_dom: &CMatrix, s_cod: &CMatrix) -> Result<SemilinearMatrix> {
        if s_dom.rows() != self.domain_dim() || s_cod.rows() != self.codomain_dim() {
            return Err(Error::Shape("transition matrices do not match the map".into()));
        }
        if !s_dom.is_nonsingular() {
            return Err(Error::Singular("domain transition matrix".into()));
        }
        let cod_inv = s_cod.conj().inverse()?;
        Ok(Self::new(CMatrix::chain(&[&cod_inv, &self.mat, s_dom])?))
    }
}

/// Two square matrices of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PairRepr")]
pub struct MatrixPair {
    pub first: CMatrix,
    pub second: CMatrix,
}

#[derive(Deserialize)]
struct PairRepr {
    first: CMatrix,
    second: CMatrix,
}

impl TryFrom<PairRepr> for MatrixPair {
    type Error = Error;
    fn try_from(r: PairRepr) -> Result<Self> {
        MatrixPair::new(r.first, r.second)
    }
}

impl MatrixPair {
    pub fn new(first: CMatrix, second: CMatrix) -> Result<Self> {
        if !first.is_square() || first.shape() != second.shape() {
            return Err(Error::Shape(format!(
                "pair components must be square of equal size, got {:?} and {:?}",
                first.shape(),
                second.shape()
            )));
        }
        Ok(Self { first, second })
    }

    pub fn size(&self) -> usize {
        self.first.rows()
    }

    /// `(conj(S)⁻¹·A₁·S, conj(S)⁻¹·A₂·S)`.
    pub fn consim_transform(&self, s: &CMatrix) -> Result<MatrixPair> {
        if s.shape() != self.first.shape() {
            return Err(Error::Shape("transforming matrix does not match the pair".into()));
        }
        let sbar_inv = s.conj().inverse()?;
        Ok(MatrixPair {
            first: CMatrix::chain(&[&sbar_inv, &self.first, s])?,
            second: CMatrix::chain(&[&sbar_inv, &self.second, s])?,
        })
    }
}

/// One letter `conj(A_a)·A_b` of an alternating word, with `a, b ∈ {1, 2}`.
pub type Letter = (u8, u8);

/// Similarity invariants of one alternating word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordInvariant {
    pub word: Vec<Letter>,
    /// Coefficients of the characteristic polynomial, constant term first.
    pub char_poly: Vec<GaussianRational>,
    /// `rank(wᵏ)` for `k = 1..=n`.
    pub rank_powers: Vec<usize>,
}

/// Necessary conditions for consimilarity of matrix pairs.
///
/// If `(B₁, B₂) = conj(S)⁻¹(A₁, A₂)S` then `conj(B_a)·B_b = S⁻¹·conj(A_a)·A_b·S`,
/// so every product of such letters transforms by similarity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantProfile {
    pub size: usize,
    pub rank_first: usize,
    pub rank_second: usize,
    pub words: Vec<WordInvariant>,
}

pub const DEFAULT_WORD_DEPTH: usize = 2;

fn all_words(depth: usize) -> Vec<Vec<Letter>> {
    let letters: [Letter; 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..depth {
        layer = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn consim_invariants(pair: &MatrixPair, depth: usize) -> Result<InvariantProfile> {
    if depth == 0 {
        return Err(Error::Precondition("word depth must be at least 1".into()));
    }
    let n = pair.size();
    let pick = |k: u8| if k == 1 { &pair.first } else { &pair.second };
    let mut letters = std::collections::BTreeMap::new();
    for a in 1..=2u8 {
        for b in 1..=2u8 {
            letters.insert((a, b), pick(a).conj().matmul(pick(b))?);
        }
    }
    let mut words = Vec::new();
    for word in all_words(depth) {
        let mats: Vec<&CMatrix> = word.iter().map(|l| &letters[l]).collect();
        let w = CMatrix::chain(&mats)?;
        let mut rank_powers = Vec::with_capacity(n);
        let mut power = w.clone();
        for k in 1..=n {
            if k > 1 {
                power = power.matmul(&w)?;
            }
            rank_powers.push(power.rank());
        }
        words.push(WordInvariant {
            word,
            char_poly: w.char_poly()?,
            rank_powers,
        });
    }
    Ok(InvariantProfile {
        size: n,
        rank_first: pair.first.rank(),
        rank_second: pair.second.rank(),
        words,
    })
}

/// True when the two profiles differ, i.e. the pairs are certainly not consimilar.
pub fn profiles_separate(a: &InvariantProfile, b: &InvariantProfile) -> bool {
    a != b
}

/// Checks `apply(A, α·u) = conj(α)·apply(A, u)`.
pub fn is_conjugate_homogeneous(a: &SemilinearMatrix, alpha: &GaussianRational, u: &[GaussianRational]) -> Result<bool> {
    let scaled: Vec<GaussianRational> = u.iter().map(|x| alpha * x).collect();
    let lhs = a.apply(&scaled)?;
    let rhs: Vec<GaussianRational> = a.apply(u)?.iter().map(|x| &alpha.conj() * x).collect();
    Ok(lhs == rhs)
}
