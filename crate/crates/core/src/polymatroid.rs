//! Discrete polymatroids given by their rank functions.
//!
//! A polymatroid on `{1..r}` is the set of non-negative integer vectors `u`
//! with `|u(A)| <= ρ(A)` for every subset `A`. Everything here is computed from
//! the rank table: membership, basis vectors (maximal members), excluded
//! vectors (vectors under the cap `(ρ({1}), .., ρ({r}))` that are not members)
//! and the minimal ones among them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, MatrixJson, Modulus};
use crate::matroid::{check_monotone_submodular, normalized_vectors, Matroid, Representability};
use crate::subset::{self, Subset};

pub const MAX_GROUND_SIZE: usize = 10;

/// Vector in `Z_{>=0}^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(Vec<u32>);

impl IntVector {
    pub fn new(components: Vec<u32>) -> Self {
        IntVector(components)
    }

    pub fn zeros(r: usize) -> Self {
        IntVector(vec![0; r])
    }

    /// `ε_{i,r}` with a zero-based `i`.
    pub fn unit(i: usize, r: usize) -> Self {
        let mut v = Self::zeros(r);
        v.0[i] = 1;
        v
    }

    /// Indicator vector of a subset.
    pub fn indicator(s: Subset, r: usize) -> Self {
        IntVector((0..r).map(|i| subset::contains(s, i) as u32).collect())
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|v|`, the component sum.
    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `|v(A)|`.
    pub fn sum_over(&self, a: Subset) -> u32 {
        self.0.iter().enumerate().filter(|&(i, _)| subset::contains(a, i)).map(|(_, &x)| x).sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &IntVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self <= other` and `self != other`.
    pub fn lt(&self, other: &IntVector) -> bool {
        self.le(other) && self != other
    }

    pub fn join(&self, other: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    /// `(v)_{>0}` as a bitmask.
    pub fn support(&self) -> Subset {
        self.0.iter().enumerate().filter(|&(_, &x)| x > 0).fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscretePolymatroid {
    ground_size: usize,
    ranks: Vec<u32>,
}

impl DiscretePolymatroid {
    /// Validates D1 (monotone), D2 (submodular) and D3 (`ρ(∅) = 0`).
    pub fn from_rank_table(ground_size: usize, ranks: Vec<u32>) -> Result<Self> {
        if ground_size > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { size: ground_size, max: MAX_GROUND_SIZE });
        }
        if ranks.len() != 1 << ground_size {
            return Err(Error::Shape(format!("rank table has {} entries, expected 2^{ground_size}", ranks.len())));
        }
        if ranks[0] != 0 {
            return Err(Error::AxiomViolation { axiom: "D3", detail: "rank of the empty set is nonzero".into() });
        }
        check_monotone_submodular(ground_size, &ranks, ("D1", "D2"))?;
        Ok(DiscretePolymatroid { ground_size, ranks })
    }

    /// `D(M)`: same rank function, members are indicator vectors of independent sets.
    pub fn from_matroid(m: &Matroid) -> Result<Self> {
        if m.ground_size() > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { size: m.ground_size(), max: MAX_GROUND_SIZE });
        }
        Ok(DiscretePolymatroid { ground_size: m.ground_size(), ranks: m.rank_table().to_vec() })
    }

    /// The polymatroid whose rank of `X` is the dimension of the sum of the
    /// column spaces of the blocks indexed by `X`.
    pub fn from_subspaces(rep: &SubspaceRepresentation) -> Result<Self> {
        let r = rep.blocks.len();
        if r > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { size: r, max: MAX_GROUND_SIZE });
        }
        let ranks = (0..1u32 << r).map(|s| rep.span_of(s).rank() as u32).collect();
        Ok(DiscretePolymatroid { ground_size: r, ranks })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn rank_table(&self) -> &[u32] {
        &self.ranks
    }

    pub fn rank(&self, s: Subset) -> u32 {
        self.ranks[s as usize]
    }

    /// `ρ(E)`, the rank of the polymatroid.
    pub fn full_rank(&self) -> u32 {
        self.ranks[subset::full(self.ground_size) as usize]
    }

    /// `(ρ({1}), .., ρ({r}))`.
    pub fn caps(&self) -> IntVector {
        IntVector((0..self.ground_size).map(|i| self.ranks[1 << i]).collect())
    }

    pub fn membership(&self, u: &IntVector) -> Result<bool> {
        if u.len() != self.ground_size {
            return Err(Error::LengthMismatch { expected: self.ground_size, got: u.len() });
        }
        Ok(self.contains(u))
    }

    fn contains(&self, u: &IntVector) -> bool {
        (0..1u32 << self.ground_size).all(|a| u.sum_over(a) <= self.ranks[a as usize])
    }

    /// Every vector under the cap, in lexicographic order.
    fn cap_box(&self) -> Vec<IntVector> {
        let caps = self.caps();
        let mut out = Vec::new();
        let mut cur = IntVector::zeros(self.ground_size);
        loop {
            out.push(cur.clone());
            let Some(pos) = (0..self.ground_size).rev().find(|&i| cur.0[i] < caps.0[i]) else {
                return out;
            };
            cur.0[pos] += 1;
            for slot in &mut cur.0[pos + 1..] {
                *slot = 0;
            }
        }
    }

    /// Maximal members, in lexicographic order.
    pub fn basis_vectors(&self) -> Vec<IntVector> {
        let caps = self.caps();
        self.cap_box()
            .into_iter()
            .filter(|u| self.contains(u))
            .filter(|u| {
                (0..self.ground_size).all(|i| {
                    if u.0[i] == caps.0[i] {
                        return true;
                    }
                    let mut up = u.clone();
                    up.0[i] += 1;
                    !self.contains(&up)
                })
            })
            .collect()
    }

    pub fn excluded_vectors(&self) -> Vec<IntVector> {
        self.cap_box().into_iter().filter(|u| !self.contains(u)).collect()
    }

    /// Excluded vectors with no smaller excluded vector. The cap box is walked
    /// lexicographically, so any excluded vector below `u` has already been seen
    /// and is dominated by something in the collected set.
    pub fn minimal_excluded_vectors(&self) -> Vec<IntVector> {
        let mut minimal: Vec<IntVector> = Vec::new();
        for u in self.excluded_vectors() {
            if !minimal.iter().any(|v| v.lt(&u)) {
                minimal.push(u);
            }
        }
        minimal
    }

    /// `nD`: the rank function multiplied by `n`.
    pub fn scale(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("scale factor must be at least 1".into()));
        }
        Ok(DiscretePolymatroid { ground_size: self.ground_size, ranks: self.ranks.iter().map(|&x| x * n).collect() })
    }

    /// Searches for blocks `A_1..A_r` over GF(q), `A_i` of shape `ρ(E) × ρ({i})`,
    /// realizing the rank function.
    ///
    /// Any member `b` of the polymatroid can be realized by picking `b_i`
    /// columns of each block that are jointly independent, so for the
    /// lexicographically first basis vector those `ρ(E)` columns are fixed to
    /// the identity. The remaining columns of block `i` are reduced against its
    /// own identity columns (zero in those rows), scaled to a leading 1 and kept
    /// in increasing order. Each partial assignment is pruned with
    /// `ρ(T) - missing <= rank <= ρ(T)` over the completed blocks.
    pub fn find_representation(&self, q: Modulus, budget: u64) -> Result<Representability<SubspaceRepresentation>> {
        let r = self.ground_size;
        let k = self.full_rank() as usize;
        let caps = self.caps();
        let mut blocks: Vec<FieldMatrix> = caps.0.iter().map(|&c| FieldMatrix::zeros(q, k, c as usize)).collect();
        if k == 0 {
            return Ok(Representability::Found(SubspaceRepresentation { q, blocks }));
        }
        let basis = self.basis_vectors().swap_remove(0);
        let mut offset = 0;
        let mut candidates = Vec::with_capacity(r);
        for (i, block) in blocks.iter_mut().enumerate() {
            let fixed = basis.0[i] as usize;
            for t in 0..fixed {
                block.set(offset + t, t, 1);
            }
            let own = offset..offset + fixed;
            candidates.push(
                normalized_vectors(q, k)
                    .into_iter()
                    .filter(|v| v.iter().any(|&x| x != 0) && own.clone().all(|row| v[row] == 0))
                    .collect::<Vec<_>>(),
            );
            offset += fixed;
        }
        let mut search = BlockSearch { target: self, basis: &basis, candidates: &candidates, budget, tested: 0 };
        if search.fill(&mut blocks, 0, basis.0[0] as usize, 0)? {
            let rep = SubspaceRepresentation { q, blocks };
            if DiscretePolymatroid::from_subspaces(&rep)? != *self {
                return Err(Error::RepresentationMismatch);
            }
            Ok(Representability::Found(rep))
        } else {
            Ok(Representability::NotRepresentable)
        }
    }
}

struct BlockSearch<'a> {
    target: &'a DiscretePolymatroid,
    basis: &'a IntVector,
    candidates: &'a [Vec<Vec<u8>>],
    budget: u64,
    tested: u64,
}

impl BlockSearch<'_> {
    /// Blocks before `i` are complete and block `i` has `placed` columns; the
    /// next free column may only use candidates at index `>= next`.
    fn fill(&mut self, blocks: &mut [FieldMatrix], i: usize, placed: usize, next: usize) -> Result<bool> {
        let r = blocks.len();
        if i == r {
            return Ok(true);
        }
        if !self.prefix_ok(blocks, i, placed) {
            return Ok(false);
        }
        let width = blocks[i].cols();
        if placed == width {
            let following = self.basis.components().get(i + 1).copied().unwrap_or(0) as usize;
            return self.fill(blocks, i + 1, following, 0);
        }
        for idx in next..self.candidates[i].len() {
            self.tested += 1;
            if self.tested > self.budget {
                return Err(Error::SearchBudgetExceeded { budget: self.budget });
            }
            for (row, &x) in self.candidates[i][idx].iter().enumerate() {
                blocks[i].set(row, placed, x);
            }
            if self.fill(blocks, i, placed + 1, idx + 1)? {
                return Ok(true);
            }
        }
        for row in 0..blocks[i].rows() {
            blocks[i].set(row, placed, 0);
        }
        Ok(false)
    }

    fn prefix_ok(&self, blocks: &[FieldMatrix], i: usize, placed: usize) -> bool {
        let missing = (blocks[i].cols() - placed) as u32;
        let partial = blocks[i].column_range(0..placed);
        let q = partial.modulus();
        let rows = partial.rows();
        for earlier in 0..1u32 << i {
            let mut parts: Vec<&FieldMatrix> = subset::elements(earlier).into_iter().map(|j| &blocks[j]).collect();
            parts.push(&partial);
            let rank = FieldMatrix::hcat_all(q, rows, &parts).expect("blocks share a shape").rank() as u32;
            let want = self.target.rank(earlier | 1 << i);
            if rank > want || rank + missing < want {
                return false;
            }
        }
        true
    }
}

/// Collection of subspaces, each given as the column span of a block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceRepresentation {
    q: Modulus,
    blocks: Vec<FieldMatrix>,
}

impl SubspaceRepresentation {
    pub fn new(q: Modulus, blocks: Vec<FieldMatrix>) -> Result<Self> {
        if let Some(first) = blocks.first() {
            for (i, b) in blocks.iter().enumerate() {
                if b.modulus() != q {
                    return Err(Error::ModulusMismatch { left: q.get(), right: b.modulus().get() });
                }
                if b.rows() != first.rows() {
                    return Err(Error::Shape(format!(
                        "block {} has {} rows, block 1 has {}",
                        i + 1,
                        b.rows(),
                        first.rows()
                    )));
                }
            }
        }
        Ok(SubspaceRepresentation { q, blocks })
    }

    /// Splits a representing matrix into consecutive blocks of the given widths.
    pub fn from_representing_matrix(matrix: &FieldMatrix, widths: &[usize]) -> Result<Self> {
        if widths.iter().sum::<usize>() != matrix.cols() {
            return Err(Error::Shape(format!(
                "block widths sum to {}, matrix has {} columns",
                widths.iter().sum::<usize>(),
                matrix.cols()
            )));
        }
        let mut start = 0;
        let blocks = widths
            .iter()
            .map(|&w| {
                let b = matrix.column_range(start..start + w);
                start += w;
                b
            })
            .collect();
        Self::new(matrix.modulus(), blocks)
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn blocks(&self) -> &[FieldMatrix] {
        &self.blocks
    }

    pub fn dimension(&self) -> usize {
        self.blocks.first().map_or(0, FieldMatrix::rows)
    }

    pub fn block_widths(&self) -> Vec<usize> {
        self.blocks.iter().map(FieldMatrix::cols).collect()
    }

    /// Concatenation `[A_1 A_2 .. A_r]`.
    pub fn representing_matrix(&self) -> FieldMatrix {
        let parts: Vec<&FieldMatrix> = self.blocks.iter().collect();
        FieldMatrix::hcat_all(self.q, self.dimension(), &parts).expect("blocks share a height")
    }

    fn span_of(&self, s: Subset) -> FieldMatrix {
        let parts: Vec<&FieldMatrix> = subset::elements(s).into_iter().map(|i| &self.blocks[i]).collect();
        FieldMatrix::hcat_all(self.q, self.dimension(), &parts).expect("blocks share a height")
    }
}

/// `{"r":3,"rank":[...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolymatroidJson {
    pub r: usize,
    pub rank: Vec<u32>,
}

impl TryFrom<&PolymatroidJson> for DiscretePolymatroid {
    type Error = Error;
    fn try_from(json: &PolymatroidJson) -> Result<Self> {
        DiscretePolymatroid::from_rank_table(json.r, json.rank.clone())
    }
}

impl From<&DiscretePolymatroid> for PolymatroidJson {
    fn from(d: &DiscretePolymatroid) -> Self {
        PolymatroidJson { r: d.ground_size, rank: d.ranks.clone() }
    }
}

/// `{"matrix":{"q":2,"rows":[...]},"block_widths":[...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub matrix: MatrixJson,
    pub block_widths: Vec<usize>,
}

impl From<&SubspaceRepresentation> for RepresentationJson {
    fn from(rep: &SubspaceRepresentation) -> Self {
        RepresentationJson { matrix: MatrixJson::from(&rep.representing_matrix()), block_widths: rep.block_widths() }
    }
}

impl TryFrom<&RepresentationJson> for SubspaceRepresentation {
    type Error = Error;
    fn try_from(json: &RepresentationJson) -> Result<Self> {
        let matrix = FieldMatrix::try_from(&json.matrix)?;
        SubspaceRepresentation::from_representing_matrix(&matrix, &json.block_widths)
    }
}
