//! Matroids stored as full rank tables over a ground set of at most 16 elements.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, MatrixJson, Modulus};
use crate::subset::{self, Subset};

pub const MAX_GROUND_SIZE: usize = 16;

/// Outcome of an exhaustive representability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representability<T> {
    Found(T),
    NotRepresentable,
}

impl<T> Representability<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Representability::Found(t) => Some(t),
            Representability::NotRepresentable => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Representability::Found(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matroid {
    ground_size: usize,
    ranks: Vec<u32>,
}

impl Matroid {
    /// Validates R1 (`r(X) <= |X|`), R2 (monotone), R3 (submodular) and `r(∅) = 0`.
    pub fn from_rank_table(ground_size: usize, ranks: Vec<u32>) -> Result<Self> {
        if ground_size > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { size: ground_size, max: MAX_GROUND_SIZE });
        }
        if ranks.len() != 1 << ground_size {
            return Err(Error::Shape(format!("rank table has {} entries, expected 2^{ground_size}", ranks.len())));
        }
        if ranks[0] != 0 {
            return Err(Error::AxiomViolation { axiom: "R1", detail: "rank of the empty set is nonzero".into() });
        }
        for s in 0..ranks.len() as Subset {
            if ranks[s as usize] as usize > subset::size(s) {
                return Err(Error::AxiomViolation {
                    axiom: "R1",
                    detail: format!("r({}) = {} exceeds its size", subset::display(s), ranks[s as usize]),
                });
            }
        }
        check_monotone_submodular(ground_size, &ranks, ("R2", "R3"))?;
        Ok(Matroid { ground_size, ranks })
    }

    /// The vector matroid of `a`: element `j` is column `j`.
    pub fn from_matrix(a: &FieldMatrix) -> Result<Self> {
        let m = a.cols();
        if m > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { size: m, max: MAX_GROUND_SIZE });
        }
        let ranks = (0..1u32 << m).map(|s| a.select_columns(&subset::elements(s)).rank() as u32).collect();
        Ok(Matroid { ground_size: m, ranks })
    }

    /// `U_{k,m}`: every set of at most `k` elements is independent.
    pub fn uniform(k: usize, m: usize) -> Result<Self> {
        if k > m {
            return Err(Error::InvalidParameter(format!("uniform matroid needs k <= m, got k={k}, m={m}")));
        }
        if m > MAX_GROUND_SIZE {
            return Err(Error::GroundSetTooLarge { size: m, max: MAX_GROUND_SIZE });
        }
        let ranks = (0..1u32 << m).map(|s| subset::size(s).min(k) as u32).collect();
        Ok(Matroid { ground_size: m, ranks })
    }

    pub fn free(m: usize) -> Result<Self> {
        Self::uniform(m, m)
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

    /// Rank of the whole ground set.
    pub fn full_rank(&self) -> u32 {
        self.ranks[subset::full(self.ground_size) as usize]
    }

    pub fn is_independent(&self, s: Subset) -> bool {
        self.rank(s) as usize == subset::size(s)
    }

    /// All bases in lexicographic order.
    pub fn bases(&self) -> Vec<Subset> {
        let k = self.full_rank() as usize;
        let mut out: Vec<Subset> =
            (0..1u32 << self.ground_size).filter(|&s| subset::size(s) == k && self.is_independent(s)).collect();
        subset::sort_lex(&mut out);
        out
    }

    /// All circuits (minimal dependent sets) in lexicographic order.
    pub fn circuits(&self) -> Vec<Subset> {
        let mut out: Vec<Subset> = (1..1u32 << self.ground_size)
            .filter(|&s| {
                !self.is_independent(s) && subset::elements(s).iter().all(|&i| self.is_independent(s & !(1 << i)))
            })
            .collect();
        subset::sort_lex(&mut out);
        out
    }

    /// Searches for a `rank × m` matrix over GF(q) whose vector matroid is `self`.
    ///
    /// The columns of the lexicographically first basis are fixed to the identity
    /// (any representation can be brought there by an invertible row
    /// transformation); every other column ranges over the zero vector and the
    /// vectors whose first nonzero entry is 1 (column scaling does not change
    /// ranks). After each column is placed, every subset containing it is checked
    /// against the rank table, so a failed branch is cut as early as possible.
    /// The first success is the lexicographically smallest normalized matrix, and
    /// `NotRepresentable` is only returned after the whole space was exhausted.
    /// `budget` bounds the number of column candidates examined.
    pub fn find_representation(&self, q: Modulus, budget: u64) -> Result<Representability<FieldMatrix>> {
        let m = self.ground_size;
        let k = self.full_rank() as usize;
        let mut a = FieldMatrix::zeros(q, k, m);
        if k == 0 {
            return Ok(Representability::Found(a));
        }
        let basis = self.bases()[0];
        for (row, &col) in subset::elements(basis).iter().enumerate() {
            a.set(row, col, 1);
        }
        let others: Vec<usize> = (0..m).filter(|&i| !subset::contains(basis, i)).collect();
        let candidates = normalized_vectors(q, k);
        let mut search = ColumnSearch { matroid: self, candidates: &candidates, others: &others, budget, tested: 0 };
        if search.place(&mut a, basis, 0)? {
            debug_assert_eq!(Matroid::from_matrix(&a)?.ranks, self.ranks);
            Ok(Representability::Found(a))
        } else {
            Ok(Representability::NotRepresentable)
        }
    }

    pub fn find_binary_representation(&self, budget: u64) -> Result<Representability<FieldMatrix>> {
        self.find_representation(Modulus::GF2, budget)
    }
}

struct ColumnSearch<'a> {
    matroid: &'a Matroid,
    candidates: &'a [Vec<u8>],
    others: &'a [usize],
    budget: u64,
    tested: u64,
}

impl ColumnSearch<'_> {
    fn place(&mut self, a: &mut FieldMatrix, assigned: Subset, idx: usize) -> Result<bool> {
        let Some(&col) = self.others.get(idx) else {
            return Ok(true);
        };
        let assigned = assigned | 1 << col;
        for v in self.candidates {
            self.tested += 1;
            if self.tested > self.budget {
                return Err(Error::SearchBudgetExceeded { budget: self.budget });
            }
            for (row, &x) in v.iter().enumerate() {
                a.set(row, col, x);
            }
            if self.consistent(a, assigned, col) && self.place(a, assigned, idx + 1)? {
                return Ok(true);
            }
        }
        for row in 0..a.rows() {
            a.set(row, col, 0);
        }
        Ok(false)
    }

    /// Every subset of `assigned` containing `col` has the required rank.
    fn consistent(&self, a: &FieldMatrix, assigned: Subset, col: usize) -> bool {
        let rest = assigned & !(1 << col);
        let mut sub = rest;
        loop {
            let s = sub | 1 << col;
            if a.select_columns(&subset::elements(s)).rank() as u32 != self.matroid.rank(s) {
                return false;
            }
            if sub == 0 {
                return true;
            }
            sub = (sub - 1) & rest;
        }
    }
}

/// The zero vector and every vector whose first nonzero entry is 1, in
/// lexicographic order.
pub(crate) fn normalized_vectors(q: Modulus, len: usize) -> Vec<Vec<u8>> {
    let qv = q.get() as usize;
    let total = qv.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut v = vec![0u8; len];
            for slot in v.iter_mut().rev() {
                *slot = (code % qv) as u8;
                code /= qv;
            }
            v
        })
        .filter(|v| v.iter().find(|&&x| x != 0).is_none_or(|&x| x == 1))
        .collect()
}

/// Local monotonicity and local submodularity; equivalent to the global axioms.
pub(crate) fn check_monotone_submodular(n: usize, ranks: &[u32], names: (&'static str, &'static str)) -> Result<()> {
    for s in 0..1u32 << n {
        let base = ranks[s as usize];
        for a in (0..n).filter(|&a| !subset::contains(s, a)) {
            let with_a = ranks[(s | 1 << a) as usize];
            if with_a < base {
                return Err(Error::AxiomViolation {
                    axiom: names.0,
                    detail: format!("rank drops from {} to {}", subset::display(s), subset::display(s | 1 << a)),
                });
            }
            for b in (a + 1..n).filter(|&b| !subset::contains(s, b)) {
                let with_b = ranks[(s | 1 << b) as usize];
                let with_both = ranks[(s | 1 << a | 1 << b) as usize];
                if with_a + with_b < with_both + base {
                    return Err(Error::AxiomViolation {
                        axiom: names.1,
                        detail: format!(
                            "not submodular at {} with elements {} and {}",
                            subset::display(s),
                            a + 1,
                            b + 1
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Accepted JSON forms: `{"m":4,"rank":[...]}`, `{"uniform":[2,4]}`,
/// `{"matrix":{"q":2,"rows":[...]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatroidJson {
    RankTable { m: usize, rank: Vec<u32> },
    Uniform { uniform: [usize; 2] },
    Matrix { matrix: MatrixJson },
}

impl TryFrom<&MatroidJson> for Matroid {
    type Error = Error;
    fn try_from(json: &MatroidJson) -> Result<Self> {
        match json {
            MatroidJson::RankTable { m, rank } => Matroid::from_rank_table(*m, rank.clone()),
            MatroidJson::Uniform { uniform: [k, m] } => Matroid::uniform(*k, *m),
            MatroidJson::Matrix { matrix } => Matroid::from_matrix(&FieldMatrix::try_from(matrix)?),
        }
    }
}

impl From<&Matroid> for MatroidJson {
    fn from(m: &Matroid) -> Self {
        MatroidJson::RankTable { m: m.ground_size, rank: m.ranks.clone() }
    }
}
