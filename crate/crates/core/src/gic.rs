//! Generalized index coding problems, linear codes and their verification.
//!
//! Messages are `m` vectors of length `n` over GF(q); the row index of every
//! matrix below is `i * n + s` for component `s` of message `i`. A receiver
//! knows the functions `X · K_i` and wants `X · D_i`. A linear code `L`
//! broadcasts `X · L`, and receiver `i` decodes iff every column of `D_i` lies
//! in the column span of `[K_i | L]`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, Modulus};

/// Number of random message vectors tried by the functional decoding check.
const FUNCTIONAL_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receiver {
    knowledge: FieldMatrix,
    demand: FieldMatrix,
}

impl Receiver {
    /// `knowledge` may have zero columns; `demand` needs at least one.
    pub fn new(knowledge: FieldMatrix, demand: FieldMatrix) -> Result<Self> {
        if knowledge.modulus() != demand.modulus() {
            return Err(Error::ModulusMismatch { left: knowledge.modulus().get(), right: demand.modulus().get() });
        }
        if knowledge.rows() != demand.rows() {
            return Err(Error::Shape(format!(
                "knowledge matrix has {} rows, demand matrix has {}",
                knowledge.rows(),
                demand.rows()
            )));
        }
        if demand.cols() == 0 {
            return Err(Error::Shape("a receiver must demand at least one function".into()));
        }
        Ok(Receiver { knowledge, demand })
    }

    /// `K_i`.
    pub fn knowledge(&self) -> &FieldMatrix {
        &self.knowledge
    }

    /// `D_i`.
    pub fn demand(&self) -> &FieldMatrix {
        &self.demand
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GicProblem {
    q: Modulus,
    m: usize,
    n: usize,
    receivers: Vec<Receiver>,
}

impl GicProblem {
    pub fn new(q: Modulus, m: usize, n: usize, receivers: Vec<Receiver>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter(format!("need m >= 1 and n >= 1, got m={m}, n={n}")));
        }
        for (i, r) in receivers.iter().enumerate() {
            if r.demand.modulus() != q {
                return Err(Error::ModulusMismatch { left: q.get(), right: r.demand.modulus().get() });
            }
            if r.demand.rows() != m * n {
                return Err(Error::Shape(format!(
                    "receiver {} has {} rows, expected mn = {}",
                    i + 1,
                    r.demand.rows(),
                    m * n
                )));
            }
        }
        Ok(GicProblem { q, m, n, receivers })
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn message_count(&self) -> usize {
        self.m
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    /// `mn`, the number of rows of every matrix in the problem.
    pub fn message_length(&self) -> usize {
        self.m * self.n
    }

    pub fn receivers(&self) -> &[Receiver] {
        &self.receivers
    }

    /// The same problem with every message replaced by a block of `n` symbols:
    /// each scalar function becomes `n` functions, one per component.
    pub fn vectorize(&self, n: usize) -> Result<GicProblem> {
        if self.n != 1 {
            return Err(Error::InvalidParameter("only scalar problems can be vectorized".into()));
        }
        let id = FieldMatrix::identity(self.q, n);
        let receivers = self
            .receivers
            .iter()
            .map(|r| Receiver::new(r.knowledge.kron(&id)?, r.demand.kron(&id)?))
            .collect::<Result<_>>()?;
        GicProblem::new(self.q, self.m, n, receivers)
    }

    fn check_code(&self, code: &IndexCode) -> Result<()> {
        if code.matrix.modulus() != self.q {
            return Err(Error::ModulusMismatch { left: self.q.get(), right: code.matrix.modulus().get() });
        }
        if code.matrix.rows() != self.message_length() {
            return Err(Error::Shape(format!(
                "code matrix has {} rows, expected mn = {}",
                code.matrix.rows(),
                self.message_length()
            )));
        }
        Ok(())
    }

    fn side_and_code(&self, i: usize, code: &IndexCode) -> FieldMatrix {
        self.receivers[i].knowledge.hcat(&code.matrix).expect("shapes were checked")
    }
}

/// The linear code `f(X) = X · L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCode {
    matrix: FieldMatrix,
}

impl IndexCode {
    pub fn new(matrix: FieldMatrix) -> Self {
        IndexCode { matrix }
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    /// `l`, the number of transmitted symbols.
    pub fn length(&self) -> usize {
        self.matrix.cols()
    }

    /// `X · L` for a row vector `X`.
    pub fn encode(&self, x: &FieldMatrix) -> Result<FieldMatrix> {
        x.matmul(&self.matrix)
    }
}

/// Per-receiver decodability, in receiver order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub receivers: Vec<bool>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.receivers.iter().all(|&ok| ok)
    }

    /// Zero-based indices of receivers that cannot decode.
    pub fn failing(&self) -> Vec<usize> {
        self.receivers.iter().enumerate().filter(|&(_, &ok)| !ok).map(|(i, _)| i).collect()
    }
}

pub fn verify_code(p: &GicProblem, code: &IndexCode) -> Result<VerificationReport> {
    p.check_code(code)?;
    let receivers = (0..p.receivers.len())
        .into_par_iter()
        .map(|i| {
            let basis = p.side_and_code(i, code);
            basis.in_column_span(&p.receivers[i].demand).expect("shapes were checked")
        })
        .collect();
    Ok(VerificationReport { receivers })
}

/// Returns `M_i` with `[K_i | L] · M_i = D_i`, after checking `X · [K_i | L] · M_i = X · D_i`
/// on random messages drawn from `seed`.
pub fn decoding_matrix(p: &GicProblem, code: &IndexCode, i: usize, seed: u64) -> Result<FieldMatrix> {
    p.check_code(code)?;
    if i >= p.receivers.len() {
        return Err(Error::InvalidParameter(format!("receiver index {} out of range", i + 1)));
    }
    let basis = p.side_and_code(i, code);
    let demand = &p.receivers[i].demand;
    let m = match basis.solve_right(demand) {
        Ok(m) => m,
        Err(Error::NoSolution) => return Err(Error::Undecodable { receiver: i }),
        Err(e) => return Err(e),
    };
    let q = p.q;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..FUNCTIONAL_SAMPLES {
        let mut x = FieldMatrix::zeros(q, 1, p.message_length());
        for c in 0..x.cols() {
            x.set(0, c, rng.gen_range(0..q.get()));
        }
        let received = x.matmul(&basis)?;
        if received.matmul(&m)? != x.matmul(demand)? {
            return Err(Error::Undecodable { receiver: i });
        }
    }
    Ok(m)
}

/// The largest number of receivers sharing a Has-set, where two Has-sets are
/// the same when their knowledge matrices span the same column space.
pub fn mu(p: &GicProblem) -> usize {
    let mut groups: HashMap<FieldMatrix, usize> = HashMap::new();
    for r in &p.receivers {
        *groups.entry(r.knowledge.column_space_key()).or_default() += 1;
    }
    groups.into_values().max().unwrap_or(0)
}

/// The code decodes everywhere and `l = n · μ`.
pub fn is_perfect(p: &GicProblem, code: &IndexCode) -> Result<bool> {
    Ok(code.length() == p.n * mu(p) && verify_code(p, code)?.passed())
}

/// Blocks `A_1..A_m` (each `mn × n`) and `A_{m+1}` (`mn × l`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GicRepresentation {
    message_blocks: Vec<FieldMatrix>,
    code_block: FieldMatrix,
}

impl GicRepresentation {
    pub fn new(message_blocks: Vec<FieldMatrix>, code_block: FieldMatrix) -> Result<Self> {
        let rows = code_block.rows();
        let q = code_block.modulus();
        for b in &message_blocks {
            if b.rows() != rows || b.modulus() != q {
                return Err(Error::Shape("all blocks must share height and field".into()));
            }
        }
        Ok(GicRepresentation { message_blocks, code_block })
    }

    pub fn message_blocks(&self) -> &[FieldMatrix] {
        &self.message_blocks
    }

    /// `A_{m+1}`.
    pub fn code_block(&self) -> &FieldMatrix {
        &self.code_block
    }

    /// `A = [A_1 .. A_m]`.
    pub fn message_matrix(&self) -> FieldMatrix {
        let parts: Vec<&FieldMatrix> = self.message_blocks.iter().collect();
        FieldMatrix::hcat_all(self.code_block.modulus(), self.code_block.rows(), &parts).expect("blocks share a height")
    }
}

/// Outcome of checking conditions C1 and C2 one rank equality at a time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// `rank(A_i) = n`, per message.
    pub block_ranks: Vec<bool>,
    /// `rank([A_1 .. A_m]) = mn`.
    pub message_rank: bool,
    /// `rank(A_{m+1}) = l`.
    pub code_rank: bool,
    /// `rank([A D_i | A K_i | A_{m+1}]) = rank([A K_i | A_{m+1}])`, per receiver.
    pub c2: Vec<bool>,
}

impl ConditionReport {
    pub fn c1(&self) -> bool {
        self.message_conditions() && self.code_rank
    }

    /// The part of C1 concerning `A_1..A_m`.
    pub fn message_conditions(&self) -> bool {
        self.block_ranks.iter().all(|&ok| ok) && self.message_rank
    }

    pub fn c2_holds(&self) -> bool {
        self.c2.iter().all(|&ok| ok)
    }

    pub fn all(&self) -> bool {
        self.c1() && self.c2_holds()
    }
}

pub fn check_c1_c2(rep: &GicRepresentation, p: &GicProblem) -> Result<ConditionReport> {
    let mn = p.message_length();
    if rep.message_blocks.len() != p.m {
        return Err(Error::Shape(format!("{} message blocks for {} messages", rep.message_blocks.len(), p.m)));
    }
    if rep.code_block.rows() != mn || rep.message_blocks.iter().any(|b| b.cols() != p.n) {
        return Err(Error::Shape(format!(
            "message blocks must be {mn}x{} and the code block must have {mn} rows",
            p.n
        )));
    }
    if rep.code_block.modulus() != p.q {
        return Err(Error::ModulusMismatch { left: p.q.get(), right: rep.code_block.modulus().get() });
    }
    let a = rep.message_matrix();
    let block_ranks = rep.message_blocks.iter().map(|b| b.rank() == p.n).collect();
    let message_rank = a.rank() == mn;
    let code_rank = rep.code_block.rank() == rep.code_block.cols();
    let c2 = p
        .receivers
        .par_iter()
        .map(|r| {
            let side = a.matmul(&r.knowledge).expect("shapes were checked").hcat(&rep.code_block).expect("same height");
            let with_demand = a.matmul(&r.demand).expect("shapes were checked").hcat(&side).expect("same height");
            with_demand.rank() == side.rank()
        })
        .collect();
    Ok(ConditionReport { block_ranks, message_rank, code_rank, c2 })
}

/// `A_i` = columns `in..(i+1)n` of the identity and `A_{m+1} = L`.
pub fn code_to_representation(p: &GicProblem, code: &IndexCode) -> Result<GicRepresentation> {
    let report = verify_code(p, code)?;
    if let Some(&i) = report.failing().first() {
        return Err(Error::Undecodable { receiver: i });
    }
    let id = FieldMatrix::identity(p.q, p.message_length());
    let message_blocks = (0..p.m).map(|i| id.column_range(i * p.n..(i + 1) * p.n)).collect();
    GicRepresentation::new(message_blocks, code.matrix.clone())
}

/// `L = A⁻¹ · A_{m+1}`.
///
/// Only the conditions on `A_1..A_m` are enforced from C1: a code block of
/// deficient rank still yields a code that every receiver can decode, merely
/// one with redundant transmissions.
pub fn representation_to_code(rep: &GicRepresentation, p: &GicProblem) -> Result<IndexCode> {
    let report = check_c1_c2(rep, p)?;
    if let Some(i) = report.block_ranks.iter().position(|&ok| !ok) {
        return Err(Error::C1Violation(format!("rank(A_{}) != n", i + 1)));
    }
    if !report.message_rank {
        return Err(Error::C1Violation("rank([A_1 .. A_m]) != mn".into()));
    }
    if let Some(i) = report.c2.iter().position(|&ok| !ok) {
        return Err(Error::C2Violation { receiver: i });
    }
    let l = rep.message_matrix().invert()?.matmul(&rep.code_block)?;
    Ok(IndexCode::new(l))
}

/// `{"K":[[...],...],"D":[[...],...]}`, matrices as lists of columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReceiverJson {
    #[serde(rename = "K")]
    pub knowledge: Vec<Vec<u32>>,
    #[serde(rename = "D")]
    pub demand: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemJson {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub receivers: Vec<ReceiverJson>,
}

impl From<&GicProblem> for ProblemJson {
    fn from(p: &GicProblem) -> Self {
        ProblemJson {
            q: p.q.get() as u32,
            m: p.m,
            n: p.n,
            receivers: p
                .receivers
                .iter()
                .map(|r| ReceiverJson { knowledge: r.knowledge.to_columns(), demand: r.demand.to_columns() })
                .collect(),
        }
    }
}

impl TryFrom<&ProblemJson> for GicProblem {
    type Error = Error;
    fn try_from(json: &ProblemJson) -> Result<Self> {
        let q = Modulus::new(json.q)?;
        let height = json.m * json.n;
        let receivers = json
            .receivers
            .iter()
            .map(|r| {
                Receiver::new(
                    FieldMatrix::from_columns(q, height, &r.knowledge)?,
                    FieldMatrix::from_columns(q, height, &r.demand)?,
                )
            })
            .collect::<Result<_>>()?;
        GicProblem::new(q, json.m, json.n, receivers)
    }
}

/// `{"L":[[...],...]}`, the columns of `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    #[serde(rename = "L")]
    pub columns: Vec<Vec<u32>>,
}

impl CodeJson {
    /// Reads the code against a problem, which fixes the field and the height
    /// of a code with no transmissions.
    pub fn to_code(&self, p: &GicProblem) -> Result<IndexCode> {
        Ok(IndexCode::new(FieldMatrix::from_columns(p.q, p.message_length(), &self.columns)?))
    }
}

impl From<&IndexCode> for CodeJson {
    fn from(code: &IndexCode) -> Self {
        CodeJson { columns: code.matrix.to_columns() }
    }
}
