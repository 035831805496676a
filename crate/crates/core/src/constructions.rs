//! GIC problems built from discrete polymatroids and from matroids, and the
//! maps between their perfect codes and representations.
//!
//! Both constructions use the message order `x_1..x_k` followed by the
//! `y` messages: `y_1^1..y_1^{ρ({1})}, y_2^1, ..` for a polymatroid and
//! `y_1..y_m` for a matroid.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, Modulus};
use crate::gic::{is_perfect, GicProblem, IndexCode, Receiver};
use crate::matroid::Matroid;
use crate::polymatroid::{DiscretePolymatroid, IntVector, SubspaceRepresentation};
use crate::subset::{self, combinations};

/// A message of a constructed problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MessageIndex {
    /// `x_j`, zero-based `j`.
    X(usize),
    /// `y_i^p`, zero-based element `i` and copy `p`.
    Y(usize, usize),
}

/// Placement of the messages of a constructed problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageLayout {
    k: usize,
    copies: Vec<usize>,
    offsets: Vec<usize>,
    superscripts: bool,
}

impl MessageLayout {
    fn new(k: usize, copies: Vec<usize>, superscripts: bool) -> Self {
        let mut offsets = Vec::with_capacity(copies.len());
        let mut at = k;
        for &c in &copies {
            offsets.push(at);
            at += c;
        }
        MessageLayout { k, copies, offsets, superscripts }
    }

    /// Number of `x` messages.
    pub fn x_count(&self) -> usize {
        self.k
    }

    /// Number of `y` messages.
    pub fn y_count(&self) -> usize {
        self.copies.iter().sum()
    }

    /// `t`, the total message count.
    pub fn total(&self) -> usize {
        self.k + self.y_count()
    }

    /// Number of copies `y_i^1..` of element `i`.
    pub fn copies(&self, i: usize) -> usize {
        self.copies[i]
    }

    pub fn position(&self, msg: MessageIndex) -> usize {
        match msg {
            MessageIndex::X(j) => j,
            MessageIndex::Y(i, p) => self.offsets[i] + p,
        }
    }

    pub fn message_at(&self, pos: usize) -> MessageIndex {
        if pos < self.k {
            return MessageIndex::X(pos);
        }
        let i = (0..self.copies.len())
            .rfind(|&e| self.copies[e] > 0 && self.offsets[e] <= pos)
            .expect("position within the layout");
        MessageIndex::Y(i, pos - self.offsets[i])
    }

    /// `x1`, `y3^2` (or `y3` for matroid problems).
    pub fn label(&self, msg: MessageIndex) -> String {
        match msg {
            MessageIndex::X(j) => format!("x{}", j + 1),
            MessageIndex::Y(i, p) if self.superscripts => format!("y{}^{}", i + 1, p + 1),
            MessageIndex::Y(i, _) => format!("y{}", i + 1),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.total()).map(|pos| self.label(self.message_at(pos))).collect()
    }

    /// Looks up a label such as `x2`, `y3^1` or (in matroid problems) `y3`.
    pub fn find(&self, label: &str) -> Option<MessageIndex> {
        (0..self.total()).map(|pos| self.message_at(pos)).find(|&m| self.label(m) == label)
    }

    /// Reads `y3^2 + x1 + x2` as a binary column over the message order.
    /// Repeated labels cancel.
    pub fn parse_sum(&self, text: &str) -> Result<Vec<u32>> {
        let mut v = vec![0; self.total()];
        for token in text.split('+').map(str::trim) {
            let msg = self.find(token).ok_or_else(|| Error::Parse(format!("unknown message {token:?}")))?;
            v[self.position(msg)] ^= 1;
        }
        Ok(v)
    }

    fn unit(&self, msg: MessageIndex) -> Vec<u32> {
        let mut v = vec![0; self.total()];
        v[self.position(msg)] = 1;
        v
    }

    fn sum(&self, msgs: &[MessageIndex]) -> Vec<u32> {
        let mut v = vec![0; self.total()];
        for &m in msgs {
            v[self.position(m)] = 1;
        }
        v
    }
}

/// Which receiver family produced a receiver, and from what.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Origin {
    /// Polymatroid receiver demanding `x_j` with plain side information `∪ η_l`.
    S1 { basis_vector: IntVector, demand: String, side: Vec<String> },
    /// Polymatroid receiver demanding `y_j^p` and knowing the sum over `Γ₁ ∪ Γ₂`.
    S2 { excluded_vector: IntVector, j: usize, p: usize, gamma1: Vec<String>, gamma2: Vec<String> },
    /// Matroid receiver demanding `x_i` and knowing the `y`s of a basis.
    R1 { basis: Vec<usize>, demand: String },
    /// Matroid receiver demanding one element of a circuit and knowing the sum of the rest.
    R2 { circuit: Vec<usize>, demand: String },
    /// Receiver demanding a `y` message and knowing every `x`.
    R3 { demand: String },
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::S1 { basis_vector, demand, side } => {
                write!(f, "S1{basis_vector}: ({demand}, {{{}}})", side.join(","))
            }
            Origin::S2 { excluded_vector, j, p, gamma1, gamma2 } => {
                let sum: Vec<&str> = gamma1.iter().chain(gamma2).map(String::as_str).collect();
                write!(f, "S2({excluded_vector},{j},{p}): (y{j}^{p}, {{{}}})", sum.join("+"))
            }
            Origin::R1 { basis, demand } => write!(f, "R1 basis {basis:?}: {demand}"),
            Origin::R2 { circuit, demand } => write!(f, "R2 circuit {circuit:?}: {demand}"),
            Origin::R3 { demand } => write!(f, "R3: {demand}"),
        }
    }
}

/// For each receiver, every generator that produced it (several when
/// duplicates were merged), in receiver order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    pub messages: Vec<String>,
    pub receivers: Vec<Vec<Origin>>,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub problem: GicProblem,
    pub trace: ConstructionTrace,
    pub layout: MessageLayout,
}

/// Accumulates receivers, merging identical (demand, knowledge) pairs.
struct Builder {
    layout: MessageLayout,
    receivers: Vec<(Vec<Vec<u32>>, Vec<u32>)>,
    origins: Vec<Vec<Origin>>,
    seen: HashMap<(Vec<Vec<u32>>, Vec<u32>), usize>,
}

impl Builder {
    fn new(layout: MessageLayout) -> Self {
        Builder { layout, receivers: Vec::new(), origins: Vec::new(), seen: HashMap::new() }
    }

    fn push(&mut self, knowledge: Vec<Vec<u32>>, demand: Vec<u32>, origin: Origin) {
        let key = (knowledge, demand);
        if let Some(&idx) = self.seen.get(&key) {
            self.origins[idx].push(origin);
            return;
        }
        self.seen.insert(key.clone(), self.receivers.len());
        self.receivers.push(key);
        self.origins.push(vec![origin]);
    }

    fn labels(&self, msgs: &[MessageIndex]) -> Vec<String> {
        msgs.iter().map(|&m| self.layout.label(m)).collect()
    }

    fn x_knowledge(&self) -> Vec<Vec<u32>> {
        (0..self.layout.k).map(|j| self.layout.unit(MessageIndex::X(j))).collect()
    }

    fn finish(self) -> Result<Construction> {
        let q = Modulus::GF2;
        let t = self.layout.total();
        let receivers = self
            .receivers
            .iter()
            .map(|(k, d)| {
                Receiver::new(
                    FieldMatrix::from_columns(q, t, k)?,
                    FieldMatrix::from_columns(q, t, std::slice::from_ref(d))?,
                )
            })
            .collect::<Result<_>>()?;
        let problem = GicProblem::new(q, t, 1, receivers)?;
        let trace = ConstructionTrace { messages: self.layout.labels(), receivers: self.origins };
        Ok(Construction { problem, trace, layout: self.layout })
    }
}

/// Every way of choosing `counts[l]` copies of each element `l` in `elements`,
/// as the product of lexicographic combinations.
fn copy_choices(elements: &[usize], counts: &[usize], copies: &[usize]) -> Vec<Vec<MessageIndex>> {
    let mut out = vec![Vec::new()];
    for (&l, &c) in elements.iter().zip(counts) {
        let pool: Vec<usize> = (0..copies[l]).collect();
        let picks = combinations(&pool, c);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                picks.iter().map(move |pick| {
                    let mut next = prefix.clone();
                    next.extend(pick.iter().map(|&p| MessageIndex::Y(l, p)));
                    next
                })
            })
            .collect();
    }
    out
}

/// `I_D(Z, R)`: receivers `S₁(b)` for every basis vector, `S₂(c, j, p)` for
/// every minimal excluded vector, and `R₃`, in that order and deduplicated.
pub fn gic_from_polymatroid(d: &DiscretePolymatroid) -> Result<Construction> {
    let k = d.full_rank() as usize;
    if k == 0 {
        return Err(Error::Degenerate("the polymatroid has rank 0".into()));
    }
    let r = d.ground_size();
    let copies: Vec<usize> = d.caps().components().iter().map(|&c| c as usize).collect();
    let mut b = Builder::new(MessageLayout::new(k, copies.clone(), true));

    for basis in d.basis_vectors() {
        let support: Vec<usize> = (0..r).filter(|&l| basis.components()[l] > 0).collect();
        let counts: Vec<usize> = support.iter().map(|&l| basis.components()[l] as usize).collect();
        for eta in copy_choices(&support, &counts, &copies) {
            let side: Vec<Vec<u32>> = eta.iter().map(|&m| b.layout.unit(m)).collect();
            for j in 0..k {
                let origin = Origin::S1 {
                    basis_vector: basis.clone(),
                    demand: b.layout.label(MessageIndex::X(j)),
                    side: b.labels(&eta),
                };
                b.push(side.clone(), b.layout.unit(MessageIndex::X(j)), origin);
            }
        }
    }

    for c in d.minimal_excluded_vectors() {
        let cs = c.components();
        for j in (0..r).filter(|&j| cs[j] > 0) {
            let others: Vec<usize> = (0..r).filter(|&l| l != j && cs[l] > 0).collect();
            let counts: Vec<usize> = others.iter().map(|&l| cs[l] as usize).collect();
            let gamma1_choices = copy_choices(&others, &counts, &copies);
            for p in 0..copies[j] {
                let rest: Vec<usize> = (0..copies[j]).filter(|&x| x != p).collect();
                let gamma2_choices = combinations(&rest, cs[j] as usize - 1);
                for gamma1 in &gamma1_choices {
                    for g2 in &gamma2_choices {
                        let gamma2: Vec<MessageIndex> = g2.iter().map(|&x| MessageIndex::Y(j, x)).collect();
                        let all: Vec<MessageIndex> = gamma1.iter().chain(&gamma2).copied().collect();
                        let origin = Origin::S2 {
                            excluded_vector: c.clone(),
                            j: j + 1,
                            p: p + 1,
                            gamma1: b.labels(gamma1),
                            gamma2: b.labels(&gamma2),
                        };
                        b.push(vec![b.layout.sum(&all)], b.layout.unit(MessageIndex::Y(j, p)), origin);
                    }
                }
            }
        }
    }

    push_r3(&mut b);
    b.finish()
}

/// `I_M(Z, R)`: receivers `(x_i, B)` for every basis, `(y, Σ_{C∖{y}} y_j)` for
/// every circuit and `R₃`, in that order and deduplicated.
pub fn gic_from_matroid(matroid: &Matroid) -> Result<Construction> {
    let k = matroid.full_rank() as usize;
    if k == 0 {
        return Err(Error::Degenerate("the matroid has rank 0".into()));
    }
    let m = matroid.ground_size();
    let mut b = Builder::new(MessageLayout::new(k, vec![1; m], false));

    for basis in matroid.bases() {
        let elements = subset::elements(basis);
        let side: Vec<Vec<u32>> = elements.iter().map(|&e| b.layout.unit(MessageIndex::Y(e, 0))).collect();
        for i in 0..k {
            let origin = Origin::R1 {
                basis: elements.iter().map(|e| e + 1).collect(),
                demand: b.layout.label(MessageIndex::X(i)),
            };
            b.push(side.clone(), b.layout.unit(MessageIndex::X(i)), origin);
        }
    }

    for circuit in matroid.circuits() {
        let elements = subset::elements(circuit);
        for &y in &elements {
            let rest: Vec<MessageIndex> =
                elements.iter().filter(|&&e| e != y).map(|&e| MessageIndex::Y(e, 0)).collect();
            let origin = Origin::R2 {
                circuit: elements.iter().map(|e| e + 1).collect(),
                demand: b.layout.label(MessageIndex::Y(y, 0)),
            };
            b.push(vec![b.layout.sum(&rest)], b.layout.unit(MessageIndex::Y(y, 0)), origin);
        }
    }

    push_r3(&mut b);
    b.finish()
}

fn push_r3(b: &mut Builder) {
    let xs = b.x_knowledge();
    for i in 0..b.layout.copies.len() {
        for p in 0..b.layout.copies[i] {
            let msg = MessageIndex::Y(i, p);
            let origin = Origin::R3 { demand: b.layout.label(msg) };
            b.push(xs.clone(), b.layout.unit(msg), origin);
        }
    }
}

/// Splits a problem's message count into `(k, y count)` given the code length
/// `l`, which for a perfect code of a constructed problem equals the y count.
fn x_and_y(p: &GicProblem, code: &IndexCode) -> Result<(usize, usize)> {
    let y = code.length() / p.dimension();
    if y * p.dimension() != code.length() || y > p.message_count() {
        return Err(Error::NotPerfect(format!("code length {} does not fit the problem", code.length())));
    }
    Ok((p.message_count() - y, y))
}

/// `L = [M_rep; I_m]`: transmission `i` is `y_i + ξ · M_i`.
pub fn code_from_matroid_rep(m_rep: &FieldMatrix, p: &GicProblem) -> Result<IndexCode> {
    if m_rep.modulus() != Modulus::GF2 || p.modulus() != Modulus::GF2 {
        return Err(Error::InvalidParameter("matroid codes are binary only".into()));
    }
    let (k, m) = m_rep.shape();
    if p.dimension() != 1 || p.message_count() != k + m {
        return Err(Error::Shape(format!(
            "a {k}x{m} representation needs a scalar problem with {} messages, got {}",
            k + m,
            p.message_count()
        )));
    }
    let code = IndexCode::new(m_rep.vcat(&FieldMatrix::identity(Modulus::GF2, m))?);
    if !is_perfect(p, &code)? {
        return Err(Error::RepresentationMismatch);
    }
    Ok(code)
}

/// `C` with `L · B⁻¹ = [C; I]`, where `B` is the y-block of `L`.
pub fn matroid_rep_from_code(p: &GicProblem, code: &IndexCode) -> Result<FieldMatrix> {
    if p.modulus() != Modulus::GF2 || p.dimension() != 1 {
        return Err(Error::InvalidParameter("matroid codes are scalar and binary".into()));
    }
    if !is_perfect(p, code)? {
        return Err(Error::NotPerfect("the code is not a verified code of length μ".into()));
    }
    let (k, m) = x_and_y(p, code)?;
    let l = code.matrix();
    let b = l.row_range(k..k + m).invert().map_err(|_| Error::NonInvertibleYBlock)?;
    l.row_range(0..k).matmul(&b)
}

/// Representation of `nD` read off a perfect code of `I_D` with message dimension `n`.
///
/// The lower block of `L` (the rows of the `y` messages) is normalized to the
/// identity, the remaining rows `C` are split into blocks of width `n · ρ({i})`,
/// and the result is checked against `nD` on every subset.
pub fn polymatroid_rep_from_code(
    p: &GicProblem,
    code: &IndexCode,
    d: &DiscretePolymatroid,
    n: usize,
) -> Result<SubspaceRepresentation> {
    if p.dimension() != n {
        return Err(Error::Shape(format!("problem has dimension {}, expected {n}", p.dimension())));
    }
    let widths: Vec<usize> = d.caps().components().iter().map(|&c| c as usize * n).collect();
    let y_rows: usize = widths.iter().sum();
    let k = d.full_rank() as usize;
    if code.length() != y_rows || p.message_length() != n * k + y_rows {
        return Err(Error::NotPerfect(format!("code length {} differs from n·Σρ({{i}}) = {y_rows}", code.length())));
    }
    if !is_perfect(p, code)? {
        return Err(Error::NotPerfect("the code is not a verified code of length nμ".into()));
    }
    let l = code.matrix();
    let lower = l.row_range(n * k..n * k + y_rows).invert().map_err(|_| Error::NonInvertibleLowerBlock)?;
    let c = l.row_range(0..n * k).matmul(&lower)?;
    let rep = SubspaceRepresentation::from_representing_matrix(&c, &widths)?;
    if DiscretePolymatroid::from_subspaces(&rep)? != d.scale(n as u32)? {
        return Err(Error::RepresentationMismatch);
    }
    Ok(rep)
}
