//! Exhaustive search for perfect scalar linear codes over GF(2).
//!
//! A candidate `L` has `t` rows (one per message) and `l = μ` columns. Its
//! free entries are read from a counter: bit `b` of the counter is free entry
//! `b`, free entries being listed row by row (rows ascending, then columns).
//! The first passing counter value is the reported witness, so the result does
//! not depend on how the range is split across threads.
//!
//! When the problem contains receivers that all know exactly the messages in a
//! set `S` and that together demand every message outside `S` one by one, with
//! `|complement(S)| = l`, any solution restricted to the rows outside `S` is
//! an invertible `l × l` block `B`; replacing `L` by `L · B⁻¹` keeps every
//! receiver's decoding span, so those rows can be fixed to the identity and
//! only the rows of `S` are searched.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, Modulus, XorBasis};
use crate::gic::{is_perfect, mu, GicProblem, IndexCode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Fix the forced invertible block of `L` to the identity when the problem allows it.
    pub normalize_y_block: bool,
    /// Maximum number of candidates examined.
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { normalize_y_block: true, budget: 1 << 24, jobs: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Found(IndexCode),
    /// The whole candidate space was examined without success.
    NoneExists,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub candidates_tested: u64,
    /// Whether the identity block was fixed.
    pub normalized: bool,
    /// Number of searched entries of `L`; the space has `2^free_entries` candidates.
    pub free_entries: usize,
}

/// The rows of `L` that are searched and the rows fixed to the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSpace {
    pub rows: usize,
    pub length: usize,
    pub free_rows: Vec<usize>,
    /// `identity_rows[j]` holds the 1 of column `j`, when normalized.
    pub identity_rows: Vec<usize>,
}

impl CandidateSpace {
    pub fn free_entries(&self) -> usize {
        self.free_rows.len() * self.length
    }

    /// Number of candidates, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        1u128.checked_shl(self.free_entries() as u32).unwrap_or(u128::MAX)
    }

    /// Columns of the candidate with the given counter value, as row bitmasks.
    fn columns(&self, counter: u64) -> Vec<u64> {
        let l = self.length;
        let mut cols: Vec<u64> = (0..l).map(|j| self.identity_rows.get(j).map_or(0, |&r| 1 << r)).collect();
        for (fi, &row) in self.free_rows.iter().enumerate() {
            let bits = counter.checked_shr((fi * l) as u32).unwrap_or(0);
            for (j, col) in cols.iter_mut().enumerate() {
                if bits >> j & 1 == 1 {
                    *col |= 1 << row;
                }
            }
        }
        cols
    }

    pub fn candidate(&self, counter: u64) -> IndexCode {
        IndexCode::new(FieldMatrix::from_column_bits(self.rows, &self.columns(counter)))
    }
}

/// Receivers reduced to bitmask form for the search loop.
struct PackedProblem {
    /// Per receiver: the span of `K_i` and the demanded columns.
    receivers: Vec<(XorBasis, Vec<u64>)>,
}

impl PackedProblem {
    fn new(p: &GicProblem) -> Self {
        let mut receivers: Vec<(XorBasis, Vec<u64>)> = p
            .receivers()
            .iter()
            .map(|r| {
                let mut basis = XorBasis::new();
                for c in 0..r.knowledge().cols() {
                    basis.insert(r.knowledge().column_bits(c));
                }
                let demand = (0..r.demand().cols()).map(|c| r.demand().column_bits(c)).collect();
                (basis, demand)
            })
            .collect();
        receivers.sort_by_key(|(basis, _)| basis.rank());
        PackedProblem { receivers }
    }

    fn accepts(&self, columns: &[u64]) -> bool {
        self.receivers.iter().all(|(known, demand)| {
            let mut span = known.clone();
            for &c in columns {
                span.insert(c);
            }
            demand.iter().all(|&d| span.contains(d))
        })
    }
}

fn check_supported(p: &GicProblem) -> Result<()> {
    if p.modulus() != Modulus::GF2 || p.dimension() != 1 {
        return Err(Error::InvalidParameter("the solver handles scalar binary problems only".into()));
    }
    if p.message_count() > 64 {
        return Err(Error::InvalidParameter(format!("{} messages exceed the supported 64", p.message_count())));
    }
    Ok(())
}

/// Finds a set `S` as described in the module documentation and returns the
/// messages outside it in ascending order.
fn forced_identity_rows(p: &GicProblem, length: usize) -> Option<Vec<usize>> {
    let t = p.message_count();
    let mut groups: Vec<(FieldMatrix, u64, u64)> = Vec::new();
    for r in p.receivers() {
        let key = r.knowledge().column_space_key();
        let Some(known) = coordinate_set(&key) else {
            continue;
        };
        let mut demanded = 0u64;
        for c in 0..r.demand().cols() {
            let d = r.demand().column_bits(c);
            if d.count_ones() == 1 && d & known == 0 {
                demanded |= d;
            }
        }
        match groups.iter_mut().find(|(k, _, _)| *k == key) {
            Some(g) => g.2 |= demanded,
            None => groups.push((key, known, demanded)),
        }
    }
    let all = if t == 64 { u64::MAX } else { (1u64 << t) - 1 };
    groups
        .into_iter()
        .find(|&(_, known, demanded)| demanded == all & !known && demanded.count_ones() as usize == length)
        .map(|(_, _, demanded)| (0..t).filter(|&r| demanded >> r & 1 == 1).collect())
}

/// The message set whose unit vectors span the same space as the rows of
/// `key`, if that space is a coordinate subspace.
fn coordinate_set(key: &FieldMatrix) -> Option<u64> {
    let mut set = 0;
    for r in 0..key.rows() {
        let row = key.row(r);
        if row.iter().filter(|&&x| x != 0).count() != 1 {
            return None;
        }
        set |= 1 << row.iter().position(|&x| x != 0)?;
    }
    Some(set)
}

/// The candidate space for codes of length `μ(P)`.
pub fn candidate_space(p: &GicProblem, normalize: bool) -> Result<CandidateSpace> {
    check_supported(p)?;
    let t = p.message_count();
    let length = mu(p);
    let identity_rows = if normalize { forced_identity_rows(p, length).unwrap_or_default() } else { Vec::new() };
    let free_rows = (0..t).filter(|r| !identity_rows.contains(r)).collect();
    Ok(CandidateSpace { rows: t, length, free_rows, identity_rows })
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// The smallest counter value whose candidate is a perfect code, or a
/// certificate that none exists in the (normalized) space.
pub fn solve_perfect_scalar_binary(p: &GicProblem, cfg: &SearchConfig) -> Result<SolveOutcome> {
    if cfg.budget == 0 {
        return Err(Error::InvalidParameter("budget must be positive".into()));
    }
    let space = candidate_space(p, cfg.normalize_y_block)?;
    let packed = PackedProblem::new(p);
    let limit = space.size().min(cfg.budget as u128) as u64;
    let hit = with_pool(cfg.jobs, || (0..limit).into_par_iter().find_first(|&c| packed.accepts(&space.columns(c))))?;
    let normalized = !space.identity_rows.is_empty();
    let free_entries = space.free_entries();
    let outcome = match hit {
        Some(c) => {
            let code = space.candidate(c);
            assert!(is_perfect(p, &code)?, "packed and dense verification disagree");
            SolveOutcome { verdict: Verdict::Found(code), candidates_tested: c + 1, normalized, free_entries }
        }
        None if space.size() <= cfg.budget as u128 => {
            SolveOutcome { verdict: Verdict::NoneExists, candidates_tested: limit, normalized, free_entries }
        }
        None => SolveOutcome { verdict: Verdict::BudgetExceeded, candidates_tested: limit, normalized, free_entries },
    };
    Ok(outcome)
}

/// Number of perfect codes in the (normalized) candidate space.
pub fn count_solutions(p: &GicProblem, cfg: &SearchConfig) -> Result<u64> {
    let space = candidate_space(p, cfg.normalize_y_block)?;
    if space.size() > cfg.budget as u128 {
        return Err(Error::SearchBudgetExceeded { budget: cfg.budget });
    }
    let packed = PackedProblem::new(p);
    let limit = space.size() as u64;
    with_pool(cfg.jobs, || (0..limit).into_par_iter().filter(|&c| packed.accepts(&space.columns(c))).count() as u64)
}

/// Every perfect code in the (normalized) candidate space, in counter order.
pub fn all_solutions(p: &GicProblem, cfg: &SearchConfig) -> Result<Vec<IndexCode>> {
    let space = candidate_space(p, cfg.normalize_y_block)?;
    if space.size() > cfg.budget as u128 {
        return Err(Error::SearchBudgetExceeded { budget: cfg.budget });
    }
    let packed = PackedProblem::new(p);
    let limit = space.size() as u64;
    let hits: Vec<u64> =
        with_pool(cfg.jobs, || (0..limit).into_par_iter().filter(|&c| packed.accepts(&space.columns(c))).collect())?;
    Ok(hits.into_iter().map(|c| space.candidate(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gic::{verify_code, Receiver};

    fn single_receiver() -> GicProblem {
        let q = Modulus::GF2;
        let rx = Receiver::new(FieldMatrix::zeros(q, 1, 0), FieldMatrix::identity(q, 1)).unwrap();
        GicProblem::new(q, 1, 1, vec![rx]).unwrap()
    }

    #[test]
    fn single_receiver_has_one_solution() {
        let p = single_receiver();
        let cfg = SearchConfig::default();
        assert_eq!(count_solutions(&p, &cfg).unwrap(), 1);
        let out = solve_perfect_scalar_binary(&p, &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::Found(IndexCode::new(FieldMatrix::identity(Modulus::GF2, 1))));
        // the receiver forces the only row of L to be 1
        assert!(out.normalized);
        assert_eq!(out.candidates_tested, 1);
        assert_eq!(all_solutions(&p, &cfg).unwrap().len(), 1);
    }

    #[test]
    fn empty_problem_needs_no_transmission() {
        let p = GicProblem::new(Modulus::GF2, 2, 1, vec![]).unwrap();
        let out = solve_perfect_scalar_binary(&p, &SearchConfig::default()).unwrap();
        let Verdict::Found(code) = out.verdict else { panic!("expected a code") };
        assert_eq!(code.length(), 0);
    }

    #[test]
    fn counter_layout_is_row_major() {
        let space = CandidateSpace { rows: 3, length: 2, free_rows: vec![0, 2], identity_rows: vec![] };
        // bits: entry (0,0)=b0, (0,1)=b1, (2,0)=b2, (2,1)=b3
        let code = space.candidate(0b0110);
        assert_eq!(code.matrix().to_rows(), vec![vec![0, 1], vec![0, 0], vec![1, 0]]);
        let fixed = CandidateSpace { rows: 3, length: 2, free_rows: vec![0], identity_rows: vec![1, 2] };
        assert_eq!(fixed.candidate(0b01).matrix().to_rows(), vec![vec![1, 0], vec![1, 0], vec![0, 1]]);
        assert_eq!(fixed.size(), 4);
    }

    #[test]
    fn budget_exceeded_and_none_exists() {
        // x1 demanded with nothing known, x2 demanded knowing x1 + x2: μ = 1, l = 1.
        let q = Modulus::GF2;
        let col = |v: Vec<u32>| FieldMatrix::from_columns(q, 2, &[v]).unwrap();
        let p = GicProblem::new(
            q,
            2,
            1,
            vec![
                Receiver::new(FieldMatrix::zeros(q, 2, 0), col(vec![1, 0])).unwrap(),
                Receiver::new(col(vec![1, 1]), col(vec![0, 1])).unwrap(),
            ],
        )
        .unwrap();
        let cfg = SearchConfig { budget: 1, ..SearchConfig::default() };
        let out = solve_perfect_scalar_binary(&p, &cfg).unwrap();
        assert_eq!(out.verdict, Verdict::BudgetExceeded);
        assert_eq!(out.candidates_tested, 1);
        let out = solve_perfect_scalar_binary(&p, &SearchConfig::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Found(IndexCode::new(col(vec![1, 0]))));
        assert!(matches!(count_solutions(&p, &cfg), Err(Error::SearchBudgetExceeded { budget: 1 })));

        // x1 demanded knowing x2, x2 demanded knowing x1, plus x1 with nothing: μ = 1
        // but the code x1 fails receiver 2 and x1 + x2 fails receiver 3.
        let p = GicProblem::new(
            q,
            2,
            1,
            vec![
                Receiver::new(col(vec![0, 1]), col(vec![1, 0])).unwrap(),
                Receiver::new(col(vec![1, 0]), col(vec![0, 1])).unwrap(),
                Receiver::new(FieldMatrix::zeros(q, 2, 0), col(vec![1, 0])).unwrap(),
            ],
        )
        .unwrap();
        let out = solve_perfect_scalar_binary(&p, &SearchConfig::default()).unwrap();
        assert_eq!(out.verdict, Verdict::NoneExists);
        // receiver 1 alone forces the x1 row of L to be nonzero
        assert!(out.normalized);
        assert_eq!(out.candidates_tested, 2);
        let full = SearchConfig { normalize_y_block: false, ..SearchConfig::default() };
        let out = solve_perfect_scalar_binary(&p, &full).unwrap();
        assert_eq!((out.verdict, out.candidates_tested, out.normalized), (Verdict::NoneExists, 4, false));
    }

    #[test]
    fn rejects_unsupported_problems() {
        let q = Modulus::GF3;
        let rx = Receiver::new(FieldMatrix::zeros(q, 1, 0), FieldMatrix::identity(q, 1)).unwrap();
        let p = GicProblem::new(q, 1, 1, vec![rx]).unwrap();
        assert!(matches!(solve_perfect_scalar_binary(&p, &SearchConfig::default()), Err(Error::InvalidParameter(_))));
        let v = single_receiver().vectorize(2).unwrap();
        assert!(solve_perfect_scalar_binary(&v, &SearchConfig::default()).is_err());
        let zero = SearchConfig { budget: 0, ..SearchConfig::default() };
        assert!(solve_perfect_scalar_binary(&single_receiver(), &zero).is_err());
    }

    #[test]
    fn job_count_does_not_change_the_witness() {
        let q = Modulus::GF2;
        let cols =
            |v: &[&[u32]]| FieldMatrix::from_columns(q, 3, &v.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap();
        let p = GicProblem::new(
            q,
            3,
            1,
            vec![
                Receiver::new(cols(&[&[0, 1, 0], &[0, 0, 1]]), cols(&[&[1, 0, 0]])).unwrap(),
                Receiver::new(cols(&[&[1, 0, 0], &[0, 0, 1]]), cols(&[&[0, 1, 0]])).unwrap(),
                Receiver::new(cols(&[&[1, 0, 0], &[0, 1, 0]]), cols(&[&[0, 0, 1]])).unwrap(),
            ],
        )
        .unwrap();
        let one = solve_perfect_scalar_binary(&p, &SearchConfig { jobs: Some(1), ..SearchConfig::default() }).unwrap();
        let four = solve_perfect_scalar_binary(&p, &SearchConfig { jobs: Some(4), ..SearchConfig::default() }).unwrap();
        assert_eq!(one, four);
        let Verdict::Found(code) = one.verdict else { panic!("expected a code") };
        assert!(verify_code(&p, &code).unwrap().passed());
        assert_eq!(code.matrix().to_columns(), vec![vec![1, 1, 1]]);
    }
}
