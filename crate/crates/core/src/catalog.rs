//! Bundled instances: small problems, polymatroids and matroids with known
//! codes or representations.

use crate::constructions::{gic_from_matroid, gic_from_polymatroid, Construction};
use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, Modulus};
use crate::gic::{GicProblem, IndexCode, Receiver};
use crate::matroid::Matroid;
use crate::polymatroid::DiscretePolymatroid;

pub const NAMES: [&str; 6] = ["eg1", "eg3", "eg4", "u23", "u24", "hamming"];

/// What a bundled problem was built from.
#[derive(Debug, Clone)]
pub enum Source {
    Matroid(Matroid),
    Polymatroid(DiscretePolymatroid),
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: &'static str,
    pub problem: GicProblem,
    pub code: Option<IndexCode>,
    pub source: Option<Source>,
    pub construction: Option<Construction>,
}

fn gf2(text: &str) -> FieldMatrix {
    FieldMatrix::parse_text(Modulus::GF2, text).expect("bundled matrix")
}

fn gf2_columns(height: usize, columns: &[&[u32]]) -> FieldMatrix {
    let columns: Vec<Vec<u32>> = columns.iter().map(|c| c.to_vec()).collect();
    FieldMatrix::from_columns(Modulus::GF2, height, &columns).expect("bundled matrix")
}

/// Five binary messages and five receivers with coded side information,
/// solved by `x1 + x2`, `x3 + x4`, `x5`.
pub fn eg1() -> (GicProblem, IndexCode) {
    let rx =
        |k: &[&[u32]], d: &[&[u32]]| Receiver::new(gf2_columns(5, k), gf2_columns(5, d)).expect("bundled receiver");
    let receivers = vec![
        rx(&[&[0, 1, 0, 0, 0]], &[&[1, 0, 0, 0, 0]]),
        rx(&[&[1, 0, 0, 0, 1]], &[&[0, 1, 0, 0, 0]]),
        rx(&[&[1, 0, 0, 0, 0], &[0, 0, 0, 1, 0]], &[&[0, 0, 1, 0, 0]]),
        rx(&[&[1, 1, 1, 0, 0]], &[&[0, 0, 0, 1, 0]]),
        rx(&[&[0, 1, 0, 0, 0], &[1, 0, 1, 0, 0]], &[&[0, 0, 1, 1, 1]]),
    ];
    let problem = GicProblem::new(Modulus::GF2, 5, 1, receivers).expect("bundled problem");
    let code = IndexCode::new(gf2("1 0 0; 1 0 0; 0 1 0; 0 1 0; 0 0 1"));
    (problem, code)
}

/// Rank function `ρ{1} = ρ{2} = 1`, `ρ{1,2} = ρ{3} = 2`, everything else 3.
pub fn eg3_polymatroid() -> DiscretePolymatroid {
    DiscretePolymatroid::from_rank_table(3, vec![0, 1, 1, 2, 2, 3, 3, 3]).expect("bundled rank table")
}

/// Transmissions of the perfect code for the problem built from [`eg3_polymatroid`].
pub const EG3_CODE: [&str; 4] = ["y1^1+x1", "y2^1+x2", "y3^1+x3", "y3^2+x1+x2+x3"];

/// Rank function `ρ{1} = ρ{2} = ρ{2,3} = 2`, `ρ{3} = 1`, everything else 3:
/// binary representable, yet its problem has no perfect binary code.
pub fn eg4_polymatroid() -> DiscretePolymatroid {
    DiscretePolymatroid::from_rank_table(3, vec![0, 2, 2, 3, 1, 3, 2, 3]).expect("bundled rank table")
}

/// Binary representation of `U_{2,3}`.
pub fn u23_representation() -> FieldMatrix {
    gf2("1 0 1; 0 1 1")
}

/// Ternary representation of `U_{2,4}`.
pub fn u24_ternary_representation() -> FieldMatrix {
    FieldMatrix::parse_text(Modulus::GF3, "1 0 1 1; 0 1 1 2").expect("bundled matrix")
}

/// Generator matrix of the [7,4,3] Hamming code.
pub fn hamming_generator() -> FieldMatrix {
    gf2("1 0 0 0 0 1 1; 0 1 0 0 1 0 1; 0 0 1 0 1 1 0; 0 0 0 1 1 1 1")
}

/// Code given by one transmission per string, e.g. `y3^2+x1`.
pub fn code_from_sums(c: &Construction, sums: &[&str]) -> Result<IndexCode> {
    let columns = sums.iter().map(|s| c.layout.parse_sum(s)).collect::<Result<Vec<_>>>()?;
    Ok(IndexCode::new(FieldMatrix::from_columns(Modulus::GF2, c.layout.total(), &columns)?))
}

fn from_matroid(name: &'static str, m: Matroid, rep: Option<&FieldMatrix>) -> Result<Instance> {
    let c = gic_from_matroid(&m)?;
    let code = rep.map(|r| crate::constructions::code_from_matroid_rep(r, &c.problem)).transpose()?;
    Ok(Instance { name, problem: c.problem.clone(), code, source: Some(Source::Matroid(m)), construction: Some(c) })
}

fn from_polymatroid(name: &'static str, d: DiscretePolymatroid, sums: Option<&[&str]>) -> Result<Instance> {
    let c = gic_from_polymatroid(&d)?;
    let code = sums.map(|s| code_from_sums(&c, s)).transpose()?;
    Ok(Instance { name, problem: c.problem.clone(), code, source: Some(Source::Polymatroid(d)), construction: Some(c) })
}

pub fn instance(name: &str) -> Result<Instance> {
    match name {
        "eg1" => {
            let (problem, code) = eg1();
            Ok(Instance { name: "eg1", problem, code: Some(code), source: None, construction: None })
        }
        "eg3" => from_polymatroid("eg3", eg3_polymatroid(), Some(&EG3_CODE)),
        "eg4" => from_polymatroid("eg4", eg4_polymatroid(), None),
        "u23" => {
            let rep = u23_representation();
            from_matroid("u23", Matroid::from_matrix(&rep)?, Some(&rep))
        }
        "u24" => from_matroid("u24", Matroid::uniform(2, 4)?, None),
        "hamming" => {
            let g = hamming_generator();
            from_matroid("hamming", Matroid::from_matrix(&g)?, Some(&g))
        }
        other => {
            Err(Error::InvalidParameter(format!("unknown instance {other:?}; expected one of {}", NAMES.join(", "))))
        }
    }
}
