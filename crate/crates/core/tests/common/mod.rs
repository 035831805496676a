//! Random instances and decoding helpers shared by the integration suites.

#![allow(dead_code)]

use gic_core::subset::{contains, elements};
use gic_core::{Construction, FieldMatrix, GicProblem, IndexCode, Modulus, Origin, Receiver};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_matrix(rng: &mut ChaCha8Rng, q: Modulus, rows: usize, cols: usize) -> FieldMatrix {
    let entries: Vec<Vec<u32>> =
        (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..q.get() as u32)).collect()).collect();
    FieldMatrix::from_rows_with_width(q, cols, &entries).unwrap()
}

pub fn random_problem(rng: &mut ChaCha8Rng, q: Modulus, m: usize, n: usize, receivers: usize) -> GicProblem {
    let rows = m * n;
    let receivers = (0..receivers)
        .map(|_| {
            let h = rng.gen_range(0..=rows.min(3));
            let w = rng.gen_range(1..=n.min(2));
            Receiver::new(random_matrix(rng, q, rows, h), random_matrix(rng, q, rows, w)).unwrap()
        })
        .collect();
    GicProblem::new(q, m, n, receivers).unwrap()
}

/// A code of length at most `max_l`. A third of the time it is built from the
/// demands themselves so that passing codes are well represented.
pub fn random_code(rng: &mut ChaCha8Rng, p: &GicProblem, max_l: usize) -> IndexCode {
    let q = p.modulus();
    let rows = p.message_length();
    if rng.gen_ratio(1, 3) {
        let mut columns: Vec<Vec<u32>> = p.receivers().iter().flat_map(|r| r.demand().to_columns()).collect();
        columns.truncate(max_l);
        return IndexCode::new(FieldMatrix::from_columns(q, rows, &columns).unwrap());
    }
    let l = rng.gen_range(0..=max_l);
    IndexCode::new(random_matrix(rng, q, rows, l))
}

pub fn random_invertible(rng: &mut ChaCha8Rng, q: Modulus, n: usize) -> FieldMatrix {
    loop {
        let a = random_matrix(rng, q, n, n);
        if a.rank() == n {
            return a;
        }
    }
}

/// A `k x m` binary matrix of rank `k`.
pub fn random_full_rank_binary(rng: &mut ChaCha8Rng, k: usize, m: usize) -> FieldMatrix {
    loop {
        let a = random_matrix(rng, Modulus::GF2, k, m);
        if a.rank() == k {
            return a;
        }
    }
}

/// `|GL(l, 2)|`.
pub fn gl2_order(l: usize) -> u64 {
    (0..l).map(|i| (1u64 << l) - (1u64 << i)).product()
}

/// Every receiver that demands one message `x_j` and knows a set of other
/// messages, for `m` binary messages.
pub fn conventional_receivers(m: usize) -> Vec<Receiver> {
    let mut out = Vec::new();
    for j in 0..m {
        for h in 0u32..(1 << m) {
            if contains(h, j) {
                continue;
            }
            let columns: Vec<usize> = elements(h);
            let mut k = FieldMatrix::zeros(Modulus::GF2, m, columns.len());
            for (c, &i) in columns.iter().enumerate() {
                k.set(i, c, 1);
            }
            out.push(Receiver::new(k, FieldMatrix::unit_column(Modulus::GF2, m, j)).unwrap());
        }
    }
    out
}

/// Whether some binary `m x l` matrix is a code for `p`.
pub fn some_code_of_length(p: &GicProblem, l: usize) -> bool {
    let m = p.message_length();
    let bits = m * l;
    (0u64..1 << bits).any(|c| {
        let columns: Vec<u64> = (0..l).map(|j| (c >> (j * m)) & ((1 << m) - 1)).collect();
        let code = IndexCode::new(FieldMatrix::from_column_bits(m, &columns));
        gic_core::verify_code(p, &code).unwrap().passed()
    })
}

/// Builds the decoding vector over `[K_i | L]` described by `expr`, or says why it cannot.
pub fn decoder_for(c: &Construction, code: &IndexCode, rx: usize, expr: &str) -> Result<FieldMatrix, String> {
    let q = Modulus::GF2;
    let receiver = &c.problem.receivers()[rx];
    let k = receiver.knowledge();
    let l = code.length();
    let mut transmissions = vec![0u32; l];
    let mut messages = Vec::new();
    for token in expr.split('+') {
        match token.strip_prefix('c') {
            Some(j) => transmissions[j.parse::<usize>().unwrap() - 1] ^= 1,
            None => messages.push(token),
        }
    }
    let side = if messages.is_empty() {
        vec![0; c.layout.total()]
    } else {
        c.layout.parse_sum(&messages.join("+")).map_err(|e| e.to_string())?
    };
    let side = FieldMatrix::from_columns(q, c.layout.total(), &[side]).unwrap();
    let a = k.solve_right(&side).map_err(|_| format!("{expr}: uses messages outside the side information"))?;
    let mut m = a.to_columns()[0].clone();
    m.extend(transmissions);
    let m = FieldMatrix::from_columns(q, k.cols() + l, &[m]).unwrap();
    let decoded = k.hcat(code.matrix()).unwrap().matmul(&m).unwrap();
    if &decoded != receiver.demand() {
        return Err(format!("{expr}: does not produce the demand"));
    }
    Ok(m)
}

pub fn receiver_index(c: &Construction, pred: impl Fn(&Origin) -> bool) -> usize {
    let found: Vec<usize> = (0..c.trace.receivers.len()).filter(|&i| c.trace.receivers[i].iter().any(&pred)).collect();
    assert_eq!(found.len(), 1, "receiver lookup is ambiguous or empty");
    found[0]
}
