//! Exact linear algebra over the prime fields GF(2), GF(3) and GF(5).
//!
//! Matrices are dense and row-major. Every reduction pivots on the first
//! nonzero entry found scanning down the current column, so echelon forms and
//! the particular solutions returned by [`FieldMatrix::solve_right`] are
//! reproducible bit for bit.
//!
//! GF(2) vectors of length at most 64 can also be packed into a `u64`; see
//! [`XorBasis`]. [`FieldMatrix::rank`] uses that encoding internally for binary
//! matrices with at most 64 columns.

use std::fmt;
use std::ops::{Add, Mul, Neg, Range, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A supported prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u8);

impl Modulus {
    pub const GF2: Modulus = Modulus(2);
    pub const GF3: Modulus = Modulus(3);
    pub const GF5: Modulus = Modulus(5);

    pub fn new(q: u32) -> Result<Self> {
        match q {
            2 | 3 | 5 => Ok(Modulus(q as u8)),
            _ => Err(Error::UnsupportedModulus(q)),
        }
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        (a + b) % self.0
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        (a + self.0 - b) % self.0
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        (a * b) % self.0
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        (self.0 - a) % self.0
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self, a: u8) -> Option<u8> {
        if a == 0 {
            return None;
        }
        // Fermat: a^(q-2)
        let mut acc = 1u8;
        for _ in 0..self.0 - 2 {
            acc = self.mul(acc, a);
        }
        Some(acc)
    }

    pub fn element(self, value: u32) -> Result<FieldElement> {
        if value >= self.0 as u32 {
            return Err(Error::EntryOutOfRange { value, q: self.0 });
        }
        Ok(FieldElement { value: value as u8, modulus: self })
    }

    fn check(self, value: u32) -> Result<u8> {
        self.element(value).map(|e| e.value)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0)
    }
}

/// A single element of GF(q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u8,
    modulus: Modulus,
}

impl FieldElement {
    pub fn value(self) -> u8 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<FieldElement> {
        self.modulus.inv(self.value).map(|value| FieldElement { value, modulus: self.modulus })
    }
}

macro_rules! element_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.modulus, rhs.modulus, "field elements over different moduli");
                FieldElement { value: self.modulus.$method(self.value, rhs.value), modulus: self.modulus }
            }
        }
    };
}

element_binop!(Add, add);
element_binop!(Sub, sub);
element_binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { value: self.modulus.neg(self.value), modulus: self.modulus }
    }
}

/// Dense matrix over GF(q).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    q: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
}

impl FieldMatrix {
    pub fn zeros(q: Modulus, rows: usize, cols: usize) -> Self {
        FieldMatrix { q, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(q: Modulus, n: usize) -> Self {
        let mut m = Self::zeros(q, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Column `index` of the `height`×`height` identity.
    pub fn unit_column(q: Modulus, height: usize, index: usize) -> Self {
        let mut m = Self::zeros(q, height, 1);
        m.data[index] = 1;
        m
    }

    /// Builds a matrix from row vectors. All rows must have the same length.
    pub fn from_rows(q: Modulus, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_width(q, cols, rows)
    }

    /// Like [`from_rows`](Self::from_rows) but with an explicit width, so that
    /// matrices with zero rows keep their column count.
    pub fn from_rows_with_width(q: Modulus, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for &v in row {
                data.push(q.check(v)?);
            }
        }
        Ok(FieldMatrix { q, rows: rows.len(), cols, data })
    }

    /// Builds a `height`-row matrix from column vectors.
    pub fn from_columns(q: Modulus, height: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let mut m = Self::zeros(q, height, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != height {
                return Err(Error::Shape(format!("column {j} has {} entries, expected {height}", col.len())));
            }
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = q.check(v)?;
            }
        }
        Ok(m)
    }

    /// Binary matrix whose column `j` is the bit pattern `columns[j]` (bit `i` = row `i`).
    pub fn from_column_bits(height: usize, columns: &[u64]) -> Self {
        assert!(height <= 64);
        let mut m = Self::zeros(Modulus::GF2, height, columns.len());
        for (j, &bits) in columns.iter().enumerate() {
            for i in 0..height {
                m.data[i * m.cols + j] = ((bits >> i) & 1) as u8;
            }
        }
        m
    }

    /// Packs column `j` of a binary matrix with at most 64 rows.
    pub fn column_bits(&self, j: usize) -> u64 {
        assert_eq!(self.q, Modulus::GF2);
        assert!(self.rows <= 64);
        (0..self.rows).fold(0u64, |acc, i| acc | ((self.data[i * self.cols + j] as u64) << i))
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: u8) {
        assert!(r < self.rows && c < self.cols);
        assert!(value < self.q.get());
        self.data[r * self.cols + c] = value;
    }

    pub fn element(&self, r: usize, c: usize) -> FieldElement {
        FieldElement { value: self.get(r, c), modulus: self.q }
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u8> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|&v| v as u32).collect()).collect()
    }

    pub fn to_columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c).into_iter().map(u32::from).collect()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.q, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn same_field(&self, other: &FieldMatrix) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch { left: self.q.get(), right: other.q.get() });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.q;
        let mut out = Self::zeros(q, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = q.add(out.data[idx], q.mul(a, other.data[k * other.cols + j]));
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        Self::hcat_all(self.q, self.rows, &[self, other])
    }

    /// Concatenates `parts` side by side. `rows` fixes the height when `parts` is empty.
    pub fn hcat_all(q: Modulus, rows: usize, parts: &[&FieldMatrix]) -> Result<FieldMatrix> {
        let mut cols = 0;
        for p in parts {
            if p.q != q {
                return Err(Error::ModulusMismatch { left: q.get(), right: p.q.get() });
            }
            if p.rows != rows {
                return Err(Error::Shape(format!("cannot place {} rows beside {rows}", p.rows)));
            }
            cols += p.cols;
        }
        let mut out = Self::zeros(q, rows, cols);
        for r in 0..rows {
            let mut offset = 0;
            for p in parts {
                out.data[r * cols + offset..r * cols + offset + p.cols].copy_from_slice(p.row(r));
                offset += p.cols;
            }
        }
        Ok(out)
    }

    /// Vertical concatenation with `other` below `self`.
    pub fn vcat(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Shape(format!("cannot stack {} columns over {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FieldMatrix { q: self.q, rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn select_columns(&self, columns: &[usize]) -> FieldMatrix {
        let mut out = Self::zeros(self.q, self.rows, columns.len());
        for r in 0..self.rows {
            for (j, &c) in columns.iter().enumerate() {
                out.data[r * columns.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn column_range(&self, range: Range<usize>) -> FieldMatrix {
        let cols: Vec<usize> = range.collect();
        self.select_columns(&cols)
    }

    pub fn row_range(&self, range: Range<usize>) -> FieldMatrix {
        assert!(range.end <= self.rows);
        FieldMatrix {
            q: self.q,
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.same_field(other)?;
        let q = self.q;
        let mut out = Self::zeros(q, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, q.mul(a, other.get(k, l)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row-reduces in place and returns the pivot columns.
    fn reduce_in_place(&mut self) -> Vec<usize> {
        let q = self.q;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..cols {
            if lead == rows {
                break;
            }
            let Some(p) = (lead..rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if p != lead {
                for k in 0..cols {
                    self.data.swap(p * cols + k, lead * cols + k);
                }
            }
            let inv = q.inv(self.data[lead * cols + c]).expect("pivot is nonzero");
            for k in 0..cols {
                self.data[lead * cols + k] = q.mul(self.data[lead * cols + k], inv);
            }
            for r in 0..rows {
                if r == lead {
                    continue;
                }
                let factor = self.data[r * cols + c];
                if factor == 0 {
                    continue;
                }
                for k in 0..cols {
                    let sub = q.mul(factor, self.data[lead * cols + k]);
                    self.data[r * cols + k] = q.sub(self.data[r * cols + k], sub);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Echelon {
        let mut matrix = self.clone();
        let pivots = matrix.reduce_in_place();
        Echelon { matrix, pivots }
    }

    /// Dimension of the column space.
    pub fn rank(&self) -> usize {
        if self.q == Modulus::GF2 && self.cols <= 64 {
            let mut basis = XorBasis::new();
            for r in 0..self.rows {
                let bits = self.row(r).iter().enumerate().fold(0u64, |acc, (c, &v)| acc | ((v as u64) << c));
                basis.insert(bits);
            }
            basis.rank()
        } else {
            self.rank_dense()
        }
    }

    /// Rank by dense elimination, bypassing the packed binary path.
    pub fn rank_dense(&self) -> usize {
        self.rref().pivots.len()
    }

    /// True iff every column of `target` lies in the column span of `self`.
    pub fn in_column_span(&self, target: &FieldMatrix) -> Result<bool> {
        if self.rows != target.rows {
            return Err(Error::Shape(format!("basis has {} rows, target has {}", self.rows, target.rows)));
        }
        let joined = self.hcat(target)?;
        Ok(joined.rank() == self.rank())
    }

    pub fn invert(&self) -> Result<FieldMatrix> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let ech = self.hcat(&Self::identity(self.q, n))?.rref();
        if ech.pivots.iter().take_while(|&&p| p < n).count() < n {
            return Err(Error::Singular);
        }
        Ok(ech.matrix.column_range(n..2 * n))
    }

    /// Returns `X` with `self · X = rhs`. Free variables are set to zero, so the
    /// result is the particular solution supported on the pivot columns of `self`.
    pub fn solve_right(&self, rhs: &FieldMatrix) -> Result<FieldMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::Shape(format!("system has {} rows, right-hand side has {}", self.rows, rhs.rows)));
        }
        let n = self.cols;
        let ech = self.hcat(rhs)?.rref();
        let coefficient_pivots: Vec<usize> = ech.pivots.iter().copied().take_while(|&p| p < n).collect();
        if coefficient_pivots.len() != ech.pivots.len() {
            return Err(Error::NoSolution);
        }
        let mut x = Self::zeros(self.q, n, rhs.cols);
        for (row, &p) in coefficient_pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.data[p * rhs.cols + j] = ech.matrix.get(row, n + j);
            }
        }
        Ok(x)
    }

    /// Canonical basis of the column space: the nonzero rows of the reduced
    /// echelon form of the transpose. Equal keys ⟺ equal column spaces.
    pub fn column_space_key(&self) -> FieldMatrix {
        let ech = self.transpose().rref();
        ech.matrix.row_range(0..ech.pivots.len())
    }

    /// Parses the text form `1 0 1; 0 1 1`.
    pub fn parse_text(q: Modulus, text: &str) -> Result<FieldMatrix> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::zeros(q, 0, 0));
        }
        let rows = text
            .split(';')
            .map(|row| {
                row.split_whitespace()
                    .map(|tok| tok.parse::<u32>().map_err(|e| Error::Parse(format!("bad entry {tok:?}: {e}"))))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(q, &rows)
    }
}

impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for (c, v) in self.row(r).iter().enumerate() {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}x{}]({})", self.q, self.rows, self.cols, self)
    }
}

/// JSON form `{"q":2,"rows":[[1,0,1],[0,1,1]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub q: u32,
    pub rows: Vec<Vec<u32>>,
}

impl From<&FieldMatrix> for MatrixJson {
    fn from(m: &FieldMatrix) -> Self {
        MatrixJson { q: m.q.get() as u32, rows: m.to_rows() }
    }
}

impl TryFrom<&MatrixJson> for FieldMatrix {
    type Error = Error;
    fn try_from(json: &MatrixJson) -> Result<Self> {
        FieldMatrix::from_rows(Modulus::new(json.q)?, &json.rows)
    }
}

/// Span of packed GF(2) vectors, one slot per leading bit.
#[derive(Clone)]
pub struct XorBasis {
    slots: [u64; 64],
    rank: usize,
}

impl Default for XorBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl XorBasis {
    pub fn new() -> Self {
        XorBasis { slots: [0; 64], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Residue of `v` after cancelling every leading bit the basis owns.
    #[inline]
    pub fn reduce(&self, mut v: u64) -> u64 {
        while v != 0 {
            let top = 63 - v.leading_zeros() as usize;
            let slot = self.slots[top];
            if slot == 0 {
                return v;
            }
            v ^= slot;
        }
        0
    }

    /// Adds `v` to the span; returns whether the rank grew.
    #[inline]
    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        self.slots[63 - r.leading_zeros() as usize] = r;
        self.rank += 1;
        true
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }
}
