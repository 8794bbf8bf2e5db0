//! Exact linear algebra over GF(2) on bit-packed vectors.
//!
//! Rows are stored as `u64` words and elimination is done by whole-word XOR.
//! Every routine here is a pure function of its inputs.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// A vector over GF(2) of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn unit(len: usize, bit: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(bit, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from 0/1 entries; any nonzero entry counts as 1.
    pub fn from_u8s(bits: &[u8]) -> Self {
        let bools: Vec<bool> = bits.iter().map(|&b| b & 1 == 1).collect();
        Self::from_bits(&bools)
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// `self += other` over GF(2).
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        write!(f, "]")
    }
}

/// A dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// An empty matrix (no rows) whose rows would have `cols` entries.
    pub fn empty(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, F2Error> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(F2Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Convenience constructor from nested 0/1 literals. Panics on ragged input.
    pub fn from_u8_rows(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| BitVec::from_u8s(r)).collect();
        Self::from_rows(cols, rows).expect("ragged literal matrix")
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<(), F2Error> {
        if row.len() != self.cols {
            return Err(F2Error::LengthMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    /// Row `dst` += row `src`.
    pub fn add_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.rows[dst] = BitVec::zeros(self.cols);
            return;
        }
        let src_row = self.rows[src].clone();
        self.rows[dst].xor_assign(&src_row);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix, F2Error> {
        if self.cols != rhs.rows.len() {
            return Err(F2Error::LengthMismatch {
                expected: self.cols,
                found: rhs.rows.len(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(rhs.cols);
                for k in row.ones() {
                    acc.xor_assign(&rhs.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix { cols: rhs.cols, rows })
    }

    /// Image of a column vector: `self * v`.
    pub fn apply(&self, v: &BitVec) -> Result<BitVec, F2Error> {
        if v.len() != self.cols {
            return Err(F2Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = BitVec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Incrementally maintained echelon basis of a subspace of GF(2)^n.
///
/// Every stored row has a distinct pivot (its lowest set bit) and no other
/// stored row has that pivot set, so reduction is a single pass.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    len: usize,
    rows: Vec<BitVec>,
    pivots: Vec<usize>,
    // pivot column -> index into rows
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_row: vec![None; len],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    // XOR by a stored row never sets another pivot, so only the pivots
    // present in the input need visiting.
    fn reduce_in_place(&self, v: &mut BitVec) {
        let hits: Vec<usize> = v.ones().filter_map(|c| self.pivot_row[c]).collect();
        for r in hits {
            v.xor_assign(&self.rows[r]);
        }
    }

    /// Remainder of `v` after elimination against the basis.
    pub fn reduce(&self, v: &BitVec) -> Result<BitVec, F2Error> {
        self.check_len(v)?;
        let mut v = v.clone();
        self.reduce_in_place(&mut v);
        Ok(v)
    }

    pub fn contains(&self, v: &BitVec) -> Result<bool, F2Error> {
        Ok(self.reduce(v)?.is_zero())
    }

    /// Adds `v` to the span. Returns `true` when the dimension grew.
    pub fn insert(&mut self, v: BitVec) -> Result<bool, F2Error> {
        self.check_len(&v)?;
        let mut v = v;
        self.reduce_in_place(&mut v);
        let Some(p) = v.first_one() else {
            return Ok(false);
        };
        // keep the basis fully reduced on the new pivot
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        self.pivot_row[p] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(p);
        Ok(true)
    }

    fn check_len(&self, v: &BitVec) -> Result<(), F2Error> {
        if v.len() == self.len {
            Ok(())
        } else {
            Err(F2Error::LengthMismatch {
                expected: self.len,
                found: v.len(),
            })
        }
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    let mut basis = EchelonBasis::new(m.num_cols());
    for row in m.rows() {
        basis.insert(row.clone()).expect("matrix rows share the column count");
    }
    basis.dim()
}

/// Whether `v` is a GF(2) combination of the rows of `basis`.
pub fn in_span(v: &BitVec, basis: &BitMatrix) -> Result<bool, F2Error> {
    if v.len() != basis.num_cols() {
        return Err(F2Error::LengthMismatch {
            expected: basis.num_cols(),
            found: v.len(),
        });
    }
    let mut echelon = EchelonBasis::new(basis.num_cols());
    for row in basis.rows() {
        echelon.insert(row.clone())?;
    }
    echelon.contains(v)
}

/// Injectivity of the linear map with matrix `m` acting on column vectors
/// (source dimension = number of columns).
pub fn is_injective(m: &BitMatrix) -> bool {
    rank(m) == m.num_cols()
}
