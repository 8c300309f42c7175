//! Exact linear algebra over GF(2).
//!
//! Rows are packed into `u64` words and eliminated with word-level XOR. The
//! only entry point most callers need is [`rank_kernel_image`], which returns
//! the rank, a kernel basis and a set of independent pivot columns in a
//! canonical (reduced row-echelon, pivot-ascending) order.

use std::fmt;

const WORD: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Build from a slice of integers, reading each entry mod 2.
    pub fn from_ints(entries: &[i64]) -> Self {
        let mut v = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            v.set(i, e.rem_euclid(2) == 1);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_ints(&self) -> Vec<i64> {
        self.iter().map(i64::from).collect()
    }

    fn first_one_from(&self, start: usize) -> Option<usize> {
        (start..self.len).find(|&i| self.get(i))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", u8::from(b))?;
        }
        write!(f, ")")
    }
}

/// Dense matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BitMatrixError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("row {row} has length {len}, expected {expected}")]
    Ragged { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is not 0 or 1")]
    NotBinary { row: usize, col: usize, value: i64 },
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Parse a nested list of 0/1 integers. Every row must have the same
    /// length and both dimensions must be at least one.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, BitMatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(BitMatrixError::Empty {
                rows: rows.len(),
                cols,
            });
        }
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(BitMatrixError::Ragged {
                    row: r,
                    len: row.len(),
                    expected: cols,
                });
            }
            for (c, &value) in row.iter().enumerate() {
                match value {
                    0 => {}
                    1 => m.set(r, c, true),
                    _ => return Err(BitMatrixError::NotBinary { row: r, col: c, value }),
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            v.set(r, self.get(r, c));
        }
        v
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M · v` over GF(2).
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            out.set(r, self.data[r].dot(v));
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.iter().map(BitVec::to_ints).collect()
    }

    /// Reduced row-echelon form together with the ascending pivot columns.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..m.cols {
            if next_row == m.rows {
                break;
            }
            let Some(p) = (next_row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.data.swap(next_row, p);
            let pivot_row = m.data[next_row].clone();
            for r in 0..m.rows {
                if r != next_row && m.get(r, col) {
                    m.data[r].xor_assign(&pivot_row);
                }
            }
            pivots.push(col);
            next_row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

/// Rank, kernel and image data of a GF(2) matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankKernelImage {
    pub rank: usize,
    /// One vector per free column of the RREF, in ascending free-column order.
    pub kernel_basis: Vec<BitVec>,
    /// Pivot columns of the RREF: a maximal independent set of columns of the
    /// original matrix, ascending.
    pub image_basis_columns: Vec<usize>,
}

pub fn rank_kernel_image(m: &BitMatrix) -> RankKernelImage {
    let (r, pivots) = m.rref();
    let mut kernel_basis = Vec::with_capacity(m.cols - pivots.len());
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(m.cols);
        v.set(free, true);
        for (row, &p) in pivots.iter().enumerate() {
            if r.get(row, free) {
                v.set(p, true);
            }
        }
        kernel_basis.push(v);
    }
    RankKernelImage {
        rank: pivots.len(),
        kernel_basis,
        image_basis_columns: pivots,
    }
}

/// Express `target` in the span of `basis` (all vectors the same length).
/// Returns the coefficient vector, or `None` when `target` is outside the span.
pub fn solve_in_span(basis: &[BitVec], target: &BitVec) -> Option<BitVec> {
    let n = target.len();
    let k = basis.len();
    // Columns of the augmented system are the basis vectors; rows are
    // coordinates. Row r carries [basis_0[r] .. basis_{k-1}[r] | target[r]].
    let mut aug = BitMatrix::zeros(n, k + 1);
    for (j, b) in basis.iter().enumerate() {
        assert_eq!(b.len(), n);
        for r in b.ones() {
            aug.set(r, j, true);
        }
    }
    for r in target.ones() {
        aug.set(r, k, true);
    }
    let (red, pivots) = aug.rref();
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut coeffs = BitVec::zeros(k);
    for (row, &p) in pivots.iter().enumerate() {
        if red.get(row, k) {
            coeffs.set(p, true);
        }
    }
    Some(coeffs)
}

/// Whether the given vectors are linearly independent.
pub fn independent(vectors: &[BitVec]) -> bool {
    let Some(first) = vectors.first() else {
        return true;
    };
    let mut m = BitMatrix::zeros(vectors.len(), first.len());
    for (i, v) in vectors.iter().enumerate() {
        m.data[i] = v.clone();
    }
    m.rank() == vectors.len()
}

impl BitVec {
    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }
}
