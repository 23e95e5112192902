//! Dense bit-packed linear algebra over GF(2).
//!
//! Matrices store each row as contiguous 64-bit words, so the row
//! additions that dominate every routine here are word-parallel XORs.
//! Everything downstream (symplectic tableaux, factorization, synthesis)
//! is built on this module.

use alloc::string::String;
use alloc::{vec, vec::Vec};
use core::fmt;

use rand::Rng;

/// Error returned when an operation requires an invertible matrix but the
/// input is singular over GF(2). Recoverable by construction: callers that
/// probe candidate matrices treat it as "try another candidate".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularMatrix;

impl fmt::Display for SingularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix is singular over GF(2)")
    }
}

impl core::error::Error for SingularMatrix {}

/// Error from parsing the matrix text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixTextError {
    /// 1-based line number of the offending line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for MatrixTextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix text, line {}: {}", self.line, self.message)
    }
}

impl core::error::Error for MatrixTextError {}

const fn word_count(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// Mask selecting the valid low bits of the last word of a row of `bits`
/// columns (all ones when the row ends on a word boundary).
const fn tail_mask(bits: usize) -> u64 {
    if bits.is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << (bits % 64)) - 1
    }
}

/// A bit vector over GF(2), packed into 64-bit words.
///
/// Bits beyond `len` in the last word are kept zero, so `PartialEq` on the
/// packed words is exact equality of the vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Vector {
    len: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zero(len: usize) -> Self {
        F2Vector {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// Builds a vector from a string of `0`/`1` characters.
    pub fn from_str01(s: &str) -> Result<Self, String> {
        let mut v = F2Vector::zero(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(alloc::format!("invalid bit character {c:?}")),
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, rhs: &F2Vector) {
        assert_eq!(self.len, rhs.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(rhs.words.iter()) {
            *a ^= *b;
        }
    }

    /// GF(2) inner product (parity of the AND of the two vectors).
    pub fn dot(&self, rhs: &F2Vector) -> bool {
        assert_eq!(self.len, rhs.len, "length mismatch");
        let mut parity = 0u32;
        for (a, b) in self.words.iter().zip(rhs.words.iter()) {
            parity ^= (a & b).count_ones();
        }
        parity & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Concatenation `(self | rhs)`, used for symplectic (x|z) vectors.
    pub fn concat(&self, rhs: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zero(self.len + rhs.len);
        for i in 0..self.len {
            out.set(i, self.get(i));
        }
        for i in 0..rhs.len {
            out.set(self.len + i, rhs.get(i));
        }
        out
    }

    /// Splits an even-length vector into its two halves.
    pub fn halves(&self) -> (F2Vector, F2Vector) {
        assert_eq!(self.len % 2, 0, "vector length must be even");
        let h = self.len / 2;
        let mut a = F2Vector::zero(h);
        let mut b = F2Vector::zero(h);
        for i in 0..h {
            a.set(i, self.get(i));
            b.set(i, self.get(h + i));
        }
        (a, b)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_string01(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string01())
    }
}

/// A dense matrix over GF(2) with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    /// Words per row.
    wpr: usize,
    words: Vec<u64>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let wpr = word_count(cols);
        F2Matrix {
            rows,
            cols,
            wpr,
            words: vec![0; rows * wpr],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// The elementary matrix `E_{i,j}` with a single off-diagonal 1 at
    /// `(i, j)`. Panics if `i == j` or either index is out of range.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "elementary index out of range");
        assert_ne!(i, j, "elementary requires an off-diagonal position");
        let mut m = F2Matrix::zero(n, n);
        m.set(i, j, true);
        m
    }

    /// Builds a matrix from rows written as `0`/`1` strings, e.g.
    /// `from_rows_str("01;10")`.
    pub fn from_rows_str(s: &str) -> Result<Self, String> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.is_empty() {
            return Err(String::from("no rows"));
        }
        let cols = rows[0].len();
        let mut m = F2Matrix::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(alloc::format!("row {i} has length {}, expected {cols}", r.len()));
            }
            for (j, c) in r.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => return Err(alloc::format!("invalid bit character {c:?}")),
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
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.words[i * self.wpr + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let mask = 1u64 << (j % 64);
        let w = &mut self.words[i * self.wpr + j / 64];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.words[i * self.wpr..(i + 1) * self.wpr]
    }

    /// XORs row `src` into row `dst` (word-parallel).
    pub(crate) fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let (s, d) = (src * self.wpr, dst * self.wpr);
        for k in 0..self.wpr {
            let v = self.words[s + k];
            self.words[d + k] ^= v;
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.words.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    pub fn row(&self, i: usize) -> F2Vector {
        F2Vector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn set_row(&mut self, i: usize, v: &F2Vector) {
        assert_eq!(v.len, self.cols, "row length mismatch");
        let base = i * self.wpr;
        self.words[base..base + self.wpr].copy_from_slice(&v.words);
    }

    pub fn column(&self, j: usize) -> F2Vector {
        let mut v = F2Vector::zero(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn set_column(&mut self, j: usize, v: &F2Vector) {
        assert_eq!(v.len, self.rows, "column length mismatch");
        for i in 0..self.rows {
            self.set(i, j, v.get(i));
        }
    }

    /// GF(2) sum (entrywise XOR).
    pub fn add(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(rhs.words.iter()) {
            *a ^= *b;
        }
        out
    }

    /// Matrix product over GF(2). Each set bit of a left row selects a row
    /// of `rhs` to XOR into the output row.
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = F2Matrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            let dst = i * out.wpr;
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let k = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let src = k * rhs.wpr;
                    for t in 0..rhs.wpr {
                        out.words[dst + t] ^= rhs.words[src + t];
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &F2Vector) -> F2Vector {
        assert_eq!(self.cols, v.len, "dimension mismatch");
        let mut out = F2Vector::zero(self.rows);
        for i in 0..self.rows {
            let mut parity = 0u32;
            for (a, b) in self.row_words(i).iter().zip(v.words.iter()) {
                parity ^= (a & b).count_ones();
            }
            if parity & 1 == 1 {
                out.set(i, true);
            }
        }
        out
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut out = F2Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let j = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    out.set(j, i, true);
                }
            }
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        assert!(self.is_square(), "is_symmetric requires a square matrix");
        for i in 0..self.rows {
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == F2Matrix::identity(self.rows)
    }

    /// True when every set entry lies on the main diagonal.
    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut bits = w;
                while bits != 0 {
                    let j = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if j != i {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn diagonal(&self) -> F2Vector {
        assert!(self.is_square(), "diagonal requires a square matrix");
        let mut v = F2Vector::zero(self.rows);
        for i in 0..self.rows {
            if self.get(i, i) {
                v.set(i, true);
            }
        }
        v
    }

    /// Copy with the main diagonal zeroed.
    pub fn with_zero_diagonal(&self) -> F2Matrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.set(i, i, false);
        }
        out
    }

    /// Extracts the `nr x nc` block whose top-left corner is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> F2Matrix {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block out of range");
        let mut out = F2Matrix::zero(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                if self.get(r0 + i, c0 + j) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    /// Assembles `[[a, b], [c, d]]` from four equally-sized square blocks.
    pub fn from_quad(a: &F2Matrix, b: &F2Matrix, c: &F2Matrix, d: &F2Matrix) -> F2Matrix {
        let n = a.rows;
        for m in [a, b, c, d] {
            assert!(m.rows == n && m.cols == n, "blocks must be equal square matrices");
        }
        let mut out = F2Matrix::zero(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                if a.get(i, j) {
                    out.set(i, j, true);
                }
                if b.get(i, j) {
                    out.set(i, n + j, true);
                }
                if c.get(i, j) {
                    out.set(n + i, j, true);
                }
                if d.get(i, j) {
                    out.set(n + i, n + j, true);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            let pivot = (rank..work.rows).find(|&r| work.get(r, col));
            if let Some(p) = pivot {
                work.swap_rows(rank, p);
                for r in 0..work.rows {
                    if r != rank && work.get(r, col) {
                        work.xor_row_into(rank, r);
                    }
                }
                rank += 1;
                if rank == work.rows {
                    break;
                }
            }
        }
        rank
    }

    /// Inverse over GF(2) by Gauss-Jordan elimination on `[self | I]`.
    pub fn invert(&self) -> Result<F2Matrix, SingularMatrix> {
        assert!(self.is_square(), "invert requires a square matrix");
        let n = self.rows;
        let mut work = F2Matrix::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j) {
                    work.set(i, j, true);
                }
            }
            work.set(i, n + i, true);
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| work.get(r, col)).ok_or(SingularMatrix)?;
            work.swap_rows(col, pivot);
            for r in 0..n {
                if r != col && work.get(r, col) {
                    work.xor_row_into(col, r);
                }
            }
        }
        Ok(work.block(0, n, n, n))
    }

    /// Indices of a lexicographically-first maximal independent set of rows
    /// (the row rank profile).
    pub fn row_rank_profile(&self) -> Vec<usize> {
        let mut profile = Vec::new();
        let mut basis: Vec<F2Vector> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for i in 0..self.rows {
            let mut v = self.row(i);
            for (b, &p) in basis.iter().zip(pivots.iter()) {
                if v.get(p) {
                    v.xor_assign(b);
                }
            }
            let lead = v.iter_ones().next();
            if let Some(p) = lead {
                basis.push(v);
                pivots.push(p);
                profile.push(i);
            }
        }
        profile
    }

    /// Basis of the right null space: all `v` with `self * v = 0`.
    pub fn kernel_basis(&self) -> Vec<F2Vector> {
        let mut work = self.clone();
        // Reduced row echelon form, tracking the pivot column of each row.
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; work.cols];
        let mut rank = 0;
        for (col, pivot) in pivot_of_col.iter_mut().enumerate() {
            if let Some(p) = (rank..work.rows).find(|&r| work.get(r, col)) {
                work.swap_rows(rank, p);
                for r in 0..work.rows {
                    if r != rank && work.get(r, col) {
                        work.xor_row_into(rank, r);
                    }
                }
                *pivot = Some(rank);
                rank += 1;
            }
        }
        let mut basis = Vec::new();
        for free in 0..work.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = F2Vector::zero(work.cols);
            v.set(free, true);
            for (col, pivot) in pivot_of_col.iter().enumerate() {
                if let Some(r) = *pivot {
                    if work.get(r, free) {
                        v.set(col, true);
                    }
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Matrix text format: first line `rows cols`, then one `0`/`1` string
    /// per row.
    pub fn to_text(&self) -> String {
        let mut s = alloc::format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            s.push_str(&self.row(i).to_string01());
            s.push('\n');
        }
        s
    }

    /// Parses the matrix text format produced by [`F2Matrix::to_text`].
    pub fn from_text(text: &str) -> Result<F2Matrix, MatrixTextError> {
        let mut lines = text.lines().enumerate();
        let (ln, header) = lines
            .next()
            .ok_or(MatrixTextError { line: 1, message: String::from("empty input") })?;
        let mut parts = header.split_whitespace();
        let parse_dim = |tok: Option<&str>, ln: usize| -> Result<usize, MatrixTextError> {
            tok.and_then(|t| t.parse().ok()).ok_or(MatrixTextError {
                line: ln + 1,
                message: String::from("header must be `rows cols`"),
            })
        };
        let rows = parse_dim(parts.next(), ln)?;
        let cols = parse_dim(parts.next(), ln)?;
        let mut m = F2Matrix::zero(rows, cols);
        for i in 0..rows {
            let (ln, line) = lines.next().ok_or(MatrixTextError {
                line: i + 2,
                message: String::from("missing row"),
            })?;
            let line = line.trim();
            if line.len() != cols {
                return Err(MatrixTextError {
                    line: ln + 1,
                    message: alloc::format!("row has {} bits, expected {cols}", line.len()),
                });
            }
            for (j, c) in line.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => {
                        return Err(MatrixTextError {
                            line: ln + 1,
                            message: alloc::format!("invalid bit character {c:?}"),
                        })
                    }
                }
            }
        }
        Ok(m)
    }

    /// If this is a permutation matrix, returns `sigma` with
    /// `self[sigma[j]][j] = 1` (the row index of each column's single 1).
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut sigma = vec![0usize; n];
        let mut seen = vec![false; n];
        for (j, image) in sigma.iter_mut().enumerate() {
            let col = self.column(j);
            if col.weight() != 1 {
                return None;
            }
            let i = col.iter_ones().next().unwrap();
            if seen[i] {
                return None;
            }
            seen[i] = true;
            *image = i;
        }
        Some(sigma)
    }

    /// Stable content hash (FNV-1a over dimensions and packed words); used
    /// to seed deterministic randomized searches from matrix content.
    pub fn content_hash(&self) -> u64 {
        let mut h = 0xcbf29ce484222325u64;
        let mut eat = |v: u64| {
            h ^= v;
            h = h.wrapping_mul(0x100000001b3);
        };
        eat(self.rows as u64);
        eat(self.cols as u64);
        for &w in &self.words {
            eat(w);
        }
        h
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// One CNOT row operation produced by [`gauss_cnot_synthesis`]: the state
/// map adds the control's bit into the target's bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnotStep {
    pub control: usize,
    pub target: usize,
}

/// Synthesizes an invertible `M` as a CNOT sequence by Gauss-Jordan
/// elimination, choosing the lowest-index available row with a 1 in each
/// pivot column and recording every row addition as a CNOT step.
///
/// The returned list is in temporal order: folding the steps' state maps
/// `v -> v + v_control * e_target` starting from the identity reproduces
/// `M` exactly. At most `n^2` steps are produced.
pub fn gauss_cnot_synthesis(m: &F2Matrix) -> Result<Vec<CnotStep>, SingularMatrix> {
    assert!(m.is_square(), "gauss_cnot_synthesis requires a square matrix");
    let n = m.rows;
    let mut work = m.clone();
    let mut ops: Vec<CnotStep> = Vec::new();
    for col in 0..n {
        if !work.get(col, col) {
            let donor = (col + 1..n).find(|&r| work.get(r, col)).ok_or(SingularMatrix)?;
            work.xor_row_into(donor, col);
            ops.push(CnotStep { control: donor, target: col });
        }
        for r in 0..n {
            if r != col && work.get(r, col) {
                work.xor_row_into(col, r);
                ops.push(CnotStep { control: col, target: r });
            }
        }
    }
    // The recorded left-multiplications reduce M to I, so M equals their
    // product in discovery order; as a temporal gate list (first gate acts
    // first on states) that product reads in reverse.
    ops.reverse();
    Ok(ops)
}

/// State matrix `I + E_{target,control}` of a single CNOT step.
pub fn cnot_step_matrix(n: usize, step: CnotStep) -> F2Matrix {
    let mut m = F2Matrix::identity(n);
    m.set(step.target, step.control, true);
    m
}

/// Samples a uniformly random invertible matrix in `GL(n, F_2)` by
/// rejection (acceptance probability exceeds 0.288 for every `n`).
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> F2Matrix {
    assert!(n >= 1, "random_invertible requires n >= 1");
    loop {
        let mut m = F2Matrix::zero(n, n);
        let mask = tail_mask(n);
        for i in 0..n {
            for w in 0..m.wpr {
                let mut word = rng.next_u64();
                if w == m.wpr - 1 {
                    word &= mask;
                }
                m.words[i * m.wpr + w] = word;
            }
        }
        if m.rank() == n {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(s: &str) -> F2Matrix {
        F2Matrix::from_rows_str(s).unwrap()
    }

    #[test]
    fn elementary_places_single_entry() {
        assert_eq!(F2Matrix::elementary(2, 0, 1), m("01;00"));
        assert_eq!(F2Matrix::elementary(3, 2, 0), m("000;000;100"));
    }

    #[test]
    #[should_panic(expected = "off-diagonal")]
    fn elementary_rejects_diagonal() {
        let _ = F2Matrix::elementary(2, 0, 0);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn elementary_rejects_out_of_range() {
        let _ = F2Matrix::elementary(2, 0, 2);
    }

    #[test]
    fn mul_matches_hand_example() {
        // [[0,1],[1,0]] * [[0,1],[1,1]] = [[1,1],[0,1]], worked by hand.
        assert_eq!(m("01;10").mul(&m("01;11")), m("11;01"));
    }

    #[test]
    fn add_is_self_inverse() {
        let a = m("1101;0110;1010;0011");
        assert!(a.add(&a).is_zero());
    }

    #[test]
    fn invert_upper_triangular_is_involutive() {
        // [[1,1],[0,1]] squares to the identity over GF(2).
        let a = m("11;01");
        assert_eq!(a.invert().unwrap(), a);
    }

    #[test]
    fn invert_rejects_singular() {
        assert_eq!(m("11;11").invert(), Err(SingularMatrix));
    }

    #[test]
    fn invert_round_trips_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=20 {
            for _ in 0..10 {
                let a = random_invertible(n, &mut rng);
                let inv = a.invert().unwrap();
                assert!(a.mul(&inv).is_identity());
                assert!(inv.mul(&a).is_identity());
            }
        }
    }

    #[test]
    fn mul_is_associative_and_respects_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let a = random_invertible(7, &mut rng);
            let b = random_invertible(7, &mut rng);
            let c = random_invertible(7, &mut rng);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
            assert_eq!(a.transpose().transpose(), a);
        }
    }

    #[test]
    fn mul_vec_agrees_with_matrix_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let a = random_invertible(9, &mut rng);
        let b = random_invertible(9, &mut rng);
        for j in 0..9 {
            assert_eq!(a.mul_vec(&b.column(j)), a.mul(&b).column(j));
        }
    }

    #[test]
    fn block_quad_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let s = random_invertible(10, &mut rng);
        let a = s.block(0, 0, 5, 5);
        let b = s.block(0, 5, 5, 5);
        let c = s.block(5, 0, 5, 5);
        let d = s.block(5, 5, 5, 5);
        assert_eq!(F2Matrix::from_quad(&a, &b, &c, &d), s);
    }

    #[test]
    fn gauss_synthesis_of_identity_is_empty() {
        assert!(gauss_cnot_synthesis(&F2Matrix::identity(4)).unwrap().is_empty());
    }

    #[test]
    fn gauss_synthesis_of_single_cnot_matrix() {
        // M = I + E_{1,0} is the state matrix of CNOT with control 0,
        // target 1; elimination finds exactly that step.
        let m_cnot = m("10;11");
        let steps = gauss_cnot_synthesis(&m_cnot).unwrap();
        assert_eq!(steps, vec![CnotStep { control: 0, target: 1 }]);
    }

    #[test]
    fn gauss_synthesis_rejects_singular() {
        assert_eq!(gauss_cnot_synthesis(&m("11;11")), Err(SingularMatrix));
    }

    #[test]
    fn gauss_synthesis_recomposes_and_respects_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in 2..=16 {
            for _ in 0..10 {
                let target = random_invertible(n, &mut rng);
                let steps = gauss_cnot_synthesis(&target).unwrap();
                assert!(steps.len() <= n * n, "step count {} exceeds n^2", steps.len());
                let mut acc = F2Matrix::identity(n);
                for &s in &steps {
                    acc = cnot_step_matrix(n, s).mul(&acc);
                }
                assert_eq!(acc, target);
            }
        }
    }

    #[test]
    fn random_invertible_n1_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        assert_eq!(random_invertible(1, &mut rng), m("1"));
    }

    #[test]
    fn random_invertible_covers_gl2_uniformly() {
        // GL(2, F_2) has exactly 6 elements; with 6000 draws each count
        // should sit within 5 sigma of 1000 (sigma ~ 28.9).
        let gl2: Vec<F2Matrix> = ["10;01", "01;10", "11;01", "10;11", "01;11", "11;10"]
            .iter()
            .map(|s| m(s))
            .collect();
        let mut counts = [0usize; 6];
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..6000 {
            let a = random_invertible(2, &mut rng);
            let idx = gl2.iter().position(|g| *g == a).expect("sample must lie in GL(2)");
            counts[idx] += 1;
        }
        for &c in &counts {
            assert!((c as f64 - 1000.0).abs() < 145.0, "count {c} outside 5 sigma");
        }
    }

    #[test]
    fn rank_and_kernel_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for _ in 0..30 {
            let a = random_invertible(8, &mut rng);
            // Zero out two rows to force rank deficiency.
            let mut b = a.clone();
            let z = F2Vector::zero(8);
            b.set_row(3, &z);
            b.set_row(6, &z);
            let kernel = b.kernel_basis();
            assert_eq!(b.rank() + kernel.len(), 8);
            for k in &kernel {
                assert!(b.mul_vec(k).is_zero());
            }
        }
    }

    #[test]
    fn kernel_of_repeated_row_matrix() {
        let kernel = m("11;00").kernel_basis();
        assert_eq!(kernel.len(), 1);
        assert_eq!(kernel[0].to_string01(), "11");
    }

    #[test]
    fn row_rank_profile_skips_dependent_rows() {
        let a = m("00;10;10;01");
        assert_eq!(a.row_rank_profile(), vec![1, 3]);
    }

    #[test]
    fn text_format_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for n in 1..=9 {
            let a = random_invertible(n, &mut rng);
            assert_eq!(F2Matrix::from_text(&a.to_text()).unwrap(), a);
        }
        let a = m("01;10");
        assert_eq!(a.to_text(), "2 2\n01\n10\n");
    }

    #[test]
    fn vector_helpers_behave() {
        let v = F2Vector::from_str01("1010").unwrap();
        let w = F2Vector::from_str01("0110").unwrap();
        assert_eq!(v.weight(), 2);
        assert!(v.dot(&w)); // overlap only at index 2, so the parity is odd
        let both = v.concat(&w);
        assert_eq!(both.to_string01(), "10100110");
        let (a, b) = both.halves();
        assert_eq!(a, v);
        assert_eq!(b, w);
    }
}
