//! Dense bit-packed matrices over F2.
//!
//! Rows are stored as 64-bit words. All reductions use the deterministic
//! pivot rule (lowest row, then lowest column) so that bases and golden
//! outputs are reproducible.

use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        F2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, entries: &[&[u8]]) -> Self {
        assert_eq!(entries.len(), rows);
        let mut m = F2Matrix::zero(rows, cols);
        for (i, r) in entries.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &v) in r.iter().enumerate() {
                if v % 2 == 1 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.data[r * self.words..(r + 1) * self.words]
            .iter()
            .all(|&w| w == 0)
    }

    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * self.words);
            (
                &lo[src * self.words..(src + 1) * self.words],
                &mut hi[..self.words],
            )
        } else {
            let (lo, hi) = self.data.split_at_mut(src * self.words);
            let dst_slice = &mut lo[dst * self.words..(dst + 1) * self.words];
            (&hi[..self.words] as &[u64], dst_slice)
        };
        for (d, s) in b.iter_mut().zip(a.iter()) {
            *d ^= s;
        }
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for w in 0..self.words {
                let mut word = self.data[r * self.words + w];
                while word != 0 {
                    let b = word.trailing_zeros() as usize;
                    t.set(w * 64 + b, r, true);
                    word &= word - 1;
                }
            }
        }
        t
    }

    /// Matrix product over F2; `self` applied after `rhs` (column-vector convention).
    pub fn mul(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = F2Matrix::zero(self.rows, rhs.cols);
        for r in 0..self.rows {
            for w in 0..self.words {
                let mut word = self.data[r * self.words + w];
                while word != 0 {
                    let k = w * 64 + word.trailing_zeros() as usize;
                    word &= word - 1;
                    let src = &rhs.data[k * rhs.words..(k + 1) * rhs.words];
                    let dst = &mut out.data[r * out.words..(r + 1) * out.words];
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d ^= s;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (d, s) in out.data.iter_mut().zip(rhs.data.iter()) {
            *d ^= s;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Apply to a column vector given as a bit-slice of words.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let out_words = self.rows.div_ceil(64).max(1);
        let mut out = vec![0u64; out_words];
        for r in 0..self.rows {
            let mut acc = 0u64;
            for w in 0..self.words {
                acc ^= self.data[r * self.words + w] & v.get(w).copied().unwrap_or(0);
            }
            if acc.count_ones() % 2 == 1 {
                out[r / 64] ^= 1 << (r % 64);
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        let words = self.rows.div_ceil(64).max(1);
        let mut v = vec![0u64; words];
        for r in 0..self.rows {
            if self.get(r, c) {
                v[r / 64] |= 1 << (r % 64);
            }
        }
        v
    }

    pub fn set_column(&mut self, c: usize, v: &[u64]) {
        for r in 0..self.rows {
            let bit = (v.get(r / 64).copied().unwrap_or(0) >> (r % 64)) & 1 == 1;
            self.set(r, c, bit);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rank_in_place()
    }

    fn rank_in_place(&mut self) -> usize {
        let mut rank = 0;
        for c in 0..self.cols {
            let mut pivot = None;
            for r in rank..self.rows {
                if self.get(r, c) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            self.data.swap_chunks(rank, p, self.words);
            for r in 0..self.rows {
                if r != rank && self.get(r, c) {
                    self.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Basis of the right null space, deterministic order.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        // Reduced row echelon form, tracking pivot columns.
        let mut pivots: Vec<usize> = Vec::new();
        let mut rank = 0;
        for c in 0..m.cols {
            let mut pivot = None;
            for r in rank..m.rows {
                if m.get(r, c) {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            m.data.swap_chunks(rank, p, m.words);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            pivots.push(c);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        let words = m.cols.div_ceil(64).max(1);
        let mut basis = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..m.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; words];
            v[free / 64] |= 1 << (free % 64);
            for (i, &pc) in pivots.iter().enumerate() {
                if m.get(i, free) {
                    v[pc / 64] ^= 1 << (pc % 64);
                }
            }
            basis.push(v);
        }
        basis
    }
}

trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize);
}

impl SwapChunks for Vec<u64> {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        for k in 0..width {
            self.swap(a * width + k, b * width + k);
        }
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(40) {
            for c in 0..self.cols.min(80) {
                write!(f, "{}", if self.get(r, c) { '1' } else { '.' })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Incrementally solvable system: columns are adjoined, each reduced against
/// previous pivots. Used both for rank-extension tests and for expressing
/// cycles in a chosen spanning set.
pub struct Solver {
    dim: usize,
    words: usize,
    /// (pivot row, reduced column, combination of inserted columns)
    pivots: Vec<(usize, Vec<u64>, Vec<u64>)>,
    ncols: usize,
}

impl Solver {
    pub fn new(dim: usize) -> Self {
        Solver {
            dim,
            words: dim.div_ceil(64).max(1),
            pivots: Vec::new(),
            ncols: 0,
        }
    }

    fn reduce(&self, col: &mut [u64], combo: &mut Vec<u64>) {
        for (prow, pcol, pcombo) in &self.pivots {
            if (col[prow / 64] >> (prow % 64)) & 1 == 1 {
                for (d, s) in col.iter_mut().zip(pcol.iter()) {
                    *d ^= s;
                }
                for (i, s) in pcombo.iter().enumerate() {
                    if i < combo.len() {
                        combo[i] ^= s;
                    } else {
                        combo.push(*s);
                    }
                }
            }
        }
    }

    /// Adjoin a column; returns true if it increased the rank.
    pub fn push(&mut self, col: &[u64]) -> bool {
        assert_eq!(col.len(), self.words);
        let mut c = col.to_vec();
        let combo_words = (self.ncols + 1).div_ceil(64);
        let mut combo = vec![0u64; combo_words];
        combo[self.ncols / 64] |= 1 << (self.ncols % 64);
        self.reduce(&mut c, &mut combo);
        self.ncols += 1;
        if let Some(prow) = first_set_bit(&c) {
            debug_assert!(prow < self.dim);
            self.pivots.push((prow, c, combo));
            true
        } else {
            false
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Express `v` as a combination of the adjoined columns.
    /// Returns the combination as a bitmask over column indices, or None if
    /// `v` is outside the span.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let mut c = v.to_vec();
        c.resize(self.words, 0);
        let mut combo = vec![0u64; self.ncols.div_ceil(64).max(1)];
        self.reduce(&mut c, &mut combo);
        if first_set_bit(&c).is_some() {
            None
        } else {
            combo.resize(self.ncols.div_ceil(64).max(1), 0);
            Some(combo)
        }
    }
}

pub fn first_set_bit(v: &[u64]) -> Option<usize> {
    for (w, &word) in v.iter().enumerate() {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(F2Matrix::zero(3, 3).rank(), 0);
        assert_eq!(F2Matrix::identity(4).rank(), 4);
        let m = F2Matrix::from_rows(2, 2, &[&[1, 1], &[1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(F2Matrix::identity(3).kernel_basis().is_empty());
        assert_eq!(F2Matrix::zero(1, 3).kernel_basis().len(), 3);
        let m = F2Matrix::from_rows(1, 2, &[&[1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], 0b11);
    }

    #[test]
    fn mul_and_apply_agree() {
        let a = F2Matrix::from_rows(3, 2, &[&[1, 0], &[1, 1], &[0, 1]]);
        let b = F2Matrix::from_rows(2, 2, &[&[1, 1], &[0, 1]]);
        let ab = a.mul(&b);
        for c in 0..2 {
            assert_eq!(ab.column(c), a.apply(&b.column(c)));
        }
    }

    #[test]
    fn solver_spans() {
        let mut s = Solver::new(3);
        assert!(s.push(&[0b001]));
        assert!(s.push(&[0b011]));
        assert!(!s.push(&[0b010]));
        let combo = s.solve(&[0b010]).unwrap();
        // 0b010 = col0 + col1
        assert_eq!(combo[0] & 0b111, 0b011);
        assert!(s.solve(&[0b100]).is_none());
    }
}
