//! Dense GF(2) vectors and matrices with deterministic elimination.
//!
//! Sizes here are tiny (tens of generators), so everything is a dense
//! bit-packed matrix. Pivot choices always scan rows from index 0 and
//! columns left to right, which makes reduced forms and homology
//! representatives reproducible.

/// A GF(2) column vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vec2 {
    pub len: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for Vec2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

impl Vec2 {
    pub fn zero(len: usize) -> Self {
        Vec2 { len, bits: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.set(i, true);
        v
    }

    pub fn get(&self, i: usize) -> bool {
        (self.bits[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        if b {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Vec2) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Lowest set index, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.bits.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn dot(&self, other: &Vec2) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.bits.iter().zip(&other.bits) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

/// A GF(2) matrix acting on column vectors: `rows x cols`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    /// Column-major storage: each column is a `Vec2` of length `rows`.
    columns: Vec<Vec2>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, columns: vec![Vec2::zero(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.columns[c].get(r)
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.columns[c].set(r, b);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.columns[c].flip(r);
    }

    pub fn column(&self, c: usize) -> &Vec2 {
        &self.columns[c]
    }

    pub fn set_column(&mut self, c: usize, v: Vec2) {
        debug_assert_eq!(v.len, self.rows);
        self.columns[c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        debug_assert_eq!(v.len, self.cols);
        let mut out = Vec2::zero(self.rows);
        for c in 0..self.cols {
            if v.get(c) {
                out.xor_assign(&self.columns[c]);
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for c in 0..other.cols {
            out.set_column(c, self.apply(other.column(c)));
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for c in 0..self.cols {
            out.columns[c].xor_assign(other.column(c));
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for c in 0..self.cols {
            for r in self.columns[c].ones() {
                out.set(c, r, true);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        echelon(self.columns.clone()).len()
    }

    /// Basis of the column space, in reduced echelon form with pivots at the
    /// lowest possible row indices, ordered by pivot row.
    pub fn column_space_basis(&self) -> Vec<Vec2> {
        echelon(self.columns.clone())
    }

    /// Basis of `{x : Mx = 0}`, deterministic.
    pub fn kernel_basis(&self) -> Vec<Vec2> {
        // Column-reduce M while tracking the operations in an identity.
        let mut work: Vec<Vec2> = self.columns.clone();
        let mut track: Vec<Vec2> = (0..self.cols).map(|c| Vec2::unit(self.cols, c)).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col index in work)
        for c in 0..work.len() {
            loop {
                let Some(r) = work[c].first_one() else { break };
                if let Some(&(_, pc)) = pivots.iter().find(|&&(pr, _)| pr == r) {
                    let src = work[pc].clone();
                    work[c].xor_assign(&src);
                    let t = track[pc].clone();
                    track[c].xor_assign(&t);
                } else {
                    pivots.push((r, c));
                    break;
                }
            }
        }
        (0..work.len()).filter(|&c| work[c].is_zero()).map(|c| track[c].clone()).collect()
    }

    /// Solves `Mx = b`; returns any solution, deterministic.
    pub fn solve(&self, b: &Vec2) -> Option<Vec2> {
        let mut work: Vec<Vec2> = self.columns.clone();
        let mut track: Vec<Vec2> = (0..self.cols).map(|c| Vec2::unit(self.cols, c)).collect();
        let mut rhs = b.clone();
        let mut sol = Vec2::zero(self.cols);
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for c in 0..work.len() {
            loop {
                let Some(r) = work[c].first_one() else { break };
                if let Some(&(_, pc)) = pivots.iter().find(|&&(pr, _)| pr == r) {
                    let src = work[pc].clone();
                    work[c].xor_assign(&src);
                    let t = track[pc].clone();
                    track[c].xor_assign(&t);
                } else {
                    pivots.push((r, c));
                    break;
                }
            }
        }
        // Back-substitute: eliminate rhs with pivot columns.
        loop {
            let Some(r) = rhs.first_one() else { break };
            let Some(&(_, pc)) = pivots.iter().find(|&&(pr, _)| pr == r) else {
                return None;
            };
            rhs.xor_assign(&work[pc]);
            sol.xor_assign(&track[pc]);
        }
        Some(sol)
    }
}

/// Reduced column echelon form of a set of vectors: basis with distinct
/// pivot rows (lowest-index pivots), each pivot row cleared from all other
/// basis vectors; sorted by pivot row.
pub fn echelon(vectors: Vec<Vec2>) -> Vec<Vec2> {
    let mut basis: Vec<(usize, Vec2)> = Vec::new(); // (pivot row, vector)
    for mut v in vectors {
        loop {
            let Some(r) = v.first_one() else { break };
            if let Some((_, b)) = basis.iter().find(|(pr, _)| *pr == r) {
                let b = b.clone();
                v.xor_assign(&b);
            } else {
                // clear this pivot from existing basis vectors
                for (_, b) in basis.iter_mut() {
                    if b.get(r) {
                        b.xor_assign(&v);
                    }
                }
                basis.push((r, v));
                break;
            }
        }
    }
    basis.sort_by_key(|(r, _)| *r);
    basis.into_iter().map(|(_, v)| v).collect()
}

/// Reduces `v` modulo the span of `basis` (basis must be in echelon form).
pub fn reduce_mod(v: &Vec2, basis: &[Vec2]) -> Vec2 {
    let mut out = v.clone();
    for b in basis {
        if let Some(r) = b.first_one() {
            if out.get(r) {
                out.xor_assign(b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, entries: &[(usize, usize)]) -> Mat {
        let mut m = Mat::zero(rows, cols);
        for &(r, c) in entries {
            m.set(r, c, true);
        }
        m
    }

    #[test]
    fn rank_and_kernel() {
        // columns: c0 = e0+e1, c1 = e0+e1, c2 = e2
        let m = mat(3, 3, &[(0, 0), (1, 0), (0, 1), (1, 1), (2, 2)]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].ones(), vec![0, 1]);
    }

    #[test]
    fn solve_basic() {
        let m = mat(3, 2, &[(0, 0), (1, 0), (1, 1)]);
        let b = Vec2::unit(3, 0);
        // x = c0 + c1 gives e0+e1 + e1 = e0
        let x = m.solve(&b).unwrap();
        assert_eq!(m.apply(&x), b);
        assert!(m.solve(&Vec2::unit(3, 2)).is_none());
    }

    #[test]
    fn echelon_reduces() {
        let v1 = {
            let mut v = Vec2::zero(4);
            v.set(0, true);
            v.set(1, true);
            v
        };
        let v2 = {
            let mut v = Vec2::zero(4);
            v.set(1, true);
            v.set(2, true);
            v
        };
        let b = echelon(vec![v1.clone(), v2.clone(), v1.clone()]);
        assert_eq!(b.len(), 2);
        let r = reduce_mod(&v1, &b);
        assert!(r.is_zero());
    }

    #[test]
    fn kernel_quality() {
        let m = mat(2, 4, &[(0, 0), (0, 1), (1, 2), (1, 3)]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).is_zero());
        }
    }
}
