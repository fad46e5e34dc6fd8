//! Bit-packed linear algebra over GF(2): rank, nullity, row reduction.
//!
//! Matrices here are small (at most ~32 columns in every hot path), so each
//! row fits a single `u64` word and elimination is a plain pivot scan.

/// A rectangular 0/1 matrix with one `u64` word per row.
///
/// Bit `j` of `data[i]` is the entry at row `i`, column `j`. Bits at or
/// beyond column `cols` are always zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    /// All-zero matrix of the given shape. `cols` must be at most 64.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols <= 64, "Gf2Matrix supports at most 64 columns");
        Gf2Matrix { rows, cols, data: vec![0; rows] }
    }

    /// Build a matrix from bit-packed rows. Bits beyond `cols` are masked off.
    pub fn from_rows(rows: Vec<u64>, cols: usize) -> Self {
        assert!(cols <= 64, "Gf2Matrix supports at most 64 columns");
        let mask = if cols == 64 { !0 } else { (1u64 << cols) - 1 };
        let n = rows.len();
        let data = rows.into_iter().map(|r| r & mask).collect();
        Gf2Matrix { rows: n, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| 1u64 << i).collect();
        Gf2Matrix::from_rows(rows, n)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.data[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        if value {
            self.data[i] |= 1 << j;
        } else {
            self.data[i] &= !(1 << j);
        }
    }

    pub fn row(&self, i: usize) -> u64 {
        self.data[i]
    }

    pub fn transpose(&self) -> Gf2Matrix {
        assert!(self.rows <= 64, "transpose needs at most 64 rows");
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            let mut r = self.data[i];
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                t.data[j] |= 1 << i;
                r &= r - 1;
            }
        }
        t
    }
}

/// GF(2) rank by Gaussian elimination on a scratch copy of the rows.
pub fn gf2_rank(m: &Gf2Matrix) -> usize {
    gf2_rank_rows(&m.data)
}

/// Rank of a set of bit-packed row vectors.
pub fn gf2_rank_rows(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::with_capacity(rows.len().min(64));
    for &row in rows {
        let mut r = row;
        for &b in &basis {
            // reduce by the basis row whose pivot (lowest set bit) divides r
            if r & (b & b.wrapping_neg()) != 0 {
                r ^= b;
            }
        }
        if r != 0 {
            basis.push(r);
        }
    }
    basis.len()
}

/// `cols - rank`: the dimension of the right kernel.
pub fn gf2_nullity(m: &Gf2Matrix) -> usize {
    m.cols - gf2_rank(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Naive oracle: the rank is log2 of the number of distinct vectors in the
    // row span, enumerated explicitly. Only usable for few rows.
    fn rank_by_span(rows: &[u64]) -> usize {
        assert!(rows.len() <= 16);
        let mut span = std::collections::HashSet::new();
        for sel in 0u32..1 << rows.len() {
            let mut v = 0u64;
            for (i, &r) in rows.iter().enumerate() {
                if sel >> i & 1 == 1 {
                    v ^= r;
                }
            }
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(3, 3)), 0);
    }

    #[test]
    fn rank_identity() {
        assert_eq!(gf2_rank(&Gf2Matrix::identity(3)), 3);
    }

    #[test]
    fn rank_equal_rows() {
        let m = Gf2Matrix::from_rows(vec![0b11, 0b11], 2);
        assert_eq!(gf2_rank(&m), 1);
    }

    #[test]
    fn rank_empty() {
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(0, 0)), 0);
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(0, 5)), 0);
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(5, 0)), 0);
    }

    #[test]
    fn nullity_examples() {
        assert_eq!(gf2_nullity(&Gf2Matrix::zeros(2, 3)), 3);
        assert_eq!(gf2_nullity(&Gf2Matrix::identity(3)), 0);
        // [[1,0,1],[0,1,1]]: kernel = {000, 111}, dimension 1
        let m = Gf2Matrix::from_rows(vec![0b101, 0b110], 3);
        assert_eq!(gf2_nullity(&m), 1);
    }

    #[test]
    fn kernel_enumeration_oracle() {
        // independently confirm the [[1,0,1],[0,1,1]] example by enumerating
        // all 8 binary vectors
        let rows = [0b101u64, 0b110];
        let kernel = (0u64..8)
            .filter(|v| rows.iter().all(|r| (r & v).count_ones() % 2 == 0))
            .count();
        assert_eq!(kernel, 2); // dimension 1
    }

    #[test]
    fn rank_matches_span_oracle_on_random_matrices() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let rows = (next() % 9) as usize;
            let cols = 1 + (next() % 12) as usize;
            let m: Vec<u64> = (0..rows).map(|_| next() & ((1 << cols) - 1)).collect();
            let mat = Gf2Matrix::from_rows(m.clone(), cols);
            assert_eq!(gf2_rank(&mat), rank_by_span(&m));
            assert_eq!(gf2_rank(&mat), gf2_rank(&mat.transpose()));
            assert!(gf2_rank(&mat) <= rows.min(cols));
            assert_eq!(gf2_rank(&mat) + gf2_nullity(&mat), cols);
        }
    }

    #[test]
    fn rank_invariant_under_row_ops() {
        let rows = vec![0b1011u64, 0b0110, 0b1101];
        let base = gf2_rank(&Gf2Matrix::from_rows(rows.clone(), 4));
        // permutation
        let perm = Gf2Matrix::from_rows(vec![rows[2], rows[0], rows[1]], 4);
        assert_eq!(gf2_rank(&perm), base);
        // adding one row onto another
        let added = Gf2Matrix::from_rows(vec![rows[0] ^ rows[1], rows[1], rows[2]], 4);
        assert_eq!(gf2_rank(&added), base);
    }
}
