use rand::Rng;

use super::{BitVec, LinalgError};

/// A dense row-major matrix over GF(2). Vectors multiply from the left
/// (`v * M`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl std::fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Reduced row-echelon form `reduced = transform * M`.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
    pub transform: BitMatrix,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, LinalgError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(BitMatrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows)
            .map(|_| BitVec::from_bools((0..cols).map(|_| rng.gen::<bool>())))
            .collect();
        BitMatrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.data[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVec> {
        self.data.iter()
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].flip(c);
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                out.data[c].set(r, true);
            }
        }
        out
    }

    /// Row-vector product `v * M`.
    pub fn vec_mul(&self, v: &BitVec) -> Result<BitVec, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "vector-matrix product",
                left: (1, v.len()),
                right: (self.rows, self.cols),
            });
        }
        let mut out = BitVec::zeros(self.cols);
        for i in v.ones() {
            out.xor_assign(&self.data[i]).expect("rows have cols bits");
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matrix product",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| other.vec_mul(row))
            .collect::<Result<_, _>>()?;
        Ok(BitMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> BitMatrix {
        let data = self
            .data
            .iter()
            .map(|row| BitVec::from_bools(columns.iter().map(|&c| row.get(c))))
            .collect();
        BitMatrix {
            rows: self.rows,
            cols: columns.len(),
            data,
        }
    }

    /// Gauss-Jordan elimination, tracking the row operations in `transform`.
    pub fn rref(&self) -> Echelon {
        let mut reduced = self.data.clone();
        let mut transform = BitMatrix::identity(self.rows).data;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| reduced[r].get(col)) else {
                continue;
            };
            reduced.swap(rank, p);
            transform.swap(rank, p);
            let (pivot_row, pivot_t) = (reduced[rank].clone(), transform[rank].clone());
            for r in 0..self.rows {
                if r != rank && reduced[r].get(col) {
                    reduced[r].xor_assign(&pivot_row).expect("same width");
                    transform[r].xor_assign(&pivot_t).expect("same width");
                }
            }
            pivots.push(col);
            rank += 1;
        }
        Echelon {
            reduced: BitMatrix {
                rows: self.rows,
                cols: self.cols,
                data: reduced,
            },
            rank,
            pivots,
            transform: BitMatrix {
                rows: self.rows,
                cols: self.rows,
                data: transform,
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : v * M^T = 0}`, one vector per non-pivot column.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let data: Vec<BitVec> = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = BitVec::unit(self.cols, free);
                for (i, &p) in ech.pivots.iter().enumerate() {
                    if ech.reduced.get(i, free) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        BitMatrix {
            rows: data.len(),
            cols: self.cols,
            data,
        }
    }

    /// A matrix `N` (`cols x rows`) with `M * N = I`.
    ///
    /// The pivot columns `J` of the echelon form give an invertible square
    /// submatrix `M_J`; its inverse is embedded at rows `J` of `N`.
    pub fn right_inverse(&self) -> Result<BitMatrix, LinalgError> {
        let ech = self.rref();
        if ech.rank != self.rows {
            return Err(LinalgError::NotFullRowRank {
                rank: ech.rank,
                rows: self.rows,
            });
        }
        let square = self.select_columns(&ech.pivots);
        let inv = square.square_inverse()?;
        let mut out = BitMatrix::zeros(self.cols, self.rows);
        for (i, &p) in ech.pivots.iter().enumerate() {
            out.data[p] = inv.data[i].clone();
        }
        Ok(out)
    }

    pub fn square_inverse(&self) -> Result<BitMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let ech = self.rref();
        if ech.rank != self.rows {
            return Err(LinalgError::Singular);
        }
        Ok(ech.transform)
    }

    /// Rejection-samples uniformly random `k x k` matrices until one is
    /// invertible. Returns the matrix and the number of draws it took.
    pub fn random_invertible_counted<R: Rng + ?Sized>(k: usize, rng: &mut R) -> (BitMatrix, usize) {
        assert!(k >= 1, "matrix size must be positive");
        let mut attempts = 0;
        loop {
            attempts += 1;
            let m = Self::random(k, k, rng);
            if m.rank() == k {
                return (m, attempts);
            }
        }
    }

    pub fn random_invertible<R: Rng + ?Sized>(k: usize, rng: &mut R) -> BitMatrix {
        Self::random_invertible_counted(k, rng).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn naive_vec_mul(v: &BitVec, m: &BitMatrix) -> BitVec {
        BitVec::from_bools(
            (0..m.cols())
                .map(|j| (0..m.rows()).fold(false, |acc, i| acc ^ (v.get(i) & m.get(i, j)))),
        )
    }

    fn random_full_row_rank(rng: &mut ChaCha8Rng, k: usize, n: usize) -> BitMatrix {
        loop {
            let m = BitMatrix::random(k, n, rng);
            if m.rank() == k {
                return m;
            }
        }
    }

    #[test]
    fn vec_mul_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = BitMatrix::random(16, 16, &mut rng);
        assert!(m.vec_mul(&BitVec::zeros(16)).unwrap().is_zero());
        let v = BitVec::random(16, &mut rng);
        assert_eq!(BitMatrix::identity(16).vec_mul(&v).unwrap(), v);
        for _ in 0..100 {
            let v = BitVec::random(16, &mut rng);
            let m = BitMatrix::random(16, 16, &mut rng);
            assert_eq!(m.vec_mul(&v).unwrap(), naive_vec_mul(&v, &m));
        }
        assert!(m.vec_mul(&BitVec::zeros(15)).is_err());
    }

    #[test]
    fn rref_examples() {
        let id = BitMatrix::identity(8);
        let e = id.rref();
        assert_eq!(e.reduced, id);
        assert_eq!(e.rank, 8);
        assert_eq!(e.transform, id);
        assert_eq!(BitMatrix::zeros(5, 7).rank(), 0);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let m = BitMatrix::random(9, 13, &mut rng);
            let e = m.rref();
            assert_eq!(e.transform.mul(&m).unwrap(), e.reduced);
            assert_eq!(e.transform.rank(), 9);
            for (i, &p) in e.pivots.iter().enumerate() {
                for r in 0..9 {
                    assert_eq!(e.reduced.get(r, p), r == i);
                }
            }
        }
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(BitMatrix::identity(6).nullspace_basis().rows(), 0);
        assert_eq!(
            BitMatrix::zeros(3, 6).nullspace_basis(),
            BitMatrix::identity(6)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = BitMatrix::random(6, 14, &mut rng);
            let ns = m.nullspace_basis();
            assert_eq!(ns.rows(), 14 - m.rank());
            assert_eq!(ns.rank(), ns.rows());
            assert!(ns.mul(&m.transpose()).unwrap().is_zero());
        }
    }

    #[test]
    fn right_inverse_examples() {
        assert_eq!(
            BitMatrix::identity(5).right_inverse().unwrap(),
            BitMatrix::identity(5)
        );
        let mut block = BitMatrix::zeros(3, 7);
        for i in 0..3 {
            block.set(i, i, true);
        }
        assert_eq!(block.right_inverse().unwrap(), block.transpose());

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let m = random_full_row_rank(&mut rng, 8, 16);
            let n = m.right_inverse().unwrap();
            assert!(m.mul(&n).unwrap().is_identity());
        }
        let mut deficient = BitMatrix::random(4, 9, &mut rng);
        let copy = deficient.row(0).clone();
        for c in 0..9 {
            deficient.set(3, c, copy.get(c));
        }
        assert!(matches!(
            deficient.right_inverse(),
            Err(LinalgError::NotFullRowRank { .. })
        ));
    }

    #[test]
    fn right_inverse_exhaustive_2x3() {
        let mut full_rank = 0;
        for bits in 0u64..64 {
            let m = BitMatrix::from_rows(
                3,
                vec![
                    BitVec::from_u64(bits & 7, 3),
                    BitVec::from_u64(bits >> 3, 3),
                ],
            )
            .unwrap();
            if m.rank() == 2 {
                full_rank += 1;
                assert!(m.mul(&m.right_inverse().unwrap()).unwrap().is_identity());
            } else {
                assert!(m.right_inverse().is_err());
            }
        }
        // (2^3 - 1)(2^3 - 2)
        assert_eq!(full_rank, 42);
    }

    #[test]
    fn square_inverse_examples() {
        assert_eq!(
            BitMatrix::identity(4).square_inverse().unwrap(),
            BitMatrix::identity(4)
        );
        assert_eq!(
            BitMatrix::zeros(4, 4).square_inverse().unwrap_err(),
            LinalgError::Singular
        );
        assert!(matches!(
            BitMatrix::zeros(3, 4).square_inverse(),
            Err(LinalgError::NotSquare { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let m = BitMatrix::random_invertible(8, &mut rng);
            let inv = m.square_inverse().unwrap();
            assert!(m.mul(&inv).unwrap().is_identity());
            assert!(inv.mul(&m).unwrap().is_identity());
        }
    }

    #[test]
    fn random_invertible_is_deterministic_and_full_rank() {
        let a = BitMatrix::random_invertible(8, &mut ChaCha8Rng::seed_from_u64(9));
        let b = BitMatrix::random_invertible(8, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert_eq!(a.rank(), 8);
    }

    #[test]
    fn random_invertible_acceptance_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut draws = 0;
        for _ in 0..1000 {
            let (m, attempts) = BitMatrix::random_invertible_counted(8, &mut rng);
            assert_eq!(m.rank(), 8);
            draws += attempts;
        }
        let expected: f64 = (1..=8).map(|i| 1.0 - 0.5f64.powi(i)).product();
        let observed = 1000.0 / draws as f64;
        assert!(
            (observed - expected).abs() < 0.03,
            "{observed} vs {expected}"
        );
    }

    #[test]
    fn product_associates_with_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let a = BitMatrix::random(7, 11, &mut rng);
            let b = BitMatrix::random(11, 5, &mut rng);
            let v = BitVec::random(7, &mut rng);
            let ab = a.mul(&b).unwrap();
            assert_eq!(
                ab.vec_mul(&v).unwrap(),
                b.vec_mul(&a.vec_mul(&v).unwrap()).unwrap()
            );
        }
    }
}
