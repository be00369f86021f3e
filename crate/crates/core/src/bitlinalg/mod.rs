//! Bit-packed linear algebra over GF(2) in the row-vector convention:
//! a vector `v` multiplies a matrix as `v * M`.

mod bitvec;
mod matrix;
mod permutation;

pub use bitvec::BitVec;
pub use matrix::{BitMatrix, Echelon};
pub use permutation::Permutation;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("length mismatch: expected {expected} bits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is not full row rank (rank {rank} < {rows} rows)")]
    NotFullRowRank { rank: usize, rows: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("index array is not a permutation")]
    NotAPermutation,
    #[error("invalid bit character {ch:?} at position {pos}")]
    InvalidBitChar { ch: char, pos: usize },
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn bitvec(len: usize) -> impl Strategy<Value = BitVec> {
        proptest::collection::vec(any::<bool>(), len).prop_map(BitVec::from_bools)
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = BitMatrix> {
        proptest::collection::vec(bitvec(cols), rows)
            .prop_map(move |r| BitMatrix::from_rows(cols, r).unwrap())
    }

    proptest! {
        #[test]
        fn vec_mul_is_compatible_with_products(
            v in bitvec(9), a in matrix(9, 13), b in matrix(13, 6)
        ) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.vec_mul(&v).unwrap(), b.vec_mul(&a.vec_mul(&v).unwrap()).unwrap());
        }

        #[test]
        fn nullspace_annihilates(m in matrix(5, 12)) {
            let ns = m.nullspace_basis();
            prop_assert_eq!(ns.rows() + m.rank(), 12);
            prop_assert_eq!(ns.rank(), ns.rows());
            prop_assert!(ns.mul(&m.transpose()).unwrap().is_zero());
        }

        #[test]
        fn right_inverse_when_full_rank(m in matrix(6, 10)) {
            match m.right_inverse() {
                Ok(n) => prop_assert!(m.mul(&n).unwrap().is_identity()),
                Err(e) => {
                    prop_assert!(m.rank() < 6);
                    prop_assert!(matches!(e, LinalgError::NotFullRowRank { .. }), "unexpected error: {:?}", e);
                }
            }
        }

        #[test]
        fn bit_string_round_trip(v in proptest::collection::vec(any::<bool>(), 0..200)) {
            let b = BitVec::from_bools(v);
            prop_assert_eq!(BitVec::parse_bits(&b.to_bit_string()).unwrap(), b);
        }
    }
}
