use rand::seq::SliceRandom;
use rand::Rng;

use super::{BitMatrix, BitVec, LinalgError};

/// A permutation `pi` of `[0, n)`, stored as the index array `map[i] = pi(i)`.
///
/// Its matrix has `P[i][pi(i)] = 1`, so acting on a row vector moves bit `i`
/// to position `pi(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    pub fn from_map(map: Vec<usize>) -> Result<Self, LinalgError> {
        let mut seen = vec![false; map.len()];
        for &x in &map {
            if x >= map.len() || std::mem::replace(&mut seen[x], true) {
                return Err(LinalgError::NotAPermutation);
            }
        }
        Ok(Permutation { map })
    }

    /// Fisher-Yates shuffle of `[0, n)`.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "permutation size must be positive");
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &p) in self.map.iter().enumerate() {
            inv[p] = i;
        }
        Permutation { map: inv }
    }

    /// `self` followed by `then`: `i -> then(self(i))`.
    pub fn then(&self, then: &Permutation) -> Permutation {
        Permutation {
            map: self.map.iter().map(|&p| then.map[p]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Row-vector action `v * P`: `(vP)[pi(i)] = v[i]`.
    pub fn apply(&self, v: &BitVec) -> Result<BitVec, LinalgError> {
        if v.len() != self.map.len() {
            return Err(LinalgError::LengthMismatch {
                expected: self.map.len(),
                found: v.len(),
            });
        }
        let mut out = BitVec::zeros(v.len());
        for i in v.ones() {
            out.set(self.map[i], true);
        }
        Ok(out)
    }

    /// Column permutation `M * P`: column `i` of `M` moves to column `pi(i)`.
    pub fn apply_columns(&self, m: &BitMatrix) -> Result<BitMatrix, LinalgError> {
        let rows = m
            .row_iter()
            .map(|row| self.apply(row))
            .collect::<Result<Vec<_>, _>>()?;
        BitMatrix::from_rows(self.map.len(), rows)
    }

    pub fn to_matrix(&self) -> BitMatrix {
        let n = self.map.len();
        let rows = self.map.iter().map(|&p| BitVec::unit(n, p)).collect();
        BitMatrix::from_rows(n, rows).expect("unit rows have length n")
    }
}
