//! Classical McEliece over binary Goppa codes: `G' = S G P`.
//!
//! Decryption runs in the same six steps as the quantum decoder so that it
//! can serve as its classical oracle: undo `P`, take the syndrome, decode the
//! error, strip it, recover `mS` with the right inverse of `G`, undo `S`.

mod format;

pub use format::FormatError;

use rand::Rng;
use thiserror::Error;

use crate::bitlinalg::{BitMatrix, BitVec, LinalgError, Permutation};
use crate::gf2m::FieldParams;
use crate::goppa::{GoppaCode, GoppaError};
use crate::seed::{stream_rng, Stream};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McElieceError {
    #[error(transparent)]
    Goppa(#[from] GoppaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("error weight {t} exceeds length {n}")]
    ErrorWeight { n: usize, t: usize },
    #[error("{what} has {found} bits, expected {expected}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("corrected word fails the parity check")]
    ParityCheckFailed,
    #[error("key invariant violated: {0}")]
    Invariant(&'static str),
}

/// `G'` (`k x n`) together with a right inverse `G'^-` (`n x k`). The inverse
/// is derivable from `G'` and is carried only as a cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    t: usize,
    gpub: BitMatrix,
    gpub_inv: BitMatrix,
}

impl PublicKey {
    /// Builds a key, checking `G' G'^- = I_k`.
    pub fn new(t: usize, gpub: BitMatrix, gpub_inv: BitMatrix) -> Result<Self, McElieceError> {
        if gpub_inv.rows() != gpub.cols() || gpub_inv.cols() != gpub.rows() {
            return Err(McElieceError::Invariant(
                "right inverse has the wrong shape",
            ));
        }
        if !gpub.mul(&gpub_inv)?.is_identity() {
            return Err(McElieceError::Invariant("G' G'^- != I_k"));
        }
        if t > gpub.cols() {
            return Err(McElieceError::ErrorWeight { n: gpub.cols(), t });
        }
        Ok(PublicKey { t, gpub, gpub_inv })
    }

    /// Derives the right inverse from `G'`.
    pub fn from_generator(t: usize, gpub: BitMatrix) -> Result<Self, McElieceError> {
        let inv = gpub.right_inverse()?;
        Self::new(t, gpub, inv)
    }

    pub fn n(&self) -> usize {
        self.gpub.cols()
    }

    pub fn k(&self) -> usize {
        self.gpub.rows()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.gpub
    }

    pub fn generator_inverse(&self) -> &BitMatrix {
        &self.gpub_inv
    }

    /// Copy with an arbitrary inverse and no checks, for fault injection.
    #[doc(hidden)]
    pub fn with_inverse_unchecked(&self, gpub_inv: BitMatrix) -> PublicKey {
        PublicKey {
            gpub_inv,
            ..self.clone()
        }
    }
}

/// `(S, code, P)` with cached `S^-1` and `P^-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    scrambler: BitMatrix,
    scrambler_inv: BitMatrix,
    code: GoppaCode,
    perm: Permutation,
    perm_inv: Permutation,
}

impl PrivateKey {
    pub fn new(
        code: GoppaCode,
        scrambler: BitMatrix,
        perm: Permutation,
    ) -> Result<Self, McElieceError> {
        if scrambler.rows() != code.k() || scrambler.cols() != code.k() {
            return Err(McElieceError::Invariant("S must be k x k"));
        }
        if perm.len() != code.n() {
            return Err(McElieceError::Invariant("P must act on n positions"));
        }
        let scrambler_inv = scrambler.square_inverse()?;
        let perm_inv = perm.inverse();
        Ok(PrivateKey {
            scrambler,
            scrambler_inv,
            code,
            perm,
            perm_inv,
        })
    }

    pub fn code(&self) -> &GoppaCode {
        &self.code
    }

    pub fn scrambler(&self) -> &BitMatrix {
        &self.scrambler
    }

    pub fn scrambler_inverse(&self) -> &BitMatrix {
        &self.scrambler_inv
    }

    pub fn permutation(&self) -> &Permutation {
        &self.perm
    }

    pub fn permutation_inverse(&self) -> &Permutation {
        &self.perm_inv
    }

    pub fn n(&self) -> usize {
        self.code.n()
    }

    pub fn k(&self) -> usize {
        self.code.k()
    }

    pub fn t(&self) -> usize {
        self.code.t()
    }

    /// `S G P`.
    pub fn public_generator(&self) -> Result<BitMatrix, McElieceError> {
        let sg = self.scrambler.mul(self.code.generator())?;
        Ok(self.perm.apply_columns(&sg)?)
    }

    pub fn public_key(&self) -> Result<PublicKey, McElieceError> {
        PublicKey::from_generator(self.t(), self.public_generator()?)
    }

    /// Whether `S G P` reproduces the given public generator.
    pub fn matches(&self, pk: &PublicKey) -> bool {
        pk.t() == self.t() && self.public_generator().is_ok_and(|g| &g == pk.generator())
    }

    #[doc(hidden)]
    pub fn with_code(&self, code: GoppaCode) -> PrivateKey {
        PrivateKey {
            code,
            ..self.clone()
        }
    }
}

/// Generates a key pair from one seed; the Goppa polynomial, support, `S` and
/// `P` each draw from their own stream.
pub fn keygen(
    field: FieldParams,
    n: usize,
    t: usize,
    seed: u64,
) -> Result<(PublicKey, PrivateKey), McElieceError> {
    let code = GoppaCode::generate(
        field,
        n,
        t,
        &mut stream_rng(seed, Stream::Support),
        &mut stream_rng(seed, Stream::GoppaPolynomial),
    )?;
    let scrambler =
        BitMatrix::random_invertible(code.k(), &mut stream_rng(seed, Stream::Scrambler));
    let perm = Permutation::random(code.n(), &mut stream_rng(seed, Stream::Permutation));
    keygen_from_parts(code, scrambler, perm)
}

/// Assembles a key pair from explicit `(code, S, P)`.
pub fn keygen_from_parts(
    code: GoppaCode,
    scrambler: BitMatrix,
    perm: Permutation,
) -> Result<(PublicKey, PrivateKey), McElieceError> {
    let sk = PrivateKey::new(code, scrambler, perm)?;
    let pk = sk.public_key()?;
    Ok((pk, sk))
}

/// A uniformly random vector of length `n` and weight exactly `t`.
pub fn sample_error<R: Rng + ?Sized>(
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<BitVec, McElieceError> {
    if t > n {
        return Err(McElieceError::ErrorWeight { n, t });
    }
    let mut positions: Vec<usize> = (0..n).collect();
    let mut e = BitVec::zeros(n);
    // partial Fisher-Yates: the first t slots are a uniform t-subset
    for i in 0..t {
        let j = rng.gen_range(i..n);
        positions.swap(i, j);
        e.set(positions[i], true);
    }
    Ok(e)
}

fn check_len(what: &'static str, v: &BitVec, expected: usize) -> Result<(), McElieceError> {
    if v.len() != expected {
        return Err(McElieceError::Length {
            what,
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

/// `m G' + e` for an explicit error vector.
pub fn encrypt_with_error(
    pk: &PublicKey,
    msg: &BitVec,
    error: &BitVec,
) -> Result<BitVec, McElieceError> {
    check_len("message", msg, pk.k())?;
    check_len("error", error, pk.n())?;
    Ok(pk.gpub.vec_mul(msg)?.xor(error)?)
}

/// `m G' + e` with a fresh weight-`t` error.
pub fn encrypt<R: Rng + ?Sized>(
    pk: &PublicKey,
    msg: &BitVec,
    rng: &mut R,
) -> Result<BitVec, McElieceError> {
    check_len("message", msg, pk.k())?;
    let error = sample_error(pk.n(), pk.t(), rng)?;
    encrypt_with_error(pk, msg, &error)
}

/// Result of a classical decryption, with the error found in the permuted
/// frame (`e P^-1`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decryption {
    pub message: BitVec,
    pub permuted_error: BitVec,
}

pub fn decrypt_detailed(sk: &PrivateKey, ciphertext: &BitVec) -> Result<Decryption, McElieceError> {
    check_len("ciphertext", ciphertext, sk.n())?;
    let unpermuted = sk.perm_inv.apply(ciphertext)?;
    let syndrome = sk.code.syndrome(&unpermuted)?;
    let permuted_error = sk.code.decode(&syndrome)?;
    let codeword = unpermuted.xor(&permuted_error)?;
    if !sk.code.syndrome(&codeword)?.is_zero() {
        return Err(McElieceError::ParityCheckFailed);
    }
    let scrambled = sk.code.generator_inverse().vec_mul(&codeword)?;
    let message = sk.scrambler_inv.vec_mul(&scrambled)?;
    Ok(Decryption {
        message,
        permuted_error,
    })
}

pub fn decrypt(sk: &PrivateKey, ciphertext: &BitVec) -> Result<BitVec, McElieceError> {
    Ok(decrypt_detailed(sk, ciphertext)?.message)
}
