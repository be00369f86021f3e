//! Binary irreducible Goppa codes and Patterson syndrome decoding.
//!
//! A code is fixed by a support `L = (L_0, ..., L_{n-1})` of distinct field
//! elements and an irreducible Goppa polynomial `g` of degree `t` with no
//! roots on `L`. A word `c` is a codeword iff
//! `sum_j c_j / (z + L_j) = 0 mod g`. The binary parity-check matrix `H` has
//! `m*t` rows: column `j` holds the coefficients of `(z + L_j)^-1 mod g`, with
//! bit `b` of coefficient `i` in row `i*m + b`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::bitlinalg::{BitMatrix, BitVec, LinalgError};
use crate::gf2m::{FieldElement, FieldError, FieldParams, FieldPoly};
use crate::seed::StreamRng;

/// Fresh `(L, g)` draws allowed before key generation gives up.
pub const RETRY_BUDGET: usize = 100;

// Irreducible polynomials of degree t have density about 1/t, so this bound
// is never reached for supported parameters.
const POLY_DRAW_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoppaError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid Goppa parameters: {0}")]
    InvalidParameters(String),
    #[error("support contains duplicate element {0:#x}")]
    DuplicateSupport(FieldElement),
    #[error("Goppa polynomial vanishes at support element {0:#x}")]
    SupportClash(FieldElement),
    #[error("Goppa polynomial is not irreducible")]
    ReducibleGoppaPolynomial,
    #[error("parity-check matrix has rank {rank}, need {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("no valid code found within {0} attempts")]
    RetryBudgetExhausted(usize),
    #[error("syndrome has {found} bits, expected {expected}")]
    SyndromeLength { expected: usize, found: usize },
    #[error("word has {found} bits, expected {expected}")]
    WordLength { expected: usize, found: usize },
    #[error("decoding failure: {0}")]
    DecodingFailure(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoppaCode {
    field: FieldParams,
    support: Vec<FieldElement>,
    goppa_poly: FieldPoly,
    parity_check: BitMatrix,
    parity_check_t: BitMatrix,
    generator: BitMatrix,
    generator_inv: BitMatrix,
    sqrt_z: FieldPoly,
}

fn validate_params(field: &FieldParams, n: usize, t: usize) -> Result<(), GoppaError> {
    let m = field.degree() as usize;
    if t == 0 {
        return Err(GoppaError::InvalidParameters("t must be at least 1".into()));
    }
    if n > field.order() {
        return Err(GoppaError::InvalidParameters(format!(
            "n = {n} exceeds the field size 2^{m}"
        )));
    }
    if m * t >= n {
        return Err(GoppaError::InvalidParameters(format!(
            "m*t = {} must be smaller than n = {n}",
            m * t
        )));
    }
    Ok(())
}

/// `(z + a)^-1 mod g`, via the exact quotient `(g(z) + g(a)) / (z + a)`
/// scaled by `g(a)^-1`.
pub fn inv_linear_mod_g(
    field: &FieldParams,
    g: &FieldPoly,
    a: FieldElement,
) -> Result<FieldPoly, GoppaError> {
    let ga = field.poly_eval(g, a);
    if ga.is_zero() {
        return Err(GoppaError::SupportClash(a));
    }
    let shifted = g.add(&FieldPoly::constant(ga));
    let (quot, rem) = field.poly_div_linear(&shifted, a);
    debug_assert!(rem.is_zero());
    Ok(field.poly_scale(&quot, field.inv(ga)?))
}

fn build_parity_check(
    field: &FieldParams,
    support: &[FieldElement],
    g: &FieldPoly,
) -> Result<BitMatrix, GoppaError> {
    let m = field.degree() as usize;
    let t = g.degree().unwrap_or(0);
    let mut h = BitMatrix::zeros(m * t, support.len());
    for (j, &a) in support.iter().enumerate() {
        let col = inv_linear_mod_g(field, g, a)?;
        for i in 0..t {
            let c = col.coeff(i).value();
            for b in 0..m {
                if (c >> b) & 1 == 1 {
                    h.set(i * m + b, j, true);
                }
            }
        }
    }
    Ok(h)
}

fn sample_monic<R: Rng + ?Sized>(field: &FieldParams, t: usize, rng: &mut R) -> FieldPoly {
    let mut coeffs: Vec<FieldElement> = (0..t)
        .map(|_| FieldElement(rng.gen_range(0..field.order()) as u16))
        .collect();
    coeffs.push(FieldElement::ONE);
    FieldPoly::from_coeffs(coeffs)
}

impl GoppaCode {
    /// Assembles a code from its support and Goppa polynomial, validating
    /// both and deriving `H`, `G` and a right inverse of `G`.
    pub fn from_parts(
        field: FieldParams,
        support: Vec<FieldElement>,
        goppa_poly: FieldPoly,
    ) -> Result<Self, GoppaError> {
        let n = support.len();
        let t = goppa_poly.degree().unwrap_or(0);
        validate_params(&field, n, t)?;
        let mut seen = vec![false; field.order()];
        for &a in &support {
            let slot = seen
                .get_mut(a.value() as usize)
                .ok_or(FieldError::ElementOutOfRange {
                    m: field.degree(),
                    value: a.value() as u32,
                })?;
            if std::mem::replace(slot, true) {
                return Err(GoppaError::DuplicateSupport(a));
            }
        }
        if goppa_poly
            .coeffs()
            .iter()
            .any(|c| c.value() as usize >= field.order())
        {
            return Err(GoppaError::InvalidParameters(
                "Goppa polynomial coefficient outside the field".into(),
            ));
        }
        if !field.poly_is_irreducible(&goppa_poly)? {
            return Err(GoppaError::ReducibleGoppaPolynomial);
        }
        let parity_check = build_parity_check(&field, &support, &goppa_poly)?;
        let expected = field.degree() as usize * t;
        let rank = parity_check.rank();
        if rank != expected {
            return Err(GoppaError::RankDeficient { rank, expected });
        }
        let generator = parity_check.nullspace_basis();
        let generator_inv = generator.right_inverse()?;
        let z_mod_g = field.poly_rem(&FieldPoly::z(), &goppa_poly)?;
        let sqrt_z = field.poly_sqrt_mod(&z_mod_g, &goppa_poly)?;
        Ok(GoppaCode {
            parity_check_t: parity_check.transpose(),
            field,
            support,
            goppa_poly,
            parity_check,
            generator,
            generator_inv,
            sqrt_z,
        })
    }

    /// Samples a code: `L` is the first `n` entries of a shuffled field, `g`
    /// a random monic irreducible polynomial of degree `t` with no root on
    /// `L`. Draws are repeated until `H` has full rank `m*t`.
    pub fn generate<R1, R2>(
        field: FieldParams,
        n: usize,
        t: usize,
        support_rng: &mut R1,
        poly_rng: &mut R2,
    ) -> Result<Self, GoppaError>
    where
        R1: Rng + ?Sized,
        R2: Rng + ?Sized,
    {
        validate_params(&field, n, t)?;
        for _ in 0..RETRY_BUDGET {
            let mut all: Vec<FieldElement> = field.elements().collect();
            all.shuffle(support_rng);
            all.truncate(n);
            let support = all;

            let mut goppa_poly = None;
            for _ in 0..POLY_DRAW_BUDGET {
                let g = sample_monic(&field, t, poly_rng);
                if !field.poly_is_irreducible(&g)? {
                    continue;
                }
                // only reachable for t = 1; higher-degree irreducibles have no roots
                if support.iter().any(|&a| field.poly_eval(&g, a).is_zero()) {
                    continue;
                }
                goppa_poly = Some(g);
                break;
            }
            let Some(g) = goppa_poly else {
                return Err(GoppaError::RetryBudgetExhausted(POLY_DRAW_BUDGET));
            };
            match Self::from_parts(field.clone(), support, g) {
                Ok(code) => return Ok(code),
                Err(GoppaError::RankDeficient { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(GoppaError::RetryBudgetExhausted(RETRY_BUDGET))
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn support(&self) -> &[FieldElement] {
        &self.support
    }

    pub fn goppa_poly(&self) -> &FieldPoly {
        &self.goppa_poly
    }

    /// `H`, `m*t x n`.
    pub fn parity_check(&self) -> &BitMatrix {
        &self.parity_check
    }

    /// `H^T`, `n x m*t`.
    pub fn parity_check_transpose(&self) -> &BitMatrix {
        &self.parity_check_t
    }

    /// `G`, `k x n`.
    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    /// Right inverse of `G`, `n x k`.
    pub fn generator_inverse(&self) -> &BitMatrix {
        &self.generator_inv
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn t(&self) -> usize {
        self.goppa_poly.degree().unwrap_or(0)
    }

    /// Syndrome width `m*t`.
    pub fn syndrome_len(&self) -> usize {
        self.field.degree() as usize * self.t()
    }

    pub fn inv_linear(&self, a: FieldElement) -> Result<FieldPoly, GoppaError> {
        inv_linear_mod_g(&self.field, &self.goppa_poly, a)
    }

    /// `word * H^T`.
    pub fn syndrome(&self, word: &BitVec) -> Result<BitVec, GoppaError> {
        if word.len() != self.n() {
            return Err(GoppaError::WordLength {
                expected: self.n(),
                found: word.len(),
            });
        }
        Ok(self.parity_check_t.vec_mul(word)?)
    }

    /// Packs `S(z)` into `m*t` bits, coefficient `i` at bits `[i*m, (i+1)*m)`.
    pub fn pack_syndrome(&self, s: &FieldPoly) -> BitVec {
        let m = self.field.degree() as usize;
        let mut out = BitVec::zeros(self.syndrome_len());
        for i in 0..self.t() {
            let c = s.coeff(i).value();
            for b in 0..m {
                if (c >> b) & 1 == 1 {
                    out.set(i * m + b, true);
                }
            }
        }
        out
    }

    pub fn unpack_syndrome(&self, bits: &BitVec) -> Result<FieldPoly, GoppaError> {
        if bits.len() != self.syndrome_len() {
            return Err(GoppaError::SyndromeLength {
                expected: self.syndrome_len(),
                found: bits.len(),
            });
        }
        let m = self.field.degree() as usize;
        let coeffs = (0..self.t())
            .map(|i| {
                let v = (0..m).fold(0u16, |acc, b| acc | ((bits.get(i * m + b) as u16) << b));
                FieldElement(v)
            })
            .collect();
        Ok(FieldPoly::from_coeffs(coeffs))
    }

    /// Square root in GF(2^m)[z]/g using the cached `sqrt(z)`:
    /// `u = u_even(z)^2 + z * u_odd(z)^2` gives `sqrt(u) = u_even + sqrt(z) * u_odd`.
    fn sqrt_mod_g(&self, u: &FieldPoly) -> Result<FieldPoly, GoppaError> {
        let f = &self.field;
        let split = |parity: usize| {
            FieldPoly::from_coeffs(
                u.coeffs()
                    .iter()
                    .skip(parity)
                    .step_by(2)
                    .map(|&c| f.sqrt(c))
                    .collect(),
            )
        };
        let (even, odd) = (split(0), split(1));
        let odd_part = f.poly_mulmod(&self.sqrt_z, &odd, &self.goppa_poly)?;
        Ok(even.add(&odd_part))
    }

    /// Patterson decoding: the unique error of weight at most `t` with the
    /// given syndrome.
    pub fn decode(&self, syndrome: &BitVec) -> Result<BitVec, GoppaError> {
        let f = &self.field;
        let g = &self.goppa_poly;
        let t = self.t();
        let s = self.unpack_syndrome(syndrome)?;
        if s.is_zero() {
            return Ok(BitVec::zeros(self.n()));
        }
        let s_inv = f.poly_inv_mod(&s, g)?;
        let shifted = f.poly_rem(&s_inv.add(&FieldPoly::z()), g)?;
        let locator = if shifted.is_zero() {
            // S^-1 = z: a single error at the support point 0
            FieldPoly::z()
        } else {
            let root = self.sqrt_mod_g(&shifted)?;
            let split = f.poly_eea(g, &root, Some(t / 2))?;
            let (a, b) = (split.r, split.v);
            f.poly_square(&a)
                .add(&f.poly_mul(&FieldPoly::z(), &f.poly_square(&b)))
        };

        let error = BitVec::from_bools(
            self.support
                .iter()
                .map(|&x| f.poly_eval(&locator, x).is_zero()),
        );
        let weight = error.weight();
        if weight > t {
            return Err(GoppaError::DecodingFailure(format!(
                "error weight {weight} exceeds t = {t}"
            )));
        }
        if Some(weight) != locator.degree() {
            return Err(GoppaError::DecodingFailure(format!(
                "locator of degree {} has {weight} roots on the support",
                locator.degree().unwrap_or(0)
            )));
        }
        if self.syndrome(&error)? != *syndrome {
            return Err(GoppaError::DecodingFailure("syndrome mismatch".into()));
        }
        Ok(error)
    }

    /// Copy with one bit of `H` flipped, for fault-injection checks.
    #[doc(hidden)]
    pub fn with_flipped_parity_bit(&self, row: usize, col: usize) -> GoppaCode {
        let mut code = self.clone();
        code.parity_check.flip(row, col);
        code.parity_check_t.flip(col, row);
        code
    }
}

/// Samples a code from a single generator, forking independent child streams
/// for the support and the Goppa polynomial.
pub fn build_goppa<R: Rng + ?Sized>(
    field: FieldParams,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<GoppaCode, GoppaError> {
    let mut support_rng = StreamRng::from_seed(rng.gen());
    let mut poly_rng = StreamRng::from_seed(rng.gen());
    GoppaCode::generate(field, n, t, &mut support_rng, &mut poly_rng)
}
