//! Arithmetic in GF(2^m) with a polynomial basis, and in GF(2^m)[z].
//!
//! Elements are bitmasks: bit `i` is the coefficient of `x^i`. The reference
//! multiplication is shift-and-XOR with reduction by the field modulus; for
//! `m <= 12` a log/antilog table built from that reference path is used as a
//! fast path.

mod poly;

pub use poly::FieldPoly;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

const TABLE_MAX_DEGREE: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero in GF(2^m)")]
    DivisionByZero,
    #[error("division by the zero polynomial")]
    ZeroPolynomialDivisor,
    #[error("extended Euclid needs at least one nonzero input")]
    BothZero,
    #[error("irreducibility is undefined for constant polynomials")]
    ConstantPolynomial,
    #[error("extension degree {0} outside [2, {MAX_DEGREE}]")]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} is not a degree-{m} polynomial")]
    ModulusDegree { m: u32, modulus: u32 },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("value {value:#x} is not an element of GF(2^{m})")]
    ElementOutOfRange { m: u32, value: u32 },
}

/// An element of GF(2^m), stored as its coefficient bitmask.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// addition in characteristic 2 is XOR
#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Add for FieldElement {
    type Output = FieldElement;

    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

#[allow(clippy::suspicious_op_assign_impl)]
impl std::ops::AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl fmt::LowerHex for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

struct LogTables {
    // exp has 2 * (q - 1) entries so log sums never need a modular reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
}

/// The field GF(2^m) defined by an irreducible binary modulus.
#[derive(Clone)]
pub struct FieldParams {
    m: u32,
    modulus: u32,
    tables: Option<Arc<LogTables>>,
}

impl fmt::Debug for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldParams")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl PartialEq for FieldParams {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldParams {}

/// Fixed default modulus for each supported extension degree.
pub fn default_modulus(m: u32) -> Option<u32> {
    let modulus = match m {
        2 => 0x7,
        3 => 0xb,
        4 => 0x13,
        5 => 0x25,
        6 => 0x43,
        7 => 0x83,
        8 => 0x11b,
        9 => 0x211,
        10 => 0x409,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201b,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1100b,
        _ => return None,
    };
    Some(modulus)
}

/// Carryless multiply of two binary polynomials of degree < 32.
fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let a = a as u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

fn binary_degree(x: u64) -> i32 {
    63 - x.leading_zeros() as i32
}

fn binary_rem(mut a: u64, b: u64) -> u64 {
    let db = binary_degree(b);
    while a != 0 && binary_degree(a) >= db {
        a ^= b << (binary_degree(a) - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of degree
/// up to half the degree of `f`.
fn is_irreducible_gf2(f: u32) -> bool {
    let d = binary_degree(f as u64);
    if d < 1 {
        return false;
    }
    let half = d / 2;
    for divisor in 2u64..(1u64 << (half + 1)) {
        if binary_rem(f as u64, divisor) == 0 {
            return false;
        }
    }
    true
}

impl FieldParams {
    /// Builds GF(2^m) from an explicit modulus, checking that it has degree
    /// `m` and is irreducible.
    pub fn new(m: u32, modulus: u32) -> Result<Self, FieldError> {
        if !(2..=MAX_DEGREE).contains(&m) {
            return Err(FieldError::UnsupportedDegree(m));
        }
        if binary_degree(modulus as u64) != m as i32 {
            return Err(FieldError::ModulusDegree { m, modulus });
        }
        if !is_irreducible_gf2(modulus) {
            return Err(FieldError::ReducibleModulus(modulus));
        }
        let mut params = FieldParams {
            m,
            modulus,
            tables: None,
        };
        if m <= TABLE_MAX_DEGREE {
            params.tables = Some(Arc::new(params.build_tables()));
        }
        Ok(params)
    }

    /// GF(2^m) with the fixed default modulus for `m`.
    pub fn with_default_modulus(m: u32) -> Result<Self, FieldError> {
        let modulus = default_modulus(m).ok_or(FieldError::UnsupportedDegree(m))?;
        Self::new(m, modulus)
    }

    /// Same field without the log/antilog fast path.
    pub fn reference_only(&self) -> Self {
        FieldParams {
            m: self.m,
            modulus: self.modulus,
            tables: None,
        }
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of field elements, 2^m.
    #[inline]
    pub fn order(&self) -> usize {
        1usize << self.m
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, FieldError> {
        if (value as usize) < self.order() {
            Ok(FieldElement(value as u16))
        } else {
            Err(FieldError::ElementOutOfRange { m: self.m, value })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(|v| FieldElement(v as u16))
    }

    fn build_tables(&self) -> LogTables {
        let q1 = self.order() - 1;
        // The modulus need not be primitive, so search for a generator.
        let generator = (2..self.order() as u32)
            .map(|g| FieldElement(g as u16))
            .find(|&g| {
                let mut x = g;
                for i in 1..q1 {
                    if x == FieldElement::ONE {
                        return i == q1;
                    }
                    x = self.mul_reference(x, g);
                }
                x == FieldElement::ONE
            })
            .unwrap_or(FieldElement::ONE);
        let mut exp = vec![0u16; 2 * q1];
        let mut log = vec![0u16; self.order()];
        let mut x = FieldElement::ONE;
        for i in 0..q1 {
            exp[i] = x.0;
            exp[i + q1] = x.0;
            log[x.0 as usize] = i as u16;
            x = self.mul_reference(x, generator);
        }
        LogTables { exp, log }
    }

    /// Shift-and-XOR multiplication followed by reduction by the modulus.
    pub fn mul_reference(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let product = clmul(a.0 as u32, b.0 as u32);
        FieldElement(binary_rem(product, self.modulus as u64) as u16)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FieldElement::ZERO
                } else {
                    let s = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
                    FieldElement(t.exp[s])
                }
            }
            None => self.mul_reference(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, computed as a^(2^m - 2).
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let q1 = self.order() - 1;
            let l = t.log[a.0 as usize] as usize;
            return Ok(FieldElement(t.exp[(q1 - l) % q1]));
        }
        Ok(self.pow(a, self.order() as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square root, a^(2^(m-1)); squaring is a bijection in characteristic 2.
    pub fn sqrt(&self, a: FieldElement) -> FieldElement {
        let mut x = a;
        for _ in 1..self.m {
            x = self.square(x);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> FieldParams {
        FieldParams::new(4, 0x13).unwrap()
    }

    #[test]
    fn mul_examples() {
        let f = gf16();
        assert_eq!(
            f.mul(FieldElement(0x0), FieldElement(0x7)),
            FieldElement(0x0)
        );
        assert_eq!(
            f.mul(FieldElement(0x1), FieldElement(0x9)),
            FieldElement(0x9)
        );
        assert_eq!(
            f.mul(FieldElement(0x2), FieldElement(0x8)),
            FieldElement(0x3)
        );
        assert_eq!(
            f.mul_reference(FieldElement(0x2), FieldElement(0x8)),
            FieldElement(0x3)
        );
    }

    #[test]
    fn inv_examples() {
        let f = gf16();
        assert_eq!(f.inv(FieldElement(0x1)), Ok(FieldElement(0x1)));
        assert_eq!(f.inv(FieldElement(0x2)), Ok(FieldElement(0x9)));
        assert_eq!(f.inv(FieldElement(0x0)), Err(FieldError::DivisionByZero));
        assert_eq!(
            f.reference_only().inv(FieldElement(0x2)),
            Ok(FieldElement(0x9))
        );
    }

    #[test]
    fn exhaustive_field_axioms_m4() {
        let f = gf16();
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    assert_eq!(f.mul(a, b + c), f.mul(a, b) + f.mul(a, c));
                }
            }
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
        }
    }

    #[test]
    fn table_path_matches_reference() {
        for m in 2..=TABLE_MAX_DEGREE {
            let f = FieldParams::with_default_modulus(m).unwrap();
            let r = f.reference_only();
            let step = (f.order() / 64).max(1);
            for a in f.elements().step_by(step) {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), r.mul(a, b), "m={m}");
                }
                if !a.is_zero() {
                    assert_eq!(f.inv(a), r.inv(a), "m={m}");
                }
            }
        }
    }

    #[test]
    fn default_moduli_are_irreducible() {
        for m in 2..=MAX_DEGREE {
            assert!(FieldParams::with_default_modulus(m).is_ok(), "m={m}");
        }
        assert_eq!(default_modulus(10), Some(0x409));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert_eq!(
            FieldParams::new(4, 0x15).unwrap_err(),
            FieldError::ReducibleModulus(0x15)
        );
        assert!(matches!(
            FieldParams::new(4, 0x9),
            Err(FieldError::ModulusDegree { .. })
        ));
        assert_eq!(
            FieldParams::new(1, 0x3).unwrap_err(),
            FieldError::UnsupportedDegree(1)
        );
    }

    #[test]
    fn sqrt_inverts_square() {
        let f = FieldParams::with_default_modulus(10).unwrap();
        for a in f.elements() {
            assert_eq!(f.square(f.sqrt(a)), a);
        }
    }
}
