//! Exact sparse simulation of basis-permutation unitaries.
//!
//! Every operator used by the cryptosystem sends computational basis states
//! to computational basis states, so a pure state is kept as a map from basis
//! keys to amplitudes and each operation only re-keys terms. Keys are the
//! concatenation of all registers in layout order.
//!
//! The amplitude scalar is generic ([`Amplitude`]); the crate root exposes
//! `f64` and `f32` aliases.

mod io;
mod layout;

pub use io::QSTATE_HEADER;
pub use layout::{Register, RegisterLayout};

use std::collections::BTreeMap;
use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign};
use rand::Rng;
use thiserror::Error;

use crate::bitlinalg::{BitMatrix, BitVec};

/// Real scalar type for amplitudes.
pub trait Amplitude:
    Float + NumAssign + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Allowed deviation of `sum |a|^2` from 1 for user-supplied states.
    fn input_tolerance() -> Self;
    /// Tolerance for internal checks such as a deterministic measurement.
    fn internal_tolerance() -> Self;
}

impl Amplitude for f64 {
    fn input_tolerance() -> Self {
        1e-9
    }

    fn internal_tolerance() -> Self {
        1e-12
    }
}

impl Amplitude for f32 {
    fn input_tolerance() -> Self {
        1e-5
    }

    fn internal_tolerance() -> Self {
        1e-6
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("a state needs at least one term")]
    Empty,
    #[error("duplicate basis state {0}")]
    DuplicateKey(String),
    #[error("state is not normalized: sum of squared amplitudes is {0}")]
    NotNormalized(f64),
    #[error("register {0:?} already exists")]
    DuplicateRegister(String),
    #[error("unknown register {0:?}")]
    UnknownRegister(String),
    #[error("register width must be at least 1 ({0:?})")]
    ZeroWidth(String),
    #[error("register {register:?} is {expected} bits wide, got {found}")]
    WidthMismatch {
        register: String,
        expected: usize,
        found: usize,
    },
    #[error("term lists {found} register values, layout has {expected}")]
    RegisterCount { expected: usize, found: usize },
    #[error("source and destination must differ ({0:?})")]
    SameRegister(String),
    #[error("matrix is {rows}x{cols}, registers need {src}x{dst}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        src: usize,
        dst: usize,
    },
    #[error("matrix acting on {0:?} is singular; the map would not be unitary")]
    Singular(String),
    #[error("register {0:?} is entangled or non-constant, cannot discard")]
    NotConstant(String),
    #[error("states have different register layouts")]
    LayoutMismatch,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Result of measuring one register.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord<T> {
    pub register: String,
    pub outcome: BitVec,
    /// Born probability of `outcome` before collapse.
    pub probability: T,
}

/// A pure state as a sparse map from basis keys to complex amplitudes.
///
/// No stored amplitude is exactly zero and the squared norm is 1 up to the
/// scalar's tolerance. Operations return new states.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T: Amplitude> {
    layout: RegisterLayout,
    terms: BTreeMap<BitVec, Complex<T>>,
}

impl<T: Amplitude> State<T> {
    /// Builds a state from `(amplitude, per-register values)` pairs. The
    /// amplitudes must already be normalized; nothing is rescaled.
    pub fn from_terms(
        layout: RegisterLayout,
        terms: Vec<(Complex<T>, Vec<BitVec>)>,
    ) -> Result<Self, StateError> {
        let keyed = terms
            .into_iter()
            .map(|(amp, values)| Ok((amp, layout.key_from_values(&values)?)))
            .collect::<Result<Vec<_>, StateError>>()?;
        Self::from_keys(layout, keyed)
    }

    /// Like [`State::from_terms`] with full-width basis keys.
    pub fn from_keys(
        layout: RegisterLayout,
        terms: Vec<(Complex<T>, BitVec)>,
    ) -> Result<Self, StateError> {
        if terms.is_empty() {
            return Err(StateError::Empty);
        }
        let width = layout.total_width();
        let mut map = BTreeMap::new();
        for (amp, key) in terms {
            if key.len() != width {
                return Err(StateError::WidthMismatch {
                    register: "<all>".into(),
                    expected: width,
                    found: key.len(),
                });
            }
            if map.contains_key(&key) {
                return Err(StateError::DuplicateKey(key.to_bit_string()));
            }
            if !amp.is_zero() {
                map.insert(key, amp);
            }
        }
        if map.is_empty() {
            return Err(StateError::Empty);
        }
        let state = State { layout, terms: map };
        let norm = state.norm_sqr();
        if (norm - T::one()).abs() > T::input_tolerance() {
            return Err(StateError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(state)
    }

    /// A single basis state with amplitude 1.
    pub fn basis(layout: RegisterLayout, values: Vec<BitVec>) -> Result<Self, StateError> {
        Self::from_terms(layout, vec![(Complex::new(T::one(), T::zero()), values)])
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending key order.
    pub fn terms(&self) -> impl Iterator<Item = (&BitVec, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, key: &BitVec) -> Complex<T> {
        self.terms.get(key).copied().unwrap_or_else(Complex::zero)
    }

    pub fn norm_sqr(&self) -> T {
        self.terms
            .values()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Value of `register` inside a full key.
    pub fn register_value(&self, key: &BitVec, register: &str) -> Result<BitVec, StateError> {
        let (offset, width) = self.layout.locate(register)?;
        Ok(key.slice(offset, width))
    }

    /// The register's value if it is the same in every term.
    pub fn constant_value(&self, register: &str) -> Result<Option<BitVec>, StateError> {
        let (offset, width) = self.layout.locate(register)?;
        let mut values = self.terms.keys().map(|k| k.slice(offset, width));
        let first = values.next().expect("states are never empty");
        Ok(values.all(|v| v == first).then_some(first))
    }

    /// Re-keys every term. Colliding images have their amplitudes added.
    fn rekey<F>(&self, layout: RegisterLayout, mut f: F) -> Result<Self, StateError>
    where
        F: FnMut(&BitVec) -> Result<BitVec, StateError>,
    {
        let mut terms: BTreeMap<BitVec, Complex<T>> = BTreeMap::new();
        for (key, &amp) in &self.terms {
            let image = f(key)?;
            *terms.entry(image).or_insert_with(Complex::zero) += amp;
        }
        terms.retain(|_, a| !a.is_zero());
        Ok(State { layout, terms })
    }

    /// Appends a register holding `value` in every term.
    pub fn attach_register(
        &self,
        name: &str,
        width: usize,
        value: &BitVec,
    ) -> Result<Self, StateError> {
        if value.len() != width {
            return Err(StateError::WidthMismatch {
                register: name.into(),
                expected: width,
                found: value.len(),
            });
        }
        let mut layout = self.layout.clone();
        layout.push(name, width)?;
        self.rekey(layout, |k| Ok(k.concat(value)))
    }

    /// `|.., a@src, .., b@dst, ..> -> |.., a@src, .., b + a M@dst, ..>`.
    pub fn apply_xor_linear(
        &self,
        src: &str,
        dst: &str,
        m: &BitMatrix,
    ) -> Result<Self, StateError> {
        if src == dst {
            return Err(StateError::SameRegister(src.into()));
        }
        let (so, sw) = self.layout.locate(src)?;
        let (d_off, dw) = self.layout.locate(dst)?;
        if m.rows() != sw || m.cols() != dw {
            return Err(StateError::MatrixShape {
                rows: m.rows(),
                cols: m.cols(),
                src: sw,
                dst: dw,
            });
        }
        self.rekey(self.layout.clone(), |k| {
            let a = k.slice(so, sw);
            let b = k.slice(d_off, dw);
            let mut out = k.clone();
            out.splice(
                d_off,
                &b.xor(&m.vec_mul(&a).expect("shape checked"))
                    .expect("same width"),
            );
            Ok(out)
        })
    }

    /// `|v@reg> -> |v + c@reg>`.
    pub fn apply_xor_const(&self, register: &str, c: &BitVec) -> Result<Self, StateError> {
        let (off, w) = self.layout.locate(register)?;
        if c.len() != w {
            return Err(StateError::WidthMismatch {
                register: register.into(),
                expected: w,
                found: c.len(),
            });
        }
        self.rekey(self.layout.clone(), |k| {
            let mut out = k.clone();
            out.splice(off, &k.slice(off, w).xor(c).expect("same width"));
            Ok(out)
        })
    }

    /// `|v@reg> -> |v A@reg>` for invertible `A`.
    pub fn apply_linear_bijection(
        &self,
        register: &str,
        a: &BitMatrix,
    ) -> Result<Self, StateError> {
        let (off, w) = self.layout.locate(register)?;
        if a.rows() != w || a.cols() != w {
            return Err(StateError::MatrixShape {
                rows: a.rows(),
                cols: a.cols(),
                src: w,
                dst: w,
            });
        }
        if a.rank() != w {
            return Err(StateError::Singular(register.into()));
        }
        self.rekey(self.layout.clone(), |k| {
            let mut out = k.clone();
            out.splice(off, &a.vec_mul(&k.slice(off, w)).expect("shape checked"));
            Ok(out)
        })
    }

    /// Outcome distribution of measuring `register`.
    pub fn outcome_probabilities(&self, register: &str) -> Result<BTreeMap<BitVec, T>, StateError> {
        let (off, w) = self.layout.locate(register)?;
        let mut probs = BTreeMap::new();
        for (k, a) in &self.terms {
            *probs.entry(k.slice(off, w)).or_insert_with(T::zero) += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Projective measurement of `register` in the computational basis.
    ///
    /// Surviving terms are rescaled by `1/sqrt(p)`, except when every term
    /// survives, in which case the state is returned unchanged.
    pub fn measure_register<R: Rng + ?Sized>(
        &self,
        register: &str,
        rng: &mut R,
    ) -> Result<(MeasurementRecord<T>, Self), StateError> {
        let (off, w) = self.layout.locate(register)?;
        let probs = self.outcome_probabilities(register)?;
        let total = probs.values().fold(T::zero(), |acc, &p| acc + p);
        let draw = T::from_f64(rng.gen::<f64>()).unwrap_or_else(T::zero) * total;
        let mut acc = T::zero();
        let mut chosen = None;
        for (outcome, &p) in &probs {
            acc += p;
            chosen = Some((outcome, p));
            if draw < acc {
                break;
            }
        }
        let (outcome, probability) = chosen.expect("states are never empty");
        let record = MeasurementRecord {
            register: register.to_string(),
            outcome: outcome.clone(),
            probability,
        };
        if probs.len() == 1 {
            return Ok((record, self.clone()));
        }
        let scale = T::one() / probability.sqrt();
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.slice(off, w) == *outcome)
            .map(|(k, &a)| (k.clone(), a * scale))
            .collect();
        Ok((
            record,
            State {
                layout: self.layout.clone(),
                terms,
            },
        ))
    }

    /// Drops a register whose value is identical in every term.
    pub fn discard_register(&self, register: &str) -> Result<Self, StateError> {
        if self.constant_value(register)?.is_none() {
            return Err(StateError::NotConstant(register.into()));
        }
        let (off, w) = self.layout.locate(register)?;
        let mut layout = self.layout.clone();
        layout.remove(register)?;
        self.rekey(layout, |k| Ok(k.remove_range(off, w)))
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &State<T>) -> Result<Complex<T>, StateError> {
        if self.layout != other.layout {
            return Err(StateError::LayoutMismatch);
        }
        let (small, large, conj_small) = if self.terms.len() <= other.terms.len() {
            (self, other, true)
        } else {
            (other, self, false)
        };
        let mut acc = Complex::zero();
        for (k, &a) in &small.terms {
            if let Some(&b) = large.terms.get(k) {
                acc += if conj_small {
                    a.conj() * b
                } else {
                    b.conj() * a
                };
            }
        }
        Ok(acc)
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &State<T>) -> Result<T, StateError> {
        Ok(self.inner_product(other)?.norm_sqr())
    }
}

/// `|<a|b>|^2`.
pub fn fidelity<T: Amplitude>(a: &State<T>, b: &State<T>) -> Result<T, StateError> {
    a.fidelity(b)
}

trait ComplexZero {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
}

impl<T: Amplitude> ComplexZero for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }

    fn is_zero(&self) -> bool {
        self.re == T::zero() && self.im == T::zero()
    }
}
