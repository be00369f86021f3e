//! Quantum-message encryption: the classical McEliece maps lifted to XOR
//! oracles on a sparse state, with every intermediate claim checked.
//!
//! Alice turns `sum a_m |m>` into `sum a_m |m G' + e>` with one error shared
//! by every branch. Bob undoes the permutation, measures the syndrome (which
//! is the same in every branch), removes the error, uncomputes the code
//! register and unscrambles.

use std::fmt;
use std::time::{Duration, Instant};

use num_complex::Complex;
use rand::Rng;
use thiserror::Error;

use crate::bitlinalg::{BitMatrix, BitVec};
use crate::gf2m::FieldParams;
use crate::goppa::GoppaError;
use crate::mceliece::{keygen, sample_error, McElieceError, PrivateKey, PublicKey};
use crate::qsim::{Amplitude, MeasurementRecord, RegisterLayout, State, StateError};
use crate::seed::{stream_rng, Stream};

pub const MSG: &str = "msg";
pub const CODE: &str = "code";
pub const SYN: &str = "syn";

/// Alice's step after which `msg` must be constant zero.
pub const ALICE_UNCOMPUTE: &str = "msg ^= code*G'inv";
/// Bob's step after which `code` must be constant zero.
pub const BOB_UNCOMPUTE: &str = "code ^= msg*G";

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    McEliece(#[from] McElieceError),
    #[error(transparent)]
    Decode(#[from] GoppaError),
    #[error("expected a single {expected}-bit register {name:?}, got layout `{found}`")]
    Layout {
        name: &'static str,
        expected: usize,
        found: String,
    },
    #[error("uncompute failed: register {0:?} is not constant zero")]
    UncomputeFailed(&'static str),
    #[error("syndrome register entangled: outcome probability {0}")]
    SyndromeEntangled(f64),
}

/// Snapshot of a state after one pipeline step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSummary {
    pub label: &'static str,
    pub term_count: usize,
    pub layout: RegisterLayout,
    /// `(register, its value if identical in every term)` in layout order.
    pub constant: Vec<(String, Option<BitVec>)>,
}

impl StepSummary {
    /// Constant value of `register` at this step, if it was constant.
    pub fn constant_value(&self, register: &str) -> Option<&BitVec> {
        self.constant
            .iter()
            .find(|(name, _)| name == register)
            .and_then(|(_, v)| v.as_ref())
    }

    fn of<T: Amplitude>(label: &'static str, state: &State<T>) -> Self {
        let constant = state
            .layout()
            .registers()
            .iter()
            .map(|r| {
                let c = state
                    .constant_value(&r.name)
                    .expect("register from own layout");
                (r.name.clone(), c)
            })
            .collect();
        StepSummary {
            label,
            term_count: state.term_count(),
            layout: state.layout().clone(),
            constant,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTrace<T = f64> {
    pub steps: Vec<StepSummary>,
    pub measurements: Vec<MeasurementRecord<T>>,
    /// Error Alice added, in the public frame.
    pub alice_error: Option<BitVec>,
    /// Error Bob decoded, in the private (unpermuted) frame.
    pub recovered_error: Option<BitVec>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl<T> Default for ProtocolTrace<T> {
    fn default() -> Self {
        ProtocolTrace {
            steps: Vec::new(),
            measurements: Vec::new(),
            alice_error: None,
            recovered_error: None,
            timings: Vec::new(),
        }
    }
}

/// Runs the steps and records a summary plus timing for each one.
struct Recorder<T: Amplitude> {
    trace: ProtocolTrace<T>,
    clock: Instant,
}

impl<T: Amplitude> Recorder<T> {
    fn new() -> Self {
        Recorder {
            trace: ProtocolTrace::default(),
            clock: Instant::now(),
        }
    }

    fn step(&mut self, label: &'static str, state: State<T>) -> State<T> {
        self.trace.timings.push((label, self.clock.elapsed()));
        self.trace.steps.push(StepSummary::of(label, &state));
        self.clock = Instant::now();
        state
    }
}

fn expect_single<T: Amplitude>(
    state: &State<T>,
    name: &'static str,
    width: usize,
) -> Result<(), ProtocolError> {
    let regs = state.layout().registers();
    if regs.len() != 1 || regs[0].name != name || regs[0].width != width {
        return Err(ProtocolError::Layout {
            name,
            expected: width,
            found: state.layout().to_string(),
        });
    }
    Ok(())
}

fn expect_zero<T: Amplitude>(
    state: &State<T>,
    register: &'static str,
) -> Result<(), ProtocolError> {
    match state.constant_value(register)? {
        Some(v) if v.is_zero() => Ok(()),
        _ => Err(ProtocolError::UncomputeFailed(register)),
    }
}

/// Encrypts with a fresh weight-`t` error drawn from `rng`.
pub fn alice_encrypt<T: Amplitude, R: Rng + ?Sized>(
    pk: &PublicKey,
    plaintext: &State<T>,
    rng: &mut R,
) -> Result<(State<T>, ProtocolTrace<T>), ProtocolError> {
    expect_single(plaintext, MSG, pk.k())?;
    let error = sample_error(pk.n(), pk.t(), rng)?;
    alice_encrypt_with_error(pk, plaintext, &error)
}

/// Encrypts with a caller-chosen error of any weight.
pub fn alice_encrypt_with_error<T: Amplitude>(
    pk: &PublicKey,
    plaintext: &State<T>,
    error: &BitVec,
) -> Result<(State<T>, ProtocolTrace<T>), ProtocolError> {
    expect_single(plaintext, MSG, pk.k())?;
    let n = pk.n();
    let mut rec = Recorder::new();
    let psi = rec.step(
        "attach code",
        plaintext.attach_register(CODE, n, &BitVec::zeros(n))?,
    );
    let psi = rec.step(
        "code ^= msg*G'",
        psi.apply_xor_linear(MSG, CODE, pk.generator())?,
    );
    let psi = rec.step(
        ALICE_UNCOMPUTE,
        psi.apply_xor_linear(CODE, MSG, pk.generator_inverse())?,
    );
    expect_zero(&psi, MSG)?;
    let psi = rec.step("discard msg", psi.discard_register(MSG)?);
    let psi = rec.step("code ^= e", psi.apply_xor_const(CODE, error)?);
    rec.trace.alice_error = Some(error.clone());
    Ok((psi, rec.trace))
}

/// Decrypts a ciphertext state. `rng` drives the syndrome measurement, whose
/// outcome is deterministic for well-formed input.
pub fn bob_decrypt<T: Amplitude, R: Rng + ?Sized>(
    sk: &PrivateKey,
    ciphertext: &State<T>,
    rng: &mut R,
) -> Result<(State<T>, ProtocolTrace<T>), ProtocolError> {
    let code = sk.code();
    let (n, k) = (sk.n(), sk.k());
    expect_single(ciphertext, CODE, n)?;
    let mut rec = Recorder::new();

    let unpermute = sk.permutation_inverse().to_matrix();
    let psi = rec.step(
        "code <- code*Pinv",
        ciphertext.apply_linear_bijection(CODE, &unpermute)?,
    );

    let r = code.syndrome_len();
    let psi = rec.step(
        "attach syn",
        psi.attach_register(SYN, r, &BitVec::zeros(r))?,
    );
    let psi = rec.step(
        "syn ^= code*Ht",
        psi.apply_xor_linear(CODE, SYN, code.parity_check_transpose())?,
    );
    let (record, psi) = psi.measure_register(SYN, rng)?;
    let psi = rec.step("measure syn", psi);
    let p = record.probability;
    let syndrome = record.outcome.clone();
    rec.trace.measurements.push(record);
    if (T::one() - p).abs() > T::internal_tolerance() {
        return Err(ProtocolError::SyndromeEntangled(
            p.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let error = code.decode(&syndrome)?;
    let psi = rec.step("discard syn", psi.discard_register(SYN)?);
    let psi = rec.step("code ^= e'", psi.apply_xor_const(CODE, &error)?);
    rec.trace.recovered_error = Some(error);

    let psi = rec.step(
        "attach msg",
        psi.attach_register(MSG, k, &BitVec::zeros(k))?,
    );
    let psi = rec.step(
        "msg ^= code*Ginv",
        psi.apply_xor_linear(CODE, MSG, code.generator_inverse())?,
    );
    let psi = rec.step(
        BOB_UNCOMPUTE,
        psi.apply_xor_linear(MSG, CODE, code.generator())?,
    );
    expect_zero(&psi, CODE)?;
    let psi = rec.step("discard code", psi.discard_register(CODE)?);
    let psi = rec.step(
        "msg <- msg*Sinv",
        psi.apply_linear_bijection(MSG, sk.scrambler_inverse())?,
    );
    Ok((psi, rec.trace))
}

/// One state of a sequence together with the trace that produced it.
pub type Transmission<T> = (State<T>, ProtocolTrace<T>);

/// Encrypts each state of a message sequence with its own fresh error.
pub fn alice_encrypt_sequence<T: Amplitude, R: Rng + ?Sized>(
    pk: &PublicKey,
    states: &[State<T>],
    rng: &mut R,
) -> Result<Vec<Transmission<T>>, ProtocolError> {
    states.iter().map(|s| alice_encrypt(pk, s, rng)).collect()
}

pub fn bob_decrypt_sequence<T: Amplitude, R: Rng + ?Sized>(
    sk: &PrivateKey,
    states: &[State<T>],
    rng: &mut R,
) -> Result<Vec<Transmission<T>>, ProtocolError> {
    states.iter().map(|s| bob_decrypt(sk, s, rng)).collect()
}

/// Plaintext state over the single `msg` register.
pub fn plaintext_state<T: Amplitude>(
    k: usize,
    terms: Vec<(Complex<T>, BitVec)>,
) -> Result<State<T>, ProtocolError> {
    let layout = RegisterLayout::single(MSG, k)?;
    Ok(State::from_terms(
        layout,
        terms.into_iter().map(|(a, m)| (a, vec![m])).collect(),
    )?)
}

/// Random normalized plaintext with `terms` distinct messages.
pub fn random_plaintext<R: Rng + ?Sized>(
    k: usize,
    terms: usize,
    rng: &mut R,
) -> Result<State<f64>, ProtocolError> {
    let mut keys = std::collections::BTreeSet::new();
    let cap = if k >= 63 { usize::MAX } else { 1usize << k };
    let terms = terms.min(cap);
    while keys.len() < terms {
        keys.insert(BitVec::random(k, rng));
    }
    let amps: Vec<Complex<f64>> = (0..terms)
        .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    plaintext_state(k, amps.into_iter().map(|a| a / norm).zip(keys).collect())
}

/// Outcome of [`run_roundtrip`]. `Display` is deterministic for a fixed seed;
/// timings are only available through [`RoundTrip::timing_report`].
#[derive(Debug, Clone)]
pub struct RoundTrip<T: Amplitude = f64> {
    pub m: u32,
    pub n: usize,
    pub k: usize,
    pub t: usize,
    pub seed: u64,
    pub plaintext: State<T>,
    pub ciphertext: State<T>,
    pub recovered: State<T>,
    pub fidelity: T,
    pub alice: ProtocolTrace<T>,
    pub bob: ProtocolTrace<T>,
    pub keygen_time: Duration,
}

/// Key generation, encryption and decryption of one state from a single
/// seed. Terms are `(amplitude, k-bit message)` pairs; `k` is only known once
/// the key exists, so the state is built here.
pub fn run_roundtrip<T: Amplitude>(
    field: FieldParams,
    n: usize,
    t: usize,
    terms: Vec<(Complex<T>, BitVec)>,
    seed: u64,
) -> Result<RoundTrip<T>, ProtocolError> {
    let m = field.degree();
    let clock = Instant::now();
    let (pk, sk) = keygen(field, n, t, seed)?;
    let keygen_time = clock.elapsed();
    let plaintext = plaintext_state(pk.k(), terms)?;
    let (ciphertext, alice) = alice_encrypt(&pk, &plaintext, &mut stream_rng(seed, Stream::Error))?;
    let (recovered, bob) =
        bob_decrypt(&sk, &ciphertext, &mut stream_rng(seed, Stream::Measurement))?;
    let fidelity = recovered.fidelity(&plaintext)?;
    Ok(RoundTrip {
        m,
        n,
        k: pk.k(),
        t,
        seed,
        plaintext,
        ciphertext,
        recovered,
        fidelity,
        alice,
        bob,
        keygen_time,
    })
}

impl<T: Amplitude> RoundTrip<T> {
    pub fn timing_report(&self) -> String {
        let mut out = format!("time keygen {:.3} ms\n", ms(self.keygen_time));
        for (side, trace) in [("alice", &self.alice), ("bob", &self.bob)] {
            for (label, d) in &trace.timings {
                out.push_str(&format!("time {side} {label} {:.3} ms\n", ms(*d)));
            }
        }
        out
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn write_trace<T: Amplitude>(f: &mut fmt::Formatter<'_>, trace: &ProtocolTrace<T>) -> fmt::Result {
    for s in &trace.steps {
        let flags: Vec<String> = s
            .constant
            .iter()
            .map(|(name, c)| format!("{name}={}", if c.is_some() { "const" } else { "varies" }))
            .collect();
        writeln!(
            f,
            "  {:<18} terms={:<3} layout=[{}] {}",
            s.label,
            s.term_count,
            s.layout,
            flags.join(" ")
        )?;
    }
    for r in &trace.measurements {
        writeln!(
            f,
            "  measured {} = {} p={:.15}",
            r.register, r.outcome, r.probability
        )?;
    }
    if let Some(e) = &trace.alice_error {
        writeln!(f, "  error e = {e}")?;
    }
    if let Some(e) = &trace.recovered_error {
        writeln!(f, "  recovered e' = {e}")?;
    }
    Ok(())
}

impl<T: Amplitude> fmt::Display for RoundTrip<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "params m={} n={} k={} t={} seed={}",
            self.m, self.n, self.k, self.t, self.seed
        )?;
        writeln!(f, "alice")?;
        write_trace(f, &self.alice)?;
        writeln!(f, "bob")?;
        write_trace(f, &self.bob)?;
        writeln!(f, "fidelity {:.15}", self.fidelity)
    }
}

/// `(msg*G')` for every term, used to spot-check ciphertext states.
pub fn expected_ciphertext_keys<T: Amplitude>(
    pk: &PublicKey,
    plaintext: &State<T>,
    error: &BitVec,
) -> Result<Vec<(BitVec, Complex<T>)>, ProtocolError> {
    let g: &BitMatrix = pk.generator();
    plaintext
        .terms()
        .map(|(m, a)| {
            Ok((
                g.vec_mul(m)
                    .map_err(McElieceError::from)?
                    .xor(error)
                    .map_err(McElieceError::from)?,
                *a,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mceliece::{decrypt, decrypt_detailed, encrypt};

    fn keys(seed: u64) -> (PublicKey, PrivateKey) {
        keygen(FieldParams::with_default_modulus(4).unwrap(), 16, 2, seed).unwrap()
    }

    fn basis(k: usize, m: &BitVec) -> State<f64> {
        plaintext_state(k, vec![(Complex::new(1.0, 0.0), m.clone())]).unwrap()
    }

    #[test]
    fn zero_plaintext_gives_the_error() {
        let (pk, _) = keys(1);
        let (ct, trace) = alice_encrypt(
            &pk,
            &basis(8, &BitVec::zeros(8)),
            &mut stream_rng(5, Stream::Error),
        )
        .unwrap();
        let e = trace.alice_error.unwrap();
        assert_eq!(e.weight(), 2);
        assert_eq!(ct.term_count(), 1);
        assert_eq!(ct.terms().next().unwrap().0, &e);
    }

    #[test]
    fn basis_states_match_classical_encryption() {
        let (pk, sk) = keys(2);
        for v in 0..256u64 {
            let m = BitVec::from_u64(v, 8);
            let ct_classical = encrypt(&pk, &m, &mut stream_rng(v, Stream::Error)).unwrap();
            let (ct, _) =
                alice_encrypt(&pk, &basis(8, &m), &mut stream_rng(v, Stream::Error)).unwrap();
            assert_eq!(ct, basis_on(CODE, 16, &ct_classical));
            let (out, bob) =
                bob_decrypt(&sk, &ct, &mut stream_rng(v, Stream::Measurement)).unwrap();
            assert_eq!(out, basis(8, &decrypt(&sk, &ct_classical).unwrap()));
            assert_eq!(
                bob.recovered_error.unwrap(),
                decrypt_detailed(&sk, &ct_classical).unwrap().permuted_error
            );
        }
    }

    fn basis_on(name: &str, width: usize, v: &BitVec) -> State<f64> {
        State::basis(
            RegisterLayout::single(name, width).unwrap(),
            vec![v.clone()],
        )
        .unwrap()
    }

    #[test]
    fn superposition_keeps_amplitudes() {
        let (pk, sk) = keys(3);
        let terms = vec![
            (Complex::new(0.6, 0.0), BitVec::from_u64(3, 8)),
            (Complex::new(0.0, -0.8), BitVec::from_u64(200, 8)),
        ];
        let psi = plaintext_state(8, terms).unwrap();
        let (ct, alice) = alice_encrypt(&pk, &psi, &mut stream_rng(9, Stream::Error)).unwrap();
        let e = alice.alice_error.clone().unwrap();
        let mut expected = expected_ciphertext_keys(&pk, &psi, &e).unwrap();
        expected.sort_by(|a, b| a.0.cmp(&b.0));
        let got: Vec<_> = ct.terms().map(|(k, a)| (k.clone(), *a)).collect();
        assert_eq!(got, expected);

        let (out, bob) = bob_decrypt(&sk, &ct, &mut stream_rng(9, Stream::Measurement)).unwrap();
        assert_eq!(out, psi);
        assert_eq!(bob.measurements[0].probability, 1.0);
        assert_eq!(
            bob.recovered_error.unwrap(),
            sk.permutation_inverse().apply(&e).unwrap()
        );
        assert!(bob.steps.iter().all(|s| s.term_count == 2));
    }

    #[test]
    fn wrong_layout_rejected() {
        let (pk, sk) = keys(4);
        let psi = basis(7, &BitVec::zeros(7));
        assert!(matches!(
            alice_encrypt(&pk, &psi, &mut stream_rng(0, Stream::Error)),
            Err(ProtocolError::Layout { .. })
        ));
        assert!(matches!(
            bob_decrypt(&sk, &psi, &mut stream_rng(0, Stream::Error)),
            Err(ProtocolError::Layout { .. })
        ));
    }

    #[test]
    fn broken_inverse_fails_uncompute() {
        let (pk, _) = keys(5);
        let bogus = pk.with_inverse_unchecked(BitMatrix::zeros(16, 8));
        let psi = basis(8, &BitVec::from_u64(1, 8));
        let err = alice_encrypt(&bogus, &psi, &mut stream_rng(0, Stream::Error)).unwrap_err();
        assert!(matches!(err, ProtocolError::UncomputeFailed(MSG)), "{err}");
        assert!(err.to_string().starts_with("uncompute failed"));
    }

    #[test]
    fn report_is_deterministic() {
        let terms = vec![
            (
                Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                BitVec::from_u64(1 << 7, 8),
            ),
            (
                Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
                BitVec::from_u64(1 << 6, 8),
            ),
        ];
        let field = FieldParams::with_default_modulus(4).unwrap();
        let a = run_roundtrip(field.clone(), 16, 2, terms.clone(), 11).unwrap();
        let b = run_roundtrip(field, 16, 2, terms, 11).unwrap();
        assert!((a.fidelity - 1.0).abs() < 1e-12);
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.to_string().ends_with("fidelity 1.000000000000000\n"));
        assert_eq!(
            a.timing_report().lines().count(),
            1 + a.alice.timings.len() + a.bob.timings.len()
        );
    }
}
