//! Built-in property suites, runnable from the command line.

use std::fmt;
use std::time::{Duration, Instant};

use crate::bitlinalg::{BitMatrix, BitVec};
use crate::gf2m::{FieldElement, FieldParams};
use crate::mceliece::{decrypt, encrypt, keygen, PrivateKey, PublicKey};
use crate::protocol::{alice_encrypt, bob_decrypt, plaintext_state, random_plaintext};
use crate::seed::{stream_rng, Stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    /// Desk-scale suites at `m=4, n=16, t=2`.
    Quick,
    /// Adds randomized suites at `m=10, n=1024, t=50`.
    Full,
}

/// Deliberate corruption used to confirm the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Flip one bit of the private parity-check matrix.
    FlipParityBit { row: usize, col: usize },
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub outcome: Result<(), String>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }

    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(), String>) {
        let clock = Instant::now();
        let outcome = f();
        self.checks.push(CheckResult {
            name: name.into(),
            outcome,
            elapsed: clock.elapsed(),
        });
    }

    /// Generates the seed-1 key pair as a named check of its own.
    fn keygen(
        &mut self,
        m: u32,
        n: usize,
        t: usize,
        fault: Option<Fault>,
    ) -> Option<(PublicKey, PrivateKey)> {
        let mut pair = None;
        self.run(format!("keygen m={m} n={n} t={t}"), || {
            pair = Some(keys(m, n, t, 1, fault)?);
            Ok(())
        });
        pair
    }

    /// Result lines without timings.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            match &c.outcome {
                Ok(()) => out.push_str(&format!("PASS {}\n", c.name)),
                Err(why) => out.push_str(&format!("FAIL {}: {why}\n", c.name)),
            }
        }
        out
    }

    pub fn timings(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("time {} {:.3} ms\n", c.name, c.elapsed.as_secs_f64() * 1e3))
            .collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn keys(
    m: u32,
    n: usize,
    t: usize,
    seed: u64,
    fault: Option<Fault>,
) -> Result<(PublicKey, PrivateKey), String> {
    let field = FieldParams::with_default_modulus(m).map_err(|e| e.to_string())?;
    let (pk, sk) = keygen(field, n, t, seed).map_err(|e| e.to_string())?;
    let sk = match fault {
        Some(Fault::FlipParityBit { row, col }) => {
            let code = sk.code();
            if row >= code.syndrome_len() || col >= code.n() {
                return Err(format!("fault position ({row}, {col}) is outside H"));
            }
            sk.with_code(code.with_flipped_parity_bit(row, col))
        }
        None => sk,
    };
    Ok((pk, sk))
}

fn field_axioms() -> Result<(), String> {
    for m in 2..=8 {
        let f = FieldParams::with_default_modulus(m).map_err(|e| e.to_string())?;
        let r = FieldParams::new(m, f.modulus())
            .map_err(|e| e.to_string())?
            .reference_only();
        let elems: Vec<FieldElement> = f.elements().collect();
        for &a in &elems {
            if !a.is_zero() {
                let inv = f.inv(a).map_err(|e| e.to_string())?;
                ensure(f.mul(a, inv) == FieldElement::ONE, || {
                    format!("a * a^-1 != 1 for {a:x} (m={m})")
                })?;
            }
            for &b in &elems {
                ensure(f.mul(a, b) == r.mul(a, b), || {
                    format!("table product differs at m={m}")
                })?;
                ensure(f.mul(a, b) == f.mul(b, a), || {
                    format!("product not commutative at m={m}")
                })?;
            }
        }
    }
    Ok(())
}

fn key_identities(pk: &PublicKey, sk: &PrivateKey) -> Result<(), String> {
    let code = sk.code();
    let e = |e: crate::bitlinalg::LinalgError| e.to_string();
    ensure(
        code.generator()
            .mul(code.parity_check_transpose())
            .map_err(e)?
            .is_zero(),
        || "G H^T != 0".into(),
    )?;
    let sgp = sk
        .permutation()
        .apply_columns(&sk.scrambler().mul(code.generator()).map_err(e)?)
        .map_err(e)?;
    ensure(sgp == *pk.generator(), || "S G P != G'".into())?;
    ensure(
        pk.generator()
            .mul(pk.generator_inverse())
            .map_err(e)?
            .is_identity(),
        || "G' G'inv != I".into(),
    )?;
    ensure(
        code.generator()
            .mul(code.generator_inverse())
            .map_err(e)?
            .is_identity(),
        || "G Ginv != I".into(),
    )
}

fn exhaustive_decoding(sk: &PrivateKey) -> Result<(), String> {
    let code = sk.code();
    let n = code.n();
    let mut patterns = vec![BitVec::zeros(n)];
    for i in 0..n {
        patterns.push(BitVec::unit(n, i));
        for j in i + 1..n {
            let mut e = BitVec::unit(n, i);
            e.set(j, true);
            patterns.push(e);
        }
    }
    for e in patterns.iter().filter(|e| e.weight() <= code.t()) {
        let s = code.syndrome(e).map_err(|x| x.to_string())?;
        let d = code.decode(&s).map_err(|x| format!("error {e}: {x}"))?;
        ensure(d == *e, || format!("error {e} decoded as {d}"))?;
    }
    Ok(())
}

fn classical_roundtrips(
    pk: &PublicKey,
    sk: &PrivateKey,
    messages: &[BitVec],
    seed: u64,
) -> Result<(), String> {
    let mut rng = stream_rng(seed, Stream::Error);
    for m in messages {
        let ct = encrypt(pk, m, &mut rng).map_err(|e| e.to_string())?;
        let back = decrypt(sk, &ct).map_err(|e| format!("message {m}: {e}"))?;
        ensure(back == *m, || format!("message {m} decrypted as {back}"))?;
    }
    Ok(())
}

fn quantum_roundtrip(
    pk: &PublicKey,
    sk: &PrivateKey,
    k: usize,
    terms: usize,
    seed: u64,
) -> Result<(), String> {
    let mut rng = stream_rng(seed, Stream::Measurement);
    let psi = random_plaintext(k, terms, &mut rng).map_err(|e| e.to_string())?;
    let (ct, alice) = alice_encrypt(pk, &psi, &mut rng).map_err(|e| e.to_string())?;
    let (out, bob) = bob_decrypt(sk, &ct, &mut rng).map_err(|e| e.to_string())?;
    let fid = out.fidelity(&psi).map_err(|e| e.to_string())?;
    ensure((1.0 - fid).abs() <= 1e-12, || format!("fidelity {fid:.15}"))?;
    let e = alice.alice_error.expect("alice records her error");
    let expected = sk
        .permutation_inverse()
        .apply(&e)
        .map_err(|x| x.to_string())?;
    ensure(bob.recovered_error.as_ref() == Some(&expected), || {
        "recovered error is not e P^-1".into()
    })
}

/// Runs the suites for `level`. `fault` corrupts the private key first.
pub fn run(level: Level, fault: Option<Fault>) -> Report {
    let mut report = Report::default();
    report.run("field axioms m=2..8", field_axioms);

    if let Some((pk, sk)) = report.keygen(4, 16, 2, fault) {
        report.run("key identities m=4 n=16 t=2", || key_identities(&pk, &sk));
        report.run("exhaustive decoding m=4 n=16 t=2", || {
            exhaustive_decoding(&sk)
        });
        let all: Vec<BitVec> = (0..256).map(|v| BitVec::from_u64(v, 8)).collect();
        report.run("classical round trip, all messages", || {
            classical_roundtrips(&pk, &sk, &all, 1)
        });
        report.run("quantum round trip, basis states", || {
            let mut rng = stream_rng(2, Stream::Error);
            for m in &all {
                let psi =
                    plaintext_state(8, vec![(num_complex::Complex::new(1.0, 0.0), m.clone())])
                        .map_err(|e| e.to_string())?;
                let (ct, _) = alice_encrypt(&pk, &psi, &mut rng).map_err(|e| e.to_string())?;
                let (out, _) =
                    bob_decrypt(&sk, &ct, &mut rng).map_err(|e| format!("message {m}: {e}"))?;
                ensure(out == psi, || format!("basis state {m} not recovered"))?;
            }
            Ok(())
        });
        report.run("quantum round trip, 16-term superpositions", || {
            (0..20).try_for_each(|s| quantum_roundtrip(&pk, &sk, 8, 16, s))
        });
    }

    if level == Level::Full {
        if let Some((pk, sk)) = report.keygen(10, 1024, 50, fault) {
            report.run("key identities m=10 n=1024 t=50", || {
                key_identities(&pk, &sk)
            });
            report.run("classical round trip m=10 n=1024 t=50", || {
                let mut rng = stream_rng(3, Stream::Error);
                let msgs: Vec<BitVec> = (0..20).map(|_| BitVec::random(pk.k(), &mut rng)).collect();
                classical_roundtrips(&pk, &sk, &msgs, 3)
            });
            report.run("quantum round trip m=10 n=1024 t=50, 8 terms", || {
                (0..3).try_for_each(|s| quantum_roundtrip(&pk, &sk, pk.k(), 8, s))
            });
            report.run("unscrambler is inverse m=10", || {
                ensure(
                    sk.scrambler()
                        .mul(sk.scrambler_inverse())
                        .map_err(|e| e.to_string())?
                        == BitMatrix::identity(pk.k()),
                    || "S Sinv != I".into(),
                )
            });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_passes() {
        let report = run(Level::Quick, None);
        assert!(report.all_passed(), "{report}");
        assert!(report.checks.len() >= 6);
    }

    #[test]
    fn flipped_parity_bit_is_named() {
        let report = run(Level::Quick, Some(Fault::FlipParityBit { row: 0, col: 0 }));
        assert!(!report.all_passed());
        let failed: Vec<_> = report.failures().map(|c| c.name.as_str()).collect();
        assert!(
            failed.contains(&"key identities m=4 n=16 t=2"),
            "{failed:?}"
        );
        assert!(report
            .summary()
            .contains("FAIL key identities m=4 n=16 t=2: G H^T != 0"));
    }

    #[test]
    fn fault_outside_matrix_is_reported() {
        let report = run(Level::Quick, Some(Fault::FlipParityBit { row: 99, col: 0 }));
        assert!(!report.all_passed());
    }
}
