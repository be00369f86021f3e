//! `qpkc`: key generation, classical encryption and quantum-state round trips.
//!
//! Exit codes: 0 success, 1 usage, 2 bad data or file format, 3 cryptographic
//! or decoding failure (including a failed self-test).

mod terms;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use qpkc::gf2m::{FieldParams, MAX_DEGREE};
use qpkc::mceliece::{decrypt, encrypt, keygen};
use qpkc::protocol::{run_roundtrip, MSG};
use qpkc::qsim::RegisterLayout;
use qpkc::seed::{stream_rng, Stream};
use qpkc::selftest::{self, Fault, Level};
use qpkc::{BitVec, PrivateKey, PublicKey, SparseState};

#[derive(Parser)]
#[command(
    name = "qpkc",
    version,
    about = "McEliece encryption of classical and quantum messages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair and write both key files.
    Keygen {
        #[command(flatten)]
        params: Params,
        #[arg(long = "pub", value_name = "PATH")]
        public: PathBuf,
        #[arg(long = "priv", value_name = "PATH")]
        private: PathBuf,
    },
    /// Encrypt a k-bit message with a public key.
    Encrypt {
        #[arg(long = "pub", value_name = "PATH")]
        public: PathBuf,
        #[arg(long, value_name = "BITS")]
        msg: String,
        #[arg(long)]
        seed: u64,
    },
    /// Decrypt an n-bit ciphertext with a private key.
    Decrypt {
        #[arg(long = "priv", value_name = "PATH")]
        private: PathBuf,
        #[arg(long, value_name = "BITS")]
        ct: String,
    },
    /// Encrypt and decrypt a superposition, printing the step trace.
    Qdemo {
        #[command(flatten)]
        params: Params,
        /// Comma-separated `amplitude:bits` terms, e.g. `0.6:00000001,0.8j:00000010`.
        #[arg(
            long,
            conflicts_with = "state_in",
            required_unless_present = "state_in"
        )]
        terms: Option<String>,
        /// Read the plaintext from a state file instead of --terms.
        #[arg(long, value_name = "PATH")]
        state_in: Option<PathBuf>,
        /// Write the decrypted state to a state file.
        #[arg(long, value_name = "PATH")]
        state_out: Option<PathBuf>,
        /// Write the ciphertext state to a state file.
        #[arg(long, value_name = "PATH")]
        ct_out: Option<PathBuf>,
        /// Also print per-step timings.
        #[arg(long)]
        timings: bool,
    },
    /// Run the built-in property suites.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Flip bit ROW,COL of the private parity-check matrix first.
        #[arg(long, hide = true, value_name = "ROW,COL")]
        inject_fault: Option<String>,
    },
}

#[derive(clap::Args)]
struct Params {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

enum Failure {
    Usage(anyhow::Error),
    Data(anyhow::Error),
    Crypto(anyhow::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Crypto(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Usage(e) | Failure::Data(e) | Failure::Crypto(e) => e,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(anyhow!(msg.into()))
}

impl Params {
    fn validate(&self) -> Result<FieldParams, Failure> {
        if !(2..=MAX_DEGREE).contains(&self.m) {
            return Err(usage(format!("--m must be between 2 and {MAX_DEGREE}")));
        }
        if self.n > 1usize << self.m {
            return Err(usage(format!(
                "--n must be at most 2^m = {}",
                1usize << self.m
            )));
        }
        if self.t == 0 {
            return Err(usage("--t must be at least 1"));
        }
        if self.m as usize * self.t >= self.n {
            return Err(usage("need m*t < n so that k = n - m*t is positive"));
        }
        FieldParams::with_default_modulus(self.m).map_err(|e| usage(e.to_string()))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Data)
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text)
        .with_context(|| format!("cannot write {}", path.display()))
        .map_err(Failure::Data)
}

fn load_public(path: &Path) -> Result<PublicKey, Failure> {
    PublicKey::from_text(&read(path)?)
        .with_context(|| format!("invalid public key {}", path.display()))
        .map_err(Failure::Data)
}

fn load_private(path: &Path) -> Result<PrivateKey, Failure> {
    PrivateKey::from_text(&read(path)?)
        .with_context(|| format!("invalid private key {}", path.display()))
        .map_err(Failure::Data)
}

fn parse_bits(what: &str, s: &str, expected: usize) -> Result<BitVec, Failure> {
    let v = BitVec::parse_bits(s).map_err(|e| usage(format!("--{what}: {e}")))?;
    if v.len() != expected {
        return Err(Failure::Data(anyhow!(
            "--{what} has {} bits, the key needs {expected}",
            v.len()
        )));
    }
    Ok(v)
}

fn fingerprint(pk: &PublicKey) -> String {
    let digest = Sha256::digest(pk.to_text().as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn cmd_keygen(params: Params, public: &Path, private: &Path) -> Outcome {
    let field = params.validate()?;
    let (pk, sk) = keygen(field, params.n, params.t, params.seed)
        .context("key generation failed")
        .map_err(Failure::Crypto)?;
    write(public, &pk.to_text())?;
    write(private, &sk.to_text())?;
    println!("n={} k={} t={}", pk.n(), pk.k(), pk.t());
    println!("fingerprint sha256:{}", fingerprint(&pk));
    Ok(())
}

fn cmd_encrypt(public: &Path, msg: &str, seed: u64) -> Outcome {
    let pk = load_public(public)?;
    let m = parse_bits("msg", msg, pk.k())?;
    let ct = encrypt(&pk, &m, &mut stream_rng(seed, Stream::Error))
        .map_err(|e| Failure::Crypto(e.into()))?;
    println!("{ct}");
    Ok(())
}

fn cmd_decrypt(private: &Path, ct: &str) -> Outcome {
    let sk = load_private(private)?;
    let c = parse_bits("ct", ct, sk.n())?;
    let m = decrypt(&sk, &c)
        .context("decryption failed")
        .map_err(Failure::Crypto)?;
    println!("{m}");
    Ok(())
}

struct QdemoArgs {
    params: Params,
    terms: Option<String>,
    state_in: Option<PathBuf>,
    state_out: Option<PathBuf>,
    ct_out: Option<PathBuf>,
    timings: bool,
}

fn cmd_qdemo(args: QdemoArgs) -> Outcome {
    let field = args.params.validate()?;
    let terms = match (&args.terms, &args.state_in) {
        (Some(spec), _) => terms::parse_terms(spec).map_err(Failure::Usage)?,
        (None, Some(path)) => {
            let state = SparseState::from_text(&read(path)?)
                .with_context(|| format!("invalid state file {}", path.display()))
                .map_err(Failure::Data)?;
            let regs = state.layout().registers();
            if regs.len() != 1 {
                return Err(Failure::Data(anyhow!(
                    "plaintext state must have a single register"
                )));
            }
            state.terms().map(|(k, a)| (*a, k.clone())).collect()
        }
        (None, None) => return Err(usage("give --terms or --state-in")),
    };

    // reject malformed plaintexts before generating any key
    let width = terms[0].1.len();
    let layout = RegisterLayout::single(MSG, width).map_err(|e| usage(e.to_string()))?;
    SparseState::from_keys(layout, terms.clone()).map_err(|e| usage(format!("plaintext: {e}")))?;
    let k = args.params.n - args.params.m as usize * args.params.t;
    if width != k {
        return Err(usage(format!("plaintext terms have {width} bits, k = {k}")));
    }

    let report = run_roundtrip(field, args.params.n, args.params.t, terms, args.params.seed)
        .context("round trip failed")
        .map_err(Failure::Crypto)?;
    print!("{report}");
    if args.timings {
        print!("{}", report.timing_report());
    }
    if let Some(path) = &args.state_out {
        write(path, &report.recovered.to_text())?;
    }
    if let Some(path) = &args.ct_out {
        write(path, &report.ciphertext.to_text())?;
    }
    Ok(())
}

fn parse_fault(spec: &str) -> Result<Fault, Failure> {
    let (r, c) = spec
        .split_once(',')
        .ok_or_else(|| usage("--inject-fault expects ROW,COL"))?;
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage("--inject-fault expects ROW,COL"))
    };
    Ok(Fault::FlipParityBit {
        row: num(r)?,
        col: num(c)?,
    })
}

fn cmd_selftest(level: LevelArg, inject_fault: Option<String>) -> Outcome {
    let fault = inject_fault.as_deref().map(parse_fault).transpose()?;
    let level = match level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let report = selftest::run(level, fault);
    print!("{}", report.summary());
    if level == Level::Full {
        print!("{}", report.timings());
    }
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Crypto(anyhow!(
            "self-test failed: {}",
            failed.join(", ")
        )))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Keygen {
            params,
            public,
            private,
        } => cmd_keygen(params, &public, &private),
        Command::Encrypt { public, msg, seed } => cmd_encrypt(&public, &msg, seed),
        Command::Decrypt { private, ct } => cmd_decrypt(&private, &ct),
        Command::Qdemo {
            params,
            terms,
            state_in,
            state_out,
            ct_out,
            timings,
        } => cmd_qdemo(QdemoArgs {
            params,
            terms,
            state_in,
            state_out,
            ct_out,
            timings,
        }),
        Command::Selftest {
            level,
            inject_fault,
        } => cmd_selftest(level, inject_fault),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.exit_code())
        }
    }
}
