//! Text key files.
//!
//! Public key:
//!
//! ```text
//! QPKC-PUB v1
//! n=<n> k=<k> t=<t>
//! <k rows of G', n bits each>
//! GINV
//! <n rows of G'^-, k bits each>
//! ```
//!
//! Private key (derived matrices are rebuilt and re-verified on load):
//!
//! ```text
//! QPKC-PRIV v1
//! m=<m> modulus=0x<hex> n=<n> k=<k> t=<t>
//! L: <n hex field elements>
//! g: <t+1 hex coefficients, z^0 first>
//! S:
//! <k rows of S, k bits each>
//! P: <n decimal indices>
//! ```
//!
//! Bit strings put vector index 0 leftmost. Every line ends in `\n`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{McElieceError, PrivateKey, PublicKey};
use crate::bitlinalg::{BitMatrix, BitVec, Permutation};
use crate::gf2m::{FieldElement, FieldParams, FieldPoly};
use crate::goppa::GoppaCode;

pub const PUBLIC_HEADER: &str = "QPKC-PUB v1";
pub const PRIVATE_HEADER: &str = "QPKC-PRIV v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("expected header {expected:?}, found {found:?}")]
    Header {
        expected: &'static str,
        found: String,
    },
    #[error("unexpected end of file, expected {0}")]
    Truncated(&'static str),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("trailing content at line {0}")]
    Trailing(usize),
    #[error("loaded key fails verification: {0}")]
    Invariant(#[from] McElieceError),
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next(&mut self, what: &'static str) -> Result<&'a str, FormatError> {
        let (i, line) = self.inner.next().ok_or(FormatError::Truncated(what))?;
        self.last = i + 1;
        Ok(line)
    }

    fn err(&self, message: impl Into<String>) -> FormatError {
        FormatError::Malformed {
            line: self.last,
            message: message.into(),
        }
    }

    fn finish(mut self) -> Result<(), FormatError> {
        match self.inner.find(|(_, l)| !l.trim().is_empty()) {
            Some((i, _)) => Err(FormatError::Trailing(i + 1)),
            None => Ok(()),
        }
    }

    fn bits(&mut self, what: &'static str, len: usize) -> Result<BitVec, FormatError> {
        let line = self.next(what)?;
        let v = BitVec::parse_bits(line.trim()).map_err(|e| self.err(e.to_string()))?;
        if v.len() != len {
            return Err(self.err(format!("{what}: expected {len} bits, found {}", v.len())));
        }
        Ok(v)
    }

    fn matrix(
        &mut self,
        what: &'static str,
        rows: usize,
        cols: usize,
    ) -> Result<BitMatrix, FormatError> {
        let data = (0..rows)
            .map(|_| self.bits(what, cols))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitMatrix::from_rows(cols, data).expect("row widths checked"))
    }

    /// `label` followed by whitespace-separated tokens on the same line.
    fn labeled(&mut self, what: &'static str, label: &str) -> Result<Vec<&'a str>, FormatError> {
        let line = self.next(what)?;
        let rest = line
            .strip_prefix(label)
            .ok_or_else(|| self.err(format!("expected {label:?}")))?;
        Ok(rest.split_whitespace().collect())
    }
}

/// Parses `key=value` pairs in the given order.
fn parse_fields<'a>(
    lines: &Lines<'_>,
    line: &'a str,
    keys: &[&str],
) -> Result<Vec<&'a str>, FormatError> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != keys.len() {
        return Err(lines.err(format!("expected fields {keys:?}")));
    }
    tokens
        .iter()
        .zip(keys)
        .map(|(tok, key)| {
            tok.strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| lines.err(format!("expected {key}=<value>, found {tok:?}")))
        })
        .collect()
}

fn parse_usize(lines: &Lines<'_>, s: &str) -> Result<usize, FormatError> {
    s.parse()
        .map_err(|_| lines.err(format!("invalid integer {s:?}")))
}

fn parse_hex(lines: &Lines<'_>, s: &str) -> Result<u32, FormatError> {
    let digits = s.strip_prefix("0x").unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|_| lines.err(format!("invalid hex value {s:?}")))
}

fn push_matrix(out: &mut String, m: &BitMatrix) {
    for row in m.row_iter() {
        out.push_str(&row.to_bit_string());
        out.push('\n');
    }
}

fn expect_header(lines: &mut Lines<'_>, header: &'static str) -> Result<(), FormatError> {
    let found = lines.next("header")?;
    if found.trim_end() != header {
        return Err(FormatError::Header {
            expected: header,
            found: found.to_string(),
        });
    }
    Ok(())
}

impl PublicKey {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{PUBLIC_HEADER}");
        let _ = writeln!(out, "n={} k={} t={}", self.n(), self.k(), self.t());
        push_matrix(&mut out, &self.gpub);
        out.push_str("GINV\n");
        push_matrix(&mut out, &self.gpub_inv);
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        let mut lines = Lines::new(text);
        expect_header(&mut lines, PUBLIC_HEADER)?;
        let dims = lines.next("dimensions")?;
        let f = parse_fields(&lines, dims, &["n", "k", "t"])?;
        let (n, k, t) = (
            parse_usize(&lines, f[0])?,
            parse_usize(&lines, f[1])?,
            parse_usize(&lines, f[2])?,
        );
        if k == 0 || k >= n {
            return Err(lines.err("need 0 < k < n"));
        }
        let gpub = lines.matrix("G' row", k, n)?;
        if lines.next("GINV marker")?.trim_end() != "GINV" {
            return Err(lines.err("expected GINV"));
        }
        let gpub_inv = lines.matrix("G'^- row", n, k)?;
        lines.finish()?;
        if gpub.rank() != k {
            return Err(McElieceError::Invariant("G' is not full row rank").into());
        }
        Ok(PublicKey::new(t, gpub, gpub_inv)?)
    }
}

impl PrivateKey {
    pub fn to_text(&self) -> String {
        let code = &self.code;
        let field = code.field();
        let mut out = String::new();
        let _ = writeln!(out, "{PRIVATE_HEADER}");
        let _ = writeln!(
            out,
            "m={} modulus={:#x} n={} k={} t={}",
            field.degree(),
            field.modulus(),
            code.n(),
            code.k(),
            code.t()
        );
        let support: Vec<String> = code.support().iter().map(|a| format!("{a:x}")).collect();
        let _ = writeln!(out, "L: {}", support.join(" "));
        let g: Vec<String> = (0..=code.t())
            .map(|i| format!("{:x}", code.goppa_poly().coeff(i)))
            .collect();
        let _ = writeln!(out, "g: {}", g.join(" "));
        out.push_str("S:\n");
        push_matrix(&mut out, &self.scrambler);
        let perm: Vec<String> = self.perm.map().iter().map(usize::to_string).collect();
        let _ = writeln!(out, "P: {}", perm.join(" "));
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FormatError> {
        let mut lines = Lines::new(text);
        expect_header(&mut lines, PRIVATE_HEADER)?;
        let dims = lines.next("parameters")?;
        let f = parse_fields(&lines, dims, &["m", "modulus", "n", "k", "t"])?;
        let m = parse_usize(&lines, f[0])? as u32;
        let modulus = parse_hex(&lines, f[1])?;
        let (n, k, t) = (
            parse_usize(&lines, f[2])?,
            parse_usize(&lines, f[3])?,
            parse_usize(&lines, f[4])?,
        );
        let field = FieldParams::new(m, modulus).map_err(|e| lines.err(e.to_string()))?;

        let support_tokens = lines.labeled("support", "L:")?;
        if support_tokens.len() != n {
            return Err(lines.err(format!(
                "expected {n} support elements, found {}",
                support_tokens.len()
            )));
        }
        let support = support_tokens
            .iter()
            .map(|s| {
                let v = parse_hex(&lines, s)?;
                field.element(v).map_err(|e| lines.err(e.to_string()))
            })
            .collect::<Result<Vec<FieldElement>, _>>()?;

        let g_tokens = lines.labeled("Goppa polynomial", "g:")?;
        if g_tokens.len() != t + 1 {
            return Err(lines.err(format!(
                "expected {} coefficients, found {}",
                t + 1,
                g_tokens.len()
            )));
        }
        let coeffs = g_tokens
            .iter()
            .map(|s| {
                let v = parse_hex(&lines, s)?;
                field.element(v).map_err(|e| lines.err(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let goppa_poly = FieldPoly::from_coeffs(coeffs);
        if goppa_poly.degree() != Some(t) {
            return Err(lines.err("Goppa polynomial degree differs from t"));
        }

        if lines.next("S marker")?.trim_end() != "S:" {
            return Err(lines.err("expected S:"));
        }
        let scrambler = lines.matrix("S row", k, k)?;

        let perm_tokens = lines.labeled("permutation", "P:")?;
        let map = perm_tokens
            .iter()
            .map(|s| parse_usize(&lines, s))
            .collect::<Result<Vec<_>, _>>()?;
        if map.len() != n {
            return Err(lines.err(format!("expected {n} indices, found {}", map.len())));
        }
        let perm = Permutation::from_map(map).map_err(|e| lines.err(e.to_string()))?;
        lines.finish()?;

        let code =
            GoppaCode::from_parts(field, support, goppa_poly).map_err(McElieceError::from)?;
        if code.k() != k {
            return Err(McElieceError::Invariant("k differs from n - m*t").into());
        }
        if !code
            .generator()
            .mul(code.parity_check_transpose())
            .map_err(McElieceError::from)?
            .is_zero()
        {
            return Err(McElieceError::Invariant("G H^T != 0").into());
        }
        let sk = PrivateKey::new(code, scrambler, perm)?;
        if !sk
            .scrambler
            .mul(&sk.scrambler_inv)
            .map_err(McElieceError::from)?
            .is_identity()
        {
            return Err(McElieceError::Invariant("S S^-1 != I").into());
        }
        Ok(sk)
    }
}
