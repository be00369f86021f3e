//! Line-oriented state files.
//!
//! ```text
//! QSTATE v1
//! layout: msg:4
//! 7.0710678118654757e-1 0.0000000000000000e0 1000
//! 7.0710678118654757e-1 0.0000000000000000e0 0110
//! ```

use std::fmt::Write as _;

use num_complex::Complex;

use super::{Amplitude, RegisterLayout, State, StateError};
use crate::bitlinalg::BitVec;

pub const QSTATE_HEADER: &str = "QSTATE v1";

fn parse_err(line: usize, message: impl Into<String>) -> StateError {
    StateError::Parse {
        line,
        message: message.into(),
    }
}

impl<T: Amplitude> State<T> {
    /// Terms are written in ascending key order, so equal states produce
    /// identical text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(QSTATE_HEADER);
        out.push('\n');
        let _ = writeln!(out, "layout: {}", self.layout());
        for (key, a) in self.terms() {
            let _ = writeln!(out, "{:.16e} {:.16e} {}", a.re, a.im, key);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, StateError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, QSTATE_HEADER)) => {}
            Some((n, _)) => return Err(parse_err(n, format!("expected {QSTATE_HEADER:?}"))),
            None => return Err(parse_err(1, "empty input")),
        }
        let (n, layout_line) = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing layout line"))?;
        let spec = layout_line
            .strip_prefix("layout:")
            .ok_or_else(|| parse_err(n, "expected `layout:`"))?;
        let mut registers = Vec::new();
        for item in spec.split_whitespace() {
            let (name, width) = item
                .split_once(':')
                .ok_or_else(|| parse_err(n, format!("bad register {item:?}")))?;
            let width: usize = width
                .parse()
                .map_err(|_| parse_err(n, format!("bad width in {item:?}")))?;
            registers.push((name, width));
        }
        let layout = RegisterLayout::new(&registers)?;

        let mut terms = Vec::new();
        for (n, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [re, im, bits] = fields[..] else {
                return Err(parse_err(n, "expected `<re> <im> <bits>`"));
            };
            let num = |s: &str| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .and_then(T::from_f64)
                    .ok_or_else(|| parse_err(n, format!("bad amplitude {s:?}")))
            };
            let amp = Complex::new(num(re)?, num(im)?);
            let key = BitVec::parse_bits(bits).map_err(|e| parse_err(n, e.to_string()))?;
            terms.push((amp, key));
        }
        Self::from_keys(layout, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let layout = RegisterLayout::new(&[("msg", 3), ("code", 2)]).unwrap();
        let psi = State::<f64>::from_terms(
            layout,
            vec![
                (
                    Complex::new(h, 0.0),
                    vec![
                        BitVec::parse_bits("100").unwrap(),
                        BitVec::parse_bits("01").unwrap(),
                    ],
                ),
                (
                    Complex::new(0.0, -h),
                    vec![
                        BitVec::parse_bits("011").unwrap(),
                        BitVec::parse_bits("00").unwrap(),
                    ],
                ),
            ],
        )
        .unwrap();
        let text = psi.to_text();
        assert!(text.starts_with("QSTATE v1\nlayout: msg:3 code:2\n"));
        assert!(text.contains(" 10001\n"));
        let back = State::<f64>::from_text(&text).unwrap();
        assert_eq!(back, psi);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn malformed_files_rejected() {
        let ok = "QSTATE v1\nlayout: a:2\n1 0 01\n";
        assert!(State::<f64>::from_text(ok).is_ok());
        for bad in [
            "",
            "QSTATE v2\nlayout: a:2\n1 0 01\n",
            "QSTATE v1\n1 0 01\n",
            "QSTATE v1\nlayout: a:x\n1 0 01\n",
            "QSTATE v1\nlayout: a:2\n1 0\n",
            "QSTATE v1\nlayout: a:2\nnan 0 01\n",
            "QSTATE v1\nlayout: a:2\n1 0 0a\n",
        ] {
            assert!(
                matches!(State::<f64>::from_text(bad), Err(StateError::Parse { .. })),
                "{bad:?}"
            );
        }
        assert!(matches!(
            State::<f64>::from_text("QSTATE v1\nlayout: a:2\n1 0 011\n"),
            Err(StateError::WidthMismatch { .. })
        ));
        assert!(matches!(
            State::<f64>::from_text("QSTATE v1\nlayout: a:2\n1 0 01\n1 0 10\n"),
            Err(StateError::NotNormalized(_))
        ));
        assert_eq!(
            State::<f64>::from_text("QSTATE v1\nlayout: a:2\n"),
            Err(StateError::Empty)
        );
    }
}
