//! `--terms` lists: `re+imj:bits,re+imj:bits,...`.

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex;
use qpkc::BitVec;

/// Parses one amplitude: `0.5`, `-0.5j`, `0.5+0.5j`, `1e-3-2i`.
fn parse_amplitude(s: &str) -> Result<Complex<f64>> {
    let c: Complex<f64> = s.parse().map_err(|_| anyhow!("bad amplitude {s:?}"))?;
    if !c.re.is_finite() || !c.im.is_finite() {
        bail!("amplitude {s:?} is not finite");
    }
    Ok(c)
}

pub fn parse_terms(spec: &str) -> Result<Vec<(Complex<f64>, BitVec)>> {
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (amp, bits) = item
            .rsplit_once(':')
            .ok_or_else(|| anyhow!("term {item:?} is not of the form amplitude:bits"))?;
        let amp = parse_amplitude(amp.trim())?;
        let bits = BitVec::parse_bits(bits.trim()).with_context(|| format!("term {item:?}"))?;
        out.push((amp, bits));
    }
    if out.is_empty() {
        bail!("no terms given");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn amplitude_forms() {
        assert_eq!(parse_amplitude("0.5").unwrap(), Complex::new(0.5, 0.0));
        assert_eq!(parse_amplitude("-0.5j").unwrap(), Complex::new(0.0, -0.5));
        assert_eq!(
            parse_amplitude("0.5+0.25j").unwrap(),
            Complex::new(0.5, 0.25)
        );
        assert_eq!(
            parse_amplitude("1e-3-2i").unwrap(),
            Complex::new(1e-3, -2.0)
        );
        assert!(parse_amplitude("abc").is_err());
        assert!(parse_amplitude("inf").is_err());
    }

    #[test]
    fn term_lists() {
        let t = parse_terms("0.6:0101, 0.8j:1100").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].0, Complex::new(0.0, 0.8));
        assert_eq!(t[1].1.to_bit_string(), "1100");
        assert!(parse_terms("").is_err());
        assert!(parse_terms("0.5").is_err());
        assert!(parse_terms("1:01x").is_err());
    }
}
