use super::{FieldElement, FieldError, FieldParams};

/// A dense polynomial over GF(2^m); `coeffs[i]` is the coefficient of `z^i`.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FieldPoly {
    coeffs: Vec<FieldElement>,
}

impl FieldPoly {
    pub fn zero() -> Self {
        FieldPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The monomial `c * z^d`.
    pub fn monomial(c: FieldElement, d: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; d + 1];
        coeffs[d] = c;
        Self::from_coeffs(coeffs)
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(FieldElement::ONE, 1)
    }

    /// `z + c`.
    pub fn linear(c: FieldElement) -> Self {
        Self::from_coeffs(vec![c, FieldElement::ONE])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FieldPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `z^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn add(&self, other: &FieldPoly) -> FieldPoly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c += s;
        }
        Self::from_coeffs(coeffs)
    }
}

/// Output of the extended Euclidean algorithm: `u*a + v*b = r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bezout {
    pub u: FieldPoly,
    pub v: FieldPoly,
    pub r: FieldPoly,
}

impl FieldParams {
    pub fn poly_scale(&self, a: &FieldPoly, c: FieldElement) -> FieldPoly {
        FieldPoly::from_coeffs(a.coeffs.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &FieldPoly, b: &FieldPoly) -> FieldPoly {
        if a.is_zero() || b.is_zero() {
            return FieldPoly::zero();
        }
        let mut out = vec![FieldElement::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] += self.mul(x, y);
            }
        }
        FieldPoly::from_coeffs(out)
    }

    /// Squares a polynomial; cross terms vanish in characteristic 2.
    pub fn poly_square(&self, a: &FieldPoly) -> FieldPoly {
        if a.is_zero() {
            return FieldPoly::zero();
        }
        let mut out = vec![FieldElement::ZERO; 2 * a.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            out[2 * i] = self.square(x);
        }
        FieldPoly::from_coeffs(out)
    }

    /// Horner evaluation.
    pub fn poly_eval(&self, f: &FieldPoly, x: FieldElement) -> FieldElement {
        f.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| self.mul(acc, x) + c)
    }

    /// Long division: returns `(q, r)` with `a = q*b + r` and `deg r < deg b`.
    pub fn poly_divmod(
        &self,
        a: &FieldPoly,
        b: &FieldPoly,
    ) -> Result<(FieldPoly, FieldPoly), FieldError> {
        let db = b.degree().ok_or(FieldError::ZeroPolynomialDivisor)?;
        let lead_inv = self.inv(b.leading())?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((FieldPoly::zero(), a.clone()));
        }
        let mut quot = vec![FieldElement::ZERO; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = self.mul(c, lead_inv);
            quot[i - db] = factor;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[i - db + j] += self.mul(factor, bj);
            }
        }
        rem.truncate(db);
        Ok((FieldPoly::from_coeffs(quot), FieldPoly::from_coeffs(rem)))
    }

    pub fn poly_rem(&self, a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly, FieldError> {
        // Remainder-only loop; skips building the quotient.
        let db = b.degree().ok_or(FieldError::ZeroPolynomialDivisor)?;
        let lead_inv = self.inv(b.leading())?;
        let mut rem = a.coeffs.clone();
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let factor = self.mul(c, lead_inv);
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[i - db + j] += self.mul(factor, bj);
            }
        }
        rem.truncate(db.min(rem.len()));
        Ok(FieldPoly::from_coeffs(rem))
    }

    pub fn poly_mulmod(
        &self,
        a: &FieldPoly,
        b: &FieldPoly,
        modulus: &FieldPoly,
    ) -> Result<FieldPoly, FieldError> {
        self.poly_rem(&self.poly_mul(a, b), modulus)
    }

    pub fn poly_sqmod(&self, a: &FieldPoly, modulus: &FieldPoly) -> Result<FieldPoly, FieldError> {
        self.poly_rem(&self.poly_square(a), modulus)
    }

    /// Extended Euclid on `(a, b)`, tracking `u*a + v*b = r` at every step.
    ///
    /// With `stop_deg = Some(d)` the first remainder of degree `<= d` (the
    /// zero polynomial counts) is returned; with `None` the loop runs to the
    /// gcd, i.e. the last nonzero remainder.
    pub fn poly_eea(
        &self,
        a: &FieldPoly,
        b: &FieldPoly,
        stop_deg: Option<usize>,
    ) -> Result<Bezout, FieldError> {
        if a.is_zero() && b.is_zero() {
            return Err(FieldError::BothZero);
        }
        let reached = |r: &FieldPoly| match (stop_deg, r.degree()) {
            (Some(_), None) => true,
            (Some(d), Some(dr)) => dr <= d,
            (None, _) => false,
        };
        let mut prev = Bezout {
            u: FieldPoly::one(),
            v: FieldPoly::zero(),
            r: a.clone(),
        };
        if reached(&prev.r) {
            return Ok(prev);
        }
        let mut cur = Bezout {
            u: FieldPoly::zero(),
            v: FieldPoly::one(),
            r: b.clone(),
        };
        loop {
            if reached(&cur.r) {
                return Ok(cur);
            }
            if cur.r.is_zero() {
                return Ok(prev);
            }
            let (q, r) = self.poly_divmod(&prev.r, &cur.r)?;
            let next = Bezout {
                u: prev.u.add(&self.poly_mul(&q, &cur.u)),
                v: prev.v.add(&self.poly_mul(&q, &cur.v)),
                r,
            };
            prev = std::mem::replace(&mut cur, next);
        }
    }

    pub fn poly_gcd(&self, a: &FieldPoly, b: &FieldPoly) -> Result<FieldPoly, FieldError> {
        Ok(self.poly_eea(a, b, None)?.r)
    }

    /// Inverse of `a` modulo `modulus`, or `DivisionByZero` when they share a
    /// nontrivial factor.
    pub fn poly_inv_mod(
        &self,
        a: &FieldPoly,
        modulus: &FieldPoly,
    ) -> Result<FieldPoly, FieldError> {
        let a = self.poly_rem(a, modulus)?;
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let Bezout { v, r, .. } = self.poly_eea(modulus, &a, Some(0))?;
        if r.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let scale = self.inv(r.leading())?;
        Ok(self.poly_scale(&v, scale))
    }

    /// Divides by `z + c`, returning `(quotient, remainder)` where the
    /// remainder is `f(c)`.
    pub fn poly_div_linear(&self, f: &FieldPoly, c: FieldElement) -> (FieldPoly, FieldElement) {
        let Some(d) = f.degree() else {
            return (FieldPoly::zero(), FieldElement::ZERO);
        };
        let mut quot = vec![FieldElement::ZERO; d];
        let mut carry = FieldElement::ZERO;
        for i in (0..=d).rev() {
            let acc = f.coeffs[i] + self.mul(carry, c);
            if i == 0 {
                return (FieldPoly::from_coeffs(quot), acc);
            }
            quot[i - 1] = acc;
            carry = acc;
        }
        unreachable!("loop returns at i == 0")
    }

    /// `h^(2^m) mod f`: the Frobenius map of GF(2^m)[z]/f.
    fn frobenius(&self, h: &FieldPoly, f: &FieldPoly) -> Result<FieldPoly, FieldError> {
        let mut x = h.clone();
        for _ in 0..self.degree() {
            x = self.poly_sqmod(&x, f)?;
        }
        Ok(x)
    }

    /// Rabin's test: `f` of degree `t` is irreducible over GF(q) iff
    /// `z^(q^t) = z mod f` and `gcd(z^(q^(t/d)) - z, f) = 1` for every prime
    /// `d | t`.
    pub fn poly_is_irreducible(&self, f: &FieldPoly) -> Result<bool, FieldError> {
        let t = match f.degree() {
            None | Some(0) => return Err(FieldError::ConstantPolynomial),
            Some(1) => return Ok(true),
            Some(t) => t,
        };
        let z = self.poly_rem(&FieldPoly::z(), f)?;
        let mut powers = Vec::with_capacity(t + 1);
        powers.push(z.clone());
        for i in 1..=t {
            let next = self.frobenius(&powers[i - 1], f)?;
            powers.push(next);
        }
        if powers[t] != z {
            return Ok(false);
        }
        for d in prime_factors(t) {
            let h = powers[t / d].add(&z);
            let g = self.poly_gcd(&h, f)?;
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Square root in GF(2^m)[z]/g for irreducible `g` of degree `t`:
    /// `u^(2^(m*t - 1)) mod g`.
    pub fn poly_sqrt_mod(&self, u: &FieldPoly, g: &FieldPoly) -> Result<FieldPoly, FieldError> {
        let t = g.degree().ok_or(FieldError::ZeroPolynomialDivisor)?;
        let mut x = self.poly_rem(u, g)?;
        for _ in 1..(self.degree() as usize * t) {
            x = self.poly_sqmod(&x, g)?;
        }
        Ok(x)
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
