//! Integer polynomials and rational functions in one variable z, and the closed forms of
//! Poincaré series.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Polynomial in z with integer coefficients, ascending powers, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|c| BigInt::from(*c)).collect())
    }

    pub fn from_usize(coeffs: &[usize]) -> Self {
        Self::new(coeffs.iter().map(|c| BigInt::from(*c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// 1 + z
    pub fn one_plus_z() -> Self {
        Self::from_i64(&[1, 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Multiplication by z^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    /// gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c)
    }

    /// Exact quotient by `d` when `d` divides `self` in Z[z].
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = rational_divmod(&to_rational(self), &to_rational(d));
        if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(Self::new(q.iter().map(|c| c.to_integer()).collect()))
    }

    /// Text such as `1-z-12z^2`.
    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if neg {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".into(),
                _ => format!("z^{k}"),
            };
            if k == 0 || !abs.is_one() {
                s.push_str(&abs.to_string());
            }
            s.push_str(&mono);
        }
        s
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

fn to_rational(p: &IntPolynomial) -> Vec<BigRational> {
    p.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim_r(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn rational_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim_r(b.to_vec());
    let mut r = trim_r(a.to_vec());
    let lead = b.last().expect("division by zero polynomial").clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &c * bc;
        }
        q[k] = c;
        r = trim_r(r);
    }
    (trim_r(q), r)
}

/// Primitive gcd in Z[z] with positive leading coefficient.
fn poly_gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    let (mut x, mut y) = (to_rational(a), to_rational(b));
    while !trim_r(y.clone()).is_empty() {
        let (_, r) = rational_divmod(&x, &y);
        x = y;
        y = r;
    }
    let x = trim_r(x);
    if x.is_empty() {
        return IntPolynomial::zero();
    }
    let den_lcm = x.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints = IntPolynomial::new(x.iter().map(|c| (c * BigRational::from_integer(den_lcm.clone())).to_integer()).collect());
    let content = ints.content();
    let mut g = IntPolynomial::new(ints.coeffs.iter().map(|c| c / &content).collect());
    if g.coeffs.last().unwrap().is_negative() {
        g = g.neg();
    }
    g
}

/// N(z)/D(z) in lowest terms, with D(0) > 0 and coprime contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionZ {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl RationalFunctionZ {
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self> {
        if den.coeff(0).is_zero() {
            return Err(Error::InvalidInput(format!("denominator {den} vanishes at z = 0")));
        }
        let g = poly_gcd(&num, &den);
        let (mut num, mut den) = if g.degree().unwrap_or(0) > 0 {
            (num.div_exact(&g).unwrap_or(num), den.div_exact(&g).unwrap_or(den))
        } else {
            (num, den)
        };
        let c = num.content().gcd(&den.content());
        if !c.is_one() && !c.is_zero() {
            num = IntPolynomial::new(num.coeffs.iter().map(|x| x / &c).collect());
            den = IntPolynomial::new(den.coeffs.iter().map(|x| x / &c).collect());
        }
        if den.coeff(0).is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Ok(RationalFunctionZ { num, den })
    }

    pub fn polynomial(p: IntPolynomial) -> Self {
        RationalFunctionZ { num: p, den: IntPolynomial::one() }
    }

    pub fn numerator(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("denominators with nonzero constant term")
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den)).expect("denominators with nonzero constant term")
    }

    /// Power-series coefficients of degrees 0..=d. Needs D(0) = 1.
    pub fn expand(&self, d: usize) -> Result<Vec<BigInt>> {
        if !self.den.coeff(0).is_one() {
            return Err(Error::InvalidInput(format!("expansion needs a denominator with constant term 1, got {}", self.den)));
        }
        let mut out: Vec<BigInt> = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let mut c = self.num.coeff(k);
            for i in 1..=k.min(self.den.coeffs.len().saturating_sub(1)) {
                c -= &self.den.coeffs[i] * &out[k - i];
            }
            out.push(c);
        }
        Ok(out)
    }

    /// Text such as `(1+z)^3/(1-z-12z^2)`; powers of 1+z in the numerator are factored out.
    pub fn format(&self) -> String {
        let mut rest = self.num.clone();
        let mut k = 0;
        let opz = IntPolynomial::one_plus_z();
        while !rest.is_zero() {
            match rest.div_exact(&opz) {
                Some(q) => {
                    rest = q;
                    k += 1;
                }
                None => break,
            }
        }
        let wrap = |p: &IntPolynomial| if p.coeffs.iter().filter(|c| !c.is_zero()).count() > 1 { format!("({p})") } else { p.to_string() };
        let num = match k {
            0 => self.num.to_string(),
            _ => {
                let factor = if k == 1 { "(1+z)".to_string() } else { format!("(1+z)^{k}") };
                if rest == IntPolynomial::one() {
                    factor
                } else if rest == IntPolynomial::one().neg() {
                    format!("-{factor}")
                } else {
                    format!("{factor}*{}", wrap(&rest))
                }
            }
        };
        if self.den == IntPolynomial::one() {
            num
        } else {
            format!("{num}/{}", wrap(&self.den))
        }
    }
}

impl fmt::Display for RationalFunctionZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl Serialize for RationalFunctionZ {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.format())
    }
}

/// Cross-multiplied equality.
pub fn rf_equal(f: &RationalFunctionZ, g: &RationalFunctionZ) -> bool {
    f.num.mul(&g.den) == g.num.mul(&f.den)
}

fn check_h(h: &IntPolynomial) -> Result<()> {
    if !h.coeff(0).is_one() {
        return Err(Error::InvalidInput(format!("the homology polynomial must have constant term 1, got {h}")));
    }
    Ok(())
}

/// (1+z)^n / (1 - z(h(z) - 1)).
pub fn golod_quotient_series(n: u32, h: &IntPolynomial) -> Result<RationalFunctionZ> {
    check_h(h)?;
    let den = IntPolynomial::one().sub(&h.sub(&IntPolynomial::one()).shift(1));
    RationalFunctionZ::new(IntPolynomial::one_plus_z().pow(n), den)
}

/// (1+z)^n / (1 - z(h(z) - 1) + a z^2 (1+z)^n).
pub fn golod_formula_series(n: u32, a: i64, h: &IntPolynomial) -> Result<RationalFunctionZ> {
    check_h(h)?;
    if a < 1 {
        return Err(Error::InvalidInput(format!("a must be at least 1, got {a}")));
    }
    let opz = IntPolynomial::one_plus_z().pow(n);
    let den = IntPolynomial::one().sub(&h.sub(&IntPolynomial::one()).shift(1)).add(&opz.shift(2).scale(&BigInt::from(a)));
    RationalFunctionZ::new(opz, den)
}

/// Series of k over a stretched ring: 1/(1 - vz) when r = v, else 1/(1 - vz + z^2).
pub fn stretched_series(v: i64, r: i64) -> Result<RationalFunctionZ> {
    if r < 1 || r > v {
        return Err(Error::InvalidInput(format!("need 1 <= r <= v, got v = {v}, r = {r}")));
    }
    let den = if r == v { IntPolynomial::from_i64(&[1, -v]) } else { IntPolynomial::from_i64(&[1, -v, 1]) };
    RationalFunctionZ::new(IntPolynomial::one(), den)
}
