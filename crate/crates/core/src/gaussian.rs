//! Exact complex numbers with rational real and imaginary parts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerators or denominators: fall back to scaled division.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ratios(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussianRational { re: rat(re.0, re.1), im: rat(im.0, im.1) }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::real(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::real(BigRational::one())
    }

    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|inv| self * &inv)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    /// Argument in `[0, π]` for numbers in the closed upper half plane, else in `(-π, π]`.
    pub fn arg(&self) -> f64 {
        if self.im.is_zero() {
            return if self.re.is_negative() { std::f64::consts::PI } else { 0.0 };
        }
        self.to_complex().arg()
    }

    /// Exact argument as a rational multiple of π, when it is one of the multiples of π/4.
    pub fn arg_in_pi(&self) -> Option<BigRational> {
        let (re, im) = (&self.re, &self.im);
        let q = |n, d| Some(rat(n, d));
        match (re.signum().to_i32().unwrap(), im.signum().to_i32().unwrap()) {
            (0, 0) => None,
            (1, 0) => q(0, 1),
            (-1, 0) => q(1, 1),
            (0, 1) => q(1, 2),
            (0, -1) => q(-1, 2),
            (sr, si) if re.abs() == im.abs() => match (sr, si) {
                (1, 1) => q(1, 4),
                (-1, 1) => q(3, 4),
                (-1, -1) => q(-3, 4),
                _ => q(-1, 4),
            },
            _ => None,
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_part = |im: &BigRational| if im.is_one() { String::new() } else { im.to_string() };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) if self.im == -BigRational::one() => write!(f, "-i"),
            (true, false) => write!(f, "{}i", im_part(&self.im)),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, im_part(&-self.im.clone())),
            (false, false) => write!(f, "{}+{}i", self.re, im_part(&self.im)),
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `p/q`, integers and finite decimals such as `-0.25`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) || (int_digits.is_empty() && frac.is_empty()) {
            return None;
        }
        let digits: BigInt = format!("{int_digits}{frac}").parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(digits, scale);
        return Some(if negative { -q } else { q });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

impl FromStr for GaussianRational {
    type Err = String;

    /// Accepts forms like `3/5+1/5i`, `-1+2*i`, `2i`, `-i`, `1/2`.
    fn from_str(text: &str) -> Result<Self, String> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || format!("cannot parse {text:?} as a Gaussian rational");
        if s.is_empty() {
            return Err(bad());
        }
        let Some(body) = s.strip_suffix('i') else {
            return parse_rational(&s).map(Self::real).ok_or_else(bad);
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-') && !body[..k].ends_with(['e', 'E', '/']))
            .map(|(k, _)| k)
            .next_back();
        let (re_text, im_text) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im_text {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => parse_rational(t).ok_or_else(bad)?,
        };
        let re = if re_text.is_empty() { BigRational::zero() } else { parse_rational(re_text).ok_or_else(bad)? };
        Ok(GaussianRational { re, im })
    }
}

impl TryFrom<String> for GaussianRational {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<GaussianRational> for String {
    fn from(z: GaussianRational) -> String {
        z.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn parses_the_usual_spellings() {
        assert_eq!(g("2i"), GaussianRational::from_ratios((0, 1), (2, 1)));
        assert_eq!(g("-1+2i"), GaussianRational::from_ratios((-1, 1), (2, 1)));
        assert_eq!(g("3/5+1/5i"), GaussianRational::from_ratios((3, 5), (1, 5)));
        assert_eq!(g("3/5 + 1/5*i"), g("3/5+1/5i"));
        assert_eq!(g("-1"), GaussianRational::from_ratios((-1, 1), (0, 1)));
        assert_eq!(g("-i"), GaussianRational::from_ratios((0, 1), (-1, 1)));
        assert_eq!(g("0.5-0.25i"), GaussianRational::from_ratios((1, 2), (-1, 4)));
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("abc".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["2i", "-1+2i", "3/5+1/5i", "-1", "1/5-2/5i", "i", "-i", "0"] {
            assert_eq!(g(s).to_string(), s);
            assert_eq!(g(&g(s).to_string()), g(s));
        }
    }

    #[test]
    fn field_operations_are_exact() {
        let z = g("3/5+1/5i");
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert!(GaussianRational::zero().inv().is_none());
        assert_eq!(&g("1+i") * &g("1-i"), g("2"));
        assert_eq!(g("i").arg_in_pi(), Some(rat(1, 2)));
        assert_eq!(g("-1+i").arg_in_pi(), Some(rat(3, 4)));
    }
}
