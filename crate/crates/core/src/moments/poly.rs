use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A polynomial in `λ` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: BTreeMap<u32, BigRational>,
}

impl RationalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    /// `c λ^k`.
    pub fn monomial(k: u32, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    /// `λ`.
    pub fn lambda() -> Self {
        Self::monomial(1, BigRational::one())
    }

    pub fn from_coeffs<I: IntoIterator<Item = (u32, BigRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: u32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Coefficient of `λ^k`, zero if absent.
    pub fn coeff(&self, k: u32) -> BigRational {
        self.coeffs.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        let top = self.degree().unwrap_or(0);
        for k in (0..=top).rev() {
            acc = acc * x + self.coeff(k);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| c.to_f64().unwrap_or(f64::NAN) * x.powi(*k as i32))
            .sum()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|(k, a)| (*k, a * c)))
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for RationalPolynomial {
    type Output = RationalPolynomial;

    fn add(mut self, rhs: RationalPolynomial) -> RationalPolynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&RationalPolynomial> for RationalPolynomial {
    fn add_assign(&mut self, rhs: &RationalPolynomial) {
        for (k, c) in &rhs.coeffs {
            self.add_term(*k, c.clone());
        }
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let mut out = RationalPolynomial::zero();
        for (i, a) in &self.coeffs {
            for (j, b) in &rhs.coeffs {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

impl Mul for RationalPolynomial {
    type Output = RationalPolynomial;

    fn mul(self, rhs: RationalPolynomial) -> RationalPolynomial {
        &self * &rhs
    }
}

impl fmt::Display for RationalPolynomial {
    /// Highest power first: `λ^4 + 129/35·λ^2 + 443/350`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let var = match k {
                0 => String::new(),
                1 => "λ".to_string(),
                _ => format!("λ^{k}"),
            };
            if *k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{mag}·{var}")?;
            }
        }
        Ok(())
    }
}

/// Parses `"num/den"` or `"num"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(BigInt::from_str(n.trim()).ok()?, d))
        }
        None => Some(BigRational::from_integer(BigInt::from_str(s).ok()?)),
    }
}

impl Serialize for RationalPolynomial {
    /// `{"0": "443/350", "2": "129/35", "4": "1"}`
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|(k, c)| (k.to_string(), c.to_string()))
            .collect();
        map.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RationalPolynomial {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, String>::deserialize(de)?;
        let mut p = RationalPolynomial::zero();
        for (k, c) in map {
            let k = k.parse::<u32>().map_err(D::Error::custom)?;
            let c = parse_rational(&c).ok_or_else(|| D::Error::custom(format!("bad rational {c:?}")))?;
            p.add_term(k, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn table_m6() -> RationalPolynomial {
        RationalPolynomial::from_coeffs([(4, q(1, 1)), (2, q(129, 35)), (0, q(443, 350))])
    }

    #[test]
    fn display_forms() {
        assert_eq!(table_m6().to_string(), "λ^4 + 129/35·λ^2 + 443/350");
        assert_eq!(RationalPolynomial::zero().to_string(), "0");
        assert_eq!(RationalPolynomial::lambda().to_string(), "λ");
        let p = RationalPolynomial::from_coeffs([(3, q(1, 1)), (1, q(-82, 35))]);
        assert_eq!(p.to_string(), "λ^3 - 82/35·λ");
    }

    #[test]
    fn json_round_trip() {
        let json = serde_json::to_string(&table_m6()).unwrap();
        assert_eq!(json, r#"{"0":"443/350","2":"129/35","4":"1"}"#);
        let back: RationalPolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, table_m6());
        assert!(serde_json::from_str::<RationalPolynomial>(r#"{"0":"1/0"}"#).is_err());
    }

    #[test]
    fn arithmetic() {
        let l = RationalPolynomial::lambda();
        let one = RationalPolynomial::one();
        let sq = &(&l + &one) * &(&l + &one);
        assert_eq!(sq, RationalPolynomial::from_coeffs([(2, q(1, 1)), (1, q(2, 1)), (0, q(1, 1))]));
        assert_eq!(sq.eval(&q(1, 2)), q(9, 4));
        assert!((sq.eval_f64(0.5) - 2.25).abs() < 1e-15);
        let mut z = l.clone();
        z.add_term(1, q(-1, 1));
        assert!(z.is_zero() && z.degree().is_none());
        assert_eq!(sq.degree(), Some(2));
    }
}
