//! The law of a single site operator `A^+ + A^- + λA^∘`.
//!
//! Its moments `a_p(λ)` count partitions whose pairs are all outer and whose
//! singletons are all inner, satisfy `a_p = λ a_{p-1} + a_{p-2}` and are the
//! vacuum entry of the `p`-th power of `[[0, 1], [1, λ]]`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use super::poly::RationalPolynomial;
use crate::error::{Error, Result};
use crate::partitions;

pub fn appendix_a_partitions(p: usize) -> RationalPolynomial {
    if p == 0 {
        return RationalPolynomial::one();
    }
    let mut out = RationalPolynomial::zero();
    for pi in partitions::enumerate_outer_pair_inner_singleton(p) {
        out.add_term(pi.num_singletons() as u32, BigRational::one());
    }
    out
}

pub fn appendix_a_recursion(p: usize) -> RationalPolynomial {
    let lambda = RationalPolynomial::lambda();
    let (mut prev, mut cur) = (RationalPolynomial::one(), RationalPolynomial::zero());
    if p == 0 {
        return prev;
    }
    for _ in 2..=p {
        let next = &(&lambda * &cur) + &prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn appendix_a_transfer(p: usize) -> RationalPolynomial {
    type Mat = [[RationalPolynomial; 2]; 2];
    fn mul(a: &Mat, b: &Mat) -> Mat {
        let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }
    let zero = RationalPolynomial::zero;
    let one = RationalPolynomial::one;
    let step: Mat = [[zero(), one()], [one(), RationalPolynomial::lambda()]];
    let mut acc: Mat = [[one(), zero()], [zero(), one()]];
    for _ in 0..p {
        acc = mul(&acc, &step);
    }
    let [[vac, _], _] = acc;
    vac
}

/// `a_p(λ)`, checked three ways.
pub fn appendix_a(p: usize) -> Result<RationalPolynomial> {
    let a = appendix_a_partitions(p);
    let b = appendix_a_recursion(p);
    let c = appendix_a_transfer(p);
    if a != b || b != c {
        return Err(Error::OracleMismatch(format!(
            "a_{p}: partitions {a}, recursion {b}, transfer matrix {c}"
        )));
    }
    Ok(a)
}

/// `ν_λ = p_1 δ_{x_1} + p_2 δ_{x_2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoAtomMeasure {
    pub x1: f64,
    pub x2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl TwoAtomMeasure {
    pub fn moment(&self, p: u32) -> f64 {
        self.p1 * self.x1.powi(p as i32) + self.p2 * self.x2.powi(p as i32)
    }
}

pub fn appendix_measure(lambda: f64) -> Result<TwoAtomMeasure> {
    if !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("λ = {lambda}")));
    }
    let r = (lambda * lambda + 4.0).sqrt();
    let p1 = 0.5 - lambda / (2.0 * r);
    Ok(TwoAtomMeasure {
        x1: lambda / 2.0 + r / 2.0,
        x2: lambda / 2.0 - r / 2.0,
        p1,
        p2: 1.0 - p1,
    })
}

fn check_pole(function: &str, x: Complex64, den: Complex64) -> Result<()> {
    if den.norm() <= 1e-12 * (1.0 + x.norm_sqr()) {
        return Err(Error::Pole { function: function.to_string(), location: format!("{x}") });
    }
    Ok(())
}

/// `M_λ(x) = (1 - λx) / (1 - λx - x^2)`.
pub fn mgf(lambda: f64, x: Complex64) -> Result<Complex64> {
    let den = 1.0 - lambda * x - x * x;
    check_pole("M", x, den)?;
    Ok((1.0 - lambda * x) / den)
}

/// `G_λ(x) = (x - 1) / (x^2 - λx - 1)`, as printed.
///
/// This is not `M_λ(1/x)/x`, which would put `x - λ` in the numerator; the
/// two agree only at `λ = 1`.
pub fn ctr(lambda: f64, x: Complex64) -> Result<Complex64> {
    let den = x * x - lambda * x - 1.0;
    check_pole("G", x, den)?;
    Ok((x - 1.0) / den)
}

pub fn mgf_real(lambda: f64, x: f64) -> Result<f64> {
    mgf(lambda, Complex64::new(x, 0.0)).map(|z| z.re)
}

pub fn ctr_real(lambda: f64, x: f64) -> Result<f64> {
    ctr(lambda, Complex64::new(x, 0.0)).map(|z| z.re)
}

/// First `n` Taylor coefficients of `M_λ` at 0, by power-series division.
pub fn mgf_series(lambda: f64, n: usize) -> Vec<f64> {
    let num = [1.0, -lambda];
    let den = [1.0, -lambda, -1.0];
    let mut c: Vec<f64> = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = num.get(k).copied().unwrap_or(0.0);
        for j in 1..den.len().min(k + 1) {
            v -= den[j] * c[k - j];
        }
        c.push(v / den[0]);
    }
    c
}
