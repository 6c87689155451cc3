//! Limit moments `m_p(λ)` and their finite-index approximations.

mod appendix;
mod poly;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cones::{self, ConeDescriptor, ConePoint, Volume};
use crate::error::{Error, Result};
use crate::labellings::{self, Mode};
use crate::partitions::{self, Nesting, Partition};

pub use appendix::{
    appendix_a, appendix_a_partitions, appendix_a_recursion, appendix_a_transfer, appendix_measure,
    ctr, ctr_real, mgf, mgf_real, mgf_series, TwoAtomMeasure,
};
pub use poly::{parse_rational, RationalPolynomial};

/// `V(π)` for a noncrossing partition.
///
/// Every block `B` of the nesting forest gets the weight
/// `W(B) = γ_{|T_B|} · ∏ W(children)`, where `T_B` is the subtree below and
/// including `B`; `V` is the product of `W` over the outer blocks. A subtree
/// with one block has weight `γ_1 = 1`.
pub fn v_of(pi: &Partition, cone: &ConeDescriptor) -> Result<BigRational> {
    let nest = pi.structure()?;
    let gamma: Vec<BigRational> = (1..=pi.num_blocks().max(1))
        .map(|m| cones::gamma_closed(cone, m))
        .collect::<Result<_>>()?;
    fn weight(nest: &Nesting, v: usize, gamma: &[BigRational]) -> (BigRational, usize) {
        let mut w = BigRational::one();
        let mut size = 1;
        for &c in nest.children(v) {
            let (wc, sc) = weight(nest, c, gamma);
            w *= wc;
            size += sc;
        }
        (w * &gamma[size - 1], size)
    }
    Ok(nest
        .roots()
        .map(|r| weight(&nest, r, &gamma).0)
        .fold(BigRational::one(), |a, b| a * b))
}

/// `m_p(λ) = Σ λ^{s(π)} V(π̃)` over noncrossing partitions with pair and
/// inner singleton blocks.
pub fn moment_poly(p: usize, cone: &ConeDescriptor) -> Result<RationalPolynomial> {
    let mut out = RationalPolynomial::zero();
    for pi in partitions::enumerate_pair_inner_singleton(p) {
        out.add_term(pi.num_singletons() as u32, v_of(&pi.reduce(), cone)?);
    }
    Ok(out)
}

/// Even moments at `λ = 0`, computed from the recursion
/// `g_n = Σ_k γ_k g_{k-1} g_{n-k}` and from the sum of `V` over noncrossing
/// pair partitions of `[2n]`. Returns `(recursion, partition sum)`.
pub fn clt_moment(n: usize, cone: &ConeDescriptor) -> Result<(BigRational, BigRational)> {
    let mut g = vec![BigRational::one()];
    for m in 1..=n {
        let mut gm = BigRational::zero();
        for k in 1..=m {
            gm += cones::gamma_closed(cone, k)? * &g[k - 1] * &g[m - k];
        }
        g.push(gm);
    }
    let sum = if n == 0 {
        BigRational::one()
    } else {
        partitions::enumerate_pair(2 * n)?
            .iter()
            .map(|pi| v_of(pi, cone))
            .sum::<Result<BigRational>>()?
    };
    Ok((g.swap_remove(n), sum))
}

/// The vacuum moment `φ(S_ρ(λ)^p)` at a finite index, kept in factored form:
/// the coefficient of `λ^s` is `counts[s] / volume^{(p-s)/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMoment {
    pub p: usize,
    pub counts: BTreeMap<u32, u128>,
    pub volume: Volume,
}

impl FiniteMoment {
    /// Exact polynomial, available when the interval volume is rational.
    pub fn poly(&self) -> Option<RationalPolynomial> {
        let v = self.volume.as_exact()?;
        let mut out = RationalPolynomial::zero();
        for (&s, &n) in &self.counts {
            let half = (self.p - s as usize) / 2;
            let c = BigRational::from_integer(BigInt::from(n)) / num_traits::pow(v.clone(), half);
            out.add_term(s, c);
        }
        Some(out)
    }

    /// Coefficients as floating point numbers, for any volume.
    pub fn coeffs_f64(&self) -> BTreeMap<u32, f64> {
        let v = self.volume.to_f64();
        self.counts
            .iter()
            .map(|(&s, &n)| {
                let half = (self.p - s as usize) as f64 / 2.0;
                (s, n as f64 / v.powf(half))
            })
            .collect()
    }

    pub fn coeff_f64(&self, s: u32) -> f64 {
        self.coeffs_f64().get(&s).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.coeffs_f64()
            .iter()
            .map(|(&s, c)| c * lambda.powi(s as i32))
            .sum()
    }
}

impl fmt::Display for FiniteMoment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.poly() {
            return write!(f, "{p}");
        }
        let mut first = true;
        for (s, c) in self.coeffs_f64().iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match s {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·λ")?,
                _ => write!(f, "{c}·λ^{s}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `Σ_π λ^{s(π)} |strict labellings of π| / v(ρ)^{(p - s(π))/2}`.
pub fn finite_rho_moment(p: usize, cone: &ConeDescriptor, rho: &ConePoint) -> Result<FiniteMoment> {
    let volume = cones::euclid_volume(cone, rho)?;
    let mut counts: BTreeMap<u32, u128> = BTreeMap::new();
    for pi in partitions::enumerate_pair_inner_singleton(p) {
        let n = labellings::count_labellings(&pi, cone, rho, Mode::Strict)?;
        let slot = counts.entry(pi.num_singletons() as u32).or_insert(0);
        *slot = slot
            .checked_add(n)
            .ok_or_else(|| Error::Overflow(format!("moment p = {p}")))?;
    }
    counts.retain(|_, n| *n != 0);
    Ok(FiniteMoment { p, counts, volume })
}

/// Exact value of `c` as `f64`, for reporting.
pub fn to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cone(s: &str) -> ConeDescriptor {
        s.parse().unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn poly(terms: &[(u32, i64, i64)]) -> RationalPolynomial {
        RationalPolynomial::from_coeffs(terms.iter().map(|&(k, n, d)| (k, q(n, d))))
    }

    const FIFTEEN: &str = "{{1,15},{2},{3,9},{4,8},{5},{6},{7},{10,13},{11},{12},{14}}";

    #[test]
    fn v_examples() {
        let o2 = cone("orthant:2");
        assert_eq!(v_of(&part("{{1,2}}"), &o2).unwrap(), q(1, 1));
        assert_eq!(v_of(&Partition::empty(), &o2).unwrap(), q(1, 1));
        assert_eq!(v_of(&part("{{1,4},{2,3}}"), &o2).unwrap(), q(1, 4));
        let reduced = part(FIFTEEN).reduce();
        assert_eq!(reduced, part("{{1,8},{2,5},{3,4},{6,7}}"));
        assert_eq!(v_of(&reduced, &o2).unwrap(), q(1, 64));
        assert_eq!(v_of(&reduced, &cone("orthant:3")).unwrap(), q(1, 512));
        assert_eq!(v_of(&reduced, &cone("lorentz:2")).unwrap(), q(8, 5005));
        assert!(matches!(v_of(&part("{{1,3},{2,4}}"), &o2), Err(Error::Crossing(..))));
    }

    #[test]
    fn moment_tables() {
        let o2 = cone("orthant:2");
        assert_eq!(moment_poly(1, &o2).unwrap(), RationalPolynomial::zero());
        assert_eq!(moment_poly(2, &o2).unwrap(), RationalPolynomial::one());
        assert_eq!(moment_poly(3, &o2).unwrap(), RationalPolynomial::lambda());
        assert_eq!(moment_poly(4, &o2).unwrap(), poly(&[(2, 1, 1), (0, 5, 4)]));
        let l2 = cone("lorentz:2");
        assert_eq!(moment_poly(5, &l2).unwrap(), poly(&[(3, 1, 1), (1, 82, 35)]));
        assert_eq!(moment_poly(6, &l2).unwrap(), poly(&[(4, 1, 1), (2, 129, 35), (0, 443, 350)]));
        let o3 = cone("orthant:3");
        assert_eq!(moment_poly(6, &o3).unwrap(), poly(&[(4, 1, 1), (2, 15, 4), (0, 31, 24)]));
        // monotone case
        let o1 = cone("orthant:1");
        assert_eq!(moment_poly(4, &o1).unwrap(), poly(&[(2, 1, 1), (0, 3, 2)]));
        assert_eq!(moment_poly(5, &o1).unwrap(), poly(&[(3, 1, 1), (1, 7, 2)]));
        assert_eq!(moment_poly(6, &o1).unwrap(), poly(&[(4, 1, 1), (2, 6, 1), (0, 5, 2)]));
    }

    #[test]
    fn clt_values() {
        let want = [("orthant:1", q(5, 2)), ("orthant:2", q(59, 36)), ("orthant:3", q(31, 24)), ("lorentz:2", q(443, 350))];
        for (c, v) in want {
            let (rec, sum) = clt_moment(3, &cone(c)).unwrap();
            assert_eq!(rec, v, "{c}");
            assert_eq!(sum, v, "{c}");
        }
        assert_eq!(clt_moment(1, &cone("psd:2")).unwrap(), (q(1, 1), q(1, 1)));
        assert_eq!(clt_moment(0, &cone("psd:2")).unwrap(), (q(1, 1), q(1, 1)));
    }

    #[test]
    fn finite_examples() {
        let o1 = cone("orthant:1");
        let m = finite_rho_moment(4, &o1, &o1.parse_point("2").unwrap()).unwrap();
        assert_eq!(m.poly().unwrap(), poly(&[(2, 1, 1), (0, 5, 4)]));
        for n in [1i64, 3, 7, 20] {
            let m = finite_rho_moment(4, &o1, &ConePoint::Orthant(vec![n])).unwrap();
            assert_eq!(m.poly().unwrap().coeff(0), q(1, 1) + q(n - 1, 2 * n));
        }
        let l2 = cone("lorentz:2");
        let rho = l2.parse_point("3;0,0").unwrap();
        let m2 = finite_rho_moment(2, &l2, &rho).unwrap();
        assert!(m2.poly().is_none());
        let want = cones::interval_count(&l2, &rho).unwrap() as f64
            / cones::euclid_volume(&l2, &rho).unwrap().to_f64();
        assert!((m2.eval(0.7) - want).abs() < 1e-12);
    }
}
