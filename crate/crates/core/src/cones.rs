//! Positive symmetric cones and their discrete index lattices.
//!
//! Three families are supported: the orthant `R_+^d`, the Lorentz light cone
//! in `R^{1+d}` for `d ∈ {1, 2}` and the cone of 2x2 positive semidefinite
//! matrices. Lattice points never include the apex: orthant coordinates start
//! at 1, Lorentz points have `t >= 1` and PSD points are nonzero.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConeFamily {
    Orthant,
    Lorentz,
    Psd,
}

/// A cone family together with its dimension parameter `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConeDescriptor {
    family: ConeFamily,
    dim: usize,
}

impl ConeDescriptor {
    pub fn new(family: ConeFamily, dim: usize) -> Result<Self> {
        let ok = match family {
            ConeFamily::Orthant => dim >= 1,
            ConeFamily::Lorentz => dim == 1 || dim == 2,
            ConeFamily::Psd => dim == 2,
        };
        if !ok {
            return Err(Error::UnsupportedCone(format!(
                "{}:{dim}",
                family_name(family)
            )));
        }
        Ok(ConeDescriptor { family, dim })
    }

    pub fn orthant(dim: usize) -> Result<Self> {
        Self::new(ConeFamily::Orthant, dim)
    }

    pub fn lorentz(dim: usize) -> Result<Self> {
        Self::new(ConeFamily::Lorentz, dim)
    }

    pub fn psd(dim: usize) -> Result<Self> {
        Self::new(ConeFamily::Psd, dim)
    }

    pub fn family(&self) -> ConeFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when interval volumes are rational (orthant and Lorentz `d = 1`).
    pub fn has_rational_volume(&self) -> bool {
        matches!(
            (self.family, self.dim),
            (ConeFamily::Orthant, _) | (ConeFamily::Lorentz, 1)
        )
    }

    /// Parses a point of this cone from its text form.
    pub fn parse_point(&self, s: &str) -> Result<ConePoint> {
        let bad = || Error::Parse(format!("cannot read {s:?} as a point of {self}"));
        let ints = |t: &str| -> Result<Vec<i64>> {
            t.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<i64>().map_err(|_| bad()))
                .collect()
        };
        let point = match self.family {
            ConeFamily::Orthant => {
                let v = ints(s)?;
                if v.len() != self.dim {
                    return Err(bad());
                }
                ConePoint::Orthant(v)
            }
            ConeFamily::Lorentz => {
                let (t, z) = s.split_once(';').ok_or_else(bad)?;
                let t = t.trim().parse::<i64>().map_err(|_| bad())?;
                let z = ints(z)?;
                if z.len() != self.dim {
                    return Err(bad());
                }
                ConePoint::Lorentz { t, z }
            }
            ConeFamily::Psd => {
                // "a,b,c" or the full matrix "a,b;b,c"
                let v: Vec<i64> = match s.split_once(';') {
                    Some((r1, r2)) => {
                        let (r1, r2) = (ints(r1)?, ints(r2)?);
                        if r1.len() != 2 || r2.len() != 2 || r1[1] != r2[0] {
                            return Err(bad());
                        }
                        vec![r1[0], r1[1], r2[1]]
                    }
                    None => ints(s)?,
                };
                if v.len() != 3 {
                    return Err(bad());
                }
                ConePoint::Psd { a: v[0], b: v[1], c: v[2] }
            }
        };
        self.check_member(&point)?;
        Ok(point)
    }

    /// True when `x` has this cone's shape and is a lattice point of it.
    pub fn contains(&self, x: &ConePoint) -> bool {
        self.fits(x) && x.in_cone()
    }

    fn fits(&self, x: &ConePoint) -> bool {
        match (self.family, x) {
            (ConeFamily::Orthant, ConePoint::Orthant(v)) => v.len() == self.dim,
            (ConeFamily::Lorentz, ConePoint::Lorentz { z, .. }) => z.len() == self.dim,
            (ConeFamily::Psd, ConePoint::Psd { .. }) => true,
            _ => false,
        }
    }

    pub(crate) fn check_member(&self, x: &ConePoint) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::PointOutsideCone { cone: self.to_string(), point: x.to_string() })
        }
    }

    fn check_shape(&self, x: &ConePoint) -> Result<()> {
        if self.fits(x) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("point {x} has the wrong shape for {self}")))
        }
    }
}

fn family_name(f: ConeFamily) -> &'static str {
    match f {
        ConeFamily::Orthant => "orthant",
        ConeFamily::Lorentz => "lorentz",
        ConeFamily::Psd => "psd",
    }
}

impl fmt::Display for ConeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", family_name(self.family), self.dim)
    }
}

impl FromStr for ConeDescriptor {
    type Err = Error;

    /// Parses `orthant:2`, `lorentz:1`, `psd:2`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, dim) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected family:dim, got {s:?}")))?;
        let family = match name.trim().to_ascii_lowercase().as_str() {
            "orthant" => ConeFamily::Orthant,
            "lorentz" => ConeFamily::Lorentz,
            "psd" => ConeFamily::Psd,
            other => return Err(Error::UnsupportedCone(other.to_string())),
        };
        let dim = dim
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("cone dimension {dim:?}: {e}")))?;
        ConeDescriptor::new(family, dim)
    }
}

/// A point of one of the cone lattices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConePoint {
    Orthant(Vec<i64>),
    Lorentz { t: i64, z: Vec<i64> },
    /// The symmetric matrix `[[a, b], [b, c]]`.
    Psd { a: i64, b: i64, c: i64 },
}

impl ConePoint {
    fn in_cone(&self) -> bool {
        match self {
            ConePoint::Orthant(v) => v.iter().all(|&x| x >= 1),
            ConePoint::Lorentz { t, z } => *t >= 1 && t * t >= norm2(z),
            ConePoint::Psd { a, b, c } => {
                *a >= 0 && *c >= 0 && a * c >= b * b && (*a, *b, *c) != (0, 0, 0)
            }
        }
    }

    /// `self ⪯ other`, assuming both points have the same shape.
    pub(crate) fn precedes(&self, other: &ConePoint) -> bool {
        match (self, other) {
            (ConePoint::Orthant(x), ConePoint::Orthant(y)) => {
                x.iter().zip(y).all(|(a, b)| a <= b)
            }
            (ConePoint::Lorentz { t: s, z: x }, ConePoint::Lorentz { t, z: y }) => {
                let dt = t - s;
                let dz: i64 = x.iter().zip(y).map(|(a, b)| (b - a) * (b - a)).sum();
                dt >= 0 && dt * dt >= dz
            }
            (ConePoint::Psd { a, b, c }, ConePoint::Psd { a: a2, b: b2, c: c2 }) => {
                let (da, db, dc) = (a2 - a, b2 - b, c2 - c);
                da >= 0 && dc >= 0 && da * dc >= db * db
            }
            _ => false,
        }
    }

    pub(crate) fn strictly_precedes(&self, other: &ConePoint) -> bool {
        self != other && self.precedes(other)
    }
}

fn norm2(z: &[i64]) -> i64 {
    z.iter().map(|x| x * x).sum()
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for ConePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConePoint::Orthant(v) => write!(f, "{}", join(v)),
            ConePoint::Lorentz { t, z } => write!(f, "{t};{}", join(z)),
            ConePoint::Psd { a, b, c } => write!(f, "{a},{b},{c}"),
        }
    }
}

/// `a ⪯ b` in the cone order: `b - a` lies in the closed cone.
pub fn leq(cone: &ConeDescriptor, a: &ConePoint, b: &ConePoint) -> Result<bool> {
    cone.check_shape(a)?;
    cone.check_shape(b)?;
    Ok(a.precedes(b))
}

/// `a ≺ b`: `a ⪯ b` and `a ≠ b`.
pub fn lt(cone: &ConeDescriptor, a: &ConePoint, b: &ConePoint) -> Result<bool> {
    Ok(a != b && leq(cone, a, b)?)
}

fn isqrt(n: i64) -> i64 {
    if n < 0 {
        -1
    } else {
        n.isqrt()
    }
}

/// Lattice points of `[0, ρ]`, apex excluded, in a fixed nested-loop order.
pub fn interval_lattice(cone: &ConeDescriptor, rho: &ConePoint) -> Result<Vec<ConePoint>> {
    cone.check_member(rho)?;
    let mut out = Vec::new();
    match rho {
        ConePoint::Orthant(r) => {
            let mut cur = vec![1i64; r.len()];
            loop {
                out.push(ConePoint::Orthant(cur.clone()));
                let mut k = r.len();
                loop {
                    if k == 0 {
                        return Ok(out);
                    }
                    k -= 1;
                    if cur[k] < r[k] {
                        cur[k] += 1;
                        break;
                    }
                    cur[k] = 1;
                }
            }
        }
        ConePoint::Lorentz { t: rt, z: rz } => {
            for t in 1..=*rt {
                let gap = rt - t;
                let ranges: Vec<(i64, i64)> = rz
                    .iter()
                    .map(|&c| ((-t).max(c - gap), t.min(c + gap)))
                    .collect();
                if ranges.iter().any(|(lo, hi)| lo > hi) {
                    continue;
                }
                let mut z: Vec<i64> = ranges.iter().map(|r| r.0).collect();
                loop {
                    let x = ConePoint::Lorentz { t, z: z.clone() };
                    if x.in_cone() && x.precedes(rho) {
                        out.push(x);
                    }
                    let mut k = z.len();
                    let done = loop {
                        if k == 0 {
                            break true;
                        }
                        k -= 1;
                        if z[k] < ranges[k].1 {
                            z[k] += 1;
                            break false;
                        }
                        z[k] = ranges[k].0;
                    };
                    if done {
                        break;
                    }
                }
            }
        }
        ConePoint::Psd { a: ra, b: rb, c: rc } => {
            for a in 0..=*ra {
                for c in 0..=*rc {
                    let (lo, hi) = psd_b_range(a, c, *ra, *rb, *rc);
                    for b in lo..=hi {
                        if (a, b, c) != (0, 0, 0) {
                            out.push(ConePoint::Psd { a, b, c });
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Range of `b` with `b^2 <= ac` and `(B-b)^2 <= (A-a)(C-c)`.
fn psd_b_range(a: i64, c: i64, ra: i64, rb: i64, rc: i64) -> (i64, i64) {
    let s1 = isqrt(a * c);
    let s2 = isqrt((ra - a) * (rc - c));
    ((-s1).max(rb - s2), s1.min(rb + s2))
}

/// `|[0, ρ]_I|` without materializing the interval.
pub fn interval_count(cone: &ConeDescriptor, rho: &ConePoint) -> Result<u128> {
    cone.check_member(rho)?;
    Ok(interval_count_unchecked(rho))
}

pub(crate) fn interval_count_unchecked(rho: &ConePoint) -> u128 {
    match rho {
        ConePoint::Orthant(r) => r.iter().map(|&x| x as u128).product(),
        ConePoint::Lorentz { t, z } if z.len() == 1 => {
            // light-cone coordinates u = t + z, w = t - z of equal parity
            let (u, w) = ((t + z[0]) as u128, (t - z[0]) as u128);
            let (eu, ou) = (u / 2 + 1, u.div_ceil(2));
            let (ew, ow) = (w / 2 + 1, w.div_ceil(2));
            eu * ew + ou * ow - 1
        }
        ConePoint::Lorentz { t: rt, z: rz } => {
            let mut n: u128 = 0;
            for t in 0..=*rt {
                let gap = rt - t;
                let lo = (-t).max(rz[0] - gap);
                let hi = t.min(rz[0] + gap);
                for z0 in lo..=hi {
                    let s1 = isqrt(t * t - z0 * z0);
                    let s2 = isqrt(gap * gap - (rz[0] - z0) * (rz[0] - z0));
                    let (l, h) = ((-s1).max(rz[1] - s2), s1.min(rz[1] + s2));
                    if s1 >= 0 && s2 >= 0 && l <= h {
                        n += (h - l + 1) as u128;
                    }
                }
            }
            n - 1
        }
        ConePoint::Psd { a: ra, b: rb, c: rc } => {
            let mut n: u128 = 0;
            for a in 0..=*ra {
                for c in 0..=*rc {
                    let (l, h) = psd_b_range(a, c, *ra, *rb, *rc);
                    if l <= h {
                        n += (h - l + 1) as u128;
                    }
                }
            }
            n - 1
        }
    }
}

/// The volume of a continuous interval, exact where possible.
#[derive(Clone, Debug, PartialEq)]
pub enum Volume {
    Exact(BigRational),
    Real(f64),
}

impl Volume {
    pub fn to_f64(&self) -> f64 {
        match self {
            Volume::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Volume::Real(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Volume::Exact(q) => Some(q),
            Volume::Real(_) => None,
        }
    }
}

impl fmt::Display for Volume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Volume::Exact(q) => write!(f, "{q}"),
            Volume::Real(x) => write!(f, "{x}"),
        }
    }
}

/// `α_1`: `[0, (t; z)]` in 1+1 dimensions is a square of diagonal `t` in
/// light-cone coordinates.
pub fn alpha_1() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// `α_2`: the interval `[0, (t; 0)]` is a double cone of height `t/2` and
/// radius `t/2`, giving `π t^3 / 12`.
pub const ALPHA_2: f64 = PI / 12.0;

/// `β_2`: `v = β_2 det(ρ)^{3/2}` for 2x2 PSD intervals, in coordinates
/// `(a, b, c)`. At `ρ = I` the volume is
/// `∫∫ 2 sqrt(min(ac, (1-a)(1-c))) da dc = π/6`.
pub const BETA_2: f64 = PI / 6.0;

/// Lebesgue volume of the continuous interval `[0, ρ]`.
pub fn euclid_volume(cone: &ConeDescriptor, rho: &ConePoint) -> Result<Volume> {
    cone.check_member(rho)?;
    Ok(match rho {
        ConePoint::Orthant(r) => Volume::Exact(BigRational::from_integer(
            r.iter().map(|&x| BigInt::from(x)).product(),
        )),
        ConePoint::Lorentz { t, z } if z.len() == 1 => {
            Volume::Exact(alpha_1() * BigRational::from_integer(BigInt::from(t * t - norm2(z))))
        }
        ConePoint::Lorentz { t, z } => Volume::Real(ALPHA_2 * ((t * t - norm2(z)) as f64).powf(1.5)),
        ConePoint::Psd { a, b, c } => Volume::Real(BETA_2 * ((a * c - b * b) as f64).powf(1.5)),
    })
}

/// Closed form of the volume characteristic `γ_m`.
pub fn gamma_closed(cone: &ConeDescriptor, m: usize) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::InvalidArgument("γ_m needs m >= 1".into()));
    }
    let m = BigInt::from(m);
    let one = BigInt::one();
    Ok(match (cone.family(), cone.dim()) {
        (ConeFamily::Orthant, d) => BigRational::new(one, num_traits::pow(m, d)),
        (ConeFamily::Lorentz, 1) => BigRational::new(one, &m * &m),
        (ConeFamily::Lorentz, 2) | (ConeFamily::Psd, 2) => {
            let three_m = BigInt::from(3) * m;
            BigRational::new(
                BigInt::from(24),
                (&three_m - 1u32) * &three_m * (&three_m + 1u32),
            )
        }
        _ => return Err(Error::UnsupportedCone(cone.to_string())),
    })
}

/// Discrete analogue of `v(ρ)^{-m} ∫_{[0,ρ]} v(η)^{m-1} dη`, with lattice
/// counts in place of volumes.
pub fn gamma_estimate(cone: &ConeDescriptor, m: usize, rho: &ConePoint) -> Result<BigRational> {
    if m == 0 {
        return Err(Error::InvalidArgument("γ_m needs m >= 1".into()));
    }
    let total = BigInt::from(interval_count(cone, rho)?);
    let mut sum = BigInt::zero();
    for eta in interval_lattice(cone, rho)? {
        sum += num_traits::pow(BigInt::from(interval_count_unchecked(&eta)), m - 1);
    }
    Ok(BigRational::new(sum, num_traits::pow(total, m)))
}

/// The chain `ρ^(n)`, `n = 1..=steps`: `(n,...,n)`, `(n; 0)` or `n·I`.
pub fn rho_schedule(cone: &ConeDescriptor, steps: usize) -> Vec<ConePoint> {
    (1..=steps as i64).map(|n| schedule_point(cone, n)).collect()
}

/// The `n`-th point of [`rho_schedule`].
pub fn schedule_point(cone: &ConeDescriptor, n: i64) -> ConePoint {
    match cone.family() {
        ConeFamily::Orthant => ConePoint::Orthant(vec![n; cone.dim()]),
        ConeFamily::Lorentz => ConePoint::Lorentz { t: n, z: vec![0; cone.dim()] },
        ConeFamily::Psd => ConePoint::Psd { a: n, b: 0, c: n },
    }
}
