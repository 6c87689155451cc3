//! Counting bm-ordered labellings of partitions by cone lattice points.
//!
//! A labelling assigns a point of `[0, ρ]_I` to every block. Nested pair
//! blocks must carry labels increasing inward (`⪯` in the non-strict mode,
//! `≺` in the strict mode) and each singleton must repeat the label of its
//! direct predecessor. Singletons are therefore forced and the count only
//! depends on the forest of pair blocks.
//!
//! Three counting strategies are used:
//!
//! * orthants factor coordinatewise, so non-strict counts are products of
//!   one-dimensional suffix-sum recursions;
//! * the Lorentz cone in 1+1 dimensions is the coordinatewise order in
//!   light-cone coordinates `u = t + z`, `w = t - z`, counted on a 2-D grid;
//! * everything else walks the forest with a precomputed dominance relation.
//!
//! Strict counts for the first two come from inclusion-exclusion over the
//! nested edges forced to carry equal labels.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::cones::{self, ConeDescriptor, ConeFamily, ConePoint, Volume};
use crate::error::{Error, Result};
use crate::partitions::Partition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    NonStrict,
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Pick the fastest method for the cone.
    Auto,
    /// Always use the pairwise-dominance walk.
    Generic,
}

/// Largest number of tuples [`count_sequences_naive`] will scan.
pub const NAIVE_CAP: f64 = 1e7;

/// Nesting forest of the pair blocks of a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Forest {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl Forest {
    fn from_parents(parent: Vec<Option<usize>>) -> Self {
        let mut children = vec![Vec::new(); parent.len()];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(v);
            }
        }
        Forest { parent, children }
    }

    /// The pair-block forest of `pi`, which must be noncrossing with blocks of
    /// size one or two and no outer singletons.
    pub(crate) fn of_partition(pi: &Partition) -> Result<Self> {
        if !pi.is_pair_or_singleton() {
            return Err(Error::InvalidPartition(format!(
                "{pi} has a block with more than two elements"
            )));
        }
        let nest = pi.structure()?;
        if let Some(j) = pi.outer_singleton() {
            return Err(Error::OuterSingleton(pi.block(j)[0]));
        }
        let pairs: Vec<usize> = (0..pi.num_blocks()).filter(|&i| pi.block(i).len() == 2).collect();
        let mut index = vec![usize::MAX; pi.num_blocks()];
        for (k, &i) in pairs.iter().enumerate() {
            index[i] = k;
        }
        let parent = pairs
            .iter()
            .map(|&i| nest.parent(i).map(|p| index[p]))
            .collect();
        Ok(Forest::from_parents(parent))
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&v| self.parent[v].is_none())
    }

    /// Nodes with every child listed before its parent.
    fn post_order(&self) -> Vec<usize> {
        fn visit(f: &Forest, v: usize, out: &mut Vec<usize>) {
            for &c in &f.children[v] {
                visit(f, c, out);
            }
            out.push(v);
        }
        let mut out = Vec::with_capacity(self.len());
        for r in self.roots() {
            visit(self, r, &mut out);
        }
        out
    }

    /// Nodes that have a parent; these index the nested edges.
    fn edges(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.parent[v].is_some()).collect()
    }

    /// Merges every child in `merged` into its parent.
    fn contract(&self, merged: &[bool]) -> Forest {
        let rep = |mut v: usize| {
            while merged[v] {
                v = self.parent[v].expect("only nested nodes are merged");
            }
            v
        };
        let kept: Vec<usize> = (0..self.len()).filter(|&v| !merged[v]).collect();
        let mut index = vec![usize::MAX; self.len()];
        for (k, &v) in kept.iter().enumerate() {
            index[v] = k;
        }
        let parent = kept
            .iter()
            .map(|&v| self.parent[v].map(|p| index[rep(p)]))
            .collect();
        Forest::from_parents(parent)
    }
}

fn overflow(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

fn add(a: u128, b: u128) -> Result<u128> {
    a.checked_add(b).ok_or_else(|| overflow("labellings"))
}

fn mul(a: u128, b: u128) -> Result<u128> {
    a.checked_mul(b).ok_or_else(|| overflow("labellings"))
}

/// Non-strict count on the chain `1..=n`.
fn nonstrict_chain(f: &Forest, n: usize) -> Result<u128> {
    // suffix[v][x] = number of labellings of the subtree of v with L(v) >= x
    let mut suffix: Vec<Vec<u128>> = vec![Vec::new(); f.len()];
    for v in f.post_order() {
        let mut s = vec![0u128; n + 2];
        for x in (1..=n).rev() {
            let mut g = 1u128;
            for &c in &f.children[v] {
                g = mul(g, suffix[c][x])?;
            }
            s[x] = add(s[x + 1], g)?;
        }
        suffix[v] = s;
    }
    f.roots().try_fold(1u128, |acc, r| mul(acc, suffix[r][1]))
}

/// Non-strict count on the light-cone grid `[0, U] x [0, W]` with cells of
/// equal parity, the origin removed.
fn nonstrict_lightcone(f: &Forest, big_u: usize, big_w: usize) -> Result<u128> {
    let (nu, nw) = (big_u + 2, big_w + 2);
    let valid = |u: usize, w: usize| u <= big_u && w <= big_w && (u + w).is_multiple_of(2) && u + w > 0;
    let mut suffix: Vec<Vec<u128>> = vec![Vec::new(); f.len()];
    for v in f.post_order() {
        let mut s = vec![0u128; nu * nw];
        for u in (0..=big_u).rev() {
            for w in (0..=big_w).rev() {
                let mut g = 0u128;
                if valid(u, w) {
                    g = 1;
                    for &c in &f.children[v] {
                        g = mul(g, suffix[c][u * nw + w])?;
                    }
                }
                let total = add(add(g, s[(u + 1) * nw + w])?, s[u * nw + w + 1])?;
                s[u * nw + w] = total - s[(u + 1) * nw + w + 1];
            }
        }
        suffix[v] = s;
    }
    f.roots().try_fold(1u128, |acc, r| mul(acc, suffix[r][0]))
}

fn nonstrict_fast(f: &Forest, rho: &ConePoint) -> Result<u128> {
    match rho {
        ConePoint::Orthant(r) => r
            .iter()
            .try_fold(1u128, |acc, &n| mul(acc, nonstrict_chain(f, n as usize)?)),
        ConePoint::Lorentz { t, z } if z.len() == 1 => {
            nonstrict_lightcone(f, (t + z[0]) as usize, (t - z[0]) as usize)
        }
        _ => unreachable!("no fast path for {rho}"),
    }
}

/// Inclusion-exclusion over nested edges forced to be equal.
fn strict_fast(f: &Forest, rho: &ConePoint) -> Result<u128> {
    let edges = f.edges();
    let mut plus = 0u128;
    let mut minus = 0u128;
    for mask in 0u32..(1 << edges.len()) {
        let mut merged = vec![false; f.len()];
        for (k, &e) in edges.iter().enumerate() {
            merged[e] = mask >> k & 1 == 1;
        }
        let n = nonstrict_fast(&f.contract(&merged), rho)?;
        if mask.count_ones() % 2 == 0 {
            plus = add(plus, n)?;
        } else {
            minus = add(minus, n)?;
        }
    }
    Ok(plus - minus)
}

fn generic(f: &Forest, points: &[ConePoint], mode: Mode) -> Result<u128> {
    let up: Vec<Vec<usize>> = points
        .iter()
        .map(|x| {
            (0..points.len())
                .filter(|&j| match mode {
                    Mode::NonStrict => x.precedes(&points[j]),
                    Mode::Strict => x.strictly_precedes(&points[j]),
                })
                .collect()
        })
        .collect();
    let mut g: Vec<Vec<u128>> = vec![Vec::new(); f.len()];
    for v in f.post_order() {
        let mut gv = vec![1u128; points.len()];
        for &c in &f.children[v] {
            for (x, slot) in gv.iter_mut().enumerate() {
                let s = up[x].iter().try_fold(0u128, |acc, &y| add(acc, g[c][y]))?;
                *slot = mul(*slot, s)?;
            }
        }
        g[v] = gv;
    }
    f.roots().try_fold(1u128, |acc, r| {
        let s = g[r].iter().try_fold(0u128, |a, &b| add(a, b))?;
        mul(acc, s)
    })
}

/// Number of bm-ordered labellings of `pi` by points of `[0, ρ]_I`.
pub fn count_labellings(
    pi: &Partition,
    cone: &ConeDescriptor,
    rho: &ConePoint,
    mode: Mode,
) -> Result<u128> {
    count_labellings_with(pi, cone, rho, mode, Strategy::Auto)
}

pub fn count_labellings_with(
    pi: &Partition,
    cone: &ConeDescriptor,
    rho: &ConePoint,
    mode: Mode,
    strategy: Strategy,
) -> Result<u128> {
    cone.check_member(rho)?;
    let forest = Forest::of_partition(pi)?;
    let fast = matches!(
        (cone.family(), cone.dim()),
        (ConeFamily::Orthant, _) | (ConeFamily::Lorentz, 1)
    );
    if fast && strategy == Strategy::Auto {
        match mode {
            Mode::NonStrict => nonstrict_fast(&forest, rho),
            Mode::Strict => strict_fast(&forest, rho),
        }
    } else {
        let points = cones::interval_lattice(cone, rho)?;
        generic(&forest, &points, mode)
    }
}

/// Counts full label sequences `(ξ_1, ..., ξ_p) ∈ [0, ρ]_I^p` that are
/// constant on the blocks of `pi` and satisfy the non-strict bm-order, by
/// scanning every tuple.
///
/// Sequences with equal labels on different blocks are included: the forced
/// singleton labels always coincide with a pair label, so asking for the
/// adapted partition to be `pi` itself would leave nothing to count.
pub fn count_sequences_naive(pi: &Partition, cone: &ConeDescriptor, rho: &ConePoint) -> Result<u128> {
    count_sequences_naive_mode(pi, cone, rho, Mode::NonStrict)
}

pub fn count_sequences_naive_mode(
    pi: &Partition,
    cone: &ConeDescriptor,
    rho: &ConePoint,
    mode: Mode,
) -> Result<u128> {
    cone.check_member(rho)?;
    if !pi.is_pair_or_singleton() {
        return Err(Error::InvalidPartition(format!("{pi} is not pair-or-singleton")));
    }
    let nest = pi.structure()?;
    if let Some(j) = pi.outer_singleton() {
        return Err(Error::OuterSingleton(pi.block(j)[0]));
    }
    let points = cones::interval_lattice(cone, rho)?;
    let p = pi.p();
    let estimate = (points.len() as f64).powi(p as i32);
    if estimate > NAIVE_CAP {
        return Err(Error::Infeasible {
            what: format!("scanning {}^{p} label tuples", points.len()),
            estimate,
            cap: NAIVE_CAP,
        });
    }
    // ancestor relations between blocks, resolved once
    let k = pi.num_blocks();
    let mut ancestors: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (j, anc) in ancestors.iter_mut().enumerate() {
        let mut cur = nest.parent(j);
        while let Some(i) = cur {
            anc.push(i);
            cur = nest.parent(i);
        }
    }
    let n = points.len();
    let mut idx = vec![0usize; p];
    let mut count = 0u128;
    if n == 0 {
        return Ok(0);
    }
    loop {
        let xi = |pos: usize| &points[idx[pos - 1]];
        let constant = pi
            .blocks()
            .iter()
            .all(|b| b.iter().all(|&x| xi(x) == xi(b[0])));
        let ordered = constant
            && (0..k).all(|j| {
                let lj = xi(pi.block(j)[0]);
                if pi.block(j).len() == 1 {
                    let par = nest.parent(j).expect("inner singleton");
                    xi(pi.block(par)[0]) == lj
                } else {
                    ancestors[j].iter().all(|&i| {
                        let li = xi(pi.block(i)[0]);
                        match mode {
                            Mode::NonStrict => li.precedes(lj),
                            Mode::Strict => li.strictly_precedes(lj),
                        }
                    })
                }
            });
        if ordered {
            count += 1;
        }
        let mut pos = p;
        loop {
            if pos == 0 {
                return Ok(count);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < n {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `strict count of π̃ / v(ρ)^{b(π̃)}`, exact when the volume is rational.
pub fn v_ratio_exact(pi: &Partition, cone: &ConeDescriptor, rho: &ConePoint) -> Result<Option<BigRational>> {
    let reduced = pi.reduce();
    let strict = count_labellings(&reduced, cone, rho, Mode::Strict)?;
    Ok(match cones::euclid_volume(cone, rho)? {
        Volume::Exact(v) => Some(
            BigRational::from_integer(BigInt::from(strict))
                / num_traits::pow(v, reduced.num_blocks()),
        ),
        Volume::Real(_) => None,
    })
}

pub fn v_ratio(pi: &Partition, cone: &ConeDescriptor, rho: &ConePoint) -> Result<f64> {
    if let Some(q) = v_ratio_exact(pi, cone, rho)? {
        return Ok(q.to_f64().unwrap_or(f64::NAN));
    }
    let reduced = pi.reduce();
    let strict = count_labellings(&reduced, cone, rho, Mode::Strict)?;
    let v = cones::euclid_volume(cone, rho)?.to_f64();
    Ok(strict as f64 / v.powi(reduced.num_blocks() as i32))
}

/// [`v_ratio`] along the first `steps` points of the cone's schedule.
pub fn v_ratio_series(pi: &Partition, cone: &ConeDescriptor, steps: usize) -> Result<Vec<(ConePoint, f64)>> {
    cones::rho_schedule(cone, steps)
        .into_iter()
        .map(|rho| v_ratio(pi, cone, &rho).map(|r| (rho, r)))
        .collect()
}

/// One row of labelling counts.
#[derive(Clone, Debug, PartialEq)]
pub struct CountRecord {
    pub partition: Partition,
    pub cone: ConeDescriptor,
    pub rho: ConePoint,
    pub nonstrict: u128,
    pub strict: u128,
    pub naive: Option<u128>,
    pub volume: Volume,
    pub ratio: f64,
}

impl CountRecord {
    pub const CSV_HEADER: &'static str = "partition,cone,rho,nonstrict,strict,naive,volume,ratio";

    /// Computes every count; the naive scan runs only when `with_naive`.
    pub fn compute(pi: &Partition, cone: &ConeDescriptor, rho: &ConePoint, with_naive: bool) -> Result<Self> {
        let nonstrict = count_labellings(pi, cone, rho, Mode::NonStrict)?;
        let strict = count_labellings(pi, cone, rho, Mode::Strict)?;
        let naive = if with_naive {
            Some(count_sequences_naive(pi, cone, rho)?)
        } else {
            None
        };
        Ok(CountRecord {
            partition: pi.clone(),
            cone: *cone,
            rho: rho.clone(),
            nonstrict,
            strict,
            naive,
            volume: cones::euclid_volume(cone, rho)?,
            ratio: v_ratio(pi, cone, rho)?,
        })
    }

    pub fn csv_row(&self) -> String {
        let naive = self.naive.map(|n| n.to_string()).unwrap_or_default();
        format!(
            "\"{}\",{},\"{}\",{},{},{},{},{}",
            self.partition, self.cone, self.rho, self.nonstrict, self.strict, naive, self.volume, self.ratio
        )
    }
}

impl fmt::Display for CountRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.csv_row())
    }
}
