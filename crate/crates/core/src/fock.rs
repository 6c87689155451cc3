//! The discrete bm-Fock space restricted to the span of the unit vectors
//! `g_ξ`.
//!
//! A basis vector is a chain `g_{ρ_n} ⊗ ... ⊗ g_{ρ_1}` with
//! `ρ_n ≻ ... ≻ ρ_1`, stored top first; the empty chain is the vacuum `Ω`.
//! Distinct chains are orthonormal. Creation at `ξ` prepends `ξ` when
//! `ξ ≻ ρ_n`, annihilation at `ξ` removes the top when it equals `ξ`, and
//! conservation at `ξ` keeps the chain when its top equals `ξ`. Every other
//! case gives zero.
//!
//! Words are written left to right and act right to left, so the `j`-th
//! operator applied to `Ω` sits at position `j` of the partitions in
//! [`crate::partitions`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};

use num_traits::Zero;

use crate::cones::{self, ConeDescriptor, ConePoint};
use crate::error::{Error, Result};
use crate::moments::FiniteMoment;

/// Largest number of basis terms a state may hold during a moment
/// computation.
pub const STATE_CAP: usize = 2_000_000;

/// A strictly decreasing chain of cone points, top first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainVector(Vec<ConePoint>);

impl ChainVector {
    pub fn vacuum() -> Self {
        ChainVector(Vec::new())
    }

    /// Checks that every element is strictly above the next one.
    pub fn new(points: Vec<ConePoint>) -> Result<Self> {
        let chain = ChainVector(points);
        if !chain.is_valid() {
            return Err(Error::InvalidArgument(format!("{chain} is not strictly decreasing")));
        }
        Ok(chain)
    }

    pub fn is_valid(&self) -> bool {
        self.0.windows(2).all(|w| w[1].strictly_precedes(&w[0]))
    }

    pub fn points(&self) -> &[ConePoint] {
        &self.0
    }

    pub fn top(&self) -> Option<&ConePoint> {
        self.0.first()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    fn pushed(&self, xi: &ConePoint) -> ChainVector {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(xi.clone());
        v.extend_from_slice(&self.0);
        ChainVector(v)
    }

    fn popped(&self) -> ChainVector {
        ChainVector(self.0[1..].to_vec())
    }
}

impl fmt::Display for ChainVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "Ω");
        }
        let parts: Vec<String> = self.0.iter().map(|x| format!("({x})")).collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    Creation,
    Annihilation,
    Conservation,
}

impl OpKind {
    pub const ALL: [OpKind; 3] = [OpKind::Creation, OpKind::Annihilation, OpKind::Conservation];

    /// The operator's action on one basis chain.
    pub fn on_chain(self, xi: &ConePoint, chain: &ChainVector) -> Option<ChainVector> {
        match (self, chain.top()) {
            (OpKind::Creation, None) => Some(chain.pushed(xi)),
            (OpKind::Creation, Some(top)) => top.strictly_precedes(xi).then(|| chain.pushed(xi)),
            (OpKind::Annihilation, Some(top)) if top == xi => Some(chain.popped()),
            (OpKind::Conservation, Some(top)) if top == xi => Some(chain.clone()),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            OpKind::Creation => "+",
            OpKind::Annihilation => "-",
            OpKind::Conservation => "o",
        }
    }
}

/// Coefficient types a [`FockState`] can carry.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Zero + Add<Output = Self> + Mul<Output = Self> {}

impl<T> Coefficient for T where T: Clone + PartialEq + fmt::Debug + Zero + Add<Output = T> + Mul<Output = T> {}

/// A finite linear combination of chains.
#[derive(Clone, Debug, PartialEq)]
pub struct FockState<T> {
    terms: BTreeMap<ChainVector, T>,
}

impl<T: Coefficient> Default for FockState<T> {
    fn default() -> Self {
        FockState { terms: BTreeMap::new() }
    }
}

impl<T: Coefficient> FockState<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(chain: ChainVector, c: T) -> Self {
        let mut s = Self::zero();
        s.add_term(chain, c);
        s
    }

    pub fn vacuum(one: T) -> Self {
        Self::basis(ChainVector::vacuum(), one)
    }

    pub fn add_term(&mut self, chain: ChainVector, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&chain) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(chain, sum);
                }
            }
            None => {
                self.terms.insert(chain, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChainVector, &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, chain: &ChainVector) -> T {
        self.terms.get(chain).cloned().unwrap_or_else(T::zero)
    }

    pub fn vacuum_coeff(&self) -> T {
        self.coeff(&ChainVector::vacuum())
    }

    /// `⟨self, other⟩` in the orthonormal chain basis (real coefficients).
    pub fn inner(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for (chain, a) in &self.terms {
            if let Some(b) = other.terms.get(chain) {
                acc = acc + a.clone() * b.clone();
            }
        }
        acc
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (chain, a) in &self.terms {
            out.add_term(chain.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (chain, a) in &other.terms {
            out.add_term(chain.clone(), a.clone());
        }
        out
    }

    pub fn all_chains_valid(&self) -> bool {
        self.terms.keys().all(ChainVector::is_valid)
    }
}

/// `A^ε_ξ` applied to a state.
pub fn apply<T: Coefficient>(op: OpKind, xi: &ConePoint, s: &FockState<T>) -> FockState<T> {
    let mut out = FockState::zero();
    for (chain, c) in s.terms() {
        if let Some(next) = op.on_chain(xi, chain) {
            out.add_term(next, c.clone());
        }
    }
    out
}

/// A polynomial in `λ` with nonnegative integer coefficients, used to track
/// conservation steps symbolically.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountPoly(Vec<u128>);

impl CountPoly {
    pub fn constant(c: u128) -> Self {
        CountPoly(vec![c]).trimmed()
    }

    pub fn lambda() -> Self {
        CountPoly(vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u128] {
        &self.0
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }
}

impl Add for CountPoly {
    type Output = CountPoly;

    fn add(self, rhs: CountPoly) -> CountPoly {
        let (mut long, short) = if self.0.len() >= rhs.0.len() { (self, rhs) } else { (rhs, self) };
        for (a, b) in long.0.iter_mut().zip(short.0) {
            *a += b;
        }
        long.trimmed()
    }
}

impl Mul for CountPoly {
    type Output = CountPoly;

    fn mul(self, rhs: CountPoly) -> CountPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return CountPoly::default();
        }
        let mut out = vec![0u128; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CountPoly(out).trimmed()
    }
}

impl Zero for CountPoly {
    fn zero() -> Self {
        CountPoly::default()
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// The operator `S_ρ(λ)` on the lattice interval `[0, ρ]_I`.
pub struct SumOperator {
    cone: ConeDescriptor,
    rho: ConePoint,
    points: Vec<ConePoint>,
    index: HashMap<ConePoint, usize>,
    above: Vec<Vec<usize>>,
}

impl SumOperator {
    pub fn new(cone: &ConeDescriptor, rho: &ConePoint) -> Result<Self> {
        let points = cones::interval_lattice(cone, rho)?;
        let index = points.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let above = points
            .iter()
            .map(|x| (0..points.len()).filter(|&j| x.strictly_precedes(&points[j])).collect())
            .collect();
        Ok(SumOperator { cone: *cone, rho: rho.clone(), points, index, above })
    }

    pub fn points(&self) -> &[ConePoint] {
        &self.points
    }

    /// `w_ca Σ_ξ (A^+_ξ + A^-_ξ) + w_cons Σ_ξ A^∘_ξ`.
    pub fn apply_weighted<T: Coefficient>(&self, w_ca: &T, w_cons: &T, s: &FockState<T>) -> FockState<T> {
        let mut out = FockState::zero();
        for (chain, c) in s.terms() {
            let top = chain.top().and_then(|t| self.index.get(t).copied());
            let candidates: Box<dyn Iterator<Item = usize>> = match (chain.top(), top) {
                (None, _) => Box::new(0..self.points.len()),
                (Some(_), Some(i)) => Box::new(self.above[i].iter().copied()),
                // a top outside the interval still admits creations above it
                (Some(t), None) => {
                    let t = t.clone();
                    Box::new((0..self.points.len()).filter(move |&j| t.strictly_precedes(&self.points[j])))
                }
            };
            let cw = c.clone() * w_ca.clone();
            for j in candidates {
                out.add_term(chain.pushed(&self.points[j]), cw.clone());
            }
            if top.is_some() {
                out.add_term(chain.popped(), cw.clone());
                out.add_term(chain.clone(), c.clone() * w_cons.clone());
            }
        }
        out
    }

    /// Applies `S_ρ(λ)` with the normalization `1/sqrt(v(ρ))`.
    pub fn apply_real(&self, lambda: f64, s: &FockState<f64>) -> Result<FockState<f64>> {
        let v = cones::euclid_volume(&self.cone, &self.rho)?.to_f64();
        Ok(self.apply_weighted(&(1.0 / v.sqrt()), &lambda, s))
    }

    /// Applies `sqrt(v(ρ)) S_ρ(λ)` with `λ` kept symbolic.
    pub fn apply_symbolic(&self, s: &FockState<CountPoly>) -> FockState<CountPoly> {
        self.apply_weighted(&CountPoly::constant(1), &CountPoly::lambda(), s)
    }

    /// `⟨S^p Ω, Ω⟩` with coefficients of type `T`. Chains longer than the
    /// number of remaining steps are dropped since they cannot return to the
    /// vacuum.
    fn vacuum_moment_with<T: Coefficient>(
        &self,
        p: usize,
        one: T,
        step: impl Fn(&FockState<T>) -> Result<FockState<T>>,
    ) -> Result<T> {
        let mut state = FockState::vacuum(one);
        for k in 0..p {
            state = step(&state)?;
            let remaining = p - k - 1;
            state.terms.retain(|chain, _| chain.len() <= remaining);
            if state.len() > STATE_CAP {
                return Err(Error::Infeasible {
                    what: format!("vacuum moment p = {p} over {} sites", self.points.len()),
                    estimate: state.len() as f64,
                    cap: STATE_CAP as f64,
                });
            }
        }
        Ok(state.vacuum_coeff())
    }
}

/// `S_ρ(λ) s`.
#[allow(non_snake_case)]
pub fn apply_S(cone: &ConeDescriptor, rho: &ConePoint, lambda: f64, s: &FockState<f64>) -> Result<FockState<f64>> {
    SumOperator::new(cone, rho)?.apply_real(lambda, s)
}

/// `φ(S_ρ(λ)^p)` in floating point.
pub fn vacuum_moment(cone: &ConeDescriptor, rho: &ConePoint, lambda: f64, p: usize) -> Result<f64> {
    let op = SumOperator::new(cone, rho)?;
    let v = cones::euclid_volume(cone, rho)?.to_f64();
    let w = 1.0 / v.sqrt();
    op.vacuum_moment_with(p, 1.0, |s| Ok(op.apply_weighted(&w, &lambda, s)))
}

/// `φ(S_ρ(λ)^p)` as a polynomial in `λ`, with the volume normalization kept
/// exact.
pub fn vacuum_moment_poly(cone: &ConeDescriptor, rho: &ConePoint, p: usize) -> Result<FiniteMoment> {
    let op = SumOperator::new(cone, rho)?;
    let vac = op.vacuum_moment_with(p, CountPoly::constant(1), |s| Ok(op.apply_symbolic(s)))?;
    let counts = vac
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0)
        .map(|(s, c)| (s as u32, *c))
        .collect();
    Ok(FiniteMoment { p, counts, volume: cones::euclid_volume(cone, rho)? })
}

/// A sum of operator monomials at one site, optionally centered as
/// `a - φ(a) 1`. Monomials are written left to right and act right to left.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    pub monomials: Vec<Vec<OpKind>>,
    pub centered: bool,
}

impl Word {
    pub fn monomial(ops: Vec<OpKind>) -> Self {
        Word { monomials: vec![ops], centered: false }
    }

    /// `A^+ + A^- + A^∘`.
    pub fn full() -> Self {
        Word { monomials: OpKind::ALL.iter().map(|&o| vec![o]).collect(), centered: false }
    }

    pub fn centered(mut self) -> Self {
        self.centered = true;
        self
    }

    /// All monomials of length `1..=max_len`.
    pub fn all_monomials(max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut layer: Vec<Vec<OpKind>> = vec![Vec::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|m| OpKind::ALL.iter().map(move |&o| [m.clone(), vec![o]].concat()))
                .collect();
            out.extend(layer.iter().cloned().map(Word::monomial));
        }
        out
    }

    fn raw_on_chain(&self, xi: &ConePoint, chain: &ChainVector) -> FockState<i64> {
        let mut out = FockState::zero();
        for m in &self.monomials {
            let mut cur = Some(chain.clone());
            for op in m.iter().rev() {
                cur = cur.and_then(|c| op.on_chain(xi, &c));
            }
            if let Some(c) = cur {
                out.add_term(c, 1);
            }
        }
        out
    }

    /// `φ` of the uncentered word.
    fn raw_phi(&self, xi: &ConePoint) -> i64 {
        self.raw_on_chain(xi, &ChainVector::vacuum()).vacuum_coeff()
    }

    pub fn phi(&self, xi: &ConePoint) -> i64 {
        if self.centered {
            0
        } else {
            self.raw_phi(xi)
        }
    }

    pub fn apply(&self, xi: &ConePoint, s: &FockState<i64>) -> FockState<i64> {
        let shift = if self.centered { self.raw_phi(xi) } else { 0 };
        let mut out = FockState::zero();
        for (chain, c) in s.terms() {
            for (next, d) in self.raw_on_chain(xi, chain).terms() {
                out.add_term(next.clone(), c * d);
            }
            out.add_term(chain.clone(), -shift * c);
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .monomials
            .iter()
            .map(|m| m.iter().map(|o| format!("A{}", o.symbol())).collect::<String>())
            .collect();
        let body = parts.join(" + ");
        if self.centered {
            write!(f, "({body} - φ)")
        } else {
            write!(f, "{body}")
        }
    }
}

/// Every strictly decreasing chain of interval points of length at most
/// `max_len`, the vacuum included.
pub fn test_chains(points: &[ConePoint], max_len: usize) -> Vec<ChainVector> {
    fn extend(points: &[ConePoint], cur: &mut Vec<ConePoint>, max_len: usize, out: &mut Vec<ChainVector>) {
        out.push(ChainVector(cur.clone()));
        if cur.len() == max_len {
            return;
        }
        for x in points {
            // build bottom-up: the new element goes below the current bottom
            if cur.last().is_none_or(|b| x.strictly_precedes(b)) {
                cur.push(x.clone());
                extend(points, cur, max_len, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(points, &mut Vec::new(), max_len, &mut out);
    out
}

/// Outcome of one family of identity checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult { name: name.to_string(), ..Default::default() }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn total_checked(&self) -> usize {
        self.checks.iter().map(|c| c.checked).sum()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "ok" } else { "FAILED" };
            writeln!(f, "{:<28} {:>9} cases  {status}", c.name, c.checked)?;
            for w in &c.failures {
                writeln!(f, "    {w}")?;
            }
        }
        Ok(())
    }
}

fn ops_on(ops: &[(OpKind, &ConePoint)], chain: &ChainVector) -> Option<ChainVector> {
    // the last listed operator acts first
    let mut cur = Some(chain.clone());
    for (op, x) in ops.iter().rev() {
        cur = cur.and_then(|c| op.on_chain(x, &c));
    }
    cur
}

/// Verifies the commutation relations, `A^∘ = A^+ A^-`, adjointness and the
/// chain invariant on every chain of length at most 4 in `[0, ρ]_I`.
pub fn check_relations(cone: &ConeDescriptor, rho: &ConePoint) -> Result<Report> {
    use OpKind::*;
    let points = cones::interval_lattice(cone, rho)?;
    let chains = test_chains(&points, 4);
    let mut cr1 = CheckResult::new("A+A+ = A-A- = 0 (ξ ⪰ η)");
    let mut cr3 = CheckResult::new("A-A∘ = A∘A+ = A-A+ = A∘A∘ = 0 (ξ ≠ η)");
    let mut eqsub = CheckResult::new("A∘ = A+A-");
    let mut adjoint = CheckResult::new("⟨A+u, w⟩ = ⟨u, A-w⟩");
    let mut selfadj = CheckResult::new("⟨A∘u, w⟩ = ⟨u, A∘w⟩");
    let mut invariant = CheckResult::new("chains stay decreasing");

    for xi in &points {
        for eta in &points {
            for u in &chains {
                if eta.precedes(xi) {
                    for ops in [[(Creation, eta), (Creation, xi)], [(Annihilation, xi), (Annihilation, eta)]] {
                        cr1.record(ops_on(&ops, u).is_none(), || format!("ξ={xi} η={eta} on {u}"));
                    }
                }
                if xi != eta {
                    for (a, b) in [
                        (Annihilation, Conservation),
                        (Conservation, Creation),
                        (Annihilation, Creation),
                        (Conservation, Conservation),
                    ] {
                        let ops = [(a, xi), (b, eta)];
                        cr3.record(ops_on(&ops, u).is_none(), || {
                            format!("A{}_{xi} A{}_{eta} on {u}", a.symbol(), b.symbol())
                        });
                    }
                }
            }
        }
        for u in &chains {
            let lhs = Conservation.on_chain(xi, u);
            let rhs = ops_on(&[(Creation, xi), (Annihilation, xi)], u);
            eqsub.record(lhs == rhs, || format!("ξ={xi} on {u}"));
            for op in OpKind::ALL {
                if let Some(c) = op.on_chain(xi, u) {
                    invariant.record(c.is_valid(), || format!("A{}_{xi} on {u} gave {c}", op.symbol()));
                }
            }
            let au = FockState::basis(u.clone(), 1i64);
            let plus_u = apply(Creation, xi, &au);
            let cons_u = apply(Conservation, xi, &au);
            for w in &chains {
                let bw = FockState::basis(w.clone(), 1i64);
                adjoint.record(
                    plus_u.inner(&bw) == au.inner(&apply(Annihilation, xi, &bw)),
                    || format!("ξ={xi} u={u} w={w}"),
                );
                selfadj.record(
                    cons_u.inner(&bw) == au.inner(&apply(Conservation, xi, &bw)),
                    || format!("ξ={xi} u={u} w={w}"),
                );
            }
        }
    }
    Ok(Report { checks: vec![cr1, cr3, eqsub, adjoint, selfadj, invariant] })
}

/// Index configurations for the two bm-independence conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BmCase {
    /// `a_1 a_2 a_3 = φ(a_2) a_1 a_3` with `a_1` at `xi`, `a_2` at `rho`,
    /// `a_3` at `eta`.
    Bm1 { xi: ConePoint, rho: ConePoint, eta: ConePoint },
    /// `φ(a_1 ... a_n) = ∏ φ(a_j)`.
    Bm2 { points: Vec<ConePoint> },
}

fn comparable(a: &ConePoint, b: &ConePoint) -> bool {
    a.precedes(b) || b.precedes(a)
}

impl BmCase {
    /// Checks the order pattern the condition requires.
    pub fn validate(&self) -> Result<()> {
        match self {
            BmCase::Bm1 { xi, rho, eta } => {
                let ok = (xi.strictly_precedes(rho) && eta.strictly_precedes(rho))
                    || (!comparable(xi, rho) && eta.strictly_precedes(rho))
                    || (xi.strictly_precedes(rho) && !comparable(rho, eta));
                if ok {
                    Ok(())
                } else {
                    Err(Error::PatternMismatch(format!(
                        "BM1 needs ξ≺ρ≻η, ξ≁ρ≻η or ξ≺ρ≁η; got ξ={xi}, ρ={rho}, η={eta}"
                    )))
                }
            }
            BmCase::Bm2 { points } => {
                if bm2_pattern(points) {
                    Ok(())
                } else {
                    let shown: Vec<String> = points.iter().map(|x| format!("({x})")).collect();
                    Err(Error::PatternMismatch(format!(
                        "BM2 needs ξ_1≻…≻ξ_m≁…≁ξ_k≺…≺ξ_n; got {}",
                        shown.join(", ")
                    )))
                }
            }
        }
    }
}

/// `ξ_1 ≻ ... ≻ ξ_m ≁ ... ≁ ξ_k ≺ ... ≺ ξ_n` for some `m <= k`, with
/// incomparability required between neighbours.
fn bm2_pattern(points: &[ConePoint]) -> bool {
    let n = points.len();
    if n == 0 {
        return false;
    }
    let mut m = 0;
    while m + 1 < n && points[m + 1].strictly_precedes(&points[m]) {
        m += 1;
    }
    let mut k = m;
    while k + 1 < n && !comparable(&points[k], &points[k + 1]) {
        k += 1;
    }
    let mut j = k;
    while j + 1 < n && points[j].strictly_precedes(&points[j + 1]) {
        j += 1;
    }
    j == n - 1
}

/// Checks one bm-independence case for every choice of words, one family per
/// position (three for BM1, one per point for BM2). BM1 is checked as an
/// operator identity on all chains of length at most 3 in `[0, ρ]_I`; BM2 is
/// a vacuum identity.
pub fn check_bm_independence(
    cone: &ConeDescriptor,
    rho: &ConePoint,
    case: &BmCase,
    families: &[Vec<Word>],
) -> Result<CheckResult> {
    case.validate()?;
    match case {
        BmCase::Bm1 { xi, rho: mid, eta } => {
            if families.len() != 3 {
                return Err(Error::InvalidArgument("BM1 needs three word families".into()));
            }
            let chains = test_chains(&cones::interval_lattice(cone, rho)?, 3);
            let mut res = CheckResult::new("BM1");
            for a3 in &families[2] {
                for u in &chains {
                    let s3 = a3.apply(eta, &FockState::basis(u.clone(), 1));
                    for a2 in &families[1] {
                        let s23 = a2.apply(mid, &s3);
                        let phi2 = a2.phi(mid);
                        for a1 in &families[0] {
                            let lhs = a1.apply(xi, &s23);
                            let rhs = a1.apply(xi, &s3).scale(&phi2);
                            res.record(lhs == rhs, || {
                                format!("a1={a1}@{xi} a2={a2}@{mid} a3={a3}@{eta} on {u}")
                            });
                        }
                    }
                }
            }
            Ok(res)
        }
        BmCase::Bm2 { points } => {
            if families.len() != points.len() {
                return Err(Error::InvalidArgument("BM2 needs one word family per point".into()));
            }
            let mut res = CheckResult::new("BM2");
            let mut choice = vec![0usize; points.len()];
            if families.iter().any(Vec::is_empty) {
                return Ok(res);
            }
            loop {
                let words: Vec<&Word> = choice.iter().enumerate().map(|(j, &i)| &families[j][i]).collect();
                let mut state = FockState::vacuum(1i64);
                for (w, x) in words.iter().zip(points).rev() {
                    state = w.apply(x, &state);
                }
                let lhs = state.vacuum_coeff();
                let rhs: i64 = words.iter().zip(points).map(|(w, x)| w.phi(x)).product();
                res.record(lhs == rhs, || {
                    let desc: Vec<String> = words.iter().zip(points).map(|(w, x)| format!("{w}@{x}")).collect();
                    format!("{}: φ = {lhs}, product = {rhs}", desc.join(" · "))
                });
                let mut j = points.len();
                loop {
                    if j == 0 {
                        return Ok(res);
                    }
                    j -= 1;
                    choice[j] += 1;
                    if choice[j] < families[j].len() {
                        break;
                    }
                    choice[j] = 0;
                }
            }
        }
    }
}

/// Runs BM1 on every matching triple of interval points and BM2 on every
/// matching sequence of two or three points, with the preset word families:
/// single operators for the outer BM1 factors, monomials of length at most 2
/// (plain and centered) in the middle, and monomials of length at most 2 plus
/// `A^+ + A^- + A^∘` for BM2.
pub fn check_bm_presets(cone: &ConeDescriptor, rho: &ConePoint) -> Result<Report> {
    let points = cones::interval_lattice(cone, rho)?;
    let outer: Vec<Word> = OpKind::ALL.iter().map(|&o| Word::monomial(vec![o])).collect();
    let mut middle = Word::all_monomials(2);
    middle.extend(Word::all_monomials(2).into_iter().map(Word::centered));
    let mut bm2_words = Word::all_monomials(2);
    bm2_words.push(Word::full());

    let mut bm1 = CheckResult::new("BM1 presets");
    let mut bm2 = CheckResult::new("BM2 presets");
    let bm1_families = vec![outer.clone(), middle, outer];
    for xi in &points {
        for mid in &points {
            for eta in &points {
                let case = BmCase::Bm1 { xi: xi.clone(), rho: mid.clone(), eta: eta.clone() };
                if case.validate().is_ok() {
                    merge(&mut bm1, check_bm_independence(cone, rho, &case, &bm1_families)?);
                }
            }
        }
    }
    let mut seqs: Vec<Vec<ConePoint>> = points.iter().map(|x| vec![x.clone()]).collect();
    for _ in 0..2 {
        seqs = seqs
            .iter()
            .flat_map(|s| points.iter().map(move |x| [s.clone(), vec![x.clone()]].concat()))
            .collect();
        for s in &seqs {
            let case = BmCase::Bm2 { points: s.clone() };
            if case.validate().is_ok() {
                let families = vec![bm2_words.clone(); s.len()];
                merge(&mut bm2, check_bm_independence(cone, rho, &case, &families)?);
            }
        }
    }
    Ok(Report { checks: vec![bm1, bm2] })
}

fn merge(into: &mut CheckResult, other: CheckResult) {
    into.checked += other.checked;
    for f in other.failures {
        if into.failures.len() < 20 {
            into.failures.push(f);
        }
    }
}
