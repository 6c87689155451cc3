//! Noncrossing partitions with pair and singleton blocks.
//!
//! Ground-set positions are numbered `1..=p` from left to right in storage.
//! Position `j` is the `j`-th operator applied to the vacuum, so reading a
//! stored partition left to right follows the order in which a word of
//! operators acts (rightmost factor first). The [`crate::fock`] module uses
//! the same convention.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set partition of `{1, ..., p}` with blocks ordered by their minima.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Partition {
    p: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Builds a partition of `[p]`, sorting each block and ordering blocks by
    /// their minimal element.
    pub fn new(p: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks = blocks;
        let mut seen = vec![false; p + 1];
        for block in blocks.iter_mut() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > p {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside [1, {p}]"
                    )));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("element {x} repeated")));
                }
                seen[x] = true;
            }
        }
        if let Some(missing) = (1..=p).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!("element {missing} not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { p, blocks })
    }

    /// Builds a partition whose ground set is inferred from the blocks.
    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let p = blocks.iter().map(Vec::len).sum();
        Partition::new(p, blocks)
    }

    pub fn empty() -> Self {
        Partition { p: 0, blocks: Vec::new() }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block(&self, i: usize) -> &[usize] {
        &self.blocks[i]
    }

    /// Number of blocks, `b(π)`.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Number of singleton blocks, `s(π)`.
    pub fn num_singletons(&self) -> usize {
        self.blocks.iter().filter(|b| b.len() == 1).count()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// True when block `j` lies strictly inside block `i`:
    /// `min B_i < min B_j <= max B_j < max B_i`.
    pub fn is_inside(&self, i: usize, j: usize) -> bool {
        let (bi, bj) = (&self.blocks[i], &self.blocks[j]);
        bi[0] < bj[0] && bj[bj.len() - 1] < bi[bi.len() - 1]
    }

    /// Returns the indices of two crossing blocks, if any.
    pub fn find_crossing(&self) -> Option<(usize, usize)> {
        let mut owner = vec![0usize; self.p + 1];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                owner[x] = i;
            }
        }
        // u1 < v1 < u2 < v2 with u's in block i and v's in block j: it is
        // enough to test consecutive elements of each block against every
        // element of every other block.
        for (i, bi) in self.blocks.iter().enumerate() {
            for w in bi.windows(2) {
                let (lo, hi) = (w[0], w[1]);
                for x in lo + 1..hi {
                    let j = owner[x];
                    let bj = &self.blocks[j];
                    if bj.iter().any(|&y| y < lo || y > hi) {
                        return Some((i.min(j), i.max(j)));
                    }
                }
            }
        }
        None
    }

    pub fn is_noncrossing(&self) -> bool {
        self.find_crossing().is_none()
    }

    pub fn is_pair_or_singleton(&self) -> bool {
        self.blocks.iter().all(|b| b.len() <= 2)
    }

    pub fn is_pair_partition(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// Index of the first singleton that is not nested in any other block.
    pub fn outer_singleton(&self) -> Option<usize> {
        (0..self.blocks.len()).find(|&j| {
            self.blocks[j].len() == 1 && !(0..self.blocks.len()).any(|i| self.is_inside(i, j))
        })
    }

    pub(crate) fn require_noncrossing(&self) -> Result<()> {
        match self.find_crossing() {
            Some((i, j)) => Err(Error::Crossing(self.blocks[i].clone(), self.blocks[j].clone())),
            None => Ok(()),
        }
    }

    /// The nesting forest of a noncrossing partition.
    pub fn structure(&self) -> Result<Nesting> {
        self.require_noncrossing()?;
        let k = self.blocks.len();
        let mut parent = vec![None; k];
        for j in 0..k {
            // The enclosing blocks form a chain; the innermost one has the
            // largest minimum.
            parent[j] = (0..k)
                .filter(|&i| self.is_inside(i, j))
                .max_by_key(|&i| self.blocks[i][0]);
        }
        let mut children = vec![Vec::new(); k];
        for (j, par) in parent.iter().enumerate() {
            if let Some(i) = par {
                children[*i].push(j);
            }
        }
        Ok(Nesting { parent, children })
    }

    /// The reduced partition: singletons removed and the remaining elements
    /// relabelled `1..` in their original relative order.
    pub fn reduce(&self) -> Partition {
        let mut relabel = vec![0usize; self.p + 1];
        let mut next = 0;
        for x in 1..=self.p {
            if self.blocks.iter().any(|b| b.len() > 1 && b.contains(&x)) {
                next += 1;
                relabel[x] = next;
            }
        }
        let blocks = self
            .blocks
            .iter()
            .filter(|b| b.len() > 1)
            .map(|b| b.iter().map(|&x| relabel[x]).collect())
            .collect();
        Partition { p: next, blocks }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the canonical form `{{1,4},{2},{3}}`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("partition must be wrapped in braces: {s}")))?;
        let mut blocks = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .ok_or_else(|| Error::Parse(format!("expected '{{' in {s}")))?;
            let end = body
                .find('}')
                .ok_or_else(|| Error::Parse(format!("unterminated block in {s}")))?;
            let block = body[..end]
                .split(',')
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = &body[end + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                rest = r;
            }
        }
        Partition::from_blocks(blocks)
    }
}

impl TryFrom<Vec<Vec<usize>>> for Partition {
    type Error = Error;

    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        Partition::from_blocks(blocks)
    }
}

impl From<Partition> for Vec<Vec<usize>> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

/// The nesting forest of a noncrossing partition, indexed by block.
///
/// `parent(j)` is the direct predecessor of block `j` (the innermost block
/// containing it) and `children(i)` are the direct successors of block `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nesting {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl Nesting {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn is_outer(&self, block: usize) -> bool {
        self.parent[block].is_none()
    }

    pub fn parent(&self, block: usize) -> Option<usize> {
        self.parent[block]
    }

    pub fn children(&self, block: usize) -> &[usize] {
        &self.children[block]
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(|&i| self.parent[i].is_none())
    }

    /// Number of blocks in the subtree rooted at `block`, itself included.
    pub fn subtree_size(&self, block: usize) -> usize {
        1 + self.children[block]
            .iter()
            .map(|&c| self.subtree_size(c))
            .sum::<usize>()
    }
}

#[derive(Clone, Copy)]
struct Shape {
    singletons: bool,
    inner_pairs: bool,
}

fn build(p: usize, shape: Shape) -> Vec<Partition> {
    fn go(
        pos: usize,
        p: usize,
        shape: Shape,
        open: &mut Vec<usize>,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<Partition>,
    ) {
        if pos > p {
            if open.is_empty() {
                out.push(Partition { p, blocks: blocks.clone() });
            }
            return;
        }
        let remaining = p - pos + 1;
        // open a pair
        if open.len() < remaining && (shape.inner_pairs || open.is_empty()) {
            open.push(blocks.len());
            blocks.push(vec![pos]);
            go(pos + 1, p, shape, open, blocks, out);
            blocks.pop();
            open.pop();
        }
        // close the innermost open pair
        if let Some(&top) = open.last() {
            open.pop();
            blocks[top].push(pos);
            go(pos + 1, p, shape, open, blocks, out);
            blocks[top].pop();
            open.push(top);
        }
        // inner singleton
        if shape.singletons && !open.is_empty() {
            blocks.push(vec![pos]);
            go(pos + 1, p, shape, open, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    if p == 0 {
        return out;
    }
    go(1, p, shape, &mut Vec::new(), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Noncrossing partitions of `[p]` into pairs and singletons where every
/// singleton is nested inside a pair.
pub fn enumerate_pair_inner_singleton(p: usize) -> Vec<Partition> {
    build(p, Shape { singletons: true, inner_pairs: true })
}

/// As [`enumerate_pair_inner_singleton`], restricted to partitions whose
/// pair blocks are all outer.
pub fn enumerate_outer_pair_inner_singleton(p: usize) -> Vec<Partition> {
    build(p, Shape { singletons: true, inner_pairs: false })
}

/// Noncrossing pair partitions of `[p]`; there are Catalan(p/2) of them.
pub fn enumerate_pair(p: usize) -> Result<Vec<Partition>> {
    if p % 2 == 1 {
        return Err(Error::OddPairSize(p));
    }
    Ok(build(p, Shape { singletons: false, inner_pairs: true }))
}

/// A sequence over `{-1, 0, +1}`; entry `k` (1-based) is the sign of the
/// `k`-th operator applied: `+1` creation, `-1` annihilation, `0`
/// conservation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpsilonSequence(Vec<i8>);

impl EpsilonSequence {
    pub fn new(entries: Vec<i8>) -> Result<Self> {
        if let Some(bad) = entries.iter().find(|e| !matches!(e, -1..=1)) {
            return Err(Error::Parse(format!("sign entry {bad} not in {{-1, 0, +1}}")));
        }
        Ok(EpsilonSequence(entries))
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks the necessary conditions for a nonvanishing vacuum term:
    /// first entry `+1`, last entry `-1`, zero total, nonnegative prefix sums.
    pub fn check_admissible(&self) -> Result<()> {
        let e = &self.0;
        let p = e.len();
        if p < 2 {
            return Err(Error::InadmissibleEpsilon(format!(
                "length {p} is below 2"
            )));
        }
        if e[0] != 1 {
            return Err(Error::InadmissibleEpsilon(
                "condition (1) violated: first entry must be +1".into(),
            ));
        }
        if e[p - 1] != -1 {
            return Err(Error::InadmissibleEpsilon(
                "condition (1) violated: last entry must be -1".into(),
            ));
        }
        let total: i32 = e.iter().map(|&x| x as i32).sum();
        if total != 0 {
            return Err(Error::InadmissibleEpsilon(format!(
                "condition (2) violated: entries sum to {total}"
            )));
        }
        let mut prefix = 0i32;
        for (k, &x) in e.iter().enumerate().take(p - 1) {
            prefix += x as i32;
            if prefix < 0 {
                return Err(Error::InadmissibleEpsilon(format!(
                    "condition (3) violated: prefix sum up to position {} is {prefix}",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }

    /// All admissible sequences of length `p`, in lexicographic order.
    pub fn all_admissible(p: usize) -> Vec<EpsilonSequence> {
        fn go(p: usize, cur: &mut Vec<i8>, height: i32, out: &mut Vec<EpsilonSequence>) {
            if cur.len() == p {
                let seq = EpsilonSequence(cur.clone());
                if height == 0 && seq.is_admissible() {
                    out.push(seq);
                }
                return;
            }
            for x in [-1i8, 0, 1] {
                let h = height + x as i32;
                let left = (p - cur.len() - 1) as i32;
                if h < 0 && cur.len() + 1 < p || h > left {
                    continue;
                }
                cur.push(x);
                go(p, cur, h, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(p, &mut Vec::new(), 0, &mut out);
        out
    }
}

impl fmt::Display for EpsilonSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            let c = match x {
                1 => '+',
                -1 => '-',
                _ => '0',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for EpsilonSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                other => Err(Error::Parse(format!("unexpected sign character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(EpsilonSequence)
    }
}

/// Matches each `+1` at position `k` with
/// `T(k) = min { l > k : ε_k + ... + ε_l = 0 }` and turns every `0` into a
/// singleton.
pub fn partition_of_epsilon(eps: &EpsilonSequence) -> Result<Partition> {
    eps.check_admissible()?;
    let e = eps.entries();
    let p = e.len();
    let mut blocks = Vec::new();
    for k in 0..p {
        match e[k] {
            1 => {
                let mut sum = 0i32;
                let t = (k..p)
                    .find(|&l| {
                        sum += e[l] as i32;
                        l > k && sum == 0
                    })
                    .expect("admissible sequences close every +1");
                blocks.push(vec![k + 1, t + 1]);
            }
            0 => blocks.push(vec![k + 1]),
            _ => {}
        }
    }
    Partition::new(p, blocks)
}

/// `+1` at pair minima, `-1` at pair maxima, `0` at singletons.
pub fn epsilon_of_partition(pi: &Partition) -> Result<EpsilonSequence> {
    pi.require_noncrossing()?;
    if !pi.is_pair_or_singleton() {
        return Err(Error::InvalidPartition(format!(
            "{pi} has a block with more than two elements"
        )));
    }
    if let Some(j) = pi.outer_singleton() {
        return Err(Error::OuterSingleton(pi.block(j)[0]));
    }
    let mut e = vec![0i8; pi.p()];
    for b in pi.blocks() {
        if b.len() == 2 {
            e[b[0] - 1] = 1;
            e[b[1] - 1] = -1;
        }
    }
    Ok(EpsilonSequence(e))
}

/// Groups equal entries of `seq` into blocks ordered by first occurrence,
/// returning the partition together with one label per block.
pub fn adapted_partition<T: PartialEq + Clone>(seq: &[T]) -> (Partition, Vec<T>) {
    let mut labels: Vec<T> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for (j, x) in seq.iter().enumerate() {
        match labels.iter().position(|l| l == x) {
            Some(i) => blocks[i].push(j + 1),
            None => {
                labels.push(x.clone());
                blocks.push(vec![j + 1]);
            }
        }
    }
    // first occurrences are increasing, so blocks are already ordered by minima
    (Partition { p: seq.len(), blocks }, labels)
}
