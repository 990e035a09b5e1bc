//! Block designs as multisets of blocks, their parameters, and brute-force
//! verification of balance.
//!
//! Verification is a single fold over the blocks into a [`BalanceAccumulator`].
//! Accumulators over disjoint parts of a block stream merge by elementwise
//! addition, so a design can be checked in parallel, or checked while it is
//! being generated without ever being stored.

use std::collections::btree_map::{self, BTreeMap};
use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{CheckedSub, Zero};
use thiserror::Error;

use crate::arith::binom;
use crate::block::{Block, BlockError};
use crate::graph::edge_index_unchecked;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error("variety {id} is out of range for v = {v}")]
    VarietyOutOfRange { id: u32, v: u32 },
    #[error(transparent)]
    Block(#[from] BlockError),
    #[error("block sizes are not uniform")]
    NonUniformBlockSize,
    #[error("t = {t} must satisfy 1 <= t <= k = {k}")]
    BadT { t: u32, k: usize },
    #[error("count table for v = {v}, t = {t} is too large")]
    TooLarge { v: u32, t: u32 },
    #[error("occurrence count overflowed 64 bits")]
    CountOverflow,
    #[error("accumulators over different variety counts ({0} vs {1}) cannot merge")]
    MergeMismatch(u32, u32),
    #[error("balanced design violates {0}")]
    IdentityViolated(AdmissibilityFailure),
    #[error("no design with v={v}, k={k}, lambda={lambda} has integral {which}")]
    Inadmissible {
        v: u64,
        k: u64,
        lambda: u64,
        which: &'static str,
    },
    #[error("need v > k >= 2 and lambda >= 1 (got v={v}, k={k}, lambda={lambda})")]
    BadParameters { v: u64, k: u64, lambda: u64 },
}

/// A variety count together with a multiset of blocks.
///
/// Blocks are kept in canonical (lexicographic) order with their
/// multiplicities, since exploded designs repeat blocks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Design {
    v: u32,
    blocks: BTreeMap<Block, u64>,
}

impl Design {
    pub fn new(v: u32) -> Self {
        Self {
            v,
            blocks: BTreeMap::new(),
        }
    }

    pub fn from_blocks<I>(v: u32, blocks: I) -> Result<Self, DesignError>
    where
        I: IntoIterator<Item = Block>,
    {
        let mut d = Self::new(v);
        for b in blocks {
            d.insert(b)?;
        }
        Ok(d)
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn insert(&mut self, block: Block) -> Result<(), DesignError> {
        self.insert_many(block, 1)
    }

    /// Adds `count` copies of `block`.
    pub fn insert_many(&mut self, block: Block, count: u64) -> Result<(), DesignError> {
        if block.max_id() >= self.v {
            return Err(DesignError::VarietyOutOfRange {
                id: block.max_id(),
                v: self.v,
            });
        }
        if count == 0 {
            return Ok(());
        }
        let slot = self.blocks.entry(block).or_insert(0);
        *slot = slot.checked_add(count).ok_or(DesignError::CountOverflow)?;
        Ok(())
    }

    /// Number of blocks counting multiplicity.
    pub fn block_count(&self) -> u64 {
        self.blocks.values().sum()
    }

    pub fn distinct_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn multiplicity(&self, block: &Block) -> u64 {
        self.blocks.get(block).copied().unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.blocks.values().copied().max().unwrap_or(0)
    }

    /// Distinct blocks with their multiplicities, in canonical order.
    pub fn iter(&self) -> btree_map::Iter<'_, Block, u64> {
        self.blocks.iter()
    }

    /// Every block, repeated by multiplicity, in canonical order.
    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks
            .iter()
            .flat_map(|(b, &m)| std::iter::repeat_n(b, m as usize))
    }

    /// The common block size, if there is one.
    pub fn block_size(&self) -> Option<usize> {
        let mut sizes = self.blocks.keys().map(Block::len);
        let first = sizes.next()?;
        sizes.all(|s| s == first).then_some(first)
    }
}

impl<'a> IntoIterator for &'a Design {
    type Item = (&'a Block, &'a u64);
    type IntoIter = btree_map::Iter<'a, Block, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.blocks.iter()
    }
}

/// `(v, b, r, k, lambda)` in exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DesignParams {
    pub v: BigUint,
    pub b: BigUint,
    pub r: BigUint,
    pub k: BigUint,
    pub lambda: BigUint,
}

impl DesignParams {
    pub fn new(
        v: impl Into<BigUint>,
        b: impl Into<BigUint>,
        r: impl Into<BigUint>,
        k: impl Into<BigUint>,
        lambda: impl Into<BigUint>,
    ) -> Self {
        Self {
            v: v.into(),
            b: b.into(),
            r: r.into(),
            k: k.into(),
            lambda: lambda.into(),
        }
    }
}

impl fmt::Display for DesignParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "v={} b={} r={} k={} lambda={}",
            self.v, self.b, self.r, self.k, self.lambda
        )
    }
}

/// `t` and the number of blocks through each `t`-subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TParams {
    pub t: u32,
    pub lambda_t: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityFailure {
    /// `v r != b k`
    Replication { vr: BigUint, bk: BigUint },
    /// `r (k - 1) != lambda (v - 1)`
    Index { lhs: BigUint, rhs: BigUint },
}

impl fmt::Display for AdmissibilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Replication { vr, bk } => write!(f, "v*r = b*k ({vr} != {bk})"),
            Self::Index { lhs, rhs } => {
                write!(f, "r*(k-1) = lambda*(v-1) ({lhs} != {rhs})")
            }
        }
    }
}

/// Checks `v r = b k` and then `r (k - 1) = lambda (v - 1)`.
pub fn check_admissibility(p: &DesignParams) -> Result<(), AdmissibilityFailure> {
    let vr = &p.v * &p.r;
    let bk = &p.b * &p.k;
    if vr != bk {
        return Err(AdmissibilityFailure::Replication { vr, bk });
    }
    let lhs = &p.r * p.k.clone().checked_sub(&BigUint::from(1u32)).unwrap_or_default();
    let rhs = &p.lambda * p.v.clone().checked_sub(&BigUint::from(1u32)).unwrap_or_default();
    if lhs != rhs {
        return Err(AdmissibilityFailure::Index { lhs, rhs });
    }
    Ok(())
}

/// Fills in `r` and `b` from `(v, k, lambda)`.
pub fn complete_parameters(v: u64, k: u64, lambda: u64) -> Result<DesignParams, DesignError> {
    if !(v > k && k >= 2 && lambda >= 1) {
        return Err(DesignError::BadParameters { v, k, lambda });
    }
    let inadmissible = |which| DesignError::Inadmissible {
        v,
        k,
        lambda,
        which,
    };
    let num = BigUint::from(lambda) * (v - 1);
    if !(&num % (k - 1)).is_zero() {
        return Err(inadmissible("r"));
    }
    let r = num / (k - 1);
    let num = &r * v;
    if !(&num % k).is_zero() {
        return Err(inadmissible("b"));
    }
    let b = num / k;
    Ok(DesignParams::new(v, b, r, k, lambda))
}

/// A design is symmetric when it has as many blocks as varieties.
pub fn is_symmetric(p: &DesignParams) -> bool {
    let symmetric = p.v == p.b;
    if symmetric {
        debug_assert_eq!(p.r, p.k, "symmetric admissible designs have r = k");
    }
    symmetric
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Balanced,
    Unbalanced,
    NotUniformBlockSize,
    NotUniformReplication,
    /// Every block contains every variety (`k = v`).
    Complete,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Balanced => "balanced",
            Verdict::Unbalanced => "unbalanced",
            Verdict::NotUniformBlockSize => "not-uniform-block-size",
            Verdict::NotUniformReplication => "not-uniform-replication",
            Verdict::Complete => "complete",
        })
    }
}

/// A subset of varieties whose count differs from the expected one.
///
/// For block-size failures `subset` is the offending block and the counts
/// are sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub subset: Vec<u32>,
    pub observed: u64,
    pub expected: u64,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}}} observed={} expected={}",
            self.subset.iter().join(","),
            self.observed,
            self.expected
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceReport {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub params: Option<DesignParams>,
}

impl BalanceReport {
    pub fn is_balanced(&self) -> bool {
        self.verdict == Verdict::Balanced
    }
}

impl fmt::Display for BalanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verdict: {}", self.verdict)?;
        if let Some(p) = &self.params {
            write!(f, "\nparams: {p}")?;
            if self.verdict == Verdict::Balanced {
                write!(f, "\nsymmetric: {}", is_symmetric(p))?;
            }
        }
        if let Some(w) = &self.witness {
            write!(f, "\nwitness: {w}")?;
        }
        Ok(())
    }
}

/// Most frequent value; ties go to the smaller value.
fn modal(values: impl Iterator<Item = u64>) -> Option<u64> {
    let mut freq: HashMap<u64, u64> = HashMap::new();
    for x in values {
        *freq.entry(x).or_default() += 1;
    }
    freq.into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(value, _)| value)
}

fn add_count(slot: &mut u64, by: u64) -> Result<(), DesignError> {
    *slot = slot.checked_add(by).ok_or(DesignError::CountOverflow)?;
    Ok(())
}

/// Pair count tables beyond this many entries are refused.
const MAX_TABLE: u64 = 1 << 31;

/// Running block-size, replication and pair-occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceAccumulator {
    v: u32,
    blocks: u64,
    sizes: BTreeMap<usize, u64>,
    /// Smallest block seen of each size, for witnesses.
    size_examples: BTreeMap<usize, Vec<u32>>,
    replication: Vec<u64>,
    /// Indexed by the lexicographic pair rank of `K_v` edges.
    pairs: Vec<u64>,
}

impl BalanceAccumulator {
    pub fn new(v: u32) -> Result<Self, DesignError> {
        let table = u64::from(v) * u64::from(v.saturating_sub(1)) / 2;
        if table > MAX_TABLE {
            return Err(DesignError::TooLarge { v, t: 2 });
        }
        Ok(Self {
            v,
            blocks: 0,
            sizes: BTreeMap::new(),
            size_examples: BTreeMap::new(),
            replication: vec![0; v as usize],
            pairs: vec![0; table as usize],
        })
    }

    pub fn blocks_seen(&self) -> u64 {
        self.blocks
    }

    /// Counts `mult` copies of a block given as strictly ascending ids.
    pub fn add(&mut self, block: &[u32], mult: u64) -> Result<(), DesignError> {
        if block.is_empty() {
            return Err(BlockError::Empty.into());
        }
        for w in block.windows(2) {
            if w[0] >= w[1] {
                return Err(if w[0] == w[1] {
                    BlockError::Duplicate(w[1])
                } else {
                    BlockError::Unsorted(w[1])
                }
                .into());
            }
        }
        let top = block[block.len() - 1];
        if top >= self.v {
            return Err(DesignError::VarietyOutOfRange { id: top, v: self.v });
        }
        if mult == 0 {
            return Ok(());
        }
        add_count(&mut self.blocks, mult)?;
        add_count(self.sizes.entry(block.len()).or_default(), mult)?;
        match self.size_examples.get_mut(&block.len()) {
            Some(ex) if block < ex.as_slice() => *ex = block.to_vec(),
            Some(_) => {}
            None => {
                self.size_examples.insert(block.len(), block.to_vec());
            }
        }
        for (i, &x) in block.iter().enumerate() {
            add_count(&mut self.replication[x as usize], mult)?;
            for &y in &block[i + 1..] {
                add_count(&mut self.pairs[edge_index_unchecked(x, y, self.v) as usize], mult)?;
            }
        }
        Ok(())
    }

    /// Adds another accumulator's counts into this one.
    pub fn merge(&mut self, other: &BalanceAccumulator) -> Result<(), DesignError> {
        if self.v != other.v {
            return Err(DesignError::MergeMismatch(self.v, other.v));
        }
        add_count(&mut self.blocks, other.blocks)?;
        for (&size, &count) in &other.sizes {
            add_count(self.sizes.entry(size).or_default(), count)?;
        }
        for (size, example) in &other.size_examples {
            // Keep the lexicographically smallest example so merges commute.
            let slot = self
                .size_examples
                .entry(*size)
                .or_insert_with(|| example.clone());
            if example < slot {
                *slot = example.clone();
            }
        }
        for (a, b) in self.replication.iter_mut().zip(&other.replication) {
            add_count(a, *b)?;
        }
        for (a, b) in self.pairs.iter_mut().zip(&other.pairs) {
            add_count(a, *b)?;
        }
        Ok(())
    }

    pub fn finish(&self) -> Result<BalanceReport, DesignError> {
        let v = u64::from(self.v);
        let b = self.blocks;

        if self.sizes.is_empty() {
            return Ok(BalanceReport {
                verdict: Verdict::NotUniformBlockSize,
                witness: None,
                params: None,
            });
        }
        let k = self.modal_size();
        if self.sizes.len() > 1 {
            let (&odd, _) = self
                .sizes
                .iter()
                .find(|(&s, _)| s as u64 != k)
                .expect("more than one size present");
            return Ok(BalanceReport {
                verdict: Verdict::NotUniformBlockSize,
                witness: Some(Witness {
                    subset: self.size_examples[&odd].clone(),
                    observed: odd as u64,
                    expected: k,
                }),
                params: None,
            });
        }

        if k == v {
            // Every block is the whole variety set.
            return Ok(BalanceReport {
                verdict: Verdict::Complete,
                witness: None,
                params: Some(DesignParams::new(v, b, b, k, b)),
            });
        }

        let lambda = modal(self.pairs.iter().copied()).unwrap_or(0);
        if let Some(rank) = self.pairs.iter().position(|&c| c != lambda) {
            let e = crate::graph::edge_endpoints(rank as u32, self.v)
                .expect("rank comes from the pair table");
            return Ok(BalanceReport {
                verdict: Verdict::Unbalanced,
                witness: Some(Witness {
                    subset: vec![e.a, e.b],
                    observed: self.pairs[rank],
                    expected: lambda,
                }),
                params: None,
            });
        }

        let r = modal(self.replication.iter().copied()).unwrap_or(0);
        if let Some(x) = self.replication.iter().position(|&c| c != r) {
            return Ok(BalanceReport {
                verdict: Verdict::NotUniformReplication,
                witness: Some(Witness {
                    subset: vec![x as u32],
                    observed: self.replication[x],
                    expected: r,
                }),
                params: None,
            });
        }

        let params = DesignParams::new(v, b, r, k, lambda);
        check_admissibility(&params).map_err(DesignError::IdentityViolated)?;
        Ok(BalanceReport {
            verdict: Verdict::Balanced,
            witness: None,
            params: Some(params),
        })
    }

    /// Block size carried by the most blocks; ties go to the smaller size.
    fn modal_size(&self) -> u64 {
        self.sizes
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&s, _)| s as u64)
            .unwrap_or(0)
    }
}

/// Brute-force check that `d` is a balanced incomplete block design.
pub fn verify_bibd(d: &Design) -> Result<BalanceReport, DesignError> {
    let mut acc = BalanceAccumulator::new(d.v())?;
    for (block, &mult) in d {
        acc.add(block.as_slice(), mult)?;
    }
    acc.finish()
}

/// Outcome of counting blocks through every `t`-subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TDesignReport {
    Balanced(TParams),
    Unbalanced { t: u32, witness: Witness },
}

impl TDesignReport {
    pub fn is_balanced(&self) -> bool {
        matches!(self, TDesignReport::Balanced(_))
    }

    pub fn lambda_t(&self) -> Option<u64> {
        match self {
            TDesignReport::Balanced(p) => Some(p.lambda_t),
            TDesignReport::Unbalanced { .. } => None,
        }
    }
}

impl fmt::Display for TDesignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TDesignReport::Balanced(p) => write!(f, "t={} lambda_t={}", p.t, p.lambda_t),
            TDesignReport::Unbalanced { t, witness } => {
                write!(f, "t={t} unbalanced witness: {witness}")
            }
        }
    }
}

/// Dense tables up to this many `t`-subsets; beyond it counts go to a map.
const MAX_DENSE: u64 = 1 << 26;

/// Colex rank of a sorted subset: `sum C(c_i, i + 1)`.
fn colex_rank(subset: &[u32], table: &[Vec<u64>]) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| table[c as usize][i + 1])
        .sum::<u64>() as usize
}

/// Inverse of [`colex_rank`] for subsets of size `t`.
fn colex_unrank(mut rank: u64, t: usize, v: u32, table: &[Vec<u64>]) -> Vec<u32> {
    let mut out = vec![0; t];
    let mut hi = v;
    for i in (0..t).rev() {
        let mut c = hi - 1;
        while table[c as usize][i + 1] > rank {
            c -= 1;
        }
        out[i] = c;
        rank -= table[c as usize][i + 1];
        hi = c;
    }
    out
}

/// Counts, for every `t`-subset of varieties, the blocks containing it.
///
/// Each block contributes its own `C(k, t)` subsets; subsets never touched
/// are found by comparing the number of populated entries with `C(v, t)`.
pub fn verify_t_design(d: &Design, t: u32) -> Result<TDesignReport, DesignError> {
    let k = d.block_size().ok_or(DesignError::NonUniformBlockSize)?;
    if t == 0 || t as usize > k {
        return Err(DesignError::BadT { t, k });
    }
    let v = d.v();
    let total = binom(u64::from(v), u64::from(t)).expect("t <= k <= v");
    let total: u64 = u64::try_from(total).map_err(|_| DesignError::TooLarge { v, t })?;
    let tt = t as usize;

    if total <= MAX_DENSE {
        // table[n][j] = C(n, j) for n < v, j <= t.
        let table: Vec<Vec<u64>> = (0..v as u64)
            .map(|n| {
                (0..=u64::from(t))
                    .map(|j| binom(n, j).map(|c| u64::try_from(c).unwrap()).unwrap_or(0))
                    .collect()
            })
            .collect();
        let mut counts = vec![0u64; total as usize];
        for (block, &mult) in d {
            for sub in block.as_slice().iter().copied().combinations(tt) {
                add_count(&mut counts[colex_rank(&sub, &table)], mult)?;
            }
        }
        let lambda_t = modal(counts.iter().copied()).unwrap_or(0);
        return Ok(match counts.iter().position(|&c| c != lambda_t) {
            None => TDesignReport::Balanced(TParams { t, lambda_t }),
            Some(rank) => TDesignReport::Unbalanced {
                t,
                witness: Witness {
                    subset: colex_unrank(rank as u64, tt, v, &table),
                    observed: counts[rank],
                    expected: lambda_t,
                },
            },
        });
    }

    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for (block, &mult) in d {
        for sub in block.as_slice().iter().copied().combinations(tt) {
            add_count(counts.entry(sub).or_default(), mult)?;
        }
    }
    let zeros = total - counts.len() as u64;
    let mut freq: BTreeMap<u64, u64> = BTreeMap::new();
    if zeros > 0 {
        freq.insert(0, zeros);
    }
    for &c in counts.values() {
        *freq.entry(c).or_default() += 1;
    }
    // BTreeMap iterates ascending, so max_by_key keeps the last maximum;
    // reverse to make ties go to the smaller count.
    let lambda_t = freq
        .iter()
        .rev()
        .max_by_key(|(_, &f)| f)
        .map(|(&c, _)| c)
        .unwrap_or(0);
    let deviant = if lambda_t == 0 {
        counts.iter().filter(|(_, &c)| c != 0).map(|(s, &c)| (s.clone(), c)).min()
    } else {
        let nonzero = counts
            .iter()
            .filter(|(_, &c)| c != lambda_t)
            .map(|(s, &c)| (s.clone(), c))
            .min();
        // The first missing subset in lex order is among the first
        // populated + 1 subsets.
        let missing = (zeros > 0)
            .then(|| {
                (0..v)
                    .combinations(tt)
                    .find(|s| !counts.contains_key(s))
                    .map(|s| (s, 0))
            })
            .flatten();
        nonzero.into_iter().chain(missing).min()
    };
    Ok(match deviant {
        None => TDesignReport::Balanced(TParams { t, lambda_t }),
        Some((subset, observed)) => TDesignReport::Unbalanced {
            t,
            witness: Witness {
                subset,
                observed,
                expected: lambda_t,
            },
        },
    })
}
