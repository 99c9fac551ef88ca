//! Pairing functions (partial involutions on ℕ) and asymptotic density of
//! index sets.
//!
//! A [`PairingFunction`] is fixed-step by construction: generations are cut
//! into blocks `((n-1)h, nh]` and each block carries a partner table over
//! 0-based offsets. Block tables are eventually periodic, which keeps the
//! density of the domain an exact rational.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::Rational;

/// Subsets of ℕ with computable density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IndexSet {
    /// Membership indicator: preperiod, then the period repeated forever.
    Periodic { preperiod: Vec<bool>, period: Vec<bool> },
    /// A finite, strictly increasing list of positive integers.
    ExplicitFinite { members: Vec<u64> },
    /// `{ base^k : k ≥ 1 }`.
    PowerSparse { base: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityPair {
    pub lower: Rational,
    pub upper: Rational,
}

impl DensityPair {
    pub fn exact(d: Rational) -> Self {
        DensityPair { lower: d.clone(), upper: d }
    }

    /// The asymptotic density when lower and upper coincide.
    pub fn value(&self) -> Option<&Rational> {
        (self.lower == self.upper).then_some(&self.lower)
    }
}

impl IndexSet {
    pub fn periodic(preperiod: Vec<bool>, period: Vec<bool>) -> Result<Self, Error> {
        let s = IndexSet::Periodic { preperiod, period };
        s.validate()?;
        Ok(s)
    }

    pub fn explicit(members: Vec<u64>) -> Result<Self, Error> {
        let s = IndexSet::ExplicitFinite { members };
        s.validate()?;
        Ok(s)
    }

    pub fn power_sparse(base: u64) -> Result<Self, Error> {
        let s = IndexSet::PowerSparse { base };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), Error> {
        match self {
            IndexSet::Periodic { period, .. } if period.is_empty() => {
                Err(Error::InvalidIndexSet("periodic indicator needs a non-empty period".into()))
            }
            IndexSet::ExplicitFinite { members } => {
                if members.first() == Some(&0) {
                    return Err(Error::InvalidIndexSet("members must be positive".into()));
                }
                if members.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidIndexSet("members must be strictly increasing".into()));
                }
                Ok(())
            }
            IndexSet::PowerSparse { base } if *base < 2 => {
                Err(Error::InvalidIndexSet(format!("power base must be >= 2, got {base}")))
            }
            _ => Ok(()),
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        match self {
            IndexSet::Periodic { preperiod, period } => {
                let q = preperiod.len() as u64;
                if n <= q {
                    preperiod[(n - 1) as usize]
                } else {
                    period[((n - q - 1) % period.len() as u64) as usize]
                }
            }
            IndexSet::ExplicitFinite { members } => members.binary_search(&n).is_ok(),
            IndexSet::PowerSparse { base } => {
                let mut m = n;
                let mut k = 0;
                while m.is_multiple_of(*base) {
                    m /= base;
                    k += 1;
                }
                m == 1 && k >= 1
            }
        }
    }

    /// `|S ∩ [1, n]|`.
    pub fn prefix_count(&self, n: u64) -> u64 {
        match self {
            IndexSet::Periodic { preperiod, period } => {
                let q = preperiod.len() as u64;
                let head = preperiod[..n.min(q) as usize].iter().filter(|&&b| b).count() as u64;
                if n <= q {
                    return head;
                }
                let p = period.len() as u64;
                let (full, rem) = (n - q).div_rem(&p);
                let ones = period.iter().filter(|&&b| b).count() as u64;
                let partial = period[..rem as usize].iter().filter(|&&b| b).count() as u64;
                head + full * ones + partial
            }
            IndexSet::ExplicitFinite { members } => members.partition_point(|&m| m <= n) as u64,
            IndexSet::PowerSparse { base } => {
                let mut count = 0;
                let mut power = *base;
                while power <= n {
                    count += 1;
                    match power.checked_mul(*base) {
                        Some(next) => power = next,
                        None => break,
                    }
                }
                count
            }
        }
    }

    pub fn density(&self) -> DensityPair {
        match self {
            IndexSet::Periodic { period, .. } => {
                let ones = period.iter().filter(|&&b| b).count() as i64;
                DensityPair::exact(Rational::ratio(ones, period.len() as i64))
            }
            // Finite sets and {b^k} both have o(n) counting functions.
            IndexSet::ExplicitFinite { .. } | IndexSet::PowerSparse { .. } => {
                DensityPair::exact(Rational::zero())
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            IndexSet::Periodic { period, .. } => period.iter().any(|&b| b),
            IndexSet::ExplicitFinite { .. } => false,
            IndexSet::PowerSparse { .. } => true,
        }
    }
}

/// Partner table of one block: `table[m] = Some(p)` pairs offsets `m` and `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BlockInvolution(pub Vec<Option<usize>>);

impl BlockInvolution {
    pub fn unpaired(h: usize) -> Self {
        BlockInvolution(vec![None; h])
    }

    /// Pairs offsets `(0,1), (2,3), ...`; an odd last offset stays unpaired.
    pub fn adjacent_swaps(h: usize) -> Self {
        BlockInvolution(
            (0..h)
                .map(|m| {
                    let p = m ^ 1;
                    (p < h).then_some(p)
                })
                .collect(),
        )
    }

    pub fn from_pairs(h: usize, pairs: &[(usize, usize)]) -> Self {
        let mut t = vec![None; h];
        for &(a, b) in pairs {
            t[a] = Some(b);
            t[b] = Some(a);
        }
        BlockInvolution(t)
    }

    pub fn paired_count(&self) -> usize {
        self.0.iter().filter(|e| e.is_some()).count()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PairingRepr {
    h: usize,
    block_preperiod: Vec<BlockInvolution>,
    block_period: Vec<BlockInvolution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PairingRepr", into = "PairingRepr")]
pub struct PairingFunction {
    step: usize,
    block_preperiod: Vec<BlockInvolution>,
    block_period: Vec<BlockInvolution>,
}

impl TryFrom<PairingRepr> for PairingFunction {
    type Error = Error;
    fn try_from(r: PairingRepr) -> Result<Self, Error> {
        PairingFunction::new(r.h, r.block_preperiod, r.block_period)
    }
}

impl From<PairingFunction> for PairingRepr {
    fn from(p: PairingFunction) -> Self {
        PairingRepr {
            h: p.step,
            block_preperiod: p.block_preperiod,
            block_period: p.block_period,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairingViolationKind {
    FixedPoint,
    /// `table[offset] = partner` but `table[partner] != offset`.
    NotSymmetric { partner: usize, back: Option<usize> },
}

/// `block` is the 0-based number of the first block carrying the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingViolation {
    pub block: usize,
    pub offset: usize,
    #[serde(flatten)]
    pub kind: PairingViolationKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub valid: bool,
    pub violations: Vec<PairingViolation>,
}

impl PairingFunction {
    /// Checks structure only (lengths, offsets in range). Use
    /// [`PairingFunction::validate`] for the involution property.
    pub fn new(
        step: usize,
        block_preperiod: Vec<BlockInvolution>,
        block_period: Vec<BlockInvolution>,
    ) -> Result<Self, Error> {
        if step == 0 {
            return Err(Error::ZeroStep);
        }
        if block_period.is_empty() {
            return Err(Error::EmptyBlockPeriod);
        }
        for (block, table) in block_preperiod.iter().chain(&block_period).enumerate() {
            if table.0.len() != step {
                return Err(Error::BlockLength { block, len: table.0.len(), step });
            }
            for (offset, e) in table.0.iter().enumerate() {
                if let Some(partner) = *e {
                    if partner >= step {
                        return Err(Error::PartnerOutOfBlock { block, offset, partner, step });
                    }
                }
            }
        }
        Ok(PairingFunction { step, block_preperiod, block_period })
    }

    /// Structural check plus involution check.
    pub fn new_valid(
        step: usize,
        block_preperiod: Vec<BlockInvolution>,
        block_period: Vec<BlockInvolution>,
    ) -> Result<Self, Error> {
        let p = PairingFunction::new(step, block_preperiod, block_period)?;
        let report = p.validate();
        match report.violations.first() {
            None => Ok(p),
            Some(v) => Err(Error::InvalidPairing(format!(
                "block {} offset {}: {:?}",
                v.block, v.offset, v.kind
            ))),
        }
    }

    pub fn periodic(step: usize, block: BlockInvolution) -> Result<Self, Error> {
        PairingFunction::new_valid(step, vec![], vec![block])
    }

    /// Every block uses adjacent swaps; `dom = ℕ` when `h` is even.
    pub fn all_swap(step: usize) -> Result<Self, Error> {
        PairingFunction::periodic(step, BlockInvolution::adjacent_swaps(step))
    }

    pub fn empty(step: usize) -> Result<Self, Error> {
        PairingFunction::periodic(step, BlockInvolution::unpaired(step))
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn block_preperiod(&self) -> &[BlockInvolution] {
        &self.block_preperiod
    }

    pub fn block_period(&self) -> &[BlockInvolution] {
        &self.block_period
    }

    pub fn validate(&self) -> PairingReport {
        let mut violations = Vec::new();
        for (block, table) in self.block_preperiod.iter().chain(&self.block_period).enumerate() {
            for (offset, e) in table.0.iter().enumerate() {
                let Some(partner) = *e else { continue };
                if partner == offset {
                    violations.push(PairingViolation {
                        block,
                        offset,
                        kind: PairingViolationKind::FixedPoint,
                    });
                } else if table.0[partner] != Some(offset) {
                    violations.push(PairingViolation {
                        block,
                        offset,
                        kind: PairingViolationKind::NotSymmetric {
                            partner,
                            back: table.0[partner],
                        },
                    });
                }
            }
        }
        PairingReport { valid: violations.is_empty(), violations }
    }

    /// Table for the 0-based block number `b`.
    pub fn block(&self, b: u64) -> &BlockInvolution {
        let q = self.block_preperiod.len() as u64;
        if b < q {
            &self.block_preperiod[b as usize]
        } else {
            &self.block_period[((b - q) % self.block_period.len() as u64) as usize]
        }
    }

    /// Partner of generation `k`, or `None` outside the domain.
    pub fn apply(&self, k: u64) -> Result<Option<u64>, Error> {
        if k == 0 {
            return Err(Error::ZeroIndex);
        }
        let h = self.step as u64;
        let (b, m) = (k - 1).div_rem(&h);
        Ok(self.block(b).0[m as usize].map(|p| b * h + p as u64 + 1))
    }

    pub fn domain(&self) -> IndexSet {
        let flags = |blocks: &[BlockInvolution]| -> Vec<bool> {
            blocks.iter().flat_map(|t| t.0.iter().map(Option::is_some)).collect()
        };
        IndexSet::Periodic {
            preperiod: flags(&self.block_preperiod),
            period: flags(&self.block_period),
        }
    }

    /// Number of generations before the block tables start repeating.
    pub fn preperiod_span(&self) -> u64 {
        (self.block_preperiod.len() * self.step) as u64
    }

    /// Length in generations of one period of block tables.
    pub fn period_span(&self) -> u64 {
        (self.block_period.len() * self.step) as u64
    }

    pub fn domain_is_empty(&self) -> bool {
        self.block_preperiod
            .iter()
            .chain(&self.block_period)
            .all(|t| t.paired_count() == 0)
    }

    pub fn domain_is_infinite(&self) -> bool {
        self.block_period.iter().any(|t| t.paired_count() > 0)
    }

    pub fn domain_is_everything(&self) -> bool {
        self.block_preperiod
            .iter()
            .chain(&self.block_period)
            .all(|t| t.paired_count() == self.step)
    }

    /// `|dom(α)|` when finite.
    pub fn finite_domain_size(&self) -> Option<usize> {
        (!self.domain_is_infinite())
            .then(|| self.block_preperiod.iter().map(BlockInvolution::paired_count).sum())
    }
}

/// An unrestricted pairing given by an explicit finite list of pairs. Used to
/// exhibit pairings whose displacement is unbounded as the list grows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplicitPairing {
    pairs: Vec<(u64, u64)>,
}

impl ExplicitPairing {
    pub fn from_pairs(pairs: Vec<(u64, u64)>) -> Result<Self, Error> {
        let mut seen = std::collections::BTreeSet::new();
        for &(a, b) in &pairs {
            if a == 0 || b == 0 {
                return Err(Error::ZeroIndex);
            }
            if a == b {
                return Err(Error::InvalidPairing(format!("fixed point at {a}")));
            }
            if !seen.insert(a) || !seen.insert(b) {
                return Err(Error::InvalidPairing(format!("index reused in pair ({a}, {b})")));
            }
        }
        Ok(ExplicitPairing { pairs })
    }

    pub fn apply(&self, k: u64) -> Option<u64> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == k {
                Some(b)
            } else if b == k {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn domain(&self) -> IndexSet {
        let mut members: Vec<u64> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        members.sort_unstable();
        IndexSet::ExplicitFinite { members }
    }

    pub fn max_displacement(&self) -> u64 {
        self.pairs.iter().map(|&(a, b)| a.abs_diff(b)).max().unwrap_or(0)
    }

    /// Whether every pair lies inside one block `((n-1)h, nh]`.
    pub fn is_fixed_step(&self, h: u64) -> bool {
        h > 0 && self.pairs.iter().all(|&(a, b)| (a - 1) / h == (b - 1) / h)
    }
}
