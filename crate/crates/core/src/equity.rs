//! Equity axioms: anonymity and the generalized Pigou-Dalton family.
//!
//! A [`TransferInstance`] holds two streams and a pairing. The *unequal*
//! stream is the one before the transfers; the *equal* stream is obtained
//! from it by moving `ε_k` from the rich member of every pair to the poor
//! one without reversing their order. Each transfer principle asks that the
//! equal stream be strictly preferred, and the variants differ only in what
//! they demand of the pairing's domain.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exec::Execution;
use crate::gini::{w_prefix, w_prefix_at, welfare_exact, NAIVE_CAP};
use crate::pairing::{DensityPair, PairingFunction};
use crate::rational::Rational;
use crate::stream::{Alphabet, Stream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "pd")]
    Pd,
    #[serde(rename = "gpd")]
    Gpd,
    #[serde(rename = "s-gpd")]
    SGpd,
    #[serde(rename = "ipd")]
    Ipd,
    #[serde(rename = "apd")]
    Apd,
    #[serde(rename = "wpd")]
    Wpd,
    #[serde(rename = "s-apd")]
    SApd,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::Pd,
        Variant::Gpd,
        Variant::SGpd,
        Variant::Ipd,
        Variant::Apd,
        Variant::Wpd,
        Variant::SApd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Pd => "pd",
            Variant::Gpd => "gpd",
            Variant::SGpd => "s-gpd",
            Variant::Ipd => "ipd",
            Variant::Apd => "apd",
            Variant::Wpd => "wpd",
            Variant::SApd => "s-apd",
        }
    }

    pub fn is_fixed_step(self) -> bool {
        matches!(self, Variant::SGpd | Variant::SApd)
    }

    /// Variants whose instance conditions are implied by this one's: a valid
    /// certificate for `self` must also be valid for each of these.
    pub fn weaker(self) -> &'static [Variant] {
        match self {
            Variant::Pd => &[Variant::Gpd, Variant::SGpd],
            Variant::Gpd => &[],
            Variant::SGpd => &[Variant::Gpd],
            Variant::Ipd => &[Variant::Gpd],
            Variant::Apd => &[Variant::Ipd, Variant::Gpd],
            Variant::Wpd => &[Variant::Apd, Variant::Ipd, Variant::Gpd],
            Variant::SApd => &[Variant::Apd, Variant::Ipd, Variant::SGpd, Variant::Gpd],
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variant {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct InstanceRepr {
    unequal: Stream,
    equal: Stream,
    pairing: PairingFunction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct TransferInstance {
    unequal: Stream,
    equal: Stream,
    pairing: PairingFunction,
}

impl TryFrom<InstanceRepr> for TransferInstance {
    type Error = Error;
    fn try_from(r: InstanceRepr) -> Result<Self, Error> {
        TransferInstance::new(r.unequal, r.equal, r.pairing)
    }
}

impl From<TransferInstance> for InstanceRepr {
    fn from(t: TransferInstance) -> Self {
        InstanceRepr { unequal: t.unequal, equal: t.equal, pairing: t.pairing }
    }
}

/// Block-aligned start and period of the joint pattern of some streams and a
/// pairing. Past `start`, every generation `k` and `k + period` look alike.
fn joint_horizon(streams: &[&Stream], pairing: &PairingFunction) -> (u64, u64) {
    let h = pairing.step() as u64;
    let q = streams
        .iter()
        .map(|s| s.preperiod_len() as u64)
        .chain([pairing.preperiod_span()])
        .max()
        .unwrap_or(0);
    let start = q.div_ceil(h) * h;
    let period = streams
        .iter()
        .map(|s| s.period_len() as u64)
        .fold(pairing.period_span(), |l, p| l.lcm(&p));
    (start, period)
}

impl TransferInstance {
    /// Rejects pairings that are not fixed-point-free involutions.
    pub fn new(unequal: Stream, equal: Stream, pairing: PairingFunction) -> Result<Self, Error> {
        if let Some(v) = pairing.validate().violations.first() {
            return Err(Error::InvalidPairing(format!(
                "block {} offset {}: {:?}",
                v.block, v.offset, v.kind
            )));
        }
        Ok(TransferInstance { unequal, equal, pairing })
    }

    pub fn unequal(&self) -> &Stream {
        &self.unequal
    }

    pub fn equal(&self) -> &Stream {
        &self.equal
    }

    pub fn pairing(&self) -> &PairingFunction {
        &self.pairing
    }

    /// Number of leading generations that determine the whole instance.
    pub fn horizon(&self) -> u64 {
        let (start, period) = joint_horizon(&[&self.unequal, &self.equal], &self.pairing);
        start + period
    }

    pub fn ambient_alphabet(&self) -> Alphabet {
        self.unequal.alphabet().union(self.equal.alphabet())
    }

    /// `|x_k − y_k|` for a paired generation; `None` outside the domain.
    pub fn epsilon_at(&self, k: u64) -> Result<Option<Rational>, Error> {
        Ok(match self.pairing.apply(k)? {
            Some(_) => Some(self.unequal.value_at(k)?.abs_diff(self.equal.value_at(k)?)),
            None => None,
        })
    }

    /// One entry per pair `(k, α(k))` with `k < α(k)` inside [`Self::horizon`].
    pub fn epsilons(&self) -> Vec<EpsilonEntry> {
        (1..=self.horizon())
            .filter_map(|k| {
                let p = self.pairing.apply(k).expect("k >= 1")?;
                (k < p).then(|| EpsilonEntry {
                    k,
                    partner: p,
                    epsilon: self.epsilon_at(k).expect("k >= 1").expect("k is paired"),
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonEntry {
    pub k: u64,
    pub partner: u64,
    pub epsilon: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnpairedChanged { k: u64, unequal: Rational, equal: Rational },
    /// Equal stream gives the pair the same level, so nobody is richer.
    TiedPair { k: u64, partner: u64 },
    /// The poor side's gain differs from the rich side's loss.
    EpsilonMismatch { k: u64, partner: u64, poor_gain: Rational, rich_loss: Rational },
    /// Gain and loss agree but are not positive.
    NotASpread { k: u64, partner: u64, epsilon: Rational },
    BelowMinGap { k: u64, epsilon: Rational, min_gap: Rational },
    EmptyDomain,
    NotSinglePair { domain_size: Option<usize> },
    FiniteDomain,
    ZeroDensity,
    DomainNotEverything,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnpairedChanged { k, unequal, equal } => {
                write!(f, "unpaired generation changed at k={k} ({unequal} vs {equal})")
            }
            Violation::TiedPair { k, partner } => {
                write!(f, "tied pair at k={k}, partner {partner}: no rich and poor side")
            }
            Violation::EpsilonMismatch { k, partner, poor_gain, rich_loss } => write!(
                f,
                "epsilon mismatch at k={k} (partner {partner}): poor side gains {poor_gain}, rich side loses {rich_loss}"
            ),
            Violation::NotASpread { k, partner, epsilon } => {
                write!(f, "not a progressive transfer at k={k} (partner {partner}), epsilon {epsilon}")
            }
            Violation::BelowMinGap { k, epsilon, min_gap } => {
                write!(f, "epsilon {epsilon} at k={k} below alphabet gap {min_gap}")
            }
            Violation::EmptyDomain => f.write_str("pairing domain is empty"),
            Violation::NotSinglePair { domain_size } => match domain_size {
                Some(n) => write!(f, "pd needs exactly one pair, domain has {n} generations"),
                None => f.write_str("pd needs exactly one pair, domain is infinite"),
            },
            Violation::FiniteDomain => f.write_str("pairing domain is finite"),
            Violation::ZeroDensity => f.write_str("pairing domain has zero lower density"),
            Violation::DomainNotEverything => f.write_str("pairing domain is not all of N"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferCertificate {
    pub variant: Variant,
    pub valid: bool,
    pub step: Option<usize>,
    pub dom_density: DensityPair,
    pub min_epsilon: Option<Rational>,
    pub epsilons: Vec<EpsilonEntry>,
    pub violations: Vec<Violation>,
    pub instance: TransferInstance,
}

fn pair_violations(inst: &TransferInstance) -> Vec<Violation> {
    let min_gap = inst.ambient_alphabet().min_gap();
    let mut out = Vec::new();
    for k in 1..=inst.horizon() {
        let x = inst.unequal.value_at(k).expect("k >= 1");
        let y = inst.equal.value_at(k).expect("k >= 1");
        let Some(p) = inst.pairing.apply(k).expect("k >= 1") else {
            if x != y {
                out.push(Violation::UnpairedChanged { k, unequal: x.clone(), equal: y.clone() });
            }
            continue;
        };
        if p < k {
            continue;
        }
        let xp = inst.unequal.value_at(p).expect("p >= 1");
        let yp = inst.equal.value_at(p).expect("p >= 1");
        let (x_lo, y_lo, x_hi, y_hi) = match y.cmp(yp) {
            std::cmp::Ordering::Less => (x, y, xp, yp),
            std::cmp::Ordering::Greater => (xp, yp, x, y),
            std::cmp::Ordering::Equal => {
                out.push(Violation::TiedPair { k, partner: p });
                continue;
            }
        };
        let poor_gain = y_lo - x_lo;
        let rich_loss = x_hi - y_hi;
        if poor_gain != rich_loss {
            out.push(Violation::EpsilonMismatch { k, partner: p, poor_gain, rich_loss });
        } else if !poor_gain.is_positive() {
            out.push(Violation::NotASpread { k, partner: p, epsilon: poor_gain });
        } else if let Some(g) = &min_gap {
            if &poor_gain < g {
                out.push(Violation::BelowMinGap { k, epsilon: poor_gain, min_gap: g.clone() });
            }
        }
    }
    out
}

/// Checks an instance against one transfer principle.
pub fn verify_transfer(inst: &TransferInstance, variant: Variant) -> TransferCertificate {
    let pairing = &inst.pairing;
    let dom_density = pairing.domain().density();
    let mut violations = pair_violations(inst);
    if pairing.domain_is_empty() {
        violations.push(Violation::EmptyDomain);
    } else {
        match variant {
            Variant::Pd => {
                let size = pairing.finite_domain_size();
                if size != Some(2) {
                    violations.push(Violation::NotSinglePair { domain_size: size });
                }
            }
            Variant::Gpd | Variant::SGpd => {}
            Variant::Ipd => {
                if !pairing.domain_is_infinite() {
                    violations.push(Violation::FiniteDomain);
                }
            }
            Variant::Apd | Variant::SApd => {
                if !dom_density.lower.is_positive() {
                    violations.push(Violation::ZeroDensity);
                }
            }
            Variant::Wpd => {
                if !pairing.domain_is_everything() {
                    violations.push(Violation::DomainNotEverything);
                }
            }
        }
    }
    let epsilons = inst.epsilons();
    let min_epsilon = epsilons.iter().map(|e| e.epsilon.clone()).min();
    TransferCertificate {
        variant,
        valid: violations.is_empty(),
        step: variant.is_fixed_step().then_some(pairing.step()),
        dom_density,
        min_epsilon,
        epsilons,
        violations,
        instance: inst.clone(),
    }
}

/// How much to widen each pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EpsilonRule {
    Uniform(Rational),
    /// Indexed by the lower generation of the pair minus one, covering the
    /// joint horizon of the equal stream and the pairing.
    PerGeneration(Vec<Rational>),
}

/// Builds the unequal stream by spreading each pair of `equal` apart:
/// the poorer member loses `ε`, the richer gains `ε`. Every resulting level
/// must lie in `alphabet`.
pub fn apply_transfers(
    equal: &Stream,
    pairing: &PairingFunction,
    rule: &EpsilonRule,
    alphabet: &Alphabet,
) -> Result<TransferInstance, Error> {
    if let Some(v) = pairing.validate().violations.first() {
        return Err(Error::InvalidPairing(format!(
            "block {} offset {}: {:?}",
            v.block, v.offset, v.kind
        )));
    }
    if pairing.domain_is_empty() {
        return Err(Error::Transfer("pairing domain is empty; nothing to widen".into()));
    }
    let (start, period) = joint_horizon(&[equal], pairing);
    let horizon = start + period;
    let mut levels = Vec::with_capacity(horizon as usize);
    for k in 1..=horizon {
        let y = equal.value_at(k)?;
        let x = match pairing.apply(k)? {
            None => y.clone(),
            Some(p) => {
                let yp = equal.value_at(p)?;
                if y == yp {
                    return Err(Error::Transfer(format!(
                        "generations {k} and {p} share level {y}; no rich and poor side"
                    )));
                }
                let lower = k.min(p);
                let eps = match rule {
                    EpsilonRule::Uniform(e) => e.clone(),
                    EpsilonRule::PerGeneration(table) => table
                        .get((lower - 1) as usize)
                        .cloned()
                        .ok_or_else(|| {
                            Error::Transfer(format!("no epsilon given for generation {lower}"))
                        })?,
                };
                if !eps.is_positive() {
                    return Err(Error::Transfer(format!("epsilon {eps} at generation {lower} is not positive")));
                }
                if y < yp {
                    y - &eps
                } else {
                    y + &eps
                }
            }
        };
        let index = alphabet.position(&x).ok_or_else(|| {
            Error::Transfer(format!("level {x} at generation {k} is outside the alphabet"))
        })?;
        levels.push(index);
    }
    let tail = levels.split_off(start as usize);
    let unequal = Stream::new(alphabet.clone(), levels, tail)?.canonical();
    TransferInstance::new(unequal, equal.clone(), pairing.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnonymityReport {
    pub i: u64,
    pub j: u64,
    pub welfare: Rational,
    pub welfare_swapped: Rational,
    /// Horizons `n` (all `n` in this range) where both prefix sums were compared.
    pub checked_from: u64,
    pub checked_to: u64,
    pub prefix_mismatches: Vec<u64>,
    pub holds: bool,
}

/// Welfare and every prefix functional past `max(i, j)` must survive
/// exchanging generations `i` and `j`.
pub fn check_anonymity(s: &Stream, i: u64, j: u64) -> Result<AnonymityReport, Error> {
    let swapped = s.swap_coordinates(i, j)?;
    let welfare = welfare_exact(s);
    let welfare_swapped = welfare_exact(&swapped);
    let from = i.max(j);
    let to = from + 2 * (s.preperiod_len() + s.period_len()) as u64;
    let prefix_mismatches: Vec<u64> = (from..=to)
        .filter(|&n| {
            w_prefix_at(s, n).expect("n >= 1").raw_double_sum
                != w_prefix_at(&swapped, n).expect("n >= 1").raw_double_sum
        })
        .collect();
    Ok(AnonymityReport {
        i,
        j,
        holds: welfare == welfare_swapped && prefix_mismatches.is_empty(),
        welfare,
        welfare_swapped,
        checked_from: from,
        checked_to: to,
        prefix_mismatches,
    })
}

/// One row of the finite-horizon inequality
/// `Σ|x_k − x_j| ≥ Σ|y_k − y_j| + (2/5)·ε·D²` over `[1, N·h]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop1Row {
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(rename = "H_N")]
    pub horizon: u64,
    pub raw_x: Rational,
    pub raw_y: Rational,
    /// `|dom(α) ∩ [1, H_N]|`.
    #[serde(rename = "D")]
    pub domain_count: u64,
    /// Smallest `ε_k` over the domain inside the horizon.
    pub epsilon: Option<Rational>,
    pub bound: Rational,
    pub slack: Rational,
    pub holds: bool,
}

/// Precomputed state for running the bound check at many horizons.
pub struct Prop1Checker<'a> {
    inst: &'a TransferInstance,
    /// `prefix_min[k-1]` is the minimum `ε` over the domain in `[1, k]`.
    prefix_min: Vec<Option<Rational>>,
}

impl<'a> Prop1Checker<'a> {
    pub fn new(inst: &'a TransferInstance) -> Self {
        let mut prefix_min = Vec::with_capacity(inst.horizon() as usize);
        let mut cur: Option<Rational> = None;
        for k in 1..=inst.horizon() {
            if let Some(e) = inst.epsilon_at(k).expect("k >= 1") {
                cur = Some(match cur {
                    Some(c) if c <= e => c,
                    _ => e,
                });
            }
            prefix_min.push(cur.clone());
        }
        Prop1Checker { inst, prefix_min }
    }

    pub fn check(&self, big_n: u64) -> Result<Prop1Row, Error> {
        let h = self.inst.pairing.step() as u64;
        let x = w_prefix(&self.inst.unequal, h, big_n)?;
        let y = w_prefix(&self.inst.equal, h, big_n)?;
        let horizon = x.n;
        let domain_count = self.inst.pairing.domain().prefix_count(horizon);
        let idx = (horizon.min(self.prefix_min.len() as u64) - 1) as usize;
        let epsilon = self.prefix_min[idx].clone();
        let bound = match &epsilon {
            Some(e) if domain_count > 0 => {
                let d = Rational::from(domain_count as i64);
                &y.raw_double_sum + Rational::ratio(2, 5) * e * &d * &d
            }
            _ => y.raw_double_sum.clone(),
        };
        let slack = &x.raw_double_sum - &bound;
        Ok(Prop1Row {
            big_n,
            horizon,
            holds: !slack.is_negative(),
            raw_x: x.raw_double_sum,
            raw_y: y.raw_double_sum,
            domain_count,
            epsilon,
            bound,
            slack,
        })
    }

    /// Rows for `N = 1..=n_max`.
    pub fn rows(&self, n_max: u64, exec: Execution) -> Vec<Prop1Row> {
        exec.map_range(n_max as usize, |i| self.check(i as u64 + 1).expect("N >= 1"))
    }
}

pub fn prop1_bound_check(inst: &TransferInstance, big_n: u64) -> Result<Prop1Row, Error> {
    Prop1Checker::new(inst).check(big_n)
}

/// Limit form of the bound: `W(equal) − W(unequal) ≥ (2/5)·g·d²` with `g`
/// the smallest gap of the ambient alphabet and `d` the domain density.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WelfareGapReport {
    pub w_unequal: Rational,
    pub w_equal: Rational,
    pub gap: Rational,
    pub min_gap: Option<Rational>,
    pub density: Rational,
    pub bound: Rational,
    pub holds: bool,
}

pub fn welfare_gap_check(inst: &TransferInstance) -> WelfareGapReport {
    let w_unequal = welfare_exact(&inst.unequal);
    let w_equal = welfare_exact(&inst.equal);
    let gap = &w_equal - &w_unequal;
    let min_gap = inst.ambient_alphabet().min_gap();
    let density = inst.pairing.domain().density().lower;
    let bound = match &min_gap {
        Some(g) => Rational::ratio(2, 5) * g * &density * &density,
        None => Rational::zero(),
    };
    WelfareGapReport {
        holds: gap >= bound,
        w_unequal,
        w_equal,
        gap,
        min_gap,
        density,
        bound,
    }
}

/// Two pairs in the configuration where generation `k` is the rich member
/// of its pair and `j` the poor member of another, described by the equal
/// stream's levels and the two transfer sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case4Config {
    pub y_k: Rational,
    pub eps_k: Rational,
    pub y_j: Rational,
    pub eps_j: Rational,
    pub y_ak: Rational,
    pub y_aj: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case4Report {
    pub config: Case4Config,
    pub x_sum: Rational,
    pub y_sum: Rational,
    /// `x_sum − y_sum`.
    pub gain: Rational,
    /// `gain − 2·min(ε_j, ε_k)`.
    pub slack: Rational,
    pub holds: bool,
    /// Whether the stronger `gain ≥ 2·ε_j` also holds.
    pub holds_eps_j_form: bool,
}

/// Compares the five absolute differences
/// `{k,j}, {k,α(j)}, {j,α(k)}, {α(k),α(j)}, {j,α(j)}` before and after the
/// transfers.
pub fn case4_inequality_check(c: &Case4Config) -> Result<Case4Report, Error> {
    if !c.eps_k.is_positive() || !c.eps_j.is_positive() {
        return Err(Error::Case4Precondition("epsilons must be positive".into()));
    }
    if c.y_ak >= c.y_k {
        return Err(Error::Case4Precondition(format!(
            "k must be the rich member: need y_ak < y_k, got {} >= {}",
            c.y_ak, c.y_k
        )));
    }
    if c.y_j >= c.y_aj {
        return Err(Error::Case4Precondition(format!(
            "j must be the poor member: need y_j < y_aj, got {} >= {}",
            c.y_j, c.y_aj
        )));
    }
    let x_k = &c.y_k + &c.eps_k;
    let x_ak = &c.y_ak - &c.eps_k;
    let x_j = &c.y_j - &c.eps_j;
    let x_aj = &c.y_aj + &c.eps_j;
    let five = |k: &Rational, ak: &Rational, j: &Rational, aj: &Rational| -> Rational {
        k.abs_diff(j) + k.abs_diff(aj) + j.abs_diff(ak) + ak.abs_diff(aj) + j.abs_diff(aj)
    };
    let x_sum = five(&x_k, &x_ak, &x_j, &x_aj);
    let y_sum = five(&c.y_k, &c.y_ak, &c.y_j, &c.y_aj);
    let gain = &x_sum - &y_sum;
    let min_eps = (&c.eps_j).min(&c.eps_k);
    let slack = &gain - Rational::from(2) * min_eps;
    let holds_eps_j_form = gain >= Rational::from(2) * &c.eps_j;
    Ok(Case4Report {
        config: c.clone(),
        holds: !slack.is_negative(),
        x_sum,
        y_sum,
        gain,
        slack,
        holds_eps_j_form,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case4ScanReport {
    pub value_max: u32,
    pub eps_max: u32,
    pub configurations: u64,
    pub violations: Vec<Case4Config>,
    pub worst_slack: Option<Rational>,
    /// Smallest `gain / (2·min ε)` seen.
    pub worst_ratio: Option<Rational>,
    pub eps_j_form_violations: u64,
    /// A few configurations where `gain ≥ 2·ε_j` fails, for inspection.
    pub eps_j_form_examples: Vec<Case4Config>,
}

/// Exhaustive scan: equal-stream levels in `1..=value_max`, transfer sizes in
/// `1..=eps_max`. Unequal levels may leave the grid.
pub fn case4_scan(value_max: u32, eps_max: u32, exec: Execution) -> Case4ScanReport {
    let v = value_max as i64;
    let e = eps_max as i64;
    let mut rich_pairs = Vec::new();
    for hi in 1..=v {
        for lo in 1..hi {
            rich_pairs.push((lo, hi));
        }
    }
    let reports: Vec<Vec<Case4Report>> = exec.map(&rich_pairs, |&(y_ak, y_k)| {
        let mut out = Vec::new();
        for &(y_j, y_aj) in &rich_pairs {
            for eps_k in 1..=e {
                for eps_j in 1..=e {
                    let config = Case4Config {
                        y_k: y_k.into(),
                        eps_k: eps_k.into(),
                        y_j: y_j.into(),
                        eps_j: eps_j.into(),
                        y_ak: y_ak.into(),
                        y_aj: y_aj.into(),
                    };
                    out.push(case4_inequality_check(&config).expect("grid satisfies preconditions"));
                }
            }
        }
        out
    });
    let mut report = Case4ScanReport {
        value_max,
        eps_max,
        configurations: 0,
        violations: vec![],
        worst_slack: None,
        worst_ratio: None,
        eps_j_form_violations: 0,
        eps_j_form_examples: vec![],
    };
    for r in reports.into_iter().flatten() {
        report.configurations += 1;
        if !r.holds {
            report.violations.push(r.config.clone());
        }
        if !r.holds_eps_j_form {
            report.eps_j_form_violations += 1;
            if report.eps_j_form_examples.len() < 5 {
                report.eps_j_form_examples.push(r.config.clone());
            }
        }
        let min_eps = (&r.config.eps_j).min(&r.config.eps_k);
        let ratio = &r.gain / &(Rational::from(2) * min_eps);
        if report.worst_slack.as_ref().is_none_or(|w| r.slack < *w) {
            report.worst_slack = Some(r.slack.clone());
        }
        if report.worst_ratio.as_ref().is_none_or(|w| ratio < *w) {
            report.worst_ratio = Some(ratio);
        }
    }
    report
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CaseTally {
    /// Ordered index pairs `(k, j)` in this case.
    pub pairs: u64,
    /// `Σ (|x_k − x_j| − |y_k − y_j|)` over those pairs.
    pub contribution: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseDecomposition {
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(rename = "H_N")]
    pub horizon: u64,
    pub diagonal: CaseTally,
    /// `j = α(k)`.
    pub case1: CaseTally,
    /// Both outside the domain.
    pub case2: CaseTally,
    /// Exactly one inside the domain.
    pub case3: CaseTally,
    /// Both inside the domain, in different pairs.
    pub case4: CaseTally,
    pub raw_difference: Rational,
    pub reproduces_raw_difference: bool,
    /// Pairs where `|x_j − x_k| ≠ |y_j − y_k| + 2ε`.
    pub case1_failures: u64,
    pub case2_failures: u64,
    /// Unpaired `j` against a whole pair `{k, α(k)}`: exact cancellation,
    /// strict gain, or loss.
    pub case3_groups_exact: u64,
    pub case3_groups_gain: u64,
    pub case3_groups_loss: u64,
    /// Rich `k`, poor `j` from different pairs: five-combination check with
    /// the `2·min(ε_j, ε_k)` correction.
    pub case4_groups: u64,
    pub case4_failures: u64,
    pub holds: bool,
}

/// Classifies every ordered pair in `[1, N·h]²` and checks each case.
pub fn case_decomposition_check(
    inst: &TransferInstance,
    big_n: u64,
    exec: Execution,
) -> Result<CaseDecomposition, Error> {
    let h = inst.pairing.step() as u64;
    if big_n == 0 {
        return Err(Error::ZeroHorizon);
    }
    let horizon = big_n * h;
    if horizon as usize > NAIVE_CAP {
        return Err(Error::NaiveCapExceeded { len: horizon as usize, cap: NAIVE_CAP });
    }
    let n = horizon as usize;
    let x = inst.unequal.prefix(n)?;
    let y = inst.equal.prefix(n)?;
    let partner: Vec<Option<usize>> = (1..=horizon)
        .map(|k| inst.pairing.apply(k).expect("k >= 1").map(|p| (p - 1) as usize))
        .collect();
    let eps: Vec<Rational> = (0..n).map(|k| x[k].abs_diff(&y[k])).collect();
    let diff = |a: usize, b: usize| x[a].abs_diff(&x[b]) - y[a].abs_diff(&y[b]);

    #[derive(Default)]
    struct Row {
        tallies: [CaseTally; 5],
        case1_failures: u64,
        case2_failures: u64,
        case3: [u64; 3],
        case4_groups: u64,
        case4_failures: u64,
    }

    let rows = exec.map_range(n, |k| {
        let mut row = Row::default();
        for j in 0..n {
            let d = diff(k, j);
            let case = if k == j {
                0
            } else if partner[k] == Some(j) {
                if d != Rational::from(2) * &eps[k] {
                    row.case1_failures += 1;
                }
                1
            } else {
                match (partner[k].is_some(), partner[j].is_some()) {
                    (false, false) => {
                        if !d.is_zero() {
                            row.case2_failures += 1;
                        }
                        2
                    }
                    (true, true) => 4,
                    _ => 3,
                }
            };
            row.tallies[case].pairs += 1;
            row.tallies[case].contribution += &d;

            // Group checks, each group counted once.
            if let (None, Some(pk)) = (partner[j], partner[k]) {
                if k < pk {
                    let g = diff(j, k) + diff(j, pk);
                    let slot = match g.cmp(&Rational::zero()) {
                        std::cmp::Ordering::Equal => 0,
                        std::cmp::Ordering::Greater => 1,
                        std::cmp::Ordering::Less => 2,
                    };
                    row.case3[slot] += 1;
                }
            }
            if let (Some(ak), Some(aj)) = (partner[k], partner[j]) {
                let k_rich = y[k] > y[ak];
                let j_poor = y[j] < y[aj];
                if k_rich && j_poor && ak != j && k != j {
                    let gain = diff(k, j) + diff(k, aj) + diff(j, ak) + diff(ak, aj) + diff(j, aj);
                    let min_eps = (&eps[k]).min(&eps[j]);
                    row.case4_groups += 1;
                    if gain < Rational::from(2) * min_eps {
                        row.case4_failures += 1;
                    }
                }
            }
        }
        row
    });

    let mut total = Row::default();
    for r in rows {
        for (t, s) in total.tallies.iter_mut().zip(r.tallies) {
            t.pairs += s.pairs;
            t.contribution += &s.contribution;
        }
        total.case1_failures += r.case1_failures;
        total.case2_failures += r.case2_failures;
        for i in 0..3 {
            total.case3[i] += r.case3[i];
        }
        total.case4_groups += r.case4_groups;
        total.case4_failures += r.case4_failures;
    }
    let raw_difference = w_prefix_at(&inst.unequal, horizon)?.raw_double_sum
        - w_prefix_at(&inst.equal, horizon)?.raw_double_sum;
    let summed: Rational = total.tallies.iter().map(|t| &t.contribution).sum();
    let [diagonal, case1, case2, case3, case4] = total.tallies;
    let reproduces = summed == raw_difference;
    Ok(CaseDecomposition {
        big_n,
        horizon,
        diagonal,
        case1,
        case2,
        case3,
        case4,
        raw_difference,
        reproduces_raw_difference: reproduces,
        case1_failures: total.case1_failures,
        case2_failures: total.case2_failures,
        case3_groups_exact: total.case3[0],
        case3_groups_gain: total.case3[1],
        case3_groups_loss: total.case3[2],
        case4_groups: total.case4_groups,
        case4_failures: total.case4_failures,
        holds: reproduces
            && total.case1_failures == 0
            && total.case2_failures == 0
            && total.case3[2] == 0
            && total.case4_failures == 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop2Row {
    pub k: u64,
    pub epsilon: Rational,
    pub w_unequal: Rational,
    pub w_equal: Rational,
    pub gap: Rational,
    /// `(2/5)·ε_k·d²` with `d = 1`.
    pub uniform_bound: Rational,
    pub certified_s_apd: bool,
}

/// Builds the `k`-th instance of the vanishing-gap family: the unequal stream
/// alternates `1/2 ∓ 1/(k+1)`, the equal stream `1/2 ∓ 1/(k+2)`, every
/// adjacent pair is linked. Requires an even step.
pub fn prop2_instance(k: u64, h: usize) -> Result<TransferInstance, Error> {
    if h == 0 || h % 2 == 1 {
        return Err(Error::InvalidArgument(format!("step must be even and positive, got {h}")));
    }
    let half = Rational::ratio(1, 2);
    let wide = Rational::new(1, k as i64 + 1)?;
    let narrow = Rational::new(1, k as i64 + 2)?;
    let pattern = |d: &Rational| -> Vec<Rational> {
        (0..h).map(|m| if m % 2 == 0 { &half - d } else { &half + d }).collect()
    };
    let unequal = Stream::periodic(&pattern(&wide))?.canonical();
    let equal = Stream::periodic(&pattern(&narrow))?.canonical();
    TransferInstance::new(unequal, equal, PairingFunction::all_swap(h)?)
}

pub fn prop2_probe(k_max: u64, h: usize) -> Result<Vec<Prop2Row>, Error> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    (1..=k_max)
        .map(|k| {
            let inst = prop2_instance(k, h)?;
            let epsilon = inst.epsilons()[0].epsilon.clone();
            let w_unequal = welfare_exact(inst.unequal());
            let w_equal = welfare_exact(inst.equal());
            Ok(Prop2Row {
                k,
                gap: &w_equal - &w_unequal,
                uniform_bound: Rational::ratio(2, 5) * &epsilon,
                certified_s_apd: verify_transfer(&inst, Variant::SApd).valid,
                epsilon,
                w_unequal,
                w_equal,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::BlockInvolution;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    fn canonical_instance() -> TransferInstance {
        TransferInstance::new(
            Stream::periodic_ints(&[1, 4]).unwrap(),
            Stream::periodic_ints(&[2, 3]).unwrap(),
            PairingFunction::all_swap(2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn canonical_instance_certifies_s_apd() {
        let cert = verify_transfer(&canonical_instance(), Variant::SApd);
        assert!(cert.valid, "{:?}", cert.violations);
        assert_eq!(cert.dom_density, DensityPair::exact(Rational::one()));
        assert_eq!(cert.step, Some(2));
        assert_eq!(cert.min_epsilon, Some(r(1)));
    }

    #[test]
    fn canonical_instance_brute_force_scan() {
        // Condition scan over n ≤ 10^4, independent of the horizon logic.
        let inst = canonical_instance();
        for k in 1..=10_000u64 {
            let p = inst.pairing().apply(k).unwrap().unwrap();
            let (x, y) = (inst.unequal().value_at(k).unwrap(), inst.equal().value_at(k).unwrap());
            let (xp, yp) = (inst.unequal().value_at(p).unwrap(), inst.equal().value_at(p).unwrap());
            let (lo, hi) = if y < yp { ((x, y), (xp, yp)) } else { ((xp, yp), (x, y)) };
            assert!(lo.0 < lo.1 && lo.1 < hi.1 && hi.1 < hi.0);
            assert_eq!(x + xp, y + yp);
        }
    }

    #[test]
    fn empty_domain_is_invalid_for_every_variant() {
        let s = Stream::periodic_ints(&[1, 4]).unwrap();
        let inst = TransferInstance::new(s.clone(), s, PairingFunction::empty(2).unwrap()).unwrap();
        for v in Variant::ALL {
            let cert = verify_transfer(&inst, v);
            assert!(!cert.valid);
            assert!(cert.violations.contains(&Violation::EmptyDomain));
        }
    }

    #[test]
    fn leaky_transfer_is_rejected() {
        let inst = TransferInstance::new(
            Stream::periodic_ints(&[1, 4]).unwrap(),
            Stream::periodic_ints(&[2, 4]).unwrap(),
            PairingFunction::all_swap(2).unwrap(),
        )
        .unwrap();
        let cert = verify_transfer(&inst, Variant::SApd);
        assert!(!cert.valid);
        assert!(matches!(cert.violations[0], Violation::EpsilonMismatch { k: 1, .. }));
        assert!(cert.violations[0].to_string().starts_with("epsilon mismatch at k=1"));
    }

    #[test]
    fn rank_switch_and_ties_are_rejected() {
        // Pair swaps levels entirely: 1,4 -> 4,1 is a regressive move.
        let tie = TransferInstance::new(
            Stream::periodic_ints(&[1, 4]).unwrap(),
            Stream::periodic_ints(&[3, 3]).unwrap(),
            PairingFunction::all_swap(2).unwrap(),
        )
        .unwrap();
        assert!(matches!(verify_transfer(&tie, Variant::Gpd).violations[0], Violation::TiedPair { .. }));
        let regressive = TransferInstance::new(
            Stream::periodic_ints(&[2, 3]).unwrap(),
            Stream::periodic_ints(&[1, 4]).unwrap(),
            PairingFunction::all_swap(2).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            verify_transfer(&regressive, Variant::Gpd).violations[0],
            Violation::NotASpread { .. }
        ));
    }

    #[test]
    fn unpaired_generations_must_match() {
        let p = PairingFunction::periodic(3, BlockInvolution(vec![Some(1), Some(0), None])).unwrap();
        let inst = TransferInstance::new(
            Stream::periodic_ints(&[1, 4, 7]).unwrap(),
            Stream::periodic_ints(&[2, 3, 6]).unwrap(),
            p,
        )
        .unwrap();
        let cert = verify_transfer(&inst, Variant::Apd);
        assert_eq!(cert.violations.len(), 1);
        assert!(matches!(cert.violations[0], Violation::UnpairedChanged { k: 3, .. }));
    }

    #[test]
    fn variant_side_conditions() {
        // One pair in the first block only.
        let single = PairingFunction::new_valid(
            2,
            vec![BlockInvolution::adjacent_swaps(2)],
            vec![BlockInvolution::unpaired(2)],
        )
        .unwrap();
        let inst = TransferInstance::new(
            Stream::from_values(&[r(1), r(4)], &[r(5)]).unwrap(),
            Stream::from_values(&[r(2), r(3)], &[r(5)]).unwrap(),
            single,
        )
        .unwrap();
        let ok = |v| verify_transfer(&inst, v).valid;
        assert!(ok(Variant::Pd));
        assert!(ok(Variant::Gpd));
        assert!(ok(Variant::SGpd));
        assert!(!ok(Variant::Ipd));
        assert!(!ok(Variant::Apd));
        assert!(!ok(Variant::Wpd));
        assert!(!ok(Variant::SApd));

        let all = canonical_instance();
        for v in Variant::ALL {
            assert_eq!(verify_transfer(&all, v).valid, v != Variant::Pd, "{v}");
        }

        let half = TransferInstance::new(
            Stream::periodic_ints(&[1, 4, 5]).unwrap(),
            Stream::periodic_ints(&[2, 3, 5]).unwrap(),
            PairingFunction::periodic(3, BlockInvolution::from_pairs(3, &[(0, 1)])).unwrap(),
        )
        .unwrap();
        let cert = verify_transfer(&half, Variant::Wpd);
        assert_eq!(cert.violations, vec![Violation::DomainNotEverything]);
        assert!(verify_transfer(&half, Variant::SApd).valid);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("xpd".parse::<Variant>().is_err());
    }

    #[test]
    fn apply_transfers_examples() {
        let alphabet = Alphabet::new((1..=4).map(r).collect()).unwrap();
        let equal = Stream::periodic_ints(&[2, 3]).unwrap();
        let swap = PairingFunction::all_swap(2).unwrap();
        let inst = apply_transfers(&equal, &swap, &EpsilonRule::Uniform(r(1)), &alphabet).unwrap();
        assert_eq!(inst.unequal(), &Stream::periodic_ints(&[1, 4]).unwrap());
        assert!(verify_transfer(&inst, Variant::SApd).valid);

        assert!(matches!(
            apply_transfers(&equal, &swap, &EpsilonRule::Uniform(r(2)), &alphabet),
            Err(Error::Transfer(_))
        ));
        let flat = Stream::constant(r(2));
        assert!(matches!(
            apply_transfers(&flat, &swap, &EpsilonRule::Uniform(r(1)), &alphabet),
            Err(Error::Transfer(_))
        ));
    }

    #[test]
    fn apply_transfers_per_generation_rule() {
        let alphabet = Alphabet::new((0..=6).map(r).collect()).unwrap();
        let equal = Stream::periodic_ints(&[3, 2, 2, 3]).unwrap();
        let swap = PairingFunction::all_swap(4).unwrap();
        let rule = EpsilonRule::PerGeneration(vec![r(1), r(0), r(2), r(0)]);
        let inst = apply_transfers(&equal, &swap, &rule, &alphabet).unwrap();
        assert_eq!(inst.unequal(), &Stream::periodic_ints(&[4, 1, 0, 5]).unwrap());
        let cert = verify_transfer(&inst, Variant::Wpd);
        assert!(cert.valid);
        assert_eq!(cert.min_epsilon, Some(r(1)));
        let short = EpsilonRule::PerGeneration(vec![r(1)]);
        assert!(apply_transfers(&equal, &swap, &short, &alphabet).is_err());
    }

    #[test]
    fn anonymity_examples() {
        let s = Stream::periodic_ints(&[2, 3, 5]).unwrap();
        let rep = check_anonymity(&s, 1, 2).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.welfare, Rational::ratio(-4, 3));
        assert_eq!(rep.welfare_swapped, Rational::ratio(-4, 3));

        let c = Stream::constant(r(3));
        let rep = check_anonymity(&c, 5, 2).unwrap();
        assert!(rep.holds && rep.welfare.is_zero());

        let rep = check_anonymity(&Stream::periodic_ints(&[1, 4]).unwrap(), 1, 3).unwrap();
        assert!(rep.holds);
        assert!(check_anonymity(&c, 2, 2).is_err());
    }

    #[test]
    fn prop1_examples() {
        let inst = canonical_instance();
        let row = prop1_bound_check(&inst, 1).unwrap();
        assert_eq!(row.raw_x, r(6));
        assert_eq!(row.raw_y, r(2));
        assert_eq!(row.domain_count, 2);
        assert_eq!(row.bound, Rational::ratio(18, 5));
        assert_eq!(row.slack, Rational::ratio(12, 5));
        assert!(row.holds);

        // Closed forms at H = 200: raw_x = 2·(H/2)²·3, raw_y = 2·(H/2)²·1.
        let row = prop1_bound_check(&inst, 100).unwrap();
        assert_eq!(row.raw_x, r(2 * 100 * 100 * 3));
        assert_eq!(row.raw_y, r(2 * 100 * 100));
        assert!(row.holds);
    }

    #[test]
    fn prop1_with_empty_prefix_domain() {
        // Transfers start in block 3; before that the streams coincide.
        let p = PairingFunction::new_valid(
            2,
            vec![BlockInvolution::unpaired(2), BlockInvolution::unpaired(2)],
            vec![BlockInvolution::adjacent_swaps(2)],
        )
        .unwrap();
        let inst = TransferInstance::new(
            Stream::from_values(&[r(7), r(7), r(7), r(7)], &[r(1), r(4)]).unwrap(),
            Stream::from_values(&[r(7), r(7), r(7), r(7)], &[r(2), r(3)]).unwrap(),
            p,
        )
        .unwrap();
        assert!(verify_transfer(&inst, Variant::SApd).valid);
        let row = prop1_bound_check(&inst, 2).unwrap();
        assert_eq!(row.domain_count, 0);
        assert_eq!(row.epsilon, None);
        assert_eq!(row.raw_x, row.raw_y);
        assert!(row.slack.is_zero() && row.holds);
        let rows = Prop1Checker::new(&inst).rows(60, Execution::Sequential);
        assert!(rows.iter().all(|r| r.holds));
    }

    #[test]
    fn prop1_bound_fails_for_three_separated_transfer_bands() {
        // Three disjoint bands need a 12-level alphabet. Cross terms between
        // separated bands cancel, so the quadratic gain is 12N² against a
        // claimed 14.4N²; welfare still strictly improves.
        let alphabet = Alphabet::new((0..=11).map(r).collect()).unwrap();
        let equal = Stream::periodic_ints(&[1, 2, 5, 6, 9, 10]).unwrap();
        let inst = apply_transfers(
            &equal,
            &PairingFunction::all_swap(6).unwrap(),
            &EpsilonRule::Uniform(r(1)),
            &alphabet,
        )
        .unwrap();
        assert!(verify_transfer(&inst, Variant::SApd).valid);
        let row = prop1_bound_check(&inst, 10).unwrap();
        assert_eq!(&row.raw_x - &row.raw_y, r(12 * 100));
        assert!(!row.holds);
        let gap = welfare_gap_check(&inst);
        assert_eq!(gap.gap, Rational::ratio(1, 3));
        assert_eq!(gap.bound, Rational::ratio(2, 5));
        assert!(gap.gap.is_positive() && !gap.holds);
    }

    #[test]
    fn case4_examples() {
        let c = Case4Config { y_k: r(3), eps_k: r(1), y_j: r(2), eps_j: r(1), y_ak: r(2), y_aj: r(3) };
        let rep = case4_inequality_check(&c).unwrap();
        assert_eq!(rep.x_sum, r(9));
        assert_eq!(rep.y_sum, r(3));
        assert!(rep.holds);
        assert_eq!(rep.slack, r(4));

        // Symmetric configuration: y_k = y_j, y_ak = y_aj, equal epsilons.
        let c = Case4Config { y_k: r(4), eps_k: r(1), y_j: r(4), eps_j: r(1), y_ak: r(2), y_aj: r(2) };
        assert!(case4_inequality_check(&c).is_err());
        let c = Case4Config { y_k: r(4), eps_k: r(2), y_j: r(2), eps_j: r(2), y_ak: r(2), y_aj: r(4) };
        let rep = case4_inequality_check(&c).unwrap();
        // x: k=6, ak=0, j=0, aj=6 -> 6+0+0+6+6 = 18; y: 2+0+0+2+2 = 6.
        assert_eq!(rep.gain, r(12));
        assert!(rep.holds);

        let bad = Case4Config { y_k: r(1), eps_k: r(1), y_j: r(2), eps_j: r(1), y_ak: r(2), y_aj: r(3) };
        assert!(matches!(case4_inequality_check(&bad), Err(Error::Case4Precondition(_))));
        let bad = Case4Config { eps_j: r(0), ..c };
        assert!(case4_inequality_check(&bad).is_err());
    }

    #[test]
    fn case4_scan_small_grids() {
        let rep = case4_scan(2, 2, Execution::Sequential);
        assert_eq!(rep.configurations, 4);
        assert!(rep.violations.is_empty());
        let rep = case4_scan(6, 2, Execution::Parallel);
        assert_eq!(rep.configurations, 15 * 15 * 4);
        assert!(rep.violations.is_empty());
        assert_eq!(rep, case4_scan(6, 2, Execution::Sequential));
    }

    #[test]
    fn case_decomposition_examples() {
        let inst = canonical_instance();
        let dec = case_decomposition_check(&inst, 1, Execution::Sequential).unwrap();
        assert_eq!(dec.case1.pairs, 2);
        assert_eq!(dec.case1.contribution, r(4));
        assert_eq!(dec.case1_failures, 0);
        assert!(dec.reproduces_raw_difference && dec.holds);

        let dec = case_decomposition_check(&inst, 50, Execution::Parallel).unwrap();
        assert!(dec.reproduces_raw_difference && dec.holds);
        assert_eq!(dec.raw_difference, r(2 * 50 * 50 * 2));

        let mixed = TransferInstance::new(
            Stream::periodic_ints(&[1, 4, 7, 8]).unwrap(),
            Stream::periodic_ints(&[2, 3, 7, 8]).unwrap(),
            PairingFunction::periodic(4, BlockInvolution::from_pairs(4, &[(0, 1)])).unwrap(),
        )
        .unwrap();
        let dec = case_decomposition_check(&mixed, 5, Execution::Sequential).unwrap();
        assert!(dec.case2.pairs > 0);
        assert!(dec.case2.contribution.is_zero());
        assert_eq!(dec.case2_failures, 0);
        assert!(dec.holds);
    }

    #[test]
    fn case3_cancellation_is_not_exact_inside_the_band() {
        // The unpaired level 2 sits inside the widened band [0, 5].
        let alphabet = Alphabet::new((0..=5).map(r).collect()).unwrap();
        let equal = Stream::periodic_ints(&[1, 4, 2]).unwrap();
        let p = PairingFunction::periodic(3, BlockInvolution::from_pairs(3, &[(0, 1)])).unwrap();
        let inst = apply_transfers(&equal, &p, &EpsilonRule::Uniform(r(1)), &alphabet).unwrap();
        let dec = case_decomposition_check(&inst, 3, Execution::Sequential).unwrap();
        assert!(dec.case3_groups_gain > 0);
        assert_eq!(dec.case3_groups_loss, 0);
        assert!(dec.holds);
    }

    #[test]
    fn prop2_examples() {
        let rows = prop2_probe(1, 2).unwrap();
        assert_eq!(rows.len(), 1);
        let row = &rows[0];
        assert_eq!(row.w_unequal, Rational::ratio(-1, 2));
        assert_eq!(row.w_equal, Rational::ratio(-1, 3));
        assert_eq!(row.gap, Rational::ratio(1, 6));
        assert_eq!(row.epsilon, Rational::ratio(1, 6));
        assert!(row.certified_s_apd);
        assert!(row.w_unequal < row.w_equal && row.w_equal.is_negative());

        let rows = prop2_probe(10, 4).unwrap();
        assert!(rows.windows(2).all(|w| w[1].gap < w[0].gap));
        for row in &rows {
            let k = row.k as i64;
            assert_eq!(row.gap, Rational::ratio(1, (k + 1) * (k + 2)));
        }
        assert!(prop2_probe(0, 2).is_err());
        assert!(prop2_probe(3, 3).is_err());
    }
}
