//! The extended Gini index.
//!
//! For a horizon `H`, the prefix functional is the mean absolute difference
//! over all ordered pairs of the first `H` generations,
//!
//! ```text
//! W_H(x) = (1 / H²) · Σ_{k ≤ H} Σ_{j ≤ H} |x_k − x_j|
//! ```
//!
//! taken along block horizons `H = N·h`, and the welfare of a stream is
//! `W(x) = −liminf_N W_{N·h}(x)`. For eventually periodic streams the limit
//! exists and equals the Gini mean difference of the period's value
//! frequencies, `Σ_{a,b} f_a f_b |a − b|`, independent of `h`.
//!
//! Two routes compute the double sum: a quadratic oracle and a sorted
//! rank-weighted form `2 Σ_i (2i − n − 1) v_(i)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::exec::Execution;
use crate::rational::Rational;
use crate::stream::{FrequencyTable, Stream};

/// Largest input the quadratic oracle accepts.
pub const NAIVE_CAP: usize = 5000;

/// `Σ_k Σ_j |v_k − v_j|` by direct double loop.
pub fn double_sum_naive(values: &[Rational]) -> Result<Rational, Error> {
    double_sum_naive_with(values, Execution::Sequential)
}

pub fn double_sum_naive_with(values: &[Rational], exec: Execution) -> Result<Rational, Error> {
    if values.is_empty() {
        return Err(Error::EmptyValues);
    }
    if values.len() > NAIVE_CAP {
        return Err(Error::NaiveCapExceeded { len: values.len(), cap: NAIVE_CAP });
    }
    // Scale to a common denominator so the quadratic loop runs on integers.
    let lcm = values.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let scaled: Vec<BigInt> = values.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let total = match scaled.iter().map(i64::try_from).collect::<Result<Vec<i64>, _>>() {
        // |a − b| < 2^64 and n ≤ NAIVE_CAP keep every row sum and the total inside i128.
        Ok(small) => {
            let rows = exec.map(&small, |&a| small.iter().map(|&b| (a as i128 - b as i128).abs()).sum::<i128>());
            BigInt::from(rows.into_iter().sum::<i128>())
        }
        Err(_) => {
            let rows = exec.map(&scaled, |a| scaled.iter().map(|b| (a - b).abs()).sum::<BigInt>());
            rows.into_iter().sum()
        }
    };
    Ok(Rational::new(total, lcm).expect("lcm is positive"))
}

/// Same value as [`double_sum_naive`] in `O(n log n)`.
pub fn double_sum_fast(values: &[Rational]) -> Result<Rational, Error> {
    double_sum_fast_with(values, Execution::Sequential)
}

pub fn double_sum_fast_with(values: &[Rational], exec: Execution) -> Result<Rational, Error> {
    if values.is_empty() {
        return Err(Error::EmptyValues);
    }
    let mut sorted = values.to_vec();
    exec.sort(&mut sorted);
    let n = sorted.len() as i64;
    let half: Rational = sorted
        .iter()
        .enumerate()
        .map(|(i, v)| v * Rational::from(2 * (i as i64 + 1) - n - 1))
        .sum();
    Ok(half * Rational::from(2))
}

/// Rank-weighted double sum over sorted distinct levels with multiplicities.
///
/// A level with multiplicity `c` whose smaller levels total `r` occupies ranks
/// `r+1..=r+c`, contributing `v · c · (2r + c − n)` to the half sum.
fn double_sum_grouped<'a>(levels: impl Iterator<Item = (&'a Rational, u64)>, n: u64) -> Rational {
    let n = BigInt::from(n);
    let mut below = BigInt::zero();
    let mut half = Rational::zero();
    for (v, c) in levels {
        if c == 0 {
            continue;
        }
        let c = BigInt::from(c);
        let weight = &c * (&below * 2u32 + &c - &n);
        half += &(v * Rational::from_integer(weight));
        below += c;
    }
    half * Rational::from(2)
}

/// Mean absolute difference `Σ_{a,b} f_a f_b |a − b|` of a frequency table.
pub fn gini_mean_difference(freq: &FrequencyTable) -> Rational {
    let mut below = Rational::zero();
    let mut half = Rational::zero();
    for (v, f) in freq.iter() {
        // f · (2F + f − 1), the continuous analogue of the rank weight.
        let weight = f * (&below * Rational::from(2) + f - Rational::one());
        half += &(v * weight);
        below += f;
    }
    half * Rational::from(2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixGiniValue {
    /// Horizon length `n` (that is, `H_N`).
    pub n: u64,
    pub raw_double_sum: Rational,
    /// `raw_double_sum / n²`.
    pub normalized: Rational,
}

fn normalize(raw: &Rational, n: u64) -> Rational {
    let n2 = Rational::from_integer(BigInt::from(n) * BigInt::from(n));
    raw / &n2
}

/// Prefix functional over generations `1..=n`, for any `n ≥ 1`.
pub fn w_prefix_at(s: &Stream, n: u64) -> Result<PrefixGiniValue, Error> {
    if n == 0 {
        return Err(Error::ZeroHorizon);
    }
    let counts = s.counts_in_prefix(n);
    let raw = double_sum_grouped(s.alphabet().values().iter().zip(counts), n);
    let normalized = normalize(&raw, n);
    Ok(PrefixGiniValue { n, raw_double_sum: raw, normalized })
}

/// Prefix functional at the block horizon `H_N = N·h`.
pub fn w_prefix(s: &Stream, h: u64, big_n: u64) -> Result<PrefixGiniValue, Error> {
    if h == 0 {
        return Err(Error::ZeroStep);
    }
    if big_n == 0 {
        return Err(Error::ZeroHorizon);
    }
    w_prefix_at(s, h * big_n)
}

/// Exact `W(s)` for an eventually periodic stream.
pub fn welfare_exact(s: &Stream) -> Rational {
    -gini_mean_difference(&s.frequencies())
}

/// Social ordering induced by `W`.
pub fn compare(a: &Stream, b: &Stream) -> Ordering {
    welfare_exact(a).cmp(&welfare_exact(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    #[serde(rename = "N")]
    pub big_n: u64,
    #[serde(rename = "H_N")]
    pub horizon: u64,
    #[serde(rename = "W_N")]
    pub w_n: Rational,
    /// `min { W_M : N ≤ M ≤ N_max }`, the best finite bound on the liminf
    /// seen from row `N` onward.
    pub running_liminf: Rational,
}

/// Finite-horizon view of `liminf_N W_N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiminfTrace {
    pub h: u64,
    pub rows: Vec<TraceRow>,
}

impl LiminfTrace {
    fn from_values(h: u64, values: Vec<Rational>) -> Self {
        let mut rows: Vec<TraceRow> = values
            .into_iter()
            .enumerate()
            .map(|(i, w)| TraceRow {
                big_n: i as u64 + 1,
                horizon: (i as u64 + 1) * h,
                running_liminf: w.clone(),
                w_n: w,
            })
            .collect();
        for i in (0..rows.len().saturating_sub(1)).rev() {
            if rows[i + 1].running_liminf < rows[i].running_liminf {
                rows[i].running_liminf = rows[i + 1].running_liminf.clone();
            }
        }
        LiminfTrace { h, rows }
    }

    pub fn last(&self) -> &TraceRow {
        self.rows.last().expect("trace has at least one row")
    }

    /// Tail infimum over rows with `N ≥ n0`.
    pub fn tail_infimum(&self, n0: u64) -> Option<&Rational> {
        self.rows
            .get(n0.checked_sub(1)? as usize)
            .map(|r| &r.running_liminf)
    }

    /// Estimated welfare, `−(running liminf at N_max)`.
    pub fn welfare_estimate(&self) -> Rational {
        -&self.last().running_liminf
    }
}

/// Either the exact welfare of a periodic stream or a finite-horizon estimate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum WelfareValue {
    Exact { value: Rational },
    Estimated { trace: LiminfTrace },
}

impl WelfareValue {
    pub fn exact(s: &Stream) -> Self {
        WelfareValue::Exact { value: welfare_exact(s) }
    }

    pub fn value(&self) -> Rational {
        match self {
            WelfareValue::Exact { value } => value.clone(),
            WelfareValue::Estimated { trace } => trace.welfare_estimate(),
        }
    }
}

/// `W_N` for `N = 1..=n_max` on a periodic stream, each evaluated directly.
pub fn convergence_trace(s: &Stream, h: u64, n_max: u64, exec: Execution) -> Result<LiminfTrace, Error> {
    if h == 0 {
        return Err(Error::ZeroStep);
    }
    if n_max == 0 {
        return Err(Error::ZeroHorizon);
    }
    let values = exec.map_range(n_max as usize, |i| {
        w_prefix(s, h, i as u64 + 1)
            .expect("h and N are positive")
            .normalized
    });
    Ok(LiminfTrace::from_values(h, values))
}

/// Fenwick tree over value ranks carrying counts and scaled sums.
struct RankTree {
    count: Vec<u64>,
    sum: Vec<BigInt>,
}

impl RankTree {
    fn new(n: usize) -> Self {
        RankTree { count: vec![0; n + 1], sum: vec![BigInt::zero(); n + 1] }
    }

    fn add(&mut self, rank: usize, v: &BigInt) {
        let mut i = rank + 1;
        while i < self.count.len() {
            self.count[i] += 1;
            self.sum[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Count and sum over ranks `< rank`.
    fn below(&self, rank: usize) -> (u64, BigInt) {
        let (mut c, mut s) = (0u64, BigInt::zero());
        let mut i = rank;
        while i > 0 {
            c += self.count[i];
            s += &self.sum[i];
            i -= i & i.wrapping_neg();
        }
        (c, s)
    }
}

/// Incremental `W_N` trace over an arbitrary value source.
///
/// Values are rank-compressed once and scaled to a common denominator;
/// each new value then updates the running double sum in `O(log D)` via
/// `Σ_u |v − u| = v·c_< − s_< + s_> − v·c_>`.
pub fn welfare_estimate<I>(values: I, h: u64, n_max: u64) -> Result<LiminfTrace, Error>
where
    I: IntoIterator<Item = Rational>,
{
    if h == 0 {
        return Err(Error::ZeroStep);
    }
    if n_max == 0 {
        return Err(Error::ZeroHorizon);
    }
    let needed = (h * n_max) as usize;
    let buf: Vec<Rational> = values.into_iter().take(needed).collect();
    if buf.len() < needed {
        return Err(Error::GeneratorExhausted { produced: buf.len(), needed });
    }

    let mut ranks: BTreeMap<&Rational, usize> = buf.iter().map(|v| (v, 0)).collect();
    let scale = ranks
        .keys()
        .fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let mut scaled = Vec::with_capacity(ranks.len());
    for (i, (v, r)) in ranks.iter_mut().enumerate() {
        *r = i;
        scaled.push(v.numer() * (&scale / v.denom()));
    }

    let mut tree = RankTree::new(scaled.len());
    let mut total = BigInt::zero();
    let mut raw = BigInt::zero();
    let mut out = Vec::with_capacity(n_max as usize);
    for (idx, v) in buf.iter().enumerate() {
        let rank = ranks[v];
        let x = &scaled[rank];
        let (c_lo, s_lo) = tree.below(rank);
        let (c_le, s_le) = tree.below(rank + 1);
        let c_hi = idx as u64 - c_le;
        let s_hi = &total - s_le;
        let delta = x * BigInt::from(c_lo) - s_lo + s_hi - x * BigInt::from(c_hi);
        raw += delta * 2u32;
        tree.add(rank, x);
        total += x;
        if ((idx + 1) as u64).is_multiple_of(h) {
            let n = (idx + 1) as u64;
            let denom = &scale * BigInt::from(n) * BigInt::from(n);
            out.push(Rational::new(raw.clone(), denom)?);
        }
    }
    Ok(LiminfTrace::from_values(h, out))
}
