//! Random streams and transfer instances for property campaigns.
//!
//! Instances are built the constructive way: draw the equal stream first,
//! then widen each linked pair with [`apply_transfers`]. Alphabets are
//! arithmetic progressions so that widening by a multiple of the common
//! gap lands back on a level.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::equity::{apply_transfers, EpsilonRule, TransferInstance};
use crate::error::Error;
use crate::pairing::{BlockInvolution, PairingFunction};
use crate::rational::Rational;
use crate::stream::{Alphabet, Stream};

#[derive(Clone, Copy, Debug)]
pub struct InstanceParams {
    /// Largest step `h` (at least 2).
    pub max_step: usize,
    /// Largest alphabet size (at least 4).
    pub max_levels: usize,
    pub max_pre_blocks: usize,
    pub max_period_blocks: usize,
}

impl Default for InstanceParams {
    fn default() -> Self {
        InstanceParams { max_step: 8, max_levels: 6, max_pre_blocks: 2, max_period_blocks: 6 }
    }
}

fn random_rational<R: Rng>(rng: &mut R, num: std::ops::RangeInclusive<i64>, max_den: i64) -> Rational {
    Rational::ratio(rng.gen_range(num), rng.gen_range(1..=max_den))
}

/// A random fixed-point-free block involution; roughly 70% of offsets paired.
pub fn random_block<R: Rng>(rng: &mut R, h: usize) -> BlockInvolution {
    let mut offsets: Vec<usize> = (0..h).collect();
    offsets.shuffle(rng);
    let pairs: Vec<(usize, usize)> = offsets
        .chunks_exact(2)
        .filter(|_| rng.gen_bool(0.7))
        .map(|c| (c[0], c[1]))
        .collect();
    BlockInvolution::from_pairs(h, &pairs)
}

/// A random valid s-APD instance (positive domain density).
pub fn random_instance<R: Rng>(rng: &mut R, params: &InstanceParams) -> TransferInstance {
    let h = rng.gen_range(2..=params.max_step.max(2));
    let levels = rng.gen_range(4..=params.max_levels.max(4));
    let base = random_rational(rng, -5..=5, 4);
    let gap = random_rational(rng, 1..=4, 3);
    let alphabet = Alphabet::new(
        (0..levels as i64).map(|i| &base + &gap * Rational::from(i)).collect(),
    )
    .expect("arithmetic progression is increasing");

    let pre_blocks: Vec<BlockInvolution> =
        (0..rng.gen_range(0..=params.max_pre_blocks)).map(|_| random_block(rng, h)).collect();
    let mut period_blocks: Vec<BlockInvolution> = (0..rng.gen_range(1..=params.max_period_blocks))
        .map(|_| random_block(rng, h))
        .collect();
    if period_blocks.iter().all(|b| b.paired_count() == 0) {
        period_blocks[0] = BlockInvolution::from_pairs(h, &[(0, 1)]);
    }
    let pairing = PairingFunction::new_valid(h, pre_blocks, period_blocks)
        .expect("random blocks are involutions");

    // Equal stream aligned with the block structure, so the joint horizon is
    // exactly preperiod + period.
    let pre_len = pairing.preperiod_span() as usize;
    let total = pre_len + pairing.period_span() as usize;
    let mut idx = vec![0usize; total];
    let mut eps = vec![Rational::zero(); total];
    let m = levels;
    for k in 0..total {
        let block = (k / h) as u64;
        let offset = k % h;
        match pairing.block(block).0[offset] {
            None => idx[k] = rng.gen_range(0..m),
            Some(p) if p > offset => {
                let partner = k - offset + p;
                // Poor level i, rich level j, widened by t steps each way.
                let t = rng.gen_range(1..=(m - 2) / 2);
                let i = rng.gen_range(t..=m - 2 - t);
                let j = rng.gen_range(i + 1..=m - 1 - t);
                let (poor, rich) = if rng.gen_bool(0.5) { (k, partner) } else { (partner, k) };
                idx[poor] = i;
                idx[rich] = j;
                eps[k] = &gap * Rational::from(t as i64);
            }
            Some(_) => {}
        }
    }
    let period = idx.split_off(pre_len);
    let equal = Stream::new(alphabet.clone(), idx, period).expect("indices in range");
    apply_transfers(&equal, &pairing, &EpsilonRule::PerGeneration(eps), &alphabet)
        .expect("generated transfers stay inside the alphabet")
}

/// A random eventually periodic stream over up to `max_levels` rational levels.
pub fn random_stream<R: Rng>(rng: &mut R, max_levels: usize, max_pre: usize, max_period: usize) -> Stream {
    let mut values: Vec<Rational> =
        (0..rng.gen_range(1..=max_levels.max(1))).map(|_| random_rational(rng, -20..=20, 6)).collect();
    values.sort();
    values.dedup();
    let alphabet = Alphabet::new(values).expect("deduplicated and sorted");
    let m = alphabet.len();
    let pre = (0..rng.gen_range(0..=max_pre)).map(|_| rng.gen_range(0..m)).collect();
    let period = (0..rng.gen_range(1..=max_period.max(1))).map(|_| rng.gen_range(0..m)).collect();
    Stream::new(alphabet, pre, period).expect("indices in range")
}

/// A random list of rationals of length `1..=max_len`.
pub fn random_values<R: Rng>(rng: &mut R, max_len: usize) -> Vec<Rational> {
    (0..rng.gen_range(1..=max_len.max(1))).map(|_| random_rational(rng, -50..=50, 9)).collect()
}

/// `inside` at generations `base^k` (k ≥ 1), `outside` elsewhere.
pub fn sparse_power_values(
    base: u64,
    inside: Rational,
    outside: Rational,
) -> Result<impl Iterator<Item = Rational>, Error> {
    let set = crate::pairing::IndexSet::power_sparse(base)?;
    Ok((1u64..).map(move |n| if set.contains(n) { inside.clone() } else { outside.clone() }))
}
