//! Eventually-periodic utility streams over a finite rational alphabet.
//!
//! A [`Stream`] stands in for an element of `Y^ℕ`: generation `n` (1-based)
//! reads the preperiod while `n ≤ |preperiod|` and cycles through the period
//! afterwards. Values are stored as indices into a sorted [`Alphabet`].

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::Rational;

/// A non-empty, strictly increasing list of utility levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Alphabet {
    values: Vec<Rational>,
}

impl Alphabet {
    pub fn new(values: Vec<Rational>) -> Result<Self, Error> {
        if values.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if let Some(i) = values.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedAlphabet(i + 1));
        }
        Ok(Alphabet { values })
    }

    /// Sorts and deduplicates an arbitrary collection of values.
    pub fn from_unsorted(mut values: Vec<Rational>) -> Result<Self, Error> {
        values.sort();
        values.dedup();
        Alphabet::new(values)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Rational> {
        self.values.get(index)
    }

    pub fn position(&self, value: &Rational) -> Option<usize> {
        self.values.binary_search(value).ok()
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.position(value).is_some()
    }

    pub fn min(&self) -> &Rational {
        &self.values[0]
    }

    pub fn max(&self) -> &Rational {
        &self.values[self.values.len() - 1]
    }

    pub fn diameter(&self) -> Rational {
        self.max() - self.min()
    }

    /// Smallest positive difference between two levels; `None` for a singleton.
    pub fn min_gap(&self) -> Option<Rational> {
        self.values.windows(2).map(|w| &w[1] - &w[0]).min()
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut values = self.values.clone();
        values.extend(other.values.iter().cloned());
        Alphabet::from_unsorted(values).expect("union of non-empty alphabets")
    }
}

/// Asymptotic frequency of each level that actually occurs in the period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FrequencyTable {
    entries: BTreeMap<Rational, Rational>,
}

impl FrequencyTable {
    pub fn get(&self, value: &Rational) -> Rational {
        self.entries.get(value).cloned().unwrap_or_else(Rational::zero)
    }

    /// Entries in increasing order of value.
    pub fn iter(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.entries.values().sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct StreamRepr {
    alphabet: Vec<Rational>,
    preperiod: Vec<usize>,
    period: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "StreamRepr", into = "StreamRepr")]
pub struct Stream {
    alphabet: Alphabet,
    preperiod: Vec<usize>,
    period: Vec<usize>,
}

impl TryFrom<StreamRepr> for Stream {
    type Error = Error;

    fn try_from(r: StreamRepr) -> Result<Self, Error> {
        Stream::new(Alphabet::new(r.alphabet)?, r.preperiod, r.period)
    }
}

impl From<Stream> for StreamRepr {
    fn from(s: Stream) -> Self {
        StreamRepr {
            alphabet: s.alphabet.values,
            preperiod: s.preperiod,
            period: s.period,
        }
    }
}

impl Stream {
    pub fn new(alphabet: Alphabet, preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self, Error> {
        if period.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let size = alphabet.len();
        if let Some(&index) = preperiod.iter().chain(&period).find(|&&i| i >= size) {
            return Err(Error::IndexOutOfAlphabet { index, size });
        }
        Ok(Stream { alphabet, preperiod, period })
    }

    /// Builds a stream directly from values; the alphabet is the set of values used.
    pub fn from_values(preperiod: &[Rational], period: &[Rational]) -> Result<Self, Error> {
        let alphabet =
            Alphabet::from_unsorted(preperiod.iter().chain(period).cloned().collect())?;
        Stream::over(alphabet, preperiod, period)
    }

    /// Builds a stream from values that must all belong to `alphabet`.
    pub fn over(alphabet: Alphabet, preperiod: &[Rational], period: &[Rational]) -> Result<Self, Error> {
        let lookup = |v: &Rational| {
            alphabet
                .position(v)
                .ok_or_else(|| Error::InvalidArgument(format!("value {v} is not in the alphabet")))
        };
        let pre = preperiod.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
        let per = period.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
        Stream::new(alphabet, pre, per)
    }

    pub fn periodic(period: &[Rational]) -> Result<Self, Error> {
        Stream::from_values(&[], period)
    }

    /// Purely periodic stream over small integer values.
    pub fn periodic_ints(period: &[i64]) -> Result<Self, Error> {
        let vals: Vec<Rational> = period.iter().map(|&v| Rational::from(v)).collect();
        Stream::periodic(&vals)
    }

    pub fn constant(value: Rational) -> Self {
        Stream::periodic(&[value]).expect("singleton period")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.preperiod
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    pub fn preperiod_len(&self) -> usize {
        self.preperiod.len()
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    fn index_at_unchecked(&self, n: u64) -> usize {
        let q = self.preperiod.len() as u64;
        if n <= q {
            self.preperiod[(n - 1) as usize]
        } else {
            let p = self.period.len() as u64;
            self.period[((n - q - 1) % p) as usize]
        }
    }

    /// Alphabet position of generation `n`.
    pub fn index_at(&self, n: u64) -> Result<usize, Error> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        Ok(self.index_at_unchecked(n))
    }

    pub fn value_at(&self, n: u64) -> Result<&Rational, Error> {
        Ok(&self.alphabet.values[self.index_at(n)?])
    }

    /// Values of generations `1..=n`.
    pub fn prefix(&self, n: usize) -> Result<Vec<Rational>, Error> {
        if n == 0 {
            return Err(Error::ZeroIndex);
        }
        Ok((1..=n as u64)
            .map(|k| self.alphabet.values[self.index_at_unchecked(k)].clone())
            .collect())
    }

    /// Occurrences of each alphabet position among generations `1..=n`.
    pub fn counts_in_prefix(&self, n: u64) -> Vec<u64> {
        let mut counts = vec![0u64; self.alphabet.len()];
        let q = self.preperiod.len() as u64;
        for &i in &self.preperiod[..n.min(q) as usize] {
            counts[i] += 1;
        }
        if n > q {
            let p = self.period.len() as u64;
            let (full, rem) = (n - q).div_rem(&p);
            for (t, &i) in self.period.iter().enumerate() {
                counts[i] += full + u64::from((t as u64) < rem);
            }
        }
        counts
    }

    /// Frequencies over one period; the preperiod carries zero density.
    pub fn frequencies(&self) -> FrequencyTable {
        let p = self.period.len() as i64;
        let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
        for &i in &self.period {
            *counts.entry(i).or_default() += 1;
        }
        let entries = counts
            .into_iter()
            .map(|(i, c)| (self.alphabet.values[i].clone(), Rational::ratio(c, p)))
            .collect();
        FrequencyTable { entries }
    }

    /// Exchanges generations `i` and `j`. The preperiod is extended to cover
    /// `max(i, j)` and the period is rotated to stay in phase.
    pub fn swap_coordinates(&self, i: u64, j: u64) -> Result<Stream, Error> {
        if i == 0 || j == 0 {
            return Err(Error::ZeroIndex);
        }
        if i == j {
            return Err(Error::SelfSwap(i));
        }
        let m = i.max(j).max(self.preperiod.len() as u64);
        let mut pre: Vec<usize> = (1..=m).map(|k| self.index_at_unchecked(k)).collect();
        let p = self.period.len() as u64;
        let period: Vec<usize> = (m + 1..=m + p).map(|k| self.index_at_unchecked(k)).collect();
        pre.swap((i - 1) as usize, (j - 1) as usize);
        Stream::new(self.alphabet.clone(), pre, period)
    }

    /// Applies a strictly increasing map to every level. Used for affine
    /// rescaling, where the alphabet order must survive.
    pub fn map_levels(&self, f: impl Fn(&Rational) -> Rational) -> Result<Stream, Error> {
        let alphabet = Alphabet::new(self.alphabet.values.iter().map(f).collect())?;
        Stream::new(alphabet, self.preperiod.clone(), self.period.clone())
    }

    /// Shortest equivalent representation: minimal period, shortest preperiod.
    pub fn canonical(&self) -> Stream {
        let p = self.period.len();
        let d = (1..=p)
            .find(|&d| p.is_multiple_of(d) && (d..p).all(|t| self.period[t] == self.period[t - d]))
            .unwrap_or(p);
        let mut period: Vec<usize> = self.period[..d].to_vec();
        let mut pre = self.preperiod.clone();
        while let Some(&last) = pre.last() {
            if last != period[period.len() - 1] {
                break;
            }
            pre.pop();
            period.rotate_right(1);
        }
        Stream {
            alphabet: self.alphabet.clone(),
            preperiod: pre,
            period,
        }
    }

    /// Horizon beyond which two eventually periodic streams that agree so far
    /// agree forever.
    pub fn equality_horizon(&self, other: &Stream) -> u64 {
        let l = (self.period.len() as u64).lcm(&(other.period.len() as u64));
        (self.preperiod.len() + other.preperiod.len()) as u64 + 2 * l
    }
}

impl PartialEq for Stream {
    fn eq(&self, other: &Self) -> bool {
        let horizon = self.equality_horizon(other);
        (1..=horizon).all(|n| {
            self.alphabet.values[self.index_at_unchecked(n)]
                == other.alphabet.values[other.index_at_unchecked(n)]
        })
    }
}

impl Eq for Stream {}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    fn ints(v: &[Rational]) -> Vec<i64> {
        v.iter().map(|x| x.to_f64() as i64).collect()
    }

    #[test]
    fn value_at_cycles_through_period() {
        let s = Stream::periodic_ints(&[2, 3, 5]).unwrap();
        assert_eq!(s.value_at(4).unwrap(), &r(2));
        let c = Stream::constant(r(1));
        assert_eq!(c.value_at(1_000_000).unwrap(), &r(1));
        let s = Stream::from_values(&[r(9)], &[r(2), r(3), r(5)]).unwrap();
        assert_eq!(s.value_at(1).unwrap(), &r(9));
        assert_eq!(s.value_at(2).unwrap(), &r(2));
        assert_eq!(s.value_at(0), Err(Error::ZeroIndex));
    }

    #[test]
    fn prefix_examples() {
        let s = Stream::periodic_ints(&[2, 3, 5]).unwrap();
        assert_eq!(ints(&s.prefix(6).unwrap()), vec![2, 3, 5, 2, 3, 5]);
        assert_eq!(ints(&Stream::constant(r(0)).prefix(3).unwrap()), vec![0, 0, 0]);
        let s = Stream::from_values(&[r(1)], &[r(4)]).unwrap();
        assert_eq!(ints(&s.prefix(3).unwrap()), vec![1, 4, 4]);
        assert_eq!(s.prefix(0), Err(Error::ZeroIndex));
    }

    #[test]
    fn frequency_examples() {
        let f = Stream::periodic_ints(&[2, 3, 5]).unwrap().frequencies();
        for v in [2, 3, 5] {
            assert_eq!(f.get(&r(v)), Rational::ratio(1, 3));
        }
        let s = Stream::from_values(&[r(1), r(1), r(1)], &[r(4)]).unwrap();
        let f = s.frequencies();
        assert_eq!(f.len(), 1);
        assert_eq!(f.get(&r(4)), Rational::one());
        let f = Stream::periodic_ints(&[1, 4, 1, 4]).unwrap().frequencies();
        assert_eq!(f.get(&r(1)), Rational::ratio(1, 2));
        assert_eq!(f.get(&r(4)), Rational::ratio(1, 2));
    }

    #[test]
    fn frequencies_match_prefix_counting() {
        // Counting oracle at n = 3·10^4.
        let s = Stream::periodic_ints(&[2, 3, 5]).unwrap();
        let n = 30_000usize;
        let prefix = s.prefix(n).unwrap();
        for v in [2, 3, 5] {
            let c = prefix.iter().filter(|x| **x == r(v)).count() as i64;
            let diff = Rational::ratio(c, n as i64).abs_diff(&s.frequencies().get(&r(v)));
            assert!(diff <= Rational::ratio(1, 100));
        }
    }

    #[test]
    fn swap_examples() {
        let s = Stream::periodic_ints(&[2, 3, 5]).unwrap();
        let t = s.swap_coordinates(1, 2).unwrap();
        assert_eq!(ints(&t.prefix(6).unwrap()), vec![3, 2, 5, 2, 3, 5]);
        assert_eq!(t.preperiod_len(), 2);

        let c = Stream::constant(r(7));
        assert_eq!(c.swap_coordinates(3, 11).unwrap(), c);

        // Hand evaluation of 1,4,1,4,1,4 with positions 1 and 4 exchanged.
        let s = Stream::periodic_ints(&[1, 4]).unwrap();
        let t = s.swap_coordinates(1, 4).unwrap();
        assert_eq!(ints(&t.prefix(8).unwrap()), vec![4, 4, 1, 1, 1, 4, 1, 4]);
        assert_eq!(s.swap_coordinates(2, 2), Err(Error::SelfSwap(2)));
        assert_eq!(s.swap_coordinates(0, 2), Err(Error::ZeroIndex));

        // Both positions inside a longer preperiod.
        let s = Stream::from_values(&[r(9), r(8), r(7)], &[r(1), r(2)]).unwrap();
        let t = s.swap_coordinates(1, 2).unwrap();
        assert_eq!(ints(&t.prefix(7).unwrap()), vec![8, 9, 7, 1, 2, 1, 2]);
        assert_eq!(t.frequencies(), s.frequencies());
    }

    #[test]
    fn counts_in_prefix_agree_with_materialised_prefix() {
        let s = Stream::from_values(&[r(9), r(2)], &[r(2), r(3), r(5), r(3)]).unwrap();
        for n in 1..40u64 {
            let prefix = s.prefix(n as usize).unwrap();
            let counts = s.counts_in_prefix(n);
            for (i, v) in s.alphabet().values().iter().enumerate() {
                assert_eq!(counts[i], prefix.iter().filter(|x| *x == v).count() as u64);
            }
        }
    }

    #[test]
    fn canonical_form_shrinks_representation() {
        let s = Stream::from_values(&[r(1), r(4), r(1), r(4)], &[r(1), r(4), r(1), r(4)]).unwrap();
        let c = s.canonical();
        assert_eq!(c.preperiod_len(), 0);
        assert_eq!(c.period_len(), 2);
        assert_eq!(c, s);
        let swapped = Stream::periodic_ints(&[2, 3, 5]).unwrap().swap_coordinates(1, 2).unwrap();
        let c = swapped.canonical();
        assert_eq!(c.preperiod_len(), 2);
        assert_eq!(c.period_len(), 3);
        assert_eq!(c, swapped);
    }

    #[test]
    fn equality_distinguishes_late_differences() {
        let a = Stream::from_values(&vec![r(1); 5], &[r(2)]).unwrap();
        let b = Stream::from_values(&vec![r(1); 6], &[r(2)]).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let json = r#"{"alphabet": ["1/2", 3, "7/2"], "preperiod": [2], "period": [0, 1]}"#;
        let s: Stream = serde_json::from_str(json).unwrap();
        assert_eq!(s.value_at(1).unwrap(), &Rational::ratio(7, 2));
        let back: Stream = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);

        let bad = [
            r#"{"alphabet": [0.5], "preperiod": [], "period": [0]}"#,
            r#"{"alphabet": ["1"], "preperiod": [], "period": []}"#,
            r#"{"alphabet": ["1"], "preperiod": [], "period": [1]}"#,
            r#"{"alphabet": ["2", "1"], "preperiod": [], "period": [0]}"#,
            r#"{"alphabet": [], "preperiod": [], "period": [0]}"#,
        ];
        for b in bad {
            assert!(serde_json::from_str::<Stream>(b).is_err(), "{b}");
        }
    }

    #[test]
    fn alphabet_metrics() {
        let a = Alphabet::new(vec![r(1), r(2), r(4), r(7)]).unwrap();
        assert_eq!(a.min_gap(), Some(r(1)));
        assert_eq!(a.diameter(), r(6));
        assert_eq!(Alphabet::new(vec![r(3)]).unwrap().min_gap(), None);
        assert_eq!(Alphabet::new(vec![r(1), r(1)]), Err(Error::UnsortedAlphabet(1)));
    }
}
