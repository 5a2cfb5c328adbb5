use crate::MatchingError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// A finite set of integers kept as its maximal runs `[lo, hi]`, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalUnion {
    intervals: Vec<(i64, i64)>,
}

impl IntervalUnion {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points<I: IntoIterator<Item = i64>>(points: I) -> Self {
        let set: BTreeSet<i64> = points.into_iter().collect();
        let mut intervals: Vec<(i64, i64)> = Vec::new();
        for p in set {
            match intervals.last_mut() {
                Some((_, hi)) if *hi + 1 == p => *hi = p,
                _ => intervals.push((p, p)),
            }
        }
        IntervalUnion { intervals }
    }

    pub fn from_intervals<I: IntoIterator<Item = (i64, i64)>>(ivs: I) -> Self {
        Self::from_points(ivs.into_iter().flat_map(|(a, b)| a..=b))
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn points(&self) -> impl Iterator<Item = i64> + '_ {
        self.intervals.iter().flat_map(|&(a, b)| a..=b)
    }

    pub fn contains(&self, p: i64) -> bool {
        self.run_of(p).is_some()
    }

    /// The maximal run containing `p`.
    pub fn run_of(&self, p: i64) -> Option<(i64, i64)> {
        let i = self.intervals.partition_point(|&(_, hi)| hi < p);
        self.intervals.get(i).copied().filter(|&(lo, _)| lo <= p)
    }

    pub fn total_size(&self) -> usize {
        self.intervals.iter().map(|&(a, b)| (b - a + 1) as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn all_even(&self) -> bool {
        self.intervals.iter().all(|&(a, b)| (b - a + 1) % 2 == 0)
    }

    pub fn within(&self, n: i64) -> bool {
        self.intervals.iter().all(|&(a, b)| a >= 1 && b <= n)
    }

    pub fn with_points<I: IntoIterator<Item = i64>>(&self, extra: I) -> Self {
        Self::from_points(self.points().chain(extra))
    }

    /// Drops every point outside `[1, n]`.
    pub fn clip(&self, n: i64) -> Self {
        Self::from_points(self.points().filter(|&p| (1..=n).contains(&p)))
    }

    /// Repeatedly extends the first odd run by one point, to the right when
    /// that stays in `[1, n]`, else to the left.
    pub fn pad_to_even(&self, n: i64) -> Result<Self, MatchingError> {
        let mut cur = self.clone();
        while let Some(&(lo, hi)) = cur.intervals.iter().find(|&&(a, b)| (b - a + 1) % 2 == 1) {
            let extra = if hi < n {
                hi + 1
            } else if lo > 1 {
                lo - 1
            } else {
                return Err(MatchingError::Boundary { lo, hi, n });
            };
            cur = cur.with_points([extra]);
        }
        Ok(cur)
    }
}

/// The left and right functions of an interval with respect to a multiset,
/// stored doubled so that the `-k/2` steps stay integral.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftRightProfile {
    pub interval: (i64, i64),
    pub twice_f_l: Vec<i64>,
    pub twice_f_r: Vec<i64>,
}

impl LeftRightProfile {
    pub fn new(interval: (i64, i64), k: &[i64]) -> Self {
        let (a, b) = interval;
        let mut mult: BTreeMap<i64, i64> = BTreeMap::new();
        for &p in k {
            *mult.entry(p).or_default() += 1;
        }
        let twice_delta = |i: i64| match mult.get(&i) {
            None => 4,
            Some(&k) => -k,
        };
        let len = (b - a + 1) as usize;
        let mut twice_f_l = vec![0; len];
        for idx in 1..len {
            twice_f_l[idx] = twice_f_l[idx - 1] + twice_delta(a + idx as i64);
        }
        let mut twice_f_r = vec![0; len];
        for idx in (0..len.saturating_sub(1)).rev() {
            twice_f_r[idx] = twice_f_r[idx + 1] + twice_delta(a + idx as i64);
        }
        LeftRightProfile { interval, twice_f_l, twice_f_r }
    }

    pub fn f_l(&self, i: i64) -> f64 {
        self.twice_f_l[(i - self.interval.0) as usize] as f64 / 2.0
    }

    pub fn f_r(&self, i: i64) -> f64 {
        self.twice_f_r[(i - self.interval.0) as usize] as f64 / 2.0
    }

    pub fn nonnegative(&self) -> bool {
        self.twice_f_l.iter().chain(&self.twice_f_r).all(|&v| v >= 0)
    }
}

impl IntervalUnion {
    /// True when every point of `k` is covered and both functions of every
    /// run are nonnegative.
    pub fn well_covers(&self, k: &[i64]) -> bool {
        k.iter().all(|&p| self.contains(p))
            && self.intervals.iter().all(|&iv| {
                let inside: Vec<i64> = k.iter().copied().filter(|&p| iv.0 <= p && p <= iv.1).collect();
                LeftRightProfile::new(iv, &inside).nonnegative()
            })
    }
}

/// Incremental well cover: each point claims itself and the two nearest free
/// integers on each side, then odd runs are padded. Runs may stick out of
/// `[1, n]`; only the padding step is confined to it.
pub fn well_cover(k: &[i64], n: i64) -> Result<IntervalUnion, MatchingError> {
    if let Some(&p) = k.iter().find(|&&p| !(1..=n).contains(&p)) {
        return Err(MatchingError::PointOutOfRange { point: p, n });
    }
    let mut points = BTreeSet::new();
    let mut sorted = k.to_vec();
    sorted.sort_unstable();
    for p in sorted {
        points.insert(p);
        for step in [-1i64, 1] {
            let mut x = p;
            let mut claimed = 0;
            while claimed < 2 {
                x += step;
                if points.insert(x) {
                    claimed += 1;
                }
            }
        }
    }
    IntervalUnion::from_points(points).pad_to_even(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_merge() {
        let u = IntervalUnion::from_points([1, 2, 3, 7, 8]);
        assert_eq!(u.intervals(), &[(1, 3), (7, 8)]);
        assert_eq!(u.run_of(2), Some((1, 3)));
        assert_eq!(u.run_of(5), None);
        assert_eq!(u.pad_to_even(10).unwrap().intervals(), &[(1, 4), (7, 8)]);
        // Padding can merge with the next run and create a new odd run.
        let v = IntervalUnion::from_points([1, 2, 3, 5, 6, 7]);
        assert_eq!(v.pad_to_even(10).unwrap().intervals(), &[(1, 8)]);
        assert!(IntervalUnion::from_points([1]).pad_to_even(1).is_err());
    }

    #[test]
    fn profile_by_hand() {
        // I = [3, 7], K = {5}: f_l = 0, 2, 1.5, 3.5, 5.5.
        let p = LeftRightProfile::new((3, 7), &[5]);
        assert_eq!(p.twice_f_l, vec![0, 4, 3, 7, 11]);
        assert_eq!(p.twice_f_r, vec![11, 7, 3, 4, 0]);
        assert_eq!(p.f_l(5), 1.5);
    }

    #[test]
    fn single_point() {
        let s = well_cover(&[5], 200).unwrap();
        assert_eq!(s.intervals(), &[(3, 8)]);
        assert!(s.total_size() <= 6 && s.all_even() && s.well_covers(&[5]));
    }

    #[test]
    fn repeated_point() {
        let s = well_cover(&[7, 7], 200).unwrap();
        assert!(s.total_size() <= 12 && s.all_even() && s.well_covers(&[7, 7]));
    }

    #[test]
    fn empty_and_out_of_range() {
        assert!(well_cover(&[], 10).unwrap().is_empty());
        assert!(well_cover(&[0], 10).is_err());
    }

    #[test]
    fn stacked_points_near_the_edge() {
        let k = vec![3; 12];
        let s = well_cover(&k, 200).unwrap();
        assert!(s.well_covers(&k) && s.all_even() && s.total_size() <= 72);
        // Clipping to the grid would break the left function here.
        assert!(!s.clip(200).well_covers(&k));
    }
}
