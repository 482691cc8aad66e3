//! Greedy-set machinery for the thresholding greedy algorithm.
//!
//! An m-greedy set of `x` is any `A` with `|A| = m` whose smallest coefficient
//! modulus dominates every coefficient outside `A`. Ties make greedy sets
//! non-unique; [`greedy_sets`] enumerates all of them (capped) and
//! [`canonical_greedy_set`] picks the leftmost one.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::util::{binomial, Combinations};
use crate::vector::CoeffVector;

/// Default cap on the number of greedy sets one enumeration may produce.
pub const DEFAULT_GREEDY_CAP: usize = 100_000;

/// A sorted, duplicate-free finite set of 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(n: usize) -> Self {
        Self { indices: vec![n] }
    }

    /// The prefix set {1, ..., m}; empty when m = 0.
    pub fn prefix(m: usize) -> Self {
        Self {
            indices: (1..=m).collect(),
        }
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut indices: Vec<usize> = iter.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        Self { indices }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, n: usize) -> bool {
        self.indices.binary_search(&n).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn first(&self) -> Option<usize> {
        self.indices.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.indices.last().copied()
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_iter(self.iter().chain(other.iter()))
    }

    pub fn minus(&self, other: &Self) -> Self {
        Self {
            indices: self.iter().filter(|&n| !other.contains(n)).collect(),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self {
            indices: self.iter().filter(|&n| other.contains(n)).collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.iter().all(|n| !other.contains(n))
    }

    /// `A < B`: every element of A is below every element of B. Vacuously
    /// true when either set is empty.
    pub fn strictly_left_of(&self, other: &Self) -> bool {
        match (self.last(), other.first()) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        }
    }

    /// True when the set is a (possibly empty) interval of consecutive
    /// integers.
    pub fn is_interval(&self) -> bool {
        self.indices.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

/// An interval {start, ..., start + len - 1}; len 0 is the empty interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexInterval {
    pub start: usize,
    pub len: usize,
}

impl IndexInterval {
    pub fn new(start: usize, len: usize) -> Result<Self> {
        if len > 0 && start == 0 {
            return Err(Error::Domain("interval start must be >= 1".into()));
        }
        Ok(Self {
            start: if len == 0 { 1 } else { start },
            len,
        })
    }

    pub fn empty() -> Self {
        Self { start: 1, len: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn end(&self) -> usize {
        self.start + self.len.saturating_sub(1)
    }

    pub fn contains(&self, n: usize) -> bool {
        self.len > 0 && n >= self.start && n <= self.end()
    }

    pub fn to_set(&self) -> IndexSet {
        IndexSet::from_iter(self.start..self.start + self.len)
    }
}

/// A sign assignment with |eps_n| = 1 on a finite set of indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SignPattern {
    entries: Vec<(usize, f64)>,
}

impl SignPattern {
    pub fn from_pairs<I: IntoIterator<Item = (usize, f64)>>(pairs: I) -> Result<Self> {
        let mut entries: Vec<(usize, f64)> = pairs.into_iter().collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Domain(format!("duplicate sign index {}", w[0].0)));
            }
        }
        for &(i, s) in &entries {
            if i == 0 {
                return Err(Error::Domain("sign indices are 1-based".into()));
            }
            if s.abs() != 1.0 {
                return Err(Error::Domain(format!("sign at {i} has modulus {} != 1", s.abs())));
            }
        }
        Ok(Self { entries })
    }

    /// All-plus signs on the given set.
    pub fn all_plus(set: &IndexSet) -> Self {
        Self {
            entries: set.iter().map(|i| (i, 1.0)).collect(),
        }
    }

    /// Alternating +,-,+,... in index order over the given set.
    pub fn alternating(set: &IndexSet) -> Self {
        Self {
            entries: set
                .iter()
                .enumerate()
                .map(|(k, i)| (i, if k % 2 == 0 { 1.0 } else { -1.0 }))
                .collect(),
        }
    }

    pub fn sign(&self, n: usize) -> Option<f64> {
        self.entries
            .binary_search_by_key(&n, |&(i, _)| i)
            .ok()
            .map(|p| self.entries[p].1)
    }

    pub fn defined_on(&self, set: &IndexSet) -> bool {
        set.iter().all(|n| self.sign(n).is_some())
    }
}

/// A bijection of the window {1, ..., window}, identity beyond it.
#[derive(Clone, Debug)]
pub struct Permutation {
    image: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    /// `image[i]` is the image of position `i + 1`.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut inverse = vec![0usize; n];
        for (k, &v) in image.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::Domain(format!("permutation image {v} outside 1..={n}")));
            }
            if inverse[v - 1] != 0 {
                return Err(Error::Domain(format!("permutation repeats image {v}")));
            }
            inverse[v - 1] = k + 1;
        }
        Ok(Self { image, inverse })
    }

    pub fn identity(window: usize) -> Self {
        Self {
            image: (1..=window).collect(),
            inverse: (1..=window).collect(),
        }
    }

    pub fn window(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, n: usize) -> usize {
        if n >= 1 && n <= self.image.len() {
            self.image[n - 1]
        } else {
            n
        }
    }

    pub fn apply_inverse(&self, n: usize) -> usize {
        if n >= 1 && n <= self.inverse.len() {
            self.inverse[n - 1]
        } else {
            n
        }
    }

    pub fn apply_set(&self, set: &IndexSet) -> IndexSet {
        IndexSet::from_iter(set.iter().map(|n| self.apply(n)))
    }

    /// Coefficients of `x` read in the reordered basis (e_{pi(n)})_n: position
    /// n carries the coefficient of x at pi(n).
    pub fn reordered_coefficients(&self, x: &CoeffVector) -> CoeffVector {
        CoeffVector::from_pairs(x.iter().map(|(i, v)| (self.apply_inverse(i), v)))
            .expect("bijection preserves distinct indices")
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }
}

/// One TGA step: the vector, the step index, the chosen greedy set, the
/// residual norm, and optional benchmark functional values.
#[derive(Clone, Debug, Serialize)]
pub struct GreedyRecord {
    pub x_dense: Vec<f64>,
    pub m: usize,
    pub greedy_set: IndexSet,
    pub residual_norm: f64,
    pub sigma_tilde: Option<f64>,
    pub sigma_check: Option<f64>,
    pub sigma_hathat: Option<f64>,
    pub prefix_residual: Option<f64>,
}

/// True when `A` satisfies the greedy threshold condition for `x`:
/// min_{n in A} |x_n| >= max_{n not in A} |x_n|.
pub fn is_greedy_set(x: &CoeffVector, set: &IndexSet) -> bool {
    let inside_min = set
        .iter()
        .map(|n| x.coeff(n).abs())
        .fold(f64::INFINITY, f64::min);
    let outside_max = x
        .iter()
        .filter(|&(n, _)| !set.contains(n))
        .map(|(_, v)| v.abs())
        .fold(0.0, f64::max);
    inside_min >= outside_max
}

/// All m-greedy sets of `x`, enumerated with the tie boundary expanded
/// combinatorially, in lexicographic order. Errors when the tie expansion
/// would exceed `cap`.
///
/// When m exceeds |supp(x)| the zero coordinates all tie at modulus 0; the
/// enumeration then returns the single completion by the smallest indices
/// outside the support.
pub fn greedy_sets_capped(x: &CoeffVector, m: usize, cap: usize) -> Result<Vec<IndexSet>> {
    let support: Vec<usize> = x.support().collect();
    if m == 0 {
        return Ok(vec![IndexSet::empty()]);
    }
    if m >= support.len() {
        return Ok(vec![complete_with_smallest(&support, m)]);
    }

    // Sort support moduli descending to locate the threshold value.
    let mut by_modulus: Vec<(f64, usize)> = x.iter().map(|(i, v)| (v.abs(), i)).collect();
    by_modulus.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let threshold = by_modulus[m - 1].0;

    let mandatory: Vec<usize> = by_modulus
        .iter()
        .filter(|&&(v, _)| v > threshold)
        .map(|&(_, i)| i)
        .collect();
    let mut ties: Vec<usize> = by_modulus
        .iter()
        .filter(|&&(v, _)| v == threshold)
        .map(|&(_, i)| i)
        .collect();
    ties.sort_unstable();

    let choose = m - mandatory.len();
    let count = binomial(ties.len(), choose);
    if count > cap as u128 {
        return Err(Error::CapExceeded(format!(
            "{count} greedy sets (ties {} choose {choose}) exceed cap {cap}",
            ties.len()
        )));
    }

    let mut out = Vec::with_capacity(count as usize);
    for combo in Combinations::new(ties.len(), choose) {
        let mut indices = mandatory.clone();
        indices.extend(combo.iter().map(|&k| ties[k]));
        out.push(IndexSet::from_iter(indices));
    }
    Ok(out)
}

/// [`greedy_sets_capped`] with the default cap.
pub fn greedy_sets(x: &CoeffVector, m: usize) -> Result<Vec<IndexSet>> {
    greedy_sets_capped(x, m, DEFAULT_GREEDY_CAP)
}

/// The canonical greedy set Lambda_m(x): the unique B in G(x, m) with
/// B \ A < A \ B for every other greedy set A, i.e. ties resolved toward the
/// smallest indices.
pub fn canonical_greedy_set(x: &CoeffVector, m: usize) -> IndexSet {
    let support: Vec<usize> = x.support().collect();
    if m >= support.len() {
        return complete_with_smallest(&support, m);
    }
    let mut by_modulus: Vec<(f64, usize)> = x.iter().map(|(i, v)| (v.abs(), i)).collect();
    by_modulus.sort_unstable_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    IndexSet::from_iter(by_modulus[..m].iter().map(|&(_, i)| i))
}

fn complete_with_smallest(support: &[usize], m: usize) -> IndexSet {
    let mut indices: Vec<usize> = support.to_vec();
    let mut candidate = 1usize;
    while indices.len() < m {
        if !support.contains(&candidate) {
            indices.push(candidate);
        }
        candidate += 1;
    }
    IndexSet::from_iter(indices)
}

/// The projection P_A(x) onto the coordinates of `A`.
pub fn project(x: &CoeffVector, set: &IndexSet) -> CoeffVector {
    x.filter_indices(|i| set.contains(i))
}

/// The complement projection x - P_A(x).
pub fn complement_project(x: &CoeffVector, set: &IndexSet) -> CoeffVector {
    x.filter_indices(|i| !set.contains(i))
}

/// The greedy sum G_m(x) = P_A(x) for a greedy set A; rejects sets that fail
/// the greedy threshold condition.
pub fn greedy_sum(x: &CoeffVector, set: &IndexSet) -> Result<CoeffVector> {
    if !is_greedy_set(x, set) {
        return Err(Error::Contract(format!(
            "{:?} is not a greedy set of the given vector",
            set.as_slice()
        )));
    }
    Ok(project(x, set))
}

/// The partial sum S_m(x): projection onto {1, ..., m}; S_0 = 0.
pub fn partial_sum(x: &CoeffVector, m: usize) -> CoeffVector {
    x.filter_indices(|i| i <= m)
}

/// The (signed) indicator vector 1_A or 1_{eps A}.
pub fn indicator(set: &IndexSet, signs: Option<&SignPattern>) -> Result<CoeffVector> {
    match signs {
        None => CoeffVector::from_pairs(set.iter().map(|i| (i, 1.0))),
        Some(eps) => {
            if !eps.defined_on(set) {
                return Err(Error::Domain("sign pattern missing an index of the set".into()));
            }
            CoeffVector::from_pairs(set.iter().map(|i| (i, eps.sign(i).unwrap())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coeffs: &[f64]) -> CoeffVector {
        CoeffVector::from_dense(coeffs)
    }

    fn sets(list: &[&[usize]]) -> Vec<IndexSet> {
        list.iter().map(|s| IndexSet::from_iter(s.iter().copied())).collect()
    }

    #[test]
    fn greedy_sets_tie_at_top() {
        // two coordinates tie at modulus 2
        let got = greedy_sets(&v(&[2.0, -2.0, 1.0]), 1).unwrap();
        assert_eq!(got, sets(&[&[1], &[2]]));
    }

    #[test]
    fn greedy_sets_unique() {
        let got = greedy_sets(&v(&[3.0, 1.0, 2.0]), 2).unwrap();
        assert_eq!(got, sets(&[&[1, 3]]));
    }

    #[test]
    fn greedy_sets_full_tie() {
        let got = greedy_sets(&v(&[1.0, 1.0, 1.0]), 2).unwrap();
        assert_eq!(got, sets(&[&[1, 2], &[1, 3], &[2, 3]]));
    }

    #[test]
    fn greedy_sets_zero_m() {
        assert_eq!(greedy_sets(&v(&[1.0]), 0).unwrap(), vec![IndexSet::empty()]);
    }

    #[test]
    fn greedy_sets_beyond_support_completes_with_smallest() {
        let got = greedy_sets(&v(&[0.0, 5.0]), 3).unwrap();
        assert_eq!(got, sets(&[&[1, 2, 3]]));
    }

    #[test]
    fn greedy_cap_is_an_error() {
        let x = v(&[1.0; 30]);
        assert!(matches!(
            greedy_sets_capped(&x, 15, 1000),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn canonical_prefers_smallest_indices() {
        assert_eq!(canonical_greedy_set(&v(&[1.0, 1.0, 1.0]), 2), IndexSet::from_iter([1, 2]));
        assert_eq!(canonical_greedy_set(&v(&[2.0, -2.0, 1.0]), 1), IndexSet::singleton(1));
        assert_eq!(canonical_greedy_set(&v(&[0.0, 5.0]), 1), IndexSet::singleton(2));
    }

    #[test]
    fn canonical_is_leftmost_among_all_greedy_sets() {
        let x = v(&[1.0, -1.0, 0.5, 1.0]);
        let canon = canonical_greedy_set(&x, 2);
        for a in greedy_sets(&x, 2).unwrap() {
            if a != canon {
                assert!(canon.minus(&a).strictly_left_of(&a.minus(&canon)));
            }
        }
    }

    #[test]
    fn project_and_complement_partition() {
        let x = v(&[1.0, 2.0, 3.0]);
        let a = IndexSet::singleton(2);
        assert_eq!(project(&x, &a), v(&[0.0, 2.0, 0.0]));
        assert_eq!(project(&x, &IndexSet::empty()), CoeffVector::zero());
        assert_eq!(project(&x, &IndexSet::prefix(5)), x);
        assert_eq!(project(&x, &a).add(&complement_project(&x, &a)), x);
    }

    #[test]
    fn greedy_sum_accepts_ties_and_rejects_others() {
        assert_eq!(greedy_sum(&v(&[3.0, 1.0, 2.0]), &IndexSet::from_iter([1, 3])).unwrap(), v(&[3.0, 0.0, 2.0]));
        assert_eq!(greedy_sum(&v(&[1.0, 1.0]), &IndexSet::singleton(2)).unwrap(), v(&[0.0, 1.0]));
        assert!(matches!(
            greedy_sum(&v(&[3.0, 1.0, 2.0]), &IndexSet::singleton(2)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn partial_sums() {
        let x = v(&[1.0, 2.0, 3.0]);
        assert_eq!(partial_sum(&x, 2), v(&[1.0, 2.0, 0.0]));
        assert_eq!(partial_sum(&x, 0), CoeffVector::zero());
        assert_eq!(partial_sum(&x, 9), x);
    }

    #[test]
    fn indicators() {
        assert_eq!(indicator(&IndexSet::from_iter([1, 3]), None).unwrap(), v(&[1.0, 0.0, 1.0]));
        let eps = SignPattern::from_pairs([(1, 1.0), (2, -1.0)]).unwrap();
        assert_eq!(
            indicator(&IndexSet::from_iter([1, 2]), Some(&eps)).unwrap(),
            v(&[1.0, -1.0])
        );
        assert_eq!(indicator(&IndexSet::empty(), None).unwrap(), CoeffVector::zero());
        let partial = SignPattern::from_pairs([(1, 1.0)]).unwrap();
        assert!(indicator(&IndexSet::from_iter([1, 2]), Some(&partial)).is_err());
    }

    #[test]
    fn set_comparisons_and_intervals() {
        let a = IndexSet::from_iter([1, 2]);
        let b = IndexSet::from_iter([4, 5]);
        assert!(a.strictly_left_of(&b));
        assert!(!b.strictly_left_of(&a));
        // empty compares both ways
        assert!(IndexSet::empty().strictly_left_of(&a));
        assert!(a.strictly_left_of(&IndexSet::empty()));
        assert!(a.is_interval());
        assert!(!IndexSet::from_iter([1, 3]).is_interval());
        assert!(IndexSet::empty().is_interval());
        assert_eq!(IndexInterval::new(2, 3).unwrap().to_set(), IndexSet::from_iter([2, 3, 4]));
        assert!(IndexInterval::empty().to_set().is_empty());
    }

    #[test]
    fn sign_pattern_validation() {
        assert!(SignPattern::from_pairs([(1, 0.5)]).is_err());
        assert!(SignPattern::from_pairs([(1, 1.0), (1, -1.0)]).is_err());
        let alt = SignPattern::alternating(&IndexSet::from_iter([2, 5, 9]));
        assert_eq!(alt.sign(2), Some(1.0));
        assert_eq!(alt.sign(5), Some(-1.0));
        assert_eq!(alt.sign(9), Some(1.0));
    }

    #[test]
    fn permutation_roundtrip_and_reordered_coefficients() {
        let p = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.apply_inverse(2), 1);
        assert_eq!(p.apply(7), 7);
        let x = v(&[10.0, 20.0, 30.0]);
        // position n of the reordered view carries x at pi(n)
        let y = p.reordered_coefficients(&x);
        assert_eq!(y.coeff(1), 20.0);
        assert_eq!(y.coeff(2), 30.0);
        assert_eq!(y.coeff(3), 10.0);
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
    }
}
