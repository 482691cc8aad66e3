//! Finitely supported coefficient sequences.
//!
//! A [`CoeffVector`] is the object `x = sum_n x_n e_n` restricted to a finite
//! support. Indices are 1-based to match the usual basis indexing; only
//! nonzero coefficients are stored, sorted by index.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A finitely supported coefficient sequence over 1-based positions.
///
/// Invariants: entries are sorted by index, indices are >= 1, and every
/// stored value is nonzero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoeffVector {
    entries: Vec<(usize, f64)>,
}

impl CoeffVector {
    /// The zero vector (empty support).
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from (index, value) pairs. Zero values are dropped; duplicate
    /// or zero indices are rejected.
    pub fn from_pairs<I: IntoIterator<Item = (usize, f64)>>(pairs: I) -> Result<Self> {
        let mut entries: Vec<(usize, f64)> = pairs.into_iter().filter(|&(_, v)| v != 0.0).collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Domain(format!("duplicate index {}", w[0].0)));
            }
        }
        if entries.first().is_some_and(|&(i, _)| i == 0) {
            return Err(Error::Domain("indices are 1-based; got index 0".into()));
        }
        Ok(Self { entries })
    }

    /// Builds from a dense coefficient slice, position 1 first. Zeros
    /// (including trailing zeros) are canonicalized away.
    pub fn from_dense(coeffs: &[f64]) -> Self {
        Self {
            entries: coeffs
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v != 0.0)
                .map(|(i, &v)| (i + 1, v))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of nonzero coefficients, |supp(x)|.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Support indices in increasing order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(i, _)| i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    /// The coefficient e_n^*(x); zero off the support.
    pub fn coeff(&self, n: usize) -> f64 {
        match self.entries.binary_search_by_key(&n, |&(i, _)| i) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0.0,
        }
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.first().map(|&(i, _)| i)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|&(i, _)| i)
    }

    /// The sup-norm max_n |x_n|; 0 for the zero vector.
    pub fn sup_norm(&self) -> f64 {
        self.entries.iter().map(|&(_, v)| v.abs()).fold(0.0, f64::max)
    }

    /// Smallest nonzero coefficient modulus; None for the zero vector.
    pub fn min_abs_coeff(&self) -> Option<f64> {
        self.entries.iter().map(|&(_, v)| v.abs()).reduce(f64::min)
    }

    pub fn scale(&self, a: f64) -> Self {
        if a == 0.0 {
            return Self::zero();
        }
        Self {
            entries: self.entries.iter().map(|&(i, v)| (i, a * v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(ia, va)), Some(&&(ib, vb))) => {
                    if ia < ib {
                        entries.push((ia, va));
                        a.next();
                    } else if ib < ia {
                        entries.push((ib, vb));
                        b.next();
                    } else {
                        let v = va + vb;
                        if v != 0.0 {
                            entries.push((ia, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(&&e), None) => {
                    entries.push(e);
                    a.next();
                }
                (None, Some(&&e)) => {
                    entries.push(e);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Self { entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Shifts every index by `offset` (support translation).
    pub fn translate(&self, offset: usize) -> Self {
        Self {
            entries: self.entries.iter().map(|&(i, v)| (i + offset, v)).collect(),
        }
    }

    /// Keeps only the entries whose index satisfies the predicate.
    pub fn filter_indices<F: Fn(usize) -> bool>(&self, keep: F) -> Self {
        Self {
            entries: self.entries.iter().copied().filter(|&(i, _)| keep(i)).collect(),
        }
    }

    /// Dense coefficient list from position 1 through the last support index.
    pub fn to_dense(&self) -> Vec<f64> {
        let len = self.max_index().unwrap_or(0);
        let mut out = vec![0.0; len];
        for &(i, v) in &self.entries {
            out[i - 1] = v;
        }
        out
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.max_index().unwrap_or(0).max(other.max_index().unwrap_or(0));
        (1..=n).all(|i| (self.coeff(i) - other.coeff(i)).abs() <= tol)
    }

    /// One-line text form: whitespace-separated decimals, position 1 first.
    /// The zero vector is written as a single `0`.
    pub fn to_line(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let dense = self.to_dense();
        let mut s = String::new();
        for (k, v) in dense.iter().enumerate() {
            if k > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{v}");
        }
        s
    }

    /// Parses the one-line text form.
    pub fn parse_line(line: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("invalid coefficient {tok:?}")))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("non-finite coefficient {tok:?}")));
            }
            coeffs.push(v);
        }
        Ok(Self::from_dense(&coeffs))
    }

    /// Parses a multi-line vector file, one vector per line. Blank lines are
    /// skipped.
    pub fn parse_file(text: &str) -> Result<Vec<Self>> {
        text.lines()
            .filter(|l| !l.trim().is_empty())
            .map(Self::parse_line)
            .collect()
    }
}
