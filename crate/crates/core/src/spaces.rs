//! Norm oracles for the sequence-space models, the p-convexity constants,
//! and the associated convexity property checks.
//!
//! Every oracle is pure and stateless after construction, so values can be
//! shared freely across worker threads. Evaluation is exact floating-point
//! arithmetic; nothing here iterates to convergence.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tga::IndexSet;
use crate::util::sign_vectors;
use crate::vector::CoeffVector;

/// Scalar field of the model space; affects the convexity constant B_p and
/// the discretization of sign suprema.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Field {
    Real,
    Complex,
}

/// Unit-circle discretization used for complex sign suprema.
pub const COMPLEX_SIGN_POINTS: usize = 8;

/// Convexity constants of a p-Banach space.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpaceParams {
    pub p: f64,
    pub field: Field,
    pub a_p: f64,
    pub b_p: f64,
}

/// A_p = (2^p - 1)^(-1/p); B_p = 2^(1/p) A_p over the reals and
/// 4^(1/p) A_p over the complex field. Requires 0 < p <= 1.
pub fn space_constants(p: f64, field: Field) -> Result<SpaceParams> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("convexity exponent p = {p} outside (0, 1]")));
    }
    let a_p = (2f64.powf(p) - 1.0).powf(-1.0 / p);
    let b_p = match field {
        Field::Real => 2f64.powf(1.0 / p) * a_p,
        Field::Complex => 4f64.powf(1.0 / p) * a_p,
    };
    Ok(SpaceParams { p, field, a_p, b_p })
}

/// Spine rule of the interleaved two-factor model: either the minimal
/// sequence derived from (p, q), or an explicit increasing list (positions
/// beyond the list count as off-spine).
#[derive(Clone, Debug, PartialEq)]
pub enum SpineSpec {
    MinimalRule,
    Explicit(Vec<usize>),
}

fn smallest_int_above(v: f64) -> usize {
    (v.floor() as usize) + 1
}

/// The lexicographically minimal sequence with s_m > (m+1)^(q/p) and
/// s_{m+1} >= 1 + 2 s_m. Requires 1 <= p < q.
pub fn spine_sequence(p: f64, q: f64, count: usize) -> Result<Vec<usize>> {
    if !(p >= 1.0 && p < q) {
        return Err(Error::Domain(format!("spine requires 1 <= p < q, got p = {p}, q = {q}")));
    }
    if count == 0 {
        return Err(Error::Domain("spine length must be positive".into()));
    }
    let ratio = q / p;
    let mut out = Vec::with_capacity(count);
    let mut prev = 0usize;
    for m in 1..=count {
        let growth = smallest_int_above(((m + 1) as f64).powf(ratio));
        let doubling = if m == 1 { 0 } else { 1 + 2 * prev };
        let s = growth.max(doubling);
        out.push(s);
        prev = s;
    }
    Ok(out)
}

/// All spine positions <= bound under the minimal rule. The doubling
/// condition makes the sequence geometric, so this is O(log bound).
pub fn spine_below(p: f64, q: f64, bound: usize) -> Vec<usize> {
    let ratio = q / p;
    let mut out = Vec::new();
    let mut prev = 0usize;
    let mut m = 1usize;
    loop {
        let growth = smallest_int_above(((m + 1) as f64).powf(ratio));
        let doubling = if m == 1 { 0 } else { 1 + 2 * prev };
        let s = growth.max(doubling);
        if s > bound {
            return out;
        }
        out.push(s);
        prev = s;
        m += 1;
    }
}

#[derive(Clone, Debug, PartialEq)]
enum NormKind {
    /// (sum |x_n|^p)^(1/p); a quasi-norm when p < 1.
    Lp { p: f64 },
    /// Interleaving of an lp factor (spine positions) and an lq factor
    /// (all other positions), combined with max.
    Mixed { p: f64, q: f64, spine: SpineSpec },
    /// max(lp-base norm, sup over intervals I of |sum_{k in I} x_k| / |I|^(1/2)).
    /// With base <= 2 the interval term is dominated by Cauchy-Schwarz and the
    /// norm collapses to the plain base norm; conditional behavior needs base > 2.
    IntervalSumming { base: f64 },
    /// max(sup-norm, sup_n |sum_{k <= n} x_k|); sign-sensitive.
    Summing,
    /// (sum w_n |x_n|^p)^(1/p) with weight 1 beyond the listed window.
    Weighted { p: f64, weights: Vec<f64> },
    /// Pointwise max of the component oracles.
    MaxOf(Vec<NormOracle>),
}

/// A quasi-norm evaluator with its declared p-convexity exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct NormOracle {
    kind: NormKind,
    convexity: f64,
}

impl NormOracle {
    pub fn lp(p: f64) -> Result<Self> {
        if p <= 0.0 {
            return Err(Error::Domain(format!("lp exponent must be positive, got {p}")));
        }
        Ok(Self {
            kind: NormKind::Lp { p },
            convexity: p.min(1.0),
        })
    }

    /// Mixed model with the minimal spine rule. Requires 1 <= p < q.
    pub fn mixed(p: f64, q: f64) -> Result<Self> {
        Self::mixed_inner(p, q, SpineSpec::MinimalRule)
    }

    /// Mixed model with an explicit strictly increasing spine.
    pub fn mixed_with_spine(p: f64, q: f64, spine: Vec<usize>) -> Result<Self> {
        if spine.windows(2).any(|w| w[1] <= w[0]) || spine.first() == Some(&0) {
            return Err(Error::Domain("spine must be strictly increasing and 1-based".into()));
        }
        Self::mixed_inner(p, q, SpineSpec::Explicit(spine))
    }

    fn mixed_inner(p: f64, q: f64, spine: SpineSpec) -> Result<Self> {
        if !(p >= 1.0 && p < q && q.is_finite()) {
            return Err(Error::Domain(format!("mixed model requires 1 <= p < q < inf, got p = {p}, q = {q}")));
        }
        Ok(Self {
            kind: NormKind::Mixed { p, q, spine },
            convexity: 1.0,
        })
    }

    pub fn interval_summing(base: f64) -> Result<Self> {
        if base <= 0.0 {
            return Err(Error::Domain(format!("base exponent must be positive, got {base}")));
        }
        Ok(Self {
            kind: NormKind::IntervalSumming { base },
            convexity: base.min(1.0),
        })
    }

    pub fn summing() -> Self {
        Self {
            kind: NormKind::Summing,
            convexity: 1.0,
        }
    }

    pub fn weighted(p: f64, weights: Vec<f64>) -> Result<Self> {
        if p <= 0.0 {
            return Err(Error::Domain(format!("weighted exponent must be positive, got {p}")));
        }
        if weights.iter().any(|&w| w <= 0.0) {
            return Err(Error::Domain("weights must be positive".into()));
        }
        Ok(Self {
            kind: NormKind::Weighted { p, weights },
            convexity: p.min(1.0),
        })
    }

    pub fn max_of(parts: Vec<NormOracle>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Domain("max composition needs at least one part".into()));
        }
        let convexity = parts.iter().map(|o| o.convexity).fold(1.0, f64::min);
        Ok(Self {
            kind: NormKind::MaxOf(parts),
            convexity,
        })
    }

    /// Declared exponent for the p-triangle inequality
    /// eval(x+y)^p <= eval(x)^p + eval(y)^p.
    pub fn convexity(&self) -> f64 {
        self.convexity
    }

    /// True when |a_n| <= |b_n| pointwise implies eval(a) <= eval(b).
    pub fn is_coordinatewise_monotone(&self) -> bool {
        match &self.kind {
            NormKind::Lp { .. } | NormKind::Mixed { .. } | NormKind::Weighted { .. } => true,
            NormKind::Summing | NormKind::IntervalSumming { .. } => false,
            NormKind::MaxOf(parts) => parts.iter().all(|o| o.is_coordinatewise_monotone()),
        }
    }

    /// True when the norm depends only on the multiset of coefficient moduli.
    pub fn is_permutation_symmetric(&self) -> bool {
        matches!(self.kind, NormKind::Lp { .. })
    }

    /// Spine positions up to `bound` for the mixed model; None otherwise.
    pub fn spine_positions(&self, bound: usize) -> Option<Vec<usize>> {
        match &self.kind {
            NormKind::Mixed { p, q, spine } => Some(match spine {
                SpineSpec::MinimalRule => spine_below(*p, *q, bound),
                SpineSpec::Explicit(list) => list.iter().copied().take_while(|&s| s <= bound).collect(),
            }),
            _ => None,
        }
    }

    /// Stable textual label used in CSV reports and CLI flags.
    pub fn label(&self) -> String {
        match &self.kind {
            NormKind::Lp { p } => format!("lp:{p}"),
            NormKind::Mixed { p, q, spine } => match spine {
                SpineSpec::MinimalRule => format!("mixed:{p},{q}"),
                SpineSpec::Explicit(list) => format!("mixed:{p},{q}:spine{list:?}"),
            },
            NormKind::IntervalSumming { base } => format!("interval-summing:{base}"),
            NormKind::Summing => "summing".to_string(),
            NormKind::Weighted { p, .. } => format!("weighted:{p}"),
            NormKind::MaxOf(parts) => {
                let inner: Vec<String> = parts.iter().map(|o| o.label()).collect();
                format!("max({})", inner.join(";"))
            }
        }
    }

    /// Parses the CLI space labels: `lp:P`, `mixed:P,Q`, `summing`,
    /// `interval-summing:BASE`.
    pub fn parse(label: &str) -> Result<Self> {
        if label == "summing" {
            return Ok(Self::summing());
        }
        if let Some(rest) = label.strip_prefix("lp:") {
            let p: f64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad lp exponent {rest:?}")))?;
            return Self::lp(p);
        }
        if let Some(rest) = label.strip_prefix("mixed:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("mixed space wants P,Q, got {rest:?}")));
            }
            let p: f64 = parts[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad mixed exponent {:?}", parts[0])))?;
            let q: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad mixed exponent {:?}", parts[1])))?;
            return Self::mixed(p, q);
        }
        if let Some(rest) = label.strip_prefix("interval-summing:") {
            let base: f64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad base exponent {rest:?}")))?;
            return Self::interval_summing(base);
        }
        Err(Error::Parse(format!("unknown space {label:?}")))
    }

    /// Evaluates the quasi-norm on a real coefficient vector.
    pub fn eval(&self, x: &CoeffVector) -> f64 {
        match &self.kind {
            NormKind::Lp { p } => lp_norm(x.iter().map(|(_, v)| v.abs()), *p),
            NormKind::Mixed { p, q, spine } => {
                let bound = x.max_index().unwrap_or(0);
                let positions = match spine {
                    SpineSpec::MinimalRule => spine_below(*p, *q, bound),
                    SpineSpec::Explicit(list) => {
                        list.iter().copied().take_while(|&s| s <= bound).collect()
                    }
                };
                let on_spine = |i: usize| positions.binary_search(&i).is_ok();
                let a = lp_norm(x.iter().filter(|&(i, _)| on_spine(i)).map(|(_, v)| v.abs()), *p);
                let b = lp_norm(x.iter().filter(|&(i, _)| !on_spine(i)).map(|(_, v)| v.abs()), *q);
                a.max(b)
            }
            NormKind::IntervalSumming { base } => {
                let lp = lp_norm(x.iter().map(|(_, v)| v.abs()), *base);
                lp.max(interval_sum_sup(&x.iter().collect::<Vec<_>>()))
            }
            NormKind::Summing => {
                let mut best = 0.0f64;
                let mut running = 0.0f64;
                for (_, v) in x.iter() {
                    best = best.max(v.abs());
                    running += v;
                    best = best.max(running.abs());
                }
                best
            }
            NormKind::Weighted { p, weights } => {
                let terms = x
                    .iter()
                    .map(|(i, v)| weights.get(i - 1).copied().unwrap_or(1.0).powf(1.0 / p) * v.abs());
                lp_norm(terms, *p)
            }
            NormKind::MaxOf(parts) => parts.iter().map(|o| o.eval(x)).fold(0.0, f64::max),
        }
    }

    /// Evaluates on complex coefficients (used by discretized complex sign
    /// suprema). Entries need not be sorted.
    pub fn eval_complex(&self, entries: &[(usize, Complex64)]) -> f64 {
        let mut entries: Vec<(usize, Complex64)> = entries
            .iter()
            .copied()
            .filter(|&(_, v)| v != Complex64::ZERO)
            .collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        match &self.kind {
            NormKind::Lp { p } => lp_norm(entries.iter().map(|&(_, v)| v.norm()), *p),
            NormKind::Mixed { p, q, spine } => {
                let bound = entries.last().map_or(0, |&(i, _)| i);
                let positions = match spine {
                    SpineSpec::MinimalRule => spine_below(*p, *q, bound),
                    SpineSpec::Explicit(list) => {
                        list.iter().copied().take_while(|&s| s <= bound).collect()
                    }
                };
                let on_spine = |i: usize| positions.binary_search(&i).is_ok();
                let a = lp_norm(
                    entries.iter().filter(|&&(i, _)| on_spine(i)).map(|&(_, v)| v.norm()),
                    *p,
                );
                let b = lp_norm(
                    entries.iter().filter(|&&(i, _)| !on_spine(i)).map(|&(_, v)| v.norm()),
                    *q,
                );
                a.max(b)
            }
            NormKind::IntervalSumming { base } => {
                let lp = lp_norm(entries.iter().map(|&(_, v)| v.norm()), *base);
                let mut best = lp;
                for a in 0..entries.len() {
                    let mut sum = Complex64::ZERO;
                    for b in a..entries.len() {
                        sum += entries[b].1;
                        let len = entries[b].0 - entries[a].0 + 1;
                        best = best.max(sum.norm() / (len as f64).sqrt());
                    }
                }
                best
            }
            NormKind::Summing => {
                let mut best = 0.0f64;
                let mut running = Complex64::ZERO;
                for &(_, v) in &entries {
                    best = best.max(v.norm());
                    running += v;
                    best = best.max(running.norm());
                }
                best
            }
            NormKind::Weighted { p, weights } => {
                let terms = entries
                    .iter()
                    .map(|&(i, v)| weights.get(i - 1).copied().unwrap_or(1.0).powf(1.0 / p) * v.norm());
                lp_norm(terms, *p)
            }
            NormKind::MaxOf(parts) => parts
                .iter()
                .map(|o| o.eval_complex(&entries))
                .fold(0.0, f64::max),
        }
    }
}

fn lp_norm<I: Iterator<Item = f64>>(moduli: I, p: f64) -> f64 {
    if p == 1.0 {
        moduli.sum()
    } else if p == 2.0 {
        moduli.map(|m| m * m).sum::<f64>().sqrt()
    } else {
        moduli.map(|m| m.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// sup over intervals of |interval sum| / sqrt(interval length). The supremum
/// is attained on intervals whose endpoints carry support, so the scan runs
/// over support index pairs.
fn interval_sum_sup(entries: &[(usize, f64)]) -> f64 {
    let mut best = 0.0f64;
    for a in 0..entries.len() {
        let mut sum = 0.0f64;
        for b in a..entries.len() {
            sum += entries[b].1;
            let len = entries[b].0 - entries[a].0 + 1;
            best = best.max(sum.abs() / (len as f64).sqrt());
        }
    }
    best
}

/// (sum |x_n|^p)^(1/p); a quasi-norm for p < 1.
pub fn norm_lp(x: &CoeffVector, p: f64) -> Result<f64> {
    Ok(NormOracle::lp(p)?.eval(x))
}

/// Mixed-model norm with an explicit spine list.
pub fn norm_mixed(x: &CoeffVector, p: f64, q: f64, spine: &[usize]) -> Result<f64> {
    Ok(NormOracle::mixed_with_spine(p, q, spine.to_vec())?.eval(x))
}

/// Interval-summing norm with the given base exponent.
pub fn norm_interval_summing(x: &CoeffVector, base: f64) -> Result<f64> {
    Ok(NormOracle::interval_summing(base)?.eval(x))
}

/// Worst observed ratio for one convexity check; values <= 1 (up to float
/// noise) mean the inequality held on every sample.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvexityOutcome {
    pub worst_ratio: f64,
    pub samples: usize,
}

fn combination(y: Option<&CoeffVector>, xs: &[CoeffVector], coeffs: &[f64]) -> CoeffVector {
    let mut acc = y.cloned().unwrap_or_default();
    for (x, &a) in xs.iter().zip(coeffs) {
        if a != 0.0 {
            acc = acc.add(&x.scale(a));
        }
    }
    acc
}

fn max_over_subsets(n: &NormOracle, y: Option<&CoeffVector>, xs: &[CoeffVector]) -> f64 {
    let k = xs.len();
    let mut best = 0.0f64;
    for mask in 0..(1usize << k) {
        let coeffs: Vec<f64> = (0..k).map(|j| if mask >> j & 1 == 1 { 1.0 } else { 0.0 }).collect();
        best = best.max(n.eval(&combination(y, xs, &coeffs)));
    }
    best
}

/// Convexity check with coefficients in [0, 1]:
/// ||y + sum a_n x_n|| <= A_p max_{A subset J} ||y + sum_{n in A} x_n||.
pub fn convexity_subset_check(
    n: &NormOracle,
    a_p: f64,
    y: &CoeffVector,
    xs: &[CoeffVector],
    coeff_samples: &[Vec<f64>],
) -> ConvexityOutcome {
    let rhs = a_p * max_over_subsets(n, Some(y), xs);
    ratio_over_samples(n, Some(y), xs, coeff_samples, rhs)
}

/// Convexity check with |a_n| <= 1 against the sign supremum:
/// ||y + sum a_n x_n|| <= A_p sup_eps ||y + sum eps_n x_n||. Real signs are
/// {-1, +1}; the complex field uses 8 equally spaced unit-circle points.
pub fn convexity_sign_check(
    n: &NormOracle,
    a_p: f64,
    y: &CoeffVector,
    xs: &[CoeffVector],
    coeff_samples: &[Vec<f64>],
    field: Field,
) -> ConvexityOutcome {
    let k = xs.len();
    let rhs = match field {
        Field::Real => {
            let mut best = 0.0f64;
            for signs in sign_vectors(k) {
                best = best.max(n.eval(&combination(Some(y), xs, &signs)));
            }
            a_p * best
        }
        Field::Complex => {
            let roots: Vec<Complex64> = (0..COMPLEX_SIGN_POINTS)
                .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / COMPLEX_SIGN_POINTS as f64))
                .collect();
            let mut best = 0.0f64;
            let mut pattern = vec![0usize; k];
            loop {
                let mut entries: Vec<(usize, Complex64)> =
                    y.iter().map(|(i, v)| (i, Complex64::new(v, 0.0))).collect();
                for (x, &r) in xs.iter().zip(&pattern) {
                    for (i, v) in x.iter() {
                        entries.push((i, roots[r] * v));
                    }
                }
                // merge duplicates
                let merged = merge_complex(entries);
                best = best.max(n.eval_complex(&merged));
                // odometer over the root grid
                let mut pos = 0;
                loop {
                    if pos == k {
                        break;
                    }
                    pattern[pos] += 1;
                    if pattern[pos] < COMPLEX_SIGN_POINTS {
                        break;
                    }
                    pattern[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
            a_p * best
        }
    };
    ratio_over_samples(n, Some(y), xs, coeff_samples, rhs)
}

/// Convexity check without a base point, against B_p and the subset supremum:
/// ||sum a_n x_n|| <= B_p max_{A subset J} ||sum_{n in A} x_n||.
pub fn convexity_homogeneous_check(
    n: &NormOracle,
    b_p: f64,
    xs: &[CoeffVector],
    coeff_samples: &[Vec<f64>],
) -> ConvexityOutcome {
    let rhs = b_p * max_over_subsets(n, None, xs);
    ratio_over_samples(n, None, xs, coeff_samples, rhs)
}

fn ratio_over_samples(
    n: &NormOracle,
    y: Option<&CoeffVector>,
    xs: &[CoeffVector],
    coeff_samples: &[Vec<f64>],
    rhs: f64,
) -> ConvexityOutcome {
    let mut worst = 0.0f64;
    let mut samples = 0usize;
    for coeffs in coeff_samples {
        assert_eq!(coeffs.len(), xs.len(), "coefficient sample length mismatch");
        let lhs = n.eval(&combination(y, xs, coeffs));
        if rhs == 0.0 {
            if lhs == 0.0 {
                continue;
            }
            worst = f64::INFINITY;
            samples += 1;
            continue;
        }
        worst = worst.max(lhs / rhs);
        samples += 1;
    }
    ConvexityOutcome { worst_ratio: worst, samples }
}

fn merge_complex(mut entries: Vec<(usize, Complex64)>) -> Vec<(usize, Complex64)> {
    entries.sort_unstable_by_key(|&(i, _)| i);
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(entries.len());
    for (i, v) in entries {
        match out.last_mut() {
            Some(last) if last.0 == i => last.1 += v,
            _ => out.push((i, v)),
        }
    }
    out
}

/// Signed indicator over a complex unit root assignment, for the discretized
/// complex democracy suprema.
pub fn complex_indicator(set: &IndexSet, root_indices: &[usize]) -> Vec<(usize, Complex64)> {
    set.iter()
        .zip(root_indices)
        .map(|(i, &r)| {
            (
                i,
                Complex64::from_polar(1.0, std::f64::consts::TAU * r as f64 / COMPLEX_SIGN_POINTS as f64),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(coeffs: &[f64]) -> CoeffVector {
        CoeffVector::from_dense(coeffs)
    }

    #[test]
    fn constants_at_p_one() {
        let real = space_constants(1.0, Field::Real).unwrap();
        assert_eq!(real.a_p, 1.0);
        assert_eq!(real.b_p, 2.0);
        let complex = space_constants(1.0, Field::Complex).unwrap();
        assert_eq!(complex.a_p, 1.0);
        assert_eq!(complex.b_p, 4.0);
    }

    #[test]
    fn constants_at_p_half() {
        // (sqrt(2) - 1)^(-2) = 3 + 2 sqrt(2)
        let got = space_constants(0.5, Field::Real).unwrap();
        let expected = 3.0 + 2.0 * 2f64.sqrt();
        assert!((got.a_p - expected).abs() < 1e-12);
        assert!((got.a_p - 5.8284271247461903).abs() < 1e-12);
    }

    #[test]
    fn constants_domain() {
        assert!(space_constants(0.0, Field::Real).is_err());
        assert!(space_constants(1.5, Field::Real).is_err());
        assert!(space_constants(-0.5, Field::Real).is_err());
    }

    #[test]
    fn lp_norm_examples() {
        assert_eq!(norm_lp(&v(&[3.0, 2.0, 1.0]), 1.0).unwrap(), 6.0);
        assert_eq!(norm_lp(&v(&[3.0, 4.0]), 2.0).unwrap(), 5.0);
        assert_eq!(norm_lp(&CoeffVector::zero(), 0.5).unwrap(), 0.0);
        assert!(norm_lp(&v(&[1.0]), 0.0).is_err());
    }

    #[test]
    fn spine_sequence_minimal() {
        // independently recomputed: minimal integers with s_m > (m+1)^2 and
        // s_{m+1} >= 1 + 2 s_m for (p, q) = (1, 2)
        let mut expected = Vec::new();
        let mut prev = 0usize;
        for m in 1..=4 {
            let mut s = prev.max(1);
            loop {
                let growth_ok = (s * s) as f64 > 0.0 && s as f64 > ((m + 1) * (m + 1)) as f64;
                let doubling_ok = m == 1 || s >= 1 + 2 * prev;
                if growth_ok && doubling_ok {
                    break;
                }
                s += 1;
            }
            expected.push(s);
            prev = s;
        }
        assert_eq!(expected, vec![5, 11, 23, 47]);
        assert_eq!(spine_sequence(1.0, 2.0, 4).unwrap(), vec![5, 11, 23, 47]);
        assert_eq!(spine_sequence(1.0, 2.0, 1).unwrap(), vec![5]);
        assert!(spine_sequence(2.0, 2.0, 3).is_err());
        assert!(spine_sequence(1.0, 2.0, 0).is_err());
        assert_eq!(spine_below(1.0, 2.0, 47), vec![5, 11, 23, 47]);
        assert_eq!(spine_below(1.0, 2.0, 46), vec![5, 11, 23]);
    }

    #[test]
    fn mixed_norm_examples() {
        let spine = spine_sequence(1.0, 2.0, 4).unwrap();
        let one_spine = CoeffVector::from_pairs([(spine[0], 1.0)]).unwrap();
        assert_eq!(norm_mixed(&one_spine, 1.0, 2.0, &spine).unwrap(), 1.0);

        let four_spine = CoeffVector::from_pairs(spine.iter().map(|&s| (s, 1.0))).unwrap();
        assert_eq!(norm_mixed(&four_spine, 1.0, 2.0, &spine).unwrap(), 4.0);

        let four_off = v(&[1.0, 1.0, 1.0, 1.0]); // positions 1..4 are off-spine
        assert_eq!(norm_mixed(&four_off, 1.0, 2.0, &spine).unwrap(), 2.0);

        assert!(norm_mixed(&four_off, 2.0, 2.0, &spine).is_err());

        // the rule-based oracle agrees with the explicit spine
        let rule = NormOracle::mixed(1.0, 2.0).unwrap();
        assert_eq!(rule.eval(&four_spine), 4.0);
        assert_eq!(rule.eval(&four_off), 2.0);
    }

    #[test]
    fn interval_summing_examples() {
        // independent exhaustive scan over all (start, end) pairs
        fn scan(coeffs: &[f64], base: f64) -> f64 {
            let lp: f64 = coeffs.iter().map(|c| c.abs().powf(base)).sum::<f64>().powf(1.0 / base);
            let mut best = lp;
            for a in 0..coeffs.len() {
                for b in a..coeffs.len() {
                    let sum: f64 = coeffs[a..=b].iter().sum();
                    best = best.max(sum.abs() / ((b - a + 1) as f64).sqrt());
                }
            }
            best
        }
        for coeffs in [&[1.0, 1.0, 1.0, 1.0][..], &[1.0, -1.0, 1.0, -1.0][..], &[1.0][..]] {
            let got = norm_interval_summing(&v(coeffs), 2.0).unwrap();
            assert!((got - scan(coeffs, 2.0)).abs() < 1e-15);
        }
        assert_eq!(norm_interval_summing(&v(&[1.0, 1.0, 1.0, 1.0]), 2.0).unwrap(), 2.0);
        assert_eq!(norm_interval_summing(&v(&[1.0, -1.0, 1.0, -1.0]), 2.0).unwrap(), 2.0);
        assert_eq!(norm_interval_summing(&v(&[1.0]), 2.0).unwrap(), 1.0);
        // gaps count toward interval length
        let gapped = CoeffVector::from_pairs([(1, 1.0), (4, 1.0)]).unwrap();
        assert_eq!(norm_interval_summing(&gapped, 4.0).unwrap(), 1.0);
    }

    #[test]
    fn summing_norm_counts_prefix_sums() {
        let n = NormOracle::summing();
        assert_eq!(n.eval(&v(&[1.0, -1.0, 1.0, -1.0])), 1.0);
        assert_eq!(n.eval(&v(&[-1.0, -1.0, -1.0])), 3.0);
        assert_eq!(n.eval(&CoeffVector::zero()), 0.0);
        // translation of an isolated block preserves the norm
        let y = v(&[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(n.eval(&y.translate(10)), n.eval(&y));
    }

    #[test]
    fn complex_eval_matches_real_on_real_entries() {
        let oracles = [
            NormOracle::lp(1.0).unwrap(),
            NormOracle::lp(0.5).unwrap(),
            NormOracle::mixed(1.0, 2.0).unwrap(),
            NormOracle::summing(),
            NormOracle::interval_summing(4.0).unwrap(),
        ];
        let x = v(&[0.5, -1.0, 2.0, 0.0, 1.0]);
        let entries: Vec<(usize, Complex64)> =
            x.iter().map(|(i, v)| (i, Complex64::new(v, 0.0))).collect();
        for n in &oracles {
            assert!((n.eval(&x) - n.eval_complex(&entries)).abs() < 1e-12, "{}", n.label());
        }
    }

    #[test]
    fn labels_roundtrip() {
        for label in ["lp:1", "lp:0.5", "mixed:1,2", "summing", "interval-summing:2"] {
            let n = NormOracle::parse(label).unwrap();
            assert_eq!(n.label(), label);
        }
        assert!(NormOracle::parse("nosuch").is_err());
        assert!(NormOracle::parse("lp:x").is_err());
    }

    #[test]
    fn convexity_checks_hold_on_l1() {
        let n = NormOracle::lp(1.0).unwrap();
        let params = space_constants(1.0, Field::Real).unwrap();
        let y = v(&[0.5, -0.25]);
        let xs = vec![v(&[1.0]), v(&[0.0, 1.0]), v(&[0.0, 0.0, -1.0])];
        let grid: Vec<Vec<f64>> = vec![
            vec![0.0, 0.5, 1.0],
            vec![1.0, 0.25, 0.75],
            vec![0.3, 0.0, 0.9],
        ];
        let out = convexity_subset_check(&n, params.a_p, &y, &xs, &grid);
        assert!(out.worst_ratio <= 1.0 + 1e-12);
        let signed: Vec<Vec<f64>> = vec![vec![-1.0, 0.5, 0.25], vec![0.9, -0.9, 0.1]];
        let out = convexity_sign_check(&n, params.a_p, &y, &xs, &signed, Field::Real);
        assert!(out.worst_ratio <= 1.0 + 1e-12);
        let out = convexity_sign_check(&n, params.a_p, &y, &xs, &signed, Field::Complex);
        assert!(out.worst_ratio <= 1.0 + 1e-12);
        let out = convexity_homogeneous_check(&n, params.b_p, &xs, &signed);
        assert!(out.worst_ratio <= 1.0 + 1e-12);
    }
}
