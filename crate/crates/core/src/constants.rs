//! Empirical estimation of the greedy-type constants over seeded sample
//! families, with maximizing witnesses attached to every estimate.
//!
//! Suprema computed here are certified lower bounds: exhaustive tiers scan
//! the whole stated family, anything that had to fall back to structured
//! candidates or skip a sample records a note in the report. Sample
//! generation is counter-based, so results are identical for any worker
//! count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::functionals::{
    best_prefix_tail, sigma_check, sigma_hathat_with, sigma_tilde_with, FunctionalConfig,
};
use crate::spaces::{complex_indicator, Field, NormOracle};
use crate::tga::{complement_project, greedy_sets_capped, indicator, project, IndexSet, SignPattern};
use crate::util::{binomial, sign_vectors, Combinations};
use crate::vector::CoeffVector;

/// A reproducible family of sample vectors. The first two samples are the
/// canonical ratio-one seeds e_1 and e_1 + e_2 (unless disabled), so every
/// estimated constant sees at least one datum at ratio 1.
#[derive(Clone, Debug)]
pub struct SampleFamily {
    pub dim: usize,
    pub kind: FamilyKind,
    pub seed: u64,
    pub include_ratio_one_seeds: bool,
}

#[derive(Clone, Debug)]
pub enum FamilyKind {
    /// Every vector of values^dim, decoded in row-major order.
    ExhaustiveGrid { values: Vec<f64> },
    /// `count` vectors with coordinates uniform in [-amplitude, amplitude].
    RandomUniform { count: usize, amplitude: f64 },
    /// An explicit vector list.
    Explicit(Vec<CoeffVector>),
}

/// The certification-tier grid {±2, ±1, ±1/2, 0}.
pub fn certification_grid() -> Vec<f64> {
    vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
}

impl SampleFamily {
    pub fn exhaustive_grid(dim: usize, values: Vec<f64>) -> Self {
        Self { dim, kind: FamilyKind::ExhaustiveGrid { values }, seed: 0, include_ratio_one_seeds: true }
    }

    pub fn random_uniform(dim: usize, count: usize, seed: u64) -> Self {
        Self {
            dim,
            kind: FamilyKind::RandomUniform { count, amplitude: 1.0 },
            seed,
            include_ratio_one_seeds: true,
        }
    }

    pub fn explicit(vectors: Vec<CoeffVector>) -> Self {
        let dim = vectors.iter().filter_map(|v| v.max_index()).max().unwrap_or(0);
        Self { dim, kind: FamilyKind::Explicit(vectors), seed: 0, include_ratio_one_seeds: false }
    }

    pub fn without_seeds(mut self) -> Self {
        self.include_ratio_one_seeds = false;
        self
    }

    fn seed_count(&self) -> usize {
        if self.include_ratio_one_seeds { 2 } else { 0 }
    }

    pub fn len(&self) -> usize {
        self.seed_count()
            + match &self.kind {
                FamilyKind::ExhaustiveGrid { values } => values.len().pow(self.dim as u32),
                FamilyKind::RandomUniform { count, .. } => *count,
                FamilyKind::Explicit(v) => v.len(),
            }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The i-th sample; pure in (spec, i) regardless of evaluation order.
    pub fn vector(&self, i: usize) -> CoeffVector {
        let seeds = self.seed_count();
        if i < seeds {
            return match i {
                0 => CoeffVector::from_dense(&[1.0]),
                _ => CoeffVector::from_dense(&[1.0, 1.0]),
            };
        }
        let i = i - seeds;
        match &self.kind {
            FamilyKind::ExhaustiveGrid { values } => {
                let base = values.len();
                let mut rest = i;
                let mut coeffs = vec![0.0; self.dim];
                for c in coeffs.iter_mut() {
                    *c = values[rest % base];
                    rest /= base;
                }
                CoeffVector::from_dense(&coeffs)
            }
            FamilyKind::RandomUniform { amplitude, .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(i as u64 + 1);
                let coeffs: Vec<f64> =
                    (0..self.dim).map(|_| rng.gen_range(-amplitude..=*amplitude)).collect();
                CoeffVector::from_dense(&coeffs)
            }
            FamilyKind::Explicit(v) => v[i].clone(),
        }
    }
}

/// Enumeration budgets and comparison thresholds; estimates fall back to
/// structured candidates (with a report note) rather than blowing past a
/// budget.
#[derive(Clone, Copy, Debug)]
pub struct EstimatorConfig {
    /// Greedy-set enumeration cap per (x, m).
    pub greedy_cap: usize,
    /// Total-evaluation budget for subset/sign enumerations.
    pub enumeration_budget: u128,
    /// Values below this count as zero in ratio handling.
    pub zero_thresh: f64,
    pub functional: FunctionalConfig,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            greedy_cap: crate::tga::DEFAULT_GREEDY_CAP,
            enumeration_budget: 2_000_000,
            zero_thresh: 1e-13,
            functional: FunctionalConfig::default(),
        }
    }
}

/// One estimated constant with its maximizing witness.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantEstimate {
    pub quantity: String,
    pub value: f64,
    pub dim: usize,
    pub m: Option<usize>,
    pub witness: serde_json::Value,
}

/// A bundle of estimates plus notes about skipped or heuristic work.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConstantsReport {
    pub space: String,
    pub dim: usize,
    pub estimates: Vec<ConstantEstimate>,
    pub notes: Vec<String>,
}

impl ConstantsReport {
    pub fn get(&self, quantity: &str) -> Option<&ConstantEstimate> {
        self.estimates.iter().find(|e| e.quantity == quantity)
    }

    pub fn value(&self, quantity: &str) -> Option<f64> {
        self.get(quantity).map(|e| e.value)
    }
}

struct Maximizer<W> {
    value: f64,
    witness: Option<W>,
}

impl<W> Maximizer<W> {
    fn new() -> Self {
        Self { value: f64::NEG_INFINITY, witness: None }
    }

    /// Strictly-greater replacement keeps the first witness among ties, so
    /// folds in enumeration order are deterministic.
    fn offer(&mut self, value: f64, witness: impl FnOnce() -> W) {
        if value > self.value {
            self.value = value;
            self.witness = Some(witness());
        }
    }

    fn merge(&mut self, other: Self) {
        if other.value > self.value {
            *self = other;
        }
    }

    fn finish(self) -> (f64, Option<W>) {
        if self.witness.is_none() {
            (0.0, None)
        } else {
            (self.value, self.witness)
        }
    }
}

fn fold_samples<W: Send>(
    per_sample: Vec<(Maximizer<W>, Vec<String>)>,
) -> (Maximizer<W>, Vec<String>) {
    let mut acc = Maximizer::new();
    let mut notes = Vec::new();
    for (m, mut n) in per_sample {
        acc.merge(m);
        notes.append(&mut n);
    }
    (acc, notes)
}

/// Quasi-greedy constants: suprema of ||G_m(x)|| / ||x|| and
/// ||x - G_m(x)|| / ||x|| over the family, all m, all greedy sets.
pub fn estimate_quasi_greedy(
    n: &NormOracle,
    fam: &SampleFamily,
    cfg: &EstimatorConfig,
) -> Result<(ConstantEstimate, ConstantEstimate, Vec<String>)> {
    if fam.is_empty() {
        return Err(Error::Domain("empty sample family".into()));
    }
    let per_sample: Vec<_> = (0..fam.len())
        .into_par_iter()
        .map(|i| {
            let x = fam.vector(i);
            let mut qg: Maximizer<serde_json::Value> = Maximizer::new();
            let mut sup: Maximizer<serde_json::Value> = Maximizer::new();
            let mut notes = Vec::new();
            let norm_x = n.eval(&x);
            if norm_x <= cfg.zero_thresh {
                return ((qg, sup), notes);
            }
            for m in 1..=x.support_len() {
                match greedy_sets_capped(&x, m, cfg.greedy_cap) {
                    Ok(sets) => {
                        for a in sets {
                            let g = project(&x, &a);
                            let r = complement_project(&x, &a);
                            let witness = |v: f64| {
                                json!({"x": x.to_dense(), "m": m, "set": a.as_slice(), "ratio": v})
                            };
                            let vq = n.eval(&g) / norm_x;
                            qg.offer(vq, || witness(vq));
                            let vs = n.eval(&r) / norm_x;
                            sup.offer(vs, || witness(vs));
                        }
                    }
                    Err(Error::CapExceeded(msg)) => {
                        notes.push(format!("quasi-greedy witness skipped at sample {i}, m = {m}: {msg}"));
                    }
                    Err(e) => panic!("unexpected greedy enumeration error: {e}"),
                }
            }
            ((qg, sup), notes)
        })
        .collect();

    let mut qg = Maximizer::new();
    let mut sup = Maximizer::new();
    let mut notes = Vec::new();
    for ((q, s), mut n) in per_sample {
        qg.merge(q);
        sup.merge(s);
        notes.append(&mut n);
    }
    let (qv, qw) = qg.finish();
    let (sv, sw) = sup.finish();
    let mk = |quantity: &str, value: f64, witness: Option<serde_json::Value>| ConstantEstimate {
        quantity: quantity.into(),
        value,
        dim: fam.dim,
        m: witness.as_ref().and_then(|w| w.get("m")).and_then(|m| m.as_u64()).map(|m| m as usize),
        witness: witness.unwrap_or(serde_json::Value::Null),
    };
    Ok((mk("C_q", qv, qw), mk("C_l", sv, sw), notes))
}

/// Unconditionality constant: supremum of ||sum a_n e_n|| / ||sum b_n e_n||
/// over sampled b and coordinate-shrunk a (sign flips times the shrink grid
/// {0, 1/4, 1/2, 1}).
pub fn estimate_unconditionality(
    n: &NormOracle,
    fam: &SampleFamily,
    cfg: &EstimatorConfig,
) -> Result<(ConstantEstimate, Vec<String>)> {
    if fam.is_empty() {
        return Err(Error::Domain("empty sample family".into()));
    }
    // 0 plus {1/4, 1/2, 1} x {-1, +1}
    const OPTIONS: [f64; 7] = [0.0, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0];
    let per_sample: Vec<_> = (0..fam.len())
        .into_par_iter()
        .map(|i| {
            let b = fam.vector(i);
            let mut best: Maximizer<serde_json::Value> = Maximizer::new();
            let mut notes = Vec::new();
            let norm_b = n.eval(&b);
            let s = b.support_len();
            if norm_b <= cfg.zero_thresh || s == 0 {
                return (best, notes);
            }
            let entries: Vec<(usize, f64)> = b.iter().collect();
            let total = (OPTIONS.len() as u128).saturating_pow(s as u32);
            let offer = |best: &mut Maximizer<serde_json::Value>, a: &CoeffVector| {
                let ratio = n.eval(a) / norm_b;
                best.offer(ratio, || {
                    json!({"b": b.to_dense(), "a": a.to_dense(), "ratio": ratio})
                });
            };
            if total <= cfg.enumeration_budget {
                let mut digits = vec![0usize; s];
                loop {
                    let a = CoeffVector::from_pairs(
                        entries.iter().zip(&digits).map(|(&(idx, v), &d)| (idx, OPTIONS[d] * v)),
                    )
                    .unwrap();
                    offer(&mut best, &a);
                    let mut pos = 0;
                    while pos < s {
                        digits[pos] += 1;
                        if digits[pos] < OPTIONS.len() {
                            break;
                        }
                        digits[pos] = 0;
                        pos += 1;
                    }
                    if pos == s {
                        break;
                    }
                }
            } else if 2u128.saturating_pow(s as u32) <= cfg.enumeration_budget {
                notes.push(format!(
                    "unconditionality at sample {i}: shrink grid truncated to sign flips (support {s})"
                ));
                for signs in sign_vectors(s) {
                    let a = CoeffVector::from_pairs(
                        entries.iter().zip(&signs).map(|(&(idx, v), &sg)| (idx, sg * v)),
                    )
                    .unwrap();
                    offer(&mut best, &a);
                }
            } else {
                notes.push(format!("unconditionality skipped sample {i}: support {s} too large"));
            }
            (best, notes)
        })
        .collect();

    let (best, notes) = fold_samples(per_sample);
    let (value, witness) = best.finish();
    Ok((
        ConstantEstimate {
            quantity: "K".into(),
            value,
            dim: fam.dim,
            m: None,
            witness: witness.unwrap_or(serde_json::Value::Null),
        },
        notes,
    ))
}

/// Democracy flavors: indicator-norm comparability under cardinality, signs,
/// disjointness (A and B disjoint), or order (A entirely left of B).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemocracyFlavor {
    Plain,
    Super,
    DisjointSuper,
    Conservative,
}

impl DemocracyFlavor {
    fn signed(self) -> bool {
        matches!(self, DemocracyFlavor::Super | DemocracyFlavor::DisjointSuper)
    }

    pub fn quantity(self) -> &'static str {
        match self {
            DemocracyFlavor::Plain => "Delta",
            DemocracyFlavor::Super => "Delta_s",
            DemocracyFlavor::DisjointSuper => "Delta_sd",
            DemocracyFlavor::Conservative => "Delta_c",
        }
    }
}

fn signed_indicator_norm(
    n: &NormOracle,
    set: &IndexSet,
    sign_choice: &[usize],
    field: Field,
) -> f64 {
    match field {
        Field::Real => {
            let signs = SignPattern::from_pairs(
                set.iter().zip(sign_choice).map(|(i, &s)| (i, if s == 0 { 1.0 } else { -1.0 })),
            )
            .unwrap();
            n.eval(&indicator(set, Some(&signs)).unwrap())
        }
        Field::Complex => n.eval_complex(&complex_indicator(set, sign_choice)),
    }
}

fn sign_choices(k: usize, signed: bool, field: Field) -> Vec<Vec<usize>> {
    if !signed {
        return vec![vec![0; k]];
    }
    let base = match field {
        Field::Real => 2usize,
        Field::Complex => crate::spaces::COMPLEX_SIGN_POINTS,
    };
    let mut out = Vec::with_capacity(base.pow(k as u32));
    let mut digits = vec![0usize; k];
    loop {
        out.push(digits.clone());
        let mut pos = 0;
        while pos < k {
            digits[pos] += 1;
            if digits[pos] < base {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
    }
    out
}

/// Extreme signed indicators over all subsets of `domain` with size `card`:
/// (max witness, min witness), scanned in lexicographic order.
#[allow(clippy::type_complexity)]
fn indicator_extremes(
    n: &NormOracle,
    domain: &[usize],
    card: usize,
    signed: bool,
    field: Field,
) -> Option<((f64, IndexSet, Vec<usize>), (f64, IndexSet, Vec<usize>))> {
    let mut max: Option<(f64, IndexSet, Vec<usize>)> = None;
    let mut min: Option<(f64, IndexSet, Vec<usize>)> = None;
    let choices = sign_choices(card, signed, field);
    for combo in Combinations::new(domain.len(), card) {
        let set = IndexSet::from_iter(combo.iter().map(|&j| domain[j]));
        for choice in &choices {
            let v = signed_indicator_norm(n, &set, choice, field);
            if max.as_ref().is_none_or(|(b, _, _)| v > *b) {
                max = Some((v, set.clone(), choice.clone()));
            }
            if min.as_ref().is_none_or(|(b, _, _)| v < *b) {
                min = Some((v, set.clone(), choice.clone()));
            }
        }
    }
    max.zip(min)
}

/// Structured candidate sets over an arbitrary index domain: runs at the
/// ends and middle, plus spine/off-spine compositions when the oracle
/// distinguishes them. These realize the extremes of every built-in model.
fn structured_sets(n: &NormOracle, domain: &[usize], card: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    if card > domain.len() || card == 0 {
        return out;
    }
    let take = |positions: &[usize]| IndexSet::from_iter(positions.iter().copied());
    out.push(take(&domain[..card]));
    out.push(take(&domain[domain.len() - card..]));
    let mid = (domain.len() - card) / 2;
    out.push(take(&domain[mid..mid + card]));
    if let Some(spine) = n.spine_positions(*domain.last().unwrap()) {
        let on: Vec<usize> = domain.iter().copied().filter(|i| spine.contains(i)).collect();
        let off: Vec<usize> = domain.iter().copied().filter(|i| !spine.contains(i)).collect();
        for k in 0..=card {
            if on.len() >= k && off.len() >= card - k {
                out.push(IndexSet::from_iter(
                    on[..k].iter().chain(off[..card - k].iter()).copied(),
                ));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All-plus and alternating assignments only; enough to expose the extremes
/// of the built-in models without a sign blow-up.
fn structured_sign_choices(card: usize, signed: bool, field: Field) -> Vec<Vec<usize>> {
    if !signed {
        return vec![vec![0usize; card]];
    }
    let flip = match field {
        Field::Real => 1,
        Field::Complex => crate::spaces::COMPLEX_SIGN_POINTS / 2,
    };
    let plus = vec![0usize; card];
    let alt: Vec<usize> = (0..card).map(|j| if j % 2 == 0 { 0 } else { flip }).collect();
    vec![plus, alt]
}

fn structured_extremes(
    n: &NormOracle,
    domain: &[usize],
    card: usize,
    signed: bool,
    field: Field,
) -> Option<((f64, IndexSet, Vec<usize>), (f64, IndexSet, Vec<usize>))> {
    let mut max: Option<(f64, IndexSet, Vec<usize>)> = None;
    let mut min: Option<(f64, IndexSet, Vec<usize>)> = None;
    for set in structured_sets(n, domain, card) {
        for choice in structured_sign_choices(card, signed, field) {
            let v = signed_indicator_norm(n, &set, &choice, field);
            if max.as_ref().is_none_or(|(b, _, _)| v > *b) {
                max = Some((v, set.clone(), choice.clone()));
            }
            if min.as_ref().is_none_or(|(b, _, _)| v < *b) {
                min = Some((v, set.clone(), choice.clone()));
            }
        }
    }
    max.zip(min)
}

fn democracy_witness(
    num: &(f64, IndexSet, Vec<usize>),
    den: &(f64, IndexSet, Vec<usize>),
) -> serde_json::Value {
    json!({
        "a": num.1.as_slice(), "signs_a": num.2, "norm_a": num.0,
        "b": den.1.as_slice(), "signs_b": den.2, "norm_b": den.0,
        "ratio": num.0 / den.0,
    })
}

/// Democracy-type constant: supremum of ||1_{eps A}|| / ||1_{delta B}|| over
/// |A| <= |B| <= max_card inside the window, under the flavor's constraint.
pub fn estimate_democracy(
    n: &NormOracle,
    max_card: usize,
    window: usize,
    flavor: DemocracyFlavor,
    field: Field,
    cfg: &EstimatorConfig,
) -> Result<(ConstantEstimate, Vec<String>)> {
    if max_card == 0 {
        return Err(Error::Domain("democracy needs cardinality >= 1".into()));
    }
    if window < max_card {
        return Err(Error::Domain(format!("window {window} smaller than max cardinality {max_card}")));
    }
    if flavor == DemocracyFlavor::DisjointSuper && window < 2 {
        return Err(Error::Domain("window too small for disjoint pairs".into()));
    }
    if flavor == DemocracyFlavor::Conservative && window < 2 {
        return Err(Error::Domain("window too small for ordered pairs".into()));
    }

    let signed = flavor.signed();
    let sign_count = |k: usize| -> u128 {
        if !signed {
            1
        } else {
            match field {
                Field::Real => 2u128.saturating_pow(k as u32),
                Field::Complex => (crate::spaces::COMPLEX_SIGN_POINTS as u128).saturating_pow(k as u32),
            }
        }
    };

    let mut notes = Vec::new();
    let domain: Vec<usize> = (1..=window).collect();
    let mut best: Maximizer<serde_json::Value> = Maximizer::new();

    match flavor {
        DemocracyFlavor::Plain | DemocracyFlavor::Super => {
            // numerator and denominator decouple
            let work: u128 = (1..=max_card)
                .map(|k| binomial(window, k).saturating_mul(sign_count(k)))
                .sum();
            let exhaustive = work <= cfg.enumeration_budget;
            if !exhaustive {
                notes.push(format!(
                    "democracy {:?} window {window}: structured candidates (budget {} < work {work})",
                    flavor, cfg.enumeration_budget
                ));
            }
            let mut extremes = Vec::new();
            for k in 1..=max_card {
                let e = if exhaustive {
                    indicator_extremes(n, &domain, k, signed, field)
                } else {
                    structured_extremes(n, &domain, k, signed, field)
                };
                extremes.push(e);
            }
            for ja in 1..=max_card {
                for jb in ja..=max_card {
                    if let (Some((num, _)), Some((_, den))) = (
                        extremes[ja - 1].as_ref().map(|(x, y)| (x.clone(), y.clone())),
                        extremes[jb - 1].as_ref().map(|(x, y)| (x.clone(), y.clone())),
                    ) {
                        best.offer(num.0 / den.0, || democracy_witness(&num, &den));
                    }
                }
            }
        }
        DemocracyFlavor::DisjointSuper | DemocracyFlavor::Conservative => {
            let work: u128 = (1..=max_card)
                .flat_map(|ja| {
                    (ja..=max_card).map(move |jb| {
                        binomial(window, ja)
                            .saturating_mul(sign_count(ja))
                            .saturating_mul(binomial(window, jb))
                            .saturating_mul(sign_count(jb))
                    })
                })
                .sum();
            if work <= cfg.enumeration_budget {
                for ja in 1..=max_card {
                    let choices_a = sign_choices(ja, signed, field);
                    for combo_a in Combinations::new(window, ja) {
                        let a = IndexSet::from_iter(combo_a.iter().map(|&j| domain[j]));
                        let b_domain: Vec<usize> = match flavor {
                            DemocracyFlavor::DisjointSuper => {
                                (1..=window).filter(|i| !a.contains(*i)).collect()
                            }
                            _ => (a.last().unwrap() + 1..=window).collect(),
                        };
                        for jb in ja..=max_card {
                            if b_domain.len() < jb {
                                continue;
                            }
                            let Some((_, den)) = indicator_extremes(n, &b_domain, jb, signed, field)
                            else {
                                continue;
                            };
                            for choice in &choices_a {
                                let va = signed_indicator_norm(n, &a, choice, field);
                                let num = (va, a.clone(), choice.clone());
                                best.offer(va / den.0, || democracy_witness(&num, &den));
                            }
                        }
                    }
                }
            } else {
                notes.push(format!(
                    "democracy {:?} window {window}: structured candidates (budget {} < work {work})",
                    flavor, cfg.enumeration_budget
                ));
                for ja in 1..=max_card {
                    for a in structured_sets(n, &domain, ja) {
                        let b_domain: Vec<usize> = match flavor {
                            DemocracyFlavor::DisjointSuper => {
                                (1..=window).filter(|i| !a.contains(*i)).collect()
                            }
                            _ => (a.last().unwrap() + 1..=window).collect(),
                        };
                        let choices_a = structured_sign_choices(ja, signed, field);
                        for jb in ja..=max_card {
                            let Some((_, den)) = structured_extremes(n, &b_domain, jb, signed, field)
                            else {
                                continue;
                            };
                            for choice in &choices_a {
                                let va = signed_indicator_norm(n, &a, choice, field);
                                let num = (va, a.clone(), choice.clone());
                                best.offer(va / den.0, || democracy_witness(&num, &den));
                            }
                        }
                    }
                }
            }
        }
    }

    let (value, witness) = best.finish();
    if witness.is_none() {
        return Err(Error::Domain(format!(
            "window {window} admits no ({flavor:?}) pair up to cardinality {max_card}"
        )));
    }
    Ok((
        ConstantEstimate {
            quantity: flavor.quantity().into(),
            value,
            dim: window,
            m: None,
            witness: witness.unwrap(),
        },
        notes,
    ))
}

/// Outcome of the partial-democracy failure search.
#[derive(Clone, Debug, Serialize)]
pub enum PartialDemocracyOutcome {
    /// For every exclusion prefix, the best admissible B still loses to A by
    /// at least `min_ratio`.
    Failure(PartialDemocracyWitness),
    /// No exclusion-stable ratio above 1 was found.
    NoFailure { max_ratio: f64 },
    /// The window cannot support the search.
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct PartialDemocracyWitness {
    pub set_a: IndexSet,
    pub norm_a: f64,
    pub cardinality: usize,
    pub search_bound: usize,
    /// (prefix length d, best B in {d+1..bound}, ||1_B||, ratio).
    pub rows: Vec<(usize, IndexSet, f64, f64)>,
    pub min_ratio: f64,
}

/// Searches for a witness that partial democracy fails at the given
/// cardinality: an A whose indicator norm dominates the best admissible B by
/// a fixed ratio no matter which exclusion set D is removed.
///
/// Exclusion sets are scanned as prefixes {1..d}; an arbitrary D inside
/// {1..d} only enlarges the admissible B pool, so prefixes are the worst
/// case.
pub fn partial_democracy_witness(
    n: &NormOracle,
    cardinality: usize,
    search_bound: usize,
    cfg: &EstimatorConfig,
) -> Result<PartialDemocracyOutcome> {
    if cardinality == 0 {
        return Err(Error::Domain("cardinality must be >= 1".into()));
    }
    if search_bound < cardinality {
        return Ok(PartialDemocracyOutcome::Inconclusive {
            reason: format!("search bound {search_bound} below cardinality {cardinality}"),
        });
    }
    let domain: Vec<usize> = (1..=search_bound).collect();
    let a_work = binomial(search_bound, cardinality);
    let a_best = if a_work <= cfg.enumeration_budget {
        indicator_extremes(n, &domain, cardinality, false, Field::Real)
    } else {
        structured_extremes(n, &domain, cardinality, false, Field::Real)
    };
    let Some((num, _)) = a_best else {
        return Ok(PartialDemocracyOutcome::Inconclusive { reason: "no candidate A".into() });
    };

    let rows: Vec<(usize, IndexSet, f64, f64)> = (0..=search_bound - cardinality)
        .into_par_iter()
        .map(|d| {
            let tail: Vec<usize> = (d + 1..=search_bound).collect();
            let e = if binomial(tail.len(), cardinality) <= cfg.enumeration_budget {
                indicator_extremes(n, &tail, cardinality, false, Field::Real)
            } else {
                structured_extremes(n, &tail, cardinality, false, Field::Real)
            };
            let (_, den) = e.expect("tail holds at least `cardinality` positions");
            (d, den.1, den.0, num.0 / den.0)
        })
        .collect();

    let min_ratio = rows.iter().map(|r| r.3).fold(f64::INFINITY, f64::min);
    let max_ratio = rows.iter().map(|r| r.3).fold(0.0f64, f64::max);
    if min_ratio > 1.0 + 1e-9 {
        Ok(PartialDemocracyOutcome::Failure(PartialDemocracyWitness {
            set_a: num.1,
            norm_a: num.0,
            cardinality,
            search_bound,
            rows,
            min_ratio,
        }))
    } else {
        Ok(PartialDemocracyOutcome::NoFailure { max_ratio })
    }
}

/// Which denominator the TGA residual is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchmarkKind {
    /// Best m-term projection error (almost greedy).
    SigmaTilde,
    /// Best interval projection error (consecutive almost greedy).
    SigmaCheck,
    /// ||x - S_m(x)|| (partially greedy).
    PrefixResidual,
    /// min over prefixes (strong partially greedy).
    BestPrefixTail,
    /// Best prefix-supported approximation (super-strong partially greedy).
    SigmaHatHat,
}

impl BenchmarkKind {
    pub fn quantity(self) -> &'static str {
        match self {
            BenchmarkKind::SigmaTilde => "C_ratio_tilde",
            BenchmarkKind::SigmaCheck => "C_ratio_check",
            BenchmarkKind::PrefixResidual => "C_ratio_prefix",
            BenchmarkKind::BestPrefixTail => "C_ratio_prefix_tail",
            BenchmarkKind::SigmaHatHat => "C_ratio_hathat",
        }
    }
}

/// Ratio constant: supremum over the family, all m, and all greedy sets of
/// ||x - G_m(x)|| divided by the chosen benchmark. 0/0 data are skipped;
/// finite/0 reports +inf with its witness; heuristic-flagged benchmark values
/// are excluded with a note.
pub fn estimate_ratio_constant(
    n: &NormOracle,
    fam: &SampleFamily,
    benchmark: BenchmarkKind,
    cfg: &EstimatorConfig,
) -> Result<(ConstantEstimate, Vec<String>)> {
    if fam.is_empty() {
        return Err(Error::Domain("empty sample family".into()));
    }
    let per_sample: Vec<_> = (0..fam.len())
        .into_par_iter()
        .map(|i| {
            let x = fam.vector(i);
            let mut best: Maximizer<serde_json::Value> = Maximizer::new();
            let mut notes = Vec::new();
            if x.is_zero() {
                return (best, notes);
            }
            for m in 1..=x.support_len() {
                let (bench, exact) = match benchmark {
                    BenchmarkKind::SigmaTilde => {
                        let f = sigma_tilde_with(&x, m, n, &cfg.functional);
                        (f.value, f.is_exact())
                    }
                    BenchmarkKind::SigmaCheck => {
                        let f = sigma_check(&x, m, n);
                        (f.value, f.is_exact())
                    }
                    BenchmarkKind::PrefixResidual => (n.eval(&x.filter_indices(|i| i > m)), true),
                    BenchmarkKind::BestPrefixTail => {
                        let f = best_prefix_tail(&x, m, n);
                        (f.value, f.is_exact())
                    }
                    BenchmarkKind::SigmaHatHat => {
                        let f = sigma_hathat_with(&x, m, n, &cfg.functional, false);
                        (f.value, f.is_exact())
                    }
                };
                if !exact {
                    notes.push(format!(
                        "ratio vs {:?} skipped heuristic benchmark at sample {i}, m = {m}",
                        benchmark
                    ));
                    continue;
                }
                let sets = match greedy_sets_capped(&x, m, cfg.greedy_cap) {
                    Ok(sets) => sets,
                    Err(Error::CapExceeded(msg)) => {
                        notes.push(format!("ratio witness skipped at sample {i}, m = {m}: {msg}"));
                        continue;
                    }
                    Err(e) => panic!("unexpected greedy enumeration error: {e}"),
                };
                for a in sets {
                    let num = n.eval(&complement_project(&x, &a));
                    let ratio = if num <= cfg.zero_thresh && bench <= cfg.zero_thresh {
                        continue;
                    } else if bench <= cfg.zero_thresh {
                        f64::INFINITY
                    } else {
                        num / bench
                    };
                    best.offer(ratio, || {
                        json!({
                            "x": x.to_dense(), "m": m, "set": a.as_slice(),
                            "residual": num, "benchmark": bench, "ratio": ratio,
                        })
                    });
                }
            }
            (best, notes)
        })
        .collect();

    let (best, notes) = fold_samples(per_sample);
    let (value, witness) = best.finish();
    Ok((
        ConstantEstimate {
            quantity: benchmark.quantity().into(),
            value,
            dim: fam.dim,
            m: witness.as_ref().and_then(|w| w.get("m")).and_then(|m| m.as_u64()).map(|m| m as usize),
            witness: witness.unwrap_or(serde_json::Value::Null),
        },
        notes,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l1() -> NormOracle {
        NormOracle::lp(1.0).unwrap()
    }

    fn small_grid(dim: usize) -> SampleFamily {
        SampleFamily::exhaustive_grid(dim, vec![-1.0, 0.0, 1.0, 2.0])
    }

    #[test]
    fn family_is_counter_deterministic() {
        let fam = SampleFamily::random_uniform(5, 20, 7);
        let a: Vec<_> = (0..fam.len()).map(|i| fam.vector(i)).collect();
        let b: Vec<_> = (0..fam.len()).rev().map(|i| fam.vector(i)).collect();
        for (i, x) in a.iter().enumerate() {
            assert_eq!(*x, b[fam.len() - 1 - i]);
        }
        // first samples are the ratio-one seeds
        assert_eq!(fam.vector(0), CoeffVector::from_dense(&[1.0]));
        assert_eq!(fam.vector(1), CoeffVector::from_dense(&[1.0, 1.0]));
    }

    #[test]
    fn grid_family_enumerates_each_combination_once() {
        let fam = SampleFamily::exhaustive_grid(2, vec![0.0, 1.0]).without_seeds();
        let all: Vec<_> = (0..fam.len()).map(|i| fam.vector(i)).collect();
        assert_eq!(all.len(), 4);
        assert!(all.contains(&CoeffVector::zero()));
        assert!(all.contains(&CoeffVector::from_dense(&[1.0, 1.0])));
    }

    #[test]
    fn quasi_greedy_constants_are_one_on_lp() {
        let cfg = EstimatorConfig::default();
        for p in [1.0, 2.0] {
            let n = NormOracle::lp(p).unwrap();
            let (cq, cl, notes) = estimate_quasi_greedy(&n, &small_grid(4), &cfg).unwrap();
            assert!(notes.is_empty());
            assert!((cq.value - 1.0).abs() < 1e-9, "C_q = {} for lp:{p}", cq.value);
            assert!((cl.value - 1.0).abs() < 1e-9, "C_l = {} for lp:{p}", cl.value);
        }
    }

    #[test]
    fn unconditionality_is_one_on_lp_and_mixed() {
        let cfg = EstimatorConfig::default();
        let fam = small_grid(4);
        let (k, _) = estimate_unconditionality(&l1(), &fam, &cfg).unwrap();
        assert!((k.value - 1.0).abs() < 1e-9);
        let mixed = NormOracle::mixed(1.0, 2.0).unwrap();
        let (k, _) = estimate_unconditionality(&mixed, &SampleFamily::random_uniform(8, 40, 3), &cfg).unwrap();
        assert!((k.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unconditionality_exceeds_one_on_sign_sensitive_norms() {
        let cfg = EstimatorConfig::default();
        // alternating vector: flipping the minus signs grows the summing norm
        let fam = SampleFamily::explicit(vec![CoeffVector::from_dense(&[1.0, -1.0, 1.0, -1.0])]);
        let n = NormOracle::summing();
        let (k, _) = estimate_unconditionality(&n, &fam, &cfg).unwrap();
        assert!(k.value >= 4.0 - 1e-9, "K = {}", k.value);
        // interval-summing with base 4 on an alternating vector, dim 16
        let alt16: Vec<f64> = (0..16).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let fam = SampleFamily::explicit(vec![CoeffVector::from_dense(&alt16)]);
        let n = NormOracle::interval_summing(4.0).unwrap();
        let (k, notes) = estimate_unconditionality(&n, &fam, &cfg).unwrap();
        assert!(notes.iter().any(|s| s.contains("sign flips")));
        assert!(k.value > 1.0 + 1e-9, "K = {}", k.value);
    }

    #[test]
    fn democracy_is_one_on_lp() {
        let cfg = EstimatorConfig::default();
        for flavor in [
            DemocracyFlavor::Plain,
            DemocracyFlavor::Super,
            DemocracyFlavor::DisjointSuper,
            DemocracyFlavor::Conservative,
        ] {
            let (d, notes) = estimate_democracy(&l1(), 3, 8, flavor, Field::Real, &cfg).unwrap();
            assert!(notes.is_empty(), "{flavor:?}: {notes:?}");
            assert!((d.value - 1.0).abs() < 1e-9, "{flavor:?} = {}", d.value);
        }
    }

    #[test]
    fn democracy_singleton_window_errors_for_disjoint() {
        let cfg = EstimatorConfig::default();
        assert!(matches!(
            estimate_democracy(&l1(), 1, 1, DemocracyFlavor::DisjointSuper, Field::Real, &cfg),
            Err(Error::Domain(_))
        ));
        assert!(estimate_democracy(&l1(), 0, 4, DemocracyFlavor::Plain, Field::Real, &cfg).is_err());
    }

    #[test]
    fn democracy_mixed_spine_vs_offspine() {
        let cfg = EstimatorConfig::default();
        let mixed = NormOracle::mixed(1.0, 2.0).unwrap();
        // 4 spine ones (l1 factor, norm 4) against 4 off-spine ones (l2
        // factor, norm 2)
        let (d, notes) = estimate_democracy(&mixed, 4, 64, DemocracyFlavor::Plain, Field::Real, &cfg).unwrap();
        assert!(notes.is_empty(), "{notes:?}");
        assert!((d.value - 2.0).abs() < 1e-9, "Delta = {}", d.value);

        // a larger cardinality overruns the budget and lands on the
        // structured tier, which still finds the spine/off-spine extremes
        let (d6, notes6) = estimate_democracy(&mixed, 6, 64, DemocracyFlavor::Plain, Field::Real, &cfg).unwrap();
        assert!(!notes6.is_empty());
        assert!(d6.value >= 2.0 - 1e-9, "Delta = {}", d6.value);
    }

    #[test]
    fn democracy_complex_signs_run() {
        let cfg = EstimatorConfig::default();
        let (d, _) = estimate_democracy(&l1(), 2, 4, DemocracyFlavor::Super, Field::Complex, &cfg).unwrap();
        // l1 indicator norms ignore unimodular signs
        assert!((d.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn partial_democracy_mixed_fails_with_ratio_two() {
        let cfg = EstimatorConfig::default();
        let mixed = NormOracle::mixed(1.0, 2.0).unwrap();
        match partial_democracy_witness(&mixed, 4, 64, &cfg).unwrap() {
            PartialDemocracyOutcome::Failure(w) => {
                assert_eq!(w.set_a, IndexSet::from_iter([5, 11, 23, 47]));
                assert!((w.min_ratio - 2.0).abs() < 1e-9, "min ratio {}", w.min_ratio);
                assert_eq!(w.rows.len(), 61);
            }
            other => panic!("expected failure witness, got {other:?}"),
        }
    }

    #[test]
    fn partial_democracy_l1_finds_nothing() {
        let cfg = EstimatorConfig::default();
        match partial_democracy_witness(&l1(), 3, 16, &cfg).unwrap() {
            PartialDemocracyOutcome::NoFailure { max_ratio } => {
                assert!((max_ratio - 1.0).abs() < 1e-9)
            }
            other => panic!("expected no failure, got {other:?}"),
        }
        assert!(partial_democracy_witness(&l1(), 0, 8, &cfg).is_err());
        assert!(matches!(
            partial_democracy_witness(&l1(), 9, 8, &cfg).unwrap(),
            PartialDemocracyOutcome::Inconclusive { .. }
        ));
    }

    #[test]
    fn ratio_constants_are_one_on_l1_small_grid() {
        let cfg = EstimatorConfig::default();
        let fam = small_grid(4);
        for benchmark in [
            BenchmarkKind::SigmaTilde,
            BenchmarkKind::SigmaCheck,
            BenchmarkKind::PrefixResidual,
            BenchmarkKind::BestPrefixTail,
            BenchmarkKind::SigmaHatHat,
        ] {
            let (c, notes) = estimate_ratio_constant(&l1(), &fam, benchmark, &cfg).unwrap();
            assert!(notes.is_empty());
            assert!((c.value - 1.0).abs() < 1e-9, "{benchmark:?} = {}", c.value);
        }
    }

    #[test]
    fn ratio_ordering_per_sample() {
        // for a fixed (x, m, set): ratio vs sigma-tilde >= vs sigma-check >=
        // vs the prefix residual, inherited from the chain of benchmarks
        let cfg = EstimatorConfig::default();
        let n = NormOracle::mixed(1.0, 2.0).unwrap();
        let fam = SampleFamily::random_uniform(8, 60, 11);
        for i in 0..fam.len() {
            let x = fam.vector(i);
            for m in 1..=x.support_len() {
                let tilde = sigma_tilde_with(&x, m, &n, &cfg.functional).value;
                let check = sigma_check(&x, m, &n).value;
                let prefix = n.eval(&x.filter_indices(|j| j > m));
                assert!(tilde <= check + 1e-12);
                assert!(check <= prefix + 1e-12);
            }
        }
    }

    #[test]
    fn mixed_prefix_tail_ratio_grows_with_window() {
        // adversarial vectors: full prefix up to s_n plus n off-spine ones
        // past it; a greedy set avoiding the spine leaves the heavy lp factor
        let cfg = EstimatorConfig { greedy_cap: 1_000_000, ..Default::default() };
        let mixed = NormOracle::mixed(1.0, 2.0).unwrap();
        let adversarial = |window: usize| {
            let spine = crate::spaces::spine_below(1.0, 2.0, window);
            let len = spine.last().unwrap() + spine.len();
            CoeffVector::from_dense(&vec![1.0; len])
        };
        let mut ratios = Vec::new();
        for window in [16usize, 32, 64] {
            // cumulative family, so the supremum is nondecreasing in the window
            let vectors: Vec<CoeffVector> = [16usize, 32, 64]
                .iter()
                .filter(|&&w| w <= window)
                .map(|&w| adversarial(w))
                .collect();
            let fam = SampleFamily::explicit(vectors);
            let (c, _notes) =
                estimate_ratio_constant(&mixed, &fam, BenchmarkKind::BestPrefixTail, &cfg).unwrap();
            ratios.push(c.value);
        }
        assert!(ratios.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{ratios:?}");
        assert!(ratios[2] >= 2.0 - 1e-9, "window 64 ratio {}", ratios[2]);
    }
}
