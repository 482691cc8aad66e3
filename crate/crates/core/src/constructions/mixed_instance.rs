//! The interleaved two-factor model: an lp factor carried on a sparse spine
//! of positions and an lq factor on everything else. The basis is
//! 1-unconditional and satisfies the interval-projection inequality with a
//! uniform constant, yet fails partial democracy.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::constants::{
    estimate_unconditionality, partial_democracy_witness, ConstantEstimate, EstimatorConfig,
    PartialDemocracyOutcome, SampleFamily,
};
use crate::error::{Error, Result};
use crate::spaces::{spine_sequence, NormOracle};
use crate::tga::{canonical_greedy_set, complement_project, IndexInterval, IndexSet};
use crate::vector::CoeffVector;

#[derive(Clone, Debug)]
pub struct MixedInstance {
    pub oracle: NormOracle,
    pub p: f64,
    pub q: f64,
    pub window: usize,
    pub spine: Vec<usize>,
}

/// Builds the instance over a window that must reach at least the second
/// spine position.
pub fn build_mixed_instance(p: f64, q: f64, window: usize) -> Result<MixedInstance> {
    let first_two = spine_sequence(p, q, 2)?;
    if window < first_two[1] {
        return Err(Error::Domain(format!(
            "window {window} below the second spine position {}",
            first_two[1]
        )));
    }
    let oracle = NormOracle::mixed(p, q)?;
    let spine = oracle.spine_positions(window).expect("mixed oracle has a spine");
    Ok(MixedInstance { oracle, p, q, window, spine })
}

/// Parameters of the seeded interval-projection check.
#[derive(Clone, Debug)]
pub struct IntervalsCheckParams {
    pub triples: usize,
    pub dim: usize,
    pub m_max: usize,
    pub seed: u64,
    pub grid: Vec<f64>,
}

impl Default for IntervalsCheckParams {
    fn default() -> Self {
        Self {
            triples: 10_000,
            dim: 24,
            m_max: 6,
            seed: 1,
            grid: vec![-2.0, -1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0, 2.0],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalsCheckReport {
    pub constant: f64,
    pub triples: usize,
    pub violations: usize,
    pub worst_ratio: f64,
    pub worst_witness: serde_json::Value,
}

impl IntervalsCheckReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }
}

/// Samples triples (x, greedy set A, y supported on an interval of length m
/// disjoint from A) and checks ||x - P_A(x)|| <= C ||x - y||.
pub fn verify_intervals_plus_1dim(
    n: &NormOracle,
    params: &IntervalsCheckParams,
    constant: f64,
) -> IntervalsCheckReport {
    let results: Vec<(f64, Option<serde_json::Value>)> = (0..params.triples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(i as u64 + 1);
            let coeffs: Vec<f64> = (0..params.dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let x = CoeffVector::from_dense(&coeffs);
            if x.is_zero() {
                return (0.0, None);
            }
            let m = rng.gen_range(1..=params.m_max.min(x.support_len()));
            let a = canonical_greedy_set(&x, m);
            let hi = x.max_index().unwrap();
            let starts: Vec<usize> = (1..=hi + 1)
                .filter(|&s| {
                    let interval = IndexSet::from_iter(s..s + m);
                    interval.is_disjoint(&a)
                })
                .collect();
            let start = starts[rng.gen_range(0..starts.len())];
            let interval = IndexInterval::new(start, m).unwrap();
            let y = CoeffVector::from_pairs(
                interval.to_set().iter().map(|j| (j, params.grid[rng.gen_range(0..params.grid.len())])),
            )
            .unwrap();
            let residual = n.eval(&complement_project(&x, &a));
            let distance = n.eval(&x.sub(&y));
            if distance <= 1e-13 {
                return (if residual <= 1e-13 { 0.0 } else { f64::INFINITY }, None);
            }
            let ratio = residual / distance;
            let witness = json!({
                "x": x.to_dense(), "m": m, "set": a.as_slice(),
                "interval": {"start": interval.start, "len": interval.len},
                "y": y.to_dense(), "ratio": ratio,
            });
            (ratio, Some(witness))
        })
        .collect();

    let mut worst = (0.0f64, serde_json::Value::Null);
    let mut violations = 0usize;
    for (ratio, witness) in results {
        if ratio > constant + 1e-9 {
            violations += 1;
        }
        if ratio > worst.0 {
            worst = (ratio, witness.unwrap_or(serde_json::Value::Null));
        }
    }
    IntervalsCheckReport {
        constant,
        triples: params.triples,
        violations,
        worst_ratio: worst.0,
        worst_witness: worst.1,
    }
}

/// Full verification bundle for one mixed instance.
#[derive(Clone, Debug, Serialize)]
pub struct MixedReport {
    pub spine: Vec<usize>,
    pub spine_ok: bool,
    pub unconditionality: ConstantEstimate,
    pub partial_democracy: PartialDemocracyOutcome,
    pub intervals: IntervalsCheckReport,
    pub notes: Vec<String>,
}

impl MixedReport {
    pub fn pass(&self) -> bool {
        self.spine_ok
            && (self.unconditionality.value - 1.0).abs() <= 1e-9
            && matches!(&self.partial_democracy, PartialDemocracyOutcome::Failure(w) if w.min_ratio >= 2.0 - 1e-9)
            && self.intervals.pass()
    }
}

impl MixedInstance {
    /// Re-derives the spine constraints independently of the generator.
    pub fn spine_constraints_hold(&self) -> bool {
        let ratio = self.q / self.p;
        self.spine.iter().enumerate().all(|(idx, &s)| {
            let m = idx + 1;
            let growth = (s as f64) > ((m + 1) as f64).powf(ratio);
            let doubling = idx == 0 || s >= 1 + 2 * self.spine[idx - 1];
            growth && doubling
        })
    }

    /// Runs the instance checks: spine constraints, unconditionality
    /// (expected 1), partial-democracy failure at cardinality 4, and the
    /// interval-projection inequality with `constant`.
    pub fn report(
        &self,
        constant: f64,
        intervals: &IntervalsCheckParams,
        cfg: &EstimatorConfig,
    ) -> Result<MixedReport> {
        let mut notes = Vec::new();

        // sign flips and shrinks across a window that straddles the spine
        let fam = SampleFamily::random_uniform(12, 60, intervals.seed);
        let (unconditionality, mut k_notes) = estimate_unconditionality(&self.oracle, &fam, cfg)?;
        notes.append(&mut k_notes);

        let partial = partial_democracy_witness(&self.oracle, 4, self.window, cfg)?;
        let intervals_report = verify_intervals_plus_1dim(&self.oracle, intervals, constant);

        Ok(MixedReport {
            spine: self.spine.clone(),
            spine_ok: self.spine_constraints_hold(),
            unconditionality,
            partial_democracy: partial,
            intervals: intervals_report,
            notes,
        })
    }
}
