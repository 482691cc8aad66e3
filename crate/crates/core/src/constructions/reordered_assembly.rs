//! Assembly of shrinking greedy-gap blocks into a single vector whose TGA
//! residual beats any multiple of the best prefix-supported approximation
//! error measured in a blockwise-reordered basis.
//!
//! Each level k contributes a block witness: a vector y with consecutive
//! support, a greedy set A, and a sparse competitor z with
//! ||y - P_A(y)|| > 2^k ||y - z||. Blocks are rescaled so coefficient
//! moduli decrease across levels and translated onto consecutive support
//! ranges; the blockwise reordering maps each block's leading positions onto
//! supp(z), which turns the prefix window of the reordered basis into the
//! set the residual is measured against.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{sigma_hathat_over, FunctionalConfig};
use crate::spaces::NormOracle;
use crate::tga::{complement_project, is_greedy_set, IndexSet, Permutation};
use crate::vector::CoeffVector;

/// One greedy-gap block witness, normalized to support {1, ..., l}.
#[derive(Clone, Debug, Serialize)]
pub struct BlockWitness {
    pub y: CoeffVector,
    pub m: usize,
    pub greedy: IndexSet,
    pub z: CoeffVector,
    pub gap_exponent: u32,
}

/// Intake validation: consecutive support from 1, m < l, a legal greedy set,
/// |supp(z)| = m, and the strict gap inequality under the oracle.
pub fn validate_witness(n: &NormOracle, w: &BlockWitness) -> Result<()> {
    let l = w.y.max_index().unwrap_or(0);
    if w.y.support_len() != l || l == 0 {
        return Err(Error::Contract("witness support must be the full interval {1..l}".into()));
    }
    if w.m == 0 || w.m >= l {
        return Err(Error::Contract(format!("witness needs 0 < m < l, got m = {}, l = {l}", w.m)));
    }
    if w.greedy.len() != w.m || !is_greedy_set(&w.y, &w.greedy) {
        return Err(Error::Contract("witness set is not an m-greedy set".into()));
    }
    if w.z.support_len() != w.m {
        return Err(Error::Contract(format!(
            "witness competitor must have support size m = {}, got {}",
            w.m,
            w.z.support_len()
        )));
    }
    let lhs = n.eval(&complement_project(&w.y, &w.greedy));
    let rhs = 2f64.powi(w.gap_exponent as i32) * n.eval(&w.y.sub(&w.z));
    if !(lhs > rhs) {
        return Err(Error::Contract(format!(
            "witness gap fails: {lhs} <= 2^{} * {}",
            w.gap_exponent,
            rhs / 2f64.powi(w.gap_exponent as i32)
        )));
    }
    Ok(())
}

/// Searches structured candidates for a block witness with gap 2^k.
///
/// The primary family is the alternating vector of length 2n with the n
/// plus-positions as the greedy set (all coefficients tie at modulus 1) and
/// the competitor z = (1/(2n)) 1_A, which keeps ||y - z|| = 1 for
/// sign-sensitive summing-type norms while |supp(z)| = m. A secondary family
/// damps the minus entries. `budget` bounds the block half-length.
pub fn search_t3_witness(n: &NormOracle, k: u32, budget: usize) -> Result<Option<BlockWitness>> {
    if k == 0 {
        return Err(Error::Domain("gap exponent must be at least 1".into()));
    }
    for half in 1..=budget {
        for damping in [1.0, 0.75, 0.5] {
            let coeffs: Vec<f64> = (0..2 * half)
                .map(|j| if j % 2 == 0 { 1.0 } else { -damping })
                .collect();
            let y = CoeffVector::from_dense(&coeffs);
            let greedy = IndexSet::from_iter((0..half).map(|j| 2 * j + 1));
            let delta = 1.0 / (2 * half) as f64;
            let z = CoeffVector::from_pairs(greedy.iter().map(|i| (i, delta))).unwrap();
            let w = BlockWitness { y, m: half, greedy, z, gap_exponent: k };
            if validate_witness(n, &w).is_ok() {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Yields a witness with gap 2^k for each requested level.
pub trait WitnessSource {
    fn witness(&self, gap_exponent: u32) -> Option<BlockWitness>;
}

/// Searches the oracle's structured candidates per level.
pub struct SearchWitnessSource {
    pub oracle: NormOracle,
    pub budget: usize,
}

impl WitnessSource for SearchWitnessSource {
    fn witness(&self, gap_exponent: u32) -> Option<BlockWitness> {
        search_t3_witness(&self.oracle, gap_exponent, self.budget).ok().flatten()
    }
}

/// Hands out pre-built witnesses by gap exponent.
pub struct ExplicitWitnessSource {
    pub witnesses: Vec<BlockWitness>,
}

impl WitnessSource for ExplicitWitnessSource {
    fn witness(&self, gap_exponent: u32) -> Option<BlockWitness> {
        self.witnesses.iter().find(|w| w.gap_exponent == gap_exponent).cloned()
    }
}

/// One rescaled, translated block of the assembly.
#[derive(Clone, Debug, Serialize)]
pub struct AssemblyLevel {
    pub k: usize,
    pub scale: f64,
    pub block_len: usize,
    pub m: usize,
    pub y: CoeffVector,
    pub z: CoeffVector,
    pub greedy: IndexSet,
}

/// One verified inequality; `lhs` and `rhs` are the evaluated sides.
#[derive(Clone, Debug, Serialize)]
pub struct LevelCheck {
    pub level: usize,
    pub condition: String,
    pub lhs: f64,
    pub rhs: f64,
    pub strict: bool,
    pub pass: bool,
}

impl LevelCheck {
    fn new(level: usize, condition: &str, lhs: f64, rhs: f64, strict: bool) -> Self {
        let pass = if strict { lhs > rhs } else { lhs >= rhs };
        Self { level, condition: condition.into(), lhs, rhs, strict, pass }
    }
}

/// Ratio table entry for level i (measured against block i + 1).
#[derive(Clone, Debug, Serialize)]
pub struct LevelRatio {
    pub i: usize,
    /// ||x - P_{B_{i+1}}(x)||.
    pub residual: f64,
    /// ||y_{i+1} - z_{i+1}||.
    pub gap_norm: f64,
    /// ||x - S_{s_i}(x) - z_{i+1}||, a feasible prefix-supported approximant.
    pub prefix_approx: f64,
    /// Upper estimate of the reordered prefix-span distance at index
    /// s_i + m_{i+1} (the reading the final inequality is asserted against).
    pub hathat_next: f64,
    /// Same estimate at index s_i + m_i, reported for comparison.
    pub hathat_same: f64,
    /// residual / hathat_next.
    pub final_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum AssemblyStatus {
    Valid,
    /// The source failed to produce (or produced an invalid) witness.
    WitnessChainBroken { level: usize, reason: String },
    /// A verification inequality failed; the condition is named.
    InequalityViolated { level: usize, condition: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct T3Assembly {
    pub depth: usize,
    pub x: CoeffVector,
    pub levels: Vec<AssemblyLevel>,
    #[serde(skip)]
    pub permutation: Option<Permutation>,
    pub checks: Vec<LevelCheck>,
    pub ratios: Vec<LevelRatio>,
    pub status: AssemblyStatus,
}

impl T3Assembly {
    pub fn pass(&self) -> bool {
        self.status == AssemblyStatus::Valid
    }

    /// Structured text document: blocks, permutation, ratio table, checks.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "reordered-assembly depth={} status={:?}", self.depth, self.status);
        for level in &self.levels {
            let _ = writeln!(
                out,
                "block k={} m={} l={} scale={}",
                level.k, level.m, level.block_len, level.scale
            );
            let _ = writeln!(out, "  y: {}", level.y.to_line());
            let _ = writeln!(out, "  z: {}", level.z.to_line());
            let _ = writeln!(
                out,
                "  A: {}",
                level.greedy.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
            );
        }
        if let Some(p) = &self.permutation {
            let _ = writeln!(
                out,
                "permutation: {}",
                p.image().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
            );
        }
        let _ = writeln!(out, "ratio table:");
        for r in &self.ratios {
            let _ = writeln!(
                out,
                "  i={} residual={} gap={} prefix_approx={} hathat_next={} hathat_same={} final_ratio={}",
                r.i, r.residual, r.gap_norm, r.prefix_approx, r.hathat_next, r.hathat_same, r.final_ratio
            );
        }
        let _ = writeln!(out, "checks:");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  level={} {} lhs={} rhs={} {} -> {}",
                c.level,
                c.condition,
                c.lhs,
                c.rhs,
                if c.strict { ">" } else { ">=" },
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        out
    }
}

fn broken(depth: usize, levels: Vec<AssemblyLevel>, level: usize, reason: String) -> T3Assembly {
    let x = levels.iter().fold(CoeffVector::zero(), |acc, l| acc.add(&l.y));
    T3Assembly {
        depth,
        x,
        levels,
        permutation: None,
        checks: Vec::new(),
        ratios: Vec::new(),
        status: AssemblyStatus::WitnessChainBroken { level, reason },
    }
}

/// Builds and verifies the assembly at the given depth: blocks carry gap
/// exponents 1 through depth + 1, every defining inequality is re-evaluated
/// on the constructed data, and the final ratio check runs for levels
/// 2 through depth.
pub fn assemble_t3(
    source: &dyn WitnessSource,
    depth: usize,
    n: &NormOracle,
    cfg: &FunctionalConfig,
) -> Result<T3Assembly> {
    if depth == 0 {
        return Err(Error::Domain("assembly depth must be at least 1".into()));
    }
    if depth > 30 {
        return Err(Error::Domain("depth capped at 30 by floating-point scale".into()));
    }

    // rescale and translate each witness onto consecutive support blocks
    let mut levels: Vec<AssemblyLevel> = Vec::new();
    let mut offset = 0usize;
    let mut min_gap_norm = f64::INFINITY;
    let mut prev_min_coeff = f64::INFINITY;
    for k in 1..=depth + 1 {
        let Some(w) = source.witness(k as u32) else {
            return Ok(broken(depth, levels, k, "no witness produced".into()));
        };
        if let Err(e) = validate_witness(n, &w) {
            return Ok(broken(depth, levels, k, e.to_string()));
        }
        let block_len = w.y.max_index().unwrap();
        let translated_y = w.y.translate(offset);
        let translated_z = w.z.translate(offset);
        let base_norm = n.eval(&translated_y);
        // norm target with margins that keep every inequality strict under
        // rounding
        let mut target = 2f64.powi(-(k as i32)) * (1.0 - 1e-6);
        target = target.min(0.5 * 2f64.powi(-(k as i32)) * min_gap_norm);
        let mut scale = target / base_norm;
        // coefficient moduli must drop strictly across blocks
        let max_coeff = translated_y.sup_norm();
        if scale * max_coeff >= prev_min_coeff {
            scale = 0.5 * prev_min_coeff / max_coeff;
        }
        let y = translated_y.scale(scale);
        let z = translated_z.scale(scale);
        let greedy = IndexSet::from_iter(w.greedy.iter().map(|i| i + offset));
        min_gap_norm = min_gap_norm.min(n.eval(&y.sub(&z)));
        prev_min_coeff = y.min_abs_coeff().expect("block is nonzero");
        levels.push(AssemblyLevel { k, scale, block_len, m: w.m, y, z, greedy });
        offset += block_len;
    }

    let x = levels.iter().fold(CoeffVector::zero(), |acc, l| acc.add(&l.y));
    let block_ends: Vec<usize> = levels
        .iter()
        .scan(0usize, |acc, l| {
            *acc += l.block_len;
            Some(*acc)
        })
        .collect();
    let window = *block_ends.last().unwrap();

    // blockwise permutation: the first m_j positions of block j map onto
    // supp(z_j), the rest onto the block's remaining positions
    let mut image = vec![0usize; window];
    for (j, level) in levels.iter().enumerate() {
        let start = if j == 0 { 0 } else { block_ends[j - 1] };
        let z_support: Vec<usize> = level.z.support().collect();
        let rest: Vec<usize> =
            (start + 1..=block_ends[j]).filter(|i| !z_support.contains(i)).collect();
        for (slot, &target) in z_support.iter().chain(rest.iter()).enumerate() {
            image[start + slot] = target;
        }
    }
    let permutation = Permutation::new(image)?;
    let reordered = permutation.reordered_coefficients(&x);

    let mut checks: Vec<LevelCheck> = Vec::new();
    let mut ratios: Vec<LevelRatio> = Vec::new();

    // per-block conditions
    for (j, level) in levels.iter().enumerate() {
        let k = level.k;
        checks.push(LevelCheck::new(
            k,
            "norm_bound",
            2f64.powi(-(k as i32)),
            n.eval(&level.y),
            false,
        ));
        let start = if j == 0 { 0 } else { block_ends[j - 1] };
        let contiguous = level.y.support_len() == level.block_len
            && level.y.min_index() == Some(start + 1)
            && level.y.max_index() == Some(block_ends[j]);
        checks.push(LevelCheck::new(
            k,
            "support_consecutive",
            if contiguous { 1.0 } else { 0.0 },
            0.0,
            true,
        ));
        checks.push(LevelCheck::new(
            k,
            "gap",
            n.eval(&complement_project(&level.y, &level.greedy)),
            2f64.powi(k as i32) * n.eval(&level.y.sub(&level.z)),
            true,
        ));
        if j + 1 < levels.len() {
            let next = &levels[j + 1];
            let min_gap = levels[..=j]
                .iter()
                .map(|l| n.eval(&l.y.sub(&l.z)))
                .fold(f64::INFINITY, f64::min);
            checks.push(LevelCheck::new(
                k + 1,
                "norm_decay",
                2f64.powi(-(k as i32 + 1)) * min_gap,
                n.eval(&next.y),
                true,
            ));
            checks.push(LevelCheck::new(
                k + 1,
                "coeff_decay",
                level.y.min_abs_coeff().unwrap(),
                next.y.sup_norm(),
                true,
            ));
        }
    }

    // per-level aggregate conditions
    for i in 1..=depth {
        let s_i = block_ends[i - 1];
        let next = &levels[i]; // block i + 1
        let b_set = IndexSet::prefix(s_i).union(&next.greedy);
        let card = s_i + next.m;

        // aggregate support and greedy membership in both orderings
        let u_next = levels[..=i].iter().fold(CoeffVector::zero(), |acc, l| acc.add(&l.y));
        let aggregate_ok = u_next.support_len() == block_ends[i]
            && b_set.len() == card
            && b_set.iter().all(|idx| u_next.coeff(idx) != 0.0);
        checks.push(LevelCheck::new(
            i,
            "aggregate_support",
            if aggregate_ok { 1.0 } else { 0.0 },
            0.0,
            true,
        ));
        checks.push(LevelCheck::new(
            i,
            "greedy_original",
            if is_greedy_set(&x, &b_set) { 1.0 } else { 0.0 },
            0.0,
            true,
        ));
        checks.push(LevelCheck::new(
            i,
            "greedy_reordered",
            if is_greedy_set(&reordered, &b_set) { 1.0 } else { 0.0 },
            0.0,
            true,
        ));
        let prefix_preserved = permutation.apply_set(&IndexSet::prefix(s_i)) == IndexSet::prefix(s_i);
        checks.push(LevelCheck::new(
            i,
            "prefix_order_agreement",
            if prefix_preserved { 1.0 } else { 0.0 },
            0.0,
            true,
        ));

        let residual = n.eval(&complement_project(&x, &b_set));
        let gap_norm = n.eval(&next.y.sub(&next.z));
        checks.push(LevelCheck::new(
            i,
            "residual_chain",
            residual,
            2f64.powi(i as i32) * gap_norm,
            false,
        ));

        let prefix_approx = n.eval(&x.filter_indices(|idx| idx > s_i).sub(&next.z));
        checks.push(LevelCheck::new(i, "prefix_approx", 2.0 * gap_norm, prefix_approx, true));

        // reordered prefix-span distance: the window is the permutation image
        // of {1..s_i + m}, and the S + z approximant is feasible in it
        let window_next = permutation.apply_set(&IndexSet::prefix(card));
        let descent = sigma_hathat_over(&x, &window_next, n, cfg, false);
        let hathat_next = descent.value.min(prefix_approx);
        let window_same = permutation.apply_set(&IndexSet::prefix(s_i + levels[i - 1].m));
        let hathat_same = sigma_hathat_over(&x, &window_same, n, cfg, false).value;
        if i >= 2 {
            checks.push(LevelCheck::new(
                i,
                "final_ratio",
                residual,
                2f64.powi(i as i32 - 1) * hathat_next,
                true,
            ));
        }
        ratios.push(LevelRatio {
            i,
            residual,
            gap_norm,
            prefix_approx,
            hathat_next,
            hathat_same,
            final_ratio: residual / hathat_next,
        });
    }

    let status = match checks.iter().find(|c| !c.pass) {
        None => AssemblyStatus::Valid,
        Some(c) => AssemblyStatus::InequalityViolated { level: c.level, condition: c.condition.clone() },
    };
    Ok(T3Assembly { depth, x, levels, permutation: Some(permutation), checks, ratios, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summing() -> NormOracle {
        NormOracle::summing()
    }

    #[test]
    fn search_on_summing_finds_minimal_alternating_block() {
        // gap 2^2 needs ratio > 4: the alternating block with 5 plus
        // positions gives residual 5 against ||y - z|| = 1
        let w = search_t3_witness(&summing(), 2, 64).unwrap().unwrap();
        assert_eq!(w.m, 5);
        assert_eq!(w.y.support_len(), 10);
        let n = summing();
        assert_eq!(n.eval(&complement_project(&w.y, &w.greedy)), 5.0);
        assert_eq!(n.eval(&w.y.sub(&w.z)), 1.0);
    }

    #[test]
    fn search_on_l1_finds_nothing() {
        let n = NormOracle::lp(1.0).unwrap();
        assert!(search_t3_witness(&n, 1, 48).unwrap().is_none());
        assert!(search_t3_witness(&n, 0, 8).is_err());
    }

    #[test]
    fn l1_small_search_confirms_no_witness_exists() {
        // independent exhaustive search at desk scale: over grid vectors, all
        // m, all greedy sets, all grid competitors with |supp(z)| <= m, the
        // residual never exceeds twice the competitor distance on l1
        let n = NormOracle::lp(1.0).unwrap();
        let values = [-1.0, 0.0, 1.0];
        let dim = 4usize;
        let mut worst: f64 = 0.0;
        for code in 0..3usize.pow(dim as u32) {
            let mut rest = code;
            let mut coeffs = vec![0.0; dim];
            for c in coeffs.iter_mut() {
                *c = values[rest % 3];
                rest /= 3;
            }
            let x = CoeffVector::from_dense(&coeffs);
            if x.is_zero() {
                continue;
            }
            for m in 1..=x.support_len() {
                for a in crate::tga::greedy_sets(&x, m).unwrap() {
                    let residual = n.eval(&complement_project(&x, &a));
                    for zcode in 0..3usize.pow(dim as u32) {
                        let mut rest = zcode;
                        let mut zc = vec![0.0; dim];
                        for c in zc.iter_mut() {
                            *c = values[rest % 3];
                            rest /= 3;
                        }
                        let z = CoeffVector::from_dense(&zc);
                        if z.support_len() > m {
                            continue;
                        }
                        let d = n.eval(&x.sub(&z));
                        if d > 1e-12 {
                            worst = worst.max(residual / d);
                        }
                    }
                }
            }
        }
        assert!(worst <= 1.0 + 1e-12, "worst ratio {worst}");
    }

    #[test]
    fn intake_rejects_wrong_competitor_support() {
        let n = summing();
        let mut w = search_t3_witness(&n, 1, 16).unwrap().unwrap();
        w.z = CoeffVector::from_dense(&[0.1]);
        assert!(matches!(validate_witness(&n, &w), Err(Error::Contract(_))));
    }

    #[test]
    fn assembly_depth_four_passes() {
        let cfg = FunctionalConfig::default();
        let source = SearchWitnessSource { oracle: summing(), budget: 512 };
        let asm = assemble_t3(&source, 4, &summing(), &cfg).unwrap();
        assert!(asm.pass(), "status {:?}", asm.status);
        assert_eq!(asm.levels.len(), 5);
        for r in &asm.ratios {
            if r.i >= 2 {
                assert!(
                    r.residual > 2f64.powi(r.i as i32 - 1) * r.hathat_next,
                    "level {}",
                    r.i
                );
            }
        }
        let text = asm.to_text();
        assert!(text.contains("ratio table"));
        assert!(text.contains("permutation:"));
    }

    #[test]
    fn assembly_with_synthetic_witnesses() {
        // hand-built witnesses with gap barely above 2^k still assemble
        let n = summing();
        let mut witnesses = Vec::new();
        for k in 1..=3u32 {
            let half = 2usize.pow(k) + 1;
            let coeffs: Vec<f64> =
                (0..2 * half).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
            let y = CoeffVector::from_dense(&coeffs);
            let greedy = IndexSet::from_iter((0..half).map(|j| 2 * j + 1));
            let z = CoeffVector::from_pairs(greedy.iter().map(|i| (i, 1.0 / (2 * half) as f64)))
                .unwrap();
            witnesses.push(BlockWitness { y, m: half, greedy, z, gap_exponent: k });
        }
        let source = ExplicitWitnessSource { witnesses };
        let asm = assemble_t3(&source, 2, &n, &FunctionalConfig::default()).unwrap();
        assert!(asm.pass(), "status {:?}", asm.status);
    }

    #[test]
    fn assembly_reports_broken_chain() {
        let source = ExplicitWitnessSource { witnesses: Vec::new() };
        let asm = assemble_t3(&source, 3, &summing(), &FunctionalConfig::default()).unwrap();
        assert!(matches!(asm.status, AssemblyStatus::WitnessChainBroken { level: 1, .. }));
        assert!(assemble_t3(&source, 0, &summing(), &FunctionalConfig::default()).is_err());
        assert!(assemble_t3(&source, 31, &summing(), &FunctionalConfig::default()).is_err());
    }
}
