//! Audits of a concrete code: pairwise distances, decoder sweeps and rate.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::channel::relocate_with_rng;
use crate::perm::{ulam_distance_with_positions, Permutation};
use crate::ulam::{UlamCode, UlamError};

/// Most codeword pairs an exhaustive audit will compare.
pub const PAIR_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{pairs} pairs exceed the exhaustive budget of {limit}")]
    BudgetExceeded { pairs: BigUint, limit: u128 },
    #[error("relocation budget {t} exceeds length {n}")]
    BudgetOutOfRange { t: usize, n: usize },
    #[error(transparent)]
    Ulam(#[from] UlamError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditMode {
    Exhaustive,
    Sample { pairs: u64, seed: u64 },
}

/// Parameters of the audited code, shared by all reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub q: usize,
    pub levels: usize,
    pub n: usize,
    pub p: usize,
    pub certified_max_lcs: usize,
    pub shuffler_code: String,
    pub shuffler_length: usize,
    pub shuffler_dimension: usize,
    pub shuffler_distance: usize,
    pub shuffler_radius: usize,
    /// Decimal `M = |C|^levels`.
    pub message_count: String,
}

impl InstanceSummary {
    pub fn of(code: &UlamCode) -> Self {
        let spec = code.shuffler_spec();
        InstanceSummary {
            q: code.q(),
            levels: code.levels(),
            n: code.n(),
            p: code.p(),
            certified_max_lcs: code.ground().certified_max_lcs(),
            shuffler_code: code.shuffler_code().describe(),
            shuffler_length: spec.block_length,
            shuffler_dimension: spec.message_length,
            shuffler_distance: spec.min_distance,
            shuffler_radius: spec.decoding_radius,
            message_count: code.message_count().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub instance: InstanceSummary,
    pub mode: &'static str,
    pub seed: Option<u64>,
    pub pairs_checked: u64,
    /// `None` when there was no pair to compare.
    pub min_distance: Option<usize>,
    /// Messages of the first pair attaining `min_distance`.
    pub worst_pair: Option<(String, String)>,
    pub dist_lower: usize,
    pub lcs_upper: usize,
    /// Pairs with `d_U < dist_lower`.
    pub violations: u64,
    pub injective: bool,
    pub pass: bool,
    /// Wall-clock time; callers wanting reproducible output clear it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Debug, Clone, Copy)]
struct PairStats {
    min: Option<(usize, usize, usize)>,
    violations: u64,
    collisions: u64,
    pairs: u64,
}

impl PairStats {
    const EMPTY: PairStats = PairStats { min: None, violations: 0, collisions: 0, pairs: 0 };

    fn record(mut self, d: usize, i: usize, j: usize, lower: usize) -> Self {
        self.pairs += 1;
        self.violations += (d < lower) as u64;
        self.collisions += (d == 0) as u64;
        if self.min.map_or(true, |m| (d, i, j) < m) {
            self.min = Some((d, i, j));
        }
        self
    }

    fn merge(self, other: Self) -> Self {
        let min = match (self.min, other.min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        PairStats {
            min,
            violations: self.violations + other.violations,
            collisions: self.collisions + other.collisions,
            pairs: self.pairs + other.pairs,
        }
    }
}

/// Compares codeword pairs against the certified distance bound.
///
/// Exhaustive mode encodes every message; its minimum and worst pair are
/// independent of thread scheduling (ties go to the smallest pair). Sample
/// mode draws `pairs` uniform pairs of distinct messages from `seed`.
pub fn audit_pairwise(code: &UlamCode, mode: AuditMode) -> Result<AuditReport, VerifyError> {
    let start = Instant::now();
    let bounds = code.code_bounds();
    let lower = bounds.dist_lower;
    let m = code.message_count();

    let (stats, worst, seed, mode_name) = match mode {
        AuditMode::Exhaustive => {
            let pairs = &m * (&m - 1u32) / 2u32;
            if pairs > BigUint::from(PAIR_BUDGET) {
                return Err(VerifyError::BudgetExceeded { pairs, limit: PAIR_BUDGET });
            }
            let count = m.to_usize().expect("within the pair budget");
            let codewords: Vec<Permutation> = (0..count)
                .into_par_iter()
                .map(|x| code.encode_u64(x as u64))
                .collect::<Result<_, _>>()?;
            let stats = (0..count)
                .into_par_iter()
                .map(|i| {
                    let pos = codewords[i].positions();
                    ((i + 1)..count).fold(PairStats::EMPTY, |s, j| {
                        s.record(ulam_distance_with_positions(&pos, &codewords[j]), i, j, lower)
                    })
                })
                .reduce(|| PairStats::EMPTY, PairStats::merge);
            let worst = stats.min.map(|(_, i, j)| (i.to_string(), j.to_string()));
            (stats, worst, None, "exhaustive")
        }
        AuditMode::Sample { pairs, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let drawn: Vec<(BigUint, BigUint)> = if m < BigUint::from(2u32) {
                Vec::new()
            } else {
                (0..pairs)
                    .map(|_| loop {
                        let a = rng.gen_biguint_below(&m);
                        let b = rng.gen_biguint_below(&m);
                        if a != b {
                            break (a, b);
                        }
                    })
                    .collect()
            };
            let distances: Vec<usize> = drawn
                .par_iter()
                .map(|(a, b)| {
                    let ca = code.encode(a)?;
                    let cb = code.encode(b)?;
                    Ok(ulam_distance_with_positions(&ca.positions(), &cb))
                })
                .collect::<Result<_, UlamError>>()?;
            let stats = distances
                .iter()
                .enumerate()
                .fold(PairStats::EMPTY, |s, (k, &d)| s.record(d, k, k, lower));
            let worst = stats.min.map(|(_, k, _)| (drawn[k].0.to_string(), drawn[k].1.to_string()));
            (stats, worst, Some(seed), "sample")
        }
    };

    let injective = stats.collisions == 0;
    Ok(AuditReport {
        instance: InstanceSummary::of(code),
        mode: mode_name,
        seed,
        pairs_checked: stats.pairs,
        min_distance: stats.min.map(|(d, _, _)| d),
        worst_pair: worst,
        dist_lower: lower,
        lcs_upper: bounds.lcs_upper,
        violations: stats.violations,
        injective,
        pass: injective && stats.violations == 0,
        elapsed_ms: Some(start.elapsed().as_millis()),
    })
}

/// Outcome counts for one relocation budget `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub t: usize,
    pub trials: u64,
    /// Decoded to the transmitted message.
    pub success: u64,
    /// Flagged as a decode failure.
    pub decode_failures: u64,
    /// Returned a different message (only legitimate outside the radius).
    pub wrong_decodes: u64,
    /// Trials whose measured `d_U` was inside the guaranteed radius.
    pub within_radius: u64,
    pub within_radius_success: u64,
    /// Failures or wrong decodes inside the radius; must be zero.
    pub within_radius_violations: u64,
    /// Measured `d_U -> count`.
    pub distance_histogram: BTreeMap<usize, u64>,
}

impl SweepRow {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            return 1.0;
        }
        self.success as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub instance: InstanceSummary,
    pub seed: u64,
    pub distance_bound: usize,
    pub max_correctable: Option<usize>,
    pub rows: Vec<SweepRow>,
    pub pass: bool,
}

enum Outcome {
    Success,
    Failure,
    Wrong,
}

/// Runs `trials` rounds of encode, `t` relocations, decode for each `t`.
///
/// Trial `j` of budget `t_values[i]` draws from ChaCha8 stream
/// `(i << 32) | j` of `seed`, so results do not depend on thread count.
pub fn decoder_sweep(code: &UlamCode, t_values: &[usize], trials: u64, seed: u64) -> Result<SweepReport, VerifyError> {
    let n = code.n();
    if let Some(&t) = t_values.iter().find(|&&t| t > n) {
        return Err(VerifyError::BudgetOutOfRange { t, n });
    }
    let m = code.message_count();
    let mut rows = Vec::with_capacity(t_values.len());
    for (i, &t) in t_values.iter().enumerate() {
        let results: Vec<(usize, Outcome)> = (0..trials)
            .into_par_iter()
            .map(|j| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(((i as u64) << 32) | j);
                let x = if m.is_zero() { BigUint::zero() } else { rng.gen_biguint_below(&m) };
                let sent = code.encode(&x)?;
                let (received, _) = relocate_with_rng(&sent, t, &mut rng).expect("t checked against n");
                let d = ulam_distance_with_positions(&sent.positions(), &received);
                let outcome = match code.decode(&received) {
                    Ok(dec) if dec.message == x => Outcome::Success,
                    Ok(_) => Outcome::Wrong,
                    Err(e) if e.is_decode_failure() => Outcome::Failure,
                    Err(e) => return Err(e),
                };
                Ok((d, outcome))
            })
            .collect::<Result<_, UlamError>>()?;
        let mut row = SweepRow {
            t,
            trials,
            success: 0,
            decode_failures: 0,
            wrong_decodes: 0,
            within_radius: 0,
            within_radius_success: 0,
            within_radius_violations: 0,
            distance_histogram: BTreeMap::new(),
        };
        for (d, outcome) in results {
            *row.distance_histogram.entry(d).or_default() += 1;
            let inside = code.within_decoding_radius(d);
            row.within_radius += inside as u64;
            match outcome {
                Outcome::Success => {
                    row.success += 1;
                    row.within_radius_success += inside as u64;
                }
                Outcome::Failure => row.decode_failures += 1,
                Outcome::Wrong => row.wrong_decodes += 1,
            }
        }
        row.within_radius_violations = row.within_radius - row.within_radius_success;
        rows.push(row);
    }
    let pass = rows.iter().all(|r| r.within_radius_violations == 0);
    Ok(SweepReport {
        instance: InstanceSummary::of(code),
        seed,
        distance_bound: code.distance_bound(),
        max_correctable: code.max_correctable(),
        rows,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub instance: InstanceSummary,
    pub n: usize,
    pub message_count: String,
    pub ln_message_count: f64,
    pub ln_n_factorial: f64,
    /// `ln M / ln n!`.
    pub rate: f64,
    /// `epsilon_D R_C / q`.
    pub rate_lower: f64,
    pub epsilon_d: f64,
    pub rate_c: f64,
    pub pass: bool,
}

/// Natural logarithm of a big integer from its top 64 bits.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln n!` as a compensated sum of `ln i`.
pub fn ln_factorial(n: usize) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for i in 2..=n {
        let y = (i as f64).ln() - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

pub fn rate_report(code: &UlamCode) -> RateReport {
    let m = code.message_count();
    let n = code.n();
    let ln_m = ln_biguint(&m);
    let ln_fact = ln_factorial(n);
    let bounds = code.code_bounds();
    let rate = if ln_fact > 0.0 { ln_m / ln_fact } else { 0.0 };
    RateReport {
        instance: InstanceSummary::of(code),
        n,
        message_count: m.to_string(),
        ln_message_count: ln_m,
        ln_n_factorial: ln_fact,
        rate,
        rate_lower: bounds.rate_lower,
        epsilon_d: bounds.epsilon_d,
        rate_c: bounds.rate_c,
        pass: rate >= bounds.rate_lower * (1.0 - 1e-12),
    }
}

/// Random message below `M`, for callers that sample their own trials.
pub fn random_message<R: Rng + ?Sized>(code: &UlamCode, rng: &mut R) -> BigUint {
    rng.gen_biguint_below(&code.message_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{BlockCode, BlockCodeSpec, CodeError, RepetitionCode};
    use crate::ground::xor_ground_set;
    use std::sync::Arc;

    fn rep_code() -> UlamCode {
        let ground = xor_ground_set(4, &[vec![0, 0], vec![1, 1]]).unwrap();
        UlamCode::new(4, 2, ground, Arc::new(RepetitionCode::new(2, 4).unwrap())).unwrap()
    }

    /// Two messages that share a codeword, so the permutation code is not injective.
    #[derive(Debug)]
    struct CollidingCode;

    impl BlockCode for CollidingCode {
        fn spec(&self) -> BlockCodeSpec {
            BlockCodeSpec { alphabet_size: 2, block_length: 4, message_length: 1, min_distance: 1, decoding_radius: 0 }
        }
        fn encode(&self, _message: &[usize]) -> Result<Vec<usize>, CodeError> {
            Ok(vec![0; 4])
        }
        fn decode(&self, _word: &[usize]) -> Result<Option<Vec<usize>>, CodeError> {
            Ok(Some(vec![0]))
        }
        fn describe(&self) -> String {
            "colliding".into()
        }
    }

    #[test]
    fn exhaustive_small() {
        let r = audit_pairwise(&rep_code(), AuditMode::Exhaustive).unwrap();
        assert_eq!(r.pairs_checked, 6);
        assert!(r.pass && r.injective);
        assert!(r.min_distance.unwrap() >= r.dist_lower);
        assert_eq!(r.dist_lower, 12);
    }

    #[test]
    fn negative_control() {
        let ground = xor_ground_set(4, &[vec![0, 0], vec![1, 1]]).unwrap();
        let code = UlamCode::new(4, 2, ground, Arc::new(CollidingCode)).unwrap();
        let r = audit_pairwise(&code, AuditMode::Exhaustive).unwrap();
        assert!(!r.injective);
        assert!(!r.pass);
        assert_eq!(r.min_distance, Some(0));
        assert_eq!(r.worst_pair, Some(("0".into(), "1".into())));
    }

    #[test]
    fn two_message_sample() {
        // p >= 2 and k >= 1 keep M >= 2, so the smallest instance has one pair
        let ground = xor_ground_set(2, &[vec![0], vec![1]]).unwrap();
        let code = UlamCode::new(2, 1, ground, Arc::new(RepetitionCode::new(2, 1).unwrap())).unwrap();
        let r = audit_pairwise(&code, AuditMode::Sample { pairs: 3, seed: 1 }).unwrap();
        assert_eq!(r.pairs_checked, 3);
        assert!(r.pass);
    }

    #[test]
    fn sample_matches_exhaustive_floor() {
        let code = rep_code();
        let ex = audit_pairwise(&code, AuditMode::Exhaustive).unwrap();
        let sa = audit_pairwise(&code, AuditMode::Sample { pairs: 50, seed: 9 }).unwrap();
        assert!(sa.min_distance.unwrap() >= ex.min_distance.unwrap());
        assert_eq!(sa.seed, Some(9));
        assert_eq!(
            audit_pairwise(&code, AuditMode::Sample { pairs: 50, seed: 9 }).unwrap().worst_pair,
            sa.worst_pair
        );
    }

    #[test]
    fn sweep_zero_noise() {
        let r = decoder_sweep(&rep_code(), &[0, 1, 2], 50, 3).unwrap();
        assert_eq!(r.rows[0].success_rate(), 1.0);
        assert!(r.pass);
        let again = decoder_sweep(&rep_code(), &[0, 1, 2], 50, 3).unwrap();
        assert_eq!(r.rows, again.rows);
        assert!(decoder_sweep(&rep_code(), &[17], 1, 0).is_err());
    }

    #[test]
    fn sweep_flags_far_noise() {
        let r = decoder_sweep(&rep_code(), &[16], 200, 5).unwrap();
        let row = &r.rows[0];
        assert!(row.decode_failures > 0);
        assert_eq!(row.within_radius_violations, 0);
    }

    #[test]
    fn rate_accounting() {
        let code = rep_code();
        let r = rate_report(&code);
        assert_eq!(r.message_count, "4");
        assert!((r.ln_message_count - 4f64.ln()).abs() < 1e-12);
        assert!(r.pass);
        // levels = 1: rate = ln |C| / ln q!
        let ground = xor_ground_set(4, &[vec![0, 0], vec![1, 1]]).unwrap();
        let code = UlamCode::new(4, 1, ground, Arc::new(RepetitionCode::new(2, 1).unwrap())).unwrap();
        let r = rate_report(&code);
        assert!((r.rate - 2f64.ln() / 24f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn logs() {
        assert!((ln_biguint(&BigUint::from(1000u32)) - 1000f64.ln()).abs() < 1e-12);
        let big = BigUint::from(3u32).pow(500);
        assert!((ln_biguint(&big) - 500.0 * 3f64.ln()).abs() / (500.0 * 3f64.ln()) < 1e-14);
        assert!((ln_factorial(10) - 3628800f64.ln()).abs() < 1e-12);
        assert_eq!(ln_factorial(1), 0.0);
    }
}
