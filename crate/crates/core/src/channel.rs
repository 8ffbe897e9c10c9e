//! Relocation noise and seeded randomness.
//!
//! A relocation removes the symbol at one position and reinserts it at
//! another; `t` relocations move a string at most `t` steps in the Ulam metric.

use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("relocation budget {t} exceeds length {n}")]
    BudgetOutOfRange { t: usize, n: usize },
    #[error("move ({from}, {to}) out of range for length {n}")]
    MoveOutOfRange { from: usize, to: usize, n: usize },
    #[error("random permutation needs n >= 1")]
    Empty,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ChannelError {
    fn from(e: std::io::Error) -> Self {
        ChannelError::Io(e.to_string())
    }
}

/// The RNG used everywhere a seed is accepted.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Remove the symbol at `from`, then insert it so it ends up at index `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Move {
    pub from: usize,
    pub to: usize,
}

/// Moves applied in order, and the seed that drew them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelocationTrace {
    pub seed: u64,
    pub moves: Vec<Move>,
}

impl RelocationTrace {
    pub fn replay(&self, perm: &Permutation) -> Result<Permutation, ChannelError> {
        let n = perm.len();
        let mut v = perm.as_slice().to_vec();
        for &Move { from, to } in &self.moves {
            if from >= n || to >= n {
                return Err(ChannelError::MoveOutOfRange { from, to, n });
            }
            apply_move(&mut v, from, to);
        }
        Ok(Permutation::from_vec_unchecked(v))
    }

    /// Text form: `# seed S`, then one `src dst` line per move.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), ChannelError> {
        writeln!(w, "# seed {}", self.seed)?;
        for m in &self.moves {
            writeln!(w, "{} {}", m.from, m.to)?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(reader: R) -> Result<Self, ChannelError> {
        let mut seed = 0;
        let mut moves = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(s) = rest.trim().strip_prefix("seed") {
                    seed = s.trim().parse().map_err(|e| ChannelError::Parse(format!("bad seed {s:?}: {e}")))?;
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|e| ChannelError::Parse(format!("bad position {t:?}: {e}"))))
                .collect::<Result<_, _>>()?;
            let [from, to] = nums[..] else {
                return Err(ChannelError::Parse(format!("expected `src dst`, got {line:?}")));
            };
            moves.push(Move { from, to });
        }
        Ok(RelocationTrace { seed, moves })
    }
}

fn apply_move(v: &mut Vec<usize>, from: usize, to: usize) {
    let s = v.remove(from);
    v.insert(to, s);
}

/// `t` uniformly random relocations, drawn from `rng`.
pub fn relocate_with_rng<R: Rng + ?Sized>(
    perm: &Permutation,
    t: usize,
    rng: &mut R,
) -> Result<(Permutation, Vec<Move>), ChannelError> {
    let n = perm.len();
    if t > n {
        return Err(ChannelError::BudgetOutOfRange { t, n });
    }
    let mut v = perm.as_slice().to_vec();
    let mut moves = Vec::with_capacity(t);
    for _ in 0..t {
        let m = Move { from: rng.gen_range(0..n), to: rng.gen_range(0..n) };
        apply_move(&mut v, m.from, m.to);
        moves.push(m);
    }
    Ok((Permutation::from_vec_unchecked(v), moves))
}

/// `t` uniformly random relocations, deterministic in `seed`.
pub fn relocate(perm: &Permutation, t: usize, seed: u64) -> Result<(Permutation, RelocationTrace), ChannelError> {
    let (out, moves) = relocate_with_rng(perm, t, &mut seeded_rng(seed))?;
    Ok((out, RelocationTrace { seed, moves }))
}

pub fn random_permutation_with_rng<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Permutation, ChannelError> {
    if n == 0 {
        return Err(ChannelError::Empty);
    }
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    Ok(Permutation::from_vec_unchecked(v))
}

/// Uniform permutation of `[n]` by Fisher–Yates.
pub fn random_permutation(n: usize, seed: u64) -> Result<Permutation, ChannelError> {
    random_permutation_with_rng(n, &mut seeded_rng(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{lis_length, ulam_distance};

    #[test]
    fn zero_budget() {
        let p = random_permutation(10, 3).unwrap();
        let (q, trace) = relocate(&p, 0, 9).unwrap();
        assert_eq!(p, q);
        assert!(trace.moves.is_empty());
    }

    #[test]
    fn single_move() {
        let p = Permutation::identity(4);
        let trace = RelocationTrace { seed: 0, moves: vec![Move { from: 0, to: 3 }] };
        let q = trace.replay(&p).unwrap();
        assert_eq!(q.as_slice(), &[1, 2, 3, 0]);
        assert_eq!(ulam_distance(&p, &q).unwrap(), 1);
    }

    #[test]
    fn budget_soundness_and_replay() {
        let mut rng = seeded_rng(11);
        for trial in 0..1000u64 {
            let n = rng.gen_range(1..=40);
            let t = rng.gen_range(0..=n);
            let p = random_permutation_with_rng(n, &mut rng).unwrap();
            let (q, trace) = relocate(&p, t, trial).unwrap();
            assert!(ulam_distance(&p, &q).unwrap() <= t);
            assert_eq!(trace.replay(&p).unwrap(), q);
        }
    }

    #[test]
    fn budget_out_of_range() {
        let p = Permutation::identity(3);
        assert_eq!(relocate(&p, 4, 0).unwrap_err(), ChannelError::BudgetOutOfRange { t: 4, n: 3 });
        let bad = RelocationTrace { seed: 0, moves: vec![Move { from: 3, to: 0 }] };
        assert!(bad.replay(&p).is_err());
    }

    #[test]
    fn determinism() {
        assert_eq!(random_permutation(50, 5).unwrap(), random_permutation(50, 5).unwrap());
        assert_ne!(random_permutation(50, 5).unwrap(), random_permutation(50, 6).unwrap());
        let p = Permutation::identity(30);
        assert_eq!(relocate(&p, 7, 1).unwrap(), relocate(&p, 7, 1).unwrap());
        assert_eq!(random_permutation(1, 0).unwrap().as_slice(), &[0]);
        assert!(random_permutation(0, 0).is_err());
    }

    #[test]
    fn trace_text_round_trip() {
        let (_, trace) = relocate(&Permutation::identity(20), 5, 42).unwrap();
        let mut buf = Vec::new();
        trace.write_to(&mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("# seed 42\n"));
        assert_eq!(RelocationTrace::read_from(&buf[..]).unwrap(), trace);
        assert!(RelocationTrace::read_from("1 2 3\n".as_bytes()).is_err());
    }

    #[test]
    fn random_lis_near_two_sqrt_n() {
        // E[LIS] = 2 sqrt(n) - 1.77 n^(1/6) + o(n^(1/6))
        let mut rng = seeded_rng(2024);
        for n in [64usize, 256, 1024] {
            let mean = (0..1000)
                .map(|_| lis_length(random_permutation_with_rng(n, &mut rng).unwrap().as_slice()) as f64)
                .sum::<f64>()
                / 1000.0;
            let root = (n as f64).sqrt();
            let predicted = 2.0 * root - 1.771 * (n as f64).powf(1.0 / 6.0);
            assert!((mean - predicted).abs() < 0.1 * root, "n={n}: mean {mean}, predicted {predicted}");
            assert!(mean < 2.0 * root);
        }
    }
}
