//! Ground permutation sets: small collections of permutations of `[q]` with
//! a certified bound on the pairwise LCS.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::perm::{lcs_length, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundSetError {
    #[error("ground set must contain at least one permutation")]
    Empty,
    #[error("permutation {index} has length {got}, expected {expected}")]
    LengthMismatch { index: usize, expected: usize, got: usize },
    #[error("permutations {first} and {second} are equal")]
    Duplicate { first: usize, second: usize },
    #[error("q = {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("codeword {index} has length {got}, expected log2(q) = {expected}")]
    WordLength { index: usize, expected: usize, got: usize },
    #[error("codeword {index} is not binary")]
    NotBinary { index: usize },
    #[error("only {found} permutations found with pairwise LCS <= {max_lcs}, wanted {target}")]
    BudgetExhausted { found: usize, target: usize, max_lcs: usize },
    #[error("{q}! permutations is too many to enumerate")]
    TooLarge { q: usize },
    #[error("file declares certified LCS {declared}, recomputed {actual}")]
    CertificateMismatch { declared: usize, actual: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

impl From<std::io::Error> for GroundSetError {
    fn from(e: std::io::Error) -> Self {
        GroundSetError::Perm(PermError::from(e))
    }
}

/// `D = {sigma_0, .., sigma_{p-1}}`: distinct permutations of `[q]` with
/// their exact maximum pairwise LCS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    q: usize,
    perms: Vec<Permutation>,
    certified_max_lcs: usize,
}

/// Result of an exhaustive pairwise LCS scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroundSetReport {
    pub max_pairwise_lcs: usize,
    /// Lexicographically first pair attaining the maximum.
    pub worst_pair: Option<(usize, usize)>,
    pub threshold: usize,
    pub pass: bool,
}

impl GroundSet {
    /// Validates the permutations and certifies their maximum pairwise LCS.
    pub fn new(perms: Vec<Permutation>) -> Result<Self, GroundSetError> {
        let q = perms.first().ok_or(GroundSetError::Empty)?.len();
        for (index, p) in perms.iter().enumerate() {
            if p.len() != q {
                return Err(GroundSetError::LengthMismatch { index, expected: q, got: p.len() });
            }
        }
        let mut seen = std::collections::HashMap::new();
        for (index, p) in perms.iter().enumerate() {
            if let Some(first) = seen.insert(p.as_slice(), index) {
                return Err(GroundSetError::Duplicate { first, second: index });
            }
        }
        let report = verify_ground_set(&perms, q);
        Ok(GroundSet { q, perms, certified_max_lcs: report.max_pairwise_lcs })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// `p = |D|`.
    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn get(&self, c: usize) -> &Permutation {
        &self.perms[c]
    }

    /// Maximum of `L(sigma_i, sigma_j)` over distinct pairs. A singleton
    /// set has no pairs and reports 0.
    pub fn certified_max_lcs(&self) -> usize {
        self.certified_max_lcs
    }

    /// Achieved `log_q p`.
    pub fn rate_exponent(&self) -> f64 {
        (self.perms.len() as f64).ln() / (self.q as f64).ln()
    }

    /// Achieved `log_q(certified_max_lcs)`, the exponent with `L <= q^delta`.
    pub fn lcs_exponent(&self) -> f64 {
        (self.certified_max_lcs.max(1) as f64).ln() / (self.q as f64).ln()
    }

    /// Text form: header `q p certified_max_lcs`, then one permutation per line.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), GroundSetError> {
        writeln!(w, "{} {} {}", self.q, self.perms.len(), self.certified_max_lcs)?;
        for p in &self.perms {
            writeln!(w, "{p}")?;
        }
        Ok(())
    }

    /// Reads the text form and re-certifies it; a wrong header LCS is an error.
    pub fn read_from<R: BufRead>(r: R) -> Result<Self, GroundSetError> {
        let mut lines = Vec::new();
        for line in r.lines() {
            let line = line?;
            let t = line.trim();
            if !t.is_empty() && !t.starts_with('#') {
                lines.push(t.to_string());
            }
        }
        let header = lines.first().ok_or_else(|| GroundSetError::Parse("missing header".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| GroundSetError::Parse(format!("bad header {header:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        let [q, p, declared] = nums[..] else {
            return Err(GroundSetError::Parse(format!(
                "header must be `q p certified_max_lcs`, got {header:?}"
            )));
        };
        let perms = lines[1..]
            .iter()
            .map(|l| l.parse::<Permutation>())
            .collect::<Result<Vec<_>, _>>()?;
        if perms.len() != p {
            return Err(GroundSetError::Parse(format!("header declares {p} permutations, found {}", perms.len())));
        }
        if let Some((index, bad)) = perms.iter().enumerate().find(|(_, x)| x.len() != q) {
            return Err(GroundSetError::LengthMismatch { index, expected: q, got: bad.len() });
        }
        let set = GroundSet::new(perms)?;
        if set.certified_max_lcs != declared {
            return Err(GroundSetError::CertificateMismatch { declared, actual: set.certified_max_lcs });
        }
        Ok(set)
    }
}

/// Exhaustive pairwise LCS over `perms`; passes iff the maximum is `<= threshold`.
pub fn verify_ground_set(perms: &[Permutation], threshold: usize) -> GroundSetReport {
    let n = perms.len();
    let best = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (lcs_length(&perms[i], &perms[j]), i, j))
        // maximum LCS, ties to the smallest (i, j)
        .reduce_with(|a, b| {
            if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                b
            } else {
                a
            }
        });
    match best {
        Some((lcs, i, j)) => GroundSetReport {
            max_pairwise_lcs: lcs,
            worst_pair: Some((i, j)),
            threshold,
            pass: lcs <= threshold,
        },
        None => GroundSetReport { max_pairwise_lcs: 0, worst_pair: None, threshold, pass: true },
    }
}

/// `sigma_g[i] = i XOR g` for every binary codeword `g` of length `log2 q`
/// (bit 0 of the word is the most significant bit). This realises
/// `sigma_g[i] = x` iff `i = x XOR g`.
pub fn xor_permutation(q: usize, word: &[usize]) -> Permutation {
    let g = word.iter().fold(0usize, |acc, &b| (acc << 1) | b);
    Permutation::from_vec_unchecked((0..q).map(|i| i ^ g).collect())
}

/// The explicit XOR ground set: one permutation per binary codeword.
pub fn xor_ground_set(q: usize, words: &[Vec<usize>]) -> Result<GroundSet, GroundSetError> {
    if q < 2 || !q.is_power_of_two() {
        return Err(GroundSetError::NotPowerOfTwo(q));
    }
    let bits = q.trailing_zeros() as usize;
    for (index, w) in words.iter().enumerate() {
        if w.len() != bits {
            return Err(GroundSetError::WordLength { index, expected: bits, got: w.len() });
        }
        if w.iter().any(|&b| b > 1) {
            return Err(GroundSetError::NotBinary { index });
        }
    }
    GroundSet::new(words.iter().map(|w| xor_permutation(q, w)).collect())
}

/// Candidate order for [`brute_force_ground_set`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchOrder {
    /// All `q!` permutations in lexicographic order.
    Lexicographic,
    /// `budget` uniformly random permutations from a seeded generator.
    Random { seed: u64, budget: usize },
}

const MAX_ENUMERABLE_Q: usize = 11;

/// Next permutation in lexicographic order, in place.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("successor exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Greedy search: accept each candidate whose LCS with every accepted
/// permutation is `<= max_lcs`, until `target_p` are accepted.
pub fn brute_force_ground_set(
    q: usize,
    target_p: usize,
    max_lcs: usize,
    order: SearchOrder,
) -> Result<GroundSet, GroundSetError> {
    if q == 0 {
        return Err(GroundSetError::Perm(PermError::Empty));
    }
    let mut accepted: Vec<Permutation> = Vec::new();
    let offer = |cand: Vec<usize>, accepted: &mut Vec<Permutation>| {
        let cand = Permutation::from_vec_unchecked(cand);
        if accepted.iter().all(|a| lcs_length(a, &cand) <= max_lcs) {
            accepted.push(cand);
        }
        accepted.len() >= target_p
    };
    match order {
        SearchOrder::Lexicographic => {
            if q > MAX_ENUMERABLE_Q {
                return Err(GroundSetError::TooLarge { q });
            }
            let mut cur: Vec<usize> = (0..q).collect();
            loop {
                if offer(cur.clone(), &mut accepted) || !next_permutation(&mut cur) {
                    break;
                }
            }
        }
        SearchOrder::Random { seed, budget } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut tried = HashSet::new();
            for _ in 0..budget {
                let mut cand: Vec<usize> = (0..q).collect();
                cand.shuffle(&mut rng);
                if !tried.insert(cand.clone()) {
                    continue;
                }
                if offer(cand, &mut accepted) {
                    break;
                }
            }
        }
    }
    if accepted.len() < target_p {
        return Err(GroundSetError::BudgetExhausted { found: accepted.len(), target: target_p, max_lcs });
    }
    GroundSet::new(accepted)
}
