//! The multi-stage shuffle code and its stage-wise decoder.
//!
//! Locations `m` in `[n]`, `n = q^levels`, are addressed by their base-q
//! digits `phi_q(m)`, most significant first. At stage `i` (numbered from 1)
//! the locations sharing every digit except digit `i` form a group
//! `I_{alpha, beta}` of size `q`; there are `n / q` groups per stage. Group
//! `(alpha, beta)` sits at shuffler index `value(alpha ++ beta)` and is
//! shuffled by a ground permutation chosen by that shuffler symbol:
//!
//! ```text
//! next[alpha x beta] = prev[alpha sigma_c[x] beta],  c = w[(alpha, beta)]
//! ```
//!
//! A codeword is the result of running all stages from the identity with
//! one codeword of the shuffler code per stage.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::codes::{hamming_distance, BlockCode, BlockCodeSpec, CodeError};
use crate::ground::GroundSet;
use crate::perm::{lis_length, ulam_distance_with_positions, PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UlamError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("stage {stage} outside 1..={levels}")]
    StageOutOfRange { stage: usize, levels: usize },
    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("shuffler symbol {symbol} outside [0, {p})")]
    SymbolOutOfRange { symbol: usize, p: usize },
    #[error("expected {expected} shufflers, got {got}")]
    WrongStageCount { expected: usize, got: usize },
    #[error("message {message} outside [0, {count})")]
    MessageOutOfRange { message: BigUint, count: BigUint },
    #[error("shuffler for stage {stage} is not a codeword")]
    NotACodeword { stage: usize },
    #[error("decode failure: {0}")]
    DecodeFailure(DecodeFailure),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

impl UlamError {
    pub fn is_decode_failure(&self) -> bool {
        matches!(self, UlamError::DecodeFailure(_))
    }
}

/// Why [`UlamCode::decode`] gave up.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("shuffler code could not decode the guess at stage {stage}")]
    Stage { stage: usize },
    #[error("reconstructed codeword is at Ulam distance {distance}, outside the decoding radius")]
    OutsideRadius { distance: usize },
}

/// Geometry of the stages: `q`, `levels` and `n = q^levels`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StageLayout {
    q: usize,
    levels: usize,
    n: usize,
}

impl StageLayout {
    pub fn new(q: usize, levels: usize) -> Result<Self, UlamError> {
        if q < 2 || levels == 0 {
            return Err(UlamError::InvalidParameters(format!(
                "need q >= 2 and levels >= 1, got q = {q}, levels = {levels}"
            )));
        }
        let n = q
            .checked_pow(levels as u32)
            .filter(|&n| n <= 1 << 28)
            .ok_or_else(|| UlamError::InvalidParameters(format!("q^levels = {q}^{levels} is too large")))?;
        Ok(StageLayout { q, levels, n })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of groups per stage, `n / q`, equal to the shuffler length.
    pub fn groups(&self) -> usize {
        self.n / self.q
    }

    fn check_stage(&self, stage: usize) -> Result<(), UlamError> {
        if stage == 0 || stage > self.levels {
            return Err(UlamError::StageOutOfRange { stage, levels: self.levels });
        }
        Ok(())
    }

    /// `q^(levels - stage)`: the place value of digit `stage`.
    fn stride(&self, stage: usize) -> usize {
        self.q.pow((self.levels - stage) as u32)
    }

    /// Location `alpha x beta` of member `x` of group `group` at `stage`.
    pub fn position(&self, stage: usize, group: usize, x: usize) -> usize {
        let stride = self.stride(stage);
        (group / stride) * stride * self.q + x * stride + group % stride
    }

    pub fn group_key(&self, stage: usize, group: usize) -> Result<GroupKey, UlamError> {
        self.check_stage(stage)?;
        let digits = crate::perm::to_digits(group, self.q, self.levels - 1)?;
        let (alpha, beta) = digits.digits().split_at(stage - 1);
        Ok(GroupKey { stage, alpha: alpha.to_vec(), beta: beta.to_vec() })
    }
}

/// Group `I^(stage)_{alpha, beta}`, identified by its fixed digits.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupKey {
    pub stage: usize,
    /// Digits before position `stage` (length `stage - 1`).
    pub alpha: Vec<usize>,
    /// Digits after position `stage` (length `levels - stage`).
    pub beta: Vec<usize>,
}

impl GroupKey {
    /// Canonical shuffler index: the base-q value of `alpha ++ beta`.
    pub fn index(&self, q: usize) -> usize {
        self.alpha.iter().chain(&self.beta).fold(0, |acc, &d| acc * q + d)
    }

    /// The `q` locations `alpha x beta`, in order of `x`.
    pub fn positions(&self, q: usize) -> Vec<usize> {
        (0..q)
            .map(|x| {
                self.alpha
                    .iter()
                    .chain(std::iter::once(&x))
                    .chain(&self.beta)
                    .fold(0, |acc, &d| acc * q + d)
            })
            .collect()
    }
}

/// One shuffler string per stage, each of length `n / q` over `[p]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShufflerTuple(pub Vec<Vec<usize>>);

impl ShufflerTuple {
    pub fn stages(&self) -> &[Vec<usize>] {
        &self.0
    }

    /// Parses `w1;w2;...` where each shuffler is comma- or space-separated digits.
    pub fn parse(s: &str) -> Result<Self, UlamError> {
        let stages = s
            .split(';')
            .map(|part| {
                part.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|e| UlamError::InvalidParameters(format!("bad shuffler digit {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ShufflerTuple(stages))
    }
}

fn check_shuffler(layout: &StageLayout, shuffler: &[usize], p: usize) -> Result<(), UlamError> {
    if shuffler.len() != layout.groups() {
        return Err(UlamError::LengthMismatch { expected: layout.groups(), got: shuffler.len() });
    }
    if let Some(&symbol) = shuffler.iter().find(|&&c| c >= p) {
        return Err(UlamError::SymbolOutOfRange { symbol, p });
    }
    Ok(())
}

fn check_ground(layout: &StageLayout, ground: &GroundSet) -> Result<(), UlamError> {
    if ground.q() != layout.q() {
        return Err(UlamError::InvalidParameters(format!(
            "ground set permutes [{}] but q = {}",
            ground.q(),
            layout.q()
        )));
    }
    Ok(())
}

/// Runs one stage: `next[alpha x beta] = prev[alpha sigma_c[x] beta]`.
pub fn apply_stage(
    perm: &Permutation,
    layout: &StageLayout,
    stage: usize,
    shuffler: &[usize],
    ground: &GroundSet,
) -> Result<Permutation, UlamError> {
    layout.check_stage(stage)?;
    check_ground(layout, ground)?;
    if perm.len() != layout.n() {
        return Err(UlamError::LengthMismatch { expected: layout.n(), got: perm.len() });
    }
    check_shuffler(layout, shuffler, ground.len())?;
    Ok(apply_stage_unchecked(perm.as_slice(), layout, stage, shuffler, ground))
}

fn apply_stage_unchecked(
    prev: &[usize],
    layout: &StageLayout,
    stage: usize,
    shuffler: &[usize],
    ground: &GroundSet,
) -> Permutation {
    let mut next = vec![0; prev.len()];
    for (group, &c) in shuffler.iter().enumerate() {
        let sigma = ground.get(c).as_slice();
        for (x, &y) in sigma.iter().enumerate() {
            next[layout.position(stage, group, x)] = prev[layout.position(stage, group, y)];
        }
    }
    Permutation::from_vec_unchecked(next)
}

/// All intermediate strings `pi^(0) = id, pi^(1), .., pi^(levels)`.
pub fn stage_trace(
    layout: &StageLayout,
    ground: &GroundSet,
    shufflers: &ShufflerTuple,
) -> Result<Vec<Permutation>, UlamError> {
    check_ground(layout, ground)?;
    if shufflers.0.len() != layout.levels() {
        return Err(UlamError::WrongStageCount { expected: layout.levels(), got: shufflers.0.len() });
    }
    for w in &shufflers.0 {
        check_shuffler(layout, w, ground.len())?;
    }
    let mut trace = vec![Permutation::identity(layout.n())];
    for (i, w) in shufflers.0.iter().enumerate() {
        let next = apply_stage_unchecked(trace[i].as_slice(), layout, i + 1, w, ground);
        trace.push(next);
    }
    Ok(trace)
}

/// `pi_w`: the permutation after the last stage.
pub fn encode_shufflers(
    layout: &StageLayout,
    ground: &GroundSet,
    shufflers: &ShufflerTuple,
) -> Result<Permutation, UlamError> {
    Ok(stage_trace(layout, ground, shufflers)?.pop().expect("trace is never empty"))
}

/// Ulam distance between the relative order `order` (a permutation of `[q]`
/// by member index) and the ground permutation with position table `sigma_pos`.
fn group_distance(order: &[usize], sigma_pos: &[usize], scratch: &mut Vec<usize>) -> usize {
    scratch.clear();
    scratch.extend(order.iter().map(|&y| sigma_pos[y]));
    order.len() - lis_length(scratch)
}

fn best_candidate(order: &[usize], ground_positions: &[Vec<usize>], scratch: &mut Vec<usize>) -> usize {
    let mut best = (usize::MAX, 0);
    for (c, pos) in ground_positions.iter().enumerate() {
        let d = group_distance(order, pos, scratch);
        if d < best.0 {
            best = (d, c);
        }
    }
    best.1
}

/// Guesses the shuffler symbol of one group.
///
/// With `A = {prev_star[alpha x beta] : x}`, candidate `c` arranges `A` as
/// `tau_c[x] = prev_star[alpha sigma_c[x] beta]`; the returned `c` minimises
/// `d_U(received|_A, tau_c)`, ties going to the smallest `c`.
pub fn guess_shuffler_symbol(
    received: &Permutation,
    prev_star: &Permutation,
    key: &GroupKey,
    ground: &GroundSet,
) -> Result<usize, UlamError> {
    if received.len() != prev_star.len() {
        return Err(UlamError::LengthMismatch { expected: prev_star.len(), got: received.len() });
    }
    let q = ground.q();
    let locations = key.positions(q);
    if let Some(&bad) = locations.iter().find(|&&m| m >= prev_star.len()) {
        return Err(UlamError::InvalidParameters(format!("group location {bad} outside the permutation")));
    }
    let recv_pos = received.positions();
    let order = member_order(&locations, prev_star.as_slice(), &recv_pos);
    let ground_positions: Vec<Vec<usize>> = ground.perms().iter().map(Permutation::positions).collect();
    Ok(best_candidate(&order, &ground_positions, &mut Vec::with_capacity(q)))
}

/// Member indices `y` of a group, listed in the order their symbols
/// `prev_star[loc_y]` appear in the received string.
fn member_order(locations: &[usize], prev_star: &[usize], recv_pos: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..locations.len()).collect();
    order.sort_by_key(|&y| recv_pos[prev_star[locations[y]]]);
    order
}

/// The LCS and distance bounds evaluated on concrete parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeBounds {
    /// `(delta_C / q^(1 - delta_D) + (1 - delta_C)) n`, always an integer here.
    pub lcs_upper: usize,
    /// `n - lcs_upper = d_C (q - L_D)`.
    pub dist_lower: usize,
    /// `epsilon_D R_C / q`.
    pub rate_lower: f64,
    /// `delta_C = d_C / (n / q)`.
    pub delta_c: f64,
    /// `R_C = k / (n / q)`.
    pub rate_c: f64,
    /// `epsilon_D = log_q p`.
    pub epsilon_d: f64,
    /// `delta_D = log_q L_D`.
    pub delta_d: f64,
}

/// Evaluates the bounds from integers: block length `n / q`, shuffler code
/// distance `min_distance` and dimension `message_length` over `[p]`, and
/// ground-set LCS `max_lcs`.
pub fn code_bounds(
    q: usize,
    n: usize,
    p: usize,
    max_lcs: usize,
    min_distance: usize,
    message_length: usize,
) -> CodeBounds {
    let blocks = n / q;
    let max_lcs = max_lcs.min(q);
    let min_distance = min_distance.min(blocks);
    // delta_C * (n/q) * L + (1 - delta_C) * (n/q) * q
    let lcs_upper = min_distance * max_lcs + (blocks - min_distance) * q;
    let lnq = (q as f64).ln();
    let epsilon_d = (p as f64).ln() / lnq;
    let rate_c = message_length as f64 / blocks as f64;
    CodeBounds {
        lcs_upper,
        dist_lower: n - lcs_upper,
        rate_lower: epsilon_d * rate_c / q as f64,
        delta_c: min_distance as f64 / blocks as f64,
        rate_c,
        epsilon_d,
        delta_d: (max_lcs.max(1) as f64).ln() / lnq,
    }
}

/// A successful decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: BigUint,
    pub codeword: Permutation,
    /// `d_U(received, codeword)`.
    pub distance: usize,
}

/// The code `S = {pi_w : w in C^levels}` with its encoder and decoder.
#[derive(Debug, Clone)]
pub struct UlamCode {
    layout: StageLayout,
    ground: GroundSet,
    shuffler_code: Arc<dyn BlockCode>,
    ground_positions: Vec<Vec<usize>>,
}

impl UlamCode {
    pub fn new(
        q: usize,
        levels: usize,
        ground: GroundSet,
        shuffler_code: Arc<dyn BlockCode>,
    ) -> Result<Self, UlamError> {
        let layout = StageLayout::new(q, levels)?;
        check_ground(&layout, &ground)?;
        let spec = shuffler_code.spec().validated()?;
        if spec.alphabet_size != ground.len() {
            return Err(UlamError::InvalidParameters(format!(
                "shuffler code alphabet {} differs from ground set size p = {}",
                spec.alphabet_size,
                ground.len()
            )));
        }
        if spec.block_length != layout.groups() {
            return Err(UlamError::InvalidParameters(format!(
                "shuffler code length {} differs from n / q = {}",
                spec.block_length,
                layout.groups()
            )));
        }
        let ground_positions = ground.perms().iter().map(Permutation::positions).collect();
        Ok(UlamCode { layout, ground, shuffler_code, ground_positions })
    }

    pub fn layout(&self) -> &StageLayout {
        &self.layout
    }

    pub fn q(&self) -> usize {
        self.layout.q
    }

    pub fn levels(&self) -> usize {
        self.layout.levels
    }

    pub fn n(&self) -> usize {
        self.layout.n
    }

    /// `p = |D|`.
    pub fn p(&self) -> usize {
        self.ground.len()
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn shuffler_code(&self) -> &dyn BlockCode {
        self.shuffler_code.as_ref()
    }

    pub fn shuffler_spec(&self) -> BlockCodeSpec {
        self.shuffler_code.spec()
    }

    /// `|C| = p^k`.
    pub fn messages_per_stage(&self) -> BigUint {
        BigUint::from(self.p()).pow(self.shuffler_spec().message_length as u32)
    }

    /// `M = |C|^levels`.
    pub fn message_count(&self) -> BigUint {
        self.messages_per_stage().pow(self.levels() as u32)
    }

    pub fn code_bounds(&self) -> CodeBounds {
        let spec = self.shuffler_spec();
        code_bounds(
            self.q(),
            self.n(),
            self.p(),
            self.ground.certified_max_lcs(),
            spec.min_distance,
            spec.message_length,
        )
    }

    /// Certified lower bound on the pairwise Ulam distance, `d_C (q - L_D)`.
    pub fn distance_bound(&self) -> usize {
        self.code_bounds().dist_lower
    }

    /// Whether the decoder is guaranteed to recover a codeword at Ulam
    /// distance `d` from the received word.
    ///
    /// This needs `4 d < distance_bound` and, when the shuffler decoder
    /// corrects fewer than `(d_C - 1) / 2` errors, also
    /// `2 d < (t_C + 1)(q - L_D)`, the number of bad groups it can absorb.
    pub fn within_decoding_radius(&self, d: usize) -> bool {
        let spec = self.shuffler_spec();
        let gap = self.q() - self.ground.certified_max_lcs().min(self.q());
        4 * d < self.distance_bound() && 2 * d < (spec.decoding_radius + 1) * gap
    }

    /// Largest Ulam distance covered by [`UlamCode::within_decoding_radius`].
    pub fn max_correctable(&self) -> Option<usize> {
        if !self.within_decoding_radius(0) {
            return None;
        }
        let mut d = 0;
        while self.within_decoding_radius(d + 1) {
            d += 1;
        }
        Some(d)
    }

    /// Splits `x` into per-stage messages (most significant stage first),
    /// expands each in base p and encodes it with the shuffler code.
    pub fn message_to_shufflers(&self, x: &BigUint) -> Result<ShufflerTuple, UlamError> {
        let count = self.message_count();
        if x >= &count {
            return Err(UlamError::MessageOutOfRange { message: x.clone(), count });
        }
        let per_stage = self.messages_per_stage();
        let k = self.shuffler_spec().message_length;
        let mut parts = Vec::with_capacity(self.levels());
        let mut rest = x.clone();
        for _ in 0..self.levels() {
            parts.push(&rest % &per_stage);
            rest /= &per_stage;
        }
        parts.reverse();
        let stages = parts
            .iter()
            .map(|part| {
                let digits = to_base_digits(part, self.p(), k);
                self.shuffler_code.encode(&digits).map_err(UlamError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ShufflerTuple(stages))
    }

    /// Inverse of [`UlamCode::message_to_shufflers`]; every shuffler must be a codeword.
    pub fn shufflers_to_message(&self, shufflers: &ShufflerTuple) -> Result<BigUint, UlamError> {
        if shufflers.0.len() != self.levels() {
            return Err(UlamError::WrongStageCount { expected: self.levels(), got: shufflers.0.len() });
        }
        let messages = shufflers
            .0
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let msg = self
                    .shuffler_code
                    .decode(w)?
                    .ok_or(UlamError::NotACodeword { stage: i + 1 })?;
                if &self.shuffler_code.encode(&msg)? != w {
                    return Err(UlamError::NotACodeword { stage: i + 1 });
                }
                Ok(msg)
            })
            .collect::<Result<Vec<_>, UlamError>>()?;
        Ok(self.combine_messages(&messages))
    }

    fn combine_messages(&self, messages: &[Vec<usize>]) -> BigUint {
        let per_stage = self.messages_per_stage();
        let p = BigUint::from(self.p());
        messages.iter().fold(BigUint::zero(), |acc, digits| {
            let part = digits.iter().fold(BigUint::zero(), |a, &d| a * &p + d);
            acc * &per_stage + part
        })
    }

    pub fn encode_shufflers(&self, shufflers: &ShufflerTuple) -> Result<Permutation, UlamError> {
        encode_shufflers(&self.layout, &self.ground, shufflers)
    }

    /// `S(x)`.
    pub fn encode(&self, x: &BigUint) -> Result<Permutation, UlamError> {
        self.encode_shufflers(&self.message_to_shufflers(x)?)
    }

    pub fn encode_u64(&self, x: u64) -> Result<Permutation, UlamError> {
        self.encode(&BigUint::from(x))
    }

    /// Stage-wise decoding.
    ///
    /// Stage `i` starts from the reconstructed `pi*^(i-1)`. For each group it
    /// picks the ground permutation whose arrangement of the group's symbols
    /// is Ulam-closest to their order in the received string, decodes the
    /// resulting guess with the shuffler code, and advances `pi*^(i)`.
    ///
    /// Later stages never change digit `i` of a location, so the final
    /// codeword orders each stage-`i` group exactly as `pi*^(i)` does and
    /// every stage can be compared against the received string as is.
    ///
    /// The result is returned only if it lies within the guaranteed radius
    /// of the input (see [`UlamCode::within_decoding_radius`]).
    pub fn decode(&self, received: &Permutation) -> Result<Decoded, UlamError> {
        let decoded = self.decode_stages(received, false)?;
        self.finish(received, decoded)
    }

    /// Variant of [`UlamCode::decode`] that, after each stage, rewrites the
    /// received string so each group's symbols, kept in the positions they
    /// occupy, follow their order in `pi*^(i)`.
    ///
    /// Rewriting can move the string away from the codeword, so this variant
    /// is not guaranteed to decode inside the radius; it is kept for
    /// comparison.
    pub fn decode_rewriting(&self, received: &Permutation) -> Result<Decoded, UlamError> {
        let decoded = self.decode_stages(received, true)?;
        self.finish(received, decoded)
    }

    fn finish(&self, received: &Permutation, (messages, star): (Vec<Vec<usize>>, Permutation)) -> Result<Decoded, UlamError> {
        let distance = ulam_distance_with_positions(&received.positions(), &star);
        if !self.within_decoding_radius(distance) {
            return Err(UlamError::DecodeFailure(DecodeFailure::OutsideRadius { distance }));
        }
        Ok(Decoded { message: self.combine_messages(&messages), codeword: star, distance })
    }

    fn decode_stages(
        &self,
        received: &Permutation,
        rewrite: bool,
    ) -> Result<(Vec<Vec<usize>>, Permutation), UlamError> {
        let layout = &self.layout;
        if received.len() != layout.n() {
            return Err(UlamError::LengthMismatch { expected: layout.n(), got: received.len() });
        }
        let q = layout.q();
        let mut recv_pos = received.positions();
        let mut star = Permutation::identity(layout.n());
        let mut messages = Vec::with_capacity(layout.levels());
        let mut scratch = Vec::with_capacity(q);
        let mut locations = vec![0; q];
        let mut guess = vec![0; layout.groups()];

        for stage in 1..=layout.levels() {
            for (group, slot) in guess.iter_mut().enumerate() {
                for (x, loc) in locations.iter_mut().enumerate() {
                    *loc = layout.position(stage, group, x);
                }
                let order = member_order(&locations, star.as_slice(), &recv_pos);
                *slot = best_candidate(&order, &self.ground_positions, &mut scratch);
            }
            let message = self
                .shuffler_code
                .decode(&guess)?
                .ok_or(UlamError::DecodeFailure(DecodeFailure::Stage { stage }))?;
            let shuffler = self.shuffler_code.encode(&message)?;
            debug_assert!(hamming_distance(&shuffler, &guess) <= self.shuffler_spec().decoding_radius);
            let next = apply_stage_unchecked(star.as_slice(), layout, stage, &shuffler, &self.ground);

            if rewrite {
                let mut occupied = Vec::with_capacity(q);
                for group in 0..layout.groups() {
                    occupied.clear();
                    occupied.extend((0..q).map(|x| recv_pos[next.as_slice()[layout.position(stage, group, x)]]));
                    occupied.sort_unstable();
                    for (x, &slot) in occupied.iter().enumerate() {
                        let sym = next.as_slice()[layout.position(stage, group, x)];
                        recv_pos[sym] = slot;
                    }
                }
            }
            star = next;
            messages.push(message);
        }
        Ok((messages, star))
    }
}

/// `len` base-`radix` digits of `value`, most significant first.
fn to_base_digits(value: &BigUint, radix: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    let mut rest = value.clone();
    let r = BigUint::from(radix);
    for d in digits.iter_mut().rev() {
        *d = (&rest % &r).to_usize().expect("digit fits in usize");
        rest /= &r;
    }
    digits
}
