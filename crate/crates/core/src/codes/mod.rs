//! Hamming-metric block codes over small alphabets.
//!
//! Every code exposes the same surface through [`BlockCode`]: a message is a
//! string of `message_length` digits over `[alphabet_size]`, a codeword is a
//! string of `block_length` digits over the same alphabet, and decoding is
//! unique decoding up to [`BlockCodeSpec::decoding_radius`]. Decoders check
//! their own answer: a message is only returned if its codeword lies within
//! the declared radius of the received word, otherwise `Ok(None)` is returned.

use std::fmt;

use thiserror::Error;

mod concat;
mod explicit;
pub mod field;
mod rs;
mod simple;

pub use concat::ConcatenatedCode;
pub use explicit::{greedy_gv_code, hamming_ball_volume, read_explicit_code, ExplicitCode};
pub use field::{Field, FieldElement};
pub use rs::ReedSolomon;
pub use simple::{IdentityCode, RepetitionCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("expected length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("digit {digit} at position {position} is outside [0, {alphabet})")]
    DigitOutOfRange { digit: usize, position: usize, alphabet: usize },
    #[error("invalid code parameters: {0}")]
    InvalidParameters(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("search space of {size} words exceeds the limit {limit}")]
    SearchSpaceTooLarge { size: u128, limit: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CodeError {
    fn from(e: std::io::Error) -> Self {
        CodeError::Io(e.to_string())
    }
}

/// Parameters every code declares about itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct BlockCodeSpec {
    pub alphabet_size: usize,
    pub block_length: usize,
    pub message_length: usize,
    /// A certified lower bound on the pairwise Hamming distance.
    pub min_distance: usize,
    /// Number of symbol errors the decoder is guaranteed to correct.
    pub decoding_radius: usize,
}

impl BlockCodeSpec {
    pub(crate) fn validated(self) -> Result<Self, CodeError> {
        let bad = |msg: String| Err(CodeError::InvalidParameters(msg));
        if self.alphabet_size < 2 {
            return bad(format!("alphabet size {} < 2", self.alphabet_size));
        }
        if self.block_length == 0 || self.message_length == 0 {
            return bad("block and message length must be positive".into());
        }
        if self.message_length > self.block_length {
            return bad(format!(
                "message length {} exceeds block length {}",
                self.message_length, self.block_length
            ));
        }
        if self.min_distance == 0 || self.min_distance > self.block_length {
            return bad(format!("min distance {} out of range", self.min_distance));
        }
        if self.decoding_radius > (self.min_distance - 1) / 2 {
            return bad(format!(
                "decoding radius {} exceeds (d - 1) / 2 for d = {}",
                self.decoding_radius, self.min_distance
            ));
        }
        Ok(self)
    }

    /// `alphabet_size ^ message_length`, or `None` on overflow.
    pub fn code_size(&self) -> Option<u128> {
        (self.alphabet_size as u128).checked_pow(self.message_length as u32)
    }

    pub fn rate(&self) -> f64 {
        self.message_length as f64 / self.block_length as f64
    }

    pub fn relative_distance(&self) -> f64 {
        self.min_distance as f64 / self.block_length as f64
    }
}

/// A q-ary block code with deterministic encoding and unique decoding.
pub trait BlockCode: fmt::Debug + Send + Sync {
    fn spec(&self) -> BlockCodeSpec;

    fn encode(&self, message: &[usize]) -> Result<Vec<usize>, CodeError>;

    /// Returns the message whose codeword is within `decoding_radius` of
    /// `word`, or `None` when the decoder cannot certify one.
    fn decode(&self, word: &[usize]) -> Result<Option<Vec<usize>>, CodeError>;

    /// Concise human-readable description, e.g. `RS(GF(5), n=5, k=2)`.
    fn describe(&self) -> String;
}

pub fn hamming_distance(a: &[usize], b: &[usize]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

pub(crate) fn check_word(word: &[usize], expected: usize, alphabet: usize) -> Result<(), CodeError> {
    if word.len() != expected {
        return Err(CodeError::WrongLength { expected, got: word.len() });
    }
    if let Some((position, &digit)) = word.iter().enumerate().find(|(_, &d)| d >= alphabet) {
        return Err(CodeError::DigitOutOfRange { digit, position, alphabet });
    }
    Ok(())
}

/// Keeps a decoder's candidate only if its codeword is within the radius.
pub(crate) fn certify<C: BlockCode + ?Sized>(
    code: &C,
    word: &[usize],
    message: Vec<usize>,
) -> Result<Option<Vec<usize>>, CodeError> {
    let codeword = code.encode(&message)?;
    if hamming_distance(&codeword, word) <= code.spec().decoding_radius {
        Ok(Some(message))
    } else {
        Ok(None)
    }
}

/// Mixed-radix counter over `[alphabet]^len`, most-significant digit first.
pub(crate) fn next_word(word: &mut [usize], alphabet: usize) -> bool {
    for d in word.iter_mut().rev() {
        *d += 1;
        if *d < alphabet {
            return true;
        }
        *d = 0;
    }
    false
}

/// All messages of a code in lexicographic order. Only for small codes.
pub fn all_messages(spec: &BlockCodeSpec) -> impl Iterator<Item = Vec<usize>> {
    let (alphabet, len) = (spec.alphabet_size, spec.message_length);
    let mut current = Some(vec![0; len]);
    std::iter::from_fn(move || {
        let out = current.take()?;
        let mut next = out.clone();
        if next_word(&mut next, alphabet) {
            current = Some(next);
        }
        Some(out)
    })
}

/// Encodes every message; the list is in message order.
pub fn all_codewords<C: BlockCode + ?Sized>(code: &C) -> Result<Vec<Vec<usize>>, CodeError> {
    all_messages(&code.spec()).map(|m| code.encode(&m)).collect()
}

/// Exact minimum pairwise Hamming distance of a list of words
/// (`usize::MAX` for fewer than two words).
pub fn min_pairwise_distance(words: &[Vec<usize>]) -> usize {
    let mut best = usize::MAX;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            best = best.min(hamming_distance(a, b));
        }
    }
    best
}
