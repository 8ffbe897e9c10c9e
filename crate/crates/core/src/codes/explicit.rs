//! Codes given by an explicit list of codewords, and the greedy
//! Gilbert–Varshamov search that produces them.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use super::{certify, check_word, hamming_distance, next_word, BlockCode, BlockCodeSpec, CodeError};

/// Default cap on `alphabet^length` for the greedy search.
pub const GV_SEARCH_LIMIT: u128 = 10_000_000;

/// A code stored as a list of codewords.
///
/// All codewords are kept (see [`ExplicitCode::codewords`]), but only the
/// first `alphabet^k` of them, with `k = floor(log_alphabet(size))`, are
/// addressable as messages. Message `m` maps to codeword number
/// `value(m)` in list order. Decoding is brute-force nearest codeword.
#[derive(Debug, Clone)]
pub struct ExplicitCode {
    alphabet: usize,
    length: usize,
    codewords: Vec<Vec<usize>>,
    message_length: usize,
    addressable: usize,
    min_distance: usize,
}

impl ExplicitCode {
    pub fn new(alphabet: usize, length: usize, codewords: Vec<Vec<usize>>) -> Result<Self, CodeError> {
        if alphabet < 2 || length == 0 {
            return Err(CodeError::InvalidParameters(format!(
                "explicit code needs alphabet >= 2 and length >= 1, got {alphabet}, {length}"
            )));
        }
        let mut seen = HashSet::with_capacity(codewords.len());
        for w in &codewords {
            check_word(w, length, alphabet)?;
            if !seen.insert(w.as_slice()) {
                return Err(CodeError::InvalidParameters(format!("repeated codeword {w:?}")));
            }
        }
        if codewords.len() < alphabet {
            return Err(CodeError::InvalidParameters(format!(
                "{} codewords cannot address even one digit over alphabet {alphabet}",
                codewords.len()
            )));
        }
        let mut message_length = 0;
        let mut addressable = 1usize;
        while let Some(next) = addressable.checked_mul(alphabet).filter(|&v| v <= codewords.len()) {
            addressable = next;
            message_length += 1;
        }
        let min_distance = super::min_pairwise_distance(&codewords[..addressable]);
        Ok(ExplicitCode {
            alphabet,
            length,
            codewords,
            message_length,
            addressable,
            min_distance,
        })
    }

    /// Every codeword, including those beyond the addressable prefix.
    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Exact minimum distance over the full list (not just the addressable part).
    pub fn full_min_distance(&self) -> usize {
        super::min_pairwise_distance(&self.codewords)
    }

    fn index_of(&self, message: &[usize]) -> usize {
        message.iter().fold(0, |acc, &d| acc * self.alphabet + d)
    }

    fn message_of(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.message_length];
        for d in digits.iter_mut().rev() {
            *d = index % self.alphabet;
            index /= self.alphabet;
        }
        digits
    }

    /// Text form: header `alphabet length size`, then one codeword per line.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), CodeError> {
        writeln!(w, "{} {} {}", self.alphabet, self.length, self.codewords.len())?;
        for cw in &self.codewords {
            let line: Vec<String> = cw.iter().map(usize::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl BlockCode for ExplicitCode {
    fn spec(&self) -> BlockCodeSpec {
        let min_distance = self.min_distance.min(self.length);
        BlockCodeSpec {
            alphabet_size: self.alphabet,
            block_length: self.length,
            message_length: self.message_length,
            min_distance,
            decoding_radius: (min_distance - 1) / 2,
        }
    }

    fn encode(&self, message: &[usize]) -> Result<Vec<usize>, CodeError> {
        check_word(message, self.message_length, self.alphabet)?;
        Ok(self.codewords[self.index_of(message)].clone())
    }

    fn decode(&self, word: &[usize]) -> Result<Option<Vec<usize>>, CodeError> {
        check_word(word, self.length, self.alphabet)?;
        let nearest = self.codewords[..self.addressable]
            .iter()
            .enumerate()
            .min_by_key(|(i, cw)| (hamming_distance(cw, word), *i))
            .map(|(i, _)| i)
            .expect("at least one addressable codeword");
        certify(self, word, self.message_of(nearest))
    }

    fn describe(&self) -> String {
        format!(
            "Explicit(q={}, n={}, size={}, d={})",
            self.alphabet, self.length, self.addressable, self.min_distance
        )
    }
}

/// Parses the text form written by [`ExplicitCode::write_to`].
pub fn read_explicit_code<R: BufRead>(reader: R) -> Result<ExplicitCode, CodeError> {
    let mut lines = reader
        .lines()
        .map(|l| l.map_err(CodeError::from))
        .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty() && !s.trim_start().starts_with('#')));
    let header = lines.next().ok_or_else(|| CodeError::Parse("missing header".into()))??;
    let nums = parse_digits(&header)?;
    let [alphabet, length, size] = nums[..] else {
        return Err(CodeError::Parse(format!("header must be `alphabet length size`, got {header:?}")));
    };
    let mut codewords = Vec::with_capacity(size);
    for line in lines {
        codewords.push(parse_digits(&line?)?);
    }
    if codewords.len() != size {
        return Err(CodeError::Parse(format!(
            "header declares {size} codewords, found {}",
            codewords.len()
        )));
    }
    ExplicitCode::new(alphabet, length, codewords)
}

fn parse_digits(line: &str) -> Result<Vec<usize>, CodeError> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| CodeError::Parse(format!("bad integer {t:?}: {e}"))))
        .collect()
}

/// `V(n, r) = sum_{i <= r} C(n, i) (q - 1)^i`.
pub fn hamming_ball_volume(alphabet: usize, length: usize, radius: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut power: u128 = 1;
    for i in 0..=radius.min(length) {
        total = total.saturating_add(binom.saturating_mul(power));
        binom = binom * (length - i) as u128 / (i + 1) as u128;
        power = power.saturating_mul((alphabet - 1) as u128);
    }
    total
}

/// Lexicographic greedy code: scan `[alphabet]^length` from the all-zero
/// word and keep each word at distance `>= min_distance` from all kept ones.
pub fn greedy_gv_code(alphabet: usize, length: usize, min_distance: usize) -> Result<ExplicitCode, CodeError> {
    if alphabet < 2 || length == 0 || min_distance == 0 || min_distance > length {
        return Err(CodeError::InvalidParameters(format!(
            "greedy search needs alphabet >= 2 and 1 <= d <= n, got q={alphabet}, n={length}, d={min_distance}"
        )));
    }
    let size = (alphabet as u128)
        .checked_pow(length as u32)
        .unwrap_or(u128::MAX);
    if size > GV_SEARCH_LIMIT {
        return Err(CodeError::SearchSpaceTooLarge { size, limit: GV_SEARCH_LIMIT });
    }
    let mut kept: Vec<Vec<usize>> = Vec::new();
    let mut word = vec![0usize; length];
    loop {
        if kept.iter().all(|c| hamming_distance(c, &word) >= min_distance) {
            kept.push(word.clone());
        }
        if !next_word(&mut word, alphabet) {
            break;
        }
    }
    ExplicitCode::new(alphabet, length, kept)
}
