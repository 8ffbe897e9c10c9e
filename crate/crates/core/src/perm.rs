//! Permutation strings and the Ulam metric.
//!
//! Permutations are treated purely as strings: a [`Permutation`] of length
//! `n` is a string over `[n] = {0, .., n-1}` with no repeated symbol. The
//! Ulam distance between two such strings is `n - L(a, b)` where `L` is the
//! length of a longest common subsequence.
//!
//! Two LCS routes are provided. [`lcs_length`] relabels the symbols of one
//! string by their position in the other and runs patience sorting, which
//! is `O(m log m)`. [`lcs_length_dp`] is the textbook quadratic table and is
//! kept as an independent oracle.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("permutation must have length at least 1")]
    Empty,
    #[error("symbol {symbol} is repeated")]
    RepeatedSymbol { symbol: usize },
    #[error("symbol {symbol} is outside [0, {n})")]
    SymbolOutOfRange { symbol: usize, n: usize },
    #[error("strings do not contain the same symbol set")]
    SymbolSetMismatch,
    #[error("value {value} is outside [0, {bound})")]
    DigitsOutOfRange { value: usize, bound: usize },
    #[error("invalid radix {0}, must be at least 2")]
    InvalidRadix(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for PermError {
    fn from(e: std::io::Error) -> Self {
        PermError::Io(e.to_string())
    }
}

/// Strings whose symbols are known to be pairwise distinct.
///
/// Implemented by [`Permutation`] and [`DistinctString`]; the LCS and Ulam
/// routines accept either.
pub trait DistinctSymbols {
    fn symbols(&self) -> &[usize];
}

/// A string of distinct symbols, not necessarily covering a contiguous range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DistinctString(Vec<usize>);

impl DistinctString {
    pub fn new(symbols: Vec<usize>) -> Result<Self, PermError> {
        let mut seen = HashSet::with_capacity(symbols.len());
        for &s in &symbols {
            if !seen.insert(s) {
                return Err(PermError::RepeatedSymbol { symbol: s });
            }
        }
        Ok(DistinctString(symbols))
    }

    pub fn empty() -> Self {
        DistinctString(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl DistinctSymbols for DistinctString {
    fn symbols(&self) -> &[usize] {
        &self.0
    }
}

impl TryFrom<Vec<usize>> for DistinctString {
    type Error = PermError;
    fn try_from(v: Vec<usize>) -> Result<Self, PermError> {
        DistinctString::new(v)
    }
}

impl From<Permutation> for DistinctString {
    fn from(p: Permutation) -> Self {
        DistinctString(p.0)
    }
}

/// A length-`n` string over `[n]` in which every symbol appears exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(symbols: Vec<usize>) -> Result<Self, PermError> {
        let n = symbols.len();
        if n == 0 {
            return Err(PermError::Empty);
        }
        let mut seen = vec![false; n];
        for &s in &symbols {
            if s >= n {
                return Err(PermError::SymbolOutOfRange { symbol: s, n });
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(PermError::RepeatedSymbol { symbol: s });
            }
        }
        Ok(Permutation(symbols))
    }

    /// The identity string `(0, 1, .., n-1)`.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "identity permutation needs n >= 1");
        Permutation((0..n).collect())
    }

    /// Wraps symbols already known to form a permutation.
    pub(crate) fn from_vec_unchecked(symbols: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(symbols.clone()).is_ok());
        Permutation(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &s)| i == s)
    }

    /// `positions()[s]` is the location of symbol `s`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &s) in self.0.iter().enumerate() {
            pos[s] = i;
        }
        pos
    }
}

impl DistinctSymbols for Permutation {
    fn symbols(&self) -> &[usize] {
        &self.0
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;
    fn try_from(v: Vec<usize>) -> Result<Self, PermError> {
        Permutation::new(v)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0)
    }
}

impl fmt::Display for DistinctString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0)
    }
}

fn write_symbols(f: &mut fmt::Formatter<'_>, symbols: &[usize]) -> fmt::Result {
    for (i, s) in symbols.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{s}")?;
    }
    Ok(())
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Parses `n` whitespace-separated decimal integers.
    fn from_str(s: &str) -> Result<Self, PermError> {
        let symbols = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|e| PermError::Parse(format!("bad symbol {tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Permutation::new(symbols)
    }
}

/// Reads one permutation per non-empty line. Lines starting with `#` are skipped.
pub fn read_permutations<R: BufRead>(reader: R) -> Result<Vec<Permutation>, PermError> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let perm = trimmed.parse::<Permutation>().map_err(|e| match e {
            PermError::Parse(msg) => PermError::Parse(format!("line {}: {msg}", lineno + 1)),
            other => other,
        })?;
        out.push(perm);
    }
    Ok(out)
}

pub fn write_permutations<'a, W: Write>(
    mut writer: W,
    perms: impl IntoIterator<Item = &'a Permutation>,
) -> Result<(), PermError> {
    for p in perms {
        writeln!(writer, "{p}")?;
    }
    Ok(())
}

/// Length of a longest strictly increasing subsequence, by patience sorting.
pub fn lis_length(seq: &[usize]) -> usize {
    // tails[k] = smallest tail of an increasing subsequence of length k + 1
    let mut tails: Vec<usize> = Vec::with_capacity(seq.len().min(64));
    for &v in seq {
        let k = tails.partition_point(|&t| t < v);
        if k == tails.len() {
            tails.push(v);
        } else {
            tails[k] = v;
        }
    }
    tails.len()
}

/// `L(a, b)`: the length of a longest common subsequence.
///
/// Symbols occurring in only one of the strings are allowed and simply never
/// match. Shared symbols of `b` are relabelled by their position in `a`, and
/// the answer is the longest increasing subsequence of the relabelled `b`.
pub fn lcs_length<A, B>(a: &A, b: &B) -> usize
where
    A: DistinctSymbols + ?Sized,
    B: DistinctSymbols + ?Sized,
{
    let (a, b) = (a.symbols(), b.symbols());
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let max_symbol = a.iter().copied().max().unwrap_or(0);
    let relabelled: Vec<usize> = if max_symbol <= 8 * a.len() + 64 {
        let mut pos = vec![usize::MAX; max_symbol + 1];
        for (i, &s) in a.iter().enumerate() {
            pos[s] = i;
        }
        b.iter()
            .filter_map(|&s| pos.get(s).copied().filter(|&p| p != usize::MAX))
            .collect()
    } else {
        let pos: HashMap<usize, usize> = a.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        b.iter().filter_map(|s| pos.get(s).copied()).collect()
    };
    lis_length(&relabelled)
}

/// `L(a, b)` by the classical `O(|a| * |b|)` dynamic program.
pub fn lcs_length_dp<A, B>(a: &A, b: &B) -> usize
where
    A: DistinctSymbols + ?Sized,
    B: DistinctSymbols + ?Sized,
{
    let (a, b) = (a.symbols(), b.symbols());
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for &x in a {
        for (j, &y) in b.iter().enumerate() {
            cur[j + 1] = if x == y {
                prev[j] + 1
            } else {
                cur[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

fn same_symbol_set(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let set: HashSet<usize> = a.iter().copied().collect();
    b.iter().all(|s| set.contains(s))
}

/// Ulam distance `|a| - L(a, b)` between strings on the same symbol set.
pub fn ulam_distance<A, B>(a: &A, b: &B) -> Result<usize, PermError>
where
    A: DistinctSymbols + ?Sized,
    B: DistinctSymbols + ?Sized,
{
    if !same_symbol_set(a.symbols(), b.symbols()) {
        return Err(PermError::SymbolSetMismatch);
    }
    Ok(a.symbols().len() - lcs_length(a, b))
}

/// Same as [`ulam_distance`] but using the quadratic LCS oracle.
pub fn ulam_distance_dp<A, B>(a: &A, b: &B) -> Result<usize, PermError>
where
    A: DistinctSymbols + ?Sized,
    B: DistinctSymbols + ?Sized,
{
    if !same_symbol_set(a.symbols(), b.symbols()) {
        return Err(PermError::SymbolSetMismatch);
    }
    Ok(a.symbols().len() - lcs_length_dp(a, b))
}

/// Ulam distance between two permutations of the same length, given the
/// position table of `a` (see [`Permutation::positions`]). Used by the
/// audits, where one side is compared against many.
pub fn ulam_distance_with_positions(a_positions: &[usize], b: &Permutation) -> usize {
    debug_assert_eq!(a_positions.len(), b.len());
    let relabelled: Vec<usize> = b.as_slice().iter().map(|&s| a_positions[s]).collect();
    b.len() - lis_length(&relabelled)
}

/// `s|_A`: the subsequence of `s` made of the symbols in `keep`.
pub fn restrict<S: DistinctSymbols + ?Sized>(s: &S, keep: &HashSet<usize>) -> DistinctString {
    restrict_by(s, |sym| keep.contains(&sym))
}

pub fn restrict_by<S, F>(s: &S, mut keep: F) -> DistinctString
where
    S: DistinctSymbols + ?Sized,
    F: FnMut(usize) -> bool,
{
    DistinctString(s.symbols().iter().copied().filter(|&x| keep(x)).collect())
}

/// Base-`q` representation of a location, most-significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitIndex {
    radix: usize,
    digits: Vec<usize>,
}

impl DigitIndex {
    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }

    pub fn value(&self) -> usize {
        self.digits.iter().fold(0, |acc, &d| acc * self.radix + d)
    }
}

/// `phi_q(m)`: writes `m` with exactly `len` base-`q` digits.
pub fn to_digits(m: usize, q: usize, len: usize) -> Result<DigitIndex, PermError> {
    if q < 2 {
        return Err(PermError::InvalidRadix(q));
    }
    let bound = q
        .checked_pow(len as u32)
        .ok_or(PermError::DigitsOutOfRange { value: m, bound: usize::MAX })?;
    if m >= bound {
        return Err(PermError::DigitsOutOfRange { value: m, bound });
    }
    let mut digits = vec![0; len];
    let mut rest = m;
    for d in digits.iter_mut().rev() {
        *d = rest % q;
        rest /= q;
    }
    Ok(DigitIndex { radix: q, digits })
}

/// Inverse of [`to_digits`].
pub fn from_digits(digits: &[usize], q: usize) -> Result<usize, PermError> {
    if q < 2 {
        return Err(PermError::InvalidRadix(q));
    }
    let mut acc: usize = 0;
    for &d in digits {
        if d >= q {
            return Err(PermError::DigitsOutOfRange { value: d, bound: q });
        }
        acc = acc
            .checked_mul(q)
            .and_then(|v| v.checked_add(d))
            .ok_or(PermError::DigitsOutOfRange { value: d, bound: q })?;
    }
    Ok(acc)
}
