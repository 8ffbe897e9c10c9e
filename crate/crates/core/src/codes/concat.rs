//! Concatenation of an outer code over `[p^m]` with an inner code over `[p]`.

use std::sync::Arc;

use super::{certify, check_word, BlockCode, BlockCodeSpec, CodeError};

/// Each outer symbol `s` in `[p^m]` is written as `m` base-p digits (most
/// significant first) and encoded with the inner code.
///
/// Decoding is inner-then-outer: every inner block is decoded on its own
/// (a failed block becomes outer symbol 0), then the outer decoder runs.
/// That corrects any pattern of fewer than `(t_out + 1) * (t_in + 1)`
/// errors, where `t` are the component radii; for codes decoded to half
/// their distance this is `ceil(d_out / 2) * ceil(d_in / 2) >= d_out * d_in / 4`.
#[derive(Debug, Clone)]
pub struct ConcatenatedCode {
    outer: Arc<dyn BlockCode>,
    inner: Arc<dyn BlockCode>,
    inner_alphabet: usize,
}

impl ConcatenatedCode {
    pub fn new(outer: Arc<dyn BlockCode>, inner: Arc<dyn BlockCode>) -> Result<Self, CodeError> {
        let (o, i) = (outer.spec(), inner.spec());
        let inner_messages = i.code_size();
        if inner_messages != Some(o.alphabet_size as u128) {
            return Err(CodeError::AlphabetMismatch(format!(
                "outer alphabet {} but inner code has {}^{} messages",
                o.alphabet_size, i.alphabet_size, i.message_length
            )));
        }
        Ok(ConcatenatedCode {
            inner_alphabet: i.alphabet_size,
            outer,
            inner,
        })
    }

    pub fn outer(&self) -> &dyn BlockCode {
        self.outer.as_ref()
    }

    pub fn inner(&self) -> &dyn BlockCode {
        self.inner.as_ref()
    }

    fn symbol_to_digits(&self, mut s: usize, m: usize) -> Vec<usize> {
        let mut digits = vec![0; m];
        for d in digits.iter_mut().rev() {
            *d = s % self.inner_alphabet;
            s /= self.inner_alphabet;
        }
        digits
    }

    fn digits_to_symbol(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.inner_alphabet + d)
    }
}

impl BlockCode for ConcatenatedCode {
    fn spec(&self) -> BlockCodeSpec {
        let (o, i) = (self.outer.spec(), self.inner.spec());
        let guaranteed = (o.decoding_radius + 1) * (i.decoding_radius + 1);
        BlockCodeSpec {
            alphabet_size: i.alphabet_size,
            block_length: o.block_length * i.block_length,
            message_length: o.message_length * i.message_length,
            min_distance: o.min_distance * i.min_distance,
            decoding_radius: guaranteed - 1,
        }
    }

    fn encode(&self, message: &[usize]) -> Result<Vec<usize>, CodeError> {
        let (o, i) = (self.outer.spec(), self.inner.spec());
        check_word(message, o.message_length * i.message_length, self.inner_alphabet)?;
        let outer_msg: Vec<usize> = message
            .chunks(i.message_length)
            .map(|c| self.digits_to_symbol(c))
            .collect();
        let outer_cw = self.outer.encode(&outer_msg)?;
        let mut out = Vec::with_capacity(o.block_length * i.block_length);
        for s in outer_cw {
            out.extend(self.inner.encode(&self.symbol_to_digits(s, i.message_length))?);
        }
        Ok(out)
    }

    fn decode(&self, word: &[usize]) -> Result<Option<Vec<usize>>, CodeError> {
        let (o, i) = (self.outer.spec(), self.inner.spec());
        check_word(word, o.block_length * i.block_length, self.inner_alphabet)?;
        let mut outer_word = Vec::with_capacity(o.block_length);
        for block in word.chunks(i.block_length) {
            let sym = match self.inner.decode(block)? {
                Some(digits) => self.digits_to_symbol(&digits),
                None => 0,
            };
            outer_word.push(sym);
        }
        let Some(outer_msg) = self.outer.decode(&outer_word)? else {
            return Ok(None);
        };
        let message = outer_msg
            .into_iter()
            .flat_map(|s| self.symbol_to_digits(s, i.message_length))
            .collect();
        certify(self, word, message)
    }

    fn describe(&self) -> String {
        format!("Concat[{} ∘ {}]", self.outer.describe(), self.inner.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{all_codewords, all_messages, greedy_gv_code, ExplicitCode, IdentityCode, ReedSolomon};

    #[test]
    fn composed_length_and_distance() {
        // outer RS over GF(4), n = 3, k = 2 (d = 2); inner binary [3, 2, 1]
        let outer = Arc::new(ReedSolomon::new(4, 3, 2).unwrap());
        let inner_words = vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1]];
        let inner = Arc::new(ExplicitCode::new(2, 3, inner_words).unwrap());
        assert_eq!(inner.spec().min_distance, 1);
        let c = ConcatenatedCode::new(outer, inner).unwrap();
        let s = c.spec();
        assert_eq!((s.block_length, s.alphabet_size, s.message_length), (9, 2, 4));
        let cws = all_codewords(&c).unwrap();
        assert!(crate::codes::min_pairwise_distance(&cws) >= 2);
    }

    #[test]
    fn parity_inner_distance() {
        // outer RS over GF(4), n = 3, k = 1 (d = 3); inner binary parity [3, 2, 2]
        let outer = Arc::new(ReedSolomon::new(4, 3, 1).unwrap());
        let inner = Arc::new(greedy_gv_code(2, 3, 2).unwrap());
        let c = ConcatenatedCode::new(outer, inner).unwrap();
        let cws = all_codewords(&c).unwrap();
        let d = crate::codes::min_pairwise_distance(&cws);
        assert!(d >= 6, "d = {d}");
        assert_eq!(c.spec().decoding_radius, 2 * 1 - 1);
    }

    #[test]
    fn identity_inner_is_digitwise_outer() {
        let outer = Arc::new(ReedSolomon::new(4, 4, 2).unwrap());
        let inner = Arc::new(IdentityCode::new(2, 2).unwrap());
        let c = ConcatenatedCode::new(outer.clone(), inner).unwrap();
        for m in all_messages(&c.spec()) {
            let outer_msg: Vec<usize> = m.chunks(2).map(|d| d[0] * 2 + d[1]).collect();
            let expect: Vec<usize> = outer
                .encode(&outer_msg)
                .unwrap()
                .into_iter()
                .flat_map(|s| [s / 2, s % 2])
                .collect();
            let cw = c.encode(&m).unwrap();
            assert_eq!(cw, expect);
            assert_eq!(c.decode(&cw).unwrap(), Some(m));
        }
    }

    #[test]
    fn alphabet_mismatch() {
        let outer = Arc::new(ReedSolomon::new(8, 4, 2).unwrap());
        let inner = Arc::new(IdentityCode::new(2, 2).unwrap());
        assert!(matches!(ConcatenatedCode::new(outer, inner), Err(CodeError::AlphabetMismatch(_))));
    }
}
