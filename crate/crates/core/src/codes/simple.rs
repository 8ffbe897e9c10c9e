use super::{certify, check_word, BlockCode, BlockCodeSpec, CodeError};

/// Repeats a single digit `block_length` times; decodes by majority vote.
#[derive(Debug, Clone)]
pub struct RepetitionCode {
    alphabet: usize,
    block_length: usize,
}

impl RepetitionCode {
    pub fn new(alphabet: usize, block_length: usize) -> Result<Self, CodeError> {
        if alphabet < 2 || block_length == 0 {
            return Err(CodeError::InvalidParameters(format!(
                "repetition code needs alphabet >= 2 and length >= 1, got {alphabet}, {block_length}"
            )));
        }
        Ok(RepetitionCode { alphabet, block_length })
    }
}

impl BlockCode for RepetitionCode {
    fn spec(&self) -> BlockCodeSpec {
        BlockCodeSpec {
            alphabet_size: self.alphabet,
            block_length: self.block_length,
            message_length: 1,
            min_distance: self.block_length,
            decoding_radius: (self.block_length - 1) / 2,
        }
    }

    fn encode(&self, message: &[usize]) -> Result<Vec<usize>, CodeError> {
        check_word(message, 1, self.alphabet)?;
        Ok(vec![message[0]; self.block_length])
    }

    fn decode(&self, word: &[usize]) -> Result<Option<Vec<usize>>, CodeError> {
        check_word(word, self.block_length, self.alphabet)?;
        let mut counts = vec![0usize; self.alphabet];
        for &d in word {
            counts[d] += 1;
        }
        // first maximum wins ties
        let best = (0..self.alphabet).fold(0, |b, d| if counts[d] > counts[b] { d } else { b });
        certify(self, word, vec![best])
    }

    fn describe(&self) -> String {
        format!("Rep(q={}, n={})", self.alphabet, self.block_length)
    }
}

/// The trivial code: codeword = message.
#[derive(Debug, Clone)]
pub struct IdentityCode {
    alphabet: usize,
    length: usize,
}

impl IdentityCode {
    pub fn new(alphabet: usize, length: usize) -> Result<Self, CodeError> {
        if alphabet < 2 || length == 0 {
            return Err(CodeError::InvalidParameters(format!(
                "identity code needs alphabet >= 2 and length >= 1, got {alphabet}, {length}"
            )));
        }
        Ok(IdentityCode { alphabet, length })
    }
}

impl BlockCode for IdentityCode {
    fn spec(&self) -> BlockCodeSpec {
        BlockCodeSpec {
            alphabet_size: self.alphabet,
            block_length: self.length,
            message_length: self.length,
            min_distance: 1,
            decoding_radius: 0,
        }
    }

    fn encode(&self, message: &[usize]) -> Result<Vec<usize>, CodeError> {
        check_word(message, self.length, self.alphabet)?;
        Ok(message.to_vec())
    }

    fn decode(&self, word: &[usize]) -> Result<Option<Vec<usize>>, CodeError> {
        check_word(word, self.length, self.alphabet)?;
        Ok(Some(word.to_vec()))
    }

    fn describe(&self) -> String {
        format!("Id(q={}, n={})", self.alphabet, self.length)
    }
}
