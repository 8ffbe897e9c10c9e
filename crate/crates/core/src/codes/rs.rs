//! Reed–Solomon codes with Berlekamp–Welch unique decoding.

use super::field::{Field, FieldElement};
use super::{certify, check_word, BlockCode, BlockCodeSpec, CodeError};

/// Evaluation code of polynomials of degree `< k` at the field elements
/// labelled `0, 1, .., n - 1`. Message digit `j` is the coefficient of `x^j`.
#[derive(Debug, Clone)]
pub struct ReedSolomon {
    field: Field,
    block_length: usize,
    message_length: usize,
}

impl ReedSolomon {
    pub fn new(field_order: usize, block_length: usize, message_length: usize) -> Result<Self, CodeError> {
        if block_length > field_order {
            return Err(CodeError::InvalidParameters(format!(
                "block length {block_length} exceeds field order {field_order}"
            )));
        }
        if message_length == 0 || message_length > block_length {
            return Err(CodeError::InvalidParameters(format!(
                "need 1 <= k <= n, got k = {message_length}, n = {block_length}"
            )));
        }
        let field = Field::new(field_order)?;
        Ok(ReedSolomon { field, block_length, message_length })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn evaluation_points(&self) -> impl Iterator<Item = FieldElement> {
        0..self.block_length as FieldElement
    }

    fn max_errors(&self) -> usize {
        (self.block_length - self.message_length) / 2
    }

    /// Berlekamp–Welch: find monic `E` of degree `e` and `Q` of degree
    /// `< e + k` with `Q(x_i) = y_i E(x_i)` for all `i`, then `P = Q / E`.
    fn berlekamp_welch(&self, word: &[FieldElement]) -> Option<Vec<FieldElement>> {
        let f = &self.field;
        let (n, k, e) = (self.block_length, self.message_length, self.max_errors());
        // unknowns: q_0 .. q_{e+k-1}, e_0 .. e_{e-1}
        let unknowns = 2 * e + k;
        let mut matrix = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for (x, &y) in self.evaluation_points().zip(word) {
            let mut row = vec![0; unknowns];
            let mut xp = 1;
            for j in 0..e + k {
                row[j] = xp;
                if j < e {
                    row[e + k + j] = f.neg(f.mul(y, xp));
                }
                xp = f.mul(xp, x);
            }
            // xp is now x^(e + k); we need y * x^e on the right-hand side
            matrix.push(row);
            rhs.push(f.mul(y, f.pow(x, e as u64)));
        }
        let sol = f.solve_linear(matrix, rhs)?;
        let q_poly = &sol[..e + k];
        let mut e_poly = sol[e + k..].to_vec();
        e_poly.push(1);
        let (quotient, remainder) = poly_divmod(f, q_poly, &e_poly);
        if remainder.iter().any(|&c| c != 0) {
            return None;
        }
        let mut message = quotient;
        message.resize(k.max(message.len()), 0);
        if message[k..].iter().any(|&c| c != 0) {
            return None;
        }
        message.truncate(k);
        Some(message)
    }
}

/// Polynomial long division over `f`; coefficients low to high. `divisor` must be monic.
fn poly_divmod(f: &Field, dividend: &[FieldElement], divisor: &[FieldElement]) -> (Vec<FieldElement>, Vec<FieldElement>) {
    let dlen = divisor.len();
    debug_assert_eq!(divisor.last(), Some(&1));
    let mut rem = dividend.to_vec();
    if rem.len() < dlen {
        return (vec![0], rem);
    }
    let mut quot = vec![0; rem.len() - dlen + 1];
    for shift in (0..quot.len()).rev() {
        let lead = rem[shift + dlen - 1];
        if lead == 0 {
            continue;
        }
        quot[shift] = lead;
        for (j, &d) in divisor.iter().enumerate() {
            rem[shift + j] = f.sub(rem[shift + j], f.mul(lead, d));
        }
    }
    rem.truncate(dlen - 1);
    (quot, rem)
}

impl BlockCode for ReedSolomon {
    fn spec(&self) -> BlockCodeSpec {
        BlockCodeSpec {
            alphabet_size: self.field.order(),
            block_length: self.block_length,
            message_length: self.message_length,
            min_distance: self.block_length - self.message_length + 1,
            decoding_radius: self.max_errors(),
        }
    }

    fn encode(&self, message: &[usize]) -> Result<Vec<usize>, CodeError> {
        check_word(message, self.message_length, self.field.order())?;
        let coeffs: Vec<FieldElement> = message.iter().map(|&d| d as FieldElement).collect();
        Ok(self
            .evaluation_points()
            .map(|x| self.field.eval_poly(&coeffs, x) as usize)
            .collect())
    }

    fn decode(&self, word: &[usize]) -> Result<Option<Vec<usize>>, CodeError> {
        check_word(word, self.block_length, self.field.order())?;
        let word_fe: Vec<FieldElement> = word.iter().map(|&d| d as FieldElement).collect();
        match self.berlekamp_welch(&word_fe) {
            Some(msg) => certify(self, word, msg.into_iter().map(|c| c as usize).collect()),
            None => Ok(None),
        }
    }

    fn describe(&self) -> String {
        format!(
            "RS(GF({}), n={}, k={})",
            self.field.order(),
            self.block_length,
            self.message_length
        )
    }
}
