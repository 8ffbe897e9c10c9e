//! Finite fields GF(p^m) with table-driven multiplication.
//!
//! An element is an integer in `[p^m]` whose base-p digits, least significant
//! first, are the coefficients of a polynomial over GF(p) reduced modulo a
//! primitive polynomial of degree `m`. For `m = 1` this is plain arithmetic
//! modulo `p`.

use super::CodeError;

/// Elements are represented by their integer label in `[order]`.
pub type FieldElement = u32;

const MAX_ORDER: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct Field {
    characteristic: u32,
    degree: u32,
    order: u32,
    /// exp[i] = g^i for i in [0, 2(order - 1))
    exp: Vec<FieldElement>,
    /// log[a] for a != 0
    log: Vec<u32>,
    /// Monic reduction polynomial, coefficients low to high, length degree + 1.
    modulus: Vec<u32>,
}

fn smallest_prime_factor(n: usize) -> usize {
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

impl Field {
    /// Builds GF(order). `order` must be a prime power no larger than 2^20.
    pub fn new(order: usize) -> Result<Self, CodeError> {
        if order < 2 || order > MAX_ORDER {
            return Err(CodeError::InvalidParameters(format!(
                "field order {order} outside [2, {MAX_ORDER}]"
            )));
        }
        let p = smallest_prime_factor(order);
        let mut degree = 0u32;
        let mut rest = order;
        while rest % p == 0 {
            rest /= p;
            degree += 1;
        }
        if rest != 1 {
            return Err(CodeError::InvalidParameters(format!(
                "field order {order} is not a prime power"
            )));
        }
        let (p, order32) = (p as u32, order as u32);

        let mut candidate = vec![0u32; degree as usize];
        loop {
            if candidate[0] != 0 {
                if let Some(exp) = primitive_powers(p, &candidate, order32) {
                    let mut modulus = candidate.clone();
                    modulus.push(1);
                    let mut log = vec![0u32; order];
                    for (i, &e) in exp.iter().enumerate().take(order - 1) {
                        log[e as usize] = i as u32;
                    }
                    return Ok(Field {
                        characteristic: p,
                        degree,
                        order: order32,
                        exp,
                        log,
                        modulus,
                    });
                }
            }
            if !advance(&mut candidate, p) {
                // Every finite field has a primitive polynomial, so this is unreachable.
                return Err(CodeError::InvalidParameters(format!(
                    "no primitive polynomial found for GF({order})"
                )));
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn characteristic(&self) -> usize {
        self.characteristic as usize
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    /// Reduction polynomial, low coefficient first (monic, so the last entry is 1).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        0
    }

    pub fn one(&self) -> FieldElement {
        1
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.characteristic;
        if self.degree == 1 {
            return (a + b) % p;
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.degree {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.characteristic;
        if p == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.degree {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a == 0 {
            return None;
        }
        let n = self.order - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Horner evaluation of `coeffs[0] + coeffs[1] x + ...`.
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Some solution of `matrix * x = rhs`, free variables set to zero.
    /// Returns `None` if the system is inconsistent.
    pub fn solve_linear(
        &self,
        mut matrix: Vec<Vec<FieldElement>>,
        mut rhs: Vec<FieldElement>,
    ) -> Option<Vec<FieldElement>> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pivot) = (r..rows).find(|&i| matrix[i][c] != 0) else {
                continue;
            };
            matrix.swap(r, pivot);
            rhs.swap(r, pivot);
            let inv = self.inv(matrix[r][c]).expect("pivot is nonzero");
            for v in matrix[r].iter_mut() {
                *v = self.mul(*v, inv);
            }
            rhs[r] = self.mul(rhs[r], inv);
            for i in 0..rows {
                if i != r && matrix[i][c] != 0 {
                    let factor = matrix[i][c];
                    for j in c..cols {
                        let t = self.mul(factor, matrix[r][j]);
                        matrix[i][j] = self.sub(matrix[i][j], t);
                    }
                    let t = self.mul(factor, rhs[r]);
                    rhs[i] = self.sub(rhs[i], t);
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
        if rhs[r..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut x = vec![0; cols];
        for (row, &c) in pivot_cols.iter().enumerate() {
            x[c] = rhs[row];
        }
        Some(x)
    }
}

fn advance(digits: &mut [u32], p: u32) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < p {
            return true;
        }
        *d = 0;
    }
    false
}

/// Powers of `x` modulo `x^m + low(x)` if `x` has order `order - 1`.
fn primitive_powers(p: u32, low: &[u32], order: u32) -> Option<Vec<FieldElement>> {
    let m = low.len();
    let n = (order - 1) as usize;
    let mut exp = Vec::with_capacity(2 * n);
    // coefficients of the current power, low to high
    let mut cur = vec![0u32; m];
    cur[0] = 1;
    if m == 1 {
        // GF(p): multiply by the root of x + low[0], i.e. g = -low[0]
        let g = (p - low[0]) % p;
        let mut v = 1u32;
        for i in 0..n {
            if i > 0 && v == 1 {
                return None;
            }
            exp.push(v);
            v = ((v as u64 * g as u64) % p as u64) as u32;
        }
        if v != 1 {
            return None;
        }
    } else {
        for i in 0..n {
            let label = cur.iter().rev().fold(0u32, |acc, &c| acc * p + c);
            if i > 0 && label == 1 {
                return None;
            }
            exp.push(label);
            // cur *= x, then reduce x^m = -low(x)
            let top = cur[m - 1];
            for j in (1..m).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..m {
                    cur[j] = ((cur[j] as u64 + (p - low[j]) as u64 * top as u64) % p as u64) as u32;
                }
            }
        }
        let label = cur.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        if label != 1 {
            return None;
        }
    }
    let head = exp.clone();
    exp.extend(head);
    Some(exp)
}
