//! Instance description: `key = value` file plus flag overrides, and the
//! parsers for ground-set and block-code sources.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::Path;
use std::sync::Arc;

use ulam_core::codes::{
    greedy_gv_code, read_explicit_code, BlockCode, ConcatenatedCode, IdentityCode, ReedSolomon, RepetitionCode,
};
use ulam_core::ground::{brute_force_ground_set, xor_ground_set, GroundSet, SearchOrder};
use ulam_core::UlamCode;

use crate::CliError;

/// Unresolved instance fields.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceConfig {
    pub q: Option<usize>,
    pub levels: Option<usize>,
    pub ground: Option<String>,
    pub code: Option<String>,
    pub seed: Option<u64>,
}

impl InstanceConfig {
    /// Reads `key = value` lines; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", lineno + 1)))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut cfg = InstanceConfig::default();
        for (k, v) in map {
            match k.as_str() {
                "q" => cfg.q = Some(parse_num(&v, "q")?),
                "levels" | "l" => cfg.levels = Some(parse_num(&v, "levels")?),
                "ground" => cfg.ground = Some(v),
                "code" => cfg.code = Some(v),
                "seed" => cfg.seed = Some(parse_num(&v, "seed")?),
                other => return Err(CliError::usage(format!("config: unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }

    /// Fields set in `other` win.
    pub fn overridden_by(self, other: InstanceConfig) -> Self {
        InstanceConfig {
            q: other.q.or(self.q),
            levels: other.levels.or(self.levels),
            ground: other.ground.or(self.ground),
            code: other.code.or(self.code),
            seed: other.seed.or(self.seed),
        }
    }

    pub fn q(&self) -> Result<usize, CliError> {
        self.q.ok_or_else(|| CliError::usage("missing --q"))
    }

    pub fn levels(&self) -> Result<usize, CliError> {
        self.levels.ok_or_else(|| CliError::usage("missing --levels"))
    }

    pub fn ground_set(&self) -> Result<GroundSet, CliError> {
        let spec = self.ground.as_deref().ok_or_else(|| CliError::usage("missing --ground"))?;
        parse_ground(self.q()?, spec, self.seed)
    }

    pub fn build(&self) -> Result<UlamCode, CliError> {
        let q = self.q()?;
        let levels = self.levels()?;
        let ground = self.ground_set()?;
        let spec = self.code.as_deref().ok_or_else(|| CliError::usage("missing --code"))?;
        let blocks = q
            .checked_pow(levels as u32)
            .map(|n| n / q)
            .ok_or_else(|| CliError::config(format!("q^levels = {q}^{levels} overflows")))?;
        let code = parse_code(spec, ground.len(), blocks)?;
        UlamCode::new(q, levels, ground, code).map_err(|e| CliError::config(e.to_string()))
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e| CliError::usage(format!("bad {what} {s:?}: {e}")))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>, CliError> {
    s.split(',').map(|t| parse_num(t, what)).collect()
}

fn bits(word: &str) -> Result<Vec<usize>, CliError> {
    word.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(CliError::usage(format!("bad bit string {word:?}"))),
        })
        .collect()
}

/// Ground-set sources:
///
/// * `xor:all`: XOR permutations of every binary word of length `log2 q`
/// * `xor:gv:D`: XOR permutations of the greedy binary code with distance `D`
/// * `xor:words:W1,W2,..`: XOR permutations of the given bit strings
/// * `bruteforce:L[:P]`: greedy lexicographic search for `P` (default: as
///   many as possible) permutations with pairwise LCS at most `L`; with a
///   seed, `bruteforce:L:P:BUDGET` samples `BUDGET` random candidates
/// * `file:PATH`: the ground-set text format
pub fn parse_ground(q: usize, spec: &str, seed: Option<u64>) -> Result<GroundSet, CliError> {
    let domain = |e: ulam_core::GroundSetError| CliError::config(e.to_string());
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    match kind {
        "xor" => {
            let r = q.trailing_zeros() as usize;
            let words: Vec<Vec<usize>> = if rest == "all" {
                (0..q).map(|g| (0..r).map(|b| (g >> (r - 1 - b)) & 1).collect()).collect()
            } else if let Some(d) = rest.strip_prefix("gv:") {
                let d = parse_num(d, "distance")?;
                greedy_gv_code(2, r, d).map_err(|e| CliError::config(e.to_string()))?.codewords().to_vec()
            } else if let Some(list) = rest.strip_prefix("words:") {
                list.split(',').map(bits).collect::<Result<_, _>>()?
            } else {
                return Err(CliError::usage(format!("unknown xor ground source {spec:?}")));
            };
            xor_ground_set(q, &words).map_err(domain)
        }
        "bruteforce" => {
            let parts: Vec<&str> = rest.split(':').collect();
            let max_lcs = parse_num(parts[0], "max_lcs")?;
            let target = match parts.get(1) {
                Some(p) => parse_num(p, "p")?,
                None => usize::MAX,
            };
            let order = match parts.get(2) {
                Some(b) => SearchOrder::Random {
                    seed: seed.ok_or_else(|| CliError::usage("random ground-set search needs --seed"))?,
                    budget: parse_num(b, "budget")?,
                },
                None => SearchOrder::Lexicographic,
            };
            match brute_force_ground_set(q, target, max_lcs, order) {
                // a maximal search always ends by exhausting the candidates
                Err(ulam_core::GroundSetError::BudgetExhausted { found, .. }) if target == usize::MAX => {
                    brute_force_ground_set(q, found, max_lcs, order).map_err(domain)
                }
                other => other.map_err(domain),
            }
        }
        "file" => {
            let f = File::open(rest).map_err(|e| CliError::io(Path::new(rest), e))?;
            let g = GroundSet::read_from(BufReader::new(f)).map_err(domain)?;
            if g.q() != q {
                return Err(CliError::config(format!("ground set permutes [{}] but q = {q}", g.q())));
            }
            Ok(g)
        }
        _ => Err(CliError::usage(format!("unknown ground source {spec:?}"))),
    }
}

/// Block-code sources, for shuffler alphabet `p` and length `n / q`:
///
/// * `rs:F,N,K`: Reed–Solomon over GF(F)
/// * `gv:D`: greedy code over `[p]` of length `n / q`, distance `D`
/// * `gv:Q,N,D`: greedy code with explicit parameters
/// * `rep` / `rep:Q,N`: repetition code
/// * `identity` / `identity:Q,N`: uncoded
/// * `concat:OUTER+INNER`: concatenation, both in explicit form
/// * `file:PATH`: explicit code in text form
pub fn parse_code(spec: &str, p: usize, blocks: usize) -> Result<Arc<dyn BlockCode>, CliError> {
    let domain = |e: ulam_core::CodeError| CliError::config(e.to_string());
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let code: Arc<dyn BlockCode> = match kind {
        "rs" => {
            let v = parse_list(rest, "rs parameter")?;
            let [f, n, k] = v[..] else {
                return Err(CliError::usage(format!("rs needs F,N,K, got {rest:?}")));
            };
            Arc::new(ReedSolomon::new(f, n, k).map_err(domain)?)
        }
        "gv" => {
            let v = parse_list(rest, "gv parameter")?;
            let (q, n, d) = match v[..] {
                [d] => (p, blocks, d),
                [q, n, d] => (q, n, d),
                _ => return Err(CliError::usage(format!("gv needs D or Q,N,D, got {rest:?}"))),
            };
            Arc::new(greedy_gv_code(q, n, d).map_err(domain)?)
        }
        "rep" | "identity" => {
            let (q, n) = if rest.is_empty() {
                (p, blocks)
            } else {
                let v = parse_list(rest, "code parameter")?;
                let [q, n] = v[..] else {
                    return Err(CliError::usage(format!("{kind} needs Q,N, got {rest:?}")));
                };
                (q, n)
            };
            if kind == "rep" {
                Arc::new(RepetitionCode::new(q, n).map_err(domain)?)
            } else {
                Arc::new(IdentityCode::new(q, n).map_err(domain)?)
            }
        }
        "concat" => {
            let (outer, inner) = rest
                .split_once('+')
                .ok_or_else(|| CliError::usage(format!("concat needs OUTER+INNER, got {rest:?}")))?;
            let outer = parse_code(outer, 0, 0)?;
            let inner = parse_code(inner, 0, 0)?;
            Arc::new(ConcatenatedCode::new(outer, inner).map_err(domain)?)
        }
        "file" => {
            let f = File::open(rest).map_err(|e| CliError::io(Path::new(rest), e))?;
            Arc::new(read_explicit_code(BufReader::new(f)).map_err(domain)?)
        }
        _ => return Err(CliError::usage(format!("unknown code source {spec:?}"))),
    };
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_and_overrides() {
        let cfg = InstanceConfig::parse("q = 4\nlevels=2 # two stages\n\nground = xor:all\ncode = gv:2\n").unwrap();
        assert_eq!(cfg.q, Some(4));
        assert_eq!(cfg.code.as_deref(), Some("gv:2"));
        let cfg = cfg.overridden_by(InstanceConfig { code: Some("gv:3".into()), ..Default::default() });
        assert_eq!(cfg.code.as_deref(), Some("gv:3"));
        assert_eq!(cfg.build().unwrap().shuffler_spec().min_distance, 3);
        assert!(InstanceConfig::parse("colour = red").is_err());
        assert!(InstanceConfig::parse("q 4").is_err());
    }

    #[test]
    fn ground_sources() {
        assert_eq!(parse_ground(4, "xor:all", None).unwrap().len(), 4);
        assert_eq!(parse_ground(8, "xor:gv:2", None).unwrap().certified_max_lcs(), 2);
        assert_eq!(parse_ground(2, "xor:words:0,1", None).unwrap().len(), 2);
        assert_eq!(parse_ground(3, "bruteforce:1", None).unwrap().len(), 2);
        assert_eq!(parse_ground(4, "bruteforce:2:3", None).unwrap().len(), 3);
        assert!(parse_ground(4, "bruteforce:2:3:100", None).is_err());
        assert_eq!(parse_ground(4, "bruteforce:2:3:100", Some(1)).unwrap().len(), 3);
        assert!(parse_ground(6, "xor:all", None).is_err());
        assert!(parse_ground(4, "nope", None).is_err());
    }

    #[test]
    fn code_sources() {
        assert_eq!(parse_code("rs:5,4,2", 5, 4).unwrap().spec().min_distance, 3);
        assert_eq!(parse_code("gv:2", 4, 4).unwrap().spec().block_length, 4);
        assert_eq!(parse_code("rep", 2, 4).unwrap().spec().min_distance, 4);
        assert_eq!(parse_code("identity:2,3", 0, 0).unwrap().spec().block_length, 3);
        let c = parse_code("concat:rs:4,4,2+identity:2,2", 0, 0).unwrap();
        assert_eq!((c.spec().alphabet_size, c.spec().block_length), (2, 8));
        assert!(parse_code("rs:4,4", 4, 4).is_err());
        assert!(parse_code("concat:rs:4,4,2", 0, 0).is_err());
    }
}
