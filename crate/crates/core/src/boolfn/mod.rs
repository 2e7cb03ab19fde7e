//! Partial Boolean functions over a finite alphabet `[m]`, the `x∘π` action on
//! strings, and symmetry checking against a [`GroupAction`].

mod zoo;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{GroupAction, Permutation};

pub(crate) use zoo::small_range_words;
pub use zoo::{
    and_fn, collision, constant_fn, distinguishing_fn, for_compose_triv, forrelation_decision,
    forrelation_sum, simon_decision, triv, xor_fn, Theta,
};

/// A string over `[m]`, symbols 0-based.
pub type Word = Vec<usize>;

/// Explicit tables larger than this must use predicate form.
pub const TABLE_CAP: usize = 1_000_000;

const SYMBOLS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoolFnError {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("degree mismatch: function has length {n}, group has degree {degree}")]
    DegreeMismatch { n: usize, degree: usize },
    #[error("{0}")]
    BadShape(String),
    #[error("enumeration of {size} strings exceeds the cap of {cap}")]
    TooLarge { size: u128, cap: usize },
    #[error("symbol {symbol} outside the alphabet of size {m}")]
    SymbolOutOfRange { symbol: usize, m: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl BoolFnError {
    pub fn name(&self) -> &'static str {
        match self {
            BoolFnError::LengthMismatch { .. } => "LengthMismatch",
            BoolFnError::DegreeMismatch { .. } => "DegreeMismatch",
            BoolFnError::BadShape(_) => "BadShape",
            BoolFnError::TooLarge { .. } => "TooLarge",
            BoolFnError::SymbolOutOfRange { .. } => "SymbolOutOfRange",
            BoolFnError::Parse(_) => "Parse",
        }
    }
}

/// `(x∘π)_i = x_{π(i)}`. `pi` may be any map `[n] → [n]`, bijective or not.
pub fn apply_perm(x: &[usize], pi: &[usize]) -> Result<Word, BoolFnError> {
    if x.len() != pi.len() {
        return Err(BoolFnError::LengthMismatch {
            expected: x.len(),
            found: pi.len(),
        });
    }
    pi.iter()
        .map(|&j| {
            x.get(j).copied().ok_or(BoolFnError::LengthMismatch {
                expected: x.len(),
                found: j + 1,
            })
        })
        .collect()
}

/// Renders a word with digits then lowercase letters (alphabets up to 36).
pub fn format_word(x: &[usize]) -> String {
    x.iter()
        .map(|&s| {
            SYMBOLS
                .get(s)
                .map(|&c| c as char)
                .unwrap_or('?')
        })
        .collect()
}

pub fn parse_word(s: &str, m: usize) -> Result<Word, BoolFnError> {
    s.chars()
        .map(|c| {
            let v = c
                .to_digit(36)
                .ok_or_else(|| BoolFnError::Parse(format!("bad symbol {c:?} in {s:?}")))?
                as usize;
            if v >= m {
                return Err(BoolFnError::SymbolOutOfRange { symbol: v, m });
            }
            Ok(v)
        })
        .collect()
}

/// Every word of `[m]^n` in lexicographic order.
pub fn all_words(n: usize, m: usize, cap: usize) -> Result<Vec<Word>, BoolFnError> {
    let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(BoolFnError::TooLarge { size, cap });
    }
    let mut out = Vec::with_capacity(size as usize);
    if m == 0 && n > 0 {
        return Ok(out);
    }
    let mut cur = vec![0usize; n];
    for _ in 0..size {
        out.push(cur.clone());
        for pos in (0..n).rev() {
            cur[pos] += 1;
            if cur[pos] < m {
                break;
            }
            cur[pos] = 0;
        }
    }
    Ok(out)
}

type Predicate = Arc<dyn Fn(&[usize]) -> Option<bool> + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Table(BTreeMap<Word, bool>),
    Predicate(Predicate),
}

/// `f : Dom(f) ⊆ [m]^n → {0,1}`.
#[derive(Clone)]
pub struct PartialFn {
    name: String,
    n: usize,
    m: usize,
    repr: Repr,
}

impl fmt::Debug for PartialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let repr = match &self.repr {
            Repr::Table(t) => format!("table({})", t.len()),
            Repr::Predicate(_) => "predicate".to_string(),
        };
        write!(f, "PartialFn({}, n={}, m={}, {repr})", self.name, self.n, self.m)
    }
}

impl PartialFn {
    pub fn from_table<I>(name: impl Into<String>, n: usize, m: usize, entries: I) -> Result<Self, BoolFnError>
    where
        I: IntoIterator<Item = (Word, bool)>,
    {
        if m == 0 {
            return Err(BoolFnError::BadShape("alphabet must be nonempty".into()));
        }
        let mut table = BTreeMap::new();
        for (x, v) in entries {
            check_word(&x, n, m)?;
            if let Some(old) = table.insert(x.clone(), v) {
                if old != v {
                    return Err(BoolFnError::BadShape(format!(
                        "conflicting values for {}",
                        format_word(&x)
                    )));
                }
            }
            if table.len() > TABLE_CAP {
                return Err(BoolFnError::TooLarge {
                    size: table.len() as u128,
                    cap: TABLE_CAP,
                });
            }
        }
        Ok(PartialFn {
            name: name.into(),
            n,
            m,
            repr: Repr::Table(table),
        })
    }

    /// Structured family given by `x ↦ Some(f(x))` on the promise and `None`
    /// off it.
    pub fn from_predicate<F>(name: impl Into<String>, n: usize, m: usize, pred: F) -> Self
    where
        F: Fn(&[usize]) -> Option<bool> + Send + Sync + 'static,
    {
        PartialFn {
            name: name.into(),
            n,
            m,
            repr: Repr::Predicate(Arc::new(pred)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_table(&self) -> bool {
        matches!(self.repr, Repr::Table(_))
    }

    /// `Some(f(x))` for `x ∈ Dom(f)`, `None` otherwise (including wrong
    /// length or out-of-alphabet symbols).
    pub fn eval(&self, x: &[usize]) -> Option<bool> {
        if x.len() != self.n || x.iter().any(|&s| s >= self.m) {
            return None;
        }
        match &self.repr {
            Repr::Table(t) => t.get(x).copied(),
            Repr::Predicate(p) => p(x),
        }
    }

    pub fn in_domain(&self, x: &[usize]) -> bool {
        self.eval(x).is_some()
    }

    /// Promise entries in lexicographic order. Predicate families are
    /// enumerated over `[m]^n`, subject to `cap`.
    pub fn entries_capped(&self, cap: usize) -> Result<Vec<(Word, bool)>, BoolFnError> {
        match &self.repr {
            Repr::Table(t) => Ok(t.iter().map(|(k, &v)| (k.clone(), v)).collect()),
            Repr::Predicate(p) => Ok(all_words(self.n, self.m, cap)?
                .into_iter()
                .filter_map(|x| p(&x).map(|v| (x, v)))
                .collect()),
        }
    }

    pub fn entries(&self) -> Result<Vec<(Word, bool)>, BoolFnError> {
        self.entries_capped(TABLE_CAP)
    }

    pub fn domain(&self) -> Result<Vec<Word>, BoolFnError> {
        Ok(self.entries()?.into_iter().map(|(x, _)| x).collect())
    }

    /// Converts predicate form to an explicit table.
    pub fn tabulate(&self, cap: usize) -> Result<PartialFn, BoolFnError> {
        let entries = self.entries_capped(cap)?;
        PartialFn::from_table(self.name.clone(), self.n, self.m, entries)
    }

    /// Same function on the sub-promise selected by `keep`.
    pub fn restrict<F: Fn(&[usize], bool) -> bool>(&self, keep: F) -> Result<PartialFn, BoolFnError> {
        let entries = self.entries()?.into_iter().filter(|(x, v)| keep(x, *v));
        PartialFn::from_table(format!("{}|restricted", self.name), self.n, self.m, entries)
    }

    /// `true` when `f` takes at most one value on its promise.
    pub fn is_constant(&self) -> Result<bool, BoolFnError> {
        let entries = self.entries()?;
        Ok(entries.windows(2).all(|w| w[0].1 == w[1].1))
    }

    pub fn to_json(&self) -> Result<FnJson, BoolFnError> {
        if self.m > SYMBOLS.len() {
            return Err(BoolFnError::BadShape(format!(
                "alphabet of size {} cannot be written as characters",
                self.m
            )));
        }
        Ok(FnJson {
            name: Some(self.name.clone()),
            n: self.n,
            m: self.m,
            entries: self
                .entries()?
                .into_iter()
                .map(|(x, v)| (format_word(&x), u8::from(v)))
                .collect(),
        })
    }

    pub fn from_json(j: &FnJson) -> Result<PartialFn, BoolFnError> {
        let entries = j
            .entries
            .iter()
            .map(|(s, v)| {
                let x = parse_word(s, j.m)?;
                match v {
                    0 => Ok((x, false)),
                    1 => Ok((x, true)),
                    _ => Err(BoolFnError::Parse(format!("value {v} is not a bit"))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let name = j.name.clone().unwrap_or_else(|| "file".into());
        PartialFn::from_table(name, j.n, j.m, entries)
    }

    pub fn from_json_str(s: &str) -> Result<PartialFn, BoolFnError> {
        let j: FnJson = serde_json::from_str(s).map_err(|e| BoolFnError::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}

fn check_word(x: &[usize], n: usize, m: usize) -> Result<(), BoolFnError> {
    if x.len() != n {
        return Err(BoolFnError::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    if let Some(&s) = x.iter().find(|&&s| s >= m) {
        return Err(BoolFnError::SymbolOutOfRange { symbol: s, m });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FnJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    pub m: usize,
    pub entries: Vec<(String, u8)>,
}

/// A promise input and generator whose composition breaks symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryWitness {
    pub x: Word,
    pub generator: Permutation,
}

impl SymmetryWitness {
    /// Re-checks that the witness is a genuine violation.
    pub fn is_violation(&self, f: &PartialFn) -> bool {
        let Some(fx) = f.eval(&self.x) else {
            return false;
        };
        match apply_perm(&self.x, self.generator.images()) {
            Ok(y) => f.eval(&y) != Some(fx),
            Err(_) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub symmetric: bool,
    pub witness: Option<SymmetryWitness>,
}

impl SymmetryReport {
    pub fn to_json(&self) -> serde_json::Value {
        match &self.witness {
            None => serde_json::json!({ "symmetric": self.symmetric }),
            Some(w) => serde_json::json!({
                "symmetric": self.symmetric,
                "witness": {
                    "x": format_word(&w.x),
                    "generator": w.generator.to_one_indexed(),
                }
            }),
        }
    }
}

/// Checks `x∘π ∈ Dom(f)` and `f(x∘π) = f(x)` for every promise input and
/// every generator. Generators suffice: the set of `π` satisfying the
/// condition is closed under composition, and for a finite group that also
/// gives inverses.
pub fn is_symmetric_under(f: &PartialFn, g: &GroupAction) -> Result<SymmetryReport, BoolFnError> {
    if g.degree() != f.n() {
        return Err(BoolFnError::DegreeMismatch {
            n: f.n(),
            degree: g.degree(),
        });
    }
    for (x, v) in f.entries()? {
        for pi in g.generators() {
            let y = apply_perm(&x, pi.images())?;
            if f.eval(&y) != Some(v) {
                return Ok(SymmetryReport {
                    symmetric: false,
                    witness: Some(SymmetryWitness {
                        x,
                        generator: pi.clone(),
                    }),
                });
            }
        }
    }
    Ok(SymmetryReport {
        symmetric: true,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_CLOSURE_CAP;

    #[test]
    fn apply_perm_examples() {
        let x = vec![0, 1, 2];
        assert_eq!(apply_perm(&x, &[0, 1, 2]).unwrap(), vec![0, 1, 2]);
        // π(1)=2, π(2)=3, π(3)=1 gives "bca"
        assert_eq!(apply_perm(&x, &[1, 2, 0]).unwrap(), vec![1, 2, 0]);
        assert_eq!(apply_perm(&x, &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        assert!(matches!(
            apply_perm(&x, &[0, 1]),
            Err(BoolFnError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn composition_convention_exhaustive() {
        // (x∘π)∘σ = x∘(π∘σ) over all of S_4 × S_4 and all x ∈ [3]^4
        let elems = GroupAction::symmetric(4).closure_elements(DEFAULT_CLOSURE_CAP).unwrap();
        for x in all_words(4, 3, 1000).unwrap() {
            for pi in &elems {
                let xp = apply_perm(&x, pi.images()).unwrap();
                for sigma in &elems {
                    let lhs = apply_perm(&xp, sigma.images()).unwrap();
                    let rhs = apply_perm(&x, pi.compose(sigma).images()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn asymmetric_witness() {
        let f = PartialFn::from_table("t", 2, 2, vec![(vec![0, 1], false), (vec![1, 0], true)]).unwrap();
        let swap = GroupAction::new(2, vec![Permutation::from_one_indexed(&[2, 1]).unwrap()]).unwrap();
        let rep = is_symmetric_under(&f, &swap).unwrap();
        assert!(!rep.symmetric);
        let w = rep.witness.unwrap();
        assert_eq!(w.x, vec![0, 1]);
        assert!(w.is_violation(&f));
    }

    #[test]
    fn degree_mismatch() {
        let f = triv(3).unwrap();
        assert!(matches!(
            is_symmetric_under(&f, &GroupAction::symmetric(4)),
            Err(BoolFnError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let f = collision(4, 2).unwrap();
        let j = serde_json::to_string(&f.to_json().unwrap()).unwrap();
        let g = PartialFn::from_json_str(&j).unwrap();
        assert_eq!(f.entries().unwrap(), g.entries().unwrap());
        assert!(PartialFn::from_json_str(r#"{"n":2,"m":2,"entries":[["02",1]]}"#).is_err());
        assert!(PartialFn::from_json_str(r#"{"n":2,"m":2,"entries":[["01",1],["01",0]]}"#).is_err());
    }

    #[test]
    fn words_format_and_parse() {
        let x = vec![0, 9, 10, 35];
        assert_eq!(format_word(&x), "09az");
        assert_eq!(parse_word("09az", 36).unwrap(), x);
        assert_eq!(all_words(2, 3, 100).unwrap().len(), 9);
        assert!(all_words(10, 10, 1000).is_err());
    }

    #[test]
    fn predicate_matches_table() {
        let p = PartialFn::from_predicate("pred", 3, 2, |x| Some(x.iter().sum::<usize>() % 2 == 1));
        let t = p.tabulate(100).unwrap();
        assert_eq!(t.entries().unwrap(), xor_fn(3).unwrap().entries().unwrap());
    }
}
