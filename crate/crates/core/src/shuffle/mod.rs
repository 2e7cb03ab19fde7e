//! Small-range strings, exact distribution symmetrization, instrumented
//! query oracles, the shuffle simulation of symmetric-function evaluators,
//! and the query-translating reduction combinators.

mod dist;
mod oracle;
mod reduce;

use std::collections::BTreeSet;

use num::{BigUint, One, Zero};
use rand::seq::index;
use rand::Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::boolfn::{apply_perm, BoolFnError, Word};
use crate::perm::{GroupAction, PermError};

pub use dist::{symmetrize, symmetrize_sampled, FiniteDistribution};
pub use oracle::{
    read_all, FunctionEvaluator, MembershipTester, MemoOracle, Oracle, QueryAlgorithm, QueryOracle,
    ReplayOracle, ScriptedDistinguisher, Transcript, TranscriptEvent,
};
pub use reduce::{
    power_word, product_word, quotient_word, restrict_word, MergeReduction, PowerReduction,
    ProductReduction, QuotientReduction, RestrictReduction, Side,
};

/// Largest `n` for which `enumerate_small_range` walks `[n]^n`.
pub const MAX_ENUM_N: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("promise violated on {0}")]
    PromiseViolated(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("position {pos} out of range for length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("not a distribution: {0}")]
    NotDistribution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    BoolFn(#[from] BoolFnError),
}

impl SimError {
    pub fn name(&self) -> &'static str {
        match self {
            SimError::TooLarge(_) => "TooLarge",
            SimError::BadRange(_) => "BadRange",
            SimError::PromiseViolated(_) => "PromiseViolated",
            SimError::ShapeMismatch(_) => "ShapeMismatch",
            SimError::PositionOutOfRange { .. } => "PositionOutOfRange",
            SimError::ReplayMismatch(_) => "ReplayMismatch",
            SimError::NotDistribution(_) => "NotDistribution",
            SimError::Parse(_) => "Parse",
            SimError::Perm(e) => e.name(),
            SimError::BoolFn(e) => e.name(),
        }
    }
}

/// A string `α ∈ [n]^n` read as a map `[n] → [n]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShuffleMap {
    images: Word,
    range_size: usize,
}

impl ShuffleMap {
    pub fn new(images: Word) -> Result<Self, SimError> {
        let n = images.len();
        if let Some(&bad) = images.iter().find(|&&i| i >= n) {
            return Err(SimError::PositionOutOfRange { pos: bad + 1, len: n });
        }
        let range_size = images.iter().collect::<BTreeSet<_>>().len();
        Ok(ShuffleMap { images, range_size })
    }

    pub fn from_one_indexed(images: &[usize]) -> Result<Self, SimError> {
        if images.contains(&0) {
            return Err(SimError::PositionOutOfRange { pos: 0, len: images.len() });
        }
        Self::new(images.iter().map(|i| i - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn range_size(&self) -> usize {
        self.range_size
    }

    /// The distinct images, increasing.
    pub fn range(&self) -> Vec<usize> {
        self.images.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn in_small_range(&self, r: usize) -> bool {
        self.range_size <= r
    }

    pub fn to_one_indexed(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }
}

impl Serialize for ShuffleMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_one_indexed().serialize(s)
    }
}

fn check_range(n: usize, r: usize) -> Result<(), SimError> {
    if n == 0 || r == 0 || r > n {
        return Err(SimError::BadRange(format!("need 1 <= r <= n, got n = {n}, r = {r}")));
    }
    Ok(())
}

/// Every member of `D_{n,r}` once, in lexicographic order.
pub fn enumerate_small_range(n: usize, r: usize) -> Result<Vec<ShuffleMap>, SimError> {
    check_range(n, r)?;
    if n > MAX_ENUM_N {
        return Err(SimError::TooLarge(format!(
            "[{n}]^{n} exceeds the enumeration limit n <= {MAX_ENUM_N}; use count_small_range"
        )));
    }
    crate::boolfn::small_range_words(n, r)
        .into_iter()
        .map(ShuffleMap::new)
        .collect()
}

/// `|D_{n,r}| = Σ_{k ≤ r} C(n,k)·k!·S(n,k)`.
pub fn count_small_range(n: usize, r: usize) -> Result<BigUint, SimError> {
    check_range(n, r)?;
    // stirling[k] = S(i, k) for the current row i
    let mut stirling = vec![BigUint::zero(); n + 1];
    stirling[0] = BigUint::one();
    for i in 1..=n {
        for k in (1..=i).rev() {
            stirling[k] = &stirling[k - 1] + BigUint::from(k) * &stirling[k];
        }
        stirling[0] = BigUint::zero();
    }
    let mut total = BigUint::zero();
    let mut falling = BigUint::one();
    for k in 1..=r {
        // C(n,k)·k! = n(n−1)…(n−k+1)
        falling *= BigUint::from(n - k + 1);
        total += &falling * &stirling[k];
    }
    Ok(total)
}

/// How the shuffle map `α` is drawn.
#[derive(Clone, Copy, Debug)]
pub enum ShuffleMode<'a> {
    /// `r` distinct targets chosen uniformly, then each position maps
    /// uniformly among them.
    UniformBalanced,
    /// A draw from a supplied distribution over `D_{n,r}`.
    LpDual(&'a FiniteDistribution),
    /// A uniform member of the group.
    Bijection,
}

impl ShuffleMode<'_> {
    pub fn label(&self) -> &'static str {
        match self {
            ShuffleMode::UniformBalanced => "uniform-balanced",
            ShuffleMode::LpDual(_) => "lp-dual",
            ShuffleMode::Bijection => "bijection",
        }
    }
}

/// Draws `α` for the small-range modes. `Bijection` needs a group; see
/// [`shuffle_simulate`].
pub fn sample_small_range<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    mode: ShuffleMode<'_>,
    rng: &mut R,
) -> Result<ShuffleMap, SimError> {
    check_range(n, r)?;
    match mode {
        ShuffleMode::UniformBalanced => {
            let targets = index::sample(rng, n, r).into_vec();
            ShuffleMap::new((0..n).map(|_| targets[rng.gen_range(0..r)]).collect())
        }
        ShuffleMode::LpDual(dist) => {
            let alpha = ShuffleMap::new(dist.sample(rng))?;
            if alpha.len() != n {
                return Err(SimError::ShapeMismatch(format!(
                    "distribution over length {} vs n = {n}",
                    alpha.len()
                )));
            }
            if !alpha.in_small_range(r) {
                return Err(SimError::BadRange(format!(
                    "distribution has support with range {} > r = {r}",
                    alpha.range_size()
                )));
            }
            Ok(alpha)
        }
        ShuffleMode::Bijection => Err(SimError::BadRange(
            "bijection mode samples from a group; use shuffle_simulate".into(),
        )),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimOutcome {
    pub value: bool,
    pub queries_used: usize,
    pub alpha: ShuffleMap,
    pub mode: &'static str,
}

/// Samples `α`, reads `x` once at each position in `range(α)`, materializes
/// `x∘α` and runs `f_eval` on it without touching `x` again.
pub fn shuffle_simulate<R: Rng + ?Sized>(
    f_eval: &dyn QueryAlgorithm,
    g: &GroupAction,
    r: usize,
    mode: ShuffleMode<'_>,
    x: &mut dyn Oracle,
    rng: &mut R,
) -> Result<SimOutcome, SimError> {
    let n = g.degree();
    if x.len() != n || f_eval.input_len() != n {
        return Err(SimError::ShapeMismatch(format!(
            "group degree {n}, input length {}, evaluator length {}",
            x.len(),
            f_eval.input_len()
        )));
    }
    let alpha = match mode {
        ShuffleMode::Bijection => ShuffleMap::new(g.uniform_sample(rng).images().to_vec())?,
        _ => sample_small_range(n, r, mode, rng)?,
    };
    let mut known = vec![0usize; n];
    let positions = alpha.range();
    for &p in &positions {
        known[p] = x.query(p)?;
    }
    let y = apply_perm(&known, alpha.images())?;
    let value = f_eval.run(&mut QueryOracle::new(y))?;
    Ok(SimOutcome {
        value,
        queries_used: positions.len(),
        alpha,
        mode: mode.label(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{all_words, collision, triv};
    use num::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumerate_examples() {
        let d = enumerate_small_range(3, 1).unwrap();
        let words: Vec<_> = d.iter().map(|a| a.images().to_vec()).collect();
        assert_eq!(words, vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]]);
        assert_eq!(enumerate_small_range(3, 3).unwrap().len(), 27);
        assert!(enumerate_small_range(8, 2).is_err());
    }

    #[test]
    fn count_matches_brute_force() {
        for n in 1..=6 {
            for r in 1..=n {
                let brute = all_words(n, n, 100_000)
                    .unwrap()
                    .into_iter()
                    .filter(|x| x.iter().collect::<BTreeSet<_>>().len() <= r)
                    .count();
                assert_eq!(count_small_range(n, r).unwrap().to_usize().unwrap(), brute);
            }
        }
        assert_eq!(count_small_range(4, 2).unwrap(), BigUint::from(88u32));
    }

    #[test]
    fn uniform_balanced_stays_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let a = sample_small_range(4, 2, ShuffleMode::UniformBalanced, &mut rng).unwrap();
            assert!(a.range_size() <= 2);
        }
        let mut seen = BTreeSet::new();
        for _ in 0..500 {
            let a = sample_small_range(5, 1, ShuffleMode::UniformBalanced, &mut rng).unwrap();
            assert_eq!(a.range_size(), 1);
            seen.insert(a.images()[0]);
        }
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn simulate_triv_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = FunctionEvaluator { f: triv(4).unwrap() };
        let g = GroupAction::symmetric(4);
        let mut x = QueryOracle::new(vec![1, 1, 1, 1]);
        let out = shuffle_simulate(&f, &g, 1, ShuffleMode::UniformBalanced, &mut x, &mut rng).unwrap();
        assert!(out.value);
        assert_eq!((out.queries_used, x.count()), (1, 1));

        // α with range {2,3} on x = 0000
        let alpha = FiniteDistribution::point(vec![1, 2, 2, 1]);
        let mut x = QueryOracle::new(vec![0; 4]);
        let out = shuffle_simulate(&f, &g, 2, ShuffleMode::LpDual(&alpha), &mut x, &mut rng).unwrap();
        assert!(!out.value);
        assert_eq!(x.positions(), vec![1, 2]);
    }

    #[test]
    fn bijection_mode_recovers_collision() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = collision(6, 3).unwrap();
        let eval = FunctionEvaluator { f: f.clone() };
        let g = GroupAction::symmetric(6);
        for (x, v) in f.entries().unwrap().into_iter().step_by(37) {
            let mut o = QueryOracle::new(x);
            let out = shuffle_simulate(&eval, &g, 3, ShuffleMode::Bijection, &mut o, &mut rng).unwrap();
            assert_eq!(out.value, v);
            assert!(o.count() <= 6);
        }
    }

    #[test]
    fn promise_violation_is_surfaced() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = FunctionEvaluator { f: collision(4, 2).unwrap() };
        let alpha = FiniteDistribution::point(vec![0, 0, 0, 1]);
        let mut x = QueryOracle::new(vec![0, 1, 2, 3]);
        let err = shuffle_simulate(
            &f,
            &GroupAction::symmetric(4),
            2,
            ShuffleMode::LpDual(&alpha),
            &mut x,
            &mut rng,
        )
        .unwrap_err();
        assert_eq!(err.name(), "PromiseViolated");
    }

    #[test]
    fn bad_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_small_range(3, 0, ShuffleMode::UniformBalanced, &mut rng).is_err());
        assert!(sample_small_range(3, 4, ShuffleMode::UniformBalanced, &mut rng).is_err());
    }
}
