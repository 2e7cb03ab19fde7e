//! Permutation group actions on `[n]`.
//!
//! Points are 0-indexed internally; the JSON format and the CLI use 1-indexed
//! points. A [`GroupAction`] is stored by its generators and lazily builds a
//! [`StabilizerChain`] the first time order, membership or sampling is asked
//! for.

mod chain;
mod permutation;

use std::collections::{HashSet, VecDeque};
use std::sync::OnceLock;

use num::{BigRational, BigUint, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chain::StabilizerChain;
pub use permutation::Permutation;

pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image table {0:?} is not a bijection")]
    NotBijection(Vec<usize>),
    #[error("permutation of degree {found} used with an action of degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("point {point} is outside [1, {degree}]")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group closure exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("tuple {0:?} repeats an entry")]
    NotDistinct(Vec<usize>),
    #[error("tuples of different lengths ({0} vs {1})")]
    TupleLengthMismatch(usize, usize),
    #[error("{0}")]
    BadShape(String),
}

impl PermError {
    pub fn name(&self) -> &'static str {
        match self {
            PermError::NotBijection(_) => "NotBijection",
            PermError::DegreeMismatch { .. } => "DegreeMismatch",
            PermError::PointOutOfRange { .. } => "PointOutOfRange",
            PermError::CapExceeded { .. } => "CapExceeded",
            PermError::NotDistinct(_) => "NotDistinct",
            PermError::TupleLengthMismatch(..) => "TupleLengthMismatch",
            PermError::BadShape(_) => "BadShape",
        }
    }
}

/// A permutation group acting on `[n]`, given by generators.
#[derive(Clone, Debug)]
pub struct GroupAction {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabilizerChain>,
}

impl PartialEq for GroupAction {
    /// Equality of the generated groups (not of the generator lists).
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.order() == other.order()
            && other.generators.iter().all(|g| self.chain().contains(g))
    }
}

impl GroupAction {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::BadShape("group actions need a nonempty domain".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        Ok(GroupAction {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(n: usize) -> Self {
        GroupAction::new(n, Vec::new()).expect("n > 0")
    }

    /// `S_n`, generated by a transposition and an `n`-cycle.
    pub fn symmetric(n: usize) -> Self {
        if n < 2 {
            return Self::trivial(n.max(1));
        }
        let cycle: Vec<usize> = (0..n).collect();
        let gens = vec![
            Permutation::from_cycles(n, &[&[0, 1]]).unwrap(),
            Permutation::from_cycles(n, &[&cycle]).unwrap(),
        ];
        GroupAction::new(n, gens).unwrap()
    }

    /// `Z_n` acting by cyclic shifts `i -> i + 1 mod n`.
    pub fn cyclic(n: usize) -> Self {
        if n < 2 {
            return Self::trivial(n.max(1));
        }
        let cycle: Vec<usize> = (0..n).collect();
        GroupAction::new(n, vec![Permutation::from_cycles(n, &[&cycle]).unwrap()]).unwrap()
    }

    /// `A_n`, generated by the 3-cycles `(1 2 i)`.
    pub fn alternating(n: usize) -> Self {
        if n < 3 {
            return Self::trivial(n.max(1));
        }
        let gens = (2..n)
            .map(|i| Permutation::from_cycles(n, &[&[0, 1, i]]).unwrap())
            .collect();
        GroupAction::new(n, gens).unwrap()
    }

    /// `Z_2^{log n}` acting on `[n]` by flipping bits of the binary index:
    /// `i -> i xor 2^b`. `n` must be a power of two.
    pub fn bit_flip(n: usize) -> Result<Self, PermError> {
        let bits = log2_exact(n)?;
        let gens = (0..bits)
            .map(|b| Permutation::from_images_unchecked((0..n).map(|i| i ^ (1 << b)).collect()))
            .collect();
        GroupAction::new(n, gens)
    }

    /// `S_{log n}` acting on `[n]` by permuting the bits of the binary index.
    pub fn bit_permutation(n: usize) -> Result<Self, PermError> {
        let bits = log2_exact(n)?;
        let permute = |sigma: &[usize]| {
            let images = (0..n)
                .map(|i| {
                    (0..bits).fold(0usize, |acc, b| acc | (((i >> b) & 1) << sigma[b]))
                })
                .collect();
            Permutation::from_images_unchecked(images)
        };
        let mut gens = Vec::new();
        if bits >= 2 {
            let mut swap: Vec<usize> = (0..bits).collect();
            swap.swap(0, 1);
            gens.push(permute(&swap));
            let rotate: Vec<usize> = (0..bits).map(|b| (b + 1) % bits).collect();
            gens.push(permute(&rotate));
        }
        GroupAction::new(n, gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        self.chain
            .get_or_init(|| StabilizerChain::new(self.degree, &self.generators))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, pi: &Permutation) -> Result<bool, PermError> {
        self.check_degree(pi)?;
        Ok(self.chain().contains(pi))
    }

    fn check_degree(&self, pi: &Permutation) -> Result<(), PermError> {
        if pi.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                expected: self.degree,
                found: pi.degree(),
            });
        }
        Ok(())
    }

    fn check_point(&self, point: usize) -> Result<(), PermError> {
        if point >= self.degree {
            return Err(PermError::PointOutOfRange {
                point: point + 1,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// Every element of the group, sorted, by breadth-first closure under the
    /// generators. Fails once more than `cap` elements have been found.
    pub fn closure_elements(&self, cap: usize) -> Result<Vec<Permutation>, PermError> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(id.clone());
        queue.push_back(id);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.compose(&g);
                if !seen.contains(&h) {
                    if seen.len() >= cap {
                        return Err(PermError::CapExceeded { cap });
                    }
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        let mut out: Vec<Permutation> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// The orbit of `point`, sorted.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, PermError> {
        self.check_point(point)?;
        let mut seen = vec![false; self.degree];
        let mut stack = vec![point];
        seen[point] = true;
        while let Some(p) = stack.pop() {
            for g in &self.generators {
                let q = g.apply(p);
                if !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
        Ok((0..self.degree).filter(|&p| seen[p]).collect())
    }

    /// All orbits, each sorted, ordered by their least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if assigned[p] {
                continue;
            }
            let orbit = self.orbit(p).expect("in range");
            for &q in &orbit {
                assigned[q] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// `k`-transitivity. Builds a chain based at `1, ..., k` and checks that
    /// each successive point stabilizer is transitive on the remaining points,
    /// which is equivalent to `G^<k>` having a single orbit. `k > n` is
    /// reported as not transitive.
    pub fn is_k_transitive(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if k > self.degree {
            return false;
        }
        let prefix: Vec<usize> = (0..k).collect();
        let chain = StabilizerChain::with_base_prefix(self.degree, &self.generators, &prefix);
        chain
            .orbit_sizes()
            .iter()
            .take(k)
            .enumerate()
            .all(|(t, &size)| size == self.degree - t)
    }

    pub fn uniform_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        self.chain().sample(rng)
    }

    pub fn sample_seeded(&self, seed: u64) -> Permutation {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.uniform_sample(&mut rng)
    }

    fn check_tuples(&self, from: &[usize], to: &[usize]) -> Result<(), PermError> {
        if from.len() != to.len() {
            return Err(PermError::TupleLengthMismatch(from.len(), to.len()));
        }
        for t in [from, to] {
            for &p in t {
                self.check_point(p)?;
            }
            let distinct: HashSet<_> = t.iter().collect();
            if distinct.len() != t.len() {
                return Err(PermError::NotDistinct(t.iter().map(|p| p + 1).collect()));
            }
        }
        Ok(())
    }

    /// `Pr_{π←G}[π(from_t) = to_t for all t]`, exactly.
    ///
    /// The elements satisfying the condition form either the empty set or a
    /// coset of the pointwise stabilizer of `from`, so the probability is
    /// `1 / |from^G|` or 0. Both quantities come from a chain based at `from`.
    pub fn tuple_map_prob(&self, from: &[usize], to: &[usize]) -> Result<BigRational, PermError> {
        self.check_tuples(from, to)?;
        let chain = StabilizerChain::with_base_prefix(self.degree, &self.generators, from);
        if !chain.maps_prefix(from, to) {
            return Ok(BigRational::zero());
        }
        let tuple_orbit = chain
            .orbit_sizes()
            .iter()
            .take(from.len())
            .fold(BigUint::one(), |acc, &s| acc * BigUint::from(s));
        Ok(BigRational::new(1.into(), tuple_orbit.into()))
    }

    /// Same quantity as [`Self::tuple_map_prob`] by counting over the full
    /// element list.
    pub fn tuple_map_prob_by_enumeration(
        &self,
        from: &[usize],
        to: &[usize],
        cap: usize,
    ) -> Result<BigRational, PermError> {
        self.check_tuples(from, to)?;
        let elements = self.closure_elements(cap)?;
        let hits = elements
            .iter()
            .filter(|g| from.iter().zip(to).all(|(&i, &j)| g.apply(i) == j))
            .count();
        Ok(BigRational::new(hits.into(), elements.len().into()))
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            degree: self.degree,
            generators: self.generators.iter().map(|g| g.to_one_indexed()).collect(),
        }
    }
}

fn log2_exact(n: usize) -> Result<usize, PermError> {
    if n == 0 || !n.is_power_of_two() {
        return Err(PermError::BadShape(format!("{n} is not a power of two")));
    }
    Ok(n.trailing_zeros() as usize)
}

/// Explicit JSON group format: `{"degree": n, "generators": [[images...], ...]}`,
/// images 1-indexed.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupJson {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

/// Named shorthand: `{"kind": "symmetric", "n": 5}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NamedGroupJson {
    pub kind: String,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum GroupSpecJson {
    Explicit(GroupJson),
    Named(NamedGroupJson),
}

impl GroupSpecJson {
    pub fn build(&self) -> Result<GroupAction, PermError> {
        match self {
            GroupSpecJson::Explicit(g) => {
                let gens = g
                    .generators
                    .iter()
                    .map(|imgs| Permutation::from_one_indexed(imgs))
                    .collect::<Result<Vec<_>, _>>()?;
                GroupAction::new(g.degree, gens)
            }
            GroupSpecJson::Named(NamedGroupJson { kind, n }) => {
                if *n == 0 {
                    return Err(PermError::BadShape("n must be positive".into()));
                }
                match kind.as_str() {
                    "symmetric" => Ok(GroupAction::symmetric(*n)),
                    "cyclic" => Ok(GroupAction::cyclic(*n)),
                    "alternating" => Ok(GroupAction::alternating(*n)),
                    "trivial" => Ok(GroupAction::trivial(*n)),
                    other => Err(PermError::BadShape(format!("unknown group kind {other:?}"))),
                }
            }
        }
    }
}

impl GroupAction {
    pub fn from_json_str(s: &str) -> Result<Self, PermError> {
        let spec: GroupSpecJson =
            serde_json::from_str(s).map_err(|e| PermError::BadShape(e.to_string()))?;
        spec.build()
    }
}
