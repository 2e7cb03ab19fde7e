//! Decision-tree oracles: exact deterministic query complexity and
//! distributional error by memoized search over promise subsets.

use std::collections::HashMap;

use num::{BigRational, Zero};
use serde_json::{json, Value};

use super::simplex::Scalar;
use super::{rational_string, OracleError};
use crate::boolfn::{format_word, PartialFn, Word};
use crate::shuffle::FiniteDistribution;

/// Cap on the promise size handled by the tree search.
pub const DOMAIN_CAP: usize = 200_000;
/// Cap on memoized search states.
pub const STATE_CAP: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(bool),
    /// Query `pos` (0-based); `children[a]` handles answer `a`.
    Query { pos: usize, children: Vec<DecisionTree> },
}

impl DecisionTree {
    pub fn eval(&self, x: &[usize]) -> bool {
        match self {
            DecisionTree::Leaf(v) => *v,
            DecisionTree::Query { pos, children } => children[x[*pos]].eval(x),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { children, .. } => 1 + children.iter().map(DecisionTree::depth).max().unwrap_or(0),
        }
    }

    /// Nested JSON with 1-based positions.
    pub fn to_json(&self) -> Value {
        match self {
            DecisionTree::Leaf(v) => json!(u8::from(*v)),
            DecisionTree::Query { pos, children } => json!({
                "query": pos + 1,
                "children": children.iter().map(DecisionTree::to_json).collect::<Vec<_>>(),
            }),
        }
    }
}

struct Promise {
    words: Vec<Word>,
    values: Vec<bool>,
    n: usize,
    m: usize,
}

impl Promise {
    fn new(f: &PartialFn) -> Result<Self, OracleError> {
        let entries = f.entries_capped(DOMAIN_CAP)?;
        let (words, values) = entries.into_iter().unzip();
        Ok(Promise {
            words,
            values,
            n: f.n(),
            m: f.m(),
        })
    }

    /// Splits `set` by the symbol at `pos`; `None` when the query is
    /// uninformative.
    fn split(&self, set: &[u32], pos: usize) -> Option<Vec<Vec<u32>>> {
        let mut parts = vec![Vec::new(); self.m];
        for &k in set {
            parts[self.words[k as usize][pos]].push(k);
        }
        if parts.iter().filter(|p| !p.is_empty()).count() < 2 {
            None
        } else {
            Some(parts)
        }
    }
}

struct DetSearch<'a> {
    p: &'a Promise,
    memo: HashMap<Vec<u32>, (usize, Option<usize>)>,
}

impl DetSearch<'_> {
    fn solve(&mut self, set: &[u32]) -> Result<usize, OracleError> {
        if let Some(&(d, _)) = self.memo.get(set) {
            return Ok(d);
        }
        if self.memo.len() >= STATE_CAP {
            return Err(OracleError::TooLarge(format!("more than {STATE_CAP} search states")));
        }
        let first = self.p.values[set[0] as usize];
        if set.iter().all(|&k| self.p.values[k as usize] == first) {
            self.memo.insert(set.to_vec(), (0, None));
            return Ok(0);
        }
        let mut best = usize::MAX;
        let mut best_pos = None;
        for pos in 0..self.p.n {
            let Some(parts) = self.p.split(set, pos) else {
                continue;
            };
            let mut worst = 0usize;
            for part in parts.iter().filter(|p| !p.is_empty()) {
                if worst + 1 >= best {
                    break;
                }
                worst = worst.max(self.solve(part)?);
            }
            if worst + 1 < best {
                best = worst + 1;
                best_pos = Some(pos);
            }
        }
        self.memo.insert(set.to_vec(), (best, best_pos));
        Ok(best)
    }

    fn tree(&self, set: &[u32]) -> DecisionTree {
        match self.memo.get(set).and_then(|e| e.1) {
            None => DecisionTree::Leaf(set.first().is_some_and(|&k| self.p.values[k as usize])),
            Some(pos) => {
                let parts = self.p.split(set, pos).expect("informative");
                DecisionTree::Query {
                    pos,
                    children: parts
                        .iter()
                        .map(|part| if part.is_empty() { DecisionTree::Leaf(false) } else { self.tree(part) })
                        .collect(),
                }
            }
        }
    }
}

/// Exact D(f) and an optimal tree. Ties break toward the lowest position.
pub fn det_query_complexity(f: &PartialFn) -> Result<(usize, DecisionTree), OracleError> {
    let p = Promise::new(f)?;
    if p.words.is_empty() {
        return Err(OracleError::EmptyPromise);
    }
    let all: Vec<u32> = (0..p.words.len() as u32).collect();
    let mut s = DetSearch {
        p: &p,
        memo: HashMap::new(),
    };
    let d = s.solve(&all)?;
    let tree = s.tree(&all);
    debug_assert_eq!(tree.depth(), d);
    Ok((d, tree))
}

/// Minimum μ-weighted error of depth-≤k trees, memoized on (subset, depth).
struct DistSearch<'a, T: Scalar> {
    p: &'a Promise,
    weight: Vec<T>,
    memo: HashMap<(Vec<u32>, usize), (T, Option<usize>)>,
}

impl<T: Scalar> DistSearch<'_, T> {
    fn leaf(&self, set: &[u32]) -> (T, bool) {
        let mut zero = T::scalar_zero();
        let mut one = T::scalar_zero();
        for &k in set {
            if self.p.values[k as usize] {
                one = one.add(&self.weight[k as usize]);
            } else {
                zero = zero.add(&self.weight[k as usize]);
            }
        }
        // label with the heavier side; ties go to 0
        if one.sub(&zero).is_pos() {
            (zero, true)
        } else {
            (one, false)
        }
    }

    fn solve(&mut self, set: &[u32], k: usize) -> Result<T, OracleError> {
        let key = (set.to_vec(), k);
        if let Some((v, _)) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        if self.memo.len() >= STATE_CAP {
            return Err(OracleError::TooLarge(format!("more than {STATE_CAP} search states")));
        }
        let (mut best, _) = self.leaf(set);
        let mut best_pos = None;
        if k > 0 && best.is_pos() {
            for pos in 0..self.p.n {
                let Some(parts) = self.p.split(set, pos) else {
                    continue;
                };
                let mut total = T::scalar_zero();
                for part in parts.iter().filter(|p| !p.is_empty()) {
                    total = total.add(&self.solve(part, k - 1)?);
                    if !total.sub(&best).is_neg() {
                        break;
                    }
                }
                if total.sub(&best).is_neg() {
                    best = total;
                    best_pos = Some(pos);
                }
            }
        }
        self.memo.insert(key, (best.clone(), best_pos));
        Ok(best)
    }

    fn tree(&self, set: &[u32], k: usize) -> DecisionTree {
        match self.memo.get(&(set.to_vec(), k)).and_then(|e| e.1) {
            None => DecisionTree::Leaf(self.leaf(set).1),
            Some(pos) => {
                let parts = self.p.split(set, pos).expect("informative");
                DecisionTree::Query {
                    pos,
                    children: parts
                        .iter()
                        .map(|part| if part.is_empty() { DecisionTree::Leaf(false) } else { self.tree(part, k - 1) })
                        .collect(),
                }
            }
        }
    }
}

fn weights_on_promise(p: &Promise, mu: &FiniteDistribution) -> Result<Vec<BigRational>, OracleError> {
    let index: HashMap<&[usize], usize> = p.words.iter().enumerate().map(|(k, w)| (w.as_slice(), k)).collect();
    let mut w = vec![BigRational::zero(); p.words.len()];
    for (x, v) in mu.iter() {
        let k = index.get(x.as_slice()).ok_or_else(|| {
            OracleError::BadShape(format!("distribution weight on {} outside the promise", format_word(x)))
        })?;
        w[*k] = v.clone();
    }
    Ok(w)
}

/// Least μ-average error over deterministic trees of depth ≤ k, with an
/// optimal tree.
pub fn min_error_at_depth(
    f: &PartialFn,
    mu: &FiniteDistribution,
    k: usize,
) -> Result<(BigRational, DecisionTree), OracleError> {
    let p = Promise::new(f)?;
    let weight = weights_on_promise(&p, mu)?;
    let support: Vec<u32> = (0..p.words.len() as u32).filter(|&i| !weight[i as usize].is_zero()).collect();
    let mut s = DistSearch {
        p: &p,
        weight,
        memo: HashMap::new(),
    };
    let e = s.solve(&support, k)?;
    Ok((e, s.tree(&support, k)))
}

/// Least depth k whose best tree has μ-average error ≤ ε.
pub fn distributional_rand_complexity(
    f: &PartialFn,
    mu: &FiniteDistribution,
    eps: &BigRational,
) -> Result<usize, OracleError> {
    let p = Promise::new(f)?;
    let weight = weights_on_promise(&p, mu)?;
    let support: Vec<u32> = (0..p.words.len() as u32).filter(|&i| !weight[i as usize].is_zero()).collect();
    let mut s = DistSearch {
        p: &p,
        weight,
        memo: HashMap::new(),
    };
    for k in 0..=p.n {
        if &s.solve(&support, k)? <= eps {
            return Ok(k);
        }
    }
    Err(OracleError::CertificateRejected("error stays above epsilon at full depth".into()))
}

/// A depth-`budget` hard distribution and the exact error every depth-budget
/// tree incurs on it.
#[derive(Clone, Debug)]
pub struct DpHardDistribution {
    pub budget: usize,
    pub distribution: FiniteDistribution,
    pub error: BigRational,
    pub tree: DecisionTree,
    pub iterations: usize,
}

impl DpHardDistribution {
    pub fn to_json(&self) -> Value {
        json!({
            "budget": self.budget,
            "kind": "dp",
            "error": rational_string(&self.error),
            "distribution": self.distribution.to_json(),
            "best_tree": self.tree.to_json(),
            "iterations": self.iterations,
        })
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        css += ui;
        let t = (css - 1.0) / (i as f64 + 1.0);
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Supergradient ascent on μ ↦ (least error of depth-budget trees under μ),
/// then rounding to a rational μ whose value is recomputed exactly.
pub fn hard_distribution_dp(f: &PartialFn, budget: usize, iterations: usize) -> Result<DpHardDistribution, OracleError> {
    let p = Promise::new(f)?;
    let len = p.words.len();
    if len == 0 {
        return Err(OracleError::EmptyPromise);
    }
    let all: Vec<u32> = (0..len as u32).collect();
    let mut mu = vec![1.0 / len as f64; len];
    let mut best = (f64::NEG_INFINITY, mu.clone());
    for it in 0..iterations {
        let mut s = DistSearch {
            p: &p,
            weight: mu.clone(),
            memo: HashMap::new(),
        };
        let value = s.solve(&all, budget)?;
        if value > best.0 {
            best = (value, mu.clone());
        }
        let tree = s.tree(&all, budget);
        let grad: Vec<f64> = (0..len)
            .map(|k| if tree.eval(&p.words[k]) != p.values[k] { 1.0 } else { 0.0 })
            .collect();
        let step = 0.5 / ((it + 1) as f64).sqrt();
        let moved: Vec<f64> = mu.iter().zip(&grad).map(|(m, g)| m + step * g).collect();
        mu = project_simplex(&moved);
    }
    let distribution = round_distribution(&p.words, &best.1)?;
    let (error, tree) = {
        let weight = weights_on_promise(&p, &distribution)?;
        let support: Vec<u32> = (0..len as u32).filter(|&i| !weight[i as usize].is_zero()).collect();
        let mut s = DistSearch {
            p: &p,
            weight,
            memo: HashMap::new(),
        };
        let e = s.solve(&support, budget)?;
        (e, s.tree(&support, budget))
    };
    Ok(DpHardDistribution {
        budget,
        distribution,
        error,
        tree,
        iterations,
    })
}

const ROUND_DENOM: i64 = 10_000;

/// Rounds float weights to multiples of 1/10000 summing to exactly 1.
fn round_distribution(words: &[Word], mu: &[f64]) -> Result<FiniteDistribution, OracleError> {
    let mut units: Vec<i64> = mu.iter().map(|&w| (w * ROUND_DENOM as f64).round() as i64).collect();
    let diff = ROUND_DENOM - units.iter().sum::<i64>();
    let top = (0..units.len()).max_by_key(|&k| (units[k], std::cmp::Reverse(k))).expect("nonempty");
    units[top] += diff;
    FiniteDistribution::new(
        words
            .iter()
            .zip(units)
            .filter(|(_, u)| *u > 0)
            .map(|(w, u)| (w.clone(), BigRational::new(u.into(), ROUND_DENOM.into()))),
    )
    .map_err(|e| OracleError::CertificateRejected(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{and_fn, constant_fn, distinguishing_fn, triv, xor_fn};
    use crate::perm::GroupAction;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn small_deterministic_values() {
        assert_eq!(det_query_complexity(&constant_fn(3, 2, true).unwrap()).unwrap().0, 0);
        assert_eq!(det_query_complexity(&triv(4).unwrap()).unwrap().0, 1);
        assert_eq!(det_query_complexity(&and_fn(2).unwrap()).unwrap().0, 2);
        assert_eq!(det_query_complexity(&xor_fn(3).unwrap()).unwrap().0, 3);
        let f = distinguishing_fn(&GroupAction::symmetric(3), 1).unwrap();
        let (d, tree) = det_query_complexity(&f).unwrap();
        assert_eq!(d, 2);
        for (x, v) in f.entries().unwrap() {
            assert_eq!(tree.eval(&x), v);
        }
    }

    #[test]
    fn distributional_values() {
        let f = triv(3).unwrap();
        let mu = FiniteDistribution::uniform(vec![vec![0, 0, 0], vec![1, 1, 1]]).unwrap();
        assert_eq!(distributional_rand_complexity(&f, &mu, &q(0, 1)).unwrap(), 1);
        assert_eq!(distributional_rand_complexity(&f, &mu, &q(1, 2)).unwrap(), 0);
        let (e, _) = min_error_at_depth(&f, &mu, 0).unwrap();
        assert_eq!(e, q(1, 2));
    }

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-12));
        let p = project_simplex(&[2.0, 0.0]);
        assert_eq!(p, vec![1.0, 0.0]);
    }

    #[test]
    fn dp_hard_distribution_is_certified() {
        let f = xor_fn(2).unwrap();
        let h = hard_distribution_dp(&f, 1, 50).unwrap();
        let (e, _) = min_error_at_depth(&f, &h.distribution, 1).unwrap();
        assert_eq!(e, h.error);
        // uniform is optimal for XOR_2 at depth 1: error 1/2
        assert!(h.error > q(2, 5));
    }
}
