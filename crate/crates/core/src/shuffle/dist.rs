use std::collections::BTreeMap;

use num::{BigRational, One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use super::SimError;
use crate::boolfn::{apply_perm, format_word, parse_word, Word};
use crate::perm::GroupAction;

/// Exact finite distribution over words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDistribution {
    weights: BTreeMap<Word, BigRational>,
}

impl FiniteDistribution {
    /// Zero weights are dropped; the rest must be positive and sum to 1.
    pub fn new<I: IntoIterator<Item = (Word, BigRational)>>(items: I) -> Result<Self, SimError> {
        let mut weights: BTreeMap<Word, BigRational> = BTreeMap::new();
        for (x, w) in items {
            if w.is_negative() {
                return Err(SimError::NotDistribution(format!(
                    "negative weight {w} on {}",
                    format_word(&x)
                )));
            }
            *weights.entry(x).or_insert_with(BigRational::zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        let total: BigRational = weights.values().sum();
        if !total.is_one() {
            return Err(SimError::NotDistribution(format!("weights sum to {total}")));
        }
        Ok(FiniteDistribution { weights })
    }

    pub fn point(x: Word) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert(x, BigRational::one());
        FiniteDistribution { weights }
    }

    pub fn uniform<I: IntoIterator<Item = Word>>(support: I) -> Result<Self, SimError> {
        let support: Vec<Word> = support.into_iter().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        if support.is_empty() {
            return Err(SimError::NotDistribution("empty support".into()));
        }
        let w = BigRational::new(1.into(), support.len().into());
        Self::new(support.into_iter().map(|x| (x, w.clone())))
    }

    pub fn weight(&self, x: &[usize]) -> BigRational {
        self.weights.get(x).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &Word> {
        self.weights.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.weights.iter()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Draws a word. Weights are converted to `f64` for the draw only.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        let keys: Vec<&Word> = self.weights.keys().collect();
        let ws: Vec<f64> = self
            .weights
            .values()
            .map(|w| w.to_f64().unwrap_or(0.0))
            .collect();
        let idx = WeightedIndex::new(&ws).expect("positive weights");
        keys[idx.sample(rng)].clone()
    }

    /// Distribution of `x∘π` for `x ~ self`.
    pub fn push_forward(&self, pi: &[usize]) -> Result<Self, SimError> {
        let mut weights: BTreeMap<Word, BigRational> = BTreeMap::new();
        for (x, w) in &self.weights {
            let y = apply_perm(x, pi)?;
            *weights.entry(y).or_insert_with(BigRational::zero) += w;
        }
        Ok(FiniteDistribution { weights })
    }

    /// Exact check that composing with every generator leaves the
    /// distribution unchanged.
    pub fn is_invariant_under(&self, g: &GroupAction) -> Result<bool, SimError> {
        for pi in g.generators() {
            if &self.push_forward(pi.images())? != self {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<(String, String)> = self
            .weights
            .iter()
            .map(|(x, w)| (format_word(x), w.to_string()))
            .collect();
        serde_json::to_value(rows).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value, m: usize) -> Result<Self, SimError> {
        let rows: Vec<(String, String)> =
            serde_json::from_value(v.clone()).map_err(|e| SimError::Parse(e.to_string()))?;
        let items = rows
            .into_iter()
            .map(|(x, w)| {
                let x = parse_word(&x, m)?;
                let w: BigRational = w.parse().map_err(|_| SimError::Parse(format!("bad weight {w:?}")))?;
                Ok((x, w))
            })
            .collect::<Result<Vec<_>, SimError>>()?;
        Self::new(items)
    }
}

/// Distribution of `s∘π` with `s ~ ν` and `π` uniform over `G`, computed
/// exactly over the closure of `G`.
pub fn symmetrize(nu: &FiniteDistribution, g: &GroupAction, cap: usize) -> Result<FiniteDistribution, SimError> {
    let elems = g.closure_elements(cap)?;
    let share = BigRational::new(1.into(), elems.len().into());
    let mut weights: BTreeMap<Word, BigRational> = BTreeMap::new();
    for (x, w) in nu.iter() {
        if x.len() != g.degree() {
            return Err(SimError::ShapeMismatch(format!(
                "word length {} vs degree {}",
                x.len(),
                g.degree()
            )));
        }
        let part = w * &share;
        for pi in &elems {
            let y = apply_perm(x, pi.images())?;
            *weights.entry(y).or_insert_with(BigRational::zero) += &part;
        }
    }
    Ok(FiniteDistribution { weights })
}

/// Monte Carlo symmetrization for groups beyond the closure cap: the
/// empirical distribution of `samples` draws of `s∘π`.
pub fn symmetrize_sampled<R: Rng + ?Sized>(
    nu: &FiniteDistribution,
    g: &GroupAction,
    samples: usize,
    rng: &mut R,
) -> Result<FiniteDistribution, SimError> {
    if samples == 0 {
        return Err(SimError::NotDistribution("no samples".into()));
    }
    let mut counts: BTreeMap<Word, usize> = BTreeMap::new();
    for _ in 0..samples {
        let x = nu.sample(rng);
        let pi = g.uniform_sample(rng);
        *counts.entry(apply_perm(&x, pi.images())?).or_default() += 1;
    }
    FiniteDistribution::new(
        counts
            .into_iter()
            .map(|(x, c)| (x, BigRational::new(c.into(), samples.into()))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::DEFAULT_CLOSURE_CAP;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(FiniteDistribution::new(vec![(vec![0], q(1, 2))]).is_err());
        assert!(FiniteDistribution::new(vec![(vec![0], q(3, 2)), (vec![1], q(-1, 2))]).is_err());
    }

    #[test]
    fn symmetrize_point_mass() {
        let d = symmetrize(
            &FiniteDistribution::point(vec![0, 0, 1]),
            &GroupAction::symmetric(3),
            DEFAULT_CLOSURE_CAP,
        )
        .unwrap();
        let expect = FiniteDistribution::new(vec![
            (vec![0, 0, 1], q(1, 3)),
            (vec![0, 1, 0], q(1, 3)),
            (vec![1, 0, 0], q(1, 3)),
        ])
        .unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn trivial_group_is_identity() {
        let nu = FiniteDistribution::new(vec![(vec![0, 1], q(1, 4)), (vec![1, 1], q(3, 4))]).unwrap();
        assert_eq!(symmetrize(&nu, &GroupAction::trivial(2), 10).unwrap(), nu);
    }

    #[test]
    fn uniform_over_group_is_fixed() {
        let g = GroupAction::alternating(4);
        let elems = g.closure_elements(DEFAULT_CLOSURE_CAP).unwrap();
        let u = FiniteDistribution::uniform(elems.iter().map(|p| p.images().to_vec())).unwrap();
        assert_eq!(symmetrize(&u, &g, DEFAULT_CLOSURE_CAP).unwrap(), u);
        assert!(u.is_invariant_under(&g).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let nu = FiniteDistribution::new(vec![(vec![0, 2], q(1, 3)), (vec![1, 1], q(2, 3))]).unwrap();
        assert_eq!(FiniteDistribution::from_json(&nu.to_json(), 3).unwrap(), nu);
    }

    #[test]
    fn sampled_symmetrization_is_close() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = symmetrize_sampled(
            &FiniteDistribution::point(vec![0, 0, 1]),
            &GroupAction::symmetric(3),
            6000,
            &mut rng,
        )
        .unwrap();
        assert_eq!(d.len(), 3);
        for (_, w) in d.iter() {
            assert!((w.to_f64().unwrap() - 1.0 / 3.0).abs() < 0.03);
        }
    }
}
