//! Reduction combinators. Each wraps a distinguisher for a transformed
//! action and runs it against an input for the original action, translating
//! every inner query through a view over the raw oracle.

use super::{Oracle, QueryAlgorithm, SimError};
use crate::boolfn::Word;
use crate::transforms::block_index;

impl<T: QueryAlgorithm + ?Sized> QueryAlgorithm for Box<T> {
    fn input_len(&self) -> usize {
        (**self).input_len()
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        (**self).run(oracle)
    }
}

fn check_len(what: &str, expected: usize, found: usize) -> Result<(), SimError> {
    if expected != found {
        return Err(SimError::ShapeMismatch(format!(
            "{what}: expected length {expected}, found {found}"
        )));
    }
    Ok(())
}

/// From a distinguisher on `[n]^ℓ` (the tuple-power domain) to one on `[n]`;
/// `ℓ` raw queries per inner query.
pub struct PowerReduction<A> {
    pub inner: A,
    pub n: usize,
    pub ell: usize,
}

struct PowerView<'a> {
    outer: &'a mut dyn Oracle,
    n: usize,
    ell: usize,
}

impl Oracle for PowerView<'_> {
    fn len(&self) -> usize {
        self.n.pow(self.ell as u32)
    }

    fn query(&mut self, pos: usize) -> Result<usize, SimError> {
        if pos >= self.len() {
            return Err(SimError::PositionOutOfRange { pos: pos + 1, len: self.len() });
        }
        let mut ans = 0;
        for c in 0..self.ell {
            let coord = (pos / self.n.pow((self.ell - 1 - c) as u32)) % self.n;
            ans = ans * self.n + self.outer.query(coord)?;
        }
        Ok(ans)
    }
}

impl<A: QueryAlgorithm> QueryAlgorithm for PowerReduction<A> {
    fn input_len(&self) -> usize {
        self.n
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        check_len("power inner", self.n.pow(self.ell as u32), self.inner.input_len())?;
        check_len("power outer", self.n, oracle.len())?;
        self.inner.run(&mut PowerView {
            outer: oracle,
            n: self.n,
            ell: self.ell,
        })
    }
}

/// `α^(ℓ)(i_1..i_ℓ) = (α(i_1)..α(i_ℓ))`, flattened lexicographically.
pub fn power_word(x: &[usize], ell: usize) -> Word {
    let n = x.len();
    (0..n.pow(ell as u32))
        .map(|t| {
            (0..ell).fold(0, |acc, c| {
                let coord = (t / n.pow((ell - 1 - c) as u32)) % n;
                acc * n + x[coord]
            })
        })
        .collect()
}

/// From a distinguisher on the blocks to one on `[n]`: block `t` is queried
/// at its first point, and the answer is the block containing the result.
pub struct QuotientReduction<A> {
    pub inner: A,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl<A: QueryAlgorithm> QuotientReduction<A> {
    pub fn new(inner: A, n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, SimError> {
        let block_of = block_index(n, &blocks).map_err(|e| SimError::ShapeMismatch(e.to_string()))?;
        Ok(QuotientReduction { inner, blocks, block_of })
    }
}

struct QuotientView<'a> {
    outer: &'a mut dyn Oracle,
    blocks: &'a [Vec<usize>],
    block_of: &'a [usize],
}

impl Oracle for QuotientView<'_> {
    fn len(&self) -> usize {
        self.blocks.len()
    }

    fn query(&mut self, pos: usize) -> Result<usize, SimError> {
        let rep = *self
            .blocks
            .get(pos)
            .and_then(|b| b.first())
            .ok_or(SimError::PositionOutOfRange { pos: pos + 1, len: self.blocks.len() })?;
        let a = self.outer.query(rep)?;
        Ok(self.block_of[a])
    }
}

impl<A: QueryAlgorithm> QueryAlgorithm for QuotientReduction<A> {
    fn input_len(&self) -> usize {
        self.block_of.len()
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        check_len("quotient inner", self.blocks.len(), self.inner.input_len())?;
        check_len("quotient outer", self.block_of.len(), oracle.len())?;
        self.inner.run(&mut QuotientView {
            outer: oracle,
            blocks: &self.blocks,
            block_of: &self.block_of,
        })
    }
}

pub fn quotient_word(x: &[usize], blocks: &[Vec<usize>]) -> Result<Word, SimError> {
    let block_of = block_index(x.len(), blocks).map_err(|e| SimError::ShapeMismatch(e.to_string()))?;
    Ok(blocks.iter().map(|b| block_of[x[b[0]]]).collect())
}

/// From a distinguisher on `[|S|]` to one on `[n]`: position `t` reads
/// `s_t`; answers are ranks in `S`, and answers outside `S` read as 0.
pub struct RestrictReduction<A> {
    pub inner: A,
    n: usize,
    set: Vec<usize>,
    rank: Vec<Option<usize>>,
}

impl<A: QueryAlgorithm> RestrictReduction<A> {
    pub fn new(inner: A, n: usize, set: &[usize]) -> Result<Self, SimError> {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() || set.iter().any(|&p| p >= n) {
            return Err(SimError::ShapeMismatch("restriction set must be a nonempty subset of [n]".into()));
        }
        let mut rank = vec![None; n];
        for (r, &p) in set.iter().enumerate() {
            rank[p] = Some(r);
        }
        Ok(RestrictReduction { inner, n, set, rank })
    }
}

struct RestrictView<'a> {
    outer: &'a mut dyn Oracle,
    set: &'a [usize],
    rank: &'a [Option<usize>],
}

impl Oracle for RestrictView<'_> {
    fn len(&self) -> usize {
        self.set.len()
    }

    fn query(&mut self, pos: usize) -> Result<usize, SimError> {
        let p = *self
            .set
            .get(pos)
            .ok_or(SimError::PositionOutOfRange { pos: pos + 1, len: self.set.len() })?;
        let a = self.outer.query(p)?;
        Ok(self.rank[a].unwrap_or(0))
    }
}

impl<A: QueryAlgorithm> QueryAlgorithm for RestrictReduction<A> {
    fn input_len(&self) -> usize {
        self.n
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        check_len("restrict inner", self.set.len(), self.inner.input_len())?;
        check_len("restrict outer", self.n, oracle.len())?;
        self.inner.run(&mut RestrictView {
            outer: oracle,
            set: &self.set,
            rank: &self.rank,
        })
    }
}

pub fn restrict_word(x: &[usize], set: &[usize]) -> Word {
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    set.iter()
        .map(|&p| set.iter().position(|&q| q == x[p]).unwrap_or(0))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    First,
    Second,
}

/// From a distinguisher for `G_1 × G_2` on `[n_1 n_2]` to one for a single
/// factor: the other factor's string is a fixed sample, and each inner query
/// costs one raw query on the live side.
pub struct ProductReduction<A> {
    pub inner: A,
    n1: usize,
    n2: usize,
    side: Side,
    fixed: Word,
}

impl<A: QueryAlgorithm> ProductReduction<A> {
    pub fn new(inner: A, n1: usize, n2: usize, side: Side, fixed: Word) -> Result<Self, SimError> {
        let other = match side {
            Side::First => n2,
            Side::Second => n1,
        };
        check_len("product fixed sample", other, fixed.len())?;
        if fixed.iter().any(|&s| s >= other) {
            return Err(SimError::ShapeMismatch("fixed sample has out-of-range symbols".into()));
        }
        Ok(ProductReduction { inner, n1, n2, side, fixed })
    }
}

struct ProductView<'a> {
    outer: &'a mut dyn Oracle,
    n1: usize,
    n2: usize,
    side: Side,
    fixed: &'a [usize],
}

impl Oracle for ProductView<'_> {
    fn len(&self) -> usize {
        self.n1 * self.n2
    }

    fn query(&mut self, pos: usize) -> Result<usize, SimError> {
        if pos >= self.len() {
            return Err(SimError::PositionOutOfRange { pos: pos + 1, len: self.len() });
        }
        let (k, l) = (pos / self.n2, pos % self.n2);
        let (a, b) = match self.side {
            Side::First => (self.outer.query(k)?, self.fixed[l]),
            Side::Second => (self.fixed[k], self.outer.query(l)?),
        };
        Ok(a * self.n2 + b)
    }
}

impl<A: QueryAlgorithm> QueryAlgorithm for ProductReduction<A> {
    fn input_len(&self) -> usize {
        match self.side {
            Side::First => self.n1,
            Side::Second => self.n2,
        }
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        check_len("product inner", self.n1 * self.n2, self.inner.input_len())?;
        check_len("product outer", self.input_len(), oracle.len())?;
        self.inner.run(&mut ProductView {
            outer: oracle,
            n1: self.n1,
            n2: self.n2,
            side: self.side,
            fixed: &self.fixed,
        })
    }
}

/// `(α_1, α_2)(k, l) = (α_1(k), α_2(l))` flattened as `k·n_2 + l`.
pub fn product_word(x1: &[usize], x2: &[usize]) -> Word {
    let n2 = x2.len();
    x1.iter()
        .flat_map(|&a| x2.iter().map(move |&b| a * n2 + b))
        .collect()
}

/// A distinguisher for a larger action `F ⊇ G` used unchanged for `G`.
pub struct MergeReduction<A> {
    pub inner: A,
}

impl<A: QueryAlgorithm> QueryAlgorithm for MergeReduction<A> {
    fn input_len(&self) -> usize {
        self.inner.input_len()
    }

    fn run(&self, oracle: &mut dyn Oracle) -> Result<bool, SimError> {
        check_len("merge", self.inner.input_len(), oracle.len())?;
        self.inner.run(oracle)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::all_words;
    use crate::perm::{GroupAction, DEFAULT_CLOSURE_CAP};
    use crate::shuffle::{MembershipTester, QueryOracle, ScriptedDistinguisher};
    use crate::transforms::{power_action, DEFAULT_DOMAIN_CAP};

    fn mock(len: usize, q: usize) -> ScriptedDistinguisher {
        ScriptedDistinguisher {
            len,
            positions: (0..q).map(|i| (i * 7 + 3) % len).collect(),
        }
    }

    #[test]
    fn power_overhead_is_ell() {
        for ell in [2usize, 3] {
            let red = PowerReduction { inner: mock(3usize.pow(ell as u32), 3), n: 3, ell };
            let mut o = QueryOracle::new(vec![2, 0, 1]);
            red.run(&mut o).unwrap();
            assert_eq!(o.count(), 3 * ell);
        }
    }

    #[test]
    fn quotient_overhead_is_one() {
        let blocks: Vec<Vec<usize>> = (0..5).map(|b| vec![2 * b, 2 * b + 1]).collect();
        let red = QuotientReduction::new(mock(5, 5), 10, blocks).unwrap();
        let mut o = QueryOracle::new((0..10).rev().collect());
        red.run(&mut o).unwrap();
        assert_eq!(o.count(), 5);
    }

    #[test]
    fn power_of_membership_tester_is_membership_tester() {
        let s3 = GroupAction::symmetric(3);
        let h = power_action(&s3, 2, DEFAULT_DOMAIN_CAP).unwrap();
        let tester = MembershipTester::for_group(&h.action, DEFAULT_CLOSURE_CAP).unwrap();
        let red = PowerReduction { inner: tester, n: 3, ell: 2 };
        for x in all_words(3, 3, 100).unwrap() {
            let mut o = QueryOracle::new(x.clone());
            let expect = {
                let mut s = x.clone();
                s.sort_unstable();
                s == vec![0, 1, 2]
            };
            assert_eq!(red.run(&mut o).unwrap(), expect, "{x:?}");
        }
    }

    #[test]
    fn views_match_materialized_words() {
        let x = vec![1, 3, 0, 3];
        assert_eq!(power_word(&[1, 0], 2), vec![3, 2, 1, 0]);
        let blocks = vec![vec![0, 1], vec![2, 3]];
        assert_eq!(quotient_word(&x, &blocks).unwrap(), vec![0, 0]);
        assert_eq!(restrict_word(&x, &[1, 3]), vec![1, 1]);
        assert_eq!(product_word(&[1, 0], &[2, 0, 1]), vec![5, 3, 4, 2, 0, 1]);
    }

    #[test]
    fn shape_errors() {
        let red = PowerReduction { inner: mock(8, 2), n: 3, ell: 2 };
        assert!(matches!(
            red.run(&mut QueryOracle::new(vec![0, 1, 2])),
            Err(SimError::ShapeMismatch(_))
        ));
        assert!(QuotientReduction::new(mock(2, 1), 4, vec![vec![0, 1], vec![2]]).is_err());
        assert!(ProductReduction::new(mock(6, 1), 2, 3, Side::First, vec![0, 1]).is_err());
    }
}
