use std::collections::HashMap;

use serde::Serialize;

/// Which structured domain a flat index `[N]` stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EncodingKind {
    Identity { n: usize },
    TuplePower { n: usize, ell: usize },
    DistinctTuples { n: usize, ell: usize },
    PartitionQuotient { n: usize, blocks: usize },
    Product { n1: usize, n2: usize },
    DirectProduct { sizes: Vec<usize> },
    EdgeSet { k: usize },
    ArcSet { k: usize },
    HyperedgeSet { k: usize, p: usize },
    Biadjacency { k1: usize, k2: usize },
    Restriction { n: usize, size: usize },
}

/// Bidirectional map between structured points (tuples, pairs, sets, blocks)
/// and flat indices. Points are listed in lexicographic order; tuple points
/// put the first coordinate in the most significant position.
#[derive(Clone, Debug)]
pub struct DomainEncoding {
    kind: EncodingKind,
    points: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl PartialEq for DomainEncoding {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.points == other.points
    }
}

impl DomainEncoding {
    fn from_points(kind: EncodingKind, points: Vec<Vec<usize>>) -> Self {
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        DomainEncoding { kind, points, index }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_points(EncodingKind::Identity { n }, (0..n).map(|i| vec![i]).collect())
    }

    /// `[n]^ell` in lexicographic order, so `(z_1..z_ell)` sits at
    /// `Σ z_t n^(ell-t)`.
    pub fn tuple_power(n: usize, ell: usize) -> Self {
        let points = all_tuples(n, ell);
        Self::from_points(EncodingKind::TuplePower { n, ell }, points)
    }

    pub fn distinct_tuples(n: usize, ell: usize) -> Self {
        let points = all_tuples(n, ell)
            .into_iter()
            .filter(|t| is_distinct(t))
            .collect();
        Self::from_points(EncodingKind::DistinctTuples { n, ell }, points)
    }

    pub fn arcs(k: usize) -> Self {
        let mut enc = Self::distinct_tuples(k, 2);
        enc.kind = EncodingKind::ArcSet { k };
        enc
    }

    /// `p`-subsets of `[k]`, each stored sorted, in lexicographic order.
    pub fn subsets(k: usize, p: usize) -> Self {
        let points = all_tuples(k, p)
            .into_iter()
            .filter(|t| t.windows(2).all(|w| w[0] < w[1]))
            .collect();
        let kind = if p == 2 {
            EncodingKind::EdgeSet { k }
        } else {
            EncodingKind::HyperedgeSet { k, p }
        };
        Self::from_points(kind, points)
    }

    pub fn product(n1: usize, n2: usize) -> Self {
        let points = all_tuples_mixed(&[n1, n2]);
        Self::from_points(EncodingKind::Product { n1, n2 }, points)
    }

    pub fn biadjacency(k1: usize, k2: usize) -> Self {
        let mut enc = Self::product(k1, k2);
        enc.kind = EncodingKind::Biadjacency { k1, k2 };
        enc
    }

    /// Disjoint union: point `(c, p)` is point `p` of component `c`.
    pub fn direct_product(sizes: &[usize]) -> Self {
        let points = sizes
            .iter()
            .enumerate()
            .flat_map(|(c, &s)| (0..s).map(move |p| vec![c, p]))
            .collect();
        Self::from_points(
            EncodingKind::DirectProduct {
                sizes: sizes.to_vec(),
            },
            points,
        )
    }

    pub fn restriction(n: usize, points: &[usize]) -> Self {
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let size = sorted.len();
        Self::from_points(
            EncodingKind::Restriction { n, size },
            sorted.into_iter().map(|p| vec![p]).collect(),
        )
    }

    /// Blocks of a partition of `[n]`; each block is stored sorted.
    pub fn quotient(n: usize, blocks: &[Vec<usize>]) -> Self {
        let points = blocks
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort_unstable();
                b
            })
            .collect();
        Self::from_points(
            EncodingKind::PartitionQuotient {
                n,
                blocks: blocks.len(),
            },
            points,
        )
    }

    pub(crate) fn relabel(mut self, kind: EncodingKind, points: Vec<Vec<usize>>) -> Self {
        assert_eq!(points.len(), self.points.len());
        self = Self::from_points(kind, points);
        self
    }

    pub fn kind(&self) -> &EncodingKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn encode(&self, point: &[usize]) -> Option<usize> {
        self.index.get(point).copied()
    }

    pub fn decode(&self, idx: usize) -> Option<&[usize]> {
        self.points.get(idx).map(|p| p.as_slice())
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    /// Descriptor for reports: the kind plus 1-indexed structured points.
    pub fn descriptor(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.kind).expect("serializable");
        let pts: Vec<Vec<usize>> = self
            .points
            .iter()
            .map(|p| p.iter().map(|x| x + 1).collect())
            .collect();
        v["points"] = serde_json::to_value(pts).expect("serializable");
        v
    }
}

pub(crate) fn all_tuples(n: usize, ell: usize) -> Vec<Vec<usize>> {
    all_tuples_mixed(&vec![n; ell])
}

fn all_tuples_mixed(radices: &[usize]) -> Vec<Vec<usize>> {
    if radices.contains(&0) {
        return Vec::new();
    }
    let total: usize = radices.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0usize; radices.len()];
    for _ in 0..total {
        out.push(cur.clone());
        for pos in (0..radices.len()).rev() {
            cur[pos] += 1;
            if cur[pos] < radices[pos] {
                break;
            }
            cur[pos] = 0;
        }
    }
    out
}

pub(crate) fn is_distinct(t: &[usize]) -> bool {
    t.iter()
        .enumerate()
        .all(|(i, a)| t[..i].iter().all(|b| b != a))
}
