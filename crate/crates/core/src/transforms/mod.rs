//! Constructors that turn group actions into new group actions: tuple powers
//! `G^(ℓ)`, distinct-tuple actions `G^<ℓ>`, orbit restriction, block
//! quotients, products and mergers, and the graph-family symmetries built from
//! them.

mod encoding;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::perm::{GroupAction, PermError, Permutation};

pub use encoding::{DomainEncoding, EncodingKind};

pub const DEFAULT_DOMAIN_CAP: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("transformed domain would have {size} points, above the cap of {cap}")]
    DomainCapExceeded { size: u128, cap: usize },
    #[error("point set is not a union of orbits: a generator sends point {0} outside it")]
    NotOrbitClosed(usize),
    #[error("not a block system: {0}")]
    NotBlockSystem(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("{0}")]
    BadShape(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

impl TransformError {
    pub fn name(&self) -> &'static str {
        match self {
            TransformError::DomainCapExceeded { .. } => "DomainCapExceeded",
            TransformError::NotOrbitClosed(_) => "NotOrbitClosed",
            TransformError::NotBlockSystem(_) => "NotBlockSystem",
            TransformError::DegreeMismatch(..) => "DegreeMismatch",
            TransformError::BadShape(_) => "BadShape",
            TransformError::Perm(e) => e.name(),
        }
    }
}

/// A group action together with the meaning of its points.
#[derive(Clone, Debug)]
pub struct EncodedAction {
    pub action: GroupAction,
    pub encoding: DomainEncoding,
}

impl EncodedAction {
    pub fn plain(action: GroupAction) -> Self {
        let encoding = DomainEncoding::identity(action.degree());
        EncodedAction { action, encoding }
    }

    pub fn degree(&self) -> usize {
        self.action.degree()
    }

    /// Perm-action JSON plus an `"encoding"` descriptor.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self.action.to_json()).expect("serializable");
        v["encoding"] = self.encoding.descriptor();
        v
    }
}

fn check_cap(size: u128, cap: usize) -> Result<(), TransformError> {
    if size > cap as u128 {
        return Err(TransformError::DomainCapExceeded { size, cap });
    }
    Ok(())
}

/// Applies `map` to every structured point of `encoding` to get the induced
/// permutation of the flat domain.
fn induce<F>(encoding: &DomainEncoding, map: F) -> Result<Permutation, TransformError>
where
    F: Fn(&[usize]) -> Vec<usize>,
{
    let images = encoding
        .points()
        .iter()
        .map(|p| {
            let img = map(p);
            encoding.encode(&img).ok_or_else(|| {
                TransformError::BadShape(format!("image {img:?} of {p:?} lies outside the domain"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Permutation::from_images(images)?)
}

/// `G^(ℓ)`: `π(i_1..i_ℓ) = (π(i_1)..π(i_ℓ))` on `[n]^ℓ`.
pub fn power_action(g: &GroupAction, ell: usize, cap: usize) -> Result<EncodedAction, TransformError> {
    if ell == 0 {
        return Err(TransformError::BadShape("ℓ must be positive".into()));
    }
    let n = g.degree();
    check_cap((n as u128).saturating_pow(ell as u32), cap)?;
    let encoding = DomainEncoding::tuple_power(n, ell);
    let gens = g
        .generators()
        .iter()
        .map(|pi| induce(&encoding, |t| t.iter().map(|&i| pi.apply(i)).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EncodedAction {
        action: GroupAction::new(encoding.len(), gens)?,
        encoding,
    })
}

/// `G^<ℓ>`: the action of `G^(ℓ)` restricted to tuples with distinct entries.
pub fn distinct_tuples_action(
    g: &GroupAction,
    ell: usize,
    cap: usize,
) -> Result<EncodedAction, TransformError> {
    let n = g.degree();
    if ell == 0 || ell > n {
        return Err(TransformError::BadShape(format!(
            "need 1 <= ℓ <= n, got ℓ = {ell}, n = {n}"
        )));
    }
    let size = ((n - ell + 1)..=n).fold(1u128, |acc, x| acc.saturating_mul(x as u128));
    check_cap(size, cap)?;
    // Checking the cap on n^ℓ as well keeps the tuple scan bounded.
    check_cap((n as u128).saturating_pow(ell as u32), cap.saturating_mul(16))?;
    let encoding = DomainEncoding::distinct_tuples(n, ell);
    let gens = g
        .generators()
        .iter()
        .map(|pi| induce(&encoding, |t| t.iter().map(|&i| pi.apply(i)).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EncodedAction {
        action: GroupAction::new(encoding.len(), gens)?,
        encoding,
    })
}

/// Restricts `G` to a union of its orbits, re-indexed by increasing point.
pub fn restrict_to_orbits(g: &GroupAction, points: &[usize]) -> Result<EncodedAction, TransformError> {
    let n = g.degree();
    let mut member = vec![false; n];
    for &p in points {
        if p >= n {
            return Err(PermError::PointOutOfRange { point: p + 1, degree: n }.into());
        }
        member[p] = true;
    }
    if !member.iter().any(|&m| m) {
        return Err(TransformError::BadShape("empty point set".into()));
    }
    for pi in g.generators() {
        for p in 0..n {
            if member[p] && !member[pi.apply(p)] {
                return Err(TransformError::NotOrbitClosed(p + 1));
            }
        }
    }
    let encoding = DomainEncoding::restriction(n, points);
    let gens = g
        .generators()
        .iter()
        .map(|pi| induce(&encoding, |p| vec![pi.apply(p[0])]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EncodedAction {
        action: GroupAction::new(encoding.len(), gens)?,
        encoding,
    })
}

/// The induced action on the blocks of a `G`-invariant partition into equal
/// parts. Block preservation is checked on generators only; it then holds for
/// the whole group since it is closed under composition and inverses.
pub fn quotient_action(g: &GroupAction, blocks: &[Vec<usize>]) -> Result<EncodedAction, TransformError> {
    let n = g.degree();
    let block_of = block_index(n, blocks)?;
    let gens = g
        .generators()
        .iter()
        .map(|pi| quotient_permutation(pi, blocks, &block_of))
        .collect::<Result<Vec<_>, _>>()?;
    let encoding = DomainEncoding::quotient(n, blocks);
    Ok(EncodedAction {
        action: GroupAction::new(blocks.len(), gens)?,
        encoding,
    })
}

/// Validates an equal-size partition of `[n]` and returns the block index of
/// every point.
pub fn block_index(n: usize, blocks: &[Vec<usize>]) -> Result<Vec<usize>, TransformError> {
    if blocks.is_empty() {
        return Err(TransformError::NotBlockSystem("no blocks".into()));
    }
    let size = blocks[0].len();
    if size == 0 || blocks.iter().any(|b| b.len() != size) {
        return Err(TransformError::NotBlockSystem("blocks must be nonempty and of equal size".into()));
    }
    let mut block_of = vec![usize::MAX; n];
    for (t, b) in blocks.iter().enumerate() {
        for &p in b {
            if p >= n {
                return Err(PermError::PointOutOfRange { point: p + 1, degree: n }.into());
            }
            if block_of[p] != usize::MAX {
                return Err(TransformError::NotBlockSystem(format!("point {} appears twice", p + 1)));
            }
            block_of[p] = t;
        }
    }
    if let Some(p) = block_of.iter().position(|&b| b == usize::MAX) {
        return Err(TransformError::NotBlockSystem(format!("point {} is not covered", p + 1)));
    }
    Ok(block_of)
}

/// The permutation of block indices induced by `pi`.
pub fn quotient_permutation(
    pi: &Permutation,
    blocks: &[Vec<usize>],
    block_of: &[usize],
) -> Result<Permutation, TransformError> {
    let images = blocks
        .iter()
        .enumerate()
        .map(|(t, b)| {
            let target = block_of[pi.apply(b[0])];
            if b.iter().any(|&p| block_of[pi.apply(p)] != target) {
                return Err(TransformError::NotBlockSystem(format!(
                    "{pi} splits block {}",
                    t + 1
                )));
            }
            Ok(target)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Permutation::from_images(images).map_err(|_| {
        TransformError::NotBlockSystem(format!("{pi} does not permute the blocks"))
    })
}

/// `G_1 × G_2` on `[n_1 n_2]`: `(π_1, π_2)(k, ℓ) = (π_1(k), π_2(ℓ))`.
/// Unequal factors are allowed.
pub fn product_action(
    g1: &GroupAction,
    g2: &GroupAction,
    cap: usize,
) -> Result<EncodedAction, TransformError> {
    let (n1, n2) = (g1.degree(), g2.degree());
    check_cap(n1 as u128 * n2 as u128, cap)?;
    let encoding = DomainEncoding::product(n1, n2);
    let mut gens = Vec::new();
    for pi in g1.generators() {
        gens.push(induce(&encoding, |p| vec![pi.apply(p[0]), p[1]])?);
    }
    for pi in g2.generators() {
        gens.push(induce(&encoding, |p| vec![p[0], pi.apply(p[1])])?);
    }
    Ok(EncodedAction {
        action: GroupAction::new(encoding.len(), gens)?,
        encoding,
    })
}

/// `G_1 × ... × G_t` acting on the disjoint union of the factor domains, each
/// factor moving only its own block of points.
pub fn direct_product(groups: &[GroupAction], cap: usize) -> Result<EncodedAction, TransformError> {
    if groups.is_empty() {
        return Err(TransformError::BadShape("need at least one factor".into()));
    }
    let sizes: Vec<usize> = groups.iter().map(|g| g.degree()).collect();
    check_cap(sizes.iter().map(|&s| s as u128).sum(), cap)?;
    let encoding = DomainEncoding::direct_product(&sizes);
    let mut gens = Vec::new();
    for (c, g) in groups.iter().enumerate() {
        for pi in g.generators() {
            gens.push(induce(&encoding, |p| {
                if p[0] == c {
                    vec![c, pi.apply(p[1])]
                } else {
                    p.to_vec()
                }
            })?);
        }
    }
    Ok(EncodedAction {
        action: GroupAction::new(encoding.len(), gens)?,
        encoding,
    })
}

/// `⟨G, H⟩`: the group generated by both generator sets.
pub fn merge_actions(g: &GroupAction, h: &GroupAction) -> Result<GroupAction, TransformError> {
    if g.degree() != h.degree() {
        return Err(TransformError::DegreeMismatch(g.degree(), h.degree()));
    }
    let mut gens = g.generators().to_vec();
    gens.extend(h.generators().iter().cloned());
    Ok(GroupAction::new(g.degree(), gens)?)
}

/// Blocks `{(x,y), (y,x)}` of a distinct-pair domain, ordered by `x < y`.
pub fn unordered_pair_blocks(arcs: &DomainEncoding) -> Result<Vec<Vec<usize>>, TransformError> {
    set_blocks(arcs)
}

/// Groups the points of a distinct-tuple domain by their underlying set;
/// blocks are ordered lexicographically by the sorted set.
pub fn set_blocks(tuples: &DomainEncoding) -> Result<Vec<Vec<usize>>, TransformError> {
    match tuples.kind() {
        EncodingKind::DistinctTuples { .. } | EncodingKind::ArcSet { .. } => {}
        other => {
            return Err(TransformError::BadShape(format!(
                "set blocks need a distinct-tuple domain, got {other:?}"
            )))
        }
    }
    let mut by_set: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (idx, t) in tuples.points().iter().enumerate() {
        let mut key = t.clone();
        key.sort_unstable();
        by_set.entry(key).or_default().push(idx);
    }
    Ok(by_set.into_values().collect())
}

fn check_k(k: usize) -> Result<(), TransformError> {
    if k < 2 {
        return Err(TransformError::BadShape(format!("need k >= 2 vertices, got {k}")));
    }
    Ok(())
}

/// Directed graph symmetry on the `k(k-1)` arcs: `S_k^<2>`.
pub fn digraph_symmetry(k: usize, cap: usize) -> Result<EncodedAction, TransformError> {
    check_k(k)?;
    let mut out = distinct_tuples_action(&GroupAction::symmetric(k), 2, cap)?;
    out.encoding = DomainEncoding::arcs(k);
    Ok(out)
}

/// Undirected graph symmetry on the `k(k-1)/2` edges: the quotient of the
/// directed symmetry by the blocks `{(x,y), (y,x)}`.
pub fn graph_symmetry(k: usize, cap: usize) -> Result<EncodedAction, TransformError> {
    hypergraph_symmetry(k, 2, cap)
}

/// `p`-uniform hypergraph symmetry: `S_k^<p>` modulo the blocks of tuples
/// with the same underlying `p`-set.
pub fn hypergraph_symmetry(k: usize, p: usize, cap: usize) -> Result<EncodedAction, TransformError> {
    check_k(k)?;
    if p == 0 || p > k {
        return Err(TransformError::BadShape(format!("need 1 <= p <= k, got p = {p}, k = {k}")));
    }
    let tuples = distinct_tuples_action(&GroupAction::symmetric(k), p, cap)?;
    let blocks = set_blocks(&tuples.encoding)?;
    let quotient = quotient_action(&tuples.action, &blocks)?;
    let sets = DomainEncoding::subsets(k, p);
    let kind = sets.kind().clone();
    let points = sets.points().to_vec();
    Ok(EncodedAction {
        action: quotient.action,
        encoding: quotient.encoding.relabel(kind, points),
    })
}

/// Bipartite graph symmetry with equal parts: `S_k × S_k` on `k^2` edges.
pub fn bipartite_symmetry(k: usize, cap: usize) -> Result<EncodedAction, TransformError> {
    bipartite_symmetry_unequal(k, k, cap)
}

/// `S_{k1} × S_{k2}` on the `k1·k2` possible edges of a bipartite graph.
pub fn bipartite_symmetry_unequal(k1: usize, k2: usize, cap: usize) -> Result<EncodedAction, TransformError> {
    if k1 == 0 || k2 == 0 {
        return Err(TransformError::BadShape("parts must be nonempty".into()));
    }
    let mut out = product_action(&GroupAction::symmetric(k1), &GroupAction::symmetric(k2), cap)?;
    out.encoding = DomainEncoding::biadjacency(k1, k2);
    Ok(out)
}
