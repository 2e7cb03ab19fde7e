//! Monomials in the indicator variables z_{ij} and orbit bookkeeping for
//! symmetry-reduced LPs.

use std::collections::HashMap;
use std::fmt;

use super::OracleError;
use crate::boolfn::Word;
use crate::perm::GroupAction;

/// Default cap on the number of monomials of a basis.
pub const MONOMIAL_CAP: usize = 400_000;

/// A product of z_{ij} with distinct positions `i`, sorted by position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<(usize, usize)>);

impl Monomial {
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, x: &[usize]) -> bool {
        self.0.iter().all(|&(i, j)| x.get(i) == Some(&j))
    }
}

impl fmt::Display for Monomial {
    /// `1` for the empty product, otherwise `z1=0*z3=2` with 1-indexed
    /// positions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(i, j)| format!("z{}={}", i + 1, crate::boolfn::format_word(&[j])))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Packs monomials into `u64` keys: digit `i` in base `m + 1` is `0` when
/// position `i` is absent and `j + 1` when `z_{ij}` is present.
#[derive(Clone, Debug)]
pub struct KeyCodec {
    n: usize,
    m: usize,
    weights: Vec<u64>,
}

impl KeyCodec {
    pub fn new(n: usize, m: usize) -> Result<Self, OracleError> {
        let mut weights = Vec::with_capacity(n);
        let mut w: u64 = 1;
        for _ in 0..n {
            weights.push(w);
            w = w
                .checked_mul(m as u64 + 1)
                .ok_or_else(|| OracleError::TooLarge(format!("monomial keys for n={n}, m={m}")))?;
        }
        Ok(KeyCodec { n, m, weights })
    }

    pub fn encode(&self, mono: &Monomial) -> u64 {
        mono.0.iter().map(|&(i, j)| (j as u64 + 1) * self.weights[i]).sum()
    }

    pub fn decode(&self, mut key: u64) -> Monomial {
        let base = self.m as u64 + 1;
        let mut out = Vec::new();
        for i in 0..self.n {
            let digit = key % base;
            key /= base;
            if digit > 0 {
                out.push((i, digit as usize - 1));
            }
        }
        Monomial(out)
    }

    /// Calls `visit` with the key of every monomial of degree ≤ `d`
    /// satisfied by `x`.
    pub fn for_each_satisfied(&self, x: &[usize], d: usize, visit: &mut impl FnMut(u64)) {
        fn rec(c: &KeyCodec, x: &[usize], start: usize, left: usize, key: u64, visit: &mut impl FnMut(u64)) {
            visit(key);
            if left == 0 {
                return;
            }
            for i in start..x.len() {
                rec(c, x, i + 1, left - 1, key + (x[i] as u64 + 1) * c.weights[i], visit);
            }
        }
        rec(self, x, 0, d, 0, visit);
    }
}

/// All monomials of degree ≤ d over `n` positions and `m` symbols.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    n: usize,
    m: usize,
    d: usize,
    codec: KeyCodec,
    keys: Vec<u64>,
    index: HashMap<u64, usize>,
}

pub fn monomial_count(n: usize, m: usize, d: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut mk: u128 = 1;
    for k in 0..=d.min(n) {
        total = total.saturating_add(binom.saturating_mul(mk));
        binom = binom * (n - k) as u128 / (k as u128 + 1);
        mk = mk.saturating_mul(m as u128);
    }
    total
}

impl MonomialBasis {
    pub fn new(n: usize, m: usize, d: usize, cap: usize) -> Result<Self, OracleError> {
        let count = monomial_count(n, m, d);
        if count > cap as u128 {
            return Err(OracleError::TooLarge(format!(
                "{count} monomials of degree ≤ {d} over [{m}]^{n} (cap {cap})"
            )));
        }
        let codec = KeyCodec::new(n, m)?;
        let mut keys = Vec::with_capacity(count as usize);
        fn rec(c: &KeyCodec, m: usize, start: usize, left: usize, key: u64, out: &mut Vec<u64>) {
            out.push(key);
            if left == 0 {
                return;
            }
            for i in start..c.n {
                for j in 0..m {
                    rec(c, m, i + 1, left - 1, key + (j as u64 + 1) * c.weights[i], out);
                }
            }
        }
        rec(&codec, m, 0, d.min(n), 0, &mut keys);
        let index = keys.iter().enumerate().map(|(k, &key)| (key, k)).collect();
        Ok(MonomialBasis {
            n,
            m,
            d,
            codec,
            keys,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn codec(&self) -> &KeyCodec {
        &self.codec
    }

    pub fn key(&self, k: usize) -> u64 {
        self.keys[k]
    }

    pub fn monomial(&self, k: usize) -> Monomial {
        self.codec.decode(self.keys[k])
    }

    pub fn index_of_key(&self, key: u64) -> Option<usize> {
        self.index.get(&key).copied()
    }

    /// Indices of the monomials satisfied by `x`.
    pub fn satisfied(&self, x: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        self.codec
            .for_each_satisfied(x, self.d, &mut |key| out.push(self.index[&key]));
        out
    }
}

/// Symmetries of an LP instance: permutations of positions (x ↦ x∘π) and of
/// symbols (x ↦ σ∘x), which together must preserve the promise and values.
#[derive(Clone, Debug)]
pub struct LpSymmetry {
    pub positions: GroupAction,
    pub symbols: GroupAction,
}

impl LpSymmetry {
    pub fn trivial(n: usize, m: usize) -> Self {
        LpSymmetry {
            positions: GroupAction::trivial(n),
            symbols: GroupAction::trivial(m),
        }
    }

    pub fn positions_only(g: GroupAction, m: usize) -> Self {
        LpSymmetry {
            positions: g,
            symbols: GroupAction::trivial(m),
        }
    }

    /// Images of a word under each generator.
    pub fn word_images(&self, x: &[usize]) -> Vec<Word> {
        let mut out = Vec::new();
        for p in self.positions.generators() {
            out.push(p.images().iter().map(|&k| x[k]).collect());
        }
        for s in self.symbols.generators() {
            out.push(x.iter().map(|&v| s.apply(v)).collect());
        }
        out
    }

    /// Images of a monomial under each generator, matching `word_images`.
    pub fn monomial_images(&self, mono: &Monomial) -> Vec<Monomial> {
        let mut out = Vec::new();
        for p in self.positions.generators() {
            let mut v: Vec<(usize, usize)> = mono.0.iter().map(|&(i, j)| (p.apply(i), j)).collect();
            v.sort_unstable();
            out.push(Monomial(v));
        }
        for s in self.symbols.generators() {
            out.push(Monomial(mono.0.iter().map(|&(i, j)| (i, s.apply(j))).collect()));
        }
        out
    }
}

/// A partition of `0..len` into orbits, numbered by smallest member.
#[derive(Clone, Debug)]
pub struct Orbits {
    pub id: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl Orbits {
    pub fn from_edges(len: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut parent: Vec<usize> = (0..len).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for (a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
        let mut id = vec![usize::MAX; len];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for e in 0..len {
            let root = find(&mut parent, e);
            if id[root] == usize::MAX {
                id[root] = members.len();
                members.push(Vec::new());
            }
            id[e] = id[root];
            members[id[e]].push(e);
        }
        Orbits { id, members }
    }

    pub fn count(&self) -> usize {
        self.members.len()
    }
}

pub fn monomial_orbits(basis: &MonomialBasis, sym: &LpSymmetry) -> Result<Orbits, OracleError> {
    let mut edges = Vec::new();
    for k in 0..basis.len() {
        for img in sym.monomial_images(&basis.monomial(k)) {
            let key = basis.codec().encode(&img);
            let t = basis
                .index_of_key(key)
                .ok_or_else(|| OracleError::BadShape(format!("symmetry maps monomial {} outside the basis", img)))?;
            edges.push((k, t));
        }
    }
    Ok(Orbits::from_edges(basis.len(), edges))
}

pub fn word_orbits(words: &[Word], sym: &LpSymmetry) -> Result<Orbits, OracleError> {
    let index: HashMap<&[usize], usize> = words.iter().enumerate().map(|(k, w)| (w.as_slice(), k)).collect();
    let mut edges = Vec::new();
    for (k, w) in words.iter().enumerate() {
        for img in sym.word_images(w) {
            let t = index.get(img.as_slice()).ok_or_else(|| {
                OracleError::NotSymmetric(format!(
                    "{} maps to {} outside the row set",
                    crate::boolfn::format_word(w),
                    crate::boolfn::format_word(&img)
                ))
            })?;
            edges.push((k, *t));
        }
    }
    Ok(Orbits::from_edges(words.len(), edges))
}
