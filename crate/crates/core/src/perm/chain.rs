//! Base and strong generating set, built with the deterministic
//! Schreier–Sims algorithm. Transversals are kept as Schreier vectors so the
//! memory cost per level is linear in the degree.

use std::collections::HashSet;

use num::{BigUint, One};
use rand::Rng;

use super::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// For each point in the orbit (other than `base`): the generator index `s`
    /// and predecessor `γ` with `β = s(γ)`.
    parent: Vec<Option<(usize, usize)>>,
    in_orbit: Vec<bool>,
    verified: HashSet<(usize, usize)>,
}

impl Level {
    fn new(degree: usize, base: usize) -> Self {
        let mut in_orbit = vec![false; degree];
        in_orbit[base] = true;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            parent: vec![None; degree],
            in_orbit,
            verified: HashSet::new(),
        }
    }

    fn add_generator(&mut self, g: Permutation) {
        self.gens.push(g);
        let new_idx = self.gens.len() - 1;
        let mut queue: Vec<usize> = Vec::new();
        for idx in 0..self.orbit.len() {
            let gamma = self.orbit[idx];
            let beta = self.gens[new_idx].apply(gamma);
            if !self.in_orbit[beta] {
                self.in_orbit[beta] = true;
                self.parent[beta] = Some((new_idx, gamma));
                self.orbit.push(beta);
                queue.push(beta);
            }
        }
        while let Some(gamma) = queue.pop() {
            for s in 0..self.gens.len() {
                let beta = self.gens[s].apply(gamma);
                if !self.in_orbit[beta] {
                    self.in_orbit[beta] = true;
                    self.parent[beta] = Some((s, gamma));
                    self.orbit.push(beta);
                    queue.push(beta);
                }
            }
        }
    }

    /// Coset representative `u_β` with `u_β(base) = β`.
    fn transversal(&self, beta: usize) -> Permutation {
        debug_assert!(self.in_orbit[beta]);
        let mut word = Vec::new();
        let mut p = beta;
        while let Some((s, prev)) = self.parent[p] {
            word.push(s);
            p = prev;
        }
        // u_β = s_k ∘ ... ∘ s_1, where word = [s_k, ..., s_1]
        let n = self.parent.len();
        let mut images: Vec<usize> = (0..n).collect();
        for &s in word.iter().rev() {
            for img in images.iter_mut() {
                *img = self.gens[s].apply(*img);
            }
        }
        Permutation::from_images_unchecked(images)
    }
}

/// Stabilizer chain `G = G_0 ≥ G_1 ≥ ... ≥ G_k = 1` with base `b_0..b_{k-1}`.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        Self::with_base_prefix(degree, generators, &[])
    }

    /// Builds a chain whose base begins with `prefix` (which must hold
    /// distinct points). Further base points are appended as needed.
    pub fn with_base_prefix(degree: usize, generators: &[Permutation], prefix: &[usize]) -> Self {
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                base.push(g.first_moved_point().expect("non-identity"));
            }
        }
        let mut chain = StabilizerChain {
            degree,
            levels: base.iter().map(|&b| Level::new(degree, b)).collect(),
        };
        for g in &gens {
            for l in 0..chain.levels.len() {
                let fixes_prefix = chain.levels[..l].iter().all(|lv| g.apply(lv.base) == lv.base);
                if fixes_prefix {
                    chain.levels[l].add_generator(g.clone());
                } else {
                    break;
                }
            }
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let level = i as usize;
            match self.find_failing_schreier_generator(level) {
                None => i -= 1,
                Some((residue, j)) => {
                    if j == self.levels.len() {
                        let b = residue.first_moved_point().expect("non-identity residue");
                        self.levels.push(Level::new(self.degree, b));
                    }
                    for l in (level + 1)..=j {
                        self.levels[l].add_generator(residue.clone());
                    }
                    i = j as isize;
                }
            }
        }
    }

    fn find_failing_schreier_generator(&mut self, level: usize) -> Option<(Permutation, usize)> {
        let mut idx = 0;
        while idx < self.levels[level].orbit.len() {
            let gamma = self.levels[level].orbit[idx];
            for s in 0..self.levels[level].gens.len() {
                if self.levels[level].verified.contains(&(gamma, s)) {
                    continue;
                }
                let lv = &self.levels[level];
                let beta = lv.gens[s].apply(gamma);
                let u_gamma = lv.transversal(gamma);
                let u_beta = lv.transversal(beta);
                let h = u_beta.inverse().compose(&lv.gens[s].compose(&u_gamma));
                if !h.is_identity() {
                    let (residue, j) = self.strip(h, level + 1);
                    if j < self.levels.len() || !residue.is_identity() {
                        return Some((residue, j));
                    }
                }
                self.levels[level].verified.insert((gamma, s));
            }
            idx += 1;
        }
        None
    }

    /// Sifts `g` through levels `start..`; returns the residue and the level
    /// at which sifting stopped (`levels.len()` when it went all the way).
    fn strip(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (l, lv) in self.levels.iter().enumerate().skip(start) {
            let beta = g.apply(lv.base);
            if !lv.in_orbit[beta] {
                return (g, l);
            }
            g = lv.transversal(beta).inverse().compose(&g);
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Sizes of the basic orbits `|b_i^{G_i}|`.
    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    pub fn strong_generators(&self, level: usize) -> &[Permutation] {
        &self.levels[level].gens
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (residue, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && residue.is_identity()
    }

    /// Uniform random element: a product of uniformly chosen coset
    /// representatives, one per level.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.degree);
        for lv in &self.levels {
            let beta = lv.orbit[rng.gen_range(0..lv.orbit.len())];
            g = g.compose(&lv.transversal(beta));
        }
        g
    }

    /// Whether some element maps `from[t]` to `to[t]` for every `t`, assuming
    /// the chain's base starts with `from`.
    pub(crate) fn maps_prefix(&self, from: &[usize], to: &[usize]) -> bool {
        let mut g = Permutation::identity(self.degree);
        for (t, (&i, &j)) in from.iter().zip(to).enumerate() {
            let lv = &self.levels[t];
            debug_assert_eq!(lv.base, i);
            // need h_t(i) = g^{-1}(j) with h_t in the level transversal
            let target = g.inverse().apply(j);
            if !lv.in_orbit[target] {
                return false;
            }
            g = g.compose(&lv.transversal(target));
        }
        true
    }
}
