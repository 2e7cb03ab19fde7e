use std::fmt;

use serde::{Deserialize, Serialize};

use super::PermError;

/// A bijection on `0..n`, stored by its image table.
///
/// Composition follows ordinary function composition: `a.compose(&b)` is the
/// map `i -> a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from a 0-indexed image table, rejecting anything
    /// that is not a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || seen[img] {
                return Err(PermError::NotBijection(
                    images.iter().map(|i| i + 1).collect(),
                ));
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from a 1-indexed image table (the external format).
    pub fn from_one_indexed(images: &[usize]) -> Result<Self, PermError> {
        if images.contains(&0) {
            return Err(PermError::NotBijection(images.to_vec()));
        }
        Self::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// Builds a permutation of `0..n` from 0-indexed cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (idx, &p) in cycle.iter().enumerate() {
                if p >= n {
                    return Err(PermError::PointOutOfRange { point: p + 1, degree: n });
                }
                if touched[p] {
                    return Err(PermError::NotBijection(cycle.iter().map(|i| i + 1).collect()));
                }
                touched[p] = true;
                images[p] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn to_one_indexed(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn first_moved_point(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, j)| i != *j).map(|(i, _)| i)
    }

    /// Parity of the permutation: `true` when it is a product of an even
    /// number of transpositions.
    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        let mut transpositions = 0usize;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p];
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions.is_multiple_of(2)
    }

    /// Disjoint cycles of length at least two, 0-indexed.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }
}

/// Cycle notation, 1-indexed: `(1 2)(3 4 5)`, or `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (idx, p) in cycle.iter().enumerate() {
                if idx > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{}", self)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_one_indexed().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_indexed(&images).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // (a∘b)(1) = a(b(1)) = a(2) = 2
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(b.compose(&a).apply(1), 0);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_one_indexed(&[0, 1]).is_err());
        assert!(Permutation::from_one_indexed(&[2, 3, 1]).is_ok());
    }

    #[test]
    fn display_uses_one_indexed_cycles() {
        let p = Permutation::from_one_indexed(&[2, 1, 4, 5, 3]).unwrap();
        assert_eq!(p.to_string(), "(1 2)(3 4 5)");
        assert_eq!(Permutation::identity(4).to_string(), "()");
    }

    #[test]
    fn parity() {
        assert!(!Permutation::from_cycles(4, &[&[0, 1]]).unwrap().is_even());
        assert!(Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap().is_even());
    }
}
