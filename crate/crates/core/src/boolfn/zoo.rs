//! Named partial functions used throughout the laboratory.

use super::{all_words, BoolFnError, PartialFn, Word, TABLE_CAP};
use crate::perm::{GroupAction, DEFAULT_CLOSURE_CAP};

/// A rational threshold `num/den` for the Forrelation decision problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theta {
    pub num: u64,
    pub den: u64,
}

impl Default for Theta {
    fn default() -> Self {
        Theta { num: 3, den: 5 }
    }
}

pub fn constant_fn(n: usize, m: usize, value: bool) -> Result<PartialFn, BoolFnError> {
    let words = all_words(n, m, TABLE_CAP)?;
    PartialFn::from_table(
        format!("const{}:{n}:{m}", u8::from(value)),
        n,
        m,
        words.into_iter().map(|x| (x, value)),
    )
}

pub fn xor_fn(n: usize) -> Result<PartialFn, BoolFnError> {
    let words = all_words(n, 2, TABLE_CAP)?;
    PartialFn::from_table(
        format!("xor:{n}"),
        n,
        2,
        words.into_iter().map(|x| {
            let v = x.iter().sum::<usize>() % 2 == 1;
            (x, v)
        }),
    )
}

pub fn and_fn(n: usize) -> Result<PartialFn, BoolFnError> {
    let words = all_words(n, 2, TABLE_CAP)?;
    PartialFn::from_table(
        format!("and:{n}"),
        n,
        2,
        words.into_iter().map(|x| {
            let v = x.iter().all(|&b| b == 1);
            (x, v)
        }),
    )
}

/// `Triv_m`: promise `{0^m, 1^m}`, value the repeated bit.
pub fn triv(m: usize) -> Result<PartialFn, BoolFnError> {
    if m == 0 {
        return Err(BoolFnError::BadShape("triv needs m >= 1".into()));
    }
    PartialFn::from_table(
        format!("triv:{m}"),
        m,
        2,
        [(vec![0; m], false), (vec![1; m], true)],
    )
}

/// Words of `[n]^n` using at most `r` distinct symbols, in lexicographic order.
pub(crate) fn small_range_words(n: usize, r: usize) -> Vec<Word> {
    fn rec(n: usize, r: usize, cur: &mut Word, counts: &mut [usize], distinct: usize, out: &mut Vec<Word>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for s in 0..n {
            let fresh = counts[s] == 0;
            if fresh && distinct == r {
                continue;
            }
            counts[s] += 1;
            cur.push(s);
            rec(n, r, cur, counts, distinct + usize::from(fresh), out);
            cur.pop();
            counts[s] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, r, &mut Vec::with_capacity(n), &mut vec![0; n], 0, &mut out);
    out
}

#[cfg(test)]
fn range_size(x: &[usize]) -> usize {
    x.iter().collect::<std::collections::BTreeSet<_>>().len()
}

/// Distinguishes 1-to-1 strings (value 1) from `(n/r)`-to-1 strings (value 0)
/// in `[n]^n`.
pub fn collision(n: usize, r: usize) -> Result<PartialFn, BoolFnError> {
    if n < 2 || r == 0 || r >= n || !n.is_multiple_of(r) {
        return Err(BoolFnError::BadShape(format!(
            "collision needs r | n and 1 <= r < n, got n = {n}, r = {r}"
        )));
    }
    let per = n / r;
    let size = (n as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > TABLE_CAP as u128 * 4 {
        return Err(BoolFnError::TooLarge { size, cap: TABLE_CAP });
    }
    let entries = small_range_words(n, n).into_iter().filter_map(|x| {
        let mut counts = vec![0usize; n];
        for &s in &x {
            counts[s] += 1;
        }
        if counts.iter().all(|&c| c <= 1) {
            Some((x, true))
        } else if counts.iter().all(|&c| c == 0 || c == per) {
            Some((x, false))
        } else {
            None
        }
    });
    PartialFn::from_table(format!("collision:{n}:{r}"), n, n, entries)
}

/// `f(x) = 1` on the members of `G` read as strings `x_i = π(i)`, and
/// `f(x) = 0` on `D_{n,r}`.
pub fn distinguishing_fn(g: &GroupAction, r: usize) -> Result<PartialFn, BoolFnError> {
    let n = g.degree();
    if r == 0 || r >= n {
        return Err(BoolFnError::BadShape(format!(
            "distinguishing function needs 1 <= r < n, got r = {r}, n = {n}"
        )));
    }
    let size = (n as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if n > 8 || size > TABLE_CAP as u128 * 20 {
        return Err(BoolFnError::TooLarge { size, cap: TABLE_CAP });
    }
    let members = g
        .closure_elements(DEFAULT_CLOSURE_CAP)
        .map_err(|e| BoolFnError::BadShape(e.to_string()))?;
    let ones = members.into_iter().map(|p| (p.images().to_vec(), true));
    let zeros = small_range_words(n, r).into_iter().map(|x| (x, false));
    PartialFn::from_table(format!("dist:{n}:{r}"), n, n, ones.chain(zeros))
}

/// Simon's problem as a decision problem on `[n]^n`, `n = 2^b`: the promise
/// holds when `x_i = x_j ⇔ i = j or i ⊕ j = s` for some `s ≠ 0`, and the
/// value is the most significant bit of `s`.
pub fn simon_decision(n: usize) -> Result<PartialFn, BoolFnError> {
    if n < 2 || !n.is_power_of_two() {
        return Err(BoolFnError::BadShape(format!("simon needs n a power of two >= 2, got {n}")));
    }
    let msb = n >> 1;
    let mut entries = Vec::new();
    for s in 1..n {
        // representatives of the pairs {i, i⊕s}
        let reps: Vec<usize> = (0..n).filter(|&i| i < (i ^ s)).collect();
        let mut labels = Vec::with_capacity(reps.len());
        let mut used = vec![false; n];
        assign(&reps, s, n, &mut labels, &mut used, &mut |x| entries.push((x, s & msb != 0)));
        if entries.len() > TABLE_CAP {
            return Err(BoolFnError::TooLarge {
                size: entries.len() as u128,
                cap: TABLE_CAP,
            });
        }
    }
    PartialFn::from_table(format!("simon:{n}"), n, n, entries)
}

fn assign(
    reps: &[usize],
    s: usize,
    n: usize,
    labels: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut dyn FnMut(Word),
) {
    if labels.len() == reps.len() {
        let mut x = vec![0; n];
        for (&i, &c) in reps.iter().zip(labels.iter()) {
            x[i] = c;
            x[i ^ s] = c;
        }
        emit(x);
        return;
    }
    for c in 0..n {
        if !used[c] {
            used[c] = true;
            labels.push(c);
            assign(reps, s, n, labels, used, emit);
            labels.pop();
            used[c] = false;
        }
    }
}

/// `S = Σ_{i,j} (−1)^{⟨i,j⟩} x_i y_j` for `±1` vectors encoded as bits
/// (`0 ↦ +1`, `1 ↦ −1`); `xy` holds `x` followed by `y`.
pub fn forrelation_sum(xy: &[usize]) -> i64 {
    let n = xy.len() / 2;
    let sign = |b: usize| if b == 0 { 1i64 } else { -1 };
    let mut s = 0i64;
    for i in 0..n {
        for j in 0..n {
            let parity = if (i & j).count_ones() % 2 == 0 { 1 } else { -1 };
            s += parity * sign(xy[i]) * sign(xy[n + j]);
        }
    }
    s
}

/// Promise check on `Φ = S / n^{3/2}`: value 1 when `Φ ≥ θ`, value 0 when
/// `|Φ| ≤ 1/100`, compared exactly on integers.
fn forrelation_value(xy: &[usize], theta: Theta) -> Option<bool> {
    let n = (xy.len() / 2) as i128;
    let s = forrelation_sum(xy) as i128;
    let n3 = n * n * n;
    let (a, b) = (theta.num as i128, theta.den as i128);
    if s >= 0 && s * s * b * b >= a * a * n3 {
        Some(true)
    } else if 10_000 * s * s <= n3 {
        Some(false)
    } else {
        None
    }
}

/// Forrelation decision on `2n` bits.
pub fn forrelation_decision(n: usize, theta: Theta) -> Result<PartialFn, BoolFnError> {
    if n == 0 || !n.is_power_of_two() {
        return Err(BoolFnError::BadShape(format!("forrelation needs n a power of two, got {n}")));
    }
    if theta.den == 0 {
        return Err(BoolFnError::BadShape("θ has zero denominator".into()));
    }
    let name = format!("forr:{n}");
    if 2 * n <= 20 {
        let words = all_words(2 * n, 2, TABLE_CAP * 2)?;
        let entries = words
            .into_iter()
            .filter_map(|x| forrelation_value(&x, theta).map(|v| (x, v)));
        PartialFn::from_table(name, 2 * n, 2, entries)
    } else {
        Ok(PartialFn::from_predicate(name, 2 * n, 2, move |x| forrelation_value(x, theta)))
    }
}

/// `For_N ∘ Triv_k` on `n = k²` bits with `k = 2N`: `k` consecutive blocks of
/// `k` equal bits each, the block bits forming Forrelation input `(x, y)`.
pub fn for_compose_triv(n: usize) -> Result<PartialFn, BoolFnError> {
    let k = (n as f64).sqrt().round() as usize;
    if k * k != n || k < 2 || !k.is_multiple_of(2) || !(k / 2).is_power_of_two() {
        return Err(BoolFnError::BadShape(format!(
            "for∘triv needs n = k² with k = 2N and N a power of two, got n = {n}"
        )));
    }
    let inner = forrelation_decision(k / 2, Theta::default())?;
    let entries = inner.entries_capped(1 << 20)?.into_iter().map(|(bits, v)| {
        let x: Word = bits.iter().flat_map(|&b| std::iter::repeat_n(b, k)).collect();
        (x, v)
    });
    PartialFn::from_table(format!("fortriv:{n}"), n, 2, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::is_symmetric_under;
    use crate::transforms::{direct_product, DEFAULT_DOMAIN_CAP};

    #[test]
    fn triv_examples() {
        let f = triv(3).unwrap();
        assert_eq!(
            f.entries().unwrap(),
            vec![(vec![0, 0, 0], false), (vec![1, 1, 1], true)]
        );
        assert!(is_symmetric_under(&f, &GroupAction::symmetric(3)).unwrap().symmetric);
    }

    #[test]
    fn collision_4_2() {
        let f = collision(4, 2).unwrap();
        let e = f.entries().unwrap();
        let ones = e.iter().filter(|(_, v)| *v).count();
        let zeros = e.len() - ones;
        assert_eq!(ones, 24);
        // choose 2 symbols, then split 4 positions 2+2 between them
        assert_eq!(zeros, 6 * 6);
        for (x, v) in &e {
            assert_eq!(*v, range_size(x) == 4);
        }
        assert!(is_symmetric_under(&f, &GroupAction::symmetric(4)).unwrap().symmetric);
    }

    #[test]
    fn distinguishing_s3_1() {
        let f = distinguishing_fn(&GroupAction::symmetric(3), 1).unwrap();
        let e = f.entries().unwrap();
        assert_eq!(e.iter().filter(|(_, v)| *v).count(), 6);
        let zeros: Vec<_> = e.iter().filter(|(_, v)| !*v).map(|(x, _)| x.clone()).collect();
        assert_eq!(zeros, vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]]);
    }

    #[test]
    fn distinguishing_is_right_invariant() {
        for g in [GroupAction::symmetric(4), GroupAction::cyclic(4), GroupAction::alternating(4)] {
            for r in 1..4 {
                let f = distinguishing_fn(&g, r).unwrap();
                assert!(is_symmetric_under(&f, &g).unwrap().symmetric);
            }
        }
    }

    #[test]
    fn small_range_count_matches_filter() {
        for n in 1..=5 {
            for r in 1..=n {
                let fast = small_range_words(n, r);
                let slow: Vec<Word> = all_words(n, n, 10_000)
                    .unwrap()
                    .into_iter()
                    .filter(|x| range_size(x) <= r)
                    .collect();
                assert_eq!(fast, slow, "n = {n}, r = {r}");
            }
        }
    }

    #[test]
    fn simon_4() {
        let f = simon_decision(4).unwrap();
        assert_eq!(f.domain().unwrap().len(), 36);
        let flips = GroupAction::bit_flip(4).unwrap();
        assert!(is_symmetric_under(&f, &flips).unwrap().symmetric);
        let f8 = simon_decision(8).unwrap();
        assert!(is_symmetric_under(&f8, &GroupAction::bit_flip(8).unwrap()).unwrap().symmetric);
    }

    #[test]
    fn forrelation_sum_on_constant_inputs() {
        // all +1 at n = 2: the Hadamard entries sum to 1+1+1−1
        assert_eq!(forrelation_sum(&[0, 0, 0, 0]), 2);
        let f = forrelation_decision(2, Theta::default()).unwrap();
        assert_eq!(f.eval(&[0, 0, 0, 0]), Some(true));
    }

    #[test]
    fn fortriv_16_symmetric_under_four_s4() {
        let f = for_compose_triv(16).unwrap();
        let s4 = GroupAction::symmetric(4);
        let d = direct_product(&[s4.clone(), s4.clone(), s4.clone(), s4], DEFAULT_DOMAIN_CAP).unwrap();
        assert!(is_symmetric_under(&f, &d.action).unwrap().symmetric);
        assert!(!f.domain().unwrap().is_empty());
    }

    #[test]
    fn forrelation_2_has_only_one_inputs() {
        // H_2 y is (±2, 0) or (0, ±2), so S = ±2 and |Φ| = 1/√2 on every input
        let f = forrelation_decision(2, Theta::default()).unwrap();
        for x in all_words(4, 2, 16).unwrap() {
            assert_eq!(forrelation_sum(&x).abs(), 2);
        }
        assert!(f.entries().unwrap().iter().all(|(_, v)| *v));
        let f4 = forrelation_decision(4, Theta::default()).unwrap();
        assert!(!f4.is_constant().unwrap());
    }

    #[test]
    fn shape_errors() {
        assert!(collision(4, 3).is_err());
        assert!(simon_decision(6).is_err());
        assert!(for_compose_triv(9).is_err());
        assert!(distinguishing_fn(&GroupAction::symmetric(3), 3).is_err());
    }
}
