//! Oracle results compared against small brute-force computations written
//! from scratch here.

use num::{BigRational, One, Signed, Zero};
use proptest::prelude::*;
use symlab::boolfn::{all_words, PartialFn, Word};
use symlab::cli::{parse_fn, SpecContext};
use symlab::oracles::{
    approx_degree_with, degree_lp, det_query_complexity, distributional_rand_complexity, hard_distribution_dp,
    min_error_at_depth, DegreeOptions, LpSymmetry,
};
use symlab::perm::GroupAction;
use symlab::shuffle::{symmetrize, FiniteDistribution};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &pivot;
                for j in c..cols {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// Indicator monomials: (position, symbol) pairs on distinct positions.
fn monomials(n: usize, m: usize, d: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for mono in &frontier {
            let start = mono.last().map_or(0, |&(i, _): &(usize, usize)| i + 1);
            for i in start..n {
                for a in 0..m {
                    let mut ext = mono.clone();
                    ext.push((i, a));
                    next.push(ext);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Least d such that some degree-d polynomial equals f on its promise.
fn exact_degree_by_elimination(f: &PartialFn) -> usize {
    let entries = f.entries().unwrap();
    (0..=f.n())
        .find(|&d| {
            let monos = monomials(f.n(), f.m(), d);
            let eval = |x: &Word| -> Vec<Q> {
                monos
                    .iter()
                    .map(|mo| if mo.iter().all(|&(i, a)| x[i] == a) { Q::one() } else { Q::zero() })
                    .collect()
            };
            let a: Vec<Vec<Q>> = entries.iter().map(|(x, _)| eval(x)).collect();
            let ab: Vec<Vec<Q>> = entries
                .iter()
                .map(|(x, v)| {
                    let mut row = eval(x);
                    row.push(if *v { Q::one() } else { Q::zero() });
                    row
                })
                .collect();
            rank(a) == rank(ab)
        })
        .unwrap()
}

fn unbounded() -> DegreeOptions {
    DegreeOptions {
        bounded: false,
        ..Default::default()
    }
}

#[test]
fn exact_degree_matches_elimination() {
    let mut ctx = SpecContext::new(100_000);
    for s in ["triv:3", "xor:2", "xor:3", "and:3", "collision:4", "dist(sym:3,1)", "dist(cyc:4,2)", "simon:4", "forr:4"] {
        let fs = parse_fn(s, &mut ctx).unwrap();
        let want = exact_degree_by_elimination(&fs.f);
        let got = approx_degree_with(&fs.f, &Q::zero(), &unbounded(), &fs.symmetry).unwrap().degree;
        assert_eq!(got, want, "{s}");
    }
}

/// Min t over (c0, c1, c2, t) with p = c0 + c1 x1 + c2 x2, by checking every
/// vertex of the 16 constraints: two error bands or the [0,1] box per input.
fn degree_one_error_by_vertices(table: &[Option<bool>; 4]) -> Q {
    let xs = [[0i64, 0], [0, 1], [1, 0], [1, 1]];
    // rows are (coefficients of c0,c1,c2,t ; rhs) meaning row·v ≥ rhs
    let mut rows: Vec<([Q; 4], Q)> = Vec::new();
    for (k, x) in xs.iter().enumerate() {
        let p = [Q::one(), q(x[0], 1), q(x[1], 1)];
        let neg = |t: i64| [-p[0].clone(), -p[1].clone(), -p[2].clone(), q(t, 1)];
        let pos = |t: i64| [p[0].clone(), p[1].clone(), p[2].clone(), q(t, 1)];
        match table[k] {
            Some(false) => {
                rows.push((pos(0), Q::zero()));
                rows.push((neg(1), Q::zero()));
            }
            Some(true) => {
                rows.push((pos(1), Q::one()));
                rows.push((neg(0), -Q::one()));
            }
            None => {
                rows.push((pos(0), Q::zero()));
                rows.push((neg(0), -Q::one()));
            }
        }
    }
    let mut best: Option<Q> = None;
    let n = rows.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let pick = [a, b, c, d];
                    let Some(v) = solve4(&pick.map(|i| rows[i].clone())) else { continue };
                    let feasible = rows.iter().all(|(r, rhs)| {
                        let lhs: Q = r.iter().zip(&v).map(|(x, y)| x * y).sum();
                        &lhs >= rhs
                    });
                    if feasible && best.as_ref().is_none_or(|b| v[3] < *b) {
                        best = Some(v[3].clone());
                    }
                }
            }
        }
    }
    best.unwrap()
}

fn solve4(rows: &[([Q; 4], Q); 4]) -> Option<[Q; 4]> {
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .map(|(r, rhs)| r.iter().cloned().chain([rhs.clone()]).collect())
        .collect();
    for c in 0..4 {
        let p = (c..4).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for j in 0..5 {
            m[c][j] = &m[c][j] / &pivot;
        }
        for i in 0..4 {
            if i != c && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..5 {
                    let delta = &factor * &m[c][j];
                    m[i][j] -= delta;
                }
            }
        }
    }
    Some([m[0][4].clone(), m[1][4].clone(), m[2][4].clone(), m[3][4].clone()])
}

#[test]
fn degree_one_lp_matches_vertex_enumeration() {
    let words = all_words(2, 2, 16).unwrap();
    let mut checked = 0;
    for code in 0..81u32 {
        let mut table = [None; 4];
        let mut c = code;
        for slot in table.iter_mut() {
            *slot = [None, Some(false), Some(true)][(c % 3) as usize];
            c /= 3;
        }
        if table.iter().all(Option::is_none) {
            continue;
        }
        let entries = words.iter().zip(table).filter_map(|(w, v)| v.map(|v| (w.clone(), v)));
        let f = PartialFn::from_table("t", 2, 2, entries).unwrap();
        let want = degree_one_error_by_vertices(&table);
        let got = degree_lp(&f, 1, &DegreeOptions::default(), &LpSymmetry::trivial(2, 2)).unwrap().error;
        assert_eq!(got, want, "table {table:?}");
        checked += 1;
    }
    assert_eq!(checked, 80);
}

#[derive(Clone, Debug)]
enum Tree {
    Leaf(bool),
    Query(usize, Vec<Tree>),
}

impl Tree {
    fn eval(&self, x: &[usize]) -> bool {
        match self {
            Tree::Leaf(v) => *v,
            Tree::Query(i, ch) => ch[x[*i]].eval(x),
        }
    }
}

fn all_trees(n: usize, m: usize, depth: usize) -> Vec<Tree> {
    let mut out = vec![Tree::Leaf(false), Tree::Leaf(true)];
    if depth == 0 {
        return out;
    }
    let sub = all_trees(n, m, depth - 1);
    for i in 0..n {
        let mut combos: Vec<Vec<Tree>> = vec![vec![]];
        for _ in 0..m {
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    sub.iter().map(move |t| {
                        let mut c = c.clone();
                        c.push(t.clone());
                        c
                    })
                })
                .collect();
        }
        out.extend(combos.into_iter().map(|ch| Tree::Query(i, ch)));
    }
    out
}

fn brute_min_error(trees: &[Tree], entries: &[(Word, bool)], mu: &FiniteDistribution) -> Q {
    trees
        .iter()
        .map(|t| {
            entries
                .iter()
                .filter(|(x, v)| t.eval(x) != *v)
                .map(|(x, _)| mu.weight(x))
                .sum::<Q>()
        })
        .min()
        .unwrap()
}

fn dist_s3() -> PartialFn {
    parse_fn("dist(sym:3,1)", &mut SpecContext::new(1000)).unwrap().f
}

fn weighted(entries: &[(Word, bool)], weights: &[u32]) -> FiniteDistribution {
    let total: u32 = weights.iter().sum();
    FiniteDistribution::new(
        entries
            .iter()
            .zip(weights)
            .filter(|(_, &w)| w > 0)
            .map(|((x, _), &w)| (x.clone(), q(w.into(), total.into()))),
    )
    .unwrap()
}

#[test]
fn distributional_complexity_under_uniform_is_two_at_one_tenth() {
    let f = dist_s3();
    let entries = f.entries().unwrap();
    let mu = FiniteDistribution::uniform(entries.iter().map(|(x, _)| x.clone())).unwrap();
    let d1 = brute_min_error(&all_trees(3, 3, 1), &entries, &mu);
    let d2 = brute_min_error(&all_trees(3, 3, 2), &entries, &mu);
    assert!(d1 > q(1, 10) && d2 <= q(1, 10), "depth 1: {d1}, depth 2: {d2}");
    assert_eq!(distributional_rand_complexity(&f, &mu, &q(1, 10)).unwrap(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn min_error_matches_tree_enumeration(weights in prop::collection::vec(0u32..6, 33)) {
        let f = dist_s3();
        let entries = f.entries().unwrap();
        prop_assume!(weights.len() >= entries.len());
        let w = &weights[..entries.len()];
        prop_assume!(w.iter().any(|&x| x > 0));
        let mu = weighted(&entries, w);
        let (det, _) = det_query_complexity(&f).unwrap();
        for k in 0..=2 {
            let trees = all_trees(3, 3, k);
            let (got, tree) = min_error_at_depth(&f, &mu, k).unwrap();
            prop_assert_eq!(&got, &brute_min_error(&trees, &entries, &mu), "depth {}", k);
            let realised: Q = entries.iter().filter(|(x, v)| tree.eval(x) != *v).map(|(x, _)| mu.weight(x)).sum();
            prop_assert_eq!(realised, got);
        }
        for eps in [q(0, 1), q(1, 10), q(1, 3)] {
            prop_assert!(distributional_rand_complexity(&f, &mu, &eps).unwrap() <= det);
        }
    }
}

#[test]
fn symmetrizing_a_dp_hard_distribution_keeps_it_hard() {
    let g = GroupAction::symmetric(3);
    let f = dist_s3();
    for budget in 0..=2 {
        let hard = hard_distribution_dp(&f, budget, 200).unwrap();
        let (base, _) = min_error_at_depth(&f, &hard.distribution, budget).unwrap();
        assert_eq!(base, hard.error);
        let sym = symmetrize(&hard.distribution, &g, 1000).unwrap();
        let (after, _) = min_error_at_depth(&f, &sym, budget).unwrap();
        assert!(after >= base, "budget {budget}: {after} < {base}");
        assert!(!after.is_negative() && after <= q(1, 2));
    }
}
