//! Approximate degree in the z_{ij} basis by LP, with exact primal/dual
//! certificates checked in the unreduced space.

use std::collections::HashMap;

use num::{BigRational, One, Signed, Zero};
use serde_json::{json, Value};

use super::basis::{monomial_orbits, word_orbits, LpSymmetry, Monomial, MonomialBasis, Orbits, MONOMIAL_CAP};
use super::simplex::{FreeGeLp, LpOptions, LpStatus};
use super::{rational_string, OracleError};
use crate::boolfn::{all_words, distinguishing_fn, format_word, PartialFn, Word};
use crate::perm::GroupAction;
use crate::shuffle::FiniteDistribution;

/// Default cap on |[m]^n| for the bounded LP.
pub const CUBE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct DegreeOptions {
    /// Require 0 ≤ p ≤ 1 on all of [m]^n, not only on the promise.
    pub bounded: bool,
    pub lp: LpOptions,
    pub monomial_cap: usize,
    pub cube_cap: usize,
}

impl Default for DegreeOptions {
    fn default() -> Self {
        DegreeOptions {
            bounded: true,
            lp: LpOptions::default(),
            monomial_cap: MONOMIAL_CAP,
            cube_cap: CUBE_CAP,
        }
    }
}

/// One inequality family of the degree LP. Variables are the polynomial
/// coefficients and the error `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowKind {
    /// 0-input: p(x) ≥ 0
    ZeroLower,
    /// 0-input: p(x) ≤ t
    ZeroUpper,
    /// 1-input: p(x) ≥ 1 − t
    OneLower,
    /// 1-input: p(x) ≤ 1
    OneUpper,
    /// off-promise: p(x) ≥ 0
    CubeLower,
    /// off-promise: p(x) ≤ 1
    CubeUpper,
}

impl RowKind {
    /// Coefficient of p(x) when the row is written as `… ≥ h`.
    fn p_sign(self) -> i32 {
        match self {
            RowKind::ZeroLower | RowKind::OneLower | RowKind::CubeLower => 1,
            _ => -1,
        }
    }

    fn t_coef(self) -> i32 {
        match self {
            RowKind::ZeroUpper | RowKind::OneLower => 1,
            _ => 0,
        }
    }

    fn h(self) -> i32 {
        match self {
            RowKind::OneLower => 1,
            RowKind::OneUpper | RowKind::CubeUpper => -1,
            _ => 0,
        }
    }

    /// Rows that do not involve `t`: the boundedness constraints.
    fn is_hard(self) -> bool {
        self.t_coef() == 0
    }

    pub fn label(self) -> &'static str {
        match self {
            RowKind::ZeroLower => "zero-lower",
            RowKind::ZeroUpper => "zero-upper",
            RowKind::OneLower => "one-lower",
            RowKind::OneUpper => "one-upper",
            RowKind::CubeLower => "cube-lower",
            RowKind::CubeUpper => "cube-upper",
        }
    }

    fn for_value(v: Option<bool>) -> [RowKind; 2] {
        match v {
            Some(false) => [RowKind::ZeroLower, RowKind::ZeroUpper],
            Some(true) => [RowKind::OneLower, RowKind::OneUpper],
            None => [RowKind::CubeLower, RowKind::CubeUpper],
        }
    }
}

/// Optimal solution of the degree-d LP.
#[derive(Clone, Debug)]
pub struct DegreeLp {
    pub degree: usize,
    /// Optimal error t*(d).
    pub error: BigRational,
    /// Nonzero coefficients of an optimal p.
    pub primal: Vec<(Monomial, BigRational)>,
    /// Weights on the error bands: the hard distribution.
    pub dual: FiniteDistribution,
    /// Multipliers of the boundedness rows.
    pub bounds: Vec<(Word, RowKind, BigRational)>,
    pub mode: &'static str,
}

impl DegreeLp {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "epsilon": rational_string(&self.error),
            "primal": self.primal.iter().map(|(m, c)| json!([m.to_string(), rational_string(c)])).collect::<Vec<_>>(),
            "dual": self.dual.to_json(),
            "bounds": self.bounds.iter().map(|(w, k, c)| json!([format_word(w), k.label(), rational_string(c)])).collect::<Vec<_>>(),
            "mode": self.mode,
        })
    }
}

/// Result of `approx_degree`: the optimal LP at the least feasible degree and
/// the dual refuting the degree below it.
#[derive(Clone, Debug)]
pub struct LpCertificate {
    pub degree: usize,
    pub target: BigRational,
    pub bounded: bool,
    pub solution: DegreeLp,
    pub refutation: Option<DegreeLp>,
    pub errors_by_degree: Vec<BigRational>,
}

impl LpCertificate {
    pub fn error(&self) -> &BigRational {
        &self.solution.error
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.solution.to_json();
        let obj = v.as_object_mut().expect("object");
        obj.insert("status".into(), json!("optimal"));
        obj.insert("target_epsilon".into(), json!(rational_string(&self.target)));
        obj.insert("bounded".into(), json!(self.bounded));
        obj.insert(
            "errors_by_degree".into(),
            json!(self.errors_by_degree.iter().map(rational_string).collect::<Vec<_>>()),
        );
        obj.insert(
            "refutation".into(),
            match &self.refutation {
                Some(r) => {
                    let mut rv = r.to_json();
                    rv.as_object_mut()
                        .expect("object")
                        .insert("status".into(), json!("infeasible"));
                    rv
                }
                None => Value::Null,
            },
        );
        v
    }
}

/// Row set of the degree LP: promise words, then the rest of the cube when
/// bounded, with orbits under the LP symmetry.
struct RowSet {
    words: Vec<Word>,
    values: Vec<Option<bool>>,
    orbits: Orbits,
}

impl RowSet {
    fn build(f: &PartialFn, opts: &DegreeOptions, sym: &LpSymmetry) -> Result<Self, OracleError> {
        check_symmetry_shape(f, sym)?;
        let mut words = Vec::new();
        let mut values = Vec::new();
        if opts.bounded {
            for w in all_words(f.n(), f.m(), opts.cube_cap)? {
                values.push(f.eval(&w));
                words.push(w);
            }
        } else {
            for (w, v) in f.entries_capped(opts.cube_cap)? {
                words.push(w);
                values.push(Some(v));
            }
        }
        if !values.iter().any(Option::is_some) {
            return Err(OracleError::EmptyPromise);
        }
        let orbits = word_orbits(&words, sym)?;
        for members in &orbits.members {
            let v0 = values[members[0]];
            if let Some(&bad) = members.iter().find(|&&k| values[k] != v0) {
                return Err(OracleError::NotSymmetric(format!(
                    "{} and {} share an orbit but differ in value",
                    format_word(&words[members[0]]),
                    format_word(&words[bad])
                )));
            }
        }
        Ok(RowSet { words, values, orbits })
    }

    /// One (orbit, kind) pair per reduced LP row.
    fn rows(&self, keep: impl Fn(RowKind) -> bool) -> Vec<(usize, RowKind)> {
        let mut out = Vec::new();
        for (o, members) in self.orbits.members.iter().enumerate() {
            for kind in RowKind::for_value(self.values[members[0]]) {
                if keep(kind) {
                    out.push((o, kind));
                }
            }
        }
        out
    }
}

fn check_symmetry_shape(f: &PartialFn, sym: &LpSymmetry) -> Result<(), OracleError> {
    if sym.positions.degree() != f.n() || sym.symbols.degree() != f.m() {
        return Err(OracleError::BadShape(format!(
            "symmetry acts on {} positions and {} symbols; function has n={}, m={}",
            sym.positions.degree(),
            sym.symbols.degree(),
            f.n(),
            f.m()
        )));
    }
    Ok(())
}

fn int(v: i32) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Counts, per monomial orbit, the monomials satisfied by `x`.
fn orbit_counts(basis: &MonomialBasis, morb: &Orbits, x: &[usize]) -> HashMap<usize, i64> {
    let mut counts = HashMap::new();
    for k in basis.satisfied(x) {
        *counts.entry(morb.id[k]).or_insert(0) += 1;
    }
    counts
}

/// Solves the degree-d LP (minimize t) and verifies the certificate in the
/// unreduced space.
fn solve_degree_lp(
    f: &PartialFn,
    rs: &RowSet,
    d: usize,
    opts: &DegreeOptions,
    sym: &LpSymmetry,
) -> Result<DegreeLp, OracleError> {
    let basis = MonomialBasis::new(f.n(), f.m(), d, opts.monomial_cap)?;
    let morb = monomial_orbits(&basis, sym)?;
    let k = morb.count();
    let rows = rs.rows(|_| true);
    let mut g = Vec::with_capacity(rows.len());
    let mut h = Vec::with_capacity(rows.len());
    let mut count_cache: HashMap<usize, HashMap<usize, i64>> = HashMap::new();
    for &(o, kind) in &rows {
        let counts = count_cache
            .entry(o)
            .or_insert_with(|| orbit_counts(&basis, &morb, &rs.words[rs.orbits.members[o][0]]));
        let mut row = vec![BigRational::zero(); k + 1];
        for (&mo, &c) in counts.iter() {
            row[mo] = BigRational::from_integer((c * kind.p_sign() as i64).into());
        }
        row[k] = int(kind.t_coef());
        g.push(row);
        h.push(int(kind.h()));
    }
    let mut c = vec![BigRational::zero(); k + 1];
    c[k] = BigRational::one();
    let lp = FreeGeLp { g, h, c };
    let sol = lp.solve(&opts.lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(OracleError::CertificateRejected(format!(
            "degree-{d} LP reported {:?}",
            sol.status
        )));
    }
    let t = sol.v[k].clone();
    let orbit_coef = &sol.v[..k];

    let mut band = Vec::new();
    let mut bounds = Vec::new();
    for (&(o, kind), y) in rows.iter().zip(&sol.y) {
        if y.is_zero() {
            continue;
        }
        let members = &rs.orbits.members[o];
        let w = y / BigRational::from_integer((members.len() as i64).into());
        for &mi in members {
            let word = rs.words[mi].clone();
            if kind.is_hard() {
                bounds.push((word, kind, w.clone()));
            } else {
                band.push((word, w.clone()));
            }
        }
    }
    bounds.sort();
    verify_full(rs, &basis, &morb, orbit_coef, &t, &band, &bounds)?;
    let dual = FiniteDistribution::new(band).map_err(|e| OracleError::CertificateRejected(e.to_string()))?;
    let primal = (0..basis.len())
        .filter(|&i| !orbit_coef[morb.id[i]].is_zero())
        .map(|i| (basis.monomial(i), orbit_coef[morb.id[i]].clone()))
        .collect();
    Ok(DegreeLp {
        degree: d,
        error: t,
        primal,
        dual,
        bounds,
        mode: sol.mode,
    })
}

/// Checks primal feasibility at every row word and dual feasibility with
/// zero gap, monomial by monomial.
fn verify_full(
    rs: &RowSet,
    basis: &MonomialBasis,
    morb: &Orbits,
    orbit_coef: &[BigRational],
    t: &BigRational,
    band: &[(Word, BigRational)],
    bounds: &[(Word, RowKind, BigRational)],
) -> Result<(), OracleError> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    let p = |x: &[usize]| -> BigRational {
        basis
            .satisfied(x)
            .into_iter()
            .map(|i| &orbit_coef[morb.id[i]])
            .filter(|c| !c.is_zero())
            .sum()
    };
    for (w, v) in rs.words.iter().zip(&rs.values) {
        let px = p(w);
        let ok = match v {
            Some(false) => px >= zero && &px <= t,
            Some(true) => px <= one && px >= &one - t,
            None => px >= zero && px <= one,
        };
        if !ok {
            return Err(OracleError::CertificateRejected(format!(
                "p({}) = {} violates its band at t = {}",
                format_word(w),
                px,
                t
            )));
        }
    }
    let value_of: HashMap<&[usize], Option<bool>> =
        rs.words.iter().zip(&rs.values).map(|(w, v)| (w.as_slice(), *v)).collect();
    let mut acc = vec![BigRational::zero(); basis.len()];
    let mut t_sum = BigRational::zero();
    let mut objective = BigRational::zero();
    let mut add = |w: &[usize], kind: RowKind, y: &BigRational| {
        if y.is_negative() {
            return false;
        }
        let signed = if kind.p_sign() > 0 { y.clone() } else { -y };
        for i in basis.satisfied(w) {
            acc[i] += &signed;
        }
        if kind.t_coef() == 1 {
            t_sum += y;
        }
        objective += y * int(kind.h());
        true
    };
    for (w, y) in band {
        let kind = match value_of.get(w.as_slice()) {
            Some(Some(false)) => RowKind::ZeroUpper,
            Some(Some(true)) => RowKind::OneLower,
            _ => return Err(OracleError::CertificateRejected("dual weight outside the promise".into())),
        };
        if !add(w, kind, y) {
            return Err(OracleError::CertificateRejected("negative dual weight".into()));
        }
    }
    for (w, kind, y) in bounds {
        if !add(w, *kind, y) {
            return Err(OracleError::CertificateRejected("negative dual weight".into()));
        }
    }
    if let Some(i) = acc.iter().position(|v| !v.is_zero()) {
        return Err(OracleError::CertificateRejected(format!(
            "dual does not cancel monomial {}",
            basis.monomial(i)
        )));
    }
    if !t_sum.is_one() || &objective != t {
        return Err(OracleError::CertificateRejected(format!(
            "duality gap: dual value {objective}, band mass {t_sum}, primal {t}"
        )));
    }
    Ok(())
}

/// Least d whose LP error is ≤ ε, with no symmetry reduction.
pub fn approx_degree(f: &PartialFn, eps: &BigRational, bounded: bool) -> Result<LpCertificate, OracleError> {
    let opts = DegreeOptions {
        bounded,
        ..Default::default()
    };
    approx_degree_with(f, eps, &opts, &LpSymmetry::trivial(f.n(), f.m()))
}

/// As `approx_degree`, solving the LP reduced by `sym`. The certificate is
/// verified in the full space regardless.
pub fn approx_degree_with(
    f: &PartialFn,
    eps: &BigRational,
    opts: &DegreeOptions,
    sym: &LpSymmetry,
) -> Result<LpCertificate, OracleError> {
    if eps.is_negative() {
        return Err(OracleError::BadShape("epsilon must be non-negative".into()));
    }
    let rs = RowSet::build(f, opts, sym)?;
    let mut errors = Vec::new();
    let mut previous: Option<DegreeLp> = None;
    for d in 0..=f.n() {
        let lp = solve_degree_lp(f, &rs, d, opts, sym)?;
        errors.push(lp.error.clone());
        if &lp.error <= eps {
            return Ok(LpCertificate {
                degree: d,
                target: eps.clone(),
                bounded: opts.bounded,
                solution: lp,
                refutation: previous,
                errors_by_degree: errors,
            });
        }
        previous = Some(lp);
    }
    Err(OracleError::CertificateRejected(format!(
        "no degree ≤ {} reaches error {}",
        f.n(),
        eps
    )))
}

/// Optimal error of the degree-d LP, i.e. the value t*(d).
pub fn degree_lp(f: &PartialFn, d: usize, opts: &DegreeOptions, sym: &LpSymmetry) -> Result<DegreeLp, OracleError> {
    let rs = RowSet::build(f, opts, sym)?;
    solve_degree_lp(f, &rs, d, opts, sym)
}

fn is_invariant(mu: &FiniteDistribution, sym: &LpSymmetry) -> bool {
    mu.iter()
        .all(|(x, w)| sym.word_images(x).iter().all(|img| &mu.weight(img) == w))
}

/// Least μ-average error of a degree-d polynomial obeying the boundedness
/// rows: min over p of Σ_{f=0} μ(x) p(x) + Σ_{f=1} μ(x) (1 − p(x)). By LP
/// duality this is the error bound certified by μ alone. The reduction by
/// `sym` is used only when μ is invariant under it.
pub fn distribution_error(
    f: &PartialFn,
    mu: &FiniteDistribution,
    d: usize,
    opts: &DegreeOptions,
    sym: &LpSymmetry,
) -> Result<BigRational, OracleError> {
    for x in mu.support() {
        if f.eval(x).is_none() {
            return Err(OracleError::BadShape(format!(
                "distribution weight on {} outside the promise",
                format_word(x)
            )));
        }
    }
    let trivial = LpSymmetry::trivial(f.n(), f.m());
    let sym = if is_invariant(mu, sym) { sym } else { &trivial };
    let rs = RowSet::build(f, opts, sym)?;
    let basis = MonomialBasis::new(f.n(), f.m(), d, opts.monomial_cap)?;
    let morb = monomial_orbits(&basis, sym)?;
    let k = morb.count();
    let rows = rs.rows(RowKind::is_hard);
    let mut g = Vec::with_capacity(rows.len());
    let mut h = Vec::with_capacity(rows.len());
    for &(o, kind) in &rows {
        let counts = orbit_counts(&basis, &morb, &rs.words[rs.orbits.members[o][0]]);
        let mut row = vec![BigRational::zero(); k];
        for (mo, c) in counts {
            row[mo] = BigRational::from_integer((c * kind.p_sign() as i64).into());
        }
        g.push(row);
        h.push(int(kind.h()));
    }
    let mut c = vec![BigRational::zero(); k];
    let mut constant = BigRational::zero();
    for (x, w) in mu.iter() {
        let one = f.eval(x) == Some(true);
        if one {
            constant += w;
        }
        for i in basis.satisfied(x) {
            if one {
                c[morb.id[i]] -= w;
            } else {
                c[morb.id[i]] += w;
            }
        }
    }
    let lp = FreeGeLp { g, h, c };
    let sol = lp.solve(&opts.lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(OracleError::CertificateRejected(format!(
            "distribution LP reported {:?}",
            sol.status
        )));
    }
    Ok(constant + sol.value)
}

/// Hard distribution from the dual of the degree-`budget` LP.
pub fn hard_distribution_poly(
    f: &PartialFn,
    budget: usize,
    opts: &DegreeOptions,
    sym: &LpSymmetry,
) -> Result<DegreeLp, OracleError> {
    degree_lp(f, budget.min(f.n()), opts, sym)
}

/// The symmetry used for distinguishing functions: G on positions and on
/// symbols.
pub fn distinguishing_symmetry(g: &GroupAction) -> LpSymmetry {
    LpSymmetry {
        positions: g.clone(),
        symbols: g.clone(),
    }
}

#[derive(Clone, Debug)]
pub enum CostBound {
    Infinite,
    Finite {
        value: BigRational,
        certificate: Box<LpCertificate>,
    },
}

impl CostBound {
    pub fn is_infinite(&self) -> bool {
        matches!(self, CostBound::Infinite)
    }

    pub fn value_string(&self) -> String {
        match self {
            CostBound::Infinite => "inf".into(),
            CostBound::Finite { value, .. } => rational_string(value),
        }
    }
}

/// approx_degree(distinguishing_fn(G, r), ε) / 2, or ∞ when r ≥ n.
pub fn cost_lower_proxy(
    g: &GroupAction,
    r: usize,
    eps: &BigRational,
    opts: &DegreeOptions,
) -> Result<CostBound, OracleError> {
    if r >= g.degree() {
        return Ok(CostBound::Infinite);
    }
    let f = distinguishing_fn(g, r)?;
    let cert = approx_degree_with(&f, eps, opts, &distinguishing_symmetry(g))?;
    Ok(CostBound::Finite {
        value: BigRational::new((cert.degree as i64).into(), 2.into()),
        certificate: Box::new(cert),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{and_fn, constant_fn, triv, xor_fn};
    use crate::oracles::simplex::SolveMode;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn constants_have_degree_zero() {
        for v in [false, true] {
            let f = constant_fn(3, 2, v).unwrap();
            let c = approx_degree(&f, &q(0, 1), true).unwrap();
            assert_eq!(c.degree, 0);
            assert!(c.error().is_zero());
        }
    }

    #[test]
    fn xor_and_and() {
        let x2 = xor_fn(2).unwrap();
        let c = approx_degree(&x2, &q(1, 3), true).unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.errors_by_degree, vec![q(1, 2), q(1, 2), q(0, 1)]);
        let a2 = and_fn(2).unwrap();
        // p = (x1 + x2)/3 meets the 1/3 bands
        let c = approx_degree(&a2, &q(1, 3), true).unwrap();
        assert_eq!(c.degree, 1);
        assert_eq!(c.errors_by_degree, vec![q(1, 2), q(1, 3)]);
        let c = approx_degree(&a2, &q(1, 4), true).unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.refutation.unwrap().error, q(1, 3));
    }

    #[test]
    fn triv3_budget_zero_dual() {
        let f = triv(3).unwrap();
        let lp = hard_distribution_poly(&f, 0, &DegreeOptions::default(), &LpSymmetry::trivial(3, 2)).unwrap();
        assert_eq!(lp.error, q(1, 2));
        assert_eq!(lp.dual.weight(&[0, 0, 0]), q(1, 2));
        assert_eq!(lp.dual.weight(&[1, 1, 1]), q(1, 2));
        let sym = LpSymmetry::positions_only(GroupAction::symmetric(3), 2);
        let red = hard_distribution_poly(&f, 0, &DegreeOptions::default(), &sym).unwrap();
        assert_eq!(red.error, q(1, 2));
        let c = approx_degree_with(&f, &q(1, 3), &DegreeOptions::default(), &sym).unwrap();
        assert_eq!(c.degree, 1);
    }

    #[test]
    fn float_path_agrees_with_exact() {
        let f = triv(4).unwrap();
        let sym = LpSymmetry::trivial(4, 2);
        let mut opts = DegreeOptions::default();
        for d in 0..=2 {
            opts.lp.mode = SolveMode::Exact;
            let ex = degree_lp(&f, d, &opts, &sym).unwrap();
            opts.lp.mode = SolveMode::Float;
            let fl = degree_lp(&f, d, &opts, &sym).unwrap();
            assert_eq!(ex.error, fl.error);
        }
    }

    #[test]
    fn distribution_error_reproduces_optimum() {
        let f = xor_fn(2).unwrap();
        let opts = DegreeOptions::default();
        let sym = LpSymmetry::trivial(2, 2);
        let lp = degree_lp(&f, 1, &opts, &sym).unwrap();
        assert_eq!(distribution_error(&f, &lp.dual, 1, &opts, &sym).unwrap(), lp.error);
        let point = FiniteDistribution::point(vec![0, 1]);
        assert!(distribution_error(&f, &point, 1, &opts, &sym).unwrap().is_zero());
    }

    #[test]
    fn symmetric_reduction_matches_full_lp() {
        let g = GroupAction::symmetric(3);
        let f = distinguishing_fn(&g, 1).unwrap();
        let opts = DegreeOptions::default();
        for d in 0..=2 {
            let full = degree_lp(&f, d, &opts, &LpSymmetry::trivial(3, 3)).unwrap();
            let red = degree_lp(&f, d, &opts, &distinguishing_symmetry(&g)).unwrap();
            assert_eq!(full.error, red.error, "d = {d}");
        }
    }

    #[test]
    fn wrong_symmetry_is_rejected() {
        let f = triv(3).unwrap();
        let sym = LpSymmetry {
            positions: GroupAction::trivial(3),
            symbols: GroupAction::symmetric(2),
        };
        assert!(matches!(
            approx_degree_with(&f, &q(1, 3), &DegreeOptions::default(), &sym),
            Err(OracleError::NotSymmetric(_))
        ));
    }

    #[test]
    fn cost_proxy_infinite_and_finite() {
        let g = GroupAction::symmetric(3);
        let opts = DegreeOptions::default();
        assert!(cost_lower_proxy(&g, 3, &q(1, 3), &opts).unwrap().is_infinite());
        match cost_lower_proxy(&g, 1, &q(1, 3), &opts).unwrap() {
            CostBound::Finite { value, .. } => assert!(value >= q(1, 2)),
            CostBound::Infinite => panic!("finite expected"),
        }
    }
}
