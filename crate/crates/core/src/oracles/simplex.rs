//! Dense two-phase tableau simplex for `min c·x, Ax = b, x ≥ 0`, generic over
//! exact rationals and `f64`, plus exact re-solution from a floating-point
//! basis.

use std::fmt::Debug;

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use super::OracleError;

/// Tolerance for the floating-point path.
pub const FLOAT_TOL: f64 = 1e-9;

/// Smallest pivot element accepted on the floating-point path.
const PIVOT_TOL: f64 = 1e-7;

/// Consecutive degenerate pivots after which Bland's rule takes over.
const BLAND_AFTER: usize = 50;

pub trait Scalar: Clone + Debug {
    fn scalar_zero() -> Self;
    fn scalar_one() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_nonzero(&self) -> bool {
        self.is_pos() || self.is_neg()
    }
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self -= a·b`
    fn sub_mul(&mut self, a: &Self, b: &Self);
    fn magnitude(&self) -> f64;
    /// Acceptable pivot element in the ratio test.
    fn pivot_ok(&self) -> bool {
        self.is_pos()
    }
    /// Acceptable pivot element when driving an artificial out of the basis.
    fn drive_ok(&self) -> bool {
        self.is_nonzero()
    }
    /// `a/b < c/d` for positive `b`, `d`.
    fn ratio_lt(a: &Self, b: &Self, c: &Self, d: &Self) -> bool;
}

impl Scalar for BigRational {
    fn scalar_zero() -> Self {
        Zero::zero()
    }
    fn scalar_one() -> Self {
        One::one()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::MAX)
    }
    fn ratio_lt(a: &Self, b: &Self, c: &Self, d: &Self) -> bool {
        a * d < c * b
    }
}

impl Scalar for f64 {
    fn scalar_zero() -> Self {
        0.0
    }
    fn scalar_one() -> Self {
        1.0
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_TOL
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn pivot_ok(&self) -> bool {
        *self > PIVOT_TOL
    }
    fn drive_ok(&self) -> bool {
        self.abs() > PIVOT_TOL
    }
    fn ratio_lt(a: &Self, b: &Self, c: &Self, d: &Self) -> bool {
        a / b < c / d - FLOAT_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// `min c·x` subject to `Ax = b`, `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct StdLp<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct StdSolution<T> {
    pub status: LpStatus,
    pub x: Vec<T>,
    /// Row multipliers: `c − Aᵀy ≥ 0` and `b·y = c·x` at optimality.
    pub y: Vec<T>,
    pub objective: T,
    /// Basic columns, aligned with `rows`.
    pub basis: Vec<usize>,
    /// Rows kept after dropping redundant equalities.
    pub rows: Vec<usize>,
    pub pivots: usize,
}

struct Tableau<T> {
    t: Vec<Vec<T>>,
    z: Vec<T>,
    basis: Vec<usize>,
    alive: Vec<bool>,
    n: usize,
    width: usize,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, s: usize) {
        let piv = self.t[r][s].clone();
        for v in self.t[r].iter_mut() {
            if v.is_nonzero() {
                *v = v.div(&piv);
            }
        }
        self.t[r][s] = T::scalar_one();
        let nz: Vec<usize> = (0..self.width).filter(|&j| self.t[r][j].is_nonzero()).collect();
        let (before, rest) = self.t.split_at_mut(r);
        let (prow, after) = rest.split_first_mut().expect("row");
        for (i, row) in before.iter_mut().chain(after.iter_mut()).enumerate() {
            let idx = if i < r { i } else { i + 1 };
            if !self.alive[idx] || !row[s].is_nonzero() {
                continue;
            }
            let factor = row[s].clone();
            for &j in &nz {
                row[j].sub_mul(&factor, &prow[j]);
            }
            row[s] = T::scalar_zero();
        }
        if self.z[s].is_nonzero() {
            let factor = self.z[s].clone();
            for &j in &nz {
                self.z[j].sub_mul(&factor, &prow[j]);
            }
            self.z[s] = T::scalar_zero();
        }
        self.basis[r] = s;
        self.pivots += 1;
    }

    /// Runs simplex iterations on the current objective row. Returns `false`
    /// when the objective is unbounded below.
    fn optimize(&mut self, max_iter: usize) -> Result<bool, OracleError> {
        let rhs = self.width - 1;
        let mut degenerate = 0usize;
        loop {
            if self.pivots > max_iter {
                return Err(OracleError::SolverStalled(self.pivots));
            }
            let bland = degenerate >= BLAND_AFTER;
            let mut enter: Option<usize> = None;
            for j in 0..self.n {
                if self.z[j].is_neg() {
                    match enter {
                        None => enter = Some(j),
                        Some(e) if !bland && self.z[j].magnitude() > self.z[e].magnitude() => enter = Some(j),
                        _ => {}
                    }
                    if bland {
                        break;
                    }
                }
            }
            let Some(s) = enter else {
                return Ok(true);
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.t.len() {
                if !self.alive[i] || !self.t[i][s].pivot_ok() {
                    continue;
                }
                leave = match leave {
                    None => Some(i),
                    Some(l) => {
                        let (a, b) = (&self.t[i][rhs], &self.t[i][s]);
                        let (c, d) = (&self.t[l][rhs], &self.t[l][s]);
                        if T::ratio_lt(a, b, c, d) {
                            Some(i)
                        } else if !T::ratio_lt(c, d, a, b) && self.basis[i] < self.basis[l] {
                            Some(i)
                        } else {
                            Some(l)
                        }
                    }
                };
            }
            let Some(r) = leave else {
                return Ok(false);
            };
            if self.t[r][rhs].is_pos() {
                degenerate = 0;
            } else {
                degenerate += 1;
            }
            self.pivot(r, s);
        }
    }
}

pub fn solve_std<T: Scalar>(lp: &StdLp<T>, max_iter: usize) -> Result<StdSolution<T>, OracleError> {
    let m = lp.b.len();
    let n = lp.c.len();
    if lp.a.len() != m || lp.a.iter().any(|r| r.len() != n) {
        return Err(OracleError::BadShape("constraint matrix shape".into()));
    }
    let width = n + m + 1;
    let mut flip = vec![false; m];
    let mut t = Vec::with_capacity(m);
    for i in 0..m {
        flip[i] = lp.b[i].is_neg();
        let mut row = Vec::with_capacity(width);
        for j in 0..n {
            row.push(if flip[i] { lp.a[i][j].neg() } else { lp.a[i][j].clone() });
        }
        for k in 0..m {
            row.push(if k == i { T::scalar_one() } else { T::scalar_zero() });
        }
        row.push(if flip[i] { lp.b[i].neg() } else { lp.b[i].clone() });
        t.push(row);
    }
    // phase one: minimize the sum of artificials
    let mut z = vec![T::scalar_zero(); width];
    for row in &t {
        for j in 0..n {
            if row[j].is_nonzero() {
                z[j] = z[j].sub(&row[j]);
            }
        }
        z[width - 1] = z[width - 1].sub(&row[width - 1]);
    }
    let mut tab = Tableau {
        t,
        z,
        basis: (n..n + m).collect(),
        alive: vec![true; m],
        n,
        width,
        pivots: 0,
    };
    tab.optimize(max_iter)?;
    if tab.z[width - 1].is_neg() {
        return Ok(StdSolution {
            status: LpStatus::Infeasible,
            x: vec![T::scalar_zero(); n],
            y: vec![T::scalar_zero(); m],
            objective: T::scalar_zero(),
            basis: Vec::new(),
            rows: Vec::new(),
            pivots: tab.pivots,
        });
    }
    // drive remaining artificials out of the basis; rows where that is
    // impossible are redundant
    for i in 0..m {
        if tab.basis[i] < n {
            continue;
        }
        let mut best: Option<usize> = None;
        for j in 0..n {
            if tab.t[i][j].is_nonzero()
                && best.is_none_or(|b| tab.t[i][j].magnitude() > tab.t[i][b].magnitude())
            {
                best = Some(j);
            }
        }
        match best {
            Some(j) if tab.t[i][j].drive_ok() => tab.pivot(i, j),
            Some(_) => tab.alive[i] = false,
            None => tab.alive[i] = false,
        }
    }
    // phase two
    let mut z = vec![T::scalar_zero(); width];
    z[..n].clone_from_slice(&lp.c);
    for i in 0..m {
        if !tab.alive[i] {
            continue;
        }
        let cb = &lp.c[tab.basis[i]];
        if !cb.is_nonzero() {
            continue;
        }
        for j in 0..width {
            if tab.t[i][j].is_nonzero() {
                z[j].sub_mul(cb, &tab.t[i][j]);
            }
        }
    }
    tab.z = z;
    let bounded = tab.optimize(max_iter)?;
    let rows: Vec<usize> = (0..m).filter(|&i| tab.alive[i]).collect();
    let basis: Vec<usize> = rows.iter().map(|&i| tab.basis[i]).collect();
    if !bounded {
        return Ok(StdSolution {
            status: LpStatus::Unbounded,
            x: vec![T::scalar_zero(); n],
            y: vec![T::scalar_zero(); m],
            objective: T::scalar_zero(),
            basis,
            rows,
            pivots: tab.pivots,
        });
    }
    let mut x = vec![T::scalar_zero(); n];
    for &i in &rows {
        x[tab.basis[i]] = tab.t[i][width - 1].clone();
    }
    let y: Vec<T> = (0..m)
        .map(|k| {
            let v = tab.z[n + k].neg();
            if flip[k] {
                v.neg()
            } else {
                v
            }
        })
        .collect();
    Ok(StdSolution {
        status: LpStatus::Optimal,
        x,
        y,
        objective: tab.z[width - 1].neg(),
        basis,
        rows,
        pivots: tab.pivots,
    })
}

/// Solves `M u = r` exactly; `None` when `M` is singular.
pub fn solve_linear_exact(mut mat: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let k = rhs.len();
    for col in 0..k {
        let p = (col..k).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, p);
        rhs.swap(col, p);
        let piv = mat[col][col].clone();
        for j in col..k {
            mat[col][j] = &mat[col][j] / &piv;
        }
        rhs[col] = &rhs[col] / &piv;
        for r in 0..k {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let f = mat[r][col].clone();
            for j in col..k {
                let delta = &f * &mat[col][j];
                mat[r][j] -= delta;
            }
            let delta = &f * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}

/// Exact solve restricted to `cols`, adding columns with negative reduced
/// cost until none remain. `None` when the restricted problem is infeasible
/// or the rounds run out.
fn exact_on_columns(
    lp: &StdLp<BigRational>,
    mut cols: Vec<usize>,
    max_pivots: usize,
) -> Result<Option<StdSolution<BigRational>>, OracleError> {
    const ROUNDS: usize = 30;
    const ADD_PER_ROUND: usize = 64;
    let n = lp.c.len();
    for _ in 0..ROUNDS {
        cols.sort_unstable();
        cols.dedup();
        let sub = StdLp {
            a: lp.a.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect(),
            b: lp.b.clone(),
            c: cols.iter().map(|&j| lp.c[j].clone()).collect(),
        };
        let sol = solve_std(&sub, max_pivots)?;
        if sol.status != LpStatus::Optimal {
            return Ok(None);
        }
        let mut entering: Vec<(BigRational, usize)> = Vec::new();
        for j in 0..n {
            let mut red = lp.c[j].clone();
            for (i, row) in lp.a.iter().enumerate() {
                if !sol.y[i].is_zero() && !row[j].is_zero() {
                    red -= &sol.y[i] * &row[j];
                }
            }
            if red.is_negative() {
                entering.push((red, j));
            }
        }
        if entering.is_empty() {
            let mut x = vec![BigRational::zero(); n];
            for (k, &j) in cols.iter().enumerate() {
                x[j] = sol.x[k].clone();
            }
            return Ok(Some(StdSolution {
                status: LpStatus::Optimal,
                x,
                y: sol.y,
                objective: sol.objective,
                basis: sol.basis.iter().map(|&k| cols[k]).collect(),
                rows: sol.rows,
                pivots: sol.pivots,
            }));
        }
        entering.sort();
        cols.extend(entering.iter().take(ADD_PER_ROUND).map(|e| e.1));
    }
    Ok(None)
}

/// Picks rows of `A` restricted to `cols` that are linearly independent in
/// exact arithmetic; `None` when the columns themselves are dependent.
fn independent_rows(lp: &StdLp<BigRational>, cols: &[usize]) -> Option<Vec<usize>> {
    let mut work: Vec<Vec<BigRational>> = lp.a.iter().map(|r| cols.iter().map(|&j| r[j].clone()).collect()).collect();
    let mut used = vec![false; work.len()];
    let mut picked = Vec::with_capacity(cols.len());
    for c in 0..cols.len() {
        let r = (0..work.len()).find(|&r| !used[r] && !work[r][c].is_zero())?;
        used[r] = true;
        picked.push(r);
        let piv = work[r].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if used[i] || row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &piv[c];
            for j in c..cols.len() {
                if !piv[j].is_zero() {
                    row[j] -= &f * &piv[j];
                }
            }
        }
    }
    Some(picked)
}

/// Re-solves exactly from a basis found in floating point and checks primal
/// and dual feasibility. `None` when the basis is singular or not optimal in
/// exact arithmetic.
pub fn reconstruct_exact(lp: &StdLp<BigRational>, basis: &[usize]) -> Option<StdSolution<BigRational>> {
    let rows = independent_rows(lp, basis)?;
    let rows = rows.as_slice();
    let k = rows.len();
    let n = lp.c.len();
    let bmat: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|&i| basis.iter().map(|&j| lp.a[i][j].clone()).collect())
        .collect();
    let xb = solve_linear_exact(bmat.clone(), rows.iter().map(|&i| lp.b[i].clone()).collect())?;
    if xb.iter().any(|v| v.is_negative()) {
        return None;
    }
    let bt: Vec<Vec<BigRational>> = (0..k).map(|c| (0..k).map(|r| bmat[r][c].clone()).collect()).collect();
    let yk = solve_linear_exact(bt, basis.iter().map(|&j| lp.c[j].clone()).collect())?;
    let mut x = vec![BigRational::zero(); n];
    for (&j, v) in basis.iter().zip(xb) {
        x[j] = v;
    }
    let mut y = vec![BigRational::zero(); lp.b.len()];
    for (&i, v) in rows.iter().zip(yk) {
        y[i] = v;
    }
    for (i, row) in lp.a.iter().enumerate() {
        let ax: BigRational = row.iter().zip(&x).filter(|(_, v)| !v.is_zero()).map(|(a, v)| a * v).sum();
        if ax != lp.b[i] {
            return None;
        }
    }
    for j in 0..n {
        let mut red = lp.c[j].clone();
        for (i, row) in lp.a.iter().enumerate() {
            if !y[i].is_zero() && !row[j].is_zero() {
                red -= &y[i] * &row[j];
            }
        }
        if red.is_negative() {
            return None;
        }
    }
    let objective: BigRational = lp.c.iter().zip(&x).map(|(c, v)| c * v).sum();
    Some(StdSolution {
        status: LpStatus::Optimal,
        x,
        y,
        objective,
        basis: basis.to_vec(),
        rows: rows.to_vec(),
        pivots: 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    /// Exact below `exact_threshold` tableau entries, floating point above.
    Auto,
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug)]
pub struct LpOptions {
    pub mode: SolveMode,
    pub exact_threshold: usize,
    pub max_pivots: usize,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            mode: SolveMode::Auto,
            exact_threshold: 60_000,
            max_pivots: 200_000,
        }
    }
}

/// `min c·v` over free `v` with `G v ≥ h`, solved through its dual
/// `max h·y, Gᵀy = c, y ≥ 0` in standard form.
#[derive(Clone, Debug)]
pub struct FreeGeLp {
    pub g: Vec<Vec<BigRational>>,
    pub h: Vec<BigRational>,
    pub c: Vec<BigRational>,
}

#[derive(Clone, Debug)]
pub struct FreeGeSolution {
    pub status: LpStatus,
    pub v: Vec<BigRational>,
    pub y: Vec<BigRational>,
    pub value: BigRational,
    /// `"exact"` or `"float"`: how the optimal basis was found. The returned
    /// solution is exact and verified either way.
    pub mode: &'static str,
}

impl FreeGeLp {
    fn dual_std(&self) -> StdLp<BigRational> {
        let k = self.c.len();
        let a: Vec<Vec<BigRational>> = (0..k)
            .map(|j| self.g.iter().map(|row| row[j].clone()).collect())
            .collect();
        StdLp {
            a,
            b: self.c.clone(),
            c: self.h.iter().map(|v| -v).collect(),
        }
    }

    /// Exact feasibility of `v` and `y` with equal objective values.
    pub fn verify(&self, v: &[BigRational], y: &[BigRational]) -> bool {
        if v.len() != self.c.len() || y.len() != self.h.len() {
            return false;
        }
        if y.iter().any(|w| w.is_negative()) {
            return false;
        }
        for (row, h) in self.g.iter().zip(&self.h) {
            let gv: BigRational = row.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum();
            if &gv < h {
                return false;
            }
        }
        for (j, c) in self.c.iter().enumerate() {
            let s: BigRational = self
                .g
                .iter()
                .zip(y)
                .filter(|(row, w)| !w.is_zero() && !row[j].is_zero())
                .map(|(row, w)| &row[j] * w)
                .sum();
            if &s != c {
                return false;
            }
        }
        let cv: BigRational = self.c.iter().zip(v).map(|(a, b)| a * b).sum();
        let hy: BigRational = self.h.iter().zip(y).map(|(a, b)| a * b).sum();
        cv == hy
    }

    pub fn solve(&self, opts: &LpOptions) -> Result<FreeGeSolution, OracleError> {
        let std = self.dual_std();
        let size = self.c.len() * (self.h.len() + self.c.len());
        let use_float = match opts.mode {
            SolveMode::Exact => false,
            SolveMode::Float => true,
            SolveMode::Auto => size > opts.exact_threshold,
        };
        if use_float {
            let fl = StdLp {
                a: std.a.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
                b: std.b.iter().map(to_f64).collect(),
                c: std.c.iter().map(to_f64).collect(),
            };
            let sol = solve_std(&fl, opts.max_pivots)?;
            if sol.status == LpStatus::Optimal {
                if let Some(ex) = reconstruct_exact(&std, &sol.basis) {
                    let out = self.from_std(ex, "float");
                    if self.verify(&out.v, &out.y) {
                        return Ok(out);
                    }
                }
                let mut cols: Vec<usize> = (0..fl.c.len()).filter(|&j| sol.x[j].abs() > FLOAT_TOL).collect();
                cols.extend(&sol.basis);
                if let Some(ex) = exact_on_columns(&std, cols, opts.max_pivots)? {
                    let out = self.from_std(ex, "float");
                    if self.verify(&out.v, &out.y) {
                        return Ok(out);
                    }
                }
            }
        }
        let sol = solve_std(&std, opts.max_pivots)?;
        match sol.status {
            LpStatus::Optimal => {
                let out = self.from_std(sol, "exact");
                if !self.verify(&out.v, &out.y) {
                    return Err(OracleError::CertificateRejected("exact simplex output failed verification".into()));
                }
                Ok(out)
            }
            LpStatus::Infeasible => Ok(self.status_only(LpStatus::Unbounded)),
            LpStatus::Unbounded => Ok(self.status_only(LpStatus::Infeasible)),
        }
    }

    fn from_std(&self, sol: StdSolution<BigRational>, mode: &'static str) -> FreeGeSolution {
        let value: BigRational = self.h.iter().zip(&sol.x).map(|(a, b)| a * b).sum();
        FreeGeSolution {
            status: LpStatus::Optimal,
            v: sol.y.iter().map(|w| -w).collect(),
            y: sol.x,
            value,
            mode,
        }
    }

    fn status_only(&self, status: LpStatus) -> FreeGeSolution {
        FreeGeSolution {
            status,
            v: Vec::new(),
            y: Vec::new(),
            value: BigRational::zero(),
            mode: "exact",
        }
    }
}

fn to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&a| q(a, 1)).collect()
    }

    #[test]
    fn small_std_lp() {
        // min −x1 − x2, x1 + 2x2 + s1 = 4, 3x1 + x2 + s2 = 6
        let lp = StdLp {
            a: vec![qs(&[1, 2, 1, 0]), qs(&[3, 1, 0, 1])],
            b: qs(&[4, 6]),
            c: qs(&[-1, -1, 0, 0]),
        };
        let sol = solve_std(&lp, 1000).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, q(-14, 5));
        let by: BigRational = lp.b.iter().zip(&sol.y).map(|(a, b)| a * b).sum();
        assert_eq!(by, sol.objective);

        let fl = StdLp {
            a: lp.a.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
            b: lp.b.iter().map(to_f64).collect(),
            c: lp.c.iter().map(to_f64).collect(),
        };
        let fsol = solve_std(&fl, 1000).unwrap();
        assert!((fsol.objective + 2.8).abs() < 1e-9);
        let ex = reconstruct_exact(&lp, &fsol.basis).unwrap();
        assert_eq!(ex.objective, q(-14, 5));
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x1 + x2 = −1 with x ≥ 0
        let lp = StdLp {
            a: vec![qs(&[1, 1])],
            b: qs(&[-1]),
            c: qs(&[0, 0]),
        };
        assert_eq!(solve_std(&lp, 100).unwrap().status, LpStatus::Infeasible);
        // min −x1, x1 − x2 = 0
        let lp = StdLp {
            a: vec![qs(&[1, -1])],
            b: qs(&[0]),
            c: qs(&[-1, 0]),
        };
        assert_eq!(solve_std(&lp, 100).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let lp = StdLp {
            a: vec![qs(&[1, 1, 0]), qs(&[2, 2, 0]), qs(&[0, 1, 1])],
            b: qs(&[1, 2, 1]),
            c: qs(&[1, 2, 0]),
        };
        let sol = solve_std(&lp, 100).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, q(1, 1));
        assert_eq!(sol.rows.len(), 2);
    }

    #[test]
    fn free_ge_min_max() {
        // min t s.t. t ≥ v, t ≥ 1 − v: value 1/2 at v = 1/2
        let lp = FreeGeLp {
            g: vec![qs(&[-1, 1]), qs(&[1, 1])],
            h: qs(&[0, 1]),
            c: qs(&[0, 1]),
        };
        for mode in [SolveMode::Exact, SolveMode::Float] {
            let sol = lp
                .solve(&LpOptions {
                    mode,
                    ..Default::default()
                })
                .unwrap();
            assert_eq!(sol.value, q(1, 2));
            assert_eq!(sol.v, vec![q(1, 2), q(1, 2)]);
            assert_eq!(sol.y, vec![q(1, 2), q(1, 2)]);
            assert_eq!(sol.mode, if mode == SolveMode::Exact { "exact" } else { "float" });
        }
    }
}
