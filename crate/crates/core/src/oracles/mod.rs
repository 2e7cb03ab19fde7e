//! LP and decision-tree oracles for query complexity on small instances.

mod basis;
mod degree;
mod dtree;
pub mod simplex;

use num::BigRational;
use thiserror::Error;

use crate::boolfn::BoolFnError;

pub use basis::{monomial_count, LpSymmetry, Monomial, MonomialBasis, MONOMIAL_CAP};
pub use degree::{
    approx_degree, approx_degree_with, cost_lower_proxy, degree_lp, distinguishing_symmetry, distribution_error,
    hard_distribution_poly, CostBound, DegreeLp, DegreeOptions, LpCertificate, RowKind, CUBE_CAP,
};
pub use dtree::{
    det_query_complexity, distributional_rand_complexity, hard_distribution_dp, min_error_at_depth, DecisionTree,
    DpHardDistribution,
};
pub use simplex::{LpOptions, SolveMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("{0}")]
    BadShape(String),
    #[error("function has an empty promise")]
    EmptyPromise,
    #[error("claimed symmetry does not hold: {0}")]
    NotSymmetric(String),
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    #[error("simplex exceeded {0} pivots")]
    SolverStalled(usize),
    #[error(transparent)]
    BoolFn(#[from] BoolFnError),
}

impl OracleError {
    pub fn name(&self) -> &'static str {
        match self {
            OracleError::TooLarge(_) => "TooLarge",
            OracleError::BadShape(_) => "BadShape",
            OracleError::EmptyPromise => "EmptyPromise",
            OracleError::NotSymmetric(_) => "NotSymmetric",
            OracleError::CertificateRejected(_) => "CertificateRejected",
            OracleError::SolverStalled(_) => "SolverStalled",
            OracleError::BoolFn(e) => e.name(),
        }
    }
}

/// `p/q`, or `p` for integers.
pub fn rational_string(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parses `p/q`, an integer, or a decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: num::BigInt = a.trim().parse().ok()?;
        let b: num::BigInt = b.trim().parse().ok()?;
        if b == 0.into() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let whole: num::BigInt = format!("{}{}", int.trim_start_matches('-'), frac).parse().ok()?;
        let den = num::pow(num::BigInt::from(10), frac.len());
        let v = BigRational::new(whole, den);
        return Some(if neg { -v } else { v });
    }
    Some(BigRational::from_integer(s.parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("1/3").unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-1.5").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational("2").unwrap(), BigRational::from_integer(2.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
        assert_eq!(rational_string(&BigRational::new(2.into(), 4.into())), "1/2");
        assert_eq!(rational_string(&BigRational::from_integer(3.into())), "3");
    }
}
