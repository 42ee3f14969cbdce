//! Integer polynomials through point counts.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{solve, MatrixQ, Rationals, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimEstimate {
    /// `None` when every count is zero.
    pub degree: Option<usize>,
    /// Lowest degree first, trailing zeros trimmed.
    pub coefficients: Vec<i128>,
    /// Some sample beyond those used for interpolation agreed.
    pub validated: bool,
    pub samples: Vec<(u64, u128)>,
}

impl DimEstimate {
    pub fn evaluate(&self, q: u64) -> i128 {
        self.coefficients.iter().rev().fold(0i128, |acc, &c| acc * q as i128 + c)
    }
}

fn interpolate(points: &[(u64, u128)]) -> Vec<Q> {
    let k = points.len();
    let vander = MatrixQ::from_fn(k, k, |r, c| Q::from_integer(BigInt::from(points[r].0).pow(c as u32)));
    let rhs = MatrixQ::from_fn(k, 1, |r, _| Q::from_integer(BigInt::from(points[r].1)));
    let x = solve(&Rationals, &vander, &rhs).expect("distinct nodes give an invertible system");
    (0..k).map(|t| x.at(t, 0).clone()).collect()
}

fn as_integers(coeffs: &[Q]) -> Option<Vec<i128>> {
    let mut out: Vec<i128> =
        coeffs.iter().map(|c| if c.is_integer() { c.to_integer().to_i128() } else { None }).collect::<Option<_>>()?;
    while out.last() == Some(&0) {
        out.pop();
    }
    Some(out)
}

fn eval(coeffs: &[i128], q: u64) -> i128 {
    coeffs.iter().rev().fold(0i128, |acc, &c| acc * q as i128 + c)
}

/// Interpolates through the first `k` samples for increasing `k` and accepts
/// the first integer polynomial that also matches every later sample. If none
/// does, the polynomial through all samples is returned unvalidated.
pub fn fit_counts(samples: &[(u64, u128)], max_degree: usize) -> Result<DimEstimate> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples { needed: 3, found: samples.len() });
    }
    let finish = |coefficients: Vec<i128>, validated: bool| -> Result<DimEstimate> {
        let degree = (!coefficients.is_empty()).then(|| coefficients.len() - 1);
        if degree.is_some_and(|d| d > max_degree) || coefficients.last().is_some_and(|&c| c < 0) {
            return Err(Error::FitFailure);
        }
        Ok(DimEstimate { degree, coefficients, validated, samples: samples.to_vec() })
    };
    for k in 1..samples.len() {
        let Some(coeffs) = as_integers(&interpolate(&samples[..k])) else {
            continue;
        };
        if samples[k..].iter().all(|&(q, c)| eval(&coeffs, q) == c as i128) {
            return finish(coeffs, true);
        }
    }
    let all = interpolate(samples);
    if all.iter().all(Zero::is_zero) {
        return finish(Vec::new(), false);
    }
    match as_integers(&all) {
        Some(coeffs) => finish(coeffs, false),
        None => Err(Error::FitFailure),
    }
}
