use rayon::prelude::*;
use serde::Serialize;

use super::{check_cloud, dist, TdaError};

pub const DEFAULT_DISCARD: f64 = 0.1;
const MIN_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimMethod {
    /// Maximum likelihood for the Pareto law of `μ`, treating the discarded
    /// largest ratios as censored at the largest kept one.
    Mle,
    /// Least-squares slope through the origin of `−ln(1 − F(μ))` against
    /// `ln μ` over the kept ratios.
    CdfFit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub d_hat: f64,
    pub n_used: usize,
    pub method: DimMethod,
    pub discard_fraction: f64,
}

/// `μ_i = r2 / r1` for every point, where `r1 ≤ r2` are the distances to the
/// two nearest other points (ties broken by index).
pub fn two_nn_ratios(points: &[Vec<f64>]) -> Result<Vec<f64>, TdaError> {
    check_cloud(points)?;
    if points.len() < MIN_POINTS {
        return Err(TdaError::DegenerateCloud(format!(
            "2NN needs at least {MIN_POINTS} points, got {}",
            points.len()
        )));
    }
    points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let (mut r1, mut r2) = (f64::INFINITY, f64::INFINITY);
            for (j, q) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = dist(p, q);
                // Strict comparisons keep the lower index on ties.
                if d < r1 {
                    r2 = r1;
                    r1 = d;
                } else if d < r2 {
                    r2 = d;
                }
            }
            if r1 == 0.0 {
                Err(TdaError::DegenerateCloud(format!("point {i} has a duplicate")))
            } else {
                Ok(r2 / r1)
            }
        })
        .collect()
}

/// 2NN intrinsic dimension, discarding the largest `discard_fraction` of the
/// ratios.
pub fn dim_2nn(points: &[Vec<f64>], discard_fraction: f64, method: DimMethod) -> Result<DimensionEstimate, TdaError> {
    if !(0.0..1.0).contains(&discard_fraction) {
        return Err(TdaError::BadParameter(format!(
            "discard fraction {discard_fraction} is not in [0, 1)"
        )));
    }
    let mut mu = two_nn_ratios(points)?;
    mu.sort_by(f64::total_cmp);
    let n = mu.len();
    let n_discard = (n as f64 * discard_fraction).floor() as usize;
    let n_used = n - n_discard;
    let d_hat = match method {
        DimMethod::Mle => {
            let cut = mu[n_used - 1].ln();
            let sum: f64 = mu[..n_used].iter().map(|m| m.ln()).sum::<f64>() + n_discard as f64 * cut;
            n_used as f64 / sum
        }
        DimMethod::CdfFit => {
            let (mut sxy, mut sxx) = (0.0, 0.0);
            for (i, m) in mu[..n_used].iter().enumerate() {
                let f = (i + 1) as f64 / n as f64;
                if f >= 1.0 {
                    break;
                }
                let x = m.ln();
                let y = -(1.0 - f).ln();
                sxy += x * y;
                sxx += x * x;
            }
            sxy / sxx
        }
    };
    if !(d_hat.is_finite() && d_hat > 0.0) {
        return Err(TdaError::DegenerateCloud(
            "all nearest-neighbour ratios equal 1".into(),
        ));
    }
    Ok(DimensionEstimate {
        d_hat,
        n_used,
        method,
        discard_fraction,
    })
}
