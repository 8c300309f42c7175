//! Point clouds from inter-spike intervals: delay embedding, 2NN intrinsic
//! dimension and Vietoris–Rips persistence in degrees 0 and 1.

mod rips;
mod twonn;

pub use rips::{
    rips_persistence, rips_persistence_by_reduction, rips_persistence_capped, PersistenceDiagram, DEFAULT_RIPS_CAP,
};
pub use twonn::{dim_2nn, two_nn_ratios, DimMethod, DimensionEstimate, DEFAULT_DISCARD};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TdaError {
    #[error("sequence of length {len} is shorter than the window {window}")]
    SequenceTooShort { len: usize, window: usize },
    #[error("window length must be at least 1")]
    ZeroWindow,
    #[error("degenerate cloud: {0}")]
    DegenerateCloud(String),
    #[error("cloud has {size} points; the limit is {cap}")]
    CloudTooLarge { size: usize, cap: usize },
    #[error("points have mixed dimensions")]
    RaggedCloud,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

/// Points of a common dimension, with the embedding that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCloud {
    pub points: Vec<Vec<f64>>,
    pub window: usize,
    pub dedup_tol: f64,
    /// Windows before duplicates were removed.
    pub windows: usize,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn check_cloud(points: &[Vec<f64>]) -> Result<(), TdaError> {
    let d = points.first().map_or(0, Vec::len);
    if points.iter().any(|p| p.len() != d) {
        return Err(TdaError::RaggedCloud);
    }
    Ok(())
}

/// Keep a point only if it is farther than `tol` from every point kept
/// before it. `tol = 0` removes exact repeats only.
pub fn dedup(points: Vec<Vec<f64>>, tol: f64) -> Vec<Vec<f64>> {
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !kept.iter().any(|q| dist(&p, q) <= tol) {
            kept.push(p);
        }
    }
    kept
}

/// Sliding windows of length `window`, then [`dedup`].
pub fn window_embed(seq: &[f64], window: usize, dedup_tol: f64) -> Result<PointCloud, TdaError> {
    if window == 0 {
        return Err(TdaError::ZeroWindow);
    }
    if seq.len() < window {
        return Err(TdaError::SequenceTooShort {
            len: seq.len(),
            window,
        });
    }
    let raw: Vec<Vec<f64>> = seq.windows(window).map(<[f64]>::to_vec).collect();
    let windows = raw.len();
    Ok(PointCloud {
        points: dedup(raw, dedup_tol),
        window,
        dedup_tol,
        windows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub window: usize,
    pub d_hat: f64,
    pub n_points: usize,
}

/// 2NN dimension of the delay embedding for each window length.
pub fn dimension_profile(
    seq: &[f64],
    windows: std::ops::RangeInclusive<usize>,
    dedup_tol: f64,
    discard_fraction: f64,
    method: DimMethod,
) -> Result<Vec<ProfileRow>, TdaError> {
    windows
        .map(|w| {
            let cloud = window_embed(seq, w, dedup_tol)?;
            let est = dim_2nn(&cloud.points, discard_fraction, method)?;
            Ok(ProfileRow {
                window: w,
                d_hat: est.d_hat,
                n_points: cloud.len(),
            })
        })
        .collect()
}
