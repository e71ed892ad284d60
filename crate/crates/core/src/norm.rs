//! Planar norms stored as piecewise-linear radial profiles.
//!
//! A norm on the plane is fixed by its values on the unit circle,
//! `h(phi) = ||(cos phi, sin phi)||`. [`AngularNorm`] keeps those values on
//! the uniform grid `phi_j = -pi + 2 pi j / N` and interpolates linearly in
//! angle between nodes; everything else follows by homogeneity.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::matrix::{MatrixSet, DIRECTION_TOL};

/// Smallest accepted grid.
pub const MIN_NODES: usize = 8;

/// Radial profile of a centrally symmetric planar norm on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularNorm {
    values: Vec<f64>,
}

/// Angle of grid node `j` out of `n`.
#[inline]
pub fn node_angle(j: usize, n: usize) -> f64 {
    PI * (((2 * j) as f64 - n as f64) / n as f64)
}

/// Unit vector of grid node `j` out of `n`.
#[inline]
pub fn node_direction(j: usize, n: usize) -> [f64; 2] {
    let (s, c) = node_angle(j, n).sin_cos();
    [c, s]
}

/// Index of the grid node `x` points along, if any.
pub fn grid_node_of(x: [f64; 2], n: usize) -> Option<usize> {
    if !(x[0].is_finite() && x[1].is_finite()) || (x[0] == 0.0 && x[1] == 0.0) {
        return None;
    }
    let t = (x[1].atan2(x[0]) + PI) / TAU * n as f64;
    let nearest = t.round();
    ((t - nearest).abs() * TAU / n as f64 <= DIRECTION_TOL).then(|| nearest as usize % n)
}

fn check_node_count(n: usize) -> Result<()> {
    if n < MIN_NODES || n % 2 != 0 {
        return Err(Error::InvalidNodeCount(n));
    }
    Ok(())
}

/// Where a vector lands on the grid: its Euclidean length and the linear
/// interpolation weights between two neighbouring nodes.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stencil {
    radius: f64,
    lo: u32,
    hi: u32,
    frac: f64,
}

impl Stencil {
    #[inline]
    pub(crate) fn new(x: [f64; 2], n: usize) -> Self {
        let radius = x[0].hypot(x[1]);
        if radius == 0.0 {
            return Self {
                radius,
                lo: 0,
                hi: 0,
                frac: 0.0,
            };
        }
        let t = (x[1].atan2(x[0]) + PI) / TAU * n as f64;
        let base = t.floor();
        let frac = t - base;
        let lo = base as usize % n;
        Self {
            radius,
            lo: lo as u32,
            hi: ((lo + 1) % n) as u32,
            frac,
        }
    }

    #[inline]
    pub(crate) fn eval(&self, values: &[f64]) -> f64 {
        if self.radius == 0.0 {
            return 0.0;
        }
        let h = (1.0 - self.frac) * values[self.lo as usize] + self.frac * values[self.hi as usize];
        self.radius * h
    }
}

/// Interpolation stencils of `A_i u(phi_j)` for every member and node.
///
/// Node images depend only on the family and the grid, so an iteration can
/// build this once and reuse it at every step.
#[derive(Clone, Debug)]
pub(crate) struct ImageTable {
    members: usize,
    stencils: Vec<Stencil>,
}

impl ImageTable {
    pub(crate) fn new(set: &MatrixSet, n: usize) -> Result<Self> {
        set.require_planar()?;
        let members = set.len();
        let mut stencils = Vec::with_capacity(n / 2 * members);
        for j in n / 2..n {
            let u = node_direction(j, n);
            stencils.extend(set.iter().map(|a| Stencil::new(a.apply2(u), n)));
        }
        Ok(Self { members, stencils })
    }

    /// `max_i ||A_i u(phi_j)||` for every node `j` under the profile `values`.
    ///
    /// Only the half `phi_j >= 0` is evaluated; the antipodal node gets the
    /// same value since the profile is centrally symmetric.
    pub(crate) fn max_images(&self, values: &[f64]) -> Vec<f64> {
        let upper: Vec<f64> = self
            .stencils
            .chunks_exact(self.members)
            .map(|row| row.iter().map(|s| s.eval(values)).fold(0.0, f64::max))
            .collect();
        let mut all = Vec::with_capacity(2 * upper.len());
        all.extend_from_slice(&upper);
        all.extend_from_slice(&upper);
        all
    }
}

impl AngularNorm {
    /// The Euclidean norm: `h_j = 1`.
    pub fn euclidean(n: usize) -> Result<Self> {
        check_node_count(n)?;
        Ok(Self {
            values: vec![1.0; n],
        })
    }

    /// Profile from explicit node values.
    ///
    /// Antipodal nodes are averaged so that `h_j = h_{j + N/2}` holds exactly.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        check_node_count(values.len())?;
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidProfileValue { index, value });
        }
        let mut values = values;
        symmetrize(&mut values);
        Ok(Self { values })
    }

    /// Samples `profile(phi)` at every node.
    pub fn from_fn(n: usize, profile: impl Fn(f64) -> f64) -> Result<Self> {
        check_node_count(n)?;
        Self::from_values((0..n).map(|j| profile(node_angle(j, n))).collect())
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `||x||`, interpolating the profile at the angle of `x`.
    pub fn eval(&self, x: [f64; 2]) -> f64 {
        Stencil::new(x, self.node_count()).eval(&self.values)
    }

    /// `max_i ||A_i x||`.
    ///
    /// Panics if the family is not planar.
    pub fn max_image(&self, set: &MatrixSet, x: [f64; 2]) -> f64 {
        set.iter()
            .map(|a| self.eval(a.apply2(x)))
            .fold(0.0, f64::max)
    }

    /// Linear relaxation update:
    /// `h'_j = lambda h_j + (1 - lambda) / gamma * max_i ||A_i u_j||`.
    pub fn combine_linear(&self, set: &MatrixSet, lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidLambda(lambda));
        }
        let images = ImageTable::new(set, self.node_count())?.max_images(&self.values);
        self.linear_from_images(&images, lambda, gamma)
    }

    /// Max relaxation update: `h'_j = max(h_j, max_i ||A_i u_j|| / gamma)`.
    pub fn combine_max(&self, set: &MatrixSet, gamma: f64) -> Result<Self> {
        let images = ImageTable::new(set, self.node_count())?.max_images(&self.values);
        self.max_from_images(&images, gamma)
    }

    /// Linear update from precomputed node images. `lambda` is not range
    /// checked here so that the unguarded direct variant can reuse it.
    pub(crate) fn linear_from_images(
        &self,
        images: &[f64],
        lambda: f64,
        gamma: f64,
    ) -> Result<Self> {
        check_gamma(gamma)?;
        let rest = 1.0 - lambda;
        let values = self
            .values
            .iter()
            .zip(images)
            .map(|(h, m)| lambda * h + rest * (m / gamma))
            .collect();
        Self::from_values(values)
    }

    pub(crate) fn max_from_images(&self, images: &[f64], gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        let values = self
            .values
            .iter()
            .zip(images)
            .map(|(&h, m)| h.max(m / gamma))
            .collect();
        Self::from_values(values)
    }

    /// Rescale so that `||e|| = 1`.
    pub fn normalize(&self, e: [f64; 2]) -> Result<Self> {
        let scale = self.eval(e);
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::ZeroVector);
        }
        Self::from_values(self.values.iter().map(|h| h / scale).collect())
    }

    /// `c * ||x||`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::from_values(self.values.iter().map(|h| c * h).collect())
    }

    /// Grid eccentricity of `self` relative to `other`: the ratio of the
    /// largest to the smallest node ratio `h_j / g_j`.
    pub fn eccentricity(&self, other: &AngularNorm) -> Result<f64> {
        if self.node_count() != other.node_count() {
            return Err(Error::NodeCountMismatch {
                left: self.node_count(),
                right: other.node_count(),
            });
        }
        let (lo, hi) = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a / b)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
                (lo.min(r), hi.max(r))
            });
        Ok(hi / lo)
    }

    /// Points `u(phi_j) / h_j` of the unit sphere `{x : ||x|| = 1}`.
    pub fn unit_sphere_points(&self) -> Vec<[f64; 2]> {
        let n = self.node_count();
        self.values
            .iter()
            .enumerate()
            .map(|(j, h)| {
                let u = node_direction(j, n);
                [u[0] / h, u[1] / h]
            })
            .collect()
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidGamma(gamma))
    }
}

fn symmetrize(values: &mut [f64]) {
    let half = values.len() / 2;
    for j in 0..half {
        let avg = 0.5 * (values[j] + values[j + half]);
        values[j] = avg;
        values[j + half] = avg;
    }
}
