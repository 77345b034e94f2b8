//! Sampled immersions on rectangular parameter grids.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::e2::GroupElement;
use crate::error::{Error, Result};

/// Environment variable that caps the number of sampling threads.
pub const THREADS_ENV: &str = "E2SURF_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSample {
    pub u: f64,
    pub v: f64,
    pub position: GroupElement,
    pub gauss_map: Complex64,
    pub rho2: f64,
    pub gauss_curvature: f64,
}

impl SurfaceSample {
    pub fn is_finite(&self) -> bool {
        self.position.is_finite()
            && self.gauss_map.re.is_finite()
            && self.gauss_map.im.is_finite()
            && self.rho2.is_finite()
            && self.gauss_curvature.is_finite()
    }
}

/// Rectangular grid of samples stored row-major: row `j` holds `v_j` and
/// runs over all `u_i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceGrid {
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub nu: usize,
    pub nv: usize,
    pub samples: Vec<SurfaceSample>,
}

fn linspace(range: (f64, f64), n: usize, i: usize) -> f64 {
    if i + 1 == n {
        range.1
    } else {
        range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
    }
}

/// Number of worker threads requested through [`THREADS_ENV`], if any.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs `job` on a pool limited by [`THREADS_ENV`] when it is set, else on
/// the global pool.
pub fn with_thread_cap<T: Send>(job: impl FnOnce() -> T + Send) -> T {
    match thread_cap() {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        },
        None => job(),
    }
}

impl SurfaceGrid {
    /// Samples `f` on an `nu × nv` grid, one rayon task per row.
    pub fn sample<F>(u_range: (f64, f64), v_range: (f64, f64), nu: usize, nv: usize, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<SurfaceSample> + Sync,
    {
        if nu < 2 || nv < 2 {
            return Err(Error::InsufficientSamples {
                min: 2,
                got: nu.min(nv),
            });
        }
        let rows: Result<Vec<Vec<SurfaceSample>>> = with_thread_cap(|| {
            (0..nv)
                .into_par_iter()
                .map(|j| {
                    let v = linspace(v_range, nv, j);
                    (0..nu).map(|i| f(linspace(u_range, nu, i), v)).collect()
                })
                .collect()
        });
        let samples: Vec<SurfaceSample> = rows?.into_iter().flatten().collect();
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::NonFinite { t: bad.u });
        }
        Ok(SurfaceGrid {
            u_range,
            v_range,
            nu,
            nv,
            samples,
        })
    }

    pub fn at(&self, i: usize, j: usize) -> &SurfaceSample {
        &self.samples[j * self.nu + i]
    }

    pub fn positions(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.samples.iter().map(|s| s.position)
    }
}

/// Result of a windowed total absolute curvature computation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotalCurvature {
    pub window: f64,
    pub value: f64,
    pub doubled_window_value: f64,
    /// Set when doubling the window grows the value by more than 10 %.
    pub divergent: bool,
}

impl TotalCurvature {
    pub(crate) fn from_windows(window: f64, value: f64, doubled: f64) -> Result<Self> {
        Ok(TotalCurvature {
            window,
            value,
            doubled_window_value: doubled,
            divergent: doubled > 1.1 * value,
        })
    }
}
