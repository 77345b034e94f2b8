//! Deterministic numerical kernels shared by the surface families.

mod fd;
mod ode;
mod quad;
mod root;

pub use fd::{fd_derivative, fd_derivative_vec};
pub use ode::{integrate_ode, integrate_until, OdeSolution};
pub use quad::{gauss_legendre_nodes, quad, quad_singular};
pub use root::{find_root, RootResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Solver tolerances. All are absolute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub ode: f64,
    pub quad: f64,
    pub root: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            ode: 1e-12,
            quad: 1e-12,
            root: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("ode", self.ode), ("quad", self.quad), ("root", self.root)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(
                    format!("tolerances.{name}"),
                    format!("must be a positive finite number, got {v}"),
                ));
            }
        }
        Ok(())
    }
}
