//! Initial-data presets and synthetic reference trajectories.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::state::{FluidState, Trajectory};

/// Smooth, vacuum-free initial data families compatible with the
/// inviscid wall condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// 1D slab: centered density bump, velocity bump vanishing at walls.
    Bump1d,
    /// 2D channel: uniform density, tanh shear along `x`, no wall-normal
    /// velocity.
    Channel2d,
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bump1d" => Ok(Preset::Bump1d),
            "channel2d" => Ok(Preset::Channel2d),
            other => Err(Error::Parameter(format!("unknown preset '{other}'"))),
        }
    }
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Bump1d => "bump1d",
            Preset::Channel2d => "channel2d",
        }
    }

    pub fn is_slab(self) -> bool {
        matches!(self, Preset::Bump1d)
    }

    /// Builds the preset grid with `n` cells across the wall-normal
    /// direction (the channel keeps a fixed streamwise resolution).
    pub fn grid(self, n: usize) -> Result<Grid> {
        match self {
            Preset::Bump1d => Grid::slab(1.0, n),
            Preset::Channel2d => Grid::channel(1.0, 1.0, 8, n),
        }
    }

    /// Initial state on `grid`.
    pub fn initial_state(self, grid: &Grid) -> FluidState {
        let mut s = FluidState::uniform(grid, 1.0);
        match self {
            Preset::Bump1d => {
                for ix in 0..grid.nx {
                    let (x, _) = grid.center(ix, 0);
                    let rho = 1.0 + 0.2 * (-50.0 * (x - 0.5) * (x - 0.5)).exp();
                    let u = 0.1 * (std::f64::consts::PI * x).sin();
                    s.rho[ix] = rho;
                    s.mx[ix] = rho * u;
                }
            }
            Preset::Channel2d => {
                for iy in 0..grid.ny {
                    for ix in 0..grid.nx {
                        let i = grid.index(ix, iy);
                        let (_, y) = grid.center(ix, iy);
                        s.mx[i] = 0.3 * (10.0 * (y - 0.5)).tanh();
                    }
                }
            }
        }
        s
    }
}

/// Analytic time-dependent shear trajectory on a channel grid, used to
/// verify the corrector scalings against a reference with a genuine
/// tangential wall trace. Density one, `u_x = a(t) tanh(k (y - H/2)) *
/// (1 + 0.3 sin(2 pi x))`, `u_y = 0`.
pub fn synthetic_shear_trajectory(grid: &Grid, t_final: f64, n_snap: usize) -> Trajectory {
    let mut traj = Trajectory::new(grid.clone());
    for k in 0..n_snap.max(3) {
        let t = t_final * k as f64 / (n_snap.max(3) - 1) as f64;
        let amp = 1.0 + 0.5 * (2.0 * t).sin();
        let mut s = FluidState::uniform(grid, 1.0);
        for iy in 0..grid.ny {
            for ix in 0..grid.nx {
                let i = grid.index(ix, iy);
                let (x, y) = grid.center(ix, iy);
                s.mx[i] = amp
                    * (10.0 * (y - 0.5)).tanh()
                    * (1.0 + 0.3 * (2.0 * std::f64::consts::PI * x).sin());
            }
        }
        s.t = t;
        traj.push(s, 0.0, 0.0);
    }
    traj
}
