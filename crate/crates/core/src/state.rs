//! Discrete fluid states, stored trajectories and the snapshot dump format.

use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::{Geometry, Grid};
use crate::thermo::{entropy_h, GasLaw};

/// Cell-averaged density and momentum at one time instant.
///
/// The `y` momentum is carried for both geometries and stays identically
/// zero on a slab.
#[derive(Debug, Clone)]
pub struct FluidState {
    pub t: f64,
    pub rho: Vec<f64>,
    pub mx: Vec<f64>,
    pub my: Vec<f64>,
}

impl FluidState {
    pub fn new(t: f64, rho: Vec<f64>, mx: Vec<f64>, my: Vec<f64>) -> Self {
        debug_assert_eq!(rho.len(), mx.len());
        debug_assert_eq!(rho.len(), my.len());
        FluidState { t, rho, mx, my }
    }

    /// Uniform rest state.
    pub fn uniform(grid: &Grid, rho: f64) -> Self {
        let n = grid.n_cells();
        FluidState::new(0.0, vec![rho; n], vec![0.0; n], vec![0.0; n])
    }

    pub fn n_cells(&self) -> usize {
        self.rho.len()
    }

    /// Velocity reconstructed with the positivity guard.
    pub fn velocity(&self, i: usize, rho_floor: f64) -> [f64; 2] {
        let d = self.rho[i].max(rho_floor);
        [self.mx[i] / d, self.my[i] / d]
    }

    /// Total mass on the grid.
    pub fn total_mass(&self, grid: &Grid) -> f64 {
        self.rho.iter().sum::<f64>() * grid.cell_volume()
    }

    /// Total energy `int (|m|^2 / (2 rho) + H(rho))`.
    pub fn total_energy(&self, grid: &Grid, g: GasLaw, rho_floor: f64) -> f64 {
        let v = grid.cell_volume();
        let mut e = 0.0;
        for i in 0..self.n_cells() {
            let d = self.rho[i].max(rho_floor);
            let m2 = self.mx[i] * self.mx[i] + self.my[i] * self.my[i];
            e += (0.5 * m2 / d + entropy_h(g, self.rho[i])) * v;
        }
        e
    }

    /// Checks the basic invariants: finite fields, non-negative density.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.n_cells() {
            if !self.rho[i].is_finite() || !self.mx[i].is_finite() || !self.my[i].is_finite() {
                return Err(Error::Integration {
                    message: "non-finite field value".into(),
                    cell: i,
                });
            }
            if self.rho[i] < 0.0 {
                return Err(Error::PositivityLoss {
                    cell: i,
                    rho: self.rho[i],
                });
            }
        }
        Ok(())
    }

    /// Conservative restriction to a coarser grid; the fine cell counts
    /// must be integer multiples of the coarse ones.
    pub fn restrict(&self, fine: &Grid, coarse: &Grid) -> Result<FluidState> {
        if fine.nx % coarse.nx != 0 || fine.ny % coarse.ny != 0 {
            return Err(Error::Config(format!(
                "restriction needs integer refinement, got {}x{} -> {}x{}",
                fine.nx, fine.ny, coarse.nx, coarse.ny
            )));
        }
        let fx = fine.nx / coarse.nx;
        let fy = fine.ny / coarse.ny;
        let w = 1.0 / (fx * fy) as f64;
        let n = coarse.n_cells();
        let mut rho = vec![0.0; n];
        let mut mx = vec![0.0; n];
        let mut my = vec![0.0; n];
        for cy in 0..coarse.ny {
            for cx in 0..coarse.nx {
                let c = coarse.index(cx, cy);
                for sy in 0..fy {
                    for sx in 0..fx {
                        let f = fine.index(cx * fx + sx, cy * fy + sy);
                        rho[c] += self.rho[f] * w;
                        mx[c] += self.mx[f] * w;
                        my[c] += self.my[f] * w;
                    }
                }
            }
        }
        Ok(FluidState::new(self.t, rho, mx, my))
    }
}

/// Stored snapshots of a run plus the dissipation accumulators needed by
/// the energy-inequality check.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: Grid,
    pub states: Vec<FluidState>,
    /// Cumulative `eps nu int int mu(rho) |D(u)|^2` at each snapshot time.
    pub visc_dissipation: Vec<f64>,
    /// Cumulative `r1 int int rho |u|^3` at each snapshot time.
    pub drag_dissipation: Vec<f64>,
}

impl Trajectory {
    pub fn new(grid: Grid) -> Self {
        Trajectory {
            grid,
            states: Vec::new(),
            visc_dissipation: Vec::new(),
            drag_dissipation: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn push(&mut self, state: FluidState, visc_cum: f64, drag_cum: f64) {
        self.states.push(state);
        self.visc_dissipation.push(visc_cum);
        self.drag_dissipation.push(drag_cum);
    }

    /// Velocity field of snapshot `k`.
    pub fn velocity_field(&self, k: usize, rho_floor: f64) -> Vec<[f64; 2]> {
        let s = &self.states[k];
        (0..s.n_cells()).map(|i| s.velocity(i, rho_floor)).collect()
    }

    /// Second-order time derivative of the velocity field at snapshot `k`,
    /// from the stored snapshot stencil (one-sided at the ends).
    pub fn velocity_time_derivative(&self, k: usize, rho_floor: f64) -> Result<Vec<[f64; 2]>> {
        let n = self.len();
        if n < 3 {
            return Err(Error::Config(
                "time derivatives need at least three stored snapshots".into(),
            ));
        }
        let at = |j: usize| self.velocity_field(j, rho_floor);
        let t = self.times();
        let (um, u0, up, w) = if k == 0 {
            // One-sided: f'(t0) = (-3 f0 + 4 f1 - f2) / (2 dt)
            (at(0), at(1), at(2), [-3.0, 4.0, -1.0])
        } else if k == n - 1 {
            (at(n - 3), at(n - 2), at(n - 1), [1.0, -4.0, 3.0])
        } else {
            (at(k - 1), at(k), at(k + 1), [-1.0, 0.0, 1.0])
        };
        // Uniform snapshot schedules only; all three stencils share the
        // 1/(2 dt) scaling.
        let dt = if k == 0 {
            t[1] - t[0]
        } else if k == n - 1 {
            t[n - 1] - t[n - 2]
        } else {
            0.5 * (t[k + 1] - t[k - 1])
        };
        if !(dt > 0.0) {
            return Err(Error::Config("snapshot times must be increasing".into()));
        }
        let scale = 2.0 * dt;
        Ok((0..um.len())
            .map(|i| {
                [
                    (w[0] * um[i][0] + w[1] * u0[i][0] + w[2] * up[i][0]) / scale,
                    (w[0] * um[i][1] + w[1] * u0[i][1] + w[2] * up[i][1]) / scale,
                ]
            })
            .collect())
    }

    /// Conservative restriction of every snapshot to a coarser grid.
    pub fn restrict(&self, coarse: &Grid) -> Result<Trajectory> {
        let mut out = Trajectory::new(coarse.clone());
        for (k, s) in self.states.iter().enumerate() {
            out.push(
                s.restrict(&self.grid, coarse)?,
                self.visc_dissipation[k],
                self.drag_dissipation[k],
            );
        }
        Ok(out)
    }
}

/// Header metadata of a snapshot dump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotMeta {
    pub t: f64,
    pub gamma: f64,
    pub eps: f64,
    pub r1: f64,
}

/// Writes one snapshot as a plain-text table.
///
/// Column order is stable: `x rho m` on a slab, `x y rho mx my` on a
/// channel, one row per cell in row-major order (`x` fastest).
pub fn dump_snapshot(
    out: &mut dyn Write,
    grid: &Grid,
    state: &FluidState,
    meta: SnapshotMeta,
) -> std::io::Result<()> {
    match grid.geometry {
        Geometry::Slab { length } => {
            writeln!(
                out,
                "# t={:.17e} gamma={:.17e} eps={:.17e} r1={:.17e} geometry=slab nx={} lx={:.17e}",
                meta.t, meta.gamma, meta.eps, meta.r1, grid.nx, length
            )?;
            writeln!(out, "# columns: x rho m")?;
            for ix in 0..grid.nx {
                let (x, _) = grid.center(ix, 0);
                let i = grid.index(ix, 0);
                writeln!(out, "{:.17e} {:.17e} {:.17e}", x, state.rho[i], state.mx[i])?;
            }
        }
        Geometry::Channel { length, height } => {
            writeln!(
                out,
                "# t={:.17e} gamma={:.17e} eps={:.17e} r1={:.17e} geometry=channel nx={} ny={} \
                 lx={:.17e} ly={:.17e}",
                meta.t, meta.gamma, meta.eps, meta.r1, grid.nx, grid.ny, length, height
            )?;
            writeln!(out, "# columns: x y rho mx my")?;
            for iy in 0..grid.ny {
                for ix in 0..grid.nx {
                    let (x, y) = grid.center(ix, iy);
                    let i = grid.index(ix, iy);
                    writeln!(
                        out,
                        "{:.17e} {:.17e} {:.17e} {:.17e} {:.17e}",
                        x, y, state.rho[i], state.mx[i], state.my[i]
                    )?;
                }
            }
        }
    }
    Ok(())
}

/// Parses a snapshot written by [`dump_snapshot`].
pub fn parse_snapshot(text: &str) -> Result<(Grid, FluidState, SnapshotMeta)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty snapshot".into()))?;
    let mut kv = std::collections::HashMap::new();
    for tok in header.trim_start_matches('#').split_whitespace() {
        if let Some((k, v)) = tok.split_once('=') {
            kv.insert(k.to_string(), v.to_string());
        }
    }
    let get = |k: &str| -> Result<f64> {
        kv.get(k)
            .ok_or_else(|| Error::Parse(format!("missing header key '{k}'")))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad value for '{k}'")))
    };
    let meta = SnapshotMeta {
        t: get("t")?,
        gamma: get("gamma")?,
        eps: get("eps")?,
        r1: get("r1")?,
    };
    let geometry = kv
        .get("geometry")
        .ok_or_else(|| Error::Parse("missing geometry".into()))?;
    let nx = get("nx")? as usize;
    let grid = match geometry.as_str() {
        "slab" => Grid::slab(get("lx")?, nx)?,
        "channel" => Grid::channel(get("lx")?, get("ly")?, nx, get("ny")? as usize)?,
        other => return Err(Error::Parse(format!("unknown geometry '{other}'"))),
    };
    let n = grid.n_cells();
    let mut rho = Vec::with_capacity(n);
    let mut mx = Vec::with_capacity(n);
    let mut my = Vec::with_capacity(n);
    for line in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<f64> = line
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad number '{s}'"))))
            .collect::<Result<_>>()?;
        match grid.geometry {
            Geometry::Slab { .. } => {
                if cols.len() != 3 {
                    return Err(Error::Parse(format!("expected 3 columns, got {}", cols.len())));
                }
                rho.push(cols[1]);
                mx.push(cols[2]);
                my.push(0.0);
            }
            Geometry::Channel { .. } => {
                if cols.len() != 5 {
                    return Err(Error::Parse(format!("expected 5 columns, got {}", cols.len())));
                }
                rho.push(cols[2]);
                mx.push(cols[3]);
                my.push(cols[4]);
            }
        }
    }
    if rho.len() != n {
        return Err(Error::Parse(format!("expected {n} rows, got {}", rho.len())));
    }
    Ok((grid, FluidState::new(meta.t, rho, mx, my), meta))
}
