//! Uniform cell-centered grids for the two supported geometries: a 1D slab
//! with walls at both ends, and a 2D channel, periodic in `x` with walls at
//! `y = 0` and `y = H`.

use crate::error::{Error, Result};

/// Domain geometry. Wall distance and wall normals depend on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    /// `[0, L]`, walls at `x = 0` and `x = L`.
    Slab { length: f64 },
    /// `[0, Lx] x [0, H]`, periodic in `x`, walls at `y = 0` and `y = H`.
    Channel { length: f64, height: f64 },
}

/// Uniform cell-centered grid.
#[derive(Debug, Clone)]
pub struct Grid {
    pub geometry: Geometry,
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
}

impl Grid {
    pub fn slab(length: f64, nx: usize) -> Result<Self> {
        if !(length > 0.0) || nx == 0 {
            return Err(Error::Config(format!(
                "slab grid needs positive length and cells, got L = {length}, nx = {nx}"
            )));
        }
        Ok(Grid {
            geometry: Geometry::Slab { length },
            nx,
            ny: 1,
            dx: length / nx as f64,
            dy: 0.0,
        })
    }

    pub fn channel(length: f64, height: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(length > 0.0) || !(height > 0.0) || nx == 0 || ny == 0 {
            return Err(Error::Config(format!(
                "channel grid needs positive extents and cells, got Lx = {length}, H = {height}, \
                 nx = {nx}, ny = {ny}"
            )));
        }
        Ok(Grid {
            geometry: Geometry::Channel { length, height },
            nx,
            ny,
            dx: length / nx as f64,
            dy: height / ny as f64,
        })
    }

    pub fn is_slab(&self) -> bool {
        matches!(self.geometry, Geometry::Slab { .. })
    }

    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }

    /// Volume (length/area) of one cell.
    pub fn cell_volume(&self) -> f64 {
        match self.geometry {
            Geometry::Slab { .. } => self.dx,
            Geometry::Channel { .. } => self.dx * self.dy,
        }
    }

    /// Total measure of the domain.
    pub fn domain_measure(&self) -> f64 {
        self.cell_volume() * self.n_cells() as f64
    }

    /// Smallest spacing, used by stability constraints.
    pub fn min_spacing(&self) -> f64 {
        match self.geometry {
            Geometry::Slab { .. } => self.dx,
            Geometry::Channel { .. } => self.dx.min(self.dy),
        }
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        debug_assert!(ix < self.nx && iy < self.ny);
        iy * self.nx + ix
    }

    /// Cell center coordinates `(x, y)`; `y = 0` for the slab.
    pub fn center(&self, ix: usize, iy: usize) -> (f64, f64) {
        let x = (ix as f64 + 0.5) * self.dx;
        let y = match self.geometry {
            Geometry::Slab { .. } => 0.0,
            Geometry::Channel { .. } => (iy as f64 + 0.5) * self.dy,
        };
        (x, y)
    }

    /// Distance of a cell center to the nearest wall. Cell-centered grids
    /// keep it at or above half a spacing.
    pub fn wall_distance(&self, ix: usize, iy: usize) -> f64 {
        match self.geometry {
            Geometry::Slab { length } => {
                let x = (ix as f64 + 0.5) * self.dx;
                x.min(length - x)
            }
            Geometry::Channel { height, .. } => {
                let y = (iy as f64 + 0.5) * self.dy;
                y.min(height - y)
            }
        }
    }

    /// Outward unit normal of the wall nearest to the cell center.
    pub fn nearest_wall_normal(&self, ix: usize, iy: usize) -> [f64; 2] {
        match self.geometry {
            Geometry::Slab { length } => {
                let x = (ix as f64 + 0.5) * self.dx;
                if x <= 0.5 * length {
                    [-1.0, 0.0]
                } else {
                    [1.0, 0.0]
                }
            }
            Geometry::Channel { height, .. } => {
                let y = (iy as f64 + 0.5) * self.dy;
                if y <= 0.5 * height {
                    [0.0, -1.0]
                } else {
                    [0.0, 1.0]
                }
            }
        }
    }

    /// Gradient of the wall-distance function at a cell center
    /// (`+-1` along the wall-normal axis).
    pub fn wall_distance_gradient(&self, ix: usize, iy: usize) -> [f64; 2] {
        let n = self.nearest_wall_normal(ix, iy);
        [-n[0], -n[1]]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn slab_wall_distance_is_symmetric() {
        let g = Grid::slab(1.0, 10).unwrap();
        assert_relative_eq!(g.wall_distance(0, 0), 0.05);
        assert_relative_eq!(g.wall_distance(9, 0), 0.05);
        assert_relative_eq!(g.wall_distance(4, 0), 0.45);
        assert!(g.wall_distance(0, 0) >= 0.5 * g.dx);
    }

    #[test]
    fn channel_wall_distance_uses_y() {
        let g = Grid::channel(2.0, 1.0, 4, 10).unwrap();
        assert_relative_eq!(g.wall_distance(0, 0), 0.05);
        assert_relative_eq!(g.wall_distance(3, 9), 0.05);
        assert_relative_eq!(g.wall_distance(1, 5), 0.45);
    }

    #[test]
    fn normals_point_outward() {
        let g = Grid::slab(1.0, 8).unwrap();
        assert_eq!(g.nearest_wall_normal(0, 0), [-1.0, 0.0]);
        assert_eq!(g.nearest_wall_normal(7, 0), [1.0, 0.0]);
        let c = Grid::channel(1.0, 1.0, 4, 8).unwrap();
        assert_eq!(c.nearest_wall_normal(0, 0), [0.0, -1.0]);
        assert_eq!(c.nearest_wall_normal(0, 7), [0.0, 1.0]);
    }

    #[test]
    fn measures_are_consistent() {
        let g = Grid::channel(2.0, 0.5, 16, 8).unwrap();
        assert_relative_eq!(g.domain_measure(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(g.cell_volume() * g.n_cells() as f64, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid::slab(0.0, 4).is_err());
        assert!(Grid::slab(1.0, 0).is_err());
        assert!(Grid::channel(1.0, -1.0, 4, 4).is_err());
    }
}
