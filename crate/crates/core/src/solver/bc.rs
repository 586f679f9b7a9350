//! Ghost-cell construction. Two ghost layers per side, enough for limited
//! linear reconstruction at the first interior face.
//!
//! Walls reflect the momentum component(s) dictated by the boundary
//! condition and copy the density (zero normal gradient, the discrete
//! analogue of a density that is constant on each wall). The channel is
//! periodic in `x`.

use crate::grid::Grid;

/// Wall treatment of the tangential momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallBc {
    /// Viscous walls: every momentum component reflects (`rho u = 0`).
    NoSlip,
    /// Inviscid walls: only the normal component reflects.
    Slip,
}

pub const PAD: usize = 2;

/// Padded 1D scalar field, interior cells at `[PAD, PAD + nx)`.
#[derive(Debug, Clone)]
pub struct Padded1 {
    pub data: Vec<f64>,
}

impl Padded1 {
    #[inline]
    pub fn at(&self, i: isize) -> f64 {
        self.data[(i + PAD as isize) as usize]
    }
}

/// Pads slab fields. The 1D wall condition makes no distinction between
/// slip and no-slip: the only momentum component is normal.
pub fn pad_slab(grid: &Grid, rho: &[f64], mx: &[f64]) -> (Padded1, Padded1) {
    let n = grid.nx;
    let mut pr = vec![0.0; n + 2 * PAD];
    let mut pm = vec![0.0; n + 2 * PAD];
    pr[PAD..PAD + n].copy_from_slice(rho);
    pm[PAD..PAD + n].copy_from_slice(mx);
    for k in 0..PAD {
        // Left wall: mirror across x = 0.
        pr[PAD - 1 - k] = rho[k];
        pm[PAD - 1 - k] = -mx[k];
        // Right wall.
        pr[PAD + n + k] = rho[n - 1 - k];
        pm[PAD + n + k] = -mx[n - 1 - k];
    }
    (Padded1 { data: pr }, Padded1 { data: pm })
}

/// Padded 2D scalar field, interior at `[PAD, PAD + nx) x [PAD, PAD + ny)`.
#[derive(Debug, Clone)]
pub struct Padded2 {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<f64>,
}

impl Padded2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        Padded2 {
            nx,
            ny,
            data: vec![0.0; (nx + 2 * PAD) * (ny + 2 * PAD)],
        }
    }

    #[inline]
    pub fn idx(&self, ix: isize, iy: isize) -> usize {
        let sx = self.nx + 2 * PAD;
        (iy + PAD as isize) as usize * sx + (ix + PAD as isize) as usize
    }

    #[inline]
    pub fn at(&self, ix: isize, iy: isize) -> f64 {
        self.data[self.idx(ix, iy)]
    }

    #[inline]
    pub fn set(&mut self, ix: isize, iy: isize, v: f64) {
        let i = self.idx(ix, iy);
        self.data[i] = v;
    }
}

/// Sign applied to a ghost value mirrored across a wall.
#[derive(Debug, Clone, Copy)]
pub enum MirrorSign {
    Keep,
    Flip,
}

fn fill_channel(grid: &Grid, field: &[f64], wall: MirrorSign) -> Padded2 {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut p = Padded2::new(nx, ny);
    for iy in 0..ny {
        for ix in 0..nx {
            p.set(ix as isize, iy as isize, field[grid.index(ix, iy)]);
        }
    }
    let s = match wall {
        MirrorSign::Keep => 1.0,
        MirrorSign::Flip => -1.0,
    };
    // Walls at y = 0 and y = H (mirror with sign), interior columns only;
    // the periodic wrap below completes the corners.
    for ix in 0..nx as isize {
        for k in 0..PAD as isize {
            p.set(ix, -1 - k, s * p.at(ix, k));
            p.set(ix, ny as isize + k, s * p.at(ix, ny as isize - 1 - k));
        }
    }
    // Periodic in x, all rows including ghost rows.
    for iy in -(PAD as isize)..(ny + PAD) as isize {
        for k in 0..PAD as isize {
            p.set(-1 - k, iy, p.at(nx as isize - 1 - k, iy));
            p.set(nx as isize + k, iy, p.at(k, iy));
        }
    }
    p
}

/// Pads channel fields according to the wall condition.
pub fn pad_channel(
    grid: &Grid,
    rho: &[f64],
    mx: &[f64],
    my: &[f64],
    bc: WallBc,
) -> (Padded2, Padded2, Padded2) {
    let tangential = match bc {
        WallBc::NoSlip => MirrorSign::Flip,
        WallBc::Slip => MirrorSign::Keep,
    };
    (
        fill_channel(grid, rho, MirrorSign::Keep),
        fill_channel(grid, mx, tangential),
        fill_channel(grid, my, MirrorSign::Flip),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slab_ghosts_reflect_momentum_and_copy_density() {
        let grid = Grid::slab(1.0, 4).unwrap();
        let rho = vec![1.0, 2.0, 3.0, 4.0];
        let mx = vec![0.1, 0.2, 0.3, 0.4];
        let (pr, pm) = pad_slab(&grid, &rho, &mx);
        assert_eq!(pr.at(-1), 1.0);
        assert_eq!(pr.at(-2), 2.0);
        assert_eq!(pm.at(-1), -0.1);
        assert_eq!(pm.at(-2), -0.2);
        assert_eq!(pr.at(4), 4.0);
        assert_eq!(pm.at(5), -0.3);
    }

    #[test]
    fn channel_periodic_wrap_in_x() {
        let grid = Grid::channel(1.0, 1.0, 4, 3).unwrap();
        let mut rho = vec![0.0; 12];
        for iy in 0..3 {
            for ix in 0..4 {
                rho[grid.index(ix, iy)] = (10 * iy + ix) as f64;
            }
        }
        let zeros = vec![0.0; 12];
        let (pr, _, _) = pad_channel(&grid, &rho, &zeros, &zeros, WallBc::NoSlip);
        assert_eq!(pr.at(-1, 1), pr.at(3, 1));
        assert_eq!(pr.at(4, 2), pr.at(0, 2));
        assert_eq!(pr.at(-2, 0), pr.at(2, 0));
    }

    #[test]
    fn channel_wall_signs_follow_bc() {
        let grid = Grid::channel(1.0, 1.0, 2, 2).unwrap();
        let rho = vec![1.0; 4];
        let mut mx = vec![0.0; 4];
        let mut my = vec![0.0; 4];
        mx[grid.index(0, 0)] = 0.7;
        my[grid.index(0, 0)] = 0.3;
        let (_, pmx, pmy) = pad_channel(&grid, &rho, &mx, &my, WallBc::NoSlip);
        assert_eq!(pmx.at(0, -1), -0.7, "no-slip reflects tangential momentum");
        assert_eq!(pmy.at(0, -1), -0.3);
        let (_, smx, smy) = pad_channel(&grid, &rho, &mx, &my, WallBc::Slip);
        assert_eq!(smx.at(0, -1), 0.7, "slip keeps tangential momentum");
        assert_eq!(smy.at(0, -1), -0.3, "normal momentum always reflects");
    }
}
