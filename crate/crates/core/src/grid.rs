//! Node layouts for the interval, the ball and the annulus, plus grid-sampled
//! scalar functions.

use crate::error::{Error, Result};

/// Domain geometry of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridKind {
    /// The interval (-1, 1).
    Interval,
    /// The unit ball of R^d, d >= 2, reduced to the radial coordinate.
    Ball { dim: u32 },
    /// The annulus { rho < |x| < 1 } of R^d, d >= 2, reduced to the radial
    /// coordinate.
    Annulus { rho: f64, dim: u32 },
}

/// Interior node layout with uniform spacing.
///
/// Only interior nodes are stored; clamped boundary values are identically
/// zero and never appear as unknowns.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    kind: GridKind,
    n: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Grid {
    /// Interval grid: x_j = -1 + j h, j = 1..n, h = 2/(n+1).
    pub fn interval(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("grid needs at least one node".into()));
        }
        let h = 2.0 / (n as f64 + 1.0);
        let nodes = (1..=n).map(|j| -1.0 + j as f64 * h).collect();
        Ok(Grid {
            kind: GridKind::Interval,
            n,
            h,
            nodes,
        })
    }

    /// Radial grid on the unit ball of R^d.
    ///
    /// For d >= 2 the nodes are staggered, r_j = (j - 1/2) h with h = 1/n, so
    /// no node sits on the origin. The unit ball of R^1 is (-1, 1), so d = 1
    /// returns the interval layout.
    pub fn ball(dim: u32, n: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidInput("ball dimension must be >= 1".into()));
        }
        if dim == 1 {
            return Self::interval(n);
        }
        if n == 0 {
            return Err(Error::InvalidInput("grid needs at least one node".into()));
        }
        let h = 1.0 / n as f64;
        let nodes = (1..=n).map(|j| (j as f64 - 0.5) * h).collect();
        Ok(Grid {
            kind: GridKind::Ball { dim },
            n,
            h,
            nodes,
        })
    }

    /// Radial grid on the annulus { rho < |x| < 1 } of R^d, d >= 2:
    /// r_j = rho + j h, j = 1..n, h = (1 - rho)/(n+1).
    pub fn annulus(rho: f64, dim: u32, n: usize) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidInput(format!(
                "annulus radius must lie in (0,1), got {rho}"
            )));
        }
        if dim < 2 {
            return Err(Error::InvalidInput("annulus dimension must be >= 2".into()));
        }
        if n == 0 {
            return Err(Error::InvalidInput("grid needs at least one node".into()));
        }
        let h = (1.0 - rho) / (n as f64 + 1.0);
        let nodes = (1..=n).map(|j| rho + j as f64 * h).collect();
        Ok(Grid {
            kind: GridKind::Annulus { rho, dim },
            n,
            h,
            nodes,
        })
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Interior node count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Uniform spacing.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Interior node coordinates.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Distance from node j to the nearest domain boundary.
    ///
    /// The origin of a ball is not a boundary, so there the distance is 1 - r.
    pub fn boundary_distance(&self, j: usize) -> f64 {
        let x = self.nodes[j];
        match self.kind {
            GridKind::Interval => (x + 1.0).min(1.0 - x),
            GridKind::Ball { .. } => 1.0 - x,
            GridKind::Annulus { rho, .. } => (x - rho).min(1.0 - x),
        }
    }

    /// Quadrature weight of node j for radial/interval integrals:
    /// h on the interval, h r^{d-1} on ball and annulus grids.
    pub fn quad_weight(&self, j: usize) -> f64 {
        match self.kind {
            GridKind::Interval => self.h,
            GridKind::Ball { dim } | GridKind::Annulus { dim, .. } => {
                self.h * self.nodes[j].powi(dim as i32 - 1)
            }
        }
    }

    /// Weighted inner product over interior nodes (midpoint/trapezoid rule;
    /// boundary terms vanish for clamped profiles).
    pub fn inner_product(&self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.n);
        debug_assert_eq!(v.len(), self.n);
        (0..self.n).map(|j| self.quad_weight(j) * u[j] * v[j]).sum()
    }

    /// True for node-aligned 1D layouts (interval and annulus), where the
    /// domain boundary sits one spacing beyond the first/last interior node.
    pub fn is_node_aligned(&self) -> bool {
        !matches!(self.kind, GridKind::Ball { .. })
    }
}

/// Grid-sampled scalar function with clamped boundary metadata.
///
/// `boundary` and `normal_derivative` store the (left, right) traces; both
/// are identically zero for the clamped problems solved here but are kept so
/// profiles remain self-describing.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    grid: Grid,
    values: Vec<f64>,
    boundary: (f64, f64),
    normal_derivative: (f64, f64),
}

impl Profile {
    /// Wrap interior values on `grid` with zero boundary traces.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::InvalidInput(format!(
                "profile has {} values but the grid has {} nodes",
                values.len(),
                grid.n()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("profile values must be finite".into()));
        }
        Ok(Profile {
            grid,
            values,
            boundary: (0.0, 0.0),
            normal_derivative: (0.0, 0.0),
        })
    }

    /// Constant profile c at every interior node.
    pub fn constant(grid: Grid, c: f64) -> Result<Self> {
        let n = grid.n();
        Self::new(grid, vec![c; n])
    }

    /// Sample a function of the node coordinate.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn boundary(&self) -> (f64, f64) {
        self.boundary
    }

    pub fn normal_derivative(&self) -> (f64, f64) {
        self.normal_derivative
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}
