//! Moreau decomposition in the discrete clamped H^2 energy inner product:
//! project onto the node-wise non-negative cone by a primal active-set
//! iteration and split u = v + w with v in the cone, w in its polar cone.

use crate::dense::{Cholesky, DenseMatrix};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridKind, Profile};

/// The energy inner product <u, v> = int B u'' v'' + T u' v' dx, realized as
/// a dense Gram matrix built from the same ghost-reflected difference
/// operators as the solver: second differences on extended nodes with
/// trapezoid weights, first differences at cell midpoints. With this choice
/// the Gram matrix equals h times the solver matrix for B u'''' - T u'', so
/// discrete integration by parts holds exactly.
#[derive(Debug, Clone)]
pub struct EnergyInnerProduct {
    big_b: f64,
    big_t: f64,
    grid: Grid,
    gram: DenseMatrix,
}

impl EnergyInnerProduct {
    pub fn new(big_b: f64, big_t: f64, grid: Grid) -> Result<Self> {
        if !(big_b > 0.0) {
            return Err(Error::InvalidInput(format!("B must be > 0, got {big_b}")));
        }
        if !(big_t >= 0.0) {
            return Err(Error::InvalidInput(format!("T must be >= 0, got {big_t}")));
        }
        if grid.kind() != GridKind::Interval {
            return Err(Error::InvalidInput(
                "the energy inner product is defined on the interval grid".into(),
            ));
        }
        let n = grid.n();
        if n < 2 {
            return Err(Error::InvalidInput(
                "need at least two interior nodes".into(),
            ));
        }
        let h = grid.h();

        // second differences at extended nodes 0..n+1, clamped ghosts
        let d2 = |u: &[f64], e: isize| -> f64 {
            let at = |j: isize| -> f64 {
                if j == -1 {
                    u[0]
                } else if j == n as isize + 2 {
                    u[n - 1]
                } else if j <= 0 || j > n as isize {
                    0.0
                } else {
                    u[(j - 1) as usize]
                }
            };
            (at(e - 1) - 2.0 * at(e) + at(e + 1)) / (h * h)
        };
        // forward differences at midpoints 0..n (between extended e and e+1)
        let d1 = |u: &[f64], e: isize| -> f64 {
            let at = |j: isize| -> f64 {
                if j <= 0 || j > n as isize {
                    0.0
                } else {
                    u[(j - 1) as usize]
                }
            };
            (at(e + 1) - at(e)) / h
        };

        let mut cols2 = vec![vec![0.0; n + 2]; n];
        let mut cols1 = vec![vec![0.0; n + 1]; n];
        let mut basis = vec![0.0; n];
        for i in 0..n {
            basis[i] = 1.0;
            for e in 0..=(n as isize + 1) {
                cols2[i][e as usize] = d2(&basis, e);
            }
            for e in 0..=(n as isize) {
                cols1[i][e as usize] = d1(&basis, e);
            }
            basis[i] = 0.0;
        }

        let mut gram = DenseMatrix::zero(n);
        for i in 0..n {
            for j in i..n {
                let mut bend = 0.0;
                for e in 0..n + 2 {
                    // trapezoid: half weight at the two boundary nodes
                    let w = if e == 0 || e == n + 1 { 0.5 } else { 1.0 };
                    bend += w * cols2[i][e] * cols2[j][e];
                }
                let mut stretch = 0.0;
                for e in 0..n + 1 {
                    stretch += cols1[i][e] * cols1[j][e];
                }
                let entry = h * (big_b * bend + big_t * stretch);
                gram.set(i, j, entry);
                gram.set(j, i, entry);
            }
        }
        // positive definiteness is part of the contract
        Cholesky::new(&gram)?;
        Ok(EnergyInnerProduct {
            big_b,
            big_t,
            grid,
            gram,
        })
    }

    pub fn big_b(&self) -> f64 {
        self.big_b
    }

    pub fn big_t(&self) -> f64 {
        self.big_t
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn gram(&self) -> &DenseMatrix {
        &self.gram
    }

    /// <u, v> in the energy inner product.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let gu = self.gram.matvec(v);
        u.iter().zip(&gu).map(|(a, b)| a * b).sum()
    }

    /// Energy norm of u.
    pub fn norm(&self, u: &[f64]) -> f64 {
        self.inner(u, u).max(0.0).sqrt()
    }
}

/// Moreau split u = v + w with v >= 0 node-wise and w in the polar cone (in
/// particular w <= 0 node-wise); `gap` is the energy inner product <v, w>,
/// zero up to roundoff.
#[derive(Debug, Clone)]
pub struct MoreauSplit {
    pub v: Profile,
    pub w: Profile,
    pub gap: f64,
}

/// Project u onto the non-negative cone in the energy inner product by a
/// primal active-set iteration on the KKT system G(v - u) = mu, mu >= 0,
/// v >= 0, mu^T v = 0: solve the free block, then move violated indices one
/// at a time (smallest index first, which prevents cycling) until clean.
pub fn project_cone(u: &Profile, ip: &EnergyInnerProduct, tol: f64) -> Result<MoreauSplit> {
    if u.grid() != ip.grid() {
        return Err(Error::InvalidInput(
            "profile and inner product live on different grids".into(),
        ));
    }
    let n = u.grid().n();
    let gram = ip.gram();
    let b = gram.matvec(u.values());

    let scale_primal = tol * u.sup_norm().max(1.0);
    let scale_dual = tol * (gram.max_abs() * u.sup_norm()).max(1.0);

    // warm start: free exactly where u is positive
    let mut free: Vec<bool> = u.values().iter().map(|&x| x > 0.0).collect();
    let mut v = vec![0.0; n];
    let max_moves = 10 * n.max(1);
    let mut clean = false;
    for _ in 0..max_moves {
        let idx: Vec<usize> = (0..n).filter(|&j| free[j]).collect();
        if idx.is_empty() {
            v.iter_mut().for_each(|x| *x = 0.0);
        } else {
            let k = idx.len();
            let mut sub = DenseMatrix::zero(k);
            for (p, &i) in idx.iter().enumerate() {
                for (q, &j) in idx.iter().enumerate() {
                    sub.set(p, q, gram.get(i, j));
                }
            }
            let rhs: Vec<f64> = idx.iter().map(|&i| b[i]).collect();
            let sol = Cholesky::new(&sub)?.solve(&rhs);
            v.iter_mut().for_each(|x| *x = 0.0);
            for (p, &i) in idx.iter().enumerate() {
                v[i] = sol[p];
            }
        }

        // primal feasibility on the free set
        if let Some(j) = (0..n).find(|&j| free[j] && v[j] < -scale_primal) {
            free[j] = false;
            continue;
        }
        // dual feasibility on the active set: mu = G(v - u)
        let gv = gram.matvec(&v);
        let violation = (0..n).find(|&j| !free[j] && gv[j] - b[j] < -scale_dual);
        match violation {
            Some(j) => free[j] = true,
            None => {
                clean = true;
                break;
            }
        }
    }
    if !clean {
        return Err(Error::NoConvergence(format!(
            "active-set iteration exceeded {max_moves} moves"
        )));
    }

    // clamp the tolerated noise so v lands exactly in the cone
    for x in v.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let w: Vec<f64> = u.values().iter().zip(&v).map(|(a, b)| a - b).collect();
    let gap = ip.inner(&v, &w);
    Ok(MoreauSplit {
        v: Profile::new(u.grid().clone(), v)?,
        w: Profile::new(u.grid().clone(), w)?,
        gap,
    })
}
