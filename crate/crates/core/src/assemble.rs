//! Finite-difference assembly of fourth-order clamped problems on interval,
//! ball and annulus grids, banded solves, and discrete Green matrices.
//!
//! Second-order central stencils throughout; the pentadiagonal bandwidth is
//! preserved by eliminating boundary ghosts:
//!
//! * node-aligned grids (interval, annulus): boundary values vanish and the
//!   clamped slope is imposed by reflecting the ghost onto the first interior
//!   node on the same side;
//! * staggered ball grids: the boundary r = 1 sits between nodes, so the two
//!   exterior ghosts are eliminated against U(1) = U'(1) = 0 through the
//!   cubic with a double root at the boundary fitted to the last two interior
//!   nodes. The origin needs no condition: the radial flux r^{d-1} U'
//!   vanishes there exactly in conservation form.

use crate::banded::BandedMatrix;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::grid::{Grid, GridKind, Profile};
use crate::operator::FourthOrderCoeffs;

/// Window of matrix-row coefficients over extended node indices
/// `row-3 ..= row+3`, folded onto interior unknowns before emission.
struct RowWindow {
    row: isize, // extended index of the row's node, 1-based
    c: [f64; 7],
}

impl RowWindow {
    fn new(row: isize) -> Self {
        RowWindow { row, c: [0.0; 7] }
    }

    fn add(&mut self, ext: isize, v: f64) {
        let off = ext - self.row + 3;
        assert!((0..7).contains(&off), "stencil outside row window");
        self.c[off as usize] += v;
    }

    fn take(&mut self, ext: isize) -> f64 {
        let off = ext - self.row + 3;
        if !(0..7).contains(&off) {
            return 0.0;
        }
        std::mem::take(&mut self.c[off as usize])
    }

    /// Fold ghosts for node-aligned layouts: values at the boundary nodes
    /// 0 and n+1 vanish, ghosts reflect onto the first interior node.
    fn fold_node_aligned(&mut self, n: isize) {
        self.take(0);
        self.take(n + 1);
        let g = self.take(-1);
        if g != 0.0 {
            self.add(1, g);
        }
        let g = self.take(n + 2);
        if g != 0.0 {
            self.add(n, g);
        }
    }

    /// Fold the two exterior ghosts of a staggered ball grid. Both clamped
    /// conditions pin the quadratic with a double root at r = 1 through the
    /// last interior node, giving u_{n+1} = u_n and u_{n+2} = 9 u_n -- the
    /// staggered counterpart of the node-aligned ghost reflection.
    fn fold_staggered_right(&mut self, n: isize) {
        let g1 = self.take(n + 1);
        if g1 != 0.0 {
            self.add(n, g1);
        }
        let g2 = self.take(n + 2);
        if g2 != 0.0 {
            self.add(n, 9.0 * g2);
        }
    }

    fn emit(&self, m: &mut BandedMatrix, n: isize) {
        for off in 0..7 {
            let v = self.c[off];
            if v != 0.0 {
                let ext = self.row + off as isize - 3;
                assert!(
                    ext >= 1 && ext <= n,
                    "unfolded coefficient at extended node {ext}"
                );
                m.add((self.row - 1) as usize, (ext - 1) as usize, v);
            }
        }
    }
}

/// Assemble the clamped problem
/// `A4 u'''' + A3 u''' + A2 u'' + A1 u' + A0 u = f` on a node-aligned grid.
pub fn assemble_1d(coeffs: &FourthOrderCoeffs, g: &Grid) -> Result<BandedMatrix> {
    if !g.is_node_aligned() {
        return Err(Error::InvalidInput(
            "assemble_1d needs a node-aligned (interval or annulus) grid".into(),
        ));
    }
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 interior nodes, got {n}"
        )));
    }
    if coeffs.node_count() != n {
        return Err(Error::InvalidInput(format!(
            "coefficients sampled on {} nodes, grid has {n}",
            coeffs.node_count()
        )));
    }

    let h = g.h();
    let (h2, h3, h4) = (h * h, h * h * h, h * h * h * h);
    let mut m = BandedMatrix::zero(n, 2, 2);
    for i in 0..n {
        let e = i as isize + 1;
        let mut w = RowWindow::new(e);
        let s4 = coeffs.a4[i] / h4;
        for (off, c) in [(-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)] {
            w.add(e + off, s4 * c);
        }
        let s3 = coeffs.a3[i] / (2.0 * h3);
        for (off, c) in [(-2, -1.0), (-1, 2.0), (1, -2.0), (2, 1.0)] {
            w.add(e + off, s3 * c);
        }
        let s2 = coeffs.a2[i] / h2;
        for (off, c) in [(-1, 1.0), (0, -2.0), (1, 1.0)] {
            w.add(e + off, s2 * c);
        }
        let s1 = coeffs.a1[i] / (2.0 * h);
        w.add(e - 1, -s1);
        w.add(e + 1, s1);
        w.add(e, coeffs.a0[i]);
        w.fold_node_aligned(n as isize);
        w.emit(&mut m, n as isize);
    }
    Ok(m)
}

/// Assemble `B lap^2 u - T lap u = f` for radially symmetric u with clamped
/// conditions, where `lap = r^{1-d} (r^{d-1} u')'` in conservation form.
///
/// On an interval grid (the unit ball of R^1) this is the constant-coefficient
/// problem `B u'''' - T u''`.
pub fn assemble_radial(big_b: f64, big_t: f64, g: &Grid) -> Result<BandedMatrix> {
    if !(big_b > 0.0) {
        return Err(Error::InvalidInput(format!("B must be > 0, got {big_b}")));
    }
    if !(big_t >= 0.0) {
        return Err(Error::InvalidInput(format!("T must be >= 0, got {big_t}")));
    }
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidInput(format!(
            "need at least 4 interior nodes, got {n}"
        )));
    }

    let dim = match g.kind() {
        GridKind::Interval => {
            let coeffs = FourthOrderCoeffs::constant(n, big_b, 0.0, -big_t, 0.0, 0.0);
            return assemble_1d(&coeffs, g);
        }
        GridKind::Ball { dim } | GridKind::Annulus { dim, .. } => dim,
    };

    let h = g.h();
    let dm1 = dim as i32 - 1;
    // radius of the cell face between extended nodes e and e+1
    let r_half: Box<dyn Fn(isize) -> f64> = match g.kind() {
        GridKind::Ball { .. } => Box::new(move |e| e as f64 * h),
        GridKind::Annulus { rho, .. } => Box::new(move |e| rho + (e as f64 + 0.5) * h),
        GridKind::Interval => unreachable!(),
    };
    // conservation-form flux coefficients of the tridiagonal Laplacian row e,
    // with face areas r^{d-1} and the exact cell volume
    // (r_+^d - r_-^d)/d; the exact volume keeps the truncation O(h^2) down
    // to the first node off the origin.
    let betas = move |e: isize| {
        let (r_lo, r_hi) = (r_half(e - 1), r_half(e));
        let vol = (r_hi.powi(dm1 + 1) - r_lo.powi(dm1 + 1)) / (dm1 + 1) as f64;
        let denom = h * vol;
        (r_lo.powi(dm1) / denom, r_hi.powi(dm1) / denom)
    };
    let lap_row = |e: isize| {
        let (bm, bp) = betas(e);
        [(e - 1, bm), (e, -(bm + bp)), (e + 1, bp)]
    };

    let mut m = BandedMatrix::zero(n, 2, 2);
    for i in 0..n {
        let e = i as isize + 1;
        let mut w = RowWindow::new(e);
        // B lap(lap u): weight the three neighbouring Laplacian rows
        let (bm, bp) = betas(e);
        for (le, wt) in [(e - 1, bm), (e, -(bm + bp)), (e + 1, bp)] {
            if wt == 0.0 {
                continue; // zero flux through the origin on ball grids
            }
            for (ext, c) in lap_row(le) {
                w.add(ext, big_b * wt * c);
            }
        }
        // -T lap u
        for (ext, c) in lap_row(e) {
            w.add(ext, -big_t * c);
        }
        match g.kind() {
            GridKind::Ball { .. } => w.fold_staggered_right(n as isize),
            _ => w.fold_node_aligned(n as isize),
        }
        w.emit(&mut m, n as isize);
    }
    Ok(m)
}

/// Solve `m u = rhs` by banded LU with partial pivoting.
///
/// For repeated right-hand sides factorize once via
/// [`BandedMatrix::factorize`] and reuse the factors.
pub fn solve(m: &BandedMatrix, rhs: &Profile) -> Result<Profile> {
    if m.size() != rhs.grid().n() {
        return Err(Error::InvalidInput(format!(
            "matrix size {} does not match grid node count {}",
            m.size(),
            rhs.grid().n()
        )));
    }
    let lu = m.factorize()?;
    let u = lu.solve(rhs.values());
    Profile::new(rhs.grid().clone(), u)
}

/// Discrete Green matrix: column j solves `m G_j = e_j / h`, so G
/// approximates the continuous kernel at node pairs and
/// `G (h f) = m^{-1} f` holds by linearity.
pub fn green_matrix(m: &BandedMatrix, g: &Grid) -> Result<DenseMatrix> {
    green_matrix_with(m, g, Exec::default())
}

/// [`green_matrix`] with an explicit execution strategy; columns are
/// independent solves against one shared factorization.
pub fn green_matrix_with(m: &BandedMatrix, g: &Grid, exec: Exec) -> Result<DenseMatrix> {
    let n = m.size();
    if n != g.n() {
        return Err(Error::InvalidInput(format!(
            "matrix size {} does not match grid node count {}",
            n,
            g.n()
        )));
    }
    let lu = m.factorize()?;
    let scale = 1.0 / g.h();
    let cols = exec::map_indexed(exec, n, |j| {
        let mut e = vec![0.0; n];
        e[j] = scale;
        lu.solve_in_place(&mut e);
        e
    });
    let mut green = DenseMatrix::zero(n);
    for (j, col) in cols.iter().enumerate() {
        green.set_column(j, col);
    }
    Ok(green)
}
