//! Principal eigenpair of the clamped fourth-order operator by inverse power
//! iteration on the discrete solution operator.
//!
//! For sign-preserving operators the solution operator is positive, so its
//! dominant eigenvalue is simple with a positive eigenfunction and plain
//! inverse iteration converges geometrically; no shifts are needed at this
//! scale.

use crate::banded::BandedMatrix;
use crate::error::{Error, Result};
use crate::grid::{Grid, Profile};

/// Default relative tolerance on successive Rayleigh quotients.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
/// Default iteration cap.
pub const DEFAULT_EIGEN_MAXIT: usize = 10_000;

/// Normalized iterates below this signal a non-sign-preserving operator.
const POSITIVITY_TOL: f64 = 1e-8;

/// Principal eigenpair: smallest eigenvalue of the operator, with a
/// positive, sup-normalized eigenfunction.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub mu1: f64,
    pub phi1: Profile,
    pub iterations: usize,
    /// sup-norm of (A phi1 - mu1 phi1); phi1 is sup-normalized.
    pub residual: f64,
}

/// Inverse power iteration from the strictly positive boundary-distance
/// profile. Stops once successive Rayleigh quotients agree to `tol`
/// relatively and the normalized iterate has settled to 10 * tol in
/// sup-norm (the iterate condition keeps the eigenfunction accurate enough
/// for its positivity and uniqueness guarantees, not just the eigenvalue).
pub fn principal_eigenpair(
    m: &BandedMatrix,
    g: &Grid,
    tol: f64,
    maxit: usize,
) -> Result<EigenPair> {
    if m.size() != g.n() {
        return Err(Error::InvalidInput(format!(
            "matrix size {} does not match grid node count {}",
            m.size(),
            g.n()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be > 0, got {tol}")));
    }
    let n = g.n();
    let lu = m.factorize()?;

    let mut w: Vec<f64> = (0..n).map(|j| g.boundary_distance(j)).collect();
    normalize_positive(&mut w);

    let weighted = |u: &[f64], v: &[f64]| -> f64 {
        (0..n).map(|j| g.quad_weight(j) * u[j] * v[j]).sum::<f64>()
    };

    let vec_tol = 10.0 * tol;
    let mut mu = f64::NAN;
    for it in 1..=maxit {
        let mut z = lu.solve(&w);
        // Rayleigh quotient <A phi, phi>/<phi, phi> of the new iterate,
        // using A z = w to avoid the cancellation-prone banded matvec
        // (both are scale-invariant, so the unnormalized z works).
        let mu_next = weighted(&w, &z) / weighted(&z, &z);
        normalize_positive(&mut z);
        if let Some(&min) = z.iter().min_by(|a, b| a.total_cmp(b)) {
            if min < -POSITIVITY_TOL {
                return Err(Error::PositivityFailure(format!(
                    "iterate developed an interior sign change (min {min:.3e}); \
                     the operator is not sign-preserving"
                )));
            }
        }
        let step = z
            .iter()
            .zip(&w)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        let mu_settled = (mu_next - mu).abs() <= tol * mu_next.abs();
        w = z;
        mu = mu_next;
        if mu_settled && step <= vec_tol {
            if mu <= 0.0 {
                return Err(Error::PositivityFailure(format!(
                    "principal eigenvalue came out non-positive ({mu:.3e})"
                )));
            }
            let avec = m.matvec(&w);
            let residual = avec
                .iter()
                .zip(&w)
                .fold(0.0f64, |acc, (a, p)| acc.max((a - mu * p).abs()));
            return Ok(EigenPair {
                mu1: mu,
                phi1: Profile::new(g.clone(), w)?,
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NoConvergence(format!(
        "inverse iteration did not settle within {maxit} iterations"
    )))
}

/// Scale to unit sup-norm with a positive interior orientation.
fn normalize_positive(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    let flip = if sum < 0.0 { -1.0 } else { 1.0 };
    let sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if sup > 0.0 {
        let s = flip / sup;
        for x in v.iter_mut() {
            *x *= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assemble::assemble_radial;

    use crate::test_oracles::beam_characteristic_root;

    #[test]
    fn clamped_beam_principal_eigenvalue() {
        let n = 256;
        let g = Grid::interval(n).unwrap();
        let m = assemble_radial(1.0, 0.0, &g).unwrap();
        let pair = principal_eigenpair(&m, &g, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAXIT).unwrap();
        let k = beam_characteristic_root();
        let exact = k.powi(4);
        assert!(
            (pair.mu1 - exact).abs() / exact < 5e-3,
            "mu1 = {}, exact = {exact}",
            pair.mu1
        );
        assert!(pair.mu1 > 0.0);
        assert!(pair.phi1.values().iter().all(|&v| v > 0.0));
        assert!((pair.phi1.sup_norm() - 1.0).abs() < 1e-14);
        assert!(
            pair.residual <= 1e-6 * pair.mu1,
            "residual {}",
            pair.residual
        );
    }

    #[test]
    fn eigenvalue_scales_linearly() {
        let n = 96;
        let g = Grid::interval(n).unwrap();
        let base = assemble_radial(1.0, 2.0, &g).unwrap();
        let scaled = assemble_radial(3.7, 3.7 * 2.0, &g).unwrap();
        let p0 = principal_eigenpair(&base, &g, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAXIT).unwrap();
        let p1 = principal_eigenpair(&scaled, &g, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAXIT).unwrap();
        assert!(
            (p1.mu1 - 3.7 * p0.mu1).abs() <= 1e-9 * p1.mu1.abs(),
            "{} vs {}",
            p1.mu1,
            3.7 * p0.mu1
        );
        let diff = p0
            .phi1
            .values()
            .iter()
            .zip(p1.phi1.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-9, "eigenfunctions differ by {diff}");
    }

    #[test]
    fn ball_eigenfunction_decreasing_and_grid_consistent() {
        let mut mus = Vec::new();
        for n in [128usize, 256] {
            let g = Grid::ball(2, n).unwrap();
            let m = assemble_radial(1.0, 0.0, &g).unwrap();
            let p = principal_eigenpair(&m, &g, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAXIT).unwrap();
            let v = p.phi1.values();
            assert!(
                v.windows(2).all(|w| w[1] < w[0] + 1e-12),
                "phi not decreasing"
            );
            mus.push(p.mu1);
        }
        assert!((mus[0] - mus[1]).abs() / mus[1] < 5e-3, "{mus:?}");
        // clamped disc: mu1 = beta^4 with beta ~ 3.19622 the first root of
        // the Bessel characteristic equation
        let reference = 3.19622f64.powi(4);
        assert!(
            (mus[1] - reference).abs() / reference < 1e-2,
            "{} vs {reference}",
            mus[1]
        );
    }

    #[test]
    fn restart_reaches_same_eigenfunction() {
        let n = 128;
        let g = Grid::interval(n).unwrap();
        let m = assemble_radial(1.0, 1.0, &g).unwrap();
        let p = principal_eigenpair(&m, &g, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAXIT).unwrap();

        // hand-rolled restart from a different strictly positive profile
        let lu = m.factorize().unwrap();
        let mut w: Vec<f64> = g.nodes().iter().map(|&x| 1.0 + 0.5 * x.sin()).collect();
        for _ in 0..200 {
            w = lu.solve(&w);
            let sup = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for x in w.iter_mut() {
                *x /= sup;
            }
        }
        let diff = w
            .iter()
            .zip(p.phi1.values())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(diff < 1e-8, "different starts disagree by {diff}");
    }

    #[test]
    fn non_sign_preserving_operator_detected() {
        // lambda = 25 violates positivity; the iterate oscillates
        let n = 96;
        let g = Grid::interval(n).unwrap();
        let coeffs = crate::operator::FourthOrderCoeffs::constant(n, 1.0, 0.0, 25.0, 0.0, 0.0);
        let m = crate::assemble::assemble_1d(&coeffs, &g).unwrap();
        match principal_eigenpair(&m, &g, DEFAULT_EIGEN_TOL, DEFAULT_EIGEN_MAXIT) {
            Err(Error::PositivityFailure(_)) => {}
            other => panic!("expected PositivityFailure, got {other:?}"),
        }
    }
}
