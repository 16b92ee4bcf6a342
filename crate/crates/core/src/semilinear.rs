//! Monotone iteration for the semilinear clamped problem
//! `B lap^2 u - T lap u = -lambda g(u)`, branch continuation in lambda,
//! and bracketing of the pull-in threshold lambda* with its eigenvalue
//! upper bound.

use std::sync::Arc;

use crate::assemble::assemble_radial;
use crate::banded::BandedLu;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::grid::{Grid, Profile};
use crate::spectral::{principal_eigenpair, DEFAULT_EIGEN_MAXIT, DEFAULT_EIGEN_TOL};

/// Default sup-norm tolerance for the monotone iteration.
pub const DEFAULT_MONOTONE_TOL: f64 = 1e-10;
/// Default iteration cap; the iteration is linearly convergent and slows
/// near lambda*, but stays bounded at desk scale.
pub const DEFAULT_MONOTONE_MAXIT: usize = 10_000;

/// Number of samples used to estimate inf g on (a_J, 0].
const INF_SAMPLES: usize = 10_000;

/// A nonlinearity g on a declared open domain J containing 0, non-negative
/// and non-increasing with g(0) > 0.
#[derive(Clone)]
pub struct Nonlinearity {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    domain: (f64, f64),
    margin: (f64, f64),
}

impl std::fmt::Debug for Nonlinearity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Nonlinearity")
            .field("domain", &self.domain)
            .finish()
    }
}

impl Nonlinearity {
    /// Declare g on the open interval `domain`. Checks g(0) > 0 and
    /// spot-checks non-negativity and monotonicity on a sample of J.
    pub fn new(domain: (f64, f64), f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let (a, b) = domain;
        if !(a < 0.0 && b > 0.0) {
            return Err(Error::InvalidInput(format!(
                "domain ({a}, {b}) must be open and contain 0"
            )));
        }
        // evaluation is refused within this safety margin of the ends
        let margin = (
            if a.is_finite() { 1e-6 * a.abs() } else { 0.0 },
            if b.is_finite() { 1e-6 * b.abs() } else { 0.0 },
        );
        let g = Nonlinearity {
            f: Arc::new(f),
            domain,
            margin,
        };
        let g0 = (g.f)(0.0);
        if !(g0 > 0.0) {
            return Err(Error::InvalidInput(format!("g(0) = {g0} must be > 0")));
        }
        // spot-check monotone non-increasing and non-negative
        let lo = if a.is_finite() { a + margin.0 } else { -1e6 };
        let hi = if b.is_finite() { b - margin.1 } else { 1e6 };
        let samples = 65;
        let mut prev = f64::INFINITY;
        for k in 0..samples {
            let xi = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
            let v = (g.f)(xi);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "g({xi}) = {v} is not a finite non-negative value"
                )));
            }
            if v > prev + 1e-12 * prev.abs().max(1.0) {
                return Err(Error::InvalidInput(format!(
                    "g is not non-increasing near xi = {xi}"
                )));
            }
            prev = v;
        }
        Ok(g)
    }

    /// The MEMS nonlinearity g(xi) = 1/(1+xi)^2 on J = (-1, 1).
    pub fn mems() -> Self {
        Nonlinearity::new((-1.0, 1.0), |xi| {
            let d = 1.0 + xi;
            1.0 / (d * d)
        })
        .expect("MEMS nonlinearity satisfies its own contract")
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    /// Evaluate g, or None when xi has left the domain (by the safety
    /// margin), which the iteration treats as divergence.
    pub fn eval(&self, xi: f64) -> Option<f64> {
        let (a, b) = self.domain;
        if xi <= a + self.margin.0 || xi >= b - self.margin.1 {
            return None;
        }
        Some((self.f)(xi))
    }
}

/// The semilinear problem `B lap^2 u - T lap u = -lambda g(u)` with clamped
/// conditions on `grid`.
#[derive(Debug, Clone)]
pub struct SemilinearProblem {
    pub big_b: f64,
    pub big_t: f64,
    pub grid: Grid,
    pub g: Nonlinearity,
    pub lambda: f64,
}

impl SemilinearProblem {
    pub fn new(big_b: f64, big_t: f64, grid: Grid, g: Nonlinearity, lambda: f64) -> Result<Self> {
        if !(big_b > 0.0) {
            return Err(Error::InvalidInput(format!("B must be > 0, got {big_b}")));
        }
        if !(big_t >= 0.0) {
            return Err(Error::InvalidInput(format!("T must be >= 0, got {big_t}")));
        }
        if !(lambda >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "lambda must be >= 0, got {lambda}"
            )));
        }
        Ok(SemilinearProblem {
            big_b,
            big_t,
            grid,
            g,
            lambda,
        })
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        let mut p = self.clone();
        p.lambda = lambda;
        p
    }
}

/// One point on the solution branch.
#[derive(Debug, Clone)]
pub struct BranchPoint {
    pub lambda: f64,
    pub u: Profile,
    pub iterations: usize,
    pub converged: bool,
    pub min_u: f64,
}

/// Monotone iteration from u = 0: each step solves the linear clamped
/// problem with right-hand side -lambda g(u_prev). Converges to the discrete
/// maximal solution when the sup-norm update drops below `tol`; leaving the
/// domain of g or hitting `maxit` is reported as divergence
/// (`converged = false`), not as an error.
pub fn monotone_solve(p: &SemilinearProblem, tol: f64, maxit: usize) -> Result<BranchPoint> {
    monotone_solve_observed(p, tol, maxit, |_| {})
}

/// [`monotone_solve`] invoking `observer` with every iterate, oldest first;
/// used to inspect the monotone decrease of the sequence.
pub fn monotone_solve_observed(
    p: &SemilinearProblem,
    tol: f64,
    maxit: usize,
    observer: impl FnMut(&[f64]),
) -> Result<BranchPoint> {
    let m = assemble_radial(p.big_b, p.big_t, &p.grid)?;
    let lu = m.factorize()?;
    monotone_iterate(&lu, p, tol, maxit, observer)
}

/// Iteration core against a pre-computed factorization (shared across
/// branch points and bisection probes).
fn monotone_iterate(
    lu: &BandedLu,
    p: &SemilinearProblem,
    tol: f64,
    maxit: usize,
    mut observer: impl FnMut(&[f64]),
) -> Result<BranchPoint> {
    let n = p.grid.n();
    let mut u = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < maxit {
        iterations += 1;
        let mut domain_exit = false;
        for j in 0..n {
            match p.g.eval(u[j]) {
                Some(gv) => rhs[j] = -p.lambda * gv,
                None => {
                    domain_exit = true;
                    break;
                }
            }
        }
        if domain_exit {
            break;
        }
        let next = lu.solve(&rhs);
        let step = next
            .iter()
            .zip(&u)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        observer(&next);
        u = next;
        if step < tol {
            converged = true;
            break;
        }
        // divergence: any node outside J by the safety margin fails the
        // next g evaluation and exits above
    }
    let min_u = u.iter().fold(f64::INFINITY, |m, &v| m.min(v));
    Ok(BranchPoint {
        lambda: p.lambda,
        u: Profile::new(p.grid.clone(), u)?,
        iterations,
        converged,
        min_u,
    })
}

/// Result of [`branch_sweep`]: branch points in input order plus the indices
/// (i, i+1) of consecutive converged pairs that violate the expected
/// node-wise decrease of u in lambda.
#[derive(Debug, Clone)]
pub struct BranchSweep {
    pub points: Vec<BranchPoint>,
    pub monotonicity_violations: Vec<(usize, usize)>,
}

/// Solve independently at each lambda (ascending, positive) and verify that
/// consecutive converged solutions decrease node-wise.
pub fn branch_sweep(template: &SemilinearProblem, lambdas: &[f64]) -> Result<BranchSweep> {
    branch_sweep_with(
        template,
        lambdas,
        DEFAULT_MONOTONE_TOL,
        DEFAULT_MONOTONE_MAXIT,
        Exec::default(),
    )
}

pub fn branch_sweep_with(
    template: &SemilinearProblem,
    lambdas: &[f64],
    tol: f64,
    maxit: usize,
    exec: Exec,
) -> Result<BranchSweep> {
    if lambdas.iter().any(|&l| l <= 0.0) {
        return Err(Error::InvalidInput("lambdas must be positive".into()));
    }
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "lambdas must be strictly ascending".into(),
        ));
    }
    let m = assemble_radial(template.big_b, template.big_t, &template.grid)?;
    let lu = m.factorize()?;
    let points = exec::map_indexed(exec, lambdas.len(), |i| {
        let p = template.with_lambda(lambdas[i]);
        monotone_iterate(&lu, &p, tol, maxit, |_| {})
    });
    let mut resolved = Vec::with_capacity(points.len());
    for p in points {
        resolved.push(p?);
    }
    let mut violations = Vec::new();
    for i in 0..resolved.len().saturating_sub(1) {
        let (lo, hi) = (&resolved[i], &resolved[i + 1]);
        if lo.converged && hi.converged {
            let decreasing = hi.u.values().iter().zip(lo.u.values()).all(|(a, b)| a < b);
            if !decreasing {
                violations.push((i, i + 1));
            }
        }
    }
    Ok(BranchSweep {
        points: resolved,
        monotonicity_violations: violations,
    })
}

/// Bisect the convergence boundary of the monotone iteration: returns
/// (lo, hi) with hi - lo <= tol_lambda, converged at lo and diverged at hi.
///
/// A geometric down-scan from `lambda_hi0` locates a convergent lambda (down
/// to 1e-8), an up-scan locates a divergent one; both failing is
/// `BracketFailure`.
pub fn lambda_star_bracket(
    template: &SemilinearProblem,
    lambda_hi0: f64,
    tol_lambda: f64,
) -> Result<(f64, f64)> {
    if !(lambda_hi0 > 0.0) || !(tol_lambda > 0.0) {
        return Err(Error::InvalidInput(
            "lambda_hi0 and tol_lambda must be positive".into(),
        ));
    }
    let m = assemble_radial(template.big_b, template.big_t, &template.grid)?;
    let lu = m.factorize()?;
    let converges = |lambda: f64| -> Result<bool> {
        let p = template.with_lambda(lambda);
        Ok(monotone_iterate(
            &lu,
            &p,
            DEFAULT_MONOTONE_TOL,
            DEFAULT_MONOTONE_MAXIT,
            |_| {},
        )?
        .converged)
    };

    let (mut lo, mut hi);
    if converges(lambda_hi0)? {
        lo = lambda_hi0;
        hi = 2.0 * lambda_hi0;
        let mut doublings = 0;
        while converges(hi)? {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > 100 {
                return Err(Error::BracketFailure(format!(
                    "no divergent lambda found up to {hi:.3e}; lambda* may be unbounded"
                )));
            }
        }
    } else {
        hi = lambda_hi0;
        lo = lambda_hi0 / 2.0;
        while !converges(lo)? {
            hi = lo;
            lo /= 2.0;
            if lo < 1e-8 {
                return Err(Error::BracketFailure(
                    "no convergent lambda found down to 1e-8".into(),
                ));
            }
        }
    }

    while hi - lo > tol_lambda {
        let mid = 0.5 * (lo + hi);
        if converges(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi))
}

/// The upper bound lambda* <= -a mu1 / m, with a = inf J, mu1 the principal
/// eigenvalue of `B lap^2 - T lap` on the problem grid, and m = inf g on
/// (a, 0] estimated by dense sampling. Returns +infinity when inf J = -inf.
pub fn lambda_star_bound(template: &SemilinearProblem) -> Result<f64> {
    let a = template.g.domain().0;
    if a.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut m_inf = f64::INFINITY;
    for k in 1..=INF_SAMPLES {
        let xi = a * (1.0 - k as f64 / INF_SAMPLES as f64);
        let v = template.g.eval(xi).ok_or_else(|| {
            Error::InvalidInput(format!("g not evaluable at sample {xi} of (a, 0]"))
        })?;
        m_inf = m_inf.min(v);
    }
    if !(m_inf > 0.0) {
        return Err(Error::InvalidInput(format!(
            "inf g on (a, 0] must be positive, sampled {m_inf}"
        )));
    }
    let matrix = assemble_radial(template.big_b, template.big_t, &template.grid)?;
    let pair = principal_eigenpair(
        &matrix,
        &template.grid,
        DEFAULT_EIGEN_TOL,
        DEFAULT_EIGEN_MAXIT,
    )?;
    Ok(-a * pair.mu1 / m_inf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mems_problem(dim: u32, n: usize, big_b: f64, big_t: f64, lambda: f64) -> SemilinearProblem {
        let grid = Grid::ball(dim, n).unwrap();
        SemilinearProblem::new(big_b, big_t, grid, Nonlinearity::mems(), lambda).unwrap()
    }

    #[test]
    fn nonlinearity_contract_enforced() {
        assert!(Nonlinearity::new((0.5, 1.0), |_| 1.0).is_err()); // 0 not inside
        assert!(Nonlinearity::new((-1.0, 1.0), |_| 0.0).is_err()); // g(0) = 0
        assert!(Nonlinearity::new((-1.0, 1.0), |xi| 1.0 + xi).is_err()); // increasing
        assert!(Nonlinearity::new((-1.0, 1.0), |xi| 1.0 - xi).is_ok());
    }

    #[test]
    fn mems_evaluation_and_domain_exit() {
        let g = Nonlinearity::mems();
        assert_eq!(g.eval(0.0), Some(1.0));
        assert!(g.eval(-0.5).unwrap() > 1.0);
        assert_eq!(g.eval(-1.0), None);
        assert_eq!(g.eval(-0.9999999), None); // inside the safety margin
        assert_eq!(g.eval(1.5), None);
    }

    #[test]
    fn zero_lambda_converges_immediately() {
        let p = mems_problem(2, 32, 1.0, 1.0, 0.0);
        let b = monotone_solve(&p, 1e-10, 100).unwrap();
        assert!(b.converged);
        assert_eq!(b.iterations, 1);
        assert!(b.u.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_nonlinearity_converges_in_two_iterations() {
        let g = Nonlinearity::new((-1.0, 1.0), |_| 1.0).unwrap();
        let grid = Grid::interval(48).unwrap();
        let p = SemilinearProblem::new(1.0, 0.0, grid.clone(), g, 0.7).unwrap();
        let b = monotone_solve(&p, 1e-10, 100).unwrap();
        assert!(b.converged);
        assert_eq!(b.iterations, 2);
        // u = -lambda K 1
        let m = assemble_radial(1.0, 0.0, &grid).unwrap();
        let k1 = m.factorize().unwrap().solve(&vec![1.0; 48]);
        for (u, k) in b.u.values().iter().zip(&k1) {
            assert!((u + 0.7 * k).abs() < 1e-12);
        }
    }

    #[test]
    fn mems_iterates_decrease_monotonically() {
        let p = mems_problem(2, 64, 1.0, 1.0, 0.5);
        let mut prev: Option<Vec<f64>> = None;
        let b = monotone_solve_observed(&p, 1e-10, 10_000, |it| {
            if let Some(pr) = &prev {
                for (new, old) in it.iter().zip(pr) {
                    assert!(new <= &(old + 1e-12), "iterate increased: {new} > {old}");
                }
            }
            prev = Some(it.to_vec());
        })
        .unwrap();
        assert!(b.converged);
        assert!(b.min_u > -1.0);
        assert!(b.u.values().iter().all(|&v| v < 0.0));
    }

    /// Regression: the converged minimum at lambda = 0.5 agrees between
    /// n = 128 and n = 256 to 1e-3 (d = 2, B = T = 1).
    #[test]
    fn mems_min_depth_grid_consistent() {
        let mut mins = Vec::new();
        for n in [128usize, 256] {
            let p = mems_problem(2, n, 1.0, 1.0, 0.5);
            let b = monotone_solve(&p, 1e-10, 10_000).unwrap();
            assert!(b.converged);
            mins.push(b.min_u);
        }
        assert!((mins[0] - mins[1]).abs() < 1e-3, "{mins:?}");
    }

    #[test]
    fn branch_is_decreasing_in_lambda() {
        let template = mems_problem(2, 64, 1.0, 1.0, 0.2);
        let sweep = branch_sweep(&template, &[0.2, 0.4]).unwrap();
        assert!(sweep.points.iter().all(|p| p.converged));
        assert!(sweep.monotonicity_violations.is_empty());
        for (a, b) in sweep.points[1]
            .u
            .values()
            .iter()
            .zip(sweep.points[0].u.values())
        {
            assert!(a < b);
        }
    }

    #[test]
    fn branch_sweep_validates_lambdas() {
        let template = mems_problem(2, 32, 1.0, 1.0, 0.2);
        assert!(branch_sweep(&template, &[0.4, 0.2]).is_err());
        assert!(branch_sweep(&template, &[-0.1, 0.2]).is_err());
        let single = branch_sweep(&template, &[0.3]).unwrap();
        assert_eq!(single.points.len(), 1);
        assert!(single.monotonicity_violations.is_empty());
    }

    /// With g = 1 on J = (-1, 1), u = -lambda K1, so the iteration diverges
    /// exactly when lambda ||K1||_inf reaches 1 (up to the safety margin).
    #[test]
    fn bracket_matches_linear_pull_in() {
        let g = Nonlinearity::new((-1.0, 1.0), |_| 1.0).unwrap();
        let grid = Grid::ball(2, 64).unwrap();
        let template = SemilinearProblem::new(1.0, 0.0, grid.clone(), g, 0.1).unwrap();
        let m = assemble_radial(1.0, 0.0, &grid).unwrap();
        let k1 = m.factorize().unwrap().solve(&vec![1.0; 64]);
        let k1_sup = k1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let exact = 1.0 / k1_sup;
        let (lo, hi) = lambda_star_bracket(&template, 1.0, 1e-6).unwrap();
        assert!(hi - lo <= 1e-6);
        assert!(
            lo <= exact && exact <= hi + 2e-6 * exact,
            "bracket ({lo}, {hi}) misses {exact}"
        );
    }

    #[test]
    fn bracket_below_eigenvalue_bound() {
        let template = mems_problem(1, 128, 1.0, 0.0, 0.5);
        let bound = lambda_star_bound(&template).unwrap();
        // a = -1, m = 1: the bound equals mu1 of the clamped beam
        let k = crate::test_oracles::beam_characteristic_root();
        assert!(
            (bound - k.powi(4)).abs() / k.powi(4) < 5e-3,
            "bound {bound}"
        );
        let (lo, hi) = lambda_star_bracket(&template, bound, 1e-4).unwrap();
        assert!(hi - lo <= 1e-4);
        assert!(hi <= bound + 1e-6, "bracket hi {hi} above bound {bound}");
        assert!(lo > 0.0);
    }

    #[test]
    fn bound_scales_inversely_with_g() {
        let grid = Grid::interval(64).unwrap();
        let g1 = Nonlinearity::new((-1.0, 1.0), |xi| 1.0 / (1.0 + xi) / (1.0 + xi)).unwrap();
        let g2 = Nonlinearity::new((-1.0, 1.0), |xi| 2.0 / (1.0 + xi) / (1.0 + xi)).unwrap();
        let p1 = SemilinearProblem::new(1.0, 0.0, grid.clone(), g1, 0.1).unwrap();
        let p2 = SemilinearProblem::new(1.0, 0.0, grid, g2, 0.1).unwrap();
        let b1 = lambda_star_bound(&p1).unwrap();
        let b2 = lambda_star_bound(&p2).unwrap();
        assert!((b1 - 2.0 * b2).abs() < 1e-9 * b1, "{b1} vs {b2}");
    }

    #[test]
    fn unbounded_domain_reports_infinite_bound() {
        let g = Nonlinearity::new((f64::NEG_INFINITY, 1.0), |xi| 1.0 / (1.0 + xi.exp())).unwrap();
        let grid = Grid::interval(32).unwrap();
        let p = SemilinearProblem::new(1.0, 0.0, grid, g, 0.1).unwrap();
        assert_eq!(lambda_star_bound(&p).unwrap(), f64::INFINITY);
    }

    #[test]
    fn coarse_tolerance_gives_immediate_bracket() {
        let template = mems_problem(2, 32, 1.0, 1.0, 0.5);
        let (lo, hi) = lambda_star_bracket(&template, 1.0, 50.0).unwrap();
        assert!(hi - lo <= 50.0);
        assert!(lo < hi);
    }
}
