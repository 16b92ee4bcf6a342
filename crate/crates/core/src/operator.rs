//! Second-order factor operators, their composition into fourth-order
//! operators, and the explicit factorizations of the anti-diffusive family
//! u'''' + a u''' + lambda u''.
//!
//! Coefficients are stored as node samples on the solver grid. Derivative
//! samples are supplied analytically by the factor constructors, never by
//! numerical differentiation, so composition round-trips are exact up to
//! floating-point evaluation.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridKind};

/// Sampled coefficients of a second-order operator
/// `L w = a w'' + b w' + c w` together with first and second derivative
/// samples of each coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderCoeffs {
    pub a: Vec<f64>,
    pub da: Vec<f64>,
    pub dda: Vec<f64>,
    pub b: Vec<f64>,
    pub db: Vec<f64>,
    pub ddb: Vec<f64>,
    pub c: Vec<f64>,
    pub dc: Vec<f64>,
    pub ddc: Vec<f64>,
}

impl SecondOrderCoeffs {
    /// Constant-coefficient operator; all derivative samples are zero.
    pub fn constant(n: usize, a: f64, b: f64, c: f64) -> Self {
        SecondOrderCoeffs {
            a: vec![a; n],
            da: vec![0.0; n],
            dda: vec![0.0; n],
            b: vec![b; n],
            db: vec![0.0; n],
            ddb: vec![0.0; n],
            c: vec![c; n],
            dc: vec![0.0; n],
            ddc: vec![0.0; n],
        }
    }

    fn len(&self) -> usize {
        self.a.len()
    }

    fn validate(&self, n: usize, eta: f64, which: &str) -> Result<()> {
        let arrays = [
            &self.a, &self.da, &self.dda, &self.b, &self.db, &self.ddb, &self.c, &self.dc,
            &self.ddc,
        ];
        if arrays.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidInput(format!(
                "{which}: coefficient arrays must all have length {n}"
            )));
        }
        if let Some(&amin) = self.a.iter().min_by(|x, y| x.total_cmp(y)) {
            if amin < eta {
                return Err(Error::InvalidInput(format!(
                    "{which}: ellipticity violated, min a = {amin} < eta = {eta}"
                )));
            }
        }
        if let Some(&cmax) = self.c.iter().max_by(|x, y| x.total_cmp(y)) {
            if cmax > 0.0 {
                return Err(Error::InvalidInput(format!(
                    "{which}: sign condition violated, max c = {cmax} > 0"
                )));
            }
        }
        Ok(())
    }
}

/// A pair (L1, L2) of second-order operators with shared ellipticity
/// constant eta, whose composition is a fourth-order operator with the
/// strong sign-preserving property under clamped conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    pub l1: SecondOrderCoeffs,
    pub l2: SecondOrderCoeffs,
    pub eta: f64,
}

impl FactorPair {
    /// Validate user-supplied factors against a declared eta.
    pub fn new(l1: SecondOrderCoeffs, l2: SecondOrderCoeffs, eta: f64) -> Result<Self> {
        if !(eta > 0.0) {
            return Err(Error::InvalidInput(format!("eta must be > 0, got {eta}")));
        }
        if l1.len() != l2.len() {
            return Err(Error::InvalidInput(
                "factor operators sampled on different node counts".into(),
            ));
        }
        l1.validate(l1.len(), eta, "L1")?;
        l2.validate(l2.len(), eta, "L2")?;
        Ok(FactorPair { l1, l2, eta })
    }

    pub fn node_count(&self) -> usize {
        self.l1.len()
    }
}

/// Sampled coefficients of a fourth-order operator
/// `A4 u'''' + A3 u''' + A2 u'' + A1 u' + A0 u`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourthOrderCoeffs {
    pub a4: Vec<f64>,
    pub a3: Vec<f64>,
    pub a2: Vec<f64>,
    pub a1: Vec<f64>,
    pub a0: Vec<f64>,
}

impl FourthOrderCoeffs {
    /// Constant-coefficient fourth-order operator.
    pub fn constant(n: usize, a4: f64, a3: f64, a2: f64, a1: f64, a0: f64) -> Self {
        FourthOrderCoeffs {
            a4: vec![a4; n],
            a3: vec![a3; n],
            a2: vec![a2; n],
            a1: vec![a1; n],
            a0: vec![a0; n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.a4.len()
    }
}

/// Compose a factor pair into the fourth-order coefficients, node-wise:
///
/// ```text
/// A4 = a1 a2
/// A3 = (2 a1' + b1) a2 + a1 b2
/// A2 = (a1'' + 2 b1' + c1) a2 + (a1' + b1) b2 + a1 c2
/// A1 = (b1'' + 2 c1') a2 + (b1' + c1) b2 + b1 c2
/// A0 = c1'' a2 + c1' b2 + c1 c2
/// ```
pub fn compose(fp: &FactorPair, g: &Grid) -> Result<FourthOrderCoeffs> {
    let n = g.n();
    if fp.node_count() != n {
        return Err(Error::InvalidInput(format!(
            "factor pair sampled on {} nodes, grid has {n}",
            fp.node_count()
        )));
    }
    let (l1, l2) = (&fp.l1, &fp.l2);
    let mut out = FourthOrderCoeffs {
        a4: Vec::with_capacity(n),
        a3: Vec::with_capacity(n),
        a2: Vec::with_capacity(n),
        a1: Vec::with_capacity(n),
        a0: Vec::with_capacity(n),
    };
    for j in 0..n {
        let (a1, da1, dda1) = (l1.a[j], l1.da[j], l1.dda[j]);
        let (b1, db1, ddb1) = (l1.b[j], l1.db[j], l1.ddb[j]);
        let (c1, dc1, ddc1) = (l1.c[j], l1.dc[j], l1.ddc[j]);
        let (a2, b2, c2) = (l2.a[j], l2.b[j], l2.c[j]);
        out.a4.push(a1 * a2);
        out.a3.push((2.0 * da1 + b1) * a2 + a1 * b2);
        out.a2
            .push((dda1 + 2.0 * db1 + c1) * a2 + (da1 + b1) * b2 + a1 * c2);
        out.a1
            .push((ddb1 + 2.0 * dc1) * a2 + (db1 + c1) * b2 + b1 * c2);
        out.a0.push(ddc1 * a2 + dc1 * b2 + c1 * c2);
    }
    Ok(out)
}

/// The factorization L1 = w'', L2 = w'' + a w' + lambda w of
/// u'''' + a u''' + lambda u'', valid whenever lambda <= 0.
pub fn trivial_factor(a: f64, lambda: f64, g: &Grid) -> Result<FactorPair> {
    if lambda > 0.0 {
        return Err(Error::InvalidInput(format!(
            "trivial factorization needs lambda <= 0, got {lambda}"
        )));
    }
    let n = g.n();
    FactorPair::new(
        SecondOrderCoeffs::constant(n, 1.0, 0.0, 0.0),
        SecondOrderCoeffs::constant(n, 1.0, a, lambda),
        1.0,
    )
}

/// The weighted factorization L1 = w''/p, L2 = p w'' + (2p' + ap) w' of
/// u'''' + a u''' + lambda u'' for 0 < lambda < (a^2 + pi^2)/4, built from a
/// positive solution p of p'' + a p' + lambda p = 0 on [-1, 1].
///
/// The branch of p is selected by the sign of a^2 - 4 lambda; at
/// lambda = a^2/4 exactly, the middle branch is used. All derivative samples
/// are evaluated analytically.
pub fn factor_anti_diffusive(a: f64, lambda: f64, g: &Grid) -> Result<FactorPair> {
    if g.kind() != GridKind::Interval {
        return Err(Error::InvalidInput(
            "anti-diffusive factorization is defined on the interval grid".into(),
        ));
    }
    let upper = (a * a + PI * PI) / 4.0;
    if !(lambda > 0.0 && lambda < upper) {
        return Err(Error::OutOfRange(format!(
            "lambda = {lambda} outside (0, (a^2+pi^2)/4) = (0, {upper})"
        )));
    }

    let n = g.n();
    let mut p = Vec::with_capacity(n);
    let mut dp = Vec::with_capacity(n);
    let mut ddp = Vec::with_capacity(n);
    let disc = a * a - 4.0 * lambda;
    for &x in g.nodes() {
        let (pv, dpv, ddpv) = if disc > 0.0 {
            // p = exp(-(a + sqrt(a^2 - 4 lambda)) x / 2)
            let m = -(a + disc.sqrt()) / 2.0;
            let e = (m * x).exp();
            (e, m * e, m * m * e)
        } else if disc == 0.0 {
            // p = (2 + x) exp(-a x / 2)
            let e = (-a * x / 2.0).exp();
            (
                (2.0 + x) * e,
                e * (1.0 - a / 2.0 * (2.0 + x)),
                e * (-a + a * a / 4.0 * (2.0 + x)),
            )
        } else {
            // p = cos(sqrt(4 lambda - a^2) x / 2) exp(-a x / 2)
            let q = (-disc).sqrt();
            let e = (-a * x / 2.0).exp();
            let (s, c) = (q * x / 2.0).sin_cos();
            (
                c * e,
                e * (-q / 2.0 * s - a / 2.0 * c),
                e * ((a * a - q * q) / 4.0 * c + a * q / 2.0 * s),
            )
        };
        p.push(pv);
        dp.push(dpv);
        ddp.push(ddpv);
    }

    if let Some((j, &bad)) = p.iter().enumerate().find(|(_, &v)| v <= 0.0) {
        return Err(Error::NumericalGuard(format!(
            "weight p non-positive ({bad}) at node {j}; factorization invalid"
        )));
    }

    // L1 = (1/p) w'': derivatives of 1/p from the chain rule.
    let mut l1 = SecondOrderCoeffs::constant(n, 1.0, 0.0, 0.0);
    // L2 = p w'' + (2p' + ap) w'; p''' from the defining ODE.
    let mut l2 = SecondOrderCoeffs::constant(n, 1.0, 0.0, 0.0);
    for j in 0..n {
        let (pv, dpv, ddpv) = (p[j], dp[j], ddp[j]);
        let dddp = -a * ddpv - lambda * dpv;
        l1.a[j] = 1.0 / pv;
        l1.da[j] = -dpv / (pv * pv);
        l1.dda[j] = (2.0 * dpv * dpv - pv * ddpv) / (pv * pv * pv);
        l2.a[j] = pv;
        l2.da[j] = dpv;
        l2.dda[j] = ddpv;
        l2.b[j] = 2.0 * dpv + a * pv;
        l2.db[j] = 2.0 * ddpv + a * dpv;
        l2.ddb[j] = 2.0 * dddp + a * ddpv;
    }

    let eta = p.iter().fold(f64::INFINITY, |m, &v| m.min(v).min(1.0 / v));
    FactorPair::new(l1, l2, eta)
}
