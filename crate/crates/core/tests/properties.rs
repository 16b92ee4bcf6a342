#![allow(clippy::needless_range_loop)]

//! Property tests for the library-wide invariants.

use proptest::prelude::*;

use clamp4::assemble::{assemble_1d, green_matrix, solve};
use clamp4::banded::BandedMatrix;
use clamp4::cone::{project_cone, EnergyInnerProduct};
use clamp4::grid::{Grid, Profile};
use clamp4::operator::{compose, factor_anti_diffusive, trivial_factor, FourthOrderCoeffs};

fn beam_matrix(n: usize, a: f64, lambda: f64) -> (BandedMatrix, Grid) {
    let g = Grid::interval(n).unwrap();
    let coeffs = FourthOrderCoeffs::constant(n, 1.0, a, lambda, 0.0, 0.0);
    (assemble_1d(&coeffs, &g).unwrap(), g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// The trivial factorization composes back bit-exactly for any
    /// a and lambda <= 0.
    #[test]
    fn trivial_composition_exact(a in -10.0f64..10.0, lambda in -10.0f64..0.0) {
        let g = Grid::interval(17).unwrap();
        let fp = trivial_factor(a, lambda, &g).unwrap();
        let c = compose(&fp, &g).unwrap();
        for j in 0..g.n() {
            prop_assert_eq!(c.a4[j], 1.0);
            prop_assert_eq!(c.a3[j], a);
            prop_assert_eq!(c.a2[j], lambda);
            prop_assert_eq!(c.a1[j], 0.0);
            prop_assert_eq!(c.a0[j], 0.0);
        }
    }

    /// The weighted factorization round-trips within 1e-8 per node across
    /// its whole parameter region (all three branches of the weight).
    #[test]
    fn anti_diffusive_round_trip(a in -4.0f64..4.0, t in 0.02f64..0.98) {
        let upper = (a * a + std::f64::consts::PI * std::f64::consts::PI) / 4.0;
        let lambda = t * upper;
        let g = Grid::interval(33).unwrap();
        let fp = factor_anti_diffusive(a, lambda, &g).unwrap();
        prop_assert!(fp.eta > 0.0);
        let c = compose(&fp, &g).unwrap();
        for j in 0..g.n() {
            prop_assert!((c.a4[j] - 1.0).abs() < 1e-8);
            prop_assert!((c.a3[j] - a).abs() < 1e-8);
            prop_assert!((c.a2[j] - lambda).abs() < 1e-8);
            prop_assert!(c.a1[j].abs() < 1e-8);
            prop_assert!(c.a0[j].abs() < 1e-8);
            prop_assert!(c.a4[j] >= fp.eta * fp.eta - 1e-12);
        }
    }

    /// solve(assemble) is linear in the right-hand side.
    #[test]
    fn solve_is_linear(
        alpha in 0.5f64..2.0,
        beta in -2.0f64..-0.5,
        freq in 1.0f64..6.0,
        lambda in -4.0f64..1.0,
    ) {
        let (m, g) = beam_matrix(64, 0.0, lambda);
        let f1 = Profile::from_fn(g.clone(), |x| 1.0 + (freq * x).sin()).unwrap();
        let f2 = Profile::from_fn(g.clone(), |x| x * x - 0.3).unwrap();
        let combo = Profile::new(
            g.clone(),
            f1.values()
                .iter()
                .zip(f2.values())
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        )
        .unwrap();
        let u1 = solve(&m, &f1).unwrap();
        let u2 = solve(&m, &f2).unwrap();
        let uc = solve(&m, &combo).unwrap();
        let scale = alpha.abs() * u1.sup_norm() + beta.abs() * u2.sup_norm();
        for j in 0..g.n() {
            let lin = alpha * u1.values()[j] + beta * u2.values()[j];
            prop_assert!(
                (uc.values()[j] - lin).abs() <= 1e-10 * scale,
                "node {}: {} vs {}", j, uc.values()[j], lin
            );
        }
    }

    /// G (h f) reproduces the direct solve for any right-hand side.
    #[test]
    fn green_reproduces_any_solve(freq in 0.5f64..8.0, shift in -1.0f64..1.0) {
        let (m, g) = beam_matrix(48, 0.0, 0.0);
        let f = Profile::from_fn(g.clone(), |x| (freq * x).cos() + shift).unwrap();
        let u = solve(&m, &f).unwrap();
        let green = green_matrix(&m, &g).unwrap();
        let weighted: Vec<f64> = f.values().iter().map(|v| v * g.h()).collect();
        let via = green.matvec(&weighted);
        let scale = u.sup_norm().max(1e-30);
        for j in 0..g.n() {
            prop_assert!((via[j] - u.values()[j]).abs() <= 1e-9 * scale);
        }
    }

    /// Moreau split: v in the cone, w in the polar cone, orthogonal, and
    /// summing back to u.
    #[test]
    fn moreau_split_properties(values in prop::collection::vec(-1.0f64..1.0, 24)) {
        let n = values.len();
        let ip = EnergyInnerProduct::new(1.0, 1.0, Grid::interval(n).unwrap()).unwrap();
        let u = Profile::new(ip.grid().clone(), values).unwrap();
        let split = project_cone(&u, &ip, 1e-12).unwrap();
        let unorm2 = ip.inner(u.values(), u.values());
        for j in 0..n {
            prop_assert!(split.v.values()[j] >= -1e-10);
            prop_assert!(split.w.values()[j] <= 1e-10);
            prop_assert!(
                (split.v.values()[j] + split.w.values()[j] - u.values()[j]).abs() <= 1e-12
            );
        }
        prop_assert!(split.gap.abs() <= 1e-8 * unorm2.max(1e-20));
    }

    /// Banded LU with partial pivoting agrees with dense Gaussian
    /// elimination on random diagonally dominated banded systems.
    #[test]
    fn banded_lu_matches_dense(
        n in 5usize..24,
        kl in 0usize..3,
        ku in 0usize..3,
        seed in 1u64..u64::MAX,
    ) {
        let mut state = seed;
        let mut rnd = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = BandedMatrix::zero(n, kl, ku);
        let mut dense = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = rnd() + if j == i { 4.0 } else { 0.0 };
                m.set(i, j, v);
                dense[i][j] = v;
            }
        }
        let b: Vec<f64> = (0..n).map(|_| rnd()).collect();

        let mut a = dense;
        let mut x = b.clone();
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&p, &q| a[p][k].abs().total_cmp(&a[q][k].abs()))
                .unwrap();
            a.swap(k, piv);
            x.swap(k, piv);
            for i in (k + 1)..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                x[i] -= f * x[k];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let xj = x[j];
                x[i] -= a[i][j] * xj;
            }
            x[i] /= a[i][i];
        }

        let got = m.factorize().unwrap().solve(&b);
        for i in 0..n {
            prop_assert!((got[i] - x[i]).abs() < 1e-9, "row {}: {} vs {}", i, got[i], x[i]);
        }
    }
}
