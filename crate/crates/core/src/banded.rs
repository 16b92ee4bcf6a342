//! Banded matrices and banded LU with partial pivoting.

use crate::error::{Error, Result};

/// Square banded matrix in compact row storage.
///
/// Row `i` holds the entries of columns `i-kl ..= i+ku` contiguously;
/// positions outside the matrix are zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    rows: Vec<f64>,
}

impl BandedMatrix {
    /// Zero matrix of the given size and bandwidths.
    pub fn zero(n: usize, kl: usize, ku: usize) -> Self {
        BandedMatrix {
            n,
            kl,
            ku,
            rows: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n {
            return None;
        }
        let off = j as isize - i as isize + self.kl as isize;
        if off < 0 || off >= (self.kl + self.ku + 1) as isize {
            return None;
        }
        Some(i * (self.kl + self.ku + 1) + off as usize)
    }

    /// Entry (i, j); zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.rows[k])
    }

    /// Add `v` to entry (i, j). Panics if (i, j) lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).unwrap_or_else(|| {
            panic!("entry ({i},{j}) outside band kl={} ku={}", self.kl, self.ku)
        });
        self.rows[k] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).unwrap_or_else(|| {
            panic!("entry ({i},{j}) outside band kl={} ku={}", self.kl, self.ku)
        });
        self.rows[k] = v;
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let w = self.kl + self.ku + 1;
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += self.rows[i * w + (j + self.kl - i)] * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let w = self.kl + self.ku + 1;
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi)
                    .map(|j| self.rows[i * w + (j + self.kl - i)].abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// LU factorization with partial pivoting. The factors are immutable and
    /// may be reused for any number of right-hand sides.
    pub fn factorize(&self) -> Result<BandedLu> {
        BandedLu::new(self)
    }
}

/// LU factors of a banded matrix with partial pivoting.
///
/// Row interchanges widen the upper band to `kl + ku`; storage is laid out
/// for the widened band up front. A pivot smaller than
/// `PIVOT_RTOL * norm_inf` of the source matrix aborts with `SingularSystem`.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    mm: usize,
    upper: Vec<f64>,
    lower: Vec<f64>,
    pivot: Vec<usize>,
}

const PIVOT_RTOL: f64 = 1e-14;

impl BandedLu {
    fn new(m: &BandedMatrix) -> Result<Self> {
        let n = m.n;
        let kl = m.kl;
        let ku = m.ku;
        let mm = kl + (kl + ku) + 1; // widened upper band
        let threshold = PIVOT_RTOL * m.norm_inf();

        // Compact skewed storage: au[i][k] = A[i][i - kl + k], padded to the
        // widened width, then the first kl rows shifted so every row starts
        // at its leftmost in-matrix column.
        let w = kl + ku + 1;
        let mut au = vec![0.0; n * mm];
        for i in 0..n {
            for k in 0..w {
                au[i * mm + k] = m.rows[i * w + k];
            }
        }
        let mut l = kl;
        for i in 0..kl.min(n) {
            for j in (kl - i)..mm {
                au[i * mm + j - l] = au[i * mm + j];
            }
            l -= 1;
            for j in (mm - l - 1)..mm {
                au[i * mm + j] = 0.0;
            }
        }

        let mut al = vec![0.0; n * kl];
        let mut pivot = vec![0usize; n];
        let mut l = kl;
        for k in 0..n {
            let mut dum = au[k * mm];
            let mut ip = k;
            if l < n {
                l += 1;
            }
            for j in (k + 1)..l {
                if au[j * mm].abs() > dum.abs() {
                    dum = au[j * mm];
                    ip = j;
                }
            }
            pivot[k] = ip;
            if dum.abs() < threshold || dum == 0.0 {
                return Err(Error::SingularSystem(format!(
                    "pivot {:.3e} below threshold {:.3e} at step {k}",
                    dum.abs(),
                    threshold
                )));
            }
            if ip != k {
                for j in 0..mm {
                    au.swap(k * mm + j, ip * mm + j);
                }
            }
            for i in (k + 1)..l {
                let mult = au[i * mm] / au[k * mm];
                al[k * kl + (i - k - 1)] = mult;
                for j in 1..mm {
                    au[i * mm + j - 1] = au[i * mm + j] - mult * au[k * mm + j];
                }
                au[i * mm + mm - 1] = 0.0;
            }
        }

        Ok(BandedLu {
            n,
            kl,
            mm,
            upper: au,
            lower: al,
            pivot,
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let (n, kl, mm) = (self.n, self.kl, self.mm);
        let mut l = kl;
        for k in 0..n {
            let j = self.pivot[k];
            if j != k {
                x.swap(k, j);
            }
            if l < n {
                l += 1;
            }
            for j in (k + 1)..l {
                x[j] -= self.lower[k * kl + (j - k - 1)] * x[k];
            }
        }
        let mut l = 1;
        for i in (0..n).rev() {
            let mut dum = x[i];
            for k in 1..l {
                dum -= self.upper[i * mm + k] * x[i + k];
            }
            x[i] = dum / self.upper[i * mm];
            if l < mm {
                l += 1;
            }
        }
    }
}
