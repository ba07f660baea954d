//! Truncated bivariate series in (z, z̄) treated as independent variables.

use num_complex::Complex64 as C64;

/// Coefficients `a[j][k]` of `Σ a_jk u^j v^k` for `j + k ≤ deg`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSeries {
    deg: usize,
    a: Vec<C64>,
}

impl BiSeries {
    pub fn zero(deg: usize) -> Self {
        BiSeries { deg, a: vec![C64::new(0.0, 0.0); (deg + 1) * (deg + 1)] }
    }

    pub fn constant(deg: usize, c: C64) -> Self {
        let mut s = Self::zero(deg);
        s.set(0, 0, c);
        s
    }

    /// Series of the single variable `u` (if `in_u`) or `v` with coefficients `coeffs[i]` on power `i`.
    pub fn univariate(deg: usize, coeffs: &[C64], in_u: bool) -> Self {
        let mut s = Self::zero(deg);
        for (i, &c) in coeffs.iter().enumerate().take(deg + 1) {
            if in_u {
                s.set(i, 0, c);
            } else {
                s.set(0, i, c);
            }
        }
        s
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        if j + k > self.deg {
            C64::new(0.0, 0.0)
        } else {
            self.a[j * (self.deg + 1) + k]
        }
    }

    pub fn set(&mut self, j: usize, k: usize, c: C64) {
        assert!(j + k <= self.deg, "term ({j},{k}) beyond degree {}", self.deg);
        self.a[j * (self.deg + 1) + k] = c;
    }

    pub fn add(&self, other: &BiSeries) -> BiSeries {
        let mut out = self.clone();
        for j in 0..=self.deg {
            for k in 0..=(self.deg - j) {
                out.set(j, k, self.get(j, k) + other.get(j, k));
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> BiSeries {
        BiSeries { deg: self.deg, a: self.a.iter().map(|&x| x * s).collect() }
    }

    pub fn mul(&self, other: &BiSeries) -> BiSeries {
        let d = self.deg;
        let mut out = BiSeries::zero(d);
        for j1 in 0..=d {
            for k1 in 0..=(d - j1) {
                let x = self.get(j1, k1);
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                for j2 in 0..=(d - j1 - k1) {
                    for k2 in 0..=(d - j1 - k1 - j2) {
                        let idx = (j1 + j2) * (d + 1) + k1 + k2;
                        out.a[idx] += x * other.get(j2, k2);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, n: usize) -> BiSeries {
        let mut out = BiSeries::constant(self.deg, C64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Re-expands the polynomial around `(p, p̄)`: returns `q(u,v) = self(u+p, v+p̄)`
    /// truncated at `deg_out`. Exact when `self` is a polynomial (not a truncated series).
    pub fn shifted(&self, p: C64, deg_out: usize) -> BiSeries {
        let pc = p.conj();
        let mut out = BiSeries::zero(deg_out);
        for j in 0..=self.deg {
            for k in 0..=(self.deg - j) {
                let c = self.get(j, k);
                if c == C64::new(0.0, 0.0) {
                    continue;
                }
                for a in 0..=j {
                    for b in 0..=k {
                        if a + b > deg_out {
                            continue;
                        }
                        let w = binom(j, a) * binom(k, b);
                        let term = c * w * p.powu((j - a) as u32) * pc.powu((k - b) as u32);
                        let idx = a * (deg_out + 1) + b;
                        out.a[idx] += term;
                    }
                }
            }
        }
        out
    }

    pub fn eval(&self, u: C64, v: C64) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..=self.deg {
            for k in 0..=(self.deg - j) {
                s += self.get(j, k) * u.powu(j as u32) * v.powu(k as u32);
            }
        }
        s
    }
}

pub(crate) fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}
