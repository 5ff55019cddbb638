//! Periodic cardinal quintic spline interpolation on a uniform grid.

use std::f64::consts::TAU;

/// Quintic spline with period `2 pi`, interpolating `values[j]` at `theta_j = 2 pi j / n`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicQuinticSpline {
    coef: Vec<f64>,
    values: Vec<f64>,
}

const BINOM6: [f64; 7] = [1.0, 6.0, 15.0, 20.0, 15.0, 6.0, 1.0];

/// Centered cardinal B-spline of degree 5 and its first two derivatives.
fn b5(x: f64) -> (f64, f64, f64) {
    if x.abs() >= 3.0 {
        return (0.0, 0.0, 0.0);
    }
    let sign = x.signum();
    let x = x.abs();
    let (mut v, mut d, mut dd) = (0.0, 0.0, 0.0);
    for (k, b) in BINOM6.iter().enumerate() {
        let y = x + 3.0 - k as f64;
        if y <= 0.0 {
            continue;
        }
        let s = if k % 2 == 0 { *b } else { -*b };
        let y2 = y * y;
        v += s * y2 * y2 * y;
        d += s * 5.0 * y2 * y2;
        dd += s * 20.0 * y2 * y;
    }
    (v / 120.0, sign * d / 120.0, dd / 120.0)
}

impl PeriodicQuinticSpline {
    /// Solves the circulant system with symbol `[1, 26, 66, 26, 1] / 120` by Jacobi sweeps.
    pub fn interpolate(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 5, "need at least 5 grid values");
        let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut c: Vec<f64> = values.iter().map(|v| v * 120.0 / 118.0).collect();
        let mut next = vec![0.0; n];
        for _ in 0..4000 {
            let mut change = 0.0f64;
            for j in 0..n {
                let at = |o: isize| c[((j as isize + o).rem_euclid(n as isize)) as usize];
                let off = at(-2) + 26.0 * at(-1) + 26.0 * at(1) + at(2);
                next[j] = (120.0 * values[j] - off) / 66.0;
                change = change.max((next[j] - c[j]).abs());
            }
            std::mem::swap(&mut c, &mut next);
            if change <= 1e-16 * scale {
                break;
            }
        }
        PeriodicQuinticSpline { coef: c, values: values.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.coef.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coef.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value, first and second derivative in `theta`.
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let n = self.coef.len();
        let h = TAU / n as f64;
        let x = theta.rem_euclid(TAU) / h;
        let i0 = x.floor() as isize;
        let (mut v, mut d, mut dd) = (0.0, 0.0, 0.0);
        for i in (i0 - 3)..=(i0 + 3) {
            let (b, bd, bdd) = b5(x - i as f64);
            let c = self.coef[i.rem_euclid(n as isize) as usize];
            v += c * b;
            d += c * bd;
            dd += c * bdd;
        }
        (v, d / h, dd / (h * h))
    }
}
