//! Second-order Wirtinger jets of real-valued functions on `C^2`, and
//! one-variable second-order duals for smooth profiles.

use num_complex::Complex64 as C64;

/// Value, holomorphic gradient `df/dz_j` and Levi matrix `d^2 f/dz_j dconj(z_k)`
/// of a real-valued function at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub g: [C64; 2],
    pub m: [[C64; 2]; 2],
}

const Z: C64 = C64 { re: 0.0, im: 0.0 };

impl Jet {
    pub fn constant(v: f64) -> Self {
        Jet { v, g: [Z; 2], m: [[Z; 2]; 2] }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let mut r = *self;
        r.v += o.v;
        for j in 0..2 {
            r.g[j] += o.g[j];
            for k in 0..2 {
                r.m[j][k] += o.m[j][k];
            }
        }
        r
    }

    pub fn sub(&self, o: &Jet) -> Jet {
        self.add(&o.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Jet {
        let mut r = *self;
        r.v *= s;
        for j in 0..2 {
            r.g[j] *= s;
            for k in 0..2 {
                r.m[j][k] *= s;
            }
        }
        r
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let mut r = Jet::zero();
        r.v = self.v * o.v;
        for j in 0..2 {
            r.g[j] = self.g[j] * o.v + o.g[j] * self.v;
            for k in 0..2 {
                r.m[j][k] =
                    self.m[j][k] * o.v + o.m[j][k] * self.v + self.g[j] * o.g[k].conj() + o.g[j] * self.g[k].conj();
            }
        }
        r
    }

    /// `phi(f)` given `phi, phi', phi''` at `f`.
    pub fn map(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let mut r = Jet::zero();
        r.v = f0;
        for j in 0..2 {
            r.g[j] = self.g[j] * f1;
            for k in 0..2 {
                r.m[j][k] = self.m[j][k] * f1 + self.g[j] * self.g[k].conj() * f2;
            }
        }
        r
    }

    pub fn map_d2(&self, phi: impl Fn(D2) -> D2) -> Jet {
        let d = phi(D2::var(self.v));
        self.map(d.v, d.d, d.dd)
    }

    pub fn recip(&self) -> Jet {
        let v = self.v;
        self.map(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn div(&self, o: &Jet) -> Jet {
        self.mul(&o.recip())
    }

    /// `F(x(z))` for a holomorphic `x` with gradient `dx`, given `F, F_x, F_{x conj(x)}` at `x(z)`.
    pub fn compose_holo(f: f64, fx: C64, fxx: f64, dx: [C64; 2]) -> Jet {
        let mut r = Jet::zero();
        r.v = f;
        for j in 0..2 {
            r.g[j] = fx * dx[j];
            for k in 0..2 {
                r.m[j][k] = dx[j] * dx[k].conj() * fxx;
            }
        }
        r
    }

    /// Pull the jet through `t_j = t_j(z_j)` with derivatives `dt_j`.
    pub fn through_diagonal(&self, dt: [C64; 2]) -> Jet {
        let mut r = *self;
        for j in 0..2 {
            r.g[j] = self.g[j] * dt[j];
            for k in 0..2 {
                r.m[j][k] = self.m[j][k] * dt[j] * dt[k].conj();
            }
        }
        r
    }

    pub fn levi(&self, v: [C64; 2]) -> f64 {
        let mut s = Z;
        for j in 0..2 {
            for k in 0..2 {
                s += self.m[j][k] * v[j] * v[k].conj();
            }
        }
        s.re
    }

    pub fn levi_imag(&self, v: [C64; 2]) -> f64 {
        let mut s = Z;
        for j in 0..2 {
            for k in 0..2 {
                s += self.m[j][k] * v[j] * v[k].conj();
            }
        }
        s.im
    }

    pub fn min_eig(&self) -> f64 {
        levi_eigs(&self.m).0
    }

    pub fn frob(&self) -> f64 {
        let mut s = 0.0;
        for j in 0..2 {
            for k in 0..2 {
                s += self.m[j][k].norm_sqr();
            }
        }
        s.sqrt()
    }
}

/// Eigenvalues `(min, max)` of a 2x2 Hermitian matrix in closed form.
pub fn levi_eigs(m: &[[C64; 2]; 2]) -> (f64, f64) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = 0.5 * (m[0][1] + m[1][0].conj());
    let half = 0.5 * (a - d);
    let rad = (half * half + b.norm_sqr()).sqrt();
    let mid = 0.5 * (a + d);
    let (lo, hi) = (mid - rad, mid + rad);
    let det = a * d - b.norm_sqr();
    // Use the determinant for the small eigenvalue when the large one dominates.
    if hi > 0.0 && lo.abs() < 1e-3 * hi {
        (det / hi, hi)
    } else if lo < 0.0 && hi.abs() < 1e-3 * lo.abs() {
        (lo, det / lo)
    } else {
        (lo, hi)
    }
}

/// One-variable second-order dual number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct D2 {
    pub v: f64,
    pub d: f64,
    pub dd: f64,
}

impl D2 {
    pub fn var(x: f64) -> Self {
        D2 { v: x, d: 1.0, dd: 0.0 }
    }

    pub fn cst(x: f64) -> Self {
        D2 { v: x, d: 0.0, dd: 0.0 }
    }

    pub fn add(self, o: D2) -> D2 {
        D2 { v: self.v + o.v, d: self.d + o.d, dd: self.dd + o.dd }
    }

    pub fn sub(self, o: D2) -> D2 {
        D2 { v: self.v - o.v, d: self.d - o.d, dd: self.dd - o.dd }
    }

    pub fn mul(self, o: D2) -> D2 {
        D2 { v: self.v * o.v, d: self.d * o.v + self.v * o.d, dd: self.dd * o.v + 2.0 * self.d * o.d + self.v * o.dd }
    }

    pub fn scale(self, s: f64) -> D2 {
        D2 { v: self.v * s, d: self.d * s, dd: self.dd * s }
    }

    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> D2 {
        D2 { v: f0, d: f1 * self.d, dd: f1 * self.dd + f2 * self.d * self.d }
    }

    pub fn recip(self) -> D2 {
        let v = self.v;
        self.chain(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v))
    }

    pub fn div(self, o: D2) -> D2 {
        self.mul(o.recip())
    }

    pub fn exp(self) -> D2 {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn sqrt(self) -> D2 {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }

    pub fn powf(self, p: f64) -> D2 {
        let v = self.v;
        self.chain(v.powf(p), p * v.powf(p - 1.0), p * (p - 1.0) * v.powf(p - 2.0))
    }
}
