//! Linear frames adapted to a complex line through the origin of `C^2`.

use num_complex::Complex64 as C64;

use crate::jet::{Jet, D2};
use crate::smooth::chi;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `Slope(w)`: the line `t1 = w t2` with `s = (t1 - w t2, t2)`.
/// `Axis2`: the line `t2 = 0` with `s = (t2, t1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LineFrame {
    Slope(C64),
    Axis2,
}

impl LineFrame {
    /// Rows are the linear forms `s1`, `s2` in `t`.
    pub fn forms(&self) -> [[C64; 2]; 2] {
        match self {
            LineFrame::Slope(w) => [[ONE, -*w], [ZERO, ONE]],
            LineFrame::Axis2 => [[ZERO, ONE], [ONE, ZERO]],
        }
    }

    pub fn to_frame(&self, t: [C64; 2]) -> [C64; 2] {
        let f = self.forms();
        [f[0][0] * t[0] + f[0][1] * t[1], f[1][0] * t[0] + f[1][1] * t[1]]
    }

    pub fn from_frame(&self, s: [C64; 2]) -> [C64; 2] {
        match self {
            LineFrame::Slope(w) => [s[0] + *w * s[1], s[1]],
            LineFrame::Axis2 => [s[1], s[0]],
        }
    }

    /// `|s1| / |s2|`.
    pub fn ratio(&self, t: [C64; 2]) -> f64 {
        let s = self.to_frame(t);
        s[0].norm() / s[1].norm()
    }

    /// Sine of the angle between `t` and the line.
    pub fn sine_distance(&self, t: [C64; 2]) -> f64 {
        let n = (t[0].norm_sqr() + t[1].norm_sqr()).sqrt();
        match self {
            LineFrame::Slope(w) => (t[0] - *w * t[1]).norm() / ((1.0 + w.norm_sqr()).sqrt() * n),
            LineFrame::Axis2 => t[1].norm() / n,
        }
    }
}

/// Jet of `|l . t|^2`.
pub fn modsq_jet(l: [C64; 2], t: [C64; 2]) -> Jet {
    let x = l[0] * t[0] + l[1] * t[1];
    let mut j = Jet::zero();
    j.v = x.norm_sqr();
    for a in 0..2 {
        j.g[a] = l[a] * x.conj();
        for b in 0..2 {
            j.m[a][b] = l[a] * l[b].conj();
        }
    }
    j
}

/// Cone cutoff `chi(|s1| / (alpha |s2|))`: 1 on the closed `alpha`-cone, 0 off the `2 alpha`-cone.
pub fn cutoff_jet(frame: &LineFrame, alpha: f64, t: [C64; 2]) -> Jet {
    let r = frame.ratio(t) / alpha;
    if !(r > 1.0) {
        return Jet::constant(1.0);
    }
    if r >= 2.0 {
        return Jet::constant(0.0);
    }
    let f = frame.forms();
    let q = modsq_jet(f[0], t).div(&modsq_jet(f[1], t)).scale(1.0 / (alpha * alpha));
    q.map_d2(|x: D2| chi(x.sqrt()))
}

pub fn cutoff_value(frame: &LineFrame, alpha: f64, t: [C64; 2]) -> f64 {
    crate::smooth::chi_value(frame.ratio(t) / alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_invert() {
        let t = [C64::new(0.3, 0.1), C64::new(-0.7, 0.2)];
        for f in [LineFrame::Slope(C64::new(0.5, -1.0)), LineFrame::Axis2] {
            let back = f.from_frame(f.to_frame(t));
            assert!((back[0] - t[0]).norm() < 1e-15 && (back[1] - t[1]).norm() < 1e-15);
        }
    }

    #[test]
    fn sine_distance_vanishes_on_line() {
        let w = C64::new(2.0, 1.0);
        let t = [w * C64::new(0.4, 0.3), C64::new(0.4, 0.3)];
        assert!(LineFrame::Slope(w).sine_distance(t) < 1e-15);
        assert!(LineFrame::Axis2.sine_distance([ONE, ZERO]) == 0.0);
    }

    #[test]
    fn cutoff_levi_matches_differences() {
        let frame = LineFrame::Slope(C64::new(0.5, 0.25));
        let alpha = 0.2;
        let t = [C64::new(0.5, 0.25) * C64::new(1.0, 0.0) + C64::new(0.28, 0.05), C64::new(1.0, 0.0)];
        let j = cutoff_jet(&frame, alpha, t);
        assert!(j.v > 0.0 && j.v < 1.0);
        let f = |t: [C64; 2]| cutoff_value(&frame, alpha, t);
        let h = 1e-4;
        let e = [[ONE, ZERO], [ZERO, ONE]];
        for a in 0..2 {
            // d^2/dz dzbar = (f_xx + f_yy) / 4 along coordinate a
            let px = |s: f64| [t[0] + e[a][0] * s, t[1] + e[a][1] * s];
            let py = |s: f64| [t[0] + e[a][0] * C64::new(0.0, s), t[1] + e[a][1] * C64::new(0.0, s)];
            let lap = (f(px(h)) + f(px(-h)) + f(py(h)) + f(py(-h)) - 4.0 * f(t)) / (h * h);
            assert!((j.m[a][a].re - lap / 4.0).abs() < 1e-4, "{} vs {}", j.m[a][a].re, lap / 4.0);
        }
    }
}
