//! Smooth one-variable profiles: the transition step, the cone cutoff and the cap.

use crate::jet::D2;

fn flat(x: D2) -> D2 {
    if x.v <= 0.0 {
        D2::cst(0.0)
    } else {
        x.recip().scale(-1.0).exp()
    }
}

/// `S(x) = f(x) / (f(x) + f(1 - x))` with `f(x) = exp(-1/x)`; 0 for `x <= 0`, 1 for `x >= 1`.
pub fn step(x: D2) -> D2 {
    if x.v <= 0.0 {
        return D2::cst(0.0);
    }
    if x.v >= 1.0 {
        return D2::cst(1.0);
    }
    let a = flat(x);
    let b = flat(D2::cst(1.0).sub(x));
    a.div(a.add(b))
}

/// `chi(r) = S(2 - r)`: identically 1 on `r <= 1`, 0 on `r >= 2`.
pub fn chi(r: D2) -> D2 {
    step(D2::cst(2.0).sub(r))
}

pub fn chi_value(r: f64) -> f64 {
    chi(D2::cst(r)).v
}

/// `B(x) = exp(1 - 1/(1 - x^2))` on `|x| < 1`, zero outside.
pub fn cap(x: D2) -> D2 {
    if x.v.abs() >= 1.0 {
        return D2::cst(0.0);
    }
    let one = D2::cst(1.0);
    one.sub(one.sub(x.mul(x)).recip()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_plateaus() {
        assert_eq!(chi_value(0.3), 1.0);
        assert_eq!(chi_value(1.0), 1.0);
        assert_eq!(chi_value(2.0), 0.0);
        assert_eq!(chi_value(7.0), 0.0);
        let mid = chi_value(1.5);
        assert!((mid - 0.5).abs() < 1e-12);
    }

    #[test]
    fn chi_derivatives_match_differences() {
        let h = 1e-5;
        for r in [1.1, 1.37, 1.8] {
            let d = chi(D2::var(r));
            let fd = (chi_value(r + h) - chi_value(r - h)) / (2.0 * h);
            let fdd = (chi_value(r + h) - 2.0 * chi_value(r) + chi_value(r - h)) / (h * h);
            assert!((d.d - fd).abs() < 1e-7);
            assert!((d.dd - fdd).abs() < 1e-4);
        }
    }

    #[test]
    fn cap_shape() {
        assert_eq!(cap(D2::var(0.0)).v, 1.0);
        assert!((cap(D2::var(0.0)).dd + 2.0).abs() < 1e-12);
        assert_eq!(cap(D2::var(1.0)).v, 0.0);
        assert!(cap(D2::var(0.99)).v < 1e-20);
    }
}
