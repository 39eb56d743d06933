//! Golden-section search for convex functions of one variable.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Minimizes `f` on `[lo, hi]` until the bracket is narrower than `tol` or
/// `max_iter` iterations have run. Only function values are used, so kinks
/// in `f` are harmless. Returns the best point evaluated, endpoints included.
pub(crate) fn golden_section<F>(mut f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut best = Minimum {
        x: a,
        fx: f(a),
        iterations: 0,
    };
    let fb = f(b);
    if fb < best.fx {
        best.x = b;
        best.fx = fb;
    }

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a) > tol && iterations < max_iter {
        iterations += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx < best.fx {
            best.x = x;
            best.fx = fx;
        }
    }
    best.iterations = iterations;
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_quadratic() {
        let m = golden_section(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-10, 300);
        assert!((m.x - 0.3).abs() < 1e-8, "{m:?}");
        assert!(m.iterations < 60);
    }

    #[test]
    fn kinked_minimum() {
        let m = golden_section(|x| (x - 0.71).abs() + 0.5 * (x - 0.2).abs(), 0.0, 1.0, 1e-12, 300);
        assert!((m.x - 0.71).abs() < 1e-10, "{m:?}");
    }

    #[test]
    fn boundary_minimum_and_flat() {
        let m = golden_section(|x| x, 0.1, 0.9, 1e-10, 300);
        assert_eq!(m.x, 0.1);
        let m = golden_section(|_| 2.0, 0.1, 0.9, 1e-10, 300);
        assert_eq!(m.fx, 2.0);
    }

    #[test]
    fn iteration_cap() {
        let m = golden_section(|x| (x - 0.5).powi(2), 0.0, 1.0, 0.0, 7);
        assert_eq!(m.iterations, 7);
    }
}
