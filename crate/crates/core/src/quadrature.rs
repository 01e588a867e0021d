//! Adaptive Simpson quadrature for complex-valued integrands.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct SimpsonOptions {
    pub abs_tol: f64,
    pub max_depth: u32,
    /// Subdivision levels forced before any panel may be accepted; keeps
    /// narrow peaks from slipping between the first five samples.
    pub min_depth: u32,
}

impl Default for SimpsonOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, max_depth: 40, min_depth: 6 }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
}

struct Panel {
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
}

fn simpson(a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64) -> Complex64 {
    (fa + fm * 4.0 + fb) * ((b - a) / 6.0)
}

/// Integrates `f` over `[a, b]`.
///
/// Panels are split until `|S_left + S_right - S_whole| <= 15 tol` with the
/// tolerance halved per level. A panel still failing at `max_depth` makes
/// the whole call fail with the accumulated error estimate.
pub fn adaptive_simpson(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    opts: SimpsonOptions,
) -> Result<Integral> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let root = Panel { a, b, fa, fm, fb, whole: simpson(a, b, fa, fm, fb) };
    let mut value = Complex64::new(0.0, 0.0);
    let mut error_estimate = 0.0;
    let mut converged = true;
    recurse(&f, root, opts.abs_tol, 0, &opts, &mut value, &mut error_estimate, &mut converged);
    if converged {
        Ok(Integral { value, error_estimate })
    } else {
        Err(Error::QuadratureDiverged { estimate: error_estimate })
    }
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &impl Fn(f64) -> Complex64,
    p: Panel,
    tol: f64,
    depth: u32,
    opts: &SimpsonOptions,
    value: &mut Complex64,
    error_estimate: &mut f64,
    converged: &mut bool,
) {
    let m = 0.5 * (p.a + p.b);
    let lm = 0.5 * (p.a + m);
    let rm = 0.5 * (m + p.b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(p.a, m, p.fa, flm, p.fm);
    let right = simpson(m, p.b, p.fm, frm, p.fb);
    let delta = left + right - p.whole;
    let err = delta.norm() / 15.0;
    if depth >= opts.min_depth && err <= tol {
        *value += left + right + delta / 15.0;
        *error_estimate += err;
        return;
    }
    if depth >= opts.max_depth {
        *value += left + right;
        *error_estimate += err;
        *converged = false;
        return;
    }
    let half = 0.5 * tol;
    recurse(
        f,
        Panel { a: p.a, b: m, fa: p.fa, fm: flm, fb: p.fm, whole: left },
        half,
        depth + 1,
        opts,
        value,
        error_estimate,
        converged,
    );
    recurse(
        f,
        Panel { a: m, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right },
        half,
        depth + 1,
        opts,
        value,
        error_estimate,
        converged,
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = adaptive_simpson(|x| Complex64::new(x * x * x, 0.0), 0.0, 2.0, SimpsonOptions::default())
            .unwrap();
        assert!((r.value.re - 4.0).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_exponential() {
        // int_0^pi e^{ix} dx = 2i
        let r = adaptive_simpson(|x| Complex64::new(0.0, x).exp(), 0.0, std::f64::consts::PI, SimpsonOptions::default())
            .unwrap();
        assert!((r.value - Complex64::new(0.0, 2.0)).norm() < 1e-10);
    }

    #[test]
    fn depth_limit_reports_estimate() {
        let opts = SimpsonOptions { abs_tol: 1e-30, max_depth: 3, min_depth: 0 };
        let err = adaptive_simpson(|x| Complex64::new((50.0 * x).sin(), 0.0), 0.0, 3.0, opts).unwrap_err();
        assert!(matches!(err, Error::QuadratureDiverged { estimate } if estimate > 0.0));
    }
}
