//! Closed-form roots of low-degree univariate polynomials over `C`.
//!
//! Cardano's method in complex arithmetic, followed by a few Newton polish
//! steps to recover the accuracy lost to cancellation. Degrees stay ≤ 3 here;
//! anything larger in this crate goes through homotopy continuation instead.

use num_complex::Complex64;

fn newton_polish(coeffs: &[Complex64], mut x: Complex64) -> Complex64 {
    // coeffs are in increasing-degree order.
    for _ in 0..4 {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            df = df * x + f;
            f = f * x + c;
        }
        if df.norm() == 0.0 {
            break;
        }
        let step = f / df;
        x -= step;
        if step.norm() < 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    x
}

/// Roots of `a x² + b x + c = 0` with complex coefficients; `a` must be
/// nonzero. Uses the cancellation-avoiding pairing `x₁x₂ = c/a`.
pub fn solve_quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    debug_assert!(a.norm() > 0.0, "leading coefficient must be nonzero");
    let disc = (b * b - 4.0 * a * c).sqrt();
    // Pick the sign that avoids cancellation in b ± disc.
    let q = if (b + disc).norm() >= (b - disc).norm() {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q.norm() == 0.0 {
        // b = c = 0: double root at the origin.
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// Roots of `c3 x³ + c2 x² + c1 x + c0 = 0`; `c3` must be nonzero.
pub fn solve_cubic(c3: Complex64, c2: Complex64, c1: Complex64, c0: Complex64) -> [Complex64; 3] {
    debug_assert!(c3.norm() > 0.0, "leading coefficient must be nonzero");
    // Monic: x³ + a x² + b x + c.
    let a = c2 / c3;
    let b = c1 / c3;
    let c = c0 / c3;
    // Depressed: t³ + p t + q with x = t − a/3.
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    let roots_t: [Complex64; 3];
    if p.norm() < 1e-14 * (1.0 + q.norm()) && q.norm() < 1e-300 {
        roots_t = [Complex64::new(0.0, 0.0); 3];
    } else {
        // Cardano: t = w − p/(3w), w³ = −q/2 + sqrt(q²/4 + p³/27).
        let inner = (q * q / 4.0 + p * p * p / 27.0).sqrt();
        // Choose the branch making w³ larger in modulus (avoids w ≈ 0).
        let w3a = -q / 2.0 + inner;
        let w3b = -q / 2.0 - inner;
        let w3 = if w3a.norm() >= w3b.norm() { w3a } else { w3b };
        if w3.norm() == 0.0 {
            roots_t = [Complex64::new(0.0, 0.0); 3];
        } else {
            let w = w3.powf(1.0 / 3.0);
            let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
            let mut out = [Complex64::new(0.0, 0.0); 3];
            let mut wk = w;
            for slot in &mut out {
                *slot = wk - p / (3.0 * wk);
                wk *= omega;
            }
            roots_t = out;
        }
    }

    let coeffs = [c0, c1, c2, c3];
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    for (i, t) in roots_t.iter().enumerate() {
        roots[i] = newton_polish(&coeffs, t - shift);
    }
    roots
}

/// Discriminant of a real cubic `c3 x³ + c2 x² + c1 x + c0`:
/// `18·c3·c2·c1·c0 − 4·c2³·c0 + c2²·c1² − 4·c3·c1³ − 27·c3²·c0²`.
/// Positive ⇔ three distinct real roots, negative ⇔ one real root,
/// zero ⇔ a repeated root.
pub fn cubic_discriminant(c3: f64, c2: f64, c1: f64, c0: f64) -> f64 {
    18.0 * c3 * c2 * c1 * c0 - 4.0 * c2.powi(3) * c0 + c2 * c2 * c1 * c1
        - 4.0 * c3 * c1.powi(3)
        - 27.0 * c3 * c3 * c0 * c0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn assert_root(coeffs: [Complex64; 4], x: Complex64) {
        let [c0, c1, c2, c3] = coeffs;
        let val = ((c3 * x + c2) * x + c1) * x + c0;
        let scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
        assert!(
            val.norm() < 1e-10 * scale,
            "not a root: {x}, residual {val}"
        );
    }

    #[test]
    fn quadratic_real_and_complex() {
        let [x1, x2] = solve_quadratic(r(1.0), r(-3.0), r(2.0));
        let mut got = [x1.re, x2.re];
        got.sort_by(f64::total_cmp);
        assert!((got[0] - 1.0).abs() < 1e-12 && (got[1] - 2.0).abs() < 1e-12);
        // x² + 1 = 0.
        let [y1, y2] = solve_quadratic(r(1.0), r(0.0), r(1.0));
        assert!((y1.im.abs() - 1.0).abs() < 1e-12 && (y2.im.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_with_known_roots() {
        // (x−1)(x−2)(x−3) = x³ − 6x² + 11x − 6.
        let roots = solve_cubic(r(1.0), r(-6.0), r(11.0), r(-6.0));
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-10);
        }
        for z in roots {
            assert!(z.im.abs() < 1e-10);
        }
    }

    #[test]
    fn cubic_with_complex_pair() {
        // x³ − 1 has roots 1, e^{±2πi/3}.
        let roots = solve_cubic(r(1.0), r(0.0), r(0.0), r(-1.0));
        for z in roots {
            assert_root([r(-1.0), r(0.0), r(0.0), r(1.0)], z);
        }
        let real_count = roots.iter().filter(|z| z.im.abs() < 1e-10).count();
        assert_eq!(real_count, 1);
    }

    #[test]
    fn cubic_with_double_root() {
        // (x−1)²(x−2) = x³ − 4x² + 5x − 2.
        let coeffs = [r(-2.0), r(5.0), r(-4.0), r(1.0)];
        let roots = solve_cubic(r(1.0), r(-4.0), r(5.0), r(-2.0));
        for z in roots {
            assert_root(coeffs, z);
        }
        assert_eq!(cubic_discriminant(1.0, -4.0, 5.0, -2.0), 0.0);
    }

    #[test]
    fn discriminant_sign_tracks_real_root_count() {
        // Three real roots.
        assert!(cubic_discriminant(1.0, -6.0, 11.0, -6.0) > 0.0);
        // One real root.
        assert!(cubic_discriminant(1.0, 0.0, 0.0, -1.0) < 0.0);
    }

    #[test]
    fn scaled_coefficients_keep_roots() {
        let roots = solve_cubic(r(2.0e6), r(-12.0e6), r(22.0e6), r(-12.0e6));
        let mut re: Vec<f64> = roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (got, want) in re.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-9);
        }
    }
}
