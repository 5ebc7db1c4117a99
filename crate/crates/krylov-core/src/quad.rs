//! Adaptive Gauss–Kronrod quadrature for the profile integrals.
//!
//! A 15-point Kronrod rule with its embedded 7-point Gauss rule gives a
//! per-interval error estimate; intervals are split at their midpoint,
//! worst-error first, until the summed estimate meets the requested absolute
//! tolerance. Non-convergence is reported as a numerical error that names the
//! offending subinterval rather than silently returning a bad value.

use crate::error::{KrylovError, Result};

/// Default absolute tolerance for the profile integrals.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Kronrod abscissae (positive half; the rule is symmetric about 0).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 7-point Gauss rule (for the even-indexed
/// abscissae).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// The classic rescaling of the raw Gauss–Kronrod difference: sharpen
/// `|K−G|` by the factor `(200|K−G|/resasc)^1.5` when the rule looks
/// converged, but never report less than `resasc` worth of confidence when
/// it does not. `resasc` estimates `∫|f − mean|`; the floor of
/// `50ε·∫|f|` guards against demanding more than rounding allows. Without
/// this rescaling the plain difference can be accidentally small on
/// integrands with interior kinks (such as a clamped square root crossing
/// zero) while both rules are off.
fn rescale_error(raw: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = raw.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

/// One application of the 15-point rule on `[a, b]`.
/// Returns `(kronrod_value, error_estimate)`.
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center);
    let mut result_gauss = WG[3] * f_center;
    let mut result_kronrod = WGK[7] * f_center;
    let mut result_abs = WGK[7] * f_center.abs();
    let mut values = [0.0f64; 14];

    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[2 * j] = f1;
        values[2 * j + 1] = f2;
        let fsum = f1 + f2;
        result_kronrod += WGK[j] * fsum;
        result_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            // odd Kronrod indices are the embedded Gauss abscissae
            result_gauss += WG[j / 2] * fsum;
        }
    }

    let mean = result_kronrod * 0.5;
    let mut result_asc = WGK[7] * (f_center - mean).abs();
    for (j, w) in WGK.iter().enumerate().take(7) {
        result_asc += w * ((values[2 * j] - mean).abs() + (values[2 * j + 1] - mean).abs());
    }

    let kronrod = result_kronrod * half;
    let raw = (result_kronrod - result_gauss) * half;
    let err = rescale_error(raw, result_abs * half.abs(), result_asc * half.abs());
    (kronrod, err)
}

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by adaptive
/// bisection of the 15-point Kronrod rule.
///
/// Errors with [`KrylovError::InvalidInput`] on a malformed interval or
/// tolerance, and with [`KrylovError::Numerical`] when the estimate refuses
/// to converge (the message names the worst subinterval).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(KrylovError::InvalidInput(
            "integration bounds must be finite".into(),
        ));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(KrylovError::InvalidInput(format!(
            "integration tolerance must be a positive finite number, got {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    const MAX_INTERVALS: usize = 10_000;

    let (value, err) = qk15(&f, lo, hi);
    if !value.is_finite() {
        return Err(KrylovError::Numerical(format!(
            "integrand produced a non-finite value on [{lo}, {hi}]"
        )));
    }
    let mut intervals = vec![Interval {
        a: lo,
        b: hi,
        value,
        err,
    }];

    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.err).sum();
        if total_err <= tol {
            return Ok(sign * intervals.iter().map(|iv| iv.value).sum::<f64>());
        }
        if intervals.len() >= MAX_INTERVALS {
            let worst = intervals
                .iter()
                .cloned()
                .max_by(|p, q| p.err.total_cmp(&q.err))
                .expect("interval list is never empty");
            return Err(KrylovError::Numerical(format!(
                "quadrature failed to reach tolerance {tol:.1e}: residual error {total_err:.3e} \
                 after {MAX_INTERVALS} subintervals, worst on [{:.6}, {:.6}] (error {:.3e})",
                worst.a, worst.b, worst.err
            )));
        }

        // split the interval with the largest error estimate
        let (worst_idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|(_, p), (_, q)| p.err.total_cmp(&q.err))
            .expect("interval list is never empty");
        let worst = intervals.swap_remove(worst_idx);
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(KrylovError::Numerical(format!(
                "quadrature interval [{}, {}] can no longer be split but its error \
                 estimate {:.3e} still exceeds the tolerance",
                worst.a, worst.b, worst.err
            )));
        }
        for (x0, x1) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = qk15(&f, x0, x1);
            if !v.is_finite() {
                return Err(KrylovError::Numerical(format!(
                    "integrand produced a non-finite value on [{x0}, {x1}]"
                )));
            }
            intervals.push(Interval {
                a: x0,
                b: x1,
                value: v,
                err: e,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Romberg integration: an independent check built on the trapezoid rule
    /// and Richardson extrapolation, sharing nothing with the Kronrod path.
    pub(crate) fn romberg<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, levels: usize) -> f64 {
        let mut r = vec![vec![0.0f64; levels]; levels];
        r[0][0] = 0.5 * (b - a) * (f(a) + f(b));
        for i in 1..levels {
            let n = 1usize << i;
            let h = (b - a) / n as f64;
            let mut sum = 0.0;
            let mut k = 1;
            while k < n {
                sum += f(a + k as f64 * h);
                k += 2;
            }
            r[i][0] = 0.5 * r[i - 1][0] + h * sum;
            for j in 1..=i {
                let factor = 4f64.powi(j as i32);
                r[i][j] = (factor * r[i][j - 1] - r[i - 1][j - 1]) / (factor - 1.0);
            }
        }
        r[levels - 1][levels - 1]
    }

    #[test]
    fn polynomials_are_exact() {
        // degree <= 22 is integrated exactly by a single 15-point Kronrod rule
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - 8.0).abs() < 1e-12, "got {v}");
        let v = integrate(|x| x.powi(7) - x, -1.0, 1.0, 1e-12).unwrap();
        assert!(v.abs() < 1e-13, "got {v}");
    }

    #[test]
    fn smooth_transcendental_matches_closed_form() {
        let v = integrate(f64::sin, 0.0, PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "got {v}");
        let v = integrate(|x| (-x).exp(), 0.0, 30.0, 1e-12).unwrap();
        assert!((v - (1.0 - (-30.0f64).exp())).abs() < 1e-11, "got {v}");
    }

    #[test]
    fn adaptive_splitting_handles_sharp_peaks() {
        // narrow Lorentzian: forces many splits near x = 0.5
        let g = 1e-4;
        let f = |x: f64| g / ((x - 0.5).powi(2) + g * g) / PI;
        let v = integrate(f, 0.0, 1.0, 1e-10).unwrap();
        let exact = ((0.5 / g).atan() - (-0.5 / g).atan()) / PI;
        assert!((v - exact).abs() < 1e-9, "got {v}, want {exact}");
    }

    #[test]
    fn orientation_and_degenerate_interval() {
        let fwd = integrate(f64::cos, 0.0, 1.0, 1e-12).unwrap();
        let rev = integrate(f64::cos, 1.0, 0.0, 1e-12).unwrap();
        assert!((fwd + rev).abs() < 1e-14);
        assert_eq!(integrate(f64::cos, 1.5, 1.5, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(integrate(f64::cos, 0.0, f64::INFINITY, 1e-10).is_err());
        assert!(integrate(f64::cos, 0.0, 1.0, 0.0).is_err());
        assert!(integrate(f64::cos, 0.0, 1.0, -1e-3).is_err());
        assert!(integrate(f64::cos, 0.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn non_finite_integrands_error_rather_than_poison() {
        let res = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10);
        assert!(res.is_err());
    }

    #[test]
    fn agrees_with_romberg_on_a_profile_like_integrand() {
        // same flavor as the complexity-profile integrands: a square root of
        // a trigonometric rational expression
        let f = |t: f64| (1.0 - 0.7 * t.cos().powi(2)).sqrt() * t.sin();
        let gk = integrate(f, 0.0, PI, 1e-12).unwrap();
        let rb = romberg(&f, 0.0, PI, 18);
        assert!((gk - rb).abs() < 1e-10, "gk {gk} vs romberg {rb}");
    }
}
