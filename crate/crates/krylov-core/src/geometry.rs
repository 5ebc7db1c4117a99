//! Circuit-complexity geometry: anisotropic gate-cost metrics on the
//! three-sphere of unitaries, their reduction to a deformed two-sphere
//! (a Berger sphere), geodesic lengths, the height function of the deformed
//! surface, and the height weights that feed weighted complexity sums.
//!
//! # Conventions
//!
//! Coordinates are the Euler angles `(θ, ψ, φ)`; matrices of quadratic forms
//! are ordered the same way. The anisotropy `λ` scales the cost of one
//! generator direction: `λ = 1` is the round sphere, `λ > 1` makes azimuthal
//! motion expensive, `λ < 1` cheap. Heights are measured from the `θ = 0`
//! pole (the lowest chain site) and carry units of `ℓ`, so that on the round
//! sphere the site strips land at integer heights: `h(θ_n) = n` at
//! `θ_n = arccos(1 − n/ℓ)`.
//!
//! Throughout, `D(θ) = sin²θ + λ²cos²θ` abbreviates the common denominator
//! of the deformed metric.

use std::cell::Cell;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{KrylovError, Result};
use crate::quad::{integrate, DEFAULT_QUAD_TOL};
use crate::symmetry::{fold_angle, EulerAngles};

/// `λ²` may exceed the validity bound 3 by at most this much, so that
/// `λ = √3` survives its own rounding.
const LAMBDA_SQ_SLACK: f64 = 1e-9;

/// Height integrand values below this are reported (once per operation)
/// before being clamped to zero; smaller dips are ordinary rounding.
const INTEGRAND_CLIP_TOL: f64 = 1e-12;

/// Polar angles within this of a pole are treated as the pole itself when
/// dispatching geodesics (the azimuth is gauge there).
const POLE_TOL: f64 = 1e-9;

/// Azimuth separations below this put two points on a common meridian.
const MERIDIAN_TOL: f64 = 1e-9;

/// Anisotropies within this of 1 use the round-sphere closed form.
const ROUND_SPHERE_TOL: f64 = 1e-12;

/// Gate-cost anisotropy `λ` and spin `ℓ` of a deformed complexity sphere.
///
/// The height integrand is real only for `λ² ≤ 3`; construction enforces
/// `λ ∈ (0, √3]` (to rounding) with a domain error outside, because an
/// imaginary height has no meaning and failing loudly beats clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationParams {
    lambda: f64,
    ell: f64,
}

impl DeformationParams {
    /// Validates `λ ∈ (0, √3]` (domain error outside) and half-integer `ℓ`.
    pub fn new(lambda: f64, ell: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(KrylovError::InvalidInput(format!(
                "anisotropy lambda must be finite, got {lambda}"
            )));
        }
        if lambda <= 0.0 || lambda * lambda > 3.0 + LAMBDA_SQ_SLACK {
            return Err(KrylovError::Domain(format!(
                "anisotropy lambda = {lambda} lies outside the validity domain (0, sqrt(3)]"
            )));
        }
        if !ell.is_finite() || ell <= 0.0 {
            return Err(KrylovError::InvalidInput(format!(
                "ell must be positive and finite, got {ell}"
            )));
        }
        let two_ell = 2.0 * ell;
        if (two_ell - two_ell.round()).abs() > 1e-9 || two_ell.round() < 1.0 {
            return Err(KrylovError::InvalidInput(format!(
                "ell must be a positive half-integer (2*ell integral), got {ell}"
            )));
        }
        Ok(Self { lambda, ell })
    }

    /// The anisotropy `λ`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The spin `ℓ`.
    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// `2ℓ` as an integer (the largest site index).
    pub fn two_ell(&self) -> usize {
        (2.0 * self.ell).round() as usize
    }
}

/// A sample of the cost metric at one polar angle: the symmetric coefficient
/// matrix of the quadratic form, 3×3 in `(dθ, dψ, dφ)` or 2×2 in `(dθ, dψ)`
/// after the fiber reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    theta: f64,
    components: DMatrix<f64>,
}

impl MetricSample {
    /// The polar angle the sample was taken at.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The symmetric coefficient matrix.
    pub fn components(&self) -> &DMatrix<f64> {
        &self.components
    }

    /// Number of coordinates (2 or 3).
    pub fn dim(&self) -> usize {
        self.components.nrows()
    }
}

fn validate_scale(lambda: f64, ell: f64) -> Result<()> {
    if !lambda.is_finite() || lambda <= 0.0 {
        return Err(KrylovError::InvalidInput(format!(
            "anisotropy lambda must be positive and finite, got {lambda}"
        )));
    }
    if !ell.is_finite() || ell <= 0.0 {
        return Err(KrylovError::InvalidInput(format!(
            "ell must be positive and finite, got {ell}"
        )));
    }
    Ok(())
}

/// The full 3×3 cost metric at angles `a`: the round three-sphere form plus
/// the anisotropy correction `ℓ²(λ²−1)(dψ + cosθ dφ)²`,
///
/// ```text
/// g = ℓ² · [[1, 0, 0], [0, λ², λ²cosθ], [0, λ²cosθ, D(θ)]]
/// ```
///
/// which reduces to the round metric `ℓ²[[1,0,0],[0,1,cosθ],[0,cosθ,1]]`
/// at `λ = 1`. Positive semi-definite for every `λ > 0`.
pub fn full_metric(a: &EulerAngles, lambda: f64, ell: f64) -> Result<MetricSample> {
    validate_scale(lambda, ell)?;
    let c = a.theta().cos();
    let s = a.theta().sin();
    let l2 = lambda * lambda;
    let e2 = ell * ell;
    let d = s * s + l2 * c * c;
    let components = DMatrix::from_row_slice(
        3,
        3,
        &[
            e2,
            0.0,
            0.0,
            0.0,
            e2 * l2,
            e2 * l2 * c,
            0.0,
            e2 * l2 * c,
            e2 * d,
        ],
    );
    Ok(MetricSample {
        theta: a.theta(),
        components,
    })
}

/// Minimizes the full metric over the fiber direction `dφ` at fixed `dψ`,
/// returning the reduced 2×2 metric and the extremizing slope `dφ/dψ`:
///
/// ```text
/// slope = −λ²cosθ / D(θ),   g_ψψ = ℓ²λ²sin²θ / D(θ)
/// ```
///
/// — the Berger-sphere form of the cost. At `λ = 1` this is the round
/// two-sphere: `slope = −cosθ`, `g_ψψ = ℓ²sin²θ`.
pub fn reduce_metric(theta: f64, lambda: f64, ell: f64) -> Result<(MetricSample, f64)> {
    validate_scale(lambda, ell)?;
    if !theta.is_finite() {
        return Err(KrylovError::InvalidInput(format!(
            "theta must be finite, got {theta}"
        )));
    }
    let c = theta.cos();
    let s = theta.sin();
    let l2 = lambda * lambda;
    let e2 = ell * ell;
    let d = s * s + l2 * c * c;
    let slope = -l2 * c / d;
    let g_psi = e2 * l2 * s * s / d;
    let components = DMatrix::from_row_slice(2, 2, &[e2, 0.0, 0.0, g_psi]);
    Ok((MetricSample { theta, components }, slope))
}

/// Height integrand argument `A(θ) = 1 − λ⁶cos²θ / D(θ)³`; stays in `[0, 1]`
/// for `λ² ≤ 3/2` and dips negative on a polar cap for larger `λ` (up to the
/// validity bound `λ² = 3`), where the clamped square root flattens the
/// surface.
fn height_argument(theta: f64, lambda2: f64) -> f64 {
    let c = theta.cos();
    let s = theta.sin();
    let d = s * s + lambda2 * c * c;
    1.0 - lambda2 * lambda2 * lambda2 * c * c / (d * d * d)
}

/// Interior kink angles of the clipped height integrand. For `λ² > 3/2` the
/// argument `A` is negative on both polar caps and positive only on a band
/// around the equator; the band edges `θ*` and `π − θ*` are square-root
/// kinks, and a quadrature panel must not straddle them — a panel whose
/// samples miss the band can agree on a too-small value with a clean error
/// estimate, silently dropping the band's mass.
fn integrand_kinks(lambda: f64) -> Vec<f64> {
    let lambda2 = lambda * lambda;
    if lambda2 <= 1.5 {
        return Vec::new();
    }
    // A = 0 ⟺ f(u) = (1 + (λ²−1)u)³ − λ⁶u = 0 with u = cos²θ. f(0) = 1 > 0
    // and f < 0 just inside the pole root u = 1, so bisection brackets the
    // band edge; if rounding hides the sign change (λ² barely above 3/2,
    // vanishing cap), skipping the split loses only the cap's ~θ³ mass.
    let f = |u: f64| {
        let d = 1.0 + (lambda2 - 1.0) * u;
        d * d * d - lambda2 * lambda2 * lambda2 * u
    };
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1e-9);
    if f(hi) >= 0.0 {
        return Vec::new();
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta_star = (0.5 * (lo + hi)).sqrt().acos();
    vec![theta_star, PI - theta_star]
}

/// Integrates `ℓ·√max(0, A)` over `[a, b]`, returning the integral and the
/// most negative `A` encountered (for the caller to report once). The
/// interval is split at any interior integrand kinks first, so panels only
/// ever see smooth pieces.
fn height_panel(d: &DeformationParams, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    let lambda2 = d.lambda() * d.lambda();
    let ell = d.ell();
    let worst = Cell::new(0.0f64);
    let integrand = |t: f64| {
        let arg = height_argument(t, lambda2);
        if arg < worst.get() {
            worst.set(arg);
        }
        ell * arg.max(0.0).sqrt()
    };
    let mut cuts = vec![a];
    cuts.extend(
        integrand_kinks(d.lambda())
            .into_iter()
            .filter(|k| *k > a && *k < b),
    );
    cuts.push(b);
    let piece_tol = tol / (cuts.len() - 1) as f64;
    let mut value = 0.0;
    for w in cuts.windows(2) {
        value += integrate(&integrand, w[0], w[1], piece_tol)?;
    }
    Ok((value, worst.get()))
}

fn warn_if_clipped(worst: f64, lambda: f64) {
    if worst < -INTEGRAND_CLIP_TOL {
        log::warn!(
            "height integrand dipped to {worst:.3e} at lambda = {lambda}; \
             clamped to zero (anisotropy at the edge of its validity domain)"
        );
    }
}

/// Height of the polar angle `θ` on the deformed sphere, in units of `ℓ`:
///
/// ```text
/// h(θ) = ℓ ∫₀^θ √(1 − λ⁶cos²θ′/D(θ′)³) dθ′
/// ```
///
/// by adaptive quadrature to absolute tolerance 1e-10. Monotone
/// nondecreasing with `h(0) = 0`; at `λ = 1` it reduces to `ℓ(1 − cosθ)`.
/// For `λ² > 3/2` the integrand's argument dips below zero on a polar cap;
/// it is clamped at zero and the dip is logged once per call.
pub fn height(theta: f64, d: &DeformationParams) -> Result<f64> {
    if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
        return Err(KrylovError::InvalidInput(format!(
            "height needs theta in [0, pi], got {theta}"
        )));
    }
    let (value, worst) = height_panel(d, 0.0, theta, DEFAULT_QUAD_TOL)?;
    warn_if_clipped(worst, d.lambda());
    Ok(value)
}

/// Heights of the site-strip centers `θ_n = arccos(1 − n/ℓ)`, `n = 0..2ℓ`:
/// the weights of the height-weighted complexity sum. At `λ = 1` the strips
/// sit at integer heights, so the weights are returned as `(0, 1, …, 2ℓ)`
/// exactly rather than through quadrature.
pub fn height_weights(d: &DeformationParams) -> Result<Vec<f64>> {
    let two_ell = d.two_ell();
    if (d.lambda() - 1.0).abs() <= ROUND_SPHERE_TOL {
        return Ok((0..=two_ell).map(|n| n as f64).collect());
    }
    let mut worst = 0.0f64;
    let mut weights = Vec::with_capacity(two_ell + 1);
    for n in 0..=two_ell {
        let theta_n = (1.0 - n as f64 / d.ell()).clamp(-1.0, 1.0).acos();
        let (h, w) = height_panel(d, 0.0, theta_n, DEFAULT_QUAD_TOL)?;
        weights.push(h);
        worst = worst.min(w);
    }
    warn_if_clipped(worst, d.lambda());
    Ok(weights)
}

/// Cross-section radius `r(θ) = ℓλsinθ/√D(θ)` of the deformed sphere seen
/// as a surface of revolution; together with [`height`] it yields profile
/// curves `(θ, r(θ), h(θ))`, and the embedding identity
/// `h′(θ)² = ℓ² − r′(θ)²` holds on the validity domain.
pub fn profile_radius(theta: f64, d: &DeformationParams) -> Result<f64> {
    if !theta.is_finite() || !(0.0..=PI).contains(&theta) {
        return Err(KrylovError::InvalidInput(format!(
            "profile_radius needs theta in [0, pi], got {theta}"
        )));
    }
    let c = theta.cos();
    let s = theta.sin();
    let l2 = d.lambda() * d.lambda();
    Ok(d.ell() * d.lambda() * s / (s * s + l2 * c * c).sqrt())
}

/// Height on the hyperbolic surface of the non-compact symmetry class:
/// `k(cosh θ − 1)`, the distance climbed from the bottom of the hyperboloid.
/// With `θ = Bt` this is the complexity of the hyperbolic coherent orbit.
pub fn hyperbolic_height(theta: f64, k: f64) -> Result<f64> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(KrylovError::InvalidInput(format!(
            "hyperbolic height needs theta >= 0, got {theta}"
        )));
    }
    if !k.is_finite() || k <= 0.0 {
        return Err(KrylovError::InvalidInput(format!(
            "Bargmann index k must be positive and finite, got {k}"
        )));
    }
    Ok(k * (theta.cosh() - 1.0))
}

/// Cached height profile on a uniform `θ` grid over `[0, π]`, with monotone
/// cubic interpolation between nodes. Node values come from cumulative
/// adaptive quadrature (panel tolerances summing to ~1e-10), so the nodes
/// themselves are quadrature-accurate; interpolation adds `O(Δθ²)` error
/// between them. Immutable after construction; concurrent reads are safe.
#[derive(Debug, Clone)]
pub struct HeightTable {
    thetas: Vec<f64>,
    heights: Vec<f64>,
    slopes: Vec<f64>,
    lambda: f64,
    ell: f64,
}

impl HeightTable {
    /// Builds the default 2048-point table.
    pub fn new(d: &DeformationParams) -> Result<Self> {
        Self::with_points(d, 2048)
    }

    /// Builds a table on `n ≥ 2` uniformly spaced nodes.
    pub fn with_points(d: &DeformationParams, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(KrylovError::InvalidInput(format!(
                "a height table needs at least 2 nodes, got {n}"
            )));
        }
        let panels = (n - 1) as f64;
        let panel_tol = (DEFAULT_QUAD_TOL / panels).max(1e-13);
        let thetas: Vec<f64> = (0..n).map(|i| i as f64 * PI / panels).collect();
        let mut heights = Vec::with_capacity(n);
        heights.push(0.0);
        let mut worst = 0.0f64;
        for i in 1..n {
            let (panel, w) = height_panel(d, thetas[i - 1], thetas[i], panel_tol)?;
            heights.push(heights[i - 1] + panel);
            worst = worst.min(w);
        }
        warn_if_clipped(worst, d.lambda());

        // Monotone (Fritsch–Carlson) cubic slopes: harmonic mean of adjacent
        // secants interior, one-sided secants at the ends; zero wherever the
        // secants disagree in sign or vanish, which preserves monotonicity.
        let dx = PI / panels;
        let secants: Vec<f64> = (0..n - 1)
            .map(|i| (heights[i + 1] - heights[i]) / dx)
            .collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secants[0];
        slopes[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (a, b) = (secants[i - 1], secants[i]);
            slopes[i] = if a * b <= 0.0 { 0.0 } else { 2.0 * a * b / (a + b) };
        }

        Ok(Self {
            thetas,
            heights,
            slopes,
            lambda: d.lambda(),
            ell: d.ell(),
        })
    }

    /// The grid nodes.
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    /// Heights at the grid nodes (quadrature-accurate).
    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    /// The anisotropy the table was built for.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The spin the table was built for.
    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    /// Tables always hold at least two nodes.
    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Interpolated height at `θ ∈ [0, π]` (cubic Hermite between nodes;
    /// exact at the nodes).
    pub fn eval(&self, theta: f64) -> Result<f64> {
        if !theta.is_finite() || theta < -1e-12 || theta > PI + 1e-12 {
            return Err(KrylovError::InvalidInput(format!(
                "height table covers [0, pi], got theta = {theta}"
            )));
        }
        let theta = theta.clamp(0.0, PI);
        let n = self.thetas.len();
        let idx = self
            .thetas
            .partition_point(|&x| x <= theta)
            .saturating_sub(1)
            .min(n - 2);
        let dx = self.thetas[idx + 1] - self.thetas[idx];
        let t = (theta - self.thetas[idx]) / dx;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * self.heights[idx]
            + h10 * dx * self.slopes[idx]
            + h01 * self.heights[idx + 1]
            + h11 * dx * self.slopes[idx + 1])
    }
}

// --- geodesics on the reduced (Berger) sphere ---
//
// The reduced metric (unit ℓ) is ds² = dθ² + G(θ)dψ² with
// G = λ²sin²θ/D and G′ = 2λ⁴sinθcosθ/D², giving the geodesic system
//
//   θ″ = ½ G′ ψ′²,   ψ″ = −(G′/G) θ′ψ′,
//
// with conserved energy E = θ′² + Gψ′² and momentum p = Gψ′. Since ψ″ ∝ ψ′,
// the sign of ψ′ never flips: ψ is strictly monotone along any non-meridian
// trajectory, so a shot crosses a target azimuth at most once. Lengths scale
// linearly in ℓ, so everything below runs on the unit sphere.

/// Base arc-length step of the shooting integrator; substeps shrink by
/// `1/(1+|ψ′|)` so polar sweeps, where `ψ′` is large, stay resolved. The
/// total substep count per trajectory is then bounded by
/// `(s_max + Δψ_total)/step`, independent of how close the turning point
/// comes to a pole.
const GEO_BASE_STEP: f64 = 2e-3;

/// Hard cap on substeps per trajectory; exceeding it abandons the shot.
const GEO_STEP_CAP: usize = 200_000;

/// Trajectories entering this distance of a pole are abandoned (their
/// lengths are covered by the exact through-pole candidates).
const GEO_POLE_GUARD: f64 = 1e-6;

/// Admitted drift of the conserved energy and momentum along an accepted
/// trajectory; larger drift is a numerical failure.
const GEO_CONSERVATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy)]
struct GeoState {
    th: f64,
    ps: f64,
    vth: f64,
    vps: f64,
}

fn berger_g(lambda2: f64, th: f64) -> f64 {
    let s = th.sin();
    let c = th.cos();
    lambda2 * s * s / (s * s + lambda2 * c * c)
}

fn geo_rhs(lambda2: f64, y: &GeoState) -> GeoState {
    let s = y.th.sin();
    let c = y.th.cos();
    let d = s * s + lambda2 * c * c;
    let gp = 2.0 * lambda2 * lambda2 * s * c / (d * d);
    // G′/G = 2λ²cosθ/(sinθ·D), formed directly so the pole limit is explicit
    let ratio = 2.0 * lambda2 * c / (s * d);
    GeoState {
        th: y.vth,
        ps: y.vps,
        vth: 0.5 * gp * y.vps * y.vps,
        vps: -ratio * y.vth * y.vps,
    }
}

fn geo_step(lambda2: f64, y: &GeoState, h: f64) -> GeoState {
    let add = |a: &GeoState, b: &GeoState, w: f64| GeoState {
        th: a.th + w * b.th,
        ps: a.ps + w * b.ps,
        vth: a.vth + w * b.vth,
        vps: a.vps + w * b.vps,
    };
    let k1 = geo_rhs(lambda2, y);
    let k2 = geo_rhs(lambda2, &add(y, &k1, h / 2.0));
    let k3 = geo_rhs(lambda2, &add(y, &k2, h / 2.0));
    let k4 = geo_rhs(lambda2, &add(y, &k3, h));
    GeoState {
        th: y.th + h / 6.0 * (k1.th + 2.0 * k2.th + 2.0 * k3.th + k4.th),
        ps: y.ps + h / 6.0 * (k1.ps + 2.0 * k2.ps + 2.0 * k3.ps + k4.ps),
        vth: y.vth + h / 6.0 * (k1.vth + 2.0 * k2.vth + 2.0 * k3.vth + k4.vth),
        vps: y.vps + h / 6.0 * (k1.vps + 2.0 * k2.vps + 2.0 * k3.vps + k4.vps),
    }
}

/// Where a shot trajectory crossed the target azimuth.
#[derive(Debug, Clone, Copy)]
struct GeoCrossing {
    s: f64,
    theta: f64,
    energy: f64,
    momentum: f64,
    momentum0: f64,
    alpha: f64,
}

/// Integrates a unit-speed launch at angle `alpha` from `(θ₁, ψ=0)` until
/// its azimuth reaches `psi_target` (refined to the substep’s machine
/// resolution by bisection), the arc length passes `s_max`, or the shot is
/// abandoned (pole approach, step cap).
fn integrate_to_psi(
    lambda2: f64,
    th1: f64,
    alpha: f64,
    psi_target: f64,
    s_max: f64,
) -> Option<GeoCrossing> {
    let g0 = berger_g(lambda2, th1);
    let mut y = GeoState {
        th: th1,
        ps: 0.0,
        vth: alpha.cos(),
        vps: alpha.sin() / g0.sqrt(),
    };
    let momentum0 = g0 * y.vps;
    let mut s = 0.0;
    for _ in 0..GEO_STEP_CAP {
        if s >= s_max {
            return None;
        }
        let h = (GEO_BASE_STEP / (1.0 + y.vps.abs())).min(s_max - s);
        let y1 = geo_step(lambda2, &y, h);
        if y1.ps >= psi_target {
            // the azimuth is monotone in the step size, so bisect it
            let (mut lo, mut hi) = (0.0f64, h);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if geo_step(lambda2, &y, mid).ps >= psi_target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let yc = geo_step(lambda2, &y, hi);
            if !(GEO_POLE_GUARD..=PI - GEO_POLE_GUARD).contains(&yc.th) {
                return None;
            }
            let gc = berger_g(lambda2, yc.th);
            return Some(GeoCrossing {
                s: s + hi,
                theta: yc.th,
                energy: yc.vth * yc.vth + gc * yc.vps * yc.vps,
                momentum: gc * yc.vps,
                momentum0,
                alpha,
            });
        }
        if !(GEO_POLE_GUARD..=PI - GEO_POLE_GUARD).contains(&y1.th) {
            return None;
        }
        y = y1;
        s += h;
    }
    None
}

/// Scans launch angles for trajectories hitting `(θ₂, psi_target)`, refining
/// each sign change of the polar miss by bisection, and appends the hits.
fn shoot_at_target(
    lambda2: f64,
    th1: f64,
    th2: f64,
    psi_target: f64,
    s_max: f64,
    hits: &mut Vec<GeoCrossing>,
) {
    const N_SCAN: usize = 64;
    const MISS_TOL: f64 = 1e-7;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..N_SCAN {
        let alpha = PI * (i as f64 + 0.5) / N_SCAN as f64;
        let shot = integrate_to_psi(lambda2, th1, alpha, psi_target, s_max);
        let Some(cross) = shot else {
            prev = None;
            continue;
        };
        let miss = cross.theta - th2;
        if miss.abs() <= MISS_TOL {
            hits.push(cross);
        } else if let Some((alpha_lo, miss_lo)) = prev {
            if miss_lo * miss < 0.0 {
                let (mut lo, mut hi, mut flo) = (alpha_lo, alpha, miss_lo);
                let mut last = None;
                for _ in 0..48 {
                    let mid = 0.5 * (lo + hi);
                    let Some(c) = integrate_to_psi(lambda2, th1, mid, psi_target, s_max)
                    else {
                        last = None;
                        break;
                    };
                    let fm = c.theta - th2;
                    last = Some(c);
                    if fm.abs() <= 1e-10 {
                        break;
                    }
                    if flo * fm < 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                if let Some(c) = last {
                    if (c.theta - th2).abs() <= MISS_TOL {
                        hits.push(c);
                    }
                }
            }
        }
        prev = Some((alpha, miss));
    }
}

/// Geodesic length between two points of the deformed sphere by shooting on
/// the reduced metric's geodesic equations — no closed forms, any `λ > 0`.
///
/// Launch angles are scanned and bisected against both the direct azimuth
/// separation and its complement around the sphere; the exact through-pole
/// meridian routes (`ℓ(θ₁+θ₂)` and `ℓ(2π−θ₁−θ₂)`) always join the candidate
/// set, which covers the near-antipodal configurations where interior shots
/// graze a pole and are abandoned. The shortest candidate wins; if it is a
/// shot, its conserved energy and momentum must have drifted less than 1e-6,
/// else a numerical error reports the diagnostics.
pub fn geodesic_length_shooting(
    a1: &EulerAngles,
    a2: &EulerAngles,
    lambda: f64,
    ell: f64,
) -> Result<f64> {
    validate_scale(lambda, ell)?;
    let (th1, th2) = (a1.theta(), a2.theta());
    if th1 > PI || th2 > PI {
        return Err(KrylovError::InvalidInput(format!(
            "sphere geodesics need theta in [0, pi], got {th1} and {th2}"
        )));
    }
    let dpsi = fold_angle(a2.psi() - a1.psi()).abs();
    let lambda2 = lambda * lambda;
    let s_max = 1.1 * PI * (1.0 + lambda);

    // exact meridian routes, valid for every λ and every azimuth separation
    let mut plain = vec![th1 + th2, 2.0 * PI - (th1 + th2)];
    if dpsi <= MERIDIAN_TOL {
        plain.push((th1 - th2).abs());
    }

    let mut hits = Vec::new();
    let poles_involved = !(GEO_POLE_GUARD..=PI - GEO_POLE_GUARD).contains(&th1)
        || !(GEO_POLE_GUARD..=PI - GEO_POLE_GUARD).contains(&th2);
    if !poles_involved {
        let mut targets = vec![dpsi];
        if 2.0 * PI - 2.0 * dpsi > 1e-9 {
            targets.push(2.0 * PI - dpsi);
        }
        for target in targets {
            if target > MERIDIAN_TOL {
                shoot_at_target(lambda2, th1, th2, target, s_max, &mut hits);
            }
        }
    }

    let best_plain = plain.iter().cloned().fold(f64::INFINITY, f64::min);
    let best_hit = hits
        .iter()
        .min_by(|a, b| a.s.total_cmp(&b.s))
        .filter(|c| c.s < best_plain);
    match best_hit {
        Some(c) => {
            let e_drift = (c.energy - 1.0).abs();
            let p_drift = (c.momentum - c.momentum0).abs() / c.momentum0.abs().max(1.0);
            if e_drift > GEO_CONSERVATION_TOL || p_drift > GEO_CONSERVATION_TOL {
                return Err(KrylovError::Numerical(format!(
                    "geodesic shot at launch angle {:.6} lost its invariants after arc \
                     length {:.6}: energy drift {e_drift:.3e}, momentum drift {p_drift:.3e}",
                    c.alpha, c.s
                )));
            }
            Ok(ell * c.s)
        }
        None => Ok(ell * best_plain),
    }
}

/// Geodesic length between two points of the (possibly deformed) complexity
/// sphere, in units of `ℓ`.
///
/// Dispatches on the configuration: pole endpoints and common-meridian pairs
/// use the meridian arc `ℓ·Δθ` (meridians are geodesics for every `λ`, and
/// no path beats `ℓ∫|dθ|`); the round sphere uses the great-circle closed
/// form; everything else goes to [`geodesic_length_shooting`].
pub fn geodesic_length(a1: &EulerAngles, a2: &EulerAngles, lambda: f64, ell: f64) -> Result<f64> {
    validate_scale(lambda, ell)?;
    let (th1, th2) = (a1.theta(), a2.theta());
    if th1 > PI || th2 > PI {
        return Err(KrylovError::InvalidInput(format!(
            "sphere geodesics need theta in [0, pi], got {th1} and {th2}"
        )));
    }
    if th1 <= POLE_TOL {
        return Ok(ell * th2);
    }
    if th1 >= PI - POLE_TOL {
        return Ok(ell * (PI - th2));
    }
    if th2 <= POLE_TOL {
        return Ok(ell * th1);
    }
    if th2 >= PI - POLE_TOL {
        return Ok(ell * (PI - th1));
    }
    let dpsi = fold_angle(a2.psi() - a1.psi()).abs();
    if dpsi <= MERIDIAN_TOL {
        return Ok(ell * (th1 - th2).abs());
    }
    if (lambda - 1.0).abs() <= ROUND_SPHERE_TOL {
        let cos_angle = th1.cos() * th2.cos() + th1.sin() * th2.sin() * dpsi.cos();
        return Ok(ell * cos_angle.clamp(-1.0, 1.0).acos());
    }
    geodesic_length_shooting(a1, a2, lambda, ell)
}
