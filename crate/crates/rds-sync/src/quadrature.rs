//! Lyapunov exponent by singularity-aware adaptive quadrature.
//!
//! For a lift `F` the fibre-wise Lyapunov exponent with respect to the
//! stationary (Lebesgue) measure is
//!
//! ```text
//!     lambda = \int_0^1 log |F'(y)| dy .
//! ```
//!
//! `F'` is an entire trigonometric polynomial, so `log|F'|` is smooth except
//! for integrable logarithmic singularities at the finitely many zeros of
//! `F'`. Plain Gauss rules converge only algebraically against such
//! singularities (bisection towards the zero gains nothing: the error and the
//! width-proportional tolerance share shrink at the same rate), so the
//! integrator subtracts them analytically:
//!
//! 1. locate sign changes of `F'` on a fine grid and refine them by bisection
//!    (simple zeros, multiplicity 1), and likewise locate critical points of
//!    `F'` via sign changes of `F''`; a critical point where `F'` itself
//!    vanishes is a tangential zero (multiplicity 2, e.g. the parabolic
//!    contact at critical coupling);
//! 2. split `[0, 1]` into panels at all those points, so every zero `z` sits
//!    on a panel boundary, and record the zeros adjacent to each panel;
//! 3. on each panel integrate the smooth remainder
//!    `log(|F'(x)| / prod |x - z|^m)` with adaptive 15-point Gauss-Legendre
//!    (bisecting until the two-level error estimate meets the local tolerance
//!    share or the evaluation budget runs out), and add back
//!    `sum m * int log|x - z| dx`, which has the closed-form primitive
//!    `u ln|u| - u`.

use crate::lift::Lift;
use thiserror::Error;

/// Result of the adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureEstimate {
    /// The integral estimate.
    pub value: f64,
    /// Conservative bound on the remaining discretisation error (sum of
    /// accepted two-level differences).
    pub error_bound: f64,
    /// Number of accepted panels.
    pub panels: usize,
}

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error(
        "quadrature did not reach tolerance {tol:e} within the evaluation budget: \
         estimate {estimate} with achieved error bound {error_bound:e}"
    )]
    ToleranceNotReached {
        tol: f64,
        estimate: f64,
        error_bound: f64,
    },
}

/// Default evaluation budget (integrand evaluations) for a Lyapunov call.
pub const DEFAULT_EVAL_BUDGET: usize = 4_000_000;

/// 15-point Gauss-Legendre nodes and weights on [-1, 1], computed once by
/// Newton iteration on the Legendre recurrence.
fn gl15() -> &'static [(f64, f64); 15] {
    use std::sync::OnceLock;
    static NODES: OnceLock<[(f64, f64); 15]> = OnceLock::new();
    NODES.get_or_init(|| {
        let mut out = [(0.0, 0.0); 15];
        for (i, slot) in out.iter_mut().enumerate() {
            let (x, w) = legendre_root(15, i + 1);
            *slot = (x, w);
        }
        out
    })
}

/// The `i`-th root (1-based, descending) of the degree-`n` Legendre
/// polynomial together with its Gauss weight.
fn legendre_root(n: usize, i: usize) -> (f64, f64) {
    let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
    for _ in 0..100 {
        let (p, dp) = legendre_and_derivative(n, x);
        let dx = p / dp;
        x -= dx;
        if dx.abs() < 1e-16 {
            break;
        }
    }
    let (_, dp) = legendre_and_derivative(n, x);
    let w = 2.0 / ((1.0 - x * x) * dp * dp);
    (x, w)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn gl15_integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for &(x, w) in gl15() {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Bisects a bracketed sign change of `f` down to machine resolution.
fn bisect_zero(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = f(mid);
        if (fmid >= 0.0) == (flo >= 0.0) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Panel boundaries and the zeros of `F'` among them.
struct SplitAnalysis {
    /// Interior points of `(0, 1)` that must be panel boundaries: zeros and
    /// critical points of `F'`.
    boundaries: Vec<f64>,
    /// Zeros of `F'` with their multiplicities `(z, m)`.
    singularities: Vec<(f64, u32)>,
}

fn panel_split_analysis(lift: &Lift) -> SplitAnalysis {
    let empty = SplitAnalysis {
        boundaries: Vec::new(),
        singularities: Vec::new(),
    };
    let (max_harmonic, derivative_scale) = match lift {
        Lift::Rotation { .. } => return empty,
        Lift::Fourier { terms } => (
            terms.iter().map(|t| t.harmonic).max().unwrap_or(0),
            1.0 + terms
                .iter()
                .map(|t| {
                    std::f64::consts::TAU
                        * t.harmonic as f64
                        * (t.sin_coeff.abs() + t.cos_coeff.abs())
                })
                .sum::<f64>(),
        ),
    };
    if max_harmonic == 0 {
        return empty;
    }
    // Below this, `F'` at a critical point counts as a tangential zero.
    let singular_eps = 1e-9 * derivative_scale;
    let grid = (256 * max_harmonic as usize).max(1024);
    let d1 = |x: f64| lift.derivative(x);
    let d2 = |x: f64| lift.second_derivative(x);
    let mut boundaries = Vec::new();
    let mut singularities = Vec::new();
    let step = 1.0 / grid as f64;
    let mut prev1 = d1(0.0);
    let mut prev2 = d2(0.0);
    for i in 1..=grid {
        let x = i as f64 * step;
        let v1 = d1(x);
        let v2 = d2(x);
        if (v1 >= 0.0) != (prev1 >= 0.0) {
            let z = bisect_zero(&d1, x - step, x);
            boundaries.push(z);
            singularities.push((z, 1));
        }
        if (v2 >= 0.0) != (prev2 >= 0.0) {
            let s = bisect_zero(&d2, x - step, x);
            boundaries.push(s);
            if d1(s).abs() <= singular_eps {
                singularities.push((s, 2));
            }
        }
        prev1 = v1;
        prev2 = v2;
    }
    boundaries.retain(|&x| x > 0.0 && x < 1.0);
    boundaries.sort_by(|a, b| a.partial_cmp(b).unwrap());
    boundaries.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    singularities.retain(|&(z, _)| z > 0.0 && z < 1.0);
    SplitAnalysis {
        boundaries,
        singularities,
    }
}

/// Primitive of `ln|u|` vanishing at 0: `P(u) = u ln|u| - u`.
fn log_primitive(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * u.abs().ln() - u
    }
}

/// `sum m * int_a^b ln|x - z| dx` over the recorded singular points.
fn singular_correction(sing: &[(f64, u32)], a: f64, b: f64) -> f64 {
    sing.iter()
        .map(|&(z, m)| m as f64 * (log_primitive(b - z) - log_primitive(a - z)))
        .sum()
}

/// The smooth remainder `ln(|F'(x)| / prod |x - z|^m)`.
fn smooth_remainder(lift: &Lift, sing: &[(f64, u32)], x: f64) -> f64 {
    let mut r = lift.derivative(x).abs();
    for &(z, m) in sing {
        r /= (x - z).abs().powi(m as i32);
    }
    if !r.is_finite() || r <= 0.0 {
        // Unreachable for the analysed panels (nodes never touch a zero);
        // a conservative finite value keeps the estimate well defined.
        return f64::MIN_POSITIVE.ln();
    }
    r.ln()
}

/// Integrates `log|F'|` over `[0, 1]` to absolute tolerance `tol` with the
/// default evaluation budget. See [`lyapunov_quadrature_with_budget`].
pub fn lyapunov_quadrature(lift: &Lift, tol: f64) -> Result<QuadratureEstimate, QuadratureError> {
    lyapunov_quadrature_with_budget(lift, tol, DEFAULT_EVAL_BUDGET)
}

/// Integrates `log|F'|` over `[0, 1]` to absolute tolerance `tol`, spending
/// at most `eval_budget` integrand evaluations.
///
/// On success the achieved `error_bound` is at most `tol`. If the budget is
/// exhausted first, the error carries the best estimate together with the
/// error bound actually achieved.
///
/// Panics if `tol` is not a positive finite number.
pub fn lyapunov_quadrature_with_budget(
    lift: &Lift,
    tol: f64,
    eval_budget: usize,
) -> Result<QuadratureEstimate, QuadratureError> {
    assert!(tol.is_finite() && tol > 0.0, "tolerance must be positive");
    let analysis = panel_split_analysis(lift);

    let mut boundaries = vec![0.0];
    boundaries.extend(analysis.boundaries.iter().copied());
    boundaries.push(1.0);

    // Worklist of panels. Each carries the zeros adjacent to its *original*
    // panel: the remainder/correction decomposition stays valid (and the
    // remainder smooth) on every sub-interval, so children just inherit it.
    struct Panel {
        a: f64,
        b: f64,
        /// Coarse Gauss estimate of the smooth remainder on `[a, b]`.
        coarse: f64,
        tol: f64,
        sing: Vec<(f64, u32)>,
    }
    let mut evals = 0usize;
    let mut work: Vec<Panel> = Vec::new();
    for w in boundaries.windows(2) {
        let (a, b) = (w[0], w[1]);
        if (b - a).abs() < f64::EPSILON {
            continue;
        }
        let sing: Vec<(f64, u32)> = analysis
            .singularities
            .iter()
            .copied()
            .filter(|&(z, _)| (z - a).abs() < 1e-12 || (z - b).abs() < 1e-12)
            .collect();
        evals += 15;
        work.push(Panel {
            a,
            b,
            coarse: gl15_integrate(&|x| smooth_remainder(lift, &sing, x), a, b),
            tol: tol * (b - a),
            sing,
        });
    }

    let mut value = 0.0;
    let mut error_bound = 0.0;
    let mut panels = 0usize;
    let mut exhausted = false;

    while let Some(p) = work.pop() {
        let mid = 0.5 * (p.a + p.b);
        let left = gl15_integrate(&|x| smooth_remainder(lift, &p.sing, x), p.a, mid);
        let right = gl15_integrate(&|x| smooth_remainder(lift, &p.sing, x), mid, p.b);
        evals += 30;
        let fine = left + right;
        let err = (fine - p.coarse).abs();
        let interval_floor = (p.b - p.a) <= 16.0 * f64::EPSILON * p.b.abs().max(1.0);
        if err <= p.tol || interval_floor {
            value += fine + singular_correction(&p.sing, p.a, p.b);
            error_bound += err;
            panels += 1;
        } else if evals + 60 > eval_budget {
            // Out of budget: account for the panel at its current refinement.
            value += fine + singular_correction(&p.sing, p.a, p.b);
            error_bound += err;
            panels += 1;
            exhausted = true;
        } else {
            work.push(Panel {
                a: p.a,
                b: mid,
                coarse: left,
                tol: 0.5 * p.tol,
                sing: p.sing.clone(),
            });
            work.push(Panel {
                a: mid,
                b: p.b,
                coarse: right,
                tol: 0.5 * p.tol,
                sing: p.sing,
            });
        }
    }

    if exhausted && error_bound > tol {
        return Err(QuadratureError::ToleranceNotReached {
            tol,
            estimate: value,
            error_bound,
        });
    }
    Ok(QuadratureEstimate {
        value,
        error_bound,
        panels,
    })
}
