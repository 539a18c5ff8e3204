//! Degree-1 lifts of circle maps and their randomized versions.
//!
//! A continuous circle map of degree 1 is represented by a lift
//! `F : R -> R` with `F(x + 1) = F(x) + 1`. Two families are supported:
//!
//! - `Rotation { offset }`: `F(x) = x + c`;
//! - `Fourier { terms }`: `F(x) = x + sum_j (a_j sin(2 pi j x) + b_j cos(2 pi j x))`,
//!   a trigonometric polynomial displacement over finitely many harmonics.
//!
//! The randomized map with translation parameter `alpha in [0, 1)` acts on the
//! circle by `f_alpha([x]) = [F(x + alpha) - alpha]`. Its derivative at `[x]`
//! is `F'(x + alpha)`.
//!
//! A *subperiod* of the one-step map `f = f_0` is an `alpha in (0, 1)` with
//! `f_alpha = f`, equivalently: the displacement `g(x) = F(x) - x` is
//! alpha-periodic. Subperiods obstruct two-point contraction — a pair at
//! distance alpha can never leave that distance — so their detection is an
//! exact disqualifier for synchronisation. For trigonometric displacement the
//! question is exactly decidable: `g` has least period `1/n` where `n` is the
//! gcd of the active harmonic indices, so the subperiods are `k/n`,
//! `k = 1..n-1`. A rotation has constant displacement, and every
//! `alpha in (0, 1)` is a subperiod.

use crate::circle::CirclePoint;
use std::f64::consts::TAU;
use thiserror::Error;

/// One harmonic of a trigonometric displacement:
/// `a sin(2 pi j x) + b cos(2 pi j x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierTerm {
    /// Harmonic index `j >= 1`.
    pub harmonic: u32,
    /// Coefficient of `sin(2 pi j x)`.
    pub sin_coeff: f64,
    /// Coefficient of `cos(2 pi j x)`.
    pub cos_coeff: f64,
}

impl FourierTerm {
    pub fn new(harmonic: u32, sin_coeff: f64, cos_coeff: f64) -> FourierTerm {
        FourierTerm {
            harmonic,
            sin_coeff,
            cos_coeff,
        }
    }
}

/// Errors from lift construction or randomized application.
#[derive(Debug, Error, PartialEq)]
pub enum LiftError {
    #[error("harmonic index 0 is not allowed (terms must have j >= 1)")]
    ZeroHarmonic,
    #[error("duplicate harmonic index {0} in Fourier terms")]
    DuplicateHarmonic(u32),
    #[error("non-finite coefficient in term with harmonic {0}")]
    NonFiniteCoefficient(u32),
    #[error("translation parameter {0} outside [0, 1)")]
    ParameterOutOfRange(f64),
}

/// A degree-1 lift `F : R -> R` of a circle map.
#[derive(Clone, Debug, PartialEq)]
pub enum Lift {
    /// `F(x) = x + offset`.
    Rotation { offset: f64 },
    /// `F(x) = x + sum of terms`; terms sorted by harmonic, indices distinct.
    Fourier { terms: Vec<FourierTerm> },
}

impl Lift {
    /// The rigid rotation lift `F(x) = x + c`.
    pub fn rotation(offset: f64) -> Lift {
        assert!(offset.is_finite(), "rotation offset must be finite");
        Lift::Rotation { offset }
    }

    /// Builds a trigonometric-displacement lift, sorting terms by harmonic.
    pub fn fourier(mut terms: Vec<FourierTerm>) -> Result<Lift, LiftError> {
        for t in &terms {
            if t.harmonic == 0 {
                return Err(LiftError::ZeroHarmonic);
            }
            if !t.sin_coeff.is_finite() || !t.cos_coeff.is_finite() {
                return Err(LiftError::NonFiniteCoefficient(t.harmonic));
            }
        }
        terms.sort_by_key(|t| t.harmonic);
        for w in terms.windows(2) {
            if w[0].harmonic == w[1].harmonic {
                return Err(LiftError::DuplicateHarmonic(w[0].harmonic));
            }
        }
        Ok(Lift::Fourier { terms })
    }

    /// The single-harmonic sine lift `F(x) = x + a sin(2 pi x)`.
    pub fn sine(a: f64) -> Lift {
        Lift::fourier(vec![FourierTerm::new(1, a, 0.0)]).expect("one valid term")
    }

    /// Evaluates the lift `F(x)` as a map of the real line.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Lift::Rotation { offset } => x + offset,
            Lift::Fourier { terms } => {
                let mut y = x;
                for t in terms {
                    let u = TAU * t.harmonic as f64 * x;
                    y += t.sin_coeff * u.sin() + t.cos_coeff * u.cos();
                }
                y
            }
        }
    }

    /// Evaluates the derivative `F'(x)`.
    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Lift::Rotation { .. } => 1.0,
            Lift::Fourier { terms } => {
                let mut d = 1.0;
                for t in terms {
                    let w = TAU * t.harmonic as f64;
                    let u = w * x;
                    d += w * (t.sin_coeff * u.cos() - t.cos_coeff * u.sin());
                }
                d
            }
        }
    }

    /// Second derivative `F''(x)`; used to bracket tangential critical points
    /// of `F'` when splitting quadrature panels.
    pub(crate) fn second_derivative(&self, x: f64) -> f64 {
        match self {
            Lift::Rotation { .. } => 0.0,
            Lift::Fourier { terms } => {
                let mut d = 0.0;
                for t in terms {
                    let w = TAU * t.harmonic as f64;
                    let u = w * x;
                    d -= w * w * (t.sin_coeff * u.sin() + t.cos_coeff * u.cos());
                }
                d
            }
        }
    }

    /// Applies the randomized map `f_alpha([x]) = [F(x + alpha) - alpha]`.
    ///
    /// Errors if `alpha` lies outside `[0, 1)`; the noise model only produces
    /// parameters in that window and anything else indicates a caller bug.
    pub fn apply_randomized(&self, alpha: f64, x: CirclePoint) -> Result<CirclePoint, LiftError> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(LiftError::ParameterOutOfRange(alpha));
        }
        Ok(self.apply_randomized_unchecked(alpha, x))
    }

    /// `f_alpha` without the parameter-range check, for iteration loops whose
    /// parameters come straight from a noise stream.
    #[inline]
    pub(crate) fn apply_randomized_unchecked(&self, alpha: f64, x: CirclePoint) -> CirclePoint {
        debug_assert!((0.0..1.0).contains(&alpha));
        match self {
            // Rotations commute with the parameter conjugation identically
            // (`F(x + alpha) - alpha = x + c` for every alpha); applying them
            // directly avoids the `x + alpha - alpha` round-trip and keeps
            // isometries bit-exact on representable points.
            Lift::Rotation { offset } => x.rotate(*offset),
            Lift::Fourier { .. } => CirclePoint::new(self.eval(x.pos() + alpha) - alpha),
        }
    }

    /// Derivative of `f_alpha` at `[x]`, namely `F'(x + alpha)`.
    #[inline]
    pub fn randomized_derivative(&self, alpha: f64, x: CirclePoint) -> f64 {
        self.derivative(x.pos() + alpha)
    }

    /// The lift of the conjugated map `rotate(-beta) o f o rotate(beta)`,
    /// which equals the lift of `f_beta`: `F_beta(x) = F(x + beta) - beta`.
    ///
    /// For trigonometric displacement this rotates each coefficient pair
    /// `(a_j, b_j)` by angle `2 pi j beta`, preserving the active harmonic
    /// set — hence subperiod structure is conjugation-invariant.
    pub fn conjugate_by_rotation(&self, beta: f64) -> Lift {
        match self {
            Lift::Rotation { offset } => Lift::Rotation { offset: *offset },
            Lift::Fourier { terms } => {
                let rotated = terms
                    .iter()
                    .map(|t| {
                        let phi = TAU * t.harmonic as f64 * beta;
                        let (s, c) = phi.sin_cos();
                        FourierTerm::new(
                            t.harmonic,
                            t.sin_coeff * c - t.cos_coeff * s,
                            t.sin_coeff * s + t.cos_coeff * c,
                        )
                    })
                    .collect();
                Lift::Fourier { terms: rotated }
            }
        }
    }

    /// Harmonic indices whose coefficient pair is not identically zero.
    pub fn active_harmonics(&self) -> Vec<u32> {
        match self {
            Lift::Rotation { .. } => Vec::new(),
            Lift::Fourier { terms } => terms
                .iter()
                .filter(|t| t.sin_coeff != 0.0 || t.cos_coeff != 0.0)
                .map(|t| t.harmonic)
                .collect(),
        }
    }

    /// Short human-readable description, e.g. for run manifests.
    pub fn describe(&self) -> String {
        match self {
            Lift::Rotation { offset } => format!("rotation(c={offset})"),
            Lift::Fourier { terms } => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| format!("({}, {}, {})", t.harmonic, t.sin_coeff, t.cos_coeff))
                    .collect();
                format!("fourier[{}]", parts.join(", "))
            }
        }
    }
}

/// Number of distinct one-step maps among `{f_alpha : alpha in [0,1)}`
/// that coincide with `f_0`; equivalently the index `n` such that the
/// subperiods are exactly `{k/n : k = 1..n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodCount {
    /// Displacement has least period `1/n`; `n = 1` means no subperiods.
    Finite(u32),
    /// Displacement is constant (rotation): every `alpha in (0,1)` is a
    /// subperiod.
    Infinite,
}

/// How a subperiod report was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubperiodMethod {
    /// gcd of active harmonics (exact for trigonometric displacement).
    ExactFourier,
    /// Finite scan of `sup_x |g(x + p/q) - g(x)|` over a sample grid.
    GridCheck,
}

/// Outcome of subperiod detection.
#[derive(Clone, Debug, PartialEq)]
pub struct SubperiodReport {
    /// The subperiods in `(0, 1)`, ascending. Empty both when there are none
    /// and when every parameter is one (see `period_count`).
    pub subperiods: Vec<f64>,
    /// `Finite(n)` for least displacement period `1/n`; `Infinite` for
    /// constant displacement.
    pub period_count: PeriodCount,
    /// Which detection path produced the report.
    pub method: SubperiodMethod,
}

impl SubperiodReport {
    /// True when any subperiod exists (including the rotation sentinel).
    pub fn has_subperiods(&self) -> bool {
        match self.period_count {
            PeriodCount::Infinite => true,
            PeriodCount::Finite(n) => n >= 2,
        }
    }

    fn finite(n: u32, method: SubperiodMethod) -> SubperiodReport {
        let subperiods = (1..n).map(|k| k as f64 / n as f64).collect();
        SubperiodReport {
            subperiods,
            period_count: PeriodCount::Finite(n),
            method,
        }
    }

    fn infinite(method: SubperiodMethod) -> SubperiodReport {
        SubperiodReport {
            subperiods: Vec::new(),
            period_count: PeriodCount::Infinite,
            method,
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Detects the subperiods of the one-step map with lift `F`.
///
/// For the supported lift families the answer is computed exactly: a rotation
/// has constant displacement (`Infinite`), and trigonometric displacement has
/// least period `1 / gcd(active harmonics)`. `grid_size` and `tol` are the
/// budget for the independent grid scan (see [`detect_subperiods_grid`]),
/// accepted here so both paths share a signature; the exact path ignores
/// them beyond validation.
///
/// Panics if `grid_size < 256` or `tol <= 0`.
pub fn detect_subperiods(lift: &Lift, grid_size: usize, tol: f64) -> SubperiodReport {
    validate_grid_params(grid_size, tol);
    let active = lift.active_harmonics();
    if active.is_empty() {
        // Rotation, or a trigonometric lift whose displacement degenerated to
        // the zero function: constant displacement either way.
        return SubperiodReport::infinite(SubperiodMethod::ExactFourier);
    }
    let n = active.iter().copied().fold(0, gcd);
    SubperiodReport::finite(n, SubperiodMethod::ExactFourier)
}

/// Subperiods by finite scan, independent of harmonic bookkeeping.
///
/// Tests candidate parameters `alpha = p/q` for `q = 2..=grid_size` with
/// `p = 1` (a subperiod group containing some `k/q` in lowest terms contains
/// `1/q`), accepting `q` when `sup_x |g(x + 1/q) - g(x)| < tol` over a
/// `grid_size`-point sample grid, where `g(x) = F(x) - x`. The largest
/// accepted `q` fixes the group `{k/q}`. Constant displacement is detected
/// first by `sup_x |g(x) - g(0)| < tol`.
///
/// Panics if `grid_size < 256` or `tol <= 0`.
pub fn detect_subperiods_grid(lift: &Lift, grid_size: usize, tol: f64) -> SubperiodReport {
    validate_grid_params(grid_size, tol);
    let g = |x: f64| lift.eval(x) - x;
    let step = 1.0 / grid_size as f64;

    let g0 = g(0.0);
    let mut constant = true;
    for i in 1..grid_size {
        if (g(i as f64 * step) - g0).abs() >= tol {
            constant = false;
            break;
        }
    }
    if constant {
        return SubperiodReport::infinite(SubperiodMethod::GridCheck);
    }

    let is_subperiod = |alpha: f64| -> bool {
        for i in 0..grid_size {
            let x = i as f64 * step;
            if (g(x + alpha) - g(x)).abs() >= tol {
                return false;
            }
        }
        true
    };
    let mut n = 1u32;
    for q in 2..=grid_size as u32 {
        if is_subperiod(1.0 / q as f64) {
            n = q;
        }
    }
    SubperiodReport::finite(n, SubperiodMethod::GridCheck)
}

fn validate_grid_params(grid_size: usize, tol: f64) {
    assert!(grid_size >= 256, "subperiod grid_size must be >= 256");
    assert!(tol > 0.0, "subperiod tolerance must be positive");
}
