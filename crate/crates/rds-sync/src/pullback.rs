//! Pullback empirical measures, atom clustering, random fixed points.
//!
//! The pullback of the uniform measure along one noise realisation is
//! approximated by pushing an `N`-point discretisation of Lebesgue measure
//! through the *reversed* composition of the first `T` draws:
//!
//! ```text
//!     cloud_T(omega) = f_{alpha_1} o f_{alpha_2} o ... o f_{alpha_T} (grid),
//! ```
//!
//! i.e. draw `T` is applied first and draw `1` last. Reading draw `k` as "the
//! map used `k` steps in the past" makes this the time-(-T)-to-0 pullback:
//! increasing `T` prepends maps in the ever more distant past while the
//! recent maps — which dominate the image — stay fixed. That is what makes
//! the cloud converge pathwise (Cauchy in `T`) whenever orbits contract on
//! average, unlike a forward-ordered composition whose image keeps moving
//! with every appended map.
//!
//! For contracting families the cloud collapses onto finitely many atoms. A
//! single atom is the random fixed point; `n > 1` atoms arise exactly from
//! the `1/n`-translation symmetry of subperiod systems, and the grid mass
//! splits evenly among them.

use crate::circle::{circle_dist, CirclePoint};
use crate::engine::RandomMapSystem;
use crate::noise::NoiseStream;
use crate::stats::{circular_mean, circular_spread};
use rayon::prelude::*;

/// Default single-linkage merge radius for cluster extraction.
pub const DEFAULT_MERGE_RADIUS: f64 = 0.02;

/// A weighted atomic approximation of a measure on the circle.
#[derive(Clone, Debug)]
pub struct EmpiricalMeasure {
    /// `(position, weight)` pairs; weights are non-negative and sum to 1.
    pub atoms: Vec<(CirclePoint, f64)>,
    /// Number of grid points the measure was built from.
    pub resolution: usize,
}

impl EmpiricalMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, w)| w).sum()
    }
}

/// Pushes `n` equispaced points through the reversed composition of draws
/// `1..=t` of `omega` (draw `t` first, draw `1` last) and returns the image
/// cloud with uniform weights `1/n`.
///
/// Panics if `n < 64`; coarser grids make cluster masses meaningless.
pub fn pullback_measure(
    sys: &RandomMapSystem,
    omega: &NoiseStream,
    t: u64,
    n: usize,
) -> EmpiricalMeasure {
    assert!(n >= 64, "pullback grid must have at least 64 points");
    let alphas: Vec<f64> = (1..=t).map(|k| omega.draw(k)).collect();
    let weight = 1.0 / n as f64;
    let atoms: Vec<(CirclePoint, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut x = CirclePoint::new(i as f64 / n as f64);
            for &alpha in alphas.iter().rev() {
                x = sys.step(alpha, x);
            }
            (x, weight)
        })
        .collect();
    EmpiricalMeasure {
        atoms,
        resolution: n,
    }
}

/// One cluster of atoms.
#[derive(Clone, Debug)]
pub struct Cluster {
    /// Weighted circular mean of the members.
    pub center: CirclePoint,
    /// Total weight of the members.
    pub mass: f64,
    /// Largest circle distance from the centre to a member.
    pub spread: f64,
}

/// Clusters found by single-linkage at a given merge radius.
#[derive(Clone, Debug)]
pub struct ClusterReport {
    /// Clusters ordered by centre position.
    pub clusters: Vec<Cluster>,
    pub merge_radius: f64,
    /// Set when any cluster has spread above 1/4 — the cloud is closer to a
    /// continuum than to an atomic measure (e.g. chain merging wrapped the
    /// whole circle).
    pub non_atomic: bool,
}

impl ClusterReport {
    pub fn n_clusters(&self) -> usize {
        self.clusters.len()
    }
}

/// Single-linkage clustering on the circle.
///
/// Atoms are cyclically sorted; maximal chains whose consecutive gaps are all
/// `<= merge_radius` form the clusters (for points on a circle this is
/// exactly single linkage with that threshold). Chains may span more than
/// the merge radius end to end — the `non_atomic` flag marks degenerate
/// reports where a chain wraps a macroscopic part of the circle.
pub fn cluster_atoms(measure: &EmpiricalMeasure, merge_radius: f64) -> ClusterReport {
    assert!(merge_radius > 0.0 && merge_radius < 0.5);
    assert!(!measure.atoms.is_empty());
    let mut atoms = measure.atoms.clone();
    atoms.sort_by(|a, b| a.0.pos().partial_cmp(&b.0.pos()).unwrap());
    let m = atoms.len();

    // Boundaries: indices i such that the gap between atom i and atom i+1
    // (cyclically) exceeds the merge radius.
    let mut boundaries = Vec::new();
    for i in 0..m {
        let here = atoms[i].0;
        let next = atoms[(i + 1) % m].0;
        if circle_dist(here, next) > merge_radius {
            boundaries.push(i);
        }
    }

    let groups: Vec<Vec<(CirclePoint, f64)>> = if boundaries.is_empty() {
        vec![atoms]
    } else {
        let mut groups = Vec::with_capacity(boundaries.len());
        for (bi, &end) in boundaries.iter().enumerate() {
            let start = (boundaries[(bi + boundaries.len() - 1) % boundaries.len()] + 1) % m;
            let mut group = Vec::new();
            let mut idx = start;
            loop {
                group.push(atoms[idx]);
                if idx == end {
                    break;
                }
                idx = (idx + 1) % m;
            }
            groups.push(group);
        }
        groups
    };

    let mut clusters: Vec<Cluster> = groups
        .into_iter()
        .map(|members| {
            let mass: f64 = members.iter().map(|&(_, w)| w).sum();
            // The circular mean exists whenever the members sit inside a
            // proper arc; a wrapped (near-uniform) chain can null the
            // resultant, in which case any member serves as a nominal centre.
            let center = circular_mean(&members).unwrap_or(members[0].0);
            let spread = circular_spread(&members, center);
            Cluster {
                center,
                mass,
                spread,
            }
        })
        .collect();
    clusters.sort_by(|a, b| a.center.pos().partial_cmp(&b.center.pos()).unwrap());
    let non_atomic = clusters.iter().any(|c| c.spread > 0.25);
    ClusterReport {
        clusters,
        merge_radius,
        non_atomic,
    }
}

/// The random fixed point: the collapse target of the pullback cloud.
///
/// Returns `Some(center)` exactly when the cloud forms a single cluster of
/// spread below `tol` at merge radius [`DEFAULT_MERGE_RADIUS`]; `None` when
/// the cloud has several clusters (subperiod symmetry) or remains diffuse
/// (isometries).
pub fn random_fixed_point(
    sys: &RandomMapSystem,
    omega: &NoiseStream,
    t: u64,
    n: usize,
    tol: f64,
) -> Option<CirclePoint> {
    random_fixed_point_with(sys, omega, t, n, DEFAULT_MERGE_RADIUS, tol)
}

/// [`random_fixed_point`] with an explicit merge radius.
pub fn random_fixed_point_with(
    sys: &RandomMapSystem,
    omega: &NoiseStream,
    t: u64,
    n: usize,
    merge_radius: f64,
    tol: f64,
) -> Option<CirclePoint> {
    assert!(tol > 0.0);
    let measure = pullback_measure(sys, omega, t, n);
    let report = cluster_atoms(&measure, merge_radius);
    match report.clusters.as_slice() {
        [only] if only.spread < tol => Some(only.center),
        _ => None,
    }
}
