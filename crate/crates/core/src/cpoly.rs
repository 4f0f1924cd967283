//! Complex polynomials in the spectral parameter: exact-coefficient
//! arithmetic, Horner evaluation, formal derivatives, Newton interpolation,
//! and an Aberth-Ehrlich root finder with multiplicity clustering.
//!
//! Coefficients are stored in ascending degree order and the leading
//! coefficient of a nonzero polynomial is kept nonzero by trimming.

use crate::{Error, Result, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Trailing coefficients at or below this magnitude are trimmed after any
/// arithmetic that can produce cancellation, keeping degrees honest.
pub const TRIM_EPS: f64 = 1e-14;

const MAX_ABERTH_SWEEPS: usize = 200;
const MAX_POLISH_STEPS: usize = 50;
/// Fixed seed for the initial-circle perturbation, for reproducible runs.
const ABERTH_SEED: u64 = 0x7a6f_11e5_9b3c_2d41;

/// Complex polynomial, coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq)]
pub struct CPoly {
    coeffs: Vec<C64>,
}

/// Roots of a polynomial with clustered multiplicities.
///
/// `residual` bounds `|p(root)|` over the reported roots; multiplicities
/// sum to the degree of the polynomial the set was computed from.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<(C64, usize)>,
    pub residual: f64,
}

impl RootSet {
    /// Total count with multiplicity.
    pub fn total(&self) -> usize {
        self.roots.iter().map(|&(_, m)| m).sum()
    }

    /// Roots expanded with multiplicity into a flat list.
    pub fn expanded(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.total());
        for &(z, m) in &self.roots {
            for _ in 0..m {
                out.push(z);
            }
        }
        out
    }

    /// Sum over roots counting multiplicity.
    pub fn sum(&self) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for &(z, m) in &self.roots {
            s += z * (m as f64);
        }
        s
    }

    /// Multiplicity of the cluster nearest to `z`, together with the
    /// distance to its centroid. Returns (0, inf) on an empty set.
    pub fn multiplicity_near(&self, z: C64) -> (usize, f64) {
        let mut best = (0usize, f64::INFINITY);
        for &(r, m) in &self.roots {
            let d = (r - z).norm();
            if d < best.1 {
                best = (m, d);
            }
        }
        best
    }
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        CPoly::constant(C64::new(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        CPoly::from_coeffs(vec![c])
    }

    /// `c0 + c1 * lambda`.
    pub fn linear(c0: C64, c1: C64) -> Self {
        CPoly::from_coeffs(vec![c0, c1])
    }

    /// Builds from ascending coefficients, trimming trailing near-zeros.
    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        let mut p = CPoly { coeffs };
        p.trim();
        p
    }

    /// Real ascending coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        CPoly::from_coeffs(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// `leading * prod (lambda - z)^m` over the given roots.
    pub fn from_roots(leading: C64, roots: &[(C64, usize)]) -> Self {
        let mut p = CPoly::constant(leading);
        for &(z, m) in roots {
            let factor = CPoly::linear(-z, C64::new(1.0, 0.0));
            for _ in 0..m {
                p = p.mul(&factor);
            }
        }
        p
    }

    fn trim(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if c.norm() <= TRIM_EPS {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `lambda^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn leading(&self) -> Option<C64> {
        self.coeffs.last().copied()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, rhs: &CPoly) -> CPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + rhs.coeff(k));
        }
        CPoly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &CPoly) -> CPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> CPoly {
        CPoly {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> CPoly {
        CPoly::from_coeffs(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Convolution product.
    pub fn mul(&self, rhs: &CPoly) -> CPoly {
        if self.is_zero() || rhs.is_zero() {
            return CPoly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly::from_coeffs(out)
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Magnitude scale of the evaluation at `z`, used for relative residuals.
    fn eval_scale(&self, z: C64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0_f64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * r + c.norm();
        }
        acc.max(1e-300)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * (k as f64))
            .collect();
        CPoly::from_coeffs(out)
    }

    /// Taylor coefficients of `p(c + x)` up to order `k_max`, by repeated
    /// synthetic division.
    fn taylor_at(&self, c: C64, k_max: usize) -> Vec<C64> {
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(k_max + 1);
        for _ in 0..=k_max {
            if work.is_empty() {
                out.push(C64::new(0.0, 0.0));
                continue;
            }
            // divide work by (lambda - c): remainder is the next Taylor coeff
            let mut rem = C64::new(0.0, 0.0);
            for j in (0..work.len()).rev() {
                let t = work[j] + rem * c;
                rem = t;
                work[j] = t;
            }
            out.push(work.remove(0));
        }
        out
    }

    /// Coefficient-wise infinity distance, padding with zeros.
    pub fn coeff_distance(&self, rhs: &CPoly) -> f64 {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        (0..n)
            .map(|k| (self.coeff(k) - rhs.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Scale-aware coefficient comparison: the infinity distance must not
    /// exceed `tol * (1 + max coefficient magnitude)`.
    pub fn coeff_close(&self, rhs: &CPoly, tol: f64) -> bool {
        let scale = 1.0 + self.max_coeff_norm().max(rhs.max_coeff_norm());
        self.coeff_distance(rhs) <= tol * scale
    }

    /// All complex roots with clustered multiplicities.
    ///
    /// Aberth-Ehrlich simultaneous iteration from a randomly perturbed
    /// circle (fixed seed), Newton polishing per root, then clustering:
    /// roots within `max(1e-6, 1e-6 (1+|z|))` merge, and wider groups merge
    /// only when the Taylor expansion at their centroid is dominated by the
    /// order-m term, so a noisy multiple root is reported once with its
    /// multiplicity rather than as a scatter of simple roots.
    pub fn roots(&self, tol: f64) -> Result<RootSet> {
        let deg = match self.degree() {
            None | Some(0) => {
                return Err(Error::Precondition(
                    "roots: polynomial must have degree >= 1".into(),
                ))
            }
            Some(d) => d,
        };

        // Strip numerically-zero low-order coefficients: exact roots at 0.
        let scale = self.max_coeff_norm();
        let mut zero_mult = 0usize;
        let mut low = 0usize;
        while low < deg && self.coeffs[low].norm() <= 1e-13 * scale {
            zero_mult += 1;
            low += 1;
        }
        let reduced = CPoly {
            coeffs: self.coeffs[low..].to_vec(),
        };

        let mut raw: Vec<C64> = vec![C64::new(0.0, 0.0); zero_mult];
        let rdeg = reduced.coeffs.len() - 1;
        if rdeg == 1 {
            raw.push(-reduced.coeffs[0] / reduced.coeffs[1]);
        } else if rdeg >= 2 {
            raw.extend(reduced.aberth(tol)?);
        }

        // Newton polish each simple candidate.
        let dp = self.derivative();
        for z in raw.iter_mut().skip(zero_mult) {
            *z = polish_newton(self, &dp, *z, 1);
        }

        let mut clusters = cluster(self, &raw);
        clusters.sort_by(|a, b| {
            (a.0.re, a.0.im)
                .partial_cmp(&(b.0.re, b.0.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });

        let residual = clusters
            .iter()
            .map(|&(z, _)| self.eval(z).norm())
            .fold(0.0, f64::max);
        debug_assert_eq!(clusters.iter().map(|&(_, m)| m).sum::<usize>(), deg);
        Ok(RootSet {
            roots: clusters,
            residual,
        })
    }

    /// Aberth-Ehrlich iteration on a polynomial with nonzero constant term.
    fn aberth(&self, tol: f64) -> Result<Vec<C64>> {
        let deg = self.coeffs.len() - 1;
        let lead = self.coeffs[deg];
        let dp = self.derivative();

        // Initial points: circle at the root centroid with Fujiwara-type
        // radius, randomly perturbed so symmetric configurations cannot
        // stall the iteration.
        let center = -self.coeffs[deg - 1] / (lead * deg as f64);
        let mut radius: f64 = 0.0;
        for k in 0..deg {
            let m = (self.coeffs[k] / lead).norm();
            if m > 0.0 {
                radius = radius.max(2.0 * m.powf(1.0 / (deg - k) as f64));
            }
        }
        radius = radius.max(1e-3);

        let mut rng = ChaCha8Rng::seed_from_u64(ABERTH_SEED);
        let mut z: Vec<C64> = (0..deg)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * (j as f64) / (deg as f64)
                    + rng.random_range(-0.15..0.15)
                    + 0.31;
                let r = radius * (1.0 + rng.random_range(-0.05..0.05));
                center + C64::from_polar(r, theta)
            })
            .collect();

        let mut best = z.clone();
        let mut best_res = f64::INFINITY;
        let mut converged = false;
        for _sweep in 0..MAX_ABERTH_SWEEPS {
            let mut max_step = 0.0_f64;
            for j in 0..deg {
                let pj = self.eval(z[j]);
                let dj = dp.eval(z[j]);
                if pj.norm() == 0.0 {
                    continue;
                }
                let w = if dj.norm() > 0.0 {
                    pj / dj
                } else {
                    // flat derivative: nudge off the saddle
                    C64::new(1e-8, 1e-8)
                };
                let mut s = C64::new(0.0, 0.0);
                for k in 0..deg {
                    if k != j {
                        let d = z[j] - z[k];
                        if d.norm_sqr() > 1e-300 {
                            s += 1.0 / d;
                        }
                    }
                }
                let denom = C64::new(1.0, 0.0) - w * s;
                let step = if denom.norm() > 1e-12 { w / denom } else { w };
                z[j] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[j].norm()));
            }
            let res = z
                .iter()
                .map(|&zj| self.eval(zj).norm() / self.eval_scale(zj))
                .fold(0.0, f64::max);
            if res < best_res {
                best_res = res;
                best.copy_from_slice(&z);
            }
            if max_step < 1e-14 || res < 1e-15 {
                converged = true;
                break;
            }
        }
        // Accept when the relative residual is at the requested tolerance
        // or at the rounding floor; otherwise report the best iterate.
        if !converged && best_res > tol.max(1e-11) {
            return Err(Error::RootsDidNotConverge {
                sweeps: MAX_ABERTH_SWEEPS,
                residual: best_res,
                best,
            });
        }
        Ok(best)
    }

    /// Unique polynomial of the given degree through the first
    /// `degree + 1` samples, by Newton divided differences.
    pub fn interpolate(samples: &[(C64, C64)], degree: usize) -> Result<CPoly> {
        let need = degree + 1;
        if samples.len() < need {
            return Err(Error::NotEnoughSamples {
                need,
                got: samples.len(),
            });
        }
        let pts = &samples[..need];
        for i in 0..need {
            for j in i + 1..need {
                let d = (pts[i].0 - pts[j].0).norm();
                let s = 1.0 + pts[i].0.norm().max(pts[j].0.norm());
                if d <= 1e-14 * s {
                    return Err(Error::DuplicateAbscissa { i, j });
                }
            }
        }
        // divided-difference table, in place
        let xs: Vec<C64> = pts.iter().map(|p| p.0).collect();
        let mut dd: Vec<C64> = pts.iter().map(|p| p.1).collect();
        for order in 1..need {
            for i in (order..need).rev() {
                dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - order]);
            }
        }
        // expand the Newton form to monomial coefficients
        let mut p = CPoly::constant(dd[need - 1]);
        for i in (0..need - 1).rev() {
            p = p.mul(&CPoly::linear(-xs[i], C64::new(1.0, 0.0)));
            p = p.add(&CPoly::constant(dd[i]));
        }
        Ok(p)
    }
}

/// Newton (or multiplicity-m Newton) polish; keeps the best residual seen.
fn polish_newton(p: &CPoly, dp: &CPoly, z0: C64, mult: usize) -> C64 {
    let mut z = z0;
    let mut best = z0;
    let mut best_res = p.eval(z0).norm();
    for _ in 0..MAX_POLISH_STEPS {
        let pv = p.eval(z);
        let dv = dp.eval(z);
        if dv.norm() == 0.0 {
            break;
        }
        let step = pv / dv * (mult as f64);
        z -= step;
        let res = p.eval(z).norm();
        if res < best_res {
            best_res = res;
            best = z;
        }
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    best
}

fn cluster_radius(z: C64) -> f64 {
    (1e-6f64).max(1e-6 * (1.0 + z.norm()))
}

fn suspicion_radius(z: C64) -> f64 {
    1e-3 * (1.0 + z.norm())
}

/// Single-linkage grouping of raw roots at the base radius, then an
/// attempt to merge wider suspicion-linked groups as one multiple root:
/// a group of total multiplicity m collapses only when, at the refined
/// cluster center, every Taylor coefficient below order m sits at the
/// coefficient-noise floor — i.e. the polynomial is within rounding error
/// of having an exact m-fold root there. Genuinely separate roots leave a
/// Taylor residue far above that floor and stay apart.
fn cluster(p: &CPoly, raw: &[C64]) -> Vec<(C64, usize)> {
    let groups = link(raw, cluster_radius);
    let clusters: Vec<(C64, usize)> = groups
        .into_iter()
        .map(|idx| {
            let m = idx.len();
            let c = idx.iter().map(|&i| raw[i]).sum::<C64>() / (m as f64);
            let c = if m >= 2 { refined_center(p, c, m) } else { c };
            (c, m)
        })
        .collect();

    let centroids: Vec<C64> = clusters.iter().map(|&(c, _)| c).collect();
    let comps = link(&centroids, suspicion_radius);
    let mut merged: Vec<(C64, usize)> = Vec::new();
    for comp in comps {
        if comp.len() == 1 {
            merged.push(clusters[comp[0]]);
            continue;
        }
        let m_total: usize = comp.iter().map(|&i| clusters[i].1).sum();
        let w: f64 = m_total as f64;
        let c0: C64 = comp
            .iter()
            .map(|&i| clusters[i].0 * (clusters[i].1 as f64))
            .sum::<C64>()
            / w;
        let center = refined_center(p, c0, m_total);
        let deg = p.degree().unwrap_or(0);
        let taylor = p.taylor_at(center, m_total);
        let scale = p.max_coeff_norm();
        let in_range = comp
            .iter()
            .all(|&i| (clusters[i].0 - center).norm() <= suspicion_radius(center));
        let noise = |k: usize| 1e-11 * scale * (1.0 + center.norm()).powi((deg - k) as i32);
        let collapses = in_range
            && taylor[m_total].norm() > noise(m_total.min(deg))
            && taylor
                .iter()
                .take(m_total)
                .enumerate()
                .all(|(k, t)| t.norm() <= noise(k));
        if collapses {
            merged.push((center, m_total));
        } else {
            for &i in &comp {
                merged.push(clusters[i]);
            }
        }
    }
    merged
}

/// Newton iteration on the (m-1)-th derivative: the center of an m-fold
/// cluster is a near-root of p^(m-1). Falls back to the start point when
/// the iteration leaves the suspicion neighborhood.
fn refined_center(p: &CPoly, c0: C64, m: usize) -> C64 {
    let mut q = p.clone();
    for _ in 0..m - 1 {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut c = c0;
    for _ in 0..40 {
        let qv = q.eval(c);
        let dv = dq.eval(c);
        if dv.norm() == 0.0 {
            break;
        }
        let step = qv / dv;
        c -= step;
        if step.norm() <= 1e-15 * (1.0 + c.norm()) {
            break;
        }
    }
    if (c - c0).norm() > suspicion_radius(c0) {
        c0
    } else {
        c
    }
}

/// Connected components under `|z_i - z_j| <= radius`.
fn link(points: &[C64], radius: fn(C64) -> f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let r = radius(points[i]).min(radius(points[j]));
            if (points[i] - points[j]).norm() <= r {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups.sort_by_key(|g| g[0]);
    groups
}
