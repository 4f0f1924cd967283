//! Inverse spectral solvers for the discrete Schroedinger case (a == -1):
//! the multistart Newton solver that finds every N-periodic potential with
//! a prescribed discriminant, the two-spectra reconstruction from two
//! consecutive Dirichlet root sets, and the non-uniqueness demonstrator
//! showing two potentials with identical reduced spectral data.

use crate::cpoly::{CPoly, RootSet};
use crate::floquet;
use crate::linalg::CMat;
use crate::operator::JacobiOperator;
use crate::par;
use crate::{c64, Error, Result, C64};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Prescribed-discriminant problem: find potentials whose Hill discriminant
/// is `target`, a degree-N polynomial with leading coefficient (-1)^N.
#[derive(Clone, Debug)]
pub struct InverseProblem {
    n: usize,
    target: CPoly,
}

impl InverseProblem {
    pub fn new(target: CPoly) -> Result<Self> {
        let n = match target.degree() {
            Some(n) if n >= 1 => n,
            _ => {
                return Err(Error::Precondition(
                    "target discriminant must have degree >= 1".into(),
                ))
            }
        };
        let want = if n % 2 == 0 { 1.0 } else { -1.0 };
        let lead = target.leading().unwrap();
        if (lead - c64(want, 0.0)).norm() > 1e-12 {
            return Err(Error::Precondition(format!(
                "target leading coefficient must be (-1)^N = {want}, got {lead}"
            )));
        }
        // store the leading coefficient exactly
        let mut coeffs = target.coeffs().to_vec();
        *coeffs.last_mut().unwrap() = c64(want, 0.0);
        Ok(InverseProblem {
            n,
            target: CPoly::from_coeffs(coeffs),
        })
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn target(&self) -> &CPoly {
        &self.target
    }
}

/// Deduplicated potentials solving a prescribed-discriminant problem.
#[derive(Clone, Debug)]
pub struct InverseSolutionSet {
    /// Each solution is one period of the potential, lexicographically
    /// sorted by (Re b(0), Im b(0), Re b(1), ...).
    pub solutions: Vec<Vec<C64>>,
    /// Max coefficient mismatch of the achieved discriminant per solution.
    pub residuals: Vec<f64>,
    pub starts_used: usize,
    pub dedup_radius: f64,
    /// Saturation heuristic: the second half of the starts produced nothing
    /// new and the count is within the N! bound. The solver cannot prove
    /// completeness.
    pub complete: bool,
}

/// Hill discriminant of the Schroedinger operator with potential `b`.
pub fn schrodinger_discriminant(b: &[C64]) -> Result<CPoly> {
    let op = JacobiOperator::schrodinger(b.to_vec())?;
    Ok(floquet::monodromy(&op)?.delta)
}

// Coefficient vectors for the fast recursion are flat ascending arrays of
// fixed length n+1; one step applies w -> (b_site - lambda) w - w_prev.
#[inline]
fn poly_step(b_site: C64, cur: &[C64], prev: &[C64], out: &mut [C64]) {
    let len = out.len();
    for k in 0..len {
        let mut v = b_site * cur[k] - prev[k];
        if k >= 1 {
            v -= cur[k - 1];
        }
        out[k] = v;
    }
}

/// Discriminant coefficients 0 .. N-1 by the scalar three-term recursion:
/// `w(m+1) = (b(m) - lambda) w(m) - w(m-1)`, with `u(-1) = 0, u(0) = 1`,
/// `v(-1) = 1, v(0) = 0`, and `delta = u(N) + v(N-1)`.
pub fn discriminant_coeffs(b: &[C64]) -> Vec<C64> {
    let n = b.len();
    let len = n + 1;
    let zero = c64(0.0, 0.0);
    let mut u_prev = vec![zero; len];
    let mut u_cur = vec![zero; len];
    u_cur[0] = c64(1.0, 0.0);
    let mut v_prev = vec![zero; len];
    v_prev[0] = c64(1.0, 0.0);
    let mut v_cur = vec![zero; len];
    let mut v_keep = vec![zero; len];
    let mut scratch = vec![zero; len];

    for (site, &b_site) in b.iter().enumerate() {
        if site == n - 1 {
            v_keep.copy_from_slice(&v_cur);
        }
        poly_step(b_site, &u_cur, &u_prev, &mut scratch);
        std::mem::swap(&mut u_prev, &mut u_cur);
        std::mem::swap(&mut u_cur, &mut scratch);
        poly_step(b_site, &v_cur, &v_prev, &mut scratch);
        std::mem::swap(&mut v_prev, &mut v_cur);
        std::mem::swap(&mut v_cur, &mut scratch);
    }
    (0..n).map(|k| u_cur[k] + v_keep[k]).collect()
}

/// Discriminant coefficients together with their Jacobian
/// `d coeff_k / d b_j` for k, j = 0 .. N-1, by forward differentiation of
/// the three-term recursion.
pub fn discriminant_with_jacobian(b: &[C64]) -> (Vec<C64>, CMat) {
    let n = b.len();
    let len = n + 1;
    let zero = c64(0.0, 0.0);
    let mut u_prev = vec![zero; len];
    let mut u_cur = vec![zero; len];
    u_cur[0] = c64(1.0, 0.0);
    let mut v_prev = vec![zero; len];
    v_prev[0] = c64(1.0, 0.0);
    let mut v_cur = vec![zero; len];
    let mut v_keep = vec![zero; len];
    let mut du_prev = vec![zero; len * n];
    let mut du_cur = vec![zero; len * n];
    let mut dv_prev = vec![zero; len * n];
    let mut dv_cur = vec![zero; len * n];
    let mut dv_keep = vec![zero; len * n];
    let mut scratch = vec![zero; len];

    for (site, &b_site) in b.iter().enumerate() {
        if site == n - 1 {
            v_keep.copy_from_slice(&v_cur);
            dv_keep.copy_from_slice(&dv_cur);
        }
        for j in 0..n {
            let span = j * len..(j + 1) * len;
            poly_step(
                b_site,
                &du_cur[span.clone()],
                &du_prev[span.clone()],
                &mut scratch,
            );
            if j == site {
                for k in 0..len {
                    scratch[k] += u_cur[k];
                }
            }
            du_prev[span.clone()].copy_from_slice(&du_cur[span.clone()]);
            du_cur[span.clone()].copy_from_slice(&scratch);
            poly_step(
                b_site,
                &dv_cur[span.clone()],
                &dv_prev[span.clone()],
                &mut scratch,
            );
            if j == site {
                for k in 0..len {
                    scratch[k] += v_cur[k];
                }
            }
            dv_prev[span.clone()].copy_from_slice(&dv_cur[span.clone()]);
            dv_cur[span].copy_from_slice(&scratch);
        }
        poly_step(b_site, &u_cur, &u_prev, &mut scratch);
        std::mem::swap(&mut u_prev, &mut u_cur);
        std::mem::swap(&mut u_cur, &mut scratch);
        poly_step(b_site, &v_cur, &v_prev, &mut scratch);
        std::mem::swap(&mut v_prev, &mut v_cur);
        std::mem::swap(&mut v_cur, &mut scratch);
    }

    let coeffs: Vec<C64> = (0..n).map(|k| u_cur[k] + v_keep[k]).collect();
    let mut jac = CMat::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            jac[(k, j)] = du_cur[j * len + k] + dv_keep[j * len + k];
        }
    }
    (coeffs, jac)
}

/// Jacobian alone, for callers that already have the discriminant.
pub fn discriminant_jacobian(b: &[C64]) -> CMat {
    discriminant_with_jacobian(b).1
}

fn factorial_capped(n: usize) -> usize {
    let mut f: usize = 1;
    for k in 2..=n {
        f = f.saturating_mul(k);
    }
    f
}

/// Multistart damped Newton on `coeffs(delta_b) - target`. Starts are
/// complex vectors with entries uniform in a disk of radius
/// `2 + max_k |c_k|^{1/N}`; converged solutions are polished to residual
/// 1e-10 and deduplicated at radius 1e-6. Deterministic for a fixed seed
/// regardless of thread count.
pub fn solve_inverse(
    problem: &InverseProblem,
    n_starts: usize,
    seed: u64,
) -> Result<InverseSolutionSet> {
    let n = problem.n;
    let target: Vec<C64> = (0..n).map(|k| problem.target.coeff(k)).collect();
    let radius = 2.0
        + target
            .iter()
            .map(|c| c.norm().powf(1.0 / n as f64))
            .fold(0.0, f64::max);
    const DEDUP_RADIUS: f64 = 1e-6;

    let attempts: Vec<Option<Vec<C64>>> = par::map_indexed(n_starts, |idx| {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (idx as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let start: Vec<C64> = (0..n)
            .map(|_| {
                // uniform over the disk of the stated radius
                let r = radius * rng.random_range(0.0..1.0_f64).sqrt();
                let theta = rng.random_range(0.0..2.0 * std::f64::consts::PI);
                C64::from_polar(r, theta)
            })
            .collect();
        newton_solve(&start, &target)
    });

    // deterministic merge: collect hits with their first start index,
    // sort lexicographically, dedup keeping the earliest discoverer
    let mut hits: Vec<(Vec<C64>, usize)> = attempts
        .into_iter()
        .enumerate()
        .filter_map(|(idx, sol)| sol.map(|s| (s, idx)))
        .collect();
    hits.sort_by(|x, y| lex_cmp(&x.0, &y.0).then(x.1.cmp(&y.1)));
    // groups are averaged: hits at a degenerate solution scatter around it
    // symmetrically at the convergence floor, and the mean cancels that.
    // Hits arrive lexicographically sorted, so a hit's group is almost
    // always the most recently created one; scan from the back.
    struct Group {
        repr: Vec<C64>,
        sum: Vec<C64>,
        count: usize,
        first: usize,
    }
    let mut groups: Vec<Group> = Vec::new();
    for (sol, idx) in hits {
        match groups
            .iter_mut()
            .rev()
            .find(|g| vec_dist(&g.repr, &sol) <= DEDUP_RADIUS)
        {
            Some(g) => {
                for (acc, z) in g.sum.iter_mut().zip(&sol) {
                    *acc += z;
                }
                g.count += 1;
                g.first = g.first.min(idx);
            }
            None => groups.push(Group {
                repr: sol.clone(),
                sum: sol,
                count: 1,
                first: idx,
            }),
        }
    }
    if groups.is_empty() {
        return Err(Error::NoSolutions { starts: n_starts });
    }
    // switch each group's representative to its running mean
    for g in groups.iter_mut() {
        g.repr = g.sum.iter().map(|z| z / g.count as f64).collect();
    }
    // secondary pass: a degenerate solution (rank-deficient Jacobian there)
    // stalls Newton at a scatter wider than the dedup radius, spread along
    // flat directions where the residual sits below measurement noise.
    // Each group is first polished (Levenberg-Marquardt) and symmetrized:
    // the discriminant map is exactly invariant under cyclic shifts (and
    // entrywise conjugation for real targets), a degenerate solution is a
    // fixed point of that group action, and the flat-cone directions are
    // not -- so orbit averaging cancels them. Wider groups then merge only
    // when their refined combined mean still solves the system, which a
    // midpoint of genuinely distinct solutions never does. The radius
    // covers the flat-cone extent of a degenerate solution under the 1e-10
    // hit threshold (quartic cone: 1e-10^{1/4} ~ 6e-3, orbit diameter
    // twice that); merges are residual- and containment-verified, so the
    // width does not collapse genuinely distinct solutions.
    const SECONDARY_RADIUS: f64 = 2e-2;
    let residual_at = |sol: &[C64]| -> f64 {
        let coeffs = discriminant_coeffs(sol);
        coeffs
            .iter()
            .zip(&target)
            .map(|(c, t)| (c - t).norm())
            .fold(0.0, f64::max)
    };
    let target_real = target.iter().all(|c| c.im.abs() <= 1e-12);
    let symmetrize = |sol: &[C64]| -> Vec<C64> {
        let mut members: Vec<Vec<C64>> = Vec::new();
        for k in 0..n {
            let shifted: Vec<C64> = (0..n).map(|j| sol[(j + k) % n]).collect();
            if vec_dist(&shifted, sol) <= SECONDARY_RADIUS {
                members.push(shifted);
            }
        }
        if target_real {
            for k in 0..n {
                let conj_shift: Vec<C64> = (0..n).map(|j| sol[(j + k) % n].conj()).collect();
                if vec_dist(&conj_shift, sol) <= SECONDARY_RADIUS {
                    members.push(conj_shift);
                }
            }
        }
        if members.len() <= 1 {
            return sol.to_vec();
        }
        let count = members.len() as f64;
        let avg: Vec<C64> = (0..n)
            .map(|j| members.iter().map(|m| m[j]).sum::<C64>() / count)
            .collect();
        if residual_at(&avg) <= residual_at(sol).max(1e-10) {
            avg
        } else {
            sol.to_vec()
        }
    };
    let refine = |sol: &[C64]| -> Vec<C64> { symmetrize(&lm_polish(sol, &target)) };

    for g in groups.iter_mut() {
        let mean: Vec<C64> = g.sum.iter().map(|z| z / g.count as f64).collect();
        g.repr = refine(&mean);
    }
    loop {
        let mut merged_any = false;
        let mut i = 0;
        while i < groups.len() {
            let mut j = i + 1;
            while j < groups.len() {
                if vec_dist(&groups[i].repr, &groups[j].repr) > SECONDARY_RADIUS {
                    j += 1;
                    continue;
                }
                let wi = groups[i].count as f64;
                let wj = groups[j].count as f64;
                let mean: Vec<C64> = groups[i]
                    .repr
                    .iter()
                    .zip(&groups[j].repr)
                    .map(|(a, b)| (a * wi + b * wj) / (wi + wj))
                    .collect();
                let cand = refine(&mean);
                if residual_at(&cand) <= 1e-9
                    && vec_dist(&cand, &groups[i].repr) <= SECONDARY_RADIUS
                    && vec_dist(&cand, &groups[j].repr) <= SECONDARY_RADIUS
                {
                    let gj = groups.remove(j);
                    let gi = &mut groups[i];
                    gi.count += gj.count;
                    gi.first = gi.first.min(gj.first);
                    gi.repr = cand;
                    merged_any = true;
                } else {
                    j += 1;
                }
            }
            i += 1;
        }
        if !merged_any {
            break;
        }
    }

    let mut dedup: Vec<(Vec<C64>, usize)> = groups.into_iter().map(|g| (g.repr, g.first)).collect();
    dedup.sort_by(|x, y| lex_cmp(&x.0, &y.0));

    let residuals: Vec<f64> = dedup
        .iter()
        .map(|(sol, _)| {
            let coeffs = discriminant_coeffs(sol);
            coeffs
                .iter()
                .zip(&target)
                .map(|(c, t)| (c - t).norm())
                .fold(0.0, f64::max)
        })
        .collect();
    let bound = factorial_capped(n);
    let complete = dedup.iter().all(|&(_, first)| first < n_starts / 2) && dedup.len() <= bound;

    Ok(InverseSolutionSet {
        solutions: dedup.into_iter().map(|(s, _)| s).collect(),
        residuals,
        starts_used: n_starts,
        dedup_radius: DEDUP_RADIUS,
        complete,
    })
}

/// Levenberg-Marquardt polish of one solution. Newton stalls at degenerate
/// solutions (rank-deficient Jacobian), leaving coordinates near the square
/// root of the residual floor; the damped normal equations keep descending
/// to the attainable floor instead.
fn lm_polish(start: &[C64], target: &[C64]) -> Vec<C64> {
    let n = start.len();
    let residual_vec = |b: &[C64]| -> Vec<C64> {
        discriminant_coeffs(b)
            .iter()
            .zip(target)
            .map(|(c, t)| c - t)
            .collect()
    };
    let norm_inf = |f: &[C64]| f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut b = start.to_vec();
    let mut res = norm_inf(&residual_vec(&b));
    let mut lambda = 1e-8;
    for _ in 0..60 {
        if res <= 1e-14 {
            break;
        }
        let (coeffs, jac) = discriminant_with_jacobian(&b);
        let f: Vec<C64> = coeffs.iter().zip(target).map(|(c, t)| c - t).collect();
        // normal equations (J^H J + lambda I) delta = -J^H f
        let mut lhs = CMat::zeros(n, n);
        let mut rhs = vec![c64(0.0, 0.0); n];
        for i in 0..n {
            for j in 0..n {
                let mut s = c64(0.0, 0.0);
                for k in 0..n {
                    s += jac[(k, i)].conj() * jac[(k, j)];
                }
                lhs[(i, j)] = s;
            }
            lhs[(i, i)] += c64(lambda, 0.0);
            let mut s = c64(0.0, 0.0);
            for k in 0..n {
                s += jac[(k, i)].conj() * f[k];
            }
            rhs[i] = -s;
        }
        let Some(delta) = lhs.solve(&rhs) else { break };
        let cand: Vec<C64> = (0..n).map(|j| b[j] + delta[j]).collect();
        let cr = norm_inf(&residual_vec(&cand));
        if cr < res {
            b = cand;
            res = cr;
            lambda = (lambda / 4.0).max(1e-12);
        } else {
            lambda *= 8.0;
            if lambda > 1e8 {
                break;
            }
        }
    }
    b
}

fn lex_cmp(x: &[C64], y: &[C64]) -> std::cmp::Ordering {
    for (a, b) in x.iter().zip(y) {
        match (a.re, a.im).partial_cmp(&(b.re, b.im)) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn vec_dist(x: &[C64], y: &[C64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}

/// Damped Newton from one start; None when it fails to reach the residual
/// target within the iteration budget. Degenerate solutions (singular
/// Jacobian at the root) converge only linearly, so the iteration keeps
/// pushing until no step improves the residual: this tightens the iterate
/// to the attainable floor and keeps duplicate hits inside the dedup radius.
fn newton_solve(start: &[C64], target: &[C64]) -> Option<Vec<C64>> {
    let n = start.len();
    let mut b = start.to_vec();
    let residual_of = |b: &[C64]| -> f64 {
        discriminant_coeffs(b)
            .iter()
            .zip(target)
            .map(|(c, t)| (c - t).norm())
            .fold(0.0, f64::max)
    };
    let mut res_norm = residual_of(&b);
    let initial_res = res_norm;
    let mut stalled = 0usize;
    for _ in 0..140 {
        if res_norm <= 1e-15 {
            break;
        }
        // divergence guard: wandering starts are abandoned early
        if res_norm > 10.0 * initial_res + 1e3 {
            return None;
        }
        let (coeffs, jac) = discriminant_with_jacobian(&b);
        let f: Vec<C64> = coeffs.iter().zip(target).map(|(c, t)| c - t).collect();
        let rhs: Vec<C64> = f.iter().map(|&z| -z).collect();
        let delta = jac.solve(&rhs)?;
        // step halving, at most 8 times, until the residual drops. Near the
        // floor (where a rank-deficient Jacobian makes full steps erratic)
        // take the best of all scales instead of the first improvement, so
        // degenerate solutions are polished as tightly as rounding allows.
        let endgame = res_norm <= 1e-9;
        let mut best: Option<(f64, Vec<C64>)> = None;
        let mut scale = 1.0;
        for _ in 0..=8 {
            let cand: Vec<C64> = (0..n).map(|j| b[j] + delta[j] * scale).collect();
            let cr = residual_of(&cand);
            if cr < res_norm && best.as_ref().is_none_or(|(br, _)| cr < *br) {
                best = Some((cr, cand));
                if !endgame {
                    break;
                }
            }
            scale *= 0.5;
        }
        match best {
            Some((cr, cand)) => {
                // stagnation guard: a basin that shrinks the residual by
                // less than 3 percent per step and is still far from the
                // target is not worth the remaining budget
                stalled = if cr > 0.97 * res_norm && cr > 1e-8 {
                    stalled + 1
                } else {
                    0
                };
                b = cand;
                res_norm = cr;
            }
            None => break,
        }
        if stalled >= 10 {
            break;
        }
    }
    if res_norm <= 1e-10 {
        Some(b)
    } else {
        None
    }
}

/// Rebuilds the potential from the Dirichlet roots of `v(N)` (N-1 roots)
/// and `v(N+1)` (N roots): the root sums fix `b(N)`, then the three-term
/// recursion runs backwards, reading one diagonal entry off the leading
/// coefficients at each degree drop.
///
/// Returns one period in storage order: index 0 holds `b(N)` and index j
/// holds `b(j)` for j = 1 .. N-1.
pub fn two_spectra_reconstruct(zeros_n: &RootSet, zeros_n1: &RootSet) -> Result<Vec<C64>> {
    let n = zeros_n1.total();
    if n < 2 || zeros_n.total() + 1 != n {
        return Err(Error::InconsistentSpectra(format!(
            "root counts {} and {} are not N-1 and N",
            zeros_n.total(),
            zeros_n1.total()
        )));
    }
    let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut v_hi = CPoly::from_roots(c64(sign(n + 1), 0.0), &zeros_n1.roots); // v(N+1)
    let mut v_lo = CPoly::from_roots(c64(sign(n), 0.0), &zeros_n.roots); // v(N)

    let mut b = vec![c64(0.0, 0.0); n];
    b[0] = zeros_n1.sum() - zeros_n.sum(); // b(N), stored at site 0

    // walk down: from v(j), v(j+1) and b(j) obtain v(j-1), then read b(j-1)
    let mut b_site = b[0];
    for j in (2..=n).rev() {
        // v(j-1) = (b(j) - lambda) v(j) - v(j+1), degree must drop to j-2
        let raw = CPoly::linear(b_site, -c64(1.0, 0.0)).mul(&v_lo).sub(&v_hi);
        let scale = raw.max_coeff_norm().max(1.0);
        let mut coeffs = raw.coeffs().to_vec();
        for (k, c) in coeffs.iter().enumerate().skip(j - 1) {
            if c.norm() > 1e-6 * scale {
                return Err(Error::InconsistentSpectra(format!(
                    "degree drop fails at step {j}: coefficient {k} is {:.3e}",
                    c.norm()
                )));
            }
        }
        coeffs.truncate(j - 1);
        let v_next = CPoly::from_coeffs(coeffs);
        // b(j-1) = (-1)^{j-1} [ coeff_{j-2}(v(j)) + coeff_{j-3}(v(j-1)) ]
        let c_hi = v_lo.coeff(j - 2);
        let c_lo = if j >= 3 {
            v_next.coeff(j - 3)
        } else {
            c64(0.0, 0.0)
        };
        let b_prev = (c_hi + c_lo) * sign(j - 1);
        b[j - 1] = b_prev;
        v_hi = std::mem::replace(&mut v_lo, v_next);
        b_site = b_prev;
    }
    // consistency: the walk must land on v(1) == -1
    if v_lo.degree() != Some(0) || (v_lo.coeff(0) + c64(1.0, 0.0)).norm() > 1e-6 {
        return Err(Error::InconsistentSpectra(format!(
            "terminal value v(1) = {:?} differs from -1",
            v_lo.coeff(0)
        )));
    }
    // b[1] was written by the last loop pass (j = 2) as b(1); b[0] holds b(N)
    Ok(b)
}

/// The two data polynomials of the reduced inverse problem and the pair of
/// distinct potentials producing them.
#[derive(Clone, Debug)]
pub struct AmbiguityDemo {
    pub potential_plus: Vec<C64>,
    pub potential_minus: Vec<C64>,
    /// Shared Dirichlet-type polynomial (chi/gamma normalization) and its
    /// closed form `-l^3 + 3a l^2 - (3a^2 - 7/2) l + a^3 - 7a/2`.
    pub dirichlet_poly: CPoly,
    pub expected_dirichlet: CPoly,
    /// Shared second data polynomial; equals the negated Dirichlet one.
    pub u_data_poly: CPoly,
    /// Max coefficient mismatch over all checks.
    pub max_mismatch: f64,
}

/// Two period-4 potentials differing in every entry that produce identical
/// reduced spectral data, so the data cannot determine the potential.
pub fn ambiguity_demo(alpha: C64) -> Result<AmbiguityDemo> {
    let s = 2.0_f64.sqrt();
    let build = |sigma: f64| -> Vec<C64> {
        vec![
            alpha + s * sigma,
            alpha + s * sigma,
            alpha - s / 2.0 * sigma,
            alpha - s / 2.0 * sigma,
        ]
    };
    let potential_plus = build(1.0);
    let potential_minus = build(-1.0);

    let a2 = alpha * alpha;
    let a3 = a2 * alpha;
    let expected_dirichlet = CPoly::from_coeffs(vec![
        a3 - 3.5 * alpha,
        -(3.0 * a2 - 3.5),
        3.0 * alpha,
        -c64(1.0, 0.0),
    ]);

    let mut max_mismatch = 0.0_f64;
    let mut polys = Vec::new();
    for b in [&potential_plus, &potential_minus] {
        let op = JacobiOperator::schrodinger(b.clone())?;
        let fs = floquet::fundamental_solutions(&op);
        let dirichlet = fs.gamma(4).clone();
        let u_data = fs.chi(5).clone();
        max_mismatch = max_mismatch
            .max(dirichlet.coeff_distance(&expected_dirichlet))
            .max(u_data.coeff_distance(&expected_dirichlet.neg()));
        polys.push((dirichlet, u_data));
    }
    // the two potentials share the data pair and differ entrywise
    max_mismatch = max_mismatch
        .max(polys[0].0.coeff_distance(&polys[1].0))
        .max(polys[0].1.coeff_distance(&polys[1].1));

    let (dirichlet_poly, u_data_poly) = polys.swap_remove(0);
    Ok(AmbiguityDemo {
        potential_plus,
        potential_minus,
        dirichlet_poly,
        expected_dirichlet,
        u_data_poly,
        max_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schrodinger_discriminant_small_cases() {
        // b == 0, N = 4
        let d = schrodinger_discriminant(&[c64(0.0, 0.0); 4]).unwrap();
        assert!(d.coeff_close(&CPoly::from_real(&[2.0, 0.0, -4.0, 0.0, 1.0]), 1e-12));
        // the complex potential with the same discriminant
        let d = schrodinger_discriminant(&[
            c64(1.0, 1.0),
            c64(1.0, -1.0),
            c64(-1.0, 1.0),
            c64(-1.0, -1.0),
        ])
        .unwrap();
        assert!(d.coeff_close(&CPoly::from_real(&[2.0, 0.0, -4.0, 0.0, 1.0]), 1e-9));
        // N = 2 closed form: l^2 - (b1+b2) l + b1 b2 - 2
        let (b1, b2) = (c64(0.3, -0.4), c64(-1.1, 0.9));
        let d = schrodinger_discriminant(&[b1, b2]).unwrap();
        let expect = CPoly::from_coeffs(vec![b1 * b2 - 2.0, -(b1 + b2), c64(1.0, 0.0)]);
        assert!(d.coeff_close(&expect, 1e-12));
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let b = vec![
            c64(0.4, -0.7),
            c64(-1.2, 0.3),
            c64(0.9, 1.1),
            c64(-0.2, -0.5),
        ];
        let n = b.len();
        let (_, jac) = discriminant_with_jacobian(&b);
        let h = 1e-5;
        for j in 0..n {
            // central differences in the real direction give the complex
            // derivative of the analytic map
            let mut bp = b.clone();
            let mut bm = b.clone();
            bp[j] += c64(h, 0.0);
            bm[j] -= c64(h, 0.0);
            let (cp, _) = discriminant_with_jacobian(&bp);
            let (cm, _) = discriminant_with_jacobian(&bm);
            for k in 0..n {
                let fd = (cp[k] - cm[k]) / (2.0 * h);
                assert!(
                    (jac[(k, j)] - fd).norm() <= 1e-6,
                    "entry ({k},{j}): {} vs fd {}",
                    jac[(k, j)],
                    fd
                );
            }
        }
    }

    #[test]
    fn jacobian_known_entries() {
        // N = 2: c1 = -(b1 + b2) so d c1 / d b1 = -1
        let b = vec![c64(0.7, 0.2), c64(-0.3, 0.5)];
        let (_, jac) = discriminant_with_jacobian(&b);
        assert!((jac[(1, 0)] + c64(1.0, 0.0)).norm() < 1e-12);
        assert!((jac[(1, 1)] + c64(1.0, 0.0)).norm() < 1e-12);
        // b == 0: the row for the second-highest coefficient is
        // (-1)^{N-1} (1, ..., 1)
        for n in 2..=5 {
            let b = vec![c64(0.0, 0.0); n];
            let (_, jac) = discriminant_with_jacobian(&b);
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            for j in 0..n {
                assert!(
                    (jac[(n - 1, j)] - c64(sign, 0.0)).norm() < 1e-12,
                    "N = {n}, j = {j}: {}",
                    jac[(n - 1, j)]
                );
            }
        }
    }

    #[test]
    fn solve_inverse_period_two_unique_zero() {
        let problem = InverseProblem::new(CPoly::from_real(&[-2.0, 0.0, 1.0])).unwrap();
        let sols = solve_inverse(&problem, 200, 7).unwrap();
        assert_eq!(sols.solutions.len(), 1, "{:?}", sols.solutions);
        assert!(vec_dist(&sols.solutions[0], &[c64(0.0, 0.0); 2]) < 1e-6);
        assert!(sols.complete);
        assert!(sols.residuals[0] <= 1e-10);
    }

    #[test]
    fn solve_inverse_period_three_unique_zero() {
        let problem = InverseProblem::new(CPoly::from_real(&[0.0, 3.0, 0.0, -1.0])).unwrap();
        let sols = solve_inverse(&problem, 400, 11).unwrap();
        assert_eq!(sols.solutions.len(), 1, "{:?}", sols.solutions);
        assert!(vec_dist(&sols.solutions[0], &[c64(0.0, 0.0); 3]) < 1e-6);
    }

    #[test]
    fn reconstruct_free_potential_from_chebyshev_type_zeros() {
        let op = JacobiOperator::unperturbed(5);
        let fs = floquet::fundamental_solutions(&op);
        let zn = fs.v(5).roots(1e-10).unwrap();
        let zn1 = fs.v(6).roots(1e-10).unwrap();
        let b = two_spectra_reconstruct(&zn, &zn1).unwrap();
        for z in &b {
            assert!(z.norm() < 1e-8, "free potential must come back zero: {z}");
        }
    }

    #[test]
    fn reconstruct_roundtrip_random_complex() {
        let b_true = vec![
            c64(0.8, -0.3),
            c64(-0.4, 0.9),
            c64(1.1, 0.2),
            c64(-0.7, -0.6),
            c64(0.3, 0.5),
            c64(-0.9, 0.1),
        ];
        let op = JacobiOperator::schrodinger(b_true.clone()).unwrap();
        let fs = floquet::fundamental_solutions(&op);
        let n = b_true.len() as i64;
        let zn = fs.v(n).roots(1e-10).unwrap();
        let zn1 = fs.v(n + 1).roots(1e-10).unwrap();
        let b = two_spectra_reconstruct(&zn, &zn1).unwrap();
        for (j, bj) in b.iter().enumerate() {
            assert!(
                (bj - b_true[j]).norm() < 1e-7,
                "site {j}: {bj} vs {}",
                b_true[j]
            );
        }
    }

    #[test]
    fn reconstruct_pathological_triple_zero_data() {
        let s = 2.0_f64.sqrt();
        let b_true = vec![c64(0.0, 0.0), c64(0.0, s), c64(0.0, 0.0), c64(0.0, -s)];
        let op = JacobiOperator::schrodinger(b_true.clone()).unwrap();
        let fs = floquet::fundamental_solutions(&op);
        let zn = fs.v(4).roots(1e-10).unwrap();
        assert_eq!(zn.roots.len(), 1); // the triple zero
        let zn1 = fs.v(5).roots(1e-10).unwrap();
        let b = two_spectra_reconstruct(&zn, &zn1).unwrap();
        for (j, bj) in b.iter().enumerate() {
            assert!((bj - b_true[j]).norm() < 1e-7, "site {j}");
        }
    }

    #[test]
    fn reconstruct_rejects_inconsistent_counts() {
        let zn = RootSet {
            roots: vec![(c64(0.0, 0.0), 2)],
            residual: 0.0,
        };
        let zn1 = RootSet {
            roots: vec![(c64(1.0, 0.0), 2)],
            residual: 0.0,
        };
        assert!(matches!(
            two_spectra_reconstruct(&zn, &zn1),
            Err(Error::InconsistentSpectra(_))
        ));
    }

    #[test]
    fn ambiguity_demo_matches_closed_form() {
        for alpha in [c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0)] {
            let demo = ambiguity_demo(alpha).unwrap();
            assert!(
                demo.max_mismatch < 1e-9,
                "alpha = {alpha}: {}",
                demo.max_mismatch
            );
            // the potentials differ in every entry
            for (p, m) in demo.potential_plus.iter().zip(&demo.potential_minus) {
                assert!((p - m).norm() > 1.0);
            }
        }
        // alpha = 0 closed form: -l^3 + (7/2) l
        let demo = ambiguity_demo(c64(0.0, 0.0)).unwrap();
        assert!(demo
            .dirichlet_poly
            .coeff_close(&CPoly::from_real(&[0.0, 3.5, 0.0, -1.0]), 1e-12));
    }

    #[test]
    fn problem_validation() {
        // wrong leading sign for odd degree
        assert!(InverseProblem::new(CPoly::from_real(&[0.0, 3.0, 0.0, 1.0])).is_err());
        assert!(InverseProblem::new(CPoly::from_real(&[5.0])).is_err());
    }
}
