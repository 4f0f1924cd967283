//! The Toda isospectral flow on operator coefficients, integrated by
//! classical fourth-order Runge-Kutta in the variables (c, b) = (a^2, b),
//! with a discriminant-conservation audit and the Dirichlet-eigenvalue
//! evolution check in its branch-free squared form.

use crate::cpoly::CPoly;
use crate::floquet;
use crate::operator::JacobiOperator;
use crate::spectral;
use crate::{c64, Error, Result, C64};

/// Flow state: `c(n) = a(n)^2` and the diagonal `b(n)` at time `t`.
#[derive(Clone, Debug)]
pub struct TodaState {
    pub t: f64,
    pub c: Vec<C64>,
    pub b: Vec<C64>,
}

/// Saved states of one integration plus the conservation audit.
#[derive(Clone, Debug)]
pub struct TodaTrajectory {
    pub states: Vec<TodaState>,
    pub step: f64,
    /// Max over saved states of the coefficient-infinity distance of the
    /// discriminant from its initial value; measures integrator error only,
    /// since the flow conserves the discriminant exactly.
    pub discriminant_drift: f64,
    /// Product of a(n) over one period of the initial operator; fixes the
    /// sign when rebuilding `a` from `c` along the flow.
    pub reference_product: C64,
}

/// Right-hand side of the flow:
/// `c'(n) = 2 c(n) [b(n+1) - b(n)]`, `b'(n) = 2 [c(n) - c(n-1)]`.
pub fn toda_rhs(state: &TodaState) -> (Vec<C64>, Vec<C64>) {
    let n = state.c.len();
    let at = |v: &Vec<C64>, j: i64| v[j.rem_euclid(n as i64) as usize];
    let c_dot: Vec<C64> = (0..n as i64)
        .map(|j| 2.0 * at(&state.c, j) * (at(&state.b, j + 1) - at(&state.b, j)))
        .collect();
    let b_dot: Vec<C64> = (0..n as i64)
        .map(|j| 2.0 * (at(&state.c, j) - at(&state.c, j - 1)))
        .collect();
    (c_dot, b_dot)
}

/// Rebuilds a Jacobi operator from a flow state. The discriminant depends
/// on `a` only through `a^2` (up to the sign-flip parity), so any square
/// root works as long as the product of the chosen roots matches the
/// reference product; one sign is flipped when it does not.
pub fn operator_at(state: &TodaState, reference_product: C64) -> Result<JacobiOperator> {
    let mut a: Vec<C64> = state.c.iter().map(|z| z.sqrt()).collect();
    let prod: C64 = a.iter().product();
    if (prod - reference_product).norm() > (prod + reference_product).norm() {
        a[0] = -a[0];
    }
    JacobiOperator::new(a, state.b.clone())
}

/// Integrates the flow from `op0` to `t_end` with fixed step `h`, saving
/// roughly a hundred evenly spaced states. Aborts when some `|c(n)|`
/// falls below 1e-12.
pub fn integrate(op0: &JacobiOperator, t_end: f64, h: f64) -> Result<TodaTrajectory> {
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if !positive(h) || !positive(t_end) {
        return Err(Error::Precondition(
            "integrate needs h > 0 and t_end > 0".into(),
        ));
    }
    let reference_product = op0.prod_a();
    let mut c: Vec<C64> = op0.a_slice().iter().map(|&a| a * a).collect();
    let mut b: Vec<C64> = op0.b_slice().to_vec();

    let total_steps = (t_end / h).ceil() as usize;
    let save_every = (total_steps / 100).max(1);

    let mut states = vec![TodaState {
        t: 0.0,
        c: c.clone(),
        b: b.clone(),
    }];
    let mut t = 0.0;
    for step_idx in 1..=total_steps {
        let dt = h.min(t_end - t);
        rk4_step(&mut c, &mut b, dt);
        t += dt;
        for (j, cj) in c.iter().enumerate() {
            if cj.norm() < 1e-12 {
                return Err(Error::TodaCoefficientVanished { t, index: j });
            }
        }
        if step_idx % save_every == 0 || step_idx == total_steps {
            states.push(TodaState {
                t,
                c: c.clone(),
                b: b.clone(),
            });
        }
    }

    // conservation audit against the initial discriminant
    let delta0 = floquet::monodromy(&operator_at(&states[0], reference_product)?)?.delta;
    let mut drift = 0.0_f64;
    for st in &states[1..] {
        let delta_t = floquet::monodromy(&operator_at(st, reference_product)?)?.delta;
        drift = drift.max(delta_t.coeff_distance(&delta0));
    }
    Ok(TodaTrajectory {
        states,
        step: h,
        discriminant_drift: drift,
        reference_product,
    })
}

fn rk4_step(c: &mut Vec<C64>, b: &mut Vec<C64>, h: f64) {
    let n = c.len();
    let eval = |c: &Vec<C64>, b: &Vec<C64>| {
        toda_rhs(&TodaState {
            t: 0.0,
            c: c.clone(),
            b: b.clone(),
        })
    };
    let add = |x: &Vec<C64>, d: &Vec<C64>, s: f64| -> Vec<C64> {
        (0..n).map(|j| x[j] + d[j] * s).collect()
    };
    let (k1c, k1b) = eval(c, b);
    let (k2c, k2b) = eval(&add(c, &k1c, h / 2.0), &add(b, &k1b, h / 2.0));
    let (k3c, k3b) = eval(&add(c, &k2c, h / 2.0), &add(b, &k2b, h / 2.0));
    let (k4c, k4b) = eval(&add(c, &k3c, h), &add(b, &k3b, h));
    for j in 0..n {
        c[j] += (k1c[j] + 2.0 * k2c[j] + 2.0 * k3c[j] + k4c[j]) * (h / 6.0);
        b[j] += (k1b[j] + 2.0 * k2b[j] + 2.0 * k3b[j] + k4b[j]) * (h / 6.0);
    }
}

/// Result of checking the squared Dirichlet evolution identity
/// `(mu_j')^2 = 4 [delta(mu_j)^2 - 4] prod_{k != j} (mu_j - mu_k)^{-2}`
/// along the saved states by central differences.
#[derive(Clone, Debug)]
pub struct DirichletEvolutionReport {
    pub max_rel_residual: f64,
    pub windows_checked: usize,
    /// Windows skipped because two Dirichlet eigenvalues came within 1e-4
    /// of each other (the identity is singular there).
    pub windows_skipped: usize,
}

/// Verifies the squared evolution identity for the Dirichlet eigenvalues
/// along a trajectory. The identity is branch-free; the discriminant used
/// is the trajectory's own initial one (conserved by the flow).
pub fn dirichlet_evolution_check(traj: &TodaTrajectory) -> Result<DirichletEvolutionReport> {
    if traj.states.len() < 3 {
        return Err(Error::Precondition(
            "dirichlet_evolution_check needs at least 3 saved states".into(),
        ));
    }
    let delta: CPoly =
        floquet::monodromy(&operator_at(&traj.states[0], traj.reference_product)?)?.delta;
    let n = traj.states[0].c.len();
    if n < 2 {
        return Err(Error::Precondition("period must be >= 2".into()));
    }

    // Dirichlet eigenvalues per saved state, tracked across states by
    // nearest-neighbor matching against the previous slice
    let mut tracked: Vec<Vec<C64>> = Vec::with_capacity(traj.states.len());
    let mut simple = vec![true; traj.states.len()];
    for (i, st) in traj.states.iter().enumerate() {
        let op = operator_at(st, traj.reference_product)?;
        let ds = spectral::dirichlet_spectrum(&op)?;
        if ds.family.values.roots.iter().any(|&(_, m)| m > 1) {
            simple[i] = false;
            tracked.push(Vec::new());
            continue;
        }
        let mut pts = ds.family.values.expanded();
        if let Some(prev) = tracked.last().filter(|p| p.len() == pts.len()) {
            pts = match_order(prev, pts);
        } else {
            pts.sort_by(|p, q| (p.re, p.im).partial_cmp(&(q.re, q.im)).unwrap());
        }
        tracked.push(pts);
    }

    let mut max_rel = 0.0_f64;
    let mut checked = 0usize;
    let mut skipped = 0usize;
    for i in 1..traj.states.len() - 1 {
        if !(simple[i - 1] && simple[i] && simple[i + 1]) {
            skipped += 1;
            continue;
        }
        let mus = &tracked[i];
        // the identity is singular at collisions
        let mut min_gap = f64::INFINITY;
        for a in 0..mus.len() {
            for b in a + 1..mus.len() {
                min_gap = min_gap.min((mus[a] - mus[b]).norm());
            }
        }
        if min_gap < 1e-4 {
            skipped += 1;
            continue;
        }
        let dt = traj.states[i + 1].t - traj.states[i - 1].t;
        checked += 1;
        for (j, &mu) in mus.iter().enumerate() {
            let rate = (tracked[i + 1][j] - tracked[i - 1][j]) / dt;
            let lhs = rate * rate;
            let dv = delta.eval(mu);
            let mut prod = c64(1.0, 0.0);
            for (k, &mk) in mus.iter().enumerate() {
                if k != j {
                    prod *= mu - mk;
                }
            }
            let rhs = 4.0 * (dv * dv - 4.0) / (prod * prod);
            let denom = lhs.norm().max(rhs.norm()).max(1e-12);
            max_rel = max_rel.max((lhs - rhs).norm() / denom);
        }
    }
    Ok(DirichletEvolutionReport {
        max_rel_residual: max_rel,
        windows_checked: checked,
        windows_skipped: skipped,
    })
}

/// Reorders `pts` to follow `prev` by greedy nearest neighbor.
fn match_order(prev: &[C64], mut pts: Vec<C64>) -> Vec<C64> {
    let mut out = Vec::with_capacity(pts.len());
    for &p in prev {
        let (best, _) = pts
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| (p - *x).norm().partial_cmp(&(p - *y).norm()).unwrap())
            .unwrap();
        out.push(pts.remove(best));
    }
    out
}
