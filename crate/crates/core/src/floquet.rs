//! Fundamental solutions as polynomials in the spectral parameter, the
//! monodromy matrix and its trace (the Hill discriminant), Floquet
//! multipliers, Floquet solutions, and branch-point extraction.

use crate::cpoly::{CPoly, RootSet};
use crate::operator::JacobiOperator;
use crate::{c64, Error, Result, C64};

/// The four standard solution families of `L w = lambda w`, stored as
/// polynomials in lambda for `n = -1 ..= N+1`.
///
/// `u, v` satisfy `u(-1) = 0, u(0) = 1` and `v(-1) = -1/a(-1), v(0) = 0`;
/// `chi, gamma` satisfy `chi(0) = 1, chi(1) = 0` and `gamma(0) = 0,
/// gamma(1) = 1`.
#[derive(Clone, Debug)]
pub struct FundamentalSolutions {
    n: usize,
    u: Vec<CPoly>,
    v: Vec<CPoly>,
    chi: Vec<CPoly>,
    gamma: Vec<CPoly>,
}

impl FundamentalSolutions {
    pub fn period(&self) -> usize {
        self.n
    }

    fn idx(&self, n: i64) -> usize {
        assert!(
            n >= -1 && n <= self.n as i64 + 1,
            "solution index {n} outside [-1, N+1]"
        );
        (n + 1) as usize
    }

    pub fn u(&self, n: i64) -> &CPoly {
        &self.u[self.idx(n)]
    }

    pub fn v(&self, n: i64) -> &CPoly {
        &self.v[self.idx(n)]
    }

    pub fn chi(&self, n: i64) -> &CPoly {
        &self.chi[self.idx(n)]
    }

    pub fn gamma(&self, n: i64) -> &CPoly {
        &self.gamma[self.idx(n)]
    }
}

/// Monodromy matrix with polynomial entries, its trace `delta`, and
/// `delta^2 - 4` whose roots are the periodic and antiperiodic eigenvalues.
#[derive(Clone, Debug)]
pub struct MonodromyData {
    n: usize,
    /// Row-major 2x2: [[u(N), v(N)], [-a(-1) u(N-1), -a(-1) v(N-1)]].
    pub matrix: [[CPoly; 2]; 2],
    pub delta: CPoly,
    pub delta_sq_minus4: CPoly,
}

impl MonodromyData {
    pub fn period(&self) -> usize {
        self.n
    }

    /// Numeric value of the monodromy matrix at `lambda`.
    pub fn matrix_at(&self, lambda: C64) -> [[C64; 2]; 2] {
        [
            [
                self.matrix[0][0].eval(lambda),
                self.matrix[0][1].eval(lambda),
            ],
            [
                self.matrix[1][0].eval(lambda),
                self.matrix[1][1].eval(lambda),
            ],
        ]
    }
}

/// The two Floquet multipliers at a spectral point, ordered so that
/// `|r1| >= |r2|`, ties broken by argument.
#[derive(Clone, Copy, Debug)]
pub struct MultiplierPair {
    pub r1: C64,
    pub r2: C64,
    pub at: C64,
}

/// Roots of `delta -+ 2` with multiplicities, and the odd-multiplicity ones
/// where the two-valued multiplier branches.
#[derive(Clone, Debug)]
pub struct BranchPoints {
    pub branch_points: RootSet,
    pub periodic: RootSet,
    pub antiperiodic: RootSet,
}

/// A Floquet solution sampled on `n = 0 ..= 2N`, normalized to 1 at n = 0.
#[derive(Clone, Debug)]
pub struct FloquetSolution {
    pub values: Vec<C64>,
    pub multiplier: C64,
    pub at: C64,
}

/// Builds all four solution families by the three-term recursion
/// `w(n+1) = [(lambda - b(n)) w(n) - a(n-1) w(n-1)] / a(n)`,
/// run forward from the initial data and one step backward for chi, gamma.
pub fn fundamental_solutions(op: &JacobiOperator) -> FundamentalSolutions {
    let n = op.period();
    let step_fwd = |site: i64, w_prev: &CPoly, w_cur: &CPoly| -> CPoly {
        let lam_minus_b = CPoly::linear(-op.b(site), c64(1.0, 0.0));
        lam_minus_b
            .mul(w_cur)
            .sub(&w_prev.scale(op.a(site - 1)))
            .scale(c64(1.0, 0.0) / op.a(site))
    };
    // backward: w(n-1) = [(lambda - b(n)) w(n) - a(n) w(n+1)] / a(n-1)
    let step_bwd = |site: i64, w_cur: &CPoly, w_next: &CPoly| -> CPoly {
        let lam_minus_b = CPoly::linear(-op.b(site), c64(1.0, 0.0));
        lam_minus_b
            .mul(w_cur)
            .sub(&w_next.scale(op.a(site)))
            .scale(c64(1.0, 0.0) / op.a(site - 1))
    };

    let run_fwd = |w_m1: CPoly, w_0: CPoly| -> Vec<CPoly> {
        let mut seq = Vec::with_capacity(n + 3);
        seq.push(w_m1);
        seq.push(w_0);
        for site in 0..=(n as i64) {
            let next = step_fwd(site, &seq[seq.len() - 2], &seq[seq.len() - 1]);
            seq.push(next);
        }
        seq
    };

    let u = run_fwd(CPoly::zero(), CPoly::one());
    let v = run_fwd(CPoly::constant(-c64(1.0, 0.0) / op.a(-1)), CPoly::zero());

    // chi, gamma start at n = 0, 1; recover n = -1 by one backward step
    let run_from_01 = |w_0: CPoly, w_1: CPoly| -> Vec<CPoly> {
        let w_m1 = step_bwd(0, &w_0, &w_1);
        let mut seq = vec![w_m1, w_0, w_1];
        for site in 1..=(n as i64) {
            let next = step_fwd(site, &seq[seq.len() - 2], &seq[seq.len() - 1]);
            seq.push(next);
        }
        seq
    };
    let chi = run_from_01(CPoly::one(), CPoly::zero());
    let gamma = run_from_01(CPoly::zero(), CPoly::one());

    FundamentalSolutions {
        n,
        u,
        v,
        chi,
        gamma,
    }
}

/// Monodromy matrix and discriminant. The trace is computed from both
/// solution bases, `u(N) - a(-1) v(N-1)` and `chi(N) + gamma(N+1)`, and the
/// two forms are cross-validated before either is returned.
pub fn monodromy(op: &JacobiOperator) -> Result<MonodromyData> {
    let fs = fundamental_solutions(op);
    monodromy_from(op, &fs)
}

/// Same as [`monodromy`] when the fundamental solutions are already built.
pub fn monodromy_from(op: &JacobiOperator, fs: &FundamentalSolutions) -> Result<MonodromyData> {
    let n = op.period() as i64;
    let a_m1 = op.a(-1);
    let matrix = [
        [fs.u(n).clone(), fs.v(n).clone()],
        [fs.u(n - 1).scale(-a_m1), fs.v(n - 1).scale(-a_m1)],
    ];
    let delta = matrix[0][0].add(&matrix[1][1]);
    let delta_alt = fs.chi(n).add(fs.gamma(n + 1));
    if !delta.coeff_close(&delta_alt, 1e-8) {
        return Err(Error::DiscriminantMismatch(
            delta.coeff_distance(&delta_alt),
        ));
    }
    let four = CPoly::constant(c64(4.0, 0.0));
    let delta_sq_minus4 = delta.mul(&delta).sub(&four);
    Ok(MonodromyData {
        n: op.period(),
        matrix,
        delta,
        delta_sq_minus4,
    })
}

/// Closed-form discriminant of the free operator, through the recursion
/// `D_{k+1} = -lambda D_k - D_{k-1}`, `D_0 = 2`, `D_1 = -lambda`.
pub fn unperturbed_discriminant(n: usize) -> CPoly {
    let mut d_prev = CPoly::constant(c64(2.0, 0.0));
    let mut d_cur = CPoly::linear(c64(0.0, 0.0), c64(-1.0, 0.0));
    if n == 0 {
        return d_prev;
    }
    let neg_lambda = CPoly::linear(c64(0.0, 0.0), c64(-1.0, 0.0));
    for _ in 1..n {
        let next = neg_lambda.mul(&d_cur).sub(&d_prev);
        d_prev = d_cur;
        d_cur = next;
    }
    d_cur
}

/// The two roots of `r^2 - delta(lambda) r + 1`, ordered by modulus with
/// ties broken by argument. Their product is 1 by construction.
pub fn multipliers_at(md: &MonodromyData, lambda: C64) -> MultiplierPair {
    let d = md.delta.eval(lambda);
    let s = (d * d - c64(4.0, 0.0)).sqrt();
    // avoid cancellation: take the half with the larger magnitude first
    let big = if (d + s).norm() >= (d - s).norm() {
        (d + s) / 2.0
    } else {
        (d - s) / 2.0
    };
    let (mut r1, mut r2) = if big.norm() == 0.0 {
        // delta = +-2 exactly and s = 0: double multiplier d/2
        (d / 2.0, d / 2.0)
    } else {
        (big, 1.0 / big)
    };
    let close = (r1.norm() - r2.norm()).abs() <= 1e-12 * (r1.norm() + r2.norm());
    if r1.norm() < r2.norm() || (close && r1.arg() < r2.arg()) {
        std::mem::swap(&mut r1, &mut r2);
    }
    MultiplierPair { r1, r2, at: lambda }
}

/// Periodic and antiperiodic eigenvalues (roots of `delta -+ 2`) and the
/// branch points of the multiplier: the odd-multiplicity roots among them.
pub fn branch_points(md: &MonodromyData) -> Result<BranchPoints> {
    let two = CPoly::constant(c64(2.0, 0.0));
    let periodic = md.delta.sub(&two).roots(1e-9)?;
    let antiperiodic = md.delta.add(&two).roots(1e-9)?;
    let mut odd: Vec<(C64, usize)> = Vec::new();
    for set in [&periodic, &antiperiodic] {
        for &(z, m) in &set.roots {
            if m % 2 == 1 {
                odd.push((z, m));
            }
        }
    }
    odd.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let residual = periodic.residual.max(antiperiodic.residual);
    Ok(BranchPoints {
        branch_points: RootSet {
            roots: odd,
            residual,
        },
        periodic,
        antiperiodic,
    })
}

/// Scalar values of a solution of `L w = lambda w` for `n = 0 ..= up_to`,
/// from the two seed values `w(-1)`, `w(0)`.
fn run_scalar(op: &JacobiOperator, lambda: C64, w_m1: C64, w_0: C64, up_to: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(up_to + 2);
    out.push(w_m1);
    out.push(w_0);
    for site in 0..up_to as i64 {
        let w_prev = out[out.len() - 2];
        let w_cur = out[out.len() - 1];
        let next = ((lambda - op.b(site)) * w_cur - op.a(site - 1) * w_prev) / op.a(site);
        out.push(next);
    }
    out.remove(0);
    out
}

/// Floquet solution `phi(n) = u(n) - [(u(N) - r)/v(N)] v(n)` on
/// `n = 0 ..= 2N`, normalized to `phi(0) = 1`; `branch` 1 or 2 picks the
/// multiplier. Near a coexistence point (monodromy = +-identity) the
/// formula is a 0/0 limit and is evaluated by l'Hopital instead; a vanishing
/// `v(N)` without coexistence is a genuine pole and reports the Dirichlet
/// eigenvalue.
pub fn floquet_solution_at(
    op: &JacobiOperator,
    lambda: C64,
    branch: u8,
) -> Result<FloquetSolution> {
    assert!(branch == 1 || branch == 2, "branch must be 1 or 2");
    let n = op.period();
    let fs = fundamental_solutions(op);
    let md = monodromy_from(op, &fs)?;
    let mult = multipliers_at(&md, lambda);
    let r = if branch == 1 { mult.r1 } else { mult.r2 };

    let u_n = fs.u(n as i64).eval(lambda);
    let v_n = fs.v(n as i64).eval(lambda);
    let pole_tol = 1e-9 * (1.0 + lambda.norm()).powi(n as i32 - 1);

    let u_vals = run_scalar(op, lambda, c64(0.0, 0.0), c64(1.0, 0.0), 2 * n);
    let v_vals = run_scalar(op, lambda, -c64(1.0, 0.0) / op.a(-1), c64(0.0, 0.0), 2 * n);

    let beta = if v_n.norm() >= pole_tol {
        -(u_n - r) / v_n
    } else {
        // v(N) ~ 0: either coexistence (S = +-I, all solutions Floquet) or a
        // true pole of the Floquet solution at a Dirichlet eigenvalue.
        let s_val = md.matrix_at(lambda);
        let sign = if (s_val[0][0] - c64(1.0, 0.0)).norm() <= (s_val[0][0] + c64(1.0, 0.0)).norm() {
            1.0
        } else {
            -1.0
        };
        let coexistence = [
            (s_val[0][0] - c64(sign, 0.0)).norm(),
            s_val[0][1].norm(),
            s_val[1][0].norm(),
            (s_val[1][1] - c64(sign, 0.0)).norm(),
        ]
        .iter()
        .fold(0.0_f64, |m, &x| m.max(x))
            <= 1e-7;
        if !coexistence {
            return Err(Error::FloquetPole { lambda });
        }
        // l'Hopital along the branch: beta -> (r' - u_lambda(N)) / v_lambda(N)
        // with 2 r'^2 = delta''(lambda) r.
        let du = fs.u(n as i64).derivative().eval(lambda);
        let dv = fs.v(n as i64).derivative().eval(lambda);
        if dv.norm() < pole_tol {
            return Err(Error::FloquetPole { lambda });
        }
        let ddelta2 = md.delta.derivative().derivative().eval(lambda);
        let r_prime = (ddelta2 * r / 2.0).sqrt();
        let beta_plus = (r_prime - du) / dv;
        let beta_minus = (-r_prime - du) / dv;
        // deterministic branch labeling through phi(1) = u(1) + beta v(1)
        let phi1 = |beta: C64| u_vals[1] + beta * v_vals[1];
        let (p, m) = (phi1(beta_plus), phi1(beta_minus));
        let plus_first = (p.im, p.re) >= (m.im, m.re);
        match (branch, plus_first) {
            (1, true) | (2, false) => beta_plus,
            _ => beta_minus,
        }
    };

    let values: Vec<C64> = (0..=2 * n).map(|j| u_vals[j] + beta * v_vals[j]).collect();
    Ok(FloquetSolution {
        values,
        multiplier: r,
        at: lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::JacobiOperator;

    fn unperturbed_md(n: usize) -> MonodromyData {
        monodromy(&JacobiOperator::unperturbed(n)).unwrap()
    }

    #[test]
    fn discriminant_of_free_operator_small_n() {
        // N = 1: one step of the recursion gives -lambda
        assert!(unperturbed_md(1)
            .delta
            .coeff_close(&CPoly::from_real(&[0.0, -1.0]), 1e-12));
        assert!(unperturbed_md(2)
            .delta
            .coeff_close(&CPoly::from_real(&[-2.0, 0.0, 1.0]), 1e-12));
        assert!(unperturbed_md(3)
            .delta
            .coeff_close(&CPoly::from_real(&[0.0, 3.0, 0.0, -1.0]), 1e-12));
    }

    #[test]
    fn closed_form_matches_recursion_up_to_twelve() {
        for n in 1..=12 {
            let rec = unperturbed_md(n).delta;
            let closed = unperturbed_discriminant(n);
            assert!(
                rec.coeff_close(&closed, 1e-10),
                "N = {n}: {:?} vs {:?}",
                rec.coeffs(),
                closed.coeffs()
            );
        }
    }

    #[test]
    fn closed_form_small_cases() {
        assert!(unperturbed_discriminant(3)
            .coeff_close(&CPoly::from_real(&[0.0, 3.0, 0.0, -1.0]), 1e-14));
        assert!(unperturbed_discriminant(4)
            .coeff_close(&CPoly::from_real(&[2.0, 0.0, -4.0, 0.0, 1.0]), 1e-14));
        assert!(unperturbed_discriminant(5)
            .coeff_close(&CPoly::from_real(&[0.0, -5.0, 0.0, 5.0, 0.0, -1.0]), 1e-14));
    }

    #[test]
    fn quarter_turn_operator_discriminant() {
        // N = 2, a(n) = i(-1)^n, b(n) = 2(-1)^n has the free discriminant
        let op = JacobiOperator::new(
            vec![crate::c64(0.0, 1.0), crate::c64(0.0, -1.0)],
            vec![crate::c64(2.0, 0.0), crate::c64(-2.0, 0.0)],
        )
        .unwrap();
        let md = monodromy(&op).unwrap();
        assert!(md
            .delta
            .coeff_close(&CPoly::from_real(&[-2.0, 0.0, 1.0]), 1e-9));
    }

    #[test]
    fn complex_potential_discriminant() {
        // a = -1 with potential (1+i, 1-i, -1+i, -1-i)
        let b = vec![
            crate::c64(1.0, 1.0),
            crate::c64(1.0, -1.0),
            crate::c64(-1.0, 1.0),
            crate::c64(-1.0, -1.0),
        ];
        let op = JacobiOperator::schrodinger(b).unwrap();
        let md = monodromy(&op).unwrap();
        assert!(md
            .delta
            .coeff_close(&CPoly::from_real(&[2.0, 0.0, -4.0, 0.0, 1.0]), 1e-9));
    }

    #[test]
    fn chi_gamma_values_at_minus_two() {
        // free operator: chi(n; -2) = 1 - n and gamma(n; -2) = n
        let op = JacobiOperator::unperturbed(5);
        let fs = fundamental_solutions(&op);
        for n in -1..=6_i64 {
            let chi = fs.chi(n).eval(crate::c64(-2.0, 0.0));
            let gam = fs.gamma(n).eval(crate::c64(-2.0, 0.0));
            assert!((chi - crate::c64(1.0 - n as f64, 0.0)).norm() < 1e-10);
            assert!((gam - crate::c64(n as f64, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn v_at_one_is_reciprocal_leading_coefficient() {
        let op = JacobiOperator::new(
            vec![
                crate::c64(0.5, 0.25),
                crate::c64(-1.0, 1.0),
                crate::c64(2.0, 0.0),
            ],
            vec![
                crate::c64(0.1, 0.0),
                crate::c64(0.0, 0.2),
                crate::c64(-0.3, 0.0),
            ],
        )
        .unwrap();
        let fs = fundamental_solutions(&op);
        let v1 = fs.v(1);
        assert_eq!(v1.degree(), Some(0));
        assert!((v1.coeff(0) - 1.0 / op.a(0)).norm() < 1e-14);
    }

    #[test]
    fn gamma_leading_form_free_case() {
        // gamma(n) = (-1)^{n-1} lambda^{n-1} + (-1)^n (n-2) lambda^{n-3} + ...
        let op = JacobiOperator::unperturbed(4);
        let fs = fundamental_solutions(&op);
        for n in 3..=5_i64 {
            let g = fs.gamma(n);
            let deg = (n - 1) as usize;
            assert_eq!(g.degree(), Some(deg));
            let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
            assert!((g.coeff(deg) - crate::c64(sign, 0.0)).norm() < 1e-12);
            assert!((g.coeff(deg - 2) - crate::c64(-sign * (n - 2) as f64, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn multiplier_pair_basics() {
        let md = unperturbed_md(3);
        // at a point with delta = 2 the multiplier is the double root 1
        let lam = crate::c64(-2.0, 0.0); // delta_3(-2) = 8 - 6 = 2
        let m = multipliers_at(&md, lam);
        assert!((m.r1 - crate::c64(1.0, 0.0)).norm() < 1e-7);
        assert!((m.r2 - crate::c64(1.0, 0.0)).norm() < 1e-7);
        // generic point: product is 1, ordering by modulus
        let m = multipliers_at(&md, crate::c64(0.3, 0.7));
        assert!((m.r1 * m.r2 - crate::c64(1.0, 0.0)).norm() < 1e-10);
        assert!(m.r1.norm() >= m.r2.norm());
        let d = md.delta.eval(crate::c64(0.3, 0.7));
        assert!((m.r1 + m.r2 - d).norm() < 1e-10);
    }

    #[test]
    fn multiplier_growth_at_large_lambda() {
        // one branch grows like (-1)^N lambda^N, within 10 percent at lambda = 10
        for n in 2..=5 {
            let md = unperturbed_md(n);
            let lam = crate::c64(10.0, 0.0);
            let m = multipliers_at(&md, lam);
            let expect = lam.powu(n as u32) * if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!(
                (m.r1 - expect).norm() <= 0.10 * expect.norm(),
                "N = {n}: r1 = {}, expected ~ {}",
                m.r1,
                expect
            );
        }
    }

    #[test]
    fn multiplier_logarithmic_derivative_identity() {
        // r'/r = delta' / sqrt(delta^2 - 4) up to the square-root branch,
        // checked by finite differences away from branch points
        let op = JacobiOperator::new(
            vec![
                crate::c64(-1.1, 0.4),
                crate::c64(0.9, -0.3),
                crate::c64(-0.7, 0.6),
            ],
            vec![
                crate::c64(0.5, 0.2),
                crate::c64(-0.3, 0.8),
                crate::c64(0.4, -0.5),
            ],
        )
        .unwrap();
        let md = monodromy(&op).unwrap();
        let lam = crate::c64(0.8, 1.1);
        let h = 1e-6;
        let r0 = multipliers_at(&md, lam).r1;
        let rp = multipliers_at(&md, lam + crate::c64(h, 0.0)).r1;
        let rm = multipliers_at(&md, lam - crate::c64(h, 0.0)).r1;
        let log_deriv = (rp - rm) / (2.0 * h) / r0;
        let dv = md.delta.eval(lam);
        let rhs = md.delta.derivative().eval(lam) / (dv * dv - crate::c64(4.0, 0.0)).sqrt();
        let err = (log_deriv - rhs).norm().min((log_deriv + rhs).norm());
        assert!(err < 1e-5, "log derivative mismatch {err:.3e}");
    }

    #[test]
    fn branch_points_of_free_operator() {
        for n in 2..=6 {
            let bp = branch_points(&unperturbed_md(n)).unwrap();
            let pts = &bp.branch_points.roots;
            assert_eq!(pts.len(), 2, "N = {n}: {:?}", pts);
            assert!((pts[0].0 - crate::c64(-2.0, 0.0)).norm() < 1e-7);
            assert!((pts[1].0 - crate::c64(2.0, 0.0)).norm() < 1e-7);
            // total periodic + antiperiodic count is 2N
            assert_eq!(bp.periodic.total() + bp.antiperiodic.total(), 2 * n);
        }
    }

    #[test]
    fn floquet_solution_at_interior_coexistence_point() {
        // free operator, lambda_k = -2 cos(pi k / N): phi(n) = e^{i pi k n / N}
        let n = 5usize;
        let op = JacobiOperator::unperturbed(n);
        for k in 1..n {
            let lam = crate::c64(
                -2.0 * (std::f64::consts::PI * k as f64 / n as f64).cos(),
                0.0,
            );
            let sol = floquet_solution_at(&op, lam, 1).unwrap();
            for j in 0..=2 * n {
                let expect = C64::from_polar(1.0, std::f64::consts::PI * (k * j) as f64 / n as f64);
                assert!(
                    (sol.values[j] - expect).norm() < 1e-7,
                    "k = {k}, n = {j}: got {}, want {}",
                    sol.values[j],
                    expect
                );
            }
        }
    }

    #[test]
    fn floquet_solution_at_band_edge_is_constant() {
        // at lambda = -2 the free operator has the single solution phi == 1
        let op = JacobiOperator::unperturbed(4);
        let sol = floquet_solution_at(&op, crate::c64(-2.0, 0.0), 1).unwrap();
        for v in &sol.values {
            assert!((v - crate::c64(1.0, 0.0)).norm() < 1e-8);
        }
        assert!((sol.multiplier - crate::c64(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn floquet_solution_satisfies_recursion_and_quasiperiodicity() {
        let op = JacobiOperator::new(
            vec![
                crate::c64(-1.2, 0.3),
                crate::c64(0.8, -0.5),
                crate::c64(-0.6, 0.9),
            ],
            vec![
                crate::c64(0.4, 0.1),
                crate::c64(-0.2, 0.6),
                crate::c64(0.9, -0.4),
            ],
        )
        .unwrap();
        let lam = crate::c64(0.37, 0.81);
        for branch in [1u8, 2] {
            let sol = floquet_solution_at(&op, lam, branch).unwrap();
            let n = op.period();
            assert!((sol.values[0] - crate::c64(1.0, 0.0)).norm() < 1e-12);
            // recursion residual
            for j in 1..2 * n {
                let site = j as i64;
                let lhs = op.a(site) * sol.values[j + 1]
                    + op.a(site - 1) * sol.values[j - 1]
                    + op.b(site) * sol.values[j];
                let res = (lhs - lam * sol.values[j]).norm();
                assert!(res < 1e-9, "site {j}: residual {res}");
            }
            // phi(n + N) = r phi(n)
            for j in 0..=n {
                let res = (sol.values[j + n] - sol.multiplier * sol.values[j]).norm();
                assert!(res < 1e-8 * (1.0 + sol.values[j].norm()));
            }
        }
    }

    #[test]
    fn interior_point_of_period_two_free_operator_is_coexistence() {
        // lambda = 0 has S(0) = -I for the N = 2 free operator, so the
        // solution is the quarter-turn exponential i^n even though v(2; 0) = 0
        let op = JacobiOperator::unperturbed(2);
        let sol = floquet_solution_at(&op, crate::c64(0.0, 0.0), 1).unwrap();
        for (j, v) in sol.values.iter().enumerate() {
            let expect = crate::c64(0.0, 1.0).powu(j as u32);
            assert!((v - expect).norm() < 1e-8, "n = {j}: {v}");
        }
    }

    #[test]
    fn pole_reported_at_dirichlet_point_without_coexistence() {
        // a == -1, b(n) = (i^n - (-i)^n)/sqrt(2): v(4; lambda) = lambda^3, and
        // lambda = 0 is a Dirichlet eigenvalue where the monodromy matrix is
        // not +-I, so the Floquet solution genuinely has a pole there.
        let s = 2.0_f64.sqrt();
        let op = JacobiOperator::schrodinger(vec![
            crate::c64(0.0, 0.0),
            crate::c64(0.0, s),
            crate::c64(0.0, 0.0),
            crate::c64(0.0, -s),
        ])
        .unwrap();
        let err = floquet_solution_at(&op, crate::c64(0.0, 0.0), 1);
        assert!(matches!(err, Err(Error::FloquetPole { .. })));
    }
}
