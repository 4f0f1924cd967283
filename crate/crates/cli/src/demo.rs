//! The `demo` verb: regenerates the bundled reference scenarios and asserts
//! their known values, printing one pass line per scenario.

use crate::fmt;
use crate::CliError;
use pjacobi::cpoly::CPoly;
use pjacobi::floquet;
use pjacobi::inverse::{self, InverseProblem};
use pjacobi::operator::JacobiOperator;
use pjacobi::spectral::{self, BorgOutcome, IntervalVerdict};
use pjacobi::{c64, C64};

pub fn run(name: &str, starts: Option<usize>) -> Result<(), CliError> {
    let all = [
        "example1",
        "example2i",
        "example2ii",
        "example3i",
        "example3ii",
        "example3iii",
        "example4",
        "pathological",
        "borg",
    ];
    let selected: Vec<&str> = if name == "all" {
        all.to_vec()
    } else if all.contains(&name) {
        vec![name]
    } else {
        return Err(CliError::Validation(format!(
            "unknown scenario '{name}'; choose one of {} or all",
            all.join(", ")
        )));
    };
    for scenario in selected {
        match scenario {
            "example1" => example1()?,
            "example2i" => example2i()?,
            "example2ii" => example2ii()?,
            "example3i" => example3i(starts)?,
            "example3ii" => example3ii(starts)?,
            "example3iii" => example3iii(starts)?,
            "example4" => example4()?,
            "pathological" => pathological()?,
            "borg" => borg()?,
            _ => unreachable!(),
        }
    }
    Ok(())
}

fn ensure(cond: bool, what: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Computation(format!(
            "demo assertion failed: {what}"
        )))
    }
}

fn example1() -> Result<(), CliError> {
    for alpha in [c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0)] {
        let demo = inverse::ambiguity_demo(alpha)?;
        println!(
            "example1 alpha={}: shared data polynomial [{}], mismatch {:.3e}",
            fmt::complex(alpha),
            fmt::complex_list(demo.dirichlet_poly.coeffs()),
            demo.max_mismatch
        );
        ensure(
            demo.max_mismatch < 1e-9,
            "two potentials share the data pair",
        )?;
        ensure(
            demo.potential_plus
                .iter()
                .zip(&demo.potential_minus)
                .all(|(p, m)| (p - m).norm() > 1.0),
            "the two potentials differ entrywise",
        )?;
    }
    println!("example1 PASS: distinct potentials, identical reduced data");
    Ok(())
}

fn example2i() -> Result<(), CliError> {
    let op = JacobiOperator::new(
        vec![c64(0.0, 1.0), c64(0.0, -1.0)],
        vec![c64(2.0, 0.0), c64(-2.0, 0.0)],
    )?;
    let md = floquet::monodromy(&op)?;
    println!("example2i delta: {}", fmt::complex_list(md.delta.coeffs()));
    ensure(
        md.delta
            .coeff_distance(&CPoly::from_real(&[-2.0, 0.0, 1.0]))
            < 1e-9,
        "discriminant is the free one for N = 2",
    )?;
    let ic = spectral::interval_spectrum_check(&op)?;
    ensure(
        matches!(ic.verdict, IntervalVerdict::Interval { .. }) && ic.endpoints_pm2,
        "spectrum is the segment [-2, 2]",
    )?;
    println!("example2i PASS: spectrum [-2, 2]");
    Ok(())
}

fn example2ii() -> Result<(), CliError> {
    let s = 2.0_f64.sqrt();
    let i = c64(0.0, 1.0);
    let a: Vec<C64> = (0..4).map(|k| c64(1.0, 1.0) / s * i.powu(k)).collect();
    let b: Vec<C64> = (0..4)
        .map(|k| c64(if k % 2 == 0 { s } else { -s }, 0.0))
        .collect();
    let op = JacobiOperator::new(a, b)?;
    let md = floquet::monodromy(&op)?;
    println!("example2ii delta: {}", fmt::complex_list(md.delta.coeffs()));
    ensure(
        md.delta
            .coeff_distance(&CPoly::from_real(&[2.0, 0.0, -4.0, 0.0, 1.0]))
            < 1e-9,
        "discriminant is the free one for N = 4",
    )?;
    let ic = spectral::interval_spectrum_check(&op)?;
    ensure(
        matches!(ic.verdict, IntervalVerdict::Interval { .. }) && ic.endpoints_pm2,
        "spectrum is the segment [-2, 2]",
    )?;
    println!("example2ii PASS: spectrum [-2, 2]");
    Ok(())
}

fn example3i(starts: Option<usize>) -> Result<(), CliError> {
    for (coeffs, n) in [
        (vec![-2.0, 0.0, 1.0], 2usize),
        (vec![0.0, 3.0, 0.0, -1.0], 3),
    ] {
        let problem = InverseProblem::new(CPoly::from_real(&coeffs))?;
        let n_starts = starts.unwrap_or(200 * factorial(n));
        let sols = inverse::solve_inverse(&problem, n_starts, 1)?;
        println!("example3i N={n}: {} solution(s)", sols.solutions.len());
        ensure(sols.solutions.len() == 1, "only the zero potential solves")?;
        ensure(
            sols.solutions[0].iter().all(|z| z.norm() < 1e-6),
            "the unique solution is zero",
        )?;
    }
    println!("example3i PASS: unique zero potential for N = 2 and 3");
    Ok(())
}

fn expected_period_four_solutions() -> Vec<Vec<C64>> {
    let base = [
        c64(1.0, 1.0),
        c64(1.0, -1.0),
        c64(-1.0, 1.0),
        c64(-1.0, -1.0),
    ];
    let mut out = vec![vec![c64(0.0, 0.0); 4]];
    for shift in 0..4 {
        let rotated: Vec<C64> = (0..4).map(|j| base[(j + shift) % 4]).collect();
        out.push(rotated.iter().map(|z| z.conj()).collect());
        out.push(rotated);
    }
    out
}

fn example3ii(starts: Option<usize>) -> Result<(), CliError> {
    let problem = InverseProblem::new(CPoly::from_real(&[2.0, 0.0, -4.0, 0.0, 1.0]))?;
    let n_starts = starts.unwrap_or(200 * factorial(4));
    let sols = inverse::solve_inverse(&problem, n_starts, 1)?;
    println!("example3ii: {} solutions", sols.solutions.len());
    for (s, r) in sols.solutions.iter().zip(&sols.residuals) {
        println!("  [{}]  residual {:.3e}", fmt::complex_list(s), r);
    }
    ensure(sols.solutions.len() == 9, "exactly nine potentials")?;
    let expected = expected_period_four_solutions();
    for want in &expected {
        let hit = sols
            .solutions
            .iter()
            .any(|got| got.iter().zip(want).all(|(g, w)| (g - w).norm() < 1e-6));
        ensure(hit, "every listed potential is found entrywise")?;
    }
    println!("example3ii PASS: 9 potentials (zero + 8 complex)");
    Ok(())
}

fn example3iii(starts: Option<usize>) -> Result<(), CliError> {
    let problem = InverseProblem::new(CPoly::from_real(&[0.0, -5.0, 0.0, 5.0, 0.0, -1.0]))?;
    let n_starts = starts.unwrap_or(200 * factorial(5));
    let sols = inverse::solve_inverse(&problem, n_starts, 1)?;
    println!("example3iii: {} solutions", sols.solutions.len());
    ensure(sols.solutions.len() >= 41, "at least forty-one potentials")?;
    // the golden-ratio family: b = (b1, -i b1, i b1, -b1, 0) with
    // b1 = +-(1/sqrt(phi) + i sqrt(phi)) = +-(1+i) rho, plus conjugates
    let rho = c64(
        (5.0_f64.sqrt() + 2.0).sqrt() / 2.0,
        (5.0_f64.sqrt() - 2.0).sqrt() / 2.0,
    );
    let (p, q) = (c64(1.0, 1.0), c64(1.0, -1.0));
    let head: Vec<C64> = vec![p * rho, q * rho, -q * rho, -p * rho, c64(0.0, 0.0)];
    let tail: Vec<C64> = vec![-p * rho, -q * rho, q * rho, p * rho, c64(0.0, 0.0)];
    let family: Vec<Vec<C64>> = vec![
        head.clone(),
        tail.clone(),
        head.iter().map(|z| z.conj()).collect(),
        tail.iter().map(|z| z.conj()).collect(),
    ];
    for want in &family {
        let hit = sols
            .solutions
            .iter()
            .any(|got| got.iter().zip(want).all(|(g, w)| (g - w).norm() < 1e-6));
        ensure(hit, "the quarter-turn family appears")?;
    }
    println!(
        "example3iii PASS: {} potentials including the quarter-turn family",
        sols.solutions.len()
    );
    Ok(())
}

fn example4() -> Result<(), CliError> {
    // free case: diagonalizable with doubled interior eigenvalues
    let free = JacobiOperator::unperturbed(4);
    let l8 = spectral::double_period_matrix(&free);
    let eigs = spectral::matrix_eigenvalues(&l8)?;
    let spaces = spectral::jordan_structure(&l8, &eigs);
    ensure(
        spaces.iter().all(|s| s.geometric == s.algebraic),
        "free double-period matrix is diagonalizable",
    )?;
    // the complex potential: 2x2 blocks at -sqrt2, 0, sqrt2, simple at +-2
    let op = JacobiOperator::schrodinger(vec![
        c64(1.0, 1.0),
        c64(1.0, -1.0),
        c64(-1.0, 1.0),
        c64(-1.0, -1.0),
    ])?;
    let l8 = spectral::double_period_matrix(&op);
    let eigs = spectral::matrix_eigenvalues(&l8)?;
    let spaces = spectral::jordan_structure(&l8, &eigs);
    for sp in &spaces {
        println!(
            "example4 eigenvalue {}: algebraic {}, geometric {}, generalized {}",
            fmt::complex(sp.lambda),
            sp.algebraic,
            sp.geometric,
            sp.generalized_dim
        );
        if (sp.lambda.norm() - 2.0).abs() < 1e-6 {
            ensure(sp.algebraic == 1 && sp.geometric == 1, "simple at +-2")?;
        } else {
            ensure(
                sp.algebraic == 2 && sp.geometric == 1 && sp.generalized_dim == 2,
                "2x2 blocks at -sqrt2, 0, sqrt2",
            )?;
        }
    }
    println!("example4 PASS: Jordan profile matches");
    Ok(())
}

fn pathological() -> Result<(), CliError> {
    let s = 2.0_f64.sqrt();
    let op = JacobiOperator::schrodinger(vec![
        c64(0.0, 0.0),
        c64(0.0, s),
        c64(0.0, 0.0),
        c64(0.0, -s),
    ])?;
    let ds = spectral::dirichlet_spectrum(&op)?;
    println!(
        "pathological dirichlet roots: {:?}",
        ds.family
            .values
            .roots
            .iter()
            .map(|&(z, m)| format!("{} x{m}", fmt::complex(z)))
            .collect::<Vec<_>>()
    );
    ensure(
        ds.family.values.roots.len() == 1
            && ds.family.values.roots[0].1 == 3
            && ds.family.values.roots[0].0.norm() < 1e-6,
        "triple Dirichlet eigenvalue at zero",
    )?;
    println!("pathological PASS: Dirichlet eigenvalue 0 with multiplicity 3");
    Ok(())
}

fn borg() -> Result<(), CliError> {
    for m in 1..=3usize {
        for k in 0..m {
            let op = JacobiOperator::borg_family(m, k, None)?;
            let bc = spectral::borg_classify(&op)?;
            let st = bc
                .structure
                .as_ref()
                .ok_or_else(|| CliError::Computation("structure recovery failed".into()))?;
            let rho = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
            let want_s2 = c64(1.0, 0.0) - rho;
            println!(
                "borg M={m} k={k}: recovered k={} s^2={} ({})",
                st.k,
                fmt::complex(st.s_squared),
                match &bc.outcome {
                    BorgOutcome::Classified => "classified".to_string(),
                    BorgOutcome::HypothesisNotMet(w) => format!("hypothesis not met: {w}"),
                }
            );
            ensure(st.k == k, "index k recovered")?;
            ensure((st.s_squared - want_s2).norm() < 1e-6, "s^2 recovered")?;
            if k == 0 {
                ensure(
                    bc.outcome == BorgOutcome::Classified && bc.essentially_unperturbed,
                    "k = 0 members are essentially unperturbed",
                )?;
            }
        }
    }
    println!("borg PASS: family structure recovered for M = 1, 2, 3");
    Ok(())
}

fn factorial(n: usize) -> usize {
    (2..=n).product::<usize>().max(1)
}
