//! The computational verbs: each loads its input, runs the library, prints
//! a human-readable summary, and writes machine-readable JSON or CSV.

use crate::fmt;
use crate::json::{self, from_c64, write_output};
use crate::svg::SvgPlot;
use crate::CliError;
use pjacobi::floquet;
use pjacobi::inverse::{self, InverseProblem};
use pjacobi::spectral::{self, BorgOutcome, EigenStructure};
use pjacobi::toda as toda_mod;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

pub fn discriminant(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let op = json::load_operator(input)?;
    let md = floquet::monodromy(&op)?;
    println!(
        "delta coefficients (ascending): {}",
        fmt::complex_list(md.delta.coeffs())
    );
    #[derive(Serialize)]
    struct Out {
        n: usize,
        delta: Vec<json::CJson>,
    }
    let out = Out {
        n: op.period(),
        delta: md.delta.coeffs().iter().map(|&z| from_c64(z)).collect(),
    };
    write_output(output, &json::to_pretty(&out))
}

pub fn spectrum(
    input: &Path,
    slices: usize,
    output: Option<&Path>,
    svg: Option<&Path>,
) -> Result<(), CliError> {
    let op = json::load_operator(input)?;
    let md = floquet::monodromy(&op)?;
    let arcs = spectral::trace_spectrum(&md, slices)?;

    let mut csv = String::from("kappa,re,im,arc_id\n");
    for (arc_id, arc) in arcs.arcs.iter().enumerate() {
        for &(kappa, z) in arc {
            let _ = writeln!(
                csv,
                "{},{},{},{arc_id}",
                fmt::sig12(kappa),
                fmt::sig12(z.re),
                fmt::sig12(z.im)
            );
        }
    }
    println!(
        "{} arcs, {} points, {} exceptional kappa values",
        arcs.arcs.len(),
        arcs.points().count(),
        arcs.exceptional_kappas.len()
    );
    if let Some(svg_path) = svg {
        let mut plot = SvgPlot::new();
        for arc in &arcs.arcs {
            plot.polyline(arc.iter().map(|&(_, z)| (z.re, z.im)).collect());
        }
        for &(z, _) in &floquet::branch_points(&md)?.branch_points.roots {
            plot.point((z.re, z.im));
        }
        std::fs::write(svg_path, plot.render())
            .map_err(|e| CliError::Validation(format!("cannot write svg: {e}")))?;
    }
    write_output(output, csv.trim_end())
}

pub fn eigs(input: &Path, kappa: Option<f64>, output: Option<&Path>) -> Result<(), CliError> {
    let op = json::load_operator(input)?;
    let md = floquet::monodromy(&op)?;
    let families = match kappa {
        Some(k) => vec![spectral::floquet_spectrum(&md, k)?],
        None => vec![
            spectral::floquet_spectrum(&md, 0.0)?,
            spectral::floquet_spectrum(&md, std::f64::consts::PI)?,
        ],
    };
    for fam in &families {
        let label = match fam.kind {
            spectral::FamilyKind::Periodic => "periodic".to_string(),
            spectral::FamilyKind::Antiperiodic => "antiperiodic".to_string(),
            spectral::FamilyKind::Dirichlet => "dirichlet".to_string(),
            spectral::FamilyKind::Floquet(k) => format!("floquet kappa={}", fmt::sig12(k)),
        };
        let pts: Vec<String> = fam
            .values
            .roots
            .iter()
            .map(|&(z, m)| format!("{} (x{m})", fmt::complex(z)))
            .collect();
        println!("{label}: {}", pts.join(", "));
    }
    #[derive(Serialize)]
    struct Out {
        families: Vec<json::FamilyJson>,
    }
    let out = Out {
        families: families.iter().map(json::family_json).collect(),
    };
    write_output(output, &json::to_pretty(&out))
}

pub fn dirichlet(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let op = json::load_operator(input)?;
    let ds = spectral::dirichlet_spectrum(&op)?;
    let ti = spectral::trace_identities(&op)?;
    let pts: Vec<String> = ds
        .family
        .values
        .roots
        .iter()
        .map(|&(z, m)| format!("{} (x{m})", fmt::complex(z)))
        .collect();
    println!("dirichlet eigenvalues: {}", pts.join(", "));
    println!(
        "trace identity residuals: window {:.3e}, mean {:.3e}, periodic {:.3e}, combined {:.3e}",
        ti.dirichlet_vs_window, ti.dirichlet_vs_mean, ti.periodic_vs_mean, ti.combined
    );
    #[derive(Serialize)]
    struct Out {
        family: json::FamilyJson,
        factored_residual: f64,
        trace_identities: TraceOut,
    }
    #[derive(Serialize)]
    struct TraceOut {
        dirichlet_vs_window: f64,
        dirichlet_vs_mean: f64,
        periodic_vs_mean: f64,
        combined: f64,
    }
    let out = Out {
        family: json::family_json(&ds.family),
        factored_residual: ds.factored_residual,
        trace_identities: TraceOut {
            dirichlet_vs_window: ti.dirichlet_vs_window,
            dirichlet_vs_mean: ti.dirichlet_vs_mean,
            periodic_vs_mean: ti.periodic_vs_mean,
            combined: ti.combined,
        },
    };
    write_output(output, &json::to_pretty(&out))
}

pub fn classify(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let op = json::load_operator(input)?;
    let md = floquet::monodromy(&op)?;
    let bp = floquet::branch_points(&md)?;

    #[derive(Serialize)]
    struct PointOut {
        lambda: json::CJson,
        multiplier: f64,
        structure: String,
        branch_point: bool,
        pathology_second_kind: bool,
    }
    let mut points = Vec::new();
    for set in [&bp.periodic, &bp.antiperiodic] {
        for &(z, _) in &set.roots {
            let cl = spectral::classify_eigenvalue(&op, z)?;
            points.push(PointOut {
                lambda: from_c64(z),
                multiplier: cl.multiplier.re,
                structure: match cl.structure {
                    EigenStructure::Coexistence => "coexistence".into(),
                    EigenStructure::Jordan => "jordan".into(),
                },
                branch_point: cl.branch_point,
                pathology_second_kind: cl.pathology_second_kind,
            });
            let last = points.last().unwrap();
            println!(
                "{}  multiplier {}  {}  branch_point={} second_kind={}",
                fmt::complex(z),
                last.multiplier,
                last.structure,
                last.branch_point,
                last.pathology_second_kind
            );
        }
    }

    let l2n = spectral::double_period_matrix(&op);
    let eigs = spectral::matrix_eigenvalues(&l2n)?;
    let spaces = spectral::jordan_structure(&l2n, &eigs);
    #[derive(Serialize)]
    struct SpaceOut {
        lambda: json::CJson,
        algebraic: usize,
        geometric: usize,
        generalized_dim: usize,
        borderline: bool,
    }
    let spaces_out: Vec<SpaceOut> = spaces
        .iter()
        .map(|s| SpaceOut {
            lambda: from_c64(s.lambda),
            algebraic: s.algebraic,
            geometric: s.geometric,
            generalized_dim: s.generalized_dim,
            borderline: s.borderline,
        })
        .collect();
    let diagonalizable = spaces.iter().all(|s| s.geometric == s.algebraic);
    println!("double-period matrix diagonalizable: {diagonalizable}");

    let bc = spectral::borg_classify(&op)?;
    #[derive(Serialize)]
    struct BorgOut {
        interval_premise: bool,
        endpoints_pm2: bool,
        diagonalizable: Option<bool>,
        b_residual: f64,
        essentially_unperturbed: bool,
        outcome: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        structure: Option<BorgStructOut>,
    }
    #[derive(Serialize)]
    struct BorgStructOut {
        m: usize,
        k: usize,
        s: json::CJson,
        s_squared: json::CJson,
        k_residual: f64,
    }
    let borg = BorgOut {
        interval_premise: bc.interval_premise,
        endpoints_pm2: bc.endpoints_pm2,
        diagonalizable: bc.diagonalizable,
        b_residual: bc.b_residual,
        essentially_unperturbed: bc.essentially_unperturbed,
        outcome: match &bc.outcome {
            BorgOutcome::Classified => "classified".into(),
            BorgOutcome::HypothesisNotMet(why) => format!("hypothesis not met: {why}"),
        },
        structure: bc.structure.as_ref().map(|st| BorgStructOut {
            m: st.m,
            k: st.k,
            s: from_c64(st.s),
            s_squared: from_c64(st.s_squared),
            k_residual: st.k_residual,
        }),
    };
    println!("rigidity outcome: {}", borg.outcome);

    #[derive(Serialize)]
    struct Out {
        eigenvalues: Vec<PointOut>,
        jordan: Vec<SpaceOut>,
        diagonalizable: bool,
        borg: BorgOut,
    }
    let out = Out {
        eigenvalues: points,
        jordan: spaces_out,
        diagonalizable,
        borg,
    };
    write_output(output, &json::to_pretty(&out))
}

pub fn inverse(
    input: &Path,
    starts: Option<usize>,
    seed: u64,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let (n, target) = json::load_problem(input)?;
    let problem = InverseProblem::new(target)?;
    if problem.period() != n {
        return Err(CliError::Validation(format!(
            "problem file declares N = {n} but the target has degree {}",
            problem.period()
        )));
    }
    let starts = starts.unwrap_or_else(|| 200 * factorial(n));
    let sols = inverse::solve_inverse(&problem, starts, seed)?;
    println!(
        "{} potentials found from {} starts (complete: {})",
        sols.solutions.len(),
        sols.starts_used,
        sols.complete
    );
    for (s, r) in sols.solutions.iter().zip(&sols.residuals) {
        println!("  [{}]  residual {:.3e}", fmt::complex_list(s), r);
    }
    let out = json::SolutionsJson {
        solutions: sols
            .solutions
            .iter()
            .map(|s| s.iter().map(|&z| from_c64(z)).collect())
            .collect(),
        residuals: sols.residuals.clone(),
        complete: sols.complete,
    };
    write_output(output, &json::to_pretty(&out))
}

fn factorial(n: usize) -> usize {
    (2..=n).product::<usize>().max(1)
}

pub fn reconstruct(input: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let (zn, zn1) = json::load_spectra(input)?;
    let b = inverse::two_spectra_reconstruct(&zn, &zn1)?;
    println!("potential (storage order): [{}]", fmt::complex_list(&b));
    #[derive(Serialize)]
    struct Out {
        b: Vec<json::CJson>,
    }
    let out = Out {
        b: b.iter().map(|&z| from_c64(z)).collect(),
    };
    write_output(output, &json::to_pretty(&out))
}

pub fn toda(input: &Path, t_end: f64, step: f64, output: Option<&Path>) -> Result<(), CliError> {
    let op = json::load_operator(input)?;
    let traj = toda_mod::integrate(&op, t_end, step)?;

    let n = op.period();
    let mut csv = String::from("t");
    for j in 0..n {
        let _ = write!(csv, ",c{j}_re,c{j}_im");
    }
    for j in 0..n {
        let _ = write!(csv, ",b{j}_re,b{j}_im");
    }
    csv.push('\n');
    for st in &traj.states {
        let _ = write!(csv, "{}", fmt::sig12(st.t));
        for z in st.c.iter().chain(st.b.iter()) {
            let _ = write!(csv, ",{},{}", fmt::sig12(z.re), fmt::sig12(z.im));
        }
        csv.push('\n');
    }
    write_output(output, csv.trim_end())?;

    let dirichlet = if n >= 2 {
        toda_mod::dirichlet_evolution_check(&traj).ok()
    } else {
        None
    };
    #[derive(Serialize)]
    struct Drift {
        discriminant_drift: f64,
        states_saved: usize,
        #[serde(skip_serializing_if = "Option::is_none")]
        dirichlet_evolution: Option<DirichletOut>,
    }
    #[derive(Serialize)]
    struct DirichletOut {
        max_rel_residual: f64,
        windows_checked: usize,
        windows_skipped: usize,
    }
    let drift = Drift {
        discriminant_drift: traj.discriminant_drift,
        states_saved: traj.states.len(),
        dirichlet_evolution: dirichlet.map(|d| DirichletOut {
            max_rel_residual: d.max_rel_residual,
            windows_checked: d.windows_checked,
            windows_skipped: d.windows_skipped,
        }),
    };
    println!("{}", json::to_pretty(&drift));
    Ok(())
}
