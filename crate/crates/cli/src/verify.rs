//! The `verify` verb: runs the identity suite on one operator and reports
//! a pass/fail line per check. Any failure exits with the computation
//! status code.

use crate::json;
use crate::CliError;
use pjacobi::c64;
use pjacobi::cpoly::CPoly;
use pjacobi::floquet;
use pjacobi::operator::SignPattern;
use pjacobi::spectral;
use std::path::Path;

struct Suite {
    failures: usize,
}

impl Suite {
    fn check(&mut self, name: &str, residual: f64, tol: f64) {
        if residual <= tol {
            println!("ok   {name} (residual {residual:.3e})");
        } else {
            println!("FAIL {name} (residual {residual:.3e} > {tol:.1e})");
            self.failures += 1;
        }
    }
}

pub fn run(input: &Path, seed: u64) -> Result<(), CliError> {
    let op = json::load_operator(input)?;
    let n = op.period() as i64;
    let fs = floquet::fundamental_solutions(&op);
    let md = floquet::monodromy(&op)?;
    let mut suite = Suite { failures: 0 };

    // Wronskian of (u, v) is the constant 1 at every site
    let mut worst = 0.0_f64;
    for site in 0..=n + 1 {
        let w = fs
            .u(site)
            .mul(&fs.v(site - 1).scale(-op.a(site - 1)))
            .sub(&fs.v(site).mul(&fs.u(site - 1).scale(-op.a(site - 1))));
        worst = worst.max(w.coeff_distance(&CPoly::one()));
    }
    suite.check("wronskian == 1", worst, 1e-9);

    // chi/gamma cross product equals a(0)/a(site)
    let mut worst = 0.0_f64;
    for site in 0..=n {
        let w = fs
            .chi(site)
            .mul(fs.gamma(site + 1))
            .sub(&fs.gamma(site).mul(fs.chi(site + 1)));
        let expect = CPoly::constant(op.a(0) / op.a(site));
        worst = worst.max(w.coeff_distance(&expect));
    }
    suite.check("chi-gamma cross product", worst, 1e-9);

    // det of the monodromy matrix is the constant 1
    let det = md.matrix[0][0]
        .mul(&md.matrix[1][1])
        .sub(&md.matrix[0][1].mul(&md.matrix[1][0]));
    suite.check(
        "det monodromy == 1",
        det.coeff_distance(&CPoly::one()),
        1e-9,
    );

    // the two trace forms of the discriminant agree
    let alt = fs.chi(n).add(fs.gamma(n + 1));
    suite.check("trace forms agree", md.delta.coeff_distance(&alt), 1e-8);

    // finite Floquet matrix characteristic polynomial (needs normalization);
    // kappa samples are seed-offset over [0, pi] for reproducible variety
    if op.is_normalized(1e-9) {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            let frac = ((seed.wrapping_mul(2654435761).wrapping_add(i)) % 997) as f64 / 997.0;
            let kappa = std::f64::consts::PI * frac;
            let cp = spectral::char_poly(&spectral::floquet_matrix(&op, kappa))?;
            let expect = md.delta.sub(&CPoly::constant(c64(2.0 * kappa.cos(), 0.0)));
            worst = worst.max(cp.coeff_distance(&expect));
        }
        suite.check(
            "floquet matrix char poly",
            worst,
            1e-7 * scale_of(&md.delta),
        );

        let cp = spectral::char_poly(&spectral::double_period_matrix(&op))?;
        suite.check(
            "double-period char poly",
            cp.coeff_distance(&md.delta_sq_minus4),
            1e-7 * scale_of(&md.delta_sq_minus4),
        );
    } else {
        println!("skip floquet/double-period matrix identities (operator not normalized)");
    }

    // shift and reflection leave the discriminant unchanged
    let d_shift = floquet::monodromy(&op.shift(1))?.delta;
    suite.check(
        "shift invariance",
        md.delta.coeff_distance(&d_shift),
        1e-9 * scale_of(&md.delta),
    );
    let d_ref = floquet::monodromy(&op.reflect())?.delta;
    suite.check(
        "reflection invariance",
        md.delta.coeff_distance(&d_ref),
        1e-9 * scale_of(&md.delta),
    );

    // sign flip multiplies the discriminant by (-1)^parity
    let tau: Vec<i8> = (0..op.period())
        .map(|j| if j == 0 { -1 } else { 1 })
        .collect();
    let pat = SignPattern::new(tau).map_err(CliError::from)?;
    let flipped = op.sign_flip(&pat)?;
    let d_flip = floquet::monodromy(&flipped)?.delta;
    let expect = if pat.parity() % 2 == 0 {
        md.delta.clone()
    } else {
        md.delta.neg()
    };
    suite.check(
        "sign-flip relation",
        d_flip.coeff_distance(&expect),
        1e-9 * scale_of(&md.delta),
    );

    // conjugated operator has the conjugated discriminant
    let d_conj = floquet::monodromy(&op.conjugate())?.delta;
    let expect = CPoly::from_coeffs(md.delta.coeffs().iter().map(|z| z.conj()).collect());
    suite.check(
        "conjugation relation",
        d_conj.coeff_distance(&expect),
        1e-12 * scale_of(&md.delta),
    );

    // trace identities channel eigenvalue sums through the coefficients
    if op.period() >= 2 {
        let ti = spectral::trace_identities(&op)?;
        suite.check("trace identities", ti.max(), 1e-7);
    }

    if suite.failures == 0 {
        println!("all checks passed");
        Ok(())
    } else {
        Err(CliError::Computation(format!(
            "{} identity check(s) failed",
            suite.failures
        )))
    }
}

fn scale_of(p: &CPoly) -> f64 {
    1.0 + p.max_coeff_norm()
}
