//! Deterministic text formatting: every scalar in human-readable output is
//! printed with 12 significant digits in fixed notation, so identical runs
//! produce byte-identical files.

use pjacobi::C64;

pub fn sig12(x: f64) -> String {
    // snap -0.0 and sub-precision dust to a plain zero
    let x = if x.abs() <= 1e-15 { 0.0 } else { x };
    if x == 0.0 {
        return "0.00000000000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (11 - exp).clamp(0, 30) as usize;
    format!("{:.*}", decimals, x)
}

/// `re+imi` form, e.g. `-2.00000000000+0.00000000000i`.
pub fn complex(z: C64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im < 0.0 {
        format!("{}-{}i", sig12(z.re), sig12(-im))
    } else {
        format!("{}+{}i", sig12(z.re), sig12(im))
    }
}

pub fn complex_list(zs: &[C64]) -> String {
    zs.iter().map(|&z| complex(z)).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(2.0_f64.sqrt()), "1.41421356237");
        assert_eq!(sig12(-2.0), "-2.00000000000");
        assert_eq!(sig12(0.0), "0.00000000000");
        assert_eq!(sig12(1234.5), "1234.50000000");
        assert_eq!(sig12(1.5e-3), "0.00150000000000");
    }

    #[test]
    fn complex_form() {
        assert_eq!(
            complex(pjacobi::c64(1.0, -0.5)),
            "1.00000000000-0.500000000000i"
        );
        assert_eq!(
            complex(pjacobi::c64(-2.0, 0.0)),
            "-2.00000000000+0.00000000000i"
        );
    }
}
