//! The N-periodic Jacobi operator data model: construction and validation,
//! normalization of the off-diagonal product, discrete Fourier views of the
//! coefficients, and the isospectral transforms (shift, reflection, sign
//! flip) together with the special families used throughout the crate.

use crate::{c64, Error, Result, C64};

/// N-periodic Jacobi operator with complex coefficients.
///
/// Stores one period `a(0..N-1)`, `b(0..N-1)`; all integer indices are read
/// mod N. Invariants: `N >= 1`, every `a(n)` nonzero, all entries finite.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiOperator {
    a: Vec<C64>,
    b: Vec<C64>,
}

/// Discrete Fourier coefficients of the two coefficient sequences.
#[derive(Clone, Debug)]
pub struct FourierCoeffs {
    pub a_hat: Vec<C64>,
    pub b_hat: Vec<C64>,
}

/// Periodic pattern of signs `tau(n) = +1 / -1`.
#[derive(Clone, Debug)]
pub struct SignPattern {
    tau: Vec<i8>,
}

impl SignPattern {
    pub fn new(tau: Vec<i8>) -> Result<Self> {
        if tau.is_empty() {
            return Err(Error::Precondition("sign pattern must be nonempty".into()));
        }
        if tau.iter().any(|&t| t != 1 && t != -1) {
            return Err(Error::Precondition(
                "sign pattern entries must be +1 or -1".into(),
            ));
        }
        Ok(SignPattern { tau })
    }

    pub fn all_plus(n: usize) -> Self {
        SignPattern { tau: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    pub fn tau(&self, n: i64) -> f64 {
        let idx = n.rem_euclid(self.tau.len() as i64) as usize;
        self.tau[idx] as f64
    }

    /// Number of `-1` entries in one period.
    pub fn parity(&self) -> usize {
        self.tau.iter().filter(|&&t| t == -1).count()
    }
}

impl JacobiOperator {
    pub fn new(a: Vec<C64>, b: Vec<C64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidOperator(format!(
                "need equal nonzero period lengths, got |a| = {}, |b| = {}",
                a.len(),
                b.len()
            )));
        }
        for (n, z) in a.iter().chain(b.iter()).enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidOperator(format!(
                    "nonfinite coefficient at flat index {n}"
                )));
            }
        }
        if let Some(n) = a.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::InvalidOperator(format!("a({n}) = 0")));
        }
        Ok(JacobiOperator { a, b })
    }

    /// `a == -1`, `b == 0`: the free operator with spectrum `[-2, 2]`.
    pub fn unperturbed(n: usize) -> Self {
        JacobiOperator {
            a: vec![c64(-1.0, 0.0); n],
            b: vec![c64(0.0, 0.0); n],
        }
    }

    /// Discrete Schroedinger operator: `a == -1` with the given potential.
    pub fn schrodinger(b: Vec<C64>) -> Result<Self> {
        let n = b.len();
        JacobiOperator::new(vec![c64(-1.0, 0.0); n], b)
    }

    pub fn period(&self) -> usize {
        self.a.len()
    }

    /// `a(n)`, index read mod N.
    pub fn a(&self, n: i64) -> C64 {
        let idx = n.rem_euclid(self.a.len() as i64) as usize;
        self.a[idx]
    }

    /// `b(n)`, index read mod N.
    pub fn b(&self, n: i64) -> C64 {
        let idx = n.rem_euclid(self.b.len() as i64) as usize;
        self.b[idx]
    }

    pub fn a_slice(&self) -> &[C64] {
        &self.a
    }

    pub fn b_slice(&self) -> &[C64] {
        &self.b
    }

    /// Product of `a(n)` over one period.
    pub fn prod_a(&self) -> C64 {
        self.a.iter().product()
    }

    pub fn is_real(&self) -> bool {
        self.a.iter().chain(self.b.iter()).all(|z| z.im == 0.0)
    }

    /// Entrywise complex conjugate (the adjoint operator's coefficients).
    pub fn conjugate(&self) -> Self {
        JacobiOperator {
            a: self.a.iter().map(|z| z.conj()).collect(),
            b: self.b.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Rescales to `prod a(n) = (-1)^N`, returning the scaled operator and
    /// the scale `c` applied to both coefficient sequences.
    ///
    /// `c` solves `c^N prod a = (-1)^N`; among the N admissible values we
    /// take the root of `(-1)^N / prod a` that is real whenever one exists
    /// (positive preferred), falling back to the principal argument branch.
    /// Already-normalized operators come back unchanged with `c = 1`.
    pub fn normalize(&self) -> (Self, C64) {
        let n = self.period();
        let target = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        let w = c64(target, 0.0) / self.prod_a();
        let c = nth_root_preferring_real(w, n as u32);
        let scaled = JacobiOperator {
            a: self.a.iter().map(|&z| z * c).collect(),
            b: self.b.iter().map(|&z| z * c).collect(),
        };
        (scaled, c)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        let n = self.period();
        let target = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        (self.prod_a() - c64(target, 0.0)).norm() <= tol
    }

    /// Fourier analysis of both sequences: `a_hat[k] = (1/N) sum_n a(n) conj(omega)^{kn}`
    /// with `omega = exp(2 pi i / N)`.
    pub fn fourier(&self) -> FourierCoeffs {
        let n = self.period();
        let omega = omega_n(n);
        let analyze = |x: &[C64]| -> Vec<C64> {
            (0..n)
                .map(|k| {
                    let mut s = c64(0.0, 0.0);
                    for (j, &xj) in x.iter().enumerate() {
                        s += xj * omega.powu((k * j) as u32).conj();
                    }
                    s / (n as f64)
                })
                .collect()
        };
        FourierCoeffs {
            a_hat: analyze(&self.a),
            b_hat: analyze(&self.b),
        }
    }

    /// Cyclic shift of both coefficient sequences: `a'(n) = a(n + l)`.
    pub fn shift(&self, l: i64) -> Self {
        let n = self.period() as i64;
        JacobiOperator {
            a: (0..n).map(|j| self.a(j + l)).collect(),
            b: (0..n).map(|j| self.b(j + l)).collect(),
        }
    }

    /// Index reversal: `b'(n) = b(-n)` on sites, `a'(n) = a(-n-1)` on
    /// bonds, since `a(n)` couples sites n and n+1 and reflection carries
    /// that bond to {-n-1, -n}. Solutions map as `w(n) -> w(-n)` with
    /// inverted multiplier, so the discriminant is unchanged.
    pub fn reflect(&self) -> Self {
        let n = self.period() as i64;
        JacobiOperator {
            a: (0..n).map(|j| self.a(-j - 1)).collect(),
            b: (0..n).map(|j| self.b(-j)).collect(),
        }
    }

    /// `a'(n) = tau(n) a(n)`, diagonal unchanged. The discriminant picks up
    /// the factor `(-1)^parity`, so even-parity patterns are isospectral.
    pub fn sign_flip(&self, pattern: &SignPattern) -> Result<Self> {
        if pattern.len() != self.period() {
            return Err(Error::Precondition(format!(
                "sign pattern length {} does not match period {}",
                pattern.len(),
                self.period()
            )));
        }
        Ok(JacobiOperator {
            a: self
                .a
                .iter()
                .enumerate()
                .map(|(n, &z)| z * pattern.tau(n as i64))
                .collect(),
            b: self.b.clone(),
        })
    }

    /// `a(n)^2 == 1` and `b == 0` within 1e-10.
    pub fn is_essentially_unperturbed(&self) -> bool {
        self.a
            .iter()
            .all(|&z| (z * z - c64(1.0, 0.0)).norm() <= 1e-10)
            && self.b.iter().all(|z| z.norm() <= 1e-10)
    }

    /// Period-2M family with `b == 0` and `a(n)^2 = 1 + (-1)^n s` where
    /// `s^2 = 1 - exp(2 k pi i / M)`, the coefficient structure that a
    /// diagonalizable double-period matrix forces on interval-spectrum
    /// operators of even period.
    ///
    /// `a(n)` is the principal square root of `a(n)^2` modulated by the
    /// optional sign choices; the last sign is adjusted when needed so the
    /// result satisfies the product normalization.
    pub fn borg_family(m: usize, k: usize, signs: Option<&SignPattern>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Precondition(
                "borg_family: M must be positive".into(),
            ));
        }
        if k >= m {
            return Err(Error::Precondition(format!(
                "borg_family: k = {k} out of range [0, {})",
                m
            )));
        }
        let n = 2 * m;
        if let Some(p) = signs {
            if p.len() != n {
                return Err(Error::Precondition(format!(
                    "borg_family: sign pattern length {} != 2M = {}",
                    p.len(),
                    n
                )));
            }
        }
        let rho = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k as f64) / (m as f64));
        let s = (c64(1.0, 0.0) - rho).sqrt();
        let mut a: Vec<C64> = (0..n)
            .map(|j| {
                let sq = c64(1.0, 0.0) + if j % 2 == 0 { s } else { -s };
                let mut root = sq.sqrt();
                if let Some(p) = signs {
                    root *= p.tau(j as i64);
                }
                root
            })
            .collect();
        // fix the product normalization: prod a(n)^2 = 1 exactly, so prod
        // a(n) is +-1 and at most one sign flip is needed
        let prod: C64 = a.iter().product();
        if (prod - c64(1.0, 0.0)).norm() > (prod + c64(1.0, 0.0)).norm() {
            a[n - 1] = -a[n - 1];
        }
        JacobiOperator::new(a, vec![c64(0.0, 0.0); n])
    }
}

impl FourierCoeffs {
    /// Inverse transform back to one period of coefficients.
    pub fn synthesize(&self) -> Result<JacobiOperator> {
        let n = self.a_hat.len();
        if n == 0 || n != self.b_hat.len() {
            return Err(Error::Precondition(
                "fourier data must have equal nonzero lengths".into(),
            ));
        }
        let omega = omega_n(n);
        let synth = |x: &[C64]| -> Vec<C64> {
            (0..n)
                .map(|j| {
                    let mut s = c64(0.0, 0.0);
                    for (k, &xk) in x.iter().enumerate() {
                        s += xk * omega.powu((k * j) as u32);
                    }
                    s
                })
                .collect()
        };
        JacobiOperator::new(synth(&self.a_hat), synth(&self.b_hat))
    }

    pub fn omega(&self) -> C64 {
        omega_n(self.a_hat.len())
    }
}

fn omega_n(n: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI / (n as f64))
}

/// N-th root of `w` preferring a real value when one exists (positive
/// first), otherwise the principal-argument branch.
fn nth_root_preferring_real(w: C64, n: u32) -> C64 {
    if w.norm() == 0.0 {
        return c64(0.0, 0.0);
    }
    if w.im.abs() <= 1e-14 * w.norm() {
        if w.re > 0.0 {
            return c64(w.re.powf(1.0 / n as f64), 0.0);
        }
        if n % 2 == 1 {
            return c64(-(-w.re).powf(1.0 / n as f64), 0.0);
        }
    }
    let r = w.norm().powf(1.0 / n as f64);
    let theta = w.arg() / n as f64;
    C64::from_polar(r, theta)
}
