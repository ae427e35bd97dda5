//! Exact Fourier coefficients of the weight-12 discriminant form and the
//! unit-normalized eigenvalues derived from them.
//!
//! The table is built from the coefficients of `q * E(q)^8` where
//! `E(q) = prod (1 - q^n)^3` has the sparse expansion
//! `sum_k (-1)^k (2k+1) q^{k(k+1)/2}`. The eighth power is obtained by three
//! squarings with number-theoretic transforms modulo several word-size
//! primes, reconstructed by CRT. One extra modulus is always carried as a
//! redundancy check, and the leading coefficients are compared against a
//! direct product expansion before the table is returned.

mod ntt;

/// Deterministic Miller-Rabin primality test, exposed for spot checks.
pub use ntt::is_prime_u64;

use crate::error::Error;
use crate::exec;
use crate::Result;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Hard ceiling for exact tau computation.
pub const DEFAULT_EXACT_CAP: u64 = 1_000_000;

/// Default table size used by the experiments.
pub const DEFAULT_N_EXACT: u64 = 100_000;

/// Weight of the fixed eigenform.
pub const KAPPA: u32 = 12;

/// Exact integer coefficients tau(1..=n_max).
#[derive(Debug, Clone)]
pub struct TauTable {
    n_max: u64,
    tau: Vec<BigInt>, // index 0 unused
}

impl TauTable {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn tau(&self, n: u64) -> &BigInt {
        &self.tau[n as usize]
    }

    /// All values, 1-indexed (slot 0 is a zero placeholder).
    pub fn values(&self) -> &[BigInt] {
        &self.tau
    }

    /// Rebuilds a table from raw values (used by the cache reader).
    pub(crate) fn from_values(tau: Vec<BigInt>) -> Result<Self> {
        if tau.len() < 2 || !tau[1].eq(&BigInt::from(1)) {
            return Err(Error::Internal(
                "tau table must start with tau(1) = 1".into(),
            ));
        }
        Ok(TauTable {
            n_max: (tau.len() - 1) as u64,
            tau,
        })
    }
}

/// Unit-normalized real eigenvalues lambda(n) = tau(n) / n^{(kappa-1)/2}.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    n_max: u64,
    lambda: Vec<f64>, // index 0 unused
    kappa: u32,
}

impl LambdaTable {
    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    #[inline]
    pub fn val(&self, n: u64) -> f64 {
        self.lambda[n as usize]
    }

    /// All values, 1-indexed (slot 0 is a zero placeholder).
    pub fn values(&self) -> &[f64] {
        &self.lambda
    }

    pub(crate) fn from_values(lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() < 2 || lambda[1] != 1.0 {
            return Err(Error::Internal(
                "lambda table must start with lambda(1) = 1".into(),
            ));
        }
        Ok(LambdaTable {
            n_max: (lambda.len() - 1) as u64,
            lambda,
            kappa: KAPPA,
        })
    }

    pub fn ensure_covers(&self, n: u64) -> Result<()> {
        if n > self.n_max {
            return Err(Error::TableTooSmall {
                needed: n,
                have: self.n_max,
            });
        }
        Ok(())
    }
}

/// Local parameter angle at a prime: lambda(p) = 2 cos(theta).
#[derive(Debug, Clone, Copy)]
pub struct SatakeAngle {
    pub p: u64,
    pub theta: f64,
}

impl SatakeAngle {
    /// The pair of unit-modulus local roots `(alpha, beta)`.
    pub fn roots(&self) -> (num_complex::Complex64, num_complex::Complex64) {
        let alpha = num_complex::Complex64::from_polar(1.0, self.theta);
        (alpha, alpha.conj())
    }
}

const LAMBDA_P_SLACK: f64 = 1e-9;

/// Angle with `lambda(p) = 2 cos(theta)`, `theta` in `[0, pi]`.
pub fn satake_angle(p: u64, lambda_p: f64) -> Result<SatakeAngle> {
    if lambda_p.abs() > 2.0 + LAMBDA_P_SLACK {
        return Err(Error::Domain(format!(
            "|lambda(p)| = {} exceeds 2 at p = {p}",
            lambda_p.abs()
        )));
    }
    let theta = (lambda_p / 2.0).clamp(-1.0, 1.0).acos();
    Ok(SatakeAngle { p, theta })
}

/// lambda(p^m) from lambda(p) by the three-term Hecke recursion.
pub fn lambda_prime_power(lambda_p: f64, m: u32) -> Result<f64> {
    if lambda_p.abs() > 2.0 + LAMBDA_P_SLACK {
        return Err(Error::Domain(format!(
            "|lambda_p| = {} exceeds 2",
            lambda_p.abs()
        )));
    }
    if m == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0f64;
    let mut cur = lambda_p;
    for _ in 1..m {
        let next = lambda_p * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Builds the exact tau table with the default budget cap.
pub fn build_tau_table(n_max: u64) -> Result<TauTable> {
    build_tau_table_with_cap(n_max, DEFAULT_EXACT_CAP)
}

/// Builds the exact tau table for `1..=n_max`; errors above `cap`.
pub fn build_tau_table_with_cap(n_max: u64, cap: u64) -> Result<TauTable> {
    if n_max < 1 {
        return Err(Error::InvalidParameter("n_max must be >= 1".into()));
    }
    if n_max > cap {
        return Err(Error::BudgetExceeded {
            requested: n_max,
            cap,
        });
    }
    let len = n_max as usize; // coefficients of E^8 up to degree n_max - 1

    // Sparse expansion of E = prod (1 - q^n)^3.
    let mut e_signed = vec![0i64; len];
    let mut k = 0u64;
    loop {
        let idx = k * (k + 1) / 2;
        if idx >= n_max {
            break;
        }
        let term = (2 * k + 1) as i64;
        e_signed[idx as usize] = if k % 2 == 0 { term } else { -term };
        k += 1;
    }

    // Transform size and moduli. The reconstruction range comes from the
    // divisor bound |tau(n)| <= d(n) * n^{11/2}; one extra field is kept
    // purely as a redundancy check.
    let two_adicity = (2 * len).next_power_of_two().max(2).trailing_zeros();
    let d_max = {
        let d = divisor_counts(n_max);
        *d.iter().max().unwrap_or(&1) as u64
    };
    // Need prod(p) > 2 * d_max * n_max^{5.5}. Compare squares:
    // prod(p)^2 > 4 * d_max^2 * n_max^{11}.
    let needed_sq = BigInt::from(4u64) * BigInt::from(d_max).pow(2) * BigInt::from(n_max).pow(11);
    let mut fields = ntt::find_ntt_fields(2, two_adicity);
    loop {
        let prod: BigInt = fields.iter().map(|f| BigInt::from(f.p)).product();
        if prod.pow(2) > needed_sq {
            break;
        }
        fields = ntt::find_ntt_fields(fields.len() + 1, two_adicity);
    }
    let spare = ntt::find_ntt_fields(fields.len() + 1, two_adicity)
        .pop()
        .expect("spare field");
    let mut all_fields = fields.clone();
    all_fields.push(spare);

    // Residue pipeline per field: reduce E, square three times.
    let residues: Vec<Vec<u64>> = exec::map_indexed(all_fields.len(), |i| {
        let field = all_fields[i];
        let mut coeffs: Vec<u64> = e_signed
            .iter()
            .map(|&v| v.rem_euclid(field.p as i64) as u64)
            .collect();
        for _ in 0..3 {
            coeffs = ntt::square_truncated(&coeffs, len, field);
        }
        coeffs
    });

    // CRT over the certified fields, centered into signed integers.
    let modulus: BigInt = fields.iter().map(|f| BigInt::from(f.p)).product();
    let half = &modulus / 2;
    let crt_weights: Vec<(BigInt, u64, u64)> = fields
        .iter()
        .map(|f| {
            let m_i = &modulus / f.p;
            let m_i_mod_p = (&m_i % f.p).to_u64().expect("residue fits");
            let inv = ntt::inv_mod(m_i_mod_p, f.p);
            (m_i, inv, f.p)
        })
        .collect();

    let mut tau = vec![BigInt::zero()];
    let reconstructed: Vec<BigInt> = exec::map_indexed(len, |j| {
        let mut acc = BigInt::zero();
        for (i, (m_i, inv, p)) in crt_weights.iter().enumerate() {
            let c = ntt::mul_mod(residues[i][j], *inv, *p);
            acc += m_i * c;
        }
        acc %= &modulus;
        if acc > half {
            acc -= &modulus;
        }
        acc
    });

    // Redundancy check against the spare modulus for every coefficient.
    let sp = spare.p;
    for (j, value) in reconstructed.iter().enumerate() {
        let got = {
            let r = value % sp;
            let r = if r.is_negative() { r + sp } else { r };
            r.to_u64().expect("residue fits")
        };
        if got != residues[fields.len()][j] {
            return Err(Error::Internal(format!(
                "CRT residue mismatch at coefficient {j} modulo spare prime {sp}"
            )));
        }
    }

    tau.extend(reconstructed);

    // Leading coefficients against a direct product expansion.
    let check_len = len.min(48);
    let direct = eta24_prefix(check_len);
    for n in 1..=check_len {
        if tau[n] != direct[n - 1] {
            return Err(Error::Internal(format!(
                "NTT expansion disagrees with direct expansion at n = {n}"
            )));
        }
    }

    Ok(TauTable {
        n_max,
        tau,
    })
}

/// First `len` coefficients of `prod_{n>=1} (1 - q^n)^24`, by direct
/// repeated multiplication. Only used for the in-construction cross-check;
/// the full-scale independent oracle lives in the test suite.
fn eta24_prefix(len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    c[0] = BigInt::from(1);
    for n in 1..len {
        for _ in 0..24 {
            for j in (n..len).rev() {
                let prev = c[j - n].clone();
                c[j] -= prev;
            }
        }
    }
    c
}

/// Normalizes an exact table into floating eigenvalues.
pub fn lambda_from_tau(tab: &TauTable) -> LambdaTable {
    let mut lambda = Vec::with_capacity(tab.tau.len());
    lambda.push(0.0);
    for n in 1..=tab.n_max {
        let t = tab.tau(n).to_f64().expect("tau magnitude fits in f64");
        // n^{5.5} as sqrt of the exact 11th power; sqrt is correctly rounded.
        let pow11 = BigInt::from(n).pow(11).to_f64().expect("fits in f64");
        lambda.push(t / pow11.sqrt());
    }
    lambda[1] = 1.0;
    LambdaTable {
        n_max: tab.n_max,
        lambda,
        kappa: KAPPA,
    }
}

/// Divisor-count table d(1..=n_max), 1-indexed.
pub fn divisor_counts(n_max: u64) -> Vec<u32> {
    let mut d = vec![0u32; n_max as usize + 1];
    for i in 1..=n_max as usize {
        for j in (i..=n_max as usize).step_by(i) {
            d[j] += 1;
        }
    }
    d
}

/// Outcome of the exhaustive divisor-bound scan.
#[derive(Debug, Clone, Copy)]
pub struct DivisorBoundReport {
    pub max_ratio: f64,
    pub argmax: u64,
}

/// Scans `|lambda(n)| / d(n)` over the whole table.
///
/// Returns the maximum and where it occurs; errs if any ratio exceeds
/// `1 + 1e-9`, which would signal an arithmetic defect upstream.
pub fn divisor_bound_report(tab: &LambdaTable) -> Result<DivisorBoundReport> {
    let d = divisor_counts(tab.n_max);
    let mut max_ratio = 0.0f64;
    let mut argmax = 1u64;
    for n in 1..=tab.n_max {
        let ratio = tab.val(n).abs() / d[n as usize] as f64;
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = n;
        }
    }
    if max_ratio > 1.0 + 1e-9 {
        return Err(Error::DivisorBoundViolation {
            n: argmax,
            ratio: max_ratio,
        });
    }
    Ok(DivisorBoundReport { max_ratio, argmax })
}
