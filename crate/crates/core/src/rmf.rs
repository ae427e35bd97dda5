//! Random multiplicative functions and the twisted partial sums
//! `S(x) = sum_{n <= x} h(n) lambda(n)`.
//!
//! Two models: Steinhaus (h(p) uniform on the unit circle, extended
//! completely multiplicatively) and Rademacher (h(p) = +-1, supported on
//! square-free integers; the value is explicitly 0 elsewhere). Prime values
//! come from per-prime counter-based streams, so a sample is a pure function
//! of `(model, n_max, seed)` and any single h(p) can be generated without
//! touching the others.
//!
//! Steinhaus values are stored as angles; unit modulus holds exactly, and a
//! product of prime-power factors reduces to one angle sum modulo 2*pi
//! followed by a single cos/sin evaluation.

use crate::error::Error;
use crate::modform::LambdaTable;
use crate::primes::{FactorTable, PrimeTable};
use crate::rng;
use crate::Result;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Which random multiplicative function is being sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomModel {
    Steinhaus,
    Rademacher,
}

impl std::fmt::Display for RandomModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RandomModel::Steinhaus => f.write_str("steinhaus"),
            RandomModel::Rademacher => f.write_str("rademacher"),
        }
    }
}

impl std::str::FromStr for RandomModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "steinhaus" => Ok(RandomModel::Steinhaus),
            "rademacher" => Ok(RandomModel::Rademacher),
            other => Err(Error::InvalidParameter(format!(
                "unknown model '{other}' (expected steinhaus or rademacher)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
enum SampleValues {
    /// Angle of h(p) per prime, indexed by p.
    Angles(Vec<f64>),
    /// Sign of h(p) per prime, indexed by p.
    Signs(Vec<i8>),
}

/// One realization of `(h(p))_{p <= n_max}`.
#[derive(Debug, Clone)]
pub struct PrimeSample {
    model: RandomModel,
    n_max: u64,
    seed: u64,
    values: SampleValues,
}

/// Raw stream word for the prime with the given index (0-based, ascending).
fn prime_word(seed: u64, prime_index: u64) -> u64 {
    rng::value_at(seed, prime_index, 0)
}

/// Draws h(p) for every prime `p <= n_max`.
pub fn sample_primes(
    model: RandomModel,
    primes: &PrimeTable,
    n_max: u64,
    seed: u64,
) -> Result<PrimeSample> {
    if n_max < 2 {
        return Err(Error::InvalidParameter(
            "sample needs n_max >= 2 (no primes below 2)".into(),
        ));
    }
    primes.ensure_covers(n_max)?;
    let values = match model {
        RandomModel::Steinhaus => {
            let mut angles = vec![0.0f64; n_max as usize + 1];
            for (j, &p) in primes.primes().iter().enumerate() {
                if p > n_max {
                    break;
                }
                angles[p as usize] = rng::unit_angle(prime_word(seed, j as u64));
            }
            SampleValues::Angles(angles)
        }
        RandomModel::Rademacher => {
            let mut signs = vec![0i8; n_max as usize + 1];
            for (j, &p) in primes.primes().iter().enumerate() {
                if p > n_max {
                    break;
                }
                signs[p as usize] = rng::unit_sign(prime_word(seed, j as u64));
            }
            SampleValues::Signs(signs)
        }
    };
    Ok(PrimeSample {
        model,
        n_max,
        seed,
        values,
    })
}

/// Value h(p) takes at the prime of the given index, generated without
/// building a full sample.
pub fn lazy_prime_value(model: RandomModel, seed: u64, prime_index: u64) -> Complex64 {
    let w = prime_word(seed, prime_index);
    match model {
        RandomModel::Steinhaus => Complex64::from_polar(1.0, rng::unit_angle(w)),
        RandomModel::Rademacher => Complex64::new(rng::unit_sign(w) as f64, 0.0),
    }
}

impl PrimeSample {
    pub fn model(&self) -> RandomModel {
        self.model
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Angle of h(p) (Steinhaus only; p must be prime).
    #[inline]
    pub fn angle_at(&self, p: u64) -> f64 {
        match &self.values {
            SampleValues::Angles(a) => a[p as usize],
            SampleValues::Signs(_) => panic!("angle_at on a Rademacher sample"),
        }
    }

    /// Sign of h(p) (Rademacher only; p must be prime).
    #[inline]
    pub fn sign_at(&self, p: u64) -> i8 {
        match &self.values {
            SampleValues::Signs(s) => s[p as usize],
            SampleValues::Angles(_) => panic!("sign_at on a Steinhaus sample"),
        }
    }

    /// h(p) as a complex number.
    pub fn h_prime(&self, p: u64) -> Complex64 {
        match &self.values {
            SampleValues::Angles(a) => Complex64::from_polar(1.0, a[p as usize]),
            SampleValues::Signs(s) => Complex64::new(s[p as usize] as f64, 0.0),
        }
    }

    fn ensure_covers(&self, n: u64) -> Result<()> {
        if n > self.n_max {
            return Err(Error::OutOfRange {
                n,
                low: 1,
                high: self.n_max,
            });
        }
        Ok(())
    }
}

#[inline]
fn reduce_angle(x: f64) -> f64 {
    x.rem_euclid(TAU)
}

/// Total angle of h(n) for a Steinhaus sample.
///
/// Folds prime-power contributions from the largest prime down, matching
/// the order used by the sweep in [`twisted_sum_prefix`] bit for bit.
fn steinhaus_angle(sample: &PrimeSample, factors: &FactorTable, n: u64) -> f64 {
    let mut parts: Vec<(u64, u32)> = Vec::with_capacity(8);
    let mut m = n;
    while m > 1 {
        let (p, a, rest) = factors.split_smallest(m);
        parts.push((p, a));
        m = rest;
    }
    let mut acc = 0.0f64;
    for &(p, a) in parts.iter().rev() {
        acc = reduce_angle(acc + a as f64 * sample.angle_at(p));
    }
    acc
}

/// Sign of h(n) for a Rademacher sample; 0 when n is not square-free.
fn rademacher_sign(sample: &PrimeSample, factors: &FactorTable, n: u64) -> i8 {
    let mut sign = 1i8;
    let mut m = n;
    while m > 1 {
        let (p, a, rest) = factors.split_smallest(m);
        if a >= 2 {
            return 0;
        }
        sign *= sample.sign_at(p);
        m = rest;
    }
    sign
}

/// h(n) by multiplicative extension of the sampled prime values.
pub fn h_value(sample: &PrimeSample, factors: &FactorTable, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::OutOfRange {
            n,
            low: 1,
            high: sample.n_max,
        });
    }
    sample.ensure_covers(n)?;
    factors.ensure_covers(n)?;
    if n == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(match sample.model {
        RandomModel::Steinhaus => Complex64::from_polar(1.0, steinhaus_angle(sample, factors, n)),
        RandomModel::Rademacher => {
            Complex64::new(rademacher_sign(sample, factors, n) as f64, 0.0)
        }
    })
}

/// Value of one twisted partial sum.
#[derive(Debug, Clone, Copy)]
pub struct TwistedSum {
    pub x: u64,
    pub value: Complex64,
    pub model: RandomModel,
    pub seed: u64,
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    #[inline]
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `S(z) = sum_{n <= z} h(n) lambda(n)` at every grid point, single sweep.
///
/// Terms are accumulated in ascending n with compensated summation for the
/// real and imaginary parts; the last prefix equals [`twisted_sum`] at the
/// same cutoff bit for bit.
pub fn twisted_sum_prefix(
    sample: &PrimeSample,
    lambda: &LambdaTable,
    factors: &FactorTable,
    grid: &[u64],
) -> Result<Vec<TwistedSum>> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("grid must be nonempty".into()));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(
            "grid must be strictly ascending".into(),
        ));
    }
    if grid[0] < 1 {
        return Err(Error::InvalidParameter("grid must start at z >= 1".into()));
    }
    let x_max = *grid.last().unwrap();
    sample.ensure_covers(x_max)?;
    lambda.ensure_covers(x_max)?;
    factors.ensure_covers(x_max)?;

    let mut out = Vec::with_capacity(grid.len());
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let mut grid_iter = grid.iter().peekable();

    match sample.model {
        RandomModel::Steinhaus => {
            let mut angles = vec![0.0f64; x_max as usize + 1];
            for n in 1..=x_max {
                let ang = if n == 1 {
                    0.0
                } else {
                    let (p, a, rest) = factors.split_smallest(n);
                    let v = reduce_angle(angles[rest as usize] + a as f64 * sample.angle_at(p));
                    angles[n as usize] = v;
                    v
                };
                let l = lambda.val(n);
                re.add(l * ang.cos());
                im.add(l * ang.sin());
                while let Some(&&z) = grid_iter.peek() {
                    if z != n {
                        break;
                    }
                    out.push(TwistedSum {
                        x: z,
                        value: Complex64::new(re.value(), im.value()),
                        model: sample.model,
                        seed: sample.seed,
                    });
                    grid_iter.next();
                }
            }
        }
        RandomModel::Rademacher => {
            let mut signs = vec![0i8; x_max as usize + 1];
            signs[1] = 1;
            for n in 1..=x_max {
                let s = if n == 1 {
                    1
                } else {
                    let (p, a, rest) = factors.split_smallest(n);
                    let v = if a >= 2 {
                        0
                    } else {
                        signs[rest as usize] * sample.sign_at(p)
                    };
                    signs[n as usize] = v;
                    v
                };
                if s != 0 {
                    re.add(lambda.val(n) * s as f64);
                }
                while let Some(&&z) = grid_iter.peek() {
                    if z != n {
                        break;
                    }
                    out.push(TwistedSum {
                        x: z,
                        // imaginary part exactly zero by construction
                        value: Complex64::new(re.value(), 0.0),
                        model: sample.model,
                        seed: sample.seed,
                    });
                    grid_iter.next();
                }
            }
        }
    }
    Ok(out)
}

/// `S(x) = sum_{n <= x} h(n) lambda(n)`.
pub fn twisted_sum(
    sample: &PrimeSample,
    lambda: &LambdaTable,
    factors: &FactorTable,
    x: u64,
) -> Result<TwistedSum> {
    Ok(twisted_sum_prefix(sample, lambda, factors, &[x])?.remove(0))
}

/// `sum_{n <= n0} h(n) lambda(n) a_n` for real coefficients `a`, where
/// `a[i]` weights `n = i + 1`.
pub fn twisted_sum_weighted(
    sample: &PrimeSample,
    lambda: &LambdaTable,
    factors: &FactorTable,
    weights: &[f64],
) -> Result<Complex64> {
    if weights.is_empty() {
        return Err(Error::InvalidParameter("weights must be nonempty".into()));
    }
    let n0 = weights.len() as u64;
    sample.ensure_covers(n0)?;
    lambda.ensure_covers(n0)?;
    factors.ensure_covers(n0)?;
    let mut re = Compensated::default();
    let mut im = Compensated::default();
    match sample.model {
        RandomModel::Steinhaus => {
            let mut angles = vec![0.0f64; n0 as usize + 1];
            for n in 1..=n0 {
                let ang = if n == 1 {
                    0.0
                } else {
                    let (p, a, rest) = factors.split_smallest(n);
                    let v = reduce_angle(angles[rest as usize] + a as f64 * sample.angle_at(p));
                    angles[n as usize] = v;
                    v
                };
                let w = lambda.val(n) * weights[(n - 1) as usize];
                re.add(w * ang.cos());
                im.add(w * ang.sin());
            }
        }
        RandomModel::Rademacher => {
            let mut signs = vec![0i8; n0 as usize + 1];
            signs[1] = 1;
            for n in 1..=n0 {
                let s = if n == 1 {
                    1
                } else {
                    let (p, a, rest) = factors.split_smallest(n);
                    let v = if a >= 2 {
                        0
                    } else {
                        signs[rest as usize] * sample.sign_at(p)
                    };
                    signs[n as usize] = v;
                    v
                };
                if s != 0 {
                    re.add(lambda.val(n) * weights[(n - 1) as usize] * s as f64);
                }
            }
        }
    }
    Ok(Complex64::new(re.value(), im.value()))
}
