//! Draws from the limit variables: exact transforms of normal, Dirichlet,
//! and uniform draws, and a discretized Brownian excursion for the
//! functional laws of the Catalan families.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use super::{DirichletLaw, ExcursionLaw, LimitError, LimitLaw, UniformLaw};
use crate::families::singles::random_dyck;
use crate::perm::Perm;

/// Semilength of the discretized excursion used by [`sample_limit`].
pub const DEFAULT_EXCURSION_STEPS: usize = 10_000;

fn fact_f64(k: u32) -> f64 {
    (2..=u64::from(k)).map(|i| i as f64).product()
}

fn dirichlet3<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64, f64) {
    let a: f64 = rng.sample(Exp1);
    let b: f64 = rng.sample(Exp1);
    let c: f64 = rng.sample(Exp1);
    let s = a + b + c;
    (a / s, b / s, c / s)
}

/// One draw of the limit variable, with the default excursion
/// discretization.
pub fn sample_limit<R: Rng + ?Sized>(law: &LimitLaw, rng: &mut R) -> Result<f64, LimitError> {
    sample_limit_with_steps(law, rng, DEFAULT_EXCURSION_STEPS)
}

/// One draw of the limit variable; `half_steps` is the semilength of the
/// discretized excursion, which only excursion laws consume.
pub fn sample_limit_with_steps<R: Rng + ?Sized>(
    law: &LimitLaw,
    rng: &mut R,
    half_steps: usize,
) -> Result<f64, LimitError> {
    match law {
        LimitLaw::Normal { var_coeff, .. } => {
            let z: f64 = rng.sample(StandardNormal);
            Ok(z * var_coeff.sqrt())
        }
        LimitLaw::Dirichlet(law) => {
            let (x, y, z) = dirichlet3(rng);
            Ok(match law {
                DirichletLaw::EGrid { i, j, p } => {
                    x.powi(*i as i32) * y.powi(*j as i32) * z.powi(*p as i32)
                        / (fact_f64(*i) * fact_f64(*j) * fact_f64(*p))
                }
                DirichletLaw::EIdentity { i } => {
                    let e = *i as i32;
                    ((x + z).powi(e) + (y + z).powi(e) - z.powi(e)) / fact_f64(*i)
                }
            })
        }
        LimitLaw::Uniform(law) => {
            let u: f64 = rng.random();
            Ok(match law {
                UniformLaw::CccGrid { k, m } | UniformLaw::EeeGrid { k, m } => {
                    u.powi(*k as i32) * (1.0 - u).powi((m - k) as i32)
                        / (fact_f64(*k) * fact_f64(m - k))
                }
                UniformLaw::CccIdentity { m } => {
                    (1.0 + (*m as f64 - 1.0) * u) * (1.0 - u).powi(*m as i32 - 1)
                        / fact_f64(*m)
                }
                UniformLaw::BbbGrid { k, m } => {
                    u.powi(*k as i32 - 1) * (1.0 - u).powi((m - k) as i32)
                        / (fact_f64(k - 1) * fact_f64(m - k))
                }
                UniformLaw::BbbIdentity { m } => 1.0 / fact_f64(*m),
                UniformLaw::EeeIdentity { m } => {
                    let e = *m as i32;
                    (u.powi(e) + (1.0 - u).powi(e)) / fact_f64(*m)
                }
            })
        }
        LimitLaw::Excursion(law) => sample_excursion(law, rng, half_steps),
    }
}

/// Heights `e(s/(2N))` of a uniform discrete excursion, scaled by
/// `1/sqrt(2N)`, indices `1..=2N`.
fn excursion_heights<R: Rng + ?Sized>(rng: &mut R, half_steps: usize) -> Vec<f64> {
    let path = random_dyck(half_steps, rng);
    let scale = 1.0 / ((2 * half_steps) as f64).sqrt();
    let mut depth = 0i64;
    path.iter()
        .map(|&s| {
            depth += i64::from(s);
            depth as f64 * scale
        })
        .collect()
}

fn sample_excursion<R: Rng + ?Sized>(
    law: &ExcursionLaw,
    rng: &mut R,
    half_steps: usize,
) -> Result<f64, LimitError> {
    match law {
        ExcursionLaw::Single132 { sigma, .. } => {
            let pattern: Perm = sigma.parse().expect("law carries a valid pattern");
            let v = pattern.values();
            if v.windows(2).all(|w| w[0] > w[1]) {
                return Ok(1.0 / fact_f64(v.len() as u32));
            }
            if *v == [1, 2] {
                let heights = excursion_heights(rng, half_steps);
                let area = heights.iter().sum::<f64>() / heights.len() as f64;
                return Ok(2f64.sqrt() * area);
            }
            Err(LimitError::UnsupportedExcursion)
        }
        ExcursionLaw::Single321 { block_lengths, .. } => {
            let heights = excursion_heights(rng, half_steps);
            let dt = 1.0 / heights.len() as f64;
            let mut prev = vec![1.0; heights.len() + 1];
            let mut cur = vec![0.0; heights.len() + 1];
            for &m in block_lengths {
                cur[0] = 0.0;
                for (s, &e) in heights.iter().enumerate() {
                    cur[s + 1] = cur[s] + prev[s] * e.powi(m as i32 - 1) * dt;
                }
                std::mem::swap(&mut prev, &mut cur);
            }
            Ok(prev[heights.len()])
        }
    }
}
