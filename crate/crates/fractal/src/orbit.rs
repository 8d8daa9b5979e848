//! Critical-orbit experiments at a Siegel parameter: the orbit of 0 under
//! z^2 + c(theta) stays on a quasicircle, winds at the rotation number, and
//! its closest returns to the critical value happen at the continued
//! fraction convergent denominators of theta.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use renorm_core::cardioid::cardioid_point;
use renorm_core::hp::HComplex;
use renorm_core::rotnum::{periodic_point, RenormWord, RotationNumber};
use renorm_core::surd::Surd;
use renorm_core::{Error, Result};

pub struct SiegelOrbit {
    /// Orbit of the critical point, starting at z_0 = 0.
    pub points: Vec<(f64, f64)>,
    /// Fixed point alpha = lambda / 2 at the disk's centre.
    pub alpha: (f64, f64),
    pub c: (f64, f64),
    pub theta: f64,
    pub precision: u32,
}

/// Iterate at no less than 80-bit precision; an orbit magnitude above 4
/// means the parameter was not resolved finely enough to stay linearizable
/// and is reported as a precision failure.
pub fn siegel_orbit(word: &RenormWord, count: usize, prec: u32) -> Result<SiegelOrbit> {
    let prec = prec.max(80);
    let eigen = periodic_point(word)?;
    let theta = RotationNumber::from_surd(eigen.theta_star.clone());
    let star = cardioid_point(&theta, prec);
    let alpha = (
        star.lambda.re.to_f64() / 2.0,
        star.lambda.im.to_f64() / 2.0,
    );
    let mut z = HComplex::zero(prec);
    let mut points = Vec::with_capacity(count);
    for k in 0..count {
        points.push(z.to_f64());
        if k + 1 == count {
            break;
        }
        z = z.sqr().add(&star.c);
        if z.norm_sqr() > 16u32 {
            return Err(Error::Precision(format!(
                "orbit left |z| <= 4 at step {} of {count}",
                k + 1
            )));
        }
    }
    Ok(SiegelOrbit {
        points,
        alpha,
        c: star.c.to_f64(),
        theta: theta.to_f64(),
        precision: prec,
    })
}

impl SiegelOrbit {
    pub fn max_magnitude(&self) -> f64 {
        self.points
            .iter()
            .map(|&(x, y)| x.hypot(y))
            .fold(0.0, f64::max)
    }

    /// Smallest distance from the orbit to the indifferent fixed point; a
    /// genuinely linearizable orbit keeps well away from it.
    pub fn min_distance_to_fixed_point(&self) -> f64 {
        self.points
            .iter()
            .map(|&(x, y)| (x - self.alpha.0).hypot(y - self.alpha.1))
            .fold(f64::INFINITY, f64::min)
    }

    /// Average angular advance around alpha, in turns.  Converges to theta.
    pub fn winding_estimate(&self) -> f64 {
        let ang =
            |&(x, y): &(f64, f64)| -> f64 { (y - self.alpha.1).atan2(x - self.alpha.0) };
        let mut total = 0.0;
        for pair in self.points.windows(2) {
            let mut d = ang(&pair[1]) - ang(&pair[0]);
            let tau = std::f64::consts::TAU;
            if d <= -tau / 2.0 {
                d += tau;
            } else if d > tau / 2.0 {
                d -= tau;
            }
            total += d;
        }
        total / (std::f64::consts::TAU * (self.points.len() - 1) as f64)
    }

    /// Times q at which |z_{1+q} - z_1| sets a strict new minimum: the
    /// closest returns to the critical value, paired with their distances.
    pub fn closest_returns(&self) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        if self.points.len() < 3 {
            return out;
        }
        let z1 = self.points[1];
        let mut best = f64::INFINITY;
        for q in 1..self.points.len() - 1 {
            let z = self.points[1 + q];
            let d = (z.0 - z1.0).hypot(z.1 - z1.1);
            if d < best {
                best = d;
                out.push((q, d));
            }
        }
        out
    }

    /// Contraction ratios between successive closest-return distances.
    pub fn self_similarity_ratios(&self) -> Vec<f64> {
        let returns = self.closest_returns();
        returns.windows(2).map(|p| p[0].1 / p[1].1).collect()
    }
}

/// Denominators q_k of the continued fraction convergents of x, starting
/// from q_0 = 1 for the constant term.
pub fn convergent_denominators(x: &Surd, count: usize) -> Result<Vec<BigInt>> {
    let mut out = Vec::with_capacity(count);
    let mut q_prev = BigInt::zero();
    let mut q = BigInt::one();
    let mut x = x.clone();
    for k in 0..count {
        let a = x.floor_bigint();
        if k > 0 {
            let next = &a * &q + &q_prev;
            q_prev = std::mem::replace(&mut q, next);
        }
        out.push(q.clone());
        let frac = &x - &Surd::from_int(a, x.disc());
        if frac.is_zero() {
            return Err(Error::Domain(
                "terminating continued fraction: x is rational".into(),
            ));
        }
        x = frac.inv();
    }
    Ok(out)
}

/// Convergent denominators as u64 times, for comparing against orbit data.
pub fn convergent_times(x: &Surd, count: usize) -> Result<Vec<u64>> {
    Ok(convergent_denominators(x, count)?
        .iter()
        .map(|q| q.to_u64().expect("convergent fits u64"))
        .collect())
}

/// High-precision distance between two orbit samples of the same word, used
/// to sanity-check that stored f64 points kept enough digits.
pub fn orbit_reproducibility(word: &RenormWord, count: usize) -> Result<f64> {
    let lo = siegel_orbit(word, count, 96)?;
    let hi = siegel_orbit(word, count, 192)?;
    let mut worst = 0.0f64;
    for (a, b) in lo.points.iter().zip(&hi.points) {
        worst = worst.max((a.0 - b.0).hypot(a.1 - b.1));
    }
    Ok(worst)
}
