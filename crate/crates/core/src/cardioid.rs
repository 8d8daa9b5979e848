//! Main-cardioid parametrization and the pullback experiment: walk a
//! rotation number backwards through the inverse sector branches and watch
//! both the angle and the cardioid parameter contract geometrically toward
//! the fixed point, with ratio lambda_star = t^2.

use rug::float::Constant;
use rug::Float;

use crate::hp::{fmt17, surd_to_float, HComplex};
use crate::rotnum::{
    antirenorm_rotation, periodic_point, AntiBranch, BranchSymbol, EigenData, RenormWord,
    RotationNumber,
};
use crate::{Error, Result};

/// A point of the main cardioid: `lambda = e^{2 pi i theta}` and
/// `c = lambda/2 - lambda^2/4`.  The map `z^2 + c` fixes `alpha = lambda/2`
/// with multiplier exactly `lambda`.
#[derive(Clone, Debug)]
pub struct CardioidPoint {
    pub lambda: HComplex,
    pub c: HComplex,
}

fn scaled(z: &HComplex, den: u32) -> HComplex {
    let p = z.re.prec();
    HComplex::new(
        Float::with_val(p, &z.re / den),
        Float::with_val(p, &z.im / den),
    )
}

pub fn cardioid_point(theta: &RotationNumber, prec: u32) -> CardioidPoint {
    let wp = prec + 16;
    let angle = Float::with_val(wp, Constant::Pi) * 2u32 * theta.to_float(wp);
    let lambda = HComplex::new(
        Float::with_val(wp, angle.cos_ref()),
        Float::with_val(wp, angle.sin_ref()),
    );
    let c = scaled(&lambda, 2).sub(&scaled(&lambda.sqr(), 4));
    let clamp = |z: HComplex| {
        let mut re = z.re;
        let mut im = z.im;
        re.set_prec(prec);
        im.set_prec(prec);
        HComplex::new(re, im)
    };
    CardioidPoint {
        lambda: clamp(lambda),
        c: clamp(c),
    }
}

/// Pull `r0` back `steps` times through the inverse of the sector map for
/// `word`: one step applies the inverse branches in reversed word order
/// (symbol L uses the 2/3 branch, R the 1/3 branch).  Returns
/// `[r0, r_{-1}, ..., r_{-steps}]`.  Every step contracts distances to the
/// word's fixed angle; growth beyond rounding slack is reported as an error.
pub fn pullback_sequence(
    word: &RenormWord,
    r0: &RotationNumber,
    steps: usize,
) -> Result<Vec<RotationNumber>> {
    const CHECK_PREC: u32 = 256;
    let eigen = periodic_point(word)?;
    let target = surd_to_float(&eigen.theta_star, CHECK_PREC);
    let f0 = r0.to_float(CHECK_PREC);
    if r0.is_zero() || !(f0.is_sign_positive() && f0 < 1u32) {
        return Err(Error::Domain(
            "pullback start must lie strictly inside (0, 1)".into(),
        ));
    }
    let mut out = vec![r0.clone()];
    let mut dist = Float::with_val(CHECK_PREC, &f0 - &target).abs();
    for _ in 0..steps {
        let mut r = out.last().unwrap().clone();
        for sym in word.symbols().iter().rev() {
            let branch = match sym {
                BranchSymbol::L => AntiBranch::TwoThirds,
                BranchSymbol::R => AntiBranch::OneThird,
            };
            r = antirenorm_rotation(&r, branch)?;
        }
        let next = Float::with_val(CHECK_PREC, r.to_float(CHECK_PREC) - &target).abs();
        let bound = Float::with_val(CHECK_PREC, &dist * 1.5f64) + Float::with_val(CHECK_PREC, 1e-40);
        if next > bound {
            return Err(Error::Divergence(format!(
                "pullback moved away from the fixed angle ({} -> {})",
                dist.to_f64(),
                next.to_f64()
            )));
        }
        dist = next;
        out.push(r);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ScalingRow {
    pub step: usize,
    pub r: RotationNumber,
    /// |r_n - theta_star|
    pub abs_err: Float,
    /// abs_err_{n-1} / abs_err_n; None on the first row or at exact zero.
    pub angle_ratio: Option<Float>,
    pub c: HComplex,
    /// |c(r_n) - c(theta_star)|
    pub param_dist: Float,
    pub param_ratio: Option<Float>,
}

#[derive(Clone, Debug)]
pub struct ScalingReport {
    pub word: RenormWord,
    pub eigen: EigenData,
    pub precision: u32,
    /// Set when an error dropped under 2^10 ulp and further rows would
    /// measure rounding noise instead of contraction.
    pub truncated: bool,
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,r,abs_err,angle_ratio,c_re,c_im,param_ratio\n");
        for row in &self.rows {
            let rf = row.r.to_float(self.precision);
            let opt = |x: &Option<Float>| x.as_ref().map(|f| fmt17(f)).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                row.step,
                fmt17(&rf),
                fmt17(&row.abs_err),
                opt(&row.angle_ratio),
                fmt17(&row.c.re),
                fmt17(&row.c.im),
                opt(&row.param_ratio),
            ));
        }
        s
    }

    pub fn final_angle_ratio(&self) -> Option<f64> {
        self.rows.last()?.angle_ratio.as_ref().map(|f| f.to_f64())
    }

    pub fn final_param_ratio(&self) -> Option<f64> {
        self.rows.last()?.param_ratio.as_ref().map(|f| f.to_f64())
    }
}

/// Working precision: enough bits that `steps` contractions by lambda_star
/// keep 96 guard bits, and never less than 128.
fn report_precision(eigen: &EigenData, steps: usize) -> u32 {
    let lam = surd_to_float(&eigen.lambda_star, 64).to_f64();
    128u32.max((steps as f64 * lam.log2()).ceil() as u32 + 96)
}

pub fn scaling_report(
    word: &RenormWord,
    r0: &RotationNumber,
    steps: usize,
) -> Result<ScalingReport> {
    let eigen = periodic_point(word)?;
    let prec = report_precision(&eigen, steps);
    let seq = pullback_sequence(word, r0, steps)?;
    let target = surd_to_float(&eigen.theta_star, prec);
    let star = cardioid_point(&RotationNumber::from_surd(eigen.theta_star.clone()), prec);
    let noise_floor = Float::with_val(prec, 1u32) >> (prec - 10);

    let mut rows: Vec<ScalingRow> = Vec::new();
    let mut truncated = false;
    for (step, r) in seq.iter().enumerate() {
        let abs_err = Float::with_val(prec, r.to_float(prec) - &target).abs();
        if !abs_err.is_zero() && abs_err < noise_floor {
            truncated = true;
            break;
        }
        let point = cardioid_point(r, prec);
        let param_dist = point.c.dist(&star.c);
        let ratio = |prev: &Float, cur: &Float| -> Option<Float> {
            if cur.is_zero() || prev.is_zero() {
                return None;
            }
            let q = Float::with_val(prec, prev / cur);
            assert!(q.is_finite() && q.is_sign_positive());
            Some(q)
        };
        let (angle_ratio, param_ratio) = match rows.last() {
            None => (None, None),
            Some(prev) => (
                ratio(&prev.abs_err, &abs_err),
                ratio(&prev.param_dist, &param_dist),
            ),
        };
        rows.push(ScalingRow {
            step,
            r: r.clone(),
            abs_err,
            angle_ratio,
            c: point.c,
            param_dist,
            param_ratio,
        });
    }
    Ok(ScalingReport {
        word: word.clone(),
        eigen,
        precision: prec,
        truncated,
        rows,
    })
}
