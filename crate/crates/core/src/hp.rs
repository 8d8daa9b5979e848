//! High-precision plumbing: conversions from exact types into `rug::Float`
//! and a minimal complex type over it (MPFR has no complex layer in `rug`
//! without the `complex` feature's `Complex`, but we only need a handful of
//! operations and want explicit control of precision and rounding).

use num_bigint::BigInt;
use num_rational::BigRational;
use rug::Float;

use crate::surd::Surd;

pub fn bigint_to_float(x: &BigInt, prec: u32) -> Float {
    let i = rug::Integer::from_str_radix(&x.to_str_radix(16), 16).expect("bigint radix conv");
    Float::with_val(prec, i)
}

pub fn rational_to_float(x: &BigRational, prec: u32) -> Float {
    let n = bigint_to_float(x.numer(), prec + 8);
    let d = bigint_to_float(x.denom(), prec + 8);
    let mut out = n / d;
    out.set_prec(prec);
    out
}

pub fn surd_to_float(x: &Surd, prec: u32) -> Float {
    let wp = prec + 16;
    let p = bigint_to_float(x.p(), wp);
    let q = bigint_to_float(x.q(), wp);
    let r = bigint_to_float(x.r(), wp);
    let root = Float::with_val(wp, x.disc()).sqrt();
    let mut out = (p + q * root) / r;
    out.set_prec(prec);
    out
}

/// 17 significant decimal digits in scientific notation, locale-independent.
pub fn fmt17(x: &Float) -> String {
    if x.is_zero() {
        return "0.0000000000000000e0".into();
    }
    let (sign, digits, exp) = x.to_sign_string_exp(10, Some(17));
    let exp = exp.unwrap_or(0);
    let mut chars = digits.chars();
    let first = chars.next().unwrap();
    let rest: String = chars.collect();
    format!(
        "{}{}.{}e{}",
        if sign { "-" } else { "" },
        first,
        rest,
        exp - 1
    )
}

pub fn fmt17_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

#[derive(Clone, Debug)]
pub struct HComplex {
    pub re: Float,
    pub im: Float,
}

impl HComplex {
    pub fn new(re: Float, im: Float) -> Self {
        HComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        HComplex {
            re: Float::with_val(prec, 0),
            im: Float::with_val(prec, 0),
        }
    }

    pub fn add(&self, o: &HComplex) -> HComplex {
        HComplex {
            re: Float::with_val(self.re.prec(), &self.re + &o.re),
            im: Float::with_val(self.im.prec(), &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &HComplex) -> HComplex {
        HComplex {
            re: Float::with_val(self.re.prec(), &self.re - &o.re),
            im: Float::with_val(self.im.prec(), &self.im - &o.im),
        }
    }

    pub fn mul(&self, o: &HComplex) -> HComplex {
        let p = self.re.prec();
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        HComplex { re, im }
    }

    pub fn sqr(&self) -> HComplex {
        self.mul(self)
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.re.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn dist(&self, o: &HComplex) -> Float {
        self.sub(o).abs()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}
