//! Exact arithmetic in a fixed real quadratic field Q(sqrt(D)).
//!
//! A value is stored as `(p + q*sqrt(d)) / r` with big-integer `p, q, r`,
//! `r > 0`, `gcd(p, q, r) = 1` and square-free `d >= 2`.  The field is fixed
//! per value; arithmetic between values of different fields is a programming
//! error and panics (rationals, `q = 0`, are compatible with any field).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone)]
pub struct Surd {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: u64,
}

// Rationals (q = 0) compare equal across fields, so `d` only participates
// in equality and hashing when the irrational part is present.
impl PartialEq for Surd {
    fn eq(&self, other: &Surd) -> bool {
        self.p == other.p
            && self.q == other.q
            && self.r == other.r
            && (self.q.is_zero() || self.d == other.d)
    }
}
impl Eq for Surd {}

impl std::hash::Hash for Surd {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state);
        self.q.hash(state);
        self.r.hash(state);
        if !self.q.is_zero() {
            self.d.hash(state);
        }
    }
}

impl num_traits::Zero for Surd {
    fn zero() -> Surd {
        // Placeholder field index; rationals are field-agnostic.
        Surd::new(0, 0, 1, 2)
    }
    fn is_zero(&self) -> bool {
        Surd::is_zero(self)
    }
}

fn sgn(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut m = d;
    let mut f = 2u64;
    while f * f <= m && f < 1_000_000 {
        if m % f == 0 {
            m /= f;
            if m % f == 0 {
                return false;
            }
        }
        f += 1;
    }
    // Leftover cofactor is 1, a prime, a product of two distinct primes
    // above the trial bound, or a prime square; only the square is bad.
    let s = (m as f64).sqrt() as u64;
    for c in s.saturating_sub(1)..=s + 1 {
        if (c as u128) * (c as u128) == m as u128 {
            return false;
        }
    }
    true
}

impl Surd {
    /// `(p + q*sqrt(d)) / r`, normalized.  Panics on `r = 0` or non-square-free `d`.
    pub fn new<P, Q, R>(p: P, q: Q, r: R, d: u64) -> Surd
    where
        BigInt: From<P> + From<Q> + From<R>,
    {
        Surd::make(BigInt::from(p), BigInt::from(q), BigInt::from(r), d)
    }

    fn make(mut p: BigInt, mut q: BigInt, mut r: BigInt, d: u64) -> Surd {
        assert!(!r.is_zero(), "surd denominator must be nonzero");
        assert!(is_square_free(d), "surd field index {d} is not square-free");
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= g;
        }
        Surd { p, q, r, d }
    }

    pub fn zero(d: u64) -> Surd {
        Surd::new(0, 0, 1, d)
    }

    pub fn one(d: u64) -> Surd {
        Surd::new(1, 0, 1, d)
    }

    pub fn from_int<T>(n: T, d: u64) -> Surd
    where
        BigInt: From<T>,
    {
        Surd::make(BigInt::from(n), BigInt::zero(), BigInt::one(), d)
    }

    pub fn from_rational(x: &BigRational, d: u64) -> Surd {
        Surd::make(x.numer().clone(), BigInt::zero(), x.denom().clone(), d)
    }

    /// sqrt(d) itself.
    pub fn root(d: u64) -> Surd {
        Surd::new(0, 1, 1, d)
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }
    pub fn q(&self) -> &BigInt {
        &self.q
    }
    pub fn r(&self) -> &BigInt {
        &self.r
    }
    pub fn disc(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.q.is_zero() {
            Some(BigRational::new(self.p.clone(), self.r.clone()))
        } else {
            None
        }
    }

    fn check_field(&self, other: &Surd) -> u64 {
        // Rationals are field-agnostic.
        if self.q.is_zero() && !other.q.is_zero() {
            return other.d;
        }
        if other.q.is_zero() {
            return self.d;
        }
        assert_eq!(
            self.d, other.d,
            "mixed surd fields rejected: sqrt({}) vs sqrt({})",
            self.d, other.d
        );
        self.d
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let (sp, sq) = (sgn(&self.p), sgn(&self.q));
        if sq == 0 {
            return sp;
        }
        if sp == 0 || sp == sq {
            return sq;
        }
        // p and q*sqrt(d) have opposite signs: compare p^2 with q^2 d.
        let p2 = &self.p * &self.p;
        let q2d = &self.q * &self.q * BigInt::from(self.d);
        match p2.cmp(&q2d) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0, // unreachable for square-free d >= 2
        }
    }

    pub fn abs(&self) -> Surd {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Surd {
        assert!(!self.is_zero(), "division by zero surd");
        // r / (p + q sqrt d) = r (p - q sqrt d) / (p^2 - q^2 d)
        let norm = &self.p * &self.p - &self.q * &self.q * BigInt::from(self.d);
        Surd::make(&self.r * &self.p, -(&self.r * &self.q), norm, self.d)
    }

    pub fn pow(&self, n: i64) -> Surd {
        if n < 0 {
            return self.inv().pow(-n);
        }
        let mut acc = Surd::one(self.d);
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Nearest-double approximation; good to a few ulps for moderate sizes.
    pub fn to_f64(&self) -> f64 {
        let rat = BigRational::new(self.p.clone(), self.r.clone())
            .to_f64()
            .unwrap_or(f64::NAN);
        let irr = BigRational::new(self.q.clone(), self.r.clone())
            .to_f64()
            .unwrap_or(f64::NAN);
        rat + irr * (self.d as f64).sqrt()
    }

    /// Correctly adjusted floor, exact.
    pub fn floor_bigint(&self) -> BigInt {
        let mut n = BigInt::from(self.to_f64().floor() as i64);
        // Fix up the float estimate with exact comparisons.
        while self.cmp_int(&n) == Ordering::Less {
            n -= 1;
        }
        loop {
            let next = &n + 1;
            if self.cmp_int(&next) != Ordering::Less {
                n = next;
            } else {
                break;
            }
        }
        n
    }

    fn cmp_int(&self, n: &BigInt) -> Ordering {
        (self - &Surd::make(n.clone(), BigInt::zero(), BigInt::one(), self.d))
            .signum()
            .cmp(&0)
    }
}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let d = self.check_field(rhs);
        Surd::make(
            &self.p * &rhs.r + &rhs.p * &self.r,
            &self.q * &rhs.r + &rhs.q * &self.r,
            &self.r * &rhs.r,
            d,
        )
    }
}

impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        self + &(-rhs)
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let d = self.check_field(rhs);
        let dd = BigInt::from(d);
        Surd::make(
            &self.p * &rhs.p + &self.q * &rhs.q * dd,
            &self.p * &rhs.q + &self.q * &rhs.p,
            &self.r * &rhs.r,
            d,
        )
    }
}

impl Div for &Surd {
    type Output = Surd;
    fn div(self, rhs: &Surd) -> Surd {
        self * &rhs.inv()
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            p: -&self.p,
            q: -&self.q,
            r: self.r.clone(),
            d: self.d,
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $m:ident),*) => {$(
        impl $trait for Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd { $trait::$m(&self, &rhs) }
        }
        impl $trait<&Surd> for Surd {
            type Output = Surd;
            fn $m(self, rhs: &Surd) -> Surd { $trait::$m(&self, rhs) }
        }
        impl $trait<Surd> for &Surd {
            type Output = Surd;
            fn $m(self, rhs: Surd) -> Surd { $trait::$m(self, &rhs) }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

impl PartialOrd for Surd {
    fn partial_cmp(&self, other: &Surd) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Surd {
    fn cmp(&self, other: &Surd) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            return if self.r.is_one() {
                write!(f, "{}", self.p)
            } else {
                write!(f, "{}/{}", self.p, self.r)
            };
        }
        let root = if self.q.abs().is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.q.abs(), self.d)
        };
        let numer = if self.p.is_zero() {
            if self.q.is_negative() {
                format!("-{root}")
            } else {
                root
            }
        } else if self.q.is_negative() {
            format!("{} - {root}", self.p)
        } else {
            format!("{} + {root}", self.p)
        };
        if self.r.is_one() {
            write!(f, "{numer}")
        } else {
            write!(f, "({numer})/{}", self.r)
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
