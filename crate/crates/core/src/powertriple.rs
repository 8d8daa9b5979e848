//! The ordered semigroup of power-triples `(n, a, b)` attached to a word's
//! matrix M, its order embedding into the line, and the translations it
//! indexes.
//!
//! `(n, a, b)` and `(n-1, (a,b)·M)` denote the same class (row-vector
//! convention).  The canonical representative sits at the largest level at
//! which both coordinates are still nonnegative.  The embedding
//! `iota(n,a,b) = t^n * proj(a,b)` (leading eigen-covector coefficient) is
//! exact, order-preserving and additive; `T^(n,a,b)` translates the line by
//! `t^-n (b w - a v)`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::rotnum::EigenData;
use crate::surd::Surd;
use crate::{Error, Result};

/// Hard bound on |level| before operations report overflow.
pub const MAX_LEVEL: i64 = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PowerTriple {
    pub n: i64,
    pub a: BigInt,
    pub b: BigInt,
}

impl PowerTriple {
    pub fn new<A, B>(n: i64, a: A, b: B) -> PowerTriple
    where
        BigInt: From<A> + From<B>,
    {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        assert!(
            !a.is_negative() && !b.is_negative(),
            "power-triple coordinates must be nonnegative"
        );
        PowerTriple { n, a, b }
    }

    pub fn zero() -> PowerTriple {
        PowerTriple::new(0, 0, 0)
    }

    pub fn is_zero_class(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `t * P`, an automorphism of the ordered semigroup.
    pub fn scale_by_t(&self) -> PowerTriple {
        PowerTriple {
            n: self.n + 1,
            a: self.a.clone(),
            b: self.b.clone(),
        }
    }
}

impl fmt::Display for PowerTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n, self.a, self.b)
    }
}

/// Eigen data plus the cached covector pieces every triple operation needs.
#[derive(Clone, Debug)]
pub struct TriplesContext {
    pub eigen: EigenData,
    /// Second component of the leading eigen-covector e_t = (1, e2).
    pub e2: Surd,
    /// proj(a, b) = a * coeff_a + b * coeff_b.
    coeff_a: Surd,
    coeff_b: Surd,
}

impl TriplesContext {
    pub fn new(eigen: EigenData) -> TriplesContext {
        let m = &eigen.matrix;
        let d = eigen.disc;
        let m11 = Surd::from_int(m.m11.clone(), d);
        let m21 = Surd::from_int(m.m21.clone(), d);
        let e2 = &(&eigen.t - &m11) / &m21;
        // e_t * M = t * e_t, exactly.
        let m12 = Surd::from_int(m.m12.clone(), d);
        let m22 = Surd::from_int(m.m22.clone(), d);
        assert!(&m11 + &(&e2 * &m21) == eigen.t);
        assert!(&m12 + &(&e2 * &m22) == &eigen.t * &e2);

        let coeff_a = &(&m11 - &eigen.t_inv) / &eigen.sqrt_delta;
        let coeff_b = &m21 / &eigen.sqrt_delta;
        assert!(coeff_a.signum() > 0 && coeff_b.signum() > 0);
        TriplesContext {
            eigen,
            e2,
            coeff_a,
            coeff_b,
        }
    }

    pub fn disc(&self) -> u64 {
        self.eigen.disc
    }

    pub fn t_pow(&self, n: i64) -> Surd {
        self.eigen.t.pow(n)
    }

    /// Base widths at a level: v_n = t^-n v, w_n = t^-n w.
    pub fn v_at(&self, n: i64) -> Surd {
        &self.t_pow(-n) * &self.eigen.v
    }

    pub fn w_at(&self, n: i64) -> Surd {
        &self.t_pow(-n) * &self.eigen.w
    }

    fn proj(&self, a: &BigInt, b: &BigInt) -> Surd {
        let d = self.disc();
        &(&Surd::from_int(a.clone(), d) * &self.coeff_a)
            + &(&Surd::from_int(b.clone(), d) * &self.coeff_b)
    }

    /// The order embedding: exact, positive on nonzero classes.
    pub fn iota(&self, p: &PowerTriple) -> Surd {
        if p.is_zero_class() {
            return Surd::zero(self.disc());
        }
        &self.t_pow(p.n) * &self.proj(&p.a, &p.b)
    }

    /// Displacement of the translation `T^P`: `t^-n (b w - a v)`.
    pub fn translation_of(&self, p: &PowerTriple) -> Surd {
        let d = self.disc();
        let bw = &Surd::from_int(p.b.clone(), d) * &self.eigen.w;
        let av = &Surd::from_int(p.a.clone(), d) * &self.eigen.v;
        &self.t_pow(-p.n) * &(&bw - &av)
    }

    /// `b_P = t^-n (a v - b w)`, the preimage of 0 under `T^P`.
    pub fn b_point(&self, p: &PowerTriple) -> Surd {
        -self.translation_of(p)
    }

    /// Representative at the largest level with nonnegative coordinates.
    pub fn canonical(&self, p: &PowerTriple) -> PowerTriple {
        if p.is_zero_class() {
            return PowerTriple::zero();
        }
        let inv = self.eigen.matrix.inverse();
        let (mut n, mut a, mut b) = (p.n, p.a.clone(), p.b.clone());
        loop {
            let (a2, b2) = inv.apply_row(&a, &b);
            if a2.is_negative() || b2.is_negative() {
                break;
            }
            n += 1;
            a = a2;
            b = b2;
            assert!(n <= 4 * MAX_LEVEL, "canonicalization runaway");
        }
        PowerTriple { n, a, b }
    }

    pub fn class_eq(&self, p: &PowerTriple, q: &PowerTriple) -> bool {
        self.canonical(p) == self.canonical(q)
    }

    /// Coordinates of the class at a given (low enough) level, if they exist.
    pub fn representative_at(&self, p: &PowerTriple, level: i64) -> Option<(BigInt, BigInt)> {
        let c = self.canonical(p);
        if level > c.n {
            return None;
        }
        let (mut a, mut b) = (c.a, c.b);
        for _ in 0..(c.n - level) {
            let (a2, b2) = self.eigen.matrix.apply_row(&a, &b);
            a = a2;
            b = b2;
        }
        Some((a, b))
    }

    pub fn compare(&self, p: &PowerTriple, q: &PowerTriple) -> Ordering {
        self.iota(p).cmp(&self.iota(q))
    }

    pub fn add(&self, p: &PowerTriple, q: &PowerTriple) -> Result<PowerTriple> {
        // Every representative's level is at or below its canonical level,
        // so min(p.n, q.n) admits coordinates for both classes.
        let level = p.n.min(q.n);
        if level < -MAX_LEVEL {
            return Err(Error::LevelRange(level));
        }
        let (pa, pb) = self.representative_at(p, level).expect("level low enough");
        let (qa, qb) = self.representative_at(q, level).expect("level low enough");
        Ok(self.canonical(&PowerTriple {
            n: level,
            a: pa + qa,
            b: pb + qb,
        }))
    }

    /// `P - Q`; requires `P >= Q`.
    pub fn subtract(&self, p: &PowerTriple, q: &PowerTriple) -> Result<PowerTriple> {
        match self.compare(p, q) {
            Ordering::Less => {
                return Err(Error::Domain(format!(
                    "cannot subtract: {p} < {q} in the semigroup order"
                )))
            }
            Ordering::Equal => return Ok(PowerTriple::zero()),
            Ordering::Greater => {}
        }
        let level = p.n.min(q.n);
        let (pa, pb) = self.representative_at(p, level).expect("level low enough");
        let (qa, qb) = self.representative_at(q, level).expect("level low enough");
        let (mut n, mut a, mut b) = (level, pa - qa, pb - qb);
        // Push down until both coordinates are nonnegative; guaranteed to
        // terminate for a nonnegative class within the level budget.
        while a.is_negative() || b.is_negative() {
            if n <= -MAX_LEVEL {
                return Err(Error::LevelRange(n));
            }
            let (a2, b2) = self.eigen.matrix.apply_row(&a, &b);
            a = a2;
            b = b2;
            n -= 1;
        }
        Ok(self.canonical(&PowerTriple { n, a, b }))
    }

    /// All lattice points `(a, b) >= 0` at `level` with `iota <= bound`,
    /// including the zero point.  The count is budget-checked.
    pub fn level_lattice(
        &self,
        level: i64,
        bound: &Surd,
        budget: usize,
    ) -> Result<Vec<(BigInt, BigInt, Surd)>> {
        let mut out = Vec::new();
        let scale = self.t_pow(level);
        let ca = &scale * &self.coeff_a;
        let cb = &scale * &self.coeff_b;
        let mut a = BigInt::zero();
        loop {
            let base = &Surd::from_int(a.clone(), self.disc()) * &ca;
            if (&base - bound).signum() > 0 {
                break;
            }
            let mut b = BigInt::zero();
            loop {
                let iota = &base + &(&Surd::from_int(b.clone(), self.disc()) * &cb);
                if (&iota - bound).signum() > 0 {
                    break;
                }
                out.push((a.clone(), b.clone(), iota));
                if out.len() > budget {
                    return Err(Error::Budget(format!(
                        "level-{level} lattice exceeds {budget} points"
                    )));
                }
                b += 1;
            }
            a += 1;
        }
        Ok(out)
    }
}
