//! Rotation numbers, the two-branch renormalization map on them, branch
//! words, their matrices, and exact periodic-point (eigen) data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::Float;
use std::cmp::Ordering;
use std::fmt;

use crate::hp;
use crate::surd::Surd;
use crate::{Error, Result};

/// Default working precision (bits) for the float representation.
pub const FLOAT_PREC: u32 = 64;

const MAX_PERIOD: usize = 64;

// ---------------------------------------------------------------------------
// Rotation numbers

/// An angle in [0, 1), exact where possible.
#[derive(Clone, Debug)]
pub enum RotationNumber {
    Rational(BigRational),
    Quadratic(Surd),
    /// High-precision float with an absolute error bound.
    Float { value: Float, err: f64 },
}

impl RotationNumber {
    pub fn from_rational(x: BigRational) -> RotationNumber {
        let f = x.floor();
        RotationNumber::Rational(x - f)
    }

    pub fn from_ints(num: i64, den: i64) -> RotationNumber {
        RotationNumber::from_rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_surd(x: Surd) -> RotationNumber {
        let f = Surd::from_int(x.floor_bigint(), x.disc());
        let y = &x - &f;
        match y.as_rational() {
            Some(r) => RotationNumber::Rational(r),
            None => RotationNumber::Quadratic(y),
        }
    }

    pub fn from_f64(x: f64) -> RotationNumber {
        let v = x - x.floor();
        RotationNumber::Float {
            value: Float::with_val(FLOAT_PREC, v),
            err: x.abs() * f64::EPSILON * 2.0,
        }
    }

    /// Parses `p/q`, `surd:p,q,r,D`, or a decimal literal (taken exactly).
    pub fn parse(s: &str) -> Result<RotationNumber> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("surd:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 4 {
                return Err(Error::Domain(format!(
                    "surd literal needs p,q,r,D — got `{rest}`"
                )));
            }
            let p: BigInt = parts[0]
                .trim()
                .parse()
                .map_err(|e| Error::Domain(format!("bad surd p: {e}")))?;
            let q: BigInt = parts[1]
                .trim()
                .parse()
                .map_err(|e| Error::Domain(format!("bad surd q: {e}")))?;
            let r: BigInt = parts[2]
                .trim()
                .parse()
                .map_err(|e| Error::Domain(format!("bad surd r: {e}")))?;
            let d: u64 = parts[3]
                .trim()
                .parse()
                .map_err(|e| Error::Domain(format!("bad surd D: {e}")))?;
            if r.is_zero() {
                return Err(Error::Domain("surd r must be nonzero".into()));
            }
            if !crate::surd::is_square_free(d) {
                return Err(Error::Domain(format!("surd D = {d} is not square-free")));
            }
            return Ok(RotationNumber::from_surd(Surd::new(p, q, r, d)));
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|e| Error::Domain(format!("bad numerator: {e}")))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|e| Error::Domain(format!("bad denominator: {e}")))?;
            if d.is_zero() {
                return Err(Error::Domain("zero denominator".into()));
            }
            return Ok(RotationNumber::from_rational(BigRational::new(n, d)));
        }
        // Decimal literal, read exactly as num/10^k.
        let (sign, digits) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((a, b)) => (a, b),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Domain(format!("cannot parse rotation number `{s}`")));
        }
        let joined = format!(
            "{}{}",
            if int_part.is_empty() { "0" } else { int_part },
            frac_part
        );
        let n: BigInt = joined
            .parse()
            .map_err(|e| Error::Domain(format!("bad decimal `{s}`: {e}")))?;
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        Ok(RotationNumber::from_rational(BigRational::new(
            n * BigInt::from(sign),
            den,
        )))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RotationNumber::Rational(x) => x.is_zero(),
            RotationNumber::Quadratic(x) => x.is_zero(),
            RotationNumber::Float { value, .. } => value.is_zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RotationNumber::Rational(x) => x.to_f64().unwrap_or(f64::NAN),
            RotationNumber::Quadratic(x) => x.to_f64(),
            RotationNumber::Float { value, .. } => value.to_f64(),
        }
    }

    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            RotationNumber::Rational(x) => hp::rational_to_float(x, prec),
            RotationNumber::Quadratic(x) => hp::surd_to_float(x, prec),
            RotationNumber::Float { value, .. } => Float::with_val(prec, value),
        }
    }

    /// Exact equality for exact representations; floats compare by value.
    pub fn exact_eq(&self, other: &RotationNumber) -> bool {
        use RotationNumber::*;
        match (self, other) {
            (Rational(a), Rational(b)) => a == b,
            (Quadratic(a), Quadratic(b)) => a == b,
            (Rational(a), Quadratic(b)) | (Quadratic(b), Rational(a)) => {
                b.as_rational().map(|r| r == *a).unwrap_or(false)
            }
            (Float { value: a, .. }, Float { value: b, .. }) => a == b,
            _ => false,
        }
    }

    /// Compares against 1/2; floats whose error bound straddles fail loudly.
    fn cmp_half(&self) -> Result<Ordering> {
        match self {
            RotationNumber::Rational(x) => {
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                Ok(x.cmp(&half))
            }
            RotationNumber::Quadratic(x) => {
                let half = Surd::new(1, 0, 2, x.disc());
                Ok(x.cmp(&half))
            }
            RotationNumber::Float { value, err } => {
                let v = value.to_f64();
                if (v - 0.5).abs() <= *err {
                    Err(Error::Ambiguous {
                        value: v,
                        err: *err,
                        pivot: 0.5,
                    })
                } else if v < 0.5 {
                    Ok(Ordering::Less)
                } else {
                    Ok(Ordering::Greater)
                }
            }
        }
    }
}

impl fmt::Display for RotationNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RotationNumber::Rational(x) => write!(f, "{}/{}", x.numer(), x.denom()),
            RotationNumber::Quadratic(x) => write!(f, "{x}"),
            RotationNumber::Float { value, .. } => write!(f, "{}", hp::fmt17(value)),
        }
    }
}

// ---------------------------------------------------------------------------
// The renormalization map

/// One step of the two-branch map: `theta/(1-theta)` on (0, 1/2],
/// `(2 theta - 1)/theta` on [1/2, 1).  At 1/2 both give 1 = 0 mod 1.
pub fn prime_renorm(theta: &RotationNumber) -> Result<RotationNumber> {
    if theta.is_zero() {
        return Err(Error::Domain(
            "renormalization is undefined at the cusp 0".into(),
        ));
    }
    let left = theta.cmp_half()? != Ordering::Greater;
    match theta {
        RotationNumber::Rational(x) => {
            let one = BigRational::one();
            let y = if left {
                x / (&one - x)
            } else {
                (x + x - &one) / x
            };
            Ok(RotationNumber::from_rational(y))
        }
        RotationNumber::Quadratic(x) => {
            let one = Surd::one(x.disc());
            let y = if left {
                x / &(&one - x)
            } else {
                &(&(x + x) - &one) / x
            };
            Ok(RotationNumber::from_surd(y))
        }
        RotationNumber::Float { value, err } => {
            let prec = value.prec();
            let v = value.to_f64();
            if v - err <= 0.0 {
                return Err(Error::Ambiguous {
                    value: v,
                    err: *err,
                    pivot: 0.0,
                });
            }
            let (y, dmax) = if left {
                let denom = Float::with_val(prec, 1) - value;
                let dmin = (1.0 - (v + err)).max(f64::MIN_POSITIVE);
                (
                    Float::with_val(prec, value / &denom),
                    1.0 / (dmin * dmin),
                )
            } else {
                let numer = Float::with_val(prec, 2 * value) - 1;
                let dmin = v - err;
                (numer / value, 1.0 / (dmin * dmin))
            };
            let yf = y.to_f64();
            let new_err = err * dmax * (1.0 + 1e-12) + yf.abs() * 2.0f64.powi(2 - prec as i32);
            let reduced = if y >= 1 { y - 1 } else { y };
            Ok(RotationNumber::Float {
                value: reduced,
                err: new_err,
            })
        }
    }
}

/// The parameter-plane operator acts on rotation numbers by the same formula;
/// kept as its own entry point.
pub fn molecule_map(theta: &RotationNumber) -> Result<RotationNumber> {
    prime_renorm(theta)
}

/// Vector form on the closed quadrant `v_minus <= 0 <= w`:
/// `(v_minus + w, w)` when `v >= w`, else `(v_minus, w + v_minus)`.
pub fn prime_renorm_vec<T>(v_minus: T, w: T) -> Result<(T, T)>
where
    T: Clone + PartialOrd + Zero + std::ops::Add<Output = T> + std::ops::Neg<Output = T>,
{
    let zero = T::zero();
    if v_minus > zero || w < zero || (v_minus == zero && w == zero) {
        return Err(Error::Domain(
            "prime_renorm_vec needs v_minus <= 0 <= w, not both zero".into(),
        ));
    }
    let v = -v_minus.clone();
    if v >= w {
        Ok((v_minus.clone() + w.clone(), w))
    } else {
        Ok((v_minus.clone(), w + v_minus))
    }
}

// ---------------------------------------------------------------------------
// Words and matrices

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum BranchSymbol {
    L,
    R,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RenormWord(Vec<BranchSymbol>);

impl RenormWord {
    pub fn parse(s: &str) -> Result<RenormWord> {
        let mut syms = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                'L' | 'l' => syms.push(BranchSymbol::L),
                'R' | 'r' => syms.push(BranchSymbol::R),
                _ => {
                    return Err(Error::Domain(format!(
                        "word may only contain L and R, found `{c}`"
                    )))
                }
            }
        }
        if syms.is_empty() {
            return Err(Error::Domain("empty word".into()));
        }
        Ok(RenormWord(syms))
    }

    pub fn symbols(&self) -> &[BranchSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn has_both_symbols(&self) -> bool {
        self.0.contains(&BranchSymbol::L) && self.0.contains(&BranchSymbol::R)
    }
}

impl fmt::Display for RenormWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            match s {
                BranchSymbol::L => write!(f, "L")?,
                BranchSymbol::R => write!(f, "R")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RenormWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// 2x2 nonnegative integer matrix with determinant 1, built from a word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AntiRenormMatrix {
    pub m11: BigInt,
    pub m12: BigInt,
    pub m21: BigInt,
    pub m22: BigInt,
}

impl AntiRenormMatrix {
    pub fn identity() -> Self {
        Self::from_rows(1, 0, 0, 1)
    }

    pub fn from_rows<T>(m11: T, m12: T, m21: T, m22: T) -> Self
    where
        BigInt: From<T>,
    {
        AntiRenormMatrix {
            m11: m11.into(),
            m12: m12.into(),
            m21: m21.into(),
            m22: m22.into(),
        }
    }

    pub fn elementary(sym: BranchSymbol) -> Self {
        match sym {
            BranchSymbol::L => Self::from_rows(1, 0, 1, 1),
            BranchSymbol::R => Self::from_rows(1, 1, 0, 1),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        AntiRenormMatrix {
            m11: &self.m11 * &rhs.m11 + &self.m12 * &rhs.m21,
            m12: &self.m11 * &rhs.m12 + &self.m12 * &rhs.m22,
            m21: &self.m21 * &rhs.m11 + &self.m22 * &rhs.m21,
            m22: &self.m21 * &rhs.m12 + &self.m22 * &rhs.m22,
        }
    }

    pub fn det(&self) -> BigInt {
        &self.m11 * &self.m22 - &self.m12 * &self.m21
    }

    pub fn trace(&self) -> BigInt {
        &self.m11 + &self.m22
    }

    /// Inverse of a determinant-1 matrix.
    pub fn inverse(&self) -> Self {
        assert!(self.det().is_one(), "inverse requires determinant 1");
        AntiRenormMatrix {
            m11: self.m22.clone(),
            m12: -&self.m12,
            m21: -&self.m21,
            m22: self.m11.clone(),
        }
    }

    /// Row vector times matrix: `(a, b) * M`.
    pub fn apply_row(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        (
            a * &self.m11 + b * &self.m21,
            a * &self.m12 + b * &self.m22,
        )
    }

    /// Matrix times column vector of surds.
    pub fn apply_col(&self, x: &Surd, y: &Surd) -> (Surd, Surd) {
        let d = if x.is_rational() { y.disc() } else { x.disc() };
        let scale = |m: &BigInt, s: &Surd| &Surd::from_int(m.clone(), d) * s;
        (
            &scale(&self.m11, x) + &scale(&self.m12, y),
            &scale(&self.m21, x) + &scale(&self.m22, y),
        )
    }
}

impl fmt::Display for AntiRenormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m11, self.m12, self.m21, self.m22
        )
    }
}

/// Word to matrix: the first-fired branch is the rightmost factor in the
/// column-vector convention, so "LR" gives M_R * M_L = [[2,1],[1,1]].
pub fn word_to_matrix(word: &RenormWord) -> Result<AntiRenormMatrix> {
    if word.is_empty() {
        return Err(Error::Domain("empty word has no matrix".into()));
    }
    let mut m = AntiRenormMatrix::identity();
    for &sym in word.symbols() {
        m = AntiRenormMatrix::elementary(sym).mul(&m);
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Eigen data of a word

/// Exact spectral data of a two-symbol word: periodic point, leading
/// eigenvalue t and the scaling rate t^2.
#[derive(Clone, Debug)]
pub struct EigenData {
    pub word: RenormWord,
    pub matrix: AntiRenormMatrix,
    /// Square-free field index D with t in Q(sqrt(D)).
    pub disc: u64,
    pub t: Surd,
    pub t_inv: Surd,
    pub lambda_star: Surd,
    pub theta_star: Surd,
    /// v = theta_star, w = 1 - theta_star; (-v, w) spans the contracting
    /// eigendirection and v + w = 1.
    pub v: Surd,
    pub w: Surd,
    /// t - 1/t = s*sqrt(D), the square root of trace^2 - 4.
    pub sqrt_delta: Surd,
}

fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128 + 2;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            break;
        }
        x = y;
    }
    x
}

/// Splits `n = s^2 * d` with d square-free.
fn squarefree_decompose(n: &BigInt) -> Result<(BigInt, u64)> {
    let mut m = n
        .to_u128()
        .ok_or_else(|| Error::Precision("discriminant too large to factor".into()))?;
    if m == 0 {
        return Err(Error::Domain("zero discriminant".into()));
    }
    let mut s: u128 = 1;
    let mut d: u128 = 1;
    let mut f: u128 = 2;
    while f * f <= m && f <= 10_000_000 {
        if m % f == 0 {
            let mut e = 0u32;
            while m % f == 0 {
                m /= f;
                e += 1;
            }
            for _ in 0..e / 2 {
                s *= f;
            }
            if e % 2 == 1 {
                d *= f;
            }
        }
        f += 1;
    }
    if m > 1 {
        let r = isqrt_u128(m);
        let folded = r * r == m;
        if folded {
            s *= r;
        }
        if !folded {
            if m < 100_000_000_000_000 {
                // no factors below 1e7, below 1e14, not a square: prime
                d *= m;
            } else {
                return Err(Error::Precision(
                    "cannot certify square-free part of discriminant".into(),
                ));
            }
        }
    }
    let d64 = u64::try_from(d)
        .map_err(|_| Error::Precision("square-free part exceeds u64".into()))?;
    Ok((BigInt::from(s), d64))
}

/// Exact eigen data for a word containing both symbols.
pub fn periodic_point(word: &RenormWord) -> Result<EigenData> {
    if !word.has_both_symbols() {
        return Err(Error::NotHyperbolic(format!(
            "word \"{word}\" uses a single branch; its fixed point degenerates to 0"
        )));
    }
    let matrix = word_to_matrix(word)?;
    assert!(matrix.det().is_one());
    let tr = matrix.trace();
    let delta = &tr * &tr - BigInt::from(4);
    assert!(delta.is_positive(), "two-symbol words have trace >= 3");
    let (s, disc) = squarefree_decompose(&delta)?;

    let t = Surd::new(tr.clone(), s.clone(), BigInt::from(2), disc);
    let t_inv = Surd::new(tr.clone(), -s.clone(), BigInt::from(2), disc);
    assert!((&t * &t_inv) == Surd::one(disc));
    let lambda_star = &t * &t;
    let sqrt_delta = Surd::new(BigInt::zero(), s, BigInt::one(), disc);

    // theta = 2 m12 / (2 m12 + m11 - m22 + sqrt(delta))
    let two_m12 = &matrix.m12 + &matrix.m12;
    let numer = Surd::from_int(two_m12.clone(), disc);
    let denom = &Surd::from_int(two_m12 + &matrix.m11 - &matrix.m22, disc) + &sqrt_delta;
    let theta_star = &numer / &denom;
    let v = theta_star.clone();
    let w = &Surd::one(disc) - &theta_star;

    // Exact sanity: the contracting eigendirection and the branch itinerary.
    assert!(theta_star.signum() > 0 && (&Surd::one(disc) - &theta_star).signum() > 0);
    let (mv, mw) = matrix.apply_col(&-&v, &w);
    assert!(mv == &t_inv * &-&v && mw == &t_inv * &w, "eigen check failed");
    let mut x = RotationNumber::Quadratic(theta_star.clone());
    for &sym in word.symbols() {
        let is_left = x.cmp_half()? != Ordering::Greater;
        assert_eq!(
            is_left,
            sym == BranchSymbol::L,
            "itinerary of theta_star deviates from the word"
        );
        x = prime_renorm(&x)?;
    }
    assert!(
        x.exact_eq(&RotationNumber::Quadratic(theta_star.clone())),
        "theta_star is not fixed by its word"
    );

    Ok(EigenData {
        word: word.clone(),
        matrix,
        disc,
        t,
        t_inv,
        lambda_star,
        theta_star,
        v,
        w,
        sqrt_delta,
    })
}

// ---------------------------------------------------------------------------
// Itineraries

/// Branch word of the first `steps` iterates; truncated (flagged) when the
/// orbit hits 0, which happens exactly for rationals.
pub fn itinerary(theta: &RotationNumber, steps: usize) -> Result<(RenormWord, bool)> {
    if theta.is_zero() {
        return Err(Error::Domain("itinerary undefined at 0".into()));
    }
    let mut syms = Vec::with_capacity(steps);
    let mut x = theta.clone();
    for _ in 0..steps {
        if x.is_zero() {
            return Ok((RenormWord(syms), true));
        }
        let sym = if x.cmp_half()? != Ordering::Greater {
            BranchSymbol::L
        } else {
            BranchSymbol::R
        };
        syms.push(sym);
        x = prime_renorm(&x)?;
    }
    Ok((RenormWord(syms), false))
}

/// Which branch fires at theta: L on (0, 1/2], R on (1/2, 1).
pub fn branch_at(theta: &RotationNumber) -> Result<BranchSymbol> {
    if theta.is_zero() {
        return Err(Error::Domain("no branch at 0".into()));
    }
    Ok(if theta.cmp_half()? != Ordering::Greater {
        BranchSymbol::L
    } else {
        BranchSymbol::R
    })
}

// ---------------------------------------------------------------------------
// Antirenormalization branches

/// The two inverse branches: `1/3` lands in (1/2, 1), `2/3` in (0, 1/2).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AntiBranch {
    OneThird,
    TwoThirds,
}

impl fmt::Display for AntiBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AntiBranch::OneThird => write!(f, "1/3"),
            AntiBranch::TwoThirds => write!(f, "2/3"),
        }
    }
}

/// Inverse branch: `1/(2-mu)` (the 1/3 branch) or `mu/(1+mu)` (the 2/3
/// branch).  Exact inverse of `prime_renorm` on the matching side.
pub fn antirenorm_rotation(mu: &RotationNumber, branch: AntiBranch) -> Result<RotationNumber> {
    if mu.is_zero() {
        return Err(Error::Domain("antirenormalization needs mu in (0,1)".into()));
    }
    match mu {
        RotationNumber::Rational(x) => {
            if x.is_negative() || *x >= BigRational::one() {
                return Err(Error::Domain("mu outside (0,1)".into()));
            }
            let one = BigRational::one();
            let y = match branch {
                AntiBranch::OneThird => &one / (&one + &one - x),
                AntiBranch::TwoThirds => x / (&one + x),
            };
            Ok(RotationNumber::Rational(y))
        }
        RotationNumber::Quadratic(x) => {
            let one = Surd::one(x.disc());
            if x.signum() < 0 || (x - &one).signum() >= 0 {
                return Err(Error::Domain("mu outside (0,1)".into()));
            }
            let y = match branch {
                AntiBranch::OneThird => one.clone() / (&(&one + &one) - x),
                AntiBranch::TwoThirds => x / &(&one + x),
            };
            Ok(RotationNumber::Quadratic(y))
        }
        RotationNumber::Float { value, err } => {
            let prec = value.prec();
            let y = match branch {
                AntiBranch::OneThird => Float::with_val(prec, 1) / Float::with_val(prec, 2 - value.clone()),
                AntiBranch::TwoThirds => {
                    Float::with_val(prec, value) / Float::with_val(prec, 1 + value.clone())
                }
            };
            // Both branches are contractions (|f'| <= 1 on (0,1)).
            let new_err = err + y.to_f64().abs() * 2.0f64.powi(2 - prec as i32);
            Ok(RotationNumber::Float {
                value: y,
                err: new_err,
            })
        }
    }
}

/// Exact period under `prime_renorm`, up to a fixed search bound.
pub fn find_period(theta: &RotationNumber) -> Result<usize> {
    match theta {
        RotationNumber::Float { .. } => Err(Error::NotPeriodic),
        _ => {
            let mut x = theta.clone();
            for k in 1..=MAX_PERIOD {
                x = prime_renorm(&x)?;
                if x.exact_eq(theta) {
                    return Ok(k);
                }
                if x.is_zero() {
                    return Err(Error::NotPeriodic);
                }
            }
            Err(Error::NotPeriodic)
        }
    }
}

/// Branch word of the inverse operator at step `i` (1-based): 2/3 when the
/// (i-1)-st forward iterate of theta_star lies in (0, 1/2], 1/3 otherwise.
/// In other words, the i-th symbol of the word: L -> 2/3, R -> 1/3.
pub fn antirenorm_branch_for(theta_star: &RotationNumber, i: usize) -> Result<AntiBranch> {
    let m = find_period(theta_star)?;
    if i < 1 || i > m {
        return Err(Error::Domain(format!(
            "step index {i} outside 1..={m} (the exact period)"
        )));
    }
    let mut x = theta_star.clone();
    for _ in 0..i - 1 {
        x = prime_renorm(&x)?;
    }
    Ok(if x.cmp_half()? != Ordering::Greater {
        AntiBranch::TwoThirds
    } else {
        AntiBranch::OneThird
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> RotationNumber {
        RotationNumber::from_ints(n, d)
    }

    #[test]
    fn prime_renorm_rationals() {
        let y = prime_renorm(&rat(1, 3)).unwrap();
        assert!(y.exact_eq(&rat(1, 2)));
        let y = prime_renorm(&rat(1, 2)).unwrap();
        assert!(y.exact_eq(&rat(0, 1)));
        let y = prime_renorm(&rat(2, 5)).unwrap();
        assert!(y.exact_eq(&rat(2, 3)));
        let y = prime_renorm(&rat(2, 3)).unwrap();
        assert!(y.exact_eq(&rat(1, 2)));
        assert!(prime_renorm(&rat(0, 1)).is_err());
    }

    #[test]
    fn golden_two_cycle_exact() {
        let theta = RotationNumber::Quadratic(Surd::new(3, -1, 2, 5));
        let y = prime_renorm(&theta).unwrap();
        // (3-sqrt5)/2 -> (sqrt5-1)/2
        assert!(y.exact_eq(&RotationNumber::Quadratic(Surd::new(-1, 1, 2, 5))));
        let z = prime_renorm(&y).unwrap();
        assert!(z.exact_eq(&theta));
    }

    #[test]
    fn float_branch_example() {
        let x = RotationNumber::from_f64(0.618034);
        let y = prime_renorm(&x).unwrap();
        assert!((y.to_f64() - 0.381966).abs() < 1e-5);
    }

    #[test]
    fn float_ambiguity_is_loud() {
        let x = RotationNumber::Float {
            value: Float::with_val(64, 0.5),
            err: 1e-9,
        };
        assert!(matches!(prime_renorm(&x), Err(Error::Ambiguous { .. })));
    }

    #[test]
    fn vec_form_examples() {
        assert_eq!(prime_renorm_vec(-1.0, 1.0).unwrap(), (0.0, 1.0));
        assert_eq!(prime_renorm_vec(-2.0, 1.0).unwrap(), (-1.0, 1.0));
        // v < w branch keeps v_minus and shrinks w to w + v_minus
        let (a, b) = prime_renorm_vec(-0.381966f64, 0.618034).unwrap();
        assert!(a == -0.381966 && (b - 0.236068).abs() < 1e-6);
        assert!(prime_renorm_vec(1.0, 1.0).is_err());
        assert!(prime_renorm_vec(0.0, 0.0).is_err());
    }

    #[test]
    fn vec_projectivizes() {
        // theta = v/(v+w) commutes with the scalar map
        let cases = [(-0.3, 0.9), (-0.7, 0.4), (-0.25, 0.55)];
        for (vm, w) in cases {
            let theta = -vm / (-vm + w);
            let (vm2, w2) = prime_renorm_vec(vm, w).unwrap();
            let theta2 = -vm2 / (-vm2 + w2);
            let expect = prime_renorm(&RotationNumber::from_f64(theta))
                .unwrap()
                .to_f64();
            assert!((theta2 - expect).abs() < 1e-12, "{vm} {w}");
        }
        // boundary tie v = w takes the first branch
        assert_eq!(prime_renorm_vec(-0.5, 0.5).unwrap(), (0.0, 0.5));
    }

    #[test]
    fn matrices_of_words() {
        let m = |s: &str| word_to_matrix(&RenormWord::parse(s).unwrap()).unwrap();
        assert_eq!(m("L"), AntiRenormMatrix::from_rows(1, 0, 1, 1));
        assert_eq!(m("LR"), AntiRenormMatrix::from_rows(2, 1, 1, 1));
        assert_eq!(m("LL"), AntiRenormMatrix::from_rows(1, 0, 2, 1));
        assert_eq!(m("RL"), AntiRenormMatrix::from_rows(1, 1, 1, 2));
        assert_eq!(m("LRR"), AntiRenormMatrix::from_rows(3, 2, 1, 1));
        assert!(m("LR").det().is_one());
    }

    #[test]
    fn golden_eigendata() {
        let e = periodic_point(&RenormWord::parse("LR").unwrap()).unwrap();
        assert_eq!(e.theta_star, Surd::new(3, -1, 2, 5));
        assert_eq!(e.t, Surd::new(3, 1, 2, 5));
        assert_eq!(e.lambda_star, Surd::new(7, 3, 2, 5));
        assert_eq!(e.t_inv, Surd::new(3, -1, 2, 5));
        assert_eq!(e.w, Surd::new(-1, 1, 2, 5));
        assert_eq!(&e.v + &e.w, Surd::one(5));
        assert_eq!(e.disc, 5);
    }

    #[test]
    fn rl_and_lrr_eigendata() {
        let e = periodic_point(&RenormWord::parse("RL").unwrap()).unwrap();
        assert_eq!(e.theta_star, Surd::new(-1, 1, 2, 5)); // (sqrt5-1)/2
        assert_eq!(e.t, Surd::new(3, 1, 2, 5)); // same t as LR

        let e = periodic_point(&RenormWord::parse("LRR").unwrap()).unwrap();
        assert_eq!(e.t, Surd::new(2, 1, 1, 3)); // 2 + sqrt3
        assert_eq!(e.lambda_star, Surd::new(7, 4, 1, 3));
        assert_eq!(e.theta_star, Surd::new(3, -1, 3, 3)); // (3 - sqrt3)/3
    }

    #[test]
    fn single_branch_words_rejected() {
        assert!(matches!(
            periodic_point(&RenormWord::parse("LL").unwrap()),
            Err(Error::NotHyperbolic(_))
        ));
    }

    #[test]
    fn itineraries() {
        let golden = RotationNumber::Quadratic(Surd::new(3, -1, 2, 5));
        let (w, trunc) = itinerary(&golden, 6).unwrap();
        assert_eq!(w.to_string(), "LRLRLR");
        assert!(!trunc);

        // 1/3 -> 1/2 -> 0; the symbol at 1/2 is L by the closed-interval rule.
        let (w, trunc) = itinerary(&rat(1, 3), 3).unwrap();
        assert_eq!(w.to_string(), "LL");
        assert!(trunc);

        let (w, _) = itinerary(&rat(2, 3), 1).unwrap();
        assert_eq!(w.to_string(), "R");
    }

    #[test]
    fn antirenorm_branches() {
        let y = antirenorm_rotation(&rat(1, 2), AntiBranch::OneThird).unwrap();
        assert!(y.exact_eq(&rat(2, 3)));
        let y = antirenorm_rotation(&rat(1, 2), AntiBranch::TwoThirds).unwrap();
        assert!(y.exact_eq(&rat(1, 3)));
        // golden cycle backwards
        let w = RotationNumber::Quadratic(Surd::new(-1, 1, 2, 5));
        let y = antirenorm_rotation(&w, AntiBranch::TwoThirds).unwrap();
        assert!(y.exact_eq(&RotationNumber::Quadratic(Surd::new(3, -1, 2, 5))));
    }

    #[test]
    fn branch_inversion_round_trip() {
        for den in 2..=50i64 {
            for num in 1..den {
                let mu = rat(num, den);
                for b in [AntiBranch::OneThird, AntiBranch::TwoThirds] {
                    let back = prime_renorm(&antirenorm_rotation(&mu, b).unwrap()).unwrap();
                    assert!(back.exact_eq(&mu), "{num}/{den} {b:?}");
                }
            }
        }
    }

    #[test]
    fn branch_for_examples() {
        let golden = RotationNumber::Quadratic(Surd::new(3, -1, 2, 5));
        assert_eq!(find_period(&golden).unwrap(), 2);
        assert_eq!(
            antirenorm_branch_for(&golden, 1).unwrap(),
            AntiBranch::TwoThirds
        );
        assert_eq!(
            antirenorm_branch_for(&golden, 2).unwrap(),
            AntiBranch::OneThird
        );
        assert!(antirenorm_branch_for(&golden, 3).is_err());

        let lrr = periodic_point(&RenormWord::parse("LRR").unwrap()).unwrap();
        let th = RotationNumber::Quadratic(lrr.theta_star);
        let pattern: Vec<AntiBranch> = (1..=3)
            .map(|i| antirenorm_branch_for(&th, i).unwrap())
            .collect();
        assert_eq!(
            pattern,
            vec![
                AntiBranch::TwoThirds,
                AntiBranch::OneThird,
                AntiBranch::OneThird
            ]
        );

        assert!(matches!(
            antirenorm_branch_for(&rat(2, 5), 1),
            Err(Error::NotPeriodic)
        ));
    }

    #[test]
    fn derivative_matches_lambda_star() {
        // Central differences of the 2-fold composition at the golden point.
        let theta = (3.0 - 5.0f64.sqrt()) / 2.0;
        let f = |x: f64| {
            let y = x / (1.0 - x); // L
            (2.0 * y - 1.0) / y // R
        };
        let h = 1e-6;
        let deriv = (f(theta + h) - f(theta - h)) / (2.0 * h);
        let lambda = (7.0 + 3.0 * 5.0f64.sqrt()) / 2.0;
        assert!((deriv / lambda - 1.0).abs() < 1e-6, "deriv {deriv}");
    }

    #[test]
    fn parse_forms() {
        assert!(RotationNumber::parse("2/5").unwrap().exact_eq(&rat(2, 5)));
        assert!(RotationNumber::parse("0.4").unwrap().exact_eq(&rat(2, 5)));
        assert!(RotationNumber::parse(".25").unwrap().exact_eq(&rat(1, 4)));
        let g = RotationNumber::parse("surd:3,-1,2,5").unwrap();
        assert!(g.exact_eq(&RotationNumber::Quadratic(Surd::new(3, -1, 2, 5))));
        assert!(RotationNumber::parse("7/5")
            .unwrap()
            .exact_eq(&rat(2, 5))); // reduced mod 1
        assert!(RotationNumber::parse("x").is_err());
        assert!(RotationNumber::parse("1/0").is_err());
        assert!(RotationNumber::parse("surd:1,1,1,12").is_err());
    }

    #[test]
    fn quadratic_reduction_mod_one() {
        // sqrt(5) = 2.236... reduces to sqrt(5) - 2
        let x = RotationNumber::from_surd(Surd::root(5));
        assert!(x.exact_eq(&RotationNumber::Quadratic(Surd::new(-2, 1, 1, 5))));
    }

    proptest::proptest! {
        #[test]
        fn inverse_branches_cancel(p in 1i64..2000, q in 2i64..2000) {
            proptest::prop_assume!(p < q);
            let theta = rat(p, q);
            for branch in [AntiBranch::OneThird, AntiBranch::TwoThirds] {
                let lifted = antirenorm_rotation(&theta, branch).unwrap();
                let back = prime_renorm(&lifted).unwrap();
                proptest::prop_assert!(back.exact_eq(&theta));
            }
        }

        #[test]
        fn forward_then_matching_inverse_cancels(p in 1i64..2000, q in 2i64..2000) {
            proptest::prop_assume!(p < q);
            let theta = rat(p, q);
            let image = prime_renorm(&theta).unwrap();
            if !image.is_zero() {
                // The side theta fired on names the matching inverse branch.
                let branch = match branch_at(&theta).unwrap() {
                    BranchSymbol::L => AntiBranch::TwoThirds,
                    BranchSymbol::R => AntiBranch::OneThird,
                };
                let back = antirenorm_rotation(&image, branch).unwrap();
                proptest::prop_assert!(back.exact_eq(&theta));
            }
        }
    }
}
