//! Interval tilings of the line obtained by spreading the two base intervals
//! `[-v_n, 0]` and `[0, w_n]` under the cascade of translations, together
//! with the dominant displacement sequence and its close-return structure.
//!
//! A level-`n` tiling places a B-tile `T^P([-v_n, 0])` for every triple
//! `P < (n,0,1)` and an A-tile `T^P([0, w_n])` for every `P < (n,1,0)`
//! (strict comparisons in the `iota` order).  Tiles are indexed by
//! consecutive integers with tile 0 the B-tile ending at the origin.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashSet;
use std::fmt;

use crate::powertriple::{PowerTriple, TriplesContext, MAX_LEVEL};
use crate::surd::Surd;
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TileKind {
    /// Translate of `[-v_n, 0]`.
    B,
    /// Translate of `[0, w_n]`.
    A,
}

impl TileKind {
    pub fn as_char(self) -> char {
        match self {
            TileKind::B => 'B',
            TileKind::A => 'A',
        }
    }
}

impl fmt::Display for TileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Debug)]
pub struct Tile {
    pub index: i64,
    pub kind: TileKind,
    /// Canonical triple whose translation carries the base tile here.
    pub landing: PowerTriple,
    pub left: Surd,
    pub right: Surd,
}

#[derive(Clone, Debug)]
pub struct Tiling {
    pub level: i64,
    pub tiles: Vec<Tile>,
    pub window: (Surd, Surd),
}

impl Tiling {
    pub fn kinds_string(&self) -> String {
        self.tiles.iter().map(|t| t.kind.as_char()).collect()
    }

    /// All endpoints left-to-right (each shared endpoint listed once).
    pub fn endpoints(&self) -> Vec<Surd> {
        let mut out: Vec<Surd> = self.tiles.iter().map(|t| t.left.clone()).collect();
        if let Some(last) = self.tiles.last() {
            out.push(last.right.clone());
        }
        out
    }

    pub fn tile(&self, index: i64) -> Option<&Tile> {
        self.tiles.iter().find(|t| t.index == index)
    }
}

#[derive(Clone, Debug)]
pub struct TilingBudget {
    /// Cap on lattice points visited per representation level.
    pub max_lattice: usize,
    /// How many levels below `n` to try when searching for a single level
    /// at which every needed class has nonnegative coordinates.
    pub max_rep_drop: i64,
}

impl Default for TilingBudget {
    fn default() -> Self {
        TilingBudget {
            max_lattice: 200_000,
            max_rep_drop: 12,
        }
    }
}

fn max_s(a: &Surd, b: &Surd) -> Surd {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

fn min_s(a: &Surd, b: &Surd) -> Surd {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Open-interval overlap test.
fn overlaps(left: &Surd, right: &Surd, lo: &Surd, hi: &Surd) -> bool {
    left < hi && right > lo
}

pub fn build_tiling(
    ctx: &TriplesContext,
    level: i64,
    window: (&Surd, &Surd),
    budget: &TilingBudget,
) -> Result<Tiling> {
    if level.abs() > MAX_LEVEL {
        return Err(Error::LevelRange(level));
    }
    if window.0 > window.1 {
        return Err(Error::Domain("window left exceeds window right".into()));
    }
    let v_n = ctx.v_at(level);
    let w_n = ctx.w_at(level);
    // Extend to cover both base tiles with one tile width of padding, so the
    // index origin is always present and the user window is interior.
    let ext_l = &min_s(window.0, &-&v_n) - &v_n;
    let ext_r = &max_s(window.1, &w_n) + &w_n;

    let thresh_b = ctx.iota(&PowerTriple::new(level, 0, 1));
    let thresh_a = ctx.iota(&PowerTriple::new(level, 1, 0));
    let thresh_max = max_s(&thresh_a, &thresh_b);

    let mut chain: Option<Vec<Tile>> = None;
    for drop in 0..=budget.max_rep_drop {
        let m = level - drop;
        if m < -MAX_LEVEL {
            break;
        }
        let mut tiles = enumerate_level(
            ctx, m, &thresh_a, &thresh_b, &thresh_max, &v_n, &w_n, &ext_l, &ext_r, budget,
        )?;
        tiles.sort_by(|x, y| x.left.cmp(&y.left));
        if chain_is_complete(&tiles, &ext_l, &ext_r) {
            chain = Some(tiles);
            break;
        }
    }
    let mut tiles = chain.ok_or_else(|| {
        Error::Budget(format!(
            "no single representation level within {} below {} closes the tile chain",
            budget.max_rep_drop, level
        ))
    })?;

    // Anchor indices: tile 0 is the B-tile with right endpoint 0.
    let pos0 = tiles
        .iter()
        .position(|t| t.kind == TileKind::B && t.right.is_zero())
        .expect("base B-tile is inside the extended window by construction");
    debug_assert!(
        tiles[pos0 + 1].kind == TileKind::A && tiles[pos0 + 1].left.is_zero(),
        "base A-tile must follow the base B-tile"
    );
    for (i, t) in tiles.iter_mut().enumerate() {
        t.index = i as i64 - pos0 as i64;
    }

    // Restrict to the requested window.
    let kept: Vec<Tile> = if window.0 == window.1 {
        // Point query: a tile owns its left endpoint.
        let x = window.0;
        let owner = tiles
            .iter()
            .find(|t| &t.left <= x && x < &t.right)
            .or_else(|| tiles.iter().find(|t| &t.left <= x && x <= &t.right))
            .expect("extended window contains the query point");
        vec![owner.clone()]
    } else {
        tiles
            .into_iter()
            .filter(|t| overlaps(&t.left, &t.right, window.0, window.1))
            .collect()
    };
    Ok(Tiling {
        level,
        tiles: kept,
        window: (window.0.clone(), window.1.clone()),
    })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_level(
    ctx: &TriplesContext,
    m: i64,
    thresh_a: &Surd,
    thresh_b: &Surd,
    thresh_max: &Surd,
    v_n: &Surd,
    w_n: &Surd,
    ext_l: &Surd,
    ext_r: &Surd,
    budget: &TilingBudget,
) -> Result<Vec<Tile>> {
    let mut tiles = Vec::new();
    let mut visited = 0usize;
    let mut a = BigInt::zero();
    loop {
        let ia = ctx.iota(&PowerTriple {
            n: m,
            a: a.clone(),
            b: BigInt::zero(),
        });
        if !a.is_zero() && &ia >= thresh_max {
            break;
        }
        let mut b = BigInt::zero();
        loop {
            let p = PowerTriple {
                n: m,
                a: a.clone(),
                b: b.clone(),
            };
            let iota = ctx.iota(&p);
            if !p.is_zero_class() && &iota >= thresh_max {
                break;
            }
            visited += 1;
            if visited > budget.max_lattice {
                return Err(Error::Budget(format!(
                    "tile enumeration at level {m} exceeds {} lattice points",
                    budget.max_lattice
                )));
            }
            let d = ctx.translation_of(&p);
            if &iota < thresh_b {
                let left = &d - v_n;
                if overlaps(&left, &d, ext_l, ext_r) {
                    tiles.push(Tile {
                        index: 0,
                        kind: TileKind::B,
                        landing: ctx.canonical(&p),
                        left,
                        right: d.clone(),
                    });
                }
            }
            if &iota < thresh_a {
                let right = &d + w_n;
                if overlaps(&d, &right, ext_l, ext_r) {
                    tiles.push(Tile {
                        index: 0,
                        kind: TileKind::A,
                        landing: ctx.canonical(&p),
                        left: d.clone(),
                        right,
                    });
                }
            }
            b += 1;
        }
        a += 1;
    }
    Ok(tiles)
}

/// Sorted tiles must chain endpoint-to-endpoint across the extended window.
fn chain_is_complete(tiles: &[Tile], ext_l: &Surd, ext_r: &Surd) -> bool {
    let (first, last) = match (tiles.first(), tiles.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return false,
    };
    if &first.left > ext_l || &last.right < ext_r {
        return false;
    }
    tiles.windows(2).all(|w| w[0].right == w[1].left)
}

pub fn triangulation_sequence(
    ctx: &TriplesContext,
    level: i64,
    window: (&Surd, &Surd),
    budget: &TilingBudget,
) -> Result<Vec<(TileKind, PowerTriple)>> {
    Ok(build_tiling(ctx, level, window, budget)?
        .tiles
        .into_iter()
        .map(|t| (t.kind, t.landing))
        .collect())
}

#[derive(Clone, Debug)]
pub struct DominantPoint {
    pub index: usize,
    /// Canonical generating triple P.
    pub generation: PowerTriple,
    pub iota: Surd,
    /// b_P = t^-n (a v - b w); the closed segment [0, b_P] meets no earlier b_Q.
    pub position: Surd,
}

#[derive(Clone, Debug)]
pub struct Dominants {
    pub points: Vec<DominantPoint>,
    /// Stable shift k with t * P_i = P_{i+k} for all large enough i.
    pub k: Option<usize>,
}

/// Every nonzero class with `iota <= iota_max` and `|b_P| <= b_abs_max`,
/// deduplicated to canonical form.  Sound because a canonical class at level
/// `c` has `|b_P| >= c0 * t^-c` for the cone constant `c0` below, so only
/// finitely many levels can contribute.
fn collect_classes(
    ctx: &TriplesContext,
    iota_max: &Surd,
    b_abs_max: &Surd,
    max_classes: usize,
) -> Result<Vec<(PowerTriple, Surd, Surd)>> {
    let d = ctx.disc();
    let v = &ctx.eigen.v;
    let w = &ctx.eigen.w;
    let zero = Surd::zero(d);
    if iota_max <= &zero || b_abs_max <= &zero {
        return Ok(Vec::new());
    }

    // Smallest nonzero iota at level m is t^m * min(iota(0,1,0), iota(0,0,1)).
    let unit_min = min_s(
        &ctx.iota(&PowerTriple::new(0, 1, 0)),
        &ctx.iota(&PowerTriple::new(0, 0, 1)),
    );
    let mut m_hi: i64 = 0;
    while m_hi < MAX_LEVEL && &(&ctx.t_pow(m_hi + 1) * &unit_min) <= iota_max {
        m_hi += 1;
    }

    // Cone constant: min of |a v - b w| / max(a,b) over the extreme rays of
    // the canonical region (the positive axes and the images of the axes
    // under the matrix).
    let mm = &ctx.eigen.matrix;
    let rays: [(BigInt, BigInt); 4] = [
        (BigInt::one(), BigInt::zero()),
        (BigInt::zero(), BigInt::one()),
        (mm.m11.clone(), mm.m12.clone()),
        (mm.m21.clone(), mm.m22.clone()),
    ];
    let mut c0: Option<Surd> = None;
    for (ra, rb) in &rays {
        let num = (&(&Surd::from_int(ra.clone(), d) * v) - &(&Surd::from_int(rb.clone(), d) * w))
            .abs();
        let den = Surd::from_int(ra.max(rb).clone(), d);
        let val = &num / &den;
        c0 = Some(match c0 {
            None => val,
            Some(c) => min_s(&c, &val),
        });
    }
    let c0 = c0.unwrap();
    assert!(c0.signum() > 0, "cone constant must be positive");

    let mut m_lo: i64 = m_hi.min(0);
    while m_lo > -MAX_LEVEL && &(&ctx.t_pow(-(m_lo - 1)) * &c0) <= b_abs_max {
        m_lo -= 1;
    }

    let mut seen: HashSet<PowerTriple> = HashSet::new();
    let mut out = Vec::new();
    let mut visited = 0usize;
    for m in m_lo..=m_hi {
        let tm = ctx.t_pow(m);
        let strip = b_abs_max * &tm; // |a v - b w| <= strip
        // Every class is recorded at its canonical level, where
        // |a v - b w| >= c0 * max(a, b); so inside the strip the canonical
        // representative has a <= strip / c0 and larger a can be skipped
        // (non-canonical duplicates of classes found elsewhere).
        let a_cap = (&strip / &c0).floor_bigint();
        let mut a = BigInt::zero();
        loop {
            if a > a_cap {
                break;
            }
            let ia = ctx.iota(&PowerTriple {
                n: m,
                a: a.clone(),
                b: BigInt::zero(),
            });
            if &ia > iota_max {
                break;
            }
            let av = &Surd::from_int(a.clone(), d) * v;
            // b range from the displacement strip: (a v - strip)/w .. (a v + strip)/w
            let b_lo_s = &(&av - &strip) / w;
            let b_hi_s = &(&av + &strip) / w;
            let mut b = (-(-&b_lo_s).floor_bigint()).max(BigInt::zero()); // ceil, clamped
            let b_hi = b_hi_s.floor_bigint();
            while b <= b_hi {
                visited += 1;
                if visited > max_classes {
                    return Err(Error::Budget(format!(
                        "class enumeration exceeds {max_classes} candidates"
                    )));
                }
                let p = PowerTriple {
                    n: m,
                    a: a.clone(),
                    b: b.clone(),
                };
                if !p.is_zero_class() {
                    let iota = ctx.iota(&p);
                    let bp = ctx.b_point(&p);
                    if &iota <= iota_max && bp.abs() <= *b_abs_max {
                        let canon = ctx.canonical(&p);
                        if seen.insert(canon.clone()) {
                            out.push((canon, iota, bp));
                        }
                    }
                }
                b += 1;
            }
            a += 1;
        }
    }
    out.sort_by(|x, y| x.1.cmp(&y.1));
    debug_assert!(out.windows(2).all(|p| p[0].1 < p[1].1));
    Ok(out)
}

pub fn dominant_points(
    ctx: &TriplesContext,
    max_generation: &Surd,
    window: (&Surd, &Surd),
    max_classes: usize,
) -> Result<Dominants> {
    if window.0 > window.1 {
        return Err(Error::Domain("window left exceeds window right".into()));
    }
    let b_abs_max = max_s(&window.0.abs(), &window.1.abs());
    let classes = collect_classes(ctx, max_generation, &b_abs_max, max_classes)?;

    // Walk in iota order keeping the per-side record |b|; a record-setter is
    // exactly a point whose segment [0, b_P] avoids every earlier b_Q.
    let mut neg_rec: Option<Surd> = None;
    let mut pos_rec: Option<Surd> = None;
    let mut dominants = Vec::new();
    for (p, iota, bp) in classes {
        let mag = bp.abs();
        let rec = if bp.signum() < 0 {
            &mut neg_rec
        } else {
            &mut pos_rec
        };
        let is_new = match rec {
            None => true,
            Some(r) => mag < *r,
        };
        if is_new {
            *rec = Some(mag);
            if &bp >= window.0 && &bp <= window.1 {
                dominants.push((p, iota, bp));
            }
        }
    }

    let points: Vec<DominantPoint> = dominants
        .into_iter()
        .enumerate()
        .map(|(index, (generation, iota, position))| DominantPoint {
            index,
            generation,
            iota,
            position,
        })
        .collect();
    let k = detect_shift(ctx, &points);
    Ok(Dominants { points, k })
}

/// First `count` dominant points over `window`, grown from a brute-force
/// seed by exact scaling.  Scaling by t is a bijection of the nonzero
/// classes (a level shift) that multiplies iota by t and divides positions
/// by t, so the set of record-setters is invariant under it.  A class can
/// enter the position window under scaling but never leave it; entry
/// requires |b| in (window/t, window], which is impossible once both
/// per-side records sit below window/t.  Past that point the sequence obeys
/// P_{i+k} = t * P_{i} exactly and can be continued without enumeration.
pub fn dominant_points_extended(
    ctx: &TriplesContext,
    count: usize,
    window: (&Surd, &Surd),
    max_classes: usize,
) -> Result<Dominants> {
    let b_abs_max = max_s(&window.0.abs(), &window.1.abs());
    let entry_bar = &b_abs_max * &ctx.eigen.t_inv;
    let mut seed_level = 3i64;
    let seed = loop {
        let seed = dominant_points(ctx, &ctx.t_pow(seed_level), window, max_classes)?;
        if seed.points.len() >= count {
            let mut points = seed.points;
            points.truncate(count);
            let k = detect_shift(ctx, &points);
            return Ok(Dominants { points, k });
        }
        let records_settled = {
            let mut neg: Option<&Surd> = None;
            let mut pos: Option<&Surd> = None;
            for p in &seed.points {
                if p.position.signum() < 0 {
                    neg = Some(&p.position);
                } else {
                    pos = Some(&p.position);
                }
            }
            match (neg, pos) {
                (Some(n), Some(p)) => n.abs() < entry_bar && p.abs() < entry_bar,
                _ => false,
            }
        };
        if seed.k.is_some() && records_settled {
            break seed;
        }
        seed_level += 1;
        if seed_level > 9 {
            return Err(Error::Budget(
                "dominant seed failed to stabilise by generation t^9".into(),
            ));
        }
    };
    let k = seed.k.unwrap();
    let mut points = seed.points;
    while points.len() < count {
        let i = points.len();
        let src = &points[i - k];
        let generation = ctx.canonical(&src.generation.scale_by_t());
        let iota = &src.iota * &ctx.eigen.t;
        let position = &src.position * &ctx.eigen.t_inv;
        debug_assert_eq!(iota, ctx.iota(&generation));
        debug_assert_eq!(position, ctx.b_point(&generation));
        points.push(DominantPoint {
            index: i,
            generation,
            iota,
            position,
        });
    }
    // The extension must itself satisfy the record property: iota strictly
    // increasing, per-side |b| strictly decreasing.
    for w in points.windows(2) {
        assert!(w[0].iota < w[1].iota);
    }
    let mut neg: Option<Surd> = None;
    let mut pos: Option<Surd> = None;
    for p in &points {
        let mag = p.position.abs();
        let rec = if p.position.signum() < 0 {
            &mut neg
        } else {
            &mut pos
        };
        if let Some(r) = rec {
            assert!(mag < *r, "scaled continuation broke a record");
        }
        *rec = Some(mag);
    }
    Ok(Dominants {
        points,
        k: Some(k),
    })
}

/// Find k with t * P_i = P_{i+k} for every i past a burn-in of at most half
/// the list, requiring at least three confirming matches.
fn detect_shift(ctx: &TriplesContext, points: &[DominantPoint]) -> Option<usize> {
    let len = points.len();
    for k in 1..len {
        let mut confirmed = 0usize;
        let mut burn_in = None;
        let mut consistent = true;
        for i in 0..len.saturating_sub(k) {
            let scaled = ctx.canonical(&points[i].generation.scale_by_t());
            if scaled == points[i + k].generation {
                if burn_in.is_none() {
                    burn_in = Some(i);
                }
                confirmed += 1;
            } else if burn_in.is_some() {
                consistent = false;
                break;
            }
        }
        if consistent && confirmed >= 3 && burn_in.map_or(false, |b| b <= len / 2) {
            return Some(k);
        }
    }
    None
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CloseReturn {
    pub q: PowerTriple,
    pub n: usize,
    pub m: usize,
}

/// The translation carrying `[b_i, b_{i+1}]` onto an earlier dominant pair
/// `[b_n, b_m]`, following the two-case construction: `Q = P_{i-1}` when 0
/// lies between `b_i` and `b_{i-1}`, else `Q = P_i - P_{i-1}`.
pub fn close_return(ctx: &TriplesContext, doms: &[DominantPoint], i: usize) -> Result<CloseReturn> {
    if i < 1 || i + 1 >= doms.len() {
        return Err(Error::Domain(format!(
            "close return at {i} needs dominants {} through {}",
            i.saturating_sub(1),
            i + 1
        )));
    }
    let q = if doms[i].position.signum() != doms[i - 1].position.signum() {
        doms[i - 1].generation.clone()
    } else {
        ctx.subtract(&doms[i].generation, &doms[i - 1].generation)?
    };
    let d = ctx.translation_of(&q);
    let im_lo = &doms[i].position + &d;
    let im_hi = &doms[i + 1].position + &d;
    let find = |x: &Surd| doms.iter().position(|p| &p.position == x);
    match (find(&im_lo), find(&im_hi)) {
        (Some(p), Some(r)) => Ok(CloseReturn {
            q,
            n: p.min(r),
            m: p.max(r),
        }),
        _ => Err(Error::Domain(format!(
            "translated endpoints of [b_{i}, b_{}] are not enumerated dominants",
            i + 1
        ))),
    }
}

/// The unique class (if any) whose translation equals `d`, with
/// `iota <= iota_max`.  Writing the displacement of a level-m representative
/// as `t^-m (b w - a v) `, the equation `t^m d = b - (a+b) v` has at most one
/// integer solution per level in the basis (1, v), and all solvable levels
/// describe the same class; freeness guarantees global uniqueness.
pub fn class_from_translation(
    ctx: &TriplesContext,
    d: &Surd,
    iota_max: &Surd,
) -> Option<(PowerTriple, Surd)> {
    use num_bigint::Sign;
    use num_rational::BigRational;
    if d.is_zero() {
        return None;
    }
    let v = &ctx.eigen.v;
    // v = (pv + qv sqrt(D)) / rv with qv != 0 for hyperbolic words.
    let (pv, qv, rv) = (v.p().clone(), v.q().clone(), v.r().clone());
    debug_assert!(qv.sign() != Sign::NoSign);
    for m in -MAX_LEVEL..=MAX_LEVEL {
        let x = &ctx.t_pow(m) * d;
        // x = x1 + x2 v  =>  b = x1, a = -x2 - x1.
        let x2 = BigRational::new(x.q() * &rv, x.r() * &qv);
        let x1 = BigRational::new(x.p().clone(), x.r().clone())
            - &x2 * BigRational::new(pv.clone(), rv.clone());
        if !x1.is_integer() || !x2.is_integer() {
            continue;
        }
        let b = x1.to_integer();
        let a = -x2.to_integer() - &b;
        if a.is_negative() || b.is_negative() || (a.is_zero() && b.is_zero()) {
            continue;
        }
        let p = ctx.canonical(&PowerTriple { n: m, a, b });
        let iota = ctx.iota(&p);
        if &iota <= iota_max {
            debug_assert_eq!(&ctx.translation_of(&p), d);
            return Some((p, iota));
        }
        return None;
    }
    None
}

/// Exhaustive search for every close return: a class Q with
/// `iota(Q) <= iota(P_{i+2})` carrying `[b_i, b_{i+1}]` exactly onto a
/// dominant pair `[b_n, b_m]` with n < m <= i.  Any such Q must translate
/// both endpoints onto dominants, so Q's displacement is pinned by the
/// target pair and can be solved for class-by-pair; the result is every
/// valid (Q, n, m), sorted by iota(Q) with the minimal-generation return
/// first.
pub fn close_return_oracle(
    ctx: &TriplesContext,
    doms: &[DominantPoint],
    i: usize,
) -> Result<Vec<CloseReturn>> {
    if i + 2 >= doms.len() {
        return Err(Error::Domain(format!(
            "oracle at {i} needs dominants through {}",
            i + 2
        )));
    }
    let bound = &doms[i + 2].iota;
    let src_lo = min_s(&doms[i].position, &doms[i + 1].position);
    let src_hi = max_s(&doms[i].position, &doms[i + 1].position);
    let mut found: Vec<(Surd, CloseReturn)> = Vec::new();
    for n in 0..i {
        for m in (n + 1)..=i {
            let tgt_lo = min_s(&doms[n].position, &doms[m].position);
            let tgt_hi = max_s(&doms[n].position, &doms[m].position);
            let d = &tgt_lo - &src_lo;
            if &tgt_hi - &src_hi != d {
                continue; // widths differ; no translation can match
            }
            if let Some((q, iota)) = class_from_translation(ctx, &d, bound) {
                found.push((iota, CloseReturn { q, n, m }));
            }
        }
    }
    found.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(found.into_iter().map(|(_, cr)| cr).collect())
}
