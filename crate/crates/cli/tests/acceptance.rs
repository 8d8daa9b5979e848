//! One test per headline claim, each a single pass/fail line with a runtime
//! budget.  Exact statements use surd/bigint arithmetic with zero tolerance;
//! floating statements carry the stated tolerances.

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_integer::gcd;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use renorm_core::cardioid::{cardioid_point, scaling_report};
use renorm_core::hp::surd_to_float;
use renorm_core::powertriple::{PowerTriple, TriplesContext};
use renorm_core::rotnum::{
    antirenorm_rotation, periodic_point, prime_renorm, AntiBranch, RenormWord, RotationNumber,
};
use renorm_core::surd::Surd;
use renorm_core::tiling::{
    build_tiling, close_return, close_return_oracle, dominant_points_extended, TilingBudget,
};
use renorm_fractal::orbit::siegel_orbit;
use renorm_fractal::zoom::zoom_sequence;
use renorm_fractal::{area_estimate, render, RenderMode, Window};

const LAMBDA_TARGET: f64 = 6.8541019662;

fn golden_word() -> RenormWord {
    RenormWord::parse("LR").unwrap()
}

fn golden_ctx() -> TriplesContext {
    TriplesContext::new(periodic_point(&golden_word()).unwrap())
}

fn run_binary(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_renorm"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "`{}` failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 stdout")
}

fn within(start: Instant, budget_secs: u64) {
    let took = start.elapsed();
    assert!(
        took < Duration::from_secs(budget_secs),
        "took {took:?}, budget {budget_secs}s"
    );
}

#[test]
fn golden_eigen_data_is_exact() {
    let start = Instant::now();

    let stdout = run_binary(&["fixed-point", "--word", "LR"]);
    assert!(stdout.contains("theta_star (3 - sqrt(5))/2 = 3.8196601125010515e-1"));
    assert!(stdout.contains("t (3 + sqrt(5))/2 = 2.6180339887498948e0"));
    assert!(stdout.contains("lambda_star (7 + 3*sqrt(5))/2 = 6.8541019662496845e0"));

    let e = periodic_point(&golden_word()).unwrap();
    assert!(e.matrix.det().is_one());
    assert_eq!(e.lambda_star, &e.t * &e.t);
    assert_eq!(e.theta_star, Surd::new(3, -1, 2, 5));

    let theta = RotationNumber::from_surd(e.theta_star.clone());
    let back = prime_renorm(&prime_renorm(&theta).unwrap()).unwrap();
    assert!(back.exact_eq(&theta), "period-2 orbit must close exactly");

    within(start, 1);
}

#[test]
fn scaling_ratios_converge_to_the_eigenvalue() {
    let start = Instant::now();

    let stdout = run_binary(&["scaling", "--word", "LR", "--start", "2/5", "--steps", "8"]);
    let last = stdout.lines().last().unwrap();
    let fields: Vec<&str> = last.split(',').collect();
    let angle: f64 = fields[3].parse().expect("angle ratio");
    let param: f64 = fields[6].parse().expect("parameter ratio");
    assert!((angle - LAMBDA_TARGET).abs() < 1e-4, "angle ratio {angle}");
    assert!((param - LAMBDA_TARGET).abs() < 1e-3, "parameter ratio {param}");
    assert!((angle - param).abs() < 1e-3, "ratios disagree: {angle} vs {param}");

    let report = scaling_report(
        &golden_word(),
        &RotationNumber::from_ints(2, 5),
        8,
    )
    .unwrap();
    assert_eq!(report.precision, 128);

    within(start, 5);
}

#[test]
fn figure_tilings_nest_by_rescaling() {
    let start = Instant::now();
    let ctx = golden_ctx();
    let budget = TilingBudget::default();
    // The window [-v_{-2}, w_{-2}] = [-t, 2 + sqrt(5)] framing all three rows.
    let lo = -&ctx.t_pow(1);
    let hi = Surd::new(2, 1, 1, 5);

    let rows: Vec<_> = [0i64, -1, -2]
        .iter()
        .map(|&n| build_tiling(&ctx, n, (&lo, &hi), &budget).unwrap())
        .collect();
    assert_eq!(rows[0].tiles.len(), 13);
    assert_eq!(rows[1].tiles.len(), 5);
    assert_eq!(rows[2].tiles.len(), 2);
    assert_eq!(rows[0].kinds_string(), "AABABAABAABAB");
    assert_eq!(rows[1].kinds_string(), "ABAAB");
    assert_eq!(rows[2].kinds_string(), "BA");

    // Each deeper level is the previous one rescaled by t, endpoint for
    // endpoint, with zero tolerance.
    let t = ctx.t_pow(1);
    let t_inv = ctx.t_pow(-1);
    for n in [0i64, -1] {
        let shrunk = (&lo * &t_inv, &hi * &t_inv);
        let inner = build_tiling(&ctx, n, (&shrunk.0, &shrunk.1), &budget).unwrap();
        let outer = build_tiling(&ctx, n - 1, (&lo, &hi), &budget).unwrap();
        let rescaled: Vec<Surd> = inner.endpoints().iter().map(|x| x * &t).collect();
        assert_eq!(outer.endpoints(), rescaled, "level {} vs {}", n - 1, n);
    }

    within(start, 1);
}

#[test]
fn close_returns_match_oracle_and_recur() {
    let start = Instant::now();
    let ctx = golden_ctx();
    let edge = Surd::new(9, 0, 10, 5);
    let lo = -&edge;
    let doms = dominant_points_extended(&ctx, 30, (&lo, &edge), 200_000).unwrap();
    assert_eq!(doms.points.len(), 30);
    assert_eq!(doms.k, Some(2));
    let p = &doms.points;

    // At index 1 the image interval's far endpoint is the unit-boundary
    // class just outside the window, so neither construction nor oracle can
    // land it — they must agree about that too.
    assert!(close_return(&ctx, p, 1).is_err());
    assert!(close_return_oracle(&ctx, p, 1).unwrap().is_empty());

    // From index 2 on, the constructive close return equals the brute-force
    // oracle everywhere the oracle's generation bound is available.
    for i in 2..=27 {
        let cons = close_return(&ctx, p, i).unwrap();
        let oracle = close_return_oracle(&ctx, p, i).unwrap();
        assert!(!oracle.is_empty(), "oracle empty at {i}");
        assert!(
            ctx.class_eq(&cons.q, &oracle[0].q) && (cons.n, cons.m) == (oracle[0].n, oracle[0].m),
            "index {i}: constructive ({}, {}, {}) vs oracle ({}, {}, {})",
            cons.q,
            cons.n,
            cons.m,
            oracle[0].q,
            oracle[0].n,
            oracle[0].m
        );
    }

    // The two-generation recurrence at every index: generations add up,
    // positions add up, rescaling shifts by two, and the induced translation
    // carries [b_{i+2}, b_{i+3}] back onto [b_i, b_{i+2}].
    for i in 0..28 {
        let sum = ctx.add(&p[i].generation, &p[i + 1].generation).unwrap();
        assert!(ctx.class_eq(&sum, &p[i + 2].generation), "generation sum at {i}");
        assert_eq!(
            &p[i].position + &p[i + 1].position,
            p[i + 2].position,
            "position sum at {i}"
        );
        assert_eq!(
            ctx.canonical(&p[i].generation.scale_by_t()),
            p[i + 2].generation,
            "rescale at {i}"
        );
        if i + 2 <= 28 {
            let cr = close_return(&ctx, p, i + 2).unwrap();
            assert!(ctx.class_eq(&cr.q, &p[i + 1].generation));
            assert_eq!((cr.n, cr.m), (i, i + 2));
        }
    }

    within(start, 10);
}

#[test]
fn translation_action_is_free_and_iota_embeds() {
    let start = Instant::now();
    let ctx = golden_ctx();

    // Exhaustive: distinct classes never share a translation.
    let mut seen: HashMap<Surd, PowerTriple> = HashMap::new();
    for n in -3i64..=3 {
        for a in 0i64..=20 {
            for b in 0i64..=20 {
                if a == 0 && b == 0 {
                    continue;
                }
                let p = PowerTriple::new(n, a, b);
                let d = ctx.translation_of(&p);
                match seen.get(&d) {
                    Some(q) => assert!(
                        ctx.class_eq(&p, q),
                        "translation collision between inequivalent {p} and {q}"
                    ),
                    None => {
                        seen.insert(d, p);
                    }
                }
            }
        }
    }

    // Seeded sampling: the embedding is additive and order-preserving, with
    // exact surd arithmetic throughout.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let sample = |rng: &mut ChaCha8Rng| loop {
        let p = PowerTriple::new(
            rng.gen_range(-6i64..=6),
            rng.gen_range(0i64..=40),
            rng.gen_range(0i64..=40),
        );
        if !p.is_zero_class() {
            return p;
        }
    };
    for _ in 0..10_000 {
        let p = sample(&mut rng);
        let q = sample(&mut rng);
        let (ip, iq) = (ctx.iota(&p), ctx.iota(&q));
        assert!(ip.signum() > 0, "iota must be positive on nonzero classes");
        let sum = ctx.add(&p, &q).unwrap();
        assert_eq!(ctx.iota(&sum), &ip + &iq, "iota not additive on {p} + {q}");
        assert!(ctx.iota(&sum) > ip && ctx.iota(&sum) > iq, "order violated");
        // Whichever of the pair is larger, the difference is a semigroup
        // element and everything is consistent with subtraction.
        let (hi, lo_, ihi, ilo) = if ip >= iq { (&p, &q, &ip, &iq) } else { (&q, &p, &iq, &ip) };
        let diff = ctx.subtract(hi, lo_).unwrap();
        assert_eq!(ctx.iota(&diff), ihi - ilo);
        assert!(ctx.class_eq(&ctx.add(lo_, &diff).unwrap(), hi));
    }

    within(start, 10);
}

#[test]
fn branch_inverses_cancel_on_all_small_rationals() {
    let start = Instant::now();
    let mut checked = 0u64;
    for q in 2i64..=1000 {
        for p in 1..q {
            if gcd(p, q) != 1 {
                continue;
            }
            let mu = RotationNumber::from_ints(p, q);
            for branch in [AntiBranch::OneThird, AntiBranch::TwoThirds] {
                let pre = antirenorm_rotation(&mu, branch).unwrap();
                let back = prime_renorm(&pre).unwrap();
                assert!(
                    back.exact_eq(&mu),
                    "{branch} inverse fails at {p}/{q}: got {back}"
                );
            }
            checked += 1;
        }
    }
    assert!(checked > 300_000, "expected the full Farey range, got {checked}");
    within(start, 5);
}

#[test]
fn renderer_reproduces_known_sets_deterministically() {
    let start = Instant::now();

    // Unit disk: the filled set of c = 0.
    let est = area_estimate((0.0, 0.0), 1024, 500, Window::new(0.0, 0.0, 4.5)).unwrap();
    let pi = std::f64::consts::PI;
    assert!(
        (est.estimate - pi).abs() < 0.02 * pi,
        "disk area {} vs {pi}",
        est.estimate
    );

    // Conjugation symmetry of the parameter plane, bit for bit.
    let grid = render(
        RenderMode::Mandelbrot,
        Window::new(-0.75, 0.0, 3.5),
        (256, 256),
        300,
        1,
    )
    .unwrap();
    for j in 0..256 {
        for i in 0..256 {
            assert_eq!(grid.cell(i, j), grid.cell(i, 255 - j), "mirror at {i},{j}");
        }
    }

    // Thread count must not leak into the result.
    let digests: Vec<String> = [1usize, 2, 8]
        .iter()
        .map(|&threads| {
            render(
                RenderMode::Mandelbrot,
                Window::new(-0.5, 0.0, 3.0),
                (512, 512),
                300,
                threads,
            )
            .unwrap()
            .digest()
        })
        .collect();
    assert_eq!(digests[0], digests[1]);
    assert_eq!(digests[0], digests[2]);

    within(start, 30);
}

#[test]
fn siegel_area_is_stable_and_returns_are_fibonacci() {
    let start = Instant::now();
    let e = periodic_point(&golden_word()).unwrap();
    let theta = RotationNumber::from_surd(e.theta_star.clone());
    let c = cardioid_point(&theta, 128).c.to_f64();

    let coarse = area_estimate(c, 1024, 2000, Window::new(0.0, 0.0, 4.5)).unwrap();
    let fine = area_estimate(c, 2048, 2000, Window::new(0.0, 0.0, 4.5)).unwrap();
    assert!(coarse.estimate > 0.0 && fine.estimate > 0.0);
    let rel = (coarse.estimate - fine.estimate).abs() / fine.estimate.max(coarse.estimate);
    assert!(
        rel < 0.02,
        "area estimates {} and {} differ by {rel}",
        coarse.estimate,
        fine.estimate
    );

    let orbit = siegel_orbit(&golden_word(), 100_000, 128).unwrap();
    assert!(
        orbit.max_magnitude() < 2.0,
        "orbit magnitude {}",
        orbit.max_magnitude()
    );
    let times: Vec<usize> = orbit
        .closest_returns()
        .iter()
        .take(8)
        .map(|&(q, _)| q)
        .collect();
    assert_eq!(times, vec![1, 2, 3, 5, 8, 13, 21, 34]);

    within(start, 120);
}

#[test]
fn zoom_boundary_density_is_stationary() {
    let start = Instant::now();
    let e = periodic_point(&golden_word()).unwrap();
    let theta = RotationNumber::from_surd(e.theta_star.clone());
    let c = cardioid_point(&theta, 128).c.to_f64();
    let lambda = surd_to_float(&e.lambda_star, 64).to_f64();

    let frames = zoom_sequence(
        RenderMode::Mandelbrot,
        c,
        0.08,
        lambda,
        3,
        192,
        8000,
        2,
    )
    .unwrap();
    let f: Vec<f64> = frames.iter().map(|z| z.boundary_fraction).collect();
    assert!(f[1] > 0.0 && f[2] > 0.0, "fractions {f:?}");
    let rel = (f[2] - f[1]).abs() / f[1];
    assert!(rel < 0.25, "fractions {f:?} vary by {rel}");

    within(start, 60);
}
