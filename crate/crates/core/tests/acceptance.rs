//! Acceptance checks, one PASS/FAIL line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfoc::{
    coupled_tensor, coupling_matrix, fc_estimate, gauss_hermite, overlap_closed, overlap_coupled,
    overlap_quad, schmidt_report, spectrum1d, spectrum2d_separable, CouplingTensor, OscillatorFrame,
    Transition1D, Waveguide2D, MAX_MODE_INDEX,
};

const EPS: f64 = 1e-8;

fn transition(omega: f64, omega_p: f64, d: f64, n: usize) -> Transition1D {
    Transition1D::new(
        OscillatorFrame::centered(omega).unwrap(),
        OscillatorFrame::new(omega_p, d).unwrap(),
        n,
    )
    .unwrap()
}

/// Source at `ω = 1` about the origin, target at `ratio` shifted by `√D`.
fn dimensionless(ratio: f64, big_d: f64, n: usize) -> Transition1D {
    transition(1.0, ratio, big_d.sqrt(), n)
}

/// Aligned 2D pair: unit source, target stretched per axis and shifted by `√D`.
fn separable_pair(ratio: (f64, f64), big_d: (f64, f64)) -> (Waveguide2D, Waveguide2D) {
    (
        Waveguide2D::aligned(1.0, 1.0, (0.0, 0.0)).unwrap(),
        Waveguide2D::aligned(ratio.0, ratio.1, (big_d.0.sqrt(), big_d.1.sqrt())).unwrap(),
    )
}

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= abs.max(rel * a.abs().max(b.abs()))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ground_state_peak() -> Outcome {
    let t = dimensionless(3.0, 9.0, 0);
    let start = Instant::now();
    let s = spectrum1d(&t, EPS, MAX_MODE_INDEX).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let best = s.argmax().unwrap().n_prime;
    let p13 = s.probability(13).unwrap_or(0.0);
    let top = s.probability(best).unwrap();
    outcome(
        best == 13 && elapsed < 1.0,
        format!(
            "argmax {best} (want 13), P[{best}]={top:.7} P[13]={p13:.7} gap {:.3e}, {elapsed:.3}s",
            top - p13
        ),
    )
}

fn excited_state_peak() -> Outcome {
    let t = dimensionless(3.0, 16.0, 3);
    let s = spectrum1d(&t, EPS, MAX_MODE_INDEX).unwrap();
    let best = s.argmax().unwrap().n_prime;
    let mut worst: f64 = 0.0;
    let mut agree = true;
    for e in &s.entries {
        let q = overlap_quad(&t, e.n_prime).unwrap();
        agree &= close(e.amplitude, q, 1e-10, 1e-13);
        worst = worst.max((e.amplitude - q).abs());
    }
    let gap = s.probability(best).unwrap() - s.probability(5).unwrap_or(0.0);
    outcome(
        best == 5 && agree,
        format!(
            "argmax {best} (want 5), gap to 5 {gap:.3e}; closed vs quadrature over {} entries, max |Δ| {worst:.2e}",
            s.entries.len()
        ),
    )
}

fn pair_check(initial: (usize, usize), ratio: (f64, f64), big_d: (f64, f64), want: (usize, usize)) -> Outcome {
    let (s, t) = separable_pair(ratio, big_d);
    let tensor = spectrum2d_separable(&s, &t, initial.0, initial.1, EPS, MAX_MODE_INDEX).unwrap();
    let ((i, j), a) = tensor.argmax().unwrap();
    let unordered = (i, j) == want || (j, i) == want;
    outcome(
        unordered,
        format!(
            "ordered argmax (nx', ny') = ({i}, {j}), P={:.7} (want {{{}, {}}} unordered)",
            a * a,
            want.0,
            want.1
        ),
    )
}

fn fc_grid() -> Outcome {
    let at_peak = fc_estimate(&dimensionless(3.0, 9.0, 0));
    let mut misses = Vec::new();
    for i in 0..4 {
        let ratio = 1.5 + 2.5 * i as f64 / 3.0;
        for j in 0..5 {
            let big_d = 4.0 + 21.0 * j as f64 / 4.0;
            let t = dimensionless(ratio, big_d, 0);
            let est = fc_estimate(&t);
            let best = spectrum1d(&t, EPS, MAX_MODE_INDEX).unwrap().argmax().unwrap().n_prime;
            if est.abs_diff(best) > 1 {
                misses.push(format!("({ratio:.3},{big_d:.2}): {est} vs {best}"));
            }
        }
    }
    outcome(
        at_peak == 13 && misses.is_empty(),
        format!("estimate {at_peak} at ω′/ω=3, ωd²=9 (want 13); {} of 20 grid points off by >1 {misses:?}", misses.len()),
    )
}

fn dual_path() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let start = Instant::now();
    let mut failures = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let omega = rng.gen_range(0.3..3.0);
        let ratio = rng.gen_range(0.2..5.0);
        let big_d: f64 = rng.gen_range(0.0..25.0);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let t = transition(omega, ratio * omega, sign * (big_d / omega).sqrt(), rng.gen_range(0..=40));
        let n_prime = rng.gen_range(0..=40);
        let a = overlap_closed(&t, n_prime).unwrap();
        let b = overlap_quad(&t, n_prime).unwrap();
        if !close(a, b, 1e-10, 1e-13) {
            failures += 1;
        }
        if a.abs() > 1e-13 {
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        failures == 0 && elapsed < 10.0,
        format!("{failures}/200 disagree, worst relative {worst:.2e}, {elapsed:.3}s"),
    )
}

fn mass_ok(m: f64) -> bool {
    m >= 1.0 - EPS && m <= 1.0 + 1e-12
}

fn sum_rules() -> Outcome {
    let mut masses = Vec::new();
    for (ratio, big_d, n) in [(3.0, 9.0, 0), (3.0, 16.0, 3)] {
        masses.push(spectrum1d(&dimensionless(ratio, big_d, n), EPS, MAX_MODE_INDEX).unwrap().captured_mass);
    }
    for (initial, big_d) in [((0, 0), (9.0, 16.0)), ((2, 1), (16.0, 16.0))] {
        let (s, t) = separable_pair((2.0, 3.0), big_d);
        masses.push(
            spectrum2d_separable(&s, &t, initial.0, initial.1, EPS, MAX_MODE_INDEX)
                .unwrap()
                .captured_mass,
        );
    }
    let deficits: Vec<String> = masses.iter().map(|m| format!("{:.2e}", 1.0 - m)).collect();
    outcome(masses.iter().all(|&m| mass_ok(m)), format!("1 − mass: {deficits:?}"))
}

fn gram_defect() -> Outcome {
    let m = coupling_matrix(
        &OscillatorFrame::centered(1.0).unwrap(),
        &OscillatorFrame::new(3.0, 3.0).unwrap(),
        19,
        399,
    )
    .unwrap();
    outcome(
        m.orthogonality_defect < 1e-8,
        format!("defect {:.3e} for 20 rows × 400 columns", m.orthogonality_defect),
    )
}

fn symmetries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut parity, mut exchange, mut scale) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    let cases = 120;
    for _ in 0..cases {
        let omega: f64 = rng.gen_range(0.3..3.0);
        let omega_p = omega * rng.gen_range(0.2..5.0);
        let d: f64 = rng.gen_range(-4.0..4.0) / omega.sqrt();
        let n = rng.gen_range(0..=30);
        let m = rng.gen_range(0..=30);
        let a = overlap_closed(&transition(omega, omega_p, d, n), m).unwrap();

        let mirrored = overlap_closed(&transition(omega, omega_p, -d, n), m).unwrap();
        let sign = if (n + m) % 2 == 0 { 1.0 } else { -1.0 };
        let e = (mirrored - sign * a).abs().max((mirrored * mirrored - a * a).abs());
        worst = worst.max(e);
        parity += usize::from(e >= 1e-12);

        let back = Transition1D::new(
            OscillatorFrame::new(omega_p, d).unwrap(),
            OscillatorFrame::centered(omega).unwrap(),
            m,
        )
        .unwrap();
        let e = (overlap_closed(&back, n).unwrap() - a).abs();
        worst = worst.max(e);
        exchange += usize::from(e >= 1e-12);

        let lambda: f64 = rng.gen_range(0.1..10.0);
        let scaled = overlap_closed(&transition(lambda * omega, lambda * omega_p, d / lambda.sqrt(), n), m).unwrap();
        let e = (scaled - a).abs();
        worst = worst.max(e);
        scale += usize::from(e >= 1e-12);
    }
    outcome(
        parity + exchange + scale == 0,
        format!("{cases} cases each; failures parity {parity}, exchange {exchange}, scale {scale}; max |Δ| {worst:.2e}"),
    )
}

fn coupled_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..50 {
        let mut axis = || {
            let omega = rng.gen_range(0.5..2.0);
            let omega_p = omega * rng.gen_range(0.5..3.0);
            let d: f64 = rng.gen_range(-2.0..2.0);
            (omega, omega_p, d, rng.gen_range(0..=10), rng.gen_range(0..=10))
        };
        let (wx, wpx, dx, nx, kx) = axis();
        let (wy, wpy, dy, ny, ky) = axis();
        let s = Waveguide2D::aligned(wx, wy, (0.0, 0.0)).unwrap();
        let t = Waveguide2D::aligned(wpx, wpy, (dx, dy)).unwrap();
        let direct = overlap_coupled(&s, &t, (nx, ny), (kx, ky)).unwrap();
        let product = overlap_closed(&transition(wx, wpx, dx, nx), kx).unwrap()
            * overlap_closed(&transition(wy, wpy, dy, ny), ky).unwrap();
        worst = worst.max((direct - product).abs());
        failures += usize::from((direct - product).abs() >= 1e-10);
    }

    let ground = |t: &Waveguide2D| -> CouplingTensor {
        let s = Waveguide2D::aligned(1.0, 2.0, (0.0, 0.0)).unwrap();
        coupled_tensor(&s, t, 0, 0, 1e-10, MAX_MODE_INDEX).unwrap()
    };
    let aligned = Waveguide2D::aligned(2.0, 3.0, (1.0, 1.5)).unwrap();
    let separable = schmidt_report(&ground(&aligned)).unwrap().entropy;
    let (s, t) = separable_pair((2.0, 3.0), (9.0, 16.0));
    let product = schmidt_report(&spectrum2d_separable(&s, &t, 0, 0, EPS, MAX_MODE_INDEX).unwrap())
        .unwrap()
        .entropy;
    let twisted = Waveguide2D::new(2.0, 3.0, 2.0, (1.0, 1.5)).unwrap();
    let coupled = schmidt_report(&ground(&twisted)).unwrap().entropy;
    outcome(
        failures == 0 && separable < 1e-10 && product < 1e-10 && coupled > 1e-10,
        format!(
            "γ=0: {failures}/50 off, max |Δ| {worst:.2e}; entropy γ′=0 {separable:.2e} / {product:.2e}, γ′=2 {coupled:.4e}"
        ),
    )
}

fn moment_exactness() -> Outcome {
    let mut report = Vec::new();
    let mut pass = true;
    for k in [1usize, 2, 8, 32, 128] {
        let r = gauss_hermite(k).unwrap();
        let mut exact = std::f64::consts::PI.sqrt();
        let mut worst: f64 = 0.0;
        for j in 0..2 * k {
            let got = r.sum(|t| t.powi(j as i32));
            let err = if j % 2 == 1 {
                got.abs() / r.sum(|t| t.abs().powi(j as i32))
            } else {
                if j > 0 {
                    exact *= (j - 1) as f64 / 2.0;
                }
                ((got - exact) / exact).abs()
            };
            worst = worst.max(err);
        }
        pass &= worst <= 1e-12;
        report.push(format!("k={k}: {worst:.1e}"));
    }
    outcome(pass, format!("worst relative error per order {report:?}"))
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Outcome); 11] = [
        ("1  ground-state spectrum peak, ω′/ω=3 ωd²=9", ground_state_peak),
        ("2  excited-state spectrum peak, ω′/ω=3 ωd²=16 n=3", excited_state_peak),
        ("3  separable 2D peak from (0,0)", || pair_check((0, 0), (2.0, 3.0), (9.0, 16.0), (23, 8))),
        ("4  separable 2D peak from (2,1)", || pair_check((2, 1), (2.0, 3.0), (16.0, 16.0), (8, 4))),
        ("5  vertical-transition estimate", fc_grid),
        ("6  closed form vs quadrature, 200 cases", dual_path),
        ("7  sum rule at ε=1e-8", sum_rules),
        ("8  coupling-matrix orthogonality", gram_defect),
        ("9  parity, exchange, scale invariance", symmetries),
        ("10 coupled 2D reduction and entropy", coupled_reduction),
        ("11 Gauss–Hermite moment exactness", moment_exactness),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let o = check();
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
