//! Acceptance checks. Run with `cargo test --test acceptance`; prints one
//! PASS/FAIL line per criterion and exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ptlattice::dynamics::{evolve_ramp, evolve_static, localized_state, propagator, uniform_times, GainRamp};
use ptlattice::lattice::{clean_bandwidth, ImpurityPosition, LatticeSpec};
use ptlattice::linalg::{eigen, C64};
use ptlattice::phase::{breaking_staircase, critical_gamma, scaling_fit, BisectionOptions, MuMode};
use ptlattice::spectral::{analyze, check_spectral_symmetry, complex_eigenvalue_locations, DEFAULT_REL_TOL};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn threshold(n: usize, alpha: f64, pos: ImpurityPosition) -> f64 {
    let spec = LatticeSpec::new(n, alpha, 1.0, pos.resolve(n).unwrap(), 0.0).unwrap();
    critical_gamma(&spec, &BisectionOptions::default()).unwrap().gamma_pt_scaled
}

fn even_threshold() -> Outcome {
    let g = threshold(20, 2.0, ImpurityPosition::Site(10));
    ensure((1.070..=1.074).contains(&g), || format!("gamma_PT/Delta = {g}"))?;
    Ok(format!("gamma_PT/Delta = {g:.5}"))
}

fn odd_threshold() -> Outcome {
    let g = threshold(21, 2.0, ImpurityPosition::Site(10));
    ensure((0.626..=0.627).contains(&g), || format!("gamma_PT/Delta = {g}"))?;
    Ok(format!("gamma_PT/Delta = {g:.5}"))
}

fn degree_of_breaking() -> Outcome {
    let bw = clean_bandwidth(21, 2.0, 1.0).unwrap();
    let s = LatticeSpec::new(21, 2.0, 1.0, 10, 0.63 * bw.delta).unwrap();
    let r = analyze(&s, &bw, DEFAULT_REL_TOL).unwrap();
    let locs = complex_eigenvalue_locations(&r, &bw);
    ensure(r.n_complex == 4, || format!("N=21: {} complex", r.n_complex))?;
    ensure(locs.iter().all(|(re, _)| re.abs() > 0.5), || format!("N=21 locations {locs:?}"))?;

    let bw = clean_bandwidth(20, 2.0, 1.0).unwrap();
    let s = LatticeSpec::new(20, 2.0, 1.0, 10, 1.08 * bw.delta).unwrap();
    let r20 = analyze(&s, &bw, DEFAULT_REL_TOL).unwrap();
    ensure(r20.n_complex == 20, || format!("N=20: {} complex", r20.n_complex))?;
    let min_re = locs.iter().map(|(re, _)| re.abs()).fold(f64::INFINITY, f64::min);
    Ok(format!("N=21: 4 complex, min |Re E|/2Delta = {min_re:.3}; N=20: 20 complex"))
}

fn ramp_thresholds() -> Outcome {
    let even = threshold(20, 1.0, ImpurityPosition::Closest);
    let odd = threshold(21, 1.0, ImpurityPosition::Closest);
    ensure(even > 1.00 && even <= 1.06, || format!("N=20: {even}"))?;
    ensure(odd > 0.50 && odd <= 0.60, || format!("N=21: {odd}"))?;
    Ok(format!("N=20: {even:.5}, N=21: {odd:.5}"))
}

fn scaling_exponents() -> Outcome {
    let ns: Vec<usize> = (20..=200).step_by(20).collect();
    let opts = BisectionOptions::default();
    let far = scaling_fit(&ns, 1.0, 1.0, MuMode::Farthest, &opts).map_err(|e| e.to_string())?;
    let quarter = scaling_fit(&ns, 1.0, 1.0, MuMode::Fixed(0.25), &opts).map_err(|e| e.to_string())?;
    let closest = scaling_fit(&ns, 1.0, 1.0, MuMode::Closest, &opts).map_err(|e| e.to_string())?;
    let flat = scaling_fit(&ns, 0.0, 1.0, MuMode::Fixed(0.25), &opts).map_err(|e| e.to_string())?;
    let a = closest.asymptote.unwrap();
    ensure((far.exponent + 0.5).abs() <= 0.1, || format!("farthest slope {}", far.exponent))?;
    ensure((quarter.exponent + 0.33).abs() <= 0.07, || format!("mu=1/4 slope {}", quarter.exponent))?;
    ensure((closest.exponent + 1.0).abs() <= 0.15, || format!("closest slope {}", closest.exponent))?;
    ensure((0.9..=1.1).contains(&a), || format!("closest asymptote {a}"))?;
    ensure((flat.exponent + 1.0).abs() <= 0.1, || format!("alpha=0 slope {}", flat.exponent))?;
    Ok(format!(
        "farthest {:.3}, mu=1/4 {:.3}, closest {:.3} (A = {a:.4}), alpha=0 {:.3}",
        far.exponent, quarter.exponent, closest.exponent, flat.exponent
    ))
}

fn universal_values() -> Outcome {
    let mut parts = Vec::new();
    for alpha in [1.0, 2.0] {
        let even = threshold(100, alpha, ImpurityPosition::Closest);
        let odd = threshold(101, alpha, ImpurityPosition::Closest);
        ensure((even - 1.0).abs() <= 0.05, || format!("alpha={alpha} N=100: {even}"))?;
        ensure((odd - 0.5).abs() <= 0.05, || format!("alpha={alpha} N=101: {odd}"))?;
        parts.push(format!("alpha={alpha}: {even:.4} / {odd:.4}"));
    }
    Ok(parts.join(", "))
}

fn random_config(rng: &mut StdRng, max_n: usize) -> (usize, f64, usize) {
    let n = rng.random_range(2..=max_n);
    let alpha = [0.0, 1.0, 2.0][rng.random_range(0..3)];
    let m0 = rng.random_range(1..=n / 2);
    (n, alpha, m0)
}

fn maximum_breaking_count() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0007);
    let opts = BisectionOptions::default();
    for i in 0..50 {
        let (n, alpha, m0) = random_config(&mut rng, 40);
        let spec = LatticeSpec::new(n, alpha, 1.0, m0, 0.0).unwrap();
        let stairs = breaking_staircase(&spec, None, &opts).map_err(|e| format!("#{i} N={n} a={alpha} m0={m0}: {e}"))?;
        ensure(stairs.max_count == 2 * m0, || {
            format!("#{i} N={n} alpha={alpha} m0={m0}: max count {}", stairs.max_count)
        })?;
        let last = stairs.points.last().unwrap().n_complex;
        ensure(last == 2 * m0, || format!("#{i} N={n} alpha={alpha} m0={m0}: final count {last}"))?;
    }
    Ok("50 configs reach exactly 2 m0".into())
}

fn symmetry_and_reality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0008);
    let opts = BisectionOptions::default();
    for i in 0..200 {
        let (n, alpha, m0) = random_config(&mut rng, 40);
        let bw = clean_bandwidth(n, alpha, 1.0).unwrap();
        let gamma = rng.random_range(0.0..4.0) * bw.delta;
        let spec = LatticeSpec::new(n, alpha, 1.0, m0, gamma).unwrap();
        let r = analyze(&spec, &bw, DEFAULT_REL_TOL).unwrap();
        let tol = 1e-9 * bw.delta_full.max(gamma);
        ensure(check_spectral_symmetry(&r.eigenvalues, tol), || {
            format!("#{i} N={n} alpha={alpha} m0={m0} gamma={gamma}: spectrum not symmetric")
        })?;
        let gpt = critical_gamma(&spec, &opts).map_err(|e| e.to_string())?.gamma_pt;
        let half = analyze(&spec.with_gamma(0.5 * gpt).unwrap(), &bw, DEFAULT_REL_TOL).unwrap();
        ensure(half.n_complex == 0, || {
            format!("#{i} N={n} alpha={alpha} m0={m0}: {} complex at gamma_PT/2", half.n_complex)
        })?;
    }
    Ok("200 configs symmetric; all real at gamma_PT/2".into())
}

fn dynamics_oracles() -> Outcome {
    // (a) unitary limit
    let s = LatticeSpec::new(30, 2.0, 1.0, 5, 0.0).unwrap();
    let tr = evolve_static(&s, &localized_state(1, 30).unwrap(), &uniform_times(100.0, 401)).unwrap();
    let drift = tr.total.iter().map(|n| (n - 1.0).abs()).fold(0.0, f64::max);
    ensure(drift < 1e-10, || format!("(a) norm drift {drift:e}"))?;

    // (b) two sites, gamma = t0 / 2
    let s = LatticeSpec::new(2, 0.0, 1.0, 1, 0.5).unwrap();
    let unit = s.bandwidth().t_alpha_unit;
    let tr = evolve_static(&s, &localized_state(1, 2).unwrap(), &uniform_times(20.0, 201)).unwrap();
    let w = 0.75f64.sqrt();
    let err_b = tr
        .times
        .iter()
        .zip(&tr.grid)
        .map(|(t, row)| {
            let t = t * unit;
            (row[0] - ((w * t).cos() + 0.5 / w * (w * t).sin()).powi(2)).abs()
        })
        .fold(0.0, f64::max);
    ensure(err_b < 1e-8, || format!("(b) max error {err_b:e}"))?;

    // (c) revival at t = pi / t0
    let s = LatticeSpec::new(15, 1.0, 1.0, 1, 0.0).unwrap();
    let t_rev = std::f64::consts::PI / s.bandwidth().t_alpha_unit;
    let tr = evolve_static(&s, &localized_state(4, 15).unwrap(), &[0.0, t_rev]).unwrap();
    let err_c = tr.grid[0].iter().zip(&tr.grid[1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(err_c < 1e-8, || format!("(c) revival error {err_c:e}"))?;

    // (d) broken phase: one unstable mode
    let clean = LatticeSpec::new(20, 1.0, 1.0, 1, 0.0).unwrap();
    let gpt = critical_gamma(&clean, &BisectionOptions::default()).unwrap().gamma_pt;
    let s = clean.with_gamma(1.5 * gpt).unwrap();
    let bw = s.bandwidth();
    let im = analyze(&s, &bw, DEFAULT_REL_TOL).unwrap().max_imag();
    let t2 = 40.0 / (2.0 * im);
    let t1 = 0.5 * t2;
    let tr = evolve_static(&s, &localized_state(5, 20).unwrap(), &[0.0, t1 / bw.t_alpha_unit, t2 / bw.t_alpha_unit]).unwrap();
    let rate = (tr.total[2].ln() - tr.total[1].ln()) / (t2 - t1);
    let rel = (rate / (2.0 * im) - 1.0).abs();
    ensure(rel < 0.05, || format!("(d) growth rate {rate} vs 2 max Im E {}", 2.0 * im))?;

    // (e) propagator vs eigendecomposition
    let mut worst: f64 = 0.0;
    for (factor, t) in [(0.5, 3.1), (1.4, 1.7)] {
        let h = clean.with_gamma(factor * gpt).unwrap().hamiltonian();
        let (vals, vecs) = eigen::eigen_decomposition(&h.entries).unwrap();
        let inv = vecs.clone().try_inverse().unwrap();
        let phases = DVector::from_iterator(vals.len(), vals.iter().map(|e| (-C64::i() * e * t).exp()));
        let oracle = &vecs * DMatrix::from_diagonal(&phases) * inv;
        let g = propagator(&h, t).unwrap();
        worst = worst.max((&g - &oracle).norm() / oracle.norm());
    }
    ensure(worst < 1e-8, || format!("(e) relative difference {worst:e}"))?;

    Ok(format!(
        "(a) {drift:.1e} (b) {err_b:.1e} (c) {err_c:.1e} (d) rate/2ImE - 1 = {rel:.1e} (e) {worst:.1e}"
    ))
}

fn ramp_protocol() -> Outcome {
    let run = |n: usize, gl: f64, horizon: f64| {
        let spec = LatticeSpec::new(n, 1.0, 1.0, ImpurityPosition::Closest.resolve(n).unwrap(), 0.0).unwrap();
        let ramp = GainRamp::from_scaled(gl, 5.0, &spec.bandwidth()).unwrap();
        let psi0 = localized_state(spec.m0(), n).unwrap();
        evolve_ramp(&spec, &ramp, &psi0, &uniform_times(horizon, 301), 1.0).unwrap()
    };
    let even = run(20, 1.06, 50.0);
    let odd = run(21, 0.60, 50.0);
    for (name, tr) in [("N=20", &even), ("N=21", &odd)] {
        ensure(tr.total[1] < tr.total[0] && tr.total[2] < tr.total[1], || {
            format!("{name}: early totals {:?}", &tr.total[..3])
        })?;
        let min = tr.total.iter().copied().fold(f64::INFINITY, f64::min);
        let last = *tr.total.last().unwrap();
        ensure(last > min, || format!("{name}: no late growth (min {min}, final {last})"))?;
    }
    let mut report = Vec::new();
    for horizon in [30.0, 40.0, 50.0] {
        let i = even.times.iter().position(|&t| (t - horizon).abs() < 1e-9).unwrap();
        let (e, o) = (even.total[i], odd.total[i]);
        ensure(e > o, || format!("t = {horizon} T: even {e} <= odd {o}"))?;
        report.push(format!("{horizon}T: {e:.3} > {o:.3}"));
    }
    Ok(report.join(", "))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 even-lattice threshold", even_threshold, 5),
        ("2 odd-lattice threshold", odd_threshold, 5),
        ("3 degree of breaking", degree_of_breaking, 1),
        ("4 alpha=1 thresholds", ramp_thresholds, 5),
        ("5 scaling exponents", scaling_exponents, 600),
        ("6 universal closest values", universal_values, 120),
        ("7 maximum breaking count", maximum_breaking_count, 300),
        ("8 spectral symmetry and reality", symmetry_and_reality, 120),
        ("9 dynamics oracles", dynamics_oracles, 60),
        ("10 ramp protocol", ramp_protocol, 60),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let result = result.and_then(|msg| {
            if elapsed > Duration::from_secs(budget) {
                Err(format!("{msg}; took {elapsed:.2?}, budget {budget} s"))
            } else {
                Ok(msg)
            }
        });
        match result {
            Ok(msg) => println!("PASS  {name:<34} {msg}  [{elapsed:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name:<34} {msg}  [{elapsed:.2?}]");
            }
        }
    }
    println!("\nacceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
