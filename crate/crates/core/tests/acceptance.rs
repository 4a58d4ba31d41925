//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with a
//! non-zero status if any criterion fails.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::process::ExitCode;
use std::time::Instant;

use beamqubit_core::analysis::{
    count_oscillations, fit_exponential_envelope, trajectory_report, DEFAULT_HYSTERESIS,
};
use beamqubit_core::engine::{
    max_observable_difference, run_experiment, InitialState, IntegratorConfig, Method, RunDiagnostics,
    TrajectoryRecord,
};
use beamqubit_core::model::{preset, Frame, Generator, ModelParameters, PresetName};
use beamqubit_core::physics::{beam_field_at_distance, beam_kinematics, cavity_resonance_frequency, CavityGeometry};
use beamqubit_core::{Mat4, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Suite {
    lines: Vec<(bool, String)>,
    /// Diagnostics of every trajectory integrated by the suite.
    runs: Vec<(String, RunDiagnostics)>,
}

impl Suite {
    fn check(&mut self, name: &str, pass: bool, detail: String, started: Instant) {
        let secs = started.elapsed().as_secs_f64();
        let line = format!("{} {name}: {detail} [{secs:.2} s]", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push((pass, line));
    }

    fn run(&mut self, label: &str, p: &ModelParameters, init: InitialState, cfg: &IntegratorConfig) -> TrajectoryRecord {
        let tr = run_experiment(p, init, cfg).unwrap_or_else(|e| panic!("{label}: {e}"));
        self.runs.push((label.to_string(), tr.diagnostics));
        tr
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn random_density(rng: &mut ChaCha8Rng) -> Mat4 {
    let a = Mat4::from_fn(|_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let g = a * a.adjoint();
    g.scale_real(1.0 / g.trace().re)
}

fn ampere(s: &mut Suite) {
    let t = Instant::now();
    let b1 = beam_field_at_distance(100e-6, 6.7e-3).unwrap();
    let b2 = beam_field_at_distance(50e-9, 3.3e-6).unwrap();
    let pass = rel(b1, 3e-9) <= 0.01 && rel(b2, 3e-9) <= 0.02;
    s.check(
        "ampere field pair",
        pass,
        format!("B(100 uA, 6.7 mm) = {b1:.4e} T, B(50 nA, 3.3 um) = {b2:.4e} T"),
        t,
    );
}

fn cavity(s: &mut Suite) {
    let t = Instant::now();
    let f = cavity_resonance_frequency(&CavityGeometry::vacuum(0.15, 0.15, 0.15, (1, 1, 0))).unwrap();
    // Hand evaluation: (c/2)·√((1/0.15)² + (1/0.15)²).
    let hand: f64 = 299_792_458.0 / 2.0 * (2.0f64 / (0.15 * 0.15)).sqrt();
    let pass = rel(f, hand) <= 1e-6 && (f - 1.4132e9).abs() < 0.5e5;
    s.check(
        "cavity resonance",
        pass,
        format!("f = {f:.6e} Hz, hand value {hand:.6e} Hz, relative deviation {:.1e}", rel(f, hand)),
        t,
    );
}

fn kinematics(s: &mut Suite) {
    let t = Instant::now();
    let v = beam_kinematics(18_000.0).unwrap().speed;
    // Independent route: γ = 1 + T/mc², v = c·√(1 - 1/γ²).
    let gamma: f64 = 1.0 + 18_000.0 / 510_998.95;
    let oracle = 299_792_458.0 * (1.0 - 1.0 / (gamma * gamma)).sqrt();
    let pass = rel(v, 7.754e7) <= 0.005 && rel(v, oracle) <= 1e-12;
    s.check("relativistic kinematics", pass, format!("v(18 keV) = {v:.5e} m/s, oracle {oracle:.5e} m/s"), t);
}

fn decay_oracle(s: &mut Suite) {
    let t = Instant::now();
    let p = ModelParameters {
        kappa_q: 150.0,
        ..ModelParameters::zero()
    };
    let want = (-1.5f64).exp();
    let rk = s.run("decay rk4", &p, InitialState::Em, &IntegratorConfig::new(0.01, 1e-5, Method::Rk4));
    let ex = s.run(
        "decay expm",
        &p,
        InitialState::Em,
        &IntegratorConfig::new(0.01, 1e-4, Method::ExpmPiecewise),
    );
    let e_rk = (rk.observables.p_em.last().unwrap() - want).abs();
    let e_ex = (ex.observables.p_em.last().unwrap() - want).abs();
    s.check(
        "analytic decay oracle",
        e_rk <= 1e-6 && e_ex <= 1e-9,
        format!("|P_em(0.01 s) - e^-1.5|: rk4 {e_rk:.2e} (tol 1e-6), expm {e_ex:.2e} (tol 1e-9)"),
        t,
    );
}

fn vacuum_rabi(s: &mut Suite) {
    let t = Instant::now();
    let g = 150.0;
    let p = ModelParameters {
        omega0: 1.0e9,
        omega_m: 1.0e9,
        coupling_qr: g,
        frame: Frame::Rwa,
        ..ModelParameters::zero()
    };
    let tr = s.run("vacuum rabi", &p, InitialState::Em, &IntegratorConfig::new(0.02, 1e-6, Method::Rk4));
    // First zero: the first local minimum of P_em on the record grid.
    let pe = &tr.observables.p_em;
    let k = pe.windows(2).position(|w| w[1] > w[0]).unwrap();
    let t_zero = tr.times[k];
    let want = FRAC_PI_2 / g;
    let purity_dev = tr.states.iter().map(|r| (r.purity() - 1.0).abs()).fold(0.0, f64::max);
    s.check(
        "vacuum rabi oracle",
        rel(t_zero, want) <= 0.01 && purity_dev <= 1e-8,
        format!(
            "first zero at {t_zero:.6e} s vs pi/(2g) = {want:.6e} s ({:.1e} rel), max purity deviation {purity_dev:.1e}",
            rel(t_zero, want)
        ),
        t,
    );
}

fn superoperator(s: &mut Suite) {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rwa_abs = 0.0f64;
    let mut fast_abs = 0.0f64;
    let mut fast_rel = 0.0f64;
    for name in PresetName::ALL {
        for frame in [Frame::Rwa, Frame::Rotating, Frame::Lab] {
            let mut p = preset(name);
            p.frame = frame;
            let gen = Generator::new(&p).unwrap();
            let l = gen.liouvillian(0.0);
            for _ in 0..100 {
                let rho = random_density(&mut rng);
                let direct = gen.rhs(&rho, 0.0);
                let dev = l.apply(&rho).max_abs_diff(&direct);
                if frame == Frame::Rwa {
                    rwa_abs = rwa_abs.max(dev);
                } else {
                    fast_abs = fast_abs.max(dev);
                    fast_rel = fast_rel.max(dev / direct.max_abs());
                }
            }
        }
    }
    s.check(
        "superoperator equivalence",
        rwa_abs <= 1e-10 && fast_rel <= 1e-10,
        format!(
            "100 states per preset and frame: rwa max |L vec(rho) - rhs| = {rwa_abs:.1e}; \
             rotating/lab max deviation {fast_abs:.1e} absolute, {fast_rel:.1e} relative to max |rhs|"
        ),
        t,
    );
}

fn cross_method(s: &mut Suite) {
    let t = Instant::now();
    let p = preset(PresetName::K41);
    let rk_cfg = IntegratorConfig::auto(&p, 1e-3, Method::Rk4).unwrap();
    let ex_cfg = IntegratorConfig {
        method: Method::ExpmPiecewise,
        ..rk_cfg
    };
    let rk = s.run("k41 rotating rk4", &p, InitialState::Em, &rk_cfg);
    let ex = s.run("k41 rotating expm", &p, InitialState::Em, &ex_cfg);
    let diff = max_observable_difference(&rk, &ex).unwrap();
    s.check(
        "cross-method agreement",
        diff <= 1e-6,
        format!("k41 rotating frame to 1 ms, {} steps: max observable difference {diff:.2e}", rk_cfg.step_count()),
        t,
    );
}

fn scaling(s: &mut Suite) {
    let t = Instant::now();
    let lambda = 10.0;
    let mut worst = 0.0f64;
    for name in PresetName::ALL {
        let p = preset(name);
        let t_end = 1e-5;
        let cfg = IntegratorConfig::auto(&p, t_end, Method::Rk4).unwrap();
        let scaled_p = ModelParameters { scale: lambda, ..p };
        let scaled_cfg = IntegratorConfig {
            t_end: t_end / lambda,
            dt: cfg.dt / lambda,
            ..cfg
        };
        let a = s.run(&format!("{name} base"), &p, InitialState::Em, &cfg);
        let b = s.run(&format!("{name} scaled"), &scaled_p, InitialState::Em, &scaled_cfg);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.states.iter().zip(&b.states) {
            worst = worst.max(x.matrix().max_abs_diff(y.matrix()));
        }
    }
    s.check(
        "scaling invariance",
        worst <= 1e-8,
        format!("lambda = 10, both presets, rotating frame: max snapshot deviation {worst:.2e}"),
        t,
    );
}

fn fitters(s: &mut Suite) {
    let t = Instant::now();
    let grid = |t_end: f64, n: usize| -> Vec<f64> { (0..=n).map(|i| t_end * i as f64 / n as f64).collect() };

    let ts = grid(0.05, 50_000);
    let decay: Vec<f64> = ts.iter().map(|t| (TAU * 500.0 * t).cos().abs() * (-100.0 * t).exp()).collect();
    let r100 = fit_exponential_envelope(&ts, &decay).unwrap().descending_rate().unwrap();

    let ts_v = grid(0.05, 200_000);
    let v: Vec<f64> = ts_v
        .iter()
        .map(|&t| {
            let env = if t < 5e-3 {
                (-4000.0 * t).exp()
            } else {
                (-20.0f64).exp() * (60.0 * (t - 5e-3)).exp()
            };
            env * (TAU * 20_000.0 * t).cos()
        })
        .collect();
    let fv = fit_exponential_envelope(&ts_v, &v).unwrap();
    let (r_desc, r_asc) = (fv.descending_rate().unwrap(), fv.ascending_rate().unwrap());

    let tc = grid(0.01, 10_000);
    let cosine: Vec<f64> = tc.iter().map(|t| (TAU * 500.0 * t).cos()).collect();
    let c1 = count_oscillations(&tc, &cosine, 1e-3).unwrap();
    let tau = 6e-3 / 20.0f64.ln();
    let td = grid(0.02, 20_000);
    let damped: Vec<f64> = td.iter().map(|t| (-t / tau).exp() * (TAU * 500.0 * t).cos()).collect();
    let c2 = count_oscillations(&td, &damped, 0.05).unwrap();

    let pass = rel(r100, 100.0) <= 0.01
        && rel(r_desc, 4000.0) <= 0.02
        && rel(r_asc, 60.0) <= 0.02
        && (c1.zero_crossings, c1.oscillation_count) == (10, 5)
        && c2.zero_crossings == 6;
    s.check(
        "fitter recovery",
        pass,
        format!(
            "rate 100 -> {r100:.3}; V-shape 4000/60 -> {r_desc:.1}/{r_asc:.3}; \
             crossings {} ({} oscillations) and {} (damped)",
            c1.zero_crossings, c1.oscillation_count, c2.zero_crossings
        ),
        t,
    );
}

fn qualitative(s: &mut Suite) {
    let t = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for name in PresetName::ALL {
        for init in [InitialState::Em, InitialState::Gn] {
            let mut p = preset(name);
            p.frame = Frame::Rwa;
            let cfg = IntegratorConfig::auto(&p, 0.05, Method::Rk4).unwrap();
            let tr = s.run(&format!("{name} rwa {}", init.label()), &p, init, &cfg);
            let report = trajectory_report(&tr, DEFAULT_HYSTERESIS).unwrap();
            let monotone = tr.observables.s.windows(2).all(|w| w[1] <= w[0]);
            let rate = report.sum_decay_rate.unwrap_or(f64::NAN);
            let ok = report.zero_crossings >= 4 && monotone && rate > 0.0;
            pass &= ok;
            parts.push(format!(
                "{name}/{}: {} crossings, S non-increasing {monotone}, sum rate {rate:.2}",
                init.label(),
                report.zero_crossings
            ));
        }
    }
    s.check("qualitative difference/sum structure", pass, parts.join("; "), t);
}

fn structure(s: &mut Suite) {
    let t = Instant::now();
    let mut trace: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut eig = f64::INFINITY;
    for (_, d) in &s.runs {
        trace = trace.max(d.max_trace_drift);
        herm = herm.max(d.max_hermiticity_deviation);
        eig = eig.min(d.min_eigenvalue);
    }
    s.check(
        "structure preservation",
        trace <= 1e-8 && herm <= 1e-10 && eig >= -1e-8,
        format!(
            "{} trajectories: max |tr - 1| {trace:.1e}, max hermiticity {herm:.1e}, min eigenvalue {eig:.1e}",
            s.runs.len()
        ),
        t,
    );
}

fn main() -> ExitCode {
    let mut s = Suite {
        lines: Vec::new(),
        runs: Vec::new(),
    };
    ampere(&mut s);
    cavity(&mut s);
    kinematics(&mut s);
    decay_oracle(&mut s);
    vacuum_rabi(&mut s);
    superoperator(&mut s);
    cross_method(&mut s);
    scaling(&mut s);
    fitters(&mut s);
    qualitative(&mut s);
    structure(&mut s);
    let failed = s.lines.iter().filter(|(p, _)| !p).count();
    println!("{} of {} criteria passed", s.lines.len() - failed, s.lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
