//! One line per acceptance criterion. Exits non-zero if a criterion fails
//! unexpectedly, or if one listed in `KNOWN_FAILURES` starts passing.

use std::f64::consts::PI;
use std::time::Instant;

use nua_core::bogoliubov::{frequency_match, reconstruct, squeezing_q, squeezing_q_by_integration};
use nua_core::entanglement::{
    build_rho_av, log_negativity, mutual_information, pt_spectrum_blocks, pt_spectrum_with,
    EigenSolver, DEFAULT_TAIL_TOL,
};
use nua_core::ode::Tolerances;
use nua_core::output::write_csv;
use nua_core::spacetime::ModeSpec;
use nua_core::specfun::{
    bessel_j_imag_pair, gamma_complex, hankel1_imag_pair, macdonald_k_imag, Precision,
};
use nua_core::sweep::{figure_scenarios, rindler_measures, run_sweep, SweepConfig, SweepResult};
use nua_core::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};

/// Criteria that cannot hold for the model as specified, with the reason.
const KNOWN_FAILURES: &[(usize, &str)] = &[(
    3,
    "|q(T0)| overshoots e^{-pi nu} before settling for w = 1, so N and I dip below their plateau and rise again",
)];

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1() -> Outcome {
    let rho = build_rho_av(0.0, 8, DEFAULT_TAIL_TOL).map_err(|e| e.to_string())?;
    let n = log_negativity(&rho).map_err(|e| e.to_string())?;
    let i = mutual_information(&rho).map_err(|e| e.to_string())?;
    check(
        (n - 1.0).abs() <= 1e-12 && (i - 2.0).abs() <= 1e-12,
        format!("N = {n}, I = {i}"),
    )
}

fn c2(run: &SweepResult) -> Outcome {
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for c in &run.curves {
        let last = c.points.last().ok_or("empty curve")?;
        if last.t0 != 10.0 {
            return Err(format!("scenario {} lost its T0 = 10 point", c.index));
        }
        let plateau = rindler_measures(&c.scenario, DEFAULT_TAIL_TOL).map_err(|e| e.to_string())?;
        worst.0 = worst.0.max((last.q_abs - (-PI * c.nu).exp()).abs());
        worst.1 = worst.1.max((last.negativity - plateau.negativity).abs());
        worst.2 = worst.2.max((last.mutual_info - plateau.mutual_info).abs());
    }
    check(
        worst.0 < 1e-3 && worst.1 < 1e-6 && worst.2 < 1e-6,
        format!(
            "max |dq| {:.2e}, |dN| {:.2e}, |dI| {:.2e}",
            worst.0, worst.1, worst.2
        ),
    )
}

fn c3(run: &SweepResult) -> Outcome {
    let mut bad = Vec::new();
    for c in &run.curves {
        if c.points.len() != 200 {
            bad.push(format!(
                "scenario {} has {} points",
                c.index,
                c.points.len()
            ));
            continue;
        }
        let rise = |f: fn(&nua_core::entanglement::EntanglementPoint) -> f64| {
            c.points
                .windows(2)
                .map(|w| f(&w[1]) - f(&w[0]))
                .fold(f64::NEG_INFINITY, f64::max)
        };
        let (dn, di) = (rise(|p| p.negativity), rise(|p| p.mutual_info));
        if dn > 1e-9 || di > 1e-9 {
            bad.push(format!(
                "K={} w={}: largest step up N {:.2e}, I {:.2e}",
                c.scenario.k, c.scenario.w, dn, di
            ));
        }
    }
    check(
        bad.is_empty(),
        if bad.is_empty() {
            "all four curves non-increasing".into()
        } else {
            bad.join("; ")
        },
    )
}

fn c4(run: &SweepResult) -> Outcome {
    // fixed K: decreasing in w; fixed w: increasing in K (scenario order
    // (0.1,1), (0.3,1), (0.1,5), (0.3,5))
    let last = |i: usize| *run.curves[i].points.last().unwrap();
    let pairs = [(0, 2), (1, 3), (1, 0), (3, 2)];
    let ok = pairs.iter().all(|&(hi, lo)| {
        last(hi).negativity > last(lo).negativity && last(hi).mutual_info > last(lo).mutual_info
    });
    let plateaus: Vec<String> = (0..4)
        .map(|i| format!("{:.4}/{:.4}", last(i).negativity, last(i).mutual_info))
        .collect();
    check(ok, format!("plateau N/I {}", plateaus.join(", ")))
}

fn c5() -> Outcome {
    let mut worst = 0.0f64;
    for q in [0.2, 0.5, 0.73, 0.93] {
        let rho = build_rho_av::<f64>(q, 60, 1.0).map_err(|e| e.to_string())?;
        let dense = pt_spectrum_with(&rho, EigenSolver::Dense).map_err(|e| e.to_string())?;
        let blocks = pt_spectrum_blocks(q, 60).map_err(|e| e.to_string())?;
        if dense.eigenvalues.len() != blocks.eigenvalues.len() {
            return Err("spectrum sizes differ".into());
        }
        for (a, b) in dense.eigenvalues.iter().zip(&blocks.eigenvalues) {
            worst = worst.max((a - b).abs());
        }
    }
    check(
        worst <= 1e-10,
        format!("max elementwise difference {worst:.2e}"),
    )
}

fn c6() -> Outcome {
    let mut worst = 0.0f64;
    for s in figure_scenarios() {
        let spec = ModeSpec::new(s.m, s.w, s.k).map_err(|e| e.to_string())?;
        // earliest T0 keeping the Bessel argument near 40 or below
        let t_lo = ((s.m / s.w).ln() - 40f64.ln()) / s.w;
        for i in 0..10 {
            let t0 = t_lo + (10.0 - t_lo) * i as f64 / 9.0;
            let a = squeezing_q(&spec, t0, &Precision::default()).map_err(|e| e.to_string())?;
            let b = squeezing_q_by_integration(&spec, t0, &Tolerances::default())
                .map_err(|e| e.to_string())?;
            worst = worst.max((a.abs() - b.abs()).abs());
        }
    }
    check(
        worst < 1e-6,
        format!("max |d|q|| {worst:.2e} over 40 points"),
    )
}

fn c7() -> Outcome {
    let prec = Precision::default();
    let mut notes = Vec::new();
    let mut ok = true;

    let mut gamma = 0.0f64;
    for k in 1..=50 {
        let nu = 0.1 * k as f64;
        let g = gamma_complex(Complex64::new(1.0, nu)).map_err(|e| e.to_string())?;
        gamma = gamma.max((g.norm_sqr() * (PI * nu).sinh() / (PI * nu) - 1.0).abs());
    }
    ok &= gamma < 1e-12;
    notes.push(format!("gamma {gamma:.1e}"));

    let mut wr = 0.0f64;
    let mut conj = 0.0f64;
    let mut ode = 0.0f64;
    for &nu in &[0.02, 0.06, 0.1, 0.3, 1.0, 2.5] {
        for &z in &[1e-3, 0.05, 0.7, 3.0, 11.0, 14.0, 40.0] {
            let p = bessel_j_imag_pair(nu, z, &prec).map_err(|e| e.to_string())?;
            let w = p.value * p.deriv.conj() - p.deriv * p.value.conj();
            let want = Complex64::new(0.0, -2.0 * (PI * nu).sinh() / (PI * z));
            wr = wr.max((w - want).norm() / want.norm());

            // J_{-iν} from its own power series, compared where that series is
            // exact to roundoff
            if z <= 1.0 {
                let minus = series_j(Complex64::new(0.0, -nu), z);
                conj = conj.max((p.value.conj() - minus).norm() / minus.norm());
            }

            let h = 0.01 * z.min(1.0);
            let d2 = diff8(|x| bessel_j_imag_pair(nu, x, &prec).unwrap().deriv, z, h);
            let terms = [z * z * d2, z * p.deriv, (z * z + nu * nu) * p.value];
            let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
            ode = ode.max(terms.iter().sum::<Complex64>().norm() / scale);

            let hp = hankel1_imag_pair(nu, z, &prec).map_err(|e| e.to_string())?;
            let h2 = diff8(|x| hankel1_imag_pair(nu, x, &prec).unwrap().deriv, z, h);
            let terms = [z * z * h2, z * hp.deriv, (z * z + nu * nu) * hp.value];
            let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
            ode = ode.max(terms.iter().sum::<Complex64>().norm() / scale);
        }
    }
    for &nu in &[0.02, 0.1, 0.3, 1.0] {
        for &x in &[0.5, 1.0, 3.0, 8.0] {
            let k = |x: f64| Complex64::new(macdonald_k_imag(nu, x).unwrap(), 0.0);
            let h = 0.01;
            let d1 = diff8(k, x, h);
            let d2 = diff8(|y| diff8(k, y, h), x, h);
            let terms = [x * x * d2, x * d1, -(x * x - nu * nu) * k(x)];
            let scale = terms.iter().map(|t| t.norm()).fold(0.0, f64::max);
            ode = ode.max(terms.iter().sum::<Complex64>().norm() / scale);
        }
    }
    ok &= wr < 1e-8 && conj < 1e-13 && ode < 1e-8;
    notes.push(format!(
        "Wronskian {wr:.1e}, conjugation {conj:.1e}, ODE {ode:.1e}"
    ));

    let k0 = macdonald_k_imag(0.0, 1.0).map_err(|e| e.to_string())?;
    let j0 = bessel_j_imag_pair(0.0, 1.0, &prec)
        .map_err(|e| e.to_string())?
        .value;
    let dk = (k0 - 0.421_024_438_240_708_3).abs();
    let dj = (j0 - Complex64::new(0.765_197_686_557_966_6, 0.0)).norm();
    ok &= dk < 1e-10 && dj < 1e-10;
    notes.push(format!("K0(1) {dk:.1e}, J0(1) {dj:.1e}"));
    check(ok, notes.join(", "))
}

// eighth-order centred first derivative
fn diff8<F: Fn(f64) -> Complex64>(f: F, x: f64, h: f64) -> Complex64 {
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, c) in C.iter().enumerate() {
        let s = (i + 1) as f64 * h;
        acc += *c * (f(x + s) - f(x - s));
    }
    acc / h
}

// Σ (-z²/4)^k / (k! Γ(μ+k+1)) · (z/2)^μ, with Γ by upward recurrence
fn series_j(mu: Complex64, z: f64) -> Complex64 {
    let g = gamma_complex(mu + 1.0).unwrap();
    let mut term = Complex64::new(1.0, 0.0) / g;
    let mut sum = term;
    for k in 1..60 {
        term *= -(z * z / 4.0) / (k as f64 * (mu + k as f64));
        sum += term;
    }
    sum * (mu * (z / 2.0).ln()).exp()
}

fn c8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (m, w, k, t0) = (
            rng.gen_range(0.2..3.0),
            rng.gen_range(0.3..5.0),
            rng.gen_range(0.01..1.5),
            rng.gen_range(-2.0..8.0),
        );
        let spec = ModeSpec::new(m, w, k).map_err(|e| e.to_string())?;
        let c = frequency_match(&spec, t0, &Precision::default()).map_err(|e| e.to_string())?;
        let (f, fd) =
            reconstruct(&spec, &c, t0, &Precision::default()).map_err(|e| e.to_string())?;
        worst = worst.max((fd + Complex64::new(0.0, c.frequency) * f).norm() / f.norm());
    }
    check(
        worst <= 1e-9,
        format!("max |F' + iWF|/|F| {worst:.2e} over 100 draws"),
    )
}

fn c9(run: &SweepResult) -> Outcome {
    let json = serde_json::to_value(&run.manifest).map_err(|e| e.to_string())?;
    let disc = json["discrepancies"]
        .as_array()
        .ok_or("no discrepancy log")?;
    if disc.len() != run.curves.len() {
        return Err("discrepancy log incomplete".into());
    }
    let mut worst_i = 0.0f64;
    let mut min_n = f64::INFINITY;
    for d in disc {
        let n = d["negativity"]["max_abs"]
            .as_f64()
            .ok_or("N delta missing")?;
        let i = d["mutual_info"]["max_abs"]
            .as_f64()
            .ok_or("I delta missing")?;
        min_n = min_n.min(n);
        worst_i = worst_i.max(i);
    }
    let bell = &json["negativity_bell_limit"];
    let reported = bell["numeric"].as_f64() == Some(1.0) && bell["closed_form"].as_f64().is_some();
    check(
        worst_i < 1e-6 && min_n > 0.0 && reported,
        format!(
            "I delta max {worst_i:.1e}; N delta min {min_n:.3}, Bell limit numeric {} vs closed form {}",
            bell["numeric"], bell["closed_form"]
        ),
    )
}

fn c10() -> (Outcome, Option<SweepResult>) {
    let start = Instant::now();
    let mut csv = Vec::new();
    let mut last = None;
    for threads in [1, 8] {
        let cfg = SweepConfig {
            threads: Some(threads),
            ..SweepConfig::default()
        };
        let run = match run_sweep(&cfg) {
            Ok(r) => r,
            Err(e) => return (Err(e.to_string()), None),
        };
        let mut bytes = Vec::new();
        if let Err(e) = write_csv(&mut bytes, &run) {
            return (Err(e.to_string()), None);
        }
        csv.push(bytes);
        last = Some(run);
    }
    let secs = start.elapsed().as_secs_f64();
    (
        check(
            csv[0] == csv[1] && secs < 120.0,
            format!(
                "identical: {}, {} bytes, {secs:.1} s",
                csv[0] == csv[1],
                csv[0].len()
            ),
        ),
        last,
    )
}

fn main() {
    let (r10, run) = c10();
    let run = run.unwrap_or_else(|| {
        eprintln!("default sweep failed; criteria 2-4 and 9 cannot run");
        std::process::exit(1);
    });

    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "Bell limit", c1()),
        (2, "Rindler plateau", c2(&run)),
        (3, "monotone degradation", c3(&run)),
        (4, "ordering law", c4(&run)),
        (5, "dual-path PT spectrum", c5()),
        (6, "ODE oracle for q", c6()),
        (7, "special-function identities", c7()),
        (8, "instantaneous positive frequency", c8()),
        (9, "discrepancy report", c9(&run)),
        (10, "determinism", r10),
    ];

    let mut unexpected = 0;
    for (n, name, outcome) in &results {
        let known = KNOWN_FAILURES.iter().find(|(k, _)| k == n);
        match (outcome, known) {
            (Ok(d), None) => println!("criterion {n:>2} PASS  {name}: {d}"),
            (Err(d), Some((_, why))) => {
                println!("criterion {n:>2} FAIL  {name}: {d} (known: {why})")
            }
            (Err(d), None) => {
                unexpected += 1;
                println!("criterion {n:>2} FAIL  {name}: {d}");
            }
            (Ok(d), Some(_)) => {
                unexpected += 1;
                println!("criterion {n:>2} PASS  {name}: {d} (listed as a known failure; update the list)");
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
