//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use freeconv::oracle::{ks_distance, rmt_sample, ReferenceLaw};
use freeconv::{
    atoms_of_power, convolve_power, discretize_continuous, f_t_value, g_value, merge_threshold,
    n_breakpoints, n_curve, psi_t_value, support, vplus_components, AtomicMeasure, Complex,
    MeasureModel, NevanlinnaRep, PowerAtom, SamplingOptions,
};

type Outcome = Result<String, String>;
type Suite = fn(&[MeasureModel]) -> Result<(), String>;
type Criterion = fn() -> Outcome;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn counts(m: &MeasureModel, ts: &[f64]) -> Result<Vec<usize>, String> {
    Ok(n_curve(m, ts)
        .map_err(err)?
        .into_iter()
        .map(|(_, n)| n)
        .collect())
}

fn golden_tables() -> Outcome {
    let start = Instant::now();

    let m = mu_eps(0.3);
    let ts = [1.01, 1.1, 1.17, 1.18, 1.5, 2.0, 3.0, 3.33, 3.34, 4.0, 10.0];
    let want = [5, 5, 5, 3, 3, 3, 3, 3, 1, 1, 1];
    let got = counts(&m, &ts)?;
    ensure(got == want, || {
        format!("eps=0.3 counts {got:?}, want {want:?}")
    })?;
    let bps = n_breakpoints(&m, 1.05, 4.0, 64).map_err(err)?;
    let found: Vec<(f64, usize, usize)> = bps.iter().map(|b| (b.t, b.before, b.after)).collect();
    ensure(found.len() == 2, || {
        format!("eps=0.3 breakpoints {found:?}")
    })?;
    let (e1, e2) = ((bps[0].t - 2.0 / 1.7).abs(), (bps[1].t - 10.0 / 3.0).abs());
    ensure(
        e1 < 1e-6 && e2 < 1e-6 && bps[0].after == 3 && bps[1].after == 1,
        || format!("eps=0.3 breakpoints {found:?}"),
    )?;

    let m = mu_eps(2.0 / 3.0);
    let got = counts(&m, &[1.05, 1.3, 1.49, 1.51, 2.0, 5.0])?;
    ensure(got == [5, 5, 5, 1, 1, 1], || {
        format!("eps=2/3 counts {got:?}")
    })?;
    let bps = n_breakpoints(&m, 1.05, 4.0, 64).map_err(err)?;
    ensure(
        bps.len() == 1 && (bps[0].t - 1.5).abs() < 1e-6 && bps[0].before == 5 && bps[0].after == 1,
        || format!("eps=2/3 breakpoints {bps:?}"),
    )?;
    let e3 = (bps[0].t - 1.5).abs();

    let m = mu_eps(0.8);
    for (t, want) in [
        (1.01, 3),
        (1.1, 3),
        (1.249, 3),
        (1.25, 2),
        (1.3, 2),
        (1.5, 2),
        (1.666, 2),
        (5.0 / 3.0, 0),
        (1.7, 0),
        (3.0, 0),
    ] {
        let n = atoms_of_power(&m.mu, t).map_err(err)?.len();
        ensure(n == want, || {
            format!("eps=0.8 t={t}: {n} atoms, want {want}")
        })?;
    }

    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 5.0, || format!("took {secs:.2} s"))?;
    Ok(format!(
        "breakpoint errors {e1:.1e}, {e2:.1e}, {e3:.1e}; {secs:.2} s"
    ))
}

fn rho_closed_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for eps in [0.3, 0.5, 0.8] {
        let rep = NevanlinnaRep::from_atomic(&mu_eps(eps).mu);
        let want = ReferenceLaw::MuEpsRho { eps }.atoms();
        let got = rep.rho.atoms();
        ensure(got.len() == 2, || format!("eps={eps}: {} atoms", got.len()))?;
        for (g, w) in got.iter().zip(&want) {
            worst = worst
                .max((g.position - w.position).abs())
                .max((g.mass - w.mass).abs());
        }
    }
    ensure(worst <= 1e-10, || format!("max error {worst:.2e}"))?;
    Ok(format!("max error {worst:.1e}"))
}

fn g_closed_form() -> Outcome {
    let rep = &mu_eps(0.5).rep;
    let law = ReferenceLaw::MuEpsG { eps: 0.5 };
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        // offsets keep the grid away from the poles ±√0.5
        let x = -3.0 + 6.0 * (i as f64 + 0.37) / 100.0;
        let (got, want) = (g_value(rep, x), law.eval(x));
        worst = worst.max((got - want).abs() / want);
    }
    ensure(worst <= 1e-10, || format!("max relative error {worst:.2e}"))?;
    Ok(format!("max relative error {worst:.1e} over 100 points"))
}

fn arcsine() -> Outcome {
    let res = convolve_power(&bernoulli(), 2.0, &SamplingOptions::default()).map_err(err)?;
    ensure(res.atoms.is_empty(), || {
        format!("atoms at t=2: {:?}", res.atoms)
    })?;
    let interior: Vec<_> = res.density.iter().filter(|s| s.u.abs() < 1.9).collect();
    ensure(interior.len() >= 256, || {
        format!("only {} interior samples", interior.len())
    })?;
    let mut worst: f64 = 0.0;
    for k in 0..256 {
        let s = interior[k * (interior.len() - 1) / 255];
        worst = worst.max((s.pdf - ReferenceLaw::BernoulliArcsine.eval(s.u)).abs());
    }
    ensure(worst <= 1e-9, || format!("max error {worst:.2e}"))?;
    for t in [1.2, 1.5, 1.9] {
        let atoms = atoms_of_power(&bernoulli().mu, t).map_err(err)?;
        let mass = t / 2.0 - (t - 1.0);
        let want = [
            PowerAtom { position: -t, mass },
            PowerAtom { position: t, mass },
        ];
        let ok = atoms.len() == 2
            && atoms.iter().zip(&want).all(|(a, w)| {
                (a.position - w.position).abs() < 1e-15 && (a.mass - w.mass).abs() < 1e-15
            });
        ensure(ok, || format!("t={t}: atoms {atoms:?}"))?;
    }
    Ok(format!("max density error {worst:.1e} at 256 points"))
}

fn semicircle_error(n_atoms: usize) -> Result<f64, String> {
    let (xs, pdf) = semicircle_grid(20001);
    let mu = discretize_continuous(&xs, &pdf, n_atoms).map_err(err)?;
    let res = convolve_power(
        &MeasureModel::from_atomic(mu),
        2.0,
        &SamplingOptions::default(),
    )
    .map_err(err)?;
    let law = ReferenceLaw::Semicircle { t: 2.0 };
    let edge = 0.9 * 2.0 * 2f64.sqrt();
    Ok(res
        .density
        .iter()
        .filter(|s| s.u.abs() <= edge)
        .map(|s| (s.pdf - law.eval(s.u)).abs())
        .fold(0.0, f64::max))
}

fn semicircle() -> Outcome {
    let sizes = [100, 200, 400];
    let errs = sizes
        .iter()
        .map(|&n| semicircle_error(n))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = format!(
        "sup error {:.2e} / {:.2e} / {:.2e} at 100 / 200 / 400 atoms",
        errs[0], errs[1], errs[2]
    );
    ensure(
        errs[1] < 0.02 && errs[2] < 0.005 && errs[0] > errs[1] && errs[1] > errs[2],
        || summary.clone(),
    )?;
    Ok(summary)
}

fn random_matrix() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    for (name, m) in [("bernoulli", bernoulli()), ("mu_eps(0.5)", mu_eps(0.5))] {
        let engine = convolve_power(&m, 2.0, &SamplingOptions::default()).map_err(err)?;
        let mut ks_all = Vec::new();
        for seed in [1, 2, 3] {
            let emp = rmt_sample(&m.mu, 2, 400, 20, seed).map_err(err)?;
            ks_all.push(ks_distance(&emp, |u| engine.cdf(u)));
        }
        let ks_max = ks_all.iter().cloned().fold(0.0, f64::max);
        ensure(ks_max < 0.05, || format!("{name}: KS {ks_all:?}"))?;
        lines.push(format!("{name} KS max {ks_max:.4}"));
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{}; {secs:.1} s", lines.join(", ")))
}

fn prop_f_monotone(ms: &[MeasureModel]) -> Result<(), String> {
    for (i, m) in ms.iter().enumerate() {
        let (lo, hi) = (
            m.mu.atoms()[0].position - 1.0,
            m.mu.atoms()[m.mu.len() - 1].position + 1.0,
        );
        for (t1, t2) in [(1.2, 1.6), (1.6, 2.5), (2.5, 6.0)] {
            for x in linspace(lo, hi, 100) {
                let (a, b) = (
                    f_t_value(&m.rep, t1, x).map_err(err)?,
                    f_t_value(&m.rep, t2, x).map_err(err)?,
                );
                ensure(a <= b + 1e-12, || {
                    format!("measure {i}, x={x}: f_{t1}={a} > f_{t2}={b}")
                })?;
            }
        }
    }
    Ok(())
}

fn prop_psi_increasing(ms: &[MeasureModel]) -> Result<(), String> {
    for (i, m) in ms.iter().enumerate() {
        let (lo, hi) = (
            m.mu.atoms()[0].position - 1.0,
            m.mu.atoms()[m.mu.len() - 1].position + 1.0,
        );
        for t in [1.3, 2.0, 4.0] {
            let psi = linspace(lo, hi, 400)
                .into_iter()
                .map(|x| Ok(psi_t_value(&m.rep, t, x).map_err(err)?.psi))
                .collect::<Result<Vec<_>, String>>()?;
            ensure(psi.windows(2).all(|w| w[0] < w[1]), || {
                format!("measure {i}, t={t}: psi not increasing")
            })?;
        }
    }
    Ok(())
}

fn prop_n_nonincreasing(ms: &[MeasureModel]) -> Result<(), String> {
    let grid: Vec<f64> = (0..50)
        .map(|i| 1.01 * (20.0f64 / 1.01).powf(i as f64 / 49.0))
        .collect();
    for (i, m) in ms.iter().enumerate() {
        let n = counts(m, &grid)?;
        ensure(n.windows(2).all(|w| w[0] >= w[1]), || {
            format!("measure {i}: n(t) = {n:?}")
        })?;
    }
    Ok(())
}

fn prop_mass(ms: &[MeasureModel]) -> Result<(), String> {
    for (i, m) in ms.iter().enumerate() {
        for t in [1.3, 2.0, 5.0] {
            let res = convolve_power(m, t, &SamplingOptions::default()).map_err(err)?;
            let mass = res.total_mass();
            ensure((mass - 1.0).abs() <= 1e-3, || {
                format!("measure {i}, t={t}: mass {mass}")
            })?;
        }
    }
    Ok(())
}

fn prop_lipschitz(ms: &[MeasureModel]) -> Result<(), String> {
    for (i, m) in ms.iter().enumerate() {
        let (lo, hi) = (
            m.mu.atoms()[0].position - 1.0,
            m.mu.atoms()[m.mu.len() - 1].position + 1.0,
        );
        for t in [1.5, 3.0] {
            let curve = linspace(lo, hi, 60)
                .into_iter()
                .map(|x| Ok(Complex::new(x, f_t_value(&m.rep, t, x).map_err(err)?)))
                .collect::<Result<Vec<_>, String>>()?;
            let fs = curve
                .iter()
                .map(|&z| m.rep.eval_f(z).map_err(err))
                .collect::<Result<Vec<_>, String>>()?;
            for a in 0..curve.len() {
                for b in a + 1..curve.len() {
                    let dz = (curve[a] - curve[b]).norm();
                    let df = (fs[a] - fs[b]).norm();
                    ensure(df <= t / (t - 1.0) * dz * (1.0 + 1e-9), || {
                        format!("measure {i}, t={t}: upper bound")
                    })?;
                    if t > 2.0 {
                        ensure(df >= (t - 2.0) / (t - 1.0) * dz * (1.0 - 1e-9), || {
                            format!("measure {i}, t={t}: lower bound")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn prop_density_bound(ms: &[MeasureModel]) -> Result<(), String> {
    for (i, m) in ms.iter().enumerate() {
        for t in [1.3, 2.0, 5.0] {
            let res = convolve_power(m, t, &SamplingOptions::default()).map_err(err)?;
            for s in res.density.iter().filter(|s| s.pdf > 0.0) {
                let f = f_t_value(&m.rep, t, s.x).map_err(err)?;
                let bound = (t - 1.0) / (PI * t * f);
                ensure(s.pdf <= bound * (1.0 + 1e-12), || {
                    format!("measure {i}, t={t}, x={}: {} > {bound}", s.x, s.pdf)
                })?;
            }
        }
    }
    Ok(())
}

fn prop_merge(ms: &[MeasureModel]) -> Result<(), String> {
    for (i, m) in ms.iter().enumerate() {
        let t0 = merge_threshold(m).map_err(err)?.t0;
        let n = support(m, 1.01 * t0).map_err(err)?.n;
        ensure(n == 1, || {
            format!("measure {i}: n = {n} at 1.01 t0 = {}", 1.01 * t0)
        })?;
    }
    Ok(())
}

fn properties() -> Outcome {
    let ms = random_measures(20240611, 20);
    let suites: [(&str, Suite); 7] = [
        ("f_t monotone in t", prop_f_monotone),
        ("psi_t increasing", prop_psi_increasing),
        ("n(t) nonincreasing", prop_n_nonincreasing),
        ("mass", prop_mass),
        ("Lipschitz", prop_lipschitz),
        ("density bound", prop_density_bound),
        ("merge threshold", prop_merge),
    ];
    for (name, suite) in suites {
        suite(&ms).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "{} suites over {} measures",
        suites.len(),
        ms.len()
    ))
}

fn dyadic_truncation() -> Outcome {
    let comps = |n_max: i32, t: f64| -> Result<usize, String> {
        Ok(
            vplus_components(&MeasureModel::from_nu(&dyadic_nu(n_max)).rep, t)
                .map_err(err)?
                .len(),
        )
    };
    let (at2, at15) = (comps(12, 2.0)?, comps(12, 1.5)?);
    ensure(at2 >= 10 && at15 >= 11, || {
        format!("counts {at2} at t=2, {at15} at t=1.5")
    })?;
    let growth = (6..=12)
        .map(|n| comps(n, 2.0))
        .collect::<Result<Vec<_>, _>>()?;
    ensure(growth.windows(2).all(|w| w[0] <= w[1]), || {
        format!("counts for n_max 6..12 at t=2: {growth:?}")
    })?;
    Ok(format!(
        "{at2} components at t=2, {at15} at t=1.5; n_max 6..12 gives {growth:?}"
    ))
}

fn dirac() -> Outcome {
    for c in [-1.3, 0.0, 2.5] {
        let m = MeasureModel::from_atomic(AtomicMeasure::dirac(c).map_err(err)?);
        for t in [1.5, 2.0, 10.0] {
            let res = convolve_power(&m, t, &SamplingOptions::default()).map_err(err)?;
            ensure(
                res.atoms
                    == [PowerAtom {
                        position: t * c,
                        mass: 1.0,
                    }],
                || format!("c={c}, t={t}: {:?}", res.atoms),
            )?;
            ensure(
                res.density.is_empty() && res.support.vplus.is_empty() && res.support.n == 1,
                || format!("c={c}, t={t}: density or V_t^+ not empty"),
            )?;
        }
    }
    Ok("delta_c maps to delta_tc for c in {-1.3, 0, 2.5}, t in {1.5, 2, 10}".into())
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("mu_eps component tables", golden_tables),
        ("rho_eps closed form", rho_closed_form),
        ("g_eps closed form", g_closed_form),
        ("arcsine law", arcsine),
        ("semicircle scaling", semicircle),
        ("random-matrix cross-check", random_matrix),
        ("property suites", properties),
        ("dyadic truncation", dyadic_truncation),
        ("Dirac degeneracy", dirac),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail} [{secs:.2} s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
