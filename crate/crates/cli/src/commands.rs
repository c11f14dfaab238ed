//! Subcommand bodies. Each returns a [`Report`]; rendering happens in the caller.

use mahler_core::cyclotomic::bsystem::Z_MAX;
use mahler_core::cyclotomic::{prime_scan, u_spectrum, verify_b_system};
use mahler_core::mahler_products::{
    char_poly_at_zeta, product_eval, product_exponent, product_exponent_alpha1, radial_fit,
    radial_grid, ProductSpec,
};
use mahler_core::mellin_asym::{decade_grid, table1_rows, table3_rows, AsymptoticModel};
use mahler_core::mu_engine::{ln_f, mu};
use mahler_core::numerics::format::{fmt_fixed, fmt_full, fmt_sig};
use mahler_core::roots4n::{omega_big, omega_small, Root4n};
use mahler_core::series::CoeffStream;
use mahler_core::{BigComplex, BigReal, Real};

use crate::cache::model_with_cache;
use crate::checks;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{Report, Table};

const SIG: usize = 20;

fn sci(x: &BigReal) -> String {
    x.to_sci(SIG)
}

fn complex_cells(z: &BigComplex) -> [String; 2] {
    [sci(&z.re), sci(&z.im)]
}

fn model(cfg: &RunConfig) -> CliResult<AsymptoticModel<BigReal>> {
    model_with_cache(cfg.cache_path.as_deref(), cfg.k_osc, cfg.prec_bits)
}

pub fn coeffs(cfg: &RunConfig, n: usize, start: usize) -> CliResult<Report> {
    let end = start
        .checked_add(n)
        .ok_or_else(|| CliError::Usage("coefficient range overflows".into()))?;
    let c = CoeffStream::global().prefix(end)?;
    let mut t = Table::new("coefficients", &["n", "c_n"]);
    for (i, v) in c.iter().enumerate().skip(start) {
        t.push(vec![i.to_string(), v.to_string()]);
    }
    Ok(Report::new("coeffs", cfg.prec_bits).table(t))
}

pub fn eval_mu(cfg: &RunConfig, t: &BigReal) -> CliResult<Report> {
    let v = mu(t, cfg.prec_bits)?;
    let mut tab = Table::new("mu", &["t", "mu"]);
    tab.push(vec![sci(t), fmt_full(&v)]);
    Ok(Report::new("eval-mu", cfg.prec_bits).table(tab))
}

pub fn eval_lnf(cfg: &RunConfig, t: &BigReal) -> CliResult<Report> {
    let v = ln_f(t, cfg.prec_bits)?;
    let mut tab = Table::new("lnF", &["t", "lnF"]);
    tab.push(vec![sci(t), fmt_full(&v)]);
    Ok(Report::new("eval-lnf", cfg.prec_bits).table(tab))
}

pub fn table1(cfg: &RunConfig, kmin: u32, kmax: u32) -> CliResult<Report> {
    let rows = table1_rows::<BigReal>(kmin, kmax, cfg.prec_bits)?;
    let mut cols = vec!["k", "t", "mu", "e1", "ratio"];
    if cfg.full {
        cols.extend(["mu_full", "e1_full", "ratio_full"]);
    }
    let mut tab = Table::new("table1", &cols);
    for r in &rows {
        let mut row = vec![
            r.k.to_string(),
            r.t.to_sci(5),
            fmt_sig(&r.mu, 8),
            r.e1.to_sci(5),
            fmt_fixed(&r.ratio, 4),
        ];
        if cfg.full {
            row.extend([fmt_full(&r.mu), fmt_full(&r.e1), fmt_full(&r.ratio)]);
        }
        tab.push(row);
    }
    Ok(Report::new("table1", cfg.prec_bits).table(tab))
}

pub fn table3(cfg: &RunConfig, decades: u32) -> CliResult<Report> {
    if decades == 0 {
        return Err(CliError::Usage("--decades must be at least 1".into()));
    }
    let m = model(cfg)?;
    let ts = decade_grid::<BigReal>(decades, cfg.prec_bits);
    let rows = table3_rows(&ts, &m)?;
    let mut cols = vec!["t", "lnF", "e2", "ratio"];
    if cfg.full {
        cols.extend(["lnF_full", "e2_full", "ratio_full"]);
    }
    let mut tab = Table::new("table3", &cols);
    for (i, r) in rows.iter().enumerate() {
        let mut row = vec![
            format!("1.0e-{}", i + 1),
            fmt_sig(&r.ln_f, 10),
            r.e2.to_sci(3),
            fmt_fixed(&r.ratio, 4),
        ];
        if cfg.full {
            row.extend([fmt_full(&r.ln_f), fmt_full(&r.e2), fmt_full(&r.ratio)]);
        }
        tab.push(row);
    }
    Ok(Report::new("table3", cfg.prec_bits)
        .table(tab)
        .note(format!(
            "predictor uses K = {} oscillatory terms",
            m.osc.len()
        )))
}

pub fn constants(cfg: &RunConfig) -> CliResult<Report> {
    let m = model(cfg)?;
    let mut scalars = Table::new("constants", &["name", "value"]);
    for (name, v) in [
        ("c0", &m.c0),
        ("c1", &m.c1),
        ("lg_rho", &m.lg_rho),
        ("L0", &m.l0),
        ("L0prime", &m.l0_prime),
        ("lambda", &m.lambda),
        ("Mtilde0", &m.m_tilde_zero),
        ("alpha", &m.alpha),
    ] {
        scalars.push(vec![name.to_string(), sci(v)]);
    }
    let mut cols = vec!["k", "A_k", "B_k", "C_k"];
    if cfg.full {
        cols.extend(["A_k_full", "B_k_full", "C_k_full"]);
    }
    let mut osc = Table::new("table2", &cols);
    for t in &m.osc {
        let mut row = vec![
            t.k.to_string(),
            t.a.to_sci(10),
            t.b.to_sci(10),
            t.c.to_sci(10),
        ];
        if cfg.full {
            row.extend([fmt_full(&t.a), fmt_full(&t.b), fmt_full(&t.c)]);
        }
        osc.push(row);
    }
    Ok(Report::new("constants", cfg.prec_bits)
        .table(scalars)
        .table(osc))
}

pub fn omega(cfg: &RunConfig, roots: &[Root4n]) -> CliResult<Report> {
    let prec = cfg.prec_bits;
    let mut tab = Table::new(
        "omega",
        &["xi", "Omega_re", "Omega_im", "omega_re", "omega_im"],
    );
    for &xi in roots {
        let big = omega_big::<BigReal>(xi, prec)?;
        let small = match omega_small::<BigReal>(xi, prec) {
            Ok(w) => complex_cells(&w),
            Err(mahler_core::Error::DivisionByZero(_)) if roots.len() > 1 => {
                ["undefined".to_string(), "undefined".to_string()]
            }
            Err(e) => return Err(e.into()),
        };
        let [br, bi] = complex_cells(&big);
        let [sr, si] = small;
        tab.push(vec![xi.to_string(), br, bi, sr, si]);
    }
    Ok(Report::new("omega", prec).table(tab))
}

pub fn gamma_scan(cfg: &RunConfig, limit: u64) -> CliResult<Report> {
    let scan = prime_scan(limit)?;
    let mut tab = Table::new(
        "gamma_scan",
        &[
            "p",
            "det_is_one",
            "exceptional",
            "witness",
            "max_bits",
            "trace",
        ],
    );
    let mut exceptional = Vec::new();
    for r in &scan {
        if r.exceptional.exceptional {
            exceptional.push(r.p.to_string());
        }
        tab.push(vec![
            r.p.to_string(),
            r.det_is_one.to_string(),
            r.exceptional.exceptional.to_string(),
            r.exceptional
                .witness
                .map(|w| w.to_string())
                .unwrap_or_default(),
            r.max_bits.to_string(),
            r.trace.to_string(),
        ]);
    }
    Ok(Report::new("gamma-scan", cfg.prec_bits)
        .table(tab)
        .note(format!(
            "exceptional primes up to {limit}: {{{}}}",
            exceptional.join(", ")
        )))
}

pub fn u_spectrum_cmd(cfg: &RunConfig, g: [[BigReal; 2]; 2], m: usize) -> CliResult<Report> {
    let s = u_spectrum(&g, m, cfg.prec_bits)?;
    let mut tab = Table::new(
        "spectrum",
        &[
            "k",
            "predicted_re",
            "predicted_im",
            "computed_re",
            "computed_im",
            "residual",
        ],
    );
    for (ep, c) in s.eigenpolys.iter().zip(&s.computed) {
        let [pr, pi] = complex_cells(&ep.eigenvalue);
        let [cr, ci] = complex_cells(c);
        tab.push(vec![
            ep.k.to_string(),
            pr,
            pi,
            cr,
            ci,
            format!("{:.3e}", ep.residual),
        ]);
    }
    Ok(Report::new("u-spectrum", cfg.prec_bits)
        .table(tab)
        .note(format!(
            "max eigenvalue mismatch {:.3e}, max eigenpolynomial residual {:.3e}: {}",
            s.max_mismatch,
            s.max_residual,
            if s.matches() {
                "spectrum matches"
            } else {
                "SPECTRUM MISMATCH"
            }
        )))
}

pub fn verify_bz(cfg: &RunConfig, samples: usize) -> CliResult<Report> {
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let prec = cfg.prec_bits;
    let step = Z_MAX / (samples + 1) as f64;
    let zs: Vec<BigReal> = (1..=samples)
        .map(|i| {
            BigReal::parse_decimal(&format!("{:.6}", step * i as f64), prec)
                .expect("decimal literal")
        })
        .collect();
    let rep = verify_b_system(&zs, prec)?;
    let mut tab = Table::new("bsystem", &["z", "terms", "residual", "bound", "ok"]);
    for s in &rep.samples {
        tab.push(vec![
            fmt_fixed(&s.z, 6),
            s.terms.to_string(),
            s.residual.to_sci(3),
            s.bound.to_sci(3),
            (s.residual <= s.bound).to_string(),
        ]);
    }
    Ok(Report::new("verify-bz", prec).table(tab).note(format!(
        "all residuals within bounds: {}",
        rep.within_bounds()
    )))
}

pub fn product(cfg: &RunConfig, alpha: BigComplex, k: u32, t: &BigReal) -> CliResult<Report> {
    let spec = ProductSpec::new(alpha, k)?;
    let v = product_eval(&spec, t, cfg.prec_bits)?;
    let mut tab = Table::new("product", &["t", "re", "im"]);
    let [re, im] = complex_cells(&v);
    tab.push(vec![sci(t), re, im]);
    Ok(Report::new("product", cfg.prec_bits).table(tab))
}

pub fn product_exponent_cmd(
    cfg: &RunConfig,
    alpha: BigComplex,
    k: u32,
    t0: &BigReal,
    decades: u32,
) -> CliResult<Report> {
    let prec = cfg.prec_bits;
    let spec = ProductSpec::new(alpha, k)?;
    if spec.is_alpha_one() {
        let d = product_exponent_alpha1(k, t0, prec)?;
        let ln_k = BigReal::from_f64(f64::from(k), prec).ln();
        let mut tab = Table::new("second_difference", &["t0", "estimate", "ln_k", "error"]);
        tab.push(vec![
            sci(t0),
            sci(&d),
            sci(&ln_k),
            (d.clone() - ln_k).to_sci(3),
        ]);
        return Ok(Report::new("product-exponent", prec)
            .table(tab)
            .note("alpha = 1: second difference of ln P, which tends to ln k"));
    }
    let e = product_exponent(&spec, t0, decades, prec)?;
    let mut pts = Table::new("points", &["t", "e_re", "e_im"]);
    for (t, v) in &e.points {
        let [re, im] = complex_cells(v);
        pts.push(vec![sci(t), re, im]);
    }
    let mut sum = Table::new(
        "exponent",
        &[
            "estimate_re",
            "estimate_im",
            "theory_re",
            "theory_im",
            "error",
        ],
    );
    let [er, ei] = complex_cells(&e.estimate);
    let [tr, ti] = complex_cells(&e.theory);
    let err = (e.estimate.clone() - e.theory.clone()).abs();
    sum.push(vec![er, ei, tr, ti, err.to_sci(3)]);
    Ok(Report::new("product-exponent", prec).table(pts).table(sum))
}

pub fn charpoly(cfg: &RunConfig, n: u64) -> CliResult<Report> {
    let r = char_poly_at_zeta::<BigReal>(n, cfg.prec_bits)?;
    let mut exact = Table::new("exact", &["coefficient", "value"]);
    exact.push(vec!["b".into(), r.exact.0.to_string()]);
    exact.push(vec!["c".into(), r.exact.1.to_string()]);
    let mut num = Table::new("numeric", &["name", "re", "im"]);
    for (name, z) in [
        ("b", &r.coeffs.0),
        ("c", &r.coeffs.1),
        ("root1", &r.roots.0),
        ("root2", &r.roots.1),
    ] {
        let [re, im] = complex_cells(z);
        num.push(vec![name.to_string(), re, im]);
    }
    let mut moduli = Table::new("moduli", &["small", "large", "perron_exponent"]);
    moduli.push(vec![
        sci(&r.root_moduli.0),
        sci(&r.root_moduli.1),
        sci(&r.perron_exponent),
    ]);
    Ok(Report::new("charpoly", cfg.prec_bits)
        .table(exact)
        .table(num)
        .table(moduli)
        .note(format!("orbit of length {} under z -> z^4", r.k_steps)))
}

pub fn radial_fit_cmd(cfg: &RunConfig, n: u64, points: usize, t0: &BigReal) -> CliResult<Report> {
    let prec = cfg.prec_bits;
    let grid = radial_grid(t0, points);
    let fit = radial_fit(n, &grid, prec)?;
    let mut pts = Table::new("points", &["t", "ln_abs_F"]);
    for (t, y) in &fit.points {
        pts.push(vec![sci(t), sci(y)]);
    }
    let mut cols = vec!["n", "slope", "label"];
    let perron = if n >= 3 {
        Some(char_poly_at_zeta::<BigReal>(n, prec)?)
    } else {
        None
    };
    if perron.is_some() {
        cols.push("perron_exponent");
    }
    let mut sum = Table::new("fit", &cols);
    let mut row = vec![
        n.to_string(),
        fit.slope.to_sci(6),
        if fit.heuristic {
            "HEURISTIC"
        } else {
            "control"
        }
        .to_string(),
    ];
    if let Some(p) = &perron {
        row.push(p.perron_exponent.to_sci(6));
    }
    sum.push(row);
    let mut rep = Report::new("radial-fit", prec).table(pts).table(sum);
    if fit.heuristic {
        rep = rep
            .note("HEURISTIC: least-squares slope of ln|F| against ln t; not a certified exponent");
    }
    Ok(rep)
}

/// Runs every acceptance check. The report omits timings so that it is identical
/// from run to run; the returned flag is true when every check passed.
pub fn reproduce_all(cfg: &RunConfig) -> (Report, bool) {
    let results = checks::run_all(|r| log::info!("{}", r.line()));
    let mut tab = Table::new("acceptance", &["id", "status", "title", "detail"]);
    let mut all = true;
    for r in &results {
        all &= r.pass;
        tab.push(vec![
            r.id.to_string(),
            if r.pass { "PASS" } else { "FAIL" }.to_string(),
            r.title.to_string(),
            r.detail.clone(),
        ]);
    }
    let passed = results.iter().filter(|r| r.pass).count();
    let rep = Report::new("reproduce-all", cfg.prec_bits)
        .table(tab)
        .note(format!("{passed} of {} checks passed", results.len()));
    (rep, all)
}
