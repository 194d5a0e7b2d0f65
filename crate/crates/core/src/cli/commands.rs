//! The four subcommands, rendered to strings.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::config::RunConfig;
use crate::error::Error;
use crate::numeric::{self, Verdict};
use crate::spectra;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_NONCONVERGENCE: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Verify,
    Scan,
    Wavefunction,
}

/// What a command produced: the report, warnings for stderr and the exit
/// code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub warnings: Vec<String>,
    pub exit_code: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            output,
            warnings: Vec::new(),
            exit_code: EXIT_OK,
        }
    }

    pub fn failure(exit_code: u8, message: String) -> Self {
        Self {
            output: String::new(),
            warnings: vec![message],
            exit_code,
        }
    }
}

pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::ConvergenceFailure(_) => EXIT_NONCONVERGENCE,
        _ => EXIT_CONFIG,
    }
}

/// Shortest round-trip decimal; scientific notation outside `[1e-5, 1e16)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn fmt_c(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", fmt_f64(z.re), fmt_f64(z.im.abs()))
}

pub fn run(command: Command, config: &RunConfig) -> Outcome {
    let result = match command {
        Command::Spectrum => spectrum(config),
        Command::Verify => verify(config),
        Command::Scan => scan(config),
        Command::Wavefunction => wavefunction(config),
    };
    result.unwrap_or_else(|e| Outcome::failure(exit_code_for(&e), format!("error: {e}")))
}

fn spectrum(config: &RunConfig) -> Result<Outcome, Error> {
    let run = &config.run;
    let records =
        spectra::analytic_spectrum(&config.model, run.mode, run.l_max, run.n_max, &config.units)?;
    let mut out = String::from("n,l,E_re,E_im,formula,admissible\n");
    let mut emitted = 0;
    for r in records
        .iter()
        .filter(|r| r.admissible || run.include_inadmissible)
    {
        emitted += 1;
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.l,
            fmt_f64(r.energy.re),
            fmt_f64(r.energy.im),
            r.formula.name(),
            r.admissible
        )
        .unwrap();
    }
    let mut outcome = Outcome::ok(out);
    if emitted == 0 {
        outcome
            .warnings
            .push("warning: no admissible bound states for this configuration".into());
    }
    Ok(outcome)
}

fn verify(config: &RunConfig) -> Result<Outcome, Error> {
    let run = &config.run;
    let model = &config.model;
    let analytic = spectra::analytic_spectrum(model, run.mode, 0, run.n_max, &config.units)?;
    let v = numeric::verify(model, &analytic, &config.grid, run.tol_abs, &config.units)?;
    let spec = &v.spectrum;
    let report = &v.report;
    let mut out = String::new();
    writeln!(
        out,
        "# verify family={} mode={} policy={}",
        model.family(),
        run.mode.name(),
        if v.diagnostic { "diagnostic" } else { "gating" }
    )
    .unwrap();
    let g = &config.grid;
    writeln!(
        out,
        "# grid x_min={} x_max={} n_points={} refined_n_points={}",
        fmt_f64(g.x_min()),
        fmt_f64(g.x_max()),
        g.n_points(),
        g.refined().n_points()
    )
    .unwrap();
    writeln!(
        out,
        "# richardson_delta={} converged={} tol_abs={} bound_states={}",
        fmt_f64(spec.richardson_delta),
        spec.converged,
        fmt_f64(report.tol_abs),
        spec.eigenvalues.len()
    )
    .unwrap();
    out.push_str("n,l,E_analytic_re,E_analytic_im,E_numeric_re,E_numeric_im,abs_error,rel_error,within_tol\n");
    for p in &report.pairs {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            p.analytic.n,
            p.analytic.l,
            fmt_f64(p.analytic.energy.re),
            fmt_f64(p.analytic.energy.im),
            fmt_f64(p.numeric.re),
            fmt_f64(p.numeric.im),
            fmt_f64(p.abs_error),
            fmt_f64(p.rel_error),
            p.within_tol
        )
        .unwrap();
    }
    let unmatched_a: Vec<String> = report
        .unmatched_analytic
        .iter()
        .map(|r| format!("n={}:l={}", r.n, r.l))
        .collect();
    let unmatched_n: Vec<String> = report.unmatched_numeric.iter().map(|z| fmt_c(*z)).collect();
    writeln!(out, "# unmatched_analytic={}", unmatched_a.join(" ")).unwrap();
    writeln!(out, "# unmatched_numeric={}", unmatched_n.join(" ")).unwrap();
    writeln!(out, "# verdict={}", report.verdict.name()).unwrap();

    let mut outcome = Outcome::ok(out);
    if v.diagnostic {
        outcome
            .warnings
            .push("note: non-Hermitian model, verification is diagnostic only".into());
        return Ok(outcome);
    }
    if !spec.converged {
        outcome.exit_code = EXIT_NONCONVERGENCE;
        outcome.warnings.push(format!(
            "error: Richardson certificate failed (delta {} against tolerance {})",
            fmt_f64(spec.richardson_delta),
            fmt_f64(run.tol_abs / 2.0)
        ));
    } else if report.verdict != Verdict::Match {
        outcome.exit_code = EXIT_MISMATCH;
        outcome.warnings.push(format!(
            "error: verification verdict {}",
            report.verdict.name()
        ));
    }
    Ok(outcome)
}

fn csv_field(s: &str) -> String {
    s.replace([',', '\n'], ";")
}

fn scan(config: &RunConfig) -> Result<Outcome, Error> {
    let run = &config.run;
    let spec = run
        .scan
        .as_ref()
        .ok_or_else(|| Error::InvalidModel("scan needs param1/param2 axes in [run]".into()))?;
    let points = numeric::reality_scan(
        &config.model,
        (&spec.axis1, &spec.axis2),
        &config.grid,
        run.tol_imag,
        &config.units,
    );
    let mut out = String::new();
    writeln!(
        out,
        "# scan family={} param1={} param2={} tol_imag={} n_points={}",
        config.model.family(),
        spec.axis1.name,
        spec.axis2.name,
        fmt_f64(run.tol_imag),
        config.grid.n_points()
    )
    .unwrap();
    out.push_str("param1,param2,max_im_E,is_real,condition_holds,status\n");
    for p in &points {
        let condition = match p.condition_holds {
            Some(b) => b.to_string(),
            None => "na".into(),
        };
        let status = match &p.status {
            Ok(()) => "ok".to_string(),
            Err(msg) => csv_field(&format!("error: {msg}")),
        };
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(p.param1),
            fmt_f64(p.param2),
            fmt_f64(p.max_im),
            p.is_real,
            condition,
            status
        )
        .unwrap();
    }
    let s = numeric::summarize(&points);
    writeln!(
        out,
        "# summary points={} failed={} real={} condition_true={} agree={} agreement_rate={}",
        s.points,
        s.failed,
        s.real,
        s.condition_true,
        s.agree,
        fmt_f64(s.agreement_rate)
    )
    .unwrap();
    Ok(Outcome::ok(out))
}

fn wavefunction(config: &RunConfig) -> Result<Outcome, Error> {
    let run = &config.run;
    let sample = spectra::groundstate_wavefunction(
        &config.model,
        run.l,
        &config.grid,
        run.mode,
        &config.units,
    )?;
    let mut out = String::new();
    if sample.normalized {
        writeln!(
            out,
            "# wavefunction family={} mode={} n=0 l={} normalized norm_constant={}",
            config.model.family(),
            run.mode.name(),
            run.l,
            fmt_f64(sample.norm_constant)
        )
        .unwrap();
    } else {
        writeln!(
            out,
            "# wavefunction family={} mode={} n=0 l={} unnormalized",
            config.model.family(),
            run.mode.name(),
            run.l
        )
        .unwrap();
    }
    out.push_str("x,psi_re,psi_im\n");
    for (x, v) in sample.grid.points().zip(&sample.values) {
        writeln!(out, "{},{},{}", fmt_f64(x), fmt_f64(v.re), fmt_f64(v.im)).unwrap();
    }
    Ok(Outcome::ok(out))
}
