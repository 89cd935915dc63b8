//! Mode drivers producing judged report rows, informational values and CSV.

use crate::config::{ExperimentConfig, Mode};
use qfwalk::algebra::degeneracy_space;
use qfwalk::linalg::{max_abs, op_norm, CMat};
use qfwalk::qsc::{minimality_check, minimality_margin};
use qfwalk::quasifree::amplitude_set;
use qfwalk::verify::{self, ReportRow, Suite, VerifyOptions};
use qfwalk::walk::{convergence_study, gns_build, limit_generator, ConvergenceRow, GNSModel, LimitGenerator};
use qfwalk::QfError;
use std::fmt::Write as _;

/// Everything a mode produces; the process exit status follows from the rows.
#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub header: Vec<String>,
    pub values: Vec<(String, String)>,
    pub rows: Vec<ReportRow>,
    pub csv: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Human-readable report: header, values, then one line per row.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            let _ = writeln!(out, "# {h}");
        }
        for (k, v) in &self.values {
            let _ = writeln!(out, "{k}: {v}");
        }
        for r in &self.rows {
            let _ = writeln!(out, "{r}");
        }
        let failed = self.rows.iter().filter(|r| !r.passed).count();
        let _ = writeln!(out, "{} rows, {} failed", self.rows.len(), failed);
        out
    }
}

/// Shortest round-trip-safe rendering is not stable across formatters, so
/// floats are written with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// CSV with header `n,tau,abs_error,ratio`; the first ratio is empty.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("n,tau,abs_error,ratio\n");
    for r in rows {
        let ratio = r.ratio.map(fmt17).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", r.n, fmt17(r.tau), fmt17(r.abs_error), ratio);
    }
    out
}

fn header(cfg: &ExperimentConfig, mode: &str) -> Vec<String> {
    let model = match &cfg.preset {
        Some(p) => format!("preset {p}"),
        None => "explicit matrices".into(),
    };
    vec![
        format!("qfwalk {mode}"),
        format!("seed {}", cfg.seed),
        format!("model {model}, particle dim {}, system dim {}", cfg.model.dim_p, cfg.model.dim_h),
        format!("tol {:e}, cutoff {}", cfg.tol, cfg.cutoff),
    ]
}

pub fn run_verify(cfg: &ExperimentConfig, suites: &[Suite]) -> SuiteReport {
    let opts = VerifyOptions { seed: cfg.seed, tol: cfg.tol, cutoff: cfg.cutoff };
    let mut report = SuiteReport { header: header(cfg, "verify"), ..Default::default() };
    for o in verify::run(&opts, suites) {
        let exp = format!("C{}", o.id);
        if let Some(e) = &o.error {
            report.rows.push(ReportRow::flag(&exp, &format!("{} raised: {e}", o.title), false));
        }
        report.rows.extend(o.rows.iter().cloned());
        if let Some(b) = o.budget {
            report.rows.push(ReportRow::residual(&exp, &format!("{} runtime (s)", o.title), o.elapsed.as_secs_f64(), b.as_secs_f64()));
        }
    }
    report
}

fn build(cfg: &ExperimentConfig) -> Result<(GNSModel, LimitGenerator), QfError> {
    let gns = gns_build(&cfg.model.rho, cfg.tol)?;
    let lim = limit_generator(&cfg.model, &gns, cfg.tol.max(1e-12) * op_norm(&cfg.model.h_i).max(1.0))?;
    Ok((gns, lim))
}

fn failure(report: &mut SuiteReport, what: &str, e: &QfError) {
    report.rows.push(ReportRow::flag("model", &format!("{what}: {e}"), false));
}

pub fn run_converge(cfg: &ExperimentConfig) -> SuiteReport {
    let mut report = SuiteReport { header: header(cfg, "converge"), ..Default::default() };
    let (gns, lim) = match build(cfg) {
        Ok(x) => x,
        Err(e) => {
            failure(&mut report, "limit generator", &e);
            return report;
        }
    };
    let t = &cfg.test;
    match convergence_study(&cfg.model, &gns, &lim, &t.f, &t.g, &t.u, &t.v, cfg.horizon, &cfg.n_list) {
        Ok(study) => {
            report.values.push(("T".into(), fmt17(cfg.horizon)));
            report.values.push(("limit matrix element".into(), format!("{} {:+}i", fmt17(study.reference.re), fmt17(study.reference.im))));
            report.values.push(("fitted log-log slope".into(), fmt17(study.slope)));
            report.rows.push(ReportRow::flag("conv", "|walk − limit| strictly decreasing in n", study.strictly_decreasing));
            report.csv = Some(convergence_csv(&study.rows));
        }
        Err(e) => failure(&mut report, "convergence study", &e),
    }
    report
}

fn fmt_diag(m: &CMat) -> String {
    let parts: Vec<String> = (0..m.nrows()).map(|i| format!("{:.12}", m[(i, i)].re)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix(m: &CMat) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| {
            let cols: Vec<String> = (0..m.ncols()).map(|j| format!("[{:.12}, {:.12}]", m[(i, j)].re, m[(i, j)].im)).collect();
            format!("[{}]", cols.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn run_dilate(cfg: &ExperimentConfig) -> SuiteReport {
    let mut report = SuiteReport { header: header(cfg, "dilate"), ..Default::default() };
    let (gns, lim) = match build(cfg) {
        Ok(x) => x,
        Err(e) => {
            failure(&mut report, "limit generator", &e);
            return report;
        }
    };
    let sigma = gns.sigma_rho();
    let gam: Vec<String> = gns.gammas.iter().map(|g| format!("{g:.12}")).collect();
    report.values.push(("eigenvalues of rho".into(), format!("[{}] (multiplicities {:?})", gam.join(", "), gns.multiplicities)));
    report.values.push(("m_rho".into(), format!("{}", gns.m_rho)));
    report.values.push(("dim k".into(), gns.dim_k().to_string()));
    report.values.push(("C(rho) on k".into(), fmt_diag(&sigma.block(0, 0))));
    report.values.push(("conj S(rho) on k-bar".into(), fmt_diag(&sigma.block(1, 1))));
    report.values.push(("Sigma(rho)".into(), fmt_matrix(&sigma.sigma)));
    report.values.push(("max|L|".into(), fmt17(max_abs(&lim.f.l))));
    let unique = if lim.unique {
        "unique: the amplitude set is {Sigma(rho)}".to_string()
    } else if lim.degeneracy.ncols() == gns.dim_k() {
        "all amplitudes admissible".to_string()
    } else {
        format!("degenerate: k^L1 has dimension {}", lim.degeneracy.ncols())
    };
    report.values.push(("uniqueness".into(), unique));
    let scale = op_norm(&cfg.model.h_i).max(1.0);
    let tol = cfg.tol.max(1e-12) * scale;
    report.rows.push(ReportRow::residual("dilate", "‖L − (Σ(ρ)⊗I)[Q; −Q^c]‖_max", lim.quasifree_residual, tol));
    report.rows.push(ReportRow::residual("dilate", "‖L on K₀‖_max", lim.k0_residual, tol));
    report.rows.push(ReportRow::residual("dilate", "‖L*L − ρ̃(H_I²)‖_max", lim.dissipation_residual, tol * scale));
    report
}

pub fn run_uniqueness(cfg: &ExperimentConfig) -> SuiteReport {
    let mut report = SuiteReport { header: header(cfg, "uniqueness"), ..Default::default() };
    let (gns, lim) = match build(cfg) {
        Ok(x) => x,
        Err(e) => {
            failure(&mut report, "limit generator", &e);
            return report;
        }
    };
    let dh = cfg.model.dim_h;
    report.values.push(("minimality margin".into(), fmt17(minimality_margin(&lim.f.l, dh))));
    report.values.push(("minimal dilation".into(), minimality_check(&lim.f.l, dh, 1e-8).to_string()));
    match amplitude_set(&lim.f, &gns.sigma.a, cfg.tol.max(1e-8)) {
        Ok(Some(set)) => {
            report.values.push(("dim k^L1".into(), set.degeneracy.ncols().to_string()));
            report.values.push(("dim k^Q".into(), set.q_degeneracy.ncols().to_string()));
            report.values.push(("amplitude set is a singleton".into(), set.is_singleton().to_string()));
            report.rows.push(ReportRow::flag("uniq", "limit recognised as Σ(ρ)-quasifree", true));
            report.rows.push(ReportRow::flag("uniq", "k^L₁ = {0} ⇔ k^Q = {0}", set.degeneracies_agree()));
            let direct = degeneracy_space(&lim.f.l.rows(0, gns.dim_k() * dh).into_owned(), gns.dim_k(), 1e-8);
            report.rows.push(ReportRow::compare(
                "uniq",
                "dim k^L₁ from the amplitude set vs the limit",
                set.degeneracy.ncols() as f64,
                direct.ncols() as f64,
                0.0,
            ));
        }
        Ok(None) => report.rows.push(ReportRow::flag("uniq", "limit recognised as Σ(ρ)-quasifree", false)),
        Err(e) => failure(&mut report, "amplitude set", &e),
    }
    report
}

/// Dispatch on `mode`; `suites` only matters for verification.
pub fn run_suite(cfg: &ExperimentConfig, mode: Mode, suites: &[Suite]) -> SuiteReport {
    match mode {
        Mode::Verify => run_verify(cfg, suites),
        Mode::Converge => run_converge(cfg),
        Mode::Dilate => run_dilate(cfg),
        Mode::Uniqueness => run_uniqueness(cfg),
    }
}
