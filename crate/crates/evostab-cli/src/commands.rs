//! Command implementations.
//!
//! Every command assembles its complete report in memory and writes it once,
//! to stdout or to `--output`; a failure before that point leaves no partial
//! file behind. Exit codes are a stable contract (see `main.rs`).

use crate::config::{self, Resolved};
use crate::records::{
    AlphaRecord, BoundsRecord, CertificateRecord, CheckOut, Doc, ErrorRecord, RunRecord,
    SolutionRecord, StepChainOut, SummaryRecord, VerificationRecord, WindowRecord,
};
use crate::{Cli, Command, EXIT_CONFIG, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS};
use evostab::adapted_norms::{admissible_scan, AlphaContext};
use evostab::certificates::{
    certify_stability_with_margin, verify_certificate, verify_step_chain, StabilityCertificate,
};
use evostab::dynamics::EvolutionCache;
use evostab::error::Error;
use evostab::evolution_operators::{
    apply_generator, evolution_map_norm, generator_inverse_bounds, solve_generator,
    spectral_radius_estimate,
};
use evostab::examples::{run_example1_suite, run_example2_suite};
use evostab::linalg::vec_norm;
use evostab::report::{self, CheckRecord, CheckStatus};
use evostab::window::WindowFile;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Tolerance for declaring a verification ratio sound.
const RATIO_TOL: f64 = 1e-9;

/// Anything that aborts a command before its report is written.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io { path: PathBuf, source: std::io::Error },
    Lib(Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io { .. } => EXIT_CONFIG,
            Failure::Lib(e) => match e {
                Error::HorizonTooSmall(_) => EXIT_INCONCLUSIVE,
                Error::NotCertifiable(_) => EXIT_FAIL,
                _ => EXIT_CONFIG,
            },
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(msg) => write!(f, "{msg}"),
            Failure::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Failure::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub fn run(cli: Cli) -> Result<u8, Failure> {
    let cfg = config::resolve(&cli)?;
    match &cli.command {
        Command::Analyze => cmd_analyze(&cfg),
        Command::Certify { alpha, certificate_out } => {
            cmd_certify(&cfg, *alpha, certificate_out.as_deref())
        }
        Command::Solve { input, solution_out } => cmd_solve(&cfg, input, solution_out.as_deref()),
        Command::Example { name, alpha, beta, n_max } => {
            cmd_example(&cfg, name, *alpha, *beta, *n_max)
        }
        Command::Verify { certificate } => cmd_verify(&cfg, certificate),
    }
}

fn emit(cfg: &Resolved, doc: &Doc) -> Result<(), Failure> {
    let text = doc.render()?;
    match &cfg.output_path {
        Some(path) => {
            fs::write(path, text).map_err(|source| Failure::Io { path: path.clone(), source })
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|source| Failure::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

fn build_cache(cfg: &Resolved, horizon: usize) -> Result<EvolutionCache<f64>, Failure> {
    let family = cfg.require_family()?.clone();
    Ok(EvolutionCache::build(family.into_family::<f64>()?, horizon, cfg.vector_norm)?)
}

/// Scan the exponent grid and report one verdict record per exponent.
fn cmd_analyze(cfg: &Resolved) -> Result<u8, Failure> {
    if cfg.alpha_grid.is_empty() {
        return Err(Failure::Config(
            "analyze needs a nonempty exponent grid; pass --alpha-grid or set `alpha_grid`"
                .to_string(),
        ));
    }
    let horizon = cfg.horizon();
    let cache = build_cache(cfg, horizon)?;
    let probe = cfg.probe_config();

    let mut doc = Doc::new(cfg.format);
    doc.push(&RunRecord::new(
        "analyze",
        Some(cfg.require_family()?.clone()),
        Some(horizon),
        cfg.vector_norm,
        cfg.probes,
        cfg.seed,
    ))?;

    let scans = admissible_scan(&cache, &cfg.alpha_grid, None)?;
    for scan in &scans {
        let ctx = AlphaContext::new(&cache, scan.alpha, None)?;
        let table = ctx.growth_table_ln();
        let mut sup_ln = f64::NEG_INFINITY;
        let mut argmax = 0usize;
        for (n, &v) in table.iter().enumerate() {
            if v > sup_ln {
                sup_ln = v;
                argmax = n;
            }
        }
        let map_norm = evolution_map_norm(&ctx, &probe)?;
        let radius = spectral_radius_estimate(&ctx, cfg.k_max.min(horizon), &probe)?;
        doc.push(&AlphaRecord {
            record: "alpha",
            alpha: scan.alpha,
            classification: scan.classification,
            uniform: scan.uniform,
            weighted_sup_ln: scan.sup_m_ln,
            weighted_sup_ln_half: scan.sup_m_ln_half,
            growth_slope: scan.slope,
            edge_attained: scan.edge_attained,
            prefix_growth: scan.prefix_growth,
            tail_certified: scan.tail_certified,
            tail_heuristic: scan.tail_heuristic,
            growth_constant_sup_ln: sup_ln,
            growth_constant_argmax: argmax,
            growth_constant_final_ln: *table.last().expect("growth table is never empty"),
            evolution_map_norm: map_norm,
            evolution_map_ceiling: scan.alpha.exp(),
            spectral_radius_estimate: radius.value,
            spectral_radius_heuristic: radius.heuristic,
        })?;
    }

    emit(cfg, &doc)?;
    Ok(EXIT_PASS)
}

/// Issue a decay certificate at one exponent, re-verify it on the window,
/// and walk the refinement chain.
fn cmd_certify(cfg: &Resolved, alpha: f64, cert_out: Option<&Path>) -> Result<u8, Failure> {
    if !alpha.is_finite() {
        return Err(Failure::Config("alpha must be finite".to_string()));
    }
    let horizon = cfg.horizon();
    let cache = build_cache(cfg, horizon)?;
    let ctx = AlphaContext::new(&cache, alpha, None)?;
    let bounds = generator_inverse_bounds(&ctx, &cfg.probe_config())?;

    let mut doc = Doc::new(cfg.format);
    doc.push(&RunRecord::new(
        "certify",
        Some(cfg.require_family()?.clone()),
        Some(horizon),
        cfg.vector_norm,
        cfg.probes,
        cfg.seed,
    ))?;
    doc.push(&BoundsRecord {
        record: "inverse-bounds",
        alpha,
        horizon,
        lower: bounds.lower,
        upper: bounds.upper.finite(),
        divergent: bounds.upper.is_divergent(),
        row_slope: bounds.row_slope,
        quality: match bounds.quality {
            evostab::evolution_operators::BoundQuality::SlotNormalized => "slot-normalized",
            evostab::evolution_operators::BoundQuality::NormProduct => "norm-product",
        }
        .to_string(),
    })?;

    let cert = match certify_stability_with_margin(&ctx, &bounds, cfg.delta) {
        Ok(cert) => cert,
        Err(Error::NotCertifiable(msg)) => {
            let full = Error::NotCertifiable(msg).to_string();
            doc.push(&ErrorRecord { record: "error", exit: EXIT_FAIL, message: full })?;
            emit(cfg, &doc)?;
            return Ok(EXIT_FAIL);
        }
        Err(e) => return Err(e.into()),
    };

    let ver = verify_certificate(&cert, &cache)?;
    // the step chain is a nonnegative-exponent construction; below zero the
    // certificate is audited by the verification record alone
    let chain = if alpha >= 0.0 {
        verify_step_chain(&ctx, cert.inverse_norm, cfg.k_max)?
    } else {
        Vec::new()
    };
    let ver_ok = ver.passes(RATIO_TOL);

    if let Some(path) = cert_out {
        let text = report::to_string_precise(&cert).map_err(Failure::Lib)?;
        fs::write(path, text).map_err(|source| Failure::Io { path: path.to_path_buf(), source })?;
    }

    doc.push(&CertificateRecord { record: "certificate", certificate: cert })?;
    doc.push(&VerificationRecord {
        record: "verification",
        max_ratio: ver.max_ratio,
        worst_m: ver.worst.0,
        worst_n: ver.worst.1,
        horizon: ver.horizon,
        passes: ver_ok,
    })?;
    for rung in &chain {
        doc.push(&StepChainOut {
            record: "step-chain",
            k: rung.k,
            max_ratio: rung.max_ratio,
            worst_m: rung.worst.0,
            worst_n: rung.worst.1,
        })?;
    }
    let checks = 1 + chain.len();
    let failed = usize::from(!ver_ok) + chain.iter().filter(|r| r.max_ratio > 1.0 + RATIO_TOL).count();
    let exit = if failed == 0 { EXIT_PASS } else { EXIT_FAIL };
    doc.push(&SummaryRecord {
        record: "summary",
        pass: checks - failed,
        fail: failed,
        info: 0,
        inconclusive: 0,
        exit,
    })?;

    emit(cfg, &doc)?;
    Ok(exit)
}

/// Solve the generator equation `G u = -v` for an input window and report
/// the reconstruction residual.
fn cmd_solve(cfg: &Resolved, input: &Path, solution_out: Option<&Path>) -> Result<u8, Failure> {
    let text = fs::read_to_string(input)
        .map_err(|source| Failure::Io { path: input.to_path_buf(), source })?;
    let file: WindowFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Config(format!("window file {}: {e}", input.display())))?;
    let v = file.into_window()?;

    let horizon = v.horizon();
    let cache = build_cache(cfg, horizon)?;
    let u = solve_generator(&cache, &v)?;

    // residual of the defining identity: G u + v should vanish slot by slot
    let gu = apply_generator(&cache, &u)?;
    let mut residual = 0.0f64;
    for k in 0..=horizon {
        let mut slot = gu.slot(k).to_owned();
        slot += &v.slot(k);
        residual = residual.max(vec_norm(cfg.vector_norm, slot.view()));
    }

    let out_file = WindowFile::from_window(&u);
    if let Some(path) = solution_out {
        let text = report::to_string_precise(&out_file).map_err(Failure::Lib)?;
        fs::write(path, text).map_err(|source| Failure::Io { path: path.to_path_buf(), source })?;
    }

    let mut doc = Doc::new(cfg.format);
    doc.push(&RunRecord::new(
        "solve",
        Some(cfg.require_family()?.clone()),
        Some(horizon),
        cfg.vector_norm,
        cfg.probes,
        cfg.seed,
    ))?;
    doc.push(&SolutionRecord {
        record: "solution",
        dimension: u.dim(),
        horizon,
        residual,
    })?;
    doc.push(&WindowRecord {
        record: "window",
        dimension: out_file.dimension,
        values: out_file.values,
    })?;

    emit(cfg, &doc)?;
    Ok(EXIT_PASS)
}

/// Run a named worked-example verification suite end to end.
fn cmd_example(
    cfg: &Resolved,
    name: &str,
    alpha: Option<f64>,
    beta: Option<f64>,
    n_max: Option<usize>,
) -> Result<u8, Failure> {
    use evostab::dynamics::FamilyFile;

    let (family, horizon, result): (FamilyFile, Option<usize>, Result<Vec<CheckRecord>, Error>) =
        match name {
            "ex1" => (
                FamilyFile::Example1 { dimension: 1 },
                Some(cfg.horizon()),
                run_example1_suite::<f64>(cfg.horizon()),
            ),
            "ex2" => {
                let a = alpha.unwrap_or(-0.5);
                let b = beta.unwrap_or(-0.2);
                let nm = n_max.unwrap_or(40);
                (
                    FamilyFile::Example2 { dimension: 1 },
                    cfg.horizon,
                    run_example2_suite::<f64>(a, b, nm, cfg.horizon),
                )
            }
            other => return Err(Failure::Config(format!("unknown example `{other}`"))),
        };

    let mut doc = Doc::new(cfg.format);
    doc.push(&RunRecord::new(
        "example",
        Some(family),
        horizon,
        cfg.vector_norm,
        cfg.probes,
        cfg.seed,
    ))?;

    let recs = match result {
        Ok(recs) => recs,
        Err(Error::HorizonTooSmall(msg)) => {
            let full = Error::HorizonTooSmall(msg).to_string();
            doc.push(&ErrorRecord { record: "error", exit: EXIT_INCONCLUSIVE, message: full })?;
            emit(cfg, &doc)?;
            return Ok(EXIT_INCONCLUSIVE);
        }
        Err(e) => return Err(e.into()),
    };

    let mut tally = [0usize; 4];
    for rec in &recs {
        let idx = match rec.status {
            CheckStatus::Pass => 0,
            CheckStatus::Fail => 1,
            CheckStatus::Info => 2,
            CheckStatus::Inconclusive => 3,
        };
        tally[idx] += 1;
        doc.push(&CheckOut {
            record: "check",
            name: rec.name.clone(),
            status: rec.status,
            detail: rec.detail.clone(),
        })?;
    }
    let exit = if tally[1] > 0 {
        EXIT_FAIL
    } else if tally[3] > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    };
    doc.push(&SummaryRecord {
        record: "summary",
        pass: tally[0],
        fail: tally[1],
        info: tally[2],
        inconclusive: tally[3],
        exit,
    })?;

    emit(cfg, &doc)?;
    Ok(exit)
}

/// Re-check a previously issued certificate file against a fresh cache.
fn cmd_verify(cfg: &Resolved, cert_path: &Path) -> Result<u8, Failure> {
    let text = fs::read_to_string(cert_path)
        .map_err(|source| Failure::Io { path: cert_path.to_path_buf(), source })?;
    let cert: StabilityCertificate = serde_json::from_str(&text)
        .map_err(|e| Failure::Config(format!("certificate file {}: {e}", cert_path.display())))?;

    let cache = EvolutionCache::build(
        cert.family.clone().into_family::<f64>()?,
        cert.horizon,
        cert.vector_norm,
    )?;
    let ver = verify_certificate(&cert, &cache)?;
    let ctx = AlphaContext::new(&cache, cert.alpha, None)?;
    // the step chain is a nonnegative-exponent construction; below zero the
    // certificate is audited by the verification record alone
    let chain = if cert.alpha >= 0.0 {
        verify_step_chain(&ctx, cert.inverse_norm, cfg.k_max)?
    } else {
        Vec::new()
    };
    let ver_ok = ver.passes(RATIO_TOL);
    let chain_failed = chain.iter().filter(|r| r.max_ratio > 1.0 + RATIO_TOL).count();

    let mut doc = Doc::new(cfg.format);
    doc.push(&RunRecord::new(
        "verify",
        Some(cert.family.clone()),
        Some(cert.horizon),
        cert.vector_norm,
        cfg.probes,
        cfg.seed,
    ))?;
    doc.push(&VerificationRecord {
        record: "verification",
        max_ratio: ver.max_ratio,
        worst_m: ver.worst.0,
        worst_n: ver.worst.1,
        horizon: ver.horizon,
        passes: ver_ok,
    })?;
    for rung in &chain {
        doc.push(&StepChainOut {
            record: "step-chain",
            k: rung.k,
            max_ratio: rung.max_ratio,
            worst_m: rung.worst.0,
            worst_n: rung.worst.1,
        })?;
    }
    doc.push(&CertificateRecord { record: "certificate", certificate: cert })?;

    let checks = 1 + chain.len();
    let failed = usize::from(!ver_ok) + chain_failed;
    let exit = if failed == 0 { EXIT_PASS } else { EXIT_FAIL };
    doc.push(&SummaryRecord {
        record: "summary",
        pass: checks - failed,
        fail: failed,
        info: 0,
        inconclusive: 0,
        exit,
    })?;

    emit(cfg, &doc)?;
    Ok(exit)
}
