//! The four subcommands: forward modeling, synthetic data generation,
//! section inversion, and depth-of-investigation tables.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use emi_core::doi::{doi_depth, DoiDepth};
use emi_core::forward::{apparent_conductivity, forward_response};
use emi_core::inversion::{
    default_starts, invert_sounding, stack_mode, DataMode, InversionConfig, InversionResult,
    InvError, ParamRule, RegKind,
};
use emi_core::model::{DeviceConfig, LayeredEarthModel, Orientation};
use emi_core::synthdata::{
    add_noise, discretize_profile, make_pseudo2d_section, profile_gaussian, profile_step,
    standard_grid,
};

use crate::files::{
    self, fmt_f, mode_name, ModelFile, ResultFile, ResultRecord, Survey,
};
use crate::{CliError, InvertOpts};

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Parse(format!("{}: {e}", dir.display())))
}

// ---------------------------------------------------------------------------
// emi forward

pub fn cmd_forward(config: &Path, out_dir: &Path) -> Result<(), CliError> {
    let model = files::read_model(config)?;
    ensure_dir(out_dir)?;
    let layout = model.device.layout();

    let mut records = Vec::with_capacity(model.records.len());
    let mut ppt = String::from("pos,orientation,height,rho,freq,inphase_ppt,quadrature_ppt\n");
    let mut sig_a = String::from("pos,orientation,height,rho,freq,sigma_a\n");
    for (pos, sigma) in &model.records {
        let earth = LayeredEarthModel::new(model.depths.clone(), sigma.clone())
            .map_err(|e| CliError::Parse(format!("column {pos}: {e}")))?;
        let data = forward_response(&earth, &model.device)
            .map_err(|e| CliError::Numeric(format!("column {pos}: {e}")))?;
        for (v, &(orient, h, rho, f)) in data.iter().zip(&layout) {
            let _ = writeln!(
                ppt,
                "{pos},{orient},{},{},{},{},{}",
                fmt_f(h),
                fmt_f(rho),
                fmt_f(f),
                fmt_f(1e3 * v.re),
                fmt_f(1e3 * v.im)
            );
            let _ = writeln!(
                sig_a,
                "{pos},{orient},{},{},{},{}",
                fmt_f(h),
                fmt_f(rho),
                fmt_f(f),
                fmt_f(apparent_conductivity(*v, rho, f))
            );
        }
        records.push((pos.clone(), data));
    }

    let survey = Survey { device: model.device, records };
    files::write_survey(&out_dir.join("readings.txt"), &survey)?;
    write_text(&out_dir.join("ppt.csv"), &ppt)?;
    write_text(&out_dir.join("sigma_a.csv"), &sig_a)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// emi synth

pub fn cmd_synth(
    experiment: &str,
    delta: f64,
    seed: u64,
    out_dir: &Path,
) -> Result<(), CliError> {
    let n = 60;
    let depth = 3.5;
    let (device, columns): (DeviceConfig, Vec<(String, LayeredEarthModel)>) = match experiment {
        "gaussian" => {
            let device = DeviceConfig::cmd_explorer(
                vec![0.9, 1.8],
                vec![Orientation::Vertical, Orientation::Horizontal],
            )
            .map_err(|e| CliError::Parse(e.to_string()))?;
            let truth = discretize_profile(profile_gaussian, n, depth)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            (device, vec![("0".to_string(), truth)])
        }
        "step" => {
            // the step experiment uses the vertical orientation only
            let device = DeviceConfig::cmd_explorer(vec![0.9, 1.8], vec![Orientation::Vertical])
                .map_err(|e| CliError::Parse(e.to_string()))?;
            let truth = discretize_profile(profile_step, n, depth)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            (device, vec![("0".to_string(), truth)])
        }
        "pseudo2d" => {
            let device = DeviceConfig::cmd_explorer(
                vec![0.9, 1.8],
                vec![Orientation::Vertical, Orientation::Horizontal],
            )
            .map_err(|e| CliError::Parse(e.to_string()))?;
            let cols = make_pseudo2d_section(50, n, depth)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            let tagged = cols
                .into_iter()
                .enumerate()
                .map(|(c, m)| (format!("{c}"), m))
                .collect();
            (device, tagged)
        }
        other => {
            return Err(CliError::Parse(format!(
                "unknown experiment {other:?} (expected gaussian, step, or pseudo2d)"
            )))
        }
    };

    ensure_dir(out_dir)?;
    let mut records = Vec::with_capacity(columns.len());
    for (i, (pos, truth)) in columns.iter().enumerate() {
        let clean = forward_response(truth, &device)
            .map_err(|e| CliError::Numeric(format!("column {pos}: {e}")))?;
        records.push((pos.clone(), add_noise(&clean, delta, seed + i as u64)));
    }
    let depths = columns[0].1.depths().to_vec();
    let truth_records = columns
        .iter()
        .map(|(pos, m)| (pos.clone(), m.sigma().to_vec()))
        .collect();
    files::write_survey(
        &out_dir.join("survey.txt"),
        &Survey { device: device.clone(), records },
    )?;
    files::write_model(
        &out_dir.join("truth.txt"),
        &ModelFile { device, depths, records: truth_records },
    )?;
    Ok(())
}

// ---------------------------------------------------------------------------
// emi invert

fn parse_reg(opts: &InvertOpts) -> Result<RegKind, CliError> {
    Ok(match opts.reg.as_str() {
        "i" => RegKind::Identity,
        "d1" => RegKind::D1,
        "d2" => RegKind::D2,
        "mgs" => RegKind::Mgs { tau: opts.tau },
        other => return Err(CliError::Parse(format!("unknown stabilizer {other:?}"))),
    })
}

fn parse_rule(opts: &InvertOpts) -> Result<ParamRule, CliError> {
    Ok(match opts.param.as_str() {
        "disc" => ParamRule::Discrepancy {
            delta: opts.delta,
            // safety whisker: the realized noise fluctuates around
            // sqrt(2) * delta * ||b||, so aiming exactly there is
            // unreachable for about half of the realizations
            varsigma: 1.3 * core::f64::consts::SQRT_2,
        },
        "lcurve" => ParamRule::LCurve,
        "fixed" => ParamRule::Fixed(opts.ell.ok_or_else(|| {
            CliError::Parse("--param fixed requires --ell".to_string())
        })?),
        other => return Err(CliError::Parse(format!("unknown parameter rule {other:?}"))),
    })
}

pub fn parse_mode_flag(mode: &str) -> Result<DataMode, CliError> {
    Ok(match mode {
        "complex" => DataMode::Complex,
        "quadrature" => DataMode::QuadratureOnly,
        other => return Err(CliError::Parse(format!("unknown mode {other:?}"))),
    })
}

fn config_hash(survey_text: &[u8], canonical_opts: &str) -> String {
    let mut h = Sha256::new();
    h.update(survey_text);
    h.update(canonical_opts.as_bytes());
    let digest = h.finalize();
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Interface-sharpness metric of a recovered section: mean over columns of
/// the largest single-layer conductivity jump.
fn sharpness(records: &[ResultRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    let per_col = records.iter().map(|r| {
        r.sigma
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0f64, f64::max)
    });
    per_col.sum::<f64>() / records.len() as f64
}

pub fn cmd_invert(opts: &InvertOpts) -> Result<(), CliError> {
    let survey = files::read_survey(&opts.config)?;
    let reg = parse_reg(opts)?;
    let rule = parse_rule(opts)?;
    let mode = parse_mode_flag(&opts.mode)?;
    let cfg = InversionConfig {
        reg,
        rule,
        mode,
        // one focusing refinement pass once the misfit target is reached
        focus_iters: if matches!(reg, RegKind::Mgs { .. }) { 1 } else { 0 },
        ..Default::default()
    };
    let grid = standard_grid(opts.layers, opts.depth)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let starts = default_starts(&grid, opts.starts.max(1));

    let outcomes: Vec<Result<InversionResult, InvError>> = survey
        .records
        .par_iter()
        .map(|(_, data)| invert_sounding(data, &survey.device, &starts, &cfg))
        .collect();

    // numerical failures abort before any file is written
    for ((pos, _), outcome) in survey.records.iter().zip(&outcomes) {
        if let Err(e) = outcome {
            return Err(CliError::Numeric(format!("column {pos}: {e}")));
        }
    }
    let results: Vec<&InversionResult> =
        outcomes.iter().map(|r| r.as_ref().unwrap()).collect();

    ensure_dir(&opts.out_dir)?;
    let survey_bytes = std::fs::read(&opts.config)
        .map_err(|e| CliError::Parse(format!("{}: {e}", opts.config.display())))?;
    let canonical = format!(
        "reg={} tau={} param={} ell={:?} delta={} seed={} mode={} starts={} eta={} layers={} depth={}",
        opts.reg, fmt_f(opts.tau), opts.param, opts.ell, fmt_f(opts.delta), opts.seed,
        opts.mode, opts.starts, fmt_f(opts.eta), opts.layers, fmt_f(opts.depth)
    );
    let active_rows = match mode {
        DataMode::Complex => 2 * survey.device.reading_count(),
        DataMode::QuadratureOnly => survey.device.reading_count(),
    };
    let meta = vec![
        ("version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("created".to_string(), chrono::Utc::now().to_rfc3339()),
        ("config".to_string(), config_hash(&survey_bytes, &canonical)),
        ("options".to_string(), canonical.clone()),
        ("seed".to_string(), opts.seed.to_string()),
        ("rows".to_string(), active_rows.to_string()),
    ];

    let mut records = Vec::with_capacity(results.len());
    for ((pos, _), res) in survey.records.iter().zip(&results) {
        let doi = doi_depth(&res.model, &survey.device, mode, opts.eta)
            .map_err(|e| CliError::Numeric(format!("column {pos}: {e}")))?;
        records.push(ResultRecord {
            pos: pos.clone(),
            converged: res.stop.converged(),
            stop: res.stop,
            iters: res.iterations.len(),
            misfit: res.residual_norm,
            doi,
            sigma: res.model.sigma().to_vec(),
        });
    }

    let result_file = ResultFile {
        device: survey.device.clone(),
        mode,
        eta: opts.eta,
        depths: grid.depths().to_vec(),
        records,
        meta,
    };
    files::write_result(&opts.out_dir.join("result.txt"), &result_file)?;

    // long-form section CSV: one row per (column, layer)
    let mut sigma_csv = String::from("pos,depth,sigma\n");
    for r in &result_file.records {
        for (k, &s) in r.sigma.iter().enumerate() {
            let _ = writeln!(
                sigma_csv,
                "{},{},{}",
                r.pos,
                fmt_f(grid.midpoint(k)),
                fmt_f(s)
            );
        }
    }
    write_text(&opts.out_dir.join("sigma.csv"), &sigma_csv)?;

    let mut doi_csv = String::from("pos,doi\n");
    for r in &result_file.records {
        let doi = match r.doi {
            DoiDepth::Depth(d) => fmt_f(d),
            DoiDepth::BeyondModel => "beyond".to_string(),
        };
        let _ = writeln!(doi_csv, "{},{doi}", r.pos);
    }
    write_text(&opts.out_dir.join("doi.csv"), &doi_csv)?;

    let mut resid_csv = String::from("pos,iter,misfit,ell\n");
    for ((pos, _), res) in survey.records.iter().zip(&results) {
        for it in &res.iterations {
            let _ = writeln!(
                resid_csv,
                "{pos},{},{},{}",
                it.iter,
                fmt_f(it.residual_norm),
                it.ell
            );
        }
    }
    write_text(&opts.out_dir.join("residuals.csv"), &resid_csv)?;

    let mut summary = String::new();
    let nconv = result_file.records.iter().filter(|r| r.converged).count();
    let _ = writeln!(
        summary,
        "columns {} converged {} mode {} rows {}",
        result_file.records.len(),
        nconv,
        mode_name(mode),
        active_rows
    );
    for ((pos, data), r) in survey.records.iter().zip(&result_file.records) {
        let bn = stack_mode(data, mode).norm();
        let rel = if bn > 0.0 { r.misfit / bn } else { f64::NAN };
        let _ = writeln!(
            summary,
            "column {pos}: misfit {} rel {} iters {} stop {:?}",
            fmt_f(r.misfit),
            fmt_f(rel),
            r.iters,
            r.stop
        );
    }
    let _ = writeln!(
        summary,
        "interface sharpness (mean max |dsigma|) {}",
        fmt_f(sharpness(&result_file.records))
    );
    write_text(&opts.out_dir.join("summary.txt"), &summary)?;

    let failed: Vec<&ResultRecord> = result_file
        .records
        .iter()
        .filter(|r| !r.converged)
        .collect();
    if !failed.is_empty() {
        let mut report = String::new();
        for r in &failed {
            let _ = writeln!(
                report,
                "column {}: did not converge ({:?} after {} iterations, misfit {})",
                r.pos,
                r.stop,
                r.iters,
                fmt_f(r.misfit)
            );
        }
        return Err(CliError::Convergence(report));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// emi doi

pub fn cmd_doi(config: &Path, eta: f64, out_dir: &Path) -> Result<(), CliError> {
    // accepts a result file or a model file; both carry device + profiles
    let first = std::fs::read_to_string(config)
        .map_err(|e| CliError::Parse(format!("{}: {e}", config.display())))?
        .lines()
        .next()
        .unwrap_or("")
        .trim()
        .to_string();
    let (device, mode, depths, profiles): (
        DeviceConfig,
        DataMode,
        Vec<f64>,
        Vec<(String, Vec<f64>)>,
    ) = if first == files::RESULT_MAGIC {
        let rf = files::read_result(config)?;
        let profiles = rf
            .records
            .into_iter()
            .map(|r| (r.pos, r.sigma))
            .collect();
        (rf.device, rf.mode, rf.depths, profiles)
    } else {
        let mf = files::read_model(config)?;
        (mf.device, DataMode::Complex, mf.depths, mf.records)
    };

    ensure_dir(out_dir)?;
    let mut doi_csv = String::from("pos,doi\n");
    for (pos, sigma) in &profiles {
        let model = LayeredEarthModel::new(depths.clone(), sigma.clone())
            .map_err(|e| CliError::Parse(format!("column {pos}: {e}")))?;
        let doi = doi_depth(&model, &device, mode, eta)
            .map_err(|e| CliError::Numeric(format!("column {pos}: {e}")))?;
        let doi = match doi {
            DoiDepth::Depth(d) => fmt_f(d),
            DoiDepth::BeyondModel => "beyond".to_string(),
        };
        let _ = writeln!(doi_csv, "{pos},{doi}");
    }
    write_text(&out_dir.join("doi.csv"), &doi_csv)?;
    Ok(())
}
