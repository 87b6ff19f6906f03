//! Line-oriented text formats with versioned headers. All floating-point
//! values are written with 17 significant digits so that write -> read is
//! the identity to within 1e-15.

use std::fmt::Write as _;
use std::path::Path;

use emi_core::doi::DoiDepth;
use emi_core::inversion::{DataMode, StopReason};
use emi_core::model::{DataVector, DeviceConfig, Orientation};
use num_complex::Complex64;

use crate::CliError;

/// Formats a float with 17 significant digits.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_f(tok: &str, line: usize) -> Result<f64, CliError> {
    tok.parse::<f64>()
        .map_err(|_| CliError::Parse(format!("line {line}: bad number {tok:?}")))
}

fn parse_f_list(toks: &[&str], line: usize) -> Result<Vec<f64>, CliError> {
    toks.iter().map(|t| parse_f(t, line)).collect()
}

fn parse_orientations(toks: &[&str], line: usize) -> Result<Vec<Orientation>, CliError> {
    toks.iter()
        .map(|t| match *t {
            "vertical" | "v" => Ok(Orientation::Vertical),
            "horizontal" | "h" => Ok(Orientation::Horizontal),
            other => Err(CliError::Parse(format!(
                "line {line}: unknown orientation {other:?}"
            ))),
        })
        .collect()
}

fn write_device(out: &mut String, device: &DeviceConfig) {
    let join = |v: &[f64]| v.iter().map(|&x| fmt_f(x)).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "# rho {}", join(device.rho()));
    let _ = writeln!(out, "# heights {}", join(device.heights()));
    let _ = writeln!(out, "# freqs {}", join(device.freqs()));
    let _ = writeln!(
        out,
        "# orientations {}",
        device
            .orientations()
            .iter()
            .map(|o| o.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
}

/// Header fields accumulated while scanning `# key value...` lines.
#[derive(Default)]
struct Header {
    rho: Option<Vec<f64>>,
    heights: Option<Vec<f64>>,
    freqs: Option<Vec<f64>>,
    orientations: Option<Vec<Orientation>>,
    depths: Option<Vec<f64>>,
    mode: Option<DataMode>,
    eta: Option<f64>,
}

impl Header {
    fn take(&mut self, key: &str, toks: &[&str], line: usize) -> Result<(), CliError> {
        match key {
            "rho" => self.rho = Some(parse_f_list(toks, line)?),
            "heights" => self.heights = Some(parse_f_list(toks, line)?),
            "freqs" => self.freqs = Some(parse_f_list(toks, line)?),
            "orientations" => self.orientations = Some(parse_orientations(toks, line)?),
            "depths" => self.depths = Some(parse_f_list(toks, line)?),
            "mode" => {
                self.mode = Some(parse_mode(toks.first().copied().unwrap_or(""), line)?);
            }
            "eta" => self.eta = Some(parse_f(toks.first().copied().unwrap_or(""), line)?),
            _ => {} // unknown metadata is carried, not rejected
        }
        Ok(())
    }

    fn device(&self, path: &Path) -> Result<DeviceConfig, CliError> {
        let missing = |what: &str| {
            CliError::Parse(format!("{}: header is missing '# {what}'", path.display()))
        };
        DeviceConfig::new(
            self.rho.clone().ok_or_else(|| missing("rho"))?,
            self.heights.clone().ok_or_else(|| missing("heights"))?,
            self.freqs.clone().ok_or_else(|| missing("freqs"))?,
            self.orientations
                .clone()
                .ok_or_else(|| missing("orientations"))?,
        )
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

fn parse_mode(tok: &str, line: usize) -> Result<DataMode, CliError> {
    match tok {
        "complex" => Ok(DataMode::Complex),
        "quadrature" => Ok(DataMode::QuadratureOnly),
        other => Err(CliError::Parse(format!("line {line}: unknown mode {other:?}"))),
    }
}

pub fn mode_name(mode: DataMode) -> &'static str {
    match mode {
        DataMode::Complex => "complex",
        DataMode::QuadratureOnly => "quadrature",
    }
}

fn stop_name(stop: StopReason) -> &'static str {
    match stop {
        StopReason::SmallStep => "small_step",
        StopReason::ResidualStagnation => "stagnation",
        StopReason::DiscrepancyReached => "discrepancy",
        StopReason::MaxIterations => "max_iters",
        StopReason::LineSearchStalled => "line_search",
    }
}

fn parse_stop(tok: &str, line: usize) -> Result<StopReason, CliError> {
    Ok(match tok {
        "small_step" => StopReason::SmallStep,
        "stagnation" => StopReason::ResidualStagnation,
        "discrepancy" => StopReason::DiscrepancyReached,
        "max_iters" => StopReason::MaxIterations,
        "line_search" => StopReason::LineSearchStalled,
        other => {
            return Err(CliError::Parse(format!(
                "line {line}: unknown stop reason {other:?}"
            )))
        }
    })
}

fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(text.lines().map(|l| l.to_string()).collect())
}

/// Splits a file into (header, data rows with line numbers) and checks the
/// magic first line.
fn scan(
    path: &Path,
    magic: &str,
) -> Result<(Header, Vec<(usize, Vec<String>)>), CliError> {
    let lines = read_lines(path)?;
    let first = lines.first().map(|l| l.trim()).unwrap_or("");
    if first != magic {
        return Err(CliError::Parse(format!(
            "{}: expected header {magic:?}, found {first:?}",
            path.display()
        )));
    }
    let mut header = Header::default();
    let mut rows = Vec::new();
    for (i, line) in lines.iter().enumerate().skip(1) {
        let lno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if let Some((key, vals)) = toks.split_first() {
                header.take(key, vals, lno)?;
            }
            continue;
        }
        rows.push((lno, line.split_whitespace().map(|t| t.to_string()).collect()));
    }
    Ok((header, rows))
}

// ---------------------------------------------------------------------------
// survey files: complex readings per sounding

#[derive(Debug)]
pub struct Survey {
    pub device: DeviceConfig,
    /// (position tag, readings in layout order)
    pub records: Vec<(String, DataVector)>,
}

pub const SURVEY_MAGIC: &str = "# emi survey v1";

pub fn write_survey(path: &Path, survey: &Survey) -> Result<(), CliError> {
    let m = survey.device.reading_count();
    let mut out = String::new();
    let _ = writeln!(out, "{SURVEY_MAGIC}");
    write_device(&mut out, &survey.device);
    let _ = writeln!(
        out,
        "# layout orientation-major, then height, then rho, then freq; complex readings as re im pairs"
    );
    let _ = writeln!(out, "# columns: pos re_1 im_1 ... re_{m} im_{m}");
    for (pos, data) in &survey.records {
        let _ = write!(out, "{pos}");
        for v in data {
            let _ = write!(out, " {} {}", fmt_f(v.re), fmt_f(v.im));
        }
        let _ = writeln!(out);
    }
    std::fs::write(path, out).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_survey(path: &Path) -> Result<Survey, CliError> {
    let (header, rows) = scan(path, SURVEY_MAGIC)?;
    let device = header.device(path)?;
    let m = device.reading_count();
    let mut records = Vec::with_capacity(rows.len());
    for (lno, toks) in rows {
        if toks.len() != 1 + 2 * m {
            return Err(CliError::Parse(format!(
                "line {lno}: expected position + {} values, found {}",
                2 * m,
                toks.len() - 1
            )));
        }
        let vals: Vec<&str> = toks[1..].iter().map(|s| s.as_str()).collect();
        let flat = parse_f_list(&vals, lno)?;
        let data = flat
            .chunks_exact(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        records.push((toks[0].clone(), data));
    }
    Ok(Survey { device, records })
}

// ---------------------------------------------------------------------------
// model files: per-sounding conductivity profiles on a shared grid

#[derive(Debug)]
pub struct ModelFile {
    pub device: DeviceConfig,
    /// Interface depths (layer tops), first entry 0.
    pub depths: Vec<f64>,
    /// (position tag, per-layer conductivity)
    pub records: Vec<(String, Vec<f64>)>,
}

pub const MODEL_MAGIC: &str = "# emi model v1";

pub fn write_model(path: &Path, model: &ModelFile) -> Result<(), CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_MAGIC}");
    write_device(&mut out, &model.device);
    let _ = writeln!(
        out,
        "# depths {}",
        model.depths.iter().map(|&d| fmt_f(d)).collect::<Vec<_>>().join(" ")
    );
    let _ = writeln!(out, "# columns: pos sigma_1 ... sigma_{}", model.depths.len());
    for (pos, sigma) in &model.records {
        let _ = write!(out, "{pos}");
        for &s in sigma {
            let _ = write!(out, " {}", fmt_f(s));
        }
        let _ = writeln!(out);
    }
    std::fs::write(path, out).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_model(path: &Path) -> Result<ModelFile, CliError> {
    let (header, rows) = scan(path, MODEL_MAGIC)?;
    let device = header.device(path)?;
    let depths = header.depths.ok_or_else(|| {
        CliError::Parse(format!("{}: header is missing '# depths'", path.display()))
    })?;
    let n = depths.len();
    let mut records = Vec::with_capacity(rows.len());
    for (lno, toks) in rows {
        if toks.len() != 1 + n {
            return Err(CliError::Parse(format!(
                "line {lno}: expected position + {n} conductivities, found {}",
                toks.len() - 1
            )));
        }
        let vals: Vec<&str> = toks[1..].iter().map(|s| s.as_str()).collect();
        records.push((toks[0].clone(), parse_f_list(&vals, lno)?));
    }
    Ok(ModelFile { device, depths, records })
}

// ---------------------------------------------------------------------------
// result files: recovered profiles plus per-column diagnostics

#[derive(Debug)]
pub struct ResultRecord {
    pub pos: String,
    pub converged: bool,
    pub stop: StopReason,
    pub iters: usize,
    /// Final stacked misfit norm.
    pub misfit: f64,
    pub doi: DoiDepth,
    pub sigma: Vec<f64>,
}

#[derive(Debug)]
pub struct ResultFile {
    pub device: DeviceConfig,
    pub mode: DataMode,
    pub eta: f64,
    pub depths: Vec<f64>,
    pub records: Vec<ResultRecord>,
    /// Free-form metadata lines echoed under the header (config hash, seed,
    /// options, timestamp).
    pub meta: Vec<(String, String)>,
}

pub const RESULT_MAGIC: &str = "# emi result v1";

pub fn write_result(path: &Path, res: &ResultFile) -> Result<(), CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "{RESULT_MAGIC}");
    for (k, v) in &res.meta {
        let _ = writeln!(out, "# {k} {v}");
    }
    write_device(&mut out, &res.device);
    let _ = writeln!(out, "# mode {}", mode_name(res.mode));
    let _ = writeln!(out, "# eta {}", fmt_f(res.eta));
    let _ = writeln!(
        out,
        "# depths {}",
        res.depths.iter().map(|&d| fmt_f(d)).collect::<Vec<_>>().join(" ")
    );
    let _ = writeln!(
        out,
        "# columns: pos converged stop iters misfit doi sigma_1 ... sigma_{}",
        res.depths.len()
    );
    for r in &res.records {
        let doi = match r.doi {
            DoiDepth::Depth(d) => fmt_f(d),
            DoiDepth::BeyondModel => "beyond".to_string(),
        };
        let _ = write!(
            out,
            "{} {} {} {} {} {}",
            r.pos,
            r.converged,
            stop_name(r.stop),
            r.iters,
            fmt_f(r.misfit),
            doi
        );
        for &s in &r.sigma {
            let _ = write!(out, " {}", fmt_f(s));
        }
        let _ = writeln!(out);
    }
    std::fs::write(path, out).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn read_result(path: &Path) -> Result<ResultFile, CliError> {
    let (header, rows) = scan(path, RESULT_MAGIC)?;
    let device = header.device(path)?;
    let depths = header.depths.ok_or_else(|| {
        CliError::Parse(format!("{}: header is missing '# depths'", path.display()))
    })?;
    let mode = header.mode.unwrap_or(DataMode::Complex);
    let eta = header.eta.unwrap_or(emi_core::doi::DEFAULT_ETA);
    let n = depths.len();
    let mut records = Vec::with_capacity(rows.len());
    for (lno, toks) in rows {
        if toks.len() != 6 + n {
            return Err(CliError::Parse(format!(
                "line {lno}: expected 6 fields + {n} conductivities, found {}",
                toks.len()
            )));
        }
        let converged = match toks[1].as_str() {
            "true" => true,
            "false" => false,
            other => {
                return Err(CliError::Parse(format!(
                    "line {lno}: bad convergence flag {other:?}"
                )))
            }
        };
        let doi = match toks[5].as_str() {
            "beyond" => DoiDepth::BeyondModel,
            t => DoiDepth::Depth(parse_f(t, lno)?),
        };
        let vals: Vec<&str> = toks[6..].iter().map(|s| s.as_str()).collect();
        records.push(ResultRecord {
            pos: toks[0].clone(),
            converged,
            stop: parse_stop(&toks[2], lno)?,
            iters: toks[3]
                .parse()
                .map_err(|_| CliError::Parse(format!("line {lno}: bad iteration count")))?,
            misfit: parse_f(&toks[4], lno)?,
            doi,
            sigma: parse_f_list(&vals, lno)?,
        });
    }
    Ok(ResultFile {
        device,
        mode,
        eta,
        depths,
        records,
        meta: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use emi_core::model::Orientation;

    fn device() -> DeviceConfig {
        DeviceConfig::cmd_explorer(
            vec![0.9, 1.8],
            vec![Orientation::Vertical, Orientation::Horizontal],
        )
        .unwrap()
    }

    #[test]
    fn survey_round_trip_is_identity() {
        let m = device().reading_count();
        let records: Vec<(String, DataVector)> = (0..3)
            .map(|c| {
                let data = (0..m)
                    .map(|k| Complex64::new(0.01 * (k + c) as f64 + 1e-17, -0.5 / (k + 1) as f64))
                    .collect();
                (format!("{c}"), data)
            })
            .collect();
        let survey = Survey { device: device(), records };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.txt");
        write_survey(&path, &survey).unwrap();
        let back = read_survey(&path).unwrap();
        assert_eq!(back.device, survey.device);
        assert_eq!(back.records.len(), 3);
        for ((pa, da), (pb, db)) in survey.records.iter().zip(&back.records) {
            assert_eq!(pa, pb);
            for (a, b) in da.iter().zip(db) {
                assert!((a - b).norm() <= 1e-15 * a.norm().max(1.0));
            }
        }
    }

    #[test]
    fn model_round_trip_is_identity() {
        let depths: Vec<f64> = (0..10).map(|k| k as f64 * 0.35).collect();
        let records = vec![
            ("a".to_string(), (0..10).map(|k| 0.1 + 0.07 * k as f64).collect()),
            ("b".to_string(), vec![0.5; 10]),
        ];
        let mf = ModelFile { device: device(), depths: depths.clone(), records };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        write_model(&path, &mf).unwrap();
        let back = read_model(&path).unwrap();
        assert_eq!(back.depths, depths);
        assert_eq!(back.records, mf.records);
    }

    #[test]
    fn result_round_trip_preserves_records() {
        let rf = ResultFile {
            device: device(),
            mode: DataMode::QuadratureOnly,
            eta: 1e-2,
            depths: vec![0.0, 1.0, 2.0],
            records: vec![ResultRecord {
                pos: "12.5".to_string(),
                converged: true,
                stop: StopReason::DiscrepancyReached,
                iters: 9,
                misfit: 1.234e-5,
                doi: DoiDepth::Depth(2.0),
                sigma: vec![0.3, 0.4, 0.5],
            }],
            meta: vec![("seed".to_string(), "7".to_string())],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.txt");
        write_result(&path, &rf).unwrap();
        let back = read_result(&path).unwrap();
        assert_eq!(back.mode, DataMode::QuadratureOnly);
        let r = &back.records[0];
        assert_eq!(r.pos, "12.5");
        assert!(r.converged);
        assert_eq!(r.stop, StopReason::DiscrepancyReached);
        assert_eq!(r.iters, 9);
        assert_eq!(r.misfit, 1.234e-5);
        assert_eq!(r.doi, DoiDepth::Depth(2.0));
        assert_eq!(r.sigma, vec![0.3, 0.4, 0.5]);
    }

    #[test]
    fn bad_magic_and_short_rows_are_parse_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.txt");
        std::fs::write(&path, "# not a survey\n").unwrap();
        assert!(matches!(read_survey(&path), Err(CliError::Parse(_))));
        let mut text = String::new();
        text.push_str(SURVEY_MAGIC);
        text.push('\n');
        text.push_str("# rho 1.48\n# heights 0.9\n# freqs 10000\n# orientations vertical\n");
        text.push_str("0 1.0\n"); // needs 2 values for 1 reading
        std::fs::write(&path, text).unwrap();
        let err = read_survey(&path).unwrap_err();
        match err {
            CliError::Parse(msg) => assert!(msg.contains("line 6"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
