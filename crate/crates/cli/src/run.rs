//! The `run` pipeline: option merging, table setup, experiment dispatch,
//! CSV and manifest output.

use std::collections::BTreeMap;
use std::hash::Hasher;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use fnv::FnvHasher;
use murmur_core::experiments::{
    al_eigenspace_series, bqf_series, class_sum_series, data_fixed_root_series, data_no_root_series, lvalue_series,
    mf_delta_series, mf_no_root_series, mobius_part, mobius_slope_sweep, required_hurwitz_limit, smooth, AlMode,
    LValueMode,
};
use murmur_core::ingest::{parse_curves_str, parse_newforms_str};
use murmur_core::{Diagnostics, ExperimentConfig, Series, TraceContext, XiPolicy};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::catalog::{lookup, DataKind, Entry, Kind};
use crate::render::series_csv;
use crate::tables::{obtain_factor, obtain_hurwitz, TableSource, HURWITZ_AUTO_CAP};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiArg {
    Strict,
    Resolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlModeArg {
    Fixed,
    Both,
}

/// Options shared by the command line and the `--config` TOML file.
/// Command-line values win field by field.
#[derive(Debug, Clone, Default, PartialEq, clap::Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunOptions {
    /// Lower end X of the level range.
    #[arg(long)]
    pub x: Option<u64>,
    /// Level range is [X, beta·X]; accepts 2, 5/2 or 2.5.
    #[arg(long)]
    pub beta: Option<String>,
    /// Prime axis runs to ratio·X.
    #[arg(long)]
    pub xmax_ratio: Option<String>,
    /// Centered moving-average window in points; 0 disables.
    #[arg(long)]
    pub smooth: Option<usize>,
    /// Newform or curve table for data-driven experiments.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Directory holding sieve table caches.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Worker threads; 0 or absent uses every core.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub xi_policy: Option<XiArg>,
    #[arg(long)]
    pub weight: Option<u32>,
    /// Restrict to N coprime to p (data and form families).
    #[arg(long)]
    pub coprime: Option<bool>,
    /// Fixed small prime for al-eigenspace.
    #[arg(long)]
    pub p0: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<AlModeArg>,
    /// Last X of a mobius-slope sweep.
    #[arg(long)]
    pub x_end: Option<u64>,
    #[arg(long)]
    pub x_step: Option<u64>,
    /// TOML file with any of these options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl RunOptions {
    /// Fields of `self` where set, `base` elsewhere.
    pub fn over(self, base: RunOptions) -> RunOptions {
        RunOptions {
            x: self.x.or(base.x),
            beta: self.beta.or(base.beta),
            xmax_ratio: self.xmax_ratio.or(base.xmax_ratio),
            smooth: self.smooth.or(base.smooth),
            data: self.data.or(base.data),
            cache: self.cache.or(base.cache),
            threads: self.threads.or(base.threads),
            out: self.out.or(base.out),
            xi_policy: self.xi_policy.or(base.xi_policy),
            weight: self.weight.or(base.weight),
            coprime: self.coprime.or(base.coprime),
            p0: self.p0.or(base.p0),
            mode: self.mode.or(base.mode),
            x_end: self.x_end.or(base.x_end),
            x_step: self.x_step.or(base.x_step),
            config: self.config.or(base.config),
        }
    }
}

/// Reads `a/b`, an integer, or a finite decimal as a nonnegative rational.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>, CliError> {
    let t = s.trim();
    let bad = || CliError::Usage(format!("cannot read {s:?} as a rational number"));
    let int = |d: &str| d.trim().parse::<u64>().map_err(|_| bad());
    if let Some((a, b)) = t.split_once('/') {
        let (a, b) = (int(a)?, int(b)?);
        if b == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(a, b));
    }
    if let Some((i, f)) = t.split_once('.') {
        if f.is_empty() || f.len() > 18 || !f.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(f.len() as u32);
        let whole = if i.is_empty() { 0 } else { int(i)? };
        let num = whole.checked_mul(den).and_then(|w| w.checked_add(int(f).ok()?)).ok_or_else(bad)?;
        return Ok(Ratio::new(num, den));
    }
    Ok(Ratio::from_integer(int(t)?))
}

fn read_config(path: &Path) -> Result<(RunOptions, Vec<u8>), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Usage(format!("{}: config is not UTF-8", path.display())))?;
    let opts = toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok((opts, bytes))
}

pub fn fnv_hex(bytes: &[u8]) -> String {
    let mut h = FnvHasher::default();
    h.write(bytes);
    format!("{:016x}", h.finish())
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub bytes: u64,
    pub fnv1a: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub tables_seconds: f64,
    pub compute_seconds: f64,
    pub total_seconds: f64,
}

/// Written next to every CSV so a run can be repeated exactly.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub options: RunOptions,
    pub threads: usize,
    pub inputs: Vec<InputDigest>,
    pub tables: BTreeMap<String, TableSource>,
    pub outputs: Vec<PathBuf>,
    pub timing: Timing,
    pub diagnostics: BTreeMap<String, Diagnostics>,
    pub warnings: Vec<String>,
}

#[derive(Debug)]
pub struct RunReport {
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

/// Experiment config from merged options, with family defaults filled in.
pub fn build_config(entry: &Entry, opts: &RunOptions) -> Result<ExperimentConfig, CliError> {
    let x = opts.x.ok_or_else(|| CliError::Usage("--x is required".into()))?;
    let mut cfg = ExperimentConfig::new(entry.kind.family(), x);
    if let Some(b) = &opts.beta {
        cfg.beta = parse_ratio(b)?;
    }
    cfg.x_max_ratio = match &opts.xmax_ratio {
        Some(r) => parse_ratio(r)?,
        None => entry.kind.default_xmax_ratio(),
    };
    if let Some(w) = opts.weight {
        cfg.weight = w;
    }
    if let Some(c) = opts.coprime {
        cfg.coprime = c;
    }
    cfg.smoothing_window = opts.smooth.unwrap_or(0);
    cfg.xi_policy = match opts.xi_policy.unwrap_or(XiArg::Resolved) {
        XiArg::Strict => XiPolicy::StrictPartial,
        XiArg::Resolved => XiPolicy::Resolved,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read_input(path: &Path, inputs: &mut Vec<InputDigest>) -> Result<String, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    inputs.push(InputDigest { path: path.to_path_buf(), bytes: bytes.len() as u64, fnv1a: fnv_hex(&bytes) });
    String::from_utf8(bytes).map_err(|_| CliError::Usage(format!("{}: not UTF-8 text", path.display())))
}

struct Computed {
    series: Vec<(String, Series)>,
    tables: BTreeMap<String, TableSource>,
    tables_seconds: f64,
}

fn trace_context(
    cfg: &ExperimentConfig,
    opts: &RunOptions,
    tables: &mut BTreeMap<String, TableSource>,
    warnings: &mut Vec<String>,
) -> Result<TraceContext, CliError> {
    let cache = opts.cache.as_deref();
    let need = cfg.upper().max(cfg.x_max().saturating_mul(4)).max(1000);
    let (factors, src) = obtain_factor(cache, need, warnings)?;
    tables.insert("factor".into(), src);
    let hurwitz = match required_hurwitz_limit(cfg) {
        Some(lim) if lim <= HURWITZ_AUTO_CAP => {
            let (t, src) = obtain_hurwitz(cache, lim.max(4), warnings)?;
            tables.insert("hurwitz".into(), src);
            Some(t)
        }
        Some(lim) => {
            warnings.push(format!(
                "hurwitz arguments reach {lim}, over the table cap {HURWITZ_AUTO_CAP}; evaluating H per argument"
            ));
            None
        }
        None => None,
    };
    Ok(TraceContext::new(factors, hurwitz))
}

fn compute(
    entry: &Entry,
    cfg: &ExperimentConfig,
    opts: &RunOptions,
    inputs: &mut Vec<InputDigest>,
    warnings: &mut Vec<String>,
) -> Result<Computed, CliError> {
    let mut tables = BTreeMap::new();
    let t0 = Instant::now();
    let data_text = match entry.kind.data() {
        DataKind::None => None,
        _ => {
            let path = opts
                .data
                .as_deref()
                .ok_or_else(|| CliError::Usage(format!("{} needs a data file (--data FILE)", entry.name)))?;
            Some((read_input(path, inputs)?, path.display().to_string()))
        }
    };
    let needs_ctx = matches!(
        entry.kind,
        Kind::Delta | Kind::NoRoot | Kind::Mobius | Kind::ClassSum(_)
    );
    let ctx = if needs_ctx { Some(trace_context(cfg, opts, &mut tables, warnings)?) } else { None };
    let factors = if matches!(entry.kind, Kind::LvalueD | Kind::LvalueP) {
        let need = cfg.upper().max(cfg.x_max().saturating_mul(4)).max(1000);
        let (f, src) = obtain_factor(opts.cache.as_deref(), need, warnings)?;
        tables.insert("factor".into(), src);
        Some(f)
    } else {
        None
    };
    let tables_seconds = t0.elapsed().as_secs_f64();

    let one = |s: Series| vec![(String::new(), s)];
    let series = match entry.kind {
        Kind::Delta => one(mf_delta_series(cfg, ctx.as_ref().unwrap())?),
        Kind::NoRoot => one(mf_no_root_series(cfg, ctx.as_ref().unwrap())?),
        Kind::Mobius => {
            let part = mobius_part(cfg, ctx.as_ref().unwrap())?;
            vec![(String::new(), part.mobius), ("class".into(), part.class_part), ("approx".into(), part.approx)]
        }
        Kind::MobiusSlope => {
            let end = opts.x_end.unwrap_or(cfg.x * 4);
            let step = opts.x_step.unwrap_or((cfg.x / 2).max(1));
            if end < cfg.x || step == 0 {
                return Err(CliError::Usage("need --x-end ≥ --x and --x-step > 0".into()));
            }
            let xs: Vec<u64> = (cfg.x..=end).step_by(step as usize).collect();
            // the sweep needs tables for its largest X
            let top = ExperimentConfig { x: end, ..cfg.clone() };
            let ctx = trace_context(&top, opts, &mut tables, warnings)?;
            one(mobius_slope_sweep(cfg, &ctx, &xs)?)
        }
        Kind::ClassSum(v) => one(class_sum_series(v, cfg, ctx.as_ref().unwrap())?),
        Kind::LvalueD => one(lvalue_series(LValueMode::OverD, cfg, factors.as_ref().unwrap())?),
        Kind::LvalueP => one(lvalue_series(LValueMode::OverP, cfg, factors.as_ref().unwrap())?),
        Kind::Bqf(classes) => {
            let mut points = Vec::new();
            let mut diagnostics = Diagnostics::default();
            for &class in classes {
                let s = bqf_series(class, cfg)?;
                points.extend(s.points);
                diagnostics.omitted_points.extend(s.diagnostics.omitted_points);
                diagnostics.excluded.extend(s.diagnostics.excluded);
                diagnostics.tag_errors.extend(s.diagnostics.tag_errors);
            }
            one(Series::new(cfg.clone(), points, diagnostics))
        }
        Kind::AlEigenspace => {
            let (text, prov) = data_text.unwrap();
            let ds = parse_newforms_str(&text, &prov)?;
            let mode = match opts.mode.unwrap_or(AlModeArg::Fixed) {
                AlModeArg::Fixed => AlMode::FixedSmallPrime(opts.p0.unwrap_or(2)),
                AlModeArg::Both => AlMode::BothVary,
            };
            one(al_eigenspace_series(&ds, cfg, mode)?)
        }
        Kind::MfFixedRoot => {
            let (text, prov) = data_text.unwrap();
            one(data_fixed_root_series(&parse_newforms_str(&text, &prov)?, cfg)?)
        }
        Kind::EcFixedRoot => {
            let (text, prov) = data_text.unwrap();
            one(data_fixed_root_series(&parse_curves_str(&text, &prov)?, cfg)?)
        }
        Kind::EcNoRoot => {
            let (text, prov) = data_text.unwrap();
            one(data_no_root_series(&parse_curves_str(&text, &prov)?, cfg)?)
        }
    };
    let series = series.into_iter().map(|(suffix, s)| (suffix, smooth(&s, cfg.smoothing_window))).collect();
    Ok(Computed { series, tables, tables_seconds })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// Runs a named experiment and writes its CSV files and manifest.
pub fn execute(name: &str, flags: RunOptions) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let entry = lookup(name)
        .ok_or_else(|| CliError::Usage(format!("unknown experiment {name:?}; `murmur catalog` lists them")))?;
    let mut inputs = Vec::new();
    let opts = match &flags.config {
        Some(path) => {
            let (file_opts, bytes) = read_config(path)?;
            inputs.push(InputDigest { path: path.clone(), bytes: bytes.len() as u64, fnv1a: fnv_hex(&bytes) });
            flags.over(file_opts)
        }
        None => flags,
    };
    let cfg = build_config(entry, &opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Resource(format!("thread pool: {e}")))?;
    let mut warnings = Vec::new();
    let compute_start = Instant::now();
    let (computed, threads) = pool.install(|| {
        compute(entry, &cfg, &opts, &mut inputs, &mut warnings).map(|c| (c, rayon::current_num_threads()))
    })?;
    let compute_seconds = compute_start.elapsed().as_secs_f64() - computed.tables_seconds;

    let out_dir = opts.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;
    let stem = format!("{}_x{}", entry.name, cfg.x);
    let mut outputs = Vec::new();
    let mut diagnostics = BTreeMap::new();
    for (suffix, series) in &computed.series {
        let file = if suffix.is_empty() { format!("{stem}.csv") } else { format!("{stem}_{suffix}.csv") };
        let path = out_dir.join(file);
        write_file(&path, series_csv(series).as_bytes())?;
        outputs.push(path);
        let key = if suffix.is_empty() { entry.name.to_string() } else { suffix.clone() };
        if !series.diagnostics.is_empty() {
            diagnostics.insert(key, series.diagnostics.clone());
        }
    }
    let manifest_path = out_dir.join(format!("{stem}.json"));
    let manifest = RunManifest {
        experiment: entry.name.into(),
        config: cfg,
        options: opts,
        threads,
        inputs,
        tables: computed.tables,
        outputs,
        timing: Timing {
            tables_seconds: computed.tables_seconds,
            compute_seconds,
            total_seconds: started.elapsed().as_secs_f64(),
        },
        diagnostics,
        warnings,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&manifest_path, json.as_bytes())?;
    Ok(RunReport { manifest, manifest_path })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("2").unwrap(), Ratio::from_integer(2));
        assert_eq!(parse_ratio("5/2").unwrap(), Ratio::new(5, 2));
        assert_eq!(parse_ratio("2.5").unwrap(), Ratio::new(5, 2));
        assert_eq!(parse_ratio(".5").unwrap(), Ratio::new(1, 2));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("x").is_err());
        assert!(parse_ratio("-2").is_err());
    }

    #[test]
    fn flags_override_config() {
        let file: RunOptions = toml::from_str("x = 100\nbeta = \"3\"\nsmooth = 5\nxi-policy = \"strict\"\n").unwrap();
        let flags = RunOptions { x: Some(250), smooth: Some(0), ..Default::default() };
        let merged = flags.over(file);
        assert_eq!(merged.x, Some(250));
        assert_eq!(merged.beta.as_deref(), Some("3"));
        assert_eq!(merged.smooth, Some(0));
        assert_eq!(merged.xi_policy, Some(XiArg::Strict));
        assert!(toml::from_str::<RunOptions>("bogus = 1").is_err());
    }

    #[test]
    fn config_defaults_by_family() {
        let opts = RunOptions { x: Some(100), ..Default::default() };
        let cfg = build_config(lookup("ec-no-root").unwrap(), &opts).unwrap();
        assert_eq!(cfg.x_max(), 200);
        assert_eq!(cfg.xi_policy, XiPolicy::Resolved);
        let cfg = build_config(lookup("class-sum-a2").unwrap(), &opts).unwrap();
        assert_eq!(cfg.x_max(), 100);
        assert!(matches!(build_config(lookup("delta").unwrap(), &RunOptions::default()), Err(CliError::Usage(_))));
    }

    #[test]
    fn bqf_odd1_small_run() {
        let dir = tempfile::tempdir().unwrap();
        let opts = RunOptions { x: Some(10), out: Some(dir.path().into()), ..Default::default() };
        let report = execute("bqf-odd1", opts).unwrap();
        let csv = std::fs::read_to_string(&report.manifest.outputs[0]).unwrap();
        assert!(csv.lines().any(|l| l == "7,0.7,-0.316227766017,odd1mod8"), "{csv}");
        assert!(report.manifest_path.exists());
    }

    #[test]
    fn data_family_without_data() {
        let opts = RunOptions { x: Some(10), ..Default::default() };
        let err = execute("ec-no-root", opts).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
