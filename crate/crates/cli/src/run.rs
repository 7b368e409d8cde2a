use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use htc_core::io::{format_float, write_report_csv, write_report_json, write_series_csv, write_sticks_csv};
use htc_core::{
    absorption_spectrum, bound_absorption, find_critical_coupling, ilp_curve, lpl_spectrum, solve,
    CriticalCoupling, CriticalOptions, EigenSystem, Grid, HtcError, ModelParams, SpectralSeries,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::{CliError, Format};

pub struct Context {
    pub config: RunConfig,
    pub out: PathBuf,
    pub format: Format,
}

impl Context {
    fn header(&self, command: &str) -> Vec<String> {
        vec![
            format!("htc {} {command}", env!("CARGO_PKG_VERSION")),
            format!("config_sha256 {}", self.config.hash()),
            format!("config {}", self.config.canonical()),
        ]
    }

    fn path(&self, stem: &str) -> PathBuf {
        self.out.join(format!("{stem}.{}", self.format.extension()))
    }
}

fn write_file(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> Result<(), HtcError>,
) -> Result<(), CliError> {
    let io_err = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    body(&mut w).map_err(|e| match e {
        HtcError::Io(source) => io_err(source),
        other => CliError::Numerical(other),
    })?;
    w.flush().map_err(io_err)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    write_file(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

/// Model parameters for `eig` and `spectra`, moved to the critical coupling
/// when requested.
fn model(ctx: &Context) -> Result<(ModelParams, Option<CriticalCoupling>), CliError> {
    let p = ctx.config.model()?;
    if !ctx.config.at_critical {
        return Ok((p, None));
    }
    let c = find_critical_coupling(
        &p,
        ctx.config.critical_bracket(p.n_molecules),
        &CriticalOptions::default(),
    )?;
    Ok((p.with_rabi(c.rabi_single), Some(c)))
}

fn system(ctx: &Context, p: &ModelParams) -> Result<EigenSystem, CliError> {
    let mut sys = solve(p, ctx.config.solver)?;
    sys.relabel(&ctx.config.thresholds());
    Ok(sys)
}

fn coupling_line(p: &ModelParams, critical: Option<&CriticalCoupling>) -> String {
    format!(
        "rabi_single {} collective_rabi {}{}",
        format_float(p.rabi_single),
        format_float(p.collective_rabi()),
        if critical.is_some() { " (critical)" } else { "" }
    )
}

pub fn eig(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let (p, critical) = model(ctx)?;
    let sys = system(ctx, &p)?;
    let mut header = ctx.header("eig");
    header.push(coupling_line(&p, critical.as_ref()));
    let path = ctx.path("eigen_report");
    match ctx.format {
        Format::Csv => write_file(&path, |w| write_report_csv(w, &header, &sys))?,
        Format::Json => write_file(&path, |w| write_report_json(w, &header, &sys))?,
    }
    Ok(vec![path])
}

#[derive(Serialize)]
struct SeriesJson<'a> {
    header: &'a [String],
    series: &'a SpectralSeries,
}

pub fn spectra(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let (p, critical) = model(ctx)?;
    let grid = ctx.config.grid()?;
    let opts = ctx.config.line_options();
    let sys = system(ctx, &p)?;
    let outputs = [
        (
            "absorption",
            absorption_spectrum(&sys, &grid, ctx.config.pump_rabi, &opts)?,
        ),
        ("bound_absorption", bound_absorption(&sys, &grid, &opts)?),
        (
            "lpl",
            lpl_spectrum(
                &sys,
                &ctx.config.population_model(),
                &grid,
                p.nu_max_ground,
                &opts,
            )?,
        ),
    ];
    let mut header = ctx.header("spectra");
    header.push(coupling_line(&p, critical.as_ref()));
    let mut files = Vec::new();
    for (stem, series) in &outputs {
        let mut h = header.clone();
        h.push(format!("series {stem}"));
        match ctx.format {
            Format::Csv => {
                let path = ctx.path(stem);
                write_file(&path, |w| write_series_csv(w, &h, series))?;
                files.push(path);
                let path = ctx.path(&format!("{stem}_sticks"));
                write_file(&path, |w| write_sticks_csv(w, &h, series))?;
                files.push(path);
            }
            Format::Json => {
                let path = ctx.path(stem);
                write_json(&path, &SeriesJson { header: &h, series })?;
                files.push(path);
            }
        }
    }
    Ok(files)
}

#[derive(Serialize)]
struct CriticalRow {
    n_molecules: usize,
    huang_rhys: f64,
    #[serde(flatten)]
    result: Option<CriticalCoupling>,
    error: Option<String>,
}

#[derive(Serialize)]
struct TableJson<'a, T: Serialize> {
    header: &'a [String],
    rows: &'a [T],
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_header_lines(w: &mut impl Write, header: &[String]) -> std::io::Result<()> {
    header.iter().try_for_each(|line| writeln!(w, "# {line}"))
}

pub fn sweep_critical(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let c = &ctx.config;
    if !(c.critical_min >= 0.0 && c.critical_min < c.critical_max) {
        return Err(CliError::Config(format!(
            "empty critical-coupling range [{}, {}]",
            c.critical_min, c.critical_max
        )));
    }
    let base = c.model()?;
    let ns = if c.sweep_n_molecules.is_empty() {
        vec![base.n_molecules]
    } else {
        c.sweep_n_molecules.clone()
    };
    let ss = if c.sweep_huang_rhys.is_empty() {
        vec![base.huang_rhys]
    } else {
        c.sweep_huang_rhys.clone()
    };
    let points: Vec<(usize, f64)> = ns.iter().flat_map(|&n| ss.iter().map(move |&s| (n, s))).collect();
    let rows: Vec<CriticalRow> = points
        .par_iter()
        .map(|&(n, s)| {
            let p = ModelParams {
                n_molecules: n,
                huang_rhys: s,
                ..base.clone()
            };
            let found = p
                .validate()
                .and_then(|_| find_critical_coupling(&p, c.critical_bracket(n), &CriticalOptions::default()));
            match found {
                Ok(r) => CriticalRow {
                    n_molecules: n,
                    huang_rhys: s,
                    result: Some(r),
                    error: None,
                },
                Err(e) => CriticalRow {
                    n_molecules: n,
                    huang_rhys: s,
                    result: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let header = ctx.header("sweep-critical");
    let path = ctx.path("critical");
    match ctx.format {
        Format::Csv => write_file(&path, |w| {
            write_header_lines(w, &header)?;
            writeln!(
                w,
                "n_molecules,huang_rhys,rabi_single,collective_rabi,omega,mu_fraction,status"
            )?;
            for r in &rows {
                let cells = match &r.result {
                    Some(x) => format!(
                        "{},{},{},{},ok",
                        format_float(x.rabi_single),
                        format_float(x.collective_rabi),
                        format_float(x.omega),
                        format_float(x.mu_fraction)
                    ),
                    None => format!(
                        ",,,,{}",
                        csv_field(&format!("error: {}", r.error.as_deref().unwrap_or("")))
                    ),
                };
                writeln!(w, "{},{},{cells}", r.n_molecules, format_float(r.huang_rhys))?;
            }
            Ok(())
        })?,
        Format::Json => write_json(
            &path,
            &TableJson {
                header: &header,
                rows: &rows,
            },
        )?,
    }
    Ok(vec![path])
}

#[derive(Serialize)]
struct IlpJson<'a> {
    header: &'a [String],
    omega_p: &'a [f64],
    nu_max_ground: &'a [u32],
    values: Vec<&'a [f64]>,
    raw: Vec<&'a [f64]>,
}

pub fn sweep_ilp(ctx: &Context) -> Result<Vec<PathBuf>, CliError> {
    let c = &ctx.config;
    if !(c.ilp_min < c.ilp_max) {
        return Err(CliError::Config(format!(
            "empty pump-frequency range [{}, {}]",
            c.ilp_min, c.ilp_max
        )));
    }
    let Some(&top) = c.ilp_nu_max_ground.iter().max() else {
        return Err(CliError::Config("ilp_nu_max_ground is empty".into()));
    };
    let pump = Grid::new(c.ilp_min, c.ilp_max, c.ilp_step)
        .map_err(|e| CliError::Config(format!("ilp range: {e}")))?;
    let (p, critical) = model(ctx)?;
    let p = ModelParams {
        nu_max_ground: top,
        ..p
    };
    let sys = system(ctx, &p)?;
    let omega_p = pump.points();
    let curves = ilp_curve(
        &sys,
        &omega_p,
        c.ilp_sigma,
        &c.ilp_nu_max_ground,
        &ctx.config.line_options(),
    )?;
    let mut header = ctx.header("sweep-ilp");
    header.push(coupling_line(&p, critical.as_ref()));
    let path = ctx.path("ilp");
    match ctx.format {
        Format::Csv => write_file(&path, |w| {
            write_header_lines(w, &header)?;
            let mut cols = vec!["omega_p".to_string()];
            cols.extend(c.ilp_nu_max_ground.iter().map(|g| format!("value_nu{g}")));
            cols.extend(c.ilp_nu_max_ground.iter().map(|g| format!("raw_nu{g}")));
            writeln!(w, "{}", cols.join(","))?;
            for (k, &wp) in omega_p.iter().enumerate() {
                let mut row = vec![format_float(wp)];
                row.extend(curves.iter().map(|s| format_float(s.values[k])));
                row.extend(curves.iter().map(|s| format_float(s.raw[k])));
                writeln!(w, "{}", row.join(","))?;
            }
            Ok(())
        })?,
        Format::Json => write_json(
            &path,
            &IlpJson {
                header: &header,
                omega_p: &omega_p,
                nu_max_ground: &c.ilp_nu_max_ground,
                values: curves.iter().map(|s| s.values.as_slice()).collect(),
                raw: curves.iter().map(|s| s.raw.as_slice()).collect(),
            },
        )?,
    }
    Ok(vec![path])
}
