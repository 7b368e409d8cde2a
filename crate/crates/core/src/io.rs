//! Text exports: per-state eigen reports and spectrum tables.
//!
//! CSV numbers use 9 significant digits in scientific notation, and negative
//! zero is written as zero, so identical inputs give byte-identical files.
//! Every file starts with `#` comment lines supplied by the caller.

use std::io::Write;

use serde::Serialize;

use crate::eigen::EigenSystem;
use crate::error::Result;
use crate::spectra::SpectralSeries;

/// Formats with 9 significant digits.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

/// One row of the eigen report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateReport {
    pub j: usize,
    pub omega: f64,
    pub a_g2: f64,
    pub mu_g2: f64,
    pub gamma: f64,
    pub f_emission: f64,
    pub degeneracy: usize,
    pub label: String,
    pub photon_weight: f64,
    pub symmetric_weight: f64,
}

pub fn eigen_report(sys: &EigenSystem) -> Vec<StateReport> {
    (0..sys.len())
        .map(|j| StateReport {
            j,
            omega: sys.omega()[j],
            a_g2: sys.a_g()[j].powi(2),
            mu_g2: sys.mu_g()[j].powi(2),
            gamma: sys.gamma()[j],
            f_emission: sys.f_emission()[j],
            degeneracy: sys.degeneracy()[j],
            label: sys.labels()[j].to_string(),
            photon_weight: sys.photon_weight()[j],
            symmetric_weight: sys.symmetric_weight()[j],
        })
        .collect()
}

fn write_header<W: Write>(w: &mut W, header: &[String]) -> Result<()> {
    for line in header {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

pub fn write_report_csv<W: Write>(mut w: W, header: &[String], sys: &EigenSystem) -> Result<()> {
    write_header(&mut w, header)?;
    writeln!(
        w,
        "j,omega_over_wv,aG2,muG2,gamma,f_emission,degeneracy,label,photon_weight,symmetric_weight"
    )?;
    for r in eigen_report(sys) {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.j,
            format_float(r.omega),
            format_float(r.a_g2),
            format_float(r.mu_g2),
            format_float(r.gamma),
            format_float(r.f_emission),
            r.degeneracy,
            r.label,
            format_float(r.photon_weight),
            format_float(r.symmetric_weight)
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a, P: Serialize> {
    header: &'a [String],
    params: &'a P,
    states: Vec<StateReport>,
}

pub fn write_report_json<W: Write>(mut w: W, header: &[String], sys: &EigenSystem) -> Result<()> {
    let report = JsonReport {
        header,
        params: sys.params(),
        states: eigen_report(sys),
    };
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    Ok(())
}

/// Columns `omega_over_wv,value,raw_value`, one row per grid point.
pub fn write_series_csv<W: Write>(mut w: W, header: &[String], series: &SpectralSeries) -> Result<()> {
    write_header(&mut w, header)?;
    writeln!(w, "omega_over_wv,value,raw_value")?;
    for k in 0..series.len() {
        writeln!(
            w,
            "{},{},{}",
            format_float(series.grid[k]),
            format_float(series.values[k]),
            format_float(series.raw[k])
        )?;
    }
    Ok(())
}

/// Columns `omega_over_wv,strength,j,i,label_j`; `i` is empty when a line
/// has no ground-state partner.
pub fn write_sticks_csv<W: Write>(mut w: W, header: &[String], series: &SpectralSeries) -> Result<()> {
    write_header(&mut w, header)?;
    writeln!(w, "omega_over_wv,strength,j,i,label_j")?;
    for s in &series.sticks {
        let i = s.i.map(|i| i.to_string()).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{}",
            format_float(s.omega),
            format_float(s.strength),
            s.j,
            i,
            s.label
        )?;
    }
    Ok(())
}
