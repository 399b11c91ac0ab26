//! CSV and gnuplot serialisation of sweep results.
//!
//! Every row carries the full header below. Inputs that do not apply to the
//! row (geometry under a direct σ, the rate of an adaptive run, Monte Carlo
//! errors of an analytic regime) hold the sentinel `NA`, as do outputs of a
//! failed evaluation, whose message goes to the `error` column.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::Regime;
use crate::sweep::SweepResult;

pub const NA: &str = "NA";

pub const HEADER: [&str; 19] = [
    "command",
    "snr_db",
    "sigma",
    "d_a",
    "v",
    "v_kmh",
    "delta",
    "f_c",
    "d",
    "length",
    "rate",
    "regime",
    "method",
    "throughput",
    "error_prob",
    "rate_opt",
    "mc_se_throughput",
    "mc_se_error_prob",
    "error",
];

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("no results to write")]
    Empty,
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

/// Rounds to 12 significant digits and prints the shortest text that parses
/// back to the rounded value.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return NA.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), format_float)
}

pub fn record(row: &SweepResult) -> [String; 19] {
    let p = &row.point;
    let g = p.geometry;
    [
        row.command.name().to_string(),
        format_float(p.snr_db),
        opt(p.sigma),
        opt(g.map(|g| g.d_a)),
        opt(g.map(|g| g.v)),
        opt(row.v_kmh()),
        opt(g.map(|g| g.delta)),
        opt(g.map(|g| g.f_c)),
        opt(g.map(|g| g.d)),
        p.length.to_string(),
        opt(p.rate),
        row.regime.name().to_string(),
        row.method.clone().unwrap_or_else(|| NA.to_string()),
        opt(row.throughput),
        opt(row.error_prob),
        opt(row.rate_opt),
        opt(row.mc_se_throughput),
        opt(row.mc_se_error_prob),
        row.error.clone().unwrap_or_else(|| NA.to_string()),
    ]
}

pub fn write_csv_to<W: Write>(results: &[SweepResult], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for row in results {
        w.write_record(record(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(results: &[SweepResult]) -> String {
    let mut buf = Vec::new();
    write_csv_to(results, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn write_csv(results: &[SweepResult], path: &Path) -> Result<(), OutputError> {
    if results.is_empty() {
        return Err(OutputError::Empty);
    }
    let file = File::create(path).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv_to(results, BufWriter::new(file)).map_err(|source| OutputError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

pub const GNUPLOT_COLUMNS: [&str; 9] = [
    "snr_db",
    "sigma",
    "v",
    "d_a",
    "length",
    "rate",
    "throughput",
    "error_prob",
    "rate_opt",
];

/// Whitespace-separated columns, one block per regime separated by two blank
/// lines so each block is addressable with `index` in gnuplot.
pub fn write_gnuplot_to<W: Write>(results: &[SweepResult], regimes: &[Regime], mut out: W) -> io::Result<()> {
    writeln!(out, "# set datafile missing \"{NA}\"")?;
    writeln!(out, "# {}", GNUPLOT_COLUMNS.join(" "))?;
    for (block, &regime) in regimes.iter().enumerate() {
        if block > 0 {
            writeln!(out)?;
            writeln!(out)?;
        }
        writeln!(out, "# regime {regime}")?;
        for row in results.iter().filter(|r| r.regime == regime) {
            let p = &row.point;
            let g = p.geometry;
            let cols = [
                format_float(p.snr_db),
                opt(p.sigma),
                opt(g.map(|g| g.v)),
                opt(g.map(|g| g.d_a)),
                p.length.to_string(),
                opt(p.rate),
                opt(row.throughput),
                opt(row.error_prob),
                opt(row.rate_opt),
            ];
            writeln!(out, "{}", cols.join(" "))?;
        }
    }
    out.flush()
}

pub fn write_gnuplot(results: &[SweepResult], regimes: &[Regime], path: &Path) -> Result<(), OutputError> {
    let io_err = |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_gnuplot_to(results, regimes, BufWriter::new(file)).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.1 + 0.2), "0.3");
        assert_eq!(format_float(2.841_889_329_055_153), "2.84188932906");
        assert_eq!(format_float(1.0), "1.0");
        assert_eq!(format_float(0.0), "0.0");
        assert_eq!(format_float(2.4832e-146), "2.4832e-146");
        assert_eq!(format_float(f64::NAN), NA);
    }

    #[test]
    fn header_line() {
        assert_eq!(
            HEADER.join(","),
            "command,snr_db,sigma,d_a,v,v_kmh,delta,f_c,d,length,rate,regime,method,\
             throughput,error_prob,rate_opt,mc_se_throughput,mc_se_error_prob,error"
        );
    }

    proptest! {
        #[test]
        fn round_trip_at_twelve_digits(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
            let text = format_float(x);
            let back: f64 = text.parse().unwrap();
            let want: f64 = format!("{x:.11e}").parse().unwrap();
            prop_assert_eq!(back.to_bits(), want.to_bits());
            let rel = if !x.is_normal() { 0.0 } else { ((back - x) / x).abs() };
            prop_assert!(rel <= 5e-12);
        }
    }
}
