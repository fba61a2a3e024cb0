use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SimError, SimReport, ThroughputReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, SimError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(SimError::InvalidConfig(format!(
                "unknown report format {other:?}"
            ))),
        }
    }
}

pub const SWEEP_CSV_HEADER: &str = "snr_db,frames,bit_errors,frame_errors,ber,fer,mean_iters";
pub const THROUGHPUT_CSV_HEADER: &str =
    "es_n0_db,frames,transmissions,delivered_bits,channel_uses,throughput,capacity";

/// One row per SNR point, shortest round-trip float formatting.
pub fn write_csv<W: Write>(report: &SimReport, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for p in &report.points {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            p.snr_db, p.frames, p.bit_errors, p.frame_errors, p.ber, p.fer, p.mean_iters
        )?;
    }
    Ok(())
}

pub fn write_throughput_csv<W: Write>(report: &ThroughputReport, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{THROUGHPUT_CSV_HEADER}")?;
    for p in &report.points {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            p.es_n0_db,
            p.frames,
            p.transmissions,
            p.delivered_bits,
            p.channel_uses,
            p.throughput,
            p.capacity
        )?;
    }
    Ok(())
}

fn emit<R: Serialize>(
    report: &R,
    csv: fn(&R, &mut Vec<u8>) -> std::io::Result<()>,
    format: ReportFormat,
    path: &Path,
) -> Result<(), SimError> {
    let mut buf = Vec::new();
    match format {
        ReportFormat::Csv => csv(report, &mut buf)?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, report)?;
            buf.push(b'\n');
        }
    }
    std::fs::write(path, buf)?;
    Ok(())
}

/// Writes a BER/FER report as CSV or as JSON with full provenance.
pub fn emit_report(
    report: &SimReport,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<(), SimError> {
    emit(report, |r, w| write_csv(r, w), format, path.as_ref())
}

pub fn emit_throughput_report(
    report: &ThroughputReport,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<(), SimError> {
    emit(
        report,
        |r, w| write_throughput_csv(r, w),
        format,
        path.as_ref(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{CodeInfo, SnrPoint, SweepConfig};
    use crate::Rate;

    fn report(points: Vec<SnrPoint>) -> SimReport {
        SimReport {
            code: CodeInfo {
                label: "toy".into(),
                hash: "ab".into(),
                n: 10,
                k: 5,
                punctured: 0,
                rate: Rate::new(1, 2),
                scheme: None,
            },
            config: SweepConfig::new(vec![1.0, f64::INFINITY], 10, 1, 5, 0),
            precision: "f64".into(),
            points,
        }
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let mut out = Vec::new();
        write_csv(&report(vec![]), &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            format!("{SWEEP_CSV_HEADER}\n")
        );
    }

    #[test]
    fn json_round_trip() {
        let r = report(vec![
            SnrPoint {
                snr_db: 1.0,
                frames: 10,
                bit_errors: 7,
                frame_errors: 3,
                ber: 0.14,
                fer: 0.3,
                mean_iters: 4.1,
            },
            SnrPoint {
                snr_db: f64::INFINITY,
                frames: 10,
                bit_errors: 0,
                frame_errors: 0,
                ber: 0.0,
                fer: 0.0,
                mean_iters: 0.0,
            },
        ]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.json");
        emit_report(&r, ReportFormat::Json, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"inf\""));
        let back: SimReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);

        let csv_path = dir.path().join("r.csv");
        emit_report(&r, ReportFormat::Csv, &csv_path).unwrap();
        let csv = std::fs::read_to_string(&csv_path).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[1], "1,10,7,3,0.14,0.3,4.1");
        assert_eq!(rows[2], "inf,10,0,0,0,0,0");
    }
}
