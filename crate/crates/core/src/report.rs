//! CSV and JSON-lines emission for scans, dumps and check reports.
//!
//! All numeric CSV output is written with 17 significant digits so files
//! round-trip to the exact double; human-readable rounding happens only in
//! console summaries, never in files.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::fock::OperatorMatrix;
use crate::maxwell::RSField;
use crate::modes::{ModeGrid, ModeProfile};

/// Full-precision decimal form of a double (17 significant digits).
/// Negative zero is normalized so dumps don't depend on how a zero was
/// produced.
pub fn format_full(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// One row of a displacement/number scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub kmin: f64,
    pub kmax: f64,
    pub n_shells: usize,
    pub e: f64,
    /// Screening mass; 0 when the profile is unscreened.
    pub mu: f64,
    /// Cutoff mass; 0 when the profile is unscreened.
    pub m: f64,
    pub n0: f64,
    pub overlap_normalized: f64,
}

/// One oracle/consistency check outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub params: String,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

/// One gauge-sector check outcome.
#[derive(Debug, Clone, Serialize)]
pub struct GaugeRecord {
    pub check: String,
    pub mode_count: usize,
    pub chi_family: String,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

/// One CCR-lab check outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CcrRecord {
    pub check: String,
    pub dimension: usize,
    pub params: String,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

pub const SCAN_HEADER: &str = "kmin,kmax,n_shells,e,mu,m,N0,overlap_normalized";
pub const PROFILE_HEADER: &str = "k,weight,re_q0,im_q0,re_q1,im_q1,re_q2,im_q2,re_q3,im_q3";
pub const OPERATOR_HEADER: &str = "row,col,re,im";
pub const SNAPSHOT_HEADER: &str = "ix,iy,iz,re_1,im_1,re_2,im_2,re_3,im_3";

pub fn write_scan_csv<W: Write>(mut w: W, records: &[ScanRecord]) -> io::Result<()> {
    writeln!(w, "{SCAN_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            format_full(r.kmin),
            format_full(r.kmax),
            r.n_shells,
            format_full(r.e),
            format_full(r.mu),
            format_full(r.m),
            format_full(r.n0),
            format_full(r.overlap_normalized),
        )?;
    }
    Ok(())
}

pub fn write_profile_csv<W: Write>(mut w: W, profile: &ModeProfile) -> io::Result<()> {
    writeln!(w, "{PROFILE_HEADER}")?;
    let grid = profile.grid();
    for i in 0..grid.len() {
        write!(w, "{},{}", format_full(grid.k_abs(i)), format_full(grid.weights()[i]))?;
        for mu in 0..4 {
            let q = profile.value(i, mu);
            write!(w, ",{},{}", format_full(q.re), format_full(q.im))?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Grid dump in the profile column layout, with zero amplitudes.
pub fn write_grid_csv<W: Write>(mut w: W, grid: &ModeGrid) -> io::Result<()> {
    writeln!(w, "{PROFILE_HEADER}")?;
    let zero = format_full(0.0);
    for i in 0..grid.len() {
        write!(w, "{},{}", format_full(grid.k_abs(i)), format_full(grid.weights()[i]))?;
        for _ in 0..4 {
            write!(w, ",{zero},{zero}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Dense operator dump, every entry in basis order.
pub fn write_operator_csv<W: Write>(mut w: W, op: &OperatorMatrix) -> io::Result<()> {
    writeln!(w, "{OPERATOR_HEADER}")?;
    for row in 0..op.nrows() {
        for col in 0..op.ncols() {
            let v: Complex64 = op[(row, col)];
            writeln!(w, "{row},{col},{},{}", format_full(v.re), format_full(v.im))?;
        }
    }
    Ok(())
}

pub fn write_rs_snapshot_csv<W: Write>(mut w: W, field: &RSField) -> io::Result<()> {
    writeln!(w, "{SNAPSHOT_HEADER}")?;
    let n = field.n();
    for ix in 0..n {
        for iy in 0..n {
            for iz in 0..n {
                let v = field.value(ix, iy, iz);
                writeln!(
                    w,
                    "{ix},{iy},{iz},{},{},{},{},{},{}",
                    format_full(v[0].re),
                    format_full(v[0].im),
                    format_full(v[1].re),
                    format_full(v[1].im),
                    format_full(v[2].re),
                    format_full(v[2].im),
                )?;
            }
        }
    }
    Ok(())
}

/// One JSON object per line.
pub fn write_jsonl<W: Write, T: Serialize>(mut w: W, records: &[T]) -> io::Result<()> {
    for r in records {
        let line = serde_json::to_string(r)?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{FockMode, FockRep, LorentzIndex};
    use crate::modes::Spacing;
    use std::sync::Arc;

    #[test]
    fn full_precision_round_trips() {
        for x in [
        0.1,
            std::f64::consts::PI,
            1.0 / (4.0 * std::f64::consts::PI * std::f64::consts::PI),
            6.02e23,
            -3e-301,
        ] {
            let s = format_full(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn operator_dump_is_golden() {
        // two modes, n_max = 1, raising operator of the first mode;
        // basis order (n₀,n₁) lexicographic with the first mode most
        // significant. This locks the basis convention.
        let rep = FockRep::new(
            vec![
                FockMode::new(0, LorentzIndex::T),
                FockMode::new(1, LorentzIndex::X),
            ],
            1,
        )
        .unwrap();
        let a_dag = rep.raising(FockMode::new(0, LorentzIndex::T)).unwrap();
        let mut out = Vec::new();
        write_operator_csv(&mut out, &a_dag).unwrap();
        let got = String::from_utf8(out).unwrap();
        let zero = "0.0000000000000000e0";
        let one = "1.0000000000000000e0";
        let mut expect = String::from("row,col,re,im\n");
        for row in 0..4 {
            for col in 0..4 {
                let re = if (row, col) == (2, 0) || (row, col) == (3, 1) {
                    one
                } else {
                    zero
                };
                expect.push_str(&format!("{row},{col},{re},{zero}\n"));
            }
        }
        assert_eq!(got, expect);
    }

    #[test]
    fn profile_csv_has_header_and_width() {
        let g = Arc::new(ModeGrid::isotropic(0.5, 2.0, 4, Spacing::Log).unwrap());
        let p = ModeProfile::coulomb(1.0, &g, 0.0);
        let mut out = Vec::new();
        write_profile_csv(&mut out, &p).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], PROFILE_HEADER);
        assert_eq!(lines.len(), 1 + 4);
        assert_eq!(lines[1].split(',').count(), 10);
    }

    #[test]
    fn scan_csv_layout() {
        let records = vec![ScanRecord {
            kmin: 1.0,
            kmax: 1e4,
            n_shells: 4096,
            e: 1.0,
            mu: 0.0,
            m: 0.0,
            n0: 0.23,
            overlap_normalized: 0.891,
        }];
        let mut out = Vec::new();
        write_scan_csv(&mut out, &records).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.starts_with(SCAN_HEADER));
        assert_eq!(text.lines().count(), 2);
        assert!(text.contains("4096"));
    }

    #[test]
    fn jsonl_is_one_object_per_line() {
        let records = vec![
            CheckRecord {
                check: "demo".into(),
                params: "n=2".into(),
                residual: 1e-12,
                bound: 1e-10,
                pass: true,
            };
            3
        ];
        let mut out = Vec::new();
        write_jsonl(&mut out, &records).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 3);
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert_eq!(v["pass"], serde_json::Value::Bool(true));
        }
    }
}
