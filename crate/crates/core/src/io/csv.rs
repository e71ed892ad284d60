//! Trace and norm CSV files.
//!
//! Numbers are written with 17 significant digits in scientific notation so
//! every `f64` survives a write/read cycle bit for bit. Lines end in `\n`.
//!
//! Trace files open with `#` comment lines: a format tag, the full run
//! configuration as one line of JSON and the termination status. The data
//! header is `n,rho_minus,rho_plus,gamma,lambda`; `lambda` is empty for MR.
//!
//! Norm files hold `phi,h` rows for every grid node, `phi` ascending from
//! `-pi`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::norm::{node_angle, AngularNorm};
use crate::relax::{IterationRecord, RelaxConfig, RelaxResult, Status};

pub const TRACE_FORMAT: &str = "jsr-relax trace v1";
pub const TRACE_HEADER: &str = "n,rho_minus,rho_plus,gamma,lambda";
pub const NORM_HEADER: &str = "phi,h";

/// Tolerance for the `rho_minus <= gamma <= rho_plus` row check.
pub const ROW_TOL: f64 = 1e-9;

/// A parsed trace file.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceFile {
    pub config: RelaxConfig,
    pub status: Status,
    pub rows: Vec<IterationRecord>,
}

/// Formats a double with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace(result: &RelaxResult, cfg: &RelaxConfig, mut sink: impl Write) -> Result<()> {
    let config = serde_json::to_string(cfg).expect("config serializes");
    let status = serde_json::to_string(&result.status).expect("status serializes");
    writeln!(sink, "# {TRACE_FORMAT}")?;
    writeln!(sink, "# config {config}")?;
    writeln!(sink, "# status {}", status.trim_matches('"'))?;
    writeln!(sink, "{TRACE_HEADER}")?;
    for r in &result.trace {
        writeln!(
            sink,
            "{},{},{},{},{}",
            r.n,
            fmt_f64(r.rho_minus),
            fmt_f64(r.rho_plus),
            fmt_f64(r.gamma),
            r.lambda.map(fmt_f64).unwrap_or_default()
        )?;
    }
    sink.flush()?;
    Ok(())
}

pub fn trace_to_string(result: &RelaxResult, cfg: &RelaxConfig) -> String {
    let mut buf = Vec::new();
    write_trace(result, cfg, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        location: format!("line {line}"),
        message: message.into(),
    }
}

fn num(field: &str, line: usize, name: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| perr(line, format!("cannot parse {name} from {field:?}")))
}

/// Parses and re-validates a trace file.
pub fn read_trace(text: &str) -> Result<TraceFile> {
    let mut format_seen = false;
    let mut config = None;
    let mut status = None;
    let mut header_seen = false;
    let mut rows: Vec<IterationRecord> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if comment == TRACE_FORMAT {
                format_seen = true;
            } else if let Some(json) = comment.strip_prefix("config ") {
                config = Some(
                    serde_json::from_str::<RelaxConfig>(json)
                        .map_err(|e| perr(lineno, format!("bad config: {e}")))?,
                );
            } else if let Some(s) = comment.strip_prefix("status ") {
                status = Some(
                    serde_json::from_value::<Status>(serde_json::Value::String(s.trim().into()))
                        .map_err(|e| perr(lineno, format!("bad status: {e}")))?,
                );
            }
            continue;
        }
        if !header_seen {
            if line != TRACE_HEADER {
                return Err(perr(lineno, format!("expected header {TRACE_HEADER:?}")));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(perr(
                lineno,
                format!("expected 5 fields, found {}", fields.len()),
            ));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| perr(lineno, format!("bad iteration index {:?}", fields[0])))?;
        if n != rows.len() {
            return Err(perr(
                lineno,
                format!("iteration {n} out of order, expected {}", rows.len()),
            ));
        }
        let rec = IterationRecord {
            n,
            rho_minus: num(fields[1], lineno, "rho_minus")?,
            rho_plus: num(fields[2], lineno, "rho_plus")?,
            gamma: num(fields[3], lineno, "gamma")?,
            lambda: match fields[4] {
                "" => None,
                f => Some(num(f, lineno, "lambda")?),
            },
        };
        if !(rec.rho_minus <= rec.gamma + ROW_TOL && rec.gamma <= rec.rho_plus + ROW_TOL) {
            return Err(perr(lineno, "gamma lies outside [rho_minus, rho_plus]"));
        }
        rows.push(rec);
    }

    if !format_seen {
        return Err(perr(1, format!("missing format tag {TRACE_FORMAT:?}")));
    }
    if !header_seen {
        return Err(perr(text.lines().count(), "missing data header"));
    }
    Ok(TraceFile {
        config: config.ok_or_else(|| perr(1, "missing config line"))?,
        status: status.ok_or_else(|| perr(1, "missing status line"))?,
        rows,
    })
}

pub fn write_norm(nm: &AngularNorm, mut sink: impl Write) -> Result<()> {
    let n = nm.node_count();
    writeln!(sink, "{NORM_HEADER}")?;
    for (j, h) in nm.values().iter().enumerate() {
        writeln!(sink, "{},{}", fmt_f64(node_angle(j, n)), fmt_f64(*h))?;
    }
    sink.flush()?;
    Ok(())
}

pub fn norm_to_string(nm: &AngularNorm) -> String {
    let mut buf = Vec::new();
    write_norm(nm, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

/// Reads a norm CSV; the angles must match the uniform grid.
pub fn read_norm(text: &str) -> Result<AngularNorm> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, NORM_HEADER)) => {}
        _ => return Err(perr(1, format!("expected header {NORM_HEADER:?}"))),
    }
    let mut phis = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let (phi, h) = line
            .split_once(',')
            .ok_or_else(|| perr(lineno, "expected two fields"))?;
        phis.push(num(phi, lineno, "phi")?);
        values.push(num(h, lineno, "h")?);
    }
    let n = values.len();
    for (j, phi) in phis.iter().enumerate() {
        if (phi - node_angle(j, n)).abs() > 1e-12 {
            return Err(perr(
                j + 2,
                format!("angle {phi} is not grid node {j} of {n}"),
            ));
        }
    }
    AngularNorm::from_values(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relax::{run, RelaxConfig};
    use crate::MatrixSet;
    use proptest::prelude::*;

    fn example1() -> MatrixSet {
        MatrixSet::from_2x2(&[[[1.0, 1.0], [0.0, 1.0]], [[1.0, 0.0], [-1.0, 1.0]]]).unwrap()
    }

    fn single(rec: IterationRecord) -> RelaxResult {
        RelaxResult {
            rho_lo: rec.rho_minus,
            rho_hi: rec.rho_plus,
            rho_mid: (rec.rho_minus + rec.rho_plus) / 2.0,
            norm: AngularNorm::euclidean(8).unwrap(),
            trace: vec![rec],
            status: Status::Converged,
        }
    }

    #[test]
    fn single_record_layout() {
        let rec = IterationRecord {
            n: 0,
            rho_minus: 1.0,
            rho_plus: 2.0,
            gamma: 1.5,
            lambda: Some(0.3),
        };
        let text = trace_to_string(&single(rec), &RelaxConfig::default());
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "# jsr-relax trace v1");
        assert!(lines[1].starts_with("# config {\"algorithm\":\"lr\""));
        assert_eq!(lines[2], "# status converged");
        assert_eq!(lines[3], TRACE_HEADER);
        assert_eq!(
            lines[4],
            "0,1.0000000000000000e0,2.0000000000000000e0,1.5000000000000000e0,2.9999999999999999e-1"
        );
        assert!(!text.contains('\r'));
    }

    #[test]
    fn converged_run_round_trips() {
        let cfg = RelaxConfig::lr();
        let res = run(&example1(), &cfg).unwrap();
        let text = trace_to_string(&res, &cfg);
        let back = read_trace(&text).unwrap();
        assert_eq!(back.rows, res.trace);
        assert_eq!(back.config, cfg);
        assert_eq!(back.status, Status::Converged);
        let last = back.rows.last().unwrap();
        assert!(last.rho_plus - last.rho_minus <= 2e-3);
    }

    #[test]
    fn mr_rows_have_empty_lambda() {
        let cfg = RelaxConfig::mr();
        let res = run(&example1(), &cfg).unwrap();
        let text = trace_to_string(&res, &cfg);
        assert!(text.lines().skip(4).all(|l| l.ends_with(',')));
        assert_eq!(read_trace(&text).unwrap().rows, res.trace);
    }

    #[test]
    fn read_trace_rejects_bad_rows() {
        let rec = IterationRecord {
            n: 0,
            rho_minus: 1.0,
            rho_plus: 2.0,
            gamma: 1.5,
            lambda: None,
        };
        let good = trace_to_string(&single(rec), &RelaxConfig::mr());
        assert!(read_trace(&good).is_ok());
        let gap = good.replace("\n0,", "\n1,");
        assert!(read_trace(&gap).is_err());
        let outside = good.replace("1.5000000000000000e0", "2.5000000000000000e0");
        assert!(read_trace(&outside).is_err());
        let no_header = good.replace(TRACE_HEADER, "n,lo,hi");
        assert!(read_trace(&no_header).is_err());
        let no_config: String = good
            .lines()
            .filter(|l| !l.starts_with("# config"))
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(read_trace(&no_config).is_err());
    }

    #[test]
    fn norm_csv_layout() {
        let nm = AngularNorm::euclidean(8).unwrap();
        let text = norm_to_string(&nm);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], "phi,h");
        assert_eq!(lines[1], "-3.1415926535897931e0,1.0000000000000000e0");
        assert_eq!(lines[5], "0.0000000000000000e0,1.0000000000000000e0");
        assert_eq!(read_norm(&text).unwrap(), nm);
        assert!(read_norm("phi,h\n0.1,1\n").is_err());
    }

    proptest! {
        #[test]
        fn norm_csv_round_trip(vals in prop::collection::vec(0.01..100.0f64, 4..200)) {
            let mut v = vals.clone();
            v.extend_from_slice(&vals);
            let nm = AngularNorm::from_values(v).unwrap();
            prop_assert_eq!(read_norm(&norm_to_string(&nm)).unwrap(), nm);
        }

        #[test]
        fn fmt_f64_round_trips(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }
}
