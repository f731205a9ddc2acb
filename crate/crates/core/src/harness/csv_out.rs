use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::schedule_run::ScheduleTrajectory;
use super::sweep::{SweepResult, SweepRow};
use crate::error::{Error, Result};

pub const SWEEP_HEADER: &str = "h,rmse,stderr,epochs,wallclock_s";
pub const TRAJECTORY_HEADER: &str = "epoch,rmse,stderr,stepsize";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_meta<W: Write>(w: &mut W, meta: &[(String, String)]) -> std::io::Result<()> {
    writeln!(w, "# meta:")?;
    for (k, v) in meta {
        writeln!(w, "# {k}={}", v.replace('\n', " "))?;
    }
    Ok(())
}

/// Writes a sweep as a `# meta:` comment block, the header and one line per
/// row. Floats use the shortest representation that parses back exactly.
pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let body = (|| -> std::io::Result<()> {
        write_meta(&mut w, &result.metadata)?;
        writeln!(w, "{SWEEP_HEADER}")?;
        for r in &result.rows {
            writeln!(w, "{:?},{:?},{:?},{},{:?}", r.h, r.rmse, r.stderr, r.epochs, r.wallclock_s)?;
        }
        w.flush()
    })();
    body.map_err(io_err(path))
}

pub fn write_trajectory_csv(traj: &ScheduleTrajectory, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let body = (|| -> std::io::Result<()> {
        write_meta(&mut w, &traj.metadata)?;
        writeln!(w, "{TRAJECTORY_HEADER}")?;
        for i in 0..traj.epochs.len() {
            writeln!(w, "{},{:?},{:?},{:?}", traj.epochs[i], traj.rmse[i], traj.stderr[i], traj.stepsize[i])?;
        }
        w.flush()
    })();
    body.map_err(io_err(path))
}

/// Reads a file produced by [`write_csv`].
pub fn read_sweep_csv(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut metadata = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                metadata.push((k.to_string(), v.to_string()));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !seen_header {
            if line.trim() != SWEEP_HEADER {
                return Err(parse_err(lineno, format!("expected header `{SWEEP_HEADER}`")));
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(parse_err(lineno, format!("expected 5 fields, found {}", fields.len())));
        }
        let num = |i: usize| {
            fields[i]
                .trim()
                .parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("`{}` is not a number", fields[i])))
        };
        let rmse = num(1)?;
        rows.push(SweepRow {
            h: num(0)?,
            rmse,
            stderr: num(2)?,
            epochs: fields[3]
                .trim()
                .parse()
                .map_err(|_| parse_err(lineno, format!("`{}` is not an epoch count", fields[3])))?,
            wallclock_s: num(4)?,
            diverged: rmse.is_infinite(),
        });
    }
    if !seen_header {
        return Err(parse_err(1, "missing header".into()));
    }
    let fit = match (
        metadata.iter().find(|(k, _)| k == "slope"),
        metadata.iter().find(|(k, _)| k == "intercept"),
    ) {
        (Some((_, s)), Some((_, i))) => match (s.parse(), i.parse()) {
            (Ok(slope), Ok(intercept)) => Some(super::fit::OrderFit { slope, intercept }),
            _ => None,
        },
        _ => None,
    };
    Ok(SweepResult { rows, fit, metadata })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepResult {
        SweepResult::from_rows(
            vec![
                SweepRow { h: 0.1, rmse: 0.123456789012345678, stderr: 1e-3, epochs: 500, wallclock_s: 0.25, diverged: false },
                SweepRow { h: 0.05, rmse: 1.0 / 3.0, stderr: 2e-17, epochs: 500, wallclock_s: 0.5, diverged: false },
            ],
            vec![("seed".into(), "42".into())],
        )
    }

    #[test]
    fn two_rows_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let r = sample();
        assert!(r.fit.is_none());
        write_csv(&r, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 3);
        assert_eq!(data[0], SWEEP_HEADER);
        assert!(text.starts_with("# meta:\n"));
        assert!(text.contains("# seed=42"));
        assert!(text.contains("# slope=undefined"));
    }

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let r = sample();
        write_csv(&r, &p).unwrap();
        let back = read_sweep_csv(&p).unwrap();
        assert_eq!(back.rows, r.rows);
        assert_eq!(back.metadata, r.metadata);
    }

    #[test]
    fn diverged_rows_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        let r = SweepResult::from_rows(
            vec![SweepRow { h: 2.0, rmse: f64::INFINITY, stderr: f64::NAN, epochs: 500, wallclock_s: 0.0, diverged: true }],
            vec![],
        );
        write_csv(&r, &p).unwrap();
        let back = read_sweep_csv(&p).unwrap();
        assert!(back.rows[0].diverged);
    }

    #[test]
    fn unwritable_path_names_the_path() {
        let p = Path::new("/nonexistent-dir/x.csv");
        match write_csv(&sample(), p) {
            Err(Error::Io { path, .. }) => assert_eq!(path, p),
            other => panic!("{other:?}"),
        }
    }
}
