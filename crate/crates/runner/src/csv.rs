//! Plain-text CSV formats. Floats are written with 17 significant digits so
//! they parse back bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use xxz_core::{C64, EntanglementTrajectory, GammaResult, HermitianOperator};

use crate::error::{Result, RunError};

/// Entries at or below this modulus are omitted from operator dumps.
pub const OPERATOR_THRESHOLD: f64 = 1e-14;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `contents` to a sibling temp file and renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| RunError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| RunError::io(path, e))
}

/// `t,mean,stderr[,s0,s1,...]`, one row per grid time.
pub fn trajectory_csv(traj: &EntanglementTrajectory) -> String {
    let mut s = String::from("t,mean,stderr");
    let samples = traj.per_sample();
    if let Some(rows) = samples {
        for k in 0..rows.len() {
            let _ = write!(s, ",s{k}");
        }
    }
    s.push('\n');
    for i in 0..traj.times().len() {
        let _ = write!(s, "{},{},{}", fmt_f64(traj.times()[i]), fmt_f64(traj.mean()[i]), fmt_f64(traj.stderr()[i]));
        if let Some(rows) = samples {
            for row in rows {
                let _ = write!(s, ",{}", fmt_f64(row[i]));
            }
        }
        s.push('\n');
    }
    s
}

fn parse_row(path: &Path, lineno: usize, line: &str) -> Result<Vec<f64>> {
    line.split(',')
        .map(|f| {
            f.trim()
                .parse::<f64>()
                .map_err(|_| RunError::format(path, format!("line {lineno}: bad number `{f}`")))
        })
        .collect()
}

/// Parses [`trajectory_csv`] output.
pub fn parse_trajectory_csv(path: &Path, text: &str) -> Result<EntanglementTrajectory> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    if header.len() < 3 || header[..3] != ["t", "mean", "stderr"] {
        return Err(RunError::format(path, "expected header `t,mean,stderr[,s0,...]`"));
    }
    let num_samples = header.len() - 3;
    let (mut t, mut mean, mut stderr) = (Vec::new(), Vec::new(), Vec::new());
    let mut columns = vec![Vec::new(); num_samples];
    for (i, line) in lines.enumerate() {
        let row = parse_row(path, i + 2, line)?;
        if row.len() != header.len() {
            return Err(RunError::format(path, format!("line {}: expected {} fields", i + 2, header.len())));
        }
        t.push(row[0]);
        mean.push(row[1]);
        stderr.push(row[2]);
        for (col, x) in columns.iter_mut().zip(&row[3..]) {
            col.push(*x);
        }
    }
    let per_sample = (num_samples > 0).then_some(columns);
    EntanglementTrajectory::from_parts(t, mean, stderr, per_sample)
        .map_err(|e| RunError::format(path, e.to_string()))
}

pub fn read_trajectory_csv(path: &Path) -> Result<EntanglementTrajectory> {
    let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    parse_trajectory_csv(path, &text)
}

/// Header of gamma tables; the first column names the swept parameter.
pub fn gamma_header(parameter: &str) -> String {
    format!("{parameter},gamma,window_max,window_min,window_avg,tau,t_max\n")
}

pub fn gamma_row(value: f64, g: &GammaResult) -> String {
    [value, g.gamma, g.window_max, g.window_min, g.window_time_average, g.tau, g.t_max]
        .iter()
        .map(|&x| fmt_f64(x))
        .collect::<Vec<_>>()
        .join(",")
        + "\n"
}

/// Parses a gamma table into `(parameter, result)` rows.
pub fn parse_gamma_csv(path: &Path, text: &str) -> Result<(String, Vec<(f64, GammaResult)>)> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("");
    let (parameter, rest) = header.split_once(',').unwrap_or(("", ""));
    if rest != "gamma,window_max,window_min,window_avg,tau,t_max" {
        return Err(RunError::format(path, "unexpected gamma header"));
    }
    let rows = lines
        .enumerate()
        .map(|(i, line)| {
            let r = parse_row(path, i + 2, line)?;
            if r.len() != 7 {
                return Err(RunError::format(path, format!("line {}: expected 7 fields", i + 2)));
            }
            let g = GammaResult {
                gamma: r[1],
                window_max: r[2],
                window_min: r[3],
                window_time_average: r[4],
                tau: r[5],
                t_max: r[6],
            };
            Ok((r[0], g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((parameter.to_string(), rows))
}

/// `row,col,re,im` for entries with modulus above [`OPERATOR_THRESHOLD`].
pub fn operator_csv(op: &HermitianOperator) -> String {
    let mut s = String::from("row,col,re,im\n");
    for (r, c, z) in op.matrix().nonzeros(OPERATOR_THRESHOLD) {
        let _ = writeln!(s, "{r},{c},{},{}", fmt_f64(z.re), fmt_f64(z.im));
    }
    s
}

/// Parses [`operator_csv`] output into `(row, col, value)` triples.
pub fn parse_operator_csv(path: &Path, text: &str) -> Result<Vec<(usize, usize, C64)>> {
    let mut lines = text.lines();
    if lines.next() != Some("row,col,re,im") {
        return Err(RunError::format(path, "expected header `row,col,re,im`"));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let bad = || RunError::format(path, format!("line {}: malformed entry", i + 2));
            if f.len() != 4 {
                return Err(bad());
            }
            let r = f[0].parse().map_err(|_| bad())?;
            let c = f[1].parse().map_err(|_| bad())?;
            let re = f[2].parse().map_err(|_| bad())?;
            let im = f[3].parse().map_err(|_| bad())?;
            Ok((r, c, C64::new(re, im)))
        })
        .collect()
}
