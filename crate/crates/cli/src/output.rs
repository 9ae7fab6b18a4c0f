//! CSV and JSON emission with atomic file replacement.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use qutrit::analysis::Crossing;
use qutrit::evolution::Trajectory;
use qutrit::Vec8;

use crate::error::CliError;

fn push_row(out: &mut String, t: f64, xi: &Vec8, extra: Option<f64>) {
    // {:?} is the shortest representation that parses back to the same f64
    write!(out, "{t:?}").unwrap();
    for x in xi.iter() {
        write!(out, ",{x:?}").unwrap();
    }
    if let Some(s) = extra {
        write!(out, ",{s:?}").unwrap();
    }
    out.push('\n');
}

fn header(with_s: bool) -> String {
    let mut h = String::from("t");
    for k in 1..=8 {
        write!(h, ",xi{k}").unwrap();
    }
    if with_s {
        h.push_str(",S");
    }
    h.push('\n');
    h
}

/// `t,xi1,...,xi8[,S]`.
pub fn trajectory_csv(traj: &Trajectory, entropy: Option<&[f64]>) -> String {
    let mut out = header(entropy.is_some());
    for (k, (t, xi)) in traj.times.iter().zip(&traj.states).enumerate() {
        push_row(&mut out, *t, xi, entropy.map(|s| s[k]));
    }
    out
}

pub fn entropy_csv(times: &[f64], entropy: &[f64]) -> String {
    let mut out = String::from("t,S\n");
    for (t, s) in times.iter().zip(entropy) {
        writeln!(out, "{t:?},{s:?}").unwrap();
    }
    out
}

pub fn crossings_csv(crossings: &[Crossing]) -> String {
    let mut out = header(false);
    for c in crossings {
        push_row(&mut out, c.t, &c.xi, None);
    }
    out
}

/// Rows of a `t,xi1,...,xi8[,S]` document.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec8>,
    pub entropy: Option<Vec<f64>>,
}

pub fn parse_trajectory_csv(text: &str) -> Result<ParsedTrajectory, CliError> {
    let bad = |m: String| CliError::Config(m);
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| bad("empty csv".into()))?;
    let with_s = match head {
        h if h == header(true).trim_end() => true,
        h if h == header(false).trim_end() => false,
        h => return Err(bad(format!("unexpected header {h:?}"))),
    };
    let mut parsed = ParsedTrajectory {
        times: Vec::new(),
        states: Vec::new(),
        entropy: with_s.then(Vec::new),
    };
    for (n, line) in lines.enumerate() {
        let v = line
            .split(',')
            .map(str::parse::<f64>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("row {}: {e}", n + 1)))?;
        if v.len() != 9 + with_s as usize {
            return Err(bad(format!("row {} has {} fields", n + 1, v.len())));
        }
        parsed.times.push(v[0]);
        parsed.states.push(Vec8::try_from_slice(&v[1..9]).map_err(|e| bad(e.to_string()))?);
        if let Some(s) = parsed.entropy.as_mut() {
            s.push(v[9]);
        }
    }
    Ok(parsed)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Writes through a temporary file in `dir` renamed over `dir/name`.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(dir.join(name)).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
