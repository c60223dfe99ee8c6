//! CSV, JSON and plot-data renderings. Rows with an exactly zero amplitude are
//! left out of CSV and JSON; plot data keeps the full grid.

use std::fmt::Write;

use serde_json::{json, Map, Value};

use selfoc::{CouplingMatrix, CouplingTensor, FcCandidate, FcEstimate, SchmidtReport, Spectrum};

use crate::args::Format;

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-5, 1e16)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn document(scenario: &Map<String, Value>, body: Map<String, Value>) -> String {
    let mut root = Map::new();
    root.insert("scenario".into(), Value::Object(scenario.clone()));
    root.extend(body);
    let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("finite values serialize");
    s.push('\n');
    s
}

pub fn spectrum(s: &Spectrum, format: Format, scenario: &Map<String, Value>) -> String {
    let rows = s.entries.iter().filter(|e| e.amplitude != 0.0);
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("n_prime,amplitude,probability\n");
            for e in rows {
                writeln!(out, "{},{},{}", e.n_prime, num(e.amplitude), num(e.probability)).unwrap();
            }
        }
        Format::Plot => {
            out.push_str("# n_prime probability\n");
            for e in &s.entries {
                writeln!(out, "{} {}", e.n_prime, num(e.probability)).unwrap();
            }
        }
        Format::Json => {
            let entries: Vec<Value> = rows
                .map(|e| json!({"n_prime": e.n_prime, "amplitude": e.amplitude, "probability": e.probability}))
                .collect();
            let mut body = Map::new();
            body.insert("entries".into(), entries.into());
            body.insert("captured_mass".into(), s.captured_mass.into());
            body.insert("argmax".into(), json!(s.argmax().map(|e| e.n_prime)));
            out = document(scenario, body);
        }
    }
    out
}

pub fn tensor(t: &CouplingTensor, format: Format, scenario: &Map<String, Value>) -> String {
    let (rows, cols) = t.shape();
    let cells = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j)));
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("nx_prime,ny_prime,amplitude,probability\n");
            for (i, j) in cells.filter(|&(i, j)| t.get(i, j) != 0.0) {
                let a = t.get(i, j);
                writeln!(out, "{i},{j},{},{}", num(a), num(a * a)).unwrap();
            }
        }
        Format::Plot => {
            out.push_str("# nx_prime ny_prime probability\n");
            for i in 0..rows {
                if i > 0 {
                    out.push('\n');
                }
                for j in 0..cols {
                    let a = t.get(i, j);
                    writeln!(out, "{i} {j} {}", num(a * a)).unwrap();
                }
            }
        }
        Format::Json => {
            let entries: Vec<Value> = cells
                .filter(|&(i, j)| t.get(i, j) != 0.0)
                .map(|(i, j)| {
                    let a = t.get(i, j);
                    json!({"nx_prime": i, "ny_prime": j, "amplitude": a, "probability": a * a})
                })
                .collect();
            let mut body = Map::new();
            body.insert("entries".into(), entries.into());
            body.insert("captured_mass".into(), t.captured_mass.into());
            body.insert("argmax".into(), json!(t.argmax().map(|(ij, _)| [ij.0, ij.1])));
            out = document(scenario, body);
        }
    }
    out
}

/// Probability mass of each row and the most probable target per row.
pub fn row_summary(m: &CouplingMatrix) -> Vec<(f64, usize)> {
    (0..=m.rows_max)
        .map(|n| {
            let row = m.row(n);
            let mass = row.iter().map(|a| a * a).sum();
            let best = (0..row.len()).fold(0, |b, k| if row[k] * row[k] > row[b] * row[b] { k } else { b });
            (mass, best)
        })
        .collect()
}

pub fn matrix(m: &CouplingMatrix, format: Format, scenario: &Map<String, Value>) -> String {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("n,n_prime,amplitude,probability\n");
            for n in 0..=m.rows_max {
                for (k, &a) in m.row(n).iter().enumerate().filter(|(_, a)| **a != 0.0) {
                    writeln!(out, "{n},{k},{},{}", num(a), num(a * a)).unwrap();
                }
            }
        }
        Format::Plot => {
            out.push_str("# n n_prime probability\n");
            for n in 0..=m.rows_max {
                if n > 0 {
                    out.push('\n');
                }
                for (k, &a) in m.row(n).iter().enumerate() {
                    writeln!(out, "{n} {k} {}", num(a * a)).unwrap();
                }
            }
        }
        Format::Json => {
            let mut entries = Vec::new();
            for n in 0..=m.rows_max {
                for (k, &a) in m.row(n).iter().enumerate().filter(|(_, a)| **a != 0.0) {
                    entries.push(json!({"n": n, "n_prime": k, "amplitude": a, "probability": a * a}));
                }
            }
            let summary = row_summary(m);
            let mut body = Map::new();
            body.insert("entries".into(), entries.into());
            body.insert("captured_mass".into(), json!(summary.iter().map(|s| s.0).collect::<Vec<_>>()));
            body.insert("argmax".into(), json!(summary.iter().map(|s| s.1).collect::<Vec<_>>()));
            body.insert("orthogonality_defect".into(), m.orthogonality_defect.into());
            out = document(scenario, body);
        }
    }
    out
}

fn candidate(c: &FcCandidate) -> Value {
    json!({"transition_point": c.transition_point, "raw_level": c.raw_level, "level": c.level})
}

pub fn fc(e: &FcEstimate, format: Format, scenario: &Map<String, Value>) -> String {
    match format {
        Format::Csv | Format::Plot => format!("{}\n", e.level()),
        Format::Json => {
            let mut body = Map::new();
            body.insert("estimate".into(), e.level().into());
            body.insert("chosen".into(), candidate(&e.chosen));
            body.insert("alternate".into(), e.alternate.as_ref().map_or(Value::Null, candidate));
            document(scenario, body)
        }
    }
}

pub fn schmidt(r: &SchmidtReport, format: Format, scenario: &Map<String, Value>) -> String {
    let total: f64 = r.singular_values.iter().map(|s| s * s).sum();
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("k,singular_value,weight\n");
            for (k, s) in r.singular_values.iter().enumerate() {
                writeln!(out, "{k},{},{}", num(*s), num(s * s / total)).unwrap();
            }
        }
        Format::Plot => {
            out.push_str("# k weight\n");
            for (k, s) in r.singular_values.iter().enumerate() {
                writeln!(out, "{k} {}", num(s * s / total)).unwrap();
            }
        }
        Format::Json => {
            let mut body = Map::new();
            body.insert("singular_values".into(), json!(r.singular_values));
            body.insert("entropy".into(), r.entropy.into());
            out = document(scenario, body);
        }
    }
    out
}
