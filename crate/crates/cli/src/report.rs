use std::fmt;
use std::time::Duration;

use serde_json::{Map, Value};

/// Run summary written to standard error.
#[derive(Debug, Default)]
pub struct RunReport {
    pub kind: &'static str,
    pub scenario: Map<String, Value>,
    pub captured_mass: Option<f64>,
    pub argmax: Option<String>,
    pub extra: Vec<(&'static str, String)>,
    pub warnings: Vec<String>,
    pub wall_time: Duration,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scenario: {}", self.kind)?;
        for (k, v) in &self.scenario {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        if let Some(m) = self.captured_mass {
            writeln!(f, "captured_mass: {}", crate::emit::num(m))?;
        }
        if let Some(a) = &self.argmax {
            writeln!(f, "argmax: {a}")?;
        }
        for (k, v) in &self.extra {
            writeln!(f, "{k}: {v}")?;
        }
        writeln!(f, "wall_time: {:.6} s", self.wall_time.as_secs_f64())?;
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}
