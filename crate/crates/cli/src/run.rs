use std::time::Instant;

use serde_json::{Map, Value};

use selfoc::{
    coupled_tensor, coupling_matrix, fc_estimate_detail, schmidt_report, spectrum1d,
    spectrum2d_separable, CouplingTensor, Error, FcCandidate, OscillatorFrame, Transition1D, Waveguide2D,
};

use crate::args::{Channel1d, Command, Common, Guides2d};
use crate::emit::{self, num};
use crate::report::RunReport;
use crate::{CliError, EXIT_CAP, EXIT_OK};

/// Emitted data, the report for standard error, and the exit code.
pub struct Outcome {
    pub data: String,
    pub report: RunReport,
    pub code: u8,
}

struct Axis {
    omega: f64,
    omega_prime: f64,
    d: f64,
}

fn axis(
    suffix: &str,
    raw: (Option<f64>, Option<f64>, Option<f64>),
    ratio: Option<f64>,
    big_d: Option<f64>,
) -> Result<Axis, CliError> {
    let raw_given = raw.0.is_some() || raw.1.is_some() || raw.2.is_some();
    let dimensionless = ratio.is_some() || big_d.is_some();
    if raw_given && dimensionless {
        return Err(CliError::invalid(format!(
            "--ratio{suffix}/--D{suffix} cannot be combined with --omega{suffix}/--omega-prime{suffix}/--d{suffix}"
        )));
    }
    if dimensionless {
        let ratio = ratio.ok_or_else(|| CliError::invalid(format!("--D{suffix} needs --ratio{suffix}")))?;
        let big_d = big_d.unwrap_or(0.0);
        if !(big_d >= 0.0 && big_d.is_finite()) {
            return Err(CliError::invalid(format!("--D{suffix} must be finite and >= 0, got {big_d}")));
        }
        return Ok(Axis {
            omega: 1.0,
            omega_prime: ratio,
            d: big_d.sqrt(),
        });
    }
    let omega_prime = raw
        .1
        .ok_or_else(|| CliError::invalid(format!("missing --omega-prime{suffix} (or --ratio{suffix})")))?;
    Ok(Axis {
        omega: raw.0.unwrap_or(1.0),
        omega_prime,
        d: raw.2.unwrap_or(0.0),
    })
}

fn channel(c: &Channel1d) -> Result<Axis, CliError> {
    axis("", (c.omega, c.omega_prime, c.d), c.ratio, c.big_d)
}

fn transition(c: &Channel1d) -> Result<(Transition1D, Axis), CliError> {
    let a = channel(c)?;
    let t = Transition1D::new(
        OscillatorFrame::centered(a.omega).map_err(|e| flag_error("--omega", e))?,
        OscillatorFrame::new(a.omega_prime, a.d).map_err(|e| flag_error("--omega-prime", e))?,
        c.n,
    )?;
    Ok((t, a))
}

fn flag_error(flag: &str, e: Error) -> CliError {
    CliError::invalid(format!("{flag}: {e}"))
}

fn guides(g: &Guides2d) -> Result<(Waveguide2D, Waveguide2D, Axis, Axis), CliError> {
    let x = axis("-x", (g.omega_x, g.omega_prime_x, g.d_x), g.ratio_x, g.big_d_x)?;
    let y = axis("-y", (g.omega_y, g.omega_prime_y, g.d_y), g.ratio_y, g.big_d_y)?;
    let source = Waveguide2D::new(x.omega, y.omega, g.gamma, (0.0, 0.0)).map_err(|e| flag_error("--gamma", e))?;
    let target = Waveguide2D::new(x.omega_prime, y.omega_prime, g.gamma_prime, (x.d, y.d))
        .map_err(|e| flag_error("--gamma-prime", e))?;
    Ok((source, target, x, y))
}

fn echo_common(m: &mut Map<String, Value>, c: &Common) {
    m.insert("eps".into(), c.eps.into());
    m.insert("cap".into(), c.cap.into());
}

fn echo_axis(m: &mut Map<String, Value>, suffix: &str, a: &Axis) {
    m.insert(format!("omega{suffix}"), a.omega.into());
    m.insert(format!("omega_prime{suffix}"), a.omega_prime.into());
    m.insert(format!("d{suffix}"), a.d.into());
}

fn echo_guides(m: &mut Map<String, Value>, g: &Guides2d, x: &Axis, y: &Axis) {
    echo_axis(m, "_x", x);
    echo_axis(m, "_y", y);
    m.insert("gamma".into(), g.gamma.into());
    m.insert("gamma_prime".into(), g.gamma_prime.into());
    m.insert("nx".into(), g.nx.into());
    m.insert("ny".into(), g.ny.into());
}

/// The tensor, or the partial tensor and a warning when the cap was hit.
fn tensor_result(r: selfoc::Result<CouplingTensor>) -> Result<(CouplingTensor, Option<String>), CliError> {
    match r {
        Ok(t) => Ok((t, None)),
        Err(e) => {
            let message = e.to_string();
            match e {
                Error::PartialTensor { tensor, .. } => Ok((*tensor, Some(message))),
                e => Err(e.into()),
            }
        }
    }
}

fn tensor_report(report: &mut RunReport, t: &CouplingTensor) {
    report.captured_mass = Some(t.captured_mass);
    if let Some(((i, j), a)) = t.argmax() {
        report.argmax = Some(format!("nx_prime={i} ny_prime={j} probability={}", num(a * a)));
    }
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let common = command.common();
    let start = Instant::now();
    let mut scenario = Map::new();
    let mut report = RunReport::default();
    let mut code = EXIT_OK;
    let data = match command {
        Command::Spectrum1d { channel: c, .. } => {
            let (t, a) = transition(c)?;
            report.kind = "spectrum1d";
            echo_axis(&mut scenario, "", &a);
            scenario.insert("n".into(), c.n.into());
            echo_common(&mut scenario, common);
            let (s, warning) = match spectrum1d(&t, common.eps, common.cap) {
                Ok(s) => (s, None),
                Err(e) => {
                    let message = e.to_string();
                    match e {
                        Error::PartialSpectrum { spectrum, .. } => (*spectrum, Some(message)),
                        e => return Err(e.into()),
                    }
                }
            };
            if let Some(w) = warning {
                report.warnings.push(w);
                code = EXIT_CAP;
            }
            report.captured_mass = Some(s.captured_mass);
            if let Some(e) = s.argmax() {
                report.argmax = Some(format!("n_prime={} probability={}", e.n_prime, num(e.probability)));
            }
            emit::spectrum(&s, common.format, &scenario)
        }
        Command::Spectrum2d { guides: g, .. } | Command::Coupled2d { guides: g, .. } => {
            let (source, target, x, y) = guides(g)?;
            let coupled = matches!(command, Command::Coupled2d { .. });
            report.kind = if coupled { "coupled2d" } else { "spectrum2d" };
            echo_guides(&mut scenario, g, &x, &y);
            echo_common(&mut scenario, common);
            let r = if coupled {
                coupled_tensor(&source, &target, g.nx, g.ny, common.eps, common.cap)
            } else {
                spectrum2d_separable(&source, &target, g.nx, g.ny, common.eps, common.cap)
            };
            let (t, warning) = tensor_result(r)?;
            if let Some(w) = warning {
                report.warnings.push(w);
                code = EXIT_CAP;
            }
            if coupled {
                report
                    .warnings
                    .push("final indices label target normal modes (u, v), u turning into x as gamma' -> 0".into());
            }
            tensor_report(&mut report, &t);
            emit::tensor(&t, common.format, &scenario)
        }
        Command::Matrix {
            channel: c,
            n_max,
            n_prime_max,
            ..
        } => {
            let a = channel(c)?;
            report.kind = "matrix";
            echo_axis(&mut scenario, "", &a);
            scenario.insert("n_max".into(), (*n_max).into());
            scenario.insert("n_prime_max".into(), (*n_prime_max).into());
            echo_common(&mut scenario, common);
            if *n_prime_max > common.cap {
                return Err(CliError::invalid(format!(
                    "--n-prime-max {n_prime_max} exceeds --cap {}",
                    common.cap
                )));
            }
            let source = OscillatorFrame::centered(a.omega).map_err(|e| flag_error("--omega", e))?;
            let target = OscillatorFrame::new(a.omega_prime, a.d).map_err(|e| flag_error("--omega-prime", e))?;
            let m = coupling_matrix(&source, &target, *n_max, *n_prime_max)?;
            if m.undersized() {
                report
                    .warnings
                    .push(format!("--n-max {n_max} exceeds --n-prime-max {n_prime_max}: rows cannot be complete"));
            }
            let rows = emit::row_summary(&m);
            let lowest = rows.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
            report.captured_mass = Some(lowest);
            if lowest < 1.0 - common.eps {
                report.warnings.push(format!(
                    "least captured row mass {} is below 1 - eps; raise --n-prime-max",
                    num(lowest)
                ));
            }
            let mut best = (0, 0, -1.0);
            for n in 0..=m.rows_max {
                for (k, &v) in m.row(n).iter().enumerate() {
                    if v * v > best.2 {
                        best = (n, k, v * v);
                    }
                }
            }
            report.argmax = Some(format!("n={} n_prime={} probability={}", best.0, best.1, num(best.2)));
            report.extra.push(("orthogonality_defect", num(m.orthogonality_defect)));
            emit::matrix(&m, common.format, &scenario)
        }
        Command::FcEstimate { channel: c, .. } => {
            let (t, a) = transition(c)?;
            report.kind = "fc-estimate";
            echo_axis(&mut scenario, "", &a);
            scenario.insert("n".into(), c.n.into());
            let e = fc_estimate_detail(&t);
            let branch = |c: &FcCandidate| {
                format!("x*={} raw={} level={}", num(c.transition_point), num(c.raw_level), c.level)
            };
            report.extra.push(("chosen_branch", branch(&e.chosen)));
            if let Some(alt) = &e.alternate {
                report.extra.push(("alternate_branch", branch(alt)));
            }
            emit::fc(&e, common.format, &scenario)
        }
        Command::Entropy { guides: g, .. } => {
            let (source, target, x, y) = guides(g)?;
            report.kind = "entropy";
            echo_guides(&mut scenario, g, &x, &y);
            echo_common(&mut scenario, common);
            let r = if g.gamma == 0.0 && g.gamma_prime == 0.0 {
                spectrum2d_separable(&source, &target, g.nx, g.ny, common.eps, common.cap)
            } else {
                coupled_tensor(&source, &target, g.nx, g.ny, common.eps, common.cap)
            };
            let (t, warning) = tensor_result(r)?;
            if let Some(w) = warning {
                report.warnings.push(w);
                code = EXIT_CAP;
            }
            tensor_report(&mut report, &t);
            let s = schmidt_report(&t)?;
            report.extra.push(("entropy", num(s.entropy)));
            report.extra.push(("schmidt_rank", s.rank(1e-10).to_string()));
            emit::schmidt(&s, common.format, &scenario)
        }
    };
    report.scenario = scenario;
    report.wall_time = start.elapsed();
    Ok(Outcome { data, report, code })
}
