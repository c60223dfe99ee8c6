//! Planar (one transverse dimension) waveguide coupling.
//!
//! Mode `n` of the source guide feeds mode `n'` of the target guide with
//! amplitude `⟨n|n'⟩ = ∫ψ(x,n,ω,c)ψ(x,n',ω',c+d)dx` and power fraction
//! `P_n^{n'} = ⟨n|n'⟩²`.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::hermite::{
    build_kernel, check_index, hermite_function, scaled_hermite_table, OscillatorFrame,
    TargetColumns, MAX_MODE_INDEX,
};
use crate::quadrature::gauss_hermite;

/// Default tail tolerance for adaptive spectra.
pub const DEFAULT_EPSILON: f64 = 1e-8;

/// Mode `n` of `source` launched into `target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition1D {
    pub source: OscillatorFrame,
    pub target: OscillatorFrame,
    pub n: usize,
}

impl Transition1D {
    pub fn new(source: OscillatorFrame, target: OscillatorFrame, n: usize) -> Result<Self> {
        check_index(n, MAX_MODE_INDEX)?;
        Ok(Self { source, target, n })
    }

    /// `target.center − source.center`.
    pub fn displacement(&self) -> f64 {
        self.target.center() - self.source.center()
    }
}

/// Closed-form amplitude from the scaled two-index Hermite table.
pub fn overlap_closed(t: &Transition1D, n_prime: usize) -> Result<f64> {
    check_index(n_prime, MAX_MODE_INDEX)?;
    let kernel = build_kernel(&t.source, &t.target);
    let table = scaled_hermite_table(&kernel, t.n, n_prime)?;
    Ok(kernel.prefactor * table.get(t.n, n_prime))
}

/// Amplitude by Gauss–Hermite quadrature of the overlap integral.
///
/// The product of the two Gaussians is a single Gaussian centred at
/// `x̄ = c + d·l²/(l²+l'²)` with width `s = l·l'/√(l²+l'²)`; with
/// `x = x̄ + √2·s·t` the integrand becomes a degree-`n+n'` polynomial times
/// `e^{-t²}`, integrated exactly by `⌈(n+n')/2⌉ + 8` nodes.
pub fn overlap_quad(t: &Transition1D, n_prime: usize) -> Result<f64> {
    check_index(n_prime, MAX_MODE_INDEX)?;
    let (l, lp) = (t.source.length(), t.target.length());
    let sum = l * l + lp * lp;
    let center = t.source.center() + t.displacement() * l * l / sum;
    let width = l * lp / sum.sqrt();
    let order = (t.n + n_prime).div_ceil(2) + 8;
    let rule = gauss_hermite(order)?;
    let (root, root_p) = (t.source.omega().sqrt(), t.target.omega().sqrt());
    let total: f64 = rule
        .nodes()
        .iter()
        .zip(rule.scaled_weights())
        .map(|(&node, &w)| {
            let x = center + SQRT_2 * width * node;
            let a = hermite_function(t.n, (x - t.source.center()) * root, 0.0);
            let b = hermite_function(n_prime, (x - t.target.center()) * root_p, 0.0);
            w * a * b
        })
        .sum();
    Ok(SQRT_2 * width * (root * root_p).sqrt() * total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub n_prime: usize,
    pub amplitude: f64,
    pub probability: f64,
}

/// Amplitudes and probabilities over final modes `0..=cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub initial: usize,
    pub entries: Vec<SpectrumEntry>,
    pub captured_mass: f64,
    pub cutoff: usize,
    pub epsilon: f64,
}

impl Spectrum {
    /// Most probable final mode; the smallest index wins ties.
    pub fn argmax(&self) -> Option<&SpectrumEntry> {
        self.entries.iter().fold(None, |best, e| match best {
            Some(b) if b.probability >= e.probability => Some(b),
            _ => Some(e),
        })
    }

    pub fn probability(&self, n_prime: usize) -> Option<f64> {
        self.entries.get(n_prime).map(|e| e.probability)
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")))
    }
}

/// Probabilities `P_n^{n'}` for `n' = 0, 1, …` until the captured mass
/// reaches `1 − epsilon`.
///
/// The table is streamed one target column at a time, so each extra `n'`
/// costs `O(n)`. Hitting `cap` first returns [`Error::PartialSpectrum`]
/// carrying everything computed so far.
pub fn spectrum1d(t: &Transition1D, epsilon: f64, cap: usize) -> Result<Spectrum> {
    check_epsilon(epsilon)?;
    check_index(cap, MAX_MODE_INDEX)?;
    check_index(t.n, cap)?;
    let kernel = build_kernel(&t.source, &t.target);
    let mut columns = TargetColumns::new(&kernel, t.n)?;
    let mut spectrum = Spectrum {
        initial: t.n,
        entries: Vec::new(),
        captured_mass: 0.0,
        cutoff: 0,
        epsilon,
    };
    loop {
        let n_prime = columns.next_index();
        if n_prime > cap {
            return Err(Error::PartialSpectrum {
                cap,
                spectrum: Box::new(spectrum),
            });
        }
        let amplitude = kernel.prefactor * columns.next_column()?[t.n];
        let probability = amplitude * amplitude;
        spectrum.captured_mass += probability;
        spectrum.cutoff = n_prime;
        spectrum.entries.push(SpectrumEntry {
            n_prime,
            amplitude,
            probability,
        });
        if spectrum.captured_mass >= 1.0 - epsilon {
            return Ok(spectrum);
        }
    }
}

/// Amplitudes `⟨n|n'⟩` for `n ≤ rows_max`, `n' ≤ cols_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    pub rows_max: usize,
    pub cols_max: usize,
    values: Vec<f64>,
    /// `max_{i,j} |Σ_k ⟨i|k⟩⟨j|k⟩ − δ_ij|` over the computed rows.
    pub orthogonality_defect: f64,
}

impl CouplingMatrix {
    pub fn get(&self, n: usize, n_prime: usize) -> f64 {
        self.values[n * (self.cols_max + 1) + n_prime]
    }

    pub fn row(&self, n: usize) -> &[f64] {
        let cols = self.cols_max + 1;
        &self.values[n * cols..(n + 1) * cols]
    }

    /// More source rows than target columns: rows cannot all be complete.
    pub fn undersized(&self) -> bool {
        self.rows_max > self.cols_max
    }
}

pub fn coupling_matrix(
    source: &OscillatorFrame,
    target: &OscillatorFrame,
    rows_max: usize,
    cols_max: usize,
) -> Result<CouplingMatrix> {
    let kernel = build_kernel(source, target);
    let table = scaled_hermite_table(&kernel, rows_max, cols_max)?;
    let values: Vec<f64> = (0..=rows_max)
        .flat_map(|n| table.row(n).iter().map(|h| kernel.prefactor * h).collect::<Vec<_>>())
        .collect();
    let cols = cols_max + 1;
    let mut defect: f64 = 0.0;
    for i in 0..=rows_max {
        for j in i..=rows_max {
            let dot: f64 = values[i * cols..(i + 1) * cols]
                .iter()
                .zip(&values[j * cols..(j + 1) * cols])
                .map(|(a, b)| a * b)
                .sum();
            let delta = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((dot - delta).abs());
        }
    }
    Ok(CouplingMatrix {
        rows_max,
        cols_max,
        values,
        orthogonality_defect: defect,
    })
}

/// A vertical transition at `transition_point` and the level it lands on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcCandidate {
    pub transition_point: f64,
    /// `U'(x*)/ω' − 1/2` before rounding.
    pub raw_level: f64,
    pub level: usize,
}

/// Semiclassical estimate with the branch that was not used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcEstimate {
    pub chosen: FcCandidate,
    /// The far turning point, for excited initial modes.
    pub alternate: Option<FcCandidate>,
}

impl FcEstimate {
    pub fn level(&self) -> usize {
        self.chosen.level
    }
}

/// Vertical-transition (Franck–Condon) estimate of the most probable final
/// mode.
///
/// The ground state jumps from its density maximum at the source centre; an
/// excited mode `n` jumps from the classical turning point
/// `±√((2n+1)/ω)` nearer the target centre. The landing level solves
/// `ω'(n' + 1/2) = ω'²(x* − c')²/2`, rounded and clamped at 0.
pub fn fc_estimate_detail(t: &Transition1D) -> FcEstimate {
    let land = |x: f64| {
        let offset = x - t.target.center();
        let w = t.target.omega();
        let raw_level = 0.5 * w * w * offset * offset / w - 0.5;
        FcCandidate {
            transition_point: x,
            raw_level,
            level: raw_level.round().max(0.0) as usize,
        }
    };
    let c = t.source.center();
    if t.n == 0 {
        return FcEstimate {
            chosen: land(c),
            alternate: None,
        };
    }
    let reach = ((2 * t.n + 1) as f64 / t.source.omega()).sqrt();
    let (plus, minus) = (land(c + reach), land(c - reach));
    let target = t.target.center();
    if (c + reach - target).abs() <= (c - reach - target).abs() {
        FcEstimate {
            chosen: plus,
            alternate: Some(minus),
        }
    } else {
        FcEstimate {
            chosen: minus,
            alternate: Some(plus),
        }
    }
}

pub fn fc_estimate(t: &Transition1D) -> usize {
    fc_estimate_detail(t).level()
}
