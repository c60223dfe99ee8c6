//! Hermite polynomials, oscillator eigenfunctions and the scaled two-index
//! Hermite table.
//!
//! The overlap of mode `n` of a source oscillator (length `l`, centred at 0)
//! with mode `m` of a target oscillator (length `l'`, centred at `d`) is
//!
//! ```text
//! ⟨n|m⟩ = prefactor · H^R_{nm}(y) / √(2^{n+m} n! m!)
//! ```
//!
//! where `H^R_{nm}` is generated by `exp(aᵀRy − ½aᵀRa)`. The factorials are
//! never formed: [`ScaledHermiteTable`] stores the quotient directly and is
//! filled by two three-term recurrences, one stepping `n` and one stepping `m`.

use std::f64::consts::PI;

use crate::dd::Dd;
use crate::error::{Error, Result};

/// Hard cap on any mode index.
pub const MAX_MODE_INDEX: usize = 4096;

/// Mantissa bound above which the normalized recurrences rescale.
const RESCALE_AT: f64 = 1e150;

pub(crate) fn check_index(index: usize, cap: usize) -> Result<()> {
    if index > cap.min(MAX_MODE_INDEX) {
        Err(Error::IndexOverflow {
            index,
            cap: cap.min(MAX_MODE_INDEX),
        })
    } else {
        Ok(())
    }
}

/// Physicists' Hermite polynomial `H_n(ξ)` via `H_{k+1} = 2ξH_k − 2kH_{k−1}`.
pub fn hermite_phys(n: usize, xi: f64) -> Result<f64> {
    check_index(n, MAX_MODE_INDEX)?;
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * xi;
    for k in 1..n {
        let next = 2.0 * xi * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// One transverse harmonic channel: frequency `ω` and centre `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorFrame {
    omega: f64,
    center: f64,
}

impl OscillatorFrame {
    pub fn new(omega: f64, center: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::invalid("omega", format!("must be finite and > 0, got {omega}")));
        }
        if !center.is_finite() {
            return Err(Error::invalid("center", format!("must be finite, got {center}")));
        }
        Ok(Self { omega, center })
    }

    /// Frame centred at the origin.
    pub fn centered(omega: f64) -> Result<Self> {
        Self::new(omega, 0.0)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    /// Characteristic length `l = ω^(-1/2)`.
    pub fn length(&self) -> f64 {
        self.omega.powf(-0.5)
    }
}

/// Normalized Hermite functions `φ_k(ξ) · e^{offset}` for `k = 0..=n_max`.
///
/// `φ_k(ξ) = (2^k k! √π)^{-1/2} H_k(ξ) e^{-ξ²/2}` is built from the Gaussian-free
/// orthonormal polynomials `q_k` with a running logarithmic scale, so neither
/// the polynomial growth nor the Gaussian decay under- or overflows before the
/// two are combined. `log_offset` lets quadrature callers fold a weight
/// compensation into the same exponent.
pub(crate) fn hermite_functions(n_max: usize, xi: f64, log_offset: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let base = log_offset - 0.5 * xi * xi;
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    out.push(cur * base.exp());
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
        out.push(cur * (base + log_scale).exp());
    }
    out
}

/// Single normalized Hermite function `φ_n(ξ)`.
pub(crate) fn hermite_function(n: usize, xi: f64, log_offset: f64) -> f64 {
    let base = log_offset - 0.5 * xi * xi;
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur /= RESCALE_AT;
            prev /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
    }
    cur * (base + log_scale).exp()
}

/// Oscillator eigenfunction `ψ(x, n, ω, d)` with `ħ = m = 1`.
///
/// The leading Hermite coefficient is positive, so `ψ(x, n) > 0` for `x`
/// beyond the last node on the right.
pub fn oscillator_psi(x: f64, n: usize, frame: &OscillatorFrame) -> Result<f64> {
    check_index(n, MAX_MODE_INDEX)?;
    let root = frame.omega.sqrt();
    let xi = (x - frame.center) * root;
    Ok(root.sqrt() * hermite_function(n, xi, 0.0))
}

/// The matrix `R`, vector `y` and scalar prefactor of the closed-form overlap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapKernel {
    pub r: [[f64; 2]; 2],
    pub y: [f64; 2],
    pub prefactor: f64,
    pub l: f64,
    pub l_prime: f64,
    /// `target.center − source.center`.
    pub displacement: f64,
    steps: Steps,
}

impl OverlapKernel {
    /// `R·y`, the linear coefficients of the generating function.
    pub fn ry(&self) -> [f64; 2] {
        [self.steps.ry[0].to_f64(), self.steps.ry[1].to_f64()]
    }
}

/// Kernel for the transition `source → target`.
///
/// `y = (d·l/(l²+l'²)) · (1, −l'/l)`. Its overall sign is the one that makes
/// the table reproduce `∫ψ_source ψ_target dx` with the positive-leading-
/// coefficient convention for both modes.
pub fn build_kernel(source: &OscillatorFrame, target: &OscillatorFrame) -> OverlapKernel {
    // R and y in double-double from the exact inputs; l² = 1/ω
    let l_sq = Dd::ONE / Dd::from_f64(source.omega);
    let lp_sq = Dd::ONE / Dd::from_f64(target.omega);
    let l = l_sq.sqrt();
    let lp = lp_sq.sqrt();
    let d = Dd::from_f64(target.center) - Dd::from_f64(source.center);
    let sum = l_sq + lp_sq;
    let two = Dd::from_f64(2.0);
    let diag = two * (l_sq - lp_sq) / sum;
    let off = -(two * two * l * lp / sum);
    let y = [d * l / sum, -(d * lp / sum)];
    let ry = [diag * y[0] + off * y[1], off * y[0] - diag * y[1]];
    let (l, lp, d, sum) = (l.to_f64(), lp.to_f64(), d.to_f64(), sum.to_f64());
    OverlapKernel {
        r: [[diag.to_f64(), off.to_f64()], [off.to_f64(), -diag.to_f64()]],
        y: [y[0].to_f64(), y[1].to_f64()],
        prefactor: (2.0 * l * lp / sum).sqrt() * (-d * d / (2.0 * sum)).exp(),
        l,
        l_prime: lp,
        displacement: d,
        steps: Steps {
            r: [[diag, off], [off, -diag]],
            ry,
        },
    }
}

/// Table order for [`ScaledHermiteTable::build`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Row 0 by the `m`-step, every other entry by the `n`-step.
    Rows,
    /// Column 0 by the `n`-step, every other entry by the `m`-step.
    Columns,
}

/// `h[n][m] = H^R_{nm}(y) / √(2^{n+m} n! m!)` for `n ≤ n_max`, `m ≤ m_max`.
///
/// Entries are accumulated in double-double and rounded once on storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledHermiteTable {
    n_max: usize,
    m_max: usize,
    data: Vec<f64>,
}

impl ScaledHermiteTable {
    pub fn build(kernel: &OverlapKernel, n_max: usize, m_max: usize, sweep: Sweep) -> Result<Self> {
        check_index(n_max, MAX_MODE_INDEX)?;
        check_index(m_max, MAX_MODE_INDEX)?;
        let cols = m_max + 1;
        let mut data = vec![0.0; (n_max + 1) * cols];
        match sweep {
            Sweep::Columns => {
                let mut stream = TargetColumns::new(kernel, n_max)?;
                for m in 0..=m_max {
                    let column = stream.next_column()?;
                    for (n, v) in column.iter().enumerate() {
                        data[n * cols + m] = *v;
                    }
                }
            }
            Sweep::Rows => {
                let steps = kernel.steps;
                let roots = Roots::new(n_max.max(m_max) + 1);
                let mut exact = vec![Dd::ZERO; (n_max + 1) * cols];
                exact[0] = Dd::ONE;
                for m in 0..m_max {
                    let lower = if m > 0 { exact[m - 1] } else { Dd::ZERO };
                    exact[m + 1] = steps.target(&roots, 0, m, exact[m], lower, Dd::ZERO);
                }
                for n in 0..n_max {
                    for m in 0..=m_max {
                        let lower = if n > 0 { exact[(n - 1) * cols + m] } else { Dd::ZERO };
                        let side = if m > 0 { exact[n * cols + m - 1] } else { Dd::ZERO };
                        exact[(n + 1) * cols + m] =
                            steps.source(&roots, n, m, exact[n * cols + m], lower, side);
                    }
                }
                if let Some(i) = exact.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NumericOverflow {
                        n: i / cols,
                        m: i % cols,
                    });
                }
                for (slot, v) in data.iter_mut().zip(&exact) {
                    *slot = v.to_f64();
                }
            }
        }
        Ok(Self { n_max, m_max, data })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn get(&self, n: usize, m: usize) -> f64 {
        assert!(n <= self.n_max && m <= self.m_max, "index ({n}, {m}) outside table");
        self.data[n * (self.m_max + 1) + m]
    }

    /// Row `n` as a slice over `m = 0..=m_max`.
    pub fn row(&self, n: usize) -> &[f64] {
        let cols = self.m_max + 1;
        &self.data[n * cols..(n + 1) * cols]
    }
}

/// Column-swept table, the order used by the spectrum builders.
pub fn scaled_hermite_table(
    kernel: &OverlapKernel,
    n_max: usize,
    m_max: usize,
) -> Result<ScaledHermiteTable> {
    ScaledHermiteTable::build(kernel, n_max, m_max, Sweep::Columns)
}

/// `√(k/2)` and `1/√(2(k+1))` in double-double.
#[derive(Debug, Clone)]
struct Roots {
    half: Vec<Dd>,
    inv_step: Vec<Dd>,
}

impl Roots {
    fn new(len: usize) -> Self {
        let mut roots = Self {
            half: Vec::with_capacity(len),
            inv_step: Vec::with_capacity(len),
        };
        roots.extend_to(len);
        roots
    }

    fn extend_to(&mut self, len: usize) {
        for k in self.half.len()..len {
            let kf = k as f64;
            self.half.push(Dd::from_f64(kf / 2.0).sqrt());
            self.inv_step
                .push(Dd::ONE / Dd::from_f64(2.0 * (kf + 1.0)).sqrt());
        }
    }
}

/// Coefficients of the two scaled recurrences.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Steps {
    r: [[Dd; 2]; 2],
    ry: [Dd; 2],
}

impl Steps {
    /// `h[n+1][m]` from `h[n][m]`, `h[n−1][m]` and `h[n][m−1]`.
    #[inline]
    fn source(&self, roots: &Roots, n: usize, m: usize, here: Dd, lower: Dd, side: Dd) -> Dd {
        (self.ry[0] * here - self.r[0][0] * roots.half[n] * lower - self.r[0][1] * roots.half[m] * side)
            * roots.inv_step[n]
    }

    /// `h[n][m+1]` from `h[n][m]`, `h[n][m−1]` and `h[n−1][m]`.
    #[inline]
    fn target(&self, roots: &Roots, n: usize, m: usize, here: Dd, lower: Dd, side: Dd) -> Dd {
        (self.ry[1] * here - self.r[1][1] * roots.half[m] * lower - self.r[1][0] * roots.half[n] * side)
            * roots.inv_step[m]
    }
}

/// Streams table columns `h[0..=n_max][m]` for `m = 0, 1, 2, …` keeping only
/// the last two, so spectra can extend the target index until a mass target
/// is met without fixing `m_max` up front.
#[derive(Debug, Clone)]
pub(crate) struct TargetColumns {
    steps: Steps,
    roots: Roots,
    n_max: usize,
    m: usize,
    prev: Vec<Dd>,
    cur: Vec<Dd>,
    out: Vec<f64>,
}

impl TargetColumns {
    pub(crate) fn new(kernel: &OverlapKernel, n_max: usize) -> Result<Self> {
        check_index(n_max, MAX_MODE_INDEX)?;
        Ok(Self {
            steps: kernel.steps,
            roots: Roots::new(n_max + 1),
            n_max,
            m: 0,
            prev: Vec::new(),
            cur: Vec::new(),
            out: vec![0.0; n_max + 1],
        })
    }

    /// Index of the column the next call returns.
    pub(crate) fn next_index(&self) -> usize {
        self.m
    }

    pub(crate) fn next_column(&mut self) -> Result<&[f64]> {
        let m = self.m;
        check_index(m, MAX_MODE_INDEX)?;
        self.roots.extend_to(m + 1);
        let mut next = vec![Dd::ZERO; self.n_max + 1];
        if m == 0 {
            next[0] = Dd::ONE;
            for n in 0..self.n_max {
                let lower = if n > 0 { next[n - 1] } else { Dd::ZERO };
                next[n + 1] = self.steps.source(&self.roots, n, 0, next[n], lower, Dd::ZERO);
            }
        } else {
            for n in 0..=self.n_max {
                let lower = if m > 1 { self.prev[n] } else { Dd::ZERO };
                let side = if n > 0 { self.cur[n - 1] } else { Dd::ZERO };
                next[n] = self.steps.target(&self.roots, n, m - 1, self.cur[n], lower, side);
            }
        }
        if let Some(n) = next.iter().position(|v| !v.is_finite()) {
            return Err(Error::NumericOverflow { n, m });
        }
        for (slot, v) in self.out.iter_mut().zip(&next) {
            *slot = v.to_f64();
        }
        self.prev = std::mem::replace(&mut self.cur, next);
        self.m += 1;
        Ok(&self.out)
    }
}
