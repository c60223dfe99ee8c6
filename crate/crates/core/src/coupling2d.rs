//! Elliptic (two transverse dimensions) waveguides.
//!
//! The potential is `U = ½(ωx²x² + ωy²y² + γxy)` about the guide centre.
//! With `γ = 0` the modes are products of 1D modes and the coupling factorizes
//! into two planar problems. With `γ ≠ 0` the modes are products along the
//! normal axes of the quadratic form, and overlaps are computed by tensor
//! Gauss–Hermite quadrature.

use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;

use crate::coupling1d::Transition1D;
use crate::error::{Error, Result};
use crate::hermite::{
    build_kernel, check_index, hermite_function, hermite_functions, OscillatorFrame, TargetColumns,
    MAX_MODE_INDEX,
};
use crate::quadrature::gauss_hermite;

/// Largest initial mode index accepted when the source guide is cross-coupled.
pub const MAX_COUPLED_SOURCE_INDEX: usize = 10;

const INITIAL_SIDE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waveguide2D {
    omega_x: f64,
    omega_y: f64,
    gamma: f64,
    center: (f64, f64),
}

impl Waveguide2D {
    pub fn new(omega_x: f64, omega_y: f64, gamma: f64, center: (f64, f64)) -> Result<Self> {
        for (name, w) in [("omega_x", omega_x), ("omega_y", omega_y)] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::invalid(name, format!("must be finite and > 0, got {w}")));
            }
        }
        if !gamma.is_finite() {
            return Err(Error::invalid("gamma", "must be finite"));
        }
        if !(center.0.is_finite() && center.1.is_finite()) {
            return Err(Error::invalid("center", "must be finite"));
        }
        let bound = 4.0 * omega_x * omega_x * omega_y * omega_y;
        if gamma * gamma >= bound {
            return Err(Error::NotPositiveDefinite {
                gamma_sq: gamma * gamma,
                bound,
            });
        }
        Ok(Self {
            omega_x,
            omega_y,
            gamma,
            center,
        })
    }

    /// Axis-aligned guide (`γ = 0`).
    pub fn aligned(omega_x: f64, omega_y: f64, center: (f64, f64)) -> Result<Self> {
        Self::new(omega_x, omega_y, 0.0, center)
    }

    pub fn omega_x(&self) -> f64 {
        self.omega_x
    }

    pub fn omega_y(&self) -> f64 {
        self.omega_y
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    /// The matrix `A` of `U = ½ rᵀ A r`.
    pub fn form(&self) -> [[f64; 2]; 2] {
        [
            [self.omega_x * self.omega_x, 0.5 * self.gamma],
            [0.5 * self.gamma, self.omega_y * self.omega_y],
        ]
    }

    fn axis_frames(&self) -> Result<(OscillatorFrame, OscillatorFrame)> {
        Ok((
            OscillatorFrame::new(self.omega_x, self.center.0)?,
            OscillatorFrame::new(self.omega_y, self.center.1)?,
        ))
    }
}

/// Normal axes of a guide: `u = cos θ·x + sin θ·y`, `v = −sin θ·x + cos θ·y`
/// (coordinates relative to the guide centre), with frequencies `Ω_u`, `Ω_v`.
///
/// `θ ∈ (−π/4, π/4]`, so `u` is the axis that turns into `x` as `γ → 0`; mode
/// indices `(k_u, k_v)` therefore reduce to `(n_x, n_y)` for an aligned guide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModes {
    pub theta: f64,
    pub omega_u: f64,
    pub omega_v: f64,
}

impl NormalModes {
    /// Rotation taking `(x, y)` to `(u, v)`.
    pub fn rotation(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.theta.sin_cos();
        [[c, s], [-s, c]]
    }

    pub fn omega_plus(&self) -> f64 {
        self.omega_u.max(self.omega_v)
    }

    pub fn omega_minus(&self) -> f64 {
        self.omega_u.min(self.omega_v)
    }
}

/// Eigenvalues of `[[a, b], [b, c]]` along the axes rotated by `theta`.
fn rotated_diagonal(a: f64, b: f64, c: f64, theta: f64) -> (f64, f64, f64) {
    let (s, co) = theta.sin_cos();
    let along_u = a * co * co + 2.0 * b * s * co + c * s * s;
    let along_v = a * s * s - 2.0 * b * s * co + c * co * co;
    let residual = (c - a) * s * co + b * (co * co - s * s);
    (along_u, along_v, residual)
}

pub fn normal_modes(w: &Waveguide2D) -> Result<NormalModes> {
    let [[a, b], [_, c]] = w.form();
    let theta = if a == c {
        if b == 0.0 {
            0.0
        } else {
            FRAC_PI_4
        }
    } else {
        0.5 * (2.0 * b / (a - c)).atan()
    };
    let (along_u, along_v, residual) = rotated_diagonal(a, b, c, theta);
    if !(along_u > 0.0 && along_v > 0.0) {
        return Err(Error::NotPositiveDefinite {
            gamma_sq: w.gamma * w.gamma,
            bound: 4.0 * a * c,
        });
    }
    debug_assert!(residual.abs() <= 1e-12 * a.max(c), "off-diagonal residual {residual}");
    Ok(NormalModes {
        theta,
        omega_u: along_u.sqrt(),
        omega_v: along_v.sqrt(),
    })
}

/// Amplitudes over final indices for a fixed initial pair.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTensor {
    pub initial: (usize, usize),
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    pub captured_mass: f64,
    pub epsilon: f64,
}

impl CouplingTensor {
    /// Tensor from row-major amplitudes.
    pub fn from_amplitudes(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::invalid(
                "values",
                format!("expected {rows}×{cols} = {} amplitudes, got {}", rows * cols, values.len()),
            ));
        }
        let captured_mass = values.iter().map(|v| v * v).sum();
        Ok(Self {
            initial: (0, 0),
            rows,
            cols,
            values,
            captured_mass,
            epsilon: 0.0,
        })
    }

    /// `(rows, cols)`: final indices run over `0..rows` × `0..cols`.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Most probable final pair and its amplitude; row-major first wins ties.
    pub fn argmax(&self) -> Option<((usize, usize), f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, &v) in self.values.iter().enumerate() {
            match best {
                Some((_, b)) if b * b >= v * v => {}
                _ => best = Some((k, v)),
            }
        }
        best.map(|(k, v)| ((k / self.cols, k % self.cols), v))
    }
}

/// Streamed 1D amplitudes for one channel.
struct Channel {
    columns: TargetColumns,
    prefactor: f64,
    n: usize,
    amplitudes: Vec<f64>,
    mass: f64,
}

impl Channel {
    fn new(source: OscillatorFrame, target: OscillatorFrame, n: usize) -> Result<Self> {
        let t = Transition1D::new(source, target, n)?;
        let kernel = build_kernel(&t.source, &t.target);
        Ok(Self {
            columns: TargetColumns::new(&kernel, n)?,
            prefactor: kernel.prefactor,
            n,
            amplitudes: Vec::new(),
            mass: 0.0,
        })
    }

    fn extend(&mut self) -> Result<()> {
        let a = self.prefactor * self.columns.next_column()?[self.n];
        self.amplitudes.push(a);
        self.mass += a * a;
        Ok(())
    }
}

fn check_aligned(w: &Waveguide2D, name: &'static str) -> Result<()> {
    if w.gamma != 0.0 {
        return Err(Error::invalid(name, "separable spectra need gamma = 0"));
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")))
    }
}

/// Product amplitudes `⟨n_x|n_x'⟩⟨n_y|n_y'⟩` for axis-aligned guides.
///
/// The index rectangle grows one index at a time on the side whose channel
/// has more uncaptured mass, until the product mass reaches `1 − epsilon`.
pub fn spectrum2d_separable(
    source: &Waveguide2D,
    target: &Waveguide2D,
    n_x: usize,
    n_y: usize,
    epsilon: f64,
    cap: usize,
) -> Result<CouplingTensor> {
    check_aligned(source, "gamma")?;
    check_aligned(target, "gamma_prime")?;
    check_epsilon(epsilon)?;
    check_index(cap, MAX_MODE_INDEX)?;
    check_index(n_x, cap)?;
    check_index(n_y, cap)?;
    let (sx, sy) = source.axis_frames()?;
    let (tx, ty) = target.axis_frames()?;
    let mut x = Channel::new(sx, tx, n_x)?;
    let mut y = Channel::new(sy, ty, n_y)?;
    x.extend()?;
    y.extend()?;
    let mut partial = false;
    while x.mass * y.mass < 1.0 - epsilon {
        let x_open = x.amplitudes.len() <= cap;
        let y_open = y.amplitudes.len() <= cap;
        let grow_x = match (x_open, y_open) {
            (false, false) => {
                partial = true;
                break;
            }
            (true, false) => true,
            (false, true) => false,
            (true, true) => 1.0 - x.mass >= 1.0 - y.mass,
        };
        if grow_x {
            x.extend()?;
        } else {
            y.extend()?;
        }
    }
    let values: Vec<f64> = x
        .amplitudes
        .iter()
        .flat_map(|a| y.amplitudes.iter().map(move |b| a * b))
        .collect();
    let mut tensor = CouplingTensor::from_amplitudes(x.amplitudes.len(), y.amplitudes.len(), values)?;
    tensor.initial = (n_x, n_y);
    tensor.epsilon = epsilon;
    if partial {
        return Err(Error::PartialTensor {
            cap,
            tensor: Box::new(tensor),
        });
    }
    Ok(tensor)
}

/// Nodes, weights and normal-mode data for a 2D overlap integral.
struct TensorRule {
    /// Points in the lab frame with their combined weights (Jacobian and the
    /// `e^{t₁²+t₂²}` compensation included).
    points: Vec<((f64, f64), f64)>,
}

impl TensorRule {
    /// Rule adapted to the product of the two guides' Gaussian envelopes.
    fn new(
        source: (&Waveguide2D, &NormalModes),
        target: (&Waveguide2D, &NormalModes),
        order: usize,
    ) -> Result<Self> {
        let envelope = |modes: &NormalModes| {
            let [[c, s], [_, _]] = modes.rotation();
            // Rᵀ diag(Ω_u, Ω_v) R
            let (u, v) = (modes.omega_u, modes.omega_v);
            [[u * c * c + v * s * s, (u - v) * c * s], [(u - v) * c * s, u * s * s + v * c * c]]
        };
        let gs = envelope(source.1);
        let gt = envelope(target.1);
        let m = [
            [gs[0][0] + gt[0][0], gs[0][1] + gt[0][1]],
            [gs[1][0] + gt[1][0], gs[1][1] + gt[1][1]],
        ];
        let (cs, ct) = (source.0.center, target.0.center);
        let rhs = (
            gs[0][0] * cs.0 + gs[0][1] * cs.1 + gt[0][0] * ct.0 + gt[0][1] * ct.1,
            gs[1][0] * cs.0 + gs[1][1] * cs.1 + gt[1][0] * ct.0 + gt[1][1] * ct.1,
        );
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let mean = (
            (m[1][1] * rhs.0 - m[0][1] * rhs.1) / det,
            (m[0][0] * rhs.1 - m[1][0] * rhs.0) / det,
        );
        let theta = 0.5 * (2.0 * m[0][1]).atan2(m[0][0] - m[1][1]);
        let (mu1, mu2, _) = rotated_diagonal(m[0][0], m[0][1], m[1][1], theta);
        let (s, c) = theta.sin_cos();
        let (a1, a2) = ((2.0 / mu1).sqrt(), (2.0 / mu2).sqrt());
        let rule = gauss_hermite(order)?;
        let mut points = Vec::with_capacity(order * order);
        for (&t1, &w1) in rule.nodes().iter().zip(rule.scaled_weights()) {
            for (&t2, &w2) in rule.nodes().iter().zip(rule.scaled_weights()) {
                let (z1, z2) = (a1 * t1, a2 * t2);
                // r = mean + Q z, Q columns = eigenvectors (c, s), (−s, c)
                let r = (mean.0 + c * z1 - s * z2, mean.1 + s * z1 + c * z2);
                points.push((r, a1 * a2 * w1 * w2));
            }
        }
        Ok(Self { points })
    }
}

/// Normal-mode coordinates `(√Ω_u·u, √Ω_v·v)` of a lab-frame point.
fn scaled_coordinates(w: &Waveguide2D, modes: &NormalModes, r: (f64, f64)) -> (f64, f64) {
    let [[a, b], [c, d]] = modes.rotation();
    let (dx, dy) = (r.0 - w.center.0, r.1 - w.center.1);
    (
        (a * dx + b * dy) * modes.omega_u.sqrt(),
        (c * dx + d * dy) * modes.omega_v.sqrt(),
    )
}

fn check_source_indices(source: &Waveguide2D, n_x: usize, n_y: usize) -> Result<()> {
    check_index(n_x, MAX_MODE_INDEX)?;
    check_index(n_y, MAX_MODE_INDEX)?;
    if source.gamma != 0.0 && n_x.max(n_y) > MAX_COUPLED_SOURCE_INDEX {
        return Err(Error::invalid(
            "n",
            format!(
                "initial indices above {MAX_COUPLED_SOURCE_INDEX} are not supported for a cross-coupled source"
            ),
        ));
    }
    Ok(())
}

/// Amplitude between source mode `(n_x, n_y)` and target normal mode
/// `(k_u, k_v)`, by tensor Gauss–Hermite quadrature in the frame that
/// diagonalizes the product of the two Gaussian envelopes.
pub fn overlap_coupled(
    source: &Waveguide2D,
    target: &Waveguide2D,
    initial: (usize, usize),
    last: (usize, usize),
) -> Result<f64> {
    check_source_indices(source, initial.0, initial.1)?;
    check_index(last.0, MAX_MODE_INDEX)?;
    check_index(last.1, MAX_MODE_INDEX)?;
    let sm = normal_modes(source)?;
    let tm = normal_modes(target)?;
    let order = (initial.0 + initial.1 + last.0 + last.1).div_ceil(2) + 8;
    let rule = TensorRule::new((source, &sm), (target, &tm), order)?;
    let norm = (sm.omega_u * sm.omega_v * tm.omega_u * tm.omega_v).powf(0.25);
    let total: f64 = rule
        .points
        .iter()
        .map(|&(r, w)| {
            let (p, q) = scaled_coordinates(source, &sm, r);
            let (a, b) = scaled_coordinates(target, &tm, r);
            w * hermite_function(initial.0, p, 0.0)
                * hermite_function(initial.1, q, 0.0)
                * hermite_function(last.0, a, 0.0)
                * hermite_function(last.1, b, 0.0)
        })
        .sum();
    Ok(norm * total)
}

/// Amplitudes over target normal modes `0..rows` × `0..cols`, all from one
/// tensor rule.
fn coupled_block(
    source: (&Waveguide2D, &NormalModes),
    target: (&Waveguide2D, &NormalModes),
    initial: (usize, usize),
    rows: usize,
    cols: usize,
) -> Result<Vec<f64>> {
    let order = (initial.0 + initial.1 + rows + cols - 2).div_ceil(2) + 8;
    let rule = TensorRule::new(source, target, order)?;
    let (sw, sm) = source;
    let (tw, tm) = target;
    let norm = (sm.omega_u * sm.omega_v * tm.omega_u * tm.omega_v).powf(0.25);
    let mut values = vec![0.0; rows * cols];
    for &(r, w) in &rule.points {
        let (p, q) = scaled_coordinates(sw, sm, r);
        let weight = norm * w * hermite_function(initial.0, p, 0.0) * hermite_function(initial.1, q, 0.0);
        if weight == 0.0 {
            continue;
        }
        let (a, b) = scaled_coordinates(tw, tm, r);
        let fu = hermite_functions(rows - 1, a, 0.0);
        let fv = hermite_functions(cols - 1, b, 0.0);
        for (i, &x) in fu.iter().enumerate() {
            let wx = weight * x;
            for (slot, &y) in values[i * cols..(i + 1) * cols].iter_mut().zip(&fv) {
                *slot += wx * y;
            }
        }
    }
    Ok(values)
}

/// Amplitudes from source mode `(n_x, n_y)` into the target's normal modes,
/// grown until the captured mass reaches `1 − epsilon`.
///
/// The side whose last row or column holds more probability grows by half
/// its length each round; the whole block is recomputed with a rule exact for
/// the new index range.
pub fn coupled_tensor(
    source: &Waveguide2D,
    target: &Waveguide2D,
    n_x: usize,
    n_y: usize,
    epsilon: f64,
    cap: usize,
) -> Result<CouplingTensor> {
    check_epsilon(epsilon)?;
    check_index(cap, MAX_MODE_INDEX)?;
    check_source_indices(source, n_x, n_y)?;
    let sm = normal_modes(source)?;
    let tm = normal_modes(target)?;
    let limit = cap + 1;
    let (mut rows, mut cols) = (INITIAL_SIDE.min(limit), INITIAL_SIDE.min(limit));
    loop {
        let values = coupled_block((source, &sm), (target, &tm), (n_x, n_y), rows, cols)?;
        let mut tensor = CouplingTensor::from_amplitudes(rows, cols, values)?;
        tensor.initial = (n_x, n_y);
        tensor.epsilon = epsilon;
        if tensor.captured_mass >= 1.0 - epsilon {
            return Ok(tensor);
        }
        let last_row: f64 = (0..cols).map(|j| tensor.get(rows - 1, j).powi(2)).sum();
        let last_col: f64 = (0..rows).map(|i| tensor.get(i, cols - 1).powi(2)).sum();
        let grow = |side: usize| (side + side.div_ceil(2)).min(limit);
        match (rows < limit, cols < limit) {
            (false, false) => {
                return Err(Error::PartialTensor {
                    cap,
                    tensor: Box::new(tensor),
                })
            }
            (true, false) => rows = grow(rows),
            (false, true) => cols = grow(cols),
            (true, true) if last_row >= last_col => rows = grow(rows),
            (true, true) => cols = grow(cols),
        }
    }
}

/// Singular values of a two-channel amplitude matrix and their entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtReport {
    /// Descending; `Σσ²` equals the tensor's captured mass.
    pub singular_values: Vec<f64>,
    /// `−Σ p ln p` over `p = σ²/Σσ²`.
    pub entropy: f64,
}

impl SchmidtReport {
    /// Number of singular values above `tol` relative to the largest.
    pub fn rank(&self, tol: f64) -> usize {
        let top = self.singular_values.first().copied().unwrap_or(0.0);
        self.singular_values.iter().filter(|s| **s > tol * top).count()
    }
}

pub fn schmidt_report(t: &CouplingTensor) -> Result<SchmidtReport> {
    if t.rows == 0 || t.cols == 0 || !(t.captured_mass > 0.0) {
        return Err(Error::EmptyTensor);
    }
    let matrix = DMatrix::from_row_slice(t.rows, t.cols, &t.values);
    let mut singular_values: Vec<f64> = matrix.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = singular_values.iter().map(|s| s * s).sum();
    let entropy = singular_values
        .iter()
        .map(|s| s * s / total)
        .filter(|p| *p > 0.0)
        .map(|p| -p * p.ln())
        .sum::<f64>()
        .max(0.0);
    Ok(SchmidtReport {
        singular_values,
        entropy,
    })
}
