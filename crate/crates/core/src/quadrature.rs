//! Gauss–Hermite quadrature for the weight `e^{-t²}` on `(-∞, ∞)`.
//!
//! Starting values are the eigenvalues of the symmetric tridiagonal Jacobi
//! matrix (Golub–Welsch), found by implicit QL. Each is then polished by
//! Newton iteration on the orthonormal Hermite recurrence, and the weights
//! come from `w = 1/(n q_{n−1}(t)²)` rather than from eigenvectors, which
//! keeps the tiny outer weights accurate to full relative precision. Only the
//! non-negative half is computed; the other half is its mirror image, so the
//! rule is symmetric to the bit.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 2048;

const MAX_NEWTON_STEPS: usize = 100;

/// Nodes in ascending order and their weights.
///
/// `weights` are the classical weights (the `e^{-t²}` factor is inside them).
/// For orders above a few hundred the outermost classical weights drop below
/// the smallest `f64` and flush to zero; `scaled_weights` (`w_i·e^{t_i²}`)
/// stay representable for every order and are what integrand-with-Gaussian
/// callers should use.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    scaled_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scaled_weights(&self) -> &[f64] {
        &self.scaled_weights
    }

    /// `Σ w_i g(t_i)`, i.e. `∫ g(t) e^{-t²} dt`.
    pub fn sum<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * g(t))
            .sum()
    }
}

/// Orthonormal Hermite values `q_order(t)` and `q_{order−1}(t)` (weight
/// `e^{-t²}`), sharing a logarithmic scale that is returned as the third item.
fn orthonormal_pair(order: usize, t: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25);
    let mut log_scale = 0.0;
    for j in 0..order {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * t * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > 1e150 {
            cur *= 1e-150;
            prev *= 1e-150;
            log_scale += 1e150f64.ln();
        }
    }
    (cur, prev, log_scale)
}

/// Eigenvalues of the symmetric tridiagonal matrix with zero diagonal and
/// off-diagonal `√(k/2)`, ascending.
fn jacobi_eigenvalues(order: usize) -> Option<Vec<f64>> {
    let n = order;
    let mut d = vec![0.0f64; n];
    // e[i] couples rows i and i+1; e[n−1] is padding
    let mut e: Vec<f64> = (1..=n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Some(d)
}

/// The Gauss–Hermite rule with `order` nodes.
pub fn gauss_hermite(order: usize) -> Result<QuadratureRule> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::OrderOutOfRange(order));
    }
    let n = order as f64;
    let half = order.div_ceil(2);
    let guesses = jacobi_eigenvalues(order).ok_or(Error::NoConvergence { order, index: 0 })?;
    // positive roots, largest first; the middle root of an odd rule is 0
    let mut roots: Vec<f64> = Vec::with_capacity(half);
    let mut weights: Vec<f64> = Vec::with_capacity(half);
    let mut scaled: Vec<f64> = Vec::with_capacity(half);
    for i in 0..half {
        let mut z = guesses[order - 1 - i];
        if order % 2 == 1 && i == half - 1 {
            z = 0.0;
        } else {
            let mut converged = false;
            for _ in 0..MAX_NEWTON_STEPS {
                let (p, p_lower, _) = orthonormal_pair(order, z);
                // q_n' = √(2n) q_{n−1}
                let step = p / ((2.0 * n).sqrt() * p_lower);
                z -= step;
                if step.abs() <= 1e-14 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged || !z.is_finite() {
                return Err(Error::NoConvergence { order, index: i });
            }
        }
        let (_, p_lower, log_scale) = orthonormal_pair(order, z);
        // w = 1 / (n q_{n−1}(z)²); with q = mantissa·e^{log_scale}
        let inv = 1.0 / (n * p_lower * p_lower);
        weights.push(inv * (-2.0 * log_scale).exp());
        scaled.push(inv * (z * z - 2.0 * log_scale).exp());
        roots.push(z);
    }
    if let Some(pos) = roots.windows(2).position(|w| w[1] >= w[0]) {
        // two guesses polished onto the same root
        return Err(Error::NoConvergence { order, index: pos + 1 });
    }

    let mut nodes = Vec::with_capacity(order);
    let mut all_weights = Vec::with_capacity(order);
    let mut all_scaled = Vec::with_capacity(order);
    for i in 0..order / 2 {
        nodes.push(-roots[i]);
        all_weights.push(weights[i]);
        all_scaled.push(scaled[i]);
    }
    for i in (0..half).rev() {
        nodes.push(roots[i]);
        all_weights.push(weights[i]);
        all_scaled.push(scaled[i]);
    }
    Ok(QuadratureRule {
        order,
        nodes,
        weights: all_weights,
        scaled_weights: all_scaled,
    })
}

/// `∫ f(x) e^{-((x − shift)/scale)²} dx` under `x = shift + scale·t`,
/// `dx = scale·dt`.
pub fn integrate<F: FnMut(f64) -> f64>(rule: &QuadratureRule, mut f: F, shift: f64, scale: f64) -> f64 {
    debug_assert!(scale > 0.0, "scale must be positive");
    scale * rule.sum(|t| f(shift + scale * t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// `∫ t^k e^{-t²} dt = Γ((k+1)/2)` for even `k`.
    fn moment(k: usize) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        // (k−1)!! √π / 2^{k/2}
        let mut v = PI.sqrt();
        let mut j = 1.0;
        while j < k as f64 {
            v *= j / 2.0;
            j += 2.0;
        }
        v
    }

    #[test]
    fn order_one() {
        let r = gauss_hermite(1).unwrap();
        assert_eq!(r.nodes(), &[0.0]);
        assert_relative_eq!(r.weights()[0], PI.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn order_two() {
        let r = gauss_hermite(2).unwrap();
        let node = 0.5f64.sqrt();
        assert_relative_eq!(r.nodes()[0], -node, max_relative = 1e-15);
        assert_relative_eq!(r.nodes()[1], node, max_relative = 1e-15);
        for w in r.weights() {
            assert_relative_eq!(*w, PI.sqrt() / 2.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn tenth_moment_at_order_twenty() {
        let r = gauss_hermite(20).unwrap();
        let got = r.sum(|t| t.powi(10));
        assert_relative_eq!(got, 945.0 * PI.sqrt() / 32.0, max_relative = 1e-13);
        assert_relative_eq!(got, 52.34277, epsilon = 1e-5);
    }

    #[test]
    fn order_bounds() {
        assert!(matches!(gauss_hermite(0), Err(Error::OrderOutOfRange(0))));
        assert!(matches!(gauss_hermite(2049), Err(Error::OrderOutOfRange(2049))));
    }

    #[test]
    fn structure_across_orders() {
        for order in [3, 7, 16, 33, 100, 257, 700, 1500, 2048] {
            let r = gauss_hermite(order).unwrap();
            assert_eq!(r.nodes().len(), order);
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
            for i in 0..order {
                assert_eq!(r.nodes()[i], -r.nodes()[order - 1 - i]);
            }
            let total: f64 = r.weights().iter().sum();
            assert_relative_eq!(total, PI.sqrt(), max_relative = 1e-13);
            assert!(r.weights().iter().all(|w| *w >= 0.0));
            assert!(r.scaled_weights().iter().all(|w| *w > 0.0 && w.is_finite()));
        }
    }

    #[test]
    fn nodes_are_roots() {
        for order in [5, 40, 300] {
            let r = gauss_hermite(order).unwrap();
            for &t in r.nodes() {
                let (p, lower, _) = orthonormal_pair(order, t);
                // residual relative to the local slope scale
                assert!(p.abs() <= 1e-14 * lower.abs().max(f64::MIN_POSITIVE) * (order as f64).sqrt() * 4.0);
            }
        }
    }

    #[test]
    fn monomial_exactness() {
        for order in [1, 2, 5, 8, 32] {
            let r = gauss_hermite(order).unwrap();
            for k in 0..2 * order {
                let got = r.sum(|t| t.powi(k as i32));
                if k % 2 == 0 {
                    assert_relative_eq!(got, moment(k), max_relative = 1e-12);
                } else {
                    let scale = r.sum(|t| t.abs().powi(k as i32));
                    assert!(got.abs() <= 1e-13 * scale, "order {order} k {k}: {got}");
                }
            }
        }
    }

    #[test]
    fn integrate_examples() {
        let r = gauss_hermite(6).unwrap();
        assert_relative_eq!(integrate(&r, |_| 1.0, 0.0, 1.0), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(integrate(&r, |x| x * x, 0.0, 1.0), PI.sqrt() / 2.0, max_relative = 1e-14);
        let mu = 1.7;
        assert_relative_eq!(integrate(&r, |x| x, mu, 1.0), mu * PI.sqrt(), max_relative = 1e-14);
        // scale: ∫ e^{-(x/s)²} dx = s√π
        assert_relative_eq!(integrate(&r, |_| 1.0, 0.3, 2.5), 2.5 * PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn refinement_is_stable() {
        let g = |t: f64| 1.0 - 0.3 * t + 0.25 * t.powi(4) - 0.01 * t.powi(9) + 0.002 * t.powi(12);
        for k in [7, 12, 20] {
            let a = gauss_hermite(k).unwrap().sum(g);
            let b = gauss_hermite(k + 8).unwrap().sum(g);
            assert!((a - b).abs() <= 1e-12 * a.abs(), "{k}: {a} vs {b}");
        }
    }
}
