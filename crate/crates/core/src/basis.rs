//! Truncated 2D harmonic-oscillator product basis: stable Hermite-function
//! evaluation, Gauss-Hermite quadrature rules and parity-block enumeration.

use crate::error::{Error, Result};
use crate::scalar::{cst, cst_usize, Real};
use serde::{Deserialize, Serialize};

/// Largest supported Gauss-Hermite order.
pub const MAX_QUADRATURE_ORDER: usize = 200;

/// Parity of a 1D quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Parity of the quantum number `n`.
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn matches(self, n: usize) -> bool {
        Parity::of(n) == self
    }
}

/// Quantum-number pair labelling one product basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub n_x: usize,
    pub n_y: usize,
}

impl BasisIndex {
    pub fn new(n_x: usize, n_y: usize) -> Self {
        Self { n_x, n_y }
    }

    pub fn total(&self) -> usize {
        self.n_x + self.n_y
    }
}

/// Truncation rule for the product basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    /// `n_x + n_y <= n_max` (matches the energy ordering of the uncoupled
    /// problem; the default).
    Triangular,
    /// `n_x <= n_max` and `n_y <= n_max`, for convergence studies.
    Rectangular,
}

/// Truncated product basis with per-axis frequencies.
///
/// The enumeration order is fixed: ascending total quanta, then ascending
/// `n_y`. Basis frequencies default to the Hamiltonian stiffnesses so the
/// uncoupled problem is exactly diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec<T> {
    pub n_max: usize,
    pub scale_x: T,
    pub scale_y: T,
    pub truncation: Truncation,
}

impl<T: Real> BasisSpec<T> {
    pub fn new(n_max: usize, scale_x: T, scale_y: T) -> Result<Self> {
        Self::with_truncation(n_max, scale_x, scale_y, Truncation::Triangular)
    }

    pub fn with_truncation(
        n_max: usize,
        scale_x: T,
        scale_y: T,
        truncation: Truncation,
    ) -> Result<Self> {
        if !(scale_x > T::zero()) || !(scale_y > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "basis scales must be positive, got ({scale_x}, {scale_y})"
            )));
        }
        Ok(Self {
            n_max,
            scale_x,
            scale_y,
            truncation,
        })
    }

    pub fn contains(&self, idx: BasisIndex) -> bool {
        match self.truncation {
            Truncation::Triangular => idx.total() <= self.n_max,
            Truncation::Rectangular => idx.n_x <= self.n_max && idx.n_y <= self.n_max,
        }
    }

    /// Number of basis functions across all four parity blocks.
    pub fn len(&self) -> usize {
        match self.truncation {
            Truncation::Triangular => (self.n_max + 1) * (self.n_max + 2) / 2,
            Truncation::Rectangular => (self.n_max + 1) * (self.n_max + 1),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Enumerates the basis functions of one parity block in the canonical order
/// (total quanta ascending, then `n_y` ascending). The four blocks partition
/// the basis.
pub fn enumerate_block<T: Real>(
    spec: &BasisSpec<T>,
    parity_x: Parity,
    parity_y: Parity,
) -> Vec<BasisIndex> {
    let mut out = Vec::new();
    let tmax = match spec.truncation {
        Truncation::Triangular => spec.n_max,
        Truncation::Rectangular => 2 * spec.n_max,
    };
    for t in 0..=tmax {
        for n_y in 0..=t {
            let n_x = t - n_y;
            let idx = BasisIndex::new(n_x, n_y);
            if spec.contains(idx) && parity_x.matches(n_x) && parity_y.matches(n_y) {
                out.push(idx);
            }
        }
    }
    out
}

/// Evaluates the L2-normalized oscillator eigenfunctions `h_0..h_nmax` of unit
/// frequency at `u`, by upward recurrence with the Gaussian factor folded in.
/// Values stay O(1) for all n; the far tail underflows to zero gracefully.
pub fn hermite_values<T: Real>(n_max: usize, u: T) -> Vec<T> {
    let mut out = vec![T::zero(); n_max + 1];
    let h0 = cst::<T>(core::f64::consts::PI.powf(-0.25)) * (-u * u / cst(2.0)).exp();
    out[0] = h0;
    if n_max >= 1 {
        out[1] = cst::<T>(2.0).sqrt() * u * h0;
    }
    for n in 1..n_max {
        let np1 = cst_usize::<T>(n + 1);
        let a = (cst::<T>(2.0) / np1).sqrt();
        let b = (cst_usize::<T>(n) / np1).sqrt();
        out[n + 1] = a * u * out[n] - b * out[n - 1];
    }
    out
}

/// L2-normalized harmonic-oscillator eigenfunction of frequency `scale` at `x`.
pub fn hermite_function<T: Real>(n: usize, x: T, scale: T) -> T {
    debug_assert!(scale > T::zero());
    let u = scale.sqrt() * x;
    scale.powf(cst(0.25)) * hermite_values(n, u)[n]
}

/// Gauss-Hermite rule: integrates `e^{-x^2} f(x)` over the real line exactly
/// for polynomials `f` of degree `2*order - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
    /// Weights with the Gaussian removed (`w_i e^{x_i^2}`), for integrating
    /// functions that carry their own decay.
    pub bare_weights: Vec<T>,
    pub order: usize,
}

impl<T: Real> QuadratureRule<T> {
    /// `sum_i w_i f(x_i)`, approximating the integral of `e^{-x^2} f(x)`.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// `sum_i w_i e^{x_i^2} f(x_i)`, approximating the integral of `f` itself;
    /// `f` must decay at least like the Gaussian for this to converge.
    pub fn integrate_bare<F: Fn(T) -> T>(&self, f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.bare_weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Builds the Gauss-Hermite rule by Newton iteration on the normalized
/// recurrence (asymptotic initial guesses, largest root inward; the lower
/// half is mirrored by symmetry).
pub fn gauss_hermite_rule<T: Real>(order: usize) -> Result<QuadratureRule<T>> {
    if order == 0 || order > MAX_QUADRATURE_ORDER {
        return Err(Error::QuadratureOrder { order });
    }
    let n = order;
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let mut bare = vec![T::zero(); n];

    let nf = n as f64;
    let tol = cst::<T>(1e-14).max(T::epsilon() * cst(8.0));
    let half = (n + 1) / 2;
    // positive roots, found from the largest inward; each initial guess is
    // extrapolated from already-converged roots
    let mut roots: Vec<T> = Vec::with_capacity(half);
    for i in 0..half {
        let mut z: T = match i {
            0 => cst((2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0)),
            1 => roots[0] - cst::<T>(1.14 * nf.powf(0.426)) / roots[0],
            2 => cst::<T>(1.86) * roots[1] - cst::<T>(0.86) * roots[0],
            3 => cst::<T>(1.91) * roots[2] - cst::<T>(0.91) * roots[1],
            _ => cst::<T>(2.0) * roots[i - 1] - roots[i - 2],
        };
        let mut converged = false;
        for _ in 0..200 {
            let h = hermite_values(n, z);
            // h_n' = sqrt(2n) h_{n-1} - u h_n
            let deriv = (cst_usize::<T>(2 * n)).sqrt() * h[n - 1] - z * h[n];
            let step = h[n] / deriv;
            z = z - step;
            if step.abs() <= tol * z.abs().max(T::one()) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::QuadratureOrder { order });
        }
        roots.push(z);
    }

    for (i, &z) in roots.iter().enumerate() {
        let h = hermite_values(n, z);
        // Bare weight 1/(n h_{n-1}^2) stays O(1); the Gaussian weight follows.
        let bw = T::one() / (cst_usize::<T>(n) * h[n - 1] * h[n - 1]);
        let w = bw * (-z * z).exp();
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
        bare[i] = bw;
        bare[n - 1 - i] = bw;
    }
    if n % 2 == 1 {
        // Central node is exactly zero for odd orders.
        nodes[half - 1] = T::zero();
        let h = hermite_values(n, T::zero());
        let bw = T::one() / (cst_usize::<T>(n) * h[n - 1] * h[n - 1]);
        weights[half - 1] = bw;
        bare[half - 1] = bw;
    }

    Ok(QuadratureRule {
        nodes,
        weights,
        bare_weights: bare,
        order,
    })
}
