//! Momentum-space mode grids and classical field profiles.
//!
//! A [`ModeGrid`] is a quadrature rule for the invariant measure
//! d³k/((2π)³ 2k⁰) with k⁰ = |k⃗|, so that Σᵢ wᵢ f(k⃗ᵢ) approximates
//! (1/(2π)³) ∫ d³k f(k⃗)/(2|k⃗|). For an isotropic integrand this reduces to
//! (1/4π²) ∫ dk k f(k).
//!
//! A [`ModeProfile`] samples a complex four-component amplitude q_μ(k⃗) on a
//! grid: the Coulomb profile q⁰(t,k) = e·e^{i|k|t}/|k|, its Yukawa-screened
//! regularization, gauge profiles q_μ = −i k_μ χ, or custom data. Profiles
//! feed the position-space reconstruction, the mode-number integrals and the
//! per-mode displacement amplitudes used by the Fock-space layer.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Shell spacing of a radial grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// Node layout of a [`ModeGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridLayout {
    /// Radial shells only; the full 4π solid angle is folded into the
    /// weights. Nodes sit on the third axis by convention.
    IsotropicRadial,
    /// Radial shells × (polar × azimuthal) angular nodes.
    FullAngular { n_polar: usize, n_azimuthal: usize },
    /// Caller-supplied nodes and weights.
    Custom,
}

/// Quadrature nodes and weights for the invariant measure d³k/((2π)³ 2k⁰).
#[derive(Debug, Clone)]
pub struct ModeGrid {
    nodes: Vec<[f64; 3]>,
    weights: Vec<f64>,
    kmin: f64,
    kmax: f64,
    layout: GridLayout,
}

impl ModeGrid {
    /// Radial-only grid with `n_shells` shells between `kmin` and `kmax`.
    ///
    /// Shell nodes are midpoints in the spacing variable (geometric midpoints
    /// for log spacing); the weight of a shell of width Δ centred at k is
    /// 4πk²Δ/((2π)³·2k) = kΔ/(4π²).
    pub fn isotropic(kmin: f64, kmax: f64, n_shells: usize, spacing: Spacing) -> Result<Self> {
        let (radii, widths) = radial_shells(kmin, kmax, n_shells, spacing)?;
        let mut nodes = Vec::with_capacity(n_shells);
        let mut weights = Vec::with_capacity(n_shells);
        for (k, dk) in radii.iter().zip(&widths) {
            nodes.push([0.0, 0.0, *k]);
            weights.push(k * dk / (4.0 * PI * PI));
        }
        Ok(ModeGrid {
            nodes,
            weights,
            kmin,
            kmax,
            layout: GridLayout::IsotropicRadial,
        })
    }

    /// Grid with explicit angular nodes, for profiles that are not isotropic.
    ///
    /// Polar nodes are midpoints in cos θ, azimuthal nodes uniform in φ, so
    /// the angular weights sum to 4π and the node set is symmetric under
    /// k⃗ → −k⃗ for even `n_azimuthal`.
    pub fn full_angular(
        kmin: f64,
        kmax: f64,
        n_shells: usize,
        spacing: Spacing,
        n_polar: usize,
        n_azimuthal: usize,
    ) -> Result<Self> {
        if n_polar == 0 || n_azimuthal == 0 {
            return Err(Error::parameter("angular node counts must be positive"));
        }
        let (radii, widths) = radial_shells(kmin, kmax, n_shells, spacing)?;
        let d_cos = 2.0 / n_polar as f64;
        let d_phi = 2.0 * PI / n_azimuthal as f64;
        let mut nodes = Vec::with_capacity(n_shells * n_polar * n_azimuthal);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for (k, dk) in radii.iter().zip(&widths) {
            // radial factor k²Δ/((2π)³·2k), angular factor Δcosθ·Δφ
            let radial_w = k * dk / (2.0 * (2.0 * PI).powi(3));
            for ip in 0..n_polar {
                let cos_t = -1.0 + (ip as f64 + 0.5) * d_cos;
                let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
                for ia in 0..n_azimuthal {
                    let phi = (ia as f64 + 0.5) * d_phi;
                    nodes.push([k * sin_t * phi.cos(), k * sin_t * phi.sin(), k * cos_t]);
                    weights.push(radial_w * d_cos * d_phi);
                }
            }
        }
        Ok(ModeGrid {
            nodes,
            weights,
            kmin,
            kmax,
            layout: GridLayout::FullAngular {
                n_polar,
                n_azimuthal,
            },
        })
    }

    /// Grid from explicit nodes and weights, e.g. a handful of modes for a
    /// dense Fock-space check.
    pub fn from_nodes(nodes: Vec<[f64; 3]>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(Error::parameter(
                "node and weight lists must be non-empty and of equal length",
            ));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::parameter("weights must be positive"));
        }
        let mut kmin = f64::INFINITY;
        let mut kmax: f64 = 0.0;
        for n in &nodes {
            let k = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
            if k == 0.0 {
                return Err(Error::parameter("zero-momentum node not allowed"));
            }
            kmin = kmin.min(k);
            kmax = kmax.max(k);
        }
        Ok(ModeGrid {
            nodes,
            weights,
            kmin,
            kmax,
            layout: GridLayout::Custom,
        })
    }

    pub fn nodes(&self) -> &[[f64; 3]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn kmin(&self) -> f64 {
        self.kmin
    }

    pub fn kmax(&self) -> f64 {
        self.kmax
    }

    pub fn layout(&self) -> GridLayout {
        self.layout
    }

    pub fn is_isotropic(&self) -> bool {
        self.layout == GridLayout::IsotropicRadial
    }

    /// |k⃗| of node `i`.
    pub fn k_abs(&self, i: usize) -> f64 {
        let n = self.nodes[i];
        (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()
    }

    /// Σᵢ wᵢ f(|k⃗ᵢ|), the discretized invariant-measure integral of a
    /// radial function.
    pub fn integrate_radial(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(n, w)| w * f((n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt()))
            .sum()
    }
}

fn radial_shells(
    kmin: f64,
    kmax: f64,
    n_shells: usize,
    spacing: Spacing,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(kmin > 0.0) || !kmax.is_finite() {
        return Err(Error::parameter(format!(
            "grid bounds must satisfy 0 < kmin < kmax, got kmin={kmin}, kmax={kmax}"
        )));
    }
    if kmin >= kmax {
        return Err(Error::parameter(format!(
            "degenerate or inverted momentum range [{kmin}, {kmax}]"
        )));
    }
    if n_shells < 2 {
        return Err(Error::parameter("at least 2 shells required"));
    }
    let n = n_shells;
    let mut radii = Vec::with_capacity(n);
    let mut widths = Vec::with_capacity(n);
    match spacing {
        Spacing::Log => {
            let du = (kmax / kmin).ln() / n as f64;
            for i in 0..n {
                let lo = kmin * ((i as f64) * du).exp();
                let hi = kmin * ((i as f64 + 1.0) * du).exp();
                radii.push((lo * hi).sqrt());
                widths.push(hi - lo);
            }
        }
        Spacing::Linear => {
            let dk = (kmax - kmin) / n as f64;
            for i in 0..n {
                radii.push(kmin + (i as f64 + 0.5) * dk);
                widths.push(dk);
            }
        }
    }
    Ok((radii, widths))
}

/// What a [`ModeProfile`] represents.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// q⁰(t,k) = e·e^{i|k|t}/|k|, spatial components zero.
    Coulomb { e: f64 },
    /// Yukawa-difference screening of the Coulomb profile.
    Screened { e: f64, mu: f64, m: f64 },
    /// Induced by a gauge function χ via q_μ = −i k_μ χ.
    Gauge,
    Custom,
}

/// A complex four-component amplitude q_μ(k⃗ᵢ) sampled on a grid.
///
/// Components are stored with lower Lorentz index, ordered (q₀, q₁, q₂, q₃).
#[derive(Debug, Clone)]
pub struct ModeProfile {
    grid: Arc<ModeGrid>,
    values: Vec<[Complex64; 4]>,
    kind: ProfileKind,
    t: f64,
}

impl ModeProfile {
    /// Coulomb profile q⁰(t,kᵢ) = e·e^{i|kᵢ|t}/|kᵢ| of a point charge `e`.
    pub fn coulomb(e: f64, grid: &Arc<ModeGrid>, t: f64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let values = grid
            .nodes()
            .iter()
            .map(|n| {
                let k = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
                let q0 = if e == 0.0 {
                    zero
                } else {
                    Complex64::new(0.0, k * t).exp() * (e / k)
                };
                [q0, zero, zero, zero]
            })
            .collect();
        ModeProfile {
            grid: Arc::clone(grid),
            values,
            kind: ProfileKind::Coulomb { e },
            t,
        }
    }

    /// Screened Coulomb profile q⁰(k) = e·|k⃗|·[1/(k²+μ²) − 1/(k²+m²)].
    ///
    /// The normalization is fixed by requiring that
    /// [`ModeProfile::position_potential`] reproduces the screened potential
    /// (e/4πr)·(e^{−μr} − e^{−mr}).
    pub fn screened_coulomb(e: f64, mu: f64, m: f64, grid: &Arc<ModeGrid>) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::parameter(format!("screening mass mu={mu} must be positive")));
        }
        if m < mu {
            return Err(Error::parameter(format!(
                "cutoff mass m={m} must satisfy m >= mu={mu}"
            )));
        }
        let values = grid
            .nodes()
            .iter()
            .map(|n| {
                let k2 = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
                let k = k2.sqrt();
                let q0 = e * k * (1.0 / (k2 + mu * mu) - 1.0 / (k2 + m * m));
                [
                    Complex64::new(q0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ]
            })
            .collect();
        Ok(ModeProfile {
            grid: Arc::clone(grid),
            values,
            kind: ProfileKind::Screened { e, mu, m },
            t: 0.0,
        })
    }

    /// Profile with caller-supplied component values.
    pub fn custom(grid: &Arc<ModeGrid>, values: Vec<[Complex64; 4]>, t: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(ModeProfile {
            grid: Arc::clone(grid),
            values,
            kind: ProfileKind::Custom,
            t,
        })
    }

    pub(crate) fn with_kind(
        grid: &Arc<ModeGrid>,
        values: Vec<[Complex64; 4]>,
        kind: ProfileKind,
        t: f64,
    ) -> Self {
        ModeProfile {
            grid: Arc::clone(grid),
            values,
            kind,
            t,
        }
    }

    pub fn grid(&self) -> &Arc<ModeGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[[Complex64; 4]] {
        &self.values
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    /// q_μ at node `i` for lower Lorentz index `mu`.
    pub fn value(&self, i: usize, mu: usize) -> Complex64 {
        self.values[i][mu]
    }

    /// Position-space potential at radius `r` from the time component:
    /// Σᵢ wᵢ · 2 Re[q⁰(kᵢ)] · sin(kᵢr)/(kᵢr).
    ///
    /// The sinc factor is the angular average of e^{ik⃗·x⃗}, so the grid must
    /// be isotropic for the radial reduction to apply.
    pub fn position_potential(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::parameter(format!("radius r={r} must be positive")));
        }
        if !self.grid.is_isotropic() {
            return Err(Error::parameter(
                "position reconstruction requires an isotropic-radial grid",
            ));
        }
        let mut sum = 0.0;
        for (i, w) in self.grid.weights().iter().enumerate() {
            let k = self.grid.k_abs(i);
            let kr = k * r;
            sum += w * 2.0 * self.values[i][0].re * kr.sin() / kr;
        }
        Ok(sum)
    }

    /// Σᵢ wᵢ |q⁰(kᵢ)|², the discretized time-like mode-number integral.
    ///
    /// For the Coulomb profile this is the log-divergent integral
    /// (e²/4π²)·ln(kmax/kmin); the phases e^{i|k|t} drop out, so the value
    /// is independent of the profile time.
    pub fn number_integral(&self) -> f64 {
        self.grid
            .weights()
            .iter()
            .zip(&self.values)
            .map(|(w, q)| w * q[0].norm_sqr())
            .sum()
    }
}

/// Right-handed orthonormal triad (e₁, e₂, k̂) for a momentum direction.
///
/// e₁ = ẑ×k̂ normalized, e₂ = k̂×e₁; modes within ~1e−12 of the third-axis
/// poles fall back to e₁ = x̂, so that k̂ = ±ẑ yields e₂ = ±ŷ.
pub fn orthonormal_triad(k: [f64; 3]) -> Result<([f64; 3], [f64; 3], [f64; 3])> {
    let norm = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if norm == 0.0 {
        return Err(Error::parameter("zero momentum has no direction"));
    }
    let khat = [k[0] / norm, k[1] / norm, k[2] / norm];
    let perp = (khat[0] * khat[0] + khat[1] * khat[1]).sqrt();
    let e1 = if perp < 1e-12 {
        [1.0, 0.0, 0.0]
    } else {
        // ẑ × k̂ = (−k̂_y, k̂_x, 0)
        [-khat[1] / perp, khat[0] / perp, 0.0]
    };
    let e2 = [
        khat[1] * e1[2] - khat[2] * e1[1],
        khat[2] * e1[0] - khat[0] * e1[2],
        khat[0] * e1[1] - khat[1] * e1[0],
    ];
    Ok((e1, e2, khat))
}

/// Positive-frequency Pauli-Jordan distribution of the massless field,
/// closed form: Δ₀⁺(x) = (i/4π²) / ((x⁰−iε)² − |x⃗|²).
pub fn pauli_jordan_plus_closed(x: [f64; 4], eps: f64) -> Result<Complex64> {
    if !(eps > 0.0) {
        return Err(Error::parameter(format!("eps={eps} must be positive")));
    }
    let r2 = x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    let z = Complex64::new(x[0], -eps);
    let denom = z * z - r2;
    Ok(Complex64::new(0.0, 1.0 / (4.0 * PI * PI)) / denom)
}

/// Δ₀⁺(x) as a damped mode sum: −i Σᵢ wᵢ e^{−εkᵢ} e^{−ikᵢ·x}.
///
/// On an isotropic grid the angular integral is reduced to sin(kr)/(kr).
/// The UV damping e^{−εk} is the mode-sum counterpart of the x⁰ → x⁰−iε
/// prescription of [`pauli_jordan_plus_closed`], so both converge to the
/// same function as the grid refines.
pub fn pauli_jordan_plus_modesum(grid: &ModeGrid, x: [f64; 4], eps: f64) -> Complex64 {
    let r = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
    let mut sum = Complex64::new(0.0, 0.0);
    if grid.is_isotropic() {
        for (i, w) in grid.weights().iter().enumerate() {
            let k = grid.k_abs(i);
            let kr = k * r;
            let sinc = if kr.abs() < 1e-300 { 1.0 } else { kr.sin() / kr };
            sum += Complex64::new(0.0, -(k * x[0])).exp() * ((-eps * k).exp() * sinc * w);
        }
    } else {
        for (i, w) in grid.weights().iter().enumerate() {
            let n = grid.nodes()[i];
            let k = grid.k_abs(i);
            let phase = -(k * x[0]) + n[0] * x[1] + n[1] * x[2] + n[2] * x[3];
            sum += Complex64::new(0.0, phase).exp() * ((-eps * k).exp() * w);
        }
    }
    sum * Complex64::new(0.0, -1.0)
}

/// Full commutator distribution Δ₀ = Δ₀⁺ + Δ₀⁻ = 2 Re Δ₀⁺ from the mode sum.
///
/// Vanishes at equal time for r ≠ 0; the light-cone singularity survives the
/// ε-damping only as a smeared peak.
pub fn pauli_jordan_modesum(grid: &ModeGrid, x: [f64; 4], eps: f64) -> f64 {
    2.0 * pauli_jordan_plus_modesum(grid, x, eps).re
}

/// Discretized Klein-Gordon pairing i∫d³x φ_k* ∂↔₀ φ_k' of improper
/// one-photon wave functions e^{−ikx} on an n³ periodic box of side `box_l`.
///
/// Both momenta must be commensurate lattice modes (2π/L)·m⃗ with integer m⃗
/// strictly inside the Nyquist band. Equals L³·2k⁰ for k = k′ and 0
/// otherwise, by exact lattice orthogonality.
pub fn kg_inner_product(k: [f64; 3], kp: [f64; 3], box_l: f64, n: usize) -> Result<Complex64> {
    if !(box_l > 0.0) || n == 0 {
        return Err(Error::parameter("box size and point count must be positive"));
    }
    let m = lattice_indices(k, box_l, n)?;
    let mp = lattice_indices(kp, box_l, n)?;
    let k0 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let kp0 = (kp[0] * kp[0] + kp[1] * kp[1] + kp[2] * kp[2]).sqrt();
    if k0 == 0.0 && kp0 == 0.0 {
        return Err(Error::parameter(
            "zero-momentum mode has k⁰ = 0 and no Klein-Gordon normalization",
        ));
    }
    // (k⁰+k′⁰)·Σ_x e^{i(k⃗′−k⃗)·x⃗}·(L/n)³, factorized over axes.
    let dx = box_l / n as f64;
    let mut lattice = Complex64::new(1.0, 0.0);
    for axis in 0..3 {
        let dk = (2.0 * PI / box_l) * (mp[axis] - m[axis]) as f64;
        let mut axis_sum = Complex64::new(0.0, 0.0);
        for j in 0..n {
            axis_sum += Complex64::new(0.0, dk * j as f64 * dx).exp();
        }
        lattice *= axis_sum * dx;
    }
    Ok(lattice * (k0 + kp0))
}

fn lattice_indices(k: [f64; 3], box_l: f64, n: usize) -> Result<[i64; 3]> {
    let mut m = [0i64; 3];
    for (axis, kc) in k.iter().enumerate() {
        let raw = kc * box_l / (2.0 * PI);
        let rounded = raw.round();
        if (raw - rounded).abs() > 1e-9 {
            return Err(Error::parameter(format!(
                "momentum component {kc} is not commensurate with box {box_l}"
            )));
        }
        if 2.0 * rounded.abs() >= n as f64 {
            return Err(Error::parameter(format!(
                "lattice index {rounded} outside the Nyquist band of n={n}"
            )));
        }
        m[axis] = rounded as i64;
    }
    Ok(m)
}
