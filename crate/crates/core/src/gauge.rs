//! Unphysical-photon operators, the physical-sector condition and operator
//! gauge transformations.
//!
//! Per momentum mode the time-like and longitudinal ladder operators are
//! repackaged into b₁ = k_μa^μ/(√2 k⁰) and b₂† = k^μa_μ^K/(√2 k⁰), which
//! satisfy ordinary commutation relations and are exchanged by
//! K-conjugation: b₁^K = b₂†. A state is in the physical sector iff both
//! b₁ and b₂ annihilate it for every mode.
//!
//! A gauge function χ(k⃗) on the mass shell induces the profile
//! q_ν = −i k_ν χ and the conserved gauge charge Q̃_g, whose commutator with
//! the mode-expanded field matrix reproduces the gradient shift
//! i[Q̃_g, A^μ(x)] = ∂^μχ(x) exactly away from the truncation edge.

use std::sync::Arc;

use num_complex::Complex64;

use crate::displacement::{DisplacementSpec, GeneratorKind};
use crate::error::{Error, Result};
use crate::fock::{
    k_conjugate, masked_frobenius, FockMode, FockRep, LorentzIndex, OperatorMatrix, StateVector,
};
use crate::modes::{orthonormal_triad, ModeGrid, ModeProfile, ProfileKind};

/// Complex scalar amplitude χ(k⃗ᵢ) per grid node, on the mass shell
/// k⁰ = |k⃗|.
#[derive(Debug, Clone)]
pub struct GaugeFunction {
    grid: Arc<ModeGrid>,
    values: Vec<Complex64>,
}

impl GaugeFunction {
    pub fn new(grid: &Arc<ModeGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(GaugeFunction {
            grid: Arc::clone(grid),
            values,
        })
    }

    pub fn constant(grid: &Arc<ModeGrid>, value: Complex64) -> Self {
        GaugeFunction {
            grid: Arc::clone(grid),
            values: vec![value; grid.len()],
        }
    }

    pub fn grid(&self) -> &Arc<ModeGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Four-momentum (k⁰, k⃗) of node `i` with k⁰ = |k⃗|.
    fn four_momentum(&self, i: usize) -> [f64; 4] {
        let n = self.grid.nodes()[i];
        [self.grid.k_abs(i), n[0], n[1], n[2]]
    }

    /// The induced profile q_ν(k) = −i k_ν χ(k) (lower index, so
    /// q₀ = −ik⁰χ and q_j = +ik^jχ).
    pub fn induced_profile(&self) -> ModeProfile {
        let minus_i = Complex64::new(0.0, -1.0);
        let plus_i = Complex64::new(0.0, 1.0);
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, chi)| {
                let k = self.four_momentum(i);
                [
                    minus_i * k[0] * chi,
                    plus_i * k[1] * chi,
                    plus_i * k[2] * chi,
                    plus_i * k[3] * chi,
                ]
            })
            .collect();
        ModeProfile::with_kind(&self.grid, values, ProfileKind::Gauge, 0.0)
    }

    /// max over nodes of |k^ν q_ν| = |k²χ|; zero on-shell up to rounding.
    pub fn null_contraction_max(&self) -> f64 {
        let profile = self.induced_profile();
        let mut worst: f64 = 0.0;
        for i in 0..self.grid.len() {
            let k = self.four_momentum(i);
            let mut contraction = Complex64::new(0.0, 0.0);
            for nu in 0..4 {
                contraction += k[nu] * profile.value(i, nu);
            }
            worst = worst.max(contraction.norm());
        }
        worst
    }

    /// Displacement amplitudes α_{ν,i} = √wᵢ·(−i k_ν χᵢ) with the
    /// K-symmetric generator tag.
    pub fn displacement_spec(&self) -> DisplacementSpec {
        DisplacementSpec::from_profile(&self.induced_profile(), GeneratorKind::KSymmetric)
    }

    /// Gauge charge Q̃_g = −Σᵢ √wᵢ [χᵢ* k_ν a^ν + χᵢ k_ν (a^ν)^K],
    /// built through the Lorentz contraction route.
    pub fn gauge_charge(&self, rep: &FockRep) -> Result<OperatorMatrix> {
        self.displacement_spec().build_qtilde(rep)
    }

    /// The same charge through the unphysical-photon route,
    /// Q̃_g = −√2·Σᵢ √wᵢ k⁰ᵢ [χᵢ* b₁ᵢ + χᵢ b₂ᵢ†].
    pub fn gauge_charge_via_unphysical(&self, rep: &FockRep) -> Result<OperatorMatrix> {
        let mut out = OperatorMatrix::zeros(rep.dim(), rep.dim());
        let sqrt2 = 2.0f64.sqrt();
        for (i, chi) in self.values.iter().enumerate() {
            let node = self.grid.nodes()[i];
            let ladder = unphysical_ladder(rep, i, node)?;
            let scale = sqrt2 * self.grid.weights()[i].sqrt() * self.grid.k_abs(i);
            out -= (ladder.b1 * chi.conj() + ladder.b2_dag * *chi) * Complex64::new(scale, 0.0);
        }
        Ok(out)
    }

    /// c-number gauge field χ(x) = Σᵢ wᵢ [χᵢ e^{−ik·x} + χᵢ* e^{ik·x}].
    pub fn chi_at(&self, x: [f64; 4]) -> f64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, chi) in self.values.iter().enumerate() {
            let k = self.four_momentum(i);
            let phase = k[0] * x[0] - k[1] * x[1] - k[2] * x[2] - k[3] * x[3];
            sum += self.grid.weights()[i] * chi * Complex64::new(0.0, -phase).exp();
        }
        2.0 * sum.re
    }

    /// Gradient ∂^μχ(x) (upper index) by the same mode sum.
    pub fn gradient_at(&self, x: [f64; 4]) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (i, chi) in self.values.iter().enumerate() {
            let k = self.four_momentum(i);
            let phase = k[0] * x[0] - k[1] * x[1] - k[2] * x[2] - k[3] * x[3];
            let forward = Complex64::new(0.0, -phase).exp() * chi * self.grid.weights()[i];
            for mu in 0..4 {
                let k_upper = k[mu];
                let term = Complex64::new(0.0, -k_upper) * forward;
                out[mu] += term + term.conj();
            }
        }
        out
    }

    /// Mode-sum residual of □χ(x): the on-shell factor (k⁰)² − |k⃗|² is built
    /// from the same stored |k⃗|, so the residual is zero by construction.
    pub fn box_residual(&self, x: [f64; 4]) -> f64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, chi) in self.values.iter().enumerate() {
            let k = self.four_momentum(i);
            let k0 = k[0];
            let spatial_sq = k[1] * k[1] + k[2] * k[2] + k[3] * k[3];
            // −k² = −(k⁰² − |k⃗|²); k⁰ = √(|k⃗|²) makes this exactly zero
            // whenever |k⃗|² round-trips through sqrt, and ~ulp otherwise.
            let box_factor = -(k0 * k0 - spatial_sq);
            let phase = k0 * x[0] - k[1] * x[1] - k[2] * x[2] - k[3] * x[3];
            sum += self.grid.weights()[i]
                * box_factor
                * chi
                * Complex64::new(0.0, -phase).exp();
        }
        2.0 * sum.re.abs()
    }
}

/// The four unphysical-photon ladder matrices of one momentum mode.
pub struct UnphysicalLadder {
    pub b1: OperatorMatrix,
    pub b2: OperatorMatrix,
    pub b1_dag: OperatorMatrix,
    pub b2_dag: OperatorMatrix,
}

/// b₁ = (a₀ + a_∥)/√2 and b₂ = (a_∥ − a₀)/√2 with a_∥ = k_j a^j/|k⃗|,
/// as dense matrices on `rep`.
///
/// The representation must carry all four Lorentz components of
/// `momentum`; `k` is the momentum vector of that mode.
pub fn unphysical_ladder(rep: &FockRep, momentum: usize, k: [f64; 3]) -> Result<UnphysicalLadder> {
    let norm = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if norm == 0.0 {
        return Err(Error::parameter("unphysical ladders need k ≠ 0"));
    }
    let a0 = rep.lowering(FockMode::new(momentum, LorentzIndex::T))?;
    // a_∥ = k_j a^j/|k⃗| = −k̂·a⃗ (lower spatial index)
    let mut a_par = OperatorMatrix::zeros(rep.dim(), rep.dim());
    for (axis, lorentz) in [LorentzIndex::X, LorentzIndex::Y, LorentzIndex::Z]
        .into_iter()
        .enumerate()
    {
        let a = rep.lowering(FockMode::new(momentum, lorentz))?;
        a_par -= a * Complex64::new(k[axis] / norm, 0.0);
    }
    let inv_sqrt2 = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    let b1 = (&a0 + &a_par) * inv_sqrt2;
    let b2 = (&a_par - &a0) * inv_sqrt2;
    let b1_dag = b1.adjoint();
    let b2_dag = b2.adjoint();
    Ok(UnphysicalLadder {
        b1,
        b2,
        b1_dag,
        b2_dag,
    })
}

/// Outcome of the physical-sector condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalCheck {
    pub physical: bool,
    /// max over modes of ‖b₁ψ‖, ‖b₂ψ‖ (for normalized ψ).
    pub residual: f64,
}

/// A state is physical iff b₁ψ = b₂ψ = 0 for every represented mode.
pub fn physical_state_check(
    state: &StateVector,
    rep: &FockRep,
    momenta: &[(usize, [f64; 3])],
    tol: f64,
) -> Result<PhysicalCheck> {
    if state.len() != rep.dim() {
        return Err(Error::Dimension {
            expected: rep.dim(),
            found: state.len(),
        });
    }
    let scale = state.norm();
    if scale == 0.0 {
        return Err(Error::parameter("cannot classify the zero vector"));
    }
    let mut residual: f64 = 0.0;
    for &(momentum, k) in momenta {
        let ladder = unphysical_ladder(rep, momentum, k)?;
        residual = residual.max((&ladder.b1 * state).norm() / scale);
        residual = residual.max((&ladder.b2 * state).norm() / scale);
    }
    Ok(PhysicalCheck {
        physical: residual <= tol,
        residual,
    })
}

/// Transverse one-photon state ε⃗·a⃗†|0⟩ with ε⃗ = e₁ ⊥ k⃗.
pub fn transverse_photon(rep: &FockRep, momentum: usize, k: [f64; 3]) -> Result<StateVector> {
    let (e1, _, _) = orthonormal_triad(k)?;
    let mut state = StateVector::zeros(rep.dim());
    for (axis, lorentz) in [LorentzIndex::X, LorentzIndex::Y, LorentzIndex::Z]
        .into_iter()
        .enumerate()
    {
        let a_dag = rep.raising(FockMode::new(momentum, lorentz))?;
        state += a_dag * rep.vacuum() * Complex64::new(e1[axis], 0.0);
    }
    Ok(state)
}

/// Field matrices A^μ(x) = Σᵢ √wᵢ [a^μ(kᵢ) e^{−ik·x} + (a^μ(kᵢ))^K e^{ik·x}]
/// for all four Lorentz components, over the nodes of `grid`.
pub fn field_operator(
    rep: &FockRep,
    grid: &ModeGrid,
    x: [f64; 4],
) -> Result<[OperatorMatrix; 4]> {
    let eta = rep.eta();
    let mut out = [
        OperatorMatrix::zeros(rep.dim(), rep.dim()),
        OperatorMatrix::zeros(rep.dim(), rep.dim()),
        OperatorMatrix::zeros(rep.dim(), rep.dim()),
        OperatorMatrix::zeros(rep.dim(), rep.dim()),
    ];
    for i in 0..grid.len() {
        let node = grid.nodes()[i];
        let k0 = grid.k_abs(i);
        let phase = k0 * x[0] - node[0] * x[1] - node[1] * x[2] - node[2] * x[3];
        let forward = Complex64::new(0.0, -phase).exp();
        let sqrt_w = grid.weights()[i].sqrt();
        for (mu, slot) in out.iter_mut().enumerate() {
            let a = rep.lowering(FockMode::new(i, LorentzIndex::from_index(mu)?))?;
            let a_k = k_conjugate(&a, &eta)?;
            *slot += a * (forward * sqrt_w) + a_k * (forward.conj() * sqrt_w);
        }
    }
    Ok(out)
}

/// max over μ of ‖i[Q̃_g, A^μ(x)] − ∂^μχ(x)·I‖_F on the safe subspace.
///
/// The commutator of two ladder-linear operators is exact two levels below
/// the truncation edge, so the contract is ≤ 1e−10 there.
pub fn gauge_shift_residual(chi: &GaugeFunction, rep: &FockRep, x: [f64; 4]) -> Result<f64> {
    let charge = chi.gauge_charge(rep)?;
    let fields = field_operator(rep, chi.grid(), x)?;
    let grad = chi.gradient_at(x);
    let mask = rep.safe_mask(2);
    let i_unit = Complex64::new(0.0, 1.0);
    let mut worst: f64 = 0.0;
    for (mu, field) in fields.iter().enumerate() {
        let mut resid = (&charge * field - field * &charge) * i_unit;
        for d in 0..rep.dim() {
            resid[(d, d)] -= grad[mu];
        }
        worst = worst.max(masked_frobenius(&resid, &mask));
    }
    Ok(worst)
}

/// ‖∂_μA^μ(x) − its b₁/b₂† mode expansion‖_F: the four-divergence collapses
/// onto the unphysical sector,
/// ∂_μA^μ(x) = −i√2·Σᵢ √wᵢ k⁰ᵢ [b₁ᵢ e^{−ik·x} − b₂ᵢ† e^{ik·x}].
pub fn divergence_identity_residual(rep: &FockRep, grid: &ModeGrid, x: [f64; 4]) -> Result<f64> {
    let eta = rep.eta();
    let sqrt2 = 2.0f64.sqrt();
    let mut via_a = OperatorMatrix::zeros(rep.dim(), rep.dim());
    let mut via_b = OperatorMatrix::zeros(rep.dim(), rep.dim());
    for i in 0..grid.len() {
        let node = grid.nodes()[i];
        let k0 = grid.k_abs(i);
        let k_lower = [k0, -node[0], -node[1], -node[2]];
        let phase = k0 * x[0] - node[0] * x[1] - node[1] * x[2] - node[2] * x[3];
        let forward = Complex64::new(0.0, -phase).exp();
        let sqrt_w = grid.weights()[i].sqrt();

        // ∂_μ A^μ: each plane wave pulls down ∓ik_μ
        for mu in 0..4 {
            let a = rep.lowering(FockMode::new(i, LorentzIndex::from_index(mu)?))?;
            let a_k = k_conjugate(&a, &eta)?;
            let coeff = Complex64::new(0.0, -k_lower[mu]) * forward * sqrt_w;
            via_a += a * coeff + a_k * coeff.conj();
        }

        let ladder = unphysical_ladder(rep, i, node)?;
        let scale = Complex64::new(0.0, -sqrt2 * sqrt_w * k0);
        via_b += ladder.b1 * (scale * forward) - ladder.b2_dag * (scale * forward.conj());
    }
    Ok((via_a - via_b).norm())
}
