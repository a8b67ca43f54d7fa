//! Truncated multi-mode Fock representations and the Krein structure.
//!
//! Each mode of a [`FockRep`] is a pair (momentum index, Lorentz index) and
//! carries one tensor factor of dimension `n_max + 1`. Basis states are
//! ordered lexicographically in the occupation tuple, with the first mode in
//! the list as the most significant digit; this ordering is frozen so that
//! operator dumps and golden files are reproducible.
//!
//! The Krein metric η = (−1)^{N₀} (time-like occupation parity) turns the
//! positive-definite Fock-Hilbert space into a Krein space. Hermitian
//! conjugation with respect to the indefinite product is the K-conjugation
//! A^K = ηA†η, under which time-like ladder operators pick up a sign:
//! a₀^K = −a₀†, while spatial ones are unaffected, a_j^K = a_j†.
//!
//! Everything here is a dense brute-force oracle; identities are asserted on
//! the safe subspace away from the occupation cutoff, where truncation
//! defects (localized at the top occupation level) cannot contribute.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type OperatorMatrix = DMatrix<Complex64>;
pub type StateVector = DVector<Complex64>;

/// Hard cap on the total dimension of a dense representation.
pub const MAX_ORACLE_DIM: usize = 1_000_000;

/// Lorentz component label of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LorentzIndex {
    T,
    X,
    Y,
    Z,
}

impl LorentzIndex {
    pub const ALL: [LorentzIndex; 4] = [
        LorentzIndex::T,
        LorentzIndex::X,
        LorentzIndex::Y,
        LorentzIndex::Z,
    ];

    /// Diagonal metric entry g^{μμ} in the (+,−,−,−) signature.
    pub fn metric_sign(self) -> f64 {
        match self {
            LorentzIndex::T => 1.0,
            _ => -1.0,
        }
    }

    pub fn is_timelike(self) -> bool {
        self == LorentzIndex::T
    }

    pub fn index(self) -> usize {
        match self {
            LorentzIndex::T => 0,
            LorentzIndex::X => 1,
            LorentzIndex::Y => 2,
            LorentzIndex::Z => 3,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| Error::parameter(format!("Lorentz index {i} out of range")))
    }
}

/// g^{μν} = diag(1,−1,−1,−1).
pub fn metric(mu: LorentzIndex, nu: LorentzIndex) -> f64 {
    if mu == nu {
        mu.metric_sign()
    } else {
        0.0
    }
}

/// One tensor factor: a momentum node together with a Lorentz component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMode {
    pub momentum: usize,
    pub lorentz: LorentzIndex,
}

impl FockMode {
    pub fn new(momentum: usize, lorentz: LorentzIndex) -> Self {
        FockMode { momentum, lorentz }
    }
}

/// A truncated Fock representation: an ordered list of modes, each with
/// occupation numbers 0..=n_max.
#[derive(Debug, Clone)]
pub struct FockRep {
    modes: Vec<FockMode>,
    n_max: usize,
    dim: usize,
}

impl FockRep {
    pub fn new(modes: Vec<FockMode>, n_max: usize) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::parameter("representation needs at least one mode"));
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[i + 1..].contains(m) {
                return Err(Error::parameter(format!("duplicate mode {m:?} in representation")));
            }
        }
        let d = n_max + 1;
        let mut dim: usize = 1;
        for _ in &modes {
            dim = dim
                .checked_mul(d)
                .filter(|&v| v <= MAX_ORACLE_DIM)
                .ok_or_else(|| {
                    Error::parameter(format!(
                        "dense representation exceeds the {MAX_ORACLE_DIM}-dimension oracle cap"
                    ))
                })?;
        }
        Ok(FockRep { modes, n_max, dim })
    }

    /// All four Lorentz components of a single momentum node.
    pub fn four_component(momentum: usize, n_max: usize) -> Result<Self> {
        Self::new(
            LorentzIndex::ALL
                .iter()
                .map(|&l| FockMode::new(momentum, l))
                .collect(),
            n_max,
        )
    }

    pub fn modes(&self) -> &[FockMode] {
        &self.modes
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Per-factor dimension n_max + 1.
    pub fn factor_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn factor_index(&self, mode: FockMode) -> Option<usize> {
        self.modes.iter().position(|m| *m == mode)
    }

    /// Occupation digit of `factor` in basis state `index`.
    pub fn occupation(&self, index: usize, factor: usize) -> usize {
        let d = self.factor_dim();
        // stride of `factor` counts the factors to its right
        let stride = d.pow((self.modes.len() - 1 - factor) as u32);
        (index / stride) % d
    }

    /// All occupation digits of basis state `index`, in mode order.
    pub fn occupations(&self, index: usize) -> Vec<usize> {
        let d = self.factor_dim();
        let mut digits = vec![0usize; self.modes.len()];
        let mut rest = index;
        for f in (0..self.modes.len()).rev() {
            digits[f] = rest % d;
            rest /= d;
        }
        digits
    }

    /// The Fock vacuum |0,…,0⟩.
    pub fn vacuum(&self) -> StateVector {
        let mut v = StateVector::zeros(self.dim);
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// Embed a per-factor matrix as I ⊗ … ⊗ m ⊗ … ⊗ I at `factor`.
    pub fn embed(&self, factor: usize, m: &OperatorMatrix) -> OperatorMatrix {
        let d = self.factor_dim();
        assert_eq!(m.nrows(), d);
        assert_eq!(m.ncols(), d);
        let post = d.pow((self.modes.len() - 1 - factor) as u32);
        let pre = self.dim / (post * d);
        let mut out = OperatorMatrix::zeros(self.dim, self.dim);
        for p in 0..pre {
            for i in 0..d {
                for j in 0..d {
                    let v = m[(i, j)];
                    if v == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let row_base = (p * d + i) * post;
                    let col_base = (p * d + j) * post;
                    for q in 0..post {
                        out[(row_base + q, col_base + q)] = v;
                    }
                }
            }
        }
        out
    }

    /// Truncated annihilation and creation matrices of one mode.
    ///
    /// [a, a†] = I − (n_max+1)·P_top on the full space; the defect is
    /// entirely supported on the top occupation level.
    pub fn ladder(&self, mode: FockMode) -> Result<(OperatorMatrix, OperatorMatrix)> {
        let f = self
            .factor_index(mode)
            .ok_or_else(|| Error::parameter(format!("mode {mode:?} not in representation")))?;
        let a_single = single_lowering(self.factor_dim());
        let a = self.embed(f, &a_single);
        let a_dag = self.embed(f, &a_single.adjoint());
        Ok((a, a_dag))
    }

    pub fn lowering(&self, mode: FockMode) -> Result<OperatorMatrix> {
        Ok(self.ladder(mode)?.0)
    }

    pub fn raising(&self, mode: FockMode) -> Result<OperatorMatrix> {
        Ok(self.ladder(mode)?.1)
    }

    /// Number operator a†a of one mode (diagonal).
    pub fn number_operator(&self, mode: FockMode) -> Result<OperatorMatrix> {
        let f = self
            .factor_index(mode)
            .ok_or_else(|| Error::parameter(format!("mode {mode:?} not in representation")))?;
        let d = self.factor_dim();
        let n_single = OperatorMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(i as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Ok(self.embed(f, &n_single))
    }

    /// Total time-like number operator N₀ = Σ a₀†a₀ over all μ=0 modes.
    pub fn timelike_number_operator(&self) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(self.dim, self.dim);
        for m in &self.modes {
            if m.lorentz.is_timelike() {
                out += self.number_operator(*m).expect("mode is in rep");
            }
        }
        out
    }

    /// Krein metric η = (−1)^{N₀}: diagonal ±1 by time-like occupation parity.
    pub fn eta(&self) -> KreinMetric {
        let timelike: Vec<usize> = self
            .modes
            .iter()
            .enumerate()
            .filter(|(_, m)| m.lorentz.is_timelike())
            .map(|(f, _)| f)
            .collect();
        let signs = (0..self.dim)
            .map(|idx| {
                let occ = self.occupations(idx);
                let n0: usize = timelike.iter().map(|&f| occ[f]).sum();
                if n0 % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect();
        KreinMetric { signs }
    }

    /// 0/1 mask selecting basis states with every occupation ≤ n_max − margin.
    pub fn safe_mask(&self, margin: usize) -> Vec<bool> {
        let cap = self.n_max.saturating_sub(margin);
        self.occupancy_mask(cap)
    }

    /// 0/1 mask selecting basis states with every occupation ≤ cap.
    pub fn occupancy_mask(&self, cap: usize) -> Vec<bool> {
        (0..self.dim)
            .map(|idx| self.occupations(idx).iter().all(|&n| n <= cap))
            .collect()
    }

    /// Diagonal projector onto [`FockRep::safe_mask`].
    pub fn safe_projector(&self, margin: usize) -> OperatorMatrix {
        let mask = self.safe_mask(margin);
        OperatorMatrix::from_fn(self.dim, self.dim, |i, j| {
            if i == j && mask[i] {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// d×d lowering matrix, a|n⟩ = √n|n−1⟩.
pub fn single_lowering(d: usize) -> OperatorMatrix {
    let mut a = OperatorMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Diagonal ±1 metric with entry (−1)^{time-like occupation}.
#[derive(Debug, Clone)]
pub struct KreinMetric {
    signs: Vec<f64>,
}

impl KreinMetric {
    pub fn signs(&self) -> &[f64] {
        &self.signs
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    pub fn is_identity(&self) -> bool {
        self.signs.iter().all(|&s| s == 1.0)
    }

    pub fn to_matrix(&self) -> OperatorMatrix {
        OperatorMatrix::from_fn(self.signs.len(), self.signs.len(), |i, j| {
            if i == j {
                Complex64::new(self.signs[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// K-conjugation A^K = ηA†η.
pub fn k_conjugate(op: &OperatorMatrix, metric: &KreinMetric) -> Result<OperatorMatrix> {
    if op.nrows() != metric.dim() || op.ncols() != metric.dim() {
        return Err(Error::Dimension {
            expected: metric.dim(),
            found: op.nrows(),
        });
    }
    let mut out = op.adjoint();
    let s = metric.signs();
    for i in 0..out.nrows() {
        for j in 0..out.ncols() {
            out[(i, j)] *= s[i] * s[j];
        }
    }
    Ok(out)
}

/// Indefinite inner product (φ, ψ) = ⟨φ | ηψ⟩.
pub fn krein_inner(
    phi: &StateVector,
    psi: &StateVector,
    metric: &KreinMetric,
) -> Result<Complex64> {
    if phi.len() != metric.dim() || psi.len() != metric.dim() {
        return Err(Error::Dimension {
            expected: metric.dim(),
            found: phi.len().max(psi.len()),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..phi.len() {
        acc += phi[i].conj() * psi[i] * metric.signs()[i];
    }
    Ok(acc)
}

/// ‖P M P‖_F with P the diagonal 0/1 projector given by `mask`.
pub fn masked_frobenius(m: &OperatorMatrix, mask: &[bool]) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        if !mask[i] {
            continue;
        }
        for j in 0..m.ncols() {
            if mask[j] {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Residual ‖[a^μ, (a^ν)^K] + g^{μν}·I‖_F on the safe subspace.
///
/// The covariant commutation table: −g^{μν} on the diagonal (so +1 repeated
/// for μ=ν spatial, −1 for μ=ν=0) and 0 for independent components.
pub fn covariant_commutator_check(
    rep: &FockRep,
    momentum: usize,
    mu: LorentzIndex,
    nu: LorentzIndex,
) -> Result<f64> {
    let a_mu = rep.lowering(FockMode::new(momentum, mu))?;
    let a_nu = rep.lowering(FockMode::new(momentum, nu))?;
    let eta = rep.eta();
    let a_nu_k = k_conjugate(&a_nu, &eta)?;
    let comm = &a_mu * &a_nu_k - &a_nu_k * &a_mu;
    let mut resid = comm;
    let g = metric(mu, nu);
    for i in 0..rep.dim() {
        resid[(i, i)] += Complex64::new(g, 0.0);
    }
    Ok(masked_frobenius(&resid, &rep.safe_mask(1)))
}

/// exp(A)·v by scaled Taylor summation of matrix-vector products.
///
/// Independent of any spectral factorization of A; used as the full-dimension
/// dense route for displaced vacua. Scaling uses the 1-norm (max column
/// sum), which stays close to the spectral norm for ladder-type matrices.
pub fn exp_action(a: &OperatorMatrix, v: &StateVector) -> StateVector {
    let mut norm1: f64 = 0.0;
    for col in 0..a.ncols() {
        let mut sum = 0.0;
        for row in 0..a.nrows() {
            sum += a[(row, col)].norm();
        }
        norm1 = norm1.max(sum);
    }
    let steps = (norm1 / 4.0).ceil().max(1.0).min(1024.0) as usize;
    let scaled = a / Complex64::new(steps as f64, 0.0);
    let mut state = v.clone();
    for _ in 0..steps {
        let mut acc = state.clone();
        let mut term = state.clone();
        for k in 1..200 {
            term = (&scaled * &term) / Complex64::new(k as f64, 0.0);
            acc += &term;
            if term.norm() <= 1e-18 * acc.norm() {
                break;
            }
        }
        state = acc;
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_level_rep() -> FockRep {
        FockRep::new(vec![FockMode::new(0, LorentzIndex::T)], 1).unwrap()
    }

    #[test]
    fn two_level_lowering_matrix() {
        let rep = two_level_rep();
        let (a, a_dag) = rep.ladder(FockMode::new(0, LorentzIndex::T)).unwrap();
        assert_eq!(a[(0, 1)], c(1.0, 0.0));
        assert_eq!(a[(0, 0)], c(0.0, 0.0));
        assert_eq!(a[(1, 0)], c(0.0, 0.0));
        assert_eq!(a[(1, 1)], c(0.0, 0.0));
        assert_eq!(a_dag, a.adjoint());
    }

    #[test]
    fn ladder_commutator_defect_is_on_top_level() {
        let rep = FockRep::new(vec![FockMode::new(0, LorentzIndex::X)], 7).unwrap();
        let (a, a_dag) = rep.ladder(FockMode::new(0, LorentzIndex::X)).unwrap();
        let comm = &a * &a_dag - &a_dag * &a;
        // [a,a†] = I − (n_max+1)·P_top
        for i in 0..rep.dim() {
            for j in 0..rep.dim() {
                let expect = if i != j {
                    c(0.0, 0.0)
                } else if i == rep.n_max() {
                    c(1.0 - (rep.n_max() + 1) as f64, 0.0)
                } else {
                    c(1.0, 0.0)
                };
                assert!((comm[(i, j)] - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn annihilator_kills_vacuum() {
        let rep = FockRep::new(
            vec![
                FockMode::new(0, LorentzIndex::T),
                FockMode::new(1, LorentzIndex::X),
            ],
            3,
        )
        .unwrap();
        for mode in rep.modes().to_vec() {
            let a = rep.lowering(mode).unwrap();
            assert_eq!((a * rep.vacuum()).norm(), 0.0);
        }
    }

    #[test]
    fn eta_without_timelike_modes_is_identity() {
        let rep = FockRep::new(
            vec![
                FockMode::new(0, LorentzIndex::X),
                FockMode::new(0, LorentzIndex::Y),
            ],
            2,
        )
        .unwrap();
        assert!(rep.eta().is_identity());
    }

    #[test]
    fn eta_is_involutive_and_anticommutes_with_timelike_ladders() {
        let rep = FockRep::new(
            vec![
                FockMode::new(0, LorentzIndex::T),
                FockMode::new(0, LorentzIndex::Z),
            ],
            4,
        )
        .unwrap();
        let eta = rep.eta().to_matrix();
        let id = OperatorMatrix::identity(rep.dim(), rep.dim());
        assert_eq!((&eta * &eta - id).norm(), 0.0);
        assert_eq!(eta.adjoint(), eta);

        let (a0, a0_dag) = rep.ladder(FockMode::new(0, LorentzIndex::T)).unwrap();
        assert_eq!((&eta * &a0 + &a0 * &eta).norm(), 0.0);
        assert_eq!((&eta * &a0_dag + &a0_dag * &eta).norm(), 0.0);

        // spatial ladders commute with η instead
        let (az, _) = rep.ladder(FockMode::new(0, LorentzIndex::Z)).unwrap();
        assert_eq!((&eta * &az - &az * &eta).norm(), 0.0);
    }

    #[test]
    fn k_conjugation_signs_and_involution() {
        let rep = FockRep::new(
            vec![
                FockMode::new(0, LorentzIndex::T),
                FockMode::new(0, LorentzIndex::X),
            ],
            3,
        )
        .unwrap();
        let eta = rep.eta();
        let (a0, a0_dag) = rep.ladder(FockMode::new(0, LorentzIndex::T)).unwrap();
        let (ax, ax_dag) = rep.ladder(FockMode::new(0, LorentzIndex::X)).unwrap();

        assert_eq!((k_conjugate(&a0, &eta).unwrap() + &a0_dag).norm(), 0.0);
        assert_eq!((k_conjugate(&ax, &eta).unwrap() - &ax_dag).norm(), 0.0);

        let eta_m = eta.to_matrix();
        assert_eq!((k_conjugate(&eta_m, &eta).unwrap() - &eta_m).norm(), 0.0);

        // (A^K)^K = A for a generic operator
        let rand = OperatorMatrix::from_fn(rep.dim(), rep.dim(), |i, j| {
            c((i as f64 * 0.37 + j as f64 * 0.11).sin(), (i as f64 - j as f64).cos())
        });
        let back = k_conjugate(&k_conjugate(&rand, &eta).unwrap(), &eta).unwrap();
        assert!((back - &rand).norm() < 1e-12);
    }

    #[test]
    fn krein_inner_product_signs() {
        let rep = FockRep::new(
            vec![
                FockMode::new(0, LorentzIndex::T),
                FockMode::new(0, LorentzIndex::X),
            ],
            2,
        )
        .unwrap();
        let eta = rep.eta();
        let vac = rep.vacuum();
        assert_eq!(krein_inner(&vac, &vac, &eta).unwrap(), c(1.0, 0.0));

        let one_t = rep.raising(FockMode::new(0, LorentzIndex::T)).unwrap() * &vac;
        assert_eq!(krein_inner(&one_t, &one_t, &eta).unwrap(), c(-1.0, 0.0));

        let one_x = rep.raising(FockMode::new(0, LorentzIndex::X)).unwrap() * &vac;
        assert_eq!(krein_inner(&one_x, &one_x, &eta).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn krein_norm_sign_follows_timelike_occupation_parity() {
        let rep = FockRep::new(
            vec![
                FockMode::new(0, LorentzIndex::T),
                FockMode::new(1, LorentzIndex::T),
                FockMode::new(0, LorentzIndex::Y),
            ],
            2,
        )
        .unwrap();
        let eta = rep.eta();
        for idx in 0..rep.dim() {
            let mut v = StateVector::zeros(rep.dim());
            v[idx] = c(1.0, 0.0);
            let occ = rep.occupations(idx);
            let n0 = occ[0] + occ[1];
            let expect = if n0 % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(krein_inner(&v, &v, &eta).unwrap(), c(expect, 0.0));
        }
    }

    #[test]
    fn covariant_commutator_table() {
        let rep = FockRep::four_component(0, 2).unwrap();
        for mu in LorentzIndex::ALL {
            for nu in LorentzIndex::ALL {
                let resid = covariant_commutator_check(&rep, 0, mu, nu).unwrap();
                assert!(
                    resid < 1e-12,
                    "[a^{mu:?}, (a^{nu:?})^K] residual {resid}"
                );
            }
        }
    }

    #[test]
    fn tensor_order_is_a_basis_permutation() {
        let m0 = FockMode::new(0, LorentzIndex::T);
        let m1 = FockMode::new(1, LorentzIndex::X);
        let rep_a = FockRep::new(vec![m0, m1], 2).unwrap();
        let rep_b = FockRep::new(vec![m1, m0], 2).unwrap();
        let op_a = rep_a.raising(m0).unwrap();
        let op_b = rep_b.raising(m0).unwrap();

        let d = rep_a.factor_dim();
        // index (n0, n1) in rep_a = n0·d + n1  ↔  rep_b index n1·d + n0
        let perm: Vec<usize> = (0..rep_a.dim())
            .map(|idx| {
                let (n0, n1) = (idx / d, idx % d);
                n1 * d + n0
            })
            .collect();
        for i in 0..rep_a.dim() {
            for j in 0..rep_a.dim() {
                assert_eq!(op_a[(i, j)], op_b[(perm[i], perm[j])]);
            }
        }
    }

    #[test]
    fn oracle_dimension_cap() {
        let modes: Vec<FockMode> = (0..8).map(|i| FockMode::new(i, LorentzIndex::T)).collect();
        // 13^8 ≈ 8·10^8 > 10^6
        assert!(matches!(
            FockRep::new(modes, 12),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn duplicate_modes_rejected() {
        let m = FockMode::new(0, LorentzIndex::T);
        assert!(FockRep::new(vec![m, m], 2).is_err());
    }

    #[test]
    fn exp_action_matches_dense_exponential() {
        let d = 12;
        let a = OperatorMatrix::from_fn(d, d, |i, j| {
            c(
                ((i * 7 + j * 3) as f64 * 0.41).sin() * 0.3,
                ((i + 2 * j) as f64 * 0.23).cos() * 0.2,
            )
        });
        let v = StateVector::from_fn(d, |i, _| c((i as f64 * 0.17).cos(), (i as f64 * 0.61).sin()));
        let direct = a.exp() * &v;
        let taylor = exp_action(&a, &v);
        assert!((direct - &taylor).norm() < 1e-12 * taylor.norm());
    }

    #[test]
    fn safe_mask_strips_the_edge() {
        let rep = FockRep::new(
            vec![
                FockMode::new(0, LorentzIndex::T),
                FockMode::new(1, LorentzIndex::T),
            ],
            3,
        )
        .unwrap();
        let mask = rep.safe_mask(1);
        for idx in 0..rep.dim() {
            let occ = rep.occupations(idx);
            assert_eq!(mask[idx], occ.iter().all(|&n| n <= 2));
        }
    }
}
