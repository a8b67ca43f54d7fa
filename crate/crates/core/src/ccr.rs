//! Finite-dimensional demonstrations around the canonical commutation
//! relations.
//!
//! No finite matrix pair can satisfy [q,p] = i·I: the trace of a commutator
//! vanishes while tr(iI) = i·N, which forces the Frobenius residual
//! ‖[q,p] − iI‖_F ≥ √N for every pair. The truncated oscillator pair
//! saturates a stronger form: its defect is −i·N concentrated in the
//! top-occupation corner, with residual exactly N.
//!
//! The Weyl form of the CCR survives on a periodic lattice: the cyclic
//! translation T_β and the diagonal phase e^{−iαq} satisfy
//! T_β e^{−iαq} = e^{iαβ} e^{−iαq} T_β exactly whenever the phase is
//! commensurate with the ring (αL ∈ 2πZ); off the commensurate sublattice
//! the boundary wrap breaks the relation measurably.
//!
//! Occupation-number sequences are represented as eventually-constant
//! (finite prefix + tail value): enough to exhibit the class structure of
//! sequences differing at finitely many places, with the Fock class as
//! tail 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{single_lowering, OperatorMatrix};

/// Periodic one-dimensional lattice with position and translation operators.
#[derive(Debug, Clone)]
pub struct LatticeLine {
    n: usize,
    delta: f64,
}

impl LatticeLine {
    pub fn new(n: usize, delta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::parameter("lattice needs at least 2 points"));
        }
        if !(delta > 0.0) {
            return Err(Error::parameter(format!("spacing {delta} must be positive")));
        }
        Ok(LatticeLine { n, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Ring circumference L = nΔ.
    pub fn length(&self) -> f64 {
        self.n as f64 * self.delta
    }

    /// Site coordinate of index j.
    pub fn coordinate(&self, j: usize) -> f64 {
        j as f64 * self.delta
    }

    /// Diagonal position operator.
    pub fn position(&self) -> OperatorMatrix {
        OperatorMatrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                Complex64::new(self.coordinate(i), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Unitary cyclic shift by `sites` lattice sites: (Tψ)(q) = ψ(q − β).
    pub fn translation(&self, sites: i64) -> OperatorMatrix {
        let n = self.n as i64;
        let shift = sites.rem_euclid(n) as usize;
        OperatorMatrix::from_fn(self.n, self.n, |row, col| {
            if col == (row + self.n - shift) % self.n {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Diagonal unitary phase operator e^{−iαq}.
    pub fn phase(&self, alpha: f64) -> OperatorMatrix {
        OperatorMatrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                Complex64::new(0.0, -alpha * self.coordinate(i)).exp()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// ‖T_β e^{−iαq} − e^{iαβ} e^{−iαq} T_β‖_F for β = sites·Δ.
    ///
    /// Exactly zero (to rounding) when α·L ∈ 2πZ; otherwise the wrap-around
    /// sites pick up a mismatched phase and the residual is strictly
    /// positive.
    pub fn weyl_relation_residual(&self, alpha: f64, beta: f64) -> Result<f64> {
        let ratio = beta / self.delta;
        let sites = ratio.round();
        if (ratio - sites).abs() > 1e-9 {
            return Err(Error::parameter(format!(
                "β = {beta} is not a lattice translation (Δ = {})",
                self.delta
            )));
        }
        let t = self.translation(sites as i64);
        let e = self.phase(alpha);
        let lhs = &t * &e;
        let rhs = &e * &t * Complex64::new(0.0, alpha * beta).exp();
        Ok((lhs - rhs).norm())
    }
}

/// Outcome of the finite-dimensional trace obstruction.
#[derive(Debug, Clone, Copy)]
pub struct TraceObstruction {
    /// tr[q,p]: zero to rounding for any finite pair.
    pub trace_of_commutator: Complex64,
    /// √N, the Cauchy-Schwarz floor on the CCR residual.
    pub frobenius_lower_bound: f64,
    /// ‖[q,p] − iI‖_F.
    pub actual_residual: f64,
}

/// Measure how far a matrix pair is from satisfying [q,p] = iI.
pub fn trace_obstruction(qm: &OperatorMatrix, pm: &OperatorMatrix) -> Result<TraceObstruction> {
    let n = qm.nrows();
    if qm.ncols() != n || pm.nrows() != n || pm.ncols() != n {
        return Err(Error::Dimension {
            expected: n,
            found: pm.nrows().max(qm.ncols()),
        });
    }
    let mut comm = qm * pm - pm * qm;
    let trace = comm.trace();
    for i in 0..n {
        comm[(i, i)] -= Complex64::new(0.0, 1.0);
    }
    Ok(TraceObstruction {
        trace_of_commutator: trace,
        frobenius_lower_bound: (n as f64).sqrt(),
        actual_residual: comm.norm(),
    })
}

/// Truncated oscillator pair in the occupation basis:
/// q = i(a − a†)/√2, p = (a + a†)/√2, dimension n_max + 1.
pub fn truncated_position_momentum(n_max: usize) -> (OperatorMatrix, OperatorMatrix) {
    let d = n_max + 1;
    let a = single_lowering(d);
    let a_dag = a.adjoint();
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let q = (&a - &a_dag) * Complex64::new(0.0, inv_sqrt2);
    let p = (&a + &a_dag) * Complex64::new(inv_sqrt2, 0.0);
    (q, p)
}

/// ‖([q, pⁿ] − i·n·p^{n−1})·P_safe‖_F, with P_safe spanning the first
/// dim − n basis states.
///
/// For the truncated oscillator pair the identity is exact on that
/// subspace: n applications of p from occupation ≤ n_max − n never touch
/// the cutoff.
pub fn commutator_power_residual(
    qm: &OperatorMatrix,
    pm: &OperatorMatrix,
    n: usize,
) -> Result<f64> {
    let dim = qm.nrows();
    if qm.ncols() != dim || pm.nrows() != dim || pm.ncols() != dim {
        return Err(Error::Dimension {
            expected: dim,
            found: pm.nrows().max(qm.ncols()),
        });
    }
    if n < 1 {
        return Err(Error::parameter("power n must be at least 1"));
    }
    if n >= dim {
        return Err(Error::guard(format!(
            "power n = {n} leaves no safe subspace in dimension {dim}"
        )));
    }
    let mut p_pow = OperatorMatrix::identity(dim, dim);
    for _ in 0..n - 1 {
        p_pow = &p_pow * pm;
    }
    let p_n_minus_1 = p_pow.clone();
    p_pow = &p_pow * pm;

    let mut resid = qm * &p_pow - &p_pow * qm - p_n_minus_1 * Complex64::new(0.0, n as f64);
    // keep only the columns of the safe subspace
    let safe_cols = dim - n;
    for col in safe_cols..dim {
        for row in 0..dim {
            resid[(row, col)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(resid.norm())
}

/// Full-space residual ‖[q, pⁿ] − i·n·p^{n−1}‖_F, for edge-contamination
/// measurements.
pub fn commutator_power_residual_full(
    qm: &OperatorMatrix,
    pm: &OperatorMatrix,
    n: usize,
) -> Result<f64> {
    let dim = qm.nrows();
    if n < 1 || n >= dim {
        return Err(Error::parameter("power out of range"));
    }
    let mut p_pow = OperatorMatrix::identity(dim, dim);
    for _ in 0..n - 1 {
        p_pow = &p_pow * pm;
    }
    let p_n_minus_1 = p_pow.clone();
    p_pow = &p_pow * pm;
    let resid = qm * &p_pow - &p_pow * qm - p_n_minus_1 * Complex64::new(0.0, n as f64);
    Ok(resid.norm())
}

/// Occupation-number sequence in eventually-constant form: an explicit
/// finite prefix followed by a constant tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationSequence {
    prefix: Vec<u64>,
    tail: u64,
}

impl OccupationSequence {
    pub fn new(prefix: Vec<u64>, tail: u64) -> Self {
        OccupationSequence { prefix, tail }
    }

    /// The vacuum: all occupations zero.
    pub fn vacuum() -> Self {
        OccupationSequence {
            prefix: Vec::new(),
            tail: 0,
        }
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> u64 {
        self.tail
    }

    pub fn value_at(&self, index: usize) -> u64 {
        self.prefix.get(index).copied().unwrap_or(self.tail)
    }

    /// True iff the two sequences differ at only finitely many indices;
    /// for eventually-constant sequences, iff the tails agree.
    pub fn class_equal(&self, other: &OccupationSequence) -> bool {
        self.tail == other.tail
    }

    /// True iff the total occupation Σ n_k is finite, i.e. the sequence is
    /// in the Fock class (tail 0).
    pub fn is_fock_class(&self) -> bool {
        self.tail == 0
    }

    /// Sequence with one more quantum at `index` (creation-operator action).
    pub fn raised(&self, index: usize) -> OccupationSequence {
        let mut next = self.materialized_to(index);
        next.prefix[index] += 1;
        next
    }

    /// Sequence with one quantum removed at `index`, or None when the
    /// occupation there is zero (annihilation kills the state).
    pub fn lowered(&self, index: usize) -> Option<OccupationSequence> {
        if self.value_at(index) == 0 {
            return None;
        }
        let mut next = self.materialized_to(index);
        next.prefix[index] -= 1;
        Some(next)
    }

    fn materialized_to(&self, index: usize) -> OccupationSequence {
        let mut prefix = self.prefix.clone();
        while prefix.len() <= index {
            prefix.push(self.tail);
        }
        OccupationSequence {
            prefix,
            tail: self.tail,
        }
    }

    /// Number of indices where the sequences differ, None when infinite.
    pub fn difference_count(&self, other: &OccupationSequence) -> Option<usize> {
        if self.tail != other.tail {
            return None;
        }
        let span = self.prefix.len().max(other.prefix.len());
        Some(
            (0..span)
                .filter(|&i| self.value_at(i) != other.value_at(i))
                .count(),
        )
    }
}
