//! Wigner–Yanase skew information of observables, Kraus operators and
//! channels, plus the commutator frames the bound chains are built from.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{commutator, compensated_sum, hs_inner, ComplexMatrix};
use crate::quantum::{DensityMatrix, KrausChannel};

const HERMITIAN_TOL: f64 = 1e-10;

/// The commutator `[√ρ, K]` and its column vectors `[√ρ, K]|k⟩`.
#[derive(Clone, Debug)]
pub struct CommutatorFrame {
    pub source_operator_index: usize,
    pub matrix: ComplexMatrix,
    pub columns: Vec<Vec<Complex64>>,
}

impl CommutatorFrame {
    /// `‖columns[k]‖²` for every `k`.
    pub fn column_norms_sq(&self) -> Vec<f64> {
        self.columns.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect()
    }
}

/// Frame of `K` in the computational basis.
pub fn commutator_frame(state: &DensityMatrix, k: &ComplexMatrix) -> Result<CommutatorFrame> {
    commutator_frame_indexed(state, k, 0)
}

pub(crate) fn commutator_frame_indexed(
    state: &DensityMatrix,
    k: &ComplexMatrix,
    index: usize,
) -> Result<CommutatorFrame> {
    let matrix = commutator(state.sqrt_rho(), k)?;
    let columns = (0..matrix.cols()).map(|c| matrix.column(c)).collect();
    Ok(CommutatorFrame { source_operator_index: index, matrix, columns })
}

/// Frame of `K` with columns taken along an arbitrary orthonormal basis:
/// `columns[k] = [√ρ, K]|b_k⟩` where `|b_k⟩` is column `k` of `basis`.
pub fn commutator_frame_in_basis(
    state: &DensityMatrix,
    k: &ComplexMatrix,
    basis: &ComplexMatrix,
) -> Result<CommutatorFrame> {
    let defect = basis.unitarity_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::NotUnitary(defect));
    }
    let matrix = commutator(state.sqrt_rho(), k)?;
    let rotated = &matrix * basis;
    let columns = (0..rotated.cols()).map(|c| rotated.column(c)).collect();
    Ok(CommutatorFrame { source_operator_index: 0, matrix, columns })
}

/// `½ Tr([√ρ, K]† [√ρ, K])`, clamped at zero.
pub fn skew_info_operator(state: &DensityMatrix, k: &ComplexMatrix) -> Result<f64> {
    let c = commutator(state.sqrt_rho(), k)?;
    Ok((0.5 * hs_inner(&c, &c)?.re).max(0.0))
}

/// `I(ρ, N) = Σ_i I(ρ, K_i)`, compensated and summed in operator order.
pub fn skew_info_channel(state: &DensityMatrix, channel: &KrausChannel) -> Result<f64> {
    if channel.dim() != state.dim() {
        return Err(Error::DimensionMismatch { expected: state.dim(), found: channel.dim() });
    }
    let parts = channel.operators().iter().map(|k| skew_info_operator(state, k)).collect::<Result<Vec<_>>>()?;
    Ok(compensated_sum(parts))
}

fn require_hermitian(a: &ComplexMatrix) -> Result<()> {
    let defect = a.hermiticity_defect()?;
    if defect > HERMITIAN_TOL {
        Err(Error::NotHermitian(defect))
    } else {
        Ok(())
    }
}

/// `−½ Tr([√ρ, A]²)` for Hermitian `A`.
pub fn skew_info_observable(state: &DensityMatrix, a: &ComplexMatrix) -> Result<f64> {
    require_hermitian(a)?;
    let c = commutator(state.sqrt_rho(), a)?;
    Ok((-0.5 * (&c * &c).trace().re).max(0.0))
}

/// `¼ |Tr(ρ [A, B])|²`, the lower bound on `I(ρ,A)·I(ρ,B)`.
pub fn luo_observable_bound(state: &DensityMatrix, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    require_hermitian(a)?;
    require_hermitian(b)?;
    let c = commutator(a, b)?;
    Ok(0.25 * (state.rho() * &c).trace().norm_sqr())
}
