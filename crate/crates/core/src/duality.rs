//! Duals of weak OVFs: the canonical dual, the parameterization of all
//! duals through right/left inverses of the synthesis and analysis
//! operators, orthogonality, interpolation and direct sums.

use crate::error::{OvfError, Precondition, Result};
use crate::frame::{analysis_operator, mixed_frame_operator, split_blocks, WeakOvf};
use crate::numkernel::Op;

/// A frame together with a verified dual.
#[derive(Debug, Clone, PartialEq)]
pub struct DualPair {
    pub primal: WeakOvf,
    pub dual: WeakOvf,
    /// `max(‖Σ Ψ_n* B_n − I‖, ‖Σ Φ_n* A_n − I‖)`.
    pub duality_residual: f64,
}

/// `({A_n S⁻¹}, {Ψ_n (S⁻¹)*})`.
pub fn canonical_dual(f: &WeakOvf) -> Result<WeakOvf> {
    let s_inv = f.frame_operator_inverse()?;
    let s_inv_adj = s_inv.adjoint();
    WeakOvf::new(
        f.a().iter().map(|a| a * &s_inv).collect(),
        f.psi().iter().map(|p| p * &s_inv_adj).collect(),
        *f.tol(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualBounds {
    pub lower: f64,
    pub upper: f64,
    /// Largest relative deviation of `(lower, upper)` from `(1/b, 1/a)`.
    pub reciprocity_residual: f64,
}

impl DualBounds {
    pub fn holds(&self, relative_tol: f64) -> bool {
        self.reciprocity_residual <= relative_tol
    }
}

/// Optimal bounds of the canonical dual, compared with `(1/b, 1/a)`.
pub fn dual_bounds_check(f: &WeakOvf) -> Result<DualBounds> {
    let primal = f.classify();
    let (Some(a), Some(b)) = (primal.lower_bound, primal.upper_bound) else {
        return Err(OvfError::NotInvertible { ratio: 0.0 });
    };
    let dual = canonical_dual(f)?.classify();
    let (Some(lower), Some(upper)) = (dual.lower_bound, dual.upper_bound) else {
        return Err(OvfError::NotInvertible { ratio: 0.0 });
    };
    let rel = |x: f64, target: f64| (x - target).abs() / target;
    Ok(DualBounds {
        lower,
        upper,
        reciprocity_residual: rel(lower, 1.0 / b).max(rel(upper, 1.0 / a)),
    })
}

fn mixed_residuals(f: &WeakOvf, g: &WeakOvf) -> Result<(Op, Op)> {
    if !f.same_shape(g) {
        return Err(OvfError::ShapeMismatch(format!(
            "frames of shape (d={}, d0={}, N={}) and (d={}, d0={}, N={})",
            f.d(),
            f.d0(),
            f.len(),
            g.d(),
            g.d0(),
            g.len()
        )));
    }
    Ok((
        mixed_frame_operator(f.psi(), g.a()),
        mixed_frame_operator(g.psi(), f.a()),
    ))
}

/// Checks `Σ Ψ_n* B_n = Σ Φ_n* A_n = I`.
pub fn is_dual(f: &WeakOvf, g: &WeakOvf) -> Result<DualPair> {
    let (psi_b, phi_a) = mixed_residuals(f, g)?;
    let duality_residual = psi_b.dist_identity().max(phi_a.dist_identity());
    if duality_residual > f.tol().loose() {
        return Err(OvfError::NotDual {
            residual: duality_residual,
        });
    }
    Ok(DualPair {
        primal: f.clone(),
        dual: g.clone(),
        duality_residual,
    })
}

/// `R = θ_A S⁻¹ + (I − θ_A S⁻¹ θ_Ψ*) U`, a right inverse of `θ_Ψ*`.
pub fn right_inverses_of_synthesis(f: &WeakOvf, u: &Op) -> Result<Op> {
    let rows = f.len() * f.d0();
    if u.shape() != (rows, f.d()) {
        return Err(OvfError::ShapeMismatch(format!("U must be {rows}x{}", f.d())));
    }
    let s_inv = f.frame_operator_inverse()?;
    let base = &f.theta_a() * &s_inv;
    let p = &base * &f.theta_psi().adjoint();
    Ok(&base + &(&(&Op::identity(rows) - &p) * u))
}

/// `L = S⁻¹ θ_Ψ* + V (I − θ_A S⁻¹ θ_Ψ*)`, a left inverse of `θ_A`.
pub fn left_inverses_of_analysis(f: &WeakOvf, v: &Op) -> Result<Op> {
    let cols = f.len() * f.d0();
    if v.shape() != (f.d(), cols) {
        return Err(OvfError::ShapeMismatch(format!("V must be {}x{cols}", f.d())));
    }
    let s_inv = f.frame_operator_inverse()?;
    let base = &s_inv * &f.theta_psi().adjoint();
    let p = &f.theta_a() * &base;
    Ok(&base + &(v * &(&Op::identity(cols) - &p)))
}

/// The dual determined by parameters `U` (`N·d0 × d`) and `V` (`d × N·d0`):
///
/// `B_n = A_n S⁻¹ + L_n* U − A_n S⁻¹ θ_Ψ* U`,
/// `Φ_n = Ψ_n (S⁻¹)* + L_n* V* − Ψ_n (S⁻¹)* θ_A* V*`.
///
/// Its frame operator is `S⁻¹ + VU − V θ_A S⁻¹ θ_Ψ* U`; when that fails the
/// invertibility surrogate the pair is not a weak OVF and `NotInvertible`
/// is returned.
pub fn dual_from_parameters(f: &WeakOvf, u: &Op, v: &Op) -> Result<WeakOvf> {
    let theta_b = right_inverses_of_synthesis(f, u)?;
    // θ_Φ = L*, with L the left inverse of θ_A built from V.
    let theta_phi = left_inverses_of_analysis(f, v)?.adjoint();
    let s_inv = f.frame_operator_inverse()?;
    let combined = &(&s_inv + &(v * u))
        - &(&(&(v * &f.theta_a()) * &s_inv) * &(&f.theta_psi().adjoint() * u));
    combined.try_invert(f.tol())?;
    WeakOvf::new(
        split_blocks(&theta_b, f.d0()),
        split_blocks(&theta_phi, f.d0()),
        *f.tol(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Orthogonality {
    pub orthogonal: bool,
    /// `max(‖Σ Ψ_n* B_n‖, ‖Σ Φ_n* A_n‖)`.
    pub residual: f64,
}

pub fn is_orthogonal(f: &WeakOvf, g: &WeakOvf) -> Result<Orthogonality> {
    let (psi_b, phi_a) = mixed_residuals(f, g)?;
    let residual = psi_b.spectral_norm().max(phi_a.spectral_norm());
    Ok(Orthogonality {
        orthogonal: residual <= f.tol().loose(),
        residual,
    })
}

/// Mixes two orthogonal Parseval frames:
/// `({A_n C + B_n D}, {Ψ_n E + Φ_n F})`, Parseval whenever `C*E + D*F = I`.
pub fn interpolate(f: &WeakOvf, g: &WeakOvf, c: &Op, d: &Op, e: &Op, fo: &Op) -> Result<WeakOvf> {
    let dim = f.d();
    if [c, d, e, fo].iter().any(|x| x.shape() != (dim, dim)) {
        return Err(OvfError::ShapeMismatch(format!("mixing operators must be {dim}x{dim}")));
    }
    let orth = is_orthogonal(f, g)?;
    let tol = f.tol();
    if !orth.orthogonal {
        return Err(OvfError::PreconditionFailed(Precondition::NotOrthogonal));
    }
    if !(f.classify().is_parseval && g.classify().is_parseval) {
        return Err(OvfError::PreconditionFailed(Precondition::NotParseval));
    }
    let constraint = &(&c.adjoint() * e) + &(&d.adjoint() * fo);
    if constraint.dist_identity() > tol.residual_eps() {
        return Err(OvfError::PreconditionFailed(Precondition::ConstraintResidual));
    }
    let a = f
        .a()
        .iter()
        .zip(g.a())
        .map(|(an, bn)| &(an * c) + &(bn * d))
        .collect();
    let psi = f
        .psi()
        .iter()
        .zip(g.psi())
        .map(|(pn, qn)| &(pn * e) + &(qn * fo))
        .collect();
    WeakOvf::new(a, psi, *tol)
}

/// `({A_n ⊕ B_n}, {Ψ_n ⊕ Φ_n})` on `𝓗 ⊕ 𝓗`, where `(A ⊕ B)(h ⊕ g) = Ah + Bg`.
pub fn direct_sum_frames(f: &WeakOvf, g: &WeakOvf) -> Result<WeakOvf> {
    if !is_orthogonal(f, g)?.orthogonal {
        return Err(OvfError::PreconditionFailed(Precondition::NotOrthogonal));
    }
    let join = |x: &[Op], y: &[Op]| -> Result<Vec<Op>> {
        x.iter()
            .zip(y)
            .map(|(a, b)| Op::hstack(&[a.clone(), b.clone()]))
            .collect()
    };
    WeakOvf::new(join(f.a(), g.a())?, join(f.psi(), g.psi())?, *f.tol())
}

/// Recovers dual parameters `(U, V) := (θ_B, θ_Φ*)` from a known dual.
pub fn parameters_of_dual(dual: &WeakOvf) -> (Op, Op) {
    let u = analysis_operator(dual.a()).expect("validated shapes");
    let v = analysis_operator(dual.psi()).expect("validated shapes").adjoint();
    (u, v)
}
