//! Orthonormal dilation of Parseval weak OVFs and similarity of frames.

use rand::Rng;

use crate::duality::{canonical_dual, dual_from_parameters};
use crate::error::{OvfError, Precondition, Result};
use crate::frame::{block_of, WeakOvf};
use crate::numkernel::{complement_of_basis, random_op_with, seeded_rng, Op};

/// An orthonormal weak OVF `({B_n}, {Φ_n})` on `𝓗₁ = 𝓗 ⊕ range(θ_A)^⊥`
/// restricting to the original pair on `𝓗`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    pub extended_dim: usize,
    pub b: Vec<Op>,
    pub phi: Vec<Op>,
    /// Isometry `𝓗 → 𝓗₁`, `h ↦ h ⊕ 0`.
    pub embed: Op,
}

impl Dilation {
    pub fn as_frame(&self, source: &WeakOvf) -> Result<WeakOvf> {
        WeakOvf::new(self.b.clone(), self.phi.clone(), *source.tol())
    }

    /// `max_n max(‖B_n J − A_n‖, ‖Φ_n J − Ψ_n‖)` for the embedding `J`.
    pub fn restriction_residual(&self, source: &WeakOvf) -> f64 {
        self.b
            .iter()
            .zip(&self.phi)
            .zip(source.a().iter().zip(source.psi()))
            .map(|((b, phi), (a, psi))| {
                (b * &self.embed).dist(a).max((phi * &self.embed).dist(psi))
            })
            .fold(0.0, f64::max)
    }
}

/// Mutual projection residual between the column spaces of two operators:
/// `max(‖(I − Q_x Q_x*) Q_y‖, ‖(I − Q_y Q_y*) Q_x‖)`, or infinity when the
/// dimensions differ.
pub fn range_distance(x: &Op, y: &Op, tol: &crate::numkernel::Tolerance) -> f64 {
    let qx = x.range_basis(tol);
    let qy = y.range_basis(tol);
    if qx.cols() != qy.cols() {
        return f64::INFINITY;
    }
    let off = |q: &Op, p: &Op| (p - &(&(q * &q.adjoint()) * p)).spectral_norm();
    off(&qx, &qy).max(off(&qy, &qx))
}

/// Builds `B_n(h ⊕ g) = A_n h + L_n* P^⊥ g`, `Φ_n(h ⊕ g) = Ψ_n h + L_n* P^⊥ g`
/// with `g` expressed in an orthonormal basis of `range(θ_A)^⊥`.
pub fn dilate(f: &WeakOvf) -> Result<Dilation> {
    let tol = f.tol();
    if !f.classify().is_parseval {
        return Err(OvfError::PreconditionFailed(Precondition::NotParseval));
    }
    let theta_a = f.theta_a();
    let theta_psi = f.theta_psi();
    if range_distance(&theta_a, &theta_psi, tol) > tol.loose() {
        return Err(OvfError::PreconditionFailed(Precondition::RangesDiffer));
    }
    // With equal ranges P is already the orthogonal projection onto them in
    // finite dimension; the check guards against conditioning artifacts.
    let p = f.idempotent()?;
    if p.dist(&p.adjoint()) > tol.loose() {
        return Err(OvfError::PreconditionFailed(Precondition::PNotProjection));
    }
    let basis = theta_a.range_basis(tol);
    let complement = complement_of_basis(&basis)?;
    let total = theta_a.rows();
    let p_perp_q = &(&Op::identity(total) - &p) * &complement;
    let d0 = f.d0();
    let b = f
        .a()
        .iter()
        .enumerate()
        .map(|(n, a)| Op::hstack(&[a.clone(), block_of(&p_perp_q, n, d0)]))
        .collect::<Result<Vec<_>>>()?;
    let phi = f
        .psi()
        .iter()
        .enumerate()
        .map(|(n, psi)| Op::hstack(&[psi.clone(), block_of(&p_perp_q, n, d0)]))
        .collect::<Result<Vec<_>>>()?;
    let extended_dim = f.d() + complement.cols();
    let embed = Op::vstack(&[Op::identity(f.d()), Op::zeros(complement.cols(), f.d())])?;
    Ok(Dilation {
        extended_dim,
        b,
        phi,
        embed,
    })
}

/// Invertible operators with `B_n = A_n R_AB`, `Φ_n = Ψ_n R_PsiPhi`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityWitness {
    pub r_ab: Op,
    pub r_psi_phi: Op,
    /// Worst reconstruction error over `n` of the two relations.
    pub residual: f64,
    /// `‖P_{B,Φ} − P_{A,Ψ}‖`, the equivalent idempotent test.
    pub idempotent_residual: f64,
}

/// Candidates `R_AB = S⁻¹ θ_Ψ* θ_B`, `R_PsiPhi = (S⁻¹)* θ_A* θ_Φ`, accepted
/// when they reproduce `g` and are invertible.
pub fn similarity_witness(f: &WeakOvf, g: &WeakOvf) -> Result<SimilarityWitness> {
    if !f.same_shape(g) {
        return Err(OvfError::ShapeMismatch("frames differ in shape".into()));
    }
    let tol = f.tol();
    let s_inv = f.frame_operator_inverse()?;
    let p_g = g.idempotent()?;
    let r_ab = &(&s_inv * &f.theta_psi().adjoint()) * &g.theta_a();
    let r_psi_phi = &(&s_inv.adjoint() * &f.theta_a().adjoint()) * &g.theta_psi();
    let residual = f
        .a()
        .iter()
        .zip(g.a())
        .map(|(a, b)| b.dist(&(a * &r_ab)))
        .chain(
            f.psi()
                .iter()
                .zip(g.psi())
                .map(|(psi, phi)| phi.dist(&(psi * &r_psi_phi))),
        )
        .fold(0.0, f64::max);
    let idempotent_residual = p_g.dist(&f.idempotent()?);
    if residual > tol.loose() {
        return Err(OvfError::NotSimilar { residual });
    }
    if r_ab.try_invert(tol).is_err() || r_psi_phi.try_invert(tol).is_err() {
        return Err(OvfError::NotSimilar { residual });
    }
    Ok(SimilarityWitness {
        r_ab,
        r_psi_phi,
        residual,
        idempotent_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `({A_n S⁻¹}, {Ψ_n})`
    Left,
    /// `({A_n}, {Ψ_n (S⁻¹)*})`
    Right,
}

pub fn parsevalize(f: &WeakOvf, side: Side) -> Result<WeakOvf> {
    let s_inv = f.frame_operator_inverse()?;
    match side {
        Side::Left => f.right_multiply(&s_inv, &Op::identity(f.d())),
        Side::Right => f.right_multiply(&Op::identity(f.d()), &s_inv.adjoint()),
    }
}

/// Samples parameterized duals and confirms that only the canonical dual
/// is similar to `f`.
pub fn unique_similar_dual_check(f: &WeakOvf, samples: usize, seed: u64) -> Result<bool> {
    let canonical = canonical_dual(f)?;
    if similarity_witness(f, &canonical).is_err() {
        return Ok(false);
    }
    let mut rng = seeded_rng(seed);
    let rows = f.len() * f.d0();
    let mut checked = 0;
    let mut attempts = 0;
    while checked < samples && attempts < 20 * samples.max(1) {
        attempts += 1;
        let scale = rng.random_range(0.1..1.0);
        let u = random_op_with(rows, f.d(), &mut rng).scale_real(scale);
        let v = random_op_with(f.d(), rows, &mut rng).scale_real(scale);
        let Ok(g) = dual_from_parameters(f, &u, &v) else {
            continue;
        };
        let same = g
            .a()
            .iter()
            .zip(canonical.a())
            .chain(g.psi().iter().zip(canonical.psi()))
            .all(|(x, y)| x.max_abs_diff(y) <= f.tol().loose());
        if same {
            continue;
        }
        checked += 1;
        if similarity_witness(f, &g).is_ok() {
            return Ok(false);
        }
    }
    Ok(checked == samples)
}
