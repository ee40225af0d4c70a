//! Weak operator-valued frames: the pair `({A_n}, {Ψ_n})`, its frame
//! operator `S = Σ Ψ_n* A_n`, analysis operators, the idempotent
//! `P = θ_A S⁻¹ θ_Ψ*` and the classification flags.
//!
//! Indices are zero-based throughout: `embedding(0, n, d0)` is the first
//! block injection.

use crate::error::{OvfError, Result};
use crate::numkernel::{Op, Tolerance, C64};

/// Block injection `L_index : 𝓗₀ → ℓ²({0..count}) ⊗ 𝓗₀`, `h ↦ e_index ⊗ h`.
pub fn embedding(index: usize, count: usize, d0: usize) -> Result<Op> {
    if index >= count {
        return Err(OvfError::IndexOutOfRange { index, len: count });
    }
    Ok(Op::basis_vector(count, index).kron(&Op::identity(d0)))
}

/// Block-stacks `d0 × d` operators into the `(count·d0) × d` analysis
/// operator `θ = Σ L_n X_n`.
pub fn analysis_operator(seq: &[Op]) -> Result<Op> {
    Op::vstack(seq)
}

/// Extracts block `index` of a stacked operator, i.e. `L_index* X`.
pub fn block_of(stacked: &Op, index: usize, d0: usize) -> Op {
    stacked.block(index * d0, 0, d0, stacked.cols())
}

/// Splits a `(count·d0) × d` operator into its `count` row blocks.
pub fn split_blocks(stacked: &Op, d0: usize) -> Vec<Op> {
    (0..stacked.rows() / d0)
        .map(|n| block_of(stacked, n, d0))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakOvf {
    d: usize,
    d0: usize,
    a: Vec<Op>,
    psi: Vec<Op>,
    tol: Tolerance,
}

impl WeakOvf {
    /// Pairs two operator sequences of identical `d0 × d` shape.
    ///
    /// No invertibility is required here; [`classify`](Self::classify)
    /// decides whether the pair is actually a weak OVF.
    pub fn new(a: Vec<Op>, psi: Vec<Op>, tol: Tolerance) -> Result<Self> {
        let Some(first) = a.first() else {
            return Err(OvfError::ShapeMismatch("a frame needs at least one index".into()));
        };
        if a.len() != psi.len() {
            return Err(OvfError::ShapeMismatch(format!(
                "{} operators A_n but {} operators Psi_n",
                a.len(),
                psi.len()
            )));
        }
        let (d0, d) = first.shape();
        if d0 == 0 || d == 0 {
            return Err(OvfError::ShapeMismatch("dimensions must be positive".into()));
        }
        for (n, (x, y)) in a.iter().zip(&psi).enumerate() {
            if x.shape() != (d0, d) || y.shape() != (d0, d) {
                return Err(OvfError::ShapeMismatch(format!(
                    "index {n}: expected {d0}x{d}, got A {:?} and Psi {:?}",
                    x.shape(),
                    y.shape()
                )));
            }
        }
        Ok(Self { d, d0, a, psi, tol })
    }

    /// Classical operator-valued frame: `Ψ_n = A_n`.
    pub fn classic(a: Vec<Op>, tol: Tolerance) -> Result<Self> {
        let psi = a.clone();
        Self::new(a, psi, tol)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a(&self) -> &[Op] {
        &self.a
    }

    pub fn psi(&self) -> &[Op] {
        &self.psi
    }

    pub fn tol(&self) -> &Tolerance {
        &self.tol
    }

    pub fn with_tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn into_parts(self) -> (Vec<Op>, Vec<Op>) {
        (self.a, self.psi)
    }

    pub fn same_shape(&self, other: &WeakOvf) -> bool {
        self.d == other.d && self.d0 == other.d0 && self.len() == other.len()
    }

    /// `S = Σ Ψ_n* A_n`.
    pub fn frame_operator(&self) -> Op {
        mixed_frame_operator(&self.psi, &self.a)
    }

    pub fn theta_a(&self) -> Op {
        analysis_operator(&self.a).expect("shapes validated at construction")
    }

    pub fn theta_psi(&self) -> Op {
        analysis_operator(&self.psi).expect("shapes validated at construction")
    }

    pub fn frame_operator_inverse(&self) -> Result<Op> {
        self.frame_operator().try_invert(&self.tol)
    }

    /// `P = θ_A S⁻¹ θ_Ψ*`, an idempotent onto `range(θ_A)`.
    pub fn idempotent(&self) -> Result<Op> {
        let s_inv = self.frame_operator_inverse()?;
        Ok(&(&self.theta_a() * &s_inv) * &self.theta_psi().adjoint())
    }

    /// Largest `‖A_n Ψ_m* − δ_{n,m} I‖` over all index pairs.
    pub fn cross_gram_residual(&self) -> f64 {
        let id = Op::identity(self.d0);
        let mut worst = 0.0_f64;
        for (n, an) in self.a.iter().enumerate() {
            for (m, pm) in self.psi.iter().enumerate() {
                let g = an * &pm.adjoint();
                let r = if n == m { g.dist(&id) } else { g.spectral_norm() };
                worst = worst.max(r);
            }
        }
        worst
    }

    pub fn classify(&self) -> FrameReport {
        let s = self.frame_operator();
        let theta_a = self.theta_a();
        let theta_psi = self.theta_psi();
        let factorization_residual = s.dist(&(&theta_psi.adjoint() * &theta_a));
        let eps = self.tol.residual_eps();
        match s.try_invert(&self.tol) {
            Ok(s_inv) => {
                let p = &(&theta_a * &s_inv) * &theta_psi.adjoint();
                let is_parseval = s.dist_identity() <= eps;
                let is_riesz = p.dist_identity() <= eps;
                FrameReport {
                    lower_bound: Some(1.0 / s_inv.spectral_norm()),
                    upper_bound: Some(s.spectral_norm()),
                    s,
                    is_weak: true,
                    is_parseval,
                    is_riesz,
                    is_orthonormal: is_parseval && is_riesz,
                    factorization_residual,
                }
            }
            Err(_) => FrameReport {
                s,
                is_weak: false,
                is_parseval: false,
                is_riesz: false,
                is_orthonormal: false,
                lower_bound: None,
                upper_bound: None,
                factorization_residual,
            },
        }
    }

    /// Frame with `A_n = L_n* U`, `Ψ_n = L_n* V`; requires `V*U` invertible.
    pub fn from_factors(u: &Op, v: &Op, count: usize, d0: usize, tol: Tolerance) -> Result<Self> {
        if u.shape() != v.shape() || u.rows() != count * d0 || count == 0 {
            return Err(OvfError::ShapeMismatch(format!(
                "U {:?} and V {:?} must both be ({count}*{d0}) x d",
                u.shape(),
                v.shape()
            )));
        }
        (&v.adjoint() * u).try_invert(&tol)?;
        Self::new(split_blocks(u, d0), split_blocks(v, d0), tol)
    }

    /// Frame with `A_n = F_n U`, `Ψ_n = F_n V` for an operator orthonormal
    /// basis `{F_n}`.
    pub fn from_operator_onb(onb: &OperatorOnb, u: &Op, v: &Op, tol: Tolerance) -> Result<Self> {
        let d = onb.d();
        if u.shape() != (d, d) || v.shape() != (d, d) {
            return Err(OvfError::ShapeMismatch(format!(
                "U and V must be {d}x{d}, got {:?} and {:?}",
                u.shape(),
                v.shape()
            )));
        }
        (&v.adjoint() * u).try_invert(&tol)?;
        let a = onb.f().iter().map(|f| f * u).collect();
        let psi = onb.f().iter().map(|f| f * v).collect();
        Self::new(a, psi, tol)
    }

    /// Right-multiplies both sequences: `({A_n R}, {Ψ_n T})`.
    pub fn right_multiply(&self, r: &Op, t: &Op) -> Result<Self> {
        if r.shape() != (self.d, self.d) || t.shape() != (self.d, self.d) {
            return Err(OvfError::ShapeMismatch("right factors must be d x d".into()));
        }
        Self::new(
            self.a.iter().map(|x| x * r).collect(),
            self.psi.iter().map(|x| x * t).collect(),
            self.tol,
        )
    }

    /// Evaluates the representation identity
    /// `Σ⟨y_n,z_n⟩ = Σ⟨Ψ̃_n h, Ã_n h⟩ + Σ⟨y_n − Ψ̃_n h, z_n − Ã_n h⟩`
    /// for `h = Σ A_n* y_n = Σ Ψ_n* z_n` and returns its absolute residual.
    pub fn representation_identity_residual(&self, y: &[Op], z: &[Op]) -> Result<f64> {
        if y.len() != self.len() || z.len() != self.len() {
            return Err(OvfError::ShapeMismatch("one coefficient per index required".into()));
        }
        if y.iter().chain(z).any(|c| c.shape() != (self.d0, 1)) {
            return Err(OvfError::ShapeMismatch("coefficients must be d0-vectors".into()));
        }
        let h_y = self
            .a
            .iter()
            .zip(y)
            .fold(Op::zeros(self.d, 1), |acc, (a, yn)| acc + &a.adjoint() * yn);
        let h_z = self
            .psi
            .iter()
            .zip(z)
            .fold(Op::zeros(self.d, 1), |acc, (p, zn)| acc + &p.adjoint() * zn);
        let scale = 1.0 + h_y.frobenius_norm().max(h_z.frobenius_norm());
        let mismatch = (&h_y - &h_z).frobenius_norm();
        if mismatch > self.tol.residual_eps() * scale {
            return Err(OvfError::InconsistentDecomposition { residual: mismatch });
        }
        let h = h_y;
        let s_inv = self.frame_operator_inverse()?;
        let s_inv_adj = s_inv.adjoint();
        let mut lhs = C64::new(0.0, 0.0);
        let mut canonical = C64::new(0.0, 0.0);
        let mut cross = C64::new(0.0, 0.0);
        for n in 0..self.len() {
            let psi_tilde_h = &(&self.psi[n] * &s_inv_adj) * &h;
            let a_tilde_h = &(&self.a[n] * &s_inv) * &h;
            // ⟨x, w⟩ is taken linear in x: w* x.
            lhs += z[n].inner(&y[n]);
            canonical += a_tilde_h.inner(&psi_tilde_h);
            cross += (&z[n] - &a_tilde_h).inner(&(&y[n] - &psi_tilde_h));
        }
        Ok((lhs - canonical - cross).norm())
    }

    /// Classical frame check with `Ψ := A`, plus positivity of `S`.
    pub fn classic_check(a: Vec<Op>, tol: Tolerance) -> Result<ClassicReport> {
        let f = Self::classic(a, tol)?;
        let report = f.classify();
        let min_eigenvalue = report.s.hermitian_part_min_eigenvalue();
        let is_positive = match report.lower_bound {
            Some(lb) => min_eigenvalue >= lb - tol.residual_eps(),
            None => false,
        };
        Ok(ClassicReport {
            report,
            min_eigenvalue,
            is_positive,
        })
    }

    /// `‖θ_A‖²` of the truncation to the first `m` indices, for `m = 1..=N`.
    pub fn truncated_analysis_norms_sq(&self) -> Vec<f64> {
        (1..=self.len())
            .map(|m| {
                let t = analysis_operator(&self.a[..m]).expect("validated shapes");
                t.spectral_norm().powi(2)
            })
            .collect()
    }
}

/// `Σ X_n* Y_n` for two equally long sequences.
pub fn mixed_frame_operator(x: &[Op], y: &[Op]) -> Op {
    let d = x.first().map(Op::cols).unwrap_or(0);
    x.iter()
        .zip(y)
        .fold(Op::zeros(d, d), |acc, (xn, yn)| acc + &xn.adjoint() * yn)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    pub s: Op,
    pub is_weak: bool,
    pub is_parseval: bool,
    pub is_riesz: bool,
    pub is_orthonormal: bool,
    /// Optimal lower bound `‖S⁻¹‖⁻¹`; absent when `S` is not invertible.
    pub lower_bound: Option<f64>,
    /// Optimal upper bound `‖S‖`; absent when `S` is not invertible.
    pub upper_bound: Option<f64>,
    pub factorization_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicReport {
    pub report: FrameReport,
    pub min_eigenvalue: f64,
    pub is_positive: bool,
}

/// Operators `F_n : 𝓗 → 𝓗₀` with `F_n F_k* = δ_{n,k} I` and `Σ F_n* F_n = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorOnb {
    f: Vec<Op>,
    d0: usize,
}

impl OperatorOnb {
    pub fn new(f: Vec<Op>, tol: &Tolerance) -> Result<Self> {
        let Some(first) = f.first() else {
            return Err(OvfError::ShapeMismatch("empty basis".into()));
        };
        let (d0, d) = first.shape();
        if f.iter().any(|x| x.shape() != (d0, d)) {
            return Err(OvfError::ShapeMismatch("basis operators differ in shape".into()));
        }
        if f.len() * d0 != d {
            return Err(OvfError::ShapeMismatch(format!(
                "operator ONB needs N*d0 = d, got {}*{d0} != {d}",
                f.len()
            )));
        }
        let id0 = Op::identity(d0);
        for (n, fn_) in f.iter().enumerate() {
            for (k, fk) in f.iter().enumerate() {
                let g = fn_ * &fk.adjoint();
                let r = if n == k { g.dist(&id0) } else { g.spectral_norm() };
                if r > tol.residual_eps() {
                    return Err(OvfError::ShapeMismatch(format!(
                        "F_{n} F_{k}* deviates from delta by {r:e}"
                    )));
                }
            }
        }
        let total = mixed_frame_operator(&f, &f);
        if total.dist_identity() > tol.residual_eps() {
            return Err(OvfError::ShapeMismatch("sum F_n* F_n is not the identity".into()));
        }
        Ok(Self { f, d0 })
    }

    /// `F_n = L_n*` on `d = count·d0`.
    pub fn from_embeddings(count: usize, d0: usize) -> Result<Self> {
        let f = (0..count)
            .map(|n| embedding(n, count, d0).map(|l| l.adjoint()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(f, &Tolerance::default())
    }

    pub fn f(&self) -> &[Op] {
        &self.f
    }

    pub fn d0(&self) -> usize {
        self.d0
    }

    pub fn d(&self) -> usize {
        self.f.len() * self.d0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{random_op, ONE, ZERO};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn scalars(values: &[f64]) -> Vec<Op> {
        values.iter().map(|&x| Op::real_scalar(x)).collect()
    }

    fn scalar_frame(a: &[f64], psi: &[f64]) -> WeakOvf {
        WeakOvf::new(scalars(a), scalars(psi), Tolerance::default()).unwrap()
    }

    #[test]
    fn embedding_examples() {
        let l = embedding(0, 2, 1).unwrap();
        assert_eq!(l, Op::column(&[ONE, ZERO]));
        let l1 = embedding(0, 3, 2).unwrap();
        let l2 = embedding(1, 3, 2).unwrap();
        assert_eq!(&l1.adjoint() * &l2, Op::zeros(2, 2));
        assert_eq!(&l1.adjoint() * &l1, Op::identity(2));
        let total = (0..3).fold(Op::zeros(6, 6), |acc, n| {
            let l = embedding(n, 3, 2).unwrap();
            acc + &l * &l.adjoint()
        });
        assert_eq!(total, Op::identity(6));
        assert!(matches!(
            embedding(3, 3, 1),
            Err(OvfError::IndexOutOfRange { index: 3, len: 3 })
        ));
    }

    #[test]
    fn frame_operator_examples() {
        let s = scalar_frame(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2])
            .frame_operator();
        assert!((s.get(0, 0) - ONE).norm() < 1e-15);
        let harmonic = scalar_frame(&[1.0, FRAC_1_SQRT_2, 1.0 / 3f64.sqrt()], &[1.0, 0.0, 0.0]);
        assert_eq!(harmonic.frame_operator(), Op::real_scalar(1.0));
        assert_eq!(scalar_frame(&[1.0, 1.0], &[1.0, 1.0]).frame_operator(), Op::real_scalar(2.0));
    }

    #[test]
    fn analysis_operator_examples() {
        let t = analysis_operator(&[Op::identity(1), Op::identity(1)]).unwrap();
        assert_eq!(t, Op::real_column(&[1.0, 1.0]));
        let harmonic = scalar_frame(&[1.0, FRAC_1_SQRT_2, 1.0 / 3f64.sqrt()], &[1.0, 0.0, 0.0]);
        let norm_sq = harmonic.theta_a().spectral_norm().powi(2);
        assert!((norm_sq - 11.0 / 6.0).abs() < 1e-14);
        let seq: Vec<Op> = (0..3).map(|s| random_op(2, 3, s)).collect();
        let theta = analysis_operator(&seq).unwrap();
        let l2 = embedding(1, 3, 2).unwrap();
        assert!((&l2.adjoint() * &theta).max_abs_diff(&seq[1]) == 0.0);
        assert_eq!(block_of(&theta, 1, 2), seq[1]);
    }

    #[test]
    fn classify_examples() {
        let r = scalar_frame(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2])
            .classify();
        assert!(r.is_weak && r.is_parseval && !r.is_riesz && !r.is_orthonormal);
        assert!((r.lower_bound.unwrap() - 1.0).abs() < 1e-14);
        assert!((r.upper_bound.unwrap() - 1.0).abs() < 1e-14);

        let id = WeakOvf::new(vec![Op::identity(3)], vec![Op::identity(3)], Tolerance::default())
            .unwrap()
            .classify();
        assert!(id.is_orthonormal && id.is_parseval && id.is_riesz);

        let r = scalar_frame(&[1.0, 1.0], &[1.0, 0.0]).classify();
        assert!(r.is_weak && r.is_parseval);
        assert_eq!(r.s, Op::real_scalar(1.0));

        let singular = scalar_frame(&[1.0, 1.0], &[1.0, -1.0]).classify();
        assert!(!singular.is_weak);
        assert_eq!(singular.lower_bound, None);
        assert_eq!(singular.upper_bound, None);
    }

    #[test]
    fn idempotent_examples() {
        let p = scalar_frame(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[FRAC_1_SQRT_2, FRAC_1_SQRT_2])
            .idempotent()
            .unwrap();
        let half = Op::new(2, 2, vec![ONE * 0.5; 4]).unwrap();
        assert!(p.max_abs_diff(&half) < 1e-15);
        let id = WeakOvf::new(vec![Op::identity(2)], vec![Op::identity(2)], Tolerance::default())
            .unwrap();
        assert_eq!(id.idempotent().unwrap(), Op::identity(2));
        assert!(scalar_frame(&[1.0, 1.0], &[1.0, -1.0]).idempotent().is_err());
    }

    #[test]
    fn from_factors_examples() {
        let tol = Tolerance::default();
        let f = WeakOvf::from_factors(
            &Op::real_column(&[1.0, 1.0]),
            &Op::real_column(&[1.0, 0.0]),
            2,
            1,
            tol,
        )
        .unwrap();
        assert_eq!(f.a(), scalars(&[1.0, 1.0]).as_slice());
        assert_eq!(f.psi(), scalars(&[1.0, 0.0]).as_slice());
        assert_eq!(f.frame_operator(), Op::real_scalar(1.0));

        let bad = WeakOvf::from_factors(
            &Op::real_column(&[1.0, 0.0]),
            &Op::real_column(&[0.0, 1.0]),
            2,
            1,
            tol,
        );
        assert!(matches!(bad, Err(OvfError::NotInvertible { .. })));
    }

    #[test]
    fn onb_examples() {
        let one = OperatorOnb::from_embeddings(1, 3).unwrap();
        assert_eq!(one.f(), &[Op::identity(3)]);
        let two = OperatorOnb::from_embeddings(2, 1).unwrap();
        assert_eq!(two.f()[0], Op::real_row(&[1.0, 0.0]));
        assert_eq!(two.f()[1], Op::real_row(&[0.0, 1.0]));
        let big = OperatorOnb::from_embeddings(3, 2).unwrap();
        assert_eq!(mixed_frame_operator(big.f(), big.f()), Op::identity(6));
        assert!(OperatorOnb::new(vec![Op::real_row(&[1.0, 0.0])], &Tolerance::default()).is_err());
    }

    #[test]
    fn onb_constructor_reduces_to_factors() {
        let tol = Tolerance::default();
        let onb = OperatorOnb::from_embeddings(3, 1).unwrap();
        let u = random_op(3, 3, 1);
        let v = random_op(3, 3, 2);
        let via_onb = WeakOvf::from_operator_onb(&onb, &u, &v, tol).unwrap();
        let via_factors = WeakOvf::from_factors(&u, &v, 3, 1, tol).unwrap();
        assert_eq!(via_onb, via_factors);

        let id = Op::identity(3);
        let f = WeakOvf::from_operator_onb(&onb, &id, &id, tol).unwrap();
        assert!(f.frame_operator().dist_identity() < 1e-15);
        let s = WeakOvf::from_operator_onb(&onb, &u, &id, tol).unwrap().frame_operator();
        assert!(s.dist(&u) < 1e-12);
    }

    #[test]
    fn representation_identity_rejects_inconsistent_coefficients() {
        let f = scalar_frame(&[1.0, 1.0], &[1.0, 0.5]);
        let y = vec![Op::real_column(&[1.0]), Op::real_column(&[0.0])];
        let z = vec![Op::real_column(&[5.0]), Op::real_column(&[0.0])];
        assert!(matches!(
            f.representation_identity_residual(&y, &z),
            Err(OvfError::InconsistentDecomposition { .. })
        ));
    }

    #[test]
    fn classic_examples() {
        let tol = Tolerance::default();
        let c = WeakOvf::classic_check(scalars(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]), tol).unwrap();
        assert!(c.report.is_parseval && c.is_positive);

        // two blocks of orthonormal rows splitting C^4
        let rows = |r: [usize; 2]| {
            Op::from_fn(2, 4, |i, j| if j == r[i] { ONE } else { ZERO })
        };
        let c = WeakOvf::classic_check(vec![rows([0, 2]), rows([1, 3])], tol).unwrap();
        assert!(c.report.s.dist_identity() < 1e-15);

        let c = WeakOvf::classic_check(scalars(&[1.0, 2.0]), tol).unwrap();
        assert_eq!(c.report.s, Op::real_scalar(5.0));
        assert!((c.report.lower_bound.unwrap() - 5.0).abs() < 1e-12);
        assert!((c.report.upper_bound.unwrap() - 5.0).abs() < 1e-12);
        assert!(c.is_positive);
    }

    #[test]
    fn shape_validation() {
        let tol = Tolerance::default();
        assert!(WeakOvf::new(vec![], vec![], tol).is_err());
        assert!(WeakOvf::new(scalars(&[1.0]), scalars(&[1.0, 2.0]), tol).is_err());
        assert!(WeakOvf::new(vec![Op::identity(2)], vec![Op::identity(1)], tol).is_err());
    }
}
