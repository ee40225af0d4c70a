//! Stability of weak frames under perturbation of the analysis family.
//!
//! Replacing `{A_n}` by `{B_n}` keeps `({B_n}, {Ψ_n})` a factorable weak
//! frame as long as either
//!
//! * `√r · ‖θ_Ψ (S*)⁻¹‖ < 1` with `r = Σ‖A_n − B_n‖²`, or
//! * `Σ ‖A_n − B_n‖ · ‖Ψ_n (S*)⁻¹‖ < 1`,
//!
//! and each path comes with explicit lower and upper frame bounds.

use std::io::Write;

use serde::Serialize;

use crate::error::{OvfError, Result};
use crate::frame::WeakOvf;
use crate::numkernel::{random_op_with, seeded_rng, Op, Tolerance};

/// Outcome of a successful norm-sandwich check.
#[derive(Debug, Clone, PartialEq)]
pub struct HildingReport {
    pub samples_checked: usize,
    /// `min ‖Vx‖ / ‖Ux‖` over the samples.
    pub min_ratio: f64,
    /// `max ‖Vx‖ / ‖Ux‖` over the samples.
    pub max_ratio: f64,
    pub lower_factor: f64,
    pub upper_factor: f64,
}

/// Right singular vectors for the largest and smallest singular values of
/// a square operator.
fn right_singular_extremes(m: &Op) -> Vec<Op> {
    if m.cols() == 0 {
        return Vec::new();
    }
    let svd = m.matrix().clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let values = &svd.singular_values;
    [values.imax(), values.imin()]
        .into_iter()
        .map(|i| Op::from_fn(m.cols(), 1, |r, _| v_t[(i, r)].conj()))
        .collect()
}

fn norm(x: &Op) -> f64 {
    x.frobenius_norm()
}

/// Checks `‖Ux − Vx‖ ≤ α‖Ux‖ + β‖Vx‖` on the sample columns, the extreme
/// right singular vectors of `U − V` and the least-stretched direction of
/// `V`. When the sufficient condition `‖U − V‖ ≤ α·σ_min(U)` certifies the
/// hypothesis for every vector, the sandwich
/// `(1−α)/(1+β)·‖Ux‖ ≤ ‖Vx‖ ≤ (1+α)/(1−β)·‖Ux‖` and invertibility of `V`
/// are confirmed.
pub fn hilding_check(
    u: &Op,
    v: &Op,
    alpha: f64,
    beta: f64,
    samples: &[Op],
    tol: &Tolerance,
) -> Result<HildingReport> {
    if !(0.0..1.0).contains(&alpha) || !(0.0..1.0).contains(&beta) {
        return Err(OvfError::InvalidParameter(format!(
            "alpha = {alpha}, beta = {beta} must lie in [0, 1)"
        )));
    }
    if !u.is_square() || u.shape() != v.shape() {
        return Err(OvfError::ShapeMismatch("U and V must be square of equal size".into()));
    }
    u.try_invert(tol)?;
    let n = u.cols();
    if let Some(x) = samples.iter().find(|x| x.shape() != (n, 1)) {
        return Err(OvfError::ShapeMismatch(format!("sample of shape {:?}", x.shape())));
    }
    let diff = u - v;
    let mut all: Vec<Op> = samples.to_vec();
    all.extend(right_singular_extremes(&diff));
    all.extend(right_singular_extremes(v).into_iter().skip(1));
    let scale = u.spectral_norm().max(1.0);
    let slack = |x: &Op| tol.residual_eps() * scale * norm(x);

    for (i, x) in all.iter().enumerate() {
        let (ux, vx) = (u * x, v * x);
        if norm(&(&ux - &vx)) > alpha * norm(&ux) + beta * norm(&vx) + slack(x) {
            return Err(OvfError::HypothesisViolated { sample: i });
        }
    }
    if diff.spectral_norm() > alpha * u.min_singular_value() + tol.residual_eps() * scale {
        return Err(OvfError::HypothesisUncertified);
    }
    let lower_factor = (1.0 - alpha) / (1.0 + beta);
    let upper_factor = (1.0 + alpha) / (1.0 - beta);
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    for x in &all {
        let (ux, vx) = (norm(&(u * x)), norm(&(v * x)));
        if ux == 0.0 {
            continue;
        }
        if vx < lower_factor * ux - slack(x) || vx > upper_factor * ux + slack(x) {
            return Err(OvfError::TheoremViolated(format!(
                "|Vx| / |Ux| = {} outside [{lower_factor}, {upper_factor}]",
                vx / ux
            )));
        }
        min_ratio = min_ratio.min(vx / ux);
        max_ratio = max_ratio.max(vx / ux);
    }
    if v.try_invert(tol).is_err() {
        return Err(OvfError::TheoremViolated("V is not invertible".into()));
    }
    Ok(HildingReport {
        samples_checked: all.len(),
        min_ratio,
        max_ratio,
        lower_factor,
        upper_factor,
    })
}

/// Frame bounds predicted by one hypothesis path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictedBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Perturbation constants of `{B_n}` relative to a weak frame.
///
/// `α = β = 0` and `γ = √r` throughout, which reduces the general
/// three-constant hypothesis to the quadratic-budget one.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbCert {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// `Σ ‖A_n − B_n‖²`
    pub r: f64,
    /// `Σ ‖A_n − B_n‖ · ‖Ψ_n (S*)⁻¹‖`
    pub mixed_sum: f64,
    /// `‖θ_Ψ (S*)⁻¹‖`
    pub theta_psi_s_inv_norm: f64,
    /// `‖(S*)⁻¹‖`
    pub s_inv_norm: f64,
    pub theta_a_norm: f64,
    pub theta_psi_norm: f64,
    /// Present when `√r · ‖θ_Ψ (S*)⁻¹‖ < 1`.
    pub budget_path: Option<PredictedBounds>,
    /// Present when the mixed sum is below 1.
    pub mixed_path: Option<PredictedBounds>,
}

impl PerturbCert {
    pub fn any_path(&self) -> bool {
        self.budget_path.is_some() || self.mixed_path.is_some()
    }

    /// Best lower bound over the applicable paths.
    pub fn theoretical_lower(&self) -> Option<f64> {
        self.paths().map(|p| p.lower).reduce(f64::max)
    }

    /// Best upper bound over the applicable paths.
    pub fn theoretical_upper(&self) -> Option<f64> {
        self.paths().map(|p| p.upper).reduce(f64::min)
    }

    fn paths(&self) -> impl Iterator<Item = PredictedBounds> + '_ {
        self.budget_path.iter().chain(self.mixed_path.iter()).copied()
    }
}

fn check_family(f: &WeakOvf, b: &[Op]) -> Result<()> {
    if b.len() != f.len() {
        return Err(OvfError::ShapeMismatch(format!(
            "{} perturbed operators for a frame of length {}",
            b.len(),
            f.len()
        )));
    }
    if let Some(n) = b.iter().position(|x| x.shape() != (f.d0(), f.d())) {
        return Err(OvfError::ShapeMismatch(format!("B_{n} is not {}x{}", f.d0(), f.d())));
    }
    Ok(())
}

fn psi_weights(f: &WeakOvf, s_inv_adj: &Op) -> Vec<f64> {
    f.psi().iter().map(|p| (p * s_inv_adj).spectral_norm()).collect()
}

pub fn perturbation_constants(f: &WeakOvf, b: &[Op]) -> Result<PerturbCert> {
    check_family(f, b)?;
    let s_inv_adj = f.frame_operator_inverse()?.adjoint();
    let weights = psi_weights(f, &s_inv_adj);
    let gaps: Vec<f64> = f.a().iter().zip(b).map(|(a, b)| a.dist(b)).collect();
    let r: f64 = gaps.iter().map(|g| g * g).sum();
    let mixed_sum: f64 = gaps.iter().zip(&weights).map(|(g, w)| g * w).sum();
    let theta_psi = f.theta_psi();
    let theta_psi_s_inv_norm = (&theta_psi * &s_inv_adj).spectral_norm();
    let s_inv_norm = s_inv_adj.spectral_norm();
    let theta_a_norm = f.theta_a().spectral_norm();
    let theta_psi_norm = theta_psi.spectral_norm();
    let sqrt_r = r.sqrt();
    let upper = theta_psi_norm * (theta_a_norm + sqrt_r);
    let budget_path = (sqrt_r * theta_psi_s_inv_norm < 1.0).then(|| PredictedBounds {
        lower: (1.0 - sqrt_r * theta_psi_s_inv_norm) / s_inv_norm,
        upper,
    });
    let mixed_path = (mixed_sum < 1.0).then(|| PredictedBounds {
        lower: (1.0 - mixed_sum) / s_inv_norm,
        upper,
    });
    Ok(PerturbCert {
        alpha: 0.0,
        beta: 0.0,
        gamma: sqrt_r,
        r,
        mixed_sum,
        theta_psi_s_inv_norm,
        s_inv_norm,
        theta_a_norm,
        theta_psi_norm,
        budget_path,
        mixed_path,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbReport {
    pub cert: PerturbCert,
    pub measured_lower: f64,
    pub measured_upper: f64,
    pub theoretical_lower: f64,
    pub theoretical_upper: f64,
}

/// Classifies `({B_n}, {Ψ_n})` and checks it against the predicted bounds.
pub fn verify_perturbation(f: &WeakOvf, b: &[Op]) -> Result<PerturbReport> {
    let cert = perturbation_constants(f, b)?;
    let (Some(theoretical_lower), Some(theoretical_upper)) =
        (cert.theoretical_lower(), cert.theoretical_upper())
    else {
        return Err(OvfError::HypothesisFailed);
    };
    let perturbed = WeakOvf::new(b.to_vec(), f.psi().to_vec(), *f.tol())?;
    let report = perturbed.classify();
    let (Some(measured_lower), Some(measured_upper)) = (report.lower_bound, report.upper_bound)
    else {
        return Err(OvfError::TheoremViolated("perturbed pair is not a weak frame".into()));
    };
    let slack = f.tol().loose();
    if measured_lower < theoretical_lower - slack {
        return Err(OvfError::TheoremViolated(format!(
            "lower bound {measured_lower} below predicted {theoretical_lower}"
        )));
    }
    if measured_upper > theoretical_upper + slack {
        return Err(OvfError::TheoremViolated(format!(
            "upper bound {measured_upper} above predicted {theoretical_upper}"
        )));
    }
    Ok(PerturbReport {
        cert,
        measured_lower,
        measured_upper,
        theoretical_lower,
        theoretical_upper,
    })
}

/// `B = A + E` with random `E` scaled so that
/// `Σ ‖E_n‖ · ‖Ψ_n (S*)⁻¹‖ = budget_fraction`.
pub fn sample_admissible_perturbation(f: &WeakOvf, budget_fraction: f64, seed: u64) -> Result<Vec<Op>> {
    if !(budget_fraction > 0.0 && budget_fraction < 1.0) {
        return Err(OvfError::InvalidParameter(format!(
            "budget fraction {budget_fraction} must lie in (0, 1)"
        )));
    }
    let s_inv_adj = f.frame_operator_inverse()?.adjoint();
    let weights = psi_weights(f, &s_inv_adj);
    let mut rng = seeded_rng(seed);
    let e: Vec<Op> = (0..f.len())
        .map(|_| random_op_with(f.d0(), f.d(), &mut rng))
        .collect();
    let mixed: f64 = e.iter().zip(&weights).map(|(e, w)| e.spectral_norm() * w).sum();
    if mixed == 0.0 {
        return Err(OvfError::InvalidParameter("every Psi_n (S*)^-1 vanishes".into()));
    }
    let c = budget_fraction / mixed;
    Ok(f.a().iter().zip(&e).map(|(a, e)| a + &e.scale_real(c)).collect())
}

/// One line of the tightness table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TightnessRow {
    pub seed: u64,
    pub budget_fraction: f64,
    pub theoretical_lower: f64,
    pub measured_lower: f64,
    pub theoretical_upper: f64,
    pub measured_upper: f64,
}

pub fn tightness_row(f: &WeakOvf, budget_fraction: f64, seed: u64) -> Result<TightnessRow> {
    let b = sample_admissible_perturbation(f, budget_fraction, seed)?;
    let r = verify_perturbation(f, &b)?;
    Ok(TightnessRow {
        seed,
        budget_fraction,
        theoretical_lower: r.theoretical_lower,
        measured_lower: r.measured_lower,
        theoretical_upper: r.theoretical_upper,
        measured_upper: r.measured_upper,
    })
}

pub fn write_tightness_csv<W: Write>(rows: &[TightnessRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
