//! Dense complex matrices with the handful of operations the frame
//! machinery needs: products, adjoints, spectral norms, inversion under a
//! conditioning surrogate, Kronecker products, direct sums and orthonormal
//! complements.
//!
//! Storage and the SVD/QR/eigen routines come from `nalgebra`; [`Op`] only
//! fixes the contracts (shapes, tolerance policy, determinism of the random
//! generators).

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{OvfError, Result};

pub type C64 = nalgebra::Complex<f64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);

/// Numerical stand-in for "bounded invertible" and for exact identities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    residual_eps: f64,
    invert_eps: f64,
}

impl Tolerance {
    pub const DEFAULT_RESIDUAL_EPS: f64 = 1e-9;
    pub const DEFAULT_INVERT_EPS: f64 = 1e-8;

    pub fn new(residual_eps: f64, invert_eps: f64) -> Result<Self> {
        if !(residual_eps > 0.0 && residual_eps.is_finite()) {
            return Err(OvfError::InvalidTolerance(format!(
                "residual_eps must be positive, got {residual_eps}"
            )));
        }
        if !(invert_eps > 0.0 && invert_eps < 1.0) {
            return Err(OvfError::InvalidTolerance(format!(
                "invert_eps must lie in (0, 1), got {invert_eps}"
            )));
        }
        Ok(Self {
            residual_eps,
            invert_eps,
        })
    }

    pub fn residual_eps(&self) -> f64 {
        self.residual_eps
    }

    pub fn invert_eps(&self) -> f64 {
        self.invert_eps
    }

    /// The `10·residual_eps` threshold used for derived identities.
    pub fn loose(&self) -> f64 {
        10.0 * self.residual_eps
    }

    pub fn with_residual_eps(self, residual_eps: f64) -> Result<Self> {
        Self::new(residual_eps, self.invert_eps)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            residual_eps: Self::DEFAULT_RESIDUAL_EPS,
            invert_eps: Self::DEFAULT_INVERT_EPS,
        }
    }
}

/// A dense complex matrix, i.e. a bounded operator between finite
/// dimensional Hilbert spaces. Vectors are `n × 1` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Op(DMatrix<C64>);

impl Op {
    /// Builds an operator from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(OvfError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} operator",
                entries.len()
            )));
        }
        Ok(Op(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_matrix(m: DMatrix<C64>) -> Self {
        Op(m)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Op(DMatrix::from_fn(rows, cols, f))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Op(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Op(DMatrix::identity(n, n))
    }

    pub fn scalar(z: C64) -> Self {
        Op(DMatrix::from_element(1, 1, z))
    }

    pub fn real_scalar(x: f64) -> Self {
        Self::scalar(C64::new(x, 0.0))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Op::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Column vector.
    pub fn column(values: &[C64]) -> Self {
        Op(DMatrix::from_column_slice(values.len(), 1, values))
    }

    pub fn real_column(values: &[f64]) -> Self {
        Op::from_fn(values.len(), 1, |i, _| C64::new(values[i], 0.0))
    }

    /// Row vector.
    pub fn real_row(values: &[f64]) -> Self {
        Op::from_fn(1, values.len(), |_, j| C64::new(values[j], 0.0))
    }

    /// Standard basis column `e_index` of length `len`.
    pub fn basis_vector(len: usize, index: usize) -> Self {
        Op::from_fn(len, 1, |i, _| if i == index { ONE } else { ZERO })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.0[(row, col)] = value;
    }

    pub fn entries_row_major(&self) -> Vec<C64> {
        let (r, c) = self.shape();
        let mut out = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn adjoint(&self) -> Op {
        Op(self.0.adjoint())
    }

    pub fn scale(&self, z: C64) -> Op {
        Op(&self.0 * z)
    }

    pub fn scale_real(&self, x: f64) -> Op {
        self.scale(C64::new(x, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Frobenius inner product `tr(self* other)`, or the usual inner
    /// product `⟨other, self⟩` (conjugate-linear in `self`) on columns.
    pub fn inner(&self, other: &Op) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows() == 0 || self.cols() == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self.0.singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    /// Smallest of the `min(rows, cols)` singular values.
    pub fn min_singular_value(&self) -> f64 {
        self.singular_values().last().copied().unwrap_or(0.0)
    }

    /// Spectral distance `‖self − other‖`.
    pub fn dist(&self, other: &Op) -> f64 {
        (self - other).spectral_norm()
    }

    pub fn dist_identity(&self) -> f64 {
        debug_assert!(self.is_square());
        self.dist(&Op::identity(self.rows()))
    }

    pub fn max_abs_diff(&self, other: &Op) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Numerical rank: singular values above `invert_eps · σ_max`.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        let sv = self.singular_values();
        let Some(&top) = sv.first() else { return 0 };
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > tol.invert_eps() * top).count()
    }

    /// Inverse under the invertibility surrogate: declares `NotInvertible`
    /// when `σ_min / max(σ_max, 1) < invert_eps`, and guarantees both residuals
    /// `‖XY − I‖`, `‖YX − I‖` are at most `residual_eps`.
    pub fn try_invert(&self, tol: &Tolerance) -> Result<Op> {
        if !self.is_square() {
            return Err(OvfError::ShapeMismatch(format!(
                "cannot invert a {}x{} operator",
                self.rows(),
                self.cols()
            )));
        }
        let n = self.rows();
        let sv = self.singular_values();
        let top = sv.first().copied().unwrap_or(0.0);
        let bottom = sv.last().copied().unwrap_or(0.0);
        // The unit floor keeps 1x1 operators from passing trivially.
        let ratio = bottom / top.max(1.0);
        if ratio < tol.invert_eps() {
            return Err(OvfError::NotInvertible { ratio });
        }
        let mut inv = self
            .0
            .clone()
            .try_inverse()
            .map(Op)
            .ok_or(OvfError::NotInvertible { ratio })?;
        let id = Op::identity(n);
        // Newton-Schulz polishing for moderately conditioned inputs.
        for _ in 0..3 {
            let left = (self * &inv).dist(&id);
            let right = (&inv * self).dist(&id);
            let residual = left.max(right);
            if residual <= tol.residual_eps() {
                return Ok(inv);
            }
            let two_i = id.scale_real(2.0);
            inv = &inv * &(&two_i - &(self * &inv));
        }
        let residual = (self * &inv).dist(&id).max((&inv * self).dist(&id));
        if residual <= tol.residual_eps() {
            Ok(inv)
        } else {
            Err(OvfError::InverseResidual { residual })
        }
    }

    pub fn kron(&self, other: &Op) -> Op {
        Op(self.0.kronecker(&other.0))
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &Op) -> Op {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut m = DMatrix::zeros(r1 + r2, c1 + c2);
        m.view_mut((0, 0), (r1, c1)).copy_from(&self.0);
        m.view_mut((r1, c1), (r2, c2)).copy_from(&other.0);
        Op(m)
    }

    /// Stacks operators with equal column counts on top of each other.
    pub fn vstack(blocks: &[Op]) -> Result<Op> {
        let Some(first) = blocks.first() else {
            return Err(OvfError::ShapeMismatch("empty block list".into()));
        };
        let cols = first.cols();
        if blocks.iter().any(|b| b.cols() != cols) {
            return Err(OvfError::ShapeMismatch(
                "vstack blocks must share a column count".into(),
            ));
        }
        let rows: usize = blocks.iter().map(Op::rows).sum();
        let mut m = DMatrix::zeros(rows, cols);
        let mut at = 0;
        for b in blocks {
            m.view_mut((at, 0), (b.rows(), cols)).copy_from(&b.0);
            at += b.rows();
        }
        Ok(Op(m))
    }

    /// Places operators with equal row counts side by side.
    pub fn hstack(blocks: &[Op]) -> Result<Op> {
        let Some(first) = blocks.first() else {
            return Err(OvfError::ShapeMismatch("empty block list".into()));
        };
        let rows = first.rows();
        if blocks.iter().any(|b| b.rows() != rows) {
            return Err(OvfError::ShapeMismatch(
                "hstack blocks must share a row count".into(),
            ));
        }
        let cols: usize = blocks.iter().map(Op::cols).sum();
        let mut m = DMatrix::zeros(rows, cols);
        let mut at = 0;
        for b in blocks {
            m.view_mut((0, at), (rows, b.cols())).copy_from(&b.0);
            at += b.cols();
        }
        Ok(Op(m))
    }

    /// Copy of the sub-block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Op {
        Op(self.0.view((row, col), (rows, cols)).into_owned())
    }

    /// Orthonormal basis (as columns) of the column space, rank decided
    /// relative to the largest singular value.
    pub fn range_basis(&self, tol: &Tolerance) -> Op {
        let rows = self.rows();
        if self.cols() == 0 || rows == 0 {
            return Op::zeros(rows, 0);
        }
        let svd = self.0.clone().svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| top > 0.0 && s > tol.invert_eps() * top)
            .map(|(i, _)| i)
            .collect();
        Op::from_fn(rows, keep.len(), |i, j| u[(i, keep[j])])
    }

    /// Orthonormal basis of `range(self)^⊥`; requires full column rank.
    pub fn orthonormal_complement(&self, tol: &Tolerance) -> Result<Op> {
        let cols = self.cols();
        let q = self.range_basis(tol);
        if q.cols() < cols {
            return Err(OvfError::RankDeficient {
                rank: q.cols(),
                expected: cols,
            });
        }
        complement_of_basis(&q)
    }

    /// Smallest eigenvalue of the Hermitian part `(X + X*)/2`.
    pub fn hermitian_part_min_eigenvalue(&self) -> f64 {
        let h = (self + &self.adjoint()).scale_real(0.5);
        h.0.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_unitary(&self, tol: &Tolerance) -> bool {
        self.is_square() && (&self.adjoint() * self).dist_identity() <= tol.residual_eps()
    }
}

/// Completes orthonormal columns `q` to an orthonormal basis and returns
/// the added columns.
pub(crate) fn complement_of_basis(q: &Op) -> Result<Op> {
    // Gram-Schmidt over the standard basis, taking at each step the basis
    // vector with the largest component outside the current span. SVD of
    // I − QQ* is avoided: its repeated singular values leave the left
    // vectors poorly determined.
    let rows = q.rows();
    let want = rows - q.cols();
    let mut span: Vec<DVector<C64>> = (0..q.cols()).map(|j| q.0.column(j).into_owned()).collect();
    let mut added = Vec::with_capacity(want);
    let residual = |span: &[DVector<C64>], i: usize| {
        let mut v = DVector::from_fn(rows, |r, _| if r == i { ONE } else { ZERO });
        for _ in 0..2 {
            for b in span {
                let c = b.dotc(&v);
                v -= b * c;
            }
        }
        v
    };
    for _ in 0..want {
        let (v, n) = (0..rows)
            .map(|i| {
                let v = residual(&span, i);
                let n = v.norm();
                (v, n)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("rows > 0 when a complement is wanted");
        if n < 0.5 / (rows as f64).sqrt() {
            return Err(OvfError::RankDeficient {
                rank: rows - want,
                expected: q.cols(),
            });
        }
        let v = v / C64::new(n, 0.0);
        span.push(v.clone());
        added.push(v);
    }
    Ok(Op::from_fn(rows, want, |i, j| added[j][i]))
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Deterministic generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn random_op_with<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Op {
    Op::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn random_op(rows: usize, cols: usize, seed: u64) -> Op {
    random_op_with(rows, cols, &mut seeded_rng(seed))
}

/// Haar-distributed unitary (QR of a Gaussian matrix with the phases of
/// `diag(R)` divided out).
pub fn random_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Op {
    let g = random_op_with(n, n, rng).into_matrix();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            let z = r[(i, i)];
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                ONE
            }
        } else {
            ZERO
        }
    });
    Op(q * phases)
}

pub fn random_unitary(n: usize, seed: u64) -> Op {
    random_unitary_with(n, &mut seeded_rng(seed))
}

/// `rows × cols` matrix with orthonormal columns (`rows ≥ cols`).
pub fn random_isometry_with<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Op {
    assert!(rows >= cols, "isometry needs rows >= cols");
    random_unitary_with(rows, rng).block(0, 0, rows, cols)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Op> for &Op {
            type Output = Op;
            fn $method(self, rhs: &Op) -> Op {
                Op(&self.0 $op &rhs.0)
            }
        }
        impl $trait<Op> for Op {
            type Output = Op;
            fn $method(self, rhs: Op) -> Op {
                Op(self.0 $op rhs.0)
            }
        }
        impl $trait<&Op> for Op {
            type Output = Op;
            fn $method(self, rhs: &Op) -> Op {
                Op(self.0 $op &rhs.0)
            }
        }
        impl $trait<Op> for &Op {
            type Output = Op;
            fn $method(self, rhs: Op) -> Op {
                Op(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Neg for &Op {
    type Output = Op;
    fn neg(self) -> Op {
        Op(-&self.0)
    }
}

impl Neg for Op {
    type Output = Op;
    fn neg(self) -> Op {
        Op(-self.0)
    }
}
