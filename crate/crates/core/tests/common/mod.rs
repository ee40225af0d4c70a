//! Reference computations written directly against nalgebra, independent of
//! the library's own operator helpers.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix};
use ovf_lab::numkernel::{random_op_with, seeded_rng};
use ovf_lab::{Op, Tolerance, WeakOvf};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type M = DMatrix<Complex<f64>>;

pub fn m(op: &Op) -> M {
    op.matrix().clone()
}

pub fn norm2(x: &M) -> f64 {
    x.clone().svd(false, false).singular_values.max()
}

pub fn min_sv(x: &M) -> f64 {
    x.clone().svd(false, false).singular_values.min()
}

pub fn frame_operator(a: &[Op], psi: &[Op]) -> M {
    let d = a[0].cols();
    let mut s = M::zeros(d, d);
    for (x, y) in a.iter().zip(psi) {
        s += m(y).adjoint() * m(x);
    }
    s
}

pub fn stack(seq: &[Op]) -> M {
    let (d0, d) = seq[0].shape();
    let mut out = M::zeros(seq.len() * d0, d);
    for (n, x) in seq.iter().enumerate() {
        out.view_mut((n * d0, 0), (d0, d)).copy_from(x.matrix());
    }
    out
}

pub fn inverse(x: &M) -> M {
    x.clone().try_inverse().expect("reference inverse exists")
}

pub fn identity(n: usize) -> M {
    M::identity(n, n)
}

/// Orthogonal projection onto the column space, from an SVD.
pub fn range_projection(x: &M) -> M {
    let svd = x.clone().svd(true, false);
    let u = svd.u.unwrap();
    let top = svd.singular_values.max();
    let mut p = M::zeros(x.nrows(), x.nrows());
    for (i, s) in svd.singular_values.iter().enumerate() {
        if *s > 1e-10 * top.max(1.0) {
            let c = u.column(i);
            p += &c * c.adjoint();
        }
    }
    p
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    seeded_rng(seed)
}

/// Random `(d, d0, N)` with `N·d0 ≥ d + 1`, within desk-scale limits.
pub fn random_dims(rng: &mut ChaCha8Rng) -> (usize, usize, usize) {
    let d: usize = rng.random_range(1..=8);
    let d0: usize = rng.random_range(1..=4);
    let min_n = (d + 1).div_ceil(d0).max(1);
    let n = rng.random_range(min_n..=(min_n + 3).min(16).max(min_n));
    (d, d0, n)
}

pub fn random_weak(seed: u64) -> WeakOvf {
    let mut r = rng(seed);
    let (d, d0, n) = random_dims(&mut r);
    loop {
        let a: Vec<Op> = (0..n).map(|_| random_op_with(d0, d, &mut r)).collect();
        let psi: Vec<Op> = (0..n).map(|_| random_op_with(d0, d, &mut r)).collect();
        let s = frame_operator(&a, &psi);
        if min_sv(&s) > 1e-3 * norm2(&s) {
            return WeakOvf::new(a, psi, Tolerance::default()).unwrap();
        }
    }
}

pub fn max_entry_diff(x: &M, y: &M) -> f64 {
    (x - y).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
