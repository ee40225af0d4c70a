//! Finite group-like unitary systems.
//!
//! A product of two elements is stored as `(k, σ)`, meaning
//! `U·V = e^{2πik/m} σ(UV)`. Phases are integers modulo `m`, so every
//! structural identity is checked exactly; floats only appear when a phase
//! is turned into a complex number.

use std::fmt;

use crate::dilation::{parsevalize, Side};
use crate::error::{OvfError, Precondition, Result};
use crate::frame::WeakOvf;
use crate::group::{amplified_shift, loosened, FiniteGroup};
use crate::numkernel::{Op, Tolerance, C64, ONE, ZERO};

/// `(phase turns, element index)`.
pub type Phased = (u64, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLikeSystem {
    phase_order: u64,
    mul: Vec<Vec<Phased>>,
    inv: Vec<Phased>,
    names: Option<Vec<String>>,
}

/// `e^{2πik/m}`, exact on quarter turns.
pub fn phase(k: u64, m: u64) -> C64 {
    let k = k % m;
    if (4 * k) % m == 0 {
        return match 4 * k / m {
            0 => ONE,
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let angle = std::f64::consts::TAU * k as f64 / m as f64;
    C64::new(angle.cos(), angle.sin())
}

impl GroupLikeSystem {
    /// Checks that the table is total and has an identity with phase-free
    /// products and that every element has an inverse in `𝕋𝓤`. The
    /// identity is moved to index 0. The algebraic identities are left to
    /// [`GroupLikeSystem::validate`].
    pub fn new(phase_order: u64, mul: Vec<Vec<Phased>>) -> Result<Self> {
        Self::with_names(phase_order, mul, None)
    }

    pub fn with_names(
        phase_order: u64,
        mul: Vec<Vec<Phased>>,
        names: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = mul.len();
        if phase_order == 0 {
            return Err(OvfError::InvalidSystem("phase order must be positive".into()));
        }
        if n == 0 {
            return Err(OvfError::InvalidSystem("empty table".into()));
        }
        if names.as_ref().is_some_and(|ns| ns.len() != n) {
            return Err(OvfError::InvalidSystem("names do not match the table size".into()));
        }
        for (a, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(OvfError::InvalidSystem(format!("row {a} has {} entries", row.len())));
            }
            if let Some(&(k, idx)) = row.iter().find(|&&(k, idx)| k >= phase_order || idx >= n) {
                return Err(OvfError::InvalidSystem(format!("entry ({k}, {idx}) out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|v| mul[e][v] == (0, v) && mul[v][e] == (0, v)))
            .ok_or_else(|| OvfError::InvalidSystem("no identity element".into()))?;
        let mut inv = Vec::with_capacity(n);
        for u in 0..n {
            let v = (0..n)
                .find(|&v| mul[u][v].1 == identity)
                .ok_or_else(|| OvfError::InvalidSystem(format!("element {u} has no inverse")))?;
            // U V = ω^k I, so U⁻¹ = ω^{-k} V
            inv.push(((phase_order - mul[u][v].0) % phase_order, v));
        }
        let sys = Self {
            phase_order,
            mul,
            inv,
            names,
        };
        Ok(if identity == 0 { sys } else { sys.relabelled(identity) })
    }

    fn relabelled(self, identity: usize) -> Self {
        let n = self.size();
        let order: Vec<usize> = std::iter::once(identity)
            .chain((0..n).filter(|&u| u != identity))
            .collect();
        let mut new_index = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let map = |(k, idx): Phased| (k, new_index[idx]);
        Self {
            phase_order: self.phase_order,
            mul: order
                .iter()
                .map(|&a| order.iter().map(|&b| map(self.mul[a][b])).collect())
                .collect(),
            inv: order.iter().map(|&a| map(self.inv[a])).collect(),
            names: self
                .names
                .map(|ns| order.iter().map(|&i| ns[i].clone()).collect()),
        }
    }

    /// A group with trivial phases.
    pub fn from_group(group: &FiniteGroup) -> Self {
        Self::from_cocycle(group, 1, |_, _| 0).expect("groups are group-like systems")
    }

    /// `U_g U_h = ω^{c(g,h)} U_{gh}` with `ω = e^{2πi/m}`.
    pub fn from_cocycle(
        group: &FiniteGroup,
        phase_order: u64,
        cocycle: impl Fn(usize, usize) -> u64,
    ) -> Result<Self> {
        let n = group.order();
        let mul = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| (cocycle(g, h) % phase_order, group.mul(g, h)))
                    .collect()
            })
            .collect();
        Self::new(phase_order, mul)
    }

    /// The rescaled elements `U_g = ω^{-b(g)} π_g` of a group, giving the
    /// cocycle `b(gh) − b(g) − b(h)`. Needs `b(e) = 0`.
    pub fn coboundary_twist(group: &FiniteGroup, phase_order: u64, b: &[u64]) -> Result<Self> {
        if b.len() != group.order() {
            return Err(OvfError::InvalidSystem("one phase per element is required".into()));
        }
        let m = phase_order;
        Self::from_cocycle(group, m, |g, h| {
            (b[group.mul(g, h)] % m + 2 * m - b[g] % m - b[h] % m) % m
        })
    }

    /// `{X^a Z^b}` on `Z_n × Z_n`, element `a·n + b`, with `ZX = ωXZ`.
    pub fn weyl_heisenberg(n: usize) -> Self {
        assert!(n > 0, "Weyl-Heisenberg system needs n > 0");
        let mul = (0..n * n)
            .map(|x| {
                (0..n * n)
                    .map(|y| {
                        let (a1, b1, a2, b2) = (x / n, x % n, y / n, y % n);
                        (((b1 * a2) % n) as u64, ((a1 + a2) % n) * n + (b1 + b2) % n)
                    })
                    .collect()
            })
            .collect();
        Self::new(n as u64, mul).expect("Weyl-Heisenberg table is well formed")
    }

    /// `{I, U}` with `U² = i·I`.
    pub fn quarter_pair() -> Self {
        Self::new(4, vec![vec![(0, 0), (0, 1)], vec![(0, 1), (1, 0)]])
            .expect("quarter pair is well formed")
    }

    pub fn size(&self) -> usize {
        self.mul.len()
    }

    pub fn phase_order(&self) -> u64 {
        self.phase_order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn table(&self) -> &[Vec<Phased>] {
        &self.mul
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Phase turns of `UV`.
    pub fn f(&self, u: usize, v: usize) -> u64 {
        self.mul[u][v].0
    }

    /// Element index of `UV`.
    pub fn sigma(&self, u: usize, v: usize) -> usize {
        self.mul[u][v].1
    }

    /// `U⁻¹ = e^{2πik/m} σ(U⁻¹)` as `(k, σ(U⁻¹))`.
    pub fn inv(&self, u: usize) -> Phased {
        self.inv[u]
    }

    pub fn phase(&self, k: u64) -> C64 {
        phase(k, self.phase_order)
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.phase_order
    }

    /// `(UV⁻¹)` as phase turns and element.
    pub fn times_inverse(&self, u: usize, v: usize) -> Phased {
        let (k, w) = self.inv[v];
        let (k2, x) = self.mul[u][w];
        (self.add(k, k2), x)
    }

    /// `(U⁻¹V)` as phase turns and element.
    pub fn inverse_times(&self, u: usize, v: usize) -> Phased {
        let (k, w) = self.inv[u];
        let (k2, x) = self.mul[w][v];
        (self.add(k, k2), x)
    }

    /// The underlying group when every phase is trivial.
    pub fn as_group(&self) -> Option<FiniteGroup> {
        if self.mul.iter().flatten().any(|&(k, _)| k != 0) {
            return None;
        }
        let table = self
            .mul
            .iter()
            .map(|row| row.iter().map(|&(_, idx)| idx).collect())
            .collect();
        FiniteGroup::new(table).ok()
    }

    /// Checks associativity of `σ`, the phase cocycle identity, identity and
    /// inverse relations, and injectivity of the translation maps.
    pub fn validate(&self) -> Validation {
        match self.first_violation() {
            None => Validation::Valid,
            Some(v) => Validation::Violated(v),
        }
    }

    fn first_violation(&self) -> Option<Violation> {
        let n = self.size();
        for u in 0..n {
            if self.mul[0][u] != (0, u) || self.mul[u][0] != (0, u) {
                return Some(Violation::Identity { u });
            }
            let (k, w) = self.inv[u];
            // U U⁻¹ = ω^k U σ(U⁻¹) must be I, and likewise on the left
            let right = self.mul[u][w];
            let left = self.mul[w][u];
            if right.1 != 0 || left.1 != 0 || self.add(k, right.0) != 0 || self.add(k, left.0) != 0 {
                return Some(Violation::Inverse { u });
            }
        }
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let (k_vw, vw) = self.mul[v][w];
                    let (k_uv, uv) = self.mul[u][v];
                    let (k_l, l) = self.mul[u][vw];
                    let (k_r, r) = self.mul[uv][w];
                    if l != r {
                        return Some(Violation::Associativity { u, v, w });
                    }
                    if self.add(k_l, k_vw) != self.add(k_r, k_uv) {
                        return Some(Violation::Cocycle { u, v, w });
                    }
                }
            }
        }
        let maps: [(&'static str, fn(&Self, usize, usize) -> usize); 6] = [
            ("U -> s(VU)", |s, v, u| s.sigma(v, u)),
            ("U -> s(UV)", |s, v, u| s.sigma(u, v)),
            ("U -> s(UV^-1)", |s, v, u| s.times_inverse(u, v).1),
            ("U -> s(V^-1 U)", |s, v, u| s.inverse_times(v, u).1),
            ("U -> s(VU^-1)", |s, v, u| s.times_inverse(v, u).1),
            ("U -> s(U^-1 V)", |s, v, u| s.inverse_times(u, v).1),
        ];
        for (name, map) in maps {
            for v in 0..n {
                if let Some((u1, u2)) = first_collision(n, |u| map(self, v, u)) {
                    return Some(Violation::NotInjective { map: name, v, w: None, u1, u2 });
                }
            }
        }
        for v in 0..n {
            for w in 0..n {
                let image = |u| self.sigma(self.times_inverse(v, u).1, w);
                if let Some((u1, u2)) = first_collision(n, image) {
                    return Some(Violation::NotInjective {
                        map: "U -> s(VU^-1 W)",
                        v,
                        w: Some(w),
                        u1,
                        u2,
                    });
                }
            }
        }
        None
    }
}

fn first_collision(n: usize, map: impl Fn(usize) -> usize) -> Option<(usize, usize)> {
    let mut seen = vec![None; n];
    for u in 0..n {
        let x = map(u);
        if let Some(prev) = seen[x] {
            return Some((prev, u));
        }
        seen[x] = Some(u);
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Identity { u: usize },
    Inverse { u: usize },
    Associativity { u: usize, v: usize, w: usize },
    Cocycle { u: usize, v: usize, w: usize },
    NotInjective {
        map: &'static str,
        v: usize,
        w: Option<usize>,
        u1: usize,
        u2: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Identity { u } => write!(f, "identity does not fix element {u}"),
            Violation::Inverse { u } => write!(f, "inverse of element {u} is inconsistent"),
            Violation::Associativity { u, v, w } => {
                write!(f, "s(U s(VW)) != s(s(UV) W) at ({u}, {v}, {w})")
            }
            Violation::Cocycle { u, v, w } => {
                write!(f, "phase cocycle identity fails at ({u}, {v}, {w})")
            }
            Violation::NotInjective { map, v, w, u1, u2 } => {
                write!(f, "{map} with V = {v}")?;
                if let Some(w) = w {
                    write!(f, ", W = {w}")?;
                }
                write!(f, " sends {u1} and {u2} to the same element")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Valid,
    Violated(Violation),
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validation::Valid)
    }
}

fn require_valid(sys: &GroupLikeSystem) -> Result<()> {
    match sys.validate() {
        Validation::Valid => Ok(()),
        Validation::Violated(v) => Err(OvfError::InvalidSystem(v.to_string())),
    }
}

/// `U ↦ π(U)` with `π(U)π(V) = f(UV)π(σ(UV))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupLikeRepresentation {
    system: GroupLikeSystem,
    pi: Vec<Op>,
}

impl GroupLikeRepresentation {
    pub fn new(system: GroupLikeSystem, pi: Vec<Op>, tol: &Tolerance) -> Result<Self> {
        let n = system.size();
        if pi.len() != n {
            return Err(OvfError::InvalidRepresentation(format!(
                "{} operators for a system of size {n}",
                pi.len()
            )));
        }
        let d = pi[0].rows();
        if let Some(u) = pi.iter().position(|p| p.shape() != (d, d) || !p.is_unitary(tol)) {
            return Err(OvfError::InvalidRepresentation(format!(
                "pi({u}) is not a {d}x{d} unitary"
            )));
        }
        let rep = Self { system, pi };
        let (residual, (u, v)) = rep.multiplication_residual();
        if residual > tol.residual_eps() {
            return Err(OvfError::InvalidRepresentation(format!(
                "pi(U)pi(V) != f(UV)pi(s(UV)) at ({u}, {v}) (residual {residual:e})"
            )));
        }
        for u in 0..n {
            let r = rep.inverse(u).dist(&rep.pi[u].adjoint());
            if r > tol.residual_eps() {
                return Err(OvfError::InvalidRepresentation(format!(
                    "inverse of pi({u}) is off by {r:e}"
                )));
            }
            for v in 0..u {
                if rep.pi[u].dist(&rep.pi[v]) <= tol.loose() {
                    return Err(OvfError::InvalidRepresentation(format!(
                        "pi({v}) and pi({u}) coincide"
                    )));
                }
            }
        }
        Ok(rep)
    }

    pub fn system(&self) -> &GroupLikeSystem {
        &self.system
    }

    pub fn pi(&self) -> &[Op] {
        &self.pi
    }

    pub fn dim(&self) -> usize {
        self.pi[0].rows()
    }

    /// `π(U)⁻¹ = f(U⁻¹) π(σ(U⁻¹))`.
    pub fn inverse(&self, u: usize) -> Op {
        let (k, w) = self.system.inv(u);
        if k == 0 {
            self.pi[w].clone()
        } else {
            self.pi[w].scale(self.system.phase(k))
        }
    }

    pub fn multiplication_residual(&self) -> (f64, (usize, usize)) {
        let n = self.system.size();
        let mut worst = (0.0, (0, 0));
        for u in 0..n {
            for v in 0..n {
                let (k, w) = self.system.mul[u][v];
                let r = (&self.pi[u] * &self.pi[v]).dist(&self.pi[w].scale(self.system.phase(k)));
                if r > worst.0 {
                    worst = (r, (u, v));
                }
            }
        }
        worst
    }

    /// `U ↦ W π(U) W*` for a unitary `W`.
    pub fn conjugate(&self, w: &Op) -> Self {
        let w_adj = w.adjoint();
        Self {
            system: self.system.clone(),
            pi: self.pi.iter().map(|p| &(w * p) * &w_adj).collect(),
        }
    }

    /// `U ↦ π(U) ⊗ I_copies`.
    pub fn amplify(&self, copies: usize) -> Self {
        let id = Op::identity(copies);
        Self {
            system: self.system.clone(),
            pi: self.pi.iter().map(|p| p.kron(&id)).collect(),
        }
    }
}

/// `λ_U χ_V = f(UV) χ_{σ(UV)}`.
pub fn regular_representation(sys: &GroupLikeSystem) -> Result<GroupLikeRepresentation> {
    require_valid(sys)?;
    let n = sys.size();
    let pi = (0..n)
        .map(|u| {
            let mut m = Op::zeros(n, n);
            for v in 0..n {
                let (k, w) = sys.mul[u][v];
                m.set(w, v, sys.phase(k));
            }
            m
        })
        .collect();
    Ok(GroupLikeRepresentation {
        system: sys.clone(),
        pi,
    })
}

/// `ρ_U χ_V = f(VU⁻¹) χ_{σ(VU⁻¹)}`.
pub fn right_regular_representation(sys: &GroupLikeSystem) -> Result<Vec<Op>> {
    require_valid(sys)?;
    let n = sys.size();
    Ok((0..n)
        .map(|u| {
            let mut m = Op::zeros(n, n);
            for v in 0..n {
                let (k, w) = sys.times_inverse(v, u);
                m.set(w, v, sys.phase(k));
            }
            m
        })
        .collect())
}

/// `({A π(U)⁻¹}, {Ψ π(U)⁻¹})` indexed by system element.
pub fn generate_grouplike_frame(
    rep: &GroupLikeRepresentation,
    a: &Op,
    psi: &Op,
    tol: Tolerance,
) -> Result<WeakOvf> {
    let d = rep.dim();
    if a.cols() != d || psi.shape() != a.shape() {
        return Err(OvfError::ShapeMismatch(format!(
            "generators must be d0x{d} with equal shapes"
        )));
    }
    let inverses: Vec<Op> = (0..rep.system().size()).map(|u| rep.inverse(u)).collect();
    let frame_a = inverses.iter().map(|p| a * p).collect();
    let frame_psi = inverses.iter().map(|p| psi * p).collect();
    WeakOvf::new(frame_a, frame_psi, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionReport {
    pub passed: bool,
    pub max_residual: f64,
    /// `(U, V, W)` attaining the largest residual.
    pub worst: Option<(usize, usize, usize)>,
}

/// Checks `X_{σ(UV)} Y_{σ(UW)}* = f(UV) conj(f(UW)) X_V Y_W*` for
/// `(X, Y) ∈ {(A, A), (A, Ψ), (Ψ, Ψ)}` over all triples.
pub fn check_grouplike_conditions(f: &WeakOvf, sys: &GroupLikeSystem) -> Result<ConditionReport> {
    let n = sys.size();
    if f.len() != n {
        return Err(OvfError::PreconditionFailed(Precondition::OrderMismatch));
    }
    let (a, psi) = (f.a(), f.psi());
    let pairs = [(a, a), (a, psi), (psi, psi)];
    let adjoints: Vec<Vec<Op>> = pairs
        .iter()
        .map(|(_, y)| y.iter().map(Op::adjoint).collect())
        .collect();
    let mut max_residual = 0.0;
    let mut worst = None;
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                let (k_uv, uv) = sys.mul[u][v];
                let (k_uw, uw) = sys.mul[u][w];
                let c = sys.phase(sys.add(k_uv, sys.phase_order - k_uw));
                let r = pairs
                    .iter()
                    .zip(&adjoints)
                    .map(|((x, _), y_adj)| {
                        (&x[uv] * &y_adj[uw]).dist(&(&x[v] * &y_adj[w]).scale(c))
                    })
                    .fold(0.0, f64::max);
                if r > max_residual {
                    max_residual = r;
                    worst = Some((u, v, w));
                }
            }
        }
    }
    Ok(ConditionReport {
        passed: max_residual <= f.tol().loose(),
        max_residual,
        worst,
    })
}

/// `π(U) = θ_Ψ* (λ_U ⊗ I) θ_A` for a Parseval frame whose analysis
/// operator is onto and which satisfies the group-like conditions.
pub fn reconstruct_grouplike_representation(
    f: &WeakOvf,
    sys: &GroupLikeSystem,
) -> Result<GroupLikeRepresentation> {
    if f.len() != sys.size() {
        return Err(OvfError::PreconditionFailed(Precondition::OrderMismatch));
    }
    if !f.classify().is_parseval {
        return Err(OvfError::PreconditionFailed(Precondition::NotParseval));
    }
    let theta_a = f.theta_a();
    if theta_a.rank(f.tol()) < theta_a.rows() {
        return Err(OvfError::PreconditionFailed(Precondition::AnalysisNotSurjective));
    }
    if !check_grouplike_conditions(f, sys)?.passed {
        return Err(OvfError::PreconditionFailed(Precondition::ConditionsFail));
    }
    let lambda = regular_representation(sys)?;
    let theta_psi_adj = f.theta_psi().adjoint();
    let pi = lambda
        .pi()
        .iter()
        .map(|l| &(&theta_psi_adj * &amplified_shift(l, f.d0())) * &theta_a)
        .collect();
    GroupLikeRepresentation::new(sys.clone(), pi, &loosened(f.tol()))
}

/// Group-like conditions for the one-sided parsevalization of `f`.
pub fn twisted_grouplike_conditions(
    f: &WeakOvf,
    sys: &GroupLikeSystem,
    side: Side,
) -> Result<ConditionReport> {
    check_grouplike_conditions(&parsevalize(f, side)?, sys)
}

/// `ω^j` on the diagonal and the cyclic shift: the standard clock and
/// shift realization of [`GroupLikeSystem::weyl_heisenberg`].
pub fn clock_and_shift(n: usize, tol: &Tolerance) -> Result<GroupLikeRepresentation> {
    let sys = GroupLikeSystem::weyl_heisenberg(n);
    let m = n as u64;
    let x = Op::from_fn(n, n, |i, j| if i == (j + 1) % n { ONE } else { ZERO });
    let z = Op::from_fn(n, n, |i, j| if i == j { phase(i as u64, m) } else { ZERO });
    let mut x_pows = vec![Op::identity(n)];
    let mut z_pows = vec![Op::identity(n)];
    for k in 1..n {
        x_pows.push(&x_pows[k - 1] * &x);
        z_pows.push(&z_pows[k - 1] * &z);
    }
    let pi = (0..n * n).map(|e| &x_pows[e / n] * &z_pows[e % n]).collect();
    GroupLikeRepresentation::new(sys, pi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{check_shift_conditions, generate_frame, left_regular};
    use crate::numkernel::{random_op, random_unitary};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn corpus() -> Vec<GroupLikeSystem> {
        let d3 = FiniteGroup::dihedral(3);
        vec![
            GroupLikeSystem::from_group(&FiniteGroup::trivial()),
            GroupLikeSystem::from_group(&FiniteGroup::cyclic(5)),
            GroupLikeSystem::from_group(&d3),
            GroupLikeSystem::quarter_pair(),
            GroupLikeSystem::weyl_heisenberg(2),
            GroupLikeSystem::weyl_heisenberg(3),
            GroupLikeSystem::coboundary_twist(&d3, 3, &[0, 1, 2, 1, 0, 2]).unwrap(),
            GroupLikeSystem::coboundary_twist(&FiniteGroup::cyclic(4), 4, &[0, 3, 1, 2]).unwrap(),
        ]
    }

    #[test]
    fn exact_phases() {
        assert_eq!(phase(0, 1), ONE);
        assert_eq!(phase(1, 4), C64::new(0.0, 1.0));
        assert_eq!(phase(2, 4), C64::new(-1.0, 0.0));
        assert_eq!(phase(3, 4), C64::new(0.0, -1.0));
        assert_eq!(phase(4, 8), C64::new(-1.0, 0.0));
        assert!((phase(1, 3) - C64::new(-0.5, 0.75f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn corpus_is_valid() {
        for sys in corpus() {
            assert_eq!(sys.validate(), Validation::Valid, "{sys:?}");
        }
    }

    #[test]
    fn group_encoding_has_trivial_mappings() {
        let g = FiniteGroup::dihedral(3);
        let sys = GroupLikeSystem::from_group(&g);
        for u in 0..6 {
            assert_eq!(sys.inv(u), (0, g.inv(u)));
            for v in 0..6 {
                assert_eq!((sys.f(u, v), sys.sigma(u, v)), (0, g.mul(u, v)));
            }
        }
        assert_eq!(sys.as_group(), Some(g));
        assert_eq!(GroupLikeSystem::quarter_pair().as_group(), None);
    }

    #[test]
    fn quarter_pair_inverse_carries_phase() {
        let sys = GroupLikeSystem::quarter_pair();
        // U² = iI, so U⁻¹ = -iU
        assert_eq!(sys.inv(1), (3, 1));
    }

    #[test]
    fn broken_phase_is_located() {
        let sys = GroupLikeSystem::weyl_heisenberg(2);
        let mut table = sys.table().to_vec();
        table[1][2].0 = (table[1][2].0 + 1) % 2;
        let broken = GroupLikeSystem::new(2, table).unwrap();
        match broken.validate() {
            Validation::Violated(Violation::Cocycle { u, v, w }) => {
                let involved = [(u, v), (v, w), (u, broken.sigma(v, w)), (broken.sigma(u, v), w)];
                assert!(involved.contains(&(1, 2)));
            }
            other => panic!("expected a cocycle violation, got {other:?}"),
        }
    }

    #[test]
    fn broken_structure_is_rejected() {
        assert!(GroupLikeSystem::new(0, vec![vec![(0, 0)]]).is_err());
        assert!(GroupLikeSystem::new(2, vec![vec![(2, 0)]]).is_err());
        // σ not injective in the second slot
        let table = vec![vec![(0, 0), (0, 1)], vec![(0, 1), (0, 1)]];
        assert!(GroupLikeSystem::new(1, table).is_err());
    }

    #[test]
    fn identity_moves_to_front() {
        let sys = GroupLikeSystem::with_names(
            4,
            vec![vec![(1, 1), (0, 0)], vec![(0, 0), (0, 1)]],
            Some(vec!["U".into(), "I".into()]),
        )
        .unwrap();
        assert_eq!(sys, GroupLikeSystem::quarter_pair().clone_with_names(&["I", "U"]));
    }

    impl GroupLikeSystem {
        fn clone_with_names(&self, names: &[&str]) -> Self {
            let mut s = self.clone();
            s.names = Some(names.iter().map(|s| s.to_string()).collect());
            s
        }
    }

    #[test]
    fn translation_is_a_bijection() {
        for sys in corpus() {
            for v in 0..sys.size() {
                let mut image: Vec<usize> = (0..sys.size()).map(|u| sys.sigma(v, u)).collect();
                image.sort_unstable();
                assert_eq!(image, (0..sys.size()).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn regular_representation_examples() {
        let g = FiniteGroup::cyclic(4);
        let lambda = regular_representation(&GroupLikeSystem::from_group(&g)).unwrap();
        assert_eq!(lambda.pi(), left_regular(&g).pi());

        let sys = GroupLikeSystem::quarter_pair();
        let lambda = regular_representation(&sys).unwrap();
        // λ_U χ_U = i χ_I
        assert_eq!(lambda.pi()[1].get(0, 1), C64::new(0.0, 1.0));
        assert_eq!(lambda.pi()[1].get(1, 0), ONE);

        for sys in corpus() {
            let lambda = regular_representation(&sys).unwrap();
            assert!(GroupLikeRepresentation::new(sys.clone(), lambda.pi().to_vec(), &tol()).is_ok());
            let rho = right_regular_representation(&sys).unwrap();
            for (u, r) in rho.iter().enumerate() {
                assert!(r.is_unitary(&tol()));
                for l in lambda.pi() {
                    assert!((l * r).dist(&(r * l)) < 1e-12, "{u}");
                }
            }
        }
    }

    #[test]
    fn invalid_system_has_no_regular_representation() {
        let mut table = GroupLikeSystem::weyl_heisenberg(2).table().to_vec();
        table[3][3].0 = 1 - table[3][3].0;
        let broken = GroupLikeSystem::new(2, table).unwrap();
        assert!(matches!(
            regular_representation(&broken),
            Err(OvfError::InvalidSystem(_))
        ));
    }

    #[test]
    fn clock_and_shift_is_a_representation() {
        for n in 2..5 {
            assert!(clock_and_shift(n, &tol()).is_ok());
        }
    }

    #[test]
    fn frame_generation_examples() {
        let single = regular_representation(&GroupLikeSystem::from_group(&FiniteGroup::trivial())).unwrap();
        let f = generate_grouplike_frame(&single, &Op::identity(1), &Op::identity(1), tol()).unwrap();
        assert_eq!(f.len(), 1);

        let g = FiniteGroup::dihedral(3);
        let planted = left_regular(&g).conjugate(&random_unitary(6, 2));
        let sys = GroupLikeSystem::from_group(&g);
        let rep = GroupLikeRepresentation::new(sys, planted.pi().to_vec(), &tol()).unwrap();
        let (a, psi) = (random_op(2, 6, 3), random_op(2, 6, 4));
        let via_group = generate_frame(&planted, &a, &psi, tol()).unwrap();
        let via_system = generate_grouplike_frame(&rep, &a, &psi, tol()).unwrap();
        assert_eq!(via_group, via_system);

        // U = e^{iπ/4}·swap squares to iI; A = Ψ = (1, 0) gives S = I.
        let w = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let u = Op::new(2, 2, vec![ZERO, w, w, ZERO]).unwrap();
        let rep = GroupLikeRepresentation::new(
            GroupLikeSystem::quarter_pair(),
            vec![Op::identity(2), u],
            &tol(),
        )
        .unwrap();
        let a = Op::real_row(&[1.0, 0.0]);
        let f = generate_grouplike_frame(&rep, &a, &a, tol()).unwrap();
        assert!(f.classify().is_parseval);
    }

    #[test]
    fn condition_examples() {
        let rep = clock_and_shift(3, &tol()).unwrap();
        let f = generate_grouplike_frame(&rep, &random_op(1, 3, 1), &random_op(1, 3, 2), tol()).unwrap();
        assert!(check_grouplike_conditions(&f, rep.system()).unwrap().passed);

        let g = FiniteGroup::cyclic(3);
        let planted = left_regular(&g).conjugate(&random_unitary(3, 5));
        let gf = generate_frame(&planted, &random_op(1, 3, 6), &random_op(1, 3, 7), tol()).unwrap();
        let sys = GroupLikeSystem::from_group(&g);
        let a = check_grouplike_conditions(&gf, &sys).unwrap();
        let b = check_shift_conditions(&gf, &g).unwrap();
        assert_eq!(a.passed, b.passed);
        assert_eq!(a.max_residual, b.max_residual);

        let (mut a, psi) = f.into_parts();
        a[4] = a[4].scale(C64::new(0.0, 1.0));
        let tampered = WeakOvf::new(a, psi, tol()).unwrap();
        let report = check_grouplike_conditions(&tampered, rep.system()).unwrap();
        assert!(!report.passed);
        assert!(report.worst.is_some());
    }

    fn parseval_generated(rep: &GroupLikeRepresentation, d0: usize, seed: u64) -> WeakOvf {
        let d = rep.dim();
        let a = random_op(d0, d, seed);
        let psi = random_op(d0, d, seed + 1);
        let raw = generate_grouplike_frame(rep, &a, &psi, tol()).unwrap();
        let s_inv = raw.frame_operator_inverse().unwrap();
        generate_grouplike_frame(rep, &(&a * &s_inv), &psi, tol()).unwrap()
    }

    #[test]
    fn reconstruction_examples() {
        let single = GroupLikeSystem::from_group(&FiniteGroup::trivial());
        let f = WeakOvf::classic(vec![Op::identity(1)], tol()).unwrap();
        let rec = reconstruct_grouplike_representation(&f, &single).unwrap();
        assert_eq!(rec.pi()[0], Op::identity(1));

        for sys in corpus() {
            let lambda = regular_representation(&sys).unwrap();
            let planted = lambda.amplify(2).conjugate(&random_unitary(2 * sys.size(), 9));
            let f = parseval_generated(&planted, 2, 40);
            let rec = reconstruct_grouplike_representation(&f, &sys).unwrap();
            for (x, y) in rec.pi().iter().zip(planted.pi()) {
                assert!(x.dist(y) <= 1e-8);
            }
        }
    }

    #[test]
    fn reconstruction_preconditions() {
        let rep = clock_and_shift(2, &tol()).unwrap();
        let sys = rep.system().clone();
        let raw = generate_grouplike_frame(&rep, &random_op(1, 2, 1), &random_op(1, 2, 2), tol()).unwrap();
        assert_eq!(
            reconstruct_grouplike_representation(&raw, &sys),
            Err(OvfError::PreconditionFailed(Precondition::NotParseval))
        );
        // four blocks of size 1 on C^2: θ_A has rank 2 < 4
        let f = parseval_generated(&rep, 1, 3);
        assert!(f.classify().is_parseval);
        assert_eq!(
            reconstruct_grouplike_representation(&f, &sys),
            Err(OvfError::PreconditionFailed(Precondition::AnalysisNotSurjective))
        );
    }

    #[test]
    fn twisted_conditions() {
        let rep = clock_and_shift(3, &tol()).unwrap();
        let f = generate_grouplike_frame(&rep, &random_op(1, 3, 4), &random_op(1, 3, 5), tol()).unwrap();
        for side in [Side::Left, Side::Right] {
            assert!(twisted_grouplike_conditions(&f, rep.system(), side).unwrap().passed);
        }
    }
}
