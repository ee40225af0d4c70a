//! Finite groups, their unitary representations, and the frames they
//! generate: `A_g = A π_{g⁻¹}`, `Ψ_g = Ψ π_{g⁻¹}`.
//!
//! Element 0 is always the identity; a table whose identity sits elsewhere
//! is relabelled on construction (identity first, the rest in table order),
//! and frame index `k` is element `k`.

use crate::error::{OvfError, Precondition, Result};
use crate::frame::{embedding, WeakOvf};
use crate::numkernel::{Op, Tolerance, ONE, ZERO};
use crate::dilation::{parsevalize, Side};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    names: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validates a Cayley table (`mul[a][b]` is the index of `ab`).
    pub fn new(mul: Vec<Vec<usize>>) -> Result<Self> {
        Self::with_names(mul, None)
    }

    pub fn with_names(mul: Vec<Vec<usize>>, names: Option<Vec<String>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(OvfError::InvalidGroup("empty table".into()));
        }
        if let Some(names) = &names {
            if names.len() != n {
                return Err(OvfError::InvalidGroup(format!(
                    "{} names for {n} elements",
                    names.len()
                )));
            }
        }
        for (a, row) in mul.iter().enumerate() {
            if row.len() != n {
                return Err(OvfError::InvalidGroup(format!("row {a} has {} entries", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(OvfError::InvalidGroup(format!("entry {bad} out of range")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mul[e][g] == g && mul[g][e] == g))
            .ok_or_else(|| OvfError::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(OvfError::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| mul[a][b] == identity)
                .ok_or_else(|| OvfError::InvalidGroup(format!("element {a} has no inverse")))?;
            if mul[b][a] != identity {
                return Err(OvfError::InvalidGroup(format!("inverse of {a} is one-sided")));
            }
            inv[a] = b;
        }
        if identity == 0 {
            return Ok(Self { mul, inv, names });
        }
        // old index -> new index, identity first
        let order: Vec<usize> = std::iter::once(identity)
            .chain((0..n).filter(|&g| g != identity))
            .collect();
        let mut relabel = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            relabel[old] = new;
        }
        let mul = order
            .iter()
            .map(|&a| order.iter().map(|&b| relabel[mul[a][b]]).collect())
            .collect();
        let inv = order.iter().map(|&a| relabel[inv[a]]).collect();
        let names = names.map(|ns| order.iter().map(|&i| ns[i].clone()).collect());
        Ok(Self { mul, inv, names })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z_n` with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group needs positive order");
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(mul).expect("cyclic table is a group")
    }

    /// Dihedral group of order `2n`; element `k + n·j` is `r^k s^j` with
    /// `s r s = r⁻¹`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0, "dihedral group needs n > 0");
        let split = |x: usize| (x % n, x / n);
        let mul = (0..2 * n)
            .map(|x| {
                (0..2 * n)
                    .map(|y| {
                        let (k1, j1) = split(x);
                        let (k2, j2) = split(y);
                        // r^k1 s^j1 r^k2 s^j2 = r^(k1 ± k2) s^(j1 + j2)
                        let k = if j1 == 0 { k1 + k2 } else { k1 + n - k2 };
                        k % n + n * ((j1 + j2) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::new(mul).expect("dihedral table is a group")
    }

    /// `G × H` with element `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let m = h.order();
        let n = g.order() * m;
        let mul = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| g.mul(x / m, y / m) * m + h.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        Self::new(mul).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }
}

/// A unitary representation `g ↦ π_g` on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    group: FiniteGroup,
    pi: Vec<Op>,
}

impl Representation {
    pub fn new(group: FiniteGroup, pi: Vec<Op>, tol: &Tolerance) -> Result<Self> {
        if pi.len() != group.order() {
            return Err(OvfError::InvalidRepresentation(format!(
                "{} operators for a group of order {}",
                pi.len(),
                group.order()
            )));
        }
        let d = pi[0].rows();
        if let Some(g) = pi.iter().position(|p| p.shape() != (d, d)) {
            return Err(OvfError::InvalidRepresentation(format!("pi_{g} is not {d}x{d}")));
        }
        if let Some(g) = pi.iter().position(|p| !p.is_unitary(tol)) {
            return Err(OvfError::InvalidRepresentation(format!("pi_{g} is not unitary")));
        }
        let rep = Self { group, pi };
        let (residual, worst) = rep.homomorphism_residual();
        if residual > tol.residual_eps() {
            return Err(OvfError::InvalidRepresentation(format!(
                "pi_g pi_h != pi_gh at {worst:?} (residual {residual:e})"
            )));
        }
        Ok(rep)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn pi(&self) -> &[Op] {
        &self.pi
    }

    pub fn dim(&self) -> usize {
        self.pi[0].rows()
    }

    /// `max ‖π_g π_h − π_{gh}‖` and the pair attaining it.
    pub fn homomorphism_residual(&self) -> (f64, (usize, usize)) {
        let n = self.group.order();
        let mut worst = (0.0, (0, 0));
        for g in 0..n {
            for h in 0..n {
                let r = (&self.pi[g] * &self.pi[h]).dist(&self.pi[self.group.mul(g, h)]);
                if r > worst.0 {
                    worst = (r, (g, h));
                }
            }
        }
        worst
    }

    /// `g ↦ π_g ⊗ I_copies`.
    pub fn amplify(&self, copies: usize) -> Self {
        let id = Op::identity(copies);
        Self {
            group: self.group.clone(),
            pi: self.pi.iter().map(|p| p.kron(&id)).collect(),
        }
    }

    /// `g ↦ W π_g W*` for a unitary `W`.
    pub fn conjugate(&self, w: &Op) -> Self {
        let w_adj = w.adjoint();
        Self {
            group: self.group.clone(),
            pi: self.pi.iter().map(|p| &(w * p) * &w_adj).collect(),
        }
    }
}

fn permutation(n: usize, target: impl Fn(usize) -> usize) -> Op {
    // column q carries a single one at row target(q)
    let mut m = Op::zeros(n, n);
    for q in 0..n {
        m.set(target(q), q, ONE);
    }
    debug_assert!(m.entries_row_major().iter().all(|z| *z == ONE || *z == ZERO));
    m
}

/// `λ_g χ_q = χ_{gq}`.
pub fn left_regular(group: &FiniteGroup) -> Representation {
    let n = group.order();
    let pi = (0..n).map(|g| permutation(n, |q| group.mul(g, q))).collect();
    Representation {
        group: group.clone(),
        pi,
    }
}

/// `ρ_g χ_q = χ_{q g⁻¹}`.
pub fn right_regular(group: &FiniteGroup) -> Representation {
    let n = group.order();
    let pi = (0..n)
        .map(|g| permutation(n, |q| group.mul(q, group.inv(g))))
        .collect();
    Representation {
        group: group.clone(),
        pi,
    }
}

/// `({A π_{g⁻¹}}, {Ψ π_{g⁻¹}})` indexed by group element.
pub fn generate_frame(rep: &Representation, a: &Op, psi: &Op, tol: Tolerance) -> Result<WeakOvf> {
    let d = rep.dim();
    if a.cols() != d || psi.shape() != a.shape() {
        return Err(OvfError::ShapeMismatch(format!(
            "generators must be d0x{d} with equal shapes"
        )));
    }
    let group = rep.group();
    let inverse = |g: usize| &rep.pi()[group.inv(g)];
    let frame_a = (0..group.order()).map(|g| a * inverse(g)).collect();
    let frame_psi = (0..group.order()).map(|g| psi * inverse(g)).collect();
    WeakOvf::new(frame_a, frame_psi, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftReport {
    pub passed: bool,
    pub max_residual: f64,
    /// `(g, p, q)` attaining the largest residual.
    pub worst: Option<(usize, usize, usize)>,
}

fn require_len(f: &WeakOvf, n: usize) -> Result<()> {
    if f.len() != n {
        return Err(OvfError::PreconditionFailed(Precondition::OrderMismatch));
    }
    Ok(())
}

/// Checks `A_{gp}A_{gq}* = A_pA_q*`, `A_{gp}Ψ_{gq}* = A_pΨ_q*` and
/// `Ψ_{gp}Ψ_{gq}* = Ψ_pΨ_q*` over all triples.
pub fn check_shift_conditions(f: &WeakOvf, group: &FiniteGroup) -> Result<ShiftReport> {
    require_len(f, group.order())?;
    let n = group.order();
    let (a, psi) = (f.a(), f.psi());
    let mut max_residual = 0.0;
    let mut worst = None;
    for g in 0..n {
        for p in 0..n {
            for q in 0..n {
                let (gp, gq) = (group.mul(g, p), group.mul(g, q));
                let r = [(a, a), (a, psi), (psi, psi)]
                    .iter()
                    .map(|(x, y)| {
                        (&x[gp] * &y[gq].adjoint()).dist(&(&x[p] * &y[q].adjoint()))
                    })
                    .fold(0.0, f64::max);
                if r > max_residual {
                    max_residual = r;
                    worst = Some((g, p, q));
                }
            }
        }
    }
    Ok(ShiftReport {
        passed: max_residual <= f.tol().loose(),
        max_residual,
        worst,
    })
}

/// `λ_g ⊗ I_{d0}` acting on `ℓ²(G) ⊗ 𝓗₀`.
pub fn amplified_shift(lambda: &Op, d0: usize) -> Op {
    lambda.kron(&Op::identity(d0))
}

/// `π_g = θ_Ψ* (λ_g ⊗ I) θ_A` for a Parseval frame satisfying the shift
/// conditions.
pub fn reconstruct_representation(f: &WeakOvf, group: &FiniteGroup) -> Result<Representation> {
    require_len(f, group.order())?;
    if !f.classify().is_parseval {
        return Err(OvfError::PreconditionFailed(Precondition::NotParseval));
    }
    if !check_shift_conditions(f, group)?.passed {
        return Err(OvfError::PreconditionFailed(Precondition::ShiftConditionsFail));
    }
    let theta_a = f.theta_a();
    let theta_psi_adj = f.theta_psi().adjoint();
    let lambda = left_regular(group);
    let pi = lambda
        .pi()
        .iter()
        .map(|l| &(&theta_psi_adj * &amplified_shift(l, f.d0())) * &theta_a)
        .collect();
    Representation::new(group.clone(), pi, &loosened(f.tol()))
}

pub(crate) fn loosened(tol: &Tolerance) -> Tolerance {
    Tolerance::new(tol.loose(), tol.invert_eps()).expect("scaled tolerance stays valid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommutationReport {
    /// `max_g ‖θ_A π_g − (λ_g ⊗ I) θ_A‖`
    pub theta_a: f64,
    /// `max_g ‖θ_Ψ π_g − (λ_g ⊗ I) θ_Ψ‖`
    pub theta_psi: f64,
    /// `max_g ‖S π_g − π_g S‖`
    pub frame_operator: f64,
    /// Largest of the three residuals for each element.
    pub per_element: Vec<f64>,
    /// `(g, block)` of the largest block-level analysis residual.
    pub worst_block: Option<(usize, usize)>,
}

impl CommutationReport {
    pub fn max(&self) -> f64 {
        self.theta_a.max(self.theta_psi).max(self.frame_operator)
    }
}

pub fn check_commutation(f: &WeakOvf, rep: &Representation) -> Result<CommutationReport> {
    let group = rep.group();
    require_len(f, group.order())?;
    if rep.dim() != f.d() {
        return Err(OvfError::ShapeMismatch("representation acts on the wrong space".into()));
    }
    let lambda = left_regular(group);
    let theta_a = f.theta_a();
    let theta_psi = f.theta_psi();
    let s = f.frame_operator();
    let d0 = f.d0();
    let mut report = CommutationReport {
        theta_a: 0.0,
        theta_psi: 0.0,
        frame_operator: 0.0,
        per_element: Vec::with_capacity(group.order()),
        worst_block: None,
    };
    let mut worst_block_value = 0.0;
    for (g, (pi_g, lambda_g)) in rep.pi().iter().zip(lambda.pi()).enumerate() {
        let shift = amplified_shift(lambda_g, d0);
        let diff_a = &(&theta_a * pi_g) - &(&shift * &theta_a);
        let diff_psi = &(&theta_psi * pi_g) - &(&shift * &theta_psi);
        let ra = diff_a.spectral_norm();
        let rp = diff_psi.spectral_norm();
        let rs = (&s * pi_g).dist(&(pi_g * &s));
        for block in 0..group.order() {
            let l = embedding(block, group.order(), d0)?.adjoint();
            let r = (&l * &diff_a).spectral_norm().max((&l * &diff_psi).spectral_norm());
            if r > worst_block_value {
                worst_block_value = r;
                report.worst_block = Some((g, block));
            }
        }
        report.theta_a = report.theta_a.max(ra);
        report.theta_psi = report.theta_psi.max(rp);
        report.frame_operator = report.frame_operator.max(rs);
        report.per_element.push(ra.max(rp).max(rs));
    }
    Ok(report)
}

/// Shift conditions for the one-sided parsevalization of `f`.
pub fn twisted_shift_conditions(f: &WeakOvf, group: &FiniteGroup, side: Side) -> Result<ShiftReport> {
    check_shift_conditions(&parsevalize(f, side)?, group)
}
