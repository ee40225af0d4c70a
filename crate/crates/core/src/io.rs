//! JSON file formats. Complex entries are `[re, im]` pairs and operators
//! are arrays of rows.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{OvfError, Result};
use crate::frame::WeakOvf;
use crate::group::FiniteGroup;
use crate::grouplike::GroupLikeSystem;
use crate::numkernel::{Op, Tolerance, C64};

pub const FRAME_VERSION: &str = "ovf-frame/1";
pub const WITNESS_VERSION: &str = "ovf-witness/1";
pub const REPRESENTATION_VERSION: &str = "ovf-representation/1";

/// Environment variable overriding `residual_eps`.
pub const TOLERANCE_ENV: &str = "OVF_TOLERANCE";

pub type Rows = Vec<Vec<[f64; 2]>>;

pub fn op_to_rows(op: &Op) -> Rows {
    (0..op.rows())
        .map(|i| {
            (0..op.cols())
                .map(|j| {
                    let z = op.get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect()
}

pub fn rows_to_op(rows: &Rows, what: &str) -> Result<Op> {
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(OvfError::ShapeMismatch(format!("{what} has ragged rows")));
    }
    let entries = rows
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    Op::new(rows.len(), cols, entries)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupBlock {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl GroupBlock {
    pub fn from_group(g: &FiniteGroup) -> Self {
        Self {
            order: g.order(),
            mul: g.table().to_vec(),
            names: g.names().map(<[String]>::to_vec),
        }
    }

    pub fn to_group(&self) -> Result<FiniteGroup> {
        if self.mul.len() != self.order {
            return Err(OvfError::InvalidGroup(format!(
                "order {} but {} table rows",
                self.order,
                self.mul.len()
            )));
        }
        FiniteGroup::with_names(self.mul.clone(), self.names.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupLikeBlock {
    pub size: usize,
    pub phase_order: u64,
    /// `[k, index]`: the product is `e^{2πik/m}` times element `index`.
    pub mul: Vec<Vec<(u64, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

impl GroupLikeBlock {
    pub fn from_system(s: &GroupLikeSystem) -> Self {
        Self {
            size: s.size(),
            phase_order: s.phase_order(),
            mul: s.table().to_vec(),
            names: s.names().map(<[String]>::to_vec),
        }
    }

    pub fn to_system(&self) -> Result<GroupLikeSystem> {
        if self.mul.len() != self.size {
            return Err(OvfError::InvalidSystem(format!(
                "size {} but {} table rows",
                self.size,
                self.mul.len()
            )));
        }
        GroupLikeSystem::with_names(self.phase_order, self.mul.clone(), self.names.clone())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ToleranceOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invert_eps: Option<f64>,
}

/// Defaults, then the file, then `OVF_TOLERANCE`, then an explicit flag.
pub fn resolve_tolerance(
    file: Option<&ToleranceOverride>,
    env: Option<&str>,
    flag: Option<f64>,
) -> Result<Tolerance> {
    let base = Tolerance::default();
    let mut residual = file.and_then(|t| t.residual_eps).unwrap_or(base.residual_eps());
    let invert = file.and_then(|t| t.invert_eps).unwrap_or(base.invert_eps());
    if let Some(raw) = env {
        residual = raw.trim().parse().map_err(|_| {
            OvfError::InvalidTolerance(format!("{TOLERANCE_ENV}={raw:?} is not a number"))
        })?;
    }
    if let Some(x) = flag {
        residual = x;
    }
    Tolerance::new(residual, invert)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFile {
    pub version: String,
    pub d: usize,
    pub d0: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Rows>,
    #[serde(rename = "Psi")]
    pub psi: Vec<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grouplike: Option<GroupLikeBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceOverride>,
}

impl FrameFile {
    pub fn from_frame(f: &WeakOvf) -> Self {
        Self {
            version: FRAME_VERSION.into(),
            d: f.d(),
            d0: f.d0(),
            n: f.len(),
            a: f.a().iter().map(op_to_rows).collect(),
            psi: f.psi().iter().map(op_to_rows).collect(),
            group: None,
            grouplike: None,
            tolerance: None,
        }
    }

    pub fn with_group(mut self, g: &FiniteGroup) -> Self {
        self.group = Some(GroupBlock::from_group(g));
        self
    }

    pub fn with_grouplike(mut self, s: &GroupLikeSystem) -> Self {
        self.grouplike = Some(GroupLikeBlock::from_system(s));
        self
    }

    fn family(&self, rows: &[Rows], name: &str) -> Result<Vec<Op>> {
        if rows.len() != self.n {
            return Err(OvfError::ShapeMismatch(format!(
                "{name} has {} operators, expected {}",
                rows.len(),
                self.n
            )));
        }
        rows.iter()
            .enumerate()
            .map(|(k, r)| {
                let op = rows_to_op(r, &format!("{name}[{k}]"))?;
                if op.shape() != (self.d0, self.d) {
                    return Err(OvfError::ShapeMismatch(format!(
                        "{name}[{k}] is {}x{}, expected {}x{}",
                        op.rows(),
                        op.cols(),
                        self.d0,
                        self.d
                    )));
                }
                Ok(op)
            })
            .collect()
    }

    /// Rebuilds the frame, checking the declared dimensions.
    pub fn to_frame(&self, tol: Tolerance) -> Result<WeakOvf> {
        if self.version != FRAME_VERSION {
            return Err(OvfError::ShapeMismatch(format!(
                "unsupported version {:?}",
                self.version
            )));
        }
        let a = self.family(&self.a, "A")?;
        let psi = self.family(&self.psi, "Psi")?;
        WeakOvf::new(a, psi, tol)
    }

    pub fn tolerance(&self, env: Option<&str>, flag: Option<f64>) -> Result<Tolerance> {
        resolve_tolerance(self.tolerance.as_ref(), env, flag)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("frame files always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| OvfError::ShapeMismatch(format!("malformed frame file: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }

    /// True when every entry matches bit for bit.
    pub fn bit_identical(&self, other: &FrameFile) -> bool {
        let bits = |fam: &[Rows]| -> Vec<u64> {
            fam.iter()
                .flatten()
                .flatten()
                .flat_map(|p| [p[0].to_bits(), p[1].to_bits()])
                .collect()
        };
        (self.d, self.d0, self.n) == (other.d, other.d0, other.n)
            && bits(&self.a) == bits(&other.a)
            && bits(&self.psi) == bits(&other.psi)
            && self.group == other.group
            && self.grouplike == other.grouplike
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| OvfError::ShapeMismatch(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| OvfError::ShapeMismatch(format!("cannot write {}: {e}", path.display())))
}

/// Similarity witness `R_AB`, `R_ΨΦ` between two frames.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub version: String,
    pub r_ab: Rows,
    pub r_psi_phi: Rows,
    pub residual: f64,
    pub idempotent_residual: f64,
}

/// A reconstructed representation, one unitary per index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationFile {
    pub version: String,
    pub kind: String,
    pub dim: usize,
    pub pi: Vec<Rows>,
}
