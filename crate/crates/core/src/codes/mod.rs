//! Circuit constructors for every code family, in CNOT and CNOT+SWAP form.
//!
//! Constructors start from a [`CnotSchedule`]: a list of time steps, each a set
//! of `(control role, target role)` CNOTs written against the *roles* of the
//! qubits. [`CnotSchedule::realize`] turns it into a physical circuit. In the
//! CNOT+SWAP variant every gate exchanges the two roles, so later gates of the
//! same role act at the role's new position.

mod chain;
mod color;
mod cut;
mod surface;

use serde::{Deserialize, Serialize};

use crate::circuit::{Basis, Circuit, GateKind, GateOp, Role, RoleKind};
use crate::error::{Error, Result};

pub use chain::{build_cat4, build_parity_chain, CAT4_QUBITS};
pub use color::{
    build_color7, build_color7_ft, color7_face_orders, color7_ft_cut_path, Color7Ft, COLOR7_FACES,
    COLOR7_FT_ANCILLAS, COLOR7_LETTERS,
};
pub use cut::synthesize_cut;
pub use surface::{
    build_rotated_d3, build_surface_standard, rotated_d3_checks, rotated_round, standard_checks,
    Check, ROTATED_ANCILLAS, ROTATED_CUT_PATH, ROTATED_SCHEDULE, ROTATED_X_SYNDROMES,
    ROTATED_Z_SYNDROMES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Cnot,
    #[serde(rename = "cnotswap")]
    CnotSwap,
}

impl Variant {
    fn gate(self) -> GateKind {
        match self {
            Variant::Cnot => GateKind::Cnot,
            Variant::CnotSwap => GateKind::CnotSwap,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundParity {
    Odd,
    Even,
}

impl RoundParity {
    /// Parity of round `r`, counting from 0.
    pub fn of_round(r: usize) -> Self {
        if r % 2 == 1 {
            RoundParity::Odd
        } else {
            RoundParity::Even
        }
    }

    pub fn other(self) -> Self {
        match self {
            RoundParity::Odd => RoundParity::Even,
            RoundParity::Even => RoundParity::Odd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeFamily {
    ParityChainZ,
    ParityChainX,
    Color7,
    #[serde(rename = "color7-ft")]
    Color7Ft,
    SurfaceStandard,
    SurfaceRotated,
}

/// A supported code/circuit combination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub family: CodeFamily,
    pub distance: usize,
    pub variant: Variant,
    pub cut: bool,
}

impl CodeSpec {
    pub fn new(family: CodeFamily, distance: usize, variant: Variant, cut: bool) -> Result<Self> {
        let spec = Self {
            family,
            distance,
            variant,
            cut,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The rotated distance-3 code used by the memory experiments.
    pub fn rotated_d3(cut: bool) -> Self {
        Self {
            family: CodeFamily::SurfaceRotated,
            distance: 3,
            variant: Variant::CnotSwap,
            cut,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Unsupported(format!("{self:?}: {msg}")));
        match self.family {
            CodeFamily::SurfaceRotated if self.distance != 3 => bad("rotated code needs d = 3"),
            CodeFamily::SurfaceRotated if self.cut && self.variant != Variant::CnotSwap => {
                bad("the cut relay is built from CNOT+SWAP gates")
            }
            CodeFamily::Color7Ft if self.variant != Variant::CnotSwap => {
                bad("fault-tolerant color code needs the cnotswap variant")
            }
            CodeFamily::SurfaceStandard if ![3, 5, 7].contains(&self.distance) => {
                bad("standard surface code needs d in {3, 5, 7}")
            }
            CodeFamily::SurfaceStandard | CodeFamily::Color7 if self.cut => {
                bad("no cut is defined for this family")
            }
            CodeFamily::ParityChainZ | CodeFamily::ParityChainX if self.distance < 2 => {
                bad("parity chains need at least two data qubits (distance field)")
            }
            _ => Ok(()),
        }
    }

    /// Gate-only circuit for this spec (Z-check where the family has both).
    pub fn build(&self) -> Result<Circuit> {
        self.validate()?;
        match self.family {
            CodeFamily::ParityChainZ => build_parity_chain(self.distance, Basis::Z),
            CodeFamily::ParityChainX => build_parity_chain(self.distance, Basis::X),
            CodeFamily::Color7 => Ok(build_color7(self.variant, Basis::Z)),
            CodeFamily::Color7Ft => Ok(build_color7_ft(self.cut).circuit),
            CodeFamily::SurfaceStandard => build_surface_standard(self.distance, self.variant),
            CodeFamily::SurfaceRotated => Ok(build_rotated_d3(RoundParity::Even, self.cut)),
        }
    }
}

/// CNOTs written against roles, one inner list per time step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnotSchedule {
    pub kinds: Vec<RoleKind>,
    pub steps: Vec<Vec<(usize, usize)>>,
}

impl CnotSchedule {
    pub fn num_qubits(&self) -> usize {
        self.kinds.len()
    }

    /// Roles labelled by their home qubit.
    pub fn home_roles(&self) -> Vec<Role> {
        self.kinds
            .iter()
            .enumerate()
            .map(|(q, &kind)| Role { kind, label: q })
            .collect()
    }

    /// Physical circuit starting from `start` roles (role `r` sits wherever
    /// `start` puts label `r`).
    pub fn realize_from(&self, variant: Variant, start: Vec<Role>) -> Result<Circuit> {
        let n = self.num_qubits();
        let mut pos = vec![usize::MAX; n];
        for (q, r) in start.iter().enumerate() {
            pos[r.label] = q;
        }
        if pos.contains(&usize::MAX) {
            return Err(Error::InvalidArgument(
                "start roles are not a permutation".into(),
            ));
        }
        let mut c = Circuit::with_roles(n, start)?;
        for step in &self.steps {
            let mut ops = Vec::with_capacity(step.len());
            for &(ctrl, tgt) in step {
                let (pc, pt) = (pos[ctrl], pos[tgt]);
                ops.push(GateOp::pair(variant.gate(), pc, pt));
                if variant == Variant::CnotSwap {
                    pos.swap(ctrl, tgt);
                }
            }
            c.push_ops(ops)?;
        }
        Ok(c)
    }

    pub fn realize(&self, variant: Variant) -> Circuit {
        self.realize_from(variant, self.home_roles())
            .expect("schedules use disjoint roles per step")
    }
}

/// Moments in reverse order with every two-qubit gate's direction reversed.
/// For CNOT+SWAP circuits this is the exact inverse, and role bookkeeping
/// starts from the original circuit's final roles.
pub fn reverse_schedule(c: &Circuit) -> Result<Circuit> {
    if let Some(op) = c.ops().find(|op| !op.kind().is_unitary()) {
        return Err(Error::InvalidArgument(format!(
            "cannot reverse a circuit containing {op:?}"
        )));
    }
    let mut out = Circuit::with_roles(c.num_qubits(), c.final_roles())?;
    for m in c.moments().iter().rev() {
        out.push_ops(m.ops().iter().rev().map(|op| op.flipped()).collect())?;
    }
    copy_metadata(c, &mut out);
    Ok(out)
}

/// Same moments with control and target of every two-qubit gate exchanged.
pub fn flip_directions(c: &Circuit) -> Circuit {
    let mut out =
        Circuit::with_roles(c.num_qubits(), c.initial_roles().to_vec()).expect("same qubit count");
    for m in c.moments() {
        out.push_ops(m.ops().iter().map(|op| op.flipped()).collect())
            .expect("flipping keeps supports");
    }
    copy_metadata(c, &mut out);
    out
}

pub(crate) fn copy_metadata(from: &Circuit, to: &mut Circuit) {
    if let (Some(x), Some(z)) = (from.logical_x(), from.logical_z()) {
        to.set_logicals(x.clone(), z.clone()).expect("same size");
    }
    if let Some(p) = from.positions() {
        to.set_positions(p.to_vec()).expect("same size");
    }
}

/// Wraps a gate-only circuit into a full measurement round: a preparation
/// moment resetting every syndrome (Z-checks to `|0⟩`, X-checks to `|+⟩`),
/// the gates, a Hadamard moment on the X-check syndromes and a final
/// measurement moment. `ancilla_reset_at` puts ancilla resets into that gate
/// moment instead of the preparation moment.
pub fn wrap_round(
    gates: &Circuit,
    x_labels: &[usize],
    ancilla_reset_at: Option<usize>,
) -> Result<Circuit> {
    let n = gates.num_qubits();
    let start = gates.initial_roles();
    let end = gates.final_roles();
    let mut out = Circuit::with_roles(n, start.to_vec())?;
    let mut prep = Vec::new();
    let mut ancilla_resets = Vec::new();
    for (q, r) in start.iter().enumerate() {
        match r.kind {
            RoleKind::Syndrome if x_labels.contains(&r.label) => {
                prep.push(GateOp::single(GateKind::ResetX, q))
            }
            RoleKind::Syndrome => prep.push(GateOp::single(GateKind::ResetZ, q)),
            RoleKind::Ancilla => ancilla_resets.push(GateOp::single(GateKind::ResetZ, q)),
            RoleKind::Data => {}
        }
    }
    if ancilla_reset_at.is_none() {
        prep.append(&mut ancilla_resets);
    }
    out.push_ops(prep)?;
    for (k, m) in gates.moments().iter().enumerate() {
        let mut ops = m.ops().to_vec();
        if ancilla_reset_at == Some(k) {
            ops.append(&mut ancilla_resets);
        }
        out.push_ops(ops)?;
    }
    if !ancilla_resets.is_empty() {
        return Err(Error::InvalidArgument(
            "ancilla reset moment out of range".into(),
        ));
    }
    let mut had = Vec::new();
    let mut meas = Vec::new();
    for (q, r) in end.iter().enumerate() {
        if r.kind == RoleKind::Syndrome {
            if x_labels.contains(&r.label) {
                had.push(GateOp::h(q));
            }
            meas.push(GateOp::single(GateKind::MeasZ, q));
        }
    }
    out.push_ops(had)?;
    out.push_ops(meas)?;
    copy_metadata(gates, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> CnotSchedule {
        CnotSchedule {
            kinds: vec![RoleKind::Data, RoleKind::Data, RoleKind::Syndrome],
            steps: vec![vec![(0, 2)], vec![(1, 2)]],
        }
    }

    #[test]
    fn realize_moves_roles() {
        let c = toy().realize(Variant::CnotSwap);
        let ops: Vec<_> = c.ops().map(|op| op.qubits().to_vec()).collect();
        assert_eq!(ops, vec![vec![0, 2], vec![1, 0]]);
        assert_eq!(c.final_positions(), vec![2, 0, 1]);
        let plain = toy().realize(Variant::Cnot);
        let ops: Vec<_> = plain.ops().map(|op| op.qubits().to_vec()).collect();
        assert_eq!(ops, vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn reverse_is_involution() {
        let c = toy().realize(Variant::CnotSwap);
        let r = reverse_schedule(&c).unwrap();
        assert_eq!(r.initial_roles(), c.final_roles().as_slice());
        assert_eq!(r.final_roles(), c.initial_roles());
        assert_eq!(reverse_schedule(&r).unwrap(), c);
    }

    #[test]
    fn reverse_rejects_measurements() {
        let c = toy().realize(Variant::CnotSwap);
        let round = wrap_round(&c, &[], None).unwrap();
        assert!(reverse_schedule(&round).is_err());
    }

    #[test]
    fn wrap_round_places_resets_and_measurements() {
        let c = toy().realize(Variant::CnotSwap);
        let round = wrap_round(&c, &[2], None).unwrap();
        let kinds: Vec<_> = round.ops().map(|op| (op.kind(), op.qubits()[0])).collect();
        assert_eq!(kinds[0], (GateKind::ResetX, 2));
        assert_eq!(kinds[kinds.len() - 2], (GateKind::H, 1));
        assert_eq!(kinds[kinds.len() - 1], (GateKind::MeasZ, 1));
    }

    #[test]
    fn spec_validation() {
        assert!(CodeSpec::new(CodeFamily::SurfaceRotated, 5, Variant::CnotSwap, false).is_err());
        assert!(CodeSpec::new(CodeFamily::Color7Ft, 3, Variant::Cnot, false).is_err());
        assert!(CodeSpec::new(CodeFamily::SurfaceStandard, 9, Variant::Cnot, false).is_err());
        assert!(CodeSpec::new(CodeFamily::SurfaceStandard, 5, Variant::CnotSwap, false).is_ok());
        assert!(CodeSpec::rotated_d3(true).build().is_ok());
    }
}
