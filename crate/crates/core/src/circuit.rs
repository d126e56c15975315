//! Moment-based circuit representation with role bookkeeping.
//!
//! Two-qubit gates are written `(control, target)`. Every gate that ends in a
//! SWAP (`SWAP`, `CNOTSWAP`, `ISWAP`) also exchanges the *roles* of its qubits,
//! which is how syndrome duty migrates through the device.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    H,
    S,
    X,
    Y,
    Z,
    #[serde(rename = "CNOT")]
    Cnot,
    #[serde(rename = "SWAP")]
    Swap,
    #[serde(rename = "CNOTSWAP")]
    CnotSwap,
    #[serde(rename = "ISWAP")]
    ISwap,
    MeasZ,
    ResetZ,
    ResetX,
}

impl GateKind {
    pub const UNITARY: [GateKind; 9] = [
        GateKind::H,
        GateKind::S,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::Cnot,
        GateKind::Swap,
        GateKind::CnotSwap,
        GateKind::ISwap,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap | GateKind::CnotSwap | GateKind::ISwap => 2,
            _ => 1,
        }
    }

    pub fn is_unitary(self) -> bool {
        !matches!(self, GateKind::MeasZ | GateKind::ResetZ | GateKind::ResetX)
    }

    pub fn is_reset(self) -> bool {
        matches!(self, GateKind::ResetZ | GateKind::ResetX)
    }

    /// Gates whose action ends with the two qubits exchanged.
    pub fn swaps_roles(self) -> bool {
        matches!(self, GateKind::Swap | GateKind::CnotSwap | GateKind::ISwap)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
            GateKind::CnotSwap => "CNOTSWAP",
            GateKind::ISwap => "ISWAP",
            GateKind::MeasZ => "MeasZ",
            GateKind::ResetZ => "ResetZ",
            GateKind::ResetX => "ResetX",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            GateKind::H,
            GateKind::S,
            GateKind::X,
            GateKind::Y,
            GateKind::Z,
            GateKind::Cnot,
            GateKind::Swap,
            GateKind::CnotSwap,
            GateKind::ISwap,
            GateKind::MeasZ,
            GateKind::ResetZ,
            GateKind::ResetX,
        ];
        all.into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown gate `{s}`")))
    }
}

/// A single gate, reset or measurement. For two-qubit gates `qubits()[0]` is
/// the control.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GateOpDoc", into = "GateOpDoc")]
pub struct GateOp {
    kind: GateKind,
    q: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct GateOpDoc {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl TryFrom<GateOpDoc> for GateOp {
    type Error = Error;

    fn try_from(doc: GateOpDoc) -> Result<Self> {
        GateOp::new(doc.kind, &doc.qubits)
    }
}

impl From<GateOp> for GateOpDoc {
    fn from(op: GateOp) -> Self {
        GateOpDoc {
            kind: op.kind,
            qubits: op.qubits().to_vec(),
        }
    }
}

impl GateOp {
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self> {
        if qubits.len() != kind.arity() {
            return Err(Error::Arity {
                kind: kind.to_string(),
                expected: kind.arity(),
                found: qubits.len(),
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::CoincidentQubits {
                kind: kind.to_string(),
                qubit: qubits[0],
            });
        }
        let q = [qubits[0], *qubits.get(1).unwrap_or(&qubits[0])];
        Ok(Self { kind, q })
    }

    pub fn single(kind: GateKind, q: usize) -> Self {
        Self::new(kind, &[q]).expect("single-qubit gate kind")
    }

    pub fn pair(kind: GateKind, a: usize, b: usize) -> Self {
        Self::new(kind, &[a, b]).expect("distinct qubits for a two-qubit gate")
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }

    pub fn cnot(c: usize, t: usize) -> Self {
        Self::pair(GateKind::Cnot, c, t)
    }

    pub fn cnot_swap(c: usize, t: usize) -> Self {
        Self::pair(GateKind::CnotSwap, c, t)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.q[..self.kind.arity()]
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.arity() == 2
    }

    /// Same gate with control and target exchanged.
    pub fn flipped(&self) -> Self {
        if self.is_two_qubit() {
            Self {
                kind: self.kind,
                q: [self.q[1], self.q[0]],
            }
        } else {
            *self
        }
    }

    /// Relabels qubits through `map[old] = new`.
    pub fn remapped(&self, map: &[usize]) -> Self {
        Self {
            kind: self.kind,
            q: [map[self.q[0]], map[self.q[1]]],
        }
    }

    pub fn check_bounds(&self, n: usize) -> Result<()> {
        for &q in self.qubits() {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.kind, self.qubits())
    }
}

/// Gates executed simultaneously; supports are pairwise disjoint.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Moment {
    ops: Vec<GateOp>,
}

impl Moment {
    pub fn new(ops: Vec<GateOp>) -> Result<Self> {
        let mut m = Moment::default();
        for op in ops {
            m.push(op)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        for &q in op.qubits() {
            if self.touches(q) {
                return Err(Error::OverlappingMoment(q));
            }
        }
        self.ops.push(op);
        Ok(())
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn touches(&self, q: usize) -> bool {
        self.ops.iter().any(|op| op.qubits().contains(&q))
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.ops
            .iter()
            .flat_map(|op| op.qubits().to_vec())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleKind {
    Data,
    Syndrome,
    Ancilla,
}

/// What a physical qubit currently holds: the kind of duty plus the index of
/// the qubit that held it before the first moment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Role {
    pub kind: RoleKind,
    pub label: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitDoc", into = "CircuitDoc")]
pub struct Circuit {
    n: usize,
    moments: Vec<Moment>,
    initial_roles: Vec<Role>,
    logical_x: Option<PauliString>,
    logical_z: Option<PauliString>,
    positions: Option<Vec<[f64; 2]>>,
}

/// JSON document form. `roles[k]` lists the role of every qubit before moment
/// `k` (so it has one more entry than `moments`).
#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    n: usize,
    moments: Vec<Moment>,
    roles: Vec<Vec<Role>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    logical_x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    logical_z: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    positions: Option<Vec<[f64; 2]>>,
}

impl TryFrom<CircuitDoc> for Circuit {
    type Error = Error;

    fn try_from(doc: CircuitDoc) -> Result<Self> {
        let initial = doc
            .roles
            .first()
            .cloned()
            .unwrap_or_else(|| Circuit::default_roles(doc.n));
        let mut c = Circuit::with_roles(doc.n, initial)?;
        for m in doc.moments {
            c.push_moment(m)?;
        }
        if !doc.roles.is_empty() && doc.roles != c.role_history() {
            return Err(Error::Parse(
                "role history inconsistent with moments".into(),
            ));
        }
        let parse = |s: Option<String>| -> Result<Option<PauliString>> {
            s.map(|t| t.parse::<PauliString>()).transpose()
        };
        c.logical_x = parse(doc.logical_x)?;
        c.logical_z = parse(doc.logical_z)?;
        if let Some(p) = doc.positions {
            c.set_positions(p)?;
        }
        Ok(c)
    }
}

impl From<Circuit> for CircuitDoc {
    fn from(c: Circuit) -> Self {
        CircuitDoc {
            n: c.n,
            roles: c.role_history(),
            logical_x: c.logical_x.as_ref().map(|p| p.to_string()),
            logical_z: c.logical_z.as_ref().map(|p| p.to_string()),
            positions: c.positions.clone(),
            moments: c.moments,
        }
    }
}

impl Circuit {
    /// Empty circuit whose qubits are all data.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            moments: Vec::new(),
            initial_roles: Self::default_roles(n),
            logical_x: None,
            logical_z: None,
            positions: None,
        }
    }

    fn default_roles(n: usize) -> Vec<Role> {
        (0..n)
            .map(|q| Role {
                kind: RoleKind::Data,
                label: q,
            })
            .collect()
    }

    pub fn with_roles(n: usize, roles: Vec<Role>) -> Result<Self> {
        if roles.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: roles.len(),
            });
        }
        let mut c = Self::new(n);
        c.initial_roles = roles;
        Ok(c)
    }

    /// Roles from a kind per qubit, labelled by the qubit index.
    pub fn with_role_kinds(kinds: &[RoleKind]) -> Self {
        let roles = kinds
            .iter()
            .enumerate()
            .map(|(q, &kind)| Role { kind, label: q })
            .collect();
        Self::with_roles(kinds.len(), roles).expect("lengths agree")
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn moments(&self) -> &[Moment] {
        &self.moments
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn ops(&self) -> impl Iterator<Item = &GateOp> {
        self.moments.iter().flat_map(|m| m.ops().iter())
    }

    pub fn push_moment(&mut self, m: Moment) -> Result<()> {
        let mut seen = BTreeSet::new();
        for op in m.ops() {
            op.check_bounds(self.n)?;
            for &q in op.qubits() {
                if !seen.insert(q) {
                    return Err(Error::OverlappingMoment(q));
                }
            }
        }
        self.moments.push(m);
        Ok(())
    }

    /// Appends a moment built from `ops`, skipping the call when `ops` is empty.
    pub fn push_ops(&mut self, ops: Vec<GateOp>) -> Result<()> {
        if ops.is_empty() {
            return Ok(());
        }
        self.push_moment(Moment::new(ops)?)
    }

    /// Appends every moment of `other` (same qubit count).
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        for m in &other.moments {
            self.push_moment(m.clone())?;
        }
        Ok(())
    }

    pub fn initial_roles(&self) -> &[Role] {
        &self.initial_roles
    }

    pub fn set_initial_roles(&mut self, roles: Vec<Role>) -> Result<()> {
        if roles.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: roles.len(),
            });
        }
        self.initial_roles = roles;
        Ok(())
    }

    /// Role held by each qubit after moment `k - 1`, i.e. before moment `k`.
    pub fn roles_at(&self, k: usize) -> Vec<Role> {
        let mut roles = self.initial_roles.clone();
        for m in &self.moments[..k.min(self.moments.len())] {
            apply_role_moves(&mut roles, m);
        }
        roles
    }

    pub fn final_roles(&self) -> Vec<Role> {
        self.roles_at(self.moments.len())
    }

    /// Roles at every moment boundary, `len() + 1` entries.
    pub fn role_history(&self) -> Vec<Vec<Role>> {
        let mut out = Vec::with_capacity(self.moments.len() + 1);
        let mut roles = self.initial_roles.clone();
        out.push(roles.clone());
        for m in &self.moments {
            apply_role_moves(&mut roles, m);
            out.push(roles.clone());
        }
        out
    }

    /// Physical position of every role label after the last moment:
    /// `out[label] = qubit`.
    pub fn final_positions(&self) -> Vec<usize> {
        let roles = self.final_roles();
        let mut out = vec![0; self.n];
        for (q, r) in roles.iter().enumerate() {
            out[r.label] = q;
        }
        out
    }

    /// Qubits that hold a syndrome role at the start or at the end of the
    /// circuit, i.e. the qubits that are measured in some round.
    pub fn work_sharing_set(&self) -> BTreeSet<usize> {
        let syndromes = |roles: &[Role]| {
            roles
                .iter()
                .enumerate()
                .filter(|(_, r)| r.kind == RoleKind::Syndrome)
                .map(|(q, _)| q)
                .collect::<Vec<_>>()
        };
        let mut out: BTreeSet<usize> = syndromes(&self.initial_roles).into_iter().collect();
        out.extend(syndromes(&self.final_roles()));
        out
    }

    pub fn logical_x(&self) -> Option<&PauliString> {
        self.logical_x.as_ref()
    }

    pub fn logical_z(&self) -> Option<&PauliString> {
        self.logical_z.as_ref()
    }

    pub fn set_logicals(&mut self, x: PauliString, z: PauliString) -> Result<()> {
        for p in [&x, &z] {
            if p.num_qubits() != self.n {
                return Err(Error::SizeMismatch {
                    expected: self.n,
                    found: p.num_qubits(),
                });
            }
        }
        self.logical_x = Some(x);
        self.logical_z = Some(z);
        Ok(())
    }

    pub fn positions(&self) -> Option<&[[f64; 2]]> {
        self.positions.as_deref()
    }

    pub fn set_positions(&mut self, p: Vec<[f64; 2]>) -> Result<()> {
        if p.len() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.len(),
            });
        }
        self.positions = Some(p);
        Ok(())
    }

    /// Every unordered qubit pair that shares a two-qubit gate.
    pub fn connectivity(&self) -> BTreeSet<(usize, usize)> {
        self.ops()
            .filter(|op| op.is_two_qubit())
            .map(|op| {
                let q = op.qubits();
                (q[0].min(q[1]), q[0].max(q[1]))
            })
            .collect()
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.ops().filter(|op| op.kind() == kind).count()
    }

    /// Same circuit with each `CNOTSWAP` replaced by the dressed `ISWAP`
    /// sequence; single-qubit layers become extra moments around it.
    pub fn with_iswap_native(&self) -> Circuit {
        let mut out = self.clone();
        out.moments.clear();
        for m in &self.moments {
            let (cs, rest): (Vec<GateOp>, Vec<GateOp>) = m
                .ops()
                .iter()
                .partition(|op| op.kind() == GateKind::CnotSwap);
            if cs.is_empty() {
                out.moments.push(m.clone());
                continue;
            }
            let layers = dressed_iswap_layers(&cs);
            for (i, layer) in layers.into_iter().enumerate() {
                let mut ops = layer;
                if i == 2 {
                    ops.extend(rest.iter().copied());
                }
                out.moments
                    .push(Moment::new(ops).expect("disjoint by construction"));
            }
        }
        out
    }

    /// Checks moment disjointness and bounds; constructed circuits always pass.
    pub fn validate(&self) -> Result<()> {
        for m in &self.moments {
            let mut seen = BTreeSet::new();
            for op in m.ops() {
                op.check_bounds(self.n)?;
                for &q in op.qubits() {
                    if !seen.insert(q) {
                        return Err(Error::OverlappingMoment(q));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Five layers realizing each `CNOTSWAP(c, t)` with one `ISWAP`:
/// `H(t)`, `ISWAP(c, t)`, `S(c) S(t)`, `Z(c) Z(t)`, `H(c)`. Equal to the
/// original gate up to a global phase.
pub fn dressed_iswap_layers(cnot_swaps: &[GateOp]) -> Vec<Vec<GateOp>> {
    let mut layers = vec![Vec::new(); 5];
    for op in cnot_swaps {
        let (c, t) = (op.qubits()[0], op.qubits()[1]);
        layers[0].push(GateOp::h(t));
        layers[1].push(GateOp::pair(GateKind::ISwap, c, t));
        layers[2].push(GateOp::single(GateKind::S, c));
        layers[2].push(GateOp::single(GateKind::S, t));
        layers[3].push(GateOp::single(GateKind::Z, c));
        layers[3].push(GateOp::single(GateKind::Z, t));
        layers[4].push(GateOp::h(c));
    }
    layers
}

fn apply_role_moves(roles: &mut [Role], m: &Moment) {
    for op in m.ops() {
        if op.kind().swaps_roles() {
            let q = op.qubits();
            roles.swap(q[0], q[1]);
        }
    }
}

/// Random Clifford circuit of `depth` layers on `qubits`, used to prepare
/// random stabilizer inputs.
pub fn random_clifford(n: usize, qubits: &[usize], depth: usize, rng: &mut impl Rng) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..depth {
        let mut ops = Vec::new();
        for &q in qubits {
            match rng.gen_range(0..4) {
                0 => ops.push(GateOp::h(q)),
                1 => ops.push(GateOp::single(GateKind::S, q)),
                2 => ops.push(GateOp::single(GateKind::X, q)),
                _ => {}
            }
        }
        c.push_ops(ops).expect("single-qubit layer is disjoint");
        if qubits.len() >= 2 {
            let mut order = qubits.to_vec();
            for i in (1..order.len()).rev() {
                let j = rng.gen_range(0..=i);
                order.swap(i, j);
            }
            let ops = order
                .chunks_exact(2)
                .map(|p| GateOp::cnot(p[0], p[1]))
                .collect();
            c.push_ops(ops).expect("pairs are disjoint");
        }
    }
    c
}
