//! Pauli-frame propagation for circuits of up to 64 qubits.
//!
//! A frame records the Pauli error relative to the noiseless run; a Z-basis
//! measurement is flipped iff the frame has an X component on that qubit.

use rand::Rng;

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::noise::{noise_locations, sample_hits, NoiseLocation, NoiseModel, Timing};
use crate::pauli::{two_qubit_paulis, PauliString};

/// X and Z bit masks of a Pauli error, qubit `q` at bit `q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Frame {
    pub x: u64,
    pub z: u64,
}

impl Frame {
    pub fn from_pauli(p: &PauliString) -> Result<Self> {
        if p.num_qubits() > 64 {
            return Err(Error::TooManyQubits {
                n: p.num_qubits(),
                max: 64,
            });
        }
        Ok(Frame {
            x: p.x_words().first().copied().unwrap_or(0),
            z: p.z_words().first().copied().unwrap_or(0),
        })
    }

    pub fn to_pauli(self, n: usize) -> PauliString {
        let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        PauliString::from_masks(
            n,
            vec![self.x & mask],
            vec![self.z & mask],
            crate::pauli::Sign::Plus,
        )
        .expect("one word")
    }

    pub fn is_identity(self) -> bool {
        self.x == 0 && self.z == 0
    }

    fn swap_bits(v: &mut u64, a: usize, b: usize) {
        let d = ((*v >> a) ^ (*v >> b)) & 1;
        *v ^= (d << a) | (d << b);
    }

    fn bit(v: u64, q: usize) -> u64 {
        (v >> q) & 1
    }

    fn apply(&mut self, op: &FrameOp) {
        match *op {
            FrameOp::H(q) => {
                let d = (self.x ^ self.z) & (1 << q);
                self.x ^= d;
                self.z ^= d;
            }
            FrameOp::S(q) => self.z ^= self.x & (1 << q),
            FrameOp::Cnot(c, t) => self.cnot(c, t),
            FrameOp::Swap(a, b) => self.swap(a, b),
            FrameOp::CnotSwap(c, t) => {
                self.cnot(c, t);
                self.swap(c, t);
            }
            FrameOp::ISwap(a, b) => {
                self.swap(a, b);
                self.z ^= Self::bit(self.x, b) << a;
                self.z ^= Self::bit(self.x, a) << b;
                self.z ^= self.x & ((1 << a) | (1 << b));
            }
            FrameOp::Reset(q) => {
                self.x &= !(1 << q);
                self.z &= !(1 << q);
            }
            FrameOp::Meas(_) | FrameOp::Nop => {}
        }
    }

    fn cnot(&mut self, c: usize, t: usize) {
        self.x ^= Self::bit(self.x, c) << t;
        self.z ^= Self::bit(self.z, t) << c;
    }

    fn swap(&mut self, a: usize, b: usize) {
        Self::swap_bits(&mut self.x, a, b);
        Self::swap_bits(&mut self.z, a, b);
    }

    /// Applies a single-qubit Pauli (`code` 1 = X, 2 = Y, 3 = Z).
    pub fn apply_single(&mut self, q: usize, code: u8) {
        let (x, z) = [(0, 0), (1, 0), (1, 1), (0, 1)][code as usize & 3];
        self.x ^= x << q;
        self.z ^= z << q;
    }

    /// Applies the `k`-th of the 15 non-identity two-qubit Paulis.
    pub fn apply_pair(&mut self, a: usize, b: usize, k: usize) {
        let (pa, pb) = two_qubit_paulis()[k];
        for (q, p) in [(a, pa), (b, pb)] {
            let (x, z) = p.bits();
            self.x ^= (x as u64) << q;
            self.z ^= (z as u64) << q;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FrameOp {
    H(usize),
    S(usize),
    Cnot(usize, usize),
    Swap(usize, usize),
    CnotSwap(usize, usize),
    ISwap(usize, usize),
    Reset(usize),
    Meas(usize),
    Nop,
}

/// A noise location pinned to the flat operation list: applied just before
/// operation `at`.
#[derive(Clone, Debug)]
struct PinnedLocation {
    at: usize,
    qubits: [usize; 2],
    two: bool,
}

/// An error at noise location `loc`: Pauli index in `0..3` (X, Y, Z) for
/// single-qubit locations and in `0..15` for pair locations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fault {
    pub loc: usize,
    pub pauli: u8,
}

/// A circuit flattened for fast frame propagation with its noise locations.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    n: usize,
    ops: Vec<FrameOp>,
    locations: Vec<NoiseLocation>,
    pinned: Vec<PinnedLocation>,
    singles: Vec<usize>,
    pairs: Vec<usize>,
}

impl CompiledCircuit {
    pub fn compile(c: &Circuit) -> Result<Self> {
        let n = c.num_qubits();
        if n > 64 {
            return Err(Error::TooManyQubits { n, max: 64 });
        }
        let mut ops = Vec::new();
        let mut starts = Vec::with_capacity(c.len() + 1);
        for m in c.moments() {
            starts.push(ops.len());
            for op in m.ops() {
                let q = op.qubits();
                ops.push(match op.kind() {
                    GateKind::H => FrameOp::H(q[0]),
                    GateKind::S => FrameOp::S(q[0]),
                    GateKind::X | GateKind::Y | GateKind::Z => FrameOp::Nop,
                    GateKind::Cnot => FrameOp::Cnot(q[0], q[1]),
                    GateKind::Swap => FrameOp::Swap(q[0], q[1]),
                    GateKind::CnotSwap => FrameOp::CnotSwap(q[0], q[1]),
                    GateKind::ISwap => FrameOp::ISwap(q[0], q[1]),
                    GateKind::MeasZ => FrameOp::Meas(q[0]),
                    GateKind::ResetZ | GateKind::ResetX => FrameOp::Reset(q[0]),
                });
            }
        }
        starts.push(ops.len());
        let locations = noise_locations(c);
        let mut pinned = Vec::with_capacity(locations.len());
        let (mut singles, mut pairs) = (Vec::new(), Vec::new());
        for (i, loc) in locations.iter().enumerate() {
            let at = match loc.timing {
                Timing::Before => starts[loc.moment],
                Timing::After => starts[loc.moment + 1],
            };
            let two = loc.is_two_qubit();
            pinned.push(PinnedLocation {
                at,
                qubits: [
                    loc.qubits[0],
                    if two { loc.qubits[1] } else { loc.qubits[0] },
                ],
                two,
            });
            if two {
                pairs.push(i);
            } else {
                singles.push(i);
            }
        }
        Ok(CompiledCircuit {
            n,
            ops,
            locations,
            pinned,
            singles,
            pairs,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn locations(&self) -> &[NoiseLocation] {
        &self.locations
    }

    pub fn num_pair_locations(&self) -> usize {
        self.pairs.len()
    }

    /// Every single fault of this circuit.
    pub fn all_faults(&self) -> impl Iterator<Item = Fault> + '_ {
        self.locations.iter().enumerate().flat_map(|(loc, l)| {
            (0..l.num_paulis()).map(move |k| Fault {
                loc,
                pauli: k as u8,
            })
        })
    }

    /// Samples one shot of depolarizing noise into `out` (sorted by location).
    pub fn sample_faults(&self, m: &NoiseModel, rng: &mut impl Rng, out: &mut Vec<Fault>) {
        out.clear();
        let mut hits = Vec::new();
        sample_hits(self.singles.len(), m.p1, rng, &mut hits);
        for &i in &hits {
            out.push(Fault {
                loc: self.singles[i],
                pauli: rng.gen_range(0..3),
            });
        }
        hits.clear();
        sample_hits(self.pairs.len(), m.p2, rng, &mut hits);
        for &i in &hits {
            out.push(Fault {
                loc: self.pairs[i],
                pauli: rng.gen_range(0..15),
            });
        }
        out.sort_unstable();
    }

    fn apply_fault(&self, frame: &mut Frame, f: Fault) {
        let p = &self.pinned[f.loc];
        if p.two {
            frame.apply_pair(p.qubits[0], p.qubits[1], f.pauli as usize);
        } else {
            frame.apply_single(p.qubits[0], f.pauli + 1);
        }
    }

    /// Propagates `frame` through the circuit, inserting `faults` (sorted by
    /// location). Returns the mask of flipped measurement outcomes, bit `q`
    /// for the measurement of qubit `q`.
    pub fn run(&self, frame: &mut Frame, faults: &[Fault]) -> u64 {
        let mut flips = 0u64;
        let mut next = 0;
        for (i, op) in self.ops.iter().enumerate() {
            while next < faults.len() && self.pinned[faults[next].loc].at == i {
                self.apply_fault(frame, faults[next]);
                next += 1;
            }
            if let FrameOp::Meas(q) = *op {
                flips |= (frame.x >> q & 1) << q;
            }
            frame.apply(op);
        }
        for &f in &faults[next..] {
            self.apply_fault(frame, f);
        }
        flips
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{random_clifford, GateOp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frame_matches_pauli_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let qubits: Vec<usize> = (0..6).collect();
        for _ in 0..50 {
            let mut c = random_clifford(6, &qubits, 4, &mut rng);
            c.push_ops(vec![
                GateOp::cnot_swap(1, 4),
                GateOp::pair(GateKind::ISwap, 2, 3),
            ])
            .unwrap();
            let compiled = CompiledCircuit::compile(&c).unwrap();
            let mut p = PauliString::identity(6);
            for q in 0..6 {
                p.set(q, crate::pauli::Pauli::from_bits(rng.gen(), rng.gen()));
            }
            let mut frame = Frame::from_pauli(&p).unwrap();
            compiled.run(&mut frame, &[]);
            let mut expect = p.clone();
            for op in c.ops() {
                expect = expect.conjugate_by(op);
            }
            assert_eq!(frame, Frame::from_pauli(&expect).unwrap());
        }
    }

    #[test]
    fn measurement_flips_and_resets() {
        let mut c = Circuit::new(2);
        c.push_ops(vec![GateOp::single(GateKind::ResetZ, 1)])
            .unwrap();
        c.push_ops(vec![GateOp::cnot_swap(0, 1)]).unwrap();
        c.push_ops(vec![GateOp::single(GateKind::MeasZ, 0)])
            .unwrap();
        let compiled = CompiledCircuit::compile(&c).unwrap();
        let mut f = Frame { x: 0b11, z: 0 };
        // X on 1 is cleared by the reset; X on 0 is copied to both.
        let flips = compiled.run(&mut f, &[]);
        assert_eq!(flips, 0b01);
        assert_eq!(f.x, 0b11);
    }
}
