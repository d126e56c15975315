//! Depolarizing noise locations of a scheduled circuit.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};
use crate::pauli::{two_qubit_paulis, Pauli, PauliString};

/// `p1`: single-qubit error probability per location, `p2`: two-qubit error
/// probability per two-qubit gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, p) in [("p1", p1), ("p2", p2)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {p} is not in [0, 1]"
                )));
            }
        }
        Ok(NoiseModel { p1, p2 })
    }

    pub fn noiseless() -> Self {
        NoiseModel { p1: 0.0, p2: 0.0 }
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Timing {
    Before,
    After,
}

/// A place where an error may strike: before or after moment `moment`, on one
/// qubit (probability `p1`) or on the pair of a two-qubit gate (`p2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseLocation {
    pub moment: usize,
    pub timing: Timing,
    pub qubits: Vec<usize>,
}

impl NoiseLocation {
    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }

    /// Number of distinct non-identity Paulis at this location (3 or 15).
    pub fn num_paulis(&self) -> usize {
        if self.is_two_qubit() {
            15
        } else {
            3
        }
    }

    /// The `k`-th non-identity Pauli (`k` in `0..num_paulis()`) on `n` qubits.
    pub fn pauli(&self, n: usize, k: usize) -> PauliString {
        let mut p = PauliString::identity(n);
        if self.is_two_qubit() {
            let (a, b) = two_qubit_paulis()[k];
            p.set(self.qubits[0], a);
            p.set(self.qubits[1], b);
        } else {
            p.set(self.qubits[0], Pauli::NONTRIVIAL[k]);
        }
        p
    }
}

/// Every noise location of `c`, ordered by moment with `Before` locations
/// first. Single-qubit locations: after each reset and single-qubit gate,
/// before each measurement and on every idle qubit of every moment. Pair
/// locations: after each two-qubit gate.
pub fn noise_locations(c: &Circuit) -> Vec<NoiseLocation> {
    let mut out = Vec::new();
    for (k, m) in c.moments().iter().enumerate() {
        for op in m.ops() {
            if op.kind() == GateKind::MeasZ {
                out.push(NoiseLocation {
                    moment: k,
                    timing: Timing::Before,
                    qubits: vec![op.qubits()[0]],
                });
            }
        }
        for op in m.ops() {
            if op.kind() != GateKind::MeasZ {
                out.push(NoiseLocation {
                    moment: k,
                    timing: Timing::After,
                    qubits: op.qubits().to_vec(),
                });
            }
        }
        for q in 0..c.num_qubits() {
            if !m.touches(q) {
                out.push(NoiseLocation {
                    moment: k,
                    timing: Timing::After,
                    qubits: vec![q],
                });
            }
        }
    }
    out
}

/// A sampled error: the Pauli applied before or after moment `moment`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoiseEvent {
    pub moment: usize,
    pub timing: Timing,
    pub pauli: PauliString,
}

/// Indices in `0..len` hit independently with probability `p`, in increasing
/// order, by geometric skipping.
pub fn sample_hits(len: usize, p: f64, rng: &mut impl Rng, out: &mut Vec<usize>) {
    if p <= 0.0 || len == 0 {
        return;
    }
    if p >= 1.0 {
        out.extend(0..len);
        return;
    }
    let log_q = (-p).ln_1p();
    let mut i = 0usize;
    loop {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (len - i) as f64 {
            return;
        }
        i += skip as usize;
        out.push(i);
        i += 1;
        if i >= len {
            return;
        }
    }
}

/// One shot of depolarizing noise on `c`.
pub fn sample_noise_locations(c: &Circuit, m: &NoiseModel, rng: &mut impl Rng) -> Vec<NoiseEvent> {
    let locs = noise_locations(c);
    let (pairs, singles): (Vec<usize>, Vec<usize>) =
        (0..locs.len()).partition(|&i| locs[i].is_two_qubit());
    let mut hits = Vec::new();
    let mut picked = Vec::new();
    sample_hits(singles.len(), m.p1, rng, &mut hits);
    picked.extend(hits.drain(..).map(|i| singles[i]));
    sample_hits(pairs.len(), m.p2, rng, &mut hits);
    picked.extend(hits.drain(..).map(|i| pairs[i]));
    picked.sort_unstable();
    picked
        .into_iter()
        .map(|i| {
            let loc = &locs[i];
            let k = rng.gen_range(0..loc.num_paulis());
            NoiseEvent {
                moment: loc.moment,
                timing: loc.timing,
                pauli: loc.pauli(c.num_qubits(), k),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateOp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn locations_of_a_small_circuit() {
        let mut c = Circuit::new(3);
        c.push_ops(vec![GateOp::single(GateKind::ResetZ, 2)])
            .unwrap();
        c.push_ops(vec![GateOp::cnot_swap(0, 2)]).unwrap();
        c.push_ops(vec![GateOp::single(GateKind::MeasZ, 0)])
            .unwrap();
        let locs = noise_locations(&c);
        // reset + 2 idle, pair + 1 idle, measurement + 2 idle
        assert_eq!(locs.len(), 8);
        assert_eq!(locs.iter().filter(|l| l.is_two_qubit()).count(), 1);
        assert_eq!(locs[5].timing, Timing::Before);
    }

    #[test]
    fn noiseless_is_empty() {
        let mut c = Circuit::new(2);
        c.push_ops(vec![GateOp::cnot_swap(0, 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(sample_noise_locations(&c, &NoiseModel::noiseless(), &mut rng).is_empty());
        }
        assert!(NoiseModel::new(1.5, 0.0).is_err());
    }

    #[test]
    fn hits_are_sorted_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut out = Vec::new();
        sample_hits(50, 0.3, &mut rng, &mut out);
        assert!(out.windows(2).all(|w| w[0] < w[1]));
        assert!(out.iter().all(|&i| i < 50));
        out.clear();
        sample_hits(7, 1.0, &mut rng, &mut out);
        assert_eq!(out, (0..7).collect::<Vec<_>>());
    }
}
