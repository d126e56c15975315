//! Small state-vector and unitary engine used as an independent oracle.
//!
//! Basis index bit `q` is the value of qubit `q`. For two-qubit matrices the
//! local index is `bit(first) + 2 * bit(second)`.

use num_complex::Complex;

use crate::circuit::{Circuit, GateKind, GateOp};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tableau::check_permutation;

pub const MAX_DENSE_QUBITS: usize = 12;
pub const MAX_UNITARY_QUBITS: usize = 3;

type C<T> = Complex<T>;

fn c<T: Real>(re: f64, im: f64) -> C<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// 2x2 matrix of a single-qubit unitary gate, row-major.
pub fn single_qubit_matrix<T: Real>(kind: GateKind) -> Option<[C<T>; 4]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Some(match kind {
        GateKind::H => [c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
        GateKind::S => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        GateKind::X => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        GateKind::Y => [c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        GateKind::Z => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
        _ => return None,
    })
}

/// `exp(-i θ Z / 2)`; `θ = π/2` is S up to a global phase.
pub fn rz_matrix<T: Real>(theta: T) -> [C<T>; 4] {
    let half = theta / T::lit(2.0);
    let zero = C::new(T::zero(), T::zero());
    [
        C::new(half.cos(), -half.sin()),
        zero,
        zero,
        C::new(half.cos(), half.sin()),
    ]
}

/// 4x4 matrix of a two-qubit unitary gate acting on `(first, second)`.
pub fn two_qubit_matrix<T: Real>(kind: GateKind) -> Option<[[C<T>; 4]; 4]> {
    let mut m = [[c::<T>(0.0, 0.0); 4]; 4];
    // Column j is the image of local basis state j.
    let image = |j: usize| -> (usize, C<T>) {
        let (a, b) = (j & 1, j >> 1);
        match kind {
            GateKind::Cnot => (a | ((b ^ a) << 1), c(1.0, 0.0)),
            GateKind::Swap => (b | (a << 1), c(1.0, 0.0)),
            GateKind::CnotSwap => ((b ^ a) | (a << 1), c(1.0, 0.0)),
            GateKind::ISwap => {
                let phase = if a != b { c(0.0, 1.0) } else { c(1.0, 0.0) };
                (b | (a << 1), phase)
            }
            _ => unreachable!(),
        }
    };
    if kind.arity() != 2 {
        return None;
    }
    for j in 0..4 {
        let (i, v) = image(j);
        m[i][j] = v;
    }
    Some(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState<T: Real> {
    n: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> DenseState<T> {
    /// `|0...0⟩` on `n` qubits.
    pub fn new(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Computational basis state whose qubit `q` equals bit `q` of `index`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("dense state needs a qubit".into()));
        }
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                max: MAX_DENSE_QUBITS,
            });
        }
        if index >= 1 << n {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} too large"
            )));
        }
        let mut amps = vec![C::new(T::zero(), T::zero()); 1 << n];
        amps[index] = C::new(T::one(), T::zero());
        Ok(Self { n, amps })
    }

    /// Basis state from per-qubit bits.
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let index = bits
            .iter()
            .enumerate()
            .fold(0, |acc, (q, &b)| acc | ((b as usize) << q));
        Self::basis(bits.len(), index)
    }

    pub fn from_amplitudes(n: usize, amps: Vec<C<T>>) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                max: MAX_DENSE_QUBITS,
            });
        }
        if amps.len() != 1 << n {
            return Err(Error::SizeMismatch {
                expected: 1 << n,
                found: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange {
                index: q,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn apply_single(&mut self, q: usize, m: &[C<T>; 4]) -> Result<()> {
        self.check(q)?;
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0] * a0 + m[1] * a1;
                self.amps[i | bit] = m[2] * a0 + m[3] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_two(&mut self, a: usize, b: usize, m: &[[C<T>; 4]; 4]) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::CoincidentQubits {
                kind: "two-qubit".into(),
                qubit: a,
            });
        }
        let (ba, bb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & (ba | bb) == 0 {
                let idx = [i, i | ba, i | bb, i | ba | bb];
                let v = idx.map(|k| self.amps[k]);
                for (r, &k) in idx.iter().enumerate() {
                    self.amps[k] =
                        (0..4).fold(C::new(T::zero(), T::zero()), |acc, j| acc + m[r][j] * v[j]);
                }
            }
        }
        Ok(())
    }

    pub fn apply_rz(&mut self, q: usize, theta: T) -> Result<()> {
        self.apply_single(q, &rz_matrix(theta))
    }

    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        op.check_bounds(self.n)?;
        let q = op.qubits();
        if let Some(m) = single_qubit_matrix::<T>(op.kind()) {
            return self.apply_single(q[0], &m);
        }
        if let Some(m) = two_qubit_matrix::<T>(op.kind()) {
            return self.apply_two(q[0], q[1], &m);
        }
        Err(Error::InvalidArgument(format!(
            "{op:?} is not unitary; use project or prepare explicitly"
        )))
    }

    /// Applies every unitary gate of `c` in moment order.
    pub fn run(&mut self, c: &Circuit) -> Result<()> {
        if c.num_qubits() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: c.num_qubits(),
            });
        }
        for op in c.ops() {
            self.apply_gate(op)?;
        }
        Ok(())
    }

    /// Probability that measuring qubit `q` yields 1.
    pub fn probability_one(&self, q: usize) -> Result<T> {
        self.check(q)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i >> q & 1 == 1)
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr()))
    }

    /// Projects qubit `q` onto `outcome` and renormalizes; returns the
    /// probability of that branch.
    pub fn project(&mut self, q: usize, outcome: bool) -> Result<T> {
        let p1 = self.probability_one(q)?;
        let p = if outcome { p1 } else { T::one() - p1 };
        if p <= T::epsilon() {
            return Err(Error::ImpossibleOutcome(q));
        }
        let scale = T::one() / p.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i >> q & 1 == 1) == outcome {
                *a = *a * scale;
            } else {
                *a = C::new(T::zero(), T::zero());
            }
        }
        Ok(p)
    }

    pub fn inner(&self, other: &DenseState<T>) -> Result<C<T>> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(C::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            }))
    }

    /// Moves the content of qubit `q` to qubit `perm[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<DenseState<T>> {
        check_permutation(perm, self.n)?;
        let mut amps = vec![C::new(T::zero(), T::zero()); self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let j = (0..self.n).fold(0, |acc, q| acc | ((i >> q & 1) << perm[q]));
            amps[j] = a;
        }
        Ok(DenseState { n: self.n, amps })
    }

    /// Tensor product `self ⊗ other`, with `other`'s qubits appended after
    /// `self`'s.
    pub fn tensor(&self, other: &DenseState<T>) -> Result<DenseState<T>> {
        let n = self.n + other.n;
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                max: MAX_DENSE_QUBITS,
            });
        }
        let mut amps = Vec::with_capacity(1 << n);
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        Ok(DenseState { n, amps })
    }
}

/// True iff `|⟨a|b⟩| > 1 - tol`.
pub fn states_equal_up_to_phase<T: Real>(
    a: &DenseState<T>,
    b: &DenseState<T>,
    tol: T,
) -> Result<bool> {
    Ok(a.inner(b)?.norm() > T::one() - tol)
}

/// Square unitary on `k ≤ 3` qubits, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary<T: Real> {
    k: usize,
    m: Vec<C<T>>,
}

impl<T: Real> DenseUnitary<T> {
    pub fn identity(k: usize) -> Result<Self> {
        if k > MAX_UNITARY_QUBITS {
            return Err(Error::TooManyQubits {
                n: k,
                max: MAX_UNITARY_QUBITS,
            });
        }
        let d = 1 << k;
        let mut m = vec![C::new(T::zero(), T::zero()); d * d];
        for i in 0..d {
            m[i * d + i] = C::new(T::one(), T::zero());
        }
        Ok(Self { k, m })
    }

    pub fn num_qubits(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        1 << self.k
    }

    pub fn entry(&self, row: usize, col: usize) -> C<T> {
        self.m[row * self.dim() + col]
    }

    /// `self <- g · self`: left-multiplies by the gate embedded on `k` qubits.
    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        op.check_bounds(self.k)?;
        let d = self.dim();
        // Each column is a state vector; evolve them one by one.
        for col in 0..d {
            let amps = (0..d).map(|r| self.m[r * d + col]).collect();
            let mut s = DenseState::from_amplitudes(self.k, amps)?;
            s.apply_gate(op)?;
            for r in 0..d {
                self.m[r * d + col] = s.amps[r];
            }
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &DenseUnitary<T>) -> Result<DenseUnitary<T>> {
        if self.k != rhs.k {
            return Err(Error::SizeMismatch {
                expected: self.k,
                found: rhs.k,
            });
        }
        let d = self.dim();
        let mut m = vec![C::new(T::zero(), T::zero()); d * d];
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = (0..d).fold(C::new(T::zero(), T::zero()), |acc, l| {
                    acc + self.m[i * d + l] * rhs.m[l * d + j]
                });
            }
        }
        Ok(DenseUnitary { k: self.k, m })
    }

    pub fn adjoint(&self) -> DenseUnitary<T> {
        let d = self.dim();
        let mut m = self.m.clone();
        for i in 0..d {
            for j in 0..d {
                m[i * d + j] = self.m[j * d + i].conj();
            }
        }
        DenseUnitary { k: self.k, m }
    }

    pub fn max_abs_diff(&self, other: &DenseUnitary<T>) -> T {
        self.m
            .iter()
            .zip(&other.m)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// Largest entry deviation after removing the relative global phase.
    pub fn max_abs_diff_up_to_phase(&self, other: &DenseUnitary<T>) -> T {
        let (idx, _) = self
            .m
            .iter()
            .enumerate()
            .fold((0, T::zero()), |best, (i, a)| {
                if a.norm() > best.1 {
                    (i, a.norm())
                } else {
                    best
                }
            });
        if other.m[idx].norm() <= T::epsilon() {
            return T::infinity();
        }
        let phase = self.m[idx] / other.m[idx];
        let phase = phase / phase.norm();
        self.m
            .iter()
            .zip(&other.m)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b * phase).norm()))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        let id = DenseUnitary::identity(self.k).expect("k already checked");
        self.adjoint()
            .mul(self)
            .map(|p| p.max_abs_diff(&id) < tol)
            .unwrap_or(false)
    }

    /// `U P U†` on a Pauli string, as a matrix.
    pub fn conjugate(&self, p: &DenseUnitary<T>) -> Result<DenseUnitary<T>> {
        self.mul(p)?.mul(&self.adjoint())
    }
}

/// Matrix of a Pauli string on `k ≤ 3` qubits, including its sign.
pub fn pauli_matrix<T: Real>(p: &crate::pauli::PauliString) -> Result<DenseUnitary<T>> {
    let k = p.num_qubits();
    let mut u = DenseUnitary::identity(k)?;
    for q in 0..k {
        let kind = match p.get(q) {
            crate::pauli::Pauli::I => continue,
            crate::pauli::Pauli::X => GateKind::X,
            crate::pauli::Pauli::Y => GateKind::Y,
            crate::pauli::Pauli::Z => GateKind::Z,
        };
        u.apply_gate(&GateOp::single(kind, q))?;
    }
    match p.sign() {
        Some(crate::pauli::Sign::Minus) => u.m.iter_mut().for_each(|a| *a = -*a),
        Some(crate::pauli::Sign::Plus) => {}
        None => {
            return Err(Error::InvalidArgument(
                "non-Hermitian Pauli has no sign to embed".into(),
            ))
        }
    }
    Ok(u)
}

/// Product of the gate matrices of `c` in moment order.
pub fn circuit_unitary<T: Real>(c: &Circuit) -> Result<DenseUnitary<T>> {
    if c.num_qubits() > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits {
            n: c.num_qubits(),
            max: MAX_UNITARY_QUBITS,
        });
    }
    let mut u = DenseUnitary::identity(c.num_qubits())?;
    for op in c.ops() {
        u.apply_gate(op)?;
    }
    Ok(u)
}
