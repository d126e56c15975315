//! Encoded-memory experiments on the rotated distance-3 code, logical error
//! statistics and the quadratic fit.
//!
//! Round 0 is a noiseless encoding round, rounds `1..=rounds` are noisy and
//! round `rounds + 1` is a final noiseless round followed by a transversal
//! data readout. Errors are tracked as a Pauli frame relative to the
//! noiseless run, which is exact because only deterministic parities enter the
//! decoder.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Basis;
use crate::codes::{CodeFamily, CodeSpec, RoundParity};
use crate::decoder::{
    builtin_tables, generate_tables_bruteforce, merged_tables, Decoder, TableSet,
};
use crate::error::{Error, Result};
use crate::frame::{Fault, Frame};
use crate::memory::{min_weight_table, RotatedRounds, LOGICAL_X_MASK, LOGICAL_Z_MASK};
use crate::noise::NoiseModel;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LogicalState {
    /// `|0>_L`, read out in the Z basis.
    Zero,
    /// `|+>_L`, read out in the X basis.
    Plus,
}

/// How `p1` follows from `p2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum P1Rule {
    Zero,
    HalfP2,
    Explicit(f64),
}

impl P1Rule {
    pub fn p1(self, p2: f64) -> f64 {
        match self {
            P1Rule::Zero => 0.0,
            P1Rule::HalfP2 => p2 / 2.0,
            P1Rule::Explicit(p) => p,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderChoice {
    /// Published tables completed by the generated ones.
    Builtin,
    /// Generated tables only.
    Bruteforce,
}

/// Whether recoveries are tracked in software or applied to the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RecoveryMode {
    Frame,
    Physical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub code: CodeSpec,
    pub logical_state: LogicalState,
    pub rounds: usize,
    pub shots: u64,
    pub p2: f64,
    pub p1_rule: P1Rule,
    pub seed: u64,
    pub decoder: DecoderChoice,
}

impl ExperimentConfig {
    pub fn new(cut: bool, p2: f64) -> Self {
        ExperimentConfig {
            code: CodeSpec::rotated_d3(cut),
            logical_state: LogicalState::Zero,
            rounds: 40,
            shots: 10_000,
            p2,
            p1_rule: P1Rule::Zero,
            seed: 0,
            decoder: DecoderChoice::Builtin,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.code.validate()?;
        if self.code.family != CodeFamily::SurfaceRotated {
            return Err(Error::Unsupported(
                "memory experiments run on the rotated d = 3 code only".into(),
            ));
        }
        if self.rounds < 2 {
            return Err(Error::InvalidArgument(format!(
                "rounds = {} but two-round syndrome comparison needs at least 2",
                self.rounds
            )));
        }
        if self.shots == 0 {
            return Err(Error::InvalidArgument("shots must be at least 1".into()));
        }
        self.noise_model().map(|_| ())
    }

    pub fn p1(&self) -> f64 {
        self.p1_rule.p1(self.p2)
    }

    pub fn noise_model(&self) -> Result<NoiseModel> {
        NoiseModel::new(self.p1(), self.p2)
    }
}

/// Name of a rotated code spec as used on the command line and in CSV output.
pub fn code_label(code: &CodeSpec) -> String {
    if code.cut {
        "rotated-d3-cut".into()
    } else {
        "rotated-d3".into()
    }
}

/// One CSV row of experiment output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub code: String,
    pub p1: f64,
    pub p2: f64,
    pub rounds: usize,
    pub shots: u64,
    pub failures: u64,
    pub p_total: f64,
    pub p_round: f64,
    /// Binomial standard error of `p_round`.
    pub stderr: f64,
}

impl ExperimentResult {
    pub fn from_counts(cfg: &ExperimentConfig, failures: u64) -> Self {
        let n = cfg.shots as f64;
        let p_total = failures as f64 / n;
        let p_round = per_round_probability(p_total, cfg.rounds);
        let se_total = (p_total * (1.0 - p_total) / n).sqrt();
        let r = cfg.rounds as f64;
        // Delta method through p_round = 1 - (1 - P)^(1/r).
        let slope = if p_total < 1.0 {
            (1.0 - p_total).powf(1.0 / r - 1.0) / r
        } else {
            0.0
        };
        ExperimentResult {
            code: code_label(&cfg.code),
            p1: cfg.p1(),
            p2: cfg.p2,
            rounds: cfg.rounds,
            shots: cfg.shots,
            failures,
            p_total,
            p_round,
            stderr: se_total * slope,
        }
    }
}

pub fn write_results_csv<W: std::io::Write>(results: &[ExperimentResult], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in results {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

/// Logical outcome of one shot in both readout bases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ShotOutcome {
    /// `Z_L` flipped: failure of a `|0>_L` memory.
    pub z_flip: bool,
    /// `X_L` flipped: failure of a `|+>_L` memory.
    pub x_flip: bool,
}

impl ShotOutcome {
    pub fn failed(self, state: LogicalState) -> bool {
        match state {
            LogicalState::Zero => self.z_flip,
            LogicalState::Plus => self.x_flip,
        }
    }
}

/// A single fault of the certificate that led to a logical failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailingFault {
    pub round: usize,
    pub moment: usize,
    pub qubits: Vec<usize>,
    pub pauli: String,
    pub state: LogicalState,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub cut: bool,
    pub rounds: usize,
    pub faults_checked: usize,
    pub failures: Vec<FailingFault>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Compiled rounds plus decoder, shared read-only by all shots.
#[derive(Clone, Debug)]
pub struct MemoryExperiment {
    rounds: RotatedRounds,
    decoder: Decoder,
    readout: [[u16; 16]; 2],
}

impl MemoryExperiment {
    pub fn new(cut: bool, choice: DecoderChoice) -> Result<Self> {
        let rounds = RotatedRounds::new(cut)?;
        let generated = generate_tables_bruteforce(&rounds);
        let tables = match choice {
            DecoderChoice::Builtin => merged_tables(&builtin_tables(), &generated, &rounds.masks),
            DecoderChoice::Bruteforce => generated.tables,
        };
        Ok(Self::with_tables(rounds, &tables))
    }

    pub fn with_tables(rounds: RotatedRounds, tables: &TableSet) -> Self {
        let readout = [
            min_weight_table(&rounds.masks, Basis::Z),
            min_weight_table(&rounds.masks, Basis::X),
        ];
        MemoryExperiment {
            decoder: Decoder::new(tables),
            rounds,
            readout,
        }
    }

    pub fn rounds(&self) -> &RotatedRounds {
        &self.rounds
    }

    /// Runs one shot with `noisy` noisy rounds; `faults(r, parity, out)` fills
    /// the faults of noisy round `r` (sorted by location).
    pub fn run_shot(
        &self,
        noisy: usize,
        mode: RecoveryMode,
        mut faults: impl FnMut(usize, RoundParity, &mut Vec<Fault>),
    ) -> ShotOutcome {
        let masks = &self.rounds.masks;
        let mut noise = Frame::default();
        // Accumulated recovery as (x, z) masks over data roles.
        let mut rec = [0u16; 2];
        let mut prev = [0u8; 2];
        let mut buf = Vec::new();
        let mut parity = RoundParity::Even;
        for r in 1..=noisy + 1 {
            parity = RoundParity::of_round(r);
            buf.clear();
            if r <= noisy {
                faults(r, parity, &mut buf);
            }
            let flips = self.rounds.compiled(parity).run(&mut noise, &buf);
            let mut applied = [0u16; 2];
            for (c, check) in [Basis::Z, Basis::X].into_iter().enumerate() {
                let raw = self.rounds.syndrome(parity, check, flips);
                let eff = raw ^ masks.syndrome(check, rec[c]);
                let m = self.decoder.lookup(check, parity, prev[c], eff);
                applied[c] = m;
                prev[c] = eff ^ masks.syndrome(check, m);
            }
            match mode {
                RecoveryMode::Frame => {
                    rec[0] ^= applied[0];
                    rec[1] ^= applied[1];
                }
                RecoveryMode::Physical => {
                    self.rounds
                        .apply_data(parity, &mut noise, applied[0], applied[1]);
                }
            }
        }
        let (mut dx, mut dz) = self.rounds.data_error(parity, &noise);
        dx ^= rec[0];
        dz ^= rec[1];
        dx ^= self.readout[0][masks.syndrome(Basis::Z, dx) as usize];
        dz ^= self.readout[1][masks.syndrome(Basis::X, dz) as usize];
        ShotOutcome {
            z_flip: (dx & LOGICAL_Z_MASK).count_ones() % 2 == 1,
            x_flip: (dz & LOGICAL_X_MASK).count_ones() % 2 == 1,
        }
    }

    /// Depolarizing-noise shot number `shot` of a seeded experiment.
    pub fn sampled_shot(
        &self,
        model: &NoiseModel,
        noisy: usize,
        seed: u64,
        shot: u64,
        mode: RecoveryMode,
    ) -> ShotOutcome {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(shot);
        self.run_shot(noisy, mode, |_, p, out| {
            self.rounds.compiled(p).sample_faults(model, &mut rng, out)
        })
    }

    /// Logical failure count for `cfg`, shots in parallel.
    pub fn count_failures(&self, cfg: &ExperimentConfig, mode: RecoveryMode) -> Result<u64> {
        cfg.validate()?;
        let model = cfg.noise_model()?;
        if model.is_noiseless() {
            return Ok(0);
        }
        Ok((0..cfg.shots)
            .into_par_iter()
            .map(|s| {
                self.sampled_shot(&model, cfg.rounds, cfg.seed, s, mode)
                    .failed(cfg.logical_state) as u64
            })
            .sum())
    }

    pub fn run(&self, cfg: &ExperimentConfig) -> Result<ExperimentResult> {
        if cfg.code.cut != self.rounds.cut() {
            return Err(Error::InvalidArgument(
                "experiment was built for the other circuit".into(),
            ));
        }
        let failures = self.count_failures(cfg, RecoveryMode::Frame)?;
        Ok(ExperimentResult::from_counts(cfg, failures))
    }

    /// Injects every single fault of every noisy round, one at a time, and
    /// records those that flip a logical operator.
    pub fn certificate(&self, noisy: usize) -> Certificate {
        let mut failures = Vec::new();
        let mut checked = 0;
        for r in 1..=noisy {
            let compiled = self.rounds.compiled(RoundParity::of_round(r));
            for fault in compiled.all_faults() {
                checked += 1;
                let out = self.run_shot(noisy, RecoveryMode::Frame, |round, _, buf| {
                    if round == r {
                        buf.push(fault);
                    }
                });
                for state in [LogicalState::Zero, LogicalState::Plus] {
                    if out.failed(state) {
                        let loc = &compiled.locations()[fault.loc];
                        let n = compiled.num_qubits();
                        failures.push(FailingFault {
                            round: r,
                            moment: loc.moment,
                            qubits: loc.qubits.clone(),
                            pauli: loc.pauli(n, fault.pauli as usize).sparse_label(0),
                            state,
                        });
                    }
                }
            }
        }
        Certificate {
            cut: self.rounds.cut(),
            rounds: noisy,
            faults_checked: checked,
            failures,
        }
    }
}

pub fn run_memory_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    MemoryExperiment::new(cfg.code.cut, cfg.decoder)?.run(cfg)
}

/// `1 - (1 - p_total)^(1 / rounds)`.
pub fn per_round_probability<T: Real>(p_total: T, rounds: usize) -> T {
    if p_total >= T::one() {
        return T::one();
    }
    if rounds <= 1 {
        return p_total;
    }
    let r = T::from_usize(rounds).expect("round count");
    T::one() - (T::one() - p_total).powf(T::one() / r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult<T> {
    /// Coefficient of `p_round = alpha * p2^2`.
    pub alpha: T,
    /// Relative RMS deviation of the points from the fitted curve.
    pub residual: T,
    /// Weighted least-squares slope of `ln p_round` against `ln p2`, when at
    /// least two points have failures.
    pub slope: Option<T>,
    pub points: Vec<(T, T)>,
}

/// Inverse-variance weighted fit of `alpha * p2^2` to `(p2, p_round, stderr)`
/// points. Points with zero standard error get the smallest nonzero one.
pub fn fit_quadratic<T: Real>(points: &[(T, T, T)]) -> Result<FitResult<T>> {
    if points.is_empty() || points.iter().any(|p| p.0 <= T::zero()) {
        return Err(Error::InvalidArgument(
            "the fit needs at least one point, all with p2 > 0".into(),
        ));
    }
    let pts: Vec<(T, T)> = points.iter().map(|p| (p.0, p.1)).collect();
    if points.iter().all(|p| p.1 == T::zero()) {
        return Ok(FitResult {
            alpha: T::zero(),
            residual: T::zero(),
            slope: None,
            points: pts,
        });
    }
    let floor = points
        .iter()
        .map(|p| p.2)
        .filter(|&s| s > T::zero())
        .fold(None, |m: Option<T>, s| Some(m.map_or(s, |m| m.min(s))))
        .unwrap_or_else(T::one);
    let sigma = |s: T| if s > T::zero() { s } else { floor };
    let (mut num, mut den) = (T::zero(), T::zero());
    for &(p2, y, s) in points {
        let x = p2 * p2;
        let w = T::one() / (sigma(s) * sigma(s));
        num = num + w * x * y;
        den = den + w * x * x;
    }
    let alpha = num / den;
    let mut ss = T::zero();
    for &(p2, y, _) in points {
        let fit = alpha * p2 * p2;
        let d = (y - fit) / fit;
        ss = ss + d * d;
    }
    let n = T::from_usize(points.len()).expect("point count");
    Ok(FitResult {
        alpha,
        residual: (ss / n).sqrt(),
        slope: loglog_slope(points),
        points: pts,
    })
}

/// Slope of `ln y` against `ln p2`, weighted by `(y / stderr)^2`, over points
/// with `y > 0`.
pub fn loglog_slope<T: Real>(points: &[(T, T, T)]) -> Option<T> {
    let used: Vec<(T, T, T)> = points
        .iter()
        .filter(|p| p.0 > T::zero() && p.1 > T::zero())
        .map(|&(x, y, s)| {
            let w = if s > T::zero() {
                (y / s) * (y / s)
            } else {
                T::one()
            };
            (x.ln(), y.ln(), w)
        })
        .collect();
    if used.len() < 2 {
        return None;
    }
    let sw = used.iter().fold(T::zero(), |a, p| a + p.2);
    let mx = used.iter().fold(T::zero(), |a, p| a + p.2 * p.0) / sw;
    let my = used.iter().fold(T::zero(), |a, p| a + p.2 * p.1) / sw;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for &(x, y, w) in &used {
        sxy = sxy + w * (x - mx) * (y - my);
        sxx = sxx + w * (x - mx) * (x - mx);
    }
    (sxx > T::zero()).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn per_round_inverts_total() {
        assert_eq!(per_round_probability(0.0f64, 40), 0.0);
        assert_eq!(per_round_probability(1.0f64, 40), 1.0);
        assert_eq!(per_round_probability(0.3f64, 1), 0.3);
        let x = 1.3e-3f64;
        let total = 1.0 - (1.0 - x).powi(40);
        assert!((per_round_probability(total, 40) - x).abs() < 1e-15);
        let x32 = per_round_probability(1.0f32 - 0.99f32.powi(10), 10);
        assert!((x32 - 0.01).abs() < 1e-5);
    }

    #[test]
    fn fit_of_exact_points() {
        let pts: Vec<(f64, f64, f64)> = [0.002, 0.005, 0.01, 0.02]
            .iter()
            .map(|&p| (p, 3.0 * p * p, 1e-6))
            .collect();
        let f = fit_quadratic(&pts).unwrap();
        assert!((f.alpha - 3.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!((f.slope.unwrap() - 2.0).abs() < 1e-12);
        let one = fit_quadratic(&[(0.01f64, 5e-4, 1e-5)]).unwrap();
        assert!((one.alpha - 5.0).abs() < 1e-12);
        let zero = fit_quadratic(&[(0.01f32, 0.0, 0.0), (0.02, 0.0, 0.0)]).unwrap();
        assert_eq!((zero.alpha, zero.residual), (0.0, 0.0));
        assert!(fit_quadratic::<f64>(&[]).is_err());
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(true, 0.01);
        assert!(cfg.validate().is_ok());
        cfg.rounds = 1;
        assert!(cfg.validate().is_err());
        cfg.rounds = 2;
        cfg.shots = 0;
        assert!(cfg.validate().is_err());
        cfg.shots = 1;
        cfg.p1_rule = P1Rule::Explicit(2.0);
        assert!(cfg.validate().is_err());
        assert_eq!(P1Rule::HalfP2.p1(0.02), 0.01);
    }
}
