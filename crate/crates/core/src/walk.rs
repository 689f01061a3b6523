//! Dense state-vector evolution of a walker on a cyclic one-dimensional
//! lattice coupled to a register of M coin qubits.
//!
//! One step tosses a fixed 2x2 unitary on a single "active" coin qubit and
//! then shifts the walker conditionally: active qubit 0 moves the walker one
//! site up, active qubit 1 one site down. All other coin qubits are
//! spectators. The coin basis is ordered |q1 q2 ... qM> with qubit 1 the most
//! significant bit.

use num_complex::Complex64;
use rand::{Rng, RngExt};

use crate::error::{Error, Result};
use crate::linalg::Mat2;

/// Maximum tolerated deviation of a squared norm from 1 on construction.
pub const NORM_TOL: f64 = 1e-9;

/// Per-site weights at or below this are treated as "no walker here".
pub const WEIGHT_THRESHOLD: f64 = 1e-14;

/// Bit of coin qubit `qubit` (1-based, qubit 1 most significant) in the coin
/// basis index `index` for an `num_coins`-qubit register.
pub fn qubit_bit(index: usize, num_coins: usize, qubit: usize) -> usize {
    debug_assert!(qubit >= 1 && qubit <= num_coins);
    (index >> (num_coins - qubit)) & 1
}

/// Basis label |q1 q2 ... qM> of coin index `index`.
pub fn basis_label(index: usize, num_coins: usize) -> String {
    (1..=num_coins)
        .map(|q| {
            if qubit_bit(index, num_coins, q) == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Normalized state of the coin register alone.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinState {
    amplitudes: Vec<Complex64>,
    num_coins: usize,
}

impl CoinState {
    /// Accepts amplitudes whose squared norm deviates from 1 by at most
    /// [`NORM_TOL`], then stores the exactly renormalized vector.
    pub fn new(amplitudes: Vec<Complex64>, num_coins: usize) -> Result<Self> {
        if num_coins < 1 {
            return Err(Error::InvalidParam("need at least one coin qubit".into()));
        }
        let dim = 1usize << num_coins;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized {
                norm_sqr,
                tol: NORM_TOL,
            });
        }
        let inv = 1.0 / norm_sqr.sqrt();
        let amplitudes = amplitudes.into_iter().map(|a| a * inv).collect();
        Ok(Self {
            amplitudes,
            num_coins,
        })
    }

    /// Computational basis state |q1 q2 ... qM> given by `basis_index`.
    pub fn computational(num_coins: usize, basis_index: usize) -> Result<Self> {
        let dim = 1usize << num_coins;
        if basis_index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: basis_index,
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[basis_index] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes, num_coins)
    }

    /// Haar-like random coin state: i.i.d. complex Gaussian amplitudes,
    /// normalized.
    pub fn random<R: Rng + ?Sized>(num_coins: usize, rng: &mut R) -> Self {
        let dim = 1usize << num_coins;
        let mut amplitudes = Vec::with_capacity(dim);
        loop {
            amplitudes.clear();
            for _ in 0..dim {
                amplitudes.push(Complex64::new(gaussian(rng), gaussian(rng)));
            }
            let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
            if norm_sqr > 1e-12 {
                let inv = 1.0 / norm_sqr.sqrt();
                for a in amplitudes.iter_mut() {
                    *a *= inv;
                }
                return Self {
                    amplitudes,
                    num_coins,
                };
            }
        }
    }

    pub fn num_coins(&self) -> usize {
        self.num_coins
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller from two uniforms; 1 - u keeps the log argument positive.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// The unbiased coin toss (1, i; i, 1)/sqrt(2).
pub fn unbiased_toss() -> Mat2 {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let i = Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    Mat2::new(r, i, i, r)
}

/// Which coin qubit a step acts on, and with which toss.
#[derive(Debug, Clone)]
pub struct StepConfig {
    pub active_qubit: usize,
    toss: Mat2,
}

impl StepConfig {
    /// Step on `active_qubit` with the unbiased toss.
    pub fn unbiased(active_qubit: usize) -> Self {
        Self {
            active_qubit,
            toss: unbiased_toss(),
        }
    }

    /// Step with a custom toss; rejects non-unitary matrices.
    pub fn with_toss(active_qubit: usize, toss: Mat2) -> Result<Self> {
        if !toss.is_unitary(1e-12) {
            return Err(Error::NonUnitaryToss { tol: 1e-12 });
        }
        Ok(Self { active_qubit, toss })
    }

    pub fn toss(&self) -> &Mat2 {
        &self.toss
    }
}

/// Full walker (x) coin state on a cyclic lattice.
///
/// Amplitudes are stored coin-major: entry `(c, x)` lives at `c * n + x`.
/// States are immutable; each step produces a fresh value.
#[derive(Debug, Clone)]
pub struct WalkState {
    amplitudes: Vec<Complex64>,
    num_coins: usize,
    lattice_size: usize,
    start_site: usize,
    steps_taken: usize,
    moment_guard: bool,
}

impl WalkState {
    /// Product state: `coin` at `start_site`, nothing elsewhere.
    pub fn new(coin: &CoinState, lattice_size: usize, start_site: usize) -> Result<Self> {
        if lattice_size < 1 {
            return Err(Error::InvalidLattice(
                "lattice needs at least one site".into(),
            ));
        }
        if start_site >= lattice_size {
            return Err(Error::SiteOutOfRange {
                site: start_site,
                lattice_size,
            });
        }
        let dim = coin.dim();
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim * lattice_size];
        for c in 0..dim {
            amplitudes[c * lattice_size + start_site] = coin.amplitude(c);
        }
        Ok(Self {
            amplitudes,
            num_coins: coin.num_coins(),
            lattice_size,
            start_site,
            steps_taken: 0,
            moment_guard: false,
        })
    }

    /// Lattice sized so that `t_max` steps can never wrap: n = 2 t_max + 21,
    /// start at the central site. Evolution past the budget is refused.
    pub fn for_moment_analysis(coin: &CoinState, t_max: usize) -> Result<Self> {
        let lattice_size = 2 * t_max + 21;
        let start_site = (lattice_size - 1) / 2;
        let mut state = Self::new(coin, lattice_size, start_site)?;
        state.moment_guard = true;
        Ok(state)
    }

    pub fn num_coins(&self) -> usize {
        self.num_coins
    }

    pub fn coin_dim(&self) -> usize {
        1usize << self.num_coins
    }

    pub fn lattice_size(&self) -> usize {
        self.lattice_size
    }

    pub fn start_site(&self) -> usize {
        self.start_site
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    pub fn amplitude(&self, coin_index: usize, site: usize) -> Complex64 {
        self.amplitudes[coin_index * self.lattice_size + site]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn total_norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// One application of the composite step operator: toss on the active
    /// qubit, then the conditional cyclic shift.
    pub fn apply_step(&self, config: &StepConfig) -> Result<WalkState> {
        let m = self.num_coins;
        if config.active_qubit < 1 || config.active_qubit > m {
            return Err(Error::QubitOutOfRange {
                qubit: config.active_qubit,
                num_coins: m,
            });
        }
        let n = self.lattice_size;
        let dim = self.coin_dim();
        let bit = 1usize << (m - config.active_qubit);
        let t = &config.toss.e;
        let mut out = vec![Complex64::new(0.0, 0.0); dim * n];
        // The pairs (c0, c1 = c0 | bit) partition the coin basis, so every
        // output entry is written exactly once.
        for c0 in 0..dim {
            if c0 & bit != 0 {
                continue;
            }
            let c1 = c0 | bit;
            for x in 0..n {
                let a0 = self.amplitudes[c0 * n + x];
                let a1 = self.amplitudes[c1 * n + x];
                let up = (x + 1) % n;
                let down = (x + n - 1) % n;
                out[c0 * n + up] = t[0][0] * a0 + t[0][1] * a1;
                out[c1 * n + down] = t[1][0] * a0 + t[1][1] * a1;
            }
        }
        Ok(WalkState {
            amplitudes: out,
            num_coins: m,
            lattice_size: n,
            start_site: self.start_site,
            steps_taken: self.steps_taken + 1,
            moment_guard: self.moment_guard,
        })
    }

    /// `t`-fold application of [`apply_step`](Self::apply_step).
    pub fn evolve(&self, config: &StepConfig, t: usize) -> Result<WalkState> {
        if self.moment_guard {
            let required = 2 * (self.steps_taken + t) + 2;
            if self.lattice_size < required {
                return Err(Error::Wraparound {
                    lattice_size: self.lattice_size,
                    steps: self.steps_taken + t,
                    required,
                });
            }
        }
        let mut state = self.clone();
        for _ in 0..t {
            state = state.apply_step(config)?;
        }
        Ok(state)
    }

    /// Marginal position distribution P(x) = sum_c |amp(c, x)|^2.
    pub fn position_distribution(&self) -> Vec<f64> {
        let n = self.lattice_size;
        let mut p = vec![0.0f64; n];
        for c in 0..self.coin_dim() {
            let row = &self.amplitudes[c * n..(c + 1) * n];
            for (slot, amp) in p.iter_mut().zip(row) {
                *slot += amp.norm_sqr();
            }
        }
        p
    }

    /// Signed displacement of `site` from the start site, resolved to the
    /// half-open window (-n/2, n/2].
    pub fn signed_displacement(&self, site: usize) -> i64 {
        let n = self.lattice_size as i64;
        let raw = ((site as i64) - (self.start_site as i64)).rem_euclid(n);
        if raw > n / 2 {
            raw - n
        } else {
            raw
        }
    }

    /// m-th moment of the signed displacement, m in {1, 2}.
    ///
    /// Refuses to answer once the support could have wrapped around the
    /// cyclic boundary (n < 2 t + 2).
    pub fn direct_moment(&self, m: u32) -> Result<f64> {
        if m != 1 && m != 2 {
            return Err(Error::BadMomentOrder { m });
        }
        let required = 2 * self.steps_taken + 2;
        if self.lattice_size < required {
            return Err(Error::Wraparound {
                lattice_size: self.lattice_size,
                steps: self.steps_taken,
                required,
            });
        }
        let p = self.position_distribution();
        let mut acc = 0.0f64;
        for (x, px) in p.iter().enumerate() {
            let d = self.signed_displacement(x) as f64;
            acc += px * d.powi(m as i32);
        }
        Ok(acc)
    }

    /// Per-site weight and the artificially normalized coin state at `site`.
    ///
    /// Signals [`Error::UndefinedSite`] when the weight is at or below
    /// [`WEIGHT_THRESHOLD`]; callers that scan the lattice treat that as
    /// "no walker here" rather than zero entanglement.
    pub fn coin_state_at(&self, site: usize) -> Result<(CoinState, f64)> {
        self.coin_state_at_with_threshold(site, WEIGHT_THRESHOLD)
    }

    pub fn coin_state_at_with_threshold(
        &self,
        site: usize,
        threshold: f64,
    ) -> Result<(CoinState, f64)> {
        if site >= self.lattice_size {
            return Err(Error::SiteOutOfRange {
                site,
                lattice_size: self.lattice_size,
            });
        }
        let n = self.lattice_size;
        let dim = self.coin_dim();
        let weight: f64 = (0..dim)
            .map(|c| self.amplitudes[c * n + site].norm_sqr())
            .sum();
        if weight <= threshold {
            return Err(Error::UndefinedSite {
                site,
                weight,
                threshold,
            });
        }
        let inv = 1.0 / weight.sqrt();
        let column: Vec<Complex64> = (0..dim)
            .map(|c| self.amplitudes[c * n + site] * inv)
            .collect();
        let coin = CoinState {
            amplitudes: column,
            num_coins: self.num_coins,
        };
        Ok((coin, weight))
    }
}
