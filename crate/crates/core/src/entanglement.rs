//! Reduced density matrices, purity, i-concurrence, and the per-site global
//! entanglement measure Q.
//!
//! The i-concurrence of qubit subset A against its complement is
//! IC = sqrt(2 (1 - Tr rho_A^2)); for a single qubit it ranges over [0, 1].
//! Q is the average-purity form 2 (1 - (1/M) sum_i Tr rho_i^2), which is 0 on
//! product states and 1 when every single-qubit reduction is maximally mixed.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigenvalues;
use crate::walk::{CoinState, WalkState};

/// Reduced density operator of a subset of the coin qubits.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    entries: Vec<Complex64>,
    dim: usize,
    /// Retained qubit labels (1-based, ascending) in the original register.
    subset: Vec<usize>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn num_qubits(&self) -> usize {
        self.subset.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    /// Tr(rho^2); for Hermitian rho this is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Checks Hermiticity and unit trace within 1e-12 and positive
    /// semidefiniteness (eigenvalues >= -1e-10).
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let diff = (self.entry(i, j) - self.entry(j, i).conj()).norm();
                if diff > 1e-12 {
                    return Err(Error::InvalidSubset(format!(
                        "density matrix not Hermitian: |rho[{i}][{j}] - rho[{j}][{i}]*| = {diff}"
                    )));
                }
            }
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized {
                norm_sqr: trace,
                tol: 1e-12,
            });
        }
        let eigs = hermitian_eigenvalues(&self.entries, self.dim);
        if let Some(min) = eigs.first() {
            if *min < -1e-10 {
                return Err(Error::InvalidSubset(format!(
                    "density matrix not positive semidefinite: min eigenvalue {min}"
                )));
            }
        }
        Ok(())
    }

    /// Full-register density matrix |coin><coin|.
    pub fn from_pure(coin: &CoinState) -> Self {
        let dim = coin.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = coin.amplitude(i) * coin.amplitude(j).conj();
            }
        }
        Self {
            entries,
            dim,
            subset: (1..=coin.num_coins()).collect(),
        }
    }

    /// Partial trace down to `keep` (labels must be a subset of this
    /// matrix's retained qubits).
    pub fn trace_down(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = validate_subset(keep, &self.subset)?;
        let local: Vec<usize> = keep
            .iter()
            .map(|q| self.subset.iter().position(|s| s == q).unwrap())
            .collect();
        let m = self.subset.len();
        let env: Vec<usize> = (0..m).filter(|p| !local.contains(p)).collect();
        let kd = 1usize << local.len();
        let ed = 1usize << env.len();
        let compose = |kept_bits: usize, env_bits: usize| -> usize {
            let mut idx = 0usize;
            for (pos, &p) in local.iter().enumerate() {
                let bit = (kept_bits >> (local.len() - 1 - pos)) & 1;
                idx |= bit << (m - 1 - p);
            }
            for (pos, &p) in env.iter().enumerate() {
                let bit = (env_bits >> (env.len() - 1 - pos)) & 1;
                idx |= bit << (m - 1 - p);
            }
            idx
        };
        let mut entries = vec![Complex64::new(0.0, 0.0); kd * kd];
        for i in 0..kd {
            for j in 0..kd {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..ed {
                    acc += self.entry(compose(i, e), compose(j, e));
                }
                entries[i * kd + j] = acc;
            }
        }
        Ok(DensityMatrix {
            entries,
            dim: kd,
            subset: keep,
        })
    }
}

fn validate_subset(keep: &[usize], available: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidSubset("subset must be nonempty".into()));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() {
        return Err(Error::InvalidSubset(format!(
            "duplicate qubit in subset {keep:?}"
        )));
    }
    for q in &sorted {
        if !available.contains(q) {
            return Err(Error::InvalidSubset(format!(
                "qubit {q} not available in {available:?}"
            )));
        }
    }
    Ok(sorted)
}

/// Partial trace of |coin><coin| over the qubits not in `keep`.
pub fn reduce(coin: &CoinState, keep: &[usize]) -> Result<DensityMatrix> {
    let m = coin.num_coins();
    let all: Vec<usize> = (1..=m).collect();
    let keep = validate_subset(keep, &all)?;
    let local: Vec<usize> = keep.iter().map(|q| q - 1).collect();
    let env: Vec<usize> = (0..m).filter(|p| !local.contains(p)).collect();
    let kd = 1usize << local.len();
    let ed = 1usize << env.len();
    let compose = |kept_bits: usize, env_bits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &p) in local.iter().enumerate() {
            let bit = (kept_bits >> (local.len() - 1 - pos)) & 1;
            idx |= bit << (m - 1 - p);
        }
        for (pos, &p) in env.iter().enumerate() {
            let bit = (env_bits >> (env.len() - 1 - pos)) & 1;
            idx |= bit << (m - 1 - p);
        }
        idx
    };
    let mut entries = vec![Complex64::new(0.0, 0.0); kd * kd];
    for i in 0..kd {
        for j in 0..kd {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..ed {
                acc += coin.amplitude(compose(i, e)) * coin.amplitude(compose(j, e)).conj();
            }
            entries[i * kd + j] = acc;
        }
    }
    Ok(DensityMatrix {
        entries,
        dim: kd,
        subset: keep,
    })
}

/// Coin-register density matrix of a walk state with the position traced out:
/// rho[c, c'] = sum_x amp(c, x) amp(c', x)*.
pub fn coin_density_matrix(state: &WalkState) -> DensityMatrix {
    let dim = state.coin_dim();
    let n = state.lattice_size();
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..n {
                acc += state.amplitude(i, x) * state.amplitude(j, x).conj();
            }
            entries[i * dim + j] = acc;
        }
    }
    DensityMatrix {
        entries,
        dim,
        subset: (1..=state.num_coins()).collect(),
    }
}

/// Convenience alias for [`DensityMatrix::purity`].
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// i-concurrence of a single coin qubit against the rest of the register.
pub fn i_concurrence(coin: &CoinState, qubit: usize) -> Result<f64> {
    if qubit < 1 || qubit > coin.num_coins() {
        return Err(Error::QubitOutOfRange {
            qubit,
            num_coins: coin.num_coins(),
        });
    }
    let rho = reduce(coin, &[qubit])?;
    let ic_sqr = 2.0 * (1.0 - rho.purity());
    Ok(ic_sqr.max(0.0).sqrt())
}

/// Global entanglement Q = 2 (1 - mean single-qubit purity); needs M >= 2.
pub fn global_q(coin: &CoinState) -> Result<f64> {
    let m = coin.num_coins();
    if m < 2 {
        return Err(Error::TooFewCoins { num_coins: m });
    }
    let mut purity_sum = 0.0;
    for qubit in 1..=m {
        purity_sum += reduce(coin, &[qubit])?.purity();
    }
    Ok(2.0 * (1.0 - purity_sum / m as f64))
}

/// Per-site weight and Q over the lattice; `q` is `None` where the walker
/// carries no weight above `weight_threshold`.
#[derive(Debug, Clone, Serialize)]
pub struct SiteEntanglement {
    pub site: usize,
    pub weight: f64,
    pub q: Option<f64>,
}

/// Q of the artificially normalized per-site coin states (the lattice-wide
/// entanglement profile).
pub fn q_lattice_profile(
    state: &WalkState,
    weight_threshold: f64,
) -> Result<Vec<SiteEntanglement>> {
    if state.num_coins() < 2 {
        return Err(Error::TooFewCoins {
            num_coins: state.num_coins(),
        });
    }
    let mut profile = Vec::with_capacity(state.lattice_size());
    for site in 0..state.lattice_size() {
        match state.coin_state_at_with_threshold(site, weight_threshold) {
            Ok((coin, weight)) => profile.push(SiteEntanglement {
                site,
                weight,
                q: Some(global_q(&coin)?),
            }),
            Err(Error::UndefinedSite { weight, .. }) => profile.push(SiteEntanglement {
                site,
                weight,
                q: None,
            }),
            Err(other) => return Err(other),
        }
    }
    Ok(profile)
}
