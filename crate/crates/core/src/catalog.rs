//! The five parameterized initial coin states used in the experiments,
//! together with their norm identities, entanglement classification, and
//! closed-form squared i-concurrences.
//!
//! "Pure" entanglement means the state carries only one kind of multipartite
//! entanglement (only 2-qubit, or only 3-qubit); the mean law holds exactly
//! for that class, while the mixed-class states walk with mean zero.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::walk::CoinState;

/// Coarse classification of an entry: pure (one kind of multipartite
/// entanglement) or mixed (several kinds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntanglementClass {
    Pure,
    Mixed,
}

/// A named initial coin state with its parameters and expected per-qubit
/// squared i-concurrences.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub coin: CoinState,
    pub params: BTreeMap<String, f64>,
    pub entanglement_class: EntanglementClass,
    /// Closed-form IC_i^2 for qubits 1..=M.
    pub expected_ic_squared: Vec<f64>,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn params_from(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// gamma |000> + sqrt(1 - gamma^2) |111>; IC_i^2 = 4 gamma^2 (1 - gamma^2)
/// for every qubit.
pub fn gamma_ghz(gamma: f64) -> Result<CatalogEntry> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParam(format!(
            "gamma = {gamma} outside [0, 1]"
        )));
    }
    let mut amps = vec![re(0.0); 8];
    amps[0b000] = re(gamma);
    amps[0b111] = re((1.0 - gamma * gamma).sqrt());
    let coin = CoinState::new(amps, 3)?;
    let ic2 = 4.0 * gamma * gamma * (1.0 - gamma * gamma);
    Ok(CatalogEntry {
        name: "gammaGHZ".into(),
        coin,
        params: params_from(&[("gamma", gamma)]),
        entanglement_class: EntanglementClass::Pure,
        expected_ic_squared: vec![ic2; 3],
    })
}

/// The kappa_1, kappa_2 amplitudes of the spin-chain eigenstate family:
/// eta = sqrt(12 + Delta (Delta - 4)), chi = eta + Delta - 2,
/// kappa_1 = sqrt(chi) / (2 sqrt(eta)), kappa_2 = -2 / (sqrt(chi) sqrt(eta)).
///
/// eta and chi are positive for every real Delta, and the norm identity
/// 2 kappa_1^2 + kappa_2^2 = 1 holds exactly.
pub fn psi6_kappas(delta: f64) -> (f64, f64, f64, f64) {
    let eta = (12.0 + delta * (delta - 4.0)).sqrt();
    let chi = eta + delta - 2.0;
    let kappa1 = chi.sqrt() / (2.0 * eta.sqrt());
    let kappa2 = -2.0 / (chi.sqrt() * eta.sqrt());
    (eta, chi, kappa1, kappa2)
}

/// kappa_1 |001> + kappa_2 |010> + kappa_1 |100>; pure 2-qubit entanglement.
/// IC_{1,3}^2 = 1 - kappa_2^4 and IC_2^2 = 4 (kappa_2^2 - kappa_2^4).
pub fn psi6(delta: f64) -> Result<CatalogEntry> {
    let (eta, chi, kappa1, kappa2) = psi6_kappas(delta);
    let mut amps = vec![re(0.0); 8];
    amps[0b001] = re(kappa1);
    amps[0b010] = re(kappa2);
    amps[0b100] = re(kappa1);
    let coin = CoinState::new(amps, 3)?;
    let k2s = kappa2 * kappa2;
    let side = 1.0 - k2s * k2s;
    let middle = 4.0 * (k2s - k2s * k2s);
    Ok(CatalogEntry {
        name: "psi6".into(),
        coin,
        params: params_from(&[
            ("delta", delta),
            ("eta", eta),
            ("chi", chi),
            ("kappa1", kappa1),
            ("kappa2", kappa2),
        ]),
        entanglement_class: EntanglementClass::Pure,
        expected_ic_squared: vec![side, middle, side],
    })
}

/// The equal superposition (kappa_1 |001> + kappa_2 |010> + kappa_1 |011> +
/// kappa_1 |100> + kappa_2 |101> + kappa_1 |110>) / sqrt 2; carries both
/// 2-qubit and 3-qubit entanglement, and its walk mean vanishes for every
/// Delta. The IC^2 values follow from the reductions
/// rho_2 = ((1/2, kappa_1^2), (kappa_1^2, 1/2)) and
/// rho_{1,3} = ((1/2, kappa_1 kappa_2), (kappa_1 kappa_2, 1/2)).
pub fn psi78(delta: f64) -> Result<CatalogEntry> {
    let (eta, chi, kappa1, kappa2) = psi6_kappas(delta);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![re(0.0); 8];
    amps[0b001] = re(kappa1 * inv_sqrt2);
    amps[0b010] = re(kappa2 * inv_sqrt2);
    amps[0b011] = re(kappa1 * inv_sqrt2);
    amps[0b100] = re(kappa1 * inv_sqrt2);
    amps[0b101] = re(kappa2 * inv_sqrt2);
    amps[0b110] = re(kappa1 * inv_sqrt2);
    let coin = CoinState::new(amps, 3)?;
    let k1s = kappa1 * kappa1;
    let side = 1.0 - 4.0 * k1s * kappa2 * kappa2;
    let middle = 1.0 - 4.0 * k1s * k1s;
    Ok(CatalogEntry {
        name: "psi78".into(),
        coin,
        params: params_from(&[
            ("delta", delta),
            ("eta", eta),
            ("chi", chi),
            ("kappa1", kappa1),
            ("kappa2", kappa2),
        ]),
        entanglement_class: EntanglementClass::Mixed,
        expected_ic_squared: vec![side, middle, side],
    })
}

/// alpha_1 |1110> + alpha_2 |1011> + alpha_3 |0111> - alpha_3 |1101> with
/// alpha_1^2 + alpha_2^2 + 2 alpha_3^2 = 1; only twopartite entangled.
/// IC_{1,3}^2 = 4 (alpha_3^2 - alpha_3^4); qubits 2 and 4 have the diagonal
/// reductions diag(alpha_2^2, .) and diag(alpha_1^2, .).
pub fn phi1(alpha1: f64, alpha2: f64, alpha3: f64) -> Result<CatalogEntry> {
    let norm_sqr = alpha1 * alpha1 + alpha2 * alpha2 + 2.0 * alpha3 * alpha3;
    if (norm_sqr - 1.0).abs() > 1e-9 {
        return Err(Error::NormViolation {
            norm_sqr,
            tol: 1e-9,
        });
    }
    let mut amps = vec![re(0.0); 16];
    amps[0b1110] = re(alpha1);
    amps[0b1011] = re(alpha2);
    amps[0b0111] = re(alpha3);
    amps[0b1101] = re(-alpha3);
    let coin = CoinState::new(amps, 4)?;
    let a3s = alpha3 * alpha3;
    let outer = 4.0 * (a3s - a3s * a3s);
    let q2 = 1.0 - (alpha2 * alpha2 - alpha1 * alpha1 - 2.0 * a3s).powi(2);
    let q4 = 1.0 - (alpha1 * alpha1 - alpha2 * alpha2 - 2.0 * a3s).powi(2);
    Ok(CatalogEntry {
        name: "phi1".into(),
        coin,
        params: params_from(&[("alpha1", alpha1), ("alpha2", alpha2), ("alpha3", alpha3)]),
        entanglement_class: EntanglementClass::Pure,
        expected_ic_squared: vec![outer, q2, outer, q4],
    })
}

/// beta_1 (|1100> + |0110> - |0011> - |1001>) + beta_2 (|1010> - |0101>)
/// with 4 beta_1^2 + 2 beta_2^2 = 1; mixed entanglement, IC_i^2 = 1 for
/// every qubit and the walk mean vanishes.
pub fn phi2(beta1: f64, beta2: f64) -> Result<CatalogEntry> {
    let norm_sqr = 4.0 * beta1 * beta1 + 2.0 * beta2 * beta2;
    if (norm_sqr - 1.0).abs() > 1e-9 {
        return Err(Error::NormViolation {
            norm_sqr,
            tol: 1e-9,
        });
    }
    let mut amps = vec![re(0.0); 16];
    amps[0b0011] = re(-beta1);
    amps[0b0110] = re(beta1);
    amps[0b1001] = re(-beta1);
    amps[0b1100] = re(beta1);
    amps[0b0101] = re(-beta2);
    amps[0b1010] = re(beta2);
    let coin = CoinState::new(amps, 4)?;
    Ok(CatalogEntry {
        name: "phi2".into(),
        coin,
        params: params_from(&[("beta1", beta1), ("beta2", beta2)]),
        entanglement_class: EntanglementClass::Mixed,
        expected_ic_squared: vec![1.0; 4],
    })
}

/// Fixed alpha_3 used by the [`Family::Phi1Ratio`] sweep axis.
pub const PHI1_RATIO_ALPHA3: f64 = 0.5;

/// Sweepable one-parameter families over the catalog states.
///
/// The four-qubit families resolve the remaining amplitudes from the norm
/// constraint: `Phi1Alpha3` splits the residue equally between alpha_1 and
/// alpha_2, `Phi1Ratio` fixes alpha_3 = 1/2 and sweeps the alpha_1 fraction,
/// and `Phi2` solves beta_2 from beta_1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    GammaGhz,
    Psi6,
    Psi78,
    Phi1Alpha3,
    Phi1Ratio,
    Phi2,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::GammaGhz,
        Family::Psi6,
        Family::Psi78,
        Family::Phi1Alpha3,
        Family::Phi1Ratio,
        Family::Phi2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::GammaGhz => "gammaGHZ",
            Family::Psi6 => "psi6",
            Family::Psi78 => "psi78",
            Family::Phi1Alpha3 => "phi1",
            Family::Phi1Ratio => "phi1b",
            Family::Phi2 => "phi2",
        }
    }

    pub fn param_name(&self) -> &'static str {
        match self {
            Family::GammaGhz => "gamma",
            Family::Psi6 | Family::Psi78 => "delta",
            Family::Phi1Alpha3 => "alpha3",
            Family::Phi1Ratio => "ratio",
            Family::Phi2 => "beta1",
        }
    }

    pub fn num_coins(&self) -> usize {
        match self {
            Family::GammaGhz | Family::Psi6 | Family::Psi78 => 3,
            _ => 4,
        }
    }

    /// Whether the family is in the pure-entanglement class on which the
    /// mean law holds.
    pub fn is_pure(&self) -> bool {
        !matches!(self, Family::Psi78 | Family::Phi2)
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// Default sweep grid: 101 uniform points over the natural parameter
    /// range, except the Delta families which use the wider 201-point grid
    /// over [-10, 10].
    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            Family::GammaGhz => uniform_grid(0.0, 1.0, 101),
            Family::Psi6 | Family::Psi78 => uniform_grid(-10.0, 10.0, 201),
            Family::Phi1Alpha3 => uniform_grid(0.0, std::f64::consts::FRAC_1_SQRT_2, 101),
            Family::Phi1Ratio => uniform_grid(0.0, 1.0, 101),
            Family::Phi2 => uniform_grid(0.0, 0.5, 101),
        }
    }

    pub fn build(&self, param: f64) -> Result<CatalogEntry> {
        match self {
            Family::GammaGhz => gamma_ghz(param),
            Family::Psi6 => psi6(param),
            Family::Psi78 => psi78(param),
            Family::Phi1Alpha3 => {
                let residue = (1.0 - 2.0 * param * param).max(0.0);
                if 2.0 * param * param > 1.0 + 1e-12 {
                    return Err(Error::InvalidParam(format!(
                        "alpha3 = {param} exceeds 1/sqrt(2)"
                    )));
                }
                let shared = (residue / 2.0).sqrt();
                phi1(shared, shared, param)
            }
            Family::Phi1Ratio => {
                if !(0.0..=1.0).contains(&param) {
                    return Err(Error::InvalidParam(format!(
                        "ratio = {param} outside [0, 1]"
                    )));
                }
                let alpha3 = PHI1_RATIO_ALPHA3;
                let residue = 1.0 - 2.0 * alpha3 * alpha3;
                let alpha1 = param * residue.sqrt();
                let alpha2 = (residue * (1.0 - param * param)).max(0.0).sqrt();
                phi1(alpha1, alpha2, alpha3)
            }
            Family::Phi2 => {
                if !(0.0..=0.5).contains(&param) {
                    return Err(Error::InvalidParam(format!(
                        "beta1 = {param} outside [0, 1/2]"
                    )));
                }
                let beta2 = ((1.0 - 4.0 * param * param) / 2.0).max(0.0).sqrt();
                phi2(param, beta2)
            }
        }
    }
}

/// `count` uniformly spaced points from `min` to `max` inclusive.
pub fn uniform_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "grid needs at least two points");
    let step = (max - min) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                max
            } else {
                min + step * i as f64
            }
        })
        .collect()
}
