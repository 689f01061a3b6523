//! Parsing of the `--state` argument: a catalog name with parameters
//! (`gammaGHZ:gamma=0.3`), a state file (`file:path`), or a seeded random
//! register (`random:coins=3`).

use std::collections::BTreeMap;
use std::fs;

use anyhow::{bail, Context, Result};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use coinwalk::catalog::{self, CatalogEntry, EntanglementClass};
use coinwalk::io::parse_state_file;
use coinwalk::walk::CoinState;

/// A resolved state: always a coin register, catalog metadata when known.
pub struct ResolvedState {
    pub label: String,
    pub coin: CoinState,
    pub entry: Option<CatalogEntry>,
}

fn parse_params(spec: &str) -> Result<BTreeMap<String, f64>> {
    let mut params = BTreeMap::new();
    if spec.is_empty() {
        return Ok(params);
    }
    for part in spec.split(',') {
        let (key, value) = part
            .split_once('=')
            .with_context(|| format!("expected key=value, got `{part}`"))?;
        let value: f64 = value
            .parse()
            .with_context(|| format!("bad numeric value in `{part}`"))?;
        params.insert(key.trim().to_string(), value);
    }
    Ok(params)
}

fn require(params: &BTreeMap<String, f64>, key: &str, state: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .with_context(|| format!("state `{state}` needs parameter `{key}`"))
}

/// Builds a catalog entry from `name:key=value,...`.
pub fn build_catalog_entry(name: &str, params: &BTreeMap<String, f64>) -> Result<CatalogEntry> {
    let entry = match name {
        "gammaGHZ" => catalog::gamma_ghz(require(params, "gamma", name)?)?,
        "psi6" => catalog::psi6(require(params, "delta", name)?)?,
        "psi78" => catalog::psi78(require(params, "delta", name)?)?,
        "phi1" => {
            let alpha3 = require(params, "alpha3", name)?;
            match (params.get("alpha1"), params.get("alpha2")) {
                (Some(&a1), Some(&a2)) => catalog::phi1(a1, a2, alpha3)?,
                (None, None) => catalog::Family::Phi1Alpha3.build(alpha3)?,
                _ => bail!("phi1 needs either alpha3 alone or all of alpha1, alpha2, alpha3"),
            }
        }
        "phi2" => {
            let beta1 = require(params, "beta1", name)?;
            match params.get("beta2") {
                Some(&beta2) => catalog::phi2(beta1, beta2)?,
                None => catalog::Family::Phi2.build(beta1)?,
            }
        }
        other => bail!(
            "unknown state `{other}`; expected one of gammaGHZ, psi6, psi78, phi1, phi2, \
             file:<path>, random:coins=M"
        ),
    };
    Ok(entry)
}

/// Resolves a `--state` spec. `seed` feeds the `random:` generator only.
pub fn resolve_state(spec: &str, seed: u64) -> Result<ResolvedState> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path).with_context(|| format!("reading `{path}`"))?;
        let coin = parse_state_file(&text)?;
        return Ok(ResolvedState {
            label: format!("file:{path}"),
            coin,
            entry: None,
        });
    }
    let (name, param_text) = match spec.split_once(':') {
        Some((n, p)) => (n, p),
        None => (spec, ""),
    };
    if name == "random" {
        let params = parse_params(param_text)?;
        let coins = require(&params, "coins", "random")? as usize;
        if !(1..=12).contains(&coins) {
            bail!("random state needs coins in 1..=12");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coin = CoinState::random(coins, &mut rng);
        return Ok(ResolvedState {
            label: format!("random:coins={coins},seed={seed}"),
            coin,
            entry: None,
        });
    }
    let params = parse_params(param_text)?;
    let entry = build_catalog_entry(name, &params)?;
    Ok(ResolvedState {
        label: entry.name.clone(),
        coin: entry.coin.clone(),
        entry: Some(entry),
    })
}

/// Catalog-free placeholder entry for law checks on file/random states.
pub fn entry_for_checks(state: &ResolvedState) -> CatalogEntry {
    state.entry.clone().unwrap_or_else(|| CatalogEntry {
        name: state.label.clone(),
        coin: state.coin.clone(),
        params: BTreeMap::new(),
        entanglement_class: EntanglementClass::Pure,
        expected_ic_squared: vec![f64::NAN; state.coin.num_coins()],
    })
}
