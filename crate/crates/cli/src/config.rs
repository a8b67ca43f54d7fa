//! Run configuration: a TOML file with nested per-module sections, plus
//! repeatable `--set key.path=value` overrides (overrides win).

use std::fs;
use std::path::Path;

use serde::Deserialize;

use kreinlab::modes::Spacing;

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Seed for every randomized sweep; fixed seed means byte-identical
    /// output files.
    pub seed: u64,
    /// Worker threads for scan points; 0 picks the rayon default.
    pub threads: usize,
    pub grid: GridConfig,
    pub profile: ProfileConfig,
    pub fock: FockConfig,
    pub scan: ScanSection,
    pub pj: PjConfig,
    pub rs: RsConfig,
    pub weyl: WeylConfig,
    pub ccr: CcrConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 1,
            threads: 0,
            grid: GridConfig::default(),
            profile: ProfileConfig::default(),
            fock: FockConfig::default(),
            scan: ScanSection::default(),
            pj: PjConfig::default(),
            rs: RsConfig::default(),
            weyl: WeylConfig::default(),
            ccr: CcrConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub kmin: f64,
    pub kmax: f64,
    pub n_shells: usize,
    /// "log" or "linear"
    pub spacing: String,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            kmin: 1e-3,
            kmax: 1e3,
            n_shells: 4096,
            spacing: "log".into(),
        }
    }
}

impl GridConfig {
    pub fn spacing(&self) -> Result<Spacing, String> {
        match self.spacing.as_str() {
            "log" => Ok(Spacing::Log),
            "linear" => Ok(Spacing::Linear),
            other => Err(format!("unknown spacing '{other}' (expected log|linear)")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    /// "coulomb" or "screened"
    pub kind: String,
    pub e: f64,
    pub mu: f64,
    pub m: f64,
    pub t: f64,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            kind: "coulomb".into(),
            e: 1.0,
            mu: 0.01,
            m: 100.0,
            t: 0.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FockConfig {
    pub n_max: usize,
    /// Number of time-like modes in the dense oracle run.
    pub modes: usize,
    /// Upper bound for the random oracle amplitudes |α|.
    pub alpha_max: f64,
}

impl Default for FockConfig {
    fn default() -> Self {
        FockConfig {
            n_max: 12,
            modes: 3,
            alpha_max: 0.5,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    /// kmax values of the number scan (kmin and shell count come from
    /// [grid]).
    pub kmax_values: Vec<f64>,
    /// Overlap scan: shells added per decade of kmax growth.
    pub shells_per_decade: usize,
    /// Overlap scan: number of decades to extend kmax beyond kmin.
    pub decades: usize,
    /// Also dump the configured grid and profile as CSV.
    pub dump_profile: bool,
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection {
            kmax_values: vec![10.0, 100.0, 1000.0, 10000.0],
            shells_per_decade: 512,
            decades: 8,
            dump_profile: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PjConfig {
    pub eps: f64,
    pub points: usize,
    pub kmin: f64,
    pub kmax: f64,
    pub n_shells: usize,
}

impl Default for PjConfig {
    fn default() -> Self {
        PjConfig {
            eps: 0.05,
            points: 20,
            kmin: 1e-4,
            kmax: 1e3,
            n_shells: 8192,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RsConfig {
    pub n: usize,
    pub box_l: f64,
    pub dt: f64,
    pub steps: usize,
    /// Snapshot cadence in steps; 0 writes only the final state.
    pub snapshot_every: usize,
    /// "helicity" or "random"
    pub initial: String,
    /// Integer wavevector of the helicity initial condition.
    pub k_index: [i64; 3],
}

impl Default for RsConfig {
    fn default() -> Self {
        RsConfig {
            n: 32,
            box_l: 2.0 * std::f64::consts::PI,
            dt: 0.01,
            steps: 100,
            snapshot_every: 0,
            initial: "helicity".into(),
            k_index: [0, 0, 3],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeylConfig {
    pub n: usize,
    pub delta: f64,
    pub shift_sites: i64,
    /// α in units of 2π/L; integers are commensurate.
    pub alpha_cycles: Vec<f64>,
}

impl Default for WeylConfig {
    fn default() -> Self {
        WeylConfig {
            n: 256,
            delta: 0.1,
            shift_sites: 5,
            alpha_cycles: vec![1.0, 3.0, 1.37],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CcrConfig {
    pub dims: Vec<usize>,
    pub random_pairs: usize,
    pub n_max: usize,
    pub max_power: usize,
}

impl Default for CcrConfig {
    fn default() -> Self {
        CcrConfig {
            dims: vec![2, 4, 8, 16, 32],
            random_pairs: 100,
            n_max: 32,
            max_power: 3,
        }
    }
}

/// Load the config file (or defaults), apply `--set` overrides, deserialize.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config, String> {
    let mut value: toml::Value = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            text.parse()
                .map_err(|e| format!("config {} is not valid TOML: {e}", p.display()))?
        }
        None => toml::Value::Table(toml::value::Table::new()),
    };
    for item in overrides {
        apply_override(&mut value, item)?;
    }
    Config::deserialize(value).map_err(|e| format!("invalid configuration: {e}"))
}

fn apply_override(root: &mut toml::Value, item: &str) -> Result<(), String> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| format!("override '{item}' must have the form key.path=value"))?;
    let parsed: toml::Value = match format!("v = {raw}").parse::<toml::Value>() {
        Ok(toml::Value::Table(t)) => t.get("v").cloned().unwrap(),
        _ => toml::Value::String(raw.to_string()),
    };
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let table = node
            .as_table_mut()
            .ok_or_else(|| format!("override '{key}' descends into a non-table"))?;
        if i + 1 == parts.len() {
            table.insert((*part).to_string(), parsed);
            return Ok(());
        }
        node = table
            .entry((*part).to_string())
            .or_insert_with(|| toml::Value::Table(toml::value::Table::new()));
    }
    unreachable!("override path is never empty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_deserialize() {
        let cfg = load(None, &[]).unwrap();
        assert_eq!(cfg.fock.n_max, 12);
        assert_eq!(cfg.grid.n_shells, 4096);
    }

    #[test]
    fn overrides_win() {
        let cfg = load(
            None,
            &[
                "grid.kmin=1e-4".into(),
                "fock.n_max=16".into(),
                "profile.kind=\"screened\"".into(),
                "seed=99".into(),
            ],
        )
        .unwrap();
        assert_eq!(cfg.grid.kmin, 1e-4);
        assert_eq!(cfg.fock.n_max, 16);
        assert_eq!(cfg.profile.kind, "screened");
        assert_eq!(cfg.seed, 99);
    }

    #[test]
    fn bare_strings_pass_without_quotes() {
        let cfg = load(None, &["profile.kind=screened".into()]).unwrap();
        assert_eq!(cfg.profile.kind, "screened");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(load(None, &["grid.bogus=1".into()]).is_err());
    }
}
