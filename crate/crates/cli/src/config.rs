use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use vlab_core::engines::{FormulaId, TruncationPolicy};

use crate::CliError;

pub const DEFAULT_CONFIG: &str = include_str!("../config/vlab.conf");

const FORMULAS: [FormulaId; 9] = [
    FormulaId::Theta,
    FormulaId::Poisson,
    FormulaId::PoissonZeta,
    FormulaId::MellinId,
    FormulaId::VoronoiDivisor,
    FormulaId::VoronoiCircle,
    FormulaId::Gl2,
    FormulaId::Gl3,
    FormulaId::SmoothedCircle,
];

/// Engine groups that share a truncation policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    Poisson,
    Classical,
    Gl2,
    Gl3,
}

impl Group {
    const ALL: [Group; 4] = [Group::Poisson, Group::Classical, Group::Gl2, Group::Gl3];

    fn name(self) -> &'static str {
        match self {
            Group::Poisson => "poisson",
            Group::Classical => "classical",
            Group::Gl2 => "gl2",
            Group::Gl3 => "gl3",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds {
    pub circle_exponent: (f64, f64),
    pub divisor_exponent_max: f64,
    pub hardy_min_ratio: f64,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub tolerances: BTreeMap<FormulaId, f64>,
    pub truncation: BTreeMap<Group, TruncationPolicy>,
    pub thresholds: Thresholds,
    pub cache_dir: PathBuf,
    pub format: Format,
    pub threads: usize,
    pub seed: u64,
    pub timing: bool,
}

/// Parses `key = value` lines into a map; later keys replace earlier ones.
pub fn parse_flat(text: &str, origin: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{origin}:{}: expected key = value, got '{line}'", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn take<T: std::str::FromStr>(map: &mut BTreeMap<String, String>, key: &str) -> Result<T, CliError> {
    let raw = map.remove(key).ok_or_else(|| CliError::Usage(format!("config is missing '{key}'")))?;
    raw.parse().map_err(|_| CliError::Usage(format!("config key '{key}' has invalid value '{raw}'")))
}

fn positive(key: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("config key '{key}' must be positive, got {v}")))
    }
}

impl RunConfig {
    /// Builds the configuration from the embedded defaults, then an optional
    /// file, then `key=value` overrides, in that order of precedence.
    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut map = parse_flat(DEFAULT_CONFIG, "built-in config")?;
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            for (k, v) in parse_flat(&text, &path.display().to_string())? {
                if !map.contains_key(&k) {
                    return Err(CliError::Usage(format!("{}: unknown key '{k}'", path.display())));
                }
                map.insert(k, v);
            }
        }
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got '{o}'")))?;
            let k = k.trim();
            if !map.contains_key(k) {
                return Err(CliError::Usage(format!("--set: unknown key '{k}'")));
            }
            map.insert(k.to_string(), v.trim().to_string());
        }
        Self::from_map(map)
    }

    fn from_map(mut map: BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut tolerances = BTreeMap::new();
        for f in FORMULAS {
            let key = format!("tolerance.{}", f.name());
            tolerances.insert(f, positive(&key, take(&mut map, &key)?)?);
        }
        let mut truncation = BTreeMap::new();
        for g in Group::ALL {
            let tol_key = format!("truncation.{}.tail_tol", g.name());
            let tol = positive(&tol_key, take(&mut map, &tol_key)?)?;
            let max_terms: usize = take(&mut map, &format!("truncation.{}.max_terms", g.name()))?;
            let policy = TruncationPolicy::tail_bound(tol, max_terms).map_err(|e| CliError::Usage(e.to_string()))?;
            truncation.insert(g, policy);
        }
        let thresholds = Thresholds {
            circle_exponent: (take(&mut map, "experiment.circle.exponent_min")?, take(&mut map, "experiment.circle.exponent_max")?),
            divisor_exponent_max: take(&mut map, "experiment.divisor.exponent_max")?,
            hardy_min_ratio: take(&mut map, "experiment.hardy.min_ratio")?,
        };
        let format = match take::<String>(&mut map, "format")?.as_str() {
            "json" => Format::Json,
            "csv" => Format::Csv,
            other => return Err(CliError::Usage(format!("format must be json or csv, got '{other}'"))),
        };
        let threads: usize = take(&mut map, "threads")?;
        if threads == 0 {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        let config = RunConfig {
            tolerances,
            truncation,
            thresholds,
            cache_dir: PathBuf::from(take::<String>(&mut map, "cache_dir")?),
            format,
            threads,
            seed: take(&mut map, "seed")?,
            timing: take(&mut map, "timing")?,
        };
        if let Some(k) = map.keys().next() {
            return Err(CliError::Usage(format!("unknown config key '{k}'")));
        }
        Ok(config)
    }

    pub fn tolerance(&self, f: FormulaId) -> f64 {
        self.tolerances[&f]
    }

    pub fn policy(&self, g: Group) -> &TruncationPolicy {
        &self.truncation[&g]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_defaults_parse() {
        let c = RunConfig::load(None, &[]).unwrap();
        assert_eq!(c.tolerance(FormulaId::Gl3), 1e-3);
        assert_eq!(c.tolerance(FormulaId::Theta), 1e-12);
        assert_eq!(c.threads, 1);
        assert_eq!(c.format, Format::Json);
        assert!(c.timing);
    }

    #[test]
    fn overrides_and_errors() {
        let c = RunConfig::load(None, &["tolerance.gl2=1e-6".into(), "format=csv".into()]).unwrap();
        assert_eq!(c.tolerance(FormulaId::Gl2), 1e-6);
        assert_eq!(c.format, Format::Csv);
        for bad in ["tolerance.gl2=-1", "threads=0", "no.such.key=1", "format=xml", "seed"] {
            assert!(RunConfig::load(None, &[bad.into()]).is_err(), "{bad}");
        }
    }

    #[test]
    fn file_layer_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# comment\n\ntolerance.theta = 1e-10\n").unwrap();
        assert_eq!(RunConfig::load(Some(&path), &[]).unwrap().tolerance(FormulaId::Theta), 1e-10);
        std::fs::write(&path, "tolerance.thta = 1e-10\n").unwrap();
        assert!(RunConfig::load(Some(&path), &[]).is_err());
        std::fs::write(&path, "just words\n").unwrap();
        assert!(RunConfig::load(Some(&path), &[]).is_err());
    }
}
