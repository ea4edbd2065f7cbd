//! Run configuration. Precedence: built-in defaults, then the config file, then flags.
//!
//! The file is flat `key = value` text; `#` starts a comment; lists are comma separated,
//! e.g. `t = 8,16,32,64`. Keys match the long flag names (`N`, `out_dir` or `out-dir`, ...).

use crate::CliError;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutFormat {
    Json,
    Csv,
}

impl FromStr for OutFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(OutFormat::Json),
            "csv" => Ok(OutFormat::Csv),
            _ => Err(CliError::Usage(format!("output format must be json or csv, got {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub primes: Vec<u64>,
    pub n: u64,
    /// Frequencies for the oscillatory slope fits.
    pub t: Vec<f64>,
    /// Frequencies for the spherical envelope and `p̂` sweeps.
    pub t_spherical: Vec<f64>,
    /// Spectral distances, in units of `β`, for the off-spectrum sweep.
    pub beta: Vec<f64>,
    /// Number of radii in the envelope sample grid.
    pub grid: usize,
    pub tol: f64,
    pub out: OutFormat,
    pub out_dir: PathBuf,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: None,
            primes: vec![2, 3, 5],
            n: 10,
            t: vec![8.0, 16.0, 32.0, 64.0],
            t_spherical: vec![10.0, 20.0, 40.0],
            beta: vec![1.0, 2.0, 3.0, 4.0],
            grid: 12,
            tol: 1e-8,
            out: OutFormat::Json,
            out_dir: PathBuf::from("out"),
            parallel: false,
        }
    }
}

fn parse_one<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim().parse().map_err(|_| CliError::Usage(format!("{key}: cannot parse {v:?}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').map(|x| parse_one(key, x)).collect()
}

fn parse_bool(key: &str, v: &str) -> Result<bool, CliError> {
    match v.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Usage(format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn is_geometric(t: &[f64]) -> bool {
    t.len() >= 3 && t.iter().all(|&x| x > 0.0) && {
        let r = t[1] / t[0];
        r > 1.0 && t.windows(2).all(|w| (w[1] / w[0] - r).abs() <= 1e-9 * r)
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key.replace('-', "_").as_str() {
            "seed" => self.seed = Some(parse_one(key, value)?),
            "primes" => self.primes = parse_list(key, value)?,
            "N" | "n" => self.n = parse_one(key, value)?,
            "t" => self.t = parse_list(key, value)?,
            "t_spherical" => self.t_spherical = parse_list(key, value)?,
            "beta" => self.beta = parse_list(key, value)?,
            "grid" => self.grid = parse_one(key, value)?,
            "tol" => self.tol = parse_one(key, value)?,
            "out" => self.out = value.trim().parse()?,
            "out_dir" => self.out_dir = PathBuf::from(value.trim()),
            "parallel" => self.parallel = parse_bool(key, value)?,
            _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", i + 1)))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Usage(m));
        if self.primes.is_empty() || self.primes.iter().any(|&p| !flatamp::hecke::is_prime(p)) {
            return bad(format!("primes must be a nonempty list of primes, got {:?}", self.primes));
        }
        for (name, t) in [("t", &self.t), ("t_spherical", &self.t_spherical)] {
            if !is_geometric(t) {
                return bad(format!("{name} must be an increasing geometric list with at least 3 entries, got {t:?}"));
            }
        }
        if self.t.iter().any(|&t| t > flatamp::spherical::oscillatory::MAX_T) {
            return bad(format!("t above {} is outside the supported range", flatamp::spherical::oscillatory::MAX_T));
        }
        if self.beta.len() < 2 || self.beta.iter().any(|&b| !(b > 0.0)) || self.beta.windows(2).any(|w| w[1] <= w[0]) {
            return bad(format!("beta must be an increasing list of at least 2 positive values, got {:?}", self.beta));
        }
        if self.grid < 2 {
            return bad("grid must be at least 2".into());
        }
        if !(self.tol > 0.0 && self.tol < 1e-3) {
            return bad(format!("tol must lie in (0, 1e-3), got {}", self.tol));
        }
        Ok(())
    }

    /// The seed, which every randomized suite requires.
    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Usage("this suite is randomized: pass --seed or set seed in the config".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_syntax() {
        let mut c = RunConfig::default();
        c.apply_text("# run\nseed = 42\nt = 4, 8,16 # slope\nprimes=2,3\nout = csv\nout-dir = x\n\nparallel = true\n").unwrap();
        assert_eq!(c.seed, Some(42));
        assert_eq!(c.t, vec![4.0, 8.0, 16.0]);
        assert_eq!(c.primes, vec![2, 3]);
        assert_eq!(c.out, OutFormat::Csv);
        assert_eq!(c.out_dir, PathBuf::from("x"));
        assert!(c.parallel);
        c.validate().unwrap();
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("colour = red").is_err());
        assert!(c.apply_text("seed").is_err());
        assert!(c.apply_text("seed = -1").is_err());
        let mut c = RunConfig::default();
        c.set("t", "8,16").unwrap();
        assert!(c.validate().is_err());
        c.set("t", "8,16,30").unwrap();
        assert!(c.validate().is_err());
        c.set("t", "32,64,128").unwrap();
        assert!(c.validate().is_err());
        let mut c = RunConfig::default();
        c.set("primes", "2,4").unwrap();
        assert!(c.validate().is_err());
        assert!(RunConfig::default().require_seed().is_err());
    }
}
