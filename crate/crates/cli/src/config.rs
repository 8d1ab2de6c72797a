use std::path::Path;

use rhrel::lambda_linalg::{Context, Tolerances};
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

pub const CONFIG_ENV: &str = "RHREL_CONFIG";

/// Settings read from the file named by `RHREL_CONFIG`; flags override them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub cluster_tol: f64,
    pub zero_tol: f64,
    pub check_tol: f64,
    pub default_trunc: usize,
    pub seed: u64,
    pub exp: String,
}

impl Default for Config {
    fn default() -> Self {
        let tol = Tolerances::default();
        Config {
            cluster_tol: tol.cluster_tol,
            zero_tol: tol.zero_tol,
            check_tol: tol.check_tol,
            default_trunc: 3,
            seed: 20_240_917,
            exp: "taylor".into(),
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Failure::parse(path, e))
    }

    /// The file named by `RHREL_CONFIG`, or defaults when it is unset.
    pub fn from_env() -> Result<Config, Failure> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Config::load(Path::new(&p)),
            _ => Ok(Config::default()),
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            cluster_tol: self.cluster_tol,
            zero_tol: self.zero_tol,
            check_tol: self.check_tol,
        }
    }

    pub fn validate(&self) -> Result<(), Failure> {
        self.tolerances().validate()?;
        if self.default_trunc == 0 {
            return Err(Failure::usage("default_trunc must be positive"));
        }
        Ok(())
    }

    pub fn context(&self) -> Result<Context, Failure> {
        self.validate()?;
        Ok(Context::with_strategy(self.tolerances(), &self.exp)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let c: Config = serde_json::from_str(r#"{"check_tol": 1e-6}"#).unwrap();
        assert_eq!(c.check_tol, 1e-6);
        assert_eq!(c.zero_tol, Config::default().zero_tol);
        assert!(serde_json::from_str::<Config>(r#"{"chek_tol": 1}"#).is_err());
    }

    #[test]
    fn bad_tolerance_is_rejected() {
        let c = Config {
            cluster_tol: 2.0,
            ..Config::default()
        };
        assert_eq!(c.validate().unwrap_err().code(), 2);
        let c = Config {
            exp: "pade".into(),
            ..Config::default()
        };
        assert_eq!(c.context().unwrap_err().kind(), "UnknownStrategy");
    }
}
