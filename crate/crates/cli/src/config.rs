use std::path::Path;

use serde::Deserialize;

use crate::CliError;

/// Settings that may come from a TOML file. Command-line flags win over
/// these, and these win over built-in defaults.
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub policy: Option<String>,
    pub divisor: Option<f64>,
    pub step: Option<f64>,
    pub best_gain: Option<f64>,
    pub max_uniform_depth: Option<u32>,
    pub max_extension: Option<u32>,
    pub budget: Option<u64>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
    }
}

/// Search settings after merging flags, file and defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub policy: String,
    pub divisor: Option<f64>,
    pub step: f64,
    pub best_gain: Option<f64>,
    pub max_uniform_depth: u32,
    pub max_extension: u32,
    pub budget: Option<u64>,
    pub jobs: usize,
}

/// The overridable knobs as given on the command line.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub policy: Option<String>,
    pub divisor: Option<f64>,
    pub step: Option<f64>,
    pub best_gain: Option<f64>,
    pub max_uniform_depth: Option<u32>,
    pub max_extension: Option<u32>,
    pub budget: Option<u64>,
    pub jobs: Option<usize>,
}

pub struct Defaults {
    pub policy: &'static str,
    pub max_uniform_depth: u32,
    pub max_extension: u32,
    pub budget: Option<u64>,
}

pub fn resolve(flags: &Overrides, file: &FileConfig, defaults: &Defaults) -> Resolved {
    Resolved {
        policy: flags
            .policy
            .clone()
            .or_else(|| file.policy.clone())
            .unwrap_or_else(|| defaults.policy.to_string()),
        divisor: flags.divisor.or(file.divisor),
        step: flags
            .step
            .or(file.step)
            .unwrap_or(entroply::policy::DEFAULT_STEP),
        best_gain: flags.best_gain.or(file.best_gain),
        max_uniform_depth: flags
            .max_uniform_depth
            .or(file.max_uniform_depth)
            .unwrap_or(defaults.max_uniform_depth),
        max_extension: flags
            .max_extension
            .or(file.max_extension)
            .unwrap_or(defaults.max_extension),
        budget: flags.budget.or(file.budget).or(defaults.budget),
        jobs: flags.jobs.or(file.jobs).unwrap_or(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file: FileConfig =
            toml::from_str("policy = \"uniform\"\nmax_uniform_depth = 3\nbudget = 10\n").unwrap();
        let flags = Overrides {
            max_uniform_depth: Some(5),
            ..Default::default()
        };
        let defaults = Defaults {
            policy: "ers",
            max_uniform_depth: 4,
            max_extension: 12,
            budget: None,
        };
        let r = resolve(&flags, &file, &defaults);
        assert_eq!(r.policy, "uniform");
        assert_eq!(r.max_uniform_depth, 5);
        assert_eq!(r.budget, Some(10));
        assert_eq!(r.max_extension, 12);
        assert_eq!(r.step, 6.0);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<FileConfig>("polcy = \"ers\"").is_err());
    }
}
