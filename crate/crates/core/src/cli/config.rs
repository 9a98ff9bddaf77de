//! Battery configuration read from TOML.
//!
//! Matrices are row strings of `0`/`1`, finite maps are index lists and
//! rationals are `"p/q"` strings.

use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use super::CliError;
use crate::metric::FinitePointSpace;
use crate::properties::{Budget, Property, System};
use crate::scalar::Scalar;
use crate::systems::{FiniteSystem, PlSystem, ShiftSystem};
use crate::Rational;

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BatteryConfig {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub budget: BudgetConfig,
    /// Check identifiers; absent means classification plus all four equivalence checks.
    #[serde(default)]
    pub checks: Option<Vec<String>>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default, rename = "system")]
    pub systems: Vec<SystemConfig>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub level: Option<usize>,
    pub horizon: Option<u64>,
    pub k_max: Option<u64>,
    pub n_max: Option<u64>,
    pub cap: Option<usize>,
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SystemConfig {
    pub id: String,
    #[serde(flatten)]
    pub spec: SystemSpec,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SystemSpec {
    /// A self-map of `0..n`, discrete metric unless `distances` is given.
    Finite {
        map: Vec<usize>,
        #[serde(default)]
        labels: Option<Vec<String>>,
        #[serde(default)]
        distances: Option<Vec<Vec<String>>>,
    },
    /// A self-map of `0..points` drawn from the battery seed.
    RandomFinite { points: usize },
    Shift {
        #[serde(default)]
        alphabet: Option<Vec<String>>,
        matrix: Vec<String>,
    },
    Pl { breakpoints: Vec<String>, values: Vec<String> },
}

/// One selectable check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckId {
    Classify,
    Property(Property),
    TheoremMain,
    LemmaWm,
    LemmaExact,
    Corollary,
}

impl CheckId {
    pub const DEFAULT: [CheckId; 5] =
        [CheckId::Classify, CheckId::TheoremMain, CheckId::LemmaWm, CheckId::LemmaExact, CheckId::Corollary];

    pub fn id(self) -> String {
        match self {
            CheckId::Classify => "classify".into(),
            CheckId::Property(p) => p.id().into(),
            CheckId::TheoremMain => "theorem-main".into(),
            CheckId::LemmaWm => "lemma-wm".into(),
            CheckId::LemmaExact => "lemma-exact".into(),
            CheckId::Corollary => "corollary".into(),
        }
    }

    pub fn is_equivalence(self) -> bool {
        matches!(self, CheckId::TheoremMain | CheckId::LemmaWm | CheckId::LemmaExact | CheckId::Corollary)
    }
}

impl FromStr for CheckId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "classify" => CheckId::Classify,
            "theorem-main" => CheckId::TheoremMain,
            "lemma-wm" => CheckId::LemmaWm,
            "lemma-exact" => CheckId::LemmaExact,
            "corollary" => CheckId::Corollary,
            other => CheckId::Property(
                Property::from_str(other).map_err(|_| CliError::Config(format!("unknown check {other:?}")))?,
            ),
        })
    }
}

/// A validated battery ready to run.
#[derive(Debug, Clone, PartialEq)]
pub struct Battery {
    pub seed: u64,
    pub budget: Budget,
    pub checks: Vec<CheckId>,
    pub output: Option<PathBuf>,
    pub systems: Vec<(String, System<Rational>)>,
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub level: Option<usize>,
    pub horizon: Option<u64>,
    pub k_max: Option<u64>,
    pub cap: Option<usize>,
    pub depth: Option<u32>,
}

impl BatteryConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self, overrides: &Overrides) -> Result<Battery, CliError> {
        if self.systems.is_empty() {
            return Err(CliError::Config("the battery lists no systems".into()));
        }
        let mut ids = std::collections::HashSet::new();
        for s in &self.systems {
            if !ids.insert(s.id.as_str()) {
                return Err(CliError::Config(format!("duplicate system id {:?}", s.id)));
            }
        }
        let b = &self.budget;
        let defaults = Budget::default();
        let budget = Budget {
            level: overrides.level.or(b.level).unwrap_or(defaults.level),
            horizon: overrides.horizon.or(b.horizon),
            k_max: overrides.k_max.or(b.k_max),
            n_max: b.n_max,
            cap: overrides.cap.or(b.cap).unwrap_or(defaults.cap),
            depth: overrides.depth.or(b.depth).unwrap_or(defaults.depth),
        };
        let positive = [
            ("level", budget.level as u64),
            ("horizon", budget.horizon.unwrap_or(1)),
            ("k_max", budget.k_max.unwrap_or(1)),
            ("n_max", budget.n_max.unwrap_or(1)),
            ("cap", budget.cap as u64),
            ("depth", budget.depth as u64),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(CliError::Config(format!("budget {name} must be positive")));
        }
        let checks = match &self.checks {
            None => CheckId::DEFAULT.to_vec(),
            Some(list) => list.iter().map(|c| c.parse()).collect::<Result<_, _>>()?,
        };
        let seed = overrides.seed.or(self.seed).unwrap_or(DEFAULT_SEED);
        let systems = self
            .systems
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let sys = s.spec.build(seed, i).map_err(|e| CliError::Config(format!("system {:?}: {e}", s.id)))?;
                Ok((s.id.clone(), sys))
            })
            .collect::<Result<_, CliError>>()?;
        Ok(Battery { seed, budget, checks, output: self.output.clone(), systems })
    }
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    Rational::parse_scalar(text).ok_or_else(|| format!("{text:?} is not a rational of the form p/q"))
}

fn parse_rationals(texts: &[String]) -> Result<Vec<Rational>, String> {
    texts.iter().map(|t| parse_rational(t)).collect()
}

impl SystemSpec {
    /// Builds the system; `index` separates the random streams of different entries.
    pub fn build(&self, seed: u64, index: usize) -> Result<System<Rational>, String> {
        match self {
            SystemSpec::Finite { map, labels, distances } => {
                let sys = match distances {
                    None => {
                        if labels.is_some() {
                            return Err("labels need an explicit distance table".into());
                        }
                        FiniteSystem::discrete(map.clone())
                    }
                    Some(rows) => {
                        let rows = rows.iter().map(|r| parse_rationals(r)).collect::<Result<Vec<_>, _>>()?;
                        let labels = labels.clone().unwrap_or_else(|| (0..rows.len()).map(|i| i.to_string()).collect());
                        let space = FinitePointSpace::new(labels, rows).map_err(|e| e.to_string())?;
                        FiniteSystem::new(space, map.clone())
                    }
                };
                sys.map(System::Finite).map_err(|e| e.to_string())
            }
            SystemSpec::RandomFinite { points } => {
                if *points == 0 {
                    return Err("points must be positive".into());
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index as u64);
                let map = (0..*points).map(|_| rng.gen_range(0..*points)).collect();
                FiniteSystem::discrete(map).map(System::Finite).map_err(|e| e.to_string())
            }
            SystemSpec::Shift { alphabet, matrix } => {
                let rows = crate::systems::shift::parse_rows(matrix.iter().map(String::as_str))
                    .map_err(|e| e.to_string())?;
                let alphabet = alphabet.clone().unwrap_or_else(|| (0..rows.len()).map(|i| i.to_string()).collect());
                ShiftSystem::new(alphabet, rows).map(System::Shift).map_err(|e| e.to_string())
            }
            SystemSpec::Pl { breakpoints, values } => {
                PlSystem::new(parse_rationals(breakpoints)?, parse_rationals(values)?)
                    .map(System::Pl)
                    .map_err(|e| e.to_string())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let cfg = BatteryConfig::parse(
            r#"
            seed = 3
            checks = ["classify", "corollary", "transitive"]
            [budget]
            level = 2
            [[system]]
            id = "cycle"
            kind = "finite"
            map = [1, 2, 0]
            [[system]]
            id = "golden"
            kind = "shift"
            matrix = ["11", "10"]
            [[system]]
            id = "tent"
            kind = "pl"
            breakpoints = ["0", "1/2", "1"]
            values = ["0", "1", "0"]
            [[system]]
            id = "rand"
            kind = "random-finite"
            points = 4
            "#,
        )
        .unwrap();
        let b = cfg.validate(&Overrides::default()).unwrap();
        assert_eq!(b.systems.len(), 4);
        assert_eq!(b.budget.level, 2);
        assert_eq!(b.checks[2], CheckId::Property(Property::Transitive));
        assert_eq!(b.systems[2].1, System::Pl(PlSystem::tent()));
        // same seed, same random system
        assert_eq!(cfg.validate(&Overrides::default()).unwrap().systems[3], b.systems[3]);
    }

    #[test]
    fn rejects_bad_configs() {
        let empty = BatteryConfig::parse("seed = 1").unwrap();
        assert!(empty.validate(&Overrides::default()).is_err());
        assert!(BatteryConfig::parse("[[system]]\nid = \"x\"\nkind = \"torus\"").is_err());
        let zero = BatteryConfig::parse("[budget]\nlevel = 0\n[[system]]\nid = \"x\"\nkind = \"finite\"\nmap = [0]").unwrap();
        assert!(zero.validate(&Overrides::default()).is_err());
        let bad_map = BatteryConfig::parse("[[system]]\nid = \"x\"\nkind = \"finite\"\nmap = [3]").unwrap();
        assert!(bad_map.validate(&Overrides::default()).is_err());
    }
}
