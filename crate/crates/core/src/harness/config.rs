//! JSON experiment configs: a single object or an array of objects.
//!
//! ```json
//! [{"n": 10000, "m_rule": "cbrt", "case": "mh-rw", "B": 1000, "seed": 7}]
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{TrialConfig, DEFAULT_REPLICATES};
use crate::error::{invalid, Error, Result};
use crate::generators::{
    default_heavy_tail_c, ChainSpec, DEFAULT_BURN_IN, DEFAULT_PROPOSAL_SCALE, DEFAULT_STEP_SCALE,
    DEFAULT_THETA,
};
use crate::quantile::QuantileLevel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: usize,
    m_rule: String,
    case: String,
    #[serde(rename = "B", alias = "replicates", default = "default_replicates")]
    replicates: usize,
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    step_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    proposal_scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    burn_in: Option<usize>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    tail_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

fn default_replicates() -> usize {
    DEFAULT_REPLICATES
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    Many(Vec<RawConfig>),
    One(RawConfig),
}

fn unused(name: &'static str, case: &str) -> Error {
    invalid(name, format!("does not apply to case `{case}`"))
}

impl RawConfig {
    fn resolve(self) -> Result<TrialConfig> {
        let mut case = ChainSpec::from_tag(&self.case)?;
        match &mut case {
            ChainSpec::HeavyTail { c } => *c = self.tail_c.unwrap_or_else(default_heavy_tail_c),
            ChainSpec::ReflectedRw { step_scale } | ChainSpec::MdpReward { step_scale } => {
                *step_scale = self.step_scale.unwrap_or(DEFAULT_STEP_SCALE)
            }
            ChainSpec::Rwmh {
                proposal_scale,
                burn_in,
            } => {
                *proposal_scale = self.proposal_scale.unwrap_or(DEFAULT_PROPOSAL_SCALE);
                *burn_in = self.burn_in.unwrap_or(DEFAULT_BURN_IN);
            }
            ChainSpec::Uniform { theta } => *theta = self.theta.unwrap_or(DEFAULT_THETA),
            ChainSpec::GaussianIid => {}
        }
        let tag = case.tag();
        if self.tail_c.is_some() && !matches!(case, ChainSpec::HeavyTail { .. }) {
            return Err(unused("C", tag));
        }
        if self.step_scale.is_some()
            && !matches!(
                case,
                ChainSpec::ReflectedRw { .. } | ChainSpec::MdpReward { .. }
            )
        {
            return Err(unused("step_scale", tag));
        }
        if (self.proposal_scale.is_some() || self.burn_in.is_some())
            && !matches!(case, ChainSpec::Rwmh { .. })
        {
            return Err(unused("proposal_scale/burn_in", tag));
        }
        if self.theta.is_some() && !matches!(case, ChainSpec::Uniform { .. }) {
            return Err(unused("theta", tag));
        }
        let level = match self.p {
            Some(p) => QuantileLevel::new(p)?,
            None => QuantileLevel::MEDIAN,
        };
        let config = TrialConfig {
            n: self.n,
            m_rule: self.m_rule.parse()?,
            c: self.c.unwrap_or(1.0),
            case,
            replicates: self.replicates,
            master_seed: self.seed,
            level,
        };
        config.validate()?;
        Ok(config)
    }

    fn from_config(c: &TrialConfig) -> Self {
        let mut raw = RawConfig {
            n: c.n,
            m_rule: c.m_rule.to_string(),
            case: c.case.tag().to_string(),
            replicates: c.replicates,
            seed: c.master_seed,
            p: Some(c.level.value()),
            c: Some(c.c),
            step_scale: None,
            proposal_scale: None,
            burn_in: None,
            tail_c: None,
            theta: None,
        };
        match c.case {
            ChainSpec::GaussianIid => {}
            ChainSpec::HeavyTail { c } => raw.tail_c = Some(c),
            ChainSpec::ReflectedRw { step_scale } | ChainSpec::MdpReward { step_scale } => {
                raw.step_scale = Some(step_scale)
            }
            ChainSpec::Rwmh {
                proposal_scale,
                burn_in,
            } => {
                raw.proposal_scale = Some(proposal_scale);
                raw.burn_in = Some(burn_in);
            }
            ChainSpec::Uniform { theta } => raw.theta = Some(theta),
        }
        raw
    }
}

/// Parses config text; `origin` names the source in error messages.
pub fn parse_config_str(text: &str, origin: &Path) -> Result<Vec<TrialConfig>> {
    let parsed: OneOrMany = serde_json::from_str(text).map_err(|_| {
        // The untagged enum hides the underlying message; re-parse as an
        // array or a single object to report the real field and line.
        let err = if text.trim_start().starts_with('[') {
            serde_json::from_str::<Vec<RawConfig>>(text).err()
        } else {
            serde_json::from_str::<RawConfig>(text).err()
        };
        Error::Config {
            path: origin.to_path_buf(),
            source: err.expect("untagged parse failed but the variant parsed"),
        }
    })?;
    let raws = match parsed {
        OneOrMany::Many(v) => v,
        OneOrMany::One(r) => vec![r],
    };
    if raws.is_empty() {
        return Err(Error::Empty);
    }
    raws.into_iter()
        .enumerate()
        .map(|(i, raw)| {
            raw.resolve().map_err(|e| match e {
                Error::InvalidParameter { name, reason } => Error::InvalidParameter {
                    name,
                    reason: format!("{reason} (entry {i} of {})", origin.display()),
                },
                other => other,
            })
        })
        .collect()
}

pub fn parse_config(path: &Path) -> Result<Vec<TrialConfig>> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text, path)
}

/// Serializes configs as a JSON array that [`parse_config_str`] reads back.
pub fn configs_to_json(configs: &[TrialConfig]) -> String {
    let raws: Vec<RawConfig> = configs.iter().map(RawConfig::from_config).collect();
    serde_json::to_string_pretty(&raws).expect("config serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moon::MRule;

    fn origin() -> &'static Path {
        Path::new("test.json")
    }

    #[test]
    fn single_object_and_defaults() {
        let v = parse_config_str(
            r#"{"n": 1000, "m_rule": "cbrt", "case": "mh-rw", "seed": 3}"#,
            origin(),
        )
        .unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].replicates, DEFAULT_REPLICATES);
        assert_eq!(v[0].level, QuantileLevel::MEDIAN);
        assert_eq!(v[0].m_rule, MRule::Cbrt);
        assert_eq!(
            v[0].case,
            ChainSpec::Rwmh {
                proposal_scale: 1.0,
                burn_in: 0
            }
        );
    }

    #[test]
    fn array_with_overrides() {
        let text = r#"[
            {"n": 500, "m_rule": "fixed:20", "case": "heavy-tail", "B": 10, "seed": 1, "C": 9.0},
            {"n": 500, "m_rule": "sqrt", "case": "reflected-rw", "replicates": 4, "seed": 2, "step_scale": 0.3, "p": 0.25}
        ]"#;
        let v = parse_config_str(text, origin()).unwrap();
        assert_eq!(v[0].case, ChainSpec::HeavyTail { c: 9.0 });
        assert_eq!(v[0].m_rule, MRule::Fixed(20));
        assert_eq!(v[1].replicates, 4);
        assert_eq!(v[1].case, ChainSpec::ReflectedRw { step_scale: 0.3 });
        assert_eq!(v[1].level.value(), 0.25);
    }

    #[test]
    fn errors_name_the_problem() {
        let missing = parse_config_str(
            "{\n\"n\": 10,\n\"case\": \"gaussian\", \"seed\": 1}",
            origin(),
        )
        .unwrap_err()
        .to_string();
        assert!(
            missing.contains("m_rule") && missing.contains("line"),
            "{missing}"
        );

        let unknown = parse_config_str(
            r#"{"n": 10, "m_rule": "log", "case": "gaussian", "seed": 1, "bogus": 2}"#,
            origin(),
        )
        .unwrap_err()
        .to_string();
        assert!(unknown.contains("bogus"), "{unknown}");

        let bad_case = parse_config_str(
            r#"[{"n": 10, "m_rule": "log", "case": "cauchy", "seed": 1}]"#,
            origin(),
        )
        .unwrap_err()
        .to_string();
        assert!(
            bad_case.contains("case") && bad_case.contains("entry 0"),
            "{bad_case}"
        );

        let misplaced = parse_config_str(
            r#"{"n": 10, "m_rule": "log", "case": "gaussian", "seed": 1, "theta": 2.0}"#,
            origin(),
        );
        assert!(misplaced.is_err());
        assert!(parse_config_str("[]", origin()).is_err());
        assert!(parse_config_str(
            r#"{"n": 10, "m_rule": "fixed:11", "case": "gaussian", "seed": 1}"#,
            origin()
        )
        .is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn case_strategy() -> impl Strategy<Value = ChainSpec> {
            prop_oneof![
                Just(ChainSpec::GaussianIid),
                (2.8f64..50.0).prop_map(|c| ChainSpec::HeavyTail { c }),
                (0.01f64..2.0).prop_map(|s| ChainSpec::ReflectedRw { step_scale: s }),
                ((0.01f64..5.0), 0usize..100).prop_map(|(s, b)| ChainSpec::Rwmh {
                    proposal_scale: s,
                    burn_in: b
                }),
                (0.01f64..2.0).prop_map(|s| ChainSpec::MdpReward { step_scale: s }),
                (0.1f64..10.0).prop_map(|t| ChainSpec::Uniform { theta: t }),
            ]
        }

        fn rule_strategy() -> impl Strategy<Value = MRule> {
            prop_oneof![
                Just(MRule::Log),
                Just(MRule::Cbrt),
                Just(MRule::Sqrt),
                (1usize..100).prop_map(MRule::Fixed),
            ]
        }

        proptest! {
            #[test]
            fn json_round_trip(
                n in 100usize..100_000,
                rule in rule_strategy(),
                case in case_strategy(),
                b in 1usize..5000,
                seed in any::<u64>(),
                p in 0.01f64..0.99,
                c in 0.5f64..3.0,
            ) {
                let cfg = TrialConfig {
                    n, m_rule: rule, c, case, replicates: b, master_seed: seed,
                    level: QuantileLevel::new(p).unwrap(),
                };
                prop_assume!(cfg.validate().is_ok());
                let text = configs_to_json(std::slice::from_ref(&cfg));
                let back = parse_config_str(&text, Path::new("rt.json")).unwrap();
                prop_assert_eq!(back, vec![cfg]);
            }
        }
    }
}
