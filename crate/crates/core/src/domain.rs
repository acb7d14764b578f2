//! Identifiers, experience tuples and learner hyperparameters.

use std::borrow::Borrow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_label(label: &str) -> Result<()> {
    if label.is_empty() || label.contains([',', '\n', '\r']) {
        return Err(Error::InvalidIdentifier(label.to_owned()));
    }
    Ok(())
}

macro_rules! label_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub struct $name(String);

        impl $name {
            pub fn new(label: impl Into<String>) -> Result<Self> {
                let label = label.into();
                check_label(&label)?;
                Ok(Self(label))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                Self::new(s)
            }
        }

        impl TryFrom<String> for $name {
            type Error = Error;

            fn try_from(s: String) -> Result<Self> {
                Self::new(s)
            }
        }

        impl TryFrom<&str> for $name {
            type Error = Error;

            fn try_from(s: &str) -> Result<Self> {
                Self::new(s)
            }
        }

        impl From<$name> for String {
            fn from(id: $name) -> String {
                id.0
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

label_type!(
    /// Name of an environment state, e.g. `s1` or a tic-tac-toe board `......X.B`.
    StateId
);

label_type!(
    /// Name of an action, e.g. `up` or `c7`.
    ActionId
);

/// One observed transition `(s, a, r, s')`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperienceTuple {
    pub state: StateId,
    pub action: ActionId,
    pub reward: f64,
    pub next_state: StateId,
}

impl ExperienceTuple {
    pub fn new(state: StateId, action: ActionId, reward: f64, next_state: StateId) -> Result<Self> {
        if !reward.is_finite() {
            return Err(Error::NonFinite(reward));
        }
        Ok(Self {
            state,
            action,
            reward,
            next_state,
        })
    }

    /// Builds a tuple from string labels; handy in tests and examples.
    pub fn parse(state: &str, action: &str, reward: f64, next_state: &str) -> Result<Self> {
        Self::new(
            StateId::new(state)?,
            ActionId::new(action)?,
            reward,
            StateId::new(next_state)?,
        )
    }
}

/// Learning rate, discount factor and exploration rate, each in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawControl")]
pub struct ControlParams {
    alpha: f64,
    gamma: f64,
    epsilon: f64,
}

#[derive(Deserialize)]
struct RawControl {
    alpha: f64,
    gamma: f64,
    epsilon: f64,
}

impl TryFrom<RawControl> for ControlParams {
    type Error = Error;

    fn try_from(raw: RawControl) -> Result<Self> {
        ControlParams::new(raw.alpha, raw.gamma, raw.epsilon)
    }
}

fn unit_interval(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::ParamOutOfRange { name, value })
    }
}

impl ControlParams {
    pub fn new(alpha: f64, gamma: f64, epsilon: f64) -> Result<Self> {
        Ok(Self {
            alpha: unit_interval("alpha", alpha)?,
            gamma: unit_interval("gamma", gamma)?,
            epsilon: unit_interval("epsilon", epsilon)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

impl Default for ControlParams {
    /// α = 0.1, γ = 0.5, ε = 0.1.
    fn default() -> Self {
        Self {
            alpha: 0.1,
            gamma: 0.5,
            epsilon: 0.1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifiers_reject_separators() {
        assert!(StateId::new("s1").is_ok());
        assert!(StateId::new(".........").is_ok());
        assert!(StateId::new("").is_err());
        assert!(StateId::new("a,b").is_err());
        assert!(ActionId::new("up\n").is_err());
        assert!(ActionId::new("c\r7").is_err());
    }

    #[test]
    fn control_bounds_are_inclusive() {
        assert!(ControlParams::new(0.0, 1.0, 0.0).is_ok());
        assert!(ControlParams::new(1.0, 0.0, 1.0).is_ok());
        assert!(matches!(
            ControlParams::new(1.5, 0.5, 0.1),
            Err(Error::ParamOutOfRange { name: "alpha", .. })
        ));
        assert!(ControlParams::new(0.1, -0.1, 0.1).is_err());
        assert!(ControlParams::new(0.1, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn tuple_requires_finite_reward() {
        assert!(ExperienceTuple::parse("s1", "up", f64::INFINITY, "s1").is_err());
        assert!(ExperienceTuple::parse("s1", "up", -1.0, "s1").is_ok());
    }

    #[test]
    fn control_deserialization_validates() {
        let bad: std::result::Result<ControlParams, _> =
            serde_json::from_str(r#"{"alpha":2.0,"gamma":0.5,"epsilon":0.1}"#);
        assert!(bad.is_err());
    }
}
