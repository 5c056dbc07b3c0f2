use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::bidisc::{BidiscRule, DiagonalPolicy, DEFAULT_BIDISC_ANGULAR, DEFAULT_BIDISC_RADIAL};
use super::disc::{DiscRule, DEFAULT_ANGULAR, DEFAULT_GRADING, DEFAULT_ORIGIN_GRADING, DEFAULT_RADIAL};
use super::patch::PatchConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BidiscGrid {
    pub radial: usize,
    pub angular: usize,
    pub policy: DiagonalPolicy,
}

impl Default for BidiscGrid {
    fn default() -> Self {
        Self {
            radial: DEFAULT_BIDISC_RADIAL,
            angular: DEFAULT_BIDISC_ANGULAR,
            policy: DiagonalPolicy::MoebiusCentered,
        }
    }
}

/// Grid configuration, as read from JSON.
///
/// ```json
/// {"radial": 96, "angular": 128, "grading": 3, "bidisc": {"radial": 48, "angular": 64}}
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub radial: usize,
    pub angular: usize,
    pub grading: f64,
    pub origin_grading: u32,
    pub bidisc: BidiscGrid,
    pub patch: PatchConfig,
    /// Circle nodes for Hardy means, cone functionals and S₁.
    pub circle: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            radial: DEFAULT_RADIAL,
            angular: DEFAULT_ANGULAR,
            grading: DEFAULT_GRADING,
            origin_grading: DEFAULT_ORIGIN_GRADING,
            bidisc: BidiscGrid::default(),
            patch: PatchConfig::default(),
            circle: DEFAULT_ANGULAR,
        }
    }
}

impl GridConfig {
    /// All node counts multiplied by `k`.
    pub fn scaled(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::config("grid scale must be at least 1"));
        }
        Ok(Self {
            radial: self.radial * k,
            angular: self.angular * k,
            bidisc: BidiscGrid {
                radial: self.bidisc.radial * k,
                angular: self.bidisc.angular * k,
                ..self.bidisc
            },
            patch: self.patch.scaled(k),
            circle: self.circle * k,
            ..*self
        })
    }

    pub fn disc_rule(&self) -> Result<DiscRule> {
        DiscRule::polar(self.radial, self.angular, self.grading, self.origin_grading, 0.0)
    }

    pub fn bidisc_rule(&self) -> Result<BidiscRule> {
        let b = &self.bidisc;
        let rule_z = DiscRule::polar(b.radial, b.angular, self.grading, self.origin_grading, 0.0)?;
        let rule_w = DiscRule::polar(
            b.radial,
            b.angular,
            self.grading,
            self.origin_grading,
            PI / b.angular as f64,
        )?;
        BidiscRule::from_rules(rule_z, rule_w, b.policy, self.patch)
    }

    pub fn validate(&self) -> Result<()> {
        self.disc_rule()?;
        self.bidisc_rule()?;
        if self.circle < 4 {
            return Err(Error::config("circle node count must be at least 4"));
        }
        Ok(())
    }
}
