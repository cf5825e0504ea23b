use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::seed;
use crate::seqgen::{PointStream, SeqError, StreamKind};

/// The four places the optimizer consumes uniform random vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Initial positions.
    Init,
    /// Exploration subpopulation, pull toward the exemplar.
    Explore,
    /// Exploitation subpopulation, pull toward the exemplar.
    ExploitCognitive,
    /// Exploitation subpopulation, pull toward the global best.
    ExploitSocial,
}

impl Role {
    pub const ALL: [Role; 4] = [
        Role::Init,
        Role::Explore,
        Role::ExploitCognitive,
        Role::ExploitSocial,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Role::Init => "init",
            Role::Explore => "explore",
            Role::ExploitCognitive => "exploit_cognitive",
            Role::ExploitSocial => "exploit_social",
        }
    }
}

/// Named stream-binding presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    /// Every velocity stream replaced.
    Hclpso0,
    /// Both exemplar-pull streams replaced; the global-best pull stays random.
    Hclpso1,
    /// Only the global-best pull stream replaced.
    Hclpso2,
    /// The original algorithm: every stream random.
    #[serde(alias = "rand")]
    Hclpso3,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Hclpso0 => "hclpso0",
            Preset::Hclpso1 => "hclpso1",
            Preset::Hclpso2 => "hclpso2",
            Preset::Hclpso3 => "hclpso3",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hclpso0" => Ok(Preset::Hclpso0),
            "hclpso1" => Ok(Preset::Hclpso1),
            "hclpso2" => Ok(Preset::Hclpso2),
            "hclpso3" | "rand" => Ok(Preset::Hclpso3),
            other => Err(format!(
                "unknown preset {other:?} (expected hclpso0, hclpso1, hclpso2, hclpso3 or rand)"
            )),
        }
    }
}

/// Which stream feeds each [`Role`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantScheme {
    pub init: StreamKind,
    pub explore: StreamKind,
    pub exploit_cognitive: StreamKind,
    pub exploit_social: StreamKind,
}

impl Default for VariantScheme {
    fn default() -> Self {
        Self::all_random()
    }
}

impl VariantScheme {
    pub fn all_random() -> Self {
        let r = StreamKind::Random { seed: None };
        Self {
            init: r.clone(),
            explore: r.clone(),
            exploit_cognitive: r.clone(),
            exploit_social: r,
        }
    }

    /// Binds `lds` to the roles the preset replaces; everything else,
    /// including initialization, stays random.
    pub fn preset(preset: Preset, lds: StreamKind) -> Self {
        let mut s = Self::all_random();
        match preset {
            Preset::Hclpso0 => {
                s.explore = lds.clone();
                s.exploit_cognitive = lds.clone();
                s.exploit_social = lds;
            }
            Preset::Hclpso1 => {
                s.explore = lds.clone();
                s.exploit_cognitive = lds;
            }
            Preset::Hclpso2 => s.exploit_social = lds,
            Preset::Hclpso3 => {}
        }
        s
    }

    pub fn kind(&self, role: Role) -> &StreamKind {
        match role {
            Role::Init => &self.init,
            Role::Explore => &self.explore,
            Role::ExploitCognitive => &self.exploit_cognitive,
            Role::ExploitSocial => &self.exploit_social,
        }
    }

    /// Builds the stream for `role`. Unseeded random streams get a seed
    /// derived from the run seed and the role, so roles never share a stream.
    pub fn build(&self, role: Role, dim: usize, run_seed: u64) -> Result<PointStream, SeqError> {
        match self.kind(role) {
            StreamKind::Random { seed: None } => Ok(PointStream::random(
                seed::derive(run_seed, &["stream", role.label()]),
                dim,
            )),
            kind => PointStream::new(kind, dim),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_bind_the_documented_roles() {
        let lds = StreamKind::Halton { permutations: None };
        let is_lds = |s: &VariantScheme| {
            [Role::Init, Role::Explore, Role::ExploitCognitive, Role::ExploitSocial]
                .map(|r| !s.kind(r).is_random())
        };
        assert_eq!(
            is_lds(&VariantScheme::preset(Preset::Hclpso0, lds.clone())),
            [false, true, true, true]
        );
        assert_eq!(
            is_lds(&VariantScheme::preset(Preset::Hclpso1, lds.clone())),
            [false, true, true, false]
        );
        assert_eq!(
            is_lds(&VariantScheme::preset(Preset::Hclpso2, lds.clone())),
            [false, false, false, true]
        );
        assert_eq!(
            VariantScheme::preset(Preset::Hclpso3, lds),
            VariantScheme::all_random()
        );
    }

    #[test]
    fn preset_names_parse() {
        assert_eq!("rand".parse::<Preset>().unwrap(), Preset::Hclpso3);
        assert_eq!("HCLPSO1".parse::<Preset>().unwrap(), Preset::Hclpso1);
        assert!("hclpso4".parse::<Preset>().is_err());
        let p: Preset = serde_json::from_str("\"rand\"").unwrap();
        assert_eq!(p, Preset::Hclpso3);
    }

    #[test]
    fn random_roles_get_distinct_streams() {
        let s = VariantScheme::all_random();
        let mut a = s.build(Role::Explore, 3, 9).unwrap();
        let mut b = s.build(Role::ExploitCognitive, 3, 9).unwrap();
        assert_ne!(a.next_point_vec().unwrap(), b.next_point_vec().unwrap());
    }
}
