//! JSON configuration: group, torus constraints, representation data and
//! run options. Rationals travel as `"p/q"` strings.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::Model;
use crate::error::{Error, Result};
use crate::presets::QuiverSpec;
use crate::rational::{format_q, parse_q, Q};
use crate::repdata::SpringerData;
use crate::rootcore::{RootDatum, Weight, WeylGroup};
use crate::subgroup::{ConstraintKind, TorusConstraint};

/// Exact rational encoded as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Q);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map(RatStr).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Label(String),
    Gl(usize),
    Explicit(ExplicitDatum),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitDatum {
    pub label: String,
    pub ambient: usize,
    pub simple_roots: Vec<Weight>,
    pub coroots: Vec<Vec<RatStr>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusSpec {
    pub kind: ConstraintKind,
    pub values: Vec<RatStr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedSet {
    PositiveRoots,
    AllRoots,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSet {
    Named(NamedSet),
    Explicit(Vec<Weight>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpringerSpec {
    pub r: usize,
    pub u_sets: Vec<WeightSet>,
    pub v_sets: Vec<WeightSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub strict: bool,
    #[serde(default = "default_degree_bound")]
    pub degree_bound: u32,
    #[serde(default)]
    pub checks: Vec<String>,
}

fn default_degree_bound() -> u32 {
    4
}

impl Default for Options {
    fn default() -> Self {
        Options { strict: false, degree_bound: default_degree_bound(), checks: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub group: GroupSpec,
    #[serde(default)]
    pub torus: Vec<TorusSpec>,
    #[serde(default)]
    pub springer: SpringerSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<QuiverSpec>,
    #[serde(default)]
    pub options: Options,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn root_datum(&self) -> Result<RootDatum> {
        match &self.group {
            GroupSpec::Label(l) => RootDatum::from_label(l),
            GroupSpec::Gl(d) => RootDatum::gl(*d),
            GroupSpec::Explicit(e) => RootDatum::from_simple(
                e.label.clone(),
                e.ambient,
                e.simple_roots.clone(),
                e.coroots.iter().map(|c| c.iter().map(|x| x.0.clone()).collect()).collect(),
            ),
        }
    }

    pub fn constraints(&self) -> Vec<TorusConstraint> {
        self.torus
            .iter()
            .map(|t| TorusConstraint { kind: t.kind, values: t.values.iter().map(|x| x.0.clone()).collect() })
            .collect()
    }

    fn resolve(group: &WeylGroup, set: &WeightSet) -> BTreeSet<Weight> {
        let datum = group.datum();
        match set {
            WeightSet::Named(NamedSet::PositiveRoots) => datum.positive_roots().into_iter().collect(),
            WeightSet::Named(NamedSet::AllRoots) => datum.roots().iter().cloned().collect(),
            WeightSet::Explicit(ws) => ws.iter().cloned().collect(),
        }
    }

    pub fn springer_data(&self, group: &WeylGroup) -> Result<SpringerData> {
        let sp = &self.springer;
        if sp.u_sets.len() != sp.r || sp.v_sets.len() != sp.r {
            return Err(Error::Config(format!(
                "r = {} but {} U-sets and {} V-sets given",
                sp.r,
                sp.u_sets.len(),
                sp.v_sets.len()
            )));
        }
        let n = group.datum().ambient_rank();
        for set in sp.u_sets.iter().chain(&sp.v_sets) {
            if let WeightSet::Explicit(ws) = set {
                if ws.iter().any(|w| w.len() != n) {
                    return Err(Error::Config("weight length differs from ambient rank".into()));
                }
            }
        }
        let u = sp.u_sets.iter().map(|s| Self::resolve(group, s)).collect();
        let v = sp.v_sets.iter().map(|s| Self::resolve(group, s)).collect();
        SpringerData::new(group, u, v)
    }

    pub fn to_model(&self) -> Result<Model> {
        let group = WeylGroup::new(self.root_datum()?)?;
        let data = self.springer_data(&group)?;
        Model::new(group, &self.constraints(), data)
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HALF: &str = r#"{
        "group": {"label": "A2"},
        "torus": [{"kind": "torsion", "values": ["1/2", "0"]}],
        "springer": {"r": 1, "u_sets": ["positive_roots"], "v_sets": [[[1, 0], [-1, 0], [1, 1], [-1, -1]]]}
    }"#;

    #[test]
    fn parses_and_builds() {
        let c = Config::parse(HALF).unwrap();
        assert_eq!(c.options.degree_bound, 4);
        let m = c.to_model().unwrap();
        assert_eq!(m.ncomponents(), 3);
        assert_eq!(Config::parse(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(Config::parse(r#"{"group": {"label": "A1"}, "extra": 1}"#).is_err());
        assert!(Config::parse(r#"{"group": {"label": "A1"}, "options": {"strictness": true}}"#).is_err());
        assert!(
            Config::parse(r#"{"group": {"gl": 2}, "torus": [{"kind": "torsion", "values": ["1/0", "0"]}]}"#).is_err()
        );
    }

    #[test]
    fn copy_count_must_match() {
        let c =
            Config::parse(r#"{"group": {"label": "A1"}, "springer": {"r": 2, "u_sets": [], "v_sets": []}}"#).unwrap();
        assert!(c.to_model().is_err());
    }

    #[test]
    fn explicit_group() {
        let c = Config::parse(
            r#"{"group": {"explicit": {"label": "A1", "ambient": 2, "simple_roots": [[1, -1]], "coroots": [["1", "-1"]]}}}"#,
        )
        .unwrap();
        assert_eq!(c.to_model().unwrap().group().order(), 2);
    }
}
