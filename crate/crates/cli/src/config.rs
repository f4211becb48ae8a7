//! Campaign configuration, read from the same JSON object notation as matrix files.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sectorial_core::matrix::MAX_DIM;
use sectorial_core::{BoundKind, ConcaveFunction, NormSpec, RandomKind};

use crate::error::HarnessError;

/// Instance generators available to campaigns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Sectorial,
    NormalSectorial,
    Psd,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Sectorial => "sectorial",
            Generator::NormalSectorial => "normal_sectorial",
            Generator::Psd => "psd",
        }
    }

    pub fn random_kind(&self, alpha: f64) -> RandomKind {
        match self {
            Generator::Sectorial => RandomKind::Sectorial(alpha),
            Generator::NormalSectorial => RandomKind::NormalSectorial(alpha),
            Generator::Psd => RandomKind::Psd,
        }
    }
}

impl FromStr for Generator {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "sectorial" => Ok(Generator::Sectorial),
            "normal_sectorial" => Ok(Generator::NormalSectorial),
            "psd" => Ok(Generator::Psd),
            _ => Err(HarnessError::Config(format!("unknown generator `{s}`"))),
        }
    }
}

/// A bound selector in a campaign. `main` and `m2` without an explicit
/// scale run over every entry of `s_values`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KindSpec {
    Fixed(BoundKind),
    OverScales(BoundKind),
}

impl KindSpec {
    pub fn expand(&self, s_values: &[f64]) -> Vec<BoundKind> {
        match self {
            KindSpec::Fixed(k) => vec![*k],
            KindSpec::OverScales(k) => s_values.iter().map(|&s| k.with_s(s)).collect(),
        }
    }
}

impl FromStr for KindSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        let kind: BoundKind = s.parse()?;
        Ok(if kind.s().is_some() && !s.contains(':') {
            KindSpec::OverScales(kind)
        } else {
            KindSpec::Fixed(kind)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub trials: usize,
    #[serde(default = "defaults::n_range")]
    pub n_range: [usize; 2],
    #[serde(default = "defaults::alpha_range")]
    pub alpha_range: [f64; 2],
    #[serde(default = "defaults::s_values")]
    pub s_values: Vec<f64>,
    #[serde(default = "defaults::f_specs")]
    pub f_specs: Vec<String>,
    #[serde(default = "defaults::norm_specs")]
    pub norm_specs: Vec<String>,
    #[serde(default = "defaults::kinds")]
    pub kinds: Vec<String>,
    #[serde(default = "defaults::generators")]
    pub generators: Vec<String>,
    /// Mandatory: campaigns are never seeded from the clock.
    pub master_seed: u64,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub parallelism: usize,
    /// Adds wall-time to each record, which breaks byte-identical reruns.
    #[serde(default)]
    pub record_timing: bool,
    /// Also evaluate the two sectorial witness constructions at each `s`.
    #[serde(default = "defaults::yes")]
    pub witnesses: bool,
}

mod defaults {
    pub fn n_range() -> [usize; 2] {
        [2, 12]
    }
    pub fn alpha_range() -> [f64; 2] {
        [0.01, 1.48]
    }
    pub fn s_values() -> Vec<f64> {
        vec![0.25, 0.5, 1.0, 2.0, 4.0]
    }
    pub fn f_specs() -> Vec<String> {
        ["pow:0.3", "pow:1", "log1p:1", "cap:1", "affine:0.5,1", "rational:2"]
            .map(String::from)
            .to_vec()
    }
    pub fn norm_specs() -> Vec<String> {
        vec!["kyfan:all".into()]
    }
    pub fn kinds() -> Vec<String> {
        vec!["main".into(), "m2".into()]
    }
    pub fn generators() -> Vec<String> {
        vec!["sectorial".into()]
    }
    pub fn yes() -> bool {
        true
    }
}

/// Parsed and range-checked form of a [`SweepConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub functions: Vec<ConcaveFunction>,
    pub norms: Vec<NormSpec>,
    pub kinds: Vec<KindSpec>,
    pub generators: Vec<Generator>,
}

impl SweepConfig {
    /// The default campaign with the given trial count and seed.
    pub fn with_defaults(trials: usize, master_seed: u64) -> Self {
        Self {
            trials,
            n_range: defaults::n_range(),
            alpha_range: defaults::alpha_range(),
            s_values: defaults::s_values(),
            f_specs: defaults::f_specs(),
            norm_specs: defaults::norm_specs(),
            kinds: defaults::kinds(),
            generators: defaults::generators(),
            master_seed,
            parallelism: 0,
            record_timing: false,
            witnesses: true,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(text).map_err(|e| HarnessError::Schema {
            line: Some(e.line()),
            column: Some(e.column()),
            field: String::new(),
            message: e.to_string(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn resolve(&self) -> Result<Resolved, HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        let [nlo, nhi] = self.n_range;
        if nlo < 2 || nlo > nhi || nhi > MAX_DIM {
            return bad(format!("n_range {:?} must satisfy 2 <= min <= max <= {MAX_DIM}", self.n_range));
        }
        let [alo, ahi] = self.alpha_range;
        if !(alo.is_finite() && ahi.is_finite() && 0.0 <= alo && alo <= ahi && ahi < std::f64::consts::FRAC_PI_2) {
            return bad(format!("alpha_range {:?} must lie in [0, pi/2)", self.alpha_range));
        }
        if self.s_values.is_empty() || self.s_values.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return bad(format!("s_values {:?} must be non-empty and positive", self.s_values));
        }
        let nonempty = |name: &str, v: &[String]| {
            if v.is_empty() {
                Err(HarnessError::Config(format!("{name} must be non-empty")))
            } else {
                Ok(())
            }
        };
        nonempty("f_specs", &self.f_specs)?;
        nonempty("norm_specs", &self.norm_specs)?;
        nonempty("kinds", &self.kinds)?;
        nonempty("generators", &self.generators)?;
        Ok(Resolved {
            functions: self.f_specs.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
            norms: self.norm_specs.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
            kinds: self.kinds.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
            generators: self.generators.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
        })
    }
}
