//! JSON motion configuration.
//!
//! ```json
//! {"v":1,"kind":"astala","n":10,"harmonic":{"type":"affine","alpha":1,"beta":0,"gamma":1}}
//! {"v":1,"kind":"composite","component_ns":[10,20],"members":[{"type":"affine","alpha":0,"beta":0,"gamma":1.5}, ...]}
//! ```
//!
//! Built motions serialize back to the same schema with the disk centers
//! filled in, so a second build reproduces the same placement.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::harmonic::{HarmonicFn, InfHarmonicFn};
use crate::ifs::{PointCloud, RenderMethod};
use crate::motion::{
    build_astala_motion, build_astala_motion_with_centers, build_prescribed_motion_with_centers, AstalaMotion,
    CompositeMotion, MotionFamily,
};
use crate::{checked_point, ComplexPoint, Error, Result};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionConfig {
    pub v: u32,
    #[serde(flatten)]
    pub spec: MotionSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MotionSpec {
    Astala {
        n: usize,
        harmonic: HarmonicFn,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        centers: Option<Vec<[f64; 2]>>,
    },
    Composite {
        component_ns: Vec<usize>,
        members: Vec<HarmonicFn>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        component_centers: Option<Vec<Vec<[f64; 2]>>>,
    },
}

fn to_points(raw: &[[f64; 2]]) -> Result<Vec<ComplexPoint>> {
    raw.iter().map(|p| checked_point(p[0], p[1])).collect()
}

fn from_points(points: &[ComplexPoint]) -> Vec<[f64; 2]> {
    points.iter().map(|p| [p.re, p.im]).collect()
}

impl MotionConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: MotionConfig = serde_json::from_str(text)?;
        if cfg.v != CONFIG_VERSION {
            return Err(Error::Config(format!("unsupported config version {}", cfg.v)));
        }
        Ok(cfg)
    }

    /// Canonical pretty-printed form; `parse` of it returns `self`.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn build(&self) -> Result<BuiltMotion> {
        match &self.spec {
            MotionSpec::Astala { n, harmonic, centers } => {
                let m = match centers {
                    Some(c) => {
                        if c.len() != *n {
                            return Err(Error::BadArity(format!("{} centers for n = {n}", c.len())));
                        }
                        build_astala_motion_with_centers(harmonic.clone(), to_points(c)?)?
                    }
                    None => build_astala_motion(harmonic.clone(), *n)?,
                };
                Ok(BuiltMotion::Astala(m))
            }
            MotionSpec::Composite { component_ns, members, component_centers } => {
                let target = InfHarmonicFn::new(members.clone())?;
                let centers = component_centers
                    .as_ref()
                    .map(|cc| cc.iter().map(|c| to_points(c)).collect::<Result<Vec<_>>>())
                    .transpose()?;
                Ok(BuiltMotion::Composite(build_prescribed_motion_with_centers(target, component_ns, centers)?))
            }
        }
    }
}

/// A motion built from a [`MotionConfig`].
#[derive(Clone, Debug, PartialEq)]
pub enum BuiltMotion {
    Astala(AstalaMotion),
    Composite(CompositeMotion),
}

impl BuiltMotion {
    /// The config that rebuilds this motion with identical centers.
    pub fn to_config(&self) -> MotionConfig {
        let spec = match self {
            BuiltMotion::Astala(m) => MotionSpec::Astala {
                n: m.n(),
                harmonic: m.harmonic().clone(),
                centers: Some(from_points(m.centers())),
            },
            BuiltMotion::Composite(cm) => MotionSpec::Composite {
                component_ns: cm.components().iter().map(|c| c.motion.n()).collect(),
                members: cm.target().members().to_vec(),
                component_centers: Some(cm.components().iter().map(|c| from_points(c.motion.centers())).collect()),
            },
        };
        MotionConfig { v: CONFIG_VERSION, spec }
    }

    pub fn as_astala(&self) -> Option<&AstalaMotion> {
        match self {
            BuiltMotion::Astala(m) => Some(m),
            BuiltMotion::Composite(_) => None,
        }
    }

    /// Every Astala motion in the build: the motion itself or each component.
    pub fn astala_parts(&self) -> Vec<&AstalaMotion> {
        match self {
            BuiltMotion::Astala(m) => vec![m],
            BuiltMotion::Composite(cm) => cm.components().iter().map(|c| &c.motion).collect(),
        }
    }
}

impl MotionFamily for BuiltMotion {
    fn dimension(&self, lambda: Complex64) -> Result<f64> {
        match self {
            BuiltMotion::Astala(m) => m.dimension(lambda),
            BuiltMotion::Composite(cm) => cm.dimension(lambda),
        }
    }

    fn render(&self, lambda: Complex64, method: RenderMethod) -> Result<PointCloud> {
        match self {
            BuiltMotion::Astala(m) => MotionFamily::render(m, lambda, method),
            BuiltMotion::Composite(cm) => MotionFamily::render(cm, lambda, method),
        }
    }

    fn describe(&self) -> String {
        match self {
            BuiltMotion::Astala(m) => m.describe(),
            BuiltMotion::Composite(cm) => cm.describe(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ASTALA: &str = r#"{"v":1,"kind":"astala","n":10,"harmonic":{"type":"affine","alpha":1,"beta":0,"gamma":1}}"#;
    const COMPOSITE: &str = r#"{"v":1,"kind":"composite","component_ns":[10,12],
        "members":[{"type":"affine","alpha":0,"beta":0,"gamma":1.5},{"type":"trigpoly","c0":2.0,"cos":[0.5],"sin":[0.25]}]}"#;

    #[test]
    fn parses_and_builds() {
        let cfg = MotionConfig::parse(ASTALA).unwrap();
        let m = cfg.build().unwrap();
        assert_eq!(m.as_astala().unwrap().n(), 10);
        let cfg = MotionConfig::parse(COMPOSITE).unwrap();
        let cm = cfg.build().unwrap();
        assert_eq!(cm.astala_parts().len(), 2);
    }

    #[test]
    fn emit_parse_round_trip() {
        for text in [ASTALA, COMPOSITE] {
            let cfg = MotionConfig::parse(text).unwrap();
            let emitted = cfg.emit();
            assert_eq!(MotionConfig::parse(&emitted).unwrap(), cfg);
            assert_eq!(MotionConfig::parse(&emitted).unwrap().emit(), emitted);
        }
    }

    #[test]
    fn materialised_centers_rebuild_identically() {
        for text in [ASTALA, COMPOSITE] {
            let built = MotionConfig::parse(text).unwrap().build().unwrap();
            let cfg = built.to_config();
            let again = MotionConfig::parse(&cfg.emit()).unwrap().build().unwrap();
            assert_eq!(again, built);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(matches!(MotionConfig::parse(&ASTALA.replace("\"v\":1", "\"v\":2")), Err(Error::Config(_))));
        assert!(MotionConfig::parse(r#"{"v":1,"kind":"spiral"}"#).is_err());
        let neg = ASTALA.replace("\"gamma\":1", "\"gamma\":0.5");
        assert!(matches!(MotionConfig::parse(&neg).unwrap().build(), Err(Error::NonPositiveHarmonic(_))));
        let bad_centers = r#"{"v":1,"kind":"astala","n":10,"harmonic":{"type":"affine","alpha":0,"beta":0,"gamma":1},
            "centers":[[0,0],[0.1,0]]}"#;
        assert!(MotionConfig::parse(bad_centers).unwrap().build().is_err());
    }
}
