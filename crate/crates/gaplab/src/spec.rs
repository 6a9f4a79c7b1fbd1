//! Domain specifications as JSON.
//!
//! ```json
//! {"type": "polygon", "vertices": [[0, 0], [1, 0], [0.5, 0.8]]}
//! {"type": "rectangle", "a": 2, "b": 1}
//! {"type": "triangle_moduli", "p": [0.5, 0.866]}
//! {"type": "graph", "L": 1, "epsilon": 0.1, "profile": "sin2"}
//! {"type": "graph", "L": 1, "epsilon": 0.1, "profile": "weight_file", "samples": [0, 0.5, 1, 0.5, 0]}
//! {"type": "graph", "L": 1, "epsilon": 0.1, "profile": "weight_file", "file": "w.csv"}
//! ```
//!
//! Graph profiles are sampled on `n` intervals (default 256); a weight file
//! holds `x,value` rows and relative paths resolve against the spec file.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use gaplab_core::domain::{Domain, GraphDomain, Point, Polygon};
use gaplab_core::oned::Profile1D;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::read_profile_csv;

pub const DEFAULT_PROFILE_INTERVALS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Const,
    Sin2,
    WeightFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Polygon {
        vertices: Vec<[f64; 2]>,
    },
    Rectangle {
        a: f64,
        b: f64,
    },
    TriangleModuli {
        p: [f64; 2],
    },
    Graph {
        #[serde(rename = "L")]
        length: f64,
        epsilon: f64,
        profile: ProfileKind,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        samples: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        file: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("domain spec: {e}")))
    }

    /// Reads a spec file; relative weight files resolve against its directory.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path.display(), e))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&text)?, dir))
    }

    pub fn to_domain(&self, base_dir: &Path) -> Result<Domain> {
        Ok(match self {
            DomainSpec::Polygon { vertices } => {
                Domain::Polygon(Polygon::new(vertices.iter().map(|&[x, y]| Point::new(x, y)).collect())?)
            }
            DomainSpec::Rectangle { a, b } => Domain::rectangle(*a, *b)?,
            DomainSpec::TriangleModuli { p } => Domain::from_moduli(Point::new(p[0], p[1]))?,
            DomainSpec::Graph { length, epsilon, profile, samples, file, n } => {
                let n = n.unwrap_or(DEFAULT_PROFILE_INTERVALS);
                let w = match profile {
                    ProfileKind::Const => Profile1D::from_fn(*length, n, |_| 1.0),
                    ProfileKind::Sin2 => Profile1D::from_fn(*length, n, |x| (PI * x / length).sin().powi(2)),
                    ProfileKind::WeightFile => match (file, samples.is_empty()) {
                        (Some(f), true) => {
                            let p = if f.is_absolute() { f.clone() } else { base_dir.join(f) };
                            let w = read_profile_csv(&p)?;
                            if (w.length() - length).abs() > 1e-9 * length {
                                return Err(Error::input(format!(
                                    "weight file spans [0, {}] but L = {length}",
                                    w.length()
                                )));
                            }
                            w
                        }
                        (None, false) => Profile1D::new(*length, samples.clone())?,
                        _ => return Err(Error::input("weight_file profile needs exactly one of `samples` or `file`")),
                    },
                };
                Domain::Graph(GraphDomain::new(w, *epsilon)?)
            }
        })
    }
}

/// A 1D potential on the command line: `const:C` or `file:PATH` (CSV `x,value`).
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Const(f64),
    File(PathBuf),
}

impl std::str::FromStr for PotentialSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("const", c)) => match c.trim().parse::<f64>() {
                Ok(c) if c.is_finite() => Ok(PotentialSpec::Const(c)),
                _ => Err(Error::input(format!("bad constant in `{s}`"))),
            },
            Some(("file", p)) if !p.is_empty() => Ok(PotentialSpec::File(PathBuf::from(p))),
            _ => Err(Error::input(format!("expected const:C or file:PATH, got `{s}`"))),
        }
    }
}

impl std::fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PotentialSpec::Const(c) => write!(f, "const:{c}"),
            PotentialSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl Serialize for PotentialSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl PotentialSpec {
    /// Constants are sampled on `n` intervals of `[0, length]`; files must span exactly that interval.
    pub fn profile(&self, length: f64, n: usize) -> Result<Profile1D> {
        match self {
            PotentialSpec::Const(c) => Ok(Profile1D::from_fn(length, n, |_| *c)),
            PotentialSpec::File(path) => {
                let p = read_profile_csv(path)?;
                if (p.length() - length).abs() > 1e-9 * length {
                    return Err(Error::input(format!("{} spans [0, {}], expected [0, {length}]", path.display(), p.length())));
                }
                Ok(p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_syntax() {
        assert_eq!("const:0".parse::<PotentialSpec>().unwrap(), PotentialSpec::Const(0.0));
        assert_eq!("const:-2.5".parse::<PotentialSpec>().unwrap().to_string(), "const:-2.5");
        assert_eq!("file:v.csv".parse::<PotentialSpec>().unwrap(), PotentialSpec::File("v.csv".into()));
        for bad in ["0", "const:x", "const:inf", "file:", "sin:1"] {
            assert!(bad.parse::<PotentialSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn parses_every_kind() {
        let cases = [
            r#"{"type":"polygon","vertices":[[0,0],[1,0],[0.5,0.8]]}"#,
            r#"{"type":"rectangle","a":2,"b":1}"#,
            r#"{"type":"triangle_moduli","p":[0.5,0.8660254037844386]}"#,
            r#"{"type":"graph","L":1,"epsilon":0.1,"profile":"sin2"}"#,
            r#"{"type":"graph","L":1,"epsilon":0.1,"profile":"weight_file","samples":[0,0.5,1,0.5,0]}"#,
        ];
        for c in cases {
            let spec = DomainSpec::from_json(c).unwrap();
            spec.to_domain(Path::new(".")).unwrap();
            let back = serde_json::to_string(&spec).unwrap();
            assert_eq!(DomainSpec::from_json(&back).unwrap(), spec);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        for c in [
            r#"{"type":"rectangle","a":-1,"b":1}"#,
            r#"{"type":"triangle_moduli","p":[0.2,0.5]}"#,
            r#"{"type":"graph","L":1,"epsilon":0.1,"profile":"weight_file"}"#,
            r#"{"type":"disk","r":1}"#,
        ] {
            let r = DomainSpec::from_json(c).and_then(|s| s.to_domain(Path::new(".")));
            assert!(r.is_err(), "{c}");
        }
    }
}
