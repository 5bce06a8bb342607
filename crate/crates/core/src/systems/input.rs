//! JSON input documents.
//!
//! ```json
//! {"type":"finite_shift","vertices":["a","b"],
//!  "edges":[{"id":"e1","from":"a","to":"b","weight":1.0},{"id":"e2","from":"b","to":"a"}]}
//! {"type":"rotation","alpha":"0.61803398874989484820",
//!  "observable":{"constant":0.0,"cos":[1.0],"sin":[]}}
//! {"weights":{"e1":1.0,"e2":"1/3"}}
//! {"preperiod":["e1"],"cycle":["e2","e3"]}
//! ```
//!
//! Edge weights are read from their decimal text, so `0.1` is the exact
//! rational `1/10`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Number;

use super::{EdgeObservable, FiniteSystem, FourierSeries, Observable, RotationSystem, SymbolicPoint, SystemError};
use crate::numeric::{self, Rational};

/// Default number of sample angles for rotations.
pub const DEFAULT_GRID: usize = 1000;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SystemDoc {
    FiniteShift {
        vertices: Vec<String>,
        edges: Vec<EdgeDoc>,
    },
    Rotation {
        alpha: Scalar,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        observable: Option<FourierDoc>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid: Option<usize>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Scalar>,
}

/// A number written either as a JSON number or as a string (`"1/3"` allowed).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(Number),
    Text(String),
}

impl Scalar {
    pub fn text(&self) -> String {
        match self {
            Scalar::Number(n) => n.to_string(),
            Scalar::Text(s) => s.clone(),
        }
    }

    pub fn to_rational(&self) -> Result<Rational, SystemError> {
        let text = self.text();
        numeric::parse_decimal(&text).ok_or(SystemError::BadWeight(text))
    }

    pub fn from_rational(q: &Rational) -> Self {
        Scalar::Text(numeric::format_rational(q))
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FourierDoc {
    #[serde(default, deserialize_with = "scalar_f64")]
    pub constant: f64,
    #[serde(default, deserialize_with = "scalar_f64_vec")]
    pub cos: Vec<f64>,
    #[serde(default, deserialize_with = "scalar_f64_vec")]
    pub sin: Vec<f64>,
}

fn scalar_to_f64<E: serde::de::Error>(s: &Scalar) -> Result<f64, E> {
    let text = s.text();
    text.trim()
        .parse::<f64>()
        .ok()
        .or_else(|| numeric::parse_decimal(&text).map(|q| numeric::to_f64(&q)))
        .ok_or_else(|| E::custom(format!("`{text}` is not a number")))
}

fn scalar_f64<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    scalar_to_f64(&Scalar::deserialize(d)?)
}

fn scalar_f64_vec<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
    Vec::<Scalar>::deserialize(d)?.iter().map(scalar_to_f64).collect()
}

impl From<FourierDoc> for FourierSeries {
    fn from(d: FourierDoc) -> Self {
        FourierSeries::new(d.constant, d.cos, d.sin)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObservableDoc {
    Weights { weights: BTreeMap<String, Scalar> },
    Fourier(FourierDoc),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    #[serde(default)]
    pub preperiod: Vec<String>,
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum PointsDoc {
    Many { points: Vec<PointDoc> },
    List(Vec<PointDoc>),
    One(PointDoc),
}

/// A parsed phase space together with the observable embedded in its file,
/// if any.
#[derive(Clone, Debug)]
pub enum LoadedSystem {
    Finite {
        system: FiniteSystem,
        weights: Option<EdgeObservable>,
    },
    Rotation {
        rotation: RotationSystem,
        observable: Option<FourierSeries>,
    },
}

impl LoadedSystem {
    pub fn embedded_observable(&self) -> Option<Observable> {
        match self {
            LoadedSystem::Finite { weights, .. } => weights.clone().map(Observable::Edge),
            LoadedSystem::Rotation { observable, .. } => observable.clone().map(Observable::Fourier),
        }
    }
}

fn parse_err(e: serde_json::Error) -> SystemError {
    SystemError::Parse(e.to_string())
}

pub fn parse_system(json: &str) -> Result<LoadedSystem, SystemError> {
    let doc: SystemDoc = serde_json::from_str(json).map_err(parse_err)?;
    build_system(doc)
}

pub fn build_system(doc: SystemDoc) -> Result<LoadedSystem, SystemError> {
    match doc {
        SystemDoc::FiniteShift { vertices, edges } => {
            let system = FiniteSystem::new(
                vertices,
                edges.iter().map(|e| (e.id.clone(), e.from.clone(), e.to.clone())),
            )?;
            let given = edges.iter().filter(|e| e.weight.is_some()).count();
            let weights = if given == 0 {
                None
            } else {
                let exact = edges
                    .iter()
                    .map(|e| match &e.weight {
                        Some(w) => w.to_rational(),
                        None => Err(SystemError::MissingWeight(e.id.clone())),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(EdgeObservable::new(&system, exact)?)
            };
            Ok(LoadedSystem::Finite { system, weights })
        }
        SystemDoc::Rotation { alpha, observable, grid } => Ok(LoadedSystem::Rotation {
            rotation: RotationSystem::new(&alpha.text(), grid.unwrap_or(DEFAULT_GRID))?,
            observable: observable.map(Into::into),
        }),
    }
}

/// Serialises a finite system, with optional weights, back to its document.
pub fn system_doc(system: &FiniteSystem, weights: Option<&EdgeObservable>) -> SystemDoc {
    SystemDoc::FiniteShift {
        vertices: system.vertices().to_vec(),
        edges: system
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeDoc {
                id: e.id.clone(),
                from: system.vertices()[e.from].clone(),
                to: system.vertices()[e.to].clone(),
                weight: weights.map(|w| Scalar::from_rational(w.weight(i))),
            })
            .collect(),
    }
}

pub fn parse_observable(json: &str, system: &LoadedSystem) -> Result<Observable, SystemError> {
    let doc: ObservableDoc = serde_json::from_str(json).map_err(parse_err)?;
    match (doc, system) {
        (ObservableDoc::Weights { weights }, LoadedSystem::Finite { system, .. }) => {
            edge_observable_from_map(system, &weights).map(Observable::Edge)
        }
        (ObservableDoc::Fourier(doc), LoadedSystem::Rotation { .. }) => Ok(Observable::Fourier(doc.into())),
        _ => Err(SystemError::KindMismatch),
    }
}

pub fn edge_observable_from_map(system: &FiniteSystem, weights: &BTreeMap<String, Scalar>) -> Result<EdgeObservable, SystemError> {
    if let Some(unknown) = weights.keys().find(|id| system.edge_by_id(id).is_err()) {
        return Err(SystemError::UnknownEdge(unknown.clone()));
    }
    let exact = system
        .edges()
        .iter()
        .map(|e| {
            weights
                .get(&e.id)
                .ok_or_else(|| SystemError::MissingWeight(e.id.clone()))?
                .to_rational()
        })
        .collect::<Result<Vec<_>, _>>()?;
    EdgeObservable::new(system, exact)
}

pub fn observable_doc(system: &FiniteSystem, f: &EdgeObservable) -> ObservableDoc {
    ObservableDoc::Weights {
        weights: system
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (e.id.clone(), Scalar::from_rational(f.weight(i))))
            .collect(),
    }
}

pub fn point_from_doc(system: &FiniteSystem, doc: &PointDoc) -> Result<SymbolicPoint, SystemError> {
    let pre: Vec<&str> = doc.preperiod.iter().map(String::as_str).collect();
    let cycle: Vec<&str> = doc.cycle.iter().map(String::as_str).collect();
    SymbolicPoint::from_ids(system, &pre, &cycle)
}

pub fn point_doc(system: &FiniteSystem, point: &SymbolicPoint) -> PointDoc {
    PointDoc {
        preperiod: system.edge_ids(point.preperiod()),
        cycle: system.edge_ids(point.cycle()),
    }
}

/// Accepts a single point, a JSON list of points or `{"points":[...]}`.
pub fn parse_points(json: &str, system: &FiniteSystem) -> Result<Vec<SymbolicPoint>, SystemError> {
    let doc: PointsDoc = serde_json::from_str(json).map_err(parse_err)?;
    let docs = match doc {
        PointsDoc::Many { points } | PointsDoc::List(points) => points,
        PointsDoc::One(p) => vec![p],
    };
    docs.iter().map(|d| point_from_doc(system, d)).collect()
}

/// Parses a comma or space separated list of edge ids.
pub fn parse_word(system: &FiniteSystem, text: &str) -> Result<Vec<usize>, SystemError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|id| system.edge_by_id(id))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHIFT: &str = r#"{"type":"finite_shift","vertices":["a","b"],
        "edges":[{"id":"e1","from":"a","to":"b","weight":0.1},{"id":"e2","from":"b","to":"a","weight":"1/3"}]}"#;

    #[test]
    fn finite_shift_with_weights() {
        let loaded = parse_system(SHIFT).unwrap();
        let LoadedSystem::Finite { system, weights } = &loaded else { panic!() };
        let w = weights.as_ref().unwrap();
        assert_eq!(w.weight(0), &Rational::new(1.into(), 10.into()));
        assert_eq!(w.weight(1), &Rational::new(1.into(), 3.into()));
        assert_eq!(system.edge_count(), 2);
    }

    #[test]
    fn separate_weights_file_and_points() {
        let loaded = parse_system(SHIFT).unwrap();
        let obs = parse_observable(r#"{"weights":{"e1":-2,"e2":1.25}}"#, &loaded).unwrap();
        let e = obs.as_edge().unwrap();
        assert_eq!(e.value(1), 1.25);
        assert!(parse_observable(r#"{"weights":{"e1":1}}"#, &loaded).is_err());
        assert!(parse_observable(r#"{"weights":{"e1":1,"e2":1,"zz":3}}"#, &loaded).is_err());
        let LoadedSystem::Finite { system, .. } = &loaded else { panic!() };
        let pts = parse_points(r#"{"preperiod":[],"cycle":["e1","e2"]}"#, system).unwrap();
        assert_eq!(pts.len(), 1);
        let pts = parse_points(r#"{"points":[{"cycle":["e2","e1"]},{"preperiod":["e1"],"cycle":["e2","e1"]}]}"#, system).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(point_doc(system, &pts[1]).preperiod, vec!["e1"]);
    }

    #[test]
    fn rotation_document() {
        let loaded = parse_system(
            r#"{"type":"rotation","alpha":"0.61803398874989484820","observable":{"constant":0.0,"cos":[1.0],"sin":[]}}"#,
        )
        .unwrap();
        let LoadedSystem::Rotation { rotation, observable } = loaded else { panic!() };
        assert_eq!(rotation.alpha(), "0.61803398874989484820".parse::<f64>().unwrap());
        assert_eq!(rotation.grid(), DEFAULT_GRID);
        assert_eq!(observable.unwrap().cos, vec![1.0]);
    }

    #[test]
    fn structural_errors_surface() {
        let sink = r#"{"type":"finite_shift","vertices":["a","b"],"edges":[{"id":"e","from":"a","to":"b"}]}"#;
        assert!(parse_system(sink).unwrap_err().to_string().contains("not a total shift"));
        let partial = r#"{"type":"finite_shift","vertices":["a"],"edges":[{"id":"x","from":"a","to":"a","weight":1},{"id":"y","from":"a","to":"a"}]}"#;
        assert!(matches!(parse_system(partial), Err(SystemError::MissingWeight(_))));
        assert!(matches!(parse_system("{"), Err(SystemError::Parse(_))));
    }

    #[test]
    fn documents_round_trip() {
        let loaded = parse_system(SHIFT).unwrap();
        let LoadedSystem::Finite { system, weights } = &loaded else { panic!() };
        let json = serde_json::to_string(&system_doc(system, weights.as_ref())).unwrap();
        let again = parse_system(&json).unwrap();
        let LoadedSystem::Finite { system: s2, weights: w2 } = again else { panic!() };
        assert_eq!(s2.id(), system.id());
        assert_eq!(w2.as_ref().unwrap().exact(), weights.as_ref().unwrap().exact());
    }
}
