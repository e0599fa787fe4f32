//! Scenario files: versioned JSON describing one instance to check, sweep
//! or render.

use std::fmt;
use std::path::Path;

use carousel_core::carousel::{CarouselInstance, CorollaryInstance};
use carousel_core::sphere3::Example42Params;
use carousel_core::{Circle2, Point2, Tolerance};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SCHEMA: &str = "carousel/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Theorem2d,
    Corollary2d,
    Points2d,
    Sweep,
    #[serde(rename = "sphere3_ex41")]
    Sphere3Ex41,
    #[serde(rename = "sphere3_ex42")]
    Sphere3Ex42,
    /// Focus in `sites`, spanning circle in `circles`.
    Reangle,
    /// Hull of `sites` and `circles`.
    Hull2d,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

/// Kind-specific knobs. Unused fields are ignored by kinds that do not
/// need them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc_radius_factor: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sites: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub circles: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spheres: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Tolerance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
}

fn schema_err(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

fn circle_of(row: &[f64], what: &str) -> Result<Circle2, CliError> {
    let c = match *row {
        [x, y] => Circle2::new(Point2::new(x, y), 0.0),
        [x, y, r] => Circle2::new(Point2::new(x, y), r),
        _ => return Err(schema_err(format!("{what}: expected [x, y] or [x, y, r], got {} numbers", row.len()))),
    };
    if !c.is_valid() {
        return Err(schema_err(format!("{what}: needs finite coordinates and radius >= 0")));
    }
    Ok(c)
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let sc: Scenario = serde_json::from_value(value).map_err(|e| schema_err(e.to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes") + "\n"
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA {
            return Err(schema_err(format!("unsupported schema {:?}, expected {SCHEMA:?}", self.schema)));
        }
        if let Some(t) = &self.tolerance {
            if !t.is_valid() {
                return Err(schema_err("tolerance needs 0 < eps_geom < eps_decision"));
            }
        }
        let counts = |sites: usize, circles: usize| -> Result<(), CliError> {
            if self.sites.len() != sites || self.circles.len() != circles {
                return Err(schema_err(format!(
                    "{} needs {sites} sites and {circles} circles, got {} and {}",
                    self.kind,
                    self.sites.len(),
                    self.circles.len()
                )));
            }
            Ok(())
        };
        match self.kind {
            Kind::Theorem2d | Kind::Sweep | Kind::Points2d | Kind::Corollary2d => counts(3, 2)?,
            Kind::Reangle => counts(1, 1)?,
            Kind::Hull2d => {
                if self.sites.len() + self.circles.len() == 0 {
                    return Err(schema_err("hull2d needs at least one site or circle"));
                }
            }
            Kind::Sphere3Ex41 | Kind::Sphere3Ex42 => {}
        }
        for (i, row) in self.sites.iter().enumerate() {
            let c = circle_of(row, &format!("sites[{i}]"))?;
            if c.radius != 0.0 && self.kind != Kind::Corollary2d {
                return Err(schema_err(format!("sites[{i}]: sites are points (radius 0)")));
            }
        }
        for (i, row) in self.circles.iter().enumerate() {
            let c = circle_of(row, &format!("circles[{i}]"))?;
            if self.kind == Kind::Points2d && c.radius != 0.0 {
                return Err(schema_err(format!("circles[{i}]: points2d needs radius 0")));
            }
        }
        for (i, row) in self.spheres.iter().enumerate() {
            if row.len() != 4 || row.iter().any(|v| !v.is_finite()) || row[3] < 0.0 {
                return Err(schema_err(format!("spheres[{i}]: expected [x, y, z, r] with r >= 0")));
            }
        }
        if let Some(p) = &self.params {
            if p.j.is_some_and(|j| j > 2) || p.k.is_some_and(|k| k > 1) {
                return Err(schema_err("params: j must be 0..=2 and k 0..=1"));
            }
            if p.tol.is_some_and(|t| !(t > 0.0 && t.is_finite())) {
                return Err(schema_err("params: tol must be positive"));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tolerance.unwrap_or_default()
    }

    pub fn params(&self) -> Params {
        self.params.clone().unwrap_or_default()
    }

    pub fn site_points(&self) -> Vec<Point2> {
        self.site_circles().iter().map(|c| c.center).collect()
    }

    pub fn site_circles(&self) -> Vec<Circle2> {
        self.sites.iter().map(|r| circle_of(r, "site").expect("validated")).collect()
    }

    pub fn circle_list(&self) -> Vec<Circle2> {
        self.circles.iter().map(|r| circle_of(r, "circle").expect("validated")).collect()
    }

    /// The planar instance of a theorem2d, points2d or sweep scenario.
    pub fn instance(&self) -> CarouselInstance {
        let s = self.site_points();
        let c = self.circle_list();
        CarouselInstance::new([s[0], s[1], s[2]], c[0], c[1])
    }

    pub fn corollary(&self) -> CorollaryInstance {
        let g = self.site_circles();
        let c = self.circle_list();
        CorollaryInstance {
            generators: [g[0], g[1], g[2]],
            circles: [c[0], c[1]],
        }
    }

    pub fn ex41(&self) -> (f64, f64) {
        let p = self.params();
        let side = p.side.unwrap_or(1.0);
        (side, p.r.unwrap_or(side / 10.0))
    }

    pub fn ex42(&self) -> Example42Params {
        let p = self.params();
        let d = Example42Params::default();
        Example42Params {
            t: p.t.unwrap_or(d.t),
            arc_radius_factor: p.arc_radius_factor.unwrap_or(d.arc_radius_factor),
            side: p.side.unwrap_or(d.side),
        }
    }

    fn row(c: &Circle2) -> Vec<f64> {
        vec![c.center.x, c.center.y, c.radius]
    }

    pub fn from_instance(kind: Kind, inst: &CarouselInstance, seed: Option<u64>) -> Self {
        Self {
            schema: SCHEMA.into(),
            kind,
            sites: inst.sites.iter().map(|&p| Self::row(&Circle2::point(p))).collect(),
            circles: inst.circles.iter().map(Self::row).collect(),
            spheres: vec![],
            tolerance: None,
            seed,
            params: None,
        }
    }

    pub fn from_corollary(inst: &CorollaryInstance, seed: Option<u64>) -> Self {
        Self {
            schema: SCHEMA.into(),
            kind: Kind::Corollary2d,
            sites: inst.generators.iter().map(Self::row).collect(),
            circles: inst.circles.iter().map(Self::row).collect(),
            spheres: vec![],
            tolerance: None,
            seed,
            params: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_roundtrip() {
        let text = r#"{"schema":"carousel/1","kind":"theorem2d",
            "sites":[[0,0],[6,0],[0,6,0]],"circles":[[2,2,1],[2,2,0.5]],"seed":3}"#;
        let sc = Scenario::parse(text).unwrap();
        assert_eq!(sc.kind, Kind::Theorem2d);
        assert_eq!(sc.instance().circles[1].radius, 0.5);
        let again = Scenario::parse(&sc.to_json()).unwrap();
        assert_eq!(again.instance(), sc.instance());
    }

    #[test]
    fn errors_are_classified() {
        assert!(matches!(Scenario::parse("{not json"), Err(CliError::Parse(_))));
        let wrong_schema = r#"{"schema":"carousel/2","kind":"theorem2d"}"#;
        assert!(matches!(Scenario::parse(wrong_schema), Err(CliError::Schema(_))));
        let unknown_kind = r#"{"schema":"carousel/1","kind":"cube"}"#;
        assert!(matches!(Scenario::parse(unknown_kind), Err(CliError::Schema(_))));
        let short = r#"{"schema":"carousel/1","kind":"theorem2d","sites":[[0,0]],"circles":[]}"#;
        assert!(matches!(Scenario::parse(short), Err(CliError::Schema(_))));
        let neg = r#"{"schema":"carousel/1","kind":"theorem2d",
            "sites":[[0,0],[6,0],[0,6]],"circles":[[2,2,-1],[2,2,0.5]]}"#;
        assert!(matches!(Scenario::parse(neg), Err(CliError::Schema(_))));
        let extra = r#"{"schema":"carousel/1","kind":"sphere3_ex41","colour":"red"}"#;
        assert!(matches!(Scenario::parse(extra), Err(CliError::Schema(_))));
    }

    #[test]
    fn kind_names() {
        assert_eq!(Kind::Sphere3Ex41.to_string(), "sphere3_ex41");
        assert_eq!(Kind::Theorem2d.to_string(), "theorem2d");
    }
}
