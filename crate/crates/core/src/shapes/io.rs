use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GridSet, IntervalUnion, RadialShape, Shape};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ShapeFile {
    Radial { center: [f64; 2], radii: Vec<f64> },
    Grid { origin: Vec<f64>, h: f64, rows: Vec<String> },
    Intervals { pairs: Vec<[f64; 2]> },
}

impl TryFrom<ShapeFile> for Shape {
    type Error = Error;

    fn try_from(f: ShapeFile) -> Result<Shape> {
        match f {
            ShapeFile::Radial { center, radii } => Ok(Shape::Radial(RadialShape::new(center, radii)?)),
            ShapeFile::Grid { origin, h, rows } => {
                let dim = match origin.len() {
                    1 => 1,
                    2 => 2,
                    n => return Err(Error::InvalidShape(format!("grid origin has {n} coordinates"))),
                };
                if rows.is_empty() {
                    return Err(Error::InvalidShape("grid has no rows".into()));
                }
                if dim == 1 && rows.len() != 1 {
                    return Err(Error::InvalidShape("one-dimensional grid must have one row".into()));
                }
                let nx = rows[0].chars().count();
                let mut cells = Vec::with_capacity(nx * rows.len());
                for (j, row) in rows.iter().enumerate() {
                    if row.chars().count() != nx {
                        return Err(Error::InvalidShape(format!("row {j} has a different length")));
                    }
                    for c in row.chars() {
                        cells.push(match c {
                            '1' => true,
                            '0' => false,
                            other => {
                                return Err(Error::InvalidShape(format!("unexpected character {other:?} in row {j}")))
                            }
                        });
                    }
                }
                let o = [origin[0], origin.get(1).copied().unwrap_or(0.0)];
                Ok(Shape::Grid(GridSet::new(dim, o, h, nx, rows.len(), cells)?))
            }
            ShapeFile::Intervals { pairs } => Ok(Shape::Intervals(IntervalUnion::new(
                pairs.into_iter().map(|[a, b]| (a, b)).collect(),
            )?)),
        }
    }
}

impl From<&Shape> for ShapeFile {
    fn from(s: &Shape) -> Self {
        match s {
            Shape::Radial(r) => ShapeFile::Radial {
                center: r.center,
                radii: r.radii.clone(),
            },
            Shape::Grid(g) => ShapeFile::Grid {
                origin: if g.dim() == 1 { vec![g.origin()[0]] } else { g.origin().to_vec() },
                h: g.h(),
                rows: g.rows(),
            },
            Shape::Intervals(u) => ShapeFile::Intervals {
                pairs: u.pairs().iter().map(|&(a, b)| [a, b]).collect(),
            },
        }
    }
}

impl Shape {
    pub fn from_json(text: &str) -> Result<Shape> {
        serde_json::from_str::<ShapeFile>(text)?.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ShapeFile::from(self)).expect("shape serialization")
    }
}

pub fn load_shape(path: impl AsRef<Path>) -> Result<Shape> {
    Shape::from_json(&std::fs::read_to_string(path)?)
}

pub fn save_shape(shape: &Shape, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, shape.to_json())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_round_trip() {
        let text = r#"{"kind":"grid","origin":[0.0,1.0],"h":0.5,"rows":["010","111"]}"#;
        let s = Shape::from_json(text).unwrap();
        let Shape::Grid(g) = &s else { panic!() };
        assert_eq!((g.nx(), g.ny(), g.count()), (3, 2, 4));
        assert!(g.occupied(1, 0) && !g.occupied(0, 0));
        assert_eq!(Shape::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn one_dimensional_grid() {
        let s = Shape::from_json(r#"{"kind":"grid","origin":[-1.0],"h":0.25,"rows":["01110"]}"#).unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.volume().unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn intervals_and_radial() {
        let s = Shape::from_json(r#"{"kind":"intervals","pairs":[[-1,1],[2,3]]}"#).unwrap();
        assert!((s.volume().unwrap() - 3.0).abs() < 1e-15);
        assert!(Shape::from_json(r#"{"kind":"radial","center":[0,0],"radii":[1,1]}"#).is_err());
    }
}
