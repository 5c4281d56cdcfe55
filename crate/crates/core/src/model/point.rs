use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

/// A point of the integer plane.
///
/// Ordering is lexicographic on `(x, y)`; every tie-break in the crate that
/// speaks of "lexicographic point order" uses this ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        GridPoint { x, y }
    }

    pub fn dist2(self, other: GridPoint) -> i64 {
        let d = self - other;
        d.x * d.x + d.y * d.y
    }

    pub fn dist(self, other: GridPoint) -> f64 {
        (self.dist2(other) as f64).sqrt()
    }

    pub fn linf(self, other: GridPoint) -> i64 {
        let d = self - other;
        d.x.abs().max(d.y.abs())
    }

    pub fn to_plane(self) -> PlanePoint {
        PlanePoint::new(self.x as f64, self.y as f64)
    }
}

impl From<[i64; 2]> for GridPoint {
    fn from(c: [i64; 2]) -> Self {
        GridPoint::new(c[0], c[1])
    }
}

impl From<GridPoint> for [i64; 2] {
    fn from(p: GridPoint) -> Self {
        [p.x, p.y]
    }
}

impl Add for GridPoint {
    type Output = GridPoint;
    fn add(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for GridPoint {
    type Output = GridPoint;
    fn sub(self, o: GridPoint) -> GridPoint {
        GridPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// A point of the integer cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 3]", into = "[i64; 3]")]
pub struct GridPoint3 {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl GridPoint3 {
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        GridPoint3 { x, y, z }
    }

    pub fn coords(self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn linf(self, o: GridPoint3) -> i64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.z - o.z).abs())
    }
}

impl From<[i64; 3]> for GridPoint3 {
    fn from(c: [i64; 3]) -> Self {
        GridPoint3::new(c[0], c[1], c[2])
    }
}

impl From<GridPoint3> for [i64; 3] {
    fn from(p: GridPoint3) -> Self {
        p.coords()
    }
}

impl fmt::Display for GridPoint3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// A point of the real plane with finite coordinates.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        PlanePoint { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, o: PlanePoint) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

impl From<[f64; 2]> for PlanePoint {
    fn from(c: [f64; 2]) -> Self {
        PlanePoint::new(c[0], c[1])
    }
}

impl From<PlanePoint> for [f64; 2] {
    fn from(p: PlanePoint) -> Self {
        [p.x, p.y]
    }
}

/// Location of a tree vertex. Integer sites serialize as integer arrays and
/// real sites as float arrays, which keeps them apart on parsing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Site {
    Grid2(GridPoint),
    Grid3(GridPoint3),
    Plane(PlanePoint),
}

impl Site {
    /// Coordinates as reals, padded with zero to three components.
    pub fn coords(&self) -> [f64; 3] {
        match *self {
            Site::Grid2(p) => [p.x as f64, p.y as f64, 0.0],
            Site::Grid3(p) => [p.x as f64, p.y as f64, p.z as f64],
            Site::Plane(p) => [p.x, p.y, 0.0],
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Site::Grid3(_) => 3,
            _ => 2,
        }
    }

    pub fn grid2(&self) -> Option<GridPoint> {
        match *self {
            Site::Grid2(p) => Some(p),
            _ => None,
        }
    }

    pub fn grid3(&self) -> Option<GridPoint3> {
        match *self {
            Site::Grid3(p) => Some(p),
            _ => None,
        }
    }

    /// Integer coordinates, when the site is a grid point.
    pub fn integer_coords(&self) -> Option<Vec<i64>> {
        match *self {
            Site::Grid2(p) => Some(vec![p.x, p.y]),
            Site::Grid3(p) => Some(p.coords().to_vec()),
            Site::Plane(_) => None,
        }
    }
}

impl From<GridPoint> for Site {
    fn from(p: GridPoint) -> Self {
        Site::Grid2(p)
    }
}

impl From<GridPoint3> for Site {
    fn from(p: GridPoint3) -> Self {
        Site::Grid3(p)
    }
}

impl From<PlanePoint> for Site {
    fn from(p: PlanePoint) -> Self {
        Site::Plane(p)
    }
}

/// The metric a tree's edge lengths are measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "euclid2")]
    Euclid2,
    #[serde(rename = "linf2")]
    Linf2,
    #[serde(rename = "linf3")]
    Linf3,
    /// Edge lengths are free weights, not distances between the sites.
    #[serde(rename = "abstract")]
    Abstract,
}

impl Metric {
    /// Distance between two sites; NaN for [`Metric::Abstract`].
    pub fn distance(self, a: &Site, b: &Site) -> f64 {
        let (p, q) = (a.coords(), b.coords());
        match self {
            Metric::Abstract => f64::NAN,
            Metric::Euclid2 => (p[0] - q[0]).hypot(p[1] - q[1]),
            Metric::Linf2 => (p[0] - q[0]).abs().max((p[1] - q[1]).abs()),
            Metric::Linf3 => (p[0] - q[0])
                .abs()
                .max((p[1] - q[1]).abs())
                .max((p[2] - q[2]).abs()),
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            Metric::Linf3 => 3,
            _ => 2,
        }
    }
}

/// Norm used by checkers that compare tree distances against point distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Euclidean,
    Linf,
}

impl Norm {
    pub fn distance(self, a: &Site, b: &Site) -> f64 {
        let (p, q) = (a.coords(), b.coords());
        match self {
            Norm::Euclidean => {
                ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
            }
            Norm::Linf => (p[0] - q[0])
                .abs()
                .max((p[1] - q[1]).abs())
                .max((p[2] - q[2]).abs()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sites_keep_their_kind_through_json() {
        let sites = vec![
            Site::Grid2(GridPoint::new(3, 0)),
            Site::Grid3(GridPoint3::new(1, 2, 3)),
            Site::Plane(PlanePoint::new(1.0, 2.0)),
            Site::Plane(PlanePoint::new(0.25, -7.5)),
        ];
        let text = serde_json::to_string(&sites).unwrap();
        assert_eq!(text, "[[3,0],[1,2,3],[1.0,2.0],[0.25,-7.5]]");
        let back: Vec<Site> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sites);
    }

    #[test]
    fn lexicographic_order() {
        assert!(GridPoint::new(1, 2) < GridPoint::new(2, 1));
        assert!(GridPoint::new(0, 1) < GridPoint::new(1, 0));
    }
}
