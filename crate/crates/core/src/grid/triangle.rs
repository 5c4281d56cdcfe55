use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::GridPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    // Blue sorts first: it is the preferred color on segment-order ties.
    Blue,
    Red,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// A right isosceles triangle of the recursive subdivision.
///
/// `right` is the right-angle vertex and `[a, b]` the hypotenuse. Splitting
/// along the height yields the child on the `a` side first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triangle {
    pub right: GridPoint,
    pub a: GridPoint,
    pub b: GridPoint,
    pub level: u32,
}

fn cross(o: GridPoint, p: GridPoint, q: GridPoint) -> i64 {
    let (d1, d2) = (p - o, q - o);
    d1.x * d2.y - d1.y * d2.x
}

impl Triangle {
    /// The level-1 triangle with vertices (0,0), (n,0), (0,n).
    pub fn root(n: i64) -> Triangle {
        Triangle {
            right: GridPoint::new(0, 0),
            a: GridPoint::new(n, 0),
            b: GridPoint::new(0, n),
            level: 1,
        }
    }

    pub fn vertices(&self) -> [GridPoint; 3] {
        [self.right, self.a, self.b]
    }

    /// Color of the hypotenuse: blue on odd levels, red on even levels.
    pub fn hypotenuse_color(&self) -> Color {
        if self.level % 2 == 1 {
            Color::Blue
        } else {
            Color::Red
        }
    }

    pub fn cathetus_color(&self) -> Color {
        self.hypotenuse_color().other()
    }

    /// Foot of the height on the hypotenuse (its midpoint).
    pub fn foot(&self) -> GridPoint {
        GridPoint::new((self.a.x + self.b.x) / 2, (self.a.y + self.b.y) / 2)
    }

    /// Unit lattice step from the right-angle vertex towards the foot, and
    /// the number of such steps the height spans.
    pub fn height_steps(&self) -> (GridPoint, i64) {
        let d = self.foot() - self.right;
        let k = d.x.abs().max(d.y.abs());
        (GridPoint::new(d.x.signum(), d.y.signum()), k)
    }

    /// Leg length in lattice steps (axis steps or diagonal steps).
    pub fn leg_steps(&self) -> i64 {
        let d = self.a - self.right;
        d.x.abs().max(d.y.abs())
    }

    /// True when the legs are axis-aligned.
    pub fn axis_legs(&self) -> bool {
        let d = self.a - self.right;
        d.x == 0 || d.y == 0
    }

    pub fn split(&self) -> [Triangle; 2] {
        let w = self.foot();
        [
            Triangle {
                right: w,
                a: self.a,
                b: self.right,
                level: self.level + 1,
            },
            Triangle {
                right: w,
                a: self.right,
                b: self.b,
                level: self.level + 1,
            },
        ]
    }

    /// Closed containment.
    pub fn contains(&self, p: GridPoint) -> bool {
        let [u, a, b] = self.vertices();
        let s = cross(u, a, b).signum();
        cross(u, a, p) * s >= 0 && cross(a, b, p) * s >= 0 && cross(b, u, p) * s >= 0
    }

    /// Which child of [`split`](Self::split) holds `p`; points on the height
    /// go to the first child.
    pub fn child_index(&self, p: GridPoint) -> usize {
        let w = self.foot();
        let sa = cross(self.right, w, self.a).signum();
        let sp = cross(self.right, w, p).signum();
        if sp == 0 || sp == sa {
            0
        } else {
            1
        }
    }

    /// Signed side of `p` relative to the height line: 0 on the line.
    pub fn height_side(&self, p: GridPoint) -> i64 {
        cross(self.right, self.foot(), p).signum()
    }

    /// Integer points of the closed triangle.
    pub fn lattice_points(&self) -> Vec<GridPoint> {
        let vs = self.vertices();
        let (x0, x1) = (vs.iter().map(|p| p.x).min().unwrap(), vs.iter().map(|p| p.x).max().unwrap());
        let (y0, y1) = (vs.iter().map(|p| p.y).min().unwrap(), vs.iter().map(|p| p.y).max().unwrap());
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let p = GridPoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// The lattice points of the two catheti, each listed from the
    /// right-angle vertex outwards.
    pub fn catheti(&self) -> [Vec<GridPoint>; 2] {
        let walk = |end: GridPoint| {
            let d = end - self.right;
            let k = d.x.abs().max(d.y.abs());
            let step = GridPoint::new(d.x.signum(), d.y.signum());
            (0..=k)
                .map(|j| self.right + GridPoint::new(step.x * j, step.y * j))
                .collect::<Vec<_>>()
        };
        [walk(self.a), walk(self.b)]
    }
}
