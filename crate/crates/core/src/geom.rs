//! Core geometric types and circular-chord helpers.
//!
//! All disks in this crate are closed unit disks; rectangles are axis-aligned
//! with their lower-left corner at the origin. A [`Covering`] is the pairing of
//! one rectangle with a set of unit-disk centers — whether the disks actually
//! cover the rectangle is the verifier's business, not a type invariant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{guarded_acos, guarded_sqrt};

/// Relative tolerance below which two consecutive polygon edges count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-12;
/// Distance below which two polygon vertices count as the same point of the net.
pub const VERTEX_MERGE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }
}

/// A closed disk of radius 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Point,
}

impl Disk {
    pub fn new(center: Point) -> Self {
        Disk { center }
    }

    /// Closed-disk membership: distance from the center at most 1.
    pub fn contains(&self, p: Point) -> bool {
        self.center.dist2(p) <= 1.0
    }
}

/// An axis-aligned `width x height` rectangle anchored at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn new(width: f64, height: f64) -> Result<Self> {
        if !(width > 0.0 && height > 0.0 && width.is_finite() && height.is_finite()) {
            return Err(Error::Domain(format!(
                "rectangle sides must be positive and finite, got {width} x {height}"
            )));
        }
        Ok(Rect { width, height })
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * self.width, 0.5 * self.height)
    }

    /// Corners in counter-clockwise order starting at the origin.
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(0.0, 0.0),
            Point::new(self.width, 0.0),
            Point::new(self.width, self.height),
            Point::new(0.0, self.height),
        ]
    }

    pub fn contains(&self, p: Point) -> bool {
        (0.0..=self.width).contains(&p.x) && (0.0..=self.height).contains(&p.y)
    }
}

/// A rectangle together with the unit disks meant to cover it.
#[derive(Clone, Debug, PartialEq)]
pub struct Covering {
    pub rect: Rect,
    pub disks: Vec<Disk>,
}

impl Covering {
    pub fn new(rect: Rect, disks: Vec<Disk>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::Domain("a covering needs at least one disk".into()));
        }
        for (i, d) in disks.iter().enumerate() {
            if !(d.center.x.is_finite() && d.center.y.is_finite()) {
                return Err(Error::Domain(format!("disk {i} has a non-finite center")));
            }
        }
        Ok(Covering { rect, disks })
    }

    pub fn n(&self) -> usize {
        self.disks.len()
    }

    /// Scale the rectangle by `s` about its own center, keep the disks fixed in
    /// the plane, and re-anchor the scaled rectangle at the origin.
    ///
    /// Used by scale maximization: growing `s` asks the same disks to cover a
    /// larger concentric rectangle.
    pub fn scaled_about_center(&self, s: f64) -> Result<Covering> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Domain(format!("scale must be positive, got {s}")));
        }
        let c = self.rect.center();
        let rect = Rect::new(s * self.rect.width, s * self.rect.height)?;
        let disks = self
            .disks
            .iter()
            .map(|d| {
                Disk::new(Point::new(
                    d.center.x - (1.0 - s) * c.x,
                    d.center.y - (1.0 - s) * c.y,
                ))
            })
            .collect();
        Covering::new(rect, disks)
    }
}

/// A strictly convex polygon with vertices stored counter-clockwise.
///
/// The constructor normalizes orientation, merges vertices closer than
/// `VERTEX_MERGE_TOL`, and drops vertices whose adjacent edges are collinear
/// within `COLLINEAR_TOL` (relative to the edge lengths). What remains must be
/// strictly convex with at least three vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "{} vertices, need at least 3",
                vertices.len()
            )));
        }
        // Merge consecutive near-duplicates (cyclically).
        let mut vs: Vec<Point> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if vs.last().map_or(true, |u| u.dist(v) > VERTEX_MERGE_TOL) {
                vs.push(v);
            }
        }
        while vs.len() >= 2 && vs[0].dist(vs[vs.len() - 1]) <= VERTEX_MERGE_TOL {
            vs.pop();
        }
        if vs.len() < 3 {
            return Err(Error::InvalidPolygon("degenerate after merging".into()));
        }
        if shoelace(&vs) < 0.0 {
            vs.reverse();
        }
        // Drop collinear vertices until stable.
        loop {
            let m = vs.len();
            if m < 3 {
                return Err(Error::InvalidPolygon("degenerate after merging".into()));
            }
            let mut keep: Vec<Point> = Vec::with_capacity(m);
            for i in 0..m {
                let u = vs[(i + m - 1) % m];
                let v = vs[i];
                let w = vs[(i + 1) % m];
                let c = cross(u, v, w);
                if c.abs() > COLLINEAR_TOL * u.dist(v).max(1e-300) * v.dist(w).max(1e-300) {
                    keep.push(v);
                }
            }
            if keep.len() == vs.len() {
                break;
            }
            vs = keep;
        }
        if vs.len() < 3 {
            return Err(Error::InvalidPolygon("degenerate after merging".into()));
        }
        let m = vs.len();
        for i in 0..m {
            if cross(vs[i], vs[(i + 1) % m], vs[(i + 2) % m]) <= 0.0 {
                return Err(Error::InvalidPolygon("not strictly convex".into()));
            }
        }
        Ok(ConvexPolygon { vertices: vs })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn sides(&self) -> usize {
        self.vertices.len()
    }

    /// Positive area by the shoelace formula.
    pub fn area(&self) -> f64 {
        shoelace(&self.vertices)
    }

    /// Whether `p` lies inside or on the boundary (within `tol` of it).
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let m = self.vertices.len();
        (0..m).all(|i| {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % m];
            cross(a, b, p) >= -tol * a.dist(b).max(1e-300)
        })
    }
}

fn shoelace(vs: &[Point]) -> f64 {
    let m = vs.len();
    let mut s = 0.0;
    for i in 0..m {
        let a = vs[i];
        let b = vs[(i + 1) % m];
        s += a.x * b.y - b.x * a.y;
    }
    0.5 * s
}

/// Central angle subtended by a chord of length `l` in a unit circle:
/// `acos(1 - l^2/2)`, for `l` in `[0, 2]`.
pub fn central_angle(l: f64) -> Result<f64> {
    check_chord("chord length", l)?;
    guarded_acos(1.0 - 0.5 * l * l)
}

/// Area of the triangle formed by a chord of length `l` and the two unit radii
/// to its endpoints: `(l/4) * sqrt(4 - l^2)`.
pub fn chord_triangle_area(l: f64) -> Result<f64> {
    check_chord("chord length", l)?;
    Ok(0.25 * l * guarded_sqrt(4.0 - l * l)?)
}

/// Length of the chord shared by two unit circles that cut chords of lengths
/// `l1` and `l2` on a common line, with the three chords pairwise meeting:
/// `sqrt((4 - l1*l2 + sqrt((4 - l1^2)(4 - l2^2))) / 2)`.
pub fn shared_chord(l1: f64, l2: f64) -> Result<f64> {
    check_chord("first chord length", l1)?;
    check_chord("second chord length", l2)?;
    let root = guarded_sqrt((4.0 - l1 * l1) * (4.0 - l2 * l2))?;
    guarded_sqrt(0.5 * (4.0 - l1 * l2 + root))
}

fn check_chord(what: &str, l: f64) -> Result<()> {
    if (0.0..=2.0).contains(&l) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be in [0, 2], got {l}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn rect_rejects_bad_sides() {
        assert!(Rect::new(0.0, 1.0).is_err());
        assert!(Rect::new(1.0, -2.0).is_err());
        assert!(Rect::new(f64::NAN, 1.0).is_err());
        assert!(Rect::new(3.0, 2.0).is_ok());
    }

    #[test]
    fn disk_membership_is_closed() {
        let d = Disk::new(Point::new(0.0, 0.0));
        assert!(d.contains(Point::new(1.0, 0.0)));
        assert!(d.contains(Point::new(0.6, 0.8)));
        assert!(!d.contains(Point::new(1.0 + 1e-9, 0.0)));
    }

    #[test]
    fn covering_requires_disks_and_finite_centers() {
        let r = Rect::new(1.0, 1.0).unwrap();
        assert!(Covering::new(r, vec![]).is_err());
        assert!(Covering::new(r, vec![Disk::new(Point::new(f64::INFINITY, 0.0))]).is_err());
    }

    #[test]
    fn scaling_about_center_keeps_relative_geometry() {
        let r = Rect::new(4.0, 2.0).unwrap();
        let c = Covering::new(r, vec![Disk::new(Point::new(2.0, 1.0))]).unwrap();
        let s = c.scaled_about_center(0.5).unwrap();
        assert_abs_diff_eq!(s.rect.width, 2.0);
        assert_abs_diff_eq!(s.rect.height, 1.0);
        // The disk sat at the rectangle center and must stay there.
        assert_abs_diff_eq!(s.disks[0].center.x, 1.0);
        assert_abs_diff_eq!(s.disks[0].center.y, 0.5);

        let c2 = Covering::new(
            Rect::new(2.0, 2.0).unwrap(),
            vec![Disk::new(Point::new(0.0, 0.0))],
        )
        .unwrap();
        let s2 = c2.scaled_about_center(2.0).unwrap();
        // Corner disk: distance to the (moving) rectangle center must scale
        // with the rectangle in relative terms, i.e. stay put in the plane
        // after re-anchoring by (1 - s) * center = -(1, 1).
        assert_abs_diff_eq!(s2.disks[0].center.x, 1.0);
        assert_abs_diff_eq!(s2.disks[0].center.y, 1.0);
    }

    #[test]
    fn polygon_normalizes_orientation_and_collinearity() {
        // Clockwise square with a redundant midpoint on the bottom edge.
        let p = ConvexPolygon::new(vec![
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
            Point::new(0.5, 0.0),
            Point::new(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(p.sides(), 4);
        assert_abs_diff_eq!(p.area(), 1.0);
        assert!(shoelace(p.vertices()) > 0.0);
    }

    #[test]
    fn polygon_rejects_nonconvex_and_degenerate() {
        let dart = vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(0.5, 0.5),
            Point::new(0.0, 2.0),
        ];
        assert!(ConvexPolygon::new(dart).is_err());
        let line = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
        ];
        assert!(ConvexPolygon::new(line).is_err());
    }

    #[test]
    fn polygon_contains_boundary_points() {
        let p = ConvexPolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 2.0),
            Point::new(0.0, 2.0),
        ])
        .unwrap();
        assert!(p.contains(Point::new(1.0, 1.0), 1e-12));
        assert!(p.contains(Point::new(2.0, 1.0), 1e-12));
        assert!(!p.contains(Point::new(2.1, 1.0), 1e-12));
    }

    #[test]
    fn central_angle_matches_known_chords() {
        // A unit chord subtends 60 degrees; a diameter subtends 180.
        assert_abs_diff_eq!(
            central_angle(1.0).unwrap(),
            std::f64::consts::FRAC_PI_3,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            central_angle(2.0).unwrap(),
            std::f64::consts::PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            central_angle(std::f64::consts::SQRT_2).unwrap(),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-15
        );
        assert!(central_angle(2.5).is_err());
        assert!(central_angle(-0.1).is_err());
    }

    #[test]
    fn chord_triangle_area_known_values() {
        // l = 1: equilateral-ish triangle with area sqrt(3)/4.
        assert_abs_diff_eq!(
            chord_triangle_area(1.0).unwrap(),
            0.433_012_701_892_219_32,
            epsilon = 1e-15
        );
        // l = sqrt(2): right isoceles, area 1/2.
        assert_abs_diff_eq!(
            chord_triangle_area(std::f64::consts::SQRT_2).unwrap(),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(chord_triangle_area(2.0).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn shared_chord_known_values() {
        // Two chords of length sqrt(3) meet in a shared chord of length 1.
        let s3 = 3.0_f64.sqrt();
        assert_abs_diff_eq!(shared_chord(s3, s3).unwrap(), 1.0, epsilon = 1e-12);
        // Two sqrt(2) chords share a sqrt(2) chord (square inscribed in the lens).
        assert_abs_diff_eq!(
            shared_chord(std::f64::consts::SQRT_2, std::f64::consts::SQRT_2).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
        // Two diameters leave nothing to share.
        assert_abs_diff_eq!(shared_chord(2.0, 2.0).unwrap(), 0.0, epsilon = 1e-12);
        // Symmetry.
        let a = shared_chord(0.3, 1.7).unwrap();
        let b = shared_chord(1.7, 0.3).unwrap();
        assert_eq!(a, b);
    }
}
