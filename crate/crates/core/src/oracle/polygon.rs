use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;

type Point = (f64, f64);

/// A simple planar polygon, stored counterclockwise, with optional holes
/// stored clockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    outer: Vec<Point>,
    holes: Vec<Vec<Point>>,
}

fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        let (x0, y0) = ring[i];
        let (x1, y1) = ring[(i + 1) % n];
        acc.add(x0 * y1 - x1 * y0);
    }
    0.5 * acc.value()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

fn edges(ring: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    (0..ring.len()).map(move |i| (ring[i], ring[(i + 1) % ring.len()]))
}

fn check_ring(ring: &[Point]) -> Result<()> {
    if ring.len() < 3 {
        return Err(Error::DegeneratePolygon(format!("{} vertices", ring.len())));
    }
    if ring.iter().any(|p| !(p.0.is_finite() && p.1.is_finite())) {
        return Err(Error::DegeneratePolygon("non-finite vertex".into()));
    }
    let n = ring.len();
    for i in 0..n {
        if ring[i] == ring[(i + 1) % n] {
            return Err(Error::DegeneratePolygon(format!("repeated vertex {:?}", ring[i])));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n]) {
                return Err(Error::DegeneratePolygon(format!("edges {i} and {j} intersect")));
            }
        }
    }
    if signed_area(ring).abs() <= 0.0 {
        return Err(Error::DegeneratePolygon("zero area".into()));
    }
    Ok(())
}

fn ring_contains(ring: &[Point], p: Point) -> bool {
    let mut inside = false;
    for (a, b) in edges(ring) {
        if (a.1 > p.1) != (b.1 > p.1) {
            let x = a.0 + (p.1 - a.1) * (b.0 - a.0) / (b.1 - a.1);
            if p.0 < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn segment_distance_sq(a: Point, b: Point, p: Point) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len_sq = dx * dx + dy * dy;
    let t = (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len_sq).clamp(0.0, 1.0);
    let (qx, qy) = (a.0 + t * dx - p.0, a.1 + t * dy - p.1);
    qx * qx + qy * qy
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        Self::with_holes(vertices, Vec::new())
    }

    pub fn with_holes(mut outer: Vec<Point>, mut holes: Vec<Vec<Point>>) -> Result<Self> {
        check_ring(&outer)?;
        if signed_area(&outer) < 0.0 {
            outer.reverse();
        }
        for hole in &mut holes {
            check_ring(hole)?;
            if signed_area(hole) > 0.0 {
                hole.reverse();
            }
            if hole.iter().any(|&p| !ring_contains(&outer, p)) {
                return Err(Error::DegeneratePolygon("hole vertex outside the outer ring".into()));
            }
            for (a, b) in edges(hole) {
                if edges(&outer).any(|(c, d)| segments_intersect(a, b, c, d)) {
                    return Err(Error::DegeneratePolygon("hole crosses the outer ring".into()));
                }
            }
        }
        let poly = Polygon { outer, holes };
        if poly.area() <= 0.0 {
            return Err(Error::DegeneratePolygon("non-positive area".into()));
        }
        Ok(poly)
    }

    /// Axis-aligned square `[0, side]^2`.
    pub fn square(side: f64) -> Result<Self> {
        Self::new(vec![(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)])
    }

    pub fn equilateral_triangle(side: f64) -> Result<Self> {
        Self::new(vec![(0.0, 0.0), (side, 0.0), (0.5 * side, 0.5 * 3f64.sqrt() * side)])
    }

    /// The 12-vertex cross left over when the four corner squares of side
    /// `side / 3` are removed from `[0, side]^2`.
    pub fn cantor_carpet_generator(side: f64) -> Result<Self> {
        let (a, b, l) = (side / 3.0, 2.0 * side / 3.0, side);
        Self::new(vec![
            (a, 0.0),
            (b, 0.0),
            (b, a),
            (l, a),
            (l, b),
            (b, b),
            (b, l),
            (a, l),
            (a, b),
            (0.0, b),
            (0.0, a),
            (a, a),
        ])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.outer
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    fn rings(&self) -> impl Iterator<Item = &[Point]> {
        std::iter::once(self.outer.as_slice()).chain(self.holes.iter().map(|h| h.as_slice()))
    }

    pub fn area(&self) -> f64 {
        self.rings().map(signed_area).sum()
    }

    pub fn perimeter(&self) -> f64 {
        self.rings().flat_map(edges).map(|(a, b)| ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt()).sum()
    }

    /// Sum over reflex vertices of the turning excess `interior angle - pi`.
    fn reflex_excess(&self) -> f64 {
        let mut total = 0.0;
        for ring in self.rings() {
            let n = ring.len();
            for i in 0..n {
                let (p, q, r) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
                let turn = (q.0 - p.0) * (r.1 - q.1) - (q.1 - p.1) * (r.0 - q.0);
                if turn < 0.0 {
                    let u = (q.0 - p.0, q.1 - p.1);
                    let v = (r.0 - q.0, r.1 - q.1);
                    let cos = (u.0 * v.0 + u.1 * v.1) / ((u.0.hypot(u.1)) * v.0.hypot(v.1));
                    total += cos.clamp(-1.0, 1.0).acos();
                }
            }
        }
        total
    }

    pub fn contains(&self, p: Point) -> bool {
        ring_contains(&self.outer, p) && !self.holes.iter().any(|h| ring_contains(h, p))
    }

    /// Euclidean distance from `p` to the boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.rings().flat_map(edges).map(|(a, b)| segment_distance_sq(a, b, p)).fold(f64::INFINITY, f64::min).sqrt()
    }

    fn bounding_box(&self) -> (Point, Point) {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &self.outer {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        (lo, hi)
    }
}

/// Area of `{x in poly : dist(x, complement) <= eps}` by midpoint sampling on
/// a grid of spacing `grid_h`, together with an error bound.
///
/// A cell can only be misclassified if the boundary or the inner level set
/// `{dist = eps}` passes through it, so the error is at most the area of the
/// cells meeting either curve: `sqrt(2) h (L_boundary + L_level) + 4 pi h^2`
/// per vertex, where `L_level <= perimeter + eps * reflex excess`.
pub fn polygon_inner_volume(poly: &Polygon, eps: f64, grid_h: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if !(grid_h > 0.0 && grid_h.is_finite()) {
        return Err(Error::InvalidArgument(format!("grid spacing must be positive, got {grid_h}")));
    }
    let ((x0, y0), (x1, y1)) = poly.bounding_box();
    let nx = ((x1 - x0) / grid_h).ceil() as usize;
    let ny = ((y1 - y0) / grid_h).ceil() as usize;
    let segs: Vec<(Point, Point)> = poly.rings().flat_map(edges).collect();
    let eps_sq = eps * eps;
    let mut count: u64 = 0;
    for j in 0..ny {
        let y = y0 + (j as f64 + 0.5) * grid_h;
        for i in 0..nx {
            let p = (x0 + (i as f64 + 0.5) * grid_h, y);
            if !poly.contains(p) {
                continue;
            }
            if segs.iter().any(|&(a, b)| segment_distance_sq(a, b, p) <= eps_sq) {
                count += 1;
            }
        }
    }
    let value = count as f64 * grid_h * grid_h;
    let perimeter = poly.perimeter();
    let level = perimeter + eps * poly.reflex_excess();
    let vertices: usize = poly.rings().map(|r| r.len()).sum();
    let bound = 2f64.sqrt() * grid_h * (perimeter + level) + 4.0 * PI * grid_h * grid_h * vertices as f64;
    Ok((value, bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_band() {
        let sq = Polygon::square(1.0).unwrap();
        let (v, b) = polygon_inner_volume(&sq, 0.1, 1e-3).unwrap();
        assert!((v - 0.36).abs() <= b);
        assert!((v - 0.36).abs() < 1e-3);
    }

    #[test]
    fn saturates_to_area() {
        let tri = Polygon::equilateral_triangle(1.0).unwrap();
        let (v, b) = polygon_inner_volume(&tri, 1.0, 2e-3).unwrap();
        assert!((v - 3f64.sqrt() / 4.0).abs() <= b);
    }

    #[test]
    fn cross_has_expected_area_and_orientation() {
        let c = Polygon::cantor_carpet_generator(1.0).unwrap();
        assert!((c.area() - 5.0 / 9.0).abs() < 1e-15);
        assert!((c.perimeter() - 4.0).abs() < 1e-15);
        assert!((c.reflex_excess() - 4.0 * PI / 2.0).abs() < 1e-12);
        let cw = Polygon::new(c.vertices().iter().rev().copied().collect()).unwrap();
        assert!((cw.area() - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bow_tie() {
        let r = Polygon::new(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!(matches!(r, Err(Error::DegeneratePolygon(_))));
        assert!(Polygon::new(vec![(0.0, 0.0), (1.0, 0.0)]).is_err());
    }

    #[test]
    fn holes_subtract() {
        let p = Polygon::with_holes(
            vec![(0.0, 0.0), (3.0, 0.0), (3.0, 3.0), (0.0, 3.0)],
            vec![vec![(1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (1.0, 2.0)]],
        )
        .unwrap();
        assert!((p.area() - 8.0).abs() < 1e-15);
        assert!(!p.contains((1.5, 1.5)));
        assert!((p.boundary_distance((0.5, 1.5)) - 0.5).abs() < 1e-15);
    }
}
