//! Poincaré-disc geometry of the regular {7,3} heptagon.

use std::f64::consts::PI;

use num_complex::Complex64;

pub const SIDES: usize = 7;

/// Point of the open unit disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscPoint {
    pub x: f64,
    pub y: f64,
}

impl DiscPoint {
    pub fn new(x: f64, y: f64) -> Self {
        DiscPoint { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn as_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

impl From<Complex64> for DiscPoint {
    fn from(z: Complex64) -> Self {
        DiscPoint { x: z.re, y: z.im }
    }
}

/// `cosh` of the center-to-vertex distance: `cot(π/7)·cot(π/3)`.
pub fn cosh_circumradius() -> f64 {
    1.0 / (PI / 7.0).tan() / (PI / 3.0).tan()
}

/// Hyperbolic distance from a heptagon's center to its vertices.
pub fn circumradius() -> f64 {
    cosh_circumradius().acosh()
}

/// Hyperbolic distance from a heptagon's center to the midpoints of its edges.
pub fn inradius() -> f64 {
    ((PI / 3.0).cos() / (PI / 7.0).sin()).acosh()
}

pub fn hyperbolic_distance(p: DiscPoint, q: DiscPoint) -> f64 {
    let (p, q) = (p.as_complex(), q.as_complex());
    let ratio = (p - q).norm() / (Complex64::new(1.0, 0.0) - p.conj() * q).norm();
    2.0 * ratio.min(1.0 - 1e-17).atanh()
}

/// Orientation-preserving isometry of the disc,
/// `z ↦ (a z + b) / (conj(b) z + conj(a))` with `|a|² − |b|² = 1`.
#[derive(Clone, Copy, Debug)]
pub struct Mobius {
    a: Complex64,
    b: Complex64,
}

impl Mobius {
    pub fn identity() -> Self {
        Mobius {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Rotation about the origin by `theta`.
    pub fn rotation(theta: f64) -> Self {
        Mobius {
            a: Complex64::from_polar(1.0, theta / 2.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    /// Translation along the real axis by hyperbolic distance `d`.
    pub fn translation(d: f64) -> Self {
        Mobius {
            a: Complex64::new((d / 2.0).cosh(), 0.0),
            b: Complex64::new((d / 2.0).sinh(), 0.0),
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let a = self.a * other.a + self.b * other.b.conj();
        let b = self.a * other.b + self.b * other.a.conj();
        let det = (a.norm_sqr() - b.norm_sqr()).sqrt();
        Mobius { a: a / det, b: b / det }
    }

    pub fn center(&self) -> DiscPoint {
        self.apply(Complex64::new(0.0, 0.0)).into()
    }
}

/// Maps the canonical heptagon onto its neighbor across edge `e`, such that
/// the neighbor's local edge 0 is the shared edge.
pub fn neighbor_transform(e: usize) -> Mobius {
    let phi = 2.0 * PI * e as f64 / SIDES as f64;
    Mobius::rotation(phi)
        .compose(&Mobius::translation(2.0 * inradius()))
        .compose(&Mobius::rotation(PI))
}

/// Vertices of the canonical heptagon centered at the origin. Edge `e` runs
/// from vertex `e` to vertex `e + 1`, counterclockwise, with its midpoint in
/// direction `2πe/7`.
pub fn canonical_vertices() -> [Complex64; SIDES] {
    let r = (circumradius() / 2.0).tanh();
    std::array::from_fn(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / SIDES as f64 - PI / SIDES as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circumradius_value() {
        // right triangle with angles π/7, π/3: cosh R = cot(π/7) cot(π/3)
        assert!((cosh_circumradius() - 1.198_880_2).abs() < 1e-6);
        assert!((circumradius() - 0.620_672).abs() < 1e-5);
        assert!((inradius() - 0.545_275).abs() < 1e-5);
    }

    #[test]
    fn canonical_heptagon_is_regular() {
        let v = canonical_vertices();
        let side = hyperbolic_distance(v[0].into(), v[1].into());
        for k in 0..SIDES {
            let p: DiscPoint = v[k].into();
            let q: DiscPoint = v[(k + 1) % SIDES].into();
            assert!((hyperbolic_distance(p, q) - side).abs() < 1e-12);
            assert!((hyperbolic_distance(p, DiscPoint::new(0.0, 0.0)) - circumradius()).abs() < 1e-12);
        }
    }

    #[test]
    fn neighbor_shares_edge() {
        let v = canonical_vertices();
        for e in 0..SIDES {
            let t = neighbor_transform(e);
            let w: Vec<Complex64> = canonical_vertices().iter().map(|&z| t.apply(z)).collect();
            // the neighbor's edge 0 is our edge e, traversed the other way
            assert!((w[0] - v[(e + 1) % SIDES]).norm() < 1e-12);
            assert!((w[1] - v[e]).norm() < 1e-12);
            let d = hyperbolic_distance(t.center(), DiscPoint::new(0.0, 0.0));
            assert!((d - 2.0 * inradius()).abs() < 1e-12);
        }
    }

    #[test]
    fn three_heptagons_per_vertex() {
        // 7 · (angle 2π/3) exceeds the Euclidean sum 5π, as it must
        let angle = 2.0 * PI / 3.0;
        assert!(7.0 * angle < 5.0 * PI);
        let v = canonical_vertices();
        let a = neighbor_transform(0);
        let b = neighbor_transform(1);
        // vertex 1 is shared by ourselves and the neighbors across edges 0 and 1
        let shared = v[1];
        let in_a = canonical_vertices()
            .iter()
            .any(|&z| (a.apply(z) - shared).norm() < 1e-12);
        let in_b = canonical_vertices()
            .iter()
            .any(|&z| (b.apply(z) - shared).norm() < 1e-12);
        assert!(in_a && in_b);
    }
}
