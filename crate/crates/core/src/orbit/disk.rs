//! Smallest enclosing disk of planar points (Welzl's algorithm, iterative form).

use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub center: (f64, f64),
    pub radius: f64,
}

impl Disk {
    fn contains(&self, p: (f64, f64), slack: f64) -> bool {
        dist(self.center, p) <= self.radius + slack
    }
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

fn from_two(a: (f64, f64), b: (f64, f64)) -> Disk {
    let center = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    Disk {
        center,
        radius: dist(a, b) / 2.0,
    }
}

/// Circumscribed disk; nearly collinear triples fall back to the widest pair.
fn from_three(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Disk {
    let (bx, by) = (b.0 - a.0, b.1 - a.1);
    let (cx, cy) = (c.0 - a.0, c.1 - a.1);
    let d = 2.0 * (bx * cy - by * cx);
    let scale = (bx * bx + by * by).max(cx * cx + cy * cy);
    if d.abs() <= 1e-14 * scale {
        let pairs = [from_two(a, b), from_two(a, c), from_two(b, c)];
        return pairs
            .into_iter()
            .max_by(|p, q| p.radius.total_cmp(&q.radius))
            .expect("three pairs");
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = (a.0 + ux, a.1 + uy);
    let radius = dist(center, a).max(dist(center, b)).max(dist(center, c));
    Disk { center, radius }
}

/// Smallest disk containing every point; input order is shuffled with `seed`.
pub fn smallest_enclosing_disk(points: &[(f64, f64)], seed: u64) -> Disk {
    let mut pts = points.to_vec();
    if pts.is_empty() {
        return Disk {
            center: (0.0, 0.0),
            radius: 0.0,
        };
    }
    SplitMix64::new(seed).shuffle(&mut pts);
    let extent = pts.iter().map(|p| p.0.abs().max(p.1.abs())).fold(0.0, f64::max);
    let slack = 1e-13 * (1.0 + extent);

    let mut disk = Disk {
        center: pts[0],
        radius: 0.0,
    };
    for i in 1..pts.len() {
        if disk.contains(pts[i], slack) {
            continue;
        }
        disk = Disk {
            center: pts[i],
            radius: 0.0,
        };
        for j in 0..i {
            if disk.contains(pts[j], slack) {
                continue;
            }
            disk = from_two(pts[i], pts[j]);
            for k in 0..j {
                if !disk.contains(pts[k], slack) {
                    disk = from_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    disk
}
