//! Exact geometry on the section plane H (coordinate sum 1). Points are kept
//! in rational barycentric coordinates; all predicates reduce to signs of
//! 3x3 determinants, so no chart constant can affect an outcome.

use num_traits::{Signed, Zero};

use crate::linalg::{rat, Rat, Vec3};

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    Vec3([
        &(&a.0[1] * &b.0[2]) - &(&a.0[2] * &b.0[1]),
        &(&a.0[2] * &b.0[0]) - &(&a.0[0] * &b.0[2]),
        &(&a.0[0] * &b.0[1]) - &(&a.0[1] * &b.0[0]),
    ])
}

pub fn dot(a: &Vec3, b: &Vec3) -> Rat {
    &(&(&a.0[0] * &b.0[0]) + &(&a.0[1] * &b.0[1])) + &(&a.0[2] * &b.0[2])
}

/// Determinant of the matrix with rows a, b, c.
pub fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> Rat {
    dot(a, &cross(b, c))
}

fn ones() -> Vec3 {
    Vec3([rat(1), rat(1), rat(1)])
}

/// Orientation of the ordered triple of H-points: sign of det3.
pub fn orient(a: &Vec3, b: &Vec3, c: &Vec3) -> i8 {
    let d = det3(a, b, c);
    if d.is_positive() {
        1
    } else if d.is_negative() {
        -1
    } else {
        0
    }
}

/// Coordinates of the H-point `p` in the affine frame (origin; d1, d2),
/// where d1, d2 are independent sum-zero directions.
pub fn frame_coords(p: &Vec3, origin: &Vec3, d1: &Vec3, d2: &Vec3) -> (Rat, Rat) {
    let one = ones();
    let delta = det3(d1, d2, &one);
    assert!(!delta.is_zero(), "degenerate frame");
    let rel = p - origin;
    let x = det3(&rel, d2, &one) / delta.clone();
    let y = det3(d1, &rel, &one) / delta;
    (x, y)
}

/// Closed-segment membership for H-points, all exact.
pub fn on_closed_segment(p: &Vec3, a: &Vec3, b: &Vec3) -> bool {
    if orient(a, b, p) != 0 {
        return false;
    }
    if a == b {
        return p == a;
    }
    // p = a + t (b - a) with t in [0, 1]; read t off a coordinate where the
    // endpoints differ.
    for k in 0..3 {
        let denom = &b.0[k] - &a.0[k];
        if !denom.is_zero() {
            let t = (&p.0[k] - &a.0[k]) / denom;
            if t.is_negative() || t > Rat::from_integer(1.into()) {
                return false;
            }
            // Collinearity plus a valid t in one coordinate pins the point.
            let interp = Vec3([
                &a.0[0] + &(&t * &(&b.0[0] - &a.0[0])),
                &a.0[1] + &(&t * &(&b.0[1] - &a.0[1])),
                &a.0[2] + &(&t * &(&b.0[2] - &a.0[2])),
            ]);
            return &interp == p;
        }
    }
    unreachable!("a == b was handled above");
}

/// Clips a convex polygon (counterclockwise H-points) against the closed
/// half-plane det3(a, b, x) >= 0.
fn clip_against(poly: &[Vec3], a: &Vec3, b: &Vec3) -> Vec<Vec3> {
    let mut out = Vec::new();
    let n = poly.len();
    for idx in 0..n {
        let cur = &poly[idx];
        let next = &poly[(idx + 1) % n];
        let d_cur = det3(a, b, cur);
        let d_next = det3(a, b, next);
        if !d_cur.is_negative() {
            out.push(cur.clone());
        }
        if (d_cur.is_negative() && d_next.is_positive())
            || (d_cur.is_positive() && d_next.is_negative())
        {
            // Exact crossing point of the edge with the boundary line.
            let t = &d_cur / &(&d_cur - &d_next);
            out.push(Vec3([
                &cur.0[0] + &(&t * &(&next.0[0] - &cur.0[0])),
                &cur.0[1] + &(&t * &(&next.0[1] - &cur.0[1])),
                &cur.0[2] + &(&t * &(&next.0[2] - &cur.0[2])),
            ]));
        }
    }
    out
}

fn dedup_cycle(mut poly: Vec<Vec3>) -> Vec<Vec3> {
    poly.dedup();
    if poly.len() > 1 && poly.first() == poly.last() {
        poly.pop();
    }
    poly
}

/// Exact intersection polygon of two closed triangles on H. The result may
/// be empty, a single point, a segment, or a convex polygon; repeated
/// vertices are removed.
pub fn triangle_intersection(t1: &[Vec3; 3], t2: &[Vec3; 3]) -> Vec<Vec3> {
    let mut tri1 = t1.clone().to_vec();
    if orient(&t1[0], &t1[1], &t1[2]) < 0 {
        tri1.reverse();
    }
    let mut tri2 = t2.clone();
    if orient(&t2[0], &t2[1], &t2[2]) < 0 {
        tri2.swap(0, 2);
    }
    let mut poly = tri1;
    for e in 0..3 {
        if poly.is_empty() {
            break;
        }
        poly = clip_against(&poly, &tri2[e], &tri2[(e + 1) % 3]);
    }
    dedup_cycle(poly)
}

/// Closed-triangle membership for an H-point.
pub fn in_closed_triangle(p: &Vec3, tri: &[Vec3; 3]) -> bool {
    let o = orient(&tri[0], &tri[1], &tri[2]);
    assert!(o != 0, "degenerate triangle");
    let signs = [
        orient(&tri[0], &tri[1], p),
        orient(&tri[1], &tri[2], p),
        orient(&tri[2], &tri[0], p),
    ];
    signs.iter().all(|s| *s == o || *s == 0)
}

/// The lambda-interval for which base + lambda dir lies in the closed
/// triangle. `None` when the line misses the triangle entirely.
pub fn line_triangle_interval(
    base: &Vec3,
    dir: &Vec3,
    tri: &[Vec3; 3],
) -> Option<(Option<Rat>, Option<Rat>)> {
    let o = orient(&tri[0], &tri[1], &tri[2]);
    assert!(o != 0, "degenerate triangle");
    let mut lower: Option<Rat> = None;
    let mut upper: Option<Rat> = None;
    for e in 0..3 {
        let (a, b) = (&tri[e], &tri[(e + 1) % 3]);
        // Half-plane o * det3(a, b, x) >= 0; affine in lambda.
        let c0 = det3(a, b, base) * Rat::from_integer(o.into());
        let c1 = det3(a, b, dir) * Rat::from_integer(o.into());
        if c1.is_zero() {
            if c0.is_negative() {
                return None;
            }
        } else {
            let bound = -&c0 / &c1;
            if c1.is_positive() {
                if lower.as_ref().is_none_or(|l| bound > *l) {
                    lower = Some(bound);
                }
            } else if upper.as_ref().is_none_or(|u| bound < *u) {
                upper = Some(bound);
            }
        }
    }
    match (&lower, &upper) {
        (Some(l), Some(u)) if l > u => None,
        _ => Some((lower, upper)),
    }
}

/// A closed or open affine inequality cs*s + ct*t + c0 >= 0 (or > 0) in the
/// chart p = (1-s-t, s, t) of the plane H.
#[derive(Debug, Clone)]
pub struct LinIneq2 {
    pub cs: Rat,
    pub ct: Rat,
    pub c0: Rat,
    pub strict: bool,
}

impl LinIneq2 {
    /// Builds the inequality f(p) >= 0 (or > 0) from a linear functional
    /// f(p) = n . p + c on barycentric coordinates.
    pub fn from_functional(n: &Vec3, c: &Rat, strict: bool) -> Self {
        LinIneq2 {
            cs: &n.0[1] - &n.0[0],
            ct: &n.0[2] - &n.0[0],
            c0: &n.0[0] + c,
            strict,
        }
    }

    fn eval(&self, s: &Rat, t: &Rat) -> Rat {
        &(&(&self.cs * s) + &(&self.ct * t)) + &self.c0
    }

    fn holds(&self, s: &Rat, t: &Rat) -> bool {
        let v = self.eval(s, t);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }
}

/// Decides feasibility of a system of affine inequalities in two variables
/// by Fourier-Motzkin elimination, with exact strictness tracking.
pub fn feasible_2d(cons: &[LinIneq2]) -> bool {
    // Eliminate s.
    let mut residual: Vec<(Rat, Rat, bool)> = Vec::new(); // ct * t + c0 (>= or >) 0
    let mut lowers: Vec<&LinIneq2> = Vec::new();
    let mut uppers: Vec<&LinIneq2> = Vec::new();
    for c in cons {
        if c.cs.is_zero() {
            residual.push((c.ct.clone(), c.c0.clone(), c.strict));
        } else if c.cs.is_positive() {
            lowers.push(c);
        } else {
            uppers.push(c);
        }
    }
    for lo in &lowers {
        for hi in &uppers {
            // lo: s >= (-ct t - c0)/cs, hi: s <= ...; combine to a t-constraint.
            let ct = &(&lo.ct * &-&hi.cs) + &(&hi.ct * &lo.cs);
            let c0 = &(&lo.c0 * &-&hi.cs) + &(&hi.c0 * &lo.cs);
            residual.push((ct, c0, lo.strict || hi.strict));
        }
    }
    // If there are only lower bounds or only upper bounds on s, s is
    // unconstrained in one direction and those rows impose nothing.

    // Eliminate t from the residual one-variable system.
    let mut lo: Option<(Rat, bool)> = None;
    let mut hi: Option<(Rat, bool)> = None;
    for (ct, c0, strict) in &residual {
        if ct.is_zero() {
            if c0.is_negative() || (*strict && c0.is_zero()) {
                return false;
            }
        } else {
            let bound = -c0 / ct;
            if ct.is_positive() {
                match &lo {
                    Some((b, s)) if *b > bound || (*b == bound && (*s || !strict)) => {}
                    _ => lo = Some((bound, *strict)),
                }
            } else {
                match &hi {
                    Some((b, s)) if *b < bound || (*b == bound && (*s || !strict)) => {}
                    _ => hi = Some((bound, *strict)),
                }
            }
        }
    }
    match (lo, hi) {
        (Some((l, ls)), Some((h, hs))) => {
            if l < h {
                true
            } else if l == h {
                !ls && !hs
            } else {
                false
            }
        }
        _ => true,
    }
}

/// Evaluates a conjunction of inequalities at a rational point; used to
/// cross-check feasibility certificates in tests.
pub fn satisfies_all(cons: &[LinIneq2], s: &Rat, t: &Rat) -> bool {
    cons.iter().all(|c| c.holds(s, t))
}
