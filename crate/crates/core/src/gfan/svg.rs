//! Deterministic SVG rendering of the fan section: stroked cone triangles
//! (trunk cones highlighted), dashed complement rays. Coordinates come from
//! a fixed rational chart; numbers are printed by exact decimal rounding, so
//! identical inputs give byte-identical output.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::exchange::SignPattern;
use crate::linalg::{Rat, Vec3};
use crate::Result;

use super::{complements_pointwise, enumerate_fan, ComplementRay, Cone3};

/// Rational stand-in for sqrt(3); only placement on the page depends on it.
fn sqrt3() -> Rat {
    Rat::new(1732051.into(), 1000000.into())
}

/// Chart: e1 at (0,0), e2 at (1,0), e3 at (1/2, sqrt3/2).
fn chart_xy(p: &Vec3) -> (Rat, Rat) {
    let half = Rat::new(1.into(), 2.into());
    let x = &p.0[1] + &(&p.0[2] * &half);
    let y = &p.0[2] * &(&sqrt3() * &half);
    (x, y)
}

/// Exact fixed-point rendering with 4 decimals, round half away from zero.
fn fmt_dec(r: &Rat) -> String {
    let scaled = r * Rat::from_integer(BigInt::from(10_000));
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let abs = rounded.abs();
    let int = &abs / BigInt::from(10_000);
    let frac = &abs % BigInt::from(10_000);
    format!("{}{}.{:04}", if neg { "-" } else { "" }, int, frac)
}

struct Box2 {
    min_x: Rat,
    max_x: Rat,
    min_y: Rat,
    max_y: Rat,
}

impl Box2 {
    fn grow(&mut self, (x, y): &(Rat, Rat)) {
        if *x < self.min_x {
            self.min_x = x.clone();
        }
        if *x > self.max_x {
            self.max_x = x.clone();
        }
        if *y < self.min_y {
            self.min_y = y.clone();
        }
        if *y > self.max_y {
            self.max_y = y.clone();
        }
    }

    fn pad(&mut self, amount: &Rat) {
        self.min_x = &self.min_x - amount;
        self.max_x = &self.max_x + amount;
        self.min_y = &self.min_y - amount;
        self.max_y = &self.max_y + amount;
    }

    /// Largest t >= 0 with start + t * d still inside the box; `None` if the
    /// ray immediately leaves.
    fn exit_parameter(&self, start: &(Rat, Rat), d: &(Rat, Rat)) -> Option<Rat> {
        let mut best: Option<Rat> = None;
        for (value, dir, lo, hi) in [
            (&start.0, &d.0, &self.min_x, &self.max_x),
            (&start.1, &d.1, &self.min_y, &self.max_y),
        ] {
            if dir.is_positive() {
                let t = &(hi - value) / dir;
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            } else if dir.is_negative() {
                let t = &(lo - value) / dir;
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        best.filter(|t| !t.is_negative())
    }
}

fn cone_polygon(cone: &Cone3, scale: &Rat) -> String {
    let pts: Vec<String> = cone
        .triangle()
        .iter()
        .map(|p| {
            let (x, y) = chart_xy(p);
            let sx = &x * scale;
            let sy = &-&y * scale;
            format!("{},{}", fmt_dec(&sx), fmt_dec(&sy))
        })
        .collect();
    let class = if cone.is_trunk() { "cone trunk" } else { "cone" };
    format!(
        "  <polygon class=\"{}\" points=\"{}\"><title>{}</title></polygon>",
        class,
        pts.join(" "),
        cone.label()
    )
}

fn ray_line(ray: &ComplementRay, bounds: &Box2, scale: &Rat) -> String {
    let base = chart_xy(&ray.base.to_rat());
    let dir = chart_xy_dir(&ray.dir.to_rat());
    let t = bounds
        .exit_parameter(&base, &dir)
        .unwrap_or_else(|| Rat::from_integer(0.into()));
    let end = (&base.0 + &(&t * &dir.0), &base.1 + &(&t * &dir.1));
    let x1 = &base.0 * scale;
    let y1 = &-&base.1 * scale;
    let x2 = &end.0 * scale;
    let y2 = &-&end.1 * scale;
    format!(
        "  <line class=\"complement\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"><title>({},{},{})</title></line>",
        fmt_dec(&x1),
        fmt_dec(&y1),
        fmt_dec(&x2),
        fmt_dec(&y2),
        ray.subtree,
        ray.a,
        ray.b
    )
}

/// Directions transform without the affine origin; same linear part as
/// `chart_xy`.
fn chart_xy_dir(d: &Vec3) -> (Rat, Rat) {
    chart_xy(d)
}

/// Renders the fan at `depth` with complement rays at `bound`.
pub fn render(sign_pattern: SignPattern, depth: usize, bound: u64) -> Result<String> {
    let cones = enumerate_fan(sign_pattern, depth);
    let mut rays = Vec::new();
    for i in 1..=3u8 {
        rays.extend(complements_pointwise(sign_pattern, i, bound)?);
    }
    let scale = Rat::from_integer(100.into());

    let mut bounds = Box2 {
        min_x: Rat::from_integer(0.into()),
        max_x: Rat::from_integer(1.into()),
        min_y: Rat::from_integer(0.into()),
        max_y: sqrt3(),
    };
    for cone in &cones {
        for p in cone.triangle() {
            bounds.grow(&chart_xy(&p));
        }
    }
    for ray in &rays {
        bounds.grow(&chart_xy(&ray.base.to_rat()));
    }
    bounds.pad(&Rat::from_integer(1.into()));

    let neg_max_y = -&bounds.max_y;
    let view = (
        &bounds.min_x * &scale,
        &neg_max_y * &scale,
        &(&bounds.max_x - &bounds.min_x) * &scale,
        &(&bounds.max_y - &bounds.min_y) * &scale,
    );
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" data-cones=\"{}\" data-complements=\"{}\">\n",
        fmt_dec(&view.0),
        fmt_dec(&view.1),
        fmt_dec(&view.2),
        fmt_dec(&view.3),
        cones.len(),
        rays.len()
    ));
    out.push_str("  <style>.cone{fill:#eef0fa;stroke:#444;stroke-width:0.8}.cone.trunk{fill:#fae4e1}.complement{stroke:#c0392b;stroke-width:1.2;stroke-dasharray:6 4}</style>\n");
    for cone in &cones {
        out.push_str(&cone_polygon(cone, &scale));
        out.push('\n');
    }
    for ray in &rays {
        out.push_str(&ray_line(ray, &bounds, &scale));
        out.push('\n');
    }
    out.push_str("</svg>\n");
    Ok(out)
}
