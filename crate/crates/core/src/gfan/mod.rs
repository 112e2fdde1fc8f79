//! G-fan assembly on the section plane H, fan-axiom and upper-bound checks,
//! both descriptions of the support complement, and exact point location.
//!
//! Every correctness predicate runs on rational barycentric coordinates of
//! the H-section; 3D cones are only reconstructed for serialization.

pub mod geom;
pub mod svg;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::cw::{self, enumerate_coprime};
use crate::exchange::SignPattern;
use crate::fractal::{psi_branch_generator, psi_il, LinMap};
use crate::linalg::{rat, Mat3, ModVec, Rat, Vec3};
use crate::pattern::{self, frak_g, Role};
use crate::report::Report;
use crate::walk::{initial_kst, Kind, Letter, Walk};
use crate::{Error, Result};

use geom::{
    cross, det3, feasible_2d, in_closed_triangle, line_triangle_interval, on_closed_segment,
    triangle_intersection, LinIneq2,
};

/// A maximal G-cone, labeled by the walk it belongs to (`None` for the
/// initial cone). Generators are stored by raw index and span the cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone3 {
    pub walk: Option<Walk>,
    pub generators: [ModVec; 3],
}

impl Cone3 {
    pub fn label(&self) -> String {
        match &self.walk {
            None => "[]".to_string(),
            Some(w) => w.to_string(),
        }
    }

    /// The H-section triangle; every generator has coordinate sum 1.
    pub fn triangle(&self) -> [Vec3; 3] {
        [
            self.generators[0].to_rat(),
            self.generators[1].to_rat(),
            self.generators[2].to_rat(),
        ]
    }

    pub fn generator_set(&self) -> BTreeSet<ModVec> {
        self.generators.iter().cloned().collect()
    }

    pub fn is_trunk(&self) -> bool {
        matches!(&self.walk, Some(w) if w.kind() == Some(Kind::Trunk)) || self.walk.is_none()
    }
}

/// All maximal G-cones with |w| <= depth plus the initial cone,
/// deduplicated by generator set and sorted by (length, sequence).
pub fn enumerate_fan(sign_pattern: SignPattern, depth: usize) -> Vec<Cone3> {
    let mut cones = vec![Cone3 {
        walk: None,
        generators: [ModVec::unit(1), ModVec::unit(2), ModVec::unit(3)],
    }];
    if depth > 0 {
        let mut stack = Vec::new();
        for i in 1..=3u8 {
            stack.push(pattern::seed(sign_pattern, i).expect("valid direction"));
        }
        while let Some(state) = stack.pop() {
            cones.push(Cone3 {
                walk: Some(state.walk.clone()),
                generators: state.g_by_raw_index(),
            });
            if state.walk.len() < depth {
                for letter in [Letter::S, Letter::T] {
                    stack.push(pattern::step(&state, letter));
                }
            }
        }
    }
    cones.sort_by(|a, b| {
        let ka = a.walk.as_ref().map(|w| (w.len(), w.seq().to_vec())).unwrap_or_default();
        let kb = b.walk.as_ref().map(|w| (w.len(), w.seq().to_vec())).unwrap_or_default();
        ka.cmp(&kb)
    });
    let mut seen = BTreeSet::new();
    cones.retain(|c| seen.insert(c.generator_set()));
    cones
}

/// Cone count implied by the reduced-sequence tree: the initial cone plus
/// 3 * 2^(n-1) new cones at each level n >= 1.
pub fn expected_cone_count(depth: usize) -> u64 {
    1 + 3 * ((1u64 << depth) - 1)
}

/// Barycentric point of the H-section of the ray through `v`; requires a
/// positive coordinate sum.
pub fn section(v: &ModVec) -> Result<Vec3> {
    let sum = v.sum();
    if !sum.is_positive() {
        return Err(Error::NotInHalfSpace(v.to_string()));
    }
    let sum = Rat::from_integer(sum);
    let raw = v.to_rat();
    Ok(Vec3([
        &raw.0[0] / &sum,
        &raw.0[1] / &sum,
        &raw.0[2] / &sum,
    ]))
}

/// Pairwise fan-axiom check on the H-section: distinct maximal cones must
/// intersect exactly in the convex hull of their shared generators.
pub fn fan_property_check(sign_pattern: SignPattern, depth: usize) -> Report {
    let cones = enumerate_fan(sign_pattern, depth);
    let mut report = Report::new("fan property");
    report.note(format!("{} maximal cones at depth {depth}", cones.len()));
    for (idx, a) in cones.iter().enumerate() {
        let tri_a = a.triangle();
        for b in cones.iter().skip(idx + 1) {
            let tri_b = b.triangle();
            let shared: Vec<Vec3> = tri_a
                .iter()
                .filter(|p| tri_b.contains(p))
                .cloned()
                .collect();
            let inter = triangle_intersection(&tri_a, &tri_b);
            let ok = match shared.len() {
                0 => inter.is_empty(),
                1 => inter.iter().all(|p| *p == shared[0]) && !inter.is_empty(),
                2 => {
                    !inter.is_empty()
                        && inter
                            .iter()
                            .all(|p| on_closed_segment(p, &shared[0], &shared[1]))
                }
                _ => false, // three shared generators on distinct cones: duplicates
            };
            report.check(ok, || {
                format!(
                    "cones {} and {} intersect outside their shared face",
                    a.label(),
                    b.label()
                )
            });
        }
    }
    report
}

/// The upper-bound region attached to a branch walk: the convex set spanned
/// by the segment [gS, gT] and the recession cone on (vSK, vTK).
#[derive(Debug, Clone)]
pub struct BranchRegion {
    pub g_k: Vec3,
    pub g_s: Vec3,
    pub g_t: Vec3,
    pub v_sk: Vec3,
    pub v_tk: Vec3,
}

impl BranchRegion {
    pub fn at(walk: &Walk) -> Result<BranchRegion> {
        if walk.kind() != Some(Kind::Branch) {
            return Err(Error::Parse(format!("walk {walk} is not in a branch")));
        }
        let state = pattern::eval(walk)?;
        Ok(BranchRegion::from_state(&state))
    }

    pub fn from_state(state: &pattern::PatternState) -> BranchRegion {
        let g_k = state.g(Role::K).to_rat();
        let g_s = state.g(Role::S).to_rat();
        let g_t = state.g(Role::T).to_rat();
        let v_sk = &g_k - &g_s;
        let v_tk = &g_k - &g_t;
        BranchRegion {
            g_k,
            g_s,
            g_t,
            v_sk,
            v_tk,
        }
    }

    /// Frame coordinates (x, y) with p = gS + x vSK + y vTK.
    pub fn coords(&self, p: &Vec3) -> (Rat, Rat) {
        geom::frame_coords(p, &self.g_s, &self.v_sk, &self.v_tk)
    }

    fn xy_in_open(x: &Rat, y: &Rat) -> bool {
        // Exists t in (0,1) with t < min(1,x) and t > max(0,-y).
        let zero = Rat::zero();
        let one = rat(1);
        let lo = if -y > zero { -y } else { zero };
        let hi = if x < &one { x.clone() } else { one };
        lo < hi
    }

    /// Membership in the open region (strictly positive combinations).
    pub fn contains_open(&self, p: &Vec3) -> bool {
        let (x, y) = self.coords(p);
        Self::xy_in_open(&x, &y)
    }

    /// Membership in the closed-segment completion: the open region plus
    /// the segment [gS, gT].
    pub fn contains(&self, p: &Vec3) -> bool {
        if self.contains_open(p) {
            return true;
        }
        let (x, y) = self.coords(p);
        y == -&x && !x.is_negative() && x <= rat(1)
    }

    /// Closed inequalities cutting out the closure: x >= 0, x + y >= 0,
    /// y + 1 >= 0, as affine forms on barycentric coordinates.
    pub fn closure_constraints(&self) -> Vec<LinIneq2> {
        let one = Vec3([rat(1), rat(1), rat(1)]);
        let delta = det3(&self.v_sk, &self.v_tk, &one);
        // x(p) = (p . (vTK x 1) - det3(gS, vTK, 1)) / delta
        // y(p) = (-p . (vSK x 1) + det3(gS, vSK, 1)) / delta
        let nx = cross(&self.v_tk, &one).scale(&(rat(1) / delta.clone()));
        let cx = -&(det3(&self.g_s, &self.v_tk, &one) / delta.clone());
        let ny = cross(&self.v_sk, &one).scale(&(rat(-1) / delta.clone()));
        let cy = det3(&self.g_s, &self.v_sk, &one) / delta;
        let x = LinIneq2::from_functional(&nx, &cx, false);
        let y_plus_1 = LinIneq2::from_functional(&ny, &(&cy + &rat(1)), false);
        let x_plus_y = LinIneq2::from_functional(&(&nx + &ny), &(&cx + &cy), false);
        vec![x, x_plus_y, y_plus_1]
    }

    /// The (x, y) coordinates along a line p(lambda) = base + lambda dir,
    /// as affine forms (value at 0, slope).
    pub fn coords_affine(&self, base: &Vec3, dir: &Vec3) -> ((Rat, Rat), (Rat, Rat)) {
        let (x0, y0) = self.coords(base);
        let shifted = self.coords(&(base + dir));
        let dx = &shifted.0 - &x0;
        let dy = &shifted.1 - &y0;
        ((x0, dx), (y0, dy))
    }
}

/// Checks the containment and decomposition statements for a branch walk:
/// every cone of the sub-fan lies in the region, K-vectors land in the open
/// part, and the region splits into the cone at w, the two child regions,
/// and the boundary ray, with every test point in exactly one part.
pub fn upper_bound_check(walk: &Walk, depth: usize) -> Result<Report> {
    let state = pattern::eval(walk)?;
    if walk.kind() != Some(Kind::Branch) {
        return Err(Error::Parse(format!("walk {walk} is not in a branch")));
    }
    let region = BranchRegion::from_state(&state);
    let mut report = Report::new(format!("upper bound at {walk}"));

    // 2 gK = gS + gT + vSK + vTK.
    let gk2 = state.g(Role::K).scale(&BigInt::from(2));
    let s = state.g(Role::S);
    let t = state.g(Role::T);
    let vsk = state.g(Role::K) - s;
    let vtk = state.g(Role::K) - t;
    let sum = &(&(s + t) + &vsk) + &vtk;
    report.check(gk2 == sum, || "K-expression identity fails".to_string());

    let region_s = BranchRegion::from_state(&pattern::step(&state, Letter::S));
    let region_t = BranchRegion::from_state(&pattern::step(&state, Letter::T));
    let tri = [
        state.g(Role::K).to_rat(),
        state.g(Role::S).to_rat(),
        state.g(Role::T).to_rat(),
    ];

    let boundary_dir = &region.v_sk + &region.v_tk;
    let on_boundary_ray = |p: &Vec3| -> bool {
        // p = gK + lambda (vSK + vTK), lambda > 0.
        let rel = p - &region.g_k;
        for k in 0..3 {
            if !boundary_dir.0[k].is_zero() {
                let lambda = &rel.0[k] / &boundary_dir.0[k];
                if !lambda.is_positive() {
                    return false;
                }
                return rel == boundary_dir.scale(&lambda);
            }
        }
        false
    };

    let check_point = |report: &mut Report, p: &Vec3, origin: &str| {
        let in_u = region.contains(p);
        let parts = [
            in_closed_triangle(p, &tri),
            region_s.contains_open(p),
            region_t.contains_open(p),
            on_boundary_ray(p),
        ];
        let count = parts.iter().filter(|b| **b).count();
        let expected = if in_u { 1 } else { 0 };
        report.check(count == expected, || {
            format!(
                "decomposition fails at {origin}: in_u={in_u}, parts={parts:?}"
            )
        });
    };

    // Cone generators of the sub-fan.
    let mut stack = vec![state.clone()];
    while let Some(s) = stack.pop() {
        for role in Role::ALL {
            let p = s.g(role).to_rat();
            report.check(region.contains(&p), || {
                format!("generator {role:?} of {} escapes the region", s.walk)
            });
        }
        // K-vectors of descendants lie in the open part.
        let p = s.g(Role::K).to_rat();
        report.check(region.contains_open(&p), || {
            format!("K-vector of {} is not interior", s.walk)
        });
        check_point(&mut report, &p, &format!("gK of {}", s.walk));
        if s.walk.len() < walk.len() + depth {
            for letter in [Letter::S, Letter::T] {
                stack.push(pattern::step(&s, letter));
            }
        }
    }

    // Rational grid in frame coordinates, covering inside and outside.
    let grid = [
        rat(-1),
        Rat::new((-1).into(), 2.into()),
        Rat::zero(),
        Rat::new(1.into(), 3.into()),
        Rat::new(1.into(), 2.into()),
        rat(1),
        Rat::new(3.into(), 2.into()),
        rat(2),
    ];
    for x in &grid {
        for y in &grid {
            let p = Vec3([
                &(&region.g_s.0[0] + &(x * &region.v_sk.0[0])) + &(y * &region.v_tk.0[0]),
                &(&region.g_s.0[1] + &(x * &region.v_sk.0[1])) + &(y * &region.v_tk.0[1]),
                &(&region.g_s.0[2] + &(x * &region.v_sk.0[2])) + &(y * &region.v_tk.0[2]),
            ]);
            check_point(&mut report, &p, &format!("grid ({x}, {y})"));
        }
    }
    Ok(report)
}

/// One connected component of the support complement: the open 2D cone with
/// apex direction `base` and spanning direction `dir` = base - g_i. On H it
/// is the open ray from `base` (excluded) in direction `dir`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementRay {
    pub subtree: u8,
    pub a: BigInt,
    pub b: BigInt,
    pub base: ModVec,
    pub dir: ModVec,
}

impl ComplementRay {
    fn sort_key(&self) -> (u8, BigInt, BigInt) {
        (self.subtree, self.a.clone(), self.b.clone())
    }

    /// A point on the open ray at rational parameter lambda > 0.
    pub fn point_at(&self, lambda: &Rat) -> Vec3 {
        assert!(lambda.is_positive());
        let base = self.base.to_rat();
        let dir = self.dir.to_rat();
        &base + &dir.scale(lambda)
    }
}

/// The complement ray phi_i(g) for the g-vector with parameters (a, b); the
/// boundary pair (1, 0) gives the ray F_i at e_{s0}.
pub fn phi_ray(sign_pattern: SignPattern, i: u8, a: &BigInt, b: &BigInt) -> Result<ComplementRay> {
    let base = cw::g_from_coprime(sign_pattern, i, a, b)?;
    if a.is_zero() {
        // (0,-1) denotes e_{t0}, which belongs to another subtree's family.
        return Err(Error::InvalidParams {
            eps: 1,
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let dir = &base - &frak_g(sign_pattern, i)?;
    Ok(ComplementRay {
        subtree: i,
        a: a.clone(),
        b: b.clone(),
        base,
        dir,
    })
}

/// The same ray addressed by the nonnegative fraction b/a.
pub fn rho_ray(sign_pattern: SignPattern, i: u8, b: &BigInt, a: &BigInt) -> Result<ComplementRay> {
    if !a.is_positive() || b.is_negative() || !a.gcd(b).is_one() {
        return Err(Error::InvalidParams {
            eps: 1,
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    phi_ray(sign_pattern, i, a, b)
}

/// All complement rays of subtree i with a + b <= bound, plus F_i. Sorted by
/// (a, b).
pub fn complements_pointwise(
    sign_pattern: SignPattern,
    i: u8,
    bound: u64,
) -> Result<Vec<ComplementRay>> {
    let mut out = vec![phi_ray(sign_pattern, i, &BigInt::one(), &BigInt::zero())?];
    for (a, b, _) in enumerate_coprime(bound) {
        out.push(phi_ray(sign_pattern, i, &a, &b)?);
    }
    out.sort_by_key(|r| r.sort_key());
    Ok(out)
}

/// Complement rays of subtree i generated recursively: the rays phi(w) for
/// every walk of the subtree with |w| <= depth, obtained by applying the
/// three linear maps Psi_{i,1}, Psi_{[i]T}^S, Psi_{[i]T}^T to F_i; F_i
/// itself is included. Sorted by (a, b).
pub fn complements_recursive(
    sign_pattern: SignPattern,
    i: u8,
    depth: usize,
) -> Result<Vec<ComplementRay>> {
    let kst = initial_kst(sign_pattern, i)?;
    let f_base = ModVec::unit(kst.s as usize);
    let f_dir = &ModVec::unit(kst.k as usize) - &ModVec::unit(kst.t as usize);

    let psi1 = psi_il(1).with_subtree(i).to_mod_std(sign_pattern)?;
    let gen_s = psi_branch_generator(0, Letter::S)
        .with_subtree(i)
        .to_mod_std(sign_pattern)?;
    let gen_t = psi_branch_generator(0, Letter::T)
        .with_subtree(i)
        .to_mod_std(sign_pattern)?;

    let decode = |base: Vec3, dir: Vec3| -> Result<ComplementRay> {
        let base = base
            .to_int()
            .ok_or_else(|| Error::Parse("non-integral ray base".into()))?;
        let dir = dir
            .to_int()
            .ok_or_else(|| Error::Parse("non-integral ray direction".into()))?;
        let (a, b) = cw::g_params_in_subtree(&base, sign_pattern, i)
            .ok_or_else(|| Error::Parse(format!("ray base {base} is not a g-vector")))?;
        Ok(ComplementRay {
            subtree: i,
            a,
            b,
            base,
            dir,
        })
    };

    let apply = |m: &LinMap, base: &Vec3, dir: &Vec3| (m.apply(base), m.apply(dir));

    let mut out = vec![decode(f_base.to_rat(), f_dir.to_rat())?];

    // Trunk rays: phi([i]S^n) = Psi_{i,1}^{n+1}(F_i), walk length n + 1.
    let mut acc = (f_base.to_rat(), f_dir.to_rat());
    for _ in 0..depth {
        acc = apply(&psi1, &acc.0, &acc.1);
        out.push(decode(acc.0.clone(), acc.1.clone())?);
    }

    // Branch rays: phi([i]S^n T M_1 ... M_r)
    //   = Psi_{i,1}^n Psi_{[i]T}^{M_1} ... Psi_{[i]T}^{M_r} Psi_{[i]T}^T (F_i),
    // walk length n + 2 + r. Appending a letter multiplies the word product
    // on the right, so the product is carried along the DFS.
    let seed_ray = apply(&gen_t, &f_base.to_rat(), &f_dir.to_rat());
    let mut stack: Vec<(LinMap, usize)> =
        vec![(LinMap::identity(crate::fractal::Basis::ModStd), 0)];
    while let Some((prod, r)) = stack.pop() {
        let mut ray = apply(&prod, &seed_ray.0, &seed_ray.1);
        let mut n = 0usize;
        while n + 2 + r <= depth {
            out.push(decode(ray.0.clone(), ray.1.clone())?);
            ray = apply(&psi1, &ray.0, &ray.1);
            n += 1;
        }
        if r + 3 <= depth {
            stack.push((prod.compose(&gen_s), r + 1));
            stack.push((prod.compose(&gen_t), r + 1));
        }
    }

    out.sort_by_key(|r| r.sort_key());
    out.dedup();
    Ok(out)
}

/// Checks that no complement ray meets any cone section except at the
/// excluded base point, and the pairwise-intersection dichotomy of the
/// branch regions along a trunk.
pub fn disjointness_check(sign_pattern: SignPattern, depth: usize, bound: u64) -> Result<Report> {
    let mut report = Report::new("complement disjointness");
    let cones = enumerate_fan(sign_pattern, depth);
    let mut rays = Vec::new();
    for i in 1..=3u8 {
        rays.extend(complements_pointwise(sign_pattern, i, bound)?);
    }
    report.note(format!("{} cones, {} rays", cones.len(), rays.len()));
    for ray in &rays {
        let base = ray.base.to_rat();
        let dir = ray.dir.to_rat();
        for cone in &cones {
            let tri = cone.triangle();
            let ok = match line_triangle_interval(&base, &dir, &tri) {
                None => true,
                Some((_, Some(upper))) => !upper.is_positive(),
                Some((_, None)) => false,
            };
            report.check(ok, || {
                format!(
                    "ray ({},{},{}) meets cone {}",
                    ray.subtree,
                    ray.a,
                    ray.b,
                    cone.label()
                )
            });
        }
    }
    for i in 1..=3u8 {
        report.absorb(separateness_check(sign_pattern, i, 3)?);
    }
    Ok(report)
}

/// Verifies the intersection dichotomy between the regions of the maximal
/// branches [i]S^mT and [i]S^nT for m > n: consecutive regions meet exactly
/// in the point gK([i]S^n); others are disjoint.
pub fn separateness_check(sign_pattern: SignPattern, i: u8, max_n: usize) -> Result<Report> {
    let mut report = Report::new(format!("separateness in subtree {i}"));
    let mut roots = Vec::new();
    {
        let mut trunk = Walk::seed(sign_pattern, i)?;
        for _ in 0..=max_n + 1 {
            roots.push(trunk.extend_letter(Letter::T));
            trunk = trunk.extend_letter(Letter::S);
        }
    }
    let regions: Vec<BranchRegion> = roots
        .iter()
        .map(|w| BranchRegion::at(w))
        .collect::<Result<_>>()?;

    for n in 0..=max_n {
        for m in (n + 1)..=max_n + 1 {
            let (rm, rn) = (&regions[m], &regions[n]);
            let mut cons = rm.closure_constraints();
            cons.extend(rn.closure_constraints());
            if m >= n + 2 {
                report.check(!feasible_2d(&cons), || {
                    format!("closures of branches {m} and {n} overlap")
                });
                continue;
            }
            // m = n + 1: intersection must be exactly the point gK([i]S^n).
            let trunk_walk = {
                let mut w = Walk::seed(sign_pattern, i)?;
                for _ in 0..n {
                    w = w.extend_letter(Letter::S);
                }
                w
            };
            let point = pattern::eval(&trunk_walk)?.g(Role::K).to_rat();
            report.check(rm.contains(&point) && rn.contains(&point), || {
                format!("gK([i]S^{n}) missing from a neighboring region")
            });

            // The closures may only meet along the line through the point in
            // the complement-ray direction.
            let dir = &point - &frak_g(sign_pattern, i)?.to_rat();
            let one = Vec3([rat(1), rat(1), rat(1)]);
            let normal = cross(&dir, &one);
            let offset = -&geom::dot(&normal, &point);
            for sign in [1i64, -1] {
                let mut strict = cons.clone();
                strict.push(LinIneq2::from_functional(
                    &normal.scale(&rat(sign)),
                    &(&offset * &rat(sign)),
                    true,
                ));
                report.check(!feasible_2d(&strict), || {
                    format!("closure intersection of branches {m},{n} leaves the ray line")
                });
            }

            // Along the line, membership in both half-open regions must be
            // exactly lambda = 0. The predicates are piecewise constant
            // between the zeros of the frame forms, so testing the zeros,
            // midpoints, and outer points decides the set exactly.
            let mut breakpoints: Vec<Rat> = Vec::new();
            for region in [rm, rn] {
                let ((x0, dx), (y0, dy)) = region.coords_affine(&point, &dir);
                for (v0, dv) in [
                    (x0.clone(), dx.clone()),
                    (y0.clone(), dy.clone()),
                    (&x0 + &y0, &dx + &dy),
                    (&x0 - &rat(1), dx.clone()),
                    (&y0 + &rat(1), dy.clone()),
                ] {
                    if !dv.is_zero() {
                        breakpoints.push(-&v0 / &dv);
                    }
                }
            }
            breakpoints.sort();
            breakpoints.dedup();
            let mut candidates = breakpoints.clone();
            for pair in breakpoints.windows(2) {
                candidates.push((&pair[0] + &pair[1]) / rat(2));
            }
            if let (Some(first), Some(last)) = (breakpoints.first(), breakpoints.last()) {
                candidates.push(first - &rat(1));
                candidates.push(last + &rat(1));
            }
            for lambda in candidates {
                let p = Vec3([
                    &point.0[0] + &(&lambda * &dir.0[0]),
                    &point.0[1] + &(&lambda * &dir.0[1]),
                    &point.0[2] + &(&lambda * &dir.0[2]),
                ]);
                let both = rm.contains(&p) && rn.contains(&p);
                report.check(both == lambda.is_zero(), || {
                    format!("regions {m},{n} share the ray point at lambda = {lambda}")
                });
            }
        }
    }
    Ok(report)
}

/// Outcome of exact point location against the enumerated fan data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Location {
    /// Inside (a face of) an enumerated maximal cone; `face` lists the raw
    /// indices of the generators with positive coefficient.
    InCone { walk: String, face: Vec<u8> },
    OnComplementRay { subtree: u8, a: String, b: String },
    /// Outside every enumerated object; deeper enumeration may resolve it.
    UnknownAtDepth,
}

/// Locates a vector against the cones at `depth` and the complement rays at
/// `bound`. Cones are scanned first, in enumeration order.
pub fn locate(
    sign_pattern: SignPattern,
    v: &ModVec,
    depth: usize,
    bound: u64,
) -> Result<Location> {
    if v.is_zero() {
        return Ok(Location::InCone {
            walk: "[]".to_string(),
            face: Vec::new(),
        });
    }
    let p = section(v)?;
    for cone in enumerate_fan(sign_pattern, depth) {
        let m = Mat3::from_columns(cone.triangle());
        let inv = m.inverse().expect("maximal cones are simplicial");
        let lambda = inv.mul_vec(&p);
        if lambda.0.iter().all(|l| !l.is_negative()) {
            let face = (1..=3u8)
                .filter(|j| lambda.0[(*j - 1) as usize].is_positive())
                .collect();
            return Ok(Location::InCone {
                walk: cone.label(),
                face,
            });
        }
    }
    for i in 1..=3u8 {
        for ray in complements_pointwise(sign_pattern, i, bound)? {
            let base = ray.base.to_rat();
            let dir = ray.dir.to_rat();
            let rel = &p - &base;
            let k = (0..3).find(|k| !dir.0[*k].is_zero()).expect("nonzero direction");
            let lambda = &rel.0[k] / &dir.0[k];
            if lambda.is_positive() && rel == dir.scale(&lambda) {
                return Ok(Location::OnComplementRay {
                    subtree: ray.subtree,
                    a: ray.a.to_string(),
                    b: ray.b.to_string(),
                });
            }
        }
    }
    Ok(Location::UnknownAtDepth)
}

/// Serializable fan snapshot: maximal cones with their walks and generators,
/// plus complement-ray labels.
#[derive(Debug, Clone, Serialize)]
pub struct FanSnapshot {
    pub depth: usize,
    pub bound: u64,
    pub cones: Vec<ConeRecord>,
    pub complements: Vec<ComplementRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConeRecord {
    pub walk: String,
    pub seq: String,
    pub gens: Vec<ModVec>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplementRecord {
    pub subtree: u8,
    pub a: String,
    pub b: String,
    pub base: ModVec,
    pub dir: ModVec,
}

pub fn snapshot(sign_pattern: SignPattern, depth: usize, bound: u64) -> Result<FanSnapshot> {
    let cones = enumerate_fan(sign_pattern, depth)
        .into_iter()
        .map(|c| ConeRecord {
            walk: c.label(),
            seq: c
                .walk
                .as_ref()
                .map(|w| {
                    w.seq()
                        .iter()
                        .map(|k| k.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .unwrap_or_default(),
            gens: c.generators.to_vec(),
        })
        .collect();
    let mut complements = Vec::new();
    for i in 1..=3u8 {
        for ray in complements_pointwise(sign_pattern, i, bound)? {
            complements.push(ComplementRecord {
                subtree: ray.subtree,
                a: ray.a.to_string(),
                b: ray.b.to_string(),
                base: ray.base,
                dir: ray.dir,
            });
        }
    }
    Ok(FanSnapshot {
        depth,
        bound,
        cones,
        complements,
    })
}

/// Membership of an H-point in the sector D_i spanned by e_{s0} and the two
/// lattice directions; returns the nonnegative frame coordinates when inside.
pub fn d_region_coords(
    sign_pattern: SignPattern,
    i: u8,
    p: &Vec3,
) -> Result<Option<(Rat, Rat)>> {
    let kst = initial_kst(sign_pattern, i)?;
    let origin = ModVec::unit(kst.s as usize).to_rat();
    let d1 = (&ModVec::unit(kst.k as usize) - &ModVec::unit(kst.t as usize)).to_rat();
    let d2 = (&ModVec::unit(kst.s as usize) - &ModVec::unit(kst.k as usize)).to_rat();
    let (x, y) = geom::frame_coords(p, &origin, &d1, &d2);
    if x.is_negative() || y.is_negative() {
        Ok(None)
    } else {
        Ok(Some((x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::parse_walk;

    const SP: SignPattern = SignPattern::CyclicA;

    #[test]
    fn fan_counts() {
        assert_eq!(enumerate_fan(SP, 0).len(), 1);
        assert_eq!(enumerate_fan(SP, 1).len(), 4);
        for depth in 0..=8 {
            assert_eq!(
                enumerate_fan(SP, depth).len() as u64,
                expected_cone_count(depth),
                "depth {depth}"
            );
        }
    }

    #[test]
    fn cones_are_simplicial() {
        for cone in enumerate_fan(SP, 6) {
            let m = Mat3::from_columns(cone.triangle());
            assert!(!m.det().is_zero(), "degenerate cone {}", cone.label());
        }
    }

    #[test]
    fn section_examples() {
        assert_eq!(section(&ModVec::unit(1)).unwrap(), ModVec::unit(1).to_rat());
        // frak g_1 has barycentric coordinates (-1, 1, 1) on H.
        let g1 = frak_g(SP, 1).unwrap();
        assert_eq!(section(&g1).unwrap(), g1.to_rat());
        // frak c lands on the centroid.
        let c = crate::pattern::frak_c();
        let third = Rat::new(1.into(), 3.into());
        assert_eq!(
            section(&c).unwrap(),
            Vec3([third.clone(), third.clone(), third])
        );
        assert!(matches!(
            section(&ModVec::new(-1, 0, 0)),
            Err(Error::NotInHalfSpace(_))
        ));
    }

    #[test]
    fn initial_cone_shares_one_edge_with_first_cone() {
        let cones = enumerate_fan(SP, 1);
        let initial = &cones[0];
        let first = cones.iter().find(|c| c.label() == "[1]").unwrap();
        let shared: Vec<ModVec> = initial
            .generators
            .iter()
            .filter(|g| first.generators.contains(g))
            .cloned()
            .collect();
        // Common face is the edge spanned by e_{s0} = e3 and e_{t0} = e2.
        assert_eq!(shared.len(), 2);
        assert!(shared.contains(&ModVec::unit(2)));
        assert!(shared.contains(&ModVec::unit(3)));
    }

    #[test]
    fn fan_property_small_depth() {
        for sp in [SignPattern::CyclicA, SignPattern::CyclicB] {
            let report = fan_property_check(sp, 4);
            assert!(report.pass, "{:?}", report.counterexample);
        }
    }

    #[test]
    fn upper_bound_check_first_branch() {
        let w = parse_walk(SP, "[1]T").unwrap();
        let report = upper_bound_check(&w, 5).unwrap();
        assert!(report.pass, "{:?}", report.counterexample);
        // A deeper branch as well.
        let w = parse_walk(SP, "[2]SSTST").unwrap();
        let report = upper_bound_check(&w, 4).unwrap();
        assert!(report.pass, "{:?}", report.counterexample);
        // Trunk walks are rejected.
        assert!(upper_bound_check(&parse_walk(SP, "[1]SS").unwrap(), 3).is_err());
    }

    #[test]
    fn f1_ray_for_markov() {
        // F_1 = C°(e3, e1 - e2) in modified (= raw, up to scaling) coordinates.
        let f1 = phi_ray(SP, 1, &BigInt::one(), &BigInt::zero()).unwrap();
        assert_eq!(f1.base, ModVec::unit(3));
        assert_eq!(f1.dir, ModVec::new(1, -1, 0));
        // rho_i(0) is the same ray.
        assert_eq!(
            rho_ray(SP, 1, &BigInt::zero(), &BigInt::one()).unwrap(),
            f1
        );
    }

    #[test]
    fn rho_and_phi_agree() {
        for (a, b, _) in enumerate_coprime(10) {
            assert_eq!(
                rho_ray(SP, 2, &b, &a).unwrap(),
                phi_ray(SP, 2, &a, &b).unwrap()
            );
        }
    }

    #[test]
    fn ray_base_points_relate_to_frak_g() {
        for ray in complements_pointwise(SP, 1, 8).unwrap() {
            let expected_dir = &ray.base - &frak_g(SP, 1).unwrap();
            assert_eq!(ray.dir, expected_dir);
            assert_eq!(ray.base.sum(), BigInt::one());
            assert_eq!(ray.dir.sum(), BigInt::zero());
        }
    }

    #[test]
    fn recursive_trunk_rays_match_phi() {
        // (Psi_{i,1})^n (F_i) = phi([i]S^{n-1}): the n-th trunk ray has
        // parameters (1, n).
        let rays = complements_recursive(SP, 1, 6).unwrap();
        for n in 0..=5u64 {
            let expected = (BigInt::one(), BigInt::from(n));
            assert!(
                rays.iter().any(|r| (r.a.clone(), r.b.clone()) == expected),
                "missing trunk ray (1,{n})"
            );
        }
        // Psi_{[i]T}^T(F_i) = phi([i]T): parameters of gK([1]T) = (2, 1).
        assert!(rays
            .iter()
            .any(|r| r.a == BigInt::from(2) && r.b == BigInt::one()));
    }

    #[test]
    fn recursive_and_pointwise_complements_agree() {
        let depth = 6;
        let bound = 12u64;
        for i in 1..=3u8 {
            let rec = complements_recursive(SP, i, depth).unwrap();
            assert_eq!(rec.len(), 1 << depth, "ray count in subtree {i}");
            let pw = complements_pointwise(SP, i, bound).unwrap();
            let rec_set: BTreeSet<(ModVec, ModVec)> = rec
                .iter()
                .map(|r| (r.base.clone(), r.dir.clone()))
                .collect();
            assert_eq!(rec_set.len(), rec.len(), "recursive rays must be distinct");
            let pw_set: BTreeSet<(ModVec, ModVec)> = pw
                .iter()
                .map(|r| (r.base.clone(), r.dir.clone()))
                .collect();
            // Overlap in both directions.
            for r in &rec {
                if (&r.a + &r.b).to_string().parse::<u64>().unwrap() <= bound {
                    assert!(
                        pw_set.contains(&(r.base.clone(), r.dir.clone())),
                        "recursive ray ({},{}) missing pointwise",
                        r.a,
                        r.b
                    );
                }
            }
            for r in &pw {
                let walk_len = match cw::pair_to_walk(SP, i, &r.a, &r.b).unwrap() {
                    None => 0,
                    Some(w) => w.len(),
                };
                if walk_len <= depth {
                    assert!(
                        rec_set.contains(&(r.base.clone(), r.dir.clone())),
                        "pointwise ray ({},{}) missing recursively",
                        r.a,
                        r.b
                    );
                }
            }
        }
    }

    #[test]
    fn disjointness_small() {
        let report = disjointness_check(SP, 5, 8).unwrap();
        assert!(report.pass, "{:?}", report.counterexample);
    }

    #[test]
    fn locate_examples() {
        // A unit vector is a face of the initial cone.
        assert_eq!(
            locate(SP, &ModVec::unit(1), 3, 6).unwrap(),
            Location::InCone {
                walk: "[]".to_string(),
                face: vec![1]
            }
        );
        // Zero is the origin face.
        assert_eq!(
            locate(SP, &ModVec::zero(), 3, 6).unwrap(),
            Location::InCone {
                walk: "[]".to_string(),
                face: vec![]
            }
        );
        // A point on F_1 at lambda = 1: e3 + (e1 - e2).
        let p = &ModVec::unit(3) + &ModVec::new(1, -1, 0);
        assert_eq!(
            locate(SP, &p, 4, 6).unwrap(),
            Location::OnComplementRay {
                subtree: 1,
                a: "1".to_string(),
                b: "0".to_string()
            }
        );
        // The double of the (1,1) lattice step lies on the (1,1) ray: the
        // slopes coincide, so the non-coprime pair is not a new object.
        let g11 = cw::g_from_coprime(SP, 1, &BigInt::one(), &BigInt::one()).unwrap();
        let doubled = &g11 + &(&g11 - &frak_g(SP, 1).unwrap());
        assert_eq!(
            locate(SP, &doubled, 4, 6).unwrap(),
            Location::OnComplementRay {
                subtree: 1,
                a: "1".to_string(),
                b: "1".to_string()
            }
        );
        // A vertex that only appears deeper is unresolved at small depth.
        let far = cw::g_from_coprime(SP, 1, &BigInt::from(3), &BigInt::from(4)).unwrap();
        assert_eq!(locate(SP, &far, 2, 3).unwrap(), Location::UnknownAtDepth);
        // Negative half space is rejected.
        assert!(locate(SP, &ModVec::new(-1, 0, 0), 2, 3).is_err());
    }

    #[test]
    fn every_g_vector_in_exactly_one_sector() {
        let mut k_vectors: BTreeSet<ModVec> = BTreeSet::new();
        let mut stack = Vec::new();
        for i in 1..=3u8 {
            stack.push(pattern::seed(SP, i).unwrap());
        }
        while let Some(state) = stack.pop() {
            k_vectors.insert(state.g(Role::K).clone());
            if state.walk.len() < 8 {
                for letter in [Letter::S, Letter::T] {
                    stack.push(pattern::step(&state, letter));
                }
            }
        }
        for j in 1..=3usize {
            k_vectors.insert(ModVec::unit(j));
        }
        for v in &k_vectors {
            let hits: Vec<u8> = (1..=3u8)
                .filter(|i| d_region_coords(SP, *i, &v.to_rat()).unwrap().is_some())
                .collect();
            assert_eq!(hits.len(), 1, "vector {v} is in {hits:?}");
        }
    }

    #[test]
    fn k_vectors_are_unique_at_small_depth() {
        // w -> gK is injective and misses the unit vectors.
        let mut seen: BTreeSet<ModVec> = (1..=3usize).map(ModVec::unit).collect();
        let mut count = 3usize;
        let mut stack = Vec::new();
        for i in 1..=3u8 {
            stack.push(pattern::seed(SP, i).unwrap());
        }
        while let Some(state) = stack.pop() {
            assert!(
                seen.insert(state.g(Role::K).clone()),
                "duplicate K-vector at {}",
                state.walk
            );
            count += 1;
            if state.walk.len() < 10 {
                for letter in [Letter::S, Letter::T] {
                    stack.push(pattern::step(&state, letter));
                }
            }
        }
        assert_eq!(count, 3 + 3 * ((1 << 10) - 1));
    }

    #[test]
    fn snapshot_serializes() {
        let snap = snapshot(SP, 2, 3).unwrap();
        let json = serde_json::to_string(&snap).unwrap();
        assert!(json.contains("\"cones\""));
        assert!(json.contains("\"complements\""));
        assert!(json.contains("\"walk\":\"[1]\""));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["cones"].as_array().unwrap().len() as u64, expected_cone_count(2));
    }

    #[test]
    fn svg_is_deterministic_and_counts_match() {
        let a = svg::render(SP, 3, 5).unwrap();
        let b = svg::render(SP, 3, 5).unwrap();
        assert_eq!(a, b);
        let cones = a.matches("class=\"cone").count();
        let rays = a.matches("class=\"complement\"").count();
        assert_eq!(cones as u64, expected_cone_count(3));
        let per_subtree = complements_pointwise(SP, 1, 5).unwrap().len();
        assert_eq!(rays, 3 * per_subtree);
    }
}
