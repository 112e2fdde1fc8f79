//! Linear isomorphisms between admissible subpatterns: exact triple-solve
//! construction, the closed-form representation matrices, and verification
//! sweeps for the conjugation identity and the map calculus.
//!
//! The triple-solve route is ground truth everywhere; closed-form matrices
//! are checked against it rather than trusted.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::exchange::SignPattern;
use crate::linalg::{rat, Mat3, Vec3};
use crate::pattern::{self, Role};
use crate::report::Report;
use crate::walk::{admissible, initial_kst, Admissibility, Letter, Walk};
use crate::{Error, Result};

/// Which pattern a map acts on: `C` for c-vectors (Phi), `G` for g-vectors
/// (Psi).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    C,
    G,
}

/// Basis convention for the matrix of a [`LinMap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Raw standard basis e1, e2, e3.
    RawStd,
    /// Modified standard basis in index order 1, 2, 3.
    ModStd,
    /// Modified basis in the order (k0, s0, t0) of subtree i.
    ModKst(u8),
}

/// An exact rational linear map with an explicit basis convention. Composing
/// maps in different bases is a programming error and asserts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinMap {
    pub m: Mat3,
    pub basis: Basis,
}

impl LinMap {
    pub fn identity(basis: Basis) -> Self {
        LinMap {
            m: Mat3::identity(),
            basis,
        }
    }

    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.m.mul_vec(v)
    }

    pub fn compose(&self, rhs: &LinMap) -> LinMap {
        assert_eq!(self.basis, rhs.basis, "composing maps in different bases");
        LinMap {
            m: self.m.mul_mat(&rhs.m),
            basis: self.basis,
        }
    }

    pub fn inverse(&self) -> Option<LinMap> {
        Some(LinMap {
            m: self.m.inverse()?,
            basis: self.basis,
        })
    }

    pub fn pow(&self, n: u32) -> LinMap {
        let mut out = LinMap::identity(self.basis);
        for _ in 0..n {
            out = out.compose(self);
        }
        out
    }

    /// Retags a subtree-generic ModKst matrix with a concrete subtree.
    pub fn with_subtree(mut self, i: u8) -> LinMap {
        if let Basis::ModKst(_) = self.basis {
            self.basis = Basis::ModKst(i);
        }
        self
    }

    /// Rewrites a ModKst(i) matrix into ModStd order; both are permutations
    /// of the modified coordinates, so this is exact and parameter-free.
    pub fn to_mod_std(&self, sign_pattern: SignPattern) -> Result<LinMap> {
        match self.basis {
            Basis::ModStd => Ok(self.clone()),
            Basis::RawStd => Err(Error::Parse(
                "cannot convert a raw-basis map to ModStd without an exchange matrix".into(),
            )),
            Basis::ModKst(i) => {
                let p = kst_permutation(sign_pattern, i)?;
                let p_inv = p.inverse().expect("permutation is invertible");
                Ok(LinMap {
                    m: p.mul_mat(&self.m).mul_mat(&p_inv),
                    basis: Basis::ModStd,
                })
            }
        }
    }

    /// Rescales into the raw standard basis: raw = D^{-1/2} M D^{1/2}.
    /// Exact because the d-ratios of a rational-parameter matrix are always
    /// rational squares.
    pub fn to_raw_std(&self, matrix: &crate::exchange::ExchangeMatrix) -> Result<LinMap> {
        let base = self.to_mod_std(matrix.sign_pattern())?;
        let mut m = Mat3::zero();
        for i in 1..=3 {
            for j in 1..=3 {
                m.0[i - 1][j - 1] = base.m.entry(i, j) * matrix.modified_scale(j, i)?;
            }
        }
        Ok(LinMap {
            m,
            basis: Basis::RawStd,
        })
    }
}

impl Serialize for LinMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LinMap", 2)?;
        let rows: Vec<Vec<String>> = self
            .m
            .0
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        st.serialize_field("basis", &format!("{:?}", self.basis))?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

/// Permutation matrix taking ModKst(i) coordinates to ModStd coordinates.
fn kst_permutation(sign_pattern: SignPattern, i: u8) -> Result<Mat3> {
    let kst = initial_kst(sign_pattern, i)?;
    let mut p = Mat3::zero();
    for (col, idx) in [kst.k, kst.s, kst.t].into_iter().enumerate() {
        p.0[(idx - 1) as usize][col] = rat(1);
    }
    Ok(p)
}

fn triple(state: &pattern::PatternState, side: Side) -> Mat3 {
    let cols = match side {
        Side::C => [
            state.c(Role::K).to_rat(),
            state.c(Role::S).to_rat(),
            state.c(Role::T).to_rat(),
        ],
        Side::G => [
            state.g(Role::K).to_rat(),
            state.g(Role::S).to_rat(),
            state.g(Role::T).to_rat(),
        ],
    };
    Mat3::from_columns(cols)
}

/// The unique linear map sending the K/S/T triple at `w` to the triple at
/// `u`, solved exactly. This is Phi (side C) or Psi (side G).
pub fn map_between(w: &Walk, u: &Walk, side: Side) -> Result<LinMap> {
    if admissible(w, u) == Admissibility::No {
        return Err(Error::NotAdmissible {
            w: w.to_string(),
            u: u.to_string(),
        });
    }
    let sw = pattern::eval(w)?;
    let su = pattern::eval(u)?;
    let mw = triple(&sw, side);
    let mu = triple(&su, side);
    let inv = mw
        .inverse()
        .ok_or_else(|| Error::SingularTriple(w.to_string()))?;
    Ok(LinMap {
        m: mu.mul_mat(&inv),
        basis: Basis::ModStd,
    })
}

/// Closed-form matrix of Psi_{i,l} in the ModKst basis: the g-side map
/// between maximal branches l steps apart. Independent of i as a matrix.
pub fn psi_il(l: i64) -> LinMap {
    LinMap {
        m: Mat3([
            [rat(-l + 1), rat(-l), rat(0)],
            [rat(l), rat(l + 1), rat(0)],
            [rat(0), rat(0), rat(1)],
        ]),
        basis: Basis::ModKst(0),
    }
}

/// Closed-form matrix of Phi_{i,l} in the ModKst basis (c-side).
pub fn phi_il(l: i64) -> LinMap {
    LinMap {
        m: Mat3([
            [rat(l + 1), rat(-l), rat(0)],
            [rat(l), rat(-l + 1), rat(0)],
            [rat(0), rat(0), rat(1)],
        ]),
        basis: Basis::ModKst(0),
    }
}

/// Closed-form matrix of Psi_{[i]S^nT}^S or Psi_{[i]S^nT}^T in the ModKst
/// basis: the generators of the internal isomorphism monoid of the n-th
/// maximal branch.
pub fn psi_branch_generator(n: i64, letter: Letter) -> LinMap {
    let m = match letter {
        Letter::S => Mat3([
            [rat(-n * n - 2 * n + 1), rat(-n * n - n), rat(-n)],
            [rat(n * n + 3 * n + 2), rat(n * n + 2 * n + 2), rat(n + 1)],
            [rat(-n - 2), rat(-n - 1), rat(0)],
        ]),
        Letter::T => Mat3([
            [rat(-n * n - 3 * n), rat(-n * n - 2 * n), rat(-n - 1)],
            [rat(n * n + 4 * n + 3), rat(n * n + 3 * n + 2), rat(n + 2)],
            [rat(-n - 2), rat(-n - 1), rat(0)],
        ]),
    };
    LinMap {
        m,
        basis: Basis::ModKst(0),
    }
}

/// Checks the conjugation identity for an admissible pair: the maps solved at
/// (w, u) must transport the whole subpattern, sending the triple at wX to
/// the triple at uX for every word X up to `depth`, on both sides.
pub fn verify_fractal(w: &Walk, u: &Walk, depth: usize) -> Result<Report> {
    if admissible(w, u) == Admissibility::No {
        return Err(Error::NotAdmissible {
            w: w.to_string(),
            u: u.to_string(),
        });
    }
    let phi = map_between(w, u, Side::C)?;
    let psi = map_between(w, u, Side::G)?;
    let mut report = Report::new(format!("fractal {w} -> {u}"));

    let mut stack = vec![(pattern::eval(w)?, pattern::eval(u)?)];
    while let Some((sw, su)) = stack.pop() {
        for role in Role::ALL {
            let c_ok = phi.apply(&sw.c(role).to_rat()) == su.c(role).to_rat();
            let g_ok = psi.apply(&sw.g(role).to_rat()) == su.g(role).to_rat();
            report.check(c_ok, || {
                format!("Phi fails at X with wX = {}, role {role:?}", sw.walk)
            });
            report.check(g_ok, || {
                format!("Psi fails at X with wX = {}, role {role:?}", sw.walk)
            });
        }
        if sw.walk.len() < w.len() + depth {
            for letter in [Letter::S, Letter::T] {
                stack.push((pattern::step(&sw, letter), pattern::step(&su, letter)));
            }
        }
    }
    Ok(report)
}

/// Uniform random branch walk: a trunk prefix, a T, then a random tail.
pub fn random_branch(rng: &mut ChaCha8Rng, sp: SignPattern, max_len: usize) -> Walk {
    let i = rng.gen_range(1..=3);
    let n = rng.gen_range(0..=max_len.saturating_sub(2).min(4));
    let mut w = Walk::seed(sp, i).unwrap();
    for _ in 0..n {
        w = w.extend_letter(Letter::S);
    }
    w = w.extend_letter(Letter::T);
    while w.len() < max_len && rng.gen_bool(0.5) {
        let letter = if rng.gen_bool(0.5) { Letter::S } else { Letter::T };
        w = w.extend_letter(letter);
    }
    w
}

pub fn random_trunk(rng: &mut ChaCha8Rng, sp: SignPattern, max_len: usize) -> Walk {
    let i = rng.gen_range(1..=3);
    let n = rng.gen_range(0..max_len);
    let mut w = Walk::seed(sp, i).unwrap();
    for _ in 0..n {
        w = w.extend_letter(Letter::S);
    }
    w
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| if rng.gen_bool(0.5) { Letter::S } else { Letter::T })
        .collect()
}

/// Samples an admissible pair, trunk/trunk or branch/branch with equal odds.
pub fn random_admissible_pair(
    rng: &mut ChaCha8Rng,
    sp: SignPattern,
    max_len: usize,
) -> (Walk, Walk) {
    if rng.gen_bool(0.5) {
        (random_trunk(rng, sp, max_len), random_trunk(rng, sp, max_len))
    } else {
        (
            random_branch(rng, sp, max_len),
            random_branch(rng, sp, max_len),
        )
    }
}

/// Checks the map calculus on sampled instances: the chain rule, elimination
/// of a common suffix word, the inverse property, and the monoid action law
/// inside a branch.
pub fn verify_relations(sp: SignPattern, samples: usize, depth: usize, seed: u64) -> Report {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("map relations");

    for side in [Side::C, Side::G] {
        for _ in 0..samples {
            // Chain rule on an admissible triple.
            let (w0, w1) = random_admissible_pair(&mut rng, sp, depth);
            let w2 = if w0.kind() == Some(crate::walk::Kind::Trunk) {
                random_trunk(&mut rng, sp, depth)
            } else {
                random_branch(&mut rng, sp, depth)
            };
            let a = map_between(&w1, &w2, side).unwrap();
            let b = map_between(&w0, &w1, side).unwrap();
            let direct = map_between(&w0, &w2, side).unwrap();
            report.check(a.compose(&b) == direct, || {
                format!("chain rule fails for {w0}, {w1}, {w2} on {side:?}")
            });

            // Inverse property.
            let inv = map_between(&w1, &w0, side).unwrap();
            report.check(b.inverse().unwrap() == inv, || {
                format!("inverse property fails for {w0}, {w1} on {side:?}")
            });

            // Suffix elimination: the map between wX and uX equals the map
            // between w and u.
            let x = random_word(&mut rng, depth);
            let wx = w0.extend_word(&x);
            let ux = w1.extend_word(&x);
            let lifted = map_between(&wx, &ux, side).unwrap();
            report.check(lifted == b, || {
                format!("suffix elimination fails for {w0}, {w1}, X = {x:?} on {side:?}")
            });

            // Monoid action law inside a branch.
            let w = random_branch(&mut rng, sp, depth);
            let x = random_word(&mut rng, depth / 2);
            let y = random_word(&mut rng, depth / 2);
            let map_x = map_between(&w, &w.extend_word(&x), side).unwrap();
            let map_y = map_between(&w, &w.extend_word(&y), side).unwrap();
            let mut xy = x.clone();
            xy.extend(&y);
            let map_xy = map_between(&w, &w.extend_word(&xy), side).unwrap();
            report.check(map_x.compose(&map_y) == map_xy, || {
                format!("monoid law fails for {w}, X = {x:?}, Y = {y:?} on {side:?}")
            });
        }
    }
    report
}
