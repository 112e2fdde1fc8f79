//! Named verification sweeps. The CLI `verify` command and the acceptance
//! tests drive the same code paths, so a green suite here is exactly a green
//! acceptance criterion there.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cw::{self, CoeffSide};
use crate::exchange::{ExchangeMatrix, RawPatternState, SignPattern};
use crate::fractal::{
    self, map_between, phi_il, psi_branch_generator, psi_il, random_admissible_pair, Side,
};
use crate::gfan;
use crate::linalg::{rat, Mat3, ModVec};
use crate::pattern::{self, frak_c, frak_g, Role};
use crate::report::Report;
use crate::walk::{replay_signs, Kind, Letter, Walk};
use crate::Result;

/// Walks the reduced tree to `depth`, comparing the fast path against the
/// raw oracle. Returns the oracle-equivalence report and the tropical-sign
/// report (sign match plus the uniqueness clause).
pub fn oracle_equivalence(matrix: &ExchangeMatrix, depth: usize) -> Result<(Report, Report)> {
    let sp = matrix.sign_pattern();
    let mut equiv = Report::new("oracle equivalence");
    let mut signs = Report::new("tropical signs");
    let mut stack: Vec<(RawPatternState, pattern::PatternState)> = Vec::new();
    for i in 1..=3u8 {
        stack.push((
            RawPatternState::initial(matrix).step(i)?,
            pattern::seed(sp, i)?,
        ));
    }
    while let Some((raw, fast)) = stack.pop() {
        let (raw_c, raw_g) = raw.to_modified()?;
        equiv.check(raw_c == fast.c_by_raw_index(), || {
            format!("c-triple mismatch at {}", fast.walk)
        });
        equiv.check(raw_g == fast.g_by_raw_index(), || {
            format!("g-triple mismatch at {}", fast.walk)
        });

        let eps = replay_signs(&fast.walk);
        let kst = fast.walk.kst().expect("nonempty");
        for j in 1..=3u8 {
            let col_sign = RawPatternState::column_sign(&raw.c_col(j));
            signs.check(col_sign == Some(eps.sign(j)), || {
                format!("sign mismatch in column {j} at {}", fast.walk)
            });
        }
        // Uniqueness clause: exactly one s != k with eps_s != eps_k and
        // eps_s b_{ks} < 0, and it is S(w).
        let mut hits = Vec::new();
        for s in 1..=3u8 {
            if s == kst.k {
                continue;
            }
            let b_ks = raw.bw.entry(kst.k as usize, s as usize);
            if eps.sign(s) != eps.sign(kst.k)
                && (rat(eps.sign(s) as i64) * b_ks.clone()).is_negative()
            {
                hits.push(s);
            }
        }
        signs.check(hits == vec![kst.s], || {
            format!("uniqueness clause fails at {}", fast.walk)
        });

        if raw.seq.len() < depth {
            let kst = fast.walk.kst().expect("nonempty");
            for k in 1..=3u8 {
                if k != kst.k {
                    let next_walk = fast.walk.extend_index(k)?;
                    let letter = *next_walk.word().expect("nonempty").last().expect("extended");
                    stack.push((raw.step(k)?, pattern::step(&fast, letter)));
                }
            }
        }
    }
    Ok((equiv, signs))
}

/// cF = (1,1,1) at every state and gF = g_i at every branch state, swept
/// exhaustively to `depth`.
pub fn invariant_vectors(sp: SignPattern, depth: usize) -> Result<Report> {
    let mut report = Report::new("invariant vectors");
    let c = frak_c();
    for i in 1..=3u8 {
        let g = frak_g(sp, i)?;
        let mut stack = vec![pattern::seed(sp, i)?];
        while let Some(state) = stack.pop() {
            let cf = &(state.c(Role::K) + state.c(Role::S)) + state.c(Role::T);
            report.check(cf == c, || format!("cF wrong at {}", state.walk));
            if state.walk.kind() == Some(Kind::Branch) {
                let gf = &(state.g(Role::S) + state.g(Role::T)) - state.g(Role::K);
                report.check(gf == g, || format!("gF wrong at {}", state.walk));
            }
            if state.walk.len() < depth {
                for letter in [Letter::S, Letter::T] {
                    stack.push(pattern::step(&state, letter));
                }
            }
        }
    }
    Ok(report)
}

/// Trunk and branch-root closed forms against the recursion for n <= max_n,
/// all directions, both sign patterns.
pub fn closed_forms(max_n: usize) -> Result<Report> {
    let mut report = Report::new("closed forms");
    for sp in [SignPattern::CyclicA, SignPattern::CyclicB] {
        for i in 1..=3u8 {
            let mut trunk = pattern::seed(sp, i)?;
            for n in 0..=max_n {
                report.check(
                    pattern::eigen_basis(&trunk) == pattern::trunk_closed_form(sp, i, n)?,
                    || format!("trunk form fails at {sp:?} i={i} n={n}"),
                );
                let root = pattern::step(&trunk, Letter::T);
                report.check(
                    pattern::eigen_basis(&root) == pattern::branch_root_closed_form(sp, i, n)?,
                    || format!("branch-root form fails at {sp:?} i={i} n={n}"),
                );
                trunk = pattern::step(&trunk, Letter::S);
            }
        }
    }
    Ok(report)
}

/// Conjugation identity on seeded admissible pairs: `samples` pairs with
/// walk length <= max_len, all words |X| <= conj_depth, both maps.
pub fn fractal_pairs(
    sp: SignPattern,
    samples: usize,
    max_len: usize,
    conj_depth: usize,
    seed: u64,
) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new("fractal pairs");
    report.note(format!("{samples} pairs, seed {seed}"));
    for _ in 0..samples {
        let (w, u) = random_admissible_pair(&mut rng, sp, max_len);
        report.absorb(fractal::verify_fractal(&w, &u, conj_depth)?);
    }
    report.absorb(fractal::verify_relations(sp, samples.div_ceil(2), 8, seed ^ 0x9e3779b9));
    Ok(report)
}

/// Closed-form representation matrices against the triple-solve oracle, plus
/// the worked fixed points in the raw standard basis of the Markov matrix.
pub fn representation_matrices(sp: SignPattern, max_n: usize) -> Result<Report> {
    let mut report = Report::new("representation matrices");
    for i in 1..=3u8 {
        for delta in -(max_n as i64)..=(max_n as i64) {
            // Maps between maximal branches delta apart, solved at roots.
            let m = delta.unsigned_abs() as usize;
            let (lo, hi) = if delta >= 0 { (m, 2 * m) } else { (2 * m, m) };
            let mk = |n: usize| -> Result<Walk> {
                let mut w = Walk::seed(sp, i)?;
                for _ in 0..n {
                    w = w.extend_letter(Letter::S);
                }
                Ok(w.extend_letter(Letter::T))
            };
            let a = mk(lo.min(hi))?;
            let b = mk(hi.max(lo))?;
            let (from, to) = if delta >= 0 { (a, b) } else { (b, a) };
            let psi = map_between(&from, &to, Side::G)?;
            let phi = map_between(&from, &to, Side::C)?;
            report.check(
                psi == psi_il(delta).with_subtree(i).to_mod_std(sp)?,
                || format!("psi_il({delta}) fails for i={i}"),
            );
            report.check(
                phi == phi_il(delta).with_subtree(i).to_mod_std(sp)?,
                || format!("phi_il({delta}) fails for i={i}"),
            );
        }
        for n in 0..=max_n {
            let mut root = Walk::seed(sp, i)?;
            for _ in 0..n {
                root = root.extend_letter(Letter::S);
            }
            let root = root.extend_letter(Letter::T);
            for letter in [Letter::S, Letter::T] {
                let solved = map_between(&root, &root.extend_letter(letter), Side::G)?;
                let closed = psi_branch_generator(n as i64, letter)
                    .with_subtree(i)
                    .to_mod_std(sp)?;
                report.check(solved == closed, || {
                    format!("branch generator ({letter}, n={n}) fails for i={i}")
                });
            }
        }
    }
    // Fixed points of the worked example, raw standard basis, Markov matrix.
    if sp == SignPattern::CyclicA {
        let markov = ExchangeMatrix::markov();
        let w = |text: &str| crate::walk::parse_walk(sp, text).expect("valid walk");
        let psi_s = map_between(&w("[1]T"), &w("[1]TS"), Side::G)?.to_raw_std(&markov)?;
        report.check(
            psi_s.m == Mat3::from_rows_i64([[1, 0, 0], [-2, 0, -1], [2, 1, 2]]),
            || "raw-basis S-generator mismatch".to_string(),
        );
        let psi_t = map_between(&w("[1]T"), &w("[1]TT"), Side::G)?.to_raw_std(&markov)?;
        report.check(
            psi_t.m == Mat3::from_rows_i64([[0, -1, 0], [-2, 0, -1], [3, 2, 2]]),
            || "raw-basis T-generator mismatch".to_string(),
        );
        // The branch-change map resolves by triple-solve; the closed form in
        // the raw basis is [[0,0,-1],[0,1,0],[1,0,2]].
        let psi_11 = map_between(&w("[1]T"), &w("[1]ST"), Side::G)?.to_raw_std(&markov)?;
        report.check(
            psi_11.m == Mat3::from_rows_i64([[0, 0, -1], [0, 1, 0], [1, 0, 2]]),
            || "raw-basis branch-change map mismatch".to_string(),
        );
        report.note("branch-change map fixed by triple-solve: [[0,0,-1],[0,1,0],[1,0,2]]");
    }
    Ok(report)
}

/// Calkin-Wilf suite: the worked coefficient chain, exactly-once coprime
/// coverage up to `bound`, the worked g-vector, and coefficient/recursion
/// agreement at branch roots.
pub fn cw_suite(sp: SignPattern, bound: u64) -> Result<Report> {
    let mut report = Report::new("calkin-wilf");

    // Worked chain.
    let word: Vec<Letter> = vec![Letter::S, Letter::S, Letter::T, Letter::T, Letter::S];
    let chain: Vec<(i64, i64)> = vec![(2, 1), (1, 3), (3, 4), (7, 4), (11, 4)];
    let mut pair = cw::CoeffPair::initial(CoeffSide::Q, Role::K);
    for (letter, expected) in [Letter::S, Letter::T, Letter::T, Letter::S, Letter::S]
        .into_iter()
        .zip(&chain)
    {
        pair = cw::coeff_step(&pair, letter);
        report.check(
            (pair.a.clone(), pair.b.clone()) == (expected.0.into(), expected.1.into()),
            || format!("worked chain breaks at {expected:?}"),
        );
    }

    // Exactly-once coverage against a gcd scan.
    let got = cw::enumerate_coprime(bound);
    let mut seen = std::collections::HashSet::new();
    for (a, b, w) in &got {
        report.check(seen.insert((a.clone(), b.clone())), || {
            format!("pair ({a},{b}) appears twice")
        });
        let replay = cw::coeffs(CoeffSide::Q, Role::K, w);
        report.check((&replay.a, &replay.b) == (a, b), || {
            format!("word replay fails for ({a},{b})")
        });
    }
    for a in 1..=bound as i64 {
        for b in 1..=bound as i64 {
            if a + b <= bound as i64 {
                let coprime = BigInt::from(a).gcd(&BigInt::from(b)).is_one();
                report.check(
                    seen.contains(&(BigInt::from(a), BigInt::from(b))) == coprime,
                    || format!("coverage wrong at ({a},{b})"),
                );
            }
        }
    }

    // Worked g-vector for n = 0..3, all directions.
    for i in 1..=3u8 {
        let kst = crate::walk::initial_kst(sp, i)?;
        for n in 0..=3usize {
            let root = pattern::branch_root_closed_form(sp, i, n)?;
            let v = cw::vector_from_coeffs(&root, Role::K, &cw::coeffs(CoeffSide::Q, Role::K, &word));
            let coords = v.in_order(kst.as_tuple());
            let n = n as i64;
            report.check(
                coords
                    == [
                        BigInt::from(-15 * n + 3),
                        BigInt::from(15 * n + 12),
                        BigInt::from(-14),
                    ],
                || format!("worked g-vector wrong at i={i} n={n}"),
            );
        }
    }

    // Both (a,b) and (b,a) occur at equal word length.
    for (a, b, w) in cw::enumerate_coprime(20) {
        let swapped = cw::pair_to_word(&b, &a).expect("coprime");
        report.check(swapped.len() == w.len(), || {
            format!("depth asymmetry at ({a},{b})")
        });
    }

    Ok(report)
}

/// Exact set equality between enumerated vectors at walk length <= depth and
/// the coprime parameterizations, per subtree, on both sides.
pub fn param_sets(sp: SignPattern, depth: usize) -> Result<Report> {
    let mut report = Report::new("coprime parameterization");
    for i in 1..=3u8 {
        let mut stack = vec![pattern::seed(sp, i)?];
        while let Some(state) = stack.pop() {
            let w = &state.walk;
            // g-side: the K-vector decodes to a valid pair whose unique walk
            // is w itself, and the closed form reproduces the vector.
            let gk = state.g(Role::K);
            match cw::g_params_in_subtree(gk, sp, i) {
                None => report.check(false, || format!("gK at {w} fails to decode")),
                Some((a, b)) => {
                    let back = cw::pair_to_walk(sp, i, &a, &b)?;
                    report.check(back.as_ref() == Some(w), || {
                        format!("pair ({a},{b}) maps to {back:?}, expected {w}")
                    });
                    report.check(cw::g_from_coprime(sp, i, &a, &b)? == *gk, || {
                        format!("closed form differs at {w}")
                    });
                }
            }
            // c-side: all three columns decode to valid parameters whose
            // constructed witness is no longer than this walk and reproduces
            // the vector.
            for role in Role::ALL {
                let v = state.c(role);
                match cw::c_params_in_subtree(v, sp, i) {
                    None => report.check(false, || format!("c({role:?}) at {w} fails to decode")),
                    Some((eps, a, b)) => {
                        let (witness, wrole) = cw::c_params_to_walk(sp, i, eps, &a, &b)?;
                        report.check(witness.len() <= w.len(), || {
                            format!(
                                "witness for ({eps};{a},{b}) has length {} > {}",
                                witness.len(),
                                w.len()
                            )
                        });
                        let reproduced = pattern::eval(&witness)?.c(wrole).clone();
                        report.check(reproduced == *v, || {
                            format!("witness vector differs for ({eps};{a},{b})")
                        });
                    }
                }
            }
            if w.len() < depth {
                for letter in [Letter::S, Letter::T] {
                    stack.push(pattern::step(&state, letter));
                }
            }
        }
        // Boundary: e_{s0} carries the pair (1,0).
        let kst = crate::walk::initial_kst(sp, i)?;
        let unit = ModVec::unit(kst.s as usize);
        report.check(
            cw::g_params_in_subtree(&unit, sp, i) == Some((BigInt::one(), BigInt::zero())),
            || format!("boundary pair wrong in subtree {i}"),
        );
    }
    Ok(report)
}

/// Fan-axiom check plus K-vector uniqueness.
pub fn fan_suite(sp: SignPattern, depth: usize, uniqueness_depth: usize) -> Result<Report> {
    let mut report = gfan::fan_property_check(sp, depth);
    let mut seen: std::collections::BTreeSet<ModVec> =
        (1..=3usize).map(ModVec::unit).collect();
    let mut stack = Vec::new();
    for i in 1..=3u8 {
        stack.push(pattern::seed(sp, i)?);
    }
    while let Some(state) = stack.pop() {
        report.check(seen.insert(state.g(Role::K).clone()), || {
            format!("duplicate K-vector at {}", state.walk)
        });
        if state.walk.len() < uniqueness_depth {
            for letter in [Letter::S, Letter::T] {
                stack.push(pattern::step(&state, letter));
            }
        }
    }
    Ok(report)
}

/// Pointwise and recursive complements agree as geometric rays; no ray meets
/// any cone; the worked F_1 ray for the first sign shape.
pub fn complements_suite(sp: SignPattern, depth: usize, bound: u64) -> Result<Report> {
    let mut report = Report::new("complements");
    for i in 1..=3u8 {
        let rec = gfan::complements_recursive(sp, i, depth)?;
        report.check(rec.len() == 1 << depth, || {
            format!("recursive ray count wrong in subtree {i}")
        });
        let pw = gfan::complements_pointwise(sp, i, bound)?;
        let rec_set: std::collections::BTreeSet<(ModVec, ModVec)> = rec
            .iter()
            .map(|r| (r.base.clone(), r.dir.clone()))
            .collect();
        let pw_set: std::collections::BTreeSet<(ModVec, ModVec)> = pw
            .iter()
            .map(|r| (r.base.clone(), r.dir.clone()))
            .collect();
        for r in &rec {
            if &r.a + &r.b <= BigInt::from(bound) {
                report.check(pw_set.contains(&(r.base.clone(), r.dir.clone())), || {
                    format!("recursive ray ({},{}) missing pointwise", r.a, r.b)
                });
            }
        }
        for r in &pw {
            let walk_len = match cw::pair_to_walk(sp, i, &r.a, &r.b)? {
                None => 0,
                Some(w) => w.len(),
            };
            if walk_len <= depth {
                report.check(rec_set.contains(&(r.base.clone(), r.dir.clone())), || {
                    format!("pointwise ray ({},{}) missing recursively", r.a, r.b)
                });
            }
        }
    }
    if sp == SignPattern::CyclicA {
        let f1 = gfan::phi_ray(sp, 1, &BigInt::one(), &BigInt::zero())?;
        report.check(
            f1.base == ModVec::unit(3) && f1.dir == ModVec::new(1, -1, 0),
            || "F_1 ray mismatch".to_string(),
        );
    }
    report.absorb(gfan::disjointness_check(sp, depth, bound)?);
    Ok(report)
}
