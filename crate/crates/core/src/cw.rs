//! Coefficient recursions in a branch and the coprime parameterization of all
//! modified c- and g-vectors. The g-side coefficient pairs form a rearranged
//! Calkin-Wilf tree: letters prepend, so the pair of M'X is computed from the
//! pair of X, and enumeration walks a tree whose edges prepend letters.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exchange::SignPattern;
use crate::linalg::ModVec;
use crate::pattern::{frak_c, frak_g, EigenBasis, Role};
use crate::walk::{initial_kst, Letter, Walk};
use crate::{Error, Result};

/// Which coefficient recursion a pair belongs to: `Q` on the g-side (pairs
/// stay nonnegative), `P` on the c-side (signs alternate with T-steps).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoeffSide {
    Q,
    P,
}

/// An integer coefficient pair along the branch recursion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffPair {
    pub a: BigInt,
    pub b: BigInt,
    pub side: CoeffSide,
}

impl CoeffPair {
    pub fn new(side: CoeffSide, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        CoeffPair {
            a: a.into(),
            b: b.into(),
            side,
        }
    }

    /// Initial pair at the empty word for a given role.
    pub fn initial(side: CoeffSide, role: Role) -> Self {
        let (a, b) = match (side, role) {
            (CoeffSide::Q, Role::K) => (1, 1),
            (CoeffSide::Q, Role::S) => (0, 1),
            (CoeffSide::Q, Role::T) => (1, 0),
            (CoeffSide::P, Role::K) => (1, -1),
            (CoeffSide::P, Role::S) => (0, 1),
            (CoeffSide::P, Role::T) => (-1, 0),
        };
        CoeffPair::new(side, a, b)
    }
}

/// One letter of the recursion: the pair of M'X from the pair of X.
pub fn coeff_step(pair: &CoeffPair, letter: Letter) -> CoeffPair {
    let (a, b) = (&pair.a, &pair.b);
    let (a2, b2) = match (pair.side, letter) {
        (_, Letter::S) => (a + b, b.clone()),
        (CoeffSide::Q, Letter::T) => (b.clone(), a + b),
        (CoeffSide::P, Letter::T) => (-b, -(a + b)),
    };
    CoeffPair {
        a: a2,
        b: b2,
        side: pair.side,
    }
}

/// The pair attached to a whole word. Since letters prepend, the word is
/// consumed right to left.
pub fn coeffs(side: CoeffSide, role: Role, word: &[Letter]) -> CoeffPair {
    let mut pair = CoeffPair::initial(side, role);
    for &letter in word.iter().rev() {
        pair = coeff_step(&pair, letter);
    }
    pair
}

/// Reassembles the vector at w·X from the eigen basis at the branch walk w
/// and the coefficient pair of X. On the g-side this is gF + a vSK + b vTK;
/// on the c-side the sign of cF depends on the role.
pub fn vector_from_coeffs(root: &EigenBasis, role: Role, pair: &CoeffPair) -> ModVec {
    match pair.side {
        CoeffSide::Q => &(&root.gf + &root.vsk.scale(&pair.a)) + &root.vtk.scale(&pair.b),
        CoeffSide::P => {
            let f = match role {
                Role::K => -&root.cf,
                Role::S | Role::T => root.cf.clone(),
            };
            &(&f + &root.xsk.scale(&pair.a)) + &root.xtk.scale(&pair.b)
        }
    }
}

/// All Q-side K-pairs with a + b <= limit, each with the unique word that
/// generates it. Sorted by (a + b, a) for deterministic output.
pub fn enumerate_coprime(limit: u64) -> Vec<(BigInt, BigInt, Vec<Letter>)> {
    let limit = BigInt::from(limit);
    let mut out = Vec::new();
    let mut stack: Vec<(BigInt, BigInt, Vec<Letter>)> =
        vec![(BigInt::one(), BigInt::one(), Vec::new())];
    while let Some((a, b, word)) = stack.pop() {
        if &a + &b > limit {
            continue;
        }
        // Children prepend a letter, so their words grow on the left.
        let mut s_word = vec![Letter::S];
        s_word.extend(&word);
        let mut t_word = vec![Letter::T];
        t_word.extend(&word);
        stack.push((&a + &b, b.clone(), s_word));
        stack.push((b.clone(), &a + &b, t_word));
        out.push((a, b, word));
    }
    out.sort_by(|x, y| (&x.0 + &x.1, &x.0).cmp(&(&y.0 + &y.1, &y.0)));
    out
}

/// Inverts the Calkin-Wilf recursion: the unique word X with K-pair (a, b).
/// Defined for coprime a, b >= 1.
pub fn pair_to_word(a: &BigInt, b: &BigInt) -> Option<Vec<Letter>> {
    if !a.is_positive() || !b.is_positive() || !a.gcd(b).is_one() {
        return None;
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut word = Vec::new();
    while !(a.is_one() && b.is_one()) {
        if a > b {
            word.push(Letter::S);
            a -= &b;
        } else {
            word.push(Letter::T);
            let next_a = &b - &a;
            b = std::mem::replace(&mut a, next_a);
        }
    }
    Some(word)
}

/// The modified g-vector with coprime parameters (a, b) in subtree i:
/// g_i + a(e_k0 - e_t0) + b(e_s0 - e_k0). The pairs (1,0) and (0,-1) give
/// e_s0 and e_t0.
pub fn g_from_coprime(sign_pattern: SignPattern, i: u8, a: &BigInt, b: &BigInt) -> Result<ModVec> {
    let valid = (a.is_positive() && b.is_positive() && a.gcd(b).is_one())
        || (a.is_one() && b.is_zero())
        || (a.is_zero() && *b == BigInt::from(-1));
    if !valid {
        return Err(Error::InvalidParams {
            eps: 1,
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let kst = initial_kst(sign_pattern, i)?;
    let v_t0k0 = &ModVec::unit(kst.k as usize) - &ModVec::unit(kst.t as usize);
    let v_k0s0 = &ModVec::unit(kst.s as usize) - &ModVec::unit(kst.k as usize);
    Ok(&(&frak_g(sign_pattern, i)? + &v_t0k0.scale(a)) + &v_k0s0.scale(b))
}

/// Outcome of testing whether a vector is a modified g-vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GClassification {
    /// A g-vector of subtree i with parameters (a, b); the pairs (1,0) and
    /// (0,-1) are the boundary vectors e_s0 and e_t0.
    GVector { subtree: u8, a: BigInt, b: BigInt },
    NotAGVector,
}

/// Inverts the affine parameterization in each subtree and tests the
/// coprimality condition.
pub fn is_g_vector(v: &ModVec, sign_pattern: SignPattern) -> GClassification {
    for i in 1..=3u8 {
        if let Some((a, b)) = g_params_in_subtree(v, sign_pattern, i) {
            return GClassification::GVector { subtree: i, a, b };
        }
    }
    GClassification::NotAGVector
}

/// The (a, b) parameters of `v` in subtree i, if valid there.
pub fn g_params_in_subtree(
    v: &ModVec,
    sign_pattern: SignPattern,
    i: u8,
) -> Option<(BigInt, BigInt)> {
    let kst = initial_kst(sign_pattern, i).ok()?;
    let [x_k, x_s, x_t] = v.in_order(kst.as_tuple());
    let a = BigInt::one() - x_t;
    let b = x_s - BigInt::one();
    if x_k != -BigInt::one() + &a - &b {
        return None;
    }
    let valid = (a.is_positive() && b.is_positive() && a.gcd(&b).is_one())
        || (a.is_one() && b.is_zero())
        || (a.is_zero() && b == BigInt::from(-1));
    valid.then_some((a, b))
}

/// The walk whose K-vector carries the parameters (a, b) in subtree i, or
/// `None` for the boundary pairs (1,0) and (0,-1) which are not K-vectors.
pub fn pair_to_walk(
    sign_pattern: SignPattern,
    i: u8,
    a: &BigInt,
    b: &BigInt,
) -> Result<Option<Walk>> {
    if !(a.is_positive() && b.is_positive() && a.gcd(b).is_one()) {
        return Ok(None);
    }
    let to_usize = |x: &BigInt| {
        x.to_usize()
            .ok_or_else(|| Error::Parse(format!("index {x} out of range")))
    };
    if a.is_one() {
        // Trunk: (1, n+1) belongs to [i]S^n.
        let n = to_usize(&(b - BigInt::one()))?;
        let mut w = Walk::seed(sign_pattern, i)?;
        for _ in 0..n {
            w = w.extend_letter(Letter::S);
        }
        return Ok(Some(w));
    }
    // Branch: a = alpha + beta, b = n a + alpha with 1 <= alpha <= a - 1,
    // where (alpha, beta) is the in-branch K-pair of the word.
    let (n, alpha) = b.div_mod_floor(a);
    let beta = a - &alpha;
    let word = pair_to_word(&alpha, &beta).expect("alpha, beta coprime");
    let mut w = Walk::seed(sign_pattern, i)?;
    for _ in 0..to_usize(&n)? {
        w = w.extend_letter(Letter::S);
    }
    w = w.extend_letter(Letter::T);
    Ok(Some(w.extend_word(&word)))
}

/// The modified c-vector with parameters (eps; a, b) in subtree i:
/// eps c + a(e_k0 + e_t0) + b(e_k0 + e_s0).
pub fn c_from_params(
    sign_pattern: SignPattern,
    i: u8,
    eps: i8,
    a: &BigInt,
    b: &BigInt,
) -> Result<ModVec> {
    if !c_params_valid(eps, a, b) {
        return Err(Error::InvalidParams {
            eps,
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let kst = initial_kst(sign_pattern, i)?;
    let x_t0k0 = &ModVec::unit(kst.k as usize) + &ModVec::unit(kst.t as usize);
    let x_s0k0 = &ModVec::unit(kst.k as usize) + &ModVec::unit(kst.s as usize);
    let f = if eps == 1 { frak_c() } else { -&frak_c() };
    Ok(&(&f + &x_t0k0.scale(a)) + &x_s0k0.scale(b))
}

/// The admissible parameter set for c-vectors: ab >= 1 with gcd(|a|,|b|) = 1
/// except (-;1,1), plus four boundary cases.
pub fn c_params_valid(eps: i8, a: &BigInt, b: &BigInt) -> bool {
    if eps != 1 && eps != -1 {
        return false;
    }
    let general = (a * b).is_positive()
        && a.abs().gcd(&b.abs()).is_one()
        && !(eps == -1 && a.is_one() && b.is_one());
    let boundary = matches!(
        (eps, a.to_i8(), b.to_i8()),
        (1, Some(0), Some(-1)) | (-1, Some(0), Some(1)) | (1, Some(1), Some(0)) | (-1, Some(-1), Some(0))
    );
    general || boundary
}

/// Decodes the (eps; a, b) parameters of a c-vector in subtree i. The sign is
/// forced: eps = x_s + x_t - x_k in (k0, s0, t0) coordinates.
pub fn c_params_in_subtree(
    v: &ModVec,
    sign_pattern: SignPattern,
    i: u8,
) -> Option<(i8, BigInt, BigInt)> {
    let kst = initial_kst(sign_pattern, i).ok()?;
    let [x_k, x_s, x_t] = v.in_order(kst.as_tuple());
    let eps_int = &x_s + &x_t - &x_k;
    let eps: i8 = eps_int.to_i8().filter(|e| *e == 1 || *e == -1)?;
    let a = x_t - BigInt::from(eps);
    let b = x_s - BigInt::from(eps);
    if x_k != BigInt::from(eps) + &a + &b {
        return None;
    }
    c_params_valid(eps, &a, &b).then_some((eps, a, b))
}

/// The walk and role at which the c-vector with parameters (eps; a, b) first
/// appears in subtree i, following the constructive case split of the
/// parameterization. Used to bound set comparisons by walk length.
pub fn c_params_to_walk(
    sign_pattern: SignPattern,
    i: u8,
    eps: i8,
    a: &BigInt,
    b: &BigInt,
) -> Result<(Walk, Role)> {
    if !c_params_valid(eps, a, b) {
        return Err(Error::InvalidParams {
            eps,
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let seed = Walk::seed(sign_pattern, i)?;
    let trunk = |n: usize| {
        let mut w = seed.clone();
        for _ in 0..n {
            w = w.extend_letter(Letter::S);
        }
        w
    };
    let to_usize = |x: &BigInt| {
        x.to_usize()
            .ok_or_else(|| Error::Parse(format!("index {x} out of range")))
    };

    let one = BigInt::one();
    if eps == 1 && a.is_zero() {
        // c_T at [i]: (+; 0, -1).
        return Ok((seed, Role::T));
    }
    if eps == -1 && a.is_zero() {
        // c_K at [i]T: (-; 0, 1).
        return Ok((seed.extend_letter(Letter::T), Role::K));
    }
    if eps == 1 && *a == -&one {
        // c_K at [i]S^n: (+; -1, -(n+1)).
        let n = to_usize(&(-b - &one))?;
        return Ok((trunk(n), Role::K));
    }
    if eps == -1 && a.is_one() && *b >= BigInt::from(2) {
        // c_S at [i]S^n: (-; 1, n+2).
        let n = to_usize(&(b - BigInt::from(2)))?;
        return Ok((trunk(n), Role::S));
    }
    if eps == 1 && a.is_one() && !b.is_negative() {
        // c_S at [i]S^nT: (+; 1, n).
        let n = to_usize(b)?;
        return Ok((trunk(n).extend_letter(Letter::T), Role::S));
    }
    if eps == -1 && *a == -&one && !b.is_positive() {
        // c_K at [i]S^nTS: (-; -1, -n).
        let n = to_usize(&-b)?;
        return Ok((
            trunk(n).extend_letter(Letter::T).extend_letter(Letter::S),
            Role::K,
        ));
    }

    // General branch family: |a| >= 2 decomposes over the n-th maximal branch
    // with in-branch pair sigma (alpha, beta).
    let sigma: i8 = if a.is_positive() { 1 } else { -1 };
    let (abs_a, abs_b) = (a.abs(), b.abs());
    let (n, alpha) = abs_b.div_mod_floor(&abs_a);
    let beta = &abs_a - &alpha;
    debug_assert!(alpha.is_positive() && beta.is_positive());
    let x = pair_to_word(&alpha, &beta).expect("alpha, beta coprime");
    let tau: i8 = if x.iter().filter(|&&l| l == Letter::T).count() % 2 == 0 {
        1
    } else {
        -1
    };
    let root = trunk(to_usize(&n)?).extend_letter(Letter::T);
    if eps == 1 {
        // c_S at w·XS or w·XT with p-pair sigma (alpha, beta).
        let last = if sigma == tau { Letter::S } else { Letter::T };
        let mut word = x;
        word.push(last);
        Ok((root.extend_word(&word), Role::S))
    } else {
        // c_K at w·Y·S = -c_S at w·Y, with p-pair -sigma (alpha, beta).
        let last = if -sigma == tau { Letter::S } else { Letter::T };
        let mut word = x;
        word.push(last);
        word.push(Letter::S);
        Ok((root.extend_word(&word), Role::K))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::{self, branch_root_closed_form, eigen_basis};

    const SP: SignPattern = SignPattern::CyclicA;

    fn word(text: &str) -> Vec<Letter> {
        text.chars()
            .map(|c| if c == 'S' { Letter::S } else { Letter::T })
            .collect()
    }

    fn all_words(max_len: usize) -> Vec<Vec<Letter>> {
        let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<Letter>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for letter in [Letter::S, Letter::T] {
                    let mut w2 = w.clone();
                    w2.push(letter);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        words
    }

    #[test]
    fn worked_chain() {
        // (1,1) -S-> (2,1) -T-> (1,3) -T-> (3,4) -S-> (7,4) -S-> (11,4);
        // prepending letters builds the words "", S, TS, TTS, STTS, SSTTS.
        let mut pair = CoeffPair::initial(CoeffSide::Q, Role::K);
        let expected = [(2, 1), (1, 3), (3, 4), (7, 4), (11, 4)];
        for (letter, (a, b)) in [Letter::S, Letter::T, Letter::T, Letter::S, Letter::S]
            .into_iter()
            .zip(expected)
        {
            pair = coeff_step(&pair, letter);
            assert_eq!((pair.a.clone(), pair.b.clone()), (a.into(), b.into()));
        }
        assert_eq!(
            coeffs(CoeffSide::Q, Role::K, &word("SSTTS")),
            CoeffPair::new(CoeffSide::Q, 11, 4)
        );
        assert_eq!(
            coeffs(CoeffSide::Q, Role::K, &word("STTS")),
            CoeffPair::new(CoeffSide::Q, 7, 4)
        );
    }

    #[test]
    fn s_fixes_pairs_with_zero_b() {
        let pair = CoeffPair::new(CoeffSide::Q, 1, 0);
        assert_eq!(coeff_step(&pair, Letter::S), pair);
    }

    #[test]
    fn initial_pairs() {
        assert_eq!(coeffs(CoeffSide::Q, Role::K, &[]), CoeffPair::new(CoeffSide::Q, 1, 1));
        assert_eq!(coeffs(CoeffSide::Q, Role::S, &[]), CoeffPair::new(CoeffSide::Q, 0, 1));
        assert_eq!(coeffs(CoeffSide::Q, Role::T, &[]), CoeffPair::new(CoeffSide::Q, 1, 0));
        assert_eq!(coeffs(CoeffSide::P, Role::K, &[]), CoeffPair::new(CoeffSide::P, 1, -1));
        assert_eq!(coeffs(CoeffSide::P, Role::S, &[]), CoeffPair::new(CoeffSide::P, 0, 1));
        assert_eq!(coeffs(CoeffSide::P, Role::T, &[]), CoeffPair::new(CoeffSide::P, -1, 0));
    }

    #[test]
    fn m_fold_s_from_k() {
        for m in 0..10i64 {
            let w = vec![Letter::S; m as usize];
            assert_eq!(
                coeffs(CoeffSide::Q, Role::K, &w),
                CoeffPair::new(CoeffSide::Q, m + 1, 1)
            );
        }
    }

    #[test]
    fn p_pairs_are_sign_twisted_q_pairs() {
        // (-1)^{#T(X)} p_S^{XS} equals q_K^X, and p_S^{XT} its negative.
        for text in ["", "S", "T", "ST", "TS", "TT", "STTS", "TSTST"] {
            let x = word(text);
            let t_count = x.iter().filter(|&&l| l == Letter::T).count();
            let sign = BigInt::from(if t_count % 2 == 0 { 1 } else { -1 });
            let q = coeffs(CoeffSide::Q, Role::K, &x);
            let mut xs = x.clone();
            xs.push(Letter::S);
            let p = coeffs(CoeffSide::P, Role::S, &xs);
            assert_eq!(p.a, &q.a * &sign);
            assert_eq!(p.b, &q.b * &sign);
            let mut xt = x.clone();
            xt.push(Letter::T);
            let p = coeffs(CoeffSide::P, Role::S, &xt);
            assert_eq!(p.a, &q.a * -&sign);
            assert_eq!(p.b, &q.b * -&sign);
        }
    }

    #[test]
    fn vectors_from_coeffs_match_recursion() {
        // Exhaustive over words |X| <= 7 at branch roots n <= 4, both sides.
        for n in 0..=4usize {
            let root_walk = Walk::from_word(SP, 1, &{
                let mut w = vec![Letter::S; n];
                w.push(Letter::T);
                w
            })
            .unwrap();
            let root = eigen_basis(&pattern::eval(&root_walk).unwrap());
            assert_eq!(root, branch_root_closed_form(SP, 1, n).unwrap());
            for x in all_words(7) {
                let state = pattern::eval(&root_walk.extend_word(&x)).unwrap();
                for role in Role::ALL {
                    let q = coeffs(CoeffSide::Q, role, &x);
                    assert_eq!(
                        vector_from_coeffs(&root, role, &q),
                        *state.g(role),
                        "g-side n={n} X={x:?} role={role:?}"
                    );
                    let p = coeffs(CoeffSide::P, role, &x);
                    assert_eq!(
                        vector_from_coeffs(&root, role, &p),
                        *state.c(role),
                        "c-side n={n} X={x:?} role={role:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn worked_example_vector() {
        // g_K at [i]S^nT·S^2T^2S via coefficients:
        // (-15n+3) e_k0 + (15n+12) e_s0 - 14 e_t0.
        for n in 0..=3usize {
            let root = branch_root_closed_form(SP, 1, n).unwrap();
            let pair = coeffs(CoeffSide::Q, Role::K, &word("SSTTS"));
            let v = vector_from_coeffs(&root, Role::K, &pair);
            let n = n as i64;
            assert_eq!(v, ModVec::new(-15 * n + 3, -14, 15 * n + 12));
        }
    }

    #[test]
    fn enumerate_coprime_small() {
        let got = enumerate_coprime(3);
        let pairs: Vec<(i64, i64, String)> = got
            .iter()
            .map(|(a, b, w)| {
                (
                    a.to_i64().unwrap(),
                    b.to_i64().unwrap(),
                    w.iter().map(|l| l.to_string()).collect(),
                )
            })
            .collect();
        assert_eq!(
            pairs,
            vec![
                (1, 1, String::new()),
                (1, 2, "T".to_string()),
                (2, 1, "S".to_string())
            ]
        );
    }

    #[test]
    fn enumerate_coprime_exactly_once_vs_gcd_scan() {
        let got = enumerate_coprime(30);
        let mut seen = std::collections::HashSet::new();
        for (a, b, w) in &got {
            assert!(seen.insert((a.clone(), b.clone())), "duplicate ({a},{b})");
            let replay = coeffs(CoeffSide::Q, Role::K, w);
            assert_eq!((&replay.a, &replay.b), (a, b));
        }
        for a in 1i64..=29 {
            for b in 1i64..=29 {
                if a + b <= 30 {
                    let coprime = BigInt::from(a).gcd(&BigInt::from(b)).is_one();
                    assert_eq!(
                        seen.contains(&(BigInt::from(a), BigInt::from(b))),
                        coprime,
                        "({a},{b})"
                    );
                }
            }
        }
        assert!(!seen.contains(&(BigInt::from(2), BigInt::from(2))));
    }

    #[test]
    fn swapped_pairs_appear_at_equal_depth() {
        for (a, b, w) in enumerate_coprime(20) {
            let swapped = pair_to_word(&b, &a).unwrap();
            assert_eq!(swapped.len(), w.len(), "({a},{b})");
        }
    }

    #[test]
    fn pair_to_word_inverts_enumeration() {
        for (a, b, w) in enumerate_coprime(25) {
            assert_eq!(pair_to_word(&a, &b).unwrap(), w);
        }
    }

    #[test]
    fn g_from_coprime_special_cases() {
        let kst = initial_kst(SP, 1).unwrap();
        assert_eq!(
            g_from_coprime(SP, 1, &BigInt::one(), &BigInt::zero()).unwrap(),
            ModVec::unit(kst.s as usize)
        );
        assert_eq!(
            g_from_coprime(SP, 1, &BigInt::zero(), &BigInt::from(-1)).unwrap(),
            ModVec::unit(kst.t as usize)
        );
        assert!(g_from_coprime(SP, 1, &BigInt::from(2), &BigInt::from(2)).is_err());
    }

    #[test]
    fn trunk_k_vectors_have_pair_1_n_plus_1() {
        for n in 0..=6usize {
            let w = Walk::from_word(SP, 1, &vec![Letter::S; n]).unwrap();
            let g = pattern::eval(&w).unwrap().g(Role::K).clone();
            let expected =
                g_from_coprime(SP, 1, &BigInt::one(), &BigInt::from(n as i64 + 1)).unwrap();
            assert_eq!(g, expected);
        }
    }

    #[test]
    fn pair_to_walk_round_trip() {
        for (a, b, _) in enumerate_coprime(16) {
            let w = pair_to_walk(SP, 2, &a, &b).unwrap().unwrap();
            let g = pattern::eval(&w).unwrap().g(Role::K).clone();
            assert_eq!(g, g_from_coprime(SP, 2, &a, &b).unwrap(), "({a},{b})");
            assert_eq!(g_params_in_subtree(&g, SP, 2), Some((a.clone(), b.clone())));
        }
        assert_eq!(
            pair_to_walk(SP, 1, &BigInt::one(), &BigInt::zero()).unwrap(),
            None
        );
    }

    #[test]
    fn classification_rejects_non_g_vectors() {
        // (2,2) is not coprime, so the lattice point is not a g-vector.
        let kst = initial_kst(SP, 1).unwrap();
        let v_t0k0 = &ModVec::unit(kst.k as usize) - &ModVec::unit(kst.t as usize);
        let v_k0s0 = &ModVec::unit(kst.s as usize) - &ModVec::unit(kst.k as usize);
        let v = &(&frak_g(SP, 1).unwrap() + &v_t0k0.scale(&2.into())) + &v_k0s0.scale(&2.into());
        assert_eq!(is_g_vector(&v, SP), GClassification::NotAGVector);
        assert!(matches!(
            is_g_vector(&ModVec::unit(3), SP),
            GClassification::GVector { .. }
        ));
    }

    #[test]
    fn c_params_examples() {
        // (-;1,1) is excluded, (+;1,1) is fine.
        assert!(c_from_params(SP, 1, -1, &BigInt::one(), &BigInt::one()).is_err());
        assert!(c_from_params(SP, 1, 1, &BigInt::one(), &BigInt::one()).is_ok());
        // c_T at [i] has parameters (+; 0, -1).
        let seed = pattern::seed(SP, 1).unwrap();
        let v = c_from_params(SP, 1, 1, &BigInt::zero(), &BigInt::from(-1)).unwrap();
        assert_eq!(&v, seed.c(Role::T));
        // c_K at [i]S^n has parameters (+; -1, -(n+1)).
        for n in 0..=5usize {
            let w = Walk::from_word(SP, 1, &vec![Letter::S; n]).unwrap();
            let state = pattern::eval(&w).unwrap();
            let v =
                c_from_params(SP, 1, 1, &BigInt::from(-1), &BigInt::from(-(n as i64) - 1)).unwrap();
            assert_eq!(&v, state.c(Role::K));
        }
    }

    #[test]
    fn c_witness_walks_carry_their_parameters() {
        for eps in [1i8, -1] {
            for a in -9i64..=9 {
                for b in -9i64..=9 {
                    let (a, b) = (BigInt::from(a), BigInt::from(b));
                    if !c_params_valid(eps, &a, &b) {
                        continue;
                    }
                    let (walk, role) = c_params_to_walk(SP, 1, eps, &a, &b).unwrap();
                    let state = pattern::eval(&walk).unwrap();
                    let v = c_from_params(SP, 1, eps, &a, &b).unwrap();
                    assert_eq!(&v, state.c(role), "({eps}; {a}, {b}) at {walk} role {role:?}");
                }
            }
        }
    }

    #[test]
    fn c_params_decode_round_trip() {
        for eps in [1i8, -1] {
            for a in -6i64..=6 {
                for b in -6i64..=6 {
                    let (a, b) = (BigInt::from(a), BigInt::from(b));
                    if !c_params_valid(eps, &a, &b) {
                        continue;
                    }
                    let v = c_from_params(SP, 2, eps, &a, &b).unwrap();
                    assert_eq!(c_params_in_subtree(&v, SP, 2), Some((eps, a, b)));
                }
            }
        }
    }
}
