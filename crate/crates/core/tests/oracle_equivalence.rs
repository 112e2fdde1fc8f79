//! Cross-checks the matrix-free fast path against the brute-force raw
//! recursion on every reduced walk up to a fixed depth, for both integer
//! instances and both global signs.

use markov_gfan::exchange::{ExchangeMatrix, RawPatternState};
use markov_gfan::linalg::rat;
use markov_gfan::pattern::{self, PatternState};
use markov_gfan::walk::replay_signs;

fn matrices() -> Vec<ExchangeMatrix> {
    let mut out = vec![ExchangeMatrix::markov(), ExchangeMatrix::integer2()];
    out.push(
        markov_gfan::exchange::validate(rat(2), rat(2), rat(2), rat(2), rat(2), rat(2), -1)
            .unwrap(),
    );
    out.push(
        markov_gfan::exchange::validate(rat(1), rat(4), rat(2), rat(2), rat(4), rat(1), -1)
            .unwrap(),
    );
    out
}

fn assert_state_matches(raw: &RawPatternState, fast: &PatternState) {
    let (raw_c, raw_g) = raw.to_modified().expect("integral conversion");
    let fast_c = fast.c_by_raw_index();
    let fast_g = fast.g_by_raw_index();
    assert_eq!(raw_c, fast_c, "c-triple mismatch at {:?}", raw.seq);
    assert_eq!(raw_g, fast_g, "g-triple mismatch at {:?}", raw.seq);

    // Sign coherence and the tropical sign replay.
    let eps = replay_signs(&fast.walk);
    for j in 1..=3u8 {
        let sign = RawPatternState::column_sign(&raw.c_col(j))
            .unwrap_or_else(|| panic!("c-column {j} not sign-coherent at {:?}", raw.seq));
        assert_eq!(sign, eps.sign(j), "tropical sign mismatch at {:?}", raw.seq);
    }

    // Uniqueness clause: exactly one admissible s, and it is S(w).
    let kst = fast.walk.kst().expect("nonempty");
    let k = kst.k;
    let eps_k = eps.sign(k);
    let mut hits = Vec::new();
    for s in 1..=3u8 {
        if s == k {
            continue;
        }
        let b_ks = raw.bw.entry(k as usize, s as usize);
        let scaled = rat(eps.sign(s) as i64) * b_ks.clone();
        if eps.sign(s) != eps_k && scaled < rat(0) {
            hits.push(s);
        }
    }
    assert_eq!(hits, vec![kst.s], "uniqueness clause failed at {:?}", raw.seq);
}

fn sweep(matrix: &ExchangeMatrix, depth: usize) -> usize {
    let sp = matrix.sign_pattern();
    let mut visited = 0usize;
    let mut stack: Vec<(RawPatternState, PatternState)> = Vec::new();
    for i in 1..=3u8 {
        let raw = RawPatternState::initial(matrix).step(i).unwrap();
        let fast = pattern::seed(sp, i).unwrap();
        stack.push((raw, fast));
    }
    while let Some((raw, fast)) = stack.pop() {
        assert_state_matches(&raw, &fast);
        visited += 1;
        if raw.seq.len() < depth {
            let kst = fast.walk.kst().unwrap();
            for k in 1..=3u8 {
                if k == kst.k {
                    continue;
                }
                let next_raw = raw.step(k).unwrap();
                let next_walk = fast.walk.extend_index(k).unwrap();
                let letter = *next_walk.word().unwrap().last().unwrap();
                let next_fast = pattern::step(&fast, letter);
                assert_eq!(next_fast.walk, next_walk);
                stack.push((next_raw, next_fast));
            }
        }
    }
    visited
}

#[test]
fn fast_path_equals_oracle_to_depth_12() {
    for matrix in matrices() {
        let visited = sweep(&matrix, 12);
        assert_eq!(visited, 3 * ((1 << 12) - 1), "walk count for {matrix:?}");
    }
}

#[test]
fn empty_walk_oracle_is_identity_in_modified_basis() {
    for matrix in matrices() {
        let raw = RawPatternState::initial(&matrix);
        let (c, g) = raw.to_modified().unwrap();
        for j in 1..=3usize {
            assert_eq!(c[j - 1], markov_gfan::ModVec::unit(j));
            assert_eq!(g[j - 1], markov_gfan::ModVec::unit(j));
        }
    }
}
