//! Validated B-invariant exchange matrices, generic matrix mutation, and the
//! raw c-/g-vector recursion used as the brute-force oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::{rat, rat_sqrt, Mat3, ModVec, Rat, Vec3};
use crate::{Error, Result};

/// The two sign shapes a B-invariant matrix can take. `CyclicA` is the shape
/// with b12 < 0 (the plus sign in the defining family), `CyclicB` its negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignPattern {
    CyclicA,
    CyclicB,
}

impl SignPattern {
    pub fn other(self) -> SignPattern {
        match self {
            SignPattern::CyclicA => SignPattern::CyclicB,
            SignPattern::CyclicB => SignPattern::CyclicA,
        }
    }
}

/// A validated exchange matrix of B-invariant type together with its
/// skew-symmetrizer D = diag(p r', p' r', p r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeMatrix {
    pub p: Rat,
    pub pp: Rat,
    pub q: Rat,
    pub qp: Rat,
    pub r: Rat,
    pub rp: Rat,
    pub sign: i8,
    entries: Mat3,
    d: [Rat; 3],
}

/// Checks the defining identities and builds the matrix.
pub fn validate(
    p: Rat,
    pp: Rat,
    q: Rat,
    qp: Rat,
    r: Rat,
    rp: Rat,
    sign: i8,
) -> Result<ExchangeMatrix> {
    for (name, v) in [
        ("p", &p),
        ("p'", &pp),
        ("q", &q),
        ("q'", &qp),
        ("r", &r),
        ("r'", &rp),
    ] {
        if !v.is_positive() {
            return Err(Error::NonPositive {
                name,
                value: v.to_string(),
            });
        }
    }
    if sign != 1 && sign != -1 {
        return Err(Error::Parse(format!("sign must be +1 or -1, got {sign}")));
    }
    let four = rat(4);
    for (label, prod) in [("pp'", &p * &pp), ("qq'", &q * &qp), ("rr'", &r * &rp)] {
        if prod != four {
            return Err(Error::ConstraintViolation(format!("{label} = {prod}, expected 4")));
        }
    }
    let pqr = &(&p * &q) * &r;
    let pqr_p = &(&pp * &qp) * &rp;
    if pqr != pqr_p {
        return Err(Error::ConstraintViolation(format!(
            "pqr = {pqr} but p'q'r' = {pqr_p}"
        )));
    }
    let s = rat(sign as i64);
    let entries = Mat3([
        [Rat::zero(), &s * &-&pp, &s * &r],
        [&s * &p, Rat::zero(), &s * &-&qp],
        [&s * &-&rp, &s * &q, Rat::zero()],
    ]);
    let d = [&p * &rp, &pp * &rp, &p * &r];
    Ok(ExchangeMatrix {
        p,
        pp,
        q,
        qp,
        r,
        rp,
        sign,
        entries,
        d,
    })
}

impl ExchangeMatrix {
    /// The Markov quiver matrix: all parameters 2.
    pub fn markov() -> ExchangeMatrix {
        validate(rat(2), rat(2), rat(2), rat(2), rat(2), rat(2), 1).unwrap()
    }

    /// The second integer instance, with parameters (1,4,2,2,4,1).
    pub fn integer2() -> ExchangeMatrix {
        validate(rat(1), rat(4), rat(2), rat(2), rat(4), rat(1), 1).unwrap()
    }

    pub fn entries(&self) -> &Mat3 {
        &self.entries
    }

    pub fn skew_symmetrizer(&self) -> &[Rat; 3] {
        &self.d
    }

    pub fn sign_pattern(&self) -> SignPattern {
        if self.sign == 1 {
            SignPattern::CyclicA
        } else {
            SignPattern::CyclicB
        }
    }

    /// D B is skew-symmetric; holds exactly for every validated matrix.
    pub fn check_skew_symmetrizable(&self) -> bool {
        let b = &self.entries;
        (0..3).all(|i| {
            (0..3).all(|j| &self.d[i] * &b.0[i][j] == -&(&self.d[j] * &b.0[j][i]))
        })
    }

    /// sqrt(d_i / d_j), the scale factor taking raw entry (i,j) to the
    /// modified basis. For rational parameters the ratio is always a rational
    /// square, so the error is a guard, not an expected path.
    pub fn modified_scale(&self, i: usize, j: usize) -> Result<Rat> {
        let ratio = &self.d[i - 1] / &self.d[j - 1];
        rat_sqrt(&ratio).ok_or(Error::IrrationalRatio {
            i,
            j,
            ratio: ratio.to_string(),
        })
    }
}

impl Serialize for ExchangeMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            p: String,
            pp: String,
            q: String,
            qp: String,
            r: String,
            rp: String,
            sign: i8,
        }
        Repr {
            p: self.p.to_string(),
            pp: self.pp.to_string(),
            q: self.q.to_string(),
            qp: self.qp.to_string(),
            r: self.r.to_string(),
            rp: self.rp.to_string(),
            sign: self.sign,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExchangeMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            p: String,
            pp: String,
            q: String,
            qp: String,
            r: String,
            rp: String,
            sign: i8,
        }
        let repr = Repr::deserialize(deserializer)?;
        let parse = |s: &String| {
            s.parse::<BigRational>()
                .map_err(|e| D::Error::custom(format!("bad rational {s:?}: {e}")))
        };
        validate(
            parse(&repr.p)?,
            parse(&repr.pp)?,
            parse(&repr.q)?,
            parse(&repr.qp)?,
            parse(&repr.r)?,
            parse(&repr.rp)?,
            repr.sign,
        )
        .map_err(D::Error::custom)
    }
}

/// Standard Fomin-Zelevinsky matrix mutation in direction k (1-based).
pub fn matrix_mutate(b: &Mat3, k: u8) -> Result<Mat3> {
    if !(1..=3).contains(&k) {
        return Err(Error::IndexOutOfRange(k));
    }
    let k = (k - 1) as usize;
    let mut out = Mat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            out.0[i][j] = if i == k || j == k {
                -&b.0[i][j]
            } else {
                let prod = &b.0[i][k] * &b.0[k][j];
                let bump = if prod.is_positive() {
                    if b.0[i][k].is_positive() {
                        prod
                    } else {
                        -prod
                    }
                } else {
                    Rat::zero()
                };
                &b.0[i][j] + &bump
            };
        }
    }
    Ok(out)
}

/// State of the raw recursion: the mutated matrix together with the c- and
/// g-vector matrices (vectors are columns, indexed by raw direction).
#[derive(Debug, Clone)]
pub struct RawPatternState<'a> {
    pub matrix: &'a ExchangeMatrix,
    pub seq: Vec<u8>,
    pub bw: Mat3,
    pub c: Mat3,
    pub g: Mat3,
}

impl<'a> RawPatternState<'a> {
    pub fn initial(matrix: &'a ExchangeMatrix) -> Self {
        RawPatternState {
            matrix,
            seq: Vec::new(),
            bw: matrix.entries().clone(),
            c: Mat3::identity(),
            g: Mat3::identity(),
        }
    }

    pub fn c_col(&self, j: u8) -> Vec3 {
        self.c.column((j - 1) as usize)
    }

    pub fn g_col(&self, j: u8) -> Vec3 {
        self.g.column((j - 1) as usize)
    }

    /// One raw mutation in direction k. Rejects a repeat of the last index.
    pub fn step(&self, k: u8) -> Result<RawPatternState<'a>> {
        if !(1..=3).contains(&k) {
            return Err(Error::IndexOutOfRange(k));
        }
        if self.seq.last() == Some(&k) {
            return Err(Error::NonReduced {
                index: k,
                position: self.seq.len(),
            });
        }
        let kc = (k - 1) as usize;
        let pos = |x: &Rat| -> Rat {
            if x.is_positive() {
                x.clone()
            } else {
                Rat::zero()
            }
        };

        let ck = self.c.column(kc);
        let mut c = Mat3::zero();
        for j in 0..3 {
            if j == kc {
                c.set_column(j, &-&ck);
            } else {
                let bkj = &self.bw.0[kc][j];
                let col = self.c.column(j);
                let new = Vec3(std::array::from_fn(|i| {
                    &col.0[i] + &(&(&ck.0[i] * &pos(bkj)) + &(&pos(&-&ck.0[i]) * bkj))
                }));
                c.set_column(j, &new);
            }
        }

        // g_k' = -g_k + sum_l [b_lk]_+ g_l - sum_l [c_lk]_+ b_l, with b_l the
        // columns of the initial matrix.
        let b0 = self.matrix.entries();
        let mut gk = -&self.g.column(kc);
        for l in 0..3 {
            let blk = pos(&self.bw.0[l][kc]);
            if !blk.is_zero() {
                gk = &gk + &self.g.column(l).scale(&blk);
            }
            let clk = pos(&self.c.0[l][kc]);
            if !clk.is_zero() {
                gk = &gk - &b0.column(l).scale(&clk);
            }
        }
        let mut g = self.g.clone();
        g.set_column(kc, &gk);

        let mut seq = self.seq.clone();
        seq.push(k);
        Ok(RawPatternState {
            matrix: self.matrix,
            seq,
            bw: self.bw.neg(),
            c,
            g,
        })
    }

    /// Replays a whole reduced sequence from the initial state.
    pub fn eval_seq(matrix: &'a ExchangeMatrix, seq: &[u8]) -> Result<RawPatternState<'a>> {
        let mut state = RawPatternState::initial(matrix);
        for &k in seq {
            state = state.step(k)?;
        }
        Ok(state)
    }

    /// Sign of a sign-coherent column; `None` if the column is not coherent.
    pub fn column_sign(col: &Vec3) -> Option<i8> {
        let any_pos = col.0.iter().any(|x| x.is_positive());
        let any_neg = col.0.iter().any(|x| x.is_negative());
        match (any_pos, any_neg) {
            (true, false) => Some(1),
            (false, true) => Some(-1),
            _ => None,
        }
    }

    /// Converts both patterns to exact integer coordinates in the modified
    /// basis. Triples are in raw index order (1,2,3).
    pub fn to_modified(&self) -> Result<([ModVec; 3], [ModVec; 3])> {
        let mut scales = Mat3::zero();
        for i in 1..=3 {
            for j in 1..=3 {
                scales.0[i - 1][j - 1] = self.matrix.modified_scale(i, j)?;
            }
        }
        let convert = |m: &Mat3| -> Result<[ModVec; 3]> {
            let mut out = [ModVec::zero(), ModVec::zero(), ModVec::zero()];
            for (j, slot) in out.iter_mut().enumerate() {
                let mut coords = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
                for (i, coord) in coords.iter_mut().enumerate() {
                    let v = &m.0[i][j] * &scales.0[i][j];
                    if !v.is_integer() {
                        return Err(Error::NonIntegralCoordinate {
                            i: i + 1,
                            j: j + 1,
                            value: v.to_string(),
                        });
                    }
                    *coord = v.to_integer();
                }
                *slot = ModVec(coords);
            }
            Ok(out)
        };
        Ok((convert(&self.c)?, convert(&self.g)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_markov() {
        let m = ExchangeMatrix::markov();
        assert_eq!(m.entries(), &Mat3::from_rows_i64([[0, -2, 2], [2, 0, -2], [-2, 2, 0]]));
        assert_eq!(m.skew_symmetrizer(), &[rat(4), rat(4), rat(4)]);
        assert!(m.check_skew_symmetrizable());
        assert_eq!(m.sign_pattern(), SignPattern::CyclicA);
    }

    #[test]
    fn validate_integer2() {
        let m = ExchangeMatrix::integer2();
        assert_eq!(m.entries(), &Mat3::from_rows_i64([[0, -4, 4], [1, 0, -2], [-1, 2, 0]]));
        assert_eq!(m.skew_symmetrizer(), &[rat(1), rat(4), rat(4)]);
        assert!(m.check_skew_symmetrizable());
    }

    #[test]
    fn validate_rejects_broken_product() {
        let err = validate(rat(2), rat(2), rat(2), rat(2), rat(3), rat(3), 1).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation(_)), "{err}");
    }

    #[test]
    fn validate_rejects_nonpositive() {
        let err = validate(rat(-2), rat(-2), rat(2), rat(2), rat(2), rat(2), 1).unwrap_err();
        assert!(matches!(err, Error::NonPositive { .. }), "{err}");
    }

    #[test]
    fn validate_rejects_unequal_triple_products() {
        // pp' = qq' = rr' = 4 but pqr = 4 != 16 = p'q'r'.
        let err = validate(rat(1), rat(4), rat(2), rat(2), rat(2), rat(2), 1).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation(_)), "{err}");
    }

    #[test]
    fn mutation_negates_b_invariant_matrices() {
        for m in [ExchangeMatrix::markov(), ExchangeMatrix::integer2()] {
            for k in 1..=3 {
                assert_eq!(matrix_mutate(m.entries(), k).unwrap(), m.entries().neg());
            }
        }
    }

    #[test]
    fn mutation_is_an_involution() {
        let m = ExchangeMatrix::markov();
        let once = matrix_mutate(m.entries(), 2).unwrap();
        assert_eq!(matrix_mutate(&once, 2).unwrap(), *m.entries());
    }

    #[test]
    fn first_markov_step() {
        let m = ExchangeMatrix::markov();
        let s = RawPatternState::eval_seq(&m, &[1]).unwrap();
        assert_eq!(s.c_col(1), Vec3([rat(-1), rat(0), rat(0)]));
        assert_eq!(s.c_col(2), Vec3([rat(0), rat(1), rat(0)]));
        assert_eq!(s.c_col(3), Vec3([rat(2), rat(0), rat(1)]));
        assert_eq!(s.g_col(1), Vec3([rat(-1), rat(0), rat(2)]));
        assert_eq!(s.g_col(2), Vec3([rat(0), rat(1), rat(0)]));
        assert_eq!(s.g_col(3), Vec3([rat(0), rat(0), rat(1)]));
        assert_eq!(s.bw, m.entries().neg());
    }

    #[test]
    fn empty_walk_is_identity() {
        let m = ExchangeMatrix::integer2();
        let s = RawPatternState::initial(&m);
        assert_eq!(s.c, Mat3::identity());
        assert_eq!(s.g, Mat3::identity());
    }

    #[test]
    fn rejects_repeated_index() {
        let m = ExchangeMatrix::markov();
        let s = RawPatternState::eval_seq(&m, &[1]).unwrap();
        assert!(matches!(s.step(1), Err(Error::NonReduced { .. })));
    }

    #[test]
    fn c_column_signs_after_1_2() {
        let m = ExchangeMatrix::markov();
        let s = RawPatternState::eval_seq(&m, &[1, 2]).unwrap();
        let signs: Vec<i8> = (1..=3)
            .map(|j| RawPatternState::column_sign(&s.c_col(j)).unwrap())
            .collect();
        assert_eq!(signs, vec![-1, -1, 1]);
    }

    #[test]
    fn modified_conversion_markov() {
        let m = ExchangeMatrix::markov();
        let s = RawPatternState::initial(&m);
        let (c, g) = s.to_modified().unwrap();
        for j in 1..=3 {
            assert_eq!(c[j - 1], ModVec::unit(j));
            assert_eq!(g[j - 1], ModVec::unit(j));
        }
        let s = s.step(1).unwrap();
        let (_, g) = s.to_modified().unwrap();
        assert_eq!(g[0], ModVec::new(-1, 0, 2));
        assert_eq!(g[1], ModVec::unit(2));
        assert_eq!(g[2], ModVec::unit(3));
    }

    #[test]
    fn modified_conversion_integer2_is_integral() {
        let m = ExchangeMatrix::integer2();
        let s = RawPatternState::eval_seq(&m, &[1]).unwrap();
        // Row scale factors are 1, 2, 1/2 against columns; integrality is the test.
        let (c, g) = s.to_modified().unwrap();
        assert_eq!(c[0], ModVec::new(-1, 0, 0));
        assert_eq!(g.iter().map(|v| v.sum()).collect::<Vec<_>>(), vec![
            BigInt::from(1),
            BigInt::from(1),
            BigInt::from(1)
        ]);
    }

    #[test]
    fn exchange_matrix_json_round_trip() {
        let m = ExchangeMatrix::integer2();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"p":"1","pp":"4","q":"2","qp":"2","r":"4","rp":"1","sign":1}"#
        );
        let back: ExchangeMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
