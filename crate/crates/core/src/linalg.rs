//! Small exact linear algebra: integer 3-vectors for modified coordinates and
//! rational 3x3 matrices for oracle states and linear maps.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

macro_rules! fmt_tuple3 {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
        }
    };
}

/// Exact integer 3-vector; coordinates are with respect to the modified
/// standard basis unless a caller says otherwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModVec(pub [BigInt; 3]);

impl ModVec {
    pub fn new(x1: impl Into<BigInt>, x2: impl Into<BigInt>, x3: impl Into<BigInt>) -> Self {
        ModVec([x1.into(), x2.into(), x3.into()])
    }

    pub fn zero() -> Self {
        ModVec([BigInt::zero(), BigInt::zero(), BigInt::zero()])
    }

    /// Modified standard vector with 1-based index.
    pub fn unit(j: usize) -> Self {
        assert!((1..=3).contains(&j), "unit index out of range");
        let mut v = Self::zero();
        v.0[j - 1] = BigInt::one();
        v
    }

    pub fn coord(&self, j: usize) -> &BigInt {
        &self.0[j - 1]
    }

    pub fn sum(&self) -> BigInt {
        &self.0[0] + &self.0[1] + &self.0[2]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        ModVec([&self.0[0] * k, &self.0[1] * k, &self.0[2] * k])
    }

    /// Divide out the gcd of the coordinates, keeping the direction. The sign
    /// is normalized so that the first nonzero coordinate is positive.
    pub fn primitive(&self) -> Self {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let g = self.0[0].gcd(&self.0[1]).gcd(&self.0[2]);
        let mut v = ModVec([&self.0[0] / &g, &self.0[1] / &g, &self.0[2] / &g]);
        if v.0.iter().find(|c| !c.is_zero()).map(|c| c.is_negative()) == Some(true) {
            v = -&v;
        }
        v
    }

    pub fn to_rat(&self) -> Vec3 {
        Vec3([
            Rat::from_integer(self.0[0].clone()),
            Rat::from_integer(self.0[1].clone()),
            Rat::from_integer(self.0[2].clone()),
        ])
    }

    /// Coordinates permuted into (k0, s0, t0) order.
    pub fn in_order(&self, order: (u8, u8, u8)) -> [BigInt; 3] {
        [
            self.0[order.0 as usize - 1].clone(),
            self.0[order.1 as usize - 1].clone(),
            self.0[order.2 as usize - 1].clone(),
        ]
    }
}

impl fmt::Debug for ModVec {
    fmt_tuple3!();
}

impl fmt::Display for ModVec {
    fmt_tuple3!();
}

impl Add for &ModVec {
    type Output = ModVec;
    fn add(self, rhs: &ModVec) -> ModVec {
        ModVec([
            &self.0[0] + &rhs.0[0],
            &self.0[1] + &rhs.0[1],
            &self.0[2] + &rhs.0[2],
        ])
    }
}

impl Sub for &ModVec {
    type Output = ModVec;
    fn sub(self, rhs: &ModVec) -> ModVec {
        ModVec([
            &self.0[0] - &rhs.0[0],
            &self.0[1] - &rhs.0[1],
            &self.0[2] - &rhs.0[2],
        ])
    }
}

impl Neg for &ModVec {
    type Output = ModVec;
    fn neg(self) -> ModVec {
        ModVec([-&self.0[0], -&self.0[1], -&self.0[2]])
    }
}

impl Mul<i64> for &ModVec {
    type Output = ModVec;
    fn mul(self, k: i64) -> ModVec {
        self.scale(&BigInt::from(k))
    }
}

impl Serialize for ModVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            basis: &'static str,
            coords: [String; 3],
        }
        Repr {
            basis: "modified",
            coords: [
                self.0[0].to_string(),
                self.0[1].to_string(),
                self.0[2].to_string(),
            ],
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ModVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            basis: String,
            coords: [String; 3],
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.basis != "modified" {
            return Err(D::Error::custom(format!("unknown basis {:?}", repr.basis)));
        }
        let parse = |s: &String| {
            s.parse::<BigInt>()
                .map_err(|e| D::Error::custom(format!("bad coordinate {s:?}: {e}")))
        };
        Ok(ModVec([
            parse(&repr.coords[0])?,
            parse(&repr.coords[1])?,
            parse(&repr.coords[2])?,
        ]))
    }
}

/// Exact rational 3-vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vec3(pub [Rat; 3]);

impl Vec3 {
    pub fn zero() -> Self {
        Vec3([Rat::zero(), Rat::zero(), Rat::zero()])
    }

    pub fn unit(j: usize) -> Self {
        let mut v = Self::zero();
        v.0[j - 1] = Rat::one();
        v
    }

    pub fn sum(&self) -> Rat {
        &(&self.0[0] + &self.0[1]) + &self.0[2]
    }

    pub fn scale(&self, k: &Rat) -> Self {
        Vec3([&self.0[0] * k, &self.0[1] * k, &self.0[2] * k])
    }

    /// Interprets the coordinates as an integer vector; `None` if any
    /// coordinate has a nontrivial denominator.
    pub fn to_int(&self) -> Option<ModVec> {
        let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (o, c) in out.iter_mut().zip(&self.0) {
            if !c.is_integer() {
                return None;
            }
            *o = c.to_integer();
        }
        Some(ModVec(out))
    }
}

impl fmt::Debug for Vec3 {
    fmt_tuple3!();
}

impl fmt::Display for Vec3 {
    fmt_tuple3!();
}

impl Add for &Vec3 {
    type Output = Vec3;
    fn add(self, rhs: &Vec3) -> Vec3 {
        Vec3([
            &self.0[0] + &rhs.0[0],
            &self.0[1] + &rhs.0[1],
            &self.0[2] + &rhs.0[2],
        ])
    }
}

impl Sub for &Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: &Vec3) -> Vec3 {
        Vec3([
            &self.0[0] - &rhs.0[0],
            &self.0[1] - &rhs.0[1],
            &self.0[2] - &rhs.0[2],
        ])
    }
}

impl Neg for &Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-&self.0[0], -&self.0[1], -&self.0[2]])
    }
}

/// Exact rational 3x3 matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat3(pub [[Rat; 3]; 3]);

impl Mat3 {
    pub fn zero() -> Self {
        Mat3(std::array::from_fn(|_| std::array::from_fn(|_| Rat::zero())))
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..3 {
            m.0[i][i] = Rat::one();
        }
        m
    }

    pub fn from_rows_i64(rows: [[i64; 3]; 3]) -> Self {
        Mat3(rows.map(|r| r.map(rat)))
    }

    pub fn from_columns(cols: [Vec3; 3]) -> Self {
        let mut m = Self::zero();
        for (j, c) in cols.iter().enumerate() {
            for i in 0..3 {
                m.0[i][j] = c.0[i].clone();
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec3 {
        Vec3(std::array::from_fn(|i| self.0[i][j].clone()))
    }

    pub fn set_column(&mut self, j: usize, v: &Vec3) {
        for i in 0..3 {
            self.0[i][j] = v.0[i].clone();
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.0[i - 1][j - 1]
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3(std::array::from_fn(|i| {
            let mut acc = Rat::zero();
            for j in 0..3 {
                acc += &self.0[i][j] * &v.0[j];
            }
            acc
        }))
    }

    pub fn mul_mat(&self, rhs: &Mat3) -> Mat3 {
        let mut m = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Rat::zero();
                for k in 0..3 {
                    acc += &self.0[i][k] * &rhs.0[k][j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }

    pub fn det(&self) -> Rat {
        let m = &self.0;
        let mut d = Rat::zero();
        d += &m[0][0] * &(&(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]));
        d -= &m[0][1] * &(&(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]));
        d += &m[0][2] * &(&(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]));
        d
    }

    /// Inverse via the adjugate; `None` on zero determinant.
    pub fn inverse(&self) -> Option<Mat3> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let m = &self.0;
        let cof = |r0: usize, c0: usize, r1: usize, c1: usize| -> Rat {
            &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0])
        };
        let mut adj = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                let (r0, r1) = match j {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let (c0, c1) = match i {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                adj.0[i][j] = &(cof(r0, c0, r1, c1) * rat(sign)) / &d;
            }
        }
        Some(adj)
    }

    pub fn neg(&self) -> Mat3 {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| -&self.0[i][j])))
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| self.0[j][i].clone())))
    }
}

impl fmt::Debug for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:?}; {:?}; {:?}]",
            Vec3(self.0[0].clone()),
            Vec3(self.0[1].clone()),
            Vec3(self.0[2].clone())
        )
    }
}

/// Exact square root of a nonnegative rational, if one exists.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer();
    let den = x.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = Mat3::from_rows_i64([[2, -1, 0], [1, 0, 0], [0, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul_mat(&inv), Mat3::identity());
        assert_eq!(inv.mul_mat(&m), Mat3::identity());
    }

    #[test]
    fn det_of_singular_matrix_is_zero() {
        let m = Mat3::from_rows_i64([[1, 2, 3], [2, 4, 6], [0, 1, 1]]);
        assert!(m.det().is_zero());
        assert!(m.inverse().is_none());
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rat_sqrt(&rat(4)), Some(rat(2)));
        assert_eq!(rat_sqrt(&Rat::new(1.into(), 4.into())), Some(Rat::new(1.into(), 2.into())));
        assert_eq!(rat_sqrt(&rat(2)), None);
        assert_eq!(rat_sqrt(&rat(-4)), None);
    }

    #[test]
    fn primitive_normalizes_sign_and_gcd() {
        assert_eq!(ModVec::new(-2, 4, -6).primitive(), ModVec::new(1, -2, 3));
        assert_eq!(ModVec::new(0, -3, 9).primitive(), ModVec::new(0, 1, -3));
    }

    #[test]
    fn modvec_json_shape() {
        let v = ModVec::new(-15, 12, 3);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"basis":"modified","coords":["-15","12","3"]}"#);
        let back: ModVec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
