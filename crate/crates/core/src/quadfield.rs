//! Field contexts and exact arithmetic for real quadratic fields Q(sqrt(d)).
//!
//! Elements are stored in half-coordinates: `(x, y)` denotes
//! `(x + y*sqrt(d)) / 2`, which represents every algebraic integer of the
//! field uniformly for both discriminant classes.  All comparisons between
//! real embeddings are decided by exact integer arithmetic; the crate never
//! touches floating point.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Splitting behaviour of the rational prime 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TwoSplitting {
    /// d = 1 mod 8: (2) = P P' with two distinct primes of norm 2.
    Split,
    /// d = 5 mod 8: (2) stays prime, norm 4.
    Inert,
    /// d = 2, 3 mod 4: (2) = P^2 with one prime of norm 2.
    Ramified,
}

/// Immutable context for a fixed real quadratic field Q(sqrt(d)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    d: u64,
    disc: BigInt,
    fund_unit: QElem,
    fund_unit_norm: i8,
    two_splitting: TwoSplitting,
}

/// Builds the context for Q(sqrt(d)).  Requires 2 <= d <= 1000 squarefree.
pub fn make_field(d: u64) -> Result<FieldCtx> {
    if !(2..=1000).contains(&d) {
        return Err(Error::UnsupportedField(d));
    }
    let mut p = 2u64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return Err(Error::NotSquarefree(d));
        }
        p += 1;
    }
    let disc = if d % 4 == 1 {
        BigInt::from(d)
    } else {
        BigInt::from(4 * d)
    };
    let two_splitting = match d % 8 {
        1 => TwoSplitting::Split,
        5 => TwoSplitting::Inert,
        _ => TwoSplitting::Ramified,
    };
    let (fund_unit, fund_unit_norm) = fundamental_unit(d);
    Ok(FieldCtx {
        d,
        disc,
        fund_unit,
        fund_unit_norm,
        two_splitting,
    })
}

impl FieldCtx {
    /// The squarefree radicand d.
    pub fn d(&self) -> u64 {
        self.d
    }

    /// The field discriminant: d when d = 1 mod 4, otherwise 4d.
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// True when the ring of integers is Z[(1 + sqrt(d))/2].
    pub fn omega_is_half(&self) -> bool {
        self.d % 4 == 1
    }

    /// Splitting behaviour of 2.
    pub fn two_splitting(&self) -> TwoSplitting {
        self.two_splitting
    }

    /// The fundamental unit u > 1 of the ring of integers.
    pub fn fundamental_unit(&self) -> &QElem {
        &self.fund_unit
    }

    /// Norm of the fundamental unit, +1 or -1.
    pub fn fundamental_unit_norm(&self) -> i8 {
        self.fund_unit_norm
    }

    /// Generator of the totally positive units modulo {1}: the fundamental
    /// unit itself when it has norm +1, its square otherwise.
    pub fn totally_positive_unit_generator(&self) -> QElem {
        if self.fund_unit_norm == 1 {
            self.fund_unit.clone()
        } else {
            &self.fund_unit * &self.fund_unit
        }
    }

    /// The standard module generator: sqrt(d), or (1 + sqrt(d))/2 when
    /// d = 1 mod 4.
    pub fn omega(&self) -> QElem {
        if self.omega_is_half() {
            QElem {
                d: self.d,
                x: BigInt::one(),
                y: BigInt::one(),
            }
        } else {
            QElem {
                d: self.d,
                x: BigInt::zero(),
                y: BigInt::from(2),
            }
        }
    }

    /// Coefficients (c0, c1) of the minimal polynomial X^2 + c1 X + c0 of
    /// omega over Z.
    pub fn omega_min_poly(&self) -> (BigInt, BigInt) {
        if self.omega_is_half() {
            (-BigInt::from((self.d - 1) / 4), -BigInt::one())
        } else {
            (-BigInt::from(self.d), BigInt::zero())
        }
    }

    /// The element a + b*sqrt(d) for small integer coordinates.
    pub fn elem(&self, a: i64, b: i64) -> QElem {
        self.elem_big(BigInt::from(a), BigInt::from(b))
    }

    /// The element a + b*sqrt(d) for big integer coordinates.
    pub fn elem_big(&self, a: BigInt, b: BigInt) -> QElem {
        QElem {
            d: self.d,
            x: a * 2,
            y: b * 2,
        }
    }

    /// The rational integer n as a field element.
    pub fn int(&self, n: i64) -> QElem {
        self.elem(n, 0)
    }

    /// The element (x + y*sqrt(d))/2, validating integrality.
    pub fn half(&self, x: BigInt, y: BigInt) -> Result<QElem> {
        QElem::new(self.d, x, y)
    }

    /// The element s + t*omega in the module basis (1, omega).
    pub fn from_omega(&self, s: BigInt, t: BigInt) -> QElem {
        if self.omega_is_half() {
            QElem {
                d: self.d,
                x: s * 2 + &t,
                y: t,
            }
        } else {
            QElem {
                d: self.d,
                x: s * 2,
                y: t * 2,
            }
        }
    }

    /// Rejects elements built for a different field.
    pub fn check_elem(&self, e: &QElem) -> Result<()> {
        if e.d == self.d {
            Ok(())
        } else {
            Err(Error::MixedFields(self.d, e.d))
        }
    }
}

/// An algebraic integer (x + y*sqrt(d))/2 of Q(sqrt(d)).
///
/// Invariants: when d = 1 mod 4, x = y mod 2; otherwise both x and y are
/// even.  The derived ordering is the canonical coordinate order used for
/// deterministic containers, not the numeric order of an embedding; use
/// [`QElem::cmp_emb1`] for that.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QElem {
    d: u64,
    x: BigInt,
    y: BigInt,
}

impl QElem {
    /// Builds (x + y*sqrt(d))/2, rejecting coordinates that do not describe
    /// an algebraic integer.
    pub fn new(d: u64, x: BigInt, y: BigInt) -> Result<QElem> {
        let ok = if d % 4 == 1 {
            (&x - &y).is_even()
        } else {
            x.is_even() && y.is_even()
        };
        if ok {
            Ok(QElem { d, x, y })
        } else {
            Err(Error::NonIntegral {
                d,
                x: x.to_string(),
                y: y.to_string(),
            })
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Doubled coordinates: self = (x + y*sqrt(d))/2.
    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.x, &self.y)
    }

    /// Coordinates (s, t) in the module basis (1, omega).
    pub fn omega_coords(&self) -> (BigInt, BigInt) {
        if self.d % 4 == 1 {
            ((&self.x - &self.y) / 2, self.y.clone())
        } else {
            (&self.x / 2, &self.y / 2)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// True for rational integers.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    /// The norm (x^2 - d y^2)/4, always a rational integer.
    pub fn norm(&self) -> BigInt {
        (&self.x * &self.x - BigInt::from(self.d) * &self.y * &self.y) / 4
    }

    /// The trace x.
    pub fn trace(&self) -> BigInt {
        self.x.clone()
    }

    /// The Galois conjugate (x - y*sqrt(d))/2.
    pub fn conj(&self) -> QElem {
        QElem {
            d: self.d,
            x: self.x.clone(),
            y: -&self.y,
        }
    }

    /// True when the element is a unit of the ring of integers.
    pub fn is_unit(&self) -> bool {
        let n = self.norm();
        n == BigInt::one() || n == BigInt::from(-1)
    }

    /// Exact sign of the embedding sending sqrt(d) to the positive root.
    pub fn sign_emb1(&self) -> i8 {
        sign_with_root(&self.x, &self.y, self.d)
    }

    /// Exact sign of the conjugate embedding.
    pub fn sign_emb2(&self) -> i8 {
        sign_with_root(&self.x, &(-&self.y), self.d)
    }

    /// Signs at both real places.
    pub fn signs(&self) -> (i8, i8) {
        (self.sign_emb1(), self.sign_emb2())
    }

    pub fn is_totally_positive(&self) -> bool {
        self.sign_emb1() > 0 && self.sign_emb2() > 0
    }

    /// Exact comparison of first embeddings.
    pub fn cmp_emb1(&self, other: &QElem) -> Ordering {
        match sign_with_root(&(&self.x - &other.x), &(&self.y - &other.y), self.d) {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    /// Exact integer product n * self.
    pub fn mul_int(&self, n: &BigInt) -> QElem {
        QElem {
            d: self.d,
            x: &self.x * n,
            y: &self.y * n,
        }
    }

    /// Exact quotient self / rhs when it lies in the ring of integers.
    pub fn div_exact(&self, rhs: &QElem) -> Option<QElem> {
        if rhs.is_zero() {
            return None;
        }
        let n = rhs.norm();
        let prod = self * &rhs.conj();
        let (qx, rx) = prod.x.div_rem(&n);
        let (qy, ry) = prod.y.div_rem(&n);
        if rx.is_zero() && ry.is_zero() {
            QElem::new(self.d, qx, qy).ok()
        } else {
            None
        }
    }

    /// Inverse of a unit.
    pub fn inv_unit(&self) -> Option<QElem> {
        let n = self.norm();
        if n == BigInt::one() {
            Some(self.conj())
        } else if n == BigInt::from(-1) {
            Some(-&self.conj())
        } else {
            None
        }
    }

    /// Binary exponentiation.
    pub fn pow(&self, mut k: u64) -> QElem {
        let mut base = self.clone();
        let mut acc = QElem {
            d: self.d,
            x: BigInt::from(2),
            y: BigInt::zero(),
        };
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

/// Exact sign of x + y*sqrt(d); never zero unless x = y = 0 (d squarefree).
fn sign_with_root(x: &BigInt, y: &BigInt, d: u64) -> i8 {
    let sx = num_sign(x);
    let sy = num_sign(y);
    match (sx, sy) {
        (0, 0) => 0,
        (s, 0) => s,
        (0, s) => s,
        (1, 1) => 1,
        (-1, -1) => -1,
        _ => {
            let lhs = x * x;
            let rhs = BigInt::from(d) * y * y;
            let cmp = if lhs > rhs { 1 } else { -1 };
            if sx > 0 {
                cmp
            } else {
                -cmp
            }
        }
    }
}

fn num_sign(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn same_field(a: &QElem, b: &QElem) {
    assert_eq!(
        a.d, b.d,
        "mixed-field element arithmetic: d = {} and d = {}",
        a.d, b.d
    );
}

impl Add for &QElem {
    type Output = QElem;
    fn add(self, rhs: &QElem) -> QElem {
        same_field(self, rhs);
        QElem {
            d: self.d,
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
        }
    }
}

impl Sub for &QElem {
    type Output = QElem;
    fn sub(self, rhs: &QElem) -> QElem {
        same_field(self, rhs);
        QElem {
            d: self.d,
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
        }
    }
}

impl Mul for &QElem {
    type Output = QElem;
    fn mul(self, rhs: &QElem) -> QElem {
        same_field(self, rhs);
        let db = BigInt::from(self.d);
        QElem {
            d: self.d,
            x: (&self.x * &rhs.x + &db * &self.y * &rhs.y) / 2,
            y: (&self.x * &rhs.y + &rhs.x * &self.y) / 2,
        }
    }
}

impl Neg for &QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        QElem {
            d: self.d,
            x: -&self.x,
            y: -&self.y,
        }
    }
}

impl Add for QElem {
    type Output = QElem;
    fn add(self, rhs: QElem) -> QElem {
        &self + &rhs
    }
}

impl Sub for QElem {
    type Output = QElem;
    fn sub(self, rhs: QElem) -> QElem {
        &self - &rhs
    }
}

impl Mul for QElem {
    type Output = QElem;
    fn mul(self, rhs: QElem) -> QElem {
        &self * &rhs
    }
}

impl Neg for QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        -&self
    }
}

impl fmt::Display for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_even() && self.y.is_even() {
            let a: BigInt = &self.x / 2;
            let b: BigInt = &self.y / 2;
            if b.is_zero() {
                return write!(f, "{}", a);
            }
            let root = if b.magnitude().is_one() {
                format!("sqrt({})", self.d)
            } else {
                format!("{}*sqrt({})", b.magnitude(), self.d)
            };
            if a.is_zero() {
                return if b.is_negative() {
                    write!(f, "-{}", root)
                } else {
                    write!(f, "{}", root)
                };
            }
            let op = if b.is_negative() { "-" } else { "+" };
            write!(f, "{} {} {}", a, op, root)
        } else {
            let root = if self.y.magnitude().is_one() {
                format!("sqrt({})", self.d)
            } else {
                format!("{}*sqrt({})", self.y.magnitude(), self.d)
            };
            let op = if self.y.is_negative() { "-" } else { "+" };
            write!(f, "({} {} {})/2", self.x, op, root)
        }
    }
}

/// Minimal (x, y) with x, y >= 1 and x^2 - d y^2 = ±1, by the continued
/// fraction expansion of sqrt(d).  Returns the attained norm as well.
fn pell_fundamental(d: u64) -> (BigInt, BigInt, i8) {
    let db = BigInt::from(d);
    let a0 = db.sqrt();
    let mut p_prev = BigInt::one();
    let mut p_cur = a0.clone();
    let mut q_prev = BigInt::zero();
    let mut q_cur = BigInt::one();
    let mut pp = BigInt::zero();
    let mut qq = BigInt::one();
    let mut ai = a0.clone();
    let mut i = 0u64;
    loop {
        i += 1;
        pp = &ai * &qq - &pp;
        qq = (&db - &pp * &pp) / &qq;
        if qq.is_one() {
            let norm = if i % 2 == 1 { -1 } else { 1 };
            return (p_cur, q_cur, norm);
        }
        ai = (&a0 + &pp) / &qq;
        let pn = &ai * &p_cur + &p_prev;
        p_prev = std::mem::replace(&mut p_cur, pn);
        let qn = &ai * &q_cur + &q_prev;
        q_prev = std::mem::replace(&mut q_cur, qn);
    }
}

/// For d = 1 mod 4 the fundamental unit of the full ring of integers is
/// either the minimal solution over Z[sqrt(d)] or its exact cube root with
/// half-integral coordinates; this finds the root when it exists.
fn cube_root_unit(d: u64, x: &BigInt, y: &BigInt, norm: i8) -> Option<QElem> {
    let target = BigInt::from(2) * x;
    let nu = BigInt::from(norm);
    let t0 = target.cbrt();
    let mut t: BigInt = &t0 - 2;
    if !t.is_positive() {
        t = BigInt::one();
    }
    let upper = &t0 + 2;
    while t <= upper {
        if &t * &t * &t - BigInt::from(3) * &nu * &t == target {
            let w2_num = &t * &t - BigInt::from(4) * &nu;
            let (w2, rem) = w2_num.div_rem(&BigInt::from(d));
            if rem.is_zero() && !w2.is_negative() {
                let w = w2.sqrt();
                if &w * &w == w2 {
                    if let Ok(cand) = QElem::new(d, t.clone(), w) {
                        let cube = cand.pow(3);
                        let u1 = QElem {
                            d,
                            x: x * 2,
                            y: y * 2,
                        };
                        if cube == u1 {
                            return Some(cand);
                        }
                    }
                }
            }
        }
        t += 1;
    }
    None
}

fn fundamental_unit(d: u64) -> (QElem, i8) {
    let (x, y, norm) = pell_fundamental(d);
    if d % 4 == 1 {
        if let Some(u) = cube_root_unit(d, &x, &y, norm) {
            return (u, norm);
        }
    }
    (
        QElem {
            d,
            x: x * 2,
            y: y * 2,
        },
        norm,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fld(d: u64) -> FieldCtx {
        make_field(d).unwrap()
    }

    /// Independent oracle: scan y = 1, 2, ... for the least solution of
    /// x^2 - d y^2 = ±4 in doubled coordinates.
    fn brute_fundamental(d: u64) -> (BigInt, BigInt, i8) {
        let db = BigInt::from(d);
        let mut y = BigInt::one();
        loop {
            let dy2 = &db * &y * &y;
            let mut best: Option<(BigInt, i8)> = None;
            for delta in [-4i64, 4] {
                let x2 = &dy2 + BigInt::from(delta);
                if x2.is_positive() {
                    let x = x2.sqrt();
                    if &x * &x == x2 {
                        let nu = (delta / 4) as i8;
                        match &best {
                            Some((bx, _)) if *bx <= x => {}
                            _ => best = Some((x, nu)),
                        }
                    }
                }
            }
            if let Some((x, nu)) = best {
                return (x, y, nu);
            }
            y += 1;
        }
    }

    #[test]
    fn fundamental_units_match_brute_force_up_to_100() {
        for d in 2u64..=100 {
            if make_field(d).is_err() {
                continue;
            }
            let f = fld(d);
            let (bx, by, bnu) = brute_fundamental(d);
            let u = f.fundamental_unit();
            assert_eq!(u.coords().0, &bx, "d = {}", d);
            assert_eq!(u.coords().1, &by, "d = {}", d);
            assert_eq!(f.fundamental_unit_norm(), bnu, "d = {}", d);
        }
    }

    #[test]
    fn fundamental_units_frozen_values() {
        let expect: [(u64, i64, i64, i8); 17] = [
            (2, 2, 2, -1),
            (3, 4, 2, 1),
            (5, 1, 1, -1),
            (6, 10, 4, 1),
            (7, 16, 6, 1),
            (10, 6, 2, -1),
            (11, 20, 6, 1),
            (13, 3, 1, -1),
            (14, 30, 8, 1),
            (15, 8, 2, 1),
            (17, 8, 2, -1),
            (19, 340, 78, 1),
            (21, 5, 1, 1),
            (22, 394, 84, 1),
            (23, 48, 10, 1),
            (30, 22, 4, 1),
            (79, 160, 18, 1),
        ];
        for (d, x, y, nu) in expect {
            let f = fld(d);
            let u = f.fundamental_unit();
            let (ex, ey) = (BigInt::from(x), BigInt::from(y));
            assert_eq!(u.coords(), (&ex, &ey), "d = {}", d);
            assert_eq!(f.fundamental_unit_norm(), nu, "d = {}", d);
            assert!(u.is_unit());
            assert_eq!(u.norm(), BigInt::from(nu));
        }
    }

    #[test]
    fn half_coordinate_units() {
        assert_eq!(fld(5).fundamental_unit().to_string(), "(1 + sqrt(5))/2");
        assert_eq!(fld(13).fundamental_unit().to_string(), "(3 + sqrt(13))/2");
        assert_eq!(fld(21).fundamental_unit().to_string(), "(5 + sqrt(21))/2");
        assert_eq!(fld(17).fundamental_unit().to_string(), "4 + sqrt(17)");
    }

    #[test]
    fn totally_positive_generator() {
        let f2 = fld(2);
        assert_eq!(f2.totally_positive_unit_generator(), f2.elem(3, 2));
        let f3 = fld(3);
        assert_eq!(f3.totally_positive_unit_generator(), f3.elem(2, 1));
        let f5 = fld(5);
        let g5 = f5.totally_positive_unit_generator();
        assert_eq!(g5, f5.half(BigInt::from(3), BigInt::one()).unwrap());
        for d in [2u64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23] {
            let f = fld(d);
            let g = f.totally_positive_unit_generator();
            assert!(g.is_totally_positive(), "d = {}", d);
            assert_eq!(g.norm(), BigInt::one(), "d = {}", d);
        }
    }

    #[test]
    fn field_validation() {
        assert!(matches!(make_field(1), Err(Error::UnsupportedField(1))));
        assert!(matches!(make_field(1001), Err(Error::UnsupportedField(_))));
        assert!(matches!(make_field(4), Err(Error::NotSquarefree(4))));
        assert!(matches!(make_field(12), Err(Error::NotSquarefree(12))));
        assert!(matches!(make_field(50), Err(Error::NotSquarefree(50))));
        assert!(make_field(2).is_ok());
        assert!(make_field(997).is_ok());
    }

    #[test]
    fn discriminant_and_two_splitting() {
        assert_eq!(fld(2).disc(), &BigInt::from(8));
        assert_eq!(fld(5).disc(), &BigInt::from(5));
        assert_eq!(fld(17).disc(), &BigInt::from(17));
        assert_eq!(fld(17).two_splitting(), TwoSplitting::Split);
        assert_eq!(fld(5).two_splitting(), TwoSplitting::Inert);
        assert_eq!(fld(13).two_splitting(), TwoSplitting::Inert);
        assert_eq!(fld(21).two_splitting(), TwoSplitting::Inert);
        assert_eq!(fld(2).two_splitting(), TwoSplitting::Ramified);
        assert_eq!(fld(3).two_splitting(), TwoSplitting::Ramified);
        assert_eq!(fld(15).two_splitting(), TwoSplitting::Ramified);
    }

    #[test]
    fn integrality_validation() {
        assert!(QElem::new(2, BigInt::one(), BigInt::one()).is_err());
        assert!(QElem::new(2, BigInt::from(2), BigInt::from(4)).is_ok());
        assert!(QElem::new(5, BigInt::one(), BigInt::one()).is_ok());
        assert!(QElem::new(5, BigInt::one(), BigInt::from(2)).is_err());
    }

    #[test]
    fn exact_signs() {
        let f = fld(2);
        let e = f.elem(1, -1);
        assert_eq!(e.signs(), (-1, 1));
        let e = f.elem(3, -2);
        assert_eq!(e.signs(), (1, 1));
        assert!(e.is_totally_positive());
        let e = f.elem(-1, 1);
        assert_eq!(e.signs(), (1, -1));
        let e = f.elem(0, 1);
        assert_eq!(e.signs(), (1, -1));
        assert_eq!(f.int(-3).signs(), (-1, -1));
        assert_eq!(f.int(0).signs(), (0, 0));
        let f5 = fld(5);
        let phi = f5.fundamental_unit().clone();
        assert_eq!(phi.signs(), (1, -1));
        assert!(!phi.is_totally_positive());
        assert!(phi.pow(2).is_totally_positive());
    }

    #[test]
    fn embedding_comparison() {
        let f = fld(3);
        let a = f.elem(2, 1);
        let b = f.elem(4, 0);
        assert_eq!(a.cmp_emb1(&b), Ordering::Less);
        assert_eq!(b.cmp_emb1(&a), Ordering::Greater);
        assert_eq!(a.cmp_emb1(&a), Ordering::Equal);
        let c = f.elem(0, 2);
        assert_eq!(c.cmp_emb1(&f.elem(3, 0)), Ordering::Greater);
        assert_eq!(c.cmp_emb1(&f.elem(4, 0)), Ordering::Less);
    }

    #[test]
    fn arithmetic_identities() {
        let f = fld(7);
        let a = f.elem(3, -2);
        let b = f.elem(-5, 4);
        let s = &a + &b;
        assert_eq!(s, f.elem(-2, 2));
        let p = &a * &b;
        assert_eq!(p.norm(), a.norm() * b.norm());
        let tr = &p + &p.conj();
        assert_eq!(tr, f.elem_big(p.trace(), BigInt::zero()));
        let nm = &p * &p.conj();
        assert_eq!(nm, f.elem_big(p.norm(), BigInt::zero()));
    }

    #[test]
    fn division_and_inverse() {
        let f = fld(6);
        let u = f.fundamental_unit();
        let inv = u.inv_unit().unwrap();
        assert_eq!(u * &inv, f.int(1));
        let a = f.elem(7, 3);
        let b = f.elem(1, 1);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(f.elem(1, 0).div_exact(&f.elem(0, 1)).is_none());
        assert!(a.div_exact(&f.int(0)).is_none());
    }

    #[test]
    fn display_forms() {
        let f = fld(2);
        assert_eq!(f.elem(1, 1).to_string(), "1 + sqrt(2)");
        assert_eq!(f.elem(-1, -2).to_string(), "-1 - 2*sqrt(2)");
        assert_eq!(f.elem(0, 3).to_string(), "3*sqrt(2)");
        assert_eq!(f.elem(0, -1).to_string(), "-sqrt(2)");
        assert_eq!(f.int(5).to_string(), "5");
        let f21 = fld(21);
        let e = f21.half(BigInt::from(3), BigInt::from(3)).unwrap();
        assert_eq!(e.to_string(), "(3 + 3*sqrt(21))/2");
        let e = f21.half(BigInt::from(7), BigInt::from(-1)).unwrap();
        assert_eq!(e.to_string(), "(7 - sqrt(21))/2");
    }

    #[test]
    fn omega_coordinates_round_trip() {
        for d in [2u64, 5, 13, 15, 21] {
            let f = fld(d);
            let w = f.omega();
            let (c0, c1) = f.omega_min_poly();
            let lhs = &w * &w;
            let rhs = &w.mul_int(&-c1) + &f.elem_big(-c0, BigInt::zero());
            assert_eq!(lhs, rhs, "omega minimal polynomial for d = {}", d);
            let e = f.from_omega(BigInt::from(-4), BigInt::from(7));
            let (s, t) = e.omega_coords();
            assert_eq!((s, t), (BigInt::from(-4), BigInt::from(7)));
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;
        use proptest::test_runner::RngSeed;

        fn arb_elem(d: u64) -> impl Strategy<Value = QElem> {
            (-50i64..=50, -50i64..=50).prop_map(move |(s, t)| {
                make_field(d)
                    .unwrap()
                    .from_omega(BigInt::from(s), BigInt::from(t))
            })
        }

        fn arb_d() -> impl Strategy<Value = u64> {
            prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23])
        }

        proptest! {
            #![proptest_config(ProptestConfig {
                rng_seed: RngSeed::Fixed(0x71ad_f1e1d),
                ..ProptestConfig::default()
            })]
            #[test]
            fn norm_is_multiplicative(d in arb_d(), st in (-40i64..=40, -40i64..=40, -40i64..=40, -40i64..=40)) {
                let f = make_field(d).unwrap();
                let a = f.from_omega(BigInt::from(st.0), BigInt::from(st.1));
                let b = f.from_omega(BigInt::from(st.2), BigInt::from(st.3));
                prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
            }

            #[test]
            fn ring_ops_preserve_integrality(d in arb_d(), st in (-40i64..=40, -40i64..=40, -40i64..=40, -40i64..=40)) {
                let f = make_field(d).unwrap();
                let a = f.from_omega(BigInt::from(st.0), BigInt::from(st.1));
                let b = f.from_omega(BigInt::from(st.2), BigInt::from(st.3));
                for e in [&a + &b, &a - &b, &a * &b, -&a] {
                    let (x, y) = e.coords();
                    prop_assert!(QElem::new(d, x.clone(), y.clone()).is_ok());
                }
            }

            #[test]
            fn sign_matches_float_oracle(e in arb_elem(13)) {
                let (x, y) = e.coords();
                let approx = x.to_string().parse::<f64>().unwrap()
                    + y.to_string().parse::<f64>().unwrap() * 13f64.sqrt();
                if approx.abs() > 1e-6 {
                    let expected = if approx > 0.0 { 1 } else { -1 };
                    prop_assert_eq!(e.sign_emb1(), expected);
                }
            }

            #[test]
            fn conj_is_involution_and_norm_trace(e in arb_elem(17)) {
                prop_assert_eq!(e.conj().conj(), e.clone());
                let f = make_field(17).unwrap();
                prop_assert_eq!(&e + &e.conj(), f.elem_big(e.trace(), BigInt::zero()));
                prop_assert_eq!(&e * &e.conj(), f.elem_big(e.norm(), BigInt::zero()));
            }
        }
    }
}
