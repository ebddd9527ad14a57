//! Ideals of the ring of integers of Q(sqrt(d)) in Hermite normal form,
//! prime ideal factorization, residue rings, and principality tests.
//!
//! A nonzero ideal is stored as the module aZ + (b + c*omega)Z with a, c > 0,
//! c | a, c | b and 0 <= b < a; this normal form is unique, so structural
//! equality is ideal equality.  The principality test searches for a
//! generator among balanced associates using exact integer bounds derived
//! from the fundamental unit; it is complete, never heuristic.

use crate::abelian::{row_hnf, GroupPresentation};
use crate::quadfield::{FieldCtx, QElem};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// A nonzero integral ideal in Hermite normal form aZ + (b + c*omega)Z.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal {
    d: u64,
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

/// A prime ideal together with its residue characteristic, ramification
/// index and residue degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    ideal: Ideal,
}

fn omega_elem(d: u64, s: &BigInt, t: &BigInt) -> QElem {
    if d % 4 == 1 {
        QElem::new(d, s * 2 + t, t.clone()).unwrap()
    } else {
        QElem::new(d, s * 2, t * 2).unwrap()
    }
}

fn rational_elem(d: u64, n: &BigInt) -> QElem {
    QElem::new(d, n * 2, BigInt::zero()).unwrap()
}

impl Ideal {
    /// The ideal generated by the given elements.  Errors when all
    /// generators are zero or they live in different fields.
    pub fn from_elems(gens: &[QElem]) -> Result<Ideal> {
        let mut d = None;
        for g in gens {
            match d {
                None => {
                    if !g.is_zero() {
                        d = Some(g.d());
                    }
                }
                Some(dd) => {
                    if g.d() != dd {
                        return Err(Error::MixedFields(dd, g.d()));
                    }
                }
            }
        }
        let Some(d) = d else {
            return Err(Error::Zero("ideal"));
        };
        let omega = omega_elem(d, &BigInt::zero(), &BigInt::one());
        let mut rows = Vec::new();
        for g in gens {
            if g.d() != d {
                return Err(Error::MixedFields(d, g.d()));
            }
            if g.is_zero() {
                continue;
            }
            for e in [g.clone(), g * &omega] {
                let (s, t) = e.omega_coords();
                rows.push(vec![t, s]);
            }
        }
        let hnf = row_hnf(rows);
        if hnf.len() != 2 {
            return Err(Error::Invalid(
                "ideal generators do not span a rank-2 module".into(),
            ));
        }
        let c = hnf[0][0].clone();
        let b = hnf[0][1].clone();
        let a = hnf[1][1].clone();
        debug_assert!(a.is_positive() && c.is_positive());
        debug_assert!((&a % &c).is_zero() && (&b % &c).is_zero());
        Ok(Ideal { d, a, b, c })
    }

    /// The principal ideal (g).
    pub fn principal(g: &QElem) -> Result<Ideal> {
        Ideal::from_elems(std::slice::from_ref(g))
    }

    /// The ideal (n) for a nonzero rational integer n.
    pub fn rational(d: u64, n: &BigInt) -> Result<Ideal> {
        Ideal::principal(&rational_elem(d, n))
    }

    /// The unit ideal (1).
    pub fn one(d: u64) -> Ideal {
        Ideal {
            d,
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::one(),
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// The HNF parameters (a, b, c).
    pub fn hnf(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    /// The two module generators a and b + c*omega as field elements.
    pub fn gens(&self) -> (QElem, QElem) {
        (
            rational_elem(self.d, &self.a),
            omega_elem(self.d, &self.b, &self.c),
        )
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.c
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.c.is_one()
    }

    /// Module membership test.
    pub fn contains(&self, e: &QElem) -> bool {
        if e.d() != self.d {
            return false;
        }
        let (s, t) = e.omega_coords();
        if !(&t % &self.c).is_zero() {
            return false;
        }
        let y: BigInt = &t / &self.c;
        ((&s - &self.b * &y) % &self.a).is_zero()
    }

    /// Ideal containment: other is a subset of self (self divides other).
    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        let (g1, g2) = other.gens();
        self.contains(&g1) && self.contains(&g2)
    }

    pub fn mul(&self, other: &Ideal) -> Result<Ideal> {
        if self.d != other.d {
            return Err(Error::MixedFields(self.d, other.d));
        }
        let (a1, a2) = self.gens();
        let (b1, b2) = other.gens();
        Ideal::from_elems(&[&a1 * &b1, &a1 * &b2, &a2 * &b1, &a2 * &b2])
    }

    /// Ideal sum, i.e. the greatest common divisor.
    pub fn add(&self, other: &Ideal) -> Result<Ideal> {
        if self.d != other.d {
            return Err(Error::MixedFields(self.d, other.d));
        }
        let (a1, a2) = self.gens();
        let (b1, b2) = other.gens();
        Ideal::from_elems(&[a1, a2, b1, b2])
    }

    pub fn is_coprime(&self, other: &Ideal) -> Result<bool> {
        Ok(self.add(other)?.is_one())
    }

    /// Product with a principal ideal.
    pub fn mul_elem(&self, g: &QElem) -> Result<Ideal> {
        let (a1, a2) = self.gens();
        Ideal::from_elems(&[&a1 * g, &a2 * g])
    }

    pub fn conj(&self) -> Ideal {
        let (g1, g2) = self.gens();
        Ideal::from_elems(&[g1.conj(), g2.conj()]).unwrap()
    }

    pub fn pow(&self, mut k: u32) -> Result<Ideal> {
        let mut base = self.clone();
        let mut acc = Ideal::one(self.d);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Exact quotient self / other; errors when other does not divide self.
    pub fn divide_exact(&self, other: &Ideal) -> Result<Ideal> {
        let prod = self.mul(&other.conj())?;
        let n = other.norm();
        let (qa, ra) = prod.a.div_rem(&n);
        let (qb, rb) = prod.b.div_rem(&n);
        let (qc, rc) = prod.c.div_rem(&n);
        if ra.is_zero() && rb.is_zero() && rc.is_zero() {
            Ok(Ideal {
                d: self.d,
                a: qa,
                b: qb,
                c: qc,
            })
        } else {
            Err(Error::Invalid(format!(
                "ideal of norm {} does not divide ideal of norm {}",
                other.norm(),
                self.norm()
            )))
        }
    }

    /// Valuation of the ideal at a prime.
    pub fn val(&self, prime: &PrimeIdeal) -> u32 {
        let mut v = 0u32;
        let mut cur = self.clone();
        while prime.ideal.contains_ideal(&cur) {
            cur = cur.divide_exact(&prime.ideal).unwrap();
            v += 1;
        }
        v
    }

    /// Full prime ideal factorization; factors are sorted canonically and
    /// the exponents are positive.
    pub fn factor(&self) -> Result<Vec<(PrimeIdeal, u32)>> {
        let mut out = Vec::new();
        let rational = factor_bigint(&self.norm())?;
        for (p, _) in rational {
            for prime in factor_rational_prime(self.d, p)? {
                let v = self.val(&prime);
                if v > 0 {
                    out.push((prime, v));
                }
            }
        }
        out.sort();
        let mut check = BigInt::one();
        for (prime, v) in &out {
            for _ in 0..*v {
                check *= prime.norm();
            }
        }
        if check != self.norm() {
            return Err(Error::Invalid(format!(
                "factorization norms multiply to {} instead of {}",
                check,
                self.norm()
            )));
        }
        Ok(out)
    }

    /// Complete principality test: returns a generator when one exists.
    /// The search range is the exact window containing a balanced associate,
    /// so a `None` is a proof of non-principality.
    pub fn is_principal(&self, fld: &FieldCtx) -> Result<Option<QElem>> {
        if fld.d() != self.d {
            return Err(Error::MixedFields(fld.d(), self.d));
        }
        let n = self.norm();
        let d = BigInt::from(self.d);
        let (ux, uy) = fld.fundamental_unit().coords();
        let sqrt_d_ceil: BigInt = d.sqrt() + 1;
        let u_upper: BigInt = (ux + uy * &sqrt_d_ceil + 1) / 2 + 1;
        let y_bound: BigInt = ((BigInt::from(4) * &n * &u_upper) / &d).sqrt() + 2;
        if y_bound > BigInt::from(100_000_000u64) {
            return Err(Error::Capacity {
                op: "Ideal::is_principal",
                detail: format!("generator search bound {} is too large", y_bound),
            });
        }
        let four_n: BigInt = BigInt::from(4) * &n;
        let mut y = BigInt::zero();
        while y <= y_bound {
            let dy2: BigInt = &d * &y * &y;
            for sign in [1i8, -1] {
                let x2: BigInt = if sign == 1 {
                    &dy2 + &four_n
                } else {
                    &dy2 - &four_n
                };
                if x2.is_negative() {
                    continue;
                }
                let x = x2.sqrt();
                if &x * &x != x2 {
                    continue;
                }
                for cand_x in [x.clone(), -&x] {
                    if let Ok(e) = QElem::new(self.d, cand_x, y.clone()) {
                        if !e.is_zero() && e.norm().abs() == n && self.contains(&e) {
                            return Ok(Some(e));
                        }
                    }
                    if x.is_zero() {
                        break;
                    }
                }
            }
            y += 1;
        }
        Ok(None)
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (_, second) = self.gens();
        write!(f, "<{}, {}>", self.a, second)
    }
}

impl PrimeIdeal {
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn norm(&self) -> BigInt {
        BigInt::from(self.p).pow(self.f)
    }

    pub fn d(&self) -> u64 {
        self.ideal.d
    }

    /// An element of valuation exactly one.
    pub fn uniformizer(&self) -> QElem {
        let (g1, g2) = self.ideal.gens();
        let p2 = self.ideal.mul(&self.ideal).unwrap();
        if !p2.contains(&g2) {
            g2
        } else {
            debug_assert!(!p2.contains(&g1));
            g1
        }
    }
}

/// Valuation of a nonzero element at a prime ideal.
pub fn element_val(e: &QElem, prime: &PrimeIdeal) -> u32 {
    assert!(!e.is_zero(), "valuation of zero requested");
    Ideal::principal(e).unwrap().val(prime)
}

/// The prime ideals above a rational prime, sorted canonically.  Split
/// primes come back in the order of their HNF b parameters.
pub fn factor_rational_prime(d: u64, p: u64) -> Result<Vec<PrimeIdeal>> {
    if p < 2 {
        return Err(Error::Invalid(format!("{} is not a prime", p)));
    }
    let pb = BigInt::from(p);
    let make = |b: BigInt, e: u32, f: u32| -> PrimeIdeal {
        let gen = omega_elem(d, &-b, &BigInt::one());
        let ideal = Ideal::from_elems(&[rational_elem(d, &pb), gen]).unwrap();
        PrimeIdeal { p, e, f, ideal }
    };
    if p == 2 {
        return Ok(match d % 8 {
            1 => vec![
                make(BigInt::zero(), 1, 1),
                make(BigInt::one(), 1, 1),
            ],
            5 => vec![PrimeIdeal {
                p,
                e: 1,
                f: 2,
                ideal: Ideal::rational(d, &pb)?,
            }],
            _ => {
                let b = if d % 4 == 2 {
                    BigInt::zero()
                } else {
                    BigInt::one()
                };
                vec![PrimeIdeal {
                    p,
                    e: 2,
                    f: 1,
                    ideal: Ideal::from_elems(&[
                        rational_elem(d, &pb),
                        omega_elem(d, &b, &BigInt::one()),
                    ])
                    .unwrap(),
                }]
            }
        });
    }
    if p > 2_000_000 {
        return Err(Error::Capacity {
            op: "factor_rational_prime",
            detail: format!("residue characteristic {} beyond root search cap", p),
        });
    }
    // roots of the minimal polynomial of omega modulo p
    let (c0, c1) = if d % 4 == 1 {
        (-BigInt::from((d - 1) / 4), -BigInt::one())
    } else {
        (-BigInt::from(d), BigInt::zero())
    };
    let c0m = c0.mod_floor(&pb);
    let c1m = c1.mod_floor(&pb);
    let mut roots = Vec::new();
    let mut x = BigInt::zero();
    while x < pb {
        if ((&x * &x + &c1m * &x + &c0m) % &pb).is_zero() {
            roots.push(x.clone());
        }
        x += 1;
    }
    roots.sort();
    Ok(match roots.len() {
        0 => vec![PrimeIdeal {
            p,
            e: 1,
            f: 2,
            ideal: Ideal::rational(d, &pb)?,
        }],
        1 => vec![make(roots[0].clone(), 2, 1)],
        _ => {
            let mut primes: Vec<PrimeIdeal> =
                roots.into_iter().map(|r| make(r, 1, 1)).collect();
            primes.sort();
            primes
        }
    })
}

/// All primes up to and including the limit.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut p = 2usize;
    while p * p <= n {
        if sieve[p] {
            let mut q = p * p;
            while q <= n {
                sieve[q] = false;
                q += p;
            }
        }
        p += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| i as u64)
        .collect()
}

/// Factors |n| by trial division; errors when a cofactor above the cap
/// survives, so results are never silently incomplete.
pub fn factor_bigint(n: &BigInt) -> Result<BTreeMap<u64, u32>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::Zero("integer to factor"));
    }
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        while (&n % p).is_zero() {
            *out.entry(p).or_insert(0u32) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
        if p > 20_000_000 {
            return Err(Error::Capacity {
                op: "factor_bigint",
                detail: format!("cofactor {} resists trial division", n),
            });
        }
    }
    if n > BigInt::one() {
        let leftover = u64::try_from(&n).map_err(|_| Error::Capacity {
            op: "factor_bigint",
            detail: format!("prime cofactor {} exceeds u64", n),
        })?;
        *out.entry(leftover).or_insert(0) += 1;
    }
    Ok(out)
}

/// The quotient ring O/m for an integral ideal m, with canonical residue
/// representatives (s, t), 0 <= s < a, 0 <= t < c, in the basis (1, omega).
#[derive(Debug, Clone)]
pub struct ResidueRing {
    modulus: Ideal,
}

pub type Residue = (BigInt, BigInt);

impl ResidueRing {
    pub fn new(modulus: Ideal) -> Result<ResidueRing> {
        if modulus.norm() > BigInt::from(1_000_000u64) {
            return Err(Error::Capacity {
                op: "ResidueRing::new",
                detail: format!("modulus norm {} too large", modulus.norm()),
            });
        }
        Ok(ResidueRing { modulus })
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn size(&self) -> BigInt {
        self.modulus.norm()
    }

    pub fn reduce(&self, e: &QElem) -> Residue {
        let (s, t) = e.omega_coords();
        let (a, b, c) = self.modulus.hnf();
        let tr = t.mod_floor(c);
        let k: BigInt = (&t - &tr) / c;
        let s2: BigInt = &s - &k * b;
        (s2.mod_floor(a), tr)
    }

    pub fn to_elem(&self, r: &Residue) -> QElem {
        omega_elem(self.modulus.d, &r.0, &r.1)
    }

    pub fn zero(&self) -> Residue {
        (BigInt::zero(), BigInt::zero())
    }

    pub fn one(&self) -> Residue {
        self.reduce(&rational_elem(self.modulus.d, &BigInt::one()))
    }

    pub fn add(&self, r1: &Residue, r2: &Residue) -> Residue {
        self.reduce(&(&self.to_elem(r1) + &self.to_elem(r2)))
    }

    pub fn neg(&self, r: &Residue) -> Residue {
        self.reduce(&-&self.to_elem(r))
    }

    pub fn mul(&self, r1: &Residue, r2: &Residue) -> Residue {
        self.reduce(&(&self.to_elem(r1) * &self.to_elem(r2)))
    }

    pub fn pow(&self, r: &Residue, mut k: BigInt) -> Residue {
        assert!(!k.is_negative());
        let mut base = r.clone();
        let mut acc = self.one();
        while k.is_positive() {
            if k.is_odd() {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k.is_positive() {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_unit(&self, r: &Residue) -> bool {
        let e = self.to_elem(r);
        if e.is_zero() {
            return self.modulus.is_one();
        }
        Ideal::principal(&e)
            .unwrap()
            .add(&self.modulus)
            .unwrap()
            .is_one()
    }

    pub fn all_elements(&self) -> Vec<Residue> {
        let (a, _, c) = self.modulus.hnf();
        let mut out = Vec::new();
        let mut t = BigInt::zero();
        while &t < c {
            let mut s = BigInt::zero();
            while &s < a {
                out.push((s.clone(), t.clone()));
                s += 1;
            }
            t += 1;
        }
        out
    }

    pub fn units(&self) -> Vec<Residue> {
        self.all_elements()
            .into_iter()
            .filter(|r| self.is_unit(r))
            .collect()
    }

    /// The unit group (O/m)^* as an abstract abelian group with a discrete
    /// logarithm table over canonical residues.
    pub fn unit_group(&self, cap: u64) -> Result<GroupPresentation<Residue>> {
        let units = self.units();
        crate::abelian::group_from_generators(
            self.one(),
            units,
            |x, y| self.mul(x, y),
            cap,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::make_field;

    fn fld(d: u64) -> FieldCtx {
        make_field(d).unwrap()
    }

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// Independent splitting oracle via the Kronecker symbol of the
    /// discriminant: 1 split, -1 inert, 0 ramified.
    fn kronecker_disc(disc: &BigInt, p: u64) -> i8 {
        let pb = BigInt::from(p);
        if p == 2 {
            let m = disc.mod_floor(&bi(8));
            if m.is_zero() || m == bi(4) {
                return 0;
            }
            return if m == bi(1) || m == bi(7) { 1 } else { -1 };
        }
        let r = disc.mod_floor(&pb);
        if r.is_zero() {
            return 0;
        }
        let mut result = 1i8;
        let mut x = BigInt::one();
        let mut found = false;
        while x < pb {
            if (&x * &x).mod_floor(&pb) == r {
                found = true;
                break;
            }
            x += 1;
        }
        if !found {
            result = -1;
        }
        result
    }

    #[test]
    fn prime_splitting_matches_kronecker_oracle() {
        for d in [2u64, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 30, 79] {
            let f = fld(d);
            for p in small_primes(60) {
                let primes = factor_rational_prime(d, p).unwrap();
                let symbol = kronecker_disc(f.disc(), p);
                match symbol {
                    1 => {
                        assert_eq!(primes.len(), 2, "d = {}, p = {}", d, p);
                        assert!(primes.iter().all(|q| q.e == 1 && q.f == 1));
                        assert_ne!(primes[0], primes[1]);
                    }
                    -1 => {
                        assert_eq!(primes.len(), 1, "d = {}, p = {}", d, p);
                        assert_eq!((primes[0].e, primes[0].f), (1, 2));
                    }
                    _ => {
                        assert_eq!(primes.len(), 1, "d = {}, p = {}", d, p);
                        assert_eq!((primes[0].e, primes[0].f), (2, 1));
                    }
                }
                let mut prod = Ideal::one(d);
                for q in &primes {
                    for _ in 0..q.e {
                        prod = prod.mul(q.ideal()).unwrap();
                    }
                }
                assert_eq!(prod, Ideal::rational(d, &bi(p as i64)).unwrap());
            }
        }
    }

    #[test]
    fn hnf_frozen_examples() {
        let f = fld(10);
        let i = Ideal::principal(&f.elem(0, 1)).unwrap();
        assert_eq!(i.hnf(), (&bi(10), &bi(0), &bi(1)));
        assert_eq!(i.norm(), bi(10));

        let f = fld(15);
        let i = Ideal::from_elems(&[f.int(2), f.elem(1, 1)]).unwrap();
        assert_eq!(i.hnf(), (&bi(2), &bi(1), &bi(1)));
        assert_eq!(i.norm(), bi(2));
        let i = Ideal::from_elems(&[f.int(3), f.elem(0, 1)]).unwrap();
        assert_eq!(i.hnf(), (&bi(3), &bi(0), &bi(1)));
        assert_eq!(i.norm(), bi(3));

        let _ = fld(5);
        let i = Ideal::rational(5, &bi(2)).unwrap();
        assert_eq!(i.norm(), bi(4));
        assert_eq!(i.hnf(), (&bi(2), &bi(0), &bi(2)));
    }

    #[test]
    fn norm_is_multiplicative_on_ideals() {
        let f = fld(14);
        let i = Ideal::from_elems(&[f.int(6), f.elem(2, 2)]).unwrap();
        let j = Ideal::principal(&f.elem(3, 1)).unwrap();
        let prod = i.mul(&j).unwrap();
        assert_eq!(prod.norm(), i.norm() * j.norm());
    }

    #[test]
    fn principal_ideal_norm_matches_element_norm() {
        let f = fld(7);
        for (a, b) in [(3i64, 1i64), (-5, 2), (4, -3), (11, 0), (0, 2)] {
            let e = f.elem(a, b);
            let i = Ideal::principal(&e).unwrap();
            assert_eq!(i.norm(), e.norm().abs());
            assert!(i.contains(&e));
            assert!(i.contains(&(&e * &f.elem(2, 1))));
        }
    }

    #[test]
    fn ideal_times_conjugate_is_norm() {
        let f = fld(13);
        let i = Ideal::from_elems(&[f.int(3), &f.omega() - &f.int(1)]).unwrap();
        let n = i.mul(&i.conj()).unwrap();
        assert_eq!(n, Ideal::rational(13, &i.norm()).unwrap());
    }

    #[test]
    fn divide_exact_and_val() {
        let _ = fld(6);
        let p2 = &factor_rational_prime(6, 2).unwrap()[0];
        let p3 = &factor_rational_prime(6, 3).unwrap()[0];
        let i = p2
            .ideal()
            .pow(3)
            .unwrap()
            .mul(p3.ideal())
            .unwrap();
        assert_eq!(i.val(p2), 3);
        assert_eq!(i.val(p3), 1);
        assert_eq!(factor_rational_prime(6, 7).unwrap().len(), 1);
        let q = i.divide_exact(p2.ideal()).unwrap();
        assert_eq!(q.val(p2), 2);
        assert!(i.divide_exact(&Ideal::rational(6, &bi(5)).unwrap()).is_err());
    }

    #[test]
    fn factorization_round_trip() {
        let f = fld(10);
        for (a, b) in [(4i64, 1i64), (6, 0), (9, 2), (-7, 3), (15, 1)] {
            let e = f.elem(a, b);
            let i = Ideal::principal(&e).unwrap();
            let factors = i.factor().unwrap();
            let mut prod = Ideal::one(10);
            for (p, v) in &factors {
                prod = prod.mul(&p.ideal().pow(*v).unwrap()).unwrap();
            }
            assert_eq!(prod, i, "refactoring ({} + {}*sqrt(10))", a, b);
        }
    }

    #[test]
    fn factor_of_six_in_q_sqrt_10() {
        let factors = Ideal::rational(10, &bi(6)).unwrap().factor().unwrap();
        let shape: Vec<(u64, u32, u32, u32)> = factors
            .iter()
            .map(|(p, v)| (p.p, p.e, p.f, *v))
            .collect();
        assert_eq!(shape, vec![(2, 2, 1, 2), (3, 1, 1, 1), (3, 1, 1, 1)]);
    }

    #[test]
    fn element_valuations() {
        let f = fld(2);
        let p2 = &factor_rational_prime(2, 2).unwrap()[0];
        let sqrt2 = f.elem(0, 1);
        assert_eq!(element_val(&sqrt2, p2), 1);
        assert_eq!(element_val(&f.int(2), p2), 2);
        assert_eq!(element_val(&f.int(4), p2), 4);
        assert_eq!(element_val(&f.int(3), p2), 0);
        assert_eq!(element_val(&f.elem(1, 1), p2), 0);
    }

    #[test]
    fn uniformizers_have_valuation_one() {
        for d in [2u64, 5, 10, 15, 17, 21] {
            for p in [2u64, 3, 5, 7, 11, 13] {
                for prime in factor_rational_prime(d, p).unwrap() {
                    let pi = prime.uniformizer();
                    assert_eq!(element_val(&pi, &prime), 1, "d = {}, p = {}", d, p);
                }
            }
        }
    }

    #[test]
    fn principality_recovers_generators() {
        for d in [2u64, 5, 10, 15, 19, 23] {
            let f = fld(d);
            for (a, b) in [(3i64, 1i64), (5, -2), (7, 0), (2, 3)] {
                let e = f.elem(a, b);
                if e.is_zero() {
                    continue;
                }
                let i = Ideal::principal(&e).unwrap();
                let g = i.is_principal(&f).unwrap().expect("principal by construction");
                assert_eq!(Ideal::principal(&g).unwrap(), i, "d = {}", d);
            }
        }
    }

    #[test]
    fn known_non_principal_ideals() {
        let f10 = fld(10);
        let p2 = &factor_rational_prime(10, 2).unwrap()[0];
        assert!(p2.ideal().is_principal(&f10).unwrap().is_none());
        assert!(p2
            .ideal()
            .pow(2)
            .unwrap()
            .is_principal(&f10)
            .unwrap()
            .is_some());

        let f15 = fld(15);
        let p3 = &factor_rational_prime(15, 3).unwrap()[0];
        assert!(p3.ideal().is_principal(&f15).unwrap().is_none());

        let f5 = fld(5);
        let p2 = &factor_rational_prime(5, 2).unwrap()[0];
        assert!(p2.ideal().is_principal(&f5).unwrap().is_some());
    }

    #[test]
    fn gcd_of_elements() {
        let f = fld(3);
        let a = f.elem(4, 2);
        let b = f.elem(6, 0);
        let g = Ideal::from_elems(&[a.clone(), b.clone()]).unwrap();
        assert!(g.contains(&a));
        assert!(g.contains(&b));
        let i = Ideal::principal(&a).unwrap();
        let j = Ideal::principal(&b).unwrap();
        assert_eq!(i.add(&j).unwrap(), g);
        assert!(g.contains_ideal(&i));
        assert!(g.contains_ideal(&j));
    }

    #[test]
    fn zero_and_mixed_field_rejection() {
        let f = fld(2);
        assert!(matches!(
            Ideal::from_elems(&[f.int(0)]),
            Err(Error::Zero(_))
        ));
        assert!(Ideal::from_elems(&[]).is_err());
        let g = fld(3);
        assert!(matches!(
            Ideal::from_elems(&[f.int(2), g.int(3)]),
            Err(Error::MixedFields(_, _))
        ));
    }

    #[test]
    fn residue_ring_sizes_and_units() {
        for d in [2u64, 5, 13, 15] {
            for p in [2u64, 3, 5] {
                for prime in factor_rational_prime(d, p).unwrap() {
                    let ring = ResidueRing::new(prime.ideal().clone()).unwrap();
                    let q = prime.norm();
                    assert_eq!(BigInt::from(ring.all_elements().len()), q);
                    assert_eq!(BigInt::from(ring.units().len()), &q - 1);
                    let k = prime.ideal().pow(2).unwrap();
                    let ring2 = ResidueRing::new(k).unwrap();
                    assert_eq!(
                        BigInt::from(ring2.units().len()),
                        &q * (&q - 1),
                        "d = {}, p = {}",
                        d,
                        p
                    );
                }
            }
        }
    }

    #[test]
    fn residue_field_is_a_field() {
        let prime = &factor_rational_prime(5, 2).unwrap()[0];
        let ring = ResidueRing::new(prime.ideal().clone()).unwrap();
        assert_eq!(ring.size(), bi(4));
        for u in ring.units() {
            let inv = ring.pow(&u, bi(2));
            let _ = inv;
            let cube = ring.pow(&u, bi(3));
            assert_eq!(cube, ring.one(), "x^(q-1) = 1 in F_4");
        }
    }

    #[test]
    fn residue_unit_group_structures() {
        let prime7 = &factor_rational_prime(3, 7).unwrap()[0];
        assert_eq!((prime7.e, prime7.f), (1, 2));
        let ring = ResidueRing::new(prime7.ideal().clone()).unwrap();
        let g = ring.unit_group(10_000).unwrap();
        assert_eq!(g.group.invariants(), &[bi(48)]);

        let prime2 = &factor_rational_prime(2, 2).unwrap()[0];
        let ring = ResidueRing::new(prime2.ideal().pow(5).unwrap()).unwrap();
        let g = ring.unit_group(10_000).unwrap();
        assert_eq!(g.group.order(), bi(16));
    }

    #[test]
    fn small_primes_and_factor_bigint() {
        assert_eq!(small_primes(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(small_primes(1), Vec::<u64>::new());
        let f = factor_bigint(&bi(-155232)).unwrap();
        let expect: BTreeMap<u64, u32> = [(2, 5), (3, 2), (7, 2), (11, 1)].into();
        assert_eq!(f, expect);
        assert!(factor_bigint(&BigInt::zero()).is_err());
        assert_eq!(factor_bigint(&bi(1)).unwrap(), BTreeMap::new());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;
        use proptest::test_runner::RngSeed;

        fn arb_nonzero_elem(d: u64) -> impl Strategy<Value = QElem> {
            (-12i64..=12, -12i64..=12)
                .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
                .prop_map(move |(a, b)| {
                    make_field(d)
                        .unwrap()
                        .from_omega(BigInt::from(a), BigInt::from(b))
                })
        }

        fn arb_d() -> impl Strategy<Value = u64> {
            prop::sample::select(vec![2u64, 5, 10, 13, 15, 21, 23])
        }

        proptest! {
            #![proptest_config(ProptestConfig {
                rng_seed: RngSeed::Fixed(0x1dea_5e7),
                cases: 64,
                ..ProptestConfig::default()
            })]

            #[test]
            fn product_norms_multiply(d in arb_d(), seed in (-9i64..=9, -9i64..=9, -9i64..=9, -9i64..=9)) {
                let f = make_field(d).unwrap();
                let e1 = f.from_omega(BigInt::from(seed.0), BigInt::from(seed.1));
                let e2 = f.from_omega(BigInt::from(seed.2), BigInt::from(seed.3));
                prop_assume!(!e1.is_zero() && !e2.is_zero());
                let i = Ideal::from_elems(&[e1.clone(), f.int(6)]).unwrap();
                let j = Ideal::from_elems(&[e2.clone(), f.int(10)]).unwrap();
                prop_assert_eq!(i.mul(&j).unwrap().norm(), i.norm() * j.norm());
            }

            #[test]
            fn sum_contains_both(d in arb_d(), e1 in arb_nonzero_elem(5), e2 in arb_nonzero_elem(5)) {
                let _ = d;
                let i = Ideal::principal(&e1).unwrap();
                let j = Ideal::principal(&e2).unwrap();
                let s = i.add(&j).unwrap();
                prop_assert!(s.contains_ideal(&i));
                prop_assert!(s.contains_ideal(&j));
            }

            #[test]
            fn membership_is_stable_under_ring_multiples(e in arb_nonzero_elem(13), m in arb_nonzero_elem(13)) {
                let i = Ideal::principal(&e).unwrap();
                prop_assert!(i.contains(&(&e * &m)));
            }

            #[test]
            fn principality_of_products(e1 in arb_nonzero_elem(10), e2 in arb_nonzero_elem(10)) {
                let f = make_field(10).unwrap();
                let i = Ideal::principal(&(&e1 * &e2)).unwrap();
                let g = i.is_principal(&f).unwrap().unwrap();
                prop_assert_eq!(Ideal::principal(&g).unwrap(), i);
            }
        }
    }
}
