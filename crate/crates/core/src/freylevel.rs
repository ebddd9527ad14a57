//! Reduction types and level prediction for Frey-style curves.
//!
//! For nonzero algebraic integers u, v, w with u + v + w = 0, the curve
//! y^2 = x(x - u)(x + v) has full 2-torsion and invariants
//! c4 = 16(u^2 - vw), c6 = -32(u - v)(v - w)(w - u), disc = 16 u^2 v^2 w^2.
//! This module classifies the reduction of such a curve at odd primes from
//! the valuations of (u, v, w) alone, computes conductor exponents at the
//! primes above 2 through discriminants of local quadratic extensions, and
//! assembles the finite list of levels that survive level lowering.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::classgrp::{h_set, ClassGroupData};
use crate::idealkit::{element_val, factor_rational_prime, Ideal, PrimeIdeal, Residue, ResidueRing};
use crate::quadfield::{FieldCtx, QElem, TwoSplitting};
use crate::{Error, Result};

/// Cap on unit-group enumerations inside dyadic residue rings.
const UNIT_CAP: u64 = 1 << 20;

/// A triple (u, v, w) of nonzero algebraic integers with u + v + w = 0,
/// standing for the curve y^2 = x(x - u)(x + v).
#[derive(Debug, Clone)]
pub struct FreyTriple {
    u: QElem,
    v: QElem,
    w: QElem,
}

impl FreyTriple {
    /// Builds the triple (u, v, -u-v), rejecting zero entries.
    pub fn new(u: QElem, v: QElem) -> Result<FreyTriple> {
        if u.d() != v.d() {
            return Err(Error::MixedFields(u.d(), v.d()));
        }
        let w = -(&u + &v);
        if u.is_zero() || v.is_zero() || w.is_zero() {
            return Err(Error::Zero("Frey triple entry"));
        }
        Ok(FreyTriple { u, v, w })
    }

    pub fn entries(&self) -> (&QElem, &QElem, &QElem) {
        (&self.u, &self.v, &self.w)
    }

    /// c4 = 16(u^2 - vw).
    pub fn c4(&self) -> QElem {
        (&(&self.u * &self.u) - &(&self.v * &self.w)).mul_int(&BigInt::from(16))
    }

    /// c6 = -32(u - v)(v - w)(w - u).
    pub fn c6(&self) -> QElem {
        let f1 = &self.u - &self.v;
        let f2 = &self.v - &self.w;
        let f3 = &self.w - &self.u;
        -&(&(&f1 * &f2) * &f3).mul_int(&BigInt::from(32))
    }

    /// disc = 16 u^2 v^2 w^2.
    pub fn disc(&self) -> QElem {
        let p = &(&self.u * &self.v) * &self.w;
        (&p * &p).mul_int(&BigInt::from(16))
    }
}

/// Local reduction type of the minimal model at a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionType {
    Good,
    Multiplicative,
    AdditivePotentiallyMultiplicative,
    AdditivePotentiallyGood,
}

/// Reduction data of the curve attached to a triple at an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OddLocalData {
    pub kind: ReductionType,
    pub conductor_exponent: u32,
    pub minimal_disc_val: u64,
}

/// Classifies reduction at an odd prime from the valuation profile of the
/// triple.  With s the minimum of the three valuations: the curve is
/// semistable exactly when s is even (good when the valuations agree,
/// multiplicative otherwise), and additive when s is odd (potentially good
/// when the valuations agree, potentially multiplicative otherwise).
pub fn odd_local_type(t: &FreyTriple, prime: &PrimeIdeal) -> Result<OddLocalData> {
    if prime.p == 2 {
        return Err(Error::Invalid(
            "odd_local_type requires a prime of odd residue characteristic".into(),
        ));
    }
    let ou = element_val(&t.u, prime) as u64;
    let ov = element_val(&t.v, prime) as u64;
    let ow = element_val(&t.w, prime) as u64;
    let s = ou.min(ov).min(ow);
    let all_equal = ou == ov && ov == ow;
    let minimal_disc_val = 2 * (ou + ov + ow) - 12 * (s / 2);
    let (kind, conductor_exponent) = match (s % 2 == 0, all_equal) {
        (true, true) => (ReductionType::Good, 0),
        (true, false) => (ReductionType::Multiplicative, 1),
        (false, true) => (ReductionType::AdditivePotentiallyGood, 2),
        (false, false) => (ReductionType::AdditivePotentiallyMultiplicative, 2),
    };
    Ok(OddLocalData {
        kind,
        conductor_exponent,
        minimal_disc_val,
    })
}

/// The prime ideals above 2, in canonical order.
pub fn dyadic_primes(d: u64) -> Result<Vec<PrimeIdeal>> {
    factor_rational_prime(d, 2)
}

/// The modulus prod P^(2 ord_P(2) + 1) over the primes P above 2.  An odd
/// unit is a local square at every P exactly when it is a square modulo
/// this ideal.
pub fn dyadic_modulus(fld: &FieldCtx) -> Result<Ideal> {
    let mut b = Ideal::one(fld.d());
    for pr in dyadic_primes(fld.d())? {
        b = b.mul(&pr.ideal().pow(2 * pr.e + 1)?)?;
    }
    Ok(b)
}

fn require_dyadic_unit(lam: &QElem, prime: &PrimeIdeal) -> Result<()> {
    if prime.p != 2 {
        return Err(Error::Invalid(
            "local square test requires a prime above 2".into(),
        ));
    }
    if lam.is_zero() || element_val(lam, prime) != 0 {
        return Err(Error::Invalid(
            "local square test requires a unit at the prime".into(),
        ));
    }
    Ok(())
}

/// Whether the element, a unit at the given prime above 2, is a square in
/// the completion at that prime.
pub fn is_local_square(lam: &QElem, prime: &PrimeIdeal) -> Result<bool> {
    require_dyadic_unit(lam, prime)?;
    let modulus = prime.ideal().pow(2 * prime.e + 1)?;
    let ring = ResidueRing::new(modulus)?;
    let target = ring.reduce(lam);
    Ok(ring
        .units()
        .iter()
        .any(|r| ring.mul(r, r) == target))
}

/// Valuation of the discriminant of the local extension obtained by
/// adjoining a square root of the element at a prime above 2.  Zero when
/// the element is a square or the extension is unramified.
pub fn local_quad_disc_val(lam: &QElem, prime: &PrimeIdeal) -> Result<u32> {
    if prime.p != 2 {
        return Err(Error::Invalid("square-class valuations are dyadic only".into()));
    }
    if lam.is_zero() {
        return Err(Error::Zero("square-class valuation of zero"));
    }
    let val = element_val(lam, prime);
    if val % 2 == 1 {
        return Ok(2 * prime.e + 1);
    }
    require_dyadic_unit(lam, prime)?;
    if is_local_square(lam, prime)? {
        return Ok(0);
    }
    let e = prime.e;
    for t in (1..=e).rev() {
        let ring = ResidueRing::new(prime.ideal().pow(2 * t)?)?;
        let target = ring.reduce(lam);
        let hit = ring.units().iter().any(|r| ring.mul(r, r) == target);
        if hit {
            return Ok(2 * e - 2 * t);
        }
    }
    Ok(2 * e)
}

/// Conductor exponent at a prime above 2 of a curve with potentially
/// multiplicative reduction whose minimal quadratic twist is split: 1 when
/// the twisting extension is unramified, twice the discriminant valuation
/// otherwise.
pub fn even_conductor_exponent(lam: &QElem, prime: &PrimeIdeal) -> Result<u32> {
    let dv = local_quad_disc_val(lam, prime)?;
    Ok(if dv == 0 { 1 } else { 2 * dv })
}

/// Classifies odd units modulo squares and global units at the primes
/// above 2.
pub struct LambdaClassifier {
    ring: ResidueRing,
    even_idx: Vec<usize>,
    divisors: Vec<BigInt>,
    dlogs: BTreeMap<Residue, Vec<BigInt>>,
    span: Vec<Vec<u8>>,
}

fn f2_reduce(v: &mut [u8], span: &[Vec<u8>]) {
    for row in span {
        let lead = row.iter().position(|&b| b == 1).expect("empty span row");
        if v[lead] == 1 {
            for (x, y) in v.iter_mut().zip(row.iter()) {
                *x ^= y;
            }
        }
    }
}

fn f2_insert(span: &mut Vec<Vec<u8>>, mut v: Vec<u8>) {
    f2_reduce(&mut v, span);
    if v.iter().any(|&b| b == 1) {
        span.push(v);
        span.sort_by_key(|row| row.iter().position(|&b| b == 1));
    }
}

impl LambdaClassifier {
    pub fn new(fld: &FieldCtx) -> Result<LambdaClassifier> {
        let b = dyadic_modulus(fld)?;
        let ring = ResidueRing::new(b)?;
        let pres = ring.unit_group(UNIT_CAP)?;
        let divisors: Vec<BigInt> = pres.group.invariants().to_vec();
        let even_idx: Vec<usize> = divisors
            .iter()
            .enumerate()
            .filter(|(_, di)| (*di % 2u8).is_zero())
            .map(|(i, _)| i)
            .collect();
        let parity = |dlog: &[BigInt], even_idx: &[usize]| -> Vec<u8> {
            even_idx
                .iter()
                .map(|&i| if (&dlog[i] % 2u8).is_zero() { 0 } else { 1 })
                .collect()
        };
        let mut span = Vec::new();
        let units = [-&fld.int(1), fld.fundamental_unit().clone()];
        for eta in &units {
            let r = ring.reduce(eta);
            let dlog = pres
                .dlog(&r)
                .ok_or_else(|| Error::Invalid("unit not invertible modulo the dyadic modulus".into()))?;
            f2_insert(&mut span, parity(dlog, &even_idx));
        }
        Ok(LambdaClassifier {
            ring,
            even_idx,
            divisors,
            dlogs: pres.dlogs,
            span,
        })
    }

    fn parity_of(&self, dlog: &[BigInt]) -> Vec<u8> {
        self.even_idx
            .iter()
            .map(|&i| if (&dlog[i] % 2u8).is_zero() { 0 } else { 1 })
            .collect()
    }

    /// Canonical label of the class of an odd element modulo squares and
    /// global units.
    pub fn class_label(&self, lam: &QElem) -> Result<Vec<u8>> {
        let r = self.ring.reduce(lam);
        let dlog = self
            .dlogs
            .get(&r)
            .ok_or_else(|| Error::Invalid("element is not a unit at every prime above 2".into()))?;
        let mut v = self.parity_of(dlog);
        f2_reduce(&mut v, &self.span);
        Ok(v)
    }

    pub fn same_class(&self, a: &QElem, b: &QElem) -> Result<bool> {
        Ok(self.class_label(a)? == self.class_label(b)?)
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        1usize << (self.even_idx.len() - self.span.len())
    }

    /// One representative per class, lifted to small odd algebraic
    /// integers, ordered by class label.
    pub fn cokernel_representatives(&self) -> Vec<QElem> {
        let m = self.even_idx.len();
        let mut best: BTreeMap<Vec<u8>, (&Vec<BigInt>, &Residue)> = BTreeMap::new();
        for (residue, dlog) in &self.dlogs {
            let par = self.parity_of(dlog);
            let entry = (dlog, residue);
            best.entry(par)
                .and_modify(|cur| {
                    if entry < *cur {
                        *cur = entry;
                    }
                })
                .or_insert(entry);
        }
        let mut labels = BTreeSet::new();
        for bits in 0..(1u64 << m) {
            let mut v: Vec<u8> = (0..m).map(|j| ((bits >> j) & 1) as u8).collect();
            f2_reduce(&mut v, &self.span);
            labels.insert(v);
        }
        assert_eq!(labels.len(), self.class_count(), "coset enumeration mismatch");
        labels
            .into_iter()
            .map(|label| {
                let (_, residue) = best
                    .get(&label)
                    .expect("parity map onto label space");
                self.ring.to_elem(residue)
            })
            .collect()
    }

    /// Elementary divisors of the unit group of the dyadic residue ring.
    pub fn ring_invariants(&self) -> &[BigInt] {
        &self.divisors
    }
}

/// Representatives of odd units modulo squares and global units at the
/// primes above 2.
pub fn unit_square_cokernel(fld: &FieldCtx) -> Result<Vec<QElem>> {
    Ok(LambdaClassifier::new(fld)?.cokernel_representatives())
}

/// Whether two odd elements are equivalent modulo squares and global units
/// at the primes above 2.
pub fn same_lambda_class(fld: &FieldCtx, a: &QElem, b: &QElem) -> Result<bool> {
    LambdaClassifier::new(fld)?.same_class(a, b)
}

/// One predicted even part of a lowered level.
#[derive(Debug, Clone)]
pub struct EvenLevelRow {
    /// Scaling-class representative; None for the row where no prime above
    /// 2 divides the triple, which occurs only when 2 is inert.
    pub lambda: Option<QElem>,
    /// Conductor exponent at each prime above 2, in canonical prime order.
    pub exponents: Vec<u32>,
    /// Product of the primes above 2 raised to those exponents.
    pub even_part: Ideal,
}

fn even_part_from_exponents(d: u64, primes: &[PrimeIdeal], exps: &[u32]) -> Result<Ideal> {
    let mut part = Ideal::one(d);
    for (pr, &e) in primes.iter().zip(exps.iter()) {
        part = part.mul(&pr.ideal().pow(e)?)?;
    }
    Ok(part)
}

fn normalize_lambda(
    fld: &FieldCtx,
    rep: &QElem,
    primes: &[PrimeIdeal],
) -> Result<(QElem, Vec<u32>)> {
    let u = fld.fundamental_unit();
    let candidates = [
        rep.clone(),
        -rep,
        u * rep,
        -&(u * rep),
    ];
    let mut best: Option<(BigInt, Vec<u32>, QElem)> = None;
    for cand in candidates {
        let mut exps = Vec::with_capacity(primes.len());
        for pr in primes {
            exps.push(even_conductor_exponent(&cand, pr)?);
        }
        let mut weight = BigInt::one();
        for (pr, &e) in primes.iter().zip(exps.iter()) {
            weight *= pr.norm().pow(e);
        }
        let key = (weight, exps, cand);
        match &best {
            Some(cur) if *cur <= key => {}
            _ => best = Some(key),
        }
    }
    let (_, exps, lam) = best.expect("nonempty candidate list");
    Ok((lam, exps))
}

/// The possible even parts of lowered levels: one row per scaling class,
/// with the class representative chosen among lambda, -lambda, u lambda,
/// -u lambda to minimize the norm of the even part, plus the fixed
/// exponent-4 row when 2 is inert.
pub fn even_level_rows(fld: &FieldCtx) -> Result<Vec<EvenLevelRow>> {
    let primes = dyadic_primes(fld.d())?;
    let mut rows = Vec::new();
    for rep in unit_square_cokernel(fld)? {
        let (lam, exps) = normalize_lambda(fld, &rep, &primes)?;
        let even_part = even_part_from_exponents(fld.d(), &primes, &exps)?;
        rows.push(EvenLevelRow {
            lambda: Some(lam),
            exponents: exps,
            even_part,
        });
    }
    if fld.two_splitting() == TwoSplitting::Inert {
        let exps = vec![4u32];
        let even_part = even_part_from_exponents(fld.d(), &primes, &exps)?;
        rows.push(EvenLevelRow {
            lambda: None,
            exponents: exps,
            even_part,
        });
    }
    rows.sort_by(|a, b| {
        (a.even_part.norm(), &a.exponents, &a.lambda)
            .cmp(&(b.even_part.norm(), &b.exponents, &b.lambda))
    });
    Ok(rows)
}

/// A full predicted level: odd part m^2 times an even part.
#[derive(Debug, Clone)]
pub struct LevelRow {
    pub m: Ideal,
    pub lambda: Option<QElem>,
    pub even_part: Ideal,
    pub level: Ideal,
}

/// The complete level forecast for one field.
#[derive(Debug, Clone)]
pub struct PredictedLevels {
    pub s_primes: Vec<PrimeIdeal>,
    pub odd_reps: Vec<Ideal>,
    pub even_rows: Vec<EvenLevelRow>,
    pub rows: Vec<LevelRow>,
}

/// Predicts every level m^2 times even part that can carry the lowered
/// representation of a curve in the family.
pub fn predict_levels(fld: &FieldCtx, cls: &ClassGroupData) -> Result<PredictedLevels> {
    let s_primes = dyadic_primes(fld.d())?;
    let odd_reps = h_set(cls)?;
    let even_rows = even_level_rows(fld)?;
    let mut rows = Vec::new();
    for m in &odd_reps {
        let m_sq = m.pow(2)?;
        for er in &even_rows {
            rows.push(LevelRow {
                m: m.clone(),
                lambda: er.lambda.clone(),
                even_part: er.even_part.clone(),
                level: m_sq.mul(&er.even_part)?,
            });
        }
    }
    Ok(PredictedLevels {
        s_primes,
        odd_reps,
        even_rows,
        rows,
    })
}
