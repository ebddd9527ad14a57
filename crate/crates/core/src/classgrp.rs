//! Class groups, coset representatives for Cl/Cl^2, and narrow ray class
//! groups of real quadratic fields.
//!
//! The class group is computed unconditionally: every integral ideal of norm
//! up to the Minkowski bound is enumerated and classified by the complete
//! principality test, so Minkowski's theorem guarantees that every class is
//! seen.  Ray class groups are presented on the unit group of the residue
//! ring, the sign characters at the two real places, and prime
//! representatives of the class group's elementary divisor basis; the
//! resulting order is cross-checked against the exact sequence relating
//! Cl_m to Cl, so an inconsistent presentation can never escape.

use crate::abelian::{group_from_generators, snf, FinAbGroup, RelLattice};
use crate::idealkit::{factor_rational_prime, small_primes, Ideal, PrimeIdeal, ResidueRing};
use crate::quadfield::{FieldCtx, QElem};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// The class group of a field, with representative ideals, discrete
/// logarithms, and prime ideals realizing the elementary divisor basis.
#[derive(Debug, Clone)]
pub struct ClassGroupData {
    fld: FieldCtx,
    group: FinAbGroup,
    reps: Vec<Ideal>,
    dlogs: Vec<Vec<BigInt>>,
    snf_primes: Vec<(PrimeIdeal, QElem)>,
}

/// All integral ideals of norm at most `bound`, sorted by (norm, HNF).
pub fn ideals_of_norm_up_to(d: u64, bound: u64) -> Result<Vec<Ideal>> {
    let mut out = vec![Ideal::one(d)];
    for p in small_primes(bound) {
        for prime in factor_rational_prime(d, p)? {
            let pn = prime.norm();
            let bound_big = BigInt::from(bound);
            let snapshot = out.clone();
            for base in snapshot {
                let mut cur = base;
                loop {
                    let next_norm = cur.norm() * &pn;
                    if next_norm > bound_big {
                        break;
                    }
                    cur = cur.mul(prime.ideal())?;
                    out.push(cur.clone());
                }
            }
        }
    }
    out.sort_by_key(|i| (i.norm(), i.clone()));
    Ok(out)
}

/// Computes the class group unconditionally.
pub fn class_group(fld: &FieldCtx) -> Result<ClassGroupData> {
    let d = fld.d();
    let bound_big: BigInt = fld.disc().sqrt() / 2;
    let bound = u64::try_from(&bound_big).expect("Minkowski bound fits u64 for d <= 1000");
    let ideals = ideals_of_norm_up_to(d, bound.max(1))?;
    let mut reps: Vec<Ideal> = Vec::new();
    for ideal in &ideals {
        let mut found = false;
        for rep in &reps {
            if ideal.mul(&rep.conj())?.is_principal(fld)?.is_some() {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(ideal.clone());
        }
    }
    let hnum = reps.len();
    let class_of_local = |ideal: &Ideal| -> Result<usize> {
        for (c, rep) in reps.iter().enumerate() {
            if ideal.mul(&rep.conj())?.is_principal(fld)?.is_some() {
                return Ok(c);
            }
        }
        Err(Error::Invalid(
            "ideal class missing from Minkowski enumeration".into(),
        ))
    };
    let mut mult = vec![vec![0usize; hnum]; hnum];
    for i in 0..hnum {
        for j in 0..=i {
            let c = class_of_local(&reps[i].mul(&reps[j])?)?;
            mult[i][j] = c;
            mult[j][i] = c;
        }
    }
    let pres = group_from_generators(
        0usize,
        (0..hnum).collect(),
        |x, y| mult[*x][*y],
        hnum as u64 + 1,
    )?;
    let group = pres.group.clone();
    let dlogs: Vec<Vec<BigInt>> = (0..hnum)
        .map(|c| pres.dlog(&c).expect("every class enumerated").clone())
        .collect();
    let mut snf_primes = Vec::new();
    for (j, order) in group.invariants().iter().enumerate() {
        let target: Vec<BigInt> = (0..group.rank())
            .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
            .collect();
        let found = find_prime_in_class(fld, &reps, &dlogs, &target, None)?;
        let power = found.ideal().pow(u32::try_from(order).unwrap())?;
        let cert = power.is_principal(fld)?.ok_or_else(|| {
            Error::Invalid("basis prime power is not principal at its class order".into())
        })?;
        snf_primes.push((found, cert));
    }
    Ok(ClassGroupData {
        fld: fld.clone(),
        group,
        reps,
        dlogs,
        snf_primes,
    })
}

/// Finds a degree-one or ramified prime whose class has the given discrete
/// logarithm, optionally avoiding divisors of a modulus.
fn find_prime_in_class(
    fld: &FieldCtx,
    reps: &[Ideal],
    dlogs: &[Vec<BigInt>],
    target: &[BigInt],
    coprime_to: Option<&Ideal>,
) -> Result<PrimeIdeal> {
    for p in small_primes(1000) {
        for prime in factor_rational_prime(fld.d(), p)? {
            if prime.f != 1 {
                continue;
            }
            if let Some(m) = coprime_to {
                if !prime.ideal().is_coprime(m)? {
                    continue;
                }
            }
            let c = class_index(fld, reps, prime.ideal())?;
            if dlogs[c] == target {
                return Ok(prime);
            }
        }
    }
    Err(Error::Capacity {
        op: "find_prime_in_class",
        detail: "no representing prime below 1000".into(),
    })
}

fn class_index(fld: &FieldCtx, reps: &[Ideal], ideal: &Ideal) -> Result<usize> {
    for (c, rep) in reps.iter().enumerate() {
        if ideal.mul(&rep.conj())?.is_principal(fld)?.is_some() {
            return Ok(c);
        }
    }
    Err(Error::Invalid(
        "ideal class missing from Minkowski enumeration".into(),
    ))
}

impl ClassGroupData {
    pub fn field(&self) -> &FieldCtx {
        &self.fld
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn h(&self) -> BigInt {
        self.group.order()
    }

    /// Canonical representative ideals, one per class; index 0 is principal.
    pub fn reps(&self) -> &[Ideal] {
        &self.reps
    }

    /// The class index of an arbitrary nonzero integral ideal.
    pub fn class_of(&self, ideal: &Ideal) -> Result<usize> {
        class_index(&self.fld, &self.reps, ideal)
    }

    /// Discrete logarithm of a class index in elementary divisor coordinates.
    pub fn dlog_of_class(&self, class: usize) -> &[BigInt] {
        &self.dlogs[class]
    }

    pub fn dlog_of(&self, ideal: &Ideal) -> Result<Vec<BigInt>> {
        Ok(self.dlogs[self.class_of(ideal)?].clone())
    }

    /// Prime ideals realizing the elementary divisor basis, together with a
    /// generator certificate for prime^order.
    pub fn snf_primes(&self) -> &[(PrimeIdeal, QElem)] {
        &self.snf_primes
    }
}

/// Representatives of Cl/Cl^2 as odd ideals: the trivial coset is
/// represented by (1) and every other coset by its smallest odd prime.
pub fn h_set(cls: &ClassGroupData) -> Result<Vec<Ideal>> {
    let even_idx: Vec<usize> = cls
        .group()
        .invariants()
        .iter()
        .enumerate()
        .filter(|(_, d)| d.is_even())
        .map(|(i, _)| i)
        .collect();
    let parity = |dlog: &[BigInt]| -> Vec<u8> {
        even_idx
            .iter()
            .map(|&i| if dlog[i].is_odd() { 1 } else { 0 })
            .collect()
    };
    let mut wanted: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut stack = vec![vec![0u8; even_idx.len()]];
    while let Some(v) = stack.pop() {
        if wanted.insert(v.clone()) {
            for i in 0..v.len() {
                let mut w = v.clone();
                w[i] ^= 1;
                stack.push(w);
            }
        }
    }
    let mut found: BTreeMap<Vec<u8>, Ideal> = BTreeMap::new();
    found.insert(vec![0u8; even_idx.len()], Ideal::one(cls.fld.d()));
    for p in small_primes(1000) {
        if found.len() == wanted.len() {
            break;
        }
        if p == 2 {
            continue;
        }
        for prime in factor_rational_prime(cls.fld.d(), p)? {
            if prime.f != 1 {
                continue;
            }
            let key = parity(&cls.dlog_of(prime.ideal())?);
            found.entry(key).or_insert_with(|| prime.ideal().clone());
        }
    }
    if found.len() != wanted.len() {
        return Err(Error::Capacity {
            op: "h_set",
            detail: "no odd prime representative below 1000 for some coset".into(),
        });
    }
    let mut out: Vec<Ideal> = found.into_values().collect();
    out.sort_by_key(|i| (i.norm(), i.clone()));
    Ok(out)
}

/// A narrow or ordinary ray class group.
#[derive(Debug, Clone)]
pub struct RayClassData {
    pub group: FinAbGroup,
    pub modulus: Ideal,
    pub with_infinite_places: bool,
}

fn sign_bits(e: &QElem) -> (BigInt, BigInt) {
    let (s1, s2) = e.signs();
    (
        if s1 < 0 { BigInt::one() } else { BigInt::zero() },
        if s2 < 0 { BigInt::one() } else { BigInt::zero() },
    )
}

/// Order of the subgroup generated by `gens` inside the product of cyclic
/// groups with the given moduli.
fn mixed_subgroup_order(moduli: &[BigInt], gens: &[Vec<BigInt>]) -> BigInt {
    let reduce = |v: &[BigInt]| -> Vec<BigInt> {
        v.iter()
            .zip(moduli)
            .map(|(x, m)| x.mod_floor(m))
            .collect()
    };
    let zero = vec![BigInt::zero(); moduli.len()];
    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    seen.insert(zero.clone());
    let mut queue = VecDeque::new();
    queue.push_back(zero);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let sum: Vec<BigInt> = x.iter().zip(g.iter()).map(|(a, b)| a + b).collect();
            let y = reduce(&sum);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    BigInt::from(seen.len())
}

/// Computes the ray class group for the given modulus, optionally including
/// both real places.  The presentation order is verified against
/// h * |(O/m)^*| * 2^places / |image of units|.
pub fn ray_class_group(
    fld: &FieldCtx,
    cls: &ClassGroupData,
    modulus: &Ideal,
    with_infinite_places: bool,
) -> Result<RayClassData> {
    if modulus.d() != fld.d() {
        return Err(Error::MixedFields(fld.d(), modulus.d()));
    }
    let ring = ResidueRing::new(modulus.clone())?;
    let upres = ring.unit_group(200_000)?;
    let ua = &upres.group;
    let r = ua.rank();
    let s = if with_infinite_places { 2 } else { 0 };
    let k = cls.group().rank();
    let n = r + s + k;

    let iota = |e: &QElem| -> Result<Vec<BigInt>> {
        let residue = ring.reduce(e);
        let adl = upres.dlog(&residue).ok_or_else(|| {
            Error::Invalid(format!(
                "element {} is not a unit modulo the ray modulus",
                e
            ))
        })?;
        let mut v = adl.clone();
        if with_infinite_places {
            let (b1, b2) = sign_bits(e);
            v.push(b1);
            v.push(b2);
        }
        Ok(v)
    };

    let mut lattice = RelLattice::new(n);
    for (i, div) in ua.invariants().iter().enumerate() {
        let mut row = vec![BigInt::zero(); n];
        row[i] = div.clone();
        lattice.insert(row);
    }
    for i in 0..s {
        let mut row = vec![BigInt::zero(); n];
        row[r + i] = BigInt::from(2);
        lattice.insert(row);
    }
    let minus_one = QElem::new(fld.d(), BigInt::from(-2), BigInt::zero()).unwrap();
    let mut unit_images = Vec::new();
    for eta in [minus_one, fld.fundamental_unit().clone()] {
        let img = iota(&eta)?;
        unit_images.push(img.clone());
        let mut row = img;
        row.resize(n, BigInt::zero());
        lattice.insert(row);
    }
    for (j, order) in cls.group().invariants().iter().enumerate() {
        let (_prime, gamma) = pick_basis_prime(fld, cls, j, modulus)?;
        let img = iota(&gamma)?;
        let mut row: Vec<BigInt> = img.iter().map(|x| -x).collect();
        row.resize(n, BigInt::zero());
        row[r + s + j] = order.clone();
        lattice.insert(row);
    }
    let hnf = lattice.into_hnf()?;
    let decomposition = snf(hnf);
    let divisors: Vec<BigInt> = decomposition
        .divisors
        .iter()
        .filter(|d| *d > &BigInt::one())
        .cloned()
        .collect();
    let group = FinAbGroup::new(divisors)?;

    let mut moduli: Vec<BigInt> = ua.invariants().to_vec();
    for _ in 0..s {
        moduli.push(BigInt::from(2));
    }
    let image_order = mixed_subgroup_order(&moduli, &unit_images);
    let ambient: BigInt = ua.order() * BigInt::from(2).pow(s as u32);
    let expected = cls.h() * ambient / image_order;
    if group.order() != expected {
        return Err(Error::Invalid(format!(
            "ray class group order {} disagrees with exact sequence order {}",
            group.order(),
            expected
        )));
    }
    Ok(RayClassData {
        group,
        modulus: modulus.clone(),
        with_infinite_places,
    })
}

/// A prime in the j-th elementary divisor class that is coprime to the
/// modulus, with a generator certificate for prime^order.
fn pick_basis_prime(
    fld: &FieldCtx,
    cls: &ClassGroupData,
    j: usize,
    modulus: &Ideal,
) -> Result<(PrimeIdeal, QElem)> {
    let (default_prime, default_cert) = &cls.snf_primes()[j];
    if default_prime.ideal().is_coprime(modulus)? {
        return Ok((default_prime.clone(), default_cert.clone()));
    }
    let target: Vec<BigInt> = (0..cls.group().rank())
        .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
        .collect();
    let prime = find_prime_in_class(fld, cls.reps(), &cls.dlogs, &target, Some(modulus))?;
    let order = u32::try_from(&cls.group().invariants()[j]).unwrap();
    let cert = prime
        .ideal()
        .pow(order)?
        .is_principal(fld)?
        .ok_or_else(|| {
            Error::Invalid("basis prime power is not principal at its class order".into())
        })?;
    Ok((prime, cert))
}

/// The narrow class group: trivial modulus, both real places.
pub fn narrow_class_group(fld: &FieldCtx, cls: &ClassGroupData) -> Result<RayClassData> {
    ray_class_group(fld, cls, &Ideal::one(fld.d()), true)
}
