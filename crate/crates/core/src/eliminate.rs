//! Congruence elimination of newforms against the Frey family.
//!
//! A curve of the family whose lowered representation matches a newform f
//! forces, at every test prime q coprime to the level, a congruence
//! between the eigenvalue a_q(f) and a trace that is either one of the
//! full-2-torsion values A(q) = {a : |a| <= 2 sqrt(Nq), Nq + 1 - a = 0 mod
//! 4} or +-(Nq + 1).  The product B_fq = Nq ((Nq+1)^2 - a_q^2) prod_{a in
//! A(q)} (a - a_q) therefore lies in every prime of the coefficient ring
//! above the exponent p, so p divides the norm of the ideal generated by
//! all B_fq.  This module computes those obstructions exactly, extracts
//! the primes p >= 17 that survive them, and applies the two fallback
//! arguments (inertia at a potentially good dyadic place, and the
//! square-class comparison of minimal discriminant valuations) that
//! dispose of forms with vanishing obstruction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::freylevel::{dyadic_primes, FreyTriple};
use crate::idealkit::{element_val, factor_bigint, factor_rational_prime, small_primes, Ideal, PrimeIdeal};
use crate::quadfield::make_field;
use crate::{Error, Result};

/// Traces allowed at a good prime for a curve with full 2-torsion.
pub fn a_set(norm_q: &BigInt) -> Vec<BigInt> {
    let bound = (norm_q * 4u8).sqrt();
    let mut out = Vec::new();
    let mut a = -&bound;
    while a <= bound {
        if ((norm_q + 1u8 - &a) % 4u8).is_zero() {
            out.push(a.clone());
        }
        a += 1u8;
    }
    out
}

/// The coefficient ring Z[x]/(h) of a newform, for h monic with integer
/// coefficients.  Elements are coordinate vectors in the power basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeRing {
    coeffs: Vec<BigInt>,
}

impl HeckeRing {
    /// Builds the ring from the coefficients of h, constant term first.
    pub fn new(coeffs: Vec<BigInt>) -> Result<HeckeRing> {
        if coeffs.len() < 2 {
            return Err(Error::Invalid("Hecke polynomial must have degree >= 1".into()));
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::Invalid("Hecke polynomial must be monic".into()));
        }
        Ok(HeckeRing { coeffs })
    }

    /// The ring of a form with rational eigenvalues, Z[x]/(x).
    pub fn rational() -> HeckeRing {
        HeckeRing {
            coeffs: vec![BigInt::zero(), BigInt::one()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.degree()]
    }

    pub fn from_int(&self, k: BigInt) -> Vec<BigInt> {
        let mut v = self.zero();
        v[0] = k;
        v
    }

    pub fn check_elem(&self, e: &[BigInt]) -> Result<()> {
        if e.len() == self.degree() {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "element has {} coordinates, ring has degree {}",
                e.len(),
                self.degree()
            )))
        }
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// Product in the power basis, reduced by the monic defining
    /// polynomial.
    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.degree();
        let mut conv = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                conv[i + j] += x * y;
            }
        }
        for k in (n..conv.len()).rev() {
            let lead = std::mem::take(&mut conv[k]);
            if lead.is_zero() {
                continue;
            }
            for i in 0..n {
                let t = &lead * &self.coeffs[i];
                conv[k - n + i] -= t;
            }
        }
        conv.truncate(n);
        conv
    }

    fn mul_by_x(&self, a: &[BigInt]) -> Vec<BigInt> {
        let n = self.degree();
        let lead = a[n - 1].clone();
        let mut out = vec![BigInt::zero(); n];
        for i in 1..n {
            out[i] = a[i - 1].clone();
        }
        for i in 0..n {
            out[i] -= &lead * &self.coeffs[i];
        }
        out
    }

    /// Field norm down to Z: the determinant of the multiplication matrix.
    pub fn norm(&self, a: &[BigInt]) -> BigInt {
        det_bareiss(self.mult_matrix(a))
    }

    fn mult_matrix(&self, a: &[BigInt]) -> Vec<Vec<BigInt>> {
        let n = self.degree();
        let mut rows = Vec::with_capacity(n);
        let mut cur = a.to_vec();
        rows.push(cur.clone());
        for _ in 1..n {
            cur = self.mul_by_x(&cur);
            rows.push(cur.clone());
        }
        rows
    }

    /// Characteristic polynomial of multiplication by a, constant term
    /// first; its roots are the images of a under all embeddings.
    pub fn char_poly(&self, a: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_elem(a)?;
        let n = self.degree();
        let m = self.mult_matrix(a);
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut aux: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        let mut c_prev = BigInt::zero();
        for k in 1..=n {
            if k > 1 {
                for (i, row) in aux.iter_mut().enumerate() {
                    row[i] += &c_prev;
                }
            }
            let mut next = vec![vec![BigInt::zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = BigInt::zero();
                    for (l, aux_row) in aux.iter().enumerate() {
                        acc += &m[i][l] * &aux_row[j];
                    }
                    next[i][j] = acc;
                }
            }
            aux = next;
            let mut tr = BigInt::zero();
            for (i, row) in aux.iter().enumerate() {
                tr += &row[i];
            }
            let ck = -tr / BigInt::from(k as i64);
            coeffs[n - k] = ck.clone();
            c_prev = ck;
        }
        Ok(coeffs)
    }

    /// Absolute discriminant of the defining polynomial, used to flag
    /// primes where the power basis may not capture the maximal order.
    pub fn disc_abs(&self) -> BigInt {
        let n = self.degree();
        let mut deriv = vec![BigInt::zero(); n.max(1)];
        for i in 1..=n {
            deriv[i - 1] = &self.coeffs[i] * BigInt::from(i);
        }
        self.norm(&deriv).abs()
    }
}

/// Fraction-free determinant of a square integer matrix.
fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !m[i][k].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return BigInt::zero(),
        };
        if pivot != k {
            m.swap(pivot, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = &t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// The congruence obstruction element B_fq for one test prime.
pub fn b_fq(ring: &HeckeRing, a_q: &[BigInt], norm_q: &BigInt) -> Result<Vec<BigInt>> {
    ring.check_elem(a_q)?;
    let nq1: BigInt = norm_q + 1u8;
    let a_sq = ring.mul(a_q, a_q);
    let first = ring.sub(&ring.from_int(&nq1 * &nq1), &a_sq);
    let mut acc = ring.mul(&ring.from_int(norm_q.clone()), &first);
    for a in a_set(norm_q) {
        let factor = ring.sub(&ring.from_int(a), a_q);
        acc = ring.mul(&acc, &factor);
    }
    Ok(acc)
}

/// The test primes: every prime of the field with norm below 60 not
/// dividing the level.
pub fn hecke_test_primes(d: u64, level: &Ideal) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in small_primes(60) {
        for pr in factor_rational_prime(d, p)? {
            if pr.norm() < BigInt::from(60) && level.val(&pr) == 0 {
                out.push(pr);
            }
        }
    }
    Ok(out)
}

fn poly_mod_p(coeffs: &[BigInt], p: u64) -> Vec<u64> {
    let p_big = BigInt::from(p);
    let mut v: Vec<u64> = coeffs
        .iter()
        .map(|c| {
            let r = ((c % &p_big) + &p_big) % &p_big;
            r.to_u64().unwrap()
        })
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, b, p);
        }
        b = mod_mul(b, b, p);
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

/// Monic gcd in F_p[x]; inputs and output are coefficient vectors with
/// constant term first, empty meaning zero.
fn poly_gcd_mod_p(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    loop {
        if b.is_empty() {
            if let Some(&lead) = a.last() {
                let inv = mod_inv(lead, p);
                for c in &mut a {
                    *c = mod_mul(*c, inv, p);
                }
            }
            return a;
        }
        let r = poly_rem_mod_p(&a, &b, p);
        a = b;
        b = r;
    }
}

fn poly_rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    let inv = mod_inv(*b.last().unwrap(), p);
    while r.len() > db {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let f = mod_mul(lead, inv, p);
            let shift = r.len() - 1 - db;
            for i in 0..=db {
                let t = mod_mul(f, b[i], p);
                let idx = shift + i;
                r[idx] = (r[idx] + p - t) % p;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

/// Whether the defining polynomial and every obstruction element share a
/// common factor mod p, i.e. some prime of the coefficient ring above p
/// contains all of them.
fn stage2_common_factor(ring: &HeckeRing, elements: &[Vec<BigInt>], p: u64) -> bool {
    let mut g = poly_mod_p(ring.poly(), p);
    for b in elements {
        let bp = poly_mod_p(b, p);
        g = poly_gcd_mod_p(g, bp, p);
        if g.len() == 1 {
            return false;
        }
    }
    g.len() >= 2
}

/// A prime exponent not excluded by the congruence obstructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivingPrime {
    pub p: u64,
    /// True when a common factor mod p confirms a genuine prime of the
    /// coefficient ring above p dividing every obstruction.
    pub confirmed: bool,
    /// True when p divides the polynomial discriminant, so the power
    /// basis test is inconclusive and the prime is retained defensively.
    pub flagged_index: bool,
}

/// Everything needed to run elimination against one newform.
#[derive(Debug, Clone)]
pub struct EliminationForm {
    pub label: String,
    pub ring: HeckeRing,
    /// Eigenvalue coordinates in the power basis, keyed by prime ideal.
    pub eigenvalues: BTreeMap<Ideal, Vec<BigInt>>,
}

/// Outcome of congruence elimination for one form.
#[derive(Debug, Clone)]
pub struct FormElimination {
    pub label: String,
    /// All obstruction elements vanish, so no exponent is excluded.
    pub c_f_is_zero: bool,
    /// Gcd over the test primes of |Norm(B_fq)|.
    pub norm_gcd: BigInt,
    pub surviving: Vec<SurvivingPrime>,
}

/// Runs the two-stage elimination for one form at one level.
pub fn eliminate_form(
    d: u64,
    level: &Ideal,
    form: &EliminationForm,
) -> Result<FormElimination> {
    let t_primes = hecke_test_primes(d, level)?;
    if t_primes.is_empty() {
        return Err(Error::DataGap("no test primes below the norm bound".into()));
    }
    let mut elements = Vec::with_capacity(t_primes.len());
    for q in &t_primes {
        let a_q = form.eigenvalues.get(q.ideal()).ok_or_else(|| {
            Error::DataGap(format!(
                "form {} is missing the eigenvalue at a prime of norm {}",
                form.label,
                q.norm()
            ))
        })?;
        elements.push(b_fq(&form.ring, a_q, &q.norm())?);
    }
    let mut norm_gcd = BigInt::zero();
    for b in &elements {
        norm_gcd = norm_gcd.gcd(&form.ring.norm(b).abs());
    }
    let c_f_is_zero = norm_gcd.is_zero();
    let mut surviving = Vec::new();
    if !c_f_is_zero && !norm_gcd.is_one() {
        let disc = form.ring.disc_abs();
        for (&p, _) in factor_bigint(&norm_gcd)?.iter() {
            if p < 17 {
                continue;
            }
            let flagged_index = !disc.is_zero() && (&disc % p).is_zero();
            if flagged_index {
                surviving.push(SurvivingPrime {
                    p,
                    confirmed: false,
                    flagged_index: true,
                });
            } else if stage2_common_factor(&form.ring, &elements, p) {
                surviving.push(SurvivingPrime {
                    p,
                    confirmed: true,
                    flagged_index: false,
                });
            }
        }
    }
    Ok(FormElimination {
        label: form.label.clone(),
        c_f_is_zero,
        norm_gcd,
        surviving,
    })
}

/// Residue classes mod 8 eliminated by comparing minimal discriminant
/// valuations: the family's curves have valuations -8 + 2pt at the two
/// split primes above 2, so the valuation product ratio is congruent to
/// 64/(v1 v2) mod p, and the match is impossible when that ratio is a
/// nonsquare mod p.
pub fn halberstadt_kraus_classes(w_disc_vals: (u32, u32)) -> Result<Vec<u64>> {
    let t = 64u64 * w_disc_vals.0 as u64 * w_disc_vals.1 as u64;
    let mut squarefree = 1u64;
    let mut rest = t;
    let mut q = 2u64;
    while q * q <= rest {
        let mut e = 0;
        while rest % q == 0 {
            rest /= q;
            e += 1;
        }
        if e % 2 == 1 {
            squarefree *= q;
        }
        q += 1;
    }
    squarefree *= rest;
    match squarefree {
        1 => Ok(vec![]),
        2 => Ok(vec![3, 5]),
        _ => Err(Error::DataGap(
            "congruence-class summary implemented only for ratios with squarefree part 1 or 2"
                .into(),
        )),
    }
}

/// Exact per-prime version of the same square-class test.
pub fn halberstadt_kraus_eliminates(p: u64, w_disc_vals: (u32, u32)) -> bool {
    let t = (64u64 * w_disc_vals.0 as u64 * w_disc_vals.1 as u64) % p;
    if t == 0 {
        return false;
    }
    mod_pow(t, (p - 1) / 2, p) != 1
}

/// Inertia orders available to a curve with potentially good reduction at
/// a place above 2; a family member with potentially multiplicative
/// reduction forces order divisible by p, so any p >= 17 is excluded.
pub fn inertia_argument_eliminates(p: u64) -> bool {
    ![1, 2, 3, 4, 6, 8, 24].contains(&p)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

/// Certified minimal discriminant valuations of the curve W below at the
/// two primes above 2 of the d = 17 field.
pub const W_MINIMAL_DISC_VALS: (u32, u32) = (4, 2);

/// The certified curve y^2 = x(x+1)(x+8+4*sqrt(3)) of conductor P^4 over
/// the d = 3 field, in two-torsion form.
pub fn survivor_curve_d3() -> Result<FreyTriple> {
    let f = make_field(3)?;
    FreyTriple::new(f.elem(-1, 0), f.elem(8, 4))
}

/// The certified curve y^2 = x(x-4+sqrt(17))(x+(-13+5*sqrt(17))/2) of
/// conductor (2) over the d = 17 field, in two-torsion form.
pub fn survivor_curve_d17() -> Result<FreyTriple> {
    let f = make_field(17)?;
    FreyTriple::new(f.elem(4, -1), f.half(BigInt::from(-13), BigInt::from(5))?)
}

/// Disposes of the surviving d = 3 form for a given exponent.  Returns
/// true when the exponent is eliminated.  Verifies the certified
/// j-invariant 54000 of the competing curve (hence its potentially good
/// reduction at the ramified dyadic prime) and that the family's
/// j-valuation 8 ord(2) - 6pt there stays negative and prime to p.
pub fn survivor_d3(p: u64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::Invalid(format!("exponent {} is not prime", p)));
    }
    if p < 17 {
        return Err(Error::Invalid(format!("exponent {} is below 17", p)));
    }
    let triple = survivor_curve_d3()?;
    let j_times_disc = triple.disc().mul_int(&BigInt::from(54000));
    if triple.c4().pow(3) != j_times_disc {
        return Err(Error::Invalid("certified j-invariant mismatch for the d=3 curve".into()));
    }
    let f = make_field(3)?;
    let dy = dyadic_primes(3)?;
    let ord2 = element_val(&f.int(2), &dy[0]) as u64;
    let base = 8 * ord2;
    if base % p == 0 || 6 * p <= base {
        return Ok(false);
    }
    Ok(inertia_argument_eliminates(p))
}

/// Disposes of the surviving d = 17 form for a given exponent via the
/// certified minimal discriminant valuations of W.  Returns true when the
/// exponent is eliminated.
pub fn survivor_d17(p: u64) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::Invalid(format!("exponent {} is not prime", p)));
    }
    if p < 17 {
        return Err(Error::Invalid(format!("exponent {} is below 17", p)));
    }
    Ok(halberstadt_kraus_eliminates(p, W_MINIMAL_DISC_VALS))
}

/// Fallback argument attached to a form whose obstruction vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurvivorResolution {
    /// The form's curve has potentially good reduction at a prime above 2
    /// while every family member is potentially multiplicative there.
    InertiaPotentiallyGood,
    /// Minimal discriminant valuations of the form's curve at the two
    /// split primes above 2.
    HalberstadtKraus { w_disc_vals: (u32, u32) },
    None,
}

/// How the fallback argument disposed of a form's survivors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolutionOutcome {
    NotNeeded,
    KilledAll,
    /// Only exponents in these residue classes mod 8 are eliminated.
    KilledClasses(Vec<u64>),
    Unresolved,
}

/// One form together with its fallback argument.
#[derive(Debug, Clone)]
pub struct FormEntry {
    pub form: EliminationForm,
    pub resolution: SurvivorResolution,
}

/// The newform data available at one predicted level; None when the space
/// has not been computed.
#[derive(Debug, Clone)]
pub struct LevelData {
    pub level: Ideal,
    pub forms: Option<Vec<FormEntry>>,
}

/// Elimination outcome for one form, including the fallback.
#[derive(Debug, Clone)]
pub struct FormOutcome {
    pub elimination: FormElimination,
    pub resolution: ResolutionOutcome,
}

/// Elimination outcome for one level.
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub level: Ideal,
    pub missing: bool,
    pub outcomes: Vec<FormOutcome>,
}

/// Final verdict for one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ProvenAll,
    /// Proven only for prime exponents in these residue classes mod 8.
    ProvenCongruenceClasses(Vec<u64>),
    Obstructed,
    DataIncomplete,
}

/// Elimination report for one field across all predicted levels.
#[derive(Debug, Clone)]
pub struct EliminationReport {
    pub d: u64,
    pub levels: Vec<LevelReport>,
    pub verdict: Verdict,
}

fn apply_resolution(
    elim: &FormElimination,
    resolution: &SurvivorResolution,
) -> Result<ResolutionOutcome> {
    let needs_help = elim.c_f_is_zero || !elim.surviving.is_empty();
    if !needs_help {
        return Ok(ResolutionOutcome::NotNeeded);
    }
    match resolution {
        SurvivorResolution::InertiaPotentiallyGood => {
            if elim.c_f_is_zero {
                Ok(ResolutionOutcome::KilledAll)
            } else if elim
                .surviving
                .iter()
                .all(|s| inertia_argument_eliminates(s.p))
            {
                Ok(ResolutionOutcome::KilledAll)
            } else {
                Ok(ResolutionOutcome::Unresolved)
            }
        }
        SurvivorResolution::HalberstadtKraus { w_disc_vals } => {
            let classes = halberstadt_kraus_classes(*w_disc_vals)?;
            if elim.c_f_is_zero {
                if classes.is_empty() {
                    Ok(ResolutionOutcome::Unresolved)
                } else {
                    Ok(ResolutionOutcome::KilledClasses(classes))
                }
            } else if elim
                .surviving
                .iter()
                .all(|s| halberstadt_kraus_eliminates(s.p, *w_disc_vals))
            {
                Ok(ResolutionOutcome::KilledAll)
            } else {
                Ok(ResolutionOutcome::Unresolved)
            }
        }
        SurvivorResolution::None => Ok(ResolutionOutcome::Unresolved),
    }
}

/// Runs elimination across every level of a field and assembles the
/// verdict.
pub fn eliminate_field(d: u64, levels: &[LevelData]) -> Result<EliminationReport> {
    let mut reports = Vec::new();
    let mut any_missing = false;
    let mut any_unresolved = false;
    let mut classes: Option<Vec<u64>> = None;
    for ld in levels {
        match &ld.forms {
            None => {
                any_missing = true;
                reports.push(LevelReport {
                    level: ld.level.clone(),
                    missing: true,
                    outcomes: Vec::new(),
                });
            }
            Some(entries) => {
                let mut outcomes = Vec::new();
                for entry in entries {
                    let elimination = eliminate_form(d, &ld.level, &entry.form)?;
                    let resolution = apply_resolution(&elimination, &entry.resolution)?;
                    match &resolution {
                        ResolutionOutcome::Unresolved => any_unresolved = true,
                        ResolutionOutcome::KilledClasses(c) => {
                            let merged = match classes.take() {
                                None => c.clone(),
                                Some(prev) => prev
                                    .into_iter()
                                    .filter(|x| c.contains(x))
                                    .collect(),
                            };
                            classes = Some(merged);
                        }
                        _ => {}
                    }
                    outcomes.push(FormOutcome {
                        elimination,
                        resolution,
                    });
                }
                reports.push(LevelReport {
                    level: ld.level.clone(),
                    missing: false,
                    outcomes,
                });
            }
        }
    }
    let verdict = if any_missing {
        Verdict::DataIncomplete
    } else if any_unresolved {
        Verdict::Obstructed
    } else {
        match classes {
            None => Verdict::ProvenAll,
            Some(c) if c.is_empty() => Verdict::Obstructed,
            Some(c) => Verdict::ProvenCongruenceClasses(c),
        }
    };
    Ok(EliminationReport {
        d,
        levels: reports,
        verdict,
    })
}
