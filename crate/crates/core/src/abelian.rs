//! Integer row lattices, Smith normal form, and finitely generated abelian
//! groups presented by concrete generator sets.
//!
//! The central entry point is [`group_from_generators`]: given generators of
//! a finite abelian group (as opaque values plus a multiplication closure),
//! it enumerates the group, accumulates the complete relation lattice of the
//! generators, and returns the elementary divisor decomposition together
//! with a discrete logarithm map.  Completeness of the relation lattice
//! follows from a telescoping argument: every vanishing exponent vector is a
//! sum of the recorded edge relations along the corresponding walk.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, VecDeque};

/// Incrementally reduced row lattice with at most one row per pivot column.
#[derive(Debug, Clone)]
pub struct RelLattice {
    ncols: usize,
    rows: Vec<Option<Vec<BigInt>>>,
}

impl RelLattice {
    pub fn new(ncols: usize) -> Self {
        RelLattice {
            ncols,
            rows: vec![None; ncols],
        }
    }

    /// Inserts a row, reducing it against the current echelon rows.
    pub fn insert(&mut self, mut row: Vec<BigInt>) {
        assert_eq!(row.len(), self.ncols);
        for c in 0..self.ncols {
            if row[c].is_zero() {
                continue;
            }
            match &mut self.rows[c] {
                slot @ None => {
                    if row[c].is_negative() {
                        for v in row.iter_mut() {
                            *v = -&*v;
                        }
                    }
                    *slot = Some(row);
                    return;
                }
                Some(pivot) => {
                    if (&row[c] % &pivot[c]).is_zero() {
                        let q = &row[c] / &pivot[c];
                        for (rv, pv) in row.iter_mut().zip(pivot.iter()) {
                            *rv -= &q * pv;
                        }
                    } else {
                        let eg = pivot[c].extended_gcd(&row[c]);
                        let pc_g = &pivot[c] / &eg.gcd;
                        let rc_g = &row[c] / &eg.gcd;
                        let mut new_pivot = Vec::with_capacity(self.ncols);
                        let mut new_row = Vec::with_capacity(self.ncols);
                        for (pv, rv) in pivot.iter().zip(row.iter()) {
                            new_pivot.push(&eg.x * pv + &eg.y * rv);
                            new_row.push(&pc_g * rv - &rc_g * pv);
                        }
                        *pivot = new_pivot;
                        row = new_row;
                    }
                }
            }
        }
    }

    /// True when every pivot column is occupied, i.e. the quotient is finite.
    pub fn is_full_rank(&self) -> bool {
        self.rows.iter().all(|r| r.is_some())
    }

    /// The square Hermite normal form matrix, with entries above each pivot
    /// reduced into [0, pivot).  Errors when the lattice has deficient rank.
    pub fn into_hnf(self) -> Result<Vec<Vec<BigInt>>> {
        if !self.is_full_rank() {
            return Err(Error::Invalid(
                "relation lattice is not of full rank; the group is infinite".into(),
            ));
        }
        let mut rows: Vec<Vec<BigInt>> = self.rows.into_iter().map(Option::unwrap).collect();
        for c in 0..rows.len() {
            let pivot = rows[c].clone();
            for (j, row) in rows.iter_mut().enumerate() {
                if j < c && !row[c].is_zero() {
                    let q = row[c].div_floor(&pivot[c]);
                    if !q.is_zero() {
                        for (rv, pv) in row.iter_mut().zip(pivot.iter()) {
                            *rv -= &q * pv;
                        }
                    }
                }
            }
        }
        Ok(rows)
    }
}

/// Row Hermite normal form of an arbitrary integral matrix; returns the
/// nonzero echelon rows with positive pivots and reduced entries above them.
pub fn row_hnf(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = match rows.first() {
        Some(r) => r.len(),
        None => return Vec::new(),
    };
    let mut work = rows;
    let mut echelon: Vec<Vec<BigInt>> = Vec::new();
    for c in 0..ncols {
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for row in work {
            if row[c].is_zero() {
                if row.iter().any(|v| !v.is_zero()) {
                    rest.push(row);
                }
                continue;
            }
            pivot = Some(match pivot {
                None => row,
                Some(p) => {
                    let eg = p[c].extended_gcd(&row[c]);
                    let pc_g = &p[c] / &eg.gcd;
                    let rc_g = &row[c] / &eg.gcd;
                    let mut new_pivot = Vec::with_capacity(ncols);
                    let mut new_rest = Vec::with_capacity(ncols);
                    for (pv, rv) in p.iter().zip(row.iter()) {
                        new_pivot.push(&eg.x * pv + &eg.y * rv);
                        new_rest.push(&pc_g * rv - &rc_g * pv);
                    }
                    if new_rest.iter().any(|v| !v.is_zero()) {
                        rest.push(new_rest);
                    }
                    new_pivot
                }
            });
        }
        if let Some(mut p) = pivot {
            if p[c].is_negative() {
                for v in p.iter_mut() {
                    *v = -&*v;
                }
            }
            echelon.push(p);
        }
        work = rest;
    }
    let snapshot = echelon.clone();
    for (i, row) in echelon.iter_mut().enumerate() {
        for (j, other) in snapshot.iter().enumerate() {
            if j <= i {
                continue;
            }
            let c = other.iter().position(|v| !v.is_zero()).unwrap();
            if !row[c].is_zero() {
                let q = row[c].div_floor(&other[c]);
                if !q.is_zero() {
                    for (rv, ov) in row.iter_mut().zip(other.iter()) {
                        *rv -= &q * ov;
                    }
                }
            }
        }
    }
    echelon
}

/// Index of the row lattice in Z^n when the HNF is square of full rank.
pub fn lattice_index(hnf: &[Vec<BigInt>]) -> Option<BigInt> {
    let n = hnf.first()?.len();
    if hnf.len() != n {
        return None;
    }
    let mut det = BigInt::one();
    for (i, row) in hnf.iter().enumerate() {
        if row[i].is_zero() {
            return None;
        }
        det *= &row[i];
    }
    Some(det.abs())
}

/// Smith normal form together with the right transform and its inverse:
/// there is a unimodular U with U * A * V diagonal, and the diagonal entries
/// form a divisibility chain.  Row operations are not tracked.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub divisors: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
    pub vinv: Vec<Vec<BigInt>>,
}

pub fn snf(mut a: Vec<Vec<BigInt>>) -> SnfDecomposition {
    let m = a.len();
    assert!(a.iter().all(|r| r.len() == m), "snf expects a square matrix");
    let mut v = identity(m);
    let mut vinv = identity(m);
    for t in 0..m {
        loop {
            let Some((r, c)) = min_abs_position(&a, t) else {
                break;
            };
            if r != t {
                a.swap(t, r);
            }
            if c != t {
                swap_cols(&mut a, t, c);
                swap_cols(&mut v, t, c);
                vinv.swap(t, c);
            }
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    if !q.is_zero() {
                        let pivot_row = a[t].clone();
                        for (rv, pv) in a[i].iter_mut().zip(pivot_row.iter()) {
                            *rv -= &q * pv;
                        }
                    }
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            for j in t + 1..m {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    if !q.is_zero() {
                        col_submul(&mut a, j, t, &q);
                        col_submul(&mut v, j, t, &q);
                        row_addmul(&mut vinv, t, j, &q);
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            let mut bad_row = None;
            'scan: for i in t + 1..m {
                for j in t + 1..m {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        bad_row = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    let other = a[i].clone();
                    for (tv, ov) in a[t].iter_mut().zip(other.iter()) {
                        *tv += ov;
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            negate_col(&mut a, t);
            negate_col(&mut v, t);
            for x in vinv[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    let divisors: Vec<BigInt> = (0..m).map(|i| a[i][i].clone()).collect();
    for w in divisors.windows(2) {
        if !w[0].is_zero() {
            assert!((&w[1] % &w[0]).is_zero(), "divisor chain violated");
        }
    }
    let prod = mat_mul(&v, &vinv);
    assert_eq!(prod, identity(m), "transform bookkeeping broke");
    SnfDecomposition { divisors, v, vinv }
}

fn identity(m: usize) -> Vec<Vec<BigInt>> {
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = a.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn min_abs_position(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let m = a.len();
    let mut best: Option<(usize, usize)> = None;
    for i in t..m {
        for j in t..m {
            if a[i][j].is_zero() {
                continue;
            }
            best = match best {
                Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => best,
                _ => Some((i, j)),
            };
        }
    }
    best
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn negate_col(a: &mut [Vec<BigInt>], j: usize) {
    for row in a.iter_mut() {
        row[j] = -&row[j];
    }
}

/// col_j -= q * col_t.
fn col_submul(a: &mut [Vec<BigInt>], j: usize, t: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let delta = q * &row[t];
        row[j] -= delta;
    }
}

/// row_t += q * row_j (the inverse bookkeeping of [`col_submul`]).
fn row_addmul(a: &mut [Vec<BigInt>], t: usize, j: usize, q: &BigInt) {
    let source = a[j].clone();
    for (tv, sv) in a[t].iter_mut().zip(source.iter()) {
        *tv += q * sv;
    }
}

/// A finite abelian group in elementary divisor form: a direct sum of
/// Z/d_i with 2 <= d_1 | d_2 | ... Elements are coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinAbGroup {
    divisors: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn new(divisors: Vec<BigInt>) -> Result<Self> {
        for w in divisors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(Error::Invalid(format!(
                    "elementary divisors must form a chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if divisors.iter().any(|d| d < &BigInt::from(2)) {
            return Err(Error::Invalid(
                "elementary divisors must all be at least 2".into(),
            ));
        }
        Ok(FinAbGroup { divisors })
    }

    pub fn trivial() -> Self {
        FinAbGroup {
            divisors: Vec::new(),
        }
    }

    pub fn invariants(&self) -> &[BigInt] {
        &self.divisors
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.divisors.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.divisors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.divisors.len()]
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        v.iter()
            .zip(&self.divisors)
            .map(|(x, d)| x.mod_floor(d))
            .collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let sum: Vec<BigInt> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        self.reduce(&sum)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let n: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&n)
    }

    pub fn mul_scalar(&self, a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
        let m: Vec<BigInt> = a.iter().map(|x| x * k).collect();
        self.reduce(&m)
    }

    pub fn is_zero_elem(&self, a: &[BigInt]) -> bool {
        self.reduce(a).iter().all(|x| x.is_zero())
    }

    /// Order of an element: lcm of d_i / gcd(d_i, a_i).
    pub fn element_order(&self, a: &[BigInt]) -> BigInt {
        let mut ord = BigInt::one();
        for (x, d) in self.reduce(a).iter().zip(&self.divisors) {
            let g = x.gcd(d);
            ord = ord.lcm(&(d / &g));
        }
        ord
    }

    /// Every element, in lexicographic coordinate order.
    pub fn elements(&self, cap: u64) -> Result<Vec<Vec<BigInt>>> {
        let order = self.order();
        if order > BigInt::from(cap) {
            return Err(Error::Capacity {
                op: "FinAbGroup::elements",
                detail: format!("group order {} exceeds cap {}", order, cap),
            });
        }
        let mut out = vec![self.zero()];
        for (i, d) in self.divisors.iter().enumerate() {
            let mut next = Vec::new();
            let mut k = BigInt::zero();
            while &k < d {
                for e in &out {
                    let mut e2 = e.clone();
                    e2[i] = k.clone();
                    next.push(e2);
                }
                k += 1;
            }
            out = next;
        }
        out.sort();
        Ok(out)
    }

    /// Order of the subgroup generated by the given elements.
    pub fn subgroup_order(&self, gens: &[Vec<BigInt>], cap: u64) -> Result<BigInt> {
        let mut seen = std::collections::BTreeSet::new();
        seen.insert(self.zero());
        let mut queue = VecDeque::new();
        queue.push_back(self.zero());
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(Error::Capacity {
                            op: "FinAbGroup::subgroup_order",
                            detail: format!("subgroup exceeded cap {}", cap),
                        });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(BigInt::from(seen.len()))
    }
}

/// A finite abelian group presented by concrete generators, with a full
/// discrete logarithm table in elementary divisor coordinates.
#[derive(Debug, Clone)]
pub struct GroupPresentation<T> {
    pub group: FinAbGroup,
    /// Discrete logarithm of every group element.
    pub dlogs: BTreeMap<T, Vec<BigInt>>,
    /// Discrete logarithm of each input generator.
    pub gen_dlogs: Vec<Vec<BigInt>>,
    /// Each elementary divisor basis element expressed as an exponent vector
    /// in the input generators.
    pub basis_exprs: Vec<Vec<BigInt>>,
}

impl<T: Ord> GroupPresentation<T> {
    pub fn dlog(&self, x: &T) -> Option<&Vec<BigInt>> {
        self.dlogs.get(x)
    }
}

/// Enumerates the group generated by `gens` under `mul` and returns its
/// elementary divisor presentation.  `identity` must be the neutral element
/// and the closure must be total on the generated set; enumeration is capped
/// at `cap` elements.
pub fn group_from_generators<T, F>(
    identity: T,
    gens: Vec<T>,
    mul: F,
    cap: u64,
) -> Result<GroupPresentation<T>>
where
    T: Ord + Clone,
    F: Fn(&T, &T) -> T,
{
    let m = gens.len();
    let mut reps: BTreeMap<T, Vec<BigInt>> = BTreeMap::new();
    reps.insert(identity.clone(), vec![BigInt::zero(); m]);
    let mut queue = VecDeque::new();
    queue.push_back(identity);
    let mut lattice = RelLattice::new(m);
    while let Some(x) = queue.pop_front() {
        let rx = reps.get(&x).unwrap().clone();
        for (i, g) in gens.iter().enumerate() {
            let y = mul(&x, g);
            let mut step = rx.clone();
            step[i] += 1;
            match reps.get(&y) {
                None => {
                    if reps.len() as u64 >= cap {
                        return Err(Error::Capacity {
                            op: "group_from_generators",
                            detail: format!("enumeration exceeded cap {}", cap),
                        });
                    }
                    reps.insert(y.clone(), step);
                    queue.push_back(y);
                }
                Some(ry) => {
                    let rel: Vec<BigInt> =
                        step.iter().zip(ry.iter()).map(|(a, b)| a - b).collect();
                    if rel.iter().any(|v| !v.is_zero()) {
                        lattice.insert(rel);
                    }
                }
            }
        }
    }
    let hnf = lattice.into_hnf()?;
    let decomposition = snf(hnf);
    let keep: Vec<usize> = decomposition
        .divisors
        .iter()
        .enumerate()
        .filter(|(_, d)| *d > &BigInt::one())
        .map(|(i, _)| i)
        .collect();
    let divisors: Vec<BigInt> = keep
        .iter()
        .map(|&i| decomposition.divisors[i].clone())
        .collect();
    let group = FinAbGroup::new(divisors)?;
    let project = |exps: &[BigInt]| -> Vec<BigInt> {
        let full: Vec<BigInt> = (0..m)
            .map(|j| (0..m).map(|k| &exps[k] * &decomposition.v[k][j]).sum())
            .collect();
        group.reduce(&keep.iter().map(|&i| full[i].clone()).collect::<Vec<_>>())
    };
    let dlogs: BTreeMap<T, Vec<BigInt>> = reps
        .iter()
        .map(|(x, r)| (x.clone(), project(r)))
        .collect();
    if BigInt::from(dlogs.len()) != group.order() {
        return Err(Error::Invalid(format!(
            "presentation inconsistency: enumerated {} elements but invariants give order {}",
            dlogs.len(),
            group.order()
        )));
    }
    let gen_dlogs: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let mut e = vec![BigInt::zero(); m];
            e[i] = BigInt::one();
            project(&e)
        })
        .collect();
    let basis_exprs: Vec<Vec<BigInt>> = keep
        .iter()
        .map(|&i| decomposition.vinv[i].clone())
        .collect();
    Ok(GroupPresentation {
        group,
        dlogs,
        gen_dlogs,
        basis_exprs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| bi(v)).collect())
            .collect()
    }

    #[test]
    fn row_hnf_known_lattice() {
        let h = row_hnf(mat(&[&[4, 0], &[1, 1]]));
        assert_eq!(h, mat(&[&[1, 1], &[0, 4]]));
        assert_eq!(lattice_index(&h), Some(bi(4)));
    }

    #[test]
    fn row_hnf_discards_dependent_rows() {
        let h = row_hnf(mat(&[&[2, 4], &[4, 8], &[6, 12]]));
        assert_eq!(h, mat(&[&[2, 4]]));
        assert_eq!(lattice_index(&h), None);
    }

    #[test]
    fn row_hnf_negative_and_permuted() {
        let h = row_hnf(mat(&[&[0, -3], &[-5, 1]]));
        assert_eq!(h, mat(&[&[5, 2], &[0, 3]]));
        assert_eq!(lattice_index(&h), Some(bi(15)));
    }

    #[test]
    fn rel_lattice_matches_batch_hnf() {
        let rows = [
            [3i64, 1, -2],
            [0, 4, 4],
            [6, 2, -4],
            [1, 1, 1],
            [0, 0, 12],
        ];
        let mut lat = RelLattice::new(3);
        for r in rows {
            lat.insert(r.iter().map(|&v| bi(v)).collect());
        }
        let inc = lat.into_hnf().unwrap();
        let batch = row_hnf(rows.iter().map(|r| r.iter().map(|&v| bi(v)).collect()).collect());
        assert_eq!(inc, batch);
    }

    #[test]
    fn snf_diagonal_examples() {
        let s = snf(mat(&[&[2, 0], &[0, 4]]));
        assert_eq!(s.divisors, vec![bi(2), bi(4)]);
        let s = snf(mat(&[&[4, 0], &[0, 6]]));
        assert_eq!(s.divisors, vec![bi(2), bi(12)]);
        let s = snf(mat(&[&[1, 0], &[0, 6]]));
        assert_eq!(s.divisors, vec![bi(1), bi(6)]);
        let s = snf(mat(&[&[2, 1], &[0, 3]]));
        assert_eq!(s.divisors, vec![bi(1), bi(6)]);
    }

    #[test]
    fn snf_preserves_index() {
        let a = mat(&[&[6, 4, 2], &[0, 5, 1], &[0, 0, 7]]);
        let s = snf(a);
        let prod: BigInt = s.divisors.iter().product();
        assert_eq!(prod, bi(6 * 5 * 7));
    }

    #[test]
    fn group_single_cyclic() {
        let p = group_from_generators(0u8, vec![1u8], |a, b| (a + b) % 6, 100).unwrap();
        assert_eq!(p.group.invariants(), &[bi(6)]);
        assert_eq!(p.dlogs.len(), 6);
        assert_eq!(p.gen_dlogs, vec![vec![bi(1)]]);
        assert_eq!(p.dlog(&4u8), Some(&vec![bi(4)]));
    }

    #[test]
    fn group_subgroup_of_cyclic() {
        let p = group_from_generators(0u8, vec![2u8], |a, b| (a + b) % 6, 100).unwrap();
        assert_eq!(p.group.invariants(), &[bi(3)]);
        assert_eq!(p.dlogs.len(), 3);
    }

    #[test]
    fn group_klein_four() {
        let mul = |a: &(u8, u8), b: &(u8, u8)| ((a.0 + b.0) % 2, (a.1 + b.1) % 2);
        let p = group_from_generators((0, 0), vec![(1, 0), (0, 1)], mul, 100).unwrap();
        assert_eq!(p.group.invariants(), &[bi(2), bi(2)]);
        assert_eq!(p.dlogs.len(), 4);
    }

    #[test]
    fn group_z4_times_z6_normalizes_to_z2_times_z12() {
        let mul = |a: &(u8, u8), b: &(u8, u8)| ((a.0 + b.0) % 4, (a.1 + b.1) % 6);
        let p = group_from_generators((0, 0), vec![(1, 0), (0, 1)], mul, 100).unwrap();
        assert_eq!(p.group.invariants(), &[bi(2), bi(12)]);
        assert_eq!(p.dlogs.len(), 24);
    }

    #[test]
    fn group_redundant_generators() {
        let p = group_from_generators(0u16, vec![3u16, 5, 60], |a, b| (a + b) % 105, 1000).unwrap();
        assert_eq!(p.group.invariants(), &[bi(105)]);
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        let mul = |a: &(u8, u8), b: &(u8, u8)| ((a.0 + b.0) % 4, (a.1 + b.1) % 6);
        let p = group_from_generators((0, 0), vec![(1, 0), (1, 1), (3, 5)], mul, 100).unwrap();
        let keys: Vec<(u8, u8)> = p.dlogs.keys().cloned().collect();
        for a in &keys {
            for b in &keys {
                let prod = mul(a, b);
                let expect = p.group.add(p.dlog(a).unwrap(), p.dlog(b).unwrap());
                assert_eq!(p.dlog(&prod), Some(&expect));
            }
        }
    }

    #[test]
    fn basis_exprs_reconstruct_divisor_basis() {
        let mul = |a: &(u8, u8), b: &(u8, u8)| ((a.0 + b.0) % 4, (a.1 + b.1) % 6);
        let gens = vec![(1u8, 0u8), (1, 1), (3, 5)];
        let p = group_from_generators((0, 0), gens.clone(), mul, 100).unwrap();
        let pow = |g: &(u8, u8), k: &BigInt| -> (u8, u8) {
            let kk = k.mod_floor(&bi(12));
            let mut acc = (0u8, 0u8);
            let mut n = BigInt::zero();
            while n < kk {
                acc = mul(&acc, g);
                n += 1;
            }
            acc
        };
        for (j, expr) in p.basis_exprs.iter().enumerate() {
            let mut f = (0u8, 0u8);
            for (g, e) in gens.iter().zip(expr.iter()) {
                f = mul(&f, &pow(g, e));
            }
            let dl = p.dlog(&f).unwrap();
            for (i, c) in dl.iter().enumerate() {
                let expect = if i == j { bi(1) } else { bi(0) };
                assert_eq!(c, &expect);
            }
        }
    }

    #[test]
    fn group_capacity_guard() {
        let r = group_from_generators(0u32, vec![1u32], |a, b| (a + b) % 10_000, 100);
        assert!(matches!(r, Err(Error::Capacity { .. })));
    }

    #[test]
    fn fin_ab_group_basics() {
        let g = FinAbGroup::new(vec![bi(2), bi(4)]).unwrap();
        assert_eq!(g.order(), bi(8));
        assert_eq!(g.exponent(), bi(4));
        assert_eq!(g.element_order(&[bi(1), bi(2)]), bi(2));
        assert_eq!(g.element_order(&[bi(0), bi(1)]), bi(4));
        assert_eq!(g.elements(100).unwrap().len(), 8);
        assert_eq!(
            g.subgroup_order(&[vec![bi(0), bi(2)], vec![bi(1), bi(0)]], 100)
                .unwrap(),
            bi(4)
        );
        assert!(FinAbGroup::new(vec![bi(2), bi(3)]).is_err());
        assert!(FinAbGroup::new(vec![bi(1)]).is_err());
        assert!(FinAbGroup::trivial().is_trivial());
        assert_eq!(FinAbGroup::trivial().order(), bi(1));
        assert_eq!(FinAbGroup::trivial().exponent(), bi(1));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;
        use proptest::test_runner::RngSeed;

        proptest! {
            #![proptest_config(ProptestConfig {
                rng_seed: RngSeed::Fixed(0xabe_11a9),
                ..ProptestConfig::default()
            })]
            #[test]
            fn snf_index_matches_hnf_index(
                entries in proptest::collection::vec(-9i64..=9, 9),
                diag in proptest::collection::vec(1i64..=6, 3),
            ) {
                let mut rows: Vec<Vec<BigInt>> = entries
                    .chunks(3)
                    .map(|c| c.iter().map(|&v| bi(v)).collect())
                    .collect();
                for (i, d) in diag.iter().enumerate() {
                    let mut r = vec![BigInt::zero(); 3];
                    r[i] = bi(d * 12);
                    rows.push(r);
                }
                let h = row_hnf(rows);
                prop_assume!(h.len() == 3);
                let idx = lattice_index(&h).unwrap();
                let s = snf(h);
                let prod: BigInt = s.divisors.iter().product();
                prop_assert_eq!(prod, idx);
                for w in s.divisors.windows(2) {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                }
            }
        }
    }
}
