//! Exact location of real roots of integer polynomials via Sturm chains.
//!
//! Used to certify that a Hecke field is totally real and that every real
//! embedding of an eigenvalue obeys the bound 2 sqrt(norm), without any
//! floating-point arithmetic: interval endpoints of the form +-2 sqrt(n)
//! are handled by exact sign evaluation of a + b sqrt(n).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// An interval endpoint for root counting.
#[derive(Debug, Clone)]
pub enum Bound {
    NegInf,
    PosInf,
    /// sign * 2 * sqrt(n) with n > 0.
    TwoSqrt { sign: i8, n: BigInt },
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn to_rational(poly: &[BigInt]) -> Vec<BigRational> {
    trim(
        poly.iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    )
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    if p.len() <= 1 {
        return Vec::new();
    }
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    while r.len() > db {
        let f = r.last().unwrap() / lead;
        let shift = r.len() - 1 - db;
        for i in 0..=db {
            let t = &f * &b[i];
            r[shift + i] -= t;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b.last().unwrap();
    let mut q = vec![BigRational::zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        let f = r.last().unwrap() / lead;
        let shift = r.len() - 1 - db;
        q[shift] = f.clone();
        for i in 0..=db {
            let t = &f * &b[i];
            r[shift + i] -= t;
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    trim(q)
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn squarefree_part(p: &[BigRational]) -> Vec<BigRational> {
    let d = derivative(p);
    if d.is_empty() {
        return p.to_vec();
    }
    let g = poly_gcd(p, &d);
    if g.len() <= 1 {
        return p.to_vec();
    }
    poly_div_exact(p, &g)
}

fn sturm_chain(p: Vec<BigRational>) -> Vec<Vec<BigRational>> {
    let mut chain = vec![p.clone()];
    let d = derivative(&p);
    if d.is_empty() {
        return chain;
    }
    chain.push(d);
    loop {
        let n = chain.len();
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            return chain;
        }
        chain.push(r.iter().map(|c| -c).collect());
    }
}

fn rational_sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact sign of a + b * sqrt(n) for rational a, b and integer n > 0.
fn surd_sign(a: &BigRational, b: &BigRational, n: &BigInt) -> i8 {
    let sa = rational_sign(a);
    let sb = rational_sign(b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 {
        return sb;
    }
    if sa == sb {
        return sa;
    }
    let lhs = a * a;
    let rhs = b * b * BigRational::from_integer(n.clone());
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => 0,
    }
}

fn sign_at(p: &[BigRational], bound: &Bound) -> i8 {
    if p.is_empty() {
        return 0;
    }
    match bound {
        Bound::PosInf => rational_sign(p.last().unwrap()),
        Bound::NegInf => {
            let s = rational_sign(p.last().unwrap());
            if (p.len() - 1) % 2 == 0 {
                s
            } else {
                -s
            }
        }
        Bound::TwoSqrt { sign, n } => {
            let four_n = BigRational::from_integer(BigInt::from(4) * n);
            let mut even = BigRational::zero();
            let mut odd = BigRational::zero();
            let mut pw = BigRational::from_integer(BigInt::from(1));
            for chunk in p.chunks(2) {
                even += &chunk[0] * &pw;
                if chunk.len() == 2 {
                    odd += &chunk[1] * &pw;
                }
                pw *= &four_n;
            }
            let b = odd * BigRational::from_integer(BigInt::from(2 * *sign as i64));
            surd_sign(&even, &b, n)
        }
    }
}

fn sign_changes(chain: &[Vec<BigRational>], bound: &Bound) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let s = sign_at(p, bound);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots in the half-open interval (lo, hi].
pub fn count_roots(poly: &[BigInt], lo: &Bound, hi: &Bound) -> usize {
    let p = squarefree_part(&to_rational(poly));
    if p.len() <= 1 {
        return 0;
    }
    let chain = sturm_chain(p);
    sign_changes(&chain, lo) - sign_changes(&chain, hi)
}

/// Whether every root of the polynomial is real.
pub fn all_roots_real(poly: &[BigInt]) -> bool {
    let p = squarefree_part(&to_rational(poly));
    if p.len() <= 1 {
        return true;
    }
    let chain = sturm_chain(p.clone());
    let real = sign_changes(&chain, &Bound::NegInf) - sign_changes(&chain, &Bound::PosInf);
    real == p.len() - 1
}

/// Whether every real root x of the polynomial satisfies x^2 <= 4n.
pub fn real_roots_within_two_sqrt(poly: &[BigInt], n: &BigInt) -> bool {
    let p = squarefree_part(&to_rational(poly));
    if p.len() <= 1 {
        return true;
    }
    let chain = sturm_chain(p.clone());
    let hi = Bound::TwoSqrt { sign: 1, n: n.clone() };
    let lo = Bound::TwoSqrt { sign: -1, n: n.clone() };
    let above = sign_changes(&chain, &hi) - sign_changes(&chain, &Bound::PosInf);
    if above > 0 {
        return false;
    }
    let mut left_tail = sign_changes(&chain, &Bound::NegInf) - sign_changes(&chain, &lo);
    if sign_at(&p, &lo) == 0 {
        left_tail -= 1;
    }
    left_tail == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn poly(cs: &[i64]) -> Vec<BigInt> {
        cs.iter().map(|&c| bi(c)).collect()
    }

    #[test]
    fn counts_real_roots() {
        assert!(all_roots_real(&poly(&[-2, 0, 1])));
        assert!(!all_roots_real(&poly(&[1, 0, 1])));
        assert!(!all_roots_real(&poly(&[-2, 0, 0, 1])));
        assert!(all_roots_real(&poly(&[3, -5, 1, 1])));
    }

    #[test]
    fn squarefree_input_not_required() {
        let squared = poly(&[9, -12, -2, 4, 1]);
        assert!(all_roots_real(&squared));
        let repeated = poly(&[1, 2, 1]);
        assert!(all_roots_real(&repeated));
        assert_eq!(
            count_roots(&repeated, &Bound::NegInf, &Bound::PosInf),
            1
        );
    }

    #[test]
    fn interval_counts() {
        let p = poly(&[0, -1, 0, 1]);
        assert_eq!(count_roots(&p, &Bound::NegInf, &Bound::PosInf), 3);
        let hi = Bound::TwoSqrt { sign: 1, n: bi(1) };
        let lo = Bound::TwoSqrt { sign: -1, n: bi(1) };
        assert_eq!(count_roots(&p, &lo, &hi), 3);
    }

    #[test]
    fn hecke_bound_checks() {
        assert!(real_roots_within_two_sqrt(&poly(&[-2, 0, 1]), &bi(1)));
        assert!(!real_roots_within_two_sqrt(&poly(&[-5, 0, 1]), &bi(1)));
        assert!(real_roots_within_two_sqrt(&poly(&[-4, 0, 1]), &bi(1)));
        assert!(real_roots_within_two_sqrt(&poly(&[4, 0, 1]), &bi(1)));
        assert!(!real_roots_within_two_sqrt(&poly(&[6, 5, 1]), &bi(1)));
        assert!(real_roots_within_two_sqrt(&poly(&[-11, 0, 1]), &bi(3)));
        assert!(!real_roots_within_two_sqrt(&poly(&[-13, 0, 1]), &bi(3)));
    }
}
