//! Dense univariate polynomials over `F_p`, least significant coefficient first.
//! Only what the irreducibility test needs.

use crate::arith;

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = arith::mod_inv(*m.last().expect("nonzero modulus"), p).unwrap();
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = r.last().unwrap() * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * mi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, m, p)
}

fn powmod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m`.
fn frobenius_power_of_x(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut h = rem(&[0, 1], m, p);
    for _ in 0..k {
        h = powmod(&h, p, m, p);
    }
    h
}

fn minus_x(h: &[u64], p: u64) -> Vec<u64> {
    let mut d = h.to_vec();
    if d.len() < 2 {
        d.resize(2, 0);
    }
    d[1] = (d[1] + p - 1) % p;
    trim(d)
}

/// Rabin's irreducibility test for a monic `f` of degree `n >= 1` over `F_p`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let full = minus_x(&frobenius_power_of_x(n as u32, &f, p), p);
    if !full.is_empty() {
        return false;
    }
    for r in arith::prime_divisors(n as u64) {
        let h = minus_x(&frobenius_power_of_x((n as u64 / r) as u32, &f, p), p);
        if gcd(&f, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has_root(f: &[u64], p: u64) -> bool {
        (0..p).any(|x| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
    }

    #[test]
    fn matches_root_test_for_low_degree() {
        // Degree 2 and 3: irreducible iff no root.
        for p in [3u64, 5, 7] {
            for deg in [2usize, 3] {
                let count = p.pow(deg as u32);
                for idx in 0..count {
                    let mut f: Vec<u64> = (0..deg).map(|i| idx / p.pow(i as u32) % p).collect();
                    f.push(1);
                    assert_eq!(is_irreducible(&f, p), !has_root(&f, p), "{f:?} mod {p}");
                }
            }
        }
    }

    #[test]
    fn quartic_counts() {
        // Number of monic irreducible quartics over F_3 is (3^4 - 3^2) / 4 = 18.
        let p = 3u64;
        let n = (0..81u64)
            .filter(|idx| {
                let mut f: Vec<u64> = (0..4).map(|i| idx / p.pow(i) % p).collect();
                f.push(1);
                is_irreducible(&f, p)
            })
            .count();
        assert_eq!(n, 18);
    }
}
