//! Small-integer number theory by trial division.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(prime, multiplicity)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(r, _)| r).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (r, _)| acc / r * (r - 1))
}

/// All positive divisors of `n`, sorted.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (r, k) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= r;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub fn mod_inv(a: u64, modulus: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % modulus as i128, modulus as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(modulus as i128) as u64)
}

/// Whether `n` is `p^k` for some `k >= 1`.
pub fn is_power_of(n: u64, p: u64) -> bool {
    if n < p {
        return false;
    }
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Multiplicative order of an element in a group of exponent dividing
/// `group_order`, given a `pow` oracle and an identity test.
pub fn element_order<T>(
    x: &T,
    group_order: u64,
    pow: impl Fn(&T, u64) -> T,
    is_one: impl Fn(&T) -> bool,
) -> u64 {
    let mut order = group_order;
    for (r, _) in factorize(group_order) {
        while order.is_multiple_of(r) && is_one(&pow(x, order / r)) {
            order /= r;
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_and_phi() {
        assert_eq!(factorize(72), vec![(2, 3), (3, 2)]);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(24), 8);
        assert_eq!(euler_phi(26), 12);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(3) && is_prime(5) && is_prime(7919));
        assert!(!is_prime(1) && !is_prime(9));
        assert!(is_power_of(9, 3) && is_power_of(3, 3));
        assert!(!is_power_of(1, 3) && !is_power_of(6, 3));
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inv(2, 9), Some(5));
        assert_eq!(mod_inv(3, 9), None);
        assert_eq!(mod_pow(2, 6, 9), 1);
    }

    #[test]
    fn orders_mod_27() {
        let ord = element_order(&2u64, 18, |x, k| mod_pow(*x, k, 27), |x| *x == 1);
        assert_eq!(ord, 18);
        let ord = element_order(&26u64, 18, |x, k| mod_pow(*x, k, 27), |x| *x == 1);
        assert_eq!(ord, 2);
    }
}
