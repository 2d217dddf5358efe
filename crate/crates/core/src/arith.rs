//! Integer helpers for group orders.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest divisor of `n` whose prime divisors all satisfy `keep`.
pub fn part(mut n: u64, keep: impl Fn(u64) -> bool) -> u64 {
    let mut out = 1;
    for p in prime_divisors(n) {
        while n.is_multiple_of(p) {
            n /= p;
            if keep(p) {
                out *= p;
            }
        }
    }
    out
}

pub fn p_part(n: u64, p: u64) -> u64 {
    part(n, |q| q == p)
}

pub fn is_prime_power(n: u64) -> bool {
    prime_divisors(n).len() == 1
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Multiplicative order of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m < 2 || gcd(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization() {
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(prime_divisors(60), vec![2, 3, 5]);
        assert_eq!(p_part(1680, 2), 16);
        assert_eq!(part(60, |p| p == 2 || p == 3), 12);
        assert!(is_prime(7) && !is_prime(1) && !is_prime(9));
        assert_eq!(multiplicative_order(2, 5), Some(4));
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(2, 4), None);
    }
}
