//! Prime table shared by the exponent-vector encoding of (N, x).

use std::sync::OnceLock;

/// Number of primes kept in the table. Exponent vectors address primes by
/// 1-based index into this table.
pub const PRIME_TABLE_LEN: usize = 10_000;

static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();

/// The first [`PRIME_TABLE_LEN`] primes, ascending (`primes()[0] == 2`).
pub fn primes() -> &'static [u64] {
    PRIMES.get_or_init(|| {
        // p_10000 = 104729
        let limit = 104_730usize;
        let mut composite = vec![false; limit];
        let mut out = Vec::with_capacity(PRIME_TABLE_LEN);
        for i in 2..limit {
            if !composite[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j < limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out.truncate(PRIME_TABLE_LEN);
        out
    })
}

/// The prime with 1-based index `i` (`nth_prime(1) == 2`).
pub fn nth_prime(i: usize) -> Option<u64> {
    if i == 0 {
        return None;
    }
    primes().get(i - 1).copied()
}

/// 1-based index of `p` in the table, if `p` is a tabulated prime.
pub fn prime_index(p: u64) -> Option<usize> {
    primes().binary_search(&p).ok().map(|i| i + 1)
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime strictly greater than `k`.
pub fn next_prime_after(k: u64) -> u64 {
    let mut c = k + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Factorization into (prime, exponent) pairs, ascending by prime.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for &p in primes() {
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let last = *primes().last().unwrap();
        if n <= last * last || is_prime(n) {
            out.push((n, 1));
        } else {
            // Cofactor above the table squared and composite: split it.
            let mut rest = pollard_split(n);
            rest.sort_unstable();
            for p in rest {
                match out.last_mut() {
                    Some((q, e)) if *q == p => *e += 1,
                    _ => out.push((p, 1)),
                }
            }
            out.sort_unstable();
        }
    }
    out
}

fn pollard_split(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![];
    }
    if is_prime(n) {
        return vec![n];
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = num_integer::gcd(x.abs_diff(y), n);
        }
        if d != n {
            let mut a = pollard_split(d);
            a.extend(pollard_split(n / d));
            return a;
        }
        c += 1;
    }
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_endpoints() {
        assert_eq!(primes()[0], 2);
        assert_eq!(primes().len(), PRIME_TABLE_LEN);
        assert_eq!(nth_prime(10_000), Some(104_729));
        assert_eq!(prime_index(7), Some(4));
    }

    #[test]
    fn factor_and_divisors() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(24), vec![1, 2, 3, 4, 6, 8, 12, 24]);
        let big = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factorize(big), vec![(998_244_353, 1), (1_000_000_007, 1)]);
    }

    #[test]
    fn next_prime() {
        assert_eq!(next_prime_after(1), 2);
        assert_eq!(next_prime_after(2), 3);
        assert_eq!(next_prime_after(4), 5);
        assert_eq!(next_prime_after(5), 7);
    }
}
