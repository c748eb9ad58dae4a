//! Small prime utilities: sieves, u64 primality and factorization, Kronecker
//! symbols, square roots mod p, modular inverses.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Primes up to `bound` (inclusive) by the sieve of Eratosthenes.
pub fn primes_up_to(bound: usize) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let mut is_comp = vec![false; bound + 1];
    let mut out = Vec::new();
    for n in 2..=bound {
        if !is_comp[n] {
            out.push(n as u64);
            let mut m = n * n;
            while m <= bound {
                is_comp[m] = true;
                m += n;
            }
        }
    }
    out
}

/// Deterministic Miller–Rabin for u64 (valid for all 64-bit inputs).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // These witnesses are exact for every n < 2^64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// (a * b) mod m without overflow.
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m.
pub fn pow_mod_u64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, a, m);
        }
        a = mul_mod_u64(a, a, m);
        e >>= 1;
    }
    r
}

/// Factor a u64 into (prime, exponent) pairs by trial division.
///
/// Levels and discriminants in this project are tiny, so trial division is
/// the right tool; the loop still terminates for any 64-bit input.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factor_u64: n must be positive");
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Squarefree divisors of n (including 1).
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let f = factor_u64(n);
    let mut out = vec![1u64];
    for (p, e) in f {
        let prev = out.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            for &d in &prev {
                out.push(d * pe);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Kronecker symbol (a | n), extending the Jacobi symbol to all integers.
pub fn kronecker(mut a: i64, mut n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    let mut k = if v % 2 == 0 {
        1i32
    } else {
        // (a|2) = 0, 1, -1 for a ≡ 0, ±1, ±3 (mod 8)
        match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        }
    };
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    // Now n is positive odd; standard Jacobi iteration.
    loop {
        if k == 0 {
            return 0;
        }
        a = a.rem_euclid(n);
        if a == 0 {
            return if n == 1 { k } else { 0 };
        }
        while a % 2 == 0 {
            a /= 2;
            k *= match n.rem_euclid(8) {
                1 | 7 => 1,
                _ => -1,
            };
        }
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            k = -k;
        }
        std::mem::swap(&mut a, &mut n);
    }
}

/// Square root of a mod p for odd prime p, if one exists.
///
/// Uses Tonelli–Shanks; the primes here are small so the search for a
/// non-residue is immediate.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod_u64(a, (p + 1) / 4, p));
    }
    // Tonelli–Shanks. Write p − 1 = q·2^s with q odd.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(a, q, p);
    let mut r = pow_mod_u64(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod_u64(tt, tt, p);
            i += 1;
        }
        let b = pow_mod_u64(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod_u64(b, b, p);
        t = mul_mod_u64(t, c, p);
        r = mul_mod_u64(r, b, p);
    }
    Some(r)
}

/// Inverse of a modulo m (BigUint), if gcd(a, m) = 1.
pub fn inv_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    use num_bigint::BigInt;
    let a = BigInt::from(a.clone());
    let m_i = BigInt::from(m.clone());
    let e = a.extended_gcd(&m_i);
    if !e.gcd.is_one() {
        return None;
    }
    let x = e.x.mod_floor(&m_i);
    Some(x.to_biguint().expect("mod_floor of positive modulus is non-negative"))
}

/// Inverse of a modulo m (u64), if gcd(a, m) = 1.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// p^e as BigUint.
pub fn pow_big(p: u64, e: u64) -> BigUint {
    BigUint::from(p).pow(e as u32)
}

/// Valuation of n at p and the cofactor: n = p^v · u with p ∤ u.
/// Returns (v, u). n must be nonzero.
pub fn val_and_unit(n: &BigUint, p: u64) -> (i64, BigUint) {
    assert!(!n.is_zero(), "val_and_unit: zero has no finite valuation");
    let pb = BigUint::from(p);
    let mut v = 0i64;
    let mut u = n.clone();
    loop {
        let (q, r) = u.div_rem(&pb);
        if r.is_zero() {
            u = q;
            v += 1;
        } else {
            break;
        }
    }
    (v, u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_and_primality_agree() {
        let sieved = primes_up_to(1000);
        for n in 2..=1000u64 {
            assert_eq!(sieved.contains(&n), is_prime_u64(n), "n = {}", n);
        }
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for &p in &[5i64, 7, 11, 13, 37, 73] {
            for a in 1..p {
                let euler = pow_mod_u64(a as u64, ((p - 1) / 2) as u64, p as u64);
                let expected = if euler == 1 { 1 } else { -1 };
                assert_eq!(kronecker(a, p), expected, "a={}, p={}", a, p);
            }
        }
    }

    #[test]
    fn kronecker_fundamental_discriminants() {
        // χ_{-11}(5) = (−11 | 5): −11 ≡ 4 (mod 5) is a square, so +1.
        assert_eq!(kronecker(-11, 5), 1);
        // χ_{-19}(7): −19 ≡ 2 (mod 7), and 2 = 3² − 7 is a square mod 7.
        assert_eq!(kronecker(-19, 7), 1);
        // χ_{-7}(11): −7 ≡ 4 (mod 11), a square.
        assert_eq!(kronecker(-7, 11), 1);
        // 2 is not a square mod 5.
        assert_eq!(kronecker(2, 5), -1);
    }

    #[test]
    fn sqrt_mod_small_primes() {
        for &p in &[5u64, 7, 11, 13, 17, 1009] {
            for a in 0..p.min(200) {
                match sqrt_mod_p(a, p) {
                    Some(r) => assert_eq!(mul_mod_u64(r, r, p), a % p),
                    None => assert_ne!(pow_mod_u64(a, (p - 1) / 2, p), 1),
                }
            }
        }
    }

    #[test]
    fn factor_roundtrip() {
        for n in 1..2000u64 {
            let f = factor_u64(n);
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn divisors_of_85() {
        assert_eq!(divisors_u64(85), vec![1, 5, 17, 85]);
    }
}
