//! The projective line over Z/N with canonical representatives.
//!
//! A point (c : d) consists of a pair with gcd(c, d, N) = 1, taken modulo
//! simultaneous scaling by units of Z/N. Canonical form: c is the divisor
//! g = gcd(c, N), and among all pairs (g, d') in the class, d' is minimal.

use std::collections::HashMap;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// P^1(Z/N) with a fixed enumeration of canonical representatives.
pub struct P1 {
    n: u64,
    reps: Vec<(u64, u64)>,
    index: HashMap<(u64, u64), usize>,
}

impl P1 {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1);
        let mut reps = Vec::new();
        let mut index = HashMap::new();
        if n == 1 {
            index.insert((0, 0), 0);
            reps.push((0, 0));
            return P1 { n, reps, index };
        }
        let mut divisors: Vec<u64> = (1..=n).filter(|g| n % g == 0).collect();
        divisors.sort_unstable();
        for &g in &divisors {
            for d in 0..n {
                if gcd(gcd(g, d), n) != 1 {
                    continue;
                }
                let nf = normalize(n, g, d);
                if nf.0 != g % n {
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(nf) {
                    e.insert(reps.len());
                    reps.push(nf);
                }
            }
        }
        P1 { n, reps, index }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn rep(&self, i: usize) -> (u64, u64) {
        self.reps[i]
    }

    /// Index of the class of (c : d). Accepts arbitrary integer inputs.
    pub fn index_of(&self, c: i64, d: i64) -> usize {
        let n = self.n as i64;
        let cu = c.rem_euclid(n) as u64;
        let du = d.rem_euclid(n) as u64;
        let nf = normalize(self.n, cu, du);
        *self
            .index
            .get(&nf)
            .unwrap_or_else(|| panic!("({c} : {d}) is not a point of P1(Z/{})", self.n))
    }
}

/// Canonical representative of the class of (c : d) in P^1(Z/n).
fn normalize(n: u64, c: u64, d: u64) -> (u64, u64) {
    if n == 1 {
        return (0, 0);
    }
    let c = c % n;
    let d = d % n;
    assert_eq!(gcd(gcd(c, n), d), 1, "({c} : {d}) not projective mod {n}");
    if c == 0 {
        return (0, 1);
    }
    let g = gcd(c, n);
    let m = n / g;
    let c1 = c / g;
    let u0 = inv_mod(c1 % m, m).expect("c/g is a unit mod n/g");
    let mut u = u0;
    while gcd(u, n) != 1 {
        u += m;
    }
    let d1 = (u as u128 * d as u128 % n as u128) as u64;
    let mut best = d1;
    let mut v = 1 + m;
    while v < n + 1 {
        if gcd(v % n, n) == 1 {
            let cand = (v as u128 * d1 as u128 % n as u128) as u64;
            if cand < best {
                best = cand;
            }
        }
        v += m;
    }
    (g, best)
}

/// The number of points of P^1(Z/N): N times the product of (1 + 1/p).
pub fn p1_size(n: u64) -> u64 {
    let mut size = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            size = size / p * (p + 1);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        size = size / m * (m + 1);
    }
    size
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_the_index_formula() {
        for n in [1, 2, 3, 11, 12, 37, 60, 85, 121, 169, 407, 1177] {
            let p1 = P1::new(n);
            assert_eq!(p1.len() as u64, p1_size(n), "at level {n}");
        }
    }

    #[test]
    fn index_respects_scaling() {
        let p1 = P1::new(85);
        for i in 0..p1.len() {
            let (c, d) = p1.rep(i);
            for u in 1..85u64 {
                if gcd(u, 85) != 1 {
                    continue;
                }
                let cu = (c * u % 85) as i64;
                let du = (d * u % 85) as i64;
                assert_eq!(p1.index_of(cu, du), i);
            }
        }
    }

    #[test]
    fn negative_inputs_reduce_correctly() {
        let p1 = P1::new(37);
        assert_eq!(p1.index_of(-1, 3), p1.index_of(36, 3));
        assert_eq!(p1.index_of(5, -2), p1.index_of(5, 35));
        assert_eq!(p1.index_of(0, 1), p1.index_of(0, 5));
    }

    #[test]
    fn classes_are_distinct() {
        let p1 = P1::new(37);
        assert_eq!(p1.index_of(1, 0), p1.index_of(2, 0));
        assert_ne!(p1.index_of(1, 0), p1.index_of(0, 1));
        assert_ne!(p1.index_of(1, 3), p1.index_of(1, 4));
    }
}
