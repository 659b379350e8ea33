//! Polynomial arithmetic over the prime field F_p, used to realize Galois
//! field extensions. Coefficient vectors are constant-term first.

/// Trims trailing zero coefficients (does not touch the zero polynomial's single 0).
fn trim(mut c: Vec<u64>) -> Vec<u64> {
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
    c
}

pub fn degree(c: &[u64]) -> usize {
    let mut d = c.len();
    while d > 1 && c[d - 1] == 0 {
        d -= 1;
    }
    d - 1
}

pub fn is_zero(c: &[u64]) -> bool {
    c.iter().all(|&x| x == 0)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if is_zero(a) || is_zero(b) {
        return vec![0];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    trim(out)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out = vec![0u64; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
        out[i] = x % p;
    }
    trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert_eq!(*m.last().unwrap(), 1, "modulus must be monic");
    let dm = degree(m);
    let mut r: Vec<u64> = a.to_vec();
    while degree(&r) >= dm && !is_zero(&r) {
        let dr = degree(&r);
        let lead = r[dr];
        // subtract lead * x^(dr-dm) * m
        for (i, &mi) in m.iter().enumerate().take(dm + 1) {
            let idx = dr - dm + i;
            let sub = (lead * mi) % p;
            r[idx] = (r[idx] + p - sub) % p;
        }
        r = trim(r);
        if degree(&r) < dm {
            break;
        }
    }
    trim(r)
}

/// Decodes the integer `idx` as a polynomial in mixed radix p (constant term
/// is the least significant digit), padded to `len` coefficients.
pub fn from_index(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut c = Vec::with_capacity(len);
    for _ in 0..len {
        c.push(idx % p);
        idx /= p;
    }
    c
}

pub fn to_index(c: &[u64], p: u64) -> u64 {
    let mut idx = 0u64;
    for &ci in c.iter().rev() {
        idx = idx * p + ci;
    }
    idx
}

/// Exhaustive irreducibility test: a monic polynomial of degree k >= 1 over F_p
/// is irreducible iff it has no monic factor of degree 1..=k/2. Feasible at the
/// sizes this crate targets.
pub fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let k = degree(poly);
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    for d in 1..=k / 2 {
        // enumerate monic candidates of degree d
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = from_index(low, p, d);
            cand.push(1);
            if is_zero(&rem(poly, &cand, p)) {
                return false;
            }
        }
    }
    true
}

/// The least monic irreducible polynomial of degree k over F_p, where "least"
/// orders polynomials by their index encoding (constant term least
/// significant). Deterministic, so default field constructions are stable.
pub fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for low in 0..count {
        let mut cand = from_index(low, p, k as usize);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("an irreducible polynomial of degree {k} exists over F_{p}")
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power q into (p, k) with q = p^k, if q is one.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut rest = q;
            let mut k = 0;
            while rest % p == 0 {
                rest /= p;
                k += 1;
            }
            return if rest == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_remainder() {
        // x^2 mod (x^2 + x + 1) over F_2 is x + 1
        let m = vec![1, 1, 1];
        let a = vec![0, 0, 1];
        assert_eq!(rem(&a, &m, 2), vec![1, 1]);
    }

    #[test]
    fn deg2_over_f2_has_unique_irreducible() {
        // exhaustive root search over the four monic degree-2 candidates
        let mut found = Vec::new();
        for low in 0..4 {
            let mut cand = from_index(low, 2, 2);
            cand.push(1);
            let has_root = (0..2).any(|x| {
                let mut acc = 0u64;
                for &c in cand.iter().rev() {
                    acc = (acc * x + c) % 2;
                }
                acc == 0
            });
            if !has_root {
                found.push(cand.clone());
            }
            assert_eq!(!has_root, is_irreducible(&cand, 2));
        }
        assert_eq!(found, vec![vec![1, 1, 1]]);
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
    }

    #[test]
    fn least_irreducible_examples() {
        assert_eq!(least_irreducible(3, 1), vec![0, 1]); // x
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]); // x^3 + x + 1
        // x^2 + 1 over F_3 has no root (1, 2 square to 1)
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(13), Some((13, 1)));
    }
}
