//! Number-theoretic transform over word-size prime fields.
//!
//! Used for the repeated squarings that expand the eta-power series. Primes
//! are found at runtime by a deterministic downward search from 2^62 among
//! candidates `a * 2^s + 1`, so every build sees the same moduli.

/// `a * b mod p` through 128-bit intermediate.
#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `a^e mod p`.
pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Modular inverse of `a` modulo prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    // This witness set decides primality for every n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

/// Distinct prime factors by trial division (n fits the sizes used here).
fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// Smallest primitive root modulo prime `p`.
fn primitive_root(p: u64) -> u64 {
    let factors = distinct_prime_factors(p - 1);
    'g: for g in 2..p {
        for &q in &factors {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("prime fields always have a generator")
}

/// An NTT modulus together with a generator of its multiplicative group.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NttField {
    pub p: u64,
    pub generator: u64,
}

/// Finds `count` primes `p = a * 2^two_adicity + 1` descending from 2^62.
pub(crate) fn find_ntt_fields(count: usize, two_adicity: u32) -> Vec<NttField> {
    let mut fields = Vec::with_capacity(count);
    let mut a = ((1u64 << 62) - 1) >> two_adicity;
    while fields.len() < count {
        let p = (a << two_adicity) | 1;
        if is_prime_u64(p) {
            fields.push(NttField {
                p,
                generator: primitive_root(p),
            });
        }
        a -= 1;
    }
    fields
}

fn bit_reverse_permute(a: &mut [u64]) {
    let n = a.len();
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
}

/// In-place radix-2 transform; `root` must be a primitive `a.len()`-th root.
fn transform(a: &mut [u64], p: u64, root: u64) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    bit_reverse_permute(a);
    let mut len = 2usize;
    while len <= n {
        let wlen = pow_mod(root, (n / len) as u64, p);
        for block in a.chunks_exact_mut(len) {
            let (lo, hi) = block.split_at_mut(len / 2);
            let mut w = 1u64;
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let u = *x;
                let v = mul_mod(*y, w, p);
                *x = u + v - if u + v >= p { p } else { 0 };
                *y = u + p - v - if u >= v { p } else { 0 };
                w = mul_mod(w, wlen, p);
            }
        }
        len <<= 1;
    }
}

/// Squares the polynomial `a` in `F_p[x]`, returning the first `keep`
/// coefficients of the result.
pub(crate) fn square_truncated(a: &[u64], keep: usize, field: NttField) -> Vec<u64> {
    let NttField { p, generator } = field;
    let n = (2 * a.len()).next_power_of_two().max(2);
    debug_assert!((p - 1) % n as u64 == 0, "field lacks required 2-adicity");
    let root = pow_mod(generator, (p - 1) / n as u64, p);
    let mut buf = vec![0u64; n];
    buf[..a.len()].copy_from_slice(a);
    transform(&mut buf, p, root);
    for v in buf.iter_mut() {
        *v = mul_mod(*v, *v, p);
    }
    let root_inv = inv_mod(root, p);
    transform(&mut buf, p, root_inv);
    let n_inv = inv_mod(n as u64, p);
    buf.truncate(keep);
    for v in buf.iter_mut() {
        *v = mul_mod(*v, n_inv, p);
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_small() {
        let primes: Vec<u64> = (2..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime_u64(18446744069414584321)); // 2^64 - 2^32 + 1
        assert!(!is_prime_u64(18446744069414584320));
    }

    #[test]
    fn fields_have_requested_adicity() {
        for f in find_ntt_fields(4, 21) {
            assert!(is_prime_u64(f.p));
            assert_eq!((f.p - 1) % (1 << 21), 0);
            assert!(f.p < (1 << 62));
            // generator really generates: g^((p-1)/2) must be -1
            assert_eq!(pow_mod(f.generator, (f.p - 1) / 2, f.p), f.p - 1);
        }
    }

    #[test]
    fn squaring_matches_schoolbook() {
        let field = find_ntt_fields(1, 8)[0];
        let a: Vec<u64> = vec![3, 0, field.p - 2, 7, 1, 9];
        let keep = 11;
        let mut want = vec![0u64; keep];
        for i in 0..a.len() {
            for j in 0..a.len() {
                if i + j < keep {
                    want[i + j] = (want[i + j] + mul_mod(a[i], a[j], field.p)) % field.p;
                }
            }
        }
        assert_eq!(square_truncated(&a, keep, field), want);
    }
}
