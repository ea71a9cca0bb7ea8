//! Classical reference arithmetic; the testing oracle for the circuit builders.

pub fn bit_length(n: u64) -> usize {
    (u64::BITS - n.leading_zeros()) as usize
}

/// Smallest `w` with `2^w ≥ n` (0 for `n ≤ 1`).
pub fn ceil_log2(n: u64) -> usize {
    if n <= 1 {
        0
    } else {
        bit_length(n - 1)
    }
}

pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Least `r ≥ 1` with `x^r ≡ 1 (mod m)`, by brute force; `None` when
/// `gcd(x, m) ≠ 1`.
pub fn classical_order(x: u64, m: u64) -> Option<u64> {
    if m < 2 || gcd(x, m) != 1 {
        return None;
    }
    let mut acc = x % m;
    for r in 1..=m {
        if acc == 1 {
            return Some(r);
        }
        acc = ((acc as u128 * x as u128) % m as u128) as u64;
    }
    None
}

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
