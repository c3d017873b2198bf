//! Small integer helpers.

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).take_while(|k| k * k <= n).filter(|k| n.is_multiple_of(*k)).collect();
    let mut hi: Vec<u64> = out.iter().rev().map(|k| n / k).filter(|&q| q * q != n).collect();
    out.append(&mut hi);
    out
}

/// Möbius function.
pub fn moebius(mut n: u64) -> i32 {
    assert!(n >= 1);
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `sum_{k | n} mu(n/k) 2^k`, the number of points of exact period `n`
/// under squaring in characteristic 2.
pub fn primitive_count(n: u64) -> i64 {
    divisors(n).into_iter().map(|k| moebius(n / k) as i64 * (1i64 << k)).sum()
}

pub fn is_prime(n: u64) -> bool {
    crate::modp::is_prime_u64(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(9), vec![1, 3, 9]);
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(7), -1);
        assert_eq!(primitive_count(1), 2);
        assert_eq!(primitive_count(2), 2);
        assert_eq!(primitive_count(6), 54);
        assert_eq!(primitive_count(7), 126);
    }
}
