use std::collections::BTreeMap;

/// Euler's totient `φ(n)` by trial division; `φ(1) = 1`.
pub fn euler_totient(n: u64) -> u64 {
    assert!(n >= 1, "totient of zero");
    let mut result = n;
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

/// Divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n.is_multiple_of(k) {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `{m ↦ φ(m)}` over the divisors of `M`; counts the cyclic shifts whose cycles have length `m`.
pub fn cgg_weights(m: u64) -> BTreeMap<u64, u64> {
    cgg_weights_with(m, euler_totient)
}

/// As [`cgg_weights`] with a caller-supplied totient, for fault-injection checks.
pub fn cgg_weights_with(m: u64, totient: impl Fn(u64) -> u64) -> BTreeMap<u64, u64> {
    divisors(m).into_iter().map(|k| (k, totient(k))).collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}
