//! Prime factorization for radical normalization.
//!
//! Trial division by small primes, then Miller-Rabin and Pollard's rho on
//! whatever cofactor is left. Cofactors above 64 bits get a probabilistic
//! primality check and a bounded rho attempt; if that fails the caller sees
//! `None` and treats the coefficient as not representable.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 10_000;
const BIG_RHO_ITERATIONS: usize = 200_000;

/// Prime factorization of `n >= 1` as `prime -> multiplicity`.
pub fn factorize(n: &BigUint) -> Option<BTreeMap<BigUint, u32>> {
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return None;
    }
    let mut rest = n.clone();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut count = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            count += 1;
        }
        if count > 0 {
            out.insert(bp, count);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        factor_cofactor(rest, &mut out)?;
    }
    Some(out)
}

fn factor_cofactor(n: BigUint, out: &mut BTreeMap<BigUint, u32>) -> Option<()> {
    if n.is_one() {
        return Some(());
    }
    if let Some(small) = n.to_u64() {
        let mut stack = vec![small];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u64(m) {
                *out.entry(BigUint::from(m)).or_insert(0) += 1;
            } else {
                let d = rho_u64(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
        return Some(());
    }
    if is_probable_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return Some(());
    }
    let d = rho_big(&n)?;
    let other = &n / &d;
    factor_cofactor(d, out)?;
    factor_cofactor(other, out)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
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

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // deterministic for all 64-bit n
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

fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn is_probable_prime(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s as usize;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_big(n: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    for c in 1u32..8 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        for _ in 0..BIG_RHO_ITERATIONS {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let d = diff.gcd(n);
            if d == *n {
                break;
            }
            if d != one {
                return Some(d);
            }
        }
    }
    None
}
