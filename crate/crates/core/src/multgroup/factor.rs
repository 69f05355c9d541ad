//! Integer factorization: trial division up to 10⁶, then Miller–Rabin and
//! Brent's variant of Pollard's rho for what is left.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;

/// Rho iterations allowed per cofactor before giving up.
const RHO_ITERATION_CAP: u64 = 1 << 22;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

const WITNESSES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller–Rabin with the first 20 prime bases. Deterministic below
/// 3.3·10²⁴; above that a composite passes with probability below 4⁻²⁰.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &WITNESSES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &a in &WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn abs_diff(a: &BigUint, b: &BigUint) -> BigUint {
    if a > b {
        a - b
    } else {
        b - a
    }
}

/// A nontrivial divisor of the odd composite `n`, or None if the
/// iteration cap is hit for every tried constant.
fn brent_rho(n: &BigUint) -> Option<BigUint> {
    let step = |y: &BigUint, c: &BigUint| (y * y + c) % n;
    for c in 1u32..=8 {
        let c = BigUint::from(c);
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let m: u64 = 128;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent = 0u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y, &c);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = step(&y, &c);
                    q = (q * abs_diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            spent += r;
            r *= 2;
            if spent > RHO_ITERATION_CAP {
                break;
            }
        }
        if g == *n {
            loop {
                ys = step(&ys, &c);
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

fn split_large(n: BigUint, out: &mut BTreeMap<BigUint, u32>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    let limit = BigUint::from(TRIAL_DIVISION_LIMIT);
    // Anything below limit² with no factor up to limit is prime.
    if n < &limit * &limit || is_probable_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    if let Some(root) = perfect_square_root(&n) {
        let mut sub = BTreeMap::new();
        split_large(root, &mut sub)?;
        for (p, e) in sub {
            *out.entry(p).or_insert(0) += 2 * e;
        }
        return Ok(());
    }
    let d = brent_rho(&n).ok_or_else(|| Error::FactorizationFailed {
        cofactor: n.to_string(),
    })?;
    let rest = &n / &d;
    split_large(d, out)?;
    split_large(rest, out)
}

fn perfect_square_root(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Prime factorization of a positive integer as `prime → exponent`.
pub fn factor_natural(n: &BigUint) -> Result<BTreeMap<BigUint, u32>> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    if let Some(mut small) = rest.to_u64() {
        for &p in small_primes() {
            let p = u64::from(p);
            if p * p > small {
                break;
            }
            while small % p == 0 {
                *out.entry(BigUint::from(p)).or_insert(0) += 1;
                small /= p;
            }
        }
        if small > 1 {
            let small_big = BigUint::from(small);
            if small <= u64::from(TRIAL_DIVISION_LIMIT) * u64::from(TRIAL_DIVISION_LIMIT) {
                *out.entry(small_big).or_insert(0) += 1;
            } else {
                split_large(small_big, &mut out)?;
            }
        }
        return Ok(out);
    }
    for &p in small_primes() {
        let pb = BigUint::from(p);
        while (&rest % &pb).is_zero() {
            *out.entry(pb.clone()).or_insert(0) += 1;
            rest /= &pb;
        }
        if rest.is_one() {
            break;
        }
    }
    split_large(rest, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u128) -> Vec<(u128, u32)> {
        factor_natural(&BigUint::from(n))
            .unwrap()
            .into_iter()
            .map(|(p, e)| (p.to_u128().unwrap(), e))
            .collect()
    }

    #[test]
    fn small_numbers() {
        assert_eq!(f(1), vec![]);
        assert_eq!(f(12), vec![(2, 2), (3, 1)]);
        assert_eq!(f(999_983), vec![(999_983, 1)]);
        assert_eq!(f(1 << 40), vec![(2, 40)]);
    }

    #[test]
    fn products_of_large_primes() {
        // Both factors exceed the trial-division limit.
        assert_eq!(
            f(1_470_626_929_934_143_021),
            vec![(1_206_429_347, 1), (1_218_991_343, 1)]
        );
        let p: u128 = 1_000_000_007;
        assert_eq!(f(p * p * 3), vec![(3, 1), (p, 2)]);
        let q: u128 = 2_305_843_009_213_693_951; // 2^61 - 1
        assert_eq!(f(q * 1_000_003), vec![(1_000_003, 1), (q, 1)]);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigUint::from(
            2_305_843_009_213_693_951u64
        )));
        assert!(!is_probable_prime(&BigUint::from(3_215_031_751u64))); // strong pseudoprime to 2,3,5,7
        assert!(!is_probable_prime(&BigUint::from(1u32)));
    }
}
