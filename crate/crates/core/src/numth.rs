//! Integer and prime-set utilities.
//!
//! Everything here is exact and deterministic: trial-division factorization,
//! π-parts, and Zsigmondy primes computed straight from their definition.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::NumthError;

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> PrimeSet {
        PrimeSet::from_iter_unchecked(self.factors.iter().map(|&(q, _)| q))
    }
}

/// A finite set of distinct primes.
///
/// `complement` sets are represented by a flag so that "all primes except
/// these" can be passed to [`pi_part`] without enumerating anything.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PrimeSet {
    primes: BTreeSet<u64>,
    complement: bool,
}

impl PrimeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a prime set, rejecting non-primes.
    pub fn new<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self, NumthError> {
        let mut set = BTreeSet::new();
        for q in primes {
            if !is_prime(q) {
                return Err(NumthError::NotPrime(q));
            }
            set.insert(q);
        }
        Ok(Self { primes: set, complement: false })
    }

    pub(crate) fn from_iter_unchecked<I: IntoIterator<Item = u64>>(primes: I) -> Self {
        Self { primes: primes.into_iter().collect(), complement: false }
    }

    /// The set of all primes not in `self` (written π′).
    pub fn complement(&self) -> Self {
        Self { primes: self.primes.clone(), complement: !self.complement }
    }

    pub fn contains(&self, q: u64) -> bool {
        self.primes.contains(&q) != self.complement
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        assert!(!self.complement && !other.complement, "union of complemented prime sets");
        Self::from_iter_unchecked(self.primes.union(&other.primes).copied())
    }

    pub fn is_complement(&self) -> bool {
        self.complement
    }

    /// Listed primes (for a complemented set, the excluded ones).
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty() && !self.complement
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list: Vec<String> = self.primes.iter().map(|q| q.to_string()).collect();
        if self.complement {
            write!(f, "{{{}}}'", list.join(","))
        } else {
            write!(f, "{{{}}}", list.join(","))
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Trial-division factorization of `1 <= n < 2^63`.
pub fn factorize(n: u64) -> Result<Factorization, NumthError> {
    if n == 0 || n > i64::MAX as u64 {
        return Err(NumthError::OutOfRange(n as u128));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |q: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % q == 0 {
            *rest /= q;
            e += 1;
        }
        if e > 0 {
            factors.push((q, e));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    let mut d = 5u64;
    while d.saturating_mul(d) <= rest {
        push(d, &mut rest);
        push(d + 2, &mut rest);
        d += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { n, factors })
}

/// Sorted list of all positive divisors of `n`.
pub fn divisors(n: u64) -> Result<Vec<u64>, NumthError> {
    let f = factorize(n)?;
    let mut divs = vec![1u64];
    for &(q, e) in f.factors() {
        let len = divs.len();
        let mut power = 1u64;
        for _ in 0..e {
            power *= q;
            for i in 0..len {
                divs.push(divs[i] * power);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// The π-part `n_π`: the largest divisor of `n` whose prime factors all lie in `pi`.
pub fn pi_part(n: u64, pi: &PrimeSet) -> u64 {
    assert!(n >= 1, "pi_part of zero");
    let f = factorize(n).expect("n within range");
    f.factors()
        .iter()
        .filter(|&&(q, _)| pi.contains(q))
        .map(|&(q, e)| q.pow(e))
        .product()
}

/// `base^exp` with overflow reported as [`NumthError::OutOfRange`].
pub fn checked_pow(base: u64, exp: u32) -> Result<u64, NumthError> {
    base.checked_pow(exp)
        .ok_or(NumthError::OutOfRange((base as u128).saturating_pow(exp)))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// `base^exp mod m` using 128-bit intermediates.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1, m ≥ 2).
pub fn multiplicative_order(a: u64, m: u64) -> Result<u64, NumthError> {
    if m < 2 || gcd(a, m) != 1 {
        return Err(NumthError::NotCoprime(a, m));
    }
    let phi = euler_phi(m)?;
    let mut order = phi;
    for &(q, _) in factorize(phi)?.factors() {
        while order % q == 0 && pow_mod(a, order / q, m) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

pub fn euler_phi(n: u64) -> Result<u64, NumthError> {
    let f = factorize(n)?;
    Ok(f.factors().iter().fold(n, |acc, &(q, _)| acc / q * (q - 1)))
}

/// Primes dividing `p^n − 1` but no `p^a − 1` with `1 ≤ a < n`.
///
/// A prime `r ∤ p` divides `p^a − 1` exactly when the order of `p` mod `r`
/// divides `a`, so the Zsigmondy primes are those where that order is `n`.
pub fn zsigmondy_primes(p: u64, n: u32) -> Result<PrimeSet, NumthError> {
    if !is_prime(p) {
        return Err(NumthError::NotPrime(p));
    }
    if n == 0 {
        return Err(NumthError::OutOfRange(0));
    }
    let top = checked_pow(p, n)? - 1;
    let f = factorize(top)?;
    let mut out = Vec::new();
    for &(r, _) in f.factors() {
        if multiplicative_order(p % r, r)? == n as u64 {
            out.push(r);
        }
    }
    Ok(PrimeSet::from_iter_unchecked(out))
}
