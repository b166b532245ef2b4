//! Dense polynomials over a prime field `Z/m`, coefficients constant-term first.
//!
//! Used for modulus selection in [`super::GaloisField`] and for exact root
//! finding over the oracle's prime modulus.

use crate::numth::pow_mod;

/// Polynomial with coefficients in `[0, m)`, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    pub(crate) m: u64,
    pub(crate) coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(m: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= m;
        }
        let mut p = Self { m, coeffs };
        p.trim();
        p
    }

    pub fn zero(m: u64) -> Self {
        Self { m, coeffs: Vec::new() }
    }

    pub fn one(m: u64) -> Self {
        Self::new(m, vec![1])
    }

    /// The monomial `x`.
    pub fn x(m: u64) -> Self {
        Self::new(m, vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    fn inv_scalar(&self, a: u64) -> u64 {
        pow_mod(a, self.m - 2, self.m)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let m = self.m;
        self.coeffs.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % m)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; len];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + b) % self.m;
        }
        Poly::new(self.m, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; len];
        for (i, o) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *o = (a + self.m - b) % self.m;
        }
        Poly::new(self.m, out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.m);
        }
        let m = self.m;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % m;
            }
        }
        Poly::new(m, out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let m = self.m;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = self.inv_scalar(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(m), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd] * lead_inv % m;
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = (rem[k + j] + m - c * d % m) % m;
            }
        }
        rem.truncate(dd);
        (Poly::new(m, quot), Poly::new(m, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = self.inv_scalar(lead);
                Poly::new(self.m, self.coeffs.iter().map(|&c| c * inv % self.m).collect())
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(self.m).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Ben-Or irreducibility test: `f` of degree `n` is irreducible iff
    /// `gcd(x^{m^i} − x, f) = 1` for every `1 ≤ i ≤ n/2`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = Poly::x(self.m);
        let mut power = x.clone();
        for _ in 1..=n / 2 {
            power = power.pow_mod(self.m, self);
            let g = power.sub(&x).gcd(self);
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// All distinct roots in `Z/m`, ascending.
    ///
    /// Deterministic: the distinct-root part `gcd(f, x^m − x)` is split by
    /// `gcd(g, (x + a)^{(m−1)/2} − 1)` for `a = 0, 1, 2, …`.
    pub fn roots(&self) -> Vec<u64> {
        let m = self.m;
        if self.is_zero() {
            return (0..m).collect();
        }
        if m <= 3 {
            return (0..m).filter(|&x| self.eval(x) == 0).collect();
        }
        let f = self.monic();
        let x = Poly::x(m);
        let xm = x.pow_mod(m, &f);
        let g = xm.sub(&x).gcd(&f);
        let mut out = Vec::new();
        split_roots(&g, &mut out);
        out.sort_unstable();
        out
    }
}

fn split_roots(g: &Poly, out: &mut Vec<u64>) {
    let m = g.m;
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            let c = g.monic();
            out.push((m - c.coeffs[0]) % m);
            return;
        }
        _ => {}
    }
    if g.eval(0) == 0 {
        out.push(0);
        let (q, _) = g.div_rem(&Poly::x(m));
        split_roots(&q, out);
        return;
    }
    for a in 0..m {
        let shifted = Poly::new(m, vec![a, 1]);
        let h = shifted.pow_mod((m - 1) / 2, g).sub(&Poly::one(m)).gcd(g);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && Some(dh) != g.degree() {
            let (q, _) = g.div_rem(&h);
            split_roots(&h, out);
            split_roots(&q, out);
            return;
        }
    }
    unreachable!("squarefree split polynomial could not be separated");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_identity() {
        let a = Poly::new(7, vec![3, 0, 5, 1, 6]);
        let b = Poly::new(7, vec![2, 1, 3]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn irreducibility_matches_root_test_for_cubics() {
        // a cubic is irreducible iff it has no root
        for c0 in 0..7 {
            for c1 in 0..7 {
                for c2 in 0..7 {
                    let f = Poly::new(7, vec![c0, c1, c2, 1]);
                    let has_root = (0..7).any(|x| f.eval(x) == 0);
                    assert_eq!(f.is_irreducible(), !has_root);
                }
            }
        }
    }

    #[test]
    fn quartic_irreducibility_brute_force() {
        // compare against trial division by all monic quadratics and linears over GF(3)
        let m = 3;
        let mut small = Vec::new();
        for c0 in 0..m {
            small.push(Poly::new(m, vec![c0, 1]));
            for c1 in 0..m {
                small.push(Poly::new(m, vec![c0, c1, 1]));
            }
        }
        for code in 0..81u64 {
            let cs = vec![code % 3, code / 3 % 3, code / 9 % 3, code / 27 % 3, 1];
            let f = Poly::new(m, cs);
            let brute = small.iter().all(|d| !f.rem(d).is_zero());
            assert_eq!(f.is_irreducible(), brute);
        }
    }

    #[test]
    fn roots_found_exactly() {
        let m = 1009;
        let roots = [3u64, 17, 500, 1008];
        let mut f = Poly::one(m);
        for &r in &roots {
            f = f.mul(&Poly::new(m, vec![m - r, 1]));
        }
        // an irreducible quadratic factor contributes no roots
        f = f.mul(&Poly::new(m, vec![11, 0, 1]).monic());
        let brute: Vec<u64> = (0..m).filter(|&x| f.eval(x) == 0).collect();
        assert_eq!(f.roots(), brute);
    }

    #[test]
    fn roots_with_multiplicity_and_zero() {
        let m = 101;
        let f = Poly::new(m, vec![0, 0, 1]).mul(&Poly::new(m, vec![m - 5, 1]).mul(&Poly::new(m, vec![m - 5, 1])));
        assert_eq!(f.roots(), vec![0, 5]);
    }
}
