//! Arithmetic in GF(p^n) in a fixed polynomial basis.
//!
//! Elements are packed into a `u32` as `c_0 + c_1 p + … + c_{n-1} p^{n-1}`
//! where `c_i` is the coefficient of `x^i`. The packed integer order is the
//! "coordinate enumeration order" used for every deterministic choice here:
//! the modulus, the primitive element, and subgroup generators.

pub mod matrix;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use matrix::Matrix;
pub use poly::Poly;

use crate::error::GfError;
use crate::numth::{checked_pow, factorize, is_prime};

/// Largest field size for which log/exp tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// Self-describing field description, embedded in serialized documents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub n: u32,
    /// Monic modulus, constant term first (length `n + 1`).
    pub modulus: Vec<u64>,
}

/// The field GF(p^n) with log/exp tables relative to its primitive element.
pub struct GaloisField {
    p: u64,
    n: u32,
    size: u32,
    modulus: Vec<u64>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `p^i` for `i < n`, used to pack and unpack coordinates.
    radix: Vec<u32>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.n, self.modulus)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

/// Shared handle to a constructed field.
pub type FieldHandle = Arc<GaloisField>;

/// First monic irreducible polynomial of degree `n` over GF(p), scanning the
/// lower coefficients as a base-`p` counter with the constant term fastest.
pub fn first_irreducible(p: u64, n: u32) -> Vec<u64> {
    let count = p.pow(n);
    for code in 0..count {
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        let mut c = code;
        for _ in 0..n {
            coeffs.push(c % p);
            c /= p;
        }
        coeffs.push(1);
        if Poly::new(p, coeffs.clone()).is_irreducible() {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Builds GF(p^n) with the deterministic modulus.
pub fn make_field(p: u64, n: u32) -> Result<FieldHandle, GfError> {
    if !is_prime(p) {
        return Err(GfError::InvalidParams(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(GfError::InvalidParams("degree must be at least 1".into()));
    }
    let size = checked_pow(p, n).map_err(|_| GfError::InvalidParams("field too large".into()))?;
    if size > MAX_FIELD_SIZE {
        return Err(GfError::InvalidParams(format!(
            "GF({p}^{n}) exceeds the supported size {MAX_FIELD_SIZE}"
        )));
    }
    let modulus = first_irreducible(p, n);
    GaloisField::with_modulus(p, n, modulus).map(Arc::new)
}

impl GaloisField {
    /// Builds the field for an explicit monic irreducible modulus.
    pub fn with_modulus(p: u64, n: u32, modulus: Vec<u64>) -> Result<Self, GfError> {
        if !is_prime(p) {
            return Err(GfError::InvalidParams(format!("{p} is not prime")));
        }
        if modulus.len() != n as usize + 1 || modulus[n as usize] != 1 {
            return Err(GfError::InvalidParams("modulus must be monic of degree n".into()));
        }
        if !Poly::new(p, modulus.clone()).is_irreducible() {
            return Err(GfError::InvalidParams(format!("modulus {modulus:?} is reducible")));
        }
        let size = checked_pow(p, n).map_err(|_| GfError::InvalidParams("field too large".into()))?;
        if size > MAX_FIELD_SIZE {
            return Err(GfError::InvalidParams("field too large".into()));
        }
        let radix = (0..n).map(|i| p.pow(i) as u32).collect();
        let mut field = GaloisField {
            p,
            n,
            size: size as u32,
            modulus,
            primitive: 0,
            exp: Vec::new(),
            log: Vec::new(),
            radix,
        };
        field.build_tables()?;
        Ok(field)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<FieldHandle, GfError> {
        Self::with_modulus(d.p, d.n, d.modulus.clone()).map(Arc::new)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, n: self.n, modulus: self.modulus.clone() }
    }

    fn build_tables(&mut self) -> Result<(), GfError> {
        let order = self.size as u64 - 1;
        let primes: Vec<u64> = factorize(order.max(1))?.factors().iter().map(|&(q, _)| q).collect();
        let mut primitive = None;
        for cand in 1..self.size {
            let is_gen = primes.iter().all(|&q| self.pow_slow(cand, order / q) != 1);
            if is_gen {
                primitive = Some(cand);
                break;
            }
        }
        let g = primitive.expect("multiplicative group is cyclic");
        self.primitive = g;
        self.exp = vec![0; order as usize];
        self.log = vec![0; self.size as usize];
        let mut acc = 1u32;
        for k in 0..order as usize {
            self.exp[k] = acc;
            self.log[acc as usize] = k as u32;
            acc = self.mul_slow(acc, g);
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Number of elements `p^n`.
    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Packed value of the primitive element.
    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    pub fn coords(&self, x: u32) -> Vec<u64> {
        let p = self.p as u32;
        let mut v = Vec::with_capacity(self.n as usize);
        let mut r = x;
        for _ in 0..self.n {
            v.push((r % p) as u64);
            r /= p;
        }
        v
    }

    pub fn from_coords(&self, c: &[u64]) -> u32 {
        assert_eq!(c.len(), self.n as usize);
        c.iter().zip(&self.radix).map(|(&ci, &r)| (ci % self.p) as u32 * r).sum()
    }

    /// Embeds an integer of the prime subfield.
    pub fn from_int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p as u32;
        let (mut x, mut y) = (a, b);
        let mut out = 0;
        for &r in &self.radix {
            let d = (x % p + y % p) % p;
            out += d * r;
            x /= p;
            y /= p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let p = self.p as u32;
        let mut x = a;
        let mut out = 0;
        for &r in &self.radix {
            let d = (p - x % p) % p;
            out += d * r;
            x /= p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.size as usize - 1;
        let s = self.log[a as usize] as usize + self.log[b as usize] as usize;
        self.exp[if s >= order { s - order } else { s }]
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        let order = self.size as usize - 1;
        let l = self.log[a as usize] as usize;
        Ok(self.exp[(order - l) % order])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.size as u64 - 1;
        let l = self.log[a as usize] as u64;
        self.exp[((l as u128 * e as u128) % order as u128) as usize]
    }

    /// Signed exponent, negative powers via the inverse.
    pub fn pow_signed(&self, a: u32, e: i64) -> Result<u32, GfError> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// The Galois automorphism `x ↦ x^{p^i}` (any `i`, taken mod `n`).
    pub fn frobenius(&self, a: u32, i: u64) -> u32 {
        let i = i % self.n as u64;
        if a == 0 || i == 0 {
            return a;
        }
        let order = self.size as u64 - 1;
        let pi = crate::numth::pow_mod(self.p, i, order);
        self.pow(a, pi)
    }

    /// Discrete log base the primitive element.
    pub fn log(&self, a: u32) -> Result<u32, GfError> {
        if a == 0 {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.log[a as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> Result<u64, GfError> {
        let l = self.log(a)? as u64;
        let order = self.size as u64 - 1;
        Ok(order / crate::numth::gcd(l, order))
    }

    /// `primitive^((p^n − 1)/d)`, an element of order exactly `d`.
    pub fn subgroup_generator(&self, d: u64) -> Result<u32, GfError> {
        let order = self.size as u64 - 1;
        if d == 0 || order % d != 0 {
            return Err(GfError::InvalidParams(format!("{d} does not divide {order}")));
        }
        Ok(self.pow(self.primitive, order / d))
    }

    /// Matrix of the GF(p)-semilinear map `v ↦ μ · v^{p^i}` on coordinates.
    pub fn as_linear_map(&self, mu: u32, i: u64) -> Result<Matrix, GfError> {
        if mu == 0 {
            return Err(GfError::InvalidParams("multiplier must be nonzero".into()));
        }
        let n = self.n as usize;
        let cols: Vec<Vec<u64>> = (0..n)
            .map(|j| {
                let basis = self.radix[j];
                self.coords(self.mul(mu, self.frobenius(basis, i)))
            })
            .collect();
        Ok(Matrix::from_cols(self.p, n, &cols))
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let pa = Poly::new(self.p, self.coords(a));
        let pb = Poly::new(self.p, self.coords(b));
        let f = Poly::new(self.p, self.modulus.clone());
        let r = pa.mul(&pb).rem(&f);
        let mut c = r.coeffs().to_vec();
        c.resize(self.n as usize, 0);
        self.from_coords(&c)
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// Reference multiplication by polynomial reduction, independent of the tables.
    pub fn mul_reference(&self, a: u32, b: u32) -> u32 {
        self.mul_slow(a, b)
    }
}

/// A field element that carries its field, with checked operations.
#[derive(Clone)]
pub struct FieldElem {
    field: FieldHandle,
    value: u32,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.field.coords(self.value))
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FieldElem {}

impl FieldElem {
    pub fn new(field: &FieldHandle, value: u32) -> Result<Self, GfError> {
        if value >= field.size() {
            return Err(GfError::InvalidParams(format!("{value} is not a packed element")));
        }
        Ok(Self { field: field.clone(), value })
    }

    pub fn from_coords(field: &FieldHandle, coords: &[u64]) -> Result<Self, GfError> {
        if coords.len() != field.degree() as usize || coords.iter().any(|&c| c >= field.p()) {
            return Err(GfError::InvalidParams("coordinates out of range".into()));
        }
        Ok(Self { field: field.clone(), value: field.from_coords(coords) })
    }

    pub fn zero(field: &FieldHandle) -> Self {
        Self { field: field.clone(), value: 0 }
    }

    pub fn one(field: &FieldHandle) -> Self {
        Self { field: field.clone(), value: 1 }
    }

    pub fn primitive(field: &FieldHandle) -> Self {
        Self { field: field.clone(), value: field.primitive() }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &FieldHandle {
        &self.field
    }

    pub fn coords(&self) -> Vec<u64> {
        self.field.coords(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElem) -> Result<(), GfError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(GfError::FieldMismatch)
        }
    }

    fn with(&self, value: u32) -> Self {
        Self { field: self.field.clone(), value }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElem {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem, GfError> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.with(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self, i: u64) -> FieldElem {
        self.with(self.field.frobenius(self.value, i))
    }

    pub fn element_order(&self) -> Result<u64, GfError> {
        self.field.element_order(self.value)
    }
}

/// First element of order `p^n − 1` in packed order.
pub fn primitive_element(field: &FieldHandle) -> FieldElem {
    FieldElem::primitive(field)
}

pub fn subgroup_generator(field: &FieldHandle, d: u64) -> Result<FieldElem, GfError> {
    Ok(FieldElem { field: field.clone(), value: field.subgroup_generator(d)? })
}

/// Linearization of `v ↦ μ · v^{p^i}`.
pub fn as_linear_map(field: &FieldHandle, mu: &FieldElem, i: u64) -> Result<Matrix, GfError> {
    if !Arc::ptr_eq(field, mu.field()) && **field != **mu.field() {
        return Err(GfError::FieldMismatch);
    }
    if i >= field.degree() as u64 && i != field.degree() as u64 {
        return Err(GfError::InvalidParams(format!("galois exponent {i} out of range")));
    }
    field.as_linear_map(mu.value(), i)
}

/// Nullspace basis over GF(p).
pub fn kernel(m: &Matrix) -> Vec<Vec<u64>> {
    m.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modulus_selection_examples() {
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(make_field(7, 3).unwrap().modulus(), &[2, 0, 0, 1]);
        assert_eq!(make_field(5, 1).unwrap().modulus(), &[0, 1]);
        assert!(make_field(4, 2).is_err());
    }

    #[test]
    fn modulus_is_first_in_scan_order() {
        // exhaustive: every earlier monic quadratic over GF(3)/GF(5) has a root
        for p in [3u64, 5] {
            let f = make_field(p, 2).unwrap();
            let chosen = f.modulus()[0] + f.modulus()[1] * p;
            for code in 0..chosen {
                let (c0, c1) = (code % p, code / p);
                assert!((0..p).any(|x| (x * x + c1 * x + c0) % p == 0));
            }
        }
    }

    #[test]
    fn gf9_square_of_x_is_minus_one() {
        let f = make_field(3, 2).unwrap();
        let x = f.from_coords(&[0, 1]);
        assert_eq!(f.coords(f.mul(x, x)), vec![2, 0]);
    }

    #[test]
    fn prime_field_order_of_minus_one() {
        let f = make_field(7, 1).unwrap();
        assert_eq!(f.element_order(f.from_int(-1)).unwrap(), 2);
        assert_eq!(f.element_order(1).unwrap(), 1);
        assert_eq!(f.inv(1).unwrap(), 1);
        assert_eq!(f.inv(0), Err(GfError::DivisionByZero));
    }

    #[test]
    fn tables_agree_with_reference_multiplication() {
        for (p, n) in [(3, 2), (7, 3), (2, 5), (5, 2)] {
            let f = make_field(p, n).unwrap();
            for a in 0..f.size() {
                for b in (0..f.size()).step_by(3) {
                    assert_eq!(f.mul(a, b), f.mul_reference(a, b));
                }
            }
        }
    }

    #[test]
    fn field_axioms_sampled() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(3, 2), (7, 3), (11, 5), (3, 5)] {
            let f = make_field(p, n).unwrap();
            for _ in 0..1000 {
                let (a, b, c) = (rng.gen_range(0..f.size()), rng.gen_range(0..f.size()), rng.gen_range(0..f.size()));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.pow(a, f.size() as u64 - 1), 1);
                    assert_eq!((f.size() as u64 - 1) % f.element_order(a).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_fixing_prime_field() {
        let f = make_field(7, 3).unwrap();
        for a in (0..f.size()).step_by(5) {
            assert_eq!(f.frobenius(a, 3), a);
            for b in (0..f.size()).step_by(7) {
                assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
                assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
            }
        }
        for k in 0..7 {
            assert_eq!(f.frobenius(f.from_int(k), 1), f.from_int(k));
        }
    }

    #[test]
    fn primitive_is_first_generator() {
        let f = make_field(7, 3).unwrap();
        let g = f.primitive();
        assert_eq!(f.element_order(g).unwrap(), 342);
        for cand in 1..g {
            assert!(f.element_order(cand).unwrap() < 342);
        }
        for d in crate::numth::divisors(342).unwrap() {
            assert_eq!(f.element_order(f.subgroup_generator(d).unwrap()).unwrap(), d);
        }
        assert!(f.subgroup_generator(5).is_err());
    }

    #[test]
    fn linear_maps_compose_and_have_expected_order() {
        let f = make_field(7, 3).unwrap();
        let id = f.as_linear_map(1, 0).unwrap();
        assert!(id.is_identity());
        assert!(f.as_linear_map(1, 3).unwrap().is_identity());
        let g = f.primitive();
        // (g σ)^3 = g^{1+p+p^2} = g^57 which has order 6; so (gσ)^18 = 1
        let m = f.as_linear_map(g, 1).unwrap();
        assert!(m.pow(18).is_identity());
        assert!(!m.pow(9).is_identity());
        for v in [1u32, 5, 100, 342] {
            let lhs = m.mul_vec(&f.coords(v));
            assert_eq!(lhs, f.coords(f.mul(g, f.frobenius(v, 1))));
        }
        // composition (μ1,i1)∘(μ2,i2) = (μ1 μ2^{p^{i1}}, i1 + i2)
        for (m1, i1, m2, i2) in [(g, 1, 5u32, 2), (3, 2, g, 1), (11, 0, 17, 1)] {
            let prod = f.as_linear_map(m1, i1).unwrap().mul(&f.as_linear_map(m2, i2).unwrap());
            let direct = f.as_linear_map(f.mul(m1, f.frobenius(m2, i1)), (i1 + i2) % 3).unwrap();
            assert_eq!(prod, direct);
        }
    }

    #[test]
    fn kernel_of_scalar_minus_identity_is_trivial() {
        let f = make_field(3, 3).unwrap();
        for mu in 2..f.size() {
            let m = f.as_linear_map(mu, 0).unwrap().sub(&Matrix::identity(3, 3));
            let k = kernel(&m);
            // brute force: fixed points of v ↦ μv
            let fixed = (0..f.size()).filter(|&v| f.mul(mu, v) == v).count();
            assert_eq!(3usize.pow(k.len() as u32), fixed);
            if mu != 1 {
                assert!(k.is_empty());
            }
        }
    }

    #[test]
    fn checked_wrapper_rejects_mismatch() {
        let f = make_field(3, 2).unwrap();
        let g = make_field(5, 1).unwrap();
        let a = FieldElem::one(&f);
        let b = FieldElem::one(&g);
        assert_eq!(a.add(&b), Err(GfError::FieldMismatch));
        assert_eq!(FieldElem::zero(&f).inv(), Err(GfError::DivisionByZero));
        assert_eq!(a.frobenius(2), a);
    }
}
