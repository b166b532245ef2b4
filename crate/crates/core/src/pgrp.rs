//! Class-two p-groups given by a bilinear cocycle.
//!
//! Every group here has elements `(w, z)` with `w ∈ GF(p)^dw`, `z ∈ GF(p)^dz`
//! and product `(w, z)(w′, z′) = (w + w′, z + z′ + B(w, w′))`, where
//! `B_k(w, w′) = Σ T[k][i][j]·w_i·w′_j`. The commutator of `(w, ·)` and
//! `(w′, ·)` is `(0, β(w, w′))` with `β(w, w′) = B(w, w′) − B(w′, w)`.
//!
//! * Heisenberg over `GF(p^q)`: `w = (a, b)`, `z = c`, `B = a·b′` in the field.
//! * Dual pairing group of dimension `m`: `w = (v, α)`, `z ∈ GF(p)`, `B = α′(v)`.
//! * Central product of two groups with centers of order `p`: the cocycles add,
//!   the second center folded into the first through `φ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::PGroupError;
use crate::gf::matrix::span_basis;
use crate::gf::{FieldDescriptor, FieldHandle, GaloisField, Matrix};
use crate::grp::Group;
use crate::numth::is_prime;

/// Self-describing construction recipe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PDescriptor {
    Heisenberg { p: u64, field: FieldDescriptor },
    ExtraspecialDual { p: u64, dim: usize },
    CentralProduct { p: u64, factors: Vec<PDescriptor>, phi: u64 },
    DirectProduct { p: u64, factors: Vec<PDescriptor> },
    ElementaryAbelian { p: u64, dim: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PKind {
    Heisenberg,
    ExtraspecialDual,
    CentralProduct,
    DirectProduct,
    ElementaryAbelian,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PElem {
    pub w: Vec<u32>,
    pub z: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PGroupProfile {
    pub p: u64,
    pub order_exponent: usize,
    pub alpha: usize,
    pub kind: PKind,
}

#[derive(Clone, Debug)]
pub struct PGroup {
    p: u64,
    dw: usize,
    dz: usize,
    /// Nonzero cocycle coefficients `(k, i, j, T[k][i][j])`.
    terms: Vec<(usize, usize, usize, u64)>,
    descriptor: PDescriptor,
    field: Option<FieldHandle>,
}

fn check_odd_prime(p: u64) -> Result<(), PGroupError> {
    if !is_prime(p) || p == 2 {
        return Err(PGroupError::InvalidParams(format!("p = {p} must be an odd prime")));
    }
    if p > u32::MAX as u64 {
        return Err(PGroupError::InvalidParams(format!("p = {p} is too large")));
    }
    Ok(())
}

impl PGroup {
    /// Upper unitriangular `3 × 3` matrices over `field`, of order `p^{3q}`.
    pub fn heisenberg(field: &FieldHandle) -> Result<Self, PGroupError> {
        let p = field.p();
        check_odd_prime(p)?;
        let q = field.degree() as usize;
        let mut terms = Vec::new();
        for i in 0..q {
            for j in 0..q {
                let prod = field.mul(field.from_coords(&unit(q, i)), field.from_coords(&unit(q, j)));
                for (k, &c) in field.coords(prod).iter().enumerate() {
                    if c != 0 {
                        terms.push((k, i, q + j, c));
                    }
                }
            }
        }
        Ok(Self {
            p,
            dw: 2 * q,
            dz: q,
            terms,
            descriptor: PDescriptor::Heisenberg { p, field: field.descriptor() },
            field: Some(field.clone()),
        })
    }

    /// `{(v, α, z)}` with `v ∈ GF(p)^m`, `α` in dual coordinates, extraspecial of order `p^{2m+1}`.
    pub fn extraspecial_dual(p: u64, m: usize) -> Result<Self, PGroupError> {
        check_odd_prime(p)?;
        if m == 0 {
            return Err(PGroupError::InvalidParams("dimension must be positive".into()));
        }
        let terms = (0..m).map(|i| (0, i, m + i, 1)).collect();
        Ok(Self { p, dw: 2 * m, dz: 1, terms, descriptor: PDescriptor::ExtraspecialDual { p, dim: m }, field: None })
    }

    /// Identifies `Z(b)` with `Z(a)` via `z ↦ φ·z`. Both centers must equal the derived subgroup and have order `p`.
    pub fn central_product(a: &PGroup, b: &PGroup, phi: u64) -> Result<Self, PGroupError> {
        if a.p != b.p {
            return Err(PGroupError::CenterMismatch(format!("primes {} and {} differ", a.p, b.p)));
        }
        let p = a.p;
        if phi % p == 0 {
            return Err(PGroupError::CenterMismatch("φ must be nonzero".into()));
        }
        for g in [a, b] {
            if g.dz != 1 || !g.radical().is_empty() || g.derived_basis().len() != 1 {
                return Err(PGroupError::CenterMismatch("factor center is not a derived subgroup of order p".into()));
            }
        }
        let mut terms = a.terms.clone();
        for &(_, i, j, c) in &b.terms {
            terms.push((0, a.dw + i, a.dw + j, c * (phi % p) % p));
        }
        Ok(Self {
            p,
            dw: a.dw + b.dw,
            dz: 1,
            terms,
            descriptor: PDescriptor::CentralProduct { p, factors: vec![a.descriptor.clone(), b.descriptor.clone()], phi: phi % p },
            field: None,
        })
    }

    pub fn direct_product(a: &PGroup, b: &PGroup) -> Result<Self, PGroupError> {
        if a.p != b.p {
            return Err(PGroupError::InvalidParams("factors over different primes".into()));
        }
        let mut terms = a.terms.clone();
        for &(k, i, j, c) in &b.terms {
            terms.push((a.dz + k, a.dw + i, a.dw + j, c));
        }
        Ok(Self {
            p: a.p,
            dw: a.dw + b.dw,
            dz: a.dz + b.dz,
            terms,
            descriptor: PDescriptor::DirectProduct { p: a.p, factors: vec![a.descriptor.clone(), b.descriptor.clone()] },
            field: None,
        })
    }

    pub fn elementary_abelian(p: u64, dim: usize) -> Result<Self, PGroupError> {
        check_odd_prime(p)?;
        Ok(Self { p, dw: dim, dz: 0, terms: Vec::new(), descriptor: PDescriptor::ElementaryAbelian { p, dim }, field: None })
    }

    pub fn from_descriptor(d: &PDescriptor) -> Result<Self, PGroupError> {
        let two = |factors: &[PDescriptor]| -> Result<(PGroup, PGroup), PGroupError> {
            match factors {
                [a, b] => Ok((Self::from_descriptor(a)?, Self::from_descriptor(b)?)),
                _ => Err(PGroupError::InvalidParams("exactly two factors expected".into())),
            }
        };
        let g = match d {
            PDescriptor::Heisenberg { field, .. } => Self::heisenberg(&GaloisField::from_descriptor(field)?)?,
            PDescriptor::ExtraspecialDual { p, dim } => Self::extraspecial_dual(*p, *dim)?,
            PDescriptor::CentralProduct { factors, phi, .. } => {
                let (a, b) = two(factors)?;
                Self::central_product(&a, &b, *phi)?
            }
            PDescriptor::DirectProduct { factors, .. } => {
                let (a, b) = two(factors)?;
                Self::direct_product(&a, &b)?
            }
            PDescriptor::ElementaryAbelian { p, dim } => Self::elementary_abelian(*p, *dim)?,
        };
        let declared = match d {
            PDescriptor::Heisenberg { p, .. }
            | PDescriptor::ExtraspecialDual { p, .. }
            | PDescriptor::CentralProduct { p, .. }
            | PDescriptor::DirectProduct { p, .. }
            | PDescriptor::ElementaryAbelian { p, .. } => *p,
        };
        if declared != g.p {
            return Err(PGroupError::InvalidParams(format!("declared p = {declared} but factors use {}", g.p)));
        }
        Ok(g)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dw(&self) -> usize {
        self.dw
    }

    pub fn dz(&self) -> usize {
        self.dz
    }

    pub fn descriptor(&self) -> &PDescriptor {
        &self.descriptor
    }

    pub fn field(&self) -> Option<&FieldHandle> {
        self.field.as_ref()
    }

    pub fn kind(&self) -> PKind {
        match self.descriptor {
            PDescriptor::Heisenberg { .. } => PKind::Heisenberg,
            PDescriptor::ExtraspecialDual { .. } => PKind::ExtraspecialDual,
            PDescriptor::CentralProduct { .. } => PKind::CentralProduct,
            PDescriptor::DirectProduct { .. } => PKind::DirectProduct,
            PDescriptor::ElementaryAbelian { .. } => PKind::ElementaryAbelian,
        }
    }

    /// `|P| = p^e`.
    pub fn order_exponent(&self) -> usize {
        self.dw + self.dz
    }

    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.order_exponent() as u32)
    }

    /// Dimension of the first factor's `w`-block (central products only).
    pub fn first_factor_dw(&self) -> Option<usize> {
        match &self.descriptor {
            PDescriptor::CentralProduct { factors, .. } | PDescriptor::DirectProduct { factors, .. } => {
                Self::from_descriptor(&factors[0]).ok().map(|f| f.dw)
            }
            _ => None,
        }
    }

    pub fn cocycle(&self, w: &[u64], w2: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut out = vec![0u64; self.dz];
        for &(k, i, j, c) in &self.terms {
            out[k] = (out[k] + c * (w[i] * w2[j] % p)) % p;
        }
        out
    }

    /// `β(w, w′) = B(w, w′) − B(w′, w)`: the commutator of the two lifts.
    pub fn commutator_form(&self, w: &[u64], w2: &[u64]) -> Vec<u64> {
        let p = self.p;
        self.cocycle(w, w2).iter().zip(self.cocycle(w2, w)).map(|(&a, b)| (a + p - b) % p).collect()
    }

    /// Matrix of `w′ ↦ β(w, w′)` (`dz × dw`).
    pub fn commutator_map(&self, w: &[u64]) -> Matrix {
        let cols: Vec<Vec<u64>> = (0..self.dw).map(|j| self.commutator_form(w, &unit(self.dw, j))).collect();
        Matrix::from_cols(self.p, self.dz, &cols)
    }

    /// Basis of `{w : β(w, ·) = 0}`.
    pub fn radical(&self) -> Vec<Vec<u64>> {
        if self.dw == 0 {
            return Vec::new();
        }
        if self.dz == 0 {
            return (0..self.dw).map(|i| unit(self.dw, i)).collect();
        }
        // rows indexed by (k, j): coefficient of w_i in β_k(w, e_j)
        let mut rows = Vec::with_capacity(self.dz * self.dw);
        for j in 0..self.dw {
            let cols: Vec<Vec<u64>> = (0..self.dw).map(|i| self.commutator_form(&unit(self.dw, i), &unit(self.dw, j))).collect();
            for k in 0..self.dz {
                rows.push(cols.iter().map(|c| c[k]).collect());
            }
        }
        Matrix::from_rows(self.p, &rows).kernel()
    }

    /// Basis of the span of all commutators, in `z`-coordinates.
    pub fn derived_basis(&self) -> Vec<Vec<u64>> {
        let mut vecs = Vec::new();
        for i in 0..self.dw {
            for j in i + 1..self.dw {
                let v = self.commutator_form(&unit(self.dw, i), &unit(self.dw, j));
                if v.iter().any(|&x| x != 0) {
                    vecs.push(v);
                }
            }
        }
        span_basis(self.p, self.dz, &vecs)
    }

    pub fn center(&self) -> LinearSubgroup {
        LinearSubgroup::new(self, self.radical(), (0..self.dz).map(|k| unit(self.dz, k)).collect())
    }

    pub fn derived(&self) -> LinearSubgroup {
        LinearSubgroup::new(self, Vec::new(), self.derived_basis())
    }

    pub fn whole(&self) -> LinearSubgroup {
        LinearSubgroup::new(self, (0..self.dw).map(|i| unit(self.dw, i)).collect(), (0..self.dz).map(|k| unit(self.dz, k)).collect())
    }

    pub fn profile(&self) -> PGroupProfile {
        PGroupProfile { p: self.p, order_exponent: self.order_exponent(), alpha: self.dw / 2, kind: self.kind() }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Same coordinates and descriptor with one cocycle term removed.
    pub fn without_term(&self, index: usize) -> Self {
        let mut g = self.clone();
        if index < g.terms.len() {
            g.terms.remove(index);
        }
        g
    }

    pub fn elem(&self, w: &[u64], z: &[u64]) -> PElem {
        assert_eq!((w.len(), z.len()), (self.dw, self.dz), "coordinate lengths");
        PElem { w: w.iter().map(|&x| (x % self.p) as u32).collect(), z: z.iter().map(|&x| (x % self.p) as u32).collect() }
    }

    /// Heisenberg element from field elements (packed values).
    pub fn heis_triple(&self, a: u32, b: u32, c: u32) -> Result<PElem, PGroupError> {
        let f = self.field.as_ref().ok_or_else(|| PGroupError::UnsupportedKind("not a Heisenberg group".into()))?;
        let mut w = f.coords(a);
        w.extend(f.coords(b));
        Ok(self.elem(&w, &f.coords(c)))
    }

    /// Inverse of [`Self::heis_triple`].
    pub fn heis_parts(&self, x: &PElem) -> Result<(u32, u32, u32), PGroupError> {
        let f = self.field.as_ref().ok_or_else(|| PGroupError::UnsupportedKind("not a Heisenberg group".into()))?;
        let q = f.degree() as usize;
        let w = widen(&x.w);
        Ok((f.from_coords(&w[..q]), f.from_coords(&w[q..]), f.from_coords(&widen(&x.z))))
    }

    /// Uniform random element.
    pub fn random_elem<R: Rng>(&self, rng: &mut R) -> PElem {
        PElem {
            w: (0..self.dw).map(|_| rng.gen_range(0..self.p) as u32).collect(),
            z: (0..self.dz).map(|_| rng.gen_range(0..self.p) as u32).collect(),
        }
    }

    /// Closure under the coordinate units; fails past `cap` elements.
    pub fn enumerate(&self, cap: usize) -> Result<std::sync::Arc<crate::grp::Enumerated<PGroup>>, crate::error::GroupError> {
        let mut gens: Vec<PElem> = (0..self.dw).map(|i| self.elem(&unit(self.dw, i), &vec![0; self.dz])).collect();
        gens.extend((0..self.dz).map(|k| self.elem(&vec![0; self.dw], &unit(self.dz, k))));
        Ok(crate::grp::generate_closure(self.clone(), &gens, cap)?.into_handle())
    }

    /// All elements; only for small groups.
    pub fn elements(&self) -> Vec<PElem> {
        let n = self.order().expect("order fits in u64") as usize;
        let d = self.order_exponent();
        (0..n)
            .map(|mut idx| {
                let mut c = vec![0u64; d];
                for x in c.iter_mut() {
                    *x = (idx as u64) % self.p;
                    idx /= self.p as usize;
                }
                self.elem(&c[..self.dw], &c[self.dw..])
            })
            .collect()
    }
}

impl Group for PGroup {
    type Elem = PElem;

    fn identity(&self) -> PElem {
        PElem { w: vec![0; self.dw], z: vec![0; self.dz] }
    }

    fn mul(&self, a: &PElem, b: &PElem) -> PElem {
        let p = self.p;
        let mut z: Vec<u64> = a.z.iter().zip(&b.z).map(|(&x, &y)| x as u64 + y as u64).collect();
        for &(k, i, j, c) in &self.terms {
            z[k] += c * (a.w[i] as u64 * b.w[j] as u64 % p);
        }
        PElem {
            w: a.w.iter().zip(&b.w).map(|(&x, &y)| ((x + y) as u64 % p) as u32).collect(),
            z: z.into_iter().map(|x| (x % p) as u32).collect(),
        }
    }

    fn inv(&self, a: &PElem) -> PElem {
        let p = self.p;
        let w = widen(&a.w);
        let b_aa = self.cocycle(&w, &w);
        PElem {
            w: a.w.iter().map(|&x| ((p - x as u64) % p) as u32).collect(),
            z: a.z.iter().zip(&b_aa).map(|(&x, &c)| ((p - x as u64 + c) % p) as u32).collect(),
        }
    }
}

pub(crate) fn widen(v: &[u32]) -> Vec<u64> {
    v.iter().map(|&x| x as u64).collect()
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0u64; n];
    v[i] = 1;
    v
}

/// A subgroup `{(w, z) : w ∈ W₀, z ∈ Z₀}` given by coordinate subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSubgroup {
    p: u64,
    dw: usize,
    dz: usize,
    w_basis: Vec<Vec<u64>>,
    z_basis: Vec<Vec<u64>>,
}

impl LinearSubgroup {
    pub fn new(group: &PGroup, w_vectors: Vec<Vec<u64>>, z_vectors: Vec<Vec<u64>>) -> Self {
        let w_basis = if group.dw == 0 { Vec::new() } else { span_basis(group.p, group.dw, &w_vectors) };
        let z_basis = if group.dz == 0 { Vec::new() } else { span_basis(group.p, group.dz, &z_vectors) };
        Self { p: group.p, dw: group.dw, dz: group.dz, w_basis, z_basis }
    }

    pub fn w_basis(&self) -> &[Vec<u64>] {
        &self.w_basis
    }

    pub fn z_basis(&self) -> &[Vec<u64>] {
        &self.z_basis
    }

    /// `|S| = p^e`.
    pub fn order_exponent(&self) -> usize {
        self.w_basis.len() + self.z_basis.len()
    }

    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.order_exponent() as u32)
    }

    pub fn is_trivial(&self) -> bool {
        self.order_exponent() == 0
    }

    pub fn contains(&self, x: &PElem) -> bool {
        in_span(self.p, &self.w_basis, &widen(&x.w)) && in_span(self.p, &self.z_basis, &widen(&x.z))
    }

    /// Basis vectors as elements of `GF(p)^{dw+dz}`.
    pub fn stacked_basis(&self) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        for w in &self.w_basis {
            let mut v = w.clone();
            v.extend(std::iter::repeat(0).take(self.dz));
            out.push(v);
        }
        for z in &self.z_basis {
            let mut v = vec![0u64; self.dw];
            v.extend(z);
            out.push(v);
        }
        out
    }

    pub fn is_subgroup_of(&self, other: &LinearSubgroup) -> bool {
        self.w_basis.iter().all(|w| in_span(self.p, &other.w_basis, w))
            && self.z_basis.iter().all(|z| in_span(self.p, &other.z_basis, z))
    }
}

pub(crate) fn in_span(p: u64, basis: &[Vec<u64>], v: &[u64]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let mut rows = basis.to_vec();
    rows.push(v.to_vec());
    Matrix::from_rows(p, &rows).rank() == basis.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VzCertificate {
    pub holds: bool,
    pub alpha: usize,
    pub method: String,
    /// A `w` whose commutator map is not onto `P′`.
    pub witness: Option<Vec<u64>>,
}

const EXHAUSTIVE_LIMIT: u64 = 100_000;

/// Checks that `y ↦ [x, y]` maps onto `P′` for every `x ∉ Z(P)`, so `cd P = {1, p^α}` with `p^{2α} = |P:Z(P)|`.
pub fn vz_certificate(group: &PGroup) -> Result<VzCertificate, PGroupError> {
    let radical = group.radical();
    let derived = group.derived_basis();
    if group.dz == 0 || !radical.is_empty() || derived.len() != group.dz {
        return Err(PGroupError::UnsupportedKind(format!(
            "P′ = Z(P) fails: radical of dimension {}, derived subgroup of dimension {} in a center of dimension {}",
            radical.len(),
            derived.len(),
            group.dz + radical.len()
        )));
    }
    let alpha = group.dw / 2;
    if group.dz == 1 {
        return Ok(VzCertificate { holds: true, alpha, method: "nondegenerate alternating form".into(), witness: None });
    }
    if group.kind() == PKind::Heisenberg && heisenberg_form_is_field_bilinear(group) {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..64 {
            let x = group.random_elem(&mut rng);
            let w = widen(&x.w);
            if w.iter().any(|&c| c != 0) && group.commutator_map(&w).rank() != group.dz {
                return Ok(VzCertificate { holds: false, alpha, method: "field-bilinear form".into(), witness: Some(w) });
            }
        }
        return Ok(VzCertificate { holds: true, alpha, method: "field-bilinear form".into(), witness: None });
    }
    let total = group.p.checked_pow(group.dw as u32).filter(|&n| n <= EXHAUSTIVE_LIMIT).ok_or_else(|| {
        PGroupError::UnsupportedKind("no structural argument and too many cosets to enumerate".into())
    })?;
    for idx in 1..total {
        let mut w = vec![0u64; group.dw];
        let mut t = idx;
        for c in w.iter_mut() {
            *c = t % group.p;
            t /= group.p;
        }
        if group.commutator_map(&w).rank() != group.dz {
            return Ok(VzCertificate { holds: false, alpha, method: "exhaustive".into(), witness: Some(w) });
        }
    }
    Ok(VzCertificate { holds: true, alpha, method: "exhaustive".into(), witness: None })
}

/// `β((a, b), (a′, b′)) = ab′ − a′b` in the field, checked on basis pairs.
fn heisenberg_form_is_field_bilinear(group: &PGroup) -> bool {
    let Some(f) = group.field.as_ref() else { return false };
    let q = f.degree() as usize;
    for i in 0..group.dw {
        for j in 0..group.dw {
            let (x, y) = (unit(group.dw, i), unit(group.dw, j));
            let (a, b) = (f.from_coords(&x[..q]), f.from_coords(&x[q..]));
            let (a2, b2) = (f.from_coords(&y[..q]), f.from_coords(&y[q..]));
            let expect = f.coords(f.sub(f.mul(a, b2), f.mul(a2, b)));
            if group.commutator_form(&x, &y) != expect {
                return false;
            }
        }
    }
    true
}
