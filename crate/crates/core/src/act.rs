//! Structured automorphisms of the cocycle p-groups and the groups they generate.
//!
//! Every automorphism here acts on coordinates as a block-diagonal linear map
//! `(w, z) ↦ (L_w·w, L_z·z)`, so fixed points, centralizers, and the
//! subgroup `D` are all kernels over `GF(p)`. Acting groups multiply as right
//! actions: `x·(h₁h₂) = (x·h₁)·h₂`, i.e. `h₁h₂ = h₂ ∘ h₁`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::ActError;
use crate::gf::{FieldHandle, Matrix};
use crate::grp::{self, generate_closure, Enumerated, Group, GroupHandle, IndexGroup, Subgroup};
use crate::numth::pow_mod;
use crate::pgrp::{in_span, unit, LinearSubgroup, PElem, PGroup, PKind};

/// `(a, b, c) ↦ (u·a^{σⁱ}, v·b^{σⁱ}, uv·c^{σⁱ})` on a Heisenberg group; `u`, `v` packed field elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HeisAut {
    pub u: u32,
    pub v: u32,
    pub i: u32,
}

/// `(v, α, z) ↦ (M·v, M̂·α, z_mult·z)` on a dual pairing group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EsAut {
    pub m: Matrix,
    pub m_hat: Matrix,
    pub z_mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Aut {
    Heis(HeisAut),
    Es(EsAut),
    /// Independent actions on the two factors of a central product.
    Central(EsAut, EsAut),
}

/// Block-diagonal coordinate action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linear {
    pub lw: Matrix,
    pub lz: Matrix,
}

impl Linear {
    pub fn apply(&self, x: &PElem) -> PElem {
        PElem { w: self.lw.mul_vec_u32(&x.w), z: self.lz.mul_vec_u32(&x.z) }
    }

    pub fn is_identity(&self) -> bool {
        self.lw.is_identity() && self.lz.is_identity()
    }

    /// The action on `GF(p)^{dw+dz}`.
    pub fn full(&self) -> Matrix {
        self.lw.block_diag(&self.lz)
    }
}

impl HeisAut {
    pub fn new(u: u32, v: u32, i: u32) -> Self {
        Self { u, v, i }
    }

    /// Multiplication by `λ` on both `a` and `b` (so `c ↦ λ²c`).
    pub fn scalar(lambda: u32) -> Self {
        Self { u: lambda, v: lambda, i: 0 }
    }

    pub fn frobenius(field: &FieldHandle) -> Self {
        let one = field.from_int(1);
        Self { u: one, v: one, i: 1 % field.degree() }
    }

    /// `(ηa, η⁻¹b, c)`.
    pub fn opposite(field: &FieldHandle, eta: u32) -> Result<Self, ActError> {
        Ok(Self { u: eta, v: field.inv(eta)?, i: 0 })
    }
}

impl EsAut {
    /// `δ` on `V` with the induced `α ↦ α∘δ⁻¹` on the dual, center fixed.
    pub fn induced(m: Matrix) -> Result<Self, ActError> {
        let inv = m.inverse().ok_or_else(|| ActError::InvalidParams("matrix is singular".into()))?;
        let p = m.modulus();
        Ok(Self { m_hat: inv.transpose(), m, z_mult: 1 % p })
    }

    /// `(x·v, x·α, x²·z)`: the map `(v, α, z) ↦ (v^x, α^{x⁻¹}, x²z)`.
    pub fn scalar_pair(p: u64, dim: usize, x: u64) -> Self {
        Self { m: Matrix::scalar(p, dim, x % p), m_hat: Matrix::scalar(p, dim, x % p), z_mult: x % p * (x % p) % p }
    }

    /// `(ζ·v, α, ζ·z)`.
    pub fn scale_v(p: u64, dim: usize, zeta: u64) -> Self {
        Self { m: Matrix::scalar(p, dim, zeta % p), m_hat: Matrix::identity(p, dim), z_mult: zeta % p }
    }

    pub fn identity(p: u64, dim: usize) -> Self {
        Self { m: Matrix::identity(p, dim), m_hat: Matrix::identity(p, dim), z_mult: 1 % p }
    }

    /// `M̂ᵀ·M = z_mult·I`, which makes the map preserve `α(v)` up to the center multiplier.
    pub fn pairing_compatible(&self) -> bool {
        let p = self.m.modulus();
        self.m.is_square()
            && self.m_hat.is_square()
            && self.m.rows() == self.m_hat.rows()
            && self.m_hat.transpose().mul(&self.m) == Matrix::scalar(p, self.m.rows(), self.z_mult)
    }

    fn compose(&self, g: &EsAut) -> EsAut {
        let p = self.m.modulus();
        EsAut { m: self.m.mul(&g.m), m_hat: self.m_hat.mul(&g.m_hat), z_mult: self.z_mult * g.z_mult % p }
    }

    fn invert(&self) -> Result<EsAut, ActError> {
        let p = self.m.modulus();
        let singular = || ActError::InvalidParams("automorphism is not invertible".into());
        Ok(EsAut {
            m: self.m.inverse().ok_or_else(singular)?,
            m_hat: self.m_hat.inverse().ok_or_else(singular)?,
            z_mult: if self.z_mult == 0 { return Err(singular()) } else { pow_mod(self.z_mult, p - 2, p) },
        })
    }

    fn dim_ok(&self, p: u64, dim: usize) -> bool {
        self.m.modulus() == p && self.m.rows() == dim && self.m.cols() == dim && self.m_hat.rows() == dim && self.m_hat.cols() == dim
    }
}

fn heis_field(target: &PGroup) -> Result<&FieldHandle, ActError> {
    target.field().filter(|_| target.kind() == PKind::Heisenberg).ok_or(ActError::KindMismatch)
}

/// Dimensions of the pairing blocks of a central product.
fn central_dims(target: &PGroup) -> Result<(usize, usize), ActError> {
    if target.kind() != PKind::CentralProduct {
        return Err(ActError::KindMismatch);
    }
    let first = target.first_factor_dw().ok_or(ActError::KindMismatch)?;
    Ok((first / 2, (target.dw() - first) / 2))
}

/// Checks that `f` has the shape the target needs.
pub fn check_kind(target: &PGroup, f: &Aut) -> Result<(), ActError> {
    match f {
        Aut::Heis(h) => {
            let field = heis_field(target)?;
            if h.u >= field.size() || h.v >= field.size() || h.i >= field.degree() {
                return Err(ActError::InvalidParams("Heisenberg automorphism out of range".into()));
            }
            Ok(())
        }
        Aut::Es(e) if target.kind() == PKind::ExtraspecialDual && e.dim_ok(target.p(), target.dw() / 2) => Ok(()),
        Aut::Central(a, b) => {
            let (m1, m2) = central_dims(target)?;
            if a.dim_ok(target.p(), m1) && b.dim_ok(target.p(), m2) {
                Ok(())
            } else {
                Err(ActError::KindMismatch)
            }
        }
        _ => Err(ActError::KindMismatch),
    }
}

/// `f ∘ g`.
pub fn compose(target: &PGroup, f: &Aut, g: &Aut) -> Result<Aut, ActError> {
    match (f, g) {
        (Aut::Heis(a), Aut::Heis(b)) => {
            let field = heis_field(target)?;
            let q = field.degree();
            Ok(Aut::Heis(HeisAut {
                u: field.mul(a.u, field.frobenius(b.u, a.i as u64)),
                v: field.mul(a.v, field.frobenius(b.v, a.i as u64)),
                i: (a.i + b.i) % q,
            }))
        }
        (Aut::Es(a), Aut::Es(b)) => Ok(Aut::Es(a.compose(b))),
        (Aut::Central(a1, a2), Aut::Central(b1, b2)) => Ok(Aut::Central(a1.compose(b1), a2.compose(b2))),
        _ => Err(ActError::TargetMismatch),
    }
}

pub fn invert(target: &PGroup, f: &Aut) -> Result<Aut, ActError> {
    match f {
        Aut::Heis(a) => {
            let field = heis_field(target)?;
            let q = field.degree();
            let back = ((q - a.i) % q) as u64;
            Ok(Aut::Heis(HeisAut {
                u: field.frobenius(field.inv(a.u)?, back),
                v: field.frobenius(field.inv(a.v)?, back),
                i: back as u32,
            }))
        }
        Aut::Es(a) => Ok(Aut::Es(a.invert()?)),
        Aut::Central(a, b) => Ok(Aut::Central(a.invert()?, b.invert()?)),
    }
}

pub fn identity_aut(target: &PGroup) -> Result<Aut, ActError> {
    match target.kind() {
        PKind::Heisenberg => {
            let one = heis_field(target)?.from_int(1);
            Ok(Aut::Heis(HeisAut::new(one, one, 0)))
        }
        PKind::ExtraspecialDual => Ok(Aut::Es(EsAut::identity(target.p(), target.dw() / 2))),
        PKind::CentralProduct => {
            let (m1, m2) = central_dims(target)?;
            Ok(Aut::Central(EsAut::identity(target.p(), m1), EsAut::identity(target.p(), m2)))
        }
        _ => Err(ActError::KindMismatch),
    }
}

pub fn power(target: &PGroup, f: &Aut, mut k: u64) -> Result<Aut, ActError> {
    let mut acc = identity_aut(target)?;
    let mut base = f.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = compose(target, &acc, &base)?;
        }
        base = compose(target, &base, &base)?;
        k >>= 1;
    }
    Ok(acc)
}

pub fn linearize(target: &PGroup, f: &Aut) -> Result<Linear, ActError> {
    check_kind(target, f)?;
    match f {
        Aut::Heis(h) => {
            let field = heis_field(target)?;
            let i = h.i as u64;
            Ok(Linear {
                lw: field.as_linear_map(h.u, i)?.block_diag(&field.as_linear_map(h.v, i)?),
                lz: field.as_linear_map(field.mul(h.u, h.v), i)?,
            })
        }
        Aut::Es(e) => Ok(Linear { lw: e.m.block_diag(&e.m_hat), lz: Matrix::scalar(target.p(), 1, e.z_mult) }),
        Aut::Central(a, b) => Ok(Linear {
            lw: a.m.block_diag(&a.m_hat).block_diag(&b.m.block_diag(&b.m_hat)),
            lz: Matrix::scalar(target.p(), 1, a.z_mult),
        }),
    }
}

pub fn apply(target: &PGroup, f: &Aut, x: &PElem) -> Result<PElem, ActError> {
    if x.w.len() != target.dw() || x.z.len() != target.dz() {
        return Err(ActError::KindMismatch);
    }
    Ok(linearize(target, f)?.apply(x))
}

/// Why a map fails to be an automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatibilityWitness {
    pub reason: String,
    pub basis_pair: Option<(usize, usize)>,
}

/// Exact automorphism test: invertible blocks and `B(L e_i, L e_j) = L_z B(e_i, e_j)` on all basis pairs.
pub fn automorphism_check(target: &PGroup, f: &Aut) -> Result<(), CompatibilityWitness> {
    let fail = |reason: &str, pair| CompatibilityWitness { reason: reason.into(), basis_pair: pair };
    let lin = linearize(target, f).map_err(|e| fail(&e.to_string(), None))?;
    let pairing_ok = match f {
        Aut::Heis(_) => true,
        Aut::Es(e) => e.pairing_compatible(),
        Aut::Central(a, b) => a.pairing_compatible() && b.pairing_compatible(),
    };
    if !pairing_ok {
        return Err(fail("pairing compatibility M̂ᵀM = z_mult·I fails", None));
    }
    if lin.lw.inverse().is_none() || lin.lz.inverse().is_none() {
        return Err(fail("not invertible", None));
    }
    let dw = target.dw();
    let cols: Vec<Vec<u64>> = (0..dw).map(|j| lin.lw.col(j)).collect();
    for i in 0..dw {
        for j in 0..dw {
            let lhs = target.cocycle(&cols[i], &cols[j]);
            let rhs = lin.lz.mul_vec(&target.cocycle(&unit(dw, i), &unit(dw, j)));
            if lhs != rhs {
                return Err(fail("cocycle not preserved", Some((i, j))));
            }
        }
    }
    Ok(())
}

/// `Aut` values under the right-action product.
#[derive(Clone, Debug)]
pub struct AutGroup {
    target: Arc<PGroup>,
}

impl AutGroup {
    pub fn new(target: Arc<PGroup>) -> Self {
        Self { target }
    }
}

impl Group for AutGroup {
    type Elem = Aut;

    fn identity(&self) -> Aut {
        identity_aut(&self.target).expect("supported target")
    }

    fn mul(&self, a: &Aut, b: &Aut) -> Aut {
        compose(&self.target, b, a).expect("validated kinds")
    }

    fn inv(&self, a: &Aut) -> Aut {
        invert(&self.target, a).expect("automorphism")
    }
}

/// An enumerated group of automorphisms with named generators.
pub struct ActingGroup {
    target: Arc<PGroup>,
    group: Arc<Enumerated<AutGroup>>,
    labels: BTreeMap<String, Aut>,
    gen_order: Vec<String>,
    linear: Vec<Linear>,
}

impl std::fmt::Debug for ActingGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ActingGroup(order {}, generators {:?})", self.order(), self.gen_order)
    }
}

impl ActingGroup {
    pub fn generate(target: Arc<PGroup>, generators: &[(String, Aut)], cap: usize) -> Result<Self, ActError> {
        for (_, g) in generators {
            check_kind(&target, g)?;
            invert(&target, g)?;
        }
        let gens: Vec<Aut> = generators.iter().map(|(_, g)| g.clone()).collect();
        let group = generate_closure(AutGroup::new(target.clone()), &gens, cap)?.into_handle();
        let linear = group.elements().iter().map(|a| linearize(&target, a)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            target,
            group,
            labels: generators.iter().cloned().collect(),
            gen_order: generators.iter().map(|(n, _)| n.clone()).collect(),
            linear,
        })
    }

    pub fn target(&self) -> &Arc<PGroup> {
        &self.target
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn handle(&self) -> GroupHandle {
        self.group.clone()
    }

    pub fn enumerated(&self) -> &Arc<Enumerated<AutGroup>> {
        &self.group
    }

    pub fn element(&self, h: u32) -> &Aut {
        self.group.elem(h)
    }

    pub fn index_of(&self, a: &Aut) -> Option<u32> {
        self.group.index_of(a)
    }

    pub fn linear(&self, h: u32) -> &Linear {
        &self.linear[h as usize]
    }

    pub fn identity(&self) -> u32 {
        self.group.identity()
    }

    /// Named generators in construction order.
    pub fn generators(&self) -> Vec<(String, Aut)> {
        self.gen_order.iter().map(|n| (n.clone(), self.labels[n].clone())).collect()
    }

    pub fn labeled(&self, name: &str) -> Option<u32> {
        self.labels.get(name).and_then(|a| self.index_of(a))
    }

    /// Elements acting trivially on all of `P`.
    pub fn kernel(&self) -> Vec<u32> {
        (0..self.order() as u32).filter(|&h| self.linear[h as usize].is_identity()).collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }
}

/// Fixed points of a coordinate action on all of `P`.
pub fn fixed_subgroup(target: &PGroup, lin: &Linear) -> LinearSubgroup {
    let p = target.p();
    let kw = if target.dw() == 0 { Vec::new() } else { lin.lw.sub(&Matrix::identity(p, target.dw())).kernel() };
    let kz = if target.dz() == 0 { Vec::new() } else { lin.lz.sub(&Matrix::identity(p, target.dz())).kernel() };
    LinearSubgroup::new(target, kw, kz)
}

/// `true` if `L` maps the subgroup into itself.
pub fn is_invariant(target: &PGroup, lin: &Linear, d: &LinearSubgroup) -> bool {
    let p = target.p();
    d.w_basis().iter().all(|w| in_span(p, d.w_basis(), &lin.lw.mul_vec(w)))
        && d.z_basis().iter().all(|z| in_span(p, d.z_basis(), &lin.lz.mul_vec(z)))
}

/// Fixed cosets of `P/D` as `w`-representatives spanning the fixed space modulo `D̄`.
///
/// `P/D` is coordinatized as `W/D̄` where `D̄` is the `w`-part of `D`; this
/// needs `D` to contain every central `(0, z)`.
pub fn fixed_subgroup_mod(target: &PGroup, lin: &Linear, d: &LinearSubgroup) -> Result<Vec<Vec<u64>>, ActError> {
    if !is_invariant(target, lin, d) {
        return Err(ActError::NotInvariant);
    }
    if d.z_basis().len() != target.dz() {
        return Err(ActError::InvalidParams("D must contain (0, z) for every z".into()));
    }
    let p = target.p();
    let dw = target.dw();
    let dbar = d.w_basis();
    // solve (L_w − I)·w + Σ c_j d_j = 0
    let shifted = lin.lw.sub(&Matrix::identity(p, dw));
    let sys = if dbar.is_empty() { shifted } else { shifted.hstack(&Matrix::from_cols(p, dw, dbar)) };
    let sols: Vec<Vec<u64>> = sys.kernel().into_iter().map(|v| v[..dw].to_vec()).collect();
    let mut reps = Vec::new();
    let mut span = dbar.to_vec();
    for w in sols {
        if !in_span(p, &span, &w) {
            span.push(w.clone());
            reps.push(w);
        }
    }
    Ok(reps)
}

/// Fixed points of `L` inside `D`, as stacked `(w, z)` vectors.
pub fn fixed_in_subgroup(target: &PGroup, lin: &Linear, d: &LinearSubgroup) -> Vec<Vec<u64>> {
    let basis = d.stacked_basis();
    if basis.is_empty() {
        return Vec::new();
    }
    let p = target.p();
    let n = target.dw() + target.dz();
    let bd = Matrix::from_cols(p, n, &basis);
    let shifted = lin.full().sub(&Matrix::identity(p, n)).mul(&bd);
    shifted.kernel().iter().map(|c| bd.mul_vec(c)).collect()
}

/// What a Frobenius check acts on.
#[derive(Clone, Copy, Debug)]
pub enum FrobeniusTarget<'a> {
    Whole,
    /// `P/D`.
    Quotient(&'a LinearSubgroup),
    /// `D`, checked for elements outside the given kernel subgroup.
    Subgroup(&'a LinearSubgroup, Option<&'a Subgroup>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedWitness {
    pub h: u32,
    pub automorphism: String,
    /// Nonzero fixed vector in `(w, z)` coordinates (`w` only for quotients).
    pub element: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusCertificate {
    pub holds: bool,
    pub checked: usize,
    pub witness: Option<FixedWitness>,
}

/// Every nonidentity `h` (or every `h` outside the given kernel) has no nontrivial fixed points.
pub fn frobenius_certificate(h: &ActingGroup, target: FrobeniusTarget<'_>) -> Result<FrobeniusCertificate, ActError> {
    let p = h.target();
    let mut checked = 0;
    for idx in 0..h.order() as u32 {
        if idx == h.identity() {
            continue;
        }
        if let FrobeniusTarget::Subgroup(_, Some(k)) = target {
            if k.contains(idx) {
                continue;
            }
        }
        checked += 1;
        let lin = h.linear(idx);
        let fixed: Option<Vec<u64>> = match target {
            FrobeniusTarget::Whole => {
                let f = fixed_subgroup(p, lin);
                f.stacked_basis().into_iter().next()
            }
            FrobeniusTarget::Quotient(d) => fixed_subgroup_mod(p, lin, d)?.into_iter().next(),
            FrobeniusTarget::Subgroup(d, _) => fixed_in_subgroup(p, lin, d).into_iter().next(),
        };
        if let Some(element) = fixed {
            return Ok(FrobeniusCertificate {
                holds: false,
                checked,
                witness: Some(FixedWitness { h: idx, automorphism: format!("{:?}", h.element(idx)), element }),
            });
        }
    }
    Ok(FrobeniusCertificate { holds: true, checked, witness: None })
}

/// `C_H(P′)`: elements whose `z`-action fixes the derived subgroup pointwise.
pub fn centralizer_c(h: &ActingGroup) -> Subgroup {
    let p = h.target();
    let derived = p.derived_basis();
    let members: Vec<u32> = (0..h.order() as u32)
        .filter(|&idx| {
            let lz = &h.linear(idx).lz;
            derived.iter().all(|v| lz.mul_vec(v) == *v)
        })
        .collect();
    grp::closure(h.handle().as_ref(), &members)
}

/// `C_P(C)`: the common fixed points of the generators of `C`.
pub fn centralized_d(h: &ActingGroup, c: &Subgroup) -> LinearSubgroup {
    let p = h.target();
    let m = p.p();
    let stack = |pick: &dyn Fn(&Linear) -> Matrix, dim: usize| -> Vec<Vec<u64>> {
        if dim == 0 {
            return Vec::new();
        }
        let mut rows = Vec::new();
        for &g in c.generators() {
            rows.extend(pick(h.linear(g)).sub(&Matrix::identity(m, dim)).row_vecs());
        }
        if rows.is_empty() {
            return (0..dim).map(|i| unit(dim, i)).collect();
        }
        Matrix::from_rows(m, &rows).kernel()
    };
    let kw = stack(&|l: &Linear| l.lw.clone(), p.dw());
    let kz = stack(&|l: &Linear| l.lz.clone(), p.dz());
    LinearSubgroup::new(p, kw, kz)
}

/// Fixed points by enumerating `P`; for cross-checks on small groups.
pub fn brute_force_fixed_count(target: &PGroup, lin: &Linear) -> usize {
    target.elements().iter().filter(|x| lin.apply(x) == **x).count()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SemiElem {
    pub x: PElem,
    pub h: u32,
}

/// `P ⋊ H` with `(x₁, h₁)(x₂, h₂) = (x₁·h₂ · x₂, h₁h₂)`.
#[derive(Clone)]
pub struct Semidirect {
    p: Arc<PGroup>,
    h: Arc<ActingGroup>,
}

impl Semidirect {
    pub fn new(h: Arc<ActingGroup>) -> Result<Self, ActError> {
        let p = h.target().clone();
        if h.order() as u64 % p.p() == 0 {
            return Err(ActError::InvalidParams(format!("p = {} divides |H| = {}", p.p(), h.order())));
        }
        Ok(Self { p, h })
    }

    pub fn p_group(&self) -> &Arc<PGroup> {
        &self.p
    }

    pub fn acting(&self) -> &Arc<ActingGroup> {
        &self.h
    }

    /// `|P|·|H|` as an exact decimal string.
    pub fn order_string(&self) -> String {
        let p = self.p.p() as u128;
        let mut n = self.h.order() as u128;
        for _ in 0..self.p.order_exponent() {
            n *= p;
        }
        n.to_string()
    }

    pub fn order(&self) -> Option<u64> {
        self.p.order().and_then(|n| n.checked_mul(self.h.order() as u64))
    }

    pub fn embed_p(&self, x: PElem) -> SemiElem {
        SemiElem { x, h: self.h.identity() }
    }

    pub fn embed_h(&self, h: u32) -> SemiElem {
        SemiElem { x: self.p.identity(), h }
    }

    /// Generators: coordinate units of `P` and the named generators of `H`.
    pub fn generators(&self) -> Vec<SemiElem> {
        let p = &self.p;
        let mut gens: Vec<SemiElem> =
            (0..p.dw()).map(|i| self.embed_p(p.elem(&unit(p.dw(), i), &vec![0; p.dz()]))).collect();
        gens.extend((0..p.dz()).map(|k| self.embed_p(p.elem(&vec![0; p.dw()], &unit(p.dz(), k)))));
        for (_, a) in self.h.generators() {
            gens.push(self.embed_h(self.h.index_of(&a).expect("generator enumerated")));
        }
        gens
    }

    /// Enumerates `G`; fails past `cap` elements.
    pub fn enumerate(&self, cap: usize) -> Result<Arc<Enumerated<Semidirect>>, ActError> {
        if self.order().map_or(true, |n| n > cap as u64) {
            return Err(ActError::Group(crate::error::GroupError::ClosureLimitExceeded(cap)));
        }
        let gens = self.generators();
        Ok(generate_closure(self.clone(), &gens, cap)?.into_handle())
    }
}

impl Group for Semidirect {
    type Elem = SemiElem;

    fn identity(&self) -> SemiElem {
        SemiElem { x: self.p.identity(), h: self.h.identity() }
    }

    fn mul(&self, a: &SemiElem, b: &SemiElem) -> SemiElem {
        let moved = self.h.linear(b.h).apply(&a.x);
        SemiElem { x: self.p.mul(&moved, &b.x), h: self.h.group.mul(a.h, b.h) }
    }

    fn inv(&self, a: &SemiElem) -> SemiElem {
        // (x, h)⁻¹ = ((x⁻¹)·h⁻¹, h⁻¹)
        let hi = self.h.group.inv(a.h);
        SemiElem { x: self.h.linear(hi).apply(&self.p.inv(&a.x)), h: hi }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::grp::DEFAULT_CAP;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn heis(p: u64, q: u32) -> (FieldHandle, Arc<PGroup>) {
        let f = make_field(p, q).unwrap();
        let g = Arc::new(PGroup::heisenberg(&f).unwrap());
        (f, g)
    }

    #[test]
    fn compose_and_invert() {
        let (f, g) = heis(7, 3);
        let lam = f.subgroup_generator(9).unwrap();
        let ls = Aut::Heis(HeisAut::new(lam, lam, 1));
        let id = identity_aut(&g).unwrap();
        assert_eq!(compose(&g, &ls, &invert(&g, &ls).unwrap()).unwrap(), id);
        // (λσ)^q = λ^{(p^q−1)/(p−1)}
        let n = f.pow(lam, 57);
        assert_eq!(power(&g, &ls, 3).unwrap(), Aut::Heis(HeisAut::new(n, n, 0)));
        let x = g.heis_triple(f.primitive(), f.from_int(3), f.from_int(2)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let auts = [ls.clone(), Aut::Heis(HeisAut::new(f.from_int(2), f.primitive(), 2)), id];
        for a in &auts {
            for b in &auts {
                let y = g.random_elem(&mut rng);
                let ab = compose(&g, a, b).unwrap();
                assert_eq!(apply(&g, &ab, &y).unwrap(), apply(&g, a, &apply(&g, b, &y).unwrap()).unwrap());
            }
        }
        assert_eq!(apply(&g, &identity_aut(&g).unwrap(), &x).unwrap(), x);
    }

    #[test]
    fn opposite_scaling_action() {
        let (f, g) = heis(7, 3);
        let eta = f.from_int(6);
        let a = Aut::Heis(HeisAut::opposite(&f, eta).unwrap());
        let (x, y, z) = (f.primitive(), f.from_int(4), f.pow(f.primitive(), 10));
        let img = apply(&g, &a, &g.heis_triple(x, y, z).unwrap()).unwrap();
        assert_eq!(g.heis_parts(&img).unwrap(), (f.mul(eta, x), f.mul(f.inv(eta).unwrap(), y), z));
    }

    #[test]
    fn pairing_group_actions() {
        let p = 7;
        let g = Arc::new(PGroup::extraspecial_dual(p, 3).unwrap());
        let xi = Aut::Es(EsAut::scalar_pair(p, 3, 2));
        let v = g.elem(&[1, 2, 3, 4, 5, 6], &[1]);
        assert_eq!(apply(&g, &xi, &v).unwrap(), g.elem(&[2, 4, 6, 8, 10, 12], &[4]));
        // α^{x⁻¹}(v^x) = x²·α(v)
        automorphism_check(&g, &xi).unwrap();
        let f = make_field(7, 3).unwrap();
        let lam = f.subgroup_generator(9).unwrap();
        let m = f.as_linear_map(lam, 0).unwrap();
        let delta = Aut::Es(EsAut::induced(m).unwrap());
        automorphism_check(&g, &delta).unwrap();
        let mut bad = EsAut::scalar_pair(p, 3, 2);
        bad.z_mult = 3;
        assert!(automorphism_check(&g, &Aut::Es(bad)).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let (a, b) = (g.random_elem(&mut rng), g.random_elem(&mut rng));
            for f in [&xi, &delta] {
                assert_eq!(apply(&g, f, &g.mul(&a, &b)).unwrap(), g.mul(&apply(&g, f, &a).unwrap(), &apply(&g, f, &b).unwrap()));
            }
        }
    }

    #[test]
    fn square_of_twisted_generator_is_minus_one() {
        // p ≡ 3 mod 8: (λσ)² = λ^{p+1} = −1 on V
        let p = 3;
        let f = make_field(p, 2).unwrap();
        let g = Arc::new(PGroup::extraspecial_dual(p, 2).unwrap());
        let lam = f.subgroup_generator(8).unwrap();
        let ls = compose(
            &g,
            &Aut::Es(EsAut::induced(f.as_linear_map(lam, 0).unwrap()).unwrap()),
            &Aut::Es(EsAut::induced(f.as_linear_map(f.from_int(1), 1).unwrap()).unwrap()),
        )
        .unwrap();
        let Aut::Es(sq) = power(&g, &ls, 2).unwrap() else { panic!() };
        assert_eq!(sq.m, Matrix::scalar(p, 2, p - 1));
        assert_eq!(sq.z_mult, 1);
    }

    #[test]
    fn kind_mismatch() {
        let (_, g) = heis(7, 3);
        let es = Aut::Es(EsAut::identity(7, 3));
        assert!(matches!(apply(&g, &es, &g.identity()), Err(ActError::KindMismatch)));
        let id = identity_aut(&g).unwrap();
        assert!(matches!(compose(&g, &id, &es), Err(ActError::TargetMismatch)));
    }

    #[test]
    fn fixed_points() {
        let (f, g) = heis(7, 3);
        let lam = f.subgroup_generator(9).unwrap();
        let fix = fixed_subgroup(&g, &linearize(&g, &Aut::Heis(HeisAut::scalar(lam))).unwrap());
        assert!(fix.is_trivial());
        let minus = f.from_int(-1);
        let fix = fixed_subgroup(&g, &linearize(&g, &Aut::Heis(HeisAut::scalar(minus))).unwrap());
        assert_eq!(fix, g.derived());
        let fix = fixed_subgroup(&g, &linearize(&g, &identity_aut(&g).unwrap()).unwrap());
        assert_eq!(fix.order_exponent(), 9);
    }

    #[test]
    fn fixed_points_match_enumeration() {
        let (f, g) = heis(3, 2);
        let auts = vec![
            Aut::Heis(HeisAut::scalar(f.primitive())),
            Aut::Heis(HeisAut::frobenius(&f)),
            Aut::Heis(HeisAut::new(f.from_int(2), f.from_int(2), 0)),
            Aut::Heis(HeisAut::new(f.primitive(), f.pow(f.primitive(), 3), 1)),
        ];
        let h = ActingGroup::generate(g.clone(), &[("a".into(), auts[0].clone()), ("b".into(), auts[1].clone())], DEFAULT_CAP).unwrap();
        for idx in 0..h.order() as u32 {
            let lin = h.linear(idx);
            let n = fixed_subgroup(&g, lin).order().unwrap() as usize;
            assert_eq!(n, brute_force_fixed_count(&g, lin));
        }
        let e = Arc::new(PGroup::extraspecial_dual(3, 2).unwrap());
        let h = ActingGroup::generate(
            e.clone(),
            &[
                ("d".into(), Aut::Es(EsAut::induced(f.as_linear_map(f.primitive(), 1).unwrap()).unwrap())),
                ("z".into(), Aut::Es(EsAut::scale_v(3, 2, 2))),
            ],
            DEFAULT_CAP,
        )
        .unwrap();
        for idx in 0..h.order() as u32 {
            let lin = h.linear(idx);
            assert_eq!(fixed_subgroup(&e, lin).order().unwrap() as usize, brute_force_fixed_count(&e, lin));
        }
    }

    #[test]
    fn frobenius_witness_in_derived_subgroup() {
        let (f, g) = heis(7, 3);
        let h = ActingGroup::generate(g.clone(), &[("eta".into(), Aut::Heis(HeisAut::opposite(&f, f.from_int(-1)).unwrap()))], DEFAULT_CAP)
            .unwrap();
        let cert = frobenius_certificate(&h, FrobeniusTarget::Whole).unwrap();
        assert!(!cert.holds);
        let w = cert.witness.unwrap();
        let x = g.elem(&w.element[..6], &w.element[6..]);
        assert!(g.derived().contains(&x));
        let trivial = ActingGroup::generate(g.clone(), &[], DEFAULT_CAP).unwrap();
        assert!(frobenius_certificate(&trivial, FrobeniusTarget::Whole).unwrap().holds);
        let cert = frobenius_certificate(&h, FrobeniusTarget::Quotient(&g.derived())).unwrap();
        assert!(cert.holds);
    }

    #[test]
    fn semidirect_laws() {
        let (f, g) = heis(3, 2);
        let h = Arc::new(
            ActingGroup::generate(
                g.clone(),
                &[("l".into(), Aut::Heis(HeisAut::new(f.primitive(), f.primitive(), 1)))],
                DEFAULT_CAP,
            )
            .unwrap(),
        );
        let s = Semidirect::new(h.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rand_elem = |rng: &mut ChaCha8Rng| SemiElem { x: g.random_elem(rng), h: rng.gen_range(0..h.order() as u32) };
        for _ in 0..1000 {
            let (a, b, c) = (rand_elem(&mut rng), rand_elem(&mut rng), rand_elem(&mut rng));
            assert_eq!(s.mul(&s.mul(&a, &b), &c), s.mul(&a, &s.mul(&b, &c)));
            assert_eq!(s.mul(&a, &s.inv(&a)), s.identity());
        }
        for _ in 0..100 {
            let x = g.random_elem(&mut rng);
            let y = g.random_elem(&mut rng);
            assert_eq!(s.mul(&s.embed_p(x.clone()), &s.embed_p(y.clone())), s.embed_p(g.mul(&x, &y)));
            let hh = rng.gen_range(0..h.order() as u32);
            let conj = s.mul(&s.mul(&s.embed_h(hh), &s.embed_p(x.clone())), &s.inv(&s.embed_h(hh)));
            assert_eq!(conj.h, h.identity());
            let hinv = h.enumerated().inv(hh);
            assert_eq!(conj.x, h.linear(hinv).apply(&x));
        }
        let e = s.enumerate(DEFAULT_CAP).unwrap();
        assert_eq!(e.order() as u64, s.order().unwrap());
        assert_eq!(s.order_string(), (729 * h.order()).to_string());
    }

    #[test]
    fn semidirect_rejects_p_divisible_order() {
        let (f, g) = heis(3, 2);
        let h = Arc::new(ActingGroup::generate(g, &[("s".into(), Aut::Heis(HeisAut::frobenius(&f)))], DEFAULT_CAP).unwrap());
        assert_eq!(h.order(), 2);
        assert!(Semidirect::new(h).is_ok());
        let (f, g) = heis(3, 3);
        let h = Arc::new(ActingGroup::generate(g, &[("s".into(), Aut::Heis(HeisAut::frobenius(&f)))], DEFAULT_CAP).unwrap());
        assert!(matches!(Semidirect::new(h), Err(ActError::InvalidParams(_))));
    }
}
