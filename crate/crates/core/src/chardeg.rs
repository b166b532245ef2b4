//! Character degrees by the class-algebra method over a prime field.
//!
//! Central characters `ω_χ(K) = |K|·χ(g_K)/χ(1)` are the simultaneous
//! eigenvectors of the class matrices `(A_i)_{jk} = a_ijk`, found by repeated
//! eigenspace splitting over `GF(ℓ)` with `ℓ ≡ 1 (mod exp G)` and `ℓ > |G|`.
//! Degrees, restriction norms, and constituent multiplicities are all bounded
//! by `|G|`, so their residues mod `ℓ` determine them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::CharError;
use crate::gf::matrix::span_basis;
use crate::gf::Matrix;
use crate::grp::{self, ConjClasses, GroupHandle, IndexGroup, Subgroup, SubgroupView};
use crate::numth::{is_prime, pow_mod};

pub const DEFAULT_CLASS_CAP: usize = 3000;

const VERIFY_BUDGET: usize = 200_000_000;

/// Smallest prime `ℓ ≡ 1 (mod exponent)` with `ℓ > order`.
pub fn choose_modulus(order: u64, exponent: u64) -> u64 {
    let mut ell = order / exponent * exponent + 1;
    if ell <= order {
        ell += exponent;
    }
    while !is_prime(ell) {
        ell += exponent;
    }
    ell
}

fn inv_mod(a: u64, ell: u64) -> u64 {
    pow_mod(a, ell - 2, ell)
}

/// Conjugacy classes together with the modulus used for their structure constants.
pub struct ClassAlgebra {
    group: GroupHandle,
    classes: ConjClasses,
    ell: u64,
    identity_class: usize,
    inv_sizes: Vec<u64>,
}

impl ClassAlgebra {
    pub fn new(group: GroupHandle, class_cap: usize) -> Result<Self, CharError> {
        let ell = choose_modulus(group.order() as u64, grp::exponent(group.as_ref()));
        Self::with_modulus(group, ell, class_cap)
    }

    /// Uses a prescribed modulus, e.g. the one already chosen for an overgroup.
    pub fn with_modulus(group: GroupHandle, ell: u64, class_cap: usize) -> Result<Self, CharError> {
        let n = group.order() as u64;
        let e = grp::exponent(group.as_ref());
        if !is_prime(ell) {
            return Err(CharError::ModulusMismatch { ell, reason: "not prime".into() });
        }
        if (ell - 1) % e != 0 {
            return Err(CharError::ModulusMismatch { ell, reason: format!("not 1 mod exponent {e}") });
        }
        if ell <= n {
            return Err(CharError::ModulusMismatch { ell, reason: format!("not above the order {n}") });
        }
        let classes = grp::conjugacy_classes(group.as_ref());
        if classes.len() > class_cap {
            return Err(CharError::ClassCapExceeded { count: classes.len(), cap: class_cap });
        }
        let identity_class = classes.class_index(group.identity());
        let inv_sizes = (0..classes.len()).map(|k| inv_mod(classes.size(k) as u64 % ell, ell)).collect();
        Ok(Self { group, classes, ell, identity_class, inv_sizes })
    }

    pub fn modulus(&self) -> u64 {
        self.ell
    }

    pub fn classes(&self) -> &ConjClasses {
        &self.classes
    }

    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn identity_class(&self) -> usize {
        self.identity_class
    }

    /// `A_i` with `(A_i)_{jk} = #{x ∈ K_i : x⁻¹ z_k ∈ K_j}`, entries reduced mod `ℓ`.
    pub fn class_matrix(&self, i: usize) -> Matrix {
        let r = self.classes.len();
        let mut a = Matrix::zeros(self.ell, r, r);
        for j in 0..r {
            for (k, v) in self.class_row(i, j) {
                a[(j, k as usize)] = v;
            }
        }
        a
    }

    /// Row `j` of `A_i` mod `ℓ`, using `|K_k|·a_ijk = |K_j|·#{x ∈ K_i : x z_j ∈ K_k}`.
    ///
    /// Costs `|K_i|` products, against `r·|K_i|` for a whole matrix.
    pub fn class_row(&self, i: usize, j: usize) -> Vec<(u32, u64)> {
        let g = self.group.as_ref();
        let z = self.classes.representative(j);
        let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
        for &x in self.classes.members(i) {
            *counts.entry(self.classes.class_index(g.mul(x, z)) as u32).or_default() += 1;
        }
        let ell = self.ell;
        let kj = self.classes.size(j) as u64 % ell;
        counts.into_iter().map(|(k, c)| (k, c % ell * kj % ell * self.inv_sizes[k as usize] % ell)).collect()
    }

    /// `a_ijk` as an exact count.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> u64 {
        let g = self.group.as_ref();
        let z = self.classes.representative(k);
        self.classes.members(i).iter().filter(|&&x| self.classes.class_index(g.mul(g.inv(x), z)) == j).count() as u64
    }

    pub fn central_characters(&self) -> Result<Vec<CentralCharacter>, CharError> {
        let r = self.classes.len();
        let ell = self.ell;
        let mut spaces: Vec<Vec<Vec<u64>>> = vec![Matrix::identity(ell, r).row_vecs()];
        let mut splitting = Vec::new();
        let mut order: Vec<usize> = (0..r).filter(|&i| i != self.identity_class).collect();
        order.sort_by_key(|&i| self.classes.size(i));
        for i in order {
            if spaces.iter().all(|s| s.len() == 1) {
                break;
            }
            let before = spaces.len();
            let mut next = Vec::with_capacity(spaces.len());
            for space in spaces {
                if space.len() == 1 {
                    next.push(space);
                } else {
                    next.extend(split(|j| self.class_row(i, j), space, ell)?);
                }
            }
            if next.len() > before {
                splitting.push(i);
            }
            spaces = next;
        }
        if spaces.len() != r {
            return Err(CharError::SplitFailure(format!("{} eigenspaces for {r} classes", spaces.len())));
        }
        let omegas: Vec<Vec<u64>> = spaces
            .into_iter()
            .map(|space| {
                let v = &space[0];
                let lead = v[self.identity_class];
                if lead == 0 {
                    return Err(CharError::SplitFailure("eigenvector vanishes at the identity class".into()));
                }
                let inv = inv_mod(lead, ell);
                Ok(v.iter().map(|&x| x * inv % ell).collect())
            })
            .collect::<Result<_, _>>()?;
        // spot check: A_i ω = ω_i ω in full for the cheapest splitting classes
        let mut budget = VERIFY_BUDGET;
        splitting.sort_by_key(|&i| self.classes.size(i));
        for i in splitting {
            let cost = r * r * self.classes.size(i);
            if cost > budget {
                break;
            }
            budget -= cost;
            let rows: Vec<Vec<(u32, u64)>> = (0..r).map(|j| self.class_row(i, j)).collect();
            for omega in &omegas {
                for (j, row) in rows.iter().enumerate() {
                    let lhs = row.iter().fold(0, |acc, &(k, v)| (acc + v * omega[k as usize]) % ell);
                    if lhs != omega[i] * omega[j] % ell {
                        return Err(CharError::Inconsistent(format!("class {i} does not act by a scalar")));
                    }
                }
            }
        }
        let order = self.group.order() as u64;
        let mut out = Vec::with_capacity(r);
        for omega in omegas {
            let degree = self.degree_of(&omega, order)?;
            out.push(CentralCharacter { omega, degree });
        }
        out.sort_by(|a, b| (a.degree, &a.omega).cmp(&(b.degree, &b.omega)));
        Ok(out)
    }

    fn degree_of(&self, omega: &[u64], order: u64) -> Result<u64, CharError> {
        let ell = self.ell;
        let mut s = 0u64;
        for k in 0..omega.len() {
            let kb = self.classes.inverse_class(k);
            let size = self.classes.size(k) as u64;
            s = (s + omega[k] * omega[kb] % ell * inv_mod(size % ell, ell)) % ell;
        }
        if s == 0 {
            return Err(CharError::Inconsistent("zero norm".into()));
        }
        let d2 = (order % ell) * inv_mod(s, ell) % ell;
        let d = (d2 as f64).sqrt().round() as u64;
        let d = (d.saturating_sub(1)..=d + 1).find(|&x| x > 0 && x * x == d2);
        match d {
            Some(d) if order % d == 0 => Ok(d),
            _ => Err(CharError::Inconsistent(format!("{d2} is not the square of a divisor of {order}"))),
        }
    }

    /// `χ(g_k)` mod `ℓ`.
    pub fn value(&self, chi: &CentralCharacter, k: usize) -> u64 {
        let size = self.classes.size(k) as u64 % self.ell;
        chi.degree % self.ell * chi.omega[k] % self.ell * inv_mod(size, self.ell) % self.ell
    }

    /// `⟨χ_D, χ_D⟩_D` for `D ≤ G`.
    pub fn restriction_norm(&self, chi: &CentralCharacter, d: &Subgroup) -> u64 {
        let ell = self.ell;
        let mut total = 0u64;
        for k in 0..self.classes.len() {
            let inside = self.classes.members(k).iter().filter(|&&x| d.contains(x)).count() as u64;
            if inside == 0 {
                continue;
            }
            let kb = self.classes.inverse_class(k);
            let term = self.value(chi, k) * self.value(chi, kb) % ell;
            total = (total + inside % ell * term) % ell;
        }
        total * inv_mod(d.order() as u64 % ell, ell) % ell
    }
}

/// Splits an `A`-invariant subspace (RREF row basis) into eigenspaces of `A`.
fn split(row: impl Fn(usize) -> Vec<(u32, u64)>, basis: Vec<Vec<u64>>, ell: u64) -> Result<Vec<Vec<Vec<u64>>>, CharError> {
    let d = basis.len();
    let r = basis[0].len();
    let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
    let mut rest = Matrix::zeros(ell, d, d);
    for (s, &p) in pivots.iter().enumerate() {
        let a = row(p);
        for (t, b) in basis.iter().enumerate() {
            rest[(s, t)] = a.iter().fold(0, |acc, &(k, v)| (acc + v * b[k as usize]) % ell);
        }
    }
    if rest.is_diagonal_constant() {
        return Ok(vec![basis]);
    }
    let roots = rest.charpoly().roots();
    if roots.len() == 1 {
        return Ok(vec![basis]);
    }
    let mut parts = Vec::with_capacity(roots.len());
    let mut total = 0;
    for lambda in roots {
        let shifted = rest.sub(&Matrix::scalar(ell, d, lambda));
        let vectors: Vec<Vec<u64>> = shifted
            .kernel()
            .iter()
            .map(|c| {
                let mut v = vec![0u64; r];
                for (t, &ct) in c.iter().enumerate() {
                    if ct != 0 {
                        for (vi, &bi) in v.iter_mut().zip(&basis[t]) {
                            *vi = (*vi + ct * bi) % ell;
                        }
                    }
                }
                v
            })
            .collect();
        total += vectors.len();
        parts.push(span_basis(ell, r, &vectors));
    }
    if total != d {
        return Err(CharError::SplitFailure(format!("eigenspaces of dimension {total} inside dimension {d}")));
    }
    Ok(parts)
}

/// A central character `ω` (normalized at the identity class) and its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCharacter {
    pub omega: Vec<u64>,
    pub degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degrees: Vec<u64>,
    pub degree_set: Vec<u64>,
    pub linear_count: u64,
}

impl DegreeReport {
    pub fn from_degrees(mut degrees: Vec<u64>) -> Self {
        degrees.sort_unstable();
        let mut degree_set = degrees.clone();
        degree_set.dedup();
        let linear_count = degrees.iter().filter(|&&d| d == 1).count() as u64;
        Self { degrees, degree_set, linear_count }
    }
}

/// Degree multiset of `G`, with `Σ d² = |G|` and `#linear = |G:G′|` enforced.
pub fn degrees(group: &GroupHandle, class_cap: usize) -> Result<DegreeReport, CharError> {
    let alg = ClassAlgebra::new(group.clone(), class_cap)?;
    let chars = alg.central_characters()?;
    let report = DegreeReport::from_degrees(chars.iter().map(|c| c.degree).collect());
    let order = group.order() as u64;
    let sum: u64 = report.degrees.iter().map(|d| d * d).sum();
    if sum != order {
        return Err(CharError::Inconsistent(format!("sum of squared degrees {sum} differs from |G| = {order}")));
    }
    let g = group.as_ref();
    let derived = grp::derived_subgroup(g, &grp::whole(g));
    let abel = order / derived.order() as u64;
    if report.linear_count != abel {
        return Err(CharError::Inconsistent(format!("{} linear characters but |G:G′| = {abel}", report.linear_count)));
    }
    Ok(report)
}

/// The irreducible characters of a subgroup, computed with the overgroup's modulus.
pub struct SubgroupCharacters {
    view: SubgroupView,
    algebra: ClassAlgebra,
    chars: Vec<CentralCharacter>,
}

impl SubgroupCharacters {
    pub fn new(parent: &ClassAlgebra, d: &Subgroup, class_cap: usize) -> Result<Self, CharError> {
        let view = SubgroupView::new(parent.group().clone(), d);
        let handle: GroupHandle = std::sync::Arc::new(SubgroupView::new(parent.group().clone(), d));
        let algebra = ClassAlgebra::with_modulus(handle, parent.modulus(), class_cap)?;
        let chars = algebra.central_characters()?;
        Ok(Self { view, algebra, chars })
    }

    pub fn characters(&self) -> &[CentralCharacter] {
        &self.chars
    }

    /// `⟨χ_D, θ⟩_D` for every `θ ∈ Irr(D)`, in the order of [`Self::characters`].
    pub fn constituents(&self, parent: &ClassAlgebra, chi: &CentralCharacter) -> Vec<u64> {
        let ell = parent.modulus();
        let cl = self.algebra.classes();
        let inv_order = inv_mod(self.view.order() as u64 % ell, ell);
        let chi_vals: Vec<u64> = (0..cl.len())
            .map(|k| {
                let x = self.view.parent_index(cl.representative(k));
                parent.value(chi, parent.classes().class_index(x))
            })
            .collect();
        self.chars
            .iter()
            .map(|theta| {
                let mut total = 0u64;
                for k in 0..cl.len() {
                    let kb = cl.inverse_class(k);
                    let term = chi_vals[k] * self.algebra.value(theta, kb) % ell;
                    total = (total + cl.size(k) as u64 % ell * term) % ell;
                }
                total * inv_order % ell
            })
            .collect()
    }
}

/// `χ_D = eθ` with `e² = |P:D|`: full norm and a single constituent.
pub fn is_fully_ramified(
    parent: &ClassAlgebra,
    chi: &CentralCharacter,
    d: &Subgroup,
    d_chars: &SubgroupCharacters,
) -> bool {
    let index = (parent.group().order() / d.order()) as u64;
    if parent.restriction_norm(chi, d) != index {
        return false;
    }
    d_chars.constituents(parent, chi).iter().filter(|&&m| m != 0).count() == 1
}
