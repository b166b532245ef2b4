//! Generic finite-group engine.
//!
//! A concrete group implements [`Group`] over canonical-form elements. Once
//! enumerated by [`generate_closure`] it is viewed through [`IndexGroup`]:
//! elements become indices `0..n` in the fixed total order of the canonical
//! forms, and all structural algorithms (classes, series, Fitting subgroup,
//! quotients) run on indices.
//!
//! Commutators follow `[x, y] = x⁻¹ y⁻¹ x y`.

mod algo;
pub mod fixtures;
mod quotient;
mod view;

use std::collections::VecDeque;

use rustc_hash::FxHashMap as HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

pub use algo::*;
pub use quotient::Quotient;
pub use view::SubgroupView;

use crate::error::GroupError;

/// Default enumeration cap.
pub const DEFAULT_CAP: usize = 2_000_000;

/// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 2048;

/// A group given by an element factory.
pub trait Group: Send + Sync {
    /// Canonical form: equality is group-element equality, `Ord` is the fixed total order.
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ai = self.inv(a);
        let bi = self.inv(b);
        self.mul(&self.mul(&ai, &bi), &self.mul(a, b))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut acc = self.identity();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// An enumerated group with elements `0..order()`.
pub trait IndexGroup: Send + Sync {
    fn order(&self) -> usize;
    fn identity(&self) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;
    fn generators(&self) -> &[u32];

    fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// `b⁻¹ a b`.
    fn conjugate(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(b), a), b)
    }
}

/// Shared handle to an enumerated group.
pub type GroupHandle = Arc<dyn IndexGroup>;

/// A [`Group`] together with its full, sorted enumeration.
pub struct Enumerated<G: Group> {
    group: G,
    elems: Vec<G::Elem>,
    index: HashMap<G::Elem, u32>,
    inverses: Vec<u32>,
    identity: u32,
    gens: Vec<u32>,
    table: Option<Vec<u32>>,
}

impl<G: Group> Debug for Enumerated<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Enumerated(order {})", self.elems.len())
    }
}

/// Breadth-first closure of `generators` under right multiplication.
///
/// The result is sorted by the canonical element order, so indices are
/// deterministic. Fails with [`GroupError::ClosureLimitExceeded`] once more
/// than `cap` elements are found.
pub fn generate_closure<G: Group>(group: G, generators: &[G::Elem], cap: usize) -> Result<Enumerated<G>, GroupError> {
    let id = group.identity();
    let mut seen: HashMap<G::Elem, ()> = HashMap::default();
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = group.mul(&x, g);
            if !seen.contains_key(&y) {
                if seen.len() >= cap {
                    return Err(GroupError::ClosureLimitExceeded(cap));
                }
                seen.insert(y.clone(), ());
                queue.push_back(y);
            }
        }
    }
    let mut elems: Vec<G::Elem> = seen.into_keys().collect();
    elems.sort();
    Ok(Enumerated::from_sorted(group, elems, generators))
}

impl<G: Group> Enumerated<G> {
    fn from_sorted(group: G, elems: Vec<G::Elem>, generators: &[G::Elem]) -> Self {
        let index: HashMap<G::Elem, u32> = elems.iter().enumerate().map(|(i, e)| (e.clone(), i as u32)).collect();
        let identity = index[&group.identity()];
        let inverses = elems.iter().map(|e| index[&group.inv(e)]).collect();
        let mut gens: Vec<u32> = generators.iter().map(|g| index[g]).filter(|&g| g != identity).collect();
        gens.dedup();
        let mut out = Self { group, elems, index, inverses, identity, gens, table: None };
        let n = out.elems.len();
        if n <= TABLE_LIMIT {
            let mut table = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    table[a * n + b] = out.mul_slow(a as u32, b as u32);
                }
            }
            out.table = Some(table);
        }
        out
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let prod = self.group.mul(&self.elems[a as usize], &self.elems[b as usize]);
        self.index[&prod]
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn elements(&self) -> &[G::Elem] {
        &self.elems
    }

    pub fn elem(&self, i: u32) -> &G::Elem {
        &self.elems[i as usize]
    }

    pub fn index_of(&self, e: &G::Elem) -> Option<u32> {
        self.index.get(e).copied()
    }

    pub fn into_handle(self) -> Arc<Self>
    where
        G: 'static,
    {
        Arc::new(self)
    }
}

impl<G: Group> IndexGroup for Enumerated<G> {
    fn order(&self) -> usize {
        self.elems.len()
    }

    fn identity(&self) -> u32 {
        self.identity
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.elems.len() + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    fn generators(&self) -> &[u32] {
        &self.gens
    }
}

/// A subgroup of an enumerated group: sorted member indices plus generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    members: Vec<u32>,
    mask: Vec<bool>,
    gens: Vec<u32>,
}

impl Subgroup {
    pub(crate) fn from_members(n: usize, mut members: Vec<u32>, gens: Vec<u32>) -> Self {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; n];
        for &m in &members {
            mask[m as usize] = true;
        }
        Self { members, mask, gens }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn generators(&self) -> &[u32] {
        &self.gens
    }

    pub fn contains(&self, x: u32) -> bool {
        self.mask[x as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }
}

/// Checks associativity, identity, and inverses on the given samples.
pub fn check_axioms<G: Group>(group: &G, samples: &[(G::Elem, G::Elem, G::Elem)]) -> Result<(), String> {
    let id = group.identity();
    for (a, b, c) in samples {
        if group.mul(&group.mul(a, b), c) != group.mul(a, &group.mul(b, c)) {
            return Err(format!("associativity fails at {a:?}, {b:?}, {c:?}"));
        }
        if group.mul(a, &id) != *a || group.mul(&id, a) != *a {
            return Err(format!("identity fails at {a:?}"));
        }
        if group.mul(a, &group.inv(a)) != id || group.mul(&group.inv(a), a) != id {
            return Err(format!("inverse fails at {a:?}"));
        }
    }
    Ok(())
}
