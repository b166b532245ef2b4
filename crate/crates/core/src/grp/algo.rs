use std::collections::VecDeque;
use std::sync::Arc;

use super::{GroupHandle, IndexGroup, Quotient, Subgroup};
use crate::error::GroupError;
use crate::numth::lcm;

pub fn whole(g: &dyn IndexGroup) -> Subgroup {
    Subgroup::from_members(g.order(), (0..g.order() as u32).collect(), g.generators().to_vec())
}

pub fn trivial(g: &dyn IndexGroup) -> Subgroup {
    Subgroup::from_members(g.order(), vec![g.identity()], Vec::new())
}

/// Subgroup generated by `gens`.
pub fn closure(g: &dyn IndexGroup, gens: &[u32]) -> Subgroup {
    let n = g.order();
    let mut gens: Vec<u32> = gens.iter().copied().filter(|&x| x != g.identity()).collect();
    gens.sort_unstable();
    gens.dedup();
    let mut mask = vec![false; n];
    let id = g.identity();
    mask[id as usize] = true;
    let mut members = vec![id];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for &s in &gens {
            let y = g.mul(x, s);
            if !mask[y as usize] {
                mask[y as usize] = true;
                members.push(y);
                queue.push_back(y);
            }
        }
    }
    members.sort_unstable();
    Subgroup { members, mask, gens }
}

/// Smallest subgroup containing `s` that is normalized by `ambient_gens`.
pub fn normal_closure(g: &dyn IndexGroup, ambient_gens: &[u32], s: &[u32]) -> Subgroup {
    let mut sub = closure(g, s);
    loop {
        let mut extra = Vec::new();
        for &x in sub.generators() {
            for &a in ambient_gens {
                let c = g.conjugate(x, a);
                if !sub.contains(c) && !extra.contains(&c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            return sub;
        }
        let mut gens = sub.generators().to_vec();
        gens.extend(extra);
        sub = closure(g, &gens);
    }
}

pub fn is_normal_in(g: &dyn IndexGroup, n: &Subgroup, ambient_gens: &[u32]) -> bool {
    n.generators().iter().all(|&x| ambient_gens.iter().all(|&a| n.contains(g.conjugate(x, a))))
}

/// `[A, B]`: the normal closure in `⟨A ∪ B⟩` of the generator commutators.
pub fn commutator_subgroup(g: &dyn IndexGroup, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut comms = Vec::new();
    for &x in a.generators() {
        for &y in b.generators() {
            comms.push(g.commutator(x, y));
        }
    }
    let mut ambient: Vec<u32> = a.generators().to_vec();
    ambient.extend_from_slice(b.generators());
    normal_closure(g, &ambient, &comms)
}

pub fn derived_subgroup(g: &dyn IndexGroup, s: &Subgroup) -> Subgroup {
    commutator_subgroup(g, s, s)
}

/// `S ≥ S′ ≥ S″ ≥ …` down to the first repeated term.
pub fn derived_series_of(g: &dyn IndexGroup, s: &Subgroup) -> Vec<Subgroup> {
    let mut series = vec![s.clone()];
    loop {
        let last = series.last().unwrap();
        let next = derived_subgroup(g, last);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

pub fn derived_series(g: &dyn IndexGroup) -> Vec<Subgroup> {
    derived_series_of(g, &whole(g))
}

/// Number of strict steps in the derived series; `None` if it stalls above 1.
pub fn derived_length(g: &dyn IndexGroup) -> Option<usize> {
    let series = derived_series(g);
    series.last().unwrap().is_trivial().then(|| series.len() - 1)
}

pub fn lower_central_series_of(g: &dyn IndexGroup, s: &Subgroup) -> Vec<Subgroup> {
    let mut series = vec![s.clone()];
    loop {
        let last = series.last().unwrap();
        let next = commutator_subgroup(g, last, s);
        if next.order() == last.order() {
            return series;
        }
        series.push(next);
    }
}

pub fn lower_central_series(g: &dyn IndexGroup) -> Vec<Subgroup> {
    lower_central_series_of(g, &whole(g))
}

pub fn is_nilpotent_subgroup(g: &dyn IndexGroup, s: &Subgroup) -> bool {
    lower_central_series_of(g, s).last().unwrap().is_trivial()
}

pub fn is_nilpotent(g: &dyn IndexGroup) -> bool {
    is_nilpotent_subgroup(g, &whole(g))
}

/// Nilpotency class, if nilpotent.
pub fn nilpotency_class(g: &dyn IndexGroup) -> Option<usize> {
    let series = lower_central_series(g);
    series.last().unwrap().is_trivial().then(|| series.len() - 1)
}

pub fn is_abelian_subgroup(g: &dyn IndexGroup, s: &Subgroup) -> bool {
    let gens = s.generators();
    gens.iter().all(|&x| gens.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
}

pub fn center(g: &dyn IndexGroup) -> Subgroup {
    let gens = g.generators();
    let members: Vec<u32> =
        (0..g.order() as u32).filter(|&x| gens.iter().all(|&y| g.mul(x, y) == g.mul(y, x))).collect();
    let z = closure(g, &members);
    debug_assert_eq!(z.order(), members.len());
    z
}

pub fn centralizer_order(g: &dyn IndexGroup, x: u32) -> usize {
    (0..g.order() as u32).filter(|&y| g.mul(x, y) == g.mul(y, x)).count()
}

pub fn element_order(g: &dyn IndexGroup, x: u32) -> u64 {
    let id = g.identity();
    let mut k = 1;
    let mut y = x;
    while y != id {
        y = g.mul(y, x);
        k += 1;
    }
    k
}

pub fn exponent(g: &dyn IndexGroup) -> u64 {
    (0..g.order() as u32).fold(1, |acc, x| lcm(acc, element_order(g, x)))
}

/// Conjugacy classes ordered by `(size, minimal element)`.
#[derive(Clone, Debug)]
pub struct ConjClasses {
    classes: Vec<Vec<u32>>,
    class_of: Vec<u32>,
    inverse_class: Vec<u32>,
}

impl ConjClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representative(&self, k: usize) -> u32 {
        self.classes[k][0]
    }

    pub fn representatives(&self) -> Vec<u32> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn size(&self, k: usize) -> usize {
        self.classes[k].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn members(&self, k: usize) -> &[u32] {
        &self.classes[k]
    }

    pub fn class_index(&self, x: u32) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn inverse_class(&self, k: usize) -> usize {
        self.inverse_class[k] as usize
    }
}

pub fn conjugacy_classes(g: &dyn IndexGroup) -> ConjClasses {
    let n = g.order();
    let gens = g.generators();
    let mut assigned = vec![u32::MAX; n];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for x in 0..n as u32 {
        if assigned[x as usize] != u32::MAX {
            continue;
        }
        let id = classes.len() as u32;
        assigned[x as usize] = id;
        let mut orbit = vec![x];
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for &a in gens {
                let z = g.conjugate(y, a);
                if assigned[z as usize] == u32::MAX {
                    assigned[z as usize] = id;
                    orbit.push(z);
                    queue.push_back(z);
                }
            }
        }
        orbit.sort_unstable();
        classes.push(orbit);
    }
    classes.sort_by_key(|c| (c.len(), c[0]));
    let mut class_of = vec![0u32; n];
    for (k, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x as usize] = k as u32;
        }
    }
    let inverse_class = classes.iter().map(|c| class_of[g.inv(c[0]) as usize]).collect();
    ConjClasses { classes, class_of, inverse_class }
}

/// The largest normal `p`-subgroup: `p`-classes are absorbed while the normal closure stays a `p`-group.
pub fn largest_normal_p_subgroup(g: &dyn IndexGroup, classes: &ConjClasses, p: u64) -> Subgroup {
    let mut n = trivial(g);
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&k| classes.size(k));
    for k in order {
        let x = classes.representative(k);
        if n.contains(x) || !is_power_of(element_order(g, x), p) {
            continue;
        }
        let mut gens = n.generators().to_vec();
        gens.push(x);
        let m = normal_closure(g, g.generators(), &gens);
        if is_power_of(m.order() as u64, p) {
            n = m;
        }
    }
    n
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// The Fitting subgroup, as the product of the `O_p(G)`.
pub fn fitting_subgroup(g: &dyn IndexGroup) -> Subgroup {
    let classes = conjugacy_classes(g);
    let primes = crate::numth::factorize(g.order() as u64).map(|f| f.primes()).unwrap_or_else(|_| crate::numth::PrimeSet::empty());
    let mut gens = Vec::new();
    for p in primes.iter() {
        gens.extend_from_slice(largest_normal_p_subgroup(g, &classes, p).generators());
    }
    closure(g, &gens)
}

pub fn quotient(g: &GroupHandle, n: &Subgroup) -> Result<Arc<Quotient>, GroupError> {
    if !is_normal_in(g.as_ref(), n, g.generators()) {
        return Err(GroupError::NotNormal);
    }
    Ok(Arc::new(Quotient::new(g.clone(), n)))
}

/// Number of quotients by Fitting subgroups needed to reach the trivial group.
pub fn fitting_height(g: &GroupHandle) -> usize {
    let mut current = g.clone();
    let mut height = 0;
    while current.order() > 1 {
        let f = fitting_subgroup(current.as_ref());
        current = quotient(&current, &f).expect("Fitting subgroup is normal");
        height += 1;
    }
    height
}
