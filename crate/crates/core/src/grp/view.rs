use super::{GroupHandle, IndexGroup, Subgroup};

/// A subgroup re-indexed as a group in its own right (`0..|S|`, in parent order).
pub struct SubgroupView {
    parent: GroupHandle,
    members: Vec<u32>,
    local: Vec<u32>,
    identity: u32,
    gens: Vec<u32>,
}

impl SubgroupView {
    pub fn new(parent: GroupHandle, s: &Subgroup) -> Self {
        let members = s.members().to_vec();
        let mut local = vec![u32::MAX; parent.order()];
        for (i, &m) in members.iter().enumerate() {
            local[m as usize] = i as u32;
        }
        let identity = local[parent.identity() as usize];
        let gens = s.generators().iter().map(|&g| local[g as usize]).collect();
        Self { parent, members, local, identity, gens }
    }

    /// Parent index of a local element.
    pub fn parent_index(&self, x: u32) -> u32 {
        self.members[x as usize]
    }

    /// Local index of a parent element, if it lies in the subgroup.
    pub fn local_index(&self, x: u32) -> Option<u32> {
        let l = self.local[x as usize];
        (l != u32::MAX).then_some(l)
    }
}

impl IndexGroup for SubgroupView {
    fn order(&self) -> usize {
        self.members.len()
    }

    fn identity(&self) -> u32 {
        self.identity
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.local[self.parent.mul(self.members[a as usize], self.members[b as usize]) as usize]
    }

    fn inv(&self, a: u32) -> u32 {
        self.local[self.parent.inv(self.members[a as usize]) as usize]
    }

    fn generators(&self) -> &[u32] {
        &self.gens
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{center, conjugacy_classes, fixtures, is_nilpotent};

    #[test]
    fn center_of_quaternion_as_group() {
        let q8 = fixtures::quaternion();
        let z = center(q8.as_ref());
        let v = SubgroupView::new(q8.clone(), &z);
        assert_eq!(v.order(), 2);
        assert!(is_nilpotent(&v));
        assert_eq!(conjugacy_classes(&v).len(), 2);
        for x in 0..2 {
            assert_eq!(v.local_index(v.parent_index(x)), Some(x));
        }
    }
}
