use super::{GroupHandle, IndexGroup, Subgroup};

/// `G/N` for a normal subgroup `N`, with cosets numbered by their minimal element.
pub struct Quotient {
    parent: GroupHandle,
    reps: Vec<u32>,
    coset_of: Vec<u32>,
    inverses: Vec<u32>,
    identity: u32,
    gens: Vec<u32>,
}

impl Quotient {
    pub(crate) fn new(parent: GroupHandle, n: &Subgroup) -> Self {
        let order = parent.order();
        let mut coset_of = vec![u32::MAX; order];
        let mut reps = Vec::with_capacity(order / n.order());
        for x in 0..order as u32 {
            if coset_of[x as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for &m in n.members() {
                coset_of[parent.mul(x, m) as usize] = id;
            }
        }
        let identity = coset_of[parent.identity() as usize];
        let inverses = reps.iter().map(|&r| coset_of[parent.inv(r) as usize]).collect();
        let mut gens: Vec<u32> =
            parent.generators().iter().map(|&g| coset_of[g as usize]).filter(|&c| c != identity).collect();
        gens.sort_unstable();
        gens.dedup();
        Self { parent, reps, coset_of, inverses, identity, gens }
    }

    /// Coset containing the parent element `x`.
    pub fn coset(&self, x: u32) -> u32 {
        self.coset_of[x as usize]
    }

    pub fn representative(&self, c: u32) -> u32 {
        self.reps[c as usize]
    }
}

impl IndexGroup for Quotient {
    fn order(&self) -> usize {
        self.reps.len()
    }

    fn identity(&self) -> u32 {
        self.identity
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        self.coset_of[self.parent.mul(self.reps[a as usize], self.reps[b as usize]) as usize]
    }

    fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    fn generators(&self) -> &[u32] {
        &self.gens
    }
}
