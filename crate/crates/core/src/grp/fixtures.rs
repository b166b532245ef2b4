//! Small reference groups used by tests and the character-degree corpus.

use super::{generate_closure, Group, GroupHandle, DEFAULT_CAP};
use crate::gf::Matrix;

/// `Z/n` written additively.
#[derive(Clone, Copy, Debug)]
pub struct Cyclic(pub u64);

impl Group for Cyclic {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }

    fn inv(&self, a: &u64) -> u64 {
        (self.0 - a) % self.0
    }
}

/// Permutations of `0..degree`, composed left to right: `(ab)(i) = b(a(i))`.
#[derive(Clone, Copy, Debug)]
pub struct Perm(pub usize);

impl Group for Perm {
    type Elem = Vec<u8>;

    fn identity(&self) -> Vec<u8> {
        (0..self.0 as u8).collect()
    }

    fn mul(&self, a: &Vec<u8>, b: &Vec<u8>) -> Vec<u8> {
        a.iter().map(|&i| b[i as usize]).collect()
    }

    fn inv(&self, a: &Vec<u8>) -> Vec<u8> {
        let mut out = vec![0u8; a.len()];
        for (i, &j) in a.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        out
    }
}

/// Invertible `d × d` matrices over `Z/p`.
#[derive(Clone, Copy, Debug)]
pub struct MatrixGroup {
    pub p: u64,
    pub d: usize,
}

impl Group for MatrixGroup {
    type Elem = Matrix;

    fn identity(&self) -> Matrix {
        Matrix::identity(self.p, self.d)
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.mul(b)
    }

    fn inv(&self, a: &Matrix) -> Matrix {
        a.inverse().expect("invertible generator")
    }
}

fn enumerate<G: Group + 'static>(g: G, gens: &[G::Elem]) -> GroupHandle {
    generate_closure(g, gens, DEFAULT_CAP).expect("small fixture").into_handle()
}

pub fn cyclic(n: u64) -> GroupHandle {
    enumerate(Cyclic(n), &[1 % n])
}

pub fn klein_four() -> GroupHandle {
    enumerate(Perm(4), &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
}

pub fn symmetric3() -> GroupHandle {
    enumerate(Perm(3), &[vec![1, 2, 0], vec![1, 0, 2]])
}

pub fn s4() -> GroupHandle {
    enumerate(Perm(4), &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]])
}

pub fn dihedral8() -> GroupHandle {
    enumerate(Perm(4), &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
}

/// `Z/3 ⋊ Z/2` realized as affine maps `x ↦ ax + b` over `Z/3`.
pub fn s3_semidirect() -> GroupHandle {
    let g = MatrixGroup { p: 3, d: 2 };
    let shift = Matrix::from_rows(3, &[vec![1, 1], vec![0, 1]]);
    let flip = Matrix::from_rows(3, &[vec![2, 0], vec![0, 1]]);
    enumerate(g, &[shift, flip])
}

/// `Q8 ≤ SL(2, 3)`.
pub fn quaternion() -> GroupHandle {
    let g = MatrixGroup { p: 3, d: 2 };
    let i = Matrix::from_rows(3, &[vec![0, 2], vec![1, 0]]);
    let j = Matrix::from_rows(3, &[vec![1, 1], vec![1, 2]]);
    enumerate(g, &[i, j])
}

/// Unitriangular `3 × 3` matrices over `Z/p`: extraspecial of order `p³`, exponent `p`.
pub fn heisenberg_prime(p: u64) -> GroupHandle {
    let g = MatrixGroup { p, d: 3 };
    let x = Matrix::from_rows(p, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    let y = Matrix::from_rows(p, &[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]);
    enumerate(g, &[x, y])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{center, check_axioms, derived_subgroup, exponent, whole};

    #[test]
    fn heisenberg_over_three() {
        let h = heisenberg_prime(3);
        assert_eq!(h.order(), 27);
        assert_eq!(center(h.as_ref()).order(), 3);
        assert_eq!(derived_subgroup(h.as_ref(), &whole(h.as_ref())).order(), 3);
        assert_eq!(exponent(h.as_ref()), 3);
    }

    #[test]
    fn permutation_axioms() {
        let g = Perm(4);
        let a = vec![1, 2, 3, 0];
        let b = vec![1, 0, 2, 3];
        let c = vec![3, 1, 0, 2];
        check_axioms(&g, &[(a.clone(), b.clone(), c.clone()), (c, a, b)]).unwrap();
    }
}
