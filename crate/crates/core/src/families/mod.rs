//! The seven constructions, their parameters, and the degree sets they predict.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::act::{self, ActingGroup, Aut, AutGroup, EsAut, HeisAut, Semidirect};
use crate::error::FamilyError;
use crate::gf::{make_field, FieldHandle};
use crate::grp::Group;
use crate::numth::{checked_pow, gcd, is_prime, multiplicative_order, pi_part, zsigmondy_primes, PrimeSet};
use crate::pgrp::{PGroup, PKind};

mod certificate;
mod oracle;

pub use certificate::*;
pub use oracle::*;

/// Acting groups are always enumerated; this bounds them.
pub const H_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    One,
    Two,
    Three,
    Four,
    Five,
    NoPrime,
    FittingTwo,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::One, Family::Two, Family::Three, Family::Four, Family::Five, Family::NoPrime, Family::FittingTwo];

    pub fn name(self) -> &'static str {
        match self {
            Family::One => "one",
            Family::Two => "two",
            Family::Three => "three",
            Family::Four => "four",
            Family::Five => "five",
            Family::NoPrime => "no_prime",
            Family::FittingTwo => "fitting_two",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name().replace('_', "-") == s)
            .ok_or_else(|| FamilyError::InvalidParams(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub family: Family,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

fn invalid(clause: impl Into<String>) -> FamilyError {
    FamilyError::InvalidParams(clause.into())
}

impl FamilyParams {
    pub fn new(family: Family, p: u64) -> Self {
        Self { family, p, q: None, r: None, n: None, m: None }
    }

    pub fn one(p: u64, q: u64) -> Self {
        Self { q: Some(q), ..Self::new(Family::One, p) }
    }

    pub fn two(p: u64, q: u64, r: u64) -> Self {
        Self { q: Some(q), r: Some(r), ..Self::new(Family::Two, p) }
    }

    pub fn three(p: u64, q: u64) -> Self {
        Self { q: Some(q), ..Self::new(Family::Three, p) }
    }

    pub fn four(p: u64, q: u64, r: u64) -> Self {
        Self { q: Some(q), r: Some(r), ..Self::new(Family::Four, p) }
    }

    pub fn five(p: u64, q: u64, n: u64) -> Self {
        Self { q: Some(q), n: Some(n), ..Self::new(Family::Five, p) }
    }

    pub fn no_prime(p: u64, n: u64) -> Self {
        Self { n: Some(n), ..Self::new(Family::NoPrime, p) }
    }

    pub fn fitting_two(p: u64) -> Self {
        Self::new(Family::FittingTwo, p)
    }

    /// The smallest legal instance of each family.
    pub fn preset(family: Family) -> Self {
        match family {
            Family::One => Self::one(7, 3),
            Family::Two => Self::two(7, 3, 2),
            Family::Three => Self::three(7, 3),
            Family::Four => Self::four(7, 2, 3),
            Family::Five => Self::five(7, 3, 4),
            Family::NoPrime => Self::no_prime(11, 5),
            Family::FittingTwo => Self::fitting_two(3),
        }
    }

    pub fn presets() -> Vec<Self> {
        Family::ALL.into_iter().map(Self::preset).collect()
    }

    /// `one(7,3)`, `five(7,3,4)`, ...
    pub fn label(&self) -> String {
        let mut parts = vec![self.p.to_string()];
        for v in [self.q, self.r, self.n, self.m].into_iter().flatten() {
            parts.push(v.to_string());
        }
        format!("{}({})", self.family, parts.join(","))
    }

    fn need(&self, name: &str, v: Option<u64>) -> Result<u64, FamilyError> {
        v.ok_or_else(|| invalid(format!("{} requires {name}", self.family)))
    }

    pub fn q_value(&self) -> Result<u64, FamilyError> {
        self.need("q", self.q)
    }

    pub fn r_value(&self) -> Result<u64, FamilyError> {
        self.need("r", self.r)
    }

    pub fn n_value(&self) -> Result<u64, FamilyError> {
        self.need("n", self.n)
    }

    /// `m`, defaulting to `n`.
    pub fn m_value(&self) -> Result<u64, FamilyError> {
        Ok(self.m.unwrap_or(self.n_value()?))
    }

    /// Checks the hypotheses of the family's statement, naming the first clause that fails.
    pub fn validate(&self) -> Result<(), FamilyError> {
        let p = self.p;
        if !is_prime(p) {
            return Err(invalid("p must be prime"));
        }
        if p > u32::MAX as u64 {
            return Err(invalid("p is too large"));
        }
        let allowed: &[&str] = match self.family {
            Family::One | Family::Three => &["q"],
            Family::Two | Family::Four => &["q", "r"],
            Family::Five => &["q", "n"],
            Family::NoPrime => &["n", "m"],
            Family::FittingTwo => &[],
        };
        for (name, v) in [("q", self.q), ("r", self.r), ("n", self.n), ("m", self.m)] {
            if v.is_some() && !allowed.contains(&name) {
                return Err(invalid(format!("{} takes no {name}", self.family)));
            }
        }
        let odd_prime_q = |q: u64| -> Result<(), FamilyError> {
            if !is_prime(q) || q == 2 {
                return Err(invalid("q must be an odd prime"));
            }
            if (p - 1) % q != 0 {
                return Err(invalid("q must divide p−1"));
            }
            Ok(())
        };
        match self.family {
            Family::One | Family::Three => odd_prime_q(self.q_value()?)?,
            Family::Two => {
                let q = self.q_value()?;
                odd_prime_q(q)?;
                let r = self.r_value()?;
                if r <= 1 {
                    return Err(invalid("r must be greater than 1"));
                }
                if (p - 1) % r != 0 {
                    return Err(invalid("r must divide p−1"));
                }
                if gcd(r, q) != 1 {
                    return Err(invalid("r must be coprime to q"));
                }
            }
            Family::Four => {
                let q = self.q_value()?;
                if !is_prime(q) {
                    return Err(invalid("q must be prime"));
                }
                if (p - 1) % q != 0 {
                    return Err(invalid("q must divide p−1"));
                }
                let r = self.r_value()?;
                if r <= 1 || r % 2 == 0 {
                    return Err(invalid("r must be odd and greater than 1"));
                }
                if (p - 1) % r != 0 {
                    return Err(invalid("r must divide p−1"));
                }
                if gcd(r, q) != 1 {
                    return Err(invalid("r must be coprime to q"));
                }
            }
            Family::Five => {
                let q = self.q_value()?;
                odd_prime_q(q)?;
                if self.n_value()? <= q {
                    return Err(invalid("n must exceed q"));
                }
            }
            Family::NoPrime => {
                let n = self.n_value()?;
                if n <= 1 || n % 2 == 0 {
                    return Err(invalid("n must be odd and greater than 1"));
                }
                let primes = crate::numth::factorize(n)?.primes();
                if primes.iter().any(|r| (p - 1) % r != 0) {
                    return Err(invalid("every prime divisor of n must divide p−1"));
                }
                let m = self.m_value()?;
                let rho = zsigmondy_primes(p, n as u32)?;
                let rho_part = pi_part(p - 1, &rho);
                if m == 0 || m % n != 0 {
                    return Err(invalid("n must divide m"));
                }
                if (n * rho_part) % m != 0 {
                    return Err(invalid("m must divide n·(p−1)_ρ"));
                }
                let quotient = m / n;
                if crate::numth::factorize(rho_part)?.primes().iter().any(|r| quotient % r != 0) {
                    return Err(invalid("every prime divisor of (p−1)_ρ must divide m/n"));
                }
            }
            Family::FittingTwo => {
                if p % 8 != 3 {
                    return Err(invalid("p must be congruent to 3 mod 8"));
                }
            }
        }
        let degree = match self.family {
            Family::FittingTwo => 2,
            Family::NoPrime => self.n_value()?,
            _ => self.q_value()?,
        };
        match checked_pow(p, degree as u32) {
            Ok(size) if size <= FIELD_LIMIT => Ok(()),
            _ => Err(invalid(format!("field size p^{degree} exceeds {FIELD_LIMIT}"))),
        }
    }
}

/// Largest field order the builders accept.
pub const FIELD_LIMIT: u64 = 1 << 24;

/// `{dl, fh, cd}` with `cd` ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub dl: usize,
    pub fitting_height: usize,
    pub cd: Vec<u64>,
}

impl Profile {
    pub fn new(dl: usize, fitting_height: usize, mut cd: Vec<u64>) -> Self {
        cd.sort_unstable();
        cd.dedup();
        Self { dl, fitting_height, cd }
    }
}

fn mul_all(xs: &[u64]) -> Result<u64, FamilyError> {
    xs.iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x))
        .ok_or_else(|| invalid("predicted degree overflows 64 bits"))
}

fn primes(ps: &[u64]) -> PrimeSet {
    PrimeSet::new(ps.iter().copied()).expect("primes")
}

/// The degree set and Fitting height stated for the family, from the parameters alone.
pub fn predicted_profile(params: &FamilyParams) -> Result<Profile, FamilyError> {
    params.validate()?;
    let p = params.p;
    let pow = |e: u64| checked_pow(p, e as u32).map_err(FamilyError::from);
    let profile = match params.family {
        Family::One | Family::Two | Family::Three | Family::Five => {
            let q = params.q_value()?;
            let qs = primes(&[q]);
            let pq = pow(q)?;
            let h1 = mul_all(&[pi_part((pq - 1) / (p - 1), &qs.complement()), pi_part(p - 1, &qs), q])?;
            let h3 = mul_all(&[pi_part(pq - 1, &qs.complement()), pi_part(p - 1, &qs), q])?;
            match params.family {
                Family::One => Profile::new(4, 3, vec![1, q, h1, mul_all(&[pq, h1])?]),
                Family::Two => Profile::new(4, 3, vec![1, q, mul_all(&[h1, params.r_value()?])?, mul_all(&[pq, h1])?]),
                Family::Three => Profile::new(4, 3, vec![1, q, h3, mul_all(&[pq, q])?]),
                _ => Profile::new(4, 3, vec![1, q, h3, mul_all(&[pow(params.n_value()?)?, q])?]),
            }
        }
        Family::Four => {
            let (q, r) = (params.q_value()?, params.r_value()?);
            let pq = pow(q)?;
            let qr = crate::numth::factorize(r)?.primes().union(&primes(&[q]));
            let h = mul_all(&[pi_part(pq - 1, &qr.complement()), pi_part(p - 1, &primes(&[q])), q, r])?;
            Profile::new(4, 3, vec![1, q, h, mul_all(&[pq, r])?])
        }
        Family::NoPrime => {
            let n = params.n_value()?;
            let pn = pow(n)?;
            let rho = zsigmondy_primes(p, n as u32)?;
            let k = mul_all(&[pi_part(pn - 1, &rho), params.m_value()?])?;
            Profile::new(4, 3, vec![1, n, k, mul_all(&[pn, k])?])
        }
        Family::FittingTwo => Profile::new(4, 2, vec![1, 2, 8, 2 * p * p]),
    };
    Ok(profile)
}

/// `P`, the acting group `H`, and the generator names used to build it.
#[derive(Clone, Debug)]
pub struct Instance {
    pub params: FamilyParams,
    pub p_group: Arc<PGroup>,
    pub acting: Arc<ActingGroup>,
    /// Notes where the construction departs from a literal reading of the statement.
    pub flags: Vec<String>,
}

impl Instance {
    pub fn from_generators(
        params: FamilyParams,
        p_group: PGroup,
        generators: Vec<(String, Aut)>,
        flags: Vec<String>,
    ) -> Result<Self, FamilyError> {
        let p_group = Arc::new(p_group);
        let acting = Arc::new(ActingGroup::generate(p_group.clone(), &generators, H_CAP)?);
        Ok(Self { params, p_group, acting, flags })
    }

    pub fn generators(&self) -> Vec<(String, Aut)> {
        self.acting.generators()
    }

    pub fn h_order(&self) -> u64 {
        self.acting.order() as u64
    }

    pub fn semidirect(&self) -> Result<Semidirect, FamilyError> {
        Ok(Semidirect::new(self.acting.clone())?)
    }

    /// `|G| = |P|·|H|` as a decimal string.
    pub fn order_string(&self) -> String {
        let p = self.p_group.p() as u128;
        let mut n = self.acting.order() as u128;
        for _ in 0..self.p_group.order_exponent() {
            n = n.saturating_mul(p);
        }
        n.to_string()
    }

    pub fn order(&self) -> Option<u64> {
        self.p_group.order().and_then(|n| n.checked_mul(self.h_order()))
    }

    /// A copy with one structural change; for negative controls.
    pub fn mutate(&self, mutation: &Mutation) -> Result<Instance, FamilyError> {
        let mut gens = self.generators();
        let mut p_group = (*self.p_group).clone();
        let pick = |gens: &[(String, Aut)], i: usize| -> Result<(), FamilyError> {
            if i < gens.len() {
                Ok(())
            } else {
                Err(invalid(format!("no generator {i}")))
            }
        };
        match mutation {
            Mutation::CorruptZMult { generator, delta } => {
                pick(&gens, *generator)?;
                let p = p_group.p();
                let bump = |e: &mut EsAut| {
                    e.z_mult = (e.z_mult + delta % p) % p;
                    if e.z_mult == 0 {
                        e.z_mult = 1;
                    }
                };
                match &mut gens[*generator].1 {
                    Aut::Es(e) => bump(e),
                    Aut::Central(e, _) => bump(e),
                    Aut::Heis(_) => return Err(invalid("Heisenberg automorphisms carry no z multiplier")),
                }
            }
            Mutation::DegenerateCocycle { term } => {
                if *term >= p_group.term_count() {
                    return Err(invalid(format!("no cocycle term {term}")));
                }
                p_group = p_group.without_term(*term);
            }
            Mutation::ReplaceGenerator { index, aut } => {
                pick(&gens, *index)?;
                gens[*index].1 = aut.clone();
            }
            Mutation::DropGenerator { index } => {
                pick(&gens, *index)?;
                gens.remove(*index);
            }
            Mutation::AddGenerator { name, aut } => gens.push((name.clone(), aut.clone())),
        }
        let mut flags = self.flags.clone();
        flags.push(format!("mutated: {}", mutation.describe()));
        Instance::from_generators(self.params.clone(), p_group, gens, flags)
    }
}

#[derive(Clone, Debug)]
pub enum Mutation {
    /// Adds `delta` to the center multiplier of one generator.
    CorruptZMult { generator: usize, delta: u64 },
    /// Drops one term of the defining cocycle of `P`.
    DegenerateCocycle { term: usize },
    ReplaceGenerator { index: usize, aut: Aut },
    DropGenerator { index: usize },
    AddGenerator { name: String, aut: Aut },
}

impl Mutation {
    pub fn describe(&self) -> String {
        match self {
            Mutation::CorruptZMult { generator, delta } => format!("z_mult of generator {generator} shifted by {delta}"),
            Mutation::DegenerateCocycle { term } => format!("cocycle term {term} removed"),
            Mutation::ReplaceGenerator { index, .. } => format!("generator {index} replaced"),
            Mutation::DropGenerator { index } => format!("generator {index} dropped"),
            Mutation::AddGenerator { name, .. } => format!("generator {name} added"),
        }
    }
}

/// Product in the acting group: `gens[0]` applied first.
pub fn right_product(target: &PGroup, gens: &[Aut]) -> Result<Aut, FamilyError> {
    let mut acc = act::identity_aut(target)?;
    for g in gens {
        acc = act::compose(target, g, &acc)?;
    }
    Ok(acc)
}

/// Smallest `x ∈ Z_p^*` of multiplicative order `d`.
fn prime_field_element(p: u64, d: u64) -> Result<u64, FamilyError> {
    (1..p)
        .find(|&x| multiplicative_order(x, p).map_or(false, |o| o == d))
        .ok_or_else(|| invalid(format!("no element of order {d} in Z_{p}^*")))
}

struct FieldGens {
    field: FieldHandle,
    size: u64,
}

impl FieldGens {
    fn new(p: u64, degree: u64) -> Result<Self, FamilyError> {
        let field = make_field(p, degree as u32)?;
        let size = field.size() as u64;
        Ok(Self { field, size })
    }

    /// Generator of the `π`-part of `F^*`.
    fn part(&self, pi: &PrimeSet) -> Result<u32, FamilyError> {
        Ok(self.field.subgroup_generator(pi_part(self.size - 1, pi))?)
    }

    /// `v ↦ μ·v^{σ^i}` on `V = F` with the induced dual action.
    fn es(&self, mu: u32, i: u64) -> Result<EsAut, FamilyError> {
        Ok(EsAut::induced(self.field.as_linear_map(mu, i)?)?)
    }

    fn one(&self) -> u32 {
        self.field.from_int(1)
    }
}

/// Degree over `GF(p)` of the field `F` the construction works in.
pub fn construction_field_degree(params: &FamilyParams) -> Result<u32, FamilyError> {
    let d = match params.family {
        Family::NoPrime => params.n_value()?,
        Family::FittingTwo => 2,
        _ => params.q_value()?,
    };
    u32::try_from(d).map_err(|_| invalid("field degree out of range"))
}

pub fn build(params: &FamilyParams) -> Result<Instance, FamilyError> {
    params.validate()?;
    match params.family {
        Family::One => build_one(params),
        Family::Two => build_two(params),
        Family::Three => build_three(params),
        Family::Four => build_four(params),
        Family::Five => build_five(params),
        Family::NoPrime => build_no_prime(params),
        Family::FittingTwo => build_fitting_two(params),
    }
}

fn heis_k(params: &FamilyParams) -> Result<(FieldGens, PGroup, Vec<(String, Aut)>), FamilyError> {
    let (p, q) = (params.p, params.q_value()?);
    let f = FieldGens::new(p, q)?;
    let qs = primes(&[q]);
    let gamma = f.field.subgroup_generator(pi_part((f.size - 1) / (p - 1), &qs.complement()))?;
    let lambda = f.part(&qs)?;
    let target = PGroup::heisenberg(&f.field)?;
    let gens = vec![
        ("gamma".to_string(), Aut::Heis(HeisAut::scalar(gamma))),
        ("lambda_sigma".to_string(), Aut::Heis(HeisAut::new(lambda, lambda, 1))),
    ];
    Ok((f, target, gens))
}

fn build_one(params: &FamilyParams) -> Result<Instance, FamilyError> {
    let (_, target, gens) = heis_k(params)?;
    Instance::from_generators(params.clone(), target, gens, Vec::new())
}

fn build_two(params: &FamilyParams) -> Result<Instance, FamilyError> {
    let (f, target, mut gens) = heis_k(params)?;
    let r = params.r_value()?;
    let k_order = ActingGroup::generate(Arc::new(target.clone()), &gens, H_CAP)?.order() as u64;
    let eta = f.field.subgroup_generator(r)?;
    gens.push(("eta".to_string(), Aut::Heis(HeisAut::opposite(&f.field, eta)?)));
    let inst = Instance::from_generators(params.clone(), target, gens, Vec::new())?;
    if inst.h_order() != k_order * r {
        return Err(invalid(format!("⟨η⟩ meets K nontrivially: |H| = {} ≠ {}·{r}", inst.h_order(), k_order)));
    }
    Ok(inst)
}

/// `γ`, `λ`, `σ` on the dual pairing group over `F = GF(p^q)`.
fn es_parts(p: u64, q: u64, gamma_primes: &PrimeSet) -> Result<(EsAut, EsAut, EsAut), FamilyError> {
    let f = FieldGens::new(p, q)?;
    let gamma = f.part(&gamma_primes.complement())?;
    let lambda = f.part(&primes(&[q]))?;
    Ok((f.es(gamma, 0)?, f.es(lambda, 0)?, f.es(f.one(), 1)?))
}

fn build_three(params: &FamilyParams) -> Result<Instance, FamilyError> {
    let (p, q) = (params.p, params.q_value()?);
    let target = PGroup::extraspecial_dual(p, q as usize)?;
    let (gamma, lambda, sigma) = es_parts(p, q, &primes(&[q]))?;
    let xi = EsAut::scalar_pair(p, q as usize, prime_field_element(p, q)?);
    let lxs = right_product(&target, &[Aut::Es(lambda), Aut::Es(xi), Aut::Es(sigma)])?;
    let gens = vec![("gamma".to_string(), Aut::Es(gamma)), ("lambda_xi_sigma".to_string(), lxs)];
    Instance::from_generators(params.clone(), target, gens, Vec::new())
}

fn build_four(params: &FamilyParams) -> Result<Instance, FamilyError> {
    let (p, q, r) = (params.p, params.q_value()?, params.r_value()?);
    let target = PGroup::extraspecial_dual(p, q as usize)?;
    let qr = crate::numth::factorize(r)?.primes().union(&primes(&[q]));
    let (gamma, lambda, sigma) = es_parts(p, q, &qr)?;
    let xi = EsAut::scalar_pair(p, q as usize, prime_field_element(p, r)?);
    let gens = vec![
        ("gamma".to_string(), Aut::Es(gamma)),
        ("lambda_sigma".to_string(), right_product(&target, &[Aut::Es(lambda), Aut::Es(sigma)])?),
        ("xi".to_string(), Aut::Es(xi)),
    ];
    Instance::from_generators(params.clone(), target, gens, Vec::new())
}

fn build_five(params: &FamilyParams) -> Result<Instance, FamilyError> {
    let (p, q, n) = (params.p, params.q_value()?, params.n_value()?);
    let (m1, m2) = (q as usize, (n - q) as usize);
    let p1 = PGroup::extraspecial_dual(p, m1)?;
    let p2 = PGroup::extraspecial_dual(p, m2)?;
    let target = PGroup::central_product(&p1, &p2, 1)?;
    let (gamma, lambda, sigma) = es_parts(p, q, &primes(&[q]))?;
    let x = prime_field_element(p, q)?;
    let id2 = EsAut::identity(p, m2);
    let on_first = |a: EsAut| Aut::Central(a, id2.clone());
    let xi = Aut::Central(EsAut::scalar_pair(p, m1, x), EsAut::scalar_pair(p, m2, x));
    let lxs = right_product(&target, &[on_first(lambda), xi, on_first(sigma)])?;
    let gens = vec![("gamma".to_string(), on_first(gamma)), ("lambda_xi_sigma".to_string(), lxs)];
    let flags = vec![format!(
        "order correction: P2 is extraspecial of order p^{} = p^(2(n−q)+1), not p^(2(n−q))",
        2 * m2 + 1
    )];
    Instance::from_generators(params.clone(), target, gens, flags)
}

fn build_fitting_two(params: &FamilyParams) -> Result<Instance, FamilyError> {
    let p = params.p;
    let f = FieldGens::new(p, 2)?;
    let target = PGroup::extraspecial_dual(p, 2)?;
    let lam = f.field.subgroup_generator(8)?;
    let lambda2 = f.es(f.field.mul(lam, lam), 0)?;
    let zeta = EsAut::scale_v(p, 2, p - 1);
    let gens = vec![
        ("zeta_lambda2".to_string(), right_product(&target, &[Aut::Es(zeta), Aut::Es(lambda2)])?),
        ("lambda_sigma".to_string(), right_product(&target, &[Aut::Es(f.es(lam, 0)?), Aut::Es(f.es(f.one(), 1)?)])?),
    ];
    Instance::from_generators(params.clone(), target, gens, Vec::new())
}

/// One rejected `μσ^j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub mu_log: u64,
    pub j: u64,
    pub reason: String,
}

/// `K` is the Sylow-ρ part of `F^*`; `N = ⟨μσ^j⟩` is searched with `gcd(j, n) = 1` and `μ`
/// running over `F^*/(F^*)^{p−1}` (conjugation by scalars moves `μ` within its coset).
pub fn no_prime_search(params: &FamilyParams) -> Result<(Instance, Vec<Rejection>), (FamilyError, Vec<Rejection>)> {
    let fail = |e: FamilyError| (e, Vec::new());
    params.validate().map_err(fail)?;
    let (p, n, m) = (params.p, params.n_value().map_err(fail)?, params.m_value().map_err(fail)?);
    let f = FieldGens::new(p, n).map_err(fail)?;
    let rho = zsigmondy_primes(p, n as u32).map_err(|e| fail(e.into()))?;
    let k_order = pi_part(f.size - 1, &rho);
    let kappa = f.field.subgroup_generator(k_order).map_err(|e| fail(e.into()))?;
    let target = Arc::new(PGroup::heisenberg(&f.field).map_err(|e| fail(e.into()))?);
    let mut rejected = Vec::new();
    let g = f.field.primitive();
    let auts = AutGroup::new(target.clone());
    for e in 0..p - 1 {
        let mu = f.field.pow(g, e);
        for j in (1..n).filter(|&j| gcd(j, n) == 1) {
            let t = Aut::Heis(HeisAut::new(mu, mu, j as u32));
            match try_candidate(params, &target, &auts, t, j, kappa, k_order) {
                Ok(inst) => return Ok((inst, rejected)),
                Err(reason) => rejected.push(Rejection { mu_log: e, j, reason }),
            }
        }
    }
    let last = rejected.last().map(|r| r.reason.clone()).unwrap_or_default();
    Err((
        FamilyError::SearchFailed(format!(
            "no N = ⟨μσ^j⟩ of order {m} in Γ(GF({p}^{n})) with NK Frobenius on P; {} candidates rejected (last: {last})",
            rejected.len()
        )),
        rejected,
    ))
}

fn try_candidate(
    params: &FamilyParams,
    target: &Arc<PGroup>,
    auts: &AutGroup,
    t: Aut,
    j: u64,
    kappa: u32,
    k_order: u64,
) -> Result<Instance, String> {
    let (p, n, m) = (params.p, params.n_value().map_err(|e| e.to_string())?, params.m_value().map_err(|e| e.to_string())?);
    let order = aut_order(auts, &t, m * (p - 1));
    if order != m {
        return Err(format!("order {order} ≠ m = {m}"));
    }
    for i in 1..m {
        let lin = act::linearize(target, &auts.pow(&t, i)).map_err(|e| e.to_string())?;
        let fixed = act::fixed_subgroup(target, &lin);
        if !fixed.is_trivial() {
            return Err(format!("(μσ^j)^{i} fixes a subgroup of order p^{}", fixed.order_exponent()));
        }
    }
    let gens = vec![("kappa".to_string(), Aut::Heis(HeisAut::scalar(kappa))), ("n".to_string(), t)];
    let inst = Instance::from_generators(params.clone(), (**target).clone(), gens, Vec::new()).map_err(|e| e.to_string())?;
    if inst.h_order() != k_order * m {
        return Err(format!("|NK| = {} ≠ {}", inst.h_order(), k_order * m));
    }
    match act::frobenius_certificate(&inst.acting, act::FrobeniusTarget::Whole) {
        Ok(c) if c.holds => {}
        _ => return Err("NK does not act Frobeniusly on P".into()),
    }
    if !orbit_criterion(p, j, n, k_order) {
        return Err("a nonprincipal character of K has a stabilizer larger than K".into());
    }
    Ok(inst)
}

fn aut_order(g: &AutGroup, t: &Aut, bound: u64) -> u64 {
    let id = g.identity();
    let mut x = t.clone();
    for k in 1..=bound {
        if x == id {
            return k;
        }
        x = g.mul(&x, t);
    }
    0
}

/// `σ^j` acts on `Irr(K) ≅ Z/k` as multiplication by `p^j`; every nonprincipal orbit has size `n`.
pub fn orbit_criterion(p: u64, j: u64, n: u64, k: u64) -> bool {
    (1..n).all(|i| {
        let e = crate::numth::pow_mod(p, j * i, k);
        gcd((e + k - 1) % k, k) == 1 || k == 1
    })
}

fn build_no_prime(params: &FamilyParams) -> Result<Instance, FamilyError> {
    no_prime_search(params).map(|(i, _)| i).map_err(|(e, _)| e)
}

/// Kind sanity check shared by document loading.
pub fn expected_kind(family: Family) -> PKind {
    match family {
        Family::One | Family::Two | Family::NoPrime => PKind::Heisenberg,
        Family::Three | Family::Four | Family::FittingTwo => PKind::ExtraspecialDual,
        Family::Five => PKind::CentralProduct,
    }
}
