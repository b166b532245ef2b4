//! Property suites run by `tetrad selftest`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::act::{self, Aut, SemiElem, Semidirect};
use crate::chardeg;
use crate::error::FamilyError;
use crate::families::{build, lemma_certificate, Caps, Family, FamilyParams};
use crate::gf::{make_field, FieldHandle};
use crate::grp::{self, check_axioms, fixtures, Group, GroupHandle};
use crate::numth::{gcd, is_prime, pi_part, zsigmondy_primes, PrimeSet};
use crate::pgrp::PGroup;

pub const SUITES: [&str; 8] = ["field", "group", "oracle", "gcd", "numth", "aut", "semidirect", "presets"];

const TRIPLES: usize = 1000;

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Only suites whose name contains this string.
    pub filter: Option<String>,
    /// Test hook: compose automorphisms and semidirect pairs with the wrong law.
    pub broken_composition: bool,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
    pub seconds: f64,
}

type Outcome = Result<(usize, String), String>;

pub fn run(opts: &Options) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .filter(|s| opts.filter.as_deref().map_or(true, |f| s.contains(f)))
        .map(|&name| {
            let start = Instant::now();
            let outcome = match name {
                "field" => field_suite(opts),
                "group" => group_suite(opts),
                "oracle" => oracle_suite(),
                "gcd" => gcd_suite(),
                "numth" => numth_suite(),
                "aut" => aut_suite(opts),
                "semidirect" => semidirect_suite(opts),
                _ => preset_suite(),
            };
            let (passed, cases, detail) = match outcome {
                Ok((n, d)) => (true, n, d),
                Err(d) => (false, 0, d),
            };
            SuiteResult { name: name.to_string(), passed, cases, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

pub fn all_passed(results: &[SuiteResult]) -> bool {
    !results.is_empty() && results.iter().all(|r| r.passed)
}

pub fn render_table(results: &[SuiteResult]) -> String {
    let mut out = format!("{:<12} {:<6} {:>7}  {}\n", "suite", "result", "cases", "detail");
    for r in results {
        out.push_str(&format!(
            "{:<12} {:<6} {:>7}  {}\n",
            r.name,
            if r.passed { "ok" } else { "FAIL" },
            r.cases,
            r.detail
        ));
    }
    out
}

fn field_axioms(f: &FieldHandle, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (zero, one) = (f.from_int(0), f.from_int(1));
    for _ in 0..TRIPLES {
        let [a, b, c] = [0; 3].map(|_| rng.gen_range(0..f.size()));
        let ok = f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            && f.add(a, b) == f.add(b, a)
            && f.mul(a, b) == f.mul(b, a)
            && f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            && f.add(a, zero) == a
            && f.mul(a, one) == a
            && f.add(a, f.neg(a)) == zero
            && f.mul(a, b) == f.mul_reference(a, b)
            && (a == zero || f.mul(a, f.inv(a).map_err(|e| e.to_string())?) == one);
        if !ok {
            return Err(format!("GF({}^{}) axioms fail at ({a}, {b}, {c})", f.p(), f.degree()));
        }
    }
    Ok(())
}

fn field_suite(opts: &Options) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let fields = [(2, 4), (3, 2), (3, 5), (7, 3), (11, 5), (13, 1)];
    for (p, n) in fields {
        let f = make_field(p, n).map_err(|e| e.to_string())?;
        field_axioms(&f, &mut rng)?;
    }
    Ok((fields.len() * TRIPLES, format!("{} fields, {TRIPLES} triples each", fields.len())))
}

fn p_groups() -> Result<Vec<PGroup>, String> {
    let e = |x: crate::error::PGroupError| x.to_string();
    let heis = PGroup::heisenberg(&make_field(7, 3).map_err(|x| x.to_string())?).map_err(e)?;
    let es = PGroup::extraspecial_dual(3, 2).map_err(e)?;
    let a = PGroup::extraspecial_dual(7, 3).map_err(e)?;
    let b = PGroup::extraspecial_dual(7, 1).map_err(e)?;
    let central = PGroup::central_product(&a, &b, 1).map_err(e)?;
    Ok(vec![heis, es, central])
}

fn group_suite(opts: &Options) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 1);
    let groups = p_groups()?;
    for g in &groups {
        let samples: Vec<_> = (0..300).map(|_| (g.random_elem(&mut rng), g.random_elem(&mut rng), g.random_elem(&mut rng))).collect();
        check_axioms(g, &samples).map_err(|e| format!("{:?}: {e}", g.kind()))?;
    }
    Ok((groups.len() * 300, "Heisenberg, dual pairing and central product groups".into()))
}

/// `(name, group, expected degree multiset)`.
pub fn oracle_corpus() -> Vec<(String, GroupHandle, Vec<u64>)> {
    let mut out = Vec::new();
    for n in 1..=12 {
        out.push((format!("Z{n}"), fixtures::cyclic(n), vec![1; n as usize]));
    }
    let with_twos = |ones: usize, twos: usize| {
        let mut v = vec![1; ones];
        v.extend(vec![2; twos]);
        v
    };
    out.push(("V4".into(), fixtures::klein_four(), vec![1; 4]));
    out.push(("S3".into(), fixtures::symmetric3(), with_twos(2, 1)));
    out.push(("Z3:Z2".into(), fixtures::s3_semidirect(), with_twos(2, 1)));
    out.push(("D8".into(), fixtures::dihedral8(), with_twos(4, 1)));
    out.push(("Q8".into(), fixtures::quaternion(), with_twos(4, 1)));
    out.push(("S4".into(), fixtures::s4(), vec![1, 1, 2, 3, 3]));
    let mut es27 = vec![1; 9];
    es27.extend([3, 3]);
    out.push(("3^{1+2}_+".into(), fixtures::heisenberg_prime(3), es27.clone()));
    let heis = PGroup::heisenberg(&make_field(3, 1).expect("GF(3)")).expect("Heisenberg");
    out.push(("Heis(GF(3))".into(), heis.enumerate(grp::DEFAULT_CAP).expect("27 elements"), es27));
    let mut h9 = vec![1; 81];
    h9.extend(vec![9; 8]);
    let heis9 = PGroup::heisenberg(&make_field(3, 2).expect("GF(9)")).expect("Heisenberg");
    out.push(("Heis(GF(9))".into(), heis9.enumerate(grp::DEFAULT_CAP).expect("729 elements"), h9));
    out
}

fn oracle_suite() -> Outcome {
    let corpus = oracle_corpus();
    for (name, g, expected) in &corpus {
        let r = chardeg::degrees(g, 3000).map_err(|e| format!("{name}: {e}"))?;
        if r.degrees != *expected {
            return Err(format!("{name}: degrees {:?}, expected {expected:?}", r.degrees));
        }
    }
    Ok((corpus.len(), "cyclic, Klein, S3, S4, D8, Q8, extraspecial and Heisenberg groups".into()))
}

fn gcd_suite() -> Outcome {
    let mut cases = 0;
    for p in (3..50).filter(|&p| is_prime(p)) {
        for q in (3..p).filter(|&q| is_prime(q) && (p - 1) % q == 0) {
            let g = (1..q).fold(1u128, |acc, _| acc * p as u128 + 1);
            if gcd((g % (p as u128 - 1)) as u64, p - 1) != q {
                return Err(format!("gcd((p^q−1)/(p−1), p−1) ≠ q at p = {p}, q = {q}"));
            }
            cases += 1;
        }
    }
    Ok((cases, "odd primes q | p−1, p < 50".into()))
}

fn numth_suite() -> Outcome {
    let mut cases = 0;
    let pis = [PrimeSet::new([2]).unwrap(), PrimeSet::new([2, 3]).unwrap(), PrimeSet::new([5, 7]).unwrap()];
    for pi in &pis {
        for a in 1..60u64 {
            for b in 1..60u64 {
                if pi_part(a * b, pi) != pi_part(a, pi) * pi_part(b, pi) {
                    return Err(format!("π-part not multiplicative at {a}·{b}"));
                }
                if pi_part(a, pi) * pi_part(a, &pi.complement()) != a {
                    return Err(format!("π and π′ parts of {a} do not multiply back"));
                }
                cases += 2;
            }
        }
    }
    if !zsigmondy_primes(2, 6).map_err(|e| e.to_string())?.is_empty() {
        return Err("2^6 − 1 should have no Zsigmondy prime".into());
    }
    for p in [2u64, 3, 5, 7, 11] {
        for n in 1..=8u32 {
            if p.pow(n) > 1 << 40 {
                continue;
            }
            let z = zsigmondy_primes(p, n).map_err(|e| e.to_string())?;
            for r in 2..200u64 {
                if !is_prime(r) {
                    continue;
                }
                let divides = |k: u32| (p.pow(k) - 1) % r == 0;
                let by_definition = divides(n) && (1..n).all(|a| !divides(a));
                if r < 200 && z.contains(r) != by_definition {
                    return Err(format!("Zsigmondy set of {p}^{n} − 1 disagrees at {r}"));
                }
            }
            cases += 1;
        }
    }
    Ok((cases, "π-part multiplicativity, Zsigmondy definition including (2, 6)".into()))
}

fn preset_instances() -> Vec<crate::families::Instance> {
    FamilyParams::presets().iter().filter_map(|p| build(p).ok()).collect()
}

fn aut_suite(opts: &Options) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 2);
    let mut cases = 0;
    for inst in preset_instances() {
        let p = &inst.p_group;
        let gens: Vec<Aut> = inst.generators().into_iter().map(|(_, a)| a).collect();
        let label = inst.params.label();
        for g in &gens {
            act::automorphism_check(p, g).map_err(|w| format!("{label}: {}", w.reason))?;
            if let Aut::Es(e) = g {
                if !e.pairing_compatible() {
                    return Err(format!("{label}: pairing identity fails"));
                }
            }
        }
        for f in &gens {
            for g in &gens {
                let fg = if opts.broken_composition { act::compose(p, g, f) } else { act::compose(p, f, g) }
                    .map_err(|e| e.to_string())?;
                for _ in 0..20 {
                    let x = p.random_elem(&mut rng);
                    let lhs = act::apply(p, &fg, &x).map_err(|e| e.to_string())?;
                    let rhs = act::apply(p, f, &act::apply(p, g, &x).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                    if lhs != rhs {
                        return Err(format!("{label}: composite does not act as f∘g"));
                    }
                    cases += 1;
                }
            }
        }
    }
    Ok((cases, "generator compatibility and composition on preset groups".into()))
}

/// Applies the action of the left factor instead of the right one.
struct Broken(Semidirect);

impl Group for Broken {
    type Elem = SemiElem;

    fn identity(&self) -> SemiElem {
        self.0.identity()
    }

    fn mul(&self, a: &SemiElem, b: &SemiElem) -> SemiElem {
        let h = self.0.acting();
        let moved = h.linear(a.h).apply(&a.x);
        let hh = self.0.mul(&self.0.embed_h(a.h), &self.0.embed_h(b.h)).h;
        SemiElem { x: self.0.p_group().mul(&moved, &b.x), h: hh }
    }

    fn inv(&self, a: &SemiElem) -> SemiElem {
        self.0.inv(a)
    }
}

fn semidirect_suite(opts: &Options) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 3);
    let mut cases = 0;
    for params in [FamilyParams::fitting_two(3), FamilyParams::three(7, 3), FamilyParams::five(7, 3, 4)] {
        let inst = build(&params).map_err(|e| e.to_string())?;
        let s = inst.semidirect().map_err(|e| e.to_string())?;
        let n = inst.h_order() as u32;
        let elem = |rng: &mut ChaCha8Rng| SemiElem { x: inst.p_group.random_elem(rng), h: rng.gen_range(0..n) };
        let samples: Vec<_> = (0..TRIPLES).map(|_| (elem(&mut rng), elem(&mut rng), elem(&mut rng))).collect();
        let result = if opts.broken_composition { check_axioms(&Broken(s), &samples) } else { check_axioms(&s, &samples) };
        result.map_err(|e| format!("{}: {e}", params.label()))?;
        cases += TRIPLES;
    }
    Ok((cases, format!("{TRIPLES} triples on three groups")))
}

fn preset_suite() -> Outcome {
    let caps = Caps::default();
    let mut passed = Vec::new();
    let mut known = Vec::new();
    for params in FamilyParams::presets() {
        let label = params.label();
        match (params.family, build(&params)) {
            (Family::NoPrime, Err(FamilyError::SearchFailed(_))) => known.push(format!("{label} search fails")),
            (_, Err(e)) => return Err(format!("{label}: {e}")),
            (family, Ok(inst)) => {
                let cert = lemma_certificate(&inst, &caps);
                let failed = cert.failed_checks();
                if family == Family::Four && failed == ["cd_h_two_degrees"] {
                    known.push(format!("{label} fails cd_h_two_degrees"));
                } else if !cert.pass || cert.matches_formula != Some(true) {
                    return Err(format!("{label}: failed {failed:?}, formula match {:?}", cert.matches_formula));
                } else {
                    passed.push(label);
                }
            }
        }
    }
    Ok((passed.len() + known.len(), format!("PASS: {}; recorded outcomes: {}", passed.join(" "), known.join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_suites_pass() {
        for name in ["field", "gcd", "numth", "oracle", "group"] {
            let r = run(&Options { filter: Some(name.into()), ..Default::default() });
            assert!(all_passed(&r), "{}", render_table(&r));
        }
    }

    #[test]
    fn broken_composition_is_caught() {
        for name in ["aut", "semidirect"] {
            let good = run(&Options { filter: Some(name.into()), ..Default::default() });
            assert!(all_passed(&good), "{}", render_table(&good));
            let bad = run(&Options { filter: Some(name.into()), broken_composition: true, seed: 0 });
            assert!(!all_passed(&bad));
        }
    }

    #[test]
    fn filter_selects() {
        let r = run(&Options { filter: Some("oracle".into()), ..Default::default() });
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].name, "oracle");
    }
}
