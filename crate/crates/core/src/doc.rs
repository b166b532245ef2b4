//! JSON documents: a built group and a verification report.
//!
//! Integers that may exceed 2^53 are written as decimal strings.

use serde::{Deserialize, Serialize};

use crate::act::{Aut, EsAut, HeisAut};
use crate::error::DocError;
use crate::families::{
    construction_field_degree, expected_kind, Caps, Certificate, FamilyParams, Instance, OracleResult, OracleStatus, Profile, Timings,
};
use crate::gf::{make_field, FieldDescriptor, FieldHandle, Matrix};
use crate::pgrp::{PDescriptor, PGroup};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EsAutDoc {
    #[serde(rename = "M")]
    pub m: Vec<Vec<u64>>,
    #[serde(rename = "M_hat")]
    pub m_hat: Vec<Vec<u64>>,
    pub z_mult: u64,
}

/// Field elements appear as coordinate vectors, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AutDoc {
    Heisenberg { u: Vec<u64>, v: Vec<u64>, frobenius_power: u32 },
    Extraspecial(EsAutDoc),
    Central { first: EsAutDoc, second: EsAutDoc },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDoc {
    pub name: String,
    pub aut: AutDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapsDoc {
    pub max_order: String,
    pub max_classes: usize,
}

impl From<&Caps> for CapsDoc {
    fn from(c: &Caps) -> Self {
        Self { max_order: c.max_order.to_string(), max_classes: c.max_classes }
    }
}

impl CapsDoc {
    pub fn to_caps(&self) -> Result<Caps, DocError> {
        let max_order = self.max_order.parse().map_err(|_| DocError::Malformed(format!("max_order {:?}", self.max_order)))?;
        Ok(Caps { max_order, max_classes: self.max_classes })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    pub schema_version: u32,
    pub family: String,
    pub params: FamilyParams,
    /// The field `F` of the construction; matrices are in its polynomial basis.
    pub field: FieldDescriptor,
    pub p_group: PDescriptor,
    pub p_order_exponent: usize,
    pub h_order: String,
    pub g_order: String,
    pub h_generators: Vec<GeneratorDoc>,
    pub flags: Vec<String>,
    pub caps: CapsDoc,
}

fn es_doc(a: &EsAut) -> EsAutDoc {
    EsAutDoc { m: a.m.row_vecs(), m_hat: a.m_hat.row_vecs(), z_mult: a.z_mult }
}

fn matrix(p: u64, rows: &[Vec<u64>]) -> Result<Matrix, DocError> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len() || r.iter().any(|&x| x >= p)) {
        return Err(DocError::Malformed("matrix must be square with entries below p".into()));
    }
    Ok(Matrix::from_rows(p, rows))
}

fn es_aut(p: u64, d: &EsAutDoc) -> Result<EsAut, DocError> {
    if d.z_mult == 0 || d.z_mult >= p {
        return Err(DocError::Malformed(format!("z_mult {} must lie in 1..{p}", d.z_mult)));
    }
    Ok(EsAut { m: matrix(p, &d.m)?, m_hat: matrix(p, &d.m_hat)?, z_mult: d.z_mult })
}

fn field_value(field: &FieldHandle, coords: &[u64]) -> Result<u32, DocError> {
    if coords.len() != field.degree() as usize || coords.iter().any(|&c| c >= field.p()) {
        return Err(DocError::Malformed(format!("field element {coords:?}")));
    }
    Ok(field.from_coords(coords))
}

pub fn aut_to_doc(target: &PGroup, a: &Aut) -> AutDoc {
    match a {
        Aut::Heis(h) => {
            let f = target.field().expect("Heisenberg target has a field");
            AutDoc::Heisenberg { u: f.coords(h.u), v: f.coords(h.v), frobenius_power: h.i }
        }
        Aut::Es(e) => AutDoc::Extraspecial(es_doc(e)),
        Aut::Central(x, y) => AutDoc::Central { first: es_doc(x), second: es_doc(y) },
    }
}

pub fn aut_from_doc(target: &PGroup, d: &AutDoc) -> Result<Aut, DocError> {
    let p = target.p();
    Ok(match d {
        AutDoc::Heisenberg { u, v, frobenius_power } => {
            let f = target.field().ok_or_else(|| DocError::Malformed("Heisenberg automorphism on a non-Heisenberg group".into()))?;
            let (u, v) = (field_value(f, u)?, field_value(f, v)?);
            if u == 0 || v == 0 || *frobenius_power >= f.degree() {
                return Err(DocError::Malformed("Heisenberg automorphism needs nonzero u, v and a power below the degree".into()));
            }
            Aut::Heis(HeisAut::new(u, v, *frobenius_power))
        }
        AutDoc::Extraspecial(e) => Aut::Es(es_aut(p, e)?),
        AutDoc::Central { first, second } => Aut::Central(es_aut(p, first)?, es_aut(p, second)?),
    })
}

impl GroupDocument {
    pub fn from_instance(inst: &Instance, caps: &Caps) -> Self {
        let p = &inst.p_group;
        Self {
            schema_version: SCHEMA_VERSION,
            family: inst.params.family.name().to_string(),
            params: inst.params.clone(),
            field: p.field().map(|f| f.descriptor()).unwrap_or_else(|| {
                let n = construction_field_degree(&inst.params).expect("valid params");
                make_field(inst.params.p, n).expect("valid params").descriptor()
            }),
            p_group: p.descriptor().clone(),
            p_order_exponent: p.order_exponent(),
            h_order: inst.h_order().to_string(),
            g_order: inst.order_string(),
            h_generators: inst
                .generators()
                .iter()
                .map(|(name, a)| GeneratorDoc { name: name.clone(), aut: aut_to_doc(p, a) })
                .collect(),
            flags: inst.flags.clone(),
            caps: caps.into(),
        }
    }

    /// Rebuilds the instance from the stored data alone; nothing is re-derived from the family.
    pub fn to_instance(&self) -> Result<Instance, DocError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocError::SchemaVersion(self.schema_version));
        }
        if self.family != self.params.family.name() {
            return Err(DocError::Malformed(format!("family {:?} disagrees with params", self.family)));
        }
        self.params.validate()?;
        let p = PGroup::from_descriptor(&self.p_group).map_err(crate::error::FamilyError::from)?;
        if p.kind() != expected_kind(self.params.family) {
            return Err(DocError::Malformed(format!("{:?} group for family {}", p.kind(), self.family)));
        }
        let n = construction_field_degree(&self.params)?;
        if self.field.p != self.params.p || self.field.n != n {
            return Err(DocError::Malformed(format!("field GF({}^{}) does not fit the params", self.field.p, self.field.n)));
        }
        if p.field().is_some_and(|f| f.descriptor() != self.field) {
            return Err(DocError::Malformed("field description disagrees with the p-group".into()));
        }
        if self.h_generators.is_empty() {
            return Err(DocError::Malformed("no generators".into()));
        }
        let gens = self
            .h_generators
            .iter()
            .map(|g| Ok((g.name.clone(), aut_from_doc(&p, &g.aut)?)))
            .collect::<Result<Vec<_>, DocError>>()?;
        Ok(Instance::from_generators(self.params.clone(), p, gens, self.flags.clone())?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, DocError> {
        let v: serde_json::Value = serde_json::from_str(s)?;
        if let Some(ver) = v.get("schema_version").and_then(|x| x.as_u64()) {
            if ver != SCHEMA_VERSION as u64 {
                return Err(DocError::SchemaVersion(ver as u32));
            }
        }
        Ok(serde_json::from_value(v)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ReportStatus {
    Pass,
    Fail,
    PassCertOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub c_order: Option<String>,
    pub d_order: Option<String>,
    pub g_order: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonCanonical {
    pub timings: Timings,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub family: String,
    pub label: String,
    pub params: FamilyParams,
    pub status: ReportStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<CertificateSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// Derived from the certificate; present on PASS.
    pub predictions: Option<Profile>,
    /// The family's closed-form profile.
    pub formula: Option<Profile>,
    pub oracle: Option<OracleResult>,
    pub flags: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_canonical: Option<NonCanonical>,
}

fn pow_string(p: u64, e: usize) -> String {
    let mut n: u128 = 1;
    for _ in 0..e {
        match n.checked_mul(p as u128) {
            Some(m) => n = m,
            None => return format!("{p}^{e}"),
        }
    }
    n.to_string()
}

impl ReportDocument {
    /// Status from whichever of certificate and oracle were run.
    pub fn new(inst: &Instance, cert: Option<Certificate>, oracle: Option<OracleResult>) -> Self {
        let formula = crate::families::predicted_profile(&inst.params).ok();
        let cert_ok = cert.as_ref().map(|c| c.pass);
        let status = match (cert_ok, oracle.as_ref().map(|o| o.status)) {
            (Some(false), _) | (_, Some(OracleStatus::Failed)) => ReportStatus::Fail,
            (None, Some(OracleStatus::SkippedOracle)) => ReportStatus::Fail,
            (_, Some(OracleStatus::SkippedOracle)) => ReportStatus::PassCertOnly,
            _ => ReportStatus::Pass,
        };
        let summary = cert.as_ref().map(|c| CertificateSummary {
            c_order: c.c_order.map(|n| n.to_string()),
            d_order: c.d_order_exponent.map(|e| pow_string(inst.p_group.p(), e)),
            g_order: inst.order_string(),
        });
        Self {
            schema_version: SCHEMA_VERSION,
            family: inst.params.family.name().to_string(),
            label: inst.params.label(),
            params: inst.params.clone(),
            status,
            summary,
            predictions: cert.as_ref().and_then(|c| c.predicted.clone()),
            certificate: cert,
            formula,
            oracle,
            flags: inst.flags.clone(),
            non_canonical: None,
        }
    }

    pub fn with_timings(mut self, timings: Timings) -> Self {
        self.non_canonical = Some(NonCanonical { timings });
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, DocError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, lemma_certificate, Mutation};

    #[test]
    fn group_document_round_trips() {
        for params in [FamilyParams::fitting_two(3), FamilyParams::one(7, 3), FamilyParams::five(7, 3, 4)] {
            let inst = build(&params).unwrap();
            let doc = GroupDocument::from_instance(&inst, &Caps::default());
            let text = doc.to_json();
            let back = GroupDocument::from_json(&text).unwrap();
            assert_eq!(back, doc);
            let rebuilt = back.to_instance().unwrap();
            assert_eq!(rebuilt.h_order(), inst.h_order());
            assert_eq!(GroupDocument::from_instance(&rebuilt, &Caps::default()).to_json(), text);
        }
    }

    #[test]
    fn rejects_bad_versions_and_entries() {
        let inst = build(&FamilyParams::fitting_two(3)).unwrap();
        let mut doc = GroupDocument::from_instance(&inst, &Caps::default());
        doc.schema_version = 9;
        assert!(matches!(GroupDocument::from_json(&doc.to_json()), Err(DocError::SchemaVersion(9))));
        let mut doc = GroupDocument::from_instance(&inst, &Caps::default());
        if let AutDoc::Extraspecial(e) = &mut doc.h_generators[0].aut {
            e.z_mult = 0;
        }
        assert!(matches!(doc.to_instance(), Err(DocError::Malformed(_))));
    }

    #[test]
    fn corrupted_document_still_loads_and_fails() {
        let inst = build(&FamilyParams::fitting_two(3)).unwrap();
        let bad = inst.mutate(&Mutation::CorruptZMult { generator: 0, delta: 1 }).unwrap();
        let doc = GroupDocument::from_instance(&bad, &Caps::default());
        let loaded = GroupDocument::from_json(&doc.to_json()).unwrap().to_instance().unwrap();
        let cert = lemma_certificate(&loaded, &Caps::default());
        assert!(!cert.pass);
        let report = ReportDocument::new(&loaded, Some(cert), None);
        assert_eq!(report.status, ReportStatus::Fail);
        assert!(report.certificate.as_ref().unwrap().checks[0].witness.is_some());
    }

    #[test]
    fn report_is_deterministic() {
        let inst = build(&FamilyParams::three(7, 3)).unwrap();
        let a = ReportDocument::new(&inst, Some(lemma_certificate(&inst, &Caps::default())), None).to_json();
        let b = ReportDocument::new(&inst, Some(lemma_certificate(&inst, &Caps::default())), None).to_json();
        assert_eq!(a, b);
        let back = ReportDocument::from_json(&a).unwrap();
        assert_eq!(back.status, ReportStatus::Pass);
        assert_eq!(back.summary.unwrap().d_order.as_deref(), Some("7"));
    }
}
