//! The model file format: one structured-text document carrying the field
//! flag, base variables, invertibles, generator tiers and differential,
//! plus optional model-family, closed-form, pair, chart and comparison
//! sections. Serialization is canonical: parse then print is the identity
//! on canonical files, and unknown keys are rejected.

use crate::cdga::StandardFormCdga;
use crate::darboux::{DarbouxSpec, Family, GeneratedModel};
use crate::dcrit::{ComparisonCertificate, CriticalChart};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::forms::{ClosedForm, PhiPhiPair};
use crate::scalar::Scalar;
use crate::sig::{FieldKind, SigRef, Signature};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub algebra: AlgebraSection,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub darboux_spec: Option<DarbouxSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_phi: Option<PhiPhiSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<ChartSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison_certificate: Option<CertificateSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSection {
    pub field: String,
    pub base: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub invertibles: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorDecl>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DarbouxSection {
    pub family: String,
    pub d: u32,
    pub ranks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<String>,
    pub hamiltonian: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ClosedFormSection {
    pub k: i64,
    pub p: i64,
    pub components: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhiPhiSection {
    pub k: i64,
    pub phi: String,
    pub varphi: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ChartSection {
    pub potential: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CertificateSection {
    pub chart_a_base: Vec<String>,
    pub chart_a_potential: String,
    pub chart_b_base: Vec<String>,
    pub chart_b_potential: String,
    pub glue_base: Vec<String>,
    pub e_count: usize,
    pub i_funcs: Vec<String>,
    pub a_map: Vec<String>,
    pub b_map: Vec<String>,
    pub j_matrix: Vec<Vec<String>>,
    pub k_matrix: Vec<Vec<String>>,
    pub l_vec: Vec<String>,
    pub m_matrix: Vec<Vec<String>>,
    pub n_tensor: Vec<Vec<Vec<String>>>,
}

fn field_kind(s: &str) -> Result<FieldKind> {
    match s {
        "rational" => Ok(FieldKind::Rational),
        "gaussian" => Ok(FieldKind::Gaussian),
        other => Err(Error::Model(format!(
            "unknown field `{other}`; expected `rational` or `gaussian`"
        ))),
    }
}

fn field_tag(f: FieldKind) -> &'static str {
    match f {
        FieldKind::Rational => "rational",
        FieldKind::Gaussian => "gaussian",
    }
}

fn family_of(tag: &str, d: u32) -> Result<Family> {
    match tag {
        "odd" => Ok(Family::Odd { d }),
        "div_four" => Ok(Family::DivFour { d }),
        "strong_two" => Ok(Family::StrongTwo { d }),
        "weak_two" => Ok(Family::WeakTwo { d }),
        "paired_even" => Ok(Family::PairedEven { half: d }),
        other => Err(Error::Model(format!("unknown family `{other}`"))),
    }
}

fn family_fields(f: Family) -> (&'static str, u32) {
    match f {
        Family::Odd { d } => ("odd", d),
        Family::DivFour { d } => ("div_four", d),
        Family::StrongTwo { d } => ("strong_two", d),
        Family::WeakTwo { d } => ("weak_two", d),
        Family::PairedEven { half } => ("paired_even", half),
    }
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Model(e.to_string()))
    }

    /// Canonical byte-deterministic rendering.
    pub fn print(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Model(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn signature(&self) -> Result<SigRef> {
        let field = field_kind(&self.algebra.field)?;
        let mut b = Signature::builder(field).base_vars(&self.algebra.base);
        for g in &self.algebra.generators {
            b = b.generator(&g.name, g.degree);
        }
        for inv in &self.algebra.invertibles {
            b = b.invertible(inv);
        }
        b.build()
    }

    pub fn cdga(&self) -> Result<(SigRef, StandardFormCdga)> {
        let sig = self.signature()?;
        let cdga = StandardFormCdga::build(&sig, self.parse_differential(&sig)?)?;
        Ok((sig, cdga))
    }

    /// Like `cdga` but without the square-zero validation, so residues can
    /// be reported instead of refused.
    pub fn cdga_unchecked(&self) -> Result<(SigRef, StandardFormCdga)> {
        let sig = self.signature()?;
        let cdga = StandardFormCdga::build_unchecked(&sig, self.parse_differential(&sig)?)?;
        Ok((sig, cdga))
    }

    fn parse_differential(&self, sig: &SigRef) -> Result<BTreeMap<String, Element>> {
        let mut out = BTreeMap::new();
        for (name, src) in &self.differential {
            out.insert(name.clone(), Element::parse(sig, src)?);
        }
        Ok(out)
    }

    pub fn darboux_spec(&self) -> Result<DarbouxSpec> {
        let section = self
            .darboux_spec
            .as_ref()
            .ok_or_else(|| Error::Model("no darboux_spec section".to_string()))?;
        let field = field_kind(&self.algebra.field)?;
        Ok(DarbouxSpec {
            family: family_of(&section.family, section.d)?,
            field,
            base: self.algebra.base.clone(),
            ranks: section.ranks.clone(),
            q: section.q.clone(),
            extra_invertibles: self
                .algebra
                .invertibles
                .iter()
                .filter(|s| !section.q.contains(s))
                .cloned()
                .collect(),
            hamiltonian: section.hamiltonian.clone(),
        })
    }

    pub fn closed_form(&self, sig: &SigRef) -> Result<ClosedForm> {
        let section = self
            .closed_form
            .as_ref()
            .ok_or_else(|| Error::Model("no closed_form section".to_string()))?;
        let components = section
            .components
            .iter()
            .map(|src| Element::parse(sig, src))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClosedForm::new(section.k, section.p, components))
    }

    pub fn phi_phi(&self, sig: &SigRef) -> Result<PhiPhiPair> {
        let section = self
            .phi_phi
            .as_ref()
            .ok_or_else(|| Error::Model("no phi_phi section".to_string()))?;
        Ok(PhiPhiPair::new(
            section.k,
            Element::parse(sig, &section.phi)?,
            Element::parse(sig, &section.varphi)?,
        ))
    }

    /// The 2-form to run checks against: an explicit closed form if present,
    /// else the de Rham differential of the pair's one-form, else the
    /// generated family form.
    pub fn omega0(&self, sig: &SigRef) -> Result<Element> {
        if self.closed_form.is_some() {
            let f = self.closed_form(sig)?;
            return f
                .omega0()
                .cloned()
                .ok_or_else(|| Error::Model("closed_form has no components".to_string()));
        }
        if self.phi_phi.is_some() {
            let pair = self.phi_phi(sig)?;
            return crate::derham::de_rham(sig).apply(&pair.varphi);
        }
        if self.darboux_spec.is_some() {
            let model = self.darboux_spec()?.generate()?;
            crate::sig::same_sig(sig, &model.sig)?;
            return Ok(model.omega0().clone());
        }
        Err(Error::Model(
            "no closed_form, phi_phi or darboux_spec section to take a 2-form from".to_string(),
        ))
    }

    pub fn chart(&self) -> Result<CriticalChart> {
        let section = self
            .chart
            .as_ref()
            .ok_or_else(|| Error::Model("no chart section".to_string()))?;
        Ok(CriticalChart {
            field: field_kind(&self.algebra.field)?,
            base: self.algebra.base.clone(),
            invertibles: self.algebra.invertibles.clone(),
            potential: section.potential.clone(),
        })
    }

    pub fn certificate(&self) -> Result<ComparisonCertificate> {
        let s = self
            .comparison_certificate
            .as_ref()
            .ok_or_else(|| Error::Model("no comparison_certificate section".to_string()))?;
        let field = field_kind(&self.algebra.field)?;
        Ok(ComparisonCertificate {
            chart_a: CriticalChart {
                field,
                base: s.chart_a_base.clone(),
                invertibles: Vec::new(),
                potential: s.chart_a_potential.clone(),
            },
            chart_b: CriticalChart {
                field,
                base: s.chart_b_base.clone(),
                invertibles: Vec::new(),
                potential: s.chart_b_potential.clone(),
            },
            glue_base: s.glue_base.clone(),
            e_count: s.e_count,
            i_funcs: s.i_funcs.clone(),
            a_map: s.a_map.clone(),
            b_map: s.b_map.clone(),
            j_matrix: s.j_matrix.clone(),
            k_matrix: s.k_matrix.clone(),
            l_vec: s.l_vec.clone(),
            m_matrix: s.m_matrix.clone(),
            n_tensor: s.n_tensor.clone(),
        })
    }

    /// Serialize a generated model as a complete file: roster, differential,
    /// family section, closed form and pair, all in canonical form.
    pub fn from_generated(model: &GeneratedModel) -> Result<ModelFile> {
        let sig = &model.sig;
        let spec = &model.spec;
        let invertibles: Vec<String> = (0..sig.n_invertibles())
            .map(|j| sig.invertible_source(j).to_string())
            .collect();
        let generators = sig
            .negative_gens()
            .map(|g| GeneratorDecl {
                name: sig.name(g).to_string(),
                degree: sig.degree(g),
            })
            .collect();
        let mut differential = BTreeMap::new();
        for g in sig.negative_gens() {
            let v = model.cdga.d_of_gen(g);
            if !v.is_zero() {
                differential.insert(sig.name(g).to_string(), v.render());
            }
        }
        let (family, d) = family_fields(spec.family);
        // canonicalize the q list so section comparisons match the
        // designated-invertible sources byte for byte
        let q_canonical: Vec<String> = spec
            .q
            .iter()
            .map(|src| Ok(Element::parse(sig, src)?.render()))
            .collect::<Result<_>>()?;
        Ok(ModelFile {
            algebra: AlgebraSection {
                field: field_tag(spec.field).to_string(),
                base: spec.base.clone(),
                invertibles,
                generators,
            },
            differential,
            darboux_spec: Some(DarbouxSection {
                family: family.to_string(),
                d,
                ranks: spec.ranks.clone(),
                q: q_canonical,
                hamiltonian: model.hamiltonian.render(),
            }),
            closed_form: Some(ClosedFormSection {
                k: model.omega.k,
                p: model.omega.p,
                components: model.omega.components.iter().map(|e| e.render()).collect(),
            }),
            phi_phi: Some(PhiPhiSection {
                k: model.pair.k,
                phi: model.pair.phi.render(),
                varphi: model.pair.varphi.render(),
            }),
            chart: None,
            comparison_certificate: None,
        })
    }
}

/// Parse a `x1=0,x2=1/2` point argument into named scalar values.
pub fn parse_point(src: &str) -> Result<BTreeMap<String, Scalar>> {
    let mut out = BTreeMap::new();
    for chunk in src.split(',') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let (name, value) = chunk.split_once('=').ok_or_else(|| {
            Error::Model(format!(
                "point entry `{chunk}` is not of the form name=value"
            ))
        })?;
        let value = value.trim();
        let scalar = match value.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n
                    .trim()
                    .parse()
                    .map_err(|_| Error::Model(format!("bad numerator in point entry `{chunk}`")))?;
                let d: i64 = d.trim().parse().map_err(|_| {
                    Error::Model(format!("bad denominator in point entry `{chunk}`"))
                })?;
                if d == 0 {
                    return Err(Error::Model(format!("zero denominator in `{chunk}`")));
                }
                Scalar::from_ratio(n, d)
            }
            None => {
                let n: i64 = value
                    .parse()
                    .map_err(|_| Error::Model(format!("bad value in point entry `{chunk}`")))?;
                Scalar::from_int(n)
            }
        };
        out.insert(name.trim().to_string(), scalar);
    }
    if out.is_empty() {
        return Err(Error::Model("empty point".to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUBIC: &str = r#"
[algebra]
field = "rational"
base = ["x"]

[[algebra.generators]]
name = "y"
degree = -1

[differential]
y = "3*x^2"

[closed_form]
k = -1
p = 2
components = ["dy*dx"]

[phi_phi]
k = -1
phi = "-x^3"
varphi = "y*dx"
"#;

    #[test]
    fn parse_and_reprint_is_stable() {
        let m = ModelFile::parse(CUBIC).unwrap();
        let printed = m.print().unwrap();
        let again = ModelFile::parse(&printed).unwrap();
        assert_eq!(m, again);
        assert_eq!(printed, again.print().unwrap());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = CUBIC.replace("[differential]", "[differential]\n");
        assert!(ModelFile::parse(&bad).is_ok());
        let bad = format!("{CUBIC}\n[mystery]\nkey = 1\n");
        assert!(ModelFile::parse(&bad).is_err());
    }

    #[test]
    fn loads_cdga_form_and_pair() {
        let m = ModelFile::parse(CUBIC).unwrap();
        let (sig, cdga) = m.cdga().unwrap();
        let omega = m.closed_form(&sig).unwrap();
        assert!(crate::forms::check_closed(&cdga, &omega).unwrap().closed);
        let pair = m.phi_phi(&sig).unwrap();
        pair.validate(&cdga).unwrap();
    }

    #[test]
    fn generated_model_roundtrips_through_the_file_format() {
        let spec = DarbouxSpec {
            family: Family::WeakTwo { d: 0 },
            field: FieldKind::Rational,
            base: vec!["x".to_string()],
            ranks: vec![1, 2],
            q: vec!["x^2 + 1".to_string(), "-x^2 - 1".to_string()],
            extra_invertibles: Vec::new(),
            hamiltonian: "z1_1*(x^3) + z1_2*(x^3)".to_string(),
        };
        let model = spec.generate().unwrap();
        let file = ModelFile::from_generated(&model).unwrap();
        let text = file.print().unwrap();
        let back = ModelFile::parse(&text).unwrap();
        assert_eq!(file, back);
        // the reparsed file reproduces the same cdga and closed form
        let (sig, cdga) = back.cdga().unwrap();
        let omega = back.closed_form(&sig).unwrap();
        assert!(crate::forms::check_closed(&cdga, &omega).unwrap().closed);
        let spec2 = back.darboux_spec().unwrap();
        assert!(spec2.check_master().unwrap().ok);
        let model2 = spec2.generate().unwrap();
        assert!(model2.omega0().equals(model.omega0()).unwrap());
    }

    #[test]
    fn point_syntax() {
        let p = parse_point("x1=0,x2=1/2").unwrap();
        assert_eq!(p["x1"], Scalar::zero());
        assert_eq!(p["x2"], Scalar::from_ratio(1, 2));
        assert!(parse_point("x1").is_err());
        assert!(parse_point("x=1/0").is_err());
    }
}
