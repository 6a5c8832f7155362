//! Generator tables.
//!
//! A [`Signature`] fixes everything the kernel needs to know about the ambient
//! free graded-commutative algebra: the ground field flag, the ordered list of
//! generators with their degrees and weights, and the designated invertible
//! base elements used for localization.
//!
//! Algebra generators sit in non-positive degrees. For every algebra generator
//! `g` the table also carries a one-form symbol `dg` of degree `|g| - 1` and
//! weight 1, appended after all algebra generators, so a single multiplication
//! routine and a single sign rule service both the algebra and its de Rham
//! extension.

use crate::error::{Error, Result};
use crate::monomial::TermMap;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenInfo {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
    /// `Some(g)` when this generator is the one-form symbol of `g`.
    pub form_of: Option<GenId>,
}

impl GenInfo {
    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

#[derive(Debug, Clone)]
pub struct Signature {
    pub field: FieldKind,
    gens: Vec<GenInfo>,
    by_name: BTreeMap<String, GenId>,
    xi: BTreeMap<GenId, GenId>,
    /// Designated invertible base elements: (canonical source, parsed terms).
    invertibles: Vec<(String, TermMap)>,
}

pub type SigRef = Arc<Signature>;

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.gens == other.gens
            && self
                .invertibles
                .iter()
                .map(|(s, _)| s)
                .eq(other.invertibles.iter().map(|(s, _)| s))
    }
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn builder(field: FieldKind) -> SignatureBuilder {
        SignatureBuilder {
            field,
            base: Vec::new(),
            negatives: Vec::new(),
            invertibles: Vec::new(),
        }
    }

    pub fn n_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn info(&self, g: GenId) -> &GenInfo {
        &self.gens[g.0 as usize]
    }

    pub fn degree(&self, g: GenId) -> i64 {
        self.info(g).degree
    }

    pub fn weight(&self, g: GenId) -> i64 {
        self.info(g).weight
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.info(g).name
    }

    pub fn is_odd(&self, g: GenId) -> bool {
        self.info(g).is_odd()
    }

    pub fn is_algebra(&self, g: GenId) -> bool {
        self.info(g).form_of.is_none()
    }

    pub fn is_one_form(&self, g: GenId) -> bool {
        self.info(g).form_of.is_some()
    }

    pub fn is_base(&self, g: GenId) -> bool {
        self.is_algebra(g) && self.degree(g) == 0
    }

    /// Tier of an algebra generator in the standard-form filtration.
    pub fn tier(&self, g: GenId) -> i64 {
        -self.degree(g)
    }

    pub fn find(&self, name: &str) -> Option<GenId> {
        self.by_name.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<GenId> {
        self.find(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// The one-form symbol attached to an algebra generator.
    pub fn xi_of(&self, g: GenId) -> Option<GenId> {
        self.xi.get(&g).copied()
    }

    pub fn base_of(&self, xi: GenId) -> Option<GenId> {
        self.info(xi).form_of
    }

    pub fn all_gens(&self) -> impl Iterator<Item = GenId> + '_ {
        (0..self.gens.len() as u32).map(GenId)
    }

    pub fn algebra_gens(&self) -> impl Iterator<Item = GenId> + '_ {
        self.all_gens().filter(move |g| self.is_algebra(*g))
    }

    pub fn base_gens(&self) -> impl Iterator<Item = GenId> + '_ {
        self.all_gens().filter(move |g| self.is_base(*g))
    }

    pub fn negative_gens(&self) -> impl Iterator<Item = GenId> + '_ {
        self.all_gens()
            .filter(move |g| self.is_algebra(*g) && self.degree(*g) < 0)
    }

    pub fn one_form_gens(&self) -> impl Iterator<Item = GenId> + '_ {
        self.all_gens().filter(move |g| self.is_one_form(*g))
    }

    /// Algebra generators of a given tier, in table order.
    pub fn tier_gens(&self, tier: i64) -> Vec<GenId> {
        self.algebra_gens()
            .filter(|g| self.tier(*g) == tier)
            .collect()
    }

    pub fn top_tier(&self) -> i64 {
        self.algebra_gens().map(|g| self.tier(g)).max().unwrap_or(0)
    }

    pub fn n_invertibles(&self) -> usize {
        self.invertibles.len()
    }

    pub fn invertible_terms(&self, j: usize) -> &TermMap {
        &self.invertibles[j].1
    }

    pub fn invertible_source(&self, j: usize) -> &str {
        &self.invertibles[j].0
    }

    pub fn gaussian(&self) -> bool {
        self.field == FieldKind::Gaussian
    }
}

pub struct SignatureBuilder {
    field: FieldKind,
    base: Vec<String>,
    negatives: Vec<(String, i64)>,
    invertibles: Vec<String>,
}

impl SignatureBuilder {
    pub fn base_var(mut self, name: &str) -> Self {
        self.base.push(name.to_string());
        self
    }

    pub fn base_vars<I: IntoIterator<Item = S>, S: AsRef<str>>(mut self, names: I) -> Self {
        for n in names {
            self.base.push(n.as_ref().to_string());
        }
        self
    }

    pub fn generator(mut self, name: &str, degree: i64) -> Self {
        self.negatives.push((name.to_string(), degree));
        self
    }

    pub fn invertible(mut self, expr: &str) -> Self {
        self.invertibles.push(expr.to_string());
        self
    }

    pub fn build(self) -> Result<SigRef> {
        let mut gens: Vec<GenInfo> = Vec::new();
        for name in &self.base {
            gens.push(GenInfo {
                name: name.clone(),
                degree: 0,
                weight: 0,
                form_of: None,
            });
        }
        // Negative-degree generators are ordered by tier, ties kept in
        // declaration order, so the table is canonical for a given roster.
        let mut negs: Vec<(usize, &(String, i64))> = self.negatives.iter().enumerate().collect();
        negs.sort_by_key(|(idx, (_, deg))| (-*deg, *idx));
        for (_, (name, degree)) in negs {
            if *degree >= 0 {
                return Err(Error::PositiveDegree {
                    name: name.clone(),
                    degree: *degree,
                });
            }
            gens.push(GenInfo {
                name: name.clone(),
                degree: *degree,
                weight: 0,
                form_of: None,
            });
        }

        let n_alg = gens.len() as u32;
        for idx in 0..n_alg {
            let base = &gens[idx as usize];
            gens.push(GenInfo {
                name: format!("d{}", base.name),
                degree: base.degree - 1,
                weight: 1,
                form_of: Some(GenId(idx)),
            });
        }

        let mut by_name = BTreeMap::new();
        for (idx, info) in gens.iter().enumerate() {
            if !valid_identifier(&info.name) {
                return Err(Error::BadGeneratorName(
                    info.name.clone(),
                    "expected [A-Za-z][A-Za-z0-9_]*".to_string(),
                ));
            }
            if info.name == "i" {
                return Err(Error::BadGeneratorName(
                    info.name.clone(),
                    "`i` is reserved for the imaginary unit".to_string(),
                ));
            }
            if by_name
                .insert(info.name.clone(), GenId(idx as u32))
                .is_some()
            {
                return Err(Error::DuplicateGenerator(info.name.clone()));
            }
        }

        let xi: BTreeMap<GenId, GenId> = (0..n_alg)
            .map(|idx| (GenId(idx), GenId(n_alg + idx)))
            .collect();

        let mut sig = Signature {
            field: self.field,
            gens,
            by_name,
            xi,
            invertibles: Vec::new(),
        };

        for src in &self.invertibles {
            let (terms, den) = crate::parse::parse_terms(&sig, src)?;
            if !den.is_empty() {
                return Err(Error::InvertibleNotBase(src.clone()));
            }
            if terms.is_empty() {
                return Err(Error::InvertibleNotBase(src.clone()));
            }
            let base_only = terms
                .keys()
                .all(|m| m.factors().iter().all(|(g, _)| sig.is_base(*g)));
            if !base_only {
                return Err(Error::InvertibleNotBase(src.clone()));
            }
            let constant = terms.keys().all(|m| m.is_unit());
            if constant {
                return Err(Error::InvertibleNotBase(format!(
                    "{src} (constants need no designation)"
                )));
            }
            let canonical = crate::element::render_terms(&sig, &terms);
            sig.invertibles.push((canonical, terms));
        }

        Ok(Arc::new(sig))
    }
}

/// Same-table guard used by every binary operation.
pub fn same_sig(a: &SigRef, b: &SigRef) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::SignatureMismatch)
    }
}
