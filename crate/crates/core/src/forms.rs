//! Closed p-forms of degree k, equivalence certificates, the weight-1/2
//! cyclic cochain calculus, and the two decidable nondegeneracy proxies
//! (pointwise and strict) via pairing matrices.

use crate::cdga::{RationalPoint, StandardFormCdga};
use crate::derham::{contract, de_rham};
use crate::derivation::{euler, partial};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sig::{GenId, SigRef};
use std::collections::BTreeMap;

/// A closed p-form of degree k: a finite sequence `w^0, w^1, ...` with `w^i`
/// of weight `p+i` and total degree `k-p-2i`, satisfying `d w^0 = 0` and
/// `d_dR w^i + d w^{i+1} = 0` for all `i >= 0`.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    pub k: i64,
    pub p: i64,
    pub components: Vec<Element>,
}

impl ClosedForm {
    pub fn new(k: i64, p: i64, components: Vec<Element>) -> Self {
        ClosedForm { k, p, components }
    }

    pub fn two_form(k: i64, omega0: Element) -> Self {
        ClosedForm {
            k,
            p: 2,
            components: vec![omega0],
        }
    }

    pub fn component(&self, i: usize) -> Option<&Element> {
        self.components.get(i)
    }

    pub fn omega0(&self) -> Option<&Element> {
        self.components.first()
    }

    pub fn validate_shape(&self, sig: &SigRef) -> Result<()> {
        for (i, w) in self.components.iter().enumerate() {
            crate::sig::same_sig(sig, w.sig())?;
            let i = i as i64;
            if !w.is_homogeneous(self.k - self.p - 2 * i, self.p + i) {
                return Err(Error::NotHomogeneous {
                    degree: self.k - self.p - 2 * i,
                    weight: self.p + i,
                    found: w.render(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ClosednessReport {
    pub closed: bool,
    /// Nonzero residues, labelled by the slot they obstruct.
    pub residues: Vec<(usize, Element)>,
}

/// Check the defining identities of a closed form exactly.
pub fn check_closed(cdga: &StandardFormCdga, omega: &ClosedForm) -> Result<ClosednessReport> {
    omega.validate_shape(cdga.sig())?;
    let d = cdga.total_differential()?;
    let ddr = de_rham(cdga.sig());
    let zero = Element::zero(cdga.sig());
    let n = omega.components.len();
    let mut residues = Vec::new();
    // slot 0: d w^0; slot i+1: d_dR w^i + d w^{i+1}
    let r0 = d.apply(omega.component(0).unwrap_or(&zero))?;
    if !r0.is_zero() {
        residues.push((0, r0));
    }
    for i in 0..n {
        let wi = omega.component(i).unwrap_or(&zero);
        let wi1 = omega.component(i + 1).unwrap_or(&zero);
        let r = ddr.apply(wi)?.add(&d.apply(wi1)?)?;
        if !r.is_zero() {
            residues.push((i + 1, r));
        }
    }
    Ok(ClosednessReport {
        closed: residues.is_empty(),
        residues,
    })
}

/// The `a^0, a^1, ...` data exhibiting the equivalence of two closed forms.
#[derive(Debug, Clone)]
pub struct EquivalenceCertificate {
    pub components: Vec<Element>,
}

/// Verify the equivalence identities slot by slot:
/// `w^0 - w~^0 = d a^0` and `w^{i+1} - w~^{i+1} = d_dR a^i + d a^{i+1}`.
pub fn check_equivalence(
    cdga: &StandardFormCdga,
    omega: &ClosedForm,
    other: &ClosedForm,
    cert: &EquivalenceCertificate,
) -> Result<bool> {
    if omega.k != other.k || omega.p != other.p {
        return Err(Error::Shape(
            "cannot compare forms of different (k, p)".to_string(),
        ));
    }
    let rep = check_closed(cdga, omega)?;
    if !rep.closed {
        return Err(Error::NotClosed(rep.residues[0].1.render()));
    }
    let rep = check_closed(cdga, other)?;
    if !rep.closed {
        return Err(Error::NotClosed(rep.residues[0].1.render()));
    }
    for (i, a) in cert.components.iter().enumerate() {
        let i = i as i64;
        if !a.is_homogeneous(omega.k - omega.p - 2 * i - 1, omega.p + i) {
            return Err(Error::NotHomogeneous {
                degree: omega.k - omega.p - 2 * i - 1,
                weight: omega.p + i,
                found: a.render(),
            });
        }
    }
    let d = cdga.total_differential()?;
    let ddr = de_rham(cdga.sig());
    let zero = Element::zero(cdga.sig());
    let n = omega
        .components
        .len()
        .max(other.components.len())
        .max(cert.components.len());
    let comp = |f: &ClosedForm, i: usize| f.component(i).cloned().unwrap_or_else(|| zero.clone());
    let alpha = |i: usize| {
        cert.components
            .get(i)
            .cloned()
            .unwrap_or_else(|| zero.clone())
    };

    let lhs0 = comp(omega, 0).sub(&comp(other, 0))?;
    if !lhs0.equals(&d.apply(&alpha(0))?)? {
        return Ok(false);
    }
    for i in 0..=n {
        let lhs = comp(omega, i + 1).sub(&comp(other, i + 1))?;
        let rhs = ddr.apply(&alpha(i))?.add(&d.apply(&alpha(i + 1))?)?;
        if !lhs.equals(&rhs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `(Phi, phi)` package: `Phi` of degree k+1 in the algebra and `phi` a
/// one-form of degree k, with `d Phi = 0` and `d_dR Phi + d phi = 0`.
#[derive(Debug, Clone)]
pub struct PhiPhiPair {
    pub k: i64,
    pub phi: Element,
    pub varphi: Element,
}

impl PhiPhiPair {
    pub fn new(k: i64, phi: Element, varphi: Element) -> Self {
        PhiPhiPair { k, phi, varphi }
    }

    /// Every invariant, with the list of failures instead of a bare boolean.
    pub fn violations(&self, cdga: &StandardFormCdga) -> Result<Vec<String>> {
        let mut out = Vec::new();
        if !self.phi.is_homogeneous(self.k + 1, 0) {
            out.push(format!(
                "Phi is not homogeneous of degree {} and weight 0: {}",
                self.k + 1,
                self.phi.render()
            ));
        }
        if !self.varphi.is_homogeneous(self.k - 1, 1) {
            out.push(format!(
                "phi is not a one-form of degree {}: {}",
                self.k,
                self.varphi.render()
            ));
        }
        if !out.is_empty() {
            return Ok(out);
        }
        let d = cdga.total_differential()?;
        let ddr = de_rham(cdga.sig());
        let r1 = d.apply(&self.phi)?;
        if !r1.is_zero() {
            out.push(format!("d Phi = {}", r1.render()));
        }
        let r2 = ddr.apply(&self.phi)?.add(&d.apply(&self.varphi)?)?;
        if !r2.is_zero() {
            out.push(format!("d_dR Phi + d phi = {}", r2.render()));
        }
        Ok(out)
    }

    pub fn validate(&self, cdga: &StandardFormCdga) -> Result<()> {
        let v = self.violations(cdga)?;
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Shape(v.join("; ")))
        }
    }
}

/// `(Phi, phi) -> (d_dR phi, 0, 0, ...)`: the closed 2-form induced by a
/// valid pair, with closedness re-verified before returning.
pub fn cc_to_nc(cdga: &StandardFormCdga, pair: &PhiPhiPair) -> Result<ClosedForm> {
    pair.validate(cdga)?;
    let ddr = de_rham(cdga.sig());
    let omega0 = ddr.apply(&pair.varphi)?;
    let form = ClosedForm::two_form(pair.k, omega0);
    let rep = check_closed(cdga, &form)?;
    if !rep.closed {
        return Err(Error::NotClosed(rep.residues[0].1.render()));
    }
    Ok(form)
}

/// Which index range of the mixed complex a cochain lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CochainKind {
    /// Slots `i >= 0`.
    Negative,
    /// All slots.
    Periodic,
    /// Slots `i <= 0`.
    Cyclic,
}

impl CochainKind {
    fn admits(&self, i: i64) -> bool {
        match self {
            CochainKind::Negative => i >= 0,
            CochainKind::Periodic => true,
            CochainKind::Cyclic => i <= 0,
        }
    }
}

/// A finitely supported cochain of total degree `n` and weight label `p`:
/// the slot-`i` component has total degree `n - 2i` and weight `p + i`.
#[derive(Debug, Clone)]
pub struct Cochain {
    pub n: i64,
    pub p: i64,
    pub kind: CochainKind,
    pub components: BTreeMap<i64, Element>,
}

impl Cochain {
    pub fn new(
        sig: &SigRef,
        n: i64,
        p: i64,
        kind: CochainKind,
        components: BTreeMap<i64, Element>,
    ) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for (i, e) in components {
            crate::sig::same_sig(sig, e.sig())?;
            if e.is_zero() {
                continue;
            }
            if !kind.admits(i) {
                return Err(Error::Shape(format!("slot {i} is outside the complex")));
            }
            if p + i < 0 {
                return Err(Error::Shape(format!("slot {i} has negative weight")));
            }
            if !e.is_homogeneous(n - 2 * i, p + i) {
                return Err(Error::NotHomogeneous {
                    degree: n - 2 * i,
                    weight: p + i,
                    found: e.render(),
                });
            }
            kept.insert(i, e);
        }
        Ok(Cochain {
            n,
            p,
            kind,
            components: kept,
        })
    }

    pub fn from_pair(cdga: &StandardFormCdga, pair: &PhiPhiPair) -> Result<Cochain> {
        let mut components = BTreeMap::new();
        components.insert(-1, pair.phi.clone());
        components.insert(0, pair.varphi.clone());
        Cochain::new(cdga.sig(), pair.k - 1, 1, CochainKind::Cyclic, components)
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }
}

/// The mixed differential `b + B` (internal total differential plus the de
/// Rham operator), with components escaping the index range dropped.
pub fn mixed_differential(cdga: &StandardFormCdga, c: &Cochain) -> Result<Cochain> {
    let d = cdga.total_differential()?;
    let ddr = de_rham(cdga.sig());
    let zero = Element::zero(cdga.sig());
    let mut out: BTreeMap<i64, Element> = BTreeMap::new();
    let slots: Vec<i64> = c.components.keys().flat_map(|i| [*i, *i + 1]).collect();
    for j in slots {
        if !c.kind.admits(j) || out.contains_key(&j) {
            continue;
        }
        let bj = c.components.get(&j).unwrap_or(&zero);
        let bj1 = c.components.get(&(j - 1)).unwrap_or(&zero);
        let v = d.apply(bj)?.add(&ddr.apply(bj1)?)?;
        if !v.is_zero() {
            out.insert(j, v);
        }
    }
    Cochain::new(cdga.sig(), c.n + 1, c.p, c.kind, out)
}

/// The matrices of the 2-form pairing per degree slot, over the base ring:
/// rows are indexed by generators of degree `a`, columns by generators of
/// degree `k - a`; the column of `g` is the contraction of the base part of
/// the form along the partial of `g`.
#[derive(Debug, Clone)]
pub struct PairingMatrices {
    pub k: i64,
    pub blocks: Vec<PairingBlock>,
}

#[derive(Debug, Clone)]
pub struct PairingBlock {
    /// degree of the row generators; columns have degree `k - a`
    pub a: i64,
    pub rows: Vec<GenId>,
    pub cols: Vec<GenId>,
    pub entries: Vec<Vec<Element>>,
}

impl PairingBlock {
    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols.len()
    }

    pub fn determinant(&self, sig: &SigRef) -> Result<Element> {
        if !self.is_square() {
            return Err(Error::Shape(
                "determinant of a non-square block".to_string(),
            ));
        }
        det(sig, &self.entries)
    }
}

fn det(sig: &SigRef, m: &[Vec<Element>]) -> Result<Element> {
    let n = m.len();
    if n == 0 {
        return Ok(Element::one(sig));
    }
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let mut acc = Element::zero(sig);
    for (j, pivot) in m[0].iter().enumerate() {
        if pivot.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Element>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(t, _)| *t != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let mut term = pivot.mul(&det(sig, &minor)?)?;
        if j % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// Adjugate-based inverse of a square matrix over the base ring whose
/// determinant is a unit of the localized ring.
pub(crate) fn invert_base_matrix(sig: &SigRef, m: &[Vec<Element>]) -> Result<Vec<Vec<Element>>> {
    let n = m.len();
    let d = det(sig, m)?;
    let dinv = d.try_invert_unit().ok_or_else(|| {
        Error::NotStrictlyNondegenerate(format!("block determinant {} is not a unit", d.render()))
    })?;
    let mut inv = vec![vec![Element::zero(sig); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let minor: Vec<Vec<Element>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, mrow)| {
                    mrow.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != i)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let mut cof = det(sig, &minor)?;
            if (i + j) % 2 == 1 {
                cof = cof.neg();
            }
            *slot = cof.mul(&dinv)?;
        }
    }
    Ok(inv)
}

pub fn pairing_matrices(cdga: &StandardFormCdga, omega0: &Element) -> Result<PairingMatrices> {
    let sig = cdga.sig();
    let (deg, wt) = omega0
        .homogeneous_bidegree()
        .unwrap_or((cdga_default_degree(omega0), 2));
    if wt != 2 {
        return Err(Error::Shape(format!(
            "pairing matrices need a weight-2 element, found weight {wt}"
        )));
    }
    let k = deg + 2;
    let base_part = omega0.restrict_to_base();
    let mut blocks = Vec::new();
    for a in k..=0 {
        let rows: Vec<GenId> = sig.algebra_gens().filter(|g| sig.degree(*g) == a).collect();
        let cols: Vec<GenId> = sig
            .algebra_gens()
            .filter(|g| sig.degree(*g) == k - a)
            .collect();
        if rows.is_empty() && cols.is_empty() {
            continue;
        }
        let mut entries = vec![vec![Element::zero(sig); cols.len()]; rows.len()];
        for (j, g) in cols.iter().enumerate() {
            let ig = contract(&partial(sig, *g))?;
            let col = ig.apply(&base_part)?;
            let coeffs = if col.is_zero() {
                BTreeMap::new()
            } else {
                col.weight_one_coefficients()?
            };
            for (i, r) in rows.iter().enumerate() {
                let xi = sig.xi_of(*r).expect("one-form symbol");
                if let Some(c) = coeffs.get(&xi) {
                    entries[i][j] = c.clone();
                }
            }
        }
        blocks.push(PairingBlock {
            a,
            rows,
            cols,
            entries,
        });
    }
    Ok(PairingMatrices { k, blocks })
}

fn cdga_default_degree(omega0: &Element) -> i64 {
    // only reached for the zero form; any k <= 0 yields all-zero blocks
    let _ = omega0;
    -2
}

/// Pointwise nondegeneracy: every pairing block is square and invertible
/// after evaluation at the point.
pub fn is_nondegenerate_at(
    cdga: &StandardFormCdga,
    omega0: &Element,
    p: &RationalPoint,
) -> Result<bool> {
    p.validate(cdga)?;
    let pm = pairing_matrices(cdga, omega0)?;
    for block in &pm.blocks {
        if !block.is_square() {
            return Ok(false);
        }
        let d = block.determinant(cdga.sig())?;
        if d.evaluate(&p.values)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Strict nondegeneracy: every pairing-block determinant is a unit of the
/// localized base (a nonzero scalar times designated invertibles).
pub fn is_strictly_nondegenerate(cdga: &StandardFormCdga, omega0: &Element) -> Result<bool> {
    let pm = pairing_matrices(cdga, omega0)?;
    for block in &pm.blocks {
        if !block.is_square() {
            return Ok(false);
        }
        let d = block.determinant(cdga.sig())?;
        if d.try_invert_unit().is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Gauge-normalize a pair so that `i_E phi = 0`; afterwards
/// `k . phi = i_E omega0` whenever `omega0 = d_dR phi`.
pub fn normalize_pair(
    cdga: &StandardFormCdga,
    omega0: &Element,
    pair: &PhiPhiPair,
) -> Result<PhiPhiPair> {
    if pair.k == 0 {
        return Err(Error::Unsupported("normalization needs k != 0".to_string()));
    }
    pair.validate(cdga)?;
    let sig = cdga.sig();
    let iota_e = contract(&euler(sig))?;
    let ddr = de_rham(sig);
    let d = cdga.total_differential()?;
    let u = iota_e
        .apply(&pair.varphi)?
        .scale(&Scalar::from_ratio(1, pair.k));
    let phi = pair.phi.sub(&d.apply(&u)?)?;
    let varphi = pair.varphi.sub(&ddr.apply(&u)?)?;
    let out = PhiPhiPair::new(pair.k, phi, varphi);
    out.validate(cdga)?;
    let residual = iota_e.apply(&out.varphi)?;
    if !residual.is_zero() {
        return Err(Error::Shape(format!(
            "normalization failed: i_E phi = {}",
            residual.render()
        )));
    }
    let lhs = out.varphi.scale(&Scalar::from_int(pair.k));
    let rhs = iota_e.apply(omega0)?;
    if !lhs.equals(&rhs)? {
        return Err(Error::Shape(format!(
            "normalization failed: k*phi - i_E omega0 = {}",
            lhs.sub(&rhs)?.render()
        )));
    }
    Ok(out)
}
