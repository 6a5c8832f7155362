//! Sparse elements of the free graded-commutative algebra and its de Rham
//! extension, with an optional denominator built from designated invertible
//! base elements.
//!
//! Invariants: no zero coefficients are stored, monomial keys are canonical,
//! and two elements are equal iff their cross-multiplied numerators agree
//! term by term.

use crate::error::{Error, Result};
use crate::monomial::{Monomial, TermMap};
use crate::scalar::Scalar;
use crate::sig::{same_sig, GenId, SigRef, Signature};
use std::collections::BTreeMap;

/// Formal product of designated invertibles: invertible index -> power.
pub type DenomMap = BTreeMap<u32, u32>;

#[derive(Debug, Clone)]
pub struct Element {
    sig: SigRef,
    terms: TermMap,
    den: DenomMap,
}

impl Element {
    pub fn zero(sig: &SigRef) -> Self {
        Element {
            sig: sig.clone(),
            terms: TermMap::new(),
            den: DenomMap::new(),
        }
    }

    pub fn one(sig: &SigRef) -> Self {
        Element::scalar(sig, Scalar::one())
    }

    pub fn scalar(sig: &SigRef, s: Scalar) -> Self {
        let mut terms = TermMap::new();
        if !s.is_zero() {
            terms.insert(Monomial::unit(), s);
        }
        Element {
            sig: sig.clone(),
            terms,
            den: DenomMap::new(),
        }
    }

    pub fn from_int(sig: &SigRef, n: i64) -> Self {
        Element::scalar(sig, Scalar::from_int(n))
    }

    pub fn generator(sig: &SigRef, g: GenId) -> Self {
        let mut terms = TermMap::new();
        terms.insert(Monomial::generator(g), Scalar::one());
        Element {
            sig: sig.clone(),
            terms,
            den: DenomMap::new(),
        }
    }

    pub fn monomial(sig: &SigRef, m: Monomial, c: Scalar) -> Self {
        let mut terms = TermMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Element {
            sig: sig.clone(),
            terms,
            den: DenomMap::new(),
        }
    }

    pub fn from_parts(sig: &SigRef, terms: TermMap, den: DenomMap) -> Self {
        let mut e = Element {
            sig: sig.clone(),
            terms,
            den,
        };
        e.normalize();
        e
    }

    pub fn parse(sig: &SigRef, src: &str) -> Result<Self> {
        let (terms, den) = crate::parse::parse_terms(sig, src)?;
        Ok(Element::from_parts(sig, terms, den))
    }

    pub fn sig(&self) -> &SigRef {
        &self.sig
    }

    pub(crate) fn into_parts(self) -> (TermMap, DenomMap) {
        (self.terms, self.den)
    }

    pub fn terms(&self) -> &TermMap {
        &self.terms
    }

    pub fn denominator(&self) -> &DenomMap {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Scalar value of a constant element, if it is one.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.den.is_empty() && self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_unit() {
                return Some(c.clone());
            }
        }
        None
    }

    fn normalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.den.clear();
            return;
        }
        self.den.retain(|_, p| *p > 0);
        self.reduce();
    }

    /// Strip denominator factors that divide the numerator exactly.
    fn reduce(&mut self) {
        let den = std::mem::take(&mut self.den);
        let mut new_den = DenomMap::new();
        for (j, mut pow) in den {
            let q = self.sig.invertible_terms(j as usize);
            while pow > 0 {
                match exact_div_terms(&self.sig, &self.terms, q) {
                    Some(quot) => {
                        self.terms = quot;
                        pow -= 1;
                    }
                    None => break,
                }
            }
            if pow > 0 {
                new_den.insert(j, pow);
            }
        }
        self.den = new_den;
    }

    pub fn neg(&self) -> Element {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Element {
            sig: self.sig.clone(),
            terms,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        if s.is_zero() {
            return Element::zero(&self.sig);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect();
        Element {
            sig: self.sig.clone(),
            terms,
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        same_sig(&self.sig, &other.sig)?;
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            let mut terms = self.terms.clone();
            accumulate(&mut terms, &other.terms);
            return Ok(Element::from_parts(&self.sig, terms, self.den.clone()));
        }
        // common denominator: componentwise max of the formal products
        let mut common = self.den.clone();
        for (j, p) in &other.den {
            let e = common.entry(*j).or_insert(0);
            *e = (*e).max(*p);
        }
        let lift = |e: &Element| -> TermMap {
            let mut t = e.terms.clone();
            for (j, p) in &common {
                let have = e.den.get(j).copied().unwrap_or(0);
                for _ in have..*p {
                    t = mul_terms(&self.sig, &t, self.sig.invertible_terms(*j as usize));
                }
            }
            t
        };
        let mut terms = lift(self);
        accumulate(&mut terms, &lift(other));
        Ok(Element::from_parts(&self.sig, terms, common))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        same_sig(&self.sig, &other.sig)?;
        let terms = mul_terms(&self.sig, &self.terms, &other.terms);
        let mut den = self.den.clone();
        for (j, p) in &other.den {
            *den.entry(*j).or_insert(0) += *p;
        }
        Ok(Element::from_parts(&self.sig, terms, den))
    }

    pub fn pow(&self, n: u32) -> Result<Element> {
        let mut acc = Element::one(&self.sig);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Equality by cross-multiplied numerators.
    pub fn equals(&self, other: &Element) -> Result<bool> {
        same_sig(&self.sig, &other.sig)?;
        if self.den == other.den {
            return Ok(self.terms == other.terms);
        }
        let lhs = mul_terms(
            &self.sig,
            &self.terms,
            &expand_denominator(&self.sig, &other.den),
        );
        let rhs = mul_terms(
            &self.sig,
            &other.terms,
            &expand_denominator(&self.sig, &self.den),
        );
        Ok(lhs == rhs)
    }

    /// Homogeneous (degree, weight) of a nonzero element; `None` if mixed.
    /// The zero element is homogeneous of every bidegree.
    pub fn homogeneous_bidegree(&self) -> Option<(i64, i64)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let bid = (first.degree(&self.sig), first.weight(&self.sig));
        for m in it {
            if (m.degree(&self.sig), m.weight(&self.sig)) != bid {
                return None;
            }
        }
        Some(bid)
    }

    pub fn is_homogeneous(&self, degree: i64, weight: i64) -> bool {
        self.is_zero() || self.homogeneous_bidegree() == Some((degree, weight))
    }

    pub fn expect_homogeneous(&self, degree: i64, weight: i64) -> Result<()> {
        if self.is_homogeneous(degree, weight) {
            Ok(())
        } else {
            Err(Error::NotHomogeneous {
                degree,
                weight,
                found: self.render(),
            })
        }
    }

    /// The (degree, weight)-homogeneous part. The denominator has bidegree
    /// (0, 0), so it passes through unchanged.
    pub fn component(&self, degree: i64, weight: i64) -> Element {
        let terms: TermMap = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree(&self.sig) == degree && m.weight(&self.sig) == weight)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        if terms.is_empty() {
            return Element::zero(&self.sig);
        }
        Element {
            sig: self.sig.clone(),
            terms,
            den: self.den.clone(),
        }
    }

    /// All (degree, weight) pairs with a nonzero component.
    pub fn bidegrees(&self) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = self
            .terms
            .keys()
            .map(|m| (m.degree(&self.sig), m.weight(&self.sig)))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn max_weight(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.weight(&self.sig))
            .max()
            .unwrap_or(0)
    }

    /// True when every monomial involves only weight-0 generators.
    pub fn is_form_free(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.factors().iter().all(|(g, _)| self.sig.is_algebra(*g)))
    }

    /// True when every monomial involves only degree-0 base generators.
    pub fn is_base_only(&self) -> bool {
        self.terms
            .keys()
            .all(|m| m.factors().iter().all(|(g, _)| self.sig.is_base(*g)))
    }

    /// Kill every monomial containing a negative-degree algebra generator.
    /// One-form symbols survive; this is restriction of coefficients to the
    /// degree-0 base.
    pub fn restrict_to_base(&self) -> Element {
        let terms: TermMap = self
            .terms
            .iter()
            .filter(|(m, _)| {
                m.factors()
                    .iter()
                    .all(|(g, _)| !(self.sig.is_algebra(*g) && self.sig.degree(*g) < 0))
            })
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Element::from_parts(&self.sig, terms, self.den.clone())
    }

    /// Decompose a weight-1 element as `sum_g a_g * dg` with `a_g` weight 0.
    pub fn weight_one_coefficients(&self) -> Result<BTreeMap<GenId, Element>> {
        let mut out: BTreeMap<GenId, TermMap> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut xi: Option<GenId> = None;
            for (g, e) in m.factors() {
                if self.sig.is_one_form(*g) {
                    if *e != 1 || xi.is_some() {
                        return Err(Error::Shape(format!(
                            "expected weight 1, found monomial with several form symbols in {}",
                            self.render()
                        )));
                    }
                    xi = Some(*g);
                }
            }
            let xi = xi.ok_or_else(|| {
                Error::Shape(format!(
                    "expected weight 1, found weight-0 term in {}",
                    self.render()
                ))
            })?;
            let rest = m.strip_one(xi);
            // sign of re-creating m as rest * dg
            let (remade, neg) = rest
                .mul(&Monomial::generator(xi), &self.sig)
                .expect("xi not repeated");
            debug_assert_eq!(&remade, m);
            let coeff = if neg { -c } else { c.clone() };
            let slot = out.entry(xi).or_default();
            let entry = slot.entry(rest).or_insert_with(Scalar::zero);
            *entry = &*entry + &coeff;
        }
        Ok(out
            .into_iter()
            .map(|(g, t)| (g, Element::from_parts(&self.sig, t, self.den.clone())))
            .collect())
    }

    /// Try to invert `self` in the localized ring: succeeds iff the numerator
    /// is a nonzero scalar times a product of designated invertibles.
    pub fn try_invert_unit(&self) -> Option<Element> {
        if self.is_zero() {
            return None;
        }
        let mut rest = self.terms.clone();
        let mut den = DenomMap::new();
        loop {
            if rest.len() == 1 {
                if let Some(c) = rest.get(&Monomial::unit()) {
                    // self = c * prod(q^den) / self.den  =>  inverse below
                    let mut inv_terms = expand_denominator(&self.sig, &self.den);
                    let cinv = c.inv();
                    inv_terms = inv_terms
                        .into_iter()
                        .map(|(m, k)| (m, &k * &cinv))
                        .collect();
                    return Some(Element::from_parts(&self.sig, inv_terms, den));
                }
            }
            let mut progressed = false;
            for j in 0..self.sig.n_invertibles() {
                if let Some(q) = exact_div_terms(&self.sig, &rest, self.sig.invertible_terms(j)) {
                    rest = q;
                    *den.entry(j as u32).or_insert(0) += 1;
                    progressed = true;
                    break;
                }
            }
            if !progressed {
                return None;
            }
        }
    }

    /// Divide by another element, which must be a unit of the localized ring.
    pub fn div(&self, other: &Element) -> Result<Element> {
        let inv = other
            .try_invert_unit()
            .ok_or_else(|| Error::NotInvertible(other.render()))?;
        self.mul(&inv)
    }

    /// Substitute generators by elements of a (possibly different) table.
    /// Generators absent from the map must exist under the same name in the
    /// target table.
    pub fn substitute(&self, target: &SigRef, map: &BTreeMap<GenId, Element>) -> Result<Element> {
        let image_of = |g: GenId| -> Result<Element> {
            if let Some(v) = map.get(&g) {
                same_sig(v.sig(), target)?;
                return Ok(v.clone());
            }
            let h = target.require(self.sig.name(g))?;
            Ok(Element::generator(target, h))
        };
        let mut acc = Element::zero(target);
        for (m, c) in &self.terms {
            let mut term = Element::scalar(target, c.clone());
            for (g, e) in m.factors() {
                let img = image_of(*g)?;
                term = term.mul(&img.pow(*e)?)?;
            }
            acc = acc.add(&term)?;
        }
        for (j, p) in &self.den {
            let q_terms = self.sig.invertible_terms(*j as usize).clone();
            let q_elem = Element::from_parts(&self.sig, q_terms, DenomMap::new());
            let img = q_elem.substitute(target, map)?;
            let inv = img
                .try_invert_unit()
                .ok_or_else(|| Error::NotInvertible(img.render()))?;
            acc = acc.mul(&inv.pow(*p)?)?;
        }
        Ok(acc)
    }

    /// Evaluate a base-only element at a point assignment.
    pub fn evaluate(&self, point: &BTreeMap<GenId, Scalar>) -> Result<Scalar> {
        let num = evaluate_terms(&self.sig, &self.terms, point)?;
        if self.den.is_empty() {
            return Ok(num);
        }
        let den_terms = expand_denominator(&self.sig, &self.den);
        let den = evaluate_terms(&self.sig, &den_terms, point)?;
        if den.is_zero() {
            return Err(Error::Shape(
                "denominator vanishes at the point".to_string(),
            ));
        }
        Ok(&num * &den.inv())
    }

    pub fn render(&self) -> String {
        let num = render_terms(&self.sig, &self.terms);
        if self.den.is_empty() {
            return num;
        }
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(j, p)| {
                let src = self.sig.invertible_source(*j as usize);
                if *p == 1 {
                    format!("({src})")
                } else {
                    format!("({src})^{p}")
                }
            })
            .collect();
        let num_wrapped = if self.terms.len() > 1 {
            format!("({num})")
        } else {
            num
        };
        format!("{num_wrapped} / ({})", den.join("*"))
    }
}

fn accumulate(into: &mut TermMap, from: &TermMap) {
    for (m, c) in from {
        match into.get_mut(m) {
            Some(acc) => {
                let s = &*acc + c;
                if s.is_zero() {
                    into.remove(m);
                } else {
                    *acc = s;
                }
            }
            None => {
                into.insert(m.clone(), c.clone());
            }
        }
    }
}

pub fn mul_terms(sig: &Signature, a: &TermMap, b: &TermMap) -> TermMap {
    let mut out = TermMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((m, neg)) = ma.mul(mb, sig) {
                let mut c = ca * cb;
                if neg {
                    c = -&c;
                }
                match out.get_mut(&m) {
                    Some(acc) => {
                        let s = &*acc + &c;
                        if s.is_zero() {
                            out.remove(&m);
                        } else {
                            *acc = s;
                        }
                    }
                    None => {
                        if !c.is_zero() {
                            out.insert(m, c);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn expand_denominator(sig: &Signature, den: &DenomMap) -> TermMap {
    let mut out = TermMap::new();
    out.insert(Monomial::unit(), Scalar::one());
    for (j, p) in den {
        for _ in 0..*p {
            out = mul_terms(sig, &out, sig.invertible_terms(*j as usize));
        }
    }
    out
}

/// Exact polynomial division by a base-only divisor; `None` when not an exact
/// multiple. Uses the lex lead term; since the divisor is even (degree 0),
/// no Koszul signs arise.
pub fn exact_div_terms(sig: &Signature, dividend: &TermMap, divisor: &TermMap) -> Option<TermMap> {
    if divisor.is_empty() {
        return None;
    }
    let (lead_m, lead_c) = divisor.iter().next_back().unwrap();
    let mut rem = dividend.clone();
    let mut quot = TermMap::new();
    while !rem.is_empty() {
        let (m, c) = rem
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))?;
        if !lead_m.divides(&m) {
            return None;
        }
        let qm = lead_m.quotient_into(&m);
        let qc = &c * &lead_c.inv();
        // rem -= (qm*qc) * divisor
        for (dm, dc) in divisor {
            let (pm, neg) = qm.mul(dm, sig).expect("base divisor cannot vanish");
            let mut pc = &qc * dc;
            if neg {
                pc = -&pc;
            }
            match rem.get_mut(&pm) {
                Some(acc) => {
                    let s = &*acc - &pc;
                    if s.is_zero() {
                        rem.remove(&pm);
                    } else {
                        *acc = s;
                    }
                }
                None => {
                    rem.insert(pm, -&pc);
                }
            }
        }
        let entry = quot.entry(qm).or_insert_with(Scalar::zero);
        *entry = &*entry + &qc;
    }
    quot.retain(|_, c| !c.is_zero());
    Some(quot)
}

fn evaluate_terms(
    sig: &Signature,
    terms: &TermMap,
    point: &BTreeMap<GenId, Scalar>,
) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (m, c) in terms {
        let mut v = c.clone();
        for (g, e) in m.factors() {
            if !sig.is_base(*g) {
                return Err(Error::Shape(format!(
                    "cannot evaluate non-base generator `{}` at a point",
                    sig.name(*g)
                )));
            }
            let val = point
                .get(g)
                .ok_or_else(|| Error::PointMissing(sig.name(*g).to_string()))?;
            v = &v * &val.pow(*e);
        }
        acc = &acc + &v;
    }
    Ok(acc)
}

/// Canonical rendering of a term map: descending monomial order, explicit
/// signs, `^` for exponents, `*` between factors.
pub fn render_terms(sig: &Signature, terms: &TermMap) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in terms.iter().rev().enumerate() {
        let (sign_str, mag) =
            if c.is_real() && c.re < num_rational::BigRational::from_integer(0.into()) {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
        if idx == 0 {
            if sign_str == "-" {
                out.push('-');
            }
        } else {
            out.push_str(if sign_str == "-" { " - " } else { " + " });
        }
        let mono = render_monomial(sig, m);
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

fn render_monomial(sig: &Signature, m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(g, e)| {
            if *e == 1 {
                sig.name(*g).to_string()
            } else {
                format!("{}^{}", sig.name(*g), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::{FieldKind, Signature};

    fn sig() -> SigRef {
        Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("y", -1)
            .generator("u", -2)
            .build()
            .unwrap()
    }

    #[test]
    fn odd_koszul_parity() {
        // x.y with |x| = |y| = -1 → -(y.x), and x.x → 0, over a two-odd table
        let s = Signature::builder(FieldKind::Rational)
            .generator("a", -1)
            .generator("b", -1)
            .build()
            .unwrap();
        let a = Element::parse(&s, "a").unwrap();
        let b = Element::parse(&s, "b").unwrap();
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert!(ab.equals(&ba.neg()).unwrap());
        assert!(a.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn even_generators_commute_exactly() {
        let s = Signature::builder(FieldKind::Rational)
            .generator("u", -2)
            .generator("v", -2)
            .build()
            .unwrap();
        let u = Element::parse(&s, "u").unwrap();
        let v = Element::parse(&s, "v").unwrap();
        assert!(u.mul(&v).unwrap().equals(&v.mul(&u).unwrap()).unwrap());
    }

    #[test]
    fn mixed_product_drops_odd_square() {
        // (2x + u)*x with |x| = -1, |u| = -2 → u*x
        let s = Signature::builder(FieldKind::Rational)
            .generator("x", -1)
            .generator("u", -2)
            .build()
            .unwrap();
        let e = Element::parse(&s, "2*x + u").unwrap();
        let x = Element::parse(&s, "x").unwrap();
        let got = e.mul(&x).unwrap();
        let want = Element::parse(&s, "u*x").unwrap();
        assert!(got.equals(&want).unwrap());
    }

    #[test]
    fn denominators_reduce_and_cross_multiply() {
        let s = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .invertible("x^2 + 1")
            .build()
            .unwrap();
        let q = Element::parse(&s, "x^2 + 1").unwrap();
        let f = Element::parse(&s, "x^3 + x").unwrap(); // x*(x^2+1)
        let g = f.div(&q).unwrap();
        let want = Element::parse(&s, "x").unwrap();
        assert!(g.equals(&want).unwrap());
        assert!(g.denominator().is_empty());

        let h = Element::one(&s).div(&q).unwrap();
        assert_eq!(h.render(), "1 / ((x^2 + 1))");
        let back = h.mul(&q).unwrap();
        assert!(back.equals(&Element::one(&s)).unwrap());
    }

    #[test]
    fn weight_one_decomposition_tracks_signs() {
        let s = sig();
        let y = s.find("y").unwrap();
        let dx = s.find("dx").unwrap();
        // y*dx: stripping dx from the canonical monomial keeps coefficient +1
        let e = Element::parse(&s, "y*dx").unwrap();
        let coeffs = e.weight_one_coefficients().unwrap();
        let c = coeffs.get(&dx).unwrap();
        assert!(c.equals(&Element::generator(&s, y)).unwrap());
    }

    #[test]
    fn render_is_deterministic_and_parseable() {
        let s = sig();
        let e = Element::parse(&s, "3*x^2*y - 1/2*u + x*u").unwrap();
        let r1 = e.render();
        let e2 = Element::parse(&s, &r1).unwrap();
        assert!(e.equals(&e2).unwrap());
        assert_eq!(r1, e2.render());
    }
}
