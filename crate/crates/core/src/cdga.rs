//! Standard-form differential graded algebras: a polynomial base in degree 0
//! with tiers of negative-degree generators and a square-zero degree +1
//! differential, built inductively tier by tier.

use crate::derham::de_rham;
use crate::derivation::{partial_apply, Derivation};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sig::{same_sig, GenId, SigRef};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct StandardFormCdga {
    sig: SigRef,
    /// Internal differential on the algebra generators (base maps to zero).
    diff: Derivation,
}

impl StandardFormCdga {
    /// Validated construction: checks homogeneity of every assignment, the
    /// tier filtration, and `d∘d = 0` on every generator.
    pub fn build(sig: &SigRef, assignments: BTreeMap<String, Element>) -> Result<Self> {
        let cdga = Self::build_unchecked(sig, assignments)?;
        for (g, residue) in cdga.d_squared_residues()? {
            if !residue.is_zero() {
                return Err(Error::SquareNotZero {
                    name: sig.name(g).to_string(),
                    residue: residue.render(),
                });
            }
        }
        Ok(cdga)
    }

    /// Shape-checked construction without the `d∘d = 0` verification; used by
    /// checkers that must report the residue rather than refuse the input.
    pub fn build_unchecked(sig: &SigRef, assignments: BTreeMap<String, Element>) -> Result<Self> {
        let mut values: BTreeMap<GenId, Element> = BTreeMap::new();
        for (name, value) in assignments {
            let g = sig.require(&name)?;
            if !sig.is_algebra(g) {
                return Err(Error::Shape(format!(
                    "differential assignments are given on algebra generators, not `{name}`"
                )));
            }
            if sig.degree(g) == 0 {
                if value.is_zero() {
                    continue;
                }
                return Err(Error::Shape(format!(
                    "degree-0 generator `{name}` must have zero differential"
                )));
            }
            same_sig(sig, value.sig())?;
            if value.is_zero() {
                continue;
            }
            if !value.is_form_free() {
                return Err(Error::Shape(format!(
                    "differential of `{name}` contains one-form symbols"
                )));
            }
            let expected = sig.degree(g) + 1;
            if !value.is_homogeneous(expected, 0) {
                return Err(Error::DegreeMismatch {
                    name,
                    expected,
                    found: value.render(),
                });
            }
            // the value must live in strictly lower tiers
            let tier = sig.tier(g);
            for m in value.terms().keys() {
                for (h, _) in m.factors() {
                    if sig.tier(*h) >= tier {
                        return Err(Error::Shape(format!(
                            "differential of tier-{tier} generator `{}` involves `{}` of tier {}",
                            sig.name(g),
                            sig.name(*h),
                            sig.tier(*h)
                        )));
                    }
                }
            }
            values.insert(g, value);
        }
        let diff = Derivation::new(sig, 1, 0, values)?;
        Ok(StandardFormCdga {
            sig: sig.clone(),
            diff,
        })
    }

    pub fn sig(&self) -> &SigRef {
        &self.sig
    }

    /// The differential as a vector field on the algebra.
    pub fn differential(&self) -> &Derivation {
        &self.diff
    }

    pub fn d(&self, e: &Element) -> Result<Element> {
        self.diff.apply(e)
    }

    pub fn d_of_gen(&self, g: GenId) -> Element {
        self.diff.value_on(g)
    }

    /// `d(d g)` for every negative-degree generator.
    pub fn d_squared_residues(&self) -> Result<Vec<(GenId, Element)>> {
        let mut out = Vec::new();
        for g in self.sig.negative_gens() {
            let r = self.diff.apply(&self.diff.value_on(g))?;
            out.push((g, r));
        }
        Ok(out)
    }

    /// The unique degree +1, weight 0 extension of `d` to the de Rham
    /// algebra, with `d(dg) = -d_dR(d g)`; it squares to zero and
    /// anti-commutes with the de Rham operator.
    pub fn total_differential(&self) -> Result<Derivation> {
        let ddr = de_rham(&self.sig);
        let mut values = BTreeMap::new();
        for g in self.sig.algebra_gens() {
            let v = self.diff.value_on(g);
            if v.is_zero() {
                continue;
            }
            values.insert(g, v.clone());
            let xi = self.sig.xi_of(g).expect("one-form symbol");
            let dv = ddr.apply(&v)?.neg();
            if !dv.is_zero() {
                values.insert(xi, dv);
            }
        }
        Derivation::new(&self.sig, 1, 0, values)
    }

    /// Generators of the ideal presenting `H^0`: the differentials of the
    /// degree -1 tier, in table order.
    pub fn h0_presentation(&self) -> Vec<Element> {
        self.sig
            .tier_gens(1)
            .into_iter()
            .map(|g| self.diff.value_on(g))
            .collect()
    }

    pub fn cotangent_restriction(&self) -> Result<CotangentRestriction> {
        let mut blocks = Vec::new();
        let top = self.sig.top_tier();
        for tier in 1..=top {
            let cols = self.sig.tier_gens(tier);
            let rows = if tier == 1 {
                self.sig.base_gens().collect()
            } else {
                self.sig.tier_gens(tier - 1)
            };
            let mut entries = Vec::with_capacity(rows.len());
            for r in &rows {
                let mut row = Vec::with_capacity(cols.len());
                for c in &cols {
                    let dg = self.diff.value_on(*c);
                    let coeff = partial_apply(&self.sig, *r, &dg)?.restrict_to_base();
                    row.push(coeff);
                }
                entries.push(row);
            }
            blocks.push(CotangentBlock {
                tier,
                rows,
                cols,
                entries,
            });
        }
        Ok(CotangentRestriction { blocks })
    }

    /// True iff every matrix of the cotangent restriction vanishes at `p`.
    pub fn is_minimal_at(&self, p: &RationalPoint) -> Result<MinimalityReport> {
        p.validate(self)?;
        let restriction = self.cotangent_restriction()?;
        let mut offending = Vec::new();
        for block in &restriction.blocks {
            for (i, r) in block.rows.iter().enumerate() {
                for (j, c) in block.cols.iter().enumerate() {
                    let v = block.entries[i][j].evaluate(&p.values)?;
                    if !v.is_zero() {
                        offending.push(OffendingEntry {
                            tier: block.tier,
                            row: self.sig.name(*r).to_string(),
                            col: self.sig.name(*c).to_string(),
                            value: v,
                        });
                    }
                }
            }
        }
        Ok(MinimalityReport {
            minimal: offending.is_empty(),
            offending,
        })
    }
}

/// The restriction of the cotangent complex to `Spec H^0`: one free-module
/// block per tier, entries over the base ring, reduced modulo the ideal only
/// at evaluation time.
#[derive(Debug, Clone)]
pub struct CotangentRestriction {
    pub blocks: Vec<CotangentBlock>,
}

#[derive(Debug, Clone)]
pub struct CotangentBlock {
    pub tier: i64,
    pub rows: Vec<GenId>,
    pub cols: Vec<GenId>,
    pub entries: Vec<Vec<Element>>,
}

impl CotangentRestriction {
    /// Evaluated composite check: entries of consecutive block products must
    /// vanish at every accepted rational point.
    pub fn composites_vanish_at(&self, point: &BTreeMap<GenId, Scalar>) -> Result<bool> {
        for w in self.blocks.windows(2) {
            let (lower, upper) = (&w[0], &w[1]);
            for i in 0..lower.rows.len() {
                for j in 0..upper.cols.len() {
                    let mut acc = Scalar::zero();
                    for t in 0..lower.cols.len() {
                        let a = lower.entries[i][t].evaluate(point)?;
                        let b = upper.entries[t][j].evaluate(point)?;
                        acc = &acc + &(&a * &b);
                    }
                    if !acc.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone)]
pub struct OffendingEntry {
    pub tier: i64,
    pub row: String,
    pub col: String,
    pub value: Scalar,
}

#[derive(Debug, Clone)]
pub struct MinimalityReport {
    pub minimal: bool,
    pub offending: Vec<OffendingEntry>,
}

/// A rational point of `Spec H^0`: an assignment of scalars to the degree-0
/// generators at which the degree -1 differentials vanish and the designated
/// invertibles do not.
#[derive(Debug, Clone)]
pub struct RationalPoint {
    pub values: BTreeMap<GenId, Scalar>,
}

impl RationalPoint {
    pub fn new(sig: &SigRef, named: &BTreeMap<String, Scalar>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for g in sig.base_gens() {
            let v = named
                .get(sig.name(g))
                .ok_or_else(|| Error::PointMissing(sig.name(g).to_string()))?;
            values.insert(g, v.clone());
        }
        Ok(RationalPoint { values })
    }

    pub fn validate(&self, cdga: &StandardFormCdga) -> Result<()> {
        let sig = cdga.sig();
        for rel in cdga.h0_presentation() {
            let v = rel.evaluate(&self.values)?;
            if !v.is_zero() {
                return Err(Error::PointOffLocus {
                    relation: rel.render(),
                    value: v.to_string(),
                });
            }
        }
        for j in 0..sig.n_invertibles() {
            let q = Element::from_parts(sig, sig.invertible_terms(j).clone(), BTreeMap::new());
            if q.evaluate(&self.values)?.is_zero() {
                return Err(Error::InvertibleVanishes {
                    name: sig.invertible_source(j).to_string(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::{FieldKind, Signature};

    fn cubic_model() -> (SigRef, StandardFormCdga) {
        let sig = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("y", -1)
            .build()
            .unwrap();
        let mut assign = BTreeMap::new();
        assign.insert("y".to_string(), Element::parse(&sig, "3*x^2").unwrap());
        let cdga = StandardFormCdga::build(&sig, assign).unwrap();
        (sig, cdga)
    }

    #[test]
    fn build_validates_square_zero() {
        let (_, _) = cubic_model();
    }

    #[test]
    fn build_rejects_degree_mismatch() {
        let sig = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("y", -1)
            .build()
            .unwrap();
        let mut a = BTreeMap::new();
        a.insert("y".to_string(), Element::parse(&sig, "x*y").unwrap());
        assert!(matches!(
            StandardFormCdga::build(&sig, a),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn total_differential_on_one_forms() {
        let (sig, cdga) = cubic_model();
        let d = cdga.total_differential().unwrap();
        // d(dy) = -d_dR(3x^2) = -6x dx
        let got = d.apply(&Element::parse(&sig, "dy").unwrap()).unwrap();
        assert!(got
            .equals(&Element::parse(&sig, "-6*x*dx").unwrap())
            .unwrap());
        // d(dx) = 0
        assert!(d
            .apply(&Element::parse(&sig, "dx").unwrap())
            .unwrap()
            .is_zero());
        // anti-commutation with the de Rham operator on y
        let ddr = de_rham(&sig);
        let y = Element::parse(&sig, "y").unwrap();
        let anti = d
            .apply(&ddr.apply(&y).unwrap())
            .unwrap()
            .add(&ddr.apply(&d.apply(&y).unwrap()).unwrap())
            .unwrap();
        assert!(anti.is_zero());
    }

    #[test]
    fn h0_presentation_of_cubic() {
        let (sig, cdga) = cubic_model();
        let ideal = cdga.h0_presentation();
        assert_eq!(ideal.len(), 1);
        assert!(ideal[0]
            .equals(&Element::parse(&sig, "3*x^2").unwrap())
            .unwrap());
    }

    #[test]
    fn empty_degree_one_tier_gives_empty_ideal() {
        let sig = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .build()
            .unwrap();
        let cdga = StandardFormCdga::build(&sig, BTreeMap::new()).unwrap();
        assert!(cdga.h0_presentation().is_empty());
    }

    #[test]
    fn cotangent_matrix_is_the_hessian_for_the_cubic() {
        let (sig, cdga) = cubic_model();
        let r = cdga.cotangent_restriction().unwrap();
        assert_eq!(r.blocks.len(), 1);
        let entry = &r.blocks[0].entries[0][0];
        assert!(entry.equals(&Element::parse(&sig, "6*x").unwrap()).unwrap());
    }

    #[test]
    fn minimality_at_the_origin() {
        let (sig, cdga) = cubic_model();
        let mut named = BTreeMap::new();
        named.insert("x".to_string(), Scalar::zero());
        let p = RationalPoint::new(&sig, &named).unwrap();
        let rep = cdga.is_minimal_at(&p).unwrap();
        assert!(rep.minimal);

        // H = x^2 model: d y = 2x, entry 2 at the origin
        let sig2 = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("y", -1)
            .build()
            .unwrap();
        let mut a = BTreeMap::new();
        a.insert("y".to_string(), Element::parse(&sig2, "2*x").unwrap());
        let cdga2 = StandardFormCdga::build(&sig2, a).unwrap();
        let p2 = RationalPoint::new(&sig2, &named).unwrap();
        let rep2 = cdga2.is_minimal_at(&p2).unwrap();
        assert!(!rep2.minimal);
        assert_eq!(rep2.offending.len(), 1);
        assert_eq!(rep2.offending[0].value.to_string(), "2");
    }

    #[test]
    fn zero_differential_is_minimal_anywhere() {
        let sig = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("y", -1)
            .generator("u", -2)
            .build()
            .unwrap();
        let cdga = StandardFormCdga::build(&sig, BTreeMap::new()).unwrap();
        let mut named = BTreeMap::new();
        named.insert("x".to_string(), Scalar::from_int(5));
        let p = RationalPoint::new(&sig, &named).unwrap();
        assert!(cdga.is_minimal_at(&p).unwrap().minimal);
    }

    #[test]
    fn point_validation_rejects_off_locus_points() {
        let (sig, cdga) = cubic_model();
        let mut named = BTreeMap::new();
        named.insert("x".to_string(), Scalar::from_int(1));
        let p = RationalPoint::new(&sig, &named).unwrap();
        assert!(matches!(
            cdga.is_minimal_at(&p),
            Err(Error::PointOffLocus { .. })
        ));
    }
}
