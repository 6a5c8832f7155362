//! The de Rham operator, contraction, Lie derivative and the Euler-field
//! exactness witness on the bigraded extension of the algebra.
//!
//! The one-form symbols are first-class generators of the extended table, so
//! all four operators are ordinary [`Derivation`] values and one Leibniz
//! routine serves everything.

use crate::derivation::{euler, Derivation};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sig::SigRef;
use std::collections::BTreeMap;

/// The de Rham operator: degree -1, weight +1, `d_dR(g) = dg`, `d_dR(dg) = 0`.
pub fn de_rham(sig: &SigRef) -> Derivation {
    let mut values = BTreeMap::new();
    for g in sig.algebra_gens() {
        let xi = sig
            .xi_of(g)
            .expect("every algebra generator has a one-form");
        values.insert(g, Element::generator(sig, xi));
    }
    Derivation::new(sig, -1, 1, values).expect("de Rham values are homogeneous")
}

/// Contraction along a vector field: the unique derivation of degree
/// `|X| + 1` and weight -1 with `i_X f = 0` and `i_X(dg) = X(g)`.
pub fn contract(x: &Derivation) -> Result<Derivation> {
    x.expect_vector_field()?;
    let sig = x.sig();
    let mut values = BTreeMap::new();
    for g in sig.algebra_gens() {
        let v = x.value_on(g);
        if v.is_zero() {
            continue;
        }
        let xi = sig.xi_of(g).expect("one-form symbol");
        values.insert(xi, v);
    }
    Derivation::new(sig, x.degree() + 1, -1, values)
}

/// Lie derivative `L_X = [i_X, d_dR]`: degree `|X|`, weight 0. On generators:
/// `L_X(g) = X(g)` and `L_X(dg) = (-1)^{|X|} d_dR(X(g))`.
pub fn lie_derivative(x: &Derivation) -> Result<Derivation> {
    x.expect_vector_field()?;
    let sig = x.sig();
    let ddr = de_rham(sig);
    let sign = if x.degree().rem_euclid(2) == 1 {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    };
    let mut values = BTreeMap::new();
    for g in sig.algebra_gens() {
        let v = x.value_on(g);
        if v.is_zero() {
            continue;
        }
        let xi = sig.xi_of(g).expect("one-form symbol");
        values.insert(g, v.clone());
        let dv = ddr.apply(&v)?.scale(&sign);
        if !dv.is_zero() {
            values.insert(xi, dv);
        }
    }
    Derivation::new(sig, x.degree(), 0, values)
}

pub use crate::derivation::euler as euler_field;

/// For closed homogeneous `a` of total degree `m` and weight `p` with
/// `m + p != 0`, returns `b = i_E(a) / (m + p)` with `d_dR b = a`, re-checked
/// before returning.
pub fn exactness_witness(alpha: &Element) -> Result<Element> {
    let sig = alpha.sig();
    let (m, p) = alpha
        .homogeneous_bidegree()
        .ok_or_else(|| Error::NotHomogeneous {
            degree: 0,
            weight: 0,
            found: alpha.render(),
        })?;
    let ddr = de_rham(sig);
    let closed = ddr.apply(alpha)?;
    if !closed.is_zero() {
        return Err(Error::NotClosed(closed.render()));
    }
    if m + p == 0 {
        return Err(Error::NoWitness);
    }
    let iota_e = contract(&euler(sig))?;
    let beta = iota_e.apply(alpha)?.scale(&Scalar::from_ratio(1, m + p));
    let back = ddr.apply(&beta)?;
    if !back.equals(alpha)? {
        return Err(Error::Shape(format!(
            "exactness witness failed to verify: d_dR(b) - a = {}",
            back.sub(alpha)?.render()
        )));
    }
    Ok(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::partial;
    use crate::sig::{FieldKind, Signature};

    fn sig() -> SigRef {
        Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("y", -1)
            .build()
            .unwrap()
    }

    #[test]
    fn de_rham_leibniz_on_base_power() {
        let s = sig();
        let d = de_rham(&s);
        let got = d.apply(&Element::parse(&s, "x^3").unwrap()).unwrap();
        assert!(got
            .equals(&Element::parse(&s, "3*x^2*dx").unwrap())
            .unwrap());
    }

    #[test]
    fn de_rham_kills_one_forms_and_squares_to_zero() {
        let s = sig();
        let d = de_rham(&s);
        assert!(d
            .apply(&Element::parse(&s, "dx").unwrap())
            .unwrap()
            .is_zero());
        let e = Element::parse(&s, "x^2*y*dx + y*dy").unwrap();
        let dd = d.apply(&d.apply(&e).unwrap()).unwrap();
        assert!(dd.is_zero());
    }

    #[test]
    fn de_rham_of_odd_times_form() {
        // d_dR(y*dx) = dy*dx for |y| = -1
        let s = sig();
        let d = de_rham(&s);
        let got = d.apply(&Element::parse(&s, "y*dx").unwrap()).unwrap();
        assert!(got.equals(&Element::parse(&s, "dy*dx").unwrap()).unwrap());
    }

    #[test]
    fn contraction_two_term_expansions() {
        let s = sig();
        let x = s.find("x").unwrap();
        let y = s.find("y").unwrap();
        let omega = Element::parse(&s, "dy*dx").unwrap();
        let ix = contract(&partial(&s, x)).unwrap();
        let iy = contract(&partial(&s, y)).unwrap();
        assert!(ix
            .apply(&omega)
            .unwrap()
            .equals(&Element::parse(&s, "dy").unwrap())
            .unwrap());
        assert!(iy
            .apply(&omega)
            .unwrap()
            .equals(&Element::parse(&s, "dx").unwrap())
            .unwrap());
        // i_X vanishes on the algebra part
        let f = Element::parse(&s, "x^2*y + 7*x").unwrap();
        assert!(ix.apply(&f).unwrap().is_zero());
    }

    #[test]
    fn euler_lie_derivative_eigenvalues() {
        let s = sig();
        let le = lie_derivative(&euler(&s)).unwrap();
        let ddr = de_rham(&s);
        // L_E f = |f| f on the algebra
        let f = Element::parse(&s, "x*y").unwrap(); // degree -1
        assert!(le
            .apply(&f)
            .unwrap()
            .equals(&f.scale(&Scalar::from_int(-1)))
            .unwrap());
        // L_E d_dR f = |f| d_dR f
        let df = ddr.apply(&f).unwrap();
        assert!(le
            .apply(&df)
            .unwrap()
            .equals(&df.scale(&Scalar::from_int(-1)))
            .unwrap());
        // L_E a = (|a| + p) a for a form of weight p
        let a = Element::parse(&s, "dy*dx").unwrap(); // total degree -3, weight 2
        assert!(le
            .apply(&a)
            .unwrap()
            .equals(&a.scale(&Scalar::from_int(-1)))
            .unwrap());
    }

    #[test]
    fn exactness_witness_roundtrip() {
        let s = sig();
        let alpha = Element::parse(&s, "dy*dx").unwrap();
        let beta = exactness_witness(&alpha).unwrap();
        assert!(beta.equals(&Element::parse(&s, "y*dx").unwrap()).unwrap());
        // exact by construction: preimage recovered up to a closed term
        let ddr = de_rham(&s);
        let src = Element::parse(&s, "y*dx").unwrap();
        let a2 = ddr.apply(&src).unwrap();
        let b2 = exactness_witness(&a2).unwrap();
        assert!(ddr.apply(&b2.sub(&src).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn witness_obstructed_on_top_degree_base_forms() {
        // a = c(x) dx has total degree -1, weight 1, m + p = 0
        let s = sig();
        let alpha = Element::parse(&s, "x^2*dx").unwrap();
        assert!(matches!(exactness_witness(&alpha), Err(Error::NoWitness)));
    }

    #[test]
    fn contraction_rejects_form_valued_fields() {
        let s = sig();
        let y = s.find("y").unwrap();
        let mut values = BTreeMap::new();
        values.insert(y, Element::parse(&s, "dx").unwrap());
        let bad = Derivation::new(&s, 0, 1, values).unwrap();
        assert!(matches!(contract(&bad), Err(Error::NotVectorField(_))));
    }
}
