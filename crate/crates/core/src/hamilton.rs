//! Hamiltonian vector fields, the shifted Poisson bracket, the
//! master-equation/square-zero equivalence, and Hamiltonian extraction from
//! a normalized `(Phi, phi)` pair.
//!
//! Everything here assumes a strictly nondegenerate 2-form: the contraction
//! pairing is inverted exactly over the localized base, block by block plus
//! a nilpotent correction, never numerically.

use crate::cdga::StandardFormCdga;
use crate::derham::{contract, de_rham};
use crate::derivation::{euler, partial, Derivation};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::forms::{invert_base_matrix, is_strictly_nondegenerate, normalize_pair, PhiPhiPair};
use crate::scalar::Scalar;
use crate::sig::{GenId, SigRef};
use std::collections::BTreeMap;

/// The full contraction matrix of a 2-form: `m[g][h]` is the coefficient of
/// `dh` (coefficient on the left) in the contraction of the form along the
/// partial of `g`.
struct ContractionMatrix {
    gens: Vec<GenId>,
    index: BTreeMap<GenId, usize>,
    entries: Vec<Vec<Element>>,
}

fn contraction_matrix(sig: &SigRef, omega0: &Element) -> Result<ContractionMatrix> {
    let gens: Vec<GenId> = sig.algebra_gens().collect();
    let index: BTreeMap<GenId, usize> = gens.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let n = gens.len();
    let mut entries = vec![vec![Element::zero(sig); n]; n];
    for (gi, g) in gens.iter().enumerate() {
        let ig = contract(&partial(sig, *g))?;
        let row = ig.apply(omega0)?;
        if row.is_zero() {
            continue;
        }
        for (xi, coeff) in row.weight_one_coefficients()? {
            let h = sig.base_of(xi).expect("one-form symbol");
            entries[gi][index[&h]] = coeff;
        }
    }
    Ok(ContractionMatrix {
        gens,
        index,
        entries,
    })
}

/// Invert the contraction matrix exactly: the base-coefficient part is
/// block anti-diagonal with unit-determinant blocks, and what remains after
/// factoring it out is nilpotent for filtration reasons, so a finite
/// geometric series completes the inverse.
fn invert_contraction_matrix(sig: &SigRef, m: &ContractionMatrix) -> Result<Vec<Vec<Element>>> {
    let n = m.gens.len();

    // split M = M0 + N with M0 the base-coefficient part
    let mut m0 = vec![vec![Element::zero(sig); n]; n];
    let mut nil = vec![vec![Element::zero(sig); n]; n];
    for i in 0..n {
        for j in 0..n {
            let e = &m.entries[i][j];
            if e.is_zero() {
                continue;
            }
            let base = e.restrict_to_base();
            m0[i][j] = base.clone();
            let rest = e.sub(&base)?;
            if !rest.is_zero() {
                nil[i][j] = rest;
            }
        }
    }

    // invert M0 blockwise along the anti-diagonal degree pairing
    let mut m0_inv = vec![vec![Element::zero(sig); n]; n];
    let degrees: Vec<i64> = {
        let mut v: Vec<i64> = m.gens.iter().map(|g| sig.degree(*g)).collect();
        v.sort();
        v.dedup();
        v
    };
    // determine k from any nonzero entry of M0
    let mut k_opt = None;
    'outer: for (i, row) in m0.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            if !e.is_zero() {
                k_opt = Some(sig.degree(m.gens[i]) + sig.degree(m.gens[j]));
                break 'outer;
            }
        }
    }
    let k = k_opt.ok_or_else(|| {
        Error::NotStrictlyNondegenerate("the 2-form has no base-coefficient part".to_string())
    })?;
    for a in &degrees {
        let b = k - *a;
        let rows: Vec<usize> = (0..n).filter(|i| sig.degree(m.gens[*i]) == *a).collect();
        let cols: Vec<usize> = (0..n).filter(|j| sig.degree(m.gens[*j]) == b).collect();
        if rows.len() != cols.len() {
            return Err(Error::NotStrictlyNondegenerate(format!(
                "degree slots {a} and {b} have mismatched ranks {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        if rows.is_empty() {
            continue;
        }
        // consistency: M0 must vanish outside the anti-diagonal slots
        for i in &rows {
            for j in 0..n {
                if sig.degree(m.gens[j]) != b && !m0[*i][j].is_zero() {
                    return Err(Error::NotStrictlyNondegenerate(
                        "base part of the pairing strays off the anti-diagonal".to_string(),
                    ));
                }
            }
        }
        let block: Vec<Vec<Element>> = rows
            .iter()
            .map(|i| cols.iter().map(|j| m0[*i][*j].clone()).collect())
            .collect();
        let inv = invert_base_matrix(sig, &block)?;
        for (bi, j) in cols.iter().enumerate() {
            for (bj, i) in rows.iter().enumerate() {
                m0_inv[*j][*i] = inv[bi][bj].clone();
            }
        }
    }

    let mat_mul = |a: &Vec<Vec<Element>>, b: &Vec<Vec<Element>>| -> Result<Vec<Vec<Element>>> {
        let mut out = vec![vec![Element::zero(sig); n]; n];
        for i in 0..n {
            for t in 0..n {
                if a[i][t].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if b[t][j].is_zero() {
                        continue;
                    }
                    let p = a[i][t].mul(&b[t][j])?;
                    out[i][j] = out[i][j].add(&p)?;
                }
            }
        }
        Ok(out)
    };

    // P = M0^{-1} N strictly lowers the tier of the row index, so the series
    // sum_{j} (-P)^j terminates
    let p = mat_mul(&m0_inv, &nil)?;
    let mut series = vec![vec![Element::zero(sig); n]; n];
    for (i, row) in series.iter_mut().enumerate() {
        row[i] = Element::one(sig);
    }
    let mut power: Vec<Vec<Element>> = series.clone();
    let max_steps = sig.top_tier() as usize + 2;
    for step in 1..=max_steps {
        power = mat_mul(&p, &power)?;
        let mut all_zero = true;
        for row in &power {
            for e in row {
                if !e.is_zero() {
                    all_zero = false;
                    break;
                }
            }
        }
        if all_zero {
            break;
        }
        if step == max_steps {
            return Err(Error::NotStrictlyNondegenerate(
                "pairing correction failed to nilpotent out".to_string(),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                if power[i][j].is_zero() {
                    continue;
                }
                let term = if step % 2 == 1 {
                    power[i][j].neg()
                } else {
                    power[i][j].clone()
                };
                series[i][j] = series[i][j].add(&term)?;
            }
        }
    }

    // M^{-1} = (I + P)^{-1} M0^{-1}
    mat_mul(&series, &m0_inv)
}

/// Solve `i_X omega0 = target` for a weight-0 derivation `X`; `target` must
/// be a homogeneous one-form. The solution is verified by substitution.
pub(crate) fn solve_contraction(
    sig: &SigRef,
    omega0: &Element,
    target: &Element,
    degree: i64,
) -> Result<Derivation> {
    let m = contraction_matrix(sig, omega0)?;
    let minv = invert_contraction_matrix(sig, &m)?;
    let n = m.gens.len();

    // row vector of left coefficients of the target
    let mut c = vec![Element::zero(sig); n];
    if !target.is_zero() {
        for (xi, coeff) in target.weight_one_coefficients()? {
            let h = sig
                .base_of(xi)
                .ok_or_else(|| Error::Shape("target is not a one-form".to_string()))?;
            c[m.index[&h]] = coeff;
        }
    }

    // u = c . M^{-1}
    let mut values = BTreeMap::new();
    for (gi, g) in m.gens.iter().enumerate() {
        let mut u = Element::zero(sig);
        for (h, ch) in c.iter().enumerate() {
            if ch.is_zero() || minv[h][gi].is_zero() {
                continue;
            }
            u = u.add(&ch.mul(&minv[h][gi])?)?;
        }
        if !u.is_zero() {
            values.insert(*g, u);
        }
    }
    let x = Derivation::new(sig, degree, 0, values)?;

    let check = contract(&x)?.apply(omega0)?.sub(target)?;
    if !check.is_zero() {
        return Err(Error::Shape(format!(
            "contraction solve failed to verify: residue {}",
            check.render()
        )));
    }
    Ok(x)
}

/// The unique vector field with `i_X omega0 = d_dR f`, for homogeneous `f`
/// over a strictly nondegenerate 2-form.
pub fn hamiltonian_vector_field(
    cdga: &StandardFormCdga,
    omega0: &Element,
    f: &Element,
) -> Result<Derivation> {
    if !is_strictly_nondegenerate(cdga, omega0)? {
        return Err(Error::NotStrictlyNondegenerate(
            "refusing to solve against a degenerate 2-form".to_string(),
        ));
    }
    let sig = cdga.sig();
    let (fd, fw) = f.homogeneous_bidegree().unwrap_or((0, 0));
    if fw != 0 || !f.is_form_free() {
        return Err(Error::Shape(
            "Hamiltonians live in the algebra part".to_string(),
        ));
    }
    let k = omega0
        .homogeneous_bidegree()
        .map(|(d, _)| d + 2)
        .unwrap_or(0);
    let ddr = de_rham(sig);
    let target = ddr.apply(f)?;
    solve_contraction(sig, omega0, &target, fd - k)
}

/// `{f, g} = (-1)^{|f|-k-1} X_f(g)`: bilinear of degree `-k`.
pub fn poisson_bracket(
    cdga: &StandardFormCdga,
    omega0: &Element,
    f: &Element,
    g: &Element,
) -> Result<Element> {
    let sig = cdga.sig();
    if f.is_zero() || g.is_zero() {
        return Ok(Element::zero(sig));
    }
    let (fd, _) = f
        .homogeneous_bidegree()
        .ok_or_else(|| Error::NotHomogeneous {
            degree: 0,
            weight: 0,
            found: f.render(),
        })?;
    let k = omega0
        .homogeneous_bidegree()
        .map(|(d, _)| d + 2)
        .unwrap_or(0);
    let xf = hamiltonian_vector_field(cdga, omega0, f)?;
    let mut out = xf.apply(g)?;
    if (fd - k - 1).rem_euclid(2) == 1 {
        out = out.neg();
    }
    let _ = sig;
    Ok(out)
}

/// Residues of the three n-Poisson axioms on one triple, with `n = -k`.
#[derive(Debug, Clone)]
pub struct AxiomResidues {
    pub antisymmetry: Element,
    pub jacobi: Element,
    pub derivation: Element,
}

impl AxiomResidues {
    pub fn all_zero(&self) -> bool {
        self.antisymmetry.is_zero() && self.jacobi.is_zero() && self.derivation.is_zero()
    }
}

/// Check graded antisymmetry, graded Jacobi and the graded derivation rule
/// on one homogeneous triple.
pub fn check_poisson_axioms(
    cdga: &StandardFormCdga,
    omega0: &Element,
    f: &Element,
    g: &Element,
    h: &Element,
) -> Result<AxiomResidues> {
    let k = omega0
        .homogeneous_bidegree()
        .map(|(d, _)| d + 2)
        .unwrap_or(0);
    let n = -k;
    let fd = f.homogeneous_bidegree().map(|(d, _)| d).unwrap_or(0);
    let gd = g.homogeneous_bidegree().map(|(d, _)| d).unwrap_or(0);
    let br = |a: &Element, b: &Element| poisson_bracket(cdga, omega0, a, b);

    // {f,g} + (-1)^{(|f|+n)(|g|+n)} {g,f}
    let mut anti = br(g, f)?;
    if ((fd + n) * (gd + n)).rem_euclid(2) == 1 {
        anti = anti.neg();
    }
    let antisymmetry = br(f, g)?.add(&anti)?;

    // {f,{g,h}} - {{f,g},h} - (-1)^{(|f|+n)(|g|+n)} {g,{f,h}}
    let mut third = br(g, &br(f, h)?)?;
    if ((fd + n) * (gd + n)).rem_euclid(2) == 1 {
        third = third.neg();
    }
    let jacobi = br(f, &br(g, h)?)?.sub(&br(&br(f, g)?, h)?)?.sub(&third)?;

    // {f, g h} - {f,g} h - (-1)^{(|f|+n)|g|} g {f,h}
    let mut lastterm = g.mul(&br(f, h)?)?;
    if ((fd + n) * gd).rem_euclid(2) == 1 {
        lastterm = lastterm.neg();
    }
    let derivation = br(f, &g.mul(h)?)?.sub(&br(f, g)?.mul(h)?)?.sub(&lastterm)?;

    Ok(AxiomResidues {
        antisymmetry,
        jacobi,
        derivation,
    })
}

/// Report of the three sub-checks tying the differential to a Hamiltonian.
#[derive(Debug, Clone)]
pub struct HamiltonianReport {
    /// `{H, H}` and whether it vanishes.
    pub master_residue: Element,
    pub master_ok: bool,
    /// At shift -2 the obstruction is a scalar; flag that case.
    pub constant_obstruction: bool,
    /// Generators where `X_H` differs from the differential.
    pub field_mismatches: Vec<(String, Element)>,
    /// `d omega0`, which must vanish.
    pub omega_residue: Element,
    pub omega_closed: bool,
}

impl HamiltonianReport {
    pub fn ok(&self) -> bool {
        self.master_ok && self.field_mismatches.is_empty() && self.omega_closed
    }
}

/// Check that the cdga differential is the Hamiltonian vector field of `H`:
/// (a) `{H, H} = 0`, (b) `X_H = d` on every generator, (c) `d omega0 = 0`.
pub fn differential_is_hamiltonian(
    cdga: &StandardFormCdga,
    omega0: &Element,
    h: &Element,
) -> Result<HamiltonianReport> {
    let sig = cdga.sig();
    let k = omega0
        .homogeneous_bidegree()
        .map(|(d, _)| d + 2)
        .unwrap_or(0);
    let master_residue = poisson_bracket(cdga, omega0, h, h)?;
    let master_ok = master_residue.is_zero();
    let constant_obstruction = !master_ok && k == -2 && master_residue.as_scalar().is_some();

    let xh = hamiltonian_vector_field(cdga, omega0, h)?;
    let mut field_mismatches = Vec::new();
    for g in sig.algebra_gens() {
        let r = xh.value_on(g).sub(&cdga.d_of_gen(g))?;
        if !r.is_zero() {
            field_mismatches.push((sig.name(g).to_string(), r));
        }
    }

    let omega_residue = cdga.total_differential()?.apply(omega0)?;
    let omega_closed = omega_residue.is_zero();
    Ok(HamiltonianReport {
        master_residue,
        master_ok,
        constant_obstruction,
        field_mismatches,
        omega_residue,
        omega_closed,
    })
}

/// The verified output of `extract_hamiltonian`.
#[derive(Debug, Clone)]
pub struct HamiltonianPackage {
    pub hamiltonian: Element,
    pub normalized_pair: PhiPhiPair,
    /// The differential, re-read as the Hamiltonian vector field.
    pub field: Derivation,
}

/// Normalize the pair so `i_E phi = 0`, set `H = k Phi`, and verify
/// `i_Q omega0 = d_dR H` for the cohomological field `Q = d`.
pub fn extract_hamiltonian(
    cdga: &StandardFormCdga,
    omega0: &Element,
    pair: &PhiPhiPair,
) -> Result<HamiltonianPackage> {
    if !is_strictly_nondegenerate(cdga, omega0)? {
        return Err(Error::NotStrictlyNondegenerate(
            "extraction needs a strictly nondegenerate 2-form".to_string(),
        ));
    }
    let normalized = normalize_pair(cdga, omega0, pair)?;
    let h = normalized.phi.scale(&Scalar::from_int(pair.k));
    let iota_q = contract(cdga.differential())?;
    let ddr = de_rham(cdga.sig());
    let residue = iota_q.apply(omega0)?.sub(&ddr.apply(&h)?)?;
    if !residue.is_zero() {
        return Err(Error::Shape(format!(
            "i_Q omega0 - d_dR H = {}",
            residue.render()
        )));
    }
    Ok(HamiltonianPackage {
        hamiltonian: h,
        normalized_pair: normalized,
        field: cdga.differential().clone(),
    })
}

/// The operator identity `i_Q = -[i_E, d]` for the cohomological field `Q`,
/// as two derivations to compare on elements.
pub fn contraction_via_euler(cdga: &StandardFormCdga) -> Result<(Derivation, Derivation)> {
    let sig = cdga.sig();
    let iota_q = contract(cdga.differential())?;
    let iota_e = contract(&euler(sig))?;
    let d = cdga.total_differential()?;
    // [i_E, d] = i_E d + d i_E since both have odd degree
    let bracket = iota_e.lie_bracket(&d)?;
    let mut values = BTreeMap::new();
    for g in sig.all_gens() {
        let v = bracket.value_on(g).neg();
        if !v.is_zero() {
            values.insert(g, v);
        }
    }
    let neg_bracket = Derivation::new(sig, bracket.degree(), bracket.weight(), values)?;
    Ok((iota_q, neg_bracket))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::{DarbouxSpec, Family};
    use crate::sig::FieldKind;

    fn cubic() -> crate::darboux::GeneratedModel {
        DarbouxSpec {
            family: Family::Odd { d: 0 },
            field: FieldKind::Rational,
            base: vec!["x".to_string()],
            ranks: vec![1],
            q: Vec::new(),
            extra_invertibles: Vec::new(),
            hamiltonian: "x^3".to_string(),
        }
        .generate()
        .unwrap()
    }

    #[test]
    fn hamiltonian_field_of_y_points_along_x() {
        let m = cubic();
        let sig = &m.sig;
        let f = Element::parse(sig, "y1_1").unwrap();
        let x = hamiltonian_vector_field(&m.cdga, m.omega0(), &f).unwrap();
        let gx = sig.require("x").unwrap();
        let gy = sig.require("y1_1").unwrap();
        assert!(x.value_on(gx).equals(&Element::one(sig)).unwrap());
        assert!(x.value_on(gy).is_zero());
    }

    #[test]
    fn hamiltonian_field_of_h_matches_the_differential() {
        let m = cubic();
        let sig = &m.sig;
        let xh = hamiltonian_vector_field(&m.cdga, m.omega0(), &m.hamiltonian).unwrap();
        let gy = sig.require("y1_1").unwrap();
        assert!(xh
            .value_on(gy)
            .equals(&Element::parse(sig, "3*x^2").unwrap())
            .unwrap());
        assert!(xh.value_on(sig.require("x").unwrap()).is_zero());
        // constants get the zero field
        let c = Element::parse(sig, "5").unwrap();
        let xc = hamiltonian_vector_field(&m.cdga, m.omega0(), &c).unwrap();
        assert!(xc.is_zero());
    }

    #[test]
    fn bracket_values_on_the_cubic_model() {
        let m = cubic();
        let sig = &m.sig;
        let x = Element::parse(sig, "x").unwrap();
        let y = Element::parse(sig, "y1_1").unwrap();
        // {x, x} = 0 for degree reasons
        assert!(poisson_bracket(&m.cdga, m.omega0(), &x, &x)
            .unwrap()
            .is_zero());
        // {H, y} = d y = 3x^2
        let hy = poisson_bracket(&m.cdga, m.omega0(), &m.hamiltonian, &y).unwrap();
        assert!(hy.equals(&Element::parse(sig, "3*x^2").unwrap()).unwrap());
        // {y, x}: the convention-fixed unit value, computed by the solver
        let yx = poisson_bracket(&m.cdga, m.omega0(), &y, &x).unwrap();
        assert!(yx.equals(&Element::parse(sig, "-1").unwrap()).unwrap());
    }

    #[test]
    fn axioms_on_small_triples() {
        let m = cubic();
        let sig = &m.sig;
        let f = Element::parse(sig, "y1_1").unwrap();
        let g = Element::parse(sig, "x").unwrap();
        let h = Element::parse(sig, "x").unwrap();
        let res = check_poisson_axioms(&m.cdga, m.omega0(), &f, &g, &h).unwrap();
        assert!(res.all_zero());
        let res2 = check_poisson_axioms(&m.cdga, m.omega0(), &m.hamiltonian, &f, &g).unwrap();
        assert!(res2.all_zero());
    }

    #[test]
    fn differential_is_hamiltonian_on_generated_model() {
        let m = cubic();
        let rep = differential_is_hamiltonian(&m.cdga, m.omega0(), &m.hamiltonian).unwrap();
        assert!(rep.ok());
    }

    #[test]
    fn perturbed_differential_is_flagged() {
        let m = cubic();
        let sig = &m.sig;
        let mut perturbed: BTreeMap<String, Element> = BTreeMap::new();
        perturbed.insert(
            "y1_1".to_string(),
            Element::parse(sig, "3*x^2 + x").unwrap(),
        );
        let tweaked = StandardFormCdga::build(sig, perturbed).unwrap();
        let rep = differential_is_hamiltonian(&tweaked, m.omega0(), &m.hamiltonian).unwrap();
        assert!(!rep.ok());
        assert_eq!(rep.field_mismatches.len(), 1);
        assert_eq!(rep.field_mismatches[0].0, "y1_1");
    }

    #[test]
    fn extraction_recovers_the_hamiltonian() {
        let m = cubic();
        let pkg = extract_hamiltonian(&m.cdga, m.omega0(), &m.pair).unwrap();
        assert!(pkg.hamiltonian.equals(&m.hamiltonian).unwrap());
        // zero differential with Phi = 0: zero Hamiltonian
        let sig = &m.sig;
        let free = StandardFormCdga::build(sig, BTreeMap::new()).unwrap();
        let flat_pair = PhiPhiPair::new(
            -1,
            Element::zero(sig),
            Element::parse(sig, "y1_1*dx").unwrap(),
        );
        let pkg0 = extract_hamiltonian(&free, m.omega0(), &flat_pair).unwrap();
        assert!(pkg0.hamiltonian.is_zero());
    }

    #[test]
    fn euler_commutator_identity_on_generators() {
        let m = cubic();
        let (iota_q, neg_bracket) = contraction_via_euler(&m.cdga).unwrap();
        assert!(iota_q.equals(&neg_bracket).unwrap());
    }

    #[test]
    fn constant_obstruction_at_shift_minus_two() {
        // d z = 1 squares to zero although {H, H} = 2: the scalar case the
        // report flags separately
        let sig = crate::sig::Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("z", -1)
            .generator("y", -2)
            .build()
            .unwrap();
        let mut assign = BTreeMap::new();
        assign.insert("z".to_string(), Element::one(&sig));
        let cdga = StandardFormCdga::build(&sig, assign).unwrap();
        let omega0 = Element::parse(&sig, "dz*dz + dy*dx").unwrap();
        let h = Element::parse(&sig, "2*z").unwrap();
        let rep = differential_is_hamiltonian(&cdga, &omega0, &h).unwrap();
        assert!(!rep.master_ok);
        assert!(rep.constant_obstruction);
        assert_eq!(rep.master_residue.render(), "2");
        // the field itself still matches the differential
        assert!(rep.field_mismatches.is_empty());
    }

    #[test]
    fn values_are_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Element>();
        assert_send_sync::<Derivation>();
        assert_send_sync::<StandardFormCdga>();
        assert_send_sync::<crate::sig::Signature>();
    }

    #[test]
    fn degenerate_form_is_refused() {
        let m = cubic();
        let sig = &m.sig;
        let bad = Element::parse(sig, "x*dy1_1*dx").unwrap();
        assert!(matches!(
            hamiltonian_vector_field(&m.cdga, &bad, &m.hamiltonian),
            Err(Error::NotStrictlyNondegenerate(_))
        ));
    }
}
