//! The shift -1 specialization: derived critical loci and their charts, the
//! constant-subtraction normalization of the potential, overlap comparison
//! certificates with their squared-ideal membership witness, and the
//! two-term Hessian complex at a point.

use crate::cdga::{RationalPoint, StandardFormCdga};
use crate::darboux::{DarbouxSpec, Family};
use crate::derham::de_rham;
use crate::derivation::partial_apply;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sig::{FieldKind, GenId, SigRef, Signature};
use std::collections::BTreeMap;

/// A critical chart: a smooth affine base with a potential; the derived
/// ideal is the list of partials and the section datum is the class of the
/// potential modulo its square.
#[derive(Debug, Clone)]
pub struct CriticalChart {
    pub field: FieldKind,
    pub base: Vec<String>,
    pub invertibles: Vec<String>,
    pub potential: String,
}

impl CriticalChart {
    pub fn base_signature(&self) -> Result<SigRef> {
        let mut b = Signature::builder(self.field).base_vars(&self.base);
        for inv in &self.invertibles {
            b = b.invertible(inv);
        }
        b.build()
    }

    /// The ideal generators: the partials of the potential, in coordinate
    /// order.
    pub fn ideal(&self) -> Result<Vec<Element>> {
        let sig = self.base_signature()?;
        let h = Element::parse(&sig, &self.potential)?;
        sig.base_gens()
            .map(|g| partial_apply(&sig, g, &h))
            .collect()
    }

    /// Check that a named point satisfies every ideal generator.
    pub fn point(&self, named: &BTreeMap<String, Scalar>) -> Result<RationalPoint> {
        let spec = derived_critical_locus(self)?;
        let model = spec.generate()?;
        let p = RationalPoint::new(&model.sig, named)?;
        p.validate(&model.cdga)?;
        // re-key the values to the bare chart signature
        let sig = self.base_signature()?;
        let mut values = BTreeMap::new();
        for g in sig.base_gens() {
            let src = model.sig.require(sig.name(g))?;
            values.insert(g, p.values[&src].clone());
        }
        Ok(RationalPoint { values })
    }
}

/// The shift -1 model of a chart: one antifield per coordinate and the
/// partials of the potential as the differential.
pub fn derived_critical_locus(chart: &CriticalChart) -> Result<DarbouxSpec> {
    Ok(DarbouxSpec {
        family: Family::Odd { d: 0 },
        field: chart.field,
        base: chart.base.clone(),
        ranks: vec![chart.base.len()],
        q: Vec::new(),
        extra_invertibles: chart.invertibles.clone(),
        hamiltonian: chart.potential.clone(),
    })
}

/// Subtract the common critical value of the potential at the supplied
/// points. Differing values mean the locus splits into components the
/// caller must treat separately.
pub fn normalize_potential(
    chart: &CriticalChart,
    points: &[BTreeMap<String, Scalar>],
) -> Result<CriticalChart> {
    if points.is_empty() {
        return Err(Error::Shape(
            "normalization needs at least one critical point".to_string(),
        ));
    }
    let sig = chart.base_signature()?;
    let h = Element::parse(&sig, &chart.potential)?;
    let mut value: Option<Scalar> = None;
    for named in points {
        let p = chart.point(named)?;
        let v = h.evaluate(&p.values)?;
        match &value {
            None => value = Some(v),
            Some(prev) if *prev == v => {}
            Some(prev) => {
                return Err(Error::Shape(format!(
                    "the potential is locally constant, not constant, on the supplied points: \
                     found values {prev} and {v}; split the locus and normalize per component"
                )));
            }
        }
    }
    let c = value.expect("nonempty points");
    if c.is_zero() {
        return Ok(chart.clone());
    }
    let shifted = h.sub(&Element::scalar(&sig, c))?;
    Ok(CriticalChart {
        potential: shifted.render(),
        ..chart.clone()
    })
}

/// The two-term Hessian complex of a chart at a critical point: the matrix
/// of second partials evaluated at the point, with the rank bookkeeping
/// that makes its determinant a square of the coordinate volume.
#[derive(Debug, Clone)]
pub struct HessianComplex {
    pub matrix: Vec<Vec<Scalar>>,
    pub dim: usize,
    /// The two terms of the complex have equal rank.
    pub ranks: (usize, usize),
    pub determinant: Scalar,
}

pub fn hessian_complex_at(
    chart: &CriticalChart,
    named: &BTreeMap<String, Scalar>,
) -> Result<HessianComplex> {
    let sig = chart.base_signature()?;
    let h = Element::parse(&sig, &chart.potential)?;
    let p = chart.point(named)?;
    let gens: Vec<GenId> = sig.base_gens().collect();
    let n = gens.len();
    let mut matrix = vec![vec![Scalar::zero(); n]; n];
    for (i, gi) in gens.iter().enumerate() {
        let hi = partial_apply(&sig, *gi, &h)?;
        for (j, gj) in gens.iter().enumerate() {
            matrix[i][j] = partial_apply(&sig, *gj, &hi)?.evaluate(&p.values)?;
        }
    }
    let determinant = scalar_det(&matrix);
    Ok(HessianComplex {
        matrix,
        dim: n,
        ranks: (n, n),
        determinant,
    })
}

fn scalar_det(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Scalar::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Scalar>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(t, _)| *t != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let mut term = &m[0][j] * &scalar_det(&minor);
        if j % 2 == 1 {
            term = -&term;
        }
        acc = &acc + &term;
    }
    acc
}

/// The coefficient data comparing two chart presentations over a glue
/// algebra `C = C(0)[e_1 .. e_m]`: `d e_j = I_j`, the base substitutions
/// `a, b`, the antifield matrices `J, K`, and the gauge data `L, M, N` with
/// `N` antisymmetric in its first two indices.
#[derive(Debug, Clone)]
pub struct ComparisonCertificate {
    pub chart_a: CriticalChart,
    pub chart_b: CriticalChart,
    pub glue_base: Vec<String>,
    pub e_count: usize,
    pub i_funcs: Vec<String>,
    /// image of each `chart_a` coordinate in the glue base
    pub a_map: Vec<String>,
    /// image of each `chart_b` coordinate in the glue base
    pub b_map: Vec<String>,
    pub j_matrix: Vec<Vec<String>>,
    pub k_matrix: Vec<Vec<String>>,
    pub l_vec: Vec<String>,
    pub m_matrix: Vec<Vec<String>>,
    /// `n_tensor[j][j'][j'']`, antisymmetric in `(j, j')`
    pub n_tensor: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub label: String,
    pub ok: bool,
    pub residue: Option<String>,
}

/// One term `I_j I_{j'} M_{j'j}` of the squared-ideal membership witness.
#[derive(Debug, Clone)]
pub struct WitnessTerm {
    pub j: usize,
    pub jp: usize,
    pub coefficient: String,
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub identities: Vec<IdentityCheck>,
    pub ok: bool,
    /// `a*(H) - b*(H~) = sum_{j,j'} I_j I_{j'} M_{j'j}`, an explicit element
    /// of the squared ideal; present when all identities hold.
    pub witness: Option<Vec<WitnessTerm>>,
    pub witness_total: Option<String>,
}

struct CertSide {
    model: crate::darboux::GeneratedModel,
    /// substitution: generators of the chart model into the glue algebra
    images: BTreeMap<GenId, Element>,
}

fn build_side(
    chart: &CriticalChart,
    coord_images: &[String],
    antifield_matrix: &[Vec<String>],
    glue_sig: &SigRef,
    e_names: &[String],
) -> Result<CertSide> {
    let spec = derived_critical_locus(chart)?;
    let model = spec.generate()?;
    let m0 = chart.base.len();
    if coord_images.len() != m0 {
        return Err(Error::Shape(format!(
            "substitution map needs {m0} images, got {}",
            coord_images.len()
        )));
    }
    if antifield_matrix.len() != m0 {
        return Err(Error::Shape(format!(
            "antifield matrix needs {m0} rows, got {}",
            antifield_matrix.len()
        )));
    }
    let ddr = de_rham(glue_sig);
    let mut images = BTreeMap::new();
    for (i, name) in chart.base.iter().enumerate() {
        let g = model.sig.require(name)?;
        let img = Element::parse(glue_sig, &coord_images[i])?;
        if !img.is_base_only() || !img.is_homogeneous(0, 0) {
            return Err(Error::Shape(format!(
                "image of `{name}` must be a glue base element"
            )));
        }
        images.insert(model.sig.xi_of(g).unwrap(), ddr.apply(&img)?);
        images.insert(g, img);
    }
    for (i, row) in antifield_matrix.iter().enumerate() {
        if row.len() != e_names.len() {
            return Err(Error::Shape(format!(
                "antifield matrix row {i} needs {} entries",
                e_names.len()
            )));
        }
        let y = model.sig.require(&format!("y1_{}", i + 1))?;
        let mut img = Element::zero(glue_sig);
        for (jj, src) in row.iter().enumerate() {
            let c = Element::parse(glue_sig, src)?;
            let e = Element::generator(glue_sig, glue_sig.require(&e_names[jj])?);
            img = img.add(&c.mul(&e)?)?;
        }
        images.insert(model.sig.xi_of(y).unwrap(), ddr.apply(&img)?);
        images.insert(y, img);
    }
    Ok(CertSide { model, images })
}

fn transport(side: &CertSide, glue_sig: &SigRef, e: &Element) -> Result<Element> {
    e.substitute(glue_sig, &side.images)
}

/// Verify every identity of a comparison certificate and emit the squared
/// ideal membership witness.
pub fn verify_comparison(cert: &ComparisonCertificate) -> Result<ComparisonReport> {
    // ---- glue cdga: base plus e_1 .. e_m in degree -1, d e_j = I_j
    let m = cert.e_count;
    let shape = |cond: bool, what: &str| -> Result<()> {
        if cond {
            Ok(())
        } else {
            Err(Error::Shape(what.to_string()))
        }
    };
    shape(cert.i_funcs.len() == m, "need m entries in i_funcs")?;
    shape(cert.l_vec.len() == m, "need m entries in l_vec")?;
    shape(cert.m_matrix.len() == m, "need m rows in m_matrix")?;
    shape(
        cert.m_matrix.iter().all(|r| r.len() == m),
        "m_matrix must be m x m",
    )?;
    shape(cert.n_tensor.len() == m, "need m slices in n_tensor")?;
    shape(
        cert.n_tensor
            .iter()
            .all(|s| s.len() == m && s.iter().all(|r| r.len() == cert.glue_base.len())),
        "n_tensor must be m x m x dim(glue base)",
    )?;
    if cert.chart_a.field != cert.chart_b.field {
        return Err(Error::Shape(
            "charts live over different fields".to_string(),
        ));
    }

    let e_names: Vec<String> = (1..=m).map(|j| format!("e{j}")).collect();
    let mut builder = Signature::builder(cert.chart_a.field).base_vars(&cert.glue_base);
    for name in &e_names {
        builder = builder.generator(name, -1);
    }
    let glue_sig = builder.build()?;
    let i_elems: Vec<Element> = cert
        .i_funcs
        .iter()
        .map(|src| Element::parse(&glue_sig, src))
        .collect::<Result<_>>()?;
    for (j, ie) in i_elems.iter().enumerate() {
        if !ie.is_base_only() {
            return Err(Error::Shape(format!(
                "I_{} must be a glue base element",
                j + 1
            )));
        }
    }
    let mut assignments = BTreeMap::new();
    for (name, ie) in e_names.iter().zip(&i_elems) {
        assignments.insert(name.clone(), ie.clone());
    }
    let glue = StandardFormCdga::build(&glue_sig, assignments)?;

    let n_elems: Vec<Vec<Vec<Element>>> = cert
        .n_tensor
        .iter()
        .map(|s| {
            s.iter()
                .map(|r| r.iter().map(|src| Element::parse(&glue_sig, src)).collect())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    for j in 0..m {
        for jp in 0..m {
            for jpp in 0..cert.glue_base.len() {
                let sum = n_elems[j][jp][jpp].add(&n_elems[jp][j][jpp])?;
                if !sum.is_zero() {
                    return Err(Error::Shape(format!(
                        "N must be antisymmetric in its first two indices; \
                         N[{j}][{jp}][{jpp}] + N[{jp}][{j}][{jpp}] != 0"
                    )));
                }
            }
        }
    }

    let side_a = build_side(
        &cert.chart_a,
        &cert.a_map,
        &cert.j_matrix,
        &glue_sig,
        &e_names,
    )?;
    let side_b = build_side(
        &cert.chart_b,
        &cert.b_map,
        &cert.k_matrix,
        &glue_sig,
        &e_names,
    )?;

    let mut identities: Vec<IdentityCheck> = Vec::new();
    let mut push = |label: String, residue: Element| {
        let ok = residue.is_zero();
        identities.push(IdentityCheck {
            label,
            ok,
            residue: if ok { None } else { Some(residue.render()) },
        });
    };

    // ---- alpha, beta are cdga maps: they intertwine the differentials
    for (tag, side) in [("alpha", &side_a), ("beta", &side_b)] {
        for g in side.model.sig.algebra_gens() {
            let lhs = transport(side, &glue_sig, &side.model.cdga.d_of_gen(g))?;
            let rhs = glue.d(&side.images[&g])?;
            push(
                format!("{tag} intertwines d on {}", side.model.sig.name(g)),
                lhs.sub(&rhs)?,
            );
        }
    }

    // ---- gauge data
    let e_elems: Vec<Element> = e_names
        .iter()
        .map(|n| Ok(Element::generator(&glue_sig, glue_sig.require(n)?)))
        .collect::<Result<_>>()?;
    let l_elems: Vec<Element> = cert
        .l_vec
        .iter()
        .map(|src| Element::parse(&glue_sig, src))
        .collect::<Result<_>>()?;
    let m_elems: Vec<Vec<Element>> = cert
        .m_matrix
        .iter()
        .map(|r| r.iter().map(|src| Element::parse(&glue_sig, src)).collect())
        .collect::<Result<_>>()?;

    let mut psi_big = Element::zero(&glue_sig); // Psi = sum L_j e_j
    for (l, e) in l_elems.iter().zip(&e_elems) {
        psi_big = psi_big.add(&l.mul(e)?)?;
    }
    let ddr = de_rham(&glue_sig);
    let mut psi_small = Element::zero(&glue_sig); // psi = sum M e dxi_e + sum N e e dz
    for j in 0..m {
        for jp in 0..m {
            let xi_e = Element::generator(
                &glue_sig,
                glue_sig.xi_of(glue_sig.require(&e_names[jp])?).unwrap(),
            );
            psi_small = psi_small.add(&m_elems[j][jp].mul(&e_elems[j])?.mul(&xi_e)?)?;
        }
    }
    for j in 0..m {
        for jp in 0..m {
            for (jpp, zname) in cert.glue_base.iter().enumerate() {
                let n_c = &n_elems[j][jp][jpp];
                if n_c.is_zero() {
                    continue;
                }
                let xi_z = Element::generator(
                    &glue_sig,
                    glue_sig.xi_of(glue_sig.require(zname)?).unwrap(),
                );
                psi_small = psi_small.add(&n_c.mul(&e_elems[j])?.mul(&e_elems[jp])?.mul(&xi_z)?)?;
            }
        }
    }

    // ---- the two gauge identities relating the transported pairs
    let d_tot = glue.total_differential()?;
    let phi_a = transport(&side_a, &glue_sig, &side_a.model.pair.phi)?;
    let phi_b = transport(&side_b, &glue_sig, &side_b.model.pair.phi)?;
    let varphi_a = transport(&side_a, &glue_sig, &side_a.model.pair.varphi)?;
    let varphi_b = transport(&side_b, &glue_sig, &side_b.model.pair.varphi)?;
    push(
        "alpha(Phi) - beta(Phi~) = d Psi".to_string(),
        phi_a.sub(&phi_b)?.sub(&d_tot.apply(&psi_big)?)?,
    );
    push(
        "alpha(phi) - beta(phi~) = d_dR Psi + d psi".to_string(),
        varphi_a
            .sub(&varphi_b)?
            .sub(&ddr.apply(&psi_big)?)?
            .sub(&d_tot.apply(&psi_small)?)?,
    );

    // ---- the coefficient identities
    let h_a = transport(&side_a, &glue_sig, &side_a.model.hamiltonian)?;
    let h_b = transport(&side_b, &glue_sig, &side_b.model.hamiltonian)?;
    {
        // a*(Phi) - b*(Phi~) = sum_j I_j L_j
        let mut rhs = Element::zero(&glue_sig);
        for (ie, l) in i_elems.iter().zip(&l_elems) {
            rhs = rhs.add(&ie.mul(l)?)?;
        }
        push(
            "a*(Phi) - b*(Phi~) = sum I_j L_j".to_string(),
            phi_a.sub(&phi_b)?.sub(&rhs)?,
        );
    }
    for j in 0..m {
        // 0 = L_j + sum_{j'} I_{j'} M_{j'j}
        let mut acc = l_elems[j].clone();
        for jp in 0..m {
            acc = acc.add(&i_elems[jp].mul(&m_elems[jp][j])?)?;
        }
        push(format!("0 = L_{} + sum I M", j + 1), acc);
    }
    for j in 0..m {
        for (jp, zname) in cert.glue_base.iter().enumerate() {
            // sum_i J_ij da*(x_i)/dz_{j'} - sum_i K_ij db*(x~_i)/dz_{j'}
            //   = -dL_j/dz_{j'} + sum M_j. dI./dz_{j'} + 2 sum I. N(.,j,j')
            let gz = glue_sig.require(zname)?;
            let mut lhs = Element::zero(&glue_sig);
            for (i, name) in cert.chart_a.base.iter().enumerate() {
                let _ = name;
                let jc = Element::parse(&glue_sig, &cert.j_matrix[i][j])?;
                let ax = Element::parse(&glue_sig, &cert.a_map[i])?;
                lhs = lhs.add(&jc.mul(&partial_apply(&glue_sig, gz, &ax)?)?)?;
            }
            for (i, name) in cert.chart_b.base.iter().enumerate() {
                let _ = name;
                let kc = Element::parse(&glue_sig, &cert.k_matrix[i][j])?;
                let bx = Element::parse(&glue_sig, &cert.b_map[i])?;
                lhs = lhs.sub(&kc.mul(&partial_apply(&glue_sig, gz, &bx)?)?)?;
            }
            let mut rhs = partial_apply(&glue_sig, gz, &l_elems[j])?.neg();
            for jpp in 0..m {
                rhs = rhs.add(&m_elems[j][jpp].mul(&partial_apply(
                    &glue_sig,
                    gz,
                    &i_elems[jpp],
                )?)?)?;
            }
            for jpp in 0..m {
                rhs = rhs.add(
                    &i_elems[jpp]
                        .mul(&n_elems[jpp][j][jp])?
                        .scale(&Scalar::from_int(2)),
                )?;
            }
            push(
                format!("coefficient of e_{} d{}", j + 1, zname),
                lhs.sub(&rhs)?,
            );
        }
    }

    let ok = identities.iter().all(|c| c.ok);
    let (witness, witness_total) = if ok {
        let mut terms = Vec::new();
        let mut total = Element::zero(&glue_sig);
        for j in 0..m {
            for jp in 0..m {
                let coeff = i_elems[j].mul(&i_elems[jp])?.mul(&m_elems[jp][j])?;
                if coeff.is_zero() {
                    continue;
                }
                total = total.add(&coeff)?;
                terms.push(WitnessTerm {
                    j: j + 1,
                    jp: jp + 1,
                    coefficient: coeff.render(),
                });
            }
        }
        // the witness must expand to a*(H) - b*(H~) exactly
        let lhs = h_a.sub(&h_b)?;
        if !lhs.equals(&total)? {
            return Err(Error::Shape(format!(
                "witness mismatch: a*(H) - b*(H~) - sum I I M = {}",
                lhs.sub(&total)?.render()
            )));
        }
        (Some(terms), Some(total.render()))
    } else {
        (None, None)
    };

    Ok(ComparisonReport {
        identities,
        ok,
        witness,
        witness_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic_chart() -> CriticalChart {
        CriticalChart {
            field: FieldKind::Rational,
            base: vec!["x".to_string()],
            invertibles: Vec::new(),
            potential: "x^3".to_string(),
        }
    }

    #[test]
    fn derived_locus_ideals() {
        let chart = cubic_chart();
        let ideal = chart.ideal().unwrap();
        assert_eq!(ideal.len(), 1);
        assert_eq!(ideal[0].render(), "3*x^2");

        let two = CriticalChart {
            field: FieldKind::Rational,
            base: vec!["x1".to_string(), "x2".to_string()],
            invertibles: Vec::new(),
            potential: "x1*x2".to_string(),
        };
        let ideal = two.ideal().unwrap();
        assert_eq!(ideal[0].render(), "x2");
        assert_eq!(ideal[1].render(), "x1");

        let flat = CriticalChart {
            potential: "0".to_string(),
            ..cubic_chart()
        };
        assert!(flat.ideal().unwrap()[0].is_zero());
    }

    #[test]
    fn potential_normalization() {
        let chart = CriticalChart {
            potential: "x^3 + 5".to_string(),
            ..cubic_chart()
        };
        let mut origin = BTreeMap::new();
        origin.insert("x".to_string(), Scalar::zero());
        let fixed = normalize_potential(&chart, &[origin.clone()]).unwrap();
        assert_eq!(fixed.potential, "x^3");
        // already vanishing: unchanged
        let same = normalize_potential(&cubic_chart(), &[origin.clone()]).unwrap();
        assert_eq!(same.potential, "x^3");
        // two components with different values: refuse
        let split = CriticalChart {
            field: FieldKind::Rational,
            base: vec!["x".to_string()],
            invertibles: Vec::new(),
            // critical points at x = 0 and x = 2 with values 0 and -4
            potential: "x^3 - 3*x^2".to_string(),
        };
        let mut two = BTreeMap::new();
        two.insert("x".to_string(), Scalar::from_int(2));
        let err = normalize_potential(&split, &[origin, two]);
        assert!(err.is_err());
    }

    #[test]
    fn hessian_at_the_origin() {
        let mut origin = BTreeMap::new();
        origin.insert("x".to_string(), Scalar::zero());
        let h = hessian_complex_at(&cubic_chart(), &origin).unwrap();
        assert_eq!(h.dim, 1);
        assert!(h.matrix[0][0].is_zero());
        let sq = CriticalChart {
            potential: "x^2".to_string(),
            ..cubic_chart()
        };
        let h2 = hessian_complex_at(&sq, &origin).unwrap();
        assert_eq!(h2.matrix[0][0].to_string(), "2");
        assert_eq!(h2.ranks, (1, 1));
        // off the locus: refused
        let mut off = BTreeMap::new();
        off.insert("x".to_string(), Scalar::from_int(1));
        assert!(hessian_complex_at(&cubic_chart(), &off).is_err());
    }

    fn identity_certificate() -> ComparisonCertificate {
        ComparisonCertificate {
            chart_a: cubic_chart(),
            chart_b: CriticalChart {
                base: vec!["xc".to_string()],
                potential: "xc^3".to_string(),
                ..cubic_chart()
            },
            glue_base: vec!["z".to_string()],
            e_count: 1,
            i_funcs: vec!["3*z^2".to_string()],
            a_map: vec!["z".to_string()],
            b_map: vec!["z".to_string()],
            j_matrix: vec![vec!["1".to_string()]],
            k_matrix: vec![vec!["1".to_string()]],
            l_vec: vec!["0".to_string()],
            m_matrix: vec![vec!["0".to_string()]],
            n_tensor: vec![vec![vec!["0".to_string()]]],
        }
    }

    #[test]
    fn identity_certificate_passes_with_zero_witness() {
        let rep = verify_comparison(&identity_certificate()).unwrap();
        assert!(rep.ok, "{:?}", rep.identities);
        assert!(rep.witness.as_ref().unwrap().is_empty());
        assert_eq!(rep.witness_total.as_deref(), Some("0"));
    }

    #[test]
    fn gauge_shifted_certificate_passes_with_nonzero_witness() {
        // H = x^3 against H~ = x~^3 + 9 x~^5: built backwards from M = -z
        let cert = ComparisonCertificate {
            chart_b: CriticalChart {
                base: vec!["xc".to_string()],
                potential: "xc^3 + 9*xc^5".to_string(),
                ..cubic_chart()
            },
            l_vec: vec!["3*z^3".to_string()],
            m_matrix: vec![vec!["-z".to_string()]],
            k_matrix: vec![vec!["1 + 15*z^2".to_string()]],
            ..identity_certificate()
        };
        let rep = verify_comparison(&cert).unwrap();
        for c in &rep.identities {
            assert!(c.ok, "{}: {:?}", c.label, c.residue);
        }
        assert_eq!(rep.witness_total.as_deref(), Some("-9*z^5"));
        let terms = rep.witness.unwrap();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].coefficient, "-9*z^5");
    }

    #[test]
    fn wrong_gauge_data_is_reported() {
        let cert = ComparisonCertificate {
            l_vec: vec!["z".to_string()],
            ..identity_certificate()
        };
        let rep = verify_comparison(&cert).unwrap();
        assert!(!rep.ok);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn coordinate_swap_certificate() {
        // the same saddle seen through swapped coordinates: J is the
        // identity, K the permutation, no gauge data needed
        let cert = ComparisonCertificate {
            chart_a: CriticalChart {
                field: FieldKind::Rational,
                base: vec!["x1".to_string(), "x2".to_string()],
                invertibles: Vec::new(),
                potential: "x1*x2".to_string(),
            },
            chart_b: CriticalChart {
                field: FieldKind::Rational,
                base: vec!["v1".to_string(), "v2".to_string()],
                invertibles: Vec::new(),
                potential: "v1*v2".to_string(),
            },
            glue_base: vec!["z1".to_string(), "z2".to_string()],
            e_count: 2,
            i_funcs: vec!["z2".to_string(), "z1".to_string()],
            a_map: vec!["z1".to_string(), "z2".to_string()],
            b_map: vec!["z2".to_string(), "z1".to_string()],
            j_matrix: vec![
                vec!["1".to_string(), "0".to_string()],
                vec!["0".to_string(), "1".to_string()],
            ],
            k_matrix: vec![
                vec!["0".to_string(), "1".to_string()],
                vec!["1".to_string(), "0".to_string()],
            ],
            l_vec: vec!["0".to_string(), "0".to_string()],
            m_matrix: vec![
                vec!["0".to_string(), "0".to_string()],
                vec!["0".to_string(), "0".to_string()],
            ],
            n_tensor: vec![
                vec![
                    vec!["0".to_string(), "0".to_string()],
                    vec!["0".to_string(), "0".to_string()],
                ],
                vec![
                    vec!["0".to_string(), "0".to_string()],
                    vec!["0".to_string(), "0".to_string()],
                ],
            ],
        };
        let rep = verify_comparison(&cert).unwrap();
        for c in &rep.identities {
            assert!(c.ok, "{}: {:?}", c.label, c.residue);
        }
        assert_eq!(rep.witness_total.as_deref(), Some("0"));
    }

    #[test]
    fn hessian_matches_the_cotangent_restriction() {
        let chart = cubic_chart();
        let spec = derived_critical_locus(&chart).unwrap();
        let model = spec.generate().unwrap();
        let restriction = model.cdga.cotangent_restriction().unwrap();
        let mut origin = BTreeMap::new();
        origin.insert("x".to_string(), Scalar::zero());
        let p = RationalPoint::new(&model.sig, &origin).unwrap();
        let hess = hessian_complex_at(&chart, &origin).unwrap();
        let entry = restriction.blocks[0].entries[0][0]
            .evaluate(&p.values)
            .unwrap();
        assert_eq!(entry, hess.matrix[0][0]);
    }
}
