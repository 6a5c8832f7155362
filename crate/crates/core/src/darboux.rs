//! Generators and verifiers for the explicit shifted-symplectic model
//! families: the classical master equation per family, the generated cdga
//! with its constant-coefficient 2-form and `(Phi, phi)` pair, square-root
//! and middle-splitting variable changes, and the geometric views at
//! shifts -1, -2, -3.

use crate::cdga::StandardFormCdga;
use crate::derham::{contract, de_rham};
use crate::derivation::{euler, partial_apply};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::forms::{cc_to_nc, check_closed, is_strictly_nondegenerate, ClosedForm, PhiPhiPair};
use crate::scalar::Scalar;
use crate::sig::{FieldKind, GenId, SigRef, Signature};
use std::collections::BTreeMap;

/// The model families. `PairedEven { half }` is the fully paired roster in
/// even shift `k = -2*half`, with the alternating differential signs; `half`
/// even is the k ≡ 0 (mod 4) case, `half` odd arises from splitting the
/// middle variables of a strong form over a Gaussian field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Odd { d: u32 },
    DivFour { d: u32 },
    StrongTwo { d: u32 },
    WeakTwo { d: u32 },
    PairedEven { half: u32 },
}

impl Family {
    pub fn k(&self) -> i64 {
        match self {
            Family::Odd { d } => -2 * (*d as i64) - 1,
            Family::DivFour { d } => -4 * (*d as i64),
            Family::StrongTwo { d } => -4 * (*d as i64) - 2,
            Family::WeakTwo { d } => -4 * (*d as i64) - 2,
            Family::PairedEven { half } => -2 * (*half as i64),
        }
    }

    /// Number of rank entries `m_0 ... m_top`.
    pub fn rank_count(&self) -> usize {
        match self {
            Family::Odd { d } => *d as usize + 1,
            Family::DivFour { d } => 2 * *d as usize + 1,
            Family::StrongTwo { d } | Family::WeakTwo { d } => 2 * *d as usize + 2,
            Family::PairedEven { half } => *half as usize + 1,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Family::Odd { .. } => "odd",
            Family::DivFour { .. } => "div_four",
            Family::StrongTwo { .. } => "strong_two",
            Family::WeakTwo { .. } => "weak_two",
            Family::PairedEven { .. } => "paired_even",
        }
    }
}

/// The data of one model: family, base coordinates, ranks, the optional
/// invertible coefficients of the middle pairing, and the Hamiltonian.
#[derive(Debug, Clone)]
pub struct DarbouxSpec {
    pub family: Family,
    pub field: FieldKind,
    /// Degree-0 coordinate names; `m_0 = base.len()`.
    pub base: Vec<String>,
    /// `m_0 ... m_top` per family shape.
    pub ranks: Vec<usize>,
    /// WeakTwo only: invertible base elements `q_1 ... q_{m_top}`.
    pub q: Vec<String>,
    /// Extra designated invertibles beyond the `q` list.
    pub extra_invertibles: Vec<String>,
    /// Hamiltonian of degree k+1, over the roster named by
    /// `x<i>_<j>`, `z<i>_<j>`, `y<i>_<j>` with `<i> = -degree`.
    pub hamiltonian: String,
}

/// One paired or middle slot of the roster.
#[derive(Debug, Clone)]
pub struct RosterSlot {
    pub name: String,
    pub degree: i64,
}

impl DarbouxSpec {
    pub fn k(&self) -> i64 {
        self.family.k()
    }

    /// The generator roster the family prescribes, as (name, degree) pairs,
    /// excluding the degree-0 base.
    pub fn roster(&self) -> Result<Vec<RosterSlot>> {
        if self.ranks.len() != self.family.rank_count() {
            return Err(Error::Shape(format!(
                "family `{}` needs {} ranks, got {}",
                self.family.tag(),
                self.family.rank_count(),
                self.ranks.len()
            )));
        }
        if self.ranks[0] != self.base.len() {
            return Err(Error::Shape(format!(
                "m_0 = {} but {} base coordinates were given",
                self.ranks[0],
                self.base.len()
            )));
        }
        let k = self.k();
        let mut out = Vec::new();
        let mut push = |prefix: &str, degree: i64, count: usize| {
            for j in 1..=count {
                out.push(RosterSlot {
                    name: format!("{prefix}{}_{j}", -degree),
                    degree,
                });
            }
        };
        match self.family {
            Family::Odd { d } => {
                let d = d as i64;
                for i in 1..=d {
                    push("x", -i, self.ranks[i as usize]);
                }
                for i in 0..=d {
                    push("y", i + k, self.ranks[i as usize]);
                }
            }
            Family::DivFour { d } => {
                return DarbouxSpec {
                    family: Family::PairedEven { half: 2 * d },
                    ..self.clone()
                }
                .roster()
            }
            Family::PairedEven { half } => {
                let h = half as i64;
                for i in 1..=h {
                    push("x", -i, self.ranks[i as usize]);
                }
                for i in 0..=h {
                    push("y", i + k, self.ranks[i as usize]);
                }
            }
            Family::StrongTwo { d } | Family::WeakTwo { d } => {
                let d = d as i64;
                for i in 1..=2 * d {
                    push("x", -i, self.ranks[i as usize]);
                }
                push("z", -2 * d - 1, self.ranks[2 * d as usize + 1]);
                for i in 0..=2 * d {
                    push("y", i + k, self.ranks[i as usize]);
                }
            }
        }
        Ok(out)
    }

    pub fn build_signature(&self) -> Result<SigRef> {
        if let Family::WeakTwo { d } = self.family {
            let mid = self.ranks.get(2 * d as usize + 1).copied().unwrap_or(0);
            if self.q.len() != mid {
                return Err(Error::Shape(format!(
                    "weak form needs {} invertibles q, got {}",
                    mid,
                    self.q.len()
                )));
            }
        } else if !self.q.is_empty() {
            return Err(Error::Shape(format!(
                "family `{}` takes no q list",
                self.family.tag()
            )));
        }
        let builder = |designated: &[String]| -> Result<SigRef> {
            let mut b = Signature::builder(self.field).base_vars(&self.base);
            for slot in self.roster()? {
                b = b.generator(&slot.name, slot.degree);
            }
            for q in designated {
                b = b.invertible(q);
            }
            for extra in &self.extra_invertibles {
                b = b.invertible(extra);
            }
            b.build()
        };
        // constant q entries are units already and must not be designated
        let bare = builder(&[])?;
        let mut designated = Vec::new();
        for q in &self.q {
            let e = Element::parse(&bare, q)?;
            if e.is_zero() {
                return Err(Error::Shape(format!("q entry `{q}` is zero")));
            }
            if e.as_scalar().is_none() {
                designated.push(q.clone());
            }
        }
        builder(&designated)
    }

    pub fn parse_hamiltonian(&self, sig: &SigRef) -> Result<Element> {
        let h = Element::parse(sig, &self.hamiltonian)?;
        let k = self.k();
        if !h.is_homogeneous(k + 1, 0) {
            return Err(Error::NotHomogeneous {
                degree: k + 1,
                weight: 0,
                found: h.render(),
            });
        }
        if !h.is_form_free() {
            return Err(Error::Shape(
                "Hamiltonian contains one-form symbols".to_string(),
            ));
        }
        Ok(h)
    }

    fn q_elements(&self, sig: &SigRef) -> Result<Vec<Element>> {
        self.q.iter().map(|src| Element::parse(sig, src)).collect()
    }

    /// Pairs `(x-name, y-name)` by slot, including the degree-0 tier where
    /// the x-side is a base coordinate, and the middle `z` names.
    fn paired_names(&self) -> Result<(Vec<(String, String, i64)>, Vec<String>)> {
        let k = self.k();
        let mut pairs = Vec::new();
        let mut middles = Vec::new();
        let max_x = match self.family {
            Family::Odd { d } => d as i64,
            Family::DivFour { d } => 2 * d as i64,
            Family::PairedEven { half } => half as i64,
            Family::StrongTwo { d } | Family::WeakTwo { d } => 2 * d as i64,
        };
        for i in 0..=max_x {
            for j in 1..=self.ranks[i as usize] {
                let xname = if i == 0 {
                    self.base[j - 1].clone()
                } else {
                    format!("x{i}_{j}")
                };
                let yname = format!("y{}_{j}", -(i + k));
                pairs.push((xname, yname, i));
            }
        }
        if let Family::StrongTwo { d } | Family::WeakTwo { d } = self.family {
            let mid = self.ranks[2 * d as usize + 1];
            for j in 1..=mid {
                middles.push(format!("z{}_{j}", 2 * d + 1));
            }
        }
        Ok((pairs, middles))
    }

    /// The classical master equation of the family, evaluated symbolically.
    pub fn check_master(&self) -> Result<MasterReport> {
        let sig = self.build_signature()?;
        let h = self.parse_hamiltonian(&sig)?;
        let residue = self.master_residue(&sig, &h)?;
        Ok(MasterReport {
            ok: residue.is_zero(),
            residue,
        })
    }

    fn master_residue(&self, sig: &SigRef, h: &Element) -> Result<Element> {
        let (pairs, middles) = self.paired_names()?;
        let alternating = !matches!(self.family, Family::Odd { .. });
        let mut acc = Element::zero(sig);
        for (xname, yname, i) in &pairs {
            if *i == 0 {
                continue;
            }
            let gx = sig.require(xname)?;
            let gy = sig.require(yname)?;
            let hx = partial_apply(sig, gx, h)?;
            let hy = partial_apply(sig, gy, h)?;
            let mut term = hx.mul(&hy)?;
            if alternating && i % 2 == 0 {
                term = term.neg();
            }
            acc = acc.add(&term)?;
        }
        let quarter = Scalar::from_ratio(1, 4);
        match self.family {
            Family::StrongTwo { .. } => {
                for zname in &middles {
                    let gz = sig.require(zname)?;
                    let hz = partial_apply(sig, gz, h)?;
                    acc = acc.add(&hz.mul(&hz)?.scale(&quarter))?;
                }
            }
            Family::WeakTwo { .. } => {
                let qs = self.q_elements(sig)?;
                for (zname, q) in middles.iter().zip(&qs) {
                    let gz = sig.require(zname)?;
                    let hz = partial_apply(sig, gz, h)?;
                    acc = acc.add(&hz.mul(&hz)?.scale(&quarter).div(q)?)?;
                }
            }
            _ => {}
        }
        Ok(acc)
    }

    /// The family's differential assignments (names to values). The signs
    /// are the unique ones making the differential the Hamiltonian field of
    /// `H` for the family 2-form under the left-partial convention; this is
    /// re-verified symbolically by `generate`.
    fn differential(&self, sig: &SigRef, h: &Element) -> Result<BTreeMap<String, Element>> {
        let (pairs, middles) = self.paired_names()?;
        let alternating = !matches!(self.family, Family::Odd { .. });
        let mut out = BTreeMap::new();
        for (xname, yname, i) in &pairs {
            let gx = sig.require(xname)?;
            let gy = sig.require(yname)?;
            let hx = partial_apply(sig, gx, h)?;
            let hy = partial_apply(sig, gy, h)?;
            if *i == 0 {
                // no degree-reason room for d on the base side
                if !hy.is_zero() {
                    return Err(Error::Shape(format!(
                        "partial of H along `{yname}` should vanish for degree reasons, got {}",
                        hy.render()
                    )));
                }
            } else if !hy.is_zero() {
                out.insert(xname.clone(), hy);
            }
            let mut dy = hx;
            if alternating && i % 2 == 0 {
                dy = dy.neg();
            }
            if !dy.is_zero() {
                out.insert(yname.clone(), dy);
            }
        }
        match self.family {
            Family::StrongTwo { .. } => {
                let half = Scalar::from_ratio(1, 2);
                for zname in &middles {
                    let gz = sig.require(zname)?;
                    let dz = partial_apply(sig, gz, h)?.scale(&half);
                    if !dz.is_zero() {
                        out.insert(zname.clone(), dz);
                    }
                }
            }
            Family::WeakTwo { .. } => {
                let half = Scalar::from_ratio(1, 2);
                let qs = self.q_elements(sig)?;
                for (zname, q) in middles.iter().zip(&qs) {
                    let gz = sig.require(zname)?;
                    let dz = partial_apply(sig, gz, h)?.scale(&half).div(q)?;
                    if !dz.is_zero() {
                        out.insert(zname.clone(), dz);
                    }
                }
                // correction to d on the top-tier y's over a variable metric
                for (i0, xname) in self.base.iter().enumerate() {
                    let yname = format!("y{}_{}", -self.k(), i0 + 1);
                    let gx = sig.require(xname)?;
                    let mut corr = Element::zero(sig);
                    for (zname, q) in middles.iter().zip(&qs) {
                        let gz = sig.require(zname)?;
                        let z = Element::generator(sig, gz);
                        let dq = partial_apply(sig, gx, q)?;
                        let hz = partial_apply(sig, gz, h)?;
                        let term = z
                            .mul(&dq)?
                            .mul(&hz)?
                            .scale(&Scalar::from_ratio(1, 2))
                            .div(q)?;
                        corr = corr.add(&term)?;
                    }
                    if corr.is_zero() {
                        continue;
                    }
                    let cur = out.remove(&yname).unwrap_or_else(|| Element::zero(sig));
                    let nv = cur.add(&corr)?;
                    if !nv.is_zero() {
                        out.insert(yname, nv);
                    }
                }
            }
            _ => {}
        }
        Ok(out)
    }

    /// The constant-coefficient 2-form of the family.
    fn two_form(&self, sig: &SigRef) -> Result<Element> {
        let (pairs, middles) = self.paired_names()?;
        let ddr = de_rham(sig);
        let mut acc = Element::zero(sig);
        for (xname, yname, _) in &pairs {
            let xi_x = Element::generator(sig, sig.xi_of(sig.require(xname)?).unwrap());
            let xi_y = Element::generator(sig, sig.xi_of(sig.require(yname)?).unwrap());
            acc = acc.add(&xi_y.mul(&xi_x)?)?;
        }
        match self.family {
            Family::StrongTwo { .. } => {
                for zname in &middles {
                    let xi_z = Element::generator(sig, sig.xi_of(sig.require(zname)?).unwrap());
                    acc = acc.add(&xi_z.mul(&xi_z)?)?;
                }
            }
            Family::WeakTwo { .. } => {
                let qs = self.q_elements(sig)?;
                for (zname, q) in middles.iter().zip(&qs) {
                    let gz = sig.require(zname)?;
                    let z = Element::generator(sig, gz);
                    let xi_z = Element::generator(sig, sig.xi_of(gz).unwrap());
                    let dqz = ddr.apply(&q.mul(&z)?)?;
                    acc = acc.add(&dqz.mul(&xi_z)?)?;
                }
            }
            _ => {}
        }
        Ok(acc)
    }

    /// Generate the full package and verify every postcondition before
    /// returning: the master equation, `d∘d = 0`, closedness, `d_dR phi =
    /// omega0`, `d_dR Phi + d phi = 0`, and strict nondegeneracy.
    pub fn generate(&self) -> Result<GeneratedModel> {
        let sig = self.build_signature()?;
        let h = self.parse_hamiltonian(&sig)?;
        let master = self.master_residue(&sig, &h)?;
        if !master.is_zero() {
            return Err(Error::MasterEquation(master.render()));
        }
        let assignments = self.differential(&sig, &h)?;
        let cdga = StandardFormCdga::build(&sig, assignments)?;
        let omega0 = self.two_form(&sig)?;
        let k = self.k();

        // the differential must be the Hamiltonian field of H for omega0
        let iota_q = contract(cdga.differential())?;
        let ddr = de_rham(&sig);
        let hamil_residue = iota_q.apply(&omega0)?.sub(&ddr.apply(&h)?)?;
        if !hamil_residue.is_zero() {
            return Err(Error::Shape(format!(
                "i_Q omega0 - d_dR H = {}",
                hamil_residue.render()
            )));
        }

        let iota_e = contract(&euler(&sig))?;
        let varphi = iota_e.apply(&omega0)?.scale(&Scalar::from_ratio(1, k));
        let phi = h.scale(&Scalar::from_ratio(1, k));
        let pair = PhiPhiPair::new(k, phi, varphi);
        pair.validate(&cdga)?;

        let omega = cc_to_nc(&cdga, &pair)?;
        if !omega
            .omega0()
            .unwrap_or(&Element::zero(&sig))
            .equals(&omega0)?
        {
            return Err(Error::Shape(format!(
                "d_dR phi differs from the family 2-form by {}",
                omega.omega0().unwrap().sub(&omega0)?.render()
            )));
        }
        let rep = check_closed(&cdga, &omega)?;
        if !rep.closed {
            return Err(Error::NotClosed(rep.residues[0].1.render()));
        }
        if !is_strictly_nondegenerate(&cdga, &omega0)? {
            return Err(Error::NotStrictlyNondegenerate(
                "generated 2-form failed the strictness check".to_string(),
            ));
        }
        Ok(GeneratedModel {
            spec: self.clone(),
            sig,
            cdga,
            omega,
            pair,
            hamiltonian: h,
        })
    }
}

#[derive(Debug, Clone)]
pub struct MasterReport {
    pub ok: bool,
    pub residue: Element,
}

#[derive(Debug, Clone)]
pub struct GeneratedModel {
    pub spec: DarbouxSpec,
    pub sig: SigRef,
    pub cdga: StandardFormCdga,
    pub omega: ClosedForm,
    pub pair: PhiPhiPair,
    pub hamiltonian: Element,
}

impl GeneratedModel {
    pub fn omega0(&self) -> &Element {
        self.omega
            .omega0()
            .expect("generated form has a 2-form part")
    }
}

/// A substitution witness for a variable change between two model rosters:
/// for each generator name of the target, its image over the source table.
#[derive(Debug, Clone)]
pub struct VariableMap {
    pub images: BTreeMap<String, String>,
}

fn transport(
    sig_from: &SigRef,
    sig_to: &SigRef,
    images: &BTreeMap<GenId, Element>,
    e: &Element,
) -> Result<Element> {
    let _ = sig_from;
    e.substitute(sig_to, images)
}

/// Build the generator-to-element substitution map for a variable change, and
/// extend it to one-form symbols by `dg -> d_dR(image of g)`.
fn substitution_map(
    from: &SigRef,
    to: &SigRef,
    algebra_images: &BTreeMap<String, Element>,
) -> Result<BTreeMap<GenId, Element>> {
    let ddr = de_rham(to);
    let mut map = BTreeMap::new();
    for g in from.algebra_gens() {
        let img = match algebra_images.get(from.name(g)) {
            Some(v) => v.clone(),
            None => Element::generator(to, to.require(from.name(g))?),
        };
        let xi = from.xi_of(g).unwrap();
        map.insert(xi, ddr.apply(&img)?);
        map.insert(g, img);
    }
    Ok(map)
}

/// Verify that a substitution intertwines two generated models: it must be a
/// cdga map carrying the differential, the 2-form and the Hamiltonian of
/// `from` to those of `to`.
fn verify_substitution(
    from: &GeneratedModel,
    to: &GeneratedModel,
    images: &BTreeMap<GenId, Element>,
) -> Result<()> {
    for g in from.sig.algebra_gens() {
        let lhs = transport(&from.sig, &to.sig, images, &from.cdga.d_of_gen(g))?;
        let rhs = to.cdga.d(&images.get(&g).cloned().unwrap())?;
        if !lhs.equals(&rhs)? {
            return Err(Error::Shape(format!(
                "substitution does not intertwine d on `{}`: {}",
                from.sig.name(g),
                lhs.sub(&rhs)?.render()
            )));
        }
    }
    let omega_img = transport(&from.sig, &to.sig, images, from.omega0())?;
    if !omega_img.equals(to.omega0())? {
        return Err(Error::Shape(format!(
            "substitution does not carry the 2-form: residue {}",
            omega_img.sub(to.omega0())?.render()
        )));
    }
    let h_img = transport(&from.sig, &to.sig, images, &from.hamiltonian)?;
    if !h_img.equals(&to.hamiltonian)? {
        return Err(Error::Shape(format!(
            "substitution does not carry the Hamiltonian: residue {}",
            h_img.sub(&to.hamiltonian)?.render()
        )));
    }
    Ok(())
}

/// Rescale the middle variables of a weak form by explicit square roots of
/// the `q_j`, producing a strong form. Roots outside the base ring would
/// need an etale cover; only explicit square roots are supported.
pub fn weak_to_strong(spec: &DarbouxSpec, roots: &[String]) -> Result<(DarbouxSpec, VariableMap)> {
    let d = match spec.family {
        Family::WeakTwo { d } => d,
        _ => {
            return Err(Error::Unsupported(
                "weak_to_strong needs a weak-form spec".to_string(),
            ))
        }
    };
    let sig = spec.build_signature()?;
    if roots.len() != spec.q.len() {
        return Err(Error::Shape(format!(
            "need {} roots, got {}",
            spec.q.len(),
            roots.len()
        )));
    }
    let qs = spec.q_elements(&sig)?;
    let mut root_elems = Vec::new();
    for (r_src, q) in roots.iter().zip(&qs) {
        let r = Element::parse(&sig, r_src)?;
        if !r.mul(&r)?.equals(q)? {
            return Err(Error::Unsupported(format!(
                "`{r_src}` squared is not `{}`; adjoining square roots is not supported",
                q.render()
            )));
        }
        root_elems.push(r);
    }

    // strong spec over the same roster, with z_j replaced by r_j z_j in H
    let strong = DarbouxSpec {
        family: Family::StrongTwo { d },
        field: spec.field,
        base: spec.base.clone(),
        ranks: spec.ranks.clone(),
        q: Vec::new(),
        // keep the old q designated so the rescaled H may divide by them
        extra_invertibles: {
            let mut v = spec.q.clone();
            v.extend(spec.extra_invertibles.iter().cloned());
            v
        },
        hamiltonian: String::new(),
    };
    let strong_sig = strong.build_signature()?;

    // H~ = H[z_j := (r_j / q_j) z~_j]; then z~_j = r_j z_j maps H~ back to H
    let h = spec.parse_hamiltonian(&sig)?;
    let mut h_sub: BTreeMap<GenId, Element> = BTreeMap::new();
    let mid = spec.ranks[2 * d as usize + 1];
    for j in 1..=mid {
        let zname = format!("z{}_{j}", 2 * d + 1);
        let gz = sig.require(&zname)?;
        let tz = strong_sig.require(&zname)?;
        let r_t = root_elems[j - 1].substitute(&strong_sig, &BTreeMap::new())?;
        let q_t = qs[j - 1].substitute(&strong_sig, &BTreeMap::new())?;
        let img = Element::generator(&strong_sig, tz).mul(&r_t.div(&q_t)?)?;
        h_sub.insert(gz, img);
    }
    let h_tilde = h.substitute(&strong_sig, &h_sub)?;
    let strong = DarbouxSpec {
        hamiltonian: h_tilde.render(),
        ..strong
    };

    // the witness: strong coordinates in terms of weak ones
    let mut images = BTreeMap::new();
    for j in 1..=mid {
        let zname = format!("z{}_{j}", 2 * d + 1);
        images.insert(
            zname.clone(),
            root_elems[j - 1]
                .mul(&Element::generator(&sig, sig.require(&zname)?))?
                .render(),
        );
    }
    let map = VariableMap { images };

    // generate both sides and check the substitution intertwines them
    let weak_model = spec.generate()?;
    let strong_model = strong.generate()?;
    let mut alg_images = BTreeMap::new();
    for (name, src) in &map.images {
        alg_images.insert(name.clone(), Element::parse(&weak_model.sig, src)?);
    }
    let full = substitution_map(&strong_model.sig, &weak_model.sig, &alg_images)?;
    verify_substitution(&strong_model, &weak_model, &full)?;

    Ok((strong, map))
}

/// Split the self-paired middle variables of a strong form into conjugate
/// pairs over a Gaussian field; needs an even middle rank.
pub fn split_middle(spec: &DarbouxSpec) -> Result<(DarbouxSpec, VariableMap)> {
    let d = match spec.family {
        Family::StrongTwo { d } => d,
        _ => {
            return Err(Error::Unsupported(
                "split_middle needs a strong-form spec".to_string(),
            ))
        }
    };
    if spec.field != FieldKind::Gaussian {
        return Err(Error::Unsupported(
            "splitting the middle variables needs the Gaussian field flag".to_string(),
        ));
    }
    let mid = spec.ranks[2 * d as usize + 1];
    if mid % 2 != 0 {
        return Err(Error::Shape(format!(
            "middle rank {mid} is odd; the virtual dimension is odd and the middle cannot split"
        )));
    }
    let half_rank = mid / 2;
    let halfidx = 2 * d + 1;

    let mut ranks = spec.ranks.clone();
    ranks[halfidx as usize] = half_rank;
    let paired = DarbouxSpec {
        family: Family::PairedEven { half: halfidx },
        field: spec.field,
        base: spec.base.clone(),
        ranks,
        q: Vec::new(),
        extra_invertibles: spec.extra_invertibles.clone(),
        hamiltonian: String::new(),
    };
    let paired_sig = paired.build_signature()?;
    let spec_sig = spec.build_signature()?;

    // z_j = (x_j + y_j)/2, z_{j+m/2} = (x_j - y_j)/(2i)
    let h = spec.parse_hamiltonian(&spec_sig)?;
    let mut to_paired: BTreeMap<GenId, Element> = BTreeMap::new();
    let half = Scalar::from_ratio(1, 2);
    let minus_half_i = &Scalar::from_ratio(-1, 2) * &Scalar::i();
    for j in 1..=half_rank {
        let xg = paired_sig.require(&format!("x{halfidx}_{j}"))?;
        let yg = paired_sig.require(&format!("y{halfidx}_{j}"))?;
        let xe = Element::generator(&paired_sig, xg);
        let ye = Element::generator(&paired_sig, yg);
        let z1 = spec_sig.require(&format!("z{halfidx}_{j}"))?;
        let z2 = spec_sig.require(&format!("z{halfidx}_{}", j + half_rank))?;
        to_paired.insert(z1, xe.add(&ye)?.scale(&half));
        to_paired.insert(z2, xe.sub(&ye)?.scale(&minus_half_i));
    }
    let h_tilde = h.substitute(&paired_sig, &to_paired)?;
    let paired = DarbouxSpec {
        hamiltonian: h_tilde.render(),
        ..paired
    };

    // witness: new coordinates in terms of the old ones
    let mut images = BTreeMap::new();
    for j in 1..=half_rank {
        images.insert(
            format!("x{halfidx}_{j}"),
            format!("z{halfidx}_{j} + i*z{halfidx}_{}", j + half_rank),
        );
        images.insert(
            format!("y{halfidx}_{j}"),
            format!("z{halfidx}_{j} - i*z{halfidx}_{}", j + half_rank),
        );
    }
    let map = VariableMap { images };

    if mid > 0 || !spec.hamiltonian.trim().is_empty() {
        let strong_model = spec.generate()?;
        let paired_model = paired.generate()?;
        let mut alg_images = BTreeMap::new();
        for (name, src) in &map.images {
            alg_images.insert(name.clone(), Element::parse(&strong_model.sig, src)?);
        }
        let full = substitution_map(&paired_model.sig, &strong_model.sig, &alg_images)?;
        verify_substitution(&paired_model, &strong_model, &full)?;
    }

    Ok((paired, map))
}

/// The geometry a low-shift model encodes.
#[derive(Debug, Clone)]
pub enum GeometricView {
    /// k = -1: a potential on a smooth base.
    Critical {
        base: Vec<String>,
        potential: String,
    },
    /// k = -2: a quadratic form `diag(1/q_j)` and a section `s` with
    /// `sum q_j^{-1} s_j^2 = 0`.
    QuadraticZero {
        base: Vec<String>,
        q: Vec<String>,
        sections: Vec<String>,
    },
    /// k = -3: sections `s` and an antisymmetric `t` with `t∘s = 0`.
    SectionPair {
        base: Vec<String>,
        sections: Vec<String>,
        two_form: Vec<Vec<String>>,
    },
}

/// Extract the geometric data of a k in {-1, -2, -3} spec.
pub fn geometric_view(spec: &DarbouxSpec) -> Result<GeometricView> {
    let sig = spec.build_signature()?;
    let h = spec.parse_hamiltonian(&sig)?;
    match (spec.family, spec.k()) {
        (Family::Odd { d: 0 }, -1) => Ok(GeometricView::Critical {
            base: spec.base.clone(),
            potential: h.render(),
        }),
        (Family::WeakTwo { d: 0 }, -2) | (Family::StrongTwo { d: 0 }, -2) => {
            let mid = spec.ranks[1];
            let mut sections = Vec::new();
            for j in 1..=mid {
                let gz = sig.require(&format!("z1_{j}"))?;
                let s = partial_apply(&sig, gz, &h)?;
                if !s.is_base_only() {
                    return Err(Error::Shape(format!(
                        "section coefficient of z1_{j} is not a base element: {}",
                        s.render()
                    )));
                }
                sections.push(s.render());
            }
            let q = if matches!(spec.family, Family::StrongTwo { .. }) {
                vec!["1".to_string(); mid]
            } else {
                spec.q.clone()
            };
            Ok(GeometricView::QuadraticZero {
                base: spec.base.clone(),
                q,
                sections,
            })
        }
        (Family::Odd { d: 1 }, -3) => {
            let m1 = spec.ranks[1];
            let mut sections = Vec::new();
            for j in 1..=m1 {
                let gy = sig.require(&format!("y2_{j}"))?;
                sections.push(partial_apply(&sig, gy, &h)?.render());
            }
            let mut two_form = vec![vec![String::new(); m1]; m1];
            let half = Scalar::from_ratio(1, 2);
            for a in 1..=m1 {
                let ga = sig.require(&format!("x1_{a}"))?;
                let ha = partial_apply(&sig, ga, &h)?;
                for b in 1..=m1 {
                    let gb = sig.require(&format!("x1_{b}"))?;
                    let t_ab = partial_apply(&sig, gb, &ha)?.scale(&half);
                    if !t_ab.is_base_only() {
                        return Err(Error::Shape(
                            "the two-form coefficients must be base elements".to_string(),
                        ));
                    }
                    two_form[a - 1][b - 1] = t_ab.render();
                }
            }
            Ok(GeometricView::SectionPair {
                base: spec.base.clone(),
                sections,
                two_form,
            })
        }
        _ => Err(Error::Unsupported(format!(
            "no geometric view for family `{}` at k = {}",
            spec.family.tag(),
            spec.k()
        ))),
    }
}

/// Rebuild a spec from its geometric data; the view invariants are
/// re-derived through the master equation of the produced spec.
pub fn from_geometric(field: FieldKind, view: &GeometricView) -> Result<DarbouxSpec> {
    match view {
        GeometricView::Critical { base, potential } => Ok(DarbouxSpec {
            family: Family::Odd { d: 0 },
            field,
            base: base.clone(),
            ranks: vec![base.len()],
            q: Vec::new(),
            extra_invertibles: Vec::new(),
            hamiltonian: potential.clone(),
        }),
        GeometricView::QuadraticZero { base, q, sections } => {
            if q.len() != sections.len() {
                return Err(Error::Shape(
                    "q and s must have the same length".to_string(),
                ));
            }
            let all_units = q.iter().all(|s| s.trim() == "1");
            let family = if all_units {
                Family::StrongTwo { d: 0 }
            } else {
                Family::WeakTwo { d: 0 }
            };
            let spec0 = DarbouxSpec {
                family,
                field,
                base: base.clone(),
                ranks: vec![base.len(), sections.len()],
                q: if all_units { Vec::new() } else { q.clone() },
                extra_invertibles: Vec::new(),
                hamiltonian: "0".to_string(),
            };
            let sig = spec0.build_signature()?;
            let mut h = Element::zero(&sig);
            for (j, s) in sections.iter().enumerate() {
                let z = Element::generator(&sig, sig.require(&format!("z1_{}", j + 1))?);
                h = h.add(&z.mul(&Element::parse(&sig, s)?)?)?;
            }
            Ok(DarbouxSpec {
                hamiltonian: h.render(),
                ..spec0
            })
        }
        GeometricView::SectionPair {
            base,
            sections,
            two_form,
        } => {
            let m1 = sections.len();
            let spec0 = DarbouxSpec {
                family: Family::Odd { d: 1 },
                field,
                base: base.clone(),
                ranks: vec![base.len(), m1],
                q: Vec::new(),
                extra_invertibles: Vec::new(),
                hamiltonian: "0".to_string(),
            };
            let sig = spec0.build_signature()?;
            let mut h = Element::zero(&sig);
            for (j, s) in sections.iter().enumerate() {
                let y = Element::generator(&sig, sig.require(&format!("y2_{}", j + 1))?);
                h = h.add(&y.mul(&Element::parse(&sig, s)?)?)?;
            }
            for a in 0..m1 {
                for b in 0..m1 {
                    let t = Element::parse(&sig, &two_form[a][b])?;
                    let tn = Element::parse(&sig, &two_form[b][a])?.neg();
                    if !t.equals(&tn)? {
                        return Err(Error::Shape(format!(
                            "t must be antisymmetric; t[{a}][{b}] + t[{b}][{a}] != 0"
                        )));
                    }
                    let xa = Element::generator(&sig, sig.require(&format!("x1_{}", a + 1))?);
                    let xb = Element::generator(&sig, sig.require(&format!("x1_{}", b + 1))?);
                    h = h.add(&xa.mul(&xb)?.mul(&t)?)?;
                }
            }
            Ok(DarbouxSpec {
                hamiltonian: h.render(),
                ..spec0
            })
        }
    }
}
