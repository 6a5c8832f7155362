//! Seeded random data for the randomized identity suites: homogeneous
//! elements over small tables, vector fields, and structured solutions of
//! the classical master equation in every model family. All sampling is
//! ChaCha-seeded so reports are reproducible byte for byte.

use crate::darboux::{DarbouxSpec, Family};
use crate::derivation::Derivation;
use crate::element::Element;
use crate::error::Result;
use crate::monomial::Monomial;
use crate::scalar::Scalar;
use crate::sig::{FieldKind, GenId, SigRef};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All monomials with the given bidegree, base exponents capped; the pool
/// the samplers draw from.
pub fn monomial_pool(sig: &SigRef, degree: i64, weight: i64, base_cap: u32) -> Vec<Monomial> {
    let gens: Vec<GenId> = sig.all_gens().collect();
    let mut out = Vec::new();
    let mut stack: Vec<(GenId, u32)> = Vec::new();
    fn recurse(
        sig: &SigRef,
        gens: &[GenId],
        at: usize,
        deg: i64,
        wt: i64,
        base_cap: u32,
        stack: &mut Vec<(GenId, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if deg == 0 && wt == 0 {
            out.push(Monomial::from_factors(sig, stack).expect("caps respect parity"));
            // keep extending: only degree-0 weight-0 gens could extend, and
            // those are base generators handled by the cap loop below
        }
        if at == gens.len() {
            return;
        }
        let g = gens[at];
        let gd = sig.degree(g);
        let gw = sig.weight(g);
        let max_e = if sig.is_odd(g) {
            1
        } else if gd == 0 && gw == 0 {
            base_cap
        } else {
            // negative even degree: bounded by the remaining degree
            if gd == 0 {
                base_cap
            } else {
                ((deg / gd).max(0) as u32).min(base_cap.max(2))
            }
        };
        for e in 0..=max_e {
            let nd = deg - gd * e as i64;
            let nw = wt - gw * e as i64;
            // degrees are nonpositive and weights nonnegative
            if nd > 0 && gd < 0 {
                break;
            }
            if nw < 0 {
                break;
            }
            if e > 0 {
                stack.push((g, e));
            }
            if nd >= i64::MIN && nw >= 0 {
                recurse(sig, gens, at + 1, nd, nw, base_cap, stack, out);
            }
            if e > 0 {
                stack.pop();
            }
        }
    }
    recurse(
        sig, &gens, 0, degree, weight, base_cap, &mut stack, &mut out,
    );
    out.sort();
    out.dedup();
    // only keep exact matches (the recursion pushes at deg == 0 && wt == 0
    // before consuming later generators, which can duplicate the unit)
    out.retain(|m| m.degree(sig) == degree && m.weight(sig) == weight);
    out
}

fn small_scalar(rng: &mut ChaCha8Rng, gaussian: bool) -> Scalar {
    let pick = |rng: &mut ChaCha8Rng| -> i64 {
        let v: i64 = rng.gen_range(-3..=3);
        if v == 0 {
            1
        } else {
            v
        }
    };
    let den = rng.gen_range(1..=2);
    let mut s = Scalar::from_ratio(pick(rng), den);
    if gaussian && rng.gen_bool(0.3) {
        s = &s + &(&Scalar::i() * &Scalar::from_int(pick(rng)));
    }
    s
}

/// A random homogeneous element of the given bidegree with a few terms.
pub fn random_homogeneous(
    sig: &SigRef,
    degree: i64,
    weight: i64,
    rng: &mut ChaCha8Rng,
    max_terms: usize,
) -> Element {
    let pool = monomial_pool(sig, degree, weight, 2);
    if pool.is_empty() {
        return Element::zero(sig);
    }
    let n = rng.gen_range(1..=max_terms.max(1));
    let mut acc = Element::zero(sig);
    for _ in 0..n {
        let m = pool[rng.gen_range(0..pool.len())].clone();
        let c = small_scalar(rng, sig.gaussian());
        acc = acc
            .add(&Element::monomial(sig, m, c))
            .expect("same signature");
    }
    acc
}

/// A random element mixing a few homogeneous pieces of bounded bidegree.
pub fn random_element(sig: &SigRef, rng: &mut ChaCha8Rng) -> Element {
    let mut acc = Element::zero(sig);
    let pieces = rng.gen_range(1..=3);
    for _ in 0..pieces {
        let degree = -rng.gen_range(0..=4i64);
        let weight = rng.gen_range(0..=2i64);
        let h = random_homogeneous(sig, degree, weight, rng, 2);
        acc = acc.add(&h).expect("same signature");
    }
    acc
}

/// A random vector field of the given degree: weight-0 values on the
/// algebra generators.
pub fn random_vector_field(sig: &SigRef, degree: i64, rng: &mut ChaCha8Rng) -> Result<Derivation> {
    let mut values = BTreeMap::new();
    for g in sig.algebra_gens() {
        if rng.gen_bool(0.25) {
            continue;
        }
        let v = random_homogeneous(sig, sig.degree(g) + degree, 0, rng, 2);
        if !v.is_zero() {
            values.insert(g, v);
        }
    }
    Derivation::new(sig, degree, 0, values)
}

/// A nonzero homogeneous weight-0 element of bounded degree for bracket
/// arguments over a shift-k model.
pub fn random_poisson_arg(sig: &SigRef, k: i64, rng: &mut ChaCha8Rng) -> Element {
    let deg = -rng.gen_range(0..=(-k + 1));
    let e = random_homogeneous(sig, deg, 0, rng, 2);
    if e.is_zero() {
        Element::one(sig)
    } else {
        e
    }
}

fn random_base_poly(names: &[&str], rng: &mut ChaCha8Rng) -> String {
    // a small polynomial in the base coordinates, degree <= 2
    let mut terms: Vec<String> = Vec::new();
    let n = rng.gen_range(1..=2);
    for _ in 0..n {
        let c: i64 = {
            let v = rng.gen_range(-2..=2i64);
            if v == 0 {
                1
            } else {
                v
            }
        };
        let var = names[rng.gen_range(0..names.len())];
        let pow = rng.gen_range(0..=2);
        let t = match pow {
            0 => format!("{c}"),
            1 => format!("{c}*{var}"),
            _ => format!("{c}*{var}^{pow}"),
        };
        terms.push(t);
    }
    terms.join(" + ")
}

/// A structured random spec per family: the master equation is satisfied by
/// construction, never by rejection sampling.
pub fn random_spec(family: Family, rng: &mut ChaCha8Rng) -> DarbouxSpec {
    let m0 = rng.gen_range(1..=2usize);
    let base: Vec<String> = (1..=m0).map(|i| format!("w{i}")).collect();
    let names: Vec<&str> = base.iter().map(|s| s.as_str()).collect();
    match family {
        Family::Odd { d: 0 } => DarbouxSpec {
            family,
            field: FieldKind::Rational,
            ranks: vec![m0],
            q: Vec::new(),
            extra_invertibles: Vec::new(),
            hamiltonian: random_base_poly(&names, rng),
            base,
        },
        Family::Odd { d } => {
            // H built from the y tiers only, so every x-partial vanishes
            let m1 = rng.gen_range(1..=2usize);
            let mut ranks = vec![m0];
            for _ in 1..=d {
                ranks.push(m1);
            }
            // y of degree k+1 = -2d pairs with x^{-1}: tier name y{2d}
            let mut terms = Vec::new();
            for j in 1..=m1 {
                terms.push(format!(
                    "y{}_{j}*({})",
                    2 * d,
                    random_base_poly(&names, rng)
                ));
            }
            DarbouxSpec {
                family,
                field: FieldKind::Rational,
                ranks,
                q: Vec::new(),
                extra_invertibles: Vec::new(),
                hamiltonian: terms.join(" + "),
                base,
            }
        }
        Family::DivFour { d } | Family::PairedEven { half: d } => {
            let h = match family {
                Family::DivFour { d } => 2 * d,
                Family::PairedEven { half } => half,
                _ => unreachable!(),
            };
            let m1 = rng.gen_range(1..=2usize);
            let mut ranks = vec![m0];
            for _ in 1..=h {
                ranks.push(m1);
            }
            let _ = d;
            // H in the y tier of degree k+1 = 1-2h: name y{2h-1}
            let mut terms = Vec::new();
            for j in 1..=m1 {
                terms.push(format!(
                    "y{}_{j}*({})",
                    2 * h - 1,
                    random_base_poly(&names, rng)
                ));
            }
            DarbouxSpec {
                family,
                field: FieldKind::Rational,
                ranks,
                q: Vec::new(),
                extra_invertibles: Vec::new(),
                hamiltonian: terms.join(" + "),
                base,
            }
        }
        Family::StrongTwo { d } => {
            // middle rank 0 keeps the quadratic constraint vacuous over the
            // rationals; the z-coupled cases are covered by the weak family
            let m1 = rng.gen_range(1..=2usize);
            let mut ranks = vec![m0];
            for _ in 1..=2 * d {
                ranks.push(m1);
            }
            ranks.push(0);
            let mut terms = vec!["0".to_string()];
            if d >= 1 {
                for j in 1..=m1 {
                    terms.push(format!(
                        "y{}_{j}*({})",
                        4 * d + 1,
                        random_base_poly(&names, rng)
                    ));
                }
            }
            DarbouxSpec {
                family,
                field: FieldKind::Rational,
                ranks,
                q: Vec::new(),
                extra_invertibles: Vec::new(),
                hamiltonian: terms.join(" + "),
                base,
            }
        }
        Family::WeakTwo { d } => {
            // signed pairs: q = (u, -u, ...) with equal sections, so the
            // quadratic terms cancel pairwise; for d >= 1 the coefficients
            // are x-linear to land in degree k+1, and the cross sums vanish
            // because H omits the partnered y tiers
            let pairs = 1usize;
            let mid = 2 * pairs;
            let m1 = rng.gen_range(1..=2usize);
            let mut ranks = vec![m0];
            for _ in 1..=2 * d {
                ranks.push(m1);
            }
            ranks.push(mid);
            let unit = format!("{}^2 + 1", names[0]);
            let mut q = Vec::new();
            for _ in 0..pairs {
                q.push(unit.clone());
                q.push(format!("-({unit})"));
            }
            let zname = 2 * d + 1;
            let mut terms = Vec::new();
            for t in 0..pairs {
                let s = random_base_poly(&names, rng);
                // coefficient of degree -2d next to the degree -2d-1 middle
                let coeff = if d == 0 {
                    format!("({s})")
                } else {
                    format!("x{}_1*({s})", 2 * d)
                };
                terms.push(format!("z{zname}_{}*{coeff}", 2 * t + 1));
                terms.push(format!("z{zname}_{}*{coeff}", 2 * t + 2));
            }
            if d >= 1 {
                for j in 1..=m1 {
                    terms.push(format!(
                        "y{}_{j}*({})",
                        4 * d + 1,
                        random_base_poly(&names, rng)
                    ));
                }
            }
            DarbouxSpec {
                family,
                field: FieldKind::Rational,
                ranks,
                q,
                extra_invertibles: Vec::new(),
                hamiltonian: terms.join(" + "),
                base,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sig::Signature;

    #[test]
    fn pool_respects_bidegree() {
        let sig = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("y", -1)
            .generator("u", -2)
            .build()
            .unwrap();
        let pool = monomial_pool(&sig, -2, 1, 2);
        assert!(!pool.is_empty());
        for m in &pool {
            assert_eq!(m.degree(&sig), -2);
            assert_eq!(m.weight(&sig), 1);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let sig = Signature::builder(FieldKind::Rational)
            .base_var("x")
            .generator("y", -1)
            .build()
            .unwrap();
        let a = random_element(&sig, &mut rng(7));
        let b = random_element(&sig, &mut rng(7));
        assert!(a.equals(&b).unwrap());
    }

    #[test]
    fn structured_specs_satisfy_their_master_equations() {
        let mut r = rng(11);
        for family in [
            Family::Odd { d: 0 },
            Family::Odd { d: 1 },
            Family::WeakTwo { d: 0 },
            Family::DivFour { d: 1 },
            Family::StrongTwo { d: 1 },
        ] {
            for _ in 0..3 {
                let spec = random_spec(family, &mut r);
                let rep = spec.check_master().unwrap();
                assert!(
                    rep.ok,
                    "family {:?}: residue {}",
                    family,
                    rep.residue.render()
                );
            }
        }
    }
}
