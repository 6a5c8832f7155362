//! Canonical monomials in the generators of a table.
//!
//! A monomial is a sorted list of `(generator, exponent)` pairs in table
//! order. Odd-degree generators never carry an exponent above 1: their square
//! is zero. The Koszul sign produced when sorting a product is returned to the
//! caller and absorbed into the owning term's coefficient.

use crate::scalar::Scalar;
use crate::sig::{GenId, Signature};
use std::cmp::Ordering;
use std::collections::BTreeMap;

pub type TermMap = BTreeMap<Monomial, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(GenId, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(g: GenId) -> Self {
        Monomial(vec![(g, 1)])
    }

    /// From unsorted factor data; exponents of the same generator merge.
    /// Returns `None` if an odd generator would acquire exponent >= 2.
    pub fn from_factors(sig: &Signature, factors: &[(GenId, u32)]) -> Option<Self> {
        let mut map: BTreeMap<GenId, u32> = BTreeMap::new();
        for (g, e) in factors {
            if *e == 0 {
                continue;
            }
            *map.entry(*g).or_insert(0) += e;
        }
        for (g, e) in &map {
            if sig.is_odd(*g) && *e > 1 {
                return None;
            }
        }
        Some(Monomial(map.into_iter().collect()))
    }

    pub fn factors(&self) -> &[(GenId, u32)] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent_of(&self, g: GenId) -> u32 {
        self.0
            .iter()
            .find(|(h, _)| *h == g)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn contains(&self, g: GenId) -> bool {
        self.exponent_of(g) > 0
    }

    pub fn degree(&self, sig: &Signature) -> i64 {
        self.0.iter().map(|(g, e)| sig.degree(*g) * *e as i64).sum()
    }

    pub fn weight(&self, sig: &Signature) -> i64 {
        self.0.iter().map(|(g, e)| sig.weight(*g) * *e as i64).sum()
    }

    /// Product with Koszul sign. `None` when an odd generator squares to zero;
    /// otherwise the canonical monomial and whether the sign flips.
    pub fn mul(&self, other: &Monomial, sig: &Signature) -> Option<(Monomial, bool)> {
        // Same odd generator on both sides kills the product.
        for (g, _) in &other.0 {
            if sig.is_odd(*g) && self.contains(*g) {
                return None;
            }
        }
        // Each odd factor of `other` moves left past every odd factor of
        // `self` with a strictly larger table index; each crossing flips.
        let mut flips: u64 = 0;
        let odd_suffix: Vec<(GenId, u64)> = {
            // odd-factor count of `self` strictly after a given generator
            let mut v: Vec<(GenId, u64)> = Vec::with_capacity(self.0.len());
            let mut acc: u64 = 0;
            for (g, e) in self.0.iter().rev() {
                if sig.is_odd(*g) {
                    acc += *e as u64;
                }
                v.push((*g, acc));
            }
            v.reverse();
            v
        };
        for (g, e) in &other.0 {
            if !sig.is_odd(*g) || *e % 2 == 0 {
                continue;
            }
            // count of odd factors in self with index > g
            let count = odd_suffix
                .iter()
                .find(|(h, _)| *h > *g)
                .map(|(_, c)| *c)
                .unwrap_or(0);
            flips += count;
        }

        let mut merged: Vec<(GenId, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.0.len() || j < other.0.len() {
            let take_left = match (self.0.get(i), other.0.get(j)) {
                (Some((a, _)), Some((b, _))) => a <= b,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => unreachable!(),
            };
            if take_left {
                let (g, e) = self.0[i];
                i += 1;
                if let Some(last) = merged.last_mut() {
                    if last.0 == g {
                        last.1 += e;
                        continue;
                    }
                }
                merged.push((g, e));
            } else {
                let (g, e) = other.0[j];
                j += 1;
                if let Some(last) = merged.last_mut() {
                    if last.0 == g {
                        last.1 += e;
                        continue;
                    }
                }
                merged.push((g, e));
            }
        }
        Some((Monomial(merged), flips % 2 == 1))
    }

    /// Remove one power of `g`, keeping position. Panics if absent.
    pub fn strip_one(&self, g: GenId) -> Monomial {
        let mut v = self.0.clone();
        let pos = v.iter().position(|(h, _)| *h == g).expect("factor present");
        if v[pos].1 == 1 {
            v.remove(pos);
        } else {
            v[pos].1 -= 1;
        }
        Monomial(v)
    }

    /// Componentwise divisibility (used by exact division).
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(g, e)| other.exponent_of(*g) >= *e)
    }

    /// Exponent-wise difference `other / self`; caller checks divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        let mut v: Vec<(GenId, u32)> = Vec::new();
        for (g, e) in &other.0 {
            let d = e - self.exponent_of(*g);
            if d > 0 {
                v.push((*g, d));
            }
        }
        Monomial(v)
    }
}

/// Lexicographic order on dense exponent vectors in table order. This is a
/// genuine monomial order (compatible with multiplication), which exact
/// division relies on; it also fixes the canonical printing order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((ga, ea)), Some((gb, eb))) => match ga.cmp(gb) {
                    // smaller generator id present only on one side ⇒ that
                    // side has a positive exponent where the other has zero
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
