//! Unit enumeration, Jacobson radicals, and principal left ideals.

use super::{
    gcd, matrix_entries, matrix_index, radical_of_modulus, GaloisSpec, Ring, RingSpec,
};
use std::collections::BTreeSet;

/// The group of two-sided units of a finite ring, with the inverse map.
/// Finiteness makes one-sided inverses two-sided, which the enumeration
/// verifies for every unit it produces.
#[derive(Debug, Clone)]
pub struct UnitSet {
    elems: Vec<u64>,
    inverse: Vec<u64>,
}

const NOT_A_UNIT: u64 = u64::MAX;

impl UnitSet {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Unit element indices in ascending order.
    pub fn elements(&self) -> &[u64] {
        &self.elems
    }

    pub fn contains(&self, x: u64) -> bool {
        self.inverse.get(x as usize).is_some_and(|&v| v != NOT_A_UNIT)
    }

    pub fn inverse_of(&self, x: u64) -> Option<u64> {
        match self.inverse.get(x as usize) {
            Some(&v) if v != NOT_A_UNIT => Some(v),
            _ => None,
        }
    }

    /// (u, u^-1) pairs in ascending order of u.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.elems.iter().map(move |&u| (u, self.inverse[u as usize]))
    }
}

pub(super) fn enumerate_units(ring: &Ring) -> UnitSet {
    let pairs = unit_pairs(ring.spec());
    let expected = ring.spec().structural_unit_count();
    assert_eq!(
        pairs.len() as u64,
        expected,
        "unit enumeration of {} disagrees with the closed-form count",
        ring.spec()
    );
    let mut inverse = vec![NOT_A_UNIT; ring.size() as usize];
    let mut elems = Vec::with_capacity(pairs.len());
    for &(u, v) in &pairs {
        debug_assert_eq!(ring.mul(u, v), ring.one());
        debug_assert_eq!(ring.mul(v, u), ring.one());
        inverse[u as usize] = v;
        elems.push(u);
    }
    elems.sort_unstable();
    UnitSet { elems, inverse }
}

fn unit_pairs(spec: &RingSpec) -> Vec<(u64, u64)> {
    match spec {
        RingSpec::Zmod { n } => (0..*n)
            .filter(|&a| gcd(a, *n) == 1)
            .map(|a| (a, mod_inverse(a, *n)))
            .collect(),
        RingSpec::Galois(g) => {
            let q = g.order();
            (1..q).map(|a| (a, field_inverse(g, a))).collect()
        }
        RingSpec::Matrix { dim, base } => {
            let q = base.order();
            let d = *dim as usize;
            let size = q.pow((d * d) as u32);
            let mut out = Vec::new();
            for a in 0..size {
                if let Some(inv) = matrix_inverse(base, d, a) {
                    out.push((a, inv));
                }
            }
            out
        }
        RingSpec::Product(fs) => {
            let factor_units: Vec<Vec<(u64, u64)>> = fs.iter().map(unit_pairs).collect();
            let mut out = vec![(0u64, 0u64)];
            for (f, units) in fs.iter().zip(&factor_units) {
                let s = f.size().unwrap();
                let mut next = Vec::with_capacity(out.len() * units.len());
                for &(acc_u, acc_v) in &out {
                    for &(u, v) in units {
                        next.push((acc_u * s + u, acc_v * s + v));
                    }
                }
                out = next;
            }
            out
        }
    }
}

fn mod_inverse(a: u64, n: u64) -> u64 {
    // extended Euclid on (a, n); a is coprime to n
    let (mut old_r, mut r) = (a as i64, n as i64);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(n as i64) as u64
}

fn field_inverse(g: &GaloisSpec, a: u64) -> u64 {
    // a^(q-2) in GF(q)
    let spec = RingSpec::Galois(g.clone());
    let mut e = g.order() - 2;
    let mut base = a;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = super::mul_index(&spec, acc, base);
        }
        base = super::mul_index(&spec, base, base);
        e >>= 1;
    }
    acc
}

/// Gauss-Jordan inverse over the base field; None when singular.
fn matrix_inverse(base: &GaloisSpec, d: usize, m: u64) -> Option<u64> {
    let q = base.order();
    let gspec = RingSpec::Galois(base.clone());
    let mut a = matrix_entries(m, q, d);
    let mut inv: Vec<u64> = (0..d * d)
        .map(|i| if i % d == i / d { 1 } else { 0 })
        .collect();
    for col in 0..d {
        let pivot = (col..d).find(|&r| a[r * d + col] != 0)?;
        if pivot != col {
            for c in 0..d {
                a.swap(pivot * d + c, col * d + c);
                inv.swap(pivot * d + c, col * d + c);
            }
        }
        let scale = field_inverse(base, a[col * d + col]);
        for c in 0..d {
            a[col * d + c] = super::mul_index(&gspec, a[col * d + c], scale);
            inv[col * d + c] = super::mul_index(&gspec, inv[col * d + c], scale);
        }
        for r in 0..d {
            if r == col || a[r * d + col] == 0 {
                continue;
            }
            let factor = a[r * d + col];
            for c in 0..d {
                let sub_a = super::mul_index(&gspec, factor, a[col * d + c]);
                a[r * d + c] =
                    super::add_index(&gspec, a[r * d + c], super::neg_index(&gspec, sub_a));
                let sub_i = super::mul_index(&gspec, factor, inv[col * d + c]);
                inv[r * d + c] =
                    super::add_index(&gspec, inv[r * d + c], super::neg_index(&gspec, sub_i));
            }
        }
    }
    Some(matrix_index(&inv, q))
}

pub(super) fn jacobson_radical(ring: &Ring) -> Vec<u64> {
    let mut elems = radical_elems(ring.spec());
    elems.sort_unstable();
    elems
}

fn radical_elems(spec: &RingSpec) -> Vec<u64> {
    match spec {
        RingSpec::Zmod { n } => {
            let rad = radical_of_modulus(*n);
            (0..n / rad).map(|i| i * rad).collect()
        }
        RingSpec::Galois(_) | RingSpec::Matrix { .. } => vec![0],
        RingSpec::Product(fs) => {
            let mut out = vec![0u64];
            for f in fs {
                let s = f.size().unwrap();
                let part = radical_elems(f);
                let mut next = Vec::with_capacity(out.len() * part.len());
                for &acc in &out {
                    for &x in &part {
                        next.push(acc * s + x);
                    }
                }
                out = next;
            }
            out
        }
    }
}

/// A principal left ideal Ra, stored as the sorted list of its elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    pub elems: Vec<u64>,
    pub proper: bool,
}

impl Ideal {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
}

pub(super) fn principal_left_ideals(ring: &Ring) -> Vec<Ideal> {
    let size = ring.size();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for a in 0..size {
        let mut member = vec![false; size as usize];
        for r in 0..size {
            member[ring.mul(r, a) as usize] = true;
        }
        let elems: Vec<u64> = (0..size).filter(|&x| member[x as usize]).collect();
        seen.insert(elems);
    }
    let mut ideals: Vec<Ideal> = seen
        .into_iter()
        .map(|elems| {
            let proper = (elems.len() as u64) < size;
            Ideal { elems, proper }
        })
        .collect();
    ideals.sort_by(|a, b| (a.len(), &a.elems).cmp(&(b.len(), &b.elems)));
    ideals
}
