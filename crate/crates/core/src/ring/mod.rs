//! Finite rings built from a small constructor grammar: residue rings Z/n,
//! Galois fields GF(p^k), full matrix rings over a Galois field, and finite
//! direct products of these. Every ring carries a canonical bijective indexing
//! of its elements by 0..|R| (mixed radix over the constructor tree, zero at
//! index 0) and a canonical identification with its Pontryagin dual through
//! the trace/exponential pairing.
//!
//! All operations are pure functions over immutable data; a `Ring` may be
//! shared freely across threads.

mod parse;
pub mod poly;
mod units;

pub use parse::parse_ring_spec;
pub use units::{Ideal, UnitSet};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;
use std::sync::OnceLock;

/// Default cap on the number of elements of a single ring.
pub const DEFAULT_SIZE_GUARD: u64 = 4096;

/// Description of a Galois field GF(p^k) with an explicit monic irreducible
/// modulus of degree k (constant term first, leading coefficient included).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaloisSpec {
    pub p: u64,
    pub k: u32,
    pub poly: Vec<u64>,
}

impl GaloisSpec {
    /// GF(p^k) with the least monic irreducible polynomial of degree k, where
    /// polynomials are ordered by their index encoding (constant term as the
    /// least significant digit).
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        Ok(GaloisSpec { p, k, poly: poly::least_irreducible(p, k) })
    }

    /// GF(p^k) with a caller-supplied modulus, checked monic and irreducible.
    pub fn with_poly(p: u64, k: u32, poly_coeffs: Vec<u64>) -> Result<Self> {
        if !poly::is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        if poly_coeffs.len() != k as usize + 1 || *poly_coeffs.last().unwrap() != 1 {
            return Err(Error::InvalidParameter(format!(
                "modulus must be monic of degree {k} ({} coefficients, constant first)",
                k + 1
            )));
        }
        if poly_coeffs.iter().any(|&c| c >= p) {
            return Err(Error::InvalidParameter(format!("coefficients must lie in 0..{p}")));
        }
        if !poly::is_irreducible(&poly_coeffs, p) {
            return Err(Error::InvalidParameter(format!(
                "polynomial is reducible over F_{p}"
            )));
        }
        Ok(GaloisSpec { p, k, poly: poly_coeffs })
    }

    /// Field order p^k.
    pub fn order(&self) -> u64 {
        self.p.pow(self.k)
    }

    fn poly_is_default(&self) -> bool {
        self.poly == poly::least_irreducible(self.p, self.k)
    }
}

/// Constructor tree describing a finite ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// The residue ring Z/n, n >= 2.
    Zmod { n: u64 },
    /// A Galois field GF(p^k).
    Galois(GaloisSpec),
    /// The ring of dim x dim matrices over a Galois field.
    Matrix { dim: u32, base: GaloisSpec },
    /// A finite direct product of rings, componentwise operations.
    Product(Vec<RingSpec>),
}

impl RingSpec {
    pub fn zmod(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("Z/{n} needs n >= 2")));
        }
        Ok(RingSpec::Zmod { n })
    }

    pub fn galois(p: u64, k: u32) -> Result<Self> {
        Ok(RingSpec::Galois(GaloisSpec::new(p, k)?))
    }

    /// GF(q) for a prime power q with the default modulus.
    pub fn galois_field(q: u64) -> Result<Self> {
        let (p, k) = poly::prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        Self::galois(p, k)
    }

    pub fn matrix(dim: u32, base: GaloisSpec) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
        }
        Ok(RingSpec::Matrix { dim, base })
    }

    pub fn product(factors: Vec<RingSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("product needs at least one factor".into()));
        }
        Ok(if factors.len() == 1 {
            factors.into_iter().next().unwrap()
        } else {
            RingSpec::Product(factors)
        })
    }

    /// d-fold product of this spec with itself (d >= 1).
    pub fn power(&self, d: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("power must be >= 1".into()));
        }
        RingSpec::product(vec![self.clone(); d as usize])
    }

    /// Number of elements, or None on overflow.
    pub fn size(&self) -> Option<u64> {
        match self {
            RingSpec::Zmod { n } => Some(*n),
            RingSpec::Galois(g) => g.p.checked_pow(g.k),
            RingSpec::Matrix { dim, base } => {
                base.p.checked_pow(base.k.checked_mul(dim.checked_mul(*dim)?)?)
            }
            RingSpec::Product(fs) => {
                fs.iter().try_fold(1u64, |acc, f| acc.checked_mul(f.size()?))
            }
        }
    }

    /// Exponent of the additive group (lcm of the cyclic factor orders).
    pub fn additive_exponent(&self) -> u64 {
        match self {
            RingSpec::Zmod { n } => *n,
            RingSpec::Galois(g) => g.p,
            RingSpec::Matrix { base, .. } => base.p,
            RingSpec::Product(fs) => fs.iter().fold(1, |acc, f| lcm(acc, f.additive_exponent())),
        }
    }

    /// Structural count of two-sided units: Euler's totient for Z/n, q - 1 for
    /// a field, the general-linear group order for a matrix ring, and the
    /// product over factors.
    pub fn structural_unit_count(&self) -> u64 {
        match self {
            RingSpec::Zmod { n } => euler_phi(*n),
            RingSpec::Galois(g) => g.order() - 1,
            RingSpec::Matrix { dim, base } => gl_order(*dim, base.order()),
            RingSpec::Product(fs) => fs.iter().map(|f| f.structural_unit_count()).product(),
        }
    }

    /// Size of the Jacobson radical, computed structurally.
    pub fn radical_size(&self) -> u64 {
        match self {
            RingSpec::Zmod { n } => n / radical_of_modulus(*n),
            RingSpec::Galois(_) | RingSpec::Matrix { .. } => 1,
            RingSpec::Product(fs) => fs.iter().map(|f| f.radical_size()).product(),
        }
    }

    /// Spec of the semisimple quotient R/J. For Z/n this is Z/rad(n); fields
    /// and matrix rings are already semisimple; products reduce componentwise.
    pub fn radical_quotient(&self) -> RingSpec {
        match self {
            RingSpec::Zmod { n } => RingSpec::Zmod { n: radical_of_modulus(*n) },
            RingSpec::Galois(_) | RingSpec::Matrix { .. } => self.clone(),
            RingSpec::Product(fs) => {
                RingSpec::Product(fs.iter().map(|f| f.radical_quotient()).collect())
            }
        }
    }

    /// True when the spec denotes a field (possibly presented as Z/p or a
    /// 1 x 1 matrix ring, or wrapped in a single-factor product).
    pub fn is_field(&self) -> bool {
        match self {
            RingSpec::Zmod { n } => poly::is_prime(*n),
            RingSpec::Galois(_) => true,
            RingSpec::Matrix { dim, .. } => *dim == 1,
            RingSpec::Product(fs) => fs.len() == 1 && fs[0].is_field(),
        }
    }

    /// True when every constructor leaf is a copy of the two-element field.
    pub fn is_boolean(&self) -> bool {
        match self {
            RingSpec::Zmod { n } => *n == 2,
            RingSpec::Galois(g) => g.order() == 2,
            RingSpec::Matrix { dim, base } => *dim == 1 && base.order() == 2,
            RingSpec::Product(fs) => fs.iter().all(|f| f.is_boolean()),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod { n } => write!(f, "Z/{n}"),
            RingSpec::Galois(g) => {
                write!(f, "GF({})", g.order())?;
                if !g.poly_is_default() {
                    let coeffs: Vec<String> = g.poly.iter().map(|c| c.to_string()).collect();
                    write!(f, "{{{}}}", coeffs.join(","))?;
                }
                Ok(())
            }
            RingSpec::Matrix { dim, base } => write!(f, "M{}(GF({}))", dim, base.order()),
            RingSpec::Product(fs) => {
                let parts: Vec<String> = fs
                    .iter()
                    .map(|x| match x {
                        RingSpec::Product(_) => format!("({x})"),
                        _ => x.to_string(),
                    })
                    .collect();
                write!(f, "{}", parts.join(" x "))
            }
        }
    }
}

/// Decoded representation of a ring element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Components {
    /// Residue class in Z/n.
    Residue(u64),
    /// Polynomial coefficients over F_p, constant term first.
    Poly(Vec<u64>),
    /// Row-major matrix entries, each an element index of the base field.
    Matrix { dim: u32, entries: Vec<u64> },
    /// One component per product factor.
    Tuple(Vec<Components>),
}

/// A ring element together with its decoded components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingElem {
    pub index: u64,
    pub components: Components,
}

/// A finite ring with canonical element indexing, exact arithmetic, and the
/// canonical self-dual character pairing. Construction validates the spec and
/// enforces the size guard; heavyweight data (unit set, root table) is built
/// lazily and cached.
pub struct Ring {
    spec: RingSpec,
    size: u64,
    exponent: u64,
    guard: u64,
    units: OnceLock<UnitSet>,
    roots: OnceLock<Vec<Complex64>>,
    phases: OnceLock<Option<Vec<u32>>>,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({}, size={})", self.spec, self.size)
    }
}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Ring> {
        Self::with_guard(spec, DEFAULT_SIZE_GUARD)
    }

    pub fn with_guard(spec: RingSpec, guard: u64) -> Result<Ring> {
        let size = spec
            .size()
            .ok_or(Error::GuardExceeded { needed: u64::MAX, guard })?;
        if size > guard {
            return Err(Error::GuardExceeded { needed: size, guard });
        }
        let exponent = spec.additive_exponent();
        Ok(Ring {
            spec,
            size,
            exponent,
            guard,
            units: OnceLock::new(),
            roots: OnceLock::new(),
            phases: OnceLock::new(),
        })
    }

    /// Parses a ring-spec string and constructs the ring under the guard.
    pub fn parse(text: &str, guard: u64) -> Result<Ring> {
        Self::with_guard(parse_ring_spec(text)?, guard)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn guard(&self) -> u64 {
        self.guard
    }

    /// Exponent of the additive group; character phases are multiples of
    /// 2*pi / exponent.
    pub fn additive_exponent(&self) -> u64 {
        self.exponent
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        one_index(&self.spec)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_index(&self.spec, a, b)
    }

    pub fn neg(&self, a: u64) -> u64 {
        neg_index(&self.spec, a)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_index(&self.spec, a, b)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn decode(&self, index: u64) -> RingElem {
        RingElem { index, components: decode_index(&self.spec, index) }
    }

    pub fn encode(&self, components: &Components) -> Result<u64> {
        encode_components(&self.spec, components)
    }

    /// Integer phase of the canonical pairing: chi_m(x) = exp(2*pi*i * t / L)
    /// with L the additive exponent and t the value returned here.
    ///
    /// Z/n pairs (m, x) to m*x/n; a Galois field uses the Frobenius trace of
    /// m*x over F_p; a matrix ring composes the matrix trace of m*x with the
    /// base-field trace; products multiply factor characters (add phases).
    pub fn phase(&self, m: u64, x: u64) -> u64 {
        phase_index(&self.spec, m, x, self.exponent)
    }

    /// chi_m(x) as a unit complex number.
    pub fn character(&self, m: u64, x: u64) -> Complex64 {
        self.root_table()[self.phase(m, x) as usize]
    }

    /// Table of the L-th roots of unity, exp(2*pi*i*t/L) at index t.
    pub fn root_table(&self) -> &[Complex64] {
        self.roots.get_or_init(|| {
            let l = self.exponent as usize;
            (0..l)
                .map(|t| {
                    let theta = 2.0 * std::f64::consts::PI * (t as f64) / (l as f64);
                    Complex64::new(theta.cos(), theta.sin())
                })
                .collect()
        })
    }

    /// Full phase table (m * size + x -> phase), cached when it fits in 2^22
    /// entries; None for larger rings.
    pub fn phase_table(&self) -> Option<&[u32]> {
        self.phases
            .get_or_init(|| {
                let n = self.size;
                if n.checked_mul(n).map_or(true, |sq| sq > 1 << 22) {
                    return None;
                }
                let mut t = Vec::with_capacity((n * n) as usize);
                for m in 0..n {
                    for x in 0..n {
                        t.push(self.phase(m, x) as u32);
                    }
                }
                Some(t)
            })
            .as_deref()
    }

    /// The set of two-sided units with the inverse map, enumerated
    /// structurally per constructor and validated against the closed-form
    /// count. Cached after the first call.
    pub fn units(&self) -> &UnitSet {
        self.units.get_or_init(|| units::enumerate_units(self))
    }

    /// Jacobson radical as a sorted list of element indices.
    pub fn jacobson_radical(&self) -> Vec<u64> {
        units::jacobson_radical(self)
    }

    /// All distinct principal left ideals Ra, sorted by (size, elements).
    pub fn principal_left_ideals(&self) -> Vec<Ideal> {
        units::principal_left_ideals(self)
    }

    pub fn is_field(&self) -> bool {
        self.spec.is_field()
    }

    pub fn is_boolean(&self) -> bool {
        self.spec.is_boolean()
    }

    /// Canonical generators of the additive group: the elements with a single
    /// mixed-radix digit equal to 1. Ascending by index.
    pub fn additive_generators(&self) -> Vec<u64> {
        let mut gens = additive_generators(&self.spec);
        gens.sort_unstable();
        gens
    }
}

fn additive_generators(spec: &RingSpec) -> Vec<u64> {
    match spec {
        RingSpec::Zmod { .. } => vec![1],
        RingSpec::Galois(g) => (0..g.k).map(|i| g.p.pow(i)).collect(),
        RingSpec::Matrix { dim, base } => {
            let q = base.order();
            let cells = (*dim as u64) * (*dim as u64);
            let mut out = Vec::new();
            for j in 0..cells {
                for i in 0..base.k {
                    out.push(base.p.pow(i) * q.pow(j as u32));
                }
            }
            out
        }
        RingSpec::Product(fs) => {
            let mut out = Vec::new();
            let mut stride = 1u64;
            for f in fs.iter().rev() {
                for g in additive_generators(f) {
                    out.push(g * stride);
                }
                stride *= f.size().unwrap();
            }
            out
        }
    }
}

fn one_index(spec: &RingSpec) -> u64 {
    match spec {
        RingSpec::Zmod { .. } | RingSpec::Galois(_) => 1,
        RingSpec::Matrix { dim, base } => {
            let q = base.order();
            let dim = *dim as u64;
            let mut idx = 0u64;
            for r in 0..dim {
                idx += q.pow((r * dim + r) as u32);
            }
            idx
        }
        RingSpec::Product(fs) => {
            let mut idx = 0u64;
            for f in fs {
                idx = idx * f.size().unwrap() + one_index(f);
            }
            idx
        }
    }
}

fn split_product(fs: &[RingSpec], mut idx: u64) -> Vec<u64> {
    // lexicographic: first factor is the most significant digit
    let mut parts = vec![0u64; fs.len()];
    for (i, f) in fs.iter().enumerate().rev() {
        let s = f.size().unwrap();
        parts[i] = idx % s;
        idx /= s;
    }
    parts
}

fn join_product(fs: &[RingSpec], parts: &[u64]) -> u64 {
    let mut idx = 0u64;
    for (f, &p) in fs.iter().zip(parts) {
        idx = idx * f.size().unwrap() + p;
    }
    idx
}

fn add_index(spec: &RingSpec, a: u64, b: u64) -> u64 {
    match spec {
        RingSpec::Zmod { n } => (a + b) % n,
        RingSpec::Galois(g) => {
            let p = g.p;
            let k = g.k as usize;
            let (mut a, mut b) = (a, b);
            let mut idx = 0u64;
            let mut mult = 1u64;
            for _ in 0..k {
                idx += ((a % p + b % p) % p) * mult;
                mult *= p;
                a /= p;
                b /= p;
            }
            idx
        }
        RingSpec::Matrix { dim, base } => {
            let q = base.order();
            let digits = (*dim as u64) * (*dim as u64);
            let gspec = RingSpec::Galois(base.clone());
            let (mut a, mut b) = (a, b);
            let mut idx = 0u64;
            let mut mult = 1u64;
            for _ in 0..digits {
                idx += add_index(&gspec, a % q, b % q) * mult;
                mult *= q;
                a /= q;
                b /= q;
            }
            idx
        }
        RingSpec::Product(fs) => {
            let pa = split_product(fs, a);
            let pb = split_product(fs, b);
            let parts: Vec<u64> = fs
                .iter()
                .zip(pa.iter().zip(pb.iter()))
                .map(|(f, (&x, &y))| add_index(f, x, y))
                .collect();
            join_product(fs, &parts)
        }
    }
}

fn neg_index(spec: &RingSpec, a: u64) -> u64 {
    match spec {
        RingSpec::Zmod { n } => (n - a % n) % n,
        RingSpec::Galois(g) => {
            let p = g.p;
            let mut a = a;
            let mut idx = 0u64;
            let mut mult = 1u64;
            for _ in 0..g.k {
                idx += ((p - a % p) % p) * mult;
                mult *= p;
                a /= p;
            }
            idx
        }
        RingSpec::Matrix { dim, base } => {
            let q = base.order();
            let gspec = RingSpec::Galois(base.clone());
            let mut a = a;
            let mut idx = 0u64;
            let mut mult = 1u64;
            for _ in 0..(*dim as u64) * (*dim as u64) {
                idx += neg_index(&gspec, a % q) * mult;
                mult *= q;
                a /= q;
            }
            idx
        }
        RingSpec::Product(fs) => {
            let parts: Vec<u64> = fs
                .iter()
                .zip(split_product(fs, a))
                .map(|(f, x)| neg_index(f, x))
                .collect();
            join_product(fs, &parts)
        }
    }
}

fn mul_index(spec: &RingSpec, a: u64, b: u64) -> u64 {
    match spec {
        RingSpec::Zmod { n } => (a * b) % n,
        RingSpec::Galois(g) => {
            let pa = poly::from_index(a, g.p, g.k as usize);
            let pb = poly::from_index(b, g.p, g.k as usize);
            let prod = poly::rem(&poly::mul(&pa, &pb, g.p), &g.poly, g.p);
            poly::to_index(&prod, g.p)
        }
        RingSpec::Matrix { dim, base } => {
            let q = base.order();
            let d = *dim as usize;
            let gspec = RingSpec::Galois(base.clone());
            let ea = matrix_entries(a, q, d);
            let eb = matrix_entries(b, q, d);
            let mut out = vec![0u64; d * d];
            for r in 0..d {
                for c in 0..d {
                    let mut acc = 0u64;
                    for t in 0..d {
                        let term = mul_index(&gspec, ea[r * d + t], eb[t * d + c]);
                        acc = add_index(&gspec, acc, term);
                    }
                    out[r * d + c] = acc;
                }
            }
            matrix_index(&out, q)
        }
        RingSpec::Product(fs) => {
            let pa = split_product(fs, a);
            let pb = split_product(fs, b);
            let parts: Vec<u64> = fs
                .iter()
                .zip(pa.iter().zip(pb.iter()))
                .map(|(f, (&x, &y))| mul_index(f, x, y))
                .collect();
            join_product(fs, &parts)
        }
    }
}

pub(crate) fn matrix_entries(mut idx: u64, q: u64, dim: usize) -> Vec<u64> {
    let mut e = Vec::with_capacity(dim * dim);
    for _ in 0..dim * dim {
        e.push(idx % q);
        idx /= q;
    }
    e
}

pub(crate) fn matrix_index(entries: &[u64], q: u64) -> u64 {
    let mut idx = 0u64;
    for &e in entries.iter().rev() {
        idx = idx * q + e;
    }
    idx
}

fn decode_index(spec: &RingSpec, idx: u64) -> Components {
    match spec {
        RingSpec::Zmod { .. } => Components::Residue(idx),
        RingSpec::Galois(g) => Components::Poly(poly::from_index(idx, g.p, g.k as usize)),
        RingSpec::Matrix { dim, base } => Components::Matrix {
            dim: *dim,
            entries: matrix_entries(idx, base.order(), *dim as usize),
        },
        RingSpec::Product(fs) => Components::Tuple(
            fs.iter()
                .zip(split_product(fs, idx))
                .map(|(f, x)| decode_index(f, x))
                .collect(),
        ),
    }
}

fn encode_components(spec: &RingSpec, c: &Components) -> Result<u64> {
    let bad = || Error::InvalidParameter("components do not match the ring spec".into());
    match (spec, c) {
        (RingSpec::Zmod { n }, Components::Residue(r)) => {
            if r < n {
                Ok(*r)
            } else {
                Err(bad())
            }
        }
        (RingSpec::Galois(g), Components::Poly(coeffs)) => {
            if coeffs.len() == g.k as usize && coeffs.iter().all(|&x| x < g.p) {
                Ok(poly::to_index(coeffs, g.p))
            } else {
                Err(bad())
            }
        }
        (RingSpec::Matrix { dim, base }, Components::Matrix { dim: d, entries }) => {
            let q = base.order();
            if d == dim
                && entries.len() == (*dim as usize) * (*dim as usize)
                && entries.iter().all(|&e| e < q)
            {
                Ok(matrix_index(entries, q))
            } else {
                Err(bad())
            }
        }
        (RingSpec::Product(fs), Components::Tuple(parts)) => {
            if parts.len() != fs.len() {
                return Err(bad());
            }
            let mut encoded = Vec::with_capacity(fs.len());
            for (f, part) in fs.iter().zip(parts) {
                encoded.push(encode_components(f, part)?);
            }
            Ok(join_product(fs, &encoded))
        }
        _ => Err(bad()),
    }
}

/// Frobenius trace of a field element down to the prime field, returned as a
/// residue in 0..p.
fn galois_trace(g: &GaloisSpec, y: u64) -> u64 {
    let spec = RingSpec::Galois(g.clone());
    let mut acc = y;
    let mut z = y;
    for _ in 1..g.k {
        // z -> z^p
        let mut e = g.p;
        let mut base = z;
        let mut pw = 1u64; // one
        while e > 0 {
            if e & 1 == 1 {
                pw = mul_index(&spec, pw, base);
            }
            base = mul_index(&spec, base, base);
            e >>= 1;
        }
        z = pw;
        acc = add_index(&spec, acc, z);
    }
    debug_assert!(acc < g.p, "trace must land in the prime field");
    acc
}

fn phase_index(spec: &RingSpec, m: u64, x: u64, l: u64) -> u64 {
    match spec {
        RingSpec::Zmod { n } => ((m % n) * (x % n) % n) * (l / n) % l,
        RingSpec::Galois(g) => {
            let t = galois_trace(g, mul_index(spec, m, x));
            t * (l / g.p) % l
        }
        RingSpec::Matrix { dim, base } => {
            let prod = mul_index(spec, m, x);
            let q = base.order();
            let d = *dim as usize;
            let entries = matrix_entries(prod, q, d);
            let gspec = RingSpec::Galois(base.clone());
            let mut tr = 0u64;
            for r in 0..d {
                tr = add_index(&gspec, tr, entries[r * d + r]);
            }
            galois_trace(base, tr) * (l / base.p) % l
        }
        RingSpec::Product(fs) => {
            let pm = split_product(fs, m);
            let px = split_product(fs, x);
            let mut acc = 0u64;
            for (f, (&mi, &xi)) in fs.iter().zip(pm.iter().zip(px.iter())) {
                acc = (acc + phase_index(f, mi, xi, l)) % l;
            }
            acc
        }
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if n > 1 {
        result = result / n * (n - 1);
    }
    result
}

/// Product of the distinct primes dividing n.
pub fn radical_of_modulus(mut n: u64) -> u64 {
    let mut rad = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            rad *= p;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        rad *= n;
    }
    rad
}

/// |GL_dim(F_q)| = prod_{j=0..dim-1} (q^dim - q^j).
pub fn gl_order(dim: u32, q: u64) -> u64 {
    let qd = q.pow(dim);
    (0..dim).map(|j| qd - q.pow(j)).product()
}

/// phi(n, q) = prod_{j=1..n} (1 - q^-j), the unit density of M_n(F_q).
pub fn phi(n: u32, q: u64) -> f64 {
    (1..=n).map(|j| 1.0 - (q as f64).powi(-(j as i32))).product()
}
