//! Exact extremality decisions.
//!
//! A ring attains the worst possible square-root law (C = sqrt(|R*|)) exactly
//! when the shifted hyperbola {(u - 1, u^-1 - 1)} fails to generate R^2 as an
//! additive group. That criterion is decided here by an exact breadth-first
//! closure over pair indices; floating-point C values are never consulted.
//! When the closure is proper, a nontrivial dual pair (m, n) whose character
//! is constant on the hyperbola is produced and validated; when it is all of
//! R^2, BFS parent pointers reconstruct explicit sum-of-units certificates.

use crate::error::{Error, Result};
use crate::ring::Ring;
use std::collections::VecDeque;

/// Cap on |R|^2 pair nodes for the closure bitmap.
pub const CLOSURE_GUARD: u64 = 1 << 24;
/// Parent pointers are recorded only up to this many nodes.
const PARENT_GUARD: u64 = 1 << 20;

/// Additive closure of a set of points of R^2, reached from 0 by repeatedly
/// adding generators. In a finite group this semigroup closure is the
/// generated subgroup.
pub struct Closure {
    ring_size: u64,
    reached: u64,
    visited: Vec<u64>,
    parents: Option<Vec<(u32, u32)>>,
    generators: Vec<(u64, u64)>,
}

const NO_PARENT: (u32, u32) = (u32::MAX, u32::MAX);

impl Closure {
    pub fn len(&self) -> u64 {
        self.reached
    }

    pub fn is_empty(&self) -> bool {
        false // always contains (0, 0)
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    fn node(&self, a: u64, b: u64) -> u64 {
        a * self.ring_size + b
    }

    pub fn contains(&self, a: u64, b: u64) -> bool {
        let n = self.node(a, b);
        self.visited[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    /// All reachable pairs, ascending by (a, b).
    pub fn elements(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.reached as usize);
        for a in 0..self.ring_size {
            for b in 0..self.ring_size {
                if self.contains(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Reconstructs (a, b) as an ordered list of generator ordinals along the
    /// BFS path from (0, 0). None if unreachable or parents were not recorded.
    /// The path length is minimal among BFS-discovered paths.
    pub fn decompose(&self, a: u64, b: u64) -> Option<Vec<usize>> {
        let parents = self.parents.as_ref()?;
        if !self.contains(a, b) {
            return None;
        }
        let mut steps = Vec::new();
        let mut node = self.node(a, b) as u32;
        while node != 0 {
            let (prev, gen) = parents[node as usize];
            if (prev, gen) == NO_PARENT {
                return Some(Vec::new()); // the origin
            }
            steps.push(gen as usize);
            node = prev;
        }
        steps.reverse();
        Some(steps)
    }
}

/// Breadth-first additive closure of `points` inside R^2, starting from 0.
pub fn additive_closure(ring: &Ring, points: &[(u64, u64)]) -> Result<Closure> {
    let size = ring.size();
    let nodes = size
        .checked_mul(size)
        .filter(|&n| n <= CLOSURE_GUARD)
        .ok_or(Error::GuardExceeded { needed: u64::MAX, guard: CLOSURE_GUARD })?;

    // per-generator coordinate translation tables
    let add_a: Vec<Vec<u64>> = points
        .iter()
        .map(|&(ga, _)| (0..size).map(|a| ring.add(a, ga)).collect())
        .collect();
    let add_b: Vec<Vec<u64>> = points
        .iter()
        .map(|&(_, gb)| (0..size).map(|b| ring.add(b, gb)).collect())
        .collect();

    let mut visited = vec![0u64; nodes.div_ceil(64) as usize];
    let mut parents = (nodes <= PARENT_GUARD).then(|| vec![NO_PARENT; nodes as usize]);
    let mut queue = VecDeque::new();
    visited[0] |= 1;
    queue.push_back(0u32);
    let mut reached = 1u64;
    while let Some(node) = queue.pop_front() {
        let a = (node as u64 / size) as usize;
        let b = (node as u64 % size) as usize;
        for g in 0..points.len() {
            let next = add_a[g][a] * size + add_b[g][b];
            let (w, bit) = ((next / 64) as usize, next % 64);
            if visited[w] >> bit & 1 == 0 {
                visited[w] |= 1 << bit;
                reached += 1;
                if let Some(p) = parents.as_mut() {
                    p[next as usize] = (node, g as u32);
                }
                queue.push_back(next as u32);
            }
        }
    }

    Ok(Closure { ring_size: size, reached, visited, parents, generators: points.to_vec() })
}

/// Exact extremality certificate.
pub struct GenerationCertificate {
    pub ring: String,
    pub extremal: bool,
    /// Size of the subgroup generated by {(u - 1, u^-1 - 1)}.
    pub closure_size: u64,
    /// For extremal rings: a nontrivial dual pair (m, n) whose character is
    /// constant on the hyperbola, validated on every unit.
    pub witness: Option<(u64, u64)>,
    pub closure: Closure,
}

impl GenerationCertificate {
    /// For non-extremal rings: expresses each canonical additive basis vector
    /// of R^2 as a sum of hyperbola shifts, as unit lists. None when the ring
    /// is extremal or parents exceeded the recording guard.
    pub fn basis_decompositions(&self, ring: &Ring) -> Option<Vec<((u64, u64), Vec<u64>)>> {
        if self.extremal {
            return None;
        }
        let units: Vec<u64> = ring.units().elements().to_vec();
        let mut out = Vec::new();
        for g in ring.additive_generators() {
            for target in [(g, 0), (0, g)] {
                let steps = self.closure.decompose(target.0, target.1)?;
                out.push((target, steps.into_iter().map(|i| units[i]).collect()));
            }
        }
        Some(out)
    }
}

/// Decides extremality by exact additive closure of the shifted hyperbola.
pub fn is_extremal(ring: &Ring) -> Result<GenerationCertificate> {
    let one = ring.one();
    let generators: Vec<(u64, u64)> = ring
        .units()
        .pairs()
        .map(|(u, v)| (ring.sub(u, one), ring.sub(v, one)))
        .collect();
    let closure = additive_closure(ring, &generators)?;
    let total = ring.size() * ring.size();
    let extremal = closure.len() < total;
    let witness = if extremal { Some(find_witness(ring, &generators)?) } else { None };
    Ok(GenerationCertificate {
        ring: ring.spec().to_string(),
        extremal,
        closure_size: closure.len(),
        witness,
        closure,
    })
}

/// First (m, n) != (0, 0) in index order whose character kills every closure
/// generator; validated to be constant on the whole hyperbola.
fn find_witness(ring: &Ring, generators: &[(u64, u64)]) -> Result<(u64, u64)> {
    let size = ring.size();
    let l = ring.additive_exponent();
    for m in 0..size {
        'next: for n in 0..size {
            if (m, n) == (0, 0) {
                continue;
            }
            for &(ga, gb) in generators {
                if (ring.phase(m, ga) + ring.phase(n, gb)) % l != 0 {
                    continue 'next;
                }
            }
            // validate: chi_m(u) chi_n(u^-1) equals its value at u = 1
            let one = ring.one();
            let base = (ring.phase(m, one) + ring.phase(n, one)) % l;
            for (u, v) in ring.units().pairs() {
                if (ring.phase(m, u) + ring.phase(n, v)) % l != base {
                    return Err(Error::Invariant(format!(
                        "witness ({m},{n}) not constant on the hyperbola of {}",
                        ring.spec()
                    )));
                }
            }
            return Ok((m, n));
        }
    }
    Err(Error::Invariant(format!(
        "no dual witness found for extremal ring {}",
        ring.spec()
    )))
}

/// Which sum-of-units equation to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumForm {
    /// x_1 + ... + x_n - n = A and likewise for inverses.
    Normalized,
    /// x_1 + ... + x_n = A and likewise for inverses, n >= 1.
    Plain,
}

/// Finds units u_1..u_n solving the requested sum equations for (a, b), with
/// n minimal among BFS paths. None when (a, b) is unreachable, which can only
/// happen for extremal rings (Normalized form) or disconnected hyperbola
/// graphs (Plain form).
pub fn sum_of_units(ring: &Ring, a: u64, b: u64, form: SumForm) -> Result<Option<Vec<u64>>> {
    let units: Vec<u64> = ring.units().elements().to_vec();
    let solution = match form {
        SumForm::Normalized => {
            if (a, b) == (0, 0) {
                // single unit 1: 1 - 1 = 0 on both sides
                Some(vec![ring.one()])
            } else {
                let cert = is_extremal(ring)?;
                cert.closure
                    .decompose(a, b)
                    .map(|steps| steps.into_iter().map(|i| units[i]).collect())
            }
        }
        SumForm::Plain => plain_form_bfs(ring, a, b)?,
    };
    if let Some(ref sol) = solution {
        if !validate_sum(ring, sol, a, b, form) {
            return Err(Error::Invariant("sum-of-units certificate failed validation".into()));
        }
    }
    Ok(solution)
}

/// Checks a sum-of-units certificate by direct evaluation.
pub fn validate_sum(ring: &Ring, units: &[u64], a: u64, b: u64, form: SumForm) -> bool {
    if units.is_empty() {
        return false;
    }
    let unit_set = ring.units();
    let mut sum = 0u64;
    let mut inv_sum = 0u64;
    for &u in units {
        let v = match unit_set.inverse_of(u) {
            Some(v) => v,
            None => return false,
        };
        sum = ring.add(sum, u);
        inv_sum = ring.add(inv_sum, v);
    }
    match form {
        SumForm::Plain => sum == a && inv_sum == b,
        SumForm::Normalized => {
            let mut n_ones = 0u64;
            for _ in 0..units.len() {
                n_ones = ring.add(n_ones, ring.one());
            }
            ring.sub(sum, n_ones) == a && ring.sub(inv_sum, n_ones) == b
        }
    }
}

/// BFS over R^2 with steps (u, u^-1), path length >= 1.
fn plain_form_bfs(ring: &Ring, a: u64, b: u64) -> Result<Option<Vec<u64>>> {
    let size = ring.size();
    let nodes = size
        .checked_mul(size)
        .filter(|&n| n <= PARENT_GUARD)
        .ok_or(Error::GuardExceeded { needed: u64::MAX, guard: PARENT_GUARD })?;
    let pairs: Vec<(u64, u64)> = ring.units().pairs().collect();
    let target = a * size + b;

    let mut parent: Vec<(u32, u32)> = vec![NO_PARENT; nodes as usize];
    let mut seen = vec![false; nodes as usize];
    let mut queue = VecDeque::new();
    for (g, &(u, v)) in pairs.iter().enumerate() {
        let node = u * size + v;
        if !seen[node as usize] {
            seen[node as usize] = true;
            parent[node as usize] = (u32::MAX, g as u32);
            queue.push_back(node as u32);
        }
    }
    let found = loop {
        let node = match queue.pop_front() {
            Some(n) => n,
            None => break seen[target as usize],
        };
        if node as u64 == target {
            break true;
        }
        let (na, nb) = (node as u64 / size, node as u64 % size);
        for (g, &(u, v)) in pairs.iter().enumerate() {
            let next = ring.add(na, u) * size + ring.add(nb, v);
            if !seen[next as usize] {
                seen[next as usize] = true;
                parent[next as usize] = (node, g as u32);
                queue.push_back(next as u32);
            }
        }
    };
    if !found {
        return Ok(None);
    }
    let mut steps = Vec::new();
    let mut node = target as u32;
    loop {
        let (prev, g) = parent[node as usize];
        steps.push(pairs[g as usize].0);
        if prev == u32::MAX {
            break;
        }
        node = prev;
    }
    steps.reverse();
    Ok(Some(steps))
}

/// One classification row of a family scan.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub ring: String,
    pub extremal: bool,
    pub c: f64,
    pub sqrt_units: f64,
}

/// Scan outcome; the law counters say how many instances of the product and
/// radical corollaries were verified along the way.
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub rows: Vec<ScanRow>,
    pub product_law_checked: usize,
    pub radical_law_checked: usize,
}

/// Classifies a family of rings and verifies the product law (a product is
/// extremal iff some factor is) and the radical law (an extremal semisimple
/// quotient forces extremality) on every applicable member.
pub fn extremal_scan(rings: &[Ring]) -> Result<ScanOutcome> {
    let mut rows = Vec::with_capacity(rings.len());
    let mut product_law_checked = 0;
    let mut radical_law_checked = 0;
    for ring in rings {
        let cert = is_extremal(ring)?;
        let c = crate::charsum::salem_constant(ring)?;
        rows.push(ScanRow {
            ring: ring.spec().to_string(),
            extremal: cert.extremal,
            c,
            sqrt_units: (ring.units().len() as f64).sqrt(),
        });

        if let crate::ring::RingSpec::Product(factors) = ring.spec() {
            let mut any_factor_extremal = false;
            for f in factors {
                let fr = Ring::with_guard(f.clone(), ring.guard())?;
                if is_extremal(&fr)?.extremal {
                    any_factor_extremal = true;
                }
            }
            if any_factor_extremal != cert.extremal {
                return Err(Error::Invariant(format!(
                    "product law violated for {}",
                    ring.spec()
                )));
            }
            product_law_checked += 1;
        }
        if ring.spec().radical_size() > 1 {
            let quotient = Ring::with_guard(ring.spec().radical_quotient(), ring.guard())?;
            if is_extremal(&quotient)?.extremal && !cert.extremal {
                return Err(Error::Invariant(format!(
                    "radical law violated for {}",
                    ring.spec()
                )));
            }
            radical_law_checked += 1;
        }
    }
    Ok(ScanOutcome { rows, product_law_checked, radical_law_checked })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DEFAULT_SIZE_GUARD;

    fn ring(text: &str) -> Ring {
        Ring::parse(text, DEFAULT_SIZE_GUARD).unwrap()
    }

    #[test]
    fn closure_of_nothing_is_origin() {
        let r = ring("Z/5");
        let c = additive_closure(&r, &[]).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.contains(0, 0));
    }

    #[test]
    fn f5_shifted_hyperbola_generates_everything() {
        // shifts (u-1, u^-1-1) for u in F_5*: (0,0), (1,2), (2,1), (3,3)
        let r = ring("GF(5)");
        let pts = [(0, 0), (1, 2), (2, 1), (3, 3)];
        let c = additive_closure(&r, &pts).unwrap();
        assert_eq!(c.len(), 25);
    }

    #[test]
    fn z8_diagonal_closure() {
        let r = ring("Z/8");
        let pts = [(0, 0), (2, 2), (4, 4), (6, 6)];
        let c = additive_closure(&r, &pts).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c.elements(), vec![(0, 0), (2, 2), (4, 4), (6, 6)]);
    }

    #[test]
    fn field_extremality_matches_classification() {
        for (q, expect) in [(2u64, true), (3, true), (4, true), (5, false), (7, false)] {
            let r = Ring::new(crate::ring::RingSpec::galois_field(q).unwrap()).unwrap();
            let cert = is_extremal(&r).unwrap();
            assert_eq!(cert.extremal, expect, "field of order {q}");
            if expect {
                let (m, n) = cert.witness.unwrap();
                assert!((m, n) != (0, 0));
            } else {
                assert_eq!(cert.closure_size, q * q);
            }
        }
    }

    #[test]
    fn boolean_twist_is_extremal() {
        let r = ring("Z/3 x GF(2)");
        assert!(is_extremal(&r).unwrap().extremal);
    }

    #[test]
    fn z8_is_extremal_with_witness() {
        let r = ring("Z/8");
        let cert = is_extremal(&r).unwrap();
        assert!(cert.extremal);
        assert_eq!(cert.closure_size, 4);
        let (m, n) = cert.witness.unwrap();
        // the witness character is constant on the hyperbola
        let l = r.additive_exponent();
        let base = (r.phase(m, 1) + r.phase(n, 1)) % l;
        for (u, v) in r.units().pairs() {
            assert_eq!((r.phase(m, u) + r.phase(n, v)) % l, base);
        }
    }

    #[test]
    fn witness_agrees_with_argmax_scale() {
        // for extremal rings |K(witness)| = |R*|
        for text in ["Z/8", "GF(4)", "Z/4", "GF(3)"] {
            let r = ring(text);
            let cert = is_extremal(&r).unwrap();
            assert!(cert.extremal, "{text}");
            let (m, n) = cert.witness.unwrap();
            let k = crate::charsum::kloosterman_sum(&r, m, n);
            assert!(
                (k.norm() - r.units().len() as f64).abs() < 1e-9,
                "{text}: |K| = {}",
                k.norm()
            );
        }
    }

    #[test]
    fn normalized_sum_solver() {
        let r = ring("GF(5)");
        // (0,0): single unit 1
        let sol = sum_of_units(&r, 0, 0, SumForm::Normalized).unwrap().unwrap();
        assert_eq!(sol, vec![1]);
        // arbitrary target in a non-extremal ring is reachable
        let sol = sum_of_units(&r, 3, 1, SumForm::Normalized).unwrap().unwrap();
        assert!(validate_sum(&r, &sol, 3, 1, SumForm::Normalized));
    }

    #[test]
    fn plain_sum_solver() {
        let r = ring("GF(5)");
        let sol = sum_of_units(&r, 0, 0, SumForm::Plain).unwrap().unwrap();
        assert!(validate_sum(&r, &sol, 0, 0, SumForm::Plain));
        // 1 + 4 = 0 and 1 + 4 = 0, so two steps suffice and BFS finds them
        assert_eq!(sol.len(), 2);
    }

    #[test]
    fn unreachable_target_in_extremal_ring() {
        let r = ring("Z/8");
        assert!(sum_of_units(&r, 1, 0, SumForm::Normalized).unwrap().is_none());
    }

    #[test]
    fn basis_decompositions_for_nonextremal() {
        let r = ring("GF(5)");
        let cert = is_extremal(&r).unwrap();
        let decomp = cert.basis_decompositions(&r).unwrap();
        assert_eq!(decomp.len(), 2); // (1,0) and (0,1)
        for ((a, b), units) in decomp {
            assert!(validate_sum(&r, &units, a, b, SumForm::Normalized));
        }
    }

    #[test]
    fn scan_family_with_laws() {
        let rings: Vec<Ring> = ["GF(2)", "GF(5)", "Z/4", "Z/9", "Z/3 x GF(2)", "Z/5 x Z/7"]
            .iter()
            .map(|t| ring(t))
            .collect();
        let outcome = extremal_scan(&rings).unwrap();
        assert_eq!(outcome.rows.len(), 6);
        assert_eq!(outcome.product_law_checked, 2);
        assert!(outcome.radical_law_checked >= 2); // Z/4 and Z/9
        let by_name: std::collections::HashMap<_, _> =
            outcome.rows.iter().map(|r| (r.ring.clone(), r.extremal)).collect();
        assert_eq!(by_name["GF(2)"], true);
        assert_eq!(by_name["GF(5)"], false);
        assert_eq!(by_name["Z/4"], true);
        assert_eq!(by_name["Z/3 x GF(2)"], true);
        assert_eq!(by_name["Z/5 x Z/7"], false);
    }

    #[test]
    fn matrix_ring_verdicts() {
        // M2(GF(2)) attains C = sqrt(|GL_2(F_2)|) = sqrt(6); M2(GF(3)) does not.
        let m2f2 = ring("M2(GF(2))");
        let cert = is_extremal(&m2f2).unwrap();
        assert!(cert.extremal);
        let c = crate::charsum::salem_constant(&m2f2).unwrap();
        assert!((c - 6f64.sqrt()).abs() < 1e-9);

        let m2f3 = ring("M2(GF(3))");
        assert!(!is_extremal(&m2f3).unwrap().extremal);
    }

    #[test]
    fn exact_matches_analytic_on_family() {
        for text in ["GF(2)", "GF(3)", "GF(4)", "GF(5)", "GF(7)", "Z/4", "Z/6", "Z/9", "Z/8"] {
            let r = ring(text);
            let cert = is_extremal(&r).unwrap();
            let c = crate::charsum::salem_constant(&r).unwrap();
            let sqrt_units = (r.units().len() as f64).sqrt();
            assert_eq!(
                cert.extremal,
                (c - sqrt_units).abs() < 1e-9,
                "{text}: C = {c}, sqrt = {sqrt_units}"
            );
        }
    }
}
