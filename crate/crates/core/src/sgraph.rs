//! S-graphs: Cayley-type graphs on R^d whose connection set is a symmetric
//! subset S, with spectra read off the Fourier coefficients of S.
//!
//! Vertices are the elements of R^d under the same mixed-radix indexing the
//! ring module uses, v1 ~ v2 iff v1 - v2 lies in S. Each additive character
//! chi_m is an eigenvector of the adjacency operator with eigenvalue
//! sum_{s in S} chi_m(-s), so the whole spectrum comes from |R|^d character
//! sums instead of an eigensolver. Adjacency stays virtual (neighbor = v + s);
//! edges materialize only for export and traversal cross-checks.

use crate::charsum;
use crate::error::{Error, Result};
use crate::extremal;
use crate::ring::Ring;
use num_complex::Complex64;
use rayon::prelude::*;

/// Cap on |R|^d vertices.
pub const GRAPH_GUARD: u64 = 1 << 20;
/// Cap on vertices * degree for edge materialization.
pub const EDGE_GUARD: u64 = 1 << 24;
/// Exact independence/chromatic numbers are attempted only up to this order.
pub const EXACT_GUARD: u64 = 64;

/// An S-graph over R^d.
#[derive(Debug)]
pub struct SGraph {
    module: Ring,
    base_ring: String,
    dim: u32,
    set: Vec<u64>,
}

impl SGraph {
    pub fn vertices(&self) -> u64 {
        self.module.size()
    }

    pub fn degree(&self) -> u64 {
        self.set.len() as u64
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn has_loops(&self) -> bool {
        self.set.binary_search(&0).is_ok()
    }

    pub fn connection_set(&self) -> &[u64] {
        &self.set
    }

    /// The module R^d as a ring (products use componentwise structure).
    pub fn module(&self) -> &Ring {
        &self.module
    }

    pub fn base_ring(&self) -> &str {
        &self.base_ring
    }

    /// Deterministic neighbor iteration: v + s in connection-set order.
    pub fn neighbors(&self, v: u64) -> impl Iterator<Item = u64> + '_ {
        self.set.iter().map(move |&s| self.module.add(v, s))
    }

    /// Edge-list text: `# vertices=N degree=d ring=<spec>` then one edge per
    /// line "u v" with u < v, loops as "u u".
    pub fn edge_list(&self) -> Result<String> {
        let n = self.vertices();
        match n.checked_mul(self.degree()) {
            Some(w) if w <= EDGE_GUARD => {}
            w => {
                return Err(Error::GuardExceeded {
                    needed: w.unwrap_or(u64::MAX),
                    guard: EDGE_GUARD,
                })
            }
        }
        let mut out = String::new();
        out.push_str(&format!(
            "# vertices={} degree={} ring={}\n",
            n,
            self.degree(),
            self.base_ring
        ));
        for v in 0..n {
            for w in self.neighbors(v) {
                if w > v {
                    out.push_str(&format!("{v} {w}\n"));
                } else if w == v {
                    out.push_str(&format!("{v} {v}\n"));
                }
            }
        }
        Ok(out)
    }
}

/// Builds the S-graph after validating that S is symmetric.
pub fn build_sgraph(base: &Ring, dim: u32, set: Vec<u64>) -> Result<SGraph> {
    if dim == 0 {
        return Err(Error::InvalidParameter("graph dimension must be >= 1".into()));
    }
    let module_spec = base.spec().power(dim)?;
    let module = Ring::with_guard(module_spec, GRAPH_GUARD)?;
    let mut set = set;
    set.sort_unstable();
    set.dedup();
    if let Some(&bad) = set.iter().find(|&&s| s >= module.size()) {
        return Err(Error::InvalidParameter(format!("set element {bad} outside the module")));
    }
    for &s in &set {
        let neg = module.neg(s);
        if set.binary_search(&neg).is_err() {
            return Err(Error::AsymmetricSet { elem: s });
        }
    }
    Ok(SGraph { module, base_ring: base.spec().to_string(), dim, set })
}

/// The hyperbola graph: d = 2 and S = {(u, u^-1)}.
pub fn hyperbola_graph(base: &Ring) -> Result<SGraph> {
    let n = base.size();
    let set: Vec<u64> = base.units().pairs().map(|(u, v)| u * n + v).collect();
    build_sgraph(base, 2, set)
}

/// The sphere {x in R^d : x_1^2 + ... + x_d^2 = t} as a connection set
/// (symmetric since squaring kills signs).
pub fn sphere_set(base: &Ring, dim: u32, t: u64) -> Result<Vec<u64>> {
    let module_spec = base.spec().power(dim)?;
    let module = Ring::with_guard(module_spec, GRAPH_GUARD)?;
    let n = base.size();
    let mut out = Vec::new();
    for v in 0..module.size() {
        let mut acc = 0u64;
        let mut rest = v;
        for _ in 0..dim {
            let x = rest % n;
            rest /= n;
            acc = base.add(acc, base.mul(x, x));
        }
        if acc == t {
            out.push(v);
        }
    }
    Ok(out)
}

/// Fourier-derived spectrum and the verdicts read from it.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub vertices: u64,
    pub degree: u64,
    /// Eigenvalue of chi_m at index m.
    pub eigenvalues: Vec<f64>,
    /// Largest eigenvalue; equals the degree.
    pub top: f64,
    /// Second-largest magnitude after removing one copy of the top eigenvalue.
    pub lambda2: f64,
    /// degree - lambda2, clamped at zero.
    pub spectral_gap: f64,
    /// Multiplicity of the degree eigenvalue = number of components.
    pub components: usize,
    pub connected: bool,
    /// Multiplicity of -degree = number of bipartite components.
    pub bipartite_components: usize,
    /// True when -degree occurs, i.e. some component is bipartite.
    pub has_bipartite_component: bool,
}

/// Computes all |R|^d eigenvalues as character sums over the connection set.
pub fn spectrum(graph: &SGraph) -> Result<SpectralReport> {
    let module = &graph.module;
    let n = module.size();
    let deg = graph.degree() as f64;
    let negs: Vec<u64> = graph.set.iter().map(|&s| module.neg(s)).collect();
    let roots = module.root_table();
    let l = module.additive_exponent();
    let eigenvalues: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &s in &negs {
                acc += roots[(module.phase(m, s) % l) as usize];
            }
            debug_assert!(acc.im.abs() < 1e-9 * deg.max(1.0));
            acc.re
        })
        .collect();

    let tol = 1e-9 * deg.max(1.0);
    let top = deg;
    let components = eigenvalues.iter().filter(|&&e| (e - top).abs() <= tol).count();
    let bipartite_components = eigenvalues.iter().filter(|&&e| (e + top).abs() <= tol).count();
    // drop one copy of the top eigenvalue (m = 0), take the largest magnitude
    let mut lambda2 = 0.0f64;
    let mut skipped_top = false;
    for &e in &eigenvalues {
        if !skipped_top && (e - top).abs() <= tol {
            skipped_top = true;
            continue;
        }
        lambda2 = lambda2.max(e.abs());
    }
    Ok(SpectralReport {
        vertices: n,
        degree: graph.degree(),
        top,
        lambda2,
        spectral_gap: (top - lambda2).max(0.0),
        components,
        connected: components == 1,
        bipartite_components,
        has_bipartite_component: bipartite_components > 0,
        eigenvalues,
    })
}

/// Traversal-side connectivity data, cross-checked against the spectrum.
#[derive(Debug, Clone)]
pub struct ConnectivityReport {
    pub components: usize,
    pub connected: bool,
    /// Sizes of the components in discovery order.
    pub component_sizes: Vec<u64>,
    pub bipartite_components: usize,
    /// Whole graph 2-colorable (every component bipartite).
    pub bipartite: bool,
}

/// BFS components and per-component 2-colorability. When a spectral report is
/// supplied, the component counts must match it exactly.
pub fn connectivity_report(
    graph: &SGraph,
    spectral: Option<&SpectralReport>,
) -> Result<ConnectivityReport> {
    let n = graph.vertices();
    let mut color: Vec<i8> = vec![-1; n as usize];
    let mut components = 0usize;
    let mut bipartite_components = 0usize;
    let mut component_sizes = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if color[start as usize] >= 0 {
            continue;
        }
        components += 1;
        let mut size = 0u64;
        let mut two_colorable = true;
        color[start as usize] = 0;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            size += 1;
            let cv = color[v as usize];
            for w in graph.neighbors(v) {
                if color[w as usize] < 0 {
                    color[w as usize] = 1 - cv;
                    queue.push_back(w);
                } else if color[w as usize] == cv {
                    two_colorable = false;
                }
            }
        }
        if two_colorable {
            bipartite_components += 1;
        }
        component_sizes.push(size);
    }
    let report = ConnectivityReport {
        components,
        connected: components == 1,
        component_sizes,
        bipartite_components,
        bipartite: bipartite_components == components,
    };
    if let Some(s) = spectral {
        if s.components != report.components {
            return Err(Error::Invariant(format!(
                "spectral component count {} != traversal count {}",
                s.components, report.components
            )));
        }
        if s.bipartite_components != report.bipartite_components {
            return Err(Error::Invariant(format!(
                "spectral bipartite count {} != traversal count {}",
                s.bipartite_components, report.bipartite_components
            )));
        }
    }
    Ok(report)
}

/// Spectral gap of a hyperbola graph from the closed form |R*| - C sqrt(|R*|).
#[derive(Debug, Clone)]
pub struct GapReport {
    pub gap: f64,
    /// Set when the ring is extremal; the closed form does not apply and the
    /// gap is zero.
    pub extremal: bool,
}

pub fn hyperbola_spectral_gap(ring: &Ring, c: f64) -> Result<GapReport> {
    let cert = extremal::is_extremal(ring)?;
    let units = ring.units().len() as f64;
    if cert.extremal {
        return Ok(GapReport { gap: 0.0, extremal: true });
    }
    Ok(GapReport { gap: units - c * units.sqrt(), extremal: false })
}

/// One time step of the uniform-walk deviation table.
#[derive(Debug, Clone)]
pub struct WalkRow {
    pub t: u32,
    /// max over start i and target j of |p_ij^t - 1/N|
    pub max_deviation: f64,
    /// (C / sqrt(|R*|))^t
    pub bound: f64,
}

/// Simulates the uniform random walk exactly (dense probability vectors from
/// every start vertex) and compares each step's worst deviation from uniform
/// with the spectral bound. Requires a non-extremal ring.
pub fn random_walk_check(
    ring: &Ring,
    graph: &SGraph,
    c: f64,
    t_max: u32,
) -> Result<Vec<WalkRow>> {
    if extremal::is_extremal(ring)?.extremal {
        return Err(Error::ExtremalRing);
    }
    let n = graph.vertices() as usize;
    let deg = graph.degree() as f64;
    let uniform = 1.0 / n as f64;
    let ratio = c / deg.sqrt();
    // neighbor table: walks revisit it t_max times per start
    let mut nbrs: Vec<u32> = Vec::with_capacity(n * graph.degree() as usize);
    for v in 0..graph.vertices() {
        for w in graph.neighbors(v) {
            nbrs.push(w as u32);
        }
    }
    let d = graph.degree() as usize;
    let mut max_dev = vec![0.0f64; t_max as usize + 1];
    for start in 0..n {
        let mut p = vec![0.0f64; n];
        p[start] = 1.0;
        let dev0 = p.iter().map(|&x| (x - uniform).abs()).fold(0.0, f64::max);
        max_dev[0] = max_dev[0].max(dev0);
        for t in 1..=t_max as usize {
            let mut next = vec![0.0f64; n];
            for (v, &pv) in p.iter().enumerate() {
                if pv == 0.0 {
                    continue;
                }
                let share = pv / deg;
                for &w in &nbrs[v * d..(v + 1) * d] {
                    next[w as usize] += share;
                }
            }
            p = next;
            let dev = p.iter().map(|&x| (x - uniform).abs()).fold(0.0, f64::max);
            max_dev[t] = max_dev[t].max(dev);
        }
    }
    Ok((0..=t_max)
        .map(|t| WalkRow { t, max_deviation: max_dev[t as usize], bound: ratio.powi(t as i32) })
        .collect())
}

#[derive(Debug, Clone)]
pub struct ExpanderReport {
    /// (1 - C / sqrt(|R*|)) / 2
    pub epsilon: f64,
    /// C <= 2 sqrt(1 - 1/|R*|)
    pub ramanujan: bool,
}

/// Expander ratio and the Ramanujan verdict for the hyperbola graph of a
/// non-extremal ring.
pub fn expander_and_ramanujan(ring: &Ring, c: f64) -> Result<ExpanderReport> {
    if extremal::is_extremal(ring)?.extremal {
        return Err(Error::ExtremalRing);
    }
    let units = ring.units().len() as f64;
    Ok(ExpanderReport {
        epsilon: 0.5 * (1.0 - c / units.sqrt()),
        ramanujan: c <= 2.0 * (1.0 - 1.0 / units).sqrt() + 1e-12,
    })
}

/// Exact pair count against its Fourier-side expansion.
#[derive(Debug, Clone)]
pub struct CountReport {
    pub set_size: u64,
    /// n(E): pairs (x, y) in E x E with x - y on the hyperbola, counted
    /// directly.
    pub pair_count: u64,
    /// D(E): the nontrivial part of the Fourier expansion.
    pub discrepancy: f64,
    /// |E|^2 |R*| / |R|^2
    pub main_term: f64,
    /// |n(E) - D(E) - main_term|
    pub residual: f64,
}

/// Counts hyperbola-related pairs in E (a set of R^2 points given as pair
/// indices a * |R| + b) both combinatorially and through the Fourier identity.
pub fn count_pairs(ring: &Ring, e: &[u64]) -> Result<CountReport> {
    let n = ring.size();
    let units = ring.units();
    let mut e = e.to_vec();
    e.sort_unstable();
    e.dedup();
    if let Some(&bad) = e.iter().find(|&&x| x >= n * n) {
        return Err(Error::InvalidParameter(format!("point {bad} outside R^2")));
    }

    // exact count: x - y on the hyperbola
    let mut pair_count = 0u64;
    for &x in &e {
        let (xa, xb) = (x / n, x % n);
        for &y in &e {
            let (ya, yb) = (y / n, y % n);
            let da = ring.sub(xa, ya);
            if units.inverse_of(da) == Some(ring.sub(xb, yb)) {
                pair_count += 1;
            }
        }
    }

    // Fourier side: (1/|R|^2) sum_{m != 0} |e(m)|^2 K(m)
    let table = charsum::kloosterman_table(ring)?;
    let l = ring.additive_exponent();
    let roots = ring.root_table();
    let neg_parts: Vec<(u64, u64)> =
        e.iter().map(|&x| (ring.neg(x / n), ring.neg(x % n))).collect();
    let rows: Vec<Complex64> = (0..n * n)
        .into_par_iter()
        .map(|m| {
            let (m1, m2) = (m / n, m % n);
            let mut acc = Complex64::new(0.0, 0.0);
            for &(na, nb) in &neg_parts {
                let t = (ring.phase(m1, na) + ring.phase(m2, nb)) % l;
                acc += roots[t as usize];
            }
            acc.norm_sqr() * table[m as usize]
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (m, v) in rows.iter().enumerate() {
        if m != 0 {
            total += v;
        }
    }
    let q2 = (n * n) as f64;
    let discrepancy = total.re / q2;
    let main_term = (e.len() * e.len()) as f64 * units.len() as f64 / q2;
    let residual = (pair_count as f64 - discrepancy - main_term).abs();
    Ok(CountReport {
        set_size: e.len() as u64,
        pair_count,
        discrepancy,
        main_term,
        residual,
    })
}

/// Size check of one proper principal left ideal against C |R| / sqrt(|R*|).
#[derive(Debug, Clone)]
pub struct IdealBoundRow {
    pub ideal_size: u64,
    pub bound: f64,
    pub pass: bool,
    pub is_radical: bool,
}

/// Verifies the ideal size bound for every proper principal left ideal; the
/// Jacobson radical is always among them for the supported constructors.
pub fn ideal_bound_check(ring: &Ring, c: f64) -> Result<Vec<IdealBoundRow>> {
    let bound = c * ring.size() as f64 / (ring.units().len() as f64).sqrt();
    let radical = ring.jacobson_radical();
    let mut seen_radical = false;
    let mut rows = Vec::new();
    for ideal in ring.principal_left_ideals() {
        if !ideal.proper {
            continue;
        }
        let is_radical = ideal.elems == radical;
        seen_radical |= is_radical;
        rows.push(IdealBoundRow {
            ideal_size: ideal.len() as u64,
            bound,
            pass: ideal.len() as f64 <= bound + 1e-8,
            is_radical,
        });
    }
    if !seen_radical {
        return Err(Error::Invariant(format!(
            "Jacobson radical {radical:?} of {} is not among its principal ideals",
            ring.spec()
        )));
    }
    Ok(rows)
}

/// Independence/chromatic bounds with exact values on small graphs.
#[derive(Debug, Clone)]
pub struct IndepChromReport {
    /// C |R|^2 / sqrt(|R*|), an upper bound on the independence number.
    pub independence_upper: f64,
    /// sqrt(|R*|) / C, a lower bound on the chromatic number.
    pub chromatic_lower: f64,
    /// Exact values via branch and bound, when the graph has at most
    /// `EXACT_GUARD` vertices.
    pub exact_independence: Option<u32>,
    pub exact_chromatic: Option<u32>,
}

pub fn independence_and_chromatic(graph: &SGraph, c: f64) -> Result<IndepChromReport> {
    let n = graph.vertices();
    let deg = graph.degree() as f64;
    let independence_upper = c * n as f64 / deg.sqrt();
    let chromatic_lower = deg.sqrt() / c;
    let (exact_independence, exact_chromatic) = if n <= EXACT_GUARD {
        let adj = adjacency_masks(graph);
        (Some(max_independent_set(&adj)), Some(chromatic_number(&adj)))
    } else {
        (None, None)
    };
    Ok(IndepChromReport {
        independence_upper,
        chromatic_lower,
        exact_independence,
        exact_chromatic,
    })
}

fn adjacency_masks(graph: &SGraph) -> Vec<u64> {
    let n = graph.vertices() as usize;
    let mut adj = vec![0u64; n];
    for v in 0..n as u64 {
        for w in graph.neighbors(v) {
            if w != v {
                adj[v as usize] |= 1 << w;
            }
        }
    }
    adj
}

fn max_independent_set(adj: &[u64]) -> u32 {
    let all = if adj.len() == 64 { u64::MAX } else { (1u64 << adj.len()) - 1 };
    let mut best = 0;
    mis_recurse(adj, all, 0, &mut best);
    best
}

fn mis_recurse(adj: &[u64], cand: u64, current: u32, best: &mut u32) {
    if current + cand.count_ones() <= *best {
        return;
    }
    if cand == 0 {
        *best = current;
        return;
    }
    // branch on the candidate with the most candidate-neighbors
    let mut pick = cand.trailing_zeros();
    let mut pick_deg = 0;
    let mut rest = cand;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        let d = (adj[v as usize] & cand).count_ones();
        if d > pick_deg {
            pick_deg = d;
            pick = v;
        }
    }
    let bit = 1u64 << pick;
    mis_recurse(adj, cand & !bit & !adj[pick as usize], current + 1, best);
    mis_recurse(adj, cand & !bit, current, best);
}

fn chromatic_number(adj: &[u64]) -> u32 {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    // order by descending degree for faster failure
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));
    // greedy upper bound
    let mut colors = vec![u32::MAX; n];
    let mut upper = 1;
    for &v in &order {
        let mut used = 0u64;
        let mut rest = adj[v];
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if colors[w] != u32::MAX {
                used |= 1 << colors[w];
            }
        }
        let c = (0..).find(|&c| used >> c & 1 == 0).unwrap();
        colors[v] = c;
        upper = upper.max(c + 1);
    }
    let lower = greedy_clique(adj).max(1);
    for k in lower..upper {
        let mut colors = vec![u32::MAX; n];
        if try_color(adj, &order, &mut colors, 0, k, 0) {
            return k;
        }
    }
    upper
}

fn greedy_clique(adj: &[u64]) -> u32 {
    let n = adj.len();
    let mut best = 0;
    for start in 0..n {
        let mut clique = 1u32;
        let mut cand = adj[start];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            clique += 1;
            cand &= adj[v];
        }
        best = best.max(clique);
    }
    best
}

fn try_color(
    adj: &[u64],
    order: &[usize],
    colors: &mut Vec<u32>,
    pos: usize,
    k: u32,
    max_used: u32,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    let mut used = 0u64;
    let mut rest = adj[v];
    while rest != 0 {
        let w = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if colors[w] != u32::MAX {
            used |= 1 << colors[w];
        }
    }
    // allow at most one brand-new color to break symmetry
    for c in 0..k.min(max_used + 1) {
        if used >> c & 1 == 0 {
            colors[v] = c;
            if try_color(adj, order, colors, pos + 1, k, max_used.max(c + 1)) {
                return true;
            }
            colors[v] = u32::MAX;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charsum::salem_constant;
    use crate::ring::DEFAULT_SIZE_GUARD;

    fn ring(text: &str) -> Ring {
        Ring::parse(text, DEFAULT_SIZE_GUARD).unwrap()
    }

    #[test]
    fn f3_hyperbola_graph_shape() {
        let r = ring("GF(3)");
        let g = hyperbola_graph(&r).unwrap();
        assert_eq!(g.vertices(), 9);
        assert_eq!(g.degree(), 2);
        assert!(!g.has_loops());
    }

    #[test]
    fn asymmetric_set_rejected() {
        let r = ring("Z/5");
        // {1} is not symmetric in Z/5
        match build_sgraph(&r, 1, vec![1]) {
            Err(Error::AsymmetricSet { elem: 1 }) => {}
            other => panic!("expected asymmetry error, got {other:?}"),
        }
    }

    #[test]
    fn loop_only_graph() {
        let r = ring("Z/4");
        let g = build_sgraph(&r, 1, vec![0]).unwrap();
        assert!(g.has_loops());
        let s = spectrum(&g).unwrap();
        assert_eq!(s.components, 4);
        assert!(s.eigenvalues.iter().all(|&e| (e - 1.0).abs() < 1e-12));
    }

    #[test]
    fn sphere_set_is_symmetric() {
        let r = ring("GF(5)");
        let set = sphere_set(&r, 2, 1).unwrap();
        assert!(!set.is_empty());
        let g = build_sgraph(&r, 2, set).unwrap();
        // x^2 + y^2 = 1 over F_5 has q - (-1|q)-ish points; just check regularity
        assert_eq!(g.degree() as usize, g.connection_set().len());
    }

    #[test]
    fn f3_spectrum_three_triangles() {
        let r = ring("GF(3)");
        let g = hyperbola_graph(&r).unwrap();
        let s = spectrum(&g).unwrap();
        let mut sorted = s.eigenvalues.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        // three K_3 components: {2 x3, -1 x6}
        for (i, &e) in sorted.iter().enumerate() {
            let expect = if i < 3 { 2.0 } else { -1.0 };
            assert!((e - expect).abs() < 1e-9, "eigenvalue {i} = {e}");
        }
        assert_eq!(s.components, 3);
        assert!(!s.connected);
        assert_eq!(s.bipartite_components, 0);
    }

    #[test]
    fn f2_spectrum_two_edges() {
        let r = ring("GF(2)");
        let g = hyperbola_graph(&r).unwrap();
        let s = spectrum(&g).unwrap();
        let mut sorted = s.eigenvalues.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(s.components, 2);
        assert_eq!(s.bipartite_components, 2);
        for (i, &e) in sorted.iter().enumerate() {
            let expect = if i < 2 { 1.0 } else { -1.0 };
            assert!((e - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn f5_spectrum_connected_not_bipartite() {
        let r = ring("GF(5)");
        let g = hyperbola_graph(&r).unwrap();
        let s = spectrum(&g).unwrap();
        assert_eq!(s.components, 1);
        assert!(s.connected);
        assert_eq!(s.bipartite_components, 0);
        assert!((s.top - 4.0).abs() < 1e-12);
        // lambda2 = C sqrt(|R*|) = golden ratio * 2
        let c = salem_constant(&r).unwrap();
        assert!((s.lambda2 - c * 2.0).abs() < 1e-9);
    }

    #[test]
    fn connectivity_matches_spectrum() {
        for text in ["GF(2)", "GF(3)", "GF(4)", "GF(5)", "Z/8", "Z/6"] {
            let r = ring(text);
            let g = hyperbola_graph(&r).unwrap();
            let s = spectrum(&g).unwrap();
            let conn = connectivity_report(&g, Some(&s)).unwrap();
            assert_eq!(conn.components, s.components, "{text}");
        }
    }

    #[test]
    fn spectrum_lies_in_degree_interval() {
        for text in ["GF(5)", "GF(7)", "Z/8", "Z/9", "M2(GF(2))"] {
            let r = ring(text);
            let g = hyperbola_graph(&r).unwrap();
            let s = spectrum(&g).unwrap();
            let d = g.degree() as f64;
            for &e in &s.eigenvalues {
                assert!(e.abs() <= d + 1e-9, "{text}: eigenvalue {e} outside [-{d}, {d}]");
            }
            assert!((s.eigenvalues[0] - d).abs() < 1e-9, "{text}: chi_0 carries the degree");
        }
    }

    #[test]
    fn f4_hyperbola_is_four_k4() {
        let r = ring("GF(4)");
        let g = hyperbola_graph(&r).unwrap();
        let s = spectrum(&g).unwrap();
        let conn = connectivity_report(&g, Some(&s)).unwrap();
        assert_eq!(conn.components, 4);
        assert!(conn.component_sizes.iter().all(|&s| s == 4));
        assert_eq!(conn.bipartite_components, 0);
    }

    #[test]
    fn spectral_trace_identities() {
        for (text, with_loop) in [("GF(5)", false), ("Z/6", false)] {
            let r = ring(text);
            let g = hyperbola_graph(&r).unwrap();
            let s = spectrum(&g).unwrap();
            let trace: f64 = s.eigenvalues.iter().sum();
            let expect = if with_loop { s.vertices as f64 } else { 0.0 };
            assert!((trace - expect).abs() < 1e-7, "{text}: trace = {trace}");
            let sq: f64 = s.eigenvalues.iter().map(|e| e * e).sum();
            let expect2 = (s.vertices * s.degree) as f64;
            assert!((sq - expect2).abs() / expect2 < 1e-9, "{text}: sum sq = {sq}");
        }
        // loop case: S = {0} on Z/4 has trace = N
        let r = ring("Z/4");
        let g = build_sgraph(&r, 1, vec![0]).unwrap();
        let s = spectrum(&g).unwrap();
        let trace: f64 = s.eigenvalues.iter().sum();
        assert!((trace - 4.0).abs() < 1e-12);
    }

    #[test]
    fn gap_formula_and_flag() {
        let f5 = ring("GF(5)");
        let c = salem_constant(&f5).unwrap();
        let gap = hyperbola_spectral_gap(&f5, c).unwrap();
        assert!(!gap.extremal);
        assert!((gap.gap - (4.0 - 2.0 * c)).abs() < 1e-9);
        // matches d - lambda2 from the spectrum
        let g = hyperbola_graph(&f5).unwrap();
        let s = spectrum(&g).unwrap();
        assert!((gap.gap - s.spectral_gap).abs() < 1e-9);

        for extremal_ring in ["GF(3)", "GF(2) x GF(2)"] {
            let r = ring(extremal_ring);
            let c = salem_constant(&r).unwrap();
            let gap = hyperbola_spectral_gap(&r, c).unwrap();
            assert!(gap.extremal);
            assert_eq!(gap.gap, 0.0);
        }
    }

    #[test]
    fn walk_deviation_under_bound() {
        let r = ring("GF(5)");
        let c = salem_constant(&r).unwrap();
        let g = hyperbola_graph(&r).unwrap();
        let rows = random_walk_check(&r, &g, c, 15).unwrap();
        assert!((rows[0].max_deviation - (1.0 - 1.0 / 25.0)).abs() < 1e-12);
        for row in &rows[1..] {
            assert!(
                row.max_deviation <= row.bound + 1e-12,
                "t={}: {} > {}",
                row.t,
                row.max_deviation,
                row.bound
            );
        }
        // deviations decay
        assert!(rows[15].max_deviation < 0.05);
    }

    #[test]
    fn walk_rejects_extremal() {
        let r = ring("GF(3)");
        let c = salem_constant(&r).unwrap();
        let g = hyperbola_graph(&r).unwrap();
        assert!(matches!(random_walk_check(&r, &g, c, 3), Err(Error::ExtremalRing)));
    }

    #[test]
    fn expander_and_ramanujan_values() {
        let f5 = ring("GF(5)");
        let c5 = salem_constant(&f5).unwrap();
        let rep = expander_and_ramanujan(&f5, c5).unwrap();
        assert!((rep.epsilon - 0.5 * (1.0 - c5 / 2.0)).abs() < 1e-12);
        assert!(rep.ramanujan); // golden ratio < sqrt(3)

        // F_7 misses the Ramanujan window: C = 2 + 4 cos(2 pi / 7) / sqrt(6)
        // exceeds 2 sqrt(5/6).
        let f7 = ring("GF(7)");
        let c7 = salem_constant(&f7).unwrap();
        let rep = expander_and_ramanujan(&f7, c7).unwrap();
        assert!(!rep.ramanujan);
        assert!(matches!(
            expander_and_ramanujan(&ring("GF(4)"), 3f64.sqrt()),
            Err(Error::ExtremalRing)
        ));
    }

    #[test]
    fn count_full_square() {
        let r = ring("Z/4");
        let e: Vec<u64> = (0..16).collect();
        let rep = count_pairs(&r, &e).unwrap();
        assert_eq!(rep.pair_count, 16 * 2); // every vertex has |R*| = 2 out-neighbors
        assert!(rep.residual < 1e-6);
    }

    #[test]
    fn count_ideal_strip_is_zero() {
        // E = R x I for the proper ideal I = {0, 2} of Z/4
        let r = ring("Z/4");
        let mut e = Vec::new();
        for a in 0..4u64 {
            for b in [0u64, 2] {
                e.push(a * 4 + b);
            }
        }
        let rep = count_pairs(&r, &e).unwrap();
        assert_eq!(rep.pair_count, 0);
        assert!(rep.residual < 1e-6);
    }

    #[test]
    fn ideal_bound_rows() {
        for text in ["Z/8", "Z/9", "M2(GF(2))"] {
            let r = ring(text);
            let c = salem_constant(&r).unwrap();
            let rows = ideal_bound_check(&r, c).unwrap();
            assert!(rows.iter().any(|row| row.is_radical), "{text}");
            for row in rows {
                assert!(row.pass, "{text}: ideal of size {}", row.ideal_size);
            }
        }
        // fields only have the zero ideal
        let f7 = ring("GF(7)");
        let rows = ideal_bound_check(&f7, salem_constant(&f7).unwrap()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].ideal_size, 1);
    }

    #[test]
    fn f3_exact_independence_and_chromatic() {
        let r = ring("GF(3)");
        let g = hyperbola_graph(&r).unwrap();
        let c = salem_constant(&r).unwrap();
        let rep = independence_and_chromatic(&g, c).unwrap();
        // three disjoint triangles: one vertex per triangle, three colors
        assert_eq!(rep.exact_independence, Some(3));
        assert_eq!(rep.exact_chromatic, Some(3));
        assert!(3.0 <= rep.independence_upper + 1e-9);
        assert!(3.0 >= rep.chromatic_lower - 1e-9);
    }

    #[test]
    fn f5_exact_values_respect_bounds() {
        let r = ring("GF(5)");
        let g = hyperbola_graph(&r).unwrap();
        let c = salem_constant(&r).unwrap();
        let rep = independence_and_chromatic(&g, c).unwrap();
        let alpha = rep.exact_independence.unwrap();
        let chi = rep.exact_chromatic.unwrap();
        assert!(alpha as f64 <= rep.independence_upper + 1e-9);
        assert!(chi as f64 >= rep.chromatic_lower - 1e-9);
        // the 25-vertex graph contains 5-cycles, so it needs at least 3 colors
        assert!(chi >= 3);
        assert!(alpha >= 1 && alpha <= 25);
    }

    #[test]
    fn edge_list_format() {
        let r = ring("GF(3)");
        let g = hyperbola_graph(&r).unwrap();
        let text = g.edge_list().unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# vertices=9 degree=2 ring=GF(3)");
        let edges: Vec<&str> = lines.collect();
        // 9 vertices, 2-regular, no loops: 9 edges
        assert_eq!(edges.len(), 9);
        for e in edges {
            let parts: Vec<u64> = e.split(' ').map(|p| p.parse().unwrap()).collect();
            assert!(parts[0] < parts[1]);
        }
    }

    #[test]
    fn product_spectra_are_pointwise_products() {
        let f2 = ring("Z/2");
        let f3 = ring("Z/3");
        let prod = ring("Z/2 x Z/3");
        let s2 = spectrum(&hyperbola_graph(&f2).unwrap()).unwrap();
        let s3 = spectrum(&hyperbola_graph(&f3).unwrap()).unwrap();
        let sp = spectrum(&hyperbola_graph(&prod).unwrap()).unwrap();
        let mut expect: Vec<f64> = s2
            .eigenvalues
            .iter()
            .flat_map(|&a| s3.eigenvalues.iter().map(move |&b| a * b))
            .collect();
        let mut got = sp.eigenvalues.clone();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(expect.len(), got.len());
        for (e, g) in expect.iter().zip(&got) {
            assert!((e - g).abs() < 1e-9);
        }
    }
}
