//! Crystallographic root systems as exact integer vectors.
//!
//! Systems are built from type descriptors (`A2`, `G2`, `BC3`, `A1,A1`) in
//! standard realizations, or from raw vector sets which are then validated
//! against the axioms (closure under reflections, integral Cartan pairings).
//! All geometric predicates (cones, angles, hyperplanes) are decided in
//! exact integer or rational arithmetic.
//!
//! Roots are addressed by index into a lexicographically sorted vector list;
//! every set-valued answer comes back sorted by that order.

use crate::error::{Error, Result};
use num_integer::Integer;
use num_rational::Rational64;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Index of a root in its system's canonical ordering.
pub type RootIdx = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum LengthClass {
    Long,
    Short,
    /// Roots `a` with `2a` also a root (non-reduced components only).
    Ultrashort,
}

/// One irreducible component of a system.
#[derive(Clone, Debug)]
pub struct Component {
    /// Indices of member roots, sorted.
    pub members: Vec<RootIdx>,
    /// `A1`, `B3`, `BC2`, ...
    pub label: String,
    /// Dimension of the span of the members.
    pub rank: usize,
}

struct SystemInner {
    name: String,
    ambient: usize,
    rank: usize,
    roots: Vec<Vec<i64>>,
    index: BTreeMap<Vec<i64>, RootIdx>,
    neg: Vec<RootIdx>,
    components: Vec<Component>,
    /// Component id per root.
    component_of: Vec<usize>,
    length: Vec<LengthClass>,
    /// True iff `2a` is not a root (the reduced subsystem marker).
    reduced_marker: Vec<bool>,
    neighbor_cache: OnceLock<Vec<Vec<RootIdx>>>,
}

/// A root system. Cheap to clone (shared internals).
#[derive(Clone)]
pub struct RootSystem(Arc<SystemInner>);

impl fmt::Debug for RootSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootSystem({}, {} roots)", self.0.name, self.0.roots.len())
    }
}

impl PartialEq for RootSystem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ambient == other.0.ambient && self.0.roots == other.0.roots)
    }
}
impl Eq for RootSystem {}

/// Parses a descriptor such as `A2`, `G2`, `BC3`, or `A1,A1` (optionally
/// wrapped in brackets) and builds the system in its standard realization.
pub fn build_root_system(descriptor: &str) -> Result<RootSystem> {
    let body = descriptor.trim().trim_start_matches('[').trim_end_matches(']');
    let mut blocks: Vec<Vec<Vec<i64>>> = Vec::new();
    let mut labels = Vec::new();
    for part in body.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(Error::Parse(format!("empty component in `{descriptor}`")));
        }
        let split = part.find(|c: char| c.is_ascii_digit()).ok_or_else(|| {
            Error::Parse(format!("missing rank in `{part}`"))
        })?;
        let (ty, rank_src) = part.split_at(split);
        let rank: usize = rank_src
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank in `{part}`")))?;
        blocks.push(standard_realization(ty, rank)?);
        labels.push(part.to_string());
    }
    // Direct sum: place each block in its own coordinate window.
    let dims: Vec<usize> = blocks.iter().map(|b| b[0].len()).collect();
    let total: usize = dims.iter().sum();
    let mut vectors = Vec::new();
    let mut offset = 0;
    for (block, d) in blocks.iter().zip(&dims) {
        for r in block {
            let mut v = vec![0i64; total];
            v[offset..offset + d].copy_from_slice(r);
            vectors.push(v);
        }
        offset += d;
    }
    let sys = RootSystem::from_roots(vectors)?;
    Ok(sys)
}

/// Standard integer realizations. Types with intrinsically half-integral
/// coordinates (E, F) are scaled by 2, which changes no root-system data.
fn standard_realization(ty: &str, rank: usize) -> Result<Vec<Vec<i64>>> {
    let e = |i: usize, d: usize, c: i64| -> Vec<i64> {
        let mut v = vec![0i64; d];
        v[i] = c;
        v
    };
    let pm2 = |d: usize| -> Vec<Vec<i64>> {
        // All +-e_i +- e_j, i < j.
        let mut out = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![0i64; d];
                    v[i] = si;
                    v[j] = sj;
                    out.push(v);
                }
            }
        }
        out
    };
    let bad = || Error::Parse(format!("invalid rank {rank} for type {ty}"));
    match ty {
        "A" => {
            if rank < 1 {
                return Err(bad());
            }
            let d = rank + 1;
            let mut out = Vec::new();
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        let mut v = vec![0i64; d];
                        v[i] = 1;
                        v[j] = -1;
                        out.push(v);
                    }
                }
            }
            Ok(out)
        }
        "B" => {
            if rank < 1 {
                return Err(bad());
            }
            let mut out = pm2(rank);
            for i in 0..rank {
                out.push(e(i, rank, 1));
                out.push(e(i, rank, -1));
            }
            Ok(out)
        }
        "C" => {
            if rank < 1 {
                return Err(bad());
            }
            let mut out = pm2(rank);
            for i in 0..rank {
                out.push(e(i, rank, 2));
                out.push(e(i, rank, -2));
            }
            Ok(out)
        }
        "D" => {
            if rank < 2 {
                return Err(bad());
            }
            Ok(pm2(rank))
        }
        "BC" => {
            if rank < 1 {
                return Err(bad());
            }
            let mut out = pm2(rank);
            for i in 0..rank {
                for c in [1, -1, 2, -2] {
                    out.push(e(i, rank, c));
                }
            }
            Ok(out)
        }
        "G" => {
            if rank != 2 {
                return Err(bad());
            }
            // In the sum-zero hyperplane of R^3: short +-(e_i - e_j) and
            // long +-(2e_i - e_j - e_k).
            let mut out = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    if i != j {
                        let mut v = vec![0i64; 3];
                        v[i] = 1;
                        v[j] = -1;
                        out.push(v);
                    }
                }
                let w: Vec<i64> = (0..3).map(|k| if k == i { 2 } else { -1 }).collect();
                out.push(neg_vec(&w));
                out.push(w);
            }
            Ok(out)
        }
        "F" => {
            if rank != 4 {
                return Err(bad());
            }
            // Scaled by 2: +-2e_i +- 2e_j, +-2e_i, and all +-e1+-e2+-e3+-e4.
            let mut out: Vec<Vec<i64>> =
                pm2(4).into_iter().map(|v| v.iter().map(|x| 2 * x).collect()).collect();
            for i in 0..4 {
                out.push(e(i, 4, 2));
                out.push(e(i, 4, -2));
            }
            for mask in 0..16u32 {
                out.push((0..4).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
            }
            Ok(out)
        }
        "E" => {
            if !(6..=8).contains(&rank) {
                return Err(bad());
            }
            // E8 scaled by 2: +-2e_i +- 2e_j and sum +-e_i with an even
            // number of minus signs; E7 and E6 are the subsystems orthogonal
            // to e7+e8 (and additionally e6+e8 for E6).
            let mut e8: Vec<Vec<i64>> =
                pm2(8).into_iter().map(|v| v.iter().map(|x| 2 * x).collect()).collect();
            for mask in 0..256u32 {
                if mask.count_ones() % 2 == 0 {
                    e8.push((0..8).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
                }
            }
            let constraints: Vec<Vec<i64>> = match rank {
                8 => vec![],
                7 => vec![{
                    let mut v = vec![0i64; 8];
                    v[6] = 1;
                    v[7] = 1;
                    v
                }],
                _ => vec![
                    {
                        let mut v = vec![0i64; 8];
                        v[6] = 1;
                        v[7] = 1;
                        v
                    },
                    {
                        let mut v = vec![0i64; 8];
                        v[5] = 1;
                        v[7] = 1;
                        v
                    },
                ],
            };
            Ok(e8
                .into_iter()
                .filter(|r| constraints.iter().all(|c| dot(r, c) == 0))
                .collect())
        }
        _ => Err(Error::Parse(format!("unknown system type `{ty}`"))),
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn neg_vec(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

impl RootSystem {
    /// Validates a raw vector set as a root system and classifies it.
    pub fn from_roots(mut vectors: Vec<Vec<i64>>) -> Result<RootSystem> {
        vectors.sort();
        vectors.dedup();
        if vectors.is_empty() {
            return Err(Error::Domain("empty root set".into()));
        }
        let ambient = vectors[0].len();
        let mut index = BTreeMap::new();
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != ambient {
                return Err(Error::Domain("mixed ambient dimensions".into()));
            }
            if v.iter().all(|&x| x == 0) {
                return Err(Error::Domain("zero vector in root set".into()));
            }
            index.insert(v.clone(), i);
        }
        // Axioms: integral pairings and reflection closure (negation closure
        // is the case b = a of the reflection s_a(a) = -a).
        for a in &vectors {
            let na = dot(a, a);
            for b in &vectors {
                let p = 2 * dot(b, a);
                if p % na != 0 {
                    return Err(Error::Domain(format!(
                        "Cartan pairing of {b:?} against {a:?} is not integral"
                    )));
                }
                let c = p / na;
                let refl: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - c * y).collect();
                if !index.contains_key(&refl) {
                    return Err(Error::Domain(format!(
                        "reflection of {b:?} in {a:?} leaves the set"
                    )));
                }
            }
        }
        let neg: Vec<RootIdx> = vectors.iter().map(|v| index[&neg_vec(v)]).collect();
        let rank = rank_of(&vectors);

        // Components: connectivity of the non-orthogonality graph.
        let n = vectors.len();
        let mut comp_of = vec![usize::MAX; n];
        let mut comps: Vec<Vec<RootIdx>> = Vec::new();
        for start in 0..n {
            if comp_of[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp_of[start] = id;
            while let Some(i) = stack.pop() {
                members.push(i);
                for j in 0..n {
                    if comp_of[j] == usize::MAX && dot(&vectors[i], &vectors[j]) != 0 {
                        comp_of[j] = id;
                        stack.push(j);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }

        let reduced_marker: Vec<bool> = vectors
            .iter()
            .map(|v| !index.contains_key(&v.iter().map(|x| 2 * x).collect::<Vec<_>>()))
            .collect();

        // Length classes are assigned per component by norm. Ultrashort
        // roots (2a also a root) are classed separately; the remaining
        // norms split into at most two classes.
        let mut length = vec![LengthClass::Long; n];
        for members in &comps {
            let mut reduced_norms: Vec<i64> = Vec::new();
            for &i in members {
                if !reduced_marker[i] {
                    length[i] = LengthClass::Ultrashort;
                } else {
                    reduced_norms.push(dot(&vectors[i], &vectors[i]));
                }
            }
            reduced_norms.sort_unstable();
            reduced_norms.dedup();
            if reduced_norms.len() > 2 {
                return Err(Error::Domain(
                    "more than two reduced length classes in one component".into(),
                ));
            }
            for &i in members {
                if reduced_marker[i] {
                    let nm = dot(&vectors[i], &vectors[i]);
                    length[i] = if reduced_norms.len() == 2 && nm == reduced_norms[0] {
                        LengthClass::Short
                    } else {
                        LengthClass::Long
                    };
                }
            }
        }

        let components: Vec<Component> = comps
            .iter()
            .map(|members| {
                let vs: Vec<Vec<i64>> = members.iter().map(|&i| vectors[i].clone()).collect();
                let crank = rank_of(&vs);
                let label = classify_component(&vs, crank, members, &length)?;
                Ok(Component { members: members.clone(), label, rank: crank })
            })
            .collect::<Result<_>>()?;
        let name = components
            .iter()
            .map(|c| c.label.clone())
            .collect::<Vec<_>>()
            .join(",");

        Ok(RootSystem(Arc::new(SystemInner {
            name,
            ambient,
            rank,
            roots: vectors,
            index,
            neg,
            components,
            component_of: comp_of,
            length,
            reduced_marker,
            neighbor_cache: OnceLock::new(),
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }
    pub fn ambient_rank(&self) -> usize {
        self.0.ambient
    }
    /// Dimension of the span of the roots.
    pub fn rank(&self) -> usize {
        self.0.rank
    }
    pub fn len(&self) -> usize {
        self.0.roots.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.roots.is_empty()
    }
    pub fn root(&self, i: RootIdx) -> &[i64] {
        &self.0.roots[i]
    }
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.0.roots
    }
    pub fn neg_index(&self, i: RootIdx) -> RootIdx {
        self.0.neg[i]
    }
    pub fn components(&self) -> &[Component] {
        &self.0.components
    }
    pub fn component_of(&self, i: RootIdx) -> usize {
        self.0.component_of[i]
    }
    pub fn length_class(&self, i: RootIdx) -> LengthClass {
        self.0.length[i]
    }
    /// True iff `2a` is not a root (membership in the reduced subsystem).
    pub fn in_reduced_subsystem(&self, i: RootIdx) -> bool {
        self.0.reduced_marker[i]
    }
    pub fn is_reduced(&self) -> bool {
        self.0.reduced_marker.iter().all(|&b| b)
    }
    pub fn is_irreducible(&self) -> bool {
        self.0.components.len() == 1
    }

    pub fn find(&self, v: &[i64]) -> Option<RootIdx> {
        self.0.index.get(v).copied()
    }

    /// Cartan pairing `<b, a^> = 2(b,a)/(a,a)`; always integral.
    pub fn pairing(&self, b: RootIdx, a: RootIdx) -> i64 {
        let (vb, va) = (&self.0.roots[b], &self.0.roots[a]);
        let num = 2 * dot(vb, va);
        let den = dot(va, va);
        debug_assert_eq!(num % den, 0);
        num / den
    }

    /// Index of the reflection `s_a(b)`.
    pub fn reflect(&self, b: RootIdx, a: RootIdx) -> RootIdx {
        let c = self.pairing(b, a);
        let v: Vec<i64> = self.0.roots[b]
            .iter()
            .zip(&self.0.roots[a])
            .map(|(x, y)| x - c * y)
            .collect();
        self.0.index[&v]
    }

    /// The roots adjacent to `a`: linearly independent of it, not orthogonal
    /// to it, and with no root strictly inside the open positive cone the
    /// pair spans.
    pub fn neighbors(&self, a: RootIdx) -> Result<&[RootIdx]> {
        if a >= self.len() {
            return Err(Error::Domain(format!("root index {a} out of range")));
        }
        let cache = self.0.neighbor_cache.get_or_init(|| {
            (0..self.len())
                .map(|i| {
                    (0..self.len())
                        .filter(|&j| self.is_neighbor_pair(i, j))
                        .collect()
                })
                .collect()
        });
        Ok(&cache[a])
    }

    fn is_neighbor_pair(&self, a: RootIdx, b: RootIdx) -> bool {
        let (va, vb) = (self.root(a), self.root(b));
        if !linearly_independent_pair(va, vb) || dot(va, vb) == 0 {
            return false;
        }
        // No root strictly inside the open angle {s va + t vb : s, t > 0}.
        !(0..self.len()).any(|g| {
            in_open_cone_2(self.root(g), va, vb)
        })
    }

    /// Hyperplanes spanned by (rank-1)-subsets of the roots, deduplicated.
    /// Returned as sorted member-index sets (a hyperplane is determined by
    /// the roots it contains).
    pub fn root_spanned_hyperplanes(&self) -> Result<Vec<Vec<RootIdx>>> {
        let r = self.rank();
        if r == 0 {
            return Err(Error::Domain("zero-rank system".into()));
        }
        let n = self.len();
        let k = r - 1;
        if binomial(n, k) > 3_000_000 {
            return Err(Error::CapExceeded(format!(
                "hyperplane enumeration over {n} roots at rank {r}"
            )));
        }
        let mut seen: BTreeSet<Vec<RootIdx>> = BTreeSet::new();
        let mut subset: Vec<RootIdx> = (0..k).collect();
        loop {
            let vs: Vec<Vec<i64>> = subset.iter().map(|&i| self.0.roots[i].clone()).collect();
            if k == 0 || rank_of(&vs) == k {
                // Membership set of the spanned subspace.
                let members: Vec<RootIdx> = (0..n)
                    .filter(|&g| {
                        let mut ext = vs.clone();
                        ext.push(self.0.roots[g].clone());
                        rank_of(&ext) == k
                    })
                    .collect();
                seen.insert(members);
            }
            if k == 0 || !next_combination(&mut subset, n) {
                break;
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Map from each root to its component's minimal norm, used to compare
    /// lengths across realizations.
    pub fn norm(&self, i: RootIdx) -> i64 {
        dot(self.root(i), self.root(i))
    }
}

fn half_vec(v: &[i64]) -> Option<Vec<i64>> {
    if v.iter().all(|x| x % 2 == 0) {
        Some(v.iter().map(|x| x / 2).collect())
    } else {
        None
    }
}

fn linearly_independent_pair(a: &[i64], b: &[i64]) -> bool {
    // Rank-2 test via a nonzero 2x2 minor.
    for p in 0..a.len() {
        for q in (p + 1)..a.len() {
            if a[p] * b[q] - a[q] * b[p] != 0 {
                return true;
            }
        }
    }
    false
}

/// Is `g` strictly inside the open cone `{s a + t b : s, t > 0}`?
/// Exact: solve the (overdetermined) 2-unknown system in integers.
fn in_open_cone_2(g: &[i64], a: &[i64], b: &[i64]) -> bool {
    let d = a.len();
    let (mut p, mut q, mut det) = (usize::MAX, usize::MAX, 0i64);
    'outer: for i in 0..d {
        for j in (i + 1)..d {
            det = a[i] * b[j] - a[j] * b[i];
            if det != 0 {
                p = i;
                q = j;
                break 'outer;
            }
        }
    }
    if det == 0 {
        return false; // a, b dependent: no open angle
    }
    // Cramer: s = (g_p b_q - g_q b_p)/det, t = (a_p g_q - a_q g_p)/det.
    let sn = g[p] * b[q] - g[q] * b[p];
    let tn = a[p] * g[q] - a[q] * g[p];
    // Verify the remaining coordinates: det*g = sn*a + tn*b.
    for i in 0..d {
        if det * g[i] != sn * a[i] + tn * b[i] {
            return false;
        }
    }
    // Strict positivity of s and t (sign relative to det).
    sn.signum() * det.signum() > 0 && tn.signum() * det.signum() > 0
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > 1 << 60 {
            return acc;
        }
    }
    acc
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Rank of an integer vector list, by fraction-free Gaussian elimination
/// over the rationals.
pub(crate) fn rank_of(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rational64>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let pivot = (rank..m.len()).find(|&r| m[r][c] != Rational64::from_integer(0));
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][c];
        for r in 0..m.len() {
            if r != rank && m[r][c] != Rational64::from_integer(0) {
                let factor = m[r][c] / inv;
                for cc in c..cols {
                    let sub = factor * m[rank][cc];
                    m[r][cc] -= sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Solves `sum_i x_i basis_i = target` when `basis` is linearly independent.
/// Returns the unique rational coefficients, or `None` if inconsistent.
pub(crate) fn solve_in_basis(basis: &[&[i64]], target: &[i64]) -> Option<Vec<Rational64>> {
    let rows = target.len();
    let cols = basis.len();
    let zero = Rational64::from_integer(0);
    // Augmented matrix [basis^T | target].
    let mut m: Vec<Vec<Rational64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational64> = (0..cols)
                .map(|c| Rational64::from_integer(basis[c][r]))
                .collect();
            row.push(Rational64::from_integer(target[r]));
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| m[r][c] != zero) else {
            return None; // dependent basis
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][c];
        for r in 0..rows {
            if r != pivot_row && m[r][c] != zero {
                let f = m[r][c] / inv;
                for cc in c..=cols {
                    let sub = f * m[pivot_row][cc];
                    m[r][cc] -= sub;
                }
            }
        }
        pivots.push((pivot_row, c));
        pivot_row += 1;
    }
    // Consistency: rows without pivots must have zero RHS.
    for r in pivot_row..rows {
        if m[r][cols] != zero {
            return None;
        }
    }
    let mut x = vec![zero; cols];
    for (r, c) in pivots {
        x[c] = m[r][cols] / m[r][c];
    }
    Some(x)
}

/// All-positive kernel generator of the column set, restricted to subsets:
/// true iff some nonempty subset of the vectors admits a strictly positive
/// linear dependency. Witness: the subset indices.
fn has_positive_circuit(vectors: &[&[i64]]) -> Option<Vec<usize>> {
    let n = vectors.len();
    if n == 0 {
        return None;
    }
    let d = rank_of(&vectors.iter().map(|v| v.to_vec()).collect::<Vec<_>>());
    // A minimal positive dependency is supported on an affinely minimal set
    // of at most d+1 vectors whose kernel is one-dimensional.
    let kmax = (d + 1).min(n);
    for k in 2..=kmax {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let sub: Vec<&[i64]> = subset.iter().map(|&i| vectors[i]).collect();
            if let Some(dep) = unique_kernel_vector(&sub) {
                let zero = Rational64::from_integer(0);
                if dep.iter().all(|&x| x > zero) || dep.iter().all(|&x| x < zero) {
                    return Some(subset.clone());
                }
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    None
}

/// If the columns have a one-dimensional kernel, returns a generator.
fn unique_kernel_vector(cols: &[&[i64]]) -> Option<Vec<Rational64>> {
    let n = cols.len();
    let rows = cols[0].len();
    let zero = Rational64::from_integer(0);
    let mut m: Vec<Vec<Rational64>> = (0..rows)
        .map(|r| (0..n).map(|c| Rational64::from_integer(cols[c][r])).collect())
        .collect();
    let mut pivot_row = 0;
    let mut pivot_col = vec![None; n];
    for c in 0..n {
        if pivot_row >= rows {
            break;
        }
        let Some(p) = (pivot_row..rows).find(|&r| m[r][c] != zero) else {
            continue;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][c];
        for r in 0..rows {
            if r != pivot_row && m[r][c] != zero {
                let f = m[r][c] / inv;
                for cc in c..n {
                    let sub = f * m[pivot_row][cc];
                    m[r][cc] -= sub;
                }
            }
        }
        pivot_col[c] = Some(pivot_row);
        pivot_row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|&c| pivot_col[c].is_none()).collect();
    if free.len() != 1 {
        return None;
    }
    let fc = free[0];
    let mut x = vec![zero; n];
    x[fc] = Rational64::from_integer(1);
    for c in 0..n {
        if let Some(pr) = pivot_col[c] {
            x[c] = -m[pr][fc] / m[pr][c];
        }
    }
    Some(x)
}

/// Conic membership: is `target` a nonnegative combination of `gens`?
/// Decided via conic Caratheodory: it suffices to scan linearly independent
/// subsets of size at most the rank.
pub(crate) fn in_cone(gens: &[&[i64]], target: &[i64]) -> bool {
    if target.iter().all(|&x| x == 0) {
        return true;
    }
    let n = gens.len();
    if n == 0 {
        return false;
    }
    let zero = Rational64::from_integer(0);
    let d = rank_of(&gens.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).min(n);
    for k in 1..=d {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let sub: Vec<&[i64]> = subset.iter().map(|&i| gens[i]).collect();
            if let Some(coeffs) = solve_in_basis(&sub, target) {
                if coeffs.iter().all(|&c| c >= zero) {
                    return true;
                }
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    false
}

fn classify_component(
    vs: &[Vec<i64>],
    rank: usize,
    members: &[RootIdx],
    length: &[LengthClass],
) -> Result<String> {
    let n = vs.len();
    let nonreduced = members.iter().any(|&i| length[i] == LengthClass::Ultrashort);
    if nonreduced {
        if n == 2 * rank * rank + 2 * rank {
            return Ok(format!("BC{rank}"));
        }
        return Err(Error::Domain(format!(
            "unrecognised non-reduced component: rank {rank}, {n} roots"
        )));
    }
    let shorts = members.iter().filter(|&&i| length[i] == LengthClass::Short).count();
    if shorts == 0 {
        // Simply laced.
        let label = match (rank, n) {
            (r, m) if m == r * (r + 1) => format!("A{r}"),
            (r, m) if r >= 4 && m == 2 * r * (r - 1) => format!("D{r}"),
            (6, 72) => "E6".into(),
            (7, 126) => "E7".into(),
            (8, 240) => "E8".into(),
            _ => {
                return Err(Error::Domain(format!(
                    "unrecognised simply-laced component: rank {rank}, {n} roots"
                )))
            }
        };
        return Ok(label);
    }
    let label = match (rank, n) {
        (2, 12) => "G2".into(),
        (4, 48) => "F4".into(),
        (r, m) if m == 2 * r * r && shorts == 2 * r => format!("B{r}"),
        (r, m) if m == 2 * r * r && shorts == 2 * r * (r - 1) => format!("C{r}"),
        _ => {
            return Err(Error::Domain(format!(
                "unrecognised two-length component: rank {rank}, {n} roots"
            )))
        }
    };
    Ok(label)
}

// ---------------------------------------------------------------------------
// Root subsets
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SubsetKind {
    Generic,
    SaturatedSpecialClosed,
    ThickSeries,
}

/// A subset of a root system's roots, tagged with how it arose.
#[derive(Clone, Debug)]
pub struct RootSubset {
    pub parent: RootSystem,
    /// Sorted member indices.
    pub members: Vec<RootIdx>,
    pub kind: SubsetKind,
    /// For thick series: the (axis, side) witnesses.
    pub witness: Option<(RootIdx, RootIdx)>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SubsetClassification {
    pub saturated_special_closed: bool,
    /// Extreme roots, present only when closed.
    pub extreme_roots: Vec<RootIdx>,
    /// Human-readable reason when not closed.
    pub reason: Option<String>,
}

/// Decides whether the subset is the intersection of the system with a
/// convex cone containing no opposite nonzero vectors, and if so returns
/// its extreme roots.
pub fn classify_subset(system: &RootSystem, members: &[RootIdx]) -> SubsetClassification {
    let mut sorted: Vec<RootIdx> = members.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let gens: Vec<&[i64]> = sorted.iter().map(|&i| system.root(i)).collect();
    if let Some(circuit) = has_positive_circuit(&gens) {
        let witness: Vec<String> = circuit
            .iter()
            .map(|&k| format!("{:?}", system.root(sorted[k])))
            .collect();
        return SubsetClassification {
            saturated_special_closed: false,
            extreme_roots: Vec::new(),
            reason: Some(format!(
                "cone contains opposite vectors: positive dependency over {}",
                witness.join(", ")
            )),
        };
    }
    // Saturation: no root outside the subset may lie in the cone.
    let member_set: BTreeSet<RootIdx> = sorted.iter().copied().collect();
    for g in 0..system.len() {
        if member_set.contains(&g) {
            continue;
        }
        if in_cone(&gens, system.root(g)) {
            return SubsetClassification {
                saturated_special_closed: false,
                extreme_roots: Vec::new(),
                reason: Some(format!(
                    "not saturated: root {:?} lies in the cone but not in the subset",
                    system.root(g)
                )),
            };
        }
    }
    // Extreme roots: half not in the subset, and not generated by the
    // other members once positive multiples of the root are removed.
    let mut extreme = Vec::new();
    for &a in &sorted {
        let va = system.root(a);
        if let Some(h) = half_vec(va) {
            if system.find(&h).map(|hi| member_set.contains(&hi)).unwrap_or(false) {
                continue;
            }
        }
        let others: Vec<&[i64]> = sorted
            .iter()
            .filter(|&&b| {
                let vb = system.root(b);
                // Exclude positive multiples of va (same ray).
                !same_positive_ray(va, vb)
            })
            .map(|&b| system.root(b))
            .collect();
        if !in_cone(&others, va) {
            extreme.push(a);
        }
    }
    SubsetClassification {
        saturated_special_closed: true,
        extreme_roots: extreme,
        reason: None,
    }
}

fn same_positive_ray(a: &[i64], b: &[i64]) -> bool {
    // b = c a with c > 0, both nonzero integer vectors.
    let pa = primitive(a);
    let pb = primitive(b);
    pa == pb
}

/// The primitive integer vector on the same ray (gcd 1, orientation kept).
pub(crate) fn primitive(v: &[i64]) -> Vec<i64> {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// Partitions the roots outside the line of `a` into thick series: the
/// parts `roots ∩ (R_{>0} b + R a)`. Each part is verified saturated
/// special closed.
pub fn thick_series(system: &RootSystem, a: RootIdx) -> Result<Vec<RootSubset>> {
    if a >= system.len() {
        return Err(Error::Domain(format!("root index {a} out of range")));
    }
    let va = system.root(a);
    let naa = dot(va, va);
    // Projection along a: pi(v) = (a,a) v - (v,a) a, zero exactly on R a.
    let mut buckets: BTreeMap<Vec<i64>, Vec<RootIdx>> = BTreeMap::new();
    for g in 0..system.len() {
        let vg = system.root(g);
        let proj: Vec<i64> = vg
            .iter()
            .zip(va)
            .map(|(x, y)| naa * x - dot(vg, va) * y)
            .collect();
        if proj.iter().all(|&x| x == 0) {
            continue; // on the axis line
        }
        buckets.entry(primitive(&proj)).or_default().push(g);
    }
    let mut parts: Vec<RootSubset> = buckets
        .into_values()
        .map(|mut members| {
            members.sort_unstable();
            let witness_b = members[0];
            RootSubset {
                parent: system.clone(),
                members,
                kind: SubsetKind::ThickSeries,
                witness: Some((a, witness_b)),
            }
        })
        .collect();
    parts.sort_by_key(|p| p.members.clone());
    // Partition sanity plus the closedness theorem, checked not assumed.
    let mut seen = BTreeSet::new();
    for p in &parts {
        for &m in &p.members {
            if !seen.insert(m) {
                return Err(Error::Internal("thick series overlap".into()));
            }
        }
        let cls = classify_subset(system, &p.members);
        if !cls.saturated_special_closed {
            return Err(Error::Internal(format!(
                "thick series not saturated special closed: {:?}",
                cls.reason
            )));
        }
    }
    let off_axis = (0..system.len())
        .filter(|&g| !same_ray_line(system.root(g), va))
        .count();
    if seen.len() != off_axis {
        return Err(Error::Internal("thick series do not cover".into()));
    }
    Ok(parts)
}

fn same_ray_line(g: &[i64], a: &[i64]) -> bool {
    !linearly_independent_pair(g, a)
}

// ---------------------------------------------------------------------------
// Hyperplane lemma
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct HyperplaneReport {
    pub pass: bool,
    pub hyperplane_count: usize,
    pub witness: Option<String>,
}

/// For an irreducible system: no pair of root-spanned hyperplanes covers
/// the roots, and every root inside such a hyperplane has a neighbor
/// outside it. Root-spanned hyperplanes suffice: a covering hyperplane can
/// be shrunk to the span of the roots it contains and then extended by
/// independent roots from the rest of the set.
pub fn verify_hyperplane_lemma(system: &RootSystem) -> Result<HyperplaneReport> {
    if !system.is_irreducible() {
        return Err(Error::Domain("hyperplane lemma requires an irreducible system".into()));
    }
    let hyperplanes = system.root_spanned_hyperplanes()?;
    let n = system.len();
    let sets: Vec<BTreeSet<RootIdx>> = hyperplanes
        .iter()
        .map(|h| h.iter().copied().collect())
        .collect();
    for (i, h1) in sets.iter().enumerate() {
        for h2 in sets.iter().skip(i) {
            if (0..n).all(|g| h1.contains(&g) || h2.contains(&g)) {
                return Ok(HyperplaneReport {
                    pass: false,
                    hyperplane_count: sets.len(),
                    witness: Some(format!(
                        "roots covered by the hyperplane pair {:?} / {:?}",
                        h1, h2
                    )),
                });
            }
        }
    }
    for (hi, h) in sets.iter().enumerate() {
        for &a in h {
            let good = system
                .neighbors(a)?
                .iter()
                .any(|nb| !h.contains(nb));
            if !good {
                return Ok(HyperplaneReport {
                    pass: false,
                    hyperplane_count: sets.len(),
                    witness: Some(format!(
                        "root {:?} has no neighbor outside hyperplane {hi}",
                        system.root(a)
                    )),
                });
            }
        }
    }
    Ok(HyperplaneReport { pass: true, hyperplane_count: sets.len(), witness: None })
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// A linear map sending every source root to a target root or zero.
#[derive(Clone, Debug)]
pub struct RootMorphism {
    pub source: RootSystem,
    pub target: RootSystem,
    /// Row-major, target ambient x source ambient.
    pub matrix: Vec<Vec<Rational64>>,
}

#[derive(Clone, Debug)]
pub struct MorphismReport {
    /// The nonzero images, reconstituted as a root system.
    pub image_system: RootSystem,
    /// Surjective onto the target roots.
    pub is_factor: bool,
    /// Source components every root of which maps to zero.
    pub kernel_components: Vec<usize>,
    /// For each source component: the unique target component receiving it
    /// (none for kernel components).
    pub component_map: Vec<Option<usize>>,
}

impl RootMorphism {
    pub fn from_int_matrix(
        source: &RootSystem,
        target: &RootSystem,
        rows: &[Vec<i64>],
    ) -> Result<RootMorphism> {
        let matrix = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
            .collect();
        RootMorphism::new(source, target, matrix)
    }

    pub fn new(
        source: &RootSystem,
        target: &RootSystem,
        matrix: Vec<Vec<Rational64>>,
    ) -> Result<RootMorphism> {
        if matrix.len() != target.ambient_rank()
            || matrix.iter().any(|r| r.len() != source.ambient_rank())
        {
            return Err(Error::Domain("morphism matrix has wrong shape".into()));
        }
        let m = RootMorphism { source: source.clone(), target: target.clone(), matrix };
        for i in 0..m.source.len() {
            m.image_of(i)?;
        }
        Ok(m)
    }

    fn apply_vec(&self, v: &[i64]) -> Vec<Rational64> {
        self.matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .map(|(c, &x)| *c * Rational64::from_integer(x))
                    .sum()
            })
            .collect()
    }

    /// The image root index, `None` for zero; error if the image is neither.
    pub fn image_of(&self, i: RootIdx) -> Result<Option<RootIdx>> {
        let img = self.apply_vec(self.source.root(i));
        if img.iter().all(|x| *x == Rational64::from_integer(0)) {
            return Ok(None);
        }
        let int_img: Option<Vec<i64>> = img
            .iter()
            .map(|x| if x.is_integer() { Some(x.to_integer()) } else { None })
            .collect();
        let found = int_img.as_ref().and_then(|v| self.target.find(v));
        match found {
            Some(t) => Ok(Some(t)),
            None => Err(Error::Domain(format!(
                "root {:?} maps outside the target roots and zero",
                self.source.root(i)
            ))),
        }
    }
}

/// Computes the image system, factor flag, kernel components, and the
/// unique target component receiving each surviving source component.
pub fn apply_morphism(f: &RootMorphism) -> Result<MorphismReport> {
    let mut image_vecs: Vec<Vec<i64>> = Vec::new();
    let mut image_idx: Vec<Option<RootIdx>> = Vec::new();
    for i in 0..f.source.len() {
        let img = f.image_of(i)?;
        if let Some(t) = img {
            image_vecs.push(f.target.root(t).to_vec());
        }
        image_idx.push(img);
    }
    image_vecs.sort();
    image_vecs.dedup();
    if image_vecs.is_empty() {
        return Err(Error::Domain("morphism kills every root; image is empty".into()));
    }
    let image_system = RootSystem::from_roots(image_vecs.clone()).map_err(|e| {
        Error::Domain(format!("image is not a root system: {e}"))
    })?;
    let is_factor = (0..f.target.len()).all(|t| {
        image_idx.iter().flatten().any(|&x| x == t)
    });
    let mut kernel_components = Vec::new();
    let mut component_map = Vec::new();
    for (ci, comp) in f.source.components().iter().enumerate() {
        let targets: BTreeSet<usize> = comp
            .members
            .iter()
            .filter_map(|&i| image_idx[i])
            .map(|t| f.target.component_of(t))
            .collect();
        match targets.len() {
            0 => {
                kernel_components.push(ci);
                component_map.push(None);
            }
            1 => component_map.push(targets.into_iter().next()),
            _ => {
                return Err(Error::Internal(format!(
                    "component {ci} maps into several target components"
                )))
            }
        }
    }
    Ok(MorphismReport { image_system, is_factor, kernel_components, component_map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(d: &str) -> RootSystem {
        build_root_system(d).unwrap()
    }

    #[test]
    fn construction_counts() {
        for (d, n) in [
            ("A1", 2),
            ("A2", 6),
            ("A3", 12),
            ("A4", 20),
            ("B2", 8),
            ("B3", 18),
            ("B4", 32),
            ("C3", 18),
            ("C4", 32),
            ("D4", 24),
            ("G2", 12),
            ("F4", 48),
            ("E6", 72),
            ("E7", 126),
            ("E8", 240),
            ("BC1", 4),
            ("BC2", 12),
            ("BC3", 24),
            ("[A1,A1]", 4),
            ("[A2,B2]", 14),
        ] {
            let s = sys(d);
            assert_eq!(s.len(), n, "{d} root count");
        }
    }

    #[test]
    fn labels_round_trip() {
        for d in ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "C4", "D4", "G2", "F4", "BC1", "BC2", "BC3"] {
            let s = sys(d);
            assert!(s.is_irreducible(), "{d}");
            assert_eq!(s.components()[0].label, d, "relabel of {d}");
        }
        // C2 is the same abstract system as B2 and gets the B label.
        assert_eq!(sys("C2").components()[0].label, "B2");
        let two = sys("[A1,A1]");
        assert_eq!(two.components().len(), 2);
        assert_eq!(two.name(), "A1,A1");
    }

    #[test]
    fn invalid_descriptors() {
        for d in ["E5", "E9", "F3", "G3", "H2", "A0", "D1", ""] {
            assert!(build_root_system(d).is_err(), "{d} should fail");
        }
    }

    #[test]
    fn length_classes() {
        let bc1 = sys("BC1");
        // {-2a, -a, a, 2a}: the short generators are ultrashort, doubles long.
        let classes: Vec<LengthClass> = (0..4).map(|i| bc1.length_class(i)).collect();
        assert_eq!(
            classes.iter().filter(|&&c| c == LengthClass::Ultrashort).count(),
            2
        );
        assert_eq!(classes.iter().filter(|&&c| c == LengthClass::Long).count(), 2);
        let a2 = sys("A2");
        assert!((0..6).all(|i| a2.length_class(i) == LengthClass::Long));
        let b2 = sys("B2");
        assert_eq!(
            (0..8).filter(|&i| b2.length_class(i) == LengthClass::Short).count(),
            4
        );
        let bc2 = sys("BC2");
        for i in 0..bc2.len() {
            let ultra = bc2.length_class(i) == LengthClass::Ultrashort;
            assert_eq!(ultra, !bc2.in_reduced_subsystem(i));
        }
    }

    #[test]
    fn reflection_closure_exhaustive() {
        for d in ["A2", "B2", "G2", "BC2", "D4", "F4"] {
            let s = sys(d);
            for a in 0..s.len() {
                for b in 0..s.len() {
                    let r = s.reflect(b, a);
                    assert!(r < s.len());
                }
                assert_eq!(s.root(s.neg_index(a)), neg_vec(s.root(a)).as_slice());
            }
        }
    }

    #[test]
    fn neighbors_a2() {
        let a2 = sys("A2");
        let a = a2.find(&[1, -1, 0]).unwrap();
        let b = a2.find(&[0, 1, -1]).unwrap();
        let ab = a2.find(&[1, 0, -1]).unwrap();
        // Neighbors of a simple root a are a+b and -b.
        let nb = a2.neighbors(a).unwrap();
        assert!(nb.contains(&ab));
        assert!(nb.contains(&a2.neg_index(b)));
        assert_eq!(nb.len(), 2);
    }

    #[test]
    fn neighbors_degenerate_cases() {
        let two = sys("[A1,A1]");
        for a in 0..two.len() {
            assert!(two.neighbors(a).unwrap().is_empty());
        }
        let bc1 = sys("BC1");
        for a in 0..bc1.len() {
            assert!(bc1.neighbors(a).unwrap().is_empty());
        }
        assert!(sys("A2").neighbors(99).is_err());
    }

    #[test]
    fn neighbors_symmetric_rank_le_4() {
        for d in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C3", "D4", "G2", "F4", "BC1", "BC2", "BC3", "BC4"] {
            let s = sys(d);
            for a in 0..s.len() {
                for &b in s.neighbors(a).unwrap() {
                    assert!(
                        s.neighbors(b).unwrap().contains(&a),
                        "{d}: neighbor relation not symmetric at ({a},{b})"
                    );
                }
            }
        }
    }

    #[test]
    fn hyperplane_lemma_counts() {
        for (d, lines) in [("A2", 3), ("B2", 4), ("G2", 6)] {
            let rep = verify_hyperplane_lemma(&sys(d)).unwrap();
            assert!(rep.pass, "{d}");
            assert_eq!(rep.hyperplane_count, lines, "{d} hyperplane count");
        }
    }

    #[test]
    fn hyperplane_lemma_catalog() {
        for d in ["A1", "A3", "A4", "B3", "B4", "C3", "C4", "D4", "F4", "BC1", "BC2", "BC3", "BC4"] {
            let rep = verify_hyperplane_lemma(&sys(d)).unwrap();
            assert!(rep.pass, "{d} hyperplane lemma");
        }
        assert!(verify_hyperplane_lemma(&sys("[A1,A1]")).is_err());
    }

    #[test]
    fn classify_subset_examples() {
        let a2 = sys("A2");
        let a = a2.find(&[1, -1, 0]).unwrap();
        let b = a2.find(&[0, 1, -1]).unwrap();
        let ab = a2.find(&[1, 0, -1]).unwrap();
        let cls = classify_subset(&a2, &[a, b, ab]);
        assert!(cls.saturated_special_closed);
        // Extreme roots are exactly the two outer generators.
        let mut expected = vec![a, b];
        expected.sort_unstable();
        assert_eq!(cls.extreme_roots, expected);

        let cls = classify_subset(&a2, &[a, a2.neg_index(a)]);
        assert!(!cls.saturated_special_closed);

        // {a, b} is special closed as a cone but not saturated: a+b is
        // in the cone yet missing from the subset.
        let cls = classify_subset(&a2, &[a, b]);
        assert!(!cls.saturated_special_closed);
        assert!(cls.reason.unwrap().contains("not saturated"));

        let bc1 = sys("BC1");
        let s = bc1.find(&[1]).unwrap();
        let l = bc1.find(&[2]).unwrap();
        let cls = classify_subset(&bc1, &[s, l]);
        assert!(cls.saturated_special_closed);
        assert_eq!(cls.extreme_roots, vec![s]);
    }

    #[test]
    fn thick_series_examples() {
        let a2 = sys("A2");
        let a = a2.find(&[1, -1, 0]).unwrap();
        let parts = thick_series(&a2, a).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.members.len() == 2));

        let b2 = sys("B2");
        let long = (0..b2.len()).find(|&i| b2.norm(i) == 2 && b2.length_class(i) == LengthClass::Long).unwrap();
        let parts = thick_series(&b2, long).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.members.len() == 3));

        let two = sys("[A1,A1]");
        let parts = thick_series(&two, 0).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.members.len() == 1));
    }

    #[test]
    fn thick_series_partition_catalog() {
        for d in ["A2", "A3", "B2", "B3", "G2", "BC2", "BC3", "D4"] {
            let s = sys(d);
            for a in 0..s.len() {
                // thick_series internally asserts partition + closedness.
                thick_series(&s, a).unwrap();
            }
        }
    }

    #[test]
    fn morphism_b2_to_bc1() {
        let b2 = sys("B2");
        let bc1 = sys("BC1");
        let f = RootMorphism::from_int_matrix(&b2, &bc1, &[vec![1, 1]]).unwrap();
        let rep = apply_morphism(&f).unwrap();
        assert!(rep.is_factor);
        assert_eq!(rep.image_system.name(), "BC1");
        assert!(rep.kernel_components.is_empty());
        assert_eq!(rep.component_map, vec![Some(0)]);
    }

    #[test]
    fn morphism_identity_and_projection() {
        let a2 = sys("A2");
        let id = RootMorphism::from_int_matrix(
            &a2,
            &a2,
            &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        )
        .unwrap();
        let rep = apply_morphism(&id).unwrap();
        assert!(rep.is_factor);
        assert!(rep.kernel_components.is_empty());

        let two = sys("[A1,A1]");
        let one = sys("A1");
        // Ambients: [A1,A1] is 4-dimensional (two A1 blocks of dim 2).
        let f = RootMorphism::from_int_matrix(&two, &one, &[vec![1, -1, 0, 0], vec![0, 0, 0, 0]])
            .unwrap_err();
        let _ = f; // wrong shape: A1 ambient is 2
        let f = RootMorphism::from_int_matrix(&two, &one, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]])
            .unwrap();
        let rep = apply_morphism(&f).unwrap();
        assert!(rep.is_factor);
        assert_eq!(rep.kernel_components.len(), 1);
    }

    #[test]
    fn morphism_rejections() {
        let a2 = sys("A2");
        let b2 = sys("B2");
        // e1-e2 -> (1,1) which is a B2 root, but e1-e3 -> (1,0)+(0,1)? Build
        // a map that sends some root outside the target set.
        let bad = RootMorphism::from_int_matrix(&a2, &b2, &[vec![3, 0, 0], vec![0, 3, 0]]);
        assert!(bad.is_err());
        // A1 x A1 embeds in A2 as {±a, ±b"=a+2nd"}, but its image set
        // {±(1,-1,0), ±(0,1,-1)} is not reflection-closed, so the image is
        // not a root system and the application is rejected.
        let two = sys("[A1,A1]");
        let f = RootMorphism::from_int_matrix(
            &two,
            &a2,
            &[vec![1, -1, 0, 0], vec![-1, 1, 1, -1], vec![0, 0, -1, 1]],
        );
        if let Ok(f) = f {
            assert!(apply_morphism(&f).is_err());
        }
    }

    #[test]
    fn cone_primitives() {
        assert_eq!(primitive(&[2, -4, 6]), vec![1, -2, 3]);
        assert_eq!(primitive(&[0, 0]), vec![0, 0]);
        assert!(in_cone(&[&[1, 0], &[0, 1]], &[3, 2]));
        assert!(!in_cone(&[&[1, 0], &[0, 1]], &[-1, 2]));
        assert!(in_cone(&[&[1, 1]], &[2, 2]));
        assert!(!in_cone(&[&[1, 1]], &[2, 3]));
    }
}
