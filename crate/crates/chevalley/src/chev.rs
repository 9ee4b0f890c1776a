//! Adjoint Chevalley construction over exact integer arithmetic.
//!
//! [`ChevalleyData`] equips a reduced root system with a Chevalley basis:
//! signed structure constants fixed by a deterministic extraspecial-pair
//! convention, integral coroots, and the divided powers of each nilpotent
//! generator's adjoint action. Root, Weyl, and torus elements come out as
//! explicit matrices over any finite coefficient ring, and the two-variable
//! commutator tables are recovered by symbolic peeling in Z[x,y].
//!
//! The represented group is of adjoint type throughout: one uniform matrix
//! model for every system in range, no per-type special cases.

use std::collections::BTreeMap;

use num_rational::Rational64;
use serde_json::json;

use crate::error::{Error, Result};
use crate::nil::LawReport;
use crate::poly::{Poly2, PolyMat};
use crate::ring::{Elem, FiniteRing};
use crate::roots::{RootIdx, RootSystem};

/// Largest adjoint dimension (roots plus rank) accepted by [`build_chevalley`].
pub const DIM_CAP: usize = 52;

// ---------------------------------------------------------------------------
// Chevalley data
// ---------------------------------------------------------------------------

/// A Chevalley basis for the adjoint Lie algebra of a reduced root system,
/// together with the integral divided powers that exponentiate to the
/// unipotent generators.
///
/// Basis order: one vector per root, in the system's canonical root order,
/// followed by one coroot line per simple root.
#[derive(Clone)]
pub struct ChevalleyData {
    system: RootSystem,
    dim: usize,
    rank: usize,
    simples: Vec<RootIdx>,
    positive: Vec<bool>,
    simple_coords: Vec<Vec<i64>>,
    heights: Vec<i64>,
    nmat: Vec<Vec<i64>>,
    coroot_h: Vec<Vec<i64>>,
    divided: Vec<Vec<Vec<i64>>>,
}

fn lex_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

fn exact_div(num: i64, den: i64) -> Result<i64> {
    if den == 0 || num % den != 0 {
        return Err(Error::Internal(format!(
            "expected exact division, got {num}/{den}"
        )));
    }
    Ok(num / den)
}

fn matmul_i64(a: &[i64], b: &[i64], dim: usize) -> Vec<i64> {
    let mut out = vec![0i64; dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let av = a[r * dim + k];
            if av == 0 {
                continue;
            }
            for c in 0..dim {
                let bv = b[k * dim + c];
                if bv != 0 {
                    out[r * dim + c] += av * bv;
                }
            }
        }
    }
    out
}

/// Scratch state for the structure-constant pass.
struct SignBuilder<'a> {
    system: &'a RootSystem,
    positive: Vec<bool>,
    nmat: Vec<Vec<i64>>,
}

impl SignBuilder<'_> {
    /// Largest `k >= 0` with `b - k*a` still a root.
    fn chain_down(&self, b: RootIdx, a: RootIdx) -> i64 {
        let (vb, va) = (self.system.root(b), self.system.root(a));
        let mut k = 1i64;
        loop {
            let v: Vec<i64> = vb.iter().zip(va).map(|(x, y)| x - k * y).collect();
            if self.system.find(&v).is_none() {
                return k - 1;
            }
            k += 1;
        }
    }

    /// Structure constant for an arbitrary-sign pair, reduced to the
    /// positive-pair table through the rank-one Jacobi relations. Returns 0
    /// when the sum is not a root.
    fn resolve(&self, a: RootIdx, b: RootIdx) -> Result<i64> {
        let sys = self.system;
        let v: Vec<i64> = sys.root(a).iter().zip(sys.root(b)).map(|(x, y)| x + y).collect();
        let Some(s) = sys.find(&v) else { return Ok(0) };
        match (self.positive[a], self.positive[b]) {
            (true, true) => Ok(self.nmat[a][b]),
            (false, false) => Ok(-self.nmat[sys.neg_index(a)][sys.neg_index(b)]),
            (false, true) => Ok(-self.resolve(b, a)?),
            (true, false) => {
                if self.positive[s] {
                    let p = self.nmat[sys.neg_index(b)][s];
                    exact_div(-sys.norm(s) * p, sys.norm(a))
                } else {
                    let p = self.nmat[sys.neg_index(s)][a];
                    exact_div(sys.norm(s) * p, sys.norm(b))
                }
            }
        }
    }
}

/// Builds the Chevalley basis data for a reduced root system: signed
/// structure constants, coroots, and integral divided powers, all verified
/// (chain lengths, Jacobi identity over the integers) before returning.
pub fn build_chevalley(system: &RootSystem) -> Result<ChevalleyData> {
    if !system.is_reduced() {
        return Err(Error::Domain(format!(
            "{}: non-reduced systems have no split matrix model",
            system.name()
        )));
    }
    let n = system.len();
    let rank = system.rank();
    let dim = n + rank;
    if dim > DIM_CAP {
        return Err(Error::CapExceeded(format!(
            "adjoint dimension {dim} exceeds the cap {DIM_CAP}"
        )));
    }

    let positive: Vec<bool> = (0..n).map(|i| lex_positive(system.root(i))).collect();

    // Simple roots: positive roots with no decomposition into two positives.
    let mut simples: Vec<RootIdx> = Vec::new();
    for g in 0..n {
        if !positive[g] {
            continue;
        }
        let decomposable = (0..n).any(|a| {
            if !positive[a] || a == g {
                return false;
            }
            let v: Vec<i64> = system.root(g).iter().zip(system.root(a)).map(|(x, y)| x - y).collect();
            system.find(&v).is_some_and(|b| positive[b])
        });
        if !decomposable {
            simples.push(g);
        }
    }
    if simples.len() != rank {
        return Err(Error::Internal(format!(
            "{}: found {} simple roots for rank {}",
            system.name(),
            simples.len(),
            rank
        )));
    }

    // Integer coordinates of every root over the simple roots.
    let basis: Vec<&[i64]> = simples.iter().map(|&s| system.root(s)).collect();
    let mut simple_coords = Vec::with_capacity(n);
    let mut heights = Vec::with_capacity(n);
    for i in 0..n {
        let sol = crate::roots::solve_in_basis(&basis, system.root(i)).ok_or_else(|| {
            Error::Internal(format!("root {i} outside the simple-root span"))
        })?;
        let mut coords = Vec::with_capacity(rank);
        for c in &sol {
            if !c.is_integer() {
                return Err(Error::Internal(format!(
                    "non-integral simple-root coordinate {c} for root {i}"
                )));
            }
            coords.push(*c.numer() / *c.denom());
        }
        heights.push(coords.iter().sum());
        simple_coords.push(coords);
    }

    // Positive-pair structure constants, processed by increasing height with
    // the canonical root order breaking ties. The first decomposition of
    // each sum root (the extraspecial pair) gets the positive sign; every
    // other decomposition is forced by the four-term Jacobi relation.
    let mut posorder: Vec<RootIdx> = (0..n).filter(|&i| positive[i]).collect();
    posorder.sort_by_key(|&i| (heights[i], i));
    let mut pos_rank = vec![usize::MAX; n];
    for (k, &i) in posorder.iter().enumerate() {
        pos_rank[i] = k;
    }

    let mut b = SignBuilder { system, positive, nmat: vec![vec![0i64; n]; n] };
    for &g in &posorder {
        if heights[g] < 2 {
            continue;
        }
        let mut pairs: Vec<(RootIdx, RootIdx)> = Vec::new();
        for a in 0..n {
            if !b.positive[a] {
                continue;
            }
            let v: Vec<i64> =
                system.root(g).iter().zip(system.root(a)).map(|(x, y)| x - y).collect();
            if let Some(bb) = system.find(&v) {
                if b.positive[bb] && pos_rank[a] <= pos_rank[bb] {
                    pairs.push((a, bb));
                }
            }
        }
        pairs.sort_by_key(|&(a, _)| pos_rank[a]);
        if pairs.is_empty() {
            return Err(Error::Internal(format!("no decomposition for root {g}")));
        }
        let (xi, eta) = pairs[0];
        let p = b.chain_down(eta, xi);
        b.nmat[xi][eta] = p + 1;
        b.nmat[eta][xi] = -(p + 1);
        for &(a, bb) in &pairs[1..] {
            // Four-term relation on (xi, eta, -a, -bb), which sums to zero.
            let term = |x: RootIdx, y: RootIdx, u: RootIdx, w: RootIdx| -> Result<Rational64> {
                let v: Vec<i64> =
                    system.root(x).iter().zip(system.root(y)).map(|(p, q)| p - q).collect();
                match system.find(&v) {
                    None => Ok(Rational64::from_integer(0)),
                    Some(d) => {
                        let num = b.resolve(x, system.neg_index(y))? * b.resolve(u, system.neg_index(w))?;
                        Ok(Rational64::new(num, system.norm(d)))
                    }
                }
            };
            // t2 over (eta - a), t3 over (xi - a); at least one survives.
            let t2 = term(eta, a, xi, bb)?;
            let t3 = {
                let v: Vec<i64> =
                    system.root(xi).iter().zip(system.root(a)).map(|(p, q)| p - q).collect();
                match system.find(&v) {
                    None => Rational64::from_integer(0),
                    Some(d) => {
                        let num =
                            b.resolve(system.neg_index(a), xi)? * b.resolve(eta, system.neg_index(bb))?;
                        Rational64::new(num, system.norm(d))
                    }
                }
            };
            let val = Rational64::from_integer(system.norm(g)) * (t2 + t3)
                / Rational64::from_integer(b.nmat[xi][eta]);
            if !val.is_integer() {
                return Err(Error::Internal(format!(
                    "non-integral structure constant {val} for pair ({a},{bb})"
                )));
            }
            let val = *val.numer() / *val.denom();
            let expect = b.chain_down(bb, a) + 1;
            if val.abs() != expect {
                return Err(Error::Internal(format!(
                    "constant {val} for pair ({a},{bb}) disagrees with chain length {expect}"
                )));
            }
            b.nmat[a][bb] = val;
            b.nmat[bb][a] = -val;
        }
    }

    // Extend to all sign combinations.
    let mut full = vec![vec![0i64; n]; n];
    for x in 0..n {
        for y in 0..n {
            if y == x || y == system.neg_index(x) {
                continue;
            }
            full[x][y] = b.resolve(x, y)?;
        }
    }

    // Coroot of each root over the simple coroot basis.
    let mut coroot_h = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(rank);
        for (k, &s) in simples.iter().enumerate() {
            row.push(exact_div(simple_coords[i][k] * system.norm(s), system.norm(i))?);
        }
        coroot_h.push(row);
    }

    let mut data = ChevalleyData {
        system: system.clone(),
        dim,
        rank,
        simples,
        positive: b.positive,
        simple_coords,
        heights,
        nmat: full,
        coroot_h,
        divided: Vec::new(),
    };

    // Chain-length check on every defined constant.
    let chains = SignBuilder {
        system,
        positive: data.positive.clone(),
        nmat: data.nmat.clone(),
    };
    for x in 0..n {
        for y in 0..n {
            if y == x || y == system.neg_index(x) {
                continue;
            }
            let v: Vec<i64> =
                system.root(x).iter().zip(system.root(y)).map(|(p, q)| p + q).collect();
            if system.find(&v).is_some() {
                let expect = chains.chain_down(y, x) + 1;
                if data.nmat[x][y].abs() != expect {
                    return Err(Error::Internal(format!(
                        "constant for ({x},{y}) is {}, chain length wants {expect}",
                        data.nmat[x][y]
                    )));
                }
            } else if data.nmat[x][y] != 0 {
                return Err(Error::Internal(format!("spurious constant for ({x},{y})")));
            }
        }
    }

    // Jacobi identity over the integers, all unordered basis triples.
    for i in 0..dim {
        for j in (i + 1)..dim {
            for k in (j + 1)..dim {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                    for (m, c1) in data.bracket_basis(y, z) {
                        for (r, c2) in data.bracket_basis(x, m) {
                            *acc.entry(r).or_insert(0) += c1 * c2;
                        }
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return Err(Error::Internal(format!(
                        "Jacobi identity fails on basis triple ({i},{j},{k})"
                    )));
                }
            }
        }
    }

    // Divided powers of each adjoint generator, exact integer division.
    for alpha in 0..n {
        let mut m1 = vec![0i64; dim * dim];
        for c in 0..dim {
            for (r, coeff) in data.bracket_basis(alpha, c) {
                m1[r * dim + c] = coeff;
            }
        }
        let mut powers = vec![m1];
        loop {
            let p = powers.len() as i64;
            let raw = matmul_i64(&powers[0], powers.last().unwrap(), dim);
            let mut next = Vec::with_capacity(dim * dim);
            for v in raw {
                next.push(exact_div(v, p + 1)?);
            }
            if next.iter().all(|&v| v == 0) {
                break;
            }
            powers.push(next);
            if powers.len() > 4 {
                return Err(Error::Internal(format!(
                    "adjoint generator {alpha} not nilpotent within the expected bound"
                )));
            }
        }
        data.divided.push(powers);
    }

    Ok(data)
}

impl ChevalleyData {
    pub fn system(&self) -> &RootSystem {
        &self.system
    }

    /// Total matrix dimension: number of roots plus the rank.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Simple roots in canonical root order.
    pub fn simple_roots(&self) -> &[RootIdx] {
        &self.simples
    }

    pub fn is_positive_root(&self, i: RootIdx) -> bool {
        self.positive[i]
    }

    /// Sum of the coordinates of root `i` over the simple roots.
    pub fn height(&self, i: RootIdx) -> i64 {
        self.heights[i]
    }

    /// Integer coordinates of root `i` over the simple roots.
    pub fn simple_coordinates(&self, i: RootIdx) -> &[i64] {
        &self.simple_coords[i]
    }

    /// Signed structure constant for the pair `(a, b)`; zero when the sum of
    /// the two roots is not a root.
    pub fn structure_constant(&self, a: RootIdx, b: RootIdx) -> i64 {
        self.nmat[a][b]
    }

    /// Coordinates of the coroot of root `i` over the simple coroots.
    pub fn coroot(&self, i: RootIdx) -> &[i64] {
        &self.coroot_h[i]
    }

    /// First power at which the adjoint action of root `i` vanishes.
    pub fn nil_bound(&self, i: RootIdx) -> usize {
        self.divided[i].len() + 1
    }

    /// The `p`-th divided power of the adjoint action of root `i`
    /// (row-major, `p >= 1`); `None` once the action has vanished.
    pub fn divided_power(&self, i: RootIdx, p: usize) -> Option<&[i64]> {
        self.divided[i].get(p - 1).map(|m| m.as_slice())
    }

    /// Bracket of two basis vectors as a sparse coefficient list. Basis
    /// indices below the root count name root vectors; the rest name the
    /// simple coroot lines.
    pub fn bracket_basis(&self, p: usize, q: usize) -> Vec<(usize, i64)> {
        let n = self.system.len();
        match (p < n, q < n) {
            (false, false) => Vec::new(),
            (false, true) => {
                // Coroot line acting on a root vector.
                let c = self.system.pairing(q, self.simples[p - n]);
                if c == 0 { Vec::new() } else { vec![(q, c)] }
            }
            (true, false) => {
                let c = self.system.pairing(p, self.simples[q - n]);
                if c == 0 { Vec::new() } else { vec![(p, -c)] }
            }
            (true, true) => {
                if q == self.system.neg_index(p) {
                    return self.coroot_h[p]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(k, &c)| (n + k, c))
                        .collect();
                }
                let v: Vec<i64> = self
                    .system
                    .root(p)
                    .iter()
                    .zip(self.system.root(q))
                    .map(|(x, y)| x + y)
                    .collect();
                match self.system.find(&v) {
                    Some(s) if self.nmat[p][q] != 0 => vec![(s, self.nmat[p][q])],
                    _ => Vec::new(),
                }
            }
        }
    }

    /// Summary of the basis, constants, and divided powers as JSON. The
    /// output is deterministic: fixed key order within each object, arrays
    /// in canonical root order.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.system.len();
        let mut basis: Vec<String> =
            (0..n).map(|i| format!("e{:?}", self.system.root(i))).collect();
        for &s in &self.simples {
            basis.push(format!("h{:?}", self.system.root(s)));
        }
        let mut constants = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.nmat[a][b] != 0 {
                    constants.push(json!({ "a": a, "b": b, "n": self.nmat[a][b] }));
                }
            }
        }
        json!({
            "system": self.system.name(),
            "dimension": self.dim,
            "rank": self.rank,
            "basis": basis,
            "simple_roots": self.simples,
            "structure_constants": constants,
            "coroots": self.coroot_h,
            "divided_powers": self.divided,
        })
    }
}

// ---------------------------------------------------------------------------
// Group elements over finite rings
// ---------------------------------------------------------------------------

/// Identity matrix over a finite ring, row-major.
pub fn rmat_identity(ring: &FiniteRing, dim: usize) -> Vec<Elem> {
    let mut m = vec![0 as Elem; dim * dim];
    for i in 0..dim {
        m[i * dim + i] = ring.one();
    }
    m
}

/// Row-major matrix product over a finite ring.
pub fn rmat_mul(ring: &FiniteRing, a: &[Elem], b: &[Elem], dim: usize) -> Vec<Elem> {
    let mut out = vec![0 as Elem; dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let av = a[r * dim + k];
            if av == 0 {
                continue;
            }
            for c in 0..dim {
                let bv = b[k * dim + c];
                if bv != 0 {
                    let idx = r * dim + c;
                    out[idx] = ring.add(out[idx], ring.mul(av, bv));
                }
            }
        }
    }
    out
}

/// An invertible matrix over a finite ring, with its inverse stored and an
/// optional word over the unipotent generators that multiplies back to it.
#[derive(Clone)]
pub struct GroupElement {
    pub ring: FiniteRing,
    pub dim: usize,
    pub matrix: Vec<Elem>,
    pub inverse: Vec<Elem>,
    pub word: Option<Vec<(RootIdx, Elem)>>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.matrix == other.matrix
    }
}
impl Eq for GroupElement {}

impl std::fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupElement")
            .field("dim", &self.dim)
            .field("matrix", &self.matrix)
            .finish_non_exhaustive()
    }
}

impl GroupElement {
    pub fn identity(ring: &FiniteRing, dim: usize) -> GroupElement {
        let m = rmat_identity(ring, dim);
        GroupElement {
            ring: ring.clone(),
            dim,
            matrix: m.clone(),
            inverse: m,
            word: Some(Vec::new()),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == rmat_identity(&self.ring, self.dim)
    }

    pub fn mul(&self, rhs: &GroupElement) -> GroupElement {
        debug_assert_eq!(self.dim, rhs.dim);
        let word = match (&self.word, &rhs.word) {
            (Some(a), Some(b)) => {
                let mut w = a.clone();
                w.extend_from_slice(b);
                Some(w)
            }
            _ => None,
        };
        GroupElement {
            ring: self.ring.clone(),
            dim: self.dim,
            matrix: rmat_mul(&self.ring, &self.matrix, &rhs.matrix, self.dim),
            inverse: rmat_mul(&self.ring, &rhs.inverse, &self.inverse, self.dim),
            word,
        }
    }

    pub fn inverse_element(&self) -> GroupElement {
        let word = self.word.as_ref().map(|w| {
            w.iter().rev().map(|&(r, x)| (r, self.ring.neg(x))).collect()
        });
        GroupElement {
            ring: self.ring.clone(),
            dim: self.dim,
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
            word,
        }
    }

    /// `g h g^{-1}`.
    pub fn conjugate_by(&self, g: &GroupElement) -> GroupElement {
        g.mul(self).mul(&g.inverse_element())
    }

    /// `g^{-1} h^{-1} g h` for `g = self`, `h = rhs`.
    pub fn commutator(&self, rhs: &GroupElement) -> GroupElement {
        self.inverse_element().mul(&rhs.inverse_element()).mul(self).mul(rhs)
    }

    /// Confirms the stored inverse against the matrix.
    pub fn check_inverse(&self) -> bool {
        rmat_mul(&self.ring, &self.matrix, &self.inverse, self.dim)
            == rmat_identity(&self.ring, self.dim)
    }
}

impl ChevalleyData {
    fn unipotent_matrix(&self, ring: &FiniteRing, alpha: RootIdx, x: Elem) -> Vec<Elem> {
        let mut m = rmat_identity(ring, self.dim);
        for (p, mat) in self.divided[alpha].iter().enumerate() {
            let xp = ring.pow(x, p as u32 + 1);
            if xp == 0 {
                continue;
            }
            for (idx, &v) in mat.iter().enumerate() {
                if v != 0 {
                    m[idx] = ring.add(m[idx], ring.mul(xp, ring.int(v)));
                }
            }
        }
        m
    }

    /// The unipotent generator for root `alpha` with parameter `x`: the
    /// exponential of the adjoint action, additive in `x`.
    pub fn root_element(&self, ring: &FiniteRing, alpha: RootIdx, x: Elem) -> GroupElement {
        GroupElement {
            ring: ring.clone(),
            dim: self.dim,
            matrix: self.unipotent_matrix(ring, alpha, x),
            inverse: self.unipotent_matrix(ring, alpha, ring.neg(x)),
            word: Some(vec![(alpha, x)]),
        }
    }

    /// Monomial Weyl-group representative for root `alpha` and unit `u`.
    pub fn weyl_element(&self, ring: &FiniteRing, alpha: RootIdx, u: Elem) -> Result<GroupElement> {
        let ui = ring
            .inverse(u)
            .ok_or_else(|| Error::Domain(format!("{} is not a unit", ring.render(u))))?;
        let na = self.system.neg_index(alpha);
        Ok(self
            .root_element(ring, alpha, u)
            .mul(&self.root_element(ring, na, ring.neg(ui)))
            .mul(&self.root_element(ring, alpha, u)))
    }

    /// Torus element for root `alpha` and unit `u`: the Weyl representative
    /// at `u` times the inverse of the one at 1.
    pub fn torus_element(&self, ring: &FiniteRing, alpha: RootIdx, u: Elem) -> Result<GroupElement> {
        let w = self.weyl_element(ring, alpha, u)?;
        let w1 = self.weyl_element(ring, alpha, ring.one())?;
        Ok(w.mul(&w1.inverse_element()))
    }

    /// Multiplies out a generator word into a matrix.
    pub fn word_matrix(&self, ring: &FiniteRing, word: &[(RootIdx, Elem)]) -> Vec<Elem> {
        let mut m = rmat_identity(ring, self.dim);
        for &(r, x) in word {
            m = rmat_mul(ring, &m, &self.unipotent_matrix(ring, r, x), self.dim);
        }
        m
    }

    /// `u` raised to a possibly negative exponent; `u` must be a unit when
    /// the exponent is negative.
    pub fn unit_power(&self, ring: &FiniteRing, u: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            return Ok(ring.pow(u, e as u32));
        }
        let ui = ring
            .inverse(u)
            .ok_or_else(|| Error::Domain(format!("{} is not a unit", ring.render(u))))?;
        Ok(ring.pow(ui, (-e) as u32))
    }

    /// Exhaustive check that conjugation by torus elements rescales each
    /// unipotent generator by the pairing power of the unit.
    pub fn verify_torus_conjugation(&self, ring: &FiniteRing) -> Result<LawReport> {
        let n = self.system.len();
        let mut witnesses = Vec::new();
        for alpha in 0..n {
            for &u in &ring.units() {
                let h = self.torus_element(ring, alpha, u)?;
                for beta in 0..n {
                    let e = self.system.pairing(beta, alpha);
                    let scale = self.unit_power(ring, u, e)?;
                    for x in 0..ring.size() {
                        let lhs = self.root_element(ring, beta, x).conjugate_by(&h);
                        let rhs = self.root_element(ring, beta, ring.mul(scale, x));
                        if lhs != rhs {
                            witnesses.push(format!(
                                "conjugation fails: alpha={alpha} beta={beta} u={} x={}",
                                ring.render(u),
                                ring.render(x)
                            ));
                            if witnesses.len() >= 8 {
                                return Ok(LawReport { pass: false, witnesses });
                            }
                        }
                    }
                }
            }
        }
        Ok(LawReport { pass: witnesses.is_empty(), witnesses })
    }
}

// ---------------------------------------------------------------------------
// Commutator tables
// ---------------------------------------------------------------------------

/// One factor of a commutator table entry: the interior root `i*a + j*b`
/// enters with parameter `coeff * x^i * y^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableTerm {
    pub i: u32,
    pub j: u32,
    pub root: RootIdx,
    pub coeff: i64,
}

/// Commutator table of a system: for every ordered pair of linearly
/// independent roots, the factors of `[t_a(x), t_b(y)]` in the fixed product
/// order (increasing height of the interior root).
#[derive(Clone, Debug)]
pub struct CommutatorTable {
    pub terms: BTreeMap<(RootIdx, RootIdx), Vec<TableTerm>>,
}

impl CommutatorTable {
    pub fn pair(&self, a: RootIdx, b: RootIdx) -> &[TableTerm] {
        self.terms.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Reachability of a bidegree as a nonnegative combination of the given
/// factor bidegrees (unbounded multiplicity).
fn bidegree_reachable(target: (u32, u32), factors: &[(u32, u32)]) -> bool {
    let (ti, tj) = (target.0 as usize, target.1 as usize);
    let mut dp = vec![vec![false; tj + 1]; ti + 1];
    dp[0][0] = true;
    for &(p, q) in factors {
        let (p, q) = (p as usize, q as usize);
        if p > ti || q > tj {
            continue;
        }
        for ii in p..=ti {
            for jj in q..=tj {
                if dp[ii - p][jj - q] {
                    dp[ii][jj] = true;
                }
            }
        }
    }
    dp[ti][tj]
}

impl ChevalleyData {
    /// `t_alpha(c x^i y^j)` as a matrix over Z[x,y], exact and untruncated.
    fn symbolic_unipotent(&self, alpha: RootIdx, c: i64, i: u32, j: u32) -> PolyMat {
        let mut m = PolyMat::identity(self.dim);
        let mut cp = 1i64;
        for (p, mat) in self.divided[alpha].iter().enumerate() {
            cp *= c;
            let bi = i * (p as u32 + 1);
            let bj = j * (p as u32 + 1);
            for r in 0..self.dim {
                for col in 0..self.dim {
                    let v = mat[r * self.dim + col];
                    if v != 0 {
                        let add = Poly2::monomial(v * cp, bi, bj);
                        m.set(r, col, m.at(r, col) + &add);
                    }
                }
            }
        }
        m
    }

    /// Reads the coefficient `c` of a clean factor `t_root(c x^i y^j)` from
    /// the bidegree slice of the residual, checking that the slice is an
    /// exact scalar multiple of the first divided power.
    fn extract_coefficient(&self, residual: &PolyMat, i: u32, j: u32, root: RootIdx) -> Result<i64> {
        let slice = residual.bidegree_slice(i, j);
        let m1 = &self.divided[root][0];
        let pos = m1
            .iter()
            .position(|&v| v != 0)
            .ok_or_else(|| Error::Internal("vanishing adjoint generator".into()))?;
        let (pr, pc) = (pos / self.dim, pos % self.dim);
        let c = exact_div(slice[pr][pc], m1[pos])?;
        for r in 0..self.dim {
            for col in 0..self.dim {
                if slice[r][col] != c * m1[r * self.dim + col] {
                    return Err(Error::Internal(format!(
                        "bidegree ({i},{j}) slice is not a multiple of the generator"
                    )));
                }
            }
        }
        Ok(c)
    }

    /// Factors `[t_a(x), t_b(y)]` into unipotent terms along the interior
    /// roots, peeling from whichever end of the fixed product order has an
    /// uncontaminated bidegree, and verifies the reassembled product.
    fn derive_pair(&self, a: RootIdx, b: RootIdx) -> Result<Vec<TableTerm>> {
        let (va, vb) = (self.system.root(a).to_vec(), self.system.root(b).to_vec());
        let mut cands: Vec<(u32, u32, RootIdx)> = Vec::new();
        for i in 1..=5u32 {
            for j in 1..=5u32 {
                let v: Vec<i64> = va
                    .iter()
                    .zip(&vb)
                    .map(|(x, y)| i as i64 * x + j as i64 * y)
                    .collect();
                if let Some(r) = self.system.find(&v) {
                    cands.push((i, j, r));
                }
            }
        }
        cands.sort_by_key(|&(i, j, r)| (self.heights[r], i, j));

        let ta = self.symbolic_unipotent(a, 1, 1, 0);
        let tai = self.symbolic_unipotent(a, -1, 1, 0);
        let tb = self.symbolic_unipotent(b, 1, 0, 1);
        let tbi = self.symbolic_unipotent(b, -1, 0, 1);
        let comm = tai.mul(&tbi).mul(&ta).mul(&tb);

        let mut coeffs = vec![0i64; cands.len()];
        let mut residual = comm.clone();
        let (mut lo, mut hi) = (0usize, cands.len());
        while lo < hi {
            let (i0, j0, r0) = cands[lo];
            let rest: Vec<(u32, u32)> =
                cands[lo + 1..hi].iter().map(|&(i, j, _)| (i, j)).collect();
            if !bidegree_reachable((i0, j0), &rest) {
                let c = self.extract_coefficient(&residual, i0, j0, r0)?;
                if c != 0 {
                    residual = self.symbolic_unipotent(r0, -c, i0, j0).mul(&residual);
                }
                coeffs[lo] = c;
                lo += 1;
                continue;
            }
            let (i1, j1, r1) = cands[hi - 1];
            let rest: Vec<(u32, u32)> =
                cands[lo..hi - 1].iter().map(|&(i, j, _)| (i, j)).collect();
            if !bidegree_reachable((i1, j1), &rest) {
                let c = self.extract_coefficient(&residual, i1, j1, r1)?;
                if c != 0 {
                    residual = residual.mul(&self.symbolic_unipotent(r1, -c, i1, j1));
                }
                coeffs[hi - 1] = c;
                hi -= 1;
                continue;
            }
            return Err(Error::Internal(format!(
                "commutator peel blocked at both ends for pair ({a},{b})"
            )));
        }
        if !residual.is_identity() {
            return Err(Error::Internal(format!(
                "nonzero residual after peeling pair ({a},{b})"
            )));
        }

        let mut prod = PolyMat::identity(self.dim);
        for (k, &(i, j, r)) in cands.iter().enumerate() {
            if coeffs[k] != 0 {
                prod = prod.mul(&self.symbolic_unipotent(r, coeffs[k], i, j));
            }
        }
        if prod != comm {
            return Err(Error::Internal(format!(
                "reassembled product differs from the commutator for pair ({a},{b})"
            )));
        }
        for &c in &coeffs {
            if c.abs() > 3 {
                return Err(Error::Internal(format!(
                    "coefficient {c} out of range for pair ({a},{b})"
                )));
            }
        }
        Ok(cands
            .into_iter()
            .zip(coeffs)
            .filter(|&(_, c)| c != 0)
            .map(|((i, j, r), c)| TableTerm { i, j, root: r, coeff: c })
            .collect())
    }

    /// Commutator table over all ordered pairs of linearly independent
    /// roots, each entry verified against the symbolic matrix commutator.
    pub fn derive_commutator_table(&self) -> Result<CommutatorTable> {
        let n = self.system.len();
        let mut terms = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                if b == a || b == self.system.neg_index(a) {
                    continue;
                }
                terms.insert((a, b), self.derive_pair(a, b)?);
            }
        }
        Ok(CommutatorTable { terms })
    }

    /// Exhaustive check of the scaling law for every table entry: replacing
    /// `(x, y)` by `(k x, k' y)` multiplies the `(i, j)` parameter by
    /// `k^i k'^j`.
    pub fn check_homogeneity(&self, table: &CommutatorTable, ring: &FiniteRing) -> LawReport {
        let mut witnesses = Vec::new();
        let eval = |c: i64, i: u32, j: u32, x: Elem, y: Elem| {
            ring.mul(ring.int(c), ring.mul(ring.pow(x, i), ring.pow(y, j)))
        };
        'outer: for (&(a, b), terms) in &table.terms {
            for t in terms {
                for k in 0..ring.size() {
                    for kp in 0..ring.size() {
                        for x in 0..ring.size() {
                            for y in 0..ring.size() {
                                let lhs =
                                    eval(t.coeff, t.i, t.j, ring.mul(k, x), ring.mul(kp, y));
                                let rhs = ring.mul(
                                    eval(t.coeff, t.i, t.j, x, y),
                                    ring.mul(ring.pow(k, t.i), ring.pow(kp, t.j)),
                                );
                                if lhs != rhs {
                                    witnesses.push(format!(
                                        "scaling fails for pair ({a},{b}) term ({},{})",
                                        t.i, t.j
                                    ));
                                    if witnesses.len() >= 8 {
                                        break 'outer;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        LawReport { pass: witnesses.is_empty(), witnesses }
    }

    /// Exhaustive matrix-level check of the table over a finite ring: the
    /// group commutator of two root elements equals the recorded product.
    pub fn verify_commutator_table(&self, table: &CommutatorTable, ring: &FiniteRing) -> LawReport {
        let mut witnesses = Vec::new();
        'outer: for (&(a, b), terms) in &table.terms {
            for x in 0..ring.size() {
                for y in 0..ring.size() {
                    let g = self.root_element(ring, a, x);
                    let h = self.root_element(ring, b, y);
                    let lhs = g.commutator(&h);
                    let mut rhs = GroupElement::identity(ring, self.dim);
                    for t in terms {
                        let param = ring.mul(
                            ring.int(t.coeff),
                            ring.mul(ring.pow(x, t.i), ring.pow(y, t.j)),
                        );
                        rhs = rhs.mul(&self.root_element(ring, t.root, param));
                    }
                    if lhs != rhs {
                        witnesses.push(format!(
                            "table mismatch: pair ({a},{b}) x={} y={}",
                            ring.render(x),
                            ring.render(y)
                        ));
                        if witnesses.len() >= 8 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        LawReport { pass: witnesses.is_empty(), witnesses }
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;
    use crate::roots::{build_root_system, LengthClass};
    use std::collections::BTreeSet;

    fn magnitudes(data: &ChevalleyData) -> BTreeSet<i64> {
        let n = data.system().len();
        let mut out = BTreeSet::new();
        for a in 0..n {
            for b in 0..n {
                let v = data.structure_constant(a, b);
                if v != 0 {
                    out.insert(v.abs());
                }
            }
        }
        out
    }

    #[test]
    fn dimensions_across_catalog() {
        for (name, dim) in [
            ("A1", 3),
            ("A2", 8),
            ("A3", 15),
            ("B2", 10),
            ("B3", 21),
            ("C3", 21),
            ("D4", 28),
            ("G2", 14),
            ("F4", 52),
        ] {
            let sys = build_root_system(name).unwrap();
            let data = build_chevalley(&sys).unwrap();
            assert_eq!(data.dim(), dim, "{name}");
            assert_eq!(data.simple_roots().len(), data.rank());
        }
    }

    #[test]
    fn rejects_nonreduced_and_oversized() {
        for name in ["BC1", "BC2"] {
            let sys = build_root_system(name).unwrap();
            assert!(matches!(build_chevalley(&sys), Err(Error::Domain(_))), "{name}");
        }
        let sys = build_root_system("E6").unwrap();
        assert!(matches!(build_chevalley(&sys), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn structure_constant_magnitudes() {
        let a2 = build_chevalley(&build_root_system("A2").unwrap()).unwrap();
        assert_eq!(magnitudes(&a2), BTreeSet::from([1]));
        let b2 = build_chevalley(&build_root_system("B2").unwrap()).unwrap();
        assert_eq!(magnitudes(&b2), BTreeSet::from([1, 2]));
        let g2 = build_chevalley(&build_root_system("G2").unwrap()).unwrap();
        assert_eq!(magnitudes(&g2), BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn nilpotency_bounds() {
        for (name, bound) in [("A1", 3), ("A2", 3), ("B2", 3), ("G2", 4)] {
            let sys = build_root_system(name).unwrap();
            let data = build_chevalley(&sys).unwrap();
            let max = (0..sys.len()).map(|i| data.nil_bound(i)).max().unwrap();
            assert_eq!(max, bound, "{name}");
        }
    }

    #[test]
    fn heights_and_simples() {
        let sys = build_root_system("G2").unwrap();
        let data = build_chevalley(&sys).unwrap();
        for &s in data.simple_roots() {
            assert_eq!(data.height(s), 1);
        }
        let max = (0..sys.len()).map(|i| data.height(i)).max().unwrap();
        assert_eq!(max, 5);
        let min = (0..sys.len()).map(|i| data.height(i)).min().unwrap();
        assert_eq!(min, -5);
    }

    #[test]
    fn highest_coroot_of_g2() {
        let sys = build_root_system("G2").unwrap();
        let data = build_chevalley(&sys).unwrap();
        let high = (0..sys.len()).max_by_key(|&i| data.height(i)).unwrap();
        assert_eq!(data.simple_coordinates(high), &[3, 2]);
        // Short simple first in canonical order; its coroot coefficient is 1,
        // the long one contributes 2.
        assert_eq!(data.coroot(high), &[1, 2]);
        assert_eq!(sys.length_class(data.simple_roots()[0]), LengthClass::Short);
        assert_eq!(sys.length_class(data.simple_roots()[1]), LengthClass::Long);
    }

    #[test]
    fn root_elements_are_additive() {
        let a1 = build_chevalley(&build_root_system("A1").unwrap()).unwrap();
        let z2 = make_ring("Z/2").unwrap();
        let t = a1.root_element(&z2, 0, z2.one());
        assert!(!t.is_identity());
        assert!(t.mul(&t).is_identity());

        for (sysname, ringname) in [("A2", "Z/4"), ("B2", "Z/2[x]/(x^2+x+1)")] {
            let data = build_chevalley(&build_root_system(sysname).unwrap()).unwrap();
            let ring = make_ring(ringname).unwrap();
            for alpha in 0..data.system().len() {
                assert!(data.root_element(&ring, alpha, 0).is_identity());
                for x in 0..ring.size() {
                    let gx = data.root_element(&ring, alpha, x);
                    assert!(gx.check_inverse());
                    for y in 0..ring.size() {
                        let gy = data.root_element(&ring, alpha, y);
                        let gs = data.root_element(&ring, alpha, ring.add(x, y));
                        assert_eq!(gx.mul(&gy), gs);
                    }
                }
            }
        }
    }

    #[test]
    fn torus_conjugation_and_weyl_square() {
        for (sysname, ringname) in [("A2", "Z/4"), ("B2", "Z/2[x]/(x^2+x+1)")] {
            let data = build_chevalley(&build_root_system(sysname).unwrap()).unwrap();
            let ring = make_ring(ringname).unwrap();
            let report = data.verify_torus_conjugation(&ring).unwrap();
            assert!(report.pass, "{sysname}/{ringname}: {:?}", report.witnesses);
            for alpha in 0..data.system().len() {
                assert!(data.torus_element(&ring, alpha, ring.one()).unwrap().is_identity());
                let w1 = data.weyl_element(&ring, alpha, ring.one()).unwrap();
                let hm1 = data.torus_element(&ring, alpha, ring.neg(ring.one())).unwrap();
                assert_eq!(w1.mul(&w1), hm1);
            }
        }
        // Non-units are rejected.
        let data = build_chevalley(&build_root_system("A2").unwrap()).unwrap();
        let z4 = make_ring("Z/4").unwrap();
        assert!(matches!(data.torus_element(&z4, 0, z4.int(2)), Err(Error::Domain(_))));
    }

    #[test]
    fn word_certificates_multiply_back() {
        let data = build_chevalley(&build_root_system("B2").unwrap()).unwrap();
        let z3 = make_ring("Z/3").unwrap();
        let w = data.weyl_element(&z3, 1, z3.int(2)).unwrap();
        assert_eq!(data.word_matrix(&z3, w.word.as_ref().unwrap()), w.matrix);
        let h = data.torus_element(&z3, 1, z3.int(2)).unwrap();
        assert_eq!(data.word_matrix(&z3, h.word.as_ref().unwrap()), h.matrix);
        let g = w.mul(&h).inverse_element();
        assert_eq!(data.word_matrix(&z3, g.word.as_ref().unwrap()), g.matrix);
    }

    #[test]
    fn commutator_table_rank_one_and_a2() {
        let a1 = build_chevalley(&build_root_system("A1").unwrap()).unwrap();
        let table = a1.derive_commutator_table().unwrap();
        assert!(table.terms.is_empty());

        let a2 = build_chevalley(&build_root_system("A2").unwrap()).unwrap();
        let table = a2.derive_commutator_table().unwrap();
        assert_eq!(table.terms.len(), 24);
        for ((a, b), terms) in &table.terms {
            assert!(terms.len() <= 1, "pair ({a},{b})");
            for t in terms {
                assert_eq!((t.i, t.j), (1, 1));
                assert_eq!(t.coeff.abs(), 1);
            }
        }
        // Two simple roots produce exactly the sum root.
        let (s0, s1) = (a2.simple_roots()[0], a2.simple_roots()[1]);
        let terms = table.pair(s0, s1);
        assert_eq!(terms.len(), 1);
        assert_eq!(a2.height(terms[0].root), 2);
    }

    #[test]
    fn commutator_table_b2() {
        let b2 = build_chevalley(&build_root_system("B2").unwrap()).unwrap();
        let table = b2.derive_commutator_table().unwrap();
        let sys = b2.system();
        let (s0, s1) = (b2.simple_roots()[0], b2.simple_roots()[1]);
        let (long, short) = if sys.length_class(s0) == LengthClass::Long {
            (s0, s1)
        } else {
            (s1, s0)
        };
        let terms = table.pair(long, short);
        let bidegs: Vec<(u32, u32)> = terms.iter().map(|t| (t.i, t.j)).collect();
        assert_eq!(bidegs, vec![(1, 1), (1, 2)]);
        for t in terms {
            assert!(t.coeff.abs() <= 2);
        }
        // A pair of short roots spanning a long sum picks up the factor 2.
        let mut saw_two = false;
        for ((a, b), terms) in &table.terms {
            if sys.length_class(*a) == LengthClass::Short
                && sys.length_class(*b) == LengthClass::Short
            {
                for t in terms {
                    if (t.i, t.j) == (1, 1) {
                        assert_eq!(t.coeff.abs(), 2);
                        saw_two = true;
                    }
                }
            }
        }
        assert!(saw_two);
        let all: BTreeSet<i64> = table
            .terms
            .values()
            .flatten()
            .map(|t| t.coeff.abs())
            .collect();
        assert_eq!(all, BTreeSet::from([1, 2]));
    }

    #[test]
    fn commutator_table_g2() {
        let g2 = build_chevalley(&build_root_system("G2").unwrap()).unwrap();
        let table = g2.derive_commutator_table().unwrap();
        let sys = g2.system();
        // Short simple against long simple: the full four-term chain.
        let (s0, s1) = (g2.simple_roots()[0], g2.simple_roots()[1]);
        let (short, long) = if sys.length_class(s0) == LengthClass::Short {
            (s0, s1)
        } else {
            (s1, s0)
        };
        let terms = table.pair(short, long);
        let bidegs: Vec<(u32, u32)> = terms.iter().map(|t| (t.i, t.j)).collect();
        assert_eq!(bidegs, vec![(1, 1), (2, 1), (3, 1), (3, 2)]);
        // Every short pair with a long sum carries a coefficient divisible
        // by three on its (1,1) term.
        let mut checked = 0;
        for ((a, b), terms) in &table.terms {
            if sys.length_class(*a) != LengthClass::Short
                || sys.length_class(*b) != LengthClass::Short
            {
                continue;
            }
            let v: Vec<i64> = sys
                .root(*a)
                .iter()
                .zip(sys.root(*b))
                .map(|(x, y)| x + y)
                .collect();
            let Some(sum) = sys.find(&v) else { continue };
            if sys.length_class(sum) != LengthClass::Long {
                continue;
            }
            let t11 = terms.iter().find(|t| (t.i, t.j) == (1, 1)).unwrap();
            assert_eq!(t11.coeff.abs(), 3, "pair ({a},{b})");
            checked += 1;
        }
        assert!(checked >= 6);
        let all: BTreeSet<i64> = table
            .terms
            .values()
            .flatten()
            .map(|t| t.coeff.abs())
            .collect();
        assert_eq!(all, BTreeSet::from([1, 2, 3]));
    }

    #[test]
    fn tables_hold_over_rings() {
        for (sysname, ringname) in [("A2", "Z/4"), ("B2", "Z/3"), ("G2", "Z/2")] {
            let data = build_chevalley(&build_root_system(sysname).unwrap()).unwrap();
            let ring = make_ring(ringname).unwrap();
            let table = data.derive_commutator_table().unwrap();
            let check = data.verify_commutator_table(&table, &ring);
            assert!(check.pass, "{sysname}/{ringname}: {:?}", check.witnesses);
            let hom = data.check_homogeneity(&table, &ring);
            assert!(hom.pass, "{sysname}/{ringname}: {:?}", hom.witnesses);
        }
    }

    #[test]
    fn json_summary_is_deterministic() {
        let data = build_chevalley(&build_root_system("B2").unwrap()).unwrap();
        let j = data.to_json();
        assert_eq!(j["dimension"], 10);
        assert_eq!(j["basis"].as_array().unwrap().len(), 10);
        assert_eq!(j["divided_powers"].as_array().unwrap().len(), 8);
        assert!(!j["structure_constants"].as_array().unwrap().is_empty());
        let a = serde_json::to_string(&j).unwrap();
        let b = serde_json::to_string(&build_chevalley(&build_root_system("B2").unwrap()).unwrap().to_json()).unwrap();
        assert_eq!(a, b);
    }
}
