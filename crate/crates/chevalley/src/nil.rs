//! Two-step nilpotent modules over a finite ring, built from bilinear
//! cocycles, and quadratic maps between them.
//!
//! An element is a pair `(u, v)` in `K^m0 x K^m` with the group law
//! `(u,v) + (u',v') = (u + u' + c(v,v'), v + v')`, scalar action
//! `(u,v).k = (k^2 u, k v)`, and `tau(u,v) = 2u - c(v,v)`. The central part
//! `M0 = {(u,0)}` carries the plain `K`-module structure. Every law is
//! checked exhaustively at construction; the derived identities and the
//! quadratic-map laws are separate exhaustive reports.

use crate::error::{Error, Result};
use crate::ring::{Elem, FiniteRing};
use serde::Serialize;

/// Largest carrier accepted for a module.
pub const CARRIER_CAP: u64 = 4096;
/// Largest exhaustive-scan domain before an operation refuses to run.
const SCAN_CAP: u64 = 1 << 25;

/// An element `(u, v)` of a two-step nilpotent module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilElem {
    pub u: Vec<Elem>,
    pub v: Vec<Elem>,
}

#[derive(Clone)]
pub struct NilModule {
    pub ring: FiniteRing,
    pub m0: usize,
    pub m: usize,
    /// Full cocycle table, indexed by the mixed-radix codes of `v, v'`.
    table: Vec<Vec<Elem>>,
}

impl std::fmt::Debug for NilModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "NilModule(K = {}, m0 = {}, m = {}, {} elements)",
            self.ring.name(),
            self.m0,
            self.m,
            self.size()
        )
    }
}

impl NilModule {
    /// Builds the module from integer structure constants:
    /// `c(v, v')_t = sum_{i,j} v_i v'_j consts[i][j][t]`. Bilinearity holds
    /// by construction but the axiom oracle runs regardless.
    pub fn from_structure_constants(
        ring: &FiniteRing,
        m0: usize,
        m: usize,
        consts: &[Vec<Vec<i64>>],
    ) -> Result<NilModule> {
        if consts.len() != m || consts.iter().any(|r| r.len() != m || r.iter().any(|c| c.len() != m0)) {
            return Err(Error::Domain("structure constants must be an m x m x m0 array".into()));
        }
        let images: Vec<Vec<Vec<Elem>>> = consts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| cell.iter().map(|&x| ring.int(x)).collect())
                    .collect()
            })
            .collect();
        Self::from_cocycle_fn(ring, m0, m, |v, w| {
            let mut out = vec![0 as Elem; m0];
            for (i, &vi) in v.iter().enumerate() {
                for (j, &wj) in w.iter().enumerate() {
                    let f = ring.mul(vi, wj);
                    for (t, slot) in out.iter_mut().enumerate() {
                        *slot = ring.add(*slot, ring.mul(f, images[i][j][t]));
                    }
                }
            }
            out
        })
    }

    /// Builds the module from an arbitrary cocycle function; the axiom
    /// oracle rejects non-bilinear input with a witness.
    pub fn from_cocycle_fn(
        ring: &FiniteRing,
        m0: usize,
        m: usize,
        c: impl Fn(&[Elem], &[Elem]) -> Vec<Elem>,
    ) -> Result<NilModule> {
        let k = ring.size() as u64;
        let carrier = k
            .checked_pow((m0 + m) as u32)
            .filter(|&n| n <= CARRIER_CAP)
            .ok_or_else(|| Error::Domain(format!("carrier exceeds cap {CARRIER_CAP}")))?;
        let _ = carrier;
        let vn = k.pow(m as u32) as usize;
        let mut table = Vec::with_capacity(vn * vn);
        for a in 0..vn {
            let va = decode(ring, a, m);
            for b in 0..vn {
                let vb = decode(ring, b, m);
                let img = c(&va, &vb);
                if img.len() != m0 {
                    return Err(Error::Domain("cocycle image has wrong length".into()));
                }
                table.push(img);
            }
        }
        let module = NilModule { ring: ring.clone(), m0, m, table };
        module.verify_axioms().map_err(Error::Domain)?;
        Ok(module)
    }

    /// The abelian case `c = 0`.
    pub fn zero_cocycle(ring: &FiniteRing, m0: usize, m: usize) -> Result<NilModule> {
        Self::from_cocycle_fn(ring, m0, m, |_, _| vec![0; m0])
    }

    pub fn size(&self) -> usize {
        (self.ring.size() as u64).pow((self.m0 + self.m) as u32) as usize
    }

    fn vn(&self) -> usize {
        (self.ring.size() as u64).pow(self.m as u32) as usize
    }

    pub fn zero(&self) -> NilElem {
        NilElem { u: vec![0; self.m0], v: vec![0; self.m] }
    }

    /// Deterministic enumeration: `index = u_code * |K|^m + v_code`.
    pub fn elem(&self, index: usize) -> NilElem {
        let vn = self.vn();
        NilElem {
            u: decode(&self.ring, index / vn, self.m0),
            v: decode(&self.ring, index % vn, self.m),
        }
    }

    pub fn index(&self, e: &NilElem) -> usize {
        encode(&self.ring, &e.u) * self.vn() + encode(&self.ring, &e.v)
    }

    pub fn elements(&self) -> impl Iterator<Item = NilElem> + '_ {
        (0..self.size()).map(|i| self.elem(i))
    }

    pub fn cocycle(&self, v: &[Elem], w: &[Elem]) -> Vec<Elem> {
        self.table[encode(&self.ring, v) * self.vn() + encode(&self.ring, w)].clone()
    }

    pub fn add(&self, a: &NilElem, b: &NilElem) -> NilElem {
        let c = self.cocycle(&a.v, &b.v);
        NilElem {
            u: (0..self.m0)
                .map(|i| self.ring.add(self.ring.add(a.u[i], b.u[i]), c[i]))
                .collect(),
            v: (0..self.m).map(|i| self.ring.add(a.v[i], b.v[i])).collect(),
        }
    }

    pub fn neg(&self, a: &NilElem) -> NilElem {
        let c = self.cocycle(&a.v, &a.v);
        NilElem {
            u: (0..self.m0).map(|i| self.ring.sub(c[i], a.u[i])).collect(),
            v: a.v.iter().map(|&x| self.ring.neg(x)).collect(),
        }
    }

    pub fn sub(&self, a: &NilElem, b: &NilElem) -> NilElem {
        self.add(a, &self.neg(b))
    }

    /// Right scalar action `(u, v) . k = (k^2 u, k v)`.
    pub fn scal(&self, a: &NilElem, k: Elem) -> NilElem {
        let k2 = self.ring.mul(k, k);
        NilElem {
            u: a.u.iter().map(|&x| self.ring.mul(k2, x)).collect(),
            v: a.v.iter().map(|&x| self.ring.mul(k, x)).collect(),
        }
    }

    /// `tau(u, v) = 2u - c(v, v)`, always central.
    pub fn tau(&self, a: &NilElem) -> NilElem {
        let c = self.cocycle(&a.v, &a.v);
        NilElem {
            u: (0..self.m0)
                .map(|i| self.ring.sub(self.ring.add(a.u[i], a.u[i]), c[i]))
                .collect(),
            v: vec![0; self.m],
        }
    }

    pub fn commutator(&self, a: &NilElem, b: &NilElem) -> NilElem {
        let cab = self.cocycle(&a.v, &b.v);
        let cba = self.cocycle(&b.v, &a.v);
        NilElem {
            u: (0..self.m0).map(|i| self.ring.sub(cab[i], cba[i])).collect(),
            v: vec![0; self.m],
        }
    }

    pub fn in_central_part(&self, a: &NilElem) -> bool {
        a.v.iter().all(|&x| x == 0)
    }

    /// The left `K`-module structure on the central part.
    pub fn central_scale(&self, k: Elem, a: &NilElem) -> NilElem {
        debug_assert!(self.in_central_part(a));
        NilElem {
            u: a.u.iter().map(|&x| self.ring.mul(k, x)).collect(),
            v: vec![0; self.m],
        }
    }

    pub fn render(&self, a: &NilElem) -> String {
        let us: Vec<String> = a.u.iter().map(|&x| self.ring.render(x)).collect();
        let vs: Vec<String> = a.v.iter().map(|&x| self.ring.render(x)).collect();
        format!("({}; {})", us.join(","), vs.join(","))
    }

    /// Exhaustive check of the defining laws. Associativity of the group
    /// law is equivalent to the cocycle identity
    /// `c(v,v') + c(v+v', w) = c(v', w) + c(v, v'+w)`, which together with
    /// bilinearity is what gets scanned.
    pub fn verify_axioms(&self) -> std::result::Result<(), String> {
        let ring = &self.ring;
        let vn = self.vn();
        let ksz = ring.size() as u64;
        let vadd = |a: &[Elem], b: &[Elem]| -> Vec<Elem> {
            a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
        };
        let vscale = |k: Elem, a: &[Elem]| -> Vec<Elem> {
            a.iter().map(|&x| ring.mul(k, x)).collect()
        };

        // Bilinearity of the cocycle (additivity + scalars in each slot).
        if (vn as u64).pow(3) > SCAN_CAP || (vn as u64).pow(2) * ksz > SCAN_CAP {
            return Err("cocycle bilinearity scan exceeds the size cap".into());
        }
        for a in 0..vn {
            let va = decode(ring, a, self.m);
            for b in 0..vn {
                let vb = decode(ring, b, self.m);
                for w in 0..vn {
                    let vw = decode(ring, w, self.m);
                    let lhs = self.cocycle(&vadd(&va, &vb), &vw);
                    let rhs = vadd(&self.cocycle(&va, &vw), &self.cocycle(&vb, &vw));
                    if lhs != rhs {
                        return Err(format!(
                            "cocycle not additive in the first slot at v={va:?}, v'={vb:?}, w={vw:?}"
                        ));
                    }
                    let lhs = self.cocycle(&vw, &vadd(&va, &vb));
                    let rhs = vadd(&self.cocycle(&vw, &va), &self.cocycle(&vw, &vb));
                    if lhs != rhs {
                        return Err(format!(
                            "cocycle not additive in the second slot at w={vw:?}, v={va:?}, v'={vb:?}"
                        ));
                    }
                }
                for k in ring.elements() {
                    let lhs = self.cocycle(&vscale(k, &va), &vb);
                    let rhs = vscale(k, &self.cocycle(&va, &vb));
                    if lhs != rhs {
                        return Err(format!(
                            "cocycle not homogeneous in the first slot at k={}, v={va:?}, v'={vb:?}",
                            ring.render(k)
                        ));
                    }
                    let lhs = self.cocycle(&va, &vscale(k, &vb));
                    if lhs != rhs {
                        return Err(format!(
                            "cocycle not homogeneous in the second slot at k={}, v={va:?}, v'={vb:?}",
                            ring.render(k)
                        ));
                    }
                }
            }
        }
        // The cocycle identity for associativity follows from biadditivity,
        // but scan it anyway: it is the actual group axiom.
        for a in 0..vn {
            let va = decode(ring, a, self.m);
            for b in 0..vn {
                let vb = decode(ring, b, self.m);
                for w in 0..vn {
                    let vw = decode(ring, w, self.m);
                    let lhs = vadd(&self.cocycle(&va, &vb), &self.cocycle(&vadd(&va, &vb), &vw));
                    let rhs = vadd(&self.cocycle(&vb, &vw), &self.cocycle(&va, &vadd(&vb, &vw)));
                    if lhs != rhs {
                        return Err(format!(
                            "group law not associative at v={va:?}, v'={vb:?}, w={vw:?}"
                        ));
                    }
                }
            }
        }
        // Scalar-sum axiom m.(k+k') = m.k + kk' tau(m) + m.k' over the
        // whole carrier, and the monoid/endomorphism laws.
        let n = self.size() as u64;
        if n * ksz * ksz > SCAN_CAP {
            return Err("scalar axiom scan exceeds the size cap".into());
        }
        for i in 0..self.size() {
            let e = self.elem(i);
            if self.scal(&e, ring.one()) != e {
                return Err(format!("m.1 != m at {}", self.render(&e)));
            }
            for k in ring.elements() {
                for kp in ring.elements() {
                    let lhs = self.scal(&e, ring.add(k, kp));
                    let mid = self.central_scale(ring.mul(k, kp), &self.tau(&e));
                    let rhs = self.add(&self.add(&self.scal(&e, k), &mid), &self.scal(&e, kp));
                    if lhs != rhs {
                        return Err(format!(
                            "scalar-sum law fails at {} with k={}, k'={}",
                            self.render(&e),
                            ring.render(k),
                            ring.render(kp)
                        ));
                    }
                    let lhs = self.scal(&self.scal(&e, k), kp);
                    let rhs = self.scal(&e, ring.mul(k, kp));
                    if lhs != rhs {
                        return Err(format!("action not monoidal at {}", self.render(&e)));
                    }
                }
            }
        }
        // Endomorphism law and the commutator scaling, on v-pairs.
        for a in 0..vn {
            let va = decode(ring, a, self.m);
            let ea = NilElem { u: vec![0; self.m0], v: va };
            for b in 0..vn {
                let vb = decode(ring, b, self.m);
                let eb = NilElem { u: vec![0; self.m0], v: vb };
                for k in ring.elements() {
                    let lhs = self.scal(&self.add(&ea, &eb), k);
                    let rhs = self.add(&self.scal(&ea, k), &self.scal(&eb, k));
                    if lhs != rhs {
                        return Err(format!(
                            "m -> m.k is not an endomorphism at {} + {}, k={}",
                            self.render(&ea),
                            self.render(&eb),
                            ring.render(k)
                        ));
                    }
                }
            }
        }
        // Centrality of M0 and the filtration: [M, M] central, [M, M0] = 0.
        for a in 0..vn {
            let va = decode(ring, a, self.m);
            let ea = NilElem { u: vec![0; self.m0], v: va };
            for b in 0..vn {
                let vb = decode(ring, b, self.m);
                let eb = NilElem { u: vec![0; self.m0], v: vb };
                if !self.in_central_part(&self.commutator(&ea, &eb)) {
                    return Err("commutator leaves the central part".into());
                }
            }
            let m0_rep = NilElem { u: vec![ring.one(); self.m0], v: vec![0; self.m] };
            if self.add(&ea, &m0_rep) != self.add(&m0_rep, &ea) {
                return Err(format!("central part not central against {}", self.render(&ea)));
            }
        }
        Ok(())
    }

    /// The eight consequences of the axioms, each scanned exhaustively.
    pub fn verify_derived_identities(&self) -> LawReport {
        let ring = &self.ring;
        let mut w = Vec::new();
        let n = self.size();
        if (n as u64) * (n as u64) > SCAN_CAP {
            return LawReport {
                pass: false,
                witnesses: vec!["carrier too large for the pairwise scan".into()],
            };
        }
        let zero = self.zero();
        // tau(0) = 0.
        if self.tau(&zero) != zero {
            w.push("tau(0) != 0".to_string());
        }
        for i in 0..n {
            let m = self.elem(i);
            if self.scal(&m, 0) != zero {
                w.push(format!("m.0 != 0 at {}", self.render(&m)));
            }
            if self.tau(&self.neg(&m)) != self.central_scale(ring.int(-1), &self.tau(&m)) {
                w.push(format!("tau(-m) != -tau(m) at {}", self.render(&m)));
            }
            if self.in_central_part(&m) {
                let two = self.central_scale(ring.int(2), &m);
                if self.tau(&m) != two {
                    w.push(format!("tau(m0) != 2 m0 at {}", self.render(&m)));
                }
            }
            for k in ring.elements() {
                let lhs = self.scal(&m, ring.neg(k));
                let rhs = self.sub(
                    &self.central_scale(ring.mul(k, k), &self.tau(&m)),
                    &self.scal(&m, k),
                );
                if lhs != rhs {
                    w.push(format!(
                        "m.(-k) != k^2 tau(m) - m.k at {}, k={}",
                        self.render(&m),
                        ring.render(k)
                    ));
                }
                let lhs = self.tau(&self.scal(&m, k));
                let rhs = self.central_scale(ring.mul(k, k), &self.tau(&m));
                if lhs != rhs {
                    w.push(format!(
                        "tau(m.k) != k^2 tau(m) at {}, k={}",
                        self.render(&m),
                        ring.render(k)
                    ));
                }
            }
            for j in 0..n {
                let mp = self.elem(j);
                let lhs = self.tau(&self.add(&m, &mp));
                let rhs = self.add(
                    &self.add(&self.tau(&m), &self.commutator(&m, &mp)),
                    &self.tau(&mp),
                );
                if lhs != rhs {
                    w.push(format!(
                        "tau(m + m') law fails at {}, {}",
                        self.render(&m),
                        self.render(&mp)
                    ));
                }
            }
            if w.len() > 8 {
                break;
            }
        }
        // Commutator scaling on v-pairs (commutators ignore central parts).
        let vn = self.vn();
        'outer: for a in 0..vn {
            let ea = NilElem { u: vec![0; self.m0], v: decode(ring, a, self.m) };
            for b in 0..vn {
                let eb = NilElem { u: vec![0; self.m0], v: decode(ring, b, self.m) };
                let base = self.commutator(&ea, &eb);
                for k in ring.elements() {
                    for kp in ring.elements() {
                        let lhs = self.commutator(&self.scal(&ea, k), &self.scal(&eb, kp));
                        let rhs = self.central_scale(ring.mul(k, kp), &base);
                        if lhs != rhs {
                            w.push(format!(
                                "[m.k, m'.k'] != kk'[m, m'] at {}, {}",
                                self.render(&ea),
                                self.render(&eb)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        w.truncate(8);
        LawReport { pass: w.is_empty(), witnesses: w }
    }
}

fn decode(ring: &FiniteRing, mut code: usize, len: usize) -> Vec<Elem> {
    let k = ring.size() as usize;
    let mut out = vec![0 as Elem; len];
    for slot in out.iter_mut() {
        *slot = (code % k) as Elem;
        code /= k;
    }
    out
}

fn encode(ring: &FiniteRing, coords: &[Elem]) -> usize {
    let k = ring.size() as usize;
    coords.iter().rev().fold(0usize, |acc, &c| acc * k + c as usize)
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub pass: bool,
    pub witnesses: Vec<String>,
}

// ---------------------------------------------------------------------------
// Quadratic maps
// ---------------------------------------------------------------------------

/// A total map between module carriers, checked against the quadratic laws.
#[derive(Clone)]
pub struct QuadraticMap {
    pub source: NilModule,
    pub target: NilModule,
    table: Vec<usize>,
}

impl QuadraticMap {
    pub fn from_fn(
        source: &NilModule,
        target: &NilModule,
        f: impl Fn(&NilElem) -> NilElem,
    ) -> QuadraticMap {
        let table = (0..source.size())
            .map(|i| target.index(&f(&source.elem(i))))
            .collect();
        QuadraticMap { source: source.clone(), target: target.clone(), table }
    }

    pub fn identity(module: &NilModule) -> QuadraticMap {
        Self::from_fn(module, module, |e| e.clone())
    }

    pub fn zero(source: &NilModule, target: &NilModule) -> QuadraticMap {
        let z = target.zero();
        Self::from_fn(source, target, |_| z.clone())
    }

    pub fn apply(&self, e: &NilElem) -> NilElem {
        self.target.elem(self.table[self.source.index(e)])
    }

    /// The derived form `b(m, m') = q(m + m') - (q(m) + q(m'))`; the laws
    /// require it to be central, to depend only on the classes mod `M0`,
    /// and to be bilinear.
    pub fn derived_form(&self, m: &NilElem, mp: &NilElem) -> NilElem {
        let q_sum = self.apply(&self.source.add(m, mp));
        let sum_q = self.target.add(&self.apply(m), &self.apply(mp));
        self.target.sub(&q_sum, &sum_q)
    }

    /// Exhaustive check of the three defining laws, well-definedness and
    /// bilinearity of the derived form, and the four derived identities.
    pub fn check(&self) -> LawReport {
        let (src, tgt) = (&self.source, &self.target);
        let ring = &src.ring;
        let mut w = Vec::new();
        let n = src.size();
        if (n as u64) * (n as u64) > SCAN_CAP {
            return LawReport {
                pass: false,
                witnesses: vec!["carrier too large for the pairwise scan".into()],
            };
        }

        // Law 1: q(M0) in N0 with K-linear restriction.
        for i in 0..n {
            let m0 = src.elem(i);
            if !src.in_central_part(&m0) {
                continue;
            }
            let q0 = self.apply(&m0);
            if !tgt.in_central_part(&q0) {
                w.push(format!("q({}) leaves the central part", src.render(&m0)));
                continue;
            }
            for j in 0..n {
                let n0 = src.elem(j);
                if !src.in_central_part(&n0) {
                    continue;
                }
                let lhs = self.apply(&src.add(&m0, &n0));
                let rhs = tgt.add(&q0, &self.apply(&n0));
                if lhs != rhs {
                    w.push(format!(
                        "q not additive on the central part at {}, {}",
                        src.render(&m0),
                        src.render(&n0)
                    ));
                }
            }
            for k in ring.elements() {
                let lhs = self.apply(&src.central_scale(k, &m0));
                let rhs = tgt.central_scale(k, &q0);
                if lhs != rhs {
                    w.push(format!(
                        "q not K-linear on the central part at {} with k={}",
                        src.render(&m0),
                        ring.render(k)
                    ));
                }
            }
        }

        // Law 2: the derived form is central and factors through M/M0.
        let vn = src.vn();
        let v_rep = |a: usize| NilElem { u: vec![0; src.m0], v: decode(ring, a, src.m) };
        let mut canon: Vec<Vec<NilElem>> = vec![Vec::new(); vn];
        for a in 0..vn {
            canon[a] = (0..vn).map(|b| self.derived_form(&v_rep(a), &v_rep(b))).collect();
        }
        let canon_central = canon
            .iter()
            .flatten()
            .all(|b| tgt.in_central_part(b));
        if !canon_central {
            w.push("derived form not central".into());
        }
        'pairs: for i in 0..n {
            let m = src.elem(i);
            for j in 0..n {
                let mp = src.elem(j);
                let b = self.derived_form(&m, &mp);
                if !tgt.in_central_part(&b) {
                    w.push(format!(
                        "derived form not central at {}, {}",
                        src.render(&m),
                        src.render(&mp)
                    ));
                    break 'pairs;
                }
                let expected = &canon[encode(ring, &m.v)][encode(ring, &mp.v)];
                if &b != expected {
                    w.push(format!(
                        "derived form not well-defined mod the central part at {}, {}",
                        src.render(&m),
                        src.render(&mp)
                    ));
                    break 'pairs;
                }
            }
        }

        // Bilinearity of the derived form on v-classes (meaningful only
        // once the form is known to be central).
        let vadd = |a: &[Elem], b: &[Elem]| -> Vec<Elem> {
            a.iter().zip(b).map(|(&x, &y)| ring.add(x, y)).collect()
        };
        'bilin: for a in 0..vn {
            if !canon_central {
                break;
            }
            for b in 0..vn {
                for c in 0..vn {
                    let (va, vb, vc) = (v_rep(a), v_rep(b), v_rep(c));
                    let sum_ab = NilElem { u: vec![0; src.m0], v: vadd(&va.v, &vb.v) };
                    let lhs = &canon[encode(ring, &sum_ab.v)][c];
                    let rhs = tgt.add(&canon[a][c], &canon[b][c]);
                    if lhs != &rhs {
                        w.push("derived form not additive in the first slot".into());
                        break 'bilin;
                    }
                    let sum_bc = NilElem { u: vec![0; src.m0], v: vadd(&vb.v, &vc.v) };
                    let lhs = &canon[a][encode(ring, &sum_bc.v)];
                    let rhs = tgt.add(&canon[a][b], &canon[a][c]);
                    if lhs != &rhs {
                        w.push("derived form not additive in the second slot".into());
                        break 'bilin;
                    }
                }
                for k in ring.elements() {
                    let scaled = NilElem {
                        u: vec![0; src.m0],
                        v: v_rep(a).v.iter().map(|&x| ring.mul(k, x)).collect(),
                    };
                    let lhs = &canon[encode(ring, &scaled.v)][b];
                    let rhs = tgt.central_scale(k, &canon[a][b]);
                    if lhs != &rhs {
                        w.push(format!(
                            "derived form not homogeneous at k={}",
                            ring.render(k)
                        ));
                        break 'bilin;
                    }
                }
            }
        }

        // Law 3: q(m.k) = q(m).k.
        for i in 0..n {
            let m = src.elem(i);
            for k in ring.elements() {
                let lhs = self.apply(&src.scal(&m, k));
                let rhs = tgt.scal(&self.apply(&m), k);
                if lhs != rhs {
                    w.push(format!(
                        "q(m.k) != q(m).k at {} with k={}",
                        src.render(&m),
                        ring.render(k)
                    ));
                }
            }
            if w.len() > 8 {
                break;
            }
        }

        // Derived identities.
        if self.apply(&src.zero()) != tgt.zero() {
            w.push("q(0) != 0".into());
        }
        for i in 0..n {
            let m = src.elem(i);
            let bmm = self.derived_form(&m, &m);
            let lhs = self.apply(&src.neg(&m));
            let rhs = tgt.sub(&bmm, &self.apply(&m));
            if lhs != rhs {
                w.push(format!("q(-m) != b(m,m) - q(m) at {}", src.render(&m)));
            }
            let lhs = self.apply(&src.tau(&m));
            let rhs = tgt.sub(&tgt.tau(&self.apply(&m)), &bmm);
            if lhs != rhs {
                w.push(format!("q(tau(m)) != tau(q(m)) - b(m,m) at {}", src.render(&m)));
            }
            for j in 0..n {
                let mp = src.elem(j);
                let lhs = self.apply(&src.commutator(&m, &mp));
                let rhs = tgt.sub(
                    &tgt.add(
                        &tgt.commutator(&self.apply(&m), &self.apply(&mp)),
                        &self.derived_form(&m, &mp),
                    ),
                    &self.derived_form(&mp, &m),
                );
                if lhs != rhs {
                    w.push(format!(
                        "q([m,m']) law fails at {}, {}",
                        src.render(&m),
                        src.render(&mp)
                    ));
                }
            }
            if w.len() > 8 {
                break;
            }
        }
        w.truncate(8);
        LawReport { pass: w.is_empty(), witnesses: w }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn z2_module() -> NilModule {
        let k = make_ring("Z/2").unwrap();
        NilModule::from_structure_constants(&k, 1, 1, &[vec![vec![1]]]).unwrap()
    }

    #[test]
    fn z2_cocycle_module() {
        let m = z2_module();
        assert_eq!(m.size(), 4);
        // (0;1) + (0;1) = (c(1,1); 0) = (1; 0).
        let e = NilElem { u: vec![0], v: vec![1] };
        let sum = m.add(&e, &e);
        assert_eq!(sum, NilElem { u: vec![1], v: vec![0] });
        // tau(0;1) = -c(1,1) = 1 over Z/2.
        assert_eq!(m.tau(&e), NilElem { u: vec![1], v: vec![0] });
        assert!(m.verify_derived_identities().pass);
    }

    #[test]
    fn abelian_case() {
        let k = make_ring("Z/4").unwrap();
        let m = NilModule::zero_cocycle(&k, 1, 1).unwrap();
        for e in m.elements() {
            // tau(u, v) = 2u when the cocycle vanishes.
            let t = m.tau(&e);
            assert_eq!(t.u[0], k.int(2 * e.u[0] as i64));
            for f in m.elements() {
                assert_eq!(m.commutator(&e, &f), m.zero());
                assert_eq!(m.add(&e, &f), m.add(&f, &e));
            }
        }
        assert!(m.verify_derived_identities().pass);
    }

    #[test]
    fn z3_scaled_cocycle() {
        let k = make_ring("Z/3").unwrap();
        let m = NilModule::from_structure_constants(&k, 1, 1, &[vec![vec![2]]]).unwrap();
        assert_eq!(m.size(), 9);
        assert!(m.verify_derived_identities().pass);
    }

    #[test]
    fn two_dimensional_v_part() {
        // Antisymmetric cocycle on K^2: c(v, w) = v1 w2 (Heisenberg-like).
        let k = make_ring("Z/2").unwrap();
        let m = NilModule::from_structure_constants(
            &k,
            1,
            2,
            &[vec![vec![0], vec![1]], vec![vec![0], vec![0]]],
        )
        .unwrap();
        assert_eq!(m.size(), 8);
        assert!(m.verify_derived_identities().pass);
        // Nontrivial commutator exists.
        let a = NilElem { u: vec![0], v: vec![1, 0] };
        let b = NilElem { u: vec![0], v: vec![0, 1] };
        assert_ne!(m.commutator(&a, &b), m.zero());
    }

    #[test]
    fn non_bilinear_cocycle_rejected() {
        let k = make_ring("Z/3").unwrap();
        let r = NilModule::from_cocycle_fn(&k, 1, 1, |v, w| {
            vec![k.mul(k.mul(v[0], v[0]), w[0])]
        });
        let err = r.err().expect("v^2 w is not bilinear");
        assert!(err.to_string().contains("not"), "{err}");
    }

    #[test]
    fn quadratic_identity_and_zero() {
        let m = z2_module();
        assert!(QuadraticMap::identity(&m).check().pass);
        assert!(QuadraticMap::zero(&m, &m).check().pass);
        let k = make_ring("Z/3").unwrap();
        let m3 = NilModule::from_structure_constants(&k, 1, 1, &[vec![vec![2]]]).unwrap();
        assert!(QuadraticMap::identity(&m3).check().pass);
    }

    #[test]
    fn quadratic_square_shift() {
        // q(u, v) = (u + v^2, v) on the Z/2 cocycle module.
        let m = z2_module();
        let ring = m.ring.clone();
        let q = QuadraticMap::from_fn(&m, &m, |e| NilElem {
            u: vec![ring.add(e.u[0], ring.mul(e.v[0], e.v[0]))],
            v: e.v.clone(),
        });
        let rep = q.check();
        assert!(rep.pass, "witnesses: {:?}", rep.witnesses);
        // Its derived form vanishes identically.
        for a in m.elements() {
            for b in m.elements() {
                assert_eq!(q.derived_form(&a, &b), m.zero());
            }
        }
    }

    #[test]
    fn quadratic_failures_are_witnessed() {
        let k = make_ring("Z/3").unwrap();
        let m = NilModule::from_structure_constants(&k, 1, 1, &[vec![vec![1]]]).unwrap();
        // v-part v^2 breaks the derived-form centrality.
        let bad = QuadraticMap::from_fn(&m, &m, |e| NilElem {
            u: e.u.clone(),
            v: vec![k.mul(e.v[0], e.v[0])],
        });
        let rep = bad.check();
        assert!(!rep.pass);
        // u-part u^2 breaks linearity on the central part.
        let bad = QuadraticMap::from_fn(&m, &m, |e| NilElem {
            u: vec![k.mul(e.u[0], e.u[0])],
            v: e.v.clone(),
        });
        let rep = bad.check();
        assert!(!rep.pass);
        assert!(rep.witnesses.iter().any(|w| w.contains("central")));
        // Swapping v for a constant multiple violates the scalar law.
        let bad = QuadraticMap::from_fn(&m, &m, |e| NilElem {
            u: vec![e.v[0]],
            v: vec![0],
        });
        let rep = bad.check();
        assert!(!rep.pass);
        assert!(rep.witnesses.iter().any(|w| w.contains("q(m.k)")), "{:?}", rep.witnesses);
    }

    #[test]
    fn tau_lands_central_and_m0_scaling() {
        let m = z2_module();
        for e in m.elements() {
            assert!(m.in_central_part(&m.tau(&e)));
        }
        let k = make_ring("Z/4").unwrap();
        let m = NilModule::zero_cocycle(&k, 2, 1).unwrap();
        let e = NilElem { u: vec![1, 3], v: vec![0] };
        // m0 . k = k^2 m0 matches the right action.
        for kk in k.elements() {
            assert_eq!(m.scal(&e, kk), m.central_scale(k.mul(kk, kk), &e));
        }
    }
}
