//! Finite commutative unital rings with exact, table-friendly arithmetic.
//!
//! A ring is built from a descriptor (`Z/6`, `Z/2[x]/(x^2+x+1)`,
//! `Z/2 x Z/3`) or programmatically (semidirect extensions). Elements are
//! plain indices into a fixed, deterministic enumeration of the carrier;
//! index `0` is always the zero element. All operations are exact; rings up
//! to 512 elements carry full operation tables so inner loops are lookups.
//!
//! On top of the plain rings the module provides the ideal-flavoured
//! machinery used elsewhere in the crate: subalgebras (ideals with the
//! parent action), homotopes `a*b*s`, idempotent powers and localizations,
//! colocalization towers with their stabilization index, additive spans for
//! the power-idempotent property, idempotent cover sums, semidirect rings
//! `A x| R`, and crossed-module checks for `delta: A -> R`.

use crate::error::{Error, Result};
use rustc_hash::FxHashMap;
use serde::Serialize;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Index of an element in a ring's carrier enumeration.
pub type Elem = u32;

/// Largest carrier accepted by [`make_ring`].
pub const SIZE_CAP: u32 = 4096;
/// Carriers up to this size get precomputed operation tables.
const TABLE_CAP: u32 = 512;
/// Carriers up to this size are axiom-checked at construction time.
const AUTO_VERIFY_CAP: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    /// `Z/n`; element index is the residue itself.
    Modular(u32),
    /// `(Z/base)[x]/(f)` with `f` monic of degree `deg`; the element with
    /// digits `c_0..c_{deg-1}` (base-`base`) has index `sum c_i base^i`.
    Quotient { base: u32, modulus: Vec<u32> },
    /// Direct product, mixed-radix over the factors in order.
    Product(Vec<FiniteRing>),
    /// `A x| R` for an ideal `A` of `R`: carrier `A x R`, product
    /// `(a,b)(a',b') = (aa' + ab' + a'b, bb')`, unit `(0,1)`.
    Semidirect {
        ideal: Vec<Elem>,
        ideal_pos: FxHashMap<Elem, u32>,
        inner: FiniteRing,
    },
}

struct RingInner {
    name: String,
    size: u32,
    repr: Repr,
    one: Elem,
    add_tab: OnceLock<Vec<u16>>,
    mul_tab: OnceLock<Vec<u16>>,
    neg_tab: OnceLock<Vec<u16>>,
    inv_tab: OnceLock<Vec<Option<Elem>>>,
}

/// A finite commutative unital ring. Cheap to clone (shared internals).
#[derive(Clone)]
pub struct FiniteRing(Arc<RingInner>);

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.size == other.0.size && self.0.repr == other.0.repr)
    }
}
impl Eq for FiniteRing {}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, size {})", self.0.name, self.0.size)
    }
}

/// Parses a ring descriptor and builds the ring.
///
/// Grammar: `Z/n`, `Z/p[x]/(f)` with `f` monic (e.g. `x^2+x+1`), and
/// products of those separated by `x` (e.g. `Z/2 x Z/3`).
pub fn make_ring(descriptor: &str) -> Result<FiniteRing> {
    let parts = split_product(descriptor)?;
    if parts.is_empty() {
        return Err(Error::Parse("empty ring descriptor".into()));
    }
    let factors: Vec<FiniteRing> = parts
        .iter()
        .map(|p| parse_atom(p.trim()))
        .collect::<Result<_>>()?;
    if factors.len() == 1 {
        Ok(factors.into_iter().next().unwrap())
    } else {
        FiniteRing::product(factors)
    }
}

/// Splits a descriptor on top-level `x` separators (not the `x` inside
/// polynomial quotients, which always sits between non-space characters
/// or brackets).
fn split_product(s: &str) -> Result<Vec<String>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '[' | '(' => {
                depth += 1;
                cur.push(c);
            }
            ']' | ')' => {
                depth -= 1;
                cur.push(c);
            }
            'x' if depth == 0 => {
                // A product separator is an `x` surrounded by whitespace.
                let prev_space = i > 0 && chars[i - 1].is_whitespace();
                let next_space = i + 1 < chars.len() && chars[i + 1].is_whitespace();
                if prev_space && next_space {
                    parts.push(cur.trim().to_string());
                    cur.clear();
                } else {
                    cur.push(c);
                }
            }
            _ => cur.push(c),
        }
        i += 1;
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in `{s}`")));
    }
    parts.push(cur.trim().to_string());
    Ok(parts)
}

fn parse_atom(s: &str) -> Result<FiniteRing> {
    if let Some(rest) = s.strip_prefix("Z/") {
        if let Some(bracket) = rest.find('[') {
            let n: u32 = rest[..bracket]
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in `{s}`")))?;
            let tail = rest[bracket..].trim();
            let tail = tail
                .strip_prefix("[x]/(")
                .ok_or_else(|| Error::Parse(format!("expected `[x]/(f)` in `{s}`")))?;
            let poly_src = tail
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("missing `)` in `{s}`")))?;
            let coeffs = parse_poly(poly_src, n)?;
            return FiniteRing::quotient(n, coeffs);
        }
        let n: u32 = rest
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus in `{s}`")))?;
        return FiniteRing::modular(n);
    }
    Err(Error::Parse(format!("unrecognised ring descriptor `{s}`")))
}

/// Parses `x^2+x+1` style polynomials into coefficient vectors
/// (index = degree), reducing coefficients mod `base`.
fn parse_poly(src: &str, base: u32) -> Result<Vec<u32>> {
    let cleaned: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms: Vec<(i64, usize)> = Vec::new();
    let mut rest = cleaned.as_str();
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    while !rest.is_empty() {
        let end = rest
            .char_indices()
            .skip(1)
            .find(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        let term = &rest[..end];
        let (coeff, deg) = parse_term(term)?;
        terms.push((sign * coeff, deg));
        if end == rest.len() {
            break;
        }
        sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
        rest = &rest[end + 1..];
    }
    let deg = terms
        .iter()
        .map(|&(_, d)| d)
        .max()
        .ok_or_else(|| Error::Parse(format!("empty polynomial `{src}`")))?;
    if deg == 0 {
        return Err(Error::Parse(format!("constant modulus `{src}`")));
    }
    let m = base as i64;
    let mut coeffs = vec![0u32; deg + 1];
    for (c, d) in terms {
        let v = (coeffs[d] as i64 + c).rem_euclid(m);
        coeffs[d] = v as u32;
    }
    if coeffs[deg] != 1 {
        return Err(Error::Parse(format!("modulus `{src}` is not monic")));
    }
    Ok(coeffs)
}

fn parse_term(term: &str) -> Result<(i64, usize)> {
    if let Some(pos) = term.find('x') {
        let coeff_src = &term[..pos];
        let coeff = if coeff_src.is_empty() {
            1
        } else {
            coeff_src
                .trim_end_matches('*')
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient `{term}`")))?
        };
        let exp_src = &term[pos + 1..];
        let deg = if exp_src.is_empty() {
            1
        } else {
            exp_src
                .strip_prefix('^')
                .and_then(|e| e.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad exponent `{term}`")))?
        };
        Ok((coeff, deg))
    } else {
        let c = term
            .parse()
            .map_err(|_| Error::Parse(format!("bad constant `{term}`")))?;
        Ok((c, 0))
    }
}

impl FiniteRing {
    pub fn modular(n: u32) -> Result<FiniteRing> {
        if n == 0 {
            return Err(Error::Parse("Z/0 is not finite".into()));
        }
        if n > SIZE_CAP {
            return Err(Error::Parse(format!("carrier exceeds size cap {SIZE_CAP}")));
        }
        Self::build(format!("Z/{n}"), n, Repr::Modular(n), if n == 1 { 0 } else { 1 })
    }

    /// `(Z/base)[x]/(f)`. `coeffs` lists `f` low degree first and must be
    /// monic. The carrier is all polynomials of degree `< deg f`.
    pub fn quotient(base: u32, coeffs: Vec<u32>) -> Result<FiniteRing> {
        if base == 0 {
            return Err(Error::Parse("Z/0 base".into()));
        }
        let deg = coeffs.len() - 1;
        if coeffs[deg] != 1 {
            return Err(Error::Parse("modulus is not monic".into()));
        }
        let size = (base as u64).checked_pow(deg as u32);
        let size = match size {
            Some(s) if s <= SIZE_CAP as u64 => s as u32,
            _ => return Err(Error::Parse(format!("carrier exceeds size cap {SIZE_CAP}"))),
        };
        let name = format!("Z/{base}[x]/({})", render_poly(&coeffs));
        let one = if base == 1 { 0 } else { 1 };
        Self::build(name, size, Repr::Quotient { base, modulus: coeffs }, one)
    }

    pub fn product(factors: Vec<FiniteRing>) -> Result<FiniteRing> {
        let mut size: u64 = 1;
        for f in &factors {
            size *= f.size() as u64;
            if size > SIZE_CAP as u64 {
                return Err(Error::Parse(format!("carrier exceeds size cap {SIZE_CAP}")));
            }
        }
        let name = factors
            .iter()
            .map(|f| f.name().to_string())
            .collect::<Vec<_>>()
            .join(" x ");
        let mut one = 0u64;
        let mut stride = 1u64;
        for f in &factors {
            one += f.one() as u64 * stride;
            stride *= f.size() as u64;
        }
        Self::build(name, size as u32, Repr::Product(factors), one as Elem)
    }

    /// The semidirect ring `A x| R` on an ideal `A` of `R`.
    pub fn semidirect(ideal: &Subalgebra) -> Result<FiniteRing> {
        let inner = ideal.ring.clone();
        if !ideal.is_ideal() {
            return Err(Error::Domain(
                "semidirect construction requires an ideal of the ring".into(),
            ));
        }
        let elems = ideal.elems.clone();
        let size = elems.len() as u64 * inner.size() as u64;
        if size > SIZE_CAP as u64 {
            return Err(Error::Parse(format!("carrier exceeds size cap {SIZE_CAP}")));
        }
        let mut ideal_pos = FxHashMap::default();
        for (i, &a) in elems.iter().enumerate() {
            ideal_pos.insert(a, i as u32);
        }
        let name = format!("({} ideal of {}) x| {}", elems.len(), inner.name(), inner.name());
        let one = inner.one();
        Self::build(
            name,
            size as u32,
            Repr::Semidirect { ideal: elems, ideal_pos, inner },
            one, // index of (0, 1): position 0 in the ideal times size + one
        )
    }

    fn build(name: String, size: u32, repr: Repr, one: Elem) -> Result<FiniteRing> {
        let ring = FiniteRing(Arc::new(RingInner {
            name,
            size,
            repr,
            one,
            add_tab: OnceLock::new(),
            mul_tab: OnceLock::new(),
            neg_tab: OnceLock::new(),
            inv_tab: OnceLock::new(),
        }));
        debug_assert_eq!(ring.raw_tuple(0).iter().sum::<u64>(), 0);
        if size <= TABLE_CAP {
            ring.ensure_tables();
        }
        if size <= AUTO_VERIFY_CAP {
            ring.verify_axioms()
                .map_err(|w| Error::Internal(format!("ring axioms failed: {w}")))?;
        }
        Ok(ring)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }
    pub fn size(&self) -> u32 {
        self.0.size
    }
    pub fn zero(&self) -> Elem {
        0
    }
    pub fn one(&self) -> Elem {
        self.0.one
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.size
    }

    fn ensure_tables(&self) {
        let n = self.0.size as usize;
        self.0.add_tab.get_or_init(|| {
            let mut t = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = self.add_raw(a as Elem, b as Elem) as u16;
                }
            }
            t
        });
        self.0.mul_tab.get_or_init(|| {
            let mut t = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = self.mul_raw(a as Elem, b as Elem) as u16;
                }
            }
            t
        });
        self.0.neg_tab.get_or_init(|| {
            (0..n).map(|a| self.neg_raw(a as Elem) as u16).collect()
        });
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = self.0.add_tab.get() {
            return t[a as usize * self.0.size as usize + b as usize] as Elem;
        }
        self.add_raw(a, b)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = self.0.mul_tab.get() {
            return t[a as usize * self.0.size as usize + b as usize] as Elem;
        }
        self.mul_raw(a, b)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if let Some(t) = self.0.neg_tab.get() {
            return t[a as usize] as Elem;
        }
        self.neg_raw(a)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Elem, k: u32) -> Elem {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Canonical image of an integer under `Z -> R`.
    pub fn int(&self, k: i64) -> Elem {
        let mut acc = self.zero();
        let step = if k >= 0 { self.one() } else { self.neg(self.one()) };
        // Doubling ladder on |k|.
        let mut base = step;
        let mut m = k.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            m >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: Elem) -> Option<Elem> {
        let tab = self.0.inv_tab.get_or_init(|| {
            let n = self.0.size;
            let mut t = vec![None; n as usize];
            for x in 0..n {
                for y in 0..n {
                    if self.mul(x, y) == self.one() {
                        t[x as usize] = Some(y);
                        break;
                    }
                }
            }
            t
        });
        tab[a as usize]
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.inverse(a).is_some()
    }

    pub fn units(&self) -> Vec<Elem> {
        self.elements().filter(|&u| self.is_unit(u)).collect()
    }

    fn add_raw(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.repr {
            Repr::Modular(n) => ((a as u64 + b as u64) % *n as u64) as Elem,
            Repr::Quotient { base, modulus } => {
                let deg = modulus.len() - 1;
                let (mut da, db) = (digits(a, *base, deg), digits(b, *base, deg));
                for i in 0..deg {
                    da[i] = (da[i] + db[i]) % base;
                }
                undigits(&da, *base)
            }
            Repr::Product(fs) => {
                let (da, db) = (prod_split(a, fs), prod_split(b, fs));
                prod_join(
                    &da.iter()
                        .zip(&db)
                        .zip(fs)
                        .map(|((&x, &y), f)| f.add(x, y))
                        .collect::<Vec<_>>(),
                    fs,
                )
            }
            Repr::Semidirect { ideal, ideal_pos, inner } => {
                let n = inner.size();
                let (pa, ra) = (ideal[(a / n) as usize], a % n);
                let (pb, rb) = (ideal[(b / n) as usize], b % n);
                let s = inner.add(pa, pb);
                ideal_pos[&s] * n + inner.add(ra, rb)
            }
        }
    }

    fn neg_raw(&self, a: Elem) -> Elem {
        match &self.0.repr {
            Repr::Modular(n) => if a == 0 { 0 } else { n - a },
            Repr::Quotient { base, modulus } => {
                let deg = modulus.len() - 1;
                let mut da = digits(a, *base, deg);
                for d in da.iter_mut() {
                    *d = (*base - *d) % *base;
                }
                undigits(&da, *base)
            }
            Repr::Product(fs) => {
                let da = prod_split(a, fs);
                prod_join(
                    &da.iter().zip(fs).map(|(&x, f)| f.neg(x)).collect::<Vec<_>>(),
                    fs,
                )
            }
            Repr::Semidirect { ideal, ideal_pos, inner } => {
                let n = inner.size();
                let (pa, ra) = (ideal[(a / n) as usize], a % n);
                ideal_pos[&inner.neg(pa)] * n + inner.neg(ra)
            }
        }
    }

    fn mul_raw(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.repr {
            Repr::Modular(n) => ((a as u64 * b as u64) % *n as u64) as Elem,
            Repr::Quotient { base, modulus } => {
                let deg = modulus.len() - 1;
                let (da, db) = (digits(a, *base, deg), digits(b, *base, deg));
                let m = *base as u64;
                let mut prod = vec![0u64; 2 * deg];
                for i in 0..deg {
                    if da[i] == 0 {
                        continue;
                    }
                    for j in 0..deg {
                        prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % m;
                    }
                }
                // Reduce by the monic modulus from the top down.
                for k in (deg..2 * deg).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, &mc) in modulus.iter().enumerate().take(deg) {
                        let idx = k - deg + i;
                        let sub = (c * mc as u64) % m;
                        prod[idx] = (prod[idx] + m - sub) % m;
                    }
                }
                let da: Vec<u32> = prod[..deg].iter().map(|&x| x as u32).collect();
                undigits(&da, *base)
            }
            Repr::Product(fs) => {
                let (da, db) = (prod_split(a, fs), prod_split(b, fs));
                prod_join(
                    &da.iter()
                        .zip(&db)
                        .zip(fs)
                        .map(|((&x, &y), f)| f.mul(x, y))
                        .collect::<Vec<_>>(),
                    fs,
                )
            }
            Repr::Semidirect { ideal, ideal_pos, inner } => {
                let n = inner.size();
                let (pa, ra) = (ideal[(a / n) as usize], a % n);
                let (pb, rb) = (ideal[(b / n) as usize], b % n);
                let part = inner.add(
                    inner.mul(pa, pb),
                    inner.add(inner.mul(pa, rb), inner.mul(pb, ra)),
                );
                ideal_pos[&part] * n + inner.mul(ra, rb)
            }
        }
    }

    /// Flat integer tuple describing an element (used for hashing/display).
    fn raw_tuple(&self, a: Elem) -> Vec<u64> {
        match &self.0.repr {
            Repr::Modular(_) => vec![a as u64],
            Repr::Quotient { base, modulus } => {
                digits(a, *base, modulus.len() - 1).iter().map(|&d| d as u64).collect()
            }
            Repr::Product(fs) => prod_split(a, fs)
                .iter()
                .zip(fs)
                .flat_map(|(&x, f)| f.raw_tuple(x))
                .collect(),
            Repr::Semidirect { ideal, inner, .. } => {
                let n = inner.size();
                let mut t = inner.raw_tuple(ideal[(a / n) as usize]);
                t.extend(inner.raw_tuple(a % n));
                t
            }
        }
    }

    /// Human-readable rendering of an element.
    pub fn render(&self, a: Elem) -> String {
        match &self.0.repr {
            Repr::Modular(_) => a.to_string(),
            Repr::Quotient { base, modulus } => {
                let da = digits(a, *base, modulus.len() - 1);
                render_poly(&da)
            }
            Repr::Product(fs) => {
                let parts: Vec<String> = prod_split(a, fs)
                    .iter()
                    .zip(fs)
                    .map(|(&x, f)| f.render(x))
                    .collect();
                format!("({})", parts.join(","))
            }
            Repr::Semidirect { ideal, inner, .. } => {
                let n = inner.size();
                format!(
                    "({} : {})",
                    inner.render(ideal[(a / n) as usize]),
                    inner.render(a % n)
                )
            }
        }
    }

    /// For semidirect rings: the projection onto the unital part.
    pub fn sd_project(&self, a: Elem) -> Option<Elem> {
        match &self.0.repr {
            Repr::Semidirect { inner, .. } => Some(a % inner.size()),
            _ => None,
        }
    }

    /// For semidirect rings: the pair `(ideal element of inner, inner element)`.
    pub fn sd_parts(&self, a: Elem) -> Option<(Elem, Elem)> {
        match &self.0.repr {
            Repr::Semidirect { ideal, inner, .. } => {
                let n = inner.size();
                Some((ideal[(a / n) as usize], a % n))
            }
            _ => None,
        }
    }

    /// For semidirect rings: embed `(a, r)` with `a` in the ideal.
    pub fn sd_pair(&self, ideal_elem: Elem, inner_elem: Elem) -> Option<Elem> {
        match &self.0.repr {
            Repr::Semidirect { ideal_pos, inner, .. } => {
                ideal_pos.get(&ideal_elem).map(|&p| p * inner.size() + inner_elem)
            }
            _ => None,
        }
    }

    pub fn sd_inner(&self) -> Option<&FiniteRing> {
        match &self.0.repr {
            Repr::Semidirect { inner, .. } => Some(inner),
            _ => None,
        }
    }

    /// For product rings: the factor rings.
    pub fn product_factors(&self) -> Option<&[FiniteRing]> {
        match &self.0.repr {
            Repr::Product(fs) => Some(fs),
            _ => None,
        }
    }

    /// For product rings: componentwise decomposition of an element.
    pub fn product_split(&self, a: Elem) -> Option<Vec<Elem>> {
        match &self.0.repr {
            Repr::Product(fs) => Some(prod_split(a, fs)),
            _ => None,
        }
    }

    /// For product rings: assemble an element from its components.
    pub fn product_join(&self, parts: &[Elem]) -> Option<Elem> {
        match &self.0.repr {
            Repr::Product(fs) if parts.len() == fs.len() => Some(prod_join(parts, fs)),
            _ => None,
        }
    }

    /// Exhaustive check of the commutative unital ring axioms.
    pub fn verify_axioms(&self) -> std::result::Result<(), String> {
        let n = self.0.size;
        let (zero, one) = (self.zero(), self.one());
        for a in 0..n {
            if self.add(a, zero) != a {
                return Err(format!("{} + 0 != {0}", self.render(a)));
            }
            if self.mul(a, one) != a {
                return Err(format!("{} * 1 != {0}", self.render(a)));
            }
            if self.add(a, self.neg(a)) != zero {
                return Err(format!("{} + (-{0}) != 0", self.render(a)));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return Err(format!("add not commutative at ({a},{b})"));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("mul not commutative at ({a},{b})"));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(format!("add not associative at ({a},{b},{c})"));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(format!("mul not associative at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn digits(mut a: Elem, base: u32, deg: usize) -> Vec<u32> {
    let mut d = vec![0u32; deg];
    for slot in d.iter_mut() {
        *slot = a % base;
        a /= base;
    }
    d
}

fn undigits(d: &[u32], base: u32) -> Elem {
    let mut a = 0u64;
    for &c in d.iter().rev() {
        a = a * base as u64 + c as u64;
    }
    a as Elem
}

fn prod_split(a: Elem, fs: &[FiniteRing]) -> Vec<Elem> {
    let mut out = Vec::with_capacity(fs.len());
    let mut rest = a;
    for f in fs {
        out.push(rest % f.size());
        rest /= f.size();
    }
    out
}

fn prod_join(parts: &[Elem], fs: &[FiniteRing]) -> Elem {
    let mut a = 0u64;
    let mut stride = 1u64;
    for (p, f) in parts.iter().zip(fs) {
        a += *p as u64 * stride;
        stride *= f.size() as u64;
    }
    a as Elem
}

fn render_poly(coeffs: &[u32]) -> String {
    let mut terms = Vec::new();
    for (d, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let t = match (d, c) {
            (0, _) => c.to_string(),
            (1, 1) => "x".into(),
            (1, _) => format!("{c}x"),
            (_, 1) => format!("x^{d}"),
            _ => format!("{c}x^{d}"),
        };
        terms.push(t);
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

// ---------------------------------------------------------------------------
// Subalgebras (ideals with the parent action)
// ---------------------------------------------------------------------------

/// A subset of a ring closed under addition, negation, multiplication, and
/// multiplication by arbitrary ring elements. With the parent action it is a
/// non-unital algebra; `unital_over_parent` records whether the action spans.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    pub ring: FiniteRing,
    /// Sorted carrier, always starting with 0.
    pub elems: Vec<Elem>,
    pos: FxHashMap<Elem, u32>,
    pub unital_over_parent: bool,
}

impl PartialEq for Subalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.elems == other.elems
    }
}

impl Subalgebra {
    /// Smallest ideal containing the generators.
    pub fn ideal(ring: &FiniteRing, generators: &[Elem]) -> Subalgebra {
        let mut set = vec![false; ring.size() as usize];
        set[0] = true;
        let mut stack: Vec<Elem> = vec![0];
        for &g in generators {
            if !set[g as usize] {
                set[g as usize] = true;
                stack.push(g);
            }
        }
        while let Some(a) = stack.pop() {
            let push = |x: Elem, set: &mut Vec<bool>, stack: &mut Vec<Elem>| {
                if !set[x as usize] {
                    set[x as usize] = true;
                    stack.push(x);
                }
            };
            push(ring.neg(a), &mut set, &mut stack);
            for r in ring.elements() {
                push(ring.mul(a, r), &mut set, &mut stack);
                if set[r as usize] {
                    push(ring.add(a, r), &mut set, &mut stack);
                }
            }
            // Adding previously-found members may unlock new sums.
            let members: Vec<Elem> = (0..ring.size()).filter(|&x| set[x as usize]).collect();
            for &m in &members {
                push(ring.add(a, m), &mut set, &mut stack);
            }
        }
        let elems: Vec<Elem> = (0..ring.size()).filter(|&x| set[x as usize]).collect();
        Self::from_carrier(ring, elems)
    }

    /// The principal ideal `sR`.
    pub fn principal(ring: &FiniteRing, s: Elem) -> Subalgebra {
        let mut elems: Vec<Elem> = ring.elements().map(|r| ring.mul(s, r)).collect();
        elems.sort_unstable();
        elems.dedup();
        Self::from_carrier(ring, elems)
    }

    pub fn full(ring: &FiniteRing) -> Subalgebra {
        Self::from_carrier(ring, ring.elements().collect())
    }

    pub fn zero_ideal(ring: &FiniteRing) -> Subalgebra {
        Self::from_carrier(ring, vec![0])
    }

    fn from_carrier(ring: &FiniteRing, elems: Vec<Elem>) -> Subalgebra {
        let mut pos = FxHashMap::default();
        for (i, &a) in elems.iter().enumerate() {
            pos.insert(a, i as u32);
        }
        let mut sub = Subalgebra {
            ring: ring.clone(),
            elems,
            pos,
            unital_over_parent: false,
        };
        sub.unital_over_parent = sub.compute_unital();
        sub
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.pos.contains_key(&a)
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Closure under add, neg, mul, and the parent action.
    pub fn is_ideal(&self) -> bool {
        for &a in &self.elems {
            if !self.contains(self.ring.neg(a)) {
                return false;
            }
            for &b in &self.elems {
                if !self.contains(self.ring.add(a, b)) {
                    return false;
                }
            }
            for r in self.ring.elements() {
                if !self.contains(self.ring.mul(a, r)) {
                    return false;
                }
            }
        }
        true
    }

    /// Does the parent action span the carrier additively?
    fn compute_unital(&self) -> bool {
        let mut products = Vec::new();
        for &a in &self.elems {
            for r in self.ring.elements() {
                products.push(self.ring.mul(a, r));
            }
        }
        let span = additive_span(&self.ring, &products);
        span.len() == self.elems.len()
    }
}

/// Additive subgroup generated by the given elements.
pub fn additive_span(ring: &FiniteRing, gens: &[Elem]) -> Vec<Elem> {
    let mut set = vec![false; ring.size() as usize];
    set[0] = true;
    for &g in gens {
        set[g as usize] = true;
    }
    let mut changed = true;
    while changed {
        changed = false;
        let members: Vec<Elem> = (0..ring.size()).filter(|&x| set[x as usize]).collect();
        for &a in &members {
            for &b in &members {
                let s = ring.add(a, b);
                if !set[s as usize] {
                    set[s as usize] = true;
                    changed = true;
                }
            }
            let n = ring.neg(a);
            if !set[n as usize] {
                set[n as usize] = true;
                changed = true;
            }
        }
    }
    (0..ring.size()).filter(|&x| set[x as usize]).collect()
}

/// Like [`additive_span`] but also returns, for each reached element, one
/// decomposition as a sequence of generators (indices into `gens`).
pub fn additive_span_with_witness(
    ring: &FiniteRing,
    gens: &[Elem],
) -> FxHashMap<Elem, Vec<usize>> {
    let mut reach: FxHashMap<Elem, Vec<usize>> = FxHashMap::default();
    reach.insert(0, Vec::new());
    let mut frontier = vec![0];
    while let Some(a) = frontier.pop() {
        let path = reach[&a].clone();
        for (gi, &g) in gens.iter().enumerate() {
            let s = ring.add(a, g);
            if !reach.contains_key(&s) {
                let mut p = path.clone();
                p.push(gi);
                reach.insert(s, p);
                frontier.push(s);
            }
        }
    }
    reach
}

// ---------------------------------------------------------------------------
// Homotopes
// ---------------------------------------------------------------------------

/// The homotope of a subalgebra by a twist `s`: same additive group, product
/// `a . b = a*b*s`.
#[derive(Clone, Debug)]
pub struct HomotopeRing {
    pub base: Subalgebra,
    pub twist: Elem,
}

impl HomotopeRing {
    pub fn new(base: Subalgebra, twist: Elem) -> HomotopeRing {
        HomotopeRing { base, twist }
    }

    pub fn product(&self, a: Elem, b: Elem) -> Elem {
        let r = &self.base.ring;
        r.mul(r.mul(a, b), self.twist)
    }

    /// Ring axioms except the unit, exhaustively.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let r = &self.base.ring;
        for &a in &self.base.elems {
            for &b in &self.base.elems {
                if !self.base.contains(self.product(a, b)) {
                    return Err(format!("homotope not closed at ({},{})", r.render(a), r.render(b)));
                }
                if self.product(a, b) != self.product(b, a) {
                    return Err(format!("homotope not commutative at ({},{})", r.render(a), r.render(b)));
                }
                for &c in &self.base.elems {
                    if self.product(self.product(a, b), c) != self.product(a, self.product(b, c)) {
                        return Err("homotope not associative".into());
                    }
                    let lhs = self.product(a, r.add(b, c));
                    let rhs = r.add(self.product(a, b), self.product(a, c));
                    if lhs != rhs {
                        return Err("homotope not distributive".into());
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Idempotent powers, localization
// ---------------------------------------------------------------------------

/// The unique idempotent in the multiplicative sequence `s, s^2, s^3, ...`
/// together with the minimal exponent `n` such that `s^n` equals it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentPower {
    pub e: Elem,
    pub n: u32,
}

pub fn idempotent_power(ring: &FiniteRing, s: Elem) -> IdempotentPower {
    let mut seen: FxHashMap<Elem, u32> = FxHashMap::default();
    let mut x = s;
    let mut k = 1u32;
    loop {
        if let Some(&first) = seen.get(&x) {
            // Tail `first`, cycle length `k - first`; the idempotent power is
            // the unique multiple of the cycle length inside the cycle.
            let cycle = k - first;
            let mut n = first;
            while n % cycle != 0 {
                n += 1;
            }
            return IdempotentPower { e: ring.pow(s, n), n };
        }
        seen.insert(x, k);
        x = ring.mul(x, s);
        k += 1;
    }
}

/// The localization of `R` at the multiplicative set of powers of `s`,
/// realised inside `R` as the carrier `eR` with unit `e = s^n` idempotent.
#[derive(Clone, Debug)]
pub struct Localization {
    pub ring: FiniteRing,
    pub s: Elem,
    pub idem: IdempotentPower,
    /// Sorted carrier of `eR`.
    pub carrier: Vec<Elem>,
}

pub fn localize(ring: &FiniteRing, s: Elem) -> Localization {
    let idem = idempotent_power(ring, s);
    let mut carrier: Vec<Elem> = ring.elements().map(|r| ring.mul(idem.e, r)).collect();
    carrier.sort_unstable();
    carrier.dedup();
    Localization { ring: ring.clone(), s, idem, carrier }
}

impl Localization {
    /// The canonical map `R -> R_s`, `r -> e r`.
    pub fn map(&self, r: Elem) -> Elem {
        self.ring.mul(self.idem.e, r)
    }

    /// The image of `s` acts invertibly on the carrier: returns its inverse
    /// with respect to the unit `e`, or `None` if the property fails.
    pub fn image_inverse_of_s(&self) -> Option<Elem> {
        let es = self.map(self.s);
        self.carrier
            .iter()
            .copied()
            .find(|&t| self.ring.mul(es, t) == self.idem.e)
    }
}

// ---------------------------------------------------------------------------
// Colocalization towers
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TowerKind {
    /// Levels `A^(s^n)` with connecting maps level `n+1 -> n`, `a -> a s`.
    Colocalization,
    /// Formal localization direct system: the same index maps read as the
    /// injections `a / s^n -> (a s) / s^(n+1)`.
    LocalizationSystem,
}

/// A tower of homotope levels over a fixed additive carrier with the
/// multiply-by-`s` connecting maps.
#[derive(Clone, Debug)]
pub struct Tower {
    pub kind: TowerKind,
    pub sub: Subalgebra,
    pub s: Elem,
    pub depth: u32,
    /// Connecting map as an index array into `sub.elems` positions.
    pub step: Vec<u32>,
    /// Minimal `n` with `s^(n+1) A = s^n A` as sets.
    pub stabilization: u32,
    /// Sorted carrier of the stable part `s^n* A`.
    pub stable: Vec<Elem>,
    /// Set when `depth` is smaller than the stabilization index.
    pub insufficient_depth: bool,
}

pub fn colocalization_tower(sub: &Subalgebra, s: Elem, depth: u32) -> Tower {
    build_tower(TowerKind::Colocalization, sub, s, depth)
}

pub fn localization_system(sub: &Subalgebra, s: Elem, depth: u32) -> Tower {
    build_tower(TowerKind::LocalizationSystem, sub, s, depth)
}

fn build_tower(kind: TowerKind, sub: &Subalgebra, s: Elem, depth: u32) -> Tower {
    let ring = &sub.ring;
    let step: Vec<u32> = sub
        .elems
        .iter()
        .map(|&a| sub.pos[&ring.mul(a, s)])
        .collect();
    // Image chain s^n A until it stops shrinking.
    let mut current: Vec<Elem> = sub.elems.clone();
    let mut stabilization = 0u32;
    loop {
        let mut next: Vec<Elem> = current.iter().map(|&a| ring.mul(a, s)).collect();
        next.sort_unstable();
        next.dedup();
        if next == current {
            break;
        }
        current = next;
        stabilization += 1;
    }
    Tower {
        kind,
        sub: sub.clone(),
        s,
        depth,
        step,
        stabilization,
        stable: current,
        insufficient_depth: depth < stabilization,
    }
}

impl Tower {
    /// Multiplication by `s` is a bijection of the stable part.
    pub fn stable_part_bijective(&self) -> bool {
        let ring = &self.sub.ring;
        let mut image: Vec<Elem> = self.stable.iter().map(|&a| ring.mul(a, self.s)).collect();
        image.sort_unstable();
        image.dedup();
        image == self.stable
    }

    /// The kernel of any tower level mapped to the localization consists of
    /// the elements killed by the idempotent power `e` of `s`; all of them
    /// must already die after `stabilization` connecting steps. Returns a
    /// witness element on failure.
    pub fn noetherian_shadow(&self) -> std::result::Result<(), Elem> {
        let ring = &self.sub.ring;
        let e = idempotent_power(ring, self.s).e;
        let s_pow = ring.pow(self.s, self.stabilization);
        for &a in &self.sub.elems {
            if ring.mul(e, a) == ring.zero() && ring.mul(s_pow, a) != ring.zero() {
                return Err(a);
            }
        }
        Ok(())
    }

    /// Direct limit of the localization system: the stable part, with the
    /// canonical level map `a / s^n -> (es)^-n * e a` landing in it.
    pub fn direct_limit(&self) -> Vec<Elem> {
        self.stable.clone()
    }
}

// ---------------------------------------------------------------------------
// Power idempotence, cover sums
// ---------------------------------------------------------------------------

/// Report for the additive-span property `A = <x * y^k>`.
#[derive(Clone, Debug, Serialize)]
pub struct PowerIdempotentReport {
    pub pass: bool,
    /// First failing power, with an element outside the span.
    pub failure: Option<(u32, String)>,
}

/// Checks that for every `k <= kmax` the products `x * y^k` (power taken in
/// the twisted product when `twist` is set) span the carrier additively.
pub fn check_power_idempotent(
    ring: &FiniteRing,
    carrier: &[Elem],
    twist: Option<Elem>,
    kmax: u32,
) -> PowerIdempotentReport {
    let prod = |a: Elem, b: Elem| -> Elem {
        let p = ring.mul(a, b);
        match twist {
            Some(s) => ring.mul(p, s),
            None => p,
        }
    };
    let member: std::collections::BTreeSet<Elem> = carrier.iter().copied().collect();
    for k in 1..=kmax {
        let mut gens = Vec::new();
        for &y in carrier {
            let mut p = y;
            for _ in 1..k {
                p = prod(p, y);
            }
            for &x in carrier {
                gens.push(prod(x, p));
            }
        }
        let span = additive_span(ring, &gens);
        let span_set: std::collections::BTreeSet<Elem> = span.into_iter().collect();
        if !span_set.is_superset(&member) {
            let missing = member.iter().find(|m| !span_set.contains(m)).unwrap();
            return PowerIdempotentReport {
                pass: false,
                failure: Some((k, ring.render(*missing))),
            };
        }
    }
    PowerIdempotentReport { pass: true, failure: None }
}

/// Join of two idempotents: `x + y - xy`.
pub fn idempotent_join(ring: &FiniteRing, x: Elem, y: Elem) -> Elem {
    ring.sub(ring.add(x, y), ring.mul(x, y))
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub e: Elem,
    pub part_idempotents: Vec<Elem>,
    pub pass: bool,
    pub witness: Option<String>,
}

/// For `s` and parts `s_1..s_N`: requires `e_i e = e_i` for all `i` and
/// `e_1 v ... v e_N = e`; then checks `e A = sum e_i A` additively.
pub fn check_cover_sum(
    sub: &Subalgebra,
    s: Elem,
    parts: &[Elem],
) -> Result<CoverReport> {
    let ring = &sub.ring;
    let e = idempotent_power(ring, s).e;
    let eis: Vec<Elem> = parts.iter().map(|&p| idempotent_power(ring, p).e).collect();
    for (&p, &ei) in parts.iter().zip(&eis) {
        if ring.mul(ei, e) != ei {
            return Err(Error::Domain(format!(
                "not a cover: idempotent of {} does not divide the idempotent of {}",
                ring.render(p),
                ring.render(s)
            )));
        }
    }
    let mut join = ring.zero();
    for &ei in &eis {
        join = idempotent_join(ring, join, ei);
    }
    if join != e {
        return Err(Error::Domain(format!(
            "not a cover: join of part idempotents is {} but e = {}",
            ring.render(join),
            ring.render(e)
        )));
    }
    // e A must equal the additive span of the e_i A.
    let target: std::collections::BTreeSet<Elem> =
        sub.elems.iter().map(|&a| ring.mul(e, a)).collect();
    let mut gens = Vec::new();
    for &ei in &eis {
        for &a in &sub.elems {
            gens.push(ring.mul(ei, a));
        }
    }
    let span: std::collections::BTreeSet<Elem> = additive_span(ring, &gens).into_iter().collect();
    let pass = span == target || target.is_subset(&span);
    let witness = if pass {
        None
    } else {
        target
            .iter()
            .find(|t| !span.contains(t))
            .map(|&t| ring.render(t))
    };
    Ok(CoverReport { e, part_idempotents: eis, pass, witness })
}

// ---------------------------------------------------------------------------
// Crossed modules
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct CrossedModuleReport {
    pub pass: bool,
    pub witnesses: Vec<String>,
}

/// Checks the crossed-module axioms for `delta: A -> R` given as a table
/// over the subalgebra carrier: additivity, `delta(a x) = a delta(x)`
/// (for `a` in `R`, `x` in `A`), and `x y = delta(x) y` for `x, y` in `A`.
pub fn crossed_module_check(sub: &Subalgebra, delta: &[Elem]) -> CrossedModuleReport {
    let ring = &sub.ring;
    let d = |x: Elem| -> Elem { delta[sub.pos[&x] as usize] };
    let mut witnesses = Vec::new();
    for (i, &x) in sub.elems.iter().enumerate() {
        for &y in &sub.elems[i..] {
            let sum = ring.add(x, y);
            if ring.add(d(x), d(y)) != d(sum) {
                witnesses.push(format!(
                    "delta not additive at ({}, {})",
                    ring.render(x),
                    ring.render(y)
                ));
            }
            if ring.mul(x, y) != ring.mul(d(x), y) {
                witnesses.push(format!(
                    "x y != delta(x) y at ({}, {})",
                    ring.render(x),
                    ring.render(y)
                ));
            }
            if ring.mul(y, x) != ring.mul(d(y), x) {
                witnesses.push(format!(
                    "x y != delta(x) y at ({}, {})",
                    ring.render(y),
                    ring.render(x)
                ));
            }
        }
        for a in ring.elements() {
            let ax = ring.mul(a, x);
            if !sub.contains(ax) {
                witnesses.push(format!("carrier not stable under {}", ring.render(a)));
                continue;
            }
            if d(ax) != ring.mul(a, d(x)) {
                witnesses.push(format!(
                    "delta({} * {}) != {} * delta({})",
                    ring.render(a),
                    ring.render(x),
                    ring.render(a),
                    ring.render(x)
                ));
            }
        }
    }
    witnesses.truncate(8);
    CrossedModuleReport { pass: witnesses.is_empty(), witnesses }
}

// ---------------------------------------------------------------------------
// Homomorphisms and isomorphism search
// ---------------------------------------------------------------------------

/// A unital ring homomorphism given as an element table.
#[derive(Clone, Debug)]
pub struct RingHom {
    pub source: FiniteRing,
    pub target: FiniteRing,
    pub map: Vec<Elem>,
}

impl RingHom {
    pub fn new(source: &FiniteRing, target: &FiniteRing, map: Vec<Elem>) -> Result<RingHom> {
        let h = RingHom { source: source.clone(), target: target.clone(), map };
        h.verify()?;
        Ok(h)
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.map[a as usize]
    }

    pub fn verify(&self) -> Result<()> {
        if self.map.len() != self.source.size() as usize {
            return Err(Error::Domain("hom table has wrong length".into()));
        }
        if self.apply(self.source.one()) != self.target.one() {
            return Err(Error::Domain("hom does not preserve 1".into()));
        }
        for a in self.source.elements() {
            for b in self.source.elements() {
                if self.apply(self.source.add(a, b))
                    != self.target.add(self.apply(a), self.apply(b))
                {
                    return Err(Error::Domain(format!("hom not additive at ({a},{b})")));
                }
                if self.apply(self.source.mul(a, b))
                    != self.target.mul(self.apply(a), self.apply(b))
                {
                    return Err(Error::Domain(format!("hom not multiplicative at ({a},{b})")));
                }
            }
        }
        Ok(())
    }

    /// The canonical reduction `Z/n -> Z/m` for `m | n`.
    pub fn modular_reduction(n: u32, m: u32) -> Result<RingHom> {
        if m == 0 || n % m != 0 {
            return Err(Error::Domain(format!("no reduction Z/{n} -> Z/{m}")));
        }
        let source = FiniteRing::modular(n)?;
        let target = FiniteRing::modular(m)?;
        let map = (0..n).map(|a| a % m).collect();
        RingHom::new(&source, &target, map)
    }
}

/// A small ring-generating set: elements whose closure under `+`, `-`, `*`
/// together with `0, 1` is the whole ring.
fn ring_generators(ring: &FiniteRing) -> Vec<Elem> {
    let mut gens = Vec::new();
    loop {
        let mut base = vec![ring.zero(), ring.one()];
        base.extend_from_slice(&gens);
        let closed = subring_closure(ring, &base);
        if closed.len() == ring.size() as usize {
            return gens;
        }
        let missing = ring
            .elements()
            .find(|e| !closed.contains(e))
            .expect("closure was not everything");
        gens.push(missing);
    }
}

fn subring_closure(ring: &FiniteRing, base: &[Elem]) -> std::collections::BTreeSet<Elem> {
    let mut set: std::collections::BTreeSet<Elem> = base.iter().copied().collect();
    loop {
        let members: Vec<Elem> = set.iter().copied().collect();
        let before = set.len();
        for &a in &members {
            set.insert(ring.neg(a));
            for &b in &members {
                set.insert(ring.add(a, b));
                set.insert(ring.mul(a, b));
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// All unital ring homomorphisms `source -> target`, found by exhaustive
/// assignment of a generating set and full verification.
pub fn all_ring_homs(source: &FiniteRing, target: &FiniteRing) -> Vec<RingHom> {
    let gens = ring_generators(source);
    let mut homs = Vec::new();
    let mut assignment = vec![0 as Elem; gens.len()];
    enumerate_homs(source, target, &gens, 0, &mut assignment, &mut homs);
    homs
}

fn enumerate_homs(
    source: &FiniteRing,
    target: &FiniteRing,
    gens: &[Elem],
    i: usize,
    assignment: &mut Vec<Elem>,
    out: &mut Vec<RingHom>,
) {
    if i == gens.len() {
        if let Some(map) = extend_hom(source, target, gens, assignment) {
            if let Ok(h) = RingHom::new(source, target, map) {
                out.push(h);
            }
        }
        return;
    }
    for img in target.elements() {
        assignment[i] = img;
        enumerate_homs(source, target, gens, i + 1, assignment, out);
    }
}

/// Tries to extend `gens -> assignment` to a full map by closing under the
/// ring operations; returns the table if consistent so far.
fn extend_hom(
    source: &FiniteRing,
    target: &FiniteRing,
    gens: &[Elem],
    assignment: &[Elem],
) -> Option<Vec<Elem>> {
    let n = source.size() as usize;
    let mut map: Vec<Option<Elem>> = vec![None; n];
    map[source.zero() as usize] = Some(target.zero());
    map[source.one() as usize] = Some(target.one());
    for (&g, &im) in gens.iter().zip(assignment) {
        if let Some(existing) = map[g as usize] {
            if existing != im {
                return None;
            }
        }
        map[g as usize] = Some(im);
    }
    loop {
        let mut progress = false;
        let defined: Vec<Elem> = (0..n as Elem).filter(|&a| map[a as usize].is_some()).collect();
        for &a in &defined {
            for &b in &defined {
                let (fa, fb) = (map[a as usize].unwrap(), map[b as usize].unwrap());
                for (sv, tv) in [
                    (source.add(a, b), target.add(fa, fb)),
                    (source.mul(a, b), target.mul(fa, fb)),
                ] {
                    match map[sv as usize] {
                        None => {
                            map[sv as usize] = Some(tv);
                            progress = true;
                        }
                        Some(x) if x != tv => return None,
                        _ => {}
                    }
                }
            }
            let na = source.neg(a);
            let tv = target.neg(map[a as usize].unwrap());
            match map[na as usize] {
                None => {
                    map[na as usize] = Some(tv);
                    progress = true;
                }
                Some(x) if x != tv => return None,
                _ => {}
            }
        }
        if !progress {
            break;
        }
    }
    map.into_iter().collect::<Option<Vec<_>>>()
}

/// Exhaustive isomorphism search between two finite rings.
pub fn find_isomorphism(a: &FiniteRing, b: &FiniteRing) -> Option<RingHom> {
    if a.size() != b.size() {
        return None;
    }
    all_ring_homs(a, b).into_iter().find(|h| {
        let mut seen = vec![false; b.size() as usize];
        for x in a.elements() {
            let y = h.apply(x);
            if seen[y as usize] {
                return false;
            }
            seen[y as usize] = true;
        }
        true
    })
}

/// Universal property shadow: every hom `R -> F` sending `s` to a unit kills
/// the complement of the idempotent `e` and therefore factors through
/// `r -> e r`. Verified exhaustively; returns the number of homs checked.
pub fn localization_universal_shadow(
    ring: &FiniteRing,
    s: Elem,
    field: &FiniteRing,
) -> std::result::Result<usize, String> {
    let loc = localize(ring, s);
    let mut checked = 0;
    for hom in all_ring_homs(ring, field) {
        if !field.is_unit(hom.apply(s)) {
            continue;
        }
        checked += 1;
        // e maps to an idempotent unit, hence to 1; the factorisation
        // psi(e r) := phi(r) is then forced and well-defined.
        if hom.apply(loc.idem.e) != field.one() {
            return Err(format!(
                "hom sends the idempotent {} to a non-unit",
                ring.render(loc.idem.e)
            ));
        }
        for r in ring.elements() {
            if hom.apply(loc.map(r)) != hom.apply(r) {
                return Err(format!("factorisation fails at {}", ring.render(r)));
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_ring_basics() {
        let r = make_ring("Z/6").unwrap();
        assert_eq!(r.size(), 6);
        assert_eq!(r.add(4, 5), 3);
        assert_eq!(r.mul(4, 5), 2);
        assert_eq!(r.neg(2), 4);
        assert_eq!(r.int(-1), 5);
        assert_eq!(r.int(13), 1);
    }

    #[test]
    fn quotient_field_f4() {
        let r = make_ring("Z/2[x]/(x^2+x+1)").unwrap();
        assert_eq!(r.size(), 4);
        // No zero divisors: every nonzero element is a unit.
        for a in 1..4 {
            assert!(r.is_unit(a), "element {a} should be a unit in F4");
            for b in 1..4 {
                assert_ne!(r.mul(a, b), 0);
            }
        }
        // x * (x+1) = x^2+x = 1.
        let x = 2; // digits (0,1)
        let x1 = 3; // digits (1,1)
        assert_eq!(r.mul(x, x1), r.one());
    }

    #[test]
    fn f8_and_f9_are_fields() {
        for desc in ["Z/2[x]/(x^3+x+1)", "Z/3[x]/(x^2+1)"] {
            let r = make_ring(desc).unwrap();
            for a in 1..r.size() {
                assert!(r.is_unit(a), "{desc}: {a} not a unit");
            }
        }
    }

    #[test]
    fn product_descriptor_and_isomorphism() {
        let p = make_ring("Z/2 x Z/3").unwrap();
        assert_eq!(p.size(), 6);
        let z6 = make_ring("Z/6").unwrap();
        let iso = find_isomorphism(&p, &z6).expect("Z/2 x Z/3 should be isomorphic to Z/6");
        iso.verify().unwrap();
        // And there is no isomorphism Z/4 -> Z/2 x Z/2.
        let z4 = make_ring("Z/4").unwrap();
        let klein = make_ring("Z/2 x Z/2").unwrap();
        assert!(find_isomorphism(&z4, &klein).is_none());
    }

    #[test]
    fn axioms_hold_up_to_512() {
        for desc in ["Z/12", "Z/16", "Z/4[x]/(x^2)", "Z/2 x Z/3 x Z/4", "Z/2[x]/(x^2+x+1)"] {
            make_ring(desc).unwrap().verify_axioms().unwrap();
        }
        // One larger carrier, spot-verified exhaustively.
        make_ring("Z/512").unwrap().verify_axioms().unwrap();
    }

    #[test]
    fn parse_errors() {
        assert!(make_ring("Z/2[x]/(2x^2+1)").is_err(), "non-monic modulus must be rejected");
        assert!(make_ring("Q").is_err());
        assert!(make_ring("Z/0").is_err());
        assert!(make_ring("Z/8192").is_err(), "carrier over the size cap must be rejected");
    }

    #[test]
    fn idempotent_powers() {
        let z6 = make_ring("Z/6").unwrap();
        assert_eq!(idempotent_power(&z6, 2), IdempotentPower { e: 4, n: 2 });
        let z8 = make_ring("Z/8").unwrap();
        assert_eq!(idempotent_power(&z8, 2), IdempotentPower { e: 0, n: 3 });
        assert_eq!(idempotent_power(&z8, 1), IdempotentPower { e: 1, n: 1 });
    }

    #[test]
    fn localization_of_z6_at_2() {
        let z6 = make_ring("Z/6").unwrap();
        let loc = localize(&z6, 2);
        assert_eq!(loc.carrier, vec![0, 2, 4]);
        assert!(loc.image_inverse_of_s().is_some());
        // e R with unit e = 4 is a field with 3 elements.
        let z3 = make_ring("Z/3").unwrap();
        // Build the abstract ring on the carrier through the bijection 0,4,2 -> 0,1,2.
        // Multiplication table check: (4*4)=4 acts as unit.
        assert_eq!(z6.mul(4, 4), 4);
        assert_eq!(z6.mul(2, 2), 4);
        // Map k -> 4k mod 6 identifies Z/3 with eR.
        for a in 0..3u32 {
            for b in 0..3u32 {
                let img = |x: Elem| z6.mul(4, z6.int(x as i64));
                assert_eq!(img(z3.mul(a, b)), z6.mul(img(a), img(b)));
                assert_eq!(img(z3.add(a, b)), z6.add(img(a), img(b)));
            }
        }
    }

    #[test]
    fn tower_stabilization() {
        let z8 = make_ring("Z/8").unwrap();
        let t = colocalization_tower(&Subalgebra::full(&z8), 2, 5);
        assert_eq!(t.stabilization, 3);
        assert_eq!(t.stable, vec![0]);
        assert!(!t.insufficient_depth);
        t.noetherian_shadow().unwrap();

        let z12 = make_ring("Z/12").unwrap();
        let t = colocalization_tower(&Subalgebra::full(&z12), 2, 4);
        assert_eq!(t.stable, vec![0, 4, 8]);
        assert!(t.stable_part_bijective());
        t.noetherian_shadow().unwrap();

        let z6 = make_ring("Z/6").unwrap();
        let t = colocalization_tower(&Subalgebra::full(&z6), 5, 2);
        assert_eq!(t.stabilization, 0, "s invertible: tower already stable");
        let t = colocalization_tower(&Subalgebra::full(&z6), 2, 0);
        assert!(t.insufficient_depth);
    }

    #[test]
    fn power_idempotent_cases() {
        let z12 = make_ring("Z/12").unwrap();
        let a = Subalgebra::principal(&z12, 4);
        let rep = check_power_idempotent(&z12, &a.elems, None, 3);
        assert!(rep.pass, "4Z/12 is power idempotent: {:?}", rep.failure);

        let z4 = make_ring("Z/4").unwrap();
        let b = Subalgebra::principal(&z4, 2);
        let rep = check_power_idempotent(&z4, &b.elems, None, 2);
        assert!(!rep.pass);
        assert_eq!(rep.failure.as_ref().unwrap().0, 1, "fails already at k = 1");

        let f4 = make_ring("Z/2[x]/(x^2+x+1)").unwrap();
        let rep = check_power_idempotent(&f4, &Subalgebra::full(&f4).elems, None, 3);
        assert!(rep.pass);
    }

    #[test]
    fn cover_sums() {
        let z6 = make_ring("Z/6").unwrap();
        let full = Subalgebra::full(&z6);
        let rep = check_cover_sum(&full, 1, &[2, 3]).unwrap();
        assert_eq!(rep.e, 1);
        assert_eq!(rep.part_idempotents, vec![4, 3]);
        assert!(rep.pass);
        // A single part misses the cover precondition.
        assert!(check_cover_sum(&full, 1, &[2]).is_err());
        // Nilpotent s: e = 0 and the singleton cover by s itself passes.
        let z8 = make_ring("Z/8").unwrap();
        let full8 = Subalgebra::full(&z8);
        let rep = check_cover_sum(&full8, 2, &[2]).unwrap();
        assert!(rep.pass);
    }

    #[test]
    fn semidirect_arithmetic() {
        let z4 = make_ring("Z/4").unwrap();
        let a = Subalgebra::principal(&z4, 2);
        let sd = FiniteRing::semidirect(&a).unwrap();
        assert_eq!(sd.size(), 8);
        // (2 : 1) * (2 : 3) = (2*2 + 2*3 + 2*1 : 1*3) = (0 : 3).
        let x = sd.sd_pair(2, 1).unwrap();
        let y = sd.sd_pair(2, 3).unwrap();
        assert_eq!(sd.sd_parts(sd.mul(x, y)).unwrap(), (0, 3));
        sd.verify_axioms().unwrap();
        // Unit is (0 : 1) and the projection is a ring hom.
        assert_eq!(sd.sd_parts(sd.one()).unwrap(), (0, 1));
        for p in sd.elements() {
            for q in sd.elements() {
                assert_eq!(
                    sd.sd_project(sd.mul(p, q)).unwrap(),
                    z4.mul(sd.sd_project(p).unwrap(), sd.sd_project(q).unwrap())
                );
            }
        }
    }

    #[test]
    fn semidirect_with_full_ideal_splits() {
        // A = R gives A x| R isomorphic to R x R via (a,b) -> (a+b, b).
        let z6 = make_ring("Z/6").unwrap();
        let sd = FiniteRing::semidirect(&Subalgebra::full(&z6)).unwrap();
        let rr = make_ring("Z/6 x Z/6").unwrap();
        assert!(find_isomorphism(&sd, &rr).is_some());
    }

    #[test]
    fn crossed_modules() {
        let z6 = make_ring("Z/6").unwrap();
        let a = Subalgebra::principal(&z6, 3);
        // Inclusion is always a crossed module.
        let delta: Vec<Elem> = a.elems.clone();
        assert!(crossed_module_check(&a, &delta).pass);
        // Zero map fails when A has a nonzero product (3 * 3 = 3 in Z/6).
        let zero: Vec<Elem> = vec![0; a.len()];
        let rep = crossed_module_check(&a, &zero);
        assert!(!rep.pass);
        assert!(!rep.witnesses.is_empty());
        // Zero map passes when A squares to zero.
        let z4 = make_ring("Z/4").unwrap();
        let b = Subalgebra::principal(&z4, 2);
        assert!(crossed_module_check(&b, &vec![0; b.len()]).pass);
    }

    #[test]
    fn homotope_laws() {
        let z8 = make_ring("Z/8").unwrap();
        let h = HomotopeRing::new(Subalgebra::full(&z8), 2);
        h.verify().unwrap();
        assert_eq!(h.product(3, 5), z8.mul(z8.mul(3, 5), 2));
    }

    #[test]
    fn subalgebra_structure() {
        let z6 = make_ring("Z/6").unwrap();
        let a = Subalgebra::principal(&z6, 2);
        assert_eq!(a.elems, vec![0, 2, 4]);
        assert!(a.is_ideal());
        assert!(a.unital_over_parent);
        let i = Subalgebra::ideal(&z6, &[3]);
        assert_eq!(i.elems, vec![0, 3]);
    }

    #[test]
    fn universal_property_shadow() {
        let z6 = make_ring("Z/6").unwrap();
        let f2 = make_ring("Z/2").unwrap();
        let f3 = make_ring("Z/3").unwrap();
        // s = 2: homs to F3 sending 2 to a unit factor through eR.
        assert!(localization_universal_shadow(&z6, 2, &f3).unwrap() > 0);
        // s = 2 is not invertible in the F2 direction: nothing to check there,
        // which also passes (vacuously).
        assert_eq!(localization_universal_shadow(&z6, 2, &f2).unwrap(), 0);
    }

    #[test]
    fn hom_enumeration_counts() {
        let z6 = make_ring("Z/6").unwrap();
        let f2 = make_ring("Z/2").unwrap();
        assert_eq!(all_ring_homs(&z6, &f2).len(), 1);
        let z4 = make_ring("Z/4").unwrap();
        assert_eq!(all_ring_homs(&z4, &f2).len(), 1);
        let f3 = make_ring("Z/3").unwrap();
        assert_eq!(all_ring_homs(&z4, &f3).len(), 0);
    }
}
