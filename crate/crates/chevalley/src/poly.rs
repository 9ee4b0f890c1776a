//! Sparse exact polynomials in two variables over the integers, plus square
//! matrices over them.
//!
//! Commutator tables live in `Z[x,y]`: every coefficient that appears there
//! is tiny, but the bidegrees are not bounded uniformly across systems, so
//! nothing here truncates. A term `c x^i y^j` is stored at key `(i, j)` in a
//! sorted map; zero coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A polynomial in `Z[x, y]`, sparse over bidegrees.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), i64>,
}

impl Poly2 {
    pub fn zero() -> Poly2 {
        Poly2::default()
    }

    pub fn constant(c: i64) -> Poly2 {
        Poly2::monomial(c, 0, 0)
    }

    pub fn monomial(c: i64, i: u32, j: u32) -> Poly2 {
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert((i, j), c);
        }
        Poly2 { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> i64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &i64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree of the highest term, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        let mut acc = 0i64;
        for (&(i, j), &c) in &self.terms {
            let mut t = c;
            for _ in 0..i {
                t *= x;
            }
            for _ in 0..j {
                t *= y;
            }
            acc += t;
        }
        acc
    }

    fn insert(&mut self, key: (u32, u32), c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(key).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&key);
        }
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&k, &c) in &rhs.terms {
            out.insert(k, c);
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&k, &c) in &rhs.terms {
            out.insert(k, -c);
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&k, &c) in &self.terms {
            out.insert(k, -c);
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i1, j1), &c1) in &self.terms {
            for (&(i2, j2), &c2) in &rhs.terms {
                out.insert((i1 + i2, j1 + j2), c1.checked_mul(c2).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), &c) in self.terms.iter().rev() {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            let mut body = String::new();
            if mag != 1 || (i == 0 && j == 0) {
                body.push_str(&mag.to_string());
            }
            for (var, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => body.push_str(var),
                    _ => body.push_str(&format!("{var}^{e}")),
                }
            }
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// A square matrix over `Z[x, y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMat {
    pub n: usize,
    entries: Vec<Poly2>,
}

impl PolyMat {
    pub fn identity(n: usize) -> PolyMat {
        let mut m = PolyMat { n, entries: vec![Poly2::zero(); n * n] };
        for i in 0..n {
            m.entries[i * n + i] = Poly2::constant(1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> PolyMat {
        let n = rows.len();
        let mut m = PolyMat { n, entries: vec![Poly2::zero(); n * n] };
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (c, &v) in row.iter().enumerate() {
                m.entries[r * n + c] = Poly2::constant(v);
            }
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> &Poly2 {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly2) {
        self.entries[r * self.n + c] = p;
    }

    pub fn is_identity(&self) -> bool {
        self == &PolyMat::identity(self.n)
    }

    pub fn mul(&self, rhs: &PolyMat) -> PolyMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = PolyMat { n, entries: vec![Poly2::zero(); n * n] };
        for r in 0..n {
            for k in 0..n {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    let slot = &mut out.entries[r * n + c];
                    *slot = &*slot + &prod;
                }
            }
        }
        out
    }

    /// The integer matrix of coefficients of `x^i y^j` across all entries.
    pub fn bidegree_slice(&self, i: u32, j: u32) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.at(r, c).coeff(i, j)).collect())
            .collect()
    }

    /// Entrywise check that every entry is a single monomial (or zero).
    pub fn entries_single_bidegree(&self) -> bool {
        self.entries.iter().all(|p| p.num_terms() <= 1)
    }

    pub fn entries(&self) -> impl Iterator<Item = &Poly2> {
        self.entries.iter()
    }

    /// Evaluates every entry at integers `(x, y)`.
    pub fn eval(&self, x: i64, y: i64) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.at(r, c).eval(x, y)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = Poly2::monomial(2, 1, 0); // 2x
        let q = Poly2::monomial(3, 0, 1); // 3y
        let s = &p + &q;
        assert_eq!(s.coeff(1, 0), 2);
        assert_eq!(s.coeff(0, 1), 3);
        let prod = &s * &s; // 4x^2 + 12xy + 9y^2
        assert_eq!(prod.coeff(2, 0), 4);
        assert_eq!(prod.coeff(1, 1), 12);
        assert_eq!(prod.coeff(0, 2), 9);
        assert_eq!(prod.eval(1, 1), 25);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn display() {
        let p = &Poly2::monomial(-1, 3, 2) + &Poly2::monomial(2, 1, 1);
        assert_eq!(p.to_string(), "-x^3y^2+2xy");
        assert_eq!(Poly2::zero().to_string(), "0");
        assert_eq!(Poly2::constant(-7).to_string(), "-7");
    }

    #[test]
    fn matrix_products() {
        // Unipotent upper and lower 2x2 blocks: [1 x; 0 1][1 0; y 1].
        let mut a = PolyMat::identity(2);
        a.set(0, 1, Poly2::monomial(1, 1, 0));
        let mut b = PolyMat::identity(2);
        b.set(1, 0, Poly2::monomial(1, 0, 1));
        let ab = a.mul(&b);
        assert_eq!(ab.at(0, 0).coeff(1, 1), 1, "top-left picks up xy");
        assert_eq!(ab.at(0, 1).coeff(1, 0), 1);
        assert_eq!(ab.at(1, 0).coeff(0, 1), 1);
        let slice = ab.bidegree_slice(1, 1);
        assert_eq!(slice, vec![vec![1, 0], vec![0, 0]]);
        assert!(!ab.is_identity());
        assert!(PolyMat::identity(3).is_identity());
    }
}
