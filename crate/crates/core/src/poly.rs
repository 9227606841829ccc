//! Graded-commutative polynomials in formal Chern classes.
//!
//! A variable `c_k(e_i)` has cohomological degree `2k`; `k` may be a
//! half-integer, in which case the variable is odd: it anticommutes with the
//! other odd variables and squares to zero. Variables are tagged with a
//! [`Side`] so the same type models a tensor product `A ⊗ B` of two such
//! algebras (left = first factor). Monomials are kept in canonical order
//! `(side, factor, index)` with the Koszul sign folded into the coefficient,
//! so equal elements are equal as data.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{fmt_q, Q};
use crate::ring::GradedAlgebra;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// `c_{index2/2}(e_factor)` on one side of a tensor product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub side: Side,
    pub factor: u32,
    /// Twice the Chern index; odd values are the half-integer classes.
    pub index2: u32,
}

impl Var {
    pub fn chern(side: Side, factor: u32, k: u32) -> Self {
        Var { side, factor, index2: 2 * k }
    }

    /// `c_{j + 1/2}`.
    pub fn odd_chern(side: Side, factor: u32, j: u32) -> Self {
        Var { side, factor, index2: 2 * j + 1 }
    }

    pub fn degree(&self) -> u32 {
        self.index2
    }

    pub fn is_odd(&self) -> bool {
        self.index2 % 2 == 1
    }

    pub fn index_label(&self) -> String {
        if self.is_odd() {
            format!("{}/2", self.index2)
        } else {
            format!("{}", self.index2 / 2)
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prime = if self.side == Side::Left { "'" } else { "" };
        write!(f, "c_{}(e{}{})", self.index_label(), self.factor, prime)
    }
}

/// Sorted `(variable, exponent)` list; odd variables have exponent 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.degree() * e).sum()
    }

    pub fn side_degree(&self, side: Side) -> u32 {
        self.0.iter().filter(|(v, _)| v.side == side).map(|(v, e)| v.degree() * e).sum()
    }

    /// Splits into the left and right parts; since left variables sort first
    /// this introduces no sign.
    pub fn split(&self) -> (Monomial, Monomial) {
        let (l, r): (Vec<_>, Vec<_>) = self.0.iter().partition(|(v, _)| v.side == Side::Left);
        (Monomial(l), Monomial(r))
    }

    /// `self · other` as `(sign, monomial)`, or `None` if an odd variable repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(i32, Monomial)> {
        let mut swaps = 0usize;
        for (y, _) in other.0.iter().filter(|(v, _)| v.is_odd()) {
            for (x, _) in self.0.iter().filter(|(v, _)| v.is_odd()) {
                if x == y {
                    return None;
                }
                if x > y {
                    swaps += 1;
                }
            }
        }
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            if j == other.0.len() || (i < self.0.len() && self.0[i].0 < other.0[j].0) {
                out.push(self.0[i]);
                i += 1;
            } else if i == self.0.len() || other.0[j].0 < self.0[i].0 {
                out.push(other.0[j]);
                j += 1;
            } else {
                out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                i += 1;
                j += 1;
            }
        }
        Some((if swaps.is_multiple_of(2) { 1 } else { -1 }, Monomial(out)))
    }

    pub fn render(&self, name: &dyn Fn(&Var) -> String) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|(v, e)| if *e == 1 { name(v) } else { format!("{}^{e}", name(v)) })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|v| v.to_string()))
    }
}

/// A polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), Q::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Non-integral coefficients, if any.
    pub fn non_integral(&self) -> Vec<(Monomial, Q)> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_integer())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect()
    }

    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn homogeneous_part(&self, degree: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Product, dropping monomials of degree above `cap`.
    pub fn mul_capped(&self, other: &Poly, cap: Option<u32>) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if cap.is_some_and(|c| da + mb.degree() > c) {
                    continue;
                }
                if let Some((sign, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if sign < 0 { -c } else { c });
                }
            }
        }
        out
    }

    pub fn truncate(&self, cap: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Ring homomorphism defined on variables; unmapped variables are kept.
    pub fn substitute(&self, ring: &PolyRing, image: &dyn Fn(&Var) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for (v, e) in &m.0 {
                let img = image(v).unwrap_or_else(|| Poly::var(*v));
                for _ in 0..*e {
                    acc = ring.mul(&acc, &img);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn render(&self, name: &dyn Fn(&Var) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = *c < Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body = m.render(name);
            if m.is_one() {
                s.push_str(&fmt_q(&abs));
            } else if abs.is_one() {
                s.push_str(&body);
            } else {
                s.push_str(&format!("{}*{body}", fmt_q(&abs)));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|v| v.to_string()))
    }
}

/// Polynomial ring with an optional cap on total degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PolyRing {
    pub cap: Option<u32>,
}

impl PolyRing {
    pub fn new(cap: Option<u32>) -> Self {
        PolyRing { cap }
    }

    pub fn capped(cap: u32) -> Self {
        PolyRing { cap: Some(cap) }
    }
}

impl GradedAlgebra for PolyRing {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        Poly::zero()
    }

    fn one(&self) -> Poly {
        Poly::one()
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b)
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul_capped(b, self.cap)
    }

    fn scale(&self, a: &Poly, c: &Q) -> Poly {
        a.scale(c)
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.is_zero()
    }
}
