//! Formal Chern variables of Künneth factors and their bigraded products.
//!
//! A [`FormalContext`] fixes the factors `e_1..e_n` (each even with a rank,
//! or odd) and a truncation degree `2m`. The left side of the tensor product
//! carries the factors `e_i'` of the dual class, the right side the `e_i`;
//! both are indexed from 1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{fmt_q, Q, Z};
use crate::chern::{ch_from_chern, odd_ch, EvenChern, OddChern};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, PolyRing, Side, Var};
use crate::ring::GradedAlgebra;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSpec {
    pub parity: Parity,
    pub rank: Option<Z>,
}

impl FactorSpec {
    pub fn even(rank: i64) -> Self {
        FactorSpec { parity: Parity::Even, rank: Some(Z::from(rank)) }
    }

    pub fn odd() -> Self {
        FactorSpec { parity: Parity::Odd, rank: None }
    }
}

impl fmt::Display for FactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.parity, &self.rank) {
            (Parity::Even, Some(r)) => write!(f, "even:{r}"),
            (Parity::Even, None) => write!(f, "even"),
            (Parity::Odd, _) => write!(f, "odd"),
        }
    }
}

impl FromStr for FactorSpec {
    type Err = Error;

    /// `even:<rank>` or `odd`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, rank) = match s.split_once(':') {
            Some((k, r)) => (k.trim(), Some(r.trim())),
            None => (s, None),
        };
        let rank = rank
            .map(|r| r.parse::<Z>().map_err(|_| Error::Parse(format!("bad rank '{r}'"))))
            .transpose()?;
        match kind {
            "even" => Ok(FactorSpec { parity: Parity::Even, rank }),
            "odd" => Ok(FactorSpec { parity: Parity::Odd, rank }),
            _ => Err(Error::Parse(format!("factor must be 'even:<rank>' or 'odd', got '{s}'"))),
        }
    }
}

/// Comma-separated list of factor specs, e.g. `even:1,odd,even:2`.
pub fn parse_factors(s: &str) -> Result<Vec<FactorSpec>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    factors: Vec<FactorSpec>,
    m: u32,
}

impl FormalContext {
    pub fn new(factors: Vec<FactorSpec>, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("truncation m must be at least 1"));
        }
        for (i, f) in factors.iter().enumerate() {
            match (f.parity, &f.rank) {
                (Parity::Odd, Some(_)) => {
                    return Err(Error::validation(format!("odd factor e{} cannot carry a rank", i + 1)))
                }
                (Parity::Even, None) => {
                    return Err(Error::validation(format!("even factor e{} needs a rank", i + 1)))
                }
                _ => {}
            }
        }
        Ok(FormalContext { factors, m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn cap(&self) -> u32 {
        2 * self.m
    }

    pub fn ring(&self) -> PolyRing {
        PolyRing::capped(self.cap())
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factor `i`, indexed from 1.
    pub fn factor(&self, i: u32) -> Result<&FactorSpec> {
        i.checked_sub(1)
            .and_then(|k| self.factors.get(k as usize))
            .ok_or_else(|| Error::validation(format!("no factor e{i}")))
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn rank(&self, i: u32) -> Result<Z> {
        Ok(self.factor(i)?.rank.clone().unwrap_or_default())
    }

    /// Variables of factor `i` on `side` with degree ≤ `2m`.
    pub fn factor_variables(&self, side: Side, i: u32) -> Result<Vec<Var>> {
        Ok(match self.factor(i)?.parity {
            Parity::Even => (1..=self.m).map(|k| Var::chern(side, i, k)).collect(),
            Parity::Odd => (0..self.m).map(|j| Var::odd_chern(side, i, j)).collect(),
        })
    }

    pub fn variables(&self, side: Side) -> Vec<Var> {
        (1..=self.factors.len() as u32)
            .flat_map(|i| self.factor_variables(side, i).expect("index in range"))
            .collect()
    }

    pub fn even_chern(&self, side: Side, i: u32) -> Result<EvenChern<Poly>> {
        let f = self.factor(i)?;
        if f.parity != Parity::Even {
            return Err(Error::Parity(format!("factor e{i} is odd")));
        }
        Ok(EvenChern {
            rank: f.rank.clone().unwrap_or_default(),
            c: (1..=self.m).map(|k| Poly::var(Var::chern(side, i, k))).collect(),
        })
    }

    pub fn odd_chern(&self, side: Side, i: u32) -> Result<OddChern<Poly>> {
        let f = self.factor(i)?;
        if f.parity != Parity::Odd {
            return Err(Error::Parity(format!("factor e{i} is even")));
        }
        Ok(OddChern { c: (0..self.m).map(|j| Poly::var(Var::odd_chern(side, i, j))).collect() })
    }

    /// `ch_{index2/2}(e_i)`; the index must have the factor's parity.
    pub fn formal_ch(&self, side: Side, i: u32, index2: u32) -> Result<Poly> {
        let ring = self.ring();
        match self.factor(i)?.parity {
            Parity::Even if index2.is_multiple_of(2) => {
                Ok(ch_from_chern(&ring, &self.even_chern(side, i)?, index2 / 2))
            }
            Parity::Odd if !index2.is_multiple_of(2) => odd_ch(&ring, &self.odd_chern(side, i)?, index2.div_ceil(2)),
            _ => Err(Error::Parity(format!(
                "ch_{index2}/2 does not match the parity of e{i}"
            ))),
        }
    }

    /// `[ch_0, ch_{1/2}, ch_1, ...]` of factor `i` up to degree `2m`, indexed
    /// by twice the Chern index; entries of the wrong parity are zero.
    pub fn ch_table(&self, side: Side, i: u32) -> Result<Vec<Poly>> {
        let parity = self.factor(i)?.parity;
        (0..=self.cap())
            .map(|d| {
                if (d % 2 == 1) == (parity == Parity::Odd) {
                    self.formal_ch(side, i, d)
                } else {
                    Ok(Poly::zero())
                }
            })
            .collect()
    }

    pub fn multiply(&self, a: &BigradedClass, b: &BigradedClass) -> BigradedClass {
        BigradedClass(self.ring().mul(&a.0, &b.0))
    }
}

/// Display name of a formal variable: `c_k(e_i')` on the left, `c_k(e_i)` on
/// the right.
pub fn var_name(v: &Var) -> String {
    let prime = if v.side == Side::Left { "'" } else { "" };
    format!("c_{}(e{}{prime})", v.index_label(), v.factor)
}

/// An element of `A ⊗ B`, stored as a polynomial in left and right variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BigradedClass(pub Poly);

/// One term `coeff · left ⊗ right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigradedTerm {
    pub coeff: Q,
    pub left: Monomial,
    pub right: Monomial,
}

impl BigradedTerm {
    pub fn bidegree(&self) -> (u32, u32) {
        (self.left.degree(), self.right.degree())
    }
}

impl BigradedClass {
    pub fn zero() -> Self {
        BigradedClass(Poly::zero())
    }

    pub fn left(p: Poly) -> Self {
        BigradedClass(p)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    /// Terms in canonical order. Left variables sort before right ones, so a
    /// stored monomial is literally `left · right`.
    pub fn terms(&self) -> Vec<BigradedTerm> {
        self.0
            .terms()
            .map(|(m, c)| {
                let (left, right) = m.split();
                BigradedTerm { coeff: c.clone(), left, right }
            })
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.0.is_integral()
    }

    pub fn render(&self) -> String {
        self.0.render(&var_name)
    }

    /// `[{coeff, left, right, bidegree}]`.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .iter()
                .map(|t| {
                    let (a, b) = t.bidegree();
                    json!({
                        "coeff": fmt_q(&t.coeff),
                        "left": t.left.render(&var_name),
                        "right": t.right.render(&var_name),
                        "bidegree": [a, b],
                    })
                })
                .collect(),
        )
    }

    /// Groups terms by left monomial: `left -> Σ coeff · right`.
    pub fn by_left(&self) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for t in self.terms() {
            out.entry(t.left).or_default().add_term(t.right, t.coeff);
        }
        out
    }
}

impl fmt::Display for BigradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{q, qf};
    use proptest::prelude::*;

    #[test]
    fn variables_materialize() {
        let ctx = FormalContext::new(vec![FactorSpec::even(1), FactorSpec::even(2)], 2).unwrap();
        let names: Vec<String> = ctx.variables(Side::Right).iter().map(var_name).collect();
        assert_eq!(names, ["c_1(e1)", "c_2(e1)", "c_1(e2)", "c_2(e2)"]);

        let ctx = FormalContext::new(vec![FactorSpec::odd()], 2).unwrap();
        let vars = ctx.variables(Side::Right);
        assert_eq!(vars.iter().map(var_name).collect::<Vec<_>>(), ["c_1/2(e1)", "c_3/2(e1)"]);
        assert_eq!(vars.iter().map(Var::degree).collect::<Vec<_>>(), [1, 3]);
    }

    #[test]
    fn context_rejections() {
        assert!(FormalContext::new(vec![FactorSpec::even(1)], 0).is_err());
        let odd_ranked = FactorSpec { parity: Parity::Odd, rank: Some(Z::from(1)) };
        assert!(FormalContext::new(vec![odd_ranked], 1).is_err());
        let even_bare = FactorSpec { parity: Parity::Even, rank: None };
        assert!(FormalContext::new(vec![even_bare], 1).is_err());
    }

    #[test]
    fn factor_spec_parsing() {
        let f = parse_factors("even:1, odd,even:-2").unwrap();
        assert_eq!(f, vec![FactorSpec::even(1), FactorSpec::odd(), FactorSpec::even(-2)]);
        assert_eq!(f[2].to_string(), "even:-2");
        assert!(parse_factors("even:x").is_err());
        assert!(parse_factors("wobbly").is_err());
    }

    #[test]
    fn koszul_products() {
        let ctx = FormalContext::new(vec![FactorSpec::odd(), FactorSpec::odd()], 2).unwrap();
        let a = BigradedClass(Poly::var(Var::odd_chern(Side::Left, 1, 0)));
        let b = BigradedClass(Poly::var(Var::odd_chern(Side::Right, 2, 0)));
        assert!(ctx.multiply(&a, &a).is_zero());
        let ab = ctx.multiply(&a, &b);
        let ba = ctx.multiply(&b, &a);
        assert!(BigradedClass(ab.0.add(&ba.0)).is_zero());
        assert_eq!(ab.terms()[0].bidegree(), (1, 1));

        let ctx = FormalContext::new(vec![FactorSpec::even(1)], 1).unwrap();
        let c = BigradedClass(Poly::var(Var::chern(Side::Left, 1, 1)));
        assert!(ctx.multiply(&c, &c).is_zero());
    }

    #[test]
    fn formal_characters() {
        let ctx = FormalContext::new(vec![FactorSpec::even(3), FactorSpec::odd()], 3).unwrap();
        let c = |k| Poly::var(Var::chern(Side::Right, 1, k));
        assert_eq!(ctx.formal_ch(Side::Right, 1, 0).unwrap(), Poly::constant(q(3)));
        assert_eq!(ctx.formal_ch(Side::Right, 1, 2).unwrap(), c(1));
        let ring = ctx.ring();
        let want = ring.sub(&ring.mul(&c(1), &c(1)), &c(2).scale(&q(2))).scale(&qf(1, 2));
        assert_eq!(ctx.formal_ch(Side::Right, 1, 4).unwrap(), want);
        let odd = Poly::var(Var::odd_chern(Side::Right, 2, 1));
        assert_eq!(ctx.formal_ch(Side::Right, 2, 3).unwrap(), odd.scale(&q(-1)));
        assert!(ctx.formal_ch(Side::Right, 2, 2).is_err());
        assert!(ctx.formal_ch(Side::Right, 3, 2).is_err());
    }

    #[test]
    fn json_terms() {
        let p = Poly::var(Var::chern(Side::Left, 1, 1))
            .add(&Poly::var(Var::chern(Side::Right, 1, 1)).scale(&q(2)));
        let v = BigradedClass(p).to_json();
        assert_eq!(
            v,
            json!([
                {"coeff": "1", "left": "c_1(e1')", "right": "1", "bidegree": [2, 0]},
                {"coeff": "2", "left": "1", "right": "c_1(e1)", "bidegree": [0, 2]},
            ])
        );
    }

    fn arb_monomial() -> impl Strategy<Value = BigradedClass> {
        let var = (prop_oneof![Just(Side::Left), Just(Side::Right)], 1u32..3, 1u32..4)
            .prop_map(|(side, factor, index2)| Var { side, factor, index2 });
        (proptest::collection::vec(var, 0..3), -3i64..4).prop_map(|(vars, c)| {
            let ring = PolyRing::default();
            let p = vars.iter().fold(Poly::constant(q(c)), |acc, v| ring.mul(&acc, &Poly::var(*v)));
            BigradedClass(p)
        })
    }

    proptest! {
        #[test]
        fn bigraded_products_associate(a in arb_monomial(), b in arb_monomial(), c in arb_monomial()) {
            let ctx = FormalContext::new(vec![FactorSpec::odd(), FactorSpec::even(1)], 4).unwrap();
            let l = ctx.multiply(&ctx.multiply(&a, &b), &c);
            let r = ctx.multiply(&a, &ctx.multiply(&b, &c));
            prop_assert_eq!(l, r);
        }

        #[test]
        fn products_respect_the_cap(a in arb_monomial(), b in arb_monomial()) {
            let ctx = FormalContext::new(vec![FactorSpec::odd()], 2).unwrap();
            for t in ctx.multiply(&a, &b).terms() {
                let (l, r) = t.bidegree();
                prop_assert!(l + r <= ctx.cap());
            }
        }
    }
}
