//! The diagonal class on `M × M` in terms of formal Künneth factors, and
//! explicit decompositions of the diagonal of a rational surface.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{fmt_q, serde_z, to_i64, Q, Z};
use crate::chern::{ch_from_chern, chern_from_ch, splitting_oracle, twist_by_line};
use crate::cohomology::{BlowUp, SurfaceModel, SurfaceSpec};
use crate::error::{Error, Result};
use crate::formal::{var_name, BigradedClass, FactorSpec, FormalContext, Parity};
use crate::ktheory::{
    chi_gram, even_lattice_rank, euler_chi, gram_and_dual_basis, kcup, mukai_pair,
    standard_even_basis, EvenClass, KClass, KClassRecord, OddClass,
};
use crate::poly::{Monomial, Poly, PolyRing, Side, Var};
use crate::ring::GradedAlgebra;

/// Which bilinear form builds the Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `(x, y) = -χ(x^∨ ∪ y)`.
    Mukai,
    /// `(x, y) = -χ(x ∪ y)`, usable for odd classes as well.
    Plain,
}

impl std::str::FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mukai" => Ok(Pairing::Mukai),
            "plain" => Ok(Pairing::Plain),
            _ => Err(Error::Parse(format!("pairing must be 'mukai' or 'plain', got '{s}'"))),
        }
    }
}

pub fn pair(s: &SurfaceModel, pairing: Pairing, x: &KClass, y: &KClass) -> Result<Z> {
    match pairing {
        Pairing::Mukai => mukai_pair(s, x, y),
        Pairing::Plain => match (x, y) {
            (KClass::Even(_), KClass::Even(_)) | (KClass::Odd(_), KClass::Odd(_)) => {
                Ok(-euler_chi(s, &kcup(s, x, y)?)?)
            }
            _ => Ok(Z::zero()),
        },
    }
}

/// Basis of `K*(S)`: the standard even basis, then (if `b1 > 0`) odd classes
/// with `ch` running through the `H^1` and `H^3` bases.
pub fn full_basis(s: &SurfaceModel) -> Vec<KClass> {
    let mut out: Vec<KClass> = standard_even_basis(s).into_iter().map(KClass::Even).collect();
    let unit = |i: usize| {
        let mut v = vec![Z::zero(); s.b1];
        v[i] = Z::one();
        v
    };
    for i in 0..s.b1 {
        out.push(KClass::Odd(OddClass { h1: unit(i), h3: vec![Z::zero(); s.b1] }));
    }
    for i in 0..s.b1 {
        out.push(KClass::Odd(OddClass { h1: vec![Z::zero(); s.b1], h3: unit(i) }));
    }
    out
}

/// Everything needed to write down the diagonal of `M × M`.
#[derive(Debug, Clone)]
pub struct ModuliContext {
    pub surface: Option<SurfaceModel>,
    pub v: Option<KClass>,
    pub epsilon: u8,
    pub m: u32,
    pub pairing: Pairing,
    pub basis: Vec<KClass>,
    pub gram: Vec<Vec<Z>>,
    pub formal: FormalContext,
}

/// Largest contexts the symbolic expansion is asked to handle.
pub const MAX_FACTORS: usize = 8;
pub const MAX_M: u32 = 6;

impl ModuliContext {
    /// Context from an explicit Gram matrix and factor list (no surface).
    pub fn from_gram(factors: Vec<FactorSpec>, gram: Vec<Vec<Z>>, m: u32) -> Result<Self> {
        let n = factors.len();
        if gram.len() != n || gram.iter().any(|row| row.len() != n) {
            return Err(Error::validation(format!("Gram matrix must be {n}×{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if factors[i].parity != factors[j].parity && !gram[i][j].is_zero() {
                    return Err(Error::validation(format!(
                        "Gram entry ({}, {}) pairs an even and an odd factor",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        check_size(n, m)?;
        let formal = FormalContext::new(factors, m)?;
        Ok(ModuliContext {
            surface: None,
            v: None,
            epsilon: 0,
            m,
            pairing: Pairing::Plain,
            basis: Vec::new(),
            gram,
            formal,
        })
    }

    /// Context for the moduli space of class `v` on `s`. `ranks` gives the
    /// ranks of the even factors in basis order; missing entries default to 1.
    pub fn from_surface(
        s: &SurfaceModel,
        v: &KClass,
        epsilon: u8,
        pairing: Pairing,
        ranks: &[Z],
    ) -> Result<Self> {
        let dim = crate::ktheory::expected_dim(s, v, epsilon)?;
        if dim.is_negative() {
            return Err(Error::validation(format!("expected dimension {dim} is negative")));
        }
        let m = u32::try_from(to_i64(&dim).unwrap_or(i64::MAX))
            .map_err(|_| Error::validation("dimension too large"))?;
        if pairing == Pairing::Mukai && s.b1 > 0 {
            return Err(Error::validation(
                "the Mukai pairing needs b1 = 0; use the plain pairing",
            ));
        }
        let basis = full_basis(s);
        check_size(basis.len(), m)?;
        let mut gram = Vec::with_capacity(basis.len());
        for x in &basis {
            gram.push(basis.iter().map(|y| pair(s, pairing, x, y)).collect::<Result<Vec<_>>>()?);
        }
        let det = crate::linalg::det_z(&gram);
        if det.abs() != Z::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let mut even_seen = 0;
        let factors = basis
            .iter()
            .map(|x| {
                if x.is_even() {
                    let r = ranks.get(even_seen).cloned().unwrap_or_else(Z::one);
                    even_seen += 1;
                    FactorSpec { parity: Parity::Even, rank: Some(r) }
                } else {
                    FactorSpec::odd()
                }
            })
            .collect();
        let mut ctx = Self::from_gram(factors, gram, m.max(1))?;
        ctx.m = m;
        ctx.surface = Some(s.clone());
        ctx.v = Some(v.clone());
        ctx.epsilon = epsilon;
        ctx.pairing = pairing;
        ctx.basis = basis;
        Ok(ctx)
    }
}

fn check_size(factors: usize, m: u32) -> Result<()> {
    if factors > MAX_FACTORS || m > MAX_M {
        return Err(Error::validation(format!(
            "symbolic expansion limited to {MAX_FACTORS} factors and m ≤ {MAX_M} \
             (got {factors} factors, m = {m})"
        )));
    }
    Ok(())
}

/// The diagonal class as `Σ G_ij · p1(e_i') ∪ p2(e_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalKData {
    /// `(G_ij, i, j)` with factor indices from 1; zero entries omitted.
    pub terms: Vec<(Z, u32, u32)>,
    pub total_rank: Z,
    /// `m - ε` when the context comes from a surface class.
    pub expected_rank: Option<Z>,
    pub warning: Option<String>,
}

pub fn assemble_diagonal_kclass(ctx: &ModuliContext) -> Result<DiagonalKData> {
    let mut terms = Vec::new();
    let mut total = Z::zero();
    for (i, row) in ctx.gram.iter().enumerate() {
        for (j, g) in row.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let (i, j) = (i as u32 + 1, j as u32 + 1);
            total += g * ctx.formal.rank(i)? * ctx.formal.rank(j)?;
            terms.push((g.clone(), i, j));
        }
    }
    let expected_rank = ctx.v.as_ref().map(|_| Z::from(ctx.m) - Z::from(ctx.epsilon));
    let warning = match &expected_rank {
        Some(want) if *want != total => Some(format!(
            "assembled rank {total} differs from m - ε = {want}; the factor ranks are inconsistent"
        )),
        _ => None,
    };
    Ok(DiagonalKData { terms, total_rank: total, expected_rank, warning })
}

/// `ch_{k}` (`k` in whole units) of the class `g · p1(e_i') ∪ p2(e_j)` from ch
/// tables indexed by twice the Chern index.
fn term_ch(ring: &PolyRing, g: &Z, left: &[Poly], right: &[Poly], k: u32) -> Poly {
    let mut acc = Poly::zero();
    for a in 0..=2 * k {
        let b = (2 * k - a) as usize;
        if let (Some(l), Some(r)) = (left.get(a as usize), right.get(b)) {
            acc = acc.add(&ring.mul(l, r));
        }
    }
    acc.scale(&Q::from_integer(g.clone()))
}

fn certify(p: Poly, what: &str) -> Result<BigradedClass> {
    if let Some((m, c)) = p.non_integral().into_iter().next() {
        return Err(Error::invariant(format!(
            "{what} has non-integral coefficient {} on {}",
            fmt_q(&c),
            m.render(&var_name)
        )));
    }
    Ok(BigradedClass(p))
}

/// `c_k` of the assembled class, certified integral. Needs `k ≤ m`.
pub fn chern_expand(ctx: &ModuliContext, kdata: &DiagonalKData, k: u32) -> Result<BigradedClass> {
    if k > ctx.formal.m() {
        return Err(Error::validation(format!("c_{k} lies above the truncation m = {}", ctx.formal.m())));
    }
    if k == 0 {
        return Ok(BigradedClass(Poly::one()));
    }
    let ring = ctx.formal.ring();
    let n = ctx.formal.len() as u32;
    let left: Vec<Vec<Poly>> =
        (1..=n).map(|i| ctx.formal.ch_table(Side::Left, i)).collect::<Result<_>>()?;
    let right: Vec<Vec<Poly>> =
        (1..=n).map(|i| ctx.formal.ch_table(Side::Right, i)).collect::<Result<_>>()?;
    let ch: Vec<Poly> = (1..=k)
        .map(|d| {
            kdata.terms.iter().fold(Poly::zero(), |acc, (g, i, j)| {
                acc.add(&term_ch(&ring, g, &left[*i as usize - 1], &right[*j as usize - 1], d))
            })
        })
        .collect();
    certify(chern_from_ch(&ring, &ch, k), &format!("c_{k} of the diagonal class"))
}

/// `δ = c_m` of the assembled class.
pub fn top_chern_expand(ctx: &ModuliContext, kdata: &DiagonalKData) -> Result<BigradedClass> {
    chern_expand(ctx, kdata, ctx.m)
}

/// A generator `α` of the cohomology of `M` with the classes `β` it pairs with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub alpha: Monomial,
    /// `Σ coeff · β` collected over every term with this `α`.
    pub partners: Poly,
}

/// Distinct left monomials of `δ`, led by the unit class when `δ ≠ 0`.
pub fn generator_report(delta: &BigradedClass) -> Vec<Generator> {
    if delta.is_zero() {
        return Vec::new();
    }
    let grouped = delta.by_left();
    let mut out = Vec::with_capacity(grouped.len() + 1);
    if !grouped.contains_key(&Monomial::one()) {
        out.push(Generator { alpha: Monomial::one(), partners: Poly::zero() });
    }
    out.extend(grouped.into_iter().map(|(alpha, partners)| Generator { alpha, partners }));
    out
}

pub fn generators_json(gens: &[Generator]) -> Value {
    Value::Array(
        gens.iter()
            .map(|g| {
                json!({
                    "alpha": g.alpha.render(&var_name),
                    "paired_with": g.partners.render(&var_name),
                })
            })
            .collect(),
    )
}

/// For a single term `g · p1(e_i') ∪ p2(e_j)` with both factors even,
/// compares `c_k` from the expansion with `c_k` computed from formal Chern
/// roots by the splitting principle. Returns `(expansion, oracle)`.
pub fn single_term_oracle(ranks: (u32, u32), g: i64, k: u32) -> Result<(Poly, Poly)> {
    let (ra, rb) = ranks;
    let factors = vec![FactorSpec::even(ra as i64), FactorSpec::even(rb as i64)];
    let mut gram = vec![vec![Z::zero(); 2]; 2];
    gram[0][1] = Z::from(g);
    let ctx = ModuliContext::from_gram(factors, gram, k)?;
    let kdata = assemble_diagonal_kclass(&ctx)?;
    let ring = ctx.formal.ring();

    // Roots: left factor 1 gets α_1..α_ra, right factor 2 gets β_1..β_rb;
    // they live on fresh factor indices so they do not clash with c_k(e_i).
    const ROOTS: u32 = 1000;
    let alpha: Vec<Poly> = (0..ra).map(|s| Poly::var(Var::chern(Side::Left, ROOTS + s, 1))).collect();
    let beta: Vec<Poly> = (0..rb).map(|s| Poly::var(Var::chern(Side::Right, ROOTS + s, 1))).collect();
    let zero = Poly::zero();
    let ea = splitting_oracle(&ring, &alpha, &[], &zero, k);
    let eb = splitting_oracle(&ring, &beta, &[], &zero, k);
    let image = |v: &Var| -> Option<Poly> {
        if v.factor >= ROOTS || v.is_odd() {
            return None;
        }
        let k = (v.index2 / 2) as usize;
        match (v.side, v.factor) {
            (Side::Left, 1) => Some(ea.get(k).cloned().unwrap_or_default()),
            (Side::Right, 2) => Some(eb.get(k).cloned().unwrap_or_default()),
            _ => None,
        }
    };
    let expanded = top_chern_expand(&ctx, &kdata)?.0.substitute(&ring, &image);

    // Π_{s,t} (1 + (α_s + β_t) t)^g
    let mut total = vec![Poly::zero(); k as usize + 1];
    total[0] = Poly::one();
    for a in &alpha {
        let (num, den) = if g >= 0 {
            (repeat(&beta, g as usize), Vec::new())
        } else {
            (Vec::new(), repeat(&beta, g.unsigned_abs() as usize))
        };
        let factor = splitting_oracle(&ring, &num, &den, a, k);
        total = (0..=k as usize)
            .map(|d| ring.sum(&(0..=d).map(|e| ring.mul(&total[d - e], &factor[e])).collect::<Vec<_>>()))
            .collect();
    }
    Ok((expanded, total[k as usize].clone()))
}

fn repeat(v: &[Poly], times: usize) -> Vec<Poly> {
    (0..times).flat_map(|_| v.iter().cloned()).collect()
}

/// One line of a twist-invariance report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCheck {
    pub term: (Z, u32, u32),
    /// Rank of the term's class; `c_{rank+1}` is compared.
    pub rank: Z,
    pub invariant: bool,
}

/// For every term whose right factor is even and whose class has rank
/// `R ≥ 0`, twists that factor by a formal line bundle and checks that
/// `c_{R+1}` of the term is unchanged.
pub fn twist_invariance(ctx: &ModuliContext, kdata: &DiagonalKData) -> Result<Vec<TwistCheck>> {
    let mut out = Vec::new();
    for (g, i, j) in &kdata.terms {
        if ctx.formal.factor(*j)?.parity != Parity::Even || ctx.formal.factor(*i)?.parity != Parity::Even {
            continue;
        }
        let rank = g * ctx.formal.rank(*i)? * ctx.formal.rank(*j)?;
        let Some(r) = to_i64(&rank).filter(|r| *r >= 0 && *r < MAX_M as i64 * 2) else {
            continue;
        };
        let k = r as u32 + 1;
        let factors = vec![
            ctx.formal.factor(*i)?.clone(),
            ctx.formal.factor(*j)?.clone(),
        ];
        let local = FormalContext::new(factors, k)?;
        let ring = local.ring();
        let left = local.ch_table(Side::Left, 1)?;
        let right = local.ch_table(Side::Right, 2)?;
        let ell = Poly::var(Var::chern(Side::Right, 0, 1));
        let twisted = twist_by_line(&ring, &local.even_chern(Side::Right, 2)?, &ell, k);
        let right_tw: Vec<Poly> = (0..=2 * k)
            .map(|d| if d % 2 == 0 { ch_from_chern(&ring, &twisted, d / 2) } else { Poly::zero() })
            .collect();
        let c_of = |rt: &[Poly]| {
            let ch: Vec<Poly> = (1..=k).map(|d| term_ch(&ring, g, &left, rt, d)).collect();
            chern_from_ch(&ring, &ch, k)
        };
        let before = c_of(&right);
        let after = c_of(&right_tw);
        out.push(TwistCheck { term: (g.clone(), *i, *j), rank, invariant: before == after });
    }
    Ok(out)
}

/// `Σ c_k · x_k ⊠ y_k` on `S × S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalDecomposition {
    pub surface: SurfaceModel,
    pub pairs: Vec<(Z, EvenClass, EvenClass)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairRecord {
    #[serde(with = "serde_z")]
    pub coefficient: Z,
    pub x: KClassRecord,
    pub y: KClassRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub surface: SurfaceSpec,
    pub pairs: Vec<PairRecord>,
}

impl DiagonalDecomposition {
    pub fn to_record(&self) -> Result<DecompositionRecord> {
        let s = &self.surface;
        let pairs = self
            .pairs
            .iter()
            .map(|(c, x, y)| {
                Ok(PairRecord {
                    coefficient: c.clone(),
                    x: KClass::Even(x.clone()).to_record(s)?,
                    y: KClass::Even(y.clone()).to_record(s)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DecompositionRecord { surface: s.to_spec(), pairs })
    }

    pub fn from_record(rec: &DecompositionRecord) -> Result<Self> {
        let surface = SurfaceModel::from_spec(&rec.surface)?;
        let even = |r: &KClassRecord| -> Result<EvenClass> {
            match KClass::from_record(&surface, r)? {
                KClass::Even(e) => Ok(e),
                KClass::Odd(_) => Err(Error::Parity("decomposition pairs must be even".into())),
            }
        };
        let pairs = rec
            .pairs
            .iter()
            .map(|p| Ok((p.coefficient.clone(), even(&p.x)?, even(&p.y)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagonalDecomposition { surface, pairs })
    }

    pub fn to_json(&self) -> Result<Value> {
        serde_json::to_value(self.to_record()?).map_err(|e| Error::invariant(e.to_string()))
    }
}

/// Decomposition of the diagonal of a rational surface from a χ-dual basis.
pub fn base_diagonal_decomposition(s: &SurfaceModel) -> Result<DiagonalDecomposition> {
    if !s.is_rational() {
        return Err(Error::validation(format!(
            "{} is not rational (need b1 = 0 and χ(O) = 1)",
            s.name
        )));
    }
    let basis = match s.kind {
        crate::cohomology::SurfaceKind::ProjectivePlane => (1..=3)
            .map(|k| EvenClass::line_bundle(s, &[Z::from(-k)]))
            .collect(),
        _ => standard_even_basis(s),
    };
    let db = gram_and_dual_basis(s, &basis)?;
    let pairs = db.dual.into_iter().zip(basis).map(|(x, y)| (Z::one(), x, y)).collect();
    Ok(DiagonalDecomposition { surface: s.clone(), pairs })
}

/// `β^!`: pullback to the blow-up, which keeps rank and `ch2` and gives the
/// exceptional class coefficient zero.
pub fn pull_back(b: &BlowUp, e: &EvenClass) -> EvenClass {
    let mut c1 = e.c1.clone();
    c1.resize(b.surface.h2_rank, Z::zero());
    EvenClass::new(e.r.clone(), c1, e.ch2.clone())
}

/// `O(E) - O` on the blow-up.
pub fn exceptional_class(b: &BlowUp) -> EvenClass {
    let s = &b.surface;
    let mut d = vec![Z::zero(); s.h2_rank];
    d[s.h2_rank - 1] = Z::one();
    EvenClass::line_bundle(s, &d).sub(&EvenClass::structure_sheaf(s))
}

/// Pulls every pair back and appends `-(O(E) - O) ⊠ (O(E) - O)`.
pub fn blowup_diagonal_step(dec: &DiagonalDecomposition) -> Result<DiagonalDecomposition> {
    if !verify_dual(dec)?.ok {
        return Err(Error::validation("input decomposition is not dual"));
    }
    let b = dec.surface.blow_up();
    let mut pairs: Vec<_> = dec
        .pairs
        .iter()
        .map(|(c, x, y)| (c.clone(), pull_back(&b, x), pull_back(&b, y)))
        .collect();
    let e = exceptional_class(&b);
    pairs.push((-Z::one(), e.clone(), e));
    let out = DiagonalDecomposition { surface: b.surface, pairs };
    if !verify_dual(&out)?.ok {
        return Err(Error::invariant("blow-up step broke duality"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCheck {
    pub ok: bool,
    /// `matrix[i][j] = c_i · χ(x_j ∪ y_i)`.
    pub matrix: Vec<Vec<Z>>,
}

/// Checks that the pairs form dual bases: `c_i χ(x_j ∪ y_i) = δ_ij`, with as
/// many pairs as the rank of the even lattice.
pub fn verify_dual(dec: &DiagonalDecomposition) -> Result<DualCheck> {
    let s = &dec.surface;
    let xs: Vec<EvenClass> = dec.pairs.iter().map(|p| p.1.clone()).collect();
    let ys: Vec<EvenClass> = dec.pairs.iter().map(|p| p.2.clone()).collect();
    let chi = chi_gram(s, &ys, &xs)?;
    let matrix: Vec<Vec<Z>> = chi
        .into_iter()
        .zip(&dec.pairs)
        .map(|(row, (c, _, _))| row.into_iter().map(|v| c * v).collect())
        .collect();
    let identity = matrix
        .iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, v)| *v == if i == j { Z::one() } else { Z::zero() }));
    let ok = identity && dec.pairs.len() == even_lattice_rank(s);
    Ok(DualCheck { ok, matrix })
}

/// Applies `steps` blow-ups to the base decomposition of `s`.
pub fn blowup_chain(s: &SurfaceModel, steps: u32) -> Result<Vec<DiagonalDecomposition>> {
    let mut out = vec![base_diagonal_decomposition(s)?];
    for _ in 0..steps {
        let next = blowup_diagonal_step(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}
