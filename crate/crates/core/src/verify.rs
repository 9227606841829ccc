//! Self-check suites, shared by `kunneth verify` and the acceptance tests.

use std::time::{Duration, Instant};

use clap::ValueEnum;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{q, z, Q, Z};
use crate::chern::{
    ch_from_chern, chern_from_ch, odd_pair_chern, odd_var, splitting_oracle, tensor_by_line,
    EvenChern, ODD_X, ODD_Y,
};
use crate::cohomology::SurfaceModel;
use crate::diagonal::{
    assemble_diagonal_kclass, base_diagonal_decomposition, blowup_diagonal_step,
    single_term_oracle, top_chern_expand, twist_invariance, verify_dual, ModuliContext,
};
use crate::error::{Error, Result};
use crate::formal::{FactorSpec, Parity};
use crate::ktheory::{
    expected_dim, gram_and_dual_basis, universal_obstruction, EvenClass, KClass,
};
use crate::poly::{Poly, PolyRing, Side, Var};
use crate::ring::GradedAlgebra;
use crate::spectral::{projection_formula_sides, CurveKClass};

pub const DEFAULT_SEED: u64 = 0x006b_756e_6e65_7468;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    DualBasis,
    Blowup,
    TensorLine,
    OddIntegrality,
    ChernRoundtrip,
    Dims,
    Obstruction,
    Diagonal,
    Twist,
    Spectral,
    All,
}

impl Suite {
    pub const EACH: [Suite; 10] = [
        Suite::DualBasis,
        Suite::Blowup,
        Suite::TensorLine,
        Suite::OddIntegrality,
        Suite::ChernRoundtrip,
        Suite::Dims,
        Suite::Obstruction,
        Suite::Diagonal,
        Suite::Twist,
        Suite::Spectral,
    ];

    pub fn id(self) -> u8 {
        Suite::EACH.iter().position(|s| *s == self).map_or(0, |i| i as u8 + 1)
    }

    pub fn title(self) -> &'static str {
        match self {
            Suite::DualBasis => "P2 dual basis",
            Suite::Blowup => "blow-up recursion",
            Suite::TensorLine => "tensor-by-line vs splitting oracle",
            Suite::OddIntegrality => "odd-product integrality",
            Suite::ChernRoundtrip => "Chern/character round trip",
            Suite::Dims => "expected dimensions",
            Suite::Obstruction => "universal-sheaf obstruction",
            Suite::Diagonal => "diagonal expansion consistency",
            Suite::Twist => "twist invariance",
            Suite::Spectral => "spectral projection formula",
            Suite::All => "all",
        }
    }

    fn budget(self) -> Option<Duration> {
        match self {
            Suite::DualBasis => Some(Duration::from_secs(1)),
            Suite::Blowup => Some(Duration::from_secs(5)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} — {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.millis
        )
    }
}

pub fn run(suite: Suite, seed: u64) -> Vec<CriterionResult> {
    let list: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    list.into_iter().map(|s| run_one(s, seed)).collect()
}

fn run_one(suite: Suite, seed: u64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ suite.id() as u64);
    let start = Instant::now();
    let outcome = match suite {
        Suite::DualBasis => dual_basis(),
        Suite::Blowup => blowup(),
        Suite::TensorLine => tensor_line(&mut rng),
        Suite::OddIntegrality => odd_integrality(),
        Suite::ChernRoundtrip => chern_roundtrip(&mut rng),
        Suite::Dims => dims(),
        Suite::Obstruction => obstruction(&mut rng),
        Suite::Diagonal => diagonal(&mut rng),
        Suite::Twist => twist(&mut rng),
        Suite::Spectral => spectral(&mut rng),
        Suite::All => unreachable!("expanded by run"),
    };
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    if let Some(limit) = suite.budget() {
        if elapsed > limit {
            passed = false;
            detail = format!("{detail}; exceeded {} ms budget", limit.as_millis());
        }
    }
    CriterionResult {
        id: suite.id(),
        suite,
        name: suite.title(),
        passed,
        detail,
        millis: elapsed.as_millis(),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invariant(msg()))
    }
}

fn is_identity(m: &[Vec<Z>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.len() == m.len() && row.iter().enumerate().all(|(j, v)| *v == if i == j { Z::one() } else { Z::zero() })
    })
}

fn dual_basis() -> Result<String> {
    let s = SurfaceModel::projective_plane();
    let o = |k: i64| EvenClass::line_bundle(&s, &[z(k)]);
    let basis = vec![o(-1), o(-2), o(-3)];
    let db = gram_and_dual_basis(&s, &basis)?;
    let check = crate::ktheory::chi_gram(&s, &db.dual, &basis)?;
    ensure(is_identity(&check), || "χ(x_i ∪ O(-j)) is not the identity".into())?;
    let x2 = o(-1).sub(&o(0).scale(&z(3)));
    let x3 = o(0);
    ensure(db.dual[1] == x2, || "x2 ≠ O(-1) - 3O".into())?;
    ensure(db.dual[2] == x3, || "x3 ≠ O".into())?;
    let x1 = o(-2).sub(&o(-1).scale(&z(3))).add(&o(0).scale(&z(3)));
    ensure(db.dual[0] == x1, || "x1 ≠ O(-2) - 3O(-1) + 3O".into())?;
    // The variant ending in -O instead of +3O is not dual to O(-3).
    let variant = o(-2).sub(&o(-1).scale(&z(3))).sub(&o(0));
    let bad = crate::ktheory::chi_gram(&s, &[variant], &[o(-3)])?[0][0].clone();
    ensure(bad != Z::one(), || "variant x1 unexpectedly dual".into())?;
    Ok(format!(
        "χ-Gram of dual basis = I3; x2 = O(-1) - 3O, x3 = O; \
         x1 = O(-2) - 3O(-1) + 3O (the variant O(-2) - 3O(-1) - O pairs to {bad} with O(-3))"
    ))
}

fn blowup() -> Result<String> {
    for (s, base) in [(SurfaceModel::projective_plane(), 3usize), (SurfaceModel::p1xp1(), 4)] {
        let mut dec = base_diagonal_decomposition(&s)?;
        for k in 0..=5usize {
            let check = verify_dual(&dec)?;
            ensure(check.ok && is_identity(&check.matrix) && check.matrix.len() == base + k, || {
                format!("{} after {k} blow-ups is not dual", s.name)
            })?;
            if k < 5 {
                dec = blowup_diagonal_step(&dec)?;
            }
        }
    }
    Ok("P2 and P1xP1 with 0..5 blow-ups: χ-Gram = I_{3+k}, I_{4+k}".into())
}

/// Random integer combination of two degree-2 classes.
fn random_divisor(rng: &mut ChaCha8Rng) -> Poly {
    let h = |i| Poly::var(Var::chern(Side::Right, i, 1));
    h(1).scale(&q(rng.gen_range(-3..=3))).add(&h(2).scale(&q(rng.gen_range(-3..=3))))
}

fn tensor_line(rng: &mut ChaCha8Rng) -> Result<String> {
    let ring = PolyRing::default();
    let zero = Poly::zero();
    let mut checks = 0;
    for _ in 0..240 {
        let rank = rng.gen_range(0..=5usize);
        let den = rng.gen_range(0..=2usize);
        let num: Vec<Poly> = (0..rank + den).map(|_| random_divisor(rng)).collect();
        let den: Vec<Poly> = (0..den).map(|_| random_divisor(rng)).collect();
        let ell = random_divisor(rng);
        let top = rank as u32 + 6;
        let c = splitting_oracle(&ring, &num, &den, &zero, top);
        let x = EvenChern { rank: Z::from(rank), c: c[1..].to_vec() };
        let twisted = splitting_oracle(&ring, &num, &den, &ell, top);
        for n in 1..=6u32 {
            let got = tensor_by_line(&ring, &x, &ell, n)?;
            ensure(got == twisted[(rank as u32 + n) as usize], || {
                format!("rank {rank}, n = {n}: formula and oracle differ")
            })?;
            checks += 1;
        }
    }
    Ok(format!("240 random root configurations, {checks} exact comparisons"))
}

fn odd_integrality() -> Result<String> {
    let ring = PolyRing::default();
    let c = odd_pair_chern(8)?;
    for (k, p) in c.iter().enumerate() {
        ensure(p.is_integral(), || format!("c_{} not integral", k + 1))?;
    }
    let xy = |i, j| ring.mul(&odd_var(ODD_X, i), &odd_var(ODD_Y, j));
    ensure(c[0] == xy(0, 0), || "d = 1 closed form".into())?;
    ensure(c[1] == xy(0, 1).add(&xy(1, 0)), || "d = 2 closed form".into())?;
    ensure(c[2] == xy(0, 2).add(&xy(1, 1).scale(&q(2))).add(&xy(2, 0)), || "d = 3 closed form".into())?;
    let sizes: Vec<String> = c.iter().map(|p| p.len().to_string()).collect();
    Ok(format!("c_1..c_8 integral (term counts {}); d = 1, 2, 3 match closed forms", sizes.join(",")))
}

fn chern_roundtrip(rng: &mut ChaCha8Rng) -> Result<String> {
    let ring = PolyRing::default();
    let h = |i| Poly::var(Var::chern(Side::Right, i, 1));
    for _ in 0..220 {
        let c: Vec<Poly> = (1..=6u32)
            .map(|k| {
                (0..=k).fold(Poly::zero(), |acc, i| {
                    let m = ring.mul(&ring.pow(&h(1), i), &ring.pow(&h(2), k - i));
                    acc.add(&m.scale(&q(rng.gen_range(-4..=4))))
                })
            })
            .collect();
        let x = EvenChern { rank: Z::from(rng.gen_range(-3..=6)), c };
        let ch: Vec<Poly> = (1..=6).map(|k| ch_from_chern(&ring, &x, k)).collect();
        for k in 1..=6u32 {
            let back = chern_from_ch(&ring, &ch, k);
            ensure(back == x.c[k as usize - 1], || format!("c_{k} does not survive the round trip"))?;
        }
    }
    Ok("220 random integer Chern vectors, degrees 1..6, exact".into())
}

fn dims() -> Result<String> {
    let k3 = SurfaceModel::k3();
    let p2 = SurfaceModel::projective_plane();
    for n in 1..=10i64 {
        let v = |s: &SurfaceModel| KClass::Even(EvenClass::new(z(1), vec![Z::zero(); s.h2_rank], q(-n)));
        let a = expected_dim(&k3, &v(&k3), 2)?;
        let b = expected_dim(&p2, &v(&p2), 1)?;
        ensure(a == z(2 * n) && b == z(2 * n), || format!("n = {n}: got {a} (K3), {b} (P2)"))?;
    }
    Ok("K3 (ε = 2) and P2 (ε = 1) with v = (1, 0, -n): dimension 2n for n = 1..10".into())
}

fn obstruction(rng: &mut ChaCha8Rng) -> Result<String> {
    let p2 = SurfaceModel::projective_plane();
    for _ in 0..50 {
        let v = EvenClass::from_chern(&p2, z(1), vec![z(rng.gen_range(-6..=6))], z(rng.gen_range(-6..=12)));
        let n = universal_obstruction(&p2, &v.into())?;
        ensure(n.is_one(), || format!("P2 rank-1 class has n = {n}"))?;
    }
    let k3 = SurfaceModel::k3();
    let v = EvenClass::new(z(2), vec![Z::zero(); k3.h2_rank], Q::zero());
    let n = universal_obstruction(&k3, &v.into())?;
    ensure(n.is_even(), || format!("K3 v = (2, 0, 0) has odd n = {n}"))?;
    Ok(format!("n = 1 for 50 rank-1 classes on P2; n = {n} for (2, 0, 0) on K3"))
}

fn random_context(rng: &mut ChaCha8Rng) -> Result<ModuliContext> {
    let count = rng.gen_range(1..=3usize);
    let factors: Vec<FactorSpec> = (0..count)
        .map(|_| if rng.gen_bool(0.5) { FactorSpec::even(rng.gen_range(0..=2)) } else { FactorSpec::odd() })
        .collect();
    let gram = (0..count)
        .map(|i| {
            (0..count)
                .map(|j| {
                    if factors[i].parity == factors[j].parity {
                        Z::from(rng.gen_range(-2..=2))
                    } else {
                        Z::zero()
                    }
                })
                .collect()
        })
        .collect();
    ModuliContext::from_gram(factors, gram, rng.gen_range(1..=3))
}

fn diagonal(rng: &mut ChaCha8Rng) -> Result<String> {
    let mut terms = 0usize;
    let mut mixed = 0usize;
    for _ in 0..40 {
        let ctx = random_context(rng)?;
        let kdata = assemble_diagonal_kclass(&ctx)?;
        let delta = top_chern_expand(&ctx, &kdata)?;
        ensure(delta.is_integral(), || "non-integral coefficient".into())?;
        for t in delta.terms() {
            let (a, b) = t.bidegree();
            ensure(a + b == 2 * ctx.m, || format!("bidegree ({a}, {b}) with m = {}", ctx.m))?;
            terms += 1;
        }
        let parities: Vec<Parity> = ctx.formal.factors().iter().map(|f| f.parity).collect();
        if parities.contains(&Parity::Even) && parities.contains(&Parity::Odd) {
            mixed += 1;
        }
    }
    let mut oracle = 0;
    for (ra, rb) in [(1u32, 1u32), (1, 2), (2, 1), (3, 1), (1, 3)] {
        for g in [1i64, 2, -1] {
            for k in 1..=3 {
                if ra * rb * g.unsigned_abs() as u32 > 3 {
                    continue;
                }
                let (a, b) = single_term_oracle((ra, rb), g, k)?;
                ensure(a == b, || format!("ranks ({ra}, {rb}), G = {g}, m = {k}: oracle mismatch"))?;
                oracle += 1;
            }
        }
    }
    Ok(format!(
        "40 random contexts ({mixed} mixed parity, {terms} terms) integral and homogeneous; \
         {oracle} single-class oracle comparisons agree"
    ))
}

fn twist(rng: &mut ChaCha8Rng) -> Result<String> {
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 30 && attempts < 500 {
        attempts += 1;
        let ctx = random_context(rng)?;
        let kdata = assemble_diagonal_kclass(&ctx)?;
        for c in twist_invariance(&ctx, &kdata)? {
            ensure(c.invariant, || {
                format!("term {:?} of rank {}: c_(R+1) changed under twist", c.term, c.rank)
            })?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no even terms generated".into())?;
    Ok(format!("{checked} twisted terms keep c_(rank+1)"))
}

fn spectral(rng: &mut ChaCha8Rng) -> Result<String> {
    let mut count = 0;
    for g in 0..=3u32 {
        let s = SurfaceModel::ruled(g, rng.gen_range(0..=3));
        for _ in 0..120 {
            let x = CurveKClass::even(rng.gen_range(-4..=4), rng.gen_range(-6..=6));
            let w = EvenClass::from_chern(
                &s,
                z(rng.gen_range(-3..=4)),
                vec![z(rng.gen_range(-4..=4)), z(rng.gen_range(-4..=4))],
                z(rng.gen_range(-6..=6)),
            );
            let (l, r) = projection_formula_sides(&s, &x, &w)?;
            ensure(l == r, || format!("g = {g}: χ_S = {l}, χ_Σ = {r}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} random pairs over g = 0..3 satisfy the projection formula"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for r in run(Suite::All, DEFAULT_SEED) {
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn ids_are_one_based() {
        assert_eq!(Suite::DualBasis.id(), 1);
        assert_eq!(Suite::Spectral.id(), 10);
    }
}
