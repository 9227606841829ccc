//! K-theory of a curve `Σ` of genus `g` and pushforward along the ruling
//! `b: S → Σ` of a ruled surface.
//!
//! Convention: `S` is modelled by [`SurfaceModel::ruled`] with basis
//! (section `σ`, fiber `f`), `σ² = -δ`, and `h = [O_S(-σ)]`. Then
//! `b_!(1) = [O_Σ]`, `b_!(h) = 0` and `K(S) = K(Σ)·1 ⊕ K(Σ)·h`.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{qz, to_integer, Q, Z};
use crate::cohomology::{SurfaceKind, SurfaceModel};
use crate::error::{Error, Result};
use crate::ktheory::{euler_chi_even, kcup_even, EvenClass, KClass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "parity", rename_all = "lowercase")]
pub enum CurveKClass {
    Even {
        #[serde(with = "crate::arith::serde_z")]
        rank: Z,
        #[serde(with = "crate::arith::serde_z")]
        degree: Z,
    },
    /// Coordinates in a symplectic basis of `K¹(Σ) ≅ H¹(Σ)`.
    Odd {
        #[serde(with = "crate::arith::serde_z::vec")]
        coords: Vec<Z>,
    },
}

impl CurveKClass {
    pub fn even(rank: i64, degree: i64) -> Self {
        CurveKClass::Even { rank: rank.into(), degree: degree.into() }
    }

    pub fn zero() -> Self {
        Self::even(0, 0)
    }

    fn parts(&self) -> Result<(&Z, &Z)> {
        match self {
            CurveKClass::Even { rank, degree } => Ok((rank, degree)),
            CurveKClass::Odd { .. } => Err(Error::Parity("odd curve class".into())),
        }
    }

    pub fn add(&self, other: &CurveKClass) -> Result<CurveKClass> {
        match (self, other) {
            (CurveKClass::Odd { coords: a }, CurveKClass::Odd { coords: b }) if a.len() == b.len() => {
                Ok(CurveKClass::Odd { coords: a.iter().zip(b).map(|(x, y)| x + y).collect() })
            }
            _ => {
                let (r, d) = self.parts()?;
                let (r2, d2) = other.parts()?;
                Ok(CurveKClass::Even { rank: r + r2, degree: d + d2 })
            }
        }
    }
}

/// Riemann–Roch on a genus-`g` curve: `χ = d + r(1 - g)`.
pub fn curve_chi(g: u32, v: &CurveKClass) -> Result<Z> {
    let (r, d) = v.parts().map_err(|_| Error::Parity("χ of an odd curve class is undefined".into()))?;
    Ok(d + r * (Z::from(1) - Z::from(g)))
}

/// `(r, d) · (r', d') = (r r', r d' + r' d)`.
pub fn curve_product(a: &CurveKClass, b: &CurveKClass) -> Result<CurveKClass> {
    let (r, d) = a.parts()?;
    let (r2, d2) = b.parts()?;
    Ok(CurveKClass::Even { rank: r * r2, degree: r * d2 + r2 * d })
}

fn ruled_params(s: &SurfaceModel) -> Result<(u32, i64)> {
    match s.kind {
        SurfaceKind::Ruled { genus, delta } => Ok((genus, delta)),
        _ => Err(Error::validation(format!("{} is not a ruled surface over a curve", s.name))),
    }
}

/// `b^!(r, d) = (r, d·f, 0)`.
pub fn pullback(s: &SurfaceModel, x: &CurveKClass) -> Result<EvenClass> {
    ruled_params(s)?;
    let (r, d) = x.parts()?;
    Ok(EvenClass::new(r.clone(), vec![Z::zero(), d.clone()], Q::zero()))
}

/// `[O_S(-σ)]`.
pub fn tautological(s: &SurfaceModel) -> Result<EvenClass> {
    ruled_params(s)?;
    Ok(EvenClass::line_bundle(s, &[Z::from(-1), Z::zero()]))
}

/// Coordinates `(a, c)` with `v = b^!(a) + b^!(c)·h`.
pub fn module_coordinates(s: &SurfaceModel, v: &EvenClass) -> Result<(CurveKClass, CurveKClass)> {
    let (_, delta) = ruled_params(s)?;
    if v.c1.len() != 2 {
        return Err(Error::validation("class does not live on this ruled surface"));
    }
    let x = &v.c1[0];
    let y = &v.c1[1];
    let c_r = -x;
    let c_d = to_integer(&(qz(x) * qz(&Z::from(delta)) / Q::from_integer(2.into()) - &v.ch2), "module coordinate")
        .map_err(|_| Error::validation("class is not in the span of {1, h} over K(Σ)"))?;
    let a_r = &v.r + x;
    let a_d = y - &c_d;
    Ok((CurveKClass::Even { rank: a_r, degree: a_d }, CurveKClass::Even { rank: c_r, degree: c_d }))
}

/// `b_!`. Odd classes `(h1, h3)` go to `h1 + h3` in the `H¹(Σ)` basis; this
/// is bookkeeping only.
pub fn ruling_pushforward(s: &SurfaceModel, v: &KClass) -> Result<CurveKClass> {
    let (g, _) = ruled_params(s)?;
    match v {
        KClass::Even(e) => {
            e.check(s)?;
            let (a, _) = module_coordinates(s, e)?;
            // GRR: χ_S(v) = χ_Σ(b_! v)
            if euler_chi_even(s, e)? != curve_chi(g, &a)? {
                return Err(Error::invariant("pushforward disagrees with Riemann–Roch"));
            }
            Ok(a)
        }
        KClass::Odd(o) => {
            v.check(s)?;
            Ok(CurveKClass::Odd { coords: o.h1.iter().zip(&o.h3).map(|(a, b)| a + b).collect() })
        }
    }
}

/// `χ_S(b^!x ∪ w)` and `χ_Σ(x ∪ b_!w)`.
pub fn projection_formula_sides(s: &SurfaceModel, x: &CurveKClass, w: &EvenClass) -> Result<(Z, Z)> {
    let (g, _) = ruled_params(s)?;
    let lhs = euler_chi_even(s, &kcup_even(s, &pullback(s, x)?, w))?;
    let pushed = ruling_pushforward(s, &KClass::Even(w.clone()))?;
    let rhs = curve_chi(g, &curve_product(x, &pushed)?)?;
    Ok((lhs, rhs))
}

pub fn projection_formula_check(s: &SurfaceModel, x: &CurveKClass, w: &EvenClass) -> Result<bool> {
    let (l, r) = projection_formula_sides(s, x, w)?;
    Ok(l == r)
}
