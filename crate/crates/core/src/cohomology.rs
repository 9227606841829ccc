//! Finite models of the integral cohomology ring of a surface.
//!
//! A [`SurfaceModel`] records the ranks of `H^1, H^2, H^3`, the unimodular
//! intersection form on `H^2`, the pairing `H^1 x H^3 -> H^4`, the canonical
//! class and the Euler number. Products `H^1 x H^1 -> H^2` and
//! `H^1 x H^2 -> H^3` are stored as structure constants for the models that
//! need them (abelian and ruled surfaces); elsewhere they are zero.

use std::fmt;
use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{fmt_q, q, qz, serde_z, z, Q, Z};
use crate::error::{Error, Result};
use crate::linalg::{bilinear, bilinear_q, det_z, is_square, is_symmetric, ZMatrix};

/// Where a model came from. Used for naming and for deciding which
/// constructions apply (e.g. rationality).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceKind {
    ProjectivePlane,
    P1xP1,
    Hirzebruch(u32),
    K3,
    Abelian,
    Ruled { genus: u32, delta: i64 },
    BlowUp { base: Box<SurfaceKind>, points: u32 },
    Custom,
}

impl SurfaceKind {
    pub fn is_rational(&self) -> bool {
        match self {
            SurfaceKind::ProjectivePlane | SurfaceKind::P1xP1 | SurfaceKind::Hirzebruch(_) => true,
            SurfaceKind::Ruled { genus, .. } => *genus == 0,
            SurfaceKind::BlowUp { base, .. } => base.is_rational(),
            SurfaceKind::K3 | SurfaceKind::Abelian | SurfaceKind::Custom => false,
        }
    }
}

/// Structure constants for products involving `H^1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct OddProducts {
    /// `h1h1[i][j]` = `H^2` coordinates of `u_i ∪ u_j`.
    h1h1: Vec<Vec<Vec<Z>>>,
    /// `h1h2[i][p]` = `H^3` coordinates of `u_i ∪ e_p`.
    h1h2: Vec<Vec<Vec<Z>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    pub name: String,
    pub kind: SurfaceKind,
    /// Rank of `H^1` (and of `H^3`).
    pub b1: usize,
    pub h2_rank: usize,
    pub intersection_form: ZMatrix,
    /// `odd_pairing[i][j] = ∫ u_i ∪ t_j` for bases `u` of `H^1` and `t` of `H^3`.
    pub odd_pairing: ZMatrix,
    /// First Chern class of the cotangent bundle.
    pub canonical_class: Vec<Z>,
    pub euler_number: Z,
    /// `-K/2`.
    pub todd1: Vec<Q>,
    /// `(K^2 + e)/12`.
    pub todd2: Q,
    odd: Option<OddProducts>,
}

/// Declarative description of a surface, as read from a JSON spec file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub name: String,
    pub b1: usize,
    #[serde(with = "serde_z::mat")]
    pub intersection_form: ZMatrix,
    #[serde(with = "serde_z::mat", default)]
    pub odd_pairing: ZMatrix,
    #[serde(with = "serde_z::vec")]
    pub canonical_class: Vec<Z>,
    #[serde(with = "serde_z")]
    pub euler_number: Z,
}

/// A cohomology class with rational coordinates in degrees 0 through 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohClass {
    pub h0: Q,
    pub h1: Vec<Q>,
    pub h2: Vec<Q>,
    pub h3: Vec<Q>,
    pub h4: Q,
}

/// Result of blowing up a point: the new model plus the data needed to pull
/// classes back from the base.
#[derive(Debug, Clone)]
pub struct BlowUp {
    pub surface: SurfaceModel,
    /// `h2_rank` of the base; the exceptional class is the last `H^2` basis vector.
    pub base_h2_rank: usize,
}

fn zm(rows: &[&[i64]]) -> ZMatrix {
    rows.iter().map(|r| r.iter().map(|&x| z(x)).collect()).collect()
}

fn zv(v: &[i64]) -> Vec<Z> {
    v.iter().map(|&x| z(x)).collect()
}

fn zeros(n: usize) -> Vec<Z> {
    vec![Z::zero(); n]
}

/// The lattice `U` (hyperbolic plane).
fn hyperbolic() -> ZMatrix {
    zm(&[&[0, 1], &[1, 0]])
}

/// Negative definite `E8(-1)` in the Bourbaki numbering.
fn e8_negative() -> ZMatrix {
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut m = vec![vec![Z::zero(); 8]; 8];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = z(-2);
    }
    for (a, b) in edges {
        m[a][b] = z(1);
        m[b][a] = z(1);
    }
    m
}

fn block_diag(blocks: &[ZMatrix]) -> ZMatrix {
    let n: usize = blocks.iter().map(Vec::len).sum();
    let mut m = vec![vec![Z::zero(); n]; n];
    let mut off = 0;
    for b in blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                m[off + i][off + j] = x.clone();
            }
        }
        off += b.len();
    }
    m
}

/// Sign and sorted result of wedging two sorted index sets, or `None` when
/// they share an index.
fn wedge(a: &[usize], b: &[usize]) -> Option<(i64, Vec<usize>)> {
    if a.iter().any(|x| b.contains(x)) {
        return None;
    }
    let mut inversions = 0;
    for x in a {
        inversions += b.iter().filter(|y| *y < x).count();
    }
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, out))
}

impl SurfaceModel {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: impl Into<String>,
        kind: SurfaceKind,
        b1: usize,
        intersection_form: ZMatrix,
        odd_pairing: ZMatrix,
        canonical_class: Vec<Z>,
        euler_number: Z,
        odd: Option<OddProducts>,
    ) -> Result<Self> {
        let name = name.into();
        let h2_rank = intersection_form.len();
        if h2_rank == 0 {
            return Err(Error::validation("intersection form must be non-empty"));
        }
        if !is_symmetric(&intersection_form) {
            return Err(Error::validation("intersection form must be square and symmetric"));
        }
        let d = det_z(&intersection_form);
        if d != Z::one() && d != -Z::one() {
            return Err(Error::NotUnimodular(d.to_string()));
        }
        if odd_pairing.len() != b1 || !is_square(&odd_pairing) {
            return Err(Error::validation(format!("odd pairing must be {b1}x{b1}")));
        }
        if b1 > 0 {
            let d = det_z(&odd_pairing);
            if d != Z::one() && d != -Z::one() {
                return Err(Error::NotUnimodular(format!("odd pairing: {d}")));
            }
        }
        if canonical_class.len() != h2_rank {
            return Err(Error::validation(format!(
                "canonical class has {} entries, expected {h2_rank}",
                canonical_class.len()
            )));
        }
        let k2 = bilinear(&intersection_form, &canonical_class, &canonical_class);
        let twelve_todd2 = &k2 + &euler_number;
        if (&twelve_todd2 % z(12)) != Z::zero() {
            return Err(Error::validation(format!(
                "K^2 + e = {twelve_todd2} is not divisible by 12"
            )));
        }
        // Wu: K must be characteristic, otherwise line bundles get
        // non-integral Euler characteristics.
        for (i, row) in intersection_form.iter().enumerate() {
            let ki: Z = row.iter().zip(&canonical_class).map(|(a, b)| a * b).sum();
            if ((&ki - &row[i]) % z(2)) != Z::zero() {
                return Err(Error::validation(format!(
                    "canonical class is not characteristic (K·e_{i} ≢ e_{i}² mod 2)"
                )));
            }
        }
        let todd1 = canonical_class.iter().map(|k| -qz(k) / q(2)).collect();
        let todd2 = qz(&twelve_todd2) / q(12);
        Ok(SurfaceModel {
            name,
            kind,
            b1,
            h2_rank,
            intersection_form,
            odd_pairing,
            canonical_class,
            euler_number,
            todd1,
            todd2,
            odd,
        })
    }

    pub fn projective_plane() -> Self {
        Self::assemble("P2", SurfaceKind::ProjectivePlane, 0, zm(&[&[1]]), vec![], zv(&[-3]), z(3), None)
            .expect("builtin P2")
    }

    pub fn p1xp1() -> Self {
        Self::assemble("P1xP1", SurfaceKind::P1xP1, 0, hyperbolic(), vec![], zv(&[-2, -2]), z(4), None)
            .expect("builtin P1xP1")
    }

    /// `F_n` in the basis (negative section `C0`, fiber `f`), `C0² = -n`.
    pub fn hirzebruch(n: u32) -> Self {
        let n = n as i64;
        Self::assemble(
            format!("F{n}"),
            SurfaceKind::Hirzebruch(n as u32),
            0,
            zm(&[&[-n, 1], &[1, 0]]),
            vec![],
            zv(&[-2, -n - 2]),
            z(4),
            None,
        )
        .expect("builtin Hirzebruch")
    }

    /// K3 with `H^2 = U^3 ⊕ E8(-1)^2`.
    pub fn k3() -> Self {
        let form = block_diag(&[hyperbolic(), hyperbolic(), hyperbolic(), e8_negative(), e8_negative()]);
        Self::assemble("K3", SurfaceKind::K3, 0, form, vec![], zeros(22), z(24), None)
            .expect("builtin K3")
    }

    /// Complex torus of dimension 2, `H^* = Λ^*(u_1..u_4)`.
    ///
    /// Bases: `H^2` is `u_i∧u_j` for `i<j` in lexicographic order; `H^3` is
    /// `t_i = ±(complement of i)` normalised so that `u_i ∪ t_j = δ_ij [pt]`.
    pub fn abelian() -> Self {
        let pairs: Vec<Vec<usize>> = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| vec![i, j]))
            .collect();
        let top = vec![0, 1, 2, 3];
        // t_i = s_i · complement(i) with u_i ∧ t_i = top.
        let comp = |i: usize| -> Vec<usize> { (0..4).filter(|&x| x != i).collect() };
        let s: Vec<i64> = (0..4).map(|i| wedge(&[i], &comp(i)).unwrap().0).collect();

        let mut form = vec![vec![Z::zero(); 6]; 6];
        for (p, a) in pairs.iter().enumerate() {
            for (r, b) in pairs.iter().enumerate() {
                if let Some((sign, k)) = wedge(a, b) {
                    debug_assert_eq!(k, top);
                    form[p][r] = z(sign);
                }
            }
        }
        let odd_pairing = (0..4)
            .map(|i| (0..4).map(|j| z(if i == j { 1 } else { 0 })).collect())
            .collect();
        let h1h1 = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| {
                        let mut v = zeros(6);
                        if let Some((sign, k)) = wedge(&[i], &[j]) {
                            let p = pairs.iter().position(|x| *x == k).unwrap();
                            v[p] = z(sign);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let h1h2 = (0..4)
            .map(|i| {
                pairs
                    .iter()
                    .map(|b| {
                        let mut v = zeros(4);
                        if let Some((sign, k)) = wedge(&[i], b) {
                            let l = (0..4).find(|l| comp(*l) == k).unwrap();
                            v[l] = z(sign * s[l]);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        Self::assemble(
            "Abelian",
            SurfaceKind::Abelian,
            4,
            form,
            odd_pairing,
            zeros(6),
            z(0),
            Some(OddProducts { h1h1, h1h2 }),
        )
        .expect("builtin abelian surface")
    }

    /// Ruled surface over a genus-`g` curve in the basis (section `σ`,
    /// fiber `f`) with `σ² = -δ`.
    ///
    /// `H^1` is pulled back from the curve with a symplectic basis
    /// `a_1..a_g, b_1..b_g` (`a_i ∪ b_i = f`); `H^3` has basis `u_k ∪ σ`.
    /// No check is made that the surface is Poisson.
    pub fn ruled(genus: u32, delta: i64) -> Self {
        let g = genus as usize;
        let b1 = 2 * g;
        let symp = |i: usize, j: usize| -> i64 {
            if i < g && j == i + g {
                1
            } else if i >= g && j + g == i {
                -1
            } else {
                0
            }
        };
        let odd_pairing = (0..b1).map(|i| (0..b1).map(|j| z(symp(i, j))).collect()).collect();
        let h1h1 = (0..b1)
            .map(|i| (0..b1).map(|j| zv(&[0, symp(i, j)])).collect())
            .collect();
        let h1h2 = (0..b1)
            .map(|i| {
                let mut t = zeros(b1);
                t[i] = z(1);
                vec![t, zeros(b1)]
            })
            .collect();
        let gi = genus as i64;
        Self::assemble(
            format!("Ruled({genus},{delta})"),
            SurfaceKind::Ruled { genus, delta },
            b1,
            zm(&[&[-delta, 1], &[1, 0]]),
            odd_pairing,
            zv(&[-2, 2 * gi - 2 - delta]),
            z(4 - 4 * gi),
            if b1 > 0 { Some(OddProducts { h1h1, h1h2 }) } else { None },
        )
        .expect("builtin ruled surface")
    }

    pub fn from_spec(spec: &SurfaceSpec) -> Result<Self> {
        Self::assemble(
            spec.name.clone(),
            SurfaceKind::Custom,
            spec.b1,
            spec.intersection_form.clone(),
            spec.odd_pairing.clone(),
            spec.canonical_class.clone(),
            spec.euler_number.clone(),
            None,
        )
    }

    /// Declarative form of this model. Odd product structure constants are
    /// not part of the spec format.
    pub fn to_spec(&self) -> SurfaceSpec {
        SurfaceSpec {
            name: self.name.clone(),
            b1: self.b1,
            intersection_form: self.intersection_form.clone(),
            odd_pairing: self.odd_pairing.clone(),
            canonical_class: self.canonical_class.clone(),
            euler_number: self.euler_number.clone(),
        }
    }

    /// χ(O_S) = ∫ td(S).
    pub fn chi_o(&self) -> Q {
        self.todd2.clone()
    }

    /// Rational surfaces, and custom models that look like one (`b1 = 0`, `χ(O) = 1`).
    pub fn is_rational(&self) -> bool {
        match self.kind {
            SurfaceKind::Custom => self.b1 == 0 && self.todd2 == q(1),
            _ => self.kind.is_rational(),
        }
    }

    pub fn dot(&self, a: &[Z], b: &[Z]) -> Z {
        bilinear(&self.intersection_form, a, b)
    }

    pub fn dot_q(&self, a: &[Q], b: &[Q]) -> Q {
        bilinear_q(&self.intersection_form, a, b)
    }

    /// Unit vector `e_i` of `H^2`.
    pub fn h2_basis(&self, i: usize) -> Vec<Z> {
        let mut v = zeros(self.h2_rank);
        v[i] = Z::one();
        v
    }

    pub fn same_shape(&self, other: &SurfaceModel) -> bool {
        self.b1 == other.b1 && self.h2_rank == other.h2_rank
    }

    fn check_class(&self, a: &CohClass) -> Result<()> {
        if a.h1.len() != self.b1
            || a.h3.len() != self.b1
            || a.h2.len() != self.h2_rank
        {
            return Err(Error::SurfaceMismatch(
                self.name.clone(),
                format!("class with shape ({}, {}, {})", a.h1.len(), a.h2.len(), a.h3.len()),
            ));
        }
        Ok(())
    }

    pub fn cup(&self, a: &CohClass, b: &CohClass) -> Result<CohClass> {
        self.check_class(a)?;
        self.check_class(b)?;
        let mut out = CohClass::zero(self);
        out.h0 = &a.h0 * &b.h0;
        for i in 0..self.b1 {
            out.h1[i] = &a.h0 * &b.h1[i] + &a.h1[i] * &b.h0;
            out.h3[i] = &a.h0 * &b.h3[i] + &a.h3[i] * &b.h0;
        }
        for p in 0..self.h2_rank {
            out.h2[p] = &a.h0 * &b.h2[p] + &a.h2[p] * &b.h0;
        }
        if let Some(odd) = &self.odd {
            for i in 0..self.b1 {
                for j in 0..self.b1 {
                    let c = &a.h1[i] * &b.h1[j];
                    if c.is_zero() {
                        continue;
                    }
                    for (p, s) in odd.h1h1[i][j].iter().enumerate() {
                        out.h2[p] += &c * qz(s);
                    }
                }
                for p in 0..self.h2_rank {
                    // u ∪ e and e ∪ u agree: one factor has even degree.
                    let c = &a.h1[i] * &b.h2[p] + &a.h2[p] * &b.h1[i];
                    if c.is_zero() {
                        continue;
                    }
                    for (k, s) in odd.h1h2[i][p].iter().enumerate() {
                        out.h3[k] += &c * qz(s);
                    }
                }
            }
        }
        let mut top = &a.h0 * &b.h4 + &a.h4 * &b.h0 + self.dot_q(&a.h2, &b.h2);
        for i in 0..self.b1 {
            for j in 0..self.b1 {
                let p = qz(&self.odd_pairing[i][j]);
                // t ∪ u = -(u ∪ t) in odd degrees.
                top += &p * (&a.h1[i] * &b.h3[j] - &a.h3[j] * &b.h1[i]);
            }
        }
        out.h4 = top;
        Ok(out)
    }

    pub fn integrate(&self, a: &CohClass) -> Q {
        a.h4.clone()
    }

    pub fn todd(&self) -> CohClass {
        let mut t = CohClass::one(self);
        t.h2 = self.todd1.clone();
        t.h4 = self.todd2.clone();
        t
    }

    /// Blow up a point: appends the exceptional class `E` (`E² = -1`,
    /// orthogonal to the base), `K' = β*K + E`, `e' = e + 1`.
    pub fn blow_up(&self) -> BlowUp {
        let n = self.h2_rank;
        let mut form = self.intersection_form.clone();
        for row in &mut form {
            row.push(Z::zero());
        }
        let mut last = zeros(n + 1);
        last[n] = z(-1);
        form.push(last);
        let mut k = self.canonical_class.clone();
        k.push(Z::one());
        let odd = self.odd.as_ref().map(|o| OddProducts {
            h1h1: o
                .h1h1
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|v| {
                            let mut v = v.clone();
                            v.push(Z::zero());
                            v
                        })
                        .collect()
                })
                .collect(),
            h1h2: o
                .h1h2
                .iter()
                .map(|row| {
                    let mut row = row.clone();
                    row.push(zeros(self.b1));
                    row
                })
                .collect(),
        });
        let kind = match &self.kind {
            SurfaceKind::BlowUp { base, points } => SurfaceKind::BlowUp {
                base: base.clone(),
                points: points + 1,
            },
            other => SurfaceKind::BlowUp {
                base: Box::new(other.clone()),
                points: 1,
            },
        };
        let name = match &self.kind {
            SurfaceKind::BlowUp { points, .. } => {
                let inner = &self.name[self.name.find('(').map_or(0, |i| i + 1)..self.name.len() - 1];
                format!("Bl{}({inner})", points + 1)
            }
            _ => format!("Bl1({})", self.name),
        };
        let surface = SurfaceModel {
            name,
            kind,
            b1: self.b1,
            h2_rank: n + 1,
            intersection_form: form,
            odd_pairing: self.odd_pairing.clone(),
            todd1: k.iter().map(|x| -qz(x) / q(2)).collect(),
            canonical_class: k,
            euler_number: &self.euler_number + 1,
            todd2: self.todd2.clone(),
            odd,
        };
        BlowUp {
            surface,
            base_h2_rank: n,
        }
    }

    /// Parses a builtin name: `P2`, `P1xP1`, `F<n>`, `K3`, `Abelian`,
    /// `Ruled(g,d)`, or `Bl<k>(<name>)`.
    pub fn builtin(name: &str) -> Result<Self> {
        let s = name.trim();
        let unknown = || Error::validation(format!("unknown surface {s:?}"));
        if let Some(rest) = s.strip_prefix("Bl") {
            let open = rest.find('(').ok_or_else(unknown)?;
            if !rest.ends_with(')') {
                return Err(unknown());
            }
            let count: u32 = if open == 0 {
                1
            } else {
                rest[..open].parse().map_err(|_| unknown())?
            };
            let mut surf = Self::builtin(&rest[open + 1..rest.len() - 1])?;
            for _ in 0..count {
                surf = surf.blow_up().surface;
            }
            return Ok(surf);
        }
        if let Some(args) = s.strip_prefix("Ruled(").and_then(|r| r.strip_suffix(')')) {
            let (g, d) = args.split_once(',').ok_or_else(unknown)?;
            let g: u32 = g.trim().parse().map_err(|_| unknown())?;
            let d: i64 = d.trim().parse().map_err(|_| unknown())?;
            return Ok(Self::ruled(g, d));
        }
        match s {
            "P2" => Ok(Self::projective_plane()),
            "P1xP1" => Ok(Self::p1xp1()),
            "K3" => Ok(Self::k3()),
            "Abelian" => Ok(Self::abelian()),
            _ => {
                if let Some(n) = s.strip_prefix('F') {
                    let n: u32 = n.parse().map_err(|_| unknown())?;
                    return Ok(Self::hirzebruch(n));
                }
                Err(unknown())
            }
        }
    }

    /// Builtin name, or a path to a JSON spec file.
    pub fn build(name_or_path: &str) -> Result<Self> {
        match Self::builtin(name_or_path) {
            Ok(s) => Ok(s),
            Err(e) => {
                let path = Path::new(name_or_path);
                if path.is_file() {
                    Self::from_spec_file(path)
                } else {
                    Err(e)
                }
            }
        }
    }

    pub fn from_spec_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_spec_json(&text)
    }

    pub fn from_spec_json(text: &str) -> Result<Self> {
        let spec: SurfaceSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("surface spec: {e}")))?;
        Self::from_spec(&spec)
    }
}

impl CohClass {
    pub fn zero(s: &SurfaceModel) -> Self {
        CohClass {
            h0: Q::zero(),
            h1: vec![Q::zero(); s.b1],
            h2: vec![Q::zero(); s.h2_rank],
            h3: vec![Q::zero(); s.b1],
            h4: Q::zero(),
        }
    }

    pub fn one(s: &SurfaceModel) -> Self {
        let mut c = Self::zero(s);
        c.h0 = Q::one();
        c
    }

    pub fn point(s: &SurfaceModel) -> Self {
        let mut c = Self::zero(s);
        c.h4 = Q::one();
        c
    }

    pub fn from_h2(s: &SurfaceModel, v: &[Z]) -> Self {
        let mut c = Self::zero(s);
        c.h2 = v.iter().map(qz).collect();
        c
    }

    pub fn h1_basis(s: &SurfaceModel, i: usize) -> Self {
        let mut c = Self::zero(s);
        c.h1[i] = Q::one();
        c
    }

    pub fn h3_basis(s: &SurfaceModel, i: usize) -> Self {
        let mut c = Self::zero(s);
        c.h3[i] = Q::one();
        c
    }

    pub fn is_integral(&self) -> bool {
        self.coords().all(|x| x.is_integer())
    }

    fn coords(&self) -> impl Iterator<Item = &Q> {
        std::iter::once(&self.h0)
            .chain(&self.h1)
            .chain(&self.h2)
            .chain(&self.h3)
            .chain(std::iter::once(&self.h4))
    }

    pub fn is_zero(&self) -> bool {
        self.coords().all(Zero::is_zero)
    }

    pub fn add(&self, o: &CohClass) -> CohClass {
        let zip = |a: &[Q], b: &[Q]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        CohClass {
            h0: &self.h0 + &o.h0,
            h1: zip(&self.h1, &o.h1),
            h2: zip(&self.h2, &o.h2),
            h3: zip(&self.h3, &o.h3),
            h4: &self.h4 + &o.h4,
        }
    }

    pub fn scale(&self, c: &Q) -> CohClass {
        let sc = |a: &[Q]| a.iter().map(|x| x * c).collect();
        CohClass {
            h0: &self.h0 * c,
            h1: sc(&self.h1),
            h2: sc(&self.h2),
            h3: sc(&self.h3),
            h4: &self.h4 * c,
        }
    }

    /// Component of cohomological degree `d`.
    pub fn degree_part(&self, d: u32) -> CohClass {
        let mut c = self.clone();
        let keep = |k: u32, v: &mut Vec<Q>| {
            if k != d {
                v.iter_mut().for_each(|x| *x = Q::zero());
            }
        };
        if d != 0 {
            c.h0 = Q::zero();
        }
        keep(1, &mut c.h1);
        keep(2, &mut c.h2);
        keep(3, &mut c.h3);
        if d != 4 {
            c.h4 = Q::zero();
        }
        c
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |a: &[Q]| a.iter().map(fmt_q).collect::<Vec<_>>().join(",");
        write!(
            f,
            "({}; [{}]; [{}]; [{}]; {})",
            fmt_q(&self.h0),
            v(&self.h1),
            v(&self.h2),
            v(&self.h3),
            fmt_q(&self.h4)
        )
    }
}
