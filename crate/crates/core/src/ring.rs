//! The minimal ring interface the Chern-class formulas are written against.

use std::fmt::Debug;

use crate::arith::Q;
use crate::cohomology::{CohClass, SurfaceModel};

/// A commutative-up-to-sign algebra over the rationals. Implementations
/// carry whatever context multiplication needs (truncation degree, the
/// intersection form, ...).
pub trait GradedAlgebra {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, c: &Q) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.scale(b, &-Q::from_integer(1.into())))
    }

    fn constant(&self, c: &Q) -> Self::Elem {
        self.scale(&self.one(), c)
    }

    fn pow(&self, a: &Self::Elem, k: u32) -> Self::Elem {
        (0..k).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Self::Elem>) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

impl GradedAlgebra for SurfaceModel {
    type Elem = CohClass;

    fn zero(&self) -> CohClass {
        CohClass::zero(self)
    }

    fn one(&self) -> CohClass {
        CohClass::one(self)
    }

    fn add(&self, a: &CohClass, b: &CohClass) -> CohClass {
        a.add(b)
    }

    fn mul(&self, a: &CohClass, b: &CohClass) -> CohClass {
        self.cup(a, b).expect("classes built on this surface")
    }

    fn scale(&self, a: &CohClass, c: &Q) -> CohClass {
        a.scale(c)
    }

    fn is_zero(&self, a: &CohClass) -> bool {
        a.is_zero()
    }
}
