//! Ring-object abstraction: a cheap handle that knows how to combine its
//! elements. Series and Witt vectors are generic over this, so the same
//! code runs over GF(p^n) and over GR(p^N, n).

use std::fmt;

use crate::error::Result;
use crate::fq::{Fq, FqElem};
use crate::galois_ring::{GaloisRing, GrElem};

pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, k: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Inverse; errors on zero (fields) or non-units (Galois rings).
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// The residue characteristic p.
    fn prime(&self) -> u64;

    fn mul_int(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        self.mul(a, &self.from_int(k))
    }
}

impl Ring for Fq {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        Fq::zero(self)
    }
    fn one(&self) -> FqElem {
        Fq::one(self)
    }
    fn from_int(&self, k: i64) -> FqElem {
        Fq::from_int(self, k)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.add(b)
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.sub(b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        a.neg()
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.mul(b)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &FqElem) -> Result<FqElem> {
        a.inv()
    }
    fn prime(&self) -> u64 {
        self.p()
    }
}

impl Ring for GaloisRing {
    type Elem = GrElem;

    fn zero(&self) -> GrElem {
        GaloisRing::zero(self)
    }
    fn one(&self) -> GrElem {
        GaloisRing::one(self)
    }
    fn from_int(&self, k: i64) -> GrElem {
        GaloisRing::from_int(self, k)
    }
    fn add(&self, a: &GrElem, b: &GrElem) -> GrElem {
        a.add(b)
    }
    fn sub(&self, a: &GrElem, b: &GrElem) -> GrElem {
        a.sub(b)
    }
    fn neg(&self, a: &GrElem) -> GrElem {
        a.neg()
    }
    fn mul(&self, a: &GrElem, b: &GrElem) -> GrElem {
        a.mul(b)
    }
    fn is_zero(&self, a: &GrElem) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &GrElem) -> Result<GrElem> {
        a.inv()
    }
    fn prime(&self) -> u64 {
        self.p()
    }
}
