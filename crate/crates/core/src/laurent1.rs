//! One-variable Laurent series with an explicit knowledge window.
//!
//! A value represents partial knowledge of a true Laurent series:
//! the true order is at least `lo`, every coefficient at index `i < hi`
//! is known (zero unless stored), and indices `i >= hi` are unknown.
//! `hi = Bound::INF` means the series is known completely. Asking for
//! anything in the unknown region is an error, never a silent zero.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Knowledge bound: a finite index or +infinity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Bound(i64);

impl Bound {
    pub const INF: Bound = Bound(i64::MAX);
    pub fn finite(v: i64) -> Bound {
        assert!(v < i64::MAX / 4, "bound overflow");
        Bound(v)
    }
    pub fn is_inf(self) -> bool {
        self.0 == i64::MAX
    }
    pub fn value(self) -> i64 {
        assert!(!self.is_inf(), "reading an infinite bound");
        self.0
    }
    /// Shift by a finite offset; infinity absorbs.
    pub fn offset(self, k: i64) -> Bound {
        if self.is_inf() {
            Bound::INF
        } else {
            Bound::finite(self.0 + k)
        }
    }
    /// Shift by a possibly infinite offset.
    pub fn offset_b(self, k: Bound) -> Bound {
        if self.is_inf() || k.is_inf() {
            Bound::INF
        } else {
            Bound::finite(self.0 + k.0)
        }
    }
    /// Does the index lie strictly below the bound?
    pub fn contains(self, i: i64) -> bool {
        self.is_inf() || i < self.0
    }
}

#[derive(Clone, PartialEq)]
pub struct Laurent1<R: Ring> {
    ring: R,
    /// True order lower bound; coefficients below are genuinely zero.
    lo: i64,
    /// Knowledge bound.
    hi: Bound,
    /// Known nonzero coefficients, keys in [lo, hi).
    coeffs: BTreeMap<i64, R::Elem>,
}

impl<R: Ring> fmt::Debug for Laurent1<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(i, c)| format!("{c:?}*t^{i}"))
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        if self.hi.is_inf() {
            write!(f, "{body}")
        } else {
            write!(f, "{body} + O(t^{})", self.hi.0)
        }
    }
}

impl<R: Ring> Laurent1<R> {
    /// The completely-known zero series.
    pub fn zero(ring: &R) -> Self {
        Laurent1 {
            ring: ring.clone(),
            lo: 0,
            hi: Bound::INF,
            coeffs: BTreeMap::new(),
        }
    }

    /// Exact series from terms (full knowledge).
    pub fn from_terms(ring: &R, terms: impl IntoIterator<Item = (i64, R::Elem)>) -> Self {
        let mut coeffs = BTreeMap::new();
        for (i, c) in terms {
            if !ring.is_zero(&c) {
                match coeffs.entry(i) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = ring.add(e.get(), &c);
                        if ring.is_zero(&s) {
                            e.remove();
                        } else {
                            e.insert(s);
                        }
                    }
                }
            }
        }
        let mut s = Laurent1 {
            ring: ring.clone(),
            lo: 0,
            hi: Bound::INF,
            coeffs,
        };
        s.normalize();
        s
    }

    /// Series known zero on [lo, hi) with nothing beyond.
    pub fn zero_window(ring: &R, hi: Bound) -> Self {
        let mut s = Laurent1 {
            ring: ring.clone(),
            lo: 0,
            hi,
            coeffs: BTreeMap::new(),
        };
        s.normalize();
        s
    }

    pub fn monomial(ring: &R, c: R::Elem, i: i64) -> Self {
        Self::from_terms(ring, [(i, c)])
    }

    fn normalize(&mut self) {
        self.coeffs.retain(|_, c| !self.ring.is_zero(c));
        match self.coeffs.keys().next() {
            Some(&m) => self.lo = m,
            None => {
                if !self.hi.is_inf() {
                    // zero on the whole window: true order is at least hi
                    self.lo = self.hi.0;
                }
                // fully-known zero: lo is irrelevant, keep 0
                else {
                    self.lo = 0;
                }
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn hi(&self) -> Bound {
        self.hi
    }
    /// True order bound as a Bound; infinite for the known-zero series.
    pub fn lo_bound(&self) -> Bound {
        if self.coeffs.is_empty() && self.hi.is_inf() {
            Bound::INF
        } else {
            Bound::finite(self.lo)
        }
    }
    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty() && self.hi.is_inf()
    }
    pub fn terms(&self) -> impl Iterator<Item = (i64, &R::Elem)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }
    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    /// Known coefficient at index i, or an error in the unknown region.
    pub fn coeff(&self, i: i64) -> Result<R::Elem> {
        if i < self.lo || self.hi.contains(i) {
            Ok(self
                .coeffs
                .get(&i)
                .cloned()
                .unwrap_or_else(|| self.ring.zero()))
        } else {
            Err(Error::InsufficientPrecision(format!(
                "t^{i} outside window (known below {:?})",
                self.hi
            )))
        }
    }

    /// Leading (order, coefficient); errors if the leading term is not
    /// determined, or with ZeroInput on the known-zero series.
    pub fn leading(&self) -> Result<(i64, R::Elem)> {
        match self.coeffs.iter().next() {
            Some((&i, c)) => Ok((i, c.clone())),
            None if self.hi.is_inf() => Err(Error::ZeroInput("leading term of zero".into())),
            None => Err(Error::InsufficientPrecision(
                "no nonzero term inside the window".into(),
            )),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let hi = self.hi.min(other.hi);
        let mut coeffs = BTreeMap::new();
        for (&i, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if !hi.contains(i) {
                continue;
            }
            let entry = coeffs.entry(i).or_insert_with(|| self.ring.zero());
            *entry = self.ring.add(entry, c);
        }
        let mut s = Laurent1 {
            ring: self.ring.clone(),
            lo: self.lo.min(other.lo),
            hi,
            coeffs,
        };
        s.normalize();
        s
    }

    pub fn neg(&self) -> Self {
        Laurent1 {
            ring: self.ring.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&i, c)| (i, self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let lo_a = self.lo_bound();
        let lo_b = other.lo_bound();
        if lo_a.is_inf() || lo_b.is_inf() {
            // a known-zero factor gives a known-zero product
            return Laurent1::zero(&self.ring);
        }
        let hi = self.hi.offset(lo_b.value()).min(other.hi.offset(lo_a.value()));
        let mut coeffs: BTreeMap<i64, R::Elem> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let k = i + j;
                if !hi.contains(k) {
                    continue;
                }
                let entry = coeffs.entry(k).or_insert_with(|| self.ring.zero());
                *entry = self.ring.add(entry, &self.ring.mul(a, b));
            }
        }
        let mut s = Laurent1 {
            ring: self.ring.clone(),
            lo: lo_a.value() + lo_b.value(),
            hi,
            coeffs,
        };
        s.normalize();
        s
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut s = Laurent1 {
            ring: self.ring.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&i, a)| (i, self.ring.mul(a, c)))
                .collect(),
        };
        s.normalize();
        s
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: i64) -> Self {
        Laurent1 {
            ring: self.ring.clone(),
            lo: self.lo + k,
            hi: self.hi.offset(k),
            coeffs: self.coeffs.iter().map(|(&i, c)| (i + k, c.clone())).collect(),
        }
    }

    /// d/dt.
    pub fn derivative(&self) -> Self {
        let mut s = Laurent1 {
            ring: self.ring.clone(),
            lo: self.lo - 1,
            hi: self.hi.offset(-1),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&i, c)| (i - 1, self.ring.mul_int(c, i)))
                .collect(),
        };
        s.normalize();
        s
    }

    /// Inverse. `terms_hint` bounds the output window when the input is
    /// fully known; otherwise the input window dictates it.
    pub fn inv(&self, terms_hint: i64) -> Result<Self> {
        let (v, c0) = self.leading()?;
        let c0_inv = self.ring.inv(&c0)?;
        let count = if self.hi.is_inf() {
            terms_hint
        } else {
            self.hi.value() - v
        };
        // unit part u = t^-v * self: u[0] = c0, solve u * w = 1
        let mut w: BTreeMap<i64, R::Elem> = BTreeMap::new();
        w.insert(0, c0_inv.clone());
        for k in 1..count {
            let mut acc = self.ring.zero();
            for (&i, a) in self.coeffs.range(v + 1..=v + k) {
                let j = k - (i - v);
                if let Some(b) = w.get(&j) {
                    acc = self.ring.add(&acc, &self.ring.mul(a, b));
                }
            }
            if !self.ring.is_zero(&acc) {
                w.insert(k, self.ring.neg(&self.ring.mul(&c0_inv, &acc)));
            }
        }
        let mut s = Laurent1 {
            ring: self.ring.clone(),
            lo: 0,
            hi: Bound::finite(count),
            coeffs: w,
        };
        s.normalize();
        Ok(s.shift(-v))
    }

    /// Restrict the window to indices below `hi`.
    pub fn truncate(&self, hi: Bound) -> Self {
        if hi >= self.hi {
            return self.clone();
        }
        let mut s = Laurent1 {
            ring: self.ring.clone(),
            lo: self.lo,
            hi,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&i, _)| hi.contains(i))
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        };
        s.normalize();
        s
    }

    /// Map coefficients into another ring (lift, reduce, embed).
    pub fn map_coeffs<S: Ring>(&self, ring: &S, mut f: impl FnMut(&R::Elem) -> S::Elem) -> Laurent1<S> {
        let mut s = Laurent1 {
            ring: ring.clone(),
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.iter().map(|(&i, c)| (i, f(c))).collect(),
        };
        s.normalize();
        s
    }

    /// Do two values agree wherever both are known?
    pub fn agrees_with(&self, other: &Self) -> bool {
        let hi = self.hi.min(other.hi);
        let lo = self.lo.min(other.lo);
        if hi.is_inf() {
            return self.coeffs == other.coeffs;
        }
        let mut i = lo;
        while hi.contains(i) {
            if self.coeff(i).unwrap() != other.coeff(i).unwrap() {
                return false;
            }
            i += 1;
        }
        true
    }
}
