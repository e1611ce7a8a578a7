//! Truncated iterated Laurent series K((t1))((t2)) with explicit
//! knowledge windows.
//!
//! A value knows: a true t2-order bound `lo2` (levels below are genuinely
//! zero), a knowledge bound `hi2` (levels at or above are unknown), and
//! for each known level a one-variable windowed series. A level inside
//! the window that is missing from the map is *identically zero and fully
//! known* — this is how exact polynomial data keeps infinite windows, so
//! cancellation of leading levels still yields determined valuations.
//!
//! Every operation computes output windows so that each reported
//! coefficient is fully determined by input data; outside the window is
//! an error, never a silent zero.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::laurent1::{Bound, Laurent1};
use crate::precision::Precision;
use crate::ring::Ring;

/// Two-dimensional valuation (v1, v2) = (t1-order of leading level, t2-order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Valuation2 {
    pub v1: i64,
    pub v2: i64,
}

impl Valuation2 {
    pub fn new(v1: i64, v2: i64) -> Self {
        Valuation2 { v1, v2 }
    }
    pub fn add(self, other: Valuation2) -> Valuation2 {
        Valuation2 {
            v1: self.v1 + other.v1,
            v2: self.v2 + other.v2,
        }
    }
    pub fn is_zero(self) -> bool {
        self.v1 == 0 && self.v2 == 0
    }
}

#[derive(Clone, PartialEq)]
pub struct Laurent2<R: Ring> {
    ring: R,
    lo2: i64,
    hi2: Bound,
    levels: BTreeMap<i64, Laurent1<R>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    T1,
    T2,
}

impl<R: Ring> fmt::Debug for Laurent2<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, level) in &self.levels {
            for (i, c) in level.terms() {
                parts.push(format!("{c:?}*t1^{i}*t2^{j}"));
            }
        }
        let body = if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        };
        if self.hi2.is_inf() {
            write!(f, "{body}")
        } else {
            write!(f, "{body} + O(t2^{})", self.hi2.value())
        }
    }
}

impl<R: Ring> Laurent2<R> {
    /// The completely-known zero series.
    pub fn zero(ring: &R) -> Self {
        Laurent2 {
            ring: ring.clone(),
            lo2: 0,
            hi2: Bound::INF,
            levels: BTreeMap::new(),
        }
    }

    pub fn one(ring: &R) -> Self {
        Self::monomial(ring, ring.one(), 0, 0)
    }

    /// Exact monomial c * t1^i * t2^j.
    pub fn monomial(ring: &R, c: R::Elem, i: i64, j: i64) -> Self {
        Self::from_terms(ring, [(i, j, c)])
    }

    pub fn constant(ring: &R, c: R::Elem) -> Self {
        Self::monomial(ring, c, 0, 0)
    }

    /// Exact series from (i, j, coefficient) terms; full knowledge.
    pub fn from_terms(ring: &R, terms: impl IntoIterator<Item = (i64, i64, R::Elem)>) -> Self {
        let mut by_level: BTreeMap<i64, Vec<(i64, R::Elem)>> = BTreeMap::new();
        for (i, j, c) in terms {
            by_level.entry(j).or_default().push((i, c));
        }
        let levels = by_level
            .into_iter()
            .map(|(j, terms)| (j, Laurent1::from_terms(ring, terms)))
            .collect();
        let mut s = Laurent2 {
            ring: ring.clone(),
            lo2: 0,
            hi2: Bound::INF,
            levels,
        };
        s.normalize();
        s
    }

    /// Assemble from explicit levels and windows (deserialization).
    pub fn from_levels(
        ring: &R,
        lo2: i64,
        hi2: Bound,
        levels: BTreeMap<i64, Laurent1<R>>,
    ) -> Self {
        let mut s = Laurent2 {
            ring: ring.clone(),
            lo2,
            hi2,
            levels,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.levels.retain(|_, l| !l.is_known_zero());
        if let Some((&first, _)) = self.levels.iter().next() {
            // levels between lo2 and the first stored key are implicit
            // zeros, so the canonical true bound is the first key itself
            self.lo2 = first;
        } else if !self.hi2.is_inf() {
            self.lo2 = self.hi2.value();
        } else {
            self.lo2 = 0;
        }
        debug_assert!(self.levels.keys().all(|&j| self.hi2.contains(j)));
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn lo2(&self) -> i64 {
        self.lo2
    }
    pub fn hi2(&self) -> Bound {
        self.hi2
    }
    pub fn levels(&self) -> &BTreeMap<i64, Laurent1<R>> {
        &self.levels
    }
    pub fn is_known_zero(&self) -> bool {
        self.levels.is_empty() && self.hi2.is_inf()
    }
    /// True t2-order as a bound; infinite for the known-zero series.
    pub fn lo2_bound(&self) -> Bound {
        if self.levels.is_empty() && self.hi2.is_inf() {
            Bound::INF
        } else {
            Bound::finite(self.lo2)
        }
    }
    pub fn term_count(&self) -> usize {
        self.levels.values().map(|l| l.term_count()).sum()
    }
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, &R::Elem)> {
        self.levels
            .iter()
            .flat_map(|(&j, l)| l.terms().map(move |(i, c)| (i, j, c)))
    }

    /// Known level as a series; `None` encodes a level known to be zero.
    fn level_ref(&self, j: i64) -> Result<Option<&Laurent1<R>>> {
        if j < self.lo2 {
            return Ok(None);
        }
        if self.hi2.contains(j) {
            Ok(self.levels.get(&j))
        } else {
            Err(Error::InsufficientPrecision(format!(
                "t2-level {j} outside window (known below {:?})",
                self.hi2
            )))
        }
    }

    /// Known level cloned, zero levels materialized.
    pub fn level(&self, j: i64) -> Result<Laurent1<R>> {
        Ok(self
            .level_ref(j)?
            .cloned()
            .unwrap_or_else(|| Laurent1::zero(&self.ring)))
    }

    /// Known coefficient at (t1^i, t2^j); error outside windows.
    pub fn coeff(&self, i: i64, j: i64) -> Result<R::Elem> {
        match self.level_ref(j)? {
            None => Ok(self.ring.zero()),
            Some(level) => level.coeff(i),
        }
    }

    /// Leading nonzero level. Skips levels only when they are known zero.
    fn leading_level(&self) -> Result<(i64, &Laurent1<R>)> {
        for (&j, level) in &self.levels {
            match level.leading() {
                Ok(_) => return Ok((j, level)),
                Err(Error::ZeroInput(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        if self.hi2.is_inf() {
            Err(Error::ZeroInput("valuation of the zero series".into()))
        } else {
            Err(Error::InsufficientPrecision(
                "no nonzero level inside the window".into(),
            ))
        }
    }

    /// (v1, v2): t2-order and the t1-order of the leading level.
    pub fn valuation(&self) -> Result<Valuation2> {
        let (j, level) = self.leading_level()?;
        let (i, _) = level.leading()?;
        Ok(Valuation2 { v1: i, v2: j })
    }

    /// Leading monomial coefficient (the coefficient at the valuation).
    pub fn leading_coeff(&self) -> Result<R::Elem> {
        let (_, level) = self.leading_level()?;
        Ok(level.leading()?.1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let hi2 = self.hi2.min(other.hi2);
        let mut levels: BTreeMap<i64, Laurent1<R>> = BTreeMap::new();
        for (&j, level) in self.levels.iter().chain(other.levels.iter()) {
            if !hi2.contains(j) {
                continue;
            }
            match levels.entry(j) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(level.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(level);
                    e.insert(s);
                }
            }
        }
        let mut s = Laurent2 {
            ring: self.ring.clone(),
            lo2: self.lo2.min(other.lo2),
            hi2,
            levels,
        };
        s.normalize();
        s
    }

    pub fn neg(&self) -> Self {
        Laurent2 {
            ring: self.ring.clone(),
            lo2: self.lo2,
            hi2: self.hi2,
            levels: self.levels.iter().map(|(&j, l)| (j, l.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let lo_a = self.lo2_bound();
        let lo_b = other.lo2_bound();
        if lo_a.is_inf() || lo_b.is_inf() {
            return Laurent2::zero(&self.ring);
        }
        let hi2 = self
            .hi2
            .offset(lo_b.value())
            .min(other.hi2.offset(lo_a.value()));
        let mut levels: BTreeMap<i64, Laurent1<R>> = BTreeMap::new();
        for (&j1, l1) in &self.levels {
            for (&j2, l2) in &other.levels {
                let l = j1 + j2;
                if !hi2.contains(l) {
                    continue;
                }
                let prod = l1.mul(l2);
                match levels.entry(l) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get().add(&prod);
                        e.insert(s);
                    }
                }
            }
        }
        let mut s = Laurent2 {
            ring: self.ring.clone(),
            lo2: lo_a.value() + lo_b.value(),
            hi2,
            levels,
        };
        s.normalize();
        s
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut s = Laurent2 {
            ring: self.ring.clone(),
            lo2: self.lo2,
            hi2: self.hi2,
            levels: self.levels.iter().map(|(&j, l)| (j, l.scale(c))).collect(),
        };
        s.normalize();
        s
    }

    /// Multiply by t1^a * t2^b.
    pub fn shift(&self, a: i64, b: i64) -> Self {
        Laurent2 {
            ring: self.ring.clone(),
            lo2: self.lo2 + b,
            hi2: self.hi2.offset(b),
            levels: self
                .levels
                .iter()
                .map(|(&j, l)| (j + b, l.shift(a)))
                .collect(),
        }
    }

    /// Multiplicative inverse on the guaranteed window. The leading level
    /// is inverted as a one-variable series and the rest follows by the
    /// triangular recursion h_k = -h_0 * sum_{i=1..k} f_i h_{k-i}.
    pub fn inv(&self, prec: &Precision) -> Result<Self> {
        let (j0, _) = self.leading_level()?;
        let count = if self.hi2.is_inf() {
            prec.t2
        } else {
            self.hi2.value() - j0
        };
        let f_level = |k: i64| -> Result<Laurent1<R>> { self.level(j0 + k) };
        let mut h: Vec<Laurent1<R>> = Vec::with_capacity(count as usize);
        h.push(f_level(0)?.inv(prec.t1)?);
        for k in 1..count {
            let mut acc: Option<Laurent1<R>> = None;
            for i in 1..=k {
                let fi = f_level(i)?;
                if fi.is_known_zero() {
                    continue;
                }
                let term = fi.mul(&h[(k - i) as usize]);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add(&term),
                });
            }
            let next = match acc {
                None => Laurent1::zero(&self.ring),
                Some(a) => h[0].mul(&a).neg(),
            };
            h.push(next);
        }
        let levels: BTreeMap<i64, Laurent1<R>> = h
            .into_iter()
            .enumerate()
            .map(|(k, l)| (-j0 + k as i64, l))
            .collect();
        let mut s = Laurent2 {
            ring: self.ring.clone(),
            lo2: -j0,
            hi2: Bound::finite(-j0 + count),
            levels,
        };
        s.normalize();
        Ok(s)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64, prec: &Precision) -> Result<Self> {
        let base = if e < 0 { self.inv(prec)? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut result = Laurent2::one(&self.ring);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(result)
    }

    pub fn derivative(&self, axis: Axis) -> Self {
        match axis {
            Axis::T1 => {
                let mut s = Laurent2 {
                    ring: self.ring.clone(),
                    lo2: self.lo2,
                    hi2: self.hi2,
                    levels: self
                        .levels
                        .iter()
                        .map(|(&j, l)| (j, l.derivative()))
                        .collect(),
                };
                s.normalize();
                s
            }
            Axis::T2 => {
                let mut s = Laurent2 {
                    ring: self.ring.clone(),
                    lo2: self.lo2 - 1,
                    hi2: self.hi2.offset(-1),
                    levels: self
                        .levels
                        .iter()
                        .map(|(&j, l)| (j - 1, l.scale(&self.ring.from_int(j))))
                        .collect(),
                };
                s.normalize();
                s
            }
        }
    }

    /// Intersect with a rectangle: per-level t1 window below `t1_hi`,
    /// levels below `t2_hi`.
    pub fn truncate(&self, t1_hi: Bound, t2_hi: Bound) -> Self {
        let hi2 = self.hi2.min(t2_hi);
        let mut s = Laurent2 {
            ring: self.ring.clone(),
            lo2: self.lo2,
            hi2,
            levels: self
                .levels
                .iter()
                .filter(|(&j, _)| hi2.contains(j))
                .map(|(&j, l)| (j, l.truncate(t1_hi)))
                .collect(),
        };
        s.normalize();
        s
    }

    pub fn map_coeffs<S: Ring>(&self, ring: &S, mut f: impl FnMut(&R::Elem) -> S::Elem) -> Laurent2<S> {
        let mut s = Laurent2 {
            ring: ring.clone(),
            lo2: self.lo2,
            hi2: self.hi2,
            levels: self
                .levels
                .iter()
                .map(|(&j, l)| (j, l.map_coeffs(ring, &mut f)))
                .collect(),
        };
        s.normalize();
        s
    }

    /// Do two values agree wherever both are known?
    pub fn agrees_with(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<i64> = self
            .levels
            .keys()
            .chain(other.levels.keys())
            .copied()
            .collect();
        for j in keys {
            if !self.hi2.contains(j) || !other.hi2.contains(j) {
                continue;
            }
            let a = self.level(j).unwrap();
            let b = other.level(j).unwrap();
            if !a.agrees_with(&b) {
                return false;
            }
        }
        true
    }

    /// Substitute t1 -> s1, t2 -> s2 for an admissible parameter change:
    /// v(s1) = (1, 0) and v2(s2) >= 1.
    pub fn substitute(&self, s1: &Self, s2: &Self, prec: &Precision) -> Result<Self> {
        let v1 = s1.valuation()?;
        if v1.v1 != 1 || v1.v2 != 0 {
            return Err(Error::InvalidParameterChange(format!(
                "first parameter has valuation ({}, {}), need (1, 0)",
                v1.v1, v1.v2
            )));
        }
        let v2 = s2.valuation()?;
        if v2.v2 < 1 {
            return Err(Error::InvalidParameterChange(format!(
                "second parameter has t2-order {}, need >= 1",
                v2.v2
            )));
        }

        let mut pows1 = PowerCache::new(s1, prec);
        let mut pows2 = PowerCache::new(s2, prec);

        let mut acc = Laurent2::zero(&self.ring);
        for (&j, level) in &self.levels {
            let s2j = pows2.get(j)?;
            let mut level_img = Laurent2::zero(&self.ring);
            for (i, c) in level.terms() {
                level_img = level_img.add(&pows1.get(i)?.scale(c));
            }
            acc = acc.add(&level_img.mul(&s2j));
        }

        // Unknown tails: each finite level window [.., hi) hides terms
        // t1^(>=hi) t2^j whose images start at s1^hi s2^j times further
        // s1-support; cap the result windows accordingly.
        let slope = s1_tail_slope(s1);
        for (&j, level) in &self.levels {
            if level.hi().is_inf() {
                continue;
            }
            let marker = pows1.get(level.hi().value())?.mul(&pows2.get(j)?);
            acc = apply_support_kill(&acc, &marker, slope);
        }
        if !self.hi2.is_inf() {
            // whole levels >= hi2 are unknown; their images live in
            // t2-order >= hi2 * v2(s2)
            acc = acc.truncate(Bound::INF, Bound::finite(self.hi2.value() * v2.v2));
        }
        Ok(acc)
    }
}

/// Most negative t1-per-t2 slope of the support of extra s1 factors,
/// as a rational (num, den); None when s1 has no terms above level 0
/// (then tails cannot reach higher t2-levels).
fn s1_tail_slope<R: Ring>(s1: &Laurent2<R>) -> Option<(i64, i64)> {
    let mut best: Option<(i64, i64)> = None;
    for (&j, level) in s1.levels() {
        if j <= 0 {
            continue;
        }
        let lo = match level.lo_bound() {
            b if b.is_inf() => continue,
            b => b.value(),
        };
        best = Some(match best {
            None => (lo, j),
            Some((bn, bd)) => {
                // compare lo/j < bn/bd  <=>  lo*bd < bn*j (denominators > 0)
                if lo * bd < bn * j {
                    (lo, j)
                } else {
                    (bn, bd)
                }
            }
        });
    }
    best
}

/// Intersect `value`'s windows with the complement of the possible
/// support of unknown terms whose images are `marker * (s1-tail)^k`.
fn apply_support_kill<R: Ring>(
    value: &Laurent2<R>,
    marker: &Laurent2<R>,
    slope: Option<(i64, i64)>,
) -> Laurent2<R> {
    let mut out_levels: BTreeMap<i64, Laurent1<R>> = BTreeMap::new();
    let mut out_hi2 = value.hi2();
    // beyond the marker's own knowledge we cannot bound its support
    out_hi2 = out_hi2.min(marker.hi2());
    let value_hi2 = out_hi2;
    for (&l, level) in value.levels() {
        if !value_hi2.contains(l) {
            continue;
        }
        // lowest possible t1-order of tail images at output level l
        let mut bound = Bound::INF;
        for (&l1, mlevel) in marker.levels() {
            if l1 > l {
                break;
            }
            let mlo = mlevel.lo_bound();
            if mlo.is_inf() {
                continue;
            }
            let d = l - l1;
            let extra = if d == 0 {
                0
            } else {
                match slope {
                    None => continue, // tails cannot climb levels
                    Some((num, den)) => {
                        if num >= 0 {
                            0
                        } else {
                            // ceil(num * d / den), den > 0
                            -((-num * d).div_euclid(den))
                        }
                    }
                }
            };
            bound = bound.min(Bound::finite(mlo.value() + extra));
        }
        out_levels.insert(l, level.truncate(bound));
    }
    Laurent2::from_levels(value.ring(), value.lo2(), out_hi2, out_levels)
}

/// Cache of integer powers of a fixed series.
struct PowerCache<'a, R: Ring> {
    base: &'a Laurent2<R>,
    prec: Precision,
    pos: Vec<Laurent2<R>>,
    neg: Vec<Laurent2<R>>,
    base_inv: Option<Laurent2<R>>,
}

impl<'a, R: Ring> PowerCache<'a, R> {
    fn new(base: &'a Laurent2<R>, prec: &Precision) -> Self {
        PowerCache {
            base,
            prec: *prec,
            pos: vec![Laurent2::one(base.ring())],
            neg: Vec::new(),
            base_inv: None,
        }
    }

    fn get(&mut self, e: i64) -> Result<Laurent2<R>> {
        if e >= 0 {
            let e = e as usize;
            while self.pos.len() <= e {
                let next = self.pos.last().unwrap().mul(self.base);
                self.pos.push(next);
            }
            Ok(self.pos[e].clone())
        } else {
            if self.base_inv.is_none() {
                self.base_inv = Some(self.base.inv(&self.prec)?);
            }
            let k = (-e) as usize;
            if self.neg.is_empty() {
                self.neg.push(self.base_inv.clone().unwrap());
            }
            while self.neg.len() < k {
                let next = self.neg.last().unwrap().mul(self.base_inv.as_ref().unwrap());
                self.neg.push(next);
            }
            Ok(self.neg[k - 1].clone())
        }
    }
}

// ---- text and JSON forms over finite-field coefficients ----

use crate::fq::{Fq, FqElem};

pub type FqSeries = Laurent2<Fq>;
pub type GrSeries = Laurent2<crate::galois_ring::GaloisRing>;

impl fmt::Display for FqSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, j, c) in self.terms() {
            let mut factors = vec![format!("{c}")];
            if i != 0 {
                factors.push(if i == 1 { "t1".into() } else { format!("t1^{i}") });
            }
            if j != 0 {
                factors.push(if j == 1 { "t2".into() } else { format!("t2^{j}") });
            }
            parts.push(factors.join("*"));
        }
        if parts.is_empty() {
            write!(f, "0")?;
        } else {
            write!(f, "{}", parts.join(" + "))?;
        }
        if !self.hi2().is_inf() {
            write!(f, " + O(t2^{})", self.hi2().value())?;
        }
        Ok(())
    }
}

/// Parse the sparse text form, e.g. `2*t1^-1*t2^-1 + t1*t2^2` or
/// `[1,1]*t1^2 - t2`. The result is exact (infinite windows).
pub fn parse_series(field: &Fq, input: &str) -> Result<FqSeries> {
    // split into terms at top-level '+'/'-', where '-' directly after '^'
    // is an exponent sign, not a separator
    let mut raw_terms: Vec<String> = Vec::new();
    let mut cur = String::new();
    let mut prev_sig: Option<char> = None;
    let mut depth = 0i32;
    for ch in input.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ => {}
        }
        let is_sep = (ch == '+' || ch == '-') && prev_sig != Some('^') && depth == 0;
        if is_sep {
            if !cur.trim().is_empty() {
                raw_terms.push(std::mem::take(&mut cur));
            } else {
                cur.clear();
            }
            if ch == '-' {
                cur.push('-');
            }
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev_sig = Some(ch);
        }
    }
    if !cur.trim().is_empty() {
        raw_terms.push(cur);
    }
    let mut terms: Vec<(i64, i64, FqElem)> = Vec::new();
    for raw in &raw_terms {
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let (raw, negate) = match raw.strip_prefix('-') {
            Some(rest) => (rest.trim(), true),
            None => (raw, false),
        };
        if raw.is_empty() {
            return Err(Error::Parse("dangling sign".into()));
        }
        let mut coeff = field.one();
        let mut e1 = 0i64;
        let mut e2 = 0i64;
        for factor in raw.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(Error::Parse(format!("empty factor in term '{raw}'")));
            }
            if let Some(rest) = factor.strip_prefix("t1") {
                e1 += parse_exponent(rest)?;
            } else if let Some(rest) = factor.strip_prefix("t2") {
                e2 += parse_exponent(rest)?;
            } else if factor.starts_with('[') {
                let inner = factor
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| Error::Parse(format!("bad coefficient '{factor}'")))?;
                let digits: Vec<u64> = inner
                    .split(',')
                    .map(|d| {
                        d.trim()
                            .parse::<i64>()
                            .map(|v| v.rem_euclid(field.p() as i64) as u64)
                            .map_err(|_| Error::Parse(format!("bad digit '{d}'")))
                    })
                    .collect::<Result<_>>()?;
                coeff = coeff.mul(&field.from_coeffs(&digits)?);
            } else {
                let v: i64 = factor
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad factor '{factor}'")))?;
                coeff = coeff.mul(&field.from_int(v));
            }
        }
        if negate {
            coeff = coeff.neg();
        }
        terms.push((e1, e2, coeff));
    }
    Ok(Laurent2::from_terms(field, terms))
}

fn parse_exponent(rest: &str) -> Result<i64> {
    if rest.is_empty() {
        return Ok(1);
    }
    rest.strip_prefix('^')
        .and_then(|e| e.parse::<i64>().ok())
        .ok_or_else(|| Error::Parse(format!("bad exponent '{rest}'")))
}

impl FqSeries {
    /// JSON mirror: {"terms":[[i,j,[digits]]],"t2_window":[lo,hi|null],
    /// "t1_windows":{"j":[lo,hi|null]}}.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        let bound_json = |b: Bound| -> Value {
            if b.is_inf() {
                Value::Null
            } else {
                json!(b.value())
            }
        };
        let terms: Vec<Value> = self
            .terms()
            .map(|(i, j, c)| json!([i, j, c.coeffs()]))
            .collect();
        let mut t1_windows = serde_json::Map::new();
        for (&j, level) in self.levels() {
            t1_windows.insert(
                j.to_string(),
                json!([level.lo_bound().value(), bound_json(level.hi())]),
            );
        }
        json!({
            "terms": terms,
            "t2_window": [self.lo2(), bound_json(self.hi2())],
            "t1_windows": t1_windows,
        })
    }

    pub fn from_json(field: &Fq, v: &serde_json::Value) -> Result<FqSeries> {
        let bad = |m: &str| Error::Parse(format!("series json: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("not an object"))?;
        let terms = obj
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| bad("missing terms"))?;
        let mut parsed: Vec<(i64, i64, FqElem)> = Vec::new();
        for t in terms {
            let triple = t.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("term shape"))?;
            let i = triple[0].as_i64().ok_or_else(|| bad("term i"))?;
            let j = triple[1].as_i64().ok_or_else(|| bad("term j"))?;
            let digits: Vec<u64> = triple[2]
                .as_array()
                .ok_or_else(|| bad("term coeff"))?
                .iter()
                .map(|d| d.as_u64().ok_or_else(|| bad("coeff digit")))
                .collect::<Result<_>>()?;
            parsed.push((i, j, field.from_coeffs(&digits)?));
        }
        let mut series = Laurent2::from_terms(field, parsed);
        if let Some(win) = obj.get("t2_window").and_then(|w| w.as_array()) {
            let hi = match win.get(1) {
                Some(serde_json::Value::Null) | None => Bound::INF,
                Some(x) => Bound::finite(x.as_i64().ok_or_else(|| bad("t2 hi"))?),
            };
            series = series.truncate(Bound::INF, hi);
        }
        if let Some(wins) = obj.get("t1_windows").and_then(|w| w.as_object()) {
            let mut hi1 = Bound::INF;
            for (_, w) in wins {
                if let Some(x) = w.as_array().and_then(|a| a.get(1)).and_then(|x| x.as_i64()) {
                    hi1 = hi1.min(Bound::finite(x));
                }
            }
            series = series.truncate(hi1, Bound::INF);
        }
        Ok(series)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> Fq {
        Fq::make(5, 1).unwrap()
    }

    fn random_series(field: &Fq, rng: &mut ChaCha8Rng, max_pole: i64, nterms: usize) -> FqSeries {
        let terms: Vec<(i64, i64, crate::fq::FqElem)> = (0..nterms)
            .map(|_| {
                (
                    rng.gen_range(-max_pole..=max_pole),
                    rng.gen_range(-max_pole..=max_pole),
                    field.sample(rng),
                )
            })
            .collect();
        Laurent2::from_terms(field, terms)
    }

    fn random_nonzero(field: &Fq, rng: &mut ChaCha8Rng, max_pole: i64, nterms: usize) -> FqSeries {
        loop {
            let s = random_series(field, rng, max_pole, nterms);
            if !s.is_known_zero() {
                return s;
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let f = f5();
        let s = parse_series(&f, "2*t1^-1*t2^-1 + t1*t2^2").unwrap();
        assert_eq!(s.coeff(-1, -1).unwrap(), f.from_int(2));
        assert_eq!(s.coeff(1, 2).unwrap(), f.one());
        assert!(s.coeff(7, 9).unwrap().is_zero());
        let round = parse_series(&f, &s.to_string()).unwrap();
        assert_eq!(round, s);
        // subtraction and bracket coefficients
        let f4 = Fq::make(2, 2).unwrap();
        let t = parse_series(&f4, "[0,1]*t1 - t2").unwrap();
        assert_eq!(t.coeff(1, 0).unwrap(), f4.gen());
        assert_eq!(t.coeff(0, 1).unwrap(), f4.one()); // -1 = 1 over GF(4)
    }

    #[test]
    fn add_examples() {
        let f = f5();
        let t1 = parse_series(&f, "t1").unwrap();
        let t2 = parse_series(&f, "t2").unwrap();
        let s = t1.add(&t2).add(&t1.neg());
        assert_eq!(s, t2);
        // round trip with random values
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..30 {
            let a = random_series(&f, &mut rng, 4, 6);
            let b = random_series(&f, &mut rng, 4, 6);
            assert_eq!(a.add(&b).sub(&b), a);
        }
    }

    #[test]
    fn mul_examples() {
        let f = f5();
        let a = parse_series(&f, "t1^-1*t2").unwrap();
        let b = parse_series(&f, "t1*t2^2").unwrap();
        assert_eq!(a.mul(&b), parse_series(&f, "t2^3").unwrap());
        let one = FqSeries::one(&f);
        let g = parse_series(&f, "3*t1^-2 + t2").unwrap();
        assert_eq!(g.mul(&one), g);
    }

    #[test]
    fn valuation_examples() {
        let f = f5();
        let s = parse_series(&f, "t1^-2*t2^3 + t1^5*t2^4").unwrap();
        assert_eq!(s.valuation().unwrap(), Valuation2::new(-2, 3));
        let c = parse_series(&f, "3").unwrap();
        assert_eq!(c.valuation().unwrap(), Valuation2::new(0, 0));
        assert!(matches!(
            FqSeries::zero(&f).valuation(),
            Err(Error::ZeroInput(_))
        ));
    }

    #[test]
    fn valuation_additivity_random() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..50 {
            let a = random_nonzero(&f, &mut rng, 3, 4);
            let b = random_nonzero(&f, &mut rng, 3, 4);
            let va = a.valuation().unwrap();
            let vb = b.valuation().unwrap();
            assert_eq!(a.mul(&b).valuation().unwrap(), va.add(vb));
        }
    }

    #[test]
    fn leading_level_cancellation_is_determined_for_exact_data() {
        let f = f5();
        let a = parse_series(&f, "t2 + t1*t2^2").unwrap();
        let b = parse_series(&f, "-t2").unwrap();
        let s = a.add(&b);
        // level 1 cancels completely; exact data knows it is zero
        assert_eq!(s.valuation().unwrap(), Valuation2::new(1, 2));
    }

    #[test]
    fn geometric_inverse() {
        let f = f5();
        let prec = Precision::new(8, 8);
        let s = parse_series(&f, "1 - t2").unwrap();
        let inv = s.inv(&prec).unwrap();
        for j in 0..8 {
            assert_eq!(inv.coeff(0, j).unwrap(), f.one());
        }
        assert!(inv.coeff(0, 8).is_err());
    }

    #[test]
    fn iterated_inverse_t1_plus_t2() {
        let f = f5();
        let prec = Precision::new(8, 6);
        let s = parse_series(&f, "t1 + t2").unwrap();
        let inv = s.inv(&prec).unwrap();
        // t1^-1 - t1^-2 t2 + t1^-3 t2^2 - ...
        assert_eq!(inv.coeff(-1, 0).unwrap(), f.one());
        assert_eq!(inv.coeff(-2, 1).unwrap(), f.from_int(-1));
        assert_eq!(inv.coeff(-3, 2).unwrap(), f.one());
        // product is 1 on the window
        let prod = s.mul(&inv);
        assert_eq!(prod.coeff(0, 0).unwrap(), f.one());
        for j in 1..4 {
            assert!(prod.coeff(-j, j).unwrap().is_zero());
        }
    }

    #[test]
    fn inverse_round_trip_random() {
        let f4 = Fq::make(2, 2).unwrap();
        let prec = Precision::new(12, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..25 {
            let s = random_nonzero(&f4, &mut rng, 2, 5);
            let inv = s.inv(&prec).unwrap();
            let prod = s.mul(&inv);
            assert_eq!(prod.coeff(0, 0).unwrap(), f4.one());
            let hi = prod.hi2();
            let mut j = prod.lo2();
            while hi.contains(j) && j < prod.lo2() + 6 {
                let level = prod.level(j).unwrap();
                for (i, c) in level.terms() {
                    assert!(
                        i == 0 && j == 0 && c.is_one(),
                        "extra term at ({i},{j}): {c:?}"
                    );
                }
                j += 1;
            }
        }
    }

    #[test]
    fn derivative_rules() {
        let f = f5();
        // d/dt1 of t1^5 = 0 over F_5
        let s = parse_series(&f, "t1^5").unwrap();
        assert!(s.derivative(Axis::T1).is_known_zero());
        // d/dt2 of t1^2 t2^3 = 3 t1^2 t2^2
        let u = parse_series(&f, "t1^2*t2^3").unwrap();
        assert_eq!(
            u.derivative(Axis::T2),
            parse_series(&f, "3*t1^2*t2^2").unwrap()
        );
        // Leibniz on random inputs
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..30 {
            let a = random_series(&f, &mut rng, 3, 4);
            let b = random_series(&f, &mut rng, 3, 4);
            for axis in [Axis::T1, Axis::T2] {
                let lhs = a.mul(&b).derivative(axis);
                let rhs = a.derivative(axis).mul(&b).add(&a.mul(&b.derivative(axis)));
                assert!(lhs.agrees_with(&rhs));
            }
        }
    }

    #[test]
    fn substitute_identity_and_shift() {
        let f = f5();
        let prec = Precision::default();
        let t1 = parse_series(&f, "t1").unwrap();
        let t2 = parse_series(&f, "t2").unwrap();
        let s = parse_series(&f, "2*t1^-1*t2^-1 + t1*t2^2").unwrap();
        let id = s.substitute(&t1, &t2, &prec).unwrap();
        assert!(id.agrees_with(&s));
        // t1 -> t1 + t1^2 applied to t1^-1
        let sub1 = parse_series(&f, "t1 + t1^2").unwrap();
        let inv_t1 = parse_series(&f, "t1^-1").unwrap();
        let img = inv_t1.substitute(&sub1, &t2, &prec).unwrap();
        assert_eq!(img.coeff(-1, 0).unwrap(), f.one());
        assert_eq!(img.coeff(0, 0).unwrap(), f.from_int(-1));
        assert_eq!(img.coeff(1, 0).unwrap(), f.one());
        // multiplying back recovers 1
        let back = img.mul(&sub1);
        assert_eq!(back.coeff(0, 0).unwrap(), f.one());
        assert!(back.coeff(1, 0).unwrap().is_zero());
    }

    #[test]
    fn substitute_unit_scaling_keeps_valuation() {
        let f = f5();
        let prec = Precision::default();
        let t1 = parse_series(&f, "t1").unwrap();
        let s2 = parse_series(&f, "2*t2").unwrap(); // unit * t2
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..20 {
            let s = random_nonzero(&f, &mut rng, 3, 4);
            let img = s.substitute(&t1, &s2, &prec).unwrap();
            assert_eq!(img.valuation().unwrap(), s.valuation().unwrap());
        }
    }

    #[test]
    fn substitute_rejects_bad_parameters() {
        let f = f5();
        let prec = Precision::default();
        let s = parse_series(&f, "t1").unwrap();
        let t1 = parse_series(&f, "t1").unwrap();
        let t2 = parse_series(&f, "t2").unwrap();
        let bad1 = parse_series(&f, "t1^2").unwrap(); // v = (2, 0)
        assert!(matches!(
            s.substitute(&bad1, &t2, &prec),
            Err(Error::InvalidParameterChange(_))
        ));
        // v2 = 0 in the second slot
        assert!(matches!(
            s.substitute(&t1, &t1, &prec),
            Err(Error::InvalidParameterChange(_))
        ));
    }

    #[test]
    fn ring_axioms_random() {
        for field in [Fq::make(5, 1).unwrap(), Fq::make(2, 2).unwrap()] {
            let mut rng = ChaCha8Rng::seed_from_u64(36);
            for _ in 0..25 {
                let a = random_series(&field, &mut rng, 3, 4);
                let b = random_series(&field, &mut rng, 3, 4);
                let c = random_series(&field, &mut rng, 3, 4);
                assert!(a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c))));
                assert!(a
                    .mul(&b.add(&c))
                    .agrees_with(&a.mul(&b).add(&a.mul(&c))));
                assert!(a.mul(&b).agrees_with(&b.mul(&a)));
            }
        }
    }

    #[test]
    fn window_monotonicity() {
        // any coefficient reported at small windows must be reproduced
        // when inputs carry strictly larger windows
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let small = Precision::new(6, 4);
        let big = Precision::new(12, 8);
        for _ in 0..20 {
            let a = random_nonzero(&f, &mut rng, 2, 5);
            let b = random_nonzero(&f, &mut rng, 2, 5);
            let a_small = a.truncate(Bound::finite(small.t1), Bound::finite(small.t2));
            let b_small = b.truncate(Bound::finite(small.t1), Bound::finite(small.t2));
            let a_big = a.truncate(Bound::finite(big.t1), Bound::finite(big.t2));
            let b_big = b.truncate(Bound::finite(big.t1), Bound::finite(big.t2));
            assert!(a_small.mul(&b_small).agrees_with(&a_big.mul(&b_big)));
            assert!(a_small.add(&b_small).agrees_with(&a_big.add(&b_big)));
            let inv_small = a_small.inv(&small);
            let inv_big = a_big.inv(&big);
            if let (Ok(x), Ok(y)) = (inv_small, inv_big) {
                assert!(x.agrees_with(&y));
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = f5();
        let s = parse_series(&f, "2*t1^-1*t2^-1 + t1*t2^2")
            .unwrap()
            .truncate(Bound::finite(10), Bound::finite(5));
        let j = s.to_json();
        let back = FqSeries::from_json(&f, &j).unwrap();
        assert_eq!(back, s);
    }
}
