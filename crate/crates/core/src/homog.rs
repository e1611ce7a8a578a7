//! Homogeneous polynomials in (X, Y, Z) over GF(p^n), their affine
//! dehomogenizations, and factorization into irreducible forms.
//!
//! Factorization strips the coordinate factors, then finds factors by
//! trial division against normalized forms of degree 1, 2, 3 in turn
//! (a split of a form of degree <= 6 always contains a factor of degree
//! <= 3). Results are cached per polynomial.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::poly::Poly;

pub const VARS: [char; 3] = ['X', 'Y', 'Z'];

/// A homogeneous polynomial; all exponent triples sum to `degree`.
#[derive(Clone, PartialEq)]
pub struct HPoly {
    field: Fq,
    degree: usize,
    terms: BTreeMap<[u16; 3], FqElem>,
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

impl HPoly {
    pub fn zero(field: &Fq, degree: usize) -> HPoly {
        HPoly {
            field: field.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        field: &Fq,
        degree: usize,
        terms: impl IntoIterator<Item = ([u16; 3], FqElem)>,
    ) -> Result<HPoly> {
        let mut map: BTreeMap<[u16; 3], FqElem> = BTreeMap::new();
        for (e, c) in terms {
            if (e[0] + e[1] + e[2]) as usize != degree {
                return Err(Error::InvalidInput(format!(
                    "term X^{}Y^{}Z^{} is not of degree {degree}",
                    e[0], e[1], e[2]
                )));
            }
            let entry = map.entry(e).or_insert_with(|| field.zero());
            *entry = entry.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(HPoly {
            field: field.clone(),
            degree,
            terms: map,
        })
    }

    pub fn monomial(field: &Fq, c: FqElem, e: [u16; 3]) -> HPoly {
        let degree = (e[0] + e[1] + e[2]) as usize;
        HPoly::from_terms(field, degree, [(e, c)]).unwrap()
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&[u16; 3], &FqElem)> {
        self.terms.iter()
    }
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Leading coefficient in the exponent-tuple order.
    pub fn leading(&self) -> Option<&FqElem> {
        self.terms.values().next_back()
    }

    pub fn text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            if !c.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(format!("{c}"));
            }
            for (v, &exp) in VARS.iter().zip(e.iter()) {
                match exp {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{exp}")),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    pub fn add(&self, other: &HPoly) -> Result<HPoly> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::InvalidInput(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        HPoly::from_terms(
            &self.field,
            self.degree,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(&e, c)| (e, c.clone())),
        )
    }

    pub fn neg(&self) -> HPoly {
        HPoly {
            field: self.field.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(&e, c)| (e, c.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &FqElem) -> HPoly {
        let mut out = HPoly {
            field: self.field.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(&e, a)| (e, a.mul(c))).collect(),
        };
        out.terms.retain(|_, a| !a.is_zero());
        out
    }

    pub fn mul(&self, other: &HPoly) -> HPoly {
        let mut map: BTreeMap<[u16; 3], FqElem> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]];
                let entry = map.entry(e).or_insert_with(|| self.field.zero());
                *entry = entry.add(&c1.mul(c2));
            }
        }
        map.retain(|_, c| !c.is_zero());
        HPoly {
            field: self.field.clone(),
            degree: self.degree + other.degree,
            terms: map,
        }
    }

    /// Evaluate at projective coordinates over an extension field.
    pub fn eval_ext(&self, big: &Fq, coords: &[FqElem; 3]) -> Result<FqElem> {
        let emb = crate::fq::Embedding::new(&self.field, big)?;
        let mut acc = big.zero();
        for (e, c) in &self.terms {
            let mut term = emb.apply(c);
            for (k, &exp) in e.iter().enumerate() {
                term = term.mul(&coords[k].pow(exp as i64)?);
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn partial(&self, var: usize) -> HPoly {
        if self.degree == 0 {
            return HPoly::zero(&self.field, 0);
        }
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let coeff = c.mul_int(e[var] as i64);
            if coeff.is_zero() {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            map.insert(ne, coeff);
        }
        HPoly {
            field: self.field.clone(),
            degree: self.degree - 1,
            terms: map,
        }
    }

    /// Normalize so the leading coefficient (exponent-tuple order) is 1.
    pub fn normalize(&self) -> HPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().unwrap()),
        }
    }

    /// Exact division; None when the divisor does not divide.
    pub fn div_exact(&self, g: &HPoly) -> Option<HPoly> {
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(HPoly::zero(&self.field, 0));
        }
        if self.degree < g.degree {
            return None;
        }
        let g_lead = g.terms.iter().next_back().unwrap();
        let g_lc_inv = g_lead.1.inv().unwrap();
        let mut rem = self.clone();
        let mut quo: BTreeMap<[u16; 3], FqElem> = BTreeMap::new();
        while let Some((&e, c)) = rem.terms.iter().next_back() {
            let ge = g_lead.0;
            if e[0] < ge[0] || e[1] < ge[1] || e[2] < ge[2] {
                return None;
            }
            let qe = [e[0] - ge[0], e[1] - ge[1], e[2] - ge[2]];
            let qc = c.mul(&g_lc_inv);
            let piece = HPoly::monomial(&self.field, qc.clone(), qe);
            rem = rem.add(&piece.mul(g).neg()).ok()?;
            quo.insert(qe, qc);
        }
        Some(HPoly {
            field: self.field.clone(),
            degree: self.degree - g.degree,
            terms: quo,
        })
    }

    /// Multiplicity of the (irreducible) factor g in self.
    pub fn multiplicity_of(&self, g: &HPoly) -> usize {
        let mut f = self.clone();
        let mut k = 0;
        while let Some(q) = f.div_exact(g) {
            k += 1;
            f = q;
            if f.degree == 0 {
                break;
            }
        }
        k
    }

    /// Dehomogenize on the chart where coordinate `chart` equals 1.
    /// Variable order on the chart: the two remaining coordinates in
    /// (X, Y, Z) order.
    pub fn dehomogenize(&self, chart: usize) -> Poly2 {
        let others: Vec<usize> = (0..3).filter(|&k| k != chart).collect();
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let key = [e[others[0]], e[others[1]]];
            let entry: &mut FqElem = terms.entry(key).or_insert_with(|| self.field.zero());
            *entry = entry.add(c);
        }
        terms.retain(|_, c: &mut FqElem| !c.is_zero());
        Poly2 {
            field: self.field.clone(),
            terms,
        }
    }

    /// Irreducible factors with multiplicities, normalized, sorted.
    pub fn factor(&self) -> Vec<(HPoly, usize)> {
        assert!(!self.is_zero(), "factor of zero");
        if let Some(hit) = factor_cache_get(self) {
            return hit;
        }
        let mut out: Vec<(HPoly, usize)> = Vec::new();
        let mut f = self.normalize();
        // coordinate factors first
        for var in 0..3 {
            let mut e = [0u16; 3];
            e[var] = 1;
            let axis = HPoly::monomial(&self.field, self.field.one(), e);
            let mut mult = 0;
            while let Some(q) = f.div_exact(&axis) {
                mult += 1;
                f = q;
            }
            if mult > 0 {
                out.push((axis, mult));
            }
        }
        // factors of degree d = 1, 2, 3 by trial division
        let mut d = 1usize;
        while f.degree() >= 2 * d && f.degree() > 0 {
            let mut found = false;
            for cand in normalized_forms(&self.field, d) {
                if cand.term_count() == 1 {
                    continue; // coordinate monomials already handled
                }
                let mut mult = 0;
                while let Some(q) = f.div_exact(&cand) {
                    mult += 1;
                    f = q;
                }
                if mult > 0 {
                    out.push((cand, mult));
                    found = true;
                    if f.degree() < 2 * d {
                        break;
                    }
                }
            }
            let _ = found;
            d += 1;
        }
        if f.degree() > 0 {
            out.push((f, 1));
        }
        out.sort_by(|a, b| hpoly_sort_key(&a.0).cmp(&hpoly_sort_key(&b.0)));
        factor_cache_put(self, &out);
        out
    }

    pub fn is_irreducible(&self) -> bool {
        let fs = self.factor();
        fs.len() == 1 && fs[0].1 == 1
    }

    /// Sort/dedup key: degree then coefficient codes in term order.
    pub fn sort_key(&self) -> (usize, Vec<([u16; 3], u128)>) {
        hpoly_sort_key(self)
    }
}

fn hpoly_sort_key(p: &HPoly) -> (usize, Vec<([u16; 3], u128)>) {
    (
        p.degree,
        p.terms.iter().map(|(&e, c)| (e, c.code())).collect(),
    )
}

/// All normalized forms of degree d (first nonzero coefficient 1),
/// in deterministic order. Sizes: q^2+q+1 for d=1, ~q^5 for d=2, ~q^8
/// for d=3 — the d=3 sweep only runs for inputs of degree >= 6.
fn normalized_forms(field: &Fq, d: usize) -> NormalizedForms {
    NormalizedForms {
        field: field.clone(),
        exps: monomials_of_degree(d),
        degree: d,
        lead: 0,
        code: 0,
    }
}

struct NormalizedForms {
    field: Fq,
    exps: Vec<[u16; 3]>,
    degree: usize,
    lead: usize,
    code: u128,
}

impl Iterator for NormalizedForms {
    type Item = HPoly;

    fn next(&mut self) -> Option<HPoly> {
        let dim = self.exps.len();
        let q = self.field.q();
        loop {
            if self.lead >= dim {
                return None;
            }
            let free = dim - self.lead - 1;
            let max = q.pow(free as u32);
            if self.code >= max {
                self.lead += 1;
                self.code = 0;
                continue;
            }
            let mut terms = Vec::with_capacity(free + 1);
            terms.push((self.exps[self.lead], self.field.one()));
            let mut rest = self.code;
            for off in 0..free {
                let digit = rest % q;
                rest /= q;
                if digit != 0 {
                    terms.push((self.exps[self.lead + 1 + off], self.field.from_code(digit)));
                }
            }
            self.code += 1;
            return Some(HPoly::from_terms(&self.field, self.degree, terms).unwrap());
        }
    }
}

/// Monomial exponent triples of total degree d, descending term order.
fn monomials_of_degree(d: usize) -> Vec<[u16; 3]> {
    let mut out = Vec::new();
    for x in (0..=d).rev() {
        for y in (0..=d - x).rev() {
            out.push([x as u16, y as u16, (d - x - y) as u16]);
        }
    }
    out
}

// factorization cache keyed by (field, degree, term data)
type FactorKey = (u64, usize, usize, Vec<([u16; 3], u128)>);
static FACTOR_CACHE: Mutex<Option<HashMap<FactorKey, Vec<(Vec<([u16; 3], u128)>, usize, usize)>>>> =
    Mutex::new(None);

fn factor_key(p: &HPoly) -> FactorKey {
    (
        p.field.p(),
        p.field.n(),
        p.degree,
        p.terms.iter().map(|(&e, c)| (e, c.code())).collect(),
    )
}

fn factor_cache_get(p: &HPoly) -> Option<Vec<(HPoly, usize)>> {
    let cache = FACTOR_CACHE.lock().unwrap();
    let map = cache.as_ref()?;
    let entry = map.get(&factor_key(p))?;
    Some(
        entry
            .iter()
            .map(|(terms, degree, mult)| {
                let hp = HPoly::from_terms(
                    &p.field,
                    *degree,
                    terms.iter().map(|&(e, code)| (e, p.field.from_code(code))),
                )
                .unwrap();
                (hp, *mult)
            })
            .collect(),
    )
}

fn factor_cache_put(p: &HPoly, factors: &[(HPoly, usize)]) {
    let mut cache = FACTOR_CACHE.lock().unwrap();
    cache.get_or_insert_with(HashMap::new).insert(
        factor_key(p),
        factors
            .iter()
            .map(|(f, m)| {
                (
                    f.terms.iter().map(|(&e, c)| (e, c.code())).collect(),
                    f.degree,
                    *m,
                )
            })
            .collect(),
    );
}

// ---- affine bivariate polynomials ----

/// Polynomial in two affine chart coordinates.
#[derive(Clone, PartialEq)]
pub struct Poly2 {
    field: Fq,
    terms: BTreeMap<[u16; 2], FqElem>,
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{c}*u^{}*w^{}", e[0], e[1]))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Poly2 {
    pub fn zero(field: &Fq) -> Poly2 {
        Poly2 {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }
    pub fn constant(c: FqElem) -> Poly2 {
        let field = c.field().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0, 0], c);
        }
        Poly2 { field, terms }
    }
    pub fn from_terms(field: &Fq, terms: impl IntoIterator<Item = ([u16; 2], FqElem)>) -> Poly2 {
        let mut map: BTreeMap<[u16; 2], FqElem> = BTreeMap::new();
        for (e, c) in terms {
            let entry = map.entry(e).or_insert_with(|| field.zero());
            *entry = entry.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        Poly2 {
            field: field.clone(),
            terms: map,
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&[u16; 2], &FqElem)> {
        self.terms.iter()
    }
    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| (e[0] + e[1]) as usize)
            .max()
            .unwrap_or(0)
    }
    /// Lowest total degree among the terms (the multiplicity at the origin
    /// when the constant term vanishes).
    pub fn lowest_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| (e[0] + e[1]) as usize)
            .min()
            .unwrap_or(0)
    }
    /// The lowest-degree homogeneous part (tangent cone at the origin).
    pub fn lowest_part(&self) -> Poly2 {
        let m = self.lowest_degree() as u16;
        Poly2 {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[0] + e[1] == m)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        Poly2::from_terms(
            &self.field,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(&e, c)| (e, c.clone())),
        )
    }
    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut map: BTreeMap<[u16; 2], FqElem> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1]];
                let entry = map.entry(e).or_insert_with(|| self.field.zero());
                *entry = entry.add(&c1.mul(c2));
            }
        }
        map.retain(|_, c| !c.is_zero());
        Poly2 {
            field: self.field.clone(),
            terms: map,
        }
    }
    pub fn scale(&self, c: &FqElem) -> Poly2 {
        let mut out = Poly2 {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(&e, a)| (e, a.mul(c))).collect(),
        };
        out.terms.retain(|_, a| !a.is_zero());
        out
    }

    pub fn eval(&self, u: &FqElem, w: &FqElem) -> FqElem {
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            acc = acc.add(
                &c.mul(&u.pow(e[0] as i64).unwrap())
                    .mul(&w.pow(e[1] as i64).unwrap()),
            );
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Poly2 {
        let mut map = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let coeff = c.mul_int(e[var] as i64);
            if coeff.is_zero() {
                continue;
            }
            let mut ne = *e;
            ne[var] -= 1;
            map.insert(ne, coeff);
        }
        Poly2 {
            field: self.field.clone(),
            terms: map,
        }
    }

    /// Shift the origin: returns P(a + u, b + w).
    pub fn translate(&self, a: &FqElem, b: &FqElem) -> Poly2 {
        let u_shift = Poly2::from_terms(
            &self.field,
            [([0, 0], a.clone()), ([1, 0], self.field.one())],
        );
        let w_shift = Poly2::from_terms(
            &self.field,
            [([0, 0], b.clone()), ([0, 1], self.field.one())],
        );
        self.compose(&u_shift, &w_shift)
    }

    /// Substitute polynomials for the two variables.
    pub fn compose(&self, u_sub: &Poly2, w_sub: &Poly2) -> Poly2 {
        let max_u = self.terms.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
        let max_w = self.terms.keys().map(|e| e[1]).max().unwrap_or(0) as usize;
        let mut u_pows = vec![Poly2::constant(self.field.one())];
        for _ in 0..max_u {
            u_pows.push(u_pows.last().unwrap().mul(u_sub));
        }
        let mut w_pows = vec![Poly2::constant(self.field.one())];
        for _ in 0..max_w {
            w_pows.push(w_pows.last().unwrap().mul(w_sub));
        }
        let mut acc = Poly2::zero(&self.field);
        for (e, c) in &self.terms {
            acc = acc.add(
                &u_pows[e[0] as usize]
                    .mul(&w_pows[e[1] as usize])
                    .scale(c),
            );
        }
        acc
    }

    /// Map coefficients through an embedding into a bigger field.
    pub fn embed(&self, big: &Fq) -> Result<Poly2> {
        let emb = crate::fq::Embedding::new(&self.field, big)?;
        Ok(Poly2 {
            field: big.clone(),
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e, emb.apply(c)))
                .collect(),
        })
    }

    /// View as a polynomial in w with coefficients in Fq[u].
    pub fn as_w_polys(&self) -> Vec<Poly> {
        let deg_w = self.terms.keys().map(|e| e[1]).max().unwrap_or(0) as usize;
        let mut out = Vec::with_capacity(deg_w + 1);
        for j in 0..=deg_w {
            let coeffs: Vec<(usize, FqElem)> = self
                .terms
                .iter()
                .filter(|(e, _)| e[1] as usize == j)
                .map(|(e, c)| (e[0] as usize, c.clone()))
                .collect();
            let deg_u = coeffs.iter().map(|(i, _)| *i).max().unwrap_or(0);
            let mut v = vec![self.field.zero(); deg_u + 1];
            for (i, c) in coeffs {
                v[i] = c;
            }
            out.push(Poly::from_coeffs(&self.field, v));
        }
        out
    }

    /// Substitute u = u0, leaving a univariate polynomial in w over the
    /// coordinate field of u0.
    pub fn eval_u(&self, u0: &FqElem) -> Poly {
        let field = u0.field().clone();
        let emb = crate::fq::Embedding::new(&self.field, &field).unwrap();
        let deg_w = self.terms.keys().map(|e| e[1]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![field.zero(); deg_w + 1];
        for (e, c) in &self.terms {
            let term = emb.apply(c).mul(&u0.pow(e[0] as i64).unwrap());
            coeffs[e[1] as usize] = coeffs[e[1] as usize].add(&term);
        }
        Poly::from_coeffs(&field, coeffs)
    }

    /// Substitute w = w0, leaving a univariate polynomial in u.
    pub fn eval_w(&self, w0: &FqElem) -> Poly {
        let field = w0.field().clone();
        let emb = crate::fq::Embedding::new(&self.field, &field).unwrap();
        let deg_u = self.terms.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![field.zero(); deg_u + 1];
        for (e, c) in &self.terms {
            let term = emb.apply(c).mul(&w0.pow(e[1] as i64).unwrap());
            coeffs[e[0] as usize] = coeffs[e[0] as usize].add(&term);
        }
        Poly::from_coeffs(&field, coeffs)
    }
}

// ---- parsing ----

/// Parse a homogeneous polynomial: sums of monomial products, with
/// parenthesized factors allowed, e.g. "X^2*Y + 3*Z^3" or
/// "(X+Y)*(X^2+Y*Z)".
pub fn parse_hpoly(field: &Fq, input: &str) -> Result<HPoly> {
    let mut p = HParser {
        field: field.clone(),
        chars: input.chars().peekable(),
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.chars.peek().is_some() {
        return Err(Error::Parse(format!("trailing input in '{input}'")));
    }
    let poly = poly.ok_or_else(|| Error::Parse("empty polynomial".into()))?;
    if poly.is_zero() {
        return Err(Error::Parse("zero polynomial".into()));
    }
    Ok(poly)
}

struct HParser<'a> {
    field: Fq,
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> HParser<'a> {
    fn skip_ws(&mut self) {
        while self.chars.peek().map_or(false, |c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    /// sum of terms; None only for fully empty input
    fn expr(&mut self) -> Result<Option<HPoly>> {
        self.skip_ws();
        let mut acc: Option<HPoly> = None;
        let mut sign = 1i64;
        if let Some('-') = self.chars.peek() {
            self.chars.next();
            sign = -1;
        }
        loop {
            let term = self.term()?;
            let term = if sign == -1 { term.neg() } else { term };
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
            self.skip_ws();
            match self.chars.peek() {
                Some('+') => {
                    self.chars.next();
                    sign = 1;
                }
                Some('-') => {
                    self.chars.next();
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// product of factors
    fn term(&mut self) -> Result<HPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if let Some('*') = self.chars.peek() {
                self.chars.next();
                acc = acc.mul(&self.factor()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<HPoly> {
        self.skip_ws();
        let base = match self.chars.peek() {
            Some('(') => {
                self.chars.next();
                let inner = self
                    .expr()?
                    .ok_or_else(|| Error::Parse("empty parentheses".into()))?;
                self.skip_ws();
                if self.chars.next() != Some(')') {
                    return Err(Error::Parse("unclosed parenthesis".into()));
                }
                inner
            }
            Some(c) if c.is_ascii_digit() => {
                let mut n = String::new();
                while self.chars.peek().map_or(false, |c| c.is_ascii_digit()) {
                    n.push(self.chars.next().unwrap());
                }
                let v: i64 = n.parse().map_err(|_| Error::Parse(format!("bad number {n}")))?;
                HPoly::monomial(&self.field, self.field.from_int(v), [0, 0, 0])
            }
            Some('[') => {
                let mut body = String::new();
                self.chars.next();
                while let Some(&c) = self.chars.peek() {
                    self.chars.next();
                    if c == ']' {
                        break;
                    }
                    body.push(c);
                }
                let digits: Vec<u64> = body
                    .split(',')
                    .map(|d| {
                        d.trim()
                            .parse::<i64>()
                            .map(|v| v.rem_euclid(self.field.p() as i64) as u64)
                            .map_err(|_| Error::Parse(format!("bad digit '{d}'")))
                    })
                    .collect::<Result<_>>()?;
                HPoly::monomial(&self.field, self.field.from_coeffs(&digits)?, [0, 0, 0])
            }
            Some(&v) if v == 'X' || v == 'Y' || v == 'Z' => {
                self.chars.next();
                let var = VARS.iter().position(|&c| c == v).unwrap();
                let mut e = [0u16; 3];
                e[var] = 1;
                HPoly::monomial(&self.field, self.field.one(), e)
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {:?} in polynomial",
                    other
                )))
            }
        };
        self.skip_ws();
        if let Some('^') = self.chars.peek() {
            self.chars.next();
            self.skip_ws();
            let mut n = String::new();
            while self.chars.peek().map_or(false, |c| c.is_ascii_digit()) {
                n.push(self.chars.next().unwrap());
            }
            let e: u32 = n.parse().map_err(|_| Error::Parse(format!("bad exponent {n}")))?;
            let mut acc = HPoly::monomial(&self.field, self.field.one(), [0, 0, 0]);
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fq {
        Fq::make(5, 1).unwrap()
    }

    #[test]
    fn parse_basic() {
        let f = f5();
        let p = parse_hpoly(&f, "X^2*Y + 3*Z^3").unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.text(), "X^2*Y + 3*Z^3");
        let q = parse_hpoly(&f, "(X+Y)*(X-Y)").unwrap();
        assert_eq!(q, parse_hpoly(&f, "X^2 - Y^2").unwrap());
        assert!(parse_hpoly(&f, "X + Y^2").is_err()); // inhomogeneous
    }

    #[test]
    fn division_and_multiplicity() {
        let f = f5();
        let a = parse_hpoly(&f, "X + Y").unwrap();
        let b = parse_hpoly(&f, "X^2 + Y*Z").unwrap();
        let prod = a.mul(&a).mul(&b);
        assert_eq!(prod.multiplicity_of(&a), 2);
        assert_eq!(prod.multiplicity_of(&b), 1);
        let c = parse_hpoly(&f, "X + Z").unwrap();
        assert_eq!(prod.multiplicity_of(&c), 0);
        assert_eq!(prod.div_exact(&a).unwrap(), a.mul(&b));
    }

    #[test]
    fn factor_products_of_forms() {
        let f = f5();
        let a = parse_hpoly(&f, "X + Y").unwrap();
        let b = parse_hpoly(&f, "Y + 2*Z").unwrap();
        let c = parse_hpoly(&f, "X^2 + Y*Z").unwrap();
        let prod = a.mul(&b).mul(&c).mul(&a).scale(&f.from_int(3));
        let factors = prod.factor();
        let mults: Vec<usize> = factors.iter().map(|x| x.1).collect();
        assert_eq!(factors.len(), 3);
        assert!(mults.contains(&2));
        // recombine up to scalar
        let mut rec = HPoly::monomial(&f, f.one(), [0, 0, 0]);
        for (g, m) in &factors {
            for _ in 0..*m {
                rec = rec.mul(g);
            }
        }
        assert_eq!(rec.normalize(), prod.normalize());
    }

    #[test]
    fn coordinate_factors() {
        let f = f5();
        let p = parse_hpoly(&f, "X*Y^2*Z^3").unwrap();
        let factors = p.factor();
        assert_eq!(factors.len(), 3);
        let total: usize = factors.iter().map(|x| x.1).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn irreducibility() {
        let f = f5();
        // the nodal cubic is irreducible
        let nodal = parse_hpoly(&f, "Y^2*Z - X^2*Z - X^3").unwrap();
        assert!(nodal.is_irreducible());
        // a smooth conic
        let conic = parse_hpoly(&f, "X^2 + Y^2 - Z^2").unwrap();
        assert!(conic.is_irreducible());
        // a split conic is not
        let split = parse_hpoly(&f, "(X + Y)*(X - Y)").unwrap();
        assert!(!split.is_irreducible());
        // X^2+1 as a binary form in (X, Z) over F_3: irreducible quadratic
        let f3 = Fq::make(3, 1).unwrap();
        let q = parse_hpoly(&f3, "X^2 + Z^2").unwrap();
        assert!(q.is_irreducible());
    }

    #[test]
    fn dehomogenize_and_translate() {
        let f = f5();
        let p = parse_hpoly(&f, "Y^2*Z - X^2*Z - X^3").unwrap();
        let affine = p.dehomogenize(2); // chart Z = 1, vars (X, Y)
        assert_eq!(affine.total_degree(), 3);
        assert_eq!(affine.lowest_degree(), 2); // node at the origin
        let cone = affine.lowest_part();
        // tangent cone w^2 - u^2 splits into two lines
        assert_eq!(cone.eval(&f.one(), &f.one()), f.zero());
        assert_eq!(cone.eval(&f.one(), &f.from_int(4)), f.zero());
        // translate to a smooth point (1, 3) lies on it? 9 - 1 - 1 = 7 = 2 no
        // use (2, 1): 1 - 4 - 8 = -11 = -1 mod 5, no; point (0,0) is on it
        let shifted = affine.translate(&f.zero(), &f.zero());
        assert_eq!(shifted, affine);
    }

    #[test]
    fn eval_over_extension() {
        let f3 = Fq::make(3, 1).unwrap();
        let p = parse_hpoly(&f3, "X^2 + Z^2").unwrap();
        let f9 = Fq::extension_internal(3, 2);
        // i^2 + 1 = 0 in F_9
        let i = f9.gen();
        let val = p
            .eval_ext(&f9, &[i.clone(), f9.zero(), f9.one()])
            .unwrap();
        assert!(val.is_zero());
    }
}
