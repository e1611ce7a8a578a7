//! Univariate polynomials over GF(p^n): exact arithmetic, gcd,
//! factorization into irreducibles, root finding, and resultants.
//!
//! Factorization is squarefree decomposition + distinct-degree +
//! equal-degree splitting. The splitting step draws trial elements from
//! a fixed-seed generator so runs are reproducible.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fq::{Fq, FqElem};

/// Dense little-endian polynomial; the coefficient vector is trimmed so
/// the top entry of a nonzero polynomial is nonzero.
#[derive(Clone, PartialEq)]
pub struct Poly {
    field: Fq,
    c: Vec<FqElem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| format!("{a}*x^{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Poly {
    pub fn zero(field: &Fq) -> Poly {
        Poly {
            field: field.clone(),
            c: Vec::new(),
        }
    }
    pub fn one(field: &Fq) -> Poly {
        Poly::constant(field.one())
    }
    pub fn constant(a: FqElem) -> Poly {
        let field = a.field().clone();
        let mut p = Poly { field, c: vec![a] };
        p.trim();
        p
    }
    pub fn x(field: &Fq) -> Poly {
        Poly {
            field: field.clone(),
            c: vec![field.zero(), field.one()],
        }
    }
    /// x - r
    pub fn linear_root(r: &FqElem) -> Poly {
        Poly {
            field: r.field().clone(),
            c: vec![r.neg(), r.field().one()],
        }
    }
    pub fn from_coeffs(field: &Fq, c: Vec<FqElem>) -> Poly {
        let mut p = Poly {
            field: field.clone(),
            c,
        };
        p.trim();
        p
    }
    pub fn from_fn(field: &Fq, deg: usize, f: impl FnMut(usize) -> FqElem) -> Poly {
        Poly::from_coeffs(field, (0..=deg).map(f).collect())
    }
    /// Monomial c * x^k.
    pub fn monomial(coeff: FqElem, k: usize) -> Poly {
        let field = coeff.field().clone();
        let mut c = vec![field.zero(); k + 1];
        c[k] = coeff;
        Poly::from_coeffs(&field, c)
    }

    fn trim(&mut self) {
        while self.c.last().map_or(false, |a| a.is_zero()) {
            self.c.pop();
        }
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    /// Degree of a nonzero polynomial; panics on zero.
    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.c.len() - 1
    }
    pub fn coeff(&self, i: usize) -> FqElem {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }
    pub fn coeffs(&self) -> &[FqElem] {
        &self.c
    }
    pub fn leading(&self) -> FqElem {
        self.c.last().cloned().unwrap_or_else(|| self.field.zero())
    }
    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Poly::from_coeffs(&self.field, c)
    }
    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        Poly::from_coeffs(&self.field, c)
    }
    pub fn neg(&self) -> Poly {
        Poly::from_coeffs(&self.field, self.c.iter().map(|a| a.neg()).collect())
    }
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::from_coeffs(&self.field, c)
    }
    pub fn scale(&self, a: &FqElem) -> Poly {
        Poly::from_coeffs(&self.field, self.c.iter().map(|x| x.mul(a)).collect())
    }
    /// Multiply by x^k.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); k];
        c.extend(self.c.iter().cloned());
        Poly::from_coeffs(&self.field, c)
    }

    pub fn divrem(&self, den: &Poly) -> (Poly, Poly) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        if rem.is_zero() || rem.degree() < den.degree() {
            return (Poly::zero(&self.field), rem);
        }
        let dl_inv = den.leading().inv().expect("nonzero leading coefficient");
        let mut quo = vec![self.field.zero(); rem.degree() - den.degree() + 1];
        while !rem.is_zero() && rem.degree() >= den.degree() {
            let shift = rem.degree() - den.degree();
            let c = rem.leading().mul(&dl_inv);
            quo[shift] = c.clone();
            for (i, d) in den.c.iter().enumerate() {
                rem.c[shift + i] = rem.c[shift + i].sub(&c.mul(d));
            }
            rem.trim();
        }
        (Poly::from_coeffs(&self.field, quo), rem)
    }
    pub fn rem(&self, den: &Poly) -> Poly {
        self.divrem(den).1
    }
    /// Division known to be exact; panics if a remainder appears.
    pub fn div_exact(&self, den: &Poly) -> Poly {
        let (q, r) = self.divrem(den);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv().unwrap())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let c = self.c[1..]
            .iter()
            .enumerate()
            .map(|(i, a)| a.mul_int((i + 1) as i64))
            .collect();
        Poly::from_coeffs(&self.field, c)
    }

    pub fn eval(&self, x: &FqElem) -> FqElem {
        let mut acc = self.field.zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }

    /// Map coefficients through a field homomorphism.
    pub fn map_coeffs(&self, target: &Fq, f: impl Fn(&FqElem) -> FqElem) -> Poly {
        Poly::from_coeffs(target, self.c.iter().map(f).collect())
    }

    /// self(g) composed, reduced mod m.
    pub fn compose_mod(&self, g: &Poly, m: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for a in self.c.iter().rev() {
            acc = acc.mul(g).rem(m);
            acc = acc.add(&Poly::constant(a.clone()));
        }
        acc
    }

    /// self^e mod m with a multi-limb exponent (little-endian base 2^32).
    pub fn pow_mod_limbs(&self, limbs: &[u32], m: &Poly) -> Poly {
        let mut result = Poly::one(&self.field);
        let mut base = self.rem(m);
        let bits = limbs.len() * 32;
        for i in 0..bits {
            if limbs[i / 32] >> (i % 32) & 1 == 1 {
                result = result.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        result
    }

    pub fn pow_mod(&self, e: u128, m: &Poly) -> Poly {
        let limbs = [
            e as u32,
            (e >> 32) as u32,
            (e >> 64) as u32,
            (e >> 96) as u32,
        ];
        self.pow_mod_limbs(&limbs, m)
    }

    /// p-th root of a polynomial all of whose exponents are multiples
    /// of p (the f' = 0 case of squarefree decomposition).
    fn pth_root(&self) -> Poly {
        let p = self.field.p() as usize;
        let q = self.field.q();
        let e = q / p as u128; // a^(q/p) is the p-th root of a in GF(q)
        let deg = if self.is_zero() { 0 } else { self.degree() };
        let c = (0..=deg / p)
            .map(|i| self.coeff(i * p).pow_u128(e))
            .collect();
        Poly::from_coeffs(&self.field, c)
    }
}

// ---- multi-limb exponent helpers (exponents up to ~2^750 arise when
// splitting over large extension towers) ----

fn limbs_from_u128(x: u128) -> Vec<u32> {
    vec![x as u32, (x >> 32) as u32, (x >> 64) as u32, (x >> 96) as u32]
}

fn limbs_mul_u128(a: &[u32], b: u128) -> Vec<u32> {
    let bl = limbs_from_u128(b);
    let mut out = vec![0u32; a.len() + bl.len()];
    for (i, &x) in a.iter().enumerate() {
        let mut carry = 0u64;
        for (j, &y) in bl.iter().enumerate() {
            let t = out[i + j] as u64 + x as u64 * y as u64 + carry;
            out[i + j] = t as u32;
            carry = t >> 32;
        }
        let mut k = i + bl.len();
        while carry > 0 {
            let t = out[k] as u64 + carry;
            out[k] = t as u32;
            carry = t >> 32;
            k += 1;
        }
    }
    out
}

fn limbs_sub_one(a: &mut [u32]) {
    for limb in a.iter_mut() {
        if *limb > 0 {
            *limb -= 1;
            return;
        }
        *limb = u32::MAX;
    }
}

fn limbs_halve(a: &mut [u32]) {
    let mut carry = 0u32;
    for limb in a.iter_mut().rev() {
        let new_carry = *limb & 1;
        *limb = (*limb >> 1) | (carry << 31);
        carry = new_carry;
    }
}

/// (q^d - 1) / 2 as limbs.
fn half_group_order(q: u128, d: usize) -> Vec<u32> {
    let mut limbs = limbs_from_u128(1);
    for _ in 0..d {
        limbs = limbs_mul_u128(&limbs, q);
    }
    limbs_sub_one(&mut limbs);
    limbs_halve(&mut limbs);
    limbs
}

// ---- factorization ----

/// Squarefree decomposition: list of (squarefree monic factor, multiplicity).
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out: Vec<(Poly, usize)> = Vec::new();
    let mut f = f.monic();
    let mut outer = 1usize; // multiplicity multiplier from p-th roots
    let p = f.field().p() as usize;
    while !f.is_one() && !f.is_zero() {
        let d = f.derivative();
        if d.is_zero() {
            f = f.pth_root();
            outer *= p;
            continue;
        }
        let mut g = f.gcd(&d);
        let mut w = f.div_exact(&g);
        // w holds each factor not dividing g exactly once; peel by multiplicity
        let mut mult = 1usize;
        while !w.is_one() {
            let y = w.gcd(&g);
            let fac = w.div_exact(&y);
            if !fac.is_one() {
                out.push((fac, mult * outer));
            }
            g = g.div_exact(&y);
            w = y;
            mult += 1;
        }
        f = g;
    }
    out
}

/// All monic irreducible factors with multiplicities, plus the unit.
pub fn factor(f: &Poly) -> (FqElem, Vec<(Poly, usize)>) {
    assert!(!f.is_zero(), "factor of the zero polynomial");
    let unit = f.leading();
    let mut out = Vec::new();
    if f.degree() == 0 {
        return (unit, out);
    }
    for (sqf, mult) in squarefree_decomposition(f) {
        for (d, prod) in distinct_degree(&sqf) {
            for irr in equal_degree(&prod, d) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by(|a, b| poly_sort_key(&a.0).cmp(&poly_sort_key(&b.0)));
    (unit, out)
}

fn poly_sort_key(p: &Poly) -> (usize, Vec<u128>) {
    (
        p.degree(),
        p.coeffs().iter().map(|c| c.code()).collect(),
    )
}

/// Split a squarefree monic f into products of irreducibles of equal degree.
fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let field = f.field().clone();
    let q = field.q();
    let mut out = Vec::new();
    let mut f = f.clone();
    // h = x^(q^d) mod f, advanced one Frobenius step per round
    let mut h = Poly::x(&field).pow_mod(q, &f);
    let mut d = 1usize;
    while !f.is_one() && f.degree() >= 2 * d {
        let g = f.gcd(&h.sub(&Poly::x(&field)));
        if !g.is_one() {
            out.push((d, g.clone()));
            f = f.div_exact(&g);
            h = h.rem(&f);
        }
        h = h.pow_mod(q, &f);
        d += 1;
    }
    if !f.is_one() {
        let d = f.degree();
        out.push((d, f));
    }
    out
}

/// Split a product of distinct irreducibles of known degree d.
fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    let field = f.field().clone();
    if f.degree() == d {
        return vec![f.monic()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let q = field.q();
    let mut pieces = vec![f.monic()];
    let mut done = Vec::new();
    while let Some(g) = pieces.pop() {
        if g.degree() == d {
            done.push(g);
            continue;
        }
        loop {
            let r = Poly::from_fn(&field, g.degree() - 1, |_| field.sample(&mut rng));
            if r.is_zero() {
                continue;
            }
            let s = if field.p() == 2 {
                // trace map over GF(2^(n*d))
                let reps = field.n() * d;
                let mut acc = r.rem(&g);
                let mut t = r.rem(&g);
                for _ in 1..reps {
                    t = t.mul(&t).rem(&g);
                    acc = acc.add(&t);
                }
                acc
            } else {
                let e = half_group_order(q, d);
                r.pow_mod_limbs(&e, &g)
                    .sub(&Poly::one(&field))
            };
            let h = g.gcd(&s);
            if !h.is_one() && h.degree() < g.degree() {
                pieces.push(g.div_exact(&h));
                pieces.push(h);
                break;
            }
        }
    }
    done.sort_by(|a, b| poly_sort_key(a).cmp(&poly_sort_key(b)));
    done
}

/// Roots of f that lie in its coefficient field, sorted by encoding.
pub fn roots_in_field(f: &Poly) -> Vec<FqElem> {
    assert!(!f.is_zero());
    let field = f.field().clone();
    if f.degree() == 0 {
        return Vec::new();
    }
    // strip x^k
    let mut f = f.clone();
    let mut roots = Vec::new();
    if f.coeff(0).is_zero() {
        roots.push(field.zero());
        while f.coeff(0).is_zero() {
            f = f.div_exact(&Poly::x(&field));
            if f.degree() == 0 {
                break;
            }
        }
    }
    if f.degree() >= 1 {
        let xq = Poly::x(&field).pow_mod(field.q(), &f);
        let lin = f.gcd(&xq.sub(&Poly::x(&field)));
        if !lin.is_one() {
            for piece in equal_degree(&lin, 1) {
                roots.push(piece.coeff(0).neg());
            }
        }
    }
    roots.sort_by_key(|r| r.code());
    roots.dedup();
    roots
}

/// One canonical root per irreducible factor, each in the canonical
/// extension field of matching relative degree over the coefficient
/// field. Errors if a factor's degree exceeds the exact-arithmetic cap.
pub fn roots_over_extensions(f: &Poly) -> crate::error::Result<Vec<FqElem>> {
    let base = f.field().clone();
    let mut out = Vec::new();
    if f.degree() == 0 {
        return Ok(out);
    }
    let (_, factors) = factor(f);
    for (pi, _) in factors {
        let d = pi.degree();
        let n = base.n() * d;
        if (n as u32) * (64 - base.p().leading_zeros()) > 120 {
            return Err(crate::error::Error::InvalidInput(format!(
                "root of degree {d} exceeds the desk-scale cap"
            )));
        }
        let big = Fq::extension_internal(base.p(), n);
        let emb = crate::fq::Embedding::new(&base, &big)?;
        let pi_up = pi.map_coeffs(&big, |c| emb.apply(c));
        let mut roots = roots_in_field(&pi_up);
        roots.sort_by_key(|r| r.code());
        if let Some(r) = roots.first() {
            out.push(r.clone());
        }
    }
    Ok(out)
}

/// Multiplicity of the irreducible g in f.
pub fn multiplicity(f: &Poly, g: &Poly) -> usize {
    let mut f = f.clone();
    let mut k = 0;
    loop {
        let (q, r) = f.divrem(g);
        if !r.is_zero() {
            return k;
        }
        k += 1;
        f = q;
        if f.is_zero() {
            return k;
        }
    }
}

// ---- resultants of y-polynomials with Poly coefficients ----

/// Resultant with respect to y of f = sum f_i(x) y^i and g = sum g_i(x) y^i,
/// as a polynomial in x. Fraction-free Gaussian elimination on the
/// Sylvester matrix keeps everything in GF(q)[x].
pub fn resultant_y(f: &[Poly], g: &[Poly], field: &Fq) -> Poly {
    let trim = |v: &[Poly]| {
        let mut v = v.to_vec();
        while v.last().map_or(false, |p| p.is_zero()) {
            v.pop();
        }
        v
    };
    let f = trim(f);
    let g = trim(g);
    if f.is_empty() || g.is_empty() {
        return Poly::zero(field);
    }
    let m = f.len() - 1;
    let n = g.len() - 1;
    if m == 0 && n == 0 {
        return Poly::one(field);
    }
    if m == 0 {
        // res(f0, g) = f0^deg(g)
        let mut acc = Poly::one(field);
        for _ in 0..n {
            acc = acc.mul(&f[0]);
        }
        return acc;
    }
    if n == 0 {
        let mut acc = Poly::one(field);
        for _ in 0..m {
            acc = acc.mul(&g[0]);
        }
        return acc;
    }
    let size = m + n;
    let mut mat: Vec<Vec<Poly>> = vec![vec![Poly::zero(field); size]; size];
    for row in 0..n {
        for (i, fi) in f.iter().enumerate() {
            mat[row][row + (m - i)] = fi.clone();
        }
    }
    for row in 0..m {
        for (i, gi) in g.iter().enumerate() {
            mat[n + row][row + (n - i)] = gi.clone();
        }
    }
    // Bareiss fraction-free elimination
    let mut sign_flip = false;
    let mut prev = Poly::one(field);
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            let Some(swap) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                return Poly::zero(field);
            };
            mat.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = mat[i][j].mul(&mat[k][k]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = t.div_exact(&prev);
            }
            mat[i][k] = Poly::zero(field);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly_from_ints(field: &Fq, c: &[i64]) -> Poly {
        Poly::from_coeffs(field, c.iter().map(|&x| field.from_int(x)).collect())
    }

    #[test]
    fn divrem_round_trip() {
        let f5 = Fq::make(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = Poly::from_fn(&f5, 6, |_| f5.sample(&mut rng));
            let mut b = Poly::from_fn(&f5, 3, |_| f5.sample(&mut rng));
            if b.is_zero() {
                b = Poly::one(&f5);
            }
            let (q, r) = a.divrem(&b);
            assert_eq!(q.mul(&b).add(&r), a);
            if !r.is_zero() {
                assert!(r.degree() < b.degree());
            }
        }
    }

    #[test]
    fn factor_recombines() {
        let f5 = Fq::make(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let mut f = Poly::from_fn(&f5, 8, |_| f5.sample(&mut rng));
            if f.is_zero() {
                f = Poly::one(&f5);
            }
            let (unit, factors) = factor(&f);
            let mut prod = Poly::constant(unit);
            for (g, mult) in &factors {
                assert!(!g.is_one());
                // irreducibility oracle: no roots and no factor of half degree,
                // spot-checked via a second factor call
                let (_, inner) = factor(g);
                assert_eq!(inner.len(), 1);
                assert_eq!(inner[0].0, g.monic());
                for _ in 0..*mult {
                    prod = prod.mul(g);
                }
            }
            assert_eq!(prod, f);
        }
    }

    #[test]
    fn factor_over_extension_field() {
        let f25 = Fq::extension_internal(5, 2);
        let g = f25.gen();
        // (x - g)(x - g^5)(x - 2) has coefficients we can build directly
        let f = Poly::linear_root(&g)
            .mul(&Poly::linear_root(&g.frobenius()))
            .mul(&Poly::linear_root(&f25.from_int(2)));
        let (_, factors) = factor(&f);
        assert_eq!(factors.len(), 3);
        let roots = roots_in_field(&f);
        assert_eq!(roots.len(), 3);
        assert!(roots.contains(&g));
    }

    #[test]
    fn squarefree_multiplicities() {
        let f5 = Fq::make(5, 1).unwrap();
        let a = poly_from_ints(&f5, &[1, 1]); // x + 1
        let b = poly_from_ints(&f5, &[2, 1]); // x + 2
        let f = a.mul(&a).mul(&a).mul(&b); // (x+1)^3 (x+2)
        let (_, factors) = factor(&f);
        assert_eq!(factors.len(), 2);
        let m: Vec<usize> = factors.iter().map(|(_, m)| *m).collect();
        assert!(m.contains(&3) && m.contains(&1));
        // p-th power: derivative vanishes
        let g = a.mul(&a).mul(&a).mul(&a).mul(&a); // (x+1)^5 in char 5
        assert!(g.derivative().is_zero());
        let (_, gf) = factor(&g);
        assert_eq!(gf, vec![(a.monic(), 5)]);
    }

    #[test]
    fn roots_match_brute_force() {
        let f9 = Fq::make(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let f = Poly::from_fn(&f9, 4, |_| f9.sample(&mut rng));
            if f.is_zero() {
                continue;
            }
            let fast: Vec<u128> = roots_in_field(&f).iter().map(|r| r.code()).collect();
            let brute: Vec<u128> = f9
                .elements()
                .filter(|x| f.eval(x).is_zero())
                .map(|x| x.code())
                .collect();
            assert_eq!(fast, brute);
        }
    }

    #[test]
    fn resultant_detects_common_roots() {
        let f5 = Fq::make(5, 1).unwrap();
        // f = y^2 - x, g = y - 2: res_y = 4 - x, vanishing exactly at x = 4
        let f = vec![
            poly_from_ints(&f5, &[0, -1]), // -x
            Poly::zero(&f5),
            Poly::one(&f5),
        ];
        let g = vec![poly_from_ints(&f5, &[-2]), Poly::one(&f5)];
        let r = resultant_y(&f, &g, &f5);
        let roots = roots_in_field(&r);
        assert_eq!(roots, vec![f5.from_int(4)]);
    }

    #[test]
    fn resultant_vs_product_of_evals() {
        // res_y(f, g) for monic f = prod (y - a_i): equals prod g(a_i)
        let f7 = Fq::make(7, 1).unwrap();
        let a1 = f7.from_int(2);
        let a2 = f7.from_int(5);
        // f = (y - 2)(y - 5) = y^2 - 7y + 10 = y^2 + 3 over F_7 with x absent
        let f = vec![
            Poly::constant(a1.mul(&a2)),
            Poly::constant(a1.add(&a2).neg()),
            Poly::one(&f7),
        ];
        // g = y - x: g(a) = a - x
        let g = vec![Poly::x(&f7).neg(), Poly::one(&f7)];
        let r = resultant_y(&f, &g, &f7);
        let expect = Poly::linear_root(&a1)
            .neg()
            .mul(&Poly::linear_root(&a2).neg());
        // (a1 - x)(a2 - x) up to the sign convention of the resultant
        assert!(r == expect || r == expect.neg());
    }
}
