//! Finite fields GF(p^n) with a deterministic polynomial model.
//!
//! A field is a cheap cloneable handle around a [`FieldDesc`]; elements
//! carry their field handle so mixed-field arithmetic is caught at run
//! time. The modulus for GF(p^n) is always the monic irreducible of
//! degree n over GF(p) with the smallest integer encoding
//! sum(c_i * p^i), so identical (p, n) pairs are interchangeable across
//! processes.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shared description of a finite field GF(p^n).
#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub n: usize,
    /// Monic modulus of degree n over GF(p), little-endian, length n+1.
    pub modulus: Vec<u64>,
}

/// Handle to a finite field. Cloning is O(1).
#[derive(Clone)]
pub struct Fq(Arc<FieldDesc>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.n)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---- raw GF(p)[X] helpers used to bootstrap the modulus search ----

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_divrem(num: &[u64], den: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem: Vec<u64> = num.to_vec();
    fp_trim(&mut rem);
    let mut den = den.to_vec();
    fp_trim(&mut den);
    assert!(!den.is_empty(), "division by zero polynomial");
    let dl = *den.last().unwrap();
    let dl_inv = fp_inv_scalar(dl, p);
    let mut quo = vec![0u64; rem.len().saturating_sub(den.len() - 1)];
    while rem.len() >= den.len() && !rem.is_empty() {
        let shift = rem.len() - den.len();
        let c = (*rem.last().unwrap() * dl_inv) % p;
        quo[shift] = c;
        for (i, d) in den.iter().enumerate() {
            let idx = shift + i;
            rem[idx] = (rem[idx] + p - c * d % p) % p;
        }
        fp_trim(&mut rem);
    }
    (quo, rem)
}

fn fp_inv_scalar(a: u64, p: u64) -> u64 {
    // Fermat; p is always prime here.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Enumerate monic polynomials of degree d over GF(p) in encoding order.
fn fp_monics(p: u64, d: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = (p as u128).pow(d as u32);
    (0..count).map(move |code| {
        let mut c = Vec::with_capacity(d + 1);
        let mut rest = code;
        for _ in 0..d {
            c.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        c.push(1);
        c
    })
}

fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    for k in 1..=d / 2 {
        for g in fp_monics(p, k) {
            if fp_is_irreducible(&g, p) {
                let (_, r) = fp_divrem(f, &g, p);
                if r.is_empty() {
                    return false;
                }
            }
        }
    }
    true
}

/// The monic irreducible of degree n over GF(p) with smallest encoding.
fn smallest_irreducible(p: u64, n: usize) -> Vec<u64> {
    if n == 1 {
        return vec![0, 1]; // X
    }
    for f in fp_monics(p, n) {
        if f[0] != 0 && fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducibles of every degree exist over GF(p)")
}

impl Fq {
    /// Public field constructor with the documented desk-scale caps:
    /// p prime, 1 <= n <= 8, p^n <= 1024.
    pub fn make(p: u64, n: usize) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if n == 0 || n > 8 {
            return Err(Error::InvalidInput(format!(
                "extension degree {n} out of range 1..=8"
            )));
        }
        if (p as u128).pow(n as u32) > 1024 {
            return Err(Error::InvalidInput(format!(
                "field size {p}^{n} exceeds the 2^10 cap"
            )));
        }
        Ok(Self::extension_internal(p, n))
    }

    /// Internal constructor for residue-field towers; no size cap beyond
    /// what exponent arithmetic can represent.
    pub fn extension_internal(p: u64, n: usize) -> Fq {
        assert!(is_prime(p));
        assert!(n >= 1);
        assert!(
            (n as u32) * (64 - p.leading_zeros()) <= 120,
            "extension degree too large for exact exponent arithmetic"
        );
        let modulus = smallest_irreducible(p, n);
        Fq(Arc::new(FieldDesc { p, n, modulus }))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn n(&self) -> usize {
        self.0.n
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub fn desc(&self) -> &FieldDesc {
        &self.0
    }
    /// Field size p^n.
    pub fn q(&self) -> u128 {
        (self.0.p as u128).pow(self.0.n as u32)
    }

    pub fn zero(&self) -> FqElem {
        FqElem {
            field: self.clone(),
            c: vec![0; self.0.n],
        }
    }
    pub fn one(&self) -> FqElem {
        self.from_int(1)
    }
    pub fn from_int(&self, k: i64) -> FqElem {
        let p = self.0.p as i64;
        let r = k.rem_euclid(p) as u64;
        let mut c = vec![0; self.0.n];
        c[0] = r;
        FqElem {
            field: self.clone(),
            c,
        }
    }
    /// The class of X, a generator of the field over GF(p) when n > 1.
    pub fn gen(&self) -> FqElem {
        let mut c = vec![0; self.0.n];
        if self.0.n > 1 {
            c[1] = 1;
        } else {
            c[0] = 1;
        }
        FqElem {
            field: self.clone(),
            c,
        }
    }
    /// Element from little-endian coefficients mod p (length <= n).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() > self.0.n {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.0.n
            )));
        }
        let mut c = vec![0; self.0.n];
        for (i, &x) in coeffs.iter().enumerate() {
            c[i] = x % self.0.p;
        }
        Ok(FqElem {
            field: self.clone(),
            c,
        })
    }
    /// Element with the given integer encoding sum(c_i p^i).
    pub fn from_code(&self, mut code: u128) -> FqElem {
        let mut c = vec![0; self.0.n];
        for slot in c.iter_mut() {
            *slot = (code % self.0.p as u128) as u64;
            code /= self.0.p as u128;
        }
        FqElem {
            field: self.clone(),
            c,
        }
    }

    /// All field elements in encoding order. Only sensible for small q.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q()).map(move |code| self.from_code(code))
    }

    pub fn sample<R: rand::Rng>(&self, rng: &mut R) -> FqElem {
        let code = rng.gen_range(0..self.q());
        self.from_code(code)
    }
    pub fn sample_nonzero<R: rand::Rng>(&self, rng: &mut R) -> FqElem {
        let code = rng.gen_range(1..self.q());
        self.from_code(code)
    }
}

/// An element of GF(p^n): little-endian coefficients in the X-basis.
#[derive(Clone)]
pub struct FqElem {
    field: Fq,
    c: Vec<u64>,
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}
impl Eq for FqElem {}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.n() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.n() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "[{}]", self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
        }
    }
}

impl FqElem {
    pub fn field(&self) -> &Fq {
        &self.field
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }
    /// Integer encoding sum(c_i p^i); total order used for canonical picks.
    pub fn code(&self) -> u128 {
        let p = self.field.p() as u128;
        self.c
            .iter()
            .rev()
            .fold(0u128, |acc, &x| acc * p + x as u128)
    }

    fn check(&self, other: &FqElem) {
        assert!(
            self.field == other.field,
            "mixed fields: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    pub fn add(&self, other: &FqElem) -> FqElem {
        self.check(other);
        let p = self.field.p();
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + b) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            c,
        }
    }
    pub fn sub(&self, other: &FqElem) -> FqElem {
        self.check(other);
        let p = self.field.p();
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| (a + p - b) % p)
            .collect();
        FqElem {
            field: self.field.clone(),
            c,
        }
    }
    pub fn neg(&self) -> FqElem {
        let p = self.field.p();
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FqElem {
            field: self.field.clone(),
            c,
        }
    }

    pub fn mul(&self, other: &FqElem) -> FqElem {
        self.check(other);
        let p = self.field.p();
        let n = self.field.n();
        if n == 1 {
            return FqElem {
                field: self.field.clone(),
                c: vec![self.c[0] * other.c[0] % p],
            };
        }
        // schoolbook product, degree 2n-2
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // reduce X^k for k >= n using X^n = -(m_0 + ... + m_{n-1} X^{n-1})
        let m = self.field.modulus();
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..n {
                let sub = c * m[j] % p;
                prod[k - n + j] = (prod[k - n + j] + p - sub) % p;
            }
        }
        prod.truncate(n);
        FqElem {
            field: self.field.clone(),
            c: prod,
        }
    }

    pub fn mul_int(&self, k: i64) -> FqElem {
        self.mul(&self.field.from_int(k))
    }

    pub fn pow_u128(&self, mut e: u128) -> FqElem {
        let mut result = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<FqElem> {
        if e >= 0 {
            Ok(self.pow_u128(e as u128))
        } else {
            Ok(self.inv()?.pow_u128((-e) as u128))
        }
    }

    pub fn inv(&self) -> Result<FqElem> {
        if self.is_zero() {
            return Err(Error::ZeroInput("inverse of zero".into()));
        }
        Ok(self.pow_u128(self.field.q() - 2))
    }

    /// x -> x^p, the arithmetic Frobenius over the prime field.
    pub fn frobenius(&self) -> FqElem {
        self.pow_u128(self.field.p() as u128)
    }

    /// x -> x^(p^k).
    pub fn frobenius_iter(&self, k: usize) -> FqElem {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.frobenius();
        }
        x
    }

    /// Trace to the prime field, returned as an element of GF(p).
    pub fn trace_to_prime(&self) -> FqElem {
        let prime = Fq::extension_internal(self.field.p(), 1);
        let mut acc = self.clone();
        let mut x = self.clone();
        for _ in 1..self.field.n() {
            x = x.frobenius();
            acc = acc.add(&x);
        }
        // acc is fixed by Frobenius, so it lies in GF(p): coefficient 0
        debug_assert!(acc.c[1..].iter().all(|&v| v == 0));
        prime.from_int(acc.c[0] as i64)
    }

    /// Norm to the prime field.
    pub fn norm_to_prime(&self) -> FqElem {
        let prime = Fq::extension_internal(self.field.p(), 1);
        let mut acc = self.clone();
        let mut x = self.clone();
        for _ in 1..self.field.n() {
            x = x.frobenius();
            acc = acc.mul(&x);
        }
        debug_assert!(acc.c[1..].iter().all(|&v| v == 0));
        prime.from_int(acc.c[0] as i64)
    }

    /// Relative trace down to the subfield GF(p^k); k must divide n.
    /// The value is returned inside the subfield's canonical model.
    pub fn trace_to(&self, sub: &Fq) -> Result<FqElem> {
        let (k, d) = self.relative_degrees(sub)?;
        let mut acc = self.clone();
        let mut x = self.clone();
        for _ in 1..d {
            x = x.frobenius_iter(k);
            acc = acc.add(&x);
        }
        subfield_pullback(sub, &self.field, &acc)
    }

    /// Relative norm down to the subfield GF(p^k).
    pub fn norm_to(&self, sub: &Fq) -> Result<FqElem> {
        let (k, d) = self.relative_degrees(sub)?;
        let mut acc = self.clone();
        let mut x = self.clone();
        for _ in 1..d {
            x = x.frobenius_iter(k);
            acc = acc.mul(&x);
        }
        subfield_pullback(sub, &self.field, &acc)
    }

    fn relative_degrees(&self, sub: &Fq) -> Result<(usize, usize)> {
        if sub.p() != self.field.p() || self.field.n() % sub.n() != 0 {
            return Err(Error::RingMismatch(format!(
                "{:?} is not a subfield of {:?}",
                sub, self.field
            )));
        }
        Ok((sub.n(), self.field.n() / sub.n()))
    }

    /// Multiplicative order of a nonzero element (desk-scale search).
    pub fn mult_order(&self) -> Result<u128> {
        if self.is_zero() {
            return Err(Error::ZeroInput("order of zero".into()));
        }
        let mut ord = 1u128;
        let mut x = self.clone();
        while !x.is_one() {
            x = x.mul(self);
            ord += 1;
        }
        Ok(ord)
    }
}

// ---- embeddings between canonical fields ----

use std::collections::HashMap;
use std::sync::Mutex;

/// F_p-linear embedding GF(p^k) -> GF(p^(k*d)) determined by sending the
/// small generator to the smallest root of the small modulus in the big
/// field. Cached globally per (small, big) pair.
#[derive(Clone)]
pub struct Embedding {
    pub small: Fq,
    pub big: Fq,
    /// Image of the small field's generator X.
    pub gen_image: FqElem,
}

static EMBED_CACHE: Mutex<Option<HashMap<(u64, usize, usize), FqElem>>> = Mutex::new(None);

impl Embedding {
    pub fn new(small: &Fq, big: &Fq) -> Result<Embedding> {
        if small.p() != big.p() || big.n() % small.n() != 0 {
            return Err(Error::RingMismatch(format!(
                "no embedding {:?} -> {:?}",
                small, big
            )));
        }
        if small == big {
            return Ok(Embedding {
                small: small.clone(),
                big: big.clone(),
                gen_image: big.gen(),
            });
        }
        let key = (small.p(), small.n(), big.n());
        {
            let cache = EMBED_CACHE.lock().unwrap();
            if let Some(map) = cache.as_ref() {
                if let Some(img) = map.get(&key) {
                    return Ok(Embedding {
                        small: small.clone(),
                        big: big.clone(),
                        gen_image: img.clone(),
                    });
                }
            }
        }
        // Roots of the small modulus inside the big field; the modulus has
        // prime-field coefficients so it can be read directly in `big`.
        let poly = crate::poly::Poly::from_fn(big, small.n(), |i| {
            big.from_int(small.modulus()[i] as i64)
        });
        let mut roots = crate::poly::roots_in_field(&poly);
        if roots.is_empty() {
            return Err(Error::RingMismatch(format!(
                "modulus of {:?} has no root in {:?}",
                small, big
            )));
        }
        roots.sort_by_key(|r| r.code());
        let img = roots.remove(0);
        let mut cache = EMBED_CACHE.lock().unwrap();
        cache
            .get_or_insert_with(HashMap::new)
            .insert(key, img.clone());
        Ok(Embedding {
            small: small.clone(),
            big: big.clone(),
            gen_image: img,
        })
    }

    pub fn apply(&self, a: &FqElem) -> FqElem {
        assert!(a.field() == &self.small, "element not in the source field");
        // evaluate the coefficient polynomial at the generator image
        let mut acc = self.big.zero();
        for &c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.gen_image);
            acc = acc.add(&self.big.from_int(c as i64));
        }
        acc
    }
}

/// Express an element of `big` that is known to lie in the canonical
/// image of `sub` as an element of `sub` (inverse of [`Embedding`]).
pub fn subfield_pullback(sub: &Fq, big: &Fq, a: &FqElem) -> Result<FqElem> {
    if sub == big {
        return Ok(a.clone());
    }
    let emb = Embedding::new(sub, big)?;
    // Solve the F_p-linear system: sum_j x_j * emb(X^j) = a.
    let p = sub.p();
    let k = sub.n();
    let n = big.n();
    let mut cols: Vec<FqElem> = Vec::with_capacity(k);
    let mut pw = big.one();
    for _ in 0..k {
        cols.push(pw.clone());
        pw = pw.mul(&emb.gen_image);
    }
    // Gaussian elimination on an n x (k+1) matrix over GF(p).
    let mut mat = vec![vec![0u64; k + 1]; n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            mat[i][j] = col.coeffs()[i];
        }
    }
    for i in 0..n {
        mat[i][k] = a.coeffs()[i];
    }
    let mut row = 0usize;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(pr) = (row..n).find(|&r| mat[r][col] != 0) else {
            continue;
        };
        mat.swap(row, pr);
        let inv = fp_inv_scalar(mat[row][col], p);
        for x in mat[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..n {
            if r != row && mat[r][col] != 0 {
                let f = mat[r][col];
                for cc in 0..=k {
                    mat[r][cc] = (mat[r][cc] + p - f * mat[row][cc] % p) % p;
                }
            }
        }
        pivots.push((col, row));
        row += 1;
    }
    // consistency: remaining rows must be zero
    for r in row..n {
        if mat[r][k] != 0 {
            return Err(Error::RingMismatch(
                "element does not lie in the subfield".into(),
            ));
        }
    }
    let mut coeffs = vec![0u64; k];
    for &(col, r) in &pivots {
        coeffs[col] = mat[r][k];
    }
    sub.from_coeffs(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modulus_prime_field_is_x() {
        let f = Fq::make(5, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn modulus_gf4() {
        let f = Fq::make(2, 2).unwrap();
        // X^2 + X + 1 is the only irreducible monic quadratic over GF(2)
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn modulus_gf16_is_irreducible_by_exhaustion() {
        let f = Fq::make(2, 4).unwrap();
        let m = f.modulus();
        // independent oracle: no monic factor of degree 1 or 2 divides m
        for d in 1..=2 {
            for g in fp_monics(2, d) {
                let (_, r) = fp_divrem(m, &g, 2);
                assert!(!r.is_empty(), "{g:?} divides the GF(16) modulus");
            }
        }
    }

    #[test]
    fn modulus_gf9() {
        let f = Fq::make(3, 2).unwrap();
        // X^2 + 1: -1 is not a square mod 3
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn make_rejects_bad_input() {
        assert!(Fq::make(4, 1).is_err());
        assert!(Fq::make(5, 0).is_err());
        assert!(Fq::make(5, 9).is_err());
        assert!(Fq::make(2, 8).is_ok()); // 256 <= 1024
        assert!(Fq::make(5, 5).is_err()); // 3125 > 1024
    }

    #[test]
    fn trace_examples() {
        let f4 = Fq::make(2, 2).unwrap();
        let w = f4.gen();
        // trace(0) = 0
        assert!(f4.zero().trace_to_prime().is_zero());
        // omega + omega^2 = 1
        assert!(w.trace_to_prime().is_one());
        // trace is the identity on the prime field
        let f5 = Fq::make(5, 1).unwrap();
        assert_eq!(f5.from_int(3).trace_to_prime(), f5.from_int(3));
    }

    #[test]
    fn norm_examples() {
        let f4 = Fq::make(2, 2).unwrap();
        assert!(f4.one().norm_to_prime().is_one());
        // omega has order 3, so omega * omega^2 = 1
        assert!(f4.gen().norm_to_prime().is_one());
        // F_9 = F_3[i]/(i^2+1): norm(i) = i * i^3 = i^4, oracle by brute product
        let f9 = Fq::make(3, 2).unwrap();
        let i = f9.gen();
        let oracle = i.mul(&i.frobenius());
        assert_eq!(i.norm_to_prime().code(), oracle.code());
        assert!(i.norm_to_prime().is_one());
    }

    #[test]
    fn trace_additive_norm_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(p, n) in &[(2u64, 4usize), (3, 2), (5, 2)] {
            let f = Fq::extension_internal(p, n);
            for _ in 0..50 {
                let a = f.sample(&mut rng);
                let b = f.sample(&mut rng);
                assert_eq!(
                    a.add(&b).trace_to_prime(),
                    a.trace_to_prime().add(&b.trace_to_prime())
                );
                assert_eq!(
                    a.mul(&b).norm_to_prime(),
                    a.norm_to_prime().mul(&b.norm_to_prime())
                );
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_of_order_dividing_n() {
        for &(p, n) in &[(2u64, 2usize), (2, 4), (3, 2), (3, 4), (5, 2)] {
            let f = Fq::extension_internal(p, n);
            // exhaustive for q <= 81
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
                    assert_eq!(a.mul(&b).frobenius(), a.frobenius().mul(&b.frobenius()));
                }
                assert_eq!(a.frobenius_iter(n), a);
            }
        }
    }

    #[test]
    fn field_inverse() {
        let f = Fq::make(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let a = f.sample_nonzero(&mut rng);
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_err());
    }

    #[test]
    fn embedding_round_trip() {
        let small = Fq::extension_internal(5, 2);
        let big = Fq::extension_internal(5, 4);
        let emb = Embedding::new(&small, &big).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let a = small.sample(&mut rng);
            let b = small.sample(&mut rng);
            // ring homomorphism
            assert_eq!(
                emb.apply(&a.mul(&b)),
                emb.apply(&a).mul(&emb.apply(&b))
            );
            assert_eq!(emb.apply(&a.add(&b)), emb.apply(&a).add(&emb.apply(&b)));
            // pullback inverts
            let back = subfield_pullback(&small, &big, &emb.apply(&a)).unwrap();
            assert_eq!(back, a);
        }
    }

    #[test]
    fn relative_norm_transitive() {
        let f5 = Fq::extension_internal(5, 1);
        let f25 = Fq::extension_internal(5, 2);
        let f625 = Fq::extension_internal(5, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..25 {
            let a = f625.sample(&mut rng);
            let step = a.norm_to(&f25).unwrap().norm_to(&f5).unwrap();
            let direct = a.norm_to(&f5).unwrap();
            assert_eq!(step, direct);
            let tstep = a.trace_to(&f25).unwrap().trace_to(&f5).unwrap();
            assert_eq!(tstep, a.trace_to(&f5).unwrap());
        }
    }
}
