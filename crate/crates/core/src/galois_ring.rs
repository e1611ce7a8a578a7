//! Galois rings GR(p^N, n) = (Z/p^N)[X]/(m), where m is the canonical
//! lift of the GF(p^n) modulus. These model truncated Witt vectors
//! W_N(F_q) and provide the characteristic-zero home for ghost
//! coordinates.
//!
//! Division by p is only determined modulo p^(N-1); the ghost recovery
//! pipeline in [`crate::witt`] is arranged so that the lost top digit
//! never influences a value that is read out.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};

#[derive(Debug, PartialEq, Eq)]
pub struct GrDesc {
    pub p: u64,
    pub n: usize,
    /// p-adic precision N >= 1.
    pub precision: u32,
    /// p^N.
    pub pn: u64,
    /// Lift of the field modulus, little-endian mod p^N, length n+1.
    pub modulus: Vec<u64>,
}

/// Handle to a Galois ring; cloning is O(1).
#[derive(Clone)]
pub struct GaloisRing {
    desc: Arc<GrDesc>,
    residue: Fq,
}

impl PartialEq for GaloisRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.desc, &other.desc) || *self.desc == *other.desc
    }
}
impl Eq for GaloisRing {}

impl fmt::Debug for GaloisRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GR({}^{}, {})", self.desc.p, self.desc.precision, self.desc.n)
    }
}

impl GaloisRing {
    /// The Galois ring over the given residue field at precision N.
    pub fn over(field: &Fq, precision: u32) -> GaloisRing {
        assert!(precision >= 1);
        let p = field.p();
        let pn = (p as u128).pow(precision);
        assert!(pn <= u64::MAX as u128 / 2, "p^N too large for u64 coefficients");
        let pn = pn as u64;
        let modulus = field.modulus().to_vec(); // canonical lift: same digits
        GaloisRing {
            desc: Arc::new(GrDesc {
                p,
                n: field.n(),
                precision,
                pn,
                modulus,
            }),
            residue: field.clone(),
        }
    }

    pub fn p(&self) -> u64 {
        self.desc.p
    }
    pub fn n(&self) -> usize {
        self.desc.n
    }
    pub fn precision(&self) -> u32 {
        self.desc.precision
    }
    pub fn pn(&self) -> u64 {
        self.desc.pn
    }
    /// The residue field GF(p^n).
    pub fn residue_field(&self) -> &Fq {
        &self.residue
    }
    /// Size of the Teichmuller section, q = p^n.
    pub fn q(&self) -> u128 {
        (self.desc.p as u128).pow(self.desc.n as u32)
    }

    pub fn zero(&self) -> GrElem {
        GrElem {
            ring: self.clone(),
            c: vec![0; self.desc.n],
        }
    }
    pub fn one(&self) -> GrElem {
        self.from_int(1)
    }
    pub fn from_int(&self, k: i64) -> GrElem {
        let pn = self.desc.pn as i64;
        let mut c = vec![0; self.desc.n];
        c[0] = k.rem_euclid(pn) as u64;
        GrElem {
            ring: self.clone(),
            c,
        }
    }
    pub fn from_coeffs(&self, coeffs: &[u64]) -> GrElem {
        let mut c = vec![0; self.desc.n];
        for (i, &x) in coeffs.iter().enumerate() {
            c[i] = x % self.desc.pn;
        }
        GrElem {
            ring: self.clone(),
            c,
        }
    }

    /// Coefficientwise canonical lift (digits in [0, p)).
    pub fn lift_naive(&self, a: &FqElem) -> GrElem {
        assert!(a.field() == &self.residue, "element not in the residue field");
        self.from_coeffs(a.coeffs())
    }

    /// The Teichmuller lift: the unique x with x^q = x reducing to a.
    /// Computed by iterating b -> b^q, which gains one p-adic digit per
    /// round.
    pub fn teichmuller(&self, a: &FqElem) -> GrElem {
        let mut x = self.lift_naive(a);
        for _ in 1..self.desc.precision {
            x = x.pow_u128(self.q());
        }
        x
    }
}

/// Element of GR(p^N, n): little-endian coefficients mod p^N.
#[derive(Clone)]
pub struct GrElem {
    ring: GaloisRing,
    c: Vec<u64>,
}

impl PartialEq for GrElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.c == other.c
    }
}
impl Eq for GrElem {}

impl fmt::Debug for GrElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.n() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl GrElem {
    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
    /// Value of an element of the prime ring GR(p^N, 1).
    pub fn as_int(&self) -> u64 {
        assert!(self.c[1..].iter().all(|&x| x == 0), "not a prime-ring element");
        self.c[0]
    }

    fn check(&self, other: &GrElem) {
        assert!(
            self.ring == other.ring,
            "mixed rings: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &GrElem) -> GrElem {
        self.check(other);
        let pn = self.ring.pn();
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| {
                let s = a as u128 + b as u128;
                (s % pn as u128) as u64
            })
            .collect();
        GrElem {
            ring: self.ring.clone(),
            c,
        }
    }
    pub fn sub(&self, other: &GrElem) -> GrElem {
        self.check(other);
        let pn = self.ring.pn() as u128;
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| ((a as u128 + pn - b as u128) % pn) as u64)
            .collect();
        GrElem {
            ring: self.ring.clone(),
            c,
        }
    }
    pub fn neg(&self) -> GrElem {
        let pn = self.ring.pn();
        let c = self.c.iter().map(|&a| (pn - a) % pn).collect();
        GrElem {
            ring: self.ring.clone(),
            c,
        }
    }

    pub fn mul(&self, other: &GrElem) -> GrElem {
        self.check(other);
        let pn = self.ring.pn() as u128;
        let n = self.ring.n();
        if n == 1 {
            return GrElem {
                ring: self.ring.clone(),
                c: vec![(self.c[0] as u128 * other.c[0] as u128 % pn) as u64],
            };
        }
        let mut prod = vec![0u128; 2 * n - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u128 * b as u128) % pn;
            }
        }
        let m = &self.ring.desc.modulus;
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..n {
                let sub = c * m[j] as u128 % pn;
                prod[k - n + j] = (prod[k - n + j] + pn - sub) % pn;
            }
        }
        prod.truncate(n);
        GrElem {
            ring: self.ring.clone(),
            c: prod.into_iter().map(|x| x as u64).collect(),
        }
    }

    pub fn mul_int(&self, k: i64) -> GrElem {
        self.mul(&self.ring.from_int(k))
    }

    pub fn pow_u128(&self, mut e: u128) -> GrElem {
        let mut result = self.ring.one();
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

    /// Reduction mod p into the residue field.
    pub fn reduce(&self) -> FqElem {
        let p = self.ring.p();
        let coeffs: Vec<u64> = self.c.iter().map(|&x| x % p).collect();
        self.ring.residue.from_coeffs(&coeffs).unwrap()
    }

    pub fn is_unit(&self) -> bool {
        !self.reduce().is_zero()
    }

    /// Inverse of a unit via Hensel lifting from the residue field.
    pub fn inv(&self) -> Result<GrElem> {
        let r = self.reduce();
        if r.is_zero() {
            return Err(Error::ZeroInput("inverse of a non-unit".into()));
        }
        let mut x = self.ring.lift_naive(&r.inv()?);
        // x -> x(2 - a x) doubles the number of correct digits
        let two = self.ring.from_int(2);
        for _ in 0..self.ring.precision().ilog2() + 1 {
            x = x.mul(&two.sub(&self.mul(&x)));
        }
        Ok(x)
    }

    /// Exact division by p. The result is determined mod p^(N-1); the top
    /// digit of the representative is the integer quotient's digit.
    pub fn div_p(&self) -> Result<GrElem> {
        let p = self.ring.p();
        if self.c.iter().any(|&x| x % p != 0) {
            return Err(Error::NonIntegralGhost);
        }
        let c = self.c.iter().map(|&x| x / p).collect();
        Ok(GrElem {
            ring: self.ring.clone(),
            c,
        })
    }

    /// Exact division by p^k.
    pub fn div_p_pow(&self, k: u32) -> Result<GrElem> {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.div_p()?;
        }
        Ok(x)
    }

    /// Teichmuller digit decomposition: a = sum p^k [a_k], digits in F_q.
    pub fn digits(&self) -> Vec<FqElem> {
        let mut x = self.clone();
        let mut out = Vec::with_capacity(self.ring.precision() as usize);
        for _ in 0..self.ring.precision() {
            let d = x.reduce();
            out.push(d.clone());
            x = x.sub(&self.ring.teichmuller(&d)).div_p().expect("digit step is exact");
        }
        out
    }

    /// The Frobenius lift: fixes Z/p^N and sends Teichmuller elements to
    /// their p-th powers.
    pub fn frobenius(&self) -> GrElem {
        let mut acc = self.ring.zero();
        let mut scale = self.ring.one();
        let p = self.ring.p() as i64;
        for d in self.digits() {
            let t = self.ring.teichmuller(&d.frobenius());
            acc = acc.add(&t.mul(&scale));
            scale = scale.mul_int(p);
        }
        acc
    }

    /// Trace over the prime ring: sum of the n Frobenius conjugates,
    /// returned in GR(p^N, 1) = Z/p^N.
    pub fn trace(&self) -> GrElem {
        let mut acc = self.clone();
        let mut x = self.clone();
        for _ in 1..self.ring.n() {
            x = x.frobenius();
            acc = acc.add(&x);
        }
        debug_assert!(acc.c[1..].iter().all(|&v| v == 0));
        let prime = GaloisRing::over(
            &Fq::extension_internal(self.ring.p(), 1),
            self.ring.precision(),
        );
        prime.from_int(acc.c[0] as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample(ring: &GaloisRing, rng: &mut ChaCha8Rng) -> GrElem {
        use rand::Rng;
        let coeffs: Vec<u64> = (0..ring.n()).map(|_| rng.gen_range(0..ring.pn())).collect();
        ring.from_coeffs(&coeffs)
    }

    #[test]
    fn teichmuller_fixed_points() {
        let f4 = Fq::make(2, 2).unwrap();
        let gr = GaloisRing::over(&f4, 4);
        assert!(gr.teichmuller(&f4.zero()).is_zero());
        assert_eq!(gr.teichmuller(&f4.one()), gr.one());
        let f2 = Fq::make(2, 1).unwrap();
        let gr8 = GaloisRing::over(&f2, 3);
        assert_eq!(gr8.teichmuller(&f2.one()), gr8.one());
    }

    #[test]
    fn teichmuller_gf4_cube_root_of_unity() {
        let f4 = Fq::make(2, 2).unwrap();
        let gr = GaloisRing::over(&f4, 2);
        let t = gr.teichmuller(&f4.gen());
        // t^3 = 1 and t reduces to omega
        assert_eq!(t.pow_u128(3), gr.one());
        assert_eq!(t.reduce(), f4.gen());
    }

    #[test]
    fn teichmuller_is_multiplicative_and_reduces() {
        for &(p, n) in &[(2u64, 2usize), (3, 1), (5, 1), (5, 2)] {
            let f = Fq::extension_internal(p, n);
            for nn in 1..=6u32 {
                let gr = GaloisRing::over(&f, nn);
                for a in f.elements() {
                    let t = gr.teichmuller(&a);
                    assert_eq!(t.reduce(), a);
                    assert_eq!(t.pow_u128(gr.q()), t);
                }
            }
        }
    }

    #[test]
    fn arithmetic_commutes_with_reduction() {
        let f9 = Fq::make(3, 2).unwrap();
        let gr = GaloisRing::over(&f9, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let a = sample(&gr, &mut rng);
            let b = sample(&gr, &mut rng);
            assert_eq!(a.add(&b).reduce(), a.reduce().add(&b.reduce()));
            assert_eq!(a.mul(&b).reduce(), a.reduce().mul(&b.reduce()));
            assert_eq!(a.neg().reduce(), a.reduce().neg());
        }
    }

    #[test]
    fn unit_inverse() {
        let f5 = Fq::make(5, 1).unwrap();
        let gr = GaloisRing::over(&f5, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let a = sample(&gr, &mut rng);
            if !a.is_unit() {
                assert!(a.inv().is_err());
                continue;
            }
            assert_eq!(a.mul(&a.inv().unwrap()), gr.one());
        }
    }

    #[test]
    fn trace_examples() {
        // trace of 1 in GR(4, 2) is 2
        let f4 = Fq::make(2, 2).unwrap();
        let gr = GaloisRing::over(&f4, 2);
        assert_eq!(gr.one().trace().as_int(), 2);
        // Teich(omega) + Teich(omega^2) reduces to gf-trace(omega) = 1
        let t = gr.teichmuller(&f4.gen());
        assert_eq!(t.trace().as_int() % 2, 1);
        // linearity in p * u
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let u = sample(&gr, &mut rng);
            assert_eq!(u.mul_int(2).trace(), u.trace().mul_int(2));
        }
    }

    #[test]
    fn trace_reduces_to_field_trace() {
        let f9 = Fq::make(3, 2).unwrap();
        let gr = GaloisRing::over(&f9, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let a = sample(&gr, &mut rng);
            let lhs = a.trace().as_int() % 3;
            let rhs = a.reduce().trace_to_prime().coeffs()[0];
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn frobenius_is_ring_hom_on_samples() {
        let f4 = Fq::make(2, 2).unwrap();
        let gr = GaloisRing::over(&f4, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let a = sample(&gr, &mut rng);
            let b = sample(&gr, &mut rng);
            assert_eq!(a.add(&b).frobenius(), a.frobenius().add(&b.frobenius()));
            assert_eq!(a.mul(&b).frobenius(), a.frobenius().mul(&b.frobenius()));
        }
    }

    #[test]
    fn div_p_exactness() {
        let f5 = Fq::make(5, 1).unwrap();
        let gr = GaloisRing::over(&f5, 3);
        assert_eq!(gr.from_int(25).div_p().unwrap(), gr.from_int(5));
        assert!(gr.from_int(7).div_p().is_err());
    }
}
