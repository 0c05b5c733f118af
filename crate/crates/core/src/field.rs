//! Exact arithmetic in finite fields GF(p^k).
//!
//! Elements are coordinate vectors in the power basis of a monic irreducible
//! modulus over GF(p), stored inline so arithmetic never allocates. The
//! modulus is chosen deterministically (lexicographically smallest monic
//! irreducible on the coefficient list `[c0, .., c_{k-1}]`), so two fields
//! built from the same `(p, k)` are identical and serialized structures are
//! portable across runs.

use std::fmt;
use thiserror::Error;

/// Highest supported extension degree over the prime field. Cubic extensions
/// of GF(p^k) need degree `3k`, so this bounds `k` at 5 for towers.
pub const MAX_DEG: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} too large (limit {1})")]
    CharTooLarge(u64, u64),
    #[error("extension degree {0} out of range 1..={1}")]
    DegreeOutOfRange(usize, usize),
    #[error("modulus has wrong length: expected {expected}, got {got}")]
    ModulusLength { expected: usize, got: usize },
    #[error("modulus is not monic")]
    ModulusNotMonic,
    #[error("modulus coefficient {0} not reduced mod {1}")]
    ModulusNotReduced(u64, u64),
    #[error("modulus is reducible over GF({0})")]
    ModulusReducible(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no primitive cube root of unity: field order is not 1 mod 3")]
    NoCubeRoot,
}

/// Element of a finite field: coefficients of the power-basis expansion,
/// reduced mod p and zero-padded to `MAX_DEG`.
///
/// The element does not carry a field pointer; all arithmetic goes through
/// [`FiniteField`] methods, mirroring how the matrix and tensor kernels pass
/// one field handle around.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    c: [u16; MAX_DEG],
}

impl FieldElement {
    pub(crate) const ZERO: FieldElement = FieldElement { c: [0; MAX_DEG] };

    /// Raw coefficient access (index beyond the field degree is always 0).
    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        if i < MAX_DEG {
            self.c[i] as u64
        } else {
            0
        }
    }

    /// Coefficients truncated to the field degree.
    pub fn coeffs(&self, k: usize) -> Vec<u64> {
        (0..k).map(|i| self.c[i] as u64).collect()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.c.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.c[..last.max(1)])
    }
}

/// A finite field GF(p^k), defined by a monic irreducible modulus over GF(p).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteField {
    p: u64,
    k: usize,
    /// Monic modulus, length k+1, coefficient i of x^i.
    modulus: Vec<u64>,
}

impl FiniteField {
    /// Largest supported characteristic. Coefficient arithmetic accumulates
    /// up to `MAX_DEG * (p-1)^2` in a u64, so this stays conservative.
    pub const MAX_CHAR: u64 = 1 << 15;

    /// Build GF(p^k) with the deterministic modulus: the lexicographically
    /// smallest monic irreducible on the list `[c0, .., c_{k-1}]`.
    pub fn new(p: u64, k: usize) -> Result<FiniteField, FieldError> {
        check_char(p)?;
        if k == 0 || k > MAX_DEG - 1 {
            return Err(FieldError::DegreeOutOfRange(k, MAX_DEG - 1));
        }
        let modulus = smallest_irreducible(p, k);
        Ok(FiniteField { p, k, modulus })
    }

    /// Build GF(p^k) with an explicit monic irreducible modulus
    /// `[c0, .., ck]` (ck = 1).
    pub fn with_modulus(p: u64, k: usize, modulus: &[u64]) -> Result<FiniteField, FieldError> {
        check_char(p)?;
        if k == 0 || k > MAX_DEG - 1 {
            return Err(FieldError::DegreeOutOfRange(k, MAX_DEG - 1));
        }
        if modulus.len() != k + 1 {
            return Err(FieldError::ModulusLength {
                expected: k + 1,
                got: modulus.len(),
            });
        }
        if modulus[k] != 1 {
            return Err(FieldError::ModulusNotMonic);
        }
        for &c in modulus {
            if c >= p {
                return Err(FieldError::ModulusNotReduced(c, p));
            }
        }
        if !is_irreducible(p, modulus) {
            return Err(FieldError::ModulusReducible(p));
        }
        Ok(FiniteField {
            p,
            k,
            modulus: modulus.to_vec(),
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.k
    }

    /// Modulus coefficients `[c0, .., ck]`.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field order p^k.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    /// Field order as u64; panics if it does not fit (desk-scale guard).
    pub fn order_u64(&self) -> u64 {
        u64::try_from(self.order()).expect("field order exceeds u64")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Scalar embedding of an integer (reduced mod p).
    pub fn from_int(&self, n: u64) -> FieldElement {
        let mut c = [0u16; MAX_DEG];
        c[0] = (n % self.p) as u16;
        FieldElement { c }
    }

    /// Element with the given power-basis coefficients (reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.k, "coefficient list too long");
        let mut c = [0u16; MAX_DEG];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = (v % self.p) as u16;
        }
        FieldElement { c }
    }

    /// The power-basis generator x (root of the modulus). For k = 1 the
    /// modulus is x, so the generator is 0.
    pub fn gen(&self) -> FieldElement {
        if self.k == 1 {
            let root = (self.p - self.modulus[0]) % self.p;
            return self.from_int(root);
        }
        let mut c = [0u16; MAX_DEG];
        c[1] = 1;
        FieldElement { c }
    }

    /// Deterministic enumeration: index n in 0..order maps to the element
    /// with base-p digits of n as coefficients (little-endian).
    pub fn element_from_index(&self, mut n: u64) -> FieldElement {
        let mut c = [0u16; MAX_DEG];
        for slot in c.iter_mut().take(self.k) {
            *slot = (n % self.p) as u16;
            n /= self.p;
        }
        debug_assert_eq!(n, 0, "index out of range");
        FieldElement { c }
    }

    pub fn index_of(&self, a: &FieldElement) -> u64 {
        let mut n = 0u64;
        for i in (0..self.k).rev() {
            n = n * self.p + a.c[i] as u64;
        }
        n
    }

    /// All field elements in deterministic index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order_u64()).map(move |i| self.element_from_index(i))
    }

    #[inline]
    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut c = [0u16; MAX_DEG];
        for i in 0..self.k {
            let s = a.c[i] as u64 + b.c[i] as u64;
            c[i] = (s % self.p) as u16;
        }
        FieldElement { c }
    }

    #[inline]
    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut c = [0u16; MAX_DEG];
        for i in 0..self.k {
            let s = a.c[i] as u64 + self.p - b.c[i] as u64;
            c[i] = (s % self.p) as u16;
        }
        FieldElement { c }
    }

    #[inline]
    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        self.sub(&FieldElement::ZERO, a)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let k = self.k;
        let mut t = [0u64; 2 * MAX_DEG];
        for i in 0..k {
            let ai = a.c[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..k {
                t[i + j] += ai * b.c[j] as u64;
            }
        }
        self.reduce(&mut t, 2 * k - 1)
    }

    /// Multiply by a prime-field scalar.
    pub fn scale(&self, s: u64, a: &FieldElement) -> FieldElement {
        let s = s % self.p;
        let mut c = [0u16; MAX_DEG];
        for i in 0..self.k {
            c[i] = ((a.c[i] as u64 * s) % self.p) as u16;
        }
        FieldElement { c }
    }

    fn reduce(&self, t: &mut [u64; 2 * MAX_DEG], top: usize) -> FieldElement {
        let k = self.k;
        let p = self.p;
        for i in (k..=top).rev() {
            let v = t[i] % p;
            t[i] = 0;
            if v != 0 {
                for j in 0..k {
                    let m = self.modulus[j];
                    if m != 0 {
                        t[i - k + j] += v * (p - m);
                    }
                }
            }
            // keep accumulators small
            for j in 0..k {
                t[i - k + j] %= p;
            }
        }
        let mut c = [0u16; MAX_DEG];
        for i in 0..k {
            c[i] = (t[i] % p) as u16;
        }
        FieldElement { c }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u128) -> FieldElement {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        // a^(q-2) = a^{-1}; exact and branch-free for small orders.
        Ok(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Whether a is a square in the field. Every element of a char-2 field
    /// is a square.
    pub fn is_square(&self, a: &FieldElement) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        let e = (self.order() - 1) / 2;
        self.pow(a, e) == self.one()
    }

    /// Primitive cube root of unity: the first element in enumeration order
    /// with multiplicative order 3. Requires q = 1 mod 3.
    pub fn primitive_cube_root(&self) -> Result<FieldElement, FieldError> {
        if self.order() % 3 != 1 {
            return Err(FieldError::NoCubeRoot);
        }
        let one = self.one();
        for w in self.elements() {
            if w != one && self.pow(&w, 3) == one {
                return Ok(w);
            }
        }
        unreachable!("q = 1 mod 3 guarantees an order-3 element")
    }

    /// Pretty-print an element as a coefficient vector.
    pub fn fmt_element(&self, a: &FieldElement) -> String {
        let v: Vec<String> = (0..self.k).map(|i| a.c[i].to_string()).collect();
        format!("[{}]", v.join(", "))
    }
}

fn check_char(p: u64) -> Result<(), FieldError> {
    if p > FiniteField::MAX_CHAR {
        return Err(FieldError::CharTooLarge(p, FiniteField::MAX_CHAR));
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    Ok(())
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Split q into (p, k) with p prime and q = p^k.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut k = 0;
            let mut m = q;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over GF(p) for modulus selection. Construction-time
// only; allocation here is fine.
// ---------------------------------------------------------------------------

fn poly_trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(p: u64, a: &[u64], m: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let mut m = m.to_vec();
    poly_trim(&mut m);
    let dm = m.len() - 1;
    if dm == 0 {
        // reduction modulo a nonzero constant
        return vec![0];
    }
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        if c != 0 {
            for i in 0..=dm {
                let sub = (c * m[i]) % p;
                r[dr - dm + i] = (r[dr - dm + i] + p - sub) % p;
            }
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(p: u64, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut t = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            t[i + j] = (t[i + j] + ai * bj) % p;
        }
    }
    poly_rem(p, &t, m)
}

fn poly_powmod(p: u64, a: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut base = poly_rem(p, a, m);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(p, &acc, &base, m);
        }
        base = poly_mulmod(p, &base, &base, m);
        e >>= 1;
    }
    acc
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p prime and a != 0 mod p.
    mod_pow(a % p, p - 2, p)
}

fn mod_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin irreducibility test for a monic polynomial of degree k over GF(p):
/// x^(p^k) = x mod f, and gcd(x^(p^(k/r)) - x, f) = 1 for each prime r | k.
fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    // Iterate Frobenius: h_m = x^(p^m) mod f via h_{m+1} = h_m^p mod f.
    let frob_steps = |m: usize| -> Vec<u64> {
        let mut h = poly_rem(p, &x, f);
        for _ in 0..m {
            h = poly_powmod(p, &h, p, f);
        }
        h
    };
    let hk = frob_steps(k);
    let xr = poly_rem(p, &x, f);
    if hk != xr {
        return false;
    }
    for r in prime_divisors(k as u64) {
        let m = k / r as usize;
        let hm = frob_steps(m);
        // gcd(h_m - x, f) must be 1
        let mut diff = vec![0u64; hm.len().max(2)];
        for (i, &c) in hm.iter().enumerate() {
            diff[i] = c;
        }
        diff[1] = (diff[1] + p - 1) % p;
        poly_trim(&mut diff);
        let g = poly_gcd(p, f, &diff);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree k over GF(p),
/// comparing the coefficient list [c0, .., c_{k-1}].
fn smallest_irreducible(p: u64, k: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; k];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if is_irreducible(p, &f) {
            return f;
        }
        // odometer increment, last coordinate fastest
        let mut i = k;
        loop {
            if i == 0 {
                unreachable!("an irreducible of degree {k} over GF({p}) exists");
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < p {
                break;
            }
            coeffs[i] = 0;
        }
    }
}
