//! Cubic cyclic extensions L/F of finite fields with their Frobenius action,
//! plus the constructive solvers the descent chain needs: surjectivity of the
//! norm and Hilbert's Theorem 90.
//!
//! L = GF(q^3) is represented as a degree-3k extension of the prime field,
//! with the base F = GF(q) embedded through a computed ring embedding and the
//! order-3 automorphism rho: x -> x^q stored by its action on the power
//! basis. This avoids nested-tower arithmetic: all L-arithmetic happens in
//! one flat extension.

use crate::field::{FieldElement, FiniteField};
use crate::linalg::Mat;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtError {
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
    #[error("extension order {0} exceeds the desk-scale bound")]
    TooLarge(u128),
    #[error("norm equation has no solution for xi = 0")]
    ZeroNormInput,
    #[error("hilbert90 requires norm(mu) = 1")]
    NormNotOne,
}

/// Which nontrivial element of Gal(L/F) to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Aut {
    Rho,
    Theta,
}

/// The pair (L, rho): L = GF(q^3) over F = GF(q), rho the q-power Frobenius
/// generating Gal(L/F). Immutable after construction.
#[derive(Clone, Debug)]
pub struct CubicCyclicExtension {
    base: FiniteField,
    top: FiniteField,
    prime: FiniteField,
    /// rho(z^i) for the power basis z^i of L over GF(p).
    rho_img: Vec<FieldElement>,
    theta_img: Vec<FieldElement>,
    /// Powers beta^0..beta^{k-1} of the embedded root of the base modulus.
    embed_pows: Vec<FieldElement>,
    /// Left inverse of the embedding on GF(p)-coordinates (k x 3k).
    restrict_mat: Mat,
    /// Inverse of the L = F^3 coordinate matrix on the F-basis {1, z, z^2}.
    fcoord_inv: Mat,
    /// Deterministic generator of L^x and the norm of it (a generator of the
    /// embedded F^x).
    generator: FieldElement,
    norm_of_gen: FieldElement,
}

impl CubicCyclicExtension {
    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn top(&self) -> &FiniteField {
        &self.top
    }

    /// Base field order q.
    pub fn q(&self) -> u64 {
        self.base.order_u64()
    }

    pub fn generator(&self) -> FieldElement {
        self.generator
    }

    pub fn rho(&self, x: &FieldElement) -> FieldElement {
        self.apply_images(&self.rho_img, x)
    }

    pub fn theta(&self, x: &FieldElement) -> FieldElement {
        self.apply_images(&self.theta_img, x)
    }

    /// Apply rho^power (power taken mod 3).
    pub fn aut(&self, power: u8, x: &FieldElement) -> FieldElement {
        match power % 3 {
            0 => *x,
            1 => self.rho(x),
            _ => self.theta(x),
        }
    }

    pub fn aut_of(&self, a: Aut, x: &FieldElement) -> FieldElement {
        match a {
            Aut::Rho => self.rho(x),
            Aut::Theta => self.theta(x),
        }
    }

    fn apply_images(&self, img: &[FieldElement], x: &FieldElement) -> FieldElement {
        let mut acc = self.top.zero();
        for (i, base_img) in img.iter().enumerate() {
            let c = x.coeff(i);
            if c != 0 {
                acc = self.top.add(&acc, &self.top.scale(c, base_img));
            }
        }
        acc
    }

    /// rho as a 3k x 3k matrix over GF(p) acting on power-basis coordinates.
    pub fn rho_matrix(&self) -> Mat {
        let n = self.top.degree();
        Mat::from_fn(n, n, |i, j| self.prime.from_int(self.rho_img[j].coeff(i)))
    }

    /// Ring embedding F -> L.
    pub fn embed(&self, a: &FieldElement) -> FieldElement {
        let mut acc = self.top.zero();
        for (i, pow) in self.embed_pows.iter().enumerate() {
            let c = a.coeff(i);
            if c != 0 {
                acc = self.top.add(&acc, &self.top.scale(c, pow));
            }
        }
        acc
    }

    /// Inverse of the embedding; None if x is not in the embedded base field.
    pub fn restrict(&self, x: &FieldElement) -> Option<FieldElement> {
        let n = self.top.degree();
        let col: Vec<FieldElement> = (0..n).map(|i| self.prime.from_int(x.coeff(i))).collect();
        let a = self.restrict_mat.matvec(&self.prime, &col);
        let coeffs: Vec<u64> = a.iter().map(|e| e.coeff(0)).collect();
        let cand = self.base.from_coeffs(&coeffs);
        if self.embed(&cand) == *x {
            Some(cand)
        } else {
            None
        }
    }

    /// N_{L/F}(x) = x rho(x) rho^2(x), as a base-field element.
    pub fn norm(&self, x: &FieldElement) -> FieldElement {
        let t = self.norm_in_top(x);
        self.restrict(&t)
            .expect("norm lands in the base field by Galois invariance")
    }

    pub fn norm_in_top(&self, x: &FieldElement) -> FieldElement {
        let r = self.rho(x);
        let t = self.theta(x);
        self.top.mul(&self.top.mul(x, &r), &t)
    }

    /// Tr_{L/F}(x) = x + rho(x) + rho^2(x), as a base-field element.
    pub fn trace(&self, x: &FieldElement) -> FieldElement {
        let t = self
            .top
            .add(&self.top.add(x, &self.rho(x)), &self.theta(x));
        self.restrict(&t)
            .expect("trace lands in the base field by Galois invariance")
    }

    /// F-coordinates of x in the basis {1, z, z^2} of L over F.
    pub fn f_coords(&self, x: &FieldElement) -> [FieldElement; 3] {
        let n = self.top.degree();
        let k = self.base.degree();
        let col: Vec<FieldElement> = (0..n).map(|i| self.prime.from_int(x.coeff(i))).collect();
        let v = self.fcoord_inv.matvec(&self.prime, &col);
        let mut out = [self.base.zero(); 3];
        for (j, slot) in out.iter_mut().enumerate() {
            let coeffs: Vec<u64> = (0..k).map(|b| v[j * k + b].coeff(0)).collect();
            *slot = self.base.from_coeffs(&coeffs);
        }
        out
    }

    pub fn from_f_coords(&self, a: &[FieldElement; 3]) -> FieldElement {
        let z = self.top.gen();
        let mut acc = self.top.zero();
        let mut zpow = self.top.one();
        for aj in a {
            acc = self.top.add(&acc, &self.top.mul(&self.embed(aj), &zpow));
            zpow = self.top.mul(&zpow, &z);
        }
        acc
    }

    /// Solve N_{L/F}(eta) = xi for xi in F^x. The norm of the deterministic
    /// generator g generates the embedded F^x, so g^j is matched against xi
    /// by iterating norm(g)^j.
    pub fn solve_norm_equation(&self, xi: &FieldElement) -> Result<FieldElement, ExtError> {
        if xi.is_zero() {
            return Err(ExtError::ZeroNormInput);
        }
        let mut acc = self.base.one();
        let mut eta = self.top.one();
        let q = self.q();
        for _ in 0..q - 1 {
            if acc == *xi {
                return Ok(eta);
            }
            acc = self.base.mul(&acc, &self.norm_of_gen);
            eta = self.top.mul(&eta, &self.generator);
        }
        unreachable!("norm is surjective onto F^x over finite fields")
    }

    /// Hilbert 90: for norm-one mu, produce zeta != 0 with
    /// mu = zeta * aut(zeta)^{-1}, by the classical resolvent
    /// zeta = c + mu aut(c) + mu aut(mu) aut^2(c) scanned over power-basis
    /// elements c. The result is canonicalized so its first nonzero
    /// F-coordinate is 1 (in particular mu = 1 yields zeta = 1).
    pub fn hilbert90(&self, mu: &FieldElement, a: Aut) -> Result<FieldElement, ExtError> {
        if self.norm(mu) != self.base.one() {
            return Err(ExtError::NormNotOne);
        }
        let sigma = |x: &FieldElement| self.aut_of(a, x);
        let sigma2 = |x: &FieldElement| match a {
            Aut::Rho => self.theta(x),
            Aut::Theta => self.rho(x),
        };
        let mu_sig_mu = self.top.mul(mu, &sigma(mu));
        let n = self.top.degree();
        let mut zeta = self.top.zero();
        for i in 0..n {
            let mut coeffs = vec![0u64; n];
            coeffs[i] = 1;
            let c = self.top.from_coeffs(&coeffs);
            let cand = self.top.add(
                &self.top.add(&c, &self.top.mul(mu, &sigma(&c))),
                &self.top.mul(&mu_sig_mu, &sigma2(&c)),
            );
            if !cand.is_zero() {
                zeta = cand;
                break;
            }
        }
        assert!(!zeta.is_zero(), "resolvent is nonzero on some basis element");
        // canonical scale: first nonzero F-coordinate becomes 1
        let coords = self.f_coords(&zeta);
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .expect("zeta is nonzero");
        let scale = self.embed(&self.base.inv(lead).expect("nonzero"));
        let zeta = self.top.mul(&zeta, &scale);
        debug_assert_eq!(
            self.top
                .mul(&zeta, &self.top.inv(&sigma(&zeta)).expect("zeta != 0")),
            *mu
        );
        Ok(zeta)
    }
}

/// Build (L, rho) over the given base field. Deterministic: the modulus of L
/// is the lexicographically smallest irreducible, the embedded root is the
/// enumeration-smallest root of the base modulus, and the generator is the
/// enumeration-smallest element of full multiplicative order.
pub fn make_extension(base: &FiniteField) -> Result<CubicCyclicExtension, ExtError> {
    let p = base.characteristic();
    let k = base.degree();
    let top = FiniteField::new(p, 3 * k)?;
    if top.order() > 1 << 40 {
        return Err(ExtError::TooLarge(top.order()));
    }
    let prime = FiniteField::new(p, 1)?;
    let q = base.order_u64();
    let n = 3 * k;

    // rho(z^i) = (z^q)^i
    let z = top.gen();
    let zq = top.pow(&z, q as u128);
    let mut rho_img = Vec::with_capacity(n);
    let mut acc = top.one();
    for _ in 0..n {
        rho_img.push(acc);
        acc = top.mul(&acc, &zq);
    }
    let theta_img: Vec<FieldElement> = rho_img
        .iter()
        .map(|x| apply_images_raw(&top, &rho_img, x))
        .collect();

    // fixed space of rho = embedded GF(q): kernel of (rho - id) over GF(p)
    let fix_mat = Mat::from_fn(n, n, |i, j| {
        let r = rho_img[j].coeff(i);
        let idp = if i == j { 1 } else { 0 };
        prime.from_int((r + p - idp) % p)
    });
    let fixed = fix_mat.kernel_basis(&prime);
    assert_eq!(fixed.rows(), k, "fixed field of rho has F-dimension k");

    // root of the base modulus inside the fixed subspace, smallest by index
    let mods = base.modulus().to_vec();
    let mut beta: Option<FieldElement> = None;
    for idx in 0..q {
        // combination of the kernel basis with base-p digits of idx
        let mut digits = idx;
        let mut el = top.zero();
        for r in 0..k {
            let d = digits % p;
            digits /= p;
            if d != 0 {
                let row: Vec<u64> = (0..n).map(|c| fixed[(r, c)].coeff(0)).collect();
                let v = top.from_coeffs(&row);
                el = top.add(&el, &top.scale(d, &v));
            }
        }
        // evaluate the base modulus at el (coefficients are prime scalars)
        let mut val = top.zero();
        let mut pow = top.one();
        for &c in &mods {
            if c != 0 {
                val = top.add(&val, &top.scale(c, &pow));
            }
            pow = top.mul(&pow, &el);
        }
        if val.is_zero() {
            beta = match beta {
                None => Some(el),
                Some(b) if top.index_of(&el) < top.index_of(&b) => Some(el),
                keep => keep,
            };
        }
    }
    let beta = beta.expect("the base modulus splits in L");

    let mut embed_pows = Vec::with_capacity(k);
    let mut bp = top.one();
    for _ in 0..k {
        embed_pows.push(bp);
        bp = top.mul(&bp, &beta);
    }

    // left inverse of the embedding matrix E (n x k) via rref([E | I])
    let mut aug = Mat::zeros(n, k + n);
    for (j, pow) in embed_pows.iter().enumerate() {
        for i in 0..n {
            aug[(i, j)] = prime.from_int(pow.coeff(i));
        }
    }
    for i in 0..n {
        aug[(i, k + i)] = prime.one();
    }
    let pivots = aug.rref_in_place(&prime);
    assert!(
        pivots.len() >= k && pivots[..k] == (0..k).collect::<Vec<_>>()[..],
        "embedding has full column rank"
    );
    let restrict_mat = Mat::from_fn(k, n, |i, j| aug[(i, k + j)]);

    // coordinate matrix for L = F + Fz + Fz^2: columns beta^b z^j
    let mut cmat = Mat::zeros(n, n);
    let mut zpow = top.one();
    for j in 0..3 {
        for (b, pow) in embed_pows.iter().enumerate() {
            let v = top.mul(pow, &zpow);
            for i in 0..n {
                cmat[(i, j * k + b)] = prime.from_int(v.coeff(i));
            }
        }
        zpow = top.mul(&zpow, &z);
    }
    let fcoord_inv = cmat
        .inverse(&prime)
        .expect("{1, z, z^2} is an F-basis of L");

    // deterministic multiplicative generator
    let order = top.order_u64() - 1;
    let primes = prime_divisors_u64(order);
    let generator = top
        .elements()
        .skip(1)
        .find(|g| {
            primes
                .iter()
                .all(|&r| top.pow(g, (order / r) as u128) != top.one())
        })
        .expect("L^x is cyclic");

    let mut ext = CubicCyclicExtension {
        base: base.clone(),
        top,
        prime,
        rho_img,
        theta_img,
        embed_pows,
        restrict_mat,
        fcoord_inv,
        generator,
        norm_of_gen: FieldElement::ZERO,
    };
    ext.norm_of_gen = ext.norm(&generator);
    Ok(ext)
}

fn apply_images_raw(top: &FiniteField, img: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = top.zero();
    for (i, base_img) in img.iter().enumerate() {
        let c = x.coeff(i);
        if c != 0 {
            acc = top.add(&acc, &top.scale(c, base_img));
        }
    }
    acc
}

fn prime_divisors_u64(mut n: u64) -> Vec<u64> {
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
