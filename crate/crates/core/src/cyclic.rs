//! Cyclic compositions (V, L, Q, rho, *) of dimension 8 over a cubic cyclic
//! extension, with the twisted product law
//!
//!   (lambda x) * y = rho(lambda) (x * y),   x * (y lambda) = (x * y) theta(lambda).
//!
//! The product is stored only on the fixed basis; every evaluation expands
//! through the semilinear law in one routine, so the twist conventions live
//! in exactly one place. Includes the induced construction from a symmetric
//! composition, order-3 semilinear isotopies, and the split triple form over
//! L x L x L.

use crate::extension::CubicCyclicExtension;
use crate::field::{FieldElement, FiniteField};
use crate::linalg::{
    bilinear_eval, polar_matrix, quad_eq, quad_eval, quad_normalize, Mat, Tensor3,
};
use crate::report::CheckReport;
use crate::sample::SampleStream;
use crate::symmetric::SymmetricComposition;
use thiserror::Error;

pub const DIM: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycError {
    #[error("symmetric composition field does not match the extension base")]
    FieldMismatch,
    #[error("composition does not carry the induced-basis tag")]
    NotInducedBasis,
    #[error("map is not invertible")]
    NotInvertible,
    #[error("map is not a semilinear isotopy: {0}")]
    NotIsotopy(String),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// (V, L, Q, rho, *) with V = L^8 on a fixed basis.
#[derive(Clone, Debug)]
pub struct CyclicComposition {
    ext: CubicCyclicExtension,
    gram: Mat,
    star: Tensor3,
    induced_basis: bool,
}

impl CyclicComposition {
    pub fn from_parts(
        ext: CubicCyclicExtension,
        gram: Mat,
        star: Tensor3,
        induced_basis: bool,
    ) -> CyclicComposition {
        assert_eq!(gram.rows(), DIM);
        assert_eq!(star.dim(), DIM);
        let gram = quad_normalize(ext.top(), &gram);
        CyclicComposition {
            ext,
            gram,
            star,
            induced_basis,
        }
    }

    pub fn ext(&self) -> &CubicCyclicExtension {
        &self.ext
    }

    pub fn top(&self) -> &FiniteField {
        self.ext.top()
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    pub fn star_tensor(&self) -> &Tensor3 {
        &self.star
    }

    pub fn is_induced_basis(&self) -> bool {
        self.induced_basis
    }

    pub fn polar(&self) -> Mat {
        polar_matrix(self.top(), &self.gram)
    }

    pub fn qform(&self, x: &[FieldElement]) -> FieldElement {
        quad_eval(self.top(), &self.gram, x)
    }

    pub fn bilinear(&self, x: &[FieldElement], y: &[FieldElement]) -> FieldElement {
        bilinear_eval(self.top(), &self.polar(), x, y)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[FieldElement] {
        self.star.product(i, j)
    }

    /// The twisted product: x * y = sum rho(x_i) theta(y_j) (e_i * e_j).
    pub fn star(&self, x: &[FieldElement], y: &[FieldElement]) -> Vec<FieldElement> {
        let f = self.top();
        let mut out = vec![f.zero(); DIM];
        for i in 0..DIM {
            if x[i].is_zero() {
                continue;
            }
            let xi = self.ext.rho(&x[i]);
            for j in 0..DIM {
                if y[j].is_zero() {
                    continue;
                }
                let c = f.mul(&xi, &self.ext.theta(&y[j]));
                let prod = self.star.product(i, j);
                for k in 0..DIM {
                    if !prod[k].is_zero() {
                        out[k] = f.add(&out[k], &f.mul(&c, &prod[k]));
                    }
                }
            }
        }
        out
    }

    /// Axiom validation: polar nondegeneracy and the cyclic trilinear
    /// identity exhaustively on the basis, the quartic identities on seeded
    /// random pairs. Exact equality throughout.
    pub fn validate(&self, seed: u64) -> CheckReport {
        let f = self.top();
        let ext = &self.ext;
        let mut report = CheckReport::new();

        let nondeg = !self.polar().det(f).is_zero();
        report.record(
            "polar-form-nondegenerate",
            (!nondeg).then(|| "det(polar) = 0".to_string()),
        );

        // b(x*y, z) = rho(b(y*z, x)) = rho^2(b(z*x, y)) on all basis triples
        let mut witness = None;
        'outer: for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    let ei = basis_vec(f, i);
                    let ej = basis_vec(f, j);
                    let ek = basis_vec(f, k);
                    let lhs = self.bilinear(self.basis_product(i, j), &ek);
                    let m1 = ext.rho(&self.bilinear(self.basis_product(j, k), &ei));
                    let m2 = ext.theta(&self.bilinear(self.basis_product(k, i), &ej));
                    if lhs != m1 || lhs != m2 {
                        witness = Some(format!("triple (i={i}, j={j}, k={k})"));
                        break 'outer;
                    }
                }
            }
        }
        report.record("b-cyclicity-512-basis-triples", witness);

        let mut rng = SampleStream::new(seed);
        let mut w_mult = None;
        let mut w_flex_left = None;
        let mut w_flex_right = None;
        for s in 0..1000 {
            let x = rng.vector(f, DIM);
            let y = rng.vector(f, DIM);
            let xy = self.star(&x, &y);
            let lhs = self.qform(&xy);
            let rhs = f.mul(&ext.rho(&self.qform(&x)), &ext.theta(&self.qform(&y)));
            if lhs != rhs && w_mult.is_none() {
                w_mult = Some(format!("sample #{s}: Q(x*y) != rho(Q(x)) theta(Q(y))"));
            }
            // (x*y)*x = theta(Q(x)) y and x*(y*x) = rho(Q(x)) y
            let qx = self.qform(&x);
            let want_l: Vec<FieldElement> =
                y.iter().map(|c| f.mul(&ext.theta(&qx), c)).collect();
            if self.star(&xy, &x) != want_l && w_flex_left.is_none() {
                w_flex_left = Some(format!("sample #{s}: (x*y)*x != theta(Q(x)) y"));
            }
            let want_r: Vec<FieldElement> = y.iter().map(|c| f.mul(&ext.rho(&qx), c)).collect();
            if self.star(&x, &self.star(&y, &x)) != want_r && w_flex_right.is_none() {
                w_flex_right = Some(format!("sample #{s}: x*(y*x) != rho(Q(x)) y"));
            }
        }
        report.record("norm-multiplicativity-random-1000", w_mult);
        report.record("flex-left-random-1000", w_flex_left);
        report.record("flex-right-random-1000", w_flex_right);

        report
    }

    /// Push the structure forward along an invertible semilinear map g, so
    /// that g becomes a multiplier-1 isotopy from self to the result.
    pub fn transport(&self, g: &SemilinearIsotopy) -> Result<CyclicComposition, CycError> {
        let f = self.top();
        let ext = &self.ext;
        let ginv = g.invert(ext)?;
        // Q'(y) = nu(Q(g^{-1} y)) as a matrix: T^{-T} nu(U) T^{-1}
        let tinv = self.map_inverse_matrix(g)?;
        let nu_u = self.gram.map(|e| ext.aut(g.aut_power, e));
        let gram = tinv.transpose().matmul(f, &nu_u).matmul(f, &tinv);
        let star = Tensor3::from_products(DIM, |i, j| {
            let a = ginv.apply(ext, &basis_vec(f, i));
            let b = ginv.apply(ext, &basis_vec(f, j));
            g.apply(ext, &self.star(&a, &b))
        });
        Ok(CyclicComposition::from_parts(
            self.ext.clone(),
            gram,
            star,
            false,
        ))
    }

    fn map_inverse_matrix(&self, g: &SemilinearIsotopy) -> Result<Mat, CycError> {
        g.map.inverse(self.top()).ok_or(CycError::NotInvertible)
    }
}

pub fn basis_vec(field: &FiniteField, i: usize) -> Vec<FieldElement> {
    let mut v = vec![field.zero(); DIM];
    v[i] = field.one();
    v
}

/// Induce a cyclic composition from a symmetric composition: the gram and
/// basis tensor are the scalar extensions of the symmetric ones, and the
/// twist enters only through the product evaluation law.
pub fn induce(
    sigma: &SymmetricComposition,
    ext: &CubicCyclicExtension,
) -> Result<CyclicComposition, CycError> {
    if sigma.field() != ext.base() {
        return Err(CycError::FieldMismatch);
    }
    let gram = sigma.gram().map(|e| ext.embed(e));
    let star = sigma.star_tensor().map(|e| ext.embed(e));
    Ok(CyclicComposition::from_parts(ext.clone(), gram, star, true))
}

// ---------------------------------------------------------------------------
// Semilinear isotopies.
// ---------------------------------------------------------------------------

/// A nu-semilinear map x -> T nu(x) (nu = rho^aut_power applied
/// coordinatewise) together with its isotopy multiplier:
///
///   Q'(f x) = nu(rho(mu) theta(mu) Q(x)),   f(x) *' f(y) = nu(mu) f(x * y).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearIsotopy {
    pub aut_power: u8,
    pub map: Mat,
    pub multiplier: FieldElement,
}

impl SemilinearIsotopy {
    pub fn identity(ext: &CubicCyclicExtension) -> SemilinearIsotopy {
        SemilinearIsotopy {
            aut_power: 0,
            map: Mat::identity(ext.top(), DIM),
            multiplier: ext.top().one(),
        }
    }

    /// Apply to a vector: T nu(x).
    pub fn apply(&self, ext: &CubicCyclicExtension, x: &[FieldElement]) -> Vec<FieldElement> {
        let twisted: Vec<FieldElement> = x.iter().map(|c| ext.aut(self.aut_power, c)).collect();
        self.map.matvec(ext.top(), &twisted)
    }

    /// Composite self . other: (nu1 nu2, T1 nu1(T2)), with multiplier
    /// nu2^{-1}(mu1) mu2.
    pub fn compose(
        &self,
        ext: &CubicCyclicExtension,
        other: &SemilinearIsotopy,
    ) -> SemilinearIsotopy {
        let t2_twisted = other.map.map(|e| ext.aut(self.aut_power, e));
        let map = self.map.matmul(ext.top(), &t2_twisted);
        let inv_nu2 = (3 - other.aut_power % 3) % 3;
        let multiplier = ext
            .top()
            .mul(&ext.aut(inv_nu2, &self.multiplier), &other.multiplier);
        SemilinearIsotopy {
            aut_power: (self.aut_power + other.aut_power) % 3,
            map,
            multiplier,
        }
    }

    /// Inverse map (nu^{-1}, nu^{-1}(T^{-1})) with multiplier nu(mu)^{-1}.
    pub fn invert(&self, ext: &CubicCyclicExtension) -> Result<SemilinearIsotopy, CycError> {
        let f = ext.top();
        let tinv = self.map.inverse(f).ok_or(CycError::NotInvertible)?;
        let inv_pow = (3 - self.aut_power % 3) % 3;
        let map = tinv.map(|e| ext.aut(inv_pow, e));
        let multiplier = f
            .inv(&ext.aut(self.aut_power, &self.multiplier))
            .map_err(CycError::Field)?;
        Ok(SemilinearIsotopy {
            aut_power: inv_pow,
            map,
            multiplier,
        })
    }

    /// Scale the map by a scalar: x -> c T nu(x).
    pub fn scaled(&self, ext: &CubicCyclicExtension, c: &FieldElement) -> SemilinearIsotopy {
        SemilinearIsotopy {
            aut_power: self.aut_power,
            map: self.map.scale(ext.top(), c),
            multiplier: self.multiplier,
        }
    }

    pub fn is_identity(&self, ext: &CubicCyclicExtension) -> bool {
        self.aut_power % 3 == 0 && self.map == Mat::identity(ext.top(), DIM)
    }
}

/// The canonical order-3 semilinear automorphism of an induced composition:
/// identity matrix, Frobenius on coordinates, multiplier 1.
pub fn hat_rho(gamma: &CyclicComposition) -> Result<SemilinearIsotopy, CycError> {
    if !gamma.is_induced_basis() {
        return Err(CycError::NotInducedBasis);
    }
    Ok(SemilinearIsotopy {
        aut_power: 1,
        map: Mat::identity(gamma.top(), DIM),
        multiplier: gamma.top().one(),
    })
}

/// Verify the full isotopy contract of f: a -> b exactly. The product
/// contract is checked on all 64 basis pairs and the quadratic contract at
/// the matrix level; both sides expand semilinearly, so this is complete.
pub fn validate_semilinear_isotopy(
    a: &CyclicComposition,
    b: &CyclicComposition,
    f: &SemilinearIsotopy,
) -> Result<(), CycError> {
    let ext = a.ext();
    let top = a.top();
    if f.map.inverse(top).is_none() {
        return Err(CycError::NotInvertible);
    }
    if f.multiplier.is_zero() {
        return Err(CycError::NotIsotopy("multiplier is zero".into()));
    }
    let nu = f.aut_power;
    let inv_nu = (3 - nu % 3) % 3;
    // quadratic contract: nu^{-1}(T^T U_b T) = rho(mu) theta(mu) U_a
    let lhs = f
        .map
        .transpose()
        .matmul(top, b.gram())
        .matmul(top, &f.map)
        .map(|e| ext.aut(inv_nu, e));
    let scale = top.mul(&ext.rho(&f.multiplier), &ext.theta(&f.multiplier));
    if !quad_eq(top, &lhs, &a.gram().scale(top, &scale)) {
        return Err(CycError::NotIsotopy(
            "Q'(f x) != nu(rho(mu) theta(mu) Q(x)) as quadratic forms".into(),
        ));
    }
    let nu_mu = ext.aut(nu, &f.multiplier);
    for i in 0..DIM {
        for j in 0..DIM {
            let fi = f.apply(ext, &basis_vec(top, i));
            let fj = f.apply(ext, &basis_vec(top, j));
            let lhs = b.star(&fi, &fj);
            let mapped = f.apply(ext, a.basis_product(i, j));
            let rhs: Vec<FieldElement> = mapped.iter().map(|v| top.mul(&nu_mu, v)).collect();
            if lhs != rhs {
                return Err(CycError::NotIsotopy(format!(
                    "product contract fails at basis pair ({i}, {j})"
                )));
            }
        }
    }
    Ok(())
}

/// Recover the multiplier of the nu-semilinear map x -> T nu(x) as an
/// isotopy a -> b: solve at the first basis pair with nonzero product, then
/// verify the whole contract.
pub fn multiplier_extract(
    a: &CyclicComposition,
    b: &CyclicComposition,
    aut_power: u8,
    t: &Mat,
) -> Result<FieldElement, CycError> {
    let ext = a.ext();
    let top = a.top();
    let inv_nu = (3 - aut_power % 3) % 3;
    let probe = SemilinearIsotopy {
        aut_power,
        map: t.clone(),
        multiplier: top.one(),
    };
    for i in 0..DIM {
        for j in 0..DIM {
            let prod = a.basis_product(i, j);
            if prod.iter().all(|c| c.is_zero()) {
                continue;
            }
            let mapped = probe.apply(ext, prod);
            let Some(pos) = mapped.iter().position(|c| !c.is_zero()) else {
                continue;
            };
            let lhs = b.star(
                &probe.apply(ext, &basis_vec(top, i)),
                &probe.apply(ext, &basis_vec(top, j)),
            );
            let nu_mu = top.div(&lhs[pos], &mapped[pos])?;
            if nu_mu.is_zero() {
                return Err(CycError::NotIsotopy("zero multiplier candidate".into()));
            }
            let mu = ext.aut(inv_nu, &nu_mu);
            let iso = SemilinearIsotopy {
                aut_power,
                map: t.clone(),
                multiplier: mu,
            };
            validate_semilinear_isotopy(a, b, &iso)?;
            return Ok(mu);
        }
    }
    Err(CycError::NotIsotopy("no nonzero basis product".into()))
}

/// Skolem-Noether reconstruction for semilinear conjugation: given the
/// images phi(E_ij) of all matrix units under a map expected to be
/// M -> U nu(M) U^{-1}, rebuild U (up to L^x) from the rank-one structure of
/// the images and verify the defining equations on every unit. Shared by the
/// trialitarian solver and the even-Clifford block extraction.
pub(crate) fn reconstruct_conjugator(
    ext: &CubicCyclicExtension,
    phi: &dyn Fn(usize, usize) -> Mat,
    dim: usize,
) -> Result<Mat, String> {
    let top = ext.top();
    let m00 = phi(0, 0);
    let v = (0..dim)
        .map(|j| m00.col(j))
        .find(|c| c.iter().any(|e| !e.is_zero()))
        .ok_or_else(|| "phi(E_00) = 0: not an automorphism image".to_string())?;
    let mut u = Mat::zeros(dim, dim);
    for j in 0..dim {
        let cj = phi(j, 0).matvec(top, &v);
        for i in 0..dim {
            u[(i, j)] = cj[i];
        }
    }
    if u.inverse(top).is_none() {
        return Err("reconstructed conjugator is singular".to_string());
    }
    // normalize: first nonzero entry of column 0 becomes 1
    let lead = (0..dim)
        .map(|i| u[(i, 0)])
        .find(|e| !e.is_zero())
        .expect("invertible matrix has a nonzero column");
    let scale = top.inv(&lead).expect("nonzero");
    let u = u.scale(top, &scale);
    // verify U E_ij = phi(E_ij) U for every matrix unit (nu(E_ij) = E_ij)
    for i in 0..dim {
        for j in 0..dim {
            let ph = phi(i, j);
            let rhs = ph.matmul(top, &u);
            // U E_ij has column j equal to column i of U, zero elsewhere
            for r in 0..dim {
                for c in 0..dim {
                    let want = if c == j { u[(r, i)] } else { top.zero() };
                    if rhs[(r, c)] != want {
                        return Err(format!(
                            "conjugation equation fails on matrix unit ({i}, {j})"
                        ));
                    }
                }
            }
        }
    }
    Ok(u)
}

// ---------------------------------------------------------------------------
// Split triple form over L x L x L.
// ---------------------------------------------------------------------------

/// The scalar extension of Gamma to L, presented as the split triple
/// (V x pV x tV, L x L x L, Q x pQ x tQ, rho-tilde, diamond). Twisted
/// components are stored as plain L^8 vectors in underlying coordinates;
/// the twists live in the product and scalar-action formulas.
#[derive(Clone, Debug)]
pub struct SplitCyclicTriple {
    gamma: CyclicComposition,
}

/// Element of the triple space, underlying coordinates per component.
pub type TripleVec = [Vec<FieldElement>; 3];

/// Element of L x L x L.
pub type TripleScalar = [FieldElement; 3];

impl SplitCyclicTriple {
    pub fn gamma(&self) -> &CyclicComposition {
        &self.gamma
    }

    /// (x, px, tx) diamond (y, py, ty) = (px *_Id ty, tx *_rho y, x *_theta py).
    pub fn diamond(&self, a: &TripleVec, b: &TripleVec) -> TripleVec {
        [
            self.gamma.star(&a[1], &b[2]),
            self.gamma.star(&a[2], &b[0]),
            self.gamma.star(&a[0], &b[1]),
        ]
    }

    /// (Q x pQ x tQ) componentwise.
    pub fn qform(&self, a: &TripleVec) -> TripleScalar {
        let ext = self.gamma.ext();
        [
            self.gamma.qform(&a[0]),
            ext.rho(&self.gamma.qform(&a[1])),
            ext.theta(&self.gamma.qform(&a[2])),
        ]
    }

    /// Scalar action of L x L x L in underlying coordinates: the twisted
    /// components absorb theta resp. rho.
    pub fn scalar_mul(&self, lam: &TripleScalar, a: &TripleVec) -> TripleVec {
        let ext = self.gamma.ext();
        let top = self.gamma.top();
        let scale = |c: &FieldElement, v: &[FieldElement]| -> Vec<FieldElement> {
            v.iter().map(|x| top.mul(c, x)).collect()
        };
        [
            scale(&lam[0], &a[0]),
            scale(&ext.theta(&lam[1]), &a[1]),
            scale(&ext.rho(&lam[2]), &a[2]),
        ]
    }

    /// The cyclic-shift automorphism of L x L x L.
    pub fn rho_tilde(&self, lam: &TripleScalar) -> TripleScalar {
        [lam[1], lam[2], lam[0]]
    }

    /// The algebra isomorphism L (x) L -> L x L x L on a pure tensor.
    pub fn nu_scalar(&self, l1: &FieldElement, l2: &FieldElement) -> TripleScalar {
        let ext = self.gamma.ext();
        let top = self.gamma.top();
        [
            top.mul(l1, l2),
            top.mul(&ext.rho(l1), l2),
            top.mul(&ext.theta(l1), l2),
        ]
    }

    /// The splitting map on a pure tensor x (x) l:
    /// f(x (x) l) = (x l, x theta(l), x rho(l)) in underlying coordinates.
    pub fn f_map(&self, x: &[FieldElement], l: &FieldElement) -> TripleVec {
        let ext = self.gamma.ext();
        let top = self.gamma.top();
        let scale =
            |c: &FieldElement| -> Vec<FieldElement> { x.iter().map(|v| top.mul(c, v)).collect() };
        [scale(l), scale(&ext.theta(l)), scale(&ext.rho(l))]
    }

    fn f_sum(&self, terms: &[(Vec<FieldElement>, FieldElement)]) -> TripleVec {
        let top = self.gamma.top();
        let mut acc: TripleVec = [
            vec![top.zero(); DIM],
            vec![top.zero(); DIM],
            vec![top.zero(); DIM],
        ];
        for (x, l) in terms {
            let t = self.f_map(x, l);
            for c in 0..3 {
                for i in 0..DIM {
                    acc[c][i] = top.add(&acc[c][i], &t[c][i]);
                }
            }
        }
        acc
    }

    /// Exact verification that f is an isomorphism of cyclic compositions
    /// onto the diamond structure: seeded random product pairs, the
    /// rho-tilde semilinear law, nu-equivariance of the scalar action, the
    /// componentwise norm axiom, and bijectivity of f over the prime field.
    pub fn verify(&self, seed: u64, pairs: usize) -> CheckReport {
        let mut report = CheckReport::new();
        let gamma = &self.gamma;
        let ext = gamma.ext();
        let top = gamma.top();
        let mut rng = SampleStream::new(seed);

        // Q-compatibility on pure tensors
        let mut witness = None;
        for s in 0..200 {
            let x = rng.vector(top, DIM);
            let l = rng.element(top);
            let got = self.qform(&self.f_map(&x, &l));
            let qx = gamma.qform(&x);
            let l2 = top.mul(&l, &l);
            let want = [
                top.mul(&l2, &qx),
                top.mul(&l2, &ext.rho(&qx)),
                top.mul(&l2, &ext.theta(&qx)),
            ];
            if got != want {
                witness = Some(format!("sample #{s}: Q-component mismatch"));
                break;
            }
        }
        report.record("q-components-on-pure-tensors", witness);

        // product identity on pure tensors: f(u) <> f(v) = f(u v)
        let mut witness = None;
        for s in 0..pairs {
            let x = rng.vector(top, DIM);
            let l = rng.element(top);
            let y = rng.vector(top, DIM);
            let m = rng.element(top);
            let lhs = self.diamond(&self.f_map(&x, &l), &self.f_map(&y, &m));
            let rhs = self.f_map(&gamma.star(&x, &y), &top.mul(&l, &m));
            if lhs != rhs {
                witness = Some(format!("sample #{s}: f(u) <> f(v) != f(u v)"));
                break;
            }
        }
        report.record("product-on-pure-tensors", witness);

        // product identity on two-term sums (biadditive expansion)
        let mut witness = None;
        for s in 0..100 {
            let u: Vec<(Vec<FieldElement>, FieldElement)> = (0..2)
                .map(|_| (rng.vector(top, DIM), rng.element(top)))
                .collect();
            let v: Vec<(Vec<FieldElement>, FieldElement)> = (0..2)
                .map(|_| (rng.vector(top, DIM), rng.element(top)))
                .collect();
            let lhs = self.diamond(&self.f_sum(&u), &self.f_sum(&v));
            let prod_terms: Vec<(Vec<FieldElement>, FieldElement)> = u
                .iter()
                .flat_map(|(x, l)| {
                    v.iter()
                        .map(move |(y, m)| (gamma.star(x, y), top.mul(l, m)))
                })
                .collect();
            let rhs = self.f_sum(&prod_terms);
            if lhs != rhs {
                witness = Some(format!("sample #{s}: two-term sum mismatch"));
                break;
            }
        }
        report.record("product-on-two-term-sums", witness);

        // (Lam w) <> w' = rho-tilde(Lam) (w <> w') on raw triples
        let mut witness = None;
        for s in 0..100 {
            let lam: TripleScalar = [rng.element(top), rng.element(top), rng.element(top)];
            let w = self.random_triple(&mut rng);
            let w2 = self.random_triple(&mut rng);
            let lhs = self.diamond(&self.scalar_mul(&lam, &w), &w2);
            let rhs = self.scalar_mul(&self.rho_tilde(&lam), &self.diamond(&w, &w2));
            if lhs != rhs {
                witness = Some(format!("sample #{s}: rho-tilde law fails"));
                break;
            }
        }
        report.record("rho-tilde-semilinearity", witness);

        // f(u (l1 (x) l2)) = nu(l1 (x) l2) f(u)
        let mut witness = None;
        for s in 0..100 {
            let x = rng.vector(top, DIM);
            let l = rng.element(top);
            let l1 = rng.element(top);
            let l2 = rng.element(top);
            let scaled: Vec<FieldElement> = x.iter().map(|v| top.mul(v, &l1)).collect();
            let lhs = self.f_map(&scaled, &top.mul(&l, &l2));
            let rhs = self.scalar_mul(&self.nu_scalar(&l1, &l2), &self.f_map(&x, &l));
            if lhs != rhs {
                witness = Some(format!("sample #{s}: nu-equivariance fails"));
                break;
            }
        }
        report.record("nu-equivariance", witness);

        // diamond composition axiom componentwise on samples
        let mut witness = None;
        for s in 0..200 {
            let w = self.random_triple(&mut rng);
            let w2 = self.random_triple(&mut rng);
            let qd = self.qform(&self.diamond(&w, &w2));
            let ra = self.rho_tilde(&self.qform(&w));
            let rb = self.rho_tilde(&self.rho_tilde(&self.qform(&w2)));
            let want = [
                top.mul(&ra[0], &rb[0]),
                top.mul(&ra[1], &rb[1]),
                top.mul(&ra[2], &rb[2]),
            ];
            if qd != want {
                witness = Some(format!("sample #{s}: diamond norm axiom fails"));
                break;
            }
        }
        report.record("diamond-norm-multiplicativity", witness);

        // bijectivity of f over the prime field: the GF(p)-matrix of f on
        // the basis (e_i z^a) (x) z^b has full rank
        let p = top.characteristic();
        let prime = FiniteField::new(p, 1).expect("prime field");
        let n = top.degree();
        let total = DIM * n * n;
        let mut m = Mat::zeros(3 * DIM * n, total);
        let mut col = 0;
        for i in 0..DIM {
            for a in 0..n {
                let mut za = vec![0u64; n];
                za[a] = 1;
                let mut x = vec![top.zero(); DIM];
                x[i] = top.from_coeffs(&za);
                for b in 0..n {
                    let mut zb = vec![0u64; n];
                    zb[b] = 1;
                    let l = top.from_coeffs(&zb);
                    let img = self.f_map(&x, &l);
                    for (c, comp) in img.iter().enumerate() {
                        for (vi, val) in comp.iter().enumerate() {
                            for d in 0..n {
                                m[((c * DIM + vi) * n + d, col)] =
                                    prime.from_int(val.coeff(d));
                            }
                        }
                    }
                    col += 1;
                }
            }
        }
        // domain and codomain both have GF(p)-dimension 3 * 8 * n; note the
        // domain basis above has n^2 * 8 entries but only rank 3*8*n because
        // (e_i z^a) (x) z^b and (e_i z^{a'}) (x) z^{b'} can coincide in
        // V (x)_F L; full image rank is the bijectivity criterion
        let rank = m.rank(&prime);
        let witness = (rank != 3 * DIM * n)
            .then(|| format!("rank {} != {}", rank, 3 * DIM * n));
        report.record("f-surjective-over-prime-field", witness);

        report
    }

    fn random_triple(&self, rng: &mut SampleStream) -> TripleVec {
        let top = self.gamma.top();
        [
            rng.vector(top, DIM),
            rng.vector(top, DIM),
            rng.vector(top, DIM),
        ]
    }
}

/// Build the split triple form of Gamma.
pub fn split_form(gamma: &CyclicComposition) -> SplitCyclicTriple {
    SplitCyclicTriple {
        gamma: gamma.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::make_extension;
    use crate::linalg::random_special_linear;
    use crate::sample::DEFAULT_SEED;
    use crate::symmetric::{self, okubo, para_cayley_split};

    fn gf(p: u64, k: usize) -> FiniteField {
        FiniteField::new(p, k).unwrap()
    }

    fn induced_pc(p: u64, k: usize) -> CyclicComposition {
        let f = gf(p, k);
        let ext = make_extension(&f).unwrap();
        induce(&para_cayley_split(&f), &ext).unwrap()
    }

    #[test]
    fn induced_basis_products_match_symmetric() {
        let f = gf(2, 2);
        let ext = make_extension(&f).unwrap();
        let sigma = para_cayley_split(&f);
        let gamma = induce(&sigma, &ext).unwrap();
        for i in 0..DIM {
            for j in 0..DIM {
                let want: Vec<FieldElement> = sigma
                    .basis_product(i, j)
                    .iter()
                    .map(|c| ext.embed(c))
                    .collect();
                // rho fixes F-rational basis vectors, so the twisted product
                // agrees with the embedded symmetric product on the basis
                let got = gamma.star(&basis_vec(gamma.top(), i), &basis_vec(gamma.top(), j));
                assert_eq!(got, want);
                assert_eq!(gamma.basis_product(i, j), &want[..]);
            }
        }
    }

    #[test]
    fn induced_para_cayley_gf4_validates() {
        let gamma = induced_pc(2, 2);
        let report = gamma.validate(DEFAULT_SEED);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn induced_okubo_gf7_validates() {
        let f = gf(7, 1);
        let ext = make_extension(&f).unwrap();
        let gamma = induce(&okubo(&f).unwrap(), &ext).unwrap();
        let report = gamma.validate(DEFAULT_SEED);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn induce_rejects_field_mismatch() {
        let ext = make_extension(&gf(2, 2)).unwrap();
        let sigma = para_cayley_split(&gf(7, 1));
        assert_eq!(induce(&sigma, &ext).unwrap_err(), CycError::FieldMismatch);
    }

    #[test]
    fn scaled_pairs_compose_norms() {
        // Q(x*y) = rho(Q(x)) theta(Q(y)) for lambda-scaled basis vectors
        let gamma = induced_pc(2, 2);
        let ext = gamma.ext().clone();
        let top = gamma.top().clone();
        let mut rng = SampleStream::new(21);
        for _ in 0..100 {
            let lam = rng.element(&top);
            let i = rng.below(DIM as u64) as usize;
            let j = rng.below(DIM as u64) as usize;
            let mut x = basis_vec(&top, i);
            x[i] = lam;
            let y = basis_vec(&top, j);
            let lhs = gamma.qform(&gamma.star(&x, &y));
            let rhs = top.mul(
                &ext.rho(&gamma.qform(&x)),
                &ext.theta(&gamma.qform(&y)),
            );
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn validate_detects_corrupted_tensor() {
        let gamma = induced_pc(7, 1);
        let top = gamma.top().clone();
        let mut star = gamma.star_tensor().clone();
        let bumped = top.add(star.at(2, 5, 1), &top.one());
        star.set(2, 5, 1, bumped);
        let bad = CyclicComposition::from_parts(
            gamma.ext().clone(),
            gamma.gram().clone(),
            star,
            true,
        );
        let report = bad.validate(DEFAULT_SEED);
        assert!(!report.passed());
        assert!(report.failures().next().unwrap().witness.is_some());
    }

    #[test]
    fn hat_rho_is_order_three_isotopy_with_multiplier_one() {
        let gamma = induced_pc(2, 2);
        let ext = gamma.ext();
        let rh = hat_rho(&gamma).unwrap();
        assert_eq!(rh.aut_power, 1);
        assert_eq!(rh.multiplier, gamma.top().one());
        validate_semilinear_isotopy(&gamma, &gamma, &rh).unwrap();
        // cube is the identity
        let cube = rh.compose(ext, &rh).compose(ext, &rh);
        assert!(cube.is_identity(ext));
        // rho-hat is multiplicative on basis pairs
        let top = gamma.top();
        for i in 0..DIM {
            for j in 0..DIM {
                let lhs = gamma.star(
                    &rh.apply(ext, &basis_vec(top, i)),
                    &rh.apply(ext, &basis_vec(top, j)),
                );
                let rhs = rh.apply(ext, gamma.basis_product(i, j));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn hat_rho_twists_the_norm() {
        let gamma = induced_pc(2, 2);
        let ext = gamma.ext();
        let rh = hat_rho(&gamma).unwrap();
        let mut rng = SampleStream::new(22);
        for _ in 0..100 {
            let x = rng.vector(gamma.top(), DIM);
            assert_eq!(
                gamma.qform(&rh.apply(ext, &x)),
                ext.rho(&gamma.qform(&x))
            );
        }
    }

    #[test]
    fn hat_rho_requires_induced_tag() {
        let gamma = induced_pc(2, 2);
        let rh = hat_rho(&gamma).unwrap();
        let moved = gamma.transport(&rh).unwrap();
        assert_eq!(hat_rho(&moved).unwrap_err(), CycError::NotInducedBasis);
    }

    #[test]
    fn hat_rho_semilinearity_on_scaled_basis() {
        let gamma = induced_pc(2, 2);
        let ext = gamma.ext();
        let top = gamma.top();
        let rh = hat_rho(&gamma).unwrap();
        let mut rng = SampleStream::new(23);
        for _ in 0..50 {
            let lam = rng.element(top);
            let i = rng.below(DIM as u64) as usize;
            let mut x = vec![top.zero(); DIM];
            x[i] = lam;
            let img = rh.apply(ext, &x);
            let mut want = vec![top.zero(); DIM];
            want[i] = ext.rho(&lam);
            assert_eq!(img, want);
        }
    }

    #[test]
    fn compose_and_invert_round_trip() {
        let gamma = induced_pc(7, 1);
        let ext = gamma.ext();
        let top = gamma.top().clone();
        let rh = hat_rho(&gamma).unwrap();
        let mut rng = SampleStream::new(24);
        let lam = rng.nonzero_element(&top);
        let scaled = SemilinearIsotopy {
            aut_power: 1,
            map: Mat::identity(&top, DIM).scale(&top, &lam),
            multiplier: multiplier_extract(
                &gamma,
                &gamma,
                1,
                &Mat::identity(&top, DIM).scale(&top, &lam),
            )
            .unwrap(),
        };
        let inv = scaled.invert(ext).unwrap();
        let composite = scaled.compose(ext, &inv);
        assert!(composite.is_identity(ext));
        assert_eq!(composite.multiplier, top.one());
        // the stored multiplier of the inverse also satisfies its contract
        validate_semilinear_isotopy(&gamma, &gamma, &inv).unwrap();
        let _ = rh;
    }

    #[test]
    fn composite_multiplier_matches_extraction() {
        let gamma = induced_pc(7, 1);
        let ext = gamma.ext();
        let top = gamma.top().clone();
        let f = gf(7, 1);
        let mut rng = SampleStream::new(25);
        // g (x) Id for an SL3 Zorn automorphism, an L-linear multiplier-1 isotopy
        let a = random_special_linear(&f, 3, &mut rng, 8);
        let g8 = symmetric::zorn_sl3_automorphism(&f, &a);
        let g_l = SemilinearIsotopy {
            aut_power: 0,
            map: g8.map(|e| ext.embed(e)),
            multiplier: top.one(),
        };
        validate_semilinear_isotopy(&gamma, &gamma, &g_l).unwrap();
        let rh = hat_rho(&gamma).unwrap();
        let lam = rng.nonzero_element(&top);
        let scaled = rh.scaled(ext, &lam);
        let mu_scaled = multiplier_extract(&gamma, &gamma, 1, &scaled.map).unwrap();
        let scaled = SemilinearIsotopy {
            multiplier: mu_scaled,
            ..scaled
        };
        let composite = scaled.compose(ext, &g_l);
        let direct = multiplier_extract(&gamma, &gamma, composite.aut_power, &composite.map)
            .unwrap();
        assert_eq!(composite.multiplier, direct);
        validate_semilinear_isotopy(&gamma, &gamma, &composite).unwrap();
    }

    #[test]
    fn multiplier_extract_on_hat_rho_is_one() {
        let gamma = induced_pc(2, 2);
        let top = gamma.top();
        let mu = multiplier_extract(&gamma, &gamma, 1, &Mat::identity(top, DIM)).unwrap();
        assert_eq!(mu, top.one());
    }

    #[test]
    fn multiplier_extract_rejects_random_map() {
        let gamma = induced_pc(7, 1);
        let top = gamma.top().clone();
        let mut rng = SampleStream::new(26);
        let t = random_special_linear(&top, DIM, &mut rng, 30);
        assert!(multiplier_extract(&gamma, &gamma, 1, &t).is_err());
    }

    #[test]
    fn isotopy_transport_preserves_axioms() {
        let gamma = induced_pc(2, 2);
        let _ext = gamma.ext();
        let top = gamma.top().clone();
        let mut rng = SampleStream::new(27);
        let lam = rng.nonzero_element(&top);
        let map = Mat::identity(&top, DIM).scale(&top, &lam);
        let mu = multiplier_extract(&gamma, &gamma, 1, &map).unwrap();
        let iso = SemilinearIsotopy {
            aut_power: 1,
            map,
            multiplier: mu,
        };
        let moved = gamma.transport(&iso).unwrap();
        assert!(moved.validate(DEFAULT_SEED).passed());
        // g is a multiplier-1 isotopy onto the transported structure
        validate_semilinear_isotopy(
            &gamma,
            &moved,
            &SemilinearIsotopy {
                aut_power: iso.aut_power,
                map: iso.map.clone(),
                multiplier: top.one(),
            },
        )
        .unwrap();
    }

    #[test]
    fn hat_rho_centralizes_rational_endomorphisms() {
        // rho-hat . (g (x) Id) . rho-hat^{-1} = g (x) Id for F-linear g
        let f = gf(2, 2);
        let ext = make_extension(&f).unwrap();
        let gamma = induce(&para_cayley_split(&f), &ext).unwrap();
        let rh = hat_rho(&gamma).unwrap();
        let mut rng = SampleStream::new(28);
        for _ in 0..5 {
            let g = random_special_linear(&f, DIM, &mut rng, 12);
            let g_l = SemilinearIsotopy {
                aut_power: 0,
                map: g.map(|e| ext.embed(e)),
                multiplier: gamma.top().one(),
            };
            let lhs = rh
                .compose(&ext, &g_l)
                .compose(&ext, &rh.invert(&ext).unwrap());
            assert_eq!(lhs.aut_power, 0);
            assert_eq!(lhs.map, g_l.map);
        }
    }

    #[test]
    fn split_form_verifies_gf4() {
        let gamma = induced_pc(2, 2);
        let triple = split_form(&gamma);
        let report = triple.verify(DEFAULT_SEED, 500);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn split_form_verifies_okubo_gf7() {
        let f = gf(7, 1);
        let ext = make_extension(&f).unwrap();
        let gamma = induce(&okubo(&f).unwrap(), &ext).unwrap();
        let triple = split_form(&gamma);
        let report = triple.verify(DEFAULT_SEED, 500);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn split_form_q_components_at_one() {
        let gamma = induced_pc(2, 2);
        let ext = gamma.ext().clone();
        let triple = split_form(&gamma);
        let mut rng = SampleStream::new(29);
        for _ in 0..50 {
            let x = rng.vector(gamma.top(), DIM);
            let q = gamma.qform(&x);
            let got = triple.qform(&triple.f_map(&x, &gamma.top().one()));
            assert_eq!(got, [q, ext.rho(&q), ext.theta(&q)]);
        }
    }
}
