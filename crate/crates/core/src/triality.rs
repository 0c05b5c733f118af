//! Trialitarian automorphisms of End(V): order-3 outer automorphisms
//! tau(M) = T rho^k(M) T^{-1} attached to order-3 semilinear isotopies of a
//! cyclic composition, the constructive correspondence with symmetric
//! compositions (build tau from Sigma; descend tau back to Sigma), the
//! semilinear Skolem-Noether solver, and conjugacy classification through
//! descent invariants and explicit witnesses.

use crate::cyclic::{
    hat_rho, induce, multiplier_extract, reconstruct_conjugator,
    validate_semilinear_isotopy, CycError, CyclicComposition, SemilinearIsotopy, DIM,
};
use crate::extension::{Aut, CubicCyclicExtension, ExtError};
use crate::field::{FieldElement, FiniteField};
use crate::linalg::{Mat, Tensor3};
use crate::report::CheckReport;
use crate::symmetric::{
    check_isomorphism, extract_isotopy_multiplier, SymError, SymmetricComposition,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriError {
    #[error("the map is linear over L; a trialitarian generator must be rho- or theta-semilinear")]
    NotOuterOrderThree,
    #[error("the supplied map fails isotopy validation: {0}")]
    BadIsotopy(String),
    #[error("no semilinear conjugator exists: {0}")]
    SkolemNoether(String),
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error("symmetric-composition precondition failed: {0}")]
    Precondition(String),
    #[error("maps do not conjugate one generator onto the other up to a scalar")]
    NotConjugating,
    #[error("conjugating scalar has norm != 1")]
    ConjugatingScalarNorm,
    #[error("witness restriction is not rational over the base field")]
    WitnessNotRational,
    #[error(transparent)]
    Cyclic(#[from] CycError),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Ext(#[from] ExtError),
}

/// Step-tagged failure signals for the descent chain.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DescentError {
    #[error("step 1: input must be rho-semilinear (aut power 1)")]
    NotRhoSemilinear,
    #[error("step 1: map is not invertible")]
    NotInvertible,
    #[error("step 1: t^3 is not a scalar matrix")]
    CubeNotScalar,
    #[error("step 1: t^3 scalar is not rho-invariant")]
    CubeScalarNotRational,
    #[error("step 2: norm equation failed: {0}")]
    NormEquation(ExtError),
    #[error("step 2: normalization did not give t^3 = Id")]
    CubeNormalizationFailed,
    #[error("step 3: t is not an isotopy: {0}")]
    NotIsotopy(String),
    #[error("step 3: multiplier has norm != 1")]
    MultiplierNormNotOne,
    #[error("step 4: hilbert90 failed: {0}")]
    Hilbert(ExtError),
    #[error("step 5: rescaled composition does not make t a multiplier-1 isotopy: {0}")]
    RescaledContractFailed(String),
    #[error("step 6: fixed space has F-dimension {0}, expected 8")]
    FixedSpaceDimension(usize),
    #[error("step 7: restricted structure constants are not rational over F")]
    StructureNotRational,
    #[error("step 7: the product does not close on the fixed space")]
    StarNotClosed,
    #[error("step 7: descended composition fails validation: {0}")]
    SigmaInvalid(String),
    #[error("step 8: t is not f rho-hat f-inverse on the canonical embedding")]
    EmbeddingMismatch,
}

// ---------------------------------------------------------------------------
// Trialitarian automorphisms.
// ---------------------------------------------------------------------------

/// An order-3 outer automorphism of End_L(V), represented by its generating
/// semilinear isotopy t: tau(M) = T nu(M) T^{-1} with nu in {rho, theta}.
#[derive(Clone, Debug)]
pub struct TrialitarianAut {
    t: SemilinearIsotopy,
}

impl TrialitarianAut {
    /// Wrap a semilinear isotopy whose cube is central. Rejects L-linear
    /// maps: those generate inner automorphisms, not trialitarian ones.
    pub fn new(gamma: &CyclicComposition, t: SemilinearIsotopy) -> Result<TrialitarianAut, TriError> {
        if t.aut_power % 3 == 0 {
            return Err(TriError::NotOuterOrderThree);
        }
        multiplier_extract(gamma, gamma, t.aut_power, &t.map)
            .map_err(|e| TriError::BadIsotopy(e.to_string()))?;
        let ext = gamma.ext();
        let cube = t.compose(ext, &t).compose(ext, &t);
        if scalar_of(gamma.top(), &cube.map).is_none() {
            return Err(TriError::BadIsotopy("t^3 is not central".into()));
        }
        Ok(TrialitarianAut { t })
    }

    pub fn generator(&self) -> &SemilinearIsotopy {
        &self.t
    }

    /// tau(M) = T nu(M) T^{-1}.
    pub fn apply(&self, gamma: &CyclicComposition, m: &Mat) -> Mat {
        let ext = gamma.ext();
        let top = gamma.top();
        let twisted = m.map(|e| ext.aut(self.t.aut_power, e));
        let tinv = self
            .t
            .map
            .inverse(top)
            .expect("trialitarian generator is invertible");
        self.t.map.matmul(top, &twisted).matmul(top, &tinv)
    }

    /// Full invariant verification: tau^3 = Id on all 64 matrix units,
    /// tau restricted to the center is rho, tau commutes with the adjoint
    /// involution of Q, and the fixed subalgebra has F-dimension 64.
    pub fn verify(&self, gamma: &CyclicComposition) -> CheckReport {
        let mut report = CheckReport::new();
        let top = gamma.top();
        let ext = gamma.ext();

        let cube = self
            .t
            .compose(ext, &self.t)
            .compose(ext, &self.t);
        let central = scalar_of(top, &cube.map).is_some() && cube.aut_power % 3 == 0;
        report.record(
            "t-cubes-to-central-scalar",
            (!central).then(|| "t^3 is not a scalar".to_string()),
        );

        // tau^3 = Id on all 64 matrix units
        let mut witness = None;
        'units: for u in 0..DIM {
            for v in 0..DIM {
                let e = unit_matrix(top, u, v);
                let mut m = e.clone();
                for _ in 0..3 {
                    m = self.apply(gamma, &m);
                }
                if m != e {
                    witness = Some(format!("matrix unit ({u}, {v})"));
                    break 'units;
                }
            }
        }
        report.record("tau-cubed-identity-on-64-units", witness);

        // tau restricted to scalars is nu (= rho for aut power 1)
        let mut witness = None;
        let n = top.degree();
        for i in 0..n {
            let mut coeffs = vec![0u64; n];
            coeffs[i] = 1;
            let lam = top.from_coeffs(&coeffs);
            let m = Mat::identity(top, DIM).scale(top, &lam);
            let got = self.apply(gamma, &m);
            let want = Mat::identity(top, DIM).scale(top, &ext.aut(self.t.aut_power, &lam));
            if got != want {
                witness = Some(format!("scalar basis element {i}"));
                break;
            }
        }
        report.record("tau-restricts-to-galois-on-center", witness);

        // tau commutes with the adjoint involution sigma_Q
        let polar = gamma.polar();
        let pinv = polar.inverse(top).expect("polar form nondegenerate");
        let sigma = |m: &Mat| pinv.matmul(top, &m.transpose()).matmul(top, &polar);
        let mut witness = None;
        'units2: for u in 0..DIM {
            for v in 0..DIM {
                let e = unit_matrix(top, u, v);
                let lhs = self.apply(gamma, &sigma(&e));
                let rhs = sigma(&self.apply(gamma, &e));
                if lhs != rhs {
                    witness = Some(format!("matrix unit ({u}, {v})"));
                    break 'units2;
                }
            }
        }
        report.record("tau-commutes-with-adjoint-involution", witness);

        let dim = fixed_subalgebra_dimension(gamma, self);
        report.record(
            "fixed-subalgebra-dimension-64",
            (dim != 64).then(|| format!("dimension {dim}")),
        );

        report
    }
}

fn unit_matrix(field: &FiniteField, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(DIM, DIM);
    m[(i, j)] = field.one();
    m
}

fn scalar_of(field: &FiniteField, m: &Mat) -> Option<FieldElement> {
    let c = m[(0, 0)];
    let want = Mat::identity(field, DIM).scale(field, &c);
    (m == &want).then_some(c)
}

/// Build tau from a symmetric composition: Gamma defaults to the induced
/// composition with t = rho-hat; an explicit L-linear isotopy f from the
/// induced composition onto another Gamma conjugates rho-hat over.
pub fn tau_from_symmetric(
    sigma: &SymmetricComposition,
    ext: &CubicCyclicExtension,
    target: Option<(&CyclicComposition, &SemilinearIsotopy)>,
) -> Result<(CyclicComposition, TrialitarianAut), TriError> {
    let induced = induce(sigma, ext)?;
    let rho_hat = hat_rho(&induced)?;
    match target {
        None => {
            let tau = TrialitarianAut::new(&induced, rho_hat)?;
            Ok((induced, tau))
        }
        Some((gamma, f)) => {
            if f.aut_power % 3 != 0 {
                return Err(TriError::BadIsotopy(
                    "conjugating isotopy must be L-linear".into(),
                ));
            }
            validate_semilinear_isotopy(&induced, gamma, f)
                .map_err(|e| TriError::BadIsotopy(e.to_string()))?;
            let f_inv = f.invert(ext)?;
            let t = f.compose(ext, &rho_hat).compose(ext, &f_inv);
            let t = SemilinearIsotopy {
                multiplier: multiplier_extract(gamma, gamma, t.aut_power, &t.map)
                    .map_err(|e| TriError::BadIsotopy(e.to_string()))?,
                ..t
            };
            let tau = TrialitarianAut::new(gamma, t)?;
            Ok((gamma.clone(), tau))
        }
    }
}

/// Dimension over F of {M in End_L(V) : tau(M) = M}, by exact kernel
/// computation on the 192-dimensional F-space z^c E_uv.
pub fn fixed_subalgebra_dimension(gamma: &CyclicComposition, tau: &TrialitarianAut) -> usize {
    let top = gamma.top();
    let ext = gamma.ext();
    let base = ext.base();
    let total = 3 * DIM * DIM;
    let z = top.gen();
    let mut zpows = vec![top.one()];
    for _ in 1..3 {
        let last = *zpows.last().unwrap();
        zpows.push(top.mul(&last, &z));
    }
    let tinv = tau
        .t
        .map
        .inverse(top)
        .expect("generator invertible");
    let mut m = Mat::zeros(total, total);
    let mut col = 0;
    for c in 0..3 {
        for u in 0..DIM {
            for v in 0..DIM {
                // tau(z^c E_uv) - z^c E_uv = nu(z^c) (T E_uv T^{-1}) - z^c E_uv
                let nu_z = ext.aut(tau.t.aut_power, &zpows[c]);
                let outer = Mat::from_fn(DIM, DIM, |r, s| {
                    top.mul(&tau.t.map[(r, u)], &tinv[(v, s)])
                });
                for r in 0..DIM {
                    for s in 0..DIM {
                        let mut val = top.mul(&nu_z, &outer[(r, s)]);
                        if r == u && s == v {
                            val = top.sub(&val, &zpows[c]);
                        }
                        if !val.is_zero() {
                            let coords = ext.f_coords(&val);
                            for (d, cd) in coords.iter().enumerate() {
                                if !cd.is_zero() {
                                    let row = (r * DIM + s) * 3 + d;
                                    m[(row, col)] = base.add(&m[(row, col)], cd);
                                }
                            }
                        }
                    }
                }
                col += 1;
            }
        }
    }
    total - m.rank(base)
}

// ---------------------------------------------------------------------------
// Semilinear Skolem-Noether.
// ---------------------------------------------------------------------------

/// Recover the nu-semilinear map u with phi = Int(u) from the images of the
/// 64 matrix units, normalized so the first nonzero entry of column 0 is 1,
/// and verify that u is an isotopy (its multiplier is stored on the result).
pub fn skolem_noether_semilinear(
    gamma: &CyclicComposition,
    phi: &dyn Fn(usize, usize) -> Mat,
    aut_power: u8,
) -> Result<SemilinearIsotopy, TriError> {
    let u = reconstruct_conjugator(gamma.ext(), phi, DIM).map_err(TriError::SkolemNoether)?;
    let multiplier = multiplier_extract(gamma, gamma, aut_power, &u)
        .map_err(|e| TriError::BadIsotopy(e.to_string()))?;
    Ok(SemilinearIsotopy {
        aut_power,
        map: u,
        multiplier,
    })
}

// ---------------------------------------------------------------------------
// Descent.
// ---------------------------------------------------------------------------

/// Everything the descent produces: the symmetric composition, the canonical
/// embedding f (an isotopy from the induced composition back onto Gamma,
/// with t = f rho-hat f^{-1} for the normalized t), and the scalar chain.
#[derive(Clone, Debug)]
pub struct DescentResult {
    pub sigma: SymmetricComposition,
    pub f: SemilinearIsotopy,
    pub t_normalized: SemilinearIsotopy,
    pub xi: FieldElement,
    pub eta: FieldElement,
    pub mu: FieldElement,
    pub zeta: FieldElement,
}

/// Galois descent of an order-3 rho-semilinear isotopy: normalize the cube,
/// normalize the multiplier through the norm-one/Hilbert-90 chain, rescale
/// the composition, take the fixed F-form, and return it with the canonical
/// embedding. Every step is verified exactly and has a distinct failure
/// signal.
pub fn descend(
    gamma: &CyclicComposition,
    t: &SemilinearIsotopy,
) -> Result<DescentResult, DescentError> {
    let ext = gamma.ext().clone();
    let top = ext.top().clone();
    let base = ext.base().clone();

    // step 1: xi = t^3 in F^x
    if t.aut_power % 3 != 1 {
        return Err(DescentError::NotRhoSemilinear);
    }
    if t.map.inverse(&top).is_none() {
        return Err(DescentError::NotInvertible);
    }
    let cube = t.compose(&ext, t).compose(&ext, t);
    debug_assert_eq!(cube.aut_power % 3, 0);
    let xi_top = scalar_of(&top, &cube.map).ok_or(DescentError::CubeNotScalar)?;
    if ext.rho(&xi_top) != xi_top {
        return Err(DescentError::CubeScalarNotRational);
    }
    let xi = ext
        .restrict(&xi_top)
        .ok_or(DescentError::CubeScalarNotRational)?;

    // step 2: xi = N(eta), replace t by eta^{-1} t so t^3 = Id
    let eta = ext.solve_norm_equation(&xi).map_err(DescentError::NormEquation)?;
    let eta_inv = top.inv(&eta).expect("eta is a unit");
    let t_map = t.map.scale(&top, &eta_inv);
    let probe = SemilinearIsotopy {
        aut_power: 1,
        map: t_map.clone(),
        multiplier: top.one(),
    };
    let cube = probe.compose(&ext, &probe).compose(&ext, &probe);
    if !cube.is_identity(&ext) {
        return Err(DescentError::CubeNormalizationFailed);
    }

    // step 3: extract the multiplier; its norm is 1 because t^3 = Id
    let mu = multiplier_extract(gamma, gamma, 1, &t_map)
        .map_err(|e| DescentError::NotIsotopy(e.to_string()))?;
    if ext.norm(&mu) != base.one() {
        return Err(DescentError::MultiplierNormNotOne);
    }

    // step 4: mu = zeta theta(zeta)^{-1}
    let zeta = ext.hilbert90(&mu, Aut::Theta).map_err(DescentError::Hilbert)?;

    // step 5: rescale to Q' = rho(zeta) theta(zeta) Q and x *' y = zeta (x*y);
    // t becomes a multiplier-1 isotopy of the rescaled composition
    let qscale = top.mul(&ext.rho(&zeta), &ext.theta(&zeta));
    let gram2 = gamma.gram().scale(&top, &qscale);
    let star2 = gamma.star_tensor().map(|e| top.mul(&zeta, e));
    let gamma2 = CyclicComposition::from_parts(ext.clone(), gram2, star2, false);
    let t_norm = SemilinearIsotopy {
        aut_power: 1,
        map: t_map,
        multiplier: top.one(),
    };
    validate_semilinear_isotopy(&gamma2, &gamma2, &t_norm)
        .map_err(|e| DescentError::RescaledContractFailed(e.to_string()))?;

    // step 6: S = {x : t(x) = x} as the kernel of t - Id over F
    let mut m = Mat::zeros(3 * DIM, 3 * DIM);
    let z = top.gen();
    let mut zpows = vec![top.one()];
    for _ in 1..3 {
        let last = *zpows.last().unwrap();
        zpows.push(top.mul(&last, &z));
    }
    for v in 0..DIM {
        for c in 0..3 {
            let col = v * 3 + c;
            let mut x = vec![top.zero(); DIM];
            x[v] = zpows[c];
            let mut img = t_norm.apply(&ext, &x);
            img[v] = top.sub(&img[v], &zpows[c]);
            for (r, entry) in img.iter().enumerate() {
                let coords = ext.f_coords(entry);
                for (d, cd) in coords.iter().enumerate() {
                    m[(r * 3 + d, col)] = *cd;
                }
            }
        }
    }
    let kernel = m.kernel_basis(&base);
    if kernel.rows() != DIM {
        return Err(DescentError::FixedSpaceDimension(kernel.rows()));
    }
    let mut s_mat = Mat::zeros(DIM, DIM);
    for i in 0..DIM {
        for v in 0..DIM {
            let coords = [
                kernel[(i, v * 3)],
                kernel[(i, v * 3 + 1)],
                kernel[(i, v * 3 + 2)],
            ];
            s_mat[(v, i)] = ext.from_f_coords(&coords);
        }
    }

    // step 7: restrict Q' and *' to S
    let s_inv = s_mat
        .inverse(&top)
        .ok_or(DescentError::StarNotClosed)?;
    let mut gram_s = Mat::zeros(DIM, DIM);
    for i in 0..DIM {
        let si = s_mat.col(i);
        let qi = gamma2.qform(&si);
        gram_s[(i, i)] = ext
            .restrict(&qi)
            .ok_or(DescentError::StructureNotRational)?;
        for j in (i + 1)..DIM {
            let sj = s_mat.col(j);
            let bij = gamma2.bilinear(&si, &sj);
            gram_s[(i, j)] = ext
                .restrict(&bij)
                .ok_or(DescentError::StructureNotRational)?;
        }
    }
    let mut star_rows: Vec<Vec<FieldElement>> = Vec::with_capacity(DIM * DIM);
    for i in 0..DIM {
        for j in 0..DIM {
            let prod = gamma2.star(&s_mat.col(i), &s_mat.col(j));
            let coords = s_inv.matvec(&top, &prod);
            let mut row = Vec::with_capacity(DIM);
            for c in &coords {
                row.push(ext.restrict(c).ok_or(DescentError::StarNotClosed)?);
            }
            star_rows.push(row);
        }
    }
    let star_s = Tensor3::from_products(DIM, |i, j| star_rows[i * DIM + j].clone());
    let sigma = SymmetricComposition::from_parts(base.clone(), gram_s, star_s);
    let sig_report = sigma.validate(crate::sample::DEFAULT_SEED);
    if !sig_report.passed() {
        let first = sig_report.failures().next().unwrap();
        return Err(DescentError::SigmaInvalid(first.name.clone()));
    }

    // step 8: the canonical embedding f and the exact identity
    // t = f rho-hat f^{-1}
    let want = s_mat.matmul(&top, &s_mat.map(|e| ext.rho(e)).inverse(&top).unwrap());
    if want != t_norm.map {
        return Err(DescentError::EmbeddingMismatch);
    }
    let zeta_inv = top.inv(&zeta).expect("zeta is a unit");
    let f = SemilinearIsotopy {
        aut_power: 0,
        map: s_mat,
        multiplier: zeta_inv,
    };
    let induced = induce(&sigma, &ext).expect("matching fields by construction");
    validate_semilinear_isotopy(&induced, gamma, &f)
        .map_err(|e| DescentError::RescaledContractFailed(e.to_string()))?;

    Ok(DescentResult {
        sigma,
        f,
        t_normalized: t_norm,
        xi,
        eta,
        mu,
        zeta,
    })
}

/// Descend, first squaring theta-semilinear inputs so the generator is
/// rho-semilinear.
pub fn descend_any(
    gamma: &CyclicComposition,
    t: &SemilinearIsotopy,
) -> Result<DescentResult, DescentError> {
    match t.aut_power % 3 {
        1 => descend(gamma, t),
        2 => descend(gamma, &t.compose(gamma.ext(), t)),
        _ => Err(DescentError::NotRhoSemilinear),
    }
}

// ---------------------------------------------------------------------------
// Conjugacy classification.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Conjugate,
    NotConjugate,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct InvariantTable {
    pub derivation_dims: (usize, usize),
    pub census: Option<(u64, u64)>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    /// Isomorphism witness sigma_1 -> sigma_2 when the verdict is Conjugate.
    pub witness: Option<Mat>,
    pub invariants: InvariantTable,
    pub left: DescentResult,
    pub right: DescentResult,
}

/// Exhaustive-census bound used during classification.
const CENSUS_CLASSIFY_BOUND: u128 = 1 << 20;

/// Classify two order-3 generators up to conjugation by descending both and
/// comparing the symmetric compositions: distinct isomorphism invariants
/// certify non-conjugacy; an explicit isomorphism witness (built from
/// provenance or from proportional normalized generators) certifies
/// conjugacy; otherwise the verdict is left undecided. The generators may
/// live on two different presentations of the same composition; theta-
/// semilinear inputs are squared first.
pub fn classify_conjugacy(
    gamma1: &CyclicComposition,
    t1: &SemilinearIsotopy,
    gamma2: &CyclicComposition,
    t2: &SemilinearIsotopy,
    provenance: Option<&SemilinearIsotopy>,
) -> Result<Classification, TriError> {
    if gamma1.ext().base() != gamma2.ext().base() {
        return Err(TriError::Precondition(
            "the two compositions live over different base fields".into(),
        ));
    }
    let left = descend_any(gamma1, t1)?;
    let right = descend_any(gamma2, t2)?;

    let d1 = left.sigma.derivation_dimension();
    let d2 = right.sigma.derivation_dimension();
    let q = gamma1.ext().base().order();
    let census = if q.pow(DIM as u32) <= CENSUS_CLASSIFY_BOUND {
        Some((
            left.sigma.idempotent_census().map_err(TriError::Sym)?,
            right.sigma.idempotent_census().map_err(TriError::Sym)?,
        ))
    } else {
        None
    };
    let invariants = InvariantTable {
        derivation_dims: (d1, d2),
        census,
    };

    if d1 != d2 || matches!(census, Some((a, b)) if a != b) {
        return Ok(Classification {
            verdict: Verdict::NotConjugate,
            witness: None,
            invariants,
            left,
            right,
        });
    }

    // witness search
    let mut witness: Option<Mat> = None;
    if left.sigma == right.sigma {
        witness = Some(Mat::identity(gamma1.ext().base(), DIM));
    }
    if witness.is_none() {
        // proportional normalized generators conjugate through u = Id
        let top = gamma1.top();
        if proportional(top, &right.t_normalized.map, &left.t_normalized.map).is_some() {
            let id = SemilinearIsotopy::identity(gamma1.ext());
            witness = conjugacy_witness(&left, &right, gamma1.ext(), &id).ok();
        }
    }
    if witness.is_none() {
        if let Some(u) = provenance {
            witness = Some(conjugacy_witness(&left, &right, gamma1.ext(), u)?);
        }
    }

    match witness {
        Some(w) => {
            if !check_isomorphism(&left.sigma, &right.sigma, &w) {
                return Err(TriError::Precondition(
                    "constructed witness failed the isomorphism check".into(),
                ));
            }
            Ok(Classification {
                verdict: Verdict::Conjugate,
                witness: Some(w),
                invariants,
                left,
                right,
            })
        }
        None => Ok(Classification {
            verdict: Verdict::Undecided,
            witness: None,
            invariants,
            left,
            right,
        }),
    }
}

/// Build the explicit isomorphism sigma_1 -> sigma_2 from an isotopy u with
/// u t1 u^{-1} = xi t2: kill the scalar through Hilbert 90, transport along
/// the canonical embeddings, restrict to the fixed forms, and normalize the
/// multiplier away.
pub fn conjugacy_witness(
    left: &DescentResult,
    right: &DescentResult,
    ext: &CubicCyclicExtension,
    u: &SemilinearIsotopy,
) -> Result<Mat, TriError> {
    let top = ext.top();
    let t1 = &left.t_normalized;
    let t2 = &right.t_normalized;
    let conj = u.compose(ext, t1).compose(ext, &u.invert(ext)?);
    let xi = proportional(top, &t2.map, &conj.map).ok_or(TriError::NotConjugating)?;
    if ext.norm(&xi) != ext.base().one() {
        return Err(TriError::ConjugatingScalarNorm);
    }
    // xi = eta rho(eta)^{-1}; then (eta^{-1} u) t1 (eta^{-1} u)^{-1} = t2
    let eta = ext.hilbert90(&xi, Aut::Rho)?;
    let eta_inv = top.inv(&eta).expect("eta is a unit");
    let w = SemilinearIsotopy {
        aut_power: u.aut_power,
        map: u.map.scale(top, &eta_inv),
        multiplier: u.multiplier,
    };
    let lhs = w.compose(ext, t1);
    let rhs = t2.compose(ext, &w);
    if lhs.aut_power != rhs.aut_power || lhs.map != rhs.map {
        return Err(TriError::NotConjugating);
    }
    // h = f2^{-1} w f1 commutes with rho-hat, i.e. its matrix is F-rational
    let h = right
        .f
        .invert(ext)?
        .compose(ext, &w)
        .compose(ext, &left.f);
    let mut h_s = Mat::zeros(DIM, DIM);
    for i in 0..DIM {
        for j in 0..DIM {
            h_s[(i, j)] = ext
                .restrict(&h.map[(i, j)])
                .ok_or(TriError::WitnessNotRational)?;
        }
    }
    let lam = extract_isotopy_multiplier(&left.sigma, &right.sigma, &h_s)?;
    let lam_inv = ext.base().inv(&lam).expect("multiplier is a unit");
    Ok(h_s.scale(ext.base(), &lam_inv))
}

fn proportional(field: &FiniteField, a: &Mat, b: &Mat) -> Option<FieldElement> {
    let mut ratio: Option<FieldElement> = None;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let (x, y) = (a[(i, j)], b[(i, j)]);
            match (x.is_zero(), y.is_zero()) {
                (true, true) => {}
                (true, false) | (false, true) => return None,
                (false, false) => {
                    let c = field.div(&y, &x).ok()?;
                    match &ratio {
                        None => ratio = Some(c),
                        Some(r) if *r == c => {}
                        Some(_) => return None,
                    }
                }
            }
        }
    }
    ratio
}

// ---------------------------------------------------------------------------
// Fixed points of Int(rho-hat) extend from automorphisms of Sigma.
// ---------------------------------------------------------------------------

/// Check that the scalar extension of an automorphism g of Sigma commutes
/// with tau = Int(rho-hat) on all 64 matrix units. Errors if g is not an
/// automorphism of Sigma.
pub fn extend_and_commute_check(
    sigma: &SymmetricComposition,
    ext: &CubicCyclicExtension,
    g: &Mat,
) -> Result<bool, TriError> {
    if !check_isomorphism(sigma, sigma, g) {
        return Err(TriError::Precondition(
            "g is not an automorphism of the symmetric composition".into(),
        ));
    }
    let gamma = induce(sigma, ext)?;
    let top = gamma.top();
    let g_l = g.map(|e| ext.embed(e));
    let g_inv = g_l.inverse(top).expect("automorphism is invertible");
    let tau = TrialitarianAut::new(&gamma, hat_rho(&gamma)?)?;
    for u in 0..DIM {
        for v in 0..DIM {
            let e = unit_matrix(top, u, v);
            let inner = g_l.matmul(top, &e).matmul(top, &g_inv);
            let lhs = tau.apply(&gamma, &inner);
            let tau_e = tau.apply(&gamma, &e);
            let rhs = g_l.matmul(top, &tau_e).matmul(top, &g_inv);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
