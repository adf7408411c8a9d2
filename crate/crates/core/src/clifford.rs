//! Irreducible complex Clifford representations in arbitrary signature.
//!
//! The construction follows the classical tensor-product recipe: with the
//! 2×2 blocks E, T, U, V and timelike prefactors τ ∈ {1, i}, the even-rank
//! generators are
//!
//! ```text
//! Φ(e_{2j-1}) = τ · E ⊗ … ⊗ E ⊗ U ⊗ T ⊗ … ⊗ T      (j−1 trailing T's)
//! Φ(e_{2j})   = τ · E ⊗ … ⊗ E ⊗ V ⊗ T ⊗ … ⊗ T
//! ```
//!
//! and an odd-rank algebra adds the generator ±i·T⊗…⊗T on top of the
//! even-rank construction one dimension down. The sign of that last
//! generator selects one of the two inequivalent irreducible components;
//! we pick the one on which the complex volume element acts as +Id.
//!
//! Index convention: generators e_1 … e_p are timelike (⟨e_i,e_i⟩ = −1,
//! so Φ(e_i)² = +Id), the rest spacelike.

use crate::error::CcksError;
use crate::matrix::{CMatrix, Spinor};
use crate::scalar::Scalar;

/// An explicit irreducible representation of the complexified Clifford
/// algebra of signature (p,q) on C^(2^m), m = ⌊(p+q)/2⌋.
#[derive(Clone)]
pub struct CliffordRep<T: Scalar> {
    pub p: usize,
    pub q: usize,
    pub n: usize,
    pub m: usize,
    /// Generator matrices Φ(e_1), …, Φ(e_n).
    pub generators: Vec<CMatrix<T>>,
    /// Metric signs ε_i = ⟨e_i, e_i⟩ (−1 timelike, +1 spacelike).
    pub epsilon: Vec<i8>,
    /// True when the odd-rank construction had to take the second
    /// irreducible component to normalize the volume action to +Id.
    pub flipped_projection: bool,
}

fn block_e<T: Scalar>() -> CMatrix<T> {
    CMatrix::identity(2)
}

fn block_t<T: Scalar>() -> CMatrix<T> {
    // [[0, -i], [i, 0]]
    CMatrix::from_rows(vec![
        vec![T::zero(), -T::i()],
        vec![T::i(), T::zero()],
    ])
}

fn block_u<T: Scalar>() -> CMatrix<T> {
    // [[i, 0], [0, -i]]
    CMatrix::from_rows(vec![
        vec![T::i(), T::zero()],
        vec![T::zero(), -T::i()],
    ])
}

fn block_v<T: Scalar>() -> CMatrix<T> {
    // [[0, i], [i, 0]]
    CMatrix::from_rows(vec![
        vec![T::zero(), T::i()],
        vec![T::i(), T::zero()],
    ])
}

/// `E^(m-j) ⊗ mid ⊗ T^(j-1)` for the pair index j = 1..=m.
fn slot_product<T: Scalar>(m: usize, j: usize, mid: CMatrix<T>) -> CMatrix<T> {
    let mut acc = CMatrix::identity(1);
    for _ in 0..(m - j) {
        acc = acc.kron(&block_e::<T>());
    }
    acc = acc.kron(&mid);
    for _ in 0..(j - 1) {
        acc = acc.kron(&block_t::<T>());
    }
    acc
}

fn epsilon_signs(p: usize, n: usize) -> Vec<i8> {
    (1..=n).map(|i| if i <= p { -1 } else { 1 }).collect()
}

fn tau<T: Scalar>(eps: i8) -> T {
    if eps < 0 {
        T::i()
    } else {
        T::one()
    }
}

fn build_even<T: Scalar>(p: usize, q: usize) -> Vec<CMatrix<T>> {
    let n = p + q;
    let m = n / 2;
    let eps = epsilon_signs(p, n);
    let mut gens = Vec::with_capacity(n);
    for j in 1..=m {
        gens.push(slot_product(m, j, block_u::<T>()).scale(&tau::<T>(eps[2 * j - 2])));
        gens.push(slot_product(m, j, block_v::<T>()).scale(&tau::<T>(eps[2 * j - 1])));
    }
    gens
}

impl<T: Scalar> CliffordRep<T> {
    /// Dimension of the spinor module.
    pub fn dim(&self) -> usize {
        1 << self.m
    }

    pub fn generator(&self, i: usize) -> &CMatrix<T> {
        &self.generators[i]
    }

    /// Check `e_i e_j + e_j e_i + 2⟨e_i,e_j⟩ Id = 0` for all pairs,
    /// returning the largest residual magnitude.
    pub fn relation_residual(&self) -> f64 {
        let id = CMatrix::<T>::identity(self.dim());
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let anti = &(&self.generators[i] * &self.generators[j])
                    + &(&self.generators[j] * &self.generators[i]);
                let metric = if i == j {
                    T::from_rational(2 * self.epsilon[i] as i64, 1)
                } else {
                    T::zero()
                };
                let res = &anti + &id.scale(&metric);
                for x in &res.data {
                    worst = worst.max(x.norm_f64());
                }
            }
        }
        worst
    }

    pub fn relations_hold_exactly(&self) -> bool {
        let id = CMatrix::<T>::identity(self.dim());
        for i in 0..self.n {
            for j in i..self.n {
                let anti = &(&self.generators[i] * &self.generators[j])
                    + &(&self.generators[j] * &self.generators[i]);
                let metric = if i == j {
                    T::from_rational(2 * self.epsilon[i] as i64, 1)
                } else {
                    T::zero()
                };
                if !(&anti + &id.scale(&metric)).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Build the representation for signature (p,q) with n = p+q ≥ 1.
///
/// Odd rank with q = 0 is not covered by the tensor recipe directly; it is
/// produced from the (0,p) representation by multiplying every generator
/// by i, and certified by the relation check like every other case.
pub fn build_rep<T: Scalar>(p: usize, q: usize) -> Result<CliffordRep<T>, CcksError> {
    let n = p + q;
    if n == 0 {
        return Err(CcksError::usage("signature (0,0) has no generators"));
    }
    let m = n / 2;
    let eps = epsilon_signs(p, n);

    if n % 2 == 0 {
        let generators = build_even::<T>(p, q);
        return Ok(CliffordRep {
            p,
            q,
            n,
            m,
            generators,
            epsilon: eps,
            flipped_projection: false,
        });
    }

    if q == 0 {
        // Signature flip: Φ'(e_i) = i·Φ(e_i) turns Cl(0,p) generators into
        // Cl(p,0) generators.
        let base = build_rep::<T>(0, p)?;
        let generators = base
            .generators
            .iter()
            .map(|g| g.scale(&T::i()))
            .collect::<Vec<_>>();
        return Ok(CliffordRep {
            p,
            q,
            n,
            m,
            generators,
            epsilon: eps,
            flipped_projection: false,
        });
    }

    // Odd case, q > 0: generators of (p, q−1) plus ±i·T⊗…⊗T.
    let mut generators = build_even::<T>(p, q - 1);
    let mut last = CMatrix::identity(1);
    for _ in 0..m {
        last = last.kron(&block_t::<T>());
    }
    last = last.scale(&(T::i() * tau::<T>(eps[n - 1])));
    generators.push(last);

    let mut rep = CliffordRep {
        p,
        q,
        n,
        m,
        generators,
        epsilon: eps,
        flipped_projection: false,
    };

    // Select the component on which the complex volume element is +Id.
    // The volume is central and the representation irreducible, so it acts
    // as ±Id; negating the last generator switches the two components.
    let vol = volume_complex(&rep);
    let id = CMatrix::<T>::identity(rep.dim());
    let is_plus = if T::EXACT {
        (&vol - &id).is_zero()
    } else {
        (&vol - &id).data.iter().all(|x| x.norm_f64() < 1e-9)
    };
    if !is_plus {
        let g = rep.generators.pop().unwrap();
        rep.generators.push(g.scale(&-T::one()));
        rep.flipped_projection = true;
    }
    Ok(rep)
}

/// Real volume element Φ(e_1···e_n).
pub fn volume_real<T: Scalar>(rep: &CliffordRep<T>) -> CMatrix<T> {
    let mut acc = CMatrix::identity(rep.dim());
    for g in &rep.generators {
        acc = &acc * g;
    }
    acc
}

/// Complex volume element `ω_C = (−i)^(⌊(n+1)/2⌋ − p) · ω_R`, normalized
/// so that `ω_C² = Id` in every signature.
pub fn volume_complex<T: Scalar>(rep: &CliffordRep<T>) -> CMatrix<T> {
    let expo = ((rep.n + 1) / 2) as i64 - rep.p as i64;
    let mut prefactor = T::one();
    let minus_i = -T::i();
    let e = expo.rem_euclid(4);
    for _ in 0..e {
        prefactor = prefactor * minus_i.clone();
    }
    volume_real(rep).scale(&prefactor)
}

/// Half-spinor projectors `P± = (Id ± Φ(ω_C))/2` for even rank.
pub fn half_projectors<T: Scalar>(
    rep: &CliffordRep<T>,
) -> Result<(CMatrix<T>, CMatrix<T>), CcksError> {
    if rep.n % 2 != 0 {
        return Err(CcksError::usage(
            "half-spinor projectors require even dimension",
        ));
    }
    let vol = volume_complex(rep);
    let id = CMatrix::<T>::identity(rep.dim());
    let half = T::from_rational(1, 2);
    let plus = (&id + &vol).scale(&half);
    let minus = (&id - &vol).scale(&half);
    Ok((plus, minus))
}

/// The standard half-spinor basis vector u(δ) = (1, −δi)/√2.
pub fn u_delta<T: Scalar>(delta: i8) -> Spinor<T> {
    let inv_sqrt2 = T::sqrt2().inv().unwrap();
    let d = T::from_rational(delta as i64, 1);
    vec![inv_sqrt2.clone(), -(d * T::i()) * inv_sqrt2]
}

/// Tensor-product spinor u(δ_1, …, δ_m).
pub fn u_deltas<T: Scalar>(deltas: &[i8]) -> Spinor<T> {
    let mut acc = vec![T::one()];
    for &d in deltas {
        let factor = u_delta::<T>(d);
        let mut next = Vec::with_capacity(acc.len() * 2);
        for a in &acc {
            for f in &factor {
                next.push(a.clone() * f.clone());
            }
        }
        acc = next;
    }
    acc
}

/// An element of the Lie algebra spin^c: a combination of bivectors e_i·e_j
/// plus an imaginary scalar part.
#[derive(Clone, Debug)]
pub struct SpincElement<T: Scalar> {
    /// Coefficients c_{ij} on e_i·e_j for i < j (0-based indices).
    pub bivector: Vec<(usize, usize, T)>,
    /// Imaginary part `it`, stored as the full imaginary scalar.
    pub scalar: T,
}

impl<T: Scalar> SpincElement<T> {
    pub fn zero() -> Self {
        SpincElement {
            bivector: Vec::new(),
            scalar: T::zero(),
        }
    }

    pub fn basis_bivector(i: usize, j: usize) -> Self {
        SpincElement {
            bivector: vec![(i, j, T::one())],
            scalar: T::zero(),
        }
    }

    pub fn imaginary(t: T) -> Self {
        SpincElement {
            bivector: Vec::new(),
            scalar: T::i() * t,
        }
    }
}

/// Spinor action of a spin^c element: Σ c_{ij} Φ(e_i)Φ(e_j) + (it)·Id.
pub fn spinc_lie_action<T: Scalar>(rep: &CliffordRep<T>, x: &SpincElement<T>) -> CMatrix<T> {
    let mut acc = CMatrix::<T>::identity(rep.dim()).scale(&x.scalar);
    for (i, j, c) in &x.bivector {
        let prod = &rep.generators[*i] * &rep.generators[*j];
        acc = &acc + &prod.scale(c);
    }
    acc
}

/// The so(p,q) image of a spin^c element under the double-cover derivative:
/// e_i·e_j ↦ 2E_ij with E_ij = −ε_j D_ij + ε_i D_ji.
pub fn spinc_so_matrix<T: Scalar>(rep: &CliffordRep<T>, x: &SpincElement<T>) -> CMatrix<T> {
    let n = rep.n;
    let mut s = CMatrix::<T>::zeros(n, n);
    for (i, j, c) in &x.bivector {
        let (ei, ej) = (rep.epsilon[*i] as i64, rep.epsilon[*j] as i64);
        let mij = s.at(*i, *j).clone();
        *s.at_mut(*i, *j) = mij + c.clone() * T::from_rational(-2 * ej, 1);
        let mji = s.at(*j, *i).clone();
        *s.at_mut(*j, *i) = mji + c.clone() * T::from_rational(2 * ei, 1);
    }
    s
}

/// Spinor action of the unitary Lie-algebra lift for signature (2p', 2q').
///
/// Takes a skew-pseudo-Hermitian m'×m' matrix, includes it into so(p,q) via
/// the standard real form on interleaved pairs (x_{2k-1}, x_{2k}), pulls the
/// pair (so-matrix, trace) back through the double cover, and returns the
/// resulting endomorphism of the spinor module.
pub fn unitary_lie_lift<T: Scalar>(
    rep: &CliffordRep<T>,
    u: &CMatrix<T>,
) -> Result<CMatrix<T>, CcksError> {
    if rep.n % 2 != 0 || rep.p % 2 != 0 {
        return Err(CcksError::usage(
            "unitary lift requires signature (2p', 2q')",
        ));
    }
    let mp = rep.n / 2;
    if u.rows != mp || u.cols != mp {
        return Err(CcksError::usage(format!(
            "unitary lift expects a {mp}x{mp} matrix"
        )));
    }

    // Real inclusion: complex entry u_kl = a + ib becomes the 2×2 block
    // [[a, -b], [b, a]] at rows (2k, 2k+1), cols (2l, 2l+1).
    let mut s = CMatrix::<T>::zeros(rep.n, rep.n);
    for k in 0..mp {
        for l in 0..mp {
            let a = u.at(k, l).re_part();
            let b = u.at(k, l).im_part();
            *s.at_mut(2 * k, 2 * l) = a.clone();
            *s.at_mut(2 * k, 2 * l + 1) = -b.clone();
            *s.at_mut(2 * k + 1, 2 * l) = b;
            *s.at_mut(2 * k + 1, 2 * l + 1) = a;
        }
    }

    // Decompose S = Σ_{i<j} 2 c_{ij} E_ij, i.e. c_{ij} = −ε_j S_{ij}/2.
    let mut x = SpincElement::<T>::zero();
    for i in 0..rep.n {
        for j in (i + 1)..rep.n {
            let c = -s.at(i, j).clone()
                * T::from_rational(rep.epsilon[j] as i64, 2);
            if !c.is_zero() {
                x.bivector.push((i, j, c));
            }
        }
    }
    // Scalar part: ζ(·, it) doubles, so t = tr(u)/2.
    x.scalar = u.trace() * T::from_rational(1, 2);

    // Consistency: the decomposition must reproduce S exactly.
    let back = spinc_so_matrix(rep, &x);
    if T::EXACT && !(&back - &s).is_zero() {
        return Err(CcksError::domain(
            "matrix is not skew-adjoint for the metric; not in u(p',q')",
        ));
    }
    Ok(spinc_lie_action(rep, &x))
}

/// For each assignment δ ∈ {±1}^m, report whether u(δ) sits in the volume
/// eigenspace matching ∏δ_j. Returns the list of assignments that land in
/// the opposite projector (empty when labeling and volume agree).
pub fn half_spinor_label_mismatches<T: Scalar>(rep: &CliffordRep<T>) -> Vec<Vec<i8>> {
    if rep.n % 2 != 0 {
        return Vec::new();
    }
    let vol = volume_complex(rep);
    let mut mismatches = Vec::new();
    for bits in 0..(1u32 << rep.m) {
        let deltas: Vec<i8> = (0..rep.m)
            .map(|k| if bits & (1 << k) != 0 { -1 } else { 1 })
            .collect();
        let prod: i64 = deltas.iter().map(|&d| d as i64).product();
        let u = u_deltas::<T>(&deltas);
        let vu = vol.apply(&u);
        let expect = spinor_scale_signed(&u, prod);
        let diff: f64 = vu
            .iter()
            .zip(&expect)
            .map(|(a, b)| (a.clone() - b.clone()).norm_f64())
            .fold(0.0, f64::max);
        let ok = if T::EXACT { diff == 0.0 } else { diff < 1e-9 };
        if !ok {
            mismatches.push(deltas);
        }
    }
    mismatches
}

fn spinor_scale_signed<T: Scalar>(u: &[T], sign: i64) -> Vec<T> {
    u.iter()
        .map(|x| x.clone() * T::from_rational(sign, 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    type E = ExactScalar;

    #[test]
    fn rep_1_1_matches_expected_blocks() {
        let rep = build_rep::<E>(1, 1).unwrap();
        // Φ(e₁) = i·U = diag(−1, 1), Φ(e₂) = V.
        let d = CMatrix::from_rows(vec![
            vec![-E::one(), E::zero()],
            vec![E::zero(), E::one()],
        ]);
        assert_eq!(rep.generators[0], d);
        assert_eq!(rep.generators[1], block_v::<E>());
        let sq0 = &rep.generators[0] * &rep.generators[0];
        let sq1 = &rep.generators[1] * &rep.generators[1];
        assert_eq!(sq0, CMatrix::identity(2));
        assert_eq!(sq1, CMatrix::identity(2).scale(&-E::one()));
    }

    #[test]
    fn relations_hold_small_signatures() {
        for n in 1..=6usize {
            for p in 0..=n {
                let rep = build_rep::<E>(p, n - p).unwrap();
                assert!(
                    rep.relations_hold_exactly(),
                    "relations failed for ({},{})",
                    p,
                    n - p
                );
            }
        }
    }

    #[test]
    fn volume_is_identity_odd_q_positive() {
        for &(p, q) in &[(0, 3), (1, 2), (2, 1), (0, 5), (1, 4), (2, 3), (3, 2), (4, 1)] {
            let rep = build_rep::<E>(p, q).unwrap();
            let vol = volume_complex(&rep);
            assert_eq!(vol, CMatrix::identity(rep.dim()), "omega_C != Id for ({p},{q})");
        }
    }

    #[test]
    fn volume_squares_to_identity_even() {
        for &(p, q) in &[(0, 2), (1, 1), (2, 2), (0, 4), (1, 3), (3, 1), (2, 4)] {
            let rep = build_rep::<E>(p, q).unwrap();
            let vol = volume_complex(&rep);
            assert_eq!(&vol * &vol, CMatrix::identity(rep.dim()));
        }
    }

    #[test]
    fn volume_0_2_eigenstructure() {
        // ω_C = −i·e₁e₂ has eigenvalues ±1 with multiplicity 1 each; the
        // oracle here is trace 0 together with ω² = Id.
        let rep = build_rep::<E>(0, 2).unwrap();
        let vol = volume_complex(&rep);
        assert_eq!(vol.trace(), E::zero());
        assert_eq!(&vol * &vol, CMatrix::identity(2));
    }

    #[test]
    fn projectors_idempotent_complementary() {
        let rep = build_rep::<E>(2, 2).unwrap();
        let (pp, pm) = half_projectors(&rep).unwrap();
        assert_eq!(&pp * &pp, pp);
        assert_eq!(&pm * &pm, pm);
        assert!((&pp * &pm).is_zero());
        assert_eq!(&pp + &pm, CMatrix::identity(4));
        assert_eq!(pp.rank(0.0), 2);
        assert_eq!(pm.rank(0.0), 2);
    }

    #[test]
    fn projectors_reject_odd() {
        let rep = build_rep::<E>(0, 3).unwrap();
        assert!(half_projectors(&rep).is_err());
    }

    #[test]
    fn u_minus_lands_in_minus_projector_0_2() {
        let rep = build_rep::<E>(0, 2).unwrap();
        let (_, pm) = half_projectors(&rep).unwrap();
        let u = u_deltas::<E>(&[-1]);
        assert_eq!(pm.apply(&u), u);
    }

    #[test]
    fn label_mismatch_tracks_timelike_parity() {
        // u(δ) labeling agrees with the volume eigenvalue iff p is even.
        let even_p = build_rep::<E>(2, 2).unwrap();
        assert!(half_spinor_label_mismatches(&even_p).is_empty());
        let odd_p = build_rep::<E>(1, 3).unwrap();
        assert_eq!(half_spinor_label_mismatches(&odd_p).len(), 1 << odd_p.m);
    }

    #[test]
    fn lie_action_scalar_part() {
        let rep = build_rep::<E>(0, 2).unwrap();
        let x = SpincElement::imaginary(E::one());
        let act = spinc_lie_action(&rep, &x);
        assert_eq!(act, CMatrix::identity(2).scale(&E::i()));
    }

    #[test]
    fn lie_action_bivector_is_generator_product() {
        let rep = build_rep::<E>(0, 2).unwrap();
        let x = SpincElement::basis_bivector(0, 1);
        let act = spinc_lie_action(&rep, &x);
        assert_eq!(act, &rep.generators[0] * &rep.generators[1]);
    }

    #[test]
    fn so_image_of_basis_bivector() {
        // ζ(e_i e_j, 0) = 2E_ij.
        let rep = build_rep::<E>(0, 2).unwrap();
        let x = SpincElement::<E>::basis_bivector(0, 1);
        let s = spinc_so_matrix(&rep, &x);
        let expect = CMatrix::from_rows(vec![
            vec![E::zero(), E::int(-2)],
            vec![E::int(2), E::zero()],
        ]);
        assert_eq!(s, expect);
    }

    #[test]
    fn unitary_lift_annihilates_vacuum_0_2() {
        let rep = build_rep::<E>(0, 2).unwrap();
        let u = CMatrix::from_rows(vec![vec![E::i()]]);
        let act = unitary_lie_lift(&rep, &u).unwrap();
        let vac = u_deltas::<E>(&[-1]);
        assert!(crate::matrix::spinor_is_zero(&act.apply(&vac)));
    }

    #[test]
    fn unitary_lift_zero_is_zero() {
        let rep = build_rep::<E>(0, 4).unwrap();
        let u = CMatrix::<E>::zeros(2, 2);
        let act = unitary_lie_lift(&rep, &u).unwrap();
        assert!(act.is_zero());
    }

    #[test]
    fn timelike_only_odd_signature_via_flip() {
        let rep = build_rep::<E>(3, 0).unwrap();
        assert!(rep.relations_hold_exactly());
        let rep5 = build_rep::<E>(5, 0).unwrap();
        assert!(rep5.relations_hold_exactly());
    }
}
