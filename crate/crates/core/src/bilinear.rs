//! Invariant inner products on the spinor module and the bilinear forms
//! they induce: the degree-k forms α^k, the Dirac current, reality-type
//! detection for each degree, and infinitesimal equivariance.

use crate::clifford::{spinc_lie_action, spinc_so_matrix, CliffordRep, SpincElement};

use crate::forms::{so_action_on_form, KForm};
use crate::matrix::{CMatrix, Spinor};
use crate::scalar::Scalar;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A spinor inner product ⟨u,v⟩ = (M·u, v) with the standard Hermitian
/// product on components, conjugating either the second slot (default) or
/// the first (used by the split-signature cases whose natural product is
/// antisymmetric).
#[derive(Clone)]
pub struct InnerProductSpec<T: Scalar> {
    pub p: usize,
    pub matrix: CMatrix<T>,
    pub conj_first: bool,
}

impl<T: Scalar> InnerProductSpec<T> {
    /// The generic product: d · (e_1 ⋯ e_p · u, v) with d = i^{p(p−1)/2}.
    pub fn standard(rep: &CliffordRep<T>) -> Self {
        let mut m = CMatrix::<T>::identity(rep.dim());
        for i in 0..rep.p {
            m = &m * &rep.generators[i];
        }
        let mut d = T::one();
        let expo = (rep.p * (rep.p.saturating_sub(1)) / 2) % 4;
        for _ in 0..expo {
            d = d * T::i();
        }
        InnerProductSpec {
            p: rep.p,
            matrix: m.scale(&d),
            conj_first: false,
        }
    }

    pub fn with_matrix(p: usize, matrix: CMatrix<T>, conj_first: bool) -> Self {
        InnerProductSpec {
            p,
            matrix,
            conj_first,
        }
    }
}

/// ⟨u, v⟩ for the given spec.
pub fn inner<T: Scalar>(spec: &InnerProductSpec<T>, u: &Spinor<T>, v: &Spinor<T>) -> T {
    assert_eq!(u.len(), v.len());
    let mut acc = T::zero();
    if spec.conj_first {
        // ⟨u,v⟩ = Σ conj(u_i) (M v)_i
        let mv = spec.matrix.apply(v);
        for (ui, mvi) in u.iter().zip(mv) {
            acc = acc + ui.conj() * mvi;
        }
    } else {
        // ⟨u,v⟩ = Σ (M u)_i conj(v_i)
        let mu = spec.matrix.apply(u);
        for (mui, vi) in mu.iter().zip(v) {
            acc = acc + mui.clone() * vi.conj();
        }
    }
    acc
}

/// Reality type of ⟨α·χ, χ⟩ for basis k-forms: always real, always
/// imaginary, or mixed (which the callers treat as an inconsistency).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Reality {
    Real,
    Imaginary,
    Mixed,
}

/// Reality flags per degree, together with a sign for the projection.
/// The sign freedom is a convention choice per realisation; the hard-coded
/// low-dimensional cases pin it to reproduce their published orbit tables.
#[derive(Clone, Debug)]
pub struct RealityTable {
    pub flags: Vec<Reality>,
    pub signs: Vec<i8>,
}

impl RealityTable {
    pub fn flag(&self, k: usize) -> Reality {
        self.flags[k]
    }

    pub fn set(&mut self, k: usize, flag: Reality, sign: i8) {
        self.flags[k] = flag;
        self.signs[k] = sign;
    }
}

fn random_spinor<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> Spinor<T> {
    (0..dim)
        .map(|_| {
            let re = T::from_rational(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2));
            let im = T::from_rational(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2));
            re + T::i() * im
        })
        .collect()
}

fn product_matrix<T: Scalar>(rep: &CliffordRep<T>, indices: &[u8]) -> CMatrix<T> {
    let mut m = CMatrix::<T>::identity(rep.dim());
    for &i in indices {
        m = &m * &rep.generators[i as usize];
    }
    m
}

fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut tuple = vec![0u8; k];
    fn rec(tuple: &mut Vec<u8>, pos: usize, start: usize, n: usize, out: &mut Vec<Vec<u8>>) {
        if pos == tuple.len() {
            out.push(tuple.clone());
            return;
        }
        for j in start..n {
            tuple[pos] = j as u8;
            rec(tuple, pos + 1, j + 1, n, out);
        }
    }
    rec(&mut tuple, 0, 0, n, &mut out);
    out
}

/// Sample basis k-forms against random spinors and classify the values of
/// ⟨e_I·χ, χ⟩ as purely real or purely imaginary. Mixed outcomes are
/// reported as such, never silently resolved.
pub fn detect_reality<T: Scalar>(
    rep: &CliffordRep<T>,
    spec: &InnerProductSpec<T>,
    k: usize,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Reality {
    let tol = if T::EXACT { 0.0 } else { 1e-9 };
    let mut saw_real = false;
    let mut saw_imag = false;
    for idx in increasing_tuples(rep.n, k) {
        let m = product_matrix(rep, &idx);
        for _ in 0..samples {
            let chi = random_spinor::<T>(rng, rep.dim());
            let val = inner(spec, &m.apply(&chi), &chi);
            let re = val.re_part().norm_f64();
            let im = val.im_part().norm_f64();
            if re > tol {
                saw_real = true;
            }
            if im > tol {
                saw_imag = true;
            }
            if saw_real && saw_imag {
                return Reality::Mixed;
            }
        }
    }
    match (saw_real, saw_imag) {
        (true, false) => Reality::Real,
        (false, true) => Reality::Imaginary,
        // All values vanished: call it real (the projection is immaterial).
        (false, false) => Reality::Real,
        (true, true) => Reality::Mixed,
    }
}

/// Detect reality flags for all degrees 0..=n.
pub fn detect_reality_table<T: Scalar>(
    rep: &CliffordRep<T>,
    spec: &InnerProductSpec<T>,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> RealityTable {
    let flags = (0..=rep.n)
        .map(|k| detect_reality(rep, spec, k, rng, samples))
        .collect();
    RealityTable {
        flags,
        signs: vec![1; rep.n + 1],
    }
}

fn project<T: Scalar>(table: &RealityTable, k: usize, val: T) -> T {
    let sign = T::from_rational(table.signs[k] as i64, 1);
    match table.flags[k] {
        Reality::Real | Reality::Mixed => val.re_part() * sign,
        Reality::Imaginary => val.im_part() * sign,
    }
}

/// The degree-k bilinear form of a pair of spinors. Coefficients follow the
/// component formula: on the increasing tuple I,
/// `ε_{i₁}⋯ε_{i_k} · d_k(⟨e_{i₁}⋯e_{i_k}·χ₁, χ₂⟩)`.
pub fn bilinear_kform<T: Scalar>(
    rep: &CliffordRep<T>,
    spec: &InnerProductSpec<T>,
    table: &RealityTable,
    chi1: &Spinor<T>,
    chi2: &Spinor<T>,
    k: usize,
) -> KForm<T> {
    let mut f = KForm::zero(k);
    for idx in increasing_tuples(rep.n, k) {
        let m = product_matrix(rep, &idx);
        let val = inner(spec, &m.apply(chi1), chi2);
        let mut sign = 1i64;
        for &i in &idx {
            sign *= rep.epsilon[i as usize] as i64;
        }
        let coeff = project(table, k, val) * T::from_rational(sign, 1);
        f.add_term(&idx, coeff);
    }
    f
}

/// α^k of a single spinor.
pub fn bilinear_kform_single<T: Scalar>(
    rep: &CliffordRep<T>,
    spec: &InnerProductSpec<T>,
    table: &RealityTable,
    chi: &Spinor<T>,
    k: usize,
) -> KForm<T> {
    bilinear_kform(rep, spec, table, chi, chi, k)
}

/// Dirac current: the vector dual of the degree-1 bilinear,
/// V_χ = (α¹_χ)♯, components V^i = ε_i d₁(⟨e_i·χ, χ⟩).
pub fn dirac_current<T: Scalar>(
    rep: &CliffordRep<T>,
    spec: &InnerProductSpec<T>,
    table: &RealityTable,
    chi: &Spinor<T>,
) -> Vec<T> {
    let f = bilinear_kform_single(rep, spec, table, chi, 1);
    crate::forms::one_form_sharp(&f, rep.n)
}

/// Causal type of a frame vector in Lorentzian signature: the sign of
/// ⟨V,V⟩ = Σ ε_i (V^i)².
pub fn causal_type<T: Scalar>(rep: &CliffordRep<T>, v: &[T]) -> i8 {
    let mut norm = T::zero();
    for (i, vi) in v.iter().enumerate() {
        norm = norm + T::from_rational(rep.epsilon[i] as i64, 1) * vi.clone() * vi.clone();
    }
    let x = norm.re_part().norm_f64() * if norm.re_part().to_complex().re < 0.0 { -1.0 } else { 1.0 };
    if x > 1e-12 {
        1
    } else if x < -1e-12 {
        -1
    } else {
        0
    }
}

/// Infinitesimal equivariance residual
/// `α^k_{ρ(X)χ, χ} + α^k_{χ, ρ(X)χ} − dλ(X)·α^k_χ`
/// for a Lie-algebra element X of spin^c. Exactly zero for every X.
pub fn equivariance_residual<T: Scalar>(
    rep: &CliffordRep<T>,
    spec: &InnerProductSpec<T>,
    table: &RealityTable,
    k: usize,
    x: &SpincElement<T>,
    chi: &Spinor<T>,
) -> KForm<T> {
    let act = spinc_lie_action(rep, x);
    let xchi = act.apply(chi);
    let t1 = bilinear_kform(rep, spec, table, &xchi, chi, k);
    let t2 = bilinear_kform(rep, spec, table, chi, &xchi, k);
    let so = spinc_so_matrix(rep, x);
    let base = bilinear_kform_single(rep, spec, table, chi, k);
    let so_act = so_action_on_form(&so, &base, &rep.epsilon);
    t1.add(&t2).sub(&so_act)
}

/// Adjoint-rule residual max over basis vectors and the given spinor pair:
/// ⟨X·u, v⟩ + (−1)^p ⟨u, X·v⟩.
pub fn vector_adjoint_residual<T: Scalar>(
    rep: &CliffordRep<T>,
    spec: &InnerProductSpec<T>,
    u: &Spinor<T>,
    v: &Spinor<T>,
) -> f64 {
    let sign = if spec.p % 2 == 0 { T::one() } else { -T::one() };
    let mut worst: f64 = 0.0;
    for g in &rep.generators {
        let lhs = inner(spec, &g.apply(u), v);
        let rhs = inner(spec, u, &g.apply(v));
        worst = worst.max((lhs + sign.clone() * rhs).norm_f64());
    }
    worst
}

/// Check invertibility-style nondegeneracy of α^p: α^p_χ = 0 ⇔ χ = 0.
pub fn degree_p_form_nonzero<T: Scalar>(
    rep: &CliffordRep<T>,
    spec: &InnerProductSpec<T>,
    table: &RealityTable,
    chi: &Spinor<T>,
) -> bool {
    let f = bilinear_kform_single(rep, spec, table, chi, rep.p);
    if T::EXACT {
        !f.is_zero()
    } else {
        f.norm_f64() > 1e-9
    }
}

pub fn random_spinor_exact<T: Scalar>(rng: &mut ChaCha8Rng, dim: usize) -> Spinor<T> {
    random_spinor::<T>(rng, dim)
}
