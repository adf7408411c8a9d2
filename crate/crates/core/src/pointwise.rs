//! Pointwise spinor calculus from explicit frame data: covariant
//! derivative, Dirac and twistor operators, gauge transformation, and the
//! curvature/integrability residuals of the first-order system attached to
//! the twistor equation.
//!
//! Conventions:
//! * `omega[i][pair(k,l)]` stores the raw metric coefficients
//!   g(∇_{s_i} s_k, s_l); the covariant-derivative formula applies the
//!   ε_k ε_l weights itself.
//! * `a[i]` are the S¹-connection values A(s_i) ∈ iR.
//! * Curvature 2-forms are stored with their frame values converted to
//!   coefficients, so that Clifford action matches the spinor curvature.

use crate::bilinear::{inner, InnerProductSpec, RealityTable};
use crate::clifford::CliffordRep;
use crate::error::CcksError;
use crate::forms::{
    clifford_action, contract, contract_vector, one_form_sharp, vector_action, vector_flat,
    wedge, KForm,
};
use crate::matrix::{spinor_add, spinor_scale, spinor_sub, Spinor};
use crate::scalar::Scalar;

pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    let mut idx = 0;
    for a in 0..n {
        for b in (a + 1)..n {
            if (a, b) == (i, j) {
                return idx;
            }
            idx += 1;
        }
    }
    unreachable!()
}

/// Optional curvature inputs for the integrability residuals.
#[derive(Clone)]
pub struct CurvatureBlock<T: Scalar> {
    /// Weyl operator 2-forms W(s_i, s_j) for i < j.
    pub weyl: Vec<KForm<T>>,
    /// Schouten tensor components K(s_i, s_j).
    pub schouten: Vec<Vec<T>>,
    /// Cotton 1-forms C(s_i, s_j) for i < j.
    pub cotton: Vec<KForm<T>>,
    /// Curvature of the S¹-connection as a 2-form with iR coefficients.
    pub da: KForm<T>,
    /// Covariant derivatives ∇_{s_i} dA, same storage as `da`.
    pub nabla_da: Vec<KForm<T>>,
    /// Scalar curvature.
    pub scalar_curv: T,
}

impl<T: Scalar> CurvatureBlock<T> {
    pub fn weyl_form(&self, n: usize, i: usize, j: usize) -> KForm<T> {
        if i == j {
            return KForm::zero(2);
        }
        if i < j {
            self.weyl[pair_index(n, i, j)].clone()
        } else {
            self.weyl[pair_index(n, j, i)].scale(&-T::one())
        }
    }

    pub fn cotton_form(&self, n: usize, i: usize, j: usize) -> KForm<T> {
        if i == j {
            return KForm::zero(1);
        }
        if i < j {
            self.cotton[pair_index(n, i, j)].clone()
        } else {
            self.cotton[pair_index(n, j, i)].scale(&-T::one())
        }
    }

    /// Largest Ricci-type trace Σ ε_i W(s_i, X, s_i, Y) over (X, Y).
    pub fn weyl_ricci_trace_max(&self, epsilon: &[i8]) -> f64 {
        let n = epsilon.len();
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for y in 0..n {
                let mut acc = T::zero();
                for i in 0..n {
                    if i == x {
                        continue;
                    }
                    let w = self.weyl_form(n, i, x);
                    let val = w.value_on_frame(&[i as u8, y as u8], epsilon);
                    acc = acc + T::from_rational(epsilon[i] as i64, 1) * val;
                }
                worst = worst.max(acc.norm_f64());
            }
        }
        worst
    }
}

/// All pointwise inputs for the residual formulas.
#[derive(Clone)]
pub struct FramePointData<T: Scalar> {
    pub rep: CliffordRep<T>,
    pub inner: InnerProductSpec<T>,
    pub table: RealityTable,
    /// Raw spin coefficients g(∇_{s_i}s_k, s_l), indexed [i][pair(k,l)].
    pub omega: Vec<Vec<T>>,
    /// Connection values A(s_i) ∈ iR.
    pub a: Vec<T>,
    pub phi: Spinor<T>,
    /// Directional derivatives of the spinor components; zero for
    /// frame-constant spinors.
    pub dphi: Vec<Spinor<T>>,
    pub curvature: Option<CurvatureBlock<T>>,
}

impl<T: Scalar> FramePointData<T> {
    pub fn new(
        rep: CliffordRep<T>,
        inner: InnerProductSpec<T>,
        table: RealityTable,
        omega: Vec<Vec<T>>,
        a: Vec<T>,
        phi: Spinor<T>,
    ) -> Self {
        let n = rep.n;
        let dim = rep.dim();
        FramePointData {
            rep,
            inner,
            table,
            omega,
            a,
            phi,
            dphi: vec![vec![T::zero(); dim]; n],
            curvature: None,
        }
    }

    pub fn omega_raw(&self, i: usize, k: usize, l: usize) -> T {
        if k == l {
            return T::zero();
        }
        let n = self.rep.n;
        if k < l {
            self.omega[i][pair_index(n, k, l)].clone()
        } else {
            -self.omega[i][pair_index(n, l, k)].clone()
        }
    }

    /// Validate structural invariants: imaginary connection values and,
    /// when curvature is present, the Ricci-trace-free Weyl block.
    pub fn validate(&self, tol: f64) -> Result<(), CcksError> {
        for (i, a) in self.a.iter().enumerate() {
            if a.re_part().norm_f64() > tol {
                return Err(CcksError::invariant(
                    format!("a[{i}]"),
                    "connection value must be purely imaginary",
                ));
            }
        }
        if let Some(curv) = &self.curvature {
            for (idx, c) in curv.da.coeffs.iter() {
                if c.re_part().norm_f64() > tol {
                    return Err(CcksError::invariant(
                        format!("da{idx:?}"),
                        "curvature 2-form must have imaginary coefficients",
                    ));
                }
            }
            let trace = curv.weyl_ricci_trace_max(&self.rep.epsilon);
            let limit = if T::EXACT { 0.0 } else { tol.max(1e-5) };
            if trace > limit {
                return Err(CcksError::invariant(
                    "weyl",
                    format!("Weyl block has Ricci trace {trace:.3e}"),
                ));
            }
        }
        Ok(())
    }

    fn curv(&self) -> Result<&CurvatureBlock<T>, CcksError> {
        self.curvature
            .as_ref()
            .ok_or_else(|| CcksError::usage("curvature block required"))
    }
}

/// Covariant derivative ∇_{s_i}φ:
/// dφ_i + ½ Σ_{k<l} ε_k ε_l ω_{kl}(s_i) e_k·e_l·φ + ½ A_i·φ.
pub fn cov_deriv<T: Scalar>(data: &FramePointData<T>, i: usize) -> Spinor<T> {
    let rep = &data.rep;
    let n = rep.n;
    let half = T::from_rational(1, 2);
    let mut out = data.dphi[i].clone();
    for k in 0..n {
        for l in (k + 1)..n {
            let w = data.omega_raw(i, k, l);
            if w.is_zero() {
                continue;
            }
            let eps = T::from_rational((rep.epsilon[k] * rep.epsilon[l]) as i64, 1);
            let coeff = half.clone() * eps * w;
            let v = rep.generators[k].apply(&rep.generators[l].apply(&data.phi));
            for (o, x) in out.iter_mut().zip(v) {
                *o = o.clone() + coeff.clone() * x;
            }
        }
    }
    let ha = half * data.a[i].clone();
    for (o, x) in out.iter_mut().zip(&data.phi) {
        *o = o.clone() + ha.clone() * x.clone();
    }
    out
}

/// Dirac operator value Σ ε_i e_i · ∇_{s_i}φ.
pub fn dirac<T: Scalar>(data: &FramePointData<T>) -> Spinor<T> {
    let rep = &data.rep;
    let mut out = vec![T::zero(); rep.dim()];
    for i in 0..rep.n {
        let d = cov_deriv(data, i);
        let v = rep.generators[i].apply(&d);
        let eps = T::from_rational(rep.epsilon[i] as i64, 1);
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + eps.clone() * x;
        }
    }
    out
}

/// Dirac value together with the twistor residuals
/// res_i = ∇_{s_i}φ + (1/n) e_i · Dφ.
pub fn dirac_and_twistor<T: Scalar>(data: &FramePointData<T>) -> (Spinor<T>, Vec<Spinor<T>>) {
    let rep = &data.rep;
    let d = dirac(data);
    let inv_n = T::from_rational(1, rep.n as i64);
    let mut residuals = Vec::with_capacity(rep.n);
    for i in 0..rep.n {
        let cd = cov_deriv(data, i);
        let ed = rep.generators[i].apply(&d);
        residuals.push(spinor_add(&cd, &spinor_scale(&inv_n, &ed)));
    }
    (d, residuals)
}

/// Gauge change: φ ↦ z·φ with |z| = 1, A ↦ A − i·dτ, where z plays the
/// role of e^{iτ/2} and `dtau` are the directional derivatives of τ.
pub fn gauge_transform<T: Scalar>(
    data: &FramePointData<T>,
    phase: &T,
    dtau: &[T],
) -> FramePointData<T> {
    let mut out = data.clone();
    out.phi = spinor_scale(phase, &data.phi);
    let half_i = T::i() * T::from_rational(1, 2);
    for i in 0..data.rep.n {
        // s_i(e^{iτ/2}φ) = e^{iτ/2}( (i/2)(s_iτ)φ + s_iφ )
        let extra = spinor_scale(&(half_i.clone() * dtau[i].clone()), &data.phi);
        out.dphi[i] = spinor_scale(phase, &spinor_add(&data.dphi[i], &extra));
        out.a[i] = data.a[i].clone() - T::i() * dtau[i].clone();
    }
    out
}

/// Right-hand side of the Laplace-type identity:
/// (n/(n−1)) · (R/4 · φ + ½ dA·φ).
pub fn laplace_rhs<T: Scalar>(data: &FramePointData<T>) -> Result<Spinor<T>, CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n as i64;
    let quarter_r = curv.scalar_curv.clone() * T::from_rational(1, 4);
    let mut out = spinor_scale(&quarter_r, &data.phi);
    let da_act = clifford_action(rep, &curv.da, &data.phi);
    out = spinor_add(&out, &spinor_scale(&T::from_rational(1, 2), &da_act));
    Ok(spinor_scale(&T::from_rational(n, n - 1), &out))
}

/// Right-hand side of the Dirac-gradient identity in direction i:
/// (n/2)·(K(s_i)·φ + (1/(n−2))((1/(n−1)) s_i·dA·φ + (s_i⨼dA)·φ)).
pub fn dirac_gradient_rhs<T: Scalar>(
    data: &FramePointData<T>,
    i: usize,
) -> Result<Spinor<T>, CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n as i64;
    // K(s_i) as a frame vector: K(s_i)♯ = Σ_k ε_k K_{ik} s_k.
    let kv: Vec<T> = (0..rep.n)
        .map(|k| T::from_rational(rep.epsilon[k] as i64, 1) * curv.schouten[i][k].clone())
        .collect();
    let mut out = vector_action(rep, &kv, &data.phi);

    let da_phi = clifford_action(rep, &curv.da, &data.phi);
    let x_da_phi = rep.generators[i].apply(&da_phi);
    let c1 = T::from_rational(1, (n - 2) * (n - 1));
    out = spinor_add(&out, &spinor_scale(&c1, &x_da_phi));

    let contr = contract(i, &curv.da, &rep.epsilon)?;
    let contr_phi = clifford_action(rep, &contr, &data.phi);
    let c2 = T::from_rational(1, n - 2);
    out = spinor_add(&out, &spinor_scale(&c2, &contr_phi));

    Ok(spinor_scale(&T::from_rational(n, 2), &out))
}

/// First integrability residual for the frame pair (i, j):
/// ½W(s_i,s_j)·φ + ((n−3)/(2(n−1)) dA(s_i,s_j) − 1/((n−2)(n−1)) s_i♭∧s_j♭∧dA)·φ
/// + (1/(n−2))(1/(n−1) − ½)(s_i♭∧(s_j⨼dA) − s_j♭∧(s_i⨼dA))·φ.
pub fn int1_residual<T: Scalar>(
    data: &FramePointData<T>,
    i: usize,
    j: usize,
) -> Result<Spinor<T>, CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n as i64;
    if i == j {
        return Ok(vec![T::zero(); rep.dim()]);
    }
    let w = curv.weyl_form(rep.n, i, j);
    let mut out = spinor_scale(
        &T::from_rational(1, 2),
        &clifford_action(rep, &w, &data.phi),
    );

    let da_ij = curv.da.value_on_frame(&[i as u8, j as u8], &rep.epsilon);
    let c_scal = T::from_rational(n - 3, 2 * (n - 1)) * da_ij;
    out = spinor_add(&out, &spinor_scale(&c_scal, &data.phi));

    let xi = KForm::monomial(&[i as u8], T::one());
    let xj = KForm::monomial(&[j as u8], T::one());
    let xij = wedge(&xi, &xj, rep.n)?;
    let wedge3 = wedge(&xij, &curv.da, rep.n)?;
    let c_w = T::from_rational(-1, (n - 2) * (n - 1));
    out = spinor_add(
        &out,
        &spinor_scale(&c_w, &clifford_action(rep, &wedge3, &data.phi)),
    );

    let ci = contract(i, &curv.da, &rep.epsilon)?;
    let cj = contract(j, &curv.da, &rep.epsilon)?;
    let mixed = wedge(&xi, &cj, rep.n)?.sub(&wedge(&xj, &ci, rep.n)?);
    // (1/(n−2))(1/(n−1) − 1/2) = (3−n)/(2(n−2)(n−1))
    let c_m = T::from_rational(3 - n, 2 * (n - 2) * (n - 1));
    out = spinor_add(
        &out,
        &spinor_scale(&c_m, &clifford_action(rep, &mixed, &data.phi)),
    );
    Ok(out)
}

/// The Weyl part of the first integrability condition alone, ½W(s_i,s_j)·φ.
/// With the charge terms removed the full residual reduces to this.
pub fn int1_weyl_part<T: Scalar>(
    data: &FramePointData<T>,
    i: usize,
    j: usize,
) -> Result<Spinor<T>, CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let w = curv.weyl_form(rep.n, i, j);
    Ok(spinor_scale(
        &T::from_rational(1, 2),
        &clifford_action(rep, &w, &data.phi),
    ))
}

/// Second integrability residual for the frame pair (i, j), evaluated on
/// φ and Dφ:
///
/// ½W(X,Y)·Dφ − (n/2)C(X,Y)·φ
/// − n/(2(n−2)(n−1)) (Y♭∧∇_XdA − X♭∧∇_YdA)·φ − n/(2(n−1)) (Y⨼∇_XdA − X⨼∇_YdA)·φ
/// + [ (n+1)/(2(n−1)) dA(X,Y) − 1/((n−2)(n−1)) X♭∧Y♭∧dA
///     − 1/(2(n−2)) (X♭∧(Y⨼dA) − Y♭∧(X⨼dA)) ]·Dφ.
pub fn pr2_residual<T: Scalar>(
    data: &FramePointData<T>,
    i: usize,
    j: usize,
) -> Result<Spinor<T>, CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n as i64;
    if i == j {
        return Ok(vec![T::zero(); rep.dim()]);
    }
    let dphi = dirac(data);

    let w = curv.weyl_form(rep.n, i, j);
    let mut out = spinor_scale(&T::from_rational(1, 2), &clifford_action(rep, &w, &dphi));

    let c = curv.cotton_form(rep.n, i, j);
    let c_phi = clifford_action(rep, &c, &data.phi);
    out = spinor_add(&out, &spinor_scale(&T::from_rational(-n, 2), &c_phi));

    let xi = KForm::monomial(&[i as u8], T::one());
    let xj = KForm::monomial(&[j as u8], T::one());
    let ndai = &curv.nabla_da[i];
    let ndaj = &curv.nabla_da[j];

    // wedge part of the ∇dA terms
    let wedge_term = wedge(&xj, ndai, rep.n)?.sub(&wedge(&xi, ndaj, rep.n)?);
    let cw = T::from_rational(-n, 2 * (n - 2) * (n - 1));
    out = spinor_add(
        &out,
        &spinor_scale(&cw, &clifford_action(rep, &wedge_term, &data.phi)),
    );

    // contraction part of the ∇dA terms
    let contr_term = contract(j, ndai, &rep.epsilon)?.sub(&contract(i, ndaj, &rep.epsilon)?);
    let cc = T::from_rational(-n, 2 * (n - 1));
    out = spinor_add(
        &out,
        &spinor_scale(&cc, &clifford_action(rep, &contr_term, &data.phi)),
    );

    // dA terms acting on Dφ
    let da_ij = curv.da.value_on_frame(&[i as u8, j as u8], &rep.epsilon);
    let c_scal = T::from_rational(n + 1, 2 * (n - 1)) * da_ij;
    out = spinor_add(&out, &spinor_scale(&c_scal, &dphi));

    let xij = wedge(&xi, &xj, rep.n)?;
    let wedge3 = wedge(&xij, &curv.da, rep.n)?;
    let c3 = T::from_rational(-1, (n - 2) * (n - 1));
    out = spinor_add(
        &out,
        &spinor_scale(&c3, &clifford_action(rep, &wedge3, &dphi)),
    );

    let ci = contract(i, &curv.da, &rep.epsilon)?;
    let cj = contract(j, &curv.da, &rep.epsilon)?;
    let mixed = wedge(&xi, &cj, rep.n)?.sub(&wedge(&xj, &ci, rep.n)?);
    let cm = T::from_rational(-1, 2 * (n - 2));
    out = spinor_add(
        &out,
        &spinor_scale(&cm, &clifford_action(rep, &mixed, &dphi)),
    );

    Ok(out)
}

// ---------------------------------------------------------------------------
// Bilinear form fields entering the first-order system
// ---------------------------------------------------------------------------

fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    fn rec(cur: &mut Vec<u8>, start: usize, k: usize, n: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j as u8);
            rec(cur, j + 1, k, n, out);
            cur.pop();
        }
    }
    rec(&mut Vec::new(), 0, k, n, &mut out);
    out
}

#[derive(Clone, Copy)]
enum Proj {
    Re,
    Im,
}

fn form_from_bracket<T: Scalar>(
    data: &FramePointData<T>,
    k: usize,
    chi1: &Spinor<T>,
    chi2: &Spinor<T>,
    proj: Proj,
    scale: T,
) -> KForm<T> {
    let rep = &data.rep;
    let mut f = KForm::zero(k);
    for idx in increasing_tuples(rep.n, k) {
        let mut v = chi1.clone();
        for &i in idx.iter().rev() {
            v = rep.generators[i as usize].apply(&v);
        }
        let val = inner(&data.inner, &v, chi2);
        let projected = match proj {
            Proj::Re => val.re_part(),
            Proj::Im => val.im_part(),
        };
        let mut sign = 1i64;
        for &i in &idx {
            sign *= rep.epsilon[i as usize] as i64;
        }
        f.add_term(&idx, projected * scale.clone() * T::from_rational(sign, 1));
    }
    f
}

/// The 1-form of the spinor itself (Dirac-current 1-form, d₁ = Re).
pub fn alpha1<T: Scalar>(data: &FramePointData<T>) -> KForm<T> {
    form_from_bracket(data, 1, &data.phi, &data.phi, Proj::Re, T::one())
}

/// α₀² = (2/n)·Re⟨β·Dφ, φ⟩-form of degree 2.
pub fn alpha0_2<T: Scalar>(data: &FramePointData<T>, dphi: &Spinor<T>) -> KForm<T> {
    let s = T::from_rational(2, data.rep.n as i64);
    form_from_bracket(data, 2, dphi, &data.phi, Proj::Re, s)
}

/// α_∓ = (2/n)·Re⟨Dφ, φ⟩ (0-form value).
pub fn alpha_mp<T: Scalar>(data: &FramePointData<T>, dphi: &Spinor<T>) -> T {
    let s = T::from_rational(2, data.rep.n as i64);
    inner(&data.inner, dphi, &data.phi).re_part() * s
}

/// Dirac-current 1-form of Dφ.
pub fn alpha1_of_dirac<T: Scalar>(data: &FramePointData<T>, dphi: &Spinor<T>) -> KForm<T> {
    form_from_bracket(data, 1, dphi, dphi, Proj::Re, T::one())
}

/// α_dA^j: degree-j form with ⟨dA·φ, e_I·φ⟩ projected to its real part and
/// scaled by 1/((n−2)(n−1)).
pub fn alpha_da<T: Scalar>(data: &FramePointData<T>, j: usize) -> Result<KForm<T>, CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n as i64;
    let da_phi = clifford_action(rep, &curv.da, &data.phi);
    let mut f = KForm::zero(j);
    for idx in increasing_tuples(rep.n, j) {
        let mut v = data.phi.clone();
        for &i in idx.iter().rev() {
            v = rep.generators[i as usize].apply(&v);
        }
        let val = inner(&data.inner, &da_phi, &v).re_part();
        let mut sign = 1i64;
        for &i in &idx {
            sign *= rep.epsilon[i as usize] as i64;
        }
        f.add_term(
            &idx,
            val * T::from_rational(sign, (n - 2) * (n - 1)),
        );
    }
    Ok(f)
}

/// Imaginary-part companion of α₀².
pub fn alpha0_2_tilde<T: Scalar>(data: &FramePointData<T>, dphi: &Spinor<T>) -> KForm<T> {
    let s = T::from_rational(2, data.rep.n as i64);
    form_from_bracket(data, 2, dphi, &data.phi, Proj::Im, s)
}

/// Imaginary-part companion of α_∓.
pub fn alpha_mp_tilde<T: Scalar>(data: &FramePointData<T>, dphi: &Spinor<T>) -> T {
    let s = T::from_rational(2, data.rep.n as i64);
    inner(&data.inner, dphi, &data.phi).im_part() * s
}

/// Degree-3 bilinear of φ (imaginary projection in Lorentzian signature).
pub fn alpha3<T: Scalar>(data: &FramePointData<T>) -> KForm<T> {
    form_from_bracket(data, 3, &data.phi, &data.phi, Proj::Im, T::one())
}

/// Chart-supplied covariant derivatives of the four forms of the
/// first-order system, per frame direction.
pub struct NocoInputs<T: Scalar> {
    pub nabla_alpha1: Vec<KForm<T>>,
    pub nabla_alpha0_2: Vec<KForm<T>>,
    pub nabla_alpha_mp: Vec<T>,
    pub nabla_alpha1_dirac: Vec<KForm<T>>,
}

/// Residuals of the four rows of the first-order system in the direction i,
/// returned as (row1: 1-form, row2: 2-form, row3: scalar, row4: 1-form).
pub struct NocoResiduals<T: Scalar> {
    pub row1: KForm<T>,
    pub row2: KForm<T>,
    pub row3: T,
    pub row4: KForm<T>,
}

pub fn noco_residuals<T: Scalar>(
    data: &FramePointData<T>,
    inputs: &NocoInputs<T>,
    i: usize,
) -> Result<NocoResiduals<T>, CcksError> {
    if data.rep.p != 1 {
        return Err(CcksError::usage(
            "the first-order current system is a Lorentzian statement",
        ));
    }
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n as i64;
    let dphi = dirac(data);

    let a1 = alpha1(data);
    let a02 = alpha0_2(data, &dphi);
    let amp = alpha_mp(data, &dphi);
    let a1d = alpha1_of_dirac(data, &dphi).scale(&T::from_rational(2, n * n));

    // Schouten 1-form K(s_i) and its vector.
    let mut kform = KForm::zero(1);
    for k in 0..rep.n {
        kform.add_term(
            &[k as u8],
            T::from_rational(rep.epsilon[k] as i64, 1) * curv.schouten[i][k].clone(),
        );
    }
    let kvec = one_form_sharp(&kform, rep.n);

    let xi = KForm::monomial(&[i as u8], T::one());
    let da_real = curv.da.scale(&-T::i()); // (1/i)·dA
    let xi_da = contract(i, &da_real, &rep.epsilon)?;
    let xi_da_vec = one_form_sharp(&xi_da, rep.n);

    // Row 1: ∇_X α¹ − X⨼α₀² − X♭∧α_∓  = 0.
    let row1 = inputs.nabla_alpha1[i]
        .sub(&contract(i, &a02, &rep.epsilon)?)
        .sub(&xi.scale(&amp));

    // Row 2: −K(X)∧α¹ + ∇_X α₀² + X♭∧(2/n² α¹_Dφ) = RHS₂.
    let lhs2 = inputs.nabla_alpha0_2[i]
        .sub(&wedge(&kform, &a1, rep.n)?)
        .add(&wedge(&xi, &a1d, rep.n)?);
    let a3 = alpha3(data);
    let rhs2a = contract_vector(&xi_da_vec, &a3, &rep.epsilon)?
        .scale(&T::from_rational(1, n - 2));
    let a_da1 = alpha_da(data, 1)?;
    let a_da3 = alpha_da(data, 3)?;
    let rhs2 = rhs2a
        .sub(&wedge(&xi, &a_da1, rep.n)?)
        .add(&contract(i, &a_da3, &rep.epsilon)?);
    let row2 = lhs2.sub(&rhs2);

    // Row 3: −K(X)⨼α¹ + ∇_X α_∓ − X⨼(2/n² α¹_Dφ) = X⨼α_dA¹.
    let kc = contract_vector(&kvec, &a1, &rep.epsilon)?;
    let kc_val = kc.coeffs.get(&Vec::new()).cloned().unwrap_or_else(T::zero);
    let xc = contract(i, &a1d, &rep.epsilon)?;
    let xc_val = xc.coeffs.get(&Vec::new()).cloned().unwrap_or_else(T::zero);
    let rhs3 = contract(i, &a_da1, &rep.epsilon)?;
    let rhs3_val = rhs3.coeffs.get(&Vec::new()).cloned().unwrap_or_else(T::zero);
    let row3 = inputs.nabla_alpha_mp[i].clone() - kc_val - xc_val - rhs3_val;

    // Row 4: K(X)⨼α₀² − K(X)∧α_∓ + ∇_X(2/n² α¹_Dφ) = RHS₄.
    let lhs4 = contract_vector(&kvec, &a02, &rep.epsilon)?
        .sub(&kform.scale(&amp))
        .add(&inputs.nabla_alpha1_dirac[i].scale(&T::from_rational(2, n * n)));
    let a02t = alpha0_2_tilde(data, &dphi);
    let ampt = alpha_mp_tilde(data, &dphi);
    let rhs4 = contract_vector(&xi_da_vec, &a02t, &rep.epsilon)?
        .scale(&T::from_rational(1, n - 2))
        .add(&xi_da.scale(&ampt))
        .scale(&T::from_rational(1, n - 1));
    let row4 = lhs4.sub(&rhs4);

    Ok(NocoResiduals {
        row1,
        row2,
        row3,
        row4,
    })
}

/// Residual of the current-preserves-charge identity:
/// V_φ ⨼ (1/i)dA − (2(1−n)/n)·d(Im⟨Dφ, φ⟩),
/// with the differential supplied as directional values.
pub fn charge_current_residual<T: Scalar>(
    data: &FramePointData<T>,
    d_im_dirac: &[T],
) -> Result<KForm<T>, CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n as i64;
    let a1 = alpha1(data);
    let v = one_form_sharp(&a1, rep.n);
    let da_real = curv.da.scale(&-T::i());
    let lhs = contract_vector(&v, &da_real, &rep.epsilon)?;
    let df = KForm::from_frame_values(
        1,
        d_im_dirac
            .iter()
            .enumerate()
            .map(|(k, val)| (vec![k as u8], val.clone())),
        &rep.epsilon,
    );
    Ok(lhs.sub(&df.scale(&T::from_rational(2 * (1 - n), n))))
}

/// The two sides of the Weyl-insertion equivalence: max norms of
/// V_φ ⨼ W (over frame pairs and slots) and of (s_j⨼(1/i)dA)♯ ⨼ α³_φ.
pub fn weyl_insertion_norms<T: Scalar>(
    data: &FramePointData<T>,
) -> Result<(f64, f64), CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n;
    let a1 = alpha1(data);
    let v = one_form_sharp(&a1, n);

    // V ⨼ W: contract the current into every slot of the Weyl tensor.
    let mut vw: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let w = curv.weyl_form(n, i, j);
            // contraction into the 2-form slots
            let c = contract_vector(&v, &w, &rep.epsilon)?;
            vw = vw.max(c.norm_f64());
        }
        // contraction into the operator slots: Σ v^a W(s_a, s_i)
        let mut acc = KForm::zero(2);
        for a in 0..n {
            if v[a].is_zero() {
                continue;
            }
            acc = acc.add(&curv.weyl_form(n, a, i).scale(&v[a]));
        }
        vw = vw.max(acc.norm_f64());
    }

    let a3 = alpha3(data);
    let da_real = curv.da.scale(&-T::i());
    let mut contr_norm: f64 = 0.0;
    for j in 0..n {
        let xj_da = contract(j, &da_real, &rep.epsilon)?;
        let vecj = one_form_sharp(&xj_da, n);
        let c = contract_vector(&vecj, &a3, &rep.epsilon)?;
        contr_norm = contr_norm.max(c.norm_f64());
    }
    Ok((vw, contr_norm))
}

/// The two trailing scalar relations tying the degree-2/4 bilinears to the
/// Weyl tensor and charge. Returns the max residual over frame pairs of
///
/// i(1−n)·g(α², W(X,Y)) − (3−n)·dA(X,Y)·⟨φ,φ⟩ − 2/(n−2)·g(α⁴, X♭∧Y♭∧dA)
///
/// and of Re⟨φ, (X♭∧(Y⨼dA) − Y♭∧(X⨼dA))·φ⟩.
pub fn trailing_relation_residuals<T: Scalar>(
    data: &FramePointData<T>,
) -> Result<(f64, f64), CcksError> {
    let curv = data.curv()?;
    let rep = &data.rep;
    let n = rep.n as i64;
    let a2 = form_from_bracket(data, 2, &data.phi, &data.phi, Proj::Im, T::one());
    let a4 = form_from_bracket(data, 4, &data.phi, &data.phi, Proj::Re, T::one());
    let norm_phi = inner(&data.inner, &data.phi, &data.phi);
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    for i in 0..rep.n {
        for j in (i + 1)..rep.n {
            let w = curv.weyl_form(rep.n, i, j);
            let g_a2_w = crate::forms::pairing(&a2, &w, &rep.epsilon)?;
            let da_ij = curv.da.value_on_frame(&[i as u8, j as u8], &rep.epsilon);
            let xi = KForm::monomial(&[i as u8], T::one());
            let xj = KForm::monomial(&[j as u8], T::one());
            let xij = wedge(&xi, &xj, rep.n)?;
            let w3 = wedge(&xij, &curv.da, rep.n)?;
            let g_a4 = crate::forms::pairing(&a4, &w3, &rep.epsilon)?;
            let lhs = T::i() * T::from_rational(1 - n, 1) * g_a2_w;
            let rhs = T::from_rational(3 - n, 1) * da_ij * norm_phi.clone()
                + T::from_rational(2, n - 2) * g_a4;
            r1 = r1.max((lhs - rhs).norm_f64());

            let ci = contract(i, &curv.da, &rep.epsilon)?;
            let cj = contract(j, &curv.da, &rep.epsilon)?;
            let mixed = wedge(&xi, &cj, rep.n)?.sub(&wedge(&xj, &ci, rep.n)?);
            let act = clifford_action(rep, &mixed, &data.phi);
            let val = inner(&data.inner, &data.phi, &act);
            r2 = r2.max(val.re_part().norm_f64());
        }
    }
    Ok((r1, r2))
}

/// Identity check: Σ ε_i e_i · residual_i vanishes for arbitrary data.
pub fn twistor_projection_identity<T: Scalar>(data: &FramePointData<T>) -> f64 {
    let rep = &data.rep;
    let (_, residuals) = dirac_and_twistor(data);
    let mut acc = vec![T::zero(); rep.dim()];
    for (i, r) in residuals.iter().enumerate() {
        let v = rep.generators[i].apply(r);
        let eps = T::from_rational(rep.epsilon[i] as i64, 1);
        for (a, x) in acc.iter_mut().zip(v) {
            *a = a.clone() + eps.clone() * x;
        }
    }
    crate::matrix::spinor_norm_f64(&acc)
}

/// Dirac current of the stored spinor as frame-vector components.
pub fn current_components<T: Scalar>(data: &FramePointData<T>) -> Vec<T> {
    let a1 = alpha1(data);
    one_form_sharp(&a1, data.rep.n)
}

/// Flat of the current, for report output.
pub fn current_flat<T: Scalar>(data: &FramePointData<T>) -> KForm<T> {
    vector_flat(&current_components(data))
}

pub fn residual_norm<T: Scalar>(residuals: &[Spinor<T>]) -> f64 {
    residuals
        .iter()
        .map(|r| crate::matrix::spinor_norm_f64(r))
        .fold(0.0, f64::max)
}

pub fn spinor_diff_norm<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    crate::matrix::spinor_norm_f64(&spinor_sub(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowdim::{signature_case, CaseTag};
    use crate::scalar::ExactScalar;

    type E = ExactScalar;

    fn flat_data() -> FramePointData<E> {
        let case = signature_case::<E>(CaseTag::L14);
        let n = case.rep.n;
        FramePointData::new(
            case.rep.clone(),
            case.inner.clone(),
            case.table.clone(),
            vec![vec![E::zero(); pair_count(n)]; n],
            vec![E::zero(); n],
            case.orbit_reps[0].1.clone(),
        )
    }

    #[test]
    fn flat_covariant_derivative_vanishes() {
        let data = flat_data();
        for i in 0..5 {
            assert!(crate::matrix::spinor_is_zero(&cov_deriv(&data, i)));
        }
        let (d, res) = dirac_and_twistor(&data);
        assert!(crate::matrix::spinor_is_zero(&d));
        assert_eq!(residual_norm(&res), 0.0);
    }

    #[test]
    fn pure_connection_term() {
        // A = (ia, 0, …, 0), rest zero → ∇_{s₀}φ = (ia/2)φ.
        let mut data = flat_data();
        data.a[0] = E::i() * E::int(3);
        let d = cov_deriv(&data, 0);
        let expect = spinor_scale(&(E::i() * E::from_rational(3, 2)), &data.phi);
        assert_eq!(d, expect);
    }

    #[test]
    fn killing_type_data_reproduced() {
        // Impose ∇_{s_i}φ = iλ e_i·φ through dphi and re-evaluate.
        let mut data = flat_data();
        let lambda = E::from_rational(2, 3);
        for i in 0..5 {
            let target = spinor_scale(
                &(E::i() * lambda.clone()),
                &data.rep.generators[i].apply(&data.phi),
            );
            data.dphi[i] = target;
        }
        for i in 0..5 {
            let d = cov_deriv(&data, i);
            let expect = spinor_scale(
                &(E::i() * lambda.clone()),
                &data.rep.generators[i].apply(&data.phi),
            );
            assert_eq!(d, expect);
        }
        // Killing spinors are twistor spinors.
        let (_, res) = dirac_and_twistor(&data);
        assert_eq!(residual_norm(&res), 0.0);
    }

    #[test]
    fn projection_identity_for_random_data() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut data = flat_data();
        for i in 0..5 {
            for p in 0..pair_count(5) {
                data.omega[i][p] = E::from_rational(rng.gen_range(-3i64..=3), 2);
            }
            data.a[i] = E::i() * E::int(rng.gen_range(-2i64..=2));
            data.dphi[i] = crate::bilinear::random_spinor_exact::<E>(&mut rng, 4);
        }
        assert_eq!(twistor_projection_identity(&data), 0.0);
    }

    #[test]
    fn gauge_transform_identity_and_phase() {
        let data = flat_data();
        let out = gauge_transform(&data, &E::one(), &vec![E::zero(); 5]);
        assert_eq!(out.phi, data.phi);
        // τ = π: phase i, flat data keeps zero residuals.
        let out2 = gauge_transform(&data, &E::i(), &vec![E::zero(); 5]);
        assert_eq!(out2.phi, spinor_scale(&E::i(), &data.phi));
        let (_, res) = dirac_and_twistor(&out2);
        assert_eq!(residual_norm(&res), 0.0);
    }

    #[test]
    fn gauge_covariance_of_residuals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(123);
        let mut data = flat_data();
        for i in 0..5 {
            for p in 0..pair_count(5) {
                data.omega[i][p] = E::from_rational(rng.gen_range(-2i64..=2), 2);
            }
            data.a[i] = E::i() * E::int(rng.gen_range(-2i64..=2));
        }
        // phase (1+i)/√2 with dτ values; residuals must transform by the phase.
        let phase = (E::one() + E::i()) * E::sqrt2().inv().unwrap();
        let dtau: Vec<E> = (0..5).map(|k| E::int(k as i64 - 2)).collect();
        let out = gauge_transform(&data, &phase, &dtau);
        let (_, res_in) = dirac_and_twistor(&data);
        let (_, res_out) = dirac_and_twistor(&out);
        for (a, b) in res_in.iter().zip(&res_out) {
            let scaled = spinor_scale(&phase, a);
            assert_eq!(&scaled, b);
        }
    }

    #[test]
    fn curvature_identities_trivial_data() {
        let mut data = flat_data();
        let n = data.rep.n;
        data.curvature = Some(CurvatureBlock {
            weyl: vec![KForm::zero(2); pair_count(n)],
            schouten: vec![vec![E::zero(); n]; n],
            cotton: vec![KForm::zero(1); pair_count(n)],
            da: KForm::zero(2),
            nabla_da: vec![KForm::zero(2); n],
            scalar_curv: E::zero(),
        });
        assert!(crate::matrix::spinor_is_zero(&laplace_rhs(&data).unwrap()));
        for i in 0..n {
            assert!(crate::matrix::spinor_is_zero(
                &dirac_gradient_rhs(&data, i).unwrap()
            ));
        }
        for i in 0..n {
            for j in 0..n {
                assert!(crate::matrix::spinor_is_zero(
                    &int1_residual(&data, i, j).unwrap()
                ));
                assert!(crate::matrix::spinor_is_zero(
                    &pr2_residual(&data, i, j).unwrap()
                ));
            }
        }
    }

    #[test]
    fn einstein_reduction_of_gradient_rhs() {
        // With dA = 0 the gradient right-hand side is (n/2) K(X)·φ.
        let mut data = flat_data();
        let n = data.rep.n;
        let mut schouten = vec![vec![E::zero(); n]; n];
        for i in 0..n {
            schouten[i][i] = E::from_rational(1, 3);
        }
        data.curvature = Some(CurvatureBlock {
            weyl: vec![KForm::zero(2); pair_count(n)],
            schouten,
            cotton: vec![KForm::zero(1); pair_count(n)],
            da: KForm::zero(2),
            nabla_da: vec![KForm::zero(2); n],
            scalar_curv: E::zero(),
        });
        for i in 0..n {
            let rhs = dirac_gradient_rhs(&data, i).unwrap();
            let kv: Vec<E> = (0..n)
                .map(|k| {
                    E::from_rational(data.rep.epsilon[k] as i64, 1)
                        * data.curvature.as_ref().unwrap().schouten[i][k].clone()
                })
                .collect();
            let expect = spinor_scale(
                &E::from_rational(n as i64, 2),
                &vector_action(&data.rep, &kv, &data.phi),
            );
            assert_eq!(rhs, expect);
        }
    }

    #[test]
    fn int1_antisymmetry_and_diagonal() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut data = flat_data();
        let n = data.rep.n;
        // Random (not Ricci-trace-free) Weyl stand-in is fine for the
        // antisymmetry check; use zero Weyl plus random dA instead.
        let mut da = KForm::zero(2);
        for i in 0..n {
            for j in (i + 1)..n {
                da.add_term(
                    &[i as u8, j as u8],
                    E::i() * E::int(rng.gen_range(-2i64..=2)),
                );
            }
        }
        data.curvature = Some(CurvatureBlock {
            weyl: vec![KForm::zero(2); pair_count(n)],
            schouten: vec![vec![E::zero(); n]; n],
            cotton: vec![KForm::zero(1); pair_count(n)],
            da,
            nabla_da: vec![KForm::zero(2); n],
            scalar_curv: E::zero(),
        });
        for i in 0..n {
            assert!(crate::matrix::spinor_is_zero(
                &int1_residual(&data, i, i).unwrap()
            ));
            for j in 0..n {
                let rij = int1_residual(&data, i, j).unwrap();
                let rji = int1_residual(&data, j, i).unwrap();
                let sum = spinor_add(&rij, &rji);
                assert!(crate::matrix::spinor_is_zero(&sum));
            }
        }
    }

    #[test]
    fn dA_removal_reduces_int1_to_weyl_part() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let mut data = flat_data();
        let n = data.rep.n;
        // A Weyl stand-in built to be exactly Ricci-trace-free is not
        // needed here: the reduction identity is purely structural.
        let mut weyl = Vec::new();
        for _ in 0..pair_count(n) {
            let mut w = KForm::zero(2);
            for i in 0..n {
                for j in (i + 1)..n {
                    w.add_term(&[i as u8, j as u8], E::int(rng.gen_range(-2i64..=2)));
                }
            }
            weyl.push(w);
        }
        data.curvature = Some(CurvatureBlock {
            weyl,
            schouten: vec![vec![E::zero(); n]; n],
            cotton: vec![KForm::zero(1); pair_count(n)],
            da: KForm::zero(2),
            nabla_da: vec![KForm::zero(2); n],
            scalar_curv: E::zero(),
        });
        for i in 0..n {
            for j in 0..n {
                let full = int1_residual(&data, i, j).unwrap();
                let weyl_only = int1_weyl_part(&data, i, j).unwrap();
                assert_eq!(full, weyl_only);
            }
        }
    }

    #[test]
    fn validation_rejects_real_connection_values() {
        let mut data = flat_data();
        data.a[2] = E::one();
        assert!(data.validate(0.0).is_err());
    }
}
