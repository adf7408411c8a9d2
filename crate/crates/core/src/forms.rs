//! Real k-form algebra in a fixed pseudo-orthonormal frame, and the action
//! of forms on spinors through the Clifford algebra.
//!
//! Forms are stored sparsely as maps from strictly increasing index tuples
//! to coefficients. All operations are frame-relative; the metric enters
//! through the signature signs ε_i carried by the representation.

use crate::clifford::CliffordRep;
use crate::error::CcksError;
use crate::matrix::{CMatrix, Spinor};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse k-form: coefficients on e_{i₁}♭ ∧ … ∧ e_{i_k}♭ with i₁ < … < i_k.
/// Indices are 0-based frame labels.
#[derive(Clone, PartialEq, Debug)]
pub struct KForm<T: Scalar> {
    pub degree: usize,
    pub coeffs: BTreeMap<Vec<u8>, T>,
}

/// Sort an index tuple, returning the permutation sign, or `None` when an
/// index repeats.
fn sort_with_sign(indices: &[u8]) -> Option<(Vec<u8>, i8)> {
    let mut v = indices.to_vec();
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

impl<T: Scalar> KForm<T> {
    pub fn zero(degree: usize) -> Self {
        KForm {
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Single basis monomial, indices in any order (sign handled).
    pub fn monomial(indices: &[u8], coeff: T) -> Self {
        let mut f = KForm::zero(indices.len());
        f.add_term(indices, coeff);
        f
    }

    pub fn add_term(&mut self, indices: &[u8], coeff: T) {
        assert_eq!(indices.len(), self.degree, "degree mismatch in add_term");
        if coeff.is_zero() {
            return;
        }
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return; // repeated index: term vanishes
        };
        let signed = if sign < 0 { -coeff } else { coeff };
        let entry = self.coeffs.entry(sorted).or_insert_with(T::zero);
        *entry = entry.clone() + signed;
        if entry.is_zero() {
            let key: Vec<u8> = {
                let Some((s, _)) = sort_with_sign(indices) else { unreachable!() };
                s
            };
            self.coeffs.remove(&key);
        }
    }

    pub fn coeff(&self, indices: &[u8]) -> T {
        let Some((sorted, sign)) = sort_with_sign(indices) else {
            return T::zero();
        };
        match self.coeffs.get(&sorted) {
            Some(c) if sign > 0 => c.clone(),
            Some(c) => -c.clone(),
            None => T::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &T) -> Self {
        KForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.clone() * s.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "degree mismatch in add");
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            let entry = out.coeffs.entry(k.clone()).or_insert_with(T::zero);
            *entry = entry.clone() + v.clone();
        }
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn norm_f64(&self) -> f64 {
        self.coeffs
            .values()
            .map(|c| c.norm_f64().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Value on a frame tuple: β(s_{j₁},…,s_{j_k}) = coeff · ∏ε over the
    /// tuple, since e_i♭(s_j) = ε_i δ_ij.
    pub fn value_on_frame(&self, indices: &[u8], epsilon: &[i8]) -> T {
        let c = self.coeff(indices);
        if c.is_zero() {
            return c;
        }
        let mut sign = 1i64;
        for &i in indices {
            sign *= epsilon[i as usize] as i64;
        }
        c * T::from_rational(sign, 1)
    }

    /// Build a form of the given degree from its values on increasing frame
    /// tuples: coefficient on e_I♭ is ∏_{i∈I} ε_i times the value.
    pub fn from_frame_values(
        degree: usize,
        values: impl IntoIterator<Item = (Vec<u8>, T)>,
        epsilon: &[i8],
    ) -> Self {
        let mut f = KForm::zero(degree);
        for (idx, v) in values {
            let mut sign = 1i64;
            for &i in &idx {
                sign *= epsilon[i as usize] as i64;
            }
            f.add_term(&idx, v * T::from_rational(sign, 1));
        }
        f
    }
}

/// Wedge product with standard antisymmetrization signs.
pub fn wedge<T: Scalar>(a: &KForm<T>, b: &KForm<T>, n: usize) -> Result<KForm<T>, CcksError> {
    if a.degree + b.degree > n {
        return Err(CcksError::usage(format!(
            "wedge degree {} + {} exceeds frame dimension {}",
            a.degree, b.degree, n
        )));
    }
    let mut out = KForm::zero(a.degree + b.degree);
    for (ia, ca) in &a.coeffs {
        for (ib, cb) in &b.coeffs {
            let mut idx = ia.clone();
            idx.extend_from_slice(ib);
            out.add_term(&idx, ca.clone() * cb.clone());
        }
    }
    Ok(out)
}

/// Interior product `s_i ⨼ a` with the metric signs of the frame:
/// `e_i ⨼ e_i♭ = ε_i`.
pub fn contract<T: Scalar>(
    index: usize,
    a: &KForm<T>,
    epsilon: &[i8],
) -> Result<KForm<T>, CcksError> {
    if a.degree == 0 {
        return Err(CcksError::usage("cannot contract a 0-form"));
    }
    let eps = T::from_rational(epsilon[index] as i64, 1);
    let mut out = KForm::zero(a.degree - 1);
    for (idx, c) in &a.coeffs {
        if let Some(pos) = idx.iter().position(|&j| j as usize == index) {
            let mut rest = idx.clone();
            rest.remove(pos);
            let sign = if pos % 2 == 0 { T::one() } else { -T::one() };
            out.add_term(&rest, c.clone() * eps.clone() * sign);
        }
    }
    Ok(out)
}

/// Clifford action of a form: each increasing monomial e_{i₁}♭∧…∧e_{i_k}♭
/// acts as the product Φ(e_{i₁})⋯Φ(e_{i_k}).
pub fn clifford_action<T: Scalar>(rep: &CliffordRep<T>, a: &KForm<T>, s: &Spinor<T>) -> Spinor<T> {
    let mut out = vec![T::zero(); s.len()];
    for (idx, c) in &a.coeffs {
        if c.is_zero() {
            continue;
        }
        let mut v = s.clone();
        for &i in idx.iter().rev() {
            v = rep.generators[i as usize].apply(&v);
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + c.clone() * x;
        }
    }
    out
}

/// Matrix of the Clifford action of a form.
pub fn clifford_action_matrix<T: Scalar>(rep: &CliffordRep<T>, a: &KForm<T>) -> CMatrix<T> {
    let dim = rep.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for (idx, c) in &a.coeffs {
        if c.is_zero() {
            continue;
        }
        let mut prod = CMatrix::<T>::identity(dim);
        for &i in idx {
            prod = &prod * &rep.generators[i as usize];
        }
        m = &m + &prod.scale(c);
    }
    m
}

/// Metric pairing of equal-degree forms:
/// ⟨e_I♭, e_J♭⟩ = δ_IJ · ∏_{i∈I} ε_i.
pub fn pairing<T: Scalar>(a: &KForm<T>, b: &KForm<T>, epsilon: &[i8]) -> Result<T, CcksError> {
    if a.degree != b.degree {
        return Err(CcksError::usage("pairing requires equal degrees"));
    }
    let mut acc = T::zero();
    for (idx, ca) in &a.coeffs {
        if let Some(cb) = b.coeffs.get(idx) {
            let mut sign = 1i64;
            for &i in idx {
                sign *= epsilon[i as usize] as i64;
            }
            acc = acc + ca.clone() * cb.clone() * T::from_rational(sign, 1);
        }
    }
    Ok(acc)
}

/// Clifford action of a frame vector v = Σ v^i s_i (components, not ♭).
pub fn vector_action<T: Scalar>(rep: &CliffordRep<T>, v: &[T], s: &Spinor<T>) -> Spinor<T> {
    let mut out = vec![T::zero(); s.len()];
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let gs = rep.generators[i].apply(s);
        for (o, x) in out.iter_mut().zip(gs) {
            *o = o.clone() + vi.clone() * x;
        }
    }
    out
}

/// Flat of a frame vector: with e_i♭ = ⟨e_i,·⟩, the 1-form of v = Σ v^i s_i
/// is Σ v^i e_i♭ (the signs live inside e_i♭).
pub fn vector_flat<T: Scalar>(v: &[T]) -> KForm<T> {
    let mut f = KForm::zero(1);
    for (i, vi) in v.iter().enumerate() {
        f.add_term(&[i as u8], vi.clone());
    }
    f
}

/// The vector α♯ of a 1-form α = Σ a_i e_i♭: components v^i = a_i.
pub fn one_form_sharp<T: Scalar>(a: &KForm<T>, n: usize) -> Vec<T> {
    assert_eq!(a.degree, 1);
    let mut v = vec![T::zero(); n];
    for (idx, c) in &a.coeffs {
        v[idx[0] as usize] = c.clone();
    }
    v
}

/// Interior product X ⨼ a for a general frame vector X = Σ v^i s_i.
pub fn contract_vector<T: Scalar>(
    v: &[T],
    a: &KForm<T>,
    epsilon: &[i8],
) -> Result<KForm<T>, CcksError> {
    let mut out = KForm::zero(a.degree.saturating_sub(1));
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let c = contract(i, a, epsilon)?;
        out = out.add(&c.scale(vi));
    }
    Ok(out)
}

/// Infinitesimal so-action of an n×n matrix S on a k-form:
/// (S·α)(v₁,…,v_k) = −Σ_a α(v₁,…,S v_a,…,v_k), expressed on frame values.
pub fn so_action_on_form<T: Scalar>(
    s: &CMatrix<T>,
    a: &KForm<T>,
    epsilon: &[i8],
) -> KForm<T> {
    let n = s.rows;
    let k = a.degree;
    if k == 0 {
        return KForm::zero(0);
    }
    // Work on frame values: value'(J) = −Σ_a Σ_l S^l_{j_a} value(j₁…l…j_k).
    let mut values: Vec<(Vec<u8>, T)> = Vec::new();
    let mut tuple = vec![0u8; k];
    fn rec<T: Scalar>(
        tuple: &mut Vec<u8>,
        pos: usize,
        start: usize,
        n: usize,
        s: &CMatrix<T>,
        a: &KForm<T>,
        epsilon: &[i8],
        values: &mut Vec<(Vec<u8>, T)>,
    ) {
        if pos == tuple.len() {
            let mut acc = T::zero();
            for a_pos in 0..tuple.len() {
                for l in 0..n {
                    let coeff = s.at(l, tuple[a_pos] as usize); // (S v_{j})^l = S^l_j
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut modified = tuple.clone();
                    modified[a_pos] = l as u8;
                    let val = a.value_on_frame(&modified, epsilon);
                    acc = acc - coeff.clone() * val;
                }
            }
            if !acc.is_zero() {
                values.push((tuple.clone(), acc));
            }
            return;
        }
        for j in start..n {
            tuple[pos] = j as u8;
            rec(tuple, pos + 1, j + 1, n, s, a, epsilon, values);
        }
    }
    rec(&mut tuple, 0, 0, n, s, a, epsilon, &mut values);
    KForm::from_frame_values(k, values, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_rep;
    use crate::scalar::ExactScalar;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type E = ExactScalar;

    fn e(n: i64) -> E {
        E::int(n)
    }

    fn random_form(rng: &mut ChaCha8Rng, degree: usize, n: usize) -> KForm<E> {
        let mut f = KForm::zero(degree);
        for _ in 0..4 {
            let mut idx: Vec<u8> = Vec::new();
            while idx.len() < degree {
                let c = rng.gen_range(0..n) as u8;
                if !idx.contains(&c) {
                    idx.push(c);
                }
            }
            f.add_term(&idx, e(rng.gen_range(-3..=3)));
        }
        f
    }

    #[test]
    fn wedge_basis() {
        let a = KForm::monomial(&[0], e(1));
        let b = KForm::monomial(&[1], e(1));
        let w = wedge(&a, &b, 4).unwrap();
        assert_eq!(w.coeff(&[0, 1]), e(1));
    }

    #[test]
    fn wedge_one_form_with_itself_vanishes() {
        let mut a = KForm::zero(1);
        a.add_term(&[0], e(2));
        a.add_term(&[2], e(-5));
        let w = wedge(&a, &a, 5).unwrap();
        assert!(w.is_zero());
    }

    #[test]
    fn wedge_bilinearity_example() {
        // (e₁♭+e₂♭) ∧ (e₁♭−e₂♭) = −2 e₁♭∧e₂♭, expanded by hand.
        let mut a = KForm::zero(1);
        a.add_term(&[0], e(1));
        a.add_term(&[1], e(1));
        let mut b = KForm::zero(1);
        b.add_term(&[0], e(1));
        b.add_term(&[1], e(-1));
        let w = wedge(&a, &b, 4).unwrap();
        assert_eq!(w.coeff(&[0, 1]), e(-2));
        assert_eq!(w.coeffs.len(), 1);
    }

    #[test]
    fn wedge_degree_overflow_is_error() {
        let a = KForm::<E>::monomial(&[0, 1], e(1));
        let b = KForm::<E>::monomial(&[2], e(1));
        assert!(wedge(&a, &b, 2).is_err());
    }

    #[test]
    fn contraction_with_signs() {
        let eps = [-1i8, 1, 1];
        let w = KForm::monomial(&[0, 1], e(1));
        let c = contract(0, &w, &eps).unwrap();
        assert_eq!(c.coeff(&[1]), e(-1)); // ε₀ = −1
        let c2 = contract(2, &w, &eps).unwrap();
        assert!(c2.is_zero());
        assert!(contract(0, &KForm::<E>::zero(0), &eps).is_err());
    }

    #[test]
    fn cartan_expansion_random() {
        // X ⨼ (a∧b) = (X⨼a)∧b + (−1)^deg a · a∧(X⨼b)
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 5;
        let eps = [1i8; 5];
        for _ in 0..40 {
            let da = rng.gen_range(1..=2);
            let db = rng.gen_range(1..=2);
            let a = random_form(&mut rng, da, n);
            let b = random_form(&mut rng, db, n);
            let x = rng.gen_range(0..n);
            let lhs = contract(x, &wedge(&a, &b, n).unwrap(), &eps).unwrap();
            let t1 = wedge(&contract(x, &a, &eps).unwrap(), &b, n).unwrap();
            let sign = if da % 2 == 0 { e(1) } else { e(-1) };
            let t2 = wedge(&a, &contract(x, &b, &eps).unwrap(), n)
                .unwrap()
                .scale(&sign);
            assert_eq!(lhs, t1.add(&t2));
        }
    }

    #[test]
    fn wedge_associative_graded_commutative() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 6;
        for _ in 0..25 {
            let da = rng.gen_range(1..=2);
            let db = rng.gen_range(1..=2);
            let dc = rng.gen_range(1..=2);
            if da + db + dc > n {
                continue;
            }
            let a = random_form(&mut rng, da, n);
            let b = random_form(&mut rng, db, n);
            let c = random_form(&mut rng, dc, n);
            let left = wedge(&wedge(&a, &b, n).unwrap(), &c, n).unwrap();
            let right = wedge(&a, &wedge(&b, &c, n).unwrap(), n).unwrap();
            assert_eq!(left, right);
            // graded commutativity
            let ab = wedge(&a, &b, n).unwrap();
            let ba = wedge(&b, &a, n).unwrap();
            let sign = if (da * db) % 2 == 0 { e(1) } else { e(-1) };
            assert_eq!(ab, ba.scale(&sign));
        }
    }

    #[test]
    fn clifford_identities_operator_level() {
        // X·ω = X♭∧ω − X⨼ω and ω·X = (−1)^k (X♭∧ω + X⨼ω) as matrices,
        // for every generator and random forms in a few signatures.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for &(p, q) in &[(1usize, 4usize), (0, 5), (2, 2), (3, 2)] {
            let rep = build_rep::<E>(p, q).unwrap();
            let n = rep.n;
            for _ in 0..8 {
                let k = rng.gen_range(1..=3);
                let w = random_form(&mut rng, k, n);
                for x in 0..n {
                    let xf = KForm::monomial(&[x as u8], e(1));
                    let xw = &rep.generators[x] * &clifford_action_matrix(&rep, &w);
                    let wx = &clifford_action_matrix(&rep, &w) * &rep.generators[x];
                    let wedge_part =
                        clifford_action_matrix(&rep, &wedge(&xf, &w, n).unwrap());
                    let contr_part =
                        clifford_action_matrix(&rep, &contract(x, &w, &rep.epsilon).unwrap());
                    assert_eq!(xw, &wedge_part - &contr_part, "first identity ({p},{q})");
                    let sign = if k % 2 == 0 { e(1) } else { e(-1) };
                    let rhs = (&wedge_part + &contr_part).scale(&sign);
                    assert_eq!(wx, rhs, "second identity ({p},{q})");
                }
            }
        }
    }

    #[test]
    fn action_respects_disjoint_products() {
        let rep = build_rep::<E>(1, 3).unwrap();
        let a = KForm::monomial(&[0, 1], e(1));
        let b = KForm::monomial(&[2, 3], e(1));
        let ab = wedge(&a, &b, 4).unwrap();
        let ma = clifford_action_matrix(&rep, &a);
        let mb = clifford_action_matrix(&rep, &b);
        assert_eq!(clifford_action_matrix(&rep, &ab), &ma * &mb);
    }

    #[test]
    fn pairing_signature() {
        let eps = [-1i8, 1, 1, 1, 1];
        let a = KForm::monomial(&[0], e(1));
        assert_eq!(pairing(&a, &a, &eps).unwrap(), e(-1));
        let b = KForm::monomial(&[1, 2], e(1));
        assert_eq!(pairing(&b, &b, &eps).unwrap(), e(1));
        assert!(pairing(&a, &b, &eps).is_err());
    }

    #[test]
    fn pairing_positive_definite_riemannian() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let eps = [1i8; 5];
        for _ in 0..20 {
            let f = random_form(&mut rng, 2, 5);
            let p = pairing(&f, &f, &eps).unwrap();
            // Gram matrix of the monomial basis is the identity here, so
            // ⟨f,f⟩ is a sum of squared coefficients.
            let direct: E = f
                .coeffs
                .values()
                .fold(E::zero(), |acc, c| acc + c.clone() * c.clone());
            assert_eq!(p, direct);
            assert!(p.norm_f64() >= 0.0);
        }
    }

    #[test]
    fn zero_form_action_is_zero() {
        let rep = build_rep::<E>(0, 2).unwrap();
        let z = KForm::<E>::zero(2);
        let s = vec![e(1), e(2)];
        assert!(crate::matrix::spinor_is_zero(&clifford_action(&rep, &z, &s)));
    }
}
