//! The group of truncated formal diffeomorphisms of (ℂⁿ, 0).
//!
//! A `FormalDiffeo` is an n-tuple of series with zero constant term and an
//! invertible linear part. Composition, order-by-order inversion,
//! conjugation, order detection, invariance checks, the averaging
//! linearizer for finite groups and the invariant-hypersurface family all
//! live here.

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;

#[derive(Clone, PartialEq)]
pub struct FormalDiffeo<S: Scalar> {
    components: Vec<TruncatedSeries<S>>,
}

impl<S: Scalar> FormalDiffeo<S> {
    /// Builds a diffeomorphism, validating zero constant terms and an
    /// invertible linear part.
    pub fn new(components: Vec<TruncatedSeries<S>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::BadInput("empty component list".into()));
        }
        for c in &components {
            if c.arity() != n {
                return Err(Error::BadInput(format!(
                    "component arity {} does not match component count {n}",
                    c.arity()
                )));
            }
            if !c.constant_term().is_storage_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
        }
        let d = FormalDiffeo { components };
        if d.linear_part().det().is_zero() {
            return Err(Error::SingularLinearPart);
        }
        Ok(d)
    }

    pub fn identity(n: usize, order: u32) -> Self {
        FormalDiffeo {
            components: (0..n).map(|i| TruncatedSeries::variable(n, order, i)).collect(),
        }
    }

    /// The linear map `x ↦ A x` as a diffeomorphism.
    pub fn linear(a: &Mat<S>, order: u32) -> Result<Self> {
        let n = a.rows();
        assert_eq!(a.cols(), n);
        let components = (0..n)
            .map(|i| {
                let mut s = TruncatedSeries::zero(n, order);
                for j in 0..n {
                    s.set_coeff(MultiIndex::unit(n, j), a.at(i, j).clone());
                }
                s
            })
            .collect();
        Self::new(components)
    }

    pub fn diagonal(eigenvalues: &[S], order: u32) -> Result<Self> {
        let n = eigenvalues.len();
        let a = Mat::from_fn(n, n, |i, j| {
            if i == j {
                eigenvalues[i].clone()
            } else {
                S::zero()
            }
        });
        Self::linear(&a, order)
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u32 {
        self.components.iter().map(|c| c.order()).min().unwrap()
    }

    pub fn components(&self) -> &[TruncatedSeries<S>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &TruncatedSeries<S> {
        &self.components[i]
    }

    /// Degree-1 coefficient matrix.
    pub fn linear_part(&self) -> Mat<S> {
        let n = self.arity();
        Mat::from_fn(n, n, |i, j| {
            self.components[i].coeff(&MultiIndex::unit(n, j))
        })
    }

    /// `self ∘ rhs`, applying `rhs` first.
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity(), rhs.arity(), "arity mismatch in composition");
        FormalDiffeo {
            components: self
                .components
                .iter()
                .map(|c| {
                    c.compose(rhs.components())
                        .expect("composition target has zero constant term by invariant")
                })
                .collect(),
        }
    }

    /// Inverse up to the truncation order, solved by the order-raising
    /// iteration `H ← H - A⁻¹(G∘H - id)`, which gains at least one certified
    /// degree per step.
    pub fn invert(&self) -> Self {
        let n = self.arity();
        let order = self.order();
        let a_inv = self
            .linear_part()
            .inverse()
            .expect("linear part invertible by invariant");
        assert_ne!(
            order,
            crate::series::EXACT_ORDER,
            "inversion needs a finite truncation order"
        );
        let id = Self::identity(n, order);
        let mut h = Self::linear(&a_inv, order).expect("inverse of invertible matrix");
        for _ in 1..order.max(1) {
            let err: Vec<TruncatedSeries<S>> = self
                .compose(&h)
                .components
                .iter()
                .zip(id.components())
                .map(|(c, i)| c.sub(i))
                .collect();
            if err.iter().all(|e| e.is_zero()) {
                break;
            }
            let correction: Vec<TruncatedSeries<S>> = (0..n)
                .map(|i| {
                    let mut acc = TruncatedSeries::zero(n, order);
                    for j in 0..n {
                        acc = acc.add(&err[j].scale(a_inv.at(i, j)));
                    }
                    acc
                })
                .collect();
            h = FormalDiffeo {
                components: h
                    .components
                    .iter()
                    .zip(&correction)
                    .map(|(c, d)| c.sub(d))
                    .collect(),
            };
        }
        h
    }

    /// `h⁻¹ ∘ self ∘ h`.
    pub fn conjugate(&self, h: &Self) -> Self {
        h.invert().compose(self).compose(h)
    }

    pub fn is_identity(&self) -> bool {
        let id = Self::identity(self.arity(), self.order());
        self.components
            .iter()
            .zip(id.components())
            .all(|(c, i)| c.eq_trunc(i))
    }

    /// True when every component is exactly its linear part.
    pub fn is_linear(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.terms().all(|(idx, coeff)| idx.degree() == 1 || coeff.is_zero()))
    }

    /// Evaluates the truncated polynomial representative at a point.
    pub fn eval(&self, point: &[S]) -> Vec<S> {
        self.components.iter().map(|c| c.eval(point)).collect()
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> FormalDiffeo<T> {
        FormalDiffeo {
            components: self.components.iter().map(|c| c.map_coeffs(f)).collect(),
        }
    }

    pub fn eq_trunc(&self, rhs: &Self) -> bool {
        self.arity() == rhs.arity()
            && self
                .components
                .iter()
                .zip(rhs.components())
                .all(|(a, b)| a.eq_trunc(b))
    }
}

impl<S: Scalar> std::fmt::Debug for FormalDiffeo<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FormalDiffeo[")?;
        for c in &self.components {
            writeln!(f, "  {c}")?;
        }
        write!(f, "]")
    }
}

/// Smallest `k <= max_order` with `G^k = id` up to the truncation order;
/// the certificate is formal order up to that degree only.
pub fn element_order<S: Scalar>(g: &FormalDiffeo<S>, max_order: u32) -> Option<u32> {
    let mut power = g.clone();
    for k in 1..=max_order {
        if power.is_identity() {
            return Some(k);
        }
        power = power.compose(g);
    }
    None
}

/// `G^k` by binary exponentiation (`k >= 1`).
pub fn diffeo_power<S: Scalar>(g: &FormalDiffeo<S>, mut k: u64) -> FormalDiffeo<S> {
    assert!(k >= 1);
    let mut acc: Option<FormalDiffeo<S>> = None;
    let mut sq = g.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => sq.clone(),
                Some(a) => a.compose(&sq),
            });
        }
        k >>= 1;
        if k > 0 {
            sq = sq.compose(&sq);
        }
    }
    acc.unwrap()
}

/// A finitely generated subgroup presentation with an optional full element
/// list, as required by the averaging linearizer.
#[derive(Clone, Debug)]
pub struct DiffeoGroupPresentation<S: Scalar> {
    pub generators: Vec<FormalDiffeo<S>>,
    pub claimed_elements: Option<Vec<FormalDiffeo<S>>>,
}

impl<S: Scalar> DiffeoGroupPresentation<S> {
    /// Presentation of the cyclic group `{g, g², …, g^r = id}`; fails when
    /// no power up to `max_order` is the identity.
    pub fn cyclic(g: &FormalDiffeo<S>, max_order: u32) -> Result<Self> {
        let r = element_order(g, max_order).ok_or_else(|| {
            Error::BadInput(format!("generator has no order up to {max_order}"))
        })?;
        let mut elements = Vec::with_capacity(r as usize);
        let mut p = g.clone();
        for _ in 0..r {
            elements.push(p.clone());
            p = p.compose(g);
        }
        Ok(DiffeoGroupPresentation {
            generators: vec![g.clone()],
            claimed_elements: Some(elements),
        })
    }
}

/// Verifies that the claimed element list is closed under composition up to
/// truncation; reports the first violating product.
pub fn check_closed<S: Scalar>(elements: &[FormalDiffeo<S>]) -> Result<()> {
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            let prod = a.compose(b);
            if !elements.iter().any(|e| e.eq_trunc(&prod)) {
                return Err(Error::GroupNotClosed { left: i, right: j });
            }
        }
    }
    Ok(())
}

/// The averaging linearizer of a finite group: from the element list
/// `{G₁, …, G_r}` builds `h` with `dh(0) = I` and
/// `h⁻¹ ∘ G_i ∘ h = (dG_i)₀` up to the truncation order for every element.
///
/// The averaged sum is `h⁻¹(x) = (1/r) Σ_j (dG_j)₀⁻¹ G_j(x)`; the `1/r`
/// normalization replaces the raw `dh(0) = rI`.
pub fn average_linearizer<S: Scalar>(
    group: &DiffeoGroupPresentation<S>,
) -> Result<FormalDiffeo<S>> {
    let elements = group
        .claimed_elements
        .as_ref()
        .ok_or_else(|| Error::BadInput("averaging needs the full element list".into()))?;
    if elements.is_empty() {
        return Err(Error::BadInput("empty element list".into()));
    }
    check_closed(elements)?;
    let r = elements.len() as u32;
    for (k, e) in elements.iter().enumerate() {
        if element_order(e, r).is_none() {
            return Err(Error::OrderExceedsGroup { element: k });
        }
    }
    let n = elements[0].arity();
    let order = elements.iter().map(|e| e.order()).min().unwrap();
    let inv_r = S::from_integer(r as i64)
        .inv()
        .expect("group size is a nonzero integer");
    let mut sum: Vec<TruncatedSeries<S>> =
        (0..n).map(|_| TruncatedSeries::zero(n, order)).collect();
    for e in elements {
        let a_inv = e
            .linear_part()
            .inverse()
            .expect("element linear part invertible");
        for (i, s) in sum.iter_mut().enumerate() {
            for j in 0..n {
                *s = s.add(&e.component(j).scale(a_inv.at(i, j)));
            }
        }
    }
    let h_inv = FormalDiffeo::new(sum.into_iter().map(|s| s.scale(&inv_r)).collect())?;
    Ok(h_inv.invert())
}

/// Residual `f∘G - f`; `G` belongs to the invariance group of `f` exactly
/// when the residual is the zero series (exact backend) or stays within the
/// float tolerance.
pub fn invariance_check<S: Scalar>(
    f: &TruncatedSeries<S>,
    g: &FormalDiffeo<S>,
) -> TruncatedSeries<S> {
    assert_eq!(f.arity(), g.arity(), "arity mismatch");
    f.compose(g.components())
        .expect("diffeo components vanish at the origin")
        .sub(f)
}

/// Builds the invariant family member `f_c = Σ c_i ((h⁻¹)_i)^m`, whose zero
/// set is a `G`-invariant hypersurface.
///
/// Preconditions checked here: `h⁻¹ ∘ G ∘ h` is diagonal linear and each of
/// its eigenvalues has `λ^m = 1`.
pub fn invariant_hypersurface_family<S: Scalar>(
    g: &FormalDiffeo<S>,
    h: &FormalDiffeo<S>,
    m: u32,
    c: &[S],
) -> Result<TruncatedSeries<S>> {
    let n = g.arity();
    if c.len() != n {
        return Err(Error::BadInput(format!(
            "coefficient vector length {} does not match arity {n}",
            c.len()
        )));
    }
    let d = g.conjugate(h);
    if !d.is_linear() {
        return Err(Error::NotDiagonalizable(
            "conjugated map is not linear up to truncation".into(),
        ));
    }
    let lp = d.linear_part();
    for i in 0..n {
        for j in 0..n {
            if i != j && !lp.at(i, j).is_zero() {
                return Err(Error::NotDiagonalizable(
                    "conjugated linear part is not diagonal".into(),
                ));
            }
        }
    }
    for i in 0..n {
        let mut p = S::one();
        for _ in 0..m {
            p = p.mul(lp.at(i, i));
        }
        if !p.sub(&S::one()).is_zero() {
            return Err(Error::NotDiagonalizable(format!(
                "eigenvalue {i} fails the m-th power identity (m = {m})"
            )));
        }
    }
    let h_inv = h.invert();
    let mut f = TruncatedSeries::zero(n, h.order().min(g.order()));
    for i in 0..n {
        f = f.add(&h_inv.component(i).pow(m).scale(&c[i]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::Rat;
    use crate::scalar::GaussRat;

    type TS = TruncatedSeries<GaussRat>;

    fn int(n: i64) -> GaussRat {
        GaussRat::from_integer(n)
    }

    fn x(order: u32) -> TS {
        TS::variable(1, order, 0)
    }

    /// φ(x) = x + x² in one variable.
    fn phi(order: u32) -> FormalDiffeo<GaussRat> {
        FormalDiffeo::new(vec![x(order).add(&x(order).pow(2))]).unwrap()
    }

    #[test]
    fn invert_linear() {
        let g = FormalDiffeo::new(vec![x(6).scale(&int(2))]).unwrap();
        let inv = g.invert();
        let expected = x(6).scale(&GaussRat::real(Rat::new(1, 2)));
        assert!(inv.component(0).eq_trunc(&expected));
    }

    #[test]
    fn invert_order_by_order() {
        // (x + x²)⁻¹ = x - x² + 2x³ - 5x⁴ + O(5).
        let g = phi(4);
        let inv = g.invert();
        let expected = x(4)
            .sub(&x(4).pow(2))
            .add(&x(4).pow(3).scale(&int(2)))
            .sub(&x(4).pow(4).scale(&int(5)));
        assert!(inv.component(0).eq_trunc(&expected), "got {:?}", inv);
        assert!(g.compose(&inv).is_identity());
        assert!(inv.compose(&g).is_identity());
    }

    #[test]
    fn conjugate_by_identity() {
        let neg = FormalDiffeo::new(vec![x(6).neg()]).unwrap();
        let conj = neg.conjugate(&FormalDiffeo::identity(1, 6));
        assert!(conj.eq_trunc(&neg));
    }

    #[test]
    fn orders() {
        let rot = FormalDiffeo::new(vec![x(6).scale(&GaussRat::i())]).unwrap();
        assert_eq!(element_order(&rot, 10), Some(4));
        assert_eq!(element_order(&phi(6), 24), None);
        // Conjugation preserves order.
        let neg = FormalDiffeo::new(vec![x(8).neg()]).unwrap();
        let conj = neg.conjugate(&phi(8));
        assert_eq!(element_order(&conj, 10), Some(2));
        assert!(conj.compose(&conj).is_identity());
    }

    #[test]
    fn rejects_bad_diffeos() {
        assert!(matches!(
            FormalDiffeo::new(vec![TS::one(1, 4)]),
            Err(Error::NonzeroConstantTerm)
        ));
        assert!(matches!(
            FormalDiffeo::new(vec![x(4).pow(2)]),
            Err(Error::SingularLinearPart)
        ));
    }

    #[test]
    fn averaging_identity_group() {
        let id = FormalDiffeo::<GaussRat>::identity(1, 6);
        let group = DiffeoGroupPresentation {
            generators: vec![id.clone()],
            claimed_elements: Some(vec![id]),
        };
        let h = average_linearizer(&group).unwrap();
        assert!(h.is_identity());
    }

    #[test]
    fn averaging_linear_group_is_fixed() {
        let neg = FormalDiffeo::new(vec![x(6).neg()]).unwrap();
        let group = DiffeoGroupPresentation::cyclic(&neg, 4).unwrap();
        let h = average_linearizer(&group).unwrap();
        assert!(h.is_identity());
    }

    #[test]
    fn averaging_linearizes_conjugated_involution() {
        // G = φ ∘ (-x) ∘ φ⁻¹ has order 2; the averaged h must conjugate it
        // back to its linear part -x at N = 8.
        let p = phi(8);
        let neg = FormalDiffeo::new(vec![x(8).neg()]).unwrap();
        let g = p.compose(&neg).compose(&p.invert());
        assert_eq!(element_order(&g, 4), Some(2));
        let group = DiffeoGroupPresentation::cyclic(&g, 4).unwrap();
        let h = average_linearizer(&group).unwrap();
        // dh(0) = identity normalization.
        assert_eq!(h.linear_part(), Mat::identity(1));
        let linearized = g.conjugate(&h);
        assert!(linearized.eq_trunc(&neg), "got {:?}", linearized);
    }

    #[test]
    fn closure_violation_reported() {
        let rot = FormalDiffeo::new(vec![x(6).scale(&GaussRat::i())]).unwrap();
        let id = FormalDiffeo::identity(1, 6);
        let group = DiffeoGroupPresentation {
            generators: vec![rot.clone()],
            claimed_elements: Some(vec![rot, id]),
        };
        assert!(matches!(
            average_linearizer(&group),
            Err(Error::GroupNotClosed { .. })
        ));
    }

    #[test]
    fn invariance_examples() {
        // f = x1 x2 under (2x1, x2/2).
        let f = TS::monomial(2, 8, MultiIndex::new(vec![1, 1]), int(1));
        let g = FormalDiffeo::diagonal(
            &[int(2), GaussRat::real(Rat::new(1, 2))],
            8,
        )
        .unwrap();
        assert!(invariance_check(&f, &g).is_zero());

        // Parity: x² invariant under -x, x³ is not.
        let neg = FormalDiffeo::new(vec![x(8).neg()]).unwrap();
        assert!(invariance_check(&x(8).pow(2), &neg).is_zero());
        let res = invariance_check(&x(8).pow(3), &neg);
        assert!(res.eq_trunc(&x(8).pow(3).scale(&int(-2))));

        // Invariance group is a group: G in H(f) implies G⁻¹ and G² in H(f).
        assert!(invariance_check(&f, &g.invert()).is_zero());
        assert!(invariance_check(&f, &g.compose(&g)).is_zero());
    }

    #[test]
    fn hypersurface_family_diag() {
        // G = diag(i, -1), h = id, m = 4, c = (1, 1) -> x1⁴ + x2⁴.
        let g = FormalDiffeo::diagonal(&[GaussRat::i(), int(-1)], 8).unwrap();
        let h = FormalDiffeo::identity(2, 8);
        let f = invariant_hypersurface_family(&g, &h, 4, &[int(1), int(1)]).unwrap();
        let expected = TS::from_terms(
            2,
            8,
            [
                (MultiIndex::new(vec![4, 0]), int(1)),
                (MultiIndex::new(vec![0, 4]), int(1)),
            ],
        );
        assert!(f.eq_trunc(&expected));
        assert!(invariance_check(&f, &g).is_zero());
    }

    #[test]
    fn hypersurface_family_conjugated() {
        // G conjugated from diag(i, -1) by φ = (x1 + x2², x2), m = 4: the
        // family member must still be G-invariant at N = 8.
        let n = 2;
        let x1 = TS::variable(n, 8, 0);
        let x2 = TS::variable(n, 8, 1);
        let h = FormalDiffeo::new(vec![x1.add(&x2.pow(2)), x2.clone()]).unwrap();
        let d = FormalDiffeo::diagonal(&[GaussRat::i(), int(-1)], 8).unwrap();
        let g = h.compose(&d).compose(&h.invert());
        let f = invariant_hypersurface_family(&g, &h, 4, &[int(1), int(3)]).unwrap();
        assert!(invariance_check(&f, &g).is_zero());

        // Wrong m fails the precondition.
        assert!(invariant_hypersurface_family(&g, &h, 3, &[int(1), int(1)]).is_err());
    }

    #[test]
    fn power_by_squaring() {
        let rot = FormalDiffeo::new(vec![x(6).scale(&GaussRat::i())]).unwrap();
        assert!(diffeo_power(&rot, 4).is_identity());
        assert!(!diffeo_power(&rot, 6).is_identity());
        assert!(diffeo_power(&rot, 24).is_identity());
    }
}
