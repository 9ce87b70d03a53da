//! Polynomial and truncated vector fields: Lie derivatives, cofactors, the
//! generic normal form, first-integral verification, pullback invariance,
//! the radial-field construction and the infinitesimal-symmetry solver.

use crate::diffeo::FormalDiffeo;
use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linalg::Mat;
use crate::rat::Rat;
use crate::resonance::{eigen_ratio, star_condition, EigenTuple, PolarRational};
use crate::scalar::{GaussRat, Scalar};
use crate::series::{det_series, jacobian, TruncatedSeries};

/// A vector field `Σ a_i ∂/∂x_i` with series components.
#[derive(Clone, PartialEq)]
pub struct PolyVectorField<S: Scalar> {
    components: Vec<TruncatedSeries<S>>,
}

impl<S: Scalar> PolyVectorField<S> {
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
        }
        Ok(PolyVectorField { components })
    }

    /// The radial field `Σ x_i ∂/∂x_i`.
    pub fn radial(n: usize, order: u32) -> Self {
        PolyVectorField {
            components: (0..n)
                .map(|i| TruncatedSeries::variable(n, order, i))
                .collect(),
        }
    }

    /// Diagonal linear field `Σ λ_i x_i ∂/∂x_i`.
    pub fn diagonal(eigenvalues: &[S], order: u32) -> Self {
        let n = eigenvalues.len();
        PolyVectorField {
            components: (0..n)
                .map(|i| {
                    TruncatedSeries::monomial(
                        n,
                        order,
                        MultiIndex::unit(n, i),
                        eigenvalues[i].clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[TruncatedSeries<S>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &TruncatedSeries<S> {
        &self.components[i]
    }

    pub fn truncation(&self) -> u32 {
        self.components.iter().map(|c| c.order()).min().unwrap()
    }

    /// The order ν: minimal valuation across components; `None` for the
    /// zero field.
    pub fn order(&self) -> Option<u32> {
        self.components.iter().filter_map(|c| c.lowest_degree()).min()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn is_zero_backend(&self) -> bool {
        self.components.iter().all(|c| c.is_zero_backend())
    }

    pub fn singular_at_origin(&self) -> bool {
        self.order().map_or(true, |nu| nu >= 1)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.max_coeff_norm())
            .fold(0.0, f64::max)
    }

    /// Every component homogeneous of the same degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degree = None;
        for c in &self.components {
            if c.is_zero() {
                continue;
            }
            if !c.is_homogeneous() {
                return false;
            }
            let d = c.degree().unwrap();
            match degree {
                None => degree = Some(d),
                Some(prev) if prev != d => return false,
                _ => {}
            }
        }
        true
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity(), rhs.arity());
        PolyVectorField {
            components: self
                .components
                .iter()
                .zip(rhs.components())
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity(), rhs.arity());
        PolyVectorField {
            components: self
                .components
                .iter()
                .zip(rhs.components())
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    /// Homogeneous part of degree `d`, componentwise.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        PolyVectorField {
            components: self.components.iter().map(|c| c.homogeneous_part(d)).collect(),
        }
    }

    /// Lie derivative `X(f) = Σ a_i ∂f/∂x_i`. The certificate follows the
    /// series rules: with components of valuation ν and `f` certified to N,
    /// the result is certified to at least N - 1 + ν.
    pub fn lie_derivative(&self, f: &TruncatedSeries<S>) -> TruncatedSeries<S> {
        assert_eq!(f.arity(), self.arity(), "arity mismatch");
        let mut acc: Option<TruncatedSeries<S>> = None;
        for (i, a) in self.components.iter().enumerate() {
            let term = a.mul(&f.derive(i).expect("index in range"));
            acc = Some(match acc {
                None => term,
                Some(s) => s.add(&term),
            });
        }
        acc.unwrap()
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> PolyVectorField<T> {
        PolyVectorField {
            components: self.components.iter().map(|c| c.map_coeffs(f)).collect(),
        }
    }
}

impl<S: Scalar> std::fmt::Debug for PolyVectorField<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "PolyVectorField[")?;
        for (i, c) in self.components.iter().enumerate() {
            writeln!(f, "  ∂x{}: {c}", i + 1)?;
        }
        write!(f, "]")
    }
}

/// Exact single-divisor division: `K` with `X(g) = g·K`, or `None` when `g`
/// does not divide its Lie derivative. Graded-lex reduction against the one
/// divisor; a stuck leading term certifies non-divisibility.
pub fn cofactor<S: Scalar>(
    x: &PolyVectorField<S>,
    g: &TruncatedSeries<S>,
) -> Option<TruncatedSeries<S>> {
    assert!(!g.is_zero(), "cofactor of the zero polynomial");
    let image = x.lie_derivative(g);
    divide_exact(&image, g)
}

/// Polynomial division by a single divisor; `Some(q)` iff `num = q·den`.
pub fn divide_exact<S: Scalar>(
    num: &TruncatedSeries<S>,
    den: &TruncatedSeries<S>,
) -> Option<TruncatedSeries<S>> {
    let (lead_idx, lead_coeff) = den.leading_term()?;
    let lead_idx = lead_idx.clone();
    let lead_inv = lead_coeff.inv()?;
    let mut rem = num.clone();
    let mut quot = TruncatedSeries::zero(num.arity(), num.order());
    loop {
        let Some((r_idx, r_coeff)) = rem.leading_term().map(|(i, c)| (i.clone(), c.clone()))
        else {
            break;
        };
        let shift = r_idx.checked_sub(&lead_idx)?;
        let factor = r_coeff.mul(&lead_inv);
        quot.set_coeff(shift.clone(), factor.clone());
        let piece = den
            .scale(&factor)
            .mul(&TruncatedSeries::monomial(
                num.arity(),
                crate::series::EXACT_ORDER,
                shift,
                S::one(),
            ))
            .truncate(rem.order());
        rem = rem.sub(&piece);
        // The leading term must cancel exactly; for the float backend a
        // nonzero remainder within tolerance is swept below.
        debug_assert!(rem.coeff(&r_idx).is_zero());
        if !S::EXACT && rem.coeff(&r_idx).is_zero() {
            let mut cleaned = rem.clone();
            cleaned.set_coeff(r_idx, S::zero());
            rem = cleaned;
        }
    }
    if rem.is_zero() {
        Some(quot)
    } else {
        None
    }
}

/// Formal first-integral candidate `F = (f₁, …, f_{n-1})`.
#[derive(Clone, Debug)]
pub struct FirstIntegralCandidate<S: Scalar> {
    pub maps: Vec<TruncatedSeries<S>>,
}

impl<S: Scalar> FirstIntegralCandidate<S> {
    pub fn new(maps: Vec<TruncatedSeries<S>>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::BadInput("empty first-integral candidate".into()));
        }
        let arity = maps[0].arity();
        if maps.iter().any(|m| m.arity() != arity) {
            return Err(Error::BadInput("mixed arities in candidate".into()));
        }
        if maps.len() + 1 != arity {
            return Err(Error::BadInput(format!(
                "candidate needs {} maps for arity {arity}",
                arity - 1
            )));
        }
        Ok(FirstIntegralCandidate { maps })
    }

    pub fn arity(&self) -> usize {
        self.maps[0].arity()
    }
}

/// Verdict of `first_integral_check`.
#[derive(Clone, Debug)]
pub struct FirstIntegralVerdict<S: Scalar> {
    /// Lie derivatives `X(f_i)`, certified per the series rules.
    pub residuals: Vec<TruncatedSeries<S>>,
    pub residuals_zero: bool,
    /// Some `(n-1)×(n-1)` Jacobian minor is not identically zero.
    pub wedge_nonzero: bool,
    /// Dropped-column index of the first nonzero minor, in column order.
    pub witness_minor: Option<usize>,
}

/// Checks `X(f_i) ≡ 0` for all candidate maps and the generic independence
/// of their differentials via the Jacobian minors.
pub fn first_integral_check<S: Scalar>(
    x: &PolyVectorField<S>,
    f: &FirstIntegralCandidate<S>,
) -> FirstIntegralVerdict<S> {
    assert_eq!(x.arity(), f.arity(), "arity mismatch");
    let residuals: Vec<TruncatedSeries<S>> =
        f.maps.iter().map(|m| x.lie_derivative(m)).collect();
    let residuals_zero = residuals.iter().all(|r| r.is_zero_backend());
    let jac = jacobian(&f.maps).expect("candidate derivatives");
    let n = x.arity();
    let mut witness_minor = None;
    for dropped in 0..n {
        let sub: Vec<Vec<TruncatedSeries<S>>> = jac
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != dropped)
                    .map(|(_, s)| s.clone())
                    .collect()
            })
            .collect();
        if !det_series(&sub).is_zero_backend() {
            witness_minor = Some(dropped);
            break;
        }
    }
    FirstIntegralVerdict {
        residuals,
        residuals_zero,
        wedge_nonzero: witness_minor.is_some(),
        witness_minor,
    }
}

/// Inverse of a square series matrix with invertible constant part, via the
/// adjugate over the inverted determinant.
fn invert_series_matrix<S: Scalar>(
    m: &[Vec<TruncatedSeries<S>>],
) -> Result<Vec<Vec<TruncatedSeries<S>>>> {
    let n = m.len();
    let det = det_series(m);
    let det_inv = det.inverse()?;
    let minor = |skip_r: usize, skip_c: usize| -> TruncatedSeries<S> {
        if n == 1 {
            return TruncatedSeries::one(m[0][0].arity(), m[0][0].order());
        }
        let sub: Vec<Vec<TruncatedSeries<S>>> = (0..n)
            .filter(|&r| r != skip_r)
            .map(|r| {
                (0..n)
                    .filter(|&c| c != skip_c)
                    .map(|c| m[r][c].clone())
                    .collect()
            })
            .collect();
        det_series(&sub)
    };
    let mut inv = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            // adj(M)[i][j] = (-1)^{i+j} · minor(j, i)
            let mut c = minor(j, i).mul(&det_inv);
            if (i + j) % 2 == 1 {
                c = c.neg();
            }
            row.push(c);
        }
        inv.push(row);
    }
    Ok(inv)
}

/// The radial-field construction `X = (dH)⁻¹·H`: its linear part is the
/// identity, and it is invariant under every diffeomorphism of the shape
/// `H⁻¹∘A∘H` with linear `A`.
pub fn radial_field_from_map<S: Scalar>(h: &FormalDiffeo<S>) -> Result<PolyVectorField<S>> {
    let jac = jacobian(h.components())?;
    let jac_inv = invert_series_matrix(&jac)?;
    let n = h.arity();
    let components = (0..n)
        .map(|i| {
            let mut acc = TruncatedSeries::zero(n, h.order());
            for j in 0..n {
                acc = acc.add(&jac_inv[i][j].mul(h.component(j)));
            }
            acc
        })
        .collect();
    PolyVectorField::new(components)
}

/// Pullback residual `G*X - X`, where `(G*X)(z) = dG|_{G⁻¹(z)} · X(G⁻¹(z))`.
pub fn pullback_invariance<S: Scalar>(
    g: &FormalDiffeo<S>,
    x: &PolyVectorField<S>,
) -> PolyVectorField<S> {
    assert_eq!(g.arity(), x.arity(), "arity mismatch");
    let n = x.arity();
    let g_inv = g.invert();
    let jac = jacobian(g.components()).expect("diffeo derivatives");
    let x_back: Vec<TruncatedSeries<S>> = x
        .components()
        .iter()
        .map(|c| c.compose(g_inv.components()).expect("zero constant terms"))
        .collect();
    let components: Vec<TruncatedSeries<S>> = (0..n)
        .map(|i| {
            let mut acc = TruncatedSeries::zero(n, x.truncation().min(g.order()));
            for j in 0..n {
                let dg_ij = jac[i][j]
                    .compose(g_inv.components())
                    .expect("zero constant terms");
                acc = acc.add(&dg_ij.mul(&x_back[j]));
            }
            acc.sub(x.component(i))
        })
        .collect();
    PolyVectorField { components }
}

/// Report of the generic-shape analysis of Eq. `λ_i x_i (1 + a_i)`.
#[derive(Clone, Debug)]
pub struct GenericFormReport {
    pub is_generic: bool,
    pub failures: Vec<String>,
    /// Diagonal eigenvalues λ_i when the shape holds.
    pub eigenvalues: Option<Vec<GaussRat>>,
    /// Exact polar form of the eigenvalues, when representable.
    pub eigen_tuple: Option<EigenTuple>,
    /// The unit corrections a_i with component_i = λ_i x_i (1 + a_i).
    pub corrections: Option<Vec<TruncatedSeries<GaussRat>>>,
    /// Integer eigenvalue ratios from the candidate's lowest multi-indices.
    pub integer_ratios: Option<Vec<i64>>,
    /// `N·Λ = 0` consistency of the lowest-index matrix.
    pub ratio_consistent: Option<bool>,
    /// Separating index and direction turn, when condition (*) holds.
    pub star: Option<(usize, Rat)>,
    pub star_evaluated: bool,
}

/// Checks the generic non-degenerate shape: each component divisible by its
/// own coordinate with a unit cofactor, so the coordinate hyperplanes are
/// invariant and the linear part is diagonal nonsingular. When a candidate
/// first integral is supplied, its lowest multi-indices feed `eigen_ratio`
/// and, for polar-representable eigenvalues, `star_condition`.
pub fn generic_form_analysis(
    x: &PolyVectorField<GaussRat>,
    candidate: Option<&FirstIntegralCandidate<GaussRat>>,
) -> GenericFormReport {
    let n = x.arity();
    let mut failures = Vec::new();
    let mut eigenvalues = Vec::with_capacity(n);
    let mut corrections = Vec::with_capacity(n);
    for i in 0..n {
        let comp = x.component(i);
        let xi = TruncatedSeries::monomial(
            n,
            crate::series::EXACT_ORDER,
            MultiIndex::unit(n, i),
            GaussRat::one(),
        );
        let Some(unit) = divide_exact(comp, &xi) else {
            failures.push(format!("component {} is not divisible by x{}", i + 1, i + 1));
            continue;
        };
        let lambda = unit.constant_term();
        if lambda.is_zero() {
            failures.push(format!(
                "component {} has a non-unit cofactor (λ{} = 0)",
                i + 1,
                i + 1
            ));
            continue;
        }
        let correction = unit
            .scale(&lambda.inv().expect("nonzero eigenvalue"))
            .sub(&TruncatedSeries::one(n, unit.order()));
        eigenvalues.push(lambda);
        corrections.push(correction);
    }
    let is_generic = failures.is_empty();
    let mut report = GenericFormReport {
        is_generic,
        failures,
        eigenvalues: None,
        eigen_tuple: None,
        corrections: None,
        integer_ratios: None,
        ratio_consistent: None,
        star: None,
        star_evaluated: false,
    };
    if !is_generic {
        return report;
    }
    let polar: Option<Vec<PolarRational>> = eigenvalues
        .iter()
        .map(PolarRational::try_from_gauss)
        .collect();
    report.eigenvalues = Some(eigenvalues.clone());
    report.corrections = Some(corrections);
    if let Some(values) = polar {
        let tuple = EigenTuple::new(values);
        if n >= 2 {
            report.star = star_condition(&tuple);
            report.star_evaluated = true;
        }
        report.eigen_tuple = Some(tuple);
    } else {
        report
            .failures
            .push("eigenvalues are not polar-rational; star test skipped".into());
    }
    if let Some(cand) = candidate {
        if cand.arity() == n {
            let rows: Vec<Vec<i64>> = cand
                .maps
                .iter()
                .filter_map(|m| {
                    m.terms().next().map(|(idx, _)| {
                        idx.0.iter().map(|&e| e as i64).collect()
                    })
                })
                .collect();
            if rows.len() == n - 1 {
                match eigen_ratio(&rows) {
                    Ok(k) => {
                        // N·Λ = 0 consistency of the lowest-index matrix.
                        let consistent = rows.iter().all(|row| {
                            let mut acc = GaussRat::zero();
                            for (e, lam) in row.iter().zip(&eigenvalues) {
                                acc = acc.add(&lam.mul_integer(*e));
                            }
                            acc.is_zero()
                        });
                        report.integer_ratios = Some(k);
                        report.ratio_consistent = Some(consistent);
                    }
                    Err(e) => report
                        .failures
                        .push(format!("eigen-ratio from lowest indices failed: {e}")),
                }
            }
        }
    }
    report
}

/// Basis of polynomial vector fields `X` with `deg ≤ degree_bound`, zero
/// constant term, and `X(f_j) = 0` up to each candidate's certificate, by
/// one exact nullspace computation. With `p = n` generically transverse
/// inputs the basis is empty (the determinant criterion).
pub fn infinitesimal_symmetries<S: Scalar>(
    fs: &[TruncatedSeries<S>],
    degree_bound: u32,
) -> Result<Vec<PolyVectorField<S>>> {
    if fs.is_empty() {
        return Err(Error::BadInput("need at least one function".into()));
    }
    let n = fs[0].arity();
    if fs.iter().any(|f| f.arity() != n) {
        return Err(Error::BadInput("mixed arities".into()));
    }
    // Unknowns: coefficient of x^Q in component i, |Q| in 1..=degree_bound.
    let monos = MultiIndex::all_up_to(n, 1, degree_bound);
    let unknowns: Vec<(usize, MultiIndex)> = (0..n)
        .flat_map(|i| monos.iter().map(move |q| (i, q.clone())))
        .collect();
    // Equations: coefficients of X(f_j) for every degree inside the
    // certificate of a_i ∂f_j/∂x_i with a_i of valuation >= 1.
    let mut rows: Vec<Vec<S>> = Vec::new();
    for f in fs {
        let partials: Vec<TruncatedSeries<S>> = (0..n)
            .map(|i| f.derive(i).expect("index in range"))
            .collect();
        let images: Vec<TruncatedSeries<S>> = unknowns
            .iter()
            .map(|(i, q)| {
                partials[*i].mul(&TruncatedSeries::monomial(
                    n,
                    crate::series::EXACT_ORDER,
                    q.clone(),
                    S::one(),
                ))
            })
            .collect();
        let limit = images.iter().map(|s| s.order()).min().unwrap();
        let mut eq_indices: Vec<MultiIndex> = images
            .iter()
            .flat_map(|s| s.terms().map(|(idx, _)| idx.clone()))
            .filter(|idx| idx.degree() <= limit)
            .collect();
        eq_indices.sort();
        eq_indices.dedup();
        for idx in eq_indices {
            rows.push(images.iter().map(|s| s.coeff(&idx)).collect());
        }
    }
    let mat = Mat::from_rows(rows);
    let basis = mat
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut comps: Vec<TruncatedSeries<S>> = (0..n)
                .map(|_| TruncatedSeries::zero(n, degree_bound))
                .collect();
            for ((i, q), c) in unknowns.iter().zip(v) {
                comps[*i].set_coeff(q.clone(), c);
            }
            PolyVectorField { components: comps }
        })
        .collect();
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::EXACT_ORDER;

    type TS = TruncatedSeries<GaussRat>;

    fn int(n: i64) -> GaussRat {
        GaussRat::from_integer(n)
    }

    fn xvar(n: usize, order: u32, i: usize) -> TS {
        TS::variable(n, order, i)
    }

    #[test]
    fn lie_euler() {
        // X = x d/dx on x^k scales by k.
        let x = PolyVectorField::diagonal(&[int(1)], 8);
        let f = xvar(1, 8, 0).pow(5);
        assert!(x.lie_derivative(&f).eq_trunc(&f.scale(&int(5))));
        // Radial field on a homogeneous polynomial of degree κ.
        let r = PolyVectorField::<GaussRat>::radial(2, 8);
        let g = xvar(2, 8, 0).pow(2).mul(&xvar(2, 8, 1)); // degree 3
        assert!(r.lie_derivative(&g).eq_trunc(&g.scale(&int(3))));
        // Hyperbolic first integral.
        let h = PolyVectorField::diagonal(&[int(1), int(-1)], 8);
        let xy = xvar(2, 8, 0).mul(&xvar(2, 8, 1));
        assert!(h.lie_derivative(&xy).is_zero());
    }

    #[test]
    fn lie_leibniz() {
        let n = 2;
        let x1 = xvar(n, 8, 0);
        let x2 = xvar(n, 8, 1);
        let field = PolyVectorField::new(vec![
            x1.mul(&x2).add(&x1),
            x2.pow(2).sub(&x1.scale(&int(3))),
        ])
        .unwrap();
        let f = x1.pow(2).add(&x2);
        let g = x1.sub(&x2.pow(3));
        let lhs = field.lie_derivative(&f.mul(&g));
        let rhs = f
            .mul(&field.lie_derivative(&g))
            .add(&g.mul(&field.lie_derivative(&f)));
        assert!(lhs.eq_trunc(&rhs));
    }

    #[test]
    fn cofactor_axis() {
        let x = PolyVectorField::diagonal(&[int(3), int(5)], EXACT_ORDER);
        let g = xvar(2, EXACT_ORDER, 0);
        let k = cofactor(&x, &g).unwrap();
        assert!(k.eq_trunc(&TS::constant(2, EXACT_ORDER, int(3))));
    }

    #[test]
    fn cofactor_circle() {
        // X = (-y + x(1-x²-y²)) ∂x + (x + y(1-x²-y²)) ∂y,
        // g = x² + y² - 1, K = -2(x² + y²).
        let n = 2;
        let x = xvar(n, EXACT_ORDER, 0);
        let y = xvar(n, EXACT_ORDER, 1);
        let r2 = x.pow(2).add(&y.pow(2));
        let unit = TS::one(n, EXACT_ORDER).sub(&r2);
        let field =
            PolyVectorField::new(vec![y.neg().add(&x.mul(&unit)), x.add(&y.mul(&unit))])
                .unwrap();
        let g = r2.sub(&TS::one(n, EXACT_ORDER));
        let k = cofactor(&field, &g).unwrap();
        assert!(k.eq_trunc(&r2.scale(&int(-2))));
        // Non-divisible case.
        let field2 = PolyVectorField::diagonal(&[int(1), int(2)], EXACT_ORDER);
        assert!(cofactor(&field2, &x.add(&y)).is_none());
        // Homogeneity degree law: X homogeneous of order ν, g homogeneous,
        // K homogeneous of degree ν - 1.
        let k2 = cofactor(&field2, &x).unwrap();
        assert_eq!(k2.degree(), Some(0));
    }

    #[test]
    fn generic_analysis_positive() {
        // X = x(1+y) ∂x + 2y ∂y - z ∂z.
        let n = 3;
        let x = xvar(n, 8, 0);
        let y = xvar(n, 8, 1);
        let z = xvar(n, 8, 2);
        let field = PolyVectorField::new(vec![
            x.mul(&TS::one(n, 8).add(&y)),
            y.scale(&int(2)),
            z.neg(),
        ])
        .unwrap();
        let report = generic_form_analysis(&field, None);
        assert!(report.is_generic, "failures: {:?}", report.failures);
        assert_eq!(
            report.eigenvalues.as_ref().unwrap(),
            &vec![int(1), int(2), int(-1)]
        );
        let (idx, v) = report.star.expect("condition (*) holds");
        assert_eq!(idx, 2);
        assert_eq!(v, Rat::new(1, 2));
    }

    #[test]
    fn generic_analysis_negative() {
        // Nilpotent linear part: X = y ∂x.
        let n = 2;
        let y = xvar(n, 8, 1);
        let field = PolyVectorField::new(vec![y, TS::zero(n, 8)]).unwrap();
        let report = generic_form_analysis(&field, None);
        assert!(!report.is_generic);
    }

    #[test]
    fn generic_analysis_ratio_pipeline() {
        // X = x∂x + 2y∂y - 3z∂z with lowest indices (3,0,1), (0,3,2).
        let field =
            PolyVectorField::diagonal(&[int(1), int(2), int(-3)], EXACT_ORDER);
        let n = 3;
        let f1 = TS::monomial(n, 8, MultiIndex::new(vec![3, 0, 1]), int(1));
        let f2 = TS::monomial(n, 8, MultiIndex::new(vec![0, 3, 2]), int(1));
        let cand = FirstIntegralCandidate::new(vec![f1, f2]).unwrap();
        let report = generic_form_analysis(&field, Some(&cand));
        assert!(report.is_generic);
        assert_eq!(report.integer_ratios, Some(vec![1, 2, -3]));
        assert_eq!(report.ratio_consistent, Some(true));
    }

    #[test]
    fn first_integral_examples() {
        // X = x∂x - y∂y, F = (xy).
        let field = PolyVectorField::diagonal(&[int(1), int(-1)], 8);
        let xy = xvar(2, 8, 0).mul(&xvar(2, 8, 1));
        let cand = FirstIntegralCandidate::new(vec![xy]).unwrap();
        let verdict = first_integral_check(&field, &cand);
        assert!(verdict.residuals_zero);
        assert!(verdict.wedge_nonzero);

        // X = x∂x + 2y∂y - 3z∂z, F = (x³z, y³z²): residuals vanish.
        let field3 = PolyVectorField::diagonal(&[int(1), int(2), int(-3)], 10);
        let f1 = TS::monomial(3, 10, MultiIndex::new(vec![3, 0, 1]), int(1));
        let f2 = TS::monomial(3, 10, MultiIndex::new(vec![0, 3, 2]), int(1));
        let cand3 = FirstIntegralCandidate::new(vec![f1, f2]).unwrap();
        let verdict3 = first_integral_check(&field3, &cand3);
        assert!(verdict3.residuals_zero);
        assert!(verdict3.wedge_nonzero);

        // Radial field has no coordinate first integral.
        let radial = PolyVectorField::<GaussRat>::radial(2, 8);
        let cand_x = FirstIntegralCandidate::new(vec![xvar(2, 8, 0)]).unwrap();
        let v = first_integral_check(&radial, &cand_x);
        assert!(!v.residuals_zero);
        assert!(v.residuals[0].eq_trunc(&xvar(2, 8, 0)));
    }

    #[test]
    fn radial_field_identity_map() {
        let h = FormalDiffeo::<GaussRat>::identity(2, 6);
        let x = radial_field_from_map(&h).unwrap();
        let r = PolyVectorField::radial(2, 6);
        assert!(x.sub(&r).is_zero());
    }

    #[test]
    fn radial_field_series_division() {
        // H = (x + x², y): first component (x + x²)/(1 + 2x)
        //   = x - x² + 2x³ - 4x⁴ + …
        let n = 2;
        let x = xvar(n, 5, 0);
        let y = xvar(n, 5, 1);
        let h = FormalDiffeo::new(vec![x.add(&x.pow(2)), y.clone()]).unwrap();
        let field = radial_field_from_map(&h).unwrap();
        let expected = x
            .sub(&x.pow(2))
            .add(&x.pow(3).scale(&int(2)))
            .sub(&x.pow(4).scale(&int(4)));
        assert!(field.component(0).eq_up_to(&expected, 4));
        assert!(field.component(1).eq_trunc(&y));
        // Linear part of the construction is the identity (radial leading
        // term).
        let lin: Vec<TS> = field
            .components()
            .iter()
            .map(|c| c.jet(1).unwrap())
            .collect();
        assert!(lin[0].eq_trunc(&x.jet(1).unwrap()));
        assert!(lin[1].eq_trunc(&y.jet(1).unwrap()));
    }

    #[test]
    fn pullback_examples() {
        // Linear maps preserve the radial field.
        let n = 2;
        let a = Mat::from_rows(vec![vec![int(2), int(1)], vec![int(0), int(3)]]);
        let g = FormalDiffeo::linear(&a, 8).unwrap();
        let r = PolyVectorField::radial(n, 8);
        assert!(pullback_invariance(&g, &r).is_zero());

        // G = diag(2,3), X = x1 ∂/∂x2: residual (3/2 - 1)·x1 ∂/∂x2 ≠ 0.
        let d = FormalDiffeo::diagonal(&[int(2), int(3)], 8).unwrap();
        let x_field = PolyVectorField::new(vec![
            TS::zero(n, 8),
            xvar(n, 8, 0),
        ])
        .unwrap();
        let res = pullback_invariance(&d, &x_field);
        assert!(!res.is_zero());

        // Identity pullback is trivial.
        let id = FormalDiffeo::identity(n, 8);
        assert!(pullback_invariance(&id, &x_field).is_zero());
    }

    #[test]
    fn pullback_conjugated_linear_group_preserves_radial_construction() {
        // X = (dg)⁻¹·g is invariant under g⁻¹∘A∘g for any linear A.
        let n = 2;
        let x = xvar(n, 6, 0);
        let y = xvar(n, 6, 1);
        let g = FormalDiffeo::new(vec![
            x.add(&y.pow(2)),
            y.add(&x.pow(2).scale(&int(2))),
        ])
        .unwrap();
        let field = radial_field_from_map(&g).unwrap();
        let a = Mat::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]);
        let lin = FormalDiffeo::linear(&a, 6).unwrap();
        let conj = g.invert().compose(&lin).compose(&g);
        let res = pullback_invariance(&conj, &field);
        assert!(res.is_zero(), "residual {:?}", res);
    }

    #[test]
    fn symmetries_rigid_coordinates() {
        let fs = [xvar(2, 8, 0), xvar(2, 8, 1)];
        let basis = infinitesimal_symmetries(&fs, 3).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn symmetries_of_product() {
        // X(x1 x2) = 0 at bound 1: exactly span{x1∂1 - x2∂2}.
        let f = xvar(2, 8, 0).mul(&xvar(2, 8, 1));
        let basis = infinitesimal_symmetries(&[f], 1).unwrap();
        assert_eq!(basis.len(), 1);
        let b = &basis[0];
        let c1 = b.component(0).coeff(&MultiIndex::new(vec![1, 0]));
        let c2 = b.component(1).coeff(&MultiIndex::new(vec![0, 1]));
        assert_eq!(c1, c2.neg());
        assert!(!c1.is_zero());
    }

    #[test]
    fn symmetries_transverse_pair_empty() {
        // (x1², x1x2): wedge = 2x1² ≠ 0, so no symmetries.
        let x1 = xvar(2, 8, 0);
        let x2 = xvar(2, 8, 1);
        let basis = infinitesimal_symmetries(&[x1.pow(2), x1.mul(&x2)], 2).unwrap();
        assert!(basis.is_empty());
    }
}
