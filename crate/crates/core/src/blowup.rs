//! Blow-up of ℂ³ at the origin (three standard charts), divisor restriction
//! and dicriticality, projectivization of homogeneous fields to ℂP(2),
//! chart transitions and weak-first-integral verification.
//!
//! Chart k normalizes the k-th homogeneous coordinate; its two affine
//! coordinates are the remaining ratios in index order, so chart 1 carries
//! `(x₂/x₁, x₃/x₁)`, chart 2 `(x₁/x₂, x₃/x₂)` and chart 3 `(x₁/x₃, x₂/x₃)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;
use crate::series::{TruncatedSeries, EXACT_ORDER};
use crate::vfield::PolyVectorField;

/// A polynomial field on one affine chart of the divisor ℂP(2).
#[derive(Clone, Debug)]
pub struct ChartField<S: Scalar> {
    pub chart: u8,
    pub field: PolyVectorField<S>,
    /// The ν used in the `z^{ν-1}` division; governs transitions.
    pub nu: u32,
}

fn other_indices(chart: u8) -> [usize; 2] {
    match chart {
        1 => [1, 2],
        2 => [0, 2],
        3 => [0, 1],
        _ => panic!("chart must be 1, 2 or 3"),
    }
}

/// Substitutes the chart's affine coordinates into a 3-variable polynomial:
/// coordinate `chart` becomes 1 and the remaining two become `(w₁, w₂)`.
fn dehomogenize<S: Scalar>(p: &TruncatedSeries<S>, chart: u8) -> TruncatedSeries<S> {
    let [o1, o2] = other_indices(chart);
    let mut out = TruncatedSeries::<S>::zero(2, EXACT_ORDER);
    for (idx, c) in p.terms() {
        let e = MultiIndex::new(vec![idx.0[o1], idx.0[o2]]);
        let cur = out.coeff(&e);
        out.set_coeff(e, cur.add(c));
    }
    out
}

/// Univariate polynomial gcd (monic), coefficients low-to-high.
fn poly1_gcd<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    fn trim<S: Scalar>(mut v: Vec<S>) -> Vec<S> {
        while v.last().map_or(false, |c| c.is_zero()) {
            v.pop();
        }
        v
    }
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        // a mod b
        let lead = b.last().unwrap().clone();
        let inv = lead.inv().expect("nonzero leading coefficient");
        while a.len() >= b.len() && !a.is_empty() {
            let f = a.last().unwrap().mul(&inv);
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[shift + i] = a[shift + i].sub(&f.mul(bc));
            }
            a = trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(lead) = a.last().cloned() {
        let inv = lead.inv().expect("nonzero leading coefficient");
        a = a.iter().map(|c| c.mul(&inv)).collect();
    }
    a
}

/// Binary form as `(mult_u, mult_v, dehomogenized univariate in t = u/v)`.
fn binary_split<S: Scalar>(p: &TruncatedSeries<S>) -> (u32, u32, Vec<S>) {
    let mu = p.terms().map(|(i, _)| i.0[0]).min().unwrap_or(0);
    let mv = p.terms().map(|(i, _)| i.0[1]).min().unwrap_or(0);
    let deg = p.terms().map(|(i, _)| i.0[0] - mu).max().unwrap_or(0);
    let mut coeffs = vec![S::zero(); deg as usize + 1];
    for (i, c) in p.terms() {
        coeffs[(i.0[0] - mu) as usize] = c.clone();
    }
    (mu, mv, coeffs)
}

/// Cheap coprimality certificate for homogeneous 3-variable components:
/// restrict to a coordinate plane; if the restrictions are not all zero and
/// their binary-form gcd is constant, any common factor would have to be
/// divisible by that coordinate, contradicting the nonzero restriction.
fn certify_coprime<S: Scalar>(comps: &[TruncatedSeries<S>]) -> Result<()> {
    for chart in 1u8..=3 {
        let restricted: Vec<TruncatedSeries<S>> = comps
            .iter()
            .map(|c| {
                let k = (chart - 1) as usize;
                let mut out = TruncatedSeries::zero(2, EXACT_ORDER);
                for (idx, v) in c.terms() {
                    if idx.0[k] == 0 {
                        let [o1, o2] = other_indices(chart);
                        out.set_coeff(MultiIndex::new(vec![idx.0[o1], idx.0[o2]]), v.clone());
                    }
                }
                out
            })
            .filter(|r| !r.is_zero())
            .collect();
        if restricted.is_empty() {
            continue;
        }
        let mut mu = u32::MAX;
        let mut mv = u32::MAX;
        let mut g: Option<Vec<S>> = None;
        for r in &restricted {
            let (a, b, uni) = binary_split(r);
            mu = mu.min(a);
            mv = mv.min(b);
            g = Some(match g {
                None => uni,
                Some(prev) => poly1_gcd(&prev, &uni),
            });
        }
        if mu == 0 && mv == 0 && g.map_or(false, |g| g.len() <= 1) {
            return Ok(());
        }
    }
    Err(Error::CommonFactor(
        "no coordinate-plane restriction certifies coprime components".into(),
    ))
}

/// Projectivizes a homogeneous field on ℂ³ to the requested chart of ℂP(2):
/// in chart 1, `(b(1,w) - w₁ a(1,w)) ∂w₁ + (c(1,w) - w₂ a(1,w)) ∂w₂`, and
/// symmetrically in the other charts. The zero field signals the radial
/// (dicritical) degenerate case.
pub fn projectivize_homogeneous<S: Scalar>(
    x: &PolyVectorField<S>,
    chart: u8,
) -> Result<ChartField<S>> {
    if x.arity() != 3 {
        return Err(Error::BadInput("projectivization needs a field on C^3".into()));
    }
    if !x.is_homogeneous() || x.is_zero() {
        return Err(Error::NotHomogeneous);
    }
    let nu = x.order().unwrap();
    certify_coprime(x.components())?;
    Ok(chart_restriction(x, chart, nu))
}

/// The chart formula applied verbatim; shared by projectivization and the
/// divisor restriction (which feeds it the ν-jet).
fn chart_restriction<S: Scalar>(
    x: &PolyVectorField<S>,
    chart: u8,
    nu: u32,
) -> ChartField<S> {
    let [o1, o2] = other_indices(chart);
    let normal = dehomogenize(x.component((chart - 1) as usize), chart);
    let w1 = TruncatedSeries::<S>::variable(2, EXACT_ORDER, 0);
    let w2 = TruncatedSeries::<S>::variable(2, EXACT_ORDER, 1);
    let f1 = dehomogenize(x.component(o1), chart).sub(&w1.mul(&normal));
    let f2 = dehomogenize(x.component(o2), chart).sub(&w2.mul(&normal));
    ChartField {
        chart,
        field: PolyVectorField::new(vec![f1, f2]).expect("two components"),
        nu,
    }
}

/// Result of blowing up a singular field and restricting to the divisor.
#[derive(Clone, Debug)]
pub struct BlowupReport<S: Scalar> {
    pub nu: u32,
    pub dicritical: bool,
    /// Divisor field in the requested chart; absent in the dicritical case.
    pub chart_field: Option<ChartField<S>>,
    /// The full transformed field `dE⁻¹ · (X ∘ E)` in the chart.
    pub total_transform: PolyVectorField<S>,
}

/// The blow-up substitution of the chart: coordinate `chart` stays, the
/// others are multiplied by it.
fn blowup_map<S: Scalar>(chart: u8, order: u32) -> Vec<TruncatedSeries<S>> {
    let k = (chart - 1) as usize;
    let zk = TruncatedSeries::<S>::variable(3, order, k);
    (0..3)
        .map(|i| {
            if i == k {
                zk.clone()
            } else {
                zk.mul(&TruncatedSeries::variable(3, order, i))
            }
        })
        .collect()
}

/// Exact division of every monomial by `z_k^{pow}`.
fn divide_coordinate_power<S: Scalar>(
    s: &TruncatedSeries<S>,
    k: usize,
    pow: u32,
) -> Result<TruncatedSeries<S>> {
    let mut out = TruncatedSeries::zero(s.arity(), order_sub(s.order(), pow));
    for (idx, c) in s.terms() {
        if idx.0[k] < pow {
            return Err(Error::DenominatorsDoNotClear);
        }
        let mut e = idx.0.clone();
        e[k] -= pow;
        out.set_coeff(MultiIndex::new(e), c.clone());
    }
    Ok(out)
}

fn order_sub(order: u32, k: u32) -> u32 {
    if order == EXACT_ORDER {
        EXACT_ORDER
    } else {
        order.saturating_sub(k)
    }
}

/// Blows up a field singular at the origin: computes the total transform,
/// decides dicriticality by the exact ν-jet identities
/// `x₂·j^ν a = x₁·j^ν b` and `x₃·j^ν a = x₁·j^ν c`, and in the
/// non-dicritical case restricts `(z^{ν-1})⁻¹·X̃` to the divisor.
pub fn blowup_divisor_restriction<S: Scalar>(
    x: &PolyVectorField<S>,
    chart: u8,
) -> Result<BlowupReport<S>> {
    if x.arity() != 3 {
        return Err(Error::BadInput("blow-up implemented for C^3".into()));
    }
    let nu = x.order().ok_or(Error::NonsingularOrigin)?;
    if nu == 0 {
        return Err(Error::NonsingularOrigin);
    }
    let jets: Vec<TruncatedSeries<S>> = x
        .components()
        .iter()
        .map(|c| c.jet(nu.min(c.order())))
        .collect::<Result<_>>()?;
    let xv: Vec<TruncatedSeries<S>> = (0..3)
        .map(|i| TruncatedSeries::variable(3, EXACT_ORDER, i))
        .collect();
    let dicritical = xv[1].mul(&jets[0]).eq_trunc(&xv[0].mul(&jets[1]))
        && xv[2].mul(&jets[0]).eq_trunc(&xv[0].mul(&jets[2]));

    let k = (chart - 1) as usize;
    let e_map = blowup_map::<S>(chart, x.truncation());
    let composed: Vec<TruncatedSeries<S>> = x
        .components()
        .iter()
        .map(|c| c.compose(&e_map))
        .collect::<Result<_>>()?;
    let [o1, o2] = other_indices(chart);
    let zvars: Vec<TruncatedSeries<S>> = (0..3)
        .map(|i| TruncatedSeries::variable(3, EXACT_ORDER, i))
        .collect();
    let mut total = vec![TruncatedSeries::zero(3, 0); 3];
    total[k] = composed[k].clone();
    total[o1] =
        divide_coordinate_power(&composed[o1].sub(&zvars[o1].mul(&composed[k])), k, 1)?;
    total[o2] =
        divide_coordinate_power(&composed[o2].sub(&zvars[o2].mul(&composed[k])), k, 1)?;
    let total_transform = PolyVectorField::new(total)?;

    let chart_field = if dicritical {
        None
    } else {
        let jet_field = PolyVectorField::new(jets)?;
        Some(chart_restriction(&jet_field, chart, nu))
    };
    Ok(BlowupReport { nu, dicritical, chart_field, total_transform })
}

/// Verifies the pushforward identity `dE(z)·X̃(z) = X(E(z))` for a computed
/// total transform, coefficient-exactly up to the shared certificate.
pub fn pushforward_identity_holds<S: Scalar>(
    x: &PolyVectorField<S>,
    report: &BlowupReport<S>,
    chart: u8,
) -> bool {
    let k = (chart - 1) as usize;
    let order = x.truncation();
    let e_map = blowup_map::<S>(chart, order);
    let zk = TruncatedSeries::<S>::variable(3, EXACT_ORDER, k);
    let zvars: Vec<TruncatedSeries<S>> = (0..3)
        .map(|i| TruncatedSeries::variable(3, EXACT_ORDER, i))
        .collect();
    let xt = &report.total_transform;
    // dE rows: row k is e_k; row i (i≠k) is z_i·e_k + z_k·e_i.
    for i in 0..3 {
        let lhs = if i == k {
            xt.component(k).clone()
        } else {
            zvars[i].mul(xt.component(k)).add(&zk.mul(xt.component(i)))
        };
        let rhs = x.component(i).compose(&e_map).expect("blow-up map vanishes at 0");
        if !lhs.sub(&rhs).is_zero_backend() {
            return false;
        }
    }
    true
}

/// Laurent-exponent workspace for chart transitions.
type Laurent<S> = BTreeMap<(i64, i64), S>;

fn laurent_insert<S: Scalar>(m: &mut Laurent<S>, key: (i64, i64), v: S) {
    let cur = m.get(&key).cloned().unwrap_or_else(S::zero);
    let sum = cur.add(&v);
    if sum.is_storage_zero() {
        m.remove(&key);
    } else {
        m.insert(key, sum);
    }
}

/// Substitutes `w₁ = γ^a1 δ^b1`, `w₂ = γ^a2 δ^b2` into a 2-variable
/// polynomial and shifts by `γ^s0 δ^s1`.
fn substitute_monomial_map<S: Scalar>(
    p: &TruncatedSeries<S>,
    e1: (i64, i64),
    e2: (i64, i64),
    shift: (i64, i64),
) -> Laurent<S> {
    let mut out = Laurent::new();
    for (idx, c) in p.terms() {
        let (q1, q2) = (idx.0[0] as i64, idx.0[1] as i64);
        let key = (
            q1 * e1.0 + q2 * e2.0 + shift.0,
            q1 * e1.1 + q2 * e2.1 + shift.1,
        );
        laurent_insert(&mut out, key, c.clone());
    }
    out
}

fn laurent_to_poly<S: Scalar>(l: &Laurent<S>) -> Result<TruncatedSeries<S>> {
    let mut out = TruncatedSeries::zero(2, EXACT_ORDER);
    for (&(a, b), c) in l {
        if a < 0 || b < 0 {
            if c.is_zero() {
                continue;
            }
            return Err(Error::DenominatorsDoNotClear);
        }
        out.set_coeff(MultiIndex::new(vec![a as u32, b as u32]), c.clone());
    }
    Ok(out)
}

/// Transports a divisor chart field to another chart:
/// `X̃_target = m^{ν-1} · dφ · X̃_source ∘ φ⁻¹` with `m` the target
/// coordinate equal to `x_source/x_target`. Denominators must clear, which
/// is exactly the degree-`ν+1` bound of divisor fields.
pub fn chart_transition<S: Scalar>(
    cf: &ChartField<S>,
    to_chart: u8,
) -> Result<ChartField<S>> {
    if to_chart == cf.chart {
        return Ok(cf.clone());
    }
    let from = cf.chart as usize - 1;
    let to = to_chart as usize - 1;
    let src_others = other_indices(cf.chart);
    let dst_others = other_indices(to_chart);
    // Homogeneous ratio x_a/x_target expressed in target coordinates.
    let dst_ratio = |a: usize| -> (i64, i64) {
        if a == to {
            (0, 0)
        } else if a == dst_others[0] {
            (1, 0)
        } else {
            (0, 1)
        }
    };
    // Source coordinates as Laurent monomials of the target coordinates:
    // w_i = x_{src_others[i]} / x_from.
    let sub_exponents = |a: usize| -> (i64, i64) {
        let num = dst_ratio(a);
        let den = dst_ratio(from);
        (num.0 - den.0, num.1 - den.1)
    };
    let e1 = sub_exponents(src_others[0]);
    let e2 = sub_exponents(src_others[1]);
    // Target coordinates as monomials of the source coordinates, for the
    // logarithmic pushforward.
    let src_ratio = |a: usize| -> (i64, i64) {
        if a == from {
            (0, 0)
        } else if a == src_others[0] {
            (1, 0)
        } else {
            (0, 1)
        }
    };
    let target_in_source = |a: usize| -> (i64, i64) {
        let num = src_ratio(a);
        let den = src_ratio(to);
        (num.0 - den.0, num.1 - den.1)
    };
    let g_exp = target_in_source(dst_others[0]);
    let d_exp = target_in_source(dst_others[1]);
    // Multiplier m^{ν-1} with m = x_from/x_to in target coordinates.
    let m_exp = dst_ratio(from);
    let scale = cf.nu as i64 - 1;
    let shift_base = (m_exp.0 * scale, m_exp.1 * scale);

    let p = cf.field.component(0);
    let q = cf.field.component(1);
    // Velocity of a target coordinate γ = w₁^u w₂^v:
    //   γ̇ = γ·(u·P/w₁ + v·Q/w₂).
    let velocity = |u: i64, v: i64, self_exp: (i64, i64)| -> Laurent<S> {
        let mut acc = Laurent::new();
        if u != 0 {
            let term = substitute_monomial_map(
                p,
                e1,
                e2,
                (
                    shift_base.0 + self_exp.0 - e1.0,
                    shift_base.1 + self_exp.1 - e1.1,
                ),
            );
            for (k, c) in term {
                laurent_insert(&mut acc, k, c.mul_integer(u));
            }
        }
        if v != 0 {
            let term = substitute_monomial_map(
                q,
                e1,
                e2,
                (
                    shift_base.0 + self_exp.0 - e2.0,
                    shift_base.1 + self_exp.1 - e2.1,
                ),
            );
            for (k, c) in term {
                laurent_insert(&mut acc, k, c.mul_integer(v));
            }
        }
        acc
    };
    let new1 = laurent_to_poly(&velocity(g_exp.0, g_exp.1, (1, 0)))?;
    let new2 = laurent_to_poly(&velocity(d_exp.0, d_exp.1, (0, 1)))?;
    Ok(ChartField {
        chart: to_chart,
        field: PolyVectorField::new(vec![new1, new2])?,
        nu: cf.nu,
    })
}

/// Degree-0 rational function `P/Q` on ℂP(2).
#[derive(Clone, Debug)]
pub struct RationalFunctionCP2<S: Scalar> {
    pub numerator: TruncatedSeries<S>,
    pub denominator: TruncatedSeries<S>,
}

impl<S: Scalar> RationalFunctionCP2<S> {
    /// Validates equal homogeneous degrees and a nonzero denominator; the
    /// pair is expected gcd-reduced by the caller (full multivariate gcd is
    /// out of scope).
    pub fn new(numerator: TruncatedSeries<S>, denominator: TruncatedSeries<S>) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::NotInvertible);
        }
        if !numerator.is_homogeneous() || !denominator.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        let dn = numerator.degree().unwrap_or(0) as usize;
        let dd = denominator.degree().unwrap() as usize;
        if !numerator.is_zero() && dn != dd {
            return Err(Error::DegreeMismatch { num: dn, den: dd });
        }
        Ok(RationalFunctionCP2 { numerator, denominator })
    }
}

/// Verdict of the weak-first-integral test on ℂP(2).
#[derive(Clone, Debug)]
pub struct WeakIntegralVerdict<S: Scalar> {
    /// `Q·X(P) - P·X(Q)`, zero iff `X(P/Q) ≡ 0` off `{Q = 0}`.
    pub residual: TruncatedSeries<S>,
    pub invariant: bool,
}

/// Verifies `X(f) ≡ 0` for `f = P/Q` via the cleared identity
/// `Q·X(P) - P·X(Q) ≡ 0`.
pub fn weak_first_integral_check<S: Scalar>(
    x: &PolyVectorField<S>,
    f: &RationalFunctionCP2<S>,
) -> Result<WeakIntegralVerdict<S>> {
    if x.arity() != 3 {
        return Err(Error::BadInput("weak integrals live on C^3".into()));
    }
    if !x.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let residual = f
        .denominator
        .mul(&x.lie_derivative(&f.numerator))
        .sub(&f.numerator.mul(&x.lie_derivative(&f.denominator)));
    Ok(WeakIntegralVerdict { invariant: residual.is_zero_backend(), residual })
}

/// Cross-checks the projected cofactor identity
/// `X̃(g̃_κ) = g̃_κ·(-κ·a_ν + h_ν)` in every chart, for a homogeneous
/// invariant curve `g` with cofactor `h` of the homogeneous field `X`.
pub fn projected_cofactor_identity<S: Scalar>(
    x: &PolyVectorField<S>,
    g: &TruncatedSeries<S>,
    h: &TruncatedSeries<S>,
) -> Result<bool> {
    if x.arity() != 3 || !x.is_homogeneous() || !g.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let kappa = g.degree().ok_or_else(|| {
        Error::BadInput("invariant curve must be nonzero".into())
    })?;
    for chart in 1u8..=3 {
        let cf = chart_restriction(x, chart, x.order().unwrap_or(0));
        let g_tilde = dehomogenize(g, chart);
        let lhs = cf.field.lie_derivative(&g_tilde);
        let normal = dehomogenize(x.component(chart as usize - 1), chart);
        let h_tilde = dehomogenize(h, chart);
        let rhs = g_tilde.mul(&h_tilde.sub(&normal.scale(&S::from_integer(kappa as i64))));
        if !lhs.sub(&rhs).is_zero_backend() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat;

    type TS = TruncatedSeries<GaussRat>;

    fn int(n: i64) -> GaussRat {
        GaussRat::from_integer(n)
    }

    fn xv(i: usize) -> TS {
        TS::variable(3, EXACT_ORDER, i)
    }

    fn wv(i: usize) -> TS {
        TS::variable(2, EXACT_ORDER, i)
    }

    #[test]
    fn projectivize_radial_vanishes() {
        let r = PolyVectorField::<GaussRat>::radial(3, EXACT_ORDER);
        let cf = projectivize_homogeneous(&r, 1).unwrap();
        assert!(cf.field.is_zero());
    }

    #[test]
    fn projectivize_diagonal() {
        // diag(1,2,3) -> chart 1: w₁∂w₁ + 2w₂∂w₂.
        let x = PolyVectorField::diagonal(&[int(1), int(2), int(3)], EXACT_ORDER);
        let cf = projectivize_homogeneous(&x, 1).unwrap();
        assert!(cf.field.component(0).eq_trunc(&wv(0)));
        assert!(cf.field.component(1).eq_trunc(&wv(1).scale(&int(2))));
    }

    #[test]
    fn projectivize_squares() {
        // (x₁², x₂², x₃²) -> chart 1: (w₁² - w₁)∂w₁ + (w₂² - w₂)∂w₂.
        let x = PolyVectorField::new(vec![
            xv(0).pow(2),
            xv(1).pow(2),
            xv(2).pow(2),
        ])
        .unwrap();
        let cf = projectivize_homogeneous(&x, 1).unwrap();
        assert!(cf.field.component(0).eq_trunc(&wv(0).pow(2).sub(&wv(0))));
        assert!(cf.field.component(1).eq_trunc(&wv(1).pow(2).sub(&wv(1))));
    }

    #[test]
    fn projectivize_rejects_inhomogeneous_and_shared_factor() {
        let x = PolyVectorField::new(vec![xv(0), xv(1).pow(2), xv(2)]).unwrap();
        assert!(matches!(
            projectivize_homogeneous(&x, 1),
            Err(Error::NotHomogeneous)
        ));
        let shared = PolyVectorField::new(vec![
            xv(0).mul(&xv(2)),
            xv(1).mul(&xv(2)),
            xv(2).pow(2),
        ])
        .unwrap();
        assert!(matches!(
            projectivize_homogeneous(&shared, 1),
            Err(Error::CommonFactor(_))
        ));
    }

    #[test]
    fn blowup_radial_is_dicritical() {
        let r = PolyVectorField::<GaussRat>::radial(3, 8);
        let rep = blowup_divisor_restriction(&r, 1).unwrap();
        assert!(rep.dicritical);
        assert!(rep.chart_field.is_none());
        assert!(pushforward_identity_holds(&r, &rep, 1));
    }

    #[test]
    fn blowup_diagonal_chart_field() {
        // diag(1,2,3): chart field z₂∂₂ + 2z₃∂₃ in chart 1.
        let x = PolyVectorField::diagonal(&[int(1), int(2), int(3)], 8);
        let rep = blowup_divisor_restriction(&x, 1).unwrap();
        assert_eq!(rep.nu, 1);
        assert!(!rep.dicritical);
        let cf = rep.chart_field.as_ref().unwrap();
        assert!(cf.field.component(0).eq_trunc(&wv(0)));
        assert!(cf.field.component(1).eq_trunc(&wv(1).scale(&int(2))));
        assert!(pushforward_identity_holds(&x, &rep, 1));
    }

    #[test]
    fn blowup_swap_field() {
        // X = (x₂, x₁, x₃): chart field (1 - z₂²)∂₂ + (z₃ - z₂z₃)∂₃.
        let x = PolyVectorField::new(vec![xv(1), xv(0), xv(2)]).unwrap();
        let x = PolyVectorField::new(
            x.components().iter().map(|c| c.truncate(8)).collect(),
        )
        .unwrap();
        let rep = blowup_divisor_restriction(&x, 1).unwrap();
        let cf = rep.chart_field.as_ref().unwrap();
        let one = TS::one(2, EXACT_ORDER);
        assert!(cf.field.component(0).eq_trunc(&one.sub(&wv(0).pow(2))));
        assert!(cf
            .field
            .component(1)
            .eq_trunc(&wv(1).sub(&wv(0).mul(&wv(1)))));
        assert!(pushforward_identity_holds(&x, &rep, 1));
    }

    #[test]
    fn blowup_rejects_nonsingular() {
        let x = PolyVectorField::new(vec![
            TS::one(3, 8),
            TS::zero(3, 8),
            TS::zero(3, 8),
        ])
        .unwrap();
        assert!(matches!(
            blowup_divisor_restriction(&x, 1),
            Err(Error::NonsingularOrigin)
        ));
    }

    #[test]
    fn transition_diagonal_example() {
        // z₂∂₂ + 2z₃∂₃ (ν = 1) -> chart 2: -u∂u + v∂v.
        let cf = ChartField {
            chart: 1,
            field: PolyVectorField::new(vec![wv(0), wv(1).scale(&int(2))]).unwrap(),
            nu: 1,
        };
        let t = chart_transition(&cf, 2).unwrap();
        assert!(t.field.component(0).eq_trunc(&wv(0).neg()));
        assert!(t.field.component(1).eq_trunc(&wv(1)));
    }

    #[test]
    fn transition_zero_and_round_trip() {
        let zero = ChartField {
            chart: 1,
            field: PolyVectorField::new(vec![TS::zero(2, EXACT_ORDER), TS::zero(2, EXACT_ORDER)])
                .unwrap(),
            nu: 2,
        };
        for c in [1u8, 2, 3] {
            assert!(chart_transition(&zero, c).unwrap().field.is_zero());
        }
        // Round trip 1 -> 2 -> 1 is the identity on the overlap.
        let x = PolyVectorField::diagonal(&[int(1), int(2), int(3)], 8);
        let rep = blowup_divisor_restriction(&x, 1).unwrap();
        let cf = rep.chart_field.unwrap();
        let there = chart_transition(&cf, 2).unwrap();
        let back = chart_transition(&there, 1).unwrap();
        assert!(back.field.sub(&cf.field).is_zero());
    }

    #[test]
    fn transition_matches_direct_chart_computation() {
        // Divisor field computed in chart 1 then transported equals the
        // direct chart-2 computation.
        let x = PolyVectorField::new(vec![
            xv(1).add(&xv(0)).truncate(8),
            xv(0).scale(&int(3)).truncate(8),
            xv(2).sub(&xv(1)).truncate(8),
        ])
        .unwrap();
        let rep1 = blowup_divisor_restriction(&x, 1).unwrap();
        let rep2 = blowup_divisor_restriction(&x, 2).unwrap();
        let transported = chart_transition(rep1.chart_field.as_ref().unwrap(), 2).unwrap();
        let diff = transported.field.sub(&rep2.chart_field.as_ref().unwrap().field);
        assert!(diff.is_zero(), "difference {:?}", diff);
    }

    #[test]
    fn weak_integral_monomial_pairing() {
        // X = diag(1,2,3), f = x₁x₃/x₂²: <(1,-2,1), (1,2,3)> = 0.
        let x = PolyVectorField::diagonal(&[int(1), int(2), int(3)], EXACT_ORDER);
        let f = RationalFunctionCP2::new(xv(0).mul(&xv(2)), xv(1).pow(2)).unwrap();
        assert!(weak_first_integral_check(&x, &f).unwrap().invariant);

        // Radial kills every degree-0 function.
        let r = PolyVectorField::<GaussRat>::radial(3, EXACT_ORDER);
        let g = RationalFunctionCP2::new(xv(1), xv(0)).unwrap();
        assert!(weak_first_integral_check(&r, &g).unwrap().invariant);

        // X(x₂/x₁) = x₂/x₁ for diag(1,2,3): not invariant.
        assert!(!weak_first_integral_check(&x, &g).unwrap().invariant);

        // Degree mismatch rejected.
        assert!(RationalFunctionCP2::new(xv(0).pow(2), xv(1)).is_err());
    }

    #[test]
    fn projected_cofactor_cross_check() {
        // X = diag(1,2,3), g = x₁ invariant with cofactor 1.
        let x = PolyVectorField::diagonal(&[int(1), int(2), int(3)], EXACT_ORDER);
        let g = xv(0);
        let h = crate::vfield::cofactor(&x, &g).unwrap();
        assert!(projected_cofactor_identity(&x, &g, &h).unwrap());

        // Homogeneous cubic field with invariant plane x₃ = 0.
        let cubic = PolyVectorField::new(vec![
            xv(0).mul(&xv(1)).mul(&xv(2)),
            xv(1).pow(2).mul(&xv(0)),
            xv(2).pow(2).mul(&xv(1)),
        ])
        .unwrap();
        let g3 = xv(2);
        let h3 = crate::vfield::cofactor(&cubic, &g3).unwrap();
        assert!(projected_cofactor_identity(&cubic, &g3, &h3).unwrap());
    }
}
