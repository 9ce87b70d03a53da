//! Invariant algebraic curves of planar polynomial vector fields and the
//! Darboux/rational first-integral assembly.
//!
//! The bilinear relation `X(g) = g·K` is resolved as a finite tree of exact
//! linear solves:
//!
//! * curves through the origin are seeded degree by degree at eigenvectors
//!   of the linear-part Lie operator on homogeneous polynomials (eigenvalue
//!   candidates `<Q, Λ>` = the cofactor constant term), the higher
//!   homogeneous parts of `g` and `K` then solve successive linear systems;
//! * curves missing the origin (`g(0) ≠ 0`, forcing `K(0) = 0`) are found
//!   under a homogeneous-cofactor ansatz: candidate top cofactors come from
//!   the top homogeneous part of the field (its radial multiple, monomial
//!   quotients, and zero), after which the whole system in `g` is linear.
//!
//! The returned list is complete relative to this seeding strategy; caveats
//! encountered on the way (non-semisimple or irrational linear spectra,
//! underdetermined solve steps, branch-cap overflow) are reported rather
//! than silently ignored. Exactness is mandatory: the search refuses the
//! float backend by construction, operating on Gaussian rationals.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linalg::Mat;
use crate::rat::Rat;
use crate::scalar::{GaussRat, Scalar};
use crate::series::{TruncatedSeries, EXACT_ORDER};
use crate::vfield::{cofactor, divide_exact, PolyVectorField};

type TS = TruncatedSeries<GaussRat>;
type Field = PolyVectorField<GaussRat>;

/// An algebraic solution `{g = 0}` with its cofactor: `X(g) = g·K` exactly.
#[derive(Clone, Debug)]
pub struct InvariantCurve {
    pub g: TS,
    pub cofactor: TS,
}

impl InvariantCurve {
    /// Re-normalizes so the leading graded-lex coefficient of `g` is 1.
    fn normalized(g: TS, cofactor: TS) -> Self {
        let lead = g.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(GaussRat::one);
        let inv = lead.inv().expect("nonzero leading coefficient");
        InvariantCurve { g: g.scale(&inv), cofactor }
    }

    fn key(&self) -> String {
        format!("{:?}|{:?}", self.g, self.cofactor)
    }
}

/// Search diagnostics alongside the curve list.
#[derive(Clone, Debug, Default)]
pub struct CurveSearchReport {
    pub curves: Vec<InvariantCurve>,
    pub branches_explored: usize,
    pub branch_overflow: bool,
    pub underdetermined_steps: usize,
    pub caveats: Vec<String>,
}

pub struct SearchConfig {
    pub degree_bound: u32,
    pub branch_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { degree_bound: 2, branch_cap: 256 }
    }
}

/// Exact eigenvalues of a 2x2 Gaussian-rational matrix, when they lie in
/// the Gaussian rationals.
fn eigen2x2(a: &Mat<GaussRat>) -> Option<(GaussRat, GaussRat)> {
    let tr = a.at(0, 0).add(a.at(1, 1));
    let det = a.det();
    let disc = tr.mul(&tr).sub(&det.mul_integer(4));
    let s = disc.sqrt_exact()?;
    let half = GaussRat::real(Rat::new(1, 2));
    Some((tr.add(&s).mul(&half), tr.sub(&s).mul(&half)))
}

/// Homogeneous layers of the field, `parts[p]` of component degree `p`.
fn homogeneous_layers(x: &Field, max_degree: u32) -> Vec<Field> {
    (0..=max_degree).map(|p| x.homogeneous_part(p)).collect()
}

fn monomial(q: &MultiIndex) -> TS {
    TS::monomial(2, EXACT_ORDER, q.clone(), GaussRat::one())
}

/// Collects the degree-`t` coefficients of a polynomial into the row space
/// spanned by `monos`.
fn coeffs_of(p: &TS, monos: &[MultiIndex]) -> Vec<GaussRat> {
    monos.iter().map(|q| p.coeff(q)).collect()
}

/// One cascade step: solve the degree-`t` equation of `X(g) = g·K` for the
/// new blocks `g_t` (if `t <= d`) and `K_{t-κ}` (if in cofactor range).
/// Returns `None` when inconsistent; flags positive-dimensional steps.
#[allow(clippy::too_many_arguments)]
fn cascade_step(
    layers: &[Field],
    gs: &mut Vec<TS>,
    ks: &mut Vec<TS>,
    kappa: u32,
    mu: &GaussRat,
    t: u32,
    d: u32,
    k_max: u32,
    underdetermined: &mut usize,
) -> Option<()> {
    let monos_t = MultiIndex::all_of_degree(2, t);
    let g_unknown = t <= d;
    let k_deg = t as i64 - kappa as i64;
    let k_unknown = k_deg >= 1 && k_deg <= k_max as i64;
    let g_monos = if g_unknown { MultiIndex::all_of_degree(2, t) } else { Vec::new() };
    let k_monos = if k_unknown {
        MultiIndex::all_of_degree(2, k_deg as u32)
    } else {
        Vec::new()
    };

    // Known residual at degree t: Σ_p X_p(g_q) - Σ g_q·K_r over solved
    // blocks.
    let mut known = TS::zero(2, EXACT_ORDER);
    for (p, layer) in layers.iter().enumerate().skip(1) {
        if layer.is_zero() {
            continue;
        }
        let q = t as i64 + 1 - p as i64;
        if q < 0 || q as usize >= gs.len() || (g_unknown && q == t as i64) {
            continue;
        }
        known = known.add(&layer.lie_derivative(&gs[q as usize]));
    }
    for (q, gq) in gs.iter().enumerate() {
        if gq.is_zero() {
            continue;
        }
        let r = t as i64 - q as i64;
        if r < 0 || r as usize >= ks.len() {
            continue;
        }
        // Skip the unknown pairs (t, 0) and (κ, t-κ).
        if g_unknown && q == t as usize {
            continue;
        }
        if k_unknown && r == k_deg {
            continue;
        }
        known = known.sub(&gs[q].mul(&ks[r as usize]));
    }

    let cols = g_monos.len() + k_monos.len();
    let mut rows: Vec<Vec<GaussRat>> = Vec::with_capacity(monos_t.len());
    let g_kappa = gs[kappa as usize].clone();
    for row_m in &monos_t {
        let mut row = Vec::with_capacity(cols);
        for q in &g_monos {
            // (X₁ - μ)(x^Q) contribution to this row monomial.
            let image = layers[1].lie_derivative(&monomial(q)).sub(&monomial(q).scale(mu));
            row.push(image.coeff(row_m));
        }
        for r in &k_monos {
            // -g_κ · x^R contribution.
            let image = g_kappa.mul(&monomial(r)).neg();
            row.push(image.coeff(row_m));
        }
        rows.push(row);
    }
    let mat = if rows.is_empty() {
        Mat::zero(0, cols)
    } else {
        Mat::from_rows(rows)
    };
    let rhs: Vec<GaussRat> = coeffs_of(&known, &monos_t).iter().map(|c| c.neg()).collect();
    let sol = mat.solve(&rhs)?;
    if cols > 0 && !mat.nullspace().is_empty() {
        *underdetermined += 1;
    }
    if g_unknown {
        let mut gt = TS::zero(2, EXACT_ORDER);
        for (c, q) in sol[..g_monos.len()].iter().zip(&g_monos) {
            gt.set_coeff(q.clone(), c.clone());
        }
        gs[t as usize] = gt;
    }
    if k_unknown {
        let mut kt = TS::zero(2, EXACT_ORDER);
        for (c, r) in sol[g_monos.len()..].iter().zip(&k_monos) {
            kt.set_coeff(r.clone(), c.clone());
        }
        ks[k_deg as usize] = kt;
    }
    Some(())
}

fn assemble(parts: &[TS]) -> TS {
    let mut acc = TS::zero(2, EXACT_ORDER);
    for p in parts {
        acc = acc.add(p);
    }
    acc
}

/// Candidate homogeneous top cofactors for the `g(0) ≠ 0` family: the
/// radial multiple of the top layer scaled by each candidate top degree,
/// exact monomial quotients `X_m(c)/c`, and zero.
fn top_cofactor_candidates(top: &Field, m: u32, d: u32) -> Vec<TS> {
    let mut out: Vec<TS> = vec![TS::zero(2, EXACT_ORDER)];
    let mut seen: BTreeSet<String> = out.iter().map(|k| format!("{k:?}")).collect();
    if m < 1 {
        return out;
    }
    let mut push = |k: TS| {
        let key = format!("{k:?}");
        if seen.insert(key) {
            out.push(k);
        }
    };
    // X_m = ρ·R (radial multiple): K_top = δ'·ρ per candidate top degree.
    let x1 = TS::variable(2, EXACT_ORDER, 0);
    let x2 = TS::variable(2, EXACT_ORDER, 1);
    let rho = match (
        divide_exact(top.component(0), &x1),
        divide_exact(top.component(1), &x2),
    ) {
        (Some(r1), Some(r2)) if r1.eq_trunc(&r2) && !r1.is_zero() => Some(r1),
        _ => None,
    };
    if let Some(rho) = rho {
        for delta in 1..=d {
            push(rho.scale(&GaussRat::from_integer(delta as i64)));
        }
    }
    // Monomial tops: K_top = X_m(c)/c when the division is exact.
    for delta in 1..=d {
        for q in MultiIndex::all_of_degree(2, delta) {
            let c = monomial(&q);
            let image = top.lie_derivative(&c);
            if image.is_zero() {
                continue;
            }
            if let Some(k) = divide_exact(&image, &c) {
                push(k);
            }
        }
    }
    out
}

/// Invariant algebraic curves of a planar polynomial field up to the degree
/// bound, with cofactors of degree `<= m - 1` (`m` the field degree).
pub fn invariant_curves(x: &Field, config: &SearchConfig) -> Result<CurveSearchReport> {
    if x.arity() != 2 {
        return Err(Error::BadInput("curve search is planar (arity 2)".into()));
    }
    let d = config.degree_bound;
    if d < 1 {
        return Err(Error::BadInput("degree bound must be at least 1".into()));
    }
    let m = x
        .components()
        .iter()
        .filter_map(|c| c.degree())
        .max()
        .ok_or_else(|| Error::BadInput("zero vector field".into()))?;
    if m < 1 {
        return Err(Error::BadInput("constant vector field".into()));
    }
    let layers = homogeneous_layers(x, m);
    let mut report = CurveSearchReport::default();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut push_curve = |curve: InvariantCurve, report: &mut CurveSearchReport| {
        if seen.insert(curve.key()) {
            report.curves.push(curve);
        }
    };

    // Family 1: curves through the origin, seeded at eigenvectors of the
    // linear-part Lie operator.
    let linear_layer = &layers[1];
    if linear_layer.is_zero() {
        report
            .caveats
            .push("zero linear part: origin-seeded family skipped".into());
    } else {
        let lp = Mat::from_fn(2, 2, |i, j| {
            linear_layer.component(i).coeff(&MultiIndex::unit(2, j))
        });
        match eigen2x2(&lp) {
            None => report.caveats.push(
                "linear-part eigenvalues are not Gaussian-rational: origin-seeded family skipped"
                    .into(),
            ),
            Some((l1, l2)) => {
                'outer: for kappa in 1..=d {
                    // Candidate K(0) values <Q, Λ> over |Q| = κ.
                    let mut mus: Vec<GaussRat> = Vec::new();
                    for q in 0..=kappa {
                        let mu = l1
                            .mul_integer(q as i64)
                            .add(&l2.mul_integer((kappa - q) as i64));
                        if !mus.contains(&mu) {
                            mus.push(mu);
                        }
                    }
                    let monos = MultiIndex::all_of_degree(2, kappa);
                    for mu in mus {
                        // Eigenvectors of the Lie operator for this μ.
                        let op = Mat::from_fn(monos.len(), monos.len(), |i, j| {
                            linear_layer
                                .lie_derivative(&monomial(&monos[j]))
                                .sub(&monomial(&monos[j]).scale(&mu))
                                .coeff(&monos[i])
                        });
                        for v in op.nullspace() {
                            report.branches_explored += 1;
                            if report.branches_explored > config.branch_cap {
                                report.branch_overflow = true;
                                break 'outer;
                            }
                            let mut g_kappa = TS::zero(2, EXACT_ORDER);
                            for (c, q) in v.iter().zip(&monos) {
                                g_kappa.set_coeff(q.clone(), c.clone());
                            }
                            let mut gs =
                                vec![TS::zero(2, EXACT_ORDER); d as usize + 1];
                            let mut ks =
                                vec![TS::zero(2, EXACT_ORDER); m as usize];
                            gs[kappa as usize] = g_kappa;
                            ks[0] = TS::constant(2, EXACT_ORDER, mu.clone());
                            let mut ok = true;
                            for t in kappa + 1..=d + m - 1 {
                                if cascade_step(
                                    &layers,
                                    &mut gs,
                                    &mut ks,
                                    kappa,
                                    &mu,
                                    t,
                                    d,
                                    m - 1,
                                    &mut report.underdetermined_steps,
                                )
                                .is_none()
                                {
                                    ok = false;
                                    break;
                                }
                            }
                            if !ok {
                                continue;
                            }
                            let g = assemble(&gs);
                            let k = assemble(&ks);
                            if verify(x, &g, &k) {
                                push_curve(InvariantCurve::normalized(g, k), &mut report);
                            }
                        }
                    }
                }
            }
        }
    }

    // Family 2: curves with g(0) = 1 (K(0) = 0 forced) under the
    // homogeneous-cofactor ansatz.
    if !report.branch_overflow {
        let candidates = top_cofactor_candidates(&layers[m as usize], m, d);
        'outer2: for k_top in candidates {
            if m == 1 && !k_top.is_zero() {
                continue; // degree-0 cofactor would contradict K(0) = 0
            }
            report.branches_explored += 1;
            if report.branches_explored > config.branch_cap {
                report.branch_overflow = true;
                break;
            }
            for sol in solve_affine_family(&layers, &k_top, d, m) {
                let g = sol;
                if g.degree().map_or(true, |dg| dg == 0) {
                    continue; // constant solutions are not curves
                }
                if verify(x, &g, &k_top) {
                    push_curve(
                        InvariantCurve::normalized(g, k_top.clone()),
                        &mut report,
                    );
                }
                if report.curves.len() > config.branch_cap {
                    report.branch_overflow = true;
                    break 'outer2;
                }
            }
        }
    }

    report
        .curves
        .sort_by_key(|c| (c.g.lowest_degree().unwrap_or(0), format!("{:?}", c.g)));
    Ok(report)
}

/// Joint linear solve for `g = 1 + g₁ + … + g_d` with the cofactor fixed:
/// returns the particular solution and its translates by nullspace basis
/// directions (each a genuine solution of the affine system).
fn solve_affine_family(layers: &[Field], k: &TS, d: u32, m: u32) -> Vec<TS> {
    let unknown_monos: Vec<MultiIndex> = MultiIndex::all_up_to(2, 1, d);
    let one = TS::one(2, EXACT_ORDER);
    // Residual rows for every degree 1..=d+m-1 of X(g) - g·K with
    // g = 1 + Σ unknowns.
    let mut eq_monos: Vec<MultiIndex> = Vec::new();
    for t in 1..=d + m - 1 {
        eq_monos.extend(MultiIndex::all_of_degree(2, t));
    }
    let image = |g_part: &TS| -> TS {
        let mut acc = TS::zero(2, EXACT_ORDER);
        for layer in layers.iter().skip(1) {
            if !layer.is_zero() {
                acc = acc.add(&layer.lie_derivative(g_part));
            }
        }
        acc.sub(&g_part.mul(k))
    };
    let columns: Vec<TS> = unknown_monos.iter().map(|q| image(&monomial(q))).collect();
    let rhs_poly = image(&one).neg();
    let rows: Vec<Vec<GaussRat>> = eq_monos
        .iter()
        .map(|rm| columns.iter().map(|c| c.coeff(rm)).collect())
        .collect();
    let rhs: Vec<GaussRat> = eq_monos.iter().map(|rm| rhs_poly.coeff(rm)).collect();
    let mat = Mat::from_rows(rows);
    let Some(particular) = mat.solve(&rhs) else {
        return Vec::new();
    };
    let to_series = |v: &[GaussRat]| -> TS {
        let mut g = one.clone();
        for (c, q) in v.iter().zip(&unknown_monos) {
            g.set_coeff(q.clone(), c.clone());
        }
        g
    };
    let mut out = vec![to_series(&particular)];
    for dir in mat.nullspace() {
        let shifted: Vec<GaussRat> = particular
            .iter()
            .zip(&dir)
            .map(|(a, b)| a.add(b))
            .collect();
        out.push(to_series(&shifted));
    }
    out
}

/// Independent re-check through the cofactor operation.
fn verify(x: &Field, g: &TS, k: &TS) -> bool {
    if g.is_zero() {
        return false;
    }
    match cofactor(x, g) {
        Some(q) => q.eq_trunc(k),
        None => false,
    }
}

/// A Darboux/rational first integral `Π g_i^{c_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegralKind {
    /// All exponents scalable to integers; the integral is a rational
    /// function (this is what the exact pipeline always produces).
    Rational,
    /// Genuinely non-integer rational exponent data.
    Darboux,
}

#[derive(Clone, Debug)]
pub struct DarbouxIntegral {
    pub exponents: Vec<Rat>,
    pub integer_exponents: Option<Vec<i64>>,
    pub kind: IntegralKind,
    /// `Π g_i^{max(c_i, 0)}`.
    pub numerator: TS,
    /// `Π g_i^{max(-c_i, 0)}`.
    pub denominator: TS,
}

/// Searches a rational vector `c ≠ 0` with `Σ c_i·K_i ≡ 0` and assembles
/// the first integral `Π g_i^{c_i}`; `None` when the cofactor nullspace is
/// trivial. Every curve is re-verified against the field first.
pub fn darboux_assemble(
    x: &Field,
    curves: &[InvariantCurve],
) -> Result<Option<DarbouxIntegral>> {
    if curves.is_empty() {
        return Err(Error::BadInput("empty curve list".into()));
    }
    for c in curves {
        if !verify(x, &c.g, &c.cofactor) {
            return Err(Error::BadInput(
                "curve does not belong to this field (X(g) ≠ g·K)".into(),
            ));
        }
    }
    // Stack the cofactor coefficients.
    let mut monos: Vec<MultiIndex> = curves
        .iter()
        .flat_map(|c| c.cofactor.terms().map(|(q, _)| q.clone()).collect::<Vec<_>>())
        .collect();
    monos.sort();
    monos.dedup();
    let rows: Vec<Vec<GaussRat>> = monos
        .iter()
        .map(|q| curves.iter().map(|c| c.cofactor.coeff(q)).collect())
        .collect();
    let mat = if rows.is_empty() {
        Mat::zero(0, curves.len())
    } else {
        Mat::from_rows(rows)
    };
    let null = mat.nullspace();
    let Some(c) = null.into_iter().find(|v| v.iter().all(|e| e.im.is_zero())) else {
        return Ok(None);
    };
    let mut exponents: Vec<Rat> = c.iter().map(|e| e.re.clone()).collect();
    // Deterministic sign: first nonzero exponent positive.
    if exponents.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_negative()) {
        for e in &mut exponents {
            *e = e.neg();
        }
    }
    // Scale to coprime integers.
    let mut denom_lcm = num::bigint::BigInt::from(1);
    for e in &exponents {
        let (_, den) = e.numer_denom();
        denom_lcm = num::Integer::lcm(&denom_lcm, &den);
    }
    let scale = Rat::from_bigint(denom_lcm);
    let scaled: Option<Vec<i64>> = exponents
        .iter()
        .map(|e| {
            let v = e.mul(&scale);
            let (n, d) = v.numer_denom();
            if d == num::bigint::BigInt::from(1) {
                n.try_into().ok()
            } else {
                None
            }
        })
        .collect();
    let scaled = scaled.map(|mut v| {
        let mut g = 0i64;
        for &e in &v {
            g = num::integer::gcd(g, e.abs());
        }
        if g > 1 {
            for e in &mut v {
                *e /= g;
            }
        }
        v
    });
    let kind = if scaled.is_some() {
        IntegralKind::Rational
    } else {
        IntegralKind::Darboux
    };
    let ints = scaled.clone().unwrap_or_else(|| {
        exponents
            .iter()
            .map(|e| {
                let (n, _) = e.numer_denom();
                n.try_into().unwrap_or(0)
            })
            .collect()
    });
    let mut numerator = TS::one(2, EXACT_ORDER);
    let mut denominator = TS::one(2, EXACT_ORDER);
    for (curve, &e) in curves.iter().zip(&ints) {
        if e > 0 {
            numerator = numerator.mul(&curve.g.pow(e as u32));
        } else if e < 0 {
            denominator = denominator.mul(&curve.g.pow((-e) as u32));
        }
    }
    // Logarithmic-derivative verification: Σ c_i·K_i ≡ 0 exactly, and the
    // cleared residual X(num)·den - num·X(den) must vanish.
    let mut combo = TS::zero(2, EXACT_ORDER);
    for (curve, &e) in curves.iter().zip(&ints) {
        combo = combo.add(&curve.cofactor.scale(&GaussRat::from_integer(e)));
    }
    assert!(combo.is_zero(), "cofactor combination must vanish");
    let residual = denominator
        .mul(&x.lie_derivative(&numerator))
        .sub(&numerator.mul(&x.lie_derivative(&denominator)));
    assert!(residual.is_zero(), "first-integral residual must vanish");
    Ok(Some(DarbouxIntegral {
        exponents,
        integer_exponents: scaled,
        kind,
        numerator,
        denominator,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> GaussRat {
        GaussRat::from_integer(n)
    }

    fn xv(i: usize) -> TS {
        TS::variable(2, EXACT_ORDER, i)
    }

    fn diag(p: i64, q: i64) -> Field {
        PolyVectorField::diagonal(&[int(p), int(q)], EXACT_ORDER)
    }

    #[test]
    fn coordinate_axes_found() {
        let x = diag(1, 2);
        let rep = invariant_curves(&x, &SearchConfig { degree_bound: 1, branch_cap: 256 })
            .unwrap();
        assert_eq!(rep.curves.len(), 2, "curves: {:?}", rep.curves);
        assert!(rep.curves[0].g.eq_trunc(&xv(0)));
        assert!(rep.curves[0].cofactor.eq_trunc(&TS::constant(2, EXACT_ORDER, int(1))));
        assert!(rep.curves[1].g.eq_trunc(&xv(1)));
        assert!(rep.curves[1].cofactor.eq_trunc(&TS::constant(2, EXACT_ORDER, int(2))));
    }

    #[test]
    fn nonlinear_cofactor_found() {
        // X = x∂x + y(1+x)∂y: curves (x, 1) and (y, 1+x).
        let field = PolyVectorField::new(vec![
            xv(0),
            xv(1).add(&xv(0).mul(&xv(1))),
        ])
        .unwrap();
        let rep =
            invariant_curves(&field, &SearchConfig { degree_bound: 1, branch_cap: 256 })
                .unwrap();
        assert_eq!(rep.curves.len(), 2);
        let ys = rep
            .curves
            .iter()
            .find(|c| c.g.eq_trunc(&xv(1)))
            .expect("y axis found");
        assert!(ys
            .cofactor
            .eq_trunc(&TS::one(2, EXACT_ORDER).add(&xv(0))));
    }

    #[test]
    fn circle_limit_cycle_found() {
        // The cubic system with the invariant unit circle.
        let x = xv(0);
        let y = xv(1);
        let r2 = x.pow(2).add(&y.pow(2));
        let unit = TS::one(2, EXACT_ORDER).sub(&r2);
        let field = PolyVectorField::new(vec![
            y.neg().add(&x.mul(&unit)),
            x.add(&y.mul(&unit)),
        ])
        .unwrap();
        let rep =
            invariant_curves(&field, &SearchConfig { degree_bound: 2, branch_cap: 256 })
                .unwrap();
        let circle = rep
            .curves
            .iter()
            .find(|c| c.g.eq_trunc(&r2.sub(&TS::one(2, EXACT_ORDER))))
            .unwrap_or_else(|| panic!("circle not found in {:?}", rep.curves));
        assert!(circle.cofactor.eq_trunc(&r2.scale(&int(-2))));
    }

    #[test]
    fn assemble_coprime_pair() {
        let x = diag(1, 2);
        let rep = invariant_curves(&x, &SearchConfig { degree_bound: 1, branch_cap: 256 })
            .unwrap();
        let integral = darboux_assemble(&x, &rep.curves).unwrap().unwrap();
        assert_eq!(integral.kind, IntegralKind::Rational);
        assert_eq!(integral.integer_exponents, Some(vec![2, -1]));
        assert!(integral.numerator.eq_trunc(&xv(0).pow(2)));
        assert!(integral.denominator.eq_trunc(&xv(1)));
    }

    #[test]
    fn assemble_single_curve_trivial_nullspace() {
        let x = diag(1, 2);
        let rep = invariant_curves(&x, &SearchConfig { degree_bound: 1, branch_cap: 256 })
            .unwrap();
        let only = vec![rep.curves[0].clone()];
        assert!(darboux_assemble(&x, &only).unwrap().is_none());
    }

    #[test]
    fn assemble_rejects_mismatched_field() {
        let x = diag(1, 2);
        let other = diag(3, 5);
        let rep = invariant_curves(&x, &SearchConfig { degree_bound: 1, branch_cap: 256 })
            .unwrap();
        assert!(darboux_assemble(&other, &rep.curves).is_err());
    }

    #[test]
    fn assemble_invariant_under_curve_rescaling() {
        let x = diag(3, 7);
        let rep = invariant_curves(&x, &SearchConfig { degree_bound: 1, branch_cap: 256 })
            .unwrap();
        let scaled: Vec<InvariantCurve> = rep
            .curves
            .iter()
            .map(|c| InvariantCurve {
                g: c.g.scale(&GaussRat::real(Rat::new(5, 3))),
                cofactor: c.cofactor.clone(),
            })
            .collect();
        let a = darboux_assemble(&x, &rep.curves).unwrap().unwrap();
        let b = darboux_assemble(&x, &scaled).unwrap().unwrap();
        assert_eq!(a.integer_exponents, b.integer_exponents);
    }

    #[test]
    fn general_coprime_law() {
        // X = p·x∂x + q·y∂y gives x^q / y^p.
        for (p, q) in [(2, 3), (3, 4), (5, 2)] {
            let x = diag(p, q);
            let rep =
                invariant_curves(&x, &SearchConfig { degree_bound: 1, branch_cap: 256 })
                    .unwrap();
            let integral = darboux_assemble(&x, &rep.curves).unwrap().unwrap();
            assert_eq!(integral.integer_exponents, Some(vec![q, -p]));
        }
    }

    #[test]
    fn cofactor_degree_bound_holds() {
        let x = xv(0);
        let y = xv(1);
        let field = PolyVectorField::new(vec![
            x.add(&y.pow(2)),
            y.sub(&x.mul(&y)),
        ])
        .unwrap();
        let m = 2u32;
        let rep =
            invariant_curves(&field, &SearchConfig { degree_bound: 3, branch_cap: 256 })
                .unwrap();
        for c in &rep.curves {
            assert!(c.cofactor.degree().unwrap_or(0) <= m - 1);
        }
    }
}
