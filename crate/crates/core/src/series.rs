//! Truncated multivariate formal power series.
//!
//! A `TruncatedSeries` stores the coefficients of a formal series up to an
//! explicit truncation degree (its *order*). Invariants:
//!
//! - every stored index has degree `<=` the order;
//! - no stored coefficient is a structural zero;
//! - every stored index has the series' arity.
//!
//! The order is a *certificate*: coefficients up to it are exact (for the
//! exact backends) relative to the inputs. Binary operations propagate the
//! weakest certificate that is actually implied: sums take the minimum,
//! products sharpen the minimum by the co-factor's valuation, and
//! composition takes the minimum since the degree-k result coefficients
//! depend only on the k-jets of both sides. The sentinel [`EXACT_ORDER`]
//! marks exact polynomials, for which no certificate is ever lost.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::scalar::Scalar;

/// Order sentinel for exact polynomials (no truncation applied).
pub const EXACT_ORDER: u32 = u32::MAX;

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<S: Scalar> {
    arity: usize,
    order: u32,
    terms: BTreeMap<MultiIndex, S>,
}

fn order_minus(order: u32, k: u32) -> u32 {
    if order == EXACT_ORDER {
        EXACT_ORDER
    } else {
        order.saturating_sub(k)
    }
}

fn order_plus(order: u32, k: u32) -> u32 {
    if order == EXACT_ORDER {
        EXACT_ORDER
    } else {
        order.saturating_add(k)
    }
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn zero(arity: usize, order: u32) -> Self {
        TruncatedSeries { arity, order, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, order: u32, value: S) -> Self {
        let mut s = Self::zero(arity, order);
        s.set_coeff(MultiIndex::zero(arity), value);
        s
    }

    pub fn one(arity: usize, order: u32) -> Self {
        Self::constant(arity, order, S::one())
    }

    /// The coordinate series `x_i` (0-based `i`).
    pub fn variable(arity: usize, order: u32, i: usize) -> Self {
        assert!(i < arity, "variable index out of range");
        let mut s = Self::zero(arity, order);
        s.set_coeff(MultiIndex::unit(arity, i), S::one());
        s
    }

    pub fn monomial(arity: usize, order: u32, index: MultiIndex, coeff: S) -> Self {
        assert_eq!(index.arity(), arity);
        let mut s = Self::zero(arity, order);
        s.set_coeff(index, coeff);
        s
    }

    pub fn from_terms<I>(arity: usize, order: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, S)>,
    {
        let mut s = Self::zero(arity, order);
        for (idx, c) in terms {
            assert_eq!(idx.arity(), arity, "term arity mismatch");
            let cur = s.coeff(&idx);
            s.set_coeff(idx, cur.add(&c));
        }
        s
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &S)> {
        self.terms.iter()
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&MultiIndex, &S)> {
        self.terms.iter().next_back()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, index: &MultiIndex) -> S {
        self.terms.get(index).cloned().unwrap_or_else(S::zero)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&MultiIndex::zero(self.arity))
    }

    /// Inserts (or removes) a coefficient, keeping the invariants.
    pub fn set_coeff(&mut self, index: MultiIndex, value: S) {
        debug_assert_eq!(index.arity(), self.arity);
        if value.is_storage_zero() || index.degree() > self.order {
            self.terms.remove(&index);
        } else {
            self.terms.insert(index, value);
        }
    }

    /// True when no coefficients are stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Backend zero test: exact emptiness, or all coefficients within the
    /// float tolerance.
    pub fn is_zero_backend(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Largest coefficient magnitude, for residual reporting.
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs())
            .fold(0.0, f64::max)
    }

    /// Lowest degree of a nonzero term (the valuation), `None` for zero.
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|i| i.degree())
    }

    /// Highest stored degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|i| i.degree())
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedSeries<T> {
        let mut out = TruncatedSeries::zero(self.arity, self.order);
        for (idx, c) in &self.terms {
            out.set_coeff(idx.clone(), f(c));
        }
        out
    }

    /// Re-truncates to the given order (certificate can only weaken).
    pub fn truncate(&self, order: u32) -> Self {
        let mut out = Self::zero(self.arity, order.min(self.order));
        for (idx, c) in &self.terms {
            if idx.degree() <= out.order {
                out.terms.insert(idx.clone(), c.clone());
            }
        }
        out
    }

    /// The k-jet: all terms of degree `> k` dropped. The result is an exact
    /// polynomial whenever `k` is within this series' certificate.
    pub fn jet(&self, k: u32) -> Result<Self> {
        if k > self.order {
            return Err(Error::BadInput(format!(
                "jet degree {k} exceeds truncation order {}",
                self.order
            )));
        }
        let mut out = Self::zero(self.arity, EXACT_ORDER);
        for (idx, c) in &self.terms {
            if idx.degree() <= k {
                out.terms.insert(idx.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Terms of degree exactly `d`, as an exact polynomial.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.arity, EXACT_ORDER);
        for (idx, c) in &self.terms {
            if idx.degree() == d {
                out.terms.insert(idx.clone(), c.clone());
            }
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.lowest_degree(), self.degree()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in add");
        let order = self.order.min(rhs.order);
        let mut out = Self::zero(self.arity, order);
        for (idx, c) in self.terms.iter().chain(rhs.terms.iter()) {
            if idx.degree() > order {
                continue;
            }
            let cur = out.coeff(idx);
            out.set_coeff(idx.clone(), cur.add(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.arity, self.order);
        for (idx, c) in &self.terms {
            out.terms.insert(idx.clone(), c.neg());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self::zero(self.arity, self.order);
        for (idx, c) in &self.terms {
            out.set_coeff(idx.clone(), c.mul(factor));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.arity, rhs.arity, "arity mismatch in mul");
        // Certificate: the unknown tail of one factor meets the other factor
        // only from its valuation upward.
        let va = self.lowest_degree().unwrap_or(0);
        let vb = rhs.lowest_degree().unwrap_or(0);
        let order = order_plus(self.order, vb).min(order_plus(rhs.order, va));
        let mut out = Self::zero(self.arity, order);
        let (small, large) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        for (ia, ca) in &small.terms {
            let da = ia.degree();
            if da > order {
                continue;
            }
            for (ib, cb) in &large.terms {
                if da + ib.degree() > order {
                    continue;
                }
                let idx = ia.add(ib);
                let prod = ca.mul(cb);
                let cur = out.coeff(&idx);
                out.set_coeff(idx, cur.add(&prod));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.arity, self.order);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to `x_i` (0-based). Certified one
    /// degree lower than the input.
    pub fn derive(&self, i: usize) -> Result<Self> {
        if i >= self.arity {
            return Err(Error::IndexOutOfRange { index: i + 1, arity: self.arity });
        }
        let mut out = Self::zero(self.arity, order_minus(self.order, 1));
        for (idx, c) in &self.terms {
            let q = idx.0[i];
            if q == 0 {
                continue;
            }
            let mut e = idx.0.clone();
            e[i] = q - 1;
            out.set_coeff(MultiIndex::new(e), c.mul_integer(q as i64));
        }
        Ok(out)
    }

    /// Substitutes the tuple `g` into this series. Every component of `g`
    /// must vanish at the origin, so the result is well defined
    /// degree-by-degree; only the jets up to the common order matter.
    pub fn compose(&self, g: &[TruncatedSeries<S>]) -> Result<Self> {
        if g.len() != self.arity {
            return Err(Error::BadInput(format!(
                "composition needs {} components, got {}",
                self.arity,
                g.len()
            )));
        }
        let target_arity = match g.first() {
            Some(c) => c.arity(),
            None => return Ok(Self::constant(0, self.order, self.constant_term())),
        };
        let mut order = self.order;
        for c in g {
            if c.arity() != target_arity {
                return Err(Error::BadInput("mixed arities in composition tuple".into()));
            }
            if !c.constant_term().is_storage_zero() {
                return Err(Error::NonzeroConstantTerm);
            }
            order = order.min(c.order());
        }

        // Cached powers of each component, grown on demand. Component i has
        // valuation >= 1, so its q-th power has valuation >= q and dies past
        // the truncation order.
        let mut powers: Vec<Vec<TruncatedSeries<S>>> = g
            .iter()
            .map(|c| vec![TruncatedSeries::one(target_arity, order), c.truncate(order)])
            .collect();
        let mut out = Self::zero(target_arity, order);
        for (idx, coeff) in &self.terms {
            if idx.degree() > order {
                continue;
            }
            let mut prod = TruncatedSeries::one(target_arity, order);
            let mut first = true;
            for (i, &q) in idx.0.iter().enumerate() {
                if q == 0 {
                    continue;
                }
                let q = q as usize;
                while powers[i].len() <= q {
                    let last = powers[i].last().unwrap();
                    let next = last.mul(&powers[i][1]);
                    powers[i].push(next);
                }
                prod = if first {
                    powers[i][q].clone()
                } else {
                    prod.mul(&powers[i][q])
                };
                first = false;
            }
            out = out.add(&prod.scale(coeff));
        }
        Ok(out)
    }

    /// Multiplicative inverse, defined when the constant term is a unit:
    /// `1/f = (1/c) Σ (1 - f/c)^k` summed to the truncation order.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        let c_inv = c.inv().ok_or(Error::NotInvertible)?;
        if self.order == EXACT_ORDER {
            // A genuine series inverse needs a truncation to stop at.
            return Err(Error::BadInput(
                "series inverse needs a finite truncation order".into(),
            ));
        }
        let u = Self::one(self.arity, self.order).sub(&self.scale(&c_inv));
        debug_assert!(u.lowest_degree().map_or(true, |d| d >= 1));
        let mut acc = Self::one(self.arity, self.order);
        for _ in 0..self.order {
            acc = acc.mul(&u).add(&Self::one(self.arity, self.order));
        }
        Ok(acc.scale(&c_inv))
    }

    /// Evaluates at a point (exactly for exact backends).
    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.arity, "evaluation point arity mismatch");
        let max_exp: Vec<u32> = (0..self.arity)
            .map(|i| self.terms.keys().map(|idx| idx.0[i]).max().unwrap_or(0))
            .collect();
        let pow_table: Vec<Vec<S>> = point
            .iter()
            .zip(&max_exp)
            .map(|(x, &m)| {
                let mut v = Vec::with_capacity(m as usize + 1);
                v.push(S::one());
                for k in 1..=m {
                    let next = v[k as usize - 1].mul(x);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = S::zero();
        for (idx, c) in &self.terms {
            let mut t = c.clone();
            for (i, &q) in idx.0.iter().enumerate() {
                if q > 0 {
                    t = t.mul(&pow_table[i][q as usize]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Coefficient-wise equality of all terms of degree `<= k`, with the
    /// backend's zero semantics.
    pub fn eq_up_to(&self, rhs: &Self, k: u32) -> bool {
        if self.arity != rhs.arity {
            return false;
        }
        self.sub(rhs)
            .terms
            .iter()
            .all(|(idx, c)| idx.degree() > k || c.is_zero())
    }

    /// Equality up to the common certificate.
    pub fn eq_trunc(&self, rhs: &Self) -> bool {
        self.eq_up_to(rhs, self.order.min(rhs.order))
    }
}

/// Jacobian matrix `(∂f_i/∂x_j)` of a tuple of series.
pub fn jacobian<S: Scalar>(fs: &[TruncatedSeries<S>]) -> Result<Vec<Vec<TruncatedSeries<S>>>> {
    fs.iter()
        .map(|f| (0..f.arity()).map(|j| f.derive(j)).collect())
        .collect()
}

/// Determinant of a square matrix of series by Leibniz expansion; the
/// dimensions stay small in this toolkit.
pub fn det_series<S: Scalar>(m: &[Vec<TruncatedSeries<S>>]) -> TruncatedSeries<S> {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|row| row.len() == n), "square matrix required");
    let arity = m[0][0].arity();
    let order = m
        .iter()
        .flat_map(|row| row.iter().map(|s| s.order()))
        .min()
        .unwrap();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = TruncatedSeries::zero(arity, order);
    permute(&mut perm, 0, 1, &mut |p, sign| {
        let mut term = m[0][p[0]].clone();
        for (i, &pi) in p.iter().enumerate().skip(1) {
            term = term.mul(&m[i][pi]);
        }
        if sign < 0 {
            term = term.neg();
        }
        acc = acc.add(&term);
    });
    acc.truncate(order)
}

fn permute(p: &mut Vec<usize>, k: usize, sign: i32, visit: &mut impl FnMut(&[usize], i32)) {
    let n = p.len();
    if k == n {
        visit(p, sign);
        return;
    }
    for i in k..n {
        p.swap(k, i);
        let s = if i == k { sign } else { -sign };
        permute(p, k + 1, s, visit);
        p.swap(k, i);
    }
}

/// Outcome of the top-wedge computation `df_1 ∧ … ∧ df_n`.
#[derive(Clone, Debug)]
pub struct WedgeReport<S: Scalar> {
    /// The Jacobian determinant, certified one degree below the inputs.
    pub determinant: TruncatedSeries<S>,
    /// `df_1 ∧ … ∧ df_n` is not identically zero (up to the certificate).
    pub generically_transverse: bool,
    /// The wedge does not vanish at the origin.
    pub transverse_at_origin: bool,
}

/// Jacobian determinant of `n` series in `n` variables, with the two
/// transversality verdicts.
pub fn wedge_top<S: Scalar>(fs: &[TruncatedSeries<S>]) -> Result<WedgeReport<S>> {
    let n = match fs.first() {
        Some(f) => f.arity(),
        None => return Err(Error::WedgeCountMismatch { expected: 1, got: 0 }),
    };
    if fs.len() != n {
        return Err(Error::WedgeCountMismatch { expected: n, got: fs.len() });
    }
    let jac = jacobian(fs)?;
    let det = det_series(&jac);
    Ok(WedgeReport {
        generically_transverse: !det.is_zero_backend(),
        transverse_at_origin: !det.constant_term().is_zero(),
        determinant: det,
    })
}

impl<S: Scalar> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if idx.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})·{idx}")?;
            }
        }
        if self.order != EXACT_ORDER {
            write!(f, " + O(deg {})", self.order + 1)?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
