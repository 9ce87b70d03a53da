//! Exact eigenvalue arithmetic and resonance analysis.
//!
//! Eigenvalues live in [`PolarRational`]: `r·e^{2πi·t}` with rational
//! magnitude `r > 0` and rational turn `t ∈ [0,1)`. The set is closed under
//! multiplication and integer powers and makes the resonance test
//! `Λ^Q = 1` decidable. Irrational angles (Cremer-type) exist only on the
//! float backend with eps-resonance and are flagged as numerical there.

use num::bigint::BigInt;
use num::{Integer, Signed, Zero};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::index::MultiIndex;
use crate::linalg::{integer_kernel, Mat};
use crate::rat::Rat;
use crate::scalar::{Cyclo, GaussRat, Scalar};
use crate::series::TruncatedSeries;

/// Exact complex scalar `magnitude · e^{2πi·turn}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolarRational {
    magnitude: Rat,
    turn: Rat,
}

impl PolarRational {
    pub fn new(magnitude: Rat, turn: Rat) -> Result<Self> {
        if magnitude.is_zero() || magnitude.is_negative() {
            return Err(Error::BadInput("magnitude must be positive".into()));
        }
        Ok(PolarRational { magnitude, turn: turn.rem_one() })
    }

    pub fn positive_real(r: Rat) -> Result<Self> {
        Self::new(r, Rat::zero())
    }

    /// Exact representation of a nonzero rational (negative values get a
    /// half turn).
    pub fn from_rational(r: &Rat) -> Result<Self> {
        if r.is_negative() {
            Self::new(r.neg(), Rat::new(1, 2))
        } else {
            Self::new(r.clone(), Rat::zero())
        }
    }

    /// Axis-aligned Gaussian rationals are polar-rational; anything with
    /// both parts nonzero has an irrational magnitude or turn.
    pub fn try_from_gauss(g: &GaussRat) -> Option<Self> {
        if g.is_zero() {
            None
        } else if g.im.is_zero() {
            Self::from_rational(&g.re).ok()
        } else if g.re.is_zero() {
            let quarter = if g.im.is_negative() {
                Rat::new(3, 4)
            } else {
                Rat::new(1, 4)
            };
            Self::new(g.im.abs(), quarter).ok()
        } else {
            None
        }
    }

    pub fn one() -> Self {
        PolarRational { magnitude: Rat::one(), turn: Rat::zero() }
    }

    pub fn root_of_unity(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadInput("root-of-unity order must be positive".into()));
        }
        Self::new(Rat::one(), Rat::new(1, k as i64))
    }

    pub fn magnitude(&self) -> &Rat {
        &self.magnitude
    }

    pub fn turn(&self) -> &Rat {
        &self.turn
    }

    pub fn is_one(&self) -> bool {
        self.magnitude.is_one() && self.turn.is_zero()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        PolarRational {
            magnitude: self.magnitude.mul(&rhs.magnitude),
            turn: self.turn.add(&rhs.turn).rem_one(),
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        PolarRational {
            magnitude: self.magnitude.pow(e),
            turn: self.turn.mul(&Rat::integer(e)).rem_one(),
        }
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::from_polar(
            self.magnitude.to_f64(),
            2.0 * std::f64::consts::PI * self.turn.to_f64(),
        )
    }

    /// Exact Gaussian-rational value, when the turn is a multiple of 1/4.
    pub fn to_gauss(&self) -> Option<GaussRat> {
        let q = self.turn.mul(&Rat::integer(4));
        if !q.is_integer() {
            return None;
        }
        let (n, _) = q.numer_denom();
        let k: i64 = n.try_into().ok()?;
        let m = self.magnitude.clone();
        Some(match k.rem_euclid(4) {
            0 => GaussRat::real(m),
            1 => GaussRat::new(Rat::zero(), m),
            2 => GaussRat::real(m.neg()),
            _ => GaussRat::new(Rat::zero(), m.neg()),
        })
    }

    /// Exact value in Q(ζ₁₂), when the turn has denominator dividing 12.
    pub fn to_cyclo(&self) -> Option<Cyclo> {
        let q = self.turn.mul(&Rat::integer(12));
        if !q.is_integer() {
            return None;
        }
        let (n, _) = q.numer_denom();
        let k: i64 = n.try_into().ok()?;
        let root = Cyclo::zeta12().pow_u32(k.rem_euclid(12) as u32);
        Some(root.mul(&Cyclo::from_rat(&self.magnitude)))
    }
}

impl std::fmt::Display for PolarRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.turn.is_zero() {
            write!(f, "{}", self.magnitude)
        } else {
            write!(f, "{}·e^(2πi·{})", self.magnitude, self.turn)
        }
    }
}

impl std::fmt::Debug for PolarRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

/// The eigenvalue tuple Λ = (λ₁, …, λₙ).
#[derive(Clone, Debug, PartialEq)]
pub struct EigenTuple {
    pub values: Vec<PolarRational>,
}

impl EigenTuple {
    pub fn new(values: Vec<PolarRational>) -> Self {
        EigenTuple { values }
    }

    pub fn arity(&self) -> usize {
        self.values.len()
    }

    /// `Λ^Q` by exact multiplicative arithmetic.
    pub fn power(&self, q: &MultiIndex) -> PolarRational {
        assert_eq!(q.arity(), self.arity());
        let mut acc = PolarRational::one();
        for (v, &e) in self.values.iter().zip(&q.0) {
            if e > 0 {
                acc = acc.mul(&v.pow(e as i64));
            }
        }
        acc
    }

    /// Direct exact test `Λ^Q = 1`.
    pub fn is_resonant(&self, q: &MultiIndex) -> bool {
        self.power(q).is_one()
    }
}

/// Resonant multi-indices up to a degree bound together with a basis of the
/// full resonance lattice `{Q ∈ ℤⁿ : Λ^Q = 1}`.
#[derive(Clone, Debug)]
pub struct ResonanceReport {
    pub resonant_indices: Vec<MultiIndex>,
    pub lattice_basis: Vec<Vec<i64>>,
}

fn factor_big(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut m: u64 = n
        .abs()
        .try_into()
        .map_err(|_| Error::BadInput("magnitude too large to factor".into()))?;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

/// The defining integer-linear data of the resonance lattice: one row per
/// prime carrying the valuations of the magnitudes, plus the turn congruence
/// `Σ q_i·(t_i·D) ≡ 0 (mod D)` over the common denominator `D`.
struct LatticeEquations {
    prime_rows: Vec<Vec<i64>>,
    turn_scaled: Vec<i64>,
    turn_modulus: i64,
}

impl LatticeEquations {
    fn build(lambda: &EigenTuple) -> Result<Self> {
        let n = lambda.arity();
        // Prime support of all magnitudes.
        let mut primes: Vec<u64> = Vec::new();
        let mut vals: Vec<Vec<(u64, i32)>> = Vec::with_capacity(n);
        for v in &lambda.values {
            let (num, den) = v.magnitude().numer_denom();
            let mut entry = Vec::new();
            for (p, e) in factor_big(&num)? {
                entry.push((p, e as i32));
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
            for (p, e) in factor_big(&den)? {
                entry.push((p, -(e as i32)));
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
            vals.push(entry);
        }
        primes.sort_unstable();
        let prime_rows = primes
            .iter()
            .map(|&p| {
                (0..n)
                    .map(|i| {
                        vals[i]
                            .iter()
                            .find(|(q, _)| *q == p)
                            .map_or(0, |(_, e)| *e as i64)
                    })
                    .collect()
            })
            .collect();
        // Common denominator of the turns.
        let mut d = BigInt::from(1);
        for v in &lambda.values {
            let (_, den) = v.turn().numer_denom();
            d = d.lcm(&den);
        }
        let turn_modulus: i64 = d
            .clone()
            .try_into()
            .map_err(|_| Error::BadInput("turn denominators too large".into()))?;
        let turn_scaled = lambda
            .values
            .iter()
            .map(|v| {
                let (num, den) = v.turn().numer_denom();
                let scaled = num * (&d / den);
                scaled.try_into().map_err(|_| Error::BadInput("turn too large".into()))
            })
            .collect::<Result<Vec<i64>>>()?;
        Ok(LatticeEquations { prime_rows, turn_scaled, turn_modulus })
    }

    /// Lattice membership by the integer-linear route.
    fn contains(&self, q: &[i64]) -> bool {
        for row in &self.prime_rows {
            let dot: i64 = row.iter().zip(q).map(|(a, b)| a * b).sum();
            if dot != 0 {
                return false;
            }
        }
        let dot: i64 = self.turn_scaled.iter().zip(q).map(|(a, b)| a * b).sum();
        dot.rem_euclid(self.turn_modulus) == 0
    }

    /// Basis of the lattice, via the integer kernel of the stacked system
    /// with one auxiliary multiplier column for the congruence.
    fn basis(&self, n: usize) -> Vec<Vec<i64>> {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for row in &self.prime_rows {
            let mut r: Vec<BigInt> = row.iter().map(|&v| BigInt::from(v)).collect();
            r.push(BigInt::zero());
            rows.push(r);
        }
        let mut turn_row: Vec<BigInt> =
            self.turn_scaled.iter().map(|&v| BigInt::from(v)).collect();
        turn_row.push(BigInt::from(-self.turn_modulus));
        rows.push(turn_row);
        integer_kernel(&rows)
            .into_iter()
            .map(|v| {
                v[..n]
                    .iter()
                    .map(|b| b.try_into().expect("small lattice entries"))
                    .collect()
            })
            .filter(|v: &Vec<i64>| v.iter().any(|&x| x != 0))
            .collect()
    }
}

/// Exhaustive list of resonant `Q` with `1 <= |Q| <= degree_bound`, decided
/// through the integer-linear lattice equations, plus a lattice basis.
pub fn resonant_monomials(lambda: &EigenTuple, degree_bound: u32) -> Result<ResonanceReport> {
    if degree_bound < 1 {
        return Err(Error::BadInput("degree bound must be at least 1".into()));
    }
    let n = lambda.arity();
    let eqs = LatticeEquations::build(lambda)?;
    let resonant = MultiIndex::all_up_to(n, 1, degree_bound)
        .into_iter()
        .filter(|q| {
            let qi: Vec<i64> = q.0.iter().map(|&e| e as i64).collect();
            eqs.contains(&qi)
        })
        .collect();
    Ok(ResonanceReport {
        resonant_indices: resonant,
        lattice_basis: eqs.basis(n),
    })
}

/// Integer ratios of eigenvalues from an `(n-1) × n` exponent matrix with
/// independent rows: returns primitive `k` with `N·k = 0`, computed from the
/// minors of the first invertible column submatrix (columns searched in
/// lexicographic order), gcd-reduced and sign-normalized so the first
/// nonzero entry is positive.
pub fn eigen_ratio(n_matrix: &[Vec<i64>]) -> Result<Vec<i64>> {
    let rows = n_matrix.len();
    let n = rows + 1;
    if n_matrix.iter().any(|r| r.len() != n) {
        return Err(Error::BadInput(format!(
            "expected an {rows} x {n} matrix"
        )));
    }
    let rat_mat = Mat::from_fn(rows, n, |i, j| GaussRat::from_integer(n_matrix[i][j]));
    if rat_mat.rank() < rows {
        return Err(Error::DependentRows);
    }
    // Column subsets of size n-1 in lexicographic order = each omitted
    // column m from the right.
    let mut chosen: Option<(Vec<usize>, usize)> = None;
    for omitted in (0..n).rev() {
        let cols: Vec<usize> = (0..n).filter(|&j| j != omitted).collect();
        let a = Mat::from_fn(rows, rows, |i, j| {
            GaussRat::from_integer(n_matrix[i][cols[j]])
        });
        if !a.det().is_zero() {
            chosen = Some((cols, omitted));
            break;
        }
    }
    let (cols, omitted) = chosen.ok_or(Error::NoInvertibleColumns)?;
    let det_of = |replace: Option<usize>| -> i64 {
        let m = Mat::from_fn(rows, rows, |i, j| {
            let col = match replace {
                Some(r) if j == r => omitted,
                _ => cols[j],
            };
            GaussRat::from_integer(n_matrix[i][col])
        });
        let d = m.det();
        debug_assert!(d.im.is_zero() && d.re.is_integer());
        let (num, _) = d.re.numer_denom();
        num.try_into().expect("minor fits in i64")
    };
    let mut k = vec![0i64; n];
    for (j, &c) in cols.iter().enumerate() {
        k[c] = det_of(Some(j));
    }
    k[omitted] = -det_of(None);
    // Primitive, deterministic sign.
    let mut g = 0i64;
    for &v in &k {
        g = num::integer::gcd(g, v.abs());
    }
    if g > 1 {
        for v in &mut k {
            *v /= g;
        }
    }
    if let Some(first) = k.iter().find(|&&v| v != 0) {
        if *first < 0 {
            for v in &mut k {
                *v = -*v;
            }
        }
    }
    // The minors construction satisfies N·k = 0 identically.
    for row in n_matrix {
        let dot: i64 = row.iter().zip(&k).map(|(a, b)| a * b).sum();
        assert_eq!(dot, 0, "minor solution must lie in the kernel");
    }
    Ok(k)
}

/// Searches for a real line through the origin strictly separating one
/// eigenvalue from the others: returns `(index, direction turn)` with
/// `Re(λ_i/v) > 0` and `Re(λ_j/v) < 0` for `j ≠ i`, or `None`.
///
/// The sign pattern of `Re(λ_j/v)` only changes when the probe direction
/// crosses an eigenvalue angle ± a quarter turn, so an exact sweep over the
/// arcs between those boundary turns (probed at midpoints) is complete.
pub fn star_condition(lambda: &EigenTuple) -> Option<(usize, Rat)> {
    let n = lambda.arity();
    assert!(n >= 2, "condition (*) needs at least two eigenvalues");
    let quarter = Rat::new(1, 4);
    let three_quarters = Rat::new(3, 4);
    let mut boundaries: Vec<Rat> = Vec::new();
    for v in &lambda.values {
        for offset in [&quarter, &three_quarters] {
            let b = v.turn().add(offset).rem_one();
            if !boundaries.contains(&b) {
                boundaries.push(b);
            }
        }
    }
    boundaries.sort();
    // cos(2π·d) sign by the exact position of d in [0,1).
    let sign_at = |turn_diff: &Rat| -> i32 {
        let d = turn_diff.rem_one();
        if d == quarter || d == three_quarters {
            0
        } else if d < quarter || d > three_quarters {
            1
        } else {
            -1
        }
    };
    let m = boundaries.len();
    for a in 0..m {
        let left = &boundaries[a];
        let right = if a + 1 < m {
            boundaries[a + 1].clone()
        } else {
            boundaries[0].add(&Rat::one())
        };
        let mid = left.add(&right).div(&Rat::integer(2)).rem_one();
        let signs: Vec<i32> = lambda
            .values
            .iter()
            .map(|v| sign_at(&v.turn().sub(&mid)))
            .collect();
        let positives: Vec<usize> =
            signs.iter().enumerate().filter(|(_, &s)| s > 0).map(|(i, _)| i).collect();
        if positives.len() == 1 && signs.iter().filter(|&&s| s < 0).count() == n - 1 {
            return Some((positives[0], mid));
        }
    }
    None
}

/// The linear part handed to the invariant-series solver.
#[derive(Clone, Debug)]
pub enum LinearPart {
    Diagonal(EigenTuple),
    /// A single 2x2 Jordan block `((λ, 1), (0, λ))`.
    Jordan { lambda: PolarRational, block: usize },
}

/// Monomial-space basis of `{f : f∘G = f, deg f <= degree_bound}` for a
/// linear `G`, by exact degree-by-degree linear solves.
///
/// Diagonal case: monomials are eigenvectors with eigenvalue `Λ^Q`, so the
/// kernel is exactly the resonant monomials. Jordan case: the kernel is
/// computed as exact nullspaces; when `λ` lies in Q(ζ₁₂) the operator
/// `f ↦ f∘G - f` is assembled over that field directly, otherwise over the
/// rationals after scaling the shear to 1 (a diagonal change of the second
/// variable that fixes monomial supports), with the exact test `λ^d = 1`
/// gating each degree.
pub fn invariant_series_linear(
    linear_part: &LinearPart,
    degree_bound: u32,
) -> Result<Vec<TruncatedSeries<GaussRat>>> {
    match linear_part {
        LinearPart::Diagonal(lambda) => {
            let n = lambda.arity();
            let basis = MultiIndex::all_up_to(n, 1, degree_bound)
                .into_iter()
                .filter(|q| lambda.is_resonant(q))
                .map(|q| {
                    TruncatedSeries::monomial(n, degree_bound, q, GaussRat::one())
                })
                .collect();
            Ok(basis)
        }
        LinearPart::Jordan { lambda, block } => {
            if *block != 2 {
                return Err(Error::UnsupportedJordanBlock(*block));
            }
            match lambda.to_cyclo() {
                Some(lc) => jordan_kernel_cyclo(&lc, degree_bound),
                None => jordan_kernel_rational(lambda, degree_bound),
            }
        }
    }
}

/// Kernel of `f∘G - f` for `G = (λx₁ + x₂, λx₂)` assembled exactly over
/// Q(ζ₁₂), degree by degree.
fn jordan_kernel_cyclo(lambda: &Cyclo, bound: u32) -> Result<Vec<TruncatedSeries<GaussRat>>> {
    let n = 2usize;
    let x1 = TruncatedSeries::<Cyclo>::variable(n, bound, 0);
    let x2 = TruncatedSeries::<Cyclo>::variable(n, bound, 1);
    let g = [x1.scale(lambda).add(&x2), x2.scale(lambda)];
    let mut out = Vec::new();
    for d in 1..=bound {
        let monos = MultiIndex::all_of_degree(n, d);
        let dim = monos.len();
        let mut m = Mat::<Cyclo>::zero(dim, dim);
        for (col, q) in monos.iter().enumerate() {
            let mono = TruncatedSeries::monomial(n, bound, q.clone(), Cyclo::one());
            let image = mono.compose(&g)?.sub(&mono);
            for (row, r) in monos.iter().enumerate() {
                *m.at_mut(row, col) = image.coeff(r);
            }
        }
        for v in m.nullspace() {
            let mut f = TruncatedSeries::zero(n, bound);
            for (c, q) in v.iter().zip(&monos) {
                let gq = c.to_gauss().ok_or_else(|| {
                    Error::NotDiagonalizable(
                        "Jordan kernel vector left the Gaussian subfield".into(),
                    )
                })?;
                f.set_coeff(q.clone(), gq);
            }
            out.push(f);
        }
    }
    Ok(out)
}

/// Rational surrogate for λ outside Q(ζ₁₂): gate each degree with the exact
/// `λ^d = 1` test, then solve the unit-shear kernel `f∘(x₁+x₂, x₂) = f`.
/// Rescaling x₂ turns the shear constant 1/λ into 1 without changing the
/// monomial support of the kernel.
fn jordan_kernel_rational(
    lambda: &PolarRational,
    bound: u32,
) -> Result<Vec<TruncatedSeries<GaussRat>>> {
    let n = 2usize;
    let x1 = TruncatedSeries::<GaussRat>::variable(n, bound, 0);
    let x2 = TruncatedSeries::<GaussRat>::variable(n, bound, 1);
    let shear = [x1.add(&x2), x2.clone()];
    let mut out = Vec::new();
    for d in 1..=bound {
        if !lambda.pow(d as i64).is_one() {
            continue;
        }
        let monos = MultiIndex::all_of_degree(n, d);
        let dim = monos.len();
        let mut m = Mat::<GaussRat>::zero(dim, dim);
        for (col, q) in monos.iter().enumerate() {
            let mono = TruncatedSeries::monomial(n, bound, q.clone(), GaussRat::one());
            let image = mono.compose(&shear)?.sub(&mono);
            for (row, r) in monos.iter().enumerate() {
                *m.at_mut(row, col) = image.coeff(r);
            }
        }
        for v in m.nullspace() {
            let mut f = TruncatedSeries::zero(n, bound);
            for (c, q) in v.iter().zip(&monos) {
                f.set_coeff(q.clone(), c.clone());
            }
            out.push(f);
        }
    }
    Ok(out)
}
