//! Enclosures of spectral radii: row-sum bounds, Minc-type quotient bounds,
//! bounds for products and powers, and the Collatz-Wielandt certificate.

use std::fmt;

use num_traits::{Float, Zero};

use crate::error::{Error, Result};
use crate::inclusion::weakly_irreducible_standard;
use crate::oracle::{power_rho, EigenEstimate, PowerOptions};
use crate::product::{mu_exponent, power_row_sums, product_row_sums, ProductShape};
use crate::scalar::{Real, Scalar};
use crate::tensor::{row_sums, RowSumProfile, Tensor};

/// Which result an interval comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMethod {
    /// `[r(A), R(A)]`.
    RowSum,
    /// `min/max r_i(AB) / r_i(B)^{m-1}`.
    Minc,
    /// [`BoundMethod::Minc`] with `B = A`.
    MincSelf,
    /// [`BoundMethod::Minc`] with `B = A^k`.
    MincPower { k: usize },
    /// `[r(A) r(B)^{m-1}, R(A) R(B)^{m-1}]` for `rho(AB)`.
    Product,
    /// `[r(A)^mu_k, R(A)^mu_k]` for `rho(A^k)`.
    Power { k: usize },
    /// `[0, R(A)^mu_k]` for `rho(A^k)` of a general tensor.
    PowerUpper { k: usize },
}

impl BoundMethod {
    pub fn name(&self) -> &'static str {
        match self {
            BoundMethod::RowSum => "rowsum",
            BoundMethod::Minc => "minc",
            BoundMethod::MincSelf => "minc-self",
            BoundMethod::MincPower { .. } => "minc-power",
            BoundMethod::Product => "product",
            BoundMethod::Power { .. } => "power",
            BoundMethod::PowerUpper { .. } => "power-upper",
        }
    }
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundMethod::MincPower { k }
            | BoundMethod::Power { k }
            | BoundMethod::PowerUpper { k } => {
                write!(f, "{}(k={k})", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

/// `[lower, upper]` with the rows (0-based) attaining each endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInterval<R> {
    pub lower: R,
    pub upper: R,
    pub method: BoundMethod,
    pub witness_low: usize,
    pub witness_high: usize,
}

impl<R: Real> BoundInterval<R> {
    pub fn width(&self) -> R {
        self.upper - self.lower
    }

    pub fn contains(&self, v: R) -> bool {
        self.lower <= v && v <= self.upper
    }

    /// `lower - slack <= v <= upper + slack`.
    pub fn contains_with_slack(&self, v: R, slack: R) -> bool {
        self.lower - slack <= v && v <= self.upper + slack
    }

    /// Strictly inside `other` at both ends.
    pub fn strictly_inside(&self, other: &Self) -> bool {
        other.lower < self.lower && self.upper < other.upper
    }

    fn from_quotients(q: Vec<R>, method: BoundMethod) -> Self {
        let p = RowSumProfile::new(q);
        BoundInterval {
            lower: p.min,
            upper: p.max,
            method,
            witness_low: p.argmin,
            witness_high: p.argmax,
        }
    }

    fn check_finite(self) -> Result<Self> {
        for v in [self.lower, self.upper] {
            if !Scalar::is_finite(&v) {
                return Err(Error::BoundOverflow(format!("{:?}", v)));
            }
        }
        Ok(self)
    }
}

fn require_nonneg<T: Scalar>(t: &Tensor<T>, name: &'static str) -> Result<()> {
    if t.is_nonneg() {
        Ok(())
    } else {
        Err(Error::NotNonnegative(name))
    }
}

fn require_positive_rows<R: Real>(p: &RowSumProfile<R>, operand: &'static str) -> Result<()> {
    match p.first_zero() {
        Some(row) => Err(Error::ZeroRowSum {
            operand,
            row: row + 1,
        }),
        None => Ok(()),
    }
}

fn quotients<R: Real>(num: &[R], den: &[R], exp: u64) -> Vec<R> {
    num.iter()
        .zip(den)
        .map(|(n, d)| *n / d.pow_u64(exp))
        .collect()
}

/// `[r(A), R(A)]` for nonnegative `A`.
pub fn rowsum_bounds<R: Real>(a: &Tensor<R>) -> Result<BoundInterval<R>> {
    require_nonneg(a, "A")?;
    let p = row_sums(a);
    Ok(BoundInterval {
        lower: p.min,
        upper: p.max,
        method: BoundMethod::RowSum,
        witness_low: p.argmin,
        witness_high: p.argmax,
    })
}

/// `min_i r_i(AB) / r_i(B)^{m-1} <= rho(A) <= max_i r_i(AB) / r_i(B)^{m-1}`.
pub fn minc_bounds<R: Real>(a: &Tensor<R>, b: &Tensor<R>) -> Result<BoundInterval<R>> {
    minc_with(a, b, BoundMethod::Minc)
}

fn minc_with<R: Real>(
    a: &Tensor<R>,
    b: &Tensor<R>,
    method: BoundMethod,
) -> Result<BoundInterval<R>> {
    ProductShape::of(a, b)?;
    require_nonneg(a, "A")?;
    require_nonneg(b, "B")?;
    let rb = row_sums(b);
    require_positive_rows(&rb, "B")?;
    let rab = product_row_sums(a, b)?;
    let q = quotients(&rab.values, &rb.values, (a.order() - 1) as u64);
    BoundInterval::from_quotients(q, method).check_finite()
}

/// [`minc_bounds`] with `B = A`.
pub fn minc_self<R: Real>(a: &Tensor<R>) -> Result<BoundInterval<R>> {
    require_nonneg(a, "A")?;
    require_positive_rows(&row_sums(a), "A")?;
    minc_with(a, a, BoundMethod::MincSelf)
}

/// Quotients `r_i(A^{k+1}) / r_i(A^k)^{m-1}`, with both row-sum vectors
/// obtained by recursion rather than by forming the powers.
pub fn minc_power<R: Real>(a: &Tensor<R>, k: usize) -> Result<BoundInterval<R>> {
    if k < 1 {
        return Err(Error::InvalidPower);
    }
    require_nonneg(a, "A")?;
    if a.order() < 2 {
        return Err(Error::OrderTooSmall(a.order()));
    }
    require_positive_rows(&row_sums(a), "A")?;
    let profiles = power_row_sums(a, k + 1)?;
    let den = &profiles[k - 1];
    require_positive_rows(den, "A^k")?;
    let q = quotients(&profiles[k].values, &den.values, (a.order() - 1) as u64);
    BoundInterval::from_quotients(q, BoundMethod::MincPower { k }).check_finite()
}

/// `[r(A) r(B)^{m-1}, R(A) R(B)^{m-1}]`, an enclosure of `rho(AB)`.
pub fn product_rho_bounds<R: Real>(a: &Tensor<R>, b: &Tensor<R>) -> Result<BoundInterval<R>> {
    let shape = ProductShape::of(a, b)?;
    require_nonneg(a, "A")?;
    require_nonneg(b, "B")?;
    let ra = row_sums(a);
    let rb = row_sums(b);
    let e = (shape.left_order - 1) as u64;
    BoundInterval {
        lower: ra.min * rb.min.pow_u64(e),
        upper: ra.max * rb.max.pow_u64(e),
        method: BoundMethod::Product,
        witness_low: ra.argmin,
        witness_high: ra.argmax,
    }
    .check_finite()
}

/// Bounds on `rho(A^k)`: `[r(A)^mu_k, R(A)^mu_k]` for nonnegative `A` and
/// `[0, R(A)^mu_k]` otherwise.
pub fn power_rho_bounds<T: Scalar>(a: &Tensor<T>, k: usize) -> Result<BoundInterval<T::Real>> {
    let mu = mu_exponent(a.order(), k)?;
    let p = row_sums(a);
    let upper = p.max.pow_u64(mu);
    let interval = if a.is_nonneg() {
        BoundInterval {
            lower: p.min.pow_u64(mu),
            upper,
            method: BoundMethod::Power { k },
            witness_low: p.argmin,
            witness_high: p.argmax,
        }
    } else {
        BoundInterval {
            lower: T::Real::zero(),
            upper,
            method: BoundMethod::PowerUpper { k },
            witness_low: p.argmin,
            witness_high: p.argmax,
        }
    };
    interval.check_finite()
}

/// A fraction kept exactly as computed, without reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactFraction {
    pub num: i128,
    pub den: i128,
}

impl ExactFraction {
    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn cmp_value(&self, other: &Self) -> Option<std::cmp::Ordering> {
        let l = self.num.checked_mul(other.den)?;
        let r = other.num.checked_mul(self.den)?;
        Some(l.cmp(&r))
    }
}

impl fmt::Display for ExactFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// The endpoints of [`minc_bounds`] as unreduced fractions
/// `r_i(AB) / r_i(B)^{m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactInterval {
    pub lower: ExactFraction,
    pub upper: ExactFraction,
}

/// Largest entry magnitude accepted for exact evaluation.
const EXACT_ENTRY_LIMIT: f64 = 9.007_199_254_740_992e15;

fn integer_rows(t: &Tensor<f64>) -> Option<Vec<Vec<(Vec<usize>, i128)>>> {
    let mut ok = true;
    let mut rows = vec![Vec::new(); t.dim()];
    t.for_each_nonzero(|idx, v| {
        if v.fract() != 0.0 || v.abs() > EXACT_ENTRY_LIMIT {
            ok = false;
        } else {
            rows[idx[0]].push((idx[1..].to_vec(), v.abs() as i128));
        }
    });
    ok.then_some(rows)
}

/// Exact [`minc_bounds`] for integer-valued `A` and `B`; `None` when an entry
/// is not an integer or an intermediate overflows `i128`.
pub fn exact_minc_bounds(a: &Tensor<f64>, b: &Tensor<f64>) -> Option<ExactInterval> {
    ProductShape::of(a, b).ok()?;
    if !a.is_nonneg() || !b.is_nonneg() {
        return None;
    }
    let arows = integer_rows(a)?;
    let brows = integer_rows(b)?;
    let rb: Vec<i128> = brows
        .iter()
        .map(|row| {
            row.iter()
                .try_fold(0i128, |acc, (_, v)| acc.checked_add(*v))
        })
        .collect::<Option<_>>()?;
    if rb.contains(&0) {
        return None;
    }
    let exp = u32::try_from(a.order() - 1).ok()?;
    let mut fractions = Vec::with_capacity(a.dim());
    for (i, row) in arows.iter().enumerate() {
        let mut num = 0i128;
        for (tail, v) in row {
            let term = tail.iter().try_fold(*v, |acc, &j| acc.checked_mul(rb[j]))?;
            num = num.checked_add(term)?;
        }
        let den = rb[i].checked_pow(exp)?;
        fractions.push(ExactFraction { num, den });
    }
    let mut lower = fractions[0];
    let mut upper = fractions[0];
    for f in &fractions[1..] {
        if f.cmp_value(&lower)?.is_lt() {
            lower = *f;
        }
        if f.cmp_value(&upper)?.is_gt() {
            upper = *f;
        }
    }
    Some(ExactInterval { lower, upper })
}

/// Exact [`minc_self`].
pub fn exact_minc_self(a: &Tensor<f64>) -> Option<ExactInterval> {
    exact_minc_bounds(a, a)
}

/// A tensor `B` of order `k` whose row sums are the Perron vector of `A`,
/// together with the quotient interval it certifies.
#[derive(Debug, Clone, PartialEq)]
pub struct CwCertificate<R> {
    pub b: Tensor<R>,
    pub bounds: BoundInterval<R>,
    /// `bounds.upper - bounds.lower`.
    pub gap: R,
    pub estimate: EigenEstimate<R>,
}

/// Builds `B` with `b_{i 1..1} = x_i` from the power-iteration Perron vector
/// `x` (for `k = 1`, `B = x`) and evaluates [`minc_bounds`] at it.
pub fn cw_certificate<R: Real + Float>(
    a: &Tensor<R>,
    k: usize,
    tol: f64,
) -> Result<CwCertificate<R>> {
    if k < 1 {
        return Err(Error::InvalidPower);
    }
    require_nonneg(a, "A")?;
    if !weakly_irreducible_standard(a) {
        return Err(Error::NotWeaklyIrreducible);
    }
    let estimate = power_rho(a, &PowerOptions::with_tol(tol))?;
    if !estimate.converged {
        return Err(Error::NotConverged {
            iterations: estimate.iterations,
            width: Real::to_f64(&estimate.cw_interval.width()),
        });
    }
    let x = &estimate.vector;
    let b = if k == 1 {
        Tensor::from_vector(x.clone())?
    } else {
        let entries = x.iter().enumerate().map(|(i, v)| {
            let mut idx = vec![0; k];
            idx[0] = i;
            (idx, *v)
        });
        Tensor::from_entries(k, a.dim(), entries)?
    };
    let bounds = minc_bounds(a, &b)?;
    Ok(CwCertificate {
        gap: bounds.width(),
        b,
        bounds,
        estimate,
    })
}

/// `true` when every row sum is positive, the standing hypothesis of the
/// Minc-type bounds.
pub fn has_positive_rows<T: Scalar>(a: &Tensor<T>) -> bool {
    row_sums(a)
        .values
        .iter()
        .all(|v| *v > <T::Real as Zero>::zero())
}
