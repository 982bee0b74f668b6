//! Shifted power iteration for the spectral radius of a nonnegative tensor.
//!
//! Iterates `x <- ((A + I) x)^{[1/(m-1)]}` from the all-ones vector, where
//! `(A + I) x = A x + x^{[m-1]}`. The shift keeps weakly irreducible inputs
//! primitive and moves every Collatz-Wielandt quotient up by exactly one.

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::product::apply_vector;
use crate::scalar::Real;
use crate::tensor::Tensor;

const JITTER_SEED: u64 = 0x5eed_7e45;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Stop once the quotient interval is narrower than
    /// `tol * max(1, upper)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Keep the quotient interval of every iterate.
    pub record_history: bool,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            tol: 1e-10,
            max_iter: 10_000,
            record_history: false,
        }
    }
}

impl PowerOptions {
    pub fn with_tol(tol: f64) -> Self {
        PowerOptions {
            tol,
            ..Self::default()
        }
    }
}

/// `[min_i (Ax)_i / x_i^{m-1}, max_i (Ax)_i / x_i^{m-1}]` at a positive `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CwInterval<R> {
    pub lower: R,
    pub upper: R,
}

impl<R: Real> CwInterval<R> {
    pub fn width(&self) -> R {
        self.upper - self.lower
    }

    pub fn contains(&self, v: R) -> bool {
        self.lower <= v && v <= self.upper
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenEstimate<R> {
    pub rho: R,
    /// Positive vector normalized to unit maximum.
    pub vector: Vec<R>,
    /// `max_i |(Ax)_i - rho x_i^{m-1}|`.
    pub residual: R,
    pub cw_interval: CwInterval<R>,
    pub iterations: usize,
    pub converged: bool,
    /// Quotient interval of each iterate, when requested.
    pub history: Vec<CwInterval<R>>,
}

fn cast<R: Float>(v: f64) -> R {
    R::from(v).expect("representable constant")
}

/// Spectral radius estimate of a nonnegative tensor of order at least 2.
///
/// Returns `converged = false` with the last quotient interval when the
/// iteration budget runs out; that interval still brackets `rho(A)`.
pub fn power_rho<R: Real + Float>(a: &Tensor<R>, opts: &PowerOptions) -> Result<EigenEstimate<R>> {
    if !a.is_nonneg() {
        return Err(Error::NotNonnegative("A"));
    }
    let m = a.order();
    if m < 2 {
        return Err(Error::OrderTooSmall(m));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Unsupported("tolerance must be positive".into()));
    }
    let n = a.dim();
    let deg = (m - 1) as i32;
    let root = R::one() / cast::<R>((m - 1) as f64);
    let tol: R = cast(opts.tol);
    let one = R::one();

    let mut x = vec![one; n];
    let mut history = Vec::new();
    let mut restarted = false;
    let mut last = None;

    for iter in 1..=opts.max_iter {
        let ax = apply_vector(a, &x)?;
        let xp: Vec<R> = x.iter().map(|v| Float::powi(*v, deg)).collect();
        let mut lo = R::infinity();
        let mut hi = R::neg_infinity();
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let yi = ax[i] + xp[i];
            let q = yi / xp[i];
            if !Float::is_finite(q) {
                return Err(Error::Breakdown(format!(
                    "non-finite quotient in row {}",
                    i + 1
                )));
            }
            lo = Float::min(lo, q);
            hi = Float::max(hi, q);
            y.push(yi);
        }
        let interval = CwInterval {
            lower: lo - one,
            upper: hi - one,
        };
        if opts.record_history {
            history.push(interval);
        }
        let scale = Float::max(one, Float::abs(interval.upper));
        last = Some((iter, interval, ax, xp, x.clone()));
        if hi - lo <= tol * scale {
            return Ok(finish(last.take().unwrap(), true, history));
        }

        let mut next: Vec<R> = y.iter().map(|v| Float::powf(*v, root)).collect();
        let top = next.iter().copied().fold(R::zero(), Float::max);
        for v in &mut next {
            *v = *v / top;
        }
        if next
            .iter()
            .any(|v| !(*v > R::zero()) || !Float::is_finite(*v))
        {
            if restarted {
                return Err(Error::Breakdown(
                    "iterate lost positivity after a perturbed restart".into(),
                ));
            }
            restarted = true;
            let mut rng = ChaCha8Rng::seed_from_u64(JITTER_SEED);
            x = (0..n)
                .map(|_| one + cast::<R>(1e-3 * rng.random::<f64>()))
                .collect();
            continue;
        }
        x = next;
    }
    match last {
        Some(state) => Ok(finish(state, false, history)),
        None => Err(Error::NotConverged {
            iterations: 0,
            width: f64::INFINITY,
        }),
    }
}

type IterState<R> = (usize, CwInterval<R>, Vec<R>, Vec<R>, Vec<R>);

fn finish<R: Real + Float>(
    (iterations, cw_interval, ax, xp, x): IterState<R>,
    converged: bool,
    history: Vec<CwInterval<R>>,
) -> EigenEstimate<R> {
    let two = R::one() + R::one();
    let rho = (cw_interval.lower + cw_interval.upper) / two;
    let residual = ax
        .iter()
        .zip(&xp)
        .map(|(p, q)| Float::abs(*p - rho * *q))
        .fold(R::zero(), Float::max);
    EigenEstimate {
        rho,
        vector: x,
        residual,
        cw_interval,
        iterations,
        converged,
        history,
    }
}
