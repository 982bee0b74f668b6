//! Dense complex polynomials (ascending coefficients) and simultaneous
//! root finding by the Aberth-Ehrlich iteration.

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 500;
pub const POLISH_STEPS: usize = 5;

/// Ascending coefficients: `c[0] + c[1] z + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Degree after dropping exactly-zero leading coefficients; the zero
    /// polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().rposition(|c| !c.is_zero())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + c)
    }

    /// `(p(z), p'(z))` by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::zero();
        let mut dp = Complex64::zero();
        for c in self.0.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |c_i| |z|^i`, the scale against which `|p(z)|` is judged.
    pub fn magnitude_at(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.0.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly(
            (0..len)
                .map(|i| {
                    self.0.get(i).copied().unwrap_or_default()
                        + other.0.get(i).copied().unwrap_or_default()
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![Complex64::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
}

/// All roots of `p` with multiplicity, each refined by a few Newton steps.
///
/// Exactly-zero trailing coefficients contribute exact zero roots. Fails if
/// the Aberth sweeps do not settle within [`MAX_SWEEPS`].
pub fn roots(p: &Poly) -> Result<Vec<Complex64>> {
    let Some(deg) = p.degree() else {
        return Err(Error::Unsupported(
            "the zero polynomial has no isolated roots".into(),
        ));
    };
    let zeros = p.0.iter().take_while(|c| c.is_zero()).count();
    let reduced = Poly(p.0[zeros..=deg].to_vec());
    let mut out = vec![Complex64::zero(); zeros];
    let d = deg - zeros;
    match d {
        0 => {}
        1 => out.push(-reduced.0[0] / reduced.0[1]),
        _ => {
            let mut found = aberth(&reduced, d)?;
            for z in &mut found {
                *z = newton_polish(&reduced, *z, POLISH_STEPS);
            }
            out.extend(found);
        }
    }
    Ok(out)
}

fn aberth(p: &Poly, d: usize) -> Result<Vec<Complex64>> {
    let lead = p.0[d];
    let center = -p.0[d - 1] / (lead * d as f64);
    let radius = (0..d)
        .map(|i| (p.0[i] / lead).norm().powf(1.0 / (d - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / d as f64 + 0.4;
            center + Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut done = vec![false; d];
    let eps = f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (val, der) = p.eval_with_derivative(z[k]);
            if val.norm() <= 8.0 * eps * p.magnitude_at(z[k]) {
                done[k] = true;
                continue;
            }
            let ratio = val / der;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k && z[j] != z[k])
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                // Stationary point of p: nudge instead of dividing by zero.
                z[k] += Complex64::new(radius * 1e-3, radius * 1e-3);
                continue;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * eps * (1.0 + z[k].norm()) {
                done[k] = true;
            }
        }
        if done.iter().all(|&v| v) {
            return Ok(z);
        }
    }
    Err(Error::RootsNotConverged(MAX_SWEEPS))
}

/// Newton steps that are kept only while they do not increase `|p|`.
pub fn newton_polish(p: &Poly, mut z: Complex64, steps: usize) -> Complex64 {
    for _ in 0..steps {
        let (val, der) = p.eval_with_derivative(z);
        if val.is_zero() || der.is_zero() {
            break;
        }
        let next = z - val / der;
        if !next.re.is_finite() || !next.im.is_finite() || p.eval(next).norm() > val.norm() {
            break;
        }
        z = next;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        v
    }

    #[test]
    fn simple_roots() {
        // (z - 1)(z - 2)(z + 3) = z^3 - 7z + 6
        let r = sorted_re(roots(&Poly::from_real(&[6.0, -7.0, 0.0, 1.0])).unwrap());
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_pair_and_zero_roots() {
        // z^2 (z^2 + 1)
        let r = roots(&Poly::from_real(&[0.0, 0.0, 1.0, 0.0, 1.0])).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.iter().filter(|z| z.is_zero()).count(), 2);
        assert!(r.iter().any(|z| (z - Complex64::i()).norm() < 1e-12));
        assert!(r.iter().any(|z| (z + Complex64::i()).norm() < 1e-12));
    }

    #[test]
    fn multiple_root_converges() {
        // (z - 1)^3
        let r = roots(&Poly::from_real(&[-1.0, 3.0, -3.0, 1.0])).unwrap();
        for z in r {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        assert!(roots(&Poly::from_real(&[0.0, 0.0])).is_err());
        assert!(roots(&Poly::from_real(&[2.0])).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn reconstructs_random_roots(
            pts in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), 1..7)
        ) {
            let mut p = Poly::from_real(&[1.0]);
            for (re, im) in &pts {
                p = p.mul(&Poly(vec![-Complex64::new(*re, *im), Complex64::new(1.0, 0.0)]));
            }
            let found = roots(&p).unwrap();
            prop_assert_eq!(found.len(), pts.len());
            for z in &found {
                prop_assert!(p.eval(*z).norm() <= 1e-9 * p.magnitude_at(*z));
            }
        }
    }
}
