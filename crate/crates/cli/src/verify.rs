//! Recomputes the worked 3rd-order, 2-dimensional example and checks each
//! published identity.

use serde_json::{json, Value};

use tenbound::oracle::{power_rho, PowerOptions};
use tenbound::{
    exact_minc_self, general_product, minc_self, product_row_sums, row_sums, rowsum_bounds, Tensor,
};

const ROW_SUMS: [f64; 2] = [7.0, 9.0];
const SQUARE_ROW_SUMS: [f64; 2] = [417.0, 621.0];
const MINC_LOWER: (i128, i128) = (621, 81);
const MINC_UPPER: (i128, i128) = (417, 49);
const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn to_value(&self) -> Value {
        json!({ "name": self.name, "passed": self.passed, "detail": self.detail })
    }
}

fn check(name: &'static str, outcome: Result<String, String>) -> Check {
    match outcome {
        Ok(detail) => Check {
            name,
            passed: true,
            detail,
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
        },
    }
}

fn compare_vector(label: &str, operand: &str, got: &[f64], want: &[f64]) -> Result<String, String> {
    if got.len() != want.len() {
        return Err(format!(
            "{label} has {} components, expected {}",
            got.len(),
            want.len()
        ));
    }
    for (i, (g, w)) in got.iter().zip(want).enumerate() {
        if g != w {
            return Err(format!(
                "{label}_{}({operand}) = {g}, expected {label}_{} = {w}",
                i + 1,
                i + 1
            ));
        }
    }
    Ok(format!("{label}({operand}) = {got:?}"))
}

/// Runs all six checks on `a`.
pub fn run_checks(a: &Tensor<f64>) -> Vec<Check> {
    let mut checks = Vec::new();

    let rs = row_sums(a);
    checks.push(check(
        "row sums",
        compare_vector("r", "A", &rs.values, &ROW_SUMS),
    ));

    let square = product_row_sums(a, a)
        .map_err(|e| e.to_string())
        .and_then(|p| {
            let materialized = general_product(a, a).map_err(|e| e.to_string())?;
            let direct = row_sums(&materialized);
            if direct.values != p.values {
                return Err(format!(
                    "row sums of the formed square {:?} differ from the factored formula {:?}",
                    direct.values, p.values
                ));
            }
            compare_vector("r", "A^2", &p.values, &SQUARE_ROW_SUMS)
        });
    checks.push(check("row sums of the square", square));

    let rowsum = rowsum_bounds(a).map_err(|e| e.to_string());
    checks.push(check(
        "row-sum interval",
        rowsum.clone().and_then(|iv| {
            if [iv.lower, iv.upper] == [ROW_SUMS[0], ROW_SUMS[1]] {
                Ok(format!("[{}, {}]", iv.lower, iv.upper))
            } else {
                Err(format!(
                    "row-sum interval [{}, {}], expected [7, 9]",
                    iv.lower, iv.upper
                ))
            }
        }),
    ));

    let minc = minc_self(a).map_err(|e| e.to_string());
    checks.push(check(
        "quotient interval",
        minc.clone().and_then(|iv| {
            let exact = exact_minc_self(a).ok_or("entries are not exact integers")?;
            let want_lo = MINC_LOWER.0 as f64 / MINC_LOWER.1 as f64;
            let want_hi = MINC_UPPER.0 as f64 / MINC_UPPER.1 as f64;
            let exact_ok = (exact.lower.num, exact.lower.den) == MINC_LOWER
                && (exact.upper.num, exact.upper.den) == MINC_UPPER;
            let float_ok =
                (iv.lower - want_lo).abs() <= FLOAT_TOL && (iv.upper - want_hi).abs() <= FLOAT_TOL;
            if exact_ok && float_ok {
                Ok(format!("[{}, {}]", exact.lower, exact.upper))
            } else {
                Err(format!(
                    "quotient interval [{}, {}] = [{}, {}], expected [621/81, 417/49]",
                    exact.lower, exact.upper, iv.lower, iv.upper
                ))
            }
        }),
    ));

    checks.push(check(
        "strict nesting",
        match (&minc, &rowsum) {
            (Ok(m), Ok(r)) if m.strictly_inside(r) => Ok(format!(
                "[{}, {}] inside ({}, {})",
                m.lower, m.upper, r.lower, r.upper
            )),
            (Ok(m), Ok(r)) => Err(format!(
                "quotient interval [{}, {}] is not strictly inside [{}, {}]",
                m.lower, m.upper, r.lower, r.upper
            )),
            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
        },
    ));

    checks.push(check(
        "power iteration inside both",
        power_rho(a, &PowerOptions::default())
            .map_err(|e| e.to_string())
            .and_then(|est| {
                let (m, r) = (minc.clone()?, rowsum.clone()?);
                if est.converged && m.contains(est.rho) && r.contains(est.rho) {
                    Ok(format!("rho = {}", est.rho))
                } else {
                    Err(format!(
                        "rho = {} (converged: {}) is not inside [{}, {}] and [{}, {}]",
                        est.rho, est.converged, m.lower, m.upper, r.lower, r.upper
                    ))
                }
            }),
    ));
    checks
}
