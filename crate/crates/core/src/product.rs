//! The general tensor product `AB`, tensor powers, diagonal similarity and
//! the non-materializing row-sum formula for products.
//!
//! For `A` of order `m` and `B` of order `k` (both dimension `n`),
//!
//! ```text
//! c_{i a_1 ... a_{m-1}} = sum_{i_2..i_m} a_{i i_2..i_m} b_{i_2 a_1} ... b_{i_m a_{m-1}}
//! ```
//!
//! where each `a_j` is a `(k-1)`-tuple, so `AB` has order `(m-1)(k-1)+1`.
//! Materializing `AB` is exponential in `m*k`; when both factors are
//! nonnegative, [`product_row_sums`] gets `r_i(AB)` from `A` and the row sums
//! of `B` alone.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};
use crate::tensor::{entry_count_u128, row_sums, RowSumProfile, Tensor, DENSE_ENTRY_LIMIT};

/// Default cap on the number of entries a materialized product may hold.
pub const DEFAULT_ENTRY_CAP: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductShape {
    pub left_order: usize,
    pub right_order: usize,
    pub result_order: usize,
    pub dim: usize,
}

impl ProductShape {
    pub fn new(left_order: usize, right_order: usize, dim: usize) -> Result<Self> {
        if left_order < 2 {
            return Err(Error::OrderTooSmall(left_order));
        }
        if right_order < 1 {
            return Err(Error::InvalidOrder);
        }
        Ok(ProductShape {
            left_order,
            right_order,
            result_order: (left_order - 1) * (right_order - 1) + 1,
            dim,
        })
    }

    pub fn of<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<Self> {
        check_dims(a.dim(), b.dim())?;
        Self::new(a.order(), b.order(), a.dim())
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

pub fn general_product<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<Tensor<T>> {
    general_product_with_cap(a, b, DEFAULT_ENTRY_CAP)
}

/// Materializes `AB`. The result is dense when it has at most
/// [`DENSE_ENTRY_LIMIT`] entries and sparse otherwise. `cap` bounds the
/// dense entry count, or for sparse results the number of summed terms
/// (an upper bound on the stored entries).
pub fn general_product_with_cap<T: Scalar>(
    a: &Tensor<T>,
    b: &Tensor<T>,
    cap: usize,
) -> Result<Tensor<T>> {
    let shape = ProductShape::of(a, b)?;
    let n = shape.dim;
    let b_rows = b.rows();
    let tail_len = shape.right_order - 1;
    let tail_span = entry_count_u128(tail_len, n) as usize;

    let full = entry_count_u128(shape.result_order, n);
    let dense = full <= DENSE_ENTRY_LIMIT as u128;
    let estimate = if dense {
        full
    } else {
        let mut work: u128 = 0;
        a.for_each_nonzero(|idx, _| {
            let terms = idx[1..]
                .iter()
                .fold(1u128, |acc, &j| acc.saturating_mul(b_rows[j].len() as u128));
            work = work.saturating_add(terms);
        });
        work
    };
    if estimate > cap as u128 {
        return Err(Error::EntryCapExceeded { estimate, cap });
    }

    // Linear offset of each stored B tail within [n]^{k-1}.
    let tail_offsets: Vec<Vec<usize>> = b_rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|(tail, _)| tail.iter().fold(0usize, |acc, &t| acc * n + t))
                .collect()
        })
        .collect();

    if dense {
        let mut data = vec![T::zero(); full as usize];
        for_each_product_term(a, &b_rows, |i, slots, choice, value| {
            let mut lin = i;
            for (&row, &c) in slots.iter().zip(choice) {
                lin = lin * tail_span + tail_offsets[row][c];
            }
            data[lin] = data[lin] + value;
        });
        Tensor::from_dense(shape.result_order, n, data)
    } else {
        let mut acc: BTreeMap<Vec<usize>, T> = BTreeMap::new();
        let mut index = Vec::with_capacity(shape.result_order);
        for_each_product_term(a, &b_rows, |i, slots, choice, value| {
            index.clear();
            index.push(i);
            for (&row, &c) in slots.iter().zip(choice) {
                index.extend_from_slice(&b_rows[row][c].0);
            }
            let slot = acc.entry(index.clone()).or_insert_with(T::zero);
            *slot = *slot + value;
        });
        Tensor::from_entries(shape.result_order, n, acc)
    }
}

/// Calls `f(i, rows, choice, a * b * ... * b)` for every nonvanishing term
/// of the product sum, where `rows[j] = i_{j+2}` and `choice[j]` indexes the
/// selected nonzero of `B`'s row `rows[j]`.
fn for_each_product_term<T: Scalar>(
    a: &Tensor<T>,
    b_rows: &[Vec<(Vec<usize>, T)>],
    mut f: impl FnMut(usize, &[usize], &[usize], T),
) {
    let mut choice = Vec::new();
    a.for_each_nonzero(|idx, a_val| {
        let slots = &idx[1..];
        if slots.iter().any(|&j| b_rows[j].is_empty()) {
            return;
        }
        choice.clear();
        choice.resize(slots.len(), 0);
        loop {
            let value = slots
                .iter()
                .zip(&choice)
                .fold(a_val, |acc, (&row, &c)| acc * b_rows[row][c].1);
            f(idx[0], slots, &choice, value);
            let mut p = slots.len();
            loop {
                if p == 0 {
                    return;
                }
                p -= 1;
                choice[p] += 1;
                if choice[p] < b_rows[slots[p]].len() {
                    break;
                }
                choice[p] = 0;
            }
        }
    });
}

/// `(A x^{m-1})_i = sum a_{i i_2..i_m} x_{i_2} ... x_{i_m}`.
pub fn apply_vector<T: Scalar>(a: &Tensor<T>, x: &[T]) -> Result<Vec<T>> {
    if x.len() != a.dim() {
        return Err(Error::LengthMismatch {
            got: x.len(),
            dim: a.dim(),
        });
    }
    let mut out = vec![T::zero(); a.dim()];
    a.for_each_nonzero(|idx, v| {
        let term = idx[1..].iter().fold(v, |acc, &j| acc * x[j]);
        out[idx[0]] = out[idx[0]] + term;
    });
    Ok(out)
}

/// `A^k` with `A^1 = A` and `A^{j+1} = A (A^j)`; the result has order
/// `(m-1)^k + 1`.
pub fn tensor_power<T: Scalar>(a: &Tensor<T>, k: usize) -> Result<Tensor<T>> {
    tensor_power_with_cap(a, k, DEFAULT_ENTRY_CAP)
}

pub fn tensor_power_with_cap<T: Scalar>(a: &Tensor<T>, k: usize, cap: usize) -> Result<Tensor<T>> {
    if k < 1 {
        return Err(Error::InvalidPower);
    }
    if a.order() < 2 {
        return Err(Error::OrderTooSmall(a.order()));
    }
    let mut power = a.clone();
    for _ in 1..k {
        power = general_product_with_cap(a, &power, cap)?;
    }
    Ok(power)
}

/// `sum |a_{i i_2..i_m}| w_{i_2} ... w_{i_m}` for every row `i`.
pub(crate) fn weighted_row_sums<T: Scalar>(a: &Tensor<T>, weights: &[T::Real]) -> Vec<T::Real> {
    let mut out = vec![T::Real::zero(); a.dim()];
    a.for_each_nonzero(|idx, v| {
        let term = idx[1..]
            .iter()
            .fold(v.modulus(), |acc, &j| acc * weights[j]);
        out[idx[0]] = out[idx[0]] + term;
    });
    out
}

/// Row sums of `AB` for nonnegative `A`, `B`, without forming `AB`:
/// `r_i(AB) = sum a_{i i_2..i_m} r_{i_2}(B) ... r_{i_m}(B)`.
pub fn product_row_sums<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<RowSumProfile<T::Real>> {
    ProductShape::of(a, b)?;
    if !a.is_nonneg() {
        return Err(Error::NotNonnegative("A"));
    }
    if !b.is_nonneg() {
        return Err(Error::NotNonnegative("B"));
    }
    let rb = row_sums(b);
    Ok(RowSumProfile::new(weighted_row_sums(a, &rb.values)))
}

/// The componentwise upper bound `r_i(A) R(B)^{m-1} >= r_i(AB)`, valid for
/// complex tensors.
pub fn product_row_sum_bound<T: Scalar>(a: &Tensor<T>, b: &Tensor<T>) -> Result<Vec<T::Real>> {
    let shape = ProductShape::of(a, b)?;
    let scale = row_sums(b).max.pow_u64((shape.left_order - 1) as u64);
    Ok(row_sums(a).values.into_iter().map(|r| r * scale).collect())
}

/// Row-sum profiles of `A^1, ..., A^k` for nonnegative `A`, by the
/// recursion `r(A^{j+1}) = weighted_row_sums(A, r(A^j))`.
pub fn power_row_sums<T: Scalar>(a: &Tensor<T>, k: usize) -> Result<Vec<RowSumProfile<T::Real>>> {
    if k < 1 {
        return Err(Error::InvalidPower);
    }
    if a.order() < 2 {
        return Err(Error::OrderTooSmall(a.order()));
    }
    if !a.is_nonneg() {
        return Err(Error::NotNonnegative("A"));
    }
    let mut profiles = vec![row_sums(a)];
    for _ in 1..k {
        let prev = &profiles[profiles.len() - 1].values;
        let next = weighted_row_sums(a, prev);
        profiles.push(RowSumProfile::new(next));
    }
    Ok(profiles)
}

/// `mu_k = ((m-1)^k - 1)/(m-2)` for `m > 2` and `k` for `m = 2`, so that
/// `R(A^k) <= R(A)^{mu_k}`.
pub fn mu_exponent(order: usize, k: usize) -> Result<u64> {
    if k < 1 {
        return Err(Error::InvalidPower);
    }
    if order < 2 {
        return Err(Error::OrderTooSmall(order));
    }
    if order == 2 {
        return u64::try_from(k)
            .ok()
            .filter(|&v| v <= i64::MAX as u64)
            .ok_or(Error::ExponentOverflow);
    }
    let base = (order - 1) as i128;
    let exp = u32::try_from(k).map_err(|_| Error::ExponentOverflow)?;
    let power = base.checked_pow(exp).ok_or(Error::ExponentOverflow)?;
    let mu = (power - 1) / (order as i128 - 2);
    if mu > i64::MAX as i128 {
        return Err(Error::ExponentOverflow);
    }
    Ok(mu as u64)
}

/// `D^{-(m-1)} A D` for `D = diag(d)`:
/// `b_{i_1..i_m} = d_{i_1}^{-(m-1)} a_{i_1..i_m} d_{i_2} ... d_{i_m}`.
pub fn diagonal_similarity<T: Scalar>(a: &Tensor<T>, d: &[T::Real]) -> Result<Tensor<T>> {
    if d.len() != a.dim() {
        return Err(Error::LengthMismatch {
            got: d.len(),
            dim: a.dim(),
        });
    }
    if let Some(i) = d.iter().position(|v| !(*v > T::Real::zero())) {
        return Err(Error::NonPositiveScaling {
            index: i + 1,
            value: d[i].to_f64(),
        });
    }
    let m = a.order();
    let mut entries = Vec::with_capacity(a.nnz());
    a.for_each_nonzero(|idx, v| {
        let num = idx[1..].iter().fold(T::Real::one(), |acc, &j| acc * d[j]);
        let den = d[idx[0]].pow_u64((m - 1) as u64);
        entries.push((idx.to_vec(), v * T::from_real(num / den)));
    });
    let out = Tensor::from_entries(m, a.dim(), entries)?;
    if a.is_dense() {
        out.to_dense()
    } else {
        Ok(out)
    }
}
