//! Order-`m`, dimension-`n` tensors in dense or coordinate storage.
//!
//! Indices are 0-based inside the library. The 1-based convention of the
//! JSON format is converted exactly once, in [`validate`].

use crate::error::{Error, Result};
use num_traits::Zero;

use crate::scalar::{Real, Scalar, ScalarKind};

/// Dense storage is refused above this many entries.
pub const DENSE_ENTRY_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Storage<T> {
    /// Row-major values; the first index varies slowest.
    Dense(Vec<T>),
    /// Nonzero entries, sorted lexicographically by index tuple.
    /// `indices` holds `order` components per entry.
    Sparse { indices: Vec<usize>, values: Vec<T> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    order: usize,
    dim: usize,
    storage: Storage<T>,
    nonneg: bool,
}

/// Unvalidated tensor description with 1-based coordinate indices.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTensor<T> {
    pub order: usize,
    pub dim: usize,
    pub entries: RawEntries<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RawEntries<T> {
    Dense(Vec<T>),
    Coo(Vec<(Vec<usize>, T)>),
}

/// The row sums `r_i`, their minimum `r` and maximum `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSumProfile<R> {
    pub values: Vec<R>,
    pub min: R,
    pub max: R,
    /// First row attaining `min` (0-based).
    pub argmin: usize,
    /// First row attaining `max` (0-based).
    pub argmax: usize,
}

impl<R: Real> RowSumProfile<R> {
    /// Panics on an empty vector; every tensor has at least one row.
    pub fn new(values: Vec<R>) -> Self {
        assert!(!values.is_empty(), "row sum profile needs at least one row");
        let (mut argmin, mut argmax) = (0, 0);
        for (i, v) in values.iter().enumerate() {
            if *v < values[argmin] {
                argmin = i;
            }
            if *v > values[argmax] {
                argmax = i;
            }
        }
        RowSumProfile {
            min: values[argmin],
            max: values[argmax],
            argmin,
            argmax,
            values,
        }
    }

    /// First row whose sum is exactly zero.
    pub fn first_zero(&self) -> Option<usize> {
        self.values.iter().position(|v| v.is_zero())
    }
}

/// The entries `a_{i...i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalVector<T> {
    pub entries: Vec<T>,
}

pub(crate) fn entry_count(order: usize, dim: usize) -> Option<usize> {
    u32::try_from(order).ok().and_then(|o| dim.checked_pow(o))
}

/// Saturating `dim^order` in `u128`.
pub(crate) fn entry_count_u128(order: usize, dim: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..order {
        acc = acc.saturating_mul(dim as u128);
    }
    acc
}

/// Advances a row-major multi-index; returns `false` after the last tuple.
pub(crate) fn advance(idx: &mut [usize], dim: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < dim {
            return true;
        }
        *slot = 0;
    }
    false
}

fn linear_index(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}

fn all_nonneg<T: Scalar>(values: &[T]) -> bool {
    values
        .iter()
        .all(|v| v.as_real().is_some_and(|r| r.is_nonnegative()))
}

impl<T: Scalar> Tensor<T> {
    pub fn from_dense(order: usize, dim: usize, data: Vec<T>) -> Result<Self> {
        check_shape(order, dim)?;
        let expected = entry_count(order, dim)
            .filter(|&c| c <= DENSE_ENTRY_LIMIT)
            .ok_or(Error::DenseTooLarge {
                order,
                dim,
                limit: DENSE_ENTRY_LIMIT,
            })?;
        if data.len() != expected {
            return Err(Error::DenseLength {
                got: data.len(),
                expected,
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            let mut idx = vec![0; order];
            let mut rest = pos;
            for slot in idx.iter_mut().rev() {
                *slot = rest % dim;
                rest /= dim;
            }
            return Err(Error::NonFinite(one_based(&idx)));
        }
        let nonneg = all_nonneg(&data);
        Ok(Tensor {
            order,
            dim,
            storage: Storage::Dense(data),
            nonneg,
        })
    }

    /// Sparse tensor from 0-based `(index, value)` pairs. Explicit zeros are
    /// dropped after the duplicate check.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, T)>,
    {
        check_shape(order, dim)?;
        let mut list: Vec<(Vec<usize>, T)> = entries.into_iter().collect();
        for (idx, v) in &list {
            if idx.len() != order {
                return Err(Error::IndexArity {
                    tuple: one_based(idx),
                    len: idx.len(),
                    order,
                });
            }
            if idx.iter().any(|&i| i >= dim) {
                return Err(Error::IndexOutOfRange {
                    tuple: one_based(idx),
                    dim,
                });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite(one_based(idx)));
            }
        }
        list.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateIndex(one_based(&w[0].0)));
        }
        let mut indices = Vec::with_capacity(list.len() * order);
        let mut values = Vec::with_capacity(list.len());
        for (idx, v) in list {
            if !v.is_zero() {
                indices.extend_from_slice(&idx);
                values.push(v);
            }
        }
        let nonneg = all_nonneg(&values);
        Ok(Tensor {
            order,
            dim,
            storage: Storage::Sparse { indices, values },
            nonneg,
        })
    }

    /// Dense tensor with entries produced by `f` at each 0-based index.
    pub fn from_fn(order: usize, dim: usize, mut f: impl FnMut(&[usize]) -> T) -> Result<Self> {
        check_shape(order, dim)?;
        let count = entry_count(order, dim)
            .filter(|&c| c <= DENSE_ENTRY_LIMIT)
            .ok_or(Error::DenseTooLarge {
                order,
                dim,
                limit: DENSE_ENTRY_LIMIT,
            })?;
        let mut data = Vec::with_capacity(count);
        let mut idx = vec![0; order];
        loop {
            data.push(f(&idx));
            if !advance(&mut idx, dim) {
                break;
            }
        }
        Self::from_dense(order, dim, data)
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        Self::from_entries(order, dim, std::iter::empty())
    }

    /// Ones on the superdiagonal `a_{i...i}`, zeros elsewhere.
    pub fn identity(order: usize, dim: usize) -> Result<Self> {
        Self::from_entries(order, dim, (0..dim).map(|i| (vec![i; order], T::one())))
    }

    /// A vector viewed as an order-1 tensor.
    pub fn from_vector(values: Vec<T>) -> Result<Self> {
        let dim = values.len();
        Self::from_dense(1, dim, values)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn storage(&self) -> &Storage<T> {
        &self.storage
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    /// Every entry is real and at least zero.
    pub fn is_nonneg(&self) -> bool {
        self.nonneg
    }

    pub fn scalar_kind(&self) -> ScalarKind {
        T::KIND
    }

    /// Stored entries (all entries for dense storage).
    pub fn stored_len(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.len(),
            Storage::Sparse { values, .. } => values.len(),
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|v| !v.is_zero()).count(),
            Storage::Sparse { values, .. } => values.len(),
        }
    }

    /// Entry at a 0-based index tuple. Panics on a malformed tuple.
    pub fn get(&self, idx: &[usize]) -> T {
        assert_eq!(idx.len(), self.order, "index arity");
        assert!(idx.iter().all(|&i| i < self.dim), "index out of range");
        match &self.storage {
            Storage::Dense(d) => d[linear_index(idx, self.dim)],
            Storage::Sparse { indices, values } => {
                let m = self.order;
                let (mut lo, mut hi) = (0usize, values.len());
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    match indices[mid * m..(mid + 1) * m].cmp(idx) {
                        std::cmp::Ordering::Less => lo = mid + 1,
                        std::cmp::Ordering::Greater => hi = mid,
                        std::cmp::Ordering::Equal => return values[mid],
                    }
                }
                T::zero()
            }
        }
    }

    /// Visits nonzero entries in lexicographic index order.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(&[usize], T)) {
        match &self.storage {
            Storage::Dense(d) => {
                let mut idx = vec![0; self.order];
                for v in d {
                    if !v.is_zero() {
                        f(&idx, *v);
                    }
                    advance(&mut idx, self.dim);
                }
            }
            Storage::Sparse { indices, values } => {
                for (chunk, v) in indices.chunks_exact(self.order.max(1)).zip(values) {
                    f(chunk, *v);
                }
            }
        }
    }

    /// Nonzero entries grouped by first index: `rows[i]` lists
    /// `(trailing indices, value)`.
    pub fn rows(&self) -> Vec<Vec<(Vec<usize>, T)>> {
        let mut rows = vec![Vec::new(); self.dim];
        self.for_each_nonzero(|idx, v| rows[idx[0]].push((idx[1..].to_vec(), v)));
        rows
    }

    pub fn to_sparse(&self) -> Self {
        match &self.storage {
            Storage::Sparse { .. } => self.clone(),
            Storage::Dense(_) => {
                let mut indices = Vec::new();
                let mut values = Vec::new();
                self.for_each_nonzero(|idx, v| {
                    indices.extend_from_slice(idx);
                    values.push(v);
                });
                Tensor {
                    order: self.order,
                    dim: self.dim,
                    storage: Storage::Sparse { indices, values },
                    nonneg: self.nonneg,
                }
            }
        }
    }

    pub fn to_dense(&self) -> Result<Self> {
        match &self.storage {
            Storage::Dense(_) => Ok(self.clone()),
            Storage::Sparse { .. } => {
                let count = entry_count(self.order, self.dim)
                    .filter(|&c| c <= DENSE_ENTRY_LIMIT)
                    .ok_or(Error::DenseTooLarge {
                        order: self.order,
                        dim: self.dim,
                        limit: DENSE_ENTRY_LIMIT,
                    })?;
                let mut data = vec![T::zero(); count];
                self.for_each_nonzero(|idx, v| data[linear_index(idx, self.dim)] = v);
                Ok(Tensor {
                    order: self.order,
                    dim: self.dim,
                    storage: Storage::Dense(data),
                    nonneg: self.nonneg,
                })
            }
        }
    }

    /// Applies `f` entrywise, keeping the storage layout.
    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Tensor<U> {
        let storage = match &self.storage {
            Storage::Dense(d) => Storage::Dense(d.iter().map(|v| f(*v)).collect()),
            Storage::Sparse { indices, values } => {
                let mut idx_out = Vec::with_capacity(indices.len());
                let mut val_out = Vec::with_capacity(values.len());
                for (chunk, v) in indices.chunks_exact(self.order.max(1)).zip(values) {
                    let w = f(*v);
                    if !w.is_zero() {
                        idx_out.extend_from_slice(chunk);
                        val_out.push(w);
                    }
                }
                Storage::Sparse {
                    indices: idx_out,
                    values: val_out,
                }
            }
        };
        let nonneg = match &storage {
            Storage::Dense(d) => all_nonneg(d),
            Storage::Sparse { values, .. } => all_nonneg(values),
        };
        Tensor {
            order: self.order,
            dim: self.dim,
            storage,
            nonneg,
        }
    }

    pub fn scale(&self, alpha: T) -> Self {
        self.map(|v| alpha * v)
    }

    /// `self + alpha * other` for tensors of equal shape.
    pub fn add_scaled(&self, other: &Self, alpha: T) -> Result<Self> {
        if self.order != other.order {
            return Err(Error::WrongOrder {
                what: "addend",
                expected: self.order,
                got: other.order,
            });
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut acc = std::collections::BTreeMap::new();
        self.for_each_nonzero(|idx, v| {
            acc.insert(idx.to_vec(), v);
        });
        other.for_each_nonzero(|idx, v| {
            let slot = acc.entry(idx.to_vec()).or_insert_with(T::zero);
            *slot = *slot + alpha * v;
        });
        let sum = Tensor::from_entries(self.order, self.dim, acc)?;
        if self.is_dense() {
            sum.to_dense()
        } else {
            Ok(sum)
        }
    }

    /// Entrywise distance `max |a - b|`, independent of storage layout.
    pub fn max_abs_diff(&self, other: &Self) -> T::Real {
        let mut worst = T::Real::zero();
        let mut seen = std::collections::BTreeMap::new();
        self.for_each_nonzero(|idx, v| {
            seen.insert(idx.to_vec(), v);
        });
        other.for_each_nonzero(|idx, w| {
            let v = seen.remove(idx).unwrap_or_else(T::zero);
            worst = T::Real::max_of(worst, (v - w).modulus());
        });
        for v in seen.values() {
            worst = T::Real::max_of(worst, v.modulus());
        }
        worst
    }
}

fn check_shape(order: usize, dim: usize) -> Result<()> {
    if order < 1 {
        return Err(Error::InvalidOrder);
    }
    if dim < 1 {
        return Err(Error::InvalidDim);
    }
    Ok(())
}

/// Builds a tensor from a 1-based description, checking every index.
pub fn validate<T: Scalar>(raw: RawTensor<T>) -> Result<Tensor<T>> {
    check_shape(raw.order, raw.dim)?;
    match raw.entries {
        RawEntries::Dense(data) => Tensor::from_dense(raw.order, raw.dim, data),
        RawEntries::Coo(list) => {
            let mut converted = Vec::with_capacity(list.len());
            for (idx, v) in list {
                if idx.len() != raw.order {
                    return Err(Error::IndexArity {
                        len: idx.len(),
                        tuple: idx,
                        order: raw.order,
                    });
                }
                if idx.iter().any(|&i| i < 1 || i > raw.dim) {
                    return Err(Error::IndexOutOfRange {
                        tuple: idx,
                        dim: raw.dim,
                    });
                }
                converted.push((idx.iter().map(|i| i - 1).collect(), v));
            }
            Tensor::from_entries(raw.order, raw.dim, converted)
        }
    }
}

/// `r_i(A) = sum over (i_2..i_m) of |a_{i i_2 ... i_m}|`.
pub fn row_sums<T: Scalar>(a: &Tensor<T>) -> RowSumProfile<T::Real> {
    let mut values = vec![T::Real::zero(); a.dim()];
    a.for_each_nonzero(|idx, v| values[idx[0]] = values[idx[0]] + v.modulus());
    RowSumProfile::new(values)
}

pub fn diagonal<T: Scalar>(a: &Tensor<T>) -> DiagonalVector<T> {
    let entries = (0..a.dim()).map(|i| a.get(&vec![i; a.order()])).collect();
    DiagonalVector { entries }
}
