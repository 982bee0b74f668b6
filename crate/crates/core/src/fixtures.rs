//! Reference instances used by tests, examples and the CLI self-check.

use crate::tensor::Tensor;

/// The order-3, dimension-2 nonnegative tensor with
/// `a111=3, a112=1, a121=2, a122=1, a211=0, a212=4, a221=2, a222=3`.
///
/// Row sums are `(7, 9)`, the row sums of its square are `(417, 621)`, and
/// its spectral radius lies in `[621/81, 417/49]`.
pub fn example_tensor() -> Tensor<f64> {
    Tensor::from_dense(3, 2, vec![3.0, 1.0, 2.0, 1.0, 0.0, 4.0, 2.0, 3.0])
        .expect("fixture is well formed")
}
