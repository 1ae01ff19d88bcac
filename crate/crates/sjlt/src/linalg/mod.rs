//! Dense matrix support and the sketched linear-algebra applications built on
//! top of the sparse embeddings.

mod matrix;
mod qr;
mod stream;

pub use matrix::{
    load_matrix_bin, load_matrix_csv, save_matrix_bin, save_matrix_csv, MatrixBuffer,
};
pub use qr::{least_squares, RANK_GATE};
pub use stream::{
    apply_to_columns, approx_matrix_product, exact_matrix_product, low_rank_init,
    low_rank_push_column, product_moment_requirements, regression_init, regression_solve,
    regression_update, LowRankState, RegressionState, RegressionUpdate,
};
