//! Exact integer and rational linear algebra.

mod matrix;
mod rank;
mod simplex;
mod snf;

pub use matrix::{gcd_of, primitive_integer_vector, rat, rat_frac, IntMatrix, RatMatrix};
pub use rank::{rational_rank, sparse_rank, sparse_row, SparseEchelon, SparseRow};
pub use simplex::{cone_contains, solve_lp, ConeMembership, LpOutcome, RationalCone, Sense};
pub use snf::{integer_kernel, integer_left_kernel, smith_normal_form, SmithDecomposition};

/// `serialize_with` helpers for big integers: JSON numbers when they fit in
/// `i64`, decimal strings otherwise.
pub(crate) mod ser {
    use num_bigint::BigInt;
    use serde::Serializer;

    use super::matrix::BigIntRef;

    pub fn vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(BigIntRef))
    }

    pub fn rows<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.iter().map(BigIntRef).collect::<Vec<_>>()))
    }
}
