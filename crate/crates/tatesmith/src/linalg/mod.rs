//! Exact integer and F_p linear algebra.

mod algebra;
mod fp;
mod int;
mod snf;

pub use algebra::{AlgebraError, Block, FpAlgebra};
pub use fp::{add_mod, inv_mod, mul_mod, pow_mod, span_basis, sub_mod, FpMatrix, Rref};
pub use int::{vec_is_zero, IntMatrix};
pub use snf::{
    bigint_mod, fp_rank, integer_kernel, large_prime_count, rank_mod_large_prime, rank_q, snf,
    snf_full, subquotient, verify_snf, AbelianInvariants, PPrimary, SnfFull, SnfResult,
    Subquotient,
};
