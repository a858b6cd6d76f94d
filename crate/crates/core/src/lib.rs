//! Exact-arithmetic workbench for differential polynomial rings `R[x; δ]`
//! over finite-rank nilpotent algebras.
//!
//! The crate is split along the lines of the underlying argument:
//!
//! * [`words`]: weights, validity, boundedness and decreasing factorizations
//!   of words over ℕ, with the explicit `(M, N)` bound recursion and its
//!   constructive witness.
//! * [`algebra`]: finite-rank associative algebras given by structure
//!   constants, derivations, multilinear identities, spans and nilpotency.
//! * [`orepoly`]: arithmetic in `R[x; δ]`, canonical rewriting of products,
//!   and nilpotency checks of finite subsets against the proved bound.
//! * [`radical`]: nil radicals, δ-stability and the Leibniz expansion of
//!   `δⁿ(bⁿ)`.
//! * [`cli`]: the command-line driver.

pub mod algebra;
pub mod cli;
pub mod orepoly;
pub mod radical;
pub mod words;
