//! Exact analysis of central rank-3 hyperplane arrangements.

pub mod arrangement;
pub mod freeness;
pub mod induction;
pub mod linalg;
pub mod moduli;
pub mod scalars;

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
