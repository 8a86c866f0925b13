//! Exact engine for the NSS realisation of the `B(infinity)` crystal of affine
//! `sl_n`, built on Maya diagrams and charged partitions, together with an
//! independent Fock-space valuation oracle.

pub mod crystalgraph;
pub mod fock;
pub mod laurent;
pub mod maya;
pub mod mvoracle;
pub mod nss;
pub mod par;
