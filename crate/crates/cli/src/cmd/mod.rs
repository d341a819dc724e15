pub mod cache;
pub mod chartable;
pub mod identities;
pub mod lemmas;
pub mod reciprocity;
pub mod scan;
