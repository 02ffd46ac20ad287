pub mod arith;
pub mod catalog;
pub mod recurrence;
pub mod sim;
pub mod oracle;
pub mod errata;
