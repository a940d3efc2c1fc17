pub mod encoding;
pub mod error;
pub mod enforcement;
pub mod event;
pub mod ltl;
pub mod netsim;
pub mod oracle;
