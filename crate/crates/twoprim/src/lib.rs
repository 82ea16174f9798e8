//! Parallel drivers, report formats and the command line for
//! [`twoprim_core`].
//!
//! - [`scan`]: the criteria scan over an interval, spread over a thread pool.
//! - [`drivers`]: timed translate and line verifiers, parallel over exponent
//!   blocks and multipliers.
//! - [`oracle`]: the character-sum suite for one small field.
//! - [`report`]: CSV and JSON report rows.
//! - [`app`]: command execution shared by the binary and the tests.
//! - [`known`]: published exception sets and counts.

pub mod app;
pub mod drivers;
pub mod known;
pub mod oracle;
pub mod report;
pub mod scan;
