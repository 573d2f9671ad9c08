//! Exact q-series engine for the 3d tetrahedron index.
//!
//! * [`series`]: truncated Laurent series in `q^(1/2)` over the integers.
//! * [`tetrahedron`]: `I(m, e)`, its cache and minimal degrees.
//! * [`identities`]: pentagon and triality checks.
//! * [`bailey`]: Bailey pairs with respect to the tetrahedron kernel.
//! * [`lattice`]: a small language for lattice sums of tetrahedron indices.
//! * [`cli`]: the command-line front end.

pub mod bailey;
pub mod cli;
mod engine;
mod error;
pub mod identities;
pub mod lattice;
pub mod series;
pub mod tetrahedron;

pub use engine::{Config, Engine, Windowed};
pub use error::{Error, Result};
pub use identities::{CheckReport, Form, Mismatch, PentagonArgs};
pub use series::{HalfExp, QSeries};
pub use tetrahedron::IndexCharge;
