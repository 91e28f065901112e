//! Exact placement of isolation valves in water distribution networks.
//!
//! Given a network of pipes with demands and a valve budget, find where to
//! put the valves so that the worst pipe failure leaves as little demand
//! undelivered as possible.
//!
//! - [`netmodel`]: networks, instance documents, placements, plane faces.
//! - [`isolation`]: sectors, closed-valve sets, undelivered demand.
//! - [`solver`]: minimax branch-and-bound with propagation and bounds.
//! - [`oracle`]: exhaustive enumeration for small instances.
//! - [`pareto`]: valve count versus worst-case damage sweeps.
//! - [`generate`]: seeded random plane instances.
//! - [`cli`]: the `valves` command-line front end.
//!
//! ```
//! use isovalve::netmodel::{fig1, Demand};
//! use isovalve::solver::{solve, SolverOptions};
//!
//! let net = fig1();
//! let sol = solve(&net, 6, &SolverOptions::default()).unwrap();
//! assert!(sol.ud <= Demand::from_lps(36));
//! ```

pub mod cli;
pub mod generate;
pub mod isolation;
pub mod netmodel;
pub mod oracle;
pub mod pareto;
pub mod solver;
