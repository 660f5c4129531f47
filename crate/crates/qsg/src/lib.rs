//! Exact solvers for adversarial and cooperative Stackelberg values in
//! two-player non-zero-sum games on bi-weighted graphs.
//!
//! The crate covers two families of payoffs:
//!
//! * **Mean payoff.** Witness-based threshold decisions (`asv::asv_threshold`),
//!   exact value computation through the visited-set extension of the arena
//!   (`asv::asv_value`), bad-threshold regions (`asv::lambda_region`), best
//!   responses against finite-memory leader strategies, and synthesis of
//!   ε-optimal leader strategies from witness certificates.
//! * **Discounted sum.** Exact zero-sum solving by policy iteration over
//!   rationals (`zerosum::ds_game_value`), best responses and CSV/ASV
//!   evaluation of finite-memory strategies (`ds`), and the gap deciders for
//!   the CSV/ASV threshold promise problems (`ds::gap_decide`), together with
//!   the reduction generators used as test-instance factories (`reductions`).
//!
//! All arithmetic is exact: weights, thresholds and payoffs are
//! arbitrary-precision rationals, and no decision path ever touches floating
//! point. Enumeration-heavy solvers take explicit budgets and fail loudly
//! when they would exceed them.

pub mod arena;
pub mod asv;
pub mod ds;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod oracles;
pub mod rational;
pub mod reductions;
pub mod zerosum;

pub use arena::{Arena, Lasso, MealyStrategy, Player, VertexId};
pub use error::{Budget, Error, Result};
pub use rational::Q;
