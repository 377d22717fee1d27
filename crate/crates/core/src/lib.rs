//! Secrecy-rate analysis and user-pair selection for downlink NOMA with
//! untrusted users.
//!
//! A base station serves two users at a time through power-domain NOMA.
//! Every user is legitimate but untrusted: within a pair, the weaker user
//! may try to decode the stronger user's message after decoding its own.
//! The crate provides
//!
//! - channel power gain generation, sampled from Rayleigh fading or built
//!   from deterministic gain profiles ([`channel`]),
//! - the SINR, rate, and secrecy-rate model together with the closed-form
//!   power split that maximizes the strong user's secrecy rate under a
//!   weak-user rate guarantee ([`noma`]),
//! - exhaustive pair enumeration, per-objective evaluation and ranking,
//!   and the analytic order predictions for the two reference gain
//!   profiles ([`pairing`]),
//! - seeded, reproducible Monte Carlo averaging with a random-pairing
//!   baseline and parameter sweeps ([`montecarlo`]).
//!
//! All rates are in bits/s/Hz; gains, powers, and SINRs are linear.

pub mod channel;
pub mod montecarlo;
pub mod noma;
pub mod pairing;

pub use channel::{ChannelError, ChannelGains, GainProfile, GainSource, ProfileKind, SystemParams};
pub use montecarlo::{
    BaselinePolicy, ChannelMode, PairAverages, SimulationConfig, SimulationError,
    SimulationResult, Sweep, SweepParam,
};
pub use noma::{NomaError, PairSinr, PowerSplit, QosTarget};
pub use pairing::{PairMetrics, PairingError, SelectionObjective, UserPair};
