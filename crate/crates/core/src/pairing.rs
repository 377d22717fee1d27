//! User-pair enumeration, evaluation, and ranking.
//!
//! With N users sorted by gain there are C(N,2) candidate pairs (m,n),
//! m < n, of which exactly one is scheduled. Each pair is scored under one
//! of three objectives: maximize the strong user's secrecy rate (all power
//! to the strong user), maximize the weak user's data rate (all power to
//! the weak user), or maximize the strong user's secrecy rate subject to a
//! weak-user QoS target (closed-form optimal split per pair). For the two
//! reference gain profiles with four users the resulting order is known
//! analytically and exposed by [`predicted_order`] for cross-checking.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::channel::{ChannelGains, GainProfile, ProfileKind};
use crate::noma::{
    optimal_alpha, rth_upper_bound, secrecy_rate_strong, weak_user_rate, PowerSplit, QosTarget,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PairingError {
    #[error("need at least 2 users, got {0}")]
    TooFewUsers(usize),
    #[error("invalid pair ({m}, {n}): need 1 <= m < n")]
    InvalidPair { m: usize, n: usize },
    #[error("pair {pair} out of range for {n_users} users")]
    PairOutOfRange { pair: UserPair, n_users: usize },
    #[error("no feasible pair for r_th = {r_th}; per-pair feasible ranges: {}", format_bounds(.bounds))]
    NoFeasiblePair {
        r_th: f64,
        /// Exclusive upper bound of the feasible r_th range for every pair.
        bounds: Vec<(UserPair, f64)>,
    },
    #[error("no analytic order prediction for this profile/objective combination")]
    UnsupportedPrediction,
}

fn format_bounds(bounds: &[(UserPair, f64)]) -> String {
    bounds
        .iter()
        .map(|(p, b)| format!("{p} < {b}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// A candidate pair (m, n) of 1-based user indices with m < n, so user m
/// is the stronger one under the sorted-gain convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserPair {
    m: usize,
    n: usize,
}

impl UserPair {
    pub fn new(m: usize, n: usize) -> Result<Self, PairingError> {
        if m >= 1 && m < n {
            Ok(Self { m, n })
        } else {
            Err(PairingError::InvalidPair { m, n })
        }
    }

    /// Index of the stronger user (1-based).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Index of the weaker user (1-based).
    pub fn n(&self) -> usize {
        self.n
    }
}

impl fmt::Display for UserPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// What the scheduler optimizes when scoring a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionObjective {
    /// Strong user's secrecy rate with α_m = 1.
    MaxStrongSecrecy,
    /// Weak user's data rate with α_m = 0.
    MaxWeakRate,
    /// Strong user's secrecy rate at the closed-form optimal split that
    /// guarantees the weak user r_th.
    QosAwareSecrecy { r_th: f64 },
}

/// Per-pair evaluation under one objective.
///
/// An infeasible pair (QoS target outside the weak user's feasible range)
/// keeps zero rates and no split so that ranking and Monte Carlo
/// aggregation stay total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMetrics {
    pub pair: UserPair,
    pub split: Option<PowerSplit>,
    pub strong_secrecy: f64,
    pub weak_rate: f64,
    pub feasible: bool,
}

/// All C(n,2) pairs in lexicographic order.
pub fn enumerate_pairs(n_users: usize) -> Result<Vec<UserPair>, PairingError> {
    if n_users < 2 {
        return Err(PairingError::TooFewUsers(n_users));
    }
    let mut pairs = Vec::with_capacity(n_users * (n_users - 1) / 2);
    for m in 1..n_users {
        for n in (m + 1)..=n_users {
            pairs.push(UserPair { m, n });
        }
    }
    Ok(pairs)
}

/// Scores one pair under the objective.
pub fn evaluate_pair(
    pair: UserPair,
    gains: &ChannelGains,
    rho_t: f64,
    objective: &SelectionObjective,
) -> Result<PairMetrics, PairingError> {
    if pair.n > gains.n_users() {
        return Err(PairingError::PairOutOfRange {
            pair,
            n_users: gains.n_users(),
        });
    }
    let gain_m = gains.gains()[pair.m - 1];
    let gain_n = gains.gains()[pair.n - 1];

    let split = match objective {
        SelectionObjective::MaxStrongSecrecy => Some(PowerSplit::all_to_strong()),
        SelectionObjective::MaxWeakRate => Some(PowerSplit::all_to_weak()),
        SelectionObjective::QosAwareSecrecy { r_th } => QosTarget::new(*r_th)
            .and_then(|target| optimal_alpha(gain_n, rho_t, target))
            .ok(),
    };

    Ok(match split {
        Some(split) => PairMetrics {
            pair,
            split: Some(split),
            strong_secrecy: secrecy_rate_strong(gain_m, gain_n, split, rho_t)
                .expect("gains are sorted and positive"),
            weak_rate: weak_user_rate(gain_m, gain_n, split, rho_t)
                .expect("gains are sorted and positive"),
            feasible: true,
        },
        // QoS target outside the weak user's feasible range.
        None => PairMetrics {
            pair,
            split: None,
            strong_secrecy: 0.0,
            weak_rate: 0.0,
            feasible: false,
        },
    })
}

/// The value a pair is ranked by: strong-user secrecy for the secrecy
/// objectives, weak-user rate otherwise. Infeasible pairs score 0.
pub fn objective_value(metrics: &PairMetrics, objective: &SelectionObjective) -> f64 {
    if !metrics.feasible {
        return 0.0;
    }
    match objective {
        SelectionObjective::MaxWeakRate => metrics.weak_rate,
        _ => metrics.strong_secrecy,
    }
}

/// Ranking order: feasible before infeasible, higher objective value
/// first, ties broken lexicographically by pair.
pub fn compare_by_objective(
    a: &PairMetrics,
    b: &PairMetrics,
    objective: &SelectionObjective,
) -> Ordering {
    b.feasible
        .cmp(&a.feasible)
        .then_with(|| {
            let va = objective_value(a, objective);
            let vb = objective_value(b, objective);
            vb.partial_cmp(&va).expect("objective values are finite")
        })
        .then_with(|| a.pair.cmp(&b.pair))
}

/// Evaluates every pair and sorts by [`compare_by_objective`].
pub fn rank_pairs(
    gains: &ChannelGains,
    rho_t: f64,
    objective: &SelectionObjective,
) -> Result<Vec<PairMetrics>, PairingError> {
    let mut metrics = enumerate_pairs(gains.n_users())?
        .into_iter()
        .map(|pair| evaluate_pair(pair, gains, rho_t, objective))
        .collect::<Result<Vec<_>, _>>()?;
    metrics.sort_by(|a, b| compare_by_objective(a, b, objective));
    Ok(metrics)
}

/// Head of [`rank_pairs`]. When every pair is infeasible (QoS case) the
/// error carries each pair's feasible r_th range.
pub fn select_best_pair(
    gains: &ChannelGains,
    rho_t: f64,
    objective: &SelectionObjective,
) -> Result<PairMetrics, PairingError> {
    let ranked = rank_pairs(gains, rho_t, objective)?;
    let best = ranked[0];
    if !best.feasible {
        let r_th = match objective {
            SelectionObjective::QosAwareSecrecy { r_th } => *r_th,
            _ => unreachable!("fixed-split objectives are always feasible"),
        };
        let bounds = ranked
            .iter()
            .map(|m| {
                let gain_n = gains.gains()[m.pair.n - 1];
                (m.pair, rth_upper_bound(gain_n, rho_t))
            })
            .collect();
        return Err(PairingError::NoFeasiblePair { r_th, bounds });
    }
    Ok(best)
}

/// Analytic pair order for the four-user reference profiles.
///
/// - Arithmetic profile, strong-secrecy objective:
///   (1,4) > (2,4) > (1,3) > (3,4) > (2,3) > (1,2), for every base gain
///   and transmit SNR.
/// - Harmonic profile, strong-secrecy objective:
///   (1,4) > (1,3) > (1,2) > (2,4) > (2,3) > (3,4).
/// - Weak-rate objective (either profile): the order depends only on the
///   weak user, giving the tie tiers of [`weak_rate_rank_tiers`] flattened
///   with lexicographic tie-breaks.
///
/// Only defined for four users; other combinations return
/// [`PairingError::UnsupportedPrediction`].
pub fn predicted_order(
    profile: &GainProfile,
    objective: &SelectionObjective,
) -> Result<Vec<UserPair>, PairingError> {
    if profile.n_users() != 4 {
        return Err(PairingError::UnsupportedPrediction);
    }
    let order: &[(usize, usize)] = match (profile.kind(), objective) {
        (ProfileKind::Arithmetic, SelectionObjective::MaxStrongSecrecy) => {
            &[(1, 4), (2, 4), (1, 3), (3, 4), (2, 3), (1, 2)]
        }
        (ProfileKind::Harmonic, SelectionObjective::MaxStrongSecrecy) => {
            &[(1, 4), (1, 3), (1, 2), (2, 4), (2, 3), (3, 4)]
        }
        (_, SelectionObjective::MaxWeakRate) => {
            &[(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]
        }
        _ => return Err(PairingError::UnsupportedPrediction),
    };
    Ok(order.iter().map(|&(m, n)| UserPair { m, n }).collect())
}

/// Tie tiers of the weak-rate objective for four users: pairs sharing the
/// weak user achieve identical weak rates, so the ranking collapses to the
/// weak index alone.
pub fn weak_rate_rank_tiers() -> Vec<Vec<UserPair>> {
    vec![
        vec![UserPair { m: 1, n: 2 }],
        vec![UserPair { m: 1, n: 3 }, UserPair { m: 2, n: 3 }],
        vec![
            UserPair { m: 1, n: 4 },
            UserPair { m: 2, n: 4 },
            UserPair { m: 3, n: 4 },
        ],
    ]
}

/// Threshold at which pairs (2,4) and (1,3) swap places under the
/// QoS-aware objective on the arithmetic profile:
///
/// ```text
/// log2(1 + 2·g₄²·ρ_t² / (1 + 3·g₄·ρ_t))
/// ```
///
/// Pair (2,4) yields the higher QoS-aware strong-user secrecy iff r_th is
/// strictly below this value.
pub fn qos_threshold_24_vs_13(gain4: f64, rho_t: f64) -> f64 {
    let x = gain4 * rho_t;
    (1.0 + 2.0 * x * x / (1.0 + 3.0 * x)).log2()
}
