//! Channel power gain generation.
//!
//! Each user's channel power gain |h|² is exponentially distributed with
//! mean λ = L_p · d^(−e): Rayleigh amplitude fading over a link of length
//! d with path-loss constant L_p and exponent e. Users are indexed by
//! descending gain, so `gains()[0]` always belongs to the strongest user.
//!
//! Sampling is reproducible by construction. Variates come from the
//! inverse-CDF transform x = −λ·ln(1 − u), with u drawn from a ChaCha8
//! stream, so a fixed seed yields bit-identical gains on every platform
//! and run. Two deterministic gain profiles used for pair-order analysis
//! (arithmetic and harmonic) are also provided.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Errors from parameter validation and gain construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("need at least 2 users, got {0}")]
    TooFewUsers(usize),
    #[error("gains must be strictly descending: gains[{index}] = {value} does not exceed gains[{next_index}] = {next_value}")]
    NotStrictlyDescending {
        index: usize,
        value: f64,
        next_index: usize,
        next_value: f64,
    },
}

fn check_positive(name: &'static str, value: f64) -> Result<(), ChannelError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::NonPositive { name, value })
    }
}

/// Base-station and link-budget parameters shared by all users.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    transmit_power_watts: f64,
    noise_power_watts: f64,
    path_loss_constant: f64,
    path_loss_exponent: f64,
    distances_m: Vec<f64>,
}

impl SystemParams {
    pub fn new(
        transmit_power_watts: f64,
        noise_power_watts: f64,
        path_loss_constant: f64,
        path_loss_exponent: f64,
        distances_m: Vec<f64>,
    ) -> Result<Self, ChannelError> {
        check_positive("transmit_power_watts", transmit_power_watts)?;
        check_positive("noise_power_watts", noise_power_watts)?;
        check_positive("path_loss_constant", path_loss_constant)?;
        check_positive("path_loss_exponent", path_loss_exponent)?;
        if distances_m.len() < 2 {
            return Err(ChannelError::TooFewUsers(distances_m.len()));
        }
        for &d in &distances_m {
            check_positive("distance_m", d)?;
        }
        Ok(Self {
            transmit_power_watts,
            noise_power_watts,
            path_loss_constant,
            path_loss_exponent,
            distances_m,
        })
    }

    /// Transmit SNR ρ_t = P_t / σ².
    pub fn rho_t(&self) -> f64 {
        self.transmit_power_watts / self.noise_power_watts
    }

    pub fn n_users(&self) -> usize {
        self.distances_m.len()
    }

    /// Mean channel power gain of every user, in the order the distances
    /// were given (not sorted).
    pub fn mean_gains(&self) -> Vec<f64> {
        self.distances_m
            .iter()
            .map(|&d| self.path_loss_constant * d.powf(-self.path_loss_exponent))
            .collect()
    }

    /// Same parameters with a different transmit power.
    pub fn with_transmit_power(&self, watts: f64) -> Result<Self, ChannelError> {
        check_positive("transmit_power_watts", watts)?;
        let mut params = self.clone();
        params.transmit_power_watts = watts;
        Ok(params)
    }

    pub fn transmit_power_watts(&self) -> f64 {
        self.transmit_power_watts
    }

    pub fn noise_power_watts(&self) -> f64 {
        self.noise_power_watts
    }

    pub fn path_loss_constant(&self) -> f64 {
        self.path_loss_constant
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.path_loss_exponent
    }

    pub fn distances_m(&self) -> &[f64] {
        &self.distances_m
    }
}

/// Mean channel power gain λ = L_p · d^(−e) for a link of the given length.
pub fn mean_gain(distance_m: f64, params: &SystemParams) -> Result<f64, ChannelError> {
    check_positive("distance_m", distance_m)?;
    Ok(params.path_loss_constant * distance_m.powf(-params.path_loss_exponent))
}

/// How a [`ChannelGains`] realization was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainSource {
    Sampled,
    ProfileArithmetic,
    ProfileHarmonic,
    Explicit,
}

/// The two deterministic gain laws used for pair-order analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    /// |h_i|² = (N − i + 1)·|h_N|²; the base gain is the weakest user's.
    Arithmetic,
    /// |h_i|² = |h_1|² / i; the base gain is the strongest user's.
    Harmonic,
}

/// A deterministic gain profile for a fixed number of users.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GainProfile {
    kind: ProfileKind,
    n_users: usize,
}

impl GainProfile {
    pub fn new(kind: ProfileKind, n_users: usize) -> Result<Self, ChannelError> {
        if n_users < 2 {
            return Err(ChannelError::TooFewUsers(n_users));
        }
        Ok(Self { kind, n_users })
    }

    pub fn arithmetic(n_users: usize) -> Result<Self, ChannelError> {
        Self::new(ProfileKind::Arithmetic, n_users)
    }

    pub fn harmonic(n_users: usize) -> Result<Self, ChannelError> {
        Self::new(ProfileKind::Harmonic, n_users)
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }
}

/// Descending-sorted channel power gains for one realization.
///
/// Strict descending order is checked on every construction path; ties are
/// rejected (sampling resolves them by redrawing the tied entries).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelGains {
    gains: Vec<f64>,
    source: GainSource,
}

impl ChannelGains {
    /// Wraps caller-supplied gains. They must be strictly descending,
    /// positive, and at least two.
    pub fn explicit(gains: Vec<f64>) -> Result<Self, ChannelError> {
        Self::checked(gains, GainSource::Explicit)
    }

    fn checked(gains: Vec<f64>, source: GainSource) -> Result<Self, ChannelError> {
        if gains.len() < 2 {
            return Err(ChannelError::TooFewUsers(gains.len()));
        }
        for &g in &gains {
            check_positive("gain", g)?;
        }
        for i in 0..gains.len() - 1 {
            if !(gains[i] > gains[i + 1]) {
                return Err(ChannelError::NotStrictlyDescending {
                    index: i,
                    value: gains[i],
                    next_index: i + 1,
                    next_value: gains[i + 1],
                });
            }
        }
        Ok(Self { gains, source })
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn n_users(&self) -> usize {
        self.gains.len()
    }

    pub fn source(&self) -> GainSource {
        self.source
    }
}

/// One exponential variate with the given mean, via the inverse CDF
/// x = −mean·ln(1 − u), u uniform in [0, 1).
///
/// The zero-probability outcome x = 0 (u = 0) is rejected and redrawn so
/// the result is always strictly positive.
pub fn sample_exponential<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    debug_assert!(mean > 0.0 && mean.is_finite());
    loop {
        let u: f64 = rng.random();
        let x = -mean * (-u).ln_1p();
        if x > 0.0 && x.is_finite() {
            return x;
        }
    }
}

/// Draws one gain per user from its exponential law and sorts descending.
///
/// Deterministic for a fixed seed. Equal draws (probability zero) are
/// resolved by redrawing the tied entries from their own means before
/// sorting, which preserves both the per-user law and the strict-order
/// invariant.
pub fn sample_gains(params: &SystemParams, seed: u64) -> Result<ChannelGains, ChannelError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_gains_from(params, &mut rng)
}

/// [`sample_gains`] driven by a caller-owned generator, for simulation
/// workers that manage their own streams.
pub fn sample_gains_from<R: Rng + ?Sized>(
    params: &SystemParams,
    rng: &mut R,
) -> Result<ChannelGains, ChannelError> {
    let means = params.mean_gains();
    let mut gains: Vec<f64> = means.iter().map(|&m| sample_exponential(m, rng)).collect();
    loop {
        let tied = duplicate_positions(&gains);
        if tied.is_empty() {
            break;
        }
        for idx in tied {
            gains[idx] = sample_exponential(means[idx], rng);
        }
    }
    gains.sort_by(|a, b| b.partial_cmp(a).expect("gains are finite"));
    ChannelGains::checked(gains, GainSource::Sampled)
}

fn duplicate_positions(values: &[f64]) -> Vec<usize> {
    let mut tied = Vec::new();
    for i in 0..values.len() {
        if values.iter().filter(|&&v| v == values[i]).count() > 1 {
            tied.push(i);
        }
    }
    tied
}

/// Builds gains from a deterministic profile.
///
/// Arithmetic interprets `base_gain` as the weakest user's gain |h_N|²,
/// harmonic as the strongest user's gain |h_1|². Either way the output is
/// descending by construction and the anchor entry equals `base_gain`
/// exactly.
pub fn profile_gains(profile: &GainProfile, base_gain: f64) -> Result<ChannelGains, ChannelError> {
    check_positive("base_gain", base_gain)?;
    let n = profile.n_users;
    let (gains, source) = match profile.kind {
        ProfileKind::Arithmetic => (
            (1..=n).rev().map(|k| k as f64 * base_gain).collect(),
            GainSource::ProfileArithmetic,
        ),
        ProfileKind::Harmonic => (
            (1..=n).map(|i| base_gain / i as f64).collect(),
            GainSource::ProfileHarmonic,
        ),
    };
    ChannelGains::checked(gains, source)
}
