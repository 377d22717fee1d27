//! Two-user NOMA rate model and optimal power allocation.
//!
//! For a pair (strong, weak) with gains g_m > g_n sharing one resource
//! block, the base station superimposes the two signals with power
//! fractions α_m + α_n = 1. The strong user removes the weak user's signal
//! by SIC before decoding its own; the untrusted weak user decodes its own
//! signal and may then attempt the strong user's. The received SINRs are
//!
//! ```text
//! Γ_mm = α_m·g_m·ρ_t                    Γ_mn = α_m·g_n·ρ_t
//! Γ_nn = α_n·g_n / (α_m·g_n + 1/ρ_t)    Γ_nm = α_n·g_m / (α_m·g_m + 1/ρ_t)
//! ```
//!
//! with ρ_t the transmit SNR. Rates are log2(1 + Γ); the strong user's
//! secrecy rate against the weak user is R_mm − R_mn, which is positive
//! for every α_m > 0 whenever g_m > g_n. Its maximizer under the weak-user
//! rate guarantee R_nn ≥ R_th has the closed form implemented by
//! [`optimal_alpha`].

use std::f64::consts::LN_2;

use thiserror::Error;

/// Split-sum slack tolerated by [`PowerSplit::new`].
pub const SPLIT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NomaError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("pair must be ordered (strong, weak): gain_m = {gain_m} does not exceed gain_n = {gain_n}")]
    PairOrdering { gain_m: f64, gain_n: f64 },
    #[error("SINR must be non-negative, got {0}")]
    NegativeSinr(f64),
    #[error("power split ({alpha_m}, {alpha_n}) invalid: coefficients must lie in [0, 1] and sum to 1")]
    InvalidSplit { alpha_m: f64, alpha_n: f64 },
    #[error("QoS threshold must be positive and finite, got {0}")]
    InvalidQosThreshold(f64),
    #[error("QoS target infeasible: r_th = {r_th} outside the feasible range (0, {upper_bound}) set by the weak user's channel")]
    InfeasibleQos { r_th: f64, upper_bound: f64 },
}

fn check_positive(name: &'static str, value: f64) -> Result<(), NomaError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(NomaError::NonPositive { name, value })
    }
}

/// The pair's power-allocation coefficients (α_m, α_n), summing to 1.
///
/// The domain is the closed interval [0, 1]: the boundary splits (1, 0)
/// and (0, 1) are the ones used by the secrecy-only and weak-rate-only
/// selection objectives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    alpha_m: f64,
    alpha_n: f64,
}

impl PowerSplit {
    pub fn new(alpha_m: f64, alpha_n: f64) -> Result<Self, NomaError> {
        let in_unit = |a: f64| (0.0..=1.0).contains(&a);
        if !in_unit(alpha_m) || !in_unit(alpha_n) || (alpha_m + alpha_n - 1.0).abs() > SPLIT_SUM_TOLERANCE
        {
            return Err(NomaError::InvalidSplit { alpha_m, alpha_n });
        }
        Ok(Self { alpha_m, alpha_n })
    }

    /// Split defined by the strong user's fraction; α_n = 1 − α_m.
    pub fn from_strong_fraction(alpha_m: f64) -> Result<Self, NomaError> {
        if !(0.0..=1.0).contains(&alpha_m) {
            return Err(NomaError::InvalidSplit {
                alpha_m,
                alpha_n: 1.0 - alpha_m,
            });
        }
        Ok(Self {
            alpha_m,
            alpha_n: 1.0 - alpha_m,
        })
    }

    /// (1, 0): everything to the strong user.
    pub fn all_to_strong() -> Self {
        Self { alpha_m: 1.0, alpha_n: 0.0 }
    }

    /// (0, 1): everything to the weak user.
    pub fn all_to_weak() -> Self {
        Self { alpha_m: 0.0, alpha_n: 1.0 }
    }

    pub fn alpha_m(&self) -> f64 {
        self.alpha_m
    }

    pub fn alpha_n(&self) -> f64 {
        self.alpha_n
    }
}

/// Received SINRs for one pair; Γ_ab is user a's signal decoded at user b's
/// side of the link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSinr {
    pub gamma_mm: f64,
    pub gamma_mn: f64,
    pub gamma_nn: f64,
    pub gamma_nm: f64,
}

/// Weak-user QoS target: minimum rate r_th with Π = 2^r_th.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QosTarget {
    r_th: f64,
}

impl QosTarget {
    pub fn new(r_th: f64) -> Result<Self, NomaError> {
        if r_th > 0.0 && r_th.is_finite() {
            Ok(Self { r_th })
        } else {
            Err(NomaError::InvalidQosThreshold(r_th))
        }
    }

    pub fn r_th(&self) -> f64 {
        self.r_th
    }

    /// Π = 2^r_th, always above 1.
    pub fn pi(&self) -> f64 {
        self.r_th.exp2()
    }
}

/// All four received SINRs for the pair (strong = m, weak = n).
pub fn pair_sinr(
    gain_m: f64,
    gain_n: f64,
    split: PowerSplit,
    rho_t: f64,
) -> Result<PairSinr, NomaError> {
    check_positive("gain_m", gain_m)?;
    check_positive("gain_n", gain_n)?;
    check_positive("rho_t", rho_t)?;
    if gain_m <= gain_n {
        return Err(NomaError::PairOrdering { gain_m, gain_n });
    }
    let inv_rho = 1.0 / rho_t;
    Ok(PairSinr {
        gamma_mm: split.alpha_m * gain_m * rho_t,
        gamma_mn: split.alpha_m * gain_n * rho_t,
        gamma_nn: split.alpha_n * gain_n / (split.alpha_m * gain_n + inv_rho),
        gamma_nm: split.alpha_n * gain_m / (split.alpha_m * gain_m + inv_rho),
    })
}

/// Shannon rate log2(1 + sinr) in bits/s/Hz.
pub fn rate_from_sinr(sinr: f64) -> Result<f64, NomaError> {
    if sinr < 0.0 || sinr.is_nan() {
        return Err(NomaError::NegativeSinr(sinr));
    }
    Ok((1.0 + sinr).log2())
}

/// Strong user's secrecy rate against the untrusted weak user,
/// R_mm − R_mn = log2((1 + Γ_mm)/(1 + Γ_mn)).
///
/// Never negative when gain_m > gain_n; zero only at α_m = 0.
pub fn secrecy_rate_strong(
    gain_m: f64,
    gain_n: f64,
    split: PowerSplit,
    rho_t: f64,
) -> Result<f64, NomaError> {
    let s = pair_sinr(gain_m, gain_n, split, rho_t)?;
    Ok(rate_from_sinr(s.gamma_mm)? - rate_from_sinr(s.gamma_mn)?)
}

/// Weak user's secrecy rate against the strong user, R_nn − R_nm.
///
/// Non-positive for every split when gain_m > gain_n: the strong user
/// always decodes the weak user's signal at least as fast as the weak user
/// itself.
pub fn secrecy_rate_weak(
    gain_m: f64,
    gain_n: f64,
    split: PowerSplit,
    rho_t: f64,
) -> Result<f64, NomaError> {
    let s = pair_sinr(gain_m, gain_n, split, rho_t)?;
    Ok(rate_from_sinr(s.gamma_nn)? - rate_from_sinr(s.gamma_nm)?)
}

/// Weak user's own data rate R_nn = log2(1 + Γ_nn).
pub fn weak_user_rate(
    gain_m: f64,
    gain_n: f64,
    split: PowerSplit,
    rho_t: f64,
) -> Result<f64, NomaError> {
    let s = pair_sinr(gain_m, gain_n, split, rho_t)?;
    rate_from_sinr(s.gamma_nn)
}

/// Whether user a can achieve a positive secrecy rate against eavesdropper
/// b: true iff gain_a > gain_b.
pub fn positive_secrecy_feasible(gain_a: f64, gain_b: f64) -> bool {
    gain_a > 0.0 && gain_b > 0.0 && gain_a > gain_b
}

/// Exclusive supremum of feasible QoS thresholds for a weak user with the
/// given gain: log2(gain_n·ρ_t + 1). [`optimal_alpha`] accepts any r_th
/// strictly inside (0, this).
pub fn rth_upper_bound(gain_n: f64, rho_t: f64) -> f64 {
    (gain_n * rho_t + 1.0).log2()
}

/// Closed-form power split maximizing the strong user's secrecy rate
/// subject to the weak user's rate guarantee R_nn ≥ r_th:
///
/// ```text
/// α_m* = (g_n·ρ_t − Π + 1) / (Π·g_n·ρ_t),   Π = 2^r_th.
/// ```
///
/// The secrecy rate grows with α_m, so the guarantee is active at the
/// optimum: the returned split gives the weak user exactly r_th. Outside
/// the feasible range (0, [`rth_upper_bound`]) this returns
/// [`NomaError::InfeasibleQos`] carrying the range; it never clamps.
pub fn optimal_alpha(gain_n: f64, rho_t: f64, target: QosTarget) -> Result<PowerSplit, NomaError> {
    check_positive("gain_n", gain_n)?;
    check_positive("rho_t", rho_t)?;
    let x = gain_n * rho_t;
    let upper = rth_upper_bound(gain_n, rho_t);
    if target.r_th >= upper {
        return Err(NomaError::InfeasibleQos {
            r_th: target.r_th,
            upper_bound: upper,
        });
    }
    let pi = target.pi();
    let alpha_m = (x - pi + 1.0) / (pi * x);
    debug_assert!(alpha_m > 0.0 && alpha_m < 1.0);
    PowerSplit::from_strong_fraction(alpha_m)
}

/// Slope of the strong user's secrecy rate in α_m,
/// (g_m − g_n)·ρ_t / (ln2·(1 + α_m·g_m·ρ_t)(1 + α_m·g_n·ρ_t)).
///
/// Strictly positive for g_m > g_n: more power to the strong user always
/// helps its secrecy. Equal gains are tolerated here (slope 0) even though
/// the rate functions themselves require strict ordering.
pub fn secrecy_rate_derivative(
    gain_m: f64,
    gain_n: f64,
    split: PowerSplit,
    rho_t: f64,
) -> Result<f64, NomaError> {
    check_positive("gain_m", gain_m)?;
    check_positive("gain_n", gain_n)?;
    check_positive("rho_t", rho_t)?;
    if gain_m < gain_n {
        return Err(NomaError::PairOrdering { gain_m, gain_n });
    }
    let d1 = 1.0 + split.alpha_m * gain_m * rho_t;
    let d2 = 1.0 + split.alpha_m * gain_n * rho_t;
    Ok((gain_m - gain_n) * rho_t / (LN_2 * d1 * d2))
}

/// Slope of the weak user's received SINR Γ_nn in α_m,
/// −g_n·(g_n·ρ_t + 1)·ρ_t / (α_m·g_n·ρ_t + 1)².
///
/// Strictly negative: any extra power for the strong user lowers the weak
/// user's SINR, and therefore its rate R_nn = log2(1 + Γ_nn). The rate's
/// own slope is this value divided by ln2·(1 + Γ_nn).
pub fn weak_rate_derivative(gain_n: f64, split: PowerSplit, rho_t: f64) -> Result<f64, NomaError> {
    check_positive("gain_n", gain_n)?;
    check_positive("rho_t", rho_t)?;
    let x = gain_n * rho_t;
    let d = split.alpha_m * x + 1.0;
    Ok(-(gain_n * (x + 1.0) * rho_t) / (d * d))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LOG2_10_OVER_5P5: f64 = 0.8624964762500651;
    const LOG2_2P5: f64 = 1.3219280948873623;
    const LOG2_11: f64 = 3.4594316186372973;

    fn split(alpha_m: f64) -> PowerSplit {
        PowerSplit::from_strong_fraction(alpha_m).unwrap()
    }

    #[test]
    fn pair_sinr_matches_hand_computed_values() {
        // gain_m*rho = 20, gain_n*rho = 10, alpha_m = 0.45.
        let s = pair_sinr(20.0, 10.0, split(0.45), 1.0).unwrap();
        assert!((s.gamma_mm - 9.0).abs() < 1e-12);
        assert!((s.gamma_mn - 4.5).abs() < 1e-12);
        assert!((s.gamma_nn - 1.0).abs() < 1e-12);
        assert!((s.gamma_nm - 1.1).abs() < 1e-12);
    }

    #[test]
    fn pair_sinr_boundary_splits() {
        let s = pair_sinr(20.0, 10.0, PowerSplit::all_to_strong(), 1.0).unwrap();
        assert_eq!(s.gamma_nn, 0.0);
        assert_eq!(s.gamma_nm, 0.0);
        assert!((s.gamma_mm - 20.0).abs() < 1e-12);
        assert!((s.gamma_mn - 10.0).abs() < 1e-12);

        let s = pair_sinr(20.0, 10.0, PowerSplit::all_to_weak(), 1.0).unwrap();
        assert_eq!(s.gamma_mm, 0.0);
        assert_eq!(s.gamma_mn, 0.0);
        assert!((s.gamma_nn - 10.0).abs() < 1e-12);
        assert!((s.gamma_nm - 20.0).abs() < 1e-12);
    }

    #[test]
    fn pair_sinr_rejects_misordered_pair() {
        assert!(matches!(
            pair_sinr(10.0, 20.0, split(0.5), 1.0),
            Err(NomaError::PairOrdering { .. })
        ));
        assert!(pair_sinr(10.0, 10.0, split(0.5), 1.0).is_err());
        assert!(pair_sinr(10.0, 5.0, split(0.5), 0.0).is_err());
    }

    #[test]
    fn rate_from_sinr_examples() {
        assert_eq!(rate_from_sinr(0.0).unwrap(), 0.0);
        assert!((rate_from_sinr(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((rate_from_sinr(3.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(
            rate_from_sinr(-0.1),
            Err(NomaError::NegativeSinr(_))
        ));
    }

    #[test]
    fn strong_secrecy_examples() {
        let r = secrecy_rate_strong(20.0, 10.0, split(0.45), 1.0).unwrap();
        assert!((r - LOG2_10_OVER_5P5).abs() < 1e-12);

        // Arithmetic profile pair (1,4) at |h_4|^2 * rho_t = 1, alpha_m = 1.
        let r = secrecy_rate_strong(4.0, 1.0, PowerSplit::all_to_strong(), 1.0).unwrap();
        assert!((r - LOG2_2P5).abs() < 1e-12);

        // Equal-gain limit.
        let r = secrecy_rate_strong(10.0 + 1e-9, 10.0, split(0.7), 1.0).unwrap();
        assert!(r > 0.0 && r < 1e-8);
    }

    #[test]
    fn weak_user_rate_examples() {
        let r = weak_user_rate(5.0, 3.0, PowerSplit::all_to_weak(), 1.0).unwrap();
        assert!((r - 2.0).abs() < 1e-15);
        let r = weak_user_rate(5.0, 3.0, PowerSplit::all_to_strong(), 1.0).unwrap();
        assert_eq!(r, 0.0);
        let r = weak_user_rate(20.0, 10.0, split(0.45), 1.0).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn positive_secrecy_only_for_the_stronger_side() {
        assert!(positive_secrecy_feasible(4.0, 1.0));
        assert!(!positive_secrecy_feasible(1.0, 4.0));
        assert!(!positive_secrecy_feasible(3.0, 3.0));
        assert!(!positive_secrecy_feasible(0.0, 1.0));
    }

    #[test]
    fn rth_upper_bound_examples() {
        assert!((rth_upper_bound(1.0, 1.0) - 1.0).abs() < 1e-15);
        assert!((rth_upper_bound(10.0, 1.0) - LOG2_11).abs() < 1e-12);
        assert!((rth_upper_bound(3.0, 1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn optimal_alpha_closed_form() {
        let s = optimal_alpha(10.0, 1.0, QosTarget::new(1.0).unwrap()).unwrap();
        assert!((s.alpha_m() - 0.45).abs() < 1e-15);
        assert!((s.alpha_m() + s.alpha_n() - 1.0).abs() <= SPLIT_SUM_TOLERANCE);
        // The guarantee is active at the optimum.
        let r = weak_user_rate(20.0, 10.0, s, 1.0).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn optimal_alpha_limits() {
        // r_th -> 0+ pushes everything to the strong user.
        let s = optimal_alpha(10.0, 1.0, QosTarget::new(1e-12).unwrap()).unwrap();
        assert!(s.alpha_m() > 0.999_999_999);
        assert!(s.alpha_m() < 1.0);

        // r_th -> upper bound leaves the strong user almost nothing.
        let ub = rth_upper_bound(10.0, 1.0);
        let s = optimal_alpha(10.0, 1.0, QosTarget::new(ub - 1e-12).unwrap()).unwrap();
        assert!(s.alpha_m() > 0.0);
        assert!(s.alpha_m() < 1e-9);
    }

    #[test]
    fn optimal_alpha_rejects_out_of_range_targets() {
        assert!(QosTarget::new(0.0).is_err());
        assert!(QosTarget::new(-0.5).is_err());
        let ub = rth_upper_bound(10.0, 1.0);
        match optimal_alpha(10.0, 1.0, QosTarget::new(ub).unwrap()) {
            Err(NomaError::InfeasibleQos { upper_bound, .. }) => {
                assert!((upper_bound - ub).abs() < 1e-15);
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
        assert!(optimal_alpha(10.0, 1.0, QosTarget::new(ub + 0.1).unwrap()).is_err());
    }

    #[test]
    fn secrecy_derivative_examples() {
        // Equal gains: slope vanishes.
        let d = secrecy_rate_derivative(3.0, 3.0, split(0.4), 1.0).unwrap();
        assert_eq!(d, 0.0);
        // alpha_m = 0: denominators collapse to 1.
        let d = secrecy_rate_derivative(20.0, 10.0, PowerSplit::all_to_weak(), 1.0).unwrap();
        assert!((d - 10.0 / LN_2).abs() < 1e-12);
        assert!(secrecy_rate_derivative(10.0, 20.0, split(0.4), 1.0).is_err());
    }

    #[test]
    fn secrecy_derivative_matches_finite_difference() {
        let h = 1e-6;
        let f = |a: f64| secrecy_rate_strong(20.0, 10.0, split(a), 1.0).unwrap();
        let fd = (f(0.45 + h) - f(0.45 - h)) / (2.0 * h);
        let d = secrecy_rate_derivative(20.0, 10.0, split(0.45), 1.0).unwrap();
        assert!((d - fd).abs() / fd.abs() < 1e-8, "analytic {d} vs fd {fd}");
    }

    #[test]
    fn weak_derivative_value_and_sign() {
        // alpha_m = 0, gain_n*rho_t = 1: slope is -x(x+1) = -2.
        let d = weak_rate_derivative(1.0, PowerSplit::all_to_weak(), 1.0).unwrap();
        assert!((d + 2.0).abs() < 1e-15);
        for a in [0.0, 0.3, 0.7, 1.0] {
            let d = weak_rate_derivative(5.0, split(a), 2.0).unwrap();
            assert!(d < 0.0);
        }
    }

    #[test]
    fn weak_derivative_matches_sinr_finite_difference() {
        // The formula is the slope of Γ_nn; check it directly, then check
        // it against the slope of the rate through the exact chain rule
        // d(R_nn)/dα = slope / (ln2 · (1 + Γ_nn)).
        let h = 1e-6;
        let (gm, gn, rho, a) = (20.0, 10.0, 1.0, 0.45);
        let gamma = |a: f64| pair_sinr(gm, gn, split(a), rho).unwrap().gamma_nn;
        let fd_sinr = (gamma(a + h) - gamma(a - h)) / (2.0 * h);
        let d = weak_rate_derivative(gn, split(a), rho).unwrap();
        assert!((d - fd_sinr).abs() / fd_sinr.abs() < 1e-8);

        let rate = |a: f64| weak_user_rate(gm, gn, split(a), rho).unwrap();
        let fd_rate = (rate(a + h) - rate(a - h)) / (2.0 * h);
        let rate_slope = d / (LN_2 * (1.0 + gamma(a)));
        assert!((rate_slope - fd_rate).abs() / fd_rate.abs() < 1e-8);
    }

    #[test]
    fn power_split_validation() {
        assert!(PowerSplit::new(0.45, 0.55).is_ok());
        assert!(PowerSplit::new(0.0, 1.0).is_ok());
        assert!(PowerSplit::new(1.0, 0.0).is_ok());
        assert!(PowerSplit::new(0.5, 0.6).is_err());
        assert!(PowerSplit::new(-0.1, 1.1).is_err());
        assert!(PowerSplit::from_strong_fraction(1.5).is_err());
        assert!(PowerSplit::from_strong_fraction(-0.0).is_ok());
    }

    #[test]
    fn qos_target_pi() {
        let t = QosTarget::new(0.5).unwrap();
        assert!((t.pi() - 2f64.sqrt()).abs() < 1e-15);
        assert!(t.pi() > 1.0);
    }

    mod proptests {
        use super::*;
        use proptest::prelude::*;

        fn gains_and_rho() -> impl Strategy<Value = (f64, f64, f64)> {
            // (gain_m, gain_n, rho_t) with a real gap between the gains.
            (1e-3f64..1e3, 1.1f64..100.0, 1e-2f64..1e4)
                .prop_map(|(gn, ratio, rho)| (gn * ratio, gn, rho))
        }

        proptest! {
            #[test]
            fn secrecy_increases_with_alpha((gm, gn, rho) in gains_and_rho(),
                                            a in 0.0f64..0.999,
                                            gap in 1e-4f64..0.5) {
                let b = (a + gap).min(1.0);
                prop_assume!(b > a);
                let lo = secrecy_rate_strong(gm, gn, split(a), rho).unwrap();
                let hi = secrecy_rate_strong(gm, gn, split(b), rho).unwrap();
                prop_assert!(hi > lo, "secrecy at {b} = {hi} not above {a} = {lo}");
            }

            #[test]
            fn rates_depend_only_on_gain_rho_products((gm, gn, rho) in gains_and_rho(),
                                                      a in 0.0f64..=1.0,
                                                      scale in 1e-3f64..1e3) {
                let s = split(a);
                let direct = secrecy_rate_strong(gm, gn, s, rho).unwrap();
                let scaled = secrecy_rate_strong(gm * scale, gn * scale, s, rho / scale).unwrap();
                prop_assert!((direct - scaled).abs() <= 1e-12 * direct.abs().max(1.0));

                let direct = weak_user_rate(gm, gn, s, rho).unwrap();
                let scaled = weak_user_rate(gm * scale, gn * scale, s, rho / scale).unwrap();
                prop_assert!((direct - scaled).abs() <= 1e-12 * direct.abs().max(1.0));
            }

            #[test]
            fn secrecy_signs_follow_the_gain_order((gm, gn, rho) in gains_and_rho(),
                                                   a in 0.0f64..=1.0) {
                let s = split(a);
                let strong = secrecy_rate_strong(gm, gn, s, rho).unwrap();
                prop_assert!(strong >= 0.0);
                if a > 0.0 {
                    prop_assert!(strong > 0.0);
                }
                let weak = secrecy_rate_weak(gm, gn, s, rho).unwrap();
                prop_assert!(weak <= 0.0);
            }

            #[test]
            fn guarantee_is_active_at_the_optimum((gm, gn, rho) in gains_and_rho(),
                                                  frac in 0.01f64..0.99) {
                let r_th = frac * rth_upper_bound(gn, rho);
                prop_assume!(r_th > 0.0);
                let s = optimal_alpha(gn, rho, QosTarget::new(r_th).unwrap()).unwrap();
                prop_assert!(s.alpha_m() > 0.0 && s.alpha_m() < 1.0);
                let got = weak_user_rate(gm, gn, s, rho).unwrap();
                prop_assert!((got - r_th).abs() < 1e-9, "rate {got} vs target {r_th}");
            }
        }
    }
}
