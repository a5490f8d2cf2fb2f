//! Binary logit mode choice (RAM vs. drive) and its market-share inversion.

use serde::{Deserialize, Serialize};

use crate::domain::{DriveAlternative, ODPair, ServiceParams};
use crate::error::{Error, Result};

/// Share domain clamp used by every optimization path.
pub const SHARE_EPSILON: f64 = 1e-4;

/// Everything the logit model needs about one OD pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeContext {
    pub t_ram: f64,
    pub t_drive: f64,
    pub r_drive: f64,
    pub theta_t: f64,
    pub theta_r: f64,
    pub v_drive: f64,
    /// Ride-hail fares paid by the passenger on top of the operator fare.
    pub access_egress_cost: f64,
}

impl ModeContext {
    pub fn new(t_ram: f64, t_drive: f64, r_drive: f64, theta_t: f64, theta_r: f64) -> Self {
        ModeContext {
            t_ram,
            t_drive,
            r_drive,
            theta_t,
            theta_r,
            v_drive: theta_t * t_drive + theta_r * r_drive,
            access_egress_cost: 0.0,
        }
    }

    pub fn for_od(od: &ODPair, params: &ServiceParams) -> Self {
        let mut ctx = ModeContext::new(
            door_to_door_time(od, params),
            od.drive.time_minutes,
            drive_cost(&od.drive, od.city_heading),
            params.theta_t(),
            params.theta_r(),
        );
        ctx.access_egress_cost = od.access_cost + od.egress_cost;
        ctx
    }

    /// Systematic RAM utility when the operator charges `fare`.
    pub fn ram_utility(&self, fare: f64) -> f64 {
        self.theta_t * self.t_ram + self.theta_r * (fare + self.access_egress_cost)
    }

    /// `V_drive - theta_t * t_ram - theta_r * access_egress_cost`: the constant that
    /// multiplies the share in the inverted revenue.
    pub fn revenue_offset(&self) -> f64 {
        self.v_drive - self.theta_t * self.t_ram - self.theta_r * self.access_egress_cost
    }
}

/// Access (plus half the ride-hail wait), processing, flight, egress (plus the other half).
pub fn door_to_door_time(od: &ODPair, params: &ServiceParams) -> f64 {
    let half_wait = params.ridehail_wait_minutes / 2.0;
    od.access_minutes
        + half_wait
        + params.proc_minutes
        + od.flight_minutes
        + od.egress_minutes
        + half_wait
}

pub fn drive_cost(drive: &DriveAlternative, city_heading: bool) -> f64 {
    let parking = if city_heading { drive.parking_fee } else { 0.0 };
    drive.distance_miles * drive.per_mile_cost + parking
}

/// Probability of choosing RAM; stable for utilities of any magnitude.
pub fn logit_share(v_ram: f64, v_drive: f64) -> f64 {
    let m = v_ram.max(v_drive);
    let a = (v_ram - m).exp();
    let b = (v_drive - m).exp();
    a / (a + b)
}

fn check_share(share: f64) -> Result<()> {
    if share > 0.0 && share < 1.0 {
        Ok(())
    } else {
        Err(Error::ShareDomain(share))
    }
}

/// Operator fare that yields RAM share `share`.
pub fn invert_share_to_fare(share: f64, ctx: &ModeContext) -> Result<f64> {
    check_share(share)?;
    let log_odds = share.ln() - (-share).ln_1p();
    let total = (log_odds + ctx.v_drive - ctx.theta_t * ctx.t_ram) / ctx.theta_r;
    Ok(total - ctx.access_egress_cost)
}

/// Daily revenue of a leg carrying share `share` of `trips`, in the entropy form
/// `(d / theta_r) [w ln w - w ln(1 - w) + w * offset]`.
pub fn leg_revenue_term(share: f64, ctx: &ModeContext, trips: f64) -> Result<f64> {
    check_share(share)?;
    if trips == 0.0 {
        return Ok(0.0);
    }
    let entropy = share * share.ln() - share * (-share).ln_1p();
    Ok(trips / ctx.theta_r * (entropy + share * ctx.revenue_offset()))
}

/// Same quantity as [`leg_revenue_term`], computed as `d * w * fare(w)`.
pub fn leg_revenue_direct(share: f64, ctx: &ModeContext, trips: f64) -> Result<f64> {
    Ok(trips * share * invert_share_to_fare(share, ctx)?)
}

/// Derivative of [`leg_revenue_term`] with respect to the share.
pub fn leg_revenue_slope(share: f64, ctx: &ModeContext, trips: f64) -> f64 {
    let one_minus = 1.0 - share;
    trips / ctx.theta_r
        * (share.ln() + 1.0 - one_minus.ln() + share / one_minus + ctx.revenue_offset())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{DriveAlternative, ServiceParams};

    fn tamu_houston() -> ODPair {
        ODPair {
            origin: 0,
            destination: 1,
            flight_minutes: 57.0,
            flight_miles: 84.5,
            access_minutes: 15.0,
            egress_minutes: 20.0,
            access_cost: 0.0,
            egress_cost: 0.0,
            drive: DriveAlternative::new(95.5, 102.0),
            city_heading: true,
        }
    }

    fn ctx() -> ModeContext {
        ModeContext::for_od(&tamu_houston(), &ServiceParams::default())
    }

    #[test]
    fn door_to_door_assembly() {
        let params = ServiceParams::default();
        assert_eq!(door_to_door_time(&tamu_houston(), &params), 112.0);
        let mut bare = tamu_houston();
        bare.access_minutes = 0.0;
        bare.egress_minutes = 0.0;
        let none = ServiceParams {
            proc_minutes: 0.0,
            ridehail_wait_minutes: 0.0,
            ..params
        };
        assert_eq!(door_to_door_time(&bare, &none), 57.0);
        let mut back = tamu_houston();
        std::mem::swap(&mut back.origin, &mut back.destination);
        assert_eq!(
            door_to_door_time(&back, &params),
            door_to_door_time(&tamu_houston(), &params)
        );
    }

    #[test]
    fn drive_cost_parking_rule() {
        assert!((drive_cost(&DriveAlternative::new(95.5, 102.0), true) - 81.12).abs() < 1e-9);
        assert!((drive_cost(&DriveAlternative::new(95.7, 100.0), false) - 61.248).abs() < 1e-9);
        assert_eq!(drive_cost(&DriveAlternative::new(0.0, 1.0), true), 20.0);
    }

    #[test]
    fn logit_closed_forms() {
        assert_eq!(logit_share(-3.0, -3.0), 0.5);
        assert!((logit_share(-1.0 + 3f64.ln(), -1.0) - 0.75).abs() < 1e-15);
        let mut last = 1.0;
        for v in [-1.0, -10.0, -100.0, -700.0] {
            let s = logit_share(v, 0.0);
            assert!(s < last && s.is_finite());
            last = s;
        }
        assert_eq!(logit_share(-1e6, 0.0), 0.0);
        assert_eq!(logit_share(1e6, 0.0), 1.0);
    }

    #[test]
    fn half_share_cancels_log_odds() {
        let c = ctx();
        let fare = invert_share_to_fare(0.5, &c).unwrap();
        assert!((fare - (c.v_drive - c.theta_t * c.t_ram) / c.theta_r).abs() < 1e-12);
    }

    #[test]
    fn inversion_round_trips() {
        let mut c = ctx();
        for ae in [0.0, 17.5] {
            c.access_egress_cost = ae;
            for k in 1..10 {
                let w = f64::from(k) / 10.0;
                let fare = invert_share_to_fare(w, &c).unwrap();
                assert!((logit_share(c.ram_utility(fare), c.v_drive) - w).abs() < 1e-9);
                assert!(
                    (logit_share(c.theta_t * c.t_ram + c.theta_r * (fare + ae), c.v_drive) - w)
                        .abs()
                        < 1e-9
                );
            }
        }
    }

    #[test]
    fn share_domain_errors() {
        let c = ctx();
        assert!(matches!(
            invert_share_to_fare(1.0, &c),
            Err(Error::ShareDomain(_))
        ));
        assert!(invert_share_to_fare(0.0, &c).is_err());
        assert!(leg_revenue_term(1.2, &c, 10.0).is_err());
    }

    #[test]
    fn revenue_paths_agree() {
        let mut c = ctx();
        c.access_egress_cost = 12.0;
        for k in 1..100 {
            let w = f64::from(k) / 100.0;
            let a = leg_revenue_term(w, &c, 37.0).unwrap();
            let b = leg_revenue_direct(w, &c, 37.0).unwrap();
            assert!(
                (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0),
                "{w}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn revenue_limits() {
        let c = ctx();
        assert!(leg_revenue_term(1e-12, &c, 50.0).unwrap().abs() < 1e-7);
        assert_eq!(leg_revenue_term(0.3, &c, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn slope_matches_finite_difference() {
        let c = ctx();
        for w in [0.01, 0.2, 0.5, 0.8, 0.97] {
            let h = 1e-6;
            let fd = (leg_revenue_term(w + h, &c, 20.0).unwrap()
                - leg_revenue_term(w - h, &c, 20.0).unwrap())
                / (2.0 * h);
            assert!((fd - leg_revenue_slope(w, &c, 20.0)).abs() < 1e-4 * fd.abs().max(1.0));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_ctx() -> impl Strategy<Value = ModeContext> {
            (
                30.0f64..300.0,
                30.0f64..300.0,
                0.0f64..200.0,
                -0.1f64..-0.001,
                -0.2f64..-0.001,
                0.0f64..50.0,
            )
                .prop_map(|(tr, td, rd, tt, trr, ae)| {
                    let mut c = ModeContext::new(tr, td, rd, tt, trr);
                    c.access_egress_cost = ae;
                    c
                })
        }

        proptest! {
            #[test]
            fn round_trip(c in any_ctx(), w in SHARE_EPSILON..1.0 - SHARE_EPSILON) {
                let fare = invert_share_to_fare(w, &c).unwrap();
                prop_assert!((logit_share(c.ram_utility(fare), c.v_drive) - w).abs() <= 1e-9);
            }

            #[test]
            fn fare_decreasing(c in any_ctx(), a in 0.001f64..0.998, gap in 1e-4f64..1e-3) {
                let b = a + gap;
                prop_assert!(invert_share_to_fare(a, &c).unwrap() > invert_share_to_fare(b, &c).unwrap());
            }

            #[test]
            fn revenue_concave(c in any_ctx(), d in 1.0f64..200.0) {
                let h = 0.005;
                let mut w = 0.01;
                while w + h < 0.99 {
                    let f = |x: f64| leg_revenue_term(x, &c, d).unwrap();
                    prop_assert!(f(w - h) + f(w + h) - 2.0 * f(w) < 0.0);
                    w += 0.01;
                }
            }
        }
    }
}
