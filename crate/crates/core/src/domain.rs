//! Core data types shared by every stage of the pipeline.
//!
//! Units are fixed throughout: minutes, statute miles, USD.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-seat operating cost per flight hour for the 4-seat reference aircraft.
pub const REFERENCE_PER_FH_PER_SEAT: f64 = 113.0;
/// Per-seat operating cost per flight cycle for the 4-seat reference aircraft.
pub const REFERENCE_PER_FC_PER_SEAT: f64 = 64.0;

/// Wall-clock time of day, stored as minutes after midnight and written as `HH:MM`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockTime(u32);

impl ClockTime {
    pub fn from_hm(hours: u32, minutes: u32) -> Result<Self> {
        if hours >= 24 || minutes >= 60 {
            return Err(Error::invalid(
                "clock time",
                format!("{hours:02}:{minutes:02}"),
            ));
        }
        Ok(ClockTime(hours * 60 + minutes))
    }

    pub fn minutes_after_midnight(self) -> u32 {
        self.0
    }
}

impl fmt::Display for ClockTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", (self.0 / 60) % 24, self.0 % 60)
    }
}

impl std::str::FromStr for ClockTime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (h, m) = s
            .split_once(':')
            .ok_or_else(|| Error::invalid("clock time", format!("`{s}` is not HH:MM")))?;
        let parse = |p: &str| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::invalid("clock time", format!("`{s}` is not HH:MM")))
        };
        ClockTime::from_hm(parse(h)?, parse(m)?)
    }
}

impl Serialize for ClockTime {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClockTime {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Discretization of the operating day into equal windows numbered `1..=num_windows`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub window_minutes: u32,
    pub num_windows: u32,
    pub day_start: ClockTime,
}

impl TimeGrid {
    pub fn new(window_minutes: u32, num_windows: u32, day_start: ClockTime) -> Result<Self> {
        let grid = TimeGrid {
            window_minutes,
            num_windows,
            day_start,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// 06:00 to 22:00 in 15-minute windows.
    pub fn weekday_default() -> Self {
        TimeGrid {
            window_minutes: 15,
            num_windows: 64,
            day_start: ClockTime(6 * 60),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_minutes == 0 {
            return Err(Error::invalid(
                "time grid",
                "window_minutes must be positive",
            ));
        }
        if self.num_windows < 2 {
            return Err(Error::invalid(
                "time grid",
                "num_windows must be at least 2",
            ));
        }
        Ok(())
    }

    /// Number of whole windows occupied by an activity of the given length (ceiling rule).
    pub fn windows_for(&self, minutes: f64) -> u32 {
        if minutes <= 0.0 {
            return 0;
        }
        (minutes / f64::from(self.window_minutes) - 1e-9)
            .ceil()
            .max(1.0) as u32
    }

    /// Length of `windows` windows in hours.
    pub fn hours(&self, windows: u32) -> f64 {
        f64::from(windows) * f64::from(self.window_minutes) / 60.0
    }

    /// Clock minutes (after midnight) at which 1-based window `t` opens.
    pub fn window_start_minutes(&self, t: u32) -> u32 {
        self.day_start.0 + (t - 1) * self.window_minutes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Campus,
    Metro,
}

/// FATO operations allowed per window: a single value or one value per window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FatoCapacity {
    Uniform(u32),
    PerWindow(Vec<u32>),
}

impl FatoCapacity {
    pub const DEFAULT_OPS_PER_WINDOW: u32 = 4;

    /// Capacity in 1-based window `t`.
    pub fn at(&self, t: u32) -> u32 {
        match self {
            FatoCapacity::Uniform(c) => *c,
            FatoCapacity::PerWindow(caps) => caps.get(t as usize - 1).copied().unwrap_or(0),
        }
    }
}

impl Default for FatoCapacity {
    fn default() -> Self {
        FatoCapacity::Uniform(Self::DEFAULT_OPS_PER_WINDOW)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Vertiport {
    pub id: String,
    pub name: String,
    pub fato_capacity: FatoCapacity,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AircraftConfig {
    pub seats: u32,
    pub label: String,
}

impl AircraftConfig {
    pub fn new(seats: u32) -> Result<Self> {
        if seats == 0 {
            return Err(Error::invalid("aircraft", "seats must be at least 1"));
        }
        Ok(AircraftConfig {
            seats,
            label: format!("{seats}-seat"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModel {
    pub per_fh_per_seat: f64,
    pub per_fc_per_seat: f64,
    pub cost_scale: f64,
}

impl CostModel {
    pub const MAX_SCALE: f64 = 1.5;

    pub fn new(per_fh_per_seat: f64, per_fc_per_seat: f64, cost_scale: f64) -> Result<Self> {
        let cm = CostModel {
            per_fh_per_seat,
            per_fc_per_seat,
            cost_scale,
        };
        cm.validate()?;
        Ok(cm)
    }

    /// Reference per-seat OPEX with the given multiplicative scale.
    pub fn with_scale(cost_scale: f64) -> Result<Self> {
        Self::new(
            REFERENCE_PER_FH_PER_SEAT,
            REFERENCE_PER_FC_PER_SEAT,
            cost_scale,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.per_fh_per_seat) || !positive(self.per_fc_per_seat) {
            return Err(Error::invalid(
                "cost model",
                "per-seat costs must be positive",
            ));
        }
        if !(positive(self.cost_scale) && self.cost_scale <= Self::MAX_SCALE) {
            return Err(Error::invalid(
                "cost model",
                format!(
                    "cost_scale {} outside (0, {}]",
                    self.cost_scale,
                    Self::MAX_SCALE
                ),
            ));
        }
        Ok(())
    }
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            per_fh_per_seat: REFERENCE_PER_FH_PER_SEAT,
            per_fc_per_seat: REFERENCE_PER_FC_PER_SEAT,
            cost_scale: 1.0,
        }
    }
}

/// Aircraft-level costs after applying seat count and cost scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledCosts {
    pub per_flight_hour: f64,
    pub per_flight_cycle: f64,
}

impl ScaledCosts {
    /// Cost of one flight occupying `windows` windows; a zero-window wait costs nothing.
    pub fn flight(&self, windows: u32, grid: &TimeGrid) -> f64 {
        if windows == 0 {
            return 0.0;
        }
        self.per_flight_cycle + self.per_flight_hour * grid.hours(windows)
    }
}

pub fn scaled_costs(aircraft: &AircraftConfig, costs: &CostModel) -> ScaledCosts {
    let factor = f64::from(aircraft.seats) * costs.cost_scale;
    ScaledCosts {
        per_flight_hour: costs.per_fh_per_seat * factor,
        per_flight_cycle: costs.per_fc_per_seat * factor,
    }
}

/// How the cost coefficient of utility is derived from the value of time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostCoefficientConvention {
    /// `theta_r = beta_r * VoT / 60`.
    #[default]
    ScaledBeta,
    /// `theta_r = theta_t * 60 / VoT`, i.e. VoT is the time/cost trade-off.
    VotRatio,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ServiceParams {
    pub proc_minutes: f64,
    /// Total ride-hail wait, half charged to access and half to egress.
    pub ridehail_wait_minutes: f64,
    pub vot_per_hour: f64,
    pub beta_r: f64,
    pub beta_t: f64,
    pub convention: CostCoefficientConvention,
}

impl ServiceParams {
    pub const DEFAULT_BETA_T: f64 = -0.03;
    pub const DEFAULT_VOT: f64 = 36.0;

    /// Reference cost coefficient that makes both conventions agree at the default VoT:
    /// `beta_r * VoT/60 == beta_t * 60/VoT`.
    pub fn default_beta_r() -> f64 {
        Self::DEFAULT_BETA_T * 3600.0 / (Self::DEFAULT_VOT * Self::DEFAULT_VOT)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.proc_minutes >= 0.0) || !(self.ridehail_wait_minutes >= 0.0) {
            return Err(Error::invalid(
                "service params",
                "durations must be nonnegative",
            ));
        }
        if !(self.vot_per_hour > 0.0) {
            return Err(Error::invalid(
                "service params",
                "vot_per_hour must be positive",
            ));
        }
        if !(self.beta_r < 0.0) || !(self.beta_t < 0.0) {
            return Err(Error::invalid(
                "service params",
                "beta_r and beta_t must be negative",
            ));
        }
        Ok(())
    }

    /// Time coefficient, utils per minute. Constant across legs.
    pub fn theta_t(&self) -> f64 {
        self.beta_t
    }

    /// Cost coefficient, utils per dollar.
    pub fn theta_r(&self) -> f64 {
        match self.convention {
            CostCoefficientConvention::ScaledBeta => self.beta_r * self.vot_per_hour / 60.0,
            CostCoefficientConvention::VotRatio => self.beta_t * 60.0 / self.vot_per_hour,
        }
    }
}

impl Default for ServiceParams {
    fn default() -> Self {
        ServiceParams {
            proc_minutes: 10.0,
            ridehail_wait_minutes: 10.0,
            vot_per_hour: Self::DEFAULT_VOT,
            beta_r: Self::default_beta_r(),
            beta_t: Self::DEFAULT_BETA_T,
            convention: CostCoefficientConvention::ScaledBeta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveAlternative {
    pub distance_miles: f64,
    pub time_minutes: f64,
    #[serde(default = "DriveAlternative::default_per_mile")]
    pub per_mile_cost: f64,
    /// Charged only on city-heading trips.
    #[serde(default = "DriveAlternative::default_parking")]
    pub parking_fee: f64,
}

impl DriveAlternative {
    pub const DEFAULT_PER_MILE: f64 = 0.64;
    pub const DEFAULT_PARKING: f64 = 20.0;

    fn default_per_mile() -> f64 {
        Self::DEFAULT_PER_MILE
    }

    fn default_parking() -> f64 {
        Self::DEFAULT_PARKING
    }

    pub fn new(distance_miles: f64, time_minutes: f64) -> Self {
        DriveAlternative {
            distance_miles,
            time_minutes,
            per_mile_cost: Self::DEFAULT_PER_MILE,
            parking_fee: Self::DEFAULT_PARKING,
        }
    }
}

/// Ordered origin-destination market between two vertiports (indices into
/// [`Corridor::vertiports`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ODPair {
    pub origin: usize,
    pub destination: usize,
    pub flight_minutes: f64,
    pub flight_miles: f64,
    pub access_minutes: f64,
    pub egress_minutes: f64,
    pub access_cost: f64,
    pub egress_cost: f64,
    pub drive: DriveAlternative,
    pub city_heading: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DemandProfile {
    pub daily_trips: f64,
    /// Share of daily trips departing in each window; sums to 1.
    pub window_weights: Vec<f64>,
}

impl DemandProfile {
    pub const WEIGHT_TOLERANCE: f64 = 1e-9;

    /// Weekday shape: 2x base weight 07:00-10:00 and 16:00-19:00, uniform otherwise.
    pub fn bimodal_weekday(daily_trips: f64, grid: &TimeGrid) -> Self {
        let raw: Vec<f64> = (1..=grid.num_windows)
            .map(|t| {
                let clock = grid.window_start_minutes(t) % (24 * 60);
                let morning = (7 * 60..10 * 60).contains(&clock);
                let evening = (16 * 60..19 * 60).contains(&clock);
                if morning || evening {
                    2.0
                } else {
                    1.0
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        DemandProfile {
            daily_trips,
            window_weights: raw.into_iter().map(|w| w / total).collect(),
        }
    }

    pub fn validate(&self, grid: &TimeGrid) -> Result<()> {
        if !(self.daily_trips >= 0.0) || !self.daily_trips.is_finite() {
            return Err(Error::invalid(
                "demand profile",
                "daily_trips must be nonnegative",
            ));
        }
        if self.window_weights.len() != grid.num_windows as usize {
            return Err(Error::invalid(
                "demand profile",
                format!(
                    "{} window weights for a {}-window grid",
                    self.window_weights.len(),
                    grid.num_windows
                ),
            ));
        }
        if self.window_weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::invalid(
                "demand profile",
                "window weights must be nonnegative",
            ));
        }
        let sum: f64 = self.window_weights.iter().sum();
        if (sum - 1.0).abs() > Self::WEIGHT_TOLERANCE {
            return Err(Error::invalid(
                "demand profile",
                format!("window weights sum to {sum}"),
            ));
        }
        Ok(())
    }

    /// Trips departing in 1-based window `t`.
    pub fn trips_in(&self, t: u32) -> f64 {
        self.daily_trips * self.window_weights[t as usize - 1]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FerryLink {
    pub minutes: f64,
    pub miles: f64,
}

/// Empty-flight times and distances for every ordered vertiport pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FerryMatrix {
    size: usize,
    links: Vec<Option<FerryLink>>,
}

impl FerryMatrix {
    pub fn new(size: usize) -> Self {
        let mut links = vec![None; size * size];
        for v in 0..size {
            links[v * size + v] = Some(FerryLink {
                minutes: 0.0,
                miles: 0.0,
            });
        }
        FerryMatrix { size, links }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn set(&mut self, from: usize, to: usize, link: FerryLink) {
        self.links[from * self.size + to] = Some(link);
    }

    pub fn get(&self, from: usize, to: usize) -> Option<FerryLink> {
        self.links[from * self.size + to]
    }

    pub fn is_set(&self, from: usize, to: usize) -> bool {
        self.get(from, to).is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corridor {
    pub name: String,
    pub vertiports: Vec<Vertiport>,
    pub od_pairs: Vec<ODPair>,
    /// One profile per entry of `od_pairs`.
    pub demand: Vec<DemandProfile>,
    pub time_grid: TimeGrid,
    pub ferries: FerryMatrix,
    pub service: ServiceParams,
    pub costs: CostModel,
}

impl Corridor {
    pub fn vertiport_index(&self, id: &str) -> Option<usize> {
        self.vertiports.iter().position(|v| v.id == id)
    }

    pub fn total_daily_trips(&self) -> f64 {
        self.demand.iter().map(|d| d.daily_trips).sum()
    }

    pub fn validate(&self) -> Result<()> {
        self.time_grid.validate()?;
        self.service.validate()?;
        self.costs.validate()?;
        let nv = self.vertiports.len();
        if nv < 2 {
            return Err(Error::invalid(
                "corridor",
                "at least two vertiports are required",
            ));
        }
        for v in &self.vertiports {
            let low = match &v.fato_capacity {
                FatoCapacity::Uniform(c) => *c == 0,
                FatoCapacity::PerWindow(caps) => {
                    if caps.len() != self.time_grid.num_windows as usize {
                        return Err(Error::invalid(
                            "vertiport",
                            format!(
                                "{}: {} capacities for {} windows",
                                v.id,
                                caps.len(),
                                self.time_grid.num_windows
                            ),
                        ));
                    }
                    caps.contains(&0)
                }
            };
            if low {
                return Err(Error::invalid(
                    "vertiport",
                    format!("{}: FATO capacity must be at least 1 in every window", v.id),
                ));
            }
        }
        if self.demand.len() != self.od_pairs.len() {
            return Err(Error::invalid(
                "corridor",
                "one demand profile per OD pair is required",
            ));
        }
        for (k, od) in self.od_pairs.iter().enumerate() {
            if od.origin >= nv || od.destination >= nv {
                return Err(Error::invalid(
                    "od pair",
                    format!("#{k} references an unknown vertiport"),
                ));
            }
            if od.origin == od.destination {
                return Err(Error::invalid(
                    "od pair",
                    format!("#{k} has origin == destination"),
                ));
            }
            if !(od.flight_minutes > 0.0) || !(od.flight_miles > 0.0) {
                return Err(Error::invalid(
                    "od pair",
                    format!("#{k} needs positive flight time and miles"),
                ));
            }
            let d = &od.drive;
            if !(d.distance_miles > 0.0) || !(d.time_minutes > 0.0) {
                return Err(Error::invalid(
                    "od pair",
                    format!("#{k} drive distance and time must be positive"),
                ));
            }
            if !(d.per_mile_cost >= 0.0) || !(d.parking_fee >= 0.0) {
                return Err(Error::invalid(
                    "od pair",
                    format!("#{k} drive costs must be nonnegative"),
                ));
            }
            let nonneg = [
                od.access_minutes,
                od.egress_minutes,
                od.access_cost,
                od.egress_cost,
            ];
            if nonneg.iter().any(|v| !(*v >= 0.0)) {
                return Err(Error::invalid(
                    "od pair",
                    format!("#{k} access/egress values must be nonnegative"),
                ));
            }
            self.demand[k].validate(&self.time_grid)?;
        }
        if self.ferries.size() != nv {
            return Err(Error::invalid(
                "corridor",
                "ferry matrix size does not match vertiport count",
            ));
        }
        for a in 0..nv {
            for b in 0..nv {
                match self.ferries.get(a, b) {
                    None => {
                        return Err(Error::invalid(
                            "corridor",
                            format!(
                                "no ferry time from {} to {}",
                                self.vertiports[a].id, self.vertiports[b].id
                            ),
                        ))
                    }
                    Some(l) if a != b && !(l.minutes > 0.0 && l.miles >= 0.0) => {
                        return Err(Error::invalid(
                            "corridor",
                            format!(
                                "ferry {}->{} needs positive minutes",
                                self.vertiports[a].id, self.vertiports[b].id
                            ),
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_four_seat_costs() {
        let c = scaled_costs(
            &AircraftConfig::new(4).unwrap(),
            &CostModel::with_scale(1.0).unwrap(),
        );
        assert_eq!(c.per_flight_hour, 452.0);
        assert_eq!(c.per_flight_cycle, 256.0);
    }

    #[test]
    fn eight_seats_at_half_scale_match_four_at_full() {
        let c = scaled_costs(
            &AircraftConfig::new(8).unwrap(),
            &CostModel::with_scale(0.5).unwrap(),
        );
        assert_eq!(c.per_flight_hour, 452.0);
        assert_eq!(c.per_flight_cycle, 256.0);
    }

    #[test]
    fn zero_scale_rejected() {
        assert!(CostModel::with_scale(0.0).is_err());
        assert!(CostModel::with_scale(1.6).is_err());
        assert!(CostModel::with_scale(1.5).is_ok());
        assert!(AircraftConfig::new(0).is_err());
    }

    #[test]
    fn default_grid_is_sixty_four_windows() {
        let g = TimeGrid::weekday_default();
        assert_eq!(g.num_windows, 64);
        assert_eq!(g.window_start_minutes(64), 21 * 60 + 45);
        assert_eq!(g.windows_for(57.0), 4);
        assert_eq!(g.windows_for(60.0), 4);
        assert_eq!(g.windows_for(61.0), 5);
        assert_eq!(g.windows_for(0.0), 0);
    }

    #[test]
    fn bimodal_profile_peaks_and_normalizes() {
        let g = TimeGrid::weekday_default();
        let p = DemandProfile::bimodal_weekday(4980.0, &g);
        p.validate(&g).unwrap();
        // 24 peak windows at weight 2, 40 at weight 1.
        assert!((p.window_weights[0] - 1.0 / 88.0).abs() < 1e-15);
        assert!((p.window_weights[4] - 2.0 / 88.0).abs() < 1e-15);
        assert!((p.window_weights[15] - 2.0 / 88.0).abs() < 1e-15);
        assert!((p.window_weights[16] - 1.0 / 88.0).abs() < 1e-15);
        let total: f64 = (1..=64).map(|t| p.trips_in(t)).sum();
        assert!((total - 4980.0).abs() < 1e-6);
    }

    #[test]
    fn conventions_agree_at_reference_vot() {
        let mut s = ServiceParams::default();
        let base = s.theta_r();
        s.convention = CostCoefficientConvention::VotRatio;
        assert!((base - s.theta_r()).abs() < 1e-15);
        assert!((base + 0.05).abs() < 1e-12);
        // The two conventions move in opposite directions as VoT rises.
        s.vot_per_hour = 72.0;
        let ratio = s.theta_r();
        s.convention = CostCoefficientConvention::ScaledBeta;
        assert!(s.theta_r() < base && ratio > base);
    }

    #[test]
    fn clock_time_round_trip() {
        let t: ClockTime = "06:30".parse().unwrap();
        assert_eq!(t.minutes_after_midnight(), 390);
        assert_eq!(t.to_string(), "06:30");
        assert!("25:00".parse::<ClockTime>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn scaled_costs_linear(seats in 1u32..20, a in 0.05f64..0.7, b in 0.05f64..0.7) {
                let cfg = AircraftConfig::new(seats).unwrap();
                let ca = scaled_costs(&cfg, &CostModel::with_scale(a).unwrap());
                let cb = scaled_costs(&cfg, &CostModel::with_scale(b).unwrap());
                let cab = scaled_costs(&cfg, &CostModel::with_scale(a + b).unwrap());
                prop_assert!((ca.per_flight_hour + cb.per_flight_hour - cab.per_flight_hour).abs() < 1e-9);
                prop_assert!((ca.per_flight_cycle + cb.per_flight_cycle - cab.per_flight_cycle).abs() < 1e-9);
                let one = scaled_costs(&AircraftConfig::new(1).unwrap(), &CostModel::with_scale(a).unwrap());
                prop_assert!((one.per_flight_hour * f64::from(seats) - ca.per_flight_hour).abs() < 1e-9);
            }

            #[test]
            fn demand_conserved(trips in 0.0f64..1e5, windows in 2u32..100, start_h in 0u32..12) {
                let g = TimeGrid::new(15, windows, ClockTime::from_hm(start_h, 0).unwrap()).unwrap();
                let p = DemandProfile::bimodal_weekday(trips, &g);
                let total: f64 = (1..=windows).map(|t| p.trips_in(t)).sum();
                prop_assert!((total - trips).abs() <= 1e-6 * trips.max(1.0));
            }
        }
    }
}
