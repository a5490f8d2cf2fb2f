//! TOML corridor definitions.
//!
//! Units are fixed: minutes, statute miles, USD. A file describes vertiports,
//! then either directional `markets` (one per direction between the campus and
//! the metro side, expanded over the metro vertiports by `demand_share`) or
//! explicit `od_pairs`, or both. Ferry links between campus and metro default
//! to the market's flight time and distance; all other ferry links must be
//! listed under `ferries`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{
    ClockTime, Corridor, CostModel, DemandProfile, DriveAlternative, FatoCapacity, FerryLink,
    FerryMatrix, ODPair, ServiceParams, Side, TimeGrid, Vertiport,
};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorridorConfig {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub time_grid: GridConfig,
    #[serde(default)]
    pub service: ServiceParams,
    #[serde(default)]
    pub costs: CostModel,
    #[serde(default)]
    pub ridehail: RidehailPricing,
    pub vertiports: Vec<VertiportConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub markets: Vec<MarketConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub od_pairs: Vec<OdPairConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ferries: Vec<FerryConfig>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub window_minutes: u32,
    pub num_windows: u32,
    pub day_start: ClockTime,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = TimeGrid::weekday_default();
        GridConfig {
            window_minutes: g.window_minutes,
            num_windows: g.num_windows,
            day_start: g.day_start,
        }
    }
}

/// Ride-hail fare for the first and last mile: `base + per_mile * miles + per_minute * minutes`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RidehailPricing {
    pub enabled: bool,
    pub base_fare: f64,
    pub per_mile: f64,
    pub per_minute: f64,
}

impl Default for RidehailPricing {
    fn default() -> Self {
        RidehailPricing {
            enabled: true,
            base_fare: 2.5,
            per_mile: 1.0,
            per_minute: 0.2,
        }
    }
}

impl RidehailPricing {
    pub fn fare(&self, miles: f64, minutes: f64) -> f64 {
        if !self.enabled || (miles <= 0.0 && minutes <= 0.0) {
            return 0.0;
        }
        self.base_fare + self.per_mile * miles + self.per_minute * minutes
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertiportConfig {
    pub id: String,
    pub name: String,
    pub side: Side,
    #[serde(default)]
    pub fato_capacity: FatoCapacity,
    /// Fraction of the metro-side market using this vertiport. Metro vertiports
    /// without one split the remainder evenly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub demand_share: Option<f64>,
    /// Typical ride-hail leg between the catchment and the vertiport.
    #[serde(default)]
    pub access_minutes: f64,
    #[serde(default)]
    pub access_miles: f64,
}

/// One direction of a campus-metro market, as tabulated per corridor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    pub from: Side,
    pub to: Side,
    pub daily_trips: f64,
    pub drive_miles: f64,
    pub drive_minutes: f64,
    pub ram_miles: f64,
    pub ram_minutes: f64,
    #[serde(default)]
    pub city_heading: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdPairConfig {
    pub origin: String,
    pub destination: String,
    pub daily_trips: f64,
    pub flight_minutes: f64,
    pub flight_miles: f64,
    pub access_minutes: f64,
    pub egress_minutes: f64,
    pub access_cost: f64,
    pub egress_cost: f64,
    pub drive: DriveAlternative,
    pub city_heading: bool,
    /// Defaults to the bimodal weekday profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_weights: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FerryConfig {
    pub from: String,
    pub to: String,
    pub minutes: f64,
    pub miles: f64,
    #[serde(default)]
    pub both_directions: bool,
}

fn lookup(ids: &[String], id: &str, context: &str) -> Result<usize> {
    ids.iter()
        .position(|v| v == id)
        .ok_or_else(|| Error::Config(format!("{context}: unknown vertiport `{id}`")))
}

impl CorridorConfig {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let cfg: CorridorConfig = toml::from_str(text).map_err(|e| Error::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                message: format!(
                    "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                    cfg.schema_version
                ),
            });
        }
        Ok(cfg)
    }

    fn metro_shares(&self) -> Result<Vec<f64>> {
        let metros: Vec<&VertiportConfig> = self
            .vertiports
            .iter()
            .filter(|v| v.side == Side::Metro)
            .collect();
        let given: f64 = metros.iter().filter_map(|v| v.demand_share).sum();
        let open = metros.iter().filter(|v| v.demand_share.is_none()).count();
        if metros
            .iter()
            .filter_map(|v| v.demand_share)
            .any(|s| !(0.0..=1.0).contains(&s))
            || given > 1.0 + 1e-9
        {
            return Err(Error::Config(
                "metro demand_share values must lie in [0, 1] and sum to at most 1".into(),
            ));
        }
        if open == 0 && (given - 1.0).abs() > 1e-9 && !self.markets.is_empty() {
            return Err(Error::Config(format!(
                "metro demand_share values sum to {given}, expected 1"
            )));
        }
        let rest = if open > 0 {
            (1.0 - given) / open as f64
        } else {
            0.0
        };
        Ok(self
            .vertiports
            .iter()
            .map(|v| match v.side {
                Side::Metro => v.demand_share.unwrap_or(rest),
                Side::Campus => 0.0,
            })
            .collect())
    }

    pub fn to_corridor(&self) -> Result<Corridor> {
        let time_grid = TimeGrid::new(
            self.time_grid.window_minutes,
            self.time_grid.num_windows,
            self.time_grid.day_start,
        )?;
        let ids: Vec<String> = self.vertiports.iter().map(|v| v.id.clone()).collect();
        for (i, id) in ids.iter().enumerate() {
            if ids[..i].contains(id) {
                return Err(Error::Config(format!("duplicate vertiport id `{id}`")));
            }
        }
        let vertiports: Vec<Vertiport> = self
            .vertiports
            .iter()
            .map(|v| Vertiport {
                id: v.id.clone(),
                name: v.name.clone(),
                fato_capacity: v.fato_capacity.clone(),
                side: v.side,
            })
            .collect();
        let nv = vertiports.len();
        let mut ferries = FerryMatrix::new(nv);
        let mut od_pairs = Vec::new();
        let mut demand = Vec::new();

        if !self.markets.is_empty() {
            let shares = self.metro_shares()?;
            for (mi, m) in self.markets.iter().enumerate() {
                if m.from == m.to {
                    return Err(Error::Config(format!(
                        "market #{mi}: from and to must be different sides"
                    )));
                }
                for (a, va) in self
                    .vertiports
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.side == m.from)
                {
                    for (b, vb) in self
                        .vertiports
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| v.side == m.to)
                    {
                        let share = if m.from == Side::Metro {
                            shares[a]
                        } else {
                            shares[b]
                        };
                        let city_heading = m.city_heading.unwrap_or(m.to == Side::Metro);
                        od_pairs.push(ODPair {
                            origin: a,
                            destination: b,
                            flight_minutes: m.ram_minutes,
                            flight_miles: m.ram_miles,
                            access_minutes: va.access_minutes,
                            egress_minutes: vb.access_minutes,
                            access_cost: self.ridehail.fare(va.access_miles, va.access_minutes),
                            egress_cost: self.ridehail.fare(vb.access_miles, vb.access_minutes),
                            drive: DriveAlternative::new(m.drive_miles, m.drive_minutes),
                            city_heading,
                        });
                        demand.push(DemandProfile::bimodal_weekday(
                            m.daily_trips * share,
                            &time_grid,
                        ));
                        ferries.set(
                            a,
                            b,
                            FerryLink {
                                minutes: m.ram_minutes,
                                miles: m.ram_miles,
                            },
                        );
                    }
                }
            }
        }
        for (k, od) in self.od_pairs.iter().enumerate() {
            let ctx = format!("od_pairs[{k}]");
            let origin = lookup(&ids, &od.origin, &ctx)?;
            let destination = lookup(&ids, &od.destination, &ctx)?;
            od_pairs.push(ODPair {
                origin,
                destination,
                flight_minutes: od.flight_minutes,
                flight_miles: od.flight_miles,
                access_minutes: od.access_minutes,
                egress_minutes: od.egress_minutes,
                access_cost: od.access_cost,
                egress_cost: od.egress_cost,
                drive: od.drive,
                city_heading: od.city_heading,
            });
            demand.push(match &od.window_weights {
                Some(w) => DemandProfile {
                    daily_trips: od.daily_trips,
                    window_weights: w.clone(),
                },
                None => DemandProfile::bimodal_weekday(od.daily_trips, &time_grid),
            });
            if !ferries.is_set(origin, destination) {
                ferries.set(
                    origin,
                    destination,
                    FerryLink {
                        minutes: od.flight_minutes,
                        miles: od.flight_miles,
                    },
                );
            }
        }
        for (k, f) in self.ferries.iter().enumerate() {
            let ctx = format!("ferries[{k}]");
            let a = lookup(&ids, &f.from, &ctx)?;
            let b = lookup(&ids, &f.to, &ctx)?;
            let link = FerryLink {
                minutes: f.minutes,
                miles: f.miles,
            };
            ferries.set(a, b, link);
            if f.both_directions {
                ferries.set(b, a, link);
            }
        }
        let corridor = Corridor {
            name: self.name.clone(),
            vertiports,
            od_pairs,
            demand,
            time_grid,
            ferries,
            service: self.service,
            costs: self.costs,
        };
        corridor.validate()?;
        Ok(corridor)
    }

    /// Explicit form of `corridor`: every OD pair, weight vector and ferry link spelled out.
    pub fn from_corridor(corridor: &Corridor) -> Self {
        let ids: Vec<&str> = corridor.vertiports.iter().map(|v| v.id.as_str()).collect();
        let nv = ids.len();
        let mut ferries = Vec::new();
        for a in 0..nv {
            for b in 0..nv {
                if let (true, Some(l)) = (a != b, corridor.ferries.get(a, b)) {
                    ferries.push(FerryConfig {
                        from: ids[a].into(),
                        to: ids[b].into(),
                        minutes: l.minutes,
                        miles: l.miles,
                        both_directions: false,
                    });
                }
            }
        }
        CorridorConfig {
            schema_version: SCHEMA_VERSION,
            name: corridor.name.clone(),
            time_grid: GridConfig {
                window_minutes: corridor.time_grid.window_minutes,
                num_windows: corridor.time_grid.num_windows,
                day_start: corridor.time_grid.day_start,
            },
            service: corridor.service,
            costs: corridor.costs,
            ridehail: RidehailPricing::default(),
            vertiports: corridor
                .vertiports
                .iter()
                .map(|v| VertiportConfig {
                    id: v.id.clone(),
                    name: v.name.clone(),
                    side: v.side,
                    fato_capacity: v.fato_capacity.clone(),
                    demand_share: None,
                    access_minutes: 0.0,
                    access_miles: 0.0,
                })
                .collect(),
            markets: Vec::new(),
            od_pairs: corridor
                .od_pairs
                .iter()
                .zip(&corridor.demand)
                .map(|(od, d)| OdPairConfig {
                    origin: ids[od.origin].into(),
                    destination: ids[od.destination].into(),
                    daily_trips: d.daily_trips,
                    flight_minutes: od.flight_minutes,
                    flight_miles: od.flight_miles,
                    access_minutes: od.access_minutes,
                    egress_minutes: od.egress_minutes,
                    access_cost: od.access_cost,
                    egress_cost: od.egress_cost,
                    drive: od.drive,
                    city_heading: od.city_heading,
                    window_weights: Some(d.window_weights.clone()),
                })
                .collect(),
            ferries,
        }
    }
}

pub fn parse_corridor(text: &str, origin: &Path) -> Result<Corridor> {
    CorridorConfig::parse(text, origin)?.to_corridor()
}

pub fn load_corridor(path: &Path) -> Result<Corridor> {
    let text = std::fs::read_to_string(path)?;
    parse_corridor(&text, path)
}

/// TOML text that [`parse_corridor`] turns back into an equal corridor.
pub fn emit_corridor(corridor: &Corridor) -> Result<String> {
    toml::to_string(&CorridorConfig::from_corridor(corridor))
        .map_err(|e| Error::Config(format!("cannot serialize corridor: {e}")))
}

pub const BUNDLED: [(&str, &str); 3] = [
    (
        "tamu_houston",
        include_str!("../../configs/tamu_houston.toml"),
    ),
    (
        "ufl_orlando",
        include_str!("../../configs/ufl_orlando.toml"),
    ),
    (
        "uiuc_chicago",
        include_str!("../../configs/uiuc_chicago.toml"),
    ),
];

/// One of the shipped corridor definitions, by file stem.
pub fn bundled_corridor(name: &str) -> Result<Corridor> {
    let (stem, text) = BUNDLED
        .iter()
        .find(|(stem, _)| *stem == name)
        .ok_or_else(|| {
            Error::Config(format!(
                "no bundled corridor `{name}` (have tamu_houston, ufl_orlando, uiuc_chicago)"
            ))
        })?;
    parse_corridor(text, Path::new(&format!("bundled:{stem}")))
}
