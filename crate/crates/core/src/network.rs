//! Time-expanded leg and repositioning-arc construction.

use serde::{Deserialize, Serialize};

use crate::domain::{Corridor, TimeGrid};
use crate::error::{Error, Result};

/// A dispatchable flight on one OD pair departing in one window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlightLeg {
    pub origin: usize,
    pub destination: usize,
    pub dep_window: u32,
    pub arr_window: u32,
    pub flight_windows: u32,
    pub od_ref: usize,
    /// Addressable trips in the departure window.
    pub demand: f64,
}

/// Connection from the end of leg `from_leg` to the start of leg `to_leg`.
///
/// Ferries depart as late as possible, arriving exactly when `to_leg` departs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepositionArc {
    pub from_leg: usize,
    pub to_leg: usize,
    pub ferry_windows: u32,
    pub ferry_dep_window: u32,
    pub ferry_arr_window: u32,
}

impl RepositionArc {
    /// Same-vertiport ground wait; no flight, no FATO use.
    pub fn is_wait(&self) -> bool {
        self.ferry_windows == 0
    }
}

/// Ferry durations in windows for every ordered vertiport pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FerryWindows {
    size: usize,
    windows: Vec<u32>,
}

impl FerryWindows {
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> u32) -> Self {
        let mut windows = Vec::with_capacity(size * size);
        for a in 0..size {
            for b in 0..size {
                windows.push(if a == b { 0 } else { f(a, b) });
            }
        }
        FerryWindows { size, windows }
    }

    pub fn for_corridor(corridor: &Corridor) -> Self {
        let grid = corridor.time_grid;
        Self::from_fn(corridor.vertiports.len(), |a, b| {
            let link = corridor
                .ferries
                .get(a, b)
                .expect("validated corridor has a complete ferry matrix");
            grid.windows_for(link.minutes)
        })
    }

    pub fn get(&self, from: usize, to: usize) -> u32 {
        self.windows[from * self.size + to]
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// One leg for every (OD pair, departure window) whose arrival fits in the horizon.
pub fn build_legs(corridor: &Corridor) -> Result<Vec<FlightLeg>> {
    let grid: &TimeGrid = &corridor.time_grid;
    let horizon = grid.num_windows;
    let mut legs = Vec::new();
    for (k, od) in corridor.od_pairs.iter().enumerate() {
        let f = grid.windows_for(od.flight_minutes);
        if f >= horizon {
            continue;
        }
        let profile = &corridor.demand[k];
        for dep in 1..=horizon - f {
            legs.push(FlightLeg {
                origin: od.origin,
                destination: od.destination,
                dep_window: dep,
                arr_window: dep + f,
                flight_windows: f,
                od_ref: k,
                demand: profile.trips_in(dep),
            });
        }
    }
    if legs.is_empty() {
        return Err(Error::Config(format!(
            "no flight fits within the {horizon}-window horizon of corridor `{}`",
            corridor.name
        )));
    }
    Ok(legs)
}

/// Every ordered leg pair `(i, j)` with `arr(i) + ferry(dest(i), orig(j)) <= dep(j)`.
pub fn build_reposition_arcs(legs: &[FlightLeg], ferry: &FerryWindows) -> Vec<RepositionArc> {
    let mut arcs = Vec::new();
    for (i, li) in legs.iter().enumerate() {
        for (j, lj) in legs.iter().enumerate() {
            if lj.dep_window < li.arr_window {
                continue;
            }
            let f = ferry.get(li.destination, lj.origin);
            if li.arr_window + f <= lj.dep_window {
                arcs.push(RepositionArc {
                    from_leg: i,
                    to_leg: j,
                    ferry_windows: f,
                    ferry_dep_window: lj.dep_window - f,
                    ferry_arr_window: lj.dep_window,
                });
            }
        }
    }
    arcs
}

/// Leg and arc indices touching one vertiport in one window.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WindowOps {
    pub leg_dep: Vec<usize>,
    pub leg_arr: Vec<usize>,
    pub arc_dep: Vec<usize>,
    pub arc_arr: Vec<usize>,
}

impl WindowOps {
    pub fn is_empty(&self) -> bool {
        self.leg_dep.is_empty()
            && self.leg_arr.is_empty()
            && self.arc_dep.is_empty()
            && self.arc_arr.is_empty()
    }
}

/// FATO operation sets, addressed by vertiport and 1-based window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowIndex {
    num_windows: u32,
    cells: Vec<WindowOps>,
}

impl WindowIndex {
    pub fn get(&self, vertiport: usize, window: u32) -> &WindowOps {
        &self.cells[vertiport * self.num_windows as usize + window as usize - 1]
    }

    /// `(vertiport, window, ops)` for every cell, in vertiport-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32, &WindowOps)> {
        let t = self.num_windows as usize;
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, ops)| (k / t, (k % t) as u32 + 1, ops))
    }
}

pub fn index_window_ops(
    num_vertiports: usize,
    num_windows: u32,
    legs: &[FlightLeg],
    arcs: &[RepositionArc],
) -> WindowIndex {
    let mut index = WindowIndex {
        num_windows,
        cells: vec![WindowOps::default(); num_vertiports * num_windows as usize],
    };
    let slot = |v: usize, t: u32| v * num_windows as usize + t as usize - 1;
    for (i, leg) in legs.iter().enumerate() {
        index.cells[slot(leg.origin, leg.dep_window)]
            .leg_dep
            .push(i);
        index.cells[slot(leg.destination, leg.arr_window)]
            .leg_arr
            .push(i);
    }
    for (a, arc) in arcs.iter().enumerate() {
        if arc.is_wait() {
            continue;
        }
        let from = legs[arc.from_leg].destination;
        let to = legs[arc.to_leg].origin;
        index.cells[slot(from, arc.ferry_dep_window)]
            .arc_dep
            .push(a);
        index.cells[slot(to, arc.ferry_arr_window)].arc_arr.push(a);
    }
    index
}

/// Legs, arcs and FATO index for one corridor.
#[derive(Clone, Debug)]
pub struct Network {
    pub legs: Vec<FlightLeg>,
    pub arcs: Vec<RepositionArc>,
    pub ferry: FerryWindows,
    pub windows: WindowIndex,
}

impl Network {
    pub fn build(corridor: &Corridor) -> Result<Self> {
        corridor.validate()?;
        let legs = build_legs(corridor)?;
        let ferry = FerryWindows::for_corridor(corridor);
        let arcs = build_reposition_arcs(&legs, &ferry);
        let windows = index_window_ops(
            corridor.vertiports.len(),
            corridor.time_grid.num_windows,
            &legs,
            &arcs,
        );
        Ok(Network {
            legs,
            arcs,
            ferry,
            windows,
        })
    }

    /// Arc indices grouped by their `to_leg` and by their `from_leg`.
    pub fn arc_adjacency(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut inbound = vec![Vec::new(); self.legs.len()];
        let mut outbound = vec![Vec::new(); self.legs.len()];
        for (a, arc) in self.arcs.iter().enumerate() {
            inbound[arc.to_leg].push(a);
            outbound[arc.from_leg].push(a);
        }
        (inbound, outbound)
    }
}
