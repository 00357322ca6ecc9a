//! Electrode geometry, channel subsets, and spatial metrics.
//!
//! Two sensor layouts are modeled: the Maize high-density pair of 4×4 grids
//! (32 monopolar channels, 5 mm pitch) and the Quattro low-density ring of
//! 15 bipolar channels around the wrist. Coordinates are expressed in pitch
//! units (1 unit = 5 mm). On top of the layouts sit subset selection by
//! region, rejection sampling under spatial-density constraints, bipolar
//! re-referencing, and the `Dist` / `FOM` metrics used to score electrode
//! configurations.

use ndarray::Array2;
use rand::seq::index::sample as index_sample;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{mix_seed, seeded_rng};

/// Default separation between the extensor and flexor Maize grids, in pitch
/// units. The grids are physically separate patches; the exact gap only
/// matters for cross-grid distances, never for density adjacency.
pub const DEFAULT_GRID_GAP: f64 = 4.0;

/// Default circumference of the Quattro wrist ring, in pitch units.
pub const DEFAULT_WRIST_CIRCUMFERENCE: f64 = 30.0;

/// Default attempt cap for constrained subset sampling.
pub const DEFAULT_MAX_ATTEMPTS: usize = 100_000;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("degenerate subset: need at least 2 electrodes, got {0}")]
    DegenerateSubset(usize),
    #[error("degenerate geometry: Dist must be positive, got {0}")]
    DegenerateGeometry(f64),
    #[error("density undefined for this layout: {0}")]
    DensityUndefined(String),
    #[error("constraint unsatisfiable or attempts exhausted after {attempts} draws")]
    ConstraintUnsatisfiable { attempts: usize },
    #[error("invalid bipolar pairing: {0}")]
    InvalidPairing(String),
    #[error("electrode id {id} not present in layout '{layout}'")]
    UnknownElectrode { id: u32, layout: String },
    #[error("duplicate electrode id {0} in subset")]
    DuplicateId(u32),
    #[error("empty subset")]
    EmptySubset,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Wrist side an electrode sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Extensor,
    Flexor,
}

/// Region selector for filtering and sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionSelection {
    Extensor,
    Flexor,
    All,
}

impl RegionSelection {
    fn matches(self, region: Region) -> bool {
        match self {
            RegionSelection::Extensor => region == Region::Extensor,
            RegionSelection::Flexor => region == Region::Flexor,
            RegionSelection::All => true,
        }
    }
}

/// Reference scheme of a layout's channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Monopolar,
    Bipolar,
}

/// Geometric family of a layout. Density classification is defined only for
/// `Grid` layouts; ring and derived layouts have no lattice adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LayoutKind {
    Grid,
    Ring,
    Derived,
}

/// A single electrode (or bipolar channel) position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Electrode {
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub region: Region,
    pub grid_id: u32,
}

/// Physical electrode geometry: ids, coordinates in pitch units, region and
/// grid membership, and the reference scheme.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectrodeLayout {
    pub name: String,
    pub scheme: Scheme,
    pub kind: LayoutKind,
    pub electrodes: Vec<Electrode>,
}

impl ElectrodeLayout {
    /// Build a layout from bare grid points: ids assigned 1.., all extensor,
    /// one grid, monopolar. Intended for fixtures and ad-hoc geometry work.
    pub fn from_grid_points(name: &str, points: &[(f64, f64)]) -> Self {
        let electrodes = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Electrode {
                id: i as u32 + 1,
                x,
                y,
                region: Region::Extensor,
                grid_id: 1,
            })
            .collect();
        ElectrodeLayout {
            name: name.to_string(),
            scheme: Scheme::Monopolar,
            kind: LayoutKind::Grid,
            electrodes,
        }
    }

    pub fn len(&self) -> usize {
        self.electrodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.electrodes.is_empty()
    }

    /// Look up an electrode by id.
    pub fn electrode(&self, id: u32) -> Result<&Electrode, GridError> {
        self.electrodes
            .iter()
            .find(|e| e.id == id)
            .ok_or(GridError::UnknownElectrode {
                id,
                layout: self.name.clone(),
            })
    }

    /// Zero-based signal-matrix row for an electrode id (ids are contiguous
    /// from 1 in declaration order).
    pub fn row_of(&self, id: u32) -> Result<usize, GridError> {
        let idx = self
            .electrodes
            .iter()
            .position(|e| e.id == id)
            .ok_or(GridError::UnknownElectrode {
                id,
                layout: self.name.clone(),
            })?;
        Ok(idx)
    }

    /// Signal-matrix rows for every id of a subset, in subset order.
    pub fn rows_for(&self, subset: &ChannelSubset) -> Result<Vec<usize>, GridError> {
        subset.ids.iter().map(|&id| self.row_of(id)).collect()
    }

    /// Check the structural invariants: ids unique and contiguous from 1,
    /// no shared coordinates.
    pub fn validate(&self) -> Result<(), GridError> {
        for (i, e) in self.electrodes.iter().enumerate() {
            if e.id != i as u32 + 1 {
                return Err(GridError::InvalidParameter(format!(
                    "ids must be contiguous from 1; position {i} holds id {}",
                    e.id
                )));
            }
            for other in &self.electrodes[..i] {
                if (other.x - e.x).abs() < 1e-9 && (other.y - e.y).abs() < 1e-9 {
                    return Err(GridError::InvalidParameter(format!(
                        "electrodes {} and {} share coordinate ({}, {})",
                        other.id, e.id, e.x, e.y
                    )));
                }
            }
        }
        Ok(())
    }
}

/// An ordered set of electrode ids drawn from one layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChannelSubset {
    pub layout: String,
    pub ids: Vec<u32>,
}

impl ChannelSubset {
    /// Validate ids against a layout: non-empty, no duplicates, all present.
    pub fn new(layout: &ElectrodeLayout, ids: Vec<u32>) -> Result<Self, GridError> {
        if ids.is_empty() {
            return Err(GridError::EmptySubset);
        }
        for (i, &id) in ids.iter().enumerate() {
            if ids[..i].contains(&id) {
                return Err(GridError::DuplicateId(id));
            }
            layout.electrode(id)?;
        }
        Ok(ChannelSubset {
            layout: layout.name.clone(),
            ids,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Spatial-density class of a subset on a grid layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityClass {
    High,
    Medium,
    Low,
    Invalid,
}

/// Build the Maize layout: two 4×4 monopolar grids separated by `grid_gap`
/// pitch units along x. Ids 1–16 cover the extensor grid row-major, 17–32
/// the flexor grid row-major.
pub fn build_maize_layout(grid_gap: f64) -> ElectrodeLayout {
    assert!(grid_gap >= 1.0, "grid_gap must be at least 1 pitch unit");
    let mut electrodes = Vec::with_capacity(32);
    for (grid_id, (region, x0)) in [
        (Region::Extensor, 0.0),
        (Region::Flexor, 4.0 + grid_gap),
    ]
    .into_iter()
    .enumerate()
    {
        for row in 0..4u32 {
            for col in 0..4u32 {
                electrodes.push(Electrode {
                    id: grid_id as u32 * 16 + row * 4 + col + 1,
                    x: x0 + col as f64,
                    y: row as f64,
                    region,
                    grid_id: grid_id as u32 + 1,
                });
            }
        }
    }
    ElectrodeLayout {
        name: "maize".to_string(),
        scheme: Scheme::Monopolar,
        kind: LayoutKind::Grid,
        electrodes,
    }
}

/// Build the Quattro layout: 15 bipolar channels equally spaced on a wrist
/// ring of the given circumference, unwrapped to the x-axis at y = 0.
/// Channels on the first half of the circumference are assigned to the
/// extensor side (8 channels), the rest to the flexor side (7 channels).
/// Sticks of four channels share a `grid_id` (the last stick carries three).
pub fn build_quattro_layout(wrist_circumference: f64) -> ElectrodeLayout {
    assert!(wrist_circumference > 0.0, "circumference must be positive");
    let spacing = wrist_circumference / 15.0;
    let electrodes = (0..15u32)
        .map(|k| {
            let x = k as f64 * spacing;
            Electrode {
                id: k + 1,
                x,
                y: 0.0,
                region: if x < wrist_circumference / 2.0 {
                    Region::Extensor
                } else {
                    Region::Flexor
                },
                grid_id: k / 4 + 1,
            }
        })
        .collect();
    ElectrodeLayout {
        name: "quattro".to_string(),
        scheme: Scheme::Bipolar,
        kind: LayoutKind::Ring,
        electrodes,
    }
}

/// All electrode ids of a layout whose region matches the selector.
pub fn region_filter(layout: &ElectrodeLayout, region: RegionSelection) -> ChannelSubset {
    let ids = layout
        .electrodes
        .iter()
        .filter(|e| region.matches(e.region))
        .map(|e| e.id)
        .collect();
    ChannelSubset {
        layout: layout.name.clone(),
        ids,
    }
}

/// All pairwise Euclidean distances d_ij for i < j, in (i, j) lexicographic
/// order over the subset's id order.
pub fn pairwise_distances(
    subset: &ChannelSubset,
    layout: &ElectrodeLayout,
) -> Result<Vec<f64>, GridError> {
    if subset.len() < 2 {
        return Err(GridError::DegenerateSubset(subset.len()));
    }
    let points: Vec<(f64, f64)> = subset
        .ids
        .iter()
        .map(|&id| layout.electrode(id).map(|e| (e.x, e.y)))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::with_capacity(points.len() * (points.len() - 1) / 2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dx = points[i].0 - points[j].0;
            let dy = points[i].1 - points[j].1;
            out.push((dx * dx + dy * dy).sqrt());
        }
    }
    Ok(out)
}

/// `Dist`: the median of all pairwise distances of a subset. For an even
/// pair count this is the mean of the two central order statistics.
pub fn dist_metric(subset: &ChannelSubset, layout: &ElectrodeLayout) -> Result<f64, GridError> {
    let mut d = pairwise_distances(subset, layout)?;
    d.sort_by(|a, b| a.partial_cmp(b).expect("distances are finite"));
    let n = d.len();
    Ok(if n % 2 == 1 {
        d[n / 2]
    } else {
        0.5 * (d[n / 2 - 1] + d[n / 2])
    })
}

/// `FOM`: classification accuracy divided by `Dist`. Rewards configurations
/// that stay accurate while staying compact.
pub fn fom(acc: f64, dist: f64) -> Result<f64, GridError> {
    if dist <= 0.0 {
        return Err(GridError::DegenerateGeometry(dist));
    }
    Ok(acc / dist)
}

/// Neighborhood relations on a grid layout. Adjacency never spans grids:
/// the two Maize patches are physically separate.
fn edge_adjacent(a: &Electrode, b: &Electrode) -> bool {
    if a.grid_id != b.grid_id {
        return false;
    }
    let dx = (a.x - b.x).abs();
    let dy = (a.y - b.y).abs();
    ((dx - 1.0).abs() < 1e-9 && dy < 1e-9) || (dx < 1e-9 && (dy - 1.0).abs() < 1e-9)
}

fn corner_adjacent(a: &Electrode, b: &Electrode) -> bool {
    if a.grid_id != b.grid_id {
        return false;
    }
    let dx = (a.x - b.x).abs();
    let dy = (a.y - b.y).abs();
    (dx - 1.0).abs() < 1e-9 && (dy - 1.0).abs() < 1e-9
}

fn isolated_pair(a: &Electrode, b: &Electrode) -> bool {
    if a.grid_id != b.grid_id {
        return true;
    }
    let cheb = (a.x - b.x).abs().max((a.y - b.y).abs());
    cheb >= 2.0 - 1e-9
}

/// Classify the spatial density of a subset on a grid layout.
///
/// - `High`: every electrode shares an edge with at least one other subset
///   electrode (compact local clusters).
/// - `Medium`: no edge connections anywhere, and every electrode shares a
///   corner with at least one other subset electrode.
/// - `Low`: every pair is spatially isolated (Chebyshev distance ≥ 2).
/// - `Invalid`: anything else (the three classes are mutually exclusive).
pub fn classify_density(
    subset: &ChannelSubset,
    layout: &ElectrodeLayout,
) -> Result<DensityClass, GridError> {
    if layout.kind != LayoutKind::Grid {
        return Err(GridError::DensityUndefined(layout.name.clone()));
    }
    let electrodes: Vec<&Electrode> = subset
        .ids
        .iter()
        .map(|&id| layout.electrode(id))
        .collect::<Result<_, _>>()?;

    let n = electrodes.len();
    let mut any_edge = false;
    let mut all_isolated = true;
    let mut has_edge_neighbor = vec![false; n];
    let mut has_corner_neighbor = vec![false; n];
    for i in 0..n {
        for j in i + 1..n {
            if edge_adjacent(electrodes[i], electrodes[j]) {
                any_edge = true;
                has_edge_neighbor[i] = true;
                has_edge_neighbor[j] = true;
            }
            if corner_adjacent(electrodes[i], electrodes[j]) {
                has_corner_neighbor[i] = true;
                has_corner_neighbor[j] = true;
            }
            if !isolated_pair(electrodes[i], electrodes[j]) {
                all_isolated = false;
            }
        }
    }

    let class = if n > 0 && has_edge_neighbor.iter().all(|&v| v) {
        DensityClass::High
    } else if !any_edge && n > 0 && has_corner_neighbor.iter().all(|&v| v) {
        DensityClass::Medium
    } else if all_isolated {
        DensityClass::Low
    } else {
        DensityClass::Invalid
    };
    Ok(class)
}

/// Uniform rejection sampling of an `n`-subset from a layout region.
///
/// With a density constraint, uniformly drawn subsets are rejected until
/// [`classify_density`] returns the requested class; the returned subset is
/// therefore uniform over the satisfying set. Deterministic per seed. Errors
/// once `max_attempts` draws fail, so unsatisfiable constraints fail loudly.
pub fn sample_subset(
    layout: &ElectrodeLayout,
    n: usize,
    density: Option<DensityClass>,
    region: RegionSelection,
    rng_seed: u64,
    max_attempts: usize,
) -> Result<ChannelSubset, GridError> {
    let pool: Vec<u32> = region_filter(layout, region).ids;
    if n == 0 {
        return Err(GridError::EmptySubset);
    }
    if n > pool.len() {
        return Err(GridError::InvalidParameter(format!(
            "subset size {n} exceeds the {} electrodes in the selected region",
            pool.len()
        )));
    }
    if max_attempts == 0 {
        return Err(GridError::InvalidParameter(
            "max_attempts must be at least 1".to_string(),
        ));
    }
    let mut rng = seeded_rng(rng_seed);
    for _ in 0..max_attempts {
        let mut ids: Vec<u32> = index_sample(&mut rng, pool.len(), n)
            .into_iter()
            .map(|i| pool[i])
            .collect();
        ids.sort_unstable();
        let subset = ChannelSubset {
            layout: layout.name.clone(),
            ids,
        };
        match density {
            None => return Ok(subset),
            Some(class) => {
                if classify_density(&subset, layout)? == class {
                    return Ok(subset);
                }
            }
        }
    }
    Err(GridError::ConstraintUnsatisfiable {
        attempts: max_attempts,
    })
}

/// Sample the union of an unconstrained `extensor_n`-subset from the
/// extensor region and a `flexor_n`-subset from the flexor region. This is
/// how the 15-channel Maize configuration (8 + 7) is drawn.
pub fn sample_region_split(
    layout: &ElectrodeLayout,
    extensor_n: usize,
    flexor_n: usize,
    rng_seed: u64,
) -> Result<ChannelSubset, GridError> {
    let ext = sample_subset(
        layout,
        extensor_n,
        None,
        RegionSelection::Extensor,
        mix_seed(rng_seed, &[0]),
        1,
    )?;
    let flex = sample_subset(
        layout,
        flexor_n,
        None,
        RegionSelection::Flexor,
        mix_seed(rng_seed, &[1]),
        1,
    )?;
    let mut ids = ext.ids;
    ids.extend(flex.ids);
    ids.sort_unstable();
    Ok(ChannelSubset {
        layout: layout.name.clone(),
        ids,
    })
}

/// The Maize odd–even differential pairing: (1,2), (3,4), …, (31,32).
pub fn default_maize_pairing() -> Vec<(u32, u32)> {
    (0..16).map(|k| (2 * k + 1, 2 * k + 2)).collect()
}

/// Derive bipolar signals from monopolar rows: output row k is
/// `signals[i-1] - signals[j-1]` for the k-th pair `(i, j)` of one-based
/// channel numbers. Pairs must be disjoint and in range.
pub fn derive_bipolar(
    signals: &Array2<f64>,
    pairing: &[(u32, u32)],
) -> Result<Array2<f64>, GridError> {
    let rows = signals.nrows();
    let mut used = vec![false; rows];
    for &(i, j) in pairing {
        for ch in [i, j] {
            if ch == 0 || ch as usize > rows {
                return Err(GridError::InvalidPairing(format!(
                    "channel {ch} out of range 1..={rows}"
                )));
            }
            if used[ch as usize - 1] {
                return Err(GridError::InvalidPairing(format!(
                    "channel {ch} appears in more than one pair"
                )));
            }
            used[ch as usize - 1] = true;
        }
    }
    let mut out = Array2::zeros((pairing.len(), signals.ncols()));
    for (k, &(i, j)) in pairing.iter().enumerate() {
        let a = signals.row(i as usize - 1);
        let b = signals.row(j as usize - 1);
        let mut row = out.row_mut(k);
        for (t, r) in row.iter_mut().enumerate() {
            *r = a[t] - b[t];
        }
    }
    Ok(out)
}

/// Layout for channels derived by bipolar pairing: each derived channel sits
/// at the midpoint of its pair and inherits the first electrode's region.
pub fn derive_bipolar_layout(
    layout: &ElectrodeLayout,
    pairing: &[(u32, u32)],
    name: &str,
) -> Result<ElectrodeLayout, GridError> {
    let electrodes = pairing
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let a = layout.electrode(i)?;
            let b = layout.electrode(j)?;
            Ok(Electrode {
                id: k as u32 + 1,
                x: 0.5 * (a.x + b.x),
                y: 0.5 * (a.y + b.y),
                region: a.region,
                grid_id: a.grid_id,
            })
        })
        .collect::<Result<_, GridError>>()?;
    Ok(ElectrodeLayout {
        name: name.to_string(),
        scheme: Scheme::Bipolar,
        kind: LayoutKind::Derived,
        electrodes,
    })
}
