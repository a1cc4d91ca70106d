use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{LayoutError, TemplateLibrary};

/// Chosen variant per IP.
pub type Selections = BTreeMap<String, String>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub width: f64,
    pub height: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub ip: String,
    pub variant: String,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    /// Block plus its trailing channel lies within the bounding box.
    pub inside: bool,
}

impl Placement {
    pub fn overlaps(&self, other: &Placement) -> bool {
        self.x < other.x + other.width
            && other.x < self.x + self.width
            && self.y < other.y + other.height
            && other.y < self.y + self.height
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Floorplan {
    pub bbox: BoundingBox,
    pub spacing: f64,
    /// In packing order.
    pub placements: Vec<Placement>,
    pub fit: bool,
    /// Area of in-box blocks over box area.
    pub utilization: f64,
}

/// Shelf packing. Blocks go tallest first (ties by IP name) left to right;
/// each block keeps a `spacing` channel to its right and above, and a shelf
/// is closed when the next block would cross the right edge.
pub fn compose(
    library: &TemplateLibrary,
    selections: &Selections,
    bbox: BoundingBox,
    spacing: f64,
) -> Result<Floorplan, LayoutError> {
    if !(bbox.width > 0.0 && bbox.height > 0.0) || !(spacing >= 0.0) {
        return Err(LayoutError::InvalidBox);
    }
    let mut blocks = Vec::with_capacity(selections.len());
    for (ip, id) in selections {
        blocks.push(library.variant(ip, id)?);
    }
    blocks.sort_by(|a, b| b.height_um.total_cmp(&a.height_um).then_with(|| a.ip.cmp(&b.ip)));

    let (mut x, mut y, mut shelf) = (0.0, 0.0, 0.0f64);
    let mut placements = Vec::with_capacity(blocks.len());
    for v in blocks {
        let (w, h) = (v.width_um, v.height_um);
        if x > 0.0 && x + w + spacing > bbox.width {
            y += shelf + spacing;
            x = 0.0;
            shelf = 0.0;
        }
        let inside = x + w + spacing <= bbox.width && y + h + spacing <= bbox.height;
        placements.push(Placement { ip: v.ip.clone(), variant: v.id.clone(), x, y, width: w, height: h, inside });
        x += w + spacing;
        shelf = shelf.max(h);
    }
    let used: f64 = placements.iter().filter(|p| p.inside).map(|p| p.width * p.height).sum();
    Ok(Floorplan {
        bbox,
        spacing,
        fit: placements.iter().all(|p| p.inside),
        utilization: used / (bbox.width * bbox.height),
        placements,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanMetrics {
    pub area: f64,
    pub leakage_mw: f64,
    /// Slowest selected variant bounds the system clock.
    pub min_freq_mhz: Option<f64>,
    pub utilization: f64,
    pub fit: bool,
}

pub fn metrics(library: &TemplateLibrary, plan: &Floorplan) -> PlanMetrics {
    let variants: Vec<_> = plan.placements.iter().filter_map(|p| library.variant(&p.ip, &p.variant).ok()).collect();
    PlanMetrics {
        area: variants.iter().map(|v| v.area()).sum(),
        leakage_mw: variants.iter().map(|v| v.leakage_mw).sum(),
        min_freq_mhz: variants.iter().map(|v| v.freq_mhz).min_by(f64::total_cmp),
        utilization: plan.utilization,
        fit: plan.fit,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionChange {
    pub ip: String,
    pub from: String,
    pub to: String,
}

/// Selections, constraints and the floorplan they produce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanState {
    pub selections: Selections,
    pub bbox: BoundingBox,
    pub spacing: f64,
    pub floorplan: Floorplan,
    pub history: Vec<SelectionChange>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deltas {
    pub area: f64,
    pub leakage_mw: f64,
    pub min_freq_mhz: f64,
    pub fit_before: bool,
    pub fit_after: bool,
}

impl PlanState {
    pub fn new(library: &TemplateLibrary, selections: Selections, bbox: BoundingBox, spacing: f64) -> Result<Self, LayoutError> {
        let floorplan = compose(library, &selections, bbox, spacing)?;
        Ok(PlanState { selections, bbox, spacing, floorplan, history: Vec::new() })
    }
}

/// Swap one IP's variant and re-pack. The change is appended to the history.
pub fn opt_select(library: &TemplateLibrary, state: &PlanState, ip: &str, variant: &str) -> Result<(PlanState, Deltas), LayoutError> {
    let from = state.selections.get(ip).ok_or_else(|| LayoutError::UnknownIp(ip.to_string()))?.clone();
    library.variant(ip, variant)?;
    let mut selections = state.selections.clone();
    selections.insert(ip.to_string(), variant.to_string());
    let floorplan = compose(library, &selections, state.bbox, state.spacing)?;
    let before = metrics(library, &state.floorplan);
    let after = metrics(library, &floorplan);
    let deltas = Deltas {
        area: after.area - before.area,
        leakage_mw: after.leakage_mw - before.leakage_mw,
        min_freq_mhz: after.min_freq_mhz.unwrap_or(0.0) - before.min_freq_mhz.unwrap_or(0.0),
        fit_before: before.fit,
        fit_after: after.fit,
    };
    let mut history = state.history.clone();
    history.push(SelectionChange { ip: ip.to_string(), from, to: variant.to_string() });
    Ok((PlanState { selections, bbox: state.bbox, spacing: state.spacing, floorplan, history }, deltas))
}

/// Reverse the most recent change by applying the opposite swap, which is
/// itself recorded.
pub fn undo(library: &TemplateLibrary, state: &PlanState) -> Result<(PlanState, Deltas), LayoutError> {
    let last = state.history.last().ok_or(LayoutError::NothingToUndo)?;
    opt_select(library, state, &last.ip, &last.from)
}
