//! Template library and floorplan composition: pick one pre-characterized
//! variant per IP, pack them into a bounding box, and swap variants
//! interactively.

mod compose;
mod library;
mod svg;

pub use compose::{
    compose, metrics, opt_select, undo, BoundingBox, Deltas, Floorplan, Placement, PlanMetrics, PlanState, Selections,
    SelectionChange,
};
pub use library::{load_templates, IpTemplates, PinEdge, TemplateLibrary, TemplateVariant};
pub use svg::render_svg;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("malformed template manifest: {0}")]
    Manifest(String),
    #[error("duplicate variant `{id}` for IP `{ip}`")]
    DuplicateVariant { ip: String, id: String },
    #[error("variant `{id}` of IP `{ip}`: {reason}")]
    InvalidVariant { ip: String, id: String, reason: String },
    #[error("unknown IP `{0}`")]
    UnknownIp(String),
    #[error("IP `{ip}` has no variant `{id}`")]
    UnknownVariant { ip: String, id: String },
    #[error("bounding box must be positive and spacing non-negative")]
    InvalidBox,
    #[error("no selection change to undo")]
    NothingToUndo,
}
