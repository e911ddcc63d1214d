//! Word-frequency reports and SVG rendering.

mod frequency;
mod svg;

pub use frequency::{word_frequency_report, FrequencyReport};
pub use svg::{render_roc, render_word_cloud, roc_plot_coords, SvgStyle};
