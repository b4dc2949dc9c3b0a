//! Split and homodyne detector models, quantum-noise-limit calculators and
//! a spectrum-analyzer trace model. All powers are relative to shot noise.

mod efficiency;
mod homodyne;
mod measurement;
mod output;
mod qnl;
mod split;
mod trace;

pub use efficiency::{efficiency_ratio, experimental_ratio_from_traces, EfficiencyReport};
pub use homodyne::{homodyne_detect, homodyne_projection};
pub use measurement::{Measurement, Setting, Warning};
pub use output::{write_trace, write_trace_csv, write_trace_json_lines, OutputFormat, CSV_COLUMNS};
pub use qnl::{infer_displacement, qnl_displacement, qnl_momentum, qnl_tilt, sub_qnl_displacement};
pub use split::{split_detect, SplitDetector, SplitView, APERTURE_WARNING_FRACTION};
pub use trace::{spectrum_trace, SpectrumTrace, TraceConfig, TracePoint};
