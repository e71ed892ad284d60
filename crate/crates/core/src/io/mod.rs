//! File formats: problem input, trace and norm CSV output, SVG pictures.

mod csv;
mod problem;
mod svg;

pub use self::csv::{
    fmt_f64, norm_to_string, read_norm, read_trace, trace_to_string, write_norm, write_trace,
    TraceFile, NORM_HEADER, ROW_TOL, TRACE_FORMAT, TRACE_HEADER,
};
pub use self::problem::{parse_problem, parse_scalar, ProblemFile};
pub use self::svg::{render_unit_sphere, MIN_SIZE};
