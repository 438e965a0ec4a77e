//! Deterministic renderings: exchange JSON, GraphViz DOT, the Markdown
//! build report and HARA CSV files. All output is UTF-8 with LF endings.

mod dot;
mod exchange;
mod hara_csv;
mod report;

pub use dot::{emit_dot, wrap, LABEL_WIDTH, UNDEVELOPED_MARK, UNINSTANTIATED_MARK};
pub use exchange::{
    emit_exchange, load_exchange, load_exchange_document, EmitError, Exchange, FORMAT_VERSION,
};
pub use hara_csv::write_hara;
pub use report::emit_report;
