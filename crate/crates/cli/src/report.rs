//! Per-instance statistics records in text, CSV or JSON-lines form.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use permsearch::{RefinerMode, SearchResult};

/// Column order of every CSV record.
pub const CSV_HEADER: &str = "instance,seed,mode,degree,order,nodes_visited,solutions_found,graphs_built,prunes_by_shape,prunes_by_witness,prunes_by_orbit,max_depth,limit_hit,wall_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
    JsonLines,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            "json-lines" | "jsonl" | "json" => Ok(Format::JsonLines),
            _ => Err(format!("unknown format `{s}` (text, csv, json-lines)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Csv => "csv",
            Format::JsonLines => "json-lines",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Record {
    pub instance: usize,
    pub seed: u64,
    pub mode: RefinerMode,
    pub degree: usize,
    pub result: SearchResult,
    pub wall: Duration,
}

impl Record {
    fn wall_ms(&self) -> String {
        format!("{:.3}", self.wall.as_secs_f64() * 1000.0)
    }
}

/// One serialized record, without a trailing newline.
pub fn emit_stats(record: &Record, format: Format) -> String {
    let s = &record.result.stats;
    let limit_hit = !record.result.complete;
    match format {
        Format::Csv => format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            record.instance,
            record.seed,
            record.mode,
            record.degree,
            record.result.order,
            s.nodes_visited,
            s.solutions_found,
            s.graphs_built,
            s.prunes_by_shape,
            s.prunes_by_witness,
            s.prunes_by_orbit,
            s.max_depth,
            limit_hit,
            record.wall_ms()
        ),
        Format::Text => format!(
            "instance={} seed={} mode={} degree={} order={} {} limit_hit={} wall_ms={}",
            record.instance,
            record.seed,
            record.mode,
            record.degree,
            record.result.order,
            s,
            limit_hit,
            record.wall_ms()
        ),
        Format::JsonLines => serde_json::json!({
            "instance": record.instance,
            "seed": record.seed,
            "mode": record.mode.name(),
            "degree": record.degree,
            "order": record.result.order.to_string(),
            "nodes_visited": s.nodes_visited,
            "solutions_found": s.solutions_found,
            "graphs_built": s.graphs_built,
            "prunes_by_shape": s.prunes_by_shape,
            "prunes_by_witness": s.prunes_by_witness,
            "prunes_by_orbit": s.prunes_by_orbit,
            "max_depth": s.max_depth,
            "limit_hit": limit_hit,
            "wall_ms": record.wall.as_secs_f64() * 1000.0,
        })
        .to_string(),
    }
}
