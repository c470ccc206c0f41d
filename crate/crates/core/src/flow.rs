//! DDoS flow-record CSV ingestion.
//!
//! Columns are bound by name, so header order does not matter. Header names
//! are normalized (upper case, spaces and dashes to underscores) and a few
//! spellings seen in published exports are accepted as aliases. Rows that fail
//! to parse go into a reject report instead of aborting the load.

use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read `{path}`: {source}")]
    UnreadableFile {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV header is missing column(s): {}", .0.join(", "))]
    MissingColumn(Vec<String>),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("unknown feature `{0}`")]
    UnknownFeature(String),
    #[error("feature `{0}` is categorical and cannot be an engine input")]
    NotNumeric(String),
}

macro_rules! features {
    ($( $variant:ident => $name:literal, $kind:ident; )*) => {
        /// The 28 dataset columns in their published index order.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
        pub enum Feature { $( $variant, )* }

        impl Feature {
            pub const ALL: [Feature; 28] = [ $( Feature::$variant, )* ];

            /// Human-readable column title, e.g. `PKT RATE`.
            pub fn title(self) -> &'static str {
                match self { $( Feature::$variant => $name, )* }
            }

            pub fn kind(self) -> FeatureKind {
                match self { $( Feature::$variant => FeatureKind::$kind, )* }
            }
        }
    };
}

features! {
    SrcAdd => "SRC ADD", Continuous;
    DesAdd => "DES ADD", Continuous;
    PktId => "PKT ID", Continuous;
    FromNode => "FROM NODE", Continuous;
    ToNode => "TO NODE", Continuous;
    PktType => "PKT TYPE", Discrete;
    PktSize => "PKT SIZE", Continuous;
    Flags => "FLAGS", Discrete;
    Fid => "FID", Continuous;
    SeqNumber => "SEQ NUMBER", Continuous;
    NodeNameFrom => "NODE NAME FROM", Discrete;
    NodeNameTo => "NODE NAME TO", Discrete;
    NumberOfPkt => "NUMBER OF PKT", Continuous;
    NumberOfByte => "NUMBER OF BYTE", Continuous;
    PktIn => "PKT IN", Continuous;
    PktOut => "PKT OUT", Continuous;
    PktR => "PKT R", Continuous;
    PktDelayNode => "PKT DELAY NODE", Continuous;
    PktRate => "PKT RATE", Continuous;
    ByteRate => "BYTE RATE", Continuous;
    PktAvgSize => "PKT AVG SIZE", Continuous;
    Utilization => "UTILIZATION", Continuous;
    PktDelay => "PKT DELAY", Continuous;
    PktSendTime => "PKT SEND TIME", Continuous;
    PktReceivedTime => "PKT RECEIVED TIME", Continuous;
    FirstPktSent => "FIRST PKT SENT", Continuous;
    LastPktReceived => "LAST PKT RECEIVED", Continuous;
    PktClass => "PKT CLASS", Discrete;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FeatureKind {
    Continuous,
    Discrete,
}

/// Upper case, runs of spaces/dashes/underscores collapsed to one `_`.
pub fn normalize_name(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for ch in raw.trim().chars() {
        if ch == ' ' || ch == '-' || ch == '_' {
            if !out.ends_with('_') && !out.is_empty() {
                out.push('_');
            }
        } else {
            out.extend(ch.to_uppercase());
        }
    }
    out.trim_end_matches('_').to_string()
}

impl Feature {
    /// Canonical CSV header name, e.g. `PKT_RATE`.
    pub fn column(self) -> String {
        self.title().replace(' ', "_")
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Resolves a header or user-supplied feature name.
    pub fn from_name(name: &str) -> Option<Feature> {
        let norm = normalize_name(name);
        let aliased = match norm.as_str() {
            "PKT_RESEVED_TIME" | "PKT_RECEIVED" => "PKT_RECEIVED_TIME",
            "LAST_PKT_RESEVED" | "LASTPKT_RECEIVED" | "LASTPKT_RESEVED" => "LAST_PKT_RECEIVED",
            other => other,
        };
        Feature::ALL.iter().copied().find(|f| f.column() == aliased)
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.title())
    }
}

/// Ground-truth traffic class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PacketClass {
    Normal,
    UdpFlood,
    Smurf,
    Siddos,
    HttpFlood,
}

impl PacketClass {
    pub fn parse(raw: &str) -> Option<Self> {
        let key: String = raw
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        match key.as_str() {
            "normal" => Some(Self::Normal),
            "udpflood" => Some(Self::UdpFlood),
            "smurf" => Some(Self::Smurf),
            "siddos" => Some(Self::Siddos),
            "httpflood" => Some(Self::HttpFlood),
            _ => None,
        }
    }

    pub fn is_attack(self) -> bool {
        self != Self::Normal
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Normal => "Normal",
            Self::UdpFlood => "UDP-Flood",
            Self::Smurf => "Smurf",
            Self::Siddos => "SIDDOS",
            Self::HttpFlood => "HTTP-Flood",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Missing,
}

/// One parsed dataset row.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowRecord {
    /// 1-based data row number in the source file (header excluded).
    pub row: usize,
    pub class: PacketClass,
    cells: Vec<Cell>,
}

impl FlowRecord {
    /// Builds a record from cells in [`Feature::ALL`] order. The class cell
    /// is ignored in favour of `class`.
    pub fn new(row: usize, class: PacketClass, mut cells: Vec<Cell>) -> Self {
        assert_eq!(cells.len(), Feature::ALL.len(), "one cell per feature");
        cells[Feature::PktClass.index()] = Cell::Text(class.label().to_string());
        Self { row, class, cells }
    }

    pub fn get(&self, f: Feature) -> &Cell {
        &self.cells[f.index()]
    }

    pub fn numeric(&self, f: Feature) -> Option<f64> {
        match self.cells[f.index()] {
            Cell::Num(x) => Some(x),
            _ => None,
        }
    }

    pub fn has_missing(&self) -> bool {
        self.cells.iter().any(|c| matches!(c, Cell::Missing))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reject {
    /// 1-based data row number (header excluded).
    pub row: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct LoadReport {
    pub records: Vec<FlowRecord>,
    pub rejects: Vec<Reject>,
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<LoadReport, DataError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DataError::UnreadableFile {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file)
}

pub fn read_csv<R: Read>(reader: R) -> Result<LoadReport, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers()?.clone();
    let mut binding: [Option<usize>; 28] = [None; 28];
    for (col, name) in headers.iter().enumerate() {
        if let Some(f) = Feature::from_name(name) {
            binding[f.index()].get_or_insert(col);
        }
    }
    let missing: Vec<String> = Feature::ALL
        .iter()
        .filter(|f| binding[f.index()].is_none())
        .map(|f| f.column())
        .collect();
    if !missing.is_empty() {
        return Err(DataError::MissingColumn(missing));
    }

    let mut report = LoadReport::default();
    for (i, result) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = match result {
            Ok(rec) => rec,
            Err(e) => {
                report.rejects.push(Reject {
                    row,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        match parse_row(row, &rec, &binding) {
            Ok(r) => report.records.push(r),
            Err(reason) => report.rejects.push(Reject { row, reason }),
        }
    }
    Ok(report)
}

fn parse_row(row: usize, rec: &csv::StringRecord, binding: &[Option<usize>; 28]) -> Result<FlowRecord, String> {
    let mut cells = Vec::with_capacity(28);
    let mut class = None;
    for f in Feature::ALL {
        let col = binding[f.index()].expect("all columns bound");
        let raw = rec
            .get(col)
            .ok_or_else(|| format!("row has {} fields, `{}` is column {}", rec.len(), f.column(), col + 1))?;
        if f == Feature::PktClass {
            class = Some(
                PacketClass::parse(raw).ok_or_else(|| format!("unknown PKT_CLASS `{raw}`"))?,
            );
            cells.push(Cell::Missing);
            continue;
        }
        let cell = if raw.is_empty() || raw == "?" {
            Cell::Missing
        } else {
            match f.kind() {
                FeatureKind::Discrete => Cell::Text(raw.to_string()),
                FeatureKind::Continuous => match raw.parse::<f64>() {
                    Ok(x) if x.is_finite() => Cell::Num(x),
                    _ => return Err(format!("{}: `{raw}` is not a finite number", f.column())),
                },
            }
        };
        cells.push(cell);
    }
    Ok(FlowRecord::new(row, class.expect("class parsed"), cells))
}

/// Header line in canonical column order.
pub fn canonical_header() -> String {
    Feature::ALL.iter().map(|f| f.column()).collect::<Vec<_>>().join(",")
}
