//! Ingestion and normalization of model/dataset ecosystem snapshots, and the
//! cumulative monthly series built from them.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct YearMonth {
    year: i32,
    month: u32,
}

impl YearMonth {
    pub const MIN: YearMonth = YearMonth { year: 1990, month: 1 };
    pub const MAX: YearMonth = YearMonth { year: 2100, month: 1 };

    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::input(format!("month {month} out of range")));
        }
        let ym = Self { year, month };
        if ym < Self::MIN || ym > Self::MAX {
            return Err(Error::input(format!("{ym} outside {}..{}", Self::MIN, Self::MAX)));
        }
        Ok(ym)
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    pub fn next(self) -> Self {
        if self.month == 12 {
            Self {
                year: self.year + 1,
                month: 1,
            }
        } else {
            Self {
                month: self.month + 1,
                ..self
            }
        }
    }

    pub fn months_since(self, origin: YearMonth) -> i64 {
        (self.year as i64 - origin.year as i64) * 12 + self.month as i64 - origin.month as i64
    }

    pub fn years_since(self, origin: YearMonth) -> f64 {
        self.months_since(origin) as f64 / 12.0
    }

    /// Parses a release date. Accepts `YYYY`, `YYYY-MM`, `YYYY-MM-DD` (with
    /// `-` or `/`) and ISO timestamps. The flag is set when only a year was
    /// given and the month defaulted to January.
    pub fn parse_date(text: &str) -> Result<(Self, bool)> {
        static DATE: OnceLock<Regex> = OnceLock::new();
        let re = DATE.get_or_init(|| Regex::new(r"^(\d{4})(?:[-/](\d{1,2})(?:[-/]\d{1,2}(?:[T ].*)?)?)?$").unwrap());
        let caps = re
            .captures(text.trim())
            .ok_or_else(|| Error::input(format!("unrecognized date {text:?}")))?;
        let year: i32 = caps[1]
            .parse()
            .map_err(|_| Error::input(format!("bad year in {text:?}")))?;
        match caps.get(2) {
            Some(m) => {
                let month = m
                    .as_str()
                    .parse()
                    .map_err(|_| Error::input(format!("bad month in {text:?}")))?;
                Ok((Self::new(year, month)?, false))
            }
            None => Ok((Self::new(year, 1)?, true)),
        }
    }

    /// Every month from `start` through `end` inclusive.
    pub fn range(start: YearMonth, end: YearMonth) -> Vec<YearMonth> {
        let mut out = Vec::new();
        let mut t = start;
        while t <= end {
            out.push(t);
            t = t.next();
        }
        out
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match Self::parse_date(s)? {
            (ym, false) => Ok(ym),
            (_, true) => Err(Error::input(format!("expected YYYY-MM, got {s:?}"))),
        }
    }
}

impl TryFrom<String> for YearMonth {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<YearMonth> for String {
    fn from(ym: YearMonth) -> String {
        ym.to_string()
    }
}

macro_rules! label_enum {
    ($name:ident { $($variant:ident => $label:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $label),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($label => Ok($name::$variant),)+
                    other => Err(Error::input(format!("unknown {} {other:?}", stringify!($name)))),
                }
            }
        }
    };
}

label_enum!(AssetType { Model => "model", Dataset => "dataset", Other => "other" });
label_enum!(Access { Open => "open", ClosedOrRestricted => "closed_or_restricted", Unknown => "unknown" });
label_enum!(Modality {
    Text => "text",
    Vision => "vision",
    Multimodal => "multimodal",
    Audio => "audio",
    Other => "other",
    Unknown => "unknown",
});
label_enum!(Region { NorthAmerica => "north_america", Europe => "europe", Asia => "asia", Other => "other" });

/// One normalized ecosystem asset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetRecord {
    pub name: String,
    pub asset_type: AssetType,
    pub organization: String,
    pub created: YearMonth,
    pub access: Access,
    pub raw_size: Option<String>,
    pub params: Option<f64>,
    pub modality: Modality,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestWarning {
    /// 1-based data row, not counting the header.
    pub row: usize,
    pub field: String,
    pub message: String,
    /// True when the row was dropped.
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub snapshot_label: String,
    pub models: Vec<AssetRecord>,
    pub datasets: Vec<AssetRecord>,
    /// Assets that are neither models nor datasets, such as applications.
    pub others: Vec<AssetRecord>,
    pub ingest_warnings: Vec<IngestWarning>,
    /// Number of models whose parameter count was imputed.
    #[serde(default)]
    pub imputed: usize,
}

impl Snapshot {
    pub fn empty(label: impl Into<String>) -> Self {
        Self {
            snapshot_label: label.into(),
            models: Vec::new(),
            datasets: Vec::new(),
            others: Vec::new(),
            ingest_warnings: Vec::new(),
            imputed: 0,
        }
    }

    pub fn record_count(&self) -> usize {
        self.models.len() + self.datasets.len() + self.others.len()
    }

    pub fn skipped_rows(&self) -> usize {
        self.ingest_warnings.iter().filter(|w| w.skipped).count()
    }

    pub fn records(&self) -> impl Iterator<Item = &AssetRecord> {
        self.models.iter().chain(&self.datasets).chain(&self.others)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Writes the records back out with the default column names.
    pub fn to_csv(&self) -> Result<String> {
        let cols = ColumnMap::default();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            &cols.name,
            &cols.asset_type,
            &cols.organization,
            &cols.created_date,
            &cols.access,
            &cols.size,
            &cols.modality,
        ])?;
        for r in self.records() {
            w.write_record([
                r.name.as_str(),
                r.asset_type.as_str(),
                r.organization.as_str(),
                &r.created.to_string(),
                r.access.as_str(),
                r.raw_size.as_deref().unwrap_or(""),
                r.modality.as_str(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::input(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::input(e.to_string()))
    }
}

/// Source column names for each normalized field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub name: String,
    pub asset_type: String,
    pub organization: String,
    pub created_date: String,
    pub access: String,
    pub size: String,
    pub modality: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            name: "name".into(),
            asset_type: "type".into(),
            organization: "organization".into(),
            created_date: "created_date".into(),
            access: "access".into(),
            size: "size".into(),
            modality: "modality".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestOptions {
    pub columns: ColumnMap,
    /// Fold unknown access into `closed_or_restricted`.
    pub strict_access: bool,
    pub label: String,
}

impl Default for IngestOptions {
    fn default() -> Self {
        Self {
            columns: ColumnMap::default(),
            strict_access: true,
            label: "snapshot".into(),
        }
    }
}

/// Organization to region lookup, matched case-insensitively.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RegionMap {
    entries: BTreeMap<String, Region>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionEntry {
    pub organization: String,
    pub region: Region,
}

const DEFAULT_REGION_MAP: &str = include_str!("../data/region_map.json");

impl RegionMap {
    pub fn from_json(text: &str) -> Result<Self> {
        let entries: Vec<RegionEntry> = serde_json::from_str(text)?;
        Ok(Self::from_entries(entries))
    }

    pub fn from_entries(entries: impl IntoIterator<Item = RegionEntry>) -> Self {
        Self {
            entries: entries
                .into_iter()
                .map(|e| (normalize_org(&e.organization), e.region))
                .collect(),
        }
    }

    /// The bundled map covering major model developers.
    pub fn bundled() -> Self {
        Self::from_json(DEFAULT_REGION_MAP).expect("bundled region map is valid")
    }

    pub fn get(&self, organization: &str) -> Option<Region> {
        self.entries.get(&normalize_org(organization)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn normalize_org(org: &str) -> String {
    org.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// Region of the first mapped organization in a comma- or
/// semicolon-separated list; `Other` when none is mapped.
pub fn classify_region(organization: &str, map: &RegionMap) -> Region {
    organization
        .split([',', ';'])
        .find_map(|org| map.get(org))
        .unwrap_or(Region::Other)
}

const TEXT_CUES: &[&str] = &["text", "language", "code", "nlp", "chat"];
const VISION_CUES: &[&str] = &["image", "vision", "video", "visual", "picture", "photo"];
const AUDIO_CUES: &[&str] = &["audio", "speech", "voice", "music", "sound"];

pub fn classify_modality(raw: &str) -> Modality {
    let lower = raw.trim().to_lowercase();
    if lower.is_empty() || lower == "unknown" {
        return Modality::Unknown;
    }
    let words: Vec<&str> = lower
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect();
    let has = |cues: &[&str]| words.iter().any(|w| cues.iter().any(|c| w.starts_with(c)));
    let (text, vision, audio) = (has(TEXT_CUES), has(VISION_CUES), has(AUDIO_CUES));
    if (text && vision) || words.iter().any(|w| w.starts_with("multimodal")) {
        Modality::Multimodal
    } else if audio {
        Modality::Audio
    } else if vision {
        Modality::Vision
    } else if text {
        Modality::Text
    } else {
        Modality::Other
    }
}

/// Normalizes an access label. Unrecognized labels map to `Unknown`.
pub fn classify_access(raw: &str) -> Access {
    let lower = raw.trim().to_lowercase();
    match lower.as_str() {
        "open" | "open source" | "open-source" | "open_source" | "public" => Access::Open,
        "closed" | "limited" | "restricted" | "closed_or_restricted" | "private" | "proprietary" => {
            Access::ClosedOrRestricted
        }
        _ => Access::Unknown,
    }
}

fn classify_type(raw: &str) -> Option<AssetType> {
    match raw.trim().to_lowercase().as_str() {
        "model" => Some(AssetType::Model),
        "dataset" => Some(AssetType::Dataset),
        "application" | "other" => Some(AssetType::Other),
        _ => None,
    }
}

/// Extracts the first number carrying a `K`/`M`/`B`/`T` (or
/// thousand/million/billion/trillion) scale, e.g. `"175B parameters"`.
pub fn parse_param_count(text: &str) -> Option<f64> {
    static SIZE: OnceLock<Regex> = OnceLock::new();
    let re = SIZE.get_or_init(|| {
        Regex::new(r"(?i)(\d+(?:,\d{3})*(?:\.\d+)?)\s*(thousand|million|billion|trillion|k|m|b|t)\b").unwrap()
    });
    let caps = re.captures(text)?;
    let value: f64 = caps[1].replace(',', "").parse().ok()?;
    let scale = match caps[2].to_lowercase().as_str() {
        "k" | "thousand" => 1e3,
        "m" | "million" => 1e6,
        "b" | "billion" => 1e9,
        _ => 1e12,
    };
    let n = value * scale;
    (n > 0.0).then_some(n)
}

pub fn ingest_csv(path: impl AsRef<Path>, regions: &RegionMap, options: &IngestOptions) -> Result<Snapshot> {
    let file =
        std::fs::File::open(path.as_ref()).map_err(|e| Error::input(format!("{}: {e}", path.as_ref().display())))?;
    ingest_reader(file, regions, options)
}

pub fn ingest_reader<R: Read>(reader: R, regions: &RegionMap, options: &IngestOptions) -> Result<Snapshot> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let cols = &options.columns;
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::input(format!("missing mandatory column {name:?}")))
    };
    let idx = [
        find(&cols.name)?,
        find(&cols.asset_type)?,
        find(&cols.organization)?,
        find(&cols.created_date)?,
        find(&cols.access)?,
        find(&cols.size)?,
        find(&cols.modality)?,
    ];
    let mut snap = Snapshot::empty(options.label.clone());
    for (i, row) in rdr.records().enumerate() {
        let row_no = i + 1;
        let row = row?;
        let field = |k: usize| row.get(idx[k]).unwrap_or("").trim();
        let mut warn = |field: &str, message: String, skipped: bool| {
            snap.ingest_warnings.push(IngestWarning {
                row: row_no,
                field: field.to_string(),
                message,
                skipped,
            })
        };
        let Some(asset_type) = classify_type(field(1)) else {
            warn("type", format!("unrecognized asset type {:?}", field(1)), true);
            continue;
        };
        let created = match YearMonth::parse_date(field(3)) {
            Ok((ym, year_only)) => {
                if year_only {
                    warn(
                        "created_date",
                        format!("year-only date {:?} set to {ym}", field(3)),
                        false,
                    );
                }
                ym
            }
            Err(e) => {
                warn("created_date", e.to_string(), true);
                continue;
            }
        };
        let mut access = classify_access(field(4));
        if access == Access::Unknown {
            if options.strict_access {
                warn(
                    "access",
                    format!("access {:?} treated as closed_or_restricted", field(4)),
                    false,
                );
                access = Access::ClosedOrRestricted;
            } else {
                warn("access", format!("access {:?} is unknown", field(4)), false);
            }
        }
        let raw_size = Some(field(5)).filter(|s| !s.is_empty()).map(str::to_string);
        let params = match (asset_type, &raw_size) {
            (AssetType::Model, Some(s)) => {
                let p = parse_param_count(s);
                if p.is_none() {
                    warn("size", format!("no parameter count in {s:?}"), false);
                }
                p
            }
            _ => None,
        };
        let record = AssetRecord {
            name: field(0).to_string(),
            asset_type,
            organization: field(2).to_string(),
            created,
            access,
            raw_size,
            params,
            modality: classify_modality(field(6)),
            region: classify_region(field(2), regions),
        };
        match asset_type {
            AssetType::Model => snap.models.push(record),
            AssetType::Dataset => snap.datasets.push(record),
            AssetType::Other => snap.others.push(record),
        }
    }
    Ok(snap)
}

/// Fills every missing model parameter count with the mean of the known
/// counts across the snapshot.
pub fn impute_params(snapshot: &Snapshot) -> Result<Snapshot> {
    let known: Vec<f64> = snapshot.models.iter().filter_map(|m| m.params).collect();
    let missing = snapshot.models.len() - known.len();
    let mut out = snapshot.clone();
    if missing == 0 {
        return Ok(out);
    }
    if known.is_empty() {
        return Err(Error::validation("cannot impute parameters: no model has a known size"));
    }
    let mean = known.iter().sum::<f64>() / known.len() as f64;
    for m in out.models.iter_mut().filter(|m| m.params.is_none()) {
        m.params = Some(mean);
    }
    out.imputed += missing;
    Ok(out)
}

/// Monthly cumulative counts of closed (`c`), open (`o`) and
/// unknown-access models, datasets (`d`), and summed model parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulativeSeries {
    pub grid: Vec<YearMonth>,
    pub c: Vec<u64>,
    pub o: Vec<u64>,
    pub unknown: Vec<u64>,
    pub d: Vec<u64>,
    pub params_total: Vec<f64>,
}

impl CumulativeSeries {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn index_of(&self, t: YearMonth) -> Option<usize> {
        self.grid.iter().position(|&g| g == t)
    }
}

pub fn cumulative_series(snapshot: &Snapshot, start: YearMonth, end: YearMonth) -> CumulativeSeries {
    cumulative_series_where(snapshot, start, end, |_| true)
}

/// Like [`cumulative_series`] but counting only models accepted by
/// `keep`; datasets are always counted.
pub fn cumulative_series_where(
    snapshot: &Snapshot,
    start: YearMonth,
    end: YearMonth,
    keep: impl Fn(&AssetRecord) -> bool,
) -> CumulativeSeries {
    let grid = YearMonth::range(start, end);
    let mut models: Vec<&AssetRecord> = snapshot.models.iter().filter(|m| keep(m)).collect();
    models.sort_by_key(|m| m.created);
    let mut datasets: Vec<YearMonth> = snapshot.datasets.iter().map(|d| d.created).collect();
    datasets.sort();

    let n = grid.len();
    let mut series = CumulativeSeries {
        grid: Vec::with_capacity(n),
        c: Vec::with_capacity(n),
        o: Vec::with_capacity(n),
        unknown: Vec::with_capacity(n),
        d: Vec::with_capacity(n),
        params_total: Vec::with_capacity(n),
    };
    let (mut mi, mut di) = (0, 0);
    let (mut c, mut o, mut u, mut p) = (0u64, 0u64, 0u64, 0.0f64);
    for t in grid {
        while mi < models.len() && models[mi].created <= t {
            let m = models[mi];
            match m.access {
                Access::Open => o += 1,
                Access::ClosedOrRestricted => c += 1,
                Access::Unknown => u += 1,
            }
            p += m.params.unwrap_or(0.0);
            mi += 1;
        }
        while di < datasets.len() && datasets[di] <= t {
            di += 1;
        }
        series.grid.push(t);
        series.c.push(c);
        series.o.push(o);
        series.unknown.push(u);
        series.d.push(di as u64);
        series.params_total.push(p);
    }
    series
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "\
name,type,organization,created_date,access,size,modality,url
GPT-3,model,OpenAI,2020-05,limited,175B parameters,text,x
BLOOM,model,BigScience,2022-07-11,open,176B parameters,text,x
Pile,dataset,EleutherAI,2020,open,825 GB,text,x
Chatbot,application,Acme,2023-01,closed,,text,x
Broken,model,Acme,sometime,open,1B,text,x
Mystery,model,\"Unlisted, Meta\",2021-03,,,text; image,x
";

    fn ingest(strict: bool) -> Snapshot {
        let opts = IngestOptions {
            strict_access: strict,
            ..IngestOptions::default()
        };
        ingest_reader(CSV.as_bytes(), &RegionMap::bundled(), &opts).unwrap()
    }

    #[test]
    fn ingests_rows() {
        let s = ingest(true);
        assert_eq!(s.models.len(), 3);
        assert_eq!(s.datasets.len(), 1);
        assert_eq!(s.others.len(), 1);
        assert_eq!(s.skipped_rows(), 1);
        assert_eq!(s.record_count() + s.skipped_rows(), 6);

        let gpt3 = &s.models[0];
        assert_eq!(gpt3.access, Access::ClosedOrRestricted);
        assert_eq!(gpt3.params, Some(1.75e11));
        assert_eq!(gpt3.created, YearMonth::new(2020, 5).unwrap());
        assert_eq!(gpt3.region, Region::NorthAmerica);
        assert_eq!(s.models[1].access, Access::Open);
        assert_eq!(s.models[1].region, Region::Europe);

        let pile = &s.datasets[0];
        assert_eq!(pile.created, YearMonth::new(2020, 1).unwrap());
        assert!(s
            .ingest_warnings
            .iter()
            .any(|w| w.row == 3 && !w.skipped && w.field == "created_date"));

        let mystery = &s.models[2];
        assert_eq!(mystery.access, Access::ClosedOrRestricted);
        assert_eq!(mystery.modality, Modality::Multimodal);
        assert_eq!(mystery.region, Region::NorthAmerica);
    }

    #[test]
    fn lenient_mode_keeps_unknown_access() {
        let s = ingest(false);
        assert_eq!(s.models[2].access, Access::Unknown);
    }

    #[test]
    fn missing_column_is_fatal() {
        let err = ingest_reader(
            "name,type\nA,model\n".as_bytes(),
            &RegionMap::default(),
            &IngestOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Input(_)), "{err}");
    }

    #[test]
    fn csv_round_trip_preserves_records() {
        let s = ingest(false);
        let again = ingest_reader(
            s.to_csv().unwrap().as_bytes(),
            &RegionMap::bundled(),
            &IngestOptions {
                strict_access: false,
                ..IngestOptions::default()
            },
        )
        .unwrap();
        assert_eq!(again.models, s.models);
        assert_eq!(again.datasets, s.datasets);
        assert_eq!(again.others, s.others);
        let json = s.to_json().unwrap();
        assert_eq!(Snapshot::from_json(&json).unwrap(), s);
    }

    #[test]
    fn param_counts() {
        assert_eq!(parse_param_count("13B parameters"), Some(1.3e10));
        assert_eq!(parse_param_count("540B"), Some(5.4e11));
        assert_eq!(parse_param_count("1.5T"), Some(1.5e12));
        assert_eq!(parse_param_count("350M"), Some(3.5e8));
        assert_eq!(parse_param_count("7 billion"), Some(7e9));
        assert_eq!(parse_param_count("unknown"), None);
        assert_eq!(parse_param_count("825 GB"), None);
        assert_eq!(parse_param_count("0B"), None);
    }

    #[test]
    fn modalities() {
        assert_eq!(classify_modality("text; image"), Modality::Multimodal);
        assert_eq!(classify_modality("speech"), Modality::Audio);
        assert_eq!(classify_modality("Text"), Modality::Text);
        assert_eq!(classify_modality("video"), Modality::Vision);
        assert_eq!(classify_modality("protein sequences"), Modality::Other);
        assert_eq!(classify_modality(""), Modality::Unknown);
        for m in Modality::ALL {
            assert_eq!(classify_modality(m.as_str()), *m);
        }
    }

    #[test]
    fn regions() {
        let map = RegionMap::bundled();
        assert_eq!(classify_region("Nobody Inc", &map), Region::Other);
        assert_eq!(classify_region("mistral ai", &map), Region::Europe);
        assert_eq!(classify_region("Nobody; Baidu", &map), Region::Asia);
    }

    #[test]
    fn dates() {
        assert_eq!(
            YearMonth::parse_date("2019").unwrap(),
            (YearMonth::new(2019, 1).unwrap(), true)
        );
        assert_eq!(
            YearMonth::parse_date("2022/11/03").unwrap().0,
            YearMonth::new(2022, 11).unwrap()
        );
        assert!(YearMonth::parse_date("1989-12").is_err());
        assert!(YearMonth::parse_date("2020-13").is_err());
        assert!("2019".parse::<YearMonth>().is_err());
        let a = YearMonth::new(2019, 1).unwrap();
        assert_eq!(YearMonth::new(2020, 7).unwrap().years_since(a), 1.5);
        assert_eq!(
            YearMonth::new(2019, 12).unwrap().next(),
            YearMonth::new(2020, 1).unwrap()
        );
    }

    #[test]
    fn imputation() {
        let mut s = ingest(true);
        s.models[0].params = Some(10.0);
        s.models[1].params = Some(30.0);
        let imputed = impute_params(&s).unwrap();
        assert_eq!(imputed.models[2].params, Some(20.0));
        assert_eq!(imputed.imputed, 1);
        assert_eq!(impute_params(&imputed).unwrap(), imputed);
        for m in &mut s.models {
            m.params = None;
        }
        assert!(impute_params(&s).unwrap_err().is_validation());
    }

    #[test]
    fn cumulative_counts() {
        let start = YearMonth::new(2020, 1).unwrap();
        let end = YearMonth::new(2022, 12).unwrap();
        let empty = cumulative_series(&Snapshot::empty("e"), start, end);
        assert_eq!(empty.len(), 36);
        assert!(empty.c.iter().chain(&empty.o).chain(&empty.d).all(|&x| x == 0));

        let s = ingest(false);
        let series = cumulative_series(&s, start, end);
        let may = series.index_of(YearMonth::new(2020, 5).unwrap()).unwrap();
        assert_eq!((series.c[may - 1], series.c[may]), (0, 1));
        assert_eq!(series.d[0], 1);
        assert_eq!(series.unknown[35], 1);
        assert_eq!(series.o[35], 1);
        assert_eq!(series.params_total[35], 1.75e11 + 1.76e11);
    }
}
