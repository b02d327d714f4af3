//! Case-count and demographics ingestion.
//!
//! Case files use the normalized layout `date,region,confirmed,recovered,deceased`
//! with ISO-8601 dates and plain non-negative integers. Demographics files use
//! `region,population,rural_pct,density`.

use std::collections::{BTreeMap, HashSet};
use std::io::{Read, Write};

use chrono::{Duration, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CompartmentState;

pub const CASE_HEADER: [&str; 5] = ["date", "region", "confirmed", "recovered", "deceased"];
pub const DEMOGRAPHICS_HEADER: [&str; 4] = ["region", "population", "rural_pct", "density"];

/// One row of cumulative counts for a region on a day.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub date: NaiveDate,
    pub region: String,
    pub confirmed: u64,
    pub recovered: u64,
    pub deceased: u64,
}

impl CaseRecord {
    pub fn active(&self) -> u64 {
        self.confirmed - self.recovered - self.deceased
    }

    pub fn removed(&self) -> u64 {
        self.recovered + self.deceased
    }
}

/// A cumulative field that went down between two consecutive reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityWarning {
    pub region: String,
    pub date: NaiveDate,
    pub field: &'static str,
    pub previous: u64,
    pub current: u64,
}

impl std::fmt::Display for MonotonicityWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: cumulative {} fell from {} to {}",
            self.region, self.date, self.field, self.previous, self.current
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedCases {
    pub records: Vec<CaseRecord>,
    pub warnings: Vec<MonotonicityWarning>,
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    let got: Vec<&str> = found.iter().map(str::trim).collect();
    if got != expected {
        return Err(Error::parse(
            1,
            format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(())
}

/// Plain decimal digits only. Signs, grouping separators and whitespace
/// inside the number are rejected.
fn parse_count(line: usize, name: &str, raw: &str) -> Result<u64> {
    let raw = raw.trim();
    if raw.starts_with('-') && raw.len() > 1 && raw[1..].bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(line, format!("{name} is negative: {raw}")));
    }
    if raw.is_empty() || !raw.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(
            line,
            format!("{name} is not a plain integer: `{raw}`"),
        ));
    }
    raw.parse::<u64>()
        .map_err(|e| Error::parse(line, format!("{name} `{raw}`: {e}")))
}

fn parse_real(line: usize, name: &str, raw: &str) -> Result<f64> {
    let raw = raw.trim();
    let plain = !raw.is_empty()
        && raw.bytes().all(|b| {
            b.is_ascii_digit() || b == b'.' || b == b'-' || b == b'e' || b == b'E' || b == b'+'
        });
    let value = if plain { raw.parse::<f64>().ok() } else { None };
    match value {
        Some(v) if v.is_finite() => Ok(v),
        _ => Err(Error::parse(
            line,
            format!("{name} is not a plain number: `{raw}`"),
        )),
    }
}

fn parse_date(line: usize, raw: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(raw.trim(), "%Y-%m-%d")
        .map_err(|e| Error::parse(line, format!("bad date `{}`: {e}", raw.trim())))
}

fn csv_reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(input)
}

fn line_of(record: &csv::StringRecord, fallback: usize) -> usize {
    record
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback)
}

/// Parses a normalized case CSV. Rows are returned in file order; decreases
/// in any cumulative field are collected as warnings, not corrected.
pub fn parse_case_csv<R: Read>(input: R) -> Result<ParsedCases> {
    let mut reader = csv_reader(input);
    check_header(reader.headers()?, &CASE_HEADER)?;

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (k, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::parse(k + 2, e.to_string()))?;
        let line = line_of(&row, k + 2);
        let date = parse_date(line, &row[0])?;
        let region = row[1].trim().to_string();
        if region.is_empty() {
            return Err(Error::parse(line, "empty region"));
        }
        let confirmed = parse_count(line, "confirmed", &row[2])?;
        let recovered = parse_count(line, "recovered", &row[3])?;
        let deceased = parse_count(line, "deceased", &row[4])?;
        if recovered
            .checked_add(deceased)
            .is_none_or(|rem| rem > confirmed)
        {
            return Err(Error::parse(
                line,
                format!("confirmed {confirmed} < recovered {recovered} + deceased {deceased}"),
            ));
        }
        if !seen.insert((region.clone(), date)) {
            return Err(Error::parse(
                line,
                format!("duplicate row for {region} on {date}"),
            ));
        }
        records.push(CaseRecord {
            date,
            region,
            confirmed,
            recovered,
            deceased,
        });
    }

    let warnings = monotonicity_warnings(&records);
    Ok(ParsedCases { records, warnings })
}

fn monotonicity_warnings(records: &[CaseRecord]) -> Vec<MonotonicityWarning> {
    let mut by_region: BTreeMap<&str, Vec<&CaseRecord>> = BTreeMap::new();
    for r in records {
        by_region.entry(&r.region).or_default().push(r);
    }
    let mut warnings = Vec::new();
    for rows in by_region.values_mut() {
        rows.sort_by_key(|r| r.date);
        for pair in rows.windows(2) {
            let (prev, cur) = (pair[0], pair[1]);
            for (field, a, b) in [
                ("confirmed", prev.confirmed, cur.confirmed),
                ("recovered", prev.recovered, cur.recovered),
                ("deceased", prev.deceased, cur.deceased),
            ] {
                if b < a {
                    warnings.push(MonotonicityWarning {
                        region: cur.region.clone(),
                        date: cur.date,
                        field,
                        previous: a,
                        current: b,
                    });
                }
            }
        }
    }
    warnings
}

/// Writes records in the normalized case layout.
pub fn write_case_csv<W: Write>(records: &[CaseRecord], output: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(output);
    writer.write_record(CASE_HEADER)?;
    for r in records {
        writer.write_record([
            r.date.to_string(),
            r.region.clone(),
            r.confirmed.to_string(),
            r.recovered.to_string(),
            r.deceased.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Daily observed series for one region over a gap-free window.
///
/// `active` and `removed` are the observable proxies for the I and R
/// compartments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpiSeries {
    pub region: String,
    pub dates: Vec<NaiveDate>,
    pub confirmed: Vec<f64>,
    pub active: Vec<f64>,
    pub removed: Vec<f64>,
}

impl EpiSeries {
    /// Builds a series from per-day values, checking the layout invariants.
    pub fn new(
        region: impl Into<String>,
        start: NaiveDate,
        confirmed: Vec<f64>,
        active: Vec<f64>,
        removed: Vec<f64>,
    ) -> Result<Self> {
        let n = active.len();
        if n == 0 || confirmed.len() != n || removed.len() != n {
            return Err(Error::invalid(format!(
                "series columns must be non-empty and equal length (confirmed {}, active {}, removed {})",
                confirmed.len(),
                n,
                removed.len()
            )));
        }
        let dates = (0..n).map(|k| start + Duration::days(k as i64)).collect();
        let series = Self {
            region: region.into(),
            dates,
            confirmed,
            active,
            removed,
        };
        series.check()?;
        Ok(series)
    }

    fn check(&self) -> Result<()> {
        for (k, (&a, &c)) in self.active.iter().zip(&self.confirmed).enumerate() {
            if !a.is_finite() || !c.is_finite() || a < 0.0 {
                return Err(Error::invalid(format!(
                    "{} {}: active count {a} is negative or non-finite",
                    self.region, self.dates[k]
                )));
            }
        }
        for k in 1..self.removed.len() {
            if !self.removed[k].is_finite() || self.removed[k] < self.removed[k - 1] {
                return Err(Error::invalid(format!(
                    "{} {}: removed fell from {} to {}",
                    self.region,
                    self.dates[k],
                    self.removed[k - 1],
                    self.removed[k]
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn start_date(&self) -> NaiveDate {
        self.dates[0]
    }

    pub fn end_date(&self) -> NaiveDate {
        *self.dates.last().expect("series is non-empty")
    }

    pub fn index_of(&self, date: NaiveDate) -> Option<usize> {
        let offset = (date - self.start_date()).num_days();
        (offset >= 0 && (offset as usize) < self.len()).then_some(offset as usize)
    }

    /// Sub-series covering `[start, end]`, both inclusive.
    pub fn window(&self, start: NaiveDate, end: NaiveDate) -> Result<Self> {
        let (a, b) = match (self.index_of(start), self.index_of(end)) {
            (Some(a), Some(b)) if a <= b => (a, b),
            _ => {
                return Err(Error::invalid(format!(
                    "window {start}..{end} is not inside {}..{}",
                    self.start_date(),
                    self.end_date()
                )))
            }
        };
        Ok(Self {
            region: self.region.clone(),
            dates: self.dates[a..=b].to_vec(),
            confirmed: self.confirmed[a..=b].to_vec(),
            active: self.active[a..=b].to_vec(),
            removed: self.removed[a..=b].to_vec(),
        })
    }

    /// Model state on day `index`: I = active, R = removed, S = N - I - R.
    pub fn state_at(&self, index: usize, population: f64) -> Result<CompartmentState> {
        if index >= self.len() {
            return Err(Error::invalid(format!("day index {index} outside series")));
        }
        let i = self.active[index];
        let r = self.removed[index];
        let s = population - i - r;
        if s < 0.0 {
            return Err(Error::invalid(format!(
                "{}: active + removed ({}) exceeds population {population}",
                self.region,
                i + r
            )));
        }
        Ok(CompartmentState::new(0.0, s, i, r))
    }
}

/// Extracts the daily series for `region` over `[start, end]`.
pub fn derive_epi_series(
    records: &[CaseRecord],
    region: &str,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<EpiSeries> {
    if end < start {
        return Err(Error::invalid(format!(
            "window end {end} is before start {start}"
        )));
    }
    let by_date: BTreeMap<NaiveDate, &CaseRecord> = records
        .iter()
        .filter(|r| r.region == region && r.date >= start && r.date <= end)
        .map(|r| (r.date, r))
        .collect();

    let days = (end - start).num_days() as usize + 1;
    let mut missing = Vec::new();
    let mut confirmed = Vec::with_capacity(days);
    let mut active = Vec::with_capacity(days);
    let mut removed = Vec::with_capacity(days);
    for k in 0..days {
        let date = start + Duration::days(k as i64);
        match by_date.get(&date) {
            Some(r) => {
                confirmed.push(r.confirmed as f64);
                active.push(r.active() as f64);
                removed.push(r.removed() as f64);
            }
            None => missing.push(date),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingDays {
            region: region.to_string(),
            missing,
        });
    }
    EpiSeries::new(region, start, confirmed, active, removed)
}

/// Region population and density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub region: String,
    pub population: u64,
    pub rural_pct: f64,
    pub density_per_km2: f64,
}

pub fn load_demographics<R: Read>(input: R) -> Result<Vec<RegionRecord>> {
    let mut reader = csv_reader(input);
    check_header(reader.headers()?, &DEMOGRAPHICS_HEADER)?;

    let mut out: Vec<RegionRecord> = Vec::new();
    let mut names = HashSet::new();
    for (k, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::parse(k + 2, e.to_string()))?;
        let line = line_of(&row, k + 2);
        let region = row[0].trim().to_string();
        if region.is_empty() {
            return Err(Error::parse(line, "empty region"));
        }
        let population = parse_count(line, "population", &row[1])?;
        if population == 0 {
            return Err(Error::parse(
                line,
                format!("{region}: population must be > 0"),
            ));
        }
        let rural_pct = parse_real(line, "rural_pct", &row[2])?;
        if !(0.0..=100.0).contains(&rural_pct) {
            return Err(Error::parse(
                line,
                format!("rural_pct {rural_pct} outside [0, 100]"),
            ));
        }
        let density_per_km2 = parse_real(line, "density", &row[3])?;
        if density_per_km2 <= 0.0 {
            return Err(Error::parse(
                line,
                format!("density {density_per_km2} must be > 0"),
            ));
        }
        if !names.insert(region.clone()) {
            return Err(Error::parse(line, format!("duplicate region `{region}`")));
        }
        out.push(RegionRecord {
            region,
            population,
            rural_pct,
            density_per_km2,
        });
    }
    Ok(out)
}

pub fn find_region<'a>(records: &'a [RegionRecord], region: &str) -> Result<&'a RegionRecord> {
    records
        .iter()
        .find(|r| r.region == region)
        .ok_or_else(|| Error::invalid(format!("region `{region}` not found in demographics")))
}
