//! Brute-force inference cost: FLOP totals, wall-clock time on a reference
//! machine, and the time to stream the prompt data.
//!
//! Token totals use 365-day years; compute time is rendered in Julian years.
//! The national streaming volume is reported both per day and per year,
//! since the two differ by a factor of 365 (about 2.6 s against 16 min at
//! the reference I/O rate).

use std::fmt;

use serde::Serialize;

use crate::ecosystem::{CumulativeSeries, YearMonth};
use crate::error::{Error, Result};

/// Peak FLOP/s of the reference machine.
pub const REFERENCE_FLOPS: f64 = 1.7e18;
/// Sustained I/O rate of the reference machine, bytes per second.
pub const REFERENCE_IO: f64 = 2e12;
pub const BYTES_PER_TOKEN: f64 = 4.0;
/// Cumulative parameters across known models in January 2025.
pub const PARAMS_2025: f64 = 2.2e13;
/// Cumulative parameters across known models in 2019.
pub const PARAMS_2019: f64 = 1.3e10;
pub const ITEM_TOKENS: f64 = 1e5;
pub const DAILY_ITEMS: f64 = 1e4;
pub const DAILY_USERS: f64 = 1.32e8;
pub const TOKENS_PER_USER_DAY: f64 = 1e4;
pub const DAYS_PER_YEAR: f64 = 365.0;

pub const SECONDS_PER_HOUR: f64 = 3600.0;
pub const SECONDS_PER_DAY: f64 = 86400.0;
pub const SECONDS_PER_YEAR: f64 = 3.1557e7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComputeScenario {
    pub params_total: f64,
    pub tokens: f64,
    pub flops_per_param_token: f64,
    pub machine_flops_per_sec: f64,
    pub bytes_per_token: f64,
    pub io_bytes_per_sec: f64,
}

impl ComputeScenario {
    /// One FLOP per parameter per token on the reference machine.
    pub fn reference(params_total: f64, tokens: f64) -> Self {
        Self {
            params_total,
            tokens,
            flops_per_param_token: 1.0,
            machine_flops_per_sec: REFERENCE_FLOPS,
            bytes_per_token: BYTES_PER_TOKEN,
            io_bytes_per_sec: REFERENCE_IO,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("params_total", self.params_total),
            ("tokens", self.tokens),
            ("flops_per_param_token", self.flops_per_param_token),
            ("machine_flops_per_sec", self.machine_flops_per_sec),
            ("bytes_per_token", self.bytes_per_token),
            ("io_bytes_per_sec", self.io_bytes_per_sec),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub total_flops: f64,
    pub wall_seconds: f64,
    pub wall_human: String,
    pub data_bytes: f64,
    pub stream_seconds: f64,
}

pub fn evaluate(scenario: &ComputeScenario) -> Result<ScenarioResult> {
    scenario.validate()?;
    let total_flops = scenario.params_total * scenario.tokens * scenario.flops_per_param_token;
    let wall_seconds = total_flops / scenario.machine_flops_per_sec;
    let data_bytes = scenario.tokens * scenario.bytes_per_token;
    Ok(ScenarioResult {
        total_flops,
        wall_seconds,
        wall_human: human_duration(wall_seconds),
        data_bytes,
        stream_seconds: data_bytes / scenario.io_bytes_per_sec,
    })
}

pub fn stream_time(tokens: f64, bytes_per_token: f64, io_rate: f64) -> Result<f64> {
    for (name, v) in [
        ("tokens", tokens),
        ("bytes_per_token", bytes_per_token),
        ("io_rate", io_rate),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::validation(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(tokens * bytes_per_token / io_rate)
}

/// Renders seconds in the largest fitting unit among s, min, h, d and yr.
pub fn human_duration(seconds: f64) -> String {
    let (value, unit) = if seconds < 60.0 {
        (seconds, "s")
    } else if seconds < SECONDS_PER_HOUR {
        (seconds / 60.0, "min")
    } else if seconds < SECONDS_PER_DAY {
        (seconds / SECONDS_PER_HOUR, "h")
    } else if seconds < SECONDS_PER_YEAR {
        (seconds / SECONDS_PER_DAY, "d")
    } else {
        (seconds / SECONDS_PER_YEAR, "yr")
    };
    if value != 0.0 && value.abs() < 0.01 {
        format!("{value:.2e} {unit}")
    } else {
        format!("{value:.3} {unit}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    SingleItem,
    DailySweep,
    NationalAnnual,
}

impl Preset {
    pub const ALL: &'static [Preset] = &[Preset::SingleItem, Preset::DailySweep, Preset::NationalAnnual];

    pub fn name(self) -> &'static str {
        match self {
            Preset::SingleItem => "paper-2025-single-item",
            Preset::DailySweep => "paper-daily-sweep",
            Preset::NationalAnnual => "paper-national-annual",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::input(format!("unknown preset {name:?}")))
    }

    pub fn tokens(self) -> f64 {
        match self {
            Preset::SingleItem => ITEM_TOKENS,
            Preset::DailySweep => DAILY_ITEMS * ITEM_TOKENS,
            Preset::NationalAnnual => national_tokens_per_year(),
        }
    }

    pub fn scenario(self, params_total: f64) -> ComputeScenario {
        ComputeScenario::reference(params_total, self.tokens())
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn national_tokens_per_day() -> f64 {
    DAILY_USERS * TOKENS_PER_USER_DAY
}

pub fn national_tokens_per_year() -> f64 {
    national_tokens_per_day() * DAYS_PER_YEAR
}

pub fn national_preset(params_total: f64) -> ComputeScenario {
    Preset::NationalAnnual.scenario(params_total)
}

/// Streaming time for one day and one year of national prompt volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StreamingComparison {
    pub daily_bytes: f64,
    pub daily_seconds: f64,
    pub annual_bytes: f64,
    pub annual_seconds: f64,
}

pub fn national_streaming() -> StreamingComparison {
    let day = national_tokens_per_day();
    let year = national_tokens_per_year();
    StreamingComparison {
        daily_bytes: day * BYTES_PER_TOKEN,
        daily_seconds: day * BYTES_PER_TOKEN / REFERENCE_IO,
        annual_bytes: year * BYTES_PER_TOKEN,
        annual_seconds: year * BYTES_PER_TOKEN / REFERENCE_IO,
    }
}

/// Cumulative parameters at January of each year on the grid.
pub fn params_by_year(series: &CumulativeSeries) -> Vec<(i32, f64)> {
    series
        .grid
        .iter()
        .zip(&series.params_total)
        .filter(|(t, _)| t.month() == 1)
        .map(|(t, &p)| (t.year(), p))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub year: i32,
    pub series: String,
    pub params_total: f64,
    pub tokens: f64,
    pub wall_seconds: f64,
    pub log10_wall_seconds: f64,
}

pub const SWEEP_TOKEN_LENGTHS: [f64; 3] = [1e3, 1e4, 1e5];

/// Wall-clock time per year for each token length, followed by the daily
/// sweep. Years with no parameters are skipped.
pub fn sweep_grid(params_by_year: &[(i32, f64)], token_lengths: &[f64]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    let series = token_lengths
        .iter()
        .map(|&t| (format!("{t:.0e} tokens"), t))
        .chain(std::iter::once((
            "daily-sweep".to_string(),
            Preset::DailySweep.tokens(),
        )));
    for (label, tokens) in series {
        for &(year, params) in params_by_year.iter().filter(|(_, p)| *p > 0.0) {
            let r = evaluate(&ComputeScenario::reference(params, tokens))?;
            rows.push(SweepRow {
                year,
                series: label.clone(),
                params_total: params,
                tokens,
                wall_seconds: r.wall_seconds,
                log10_wall_seconds: r.wall_seconds.log10(),
            });
        }
    }
    Ok(rows)
}

/// Cumulative parameters at January of `year`, if on the grid.
pub fn params_at(series: &CumulativeSeries, year: i32) -> Option<f64> {
    let t = YearMonth::new(year, 1).ok()?;
    series.index_of(t).map(|i| series.params_total[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn within(x: f64, target: f64, rel: f64) -> bool {
        ((x - target) / target).abs() <= rel
    }

    #[test]
    fn single_item() {
        let r = evaluate(&Preset::SingleItem.scenario(PARAMS_2025)).unwrap();
        assert!(within(r.total_flops, 2.2e18, 1e-12));
        assert!(within(r.wall_seconds, 1.294, 1e-3));
        assert_eq!(r.wall_human, "1.294 s");
    }

    #[test]
    fn daily_sweep() {
        let r = evaluate(&Preset::DailySweep.scenario(PARAMS_2025)).unwrap();
        assert!(within(r.total_flops, 2.2e22, 1e-12));
        assert!(within(r.wall_seconds / SECONDS_PER_HOUR, 3.6, 0.01));
        assert!(r.wall_human.ends_with(" h"));
    }

    #[test]
    fn national_annual() {
        assert_eq!(national_tokens_per_day(), 1.32e12);
        assert!(within(national_tokens_per_year(), 4.818e14, 1e-12));
        let r = evaluate(&national_preset(PARAMS_2025)).unwrap();
        assert!(within(r.total_flops, 1.06e28, 0.01));
        assert!(within(r.wall_seconds / SECONDS_PER_YEAR, 197.6, 0.01));
        assert!(within(r.data_bytes, 1.93e15, 0.01));
        assert!(within(r.stream_seconds, 963.6, 1e-3));
        let s = national_streaming();
        assert!(within(s.daily_seconds, 2.64, 1e-9));
        assert!(within(s.annual_seconds / s.daily_seconds, 365.0, 1e-12));
    }

    #[test]
    fn stream_times() {
        assert_eq!(stream_time(1.0, 4.0, 4.0).unwrap(), 1.0);
        assert_eq!(stream_time(1e12, 4.0, 2e12).unwrap(), 2.0);
        assert!(stream_time(0.0, 4.0, 4.0).unwrap_err().is_validation());
    }

    #[test]
    fn nonpositive_fields_are_rejected() {
        let mut s = ComputeScenario::reference(1.0, 1.0);
        s.machine_flops_per_sec = 0.0;
        assert!(evaluate(&s).unwrap_err().is_validation());
    }

    #[test]
    fn sweep_is_linear_in_tokens() {
        let rows = sweep_grid(&[(2019, PARAMS_2019), (2025, PARAMS_2025)], &SWEEP_TOKEN_LENGTHS).unwrap();
        assert_eq!(rows.len(), 8);
        let at = |year, tokens: f64| {
            rows.iter()
                .find(|r| r.year == year && r.tokens == tokens && r.series != "daily-sweep")
                .unwrap()
                .log10_wall_seconds
        };
        assert!((at(2025, 1e5) - at(2025, 1e3) - 2.0).abs() < 1e-12);
        assert!((at(2025, 1e5) - 0.112).abs() < 1e-3);
        assert!(within(10f64.powf(at(2019, 1e5)), 7.65e-4, 0.01));
    }

    #[test]
    fn durations() {
        assert_eq!(human_duration(960.0), "16.000 min");
        assert_eq!(human_duration(7.6e-4), "7.60e-4 s");
    }
}
