//! Combinatorial lower bounds on the number of candidate model origins,
//! log-linear exponential fits, and modality/region slices.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ecosystem::{cumulative_series_where, CumulativeSeries, Modality, Region, Snapshot, YearMonth};
use crate::error::{Error, Result};

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn check_k(k: u8) -> Result<()> {
    if (1..=3).contains(&k) {
        Ok(())
    } else {
        Err(Error::input(format!("k must be 1, 2 or 3, got {k}")))
    }
}

/// `C + O·Σ_{j≤k} C(D, j)`: each closed model, plus each open model
/// fine-tuned on any set of at most `k` datasets.
pub fn n_bound(c: u64, o: u64, d: u64, k: u8) -> Result<u128> {
    check_k(k)?;
    let d = d as u128;
    let variants: u128 = (0..=k as u128).map(|j| binomial(d, j)).sum();
    Ok(c as u128 + o as u128 * variants)
}

/// Counts the distinct candidates by listing them.
pub fn brute_force_count(c: u64, o: u64, d: u64, k: u8) -> Result<u128> {
    check_k(k)?;
    if d > 15 {
        return Err(Error::input("brute force is limited to at most 15 datasets"));
    }
    #[derive(PartialEq, Eq, Hash)]
    enum Candidate {
        Closed(u64),
        Tuned(u64, u32),
    }
    let mut seen = HashSet::new();
    for i in 0..c {
        seen.insert(Candidate::Closed(i));
    }
    for i in 0..o {
        for subset in 0u32..(1 << d) {
            if subset.count_ones() <= k as u32 {
                seen.insert(Candidate::Tuned(i, subset));
            }
        }
    }
    Ok(seen.len() as u128)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GrowthPoint {
    pub t: YearMonth,
    pub c: u64,
    pub o: u64,
    pub d: u64,
    pub n: u128,
}

/// Applies [`n_bound`] at every grid point. Unknown-access models are not
/// counted.
pub fn n_series(series: &CumulativeSeries, k: u8) -> Result<Vec<GrowthPoint>> {
    (0..series.len())
        .map(|i| {
            let (c, o, d) = (series.c[i], series.o[i], series.d[i]);
            Ok(GrowthPoint {
                t: series.grid[i],
                c,
                o,
                d,
                n: n_bound(c, o, d, k)?,
            })
        })
        .collect()
}

/// An inclusive range of months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Window {
    pub start: YearMonth,
    pub end: YearMonth,
}

impl Window {
    pub fn new(start: YearMonth, end: YearMonth) -> Result<Self> {
        if start > end {
            return Err(Error::input(format!("window start {start} is after end {end}")));
        }
        Ok(Self { start, end })
    }

    pub fn contains(&self, t: YearMonth) -> bool {
        self.start <= t && t <= self.end
    }
}

impl Default for Window {
    fn default() -> Self {
        Self {
            start: YearMonth::new(2019, 1).expect("valid"),
            end: YearMonth::new(2025, 1).expect("valid"),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `YYYY-MM:YYYY-MM`.
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once(':')
            .ok_or_else(|| Error::input(format!("window {s:?} is not YYYY-MM:YYYY-MM")))?;
        Window::new(a.parse()?, b.parse()?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpFit {
    /// Growth rate per year.
    pub b: f64,
    pub ln_a: f64,
    pub r2: f64,
    /// Doubling time in years; absent unless `b > 0`.
    pub tau: Option<f64>,
    pub points_used: usize,
    pub zero_points_dropped: usize,
}

/// Ordinary least squares of `ln n` on `t` (years). Points with `n <= 0`
/// are dropped and counted.
pub fn fit_log_linear(t: &[f64], n: &[f64]) -> Result<ExpFit> {
    if t.len() != n.len() {
        return Err(Error::input("time and value series differ in length"));
    }
    let pts: Vec<(f64, f64)> = t
        .iter()
        .zip(n)
        .filter(|(_, &v)| v > 0.0)
        .map(|(&x, &v)| (x, v.ln()))
        .collect();
    let dropped = t.len() - pts.len();
    if pts.len() < 3 {
        return Err(Error::validation(format!(
            "need at least 3 points with N > 0 to fit, have {}",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(Error::validation("all fit points share one time"));
    }
    let b = sxy / sxx;
    let ln_a = mean_y - b * mean_x;
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = pts.iter().map(|p| (p.1 - ln_a - b * p.0).powi(2)).sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(ExpFit {
        b,
        ln_a,
        r2,
        tau: (b > 0.0).then(|| std::f64::consts::LN_2 / b),
        points_used: pts.len(),
        zero_points_dropped: dropped,
    })
}

/// Fits the points inside `window`, with time measured in years from the
/// first of them.
pub fn fit_exponential(points: &[GrowthPoint], window: Window) -> Result<ExpFit> {
    let inside: Vec<&GrowthPoint> = points.iter().filter(|p| window.contains(p.t)).collect();
    let Some(origin) = inside.first().map(|p| p.t) else {
        return Err(Error::validation(format!("no points inside {window}")));
    };
    let t: Vec<f64> = inside.iter().map(|p| p.t.years_since(origin)).collect();
    let n: Vec<f64> = inside.iter().map(|p| p.n as f64).collect();
    fit_log_linear(&t, &n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceDimension {
    Modality,
    Region,
}

impl FromStr for SliceDimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "modality" => Ok(SliceDimension::Modality),
            "region" => Ok(SliceDimension::Region),
            _ => Err(Error::input(format!("unknown slice dimension {s:?}"))),
        }
    }
}

/// Per-label growth series. Closed and open counts come from the models in
/// the slice; the dataset count is global.
pub fn slice_series(
    snapshot: &Snapshot,
    dimension: SliceDimension,
    window: Window,
    k: u8,
) -> Result<BTreeMap<String, Vec<GrowthPoint>>> {
    let mut out = BTreeMap::new();
    match dimension {
        SliceDimension::Modality => {
            for &m in Modality::ALL {
                let s = cumulative_series_where(snapshot, window.start, window.end, |r| r.modality == m);
                out.insert(m.to_string(), n_series(&s, k)?);
            }
        }
        SliceDimension::Region => {
            for &r in Region::ALL {
                let s = cumulative_series_where(snapshot, window.start, window.end, |rec| rec.region == r);
                out.insert(r.to_string(), n_series(&s, k)?);
            }
        }
    }
    Ok(out)
}

/// One row of the fit summary table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub metric: String,
    pub b: f64,
    pub r2: f64,
    pub tau: Option<f64>,
    pub points_used: usize,
    pub zero_points_dropped: usize,
}

impl FitRow {
    pub fn new(metric: impl Into<String>, fit: &ExpFit) -> Self {
        Self {
            metric: metric.into(),
            b: fit.b,
            r2: fit.r2,
            tau: fit.tau,
            points_used: fit.points_used,
            zero_points_dropped: fit.zero_points_dropped,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecosystem::{cumulative_series, Access, AssetRecord, AssetType};

    #[test]
    fn spot_values() {
        assert_eq!(n_bound(2, 3, 4, 1).unwrap(), 17);
        assert_eq!(n_bound(2, 3, 4, 2).unwrap(), 35);
        assert_eq!(n_bound(2, 3, 4, 3).unwrap(), 47);
        assert_eq!(brute_force_count(0, 1, 0, 3).unwrap(), 1);
        assert_eq!(brute_force_count(5, 0, 9, 2).unwrap(), 5);
        for k in 1..=3 {
            assert_eq!(brute_force_count(2, 3, 4, k).unwrap(), n_bound(2, 3, 4, k).unwrap());
        }
        assert!(n_bound(1, 1, 1, 4).is_err());
        assert!(brute_force_count(1, 1, 16, 1).is_err());
    }

    #[test]
    fn exact_exponential_is_recovered() {
        let t: Vec<f64> = (0..12).map(|i| i as f64 / 12.0).collect();
        let n: Vec<f64> = t.iter().map(|x| 5.0 * x.exp()).collect();
        let fit = fit_log_linear(&t, &n).unwrap();
        assert!((fit.b - 1.0).abs() <= 1e-9);
        assert!((fit.ln_a - 5f64.ln()).abs() <= 1e-9);
        assert_eq!(fit.r2, 1.0);
        assert!((fit.tau.unwrap() - std::f64::consts::LN_2).abs() <= 1e-9);
    }

    #[test]
    fn constant_series_has_no_doubling_time() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let fit = fit_log_linear(&t, &[7.0; 4]).unwrap();
        assert_eq!(fit.b, 0.0);
        assert_eq!(fit.tau, None);
    }

    #[test]
    fn zero_points_are_dropped() {
        let t = [0.0, 1.0, 2.0, 3.0, 4.0];
        let fit = fit_log_linear(&t, &[0.0, 0.0, 1.0, 2.0, 4.0]).unwrap();
        assert_eq!(fit.zero_points_dropped, 2);
        assert!((fit.b - std::f64::consts::LN_2).abs() < 1e-12);
        assert!(fit_log_linear(&t, &[0.0, 0.0, 0.0, 2.0, 4.0])
            .unwrap_err()
            .is_validation());
    }

    #[test]
    fn windows() {
        let w: Window = "2019-01:2025-01".parse().unwrap();
        assert_eq!(w, Window::default());
        assert!("2025-01:2019-01".parse::<Window>().is_err());
        assert!("2019-01".parse::<Window>().is_err());
    }

    fn model(date: &str, modality: Modality) -> AssetRecord {
        AssetRecord {
            name: String::new(),
            asset_type: AssetType::Model,
            organization: String::new(),
            created: YearMonth::parse_date(date).unwrap().0,
            access: Access::Open,
            raw_size: None,
            params: None,
            modality,
            region: Region::Other,
        }
    }

    #[test]
    fn text_only_slice_equals_global() {
        let mut snap = Snapshot::empty("t");
        snap.models = vec![model("2019-03", Modality::Text), model("2020-08", Modality::Text)];
        let mut ds = model("2019-06", Modality::Text);
        ds.asset_type = AssetType::Dataset;
        snap.datasets = vec![ds];
        let w = Window::default();
        let global = n_series(&cumulative_series(&snap, w.start, w.end), 1).unwrap();
        let slices = slice_series(&snap, SliceDimension::Modality, w, 1).unwrap();
        assert_eq!(slices["text"], global);
        assert!(slices["vision"].iter().all(|p| p.n == 0));
        assert_eq!(slices.len(), Modality::ALL.len());
    }
}
