//! Subcommand implementations.

use std::collections::BTreeMap;
use std::path::Path;

use attrib_core::cost::{self, ComputeScenario, Preset};
use attrib_core::ecosystem::{self, ColumnMap, IngestOptions, RegionMap};
use attrib_core::game::{self, Schedule};
use attrib_core::growth::{self, FitRow, GrowthPoint, SliceDimension, Window};
use attrib_core::lang::{build_unary_nested_family, parse_family};
use attrib_core::problang::{self, ProbLanguage};
use attrib_core::telltale::{self, TellTaleAssignment, TellTaleEntry};
use attrib_core::{CumulativeSeries, LanguageFamily, Learner, SimulationReport, Snapshot, YearMonth};
use serde::Serialize;

use crate::output::{emit, num, sci, write_atomic, Failure, Outcome, Provenance};
use crate::svg::{Heatmap, LineChart, Series};
use crate::{
    AdversaryArgs, AdversaryMode, ComputeArgs, GrowthArgs, LearnerChoice, PresetChoice, ProblangArgs, ReportArgs,
    ScheduleChoice, SimulateArgs, SnapshotArgs, SupportOrder, TelltaleArgs,
};

const FINITE_CLASS_LIMIT: usize = 1000;
const NORMALIZATION_TOLERANCE: f64 = 1e-9;

fn load_family(prov: &mut Provenance, path: &Path) -> Outcome<LanguageFamily> {
    let text = prov.read(path)?;
    Ok(parse_family(&text)?)
}

fn family_learner<'a>(
    choice: LearnerChoice,
    family: &'a LanguageFamily,
    telltales: Option<&'a TellTaleAssignment>,
) -> Outcome<Box<dyn Learner + 'a>> {
    Ok(match choice {
        LearnerChoice::FiniteClass => {
            let t = telltales.ok_or_else(|| Failure::Input("finite-class learner needs tell-tale sets".into()))?;
            Box::new(telltale::make_finite_class_learner(family, t))
        }
        LearnerChoice::MinConsistent => Box::new(game::min_consistent_learner(family)),
        LearnerChoice::MaxConsistent => Box::new(game::max_consistent_learner(family)),
        LearnerChoice::Impatient(p) => Box::new(game::impatient_learner(family, p)),
        LearnerChoice::PosteriorUniform | LearnerChoice::LikelihoodRatio => {
            return Err(Failure::Input(format!(
                "learner {} works on probabilistic languages; use it with --mode support",
                serde_json::to_value(choice)?.as_str().unwrap_or("?")
            )))
        }
    })
}

// ---------------------------------------------------------------------------
// telltale

#[derive(Serialize)]
struct TelltaleDocument {
    family_size: usize,
    telltales: Vec<TellTaleEntry>,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<telltale::AngluinViolation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation_message: Option<String>,
}

pub fn telltale(args: &TelltaleArgs) -> Outcome<()> {
    let mut prov = Provenance::new("telltale", args);
    let family = load_family(&mut prov, &args.family)?;
    let assignment = match &args.check {
        Some(path) => {
            let text = prov.read(path)?;
            let entries: Vec<TellTaleEntry> = match serde_json::from_str::<serde_json::Value>(&text)? {
                serde_json::Value::Object(mut doc) => serde_json::from_value(
                    doc.remove("telltales")
                        .ok_or_else(|| Failure::Input("missing \"telltales\" field".into()))?,
                )?,
                other => serde_json::from_value(other)?,
            };
            let mut sets = vec![Vec::new(); family.len()];
            for entry in entries {
                let i = family.index_of(&entry.name).ok_or_else(|| {
                    Failure::Input(format!("unknown language {:?} in tell-tale document", entry.name))
                })?;
                for s in &entry.telltale {
                    family.alphabet().validate(s)?;
                }
                sets[i] = entry.telltale;
            }
            TellTaleAssignment::new(&family, sets)
        }
        None => telltale::construct_telltales(&family)?,
    };
    let violation = telltale::verify_angluin_condition(&family, &assignment)?;
    let doc = TelltaleDocument {
        family_size: family.len(),
        telltales: assignment.to_document(&family),
        verified: violation.is_none(),
        violation_message: violation.as_ref().map(|v| v.to_string()),
        violation,
    };
    emit(args.out.as_deref(), &prov.json_document(&doc)?)?;
    match doc.violation_message {
        Some(m) => Err(Failure::Check(m)),
        None => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// simulate

pub fn simulate(args: &SimulateArgs) -> Outcome<()> {
    let mut prov = Provenance::new("simulate", args);
    let family = load_family(&mut prov, &args.family)?;
    let target = family
        .index_of(&args.target)
        .ok_or_else(|| Failure::Input(format!("no language named {:?} in the family", args.target)))?;
    let telltales = match args.learner {
        LearnerChoice::FiniteClass => Some(telltale::construct_telltales(&family)?),
        _ => None,
    };
    let mut learner = family_learner(args.learner, &family, telltales.as_ref())?;
    let schedule = match args.schedule {
        ScheduleChoice::LengthLex => Schedule::LengthLex,
        ScheduleChoice::Shuffled => Schedule::Shuffled { seed: args.seed },
    };
    let lang = family.get(target).expect("index from family");
    let mut teacher = game::fair_teacher(lang, schedule)?.with_target(target);
    let report = game::run_simulation(&mut teacher, learner.as_mut(), args.horizon)?;
    emit(args.out.as_deref(), &prov.json_document(&report)?)
}

// ---------------------------------------------------------------------------
// adversary

#[derive(Serialize)]
struct SupportDocument {
    /// Runs with the provisional target announced as P1 and as P2.
    runs: Vec<SimulationReport>,
    transcripts_identical: bool,
    forced_error_certificate: bool,
}

pub fn adversary(args: &AdversaryArgs) -> Outcome<()> {
    let mut prov = Provenance::new("adversary", args);
    match args.mode {
        AdversaryMode::Nested => {
            let k = args.k.unwrap_or(args.horizon).max(1);
            let choice = args.learner.unwrap_or(LearnerChoice::MinConsistent);
            if choice == LearnerChoice::FiniteClass && k > FINITE_CLASS_LIMIT {
                return Err(Failure::Input(format!(
                    "finite-class tell-tale sets for {k} thresholds are too large; use --k {FINITE_CLASS_LIMIT} or less"
                )));
            }
            let family = build_unary_nested_family(k)?;
            let telltales = match choice {
                LearnerChoice::FiniteClass => Some(telltale::construct_telltales(&family)?),
                _ => None,
            };
            let mut learner = family_learner(choice, &family, telltales.as_ref())?;
            let report = game::nested_adversary(learner.as_mut(), &family, args.horizon)?;
            prov.config["k"] = k.into();
            emit(args.out.as_deref(), &prov.json_document(&report)?)?;
            if report.certifies_non_identification() {
                Ok(())
            } else {
                Err(Failure::Check("run does not certify non-identification".into()))
            }
        }
        AdversaryMode::Support => {
            let candidates = [ProbLanguage::p1(), ProbLanguage::p2()];
            let choice = args.learner.unwrap_or(LearnerChoice::PosteriorUniform);
            let canonical = args.order == SupportOrder::Canonical;
            let mut runs = Vec::with_capacity(2);
            for label in 0..2 {
                let mut learner: Box<dyn Learner + '_> = match choice {
                    LearnerChoice::PosteriorUniform => Box::new(problang::make_prob_learner(&candidates)),
                    LearnerChoice::LikelihoodRatio => Box::new(problang::likelihood_ratio_learner(&candidates)),
                    _ => {
                        return Err(Failure::Input(
                            "support mode takes posterior-uniform or likelihood-ratio".into(),
                        ))
                    }
                };
                let mut teacher = game::SupportAdversary::with_label(canonical, label);
                runs.push(game::run_simulation(&mut teacher, learner.as_mut(), args.horizon)?);
            }
            let transcripts_identical = runs[0].transcript == runs[1].transcript;
            let forced_error_certificate =
                transcripts_identical && runs.iter().all(|r| r.forced_error && !r.final_correct);
            let doc = SupportDocument {
                runs,
                transcripts_identical,
                forced_error_certificate,
            };
            emit(args.out.as_deref(), &prov.json_document(&doc)?)?;
            if forced_error_certificate {
                Ok(())
            } else {
                Err(Failure::Check("support adversary did not force an error".into()))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// problang-verify

#[derive(Serialize)]
struct ProblangChecks {
    normalized: bool,
    support_equal: bool,
    kl_finite: bool,
}

#[derive(Serialize)]
struct ProblangDocument {
    max_n: usize,
    tolerance: f64,
    checks: ProblangChecks,
    report: problang::ProbLangReport,
}

pub fn problang_verify(args: &ProblangArgs) -> Outcome<()> {
    let prov = Provenance::new("problang-verify", args);
    if args.trials == 0 {
        return Err(Failure::Input("--trials must be positive".into()));
    }
    let report = problang::verify_problang(args.max_n, &args.sizes, args.trials, args.seed)?;
    let checks = ProblangChecks {
        normalized: report.tail_p1.abs() <= NORMALIZATION_TOLERANCE && report.tail_p2.abs() <= NORMALIZATION_TOLERANCE,
        support_equal: report.support_equal,
        kl_finite: report.kl_12.is_finite() && report.kl_21.is_finite(),
    };
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = report
            .classifier_accuracy_by_m
            .iter()
            .map(|a| {
                vec![
                    a.sample_size.to_string(),
                    a.trials.to_string(),
                    num(a.accuracy),
                    num(a.std_error),
                ]
            })
            .collect();
        write_atomic(
            path,
            &prov.csv_document(&["sample_size", "trials", "accuracy", "std_error"], &rows)?,
        )?;
    }
    let failed: Vec<&str> = [
        ("normalization", checks.normalized),
        ("support equality", checks.support_equal),
        ("finite divergence", checks.kl_finite),
    ]
    .iter()
    .filter(|(_, ok)| !ok)
    .map(|(name, _)| *name)
    .collect();
    let doc = ProblangDocument {
        max_n: args.max_n,
        tolerance: NORMALIZATION_TOLERANCE,
        checks,
        report,
    };
    emit(args.out.as_deref(), &prov.json_document(&doc)?)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join(", ")))
    }
}

// ---------------------------------------------------------------------------
// ecosystem loading

fn load_snapshot(prov: &mut Provenance, args: &SnapshotArgs) -> Outcome<Snapshot> {
    let regions = match &args.region_map {
        Some(path) => RegionMap::from_json(&prov.read(path)?)?,
        None => RegionMap::bundled(),
    };
    let columns = match &args.columns {
        Some(path) => serde_json::from_str::<ColumnMap>(&prov.read(path)?)?,
        None => ColumnMap::default(),
    };
    let text = prov.read(&args.assets)?;
    let snapshot = if args.assets.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        Snapshot::from_json(&text)?
    } else {
        let options = IngestOptions {
            columns,
            strict_access: args.strict_access,
            label: args
                .assets
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default(),
        };
        ecosystem::ingest_reader(text.as_bytes(), &regions, &options)?
    };
    if !snapshot.ingest_warnings.is_empty() {
        eprintln!(
            "attrib: {} ingest warnings ({} rows skipped)",
            snapshot.ingest_warnings.len(),
            snapshot.skipped_rows()
        );
    }
    if snapshot.models.is_empty() {
        return Err(Failure::Input(format!("{}: no model records", args.assets.display())));
    }
    Ok(snapshot)
}

/// Grid start: the earlier of the window start and the first release.
fn grid_start(snapshot: &Snapshot, window: Window) -> YearMonth {
    snapshot
        .records()
        .map(|r| r.created)
        .min()
        .map_or(window.start, |t| t.min(window.start))
}

fn year_fraction(t: YearMonth) -> f64 {
    t.year() as f64 + (t.month() - 1) as f64 / 12.0
}

struct GrowthData {
    series: CumulativeSeries,
    points: [Vec<GrowthPoint>; 3],
    fits: Vec<(u8, Option<growth::ExpFit>)>,
}

fn growth_data(snapshot: &Snapshot, window: Window) -> Outcome<GrowthData> {
    let series = ecosystem::cumulative_series(snapshot, grid_start(snapshot, window), window.end);
    let points = [
        growth::n_series(&series, 1)?,
        growth::n_series(&series, 2)?,
        growth::n_series(&series, 3)?,
    ];
    let fits = (1..=3u8)
        .map(|k| {
            Ok((
                k,
                optional_fit(growth::fit_exponential(&points[k as usize - 1], window))?,
            ))
        })
        .collect::<Outcome<Vec<_>>>()?;
    Ok(GrowthData { series, points, fits })
}

/// Too few usable points leaves the fit absent rather than failing the run.
fn optional_fit(fit: attrib_core::Result<growth::ExpFit>) -> Outcome<Option<growth::ExpFit>> {
    match fit {
        Ok(f) => Ok(Some(f)),
        Err(e) if e.is_validation() => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn metric_name(k: u8) -> &'static str {
    match k {
        1 => "N_single",
        2 => "N_k<=2",
        _ => "N_k<=3",
    }
}

fn series_csv(prov: &Provenance, data: &GrowthData) -> Outcome<String> {
    let rows: Vec<Vec<String>> = (0..data.series.len())
        .map(|i| {
            vec![
                data.series.grid[i].to_string(),
                data.series.c[i].to_string(),
                data.series.o[i].to_string(),
                data.series.d[i].to_string(),
                data.points[0][i].n.to_string(),
                data.points[1][i].n.to_string(),
                data.points[2][i].n.to_string(),
            ]
        })
        .collect();
    prov.csv_document(&["t", "C", "O", "D", "N_k1", "N_k2", "N_k3"], &rows)
}

fn fit_rows(fits: &[(u8, Option<growth::ExpFit>)]) -> Vec<FitRow> {
    fits.iter()
        .filter_map(|(k, f)| f.as_ref().map(|f| FitRow::new(metric_name(*k), f)))
        .collect()
}

fn fits_csv(prov: &Provenance, rows: &[FitRow]) -> Outcome<String> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.metric.clone(),
                format!("{:.4}", r.b),
                format!("{:.4}", r.r2),
                r.tau.map(|t| format!("{t:.4}")).unwrap_or_default(),
                r.points_used.to_string(),
                r.zero_points_dropped.to_string(),
            ]
        })
        .collect();
    prov.csv_document(
        &["metric", "b", "r2", "tau", "points_used", "zero_points_dropped"],
        &body,
    )
}

fn in_window(points: &[GrowthPoint], window: Window) -> impl Iterator<Item = &GrowthPoint> {
    points.iter().filter(move |p| window.contains(p.t))
}

fn fitted_line(fit: &growth::ExpFit, window: Window, points: &[GrowthPoint]) -> Vec<(f64, f64)> {
    let Some(origin) = in_window(points, window).next().map(|p| p.t) else {
        return Vec::new();
    };
    in_window(points, window)
        .map(|p| (year_fraction(p.t), (fit.ln_a + fit.b * p.t.years_since(origin)).exp()))
        .collect()
}

fn growth_chart(data: &GrowthData, ks: &[u8], window: Window) -> LineChart {
    let mut series = Vec::new();
    for &k in ks {
        let points = &data.points[k as usize - 1];
        series.push(Series::solid(
            metric_name(k),
            in_window(points, window)
                .map(|p| (year_fraction(p.t), p.n as f64))
                .collect(),
        ));
        if let Some((_, Some(fit))) = data.fits.iter().find(|(fk, _)| *fk == k) {
            series.push(Series::dashed(
                format!("fit b={:.2}/yr", fit.b),
                fitted_line(fit, window, points),
            ));
        }
    }
    LineChart {
        title: "Hypothesis-space lower bound".into(),
        x_label: "year".into(),
        y_label: "candidate models".into(),
        log_y: true,
        series,
    }
}

fn describe_fit(row: &FitRow) -> String {
    format!(
        "{}: b={:.3}/yr tau={} R2={:.3} ({} points, {} zero dropped)",
        row.metric,
        row.b,
        row.tau.map(|t| format!("{t:.3} yr")).unwrap_or_else(|| "n/a".into()),
        row.r2,
        row.points_used,
        row.zero_points_dropped
    )
}

#[derive(Serialize)]
struct FitsDocument<'a> {
    window: String,
    fits: &'a [FitRow],
}

pub fn growth(args: &GrowthArgs) -> Outcome<()> {
    let mut prov = Provenance::new("growth", args);
    let snapshot = load_snapshot(&mut prov, &args.snapshot)?;
    let window = args.snapshot.window;
    if let Some(path) = &args.save_snapshot {
        write_atomic(path, &(snapshot.to_json()? + "\n"))?;
    }
    let data = growth_data(&snapshot, window)?;
    let rows = fit_rows(&data.fits);
    emit(args.out.as_deref(), &series_csv(&prov, &data)?)?;
    if let Some(path) = &args.fits {
        let doc = FitsDocument {
            window: window.to_string(),
            fits: &rows,
        };
        write_atomic(path, &prov.json_document(&doc)?)?;
    }
    if let Some(path) = &args.svg {
        write_atomic(path, &growth_chart(&data, &[args.k], window).render(&prov.one_line()))?;
    }
    match rows.iter().find(|r| r.metric == metric_name(args.k)) {
        Some(row) => eprintln!("{}", describe_fit(row)),
        None => eprintln!("{}: too few nonzero points in {window} to fit", metric_name(args.k)),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// compute

struct ScenarioLine {
    name: String,
    scenario: ComputeScenario,
    result: cost::ScenarioResult,
}

fn scenario_rows(lines: &[ScenarioLine]) -> Vec<Vec<String>> {
    lines
        .iter()
        .map(|l| {
            vec![
                l.name.clone(),
                sci(l.scenario.params_total),
                sci(l.scenario.tokens),
                sci(l.result.total_flops),
                sci(l.result.wall_seconds),
                l.result.wall_human.clone(),
                sci(l.result.data_bytes),
                sci(l.result.stream_seconds),
            ]
        })
        .collect()
}

const SCENARIO_HEADER: [&str; 8] = [
    "scenario",
    "params_total",
    "tokens",
    "total_flops",
    "wall_seconds",
    "wall_human",
    "data_bytes",
    "stream_seconds",
];

fn human_bytes(bytes: f64) -> String {
    let units = ["B", "kB", "MB", "GB", "TB", "PB", "EB"];
    let mut value = bytes;
    let mut unit = 0;
    while value >= 1000.0 && unit + 1 < units.len() {
        value /= 1000.0;
        unit += 1;
    }
    format!("{value:.2} {}", units[unit])
}

fn text_report(prov: &Provenance, lines: &[ScenarioLine]) -> String {
    let mut out = prov.comment_lines();
    for l in lines {
        let s = &l.scenario;
        let r = &l.result;
        out.push_str(&format!("\n{}\n", l.name));
        let rows = [
            ("Total parameters", sci(s.params_total)),
            ("Tokens", sci(s.tokens)),
            ("Total FLOPs", sci(r.total_flops)),
            (
                "Wall time on reference machine",
                format!("{} s ({})", sci(r.wall_seconds), r.wall_human),
            ),
            ("Data volume", human_bytes(r.data_bytes)),
            (
                "Streaming time",
                format!(
                    "{} s ({})",
                    sci(r.stream_seconds),
                    cost::human_duration(r.stream_seconds)
                ),
            ),
        ];
        for (label, value) in rows {
            out.push_str(&format!("  {label:<32}{value}\n"));
        }
    }
    let s = cost::national_streaming();
    out.push_str(&format!(
        "\nNational prompt volume streams in {} per day ({}) and {} per year ({}).\n",
        cost::human_duration(s.daily_seconds),
        human_bytes(s.daily_bytes),
        cost::human_duration(s.annual_seconds),
        human_bytes(s.annual_bytes),
    ));
    out
}

fn preset_of(choice: PresetChoice) -> Preset {
    match choice {
        PresetChoice::SingleItem => Preset::SingleItem,
        PresetChoice::DailySweep => Preset::DailySweep,
        PresetChoice::NationalAnnual => Preset::NationalAnnual,
    }
}

pub fn compute(args: &ComputeArgs) -> Outcome<()> {
    let prov = Provenance::new("compute", args);
    let with_machine = |params_total: f64, tokens: f64| ComputeScenario {
        params_total,
        tokens,
        flops_per_param_token: args.flops_per_param_token,
        machine_flops_per_sec: args.machine_flops,
        bytes_per_token: args.bytes_per_token,
        io_bytes_per_sec: args.io_rate,
    };
    let named: Vec<(String, ComputeScenario)> = match args.tokens {
        Some(tokens) => vec![("custom".into(), with_machine(args.params, tokens))],
        None => {
            let presets: Vec<Preset> = if args.preset.is_empty() {
                Preset::ALL.to_vec()
            } else {
                args.preset.iter().map(|&p| preset_of(p)).collect()
            };
            presets
                .into_iter()
                .map(|p| (p.name().to_string(), with_machine(args.params, p.tokens())))
                .collect()
        }
    };
    let lines = named
        .into_iter()
        .map(|(name, scenario)| {
            Ok(ScenarioLine {
                result: cost::evaluate(&scenario)?,
                name,
                scenario,
            })
        })
        .collect::<Outcome<Vec<_>>>()?;
    if let Some(path) = &args.out {
        write_atomic(path, &prov.csv_document(&SCENARIO_HEADER, &scenario_rows(&lines))?)?;
    }
    let report = text_report(&prov, &lines);
    match (&args.report, &args.out) {
        (Some(path), _) => write_atomic(path, &report),
        (None, Some(_)) => Ok(()),
        (None, None) => emit(None, &report),
    }
}

// ---------------------------------------------------------------------------
// report-all

fn slice_chart(title: &str, slices: &BTreeMap<String, Vec<GrowthPoint>>, window: Window) -> LineChart {
    LineChart {
        title: title.into(),
        x_label: "year".into(),
        y_label: "N_single".into(),
        log_y: true,
        series: slices
            .iter()
            .map(|(label, pts)| {
                Series::solid(
                    label.clone(),
                    in_window(pts, window)
                        .map(|p| (year_fraction(p.t), p.n as f64))
                        .collect(),
                )
            })
            .collect(),
    }
}

fn slice_outputs(
    prov: &Provenance,
    snapshot: &Snapshot,
    dim: SliceDimension,
    window: Window,
    fits: &mut Vec<FitRow>,
) -> Outcome<(String, BTreeMap<String, Vec<GrowthPoint>>)> {
    let start = grid_start(snapshot, window);
    let slices = growth::slice_series(snapshot, dim, Window::new(start, window.end)?, 1)?;
    let prefix = match dim {
        SliceDimension::Modality => "modality",
        SliceDimension::Region => "region",
    };
    let mut rows = Vec::new();
    for (label, pts) in &slices {
        if let Some(fit) = optional_fit(growth::fit_exponential(pts, window))? {
            fits.push(FitRow::new(format!("N_single[{prefix}={label}]"), &fit));
        }
        for p in pts {
            rows.push(vec![
                p.t.to_string(),
                label.clone(),
                p.c.to_string(),
                p.o.to_string(),
                p.d.to_string(),
                p.n.to_string(),
            ]);
        }
    }
    let csv = prov.csv_document(&["t", prefix, "C", "O", "D", "N_single"], &rows)?;
    Ok((csv, slices))
}

pub fn report_all(args: &ReportArgs) -> Outcome<()> {
    let mut prov = Provenance::new("report-all", args);
    let snapshot = ecosystem::impute_params(&load_snapshot(&mut prov, &args.snapshot)?)?;
    let window = args.snapshot.window;
    let dir = &args.out_dir;
    let comment = prov.one_line();
    let write = |name: &str, contents: &str| write_atomic(&dir.join(name), contents);

    let data = growth_data(&snapshot, window)?;
    let mut fits = fit_rows(&data.fits);
    write("growth_single.csv", &series_csv(&prov, &data)?)?;
    write("growth_single.svg", &growth_chart(&data, &[1], window).render(&comment))?;
    write("growth_multi_dataset.csv", &series_csv(&prov, &data)?)?;
    write(
        "growth_multi_dataset.svg",
        &growth_chart(&data, &[2, 3], window).render(&comment),
    )?;

    let (modality_csv, modality) = slice_outputs(&prov, &snapshot, SliceDimension::Modality, window, &mut fits)?;
    write("slices_modality.csv", &modality_csv)?;
    write(
        "slices_modality.svg",
        &slice_chart("N_single by modality", &modality, window).render(&comment),
    )?;
    let (region_csv, region) = slice_outputs(&prov, &snapshot, SliceDimension::Region, window, &mut fits)?;
    write("slices_region.csv", &region_csv)?;
    write(
        "slices_region.svg",
        &slice_chart("N_single by region", &region, window).render(&comment),
    )?;

    let in_range: Vec<usize> = (0..data.series.len())
        .filter(|&i| window.contains(data.series.grid[i]))
        .collect();
    let param_rows: Vec<Vec<String>> = in_range
        .iter()
        .map(|&i| vec![data.series.grid[i].to_string(), sci(data.series.params_total[i])])
        .collect();
    write(
        "cumulative_parameters.csv",
        &prov.csv_document(&["t", "params_total"], &param_rows)?,
    )?;
    let params_chart = LineChart {
        title: "Cumulative model parameters".into(),
        x_label: "year".into(),
        y_label: "parameters".into(),
        log_y: true,
        series: vec![Series::solid(
            "params_total",
            in_range
                .iter()
                .map(|&i| (year_fraction(data.series.grid[i]), data.series.params_total[i]))
                .collect(),
        )],
    };
    write("cumulative_parameters.svg", &params_chart.render(&comment))?;

    let by_year: Vec<(i32, f64)> = cost::params_by_year(&data.series)
        .into_iter()
        .filter(|(y, _)| (window.start.year()..=window.end.year()).contains(y))
        .collect();
    let sweep = cost::sweep_grid(&by_year, &cost::SWEEP_TOKEN_LENGTHS)?;
    let sweep_rows: Vec<Vec<String>> = sweep
        .iter()
        .map(|r| {
            vec![
                r.year.to_string(),
                r.series.clone(),
                sci(r.params_total),
                sci(r.tokens),
                sci(r.wall_seconds),
                format!("{:.4}", r.log10_wall_seconds),
            ]
        })
        .collect();
    write(
        "compute_sweep.csv",
        &prov.csv_document(
            &[
                "year",
                "series",
                "params_total",
                "tokens",
                "wall_seconds",
                "log10_wall_seconds",
            ],
            &sweep_rows,
        )?,
    )?;
    let years: Vec<i32> = by_year.iter().filter(|(_, p)| *p > 0.0).map(|(y, _)| *y).collect();
    let token_labels: Vec<String> = cost::SWEEP_TOKEN_LENGTHS
        .iter()
        .map(|t| format!("{t:.0e} tokens"))
        .collect();
    let heat = Heatmap {
        title: "log10 wall-clock seconds, one sequence against all models".into(),
        row_labels: token_labels.clone(),
        col_labels: years.iter().map(|y| y.to_string()).collect(),
        values: token_labels
            .iter()
            .map(|label| {
                sweep
                    .iter()
                    .filter(|r| &r.series == label)
                    .map(|r| r.log10_wall_seconds)
                    .collect()
            })
            .collect(),
        value_label: "log10 s".into(),
    };
    write("compute_heatmap.svg", &heat.render(&comment))?;
    let daily = LineChart {
        title: "Daily sweep wall-clock hours".into(),
        x_label: "year".into(),
        y_label: "hours".into(),
        log_y: true,
        series: vec![Series::solid(
            "daily-sweep",
            sweep
                .iter()
                .filter(|r| r.series == "daily-sweep")
                .map(|r| (r.year as f64, r.wall_seconds / cost::SECONDS_PER_HOUR))
                .collect(),
        )],
    };
    write("daily_sweep_hours.svg", &daily.render(&comment))?;

    let params_end = cost::params_at(&data.series, window.end.year()).unwrap_or(cost::PARAMS_2025);
    let lines = [
        ("snapshot-national-annual", cost::national_preset(params_end)),
        ("paper-national-annual", cost::national_preset(cost::PARAMS_2025)),
    ]
    .into_iter()
    .map(|(name, scenario)| {
        Ok(ScenarioLine {
            name: name.into(),
            result: cost::evaluate(&scenario)?,
            scenario,
        })
    })
    .collect::<Outcome<Vec<_>>>()?;
    write(
        "compute_budget.csv",
        &prov.csv_document(&SCENARIO_HEADER, &scenario_rows(&lines))?,
    )?;
    write("compute_budget.txt", &text_report(&prov, &lines))?;
    write("fits.csv", &fits_csv(&prov, &fits)?)?;
    for row in &fits {
        eprintln!("{}", describe_fit(row));
    }
    Ok(())
}
