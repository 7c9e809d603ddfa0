use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use gammaboost::boost::{train as boost_train, RoundRecord, StopPolicy, WeightInit};
use gammaboost::cloud::{gen_cloud, CloudSpec};
use gammaboost::csv_data::{load_csv, ColumnRef, CsvSchema, FeatureColumns};
use gammaboost::dataset::Dataset;
use gammaboost::harness::{curve_run, loocv as run_loocv, ExperimentConfig, GammaSpec};
use gammaboost::identities::{verify_identities, IDENTITY_TOLERANCE};
use gammaboost::manifest::{dataset_to_csv_string, DatasetManifest};
use gammaboost::report::{
    emit_curves_csv, emit_figure_svg, emit_loocv_reports, Panel, RunManifest,
};

use crate::{
    resolve_out, resolve_rounds, CliError, CsvArgs, CurvesArgs, FileConfig, LoocvArgs, SynthArgs,
    TrainArgs,
};

const DEFAULT_GAMMAS: [&str; 4] = ["1/2", "3/5", "2/3", "7/8"];

fn column_ref(text: &str) -> ColumnRef {
    match text.trim().parse::<usize>() {
        Ok(i) => ColumnRef::Index(i),
        Err(_) => ColumnRef::Name(text.trim().to_string()),
    }
}

fn schema_from_args(args: &CsvArgs) -> Result<CsvSchema, CliError> {
    if !args.delimiter.is_ascii() {
        return Err(CliError::Usage(format!(
            "delimiter must be a single ASCII character, got {:?}",
            args.delimiter
        )));
    }
    let feature_columns = match &args.features {
        None => FeatureColumns::AllRemainingNumeric,
        Some(list) => FeatureColumns::Explicit(
            list.split(',')
                .filter(|s| !s.trim().is_empty())
                .map(column_ref)
                .collect(),
        ),
    };
    Ok(CsvSchema {
        label_column: column_ref(&args.label_col),
        positive_label: args.positive_label.clone(),
        negative_label: args.negative_label.clone(),
        delimiter: args.delimiter as u8,
        has_header: !args.no_header,
        feature_columns,
    })
}

fn load_dataset(path: &Path, csv: &CsvArgs) -> Result<(Dataset, CsvSchema), CliError> {
    let schema = schema_from_args(csv)?;
    let loaded = load_csv(path, &schema)?;
    Ok((loaded.dataset, schema))
}

fn parse_gammas(flag: &Option<String>, config: &FileConfig) -> Result<Vec<GammaSpec>, CliError> {
    let items: Vec<String> = match (flag, &config.gammas) {
        (Some(list), _) => list
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
        (None, Some(list)) => list.clone(),
        (None, None) => DEFAULT_GAMMAS.iter().map(|s| s.to_string()).collect(),
    };
    if items.is_empty() {
        return Err(CliError::Usage("no gamma values given".to_string()));
    }
    items
        .iter()
        .map(|s| GammaSpec::parse(s).map_err(CliError::from))
        .collect()
}

pub fn synth(args: SynthArgs, config: &FileConfig) -> Result<(), CliError> {
    let spec = CloudSpec {
        n_pos: args.pos,
        n_neg: args.neg,
        inner_radius: args.inner_radius,
        outer_radius: args.outer_radius,
        gap: args.gap,
        overlap_fraction: args.overlap,
        seed: args.seed,
    };
    let dataset = gen_cloud(&spec)?;
    let out_dir = resolve_out(args.out, config);
    std::fs::create_dir_all(&out_dir)?;
    let csv_path = out_dir.join("dataset.csv");
    std::fs::write(&csv_path, dataset_to_csv_string(&dataset))?;
    let manifest = DatasetManifest::for_cloud(&spec, &dataset);
    let manifest_path = out_dir.join("manifest.json");
    std::fs::write(&manifest_path, manifest.to_json()?)?;
    println!(
        "wrote {} and {}",
        csv_path.display(),
        manifest_path.display()
    );
    println!(
        "m={} n={} d={} separable={} checksum={}",
        manifest.m,
        manifest.n,
        manifest.d,
        spec.is_separable(),
        manifest.checksum
    );
    Ok(())
}

const ROUND_LOG_HEADER: &str = "t,feature,threshold,polarity,alpha,eps,eps_pos,eps_neg,r,z,z_pos,z_neg,p_pos_after,p_neg_after,bound,bound_pos,bound_neg";

fn round_log_csv(records: &[RoundRecord]) -> String {
    let mut out = String::from(ROUND_LOG_HEADER);
    out.push('\n');
    for (t, r) in records.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t + 1,
            r.stump.feature,
            r.stump.threshold,
            r.stump.polarity,
            r.alpha,
            r.eps,
            r.eps_pos,
            r.eps_neg,
            r.r,
            r.z,
            r.z_pos,
            r.z_neg,
            r.p_pos_after,
            r.p_neg_after,
            r.bound,
            r.bound_pos,
            r.bound_neg
        );
    }
    out
}

/// Sibling path with an extra suffix before a fixed extension:
/// `model.json` -> `model.rounds.csv`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "model".to_string());
    path.with_file_name(format!("{stem}.{suffix}"))
}

pub fn train(args: TrainArgs, config: &FileConfig) -> Result<(), CliError> {
    let gamma = GammaSpec::parse(&args.gamma)?;
    let rounds = resolve_rounds(args.rounds, config);
    if rounds == 0 {
        return Err(CliError::Usage("rounds must be at least 1".to_string()));
    }
    let stop = match (args.stop_train_err, args.stop_bound) {
        (Some(e), None) => StopPolicy::TrainErrorAtMost(e),
        (None, Some(b)) => StopPolicy::BoundAtMost(b),
        (None, None) => StopPolicy::FixedRounds,
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let (dataset, _) = load_dataset(&args.data, &args.csv)?;
    let init = WeightInit::uniform(gamma.value, dataset.m(), dataset.num_negatives())?;
    let (classifier, records) = boost_train(&dataset, &init, rounds, stop)?;

    let model_path = match args.out {
        Some(p) => p,
        None => resolve_out(None, config).join("model.json"),
    };
    if let Some(parent) = model_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(&model_path, classifier.to_json()?)?;
    let rounds_path = sibling(&model_path, "rounds.csv");
    std::fs::write(&rounds_path, round_log_csv(&records))?;

    let report = verify_identities(&records, &init)?;
    let identities_path = sibling(&model_path, "identities.json");
    std::fs::write(&identities_path, serde_json::to_string_pretty(&report).map_err(|e| CliError::Data(e.to_string()))?)?;

    println!(
        "trained {} rounds (gamma = {}), final bound {}",
        records.len(),
        gamma.label,
        records.last().map(|r| r.bound).unwrap_or(1.0)
    );
    println!(
        "wrote {}, {}, {}",
        model_path.display(),
        rounds_path.display(),
        identities_path.display()
    );
    if !report.within(IDENTITY_TOLERANCE) {
        let detail: Vec<String> = report
            .residuals()
            .iter()
            .map(|(name, v)| format!("{name}={v:.3e}"))
            .collect();
        return Err(CliError::Identity(format!(
            "identity residuals exceed {IDENTITY_TOLERANCE:.0e}: {}",
            detail.join(", ")
        )));
    }
    Ok(())
}

pub fn loocv(args: LoocvArgs, config: &FileConfig) -> Result<(), CliError> {
    let started = Instant::now();
    let gammas = parse_gammas(&args.gammas, config)?;
    let rounds = resolve_rounds(args.rounds, config);
    let workers = args.workers.or(config.workers).unwrap_or(0);
    let (dataset, schema) = load_dataset(&args.data, &args.csv)?;

    let mut experiment = ExperimentConfig::new(gammas, rounds);
    experiment.workers = workers;
    let results = run_loocv(&dataset, &experiment)?;

    println!("{:<10}{:>10}{:>10}{:>10}{:>10}", "gamma", "FN", "FP", "ClErr", "AsErr");
    for (gamma, report) in &results {
        println!(
            "{:<10}{:>9.2}%{:>9.2}%{:>9.2}%{:>9.2}%",
            gamma.label,
            100.0 * report.fn_rate,
            100.0 * report.fp_rate,
            100.0 * report.cl_err,
            100.0 * report.as_err
        );
    }

    let out_dir = resolve_out(args.out, config);
    let paths = emit_loocv_reports(&results, rounds, dataset.n(), dataset.m(), &out_dir)?;
    let mut manifest = RunManifest::new(
        "loocv",
        serde_json::json!({
            "data": args.data.display().to_string(),
            "schema": schema,
            "gammas": results.iter().map(|(g, _)| g.label.clone()).collect::<Vec<_>>(),
            "rounds": rounds,
            "workers": workers,
        }),
    );
    manifest.wall_time_ms = started.elapsed().as_millis() as u64;
    manifest.write(&out_dir)?;
    println!("wrote {} report files to {}", paths.len(), out_dir.display());
    Ok(())
}

pub fn datasets() {
    println!("Public datasets commonly used with this tool. Download them yourself");
    println!("(this tool performs no network access), then pass the flags shown.\n");
    println!("german credit   https://archive.ics.uci.edu/dataset/144");
    println!("  file german.data-numeric (space separated, 24 features + label 1/2)");
    println!("  flags: --no-header --delimiter ' ' --label-col 24 --positive-label 2\n");
    println!("pima diabetes   https://archive.ics.uci.edu/dataset/34");
    println!("  file pima-indians-diabetes.csv (8 features + outcome 0/1)");
    println!("  flags: --no-header --label-col 8 --positive-label 1\n");
    println!("spambase        https://archive.ics.uci.edu/dataset/94");
    println!("  file spambase.data (57 features + label 1 = spam)");
    println!("  flags: --no-header --label-col 57 --positive-label 1");
}

pub fn curves(args: CurvesArgs, config: &FileConfig) -> Result<(), CliError> {
    let started = Instant::now();
    let gammas = parse_gammas(&args.gammas, config)?;
    let rounds = resolve_rounds(args.rounds, config);
    let (train_set, schema) = load_dataset(&args.train, &args.csv)?;
    let (test_set, _) = load_dataset(&args.test, &args.csv)?;

    let experiment = ExperimentConfig::new(gammas, rounds);
    let series = curve_run(&train_set, &test_set, &experiment)?;

    let out_dir = resolve_out(args.out, config);
    let csv_paths = emit_curves_csv(&series, &out_dir)?;
    let mut svg_paths = Vec::new();
    for panel in [Panel::Bounds, Panel::Train, Panel::Test] {
        let path = out_dir.join(format!("{}.svg", panel.name()));
        emit_figure_svg(&series, panel, &path)?;
        svg_paths.push(path);
    }

    let mut manifest = RunManifest::new(
        "curves",
        serde_json::json!({
            "train": args.train.display().to_string(),
            "test": args.test.display().to_string(),
            "schema": schema,
            "gammas": series.iter().map(|s| s.gamma.label.clone()).collect::<Vec<_>>(),
            "rounds": rounds,
        }),
    );
    for s in &series {
        if s.rows.is_empty() {
            manifest
                .warnings
                .push(format!("series gamma={} has no rows", s.gamma.label));
        }
    }
    manifest.wall_time_ms = started.elapsed().as_millis() as u64;
    manifest.write(&out_dir)?;

    println!(
        "wrote {} curve files and {} figures to {}",
        csv_paths.len(),
        svg_paths.len(),
        out_dir.display()
    );
    Ok(())
}
