use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use stylus::config::ClassifierKind;
use stylus::formats;
use stylus::pipeline::{load_config, load_data, run_pipeline_on, Features, Stage, StageError, Workbench};
use stylus::tables::{run_table, TableId};
use stylus_core::bow::InputType;
use stylus_core::embed::EmbedMethod;

/// Stylometric authorship attribution for the Federalist Papers.
#[derive(Debug, Parser)]
#[command(name = "stylus", version)]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, default_value = "stylus.toml")]
    config: PathBuf,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Overrides both the embedding and the classifier seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse the ebook and write corpus.json.
    Ingest,
    /// Write the term-document matrix.
    Bow {
        #[arg(long = "type")]
        input_type: Option<InputType>,
    },
    /// Fit the configured embedding and write its document rows.
    Embed {
        #[arg(long = "type")]
        input_type: Option<InputType>,
        #[arg(long)]
        method: Option<EmbedMethod>,
    },
    /// Binomial word screening, HC/BH/Bonferroni selection and HC distances.
    Screen,
    /// Fit on the labeled papers and score the disputed and joint ones.
    Classify {
        #[arg(long)]
        method: Option<ClassifierKind>,
    },
    /// Negative-binomial word models and per-paper log-odds.
    Mw,
    /// LOOCV, thresholds and densities.
    Eval {
        #[arg(long)]
        method: Option<ClassifierKind>,
    },
    /// One of the result tables: l2_all, l2_bow, thresholds, joint, mw, hc.
    Table { id: String },
    /// ingest, bow, embed, classify and eval in one go.
    Pipeline,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({ "stage": e.stage.as_str(), "error": format!("{:#}", e.source) }));
            ExitCode::FAILURE
        }
    }
}

fn workbench(cli: &Cli) -> Result<Workbench, StageError> {
    let mut config = load_config(&cli.config)?;
    if let Some(seed) = cli.seed {
        config.override_seed(seed);
    }
    if let Some(out) = &cli.out {
        config.output.dir.clone_from(out);
    }
    let data = load_data(&config)?;
    Workbench::new(config, data, cli.jobs)
}

fn features(wb: &Workbench, input_type: Option<InputType>, method: Option<EmbedMethod>) -> Features {
    match (input_type, method) {
        (None, None) => wb.configured_features(),
        (t, m) => Features::Computed(
            t.unwrap_or(wb.config.bow.input_type),
            m.unwrap_or(wb.config.embedding.method),
        ),
    }
}

fn run(cli: Cli) -> Result<(), StageError> {
    if let Command::Table { id } = &cli.command {
        // Reject the id before doing any work.
        let id: TableId = id.parse().map_err(|e| StageError::new(Stage::Table, e))?;
        let mut wb = workbench(&cli)?;
        let table = run_table(&mut wb, id)?;
        let path = wb.out_path(&format!("table_{id}.csv"));
        formats::write_text(&path, &table.to_csv())?;
        print!("{}", table.to_csv());
        return Ok(());
    }
    let mut wb = workbench(&cli)?;
    match cli.command {
        Command::Ingest => {
            formats::write_corpus_json(&wb.out_path("corpus.json"), &wb.corpus)?;
        }
        Command::Bow { input_type } => {
            let t = input_type.unwrap_or(wb.config.bow.input_type);
            let path = wb.out_path(&format!("tdm_{t}.csv"));
            formats::write_tdm_csv(&path, wb.tdm(t)?)?;
        }
        Command::Embed { input_type, method } => {
            let f = features(&wb, input_type, method);
            let e = wb.embedding(&f)?;
            let stem = f.name().replace('+', "_");
            formats::write_embedding_csv(&wb.out_path(&format!("embedding_{stem}.csv")), &e)?;
            if let Features::Computed(t, EmbedMethod::Lda) = f {
                let vocab = wb.tdm(t)?.vocab.clone();
                let (model, bic) = wb.lda_model(t)?.clone();
                formats::write_lda_model_json(&wb.out_path(&format!("lda_model_{t}.json")), &model, &vocab, &bic)?;
            }
        }
        Command::Screen => {
            let (report, table) = wb.screen_report()?;
            formats::write_screen_report(&wb.out_path("screen_report.json"), &report)?;
            formats::write_wordcloud_csv(&wb.out_path("wordcloud.csv"), &table)?;
        }
        Command::Classify { method } => {
            let f = wb.configured_features();
            let kind = method.unwrap_or(wb.config.classifier.method);
            let preds = wb.predict(&f, kind)?;
            let model = wb.model_file(&f, kind)?;
            formats::write_model_json(&wb.out_path("model.json"), &model)?;
            formats::write_predictions_csv(&wb.out_path("predictions.csv"), &preds)?;
        }
        Command::Mw => {
            let (models, reports) = wb.mw()?;
            formats::write_mw_models_csv(&wb.out_path("mw_models.csv"), &models)?;
            let odds = wb.odds_file(&models, &reports);
            formats::write_odds_report_json(&wb.out_path("odds_report.json"), &odds)?;
        }
        Command::Eval { method } => {
            let f = wb.configured_features();
            let kind = method.unwrap_or(wb.config.classifier.method);
            let (report, density) = wb.eval_report(&f, kind)?;
            formats::write_eval_report(&wb.out_path("eval_report.json"), &report)?;
            formats::write_density_csv(&wb.out_path("density.csv"), &density)?;
        }
        Command::Pipeline => {
            let b = run_pipeline_on(&mut wb)?;
            for p in &b.files {
                log::info!("wrote {}", p.display());
            }
        }
        Command::Table { .. } => unreachable!("handled above"),
    }
    Ok(())
}
