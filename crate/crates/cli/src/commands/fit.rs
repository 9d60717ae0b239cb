//! `fit`: estimate the extreme value parameters from block maxima by MLE,
//! PWM, or both.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use eva_triage_core::estimation::{fit_mle, fit_pwm, FitResult};
use serde_json::json;

use crate::errors::CliResult;
use crate::input::{read_value_column, FitDocument};
use crate::output::{write_json, RunManifest, SCHEMA_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Mle,
    Pwm,
    Both,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Block maxima (CSV with header `value`)
    pub maxima: PathBuf,
    /// Estimation method
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
    /// Output path for the fit document
    #[arg(long, default_value = "fit.json")]
    pub out: PathBuf,
}

fn surface_warnings(fit: &FitResult) {
    for w in &fit.warnings {
        eprintln!("warning ({}): {w}", fit.method);
    }
}

pub fn run(args: &FitArgs) -> CliResult<()> {
    let maxima = read_value_column(&args.maxima, "value")?;

    let mle = match args.method {
        MethodArg::Mle | MethodArg::Both => Some(fit_mle(&maxima)?),
        MethodArg::Pwm => None,
    };
    let pwm = match args.method {
        MethodArg::Pwm | MethodArg::Both => Some(fit_pwm(&maxima)?),
        MethodArg::Mle => None,
    };
    if let Some(fit) = &mle {
        surface_warnings(fit);
    }
    if let Some(fit) = &pwm {
        surface_warnings(fit);
    }

    let manifest = RunManifest::new(
        "fit",
        &[&args.maxima],
        json!({
            "method": match args.method {
                MethodArg::Mle => "mle",
                MethodArg::Pwm => "pwm",
                MethodArg::Both => "both",
            },
            "n": maxima.len(),
        }),
        None,
    );

    write_json(
        &args.out,
        &FitDocument {
            schema: SCHEMA_VERSION,
            manifest,
            mle,
            pwm,
        },
    )?;
    eprintln!("wrote fit document to {}", args.out.display());
    Ok(())
}
