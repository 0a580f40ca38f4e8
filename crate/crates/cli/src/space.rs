use serde_json::json;

use specwass::io::{load_profile, load_space, read_space_file, save_space};
use specwass::{build_grid_circle, build_grid_line, validate_metric, Error, TwoSheetSpace};

use crate::report::{print_json, CliError, CliResult};
use crate::SpaceCmd;

pub fn run(cmd: SpaceCmd, csv_out: bool) -> CliResult<()> {
    match cmd {
        SpaceCmd::GenLine { n, a, b, output } => {
            let space = build_grid_line(n, a, b)?;
            save_space(&space, &output)?;
            summary(csv_out, &[("points", json!(space.len())), ("output", json!(output))])
        }
        SpaceCmd::GenCircle { n, output } => {
            let space = build_grid_circle(n)?;
            save_space(&space, &output)?;
            summary(csv_out, &[("points", json!(space.len())), ("output", json!(output))])
        }
        SpaceCmd::GenTwosheet { base, norm_di, fiber, higgs, output } => {
            let base = load_space(&base)?;
            let profile = higgs.map(|p| load_profile(p, &base)).transpose()?;
            let ts = TwoSheetSpace::new(base, norm_di, fiber, profile)?;
            save_space(&ts.to_metric_space(), &output)?;
            let jump = ts.distance(ts.node(0, 0), ts.node(0, ts.top_level()));
            summary(csv_out, &[("points", json!(ts.len())), ("jump_distance", json!(jump)), ("output", json!(output))])
        }
        SpaceCmd::Validate { file } => validate(&file, csv_out),
    }
}

fn validate(file: &std::path::Path, csv_out: bool) -> CliResult<()> {
    let parsed = read_space_file(file)?;
    let report = match parsed.matrix.as_ref() {
        Some(m) => validate_metric(m)?,
        None => match parsed.clone().into_space() {
            Ok(space) => space.validate(),
            Err(Error::InvalidMetric(r)) => r,
            Err(e) => return Err(e.into()),
        },
    };
    let valid = report.is_empty();
    if csv_out {
        let mut w = csv::Writer::from_writer(std::io::stdout());
        w.write_record(["valid", "violation"])?;
        if valid {
            w.write_record(["true", ""])?;
        }
        for v in &report.violations {
            w.write_record(["false", &v.to_string()])?;
        }
        w.flush()?;
    } else {
        print_json(&json!({ "valid": valid, "points": parsed.points.len(), "report": report }))?;
    }
    if valid {
        // the matrix passed; the point list must still match it
        parsed.into_space()?;
        Ok(())
    } else {
        Err(CliError::Failure(format!("{} metric violations in {}", report.violations.len(), file.display())))
    }
}

fn summary(csv_out: bool, fields: &[(&str, serde_json::Value)]) -> CliResult<()> {
    if csv_out {
        let mut w = csv::Writer::from_writer(std::io::stdout());
        w.write_record(fields.iter().map(|(k, _)| *k))?;
        w.write_record(fields.iter().map(|(_, v)| match v {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        }))?;
        w.flush()?;
        Ok(())
    } else {
        print_json(&fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<serde_json::Map<_, _>>())
    }
}
