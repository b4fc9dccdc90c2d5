use std::path::Path;

use lv_resilience::integrator::integrate;
use lv_resilience::io::CsvWriter;
use lv_resilience::limits::{limit_study, LimitDirection};
use lv_resilience::model::{classify_regime, equilibria, saddle_spectrum, RegimeClass};
use lv_resilience::resilience::{latitude, ResilienceReport};
use lv_resilience::sensitivity::{self, separatrix_sensitivity};
use lv_resilience::separatrix::{compute_separatrix, integral_residual, model_separatrix};
use lv_resilience::{BasinLabel, Direction, IntegrationConfig, NondimParams, Param, SeparatrixBuildConfig, State};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{parse_grid, parse_list, parse_points, Command, CurveArgs, LimitArg};
use crate::error::CliError;
use crate::output::{destination, emit, json_bytes};

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze { params, out } => {
            let q = params.resolve()?;
            write(&json_bytes(&analyze(&q)), out.out.as_deref(), "analyze.json")
        }
        Command::Separatrix { params, curve, integration, with_model, with_residual, out } => {
            let q = params.resolve()?;
            let bytes = separatrix(&q, &curve, &integration.config()?, with_model, with_residual)?;
            write(&bytes, out.out.as_deref(), "separatrix.csv")
        }
        Command::Resilience { params, curve, integration, mc_n, seed, x0, grid, grid_out, out } => {
            let q = params.resolve()?;
            let x0 = parse_list("x0", &x0)?;
            if grid == Some(0) {
                return Err(CliError::Usage("--grid must be positive".into()));
            }
            let icfg = integration.config()?;
            let c = compute_separatrix(&q, &curve.config(), &icfg)?;
            let report = ResilienceReport::build(&c, &x0, mc_n, seed, grid, &icfg)?;
            if let Some(g) = &report.basin_grid {
                let csv = g.write_csv(Vec::new()).expect("writing to memory");
                let dest = destination(grid_out.as_deref(), "basin_grid.csv")
                    .unwrap_or_else(|| "basin_grid.csv".into());
                emit(&csv, Some(&dest))?;
            }
            write(&json_bytes(&report.to_json()), out.out.as_deref(), "resilience.json")
        }
        Command::Sensitivity { params, curve, integration, xs, out } => {
            let q = params.resolve()?;
            let xs = parse_list("xs", &xs)?;
            let c = compute_separatrix(&q, &curve.config(), &integration.config()?)?;
            let sols = [Param::Alpha, Param::Beta, Param::Delta].map(|p| separatrix_sensitivity(&c, p, &xs));
            let [a, b, d] = sols;
            let csv = sensitivity::write_csv(Vec::new(), &[a?, b?, d?]).expect("writing to memory");
            write(&csv, out.out.as_deref(), "sensitivity.csv")
        }
        Command::Sweep { alpha, beta, delta, x, curve, integration, out } => {
            let axes = [parse_grid("alpha", &alpha)?, parse_grid("beta", &beta)?, parse_grid("delta", &delta)?];
            let xs = parse_list("x", &x)?;
            let bytes = sweep(&axes, &xs, &curve, &integration.config()?)?;
            write(&bytes, out.out.as_deref(), "sweep.csv")
        }
        Command::Limits { alpha, beta, direction, ladder, window, curve, integration, out } => {
            let direction = match direction {
                LimitArg::Zero => LimitDirection::DeltaToZero,
                LimitArg::Infinity => LimitDirection::DeltaToInfinity,
            };
            let ladder = match ladder {
                Some(text) => parse_list("ladder", &text)?,
                None => direction.default_ladder(),
            };
            if ladder.iter().any(|&d| d <= 0.0) {
                return Err(CliError::Usage("--ladder: values must be positive".into()));
            }
            let window = match parse_list("window", &window)?[..] {
                [lo, hi] => (lo, hi),
                _ => return Err(CliError::Usage("--window: expected lo,hi".into())),
            };
            let q = NondimParams::new(alpha, beta, ladder[0])?;
            let study = limit_study(&q, direction, &ladder, window, &curve.config(), &integration.config()?)?;
            write(&study.write_csv(Vec::new()).expect("writing to memory"), out.out.as_deref(), "limits.csv")
        }
        Command::PhasePortrait { params, integration, ic, grid, out } => {
            let q = params.resolve()?;
            let ics = match ic {
                Some(text) => parse_points(&text)?,
                None if grid > 0 => {
                    let h = 1.0 / grid as f64;
                    (0..grid * grid)
                        .map(|k| ((k % grid) as f64 * h + 0.5 * h, (k / grid) as f64 * h + 0.5 * h))
                        .collect()
                }
                None => return Err(CliError::Usage("--grid must be positive".into())),
            };
            let bytes = phase_portrait(&q, &ics, &integration.config()?);
            write(&bytes, out.out.as_deref(), "phase_portrait.csv")
        }
    }
}

fn write(bytes: &[u8], out: Option<&Path>, default_name: &str) -> Result<(), CliError> {
    emit(bytes, destination(out, default_name).as_deref())
}

fn analyze(q: &NondimParams) -> Value {
    let eq = equilibria(q);
    let regime = match classify_regime(q) {
        RegimeClass::StrongCompetition => "StrongCompetition",
        RegimeClass::Other(_) => "Other",
    };
    let points: Vec<Value> = eq
        .iter()
        .map(|e| json!({ "kind": e.kind.to_string(), "x": e.state.x, "y": e.state.y, "stability": e.stability.label() }))
        .collect();
    let spectrum = saddle_spectrum(q).ok().map(|s| {
        json!({
            "A": s.a,
            "B": s.b,
            "lambda1": s.lambda1,
            "lambda2": s.lambda2,
            "m": s.m,
            "m_u": s.m_u,
            "discriminant": s.discriminant,
            "kappa": s.kappa,
            "eta": s.eta,
        })
    });
    json!({
        "params": { "alpha": q.alpha(), "beta": q.beta(), "delta": q.delta() },
        "regime": regime,
        "warning": eq.warning.map(|w| w.to_string()),
        "equilibria": points,
        "spectrum": spectrum,
    })
}

fn separatrix(
    q: &NondimParams,
    curve: &CurveArgs,
    icfg: &IntegrationConfig,
    with_model: bool,
    with_residual: bool,
) -> Result<Vec<u8>, CliError> {
    let c = compute_separatrix(q, &curve.config(), icfg)?;
    let mut header = vec!["x", "y"];
    if with_model {
        header.push("s_star");
    }
    if with_residual {
        header.push("residual");
    }
    let mut w = CsvWriter::new(Vec::new(), &header).expect("writing to memory");
    for (x, y) in c.knots() {
        let mut row = vec![x, y];
        if with_model {
            row.push(model_separatrix(q, x));
        }
        if with_residual {
            row.push(if x > 0.0 { integral_residual(&c, x)? } else { 0.0 });
        }
        w.numbers(&row).expect("writing to memory");
    }
    Ok(w.finish().expect("writing to memory"))
}

fn sweep(axes: &[Vec<f64>; 3], xs: &[f64], curve: &CurveArgs, icfg: &IntegrationConfig) -> Result<Vec<u8>, CliError> {
    if axes.iter().filter(|a| a.len() > 1).count() > 2 {
        return Err(CliError::Usage("sweep: at most two parameters may vary".into()));
    }
    let mut points = Vec::new();
    for &al in &axes[0] {
        for &be in &axes[1] {
            for &de in &axes[2] {
                points.push(NondimParams::new(al, be, de)?);
            }
        }
    }
    for q in &points {
        q.require_strong()?;
    }
    let cfg: SeparatrixBuildConfig = curve.config();
    let rows = points
        .par_iter()
        .map(|q| sweep_point(q, xs, &cfg, icfg))
        .collect::<Result<Vec<_>, _>>()?;

    let header = ["alpha", "beta", "delta", "x", "s", "ds_dalpha", "ds_dbeta", "ds_ddelta", "latitude"];
    let mut w = CsvWriter::new(Vec::new(), &header).expect("writing to memory");
    for row in rows.iter().flatten() {
        w.numbers(row).expect("writing to memory");
    }
    Ok(w.finish().expect("writing to memory"))
}

fn sweep_point(
    q: &NondimParams,
    xs: &[f64],
    cfg: &SeparatrixBuildConfig,
    icfg: &IntegrationConfig,
) -> lv_resilience::Result<Vec<[f64; 9]>> {
    let c = compute_separatrix(q, cfg, icfg)?;
    let lat = latitude(&c)?;
    let da = separatrix_sensitivity(&c, Param::Alpha, xs)?;
    let db = separatrix_sensitivity(&c, Param::Beta, xs)?;
    let dd = separatrix_sensitivity(&c, Param::Delta, xs)?;
    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            Ok([
                q.alpha(),
                q.beta(),
                q.delta(),
                x,
                c.eval(x)?,
                da.samples[k].1,
                db.samples[k].1,
                dd.samples[k].1,
                lat,
            ])
        })
        .collect()
}

fn phase_portrait(q: &NondimParams, ics: &[(f64, f64)], icfg: &IntegrationConfig) -> Vec<u8> {
    let runs: Vec<_> = ics
        .par_iter()
        .map(|&(x, y)| integrate(State::new(x, y), q, Direction::Forward, icfg))
        .collect();
    let mut w = CsvWriter::new(Vec::new(), &["traj_id", "t", "x", "y", "label"]).expect("writing to memory");
    for (id, traj) in runs.iter().enumerate() {
        let label = BasinLabel::from_stop(traj.stop_reason).as_str();
        for &(t, s) in &traj.samples {
            let row = [
                id.to_string(),
                lv_resilience::io::fmt_g17(t),
                lv_resilience::io::fmt_g17(s.x),
                lv_resilience::io::fmt_g17(s.y),
                label.to_string(),
            ];
            w.fields(&row).expect("writing to memory");
        }
    }
    w.finish().expect("writing to memory")
}
