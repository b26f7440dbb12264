use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::json;

use hopfrough::bseries::PolyVectorField;
use hopfrough::roughpath::{self, Driver, SampledPath, Stepper};

use crate::Global;

#[derive(Clone, Copy, ValueEnum)]
pub enum DriverArg {
    /// Polynomial components, see `--coeffs`.
    Poly,
    /// `cos t, sin t, cos 2t, …`.
    Trig,
}

#[derive(Args)]
pub struct DemoArgs {
    #[arg(long, value_enum, default_value = "trig")]
    driver: DriverArg,
    /// Polynomial driver coefficients `c0,c1,…` per component, components
    /// separated by `;`. Defaults to `X_t = t` in every component.
    #[arg(long)]
    coeffs: Option<String>,
    /// Vector field: `f_1; f_2; …`, each a comma-separated list of
    /// polynomials in `y0, y1, …`.
    #[arg(long, default_value = "y")]
    field: String,
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    /// Initial value, comma-separated; defaults to 1 in every component.
    #[arg(long)]
    y0: Option<String>,
    /// Write `(s, t, forest, value)` records of the lift over each step.
    #[arg(long)]
    csv: Option<std::path::PathBuf>,
}

fn floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("bad number '{}'", x.trim())))
        .collect()
}

pub fn demo(g: &Global, a: &DemoArgs) -> Result<ExitCode> {
    let field = PolyVectorField::parse(&a.field)?;
    let d = field.drivers();
    let driver = match a.driver {
        DriverArg::Trig => Driver::Trig(d),
        DriverArg::Poly => match &a.coeffs {
            None => Driver::Linear(d),
            Some(c) => Driver::Poly(c.split(';').map(floats).collect::<Result<_>>()?),
        },
    };
    if driver.dim() != d {
        bail!("driver has {} components but the field has {} drivers", driver.dim(), d);
    }
    if a.steps == 0 {
        bail!("need at least one step");
    }
    let y0 = match &a.y0 {
        Some(t) => floats(t)?,
        None => vec![1.0; field.dim()],
    };
    if y0.len() != field.dim() {
        bail!("initial value has {} components, the field {}", y0.len(), field.dim());
    }
    let tol = g.tol.unwrap_or(1e-8);
    let t_end = a.horizon;
    let path = SampledPath::from_driver(driver, t_end, a.steps)?;
    let l = roughpath::lift(path.clone(), a.order, (t_end / 64.0).min(1.0 / 64.0))?;
    let stepper = Stepper::new(&field, a.order);

    let times = path.times().to_vec();
    let mut traj = vec![y0.clone()];
    for w in times.windows(2) {
        let next = stepper.step(traj.last().expect("non-empty"), &l, w[0], w[1]);
        traj.push(next);
    }
    let reference = roughpath::reference_solve(&y0, &path, &field, 0.0, t_end, 200 * a.steps);
    let end = traj.last().expect("non-empty");
    let global_error = end.iter().zip(&reference).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);

    let max_size = g.max_size.unwrap_or(a.order.min(3));
    let chen = roughpath::check_chen(&l, 0.0, t_end / 2.0, t_end, max_size, tol);
    let hs: Vec<f64> = [5.0, 10.0, 20.0, 40.0].iter().map(|k| t_end / k).collect();
    let y_quarter = roughpath::reference_solve(&y0, &path, &field, 0.0, t_end / 4.0, 200 * a.steps);
    let order = roughpath::measure_local_order(&l, &field, &y_quarter, t_end / 4.0, a.order, &hs);

    if let Some(p) = &a.csv {
        let pairs: Vec<(f64, f64)> = times.windows(2).map(|w| (w[0], w[1])).collect();
        let mut w = csv::Writer::from_path(p).with_context(|| format!("cannot write {}", p.display()))?;
        for r in roughpath::lift_records(&l, &pairs, max_size) {
            w.serialize(r)?;
        }
        w.flush()?;
    }

    if g.json {
        let rows: Vec<_> = times.iter().zip(&traj).map(|(t, y)| json!({"t": t, "y": y})).collect();
        out!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "order": a.order,
                "steps": a.steps,
                "trajectory": rows,
                "reference_end": reference,
                "global_error": global_error,
                "chen": chen,
                "local_order": order,
            }))?
        );
    } else {
        out!("order {} B-series steps, {} steps on [0, {}]", a.order, a.steps, t_end);
        for (t, y) in times.iter().zip(&traj) {
            let ys: Vec<String> = y.iter().map(|v| format!("{:.12}", v)).collect();
            out!("  t = {:<8.4} y = {}", t, ys.join(", "));
        }
        out!("reference end: {:?}", reference);
        out!("max error at T: {:.3e}", global_error);
        out!("Chen defect (size <= {}): {:.3e} ({})", max_size, chen.max_error, if chen.passed { "ok" } else { "FAILED" });
        out!("local order slope at T/4: {:.3} (N + 1 = {})", order.slope, a.order + 1);
    }
    Ok(if chen.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
