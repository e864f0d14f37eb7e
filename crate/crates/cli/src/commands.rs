use serde::Serialize;
use serde_json::{json, Value};
use uop_core::asymptotics::{classify_limit, Regime};
use uop_core::experiments::{
    default_figure1_grids, default_figure2_bases, default_figure2_configs, default_s_grid, figure1_data, figure2_data,
    run_table1, Figure2Config, Table1Config,
};
use uop_core::extremal_dependence::{
    effective_independent_count, extremogram, extremogram_series, independence_baseline, ExtremogramConfig,
    InterpolatedProcess,
};
use uop_core::gpd_inference::{estimate_eta, estimate_pu_gpd, fit_gpd_shared_shape, AuditEstimates};
use uop_core::monte_carlo::{pu_antithetic, pu_direct, pu_plain, pu_sweep, PuSimConfig};
use uop_core::{Error, OddsRatio, Parallelism, RedGreenModel, ReturnDistribution};

use crate::args::{
    EstimateEtaArgs, ExtremogramArgs, Figure1Args, Figure2Args, FitGpdArgs, Method, ModelArgs, PuSimArgs, SweepArgs,
    Table1Args,
};
use crate::error::CliError;
use crate::input::{parse_returns_csv, read_series};
use crate::output::OutDir;

/// What a command hands back to the driver: a summary for stdout and the
/// manifest, plus the resolved parameters.
pub struct Outcome {
    pub parameters: Value,
    pub summary: Value,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn model(args: &ModelArgs) -> Result<RedGreenModel, CliError> {
    let base = args.base();
    base.validate()?;
    Ok(RedGreenModel::new(base, args.eta, args.delta, args.gamma)?)
}

fn nu_field(base: ReturnDistribution) -> Option<f64> {
    base.nu()
}

fn odds_fields(o: OddsRatio) -> (f64, &'static str) {
    (o.value(), o.bound_label())
}

#[derive(Serialize)]
struct AsymptoticRecord {
    dist: String,
    nu: Option<f64>,
    eta: f64,
    delta: f64,
    gamma: f64,
    regime: &'static str,
    pu_limit: f64,
    upsilon_star: f64,
    reason: String,
}

pub fn asymptotic(args: &ModelArgs, out: &mut OutDir) -> Result<Outcome, CliError> {
    let m = model(args)?;
    let c = classify_limit(&m)?;
    let (regime, pu_limit, upsilon_star) = match c.regime {
        Regime::FiniteOdds { pu_limit, upsilon_star } => ("finite_odds", pu_limit, upsilon_star),
        Regime::RedDominates => ("red_dominates", 1.0, f64::INFINITY),
        Regime::Neutral => ("neutral", m.eta, 1.0),
    };
    let rec = AsymptoticRecord {
        dist: m.base.label(),
        nu: nu_field(m.base),
        eta: m.eta,
        delta: m.delta,
        gamma: m.gamma,
        regime,
        pu_limit,
        upsilon_star,
        reason: c.reason,
    };
    out.records("asymptotic", std::slice::from_ref(&rec))?;
    Ok(Outcome { parameters: to_value(args), summary: to_value(&rec) })
}

#[derive(Serialize)]
struct PuRecord {
    dist: String,
    nu: Option<f64>,
    eta: f64,
    delta: f64,
    gamma: f64,
    s: u64,
    m: u64,
    n: u64,
    method: String,
    replicates: u64,
    p_u: f64,
    std_error: f64,
    upsilon: f64,
    upsilon_bound: &'static str,
}

fn pu_record(m: &RedGreenModel, s: u64, e: &uop_core::PuEstimate) -> PuRecord {
    let (upsilon, upsilon_bound) = odds_fields(e.upsilon);
    PuRecord {
        dist: m.base.label(),
        nu: nu_field(m.base),
        eta: m.eta,
        delta: m.delta,
        gamma: m.gamma,
        s,
        m: e.m,
        n: e.n,
        method: to_value(&e.method).as_str().unwrap_or_default().to_owned(),
        replicates: e.replicates,
        p_u: e.p_u,
        std_error: e.std_error,
        upsilon,
        upsilon_bound,
    }
}

pub fn pu_sim(args: &PuSimArgs, seed: u64, par: Parallelism, out: &mut OutDir) -> Result<Outcome, CliError> {
    let m = model(&args.model)?;
    let cfg = PuSimConfig::new(m, args.s, args.r, seed)?.with_parallelism(par);
    let e = match args.method {
        Method::Antithetic => pu_antithetic(&cfg)?,
        Method::Plain => pu_plain(&cfg)?,
        Method::Direct => pu_direct(&cfg, args.r)?,
    };
    let rec = pu_record(&m, args.s, &e);
    out.records("pu_sim", std::slice::from_ref(&rec))?;
    Ok(Outcome { parameters: to_value(args), summary: to_value(&rec) })
}

fn grid_or_default(grid: &[u64]) -> Vec<u64> {
    if grid.is_empty() {
        default_s_grid()
    } else {
        grid.to_vec()
    }
}

pub fn sweep(args: &SweepArgs, seed: u64, par: Parallelism, out: &mut OutDir) -> Result<Outcome, CliError> {
    let m = model(&args.model)?;
    let grid = grid_or_default(&args.s_grid);
    let pts = pu_sweep(&m, &grid, args.r, seed, par)?;
    let recs: Vec<PuRecord> = pts.iter().map(|p| pu_record(&m, p.s, &p.estimate)).collect();
    out.records("sweep", &recs)?;
    let mut params = to_value(args);
    params["S_grid"] = to_value(&grid);
    Ok(Outcome { parameters: params, summary: json!({ "points": recs.len() }) })
}

#[derive(Serialize)]
struct Table1Record {
    base: String,
    delta: f64,
    gamma: f64,
    p_u_true: f64,
    p_u_prime_mean: f64,
    p_u_hat_mean: f64,
    power: f64,
    repeats: u64,
    fit_failures: u64,
    zero_count_redraws: u64,
}

pub fn table1(args: &Table1Args, seed: u64, par: Parallelism, out: &mut OutDir) -> Result<Outcome, CliError> {
    let cfg = Table1Config {
        repeats: args.repeats,
        s: args.s,
        eta: args.eta,
        k: args.k,
        pu_replicates: args.r,
        seed,
        parallelism: par,
    };
    let rows = run_table1(&cfg)?;
    let recs: Vec<Table1Record> = rows
        .iter()
        .map(|r| Table1Record {
            base: r.base.label(),
            delta: r.delta,
            gamma: r.gamma,
            p_u_true: r.p_u_true,
            p_u_prime_mean: r.p_u_prime_mean,
            p_u_hat_mean: r.p_u_hat_mean,
            power: r.power,
            repeats: r.repeats,
            fit_failures: r.fit_failures,
            zero_count_redraws: r.zero_count_redraws,
        })
        .collect();
    out.records("table1", &recs)?;
    let failures: u64 = rows.iter().map(|r| r.fit_failures).sum();
    Ok(Outcome { parameters: to_value(args), summary: json!({ "rows": recs.len(), "fit_failures": failures }) })
}

pub fn figure1(args: &Figure1Args, out: &mut OutDir) -> Result<Outcome, CliError> {
    let (dnu, dgamma) = default_figure1_grids();
    let nu = if args.nu_grid.is_empty() { dnu } else { args.nu_grid.clone() };
    let gamma = if args.gamma_grid.is_empty() { dgamma } else { args.gamma_grid.clone() };
    let pts = figure1_data(&nu, &gamma)?;
    out.records("figure1", &pts)?;
    Ok(Outcome { parameters: json!({ "nu_grid": nu, "gamma_grid": gamma }), summary: json!({ "points": pts.len() }) })
}

#[derive(Serialize)]
struct Figure2Record {
    base: String,
    delta: f64,
    gamma: f64,
    s: u64,
    p_u: f64,
    std_error: f64,
    upsilon: f64,
    upsilon_bound: &'static str,
    asymptote: Option<f64>,
}

pub fn figure2(args: &Figure2Args, seed: u64, par: Parallelism, out: &mut OutDir) -> Result<Outcome, CliError> {
    let grid = grid_or_default(&args.s_grid);
    let bases = default_figure2_bases();
    let configs = default_figure2_configs();
    let cfg = Figure2Config { eta: args.eta, replicates: args.r, seed, parallelism: par };
    let pts = figure2_data(&bases, &configs, &grid, &cfg)?;
    let recs: Vec<Figure2Record> = pts
        .iter()
        .map(|p| {
            let (upsilon, upsilon_bound) = odds_fields(p.upsilon);
            Figure2Record {
                base: p.base.label(),
                delta: p.delta,
                gamma: p.gamma,
                s: p.s,
                p_u: p.p_u,
                std_error: p.std_error,
                upsilon,
                upsilon_bound,
                asymptote: p.asymptote,
            }
        })
        .collect();
    out.records("figure2", &recs)?;
    let mut params = to_value(args);
    params["S_grid"] = to_value(&grid);
    params["bases"] = to_value(&bases.iter().map(|b| b.label()).collect::<Vec<_>>());
    params["delta_gamma"] = to_value(&configs);
    Ok(Outcome { parameters: params, summary: json!({ "points": recs.len() }) })
}

#[derive(Serialize)]
struct FitRecord {
    u: f64,
    k: usize,
    k_red: usize,
    k_green: usize,
    xi_hat: f64,
    tau_r_hat: f64,
    tau_g_hat: f64,
    loglik_full: f64,
    xi_null: f64,
    tau_null: f64,
    loglik_null: f64,
    lr_stat: f64,
    p_value: f64,
    rejects_equal_scales: bool,
    boundary_warning: bool,
    p_u_prime: f64,
    p_u_hat: f64,
    p_u_hat_std_error: f64,
    zero_count_redraws: u64,
    upsilon_assumed: f64,
    eta_hat: f64,
}

pub fn fit_gpd(args: &FitGpdArgs, seed: u64, par: Parallelism, out: &mut OutDir) -> Result<Outcome, CliError> {
    let sample = parse_returns_csv(&args.input, args.k)?;
    let fit = fit_gpd_shared_shape(&sample)?;
    let pu = estimate_pu_gpd(&fit, &sample, args.r, seed, par)?;
    let audit = AuditEstimates::new(&sample, &pu, args.upsilon)?;
    let rec = FitRecord {
        u: sample.threshold(),
        k: sample.k(),
        k_red: sample.k_red(),
        k_green: sample.k_green(),
        xi_hat: fit.xi_hat,
        tau_r_hat: fit.tau_r_hat,
        tau_g_hat: fit.tau_g_hat,
        loglik_full: fit.loglik_full,
        xi_null: fit.xi_null,
        tau_null: fit.tau_null,
        loglik_null: fit.loglik_null,
        lr_stat: fit.lr_stat,
        p_value: fit.p_value,
        rejects_equal_scales: fit.rejects_equal_scales(),
        boundary_warning: fit.boundary_warning,
        p_u_prime: audit.p_u_prime,
        p_u_hat: audit.p_u_hat,
        p_u_hat_std_error: pu.std_error,
        zero_count_redraws: pu.zero_count_redraws,
        upsilon_assumed: args.upsilon,
        eta_hat: audit.eta_hat,
    };
    out.records("fit_gpd", std::slice::from_ref(&rec))?;
    Ok(Outcome { parameters: to_value(args), summary: to_value(&rec) })
}

#[derive(Serialize)]
struct EtaRecord {
    pu: f64,
    upsilon: f64,
    eta_hat: f64,
}

pub fn estimate_eta_cmd(args: &EstimateEtaArgs, out: &mut OutDir) -> Result<Outcome, CliError> {
    let rec = EtaRecord { pu: args.pu, upsilon: args.upsilon, eta_hat: estimate_eta(args.pu, args.upsilon)? };
    out.records("estimate_eta", std::slice::from_ref(&rec))?;
    Ok(Outcome { parameters: to_value(args), summary: to_value(&rec) })
}

#[derive(Serialize)]
struct LagRecord {
    lag: f64,
    chi: f64,
    ci_low: f64,
    ci_high: f64,
}

pub fn extremogram_cmd(
    args: &ExtremogramArgs,
    seed: u64,
    par: Parallelism,
    out: &mut OutDir,
) -> Result<Outcome, CliError> {
    let cfg =
        ExtremogramConfig { u: args.u, max_lag: args.max_lag, resamples: args.resamples, mean_block: args.block, seed };
    let est = match &args.input {
        Some(path) => {
            let (values, delta) = read_series(path)?;
            extremogram_series(&values, delta, &cfg, par)?
        }
        None => {
            let proc = InterpolatedProcess::simulate(args.knots, args.delta, seed)?;
            extremogram(&proc, &cfg, par)?
        }
    };
    let recs: Vec<LagRecord> = (0..est.lags.len())
        .map(|k| LagRecord { lag: est.lags[k], chi: est.chi[k], ci_low: est.ci_low[k], ci_high: est.ci_high[k] })
        .collect();
    out.records("extremogram", &recs)?;
    let baseline = independence_baseline(args.u);
    let effective = match effective_independent_count(&est, baseline) {
        Ok(c) => json!({ "lag_index": c.lag_index, "distance": c.distance, "count": c.count }),
        Err(e @ Error::NoDecorrelation { .. }) => json!({ "error": e.to_string() }),
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome {
        parameters: to_value(args),
        summary: json!({
            "baseline": baseline,
            "domain_length": est.domain_length,
            "effective_independent": effective,
            "warnings": est.warnings,
        }),
    })
}
