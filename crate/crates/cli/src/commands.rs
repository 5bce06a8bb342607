use std::fs;
use std::path::Path;

use ergopt_core::asymptotics::{self, build_oscillation_schedule, decomposition_report, default_words, oscillation_experiment, DecompositionReport};
use ergopt_core::discounted::{self, DiscountedEvaluation, Mode, Sample};
use ergopt_core::ergopt::{balance_check, brute_force_min_cycle_mean, critical_subgraph, karp_min_mean, morris_point_from, prefix_sums_nonpositive};
use ergopt_core::exec::{self, Strategy};
use ergopt_core::random;
use ergopt_core::report::{BalanceDoc, CorollaryDoc, CriticalDoc, MinMeanDoc, MorrisDoc, SubactionCsvRow, SubcohomologyDoc};
use ergopt_core::subaction::{estimate_c, sweep_points, truncated_transfer, verify_corollary_bounds, verify_subcohomology};
use ergopt_core::systems::input::{parse_observable, parse_points, parse_system, parse_word, LoadedSystem};
use ergopt_core::systems::{coboundary_observable, enumerate_points, EdgeObservable, FiniteSystem, Observable, SymbolicPoint, Target};
use num_bigint::BigUint;
use serde::Serialize;

use crate::args::{Command, Common, Discount, EvalMode, Format, MinMeanMethod};
use crate::error::CliError;
use crate::output;
use crate::plot::{Chart, Scale, Series};

/// Tolerance for floating identities checked in closed form.
const IDENTITY_TOL: f64 = 1e-10;
/// Rotation defects are floating point.
const FLOAT_TOL: f64 = 1e-9;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

struct Input {
    loaded: LoadedSystem,
    common_obs: Option<Observable>,
    u: Option<Observable>,
}

impl Input {
    fn load(common: &Common) -> Result<Self, CliError> {
        let loaded = parse_system(&read(&common.system)?)?;
        let common_obs = match &common.obs {
            Some(p) => Some(parse_observable(&read(p)?, &loaded)?),
            None => loaded.embedded_observable(),
        };
        let u = match &common.u {
            Some(p) => Some(parse_observable(&read(p)?, &loaded)?),
            None => None,
        };
        Ok(Self { loaded, common_obs, u })
    }

    fn finite(&self) -> Result<&FiniteSystem, CliError> {
        match &self.loaded {
            LoadedSystem::Finite { system, .. } => Ok(system),
            LoadedSystem::Rotation { .. } => Err(CliError::Usage("this command needs a finite_shift system".into())),
        }
    }

    fn system_opt(&self) -> Option<&FiniteSystem> {
        self.finite().ok()
    }

    fn observable(&self) -> Result<&Observable, CliError> {
        self.common_obs
            .as_ref()
            .ok_or_else(|| CliError::Usage("no observable: pass --obs or embed weights in the system file".into()))
    }

    /// `u₀` from `--u`, falling back to the main observable.
    fn transfer(&self) -> Result<&Observable, CliError> {
        match &self.u {
            Some(u) => Ok(u),
            None => self.observable(),
        }
    }

    fn edge_observable(&self) -> Result<&EdgeObservable, CliError> {
        Ok(self.observable()?.as_edge()?)
    }
}

fn sample_points(common: &Common, system: &FiniteSystem) -> Result<Vec<SymbolicPoint>, CliError> {
    if let Some(path) = &common.points {
        return Ok(parse_points(&read(path)?, system)?);
    }
    if let Some(k) = common.random_points {
        let mut rng = random::rng(common.seed);
        return Ok((0..k).map(|_| random::random_point(&mut rng, system)).collect());
    }
    Ok(enumerate_points(system, common.max_pre, common.max_cycle))
}

/// Labelled samples of an observable along the configured points or grid angles.
fn samples(common: &Common, input: &Input, g: &Observable) -> Result<Vec<Sample>, CliError> {
    match &input.loaded {
        LoadedSystem::Finite { system, .. } => {
            let points = sample_points(common, system)?;
            let targets: Vec<Target> = points.iter().map(Target::Point).collect();
            Ok(discounted::samples(Some(system), g, &targets)?)
        }
        LoadedSystem::Rotation { rotation, .. } => {
            let targets: Vec<Target> = rotation.grid_angles().into_iter().map(|x| Target::Angle { rotation, x }).collect();
            Ok(discounted::samples(None, g, &targets)?)
        }
    }
}

fn mode(d: &Discount) -> Mode {
    match d.method {
        EvalMode::Closed => Mode::Closed,
        EvalMode::Direct => Mode::direct(d.tol),
    }
}

fn write_plot(common: &Common, chart: Chart) -> Result<(), CliError> {
    match &common.plot {
        Some(path) => output::write_file(path, chart.render().as_bytes()),
        None => Ok(()),
    }
}

pub fn run(command: &Command) -> Result<bool, CliError> {
    let common = command.common();
    let input = Input::load(common)?;
    match command {
        Command::Minmean { method, .. } => minmean(common, &input, *method),
        Command::Mather { .. } => mather(common, &input),
        Command::Morris { horizon, .. } => morris(common, &input, *horizon),
        Command::Balance { .. } => balance(common, &input),
        Command::Subaction { horizon, .. } => subaction(common, &input, *horizon),
        Command::Corollary { horizon, max_cycle_len, .. } => corollary(common, &input, *horizon, *max_cycle_len),
        Command::Discounted { discount, .. } => discounted_values(common, &input, discount),
        Command::DceCheck { discount, .. } => dce_check(common, &input, discount),
        Command::Lemma2 { eps_list, .. } => lemma2(common, &input, eps_list),
        Command::Sweep { discount, threshold, .. } => sweep(common, &input, discount, *threshold),
        Command::Decompose { n, eps, grid, .. } => decompose(common, &input, n, eps, *grid),
        Command::Oscillate { n1, pmax, w0, w1, schedule_out, .. } => {
            oscillate(common, &input, n1, *pmax, w0.as_deref(), w1.as_deref(), schedule_out.as_deref())
        }
    }
}

fn minmean(common: &Common, input: &Input, method: MinMeanMethod) -> Result<bool, CliError> {
    let sys = input.finite()?;
    let f = input.edge_observable()?;
    let result = match method {
        MinMeanMethod::Karp => karp_min_mean(sys, f)?,
        MinMeanMethod::BruteForce => brute_force_min_cycle_mean(sys, f)?,
    };
    output::document(common, "minmean", &MinMeanDoc::new(sys, &result))?;
    Ok(true)
}

fn mather(common: &Common, input: &Input) -> Result<bool, CliError> {
    let sys = input.finite()?;
    let f = input.edge_observable()?;
    let fbar = karp_min_mean(sys, f)?.fbar;
    output::document(common, "mather", &CriticalDoc::new(sys, &critical_subgraph(sys, f, &fbar)?))?;
    Ok(true)
}

fn morris(common: &Common, input: &Input, horizon: u64) -> Result<bool, CliError> {
    let sys = input.finite()?;
    let f = input.edge_observable()?;
    let min = karp_min_mean(sys, f)?;
    let point = morris_point_from(sys, f, &min)?;
    let pass = prefix_sums_nonpositive(&point, f, &min.fbar, horizon)?;
    output::document(common, "morris", &MorrisDoc::new(sys, &min.fbar, &point, pass, horizon))?;
    Ok(pass)
}

fn balance(common: &Common, input: &Input) -> Result<bool, CliError> {
    let sys = input.finite()?;
    let u = input.transfer()?.as_edge()?;
    output::document(common, "balance", &BalanceDoc::new(sys, &balance_check(sys, u)?))?;
    Ok(true)
}

#[derive(Serialize)]
struct TruncatedRow {
    point_id: usize,
    u: f64,
    u_plus: f64,
    defect: f64,
    exactness: String,
    attained_n: u64,
}

fn subaction(common: &Common, input: &Input, horizon: u64) -> Result<bool, CliError> {
    match &input.loaded {
        LoadedSystem::Finite { system, .. } => {
            let f = input.edge_observable()?;
            let fbar = karp_min_mean(system, f)?.fbar;
            let points = sample_points(common, system)?;
            let rows = sweep_points(&points, f, &fbar, Strategy::Parallel);
            let report = verify_subcohomology(&points, f, &fbar, Strategy::Parallel);
            match output::format(common, Format::Csv) {
                Format::Csv => {
                    let csv: Vec<SubactionCsvRow> = rows.iter().enumerate().map(|(i, r)| SubactionCsvRow::new(i, r)).collect();
                    output::emit(common, &output::csv_bytes(&csv)?)?;
                }
                Format::Json => output::emit(common, &output::json_bytes(&SubcohomologyDoc::new(system, &rows, &report))?)?,
            }
            if !report.pass {
                eprintln!("negative defect at sample points {:?}", report.witnesses);
            }
            Ok(report.pass)
        }
        LoadedSystem::Rotation { rotation, .. } => {
            let Observable::Fourier(f) = input.observable()? else {
                return Err(CliError::Usage("rotation needs a Fourier observable".into()));
            };
            let fbar = f.mean();
            let horizon = horizon.max(2);
            let angles = rotation.grid_angles();
            // u_N at x and u_{N-1} at x + α make the truncated defect exactly
            // u_N⁺(x) - u_N(x) ≥ 0.
            let rows: Vec<TruncatedRow> = exec::map(Strategy::Parallel, &angles, |&x| {
                let here = truncated_transfer(rotation, f, fbar, x, horizon);
                let next = truncated_transfer(rotation, f, fbar, rotation.orbit_angle(x, 1), horizon - 1);
                let u_plus = here.value.max(0.0);
                TruncatedRow {
                    point_id: 0,
                    u: here.value,
                    u_plus,
                    defect: f.eval(x) - fbar - next.value.max(0.0) + u_plus,
                    exactness: here.exactness().to_string(),
                    attained_n: here.attained_n,
                }
            })
            .into_iter()
            .enumerate()
            .map(|(i, r)| TruncatedRow { point_id: i, ..r })
            .collect();
            let pass = rows.iter().all(|r| r.defect >= -FLOAT_TOL);
            output::table(common, &rows)?;
            Ok(pass)
        }
    }
}

fn corollary(common: &Common, input: &Input, horizon: u64, max_cycle_len: usize) -> Result<bool, CliError> {
    let base = input.finite()?;
    let (recoded, f) = match &input.u {
        Some(u) => {
            let (two, f) = coboundary_observable(base, u.as_edge()?)?;
            (Some(two), f)
        }
        None => (None, input.edge_observable()?.clone()),
    };
    let sys = recoded.as_ref().map(|t| t.system()).unwrap_or(base);
    let fbar = karp_min_mean(sys, &f)?.fbar;
    let sample = if common.points.is_some() && recoded.is_none() {
        sample_points(common, sys)?
    } else {
        enumerate_points(sys, common.max_pre, common.max_cycle)
    };
    let estimate = estimate_c(&sample, &f, &fbar, Strategy::Parallel);
    let critical = critical_subgraph(sys, &f, &fbar)?;
    let report = verify_corollary_bounds(sys, &critical, &f, &estimate.c, max_cycle_len, horizon, Strategy::Parallel)?;
    let doc = CorollaryDoc::new(sys, &sample, &estimate, &report);
    output::document(common, "corollary", &doc)?;
    Ok(doc.pass)
}

#[derive(Serialize)]
struct DiscountedRow {
    point_id: usize,
    point: String,
    epsilon: f64,
    value: f64,
    horizon: u64,
    tail_bound: f64,
    method: String,
}

/// Evaluates `job` on every (sample, ε) pair, ε-major.
fn over_pairs<R: Send>(
    samples: &[Sample],
    eps: &[f64],
    job: impl Fn(&Sample, f64) -> Result<R, discounted::DiscountedError> + Sync + Send,
) -> Result<Vec<(usize, f64, R)>, CliError> {
    let n = samples.len();
    exec::map_range(Strategy::Parallel, 0..n * eps.len(), |idx| {
        let (ei, si) = (idx / n, idx % n);
        job(&samples[si], eps[ei]).map(|r| (si, eps[ei], r))
    })
    .into_iter()
    .map(|r| r.map_err(CliError::from))
    .collect()
}

fn discounted_values(common: &Common, input: &Input, d: &Discount) -> Result<bool, CliError> {
    let s = samples(common, input, input.observable()?)?;
    let mode = mode(d);
    let rows: Vec<DiscountedRow> = over_pairs(&s, &d.eps_list, |sample, e| discounted::discounted_signal_value(&sample.signal, e, mode))?
        .into_iter()
        .map(|(i, _, ev): (usize, f64, DiscountedEvaluation)| DiscountedRow {
            point_id: i,
            point: s[i].label.clone(),
            epsilon: ev.epsilon,
            value: ev.value,
            horizon: ev.horizon,
            tail_bound: ev.tail_bound,
            method: ev.method.to_string(),
        })
        .collect();
    output::table(common, &rows)?;
    Ok(true)
}

#[derive(Serialize)]
struct DceRow {
    point_id: usize,
    epsilon: f64,
    residual: f64,
    allowed: f64,
    pass: bool,
}

fn dce_check(common: &Common, input: &Input, d: &Discount) -> Result<bool, CliError> {
    let s = samples(common, input, input.observable()?)?;
    let mode = mode(d);
    let rows: Vec<DceRow> = over_pairs(&s, &d.eps_list, |sample, e| discounted::dce_signal_residual(&sample.signal, e, mode))?
        .into_iter()
        .map(|(i, e, r)| DceRow {
            point_id: i,
            epsilon: e,
            residual: r.residual,
            allowed: r.allowed,
            pass: r.pass(),
        })
        .collect();
    output::table(common, &rows)?;
    report_failures(rows.iter().filter(|r| !r.pass).map(|r| (r.point_id, r.epsilon)))
}

fn report_failures(failed: impl Iterator<Item = (usize, f64)>) -> Result<bool, CliError> {
    let failed: Vec<(usize, f64)> = failed.collect();
    if let Some((i, e)) = failed.first() {
        eprintln!("{} failing rows; first at point {i}, epsilon {e}", failed.len());
    }
    Ok(failed.is_empty())
}

#[derive(Serialize)]
struct GapRow {
    point_id: usize,
    epsilon: f64,
    transfer: f64,
    identity: f64,
    gap: f64,
}

fn lemma2(common: &Common, input: &Input, eps_list: &[f64]) -> Result<bool, CliError> {
    let s = samples(common, input, input.transfer()?)?;
    let rows: Vec<GapRow> = over_pairs(&s, eps_list, |sample, e| discounted::coboundary_signal_gap(&sample.signal, e))?
        .into_iter()
        .map(|(i, e, g)| GapRow {
            point_id: i,
            epsilon: e,
            transfer: g.transfer,
            identity: g.identity,
            gap: g.gap,
        })
        .collect();
    output::table(common, &rows)?;
    report_failures(rows.iter().filter(|r| !(r.gap <= IDENTITY_TOL)).map(|r| (r.point_id, r.epsilon)))
}

fn sweep(common: &Common, input: &Input, d: &Discount, threshold: f64) -> Result<bool, CliError> {
    let u = input.transfer()?;
    let c = match discounted::common_integral(input.system_opt(), u) {
        Ok(c) => c,
        Err(e @ discounted::DiscountedError::Unbalanced { .. }) => {
            if let (Some(sys), Observable::Edge(edge)) = (input.system_opt(), u) {
                let rep = balance_check(sys, edge)?;
                eprintln!(
                    "witness cycles: min {:?}, max {:?}",
                    sys.edge_ids(&rep.min_witness),
                    sys.edge_ids(&rep.max_witness)
                );
            }
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    let s = samples(common, input, u)?;
    let report = discounted::convergence_sweep(&s, c, &d.eps_list, mode(d), Strategy::Parallel)?;
    output::table(common, &report.rows)?;
    write_plot(
        common,
        Chart {
            title: format!("sup error over {} sample points", report.sample_size),
            x_label: "epsilon".into(),
            y_label: "sup error".into(),
            x_scale: Scale::Log,
            y_scale: Scale::Log,
            series: vec![Series {
                label: "sup |U_eps - (u - c)|".into(),
                points: report.rows.iter().map(|r| (r.epsilon, r.sup_error)).collect(),
                lines: true,
            }],
            references: vec![(threshold, format!("threshold {threshold}"))],
        },
    )?;
    let pass = report.strictly_decreasing && report.final_error().is_some_and(|e| e < threshold);
    if !pass {
        eprintln!("sweep not decreasing below {threshold}: {:?}", report.rows.last());
    }
    Ok(pass)
}

#[derive(Serialize)]
struct DecompositionRow {
    point_id: usize,
    n: u64,
    epsilon: f64,
    alpha: f64,
    remainder_mass: f64,
    bound: f64,
    left: f64,
    right: f64,
    identity_gap: f64,
    pass: bool,
}

impl DecompositionRow {
    fn new(point_id: usize, r: &DecompositionReport) -> Self {
        Self {
            point_id,
            n: r.n,
            epsilon: r.epsilon,
            alpha: r.alpha,
            remainder_mass: r.remainder_mass,
            bound: r.bound,
            left: r.left,
            right: r.right,
            identity_gap: r.identity_gap,
            pass: r.identity_gap <= IDENTITY_TOL && r.within_bound(),
        }
    }
}

fn decompose(common: &Common, input: &Input, ns: &[u64], eps: &[f64], grid: bool) -> Result<bool, CliError> {
    let s = samples(common, input, input.observable()?)?;
    let mut cases: Vec<(u64, f64)> = Vec::new();
    if grid {
        for n in [100u64, 1_000, 10_000, 100_000] {
            let base = (n as f64).ln() / n as f64;
            cases.extend([(n, base), (n, 2.0 * base), (n, 0.01)]);
        }
    } else {
        for &n in ns {
            if eps.is_empty() {
                cases.push((n, (n as f64).ln() / n as f64));
            } else {
                cases.extend(eps.iter().map(|&e| (n, e)));
            }
        }
    }
    let m = s.len();
    let rows: Vec<DecompositionRow> = exec::map_range(Strategy::Parallel, 0..cases.len() * m, |idx| {
        let (n, e) = cases[idx / m];
        decomposition_report(&s[idx % m].signal, e, n).map(|r| DecompositionRow::new(idx % m, &r))
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    output::table(common, &rows)?;
    report_failures(
rows.iter().filter(|r| !r.pass).map(|r| (r.point_id, r.epsilon)))
}

#[derive(Serialize)]
struct OscillationDoc<'a> {
    schedule: asymptotics::ScheduleDoc,
    mu0: f64,
    mu1: f64,
    rows: &'a [asymptotics::OscillationRow],
}

/// Allowed |U - target| per p: loose at p = 1, tight afterwards.
fn oscillation_tolerance(p: usize) -> f64 {
    if p == 1 {
        0.15
    } else {
        0.05
    }
}

fn oscillate(
    common: &Common,
    input: &Input,
    n1: &str,
    p_max: usize,
    w0: Option<&str>,
    w1: Option<&str>,
    schedule_out: Option<&Path>,
) -> Result<bool, CliError> {
    let sys = input.finite()?;
    let u = input.transfer()?.as_edge()?;
    let n1: BigUint = n1.trim().parse().map_err(|_| CliError::Usage(format!("--n1 must be a positive integer, got {n1:?}")))?;
    let (w0, w1) = match (w0, w1) {
        (Some(a), Some(b)) => (parse_word(sys, a)?, parse_word(sys, b)?),
        (None, None) => default_words(sys, u)?,
        _ => return Err(CliError::Usage("give both --w0 and --w1 or neither".into())),
    };
    let schedule = build_oscillation_schedule(sys, &w0, &w1, &n1, p_max)?;
    let report = oscillation_experiment(sys, &schedule, u, Strategy::Parallel)?;
    let doc = schedule.to_doc(sys);
    if let Some(path) = schedule_out {
        output::write_file(path, &output::json_bytes(&doc)?)?;
    }
    match output::format(common, Format::Csv) {
        Format::Csv => output::emit(common, &output::csv_bytes(&report.rows)?)?,
        Format::Json => output::emit(
            common,
            &output::json_bytes(&OscillationDoc {
                schedule: doc,
                mu0: report.mu0,
                mu1: report.mu1,
                rows: &report.rows,
            })?,
        )?,
    }
    let u_here = u.value(schedule.schedule.first_edge());
    write_plot(
        common,
        Chart {
            title: "discounted values along the schedule".into(),
            x_label: "p".into(),
            y_label: "U_eps_p".into(),
            x_scale: Scale::Linear,
            y_scale: Scale::Linear,
            series: vec![Series {
                label: "U_eps_p at the schedule point".into(),
                points: report.rows.iter().map(|r| (r.p as f64, r.u_value)).collect(),
                lines: false,
            }],
            references: vec![(u_here - report.mu0, "u - mu0(u)".into()), (u_here - report.mu1, "u - mu1(u)".into())],
        },
    )?;
    let failed: Vec<usize> = report
        .rows
        .iter()
        .filter(|r| !(r.abs_error < oscillation_tolerance(r.p)))
        .map(|r| r.p)
        .collect();
    if !failed.is_empty() {
        eprintln!("error above tolerance at p = {failed:?}");
    }
    Ok(failed.is_empty())
}
