mod config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use config::Config;
use smib_core::cdm::{derive_cdm_coefficients, CdmCoefficients};
use smib_core::eig::eigenvalues;
use smib_core::equilibrium::{
    find_equilibrium, linearize_cdm, plant_equilibrium, LinearModel, OperatingPoint,
};
use smib_core::freq::{
    log_grid, loop_tf_eval, mag_db, margins, nyquist_encirclements, phase_deg, MarginValue,
};
use smib_core::lqg::{design_ltr_filter, ideal_filter_gain};
use smib_core::mat::Matrix;
use smib_core::params::Limits;
use smib_core::plant::{derive_plant_coefficients, PlantCoefficients};
use smib_core::scenarios::{
    compute_metrics, inflc_gains_tuned, lqg_k_fixture, make_controller, make_plant_controller,
    nflc_gains_scaled, plant_limits, run_case, sim_cdm, sim_plant, CdmScenario, ControllerKind,
    Metrics, PlantScenario, Scenario, SimTrace, GUESS_CDM_OP1, GUESS_CDM_OP2, GUESS_PLANT_OP1,
    GUESS_PLANT_OP2, LOADING_OP1, LOADING_OP2,
};
use smib_core::NumError;

enum CliError {
    Usage(String),
    Num(String),
    Mismatch(String),
}

impl From<NumError> for CliError {
    fn from(e: NumError) -> Self {
        CliError::Num(format!("{e:?}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Num(format!("io: {e}"))
    }
}

type CliResult<T> = Result<T, CliError>;

const USAGE: &str = "usage: smib [--config <file>] [--out <dir>] <command> [flags]
commands:
  derive                              dump model coefficients
  equilibrium [--op 1|2]              solve operating points (both models)
  linearize [--op 1|2]                linearized design model at an operating point
  design [--controller <c>] [--op 1|2]  controller gains (nflc|inflc|lqg|lqr)
  simulate --controller <c> [--model cdm|plant] [--op 1|2] [--t-end <s>]
  freq [--q <val>|ideal]              loop frequency response CSV
  margins [--q <val>|ideal|all]       gain/phase margin table
  case <1-5> --controller <c>         run a case study, write trace + metrics
  report                              run all checks, verdicts vs published values
environment: SMIB_OUT_DIR overrides the output directory";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::from(0),
        Err(CliError::Usage(m)) => {
            eprintln!("smib: error: usage: {m}");
            eprintln!("{USAGE}");
            ExitCode::from(1)
        }
        Err(CliError::Num(m)) => {
            eprintln!("smib: error: numerical: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Mismatch(m)) => {
            eprintln!("smib: error: acceptance: {m}");
            ExitCode::from(3)
        }
    }
}

struct Flags {
    command: String,
    positional: Vec<String>,
    config: Option<String>,
    out: Option<String>,
    controller: Option<String>,
    model: Option<String>,
    op: Option<String>,
    q: Option<String>,
    t_end: Option<String>,
}

fn parse_args(args: &[String]) -> CliResult<Flags> {
    let mut f = Flags {
        command: String::new(),
        positional: Vec::new(),
        config: None,
        out: None,
        controller: None,
        model: None,
        op: None,
        q: None,
        t_end: None,
    };
    let mut it = args.iter().peekable();
    while let Some(a) = it.next() {
        let take = |it: &mut std::iter::Peekable<std::slice::Iter<String>>| -> CliResult<String> {
            it.next()
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("flag {a} needs a value")))
        };
        match a.as_str() {
            "--config" => f.config = Some(take(&mut it)?),
            "--out" => f.out = Some(take(&mut it)?),
            "--controller" => f.controller = Some(take(&mut it)?),
            "--model" => f.model = Some(take(&mut it)?),
            "--op" => f.op = Some(take(&mut it)?),
            "--q" => f.q = Some(take(&mut it)?),
            "--t-end" => f.t_end = Some(take(&mut it)?),
            "--help" | "-h" => return Err(CliError::Usage("help requested".into())),
            s if s.starts_with('-') => {
                return Err(CliError::Usage(format!("unknown flag {s}")));
            }
            s => {
                if f.command.is_empty() {
                    f.command = s.to_string();
                } else {
                    f.positional.push(s.to_string());
                }
            }
        }
    }
    if f.command.is_empty() {
        return Err(CliError::Usage("no command given".into()));
    }
    Ok(f)
}

fn run(args: &[String]) -> CliResult<()> {
    let flags = parse_args(args)?;
    let cfg = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("config {path}: {e}")))?;
            Config::parse(&text).map_err(|e| CliError::Usage(format!("config {path}: {e}")))?
        }
        None => Config::default(),
    };
    let out_dir = flags
        .out
        .clone()
        .or_else(|| std::env::var("SMIB_OUT_DIR").ok())
        .unwrap_or_else(|| cfg.out_dir.clone());
    let out = PathBuf::from(out_dir);
    match flags.command.as_str() {
        "derive" => cmd_derive(&cfg, &out),
        "equilibrium" => cmd_equilibrium(&cfg, &out, &flags),
        "linearize" => cmd_linearize(&cfg, &out, &flags),
        "design" => cmd_design(&cfg, &out, &flags),
        "simulate" => cmd_simulate(&cfg, &out, &flags),
        "freq" => cmd_freq(&cfg, &out, &flags),
        "margins" => cmd_margins(&cfg, &out, &flags),
        "case" => cmd_case(&cfg, &out, &flags),
        "report" => cmd_report(&cfg, &out),
        other => Err(CliError::Usage(format!("unknown command {other}"))),
    }
}

// ---- shared helpers ----

fn num(x: f64) -> String {
    format!("{x:.14e}")
}

fn write_out(out: &Path, name: &str, content: &str) -> CliResult<()> {
    fs::create_dir_all(out)?;
    let path = out.join(name);
    fs::write(&path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn controller_kind(name: &str) -> CliResult<ControllerKind> {
    match name {
        "nflc" => Ok(ControllerKind::Nflc),
        "inflc" => Ok(ControllerKind::Inflc),
        "lqg" => Ok(ControllerKind::Lqg),
        "lqr" => Ok(ControllerKind::Lqr),
        _ => Err(CliError::Usage(format!(
            "unknown controller {name} (expected nflc|inflc|lqg|lqr)"
        ))),
    }
}

fn op_index(flags: &Flags) -> CliResult<u8> {
    match flags.op.as_deref() {
        None | Some("1") => Ok(1),
        Some("2") => Ok(2),
        Some(other) => Err(CliError::Usage(format!("--op must be 1 or 2, got {other}"))),
    }
}

fn coeffs(cfg: &Config) -> CliResult<(CdmCoefficients, PlantCoefficients)> {
    Ok((
        derive_cdm_coefficients(&cfg.machine)?,
        derive_plant_coefficients(&cfg.machine)?,
    ))
}

fn cdm_op(cc: &CdmCoefficients, op: u8) -> CliResult<OperatingPoint> {
    let (loading, guess) = match op {
        1 => (LOADING_OP1, GUESS_CDM_OP1),
        _ => (LOADING_OP2, GUESS_CDM_OP2),
    };
    Ok(find_equilibrium(cc, loading.0, loading.1, guess)?)
}

fn design_model(cc: &CdmCoefficients, op: u8) -> CliResult<LinearModel> {
    Ok(linearize_cdm(cc, &cdm_op(cc, op)?)?)
}

fn matrix_block(name: &str, m: &Matrix, s: &mut String) {
    for i in 0..m.rows {
        for j in 0..m.cols {
            let _ = writeln!(s, "{name},{i},{j},{}", num(m[(i, j)]));
        }
    }
}

fn trace_csv(trace: &SimTrace) -> String {
    let mut s = String::from("t,vt,w,delta,tm,efd,ut,eq_prime,gv,faulted\n");
    for p in &trace.samples {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            num(p.t),
            num(p.vt),
            num(p.w),
            num(p.delta),
            num(p.tm),
            num(p.efd),
            num(p.ut),
            num(p.eq_prime),
            num(p.gv),
            p.faulted as u8
        );
    }
    s
}

fn metrics_text(m: &Metrics) -> String {
    let settle = match m.settling_time_w {
        Some(t) => num(t),
        None => "unsettled".to_string(),
    };
    format!(
        "sse_vt = {}\nsse_delta = {}\nsse_w = {}\nsse_tm = {}\novershoot_vt_pct = {}\nsettling_time_w = {settle}\nsaturation_duration = {}\n",
        num(m.sse_vt),
        num(m.sse_delta),
        num(m.sse_w),
        num(m.sse_tm),
        num(m.overshoot_vt),
        num(m.saturation_duration),
    )
}

// ---- commands ----

fn cmd_derive(cfg: &Config, out: &Path) -> CliResult<()> {
    let (c, p) = coeffs(cfg)?;
    let mut s = String::from("# design-model coefficients\n");
    for (k, v) in [
        ("f11", c.f11), ("f12", c.f12), ("f13", c.f13), ("g11", c.g11),
        ("f21", c.f21), ("f22", c.f22), ("f23", c.f23), ("f24", c.f24),
        ("f25", c.f25), ("f26", c.f26), ("f27", c.f27), ("f28", c.f28),
        ("f41", c.f41), ("f42", c.f42), ("f51", c.f51), ("f52", c.f52),
        ("g55", c.g55),
        ("Vd1", c.vd1), ("Vd2", c.vd2), ("Vd3", c.vd3),
        ("Vq1", c.vq1), ("Vq2", c.vq2), ("Vq3", c.vq3),
        ("e11", c.e11), ("e12", c.e12), ("e13", c.e13), ("e14", c.e14), ("e15", c.e15),
        ("r31", c.r31), ("r32", c.r32), ("r33", c.r33),
        ("p51", c.p51), ("p52", c.p52), ("p53", c.p53), ("r51", c.r51),
        ("tau_d0_prime", c.tau_d0_prime), ("L_d_prime", c.l_d_prime), ("tau_j", c.tau_j),
    ] {
        let _ = writeln!(s, "{k} = {}", num(v));
    }
    s.push_str("\n# high-fidelity plant coefficients\n");
    for (k, v) in [
        ("f11", p.f11), ("f12", p.f12), ("f13", p.f13), ("f14", p.f14),
        ("f15", p.f15), ("f16", p.f16), ("f21", p.f21), ("f31", p.f31),
        ("f41", p.f41), ("f44", p.f44), ("f51", p.f51), ("f66", p.f66),
        ("f81", p.f81), ("f82", p.f82), ("f91", p.f91), ("f92", p.f92),
        ("g11", p.g11), ("g21", p.g21), ("g31", p.g31), ("g92", p.g92),
        ("y11", p.y11), ("y12", p.y12), ("y13", p.y13), ("y14", p.y14),
        ("y15", p.y15), ("y16", p.y16), ("i11", p.i11),
        ("y21", p.y21), ("y22", p.y22), ("y23", p.y23), ("y24", p.y24),
        ("y25", p.y25), ("y26", p.y26),
        ("mu", p.mu), ("nu", p.nu), ("tau_j", p.tau_j),
    ] {
        let _ = writeln!(s, "{k} = {}", num(v));
    }
    print!("{s}");
    write_out(out, "coefficients.txt", &s)
}

fn cmd_equilibrium(cfg: &Config, out: &Path, flags: &Flags) -> CliResult<()> {
    let (cc, pc) = coeffs(cfg)?;
    let ops: Vec<u8> = match flags.op.as_deref() {
        None => vec![1, 2],
        Some("1") => vec![1],
        Some("2") => vec![2],
        Some(other) => return Err(CliError::Usage(format!("--op must be 1 or 2, got {other}"))),
    };
    let mut s = String::new();
    for n in ops {
        let (loading, pguess) = match n {
            1 => (LOADING_OP1, GUESS_PLANT_OP1),
            _ => (LOADING_OP2, GUESS_PLANT_OP2),
        };
        let oc = cdm_op(&cc, n)?;
        let pp = plant_equilibrium(&pc, loading.0, loading.1, &pguess)?;
        let _ = writeln!(s, "[operating point {n}]  T_m0 = {}, V_t0 = {}", loading.0, loading.1);
        let _ = writeln!(
            s,
            "cdm: Eq_prime0 = {}, delta0 = {}, E_FD0 = {}, u_T0 = {}",
            num(oc.x0[0]),
            num(oc.x0[2]),
            num(oc.u0[0]),
            num(oc.u0[1]),
        );
        let _ = writeln!(
            s,
            "plant: I_d0 = {}, I_F0 = {}, I_q0 = {}, delta0 = {}, V_F0 = {}, u_T0 = {}",
            num(pp.x0[0]),
            num(pp.x0[1]),
            num(pp.x0[3]),
            num(pp.x0[6]),
            num(pp.u0[0]),
            num(pp.u0[1]),
        );
    }
    print!("{s}");
    write_out(out, "operating_points.txt", &s)
}

fn cmd_linearize(cfg: &Config, out: &Path, flags: &Flags) -> CliResult<()> {
    let (cc, _) = coeffs(cfg)?;
    let n = op_index(flags)?;
    let m = design_model(&cc, n)?;
    let mut s = String::from("matrix,row,col,value\n");
    matrix_block("A", &m.a, &mut s);
    matrix_block("B", &m.b, &mut s);
    matrix_block("C", &m.c, &mut s);
    matrix_block("D", &m.d, &mut s);
    let eigs = eigenvalues(&m.a)?;
    println!("open-loop eigenvalues at operating point {n}:");
    for z in &eigs {
        println!("  {} {:+}i", num(z.re), z.im);
    }
    write_out(out, &format!("linearized_op{n}.csv"), &s)
}

fn cmd_design(cfg: &Config, out: &Path, flags: &Flags) -> CliResult<()> {
    let kind = controller_kind(flags.controller.as_deref().unwrap_or("lqg"))?;
    let (cc, _) = coeffs(cfg)?;
    let n = op_index(flags)?;
    let mut s = String::new();
    match kind {
        ControllerKind::Nflc | ControllerKind::Inflc => {
            let g = if kind == ControllerKind::Nflc {
                nflc_gains_scaled(cfg.nflc_lambda_g, cfg.nflc_lambda_t)
            } else {
                inflc_gains_tuned(cfg.inflc_lambda, cfg.inflc_a)
            };
            let _ = writeln!(s, "controller = {}", kind.name());
            let kg: Vec<String> = g.kg.iter().map(|&v| num(v)).collect();
            let kt: Vec<String> = g.kt.iter().map(|&v| num(v)).collect();
            let _ = writeln!(s, "KG = [{}]", kg.join(", "));
            let _ = writeln!(s, "KT = [{}]", kt.join(", "));
        }
        ControllerKind::Lqg | ControllerKind::Lqr => {
            let m = design_model(&cc, n)?;
            let i5 = Matrix::identity(5);
            let i2 = Matrix::identity(2);
            let k = smib_core::care::lqr_gain(&m.a, &m.b, &i5.scale(cfg.lqg_rho), &i2)?;
            let _ = writeln!(s, "controller = {} (operating point {n}, rho = {})", kind.name(), cfg.lqg_rho);
            matrix_block("K", &k, &mut s);
            if kind == ControllerKind::Lqg {
                let h = design_ltr_filter(&m, cfg.lqg_q, &i5, &i2, &i2)?.h;
                let _ = writeln!(s, "# filter gain at q = {}", cfg.lqg_q);
                matrix_block("H", &h, &mut s);
            }
        }
    }
    print!("{s}");
    write_out(out, &format!("design_{}.txt", kind.name()), &s)
}

fn cmd_simulate(cfg: &Config, out: &Path, flags: &Flags) -> CliResult<()> {
    let kind = controller_kind(
        flags
            .controller
            .as_deref()
            .ok_or_else(|| CliError::Usage("simulate needs --controller".into()))?,
    )?;
    let n = op_index(flags)?;
    let t_end = match &flags.t_end {
        Some(v) => v
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0)
            .ok_or_else(|| CliError::Usage(format!("--t-end must be a positive number, got {v}")))?,
        None => cfg.t_end,
    };
    let (cc, pc) = coeffs(cfg)?;
    let model = flags.model.as_deref().unwrap_or("cdm");
    let (trace, metrics) = match model {
        "cdm" => {
            let op = cdm_op(&cc, n)?;
            let m = linearize_cdm(&cc, &op)?;
            let mut ctl = make_controller(kind, &op, Some(&m), None, None)?;
            let sc = CdmScenario {
                c: &cc,
                op: &op,
                t_end,
                dt: cfg.dt_cdm,
                fault: None,
                pm_pinned: false,
                x_init: None,
                limits: Limits::default(),
            };
            let trace = sim_cdm(&sc, &mut ctl)?;
            let metrics = compute_metrics(&trace, &op);
            (trace, metrics)
        }
        "plant" => {
            let (loading, pguess) = match n {
                1 => (LOADING_OP1, GUESS_PLANT_OP1),
                _ => (LOADING_OP2, GUESS_PLANT_OP2),
            };
            let cop = cdm_op(&cc, n)?;
            let pop = plant_equilibrium(&pc, loading.0, loading.1, &pguess)?;
            let nominal = design_model(&cc, 1)?;
            let mut ctl = make_plant_controller(kind, &cc, &cop, &pop, &nominal)?;
            let sc = PlantScenario {
                pc: &pc,
                cc: &cc,
                pop: &pop,
                t_end,
                dt: cfg.dt_plant,
                perturbation: smib_core::scenarios::PlantPerturbation { d_delta: 0.0, rel_if: 0.0 },
                fault: None,
                limits: plant_limits(),
            };
            let trace = sim_plant(&sc, &mut ctl)?;
            let mut reference = cop.clone();
            reference.vt0 = pop.vt0;
            reference.x0[2] = pop.x0[6];
            reference.x0[3] = pop.x0[7];
            let metrics = compute_metrics(&trace, &reference);
            (trace, metrics)
        }
        other => {
            return Err(CliError::Usage(format!("--model must be cdm or plant, got {other}")))
        }
    };
    print!("{}", metrics_text(&metrics));
    write_out(out, &format!("simulate_{model}_{}.csv", kind.name()), &trace_csv(&trace))
}

enum QSpec {
    Value(f64),
    Ideal,
}

fn parse_q(cfg: &Config, v: Option<&str>) -> CliResult<QSpec> {
    match v {
        None => Ok(QSpec::Value(cfg.lqg_q)),
        Some("ideal") => Ok(QSpec::Ideal),
        Some(s) => {
            let q: f64 = s
                .parse()
                .map_err(|_| CliError::Usage(format!("--q must be a number or 'ideal', got {s}")))?;
            if !(q >= 0.0) {
                return Err(CliError::Usage("--q must be non-negative".into()));
            }
            Ok(QSpec::Value(q))
        }
    }
}

fn filter_for(m: &LinearModel, spec: &QSpec, cfg: &Config) -> CliResult<(String, Matrix)> {
    let i5 = Matrix::identity(5);
    let i2 = Matrix::identity(2);
    match spec {
        QSpec::Value(q) => Ok((format!("q={q}"), design_ltr_filter(m, *q, &i5, &i2, &i2)?.h)),
        QSpec::Ideal => Ok(("ideal".to_string(), ideal_filter_gain(m, cfg.lqg_q, &i2, &i2)?)),
    }
}

fn cmd_freq(cfg: &Config, out: &Path, flags: &Flags) -> CliResult<()> {
    let (cc, _) = coeffs(cfg)?;
    let m = design_model(&cc, 1)?;
    let k = lqg_k_fixture();
    let spec = parse_q(cfg, flags.q.as_deref())?;
    let (label, h) = filter_for(&m, &spec, cfg)?;
    let grid = log_grid(cfg.w_min, cfg.w_max, cfg.points);
    let mut s = String::from(
        "w,h11_re,h11_im,h11_mag_db,h11_phase_deg,h22_re,h22_im,h22_mag_db,h22_phase_deg\n",
    );
    for &w in &grid {
        let l = loop_tf_eval(&m, &k, &h, w)?;
        let (h11, h22) = (l[0], l[3]);
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            num(w),
            num(h11.re),
            num(h11.im),
            num(mag_db(h11)),
            num(phase_deg(h11)),
            num(h22.re),
            num(h22.im),
            num(mag_db(h22)),
            num(phase_deg(h22)),
        );
    }
    let name = format!("freq_{}.csv", label.replace('=', ""));
    write_out(out, &name, &s)
}

fn margin_row(
    m: &LinearModel,
    k: &Matrix,
    h: &Matrix,
    grid: &[f64],
) -> CliResult<[MarginValue; 4]> {
    let mut row = [MarginValue::Unbounded; 4];
    for ch in 0..2 {
        let lf = |w: f64| Ok(loop_tf_eval(m, k, h, w).unwrap()[3 * ch]);
        let mg = margins(&lf, grid)?;
        row[2 * ch] = mg.gm_db;
        row[2 * ch + 1] = mg.pm_deg;
    }
    Ok(row)
}

fn margin_str(v: MarginValue) -> String {
    match v.finite() {
        Some(x) => format!("{x:.4}"),
        None => "inf".to_string(),
    }
}

fn cmd_margins(cfg: &Config, out: &Path, flags: &Flags) -> CliResult<()> {
    let (cc, _) = coeffs(cfg)?;
    let m = design_model(&cc, 1)?;
    let k = lqg_k_fixture();
    let grid = log_grid(cfg.w_min, cfg.w_max, cfg.points);
    let specs: Vec<QSpec> = match flags.q.as_deref() {
        Some("all") | None => vec![
            QSpec::Value(0.0),
            QSpec::Value(cfg.lqg_q),
            QSpec::Value(100.0),
            QSpec::Ideal,
        ],
        other => vec![parse_q(cfg, other)?],
    };
    let mut s = String::from("design,GM_H11_dB,PM_H11_deg,GM_H22_dB,PM_H22_deg,encirclements_H11,encirclements_H22\n");
    for spec in &specs {
        let (label, h) = filter_for(&m, spec, cfg)?;
        let row = margin_row(&m, &k, &h, &grid)?;
        let mut counts = [0i32; 2];
        for ch in 0..2 {
            let lf = |w: f64| Ok(loop_tf_eval(&m, &k, &h, w).unwrap()[3 * ch]);
            counts[ch] = nyquist_encirclements(&lf, &grid)?;
        }
        let _ = writeln!(
            s,
            "{label},{},{},{},{},{},{}",
            margin_str(row[0]),
            margin_str(row[1]),
            margin_str(row[2]),
            margin_str(row[3]),
            counts[0],
            counts[1],
        );
    }
    print!("{s}");
    write_out(out, "margins.csv", &s)
}

fn cmd_case(cfg: &Config, out: &Path, flags: &Flags) -> CliResult<()> {
    let case_id: u8 = flags
        .positional
        .first()
        .and_then(|v| v.parse().ok())
        .filter(|n| (1..=5).contains(n))
        .ok_or_else(|| CliError::Usage("case needs a number 1-5".into()))?;
    let kind = controller_kind(
        flags
            .controller
            .as_deref()
            .ok_or_else(|| CliError::Usage("case needs --controller".into()))?,
    )?;
    let (cc, pc) = coeffs(cfg)?;
    let sc = Scenario::case(case_id, kind)?;
    let (trace, metrics, _) = run_case(&cc, &pc, &sc)?;
    print!("{}", metrics_text(&metrics));
    write_out(out, &format!("case{case_id}_{}.csv", kind.name()), &trace_csv(&trace))?;
    write_out(out, &format!("case{case_id}_{}_metrics.txt", kind.name()), &metrics_text(&metrics))
}

// ---- report: every check against the published values ----

struct Verdict {
    lines: Vec<String>,
    failures: usize,
}

impl Verdict {
    fn new() -> Self {
        Verdict { lines: Vec::new(), failures: 0 }
    }

    fn record(&mut self, ok: bool, what: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        self.lines.push(format!("{tag}  {what}"));
        if !ok {
            self.failures += 1;
        }
    }
}

fn cmd_report(cfg: &Config, out: &Path) -> CliResult<()> {
    let (cc, pc) = coeffs(cfg)?;
    let mut v = Verdict::new();

    // frequency margins vs the published table (±0.5 dB / ±1.0°)
    let m = design_model(&cc, 1)?;
    let k = lqg_k_fixture();
    let grid = log_grid(cfg.w_min, cfg.w_max, cfg.points);
    let i5 = Matrix::identity(5);
    let i2 = Matrix::identity(2);
    let rows: [(&str, Matrix, [Option<f64>; 4]); 4] = [
        (
            "q=0",
            design_ltr_filter(&m, 0.0, &i5, &i2, &i2)?.h,
            [None, Some(75.616), Some(8.347), None],
        ),
        (
            "q=9.0005",
            design_ltr_filter(&m, 9.0005, &i5, &i2, &i2)?.h,
            [None, Some(71.793), Some(45.195), None],
        ),
        (
            "q=100",
            design_ltr_filter(&m, 100.0, &i5, &i2, &i2)?.h,
            [Some(0.0684), Some(77.533), Some(0.4622), Some(69.475)],
        ),
        (
            "ideal",
            ideal_filter_gain(&m, 9.0005, &i2, &i2)?,
            [None, Some(69.501), Some(3.561), None],
        ),
    ];
    let names = ["GM11(dB)", "PM11(deg)", "GM22(dB)", "PM22(deg)"];
    for (label, h, want) in &rows {
        let got = margin_row(&m, &k, h, &grid)?;
        for i in 0..4 {
            let Some(w) = want[i] else { continue };
            let tol = if i % 2 == 0 { 0.5 } else { 1.0 };
            let (ok, shown) = match got[i].finite() {
                Some(g) => ((g - w).abs() <= tol, format!("{g:.3}")),
                None => (false, "inf".to_string()),
            };
            v.record(ok, format!("margins {label} {}: computed {shown}, published {w}", names[i]));
        }
    }

    // case 1: steadies within 1e-3 for every controller
    let all = [
        ControllerKind::Nflc,
        ControllerKind::Inflc,
        ControllerKind::Lqg,
        ControllerKind::Lqr,
    ];
    for kind in all {
        let sc = Scenario::case(1, kind)?;
        let (trace, _, _) = run_case(&cc, &pc, &sc)?;
        let f = trace.last();
        let worst = [
            (f.vt - 1.17233).abs(),
            (f.w - 1.0).abs(),
            (f.delta - 1.0).abs(),
            (f.tm - 1.0012).abs(),
            (f.efd - 2.529).abs(),
            (f.ut - 1.0512).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        v.record(worst < 1e-3, format!("case 1 {}: steady deviation {worst:.2e}", kind.name()));
    }

    // case 2: fault masking + recovery + settling order
    let mut settles = Vec::new();
    for kind in [ControllerKind::Nflc, ControllerKind::Inflc, ControllerKind::Lqg] {
        let sc = Scenario::case(2, kind)?;
        let (trace, _, _) = run_case(&cc, &pc, &sc)?;
        let at = |t: f64| &trace.samples[(t / sc.dt).round() as usize];
        let masked = at(50.1).vt == 0.0;
        let pre = at(49.0).vt;
        let rel = ((at(70.0).vt - pre) / pre).abs();
        let mut times = Vec::new();
        let mut w = Vec::new();
        for p in &trace.samples {
            if p.t > 50.2 {
                times.push(p.t - 50.2);
                w.push(p.w);
            }
        }
        let settle = smib_core::scenarios::settle_time(&times, &w, 1.0);
        v.record(
            masked && rel < 5e-3 && settle.is_some(),
            format!("case 2 {}: V_t zero in fault, recovery {rel:.2e}", kind.name()),
        );
        settles.push(settle.unwrap_or(f64::INFINITY));
    }
    v.record(
        settles[1] <= settles[0] && settles[0] <= settles[2],
        format!(
            "case 2 settling order: INFLC {:.2} <= NFLC {:.2} <= LQG {:.2} s",
            settles[1], settles[0], settles[2]
        ),
    );

    // case 3: speed recovers on every schedule segment
    for kind in [ControllerKind::Nflc, ControllerKind::Inflc, ControllerKind::Lqg] {
        let sc = Scenario::case(3, kind)?;
        let (trace, _, _) = run_case(&cc, &pc, &sc)?;
        let worst = [24.9, 49.9, 74.9, 99.9]
            .iter()
            .map(|&te| (trace.samples[(te / sc.dt).round() as usize].w - 1.0).abs())
            .fold(0.0, f64::max);
        v.record(worst < 5e-3, format!("case 3 {}: segment-end speed deviation {worst:.2e}", kind.name()));
    }

    // cases 4/5: published steady-state errors within ±50%
    let vt1_pub = [0.0012, 0.00233, 0.00013, 0.00025];
    let vt2_pub = [0.00129, 0.00194, 0.00401, 0.00037];
    let d2_pub = [0.00076, 0.00684, 0.00854, 0.00066];
    let mut vt1 = [0.0; 4];
    let mut vt2 = [0.0; 4];
    for (i, kind) in all.iter().enumerate() {
        let (_, m1, _) = run_case(&cc, &pc, &Scenario::case(4, *kind)?)?;
        let (_, m2, _) = run_case(&cc, &pc, &Scenario::case(5, *kind)?)?;
        vt1[i] = m1.sse_vt;
        vt2[i] = m2.sse_vt;
        let checks = [
            ("OP I V_t", m1.sse_vt, vt1_pub[i]),
            ("OP II V_t", m2.sse_vt, vt2_pub[i]),
            ("OP II delta", m2.sse_delta, d2_pub[i]),
        ];
        for (what, got, pub_v) in checks {
            let rel = (got - pub_v).abs() / pub_v;
            v.record(
                rel <= 0.5,
                format!("table 3 {} {what}: computed {got:.2e}, published {pub_v:.2e}", kind.name()),
            );
        }
    }
    let best1 = (0..4).min_by(|&a, &b| vt1[a].total_cmp(&vt1[b])).unwrap();
    let best2 = (0..4).min_by(|&a, &b| vt2[a].total_cmp(&vt2[b])).unwrap();
    v.record(all[best1] == ControllerKind::Lqg, "table 3 ordering: LQG/LTR best V_t at OP I".into());
    v.record(all[best2] == ControllerKind::Lqr, "table 3 ordering: LQR best V_t at OP II".into());

    let mut s = format!("config_hash = {:016x}\n\n", cfg.hash());
    for line in &v.lines {
        s.push_str(line);
        s.push('\n');
    }
    let _ = writeln!(s, "\n{} checks, {} failed", v.lines.len(), v.failures);
    print!("{s}");
    write_out(out, "report.txt", &s)?;
    if v.failures > 0 {
        return Err(CliError::Mismatch(format!(
            "{} of {} checks failed (see report.txt)",
            v.failures,
            v.lines.len()
        )));
    }
    Ok(())
}
