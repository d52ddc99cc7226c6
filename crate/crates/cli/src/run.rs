//! Request execution: validation, computation, rendering.

use crate::output::{render_csv, render_json, Cell, Table};
use crate::{BranchArg, Command, CommonArgs, FormatArg, OracleArg, PotentialArg};
use dirac_bound::eckart::{eckart_nonrel, eckart_pair, eckart_spectrum, EckartLevel};
use dirac_bound::hulthen::{
    hulthen_nonrel, hulthen_pair, hulthen_spectrum, HulthenLevel, NormalizedPair,
};
use dirac_bound::model::{bound_condition_holds, derive, Branch, ProblemParams};
use dirac_bound::oracle::{dirac_spectrum_shooting, fd_spectrum, OracleConfig};
use dirac_bound::reduction::{OrbitalTerm, PotentialProfile};
use dirac_bound::{eckart, hulthen, Error};
use serde_json::json;
use std::fmt;

#[derive(Debug)]
pub enum CliError {
    InvalidParams(String),
    NoBoundLevels(String),
    OracleFailure(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::InvalidParams(_) => "InvalidParams",
            CliError::NoBoundLevels(_) => "NoBoundLevels",
            CliError::OracleFailure(_) => "OracleFailure",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::InvalidParams(_) => 2,
            CliError::NoBoundLevels(_) => 3,
            CliError::OracleFailure(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::InvalidParams(s)
            | CliError::NoBoundLevels(s)
            | CliError::OracleFailure(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidStrength { .. }
            | Error::InvalidKappa(_)
            | Error::InvalidLambda(_)
            | Error::InvalidMass(_)
            | Error::InvalidConfig => CliError::InvalidParams(e.to_string()),
            Error::NoBoundLevels { .. } | Error::IndexBeyondSpectrum { .. } => {
                CliError::NoBoundLevels(e.to_string())
            }
            other => CliError::OracleFailure(other.to_string()),
        }
    }
}

pub enum RequestKind {
    Spectrum,
    Wavefunction { level: u32, grid: Option<String> },
    Oracle { which: OracleArg },
    Compare { sweep_lambda: Option<Vec<f64>> },
    Limit { sweep_lambda: Option<Vec<f64>> },
}

pub struct Request {
    pub kind: RequestKind,
    pub potential: PotentialArg,
    pub mass: f64,
    pub lambda: f64,
    pub v0: f64,
    pub kappa: i32,
    pub branch: BranchArg,
    pub format: FormatArg,
    pub out: Option<std::path::PathBuf>,
    pub tol: f64,
}

impl Request {
    pub fn from_command(cmd: Command) -> Self {
        let (kind, common) = match cmd {
            Command::Spectrum { common } => (RequestKind::Spectrum, common),
            Command::Wavefunction {
                common,
                level,
                grid,
            } => (RequestKind::Wavefunction { level, grid }, common),
            Command::Oracle { common, oracle } => (RequestKind::Oracle { which: oracle }, common),
            Command::Compare {
                common,
                sweep_lambda,
            } => (RequestKind::Compare { sweep_lambda }, common),
            Command::Limit {
                common,
                sweep_lambda,
            } => (RequestKind::Limit { sweep_lambda }, common),
        };
        Self::new(kind, common)
    }

    fn new(kind: RequestKind, c: CommonArgs) -> Self {
        Self {
            kind,
            potential: c.potential,
            mass: c.mass,
            lambda: c.lambda,
            v0: c.v0,
            kappa: c.kappa,
            branch: c.branch,
            format: c.format,
            out: c.out,
            tol: c.tol,
        }
    }

    fn params(&self) -> Result<ProblemParams, CliError> {
        ProblemParams::new(self.mass, self.lambda, self.v0, self.kappa).map_err(CliError::from)
    }

    fn branch(&self) -> Branch {
        match self.branch {
            BranchArg::Pos => Branch::Positive,
            BranchArg::Neg => Branch::Negative,
        }
    }

    fn profile(&self, params: &ProblemParams, orbital: OrbitalTerm) -> PotentialProfile {
        match self.potential {
            PotentialArg::Hulthen => PotentialProfile::hulthen(params, orbital),
            PotentialArg::Eckart => PotentialProfile::eckart(params, orbital),
        }
    }

    fn config(&self, params: &ProblemParams) -> Result<OracleConfig, CliError> {
        let mut cfg = OracleConfig::for_params(params);
        cfg.eps_tol = self.tol;
        cfg.validate().map_err(CliError::from)?;
        Ok(cfg)
    }

    fn request_json(&self) -> serde_json::Value {
        json!({
            "command": match &self.kind {
                RequestKind::Spectrum => "spectrum",
                RequestKind::Wavefunction { .. } => "wavefunction",
                RequestKind::Oracle { .. } => "oracle",
                RequestKind::Compare { .. } => "compare",
                RequestKind::Limit { .. } => "limit",
            },
            "potential": match self.potential {
                PotentialArg::Hulthen => "hulthen",
                PotentialArg::Eckart => "eckart",
            },
            "mass": self.mass,
            "lambda": self.lambda,
            "v0": self.v0,
            "kappa": self.kappa,
            "branch": match self.branch { BranchArg::Pos => "pos", BranchArg::Neg => "neg" },
            "tol": self.tol,
        })
    }
}

/// Warnings surfaced in every output: degenerate rotation, unattached
/// lowest entry, strong screening.
fn standard_warnings(params: &ProblemParams) -> Vec<String> {
    let mut out = Vec::new();
    if params.is_critical() {
        out.push(
            "critical coupling |v0| = lambda*|kappa|: lowest level sits at zero energy".into(),
        );
    }
    if params.kappa > 0 {
        out.push(
            "kappa > 0: the lowest energy-formula entry belongs to no spinor and is omitted".into(),
        );
    }
    if params.lambda * (params.kappa.unsigned_abs() as f64) > params.mass {
        out.push("strong screening (lambda*|kappa| > m): closed-form level count undefined; levels from the termination check".into());
    }
    out
}

enum Levels {
    Hulthen(Vec<HulthenLevel>),
    Eckart(Vec<EckartLevel>),
}

fn spectrum_levels(
    req: &Request,
    params: &ProblemParams,
    branch: Branch,
) -> Result<Levels, CliError> {
    Ok(match req.potential {
        PotentialArg::Hulthen => Levels::Hulthen(hulthen_spectrum(params, branch)?),
        PotentialArg::Eckart => Levels::Eckart(eckart_spectrum(params, branch)?),
    })
}

pub fn run(req: &Request) -> Result<String, CliError> {
    let params = req.params()?;
    let warnings = standard_warnings(&params);
    let (table, metadata, warnings) = match &req.kind {
        RequestKind::Spectrum => spectrum_table(req, &params, warnings)?,
        RequestKind::Wavefunction { level, grid } => {
            wavefunction_table(req, &params, *level, grid.as_deref(), warnings)?
        }
        RequestKind::Oracle { which } => oracle_table(req, &params, *which, warnings)?,
        RequestKind::Compare { sweep_lambda } => {
            compare_table(req, &params, sweep_lambda.as_deref(), warnings)?
        }
        RequestKind::Limit { sweep_lambda } => {
            limit_table(req, &params, sweep_lambda.as_deref(), warnings)?
        }
    };
    Ok(match req.format {
        FormatArg::Csv => render_csv(&table, &metadata, &warnings),
        FormatArg::Json => render_json(req.request_json(), &table, &metadata, &warnings),
    })
}

type Rendered = (Table, Vec<(String, String)>, Vec<String>);

fn spectrum_table(
    req: &Request,
    params: &ProblemParams,
    warnings: Vec<String>,
) -> Result<Rendered, CliError> {
    let levels = spectrum_levels(req, params, req.branch())?;
    let (mut table, count) = match &levels {
        Levels::Hulthen(ls) => {
            let mut t = Table::new(vec![
                "n",
                "spinor_index",
                "epsilon",
                "alpha_n",
                "bound_check",
            ]);
            for l in ls {
                t.push(vec![
                    Cell::U32(l.n),
                    Cell::U32(l.spinor_index),
                    Cell::F64(l.epsilon),
                    Cell::F64(l.alpha_n),
                    Cell::Bool(bound_condition_holds(l.epsilon, params)),
                ]);
            }
            (t, ls.len())
        }
        Levels::Eckart(ls) => {
            let mut t = Table::new(vec![
                "n",
                "spinor_index",
                "epsilon",
                "alpha_n",
                "beta_n",
                "bound_check",
            ]);
            for l in ls {
                t.push(vec![
                    Cell::U32(l.n),
                    Cell::U32(l.spinor_index),
                    Cell::F64(l.epsilon),
                    Cell::F64(l.alpha_n),
                    Cell::F64(l.beta_n),
                    Cell::Bool(bound_condition_holds(l.epsilon, params)),
                ]);
            }
            (t, ls.len())
        }
    };
    if count == 0 {
        return Err(CliError::NoBoundLevels(format!(
            "no bound levels on the {} branch",
            match req.branch {
                BranchArg::Pos => "positive",
                BranchArg::Neg => "negative",
            }
        )));
    }
    table.rows.sort_by(|a, b| match (&a[2], &b[2]) {
        (Cell::F64(x), Cell::F64(y)) => x.total_cmp(y),
        _ => std::cmp::Ordering::Equal,
    });
    Ok((table, vec![("levels".into(), count.to_string())], warnings))
}

fn parse_grid(spec: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::InvalidParams(format!(
            "grid must be rmin:rmax:npts, got '{spec}'"
        )));
    }
    let rmin: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::InvalidParams(format!("bad rmin '{}'", parts[0])))?;
    let rmax: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::InvalidParams(format!("bad rmax '{}'", parts[1])))?;
    let npts: usize = parts[2]
        .parse()
        .map_err(|_| CliError::InvalidParams(format!("bad npts '{}'", parts[2])))?;
    if !rmin.is_finite() || rmin <= 0.0 || !rmax.is_finite() || rmax <= rmin || npts < 2 {
        return Err(CliError::InvalidParams(format!(
            "grid must satisfy 0 < rmin < rmax and npts >= 2, got '{spec}'"
        )));
    }
    Ok((rmin, rmax, npts))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(|i| a + h * i as f64).collect()
}

fn wavefunction_table(
    req: &Request,
    params: &ProblemParams,
    level: u32,
    grid: Option<&str>,
    mut warnings: Vec<String>,
) -> Result<Rendered, CliError> {
    // negative-branch states are the mapped positive states of the
    // charge-conjugated problem with components swapped
    let (work_params, swap) = match req.branch() {
        Branch::Positive => (*params, false),
        Branch::Negative => (params.charge_conjugate(), true),
    };
    type PairBuilder = Box<dyn Fn(&[f64]) -> Result<NormalizedPair, Error>>;
    let (decay, build): (f64, PairBuilder) = match req.potential {
        PotentialArg::Hulthen => {
            let spec = hulthen_spectrum(&work_params, Branch::Positive)?;
            let lvl = *spec
                .iter()
                .find(|l| l.n == level)
                .ok_or_else(|| CliError::NoBoundLevels(format!("no level with n = {level}")))?;
            let decay = work_params.lambda * lvl.alpha_n;
            (
                decay,
                Box::new(move |g: &[f64]| hulthen_pair(&work_params, &lvl, g)),
            )
        }
        PotentialArg::Eckart => {
            let spec = eckart_spectrum(&work_params, Branch::Positive)?;
            let lvl = *spec
                .iter()
                .find(|l| l.n == level)
                .ok_or_else(|| CliError::NoBoundLevels(format!("no level with n = {level}")))?;
            let decay = 2.0 * work_params.lambda * lvl.beta_n;
            (
                decay,
                Box::new(move |g: &[f64]| eckart_pair(&work_params, &lvl, g)),
            )
        }
    };
    let (rmin, rmax, npts) = match grid {
        Some(s) => parse_grid(s)?,
        None => (1e-6 / params.lambda, 40.0 / decay, 2001),
    };
    let r = linspace(rmin, rmax, npts);
    let pair = build(&r).map_err(CliError::from)?;
    // the negative-energy map swaps the components in the original basis
    // (the swapped pair solves the requested first-order system exactly);
    // the rotated columns follow by the requested problem's own rotation,
    // whose angle the conjugation leaves unchanged
    let (half_s, half_c) = (0.5 * derive(params).map_err(CliError::from)?.theta).sin_cos();
    let mut table = Table::new(vec!["r", "phi_plus", "phi_minus", "psi_plus", "psi_minus"]);
    #[allow(clippy::needless_range_loop)]
    for i in 0..r.len() {
        let (psi_p, psi_m) = if swap {
            (pair.original.lower[i], pair.original.upper[i])
        } else {
            (pair.original.upper[i], pair.original.lower[i])
        };
        let (phi_p, phi_m) = if swap {
            (
                half_c * psi_p + half_s * psi_m,
                -half_s * psi_p + half_c * psi_m,
            )
        } else {
            (pair.rotated.upper[i], pair.rotated.lower[i])
        };
        table.push(vec![
            Cell::F64(r[i]),
            Cell::F64(phi_p),
            Cell::F64(phi_m),
            Cell::F64(psi_p),
            Cell::F64(psi_m),
        ]);
    }
    if swap {
        warnings.push("negative branch: components are the mapped conjugate solution".into());
    }
    let metadata = vec![
        (
            "normalization_constant".into(),
            pair.normalization.to_string(),
        ),
        ("grid".into(), format!("{rmin}:{rmax}:{npts}")),
    ];
    Ok((table, metadata, warnings))
}

fn oracle_table(
    req: &Request,
    params: &ProblemParams,
    which: OracleArg,
    warnings: Vec<String>,
) -> Result<Rendered, CliError> {
    let cfg = req.config(params)?;
    let mut table = Table::new(vec!["k", "epsilon", "nodes"]);
    let mut metadata = vec![
        ("num_points".into(), cfg.num_points.to_string()),
        ("eps_tol".into(), cfg.eps_tol.to_string()),
        ("scan_points".into(), cfg.scan_points.to_string()),
    ];
    match which {
        OracleArg::Fd => {
            let profile = req.profile(params, OrbitalTerm::ApproxOrbital);
            let roots = fd_spectrum(&profile, params, &cfg).map_err(CliError::from)?;
            for (k, r) in roots.iter().enumerate() {
                table.push(vec![
                    Cell::Usize(k),
                    Cell::F64(r.energy),
                    Cell::Usize(r.nodes),
                ]);
            }
            metadata.push((
                "solver".into(),
                "sturm-bisection second-order reduction".into(),
            ));
            metadata.push(("refinement".into(), "richardson N,2N".into()));
        }
        OracleArg::ShootExact | OracleArg::ShootApprox => {
            let orbital = if which == OracleArg::ShootExact {
                OrbitalTerm::ExactOrbital
            } else {
                OrbitalTerm::ApproxOrbital
            };
            let profile = req.profile(params, orbital);
            let roots = dirac_spectrum_shooting(&profile, params, &cfg).map_err(CliError::from)?;
            for (k, r) in roots.iter().enumerate() {
                table.push(vec![
                    Cell::Usize(k),
                    Cell::F64(r.energy),
                    Cell::Usize(r.nodes),
                ]);
            }
            metadata.push((
                "solver".into(),
                "phase-function shooting first-order system".into(),
            ));
        }
    }
    if table.rows.is_empty() {
        return Err(CliError::NoBoundLevels(
            "oracle found no bound levels".into(),
        ));
    }
    Ok((table, metadata, warnings))
}

fn analytic_for(req: &Request, params: &ProblemParams) -> Result<Vec<(u32, usize, f64)>, CliError> {
    // (formula index, node count, energy) on the requested branch
    Ok(match spectrum_levels(req, params, req.branch())? {
        Levels::Hulthen(ls) => ls
            .iter()
            .map(|l| (l.n, l.spinor_index as usize, l.epsilon))
            .collect(),
        Levels::Eckart(ls) => ls
            .iter()
            .map(|l| (l.n, l.spinor_index as usize, l.epsilon))
            .collect(),
    })
}

fn compare_table(
    req: &Request,
    params: &ProblemParams,
    sweep: Option<&[f64]>,
    warnings: Vec<String>,
) -> Result<Rendered, CliError> {
    let mu = params.mu();
    let lambdas: Vec<f64> = match sweep {
        Some(s) if !s.is_empty() => s.to_vec(),
        _ => vec![params.lambda],
    };
    let mut table = Table::new(vec![
        "lambda",
        "n",
        "analytic",
        "approx_oracle",
        "exact_oracle",
        "abs_dev_approx",
        "rel_dev_approx",
        "abs_dev_exact",
        "rel_dev_exact",
    ]);
    for &lam in &lambdas {
        // the sweep holds mu = v0/lambda fixed
        let p =
            ProblemParams::new(params.mass, lam, mu * lam, params.kappa).map_err(CliError::from)?;
        let cfg = req.config(&p)?;
        let analytic = analytic_for(req, &p)?;
        let approx_profile = req.profile(&p, OrbitalTerm::ApproxOrbital);
        let fd_roots = fd_spectrum(&approx_profile, &p, &cfg).map_err(CliError::from)?;
        let exact_profile = req.profile(&p, OrbitalTerm::ExactOrbital);
        let shoot_roots =
            dirac_spectrum_shooting(&exact_profile, &p, &cfg).map_err(CliError::from)?;
        for (n, nodes, eps) in &analytic {
            let approx = fd_roots
                .iter()
                .find(|r| r.nodes == *nodes && (r.energy - eps).abs() < 0.1 * p.mass)
                .map(|r| r.energy);
            let exact = shoot_roots
                .iter()
                .find(|r| r.nodes == *nodes && (r.energy * eps.signum() > 0.0))
                .map(|r| r.energy);
            let cell = |v: Option<f64>| v.map_or(Cell::Empty, Cell::F64);
            let dev = |v: Option<f64>| v.map_or(Cell::Empty, |x| Cell::F64((x - eps).abs()));
            let reldev =
                |v: Option<f64>| v.map_or(Cell::Empty, |x| Cell::F64((x - eps).abs() / eps.abs()));
            table.push(vec![
                Cell::F64(lam),
                Cell::U32(*n),
                Cell::F64(*eps),
                cell(approx),
                cell(exact),
                dev(approx),
                reldev(approx),
                dev(exact),
                reldev(exact),
            ]);
        }
    }
    let metadata = vec![("mu".into(), mu.to_string())];
    Ok((table, metadata, warnings))
}

fn limit_table(
    req: &Request,
    params: &ProblemParams,
    sweep: Option<&[f64]>,
    warnings: Vec<String>,
) -> Result<Rendered, CliError> {
    let mu = params.mu();
    let m = params.mass;
    let lambdas: Vec<f64> = match sweep {
        Some(s) if !s.is_empty() => s.to_vec(),
        _ => vec![params.lambda, params.lambda * 0.1, params.lambda * 0.01],
    };
    let gamma_abs = derive(params).map_err(CliError::from)?.gamma.abs();
    let epsilon_at = |p: &ProblemParams, n: u32| -> Result<f64, CliError> {
        Ok(match req.potential {
            PotentialArg::Hulthen => hulthen::hulthen_epsilon(p, n)?,
            PotentialArg::Eckart => eckart::eckart_epsilon(p, n)?,
        })
    };
    let mut table = Table::new(vec![
        "kind",
        "lambda",
        "n",
        "value",
        "reference",
        "deviation",
        "ratio_prev",
    ]);
    // coulomb-limit rows: fixed mu, lambda -> 0
    for n in 0..3u32 {
        let coulomb = m / (1.0 + mu * mu / (n as f64 + gamma_abs).powi(2)).sqrt();
        let mut prev: Option<f64> = None;
        for &lam in &lambdas {
            let p = ProblemParams::new(m, lam, mu * lam, params.kappa).map_err(CliError::from)?;
            let eps = match epsilon_at(&p, n) {
                Ok(e) => e,
                Err(CliError::NoBoundLevels(_)) => continue,
                Err(e) => return Err(e),
            };
            let dev = (eps - coulomb).abs();
            let ratio = prev.map(|d| d / dev.max(1e-300));
            table.push(vec![
                Cell::Text("coulomb".into()),
                Cell::F64(lam),
                Cell::U32(n),
                Cell::F64(eps),
                Cell::F64(coulomb),
                Cell::F64(dev),
                ratio.map_or(Cell::Empty, Cell::F64),
            ]);
            prev = Some(dev);
        }
    }
    // nonrelativistic rows at the requested lambda
    let ell = if params.kappa > 0 {
        params.kappa as u32
    } else {
        (-params.kappa - 1) as u32
    };
    for n in 0..3u32 {
        // for kappa > 0 the formula index is shifted by one against the
        // nonrelativistic radial number
        let (rel_index, nr_index) = if params.kappa > 0 { (n + 1, n) } else { (n, n) };
        let eps = match epsilon_at(params, rel_index) {
            Ok(e) => e,
            Err(CliError::NoBoundLevels(_)) => continue,
            Err(e) => return Err(e),
        };
        let e_nr = match req.potential {
            PotentialArg::Hulthen => hulthen_nonrel(params.v0, params.lambda, nr_index, ell),
            PotentialArg::Eckart => eckart_nonrel(params.v0, params.lambda, nr_index, ell),
        };
        let value = eps - m;
        let dev = (value - e_nr).abs() / e_nr.abs().max(1e-300);
        table.push(vec![
            Cell::Text("nonrel".into()),
            Cell::F64(params.lambda),
            Cell::U32(nr_index),
            Cell::F64(value),
            Cell::F64(e_nr),
            Cell::F64(dev),
            Cell::Empty,
        ]);
    }
    let metadata = vec![("mu".into(), mu.to_string())];
    Ok((table, metadata, warnings))
}
