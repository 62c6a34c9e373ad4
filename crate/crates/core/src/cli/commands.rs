use std::fmt::Write as _;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use super::{
    AnalyzeAction, AnalyzeArgs, BoundsArgs, ChainArgs, Cli, CliError, Command, Format, HopfAction,
    HopfArgs, Method, Outcome, SimulateArgs,
};
use crate::chain_extract::{build_chain_spec, ChainSpec};
use crate::hopf::{antipode, coproduct, hopf_square, verify_axioms, AlgebraElement, Monomial};
use crate::markov::{
    distribution_dp, distribution_formula, distribution_formula_general, hitting_time_closed,
    hitting_time_general, hitting_time_matrix, phase_bounds_to_csv, phase_rows_to_csv, phase_scan,
    phase_scan_enclosed, AlphaLaw, Distribution, ForwardLaw,
};
use crate::martingale::{second_moment_y, variance_ledger, verify_one_step};
use crate::montecarlo::{
    bound_experiment, estimate_ratio, sample_trajectory, GrowthChain, LogBound,
};
use crate::qcalc::{format_rational, Rational};

type CmdResult = Result<Outcome, CliError>;

fn json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    text
}

fn ok(body: String) -> Outcome {
    Outcome {
        body,
        summary: None,
        passed: true,
        failure: None,
    }
}

fn missing(flag: &str, what: &str) -> CliError {
    CliError::Usage(format!("{what} requires {flag}"))
}

pub fn execute(cli: &Cli) -> CmdResult {
    let format = cli.format.unwrap_or_default();
    match &cli.command {
        Command::Hopf(args) => hopf(args, format),
        Command::Chain(args) => chain(args, format),
        Command::Analyze(args) => analyze(args, format),
        Command::Simulate(args) => simulate(args, format),
        Command::Bounds(args) => bounds(args, format),
    }
}

fn element_csv(x: &AlgebraElement) -> String {
    let mut out = String::from("e,k,coeff\n");
    for (m, c) in x.terms() {
        let _ = writeln!(out, "{},{},{}", m.e, m.k, c);
    }
    out
}

fn element_output(x: &AlgebraElement, format: Format) -> String {
    match format {
        Format::Json => json(x),
        Format::Csv => element_csv(x),
        Format::Text => format!("{x}\n"),
    }
}

fn hopf(args: &HopfArgs, format: Format) -> CmdResult {
    if args.action == HopfAction::Verify {
        let report = verify_axioms(args.max_i, args.max_l.abs());
        let body = match format {
            Format::Json => json(&report),
            Format::Csv => {
                let mut out = String::from("axiom,cases,passed\n");
                for c in &report.checks {
                    let _ = writeln!(out, "{},{},{}", c.axiom, c.cases, c.passed);
                }
                out
            }
            Format::Text => report.to_string(),
        };
        let passed = report.all_passed();
        return Ok(Outcome {
            body,
            summary: Some(format!(
                "axioms: {}",
                if passed { "all pass" } else { "FAIL" }
            )),
            passed,
            failure: (!passed).then(|| "a Hopf axiom failed".to_string()),
        });
    }
    let expr = args
        .expr
        .as_deref()
        .ok_or_else(|| missing("a monomial such as \"E^1 K^0\"", "hopf"))?;
    let m = Monomial::from_str(expr)?;
    let body = match args.action {
        HopfAction::Square => element_output(&hopf_square(m), format),
        HopfAction::Antipode => element_output(&antipode(m), format),
        HopfAction::Coproduct => {
            let t = coproduct(m);
            match format {
                Format::Json => json(&t),
                Format::Text => format!("{t}\n"),
                Format::Csv => {
                    let mut out = String::from("e1,k1,e2,k2,coeff\n");
                    for ([a, b], c) in t.terms() {
                        let _ = writeln!(out, "{},{},{},{},{}", a.e, a.k, b.e, b.k, c);
                    }
                    out
                }
            }
        }
        HopfAction::Verify => unreachable!(),
    };
    Ok(ok(body))
}

fn chain_csv(spec: &ChainSpec) -> String {
    let mut out = String::from("state,target,p\n");
    for row in &spec.rows {
        for m in &row.moves {
            let _ = writeln!(out, "{},{},{}", row.state, m.target, format_rational(&m.p));
        }
    }
    out
}

fn chain(args: &ChainArgs, format: Format) -> CmdResult {
    let spec = build_chain_spec(args.grading, &args.q, args.max_state)?;
    let body = match format {
        Format::Json => json(&spec),
        Format::Csv => chain_csv(&spec),
        Format::Text => {
            let mut out = String::new();
            for row in &spec.rows {
                let ps: Vec<String> = row.moves.iter().map(|m| m.p.to_string()).collect();
                let _ = writeln!(out, "{}: {}", row.state, ps.join(" "));
            }
            out
        }
    };
    Ok(ok(body))
}

fn alpha_law(args: &AnalyzeArgs, what: &str) -> Result<AlphaLaw, CliError> {
    match (&args.alpha, &args.q) {
        (Some(values), _) => AlphaLaw::table(values.clone()).map_err(|source| CliError::Flag {
            flag: "--alpha",
            source,
        }),
        (None, Some(q)) => Ok(AlphaLaw::geometric(q.clone())?),
        (None, None) => Err(missing("--q or --alpha", what)),
    }
}

fn analyze(args: &AnalyzeArgs, format: Format) -> CmdResult {
    match args.action {
        AnalyzeAction::Dist => dist(args, format),
        AnalyzeAction::Hit => hit(args, format),
        AnalyzeAction::Phase => phase(args, format),
        AnalyzeAction::Martingale => martingale(args, format),
        AnalyzeAction::Variance => variance(args, format),
    }
}

fn formula_mass(args: &AnalyzeArgs, law: &AlphaLaw, n: u64, k: u64) -> Result<Rational, CliError> {
    Ok(match (&args.alpha, &args.q) {
        (None, Some(q)) => distribution_formula(q, n, k)?,
        _ => distribution_formula_general(law, n, k)?,
    })
}

fn dist(args: &AnalyzeArgs, format: Format) -> CmdResult {
    let law = alpha_law(args, "analyze dist")?;
    let n = args.n.ok_or_else(|| missing("--n", "analyze dist"))?;
    let distribution = match args.method {
        Method::Dp => distribution_dp(&law, n)?,
        Method::Formula => Distribution {
            time: n,
            mass: (0..=n)
                .map(|k| formula_mass(args, &law, n, k))
                .collect::<Result<_, _>>()?,
        },
    };
    let mut failure = None;
    if args.crosscheck {
        let mut forward = ForwardLaw::new(law.clone());
        'outer: for t in 0..=n {
            forward.advance_to(t)?;
            for k in 0..=t {
                if forward.mass(k) != formula_mass(args, &law, t, k)? {
                    failure = Some(format!("dp and formula differ at (n={t}, k={k})"));
                    break 'outer;
                }
            }
        }
    }
    let body = match format {
        Format::Json => json(&distribution),
        Format::Csv => distribution.to_csv(),
        Format::Text => {
            let mut out = String::new();
            for (k, p) in distribution.mass.iter().enumerate() {
                let _ = writeln!(out, "{k} {p}");
            }
            if args.crosscheck && failure.is_none() {
                out.push_str("crosscheck: pass\n");
            }
            out
        }
    };
    Ok(Outcome {
        body,
        summary: None,
        passed: failure.is_none(),
        failure,
    })
}

#[derive(Serialize)]
struct HittingOutput {
    target: u64,
    #[serde(with = "crate::json::rational")]
    hitting_time: Rational,
    crosscheck: Option<bool>,
}

fn hit(args: &AnalyzeArgs, format: Format) -> CmdResult {
    let law = alpha_law(args, "analyze hit")?;
    let target = args.target.ok_or_else(|| missing("--N", "analyze hit"))?;
    let general = hitting_time_general(&law, target)?;
    let value = match (&args.alpha, &args.q) {
        (None, Some(q)) => hitting_time_closed(q, target)?,
        _ => general.clone(),
    };
    let mut failure = None;
    if args.crosscheck {
        let matrix = if target == 0 {
            general.clone()
        } else {
            hitting_time_matrix(&law, target)?
        };
        if value != general || value != matrix {
            failure = Some(format!(
                "closed {value}, sum {general}, fundamental matrix {matrix} disagree"
            ));
        }
    }
    let output = HittingOutput {
        target,
        hitting_time: value.clone(),
        crosscheck: args.crosscheck.then_some(failure.is_none()),
    };
    let body = match format {
        Format::Json => json(&output),
        Format::Csv => format!(
            "target,time_num,time_den\n{target},{},{}\n",
            value.numer(),
            value.denom()
        ),
        Format::Text => format!("{value}\n"),
    };
    Ok(Outcome {
        body,
        summary: None,
        passed: failure.is_none(),
        failure,
    })
}

fn phase(args: &AnalyzeArgs, format: Format) -> CmdResult {
    let qs = match (&args.q_list, &args.q) {
        (Some(list), _) => list.clone(),
        (None, Some(q)) => vec![q.clone()],
        _ => return Err(missing("--q-list or --q", "analyze phase")),
    };
    let ns = match (&args.n_list, args.n) {
        (Some(list), _) => list.clone(),
        (None, Some(n)) => vec![n],
        _ => return Err(missing("--n-list or --n", "analyze phase")),
    };
    let body = if args.enclose {
        let rows = phase_scan_enclosed(&qs, &ns)?;
        match format {
            Format::Json => json(&rows),
            Format::Csv => phase_bounds_to_csv(&rows),
            Format::Text => rows
                .iter()
                .map(|r| {
                    format!(
                        "q={} n={} {} <= E[X_n]/n <= {}\n",
                        r.q,
                        r.n,
                        decimal(&r.lower),
                        decimal(&r.upper)
                    )
                })
                .collect(),
        }
    } else {
        let rows = phase_scan(&qs, &ns)?;
        match format {
            Format::Json => json(&rows),
            Format::Csv => phase_rows_to_csv(&rows),
            Format::Text => rows
                .iter()
                .map(|r| format!("q={} n={} E[X_n]/n = {}\n", r.q, r.n, decimal(&r.ratio)))
                .collect(),
        }
    };
    Ok(ok(body))
}

fn decimal(r: &Rational) -> String {
    use num_traits::ToPrimitive;
    format!("{:.9}", r.to_f64().unwrap_or(f64::NAN))
}

fn martingale(args: &AnalyzeArgs, format: Format) -> CmdResult {
    let law = alpha_law(args, "analyze martingale")?;
    let max_state = args.max_state.unwrap_or(100);
    let report = verify_one_step(&law, max_state, args.n.unwrap_or(1).max(1))?;
    let body = match format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut out = String::from("state,residual\n");
            for (i, r) in report.residuals.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{}",
                    report.first_state + i as u64,
                    format_rational(r)
                );
            }
            out
        }
        Format::Text => format!("{report}\n"),
    };
    let passed = report.passed();
    Ok(Outcome {
        body,
        summary: None,
        passed,
        failure: report
            .first_failure()
            .map(|x| format!("nonzero one-step residual at x = {x}")),
    })
}

#[derive(Serialize)]
struct VarianceOutput {
    #[serde(with = "crate::json::rational")]
    q: Rational,
    n: u64,
    #[serde(with = "crate::json::rational_vec")]
    terms: Vec<Rational>,
    #[serde(with = "crate::json::rational")]
    variance: Rational,
    crosscheck: Option<bool>,
}

fn variance(args: &AnalyzeArgs, format: Format) -> CmdResult {
    let q = args
        .q
        .clone()
        .ok_or_else(|| missing("--q", "analyze variance"))?;
    let n = args.n.ok_or_else(|| missing("--n", "analyze variance"))?;
    if n == 0 {
        return Err(CliError::Flag {
            flag: "--n",
            source: crate::Error::Precondition("variance ledger needs n >= 1".into()),
        });
    }
    let terms = variance_ledger(&q, n)?;
    let mut partial = Rational::zero();
    let mut partials = Vec::with_capacity(terms.len());
    for t in &terms {
        partial += t;
        partials.push(partial.clone());
    }
    let mut failure = None;
    if args.crosscheck {
        for (i, p) in partials.iter().enumerate() {
            if second_moment_y(&q, i as u64 + 1)? != *p {
                failure = Some(format!("E[Y_n^2] differs from the ledger at n = {}", i + 1));
                break;
            }
        }
    }
    let body = match format {
        Format::Json => json(&VarianceOutput {
            q: q.clone(),
            n,
            terms: terms.clone(),
            variance: partial.clone(),
            crosscheck: args.crosscheck.then_some(failure.is_none()),
        }),
        Format::Csv => {
            let mut out = String::from("i,term,partial_sum\n");
            for (i, (t, p)) in terms.iter().zip(&partials).enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    i + 1,
                    format_rational(t),
                    format_rational(p)
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (i, (t, p)) in terms.iter().zip(&partials).enumerate() {
                let _ = writeln!(out, "{} {} {}", i + 1, t, p);
            }
            out
        }
    };
    Ok(Outcome {
        body,
        summary: None,
        passed: failure.is_none(),
        failure,
    })
}

fn growth_chain(q: &Rational, grading: u32) -> Result<GrowthChain, CliError> {
    Ok(if grading == 1 {
        GrowthChain::Alpha(AlphaLaw::geometric(q.clone())?)
    } else {
        GrowthChain::Spec(
            build_chain_spec(grading, q, 0).map_err(|source| CliError::Flag {
                flag: "--grading",
                source,
            })?,
        )
    })
}

fn simulate(args: &SimulateArgs, format: Format) -> CmdResult {
    let chain = growth_chain(&args.q, args.grading)?;
    if args.path {
        let sample = sample_trajectory(&chain, args.n, args.seed)?;
        let body = match format {
            Format::Json => json(&sample),
            _ => sample.to_csv(),
        };
        let summary = format!(
            "X_{} = {} (seed {})",
            args.n,
            sample.path.last().copied().unwrap_or(0),
            args.seed
        );
        return Ok(Outcome {
            body,
            summary: Some(summary),
            passed: true,
            failure: None,
        });
    }
    if args.traj == 0 {
        return Err(CliError::Flag {
            flag: "--traj",
            source: crate::Error::Precondition("need at least one trajectory".into()),
        });
    }
    let est = estimate_ratio(&chain, args.n, args.traj, args.seed, args.workers)?;
    let summary = format!(
        "E[X_n]/n ~ {:.6} +/- {:.6} (n={}, traj={}, seed={})",
        est.mean_f64, est.standard_error, est.n, est.num_trajectories, est.master_seed
    );
    let body = match format {
        Format::Json => json(&est),
        Format::Csv => format!(
            "n,traj,seed,mean_num,mean_den,mean,stderr\n{},{},{},{},{},{},{}\n",
            est.n,
            est.num_trajectories,
            est.master_seed,
            est.mean.numer(),
            est.mean.denom(),
            est.mean_f64,
            est.standard_error
        ),
        Format::Text => format!("{summary}\n"),
    };
    Ok(Outcome {
        body,
        summary: Some(summary),
        passed: true,
        failure: None,
    })
}

fn bounds(args: &BoundsArgs, format: Format) -> CmdResult {
    let bound = LogBound {
        multiplier: args.multiplier,
        slack: args.slack,
    };
    let report = bound_experiment(&args.q, &args.n, args.traj, args.seed, bound, args.workers)?;
    let summary = report.summary();
    let body = match format {
        Format::Json => json(&report),
        Format::Csv => report.to_csv(),
        Format::Text => format!("{summary}\n{}", report.to_csv()),
    };
    let violations = report.total_violations();
    Ok(Outcome {
        body,
        summary: Some(summary),
        passed: violations == 0,
        failure: (violations > 0).then(|| format!("{violations} log-bound violations")),
    })
}
