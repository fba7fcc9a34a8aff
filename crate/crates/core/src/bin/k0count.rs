use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use k0count::classes::{sym_power_class, MotivicClass};
use k0count::error::{Error, Result};
use k0count::ffcount::{
    oracle_orbit_count, ExplicitVariety, GroupAction, Numeric, Piece, Symbolic,
};
use k0count::identities;
use k0count::polydiag;
use k0count::suite::{self, Format, RunConfig, SpaceSpec, Suite, SCHEMA_VERSION};
use k0count::PermGroup;

#[derive(Parser)]
#[command(
    name = "k0count",
    version,
    about = "Grothendieck-ring class calculus checked by finite-field point counts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and scenario files.
    Verify {
        /// all, quotients, strata, polydiagonal, zeta, oracle
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
        /// Prime powers; defaults to each suite's grid.
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[arg(long)]
        scenario: Vec<PathBuf>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = k0count::ffcount::DEFAULT_BUDGET)]
        budget: u64,
        /// Number of seeded oracle instances.
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
    /// Count #(X^n/S_n), optionally #(X<n>/S_n) and the enumeration oracle.
    Count {
        /// `affine:2`, `projective:1`, `torus:1`, `point`, or a JSON variety
        /// such as `{"class":"1 + 2*L","dim":1}`.
        #[arg(long = "X")]
        x: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Also count the polydiagonal compactification X<n>.
        #[arg(long)]
        tower: bool,
        /// Cross-check by explicit enumeration.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = k0count::ffcount::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalize a class, reduce it mod L, evaluate it and take Sym^n.
    Class {
        expr: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients of the zeta series and their point counts.
    Zeta {
        #[arg(long)]
        class: String,
        #[arg(long = "N")]
        n_max: usize,
        #[arg(long, value_delimiter = ',')]
        q: Vec<u64>,
        #[arg(long, default_value = "text")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe a check: its identity, statement and scenario schema.
    Explain {
        check: String,
        #[arg(long, default_value = "text")]
        format: String,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Inconsistent(e.to_string()))
}

fn parse_space(s: &str) -> Result<SpaceSpec> {
    if s.trim_start().starts_with('{') {
        return serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()));
    }
    let (kind, dim) = match s.split_once(':') {
        Some((k, d)) => (
            k,
            d.parse()
                .map_err(|_| Error::Parse(format!("bad dimension in `{s}`")))?,
        ),
        None => (s, 0),
    };
    Ok(SpaceSpec {
        kind: Some(kind.to_string()),
        dim: Some(dim),
        ..SpaceSpec::default()
    })
}

/// Enumerable model of `X^n/S_n` or `X<n>/S_n`, when one exists.
fn oracle_model(space: &SpaceSpec, n: usize, tower: bool) -> Option<ExplicitVariety> {
    let dim = space.dim.unwrap_or(0);
    let kind = space.kind.as_deref()?;
    if tower {
        return (kind == "affine").then_some(ExplicitVariety::Polydiagonal { dim, n });
    }
    let piece = match kind {
        "affine" => Piece::Affine(dim),
        "projective" => Piece::Projective(dim),
        "torus" => Piece::Torus(dim),
        _ => return None,
    };
    Some(ExplicitVariety::Power {
        factor: vec![piece],
        group: PermGroup::symmetric(n).ok()?,
    })
}

#[derive(Serialize)]
struct CountRow {
    q: u64,
    power_quotient: i128,
    tower_quotient: Option<i128>,
    oracle: Option<i128>,
    field_modulus: Option<String>,
}

#[allow(clippy::too_many_arguments)]
fn count(
    x: &str,
    n: usize,
    qs: &[u64],
    tower: bool,
    oracle: bool,
    budget: u64,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<i32> {
    let spec = parse_space(x)?;
    let seq = spec.sequence()?;
    let action = GroupAction::symmetric_power(seq.clone(), n)?;
    let space = if tower {
        Some(spec.tower_space()?)
    } else {
        None
    };
    let model = if oracle {
        Some(oracle_model(&spec, n, tower).ok_or_else(|| {
            Error::Unsupported(
                "the oracle covers affine, projective and torus factors (affine for X<n>)".into(),
            )
        })?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for &q in qs {
        action.validate(q)?;
        let power_quotient = action.burnside(&Numeric { q })?;
        let tower_quotient = match &space {
            Some(s) => Some(polydiag::polydiagonal_quotient(&Numeric { q }, s, n)?),
            None => None,
        };
        let (oracle_count, field_modulus) = match &model {
            Some(m) => {
                let r = oracle_orbit_count(m, q, budget)?;
                (Some(r.count), Some(r.field.modulus_string()))
            }
            None => (None, None),
        };
        rows.push(CountRow {
            q,
            power_quotient,
            tower_quotient,
            oracle: oracle_count,
            field_modulus,
        });
    }
    let symbolic = action.burnside(&Symbolic).ok();
    let symbolic_tower = space
        .as_ref()
        .and_then(|s| polydiag::polydiagonal_quotient(&Symbolic, s, n).ok());
    let mismatch = rows.iter().any(|r| {
        let target = r.tower_quotient.unwrap_or(r.power_quotient);
        r.oracle.is_some_and(|o| o != target)
    });
    let text = match format {
        Format::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "X": x,
            "n": n,
            "class_power_quotient": symbolic.as_ref().map(|c| c.to_string()),
            "class_tower_quotient": symbolic_tower.as_ref().map(|c| c.to_string()),
            "counts": rows,
        }))?,
        Format::Csv => {
            let mut s = String::from("q,power_quotient,tower_quotient,oracle\n");
            for r in &rows {
                let opt = |v: Option<i128>| v.map(|v| v.to_string()).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    r.q,
                    r.power_quotient,
                    opt(r.tower_quotient),
                    opt(r.oracle)
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            if let Some(c) = &symbolic {
                let _ = writeln!(s, "[X^{n}/S_{n}] counts as {c}");
            }
            if let Some(c) = &symbolic_tower {
                let _ = writeln!(s, "[X<{n}>/S_{n}] counts as {c}");
            }
            for r in &rows {
                let _ = write!(s, "q={}  #(X^{n}/S_{n}) = {}", r.q, r.power_quotient);
                if let Some(t) = r.tower_quotient {
                    let _ = write!(s, "  #(X<{n}>/S_{n}) = {t}");
                }
                if let (Some(o), Some(m)) = (r.oracle, &r.field_modulus) {
                    let _ = write!(s, "  oracle = {o} over F_p[x]/({m})");
                }
                s.push('\n');
            }
            s
        }
    };
    emit(&text, out)?;
    Ok(if mismatch {
        suite::EXIT_FAIL
    } else {
        suite::EXIT_PASS
    })
}

fn class(
    expr: &str,
    n: Option<usize>,
    qs: &[u64],
    format: Format,
    out: Option<&PathBuf>,
) -> Result<i32> {
    let c: MotivicClass = expr.parse()?;
    let sym = n.map(|n| sym_power_class(&c, n)).transpose()?;
    let evals = qs
        .iter()
        .map(|&q| {
            let sym_count = sym
                .as_ref()
                .map(|s| s.evaluate_pure(q as i128))
                .transpose()?;
            Ok((q, c.evaluate_pure(q as i128)?, sym_count))
        })
        .collect::<Result<Vec<_>>>()?;
    let text = match format {
        Format::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "class": c.to_string(),
            "json": c,
            "mod_L": c.mod_l().to_string(),
            "n": n,
            "sym": sym.as_ref().map(|s| s.to_string()),
            "counts": evals.iter().map(|(q, v, s)| json!({"q": q, "count": v, "sym_count": s})).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let mut s = String::from("q,count,sym_count\n");
            for (q, v, sc) in &evals {
                let _ = writeln!(
                    s,
                    "{q},{v},{}",
                    sc.map(|x| x.to_string()).unwrap_or_default()
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!("class  {c}\nmod L  {}\n", c.mod_l());
            if let (Some(n), Some(p)) = (n, &sym) {
                let _ = writeln!(s, "Sym^{n}  {p}");
            }
            for (q, v, sc) in &evals {
                match (n, sc) {
                    (Some(n), Some(x)) => {
                        let _ = writeln!(s, "q={q}  {v}  Sym^{n}: {x}");
                    }
                    _ => {
                        let _ = writeln!(s, "q={q}  {v}");
                    }
                }
            }
            s
        }
    };
    emit(&text, out)?;
    Ok(suite::EXIT_PASS)
}

fn zeta(
    class: &str,
    n_max: usize,
    qs: &[u64],
    format: Format,
    out: Option<&PathBuf>,
) -> Result<i32> {
    let c: MotivicClass = class.parse()?;
    let rows = suite::zeta_table(&c, n_max, qs)?;
    let text = match format {
        Format::Json => to_json(&json!({
            "schema": SCHEMA_VERSION,
            "class": c.to_string(),
            "rows": rows.iter().map(|r| json!({
                "n": r.n,
                "class": r.class.to_string(),
                "counts": r.counts,
            })).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let mut s = String::from("n,class,q,count\n");
            for r in &rows {
                for (q, v) in &r.counts {
                    let _ = writeln!(s, "{},\"{}\",{q},{v}", r.n, r.class);
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &rows {
                let counts: Vec<String> = r
                    .counts
                    .iter()
                    .map(|(q, v)| format!("q={q}: {v}"))
                    .collect();
                let _ = writeln!(s, "[Sym^{} Z] = {}   {}", r.n, r.class, counts.join("  "));
            }
            s
        }
    };
    emit(&text, out)?;
    Ok(suite::EXIT_PASS)
}

fn explain(check: &str, format: Format) -> Result<i32> {
    let info = identities::describe(check).ok_or_else(|| Error::UnknownCheck(check.to_string()))?;
    let text = match format {
        Format::Json => to_json(&info)?,
        _ => format!(
            "{}\n  identity:  {}\n  checked:   {}\n  scenario:  {}\n",
            info.name, info.formula, info.statement, info.scenario_example
        ),
    };
    emit(&text, None)?;
    Ok(suite::EXIT_PASS)
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify {
            suite,
            q,
            scenario,
            format,
            out,
            seed,
            budget,
            instances,
        } => {
            let config = RunConfig {
                suites: suite
                    .iter()
                    .map(|s| s.parse::<Suite>())
                    .collect::<Result<_>>()?,
                q_list: q,
                scenario_paths: scenario,
                format: format.parse()?,
                out,
                seed,
                budget,
                oracle_instances: instances,
            };
            let report = suite::run(&config)?;
            emit(&suite::render(&report, config.format)?, config.out.as_ref())?;
            Ok(report.exit_code())
        }
        Command::Count {
            x,
            n,
            q,
            tower,
            oracle,
            budget,
            format,
            out,
        } => count(
            &x,
            n,
            &q,
            tower,
            oracle,
            budget,
            format.parse()?,
            out.as_ref(),
        ),
        Command::Class {
            expr,
            n,
            q,
            format,
            out,
        } => class(&expr, n, &q, format.parse()?, out.as_ref()),
        Command::Zeta {
            class,
            n_max,
            q,
            format,
            out,
        } => zeta(&class, n_max, &q, format.parse()?, out.as_ref()),
        Command::Explain { check, format } => explain(&check, format.parse()?),
    }
}

fn main() -> ExitCode {
    let code = match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            suite::exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
