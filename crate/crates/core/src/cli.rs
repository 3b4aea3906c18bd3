//! Command-line front end. Every flag can also be set through a
//! `UTSTAR_*` environment variable; explicit flags win.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::acceptance::{self, AcceptanceConfig};
use crate::codim::{self, CodimReport, Method};
use crate::error::{Error, Result};
use crate::grading::{check_shelf_bound, good_sequences, symmetric_subsequences};
use crate::normal::enumerate_basis;
use crate::oracle::{omega_oracle_cost, verify_theorem_identities, DEFAULT_BUDGET};
use crate::scalar::{decimal_half_even, Field};
use crate::utmatrix::InvolutionKind;

#[derive(Parser, Debug)]
#[command(
    name = "utstar",
    version,
    about = "Graded *-identities of upper triangular matrices"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    #[arg(long, global = true, env = "UTSTAR_FORMAT", default_value = "text")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true, env = "UTSTAR_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "UTSTAR_JOBS")]
    pub jobs: Option<usize>,
    /// Cap on brute-force evaluations.
    #[arg(long, global = true, env = "UTSTAR_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    #[arg(long, env = "UTSTAR_N")]
    pub n: usize,
    /// `orth` (transpose-like) or `symp` (symplectic, even n).
    #[arg(long, env = "UTSTAR_INVOLUTION", default_value = "orth")]
    pub involution: InvolutionKind,
    /// `q` or `fp:<odd prime>`.
    #[arg(long, env = "UTSTAR_FIELD", default_value = "q")]
    pub field: Field,
}

/// `a`, `a..=b` or `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MRange {
    pub from: usize,
    pub to: usize,
}

impl MRange {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.from..=self.to
    }
}

impl FromStr for MRange {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad bound {t:?}: {e}"))
        };
        let (from, to) = if let Some((a, b)) = s.split_once("..=") {
            (num(a)?, num(b)?)
        } else if let Some((a, b)) = s.split_once("..") {
            let b = num(b)?;
            (num(a)?, b.checked_sub(1).ok_or("empty range")?)
        } else {
            let a = num(s)?;
            (a, a)
        };
        if from > to {
            return Err(format!("empty range {s:?}"));
        }
        Ok(MRange { from, to })
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Instantiate the ideal generators and check they vanish.
    Identities {
        #[command(flatten)]
        target: Target,
    },
    /// Good degree sequences, their symmetric blocks and the shelf bound.
    Goodseqs {
        #[arg(long, env = "UTSTAR_N")]
        n: usize,
        #[arg(long, env = "UTSTAR_L")]
        l: Option<usize>,
    },
    /// Normal monomials spanning the relatively free algebra in one degree.
    Basis {
        #[command(flatten)]
        target: Target,
        #[arg(long, env = "UTSTAR_L")]
        l: usize,
        #[arg(long, env = "UTSTAR_M")]
        m: usize,
        /// All monomials in the trivial ids, not only multilinear ones.
        #[arg(long)]
        general: bool,
    },
    /// One omega(l, m) value.
    Omega {
        #[command(flatten)]
        target: Target,
        #[arg(long, env = "UTSTAR_L")]
        l: usize,
        #[arg(long, env = "UTSTAR_M")]
        m: usize,
        #[arg(long, env = "UTSTAR_METHOD", default_value = "enumerate")]
        method: Method,
        /// Skip the brute-force cross-check.
        #[arg(long)]
        no_check: bool,
    },
    /// Codimension sequence with per-l breakdown.
    Codim {
        #[command(flatten)]
        target: Target,
        #[arg(long, env = "UTSTAR_M")]
        m: MRange,
        #[arg(long, env = "UTSTAR_METHOD", default_value = "enumerate")]
        method: Method,
        #[arg(long)]
        no_check: bool,
    },
    /// Exact ratio to the asymptotic and an enclosure of c_m^(1/m).
    Asymptotics {
        #[command(flatten)]
        target: Target,
        #[arg(long, env = "UTSTAR_M")]
        m: MRange,
        /// Enclosure width is 2^-bits.
        #[arg(long, default_value_t = 32)]
        bits: u32,
    },
    /// Run the acceptance suite, or scoped checks when --n is given.
    Verify {
        #[arg(long, env = "UTSTAR_N")]
        n: Option<usize>,
        #[arg(long, env = "UTSTAR_INVOLUTION", default_value = "orth")]
        involution: InvolutionKind,
        #[arg(long, env = "UTSTAR_FIELD", default_value = "q")]
        field: Field,
        #[arg(long, env = "UTSTAR_MAX_M", default_value_t = 4)]
        max_m: usize,
        #[arg(long, env = "UTSTAR_SEED", default_value_t = 0x5eed)]
        seed: u64,
        /// Random monomials for the soundness criterion.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

/// Rendered output and whether every check in it passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub body: String,
    pub ok: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, ok: true }
    }
}

fn csv_body<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)
            .map_err(|e| Error::Precondition(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Precondition(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn parts(r: &Option<BigRational>) -> (String, String) {
    r.as_ref()
        .map(|r| (r.numer().to_string(), r.denom().to_string()))
        .unwrap_or_default()
}

/// Executes a parsed command line. Writes to `--out` when given.
pub fn run(cli: &Cli) -> Result<Output> {
    if let Some(j) = cli.global.jobs {
        // an already-initialised pool is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global();
    }
    let out = dispatch(&cli.command, &cli.global)?;
    if let Some(path) = &cli.global.out {
        std::fs::write(path, &out.body)
            .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(out)
}

fn dispatch(cmd: &Command, g: &GlobalOpts) -> Result<Output> {
    match cmd {
        Command::Identities { target } => cmd_identities(target, g),
        Command::Goodseqs { n, l } => cmd_goodseqs(*n, *l, g.format),
        Command::Basis {
            target,
            l,
            m,
            general,
        } => cmd_basis(target, *l, *m, !general, g.format),
        Command::Omega {
            target,
            l,
            m,
            method,
            no_check,
        } => cmd_omega(target, *l, *m, *method, !no_check, g),
        Command::Codim {
            target,
            m,
            method,
            no_check,
        } => cmd_codim(target, *m, *method, !no_check, g),
        Command::Asymptotics { target, m, bits } => cmd_asymptotics(target, *m, *bits, g.format),
        Command::Verify {
            n,
            involution,
            field,
            max_m,
            seed,
            samples,
        } => match n {
            None => cmd_verify_suite(
                &AcceptanceConfig {
                    seed: *seed,
                    soundness_samples: *samples,
                    budget: g.budget,
                },
                g.format,
            ),
            Some(n) => cmd_verify_scoped(
                &Target {
                    n: *n,
                    involution: *involution,
                    field: *field,
                },
                *max_m,
                g,
            ),
        },
    }
}

fn cmd_identities(t: &Target, g: &GlobalOpts) -> Result<Output> {
    let report = verify_theorem_identities(t.n, t.involution, t.field, g.budget)?;
    let ok = report.all_passed();
    let body = match g.format {
        Format::Json => pretty(&report.to_json()),
        Format::Csv => {
            #[derive(Serialize)]
            struct Row<'a> {
                item: &'a str,
                identity: &'a str,
                passed: bool,
                witness: &'a str,
            }
            let rows = report
                .checks
                .iter()
                .map(|c| Row {
                    item: c.item,
                    identity: &c.identity,
                    passed: c.passed,
                    witness: c.witness.as_deref().unwrap_or(""),
                })
                .collect_vec();
            csv_body(&rows)?
        }
        Format::Text => {
            let mut s = format!(
                "UT_{} with {} over {}: {} generators\n",
                t.n,
                t.involution,
                t.field,
                report.checks.len()
            );
            for c in &report.checks {
                s.push_str(&format!(
                    "({:>3}) {}  {}\n",
                    c.item,
                    if c.passed { "ok  " } else { "FAIL" },
                    c.identity
                ));
                if let Some(w) = &c.witness {
                    s.push_str(&format!("      witness: {w}\n"));
                }
            }
            s
        }
    };
    Ok(Output { body, ok })
}

fn cmd_goodseqs(n: usize, l: Option<usize>, format: Format) -> Result<Output> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let ls: Vec<usize> = match l {
        Some(l) if l >= n => {
            return Err(Error::Precondition(format!(
                "good sequences need l <= n-1, got l={l}"
            )))
        }
        Some(l) => vec![l],
        None => (0..n).collect(),
    };
    #[derive(Serialize)]
    struct Row {
        n: usize,
        l: usize,
        chain: String,
        degrees: String,
        symmetric: String,
        shelf_count: Option<usize>,
        shelf_bound: Option<i64>,
        shelf_ok: Option<bool>,
    }
    let mut rows = Vec::new();
    let mut ok = true;
    for &l in &ls {
        for gs in good_sequences(n, l) {
            let sym = symmetric_subsequences(n, &gs.degrees.0)?;
            let shelf = check_shelf_bound(n, &gs.degrees.0).ok();
            let shelf_ok = shelf
                .as_ref()
                .map(|r| r.bound_satisfied && r.odd_addendum != Some(false));
            ok &= shelf_ok != Some(false);
            rows.push(Row {
                n,
                l,
                chain: gs.chain.iter().join(" "),
                degrees: gs.degrees.0.iter().join(" "),
                symmetric: sym.iter().map(|(a, b)| format!("({a},{b})")).join(" "),
                shelf_count: shelf.as_ref().map(|r| r.count),
                shelf_bound: shelf.as_ref().map(|r| r.bound),
                shelf_ok,
            });
        }
    }
    let body = match format {
        Format::Csv => csv_body(&rows)?,
        Format::Json => pretty(&serde_json::to_value(&rows).expect("json")),
        Format::Text => rows
            .iter()
            .map(|r| {
                let shelf = match (r.shelf_count, r.shelf_bound, r.shelf_ok) {
                    (Some(c), Some(b), Some(k)) => {
                        format!("  shelf {c} >= {b}: {}", if k { "ok" } else { "FAIL" })
                    }
                    _ => String::new(),
                };
                format!(
                    "l={} chain [{}]  degrees [{}]  symmetric [{}]{shelf}\n",
                    r.l, r.chain, r.degrees, r.symmetric
                )
            })
            .collect(),
    };
    Ok(Output { body, ok })
}

fn cmd_basis(t: &Target, l: usize, m: usize, multilinear: bool, format: Format) -> Result<Output> {
    let basis = enumerate_basis(t.n, t.involution, t.field, l, m, multilinear)?;
    let header = json!({
        "n": t.n,
        "kind": t.involution.to_string(),
        "field": t.field.to_string(),
        "l": l,
        "m": m,
        "multilinear": multilinear,
        "count": basis.len(),
    });
    let body = match format {
        Format::Json => {
            let mut v = header;
            v["monomials"] = basis
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .into();
            pretty(&v)
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                index: usize,
                monomial: String,
            }
            let rows = basis
                .iter()
                .enumerate()
                .map(|(index, b)| Row {
                    index,
                    monomial: b.to_string(),
                })
                .collect_vec();
            csv_body(&rows)?
        }
        Format::Text => {
            let mut s = header.to_string();
            s.push('\n');
            for b in &basis {
                s.push_str(&b.to_string());
                s.push('\n');
            }
            s
        }
    };
    Ok(Output::ok(body))
}

fn require_budget(n: usize, l: usize, m: usize, budget: u128) -> Result<()> {
    let needed = omega_oracle_cost(n, l, m);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// `omega` by `method`, cross-checked against the oracle when asked and
/// affordable; returns the value and a label for the method column.
fn omega_with_check(
    t: &Target,
    l: usize,
    m: usize,
    method: Method,
    check: bool,
    budget: u128,
) -> Result<(num_bigint::BigUint, String)> {
    let (n, kind, field) = (t.n, t.involution, t.field);
    if method == Method::Oracle {
        require_budget(n, l, m, budget)?;
    }
    let value = if n == 1 {
        codim::omega(n, l, m, kind, field, Method::Formula)?
    } else {
        codim::omega(n, l, m, kind, field, method)?
    };
    let mut label = method.to_string();
    if check && method != Method::Oracle && omega_oracle_cost(n, l, m) <= budget {
        let o = codim::omega(n, l, m, kind, field, Method::Oracle)?;
        if o != value {
            return Err(Error::Verification(format!(
                "omega({l},{m}) for n={n}, {kind}: {method} {value} != oracle {o}"
            )));
        }
        label.push_str("+oracle");
    }
    Ok((value, label))
}

fn cmd_omega(
    t: &Target,
    l: usize,
    m: usize,
    method: Method,
    check: bool,
    g: &GlobalOpts,
) -> Result<Output> {
    let (value, label) = omega_with_check(t, l, m, method, check, g.budget)?;
    let bound = codim::omega_upper(t.n, l, m);
    let body = match g.format {
        Format::Json => pretty(&json!({
            "n": t.n, "involution": t.involution.to_string(), "l": l, "m": m,
            "omega": value.to_string(), "bound": bound.to_string(), "method": label,
        })),
        Format::Csv => csv_body(&[(t.n, l, m, value.to_string(), bound.to_string(), &label)])
            .map(|b| format!("n,l,m,omega,bound,method\n{b}"))?,
        Format::Text => format!("omega({l},{m}) = {value}  (bound {bound}, {label})\n"),
    };
    Ok(Output {
        body,
        ok: value <= bound,
    })
}

#[derive(Serialize)]
struct CodimRow {
    n: usize,
    m: usize,
    l: usize,
    omega: String,
    bound: String,
    c_m: String,
    asymptotic_num: String,
    asymptotic_den: String,
    ratio_num: String,
    ratio_den: String,
    method: String,
    ratio_decimal: String,
}

fn codim_report(
    t: &Target,
    m: usize,
    method: Method,
    check: bool,
    budget: u128,
) -> Result<(CodimReport, Vec<String>)> {
    if !t.field.is_char_zero() {
        return Err(Error::RequiresCharacteristicZero);
    }
    let base = match method {
        Method::Oracle => {
            for l in 0..=m.min(t.n.saturating_sub(1)) {
                require_budget(t.n, l, m, budget)?;
            }
            Method::Oracle
        }
        other => other,
    };
    let report = codim::codimension(t.n, m, t.involution, base)?;
    let mut labels = Vec::new();
    for e in &report.omegas {
        let mut label = e.method.to_string();
        if check
            && t.n > 1
            && e.method != Method::Oracle
            && omega_oracle_cost(t.n, e.l, m) <= budget
        {
            let o = codim::omega(t.n, e.l, m, t.involution, t.field, Method::Oracle)?;
            if o != e.value {
                return Err(Error::Verification(format!(
                    "omega({},{m}) for n={}: {} != oracle {o}",
                    e.l, t.n, e.value
                )));
            }
            label.push_str("+oracle");
        }
        labels.push(label);
    }
    Ok((report, labels))
}

fn cmd_codim(
    t: &Target,
    range: MRange,
    method: Method,
    check: bool,
    g: &GlobalOpts,
) -> Result<Output> {
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    let mut ok = true;
    for m in range.iter() {
        let (r, labels) = codim_report(t, m, method, check, g.budget)?;
        ok &= r.is_consistent() && r.omegas.iter().all(|e| e.value <= e.bound);
        let (an, ad) = parts(&r.asymptotic);
        let (rn, rd) = parts(&r.ratio);
        let dec = r
            .ratio
            .as_ref()
            .map(|x| decimal_half_even(x, 6))
            .unwrap_or_default();
        for (e, label) in r.omegas.iter().zip(&labels) {
            rows.push(CodimRow {
                n: t.n,
                m,
                l: e.l,
                omega: e.value.to_string(),
                bound: e.bound.to_string(),
                c_m: r.c_m.to_string(),
                asymptotic_num: an.clone(),
                asymptotic_den: ad.clone(),
                ratio_num: rn.clone(),
                ratio_den: rd.clone(),
                method: label.clone(),
                ratio_decimal: dec.clone(),
            });
        }
        reports.push(r);
    }
    let body = match g.format {
        Format::Csv => csv_body(&rows)?,
        Format::Json => pretty(&Value::Array(
            reports.iter().map(CodimReport::to_json).collect(),
        )),
        Format::Text => reports
            .iter()
            .map(|r| {
                let omegas = r
                    .omegas
                    .iter()
                    .map(|e| format!("w{}={}", e.l, e.value))
                    .join(" ");
                let ratio = r
                    .ratio
                    .as_ref()
                    .map(|x| format!("  ratio {}", decimal_half_even(x, 6)))
                    .unwrap_or_default();
                format!("m={:<3} c_m = {}  [{omegas}]{ratio}\n", r.m, r.c_m)
            })
            .collect(),
    };
    Ok(Output { body, ok })
}

fn cmd_asymptotics(t: &Target, range: MRange, bits: u32, format: Format) -> Result<Output> {
    if t.n < 2 {
        return Err(Error::Precondition("asymptotics need n > 1".into()));
    }
    if !t.field.is_char_zero() {
        return Err(Error::RequiresCharacteristicZero);
    }
    #[derive(Serialize)]
    struct Row {
        n: usize,
        m: usize,
        c_m: String,
        asymptotic_num: String,
        asymptotic_den: String,
        ratio_num: String,
        ratio_den: String,
        ratio_decimal: String,
        root_lo: String,
        root_hi: String,
    }
    let mut rows = Vec::new();
    for m in range.iter().filter(|&m| m > 0) {
        let r = codim::codimension(t.n, m, t.involution, Method::Enumerate)?;
        let enc = codim::root_enclosure(&r.c_m, m, bits)?;
        let (an, ad) = parts(&r.asymptotic);
        let (rn, rd) = parts(&r.ratio);
        rows.push(Row {
            n: t.n,
            m,
            c_m: r.c_m.to_string(),
            asymptotic_num: an,
            asymptotic_den: ad,
            ratio_num: rn,
            ratio_den: rd,
            ratio_decimal: r
                .ratio
                .as_ref()
                .map(|x| decimal_half_even(x, 6))
                .unwrap_or_default(),
            root_lo: decimal_half_even(&enc.lo, 8),
            root_hi: decimal_half_even(&enc.hi, 8),
        });
    }
    let body = match format {
        Format::Csv => csv_body(&rows)?,
        Format::Json => pretty(&serde_json::to_value(&rows).expect("json")),
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "m={:<3} ratio {}  c_m^(1/m) in [{}, {}]\n",
                    r.m, r.ratio_decimal, r.root_lo, r.root_hi
                )
            })
            .collect(),
    };
    Ok(Output::ok(body))
}

fn cmd_verify_suite(cfg: &AcceptanceConfig, format: Format) -> Result<Output> {
    let results = acceptance::run_all(cfg);
    let ok = acceptance::all_pass(&results);
    #[derive(Serialize)]
    struct Row<'a> {
        criterion: u8,
        name: &'a str,
        passed: bool,
        detail: &'a str,
        seconds: f64,
    }
    let rows = results
        .iter()
        .map(|r| Row {
            criterion: r.id,
            name: r.name,
            passed: r.passed,
            detail: &r.detail,
            seconds: r.elapsed.as_secs_f64(),
        })
        .collect_vec();
    let body = match format {
        Format::Csv => csv_body(&rows)?,
        Format::Json => pretty(&serde_json::to_value(&rows).expect("json")),
        Format::Text => results.iter().map(|r| format!("{r}\n")).collect(),
    };
    Ok(Output { body, ok })
}

/// Identities for one `(n, *, field)`, then (characteristic 0) every
/// `omega(l, m)` with `m <= max_m` by enumeration against the oracle.
fn cmd_verify_scoped(t: &Target, max_m: usize, g: &GlobalOpts) -> Result<Output> {
    let mut lines: Vec<(String, bool)> = Vec::new();
    let report = verify_theorem_identities(t.n, t.involution, t.field, g.budget)?;
    lines.push((
        format!(
            "identities: {} generators ({})",
            report.checks.len(),
            report.items().iter().join(", ")
        ),
        report.all_passed(),
    ));
    if t.field.is_char_zero() && t.n > 1 {
        for m in 1..=max_m {
            for l in 0..=m.min(t.n - 1) {
                if omega_oracle_cost(t.n, l, m) > g.budget {
                    lines.push((format!("omega({l},{m}): skipped, oracle over budget"), true));
                    continue;
                }
                let e = codim::omega(t.n, l, m, t.involution, t.field, Method::Enumerate)?;
                let o = codim::omega(t.n, l, m, t.involution, t.field, Method::Oracle)?;
                let b = codim::omega_upper(t.n, l, m);
                lines.push((
                    format!("omega({l},{m}): enumerate {e}, oracle {o}, bound {b}"),
                    e == o && e <= b,
                ));
            }
        }
    }
    let ok = lines.iter().all(|(_, p)| *p);
    let body = match g.format {
        Format::Json => pretty(&json!({
            "n": t.n, "involution": t.involution.to_string(), "field": t.field.to_string(),
            "passed": ok,
            "checks": lines.iter().map(|(s, p)| json!({"check": s, "passed": p})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let rows = lines.iter().map(|(s, p)| (s.as_str(), *p)).collect_vec();
            csv_body(&rows).map(|b| format!("check,passed\n{b}"))?
        }
        Format::Text => lines
            .iter()
            .map(|(s, p)| format!("{} {s}\n", if *p { "PASS" } else { "FAIL" }))
            .collect(),
    };
    Ok(Output { body, ok })
}

/// Maps an outcome to the process exit code: 0 success, 1 a failed
/// check, 2 bad input or an error.
pub fn exit_code(result: &Result<Output>) -> u8 {
    match result {
        Ok(o) if o.ok => 0,
        Ok(_) | Err(Error::Verification(_)) => 1,
        Err(_) => 2,
    }
}
