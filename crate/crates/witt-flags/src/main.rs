//! Command-line front end: vanishing decisions with certificates, marked
//! diagrams, twist-space bases, Tate presentations and K₀ cross-checks.
//!
//! Exit codes: 0 success, 1 selfcheck violation, 2 usage/parse error.
//! JSON output is compact with keys in sorted order, so parsing it into a
//! `serde_json::Value` and re-serializing is byte-identical.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use witt_flags::dynkin::{DynkinDiagram, Family, ParabolicSubset};
use witt_flags::marks;
use witt_flags::repring;
use witt_flags::sweep::sweep;
use witt_flags::tate::{self, minimal_lift, sigma_monomial, Monomial, TwistedPolyRing};
use witt_flags::twists::{self_dual_twist_matrix, TwistMatrix};
use witt_flags::{Error, Result};

#[derive(Parser)]
#[command(name = "witt-flags", version, about = "Twisted Witt groups of split flag varieties")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether all twisted Witt groups of G/P vanish for a twist
    Vanishes(Query),
    /// Print the rule-based and computed marked diagrams
    Marks(Query),
    /// Print the echelon basis of the non-vanishing twist subspace
    TwistSpace(Query),
    /// Print the Tate-cohomology presentation of the representation ring
    HRing(Query),
    /// Print the witness monomial of a non-vanishing twist
    Zeta(Query),
    /// Tate dimensions of the K₀ model (type A only), untwisted and twisted
    K0(Query),
    /// Cross-validate every rule against its oracle up to a rank bound
    Selfcheck(SelfcheckArgs),
}

#[derive(Args)]
struct Query {
    /// Diagram, e.g. A3, B8 or D4;A1
    diagram: String,
    /// Θ as comma-separated node ids, e.g. 1,3 (default: empty)
    #[arg(long, value_delimiter = ',')]
    theta: Vec<String>,
    /// Twist as comma-separated node=exponent over white nodes (default: 0)
    #[arg(long, value_delimiter = ',')]
    twist: Vec<String>,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
    /// Emit the marked diagram as DOT (marks only)
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Largest diagram rank to sweep
    #[arg(long, default_value_t = 6)]
    max_rank: usize,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

struct Resolved {
    d: DynkinDiagram,
    p: ParabolicSubset,
    twist: Vec<i64>,
}

fn resolve(q: &Query) -> Result<Resolved> {
    let d: DynkinDiagram = q.diagram.parse()?;
    let names: Vec<&str> = q.theta.iter().map(|s| s.as_str()).collect();
    let p = ParabolicSubset::from_names(&d, &names)?;
    let mut twist = vec![0i64; p.white.len()];
    for item in &q.twist {
        let (node, exp) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("twist entry `{item}` is not node=exponent")))?;
        let n = d.parse_node(node.trim())?;
        let i = p.white_index(n).ok_or_else(|| {
            Error::InvalidTwistUnit(format!("node {} is not white", d.node_name(n)))
        })?;
        twist[i] = exp
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad twist exponent `{exp}`")))?;
    }
    Ok(Resolved { d, p, twist })
}

fn tuple(v: &[i64]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", items.join(","))
}

/// `*x2^-1*x4` suffix for an x-exponent vector over the white nodes.
fn x_part(d: &DynkinDiagram, whites: &[usize], x: &[i64]) -> String {
    let mut out = String::new();
    for (&b, &e) in whites.iter().zip(x) {
        if e == 1 {
            out.push_str(&format!("*x{}", d.node_name(b)));
        } else if e != 0 {
            out.push_str(&format!("*x{}^{}", d.node_name(b), e));
        }
    }
    out
}

fn monomial_text(d: &DynkinDiagram, tm: &TwistMatrix, m: &Monomial) -> String {
    let mut out = String::new();
    for (&node, &e) in tm.self_dual.iter().zip(&m.mu) {
        if e == 1 {
            out.push_str(&format!("*mu{}", d.node_name(node)));
        } else if e != 0 {
            out.push_str(&format!("*mu{}^{}", d.node_name(node), e));
        }
    }
    out.push_str(&x_part(d, &tm.white, &m.x));
    if out.is_empty() {
        "1".to_string()
    } else {
        out[1..].to_string()
    }
}

/// `{1,3}` name set for the support of a 0/1 lift over the self-dual nodes.
fn lift_name(d: &DynkinDiagram, tm: &TwistMatrix, lift: &[i64]) -> String {
    let names: Vec<String> = tm
        .self_dual
        .iter()
        .zip(lift)
        .filter(|(_, &e)| e != 0)
        .map(|(&n, _)| d.node_name(n))
        .collect();
    format!("{{{}}}", names.join(","))
}

fn bits_vec(bits: u64, n: usize) -> Vec<i64> {
    minimal_lift(bits, n)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VanishesOut {
    span_basis: Vec<Vec<i64>>,
    vanishes: bool,
    witness: Option<Vec<i64>>,
}

fn cmd_vanishes(q: &Query) -> Result<u8> {
    let r = resolve(q)?;
    let tm = self_dual_twist_matrix(&r.d, &r.p)?;
    let sol = tate::twist_solution(&tm, &r.twist);
    let report = marks::mark_report(&r.d, &r.p)?;
    let span_basis: Vec<Vec<i64>> = report
        .span
        .basis
        .iter()
        .map(|&b| bits_vec(b, r.p.white.len()))
        .collect();
    let witness = sol.map(|s| bits_vec(s, tm.self_dual.len()));
    if q.json {
        let out = VanishesOut {
            span_basis,
            vanishes: witness.is_none(),
            witness,
        };
        println!("{}", serde_json::to_string(&out).unwrap());
    } else if let Some(w) = witness {
        println!("NONZERO");
        println!("witness: {}", tuple(&w));
    } else {
        println!("VANISHES");
        if span_basis.is_empty() {
            println!("span basis: (none)");
        } else {
            let rows: Vec<String> = span_basis.iter().map(|b| tuple(b)).collect();
            println!("span basis: {}", rows.join(", "));
        }
    }
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MarkOut {
    from: Option<String>,
    support: Vec<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MarksOut {
    agree: bool,
    computed: Vec<MarkOut>,
    rule: Vec<MarkOut>,
    span_basis: Vec<Vec<i64>>,
}

fn cmd_marks(q: &Query) -> Result<u8> {
    let r = resolve(q)?;
    let report = marks::mark_report(&r.d, &r.p)?;
    let computed_only: Vec<marks::Mark> = report.computed.iter().map(|(_, m)| m.clone()).collect();
    if q.dot {
        print!("{}", marks::render_dot(&r.d, &r.p, &computed_only));
        return Ok(0);
    }
    let names = |m: &marks::Mark| -> Vec<String> {
        m.support.iter().map(|&b| r.d.node_name(b)).collect()
    };
    if q.json {
        let out = MarksOut {
            agree: report.agree,
            computed: report
                .computed
                .iter()
                .map(|(t, m)| MarkOut {
                    from: Some(r.d.node_name(*t)),
                    support: names(m),
                })
                .collect(),
            rule: report
                .rule
                .iter()
                .map(|m| MarkOut {
                    from: None,
                    support: names(m),
                })
                .collect(),
            span_basis: report
                .span
                .basis
                .iter()
                .map(|&b| bits_vec(b, r.p.white.len()))
                .collect(),
        };
        println!("{}", serde_json::to_string(&out).unwrap());
        return Ok(0);
    }
    println!("computed marks:");
    print!("{}", marks::render_text(&r.d, &r.p, &computed_only));
    for (t, m) in &report.computed {
        println!("  {{{}}} from {}", names(m).join(","), r.d.node_name(*t));
    }
    println!("rule marks:");
    print!("{}", marks::render_text(&r.d, &r.p, &report.rule));
    println!("spans agree: {}", report.agree);
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TwistSpaceOut {
    basis: Vec<Vec<i64>>,
    dim: usize,
    white_nodes: Vec<String>,
}

fn cmd_twist_space(q: &Query) -> Result<u8> {
    let r = resolve(q)?;
    let report = marks::mark_report(&r.d, &r.p)?;
    let basis: Vec<Vec<i64>> = report
        .span
        .basis
        .iter()
        .map(|&b| bits_vec(b, r.p.white.len()))
        .collect();
    let white_nodes: Vec<String> = r.p.white.iter().map(|&b| r.d.node_name(b)).collect();
    if q.json {
        let out = TwistSpaceOut {
            dim: basis.len(),
            basis,
            white_nodes,
        };
        println!("{}", serde_json::to_string(&out).unwrap());
        return Ok(0);
    }
    println!("white nodes: ({})", white_nodes.join(","));
    if basis.is_empty() {
        println!("basis: (none)");
    } else {
        let rows: Vec<String> = basis.iter().map(|b| tuple(b)).collect();
        println!("basis: {}", rows.join(", "));
    }
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct GammaOut {
    pair: Vec<String>,
    x_exp: Vec<i64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct NuOut {
    lift: Vec<i64>,
    x_exp: Vec<i64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SigmaOut {
    node: String,
    x_exp: Vec<i64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MonomialOut {
    mu_exp: Vec<i64>,
    x_exp: Vec<i64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PresentationOut {
    gamma_classes: Vec<GammaOut>,
    nu: Vec<NuOut>,
    relations: Vec<String>,
    sigma: Vec<SigmaOut>,
    zeta: Option<MonomialOut>,
}

/// `nu{1,3}^2 = sigma{1}*sigma{3}` for the square of a ν generator.
fn square_relation(d: &DynkinDiagram, tm: &TwistMatrix, lift: &[i64]) -> String {
    let rhs: Vec<String> = tm
        .self_dual
        .iter()
        .zip(lift)
        .filter(|(_, &e)| e != 0)
        .map(|(&n, _)| format!("sigma{{{}}}", d.node_name(n)))
        .collect();
    format!("nu{}^2 = {}", lift_name(d, tm, lift), rhs.join("*"))
}

fn cmd_h_ring(q: &Query) -> Result<u8> {
    let r = resolve(q)?;
    let ring = TwistedPolyRing::from_parabolic(&r.d, &r.p)?;
    let pres = tate::presentation(&ring, &r.twist);
    let tm = &ring.matrix;
    let squares: Vec<&tate::NuGen> = pres.nu.iter().collect();
    if q.json {
        let out = PresentationOut {
            gamma_classes: ring
                .pairs
                .iter()
                .map(|g| GammaOut {
                    pair: vec![r.d.node_name(g.first), r.d.node_name(g.second)],
                    x_exp: g.twist.clone(),
                })
                .collect(),
            nu: squares
                .iter()
                .map(|n| NuOut {
                    lift: n.monomial.mu.clone(),
                    x_exp: n.monomial.x.clone(),
                })
                .collect(),
            relations: squares
                .iter()
                .map(|n| square_relation(&r.d, tm, &n.monomial.mu))
                .collect(),
            sigma: tm
                .self_dual
                .iter()
                .zip(&tm.columns)
                .map(|(&n, col)| SigmaOut {
                    node: r.d.node_name(n),
                    x_exp: col.clone(),
                })
                .collect(),
            zeta: pres.zeta.as_ref().map(|z| MonomialOut {
                mu_exp: z.mu.clone(),
                x_exp: z.x.clone(),
            }),
        };
        println!("{}", serde_json::to_string(&out).unwrap());
        return Ok(0);
    }
    for g in &ring.pairs {
        println!(
            "gamma{{{},{}}} = gamma{}*gamma{}{}",
            r.d.node_name(g.first),
            r.d.node_name(g.second),
            r.d.node_name(g.first),
            r.d.node_name(g.second),
            x_part(&r.d, &ring.white, &g.twist),
        );
    }
    for n in &pres.nu {
        println!(
            "nu{} = {}",
            lift_name(&r.d, tm, &n.monomial.mu),
            monomial_text(&r.d, tm, &n.monomial)
        );
    }
    for (i, &node) in tm.self_dual.iter().enumerate() {
        let mut e = vec![0i64; tm.self_dual.len()];
        e[i] = 1;
        println!(
            "sigma{{{}}} = {}",
            r.d.node_name(node),
            monomial_text(&r.d, tm, &sigma_monomial(tm, &e))
        );
    }
    for n in &pres.nu {
        println!("relation: {}", square_relation(&r.d, tm, &n.monomial.mu));
    }
    match &pres.zeta {
        Some(z) => println!("zeta: {}", monomial_text(&r.d, tm, z)),
        None => println!("zeta: none"),
    }
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ZetaOut {
    twist: Vec<i64>,
    zeta: Option<MonomialOut>,
}

fn cmd_zeta(q: &Query) -> Result<u8> {
    let r = resolve(q)?;
    let tm = self_dual_twist_matrix(&r.d, &r.p)?;
    let z = tate::zeta(&tm, &r.twist);
    if q.json {
        let out = ZetaOut {
            twist: r.twist.clone(),
            zeta: z.as_ref().map(|z| MonomialOut {
                mu_exp: z.mu.clone(),
                x_exp: z.x.clone(),
            }),
        };
        println!("{}", serde_json::to_string(&out).unwrap());
        return Ok(0);
    }
    match &z {
        Some(z) => println!("zeta: {}", monomial_text(&r.d, &tm, z)),
        None => println!("zeta: none"),
    }
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct K0Out {
    rank: usize,
    status: String,
    twist: Vec<i64>,
    twisted: Vec<usize>,
    untwisted: Vec<usize>,
    vanishes: bool,
}

fn cmd_k0(q: &Query) -> Result<u8> {
    let r = resolve(q)?;
    if r.d.components().len() != 1 || r.d.components()[0].0 != Family::A {
        return Err(Error::NotTypeA(q.diagram.clone()));
    }
    let max_t = r.twist.iter().map(|t| t.abs()).max().unwrap_or(0);
    let check = repring::with_window_retry((4, 6 + max_t), 3, |dm, em| {
        let model = repring::k0_model(&r.d, &r.p, dm, em)?;
        let check = repring::zeta_structure_check(&r.d, &r.p, &model, &r.twist)?;
        Ok((model.rank(), check))
    })?;
    let (rank, check) = check;
    let status = if check.ok { "ok" } else { "MISMATCH" };
    if q.json {
        let out = K0Out {
            rank,
            status: status.to_string(),
            twist: r.twist.clone(),
            twisted: vec![check.dims.0, check.dims.1],
            untwisted: vec![check.untwisted_dims.0, check.untwisted_dims.1],
            vanishes: check.vanishes,
        };
        println!("{}", serde_json::to_string(&out).unwrap());
        return Ok(0);
    }
    println!("rank: {rank}");
    println!(
        "untwisted: ({},{})",
        check.untwisted_dims.0, check.untwisted_dims.1
    );
    println!("twisted: ({},{})", check.dims.0, check.dims.1);
    println!("vanishes: {}", check.vanishes);
    println!("status: {status}");
    Ok(0)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ViolationOut {
    case: String,
    what: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SelfcheckOut {
    max_rank: usize,
    violations: Vec<ViolationOut>,
}

fn cmd_selfcheck(a: &SelfcheckArgs) -> Result<u8> {
    let violations = sweep(a.max_rank);
    if a.json {
        let out = SelfcheckOut {
            max_rank: a.max_rank,
            violations: violations
                .iter()
                .map(|v| ViolationOut {
                    case: v.case.clone(),
                    what: v.what.clone(),
                })
                .collect(),
        };
        println!("{}", serde_json::to_string(&out).unwrap());
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
        if violations.is_empty() {
            println!("selfcheck passed (rank <= {})", a.max_rank);
        } else {
            println!(
                "selfcheck FAILED: {} violations (rank <= {})",
                violations.len(),
                a.max_rank
            );
        }
    }
    Ok(if violations.is_empty() { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Vanishes(q) => cmd_vanishes(q),
        Cmd::Marks(q) => cmd_marks(q),
        Cmd::TwistSpace(q) => cmd_twist_space(q),
        Cmd::HRing(q) => cmd_h_ring(q),
        Cmd::Zeta(q) => cmd_zeta(q),
        Cmd::K0(q) => cmd_k0(q),
        Cmd::Selfcheck(a) => cmd_selfcheck(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
