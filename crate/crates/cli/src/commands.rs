//! Subcommand implementations. Every command writes records to standard
//! output in input order; diagnostics go to standard error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use polyclust_core::canonical::{
    dominance_from_weights, exact_xi, ik_from_xi, truncated_log_xi, ClusterTable, PolymerWeights, Verdict,
    MAX_EXCESS,
};
use polyclust_core::catalog::{SmallGraph, SmallGraphCatalog, MAX_SMALL_J};
use polyclust_core::census::{hom_count, inj_count, sub_count};
use polyclust_core::corpus::{connected_regular_with_girth, regular, two_regular};
use polyclust_core::counting::{profile, ProfileKind};
use polyclust_core::graph6::{encode_graph6, read_graph6, Record, StreamError};
use polyclust_core::grand::{clique_min_certificate, exact_md_inequality};
use polyclust_core::interval::{format_down, format_exact, format_up, parse_rational};
use polyclust_core::verifier::{verify_dominance, Direction, VerifyOptions};
use polyclust_core::{Error, Girth, Graph, GraphSpec, GraphUnion};

use crate::config::RunConfig;
use crate::{
    CensusArgs, CertifyArgs, ConstructArgs, CountArgs, DirectionArg, Emit, ExpandArgs, Failure, InputArgs, Kind,
    MdMode, MdcertArgs, VerifyArgs,
};

/// Significant digits of decimal output for non-exact quantities.
const DIGITS: usize = 20;

impl From<Kind> for ProfileKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Is => ProfileKind::IndependentSets,
            Kind::Match => ProfileKind::Matchings,
        }
    }
}

fn read_input(args: &InputArgs) -> Result<Vec<Record>, Failure> {
    let result = match &args.input {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| Failure::input(format!("cannot open {}: {e}", path.display())))?;
            read_graph6(BufReader::new(file), args.max_vertices)
        }
        None => read_graph6(io::stdin().lock(), args.max_vertices),
    };
    result.map_err(|e| match e {
        StreamError::Format { .. } => Failure::input(e.to_string()),
        StreamError::Io(e) => Failure::input(e.to_string()),
    })
}

fn parse_spec(text: &str) -> Result<(GraphSpec, Graph), Failure> {
    let spec: GraphSpec = text.parse()?;
    let g = spec.construct()?;
    Ok((spec, g))
}

fn parse_copies(text: Option<&str>) -> Result<BigUint, Failure> {
    let Some(text) = text else {
        return Ok(BigUint::one());
    };
    let c: BigUint = text
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("--copies `{text}` is not a positive integer")))?;
    if c.is_zero() {
        return Err(Failure::usage("--copies must be at least 1"));
    }
    Ok(c)
}

/// `a..b` (inclusive) or a single `k`.
fn parse_k_range(text: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::usage(format!("--k `{text}` is not `k` or `a..b`"));
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let k = text.trim().parse().map_err(|_| bad())?;
            (k, k)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// Pattern grammar for `census`: `vertex`, `edge`, `path(j)`, `cycle(j)`,
/// `star(l)`, `clique(j)`.
fn parse_pattern(text: &str) -> Result<SmallGraph, Failure> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    let bad = |why: &str| Failure::usage(format!("pattern `{text}`: {why}"));
    match t.as_str() {
        "vertex" => return Ok(SmallGraph::single_vertex()),
        "edge" => return Ok(SmallGraph::edge()),
        _ => {}
    }
    let (name, arg) = t
        .strip_suffix(')')
        .and_then(|s| s.split_once('('))
        .ok_or_else(|| bad("expected `name(size)`"))?;
    let m: usize = arg.parse().map_err(|_| bad("size is not an integer"))?;
    let (f, vertices) = match name {
        "path" if m >= 1 => (SmallGraph::path as fn(usize) -> SmallGraph, m),
        "cycle" if m >= 3 => (SmallGraph::cycle as fn(usize) -> SmallGraph, m),
        "star" => (SmallGraph::star as fn(usize) -> SmallGraph, m + 1),
        "clique" if m >= 1 => (SmallGraph::complete as fn(usize) -> SmallGraph, m),
        "path" | "cycle" | "clique" => return Err(bad("size too small")),
        other => return Err(bad(&format!("unknown pattern `{other}`"))),
    };
    if vertices > MAX_SMALL_J {
        return Err(bad(&format!("patterns have at most {MAX_SMALL_J} vertices")));
    }
    Ok(f(m))
}

fn catalog(cfg: &RunConfig, j: usize) -> Result<SmallGraphCatalog, Failure> {
    let j = j.max(2);
    if j > cfg.j_max {
        return Err(Failure::usage(format!(
            "needs polymers on {j} vertices but --j-max is {}",
            cfg.j_max
        )));
    }
    Ok(match &cfg.catalog_dir {
        Some(dir) => SmallGraphCatalog::load_or_build(dir, j)?,
        None => SmallGraphCatalog::build(j)?,
    })
}

fn girth_value(g: Girth) -> Value {
    match g {
        Girth::Finite(x) => json!(x),
        Girth::Infinite => json!("INFINITE"),
    }
}

fn error_token(e: &Error) -> &'static str {
    match e {
        Error::DivergentRegime(_) => "DIVERGENT_REGIME",
        Error::Precondition(_) => "PRECONDITION",
        Error::Mismatch(_) => "MISMATCH",
        Error::Unsupported(_) => "UNSUPPORTED",
        Error::TooLarge { .. } => "TOO_LARGE",
        Error::Invariant(_) => "INVARIANT",
        _ => "ERROR",
    }
}

fn error_record(index: usize, graph6: &str, k: Option<usize>, e: &Error) -> Value {
    let mut v = json!({
        "index": index,
        "graph6": graph6,
        "error": error_token(e),
        "message": e.to_string(),
    });
    if let Some(k) = k {
        v["k"] = json!(k);
    }
    v
}

struct Out {
    w: BufWriter<io::StdoutLock<'static>>,
}

impl Out {
    fn new() -> Self {
        Out {
            w: BufWriter::new(io::stdout().lock()),
        }
    }

    fn line(&mut self, text: &str) -> Result<(), Failure> {
        writeln!(self.w, "{text}").map_err(io_failure)
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<(), Failure> {
        let text = serde_json::to_string(v).map_err(|e| Failure::input(e.to_string()))?;
        self.line(&text)
    }

    fn finish(mut self) -> Result<(), Failure> {
        self.w.flush().map_err(io_failure)
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure {
        code: Failure::INPUT,
        message: format!("write failed: {e}"),
    }
}

/// Exit status for a run that emitted error records for refused computations.
fn refused(count: usize) -> Result<(), Failure> {
    if count == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: Failure::REFUSED,
            message: format!("{count} computation(s) refused; see error records"),
        })
    }
}

pub fn construct(_cfg: &RunConfig, a: &ConstructArgs) -> Result<(), Failure> {
    let graphs = match (&a.spec, a.regular, a.two_regular) {
        (Some(spec), None, None) => vec![parse_spec(spec)?.1],
        (None, Some(n), None) => {
            let d = a.degree.ok_or_else(|| Failure::usage("--regular needs --degree"))?;
            if a.disconnected {
                regular(n, d)?
                    .into_iter()
                    .filter(|g| g.girth().at_least(a.girth_min))
                    .collect()
            } else {
                connected_regular_with_girth(n, d, a.girth_min)?
            }
        }
        (None, None, Some(n)) => two_regular(n),
        _ => return Err(Failure::usage("give exactly one of --spec, --regular, --two-regular")),
    };
    let mut out = Out::new();
    for g in &graphs {
        match a.emit {
            Emit::Graph6 => out.line(&encode_graph6(g))?,
            Emit::Edges => {
                out.line(&format!("{} {}", g.n(), g.edge_count()))?;
                for (u, v) in g.edges() {
                    out.line(&format!("{u} {v}"))?;
                }
            }
            Emit::Json => out.json(&json!({
                "graph6": encode_graph6(g),
                "n": g.n(),
                "edges": g.edges().map(|(u, v)| [u, v]).collect::<Vec<_>>(),
                "girth": girth_value(g.girth()),
            }))?,
        }
    }
    out.finish()
}

pub fn count(_cfg: &RunConfig, a: &CountArgs) -> Result<(), Failure> {
    let records = read_input(&a.input)?;
    let kind = ProfileKind::from(a.kind);
    let profiles = polyclust_core::par::map(&records, |r| profile(&r.graph, kind));
    let mut out = Out::new();
    for (r, p) in records.iter().zip(profiles) {
        let p = p?;
        out.json(&json!({
            "graph6": r.text,
            "kind": kind.token(),
            "coeffs": p.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }))?;
    }
    out.finish()
}

pub fn census(_cfg: &RunConfig, a: &CensusArgs) -> Result<(), Failure> {
    let patterns = a
        .pattern
        .iter()
        .map(|p| Ok((p.trim().to_ascii_lowercase(), parse_pattern(p)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let records = read_input(&a.input)?;
    let rows = polyclust_core::par::map(&records, |r| {
        patterns
            .iter()
            .map(|(name, f)| {
                let hom = hom_count(f, &r.graph, true);
                let density = if r.graph.n() == 0 {
                    BigRational::zero()
                } else {
                    BigRational::new(
                        BigInt::from(hom.clone()),
                        num_traits::Pow::pow(BigInt::from(r.graph.n()), f.vertex_count() as u32),
                    )
                };
                format!(
                    "{},{},{},{},{},{},{}",
                    r.line,
                    name,
                    hom,
                    inj_count(f, &r.graph),
                    sub_count(f, &r.graph),
                    density.numer(),
                    density.denom()
                )
            })
            .collect::<Vec<_>>()
    });
    let mut out = Out::new();
    out.line("graph_id,F_id,hom,inj,sub,t_density_num,t_density_den")?;
    for line in rows.iter().flatten() {
        out.line(line)?;
    }
    out.finish()
}

fn check_order(t: usize) -> Result<(), Failure> {
    if t == 0 || t > MAX_EXCESS + 1 {
        return Err(Failure::usage(format!("--t {t} outside 1..={}", MAX_EXCESS + 1)));
    }
    Ok(())
}

pub fn expand(cfg: &RunConfig, a: &ExpandArgs) -> Result<(), Failure> {
    check_order(a.t)?;
    let copies = parse_copies(a.copies.as_deref())?;
    let records = read_input(&a.input)?;
    let j_weights = a.t.max(a.k.min(cfg.j_max));
    let cat = catalog(cfg, j_weights)?;
    let table = ClusterTable::new(a.t - 1)?;
    let mut out = Out::new();
    let mut refusals = 0;
    for (index, r) in records.iter().enumerate() {
        let u = GraphUnion::copies(&r.graph, copies.clone());
        let w = match PolymerWeights::compute(&cat, &u, j_weights) {
            Ok(w) => w,
            Err(e) => {
                refusals += 1;
                out.json(&error_record(index, &r.text, None, &e))?;
                continue;
            }
        };
        let weights: Vec<Value> = (1..=w.j_max())
            .map(|j| {
                json!({
                    "j": j,
                    "weight": format_exact(w.weight(j)),
                    "tree_part": format_exact(&w.tree_parts[j]),
                    "non_tree": format_exact(&w.non_tree(j)),
                    "penrose_bound": format_exact(&w.penrose_bound(j)),
                })
            })
            .collect();
        let mut rec = json!({
            "index": index,
            "graph6": r.text,
            "n": w.n.to_string(),
            "d": w.d,
            "k": a.k,
            "t": a.t,
            "weights": weights,
        });
        if a.k <= w.j_max() {
            let xi = exact_xi(&w, a.k)?;
            rec["xi"] = json!(format_exact(&xi));
            rec["i_k"] = json!(format_exact(&ik_from_xi(&xi, &w.n, a.k)));
        }
        match truncated_log_xi(&w, &table, a.k, a.t, cfg.bits) {
            Ok(tr) => {
                rec["truncation"] = json!({
                    "value": format_exact(&tr.value),
                    "tail": format_up(&tr.tail, DIGITS),
                    "lower": format_down(&tr.interval.lower, DIGITS),
                    "upper": format_up(&tr.interval.upper, DIGITS),
                    "gamma": tr.kp.as_ref().map(|kp| format_up(&kp.gamma.upper, DIGITS)),
                });
            }
            Err(e @ (Error::DivergentRegime(_) | Error::Precondition(_) | Error::Unsupported(_))) => {
                refusals += 1;
                rec["truncation"] = json!({ "error": error_token(&e), "message": e.to_string() });
            }
            Err(e) => return Err(e.into()),
        }
        out.json(&rec)?;
    }
    out.finish()?;
    refused(refusals)
}

pub fn certify(cfg: &RunConfig, a: &CertifyArgs) -> Result<(), Failure> {
    let (spec, h) = parse_spec(&a.reference)?;
    let t = match a.t {
        Some(t) => t,
        None => match h.girth() {
            Girth::Finite(g) => g,
            Girth::Infinite => return Err(Failure::usage("reference is a forest; give --t")),
        },
    };
    check_order(t)?;
    let (k_lo, k_hi) = parse_k_range(&a.k)?;
    let copies = parse_copies(a.copies.as_deref())?;
    let records = read_input(&a.input)?;
    let cat = catalog(cfg, t)?;
    let table = ClusterTable::new(t - 1)?;
    let mut out = Out::new();
    let mut refusals = 0;
    for (index, r) in records.iter().enumerate() {
        let g = GraphUnion::copies(&r.graph, copies.clone());
        let n = g.vertex_count();
        let size = BigUint::from(h.n());
        if h.n() == 0 || !(&n % &size).is_zero() {
            let e = Error::Mismatch(format!("{n} vertices is not a multiple of |{spec}| = {}", h.n()));
            refusals += 1;
            out.json(&error_record(index, &r.text, None, &e))?;
            continue;
        }
        let hn = GraphUnion::copies(&h, &n / &size);
        if g.regular_degree() != hn.regular_degree() {
            let e = Error::Mismatch(format!("input is not regular of the degree of {spec}"));
            refusals += 1;
            out.json(&error_record(index, &r.text, None, &e))?;
            continue;
        }
        let weights = PolymerWeights::compute(&cat, &g, t).and_then(|wg| {
            PolymerWeights::compute(&cat, &hn, t).map(|wh| (wg, wh))
        });
        let (wg, wh) = match weights {
            Ok(w) => w,
            Err(e) => {
                refusals += 1;
                out.json(&error_record(index, &r.text, None, &e))?;
                continue;
            }
        };
        let isomorphic = g.is_isomorphic(&hn);
        let certs = polyclust_core::par::map_range(k_hi - k_lo + 1, |i| {
            dominance_from_weights(&wg, &wh, &table, k_lo + i, t, isomorphic, cfg.bits)
        });
        for (i, cert) in certs.into_iter().enumerate() {
            let k = k_lo + i;
            match cert {
                Ok(c) => out.json(&json!({
                    "index": index,
                    "graph6": r.text,
                    "k": k,
                    "t": t,
                    "verdict": c.verdict,
                    "lower_bound_log_ratio": c.lower_bound_text(),
                    "upper_bound_log_ratio": format_up(&c.bound.upper, DIGITS),
                    "gamma": c.gamma.as_ref().map(|g| format_up(&g.upper, DIGITS)),
                    "tail": format_up(&c.tail, DIGITS),
                    "provenance": c.provenance,
                }))?,
                Err(e @ Error::Invariant(_)) => return Err(e.into()),
                Err(e) => {
                    refusals += 1;
                    out.json(&error_record(index, &r.text, Some(k), &e))?;
                }
            }
        }
    }
    out.finish()?;
    refused(refusals)
}

fn verdict_of_ordering(o: std::cmp::Ordering) -> Verdict {
    match o {
        std::cmp::Ordering::Greater => Verdict::CertifiedStrict,
        std::cmp::Ordering::Equal => Verdict::CertifiedNonstrict,
        std::cmp::Ordering::Less => Verdict::Refuted,
    }
}

pub fn mdcert(cfg: &RunConfig, a: &MdcertArgs) -> Result<(), Failure> {
    let lambda = parse_rational(&a.lambda)
        .ok_or_else(|| Failure::usage(format!("--lambda `{}` is not a rational p/q", a.lambda)))?;
    let records = read_input(&a.input)?;
    let results = polyclust_core::par::map(&records, |r| match a.mode {
        MdMode::Certify => clique_min_certificate(&r.graph, &lambda, cfg.bits).map(|c| {
            json!({
                "graph6": r.text,
                "mode": "certify",
                "lambda": format_exact(&lambda),
                "verdict": c.verdict,
                "triangle_density": format_exact(&c.triangle_density),
                "simplified_bound": format_down(&c.simplified_bound, DIGITS),
                "sharp_bound": format_down(&c.sharp_bound, DIGITS),
                "tail": format_up(&c.tail, DIGITS),
                "k_lower": format_down(&c.config.k.lower, DIGITS),
            })
        }),
        MdMode::Exact => exact_md_inequality(&r.graph, &lambda).map(|m| {
            json!({
                "graph6": r.text,
                "mode": "exact",
                "lambda": format_exact(&lambda),
                "verdict": verdict_of_ordering(m.ordering),
                "z_graph": format_exact(&m.z_graph),
                "z_clique": format_exact(&m.z_clique),
            })
        }),
    });
    let mut out = Out::new();
    let mut refusals = 0;
    for (index, (r, res)) in records.iter().zip(results).enumerate() {
        match res {
            Ok(mut v) => {
                v["index"] = json!(index);
                out.json(&v)?;
            }
            Err(e @ Error::Invariant(_)) => return Err(e.into()),
            Err(e) => {
                refusals += 1;
                out.json(&error_record(index, &r.text, None, &e))?;
            }
        }
    }
    out.finish()?;
    refused(refusals)
}

pub fn verify(_cfg: &RunConfig, a: &VerifyArgs) -> Result<(), Failure> {
    let (_, h) = parse_spec(&a.reference)?;
    let records = read_input(&a.input)?;
    let corpus: Vec<Graph> = records.iter().map(|r| r.graph.clone()).collect();
    let direction = match a.direction {
        DirectionArg::Max => Direction::Max,
        DirectionArg::Min => Direction::Min,
    };
    let mut opts = VerifyOptions::new(a.kind.into(), direction);
    opts.girth_min = a.girth_min;
    opts.k_max = a.k_max;
    opts.strict_from = a.strict_from;
    let report = verify_dominance(&corpus, &h, &opts)?;
    let mut out = Out::new();
    for (g, r) in report.graphs.iter().zip(&records) {
        let mut v = serde_json::to_value(g).map_err(|e| Failure::input(e.to_string()))?;
        v["graph6"] = json!(r.text);
        out.json(&v)?;
    }
    out.finish()?;
    let summary = json!({
        "reference": report.reference,
        "kind": report.kind,
        "direction": report.direction,
        "summary": report.summary,
    });
    eprintln!("{summary}");
    if report.has_alarms() {
        return Err(Failure::alarm(format!("{} alarm(s)", report.summary.alarms)));
    }
    Ok(())
}
