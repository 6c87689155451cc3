use std::ops::RangeInclusive;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use bm_poisson::cones::{self, ConeDescriptor, ConePoint};
use bm_poisson::fock;
use bm_poisson::labellings::{self, CountRecord};
use bm_poisson::moments::{self, parse_rational, RationalPolynomial};
use bm_poisson::partitions::{self, Partition};
use bm_poisson::reference::{ReferenceTables, Verdict};
use bm_poisson::Error;

use crate::{Failure, Format, Series};

type CmdResult = Result<(), Failure>;

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, Error> {
    let bad = || Error::Parse(format!("expected N or a..b, got {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => {
            let n = num(s)?;
            Ok(n..=n)
        }
    }
}

fn parse_cone(s: &str) -> Result<ConeDescriptor, Error> {
    s.parse()
}

fn parse_lambda(s: &str) -> Result<f64, Error> {
    s.trim()
        .parse::<f64>()
        .ok()
        .or_else(|| parse_rational(s).and_then(|q| q.to_f64()))
        .ok_or_else(|| Error::Parse(format!("λ = {s:?}")))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn csv_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Match => "match",
        Verdict::KnownTypo => "flagged-typo",
        Verdict::Mismatch => "mismatch",
    }
}

pub fn moments(cones_in: &[String], p: &str, format: Format, compare: bool) -> CmdResult {
    let range = parse_range(p)?;
    let cones = cones_in.iter().map(|c| parse_cone(c)).collect::<Result<Vec<_>, _>>()?;
    let tables = if compare { Some(ReferenceTables::load()?) } else { None };

    struct Row {
        cone: ConeDescriptor,
        p: usize,
        poly: RationalPolynomial,
        reference: Option<(Verdict, RationalPolynomial)>,
    }
    let mut rows = Vec::new();
    for c in &cones {
        for p in range.clone() {
            let poly = moments::moment_poly(p, c)?;
            let reference = match &tables {
                Some(t) => match t.judge_moment(c, p, &poly)? {
                    Some((v, e)) => Some((v, e.printed_poly()?)),
                    None => None,
                },
                None => None,
            };
            rows.push(Row { cone: *c, p, poly, reference });
        }
    }

    match format {
        Format::Pretty => {
            let mut last = None;
            for r in &rows {
                if last != Some(r.cone) {
                    println!("{}", r.cone);
                    last = Some(r.cone);
                }
                let note = match &r.reference {
                    None if compare => "  [no table entry]".to_string(),
                    None => String::new(),
                    Some((Verdict::Match, _)) => "  [matches table]".to_string(),
                    Some((Verdict::KnownTypo, printed)) => format!("  [table prints {printed}; flagged typo]"),
                    Some((Verdict::Mismatch, printed)) => format!("  [MISMATCH: table prints {printed}]"),
                };
                println!("  m{} = {}{note}", r.p, r.poly);
            }
        }
        Format::Json => {
            let out: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = json!({"p": r.p, "cone": r.cone.to_string(), "poly": r.poly});
                    if let Some((verdict, printed)) = &r.reference {
                        v["reference"] = json!({"printed": printed, "verdict": verdict_name(*verdict)});
                    }
                    v
                })
                .collect();
            print_json(&Value::Array(out));
        }
        Format::Csv => {
            println!("{}", if compare { "cone,p,poly,printed,verdict" } else { "cone,p,poly" });
            for r in &rows {
                let mut line = format!("{},{},{}", r.cone, r.p, csv_quote(&r.poly.to_string()));
                if compare {
                    match &r.reference {
                        Some((v, printed)) => {
                            line += &format!(",{},{}", csv_quote(&printed.to_string()), verdict_name(*v))
                        }
                        None => line += ",,",
                    }
                }
                println!("{line}");
            }
        }
    }

    let bad: Vec<String> = rows
        .iter()
        .filter(|r| matches!(r.reference, Some((Verdict::Mismatch, _))))
        .map(|r| format!("{} m{}", r.cone, r.p))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("computed values differ from the table: {}", bad.join(", "))))
    }
}

pub fn count(cone: &str, rho: &str, parts: &[String], all: Option<usize>, naive: bool, format: Format) -> CmdResult {
    let c = parse_cone(cone)?;
    let rho = c.parse_point(rho)?;
    let pis: Vec<Partition> = match all {
        Some(p) => partitions::enumerate_pair_inner_singleton(p),
        None if parts.is_empty() => {
            return Err(Error::InvalidArgument("give --partition or --all N".into()).into());
        }
        None => parts.iter().map(|s| s.parse()).collect::<Result<_, _>>()?,
    };
    let records = pis
        .iter()
        .map(|pi| CountRecord::compute(pi, &c, &rho, naive))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Csv => {
            println!("{}", CountRecord::CSV_HEADER);
            for r in &records {
                println!("{}", r.csv_row());
            }
        }
        Format::Json => {
            let out: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "partition": r.partition,
                        "cone": r.cone.to_string(),
                        "rho": r.rho.to_string(),
                        "nonstrict": r.nonstrict.to_string(),
                        "strict": r.strict.to_string(),
                        "naive": r.naive.map(|n| n.to_string()),
                        "volume": r.volume.to_string(),
                        "ratio": r.ratio,
                    })
                })
                .collect();
            print_json(&Value::Array(out));
        }
        Format::Pretty => {
            for r in &records {
                let naive = r.naive.map(|n| format!("  naive {n}")).unwrap_or_default();
                println!(
                    "{}  nonstrict {}  strict {}{naive}  ratio {:.6}",
                    r.partition, r.nonstrict, r.strict, r.ratio
                );
            }
        }
    }
    Ok(())
}

struct Step {
    step: usize,
    rho: ConePoint,
    value: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn converge(
    cone: &str,
    series: Series,
    steps: usize,
    partition: &str,
    p: usize,
    lambda: &str,
    m: usize,
    format: Format,
) -> CmdResult {
    if steps < 2 {
        return Err(Error::InvalidArgument("a schedule needs at least 2 steps".into()).into());
    }
    let c = parse_cone(cone)?;
    let lam = parse_lambda(lambda)?;
    let pi: Partition = partition.parse()?;
    let (target_exact, target): (Option<BigRational>, f64) = match series {
        Series::Ratio => {
            let v = moments::v_of(&pi.reduce(), &c)?;
            (Some(v.clone()), moments::to_f64(&v))
        }
        Series::Moment => {
            let poly = moments::moment_poly(p, &c)?;
            let exact = parse_rational(lambda).map(|q| poly.eval(&q));
            (exact, poly.eval_f64(lam))
        }
        Series::Gamma => {
            let g = cones::gamma_closed(&c, m)?;
            (Some(g.clone()), moments::to_f64(&g))
        }
    };
    let target_text = target_exact.map(|q| q.to_string()).unwrap_or_else(|| target.to_string());

    let mut rows = Vec::new();
    let mut stop = None;
    for (k, rho) in cones::rho_schedule(&c, steps).into_iter().enumerate() {
        let value = match series {
            Series::Ratio => labellings::v_ratio(&pi, &c, &rho),
            Series::Moment => moments::finite_rho_moment(p, &c, &rho).map(|f| f.eval(lam)),
            Series::Gamma => cones::gamma_estimate(&c, m, &rho).map(|g| moments::to_f64(&g)),
        };
        match value {
            Ok(value) => rows.push(Step { step: k + 1, rho, value }),
            Err(e @ (Error::Infeasible { .. } | Error::Overflow(_))) if !rows.is_empty() => {
                stop = Some((k + 1, e));
                break;
            }
            Err(e) => return Err(e.into()),
        }
    }

    match format {
        Format::Csv => {
            println!("step,rho,value,target,abs_error");
            for r in &rows {
                println!(
                    "{},{},{},{},{}",
                    r.step,
                    csv_quote(&r.rho.to_string()),
                    r.value,
                    target_text,
                    (r.value - target).abs()
                );
            }
            if let Some((k, e)) = &stop {
                println!("# truncated at step {k}: {e}");
            }
        }
        Format::Json => {
            let out: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "step": r.step,
                        "rho": r.rho.to_string(),
                        "value": r.value,
                        "target": target_text,
                        "abs_error": (r.value - target).abs(),
                    })
                })
                .collect();
            let truncated = stop.as_ref().map(|(k, e)| json!({"step": k, "reason": e.to_string()}));
            print_json(&json!({"rows": out, "truncated": truncated}));
        }
        Format::Pretty => {
            println!("{:>5}  {:>12}  {:>14}  {:>12}", "step", "rho", "value", "error");
            for r in &rows {
                println!(
                    "{:>5}  {:>12}  {:>14.8}  {:>12.3e}",
                    r.step,
                    r.rho.to_string(),
                    r.value,
                    (r.value - target).abs()
                );
            }
            println!("target {target_text}");
            if let Some((k, e)) = &stop {
                println!("truncated at step {k}: {e}");
            }
        }
    }
    match stop {
        Some((_, e)) => Err(e.into()),
        None => Ok(()),
    }
}

fn eval_or_pole(r: Result<f64, Error>) -> Result<Option<f64>, Error> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Pole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn appendix(p_max: usize, lambdas: &[f64], xs: &[f64], format: Format) -> CmdResult {
    let polys = (0..=p_max).map(moments::appendix_a).collect::<Result<Vec<_>, _>>()?;
    let one = BigRational::from_integer(1.into());
    let mut measures = Vec::new();
    let mut transforms = Vec::new();
    for &l in lambdas {
        measures.push((l, moments::appendix_measure(l)?));
        for &x in xs {
            let mv = eval_or_pole(moments::mgf_real(l, x))?;
            let gv = eval_or_pole(moments::ctr_real(l, x))?;
            transforms.push((l, x, mv, gv));
        }
    }
    match format {
        Format::Pretty => {
            for (p, a) in polys.iter().enumerate() {
                println!("a_{p} = {a}    a_{p}(1) = {}", a.eval(&one));
            }
            for (l, nu) in &measures {
                println!(
                    "ν_{l}: atoms {:.12}, {:.12}  weights {:.12}, {:.12}",
                    nu.x1, nu.x2, nu.p1, nu.p2
                );
            }
            let show = |v: &Option<f64>| v.map(|v| format!("{v:.12}")).unwrap_or_else(|| "pole".into());
            for (l, x, mv, gv) in &transforms {
                println!("λ={l} x={x}: M = {}  G = {}", show(mv), show(gv));
            }
        }
        Format::Json => {
            let a: Vec<Value> = polys
                .iter()
                .enumerate()
                .map(|(p, a)| json!({"p": p, "poly": a, "at_one": a.eval(&one).to_string()}))
                .collect();
            let m: Vec<Value> = measures
                .iter()
                .map(|(l, nu)| json!({"lambda": l, "x1": nu.x1, "x2": nu.x2, "p1": nu.p1, "p2": nu.p2}))
                .collect();
            let t: Vec<Value> = transforms
                .iter()
                .map(|(l, x, mv, gv)| json!({"lambda": l, "x": x, "M": mv, "G": gv}))
                .collect();
            print_json(&json!({"a": a, "measures": m, "transforms": t}));
        }
        Format::Csv => {
            println!("p,poly,at_one");
            for (p, a) in polys.iter().enumerate() {
                println!("{p},{},{}", csv_quote(&a.to_string()), a.eval(&one));
            }
        }
    }
    Ok(())
}

fn check_sites(c: &ConeDescriptor, rho: &ConePoint, cap: u128) -> Result<(), Error> {
    let n = cones::interval_count(c, rho)?;
    if n > cap {
        return Err(Error::Infeasible {
            what: format!("Fock model over [0, {rho}] in {c}"),
            estimate: n as f64,
            cap: cap as f64,
        });
    }
    Ok(())
}

pub fn fock_moment(
    cone: &str,
    rho: &str,
    p: usize,
    lambda: &str,
    exact: bool,
    poly: bool,
    max_sites: u128,
) -> CmdResult {
    let c = parse_cone(cone)?;
    let rho = c.parse_point(rho)?;
    check_sites(&c, &rho, max_sites)?;
    if poly || exact {
        let fm = fock::vacuum_moment_poly(&c, &rho, p)?;
        if poly {
            println!("{fm}");
        }
        if exact {
            let q = parse_rational(lambda)
                .ok_or_else(|| Error::Parse(format!("--exact needs a rational λ, got {lambda:?}")))?;
            let poly = fm.poly().ok_or_else(|| {
                Error::InvalidArgument(format!("the volume of [0, {rho}] in {c} is irrational; drop --exact"))
            })?;
            println!("{}", poly.eval(&q));
        }
        return Ok(());
    }
    println!("{}", fock::vacuum_moment(&c, &rho, parse_lambda(lambda)?, p)?);
    Ok(())
}

pub fn fock_check(cone: &str, rho: &str, max_sites: u128) -> CmdResult {
    let c = parse_cone(cone)?;
    let rho = c.parse_point(rho)?;
    check_sites(&c, &rho, max_sites)?;
    let rel = fock::check_relations(&c, &rho)?;
    let bm = fock::check_bm_presets(&c, &rho)?;
    print!("{rel}{bm}");
    if rel.passed() && bm.passed() {
        println!("all {} checks passed", rel.total_checked() + bm.total_checked());
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("operator identities fail on [0, {rho}] in {c}")))
    }
}
