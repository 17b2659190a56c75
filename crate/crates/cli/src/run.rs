//! Subcommand implementations. Each produces a text rendering and a JSON
//! result; `run` wraps them into the report.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use hecke_cells::afun::{a_ball_all, delta_n, profile, ASource, PChecker};
use hecke_cells::cells::{Cells, Verdict};
use hecke_cells::hecke::{dihedral_sweep, CProducts, LEMMA_IDS};
use hecke_cells::params::{
    critical_lines_2d, critical_values_1d, d_levels, export_arrangement, triple_points, ExportFormat,
};
use hecke_cells::quotient::{case_ids, verify_expansion, ExpansionOptions, Truncation};
use hecke_cells::{Bond, CoxeterSystem, ElemId, Error, HeckeAlgebra, HeckeElt, KLTable, WeightFunction};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{self, CacheStats};
use crate::config::{Basis, Check, Cli, Command, Format, Global, Mode, Weights};

type Res<T> = Result<T, String>;

fn err(e: Error) -> String {
    e.to_string()
}

struct Outcome {
    text: String,
    result: Value,
    /// `Some` for verifications.
    passed: Option<bool>,
    cache: Option<CacheStats>,
}

impl Outcome {
    fn new(text: String, result: Value) -> Outcome {
        Outcome { text, result, passed: None, cache: None }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    config: &'a Cli,
    #[serde(skip_serializing_if = "Option::is_none")]
    passed: Option<bool>,
    result: &'a Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    cache: Option<&'a CacheStats>,
}

/// Runs the command; `Ok(false)` when a verification found a counterexample.
pub fn run(mut cli: Cli) -> Res<bool> {
    resolve(&mut cli)?;
    let out = dispatch(&cli)?;
    let report = Report { config: &cli, passed: out.passed, result: &out.result, cache: out.cache.as_ref() };
    let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    let writes_report = !matches!(cli.command, Command::Export { .. });
    if let (Some(path), true) = (&cli.global.out, writes_report) {
        std::fs::write(path, format!("{json}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if cli.global.json {
        println!("{json}");
    } else {
        let echo = serde_json::to_string(&cli).map_err(|e| e.to_string())?;
        println!("# config {echo}");
        print!("{}", out.text);
        if let Some(c) = &out.cache {
            eprintln!("kl solves: {}, cached columns loaded: {}", c.kl_solves, c.columns_loaded);
        }
    }
    Ok(out.passed != Some(false))
}

fn needs_system(cmd: &Command) -> bool {
    match cmd {
        Command::Critical { .. } | Command::Export { .. } => false,
        Command::Verify { check: Check::Expansion, .. } => false,
        _ => true,
    }
}

/// Validates the configuration before any computation and fills in the
/// default (equal) weights.
fn resolve(cli: &mut Cli) -> Res<()> {
    let g = &mut cli.global;
    if g.threads == 0 {
        return Err("--threads must be at least 1".into());
    }
    if let Some(b) = &g.system {
        match b.0.len() {
            1 | 3 => {}
            2 => return Err("--system takes one label (dihedral) or three (m_rt,m_rs,m_st)".into()),
            n => return Err(format!("rank {n} is not supported (rank at most 3)")),
        }
        let rank = if b.0.len() == 1 { 2 } else { 3 };
        let weights = g.weights.get_or_insert_with(|| Weights(vec![1; rank]));
        if weights.0.len() != rank {
            return Err(format!("--weights needs {rank} values for a rank-{rank} system"));
        }
        let sys = build(b.0.as_slice(), 1)?;
        sys.validate_weights(&weight_fn(g)?).map_err(err)?;
    } else if needs_system(&cli.command) {
        return Err("--system is required for this command".into());
    } else if g.weights.is_some() {
        return Err("--weights needs --system".into());
    }
    if let Command::Export { format, .. } = &mut cli.command {
        let Some(out) = &g.out else { return Err("export needs --out".into()) };
        if format.is_none() {
            *format = match out.extension().and_then(|e| e.to_str()) {
                Some("svg") => Some(Format::Svg),
                Some("csv") => Some(Format::Csv),
                Some("json") => Some(Format::Json),
                _ => return Err("cannot infer the export format from --out; pass --format".into()),
            };
        }
    }
    Ok(())
}

fn build(bonds: &[Bond], horizon: usize) -> Res<CoxeterSystem> {
    match bonds {
        [m] => CoxeterSystem::dihedral("st", *m, horizon),
        [m_rt, m_rs, m_st] => CoxeterSystem::rank3(*m_rt, *m_rs, *m_st, horizon),
        _ => unreachable!("checked in resolve"),
    }
    .map_err(err)
}

fn weight_fn(g: &Global) -> Res<WeightFunction> {
    WeightFunction::new(g.weights.as_ref().expect("resolved").0.clone()).map_err(err)
}

/// The system, enumerated up to `--horizon` or else `default`.
fn system(g: &Global, default: usize) -> Res<Arc<CoxeterSystem>> {
    let bonds = &g.system.as_ref().expect("resolved").0;
    Ok(Arc::new(build(bonds, g.horizon.unwrap_or(default))?))
}

fn table(g: &Global, sys: &Arc<CoxeterSystem>) -> Res<(KLTable, CacheStats)> {
    let alg = HeckeAlgebra::new(sys.clone(), weight_fn(g)?).map_err(err)?;
    let t = KLTable::new(Arc::new(alg));
    let stats = cache::load(&t, g.cache_dir.as_deref());
    Ok((t, stats))
}

fn finish(t: &KLTable, mut stats: CacheStats, mut out: Outcome) -> Res<Outcome> {
    cache::store(t, &mut stats).map_err(err)?;
    out.cache = Some(stats);
    Ok(out)
}

fn cells(g: &Global, sys: &Arc<CoxeterSystem>) -> Res<Cells> {
    Cells::new(sys.clone(), weight_fn(g)?).map_err(err)
}

fn id(sys: &CoxeterSystem, word: &str) -> Res<ElemId> {
    sys.parse_id(word).map_err(err)
}

fn name(sys: &CoxeterSystem, w: ElemId) -> String {
    sys.element(w).to_string()
}

/// Length of the longest finite rank-2 parabolic, so that every `w_J` fits.
fn longest_bond(g: &Global) -> usize {
    g.system.as_ref().map_or(1, |b| b.0.iter().filter_map(|m| m.finite()).max().unwrap_or(1) as usize)
}

fn terms(sys: &CoxeterSystem, h: &HeckeElt) -> Value {
    Value::Array(h.iter().map(|(&w, c)| json!({ "element": name(sys, w), "coeff": c.to_string() })).collect())
}

/// Runs `f` over `items` on `threads` workers; results keep the order of
/// `items`.
fn pool<T: Sync, R: Send>(items: &[T], threads: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let mut done: Vec<(usize, R)> = std::thread::scope(|s| {
        let workers: Vec<_> = (0..threads.min(items.len()).max(1))
            .map(|_| {
                s.spawn(|| {
                    let mut got = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(item) = items.get(i) else { break };
                        got.push((i, f(item)));
                    }
                    got
                })
            })
            .collect();
        workers.into_iter().flat_map(|w| w.join().expect("worker panicked")).collect()
    });
    done.sort_by_key(|p| p.0);
    done.into_iter().map(|p| p.1).collect()
}

fn dispatch(cli: &Cli) -> Res<Outcome> {
    let g = &cli.global;
    let r = g.radius;
    match &cli.command {
        Command::Ball => {
            let sys = system(g, r)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for w in sys.ball_ids(r).map_err(err)? {
                let _ = writeln!(text, "{} {}", sys.length_of(w), name(&sys, w));
                rows.push(json!({ "length": sys.length_of(w), "element": name(&sys, w) }));
            }
            Ok(Outcome::new(text, Value::Array(rows)))
        }
        Command::Kl { w, y } => {
            let sys = system(g, w.len().max(y.as_ref().map_or(0, |y| y.len())))?;
            let (t, stats) = table(g, &sys)?;
            let wid = id(&sys, w)?;
            let col = t.column(wid).map_err(err)?;
            let ws = name(&sys, wid);
            let mut text = String::new();
            let mut rows = Vec::new();
            let only = y.as_deref().map(|y| id(&sys, y)).transpose()?;
            let entries: Vec<(ElemId, String)> = match only {
                Some(y) => vec![(y, t.kl_poly(y, wid).map_err(err)?.to_string())],
                None => col.entries.iter().map(|(y, p)| (*y, p.to_string())).collect(),
            };
            for (y, p) in entries {
                let _ = writeln!(text, "p_{{{},{ws}}} = {p}", name(&sys, y));
                rows.push(json!({ "y": name(&sys, y), "w": ws, "p": p }));
            }
            finish(&t, stats, Outcome::new(text, Value::Array(rows)))
        }
        Command::Cbasis { w } => {
            let sys = system(g, w.len())?;
            let (t, stats) = table(g, &sys)?;
            let wid = id(&sys, w)?;
            let c = t.c_basis(wid).map_err(err)?;
            let text = format!("C_{} = {}\n", name(&sys, wid), c.display(&sys, "T"));
            let result = json!({ "w": name(&sys, wid), "terms": terms(&sys, &c) });
            finish(&t, stats, Outcome::new(text, result))
        }
        Command::Mult { x, y, basis } => {
            let sys = system(g, x.len() + y.len())?;
            let (t, stats) = table(g, &sys)?;
            let (xi, yi) = (id(&sys, x)?, id(&sys, y)?);
            let (h, sym) = match basis {
                Basis::T => (t.algebra().t_product(xi, yi).map_err(err)?, "T"),
                Basis::C => (t.c_product(xi, yi).map_err(err)?, "C"),
            };
            let (xs, ys) = (name(&sys, xi), name(&sys, yi));
            let text = format!("{sym}_{xs} {sym}_{ys} = {}\n", h.display(&sys, sym));
            let result = json!({ "x": xs, "y": ys, "basis": sym, "terms": terms(&sys, &h) });
            finish(&t, stats, Outcome::new(text, result))
        }
        Command::Afun { w } => afun(g, w.as_deref()),
        Command::Dset => {
            let sys = system(g, longest_bond(g))?;
            let levels = d_levels(&sys, &weight_fn(g)?).map_err(err)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (n, ds) in &levels {
                let words: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(text, "D_{n} = {{{}}}", words.join(", "));
                rows.push(json!({ "n": n, "elements": words }));
            }
            Ok(Outcome::new(text, Value::Array(rows)))
        }
        Command::Decompose { w } => {
            let sys = system(g, w.len().max(longest_bond(g)))?;
            let c = cells(g, &sys)?;
            let wid = id(&sys, w)?;
            let dec = c.decompose(wid).map_err(err)?;
            let n = c.aprime(dec.d).map_err(err)?;
            let (b, d, y) = (name(&sys, dec.b), name(&sys, dec.d), name(&sys, dec.y));
            let text = format!("{} = {b}.{d}.{y}\nd = {} in D_{n}\n", name(&sys, wid), c.name(dec.d));
            let result = json!({ "w": name(&sys, wid), "b": b, "d": d, "y": y, "d_name": c.name(dec.d), "n": n });
            Ok(Outcome::new(text, result))
        }
        Command::Cells { csv } => {
            let sys = system(g, r.max(longest_bond(g)))?;
            let c = cells(g, &sys)?;
            let rows = c.cell_table(r).map_err(err)?;
            if let Some(path) = csv {
                c.write_cell_csv(r, path).map_err(err)?;
            }
            let mut text = String::from("word length a_pred b d y cell\n");
            for row in &rows {
                let _ = writeln!(
                    text,
                    "{} {} {} {} {} {} {}",
                    row.word, row.length, row.a_pred, row.b, row.d, row.y, row.cell_id
                );
            }
            Ok(Outcome::new(text, serde_json::to_value(&rows).map_err(|e| e.to_string())?))
        }
        Command::Verify { check, d, case, lemma, graph_radius } => match check {
            Check::P(k) => verify_p(g, *k, *graph_radius),
            Check::Bound => verify_bound(g),
            Check::Strict => verify_strict(g, d.as_deref()),
            Check::Length => verify_length(g, d.as_deref()),
            Check::Expansion => verify_expansions(g, case.as_deref()),
            Check::Dihedral => verify_dihedral(g, lemma.as_deref()),
        },
        Command::Critical { mode, m, k, n } => critical(*mode, *m, *k, *n),
        Command::Export { m, n, format } => {
            let loci = critical_lines_2d(*m, *n);
            let path = g.out.as_ref().expect("resolved");
            let fmt = match format.expect("resolved") {
                Format::Svg => ExportFormat::Svg,
                Format::Csv => ExportFormat::Csv,
                Format::Json => ExportFormat::Json,
            };
            export_arrangement(&loci, fmt, path).map_err(err)?;
            let text = format!("wrote {} loci to {}\n", loci.len(), path.display());
            Ok(Outcome::new(text, json!({ "loci": loci.len(), "path": path })))
        }
    }
}

fn afun(g: &Global, w: Option<&str>) -> Res<Outcome> {
    let r = g.radius;
    let sys = system(g, (2 * r).max(w.map_or(0, str::len)).max(longest_bond(g)))?;
    let (t, stats) = table(g, &sys)?;
    let cp = CProducts::new(&t);
    let cells = if sys.is_finite_group() { None } else { Cells::new(sys.clone(), weight_fn(g)?).ok() };
    let pred = |w: ElemId| cells.as_ref().map(|c| c.a_pred(w)).transpose().map_err(err);
    let mut text = String::from("w a_ball witness a_pred delta n_w\n");
    let mut rows = Vec::new();
    let mut line = |w: &str, a: u64, wit: (String, String), ap: Option<u64>, delta: u64, nw: String| {
        let aps = ap.map_or("-".to_string(), |a| a.to_string());
        let _ = writeln!(text, "{w} {a} ({},{}) {aps} {delta} {nw}", wit.0, wit.1);
        rows.push(json!({
            "element": w, "a_ball": a, "witness": [wit.0, wit.1], "a_pred": ap, "delta": delta, "n_w": nw
        }));
    };
    match w {
        Some(w) => {
            let wid = id(&sys, w)?;
            let p = profile(&cp, cells.as_ref(), wid, r).map_err(err)?;
            line(&p.element.to_string(), p.a_ball, (p.witness.0.to_string(), p.witness.1.to_string()), p.a_pred, p.delta, p.n_w.to_string());
        }
        None => {
            let all = a_ball_all(&cp, r).map_err(err)?;
            for z in sys.ball_ids(r).map_err(err)? {
                let m = all[z as usize].expect("z occurs in C_e C_z");
                let (delta, nw) = delta_n(&t, z).map_err(err)?;
                line(&name(&sys, z), m.degree as u64, (name(&sys, m.x), name(&sys, m.y)), pred(z)?, delta, nw.to_string());
            }
        }
    }
    let note = format!("a_ball is the maximum over x, y in ball({r})");
    finish(&t, stats, Outcome::new(text, json!({ "radius": r, "note": note, "rows": rows })))
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "FAIL"
    }
}

fn verify_p(g: &Global, k: u8, graph_radius: Option<usize>) -> Res<Outcome> {
    let r = g.radius;
    let graph = graph_radius.unwrap_or(2 * r);
    let sys = system(g, (2 * r).max(graph).max(longest_bond(g)) + 1)?;
    let (t, stats) = table(g, &sys)?;
    let cp = CProducts::new(&t);
    let a = if sys.is_finite_group() && sys.is_complete() {
        ASource::exact(&cp).map_err(err)?
    } else {
        ASource::predicted(&cells(g, &sys)?)
    };
    let source = if a.is_exact() { "exact" } else { "predicted" };
    let report = PChecker::new(&cp, r, graph, a).and_then(|c| c.check(k)).map_err(err)?;
    let mut text = format!(
        "{}: {} ({} checked on ball({r}), a-values {source})\n",
        report.statement,
        verdict(report.passed()),
        report.checked
    );
    if let Some(c) = &report.counterexample {
        let _ = writeln!(text, "counterexample: {c}");
    }
    for c in &report.caveats {
        let _ = writeln!(text, "note: {c}");
    }
    let mut result = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    result["a_values"] = json!(source);
    let mut out = Outcome::new(text, result);
    out.passed = Some(report.passed());
    finish(&t, stats, out)
}

fn verify_bound(g: &Global) -> Res<Outcome> {
    let r = g.radius;
    let n = g.level.ok_or("verify --check bound needs --level")?;
    let sys = system(g, (2 * r).max(longest_bond(g)))?;
    let (t, stats) = table(g, &sys)?;
    let c = cells(g, &sys)?;
    let report = Truncation::new(&t, &c, n).and_then(|q| q.check_bound(r)).map_err(err)?;
    let mut text = format!(
        "bound N={n}: {} ({} pairs on ball({r}), max degree {}, attained {} times)\n",
        verdict(report.passed()),
        report.pairs_checked,
        report.max_degree.map_or("-".to_string(), |d| d.to_string()),
        report.attained
    );
    if let Some((x, y)) = &report.witness {
        let _ = writeln!(text, "witness: x={x} y={y}");
    }
    for f in &report.failures {
        let _ = writeln!(text, "counterexample: x={} y={} degree {}: {}", f.x, f.y, f.degree, f.reason);
    }
    let mut out = Outcome::new(text, serde_json::to_value(&report).map_err(|e| e.to_string())?);
    out.passed = Some(report.passed());
    finish(&t, stats, out)
}

/// The requested distinguished element, or all of `D` (at `--level` if
/// given).
fn targets(g: &Global, c: &Cells, d: Option<&str>) -> Res<Vec<ElemId>> {
    let sys = c.system();
    match d {
        Some(d) => Ok(vec![id(sys, d)?]),
        None => Ok(c
            .d_set()
            .entries
            .iter()
            .filter(|e| g.level.is_none_or(|n| e.aprime == n))
            .map(|e| e.id)
            .collect()),
    }
}

fn verify_strict(g: &Global, d: Option<&str>) -> Res<Outcome> {
    let r = g.radius;
    let sys = system(g, 2 * r + longest_bond(g))?;
    let (t, stats) = table(g, &sys)?;
    let c = cells(g, &sys)?;
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut passed = true;
    for d in targets(g, &c, d)? {
        let n = g.level.unwrap_or(c.aprime(d).map_err(err)?);
        let rep = Truncation::new(&t, &c, n).and_then(|q| q.check_strict(d, r)).map_err(err)?;
        passed &= rep.passed();
        let _ = writeln!(
            text,
            "strict d={} N={n}: {} ({} triples, {} strict)",
            rep.d,
            verdict(rep.passed()),
            rep.triples_checked,
            rep.strict_checked
        );
        for f in &rep.failures {
            let _ = writeln!(text, "counterexample: {}", serde_json::to_string(f).map_err(|e| e.to_string())?);
        }
        reports.push(rep);
    }
    let mut out = Outcome::new(text, serde_json::to_value(&reports).map_err(|e| e.to_string())?);
    out.passed = Some(passed);
    finish(&t, stats, out)
}

fn verify_length(g: &Global, d: Option<&str>) -> Res<Outcome> {
    let r = g.radius;
    let sys = system(g, 2 * r + longest_bond(g))?;
    let c = cells(g, &sys)?;
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut passed = true;
    for d in targets(g, &c, d)? {
        let rep = c.length_additivity_check(d, r).map_err(err)?;
        passed &= rep.passed();
        let _ = writeln!(text, "length d={}: {} ({} pairs)", rep.d, verdict(rep.passed()), rep.pairs_checked);
        for (b, y) in &rep.failures {
            let _ = writeln!(text, "counterexample: b={b} y={y}");
        }
        reports.push(rep);
    }
    let mut out = Outcome::new(text, serde_json::to_value(&reports).map_err(|e| e.to_string())?);
    out.passed = Some(passed);
    Ok(out)
}

fn verify_expansions(g: &Global, case: Option<&str>) -> Res<Outcome> {
    let mut opts = ExpansionOptions::default();
    if let Some(b) = &g.system {
        match b.0.as_slice() {
            [Bond::Finite(2), m_rs, m_st] => opts.systems = Some(vec![(*m_rs, *m_st)]),
            _ => return Err("expansion checks need --system 2,m_rs,m_st".into()),
        }
    }
    let ids: Vec<&str> = match case {
        Some(c) => vec![c],
        None => case_ids(),
    };
    let results = pool(&ids, g.threads, |id| verify_expansion(id, &opts));
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut passed = true;
    for res in results {
        let rep = res.map_err(err)?;
        passed &= rep.passed();
        let _ = writeln!(text, "{}: {} ({} samples)", rep.case_id, verdict(rep.passed()), rep.samples_run);
        if let Some(f) = rep.failures.first() {
            let _ = writeln!(
                text,
                "counterexample: {} weights {:?} {:?} x={} w={} y={}: {}",
                f.system, f.weights, f.variant, f.x, f.w, f.y, f.reason
            );
        }
        reports.push(rep);
    }
    let mut out = Outcome::new(text, serde_json::to_value(&reports).map_err(|e| e.to_string())?);
    out.passed = Some(passed);
    Ok(out)
}

fn verify_dihedral(g: &Global, lemma: Option<&str>) -> Res<Outcome> {
    let (Some(b), Some(w)) = (&g.system, &g.weights) else { unreachable!("resolved") };
    let ([m], [l1, l2]) = (b.0.as_slice(), w.0.as_slice()) else {
        return Err("dihedral checks need a dihedral --system m and two weights".into());
    };
    let lemmas: Vec<&str> = match lemma {
        Some(l) => vec![l],
        None => LEMMA_IDS.to_vec(),
    };
    let results = pool(&lemmas, g.threads, |l| dihedral_sweep(*m, (*l1, *l2), l));
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut passed = true;
    for res in results {
        let rep = res.map_err(err)?;
        passed &= rep.passed;
        let scope = if rep.applicable { format!("{} checked", rep.checked) } else { "not applicable".into() };
        let _ = writeln!(text, "{}: {} ({scope})", rep.lemma, verdict(rep.passed));
        if let Some(c) = &rep.counterexample {
            let _ = writeln!(text, "counterexample: {c}");
        }
        for n in rep.notes.iter().filter(|_| rep.applicable) {
            let _ = writeln!(text, "note: {n}");
        }
        reports.push(rep);
    }
    let mut out = Outcome::new(text, serde_json::to_value(&reports).map_err(|e| e.to_string())?);
    out.passed = Some(passed);
    Ok(out)
}

fn critical(mode: Mode, m: u32, k: Option<u32>, n: Option<u32>) -> Res<Outcome> {
    match mode {
        Mode::OneD => {
            let k = k.ok_or("critical --mode 1d needs --k")?;
            let values: Vec<String> = critical_values_1d(m, k).iter().map(|v| v.to_string()).collect();
            Ok(Outcome::new(format!("{}\n", values.join(" ")), json!({ "m": m, "k": k, "values": values })))
        }
        Mode::TwoD => {
            let n = n.ok_or("critical --mode 2d needs --n")?;
            let loci = critical_lines_2d(m, n);
            let mut text = String::new();
            for l in &loci {
                let tag = if l.critical() { "critical".to_string() } else { format!("different {}", case_of(&l.verdict)) };
                let conds: Vec<String> = l.conditions.iter().map(|c| c.to_string()).collect();
                let extra = if conds.is_empty() { String::new() } else { format!(" [{}]", conds.join(", ")) };
                let _ = writeln!(text, "{} {}: {} = 0 on {} {}{extra}: {tag}", l.d1, l.d2, l.form, l.chamber, l.segment);
            }
            Ok(Outcome::new(text, serde_json::to_value(&loci).map_err(|e| e.to_string())?))
        }
        Mode::Triples => {
            let n = n.ok_or("critical --mode triples needs --n")?;
            let pts = triple_points(m, n);
            let mut text = String::new();
            for p in &pts {
                let names: Vec<&str> = p.members.iter().map(|d| d.name()).collect();
                let _ = writeln!(text, "({},{}) N/b={} {{{}}}", p.point.x, p.point.y, p.level, names.join(", "));
            }
            Ok(Outcome::new(text, serde_json::to_value(&pts).map_err(|e| e.to_string())?))
        }
    }
}

fn case_of(v: &Verdict) -> String {
    match v {
        Verdict::Same => String::new(),
        Verdict::Different { case, mirrored } => format!("case {case}{}", if *mirrored { "'" } else { "" }),
    }
}
