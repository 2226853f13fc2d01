use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use commsemi::abelian::{rfag_type, smith_normal_form, RfagType};
use commsemi::closure::{closure_cover, largest_fiber, rfsl as build_rfsl, ImplicationFamily};
use commsemi::cyclic::{build_strong_semilattice, count_strong_semilattices, exq as exq_set, Diamond, Frame};
use commsemi::extension::{classify, is_realizable, is_strongly_realizable, realize, verify_realizer, Quintuple};
use commsemi::rewriting::{CompletionBudget, Presentation, RewriteError};
use commsemi::structure::{idempotent_semilattice, structure_report};
use commsemi::zn::{component_report, zn_semigroup};
use commsemi::{CayleySemigroup, CyclicType, IntMatrix};
use serde_json::json;

use crate::error::CliError;
use crate::{Format, RunConfig};

type Out = Result<String, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn no_dot(cmd: &str) -> CliError {
    CliError::input("cli", format!("`{cmd}` has no dot output"))
}

fn emit(cfg: &RunConfig, s: &CayleySemigroup) -> Result<(), CliError> {
    match &cfg.emit_table {
        Some(path) => write(path, &s.to_table_text()),
        None => Ok(()),
    }
}

fn cyclic(m: u64, n: u64) -> Result<CyclicType, CliError> {
    CyclicType::new(m, n).map_err(|e| CliError::input("cli", e))
}

fn completion_budget(cfg: &RunConfig) -> CompletionBudget {
    CompletionBudget { max_rules: cfg.max_rules as usize, ..CompletionBudget::default() }
}

fn parse_presentation(path: &Path, text: &str) -> Result<Presentation, CliError> {
    Presentation::parse(text).map_err(|e| CliError::from(e).in_file(path))
}

fn presented_semigroup(cfg: &RunConfig, path: &Path, text: &str) -> Result<CayleySemigroup, CliError> {
    let system = parse_presentation(path, text)?.orient()?;
    let done = system.complete(&completion_budget(cfg))?.system;
    let count = done.enumerate_normal_forms()?.len() as u64;
    if count > cfg.max_elements {
        return Err(CliError::domain(
            "core_semigroup",
            format!("{count} normal forms exceed --max-elements {}", cfg.max_elements),
        ));
    }
    Ok(CayleySemigroup::from_presentation(&done)?)
}

pub fn complete(cfg: &RunConfig, path: &Path) -> Out {
    let text = read(path)?;
    let pres = parse_presentation(path, &text)?;
    let input = pres.orient()?;
    let done = input.complete(&completion_budget(cfg))?;
    let sys = &done.system;
    let show = |r| sys.display_rule(r).to_string();
    let added: Vec<String> = sys.rules().iter().filter(|r| !input.rules().contains(r)).map(show).collect();
    let removed: Vec<String> =
        input.rules().iter().filter(|r| !sys.rules().contains(r)).map(|r| input.display_rule(r).to_string()).collect();
    let rules: Vec<String> = sys.rules().iter().map(show).collect();
    let (forms, unbounded) = match sys.enumerate_normal_forms() {
        Ok(nfs) => (Some(nfs), None),
        Err(RewriteError::InfiniteNormalForms { generator }) => (None, Some(generator)),
        Err(e) => return Err(e.into()),
    };
    let forms: Option<Vec<String>> = forms.map(|v| v.iter().map(|w| w.display(sys.names()).to_string()).collect());
    match cfg.format {
        Format::Dot => Err(no_dot("complete")),
        Format::Json => Ok(pretty(&json!({
            "generators": sys.names(),
            "rules": rules,
            "added": added,
            "removed": removed,
            "stats": done.stats,
            "infinite": unbounded.is_some(),
            "elements": forms.as_ref().map(Vec::len),
            "normal_forms": forms,
        }))),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "generators: {}", sys.names().join(" "));
            let _ = writeln!(out, "rules ({}):", rules.len());
            for r in &rules {
                let _ = writeln!(out, "  {r}");
            }
            for (label, list) in [("added", &added), ("removed", &removed)] {
                if !list.is_empty() {
                    let _ = writeln!(out, "{label}: {}", list.join(", "));
                }
            }
            match (&forms, &unbounded) {
                (Some(f), _) => {
                    let _ = writeln!(out, "elements: {}", f.len());
                    let _ = writeln!(out, "normal forms: {}", f.join(", "));
                }
                (None, Some(g)) => {
                    let _ = writeln!(out, "elements: infinite (powers of {g} never reduce)");
                }
                (None, None) => unreachable!(),
            }
            Ok(out)
        }
    }
}

pub fn structure(cfg: &RunConfig, path: Option<&Path>, zn: Option<u64>) -> Out {
    let s = match (path, zn) {
        (_, Some(n)) => zn_semigroup(n, cfg.max_elements)?,
        (Some(path), None) => {
            let text = read(path)?;
            let is_presentation = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .find(|l| !l.is_empty())
                .is_some_and(|l| l.starts_with("gens:"));
            if is_presentation {
                presented_semigroup(cfg, path, &text)?
            } else {
                CayleySemigroup::parse_table(&text).map_err(|e| CliError::from(e).in_file(path))?
            }
        }
        (None, None) => return Err(CliError::input("cli", "give a file or --zn N")),
    };
    let report = structure_report(&s)?;
    emit(cfg, &s)?;
    Ok(match cfg.format {
        Format::Text => report.to_text(&s),
        Format::Dot => report.to_dot(&s),
        Format::Json => {
            let names: Vec<String> = (0..s.size()).map(|x| s.name(x)).collect();
            pretty(&json!({ "names": names, "report": report }))
        }
    })
}

fn brace(xs: &[u64]) -> String {
    let parts: Vec<String> = xs.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn exq(cfg: &RunConfig, m: u64, n: u64, m2: u64, n2: u64) -> Out {
    let set = exq_set(cyclic(m, n)?, cyclic(m2, n2)?);
    match cfg.format {
        Format::Text => Ok(format!("{}\n", brace(&set.exponents))),
        Format::Json => Ok(pretty(&json!(set))),
        Format::Dot => Err(no_dot("exq")),
    }
}

pub fn extend(cfg: &RunConfig, [m, n, m2, n2]: [u64; 4], k: Option<u64>, emit_path: Option<&Path>) -> Out {
    cyclic(m, n)?;
    cyclic(m2, n2)?;
    if cfg.format == Format::Dot {
        return Err(no_dot("extend"));
    }
    if let Some(k) = k {
        let q = Quintuple::new(m, n, m2, n2, k)?;
        let r = realize(&q)?;
        verify_realizer(&r).map_err(|w| CliError::domain("ideal_extension", format!("realizer of {q} fails: {w}")))?;
        if let Some(path) = emit_path.or(cfg.emit_table.as_deref()) {
            write(path, &r.semigroup.to_table_text())?;
        }
        let strong = is_strongly_realizable(&q);
        return Ok(match cfg.format {
            Format::Json => pretty(&json!({
                "quintuple": q,
                "realizable": is_realizable(&q),
                "strong": strong,
                "size": r.semigroup.size(),
                "table": r.semigroup,
            })),
            _ => format!(
                "{q}: realizable, {}\nrealizer: {} elements\n",
                if strong { "strong" } else { "not strong" },
                r.semigroup.size()
            ),
        });
    }
    let classes = classify(m, n, m2, n2)?;
    if cfg.format == Format::Json {
        return Ok(pretty(&json!({
            "upper": CyclicType { index: m, period: n },
            "lower": CyclicType { index: m2, period: n2 },
            "classes": classes,
        })));
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut out = format!("ideal extensions of C({m2},{n2}) by C({m},{n}) with ab = b^(k+1)\n");
    let _ = writeln!(out, "{:>4}  {:<10}  {:<6}  note", "k", "realizable", "strong");
    for c in &classes {
        let note = match (c.trivial, c.duplicate_of) {
            (true, _) => "trivial".to_string(),
            (false, Some(d)) => format!("same realizer as k={d}"),
            _ => String::new(),
        };
        let _ = writeln!(out, "{:>4}  {:<10}  {:<6}  {note}", c.k, yn(c.ordinary), yn(c.strong));
        out.truncate(out.trim_end().len());
        out.push('\n');
    }
    Ok(out)
}

pub fn frame(cfg: &RunConfig, path: &Path) -> Out {
    let text = read(path)?;
    let f = Frame::parse(&text).map_err(|e| CliError::from(e).in_file(path))?;
    let nodes = f.nodes();
    let sets: Vec<_> = f.edges().iter().map(|e| exq_set(nodes[e.upper].kind, nodes[e.lower].kind)).collect();
    let count = Diamond::from_frame(&f).ok().map(|d| count_strong_semilattices(&d));
    let complete = f.edges().iter().all(|e| e.k.is_some());
    let built = if complete { Some(build_strong_semilattice(&f)?) } else { None };
    if let Some(s) = &built {
        emit(cfg, s)?;
    }
    match cfg.format {
        Format::Dot => {
            let mut out = String::from("digraph frame {\n  rankdir=BT;\n");
            for nd in nodes {
                let _ = writeln!(out, "  \"{}\" [label=\"{} {}\"];", nd.name, nd.name, nd.kind);
            }
            for e in f.edges() {
                let label = e.k.map(|k| format!(" [label=\"k={k}\"]")).unwrap_or_default();
                let _ = writeln!(out, "  \"{}\" -> \"{}\"{label};", nodes[e.lower].name, nodes[e.upper].name);
            }
            out.push_str("}\n");
            Ok(out)
        }
        Format::Json => Ok(pretty(&json!({
            "frame": f,
            "exq": sets,
            "strong_count": count,
            "strong_semilattice": built,
        }))),
        Format::Text => {
            let mut out = String::from("nodes:\n");
            for nd in nodes {
                let _ = writeln!(out, "  {} {}", nd.name, nd.kind);
            }
            out.push_str("edges:\n");
            for (e, set) in f.edges().iter().zip(&sets) {
                let k = e.k.map(|k| format!("  k={k}")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "  {} > {}  exq = {}{k}",
                    nodes[e.upper].name,
                    nodes[e.lower].name,
                    brace(&set.exponents)
                );
            }
            if let Some(c) = &count {
                let _ = writeln!(out, "IS = {}", brace(&c.is_set));
                for &(k, l, r) in &c.choices {
                    let _ = writeln!(out, "  k={k}: {l} x {r}");
                }
                let _ = writeln!(out, "ss = {}", c.total);
            }
            if let Some(s) = &built {
                let _ = writeln!(out, "strong semilattice: {} elements", s.size());
            }
            Ok(out)
        }
    }
}

pub fn abelian(cfg: &RunConfig, path: &Path) -> Out {
    let text = read(path)?;
    let a = IntMatrix::parse(&text).map_err(|e| CliError::from(e).in_file(path))?;
    let snf = smith_normal_form(&a)?;
    let group = rfag_type(&a)?;
    let (free_rank, torsion) = match &group {
        RfagType::Finite { group } => (0, group),
        RfagType::Infinite { free_rank, torsion } => (*free_rank, torsion),
    };
    match cfg.format {
        Format::Dot => Err(no_dot("abelian")),
        Format::Json => Ok(pretty(&json!({
            "d": snf.d.to_rows(),
            "c": snf.c.to_rows(),
            "b": snf.b.to_rows(),
            "diagonal": snf.diagonal(),
            "invariant_factors": torsion.invariant_factors(),
            "group": group,
        }))),
        Format::Text => {
            let mut out = String::new();
            for (label, m) in [("D", &snf.d), ("C", &snf.c), ("B", &snf.b)] {
                let _ = writeln!(out, "{label}:\n{m}");
            }
            let factors: Vec<String> = torsion.invariant_factors().iter().map(u64::to_string).collect();
            let _ = writeln!(out, "invariant factors: {}", if factors.is_empty() { "none".into() } else { factors.join(" ") });
            if free_rank > 0 {
                let _ = writeln!(out, "free rank: {free_rank}");
            }
            let _ = writeln!(out, "group: {}", describe_group(free_rank, torsion));
            Ok(out)
        }
    }
}

fn describe_group(free_rank: usize, torsion: &commsemi::AbelianType) -> String {
    match (free_rank, torsion.invariant_factors().is_empty()) {
        (0, _) => torsion.to_string(),
        (r, true) => format!("Z^{r}"),
        (r, false) => format!("Z^{r} x {torsion}"),
    }
}

pub fn rfsl(cfg: &RunConfig, path: &Path) -> Out {
    let text = read(path)?;
    let family = ImplicationFamily::parse(&text).map_err(|e| CliError::from(e).in_file(path))?;
    let sigma = family.sigma()?;
    let cover = closure_cover(family.base.len(), &sigma, cfg.budget)?;
    let r = build_rfsl(&family, cfg.max_elements)?;
    let s = &r.semigroup;
    emit(cfg, s)?;
    let pool: Vec<usize> = (0..s.size()).filter(|&x| r.generators[x].count_ones() == 1).collect();
    let mut fibers = Vec::new();
    for x in 0..s.size() {
        let t = largest_fiber(s, x, &pool)?;
        fibers.push(t.map(|t| t.into_iter().map(|y| s.name(y)).collect::<Vec<_>>()));
    }
    let imps: Vec<String> = sigma.iter().map(|i| family.display_implication(i)).collect();
    match cfg.format {
        Format::Dot => {
            let sl = idempotent_semilattice(s);
            let mut out = String::from("digraph rfsl {\n  rankdir=BT;\n");
            for x in 0..s.size() {
                let _ = writeln!(out, "  e{x} [label=\"{}\"];", s.name(x));
            }
            // x below y when x * y = y
            for &(lo, hi) in &sl.covers {
                let _ = writeln!(out, "  e{} -> e{};", sl.elements[hi], sl.elements[lo]);
            }
            out.push_str("}\n");
            Ok(out)
        }
        Format::Json => {
            let elements: Vec<_> = (0..s.size())
                .map(|x| json!({ "name": s.name(x), "set": family.set_name(r.sets[x]), "largest_fiber": fibers[x] }))
                .collect();
            Ok(pretty(&json!({
                "base": family.base,
                "implications": imps,
                "rows": cover.rows,
                "closed_sets": cover.count.to_string(),
                "elements": elements,
                "table": s,
            })))
        }
        Format::Text => {
            let mut out = format!("base: {}\nimplications ({}):\n", family.base.join(" "), imps.len());
            for i in &imps {
                let _ = writeln!(out, "  {i}");
            }
            let _ = writeln!(out, "rows ({}):", cover.rows.len());
            for row in &cover.rows {
                let _ = writeln!(out, "  {row}");
            }
            let _ = writeln!(out, "closed sets: {}", cover.count);
            let _ = writeln!(out, "elements ({}):", s.size());
            for x in 0..s.size() {
                let fiber = fibers[x].as_ref().map(|t| t.join(" ")).unwrap_or_else(|| "-".into());
                let _ = writeln!(out, "  {} = {{{}}}  fiber: {fiber}", s.name(x), family.set_name(r.sets[x]));
            }
            Ok(out)
        }
    }
}

pub fn zn(cfg: &RunConfig, n: u64) -> Out {
    let report = component_report(n, cfg.max_elements)?;
    if cfg.emit_table.is_some() {
        emit(cfg, &zn_semigroup(n, cfg.max_elements)?)?;
    }
    let list = |xs: &[u64]| xs.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    match cfg.format {
        Format::Dot => Err(no_dot("zn")),
        Format::Json => Ok(pretty(&json!(report))),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "n: {n}");
            let _ = writeln!(out, "phi: {}", report.phi);
            let _ = writeln!(out, "unit group: {}", report.unit_group);
            let _ = writeln!(out, "crt moduli: {}", list(&report.crt.moduli));
            let _ = writeln!(out, "crt basis: {}", list(&report.crt.basis));
            let idem: Vec<u64> = report.components.iter().map(|c| c.idempotent).collect();
            let _ = writeln!(out, "idempotents: {}", list(&idem));
            let _ = writeln!(out, "{:>8}  {:<9}  {:>8}  {:>7}  kernel type", "e", "signature", "size", "kernel");
            for c in &report.components {
                let sig: String = c.signature.iter().map(|&b| if b { '1' } else { '0' }).collect();
                let _ = writeln!(
                    out,
                    "{:>8}  {:<9}  {:>8}  {:>7}  {}{}",
                    c.idempotent,
                    sig,
                    c.size,
                    c.kernel_size,
                    c.kernel_type,
                    if c.is_group { " (group)" } else { "" }
                );
            }
            Ok(out)
        }
    }
}
