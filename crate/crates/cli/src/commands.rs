use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_traits::Signed;
use spinlogic::circuit::{check_embedding, compile, gap_check, Circuit, CompiledModel, Mode};
use spinlogic::gadget::{builtin_catalogue, parse_catalogue, verify_gadget, write_catalogue, Gadget, GateFn};
use spinlogic::kmap::{default_names, format_sop, parse_truth_vector, prime_implicants, render_kmap, sop_cover};
use spinlogic::model_file::ModelFile;
use spinlogic::polynomial::{ket_label, parse_bool_poly, parse_spin_poly};
use spinlogic::reduction::{embed_levels, reduce_poly, reduce_sigma_product, LevelSpec, ReductionTrace, SigmaVariant};
use spinlogic::spectrum::{enumerate_capped, restrict};
use spinlogic::synthesis::{format_certificate, synthesize, Objective, SynthesisProblem, SynthesisResult};
use spinlogic::{BooleanPoly, Convention, Scalar, ENUMERATION_CAP};

use crate::config::Config;
use crate::report::Report;
use crate::{Command, ConventionArg, ModeArg, Num, ObjectiveArg, PolyFormat, TableFormat, VariantArg};

/// Rows printed in full by `spectrum` up to this many qubits.
const FULL_TABLE_QUBITS: usize = 12;
/// Longest list of states printed in a report.
const LIST_LIMIT: usize = 64;

pub fn run(cmd: Command, cfg: &Config) -> Result<Report> {
    match cmd {
        Command::Compile {
            netlist,
            output,
            trace,
            delta,
            mode,
            convention,
            verify,
            cap,
        } => cmd_compile(&netlist, output, trace, delta, mode, convention, verify, cap, cfg),
        Command::Verify {
            gadget,
            catalogue,
            convention,
            format,
        } => cmd_verify(&gadget, catalogue.as_deref(), convention, format, cfg),
        Command::Synthesize {
            relation,
            mediators,
            gap,
            objective,
            format,
            convention,
            name,
            output,
        } => cmd_synthesize(
            &relation, mediators, &gap, objective, format, convention, &name, output, cfg,
        ),
        Command::Reduce {
            input,
            sigma,
            j,
            variant,
            shift,
            levels,
            output,
            trace,
            delta,
            convention,
            verify,
        } => {
            let src = match (input, sigma, levels) {
                (Some(p), None, None) => Source::Poly(p),
                (None, Some(k), None) => Source::Sigma { k, j, variant, shift },
                (None, None, Some(p)) => Source::Levels(p),
                _ => bail!("give exactly one of a polynomial file, --sigma or --levels"),
            };
            cmd_reduce(src, output, trace, delta, convention, verify, cfg)
        }
        Command::Spectrum {
            input,
            logical,
            format,
            csv,
            cap,
            convention,
        } => cmd_spectrum(&input, logical, format, csv, cap, convention, cfg),
        Command::Kmap { input, rows, names } => cmd_kmap(&input, rows, names),
        Command::Solve {
            model,
            clamps,
            weight,
            cap,
        } => cmd_solve(&model, &clamps, weight, cap, cfg),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn number(s: &str, what: &str) -> Result<Num> {
    Num::parse_text(s).ok_or_else(|| anyhow!("bad {what} {s:?}"))
}

fn positive(s: &str, what: &str) -> Result<Num> {
    let v = number(s, what)?;
    if !v.is_positive() {
        bail!("{what} must be positive, got {s}");
    }
    Ok(v)
}

fn delta_or(flag: Option<String>, cfg: &Config) -> Result<Option<Num>> {
    match flag {
        Some(s) => Ok(Some(positive(&s, "delta")?)),
        None => Ok(cfg.delta.clone()),
    }
}

fn convention(flag: Option<ConventionArg>, cfg: &Config) -> Convention {
    flag.map(Convention::from).unwrap_or(cfg.convention)
}

fn cap(flag: Option<usize>, cfg: &Config) -> Result<usize> {
    let c = flag.unwrap_or(cfg.cap);
    if c > ENUMERATION_CAP {
        bail!("cap {c} exceeds {ENUMERATION_CAP}");
    }
    Ok(c)
}

/// Explicit path, else `<stem>.<ext>` in the configured output directory or
/// next to the input.
fn out_path(explicit: Option<PathBuf>, input: Option<&Path>, fallback: &str, ext: &str, cfg: &Config) -> PathBuf {
    if let Some(p) = explicit {
        return p;
    }
    let stem = input
        .and_then(|p| p.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| fallback.to_string());
    let dir = cfg
        .output_dir
        .clone()
        .or_else(|| input.and_then(|p| p.parent()).map(Path::to_path_buf))
        .unwrap_or_default();
    dir.join(format!("{stem}.{ext}"))
}

fn kets(indices: &[u64], n: usize) -> Vec<String> {
    let mut out: Vec<String> = indices.iter().take(LIST_LIMIT).map(|&i| ket_label(i, n)).collect();
    if indices.len() > LIST_LIMIT {
        out.push("...".into());
    }
    out
}

fn compile_trace(path: &Path, m: &CompiledModel<Num>) -> String {
    let mut out = format!(
        "source netlist {}\nmode {}\ndelta {}\n",
        path.display(),
        m.mode.as_str(),
        m.delta.to_text()
    );
    for (w, q) in &m.wire_map {
        out.push_str(&format!("wire {w} qubit {q} role {}\n", m.roles[*q]));
    }
    for p in &m.placements {
        let qs: Vec<String> = p.qubits.iter().map(|q| q.to_string()).collect();
        out.push_str(&format!(
            "gadget {} {} qubits {}\n",
            p.gate,
            p.function.name(),
            qs.join(" ")
        ));
    }
    for c in &m.clamps {
        out.push_str(&format!(
            "clamp {} qubit {} value {} weight {}\n",
            c.wire,
            c.qubit,
            u8::from(c.value),
            c.weight.to_text()
        ));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn cmd_compile(
    netlist: &Path,
    output: Option<PathBuf>,
    trace: Option<PathBuf>,
    delta: Option<String>,
    mode: ModeArg,
    conv: Option<ConventionArg>,
    verify: bool,
    cap_flag: Option<usize>,
    cfg: &Config,
) -> Result<Report> {
    let circuit = Circuit::<Num>::parse(&read(netlist)?).with_context(|| format!("in {}", netlist.display()))?;
    let mode = match mode {
        ModeArg::TwoLocal => Mode::TwoLocal,
        ModeArg::KLocal => Mode::KLocal,
    };
    let m = compile(&circuit, delta_or(delta, cfg)?, mode)?;
    let conv = convention(conv, cfg);
    let model_path = out_path(output, Some(netlist), "circuit", "model", cfg);
    let trace_path = trace.unwrap_or_else(|| model_path.with_extension("trace"));
    write(&model_path, &m.to_model_file(conv).write())?;
    write(&trace_path, &compile_trace(netlist, &m))?;

    let mut r = Report::new("compile");
    r.kv("qubits", m.num_qubits());
    r.kv("inputs", circuit.inputs.len());
    r.kv("gates", circuit.gates.len());
    r.kv(
        "mediators",
        m.qubits_with(spinlogic::model_file::QubitRole::Mediator).len(),
    );
    r.kv("mode", m.mode.as_str());
    r.kv("delta", m.delta.to_text());
    r.kv("convention", conv);
    r.kv("degree", m.hamiltonian().degree());
    r.kv("model", model_path.display());
    r.kv("trace", trace_path.display());
    if verify {
        let chk = check_embedding(&circuit, &m, cap(cap_flag, cfg)?)?;
        let n = m.num_qubits();
        let visible = n - m.qubits_with(spinlogic::model_file::QubitRole::Mediator).len();
        r.kv("ground_energy", chk.ground_energy.to_text());
        r.kv("ground_states", chk.ground_states);
        r.kv("expected_states", chk.expected.len());
        r.kv("gap", chk.gap.as_ref().map_or("none".into(), |g| g.to_text()));
        r.list("missing", &kets(&chk.missing, visible));
        r.list("unexpected", &kets(&chk.unexpected, visible));
        r.check("embedding", chk.pass);
        if !m.clamps.is_empty() {
            let g = gap_check(&m)?;
            r.kv("clamp_norm", g.clamp_norm_bound.to_text());
            r.kv("clamp_margin", g.margin.to_text());
            r.check("clamp_gap", !g.flagged);
            if let Some(l) = g.lemma {
                r.kv("lemma_total", l.lambda_total.to_text());
                r.kv("lemma_restricted", l.lambda_restricted.to_text());
                r.check("lemma", l.equality_holds);
            }
        }
    }
    Ok(r)
}

fn find_gadget(all: Vec<Gadget<Num>>, name: &str) -> Result<Vec<Gadget<Num>>> {
    if name.eq_ignore_ascii_case("all") {
        return Ok(all);
    }
    let canonical = name
        .parse::<GateFn>()
        .map(|f| f.name().to_string())
        .unwrap_or_else(|_| name.to_string());
    let hit: Vec<Gadget<Num>> = all
        .into_iter()
        .filter(|g| g.name.eq_ignore_ascii_case(&canonical))
        .collect();
    if hit.is_empty() {
        bail!(spinlogic::Error::UnknownGadget(name.to_string()));
    }
    Ok(hit)
}

fn cmd_verify(
    name: &str,
    catalogue: Option<&Path>,
    conv: Option<ConventionArg>,
    format: PolyFormat,
    cfg: &Config,
) -> Result<Report> {
    let all = match catalogue {
        Some(p) => parse_catalogue::<Num>(&read(p)?).with_context(|| format!("in {}", p.display()))?,
        None => builtin_catalogue(),
    };
    let conv = convention(conv, cfg);
    let mut r = Report::new("verify");
    for g in find_gadget(all, name)? {
        let rep = verify_gadget(&g);
        r.kv("gadget", &g.name);
        let slots: Vec<String> = g
            .slot_names
            .iter()
            .zip(&g.roles)
            .map(|(s, role)| format!("{s}:{}", role.as_str()))
            .collect();
        r.list("slots", &slots);
        match format {
            PolyFormat::Bool => r.kv("penalty", &g.penalty),
            PolyFormat::Spin => r.kv(&format!("penalty_{conv}"), g.spin_form(conv)),
        }
        r.kv("gap", g.gap.to_text());
        r.kv(
            "achieved_gap",
            rep.achieved_gap.as_ref().map_or("none".into(), |v| v.to_text()),
        );
        r.list("ground_states", &rep.ground_kets(g.num_slots()));
        for f in &rep.failures {
            r.kv("failure", f);
        }
        r.check("status", rep.pass);
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cmd_synthesize(
    relation: &Path,
    mediators: usize,
    gap: &str,
    objective: ObjectiveArg,
    format: PolyFormat,
    conv: Option<ConventionArg>,
    name: &str,
    output: Option<PathBuf>,
    cfg: &Config,
) -> Result<Report> {
    let rel = parse_truth_vector(&read(relation)?).with_context(|| format!("in {}", relation.display()))?;
    let mut p = SynthesisProblem::<Num>::new(rel, mediators).with_gap(positive(gap, "gap")?);
    p.objective = match objective {
        ObjectiveArg::Max => Objective::MaxCoefficient,
        ObjectiveArg::Sum => Objective::SumCoefficients,
    };
    let conv = convention(conv, cfg);
    let mut r = Report::new("synthesize");
    r.kv("logical", p.num_logical());
    r.kv("mediators", mediators);
    r.kv("gap", p.gap.to_text());
    match synthesize(&p)? {
        SynthesisResult::Feasible {
            mut gadget,
            branch,
            pattern,
        } => {
            gadget.name = name.to_string();
            let rep = verify_gadget(&gadget);
            r.kv("status", "feasible");
            r.kv("branch", branch);
            r.list("pattern", &kets(&pattern, mediators));
            match format {
                PolyFormat::Bool => r.kv("penalty", &gadget.penalty),
                PolyFormat::Spin => r.kv(&format!("penalty_{conv}"), gadget.spin_form(conv)),
            }
            r.list("ground_states", &rep.ground_kets(gadget.num_slots()));
            if let Some(path) = output {
                write(&path, &write_catalogue(std::slice::from_ref(&gadget)))?;
                r.kv("catalogue", path.display());
            }
            r.check("verified", rep.pass);
        }
        SynthesisResult::Infeasible(cert) => {
            r.kv("status", "infeasible");
            for line in format_certificate(&cert, p.num_logical() + mediators, mediators).lines() {
                r.kv("certificate", line);
            }
            r.check("certificate_verified", cert.verify(&p)?);
        }
    }
    Ok(r)
}

pub enum Source {
    Poly(PathBuf),
    Sigma {
        k: usize,
        j: String,
        variant: VariantArg,
        shift: Option<PathBuf>,
    },
    Levels(PathBuf),
}

fn parse_numbers(text: &str) -> Result<Vec<Num>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            out.push(Num::parse_text(tok).ok_or_else(|| spinlogic::Error::Parse {
                line: i + 1,
                message: format!("bad number {tok:?}"),
            })?);
        }
    }
    Ok(out)
}

fn max_abs<'a>(vals: impl IntoIterator<Item = &'a Num>) -> Num {
    vals.into_iter().map(|v| v.abs()).max().unwrap_or_default()
}

/// `2 m + 1`, the smallest integer-stepped delta clearing `2 m`.
fn auto_delta(m: Num) -> Num {
    Num::two() * m + Num::from_int(1)
}

/// Target landscape, computed only when checked.
type Target = Box<dyn Fn() -> Result<Vec<Num>>>;

fn cmd_reduce(
    src: Source,
    output: Option<PathBuf>,
    trace: Option<PathBuf>,
    delta: Option<String>,
    conv: Option<ConventionArg>,
    verify: bool,
    cfg: &Config,
) -> Result<Report> {
    let delta = delta_or(delta, cfg)?;
    let conv = convention(conv, cfg);
    let (t, target, input): (ReductionTrace<Num>, Target, Option<PathBuf>) = match src {
        Source::Poly(path) => {
            let p = parse_bool_poly::<Num>(&read(&path)?, None).with_context(|| format!("in {}", path.display()))?;
            let d = delta
                .unwrap_or_else(|| auto_delta(max_abs(p.terms().filter(|(m, _)| m.degree() >= 3).map(|(_, c)| c))));
            let t = reduce_poly(&p, &d)?;
            (t, Box::new(move || Ok(p.to_truth_vector()?)), Some(path))
        }
        Source::Sigma { k, j, variant, shift } => {
            let j = number(&j, "J")?;
            let y = match &shift {
                Some(path) => Some(
                    parse_bool_poly::<Num>(&read(path)?, Some(k)).with_context(|| format!("in {}", path.display()))?,
                ),
                None => None,
            };
            let d = delta.unwrap_or_else(|| auto_delta(j.abs()));
            let variant = match variant {
                VariantArg::Parity => SigmaVariant::ParityChain,
                VariantArg::TwoMediator => SigmaVariant::TwoMediatorK3,
            };
            let t = reduce_sigma_product(k, &j, &d, variant, y.as_ref())?;
            let target = move || {
                Ok((0..1u64 << k)
                    .map(|a| {
                        let s = if a.count_ones() % 2 == 0 { j.clone() } else { -j.clone() };
                        s + y.as_ref().map_or_else(Num::default, |y| y.eval_index(a))
                    })
                    .collect())
            };
            (t, Box::new(target), None)
        }
        Source::Levels(path) => {
            let energies = parse_numbers(&read(&path)?).with_context(|| format!("in {}", path.display()))?;
            let spec = LevelSpec::from_energies(&energies)?;
            let d = delta.unwrap_or_else(|| auto_delta(max_abs(&spec.levels)));
            let t = embed_levels(&spec, &d)?;
            (t, Box::new(move || Ok(energies.clone())), Some(path))
        }
    };
    let fallback = match &t.original {
        spinlogic::reduction::Original::SigmaProduct { k, .. } => format!("sigma{k}"),
        _ => "reduced".into(),
    };
    let model_path = out_path(output, input.as_deref(), &fallback, "model", cfg);
    let trace_path = trace.unwrap_or_else(|| model_path.with_extension("trace"));
    write(&model_path, &t.to_model_file(conv).write())?;
    write(&trace_path, &t.to_trace_text())?;

    let mut r = Report::new("reduce");
    r.kv("logical", t.num_logical);
    r.kv("fresh", t.fresh.len());
    r.kv("qubits", t.num_qubits());
    r.kv("degree", t.reduced.degree());
    r.kv("delta", t.delta.to_text());
    r.kv("convention", conv);
    r.kv("model", model_path.display());
    r.kv("trace", trace_path.display());
    if verify {
        let land = t.restricted()?;
        let want = target()?;
        let got = land.mins();
        let bad: Vec<String> = (0..want.len())
            .filter(|&i| got[i] != want[i])
            .take(LIST_LIMIT)
            .map(|i| {
                format!(
                    "{}:{}!={}",
                    ket_label(i as u64, t.num_logical),
                    got[i].to_text(),
                    want[i].to_text()
                )
            })
            .collect();
        r.list("mismatch", &bad);
        r.check("landscape", bad.is_empty());
    }
    Ok(r)
}

/// A model file, or a Boolean or spin polynomial.
fn load_hamiltonian(text: &str, conv: Convention) -> Result<(BooleanPoly<Num>, Option<ModelFile<Num>>)> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    let key = first.split_whitespace().next().unwrap_or("");
    if matches!(
        key,
        "num_qubits" | "convention" | "offset" | "delta" | "h" | "J" | "K" | "role" | "wire"
    ) {
        let m = ModelFile::<Num>::parse(text)?;
        return Ok((m.to_bool(), Some(m)));
    }
    match parse_bool_poly::<Num>(text, None) {
        Ok(p) => Ok((p, None)),
        Err(e) => match parse_spin_poly::<Num>(text, conv, None) {
            Ok(s) => Ok((s.to_bool(), None)),
            Err(_) => Err(e.into()),
        },
    }
}

fn cmd_spectrum(
    input: &Path,
    logical: Option<Vec<usize>>,
    format: TableFormat,
    csv: Option<PathBuf>,
    cap_flag: Option<usize>,
    conv: Option<ConventionArg>,
    cfg: &Config,
) -> Result<Report> {
    let (h, model) =
        load_hamiltonian(&read(input)?, convention(conv, cfg)).with_context(|| format!("in {}", input.display()))?;
    let n = h.num_vars();
    let rep = enumerate_capped(&h, cap(cap_flag, cfg)?)?;
    if let Some(path) = &csv {
        write(path, &rep.to_csv())?;
    }
    if format == TableFormat::Csv {
        return Ok(Report {
            text: rep.to_csv(),
            pass: true,
        });
    }
    let mut r = Report::new("spectrum");
    r.kv("qubits", n);
    r.kv("ground_energy", rep.ground_energy.to_text());
    r.kv("ground_degeneracy", rep.ground_space.len());
    r.list("ground_states", &kets(&rep.ground_space, n));
    r.kv("gap", rep.gap().map_or("none".into(), |g| g.to_text()));
    r.kv("levels", rep.levels().len());
    if n <= FULL_TABLE_QUBITS {
        for (i, e) in rep.energies.iter().enumerate() {
            r.kv("energy", format!("{} {}", ket_label(i as u64, n), e.to_text()));
        }
    }
    let logical = logical.unwrap_or_else(|| model.as_ref().map_or_else(|| (0..n).collect(), |m| m.logical_qubits()));
    if logical.len() < n {
        let land = restrict(&rep, &logical)?;
        r.list("logical", &logical);
        for (i, e) in land.entries.iter().enumerate() {
            r.kv(
                "landscape",
                format!(
                    "{} {} degeneracy {}",
                    ket_label(i as u64, logical.len()),
                    e.min.to_text(),
                    e.degeneracy
                ),
            );
        }
    }
    Ok(r)
}

fn cmd_kmap(input: &Path, rows: Option<usize>, names: Option<Vec<String>>) -> Result<Report> {
    let tv = parse_truth_vector(&read(input)?).with_context(|| format!("in {}", input.display()))?;
    let n = tv.len().trailing_zeros() as usize;
    let names = names.unwrap_or_else(|| default_names(n));
    if names.len() != n {
        bail!("{} names given for {n} variables", names.len());
    }
    let grid = render_kmap(&tv, rows, Some(&names))?;
    let cover = sop_cover(&tv)?;
    let mut r = Report::new("kmap");
    r.kv("vars", n);
    r.kv("ones", tv.iter().filter(|&&b| b).count());
    r.block(&grid);
    for p in prime_implicants(&tv)? {
        r.kv("prime", p.display_with(&names));
    }
    r.kv("sop", format_sop(&cover, &names));
    Ok(r)
}

fn cmd_solve(
    model: &Path,
    clamps: &[String],
    weight: Option<String>,
    cap_flag: Option<usize>,
    cfg: &Config,
) -> Result<Report> {
    let f = ModelFile::<Num>::parse(&read(model)?).with_context(|| format!("in {}", model.display()))?;
    let n = f.num_qubits();
    let mut parsed = Vec::with_capacity(clamps.len());
    for c in clamps {
        let (name, v) = c
            .split_once('=')
            .ok_or_else(|| anyhow!("clamp {c:?} is not NAME=VALUE"))?;
        let q = match f.wire(name) {
            Some(q) => q,
            None => match name.parse::<usize>() {
                Ok(q) if q < n => q,
                _ => bail!(spinlogic::Error::Wire(format!("no wire or qubit named {name:?}"))),
            },
        };
        let v = match v {
            "0" => false,
            "1" => true,
            other => bail!("clamp value must be 0 or 1, got {other:?}"),
        };
        parsed.push((name.to_string(), q, v));
    }
    let k = parsed.len();
    let w = match (weight, &f.delta) {
        (Some(s), _) => positive(&s, "weight")?,
        (None, Some(d)) => d.clone() / Num::from_int(2 * k as i64 + 1),
        (None, None) if k == 0 => Num::from_int(1),
        (None, None) => bail!("model has no delta line; pass --weight"),
    };
    let mut h = f.to_bool();
    for (_, q, v) in &parsed {
        let x = BooleanPoly::var(n, *q)?.scale(&w);
        h = if *v {
            &(&h + &BooleanPoly::constant(n, w.clone())) - &x
        } else {
            &h + &x
        };
    }
    let rep = enumerate_capped(&h, cap(cap_flag, cfg)?)?;

    let mut r = Report::new("solve");
    r.kv("qubits", n);
    r.kv("clamps", k);
    if k > 0 {
        r.kv("clamp_weight", w.to_text());
        if let Some(d) = &f.delta {
            let margin = d.clone() - Num::two() * Num::from_int(k as i64) * w.clone();
            r.kv("clamp_margin", margin.to_text());
            r.check("clamp_gap", margin.is_positive());
        }
    }
    r.kv("ground_energy", rep.ground_energy.to_text());
    r.kv("ground_states", rep.ground_space.len());
    r.kv("unique", rep.ground_space.len() == 1);
    let readout: Vec<(String, usize)> = if f.wires.is_empty() {
        f.logical_qubits().into_iter().map(|q| (format!("q{q}"), q)).collect()
    } else {
        f.wires.clone()
    };
    for &idx in rep.ground_space.iter().take(LIST_LIMIT) {
        let vals: Vec<String> = readout
            .iter()
            .map(|(name, q)| format!("{name}={}", (idx >> (n - 1 - q)) & 1))
            .collect();
        r.kv("state", format!("{} {}", ket_label(idx, n), vals.join(" ")));
    }
    Ok(r)
}
