//! `mtafrac`: PCP instances → prefix-PCP → 2-tape automata → affine GIFS,
//! with three-valued checks and exact rasters along the way.
//!
//! Exit status: 0 yes, 1 no, 3 unknown for commands that answer a question;
//! 0 for plain conversions; 2 for usage, input and I/O errors.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mtafrac::gifs::{
    box_stats, compile_gifs, interior_report, intersection_raster, outer_cover, rasterize,
    refine_cover, BoxCover, BoxStats, GifsGraph, InteriorOptions, Viewport, MAX_BOXES,
    MAX_RESOLUTION,
};
use mtafrac::io;
use mtafrac::mta::{
    accepting_lasso, check_universal, check_universal_prefix, is_dead_prefix, pad_pow2,
    search_universal_prefix, Bounds, ConfigPrefix, MultiTapeAutomaton, Verdict, Verdict3, Witness,
};
use mtafrac::pcp::{
    check_solution, reduce_pcp_to_prefix, search_prefix_pcp, PcpInstance, PrefixPcpSolution,
};
use mtafrac::rational::parse_rational;
use mtafrac::reductions::{
    blocking_config_universality, build, BuildOptions, ReductionOutput, Variant, X,
};
use report::{bounds_json, PipelineReport};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(
    name = "mtafrac",
    version,
    about = "Multi-tape automata, PCP reductions and exact GIFS attractors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a PCP instance to an equivalent prefix-PCP instance.
    ReducePcp {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Build the 3-state, 2-tape automaton of a prefix-PCP instance.
    BuildAutomaton {
        input: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(short, long)]
        out: PathBuf,
        /// Pad tape alphabets to power-of-two sizes with duplicate symbols.
        #[arg(long)]
        pad_pow2: bool,
    },
    /// Ask a question about a state; exit 0 yes, 1 no, 3 unknown.
    Check {
        automaton: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, value_enum)]
        query: Query,
        /// `pre:period|pre:period|…`, one part per tape (for `accepts`).
        #[arg(long)]
        config: Option<String>,
        /// Finite prefix `w1|w2|…` to test (for `universal-prefix`); without
        /// it a universal prefix is searched for.
        #[arg(long)]
        prefix: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
        #[arg(long)]
        report_json: Option<PathBuf>,
    },
    /// Compile an automaton to its affine GIFS.
    CompileGifs {
        automaton: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Rasterize the outer cover of an attractor to a binary PGM.
    Render {
        gifs: PathBuf,
        /// Vertex name; defaults to the first vertex.
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 512)]
        res: usize,
        /// Per-axis ranges `lo:hi,lo:hi` (rationals); defaults to the
        /// bounding box of the maps.
        #[arg(long)]
        viewport: Option<String>,
        /// Only pixels also covered by this vertex's attractor.
        #[arg(long)]
        and: Option<String>,
        #[arg(long, default_value_t = MAX_BOXES)]
        max_boxes: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Box counts, densities and dimension estimates per cover depth.
    Stats {
        gifs: PathBuf,
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = MAX_BOXES)]
        max_boxes: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run the whole chain on a PCP instance and report the topological
    /// verdict it encodes.
    Demo {
        input: PathBuf,
        #[arg(long, value_enum)]
        target: Target,
        outdir: PathBuf,
        #[arg(long)]
        pad_pow2: bool,
        #[command(flatten)]
        bounds: BoundArgs,
        /// Longest index word tried by the bounded prefix-PCP search.
        #[arg(long, default_value_t = 6)]
        pcp_bound: usize,
        /// Deepest cover for the image and the density trend.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, default_value_t = 256)]
        res: usize,
        #[arg(long, default_value_t = 200_000)]
        max_boxes: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Universality,
    UniversalPrefix,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Universality => Variant::Universality,
            VariantArg::UniversalPrefix => Variant::UniversalPrefix,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Query {
    Universal,
    UniversalPrefix,
    Accepts,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    EqualsSquare,
    EmptyInterior,
}

#[derive(Args, Clone, Copy)]
struct BoundArgs {
    #[arg(long, default_value_t = Bounds::default().max_prefix_len)]
    max_prefix_len: usize,
    #[arg(long, default_value_t = Bounds::default().max_ext_len)]
    max_ext_len: usize,
    #[arg(long, default_value_t = Bounds::default().overhang_cap)]
    overhang_cap: usize,
    #[arg(long, default_value_t = Bounds::default().max_beliefs)]
    max_beliefs: usize,
}

impl From<BoundArgs> for Bounds {
    fn from(b: BoundArgs) -> Self {
        Bounds {
            max_prefix_len: b.max_prefix_len,
            max_ext_len: b.max_ext_len,
            overhang_cap: b.overhang_cap,
            max_beliefs: b.max_beliefs,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, data: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, data).with_context(|| format!("writing {}", path.display()))
}

fn load_pcp(path: &Path) -> Result<PcpInstance> {
    io::parse_pcp_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_automaton(path: &Path) -> Result<MultiTapeAutomaton> {
    Ok(io::parse_automaton_json(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))?
        .0)
}

fn load_gifs(path: &Path) -> Result<GifsGraph> {
    io::parse_gifs_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn vertex_of(g: &GifsGraph, name: Option<&str>) -> Result<usize> {
    match name {
        Some(n) => Ok(g.vertex(n)?),
        None => Ok(0),
    }
}

fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::ReducePcp { input, out } => {
            let inst = load_pcp(&input)?;
            let reduced = reduce_pcp_to_prefix(&inst)?;
            write(&out, io::pcp_to_json(&reduced))?;
            println!(
                "{} pairs -> {} pairs, wrote {}",
                inst.len(),
                reduced.len(),
                out.display()
            );
            Ok(0)
        }
        Command::BuildAutomaton {
            input,
            variant,
            out,
            pad_pow2: pad,
        } => {
            let inst = load_pcp(&input)?;
            let built = build(&inst, variant.into(), &BuildOptions::default())?;
            let (m, padded) = maybe_pad(&built, pad)?;
            let json = if padded {
                io::automaton_to_json(&m, None)
            } else {
                io::automaton_to_json(&m, Some(&io::Provenance::of(&built)))
            };
            write(&out, json)?;
            println!(
                "{} automaton: {} states, {} transitions, wrote {}",
                Variant::from(variant),
                m.states().len(),
                m.transitions().len(),
                out.display()
            );
            if padded {
                println!("note: {}", pad_note());
            }
            Ok(0)
        }
        Command::Check {
            automaton,
            state,
            query,
            config,
            prefix,
            bounds,
            report_json,
        } => {
            let m = load_automaton(&automaton)?;
            let q = m.state(&state)?;
            let bounds = Bounds::from(bounds);
            let mut r = PipelineReport::new("check");
            r.bounds = Some(bounds_json(&bounds));
            match query {
                Query::Universal => {
                    if config.is_some() || prefix.is_some() {
                        bail!("--query universal takes neither --config nor --prefix");
                    }
                    let v = r.stage("universal", || check_universal(&m, q, bounds));
                    r.verdict(format!("universal({state})"), Some(&m), &v);
                }
                Query::UniversalPrefix => {
                    if config.is_some() {
                        bail!("--query universal-prefix takes --prefix, not --config");
                    }
                    match prefix {
                        Some(p) => {
                            let x = ConfigPrefix::parse(&m, &p)?;
                            let v = r.stage("universal-prefix", || {
                                check_universal_prefix(&m, q, &x, bounds)
                            });
                            r.verdict(format!("universal-prefix({state}, {p})"), Some(&m), &v);
                        }
                        None => {
                            let (_, v) =
                                r.stage("prefix-search", || search_universal_prefix(&m, q, bounds));
                            r.verdict(format!("has-universal-prefix({state})"), Some(&m), &v);
                        }
                    }
                }
                Query::Accepts => {
                    let Some(cs) = config else {
                        bail!("--query accepts needs --config")
                    };
                    if prefix.is_some() {
                        bail!("--query accepts takes --config, not --prefix");
                    }
                    let c = io::parse_config(&m, &cs)?;
                    let lasso = r.stage("accepts", || accepting_lasso(&m, q, &c))?;
                    let query = format!("accepts({state}, {})", io::format_config(&m, &c));
                    match lasso {
                        Some(l) => {
                            let v = Verdict3::yes(
                                Witness::Run {
                                    stem: l.stem,
                                    cycle: l.cycle,
                                },
                                bounds,
                            );
                            r.verdict(query, Some(&m), &v);
                        }
                        None => {
                            // exact decision: the certificate is the input itself
                            let digest =
                                input_digest(&[&io::automaton_to_json(&m, None), &state, &cs]);
                            r.push_verdict(
                                query,
                                "no",
                                json!({
                                    "witness": {"kind": "exhausted-quotient-graph", "digest": digest},
                                    "note": "exact: no accepting lasso in the finite quotient graph",
                                }),
                            );
                        }
                    }
                }
            }
            finish(&r, report_json.as_deref())
        }
        Command::CompileGifs { automaton, out } => {
            let m = load_automaton(&automaton)?;
            let g = compile_gifs(&m)?;
            write(&out, io::gifs_to_json(&g))?;
            println!(
                "GIFS: dimension {}, {} vertices, {} maps, wrote {}",
                g.dim(),
                g.vertices().len(),
                g.edges().len(),
                out.display()
            );
            Ok(0)
        }
        Command::Render {
            gifs,
            vertex,
            depth,
            res,
            viewport,
            and,
            max_boxes,
            out,
        } => {
            // refuse before spending time on the cover
            if res == 0 || res > MAX_RESOLUTION {
                bail!("resolution {res} outside 1..={MAX_RESOLUTION}");
            }
            let g = load_gifs(&gifs)?;
            let q = vertex_of(&g, vertex.as_deref())?;
            let other = and.as_deref().map(|n| g.vertex(n)).transpose()?;
            let vp = match viewport {
                Some(s) => parse_viewport(&s, g.dim())?,
                None => Viewport::of_box(&mtafrac::gifs::bounding_box(&g))?,
            };
            let cover = outer_cover(&g, depth, max_boxes)?;
            let img = match other {
                Some(r) => intersection_raster(&cover, q, r, &vp, res)?,
                None => rasterize(&cover, q, &vp, res)?,
            };
            write(&out, io::write_pgm(&img))?;
            println!(
                "{}x{} image, {} of {} pixels set, wrote {}",
                img.width,
                img.height,
                img.count(),
                img.width * img.height,
                out.display()
            );
            Ok(0)
        }
        Command::Stats {
            gifs,
            vertex,
            depth,
            max_boxes,
            json,
        } => {
            let g = load_gifs(&gifs)?;
            let q = vertex_of(&g, vertex.as_deref())?;
            let mut rows = vec![box_stats(&outer_cover(&g, 0, max_boxes)?, q)];
            let mut cover = outer_cover(&g, 0, max_boxes)?;
            for _ in 0..depth {
                cover = refine_cover(&g, &cover, max_boxes)?;
                rows.push(box_stats(&cover, q));
            }
            if json {
                let v: Vec<Value> = rows.iter().map(stats_json).collect();
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                println!("{:>3} {:>12} {:>12} {:>10}", "k", "N_k", "density", "dim");
                for s in &rows {
                    let dim = s
                        .dim_estimate
                        .map_or("-".to_string(), |d| format!("{d:.6}"));
                    println!(
                        "{:>3} {:>12} {:>12.8} {:>10}",
                        s.depth, s.count, s.density, dim
                    );
                }
            }
            Ok(0)
        }
        Command::Demo {
            input,
            target,
            outdir,
            pad_pow2,
            bounds,
            pcp_bound,
            depth,
            res,
            max_boxes,
        } => {
            let opts = DemoOptions {
                target,
                pad: pad_pow2,
                bounds: bounds.into(),
                pcp_bound,
                depth,
                res,
                max_boxes,
            };
            let r = demo(&input, &outdir, &opts)?;
            let json_path = outdir.join("report.json");
            write(&outdir.join("report.txt"), r.to_text())?;
            finish(&r, Some(&json_path))
        }
    }
}

fn finish(r: &PipelineReport, json_path: Option<&Path>) -> Result<u8> {
    print!("{}", r.to_text());
    if let Some(p) = json_path {
        write(p, r.to_json())?;
    }
    Ok(r.exit_code())
}

fn input_digest(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

fn parse_viewport(s: &str, d: usize) -> Result<Viewport> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for axis in s.split(',') {
        let (a, b) = axis
            .split_once(':')
            .with_context(|| format!("viewport axis `{axis}` is not `lo:hi`"))?;
        lo.push(parse_rational(a.trim())?);
        hi.push(parse_rational(b.trim())?);
    }
    if lo.len() != d {
        bail!("viewport has {} axes, the GIFS has dimension {d}", lo.len());
    }
    Ok(Viewport::new(lo, hi)?)
}

fn stats_json(s: &BoxStats) -> Value {
    json!({
        "depth": s.depth,
        "count": s.count,
        "density": s.density,
        "dim_estimate": s.dim_estimate,
    })
}

fn pad_note() -> &'static str {
    "tape alphabets were padded with duplicate symbols to power-of-two sizes, so every \
     map is diagonal with negative powers of two on the diagonal; duplicates behave like \
     their originals, so universality and universal prefixes are unchanged"
}

fn maybe_pad(out: &ReductionOutput, pad: bool) -> Result<(MultiTapeAutomaton, bool)> {
    if !pad {
        return Ok((out.automaton.clone(), false));
    }
    let p = pad_pow2(&out.automaton, BuildOptions::default().max_transitions)?;
    let padded = p.was_padded();
    Ok((p.automaton, padded))
}

struct DemoOptions {
    target: Target,
    pad: bool,
    bounds: Bounds,
    pcp_bound: usize,
    depth: usize,
    res: usize,
    max_boxes: usize,
}

/// Covers at depths `0..=depth`, stopping early once a level would exceed
/// `max_boxes`.
fn covers(g: &GifsGraph, depth: usize, max_boxes: usize) -> Result<Vec<BoxCover>> {
    let mut out = vec![outer_cover(g, 0, max_boxes)?];
    while out.len() <= depth {
        match refine_cover(g, out.last().expect("nonempty"), max_boxes) {
            Ok(c) => out.push(c),
            Err(mtafrac::Error::TooManyBoxes(_)) => break,
            Err(e) => return Err(e.into()),
        }
    }
    Ok(out)
}

fn solution_json(inst: &PcpInstance, sol: &PrefixPcpSolution) -> Value {
    let idx = |w: &mtafrac::pcp::IndexWord| {
        w.indices()
            .iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(".")
    };
    json!({
        "kind": "prefix-pcp-solution",
        "upper": idx(sol.upper()),
        "lower": idx(sol.lower()),
        "common_word": inst.render(&sol.long_side_word(inst)),
    })
}

fn demo(input: &Path, outdir: &Path, o: &DemoOptions) -> Result<PipelineReport> {
    fs::create_dir_all(outdir).with_context(|| format!("creating {}", outdir.display()))?;
    let name = match o.target {
        Target::EqualsSquare => "demo equals-square",
        Target::EmptyInterior => "demo empty-interior",
    };
    let mut r = PipelineReport::new(name);
    r.bounds = Some(json!({
        "belief": bounds_json(&o.bounds),
        "pcp_bound": o.pcp_bound,
        "cover_depth": o.depth,
        "resolution": o.res,
        "max_boxes": o.max_boxes,
    }));

    let inst = load_pcp(input)?;
    let reduced = r.stage("reduce", || reduce_pcp_to_prefix(&inst))?;
    let path = outdir.join("prefixpcp.json");
    write(&path, io::pcp_to_json(&reduced))?;
    r.artifact("prefix-pcp", &path);

    let variant = match o.target {
        Target::EqualsSquare => Variant::Universality,
        Target::EmptyInterior => Variant::UniversalPrefix,
    };
    let built = r.stage("build", || {
        build(&reduced, variant, &BuildOptions::default())
    })?;
    let (m, padded) = if o.pad {
        r.stage("pad", || maybe_pad(&built, true))?
    } else {
        (built.automaton.clone(), false)
    };
    let path = outdir.join("automaton.json");
    let prov = (!padded).then(|| io::Provenance::of(&built));
    write(&path, io::automaton_to_json(&m, prov.as_ref()))?;
    r.artifact("automaton", &path);

    let g = r.stage("compile", || compile_gifs(&m))?;
    let path = outdir.join("gifs.json");
    write(&path, io::gifs_to_json(&g))?;
    r.artifact("gifs", &path);

    // bounded evidence on the combinatorial side
    let sol = r.stage("pcp-search", || search_prefix_pcp(&reduced, o.pcp_bound));
    let sol = sol.filter(|s| check_solution(&reduced, s).unwrap_or(false));
    match &sol {
        Some(s) => r.push_verdict(
            "prefix-PCP instance solvable",
            "yes",
            json!({"witness": solution_json(&reduced, s)}),
        ),
        None => r.push_verdict(
            "prefix-PCP instance solvable",
            "unknown",
            json!({"note": format!("no solution with index words of length ≤ {}", o.pcp_bound)}),
        ),
    }

    let bounds = o.bounds;
    let q = X;
    let covers = r.stage("covers", || covers(&g, o.depth, o.max_boxes))?;
    let trend: Vec<Value> = covers[1..]
        .iter()
        .map(|c| stats_json(&box_stats(c, q)))
        .collect();
    match o.target {
        Target::EqualsSquare => {
            let mut v = r.stage("check", || check_universal(&m, q, bounds));
            if v.is_unknown() {
                // a solution blocks a finite configuration prefix
                if let Some(s) = &sol {
                    let blocked = blocking_config_universality(&built, s)?;
                    if is_dead_prefix(&m, q, &blocked) {
                        v = Verdict3::no(Witness::DeadPrefix(blocked), bounds);
                        v.note = Some("blocked prefix built from the prefix-PCP solution".into());
                    }
                }
            }
            if v.value != Verdict::Yes {
                r.density_trend = Some(trend);
            }
            r.notes.push(
                "X_X = [0,1]^2 exactly when the prefix-PCP instance, and so the input PCP instance, \
                 has no solution"
                    .into(),
            );
            r.verdict("X_X = [0,1]^2", Some(&m), &v);
        }
        Target::EmptyInterior => {
            let opts = InteriorOptions {
                bounds,
                // the trend comes from the covers above
                trend_depth: 0,
                max_boxes: o.max_boxes,
            };
            let rep = r.stage("interior", || interior_report(&g, q, Some(&m), &opts))?;
            r.verdict("X_X = [0,1]^2", Some(&m), &rep.equals_cube);
            if !rep.interior.is_yes() {
                r.density_trend = Some(trend);
            }
            r.notes.push(
                "X_X has nonempty interior exactly when X has a universal prefix, which happens \
                 exactly when the prefix-PCP instance has no solution"
                    .into(),
            );
            let query = "X_X has empty interior";
            if rep.interior.is_yes() {
                let mut detail = io::verdict_json(Some(&m), &rep.interior);
                if let Some(b) = &rep.interior_box {
                    let fmt = |v: &[mtafrac::rational::Rational]| {
                        v.iter()
                            .map(mtafrac::rational::format_rational)
                            .collect::<Vec<_>>()
                    };
                    detail["interior_box"] = json!({"lo": fmt(&b.lo), "hi": fmt(&b.hi)});
                }
                detail.as_object_mut().map(|d| d.remove("verdict"));
                r.push_verdict(query, "no", detail);
            } else if let Some(s) = &sol {
                r.push_verdict(
                    query,
                    "yes",
                    json!({
                        "witness": solution_json(&reduced, s),
                        "note": "a prefix-PCP solution rules out every universal prefix",
                    }),
                );
            } else {
                let mut detail = io::verdict_json(Some(&m), &rep.interior);
                detail.as_object_mut().map(|d| d.remove("verdict"));
                r.push_verdict(query, "unknown", detail);
            }
        }
    }

    let cover = covers.last().expect("depth 0 always fits");
    if cover.depth < o.depth {
        r.notes.push(format!(
            "image uses cover depth {} (depth {} exceeds {} boxes)",
            cover.depth, o.depth, o.max_boxes
        ));
    }
    let img = r.stage("render", || {
        rasterize(cover, q, &Viewport::unit(g.dim()), o.res)
    })?;
    let path = outdir.join("attractor.pgm");
    write(&path, io::write_pgm(&img))?;
    r.artifact("image", &path);

    if padded {
        r.notes.push(pad_note().into());
    }
    // keep the target question last: it sets the exit status
    if let Some(i) = r
        .verdicts
        .iter()
        .position(|v| v.query.starts_with("prefix-PCP"))
    {
        let v = r.verdicts.remove(i);
        r.verdicts.insert(0, v);
    }
    Ok(r)
}
