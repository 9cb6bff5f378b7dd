//! Command-line pipeline for the q-Steiner search engine.
//!
//! Subcommands mirror the stages of a search: `theory-table` for the
//! closed-form order-3 survey, `orbits`/`km` for orbit and matrix
//! construction, `solve`/`estimate`/`split`/`run` for the exact-cover layer,
//! `campaign` for the full symmetry-breaking pipeline, and
//! `verify`/`normalizer-check` for independent checking of artifacts.
//!
//! Exit codes: 0 success, 1 mathematical negative (no solution, failed
//! verification), 2 usage or input error. Every command that writes results
//! also writes a `.manifest` recording the tool version, the full command
//! line and content hashes of all inputs and outputs, so a run can be
//! reproduced and checked bit for bit.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use qsteiner::campaign::{
    parse_campaign_config, run_campaign, run_jobs, CampaignConfig, CampaignVerdict, ProbeConfig,
};
use qsteiner::gf2::Subspace;
use qsteiner::group::{
    closure, is_normalizing, parse_group_file, MatrixGroup, DEFAULT_CLOSURE_CAP,
};
use qsteiner::km::{
    assemble_design, build_km_matrix, filter_lambda1, parse_blocks_file, parse_km_file,
    verify_design, write_blocks_file, write_km_file, write_orbit_file, KMMatrix,
    OrbitMeta,
};
use qsteiner::rng::SplitMix64;
use qsteiner::solver::{
    estimate_tree_size, parse_jobs_file, solve, split_prefixes, write_jobs_file,
    write_outcomes_file, Budget, ExactCoverInstance, JobOutcome, SolveStatus,
};
use qsteiner::theory::{order3_table, DesignParams};
use qsteiner::action::{canonical_in_orbit, orbit_partition};

const USAGE: &str = "\
qsteiner - search engine for binary q-analogs of Steiner triple systems

usage: qsteiner <command> [options]

commands:
  theory-table --v <v...> [--out FILE]
      closed-form survey of order-3 automorphism types: structure counts,
      forced fixed-block counts and exclusion verdicts

  orbits --group FILE [--v V] --k K --out FILE [--cap N]
      orbit partition of the k-subspaces under the group

  km --group FILE [--v V] --t T --k K [--lambda L] [--filter] --out BASE [--cap N]
      Kramer-Mesner matrix; writes BASE.km, BASE.rows.orb, BASE.cols.orb

  solve --km BASE [--force c,..] [--exclude c,..] [--all]
        [--budget-nodes N] [--budget-seconds S] [--out FILE]
        [--emit-blocks FILE --group FILE]
      dancing-links search over the 0/1 system

  estimate --km BASE --probes N [--seed S] [--force c,..] [--exclude c,..]
      random-descent estimate of the search tree size

  split --km BASE --level L [--force c,..] [--exclude c,..] --out FILE
      store all live search paths down to the given depth as jobs

  run --km BASE --jobs FILE [--force c,..] [--workers W] [--all]
      [--budget-nodes N] [--budget-seconds S] [--checkpoint FILE] --out FILE
      execute stored jobs on a work queue; checkpoint allows resume

  campaign --config FILE [--probe-nodes N] [--workers W] [--level L]
           [--split-tasks N] [--rounds N] [--out DIR]
      normalizer classes, force-then-exclude loop, pair fixing, job splits

  verify --design FILE --t T [--k K] [--v V] --lambda L
      check the defining coverage property of a blocks file directly

  normalizer-check --group FILE --normalizer FILE [--order N]
                   [--sample N] [--seed S] [--km BASE] [--cap N]
      verify the normalizer generators, enumerate the group, report induced
      column classes

exit codes: 0 success, 1 mathematical negative, 2 usage/input error
";

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    match run(&argv) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type AnyError = Box<dyn std::error::Error>;

fn run(argv: &[String]) -> Result<u8, AnyError> {
    let Some(command) = argv.get(1) else {
        eprint!("{USAGE}");
        return Ok(2);
    };
    let args = Args::parse(&argv[2..])?;
    match command.as_str() {
        "theory-table" => cmd_theory_table(&args, argv),
        "orbits" => cmd_orbits(&args, argv),
        "km" => cmd_km(&args, argv),
        "solve" => cmd_solve(&args, argv),
        "estimate" => cmd_estimate(&args, argv),
        "split" => cmd_split(&args, argv),
        "run" => cmd_run(&args, argv),
        "campaign" => cmd_campaign(&args, argv),
        "verify" => cmd_verify(&args, argv),
        "normalizer-check" => cmd_normalizer_check(&args, argv),
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            Ok(0)
        }
        other => Err(format!("unknown command {other:?}; try `qsteiner help`").into()),
    }
}

// ---------------------------------------------------------------------------
// argument handling
// ---------------------------------------------------------------------------

struct Args {
    values: HashMap<String, Vec<String>>,
}

impl Args {
    fn parse(tokens: &[String]) -> Result<Self, AnyError> {
        let mut values: HashMap<String, Vec<String>> = HashMap::new();
        let mut key: Option<String> = None;
        for tok in tokens {
            if let Some(stripped) = tok.strip_prefix("--") {
                key = Some(stripped.to_string());
                values.entry(stripped.to_string()).or_default();
            } else {
                let Some(k) = &key else {
                    return Err(format!("unexpected argument {tok:?}").into());
                };
                values.get_mut(k).unwrap().push(tok.clone());
            }
        }
        Ok(Args { values })
    }

    fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn one(&self, key: &str) -> Result<&str, AnyError> {
        match self.values.get(key).map(Vec::as_slice) {
            Some([v]) => Ok(v),
            Some(_) => Err(format!("--{key} takes exactly one value").into()),
            None => Err(format!("missing required --{key}").into()),
        }
    }

    fn opt(&self, key: &str) -> Result<Option<&str>, AnyError> {
        match self.values.get(key).map(Vec::as_slice) {
            Some([v]) => Ok(Some(v)),
            Some([]) => Err(format!("--{key} needs a value").into()),
            Some(_) => Err(format!("--{key} takes exactly one value").into()),
            None => Ok(None),
        }
    }

    fn many(&self, key: &str) -> Result<&[String], AnyError> {
        match self.values.get(key) {
            Some(v) if !v.is_empty() => Ok(v),
            _ => Err(format!("missing required --{key}").into()),
        }
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T, AnyError> {
        self.one(key)?.parse().map_err(|_| format!("bad value for --{key}").into())
    }

    fn parsed_opt<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, AnyError> {
        match self.opt(key)? {
            Some(v) => v.parse().map(Some).map_err(|_| format!("bad value for --{key}").into()),
            None => Ok(None),
        }
    }

    fn id_list(&self, key: &str) -> Result<Vec<u32>, AnyError> {
        match self.opt(key)? {
            None => Ok(Vec::new()),
            Some(list) => list
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().map_err(|_| format!("bad column id {s:?} in --{key}").into()))
                .collect(),
        }
    }
}

fn budget_from(args: &Args) -> Result<Budget, AnyError> {
    Ok(Budget {
        max_nodes: args.parsed_opt("budget-nodes")?,
        max_wall: args.parsed_opt::<u64>("budget-seconds")?.map(Duration::from_secs),
    })
}

// ---------------------------------------------------------------------------
// manifests
// ---------------------------------------------------------------------------

fn fnv64(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Reproducibility record written next to every output. Deliberately free of
/// timestamps: rerunning the same command must reproduce it bit for bit.
struct Manifest {
    lines: Vec<String>,
}

impl Manifest {
    fn new(argv: &[String]) -> Manifest {
        Manifest {
            lines: vec![
                format!("tool=qsteiner {}", env!("CARGO_PKG_VERSION")),
                format!("command={}", argv[1..].join(" ")),
            ],
        }
    }

    fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("{key}={value}"));
    }

    fn input(&mut self, path: &str) -> Result<(), AnyError> {
        let bytes = std::fs::read(path).map_err(|e| format!("cannot read {path}: {e}"))?;
        self.lines.push(format!("input={path} fnv64={:016x}", fnv64(&bytes)));
        Ok(())
    }

    fn output(&mut self, path: &Path, contents: &str) -> Result<(), AnyError> {
        std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        self.lines.push(format!("output={} fnv64={:016x}", path.display(), fnv64(contents.as_bytes())));
        Ok(())
    }

    fn write_next_to(&self, anchor: &Path) -> Result<(), AnyError> {
        let path = PathBuf::from(format!("{}.manifest", anchor.display()));
        std::fs::write(&path, self.lines.join("\n") + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(())
    }

    fn write_at(&self, path: &Path) -> Result<(), AnyError> {
        std::fs::write(path, self.lines.join("\n") + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// shared loading helpers
// ---------------------------------------------------------------------------

fn load_group(path: &str, cap: usize) -> Result<MatrixGroup, AnyError> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let raw = parse_group_file(&text)?;
    Ok(closure(raw.dim(), raw.generators(), cap)?)
}

fn km_paths(base: &str) -> (String, String, String) {
    (format!("{base}.km"), format!("{base}.rows.orb"), format!("{base}.cols.orb"))
}

fn load_km(base: &str) -> Result<KMMatrix, AnyError> {
    let (km_path, rows_path, cols_path) = km_paths(base);
    let read = |p: &str| std::fs::read_to_string(p).map_err(|e| format!("cannot read {p}: {e}"));
    Ok(parse_km_file(&read(&km_path)?, &read(&rows_path)?, &read(&cols_path)?)?)
}

fn instance_from(args: &Args, km: &KMMatrix) -> Result<ExactCoverInstance, AnyError> {
    Ok(ExactCoverInstance::from_km(km)?
        .with_forced(args.id_list("force")?)?
        .with_excluded(args.id_list("exclude")?)?)
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

fn cmd_theory_table(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let vs: Vec<u32> = args
        .many("v")?
        .iter()
        .map(|s| s.parse().map_err(|_| format!("bad dimension {s:?}")))
        .collect::<Result<_, _>>()?;
    let mut text = String::new();
    let mut survivors: Vec<(u32, u32)> = Vec::new();
    writeln!(text, "order-3 automorphism types over GF(2)")?;
    writeln!(text)?;
    writeln!(
        text,
        "{:>3} {:>3} {:>9} {:>20} {:>13} {:>12} {:>16} {:>8} {:>8} {:>6} {:>6}",
        "v", "f", "excluded", "reason", "fixed_points", "orbit_lines", "orbit_triangles",
        "planes7", "planes1", "F7", "F1"
    )?;
    for &v in &vs {
        for row in order3_table(v)? {
            let c = row.counts;
            let f7 = c.f7.map_or("-".to_string(), |x| x.to_string());
            writeln!(
                text,
                "{:>3} {:>3} {:>9} {:>20} {:>13} {:>12} {:>16} {:>8} {:>8} {:>6} {:>6}",
                row.ty.v,
                row.ty.f,
                if row.verdict.excluded { "yes" } else { "no" },
                row.verdict.reason.token(),
                c.fixed_points,
                c.orbit_lines,
                c.orbit_triangles,
                c.fixed_planes_type7,
                c.fixed_planes_type1,
                f7,
                c.f1
            )?;
            if !row.verdict.excluded {
                survivors.push((row.ty.v, row.ty.f));
            }
        }
    }
    writeln!(text)?;
    writeln!(
        text,
        "remaining types: {}",
        survivors.iter().map(|(v, f)| format!("A_{{{v},{f}}}")).collect::<Vec<_>>().join(" ")
    )?;
    writeln!(text)?;
    writeln!(text, "# v f fixed_points orbit_lines orbit_triangles planes7 planes1 F7 F1 excluded reason")?;
    for &v in &vs {
        for row in order3_table(v)? {
            let c = row.counts;
            writeln!(
                text,
                "{} {} {} {} {} {} {} {} {} {} {}",
                row.ty.v,
                row.ty.f,
                c.fixed_points,
                c.orbit_lines,
                c.orbit_triangles,
                c.fixed_planes_type7,
                c.fixed_planes_type1,
                c.f7.map_or("-".to_string(), |x| x.to_string()),
                c.f1,
                u8::from(row.verdict.excluded),
                row.verdict.reason.token()
            )?;
        }
    }
    match args.opt("out")? {
        Some(path) => {
            let path = PathBuf::from(path);
            let mut manifest = Manifest::new(argv);
            manifest.output(&path, &text)?;
            manifest.write_next_to(&path)?;
        }
        None => print!("{text}"),
    }
    Ok(0)
}

/// Optional `--v` must agree with the ambient dimension of the loaded group.
fn check_ambient(args: &Args, group: &MatrixGroup) -> Result<(), AnyError> {
    if let Some(v) = args.parsed_opt::<u32>("v")? {
        if v != group.dim() {
            return Err(format!("--v {v} does not match the group's dimension {}", group.dim()).into());
        }
    }
    Ok(())
}

fn cmd_orbits(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let group_path = args.one("group")?;
    let cap = args.parsed_opt("cap")?.unwrap_or(DEFAULT_CLOSURE_CAP);
    let k: u32 = args.parsed("k")?;
    let group = load_group(group_path, cap)?;
    check_ambient(args, &group)?;
    let orbits = orbit_partition(group.dim(), k, &group);
    let metas: Vec<OrbitMeta> = orbits
        .iter()
        .map(|o| OrbitMeta { representative: o.representative().clone(), size: o.size() as u64 })
        .collect();
    let text = write_orbit_file(&metas, group.dim(), k);
    let path = PathBuf::from(args.one("out")?);
    let mut manifest = Manifest::new(argv);
    manifest.input(group_path)?;
    manifest.output(&path, &text)?;
    manifest.write_next_to(&path)?;
    println!("orbits={} v={} k={} group_order={}", metas.len(), group.dim(), k, group.order().unwrap());
    Ok(0)
}

fn cmd_km(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let group_path = args.one("group")?;
    let cap = args.parsed_opt("cap")?.unwrap_or(DEFAULT_CLOSURE_CAP);
    let group = load_group(group_path, cap)?;
    check_ambient(args, &group)?;
    let t: u32 = args.parsed("t")?;
    let k: u32 = args.parsed("k")?;
    let lambda: u64 = args.parsed_opt("lambda")?.unwrap_or(1);
    let params = DesignParams::new(t, group.dim(), k, lambda);
    let mut km = build_km_matrix(&group, params);
    if args.has("filter") {
        km = filter_lambda1(&km)?;
    }
    let base = args.one("out")?;
    let (km_path, rows_path, cols_path) = km_paths(base);
    let mut manifest = Manifest::new(argv);
    manifest.input(group_path)?;
    manifest.output(Path::new(&km_path), &write_km_file(&km))?;
    manifest.output(Path::new(&rows_path), &write_orbit_file(km.rows(), params.v, t))?;
    manifest.output(Path::new(&cols_path), &write_orbit_file(km.cols(), params.v, k))?;
    manifest.write_next_to(Path::new(&km_path))?;
    println!(
        "v={} t={} k={} group_order={} rows={} cols={} filtered={}",
        params.v,
        t,
        k,
        km.group_order,
        km.nrows(),
        km.ncols(),
        u8::from(km.is_filtered())
    );
    Ok(0)
}

fn cmd_solve(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let base = args.one("km")?;
    let km = load_km(base)?;
    let inst = instance_from(args, &km)?;
    let budget = budget_from(args)?;
    let out = solve(&inst, &budget, args.has("all"));
    println!(
        "status={} nodes={} solutions={} wall_ms={}",
        out.status.token(),
        out.nodes,
        out.solutions.len(),
        out.wall.as_millis()
    );
    if let Some(note) = &out.note {
        println!("note: {note}");
    }
    let record = JobOutcome {
        job_id: 0,
        status: out.status,
        nodes: out.nodes,
        solutions: out.solutions.clone(),
    };
    if let Some(path) = args.opt("out")? {
        let path = PathBuf::from(path);
        let mut manifest = Manifest::new(argv);
        for p in [format!("{base}.km"), format!("{base}.rows.orb"), format!("{base}.cols.orb")] {
            manifest.input(&p)?;
        }
        manifest.output(&path, &write_outcomes_file(std::slice::from_ref(&record)))?;
        manifest.write_next_to(&path)?;
    }
    if let Some(blocks_path) = args.opt("emit-blocks")? {
        let Some(first) = out.solutions.first() else {
            return Err("no solution to emit blocks from".into());
        };
        let group_path = args.one("group")?;
        let cap = args.parsed_opt("cap")?.unwrap_or(DEFAULT_CLOSURE_CAP);
        let group = load_group(group_path, cap)?;
        let mut selection = vec![false; km.ncols()];
        for &c in first {
            selection[c as usize] = true;
        }
        let design = assemble_design(&km, &selection, &group)?;
        let path = PathBuf::from(blocks_path);
        let mut manifest = Manifest::new(argv);
        for p in [format!("{base}.km"), format!("{base}.rows.orb"), format!("{base}.cols.orb")] {
            manifest.input(&p)?;
        }
        manifest.input(group_path)?;
        manifest.output(&path, &write_blocks_file(&design))?;
        manifest.write_next_to(&path)?;
        println!("blocks={} written to {blocks_path}", design.blocks.len());
    }
    Ok(match out.status {
        SolveStatus::ExhaustedNoSolution => 1,
        _ => 0,
    })
}

fn cmd_estimate(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let _ = argv;
    let base = args.one("km")?;
    let km = load_km(base)?;
    let inst = instance_from(args, &km)?;
    let probes: u64 = args.parsed("probes")?;
    let seed: u64 = args.parsed_opt("seed")?.unwrap_or(0);
    let est = estimate_tree_size(&inst, probes, seed);
    println!(
        "estimated_nodes={:.3e} std_error={:.3e} probes={} seed={seed}",
        est.mean, est.std_error, est.probes
    );
    Ok(0)
}

fn cmd_split(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let base = args.one("km")?;
    let km = load_km(base)?;
    let inst = instance_from(args, &km)?;
    let level: u32 = args.parsed("level")?;
    let split = split_prefixes(&inst, level)?;
    let path = PathBuf::from(args.one("out")?);
    let mut manifest = Manifest::new(argv);
    for p in [format!("{base}.km"), format!("{base}.rows.orb"), format!("{base}.cols.orb")] {
        manifest.input(&p)?;
    }
    manifest.note("level", level);
    manifest.note("splitter_nodes", split.nodes);
    manifest.output(&path, &write_jobs_file(&split.jobs))?;
    manifest.write_next_to(&path)?;
    println!("jobs={} level={level} splitter_nodes={}", split.jobs.len(), split.nodes);
    Ok(0)
}

fn cmd_run(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let base = args.one("km")?;
    let km = load_km(base)?;
    let inst = instance_from(args, &km)?;
    let jobs_path = args.one("jobs")?;
    let jobs_text =
        std::fs::read_to_string(jobs_path).map_err(|e| format!("cannot read {jobs_path}: {e}"))?;
    let jobs = parse_jobs_file(&jobs_text)?;
    let workers: usize = args.parsed_opt("workers")?.unwrap_or(1);
    let budget = budget_from(args)?;
    let checkpoint = args.opt("checkpoint")?.map(PathBuf::from);
    let agg = run_jobs(&inst, &jobs, workers, &budget, args.has("all"), checkpoint.as_deref())?;
    println!(
        "jobs={} resumed={} status={} total_nodes={} solutions={}",
        agg.outcomes.len(),
        agg.resumed,
        agg.status.token(),
        agg.total_nodes,
        agg.solutions.len()
    );
    let path = PathBuf::from(args.one("out")?);
    let mut manifest = Manifest::new(argv);
    for p in [format!("{base}.km"), format!("{base}.rows.orb"), format!("{base}.cols.orb")] {
        manifest.input(&p)?;
    }
    manifest.input(jobs_path)?;
    manifest.note("workers", workers);
    manifest.output(&path, &write_outcomes_file(&agg.outcomes))?;
    manifest.write_next_to(&path)?;
    Ok(match agg.status {
        SolveStatus::ExhaustedNoSolution => 1,
        _ => 0,
    })
}

fn cmd_campaign(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let config_path = args.one("config")?;
    let config_text = std::fs::read_to_string(config_path)
        .map_err(|e| format!("cannot read {config_path}: {e}"))?;
    let mut cfg = parse_campaign_config(&config_text)?;
    if let Some(n) = args.parsed_opt("probe-nodes")? {
        cfg.probe_nodes = Some(n);
    }
    if let Some(w) = args.parsed_opt("workers")? {
        cfg.workers = w;
    }
    if let Some(l) = args.parsed_opt("level")? {
        cfg.level = l;
    }
    if let Some(s) = args.parsed_opt("split-tasks")? {
        cfg.split_tasks = s;
    }
    if let Some(r) = args.parsed_opt("rounds")? {
        cfg.rounds = r;
    }
    if let Some(o) = args.opt("out")? {
        cfg.out_dir = o.to_string();
    }

    // paths in the config are relative to the config file
    let config_dir = Path::new(config_path).parent().unwrap_or(Path::new("."));
    let resolve = |p: &str| config_dir.join(p).to_string_lossy().into_owned();
    let group_path = resolve(&cfg.group);
    let normalizer_path = resolve(&cfg.normalizer);
    let group = load_group(&group_path, DEFAULT_CLOSURE_CAP)?;
    if group.dim() != cfg.v {
        return Err(format!("group has dimension {}, config says v={}", group.dim(), cfg.v).into());
    }
    let normalizer = load_group(&normalizer_path, DEFAULT_CLOSURE_CAP)?;
    let params = DesignParams::new(cfg.t, cfg.v, cfg.k, cfg.lambda);
    let km = filter_lambda1(&build_km_matrix(&group, params))?;

    let out_dir = PathBuf::from(&cfg.out_dir);
    std::fs::create_dir_all(&out_dir).map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;

    let probe_budget = Budget {
        max_nodes: cfg.probe_nodes,
        max_wall: cfg.probe_seconds.map(Duration::from_secs),
    };
    let campaign_config = CampaignConfig {
        probe: ProbeConfig { budget: probe_budget, stop_on_solution: cfg.stop_on_solution },
        rounds: cfg.rounds,
        level: cfg.level,
        split_tasks: cfg.split_tasks,
        job_budget: Budget { max_nodes: cfg.job_nodes, max_wall: None },
        workers: cfg.workers,
        checkpoint_dir: Some(out_dir.clone()),
    };
    let report = run_campaign(km.clone(), group.clone(), normalizer, &campaign_config)?;

    let mut manifest = Manifest::new(argv);
    manifest.input(config_path)?;
    manifest.input(&group_path)?;
    manifest.input(&normalizer_path)?;

    std::fs::write(out_dir.join("ledger.txt"), &report.ledger_text)?;
    manifest.note("ledger", out_dir.join("ledger.txt").display());

    let mut summary = String::new();
    writeln!(summary, "verdict={:?}", report.verdict)?;
    writeln!(summary, "classes={} sizes={:?}", report.class_sizes.len(), report.class_sizes)?;
    for (i, er) in report.exclusion_reports.iter().enumerate() {
        writeln!(summary, "exclusion_pass={} probes={} newly_excluded={}", i, er.probes.len(), er.newly_excluded)?;
    }
    for pr in &report.pair_reports {
        writeln!(
            summary,
            "pair_fixing class={} anchor={} stabilizer_order={} tasks={} hard={} excluded={}",
            pr.class_id,
            pr.anchor_column,
            pr.stabilizer_order,
            pr.task_count,
            pr.hard_tasks.len(),
            pr.class_excluded
        )?;
    }
    for sr in &report.split_runs {
        writeln!(
            summary,
            "split pair=({},{}) level={} jobs={} status={} nodes={}",
            sr.anchor_column,
            sr.partner_column,
            sr.level,
            sr.jobs.len(),
            sr.aggregate.status.token(),
            sr.aggregate.total_nodes
        )?;
    }
    let mut state_counts: HashMap<&'static str, usize> = HashMap::new();
    for s in &report.column_states {
        *state_counts.entry(s.token()).or_insert(0) += 1;
    }
    let mut state_counts: Vec<(&str, usize)> = state_counts.into_iter().collect();
    state_counts.sort();
    writeln!(summary, "column_states={state_counts:?}")?;
    writeln!(summary, "solutions={}", report.solutions.len())?;
    manifest.output(&out_dir.join("report.txt"), &summary)?;

    for sr in &report.split_runs {
        let jobs_path =
            out_dir.join(format!("jobs-pair-{}-{}.txt", sr.anchor_column, sr.partner_column));
        manifest.output(&jobs_path, &write_jobs_file(&sr.jobs))?;
        let outcome_path =
            out_dir.join(format!("outcomes-pair-{}-{}.txt", sr.anchor_column, sr.partner_column));
        manifest.output(&outcome_path, &write_outcomes_file(&sr.aggregate.outcomes))?;
    }

    for (i, sol) in report.solutions.iter().enumerate() {
        let mut selection = vec![false; km.ncols()];
        for &c in sol {
            selection[c as usize] = true;
        }
        let design = assemble_design(&km, &selection, &group)?;
        manifest.output(&out_dir.join(format!("design-{i}.blocks")), &write_blocks_file(&design))?;
    }
    manifest.write_at(&out_dir.join("manifest.txt"))?;

    print!("{summary}");
    Ok(match report.verdict {
        CampaignVerdict::DesignsFound => 0,
        CampaignVerdict::NoDesignExists => 1,
        CampaignVerdict::Inconclusive => 0,
    })
}

fn cmd_verify(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let _ = argv;
    let design_path = args.one("design")?;
    let text = std::fs::read_to_string(design_path)
        .map_err(|e| format!("cannot read {design_path}: {e}"))?;
    let t: u32 = args.parsed("t")?;
    let lambda: u64 = args.parsed_opt("lambda")?.unwrap_or(1);
    let design = parse_blocks_file(&text, t, lambda)?;
    if let Some(v) = args.parsed_opt::<u32>("v")? {
        if v != design.params.v {
            return Err(format!("--v {v} does not match the blocks file's v={}", design.params.v).into());
        }
    }
    if let Some(k) = args.parsed_opt::<u32>("k")? {
        if k != design.params.k {
            return Err(format!("--k {k} does not match the blocks file's k={}", design.params.k).into());
        }
    }
    let report = verify_design(&design);
    println!(
        "blocks={} t_subspaces_checked={} ok={}",
        design.blocks.len(),
        report.subspaces_checked,
        report.ok
    );
    for (sub, count) in report.violations.iter().take(10) {
        println!("violation: {} covered {count} times (want {lambda})", sub.to_hex_row());
    }
    if report.violations.len() > 10 {
        println!("... and {} more", report.violations.len() - 10);
    }
    Ok(if report.ok { 0 } else { 1 })
}

fn cmd_normalizer_check(args: &Args, argv: &[String]) -> Result<u8, AnyError> {
    let _ = argv;
    let group_path = args.one("group")?;
    let normalizer_path = args.one("normalizer")?;
    let cap = args.parsed_opt("cap")?.unwrap_or(DEFAULT_CLOSURE_CAP);
    let group = load_group(group_path, cap)?;
    println!("group: v={} order={}", group.dim(), group.order().unwrap());

    let normalizer_text = std::fs::read_to_string(normalizer_path)
        .map_err(|e| format!("cannot read {normalizer_path}: {e}"))?;
    let normalizer_raw = parse_group_file(&normalizer_text)?;
    let mut all_normalizing = true;
    for (i, gen) in normalizer_raw.generators().iter().enumerate() {
        let ok = is_normalizing(gen, &group)?;
        println!("generator {i}: normalizing={ok}");
        all_normalizing &= ok;
    }
    let normalizer = closure(normalizer_raw.dim(), normalizer_raw.generators(), cap)?;
    let order = normalizer.order().unwrap();
    println!("normalizer closure: order={order}");

    let mut order_ok = true;
    if let Some(expected) = args.parsed_opt::<usize>("order")? {
        order_ok = order == expected;
        println!("expected order {expected}: {}", if order_ok { "match" } else { "MISMATCH" });
    }

    let sample: u64 = args.parsed_opt("sample")?.unwrap_or(0);
    let mut sampled_ok = true;
    if sample > 0 {
        let seed: u64 = args.parsed_opt("seed")?.unwrap_or(0);
        let mut rng = SplitMix64::new(seed);
        let elements = normalizer.elements()?;
        for _ in 0..sample {
            let n = &elements[rng.below(elements.len() as u64) as usize];
            if !is_normalizing(n, &group)? {
                sampled_ok = false;
                break;
            }
        }
        println!("sampled {sample} elements, all normalizing: {sampled_ok}");
    }

    if let Some(base) = args.opt("km")? {
        let km = load_km(base)?;
        // induced classes of the normalizer on the matrix columns
        let index: HashMap<&Subspace, u32> = km
            .cols()
            .iter()
            .enumerate()
            .map(|(i, meta)| (&meta.representative, i as u32))
            .collect();
        let n_cols = km.ncols();
        let mut parent: Vec<u32> = (0..n_cols as u32).collect();
        fn find(parent: &mut [u32], mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        for c in 0..n_cols as u32 {
            for gen in normalizer.generators() {
                let image = km.cols()[c as usize].representative.apply(gen.matrix());
                let canon = canonical_in_orbit(&image, &group)?;
                let j = *index
                    .get(&canon)
                    .ok_or("normalizer does not permute the column set; is the matrix complete?")?;
                let (a, b) = (find(&mut parent, c), find(&mut parent, j));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            }
        }
        let mut sizes: HashMap<u32, usize> = HashMap::new();
        for c in 0..n_cols as u32 {
            let root = find(&mut parent, c);
            *sizes.entry(root).or_insert(0) += 1;
        }
        let mut sizes: Vec<usize> = sizes.into_values().collect();
        sizes.sort_unstable();
        println!(
            "induced column classes: count={} sizes={:?} (filtered={})",
            sizes.len(),
            sizes,
            u8::from(km.is_filtered())
        );
    }

    Ok(if all_normalizing && order_ok && sampled_ok { 0 } else { 1 })
}
