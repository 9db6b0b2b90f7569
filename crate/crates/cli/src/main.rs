use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use toric_schubert::bott_fan::BottFan;
use toric_schubert::cohomology::{presentation, BottRing, StructureTable};
use toric_schubert::digraph::digraph_of_word;
use toric_schubert::enumeration::{classify_all_toric, classify_coxeter, table3_closed_form};
use toric_schubert::gf2::format_vector;
use toric_schubert::recovery::{obfuscate_seeded, recover, RecoveryInput, SinkLineMethod};
use toric_schubert::root_data::CartanDatum;
use toric_schubert::weyl_words::ToricWord;
use toric_schubert::{selfcheck, Error};

const SCHEMA: u32 = 1;
/// Entry bound for the random change of basis used by `recover --obfuscate`.
const OBFUSCATE_MAX_ENTRY: i64 = 2;

#[derive(Parser)]
#[command(
    name = "toric-schubert",
    version,
    about = "Toric Schubert varieties: digraphs, fans, cohomology and classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix and diagram automorphisms of a type such as E6.
    Info {
        #[arg(value_name = "TYPE")]
        ty: String,
        #[arg(long)]
        json: bool,
    },
    /// Edge-labeled digraph of a distinct-letter word.
    Digraph {
        #[arg(value_name = "TYPE")]
        ty: String,
        word: String,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Reduced characteristic matrix, primitive relations and degrees.
    Fan {
        #[arg(value_name = "TYPE")]
        ty: String,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Fano and weak Fano by indegree and by primitive-relation degrees.
    Fano {
        #[arg(value_name = "TYPE")]
        ty: String,
        word: String,
        #[arg(long)]
        json: bool,
    },
    /// Ring presentation, Betti numbers and (when all labels are 1) eigen data.
    Cohomology {
        #[arg(value_name = "TYPE")]
        ty: String,
        word: String,
        /// Require the eigen table; fails if some label exceeds 1.
        #[arg(long)]
        eigen: bool,
        #[arg(long)]
        json: bool,
    },
    /// Recover the digraph from ring JSON or structure-constant JSON.
    Recover {
        #[arg(long, value_name = "FILE")]
        input: PathBuf,
        /// Apply a random unimodular change of basis drawn from SEED first.
        #[arg(long, value_name = "SEED")]
        obfuscate: Option<u64>,
        /// Find sink lines by searching square-zero classes in [-B, B].
        #[arg(long, value_name = "B")]
        bound: Option<i64>,
        #[arg(long, value_enum)]
        emit: Option<Emit>,
    },
    /// Isomorphism classes of Coxeter orientations (or all toric words).
    Enumerate {
        #[arg(value_name = "TYPE")]
        ty: String,
        /// Compare totals with the closed-form class counts.
        #[arg(long)]
        check_table3: bool,
        #[arg(long, conflicts_with = "check_table3")]
        all_toric: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the built-in fixtures and reference cross-checks.
    Selfcheck {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dot,
    Json,
}

enum Failure {
    Usage(String),
    Lib(Error),
    /// A computation disagreed with an independent check; output already printed.
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidType(_)
        | Error::MalformedWord(_)
        | Error::IndexOutOfRange { .. }
        | Error::InvalidInput(_)
        | Error::DimensionMismatch(_) => 1,
        Error::NotToric(_) | Error::Precondition(_) | Error::BoundTooSmall(_) => 3,
        _ => 2,
    }
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(SCHEMA));
    }
    v
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&with_schema(v)).expect("json");
    s.push('\n');
    s
}

fn parse_word(ty: &str, word: &str) -> Result<ToricWord, Failure> {
    let d: CartanDatum = ty.parse()?;
    Ok(ToricWord::parse(&d, word)?)
}

fn info(ty: &str, as_json: bool) -> Result<String, Failure> {
    let d: CartanDatum = ty.parse()?;
    let auts: Vec<Vec<usize>> = d
        .diagram_automorphisms()
        .iter()
        .map(|a| a.images().to_vec())
        .collect();
    if as_json {
        return Ok(pretty(json!({
            "type": d.name(),
            "rank": d.rank(),
            "cartan": d.cartan(),
            "simply_laced": d.is_simply_laced(),
            "automorphisms": auts,
        })));
    }
    let mut out = format!("type {}  rank {}\ncartan matrix:\n", d.name(), d.rank());
    for row in d.cartan() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>3}")).collect();
        writeln!(out, "{}", cells.join("")).unwrap();
    }
    writeln!(out, "simply laced: {}", d.is_simply_laced()).unwrap();
    writeln!(out, "diagram automorphisms ({}):", auts.len()).unwrap();
    for a in &auts {
        let imgs: Vec<String> = a.iter().map(usize::to_string).collect();
        writeln!(out, "  {}", imgs.join(" ")).unwrap();
    }
    Ok(out)
}

fn digraph(ty: &str, word: &str, dot: bool, as_json: bool) -> Result<String, Failure> {
    let g = digraph_of_word(&parse_word(ty, word)?);
    Ok(if dot {
        g.to_dot()
    } else if as_json {
        pretty(g.to_json())
    } else {
        format!("{g}\n")
    })
}

fn ray_name(kind: char, letter: usize) -> String {
    format!("{kind}{letter}")
}

fn fan(ty: &str, word: &str, as_json: bool) -> Result<String, Failure> {
    let w = parse_word(ty, word)?;
    let fan = BottFan::new(&w);
    let cols = fan.primitive_collections();
    if as_json {
        return Ok(pretty(json!({
            "type": w.datum().name(),
            "word": w.letters(),
            "matrix": fan.reduced_char_matrix(),
            "collections": cols,
            "degrees": fan.degrees(),
        })));
    }
    let mut out = String::from("reduced characteristic matrix:\n");
    for row in fan.reduced_char_matrix() {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>3}")).collect();
        writeln!(out, "{}", cells.join("")).unwrap();
    }
    out.push_str("primitive relations:\n");
    for c in &cols {
        let rhs: Vec<String> = c
            .relation
            .iter()
            .map(|&(pos, a)| {
                let v = ray_name('v', w.letters()[pos - 1]);
                if a == 1 {
                    v
                } else {
                    format!("{a}{v}")
                }
            })
            .collect();
        let rhs = if rhs.is_empty() {
            "0".to_string()
        } else {
            rhs.join(" + ")
        };
        writeln!(
            out,
            "  {} + {} = {}    degree {}",
            ray_name('v', c.letter),
            ray_name('w', c.letter),
            rhs,
            c.degree
        )
        .unwrap();
    }
    Ok(out)
}

fn fano(ty: &str, word: &str, as_json: bool) -> Result<String, Failure> {
    let w = parse_word(ty, word)?;
    let g = digraph_of_word(&w);
    let fan = BottFan::new(&w);
    let by_indegree = (g.is_fano(), g.is_weak_fano());
    let by_degrees = (fan.is_fano_batyrev(), fan.is_weak_fano_batyrev());
    let agree = by_indegree == by_degrees;
    let out = if as_json {
        pretty(json!({
            "type": w.datum().name(),
            "word": w.letters(),
            "fano": by_indegree.0,
            "weak_fano": by_indegree.1,
            "max_indegree": g.max_indegree(),
            "indegree": {"fano": by_indegree.0, "weak_fano": by_indegree.1},
            "degrees": {"fano": by_degrees.0, "weak_fano": by_degrees.1, "values": fan.degrees()},
            "agree": agree,
        }))
    } else {
        format!(
            "fano={} weak_fano={}\nindegree criterion: fano={} weak_fano={} (max indegree {})\ndegree criterion:   fano={} weak_fano={} (degrees {:?})\n",
            by_indegree.0, by_indegree.1, by_indegree.0, by_indegree.1, g.max_indegree(), by_degrees.0, by_degrees.1, fan.degrees()
        )
    };
    if !agree {
        print!("{out}");
        return Err(Failure::Assertion("the two Fano criteria disagree".into()));
    }
    Ok(out)
}

fn cohomology(ty: &str, word: &str, eigen: bool, as_json: bool) -> Result<String, Failure> {
    let w = parse_word(ty, word)?;
    let ring = presentation(&w);
    let names = ring.generators().to_vec();
    let fmt = |v: u32| format_vector(v, &names);
    let fmt_int = |z: &[i64]| -> String {
        let terms: Vec<String> = z
            .iter()
            .zip(&names)
            .filter(|(c, _)| **c != 0)
            .map(|(c, n)| match c {
                1 => format!("x{n}"),
                -1 => format!("-x{n}"),
                c => format!("{c}x{n}"),
            })
            .collect();
        terms.join(" + ").replace("+ -", "- ")
    };
    let eig = if ring.labels_one() || eigen {
        Some(ring.eigen_data()?)
    } else {
        None
    };
    let square_zero = if ring.labels_one() {
        Some(ring.square_zero_closed_form())
    } else {
        None
    };
    if as_json {
        let eig_json = eig.as_ref().map(|es| {
            es.iter()
                .map(|e| {
                    json!({
                        "alpha": fmt(e.alpha),
                        "space": e.space.basis().iter().map(|&b| fmt(b)).collect::<Vec<_>>(),
                        "multiplicity": e.multiplicity,
                    })
                })
                .collect::<Vec<_>>()
        });
        return Ok(pretty(json!({
            "type": w.datum().name(),
            "word": w.letters(),
            "ring": ring.to_json(),
            "relations": ring.relations(),
            "betti": ring.betti_numbers(),
            "eigen": eig_json,
            "square_zero": square_zero.as_ref().map(|zs| zs.iter().map(|z| fmt_int(z)).collect::<Vec<_>>()),
        })));
    }
    let mut out = String::from("relations:\n");
    for r in ring.relations() {
        writeln!(out, "  {r}").unwrap();
    }
    let betti: Vec<String> = ring.betti_numbers().iter().map(u64::to_string).collect();
    writeln!(
        out,
        "betti numbers (degrees 0,2,4,...): {}",
        betti.join(" ")
    )
    .unwrap();
    match &eig {
        Some(es) => {
            out.push_str("eigenelements mod 2:\n");
            for e in es {
                let basis: Vec<String> = e.space.basis().iter().map(|&b| fmt(b)).collect();
                writeln!(
                    out,
                    "  alpha {:<12} E = <{}>  multiplicity {}",
                    fmt(e.alpha),
                    basis.join(", "),
                    e.multiplicity
                )
                .unwrap();
            }
        }
        None => out.push_str("eigen table omitted: some relation coefficient is not 0 or 1\n"),
    }
    if let Some(zs) = &square_zero {
        let list: Vec<String> = zs.iter().map(|z| fmt_int(z)).collect();
        writeln!(
            out,
            "square-zero primitive classes (up to sign): {}",
            list.join(", ")
        )
        .unwrap();
    }
    Ok(out)
}

fn recover_cmd(
    input: &PathBuf,
    obfuscate: Option<u64>,
    bound: Option<i64>,
    emit: Option<Emit>,
) -> Result<String, Failure> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", input.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{} is not JSON: {e}", input.display())))?;
    let mut rin = if value.get("alphas").is_some() {
        let ring = BottRing::from_json(&value)?;
        match obfuscate {
            Some(seed) => {
                if !ring.labels_one() {
                    return Err(RecoveryInput::trusted(&ring)
                        .err()
                        .map_or_else(|| Failure::Usage("unreachable".into()), Failure::Lib));
                }
                obfuscate_seeded(&ring, seed, OBFUSCATE_MAX_ENTRY)?
            }
            None => RecoveryInput::trusted(&ring)?,
        }
    } else if value.get("table").is_some() {
        if obfuscate.is_some() {
            return Err(Failure::Usage("--obfuscate needs ring JSON input".into()));
        }
        RecoveryInput::from_table(StructureTable::from_json(&value)?)?
    } else {
        return Err(Failure::Usage(
            "input must be ring JSON {m, generators, alphas} or table JSON {r, h4_dim, table}"
                .into(),
        ));
    };
    if let Some(b) = bound {
        if b < 2 {
            return Err(Error::BoundTooSmall(b).into());
        }
        rin = rin.with_sink_lines(SinkLineMethod::BoxSearch(b));
    }
    let out = recover(&rin)?;
    let g = &out.graph;
    Ok(match emit {
        Some(Emit::Dot) => g.to_dot(),
        Some(Emit::Json) => {
            let mut v = g.to_json();
            v["steps_run"] = json!(out.trace.steps_run());
            v["trace"] = serde_json::to_value(&out.trace).expect("trace");
            pretty(v)
        }
        None => {
            let steps: Vec<String> = out.trace.steps_run().iter().map(u8::to_string).collect();
            format!("{g}\nsteps run: {}\n", steps.join(","))
        }
    })
}

fn enumerate(ty: &str, check: bool, all_toric: bool, as_json: bool) -> Result<String, Failure> {
    let d: CartanDatum = ty.parse()?;
    let report = if all_toric {
        classify_all_toric(&d)?
    } else {
        classify_coxeter(&d)?
    };
    let t = &report.totals;
    let totals = (t.classes, t.weak_fano, t.fano);
    let verdict = if check {
        let want = table3_closed_form(d.family(), d.rank())?;
        Some((want, want == totals))
    } else {
        None
    };
    let out = if as_json {
        let mut v = report.to_json();
        if let Some((want, ok)) = verdict {
            v["check"] = json!({"expected": [want.0, want.1, want.2], "pass": ok});
        }
        pretty(v)
    } else {
        let mut out = String::new();
        for c in &report.classes {
            let rep: Vec<String> = c.representative.iter().map(usize::to_string).collect();
            writeln!(
                out,
                "{:<24} fano={:<5} weak_fano={:<5} max_indegree={} orbit={}  {}",
                rep.join(","),
                c.is_fano,
                c.is_weak_fano,
                c.max_indegree,
                c.orbit_size,
                c.digraph
            )
            .unwrap();
        }
        write!(
            out,
            "{} totals ({},{},{})",
            d.name(),
            totals.0,
            totals.1,
            totals.2
        )
        .unwrap();
        if let Some((want, ok)) = verdict {
            write!(
                out,
                "  closed form ({},{},{})  check={}",
                want.0,
                want.1,
                want.2,
                if ok { "pass" } else { "fail" }
            )
            .unwrap();
        }
        out.push('\n');
        out
    };
    if let Some((_, false)) = verdict {
        print!("{out}");
        return Err(Failure::Assertion(
            "class counts differ from the closed form".into(),
        ));
    }
    Ok(out)
}

fn selfcheck_cmd(as_json: bool) -> Result<String, Failure> {
    let checks = selfcheck::run_all();
    let ok = checks.iter().all(|c| c.passed);
    let out = if as_json {
        pretty(json!({
            "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
            "passed": ok,
        }))
    } else {
        let mut out = String::new();
        for c in &checks {
            writeln!(
                out,
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )
            .unwrap();
        }
        out
    };
    if !ok {
        print!("{out}");
        return Err(Failure::Assertion("selfcheck failed".into()));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Info { ty, json } => info(&ty, json),
        Command::Digraph {
            ty,
            word,
            dot,
            json,
        } => digraph(&ty, &word, dot, json),
        Command::Fan { ty, word, json } => fan(&ty, &word, json),
        Command::Fano { ty, word, json } => fano(&ty, &word, json),
        Command::Cohomology {
            ty,
            word,
            eigen,
            json,
        } => cohomology(&ty, &word, eigen, json),
        Command::Recover {
            input,
            obfuscate,
            bound,
            emit,
        } => recover_cmd(&input, obfuscate, bound, emit),
        Command::Enumerate {
            ty,
            check_table3,
            all_toric,
            json,
        } => enumerate(&ty, check_table3, all_toric, json),
        Command::Selfcheck { json } => selfcheck_cmd(json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            if let Error::Recovery { step, detail } = &e {
                print!(
                    "{}",
                    pretty(json!({"error": "recovery", "step": step, "detail": detail}))
                );
            }
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
