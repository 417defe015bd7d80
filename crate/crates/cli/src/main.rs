use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tcause::alphabet::Alphabet;
use tcause::automaton::{Acceptance, Automaton};
use tcause::effect::{EffectClass, EffectSpec};
use tcause::error::{AutomatonError, GeneratorError, ParseError, SynthesisError};
use tcause::format::{
    align_to_spec, parse_automaton, parse_bundle, parse_finite_word, parse_system, parse_trace, parse_word,
    serialize_automaton, serialize_bundle, serialize_system, serialize_word, InstanceBundle, ParsedAutomaton,
    PrefixSemantics,
};
use tcause::generators::GeneratedInstance;
use tcause::generators::{
    gen_complementation_instance, gen_ln_instance, gen_nfw_instance, serialize_decoder,
};
use tcause::oracle::{differential_test, enumerate_lassos, Oracle};
use tcause::synthesis::{cause_contains, synthesize, SynthesisOptions};
use tcause::system::System;
use tcause::word::LassoWord;

#[derive(Parser)]
#[command(
    name = "tcause",
    version,
    about = "Temporal cause synthesis for reactive systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the cause of an effect on an observed trace.
    Synth {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Cause automaton output; statistics go to `<out>.stats`.
        #[arg(long)]
        out: PathBuf,
        /// Close guarantee causes under good-prefix extension.
        #[arg(long, value_enum, default_value_t = Switch::On)]
        exact_prefixes: Switch,
    },
    /// Decide cause membership of every small lasso by brute force.
    Oracle {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 3)]
        stem_max: usize,
        #[arg(long, default_value_t = 2)]
        loop_max: usize,
        /// Cause automaton to compare against.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Write a generated instance family member.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Membership of a word in an automaton file.
    Check {
        #[arg(long)]
        automaton: PathBuf,
        /// `"<stem> | <loop>"`, or a finite word for plain finite-word automata.
        #[arg(long)]
        word: String,
    },
    /// State counts of an automaton file and, with a bundle, the size bound.
    Stats {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        bound_context: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Family {
    /// Effects whose causes encode the subword languages `L_n`.
    Ln {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        repr: Repr,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Complementation of a nondeterministic automaton over symbols.
    Complement {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, value_enum)]
        acc: Acc,
        /// Effect representation for finite-word inputs.
        #[arg(long, value_enum, default_value_t = Repr::Safety)]
        repr: Repr,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(clap::Args)]
struct InstanceArgs {
    /// Bundle naming system, trace, effect and class.
    #[arg(long, conflicts_with_all = ["system", "trace", "effect"])]
    bundle: Option<PathBuf>,
    #[arg(long)]
    class: Option<ClassArg>,
    #[arg(long)]
    system: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    effect: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Recurrence,
    Safety,
    Guarantee,
    Persistence,
}

impl From<ClassArg> for EffectClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Recurrence => EffectClass::Recurrence,
            ClassArg::Safety => EffectClass::Safety,
            ClassArg::Guarantee => EffectClass::Guarantee,
            ClassArg::Persistence => EffectClass::Persistence,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Repr {
    Safety,
    Guarantee,
}

impl From<Repr> for EffectClass {
    fn from(r: Repr) -> Self {
        match r {
            Repr::Safety => EffectClass::Safety,
            Repr::Guarantee => EffectClass::Guarantee,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Acc {
    Buchi,
    Cobuchi,
    Finite,
}

/// A failure with its exit status: 2 for input that does not parse, 3 for
/// unmet preconditions and I/O, 4 for violated internal invariants.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(path: &Path, e: ParseError) -> Self {
        Failure {
            code: 2,
            message: format!("{}:{e}", path.display()),
        }
    }

    fn precondition(message: impl fmt::Display) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }

    fn internal(message: impl fmt::Display) -> Self {
        Failure {
            code: 4,
            message: message.to_string(),
        }
    }
}

impl From<SynthesisError> for Failure {
    fn from(e: SynthesisError) -> Self {
        match e {
            SynthesisError::BoundViolated { .. } | SynthesisError::Automaton(_) => Failure::internal(e),
            _ => Failure::precondition(e),
        }
    }
}

impl From<GeneratorError> for Failure {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Synthesis(e) => e.into(),
            GeneratorError::Automaton(_) => Failure::internal(e),
            _ => Failure::precondition(e),
        }
    }
}

impl From<AutomatonError> for Failure {
    fn from(e: AutomatonError) -> Self {
        Failure::precondition(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))
}

fn load_automaton(path: &Path) -> Result<ParsedAutomaton, Failure> {
    parse_automaton(&read(path)?).map_err(|e| Failure::parse(path, e))
}

struct Instance {
    system: System,
    trace: LassoWord,
    effect: EffectSpec,
}

struct InstancePaths {
    system: PathBuf,
    trace: PathBuf,
    effect: PathBuf,
    class: EffectClass,
}

fn resolve_paths(args: &InstanceArgs) -> Result<InstancePaths, Failure> {
    if let Some(bundle) = &args.bundle {
        let b = parse_bundle(&read(bundle)?).map_err(|e| Failure::parse(bundle, e))?;
        let dir = bundle.parent().unwrap_or(Path::new(""));
        let class: EffectClass = b.class.parse().map_err(Failure::precondition)?;
        if let Some(c) = args.class {
            if EffectClass::from(c) != class {
                return Err(Failure::precondition(format!(
                    "--class {} contradicts bundle class {class}",
                    EffectClass::from(c)
                )));
            }
        }
        return Ok(InstancePaths {
            system: dir.join(b.system),
            trace: dir.join(b.trace),
            effect: dir.join(b.effect),
            class,
        });
    }
    let missing = |name: &str| Failure::precondition(format!("missing --{name} (or --bundle)"));
    Ok(InstancePaths {
        system: args.system.clone().ok_or_else(|| missing("system"))?,
        trace: args.trace.clone().ok_or_else(|| missing("trace"))?,
        effect: args.effect.clone().ok_or_else(|| missing("effect"))?,
        class: args.class.ok_or_else(|| missing("class"))?.into(),
    })
}

fn expected_semantics(class: EffectClass) -> Option<PrefixSemantics> {
    match class {
        EffectClass::Safety => Some(PrefixSemantics::BadPrefixes),
        EffectClass::Guarantee => Some(PrefixSemantics::GoodPrefixes),
        _ => None,
    }
}

fn load_instance(args: &InstanceArgs) -> Result<(Instance, EffectClass), Failure> {
    let paths = resolve_paths(args)?;
    let system = parse_system(&read(&paths.system)?).map_err(|e| Failure::parse(&paths.system, e))?;
    let trace =
        parse_trace(&read(&paths.trace)?, system.spec()).map_err(|e| Failure::parse(&paths.trace, e))?;
    let parsed = load_automaton(&paths.effect)?;
    if let (Some(found), Some(expected)) = (parsed.semantics, expected_semantics(paths.class)) {
        if found != expected {
            return Err(Failure::precondition(format!(
                "{}: {} effects are given by {}, file declares {}",
                paths.effect.display(),
                paths.class,
                expected.name(),
                found.name()
            )));
        }
    }
    let aligned = align_to_spec(&parsed.automaton, system.spec())
        .map_err(|e| Failure::precondition(format!("{}: {e}", paths.effect.display())))?;
    let effect = EffectSpec::new(paths.class, aligned)?;
    system
        .validate_trace(&trace)
        .map_err(|e| Failure::precondition(format!("{}: {e}", paths.trace.display())))?;
    Ok((
        Instance {
            system,
            trace,
            effect,
        },
        paths.class,
    ))
}

fn stats_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".stats");
    PathBuf::from(s)
}

fn cmd_synth(instance: &InstanceArgs, out: &Path, exact_prefixes: Switch) -> Outcome {
    let (inst, class) = load_instance(instance)?;
    let options = SynthesisOptions {
        exact_prefixes: exact_prefixes == Switch::On,
    };
    let result = synthesize(&inst.system, &inst.trace, &inst.effect, options)?;
    if !result.stats.within_bounds() {
        return Err(Failure::internal("a synthesis stage exceeded its bound"));
    }
    if !result.sat_holds {
        return Err(Failure::internal(
            "the observed inputs are not in the synthesized cause",
        ));
    }
    write(
        out,
        &serialize_automaton(&result.cause, expected_semantics(class)),
    )?;
    let report = format!(
        "class={class}\n{}exists={}\nsat_holds={}\n",
        result.stats.report(),
        result.exists,
        result.sat_holds
    );
    write(&stats_path(out), &report)?;
    print!("{report}");
    Ok(ExitCode::SUCCESS)
}

/// Reads a cause file over the inputs of `system` and returns it with the
/// class its file form denotes.
fn load_cause(path: &Path, system: &System, class: EffectClass) -> Result<Automaton, Failure> {
    let parsed = load_automaton(path)?;
    let found = parsed.semantics;
    if found != expected_semantics(class) {
        return Err(Failure::precondition(format!(
            "{}: not a {class} cause (semantics {})",
            path.display(),
            found.map_or("none", |s| s.name())
        )));
    }
    align_to_spec(&parsed.automaton, &system.spec().input_spec())
        .map_err(|e| Failure::precondition(format!("{}: {e}", path.display())))
}

fn cmd_oracle(instance: &InstanceArgs, stem_max: usize, loop_max: usize, compare: Option<&Path>) -> Outcome {
    let (inst, class) = load_instance(instance)?;
    let oracle = Oracle::new(&inst.system, &inst.trace, &inst.effect)?;
    let inputs = Alphabet::Props(oracle.input_spec());
    match compare {
        Some(path) => {
            let cause = load_cause(path, &inst.system, class)?;
            let report = differential_test(
                &path.display().to_string(),
                &oracle,
                class,
                &cause,
                stem_max,
                loop_max,
            );
            print!("{}", report.render(inst.system.spec()));
            Ok(if report.all_agree() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        None => {
            let mut members = 0;
            let all = enumerate_lassos(inputs.size(), stem_max, loop_max);
            for rho in &all {
                let m = oracle.universal(rho);
                members += usize::from(m);
                println!("rho=\"{}\" member={m}", rho.format(&inputs));
            }
            println!("checked={} member={members}", all.len());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_instance(dir: &Path, inst: &GeneratedInstance) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::precondition(format!("{}: {e}", dir.display())))?;
    let class = inst.effect.class();
    let effect_file = format!("effect.{}", inst.effect.automaton().kind_tag().to_lowercase());
    write(&dir.join("system.sys"), &serialize_system(&inst.system))?;
    write(
        &dir.join("trace.trace"),
        &serialize_word(&inst.trace, &Alphabet::Props(inst.system.spec().clone())),
    )?;
    write(
        &dir.join(&effect_file),
        &serialize_automaton(inst.effect.automaton(), expected_semantics(class)),
    )?;
    write(&dir.join("decoder.txt"), &serialize_decoder(inst))?;
    let bundle = InstanceBundle {
        system: "system.sys".into(),
        trace: "trace.trace".into(),
        effect: effect_file,
        class: class.to_string(),
        decoder: Some("decoder.txt".into()),
    };
    write(&dir.join("instance.bundle"), &serialize_bundle(&bundle))?;
    println!(
        "system_states={} effect_states={} class={class}",
        inst.system.num_states(),
        inst.effect.num_states()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(family: &Family) -> Outcome {
    match family {
        Family::Ln { n, repr, out_dir } => write_instance(out_dir, &gen_ln_instance(*n, (*repr).into())?),
        Family::Complement {
            automaton,
            acc,
            repr,
            out_dir,
        } => {
            let a = load_automaton(automaton)?.automaton;
            let acceptance = match acc {
                Acc::Buchi => Acceptance::Buchi,
                Acc::Cobuchi => Acceptance::CoBuchi,
                Acc::Finite => Acceptance::Finite,
            };
            if a.acceptance() != acceptance {
                return Err(Failure::precondition(format!(
                    "{}: declared {}, but --acc asks for {acceptance:?} acceptance",
                    automaton.display(),
                    a.kind_tag()
                )));
            }
            let inst = match acc {
                Acc::Finite => gen_nfw_instance(&a, (*repr).into())?,
                _ => gen_complementation_instance(&a)?,
            };
            write_instance(out_dir, &inst)
        }
    }
}

fn cmd_check(path: &Path, word: &str) -> Outcome {
    let parsed = load_automaton(path)?;
    let a = &parsed.automaton;
    let arg = Path::new("--word");
    let accepted = match (a.acceptance(), parsed.semantics) {
        (Acceptance::Finite, None) if !word.contains('|') => {
            let w = parse_finite_word(word, a.alphabet()).map_err(|e| Failure::parse(arg, e))?;
            a.accepts_finite(&w)?
        }
        (acceptance, semantics) => {
            let w = parse_word(word, a.alphabet()).map_err(|e| Failure::parse(arg, e))?;
            match (acceptance, semantics) {
                (Acceptance::Finite, Some(PrefixSemantics::BadPrefixes)) => {
                    cause_contains(EffectClass::Safety, a, &w)
                }
                (Acceptance::Finite, _) => cause_contains(EffectClass::Guarantee, a, &w),
                _ => a.accepts_lasso(&w)?,
            }
        }
    };
    println!("{}", if accepted { "accepted" } else { "rejected" });
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(path: &Path, context: Option<&Path>) -> Outcome {
    let parsed = load_automaton(path)?;
    let a = &parsed.automaton;
    println!("kind={}", a.kind_tag());
    if let Some(s) = parsed.semantics {
        println!("semantics={}", s.name());
    }
    println!("states={}", a.num_states());
    println!("transitions={}", a.transition_count());
    println!("accepting={}", a.accepting_states().len());
    if let Some(bundle) = context {
        let args = InstanceArgs {
            bundle: Some(bundle.to_path_buf()),
            class: None,
            system: None,
            trace: None,
            effect: None,
        };
        let (inst, class) = load_instance(&args)?;
        let n = inst.system.num_states() * inst.effect.num_states();
        let base = match class {
            EffectClass::Recurrence => 3usize,
            EffectClass::Safety | EffectClass::Guarantee => 2,
            EffectClass::Persistence => {
                println!("bound=none class=persistence");
                return Ok(ExitCode::SUCCESS);
            }
        };
        let power = u32::try_from(n).ok().and_then(|n| base.checked_pow(n));
        let bound = power.and_then(|p| p.checked_mul(inst.trace.len()));
        println!("system_states={}", inst.system.num_states());
        println!("effect_states={}", inst.effect.num_states());
        println!("trace_length={}", inst.trace.len());
        match bound {
            Some(b) => println!("bound={b} within={}", a.num_states() <= b),
            None => println!("bound={}*{base}^{n} within=true", inst.trace.len()),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::Synth {
            instance,
            out,
            exact_prefixes,
        } => cmd_synth(instance, out, *exact_prefixes),
        Command::Oracle {
            instance,
            stem_max,
            loop_max,
            compare,
        } => cmd_oracle(instance, *stem_max, *loop_max, compare.as_deref()),
        Command::Gen { family } => cmd_gen(family),
        Command::Check { automaton, word } => cmd_check(automaton, word),
        Command::Stats {
            automaton,
            bound_context,
        } => cmd_stats(automaton, bound_context.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
