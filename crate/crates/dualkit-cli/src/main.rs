//! Command-line frontend: file ingestion, one subcommand per library
//! operation, JSON reports on standard output.
//!
//! Exit codes: 0 when the command succeeds (and any verification passes),
//! 1 when a verification or predicate reports false, 2 on usage or input
//! errors.

mod formats;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dualkit::bits::Subset;
use dualkit::selftest;
use dualkit::setfam::{
    boolean_count_via_columns, canonical_boolean_form, generate_boolean_with_cap,
    generate_bounded_lattice_with_cap,
};
use dualkit::spectra::{verify_duality, DualityReport};
use dualkit::tail;
use dualkit::ualg;
use formats::FormatError;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "dualkit",
    version,
    about = "Finite duality workbench: concept lattices, generated set algebras, spectra, tail algebras and clone-theoretic checkers"
)]
struct Cli {
    /// Report format on standard output.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Cap on generated family sizes (default 2^20; DUALKIT_CAPS fallback).
    #[arg(long, global = true)]
    cap_members: Option<usize>,
    /// Cap on generated tuple sets (default 10^6; DUALKIT_CAPS fallback).
    #[arg(long, global = true)]
    cap_tuples: Option<usize>,
    /// Seed for the randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Incidence structures: statistics, concept lattices, duality.
    Context {
        #[command(subcommand)]
        cmd: ContextCmd,
    },
    /// Generated set families over a context's rows.
    Setfam {
        #[command(subcommand)]
        cmd: SetfamCmd,
    },
    /// Posets: segments, ideals, tail families, closures, checkers.
    Poset {
        #[command(subcommand)]
        cmd: PosetCmd,
    },
    /// Finite universal algebras.
    Alg {
        #[command(subcommand)]
        cmd: AlgCmd,
    },
    /// Suite-level commands.
    Meta {
        #[command(subcommand)]
        cmd: MetaCmd,
    },
}

#[derive(Args)]
struct ContextFile {
    /// Context file (.cxt Burmeister, or JSON with --json / .json).
    file: String,
    /// Force JSON parsing regardless of extension.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum ContextCmd {
    /// Dimensions, column classes and generated-algebra sizes.
    Stats(ContextFile),
    /// All concepts of the Galois lattice.
    Galois(ContextFile),
    /// The transposed structure.
    Dual(ContextFile),
    /// Finite Stone/Priestley verification for the structure.
    VerifyDuality(ContextFile),
}

#[derive(Subcommand)]
enum SetfamCmd {
    /// Bounded lattice generated by the rows.
    Lattice(ContextFile),
    /// Boolean algebra generated by the rows.
    Boolean(ContextFile),
    /// Distinct-column count and the predicted algebra size 2^c.
    Count(ContextFile),
}

#[derive(Args)]
struct PosetFile {
    /// Poset file (JSON: elements + relation pairs).
    file: String,
}

#[derive(Subcommand)]
enum PosetCmd {
    /// Principal up/down segments of every element.
    Segments(PosetFile),
    /// Initial segments, finitely generated ones, and ideals.
    Ideals(PosetFile),
    /// The tail algebra.
    Tailalg(PosetFile),
    /// The tail lattice.
    Taillat(PosetFile),
    /// The closure of the principal-initial-segment family.
    Closure(PosetFile),
    /// Stone/Priestley verification for the tail families.
    CheckPps(PosetFile),
    /// The up-closedness proposition clauses and the closed-ideals corollary.
    CheckIdeals(PosetFile),
    /// Birkhoff representation of a bounded distributive lattice.
    Birkhoff(PosetFile),
    /// The free Boolean algebra over the poset.
    FreeBoolean(PosetFile),
    /// Universal property of the free algebra for one monotone map.
    Universal(PosetFile),
}

#[derive(Args)]
struct AlgebraSource {
    /// Algebra file (JSON: size + operation tables).
    file: Option<String>,
    /// Built-in algebra: boolean2 or lattice2.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum AlgCmd {
    /// Projection/idempotent/constant flags of one operation.
    Classify {
        #[command(flatten)]
        algebra: AlgebraSource,
        /// Operation name inside the algebra.
        #[arg(long)]
        op: String,
    },
    /// Whether an operation preserves a relation.
    Preserves {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long)]
        op: String,
        /// Relation as JSON tuples, e.g. [[0,0],[0,1],[1,1]].
        #[arg(long)]
        relation: String,
        /// Arity when the relation is empty.
        #[arg(long)]
        relation_arity: Option<usize>,
    },
    /// Whether two operations commute.
    Commutes {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long)]
        op: String,
        #[arg(long = "with")]
        with_op: String,
    },
    /// Subalgebra of a finite power generated by tuples.
    Subalg {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long)]
        power: usize,
        /// Generators as JSON tuples, e.g. [[1,1,0],[0,1,1]].
        #[arg(long)]
        gens: String,
    },
    /// Homomorphisms of a generated subalgebra into the algebra.
    Homs {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long)]
        power: usize,
        #[arg(long)]
        gens: String,
    },
    /// Idempotent homomorphisms of full powers must be projections.
    ProjectionProperty {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long, default_value_t = 2)]
        max_power: usize,
    },
    /// Homomorphisms of all subalgebras of full powers must be projections.
    ProjectivelyTrivial {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long, default_value_t = 2)]
        max_power: usize,
    },
    /// All homomorphisms of full powers must be projections (plus rigidity).
    Projective {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long, default_value_t = 2)]
        max_power: usize,
    },
    /// Operations commuting with every operation of the algebra.
    Centralizer {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// Operations preserving every given relation.
    Pol {
        #[arg(long)]
        universe: usize,
        /// JSON list of relations (each a list of tuples).
        #[arg(long)]
        relations: String,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// Relations preserved by every operation of the algebra.
    Inv {
        #[command(flatten)]
        algebra: AlgebraSource,
        #[arg(long, default_value_t = 2)]
        max_arity: usize,
    },
    /// Homomorphism/column bijection for a valued matrix.
    #[command(name = "verify-3a")]
    Verify3a {
        /// Matrix file (JSON: algebra + entries).
        file: String,
    },
}

#[derive(Subcommand)]
enum MetaCmd {
    /// Run the full deterministic verification suite.
    Selftest,
}

struct Caps {
    members: usize,
    tuples: usize,
}

fn resolve_caps(cli: &Cli) -> Caps {
    let mut members = dualkit::setfam::DEFAULT_MEMBER_CAP;
    let mut tuples = ualg::DEFAULT_TUPLE_CAP;
    if let Ok(env) = std::env::var("DUALKIT_CAPS") {
        for part in env.split(',') {
            if let Some((key, value)) = part.split_once('=') {
                if let Ok(v) = value.trim().parse() {
                    match key.trim() {
                        "members" => members = v,
                        "tuples" => tuples = v,
                        _ => {}
                    }
                }
            }
        }
    }
    if let Some(m) = cli.cap_members {
        members = m;
    }
    if let Some(t) = cli.cap_tuples {
        tuples = t;
    }
    Caps { members, tuples }
}

fn sha256_of(path: &str) -> Option<String> {
    let bytes = std::fs::read(path).ok()?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Some(format!("{:x}", hasher.finalize()))
}

fn duality_report_json(rep: &DualityReport) -> Value {
    json!({
        "pairing": rep.pairing,
        "bijection": rep.bijection,
        "order_iso": rep.order_iso,
        "failures": rep.failures,
        "pass": rep.passed(),
    })
}

type CmdOutput = (Value, bool, Option<String>);

fn run_context(cmd: &ContextCmd, caps: &Caps) -> Result<CmdOutput, FormatError> {
    match cmd {
        ContextCmd::Stats(input) => {
            let r = formats::read_context(&input.file, input.json)?;
            let (classes, c) = r.column_classes();
            let lattice = generate_bounded_lattice_with_cap(&r.rows_family(), caps.members)
                .map_err(|e| FormatError(e.to_string()))?;
            let boolean = generate_boolean_with_cap(&r.rows_family(), caps.members)
                .map_err(|e| FormatError(e.to_string()))?;
            let predicted = boolean_count_via_columns(&r)
                .map(|v| v.to_string())
                .unwrap_or_else(|_| format!("2^{c}"));
            let result = json!({
                "m": r.m(),
                "n": r.n(),
                "distinct_rows": r.rows_family().len(),
                "distinct_columns": c,
                "column_classes": classes.iter().map(|s| s.bitstring()).collect::<Vec<_>>(),
                "lattice_size": lattice.len(),
                "boolean_size": boolean.len(),
                "boolean_size_predicted": predicted,
            });
            Ok((result, true, Some(input.file.clone())))
        }
        ContextCmd::Galois(input) => {
            let r = formats::read_context(&input.file, input.json)?;
            let gl = r.galois_lattice().map_err(|e| FormatError(e.to_string()))?;
            let concepts: Vec<Value> = gl
                .concepts()
                .iter()
                .map(|concept| {
                    json!({
                        "extent": concept.extent.bitstring(),
                        "intent": concept.intent.bitstring(),
                    })
                })
                .collect();
            Ok((
                json!({"count": gl.len(), "concepts": concepts}),
                true,
                Some(input.file.clone()),
            ))
        }
        ContextCmd::Dual(input) => {
            let r = formats::read_context(&input.file, input.json)?;
            let d = r.dual_structure();
            let mut payload = formats::context_to_json(&d);
            payload["cxt"] = json!(formats::write_cxt(
                &d,
                &formats::default_names("o", d.m()),
                &formats::default_names("a", d.n()),
            ));
            Ok((payload, true, Some(input.file.clone())))
        }
        ContextCmd::VerifyDuality(input) => {
            let r = formats::read_context(&input.file, input.json)?;
            let rep = verify_duality(&r).map_err(|e| FormatError(e.to_string()))?;
            let pass = rep.passed();
            Ok((duality_report_json(&rep), pass, Some(input.file.clone())))
        }
    }
}

fn run_setfam(cmd: &SetfamCmd, caps: &Caps) -> Result<CmdOutput, FormatError> {
    match cmd {
        SetfamCmd::Lattice(input) => {
            let r = formats::read_context(&input.file, input.json)?;
            let fam = generate_bounded_lattice_with_cap(&r.rows_family(), caps.members)
                .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "ground": fam.ground(),
                    "count": fam.len(),
                    "members": formats::family_bitstrings(fam.members()),
                }),
                true,
                Some(input.file.clone()),
            ))
        }
        SetfamCmd::Boolean(input) => {
            let r = formats::read_context(&input.file, input.json)?;
            let fam = generate_boolean_with_cap(&r.rows_family(), caps.members)
                .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "ground": fam.ground(),
                    "count": fam.len(),
                    "members": formats::family_bitstrings(fam.members()),
                }),
                true,
                Some(input.file.clone()),
            ))
        }
        SetfamCmd::Count(input) => {
            let r = formats::read_context(&input.file, input.json)?;
            let (_, c) = r.column_classes();
            let count = boolean_count_via_columns(&r)
                .map(|v| v.to_string())
                .unwrap_or_else(|_| format!("2^{c}"));
            let full_form = canonical_boolean_form(&r, &Subset::full(r.n()))
                .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "distinct_columns": c,
                    "boolean_size": count,
                    "full_set_classes": full_form,
                }),
                true,
                Some(input.file.clone()),
            ))
        }
    }
}

fn run_poset(cmd: &PosetCmd, caps: &Caps) -> Result<CmdOutput, FormatError> {
    match cmd {
        PosetCmd::Segments(input) => {
            let p = formats::read_poset(&input.file)?;
            let ups: Vec<String> = (0..p.size())
                .map(|x| p.principal_up(x).unwrap().bitstring())
                .collect();
            let downs: Vec<String> = (0..p.size())
                .map(|x| p.principal_down(x).unwrap().bitstring())
                .collect();
            Ok((
                json!({
                    "size": p.size(),
                    "up": ups,
                    "down": downs,
                    "poset": formats::poset_to_json(&p),
                }),
                true,
                Some(input.file.clone()),
            ))
        }
        PosetCmd::Ideals(input) => {
            let p = formats::read_poset(&input.file)?;
            Ok((
                json!({
                    "initial_segments": formats::family_bitstrings(&p.initial_segments()),
                    "finitely_generated": formats::family_bitstrings(&p.fg_initial_segments()),
                    "ideals": formats::family_bitstrings(&p.ideals()),
                }),
                true,
                Some(input.file.clone()),
            ))
        }
        PosetCmd::Tailalg(input) => {
            let p = formats::read_poset(&input.file)?;
            let fam = generate_boolean_with_cap(&p.up_family(), caps.members)
                .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "count": fam.len(),
                    "members": formats::family_bitstrings(fam.members()),
                }),
                true,
                Some(input.file.clone()),
            ))
        }
        PosetCmd::Taillat(input) => {
            let p = formats::read_poset(&input.file)?;
            let fam = generate_bounded_lattice_with_cap(&p.up_family(), caps.members)
                .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "count": fam.len(),
                    "members": formats::family_bitstrings(fam.members()),
                }),
                true,
                Some(input.file.clone()),
            ))
        }
        PosetCmd::Closure(input) => {
            let p = formats::read_poset(&input.file)?;
            let closure = tail::closure_of_down(&p);
            let equals_down = closure == p.down_family();
            Ok((
                json!({
                    "members": formats::family_bitstrings(&closure),
                    "equals_down_family": equals_down,
                }),
                true,
                Some(input.file.clone()),
            ))
        }
        PosetCmd::CheckPps(input) => {
            let p = formats::read_poset(&input.file)?;
            let rep = tail::check_pps(&p).map_err(|e| FormatError(e.to_string()))?;
            let pass = rep.passed();
            Ok((duality_report_json(&rep), pass, Some(input.file.clone())))
        }
        PosetCmd::CheckIdeals(input) => {
            let p = formats::read_poset(&input.file)?;
            let rep = tail::check_prop_ideals(&p);
            let cor = tail::check_cor_ideauxclos(&p);
            let pass = rep.all_true() && rep.consistent() && cor.equivalent();
            let clauses: Value = rep
                .clauses
                .iter()
                .map(|(label, value)| (label.to_string(), json!(value)))
                .collect::<serde_json::Map<String, Value>>()
                .into();
            Ok((
                json!({
                    "clauses": clauses,
                    "clause_e_raw": rep.clause_e_raw,
                    "witnesses": rep.witnesses,
                    "taillat": formats::family_bitstrings(&rep.taillat_members),
                    "fg_final_with_top": formats::family_bitstrings(&rep.fg_final_with_top),
                    "corollary": {
                        "ideals_closed": cor.ideals_closed,
                        "fg_top_and_up_closed": cor.fg_top_and_up_closed,
                        "equivalent": cor.equivalent(),
                    },
                    "pass": pass,
                }),
                pass,
                Some(input.file.clone()),
            ))
        }
        PosetCmd::Birkhoff(input) => {
            let p = formats::read_poset(&input.file)?;
            match tail::birkhoff_iso(&p) {
                Ok(iso) => Ok((
                    json!({
                        "irreducibles": iso.irreducibles,
                        "phi": iso.phi.iter().map(|s| s.bitstring()).collect::<Vec<_>>(),
                        "target": formats::family_bitstrings(&iso.target),
                        "pass": true,
                    }),
                    true,
                    Some(input.file.clone()),
                )),
                Err(
                    e @ (tail::TailError::NotDistributive { .. }
                    | tail::TailError::NotBounded { .. }
                    | tail::TailError::NotLattice { .. }),
                ) => Ok((
                    json!({"pass": false, "reason": e.to_string()}),
                    false,
                    Some(input.file.clone()),
                )),
                Err(e) => Err(FormatError(e.to_string())),
            }
        }
        PosetCmd::FreeBoolean(input) => {
            let p = formats::read_poset(&input.file)?;
            let fb = tail::free_boolean(&p).map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "fg_final_segments": formats::family_bitstrings(&fb.fg_final_segments),
                    "carrier_size": fb.carrier_size(),
                    "embed": fb.embed.iter().map(|s| s.bitstring()).collect::<Vec<_>>(),
                }),
                true,
                Some(input.file.clone()),
            ))
        }
        PosetCmd::Universal(input) => {
            let parsed = formats::read_universal(&input.file, caps.members)?;
            let unique =
                tail::universal_property_check(&parsed.poset, &parsed.algebra, &parsed.map)
                    .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({"unique_extension": unique, "pass": unique}),
                unique,
                Some(input.file.clone()),
            ))
        }
    }
}

fn op_table_json(op: &ualg::Operation) -> Value {
    json!({"arity": op.arity(), "table": op.table()})
}

fn load_named_op<'a>(
    algebra: &'a ualg::FiniteAlgebra,
    name: &str,
) -> Result<&'a ualg::Operation, FormatError> {
    algebra
        .op(name)
        .ok_or_else(|| FormatError(format!("algebra has no operation named {name:?}")))
}

fn projection_report_json(rep: &ualg::ProjectionReport) -> Value {
    json!({
        "holds": rep.holds,
        "modes": rep.modes,
        "witnesses": rep
            .witnesses
            .iter()
            .map(|w| json!({
                "power": w.power,
                "subalgebra": w.subalgebra,
                "hom": w.hom,
            }))
            .collect::<Vec<_>>(),
        "pass": rep.holds,
    })
}

fn run_alg(cmd: &AlgCmd, caps: &Caps) -> Result<CmdOutput, FormatError> {
    match cmd {
        AlgCmd::Classify { algebra, op } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let f = load_named_op(&k, op)?;
            let cls = ualg::classify(f);
            Ok((
                json!({
                    "projection": cls.projection,
                    "idempotent": cls.idempotent,
                    "constant": cls.constant,
                }),
                true,
                algebra.file.clone(),
            ))
        }
        AlgCmd::Preserves {
            algebra,
            op,
            relation,
            relation_arity,
        } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let f = load_named_op(&k, op)?;
            let rho = formats::parse_relation_arg(k.universe(), *relation_arity, relation)?;
            let holds = ualg::preserves(f, &rho).map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({"preserves": holds, "pass": holds}),
                holds,
                algebra.file.clone(),
            ))
        }
        AlgCmd::Commutes {
            algebra,
            op,
            with_op,
        } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let f = load_named_op(&k, op)?;
            let g = load_named_op(&k, with_op)?;
            let holds = ualg::commutes(f, g).map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({"commutes": holds, "pass": holds}),
                holds,
                algebra.file.clone(),
            ))
        }
        AlgCmd::Subalg {
            algebra,
            power,
            gens,
        } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let tuples = formats::parse_tuples_arg(gens)?;
            let sub = ualg::Subalgebra::generate(&k, *power, &tuples, caps.tuples)
                .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({"count": sub.len(), "elements": sub.elements()}),
                true,
                algebra.file.clone(),
            ))
        }
        AlgCmd::Homs {
            algebra,
            power,
            gens,
        } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let tuples = formats::parse_tuples_arg(gens)?;
            let sub = ualg::Subalgebra::generate(&k, *power, &tuples, caps.tuples)
                .map_err(|e| FormatError(e.to_string()))?;
            let hs = ualg::homs(&sub, &k).map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "subalgebra": sub.elements(),
                    "count": hs.len(),
                    "homs": hs,
                }),
                true,
                algebra.file.clone(),
            ))
        }
        AlgCmd::ProjectionProperty { algebra, max_power } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let rep = ualg::has_projection_property(&k, *max_power)
                .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                projection_report_json(&rep),
                rep.holds,
                algebra.file.clone(),
            ))
        }
        AlgCmd::ProjectivelyTrivial { algebra, max_power } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let rep = ualg::is_projectively_trivial(&k, *max_power)
                .map_err(|e| FormatError(e.to_string()))?;
            Ok((
                projection_report_json(&rep),
                rep.holds,
                algebra.file.clone(),
            ))
        }
        AlgCmd::Projective { algebra, max_power } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let (rep, rigid) =
                ualg::is_projective(&k, *max_power).map_err(|e| FormatError(e.to_string()))?;
            let mut value = projection_report_json(&rep);
            value["rigid"] = json!(rigid);
            Ok((value, rep.holds, algebra.file.clone()))
        }
        AlgCmd::Centralizer { algebra, max_arity } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let ops = ualg::centralizer(&k, *max_arity).map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "count": ops.len(),
                    "operations": ops.iter().map(op_table_json).collect::<Vec<_>>(),
                }),
                true,
                algebra.file.clone(),
            ))
        }
        AlgCmd::Pol {
            universe,
            relations,
            max_arity,
        } => {
            let lists: Vec<Vec<Vec<usize>>> = serde_json::from_str(relations)
                .map_err(|e| FormatError(format!("relations JSON: {e}")))?;
            let mut parsed = Vec::new();
            for (i, tuples) in lists.into_iter().enumerate() {
                let arity = tuples
                    .first()
                    .map(|t| t.len())
                    .ok_or_else(|| FormatError(format!("relation {i} is empty")))?;
                parsed.push(
                    ualg::Relation::new(*universe, arity, tuples)
                        .map_err(|e| FormatError(format!("relation {i}: {e}")))?,
                );
            }
            let ops =
                ualg::polymorph(&parsed, *max_arity).map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "count": ops.len(),
                    "operations": ops.iter().map(op_table_json).collect::<Vec<_>>(),
                }),
                true,
                None,
            ))
        }
        AlgCmd::Inv { algebra, max_arity } => {
            let k = formats::load_algebra(algebra.file.as_deref(), algebra.preset.as_deref())?;
            let rels = ualg::invariants(&k, *max_arity).map_err(|e| FormatError(e.to_string()))?;
            Ok((
                json!({
                    "count": rels.len(),
                    "relations": rels
                        .iter()
                        .map(|r| json!({"arity": r.arity(), "tuples": r.tuples()}))
                        .collect::<Vec<_>>(),
                }),
                true,
                algebra.file.clone(),
            ))
        }
        AlgCmd::Verify3a { file } => {
            let a = formats::read_matrix(file)?;
            let rep =
                ualg::verify_prop3a(&a, caps.tuples).map_err(|e| FormatError(e.to_string()))?;
            let pass = rep.passed();
            Ok((duality_report_json(&rep), pass, Some(file.clone())))
        }
    }
}

fn run_meta(cmd: &MetaCmd, seed: u64) -> Result<CmdOutput, FormatError> {
    match cmd {
        MetaCmd::Selftest => {
            let results = selftest::run_all(seed);
            let pass = results.iter().all(|r| r.pass);
            let payload = json!({
                "seed": seed,
                "criteria": results
                    .iter()
                    .map(|r| json!({
                        "id": r.id,
                        "name": r.name,
                        "pass": r.pass,
                        "details": r.details,
                        "elapsed_ms": r.elapsed_ms,
                    }))
                    .collect::<Vec<_>>(),
                "report": selftest::render_report(&results),
                "pass": pass,
            });
            Ok((payload, pass, None))
        }
    }
}

fn command_name(cmd: &Command) -> String {
    match cmd {
        Command::Context { cmd } => format!(
            "context {}",
            match cmd {
                ContextCmd::Stats(_) => "stats",
                ContextCmd::Galois(_) => "galois",
                ContextCmd::Dual(_) => "dual",
                ContextCmd::VerifyDuality(_) => "verify-duality",
            }
        ),
        Command::Setfam { cmd } => format!(
            "setfam {}",
            match cmd {
                SetfamCmd::Lattice(_) => "lattice",
                SetfamCmd::Boolean(_) => "boolean",
                SetfamCmd::Count(_) => "count",
            }
        ),
        Command::Poset { cmd } => format!(
            "poset {}",
            match cmd {
                PosetCmd::Segments(_) => "segments",
                PosetCmd::Ideals(_) => "ideals",
                PosetCmd::Tailalg(_) => "tailalg",
                PosetCmd::Taillat(_) => "taillat",
                PosetCmd::Closure(_) => "closure",
                PosetCmd::CheckPps(_) => "check-pps",
                PosetCmd::CheckIdeals(_) => "check-ideals",
                PosetCmd::Birkhoff(_) => "birkhoff",
                PosetCmd::FreeBoolean(_) => "free-boolean",
                PosetCmd::Universal(_) => "universal",
            }
        ),
        Command::Alg { cmd } => format!(
            "alg {}",
            match cmd {
                AlgCmd::Classify { .. } => "classify",
                AlgCmd::Preserves { .. } => "preserves",
                AlgCmd::Commutes { .. } => "commutes",
                AlgCmd::Subalg { .. } => "subalg",
                AlgCmd::Homs { .. } => "homs",
                AlgCmd::ProjectionProperty { .. } => "projection-property",
                AlgCmd::ProjectivelyTrivial { .. } => "projectively-trivial",
                AlgCmd::Projective { .. } => "projective",
                AlgCmd::Centralizer { .. } => "centralizer",
                AlgCmd::Pol { .. } => "pol",
                AlgCmd::Inv { .. } => "inv",
                AlgCmd::Verify3a { .. } => "verify-3a",
            }
        ),
        Command::Meta { cmd } => format!(
            "meta {}",
            match cmd {
                MetaCmd::Selftest => "selftest",
            }
        ),
    }
}

fn run(cli: Cli) -> i32 {
    let caps = resolve_caps(&cli);
    let seed = cli.seed.unwrap_or(selftest::DEFAULT_SEED);
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Context { cmd } => run_context(cmd, &caps),
        Command::Setfam { cmd } => run_setfam(cmd, &caps),
        Command::Poset { cmd } => run_poset(cmd, &caps),
        Command::Alg { cmd } => run_alg(cmd, &caps),
        Command::Meta { cmd } => run_meta(cmd, seed),
    };
    match outcome {
        Ok((result, pass, input_path)) => {
            let input = input_path.map(|path| {
                json!({
                    "path": path.clone(),
                    "sha256": sha256_of(&path),
                })
            });
            let report = json!({
                "schema": 1,
                "command": command_name(&cli.command),
                "input": input,
                "pass": pass,
                "result": result,
                "wall_ms": start.elapsed().as_millis() as u64,
            });
            match cli.format {
                OutputFormat::Json => println!("{report}"),
                OutputFormat::Text => {
                    println!("command: {}", command_name(&cli.command));
                    println!("pass: {pass}");
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&report["result"]).expect("result serializes")
                    );
                }
            }
            if pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, other parse errors
            // are usage errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(cli));
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn caps_resolution_prefers_flags_over_env() {
        let cli = Cli::try_parse_from(["dualkit", "meta", "selftest"]).unwrap();
        std::env::set_var("DUALKIT_CAPS", "members=123,tuples=456");
        let caps = resolve_caps(&cli);
        assert_eq!(caps.members, 123);
        assert_eq!(caps.tuples, 456);

        let cli =
            Cli::try_parse_from(["dualkit", "--cap-members", "9", "meta", "selftest"]).unwrap();
        let caps = resolve_caps(&cli);
        assert_eq!(caps.members, 9);
        assert_eq!(caps.tuples, 456);
        std::env::remove_var("DUALKIT_CAPS");
    }
}
