//! Argument definitions and the per-subcommand handlers.

use cartankit::blockcalc::{
    decomposition_enumerate_with, find_good_element, k_bar_from_subsections, k_from_subsections,
    kb_check_min_with_budget, rank_two_criterion, EnumerateOptions,
};
use cartankit::embed::{is_decomposable, orthogonal_embeddings_with, EmbedOptions, DEFAULT_NODE_BUDGET};
use cartankit::exactlin::{det, kernel_basis, snf};
use cartankit::io::{
    action_to_json, group_to_json, int_matrix_to_json, int_to_json, parse_form, parse_group_action, parse_int_matrix,
    parse_rat_matrix, parse_scenario, rat_matrix_to_json, rational_to_json, vec_to_json,
};
use cartankit::paction::{
    coprime_split_check, has_free_action, invariant_transversal, orbits, regular_orbit_search, restrict_to_omega2,
    verify as verify_transversal, ActionGroup,
};
use cartankit::qform::{
    congruent_with_budget, minimum_with_budget, theta_prefix_with_budget, weighted_bound, Congruence, Distinction,
    DEFAULT_CONGRUENCE_BUDGET, DEFAULT_ENUM_BUDGET,
};
use cartankit::{Error, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::input::load;
use crate::report::RunReport;
use crate::suite;

fn parse_budget(s: &str) -> std::result::Result<u64, String> {
    if s == "max" {
        return Ok(u64::MAX);
    }
    s.parse()
        .map_err(|_| format!("expected a node count or \"max\", got \"{s}\""))
}

#[derive(Debug, Parser)]
#[command(
    name = "cartankit",
    version,
    about = "Exact Cartan matrix, quadratic form and p-group action computations"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Backtracking node budget, or "max".
    #[arg(long, global = true, value_parser = parse_budget)]
    pub budget: Option<u64>,
    /// Refuse randomized search paths. Every default path is deterministic, so this changes nothing.
    #[arg(long, global = true)]
    pub seedless: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact integer linear algebra.
    Exactlin {
        #[command(subcommand)]
        op: ExactlinOp,
    },
    /// Positive-definite quadratic forms.
    Qform {
        #[command(subcommand)]
        op: QformOp,
    },
    /// Factorizations C = Q^T Q.
    Embed(EmbedArgs),
    /// Coprime actions on finite abelian p-groups.
    Paction {
        #[command(subcommand)]
        op: PactionOp,
    },
    /// Block scenarios and the k(B) <= |D| criteria.
    Block {
        #[command(subcommand)]
        op: BlockOp,
    },
    /// Run the bundled verification suite.
    Verify {
        /// Run only these checks (repeatable); default all.
        #[arg(long = "check", value_parser = clap::value_parser!(u32).range(1..=10))]
        checks: Vec<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExactlinOp {
    /// Smith normal form with transforms.
    Snf(MatrixArg),
    /// Saturated basis of the integer left kernel.
    Kernel(MatrixArg),
    /// Exact determinant.
    Det(MatrixArg),
}

#[derive(Debug, Args)]
pub struct MatrixArg {
    /// Matrix as JSON, a file, or a fixture name.
    #[arg(long)]
    pub matrix: String,
}

#[derive(Debug, Subcommand)]
pub enum QformOp {
    /// Exact minimum and minimal vectors.
    Min {
        #[arg(long)]
        form: String,
        /// Expected minimum; adds a verdict.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Unimodular congruence test.
    Congruent {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Weighted bound <W, C>.
    Bound {
        #[arg(long)]
        weight: String,
        #[arg(long)]
        cartan: String,
        #[arg(long)]
        expect: Option<String>,
    },
    /// Representation numbers up to a norm bound.
    Theta {
        #[arg(long)]
        form: String,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Target Gram matrix C.
    #[arg(long)]
    pub target: String,
    /// Fix the number of rows.
    #[arg(long)]
    pub rows: Option<usize>,
    /// With --rows, drop solutions containing zero rows.
    #[arg(long)]
    pub no_zero_rows: bool,
}

#[derive(Debug, Subcommand)]
pub enum PactionOp {
    /// Orbits with stabilizer orders.
    Orbits(ActionArg),
    /// Whether every nonidentity element fixes only zero.
    Free(ActionArg),
    /// Search for a regular orbit.
    Regular(ActionArg),
    /// Invariant transversal on Omega_2(P), exhaustively verified.
    Transversal(ActionArg),
    /// P = [P, A] x C_P(A).
    Split(ActionArg),
}

#[derive(Debug, Args)]
pub struct ActionArg {
    /// {"defect": group, "action": generators}, a file, or a fixture name.
    #[arg(long)]
    pub action: String,
}

#[derive(Debug, Subcommand)]
pub enum BlockOp {
    /// Subsection inventory.
    Inventory(ScenarioArg),
    /// k(B) from the l-values of subsections.
    K(ScenarioArg),
    /// Generalized decomposition matrices and candidate Cartan matrices.
    Enumerate {
        #[arg(long)]
        scenario: String,
        /// Report every solution instead of one per congruence class.
        #[arg(long)]
        no_dedupe: bool,
    },
    /// The criterion min x |D| C^{-1} x^T >= l.
    Kbcheck {
        #[arg(long)]
        cartan: String,
        #[arg(long)]
        d_order: u64,
        /// Defaults to the size of the Cartan matrix.
        #[arg(long)]
        l: Option<u64>,
    },
    /// First element with small [D, C_A(u)].
    Goodelem {
        #[arg(long)]
        action: String,
        #[arg(long)]
        threshold: usize,
    },
    /// Determinant and freeness criterion for rank at most two.
    Mainchk(ActionArg),
}

#[derive(Debug, Args)]
pub struct ScenarioArg {
    #[arg(long)]
    pub scenario: String,
}

/// Budgets for the individual searches; `--budget` overrides all of them.
#[derive(Debug, Clone, Copy)]
pub struct Budgets {
    pub explicit: Option<u64>,
}

impl Budgets {
    fn or(&self, default: u64) -> u64 {
        self.explicit.unwrap_or(default)
    }
}

fn rational_arg(s: &str) -> Result<num_rational::BigRational> {
    cartankit::io::parse_rational(&load_scalar(s)?, "--expect")
}

fn load_scalar(s: &str) -> Result<Value> {
    cartankit::io::parse_json(s).or_else(|_| Ok(Value::String(s.to_string())))
}

pub fn dispatch(command: &Command, b: Budgets) -> Result<RunReport> {
    match command {
        Command::Exactlin { op } => exactlin(op),
        Command::Qform { op } => qform(op, b),
        Command::Embed(a) => embed(a, b),
        Command::Paction { op } => paction(op),
        Command::Block { op } => block(op, b),
        Command::Verify { checks } => Ok(suite::verify_suite(checks, b.explicit)),
    }
}

fn exactlin(op: &ExactlinOp) -> Result<RunReport> {
    match op {
        ExactlinOp::Snf(a) => {
            let v = load(&a.matrix)?;
            let m = parse_int_matrix(&v, "$")?;
            let s = snf(&m);
            let mut r = RunReport::new("exactlin snf", json!({ "matrix": int_matrix_to_json(&m) }));
            r.results = json!({
                "diagonal": s.diagonal.iter().map(int_to_json).collect::<Vec<_>>(),
                "elementary_divisors": s.elementary_divisors().iter().map(int_to_json).collect::<Vec<_>>(),
                "rank": s.rank(),
                "left": int_matrix_to_json(&s.left),
                "right": int_matrix_to_json(&s.right),
            });
            let check = s.left.mul(&m)?.mul(&s.right)? == s.diagonal_matrix(m.rows(), m.cols());
            r.verdict("U A V equals the diagonal form", check);
            Ok(r)
        }
        ExactlinOp::Kernel(a) => {
            let v = load(&a.matrix)?;
            let m = parse_int_matrix(&v, "$")?;
            let k = kernel_basis(&m);
            let mut r = RunReport::new("exactlin kernel", json!({ "matrix": int_matrix_to_json(&m) }));
            r.results = json!({ "rank": k.rows(), "basis": int_matrix_to_json(&k) });
            Ok(r)
        }
        ExactlinOp::Det(a) => {
            let v = load(&a.matrix)?;
            let m = parse_rat_matrix(&v, "$")?;
            let d = det(&m)?;
            let mut r = RunReport::new("exactlin det", json!({ "matrix": rat_matrix_to_json(&m) }));
            r.results = json!({ "det": rational_to_json(&d) });
            Ok(r)
        }
    }
}

fn distinction_json(d: &Distinction) -> Value {
    let ints = |v: &[BigInt]| v.iter().map(int_to_json).collect::<Vec<_>>();
    match d {
        Distinction::Dimension { left, right } => json!({"kind": "dimension", "left": left, "right": right}),
        Distinction::Determinant { left, right } => {
            json!({"kind": "determinant", "left": int_to_json(left), "right": int_to_json(right)})
        }
        Distinction::ElementaryDivisors { left, right } => {
            json!({"kind": "elementary_divisors", "left": ints(left), "right": ints(right)})
        }
        Distinction::Minimum { left, right } => {
            json!({"kind": "minimum", "left": int_to_json(left), "right": int_to_json(right)})
        }
        Distinction::ThetaPrefix { norm, left, right } => {
            json!({"kind": "theta_prefix", "norm": int_to_json(norm), "left": left, "right": right})
        }
        Distinction::Exhaustive => json!({"kind": "exhaustive"}),
    }
}

fn qform(op: &QformOp, b: Budgets) -> Result<RunReport> {
    match op {
        QformOp::Min { form, expect } => {
            let v = load(form)?;
            let g = parse_form(&v, "$")?;
            let m = minimum_with_budget(&g, b.or(DEFAULT_ENUM_BUDGET))?;
            let mut r = RunReport::new("qform min", json!({ "form": rat_matrix_to_json(g.entries()) }));
            r.results = json!({
                "value": rational_to_json(&m.value),
                "minimal_vectors": m.vectors.iter().map(|x| x.iter().map(int_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            if let Some(e) = expect {
                let e = rational_arg(e)?;
                r.verdict(format!("minimum equals {e}"), m.value == e);
            }
            Ok(r)
        }
        QformOp::Congruent { left, right } => {
            let g1 = parse_form(&load(left)?, "$left")?;
            let g2 = parse_form(&load(right)?, "$right")?;
            let c = congruent_with_budget(&g1, &g2, b.or(DEFAULT_CONGRUENCE_BUDGET))?;
            let mut r = RunReport::new(
                "qform congruent",
                json!({ "left": rat_matrix_to_json(g1.entries()), "right": rat_matrix_to_json(g2.entries()) }),
            );
            r.results = match &c {
                Congruence::Congruent(s) => json!({ "congruent": true, "witness": int_matrix_to_json(s) }),
                Congruence::Distinct(d) => json!({ "congruent": false, "distinction": distinction_json(d) }),
            };
            r.verdict("forms are unimodularly congruent", c.is_congruent());
            Ok(r)
        }
        QformOp::Bound { weight, cartan, expect } => {
            let w = parse_form(&load(weight)?, "$weight")?;
            let c = parse_int_matrix(&load(cartan)?, "$cartan")?;
            let value = weighted_bound(&w, &c)?;
            let mut r = RunReport::new(
                "qform bound",
                json!({ "weight": rat_matrix_to_json(w.entries()), "cartan": int_matrix_to_json(&c) }),
            );
            r.results = json!({ "value": rational_to_json(&value) });
            if let Some(e) = expect {
                let e = rational_arg(e)?;
                r.verdict(format!("<W, C> equals {e}"), value == e);
            }
            Ok(r)
        }
        QformOp::Theta { form, bound } => {
            let g = parse_form(&load(form)?, "$")?;
            let t = theta_prefix_with_budget(&g, &BigInt::from(*bound), b.or(DEFAULT_ENUM_BUDGET))?;
            let mut r = RunReport::new(
                "qform theta",
                json!({ "form": rat_matrix_to_json(g.entries()), "bound": bound }),
            );
            r.results = json!({
                "counts": t.iter().map(|(n, c)| json!([int_to_json(n), c])).collect::<Vec<_>>(),
            });
            Ok(r)
        }
    }
}

fn embed(a: &EmbedArgs, b: Budgets) -> Result<RunReport> {
    let c = parse_int_matrix(&load(&a.target)?, "$")?;
    let opts = EmbedOptions {
        rows: a.rows,
        allow_zero_rows: a.rows.is_some() && !a.no_zero_rows,
        node_budget: b.or(DEFAULT_NODE_BUDGET),
        column_blocks: Vec::new(),
    };
    let embs = orthogonal_embeddings_with(&c, &opts)?;
    let mut r = RunReport::new(
        "embed",
        json!({ "target": int_matrix_to_json(&c), "rows": a.rows, "zero_rows": opts.allow_zero_rows }),
    );
    r.results = json!({
        "classes": embs.len(),
        "embeddings": embs.iter().map(|e| json!({
            "rows": e.rows(),
            "decomposable": is_decomposable(e.matrix()).is_decomposable(),
            "matrix": int_matrix_to_json(e.matrix()),
        })).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn action_inputs(a: &ActionGroup) -> Value {
    json!({ "defect": group_to_json(a.group()), "action": action_to_json(a), "order": a.order() })
}

fn load_action(arg: &str) -> Result<ActionGroup> {
    parse_group_action(&load(arg)?, "$")
}

fn paction(op: &PactionOp) -> Result<RunReport> {
    match op {
        PactionOp::Orbits(x) => {
            let a = load_action(&x.action)?;
            let mut r = RunReport::new("paction orbits", action_inputs(&a));
            let os = orbits(&a);
            r.results = json!({
                "count": os.len(),
                "orbits": os.iter().map(|o| json!({
                    "rep": vec_to_json(&o.rep), "size": o.size, "stabilizer_order": o.stabilizer_order,
                })).collect::<Vec<_>>(),
            });
            Ok(r)
        }
        PactionOp::Free(x) => {
            let a = load_action(&x.action)?;
            let mut r = RunReport::new("paction free", action_inputs(&a));
            let free = has_free_action(&a);
            r.results = json!({ "free": free });
            r.verdict("action is free", free);
            Ok(r)
        }
        PactionOp::Regular(x) => {
            let a = load_action(&x.action)?;
            let mut r = RunReport::new("paction regular", action_inputs(&a));
            let point = regular_orbit_search(&a);
            r.results = json!({ "point": point.as_deref().map(vec_to_json) });
            r.verdict("a regular orbit exists", point.is_some());
            Ok(r)
        }
        PactionOp::Transversal(x) => {
            let a = load_action(&x.action)?;
            let mut r = RunReport::new("paction transversal", action_inputs(&a));
            let (sub, restricted) = if a.group().is_homocyclic() && a.group().exponents()[0] == 2 {
                (a.clone(), false)
            } else {
                (restrict_to_omega2(&a)?.action, true)
            };
            let tr = invariant_transversal(&sub)?;
            let ok = verify_transversal(&sub, &tr).is_ok();
            r.results = json!({
                "restricted_to_omega2": restricted,
                "used_fallback": tr.used_fallback,
                "representatives": tr.representatives().iter().map(|t| vec_to_json(t)).collect::<Vec<_>>(),
            });
            r.verdict("transversal is an equivariant bijection", ok);
            Ok(r)
        }
        PactionOp::Split(x) => {
            let a = load_action(&x.action)?;
            let mut r = RunReport::new("paction split", action_inputs(&a));
            let s = coprime_split_check(&a)?;
            r.results = json!({
                "fixed_order": s.fixed_order,
                "commutator_order": s.commutator_order,
                "intersection_order": s.intersection_order,
            });
            r.verdict("P = [P, A] x C_P(A)", s.holds);
            Ok(r)
        }
    }
}

fn block(op: &BlockOp, b: Budgets) -> Result<RunReport> {
    match op {
        BlockOp::Inventory(x) => {
            let v = load(&x.scenario)?;
            let s = parse_scenario(&v)?;
            let mut r = RunReport::new("block inventory", v.clone());
            r.results = json!({
                "e": s.e(),
                "z_order": s.z_order(),
                "l_block": s.l_block(),
                "subsections": s.subsections.iter().map(|u| json!({
                    "rep": vec_to_json(&u.rep),
                    "orbit_size": u.orbit_size,
                    "u_order": u.u_order,
                    "centralizer_order": u.centralizer_order,
                    "commutator_order": u.commutator_order,
                    "z_part": u.z_part,
                    "free": u.free,
                    "l": u.l_value,
                    "cartan": u.cartan.as_ref().map(int_matrix_to_json),
                })).collect::<Vec<_>>(),
                "assumptions": s.assumptions,
            });
            Ok(r)
        }
        BlockOp::K(x) => {
            let v = load(&x.scenario)?;
            let s = parse_scenario(&v)?;
            let mut r = RunReport::new("block k", v.clone());
            let k = k_from_subsections(&s)?;
            let d = s.defect().order() as u64;
            r.results = json!({
                "k": k,
                "k_bar": k_bar_from_subsections(&s)?,
                "z_order": s.z_order(),
                "d_order": d,
            });
            r.verdict("k(B) <= |D|", k <= d);
            Ok(r)
        }
        BlockOp::Enumerate { scenario, no_dedupe } => {
            let v = load(scenario)?;
            let s = parse_scenario(&v)?;
            let opts = EnumerateOptions {
                dedupe: !no_dedupe,
                node_budget: b.or(DEFAULT_NODE_BUDGET),
                congruence_budget: b.or(DEFAULT_CONGRUENCE_BUDGET),
            };
            let sets = decomposition_enumerate_with(&s, &opts)?;
            let mut r = RunReport::new("block enumerate", v.clone());
            let checked = sets.iter().all(|d| d.check(&s).is_ok());
            r.results = json!({
                "classes": sets.len(),
                "solutions": sets.iter().map(|d| d.class_size).sum::<usize>(),
                "sets": sets.iter().map(|d| json!({
                    "k": d.k,
                    "l": d.l(),
                    "class_size": d.class_size,
                    "blocks": d.blocks.iter().map(|(rep, q)| json!({
                        "rep": vec_to_json(rep), "matrix": int_matrix_to_json(q),
                    })).collect::<Vec<_>>(),
                    "gamma_basis": int_matrix_to_json(&d.gamma_basis),
                    "candidate_cartan": int_matrix_to_json(&d.candidate_cartan),
                    "block_cartan": int_matrix_to_json(&d.block_cartan()),
                })).collect::<Vec<_>>(),
            });
            r.verdict("every solution satisfies the orthogonality relations", checked);
            Ok(r)
        }
        BlockOp::Kbcheck { cartan, d_order, l } => {
            let c = parse_int_matrix(&load(cartan)?, "$")?;
            let l = l.unwrap_or(c.rows() as u64);
            let k = kb_check_min_with_budget(&c, *d_order, l, b.or(DEFAULT_ENUM_BUDGET))?;
            let mut r = RunReport::new(
                "block kbcheck",
                json!({ "cartan": int_matrix_to_json(&c), "d_order": d_order, "l": l }),
            );
            r.results = json!({ "minimum": rational_to_json(&k.minimum), "l": k.l });
            r.verdict(format!("min x |D| C^-1 x^T >= {l}"), k.holds);
            Ok(r)
        }
        BlockOp::Goodelem { action, threshold } => {
            let a = load_action(action)?;
            let mut r = RunReport::new(
                "block goodelem",
                json!({ "action": action_inputs(&a), "threshold": threshold }),
            );
            let u = find_good_element(&a, *threshold)?;
            r.results = match &u {
                Some(u) => json!({
                    "element": vec_to_json(&u.element),
                    "commutator_order": u.commutator_order,
                    "centralizer_order": u.centralizer_order,
                    "free": u.free,
                }),
                None => json!({ "element": null }),
            };
            r.verdict(format!("some u has |[D, C_A(u)]| <= {threshold}"), u.is_some());
            if let Some(u) = &u {
                r.verdict("C_A(u) acts freely on [D, C_A(u)]", u.free);
            }
            Ok(r)
        }
        BlockOp::Mainchk(x) => {
            let a = load_action(&x.action)?;
            let mut r = RunReport::new("block mainchk", action_inputs(&a));
            let m = rank_two_criterion(&a)?;
            r.results = json!({ "dets": m.dets, "special_linear": m.special_linear, "free": m.free });
            r.verdict("generators lie in SL(Omega)", m.special_linear);
            r.verdict("action is free", m.free);
            Ok(r)
        }
    }
}

/// Maps a core error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource_limit() {
        3
    } else {
        2
    }
}
