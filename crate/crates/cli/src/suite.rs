//! The bundled verification suite.
//!
//! Inputs come from the fixture directory, expected values are fixed here, so
//! a tampered fixture makes the corresponding check fail.

use std::collections::BTreeSet;
use std::time::Instant;

use cartankit::blockcalc::{
    decomposition_enumerate_with, find_good_element, free_case_cartan, l_from_mod8, EnumerateOptions,
};
use cartankit::embed::{canonical_form, orthogonal_embeddings, orthogonal_embeddings_with, EmbedOptions};
use cartankit::exactlin::{elementary_divisors, is_positive_definite, snf, Matrix};
use cartankit::io::{int_matrix_to_json, parse_form, parse_group_action, parse_int_matrix, parse_scenario, parse_u64};
use cartankit::paction::{
    commutator_part_of, invariant_transversal, regular_orbit_search, restrict_to_omega2, verify, AbelianPGroup,
    ActionGroup,
};
use cartankit::qform::{
    congruent, congruent_with_budget, minimum, minimum_with_budget, scaled_inverse, short_vectors, GramForm,
};
use cartankit::{Error, IntMatrix, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::fixture;
use crate::oracle::{box_bounds, box_minimum, brute_embeddings, frobenius_pairing, int, snf_is_valid};
use crate::report::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub ms: u64,
}

/// Identifiers and short names of the checks, in order.
pub const CHECKS: [(u32, &str); 10] = [
    (1, "e6-type form: minimum 4, no factorization"),
    (2, "tensor chain minima 3 and 9"),
    (3, "weighted bounds equal |D|"),
    (4, "Z_2^3 with Z_7 x| Z_3: unique decomposition matrix"),
    (5, "free-case Cartan matrix and its elementary divisors"),
    (6, "l(B) from the mod-8 congruence"),
    (7, "regular orbits and invariant transversals"),
    (8, "F_128: good element with free centralizer"),
    (9, "Z_2^4 with Z_3^2: candidate Cartan matrices"),
    (10, "oracle equivalence of SNF, minima and embeddings"),
];

/// Why a check body produced no verdict.
enum Stop {
    Skip(String),
    Error(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Error(e)
    }
}

/// Outcome of a check body: pass flag and a one-line detail.
type Body = std::result::Result<(bool, String), Stop>;

pub fn run_check(id: u32, budget: Option<u64>) -> CheckResult {
    let name = CHECKS
        .iter()
        .find(|(i, _)| *i == id)
        .map(|(_, n)| *n)
        .expect("known check id");
    let start = Instant::now();
    let body = match id {
        1 => check_e6(),
        2 => check_tensor_chain(),
        3 => check_weighted_bounds(),
        4 => check_f21(),
        5 => check_free_case(),
        6 => check_mod8(),
        7 => check_regular_orbits(),
        8 => check_f128(),
        9 => check_z2_fourth(budget),
        _ => check_oracles(),
    };
    let (status, detail) = match body {
        Ok((true, d)) => (Status::Pass, d),
        Ok((false, d)) => (Status::Fail, d),
        Err(Stop::Error(Error::ResourceLimit { what, limit })) if id == 9 => {
            (Status::Skip, format!("budget exhausted: {what} (limit {limit})"))
        }
        Err(Stop::Skip(msg)) => (Status::Skip, msg),
        Err(Stop::Error(e)) => (Status::Fail, format!("error: {e}")),
    };
    CheckResult {
        id,
        name,
        status,
        detail,
        ms: start.elapsed().as_millis() as u64,
    }
}

/// Runs the selected checks (all when `only` is empty); the extended one
/// only with an explicit budget.
pub fn verify_suite(only: &[u32], budget: Option<u64>) -> RunReport {
    let mut r = RunReport::new(
        "verify",
        json!({ "budget": budget.map(|b| b.to_string()), "checks": only }),
    );
    let mut checks = Vec::new();
    for (id, _) in CHECKS.into_iter().filter(|(i, _)| only.is_empty() || only.contains(i)) {
        let c = run_check(id, budget);
        if c.status != Status::Skip {
            r.verdict(format!("{}: {}", c.id, c.name), c.status == Status::Pass);
        }
        checks.push(json!({
            "id": c.id,
            "name": c.name,
            "status": c.status.label(),
            "detail": c.detail,
        }));
    }
    r.results = json!({ "checks": checks });
    r
}

fn load_matrix(name: &str) -> Result<IntMatrix> {
    parse_int_matrix(&fixture(name)?, name)
}

fn load_u64(v: &Value, key: &str, name: &str) -> Result<u64> {
    parse_u64(cartankit::io::field(v, key, name)?, &format!("{name}.{key}"))
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn check_e6() -> Body {
    let v = fixture("e6_type")?;
    let m = parse_int_matrix(&v, "e6_type")?;
    let scale = BigInt::from(load_u64(&v, "cartan_scale", "e6_type")?);
    let d = BigInt::from(load_u64(&v, "d_order", "e6_type")?);
    let c = m.scale(&scale);
    let min = minimum(&scaled_inverse(&c, &d)?)?.value;
    let embs = orthogonal_embeddings(&m, None)?;
    Ok((
        min == r(4) && embs.is_empty(),
        format!("minimum {min}, {} factorizations of C / {scale}", embs.len()),
    ))
}

fn check_tensor_chain() -> Body {
    let m = GramForm::from_int(&load_matrix("ones_plus_identity_3")?)?;
    let a = minimum(&m.inverse().scaled(&r(4))?)?.value;
    let b = minimum(&m.kronecker(&m).inverse().scaled(&r(16))?)?.value;
    Ok((
        a == r(3) && b == r(9),
        format!("min 4 M^-1 = {a}, min 16 (M x M)^-1 = {b}"),
    ))
}

fn check_weighted_bounds() -> Body {
    let pairs = [
        ("weight_e21", "cartan_e21_d8", 8),
        ("weight_d9_rank5", "cartan_d9_rank5", 9),
        ("weight_d9_rank7", "cartan_d9_rank7", 9),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (w, c, d) in pairs {
        let wf = parse_form(&fixture(w)?, w)?;
        let cm = load_matrix(c)?;
        let value = cartankit::qform::weighted_bound(&wf, &cm)?;
        let direct = frobenius_pairing(wf.entries(), &cm);
        ok &= value == r(d) && direct == value;
        parts.push(format!("{c}: {value}"));
    }
    Ok((ok, parts.join(", ")))
}

fn check_f21() -> Body {
    let s = parse_scenario(&fixture("z2cubed_f21")?)?;
    let nontrivial: Vec<_> = s.subsections.iter().filter(|u| !u.is_trivial()).collect();
    let two = BigInt::from(2);
    let expect_c = Matrix::constant_plus_identity(3, two.clone(), two);
    let inventory_ok = nontrivial.len() == 1
        && nontrivial[0].orbit_size == 7
        && nontrivial[0].centralizer_order == 3
        && nontrivial[0].cartan.as_ref() == Some(&expect_c);
    if !inventory_ok {
        return Ok((
            false,
            format!("unexpected inventory: {} nontrivial orbits", nontrivial.len()),
        ));
    }
    let sets = decomposition_enumerate_with(&s, &EnumerateOptions::default())?;
    if sets.len() != 1 {
        return Ok((false, format!("{} classes", sets.len())));
    }
    let d = &sets[0];
    d.check(&s)?;
    let printed = load_matrix("decomposition_e21_8x3")?;
    let same_q = canonical_form(&d.blocks[0].1) == canonical_form(&printed);
    let case_ix = GramForm::from_int(&load_matrix("cartan_e21_d8")?)?;
    let cong = congruent(&GramForm::from_int(&d.block_cartan())?, &case_ix)?.is_congruent();
    Ok((
        same_q && d.l() == 5 && cong,
        format!(
            "1 class of {} solutions, Q~ matches: {same_q}, rank Gamma {}, congruent to printed Cartan: {cong}",
            d.class_size,
            d.l()
        ),
    ))
}

fn check_free_case() -> Body {
    let c = free_case_cartan(2, 4, 3)?;
    let two = BigInt::from(2);
    let ed = elementary_divisors(&c);
    let ok = c == Matrix::constant_plus_identity(3, two.clone(), two) && ed == [2, 2, 8].map(BigInt::from);
    let ed: Vec<String> = ed.iter().map(|x| x.to_string()).collect();
    Ok((ok, format!("elementary divisors ({})", ed.join(", "))))
}

fn check_mod8() -> Body {
    let table = [(4, 3, 3), (16, 5, 5), (8, 7, 7), (16, 15, 15)];
    let mut got = Vec::new();
    let mut ok = true;
    for (d, e, l) in table {
        let x = l_from_mod8(d, e)?;
        ok &= x == l;
        got.push(format!("({d},{e}) -> {x}"));
    }
    Ok((ok, got.join(", ")))
}

fn transversal_ok(a: &ActionGroup) -> Result<bool> {
    let g = a.group();
    let sub = if g.is_homocyclic() && g.exponents()[0] == 2 {
        a.clone()
    } else {
        restrict_to_omega2(a)?.action
    };
    let tr = invariant_transversal(&sub)?;
    Ok(verify(&sub, &tr).is_ok())
}

fn check_regular_orbits() -> Body {
    let corpus = fixture("regular_orbit_corpus")?;
    let cases = cartankit::io::field(&corpus, "cases", "regular_orbit_corpus")?
        .as_array()
        .ok_or_else(|| Error::Parse("regular_orbit_corpus.cases: expected an array".into()))?
        .clone();
    let mut failures = Vec::new();
    let mut seen_z4_squared = false;
    for (i, case) in cases.iter().enumerate() {
        let path = format!("regular_orbit_corpus.cases[{i}]");
        let a = parse_group_action(case, &path)?;
        let g = a.group();
        let name = case.get("name").and_then(Value::as_str).unwrap_or("?").to_string();
        let shape_ok =
            g.p() == 2 && g.exponents().iter().all(|&e| e >= 2) && g.order() <= 1 << 10 && a.order() % 2 == 1;
        seen_z4_squared |= g.exponents() == [2, 2] && a.order() == 3;
        if !shape_ok || regular_orbit_search(&a).is_none() || !transversal_ok(&a)? {
            failures.push(name);
        }
    }
    let control = parse_group_action(&fixture("klein_four_full_aut")?, "klein_four_full_aut")?;
    let control_ok = regular_orbit_search(&control).is_none();
    Ok((
        failures.is_empty() && control_ok && cases.len() >= 20 && seen_z4_squared,
        format!(
            "{} cases, failures {failures:?}, Z_4^2 with Z_3 present: {seen_z4_squared}, control without regular orbit: {control_ok}",
            cases.len()
        ),
    ))
}

fn check_f128() -> Body {
    let v = fixture("f128_singer_frobenius")?;
    let a = parse_group_action(&v, "f128_singer_frobenius")?;
    let threshold = load_u64(&v, "threshold", "f128_singer_frobenius")? as usize;
    let Some(u) = find_good_element(&a, threshold)? else {
        return Ok((false, "no element found".into()));
    };
    // Independent scan: stabilizer by direct application, freeness pointwise.
    let stab: Vec<usize> = (0..a.order())
        .filter(|&i| a.apply(i, &u.element) == u.element)
        .collect();
    let comm = commutator_part_of(&a, &stab);
    let free = stab.iter().all(|&i| {
        a.elements()[i].is_identity(a.group())
            || comm
                .elements()
                .iter()
                .all(|x| AbelianPGroup::is_zero(x) || a.apply(i, x) != *x)
    });
    let ok =
        u.commutator_order == 64 && comm.order() == 64 && stab.len() == 7 && u.centralizer_order == 7 && free && u.free;
    Ok((
        ok,
        format!(
            "u = {:?}, |[D, C_A(u)]| = {}, |C_A(u)| = {}, free: {free}",
            u.element, u.commutator_order, u.centralizer_order
        ),
    ))
}

fn check_z2_fourth(budget: Option<u64>) -> Body {
    let Some(budget) = budget else {
        return Err(Stop::Skip("needs an explicit --budget".into()));
    };
    let s = parse_scenario(&fixture("z2fourth_z3squared")?)?;
    let opts = EnumerateOptions {
        dedupe: false,
        node_budget: budget,
        congruence_budget: budget,
    };
    let sets = decomposition_enumerate_with(&s, &opts)?;
    let distinct: BTreeSet<IntMatrix> = sets.iter().map(|d| d.block_cartan()).collect();
    let one = BigInt::from(1);
    let m = GramForm::from_int(&Matrix::constant_plus_identity(3, one.clone(), one))?;
    let target = m.kronecker(&m);
    let four = BigRational::from_integer(4.into());
    let target_divisors = elementary_divisors(&target.integral_matrix().expect("integral"));
    // Outside the target's genus only "minimum below 4" is decided, by a
    // short-vector search up to norm 3.
    let three = BigRational::from_integer(3.into());
    let (mut inside, mut outside, mut outside_small) = (0, 0, 0);
    let mut inside_ok = true;
    for c in &distinct {
        let g = GramForm::from_int(c)?;
        if elementary_divisors(c) != target_divisors {
            outside += 1;
            if !short_vectors(g.entries(), &three, budget)?.is_empty() {
                outside_small += 1;
            }
            continue;
        }
        inside += 1;
        if inside_ok {
            inside_ok = minimum_with_budget(&g, budget)?.value == four
                && congruent_with_budget(&g, &target, budget)?.is_congruent();
        }
    }
    let detail = format!(
        "{} solutions, {} distinct Cartan matrices; {inside} with divisors {}: {}; {outside} with other divisors, {outside_small} of them with minimum below 4",
        sets.len(),
        distinct.len(),
        divisors(&target.integral_matrix().expect("integral")),
        if inside_ok {
            "all minimum 4 and congruent to the tensor square"
        } else {
            "not all minimum 4 and congruent"
        },
    );
    Ok((!sets.is_empty() && outside == 0 && inside_ok, detail))
}

fn divisors(c: &IntMatrix) -> String {
    let d: Vec<String> = elementary_divisors(c).iter().map(|x| x.to_string()).collect();
    format!("({})", d.join(", "))
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    int(&rows)
}

/// Random positive-definite forms `B B^T`, some halved, of dimension at most 4.
///
/// Forms whose brute-force box exceeds 200000 points are redrawn.
fn minimum_corpus(rng: &mut ChaCha8Rng, count: usize) -> Vec<GramForm> {
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=4);
        let b = random_matrix(rng, n, n, 3);
        let g = b.mul_transpose(&b).expect("square");
        if !is_positive_definite(&g.to_rational()) {
            continue;
        }
        let volume: i64 = box_bounds(&g.to_rational()).iter().map(|b| 2 * b + 1).product();
        if volume > 200_000 {
            continue;
        }
        let mut f = GramForm::from_int(&g).expect("positive definite");
        if rng.gen_bool(0.3) {
            f = f.scaled(&BigRational::new(1.into(), 2.into())).expect("positive scale");
        }
        out.push(f);
    }
    out
}

/// Every target of size 1 and 2 with entries at most 6, and a sample of size 3.
fn embed_corpus(rng: &mut ChaCha8Rng, sample: usize) -> Vec<IntMatrix> {
    let mut out: Vec<IntMatrix> = (1..=6).map(|d| int(&[vec![d]])).collect();
    for a in 1..=6 {
        for b in 1..=6 {
            for x in -6i64..=6 {
                if x * x < a * b {
                    out.push(int(&[vec![a, x], vec![x, b]]));
                }
            }
        }
    }
    let mut n3 = 0;
    while n3 < sample {
        let d: Vec<i64> = (0..3).map(|_| rng.gen_range(1..=6)).collect();
        let o: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).collect();
        let c = int(&[vec![d[0], o[0], o[1]], vec![o[0], d[1], o[2]], vec![o[1], o[2], d[2]]]);
        if is_positive_definite(&c.to_rational()) {
            out.push(c);
            n3 += 1;
        }
    }
    out
}

fn check_oracles() -> Body {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut snf_bad = 0;
    for _ in 0..500 {
        let (m, n) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_matrix(&mut rng, m, n, 9);
        if !snf_is_valid(&a, &snf(&a)) {
            snf_bad += 1;
        }
    }
    let forms = minimum_corpus(&mut rng, 300);
    let min_bad = forms
        .iter()
        .filter(|g| minimum(g).map(|m| m.value) != Ok(box_minimum(g.entries())))
        .count();
    let targets = embed_corpus(&mut rng, 60);
    let mut embed_bad = Vec::new();
    for c in &targets {
        let ours: BTreeSet<IntMatrix> = orthogonal_embeddings_with(c, &EmbedOptions::default())?
            .into_iter()
            .map(|e| e.matrix().clone())
            .collect();
        if ours != brute_embeddings(c) {
            embed_bad.push(int_matrix_to_json(c).to_string());
        }
    }
    Ok((
        snf_bad == 0 && min_bad == 0 && embed_bad.is_empty(),
        format!(
            "SNF 500 ({snf_bad} bad), minima {} ({min_bad} bad), embeddings {} ({} bad)",
            forms.len(),
            targets.len(),
            embed_bad.len()
        ),
    ))
}
