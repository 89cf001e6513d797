use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use weilmod::basefield::{parse_field, AnyField, BaseField, Fq, Psi, Qp};
use weilmod::coeff::{CoeffRing, CycField, Field, FinField};
use weilmod::heisenberg::SchrodingerModel;
use weilmod::linalg::Mat;
use weilmod::metaplectic::{self as meta, FiniteWeil};
use weilmod::quadratic::{parse_form, parse_matrix};
use weilmod::schwartz::PadicSchrodinger;
use weilmod::selfcheck;
use weilmod::theta;
use weilmod::weilfactor::WeilFactor;

use crate::args::{CocyclePath, Command};
use crate::output::{Emit, Printer};
use crate::CliError;

/// Result of a command: the document to print and whether every check in
/// it passed.
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome { value, ok: true }
    }
}

/// Largest number of pairs an exhaustive cocycle run enumerates.
const MAX_PAIRS: usize = 200_000;
/// Largest number of matrix entries a dump may contain.
const MAX_DUMP_ENTRIES: usize = 5_000_000;

enum Coeff {
    Cyc(CycField),
    Fin(FinField),
}

/// `cyclo`, `cyclo:p`, `fl:ℓ` (smallest extension holding μ_p) or `fl:ℓ:d`.
fn parse_coeff(s: &str, p: u64) -> Result<Coeff, CliError> {
    let bad = || CliError::Invalid(format!("cannot parse coefficient ring {s:?}"));
    let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
    let parts: Vec<&str> = s.trim().split(':').collect();
    match parts.as_slice() {
        ["cyclo"] => Ok(Coeff::Cyc(CycField::new(p)?)),
        ["cyclo", q] if num(q)? == p => Ok(Coeff::Cyc(CycField::new(p)?)),
        ["cyclo", _] => Err(CliError::Invalid(format!("{s}: ψ takes values in p-power roots of unity with p = {p}"))),
        ["fl", l] => Ok(Coeff::Fin(FinField::for_roots(num(l)?, p, 1)?)),
        ["fl", l, d] => Ok(Coeff::Fin(FinField::new(num(l)?, num(d)? as u32, p, 1)?)),
        _ => Err(bad()),
    }
}

macro_rules! with_ring {
    ($c:expr, $r:ident => $body:expr) => {
        match $c {
            Coeff::Cyc($r) => $body,
            Coeff::Fin($r) => $body,
        }
    };
}

fn finite_field(s: &str) -> Result<Fq, CliError> {
    match parse_field(s)? {
        AnyField::Fq(f) => Ok(f),
        AnyField::Qp(_) => Err(CliError::Invalid(format!("{s}: this command needs a finite field"))),
    }
}

fn fmt_matrix<F: BaseField>(f: &F, m: &Mat<F::Elem>) -> Value {
    Value::Array((0..m.rows).map(|i| Value::Array((0..m.cols).map(|j| Value::String(f.format(m.get(i, j)))).collect())).collect())
}

fn symplectic<F: BaseField>(f: &F, s: &str, m: usize) -> Result<Mat<F::Elem>, CliError> {
    let g = parse_matrix(f, s)?;
    if g.rows != 2 * m || g.cols != 2 * m {
        return Err(CliError::Invalid(format!("expected a {0}×{0} matrix, got {1}×{2}", 2 * m, g.rows, g.cols)));
    }
    if !meta::is_symplectic(f, &g) {
        return Err(CliError::Invalid("matrix is not symplectic".into()));
    }
    Ok(g)
}

pub fn execute(cmd: &Command, pr: Printer) -> Result<Outcome, CliError> {
    match cmd {
        Command::Omega { field, form, psi, coeff } => omega(field, form, psi, coeff, pr),
        Command::Hilbert { field, a, b } => hilbert(field, a, b),
        Command::Hasse { field, form } => hasse(field, form),
        Command::Cocycle { field, m, g1, g2, path, exhaustive, random, seed, psi, coeff } => {
            let job = CocycleJob { m: *m, g1: g1.as_deref(), g2: g2.as_deref(), path: *path, exhaustive: *exhaustive, random: *random, seed: *seed, psi, coeff };
            match parse_field(field)? {
                AnyField::Fq(f) => cocycle_fq(&f, &job, pr),
                AnyField::Qp(f) => cocycle_qp(&f, &job),
            }
        }
        Command::Bruhat { field, g } => match parse_field(field)? {
            AnyField::Fq(f) => bruhat(&f, g),
            AnyField::Qp(f) => bruhat(&f, g),
        },
        Command::Heisenberg { field, m, psi, coeff, emit } => heisenberg(field, *m, psi, coeff, emit.as_deref(), pr),
        Command::Weilrep { field, m, g, all, psi, coeff, emit } => weilrep(field, *m, g.as_deref(), *all, psi, coeff, emit.as_deref(), pr),
        Command::Theta { field, v, mprime, psi, coeff, congruence } => theta_cmd(field, v, *mprime, psi, coeff, *congruence),
        Command::Selfcheck { seed, suite } => selfcheck_cmd(*seed, *suite),
        Command::Run { .. } => Err(CliError::Invalid("`run` cannot be nested".into())),
    }
}

// ---------------------------------------------------------------- scalars

fn omega(field: &str, form: &str, psi: &str, coeff: &str, pr: Printer) -> Result<Outcome, CliError> {
    fn go<F: BaseField, R: Emit>(f: F, r: R, form: &str, psi: &str, pr: Printer) -> Result<Outcome, CliError> {
        let q = parse_form(&f, form)?;
        let w = WeilFactor::new(Psi::parse(f.clone(), psi)?, r.clone());
        let v = pr.scalar(&r, &w.omega(&q)?);
        let ring = v["ring"].clone();
        Ok(Outcome::ok(json!({ "field": f.descriptor(), "psi": w.psi().descriptor(), "gram": fmt_matrix(&f, &q.gram), "value": v, "ring": ring })))
    }
    match parse_field(field)? {
        AnyField::Fq(f) => with_ring!(parse_coeff(coeff, f.p())?, r => go(f, r, form, psi, pr)),
        AnyField::Qp(f) => with_ring!(parse_coeff(coeff, f.p())?, r => go(f, r, form, psi, pr)),
    }
}

fn hilbert(field: &str, a: &str, b: &str) -> Result<Outcome, CliError> {
    fn go<F: BaseField>(f: F, a: &str, b: &str) -> Result<Outcome, CliError> {
        let v = f.hilbert(&f.parse(a)?, &f.parse(b)?)?;
        Ok(Outcome::ok(json!({ "value": v })))
    }
    match parse_field(field)? {
        AnyField::Fq(f) => go(f, a, b),
        AnyField::Qp(f) => go(f, a, b),
    }
}

fn hasse(field: &str, form: &str) -> Result<Outcome, CliError> {
    fn go<F: BaseField>(f: F, form: &str) -> Result<Outcome, CliError> {
        let q = parse_form(&f, form)?;
        Ok(Outcome::ok(json!({
            "value": q.hasse(),
            "det_class": q.det_class().label(),
            "dim": q.dim(),
            "rank": q.rank(),
        })))
    }
    match parse_field(field)? {
        AnyField::Fq(f) => go(f, form),
        AnyField::Qp(f) => go(f, form),
    }
}

fn bruhat<F: BaseField>(f: &F, g: &str) -> Result<Outcome, CliError> {
    let m = parse_matrix(f, g)?.rows / 2;
    let g = symplectic(f, g, m)?;
    let d = meta::bruhat_decompose(f, &g)?;
    meta::check_bruhat(f, &g, &d)?;
    let x = meta::x_det(f, &d);
    Ok(Outcome::ok(json!({
        "j": d.j,
        "p1": fmt_matrix(f, &d.p1),
        "p2": fmt_matrix(f, &d.p2),
        "x": f.format(&x),
        "x_class": f.square_class(&x)?.label(),
    })))
}

// ---------------------------------------------------------------- cocycle

struct CocycleJob<'a> {
    m: usize,
    g1: Option<&'a str>,
    g2: Option<&'a str>,
    path: CocyclePath,
    exhaustive: bool,
    random: Option<usize>,
    seed: u64,
    psi: &'a str,
    coeff: &'a str,
}

type Pairs<E> = Vec<(Mat<E>, Mat<E>)>;

fn job_pairs<F: BaseField>(f: &F, job: &CocycleJob) -> Result<Option<Pairs<F::Elem>>, CliError> {
    let modes = job.exhaustive as usize + job.random.is_some() as usize + (job.g1.is_some() || job.g2.is_some()) as usize;
    if modes != 1 {
        return Err(CliError::Invalid("give exactly one of --g1/--g2, --exhaustive, --random".into()));
    }
    if job.exhaustive {
        if !f.is_finite() {
            return Err(CliError::Invalid("exhaustive enumeration needs a finite field".into()));
        }
        if job.m != 1 {
            return Err(CliError::Invalid("exhaustive enumeration is limited to m = 1".into()));
        }
        let all = meta::all_sl2(f);
        if all.len() * all.len() > MAX_PAIRS {
            return Err(CliError::Invalid(format!("{} pairs exceed the cap of {MAX_PAIRS}", all.len() * all.len())));
        }
        return Ok(Some(all.iter().flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone()))).collect()));
    }
    if let Some(n) = job.random {
        if n > MAX_PAIRS {
            return Err(CliError::Invalid(format!("{n} pairs exceed the cap of {MAX_PAIRS}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
        return Ok(Some((0..n).map(|_| (meta::random_symplectic(f, job.m, &mut rng), meta::random_symplectic(f, job.m, &mut rng))).collect()));
    }
    Ok(None)
}

fn single_pair<F: BaseField>(f: &F, job: &CocycleJob) -> Result<(Mat<F::Elem>, Mat<F::Elem>), CliError> {
    match (job.g1, job.g2) {
        (Some(a), Some(b)) => Ok((symplectic(f, a, job.m)?, symplectic(f, b, job.m)?)),
        _ => Err(CliError::Invalid("both --g1 and --g2 are required".into())),
    }
}

fn formula_json<F: BaseField>(f: &F, g1: &Mat<F::Elem>, g2: &Mat<F::Elem>) -> Result<Value, CliError> {
    let c = meta::cocycle_formula_full(f, g1, g2)?;
    let l = &c.leray;
    Ok(json!({
        "value": c.value,
        "leray": { "S": l.s, "T1": l.t1, "T2": l.t2, "l": l.l(), "b": fmt_matrix(f, &l.b) },
        "x_g1": f.format(&c.x_g1),
        "x_g2": f.format(&c.x_g2),
        "x_g12": f.format(&c.x_g12),
    }))
}

fn sign_value<R: CoeffRing>(r: &R, x: &R::Elem) -> Option<i8> {
    if r.is_one(x) {
        Some(1)
    } else if r.is_one(&r.neg(x)) {
        Some(-1)
    } else {
        None
    }
}

fn cocycle_fq(f: &Fq, job: &CocycleJob, pr: Printer) -> Result<Outcome, CliError> {
    let pairs = job_pairs(f, job)?;
    match job.path {
        CocyclePath::Formula => match pairs {
            None => {
                let (g1, g2) = single_pair(f, job)?;
                let v = formula_json(f, &g1, &g2)?;
                let ok = v["value"] == json!(1);
                Ok(Outcome { value: v, ok })
            }
            Some(pairs) => {
                let vals = pairs.par_iter().map(|(a, b)| meta::cocycle_formula(f, a, b)).collect::<Result<Vec<_>, _>>()?;
                let trivial = vals.iter().all(|&v| v == 1);
                Ok(Outcome { value: json!({ "trivial": trivial, "pairs": vals.len() }), ok: trivial })
            }
        },
        CocyclePath::Operator => with_ring!(parse_coeff(job.coeff, f.p())?, r => {
            let w = FiniteWeil::new(Psi::parse(f.clone(), job.psi)?, r, job.m)?;
            match pairs {
                None => {
                    let (g1, g2) = single_pair(f, job)?;
                    let c = w.cocycle(&g1, &g2)?;
                    let v = match sign_value(w.ring(), &c) {
                        Some(s) => json!(s),
                        None => pr.scalar(w.ring(), &c),
                    };
                    let ok = v == json!(1);
                    Ok(Outcome { value: json!({ "value": v }), ok })
                }
                Some(pairs) => {
                    let vals = pairs.par_iter().map(|(a, b)| w.cocycle(a, b).map(|c| w.ring().is_one(&c))).collect::<Result<Vec<_>, _>>()?;
                    let trivial = vals.iter().all(|&v| v);
                    Ok(Outcome { value: json!({ "trivial": trivial, "pairs": vals.len() }), ok: trivial })
                }
            }
        }),
    }
}

fn cocycle_qp(f: &Qp, job: &CocycleJob) -> Result<Outcome, CliError> {
    let pairs = job_pairs(f, job)?;
    let op = |pairs: &Pairs<_>| -> Result<Vec<i8>, CliError> {
        let s = with_ring!(parse_coeff(job.coeff, f.p())?, r => {
            let s = PadicSchrodinger::new(Psi::parse(f.clone(), job.psi)?, r, job.m)?;
            pairs.iter().map(|(a, b)| s.cocycle(a, b)).collect::<Result<Vec<_>, _>>()?
        });
        Ok(s)
    };
    match pairs {
        None => {
            let (g1, g2) = single_pair(f, job)?;
            let mut v = formula_json(f, &g1, &g2)?;
            if job.path == CocyclePath::Operator {
                let o = op(&vec![(g1, g2)])?[0];
                let agree = v["value"] == json!(o);
                v["value"] = json!(o);
                v["agrees_with_formula"] = json!(agree);
                return Ok(Outcome { value: v, ok: agree });
            }
            Ok(Outcome::ok(v))
        }
        Some(pairs) => {
            let formula = pairs.par_iter().map(|(a, b)| meta::cocycle_formula(f, a, b)).collect::<Result<Vec<_>, _>>()?;
            let minus = formula.iter().filter(|&&v| v == -1).count();
            let mut out = json!({ "pairs": pairs.len(), "plus": pairs.len() - minus, "minus": minus });
            let mut ok = formula.iter().all(|&v| v == 1 || v == -1);
            if job.path == CocyclePath::Operator {
                let agree = op(&pairs)? == formula;
                out["agrees_with_formula"] = json!(agree);
                ok &= agree;
            }
            Ok(Outcome { value: out, ok })
        }
    }
}

// ---------------------------------------------------------------- operator dumps

fn write_emit(path: Option<&std::path::Path>, doc: Value) -> Result<Value, CliError> {
    match path {
        None => Ok(doc),
        Some(p) => {
            let bytes = serde_json::to_vec(&doc).map_err(|e| CliError::Io(e.to_string()))?;
            std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let mut summary = doc;
            if let Some(o) = summary.as_object_mut() {
                let count = o.get("operators").and_then(Value::as_array).map_or(0, Vec::len);
                o.remove("operators");
                o.insert("count".into(), json!(count));
                o.insert("emitted".into(), json!(p.display().to_string()));
            }
            Ok(summary)
        }
    }
}

fn heisenberg(field: &str, m: usize, psi: &str, coeff: &str, emit: Option<&std::path::Path>, pr: Printer) -> Result<Outcome, CliError> {
    let f = finite_field(field)?;
    with_ring!(parse_coeff(coeff, f.p())?, r => {
        let model = SchrodingerModel::x_model(Psi::parse(f.clone(), psi)?, r.clone(), m)?;
        let elems = model.all_elements();
        let n = model.dim();
        if elems.len() * n * n > MAX_DUMP_ENTRIES {
            return Err(CliError::Invalid(format!("{} operators of size {n} exceed the dump cap", elems.len())));
        }
        let ops: Vec<Value> = elems
            .iter()
            .map(|h| {
                let w: Vec<String> = h.w.iter().map(|x| f.format(x)).collect();
                json!({ "w": w, "t": f.format(&h.t), "matrix": pr.matrix(&r, &model.rho(h).to_dense(&r)) })
            })
            .collect();
        let doc = json!({ "field": f.descriptor(), "m": m, "coeff": r.descriptor(), "dim": n, "operators": ops });
        Ok(Outcome::ok(write_emit(emit, doc)?))
    })
}

#[allow(clippy::too_many_arguments)]
fn weilrep(field: &str, m: usize, g: Option<&str>, all: bool, psi: &str, coeff: &str, emit: Option<&std::path::Path>, pr: Printer) -> Result<Outcome, CliError> {
    let f = finite_field(field)?;
    let elems = match (g, all) {
        (Some(s), false) => vec![symplectic(&f, s, m)?],
        (None, true) if m == 1 => meta::all_sl2(&f),
        (None, true) => return Err(CliError::Invalid("--all enumerates Sp₂ only (m = 1)".into())),
        _ => return Err(CliError::Invalid("give exactly one of --g, --all".into())),
    };
    with_ring!(parse_coeff(coeff, f.p())?, r => {
        let w = FiniteWeil::new(Psi::parse(f.clone(), psi)?, r.clone(), m)?;
        let n = w.dim();
        if elems.len() * n * n > MAX_DUMP_ENTRIES {
            return Err(CliError::Invalid(format!("{} operators of size {n} exceed the dump cap", elems.len())));
        }
        let mut ok = true;
        let mut ops = Vec::with_capacity(elems.len());
        for g in &elems {
            let s = w.sigma(g)?;
            let inter = w.intertwines(g, &s);
            ok &= inter;
            ops.push(json!({ "g": fmt_matrix(&f, g), "sigma": pr.matrix(&r, &s), "intertwines": inter }));
        }
        let doc = json!({ "field": f.descriptor(), "m": m, "coeff": r.descriptor(), "dim": n, "operators": ops });
        Ok(Outcome { value: write_emit(emit, doc)?, ok })
    })
}

// ---------------------------------------------------------------- theta

fn theta_cmd(field: &str, v: &str, mprime: usize, psi: &str, coeff: &str, congruence: Option<u64>) -> Result<Outcome, CliError> {
    let f = finite_field(field)?;
    let form = parse_form(&f, v)?;
    let pair = theta::build_dual_pair(&form, mprime)?;
    let psi = Psi::parse(f.clone(), psi)?;
    let (descriptor, table) = with_ring!(parse_coeff(coeff, f.p())?, r => {
        let w = FiniteWeil::new(psi.clone(), r.clone(), pair.m())?;
        (r.descriptor(), theta::lift_table(&pair, &theta::RestrictedWeil::new(&pair, &w)?)?)
    });
    let mut ok = table.iter().all(|row| row.bookkeeping);
    let mut rows: Vec<Value> = table
        .iter()
        .map(|row| {
            json!({
                "pi1": row.label,
                "dim_pi": row.dim_pi,
                "dim_theta": row.dim_theta,
                "irreducible": row.irreducible,
                "bookkeeping": row.bookkeeping,
            })
        })
        .collect();
    let mut doc = json!({ "field": f.descriptor(), "V": fmt_matrix(&f, &form.gram), "mprime": mprime, "coeff": descriptor, "group_order": pair.h1.len() * pair.h2.len() });
    if let Some(ell) = congruence {
        let w0 = FiniteWeil::new(psi.clone(), CycField::new(f.p())?, pair.m())?;
        let wl = FiniteWeil::new(psi, FinField::for_roots(ell, f.p(), 1)?, pair.m())?;
        let report = theta::congruence_check(&pair, &w0, &wl)?;
        ok &= report.all_pass();
        doc["ell"] = json!(ell);
        doc["weil_reduces"] = json!(report.weil_reduces);
        for (row, c) in rows.iter_mut().zip(&report.rows) {
            let o = row.as_object_mut().expect("object");
            o.insert("dim_mod_ell".into(), json!(c.dim_mod_ell));
            o.insert("irreducible_mod_ell".into(), json!(c.irreducible_mod_ell));
            o.insert("idempotent_h1".into(), json!(c.idempotent_h1));
            o.insert("idempotent_joint".into(), json!(c.idempotent_joint));
            o.insert("projector".into(), json!(c.projector));
            o.insert("brauer".into(), json!(c.brauer));
        }
    }
    doc["rows"] = Value::Array(rows);
    Ok(Outcome { value: doc, ok })
}

// ---------------------------------------------------------------- selfcheck

fn selfcheck_cmd(seed: u64, suite: Option<u32>) -> Result<Outcome, CliError> {
    let reports = match suite {
        Some(id) => vec![selfcheck::run_suite(id, seed).ok_or_else(|| CliError::Invalid(format!("unknown suite {id}")))?],
        None => selfcheck::run_all(seed),
    };
    let pass = reports.iter().all(|r| r.passed());
    let rows: Vec<Value> = reports.iter().map(|r| r.to_json()).collect();
    Ok(Outcome { value: json!({ "seed": seed, "pass": pass, "rows": rows }), ok: pass })
}
