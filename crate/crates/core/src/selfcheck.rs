//! Seeded invariant suites. Each suite is deterministic in its seed and
//! reports how many exact checks ran and which failed; the CLI `selfcheck`
//! command and the acceptance tests both run them.

use std::fmt::Display;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::basefield::{BaseField, Fq, Psi, Qp};
use crate::coeff::{CoeffRing, CycField, Field, FinField};
use crate::heisenberg::{HeisenbergElement, SchrodingerModel};
use crate::linalg::{self, Mat};
use crate::metaplectic::{self as meta, count_failures, scalar_ratio, FiniteWeil};
use crate::operator::Monomial;
use crate::quadratic::QuadraticForm;
use crate::schwartz::PadicSchrodinger;
use crate::theta::{self, ThetaError};
use crate::weilfactor::WeilFactor;

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub id: u32,
    pub name: &'static str,
    pub checks: u64,
    pub failures: u64,
    /// First few failure descriptions, then informational remarks.
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.checks > 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "checks": self.checks,
            "failures": self.failures,
            "pass": self.passed(),
            "notes": self.notes,
        })
    }
}

const MAX_NOTES: usize = 8;

struct Tally {
    checks: u64,
    failures: u64,
    notes: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: 0, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    /// Records a failed check without counting it twice.
    fn fail(&mut self, msg: String) {
        self.failures += 1;
        if self.notes.len() < MAX_NOTES {
            self.notes.push(msg);
        }
    }

    fn result<E: Display>(&mut self, r: Result<bool, E>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => {
                self.checks += 1;
                let msg = format!("{}: {e}", what());
                self.fail(msg);
            }
        }
    }

    /// A batch of `n` checks of which `bad` failed.
    fn batch(&mut self, n: usize, bad: usize, what: impl FnOnce() -> String) {
        self.checks += n as u64;
        if bad > 0 {
            self.failures += bad as u64 - 1;
            let msg = format!("{} ({bad} of {n})", what());
            self.fail(msg);
        }
    }

    fn remark(&mut self, s: String) {
        self.notes.push(s);
    }

    fn finish(self, id: u32, name: &'static str) -> SuiteReport {
        SuiteReport { id, name, checks: self.checks, failures: self.failures, notes: self.notes }
    }
}

/// Suite ids and names, in run order.
pub const SUITES: [(u32, &str); 9] = [
    (1, "stone-von-neumann"),
    (2, "weil-factor-identities"),
    (3, "hasse-product-formula"),
    (4, "fourier-normalization"),
    (5, "finite-cocycle-triviality"),
    (6, "padic-cocycle"),
    (7, "m-bracket"),
    (8, "weil-representation-structure"),
    (9, "theta-desk-scale"),
];

fn rng_for(seed: u64, suite: u32, part: u64) -> ChaCha8Rng {
    let mix = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((suite as u64) << 32) ^ part;
    ChaCha8Rng::seed_from_u64(mix)
}

/// Runs one suite by id; `None` for an unknown id.
pub fn run_suite(id: u32, seed: u64) -> Option<SuiteReport> {
    let name = SUITES.iter().find(|s| s.0 == id)?.1;
    let t = match id {
        1 => stone_von_neumann(),
        2 => weil_factor_identities(seed),
        3 => hasse_product_formula(seed),
        4 => fourier_normalization(),
        5 => finite_cocycle(seed),
        6 => padic_cocycle(seed),
        7 => m_bracket(seed),
        8 => weil_structure(),
        9 => theta_desk(),
        _ => return None,
    };
    Some(t.finish(id, name))
}

pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|s| run_suite(s.0, seed)).collect()
}

fn fq(p: u64, f: u32) -> Fq {
    Fq::new(p, f).expect("valid field")
}

const FINITE_FIELDS: [(u64, u32); 4] = [(3, 1), (5, 1), (7, 1), (3, 2)];
const PADIC_PRIMES: [u64; 4] = [3, 5, 7, 13];

// ---------------------------------------------------------------- 1

fn svn_case<R: CoeffRing>(t: &mut Tally, f: &Fq, ring: R, m: usize) {
    let label = format!("q={} m={} {}", f.q(), m, ring.descriptor());
    let psi = Psi::standard(f.clone());
    let model = match SchrodingerModel::x_model(psi.clone(), ring, m) {
        Ok(x) => x,
        Err(e) => {
            t.checks += 1;
            t.fail(format!("{label}: {e}"));
            return;
        }
    };
    t.check(model.commutant_dim() == 1, || format!("{label}: commutant is not one-dimensional"));
    let n = model.dim();
    for x in 0..f.q() {
        let rho = model.rho(&HeisenbergElement::central(f, m, x));
        let ok = psi.eval(&model.ring, &x).map(|c| rho == Monomial::scalar::<R>(c, n));
        t.result(ok, || format!("{label}: centre acts by ψ({x})"));
    }
}

fn stone_von_neumann() -> Tally {
    let mut t = Tally::new();
    for &(p, d) in &FINITE_FIELDS {
        let f = fq(p, d);
        for m in 1..=2usize {
            if (f.q() as usize).pow(m as u32) > theta::MAX_MODEL {
                continue;
            }
            svn_case(&mut t, &f, CycField::new(p).expect("odd prime"), m);
            for ell in [2u64, 7] {
                if ell == p {
                    t.remark(format!("q={} m={m} ℓ={ell}: skipped, characteristic ℓ has no primitive {p}-th roots", f.q()));
                    continue;
                }
                match FinField::for_roots(ell, p, 1) {
                    Ok(r) => svn_case(&mut t, &f, r, m),
                    Err(e) => {
                        t.checks += 1;
                        t.fail(format!("F_{ell}(ζ_{p}): {e}"));
                    }
                }
            }
        }
    }
    t
}

// ---------------------------------------------------------------- 2

fn weil_fin(f: &Fq) -> WeilFactor<Fq, CycField> {
    WeilFactor::new(Psi::standard(f.clone()), CycField::new(f.p()).expect("odd prime"))
}

fn weil_padic(p: u64) -> WeilFactor<Qp, CycField> {
    WeilFactor::new(Psi::standard(Qp::new(p).expect("odd prime")), CycField::new(p).expect("odd prime"))
}

fn random_gram<F: BaseField, G: Rng>(f: &F, n: usize, rng: &mut G) -> Mat<F::Elem> {
    let mut g = linalg::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            let x = f.random(rng);
            g.set(i, j, x.clone());
            g.set(j, i, x);
        }
    }
    g
}

fn random_invertible<F: BaseField, G: Rng>(f: &F, n: usize, rng: &mut G) -> Mat<F::Elem> {
    loop {
        let m = Mat::from_fn(n, n, |_, _| f.random(rng));
        if !f.is_zero(&linalg::det(f, &m)) {
            return m;
        }
    }
}

/// Scaling, isometry transport and orthogonal-sum multiplicativity for one form.
fn form_identities<F: BaseField>(t: &mut Tally, w: &WeilFactor<F, CycField>, q: &QuadraticForm<F>, phis: &[Mat<F::Elem>], others: &[QuadraticForm<F>]) {
    let f = w.field().clone();
    let r = w.ring().clone();
    let label = || format!("{} gram {:?}", f.descriptor(), q.gram.data.iter().map(|x| f.format(x)).collect::<Vec<_>>());
    let om = match w.omega(q) {
        Ok(x) => x,
        Err(e) => {
            t.checks += 1;
            t.fail(format!("{}: {e}", label()));
            return;
        }
    };
    for (n, d) in [(2i64, 1i64), (-1, 2), (5, 3)] {
        let lam = r.from_ratio(n, d).expect("unit");
        t.result(w.omega_scaled(q, &lam).map(|x| x == r.mul(&lam, &om)), || format!("{}: scaling by {n}/{d}", label()));
    }
    if q.is_nondegenerate() {
        for phi in phis {
            let Some(phinv) = linalg::inverse(&f, phi) else { continue };
            let res = (|| -> Result<bool, Box<dyn std::error::Error>> {
                let qt = q.pullback(&phinv)?;
                let scale = r.inv(&f.modulus(&r, &linalg::det(&f, phi))?).ok_or("modulus not invertible")?;
                Ok(w.omega_scaled(&qt, &scale)? == om)
            })();
            t.result(res, || format!("{}: isometry transport", label()));
        }
    }
    for o in others {
        let res = (|| -> Result<bool, Box<dyn std::error::Error>> { Ok(w.omega(&q.direct_sum(o)?)? == r.mul(&om, &w.omega(o)?)) })();
        t.result(res, || format!("{}: orthogonal sum", label()));
    }
}

fn weil_factor_identities(seed: u64) -> Tally {
    let mut t = Tally::new();
    for (k, &(p, d)) in FINITE_FIELDS.iter().enumerate() {
        let f = fq(p, d);
        let w = weil_fin(&f);
        let elems = f.elements().expect("finite");
        let nonzero: Vec<u32> = elems.iter().copied().filter(|x| *x != 0).collect();
        let mut rng = rng_for(seed, 2, k as u64);
        for a in &nonzero {
            for b in &nonzero {
                let res = w.hilbert_via_omega(a, b).and_then(|h| Ok(h == f.hilbert(a, b)?));
                t.result(res, || format!("q={}: Hilbert identity at ({a},{b})", f.q()));
            }
        }
        let lines: Vec<QuadraticForm<Fq>> = elems.iter().map(|a| QuadraticForm::diagonal(f.clone(), &[*a]).expect("form")).collect();
        let units: Vec<Mat<u32>> = nonzero.iter().map(|a| Mat::from_rows(vec![vec![*a]])).collect();
        for q in &lines {
            form_identities(&mut t, &w, q, &units, &lines);
        }
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    let q = QuadraticForm::new(f.clone(), Mat::from_rows(vec![vec![*a, *b], vec![*b, *c]])).expect("form");
                    let phis: Vec<_> = (0..2).map(|_| random_invertible(&f, 2, &mut rng)).collect();
                    t.result(w.omega(&q).and_then(|x| Ok(x == w.omega_sum(&q)?)), || format!("q={}: Ω against the defining sum", f.q()));
                    form_identities(&mut t, &w, &q, &phis, &lines);
                }
            }
        }
    }
    for (k, &p) in PADIC_PRIMES.iter().enumerate() {
        let w = weil_padic(p);
        let f = w.field().clone();
        let mut rng = rng_for(seed, 2, 100 + k as u64);
        let oracle = |a: &BigRational, b: &BigRational| -> i8 {
            // Legendre-symbol oracle: a = p^α u, b = p^β v
            let (al, u) = f.split(a).expect("nonzero");
            let (be, v) = f.split(b).expect("nonzero");
            let leg = |x: &BigRational| crate::util::legendre(f.unit_residue(x) as i64, p);
            let mut s = if al % 2 != 0 && be % 2 != 0 && p % 4 == 3 { -1 } else { 1 };
            if be % 2 != 0 {
                s *= leg(&u);
            }
            if al % 2 != 0 {
                s *= leg(&v);
            }
            s
        };
        for _ in 0..60 {
            let a = f.random_nonzero(&mut rng);
            let b = f.random_nonzero(&mut rng);
            let res = w.hilbert_via_omega(&a, &b).map(|h| h == oracle(&a, &b));
            t.result(res, || format!("Q_{p}: Hilbert identity at ({a},{b})"));
        }
        for _ in 0..60 {
            let n = rng.gen_range(1..=3);
            let q = QuadraticForm::new(f.clone(), random_gram(&f, n, &mut rng)).expect("form");
            let phis = vec![random_invertible(&f, n, &mut rng)];
            let others = vec![QuadraticForm::new(f.clone(), random_gram(&f, 1, &mut rng)).expect("form")];
            form_identities(&mut t, &w, &q, &phis, &others);
        }
    }
    t
}

// ---------------------------------------------------------------- 3

fn hasse_product_formula(seed: u64) -> Tally {
    let mut t = Tally::new();
    for (k, &(p, d)) in FINITE_FIELDS.iter().enumerate() {
        let f = fq(p, d);
        let w = weil_fin(&f);
        let mut rng = rng_for(seed, 3, k as u64);
        let mut done = 0;
        while done < 100 {
            let n = rng.gen_range(1..=4);
            let q = QuadraticForm::new(f.clone(), random_gram(&f, n, &mut rng)).expect("form");
            if !q.is_nondegenerate() {
                continue;
            }
            done += 1;
            let res = w.omega_diag_product(&q).and_then(|x| Ok(x == w.omega_sum(&q)?));
            t.result(res, || format!("q={}: product formula for {:?}", f.q(), q.gram.data));
        }
    }
    for (k, &p) in PADIC_PRIMES.iter().enumerate() {
        let w = weil_padic(p);
        let f = w.field().clone();
        let mut rng = rng_for(seed, 3, 100 + k as u64);
        let mut done = 0;
        while done < 100 {
            let n = rng.gen_range(1..=4);
            let q = QuadraticForm::new(f.clone(), random_gram(&f, n, &mut rng)).expect("form");
            if !q.is_nondegenerate() {
                continue;
            }
            done += 1;
            let res = w.omega_diag_product(&q).and_then(|x| Ok(x == w.omega(&q)?));
            t.result(res, || format!("Q_{p}: product formula"));
        }
    }
    t
}

// ---------------------------------------------------------------- 4

fn fourier_normalization() -> Tally {
    let mut t = Tally::new();
    for &(p, d) in &FINITE_FIELDS {
        let f = fq(p, d);
        let w = weil_fin(&f);
        let r = w.ring().clone();
        for m in 1..=2usize {
            let label = format!("q={} m={m}", f.q());
            let rho = linalg::identity(&f, m);
            let (four, eps) = match w.fourier_matrix(&rho).and_then(|x| Ok((x, w.epsilon(&rho)?))) {
                Ok(x) => x,
                Err(e) => {
                    t.checks += 1;
                    t.fail(format!("{label}: {e}"));
                    continue;
                }
            };
            let n = four.rows;
            let refl = Mat::from_cols(n, &linalg::identity(&r, n).columns().iter().map(|c| w.reflect(m, c)).collect::<Vec<_>>());
            let f2 = linalg::mul(&r, &four, &four);
            t.check(f2.get(0, 0) == &eps, || format!("{label}: ε from 𝓕² differs from the closed formula"));
            t.check(f2 == linalg::scale(&r, &eps, &refl), || format!("{label}: 𝓕² ≠ ε·reflection"));
            let f4 = linalg::mul(&r, &f2, &f2);
            t.check(f4 == linalg::scale(&r, &r.mul(&eps, &eps), &linalg::identity(&r, n)), || format!("{label}: 𝓕⁴ ≠ ε²"));
            if f.q() == 3 && m == 1 {
                t.check(eps == r.from_i64(-1), || "F_3: ε ≠ −1".into());
            }
        }
    }
    t
}

// ---------------------------------------------------------------- 5

fn finite_cocycle(seed: u64) -> Tally {
    let mut t = Tally::new();
    let f = fq(3, 1);
    let psi = Psi::standard(f.clone());
    let all = meta::all_sl2(&f);
    let pairs: Vec<_> = all.iter().flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone()))).collect();
    t.check(pairs.len() == 576, || format!("Sp₂(F_3) has {} pairs", pairs.len()));
    let mut rng = rng_for(seed, 5, 0);
    let sp4: Vec<_> = (0..10_000).map(|_| (meta::random_symplectic(&f, 2, &mut rng), meta::random_symplectic(&f, 2, &mut rng))).collect();

    match FiniteWeil::new(psi.clone(), CycField::new(3).expect("prime"), 1) {
        Ok(w) => {
            let bad = count_failures(&pairs, |(a, b)| w.cocycle(a, b).map(|c| w.ring().is_one(&c)).unwrap_or(false));
            t.batch(pairs.len(), bad, || "Sp₂(F_3): ĉ ≠ 1".into());
        }
        Err(e) => {
            t.checks += 1;
            t.fail(format!("Sp₂ model: {e}"));
        }
    }
    match FiniteWeil::new(psi.clone(), CycField::new(3).expect("prime"), 2) {
        Ok(w) => {
            let bad = count_failures(&sp4, |(a, b)| w.cocycle(a, b).map(|c| w.ring().is_one(&c)).unwrap_or(false));
            t.batch(sp4.len(), bad, || "Sp₄(F_3): ĉ ≠ 1".into());
        }
        Err(e) => {
            t.checks += 1;
            t.fail(format!("Sp₄ model: {e}"));
        }
    }
    // σ stays multiplicative with coefficients in F_4 ⊃ μ_3
    let f4 = FinField::for_roots(2, 3, 1).expect("F_4");
    for m in 1..=2usize {
        match FiniteWeil::new(psi.clone(), f4.clone(), m) {
            Ok(w) => {
                let items = if m == 1 { &pairs[..] } else { &sp4[..1000] };
                let bad = count_failures(items, |(a, b)| {
                    let lhs = w.sigma(a).and_then(|x| Ok(linalg::mul(w.ring(), &x, &w.sigma(b)?)));
                    let rhs = w.sigma(&linalg::mul(&f, a, b));
                    matches!((lhs, rhs), (Ok(x), Ok(y)) if x == y)
                });
                t.batch(items.len(), bad, || format!("Sp_{}(F_3) over F_4: σ(g)σ(g') ≠ σ(gg')", 2 * m));
            }
            Err(e) => {
                t.checks += 1;
                t.fail(format!("F_4 model m={m}: {e}"));
            }
        }
    }
    t
}

// ---------------------------------------------------------------- 6

fn sign_of(x: i8) -> bool {
    x == 1 || x == -1
}

fn padic_cocycle(seed: u64) -> Tally {
    let mut t = Tally::new();
    for (k, &p) in [3u64, 5, 7].iter().enumerate() {
        let f = Qp::new(p).expect("odd prime");
        let mut rng = rng_for(seed, 6, k as u64);
        let c = |a: &Mat<BigRational>, b: &Mat<BigRational>| meta::cocycle_formula(&f, a, b);
        for (m, count) in [(1usize, 1000usize), (2, 200)] {
            let triples: Vec<_> = (0..count).map(|_| [0; 3].map(|_| meta::random_symplectic(&f, m, &mut rng))).collect();
            let bad = count_failures(&triples, |[g1, g2, g3]| {
                let g12 = linalg::mul(&f, g1, g2);
                let g23 = linalg::mul(&f, g2, g3);
                match (c(g1, g2), c(&g12, g3), c(g1, &g23), c(g2, g3)) {
                    (Ok(a), Ok(b), Ok(x), Ok(y)) => [a, b, x, y].into_iter().all(sign_of) && a * b == x * y,
                    _ => false,
                }
            });
            t.batch(count, bad, || format!("Q_{p} m={m}: 2-cocycle identity"));
        }
        // ĉ(p, g) = ĉ(g, p) = (x(p), x(g))
        for m in 1..=2usize {
            for _ in 0..30 {
                let g = meta::random_symplectic(&f, m, &mut rng);
                let q = meta::random_parabolic(&f, m, &mut rng);
                let res = meta::cocycle_parabolic(&f, &q, &g).and_then(|e| Ok(c(&q, &g)? == e && c(&g, &q)? == e));
                t.result(res, || format!("Q_{p} m={m}: ĉ(p, g) = (x(p), x(g))"));
            }
        }
        // ĉ(w_S, w_S') over all S, S' ⊆ {0, 1}
        let subsets: [&[usize]; 4] = [&[], &[0], &[1], &[0, 1]];
        for s in subsets {
            for s2 in subsets {
                let (a, b) = (meta::w_set(&f, 2, s), meta::w_set(&f, 2, s2));
                let res = meta::cocycle_w_pair(&f, s, s2).and_then(|e| Ok(c(&a, &b)? == e));
                t.result(res, || format!("Q_{p}: ĉ(w_S, w_S') for S={s:?} S'={s2:?}"));
            }
        }
        // ĉ(w_S u, w_S) = (−2, det b)·h(b)
        for _ in 0..30 {
            let l = rng.gen_range(1..=2usize);
            let b = loop {
                let b = meta::random_symmetric(&f, l, &mut rng);
                if !f.is_zero(&linalg::det(&f, &b)) {
                    break b;
                }
            };
            let mut full = linalg::zeros(&f, 2, 2);
            for i in 0..l {
                for j in 0..l {
                    full.set(i, j, b.get(i, j).clone());
                }
            }
            let ws = meta::w_set(&f, 2, &(0..l).collect::<Vec<_>>());
            let wu = linalg::mul(&f, &ws, &meta::unipotent(&f, &full));
            let res = meta::cocycle_wsu_ws(&f, &b).and_then(|e| Ok(c(&wu, &ws)? == e));
            t.result(res, || format!("Q_{p}: ĉ(w_S u, w_S) with l={l}"));
        }
        // operator path on Schwartz functions against the closed form, m = 1
        let s = match PadicSchrodinger::new(Psi::standard(f.clone()), CycField::new(p).expect("prime"), 1) {
            Ok(s) => s,
            Err(e) => {
                t.checks += 1;
                t.fail(format!("Q_{p}: Schwartz model: {e}"));
                continue;
            }
        };
        let mut minus = 0;
        for _ in 0..100 {
            let g1 = meta::random_symplectic(&f, 1, &mut rng);
            let g2 = meta::random_symplectic(&f, 1, &mut rng);
            let op = s.cocycle(&g1, &g2);
            if op == Ok(-1) {
                minus += 1;
            }
            let res = match (op, c(&g1, &g2)) {
                (Ok(a), Ok(b)) => Ok(a == b),
                (Err(e), _) => Err(e.to_string()),
                (_, Err(e)) => Err(e.to_string()),
            };
            t.result(res, || format!("Q_{p}: operator ĉ ≠ formula ĉ"));
        }
        t.remark(format!("Q_{p}: operator path gave ĉ = −1 on {minus} of 100 pairs"));
    }
    t
}

// ---------------------------------------------------------------- 7

fn m_bracket(seed: u64) -> Tally {
    let mut t = Tally::new();
    for (k, p) in [3u64, 5].into_iter().enumerate() {
        let f = fq(p, 1);
        let w = match FiniteWeil::new(Psi::standard(f.clone()), CycField::new(p).expect("prime"), 1) {
            Ok(w) => w,
            Err(e) => {
                t.checks += 1;
                t.fail(format!("F_{p}: {e}"));
                continue;
            }
        };
        let r = w.ring().clone();
        let mut rng = rng_for(seed, 7, k as u64);
        for _ in 0..50 {
            let g = meta::random_symplectic(&f, 1, &mut rng);
            let (mg, sg) = match w.m_bracket(&g).and_then(|x| Ok((x, w.sigma(&g)?))) {
                Ok(x) => x,
                Err(e) => {
                    t.checks += 1;
                    t.fail(format!("F_{p}: {e}"));
                    continue;
                }
            };
            t.check(!linalg::is_zero(&r, &mg) && w.intertwines(&g, &mg), || format!("F_{p}: M[g] does not intertwine for {:?}", g.data));
            t.check(scalar_ratio(&r, &mg, &sg).is_some(), || format!("F_{p}: M[g] not proportional to σ(g)"));
            // a commuting partner ±g^k
            let e = rng.gen_range(0..6);
            let mut h = linalg::identity(&f, 2);
            for _ in 0..e {
                h = linalg::mul(&f, &h, &g);
            }
            if rng.gen_bool(0.5) {
                h = linalg::neg(&f, &h);
            }
            let res = w.m_bracket(&h).map(|mh| linalg::mul(&r, &mg, &mh) == linalg::mul(&r, &mh, &mg));
            t.result(res, || format!("F_{p}: M[g]M[h] ≠ M[h]M[g] for commuting g, h"));
        }
    }
    t
}

// ---------------------------------------------------------------- 8

fn weil_structure() -> Tally {
    let mut t = Tally::new();
    for p in [3u64, 5, 7] {
        let f = fq(p, 1);
        let res = FiniteWeil::new(Psi::standard(f.clone()), CycField::new(p).expect("prime"), 1)
            .map_err(ThetaError::from)
            .and_then(|w| Ok((theta::WeilDecomposition::new(&w)?, w.ring().clone())));
        let (d, r) = match res {
            Ok(x) => x,
            Err(e) => {
                t.checks += 1;
                t.fail(format!("q={p}: {e}"));
                continue;
            }
        };
        let ip = |a: &[_], b: &[_]| theta::inner_product(&r, &d.group, a, b);
        let e = d.identity_index();
        t.check(d.group.order() as u64 == p * (p * p - 1), || format!("q={p}: |Sp₂| = {}", d.group.order()));
        t.check(ip(&d.chi, &d.chi) == Some(r.from_i64(2)), || format!("q={p}: ⟨χ, χ⟩ ≠ 2"));
        t.check(ip(&d.chi_even, &d.chi_even) == Some(r.one()), || format!("q={p}: χ₊ not irreducible"));
        t.check(ip(&d.chi_odd, &d.chi_odd) == Some(r.one()), || format!("q={p}: χ₋ not irreducible"));
        t.check(ip(&d.chi_even, &d.chi_odd) == Some(r.zero()), || format!("q={p}: χ₊ and χ₋ not orthogonal"));
        t.check(d.chi_even[e] == r.from_i64((p as i64 + 1) / 2), || format!("q={p}: dim χ₊ ≠ (q+1)/2"));
        t.check(d.chi_odd[e] == r.from_i64((p as i64 - 1) / 2), || format!("q={p}: dim χ₋ ≠ (q−1)/2"));
    }
    t
}

// ---------------------------------------------------------------- 9

fn theta_desk() -> Tally {
    let mut t = Tally::new();
    let f = fq(3, 1);
    let run = || -> Result<(Vec<theta::LiftRow>, theta::CongruenceReport, ThetaError), ThetaError> {
        let v = QuadraticForm::diagonal(f.clone(), &[1])?;
        let pair = theta::build_dual_pair(&v, 1)?;
        let psi = Psi::standard(f.clone());
        let w0 = FiniteWeil::new(psi.clone(), CycField::new(3)?, 1)?;
        let w7 = FiniteWeil::new(psi.clone(), FinField::for_roots(7, 3, 1)?, 1)?;
        let w2 = FiniteWeil::new(psi, FinField::for_roots(2, 3, 1)?, 1)?;
        let table = theta::lift_table(&pair, &theta::RestrictedWeil::new(&pair, &w0)?)?;
        let report = theta::congruence_check(&pair, &w0, &w7)?;
        let refused = match theta::congruence_check(&pair, &w0, &w2) {
            Err(e) => e,
            Ok(_) => ThetaError::Mismatch("ℓ = 2 was not refused".into()),
        };
        Ok((table, report, refused))
    };
    let (table, report, refused) = match run() {
        Ok(x) => x,
        Err(e) => {
            t.checks += 1;
            t.fail(format!("O₁ × Sp₂(F_3): {e}"));
            return t;
        }
    };
    let dims: Vec<(&str, usize)> = table.iter().map(|r| (r.label.as_str(), r.dim_theta)).collect();
    t.check(dims == [("trivial", 2), ("sign", 1)], || format!("Θ dimensions {dims:?}"));
    for row in &table {
        t.check(row.irreducible, || format!("Θ({}) not irreducible in characteristic 0", row.label));
        t.check(row.bookkeeping, || format!("Θ({}): isotypic bookkeeping fails", row.label));
    }
    t.check(report.group_order == 48 && report.weil_reduces, || "reduction of the Weil operators mod 7".into());
    for row in &report.rows {
        let l = &row.label;
        t.check(row.dim_char0 == row.dim_mod_ell, || format!("{l}: dimensions differ mod 7"));
        t.check(row.idempotent_h1, || format!("{l}: r_7(e_Π₁) ≠ e_π₁"));
        t.check(row.idempotent_joint, || format!("{l}: r_7(e_Π) ≠ e_π on O₁ × Sp₂"));
        t.check(row.projector, || format!("{l}: r_7(e_Π₁ ω) ≠ e_π₁ ω"));
        t.check(row.brauer, || format!("{l}: Brauer characters differ"));
        t.check(!row.irreducible_char0 || row.irreducible_mod_ell, || format!("{l}: irreducibility lost mod 7"));
    }
    t.check(refused == ThetaError::NonBanal { ell: 2, order: 48 }, || format!("ℓ = 2 gate: {refused}"));
    t
}
