//! Independent brute-force verification: integer zero search, local
//! solubility search, and the cross-check harness that adjudicates
//! analytic verdicts against exhaustive evidence.

use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{self, Place};
use crate::classify;
use crate::quadform::{self, QuadraticForm};
use crate::{Error, Int, Result};

/// Exhaustive search for a primitive integer zero of `q` with max-norm at
/// most `height`.
///
/// Returned witnesses are canonical: first nonzero coordinate positive,
/// gcd of entries 1, minimal under (max-norm, then componentwise
/// magnitude-then-sign order: 0 < 1 < -1 < 2 < -2 < ...). Deterministic.
pub fn find_integer_zero(q: &QuadraticForm, height: u64) -> Option<Vec<Int>> {
    let a = integer_gram(q);
    let n = a.len();
    if n == 1 {
        return if a[0][0].is_zero() { Some(vec![Int::from(1)]) } else { None };
    }
    // i128 fast path when every intermediate value provably fits
    let coef_sum: Int = a.iter().flatten().map(|e| e.abs()).sum();
    let bound = &coef_sum * Int::from(height + 1).pow(2) * Int::from(16);
    if bound < Int::from(i128::MAX / 4) {
        let ai: Vec<Vec<i128>> =
            a.iter().map(|r| r.iter().map(|e| e.to_i128().unwrap()).collect()).collect();
        return search_zero(&ai, height as i128).map(|v| v.into_iter().map(Int::from).collect());
    }
    let ab: Vec<Vec<Int>> = a;
    search_zero(&ab, Int::from(height))
}

/// Gram matrix scaled to a primitive integer matrix (same zeros).
fn integer_gram(q: &QuadraticForm) -> Vec<Vec<Int>> {
    let mut lcm = Int::from(1);
    for row in q.gram() {
        for e in row {
            lcm = lcm.lcm(e.denom());
        }
    }
    let mut a: Vec<Vec<Int>> = q
        .gram()
        .iter()
        .map(|row| row.iter().map(|e| e.numer() * &lcm / e.denom()).collect())
        .collect();
    let mut content = Int::zero();
    for e in a.iter().flatten() {
        content = content.gcd(e);
    }
    if content > Int::from(1) {
        for row in a.iter_mut() {
            for e in row.iter_mut() {
                *e = &*e / &content;
            }
        }
    }
    a
}

/// Key realizing the order 0 < 1 < -1 < 2 < -2 < ...
fn magnitude_sign_key<T: Integer + Signed + Clone + From<i64>>(x: &T) -> (T, bool) {
    (x.abs(), x.is_negative())
}

fn vec_key<T: Integer + Signed + Clone + From<i64>>(v: &[T]) -> Vec<(T, bool)> {
    v.iter().map(magnitude_sign_key).collect()
}

/// Shell-ordered search over prefixes of length n-1, solving the trailing
/// coordinate from the quadratic it satisfies. Stops as soon as no deeper
/// shell can beat the best candidate found.
fn search_zero<T>(a: &[Vec<T>], height: T) -> Option<Vec<T>>
where
    T: Integer + Roots + Signed + Clone + From<i64>,
{
    let n = a.len();
    let m = n - 1;
    let mut best: Option<(T, Vec<T>)> = None; // (max-norm, witness)

    let consider = |v: Vec<T>, best: &mut Option<(T, Vec<T>)>| {
        if v.iter().all(|x| x.is_zero()) {
            return;
        }
        let mut v = v;
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in v.iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        let mut g = T::zero();
        for x in &v {
            g = g.gcd(x);
        }
        if !g.is_one() {
            return;
        }
        let norm = v.iter().map(|x| x.abs()).max().unwrap();
        let better = match best {
            None => true,
            Some((bn, bv)) => (norm.clone(), vec_key(&v)) < (bn.clone(), vec_key(bv)),
        };
        if better {
            *best = Some((norm, v));
        }
    };

    let process_prefix = |prefix: &[T], best: &mut Option<(T, Vec<T>)>| {
        // q(prefix, t) = c t^2 + l t + a0
        let c = a[m][m].clone();
        let mut l = T::zero();
        let mut a0 = T::zero();
        for i in 0..m {
            l = l + T::from(2) * a[i][m].clone() * prefix[i].clone();
            for j in 0..m {
                a0 = a0 + a[i][j].clone() * prefix[i].clone() * prefix[j].clone();
            }
        }
        let mut roots: Vec<T> = Vec::new();
        if c.is_zero() {
            if l.is_zero() {
                if a0.is_zero() {
                    // whole line of zeros through this prefix
                    let pn = prefix.iter().map(|x| x.abs()).max().unwrap_or_else(T::zero);
                    if pn.is_zero() {
                        roots.push(T::one());
                    } else {
                        let mut t = -pn.clone();
                        while t <= pn {
                            roots.push(t.clone());
                            t = t + T::one();
                        }
                    }
                }
            } else {
                let (quot, rem) = (-a0.clone()).div_rem(&l);
                if rem.is_zero() {
                    roots.push(quot);
                }
            }
        } else {
            let disc = l.clone() * l.clone() - T::from(4) * c.clone() * a0.clone();
            if !disc.is_negative() {
                let r = disc.sqrt();
                if r.clone() * r.clone() == disc {
                    for num in [-l.clone() + r.clone(), -l.clone() - r] {
                        let den = T::from(2) * c.clone();
                        let (quot, rem) = num.div_rem(&den);
                        if rem.is_zero() {
                            roots.push(quot);
                        }
                    }
                }
            }
        }
        for t in roots {
            if t.abs() > height {
                continue;
            }
            let mut v = prefix.to_vec();
            v.push(t);
            consider(v, best);
        }
    };

    // enumerate prefixes with max-norm exactly s
    fn surface<T, F>(prefix: &mut Vec<T>, m: usize, s: &T, hit: bool, f: &mut F)
    where
        T: Integer + Signed + Clone + From<i64>,
        F: FnMut(&[T]),
    {
        let i = prefix.len();
        if i == m {
            if hit {
                f(prefix);
            }
            return;
        }
        let last = i + 1 == m;
        let mut x = -s.clone();
        while x <= *s {
            let hits = x.abs() == *s;
            if !(last && !hit && !hits) {
                prefix.push(x.clone());
                surface(prefix, m, s, hit || hits, f);
                prefix.pop();
            }
            if last && !hit {
                // only +-s can complete the surface; jump across
                if x.abs() == *s && x.is_negative() {
                    x = s.clone();
                    continue;
                }
                x = if x.is_negative() { -x } else { x + T::one() };
                continue;
            }
            x = x + T::one();
        }
    }

    let mut s = T::zero();
    while s <= height {
        if let Some((bn, _)) = &best {
            if *bn <= s {
                break;
            }
        }
        if s.is_zero() {
            process_prefix(&vec![T::zero(); m], &mut best);
        } else {
            let mut prefix = Vec::with_capacity(m);
            let mut cb = |p: &[T]| process_prefix(p, &mut best);
            surface(&mut prefix, m, &s, false, &mut cb);
        }
        s = s + T::one();
    }
    best.map(|(_, v)| v)
}

/// Hard cap on the p-adic state space actually enumerated per level.
const LOCAL_STATE_BUDGET: f64 = 1e9;
/// Safety valve on explored lift nodes.
const LOCAL_NODE_BUDGET: u64 = 5_000_000;

/// Default lifting precision for [`local_solubility_search`]:
/// `2 * vp(4 * |disc|) + 3`, a lifting-safe heuristic at this artifact's
/// input sizes.
pub fn default_precision(q: &QuadraticForm, p: &Int) -> Result<u32> {
    let a = integer_gram(q);
    let qi = QuadraticForm::from_int_gram(&a)?;
    let d = quadform::discriminant(&qi)?;
    let v = arith::vp(&(Int::from(4) * d.numer().abs()), p)?;
    Ok(2 * v as u32 + 3)
}

/// Whether a primitive solution of `q = 0 mod p^k` exists, by digit-wise
/// lifting with Hensel early exits. A cross-check only, never the authority.
pub fn local_solubility_search(q: &QuadraticForm, p: &Int, k: u32) -> Result<bool> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if k == 0 {
        return Err(Error::Domain("precision k must be >= 1".into()));
    }
    let a = integer_gram(q);
    let n = a.len();
    // the lifting search enumerates p^n digit vectors per level; that,
    // not the naive (p^k)^n residue count, is the real state space
    let pf = p.to_f64().unwrap_or(f64::INFINITY);
    if pf.powi(n as i32) > LOCAL_STATE_BUDGET {
        return Err(Error::BudgetExceeded(format!("p^n = {p}^{n} exceeds 1e9")));
    }
    // exact i128 evaluation needs headroom of ~16 * p^(3k+3)
    let head = Int::from(p.clone()).pow(3 * (k + 1)) * Int::from(16);
    if head > Int::from(i128::MAX / 4) {
        return Err(Error::BudgetExceeded(format!(
            "precision {p}^{k} too large for exact evaluation"
        )));
    }
    let p = p.to_i128().expect("prime within budget fits i128");
    let ai: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|e| e.mod_floor(&Int::from(p).pow(k + 1)).to_i128().unwrap()).collect())
        .collect();

    let mut nodes = 0u64;
    let mut stack: Vec<(Vec<i128>, u32)> = Vec::new();
    // level 1: primitive residues with q = 0 mod p
    let mut v = vec![0i128; n];
    loop {
        if v.iter().any(|&x| x != 0) && eval_mod(&ai, &v, p) == 0 {
            stack.push((v.clone(), 1));
        }
        if !incr(&mut v, p) {
            break;
        }
    }

    while let Some((v, j)) = stack.pop() {
        nodes += 1;
        if nodes > LOCAL_NODE_BUDGET {
            return Err(Error::BudgetExceeded("lift tree exceeded node budget".into()));
        }
        // Hensel: vp(q(v)) > 2 vp(grad q(v)) lifts v to an exact p-adic zero
        let qv = eval_exact(&ai, &v);
        let grad_val = grad_valuation(&ai, &v, p, k + 2);
        let q_val = if qv == 0 { u32::MAX } else { val_p(qv, p) };
        if q_val > 2 * grad_val {
            return Ok(true);
        }
        if j == k {
            return Ok(true);
        }
        let pj = p.pow(j);
        let pj1 = p.pow(j + 1);
        let mut w = vec![0i128; n];
        loop {
            let child: Vec<i128> = v.iter().zip(&w).map(|(x, y)| x + pj * y).collect();
            if eval_exact(&ai, &child).rem_euclid(pj1) == 0 {
                stack.push((child, j + 1));
            }
            if !incr(&mut w, p) {
                break;
            }
        }
    }
    Ok(false)
}

fn incr(v: &mut [i128], p: i128) -> bool {
    for x in v.iter_mut() {
        *x += 1;
        if *x < p {
            return true;
        }
        *x = 0;
    }
    false
}

fn eval_exact(a: &[Vec<i128>], v: &[i128]) -> i128 {
    let n = a.len();
    let mut acc = 0i128;
    for i in 0..n {
        for j in 0..n {
            acc += a[i][j] * v[i] * v[j];
        }
    }
    acc
}

fn eval_mod(a: &[Vec<i128>], v: &[i128], p: i128) -> i128 {
    eval_exact(a, v).rem_euclid(p)
}

fn val_p(mut x: i128, p: i128) -> u32 {
    debug_assert!(x != 0);
    x = x.abs();
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn grad_valuation(a: &[Vec<i128>], v: &[i128], p: i128, cap: u32) -> u32 {
    let n = a.len();
    let mut min_v = cap;
    for i in 0..n {
        let mut g = 0i128;
        for j in 0..n {
            g += 2 * a[i][j] * v[j];
        }
        if g != 0 {
            min_v = min_v.min(val_p(g, p));
        }
    }
    min_v
}

/// Agreement record for one place in [`crosscheck`].
#[derive(Debug, Clone)]
pub struct LocalAgreement {
    pub place: Place,
    pub engine: bool,
    /// None when the search was skipped on budget.
    pub search: Option<bool>,
}

/// Three-way consistency report: lemma condition vs invariant engine vs
/// bounded zero search, plus per-prime local solubility agreement.
#[derive(Debug, Clone)]
pub struct CrossCheck {
    /// What the matched lemma condition predicts (true = anisotropic);
    /// None when no Main-Theorem case matched.
    pub lemma_predicts_anisotropic: Option<bool>,
    pub engine_anisotropic: bool,
    pub zero_witness: Option<Vec<Int>>,
    pub zero_height: u64,
    pub local_agreements: Vec<LocalAgreement>,
    pub consistent: bool,
    pub details: Vec<String>,
}

/// Cross-checks a validated K3 Gram matrix three independent ways. The
/// oracle never overrides the invariant engine; disagreement is surfaced.
pub fn crosscheck(gram: &[Vec<Int>]) -> Result<CrossCheck> {
    let q = QuadraticForm::from_int_gram(gram)?;
    let n = q.dim();
    let engine = quadform::is_isotropic_global(&q)?;
    let engine_anisotropic = !engine.is_isotropic();

    let matched = classify::match_case(gram)?;
    let lemma_predicts_anisotropic = match &matched {
        classify::CaseMatch::NoMatch => None,
        m => Some(classify::check_case_condition(m)?.holds),
    };

    let zero_height = quadform::default_witness_height(n) * 2;
    let zero_witness = find_integer_zero(&q, zero_height);

    let mut details = Vec::new();
    let mut consistent = true;
    if let Some(lemma) = lemma_predicts_anisotropic {
        if lemma != engine_anisotropic {
            consistent = false;
            details.push(format!(
                "lemma condition predicts anisotropic={lemma} but invariant engine says anisotropic={engine_anisotropic}"
            ));
        }
    }
    if engine_anisotropic {
        if let Some(w) = &zero_witness {
            consistent = false;
            details.push(format!("engine says anisotropic but zero search found witness {w:?}"));
        }
    } else if zero_witness.is_none() {
        details.push(format!("engine says isotropic; no witness up to height {zero_height} (budget, not a contradiction)"));
    }

    let mut local_agreements = Vec::new();
    for place in quadform::critical_places(&q)? {
        let Place::Prime(p) = &place else { continue };
        let engine_local = quadform::is_isotropic_local(&q, &place)?;
        let k = default_precision(&q, p)?;
        let search = match local_solubility_search(&q, p, k) {
            Ok(s) => Some(s),
            Err(Error::BudgetExceeded(_)) => None,
            Err(e) => return Err(e),
        };
        if let Some(s) = search {
            if s != engine_local {
                consistent = false;
                details.push(format!(
                    "local solubility search at p={p} found {s} but invariant engine says {engine_local}"
                ));
            }
        }
        local_agreements.push(LocalAgreement { place, engine: engine_local, search });
    }

    Ok(CrossCheck {
        lemma_predicts_anisotropic,
        engine_anisotropic,
        zero_witness,
        zero_height,
        local_agreements,
        consistent,
        details,
    })
}
