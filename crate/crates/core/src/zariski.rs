//! Effective-cone model over a finite set of curve generators: exact
//! Zariski decomposition via Fujita iteration, denominators, and the
//! structural divisibility/orthogonality conditions.
//!
//! Modeling assumption, reported in every verdict: pseudoeffective =
//! nonnegative span of the supplied generators, nef = nonnegative
//! intersection against them. This is faithful when the basis lists all
//! extremal negative curves; the abstract lattice alone cannot certify
//! that.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Int, Rat, Result};

/// A surface's curve lattice: labeled generators and their intersection
/// matrix.
#[derive(Debug, Clone)]
pub struct SurfaceLattice {
    labels: Vec<String>,
    gram: Vec<Vec<Int>>,
}

impl SurfaceLattice {
    /// Construction checks shape and symmetry only. The Hodge-index
    /// signature (1, rho-1) is a property of genuine surface lattices and
    /// is checked by the classifier, not here: several structural
    /// operations (negative definiteness, the divisibility conditions)
    /// are meaningful on arbitrary symmetric lattices.
    pub fn new(labels: Vec<String>, gram: Vec<Vec<Int>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::Domain("empty lattice".into()));
        }
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Domain("gram matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Domain("gram matrix must be symmetric".into()));
                }
            }
        }
        if labels.len() != n {
            return Err(Error::Domain("label count must match rank".into()));
        }
        Ok(SurfaceLattice { labels, gram })
    }

    /// Default labels C1, C2, ...
    pub fn from_gram(gram: Vec<Vec<Int>>) -> Result<Self> {
        let labels = (1..=gram.len()).map(|i| format!("C{i}")).collect();
        Self::new(labels, gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &[Vec<Int>] {
        &self.gram
    }

    /// D . C_i for a rational coefficient vector.
    pub fn pair_with_curve(&self, d: &[Rat], i: usize) -> Rat {
        let mut acc = Rat::zero();
        for (j, c) in d.iter().enumerate() {
            acc += c * Rat::from_integer(self.gram[i][j].clone());
        }
        acc
    }
}

/// Integral divisor class in the curve basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub coeffs: Vec<Int>,
}

impl Divisor {
    pub fn new(coeffs: Vec<Int>) -> Self {
        Divisor { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Divisor { coeffs: coeffs.iter().map(|&c| Int::from(c)).collect() }
    }
}

/// Exact decomposition D = P + N with P nef against the generators, N an
/// effective rational combination supported on a negative definite set,
/// and P orthogonal to the support.
#[derive(Debug, Clone)]
pub struct ZariskiDecomposition {
    pub p: Vec<Rat>,
    pub n: Vec<Rat>,
    pub support: Vec<usize>,
    /// lcm of all denominators appearing in P and N; 1 means integral.
    pub denominator: Int,
}

/// Whether the sub-Gram on `subset` is negative definite, by the
/// alternating-sign test on leading principal minors. The empty subset is
/// negative definite by convention.
pub fn is_negative_definite(lattice: &SurfaceLattice, subset: &[usize]) -> bool {
    let k = subset.len();
    for lead in 1..=k {
        let minor = sub_det(lattice, &subset[..lead]);
        let expected_positive = lead % 2 == 0;
        if (minor.is_positive()) != expected_positive || minor.is_zero() {
            return false;
        }
    }
    true
}

fn sub_det(lattice: &SurfaceLattice, idx: &[usize]) -> Rat {
    let k = idx.len();
    let mut m: Vec<Vec<Rat>> = (0..k)
        .map(|r| (0..k).map(|c| Rat::from_integer(lattice.gram[idx[r]][idx[c]].clone())).collect())
        .collect();
    let mut det = Rat::one();
    for col in 0..k {
        let pivot = (col..k).max_by_key(|&r| m[r][col].abs());
        let pivot = match pivot {
            Some(r) if !m[r][col].is_zero() => r,
            _ => return Rat::zero(),
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col].clone();
        for r in col + 1..k {
            let f = &m[r][col] / &m[col][col];
            for c in col..k {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
        }
    }
    det
}

/// Whether D meets every generator nonnegatively.
pub fn is_nef(lattice: &SurfaceLattice, d: &[Rat]) -> bool {
    (0..lattice.rank()).all(|i| !lattice.pair_with_curve(d, i).is_negative())
}

/// Zariski decomposition of an effective integral combination of the
/// generators, by Fujita iteration: start from the curves D meets
/// negatively, solve the orthogonality system on that support exactly,
/// and grow the support until P is nef.
pub fn zariski_decompose(lattice: &SurfaceLattice, d: &Divisor) -> Result<ZariskiDecomposition> {
    if d.coeffs.len() != lattice.rank() {
        return Err(Error::Domain("divisor length must match lattice rank".into()));
    }
    if d.coeffs.iter().any(|c| c.is_negative()) {
        return Err(Error::NotEffective);
    }
    let dr: Vec<Rat> = d.coeffs.iter().map(|c| Rat::from_integer(c.clone())).collect();
    decompose_rational(lattice, &dr)
}

/// Rational-coefficient core of the Fujita iteration. Public so that
/// idempotence on an already-nef rational P is directly checkable.
pub fn decompose_rational(lattice: &SurfaceLattice, d: &[Rat]) -> Result<ZariskiDecomposition> {
    let rho = lattice.rank();
    let mut support: Vec<usize> =
        (0..rho).filter(|&i| lattice.pair_with_curve(d, i).is_negative()).collect();

    for _round in 0..=rho {
        if !is_negative_definite(lattice, &support) {
            return Err(Error::InternalInconsistency(format!(
                "support {support:?} is not negative definite; the generator set does not model an effective cone"
            )));
        }
        // solve sum_j a_j (C_j . C_i) = D . C_i over the support
        let k = support.len();
        let mut m: Vec<Vec<Rat>> = (0..k)
            .map(|r| {
                (0..k)
                    .map(|c| Rat::from_integer(lattice.gram[support[r]][support[c]].clone()))
                    .collect()
            })
            .collect();
        let mut rhs: Vec<Rat> = support.iter().map(|&i| lattice.pair_with_curve(d, i)).collect();
        let a = solve_exact(&mut m, &mut rhs)?;
        if a.iter().any(|x| x.is_negative()) {
            return Err(Error::InternalInconsistency(
                "negative multiplicity in the negative part".into(),
            ));
        }
        let mut n = vec![Rat::zero(); rho];
        for (t, &j) in support.iter().enumerate() {
            n[j] = a[t].clone();
        }
        let p: Vec<Rat> = d.iter().zip(&n).map(|(di, ni)| di - ni).collect();

        let grown: Vec<usize> = (0..rho)
            .filter(|&i| !support.contains(&i) && lattice.pair_with_curve(&p, i).is_negative())
            .collect();
        if grown.is_empty() {
            let mut denominator = Int::one();
            for x in p.iter().chain(&n) {
                denominator = denominator.lcm(x.denom());
            }
            return Ok(ZariskiDecomposition { p, n, support, denominator });
        }
        support.extend(grown);
        support.sort_unstable();
    }
    Err(Error::InternalInconsistency("Fujita iteration failed to stabilize".into()))
}

/// Gaussian elimination over exact rationals with largest-pivot selection.
fn solve_exact(m: &mut [Vec<Rat>], rhs: &mut [Rat]) -> Result<Vec<Rat>> {
    let k = m.len();
    for col in 0..k {
        let pivot = (col..k)
            .filter(|&r| !m[r][col].is_zero())
            .max_by_key(|&r| m[r][col].abs())
            .ok_or_else(|| Error::InternalInconsistency("singular support system".into()))?;
        m.swap(pivot, col);
        rhs.swap(pivot, col);
        for r in col + 1..k {
            let f = &m[r][col] / &m[col][col];
            for c in col..k {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
            let t = &f * &rhs[col];
            rhs[r] -= t;
        }
    }
    let mut x = vec![Rat::zero(); k];
    for r in (0..k).rev() {
        let mut acc = rhs[r].clone();
        for c in r + 1..k {
            acc -= &m[r][c] * &x[c];
        }
        x[r] = acc / &m[r][r];
    }
    Ok(x)
}

/// The denominator of the Zariski decomposition of D.
pub fn zariski_denominator(lattice: &SurfaceLattice, d: &Divisor) -> Result<Int> {
    Ok(zariski_decompose(lattice, d)?.denominator)
}

/// Report of the structural integrality conditions on the generator set:
/// (a) C^2 divides C . D for every negative generator C and generator D;
/// (b) generators spanning a negative definite pair are orthogonal.
#[derive(Debug, Clone)]
pub struct NumThmReport {
    pub cond_a: bool,
    pub cond_b: bool,
    pub violations: Vec<String>,
}

impl NumThmReport {
    pub fn pass(&self) -> bool {
        self.cond_a && self.cond_b
    }
}

/// Checks conditions (a) and (b) over the modeled generators only; whether
/// generator-level checks suffice depends on which negative classes are
/// actually curves on the surface.
pub fn check_numthm(lattice: &SurfaceLattice) -> NumThmReport {
    let rho = lattice.rank();
    let mut violations = Vec::new();
    let mut cond_a = true;
    let mut cond_b = true;
    for i in 0..rho {
        if !lattice.gram[i][i].is_negative() {
            continue;
        }
        for j in 0..rho {
            if !lattice.gram[i][j].is_multiple_of(&lattice.gram[i][i]) {
                cond_a = false;
                violations.push(format!(
                    "(a): {}^2 = {} does not divide {}.{} = {}",
                    lattice.labels[i],
                    lattice.gram[i][i],
                    lattice.labels[i],
                    lattice.labels[j],
                    lattice.gram[i][j]
                ));
            }
        }
    }
    for i in 0..rho {
        for j in i + 1..rho {
            if is_negative_definite(lattice, &[i, j]) && !lattice.gram[i][j].is_zero() {
                cond_b = false;
                violations.push(format!(
                    "(b): negative definite pair ({}, {}) has {}.{} = {} != 0",
                    lattice.labels[i],
                    lattice.labels[j],
                    lattice.labels[i],
                    lattice.labels[j],
                    lattice.gram[i][j]
                ));
            }
        }
    }
    NumThmReport { cond_a, cond_b, violations }
}

/// Maximum Zariski denominator over all effective D with coefficients in
/// [0, h] — an exhaustive (h+1)^rho sweep, so an empirical lower bound
/// for the surface's denominator supremum.
pub fn max_denominator_bounded(lattice: &SurfaceLattice, h: u64) -> Result<Int> {
    let rho = lattice.rank();
    let mut max = Int::one();
    let mut coeffs = vec![0u64; rho];
    loop {
        let d = Divisor::new(coeffs.iter().map(|&c| Int::from(c)).collect());
        let den = zariski_denominator(lattice, &d)?;
        if den > max {
            max = den;
        }
        // odometer
        let mut done = true;
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c <= h {
                done = false;
                break;
            }
            *c = 0;
        }
        if done {
            return Ok(max);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_int};

    fn lat(rows: &[&[i64]]) -> SurfaceLattice {
        SurfaceLattice::from_gram(
            rows.iter().map(|r| r.iter().map(|&e| Int::from(e)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn negative_definiteness() {
        let l = lat(&[&[-2, 4], &[4, -2]]);
        assert!(!is_negative_definite(&l, &[0, 1]));
        assert!(is_negative_definite(&l, &[0]));
        assert!(is_negative_definite(&l, &[]));
        let l = lat(&[&[-2, 0], &[0, -2]]);
        assert!(is_negative_definite(&l, &[0, 1]));
    }

    #[test]
    fn nef_test() {
        let l = lat(&[&[-2, 4], &[4, -2]]);
        assert!(is_nef(&l, &[rat_int(2), rat_int(1)]));
        assert!(is_nef(&l, &[rat_int(0), rat_int(0)]));
        assert!(!is_nef(&l, &[rat_int(1), rat_int(0)]));
    }

    #[test]
    fn decompose_mixed_lattice() {
        // basis H (H^2 = 2), C (C^2 = -2), H.C = 1
        let l = lat(&[&[2, 1], &[1, -2]]);
        let z = zariski_decompose(&l, &Divisor::from_i64(&[1, 1])).unwrap();
        assert_eq!(z.n, vec![rat_int(0), rat(1, 2)]);
        assert_eq!(z.p, vec![rat_int(1), rat(1, 2)]);
        assert_eq!(z.support, vec![1]);
        assert_eq!(z.denominator, Int::from(2));
    }

    #[test]
    fn decompose_two_curve_lattice() {
        let l = lat(&[&[-2, 4], &[4, -2]]);
        let z = zariski_decompose(&l, &Divisor::from_i64(&[3, 1])).unwrap();
        assert_eq!(z.n, vec![rat_int(1), rat_int(0)]);
        assert_eq!(z.p, vec![rat_int(2), rat_int(1)]);
        assert_eq!(z.denominator, Int::from(1));
    }

    #[test]
    fn nef_divisor_is_its_own_positive_part() {
        let l = lat(&[&[-2, 4], &[4, -2]]);
        let z = zariski_decompose(&l, &Divisor::from_i64(&[2, 1])).unwrap();
        assert!(z.n.iter().all(|x| x.is_zero()));
        assert_eq!(z.denominator, Int::from(1));
        // idempotence on the rational positive part
        let z2 = decompose_rational(&l, &z.p).unwrap();
        assert!(z2.n.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn rejects_non_effective() {
        let l = lat(&[&[-2, 4], &[4, -2]]);
        let err = zariski_decompose(&l, &Divisor::from_i64(&[1, -1]));
        assert!(matches!(err, Err(Error::NotEffective)));
    }

    #[test]
    fn numthm_fixtures() {
        let r = check_numthm(&lat(&[&[-2, 4], &[4, -2]]));
        assert!(r.cond_a && r.cond_b, "{:?}", r.violations);

        let r = check_numthm(&lat(&[&[2, 1], &[1, -2]]));
        assert!(!r.cond_a);

        let r = check_numthm(&lat(&[&[-2, 0], &[0, -2]]));
        assert!(r.cond_a && r.cond_b);
    }

    #[test]
    fn bounded_denominators() {
        assert_eq!(max_denominator_bounded(&lat(&[&[-2, 4], &[4, -2]]), 5).unwrap(), Int::from(1));
        assert_eq!(max_denominator_bounded(&lat(&[&[2, 1], &[1, -2]]), 2).unwrap(), Int::from(2));
        assert_eq!(max_denominator_bounded(&lat(&[&[2, 1], &[1, -2]]), 0).unwrap(), Int::from(1));
    }

    #[test]
    fn decomposition_postconditions_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let lattices = [
            lat(&[&[2, 1], &[1, -2]]),
            lat(&[&[-2, 4], &[4, -2]]),
            lat(&[&[-2, 0, 4], &[0, -2, 4], &[4, 4, -2]]),
            lat(&[&[-2, 4, 4], &[4, -2, 4], &[4, 4, -2]]),
        ];
        for _ in 0..100 {
            let l = &lattices[rng.gen_range(0..lattices.len())];
            let coeffs: Vec<i64> = (0..l.rank()).map(|_| rng.gen_range(0..8)).collect();
            let d = Divisor::from_i64(&coeffs);
            let z = zariski_decompose(l, &d).unwrap();
            for i in 0..l.rank() {
                let pc = l.pair_with_curve(&z.p, i);
                assert!(!pc.is_negative());
                assert!(!z.n[i].is_negative());
                let sum = &z.p[i] + &z.n[i];
                assert_eq!(sum, Rat::from_integer(d.coeffs[i].clone()));
            }
            for &j in &z.support {
                assert!(l.pair_with_curve(&z.p, j).is_zero());
            }
            assert!(is_negative_definite(l, &z.support));
            if !z.support.is_empty() {
                let det = sub_det(l, &z.support);
                let det_int = det.to_integer();
                assert!(det_int.abs().is_multiple_of(&z.denominator));
            }
        }
    }
}
