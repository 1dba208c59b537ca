//! Rational quadratic forms: congruence diagonalization, signature,
//! discriminant, local invariants, and local/global isotropy decisions
//! with certificates.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::arith::{self, Place};
use crate::hilbert::hilbert_symbol;
use crate::oracle;
use crate::{Error, Int, Rat, Result};

/// Supported dimension range for forms in this artifact.
pub const MAX_DIM: usize = 16;

/// A quadratic form `q(x) = x^T G x` given by a symmetric rational Gram
/// matrix. Nondegeneracy is checked by the operations that need it, not on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    gram: Vec<Vec<Rat>>,
}

impl QuadraticForm {
    pub fn from_gram(gram: Vec<Vec<Rat>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::Domain(format!("dimension must be in 1..={MAX_DIM}, got {n}")));
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(Error::Domain("Gram matrix must be square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Domain("Gram matrix must be symmetric".into()));
                }
            }
        }
        Ok(QuadraticForm { gram })
    }

    pub fn from_int_gram(gram: &[Vec<Int>]) -> Result<Self> {
        Self::from_gram(
            gram.iter()
                .map(|row| row.iter().map(|e| Rat::from_integer(e.clone())).collect())
                .collect(),
        )
    }

    /// Diagonal form with the given coefficients.
    pub fn diagonal(coeffs: &[Rat]) -> Result<Self> {
        let n = coeffs.len();
        let mut gram = vec![vec![Rat::zero(); n]; n];
        for (i, c) in coeffs.iter().enumerate() {
            gram[i][i] = c.clone();
        }
        Self::from_gram(gram)
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    /// Evaluates `q(v)` exactly.
    pub fn eval(&self, v: &[Int]) -> Rat {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length must match dimension");
        let mut acc = Rat::zero();
        for i in 0..n {
            for j in 0..n {
                if !self.gram[i][j].is_zero() {
                    acc += &self.gram[i][j] * Rat::from_integer(&v[i] * &v[j]);
                }
            }
        }
        acc
    }

    /// Exact determinant of the Gram matrix by rational elimination.
    pub fn det(&self) -> Rat {
        let n = self.dim();
        let mut m = self.gram.clone();
        let mut det = Rat::one();
        for k in 0..n {
            // partial pivot by largest absolute value
            let piv = (k..n).max_by(|&a, &b| m[a][k].abs().cmp(&m[b][k].abs())).unwrap();
            if m[piv][k].is_zero() {
                return Rat::zero();
            }
            if piv != k {
                m.swap(piv, k);
                det = -det;
            }
            det *= m[k][k].clone();
            for i in k + 1..n {
                let f = &m[i][k] / &m[k][k];
                for j in k..n {
                    let s = &f * &m[k][j];
                    m[i][j] -= s;
                }
            }
        }
        det
    }
}

/// A congruence diagonalization `T^T G T = diag(c_1..c_n)`.
#[derive(Debug, Clone)]
pub struct DiagonalForm {
    pub coeffs: Vec<Rat>,
    pub transform: Vec<Vec<Rat>>,
    pub rank: usize,
}

impl DiagonalForm {
    pub fn nonzero_coeffs(&self) -> impl Iterator<Item = &Rat> {
        self.coeffs.iter().filter(|c| !c.is_zero())
    }
}

/// Congruence diagonalization by symmetric pivoting, with the standard
/// row-plus-column trick for zero diagonal pivots. Exact; no rounding.
pub fn diagonalize(q: &QuadraticForm) -> DiagonalForm {
    let n = q.dim();
    let mut g = q.gram.to_vec();
    let mut t: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();

    // col_j += c * col_i applied congruently; T tracks column operations.
    fn add_col(g: &mut [Vec<Rat>], t: &mut [Vec<Rat>], n: usize, i: usize, j: usize, c: &Rat) {
        for r in 0..n {
            let s = c * &g[r][i];
            g[r][j] += s;
        }
        for r in 0..n {
            let s = c * &g[i][r];
            g[j][r] += s;
        }
        for r in 0..n {
            let s = c * &t[r][i];
            t[r][j] += s;
        }
    }
    fn swap_cols(g: &mut [Vec<Rat>], t: &mut Vec<Vec<Rat>>, n: usize, i: usize, j: usize) {
        for r in 0..n {
            g[r].swap(i, j);
        }
        g.swap(i, j);
        for r in 0..n {
            t[r].swap(i, j);
        }
    }

    for k in 0..n {
        if g[k][k].is_zero() {
            // prefer moving a nonzero diagonal entry into position
            if let Some(j) = (k + 1..n).find(|&j| !g[j][j].is_zero()) {
                swap_cols(&mut g, &mut t, n, k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| !g[k][j].is_zero()) {
                // 2*g[k][j] + g[j][j] with g[j][j] = 0 is nonzero
                let one = Rat::one();
                add_col(&mut g, &mut t, n, j, k, &one);
            }
        }
        if g[k][k].is_zero() {
            continue;
        }
        for j in k + 1..n {
            if !g[k][j].is_zero() {
                let c = -(&g[k][j] / &g[k][k]);
                add_col(&mut g, &mut t, n, k, j, &c);
            }
        }
    }

    let coeffs: Vec<Rat> = (0..n).map(|i| g[i][i].clone()).collect();
    let rank = coeffs.iter().filter(|c| !c.is_zero()).count();
    DiagonalForm { coeffs, transform: t, rank }
}

/// Sylvester signature `(n_plus, n_minus, n_zero)`.
pub fn signature(q: &QuadraticForm) -> (usize, usize, usize) {
    let d = diagonalize(q);
    let plus = d.coeffs.iter().filter(|c| c.is_positive()).count();
    let minus = d.coeffs.iter().filter(|c| c.is_negative()).count();
    (plus, minus, q.dim() - plus - minus)
}

/// Determinant of the Gram matrix; errors on degenerate forms. The square
/// class equals the product of any diagonalization's coefficients.
pub fn discriminant(q: &QuadraticForm) -> Result<Rat> {
    let d = q.det();
    if d.is_zero() {
        return Err(Error::Degenerate);
    }
    Ok(d)
}

/// The pair `(d_p(q) = 1?, epsilon_p(q))` at one place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalInvariants {
    pub place: Place,
    pub d_square: bool,
    pub epsilon: i32,
}

/// Local invariants: discriminant square class plus the product of
/// pairwise Hilbert symbols over any diagonalization.
pub fn local_invariants(q: &QuadraticForm, place: &Place) -> Result<LocalInvariants> {
    let disc = discriminant(q)?;
    let d_square = arith::is_square_in(&disc, place)?;
    let diag = diagonalize(q);
    let coeffs: Vec<&Rat> = diag.nonzero_coeffs().collect();
    let mut epsilon = 1;
    for i in 0..coeffs.len() {
        for j in i + 1..coeffs.len() {
            epsilon *= hilbert_symbol(coeffs[i], coeffs[j], place)?;
        }
    }
    Ok(LocalInvariants { place: place.clone(), d_square, epsilon })
}

/// Whether `q` represents zero nontrivially in the completion at `place`.
pub fn is_isotropic_local(q: &QuadraticForm, place: &Place) -> Result<bool> {
    let disc = discriminant(q)?;
    let n = q.dim();
    if *place == Place::Infinity {
        let (plus, minus, _) = signature(q);
        return Ok(plus >= 1 && minus >= 1);
    }
    match n {
        1 => Ok(false),
        2 => arith::is_square_in(&-disc, place),
        3 => {
            let inv = local_invariants(q, place)?;
            Ok(hilbert_symbol(&-Rat::one(), &-disc, place)? == inv.epsilon)
        }
        4 => {
            let inv = local_invariants(q, place)?;
            if !inv.d_square {
                Ok(true)
            } else {
                Ok(hilbert_symbol(&-Rat::one(), &-Rat::one(), place)? == inv.epsilon)
            }
        }
        _ => Ok(true),
    }
}

/// The finite set of places where local isotropy can fail: `{inf, 2}` plus
/// odd primes dividing a diagonal coefficient's numerator or denominator.
pub fn critical_places(q: &QuadraticForm) -> Result<Vec<Place>> {
    let diag = diagonalize(q);
    let mut odd: BTreeSet<Int> = BTreeSet::new();
    for c in diag.nonzero_coeffs() {
        for part in [c.numer(), c.denom()] {
            for p in arith::odd_prime_divisors(part)? {
                odd.insert(p);
            }
        }
    }
    let mut places = vec![Place::Infinity, Place::Prime(Int::from(2))];
    places.extend(odd.into_iter().map(Place::Prime));
    Ok(places)
}

/// Hasse-Minkowski verdict for a form over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsotropyVerdict {
    Isotropic { witness: Option<Vec<Int>> },
    Anisotropic { place: Place, invariants: LocalInvariants },
}

impl IsotropyVerdict {
    pub fn is_isotropic(&self) -> bool {
        matches!(self, IsotropyVerdict::Isotropic { .. })
    }
}

/// Default witness-search heights, scaled down with dimension to keep the
/// exhaustive oracle affordable.
pub fn default_witness_height(n: usize) -> u64 {
    match n {
        0..=2 => 1000,
        3 => 300,
        4 => 40,
        _ => 10,
    }
}

/// Global isotropy by checking every critical place; anisotropy is
/// certified by the smallest failing place, isotropy decorated with an
/// integer witness when the bounded search finds one.
pub fn is_isotropic_global(q: &QuadraticForm) -> Result<IsotropyVerdict> {
    is_isotropic_global_with_height(q, default_witness_height(q.dim()))
}

pub fn is_isotropic_global_with_height(q: &QuadraticForm, height: u64) -> Result<IsotropyVerdict> {
    for place in critical_places(q)? {
        if !is_isotropic_local(q, &place)? {
            let invariants = local_invariants(q, &place)?;
            return Ok(IsotropyVerdict::Anisotropic { place, invariants });
        }
    }
    let witness = oracle::find_integer_zero(q, height);
    if let Some(w) = &witness {
        debug_assert!(q.eval(w).is_zero());
    }
    Ok(IsotropyVerdict::Isotropic { witness })
}

/// Isotropy of the binary form `ax^2 + bxy + cy^2` over Q: true iff
/// `b^2 - 4ac` is a rational square.
pub fn binary_isotropic(a: &Rat, b: &Rat, c: &Rat) -> Result<bool> {
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Err(Error::ZeroInput);
    }
    let disc = b * b - Rat::from_integer(Int::from(4)) * a * c;
    Ok(arith::is_square_rational(&disc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rat_int};

    fn p(n: i64) -> Place {
        Place::prime(n).unwrap()
    }

    fn int_form(rows: &[&[i64]]) -> QuadraticForm {
        QuadraticForm::from_gram(
            rows.iter().map(|r| r.iter().map(|&e| rat_int(e)).collect()).collect(),
        )
        .unwrap()
    }

    /// The completed-square ternary shape with parameters m, n: Gram of
    /// -(a1^2+a2^2+a3^2) + 2m a1 a3 + 2n a2 a3.
    fn ternary_mn(m: i64, n: i64) -> QuadraticForm {
        int_form(&[&[-1, 0, m], &[0, -1, n], &[m, n, -1]])
    }

    #[test]
    fn diagonalize_paper_reduction() {
        // m = n = 2 reduces to square classes {7, -1, -1}
        let q = ternary_mn(2, 2);
        let d = diagonalize(&q);
        assert_eq!(d.rank, 3);
        // verify T^T G T = diag(c)
        let n = 3;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rat::zero();
                for a in 0..n {
                    for b in 0..n {
                        acc += &d.transform[a][i] * &q.gram()[a][b] * &d.transform[b][j];
                    }
                }
                let expect = if i == j { d.coeffs[i].clone() } else { Rat::zero() };
                assert_eq!(acc, expect);
            }
        }
        // square-class multiset {7, -1, -1}: one positive coeff in class 7
        let pos: Vec<_> = d.coeffs.iter().filter(|c| c.is_positive()).collect();
        assert_eq!(pos.len(), 1);
        let cls = pos[0] * rat_int(7);
        assert!(arith::is_square_rational(&cls), "positive coefficient not in class 7");
    }

    #[test]
    fn diagonalize_identity_on_diagonal_input() {
        let q = QuadraticForm::diagonal(&[rat_int(7), rat_int(-1), rat_int(-1)]).unwrap();
        let d = diagonalize(&q);
        assert_eq!(d.coeffs, vec![rat_int(7), rat_int(-1), rat_int(-1)]);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.transform[i][j], if i == j { Rat::one() } else { Rat::zero() });
            }
        }
    }

    #[test]
    fn diagonalize_zero_diagonal_pivot() {
        let q = int_form(&[&[0, 1], &[1, 0]]);
        let d = diagonalize(&q);
        assert_eq!(d.rank, 2);
        let prod: Rat = d.coeffs.iter().product();
        // det changes by a square under congruence; det = -1
        assert!(arith::is_square_rational(&(prod / q.det())));
    }

    #[test]
    fn signature_values() {
        assert_eq!(signature(&int_form(&[&[-2, 4], &[4, -2]])), (1, 1, 0));
        assert_eq!(signature(&QuadraticForm::diagonal(&[rat_int(-1), rat_int(-1)]).unwrap()), (0, 2, 0));
        // diopIV example form has signature (1,3)
        let q = int_form(&[
            &[-1, 0, 6, 2],
            &[0, -1, 7, 2],
            &[6, 7, -1, 9],
            &[2, 2, 9, -1],
        ]);
        assert_eq!(signature(&q), (1, 3, 0));
        // degenerate
        assert_eq!(signature(&int_form(&[&[-2, 2], &[2, -2]])), (0, 1, 1));
    }

    #[test]
    fn discriminant_values() {
        let q = QuadraticForm::diagonal(&[rat_int(7), rat_int(-1), rat_int(-1)]).unwrap();
        assert_eq!(discriminant(&q).unwrap(), rat_int(7));
        // diopV example Gram has det -253
        let q = int_form(&[
            &[-1, 2, 3, 3],
            &[2, -1, 3, 2],
            &[3, 3, -1, 2],
            &[3, 2, 2, -1],
        ]);
        assert_eq!(discriminant(&q).unwrap(), rat_int(-253));
        // diopIV example: square class -13 (det -637 = 7^2 * -13)
        let q = int_form(&[
            &[-1, 0, 6, 2],
            &[0, -1, 7, 2],
            &[6, 7, -1, 9],
            &[2, 2, 9, -1],
        ]);
        let d = discriminant(&q).unwrap();
        assert_eq!(d, rat_int(-637));
        assert!(arith::is_square_rational(&(d / rat_int(-13) / rat_int(49))));
        assert!(matches!(discriminant(&int_form(&[&[-2, 2], &[2, -2]])), Err(Error::Degenerate)));
    }

    #[test]
    fn local_invariants_values() {
        // diopIV example at p = 7: d square, epsilon = -1
        let q = int_form(&[
            &[-1, 0, 6, 2],
            &[0, -1, 7, 2],
            &[6, 7, -1, 9],
            &[2, 2, 9, -1],
        ]);
        let inv = local_invariants(&q, &p(7)).unwrap();
        assert!(inv.d_square);
        assert_eq!(inv.epsilon, -1);

        let q = QuadraticForm::diagonal(&[rat_int(1), rat_int(1)]).unwrap();
        for v in [Place::Infinity, p(2), p(3), p(7)] {
            assert_eq!(local_invariants(&q, &v).unwrap().epsilon, 1);
        }

        // diag(7,-1,-1) at 7: epsilon = (7,-1)(7,-1)(-1,-1) = +1
        let q = QuadraticForm::diagonal(&[rat_int(7), rat_int(-1), rat_int(-1)]).unwrap();
        assert_eq!(local_invariants(&q, &p(7)).unwrap().epsilon, 1);
    }

    #[test]
    fn epsilon_invariant_under_rediagonalization() {
        // congruence-transform a fixture and compare epsilon across bases
        let base = int_form(&[&[-1, 0, 2], &[0, -1, 2], &[2, 2, -1]]);
        let transforms: [&[&[i64; 3]; 3]; 3] = [
            &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]],
            &[&[1, 0, 0], &[2, 1, 1], &[0, 0, 1]],
            &[&[0, 1, 0], &[1, 0, 2], &[1, 1, 1]],
        ];
        for t in transforms {
            let mut g = vec![vec![Rat::zero(); 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = Rat::zero();
                    for a in 0..3 {
                        for b in 0..3 {
                            acc += rat_int(t[a][i]) * base.gram()[a][b].clone() * rat_int(t[b][j]);
                        }
                    }
                    g[i][j] = acc;
                }
            }
            let q2 = QuadraticForm::from_gram(g).unwrap();
            for v in [p(2), p(3), p(7)] {
                assert_eq!(
                    local_invariants(&base, &v).unwrap().epsilon,
                    local_invariants(&q2, &v).unwrap().epsilon,
                    "at {v}"
                );
                assert_eq!(signature(&base), signature(&q2));
            }
        }
    }

    #[test]
    fn local_isotropy_rules() {
        let q = QuadraticForm::diagonal(&[rat_int(7), rat_int(-1), rat_int(-1)]).unwrap();
        assert!(!is_isotropic_local(&q, &p(7)).unwrap());
        assert!(is_isotropic_local(&q, &Place::Infinity).unwrap());

        let q5 = QuadraticForm::diagonal(&[rat_int(1), rat_int(3), rat_int(-5), rat_int(7), rat_int(11)]).unwrap();
        for v in [p(2), p(3), p(5), p(7)] {
            assert!(is_isotropic_local(&q5, &v).unwrap());
        }

        // signature (1,3) at infinity
        let q = int_form(&[
            &[-1, 0, 6, 2],
            &[0, -1, 7, 2],
            &[6, 7, -1, 9],
            &[2, 2, 9, -1],
        ]);
        assert!(is_isotropic_local(&q, &Place::Infinity).unwrap());
    }

    #[test]
    fn global_verdicts() {
        // m = n = 2 case: anisotropic. The smallest failing place is 2
        // (the form is -(x^2+y^2+z^2) over Q_2 since -7 is a 2-adic
        // square); the classical odd certificate 7 fails as well.
        let q = ternary_mn(2, 2);
        match is_isotropic_global(&q).unwrap() {
            IsotropyVerdict::Anisotropic { place, .. } => assert_eq!(place, p(2)),
            v => panic!("expected anisotropic, got {v:?}"),
        }
        assert!(!is_isotropic_local(&q, &p(7)).unwrap());

        // x^2 - 4y^2: isotropic with witness (2, 1)
        let q = QuadraticForm::diagonal(&[rat_int(1), rat_int(-4)]).unwrap();
        match is_isotropic_global(&q).unwrap() {
            IsotropyVerdict::Isotropic { witness } => {
                assert_eq!(witness, Some(vec![Int::from(2), Int::from(1)]))
            }
            v => panic!("expected isotropic, got {v:?}"),
        }

        // m = n = l = 2 dense ternary: anisotropic; 2 is again the
        // smallest failing place, and the odd certificate is 3
        let q = int_form(&[&[-1, 2, 2], &[2, -1, 2], &[2, 2, -1]]);
        match is_isotropic_global(&q).unwrap() {
            IsotropyVerdict::Anisotropic { place, .. } => assert_eq!(place, p(2)),
            v => panic!("expected anisotropic, got {v:?}"),
        }
        assert!(!is_isotropic_local(&q, &p(3)).unwrap());
        assert!(is_isotropic_local(&q, &p(7)).unwrap());
        // same square classes as 3x^2 + 27y^2 - z^2
        let q = QuadraticForm::diagonal(&[rat_int(3), rat_int(27), rat_int(-1)]).unwrap();
        assert!(!is_isotropic_global(&q).unwrap().is_isotropic());
    }

    #[test]
    fn binary_isotropy() {
        // (-2, 4k, -2): only k = 1 gives a square discriminant
        assert!(!binary_isotropic(&rat_int(-2), &rat_int(8), &rat_int(-2)).unwrap());
        assert!(binary_isotropic(&rat_int(-2), &rat_int(4), &rat_int(-2)).unwrap());
        assert!(binary_isotropic(&rat_int(1), &rat_int(0), &rat_int(-1)).unwrap());
        assert!(binary_isotropic(&rat(1, 2), &rat_int(0), &rat(-9, 2)).unwrap());
        assert!(binary_isotropic(&rat_int(0), &rat_int(0), &rat_int(0)).is_err());
    }

    #[test]
    fn binary_matches_global_engine() {
        let vals = [-6i64, -4, -2, -1, 0, 1, 2, 3, 5];
        let mut cases = 0;
        for &a in &vals {
            for &b in &vals {
                for &c in &vals {
                    // global engine needs a nondegenerate Gram [[a, b/2], [b/2, c]]
                    let gram = vec![
                        vec![rat_int(a), rat(b, 2)],
                        vec![rat(b, 2), rat_int(c)],
                    ];
                    let q = QuadraticForm::from_gram(gram).unwrap();
                    if q.det().is_zero() {
                        continue;
                    }
                    cases += 1;
                    let bin = binary_isotropic(&rat_int(a), &rat_int(b), &rat_int(c)).unwrap();
                    assert_eq!(
                        bin,
                        is_isotropic_global(&q).unwrap().is_isotropic(),
                        "a={a} b={b} c={c}"
                    );
                }
            }
        }
        assert!(cases >= 200, "sweep too small: {cases}");
    }
}
