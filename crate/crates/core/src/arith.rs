//! Exact integer and rational primitives: valuations, residue symbols,
//! factorization, local square classes, and the three-squares exclusion test.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Int, Rat, Result};

/// A completion of the rationals: the real place or a p-adic place.
///
/// Places are ordered with `Infinity` first, then finite primes by value,
/// which is the order certificate selection uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Place {
    Infinity,
    Prime(Int),
}

impl Place {
    /// Builds a finite place, verifying primality of `p`.
    pub fn prime(p: impl Into<Int>) -> Result<Place> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Place::Prime(p))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Prime(_))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, Place::Prime(_)) => Ordering::Less,
            (Place::Prime(_), Place::Infinity) => Ordering::Greater,
            (Place::Prime(a), Place::Prime(b)) => a.cmp(b),
        }
    }
}

/// Signed prime factorization: `sign * prod p^e` reconstructs the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub negative: bool,
    pub factors: BTreeMap<Int, u32>,
}

impl Factorization {
    /// Reassembles the factored integer.
    pub fn reconstruct(&self) -> Int {
        let mut acc = Int::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        if self.negative {
            -acc
        } else {
            acc
        }
    }

    pub fn odd_primes(&self) -> impl Iterator<Item = &Int> {
        self.factors.keys().filter(|p| !p.is_even())
    }
}

/// p-adic valuation of a nonzero integer.
pub fn vp(n: &Int, p: &Int) -> Result<u64> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let mut v = 0u64;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return Ok(v);
        }
        v += 1;
        m = q;
    }
}

/// p-adic valuation of a nonzero rational: `vp(num) - vp(den)`.
pub fn vp_rat(x: &Rat, p: &Int) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let vn = vp(x.numer(), p)? as i64;
    let vd = vp(x.denom(), p)? as i64;
    Ok(vn - vd)
}

/// Removes every factor of `p`, returning `(valuation, unit part)`.
pub fn split_valuation(n: &Int, p: &Int) -> Result<(u64, Int)> {
    let v = vp(n, p)?;
    let mut u = n.clone();
    for _ in 0..v {
        u /= p;
    }
    Ok((v, u))
}

/// Quadratic residue symbol `(a/p)` for odd prime `p`, via Euler's criterion.
pub fn legendre(a: &Int, p: &Int) -> Result<i32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if p.is_even() {
        return Err(Error::Domain("legendre requires an odd prime; use mod2symbol for p = 2".into()));
    }
    let r = a.mod_floor(p);
    if r.is_zero() {
        return Err(Error::Domain(format!("legendre requires gcd(a, p) = 1, got p = {p} dividing a")));
    }
    let exp: Int = (p - Int::one()) / Int::from(2);
    let e = r.modpow(&exp, p);
    if e.is_one() {
        Ok(1)
    } else {
        Ok(-1)
    }
}

/// The symbol `(a/2) = (-1)^((a^2-1)/8)` for odd `a`: +1 iff `a = ±1 mod 8`.
pub fn mod2symbol(a: &Int) -> Result<i32> {
    if a.is_even() {
        return Err(Error::Domain("mod2symbol requires an odd argument".into()));
    }
    let r = a.mod_floor(&Int::from(8)).to_u8().unwrap();
    Ok(if r == 1 || r == 7 { 1 } else { -1 })
}

/// Deterministic Miller-Rabin, exact for inputs below 3.3e24.
pub fn is_prime(n: &Int) -> bool {
    let two = Int::from(2);
    if n < &two {
        return false;
    }
    for sp in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let sp = Int::from(sp);
        if n == &sp {
            return true;
        }
        if n.is_multiple_of(&sp) {
            return false;
        }
    }
    let n_minus_1 = n - Int::one();
    let s = vp(&n_minus_1, &two).expect("n-1 nonzero");
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = Int::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..s.saturating_sub(1) {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_BOUND: u64 = 1_000_000;

/// Complete deterministic factorization of a nonzero integer.
///
/// Trial division up to 10^6, then Brent-cycle splitting with a fixed
/// polynomial increment for the remaining cofactor.
pub fn factorize(n: &Int) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let negative = n.is_negative();
    let mut m = n.abs();
    let mut factors: BTreeMap<Int, u32> = BTreeMap::new();

    let push = |p: Int, e: u32, factors: &mut BTreeMap<Int, u32>| {
        *factors.entry(p).or_insert(0) += e;
    };

    for d in std::iter::once(2u64).chain((3..TRIAL_BOUND).step_by(2)) {
        let d_big = Int::from(d);
        if &d_big * &d_big > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&d_big);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            push(d_big, e, &mut factors);
        }
        if m.is_one() {
            break;
        }
    }

    // Whatever survives trial division is split recursively.
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            push(c, 1, &mut factors);
            continue;
        }
        let d = pollard_brent(&c);
        stack.push(&c / &d);
        stack.push(d);
    }

    Ok(Factorization { negative, factors })
}

/// Brent's cycle variant of Pollard rho with deterministic parameters.
fn pollard_brent(n: &Int) -> Int {
    debug_assert!(!is_prime(n) && n > &Int::from(1));
    if n.is_even() {
        return Int::from(2);
    }
    // x^2 + c with c = 1, 2, 3, ... until a proper factor appears.
    for c in 1u64.. {
        let c = Int::from(c);
        let mut x = Int::from(2);
        let mut y = x.clone();
        let mut d = Int::one();
        while d.is_one() {
            x = (&x * &x + &c).mod_floor(n);
            y = (&y * &y + &c).mod_floor(n);
            y = (&y * &y + &c).mod_floor(n);
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

/// Whether a nonzero rational is a square in the completion at `place`.
pub fn is_square_in(x: &Rat, place: &Place) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    match place {
        Place::Infinity => Ok(x.is_positive()),
        Place::Prime(p) => {
            let v = vp_rat(x, p)?;
            if v % 2 != 0 {
                return Ok(false);
            }
            let (_, un) = split_valuation(x.numer(), p)?;
            let (_, ud) = split_valuation(x.denom(), p)?;
            // un/ud is a p-adic unit; its square class is that of un*ud.
            let u = un * ud;
            if p.is_even() {
                // odd unit squares in Q_2 are exactly 1 mod 8
                Ok(u.mod_floor(&Int::from(8)).is_one())
            } else {
                Ok(legendre(&u, p)? == 1)
            }
        }
    }
}

/// Whether a nonzero rational is a square in Q: sign, numerator, and
/// denominator must all be square.
pub fn is_square_rational(x: &Rat) -> bool {
    if x.is_zero() {
        return true;
    }
    if x.is_negative() {
        return false;
    }
    is_square_int(x.numer()) && is_square_int(x.denom())
}

fn is_square_int(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// True iff `n` is not a sum of three integer squares: after removing all
/// factors of 4 the remainder is 7 mod 8 (Gauss).
pub fn three_squares_excluded(n: &Int) -> Result<bool> {
    if !n.is_positive() {
        return Err(Error::Domain("three_squares_excluded requires n >= 1".into()));
    }
    let four = Int::from(4);
    let mut m = n.clone();
    while m.is_multiple_of(&four) {
        m /= &four;
    }
    Ok(m.mod_floor(&Int::from(8)) == Int::from(7))
}

/// Odd prime divisors of a nonzero integer, ascending.
pub fn odd_prime_divisors(n: &Int) -> Result<Vec<Int>> {
    Ok(factorize(n)?.odd_primes().cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn int(n: i64) -> Int {
        Int::from(n)
    }

    #[test]
    fn vp_paper_values() {
        assert_eq!(vp(&int(637), &int(7)).unwrap(), 2);
        assert_eq!(vp(&int(7), &int(7)).unwrap(), 1);
        assert_eq!(vp(&int(-84), &int(7)).unwrap(), 1);
        assert!(matches!(vp(&int(0), &int(7)), Err(Error::ZeroInput)));
        assert!(matches!(vp(&int(10), &int(6)), Err(Error::NotPrime(_))));
    }

    #[test]
    fn vp_rat_mixed() {
        assert_eq!(vp_rat(&rat(7, 2), &int(7)).unwrap(), 1);
        assert_eq!(vp_rat(&rat(1, 49), &int(7)).unwrap(), -2);
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(&int(-13), &int(7)).unwrap(), 1);
        assert_eq!(legendre(&int(3), &int(19)).unwrap(), -1);
        for p in [3i64, 5, 7, 11, 13, 19] {
            assert_eq!(legendre(&int(1), &int(p)).unwrap(), 1);
        }
        assert!(legendre(&int(14), &int(7)).is_err());
        assert!(legendre(&int(3), &int(2)).is_err());
    }

    #[test]
    fn legendre_multiplicative() {
        let p = int(19);
        for a in 1i64..19 {
            for b in 1i64..19 {
                let ab = legendre(&int(a * b), &p).unwrap();
                assert_eq!(ab, legendre(&int(a), &p).unwrap() * legendre(&int(b), &p).unwrap());
            }
        }
    }

    #[test]
    fn mod2symbol_values() {
        assert_eq!(mod2symbol(&int(1)).unwrap(), 1);
        assert_eq!(mod2symbol(&int(3)).unwrap(), -1);
        assert_eq!(mod2symbol(&int(7)).unwrap(), 1);
        assert_eq!(mod2symbol(&int(-1)).unwrap(), 1);
        assert!(mod2symbol(&int(4)).is_err());
    }

    #[test]
    fn factorize_paper_values() {
        let f = factorize(&int(-637)).unwrap();
        assert!(f.negative);
        assert_eq!(f.factors, BTreeMap::from([(int(7), 2), (int(13), 1)]));

        let f = factorize(&int(2277)).unwrap();
        assert!(!f.negative);
        assert_eq!(f.factors, BTreeMap::from([(int(3), 2), (int(11), 1), (int(23), 1)]));

        let f = factorize(&int(1)).unwrap();
        assert!(!f.negative && f.factors.is_empty());
        assert!(factorize(&int(0)).is_err());
    }

    #[test]
    fn factorize_roundtrip() {
        for n in [-637i64, 2277, 1, -1, 2, 1024, 999_983, 1_000_003 * 7, -360360] {
            assert_eq!(factorize(&int(n)).unwrap().reconstruct(), int(n));
        }
    }

    #[test]
    fn factorize_large_cofactor() {
        // two primes above the trial bound
        let n = int(1_000_003) * int(1_000_033);
        let f = factorize(&n).unwrap();
        assert_eq!(f.factors, BTreeMap::from([(int(1_000_003), 1), (int(1_000_033), 1)]));
    }

    #[test]
    fn square_classes() {
        let p7 = Place::prime(7).unwrap();
        let p2 = Place::prime(2).unwrap();
        assert!(is_square_in(&rat(-13, 1), &p7).unwrap());
        assert!(!is_square_in(&rat(7, 1), &p7).unwrap());
        assert!(is_square_in(&rat(17, 1), &p2).unwrap());
        assert!(!is_square_in(&rat(3, 1), &p2).unwrap());
        assert!(!is_square_in(&rat(-4, 1), &Place::Infinity).unwrap());
        // squares are squares everywhere
        for x in [rat(4, 9), rat(49, 1), rat(1, 64)] {
            for place in [Place::Infinity, p7.clone(), p2.clone(), Place::prime(3).unwrap()] {
                assert!(is_square_in(&x, &place).unwrap(), "{x} at {place}");
            }
        }
    }

    #[test]
    fn three_squares_values() {
        assert!(three_squares_excluded(&int(23)).unwrap());
        assert!(three_squares_excluded(&int(7)).unwrap());
        assert!(!three_squares_excluded(&int(11)).unwrap());
        assert!(three_squares_excluded(&int(4 * 7)).unwrap());
        assert!(three_squares_excluded(&int(0)).is_err());
    }

    #[test]
    fn three_squares_matches_exhaustive_search() {
        for n in 1i64..=2000 {
            let mut found = false;
            'outer: for x in 0i64.. {
                if x * x > n {
                    break;
                }
                for y in x.. {
                    if x * x + y * y > n {
                        break;
                    }
                    let rest = n - x * x - y * y;
                    let z = (rest as f64).sqrt().round() as i64;
                    if z >= y && z * z == rest {
                        found = true;
                        break 'outer;
                    }
                }
            }
            assert_eq!(three_squares_excluded(&int(n)).unwrap(), !found, "n = {n}");
        }
    }

    #[test]
    fn primality_small() {
        let primes: Vec<i64> = (2..100).filter(|&n| is_prime(&int(n))).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
        );
        assert!(is_prime(&int(1_000_003)));
        assert!(!is_prime(&(int(1_000_003) * int(1_000_003))));
    }

    #[test]
    fn place_ordering() {
        let inf = Place::Infinity;
        let p2 = Place::prime(2).unwrap();
        let p7 = Place::prime(7).unwrap();
        assert!(inf < p2 && p2 < p7);
        assert!(Place::prime(4).is_err());
    }
}
