//! Exact rational feasibility for `A x = b, x >= 0` (phase-one simplex with
//! Bland's rule), plus the two integer certificates the `Z^k` gate needs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Returns a basic feasible solution of `A x = b, x >= 0`, or `None` when the
/// system is infeasible.
pub fn feasible_nonneg(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut r = vec![BigRational::zero(); width];
        for j in 0..n {
            r[j] = if flip { -row[j].clone() } else { row[j].clone() };
        }
        r[n + i] = BigRational::one();
        r[rhs] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut z = vec![BigRational::zero(); width];
    for row in &t {
        for j in 0..n {
            z[j] -= &row[j];
        }
        z[rhs] -= &row[rhs];
    }

    loop {
        let Some(enter) = (0..n + m).find(|&j| z[j].is_negative()) else { break };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let best = &t[l][rhs] / &t[l][enter];
                        ratio < best || (ratio == best && basis[i] < basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
        }
        // phase one is bounded below by zero, so an entering column always has a pivot
        let l = leave.expect("phase-one objective is bounded");
        let piv = t[l][enter].clone();
        for x in t[l].iter_mut() {
            *x /= &piv;
        }
        let pivot_row = t[l].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != l && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        if !z[enter].is_zero() {
            let f = z[enter].clone();
            for (x, p) in z.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[l] = enter;
    }

    let artificial_sum: BigRational =
        (0..m).filter(|&i| basis[i] >= n).map(|i| t[i][rhs].clone()).fold(BigRational::zero(), |s, x| s + x);
    if artificial_sum.is_positive() {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][rhs].clone();
        }
    }
    Some(x)
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Scales a nonnegative rational vector to the smallest integer multiple.
fn to_integers(x: &[BigRational]) -> Option<Vec<BigInt>> {
    let mut l = BigInt::one();
    for v in x {
        let d = v.denom().clone();
        let g = num_integer_gcd(&l, &d);
        l = &l / g * d;
    }
    let ints: Vec<BigInt> = x.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = num_integer_gcd(&g, v);
    }
    if g.is_zero() {
        return Some(ints);
    }
    Some(ints.into_iter().map(|v| v / &g).collect())
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// A nonzero nonnegative integer combination of `gens` summing to zero, if
/// one exists.
pub fn zero_combination(gens: &[Vec<i64>]) -> Option<Vec<u64>> {
    let n = gens.len();
    let k = gens.first().map_or(0, Vec::len);
    if n == 0 {
        return None;
    }
    let mut a: Vec<Vec<BigRational>> = (0..k).map(|c| gens.iter().map(|g| rat(g[c])).collect()).collect();
    a.push(vec![rat(1); n]);
    let mut b = vec![rat(0); k];
    b.push(rat(1));
    let x = feasible_nonneg(&a, &b)?;
    to_integers(&x)?.iter().map(|v| v.to_u64()).collect()
}

/// An integer functional `y` with `y . g >= 1` for every generator, if one
/// exists.
pub fn separating_functional(gens: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = gens.len();
    let k = gens.first().map_or(0, Vec::len);
    // variables: y+ (k), y- (k), slack (n)
    let mut a = Vec::with_capacity(n);
    for (i, g) in gens.iter().enumerate() {
        let mut row = vec![rat(0); 2 * k + n];
        for c in 0..k {
            row[c] = rat(g[c]);
            row[k + c] = rat(-g[c]);
        }
        row[2 * k + i] = rat(-1);
        a.push(row);
    }
    let b = vec![rat(1); n];
    let x = feasible_nonneg(&a, &b)?;
    let y: Vec<BigRational> = (0..k).map(|c| &x[c] - &x[k + c]).collect();
    let mut l = BigInt::one();
    for v in &y {
        let d = v.denom().clone();
        let g = num_integer_gcd(&l, &d);
        l = &l / g * d;
    }
    y.iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer().to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[i64], b: &[i64]) -> i64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn opposite_generators_cancel() {
        let c = zero_combination(&[vec![1], vec![-1]]).unwrap();
        assert_eq!(c, vec![1, 1]);
        assert!(separating_functional(&[vec![1], vec![-1]]).is_none());
    }

    #[test]
    fn positive_generator_is_separated() {
        assert!(zero_combination(&[vec![1]]).is_none());
        let y = separating_functional(&[vec![1]]).unwrap();
        assert!(dot(&y, &[1]) >= 1);
    }

    #[test]
    fn planar_cone() {
        // (2,-1), (-1,2), (-1,-1): 1*(2,-1) + 1*(-1,2) + 1*(-1,-1) = 0
        let gens = vec![vec![2, -1], vec![-1, 2], vec![-1, -1]];
        let c = zero_combination(&gens).unwrap();
        let sum: Vec<i64> = (0..2).map(|k| gens.iter().zip(&c).map(|(g, &l)| g[k] * l as i64).sum()).collect();
        assert_eq!(sum, vec![0, 0]);
        assert!(c.iter().any(|&l| l > 0));

        let gens = vec![vec![1, 0], vec![-1, 1]];
        assert!(zero_combination(&gens).is_none());
        let y = separating_functional(&gens).unwrap();
        assert!(gens.iter().all(|g| dot(&y, g) >= 1), "{y:?}");
    }

    #[test]
    fn infeasible_system() {
        // x = -1 with x >= 0
        assert!(feasible_nonneg(&[vec![rat(1)]], &[rat(-1)]).is_none());
        assert_eq!(feasible_nonneg(&[vec![rat(2)]], &[rat(3)]).unwrap(), vec![BigRational::new(3.into(), 2.into())]);
    }
}
