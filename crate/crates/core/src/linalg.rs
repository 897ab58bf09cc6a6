//! Exact integer and rational linear algebra.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Integer routines work on column
//! lists where that is the natural reading (a set of lattice vectors).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{HomogeneousVector, Rational};
use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub fn identity_int(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Builds the matrix whose columns are the given vectors.
pub fn columns_to_matrix(cols: &[Vec<BigInt>]) -> IntMatrix {
    let rows = cols.first().map_or(0, |c| c.len());
    (0..rows)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect()
}

pub fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn det_int(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// gcd of all `k x k` minors of the `N x k` matrix with the given columns.
/// Zero exactly when the columns are linearly dependent.
pub fn maximal_minor_gcd(cols: &[Vec<BigInt>]) -> BigInt {
    let k = cols.len();
    if k == 0 {
        return BigInt::one();
    }
    let n = cols[0].len();
    if k > n {
        return BigInt::zero();
    }
    let mut g = BigInt::zero();
    for rows in combinations(n, k) {
        let minor: IntMatrix = rows
            .iter()
            .map(|&r| cols.iter().map(|c| c[r].clone()).collect())
            .collect();
        g = g.gcd(&det_int(&minor));
        if g.is_one() {
            break;
        }
    }
    g
}

/// Row-style Hermite reduction of a full-column-rank `N x k` matrix `A`:
/// `transform * A = [upper; 0]` with `transform` unimodular.
#[derive(Clone, Debug)]
pub struct HermiteReduction {
    pub transform: IntMatrix,
    pub transform_inv: IntMatrix,
    pub upper: IntMatrix,
}

impl HermiteReduction {
    pub fn index(&self) -> BigInt {
        self.upper
            .iter()
            .enumerate()
            .fold(BigInt::one(), |acc, (i, r)| acc * r[i].abs())
    }
}

pub fn hermite_reduce(cols: &[Vec<BigInt>]) -> Result<HermiteReduction> {
    let k = cols.len();
    let n = cols.first().map_or(0, |c| c.len());
    if k > n {
        return Err(Error::DependentVectors);
    }
    let mut a = columns_to_matrix(cols);
    let mut u = identity_int(n);
    let mut uinv = identity_int(n);

    for j in 0..k {
        for i in j + 1..n {
            if a[i][j].is_zero() {
                continue;
            }
            // [x y; -b/g a/g] sends (a_jj, a_ij) to (g, 0).
            let p = a[j][j].clone();
            let q = a[i][j].clone();
            let e = p.extended_gcd(&q);
            let (g, x, y) = (e.gcd, e.x, e.y);
            let pg = &p / &g;
            let qg = &q / &g;
            for c in 0..k {
                let (rj, ri) = (a[j][c].clone(), a[i][c].clone());
                a[j][c] = &x * &rj + &y * &ri;
                a[i][c] = -&qg * &rj + &pg * &ri;
            }
            for c in 0..n {
                let (rj, ri) = (u[j][c].clone(), u[i][c].clone());
                u[j][c] = &x * &rj + &y * &ri;
                u[i][c] = -&qg * &rj + &pg * &ri;
            }
            // inverse acts on columns j, i: [pg -y; qg x]
            for r in 0..n {
                let (cj, ci) = (uinv[r][j].clone(), uinv[r][i].clone());
                uinv[r][j] = &pg * &cj + &qg * &ci;
                uinv[r][i] = -&y * &cj + &x * &ci;
            }
        }
        if a[j][j].is_zero() {
            return Err(Error::DependentVectors);
        }
    }
    let upper = a[..k].iter().map(|r| r[..k].to_vec()).collect();
    Ok(HermiteReduction {
        transform: u,
        transform_inv: uinv,
        upper,
    })
}

/// Index of the lattice spanned by `cols` inside its saturation.
pub fn lattice_index(cols: &[Vec<BigInt>]) -> Result<BigInt> {
    Ok(hermite_reduce(cols)?.index())
}

/// Outcome of trying to complete vectors to a basis of `Z^N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisExtension {
    /// Square matrix, determinant `±1`, whose leading columns are the inputs.
    Unimodular(IntMatrix),
    NotExtendable {
        minor_gcd: BigInt,
    },
}

pub fn extend_to_unimodular_basis(vectors: &[HomogeneousVector]) -> Result<BasisExtension> {
    let cols: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.0.clone()).collect();
    extend_columns(&cols)
}

pub fn extend_columns(cols: &[Vec<BigInt>]) -> Result<BasisExtension> {
    let red = hermite_reduce(cols)?;
    let index = red.index();
    if !index.is_one() {
        return Ok(BasisExtension::NotExtendable { minor_gcd: index });
    }
    let n = red.transform_inv.len();
    let k = cols.len();
    // D = U^{-1} diag(H, I): first k columns reproduce the inputs.
    let mut block = identity_int(n);
    for (i, row) in red.upper.iter().enumerate() {
        block[i][..k].clone_from_slice(row);
    }
    Ok(BasisExtension::Unimodular(int_mul(
        &red.transform_inv,
        &block,
    )))
}

/// Reduced row echelon form; returns pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// One solution of `A x = b` (free variables zero), or `None` if inconsistent.
pub fn solve(a: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the right null space of `A` (with `cols` columns).
pub fn nullspace(a: &RatMatrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn inverse(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn det_rat(a: &RatMatrix) -> Rational {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        for i in c + 1..n {
            let f = &m[i][c] / &m[c][c];
            for j in c..n {
                let d = &f * &m[c][j];
                m[i][j] -= d;
            }
        }
    }
    det
}

pub fn to_rat(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Converts a rational matrix that is known to be integral.
pub fn to_int(m: &RatMatrix) -> Option<IntMatrix> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.is_integer().then(|| x.to_integer()))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn bareiss_matches_small_dets() {
        let m = vec![v(&[2, 0, 1]), v(&[1, 3, 2]), v(&[1, 1, 1])];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det_int(&m), BigInt::from(0));
        let m = vec![v(&[0, 1]), v(&[1, 1])];
        assert_eq!(det_int(&m), BigInt::from(-1));
    }

    #[test]
    fn extension_examples() {
        match extend_columns(&[v(&[0, 1]), v(&[1, 1])]).unwrap() {
            BasisExtension::Unimodular(d) => assert_eq!(det_int(&d).abs(), BigInt::one()),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            extend_columns(&[v(&[1, 3]), v(&[2, 3])]).unwrap(),
            BasisExtension::NotExtendable {
                minor_gcd: 3.into()
            }
        );
        match extend_columns(&[v(&[0, 0, 1])]).unwrap() {
            BasisExtension::Unimodular(d) => {
                assert_eq!(det_int(&d).abs(), BigInt::one());
                assert_eq!(
                    d.iter().map(|r| r[0].clone()).collect::<Vec<_>>(),
                    v(&[0, 0, 1])
                );
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            extend_columns(&[v(&[1, 2]), v(&[2, 4])]),
            Err(Error::DependentVectors)
        );
    }

    #[test]
    fn solve_and_nullspace() {
        let a = vec![
            vec![Rational::one(), Rational::one()],
            vec![Rational::one(), -Rational::one()],
        ];
        let x = solve(&a, &[Rational::from_integer(3.into()), Rational::one()]).unwrap();
        assert_eq!(x, vec![Rational::from_integer(2.into()), Rational::one()]);
        let ns = nullspace(&vec![vec![Rational::one(), Rational::one()]], 2);
        assert_eq!(ns.len(), 1);
        assert!((&ns[0][0] + &ns[0][1]).is_zero());
    }
}
