//! Brute-force exterior algebra on `Λ^M C^d` for small `d`.
//!
//! Wedge vectors are stored in the basis `e_{s₁} ∧ … ∧ e_{s_M}` with
//! `s₁ < … < s_M`, subsets in lexicographic order. Minors are evaluated by
//! the Leibniz permutation sum, independently of any factorization.

use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::{Error, Result};

pub const MAX_DIM: usize = 8;
pub const MAX_DEGREE: usize = 4;

/// Increasing `m`-subsets of `0..d` in lexicographic order.
pub fn subsets(d: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, m, &mut Vec::new(), &mut out);
    out
}

fn permutations(m: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, sign: f64, out: &mut Vec<(Vec<usize>, f64)>) {
        if rest.is_empty() {
            out.push((cur.clone(), sign));
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            // Removing the i-th remaining element contributes i transpositions.
            let s = if i % 2 == 0 { sign } else { -sign };
            rec(rest, cur, s, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..m).collect(), &mut Vec::new(), 1.0, &mut out);
    out
}

/// `det A[rows, cols]` by the Leibniz formula.
pub fn minor(a: &CMatrix, rows: &[usize], cols: &[usize]) -> C64 {
    assert_eq!(rows.len(), cols.len());
    permutations(rows.len())
        .iter()
        .map(|(perm, sign)| {
            perm.iter().enumerate().fold(C64::new(*sign, 0.0), |acc, (i, &p)| acc * a[[rows[i], cols[p]]])
        })
        .sum()
}

fn check_size(d: usize, m: usize) -> Result<()> {
    if d > MAX_DIM || m > MAX_DEGREE || m > d {
        return Err(Error::SizeBound(format!(
            "oracle limited to d <= {MAX_DIM}, M <= {MAX_DEGREE} and M <= d; got d = {d}, M = {m}"
        )));
    }
    Ok(())
}

/// Coefficients of `φ₁ ∧ … ∧ φ_M` for the columns of `phi`.
pub fn wedge_vector(phi: &CMatrix) -> Result<Vec<C64>> {
    let (d, m) = phi.dim();
    check_size(d, m)?;
    let cols: Vec<usize> = (0..m).collect();
    Ok(subsets(d, m).iter().map(|s| minor(phi, s, &cols)).collect())
}

/// Matrix of `Λ^M U` in the subset basis, entries `det U[S, T]`.
pub fn exterior_power(u: &CMatrix, m: usize) -> Result<CMatrix> {
    let d = u.nrows();
    check_size(d, m)?;
    let subs = subsets(d, m);
    let k = subs.len();
    Ok(CMatrix::from_shape_fn((k, k), |(i, j)| minor(u, &subs[i], &subs[j])))
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `⟨ΛΨ, Λ^M U ΛΦ⟩`.
pub fn oracle_lift(u: &CMatrix, phi: &CMatrix, psi: &CMatrix) -> Result<C64> {
    if phi.dim() != psi.dim() || u.nrows() != phi.nrows() {
        return Err(Error::DimensionMismatch {
            context: "oracle_lift",
            expected: format!("{:?}", phi.dim()),
            found: format!("{:?}", psi.dim()),
        });
    }
    let m = phi.ncols();
    let lu = exterior_power(u, m)?;
    let lphi = wedge_vector(phi)?;
    let lpsi = wedge_vector(psi)?;
    let image: Vec<C64> = (0..lu.nrows()).map(|i| (0..lu.ncols()).map(|j| lu[[i, j]] * lphi[j]).sum()).collect();
    Ok(inner(&lpsi, &image))
}

/// Position of `i` in a sorted subset together with the sign `(−1)^{#elements before i}`.
fn locate(s: &[usize], i: usize) -> (usize, f64) {
    let pos = s.iter().take_while(|&&x| x < i).count();
    (pos, if pos % 2 == 0 { 1.0 } else { -1.0 })
}

/// Creation operator `a*(f): w ↦ f ∧ w` from degree `m` to `m + 1`.
pub fn create(f: &[C64], w: &[C64], d: usize, m: usize) -> Result<Vec<C64>> {
    check_size(d, m + 1)?;
    let src = subsets(d, m);
    let dst = subsets(d, m + 1);
    let mut out = vec![ZERO; dst.len()];
    for (si, s) in src.iter().enumerate() {
        if w[si] == ZERO {
            continue;
        }
        for (i, &fi) in f.iter().enumerate() {
            if s.contains(&i) || fi == ZERO {
                continue;
            }
            let (pos, sign) = locate(s, i);
            let mut t = s.clone();
            t.insert(pos, i);
            let ti = dst.binary_search(&t).expect("subset present");
            out[ti] += fi * w[si] * sign;
        }
    }
    Ok(out)
}

/// Annihilation operator `a(f)`, the adjoint of `a*(f)`, from degree `m` to `m − 1`.
pub fn annihilate(f: &[C64], w: &[C64], d: usize, m: usize) -> Result<Vec<C64>> {
    if m == 0 {
        return Err(Error::invalid("degree", "cannot annihilate from the vacuum of degree 0"));
    }
    check_size(d, m)?;
    let src = subsets(d, m);
    let dst = subsets(d, m - 1);
    let mut out = vec![ZERO; dst.len()];
    for (si, s) in src.iter().enumerate() {
        for (pos, &i) in s.iter().enumerate() {
            let mut t = s.clone();
            t.remove(pos);
            let ti = dst.binary_search(&t).expect("subset present");
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            out[ti] += f[i].conj() * w[si] * sign;
        }
    }
    Ok(out)
}

/// Degree-0 vector `1`.
pub fn vacuum() -> Vec<C64> {
    vec![ONE]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts_are_binomial() {
        assert_eq!(subsets(8, 4).len(), 70);
        assert_eq!(subsets(6, 3).len(), 20);
        assert_eq!(subsets(5, 0).len(), 1);
    }

    #[test]
    fn permutation_signs_sum_to_zero() {
        for m in 2..=4 {
            let p = permutations(m);
            assert_eq!(p.len(), (1..=m).product::<usize>());
            assert_eq!(p.iter().map(|(_, s)| s).sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn minor_of_identity_is_one() {
        let a = crate::linalg::identity(4);
        assert_eq!(minor(&a, &[0, 1, 2, 3], &[0, 1, 2, 3]), ONE);
        assert_eq!(minor(&a, &[0, 1], &[1, 0]), -ONE);
    }

    #[test]
    fn rejects_oversized_problems() {
        let u = crate::linalg::identity(10);
        assert!(matches!(exterior_power(&u, 2), Err(Error::SizeBound(_))));
    }
}
