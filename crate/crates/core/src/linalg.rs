//! Dense exact linear algebra over a field: determinants, rank and kernels.
//!
//! Matrices are row-major `Vec<Vec<FieldElement>>`.

use crate::field::{FieldElement, FieldSpec};

pub type Matrix = Vec<Vec<FieldElement>>;

pub fn identity(n: usize, spec: FieldSpec) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { spec.one() } else { spec.zero() }).collect())
        .collect()
}

/// Determinant by Gaussian elimination with row swaps.
pub fn determinant(m: &[Vec<FieldElement>], spec: FieldSpec) -> FieldElement {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut det = spec.one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return spec.zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let inv = a[col][col].inv().expect("pivot is nonzero");
        det = &det * &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    det
}

/// Rank of a `rows x cols` matrix, and a kernel vector (first nonzero entry 1)
/// when the columns are dependent.
pub fn rank_and_kernel(m: &[Vec<FieldElement>], cols: usize, spec: FieldSpec) -> (usize, Option<Vec<FieldElement>>) {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].inv().expect("pivot is nonzero");
        for k in c..cols {
            a[r][k] = &a[r][k] * &inv;
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone();
            for k in c..cols {
                let t = &factor * &a[r][k];
                a[i][k] = &a[i][k] - &t;
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let rank = pivot_cols.len();
    if rank == cols {
        return (rank, None);
    }
    // Reduced row echelon form: take the first free column, set it to 1 and
    // solve for the pivot variables.
    let free = (0..cols).find(|c| !pivot_cols.contains(c)).expect("rank < cols");
    let mut v = vec![spec.zero(); cols];
    v[free] = spec.one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        if pc < free {
            v[pc] = -&a[row][free];
        }
    }
    (rank, Some(normalize_vector(v)))
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_vector(v: Vec<FieldElement>) -> Vec<FieldElement> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            v.iter().map(|x| x * &inv).collect()
        }
        None => v,
    }
}

pub fn mat_vec(m: &[Vec<FieldElement>], v: &[FieldElement], spec: FieldSpec) -> Vec<FieldElement> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(spec.zero(), |acc, (a, b)| &acc + &(a * b)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(spec: FieldSpec, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&v| spec.int(v)).collect()).collect()
    }

    #[test]
    fn determinant_small_cases() {
        let q = FieldSpec::RATIONALS;
        assert_eq!(determinant(&mat(q, &[&[1, 1, 1], &[0, 2, 0], &[0, 0, 2]]), q), q.int(4));
        assert_eq!(determinant(&mat(q, &[&[0, 1], &[1, 0]]), q), q.int(-1));
        assert_eq!(determinant(&mat(q, &[&[1, 2], &[2, 4]]), q), q.int(0));
        assert_eq!(determinant(&[], q), q.int(1));
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let q = FieldSpec::RATIONALS;
        // columns 1, x, 1+x in the monomial basis
        let m = mat(q, &[&[1, 0, 1], &[0, 1, 1]]);
        let (rank, kernel) = rank_and_kernel(&m, 3, q);
        assert_eq!(rank, 2);
        assert_eq!(kernel.unwrap(), vec![q.int(1), q.int(1), q.int(-1)]);
        let (rank, kernel) = rank_and_kernel(&mat(q, &[&[1, 0], &[0, 1], &[0, 0]]), 2, q);
        assert_eq!((rank, kernel), (2, None));
    }

    #[test]
    fn kernel_vector_is_in_kernel() {
        let f = FieldSpec::prime(5).unwrap();
        let m = mat(f, &[&[1, 2, 3, 4], &[2, 4, 1, 3], &[3, 1, 4, 2]]);
        let (_, kernel) = rank_and_kernel(&m, 4, f);
        let k = kernel.unwrap();
        assert!(mat_vec(&m, &k, f).iter().all(FieldElement::is_zero));
        assert!(k.iter().find(|x| !x.is_zero()).unwrap().is_one());
    }
}
