//! Dense Gaussian elimination over an arbitrary [`Field`].

use crate::field::Field;

/// Reduced row echelon form computed in place. Returns the pivot column of
/// each nonzero row, in row order.
pub fn row_reduce<F: Field>(field: &F, rows: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(&rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut().skip(c) {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !field.is_zero(y) {
                    *x = field.sub(x, &field.mul(&factor, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    row_reduce(field, &mut rows).len()
}

/// Some solution `x` of `a x = b`, with free variables set to zero, or `None`
/// when the system is inconsistent. `a` is given row-major with `ncols`
/// columns (needed when `a` has no rows).
pub fn solve<F: Field>(
    field: &F,
    a: &[Vec<F::Elem>],
    ncols: usize,
    b: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    assert_eq!(a.len(), b.len(), "right-hand side length");
    let mut aug: Vec<Vec<F::Elem>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            debug_assert_eq!(row.len(), ncols);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(field, &mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (row, &c) in aug.iter().zip(&pivots) {
        x[c] = row[ncols].clone();
    }
    Some(x)
}
