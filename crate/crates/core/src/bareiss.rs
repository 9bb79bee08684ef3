//! Fraction-free (Bareiss) elimination over `k[t1..tn]`.
//!
//! After step `k` every remaining entry equals a `(k+1) x (k+1)` minor of the
//! (permuted) input, so each update divides exactly by the previous pivot and
//! all intermediate entries stay polynomials. The rank found this way is the
//! rank over the fraction field.

use crate::error::Result;
use crate::poly::{Char, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    nvars: usize,
    ch: Char,
    ncols: usize,
    rows: Vec<Vec<Poly>>,
}

/// Outcome of a full-pivoting elimination.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    /// Original row index of the k-th pivot (first `rank` entries), then the rest.
    pub row_order: Vec<usize>,
    /// Original column index of the k-th pivot, then the rest.
    pub col_order: Vec<usize>,
    /// Last pivot, i.e. a maximal nonvanishing minor (1 when `rank == 0`).
    pub last_pivot: Poly,
    /// Parity of the row and column transpositions performed.
    pub odd_permutation: bool,
}

impl PolyMatrix {
    pub fn new(nvars: usize, ch: Char, ncols: usize, rows: Vec<Vec<Poly>>) -> PolyMatrix {
        for row in &rows {
            assert_eq!(row.len(), ncols, "ragged matrix");
            debug_assert!(row.iter().all(|p| p.nvars() == nvars && p.char() == ch));
        }
        PolyMatrix { nvars, ch, ncols, rows }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(nvars: usize, ch: Char, nrows: usize, cols: &[Vec<Poly>]) -> PolyMatrix {
        let rows = (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        PolyMatrix::new(nvars, ch, cols.len(), rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn eliminate(&self) -> Result<Elimination> {
        let (nr, nc) = (self.nrows(), self.ncols);
        let mut a = self.rows.clone();
        let mut row_order: Vec<usize> = (0..nr).collect();
        let mut col_order: Vec<usize> = (0..nc).collect();
        let mut prev = Poly::one(self.nvars, self.ch);
        let mut odd = false;
        let mut rank = 0;
        for k in 0..nr.min(nc) {
            // Cheapest pivot: fewest terms, then lowest degree.
            let pivot = (k..nr)
                .flat_map(|i| (k..nc).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| (a[i][j].len(), a[i][j].max_total_degree(), i, j));
            let Some((pi, pj)) = pivot else { break };
            if pi != k {
                a.swap(pi, k);
                row_order.swap(pi, k);
                odd = !odd;
            }
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(pj, k);
                }
                col_order.swap(pj, k);
                odd = !odd;
            }
            let (top, bottom) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in bottom.iter_mut() {
                let lead = std::mem::replace(&mut row[k], Poly::zero(self.nvars, self.ch));
                for j in k + 1..nc {
                    let mut v = &pivot_row[k] * &row[j];
                    if !lead.is_zero() && !pivot_row[j].is_zero() {
                        v = &v - &(&lead * &pivot_row[j]);
                    }
                    row[j] = if prev.is_one() { v } else { v.div_exact(&prev)? };
                }
            }
            prev = a[k][k].clone();
            rank += 1;
        }
        Ok(Elimination { rank, row_order, col_order, last_pivot: prev, odd_permutation: odd })
    }

    /// Rank over the fraction field. A row or column with a single nonzero
    /// entry adds exactly one to the rank and is removed together with its
    /// partner; what remains is split into independent blocks (connected
    /// components of the nonzero pattern), each eliminated on its own.
    pub fn rank(&self) -> Result<usize> {
        let (nr, nc) = (self.nrows(), self.ncols);
        let mut row_alive = vec![true; nr];
        let mut col_alive = vec![true; nc];
        let mut rank = 0;
        let nz = |i: usize, j: usize| !self.rows[i][j].is_zero();
        loop {
            let mut changed = false;
            for j in 0..nc {
                if !col_alive[j] {
                    continue;
                }
                let hits: Vec<usize> = (0..nr).filter(|&i| row_alive[i] && nz(i, j)).take(2).collect();
                if hits.len() <= 1 {
                    col_alive[j] = false;
                    if let [i] = hits[..] {
                        row_alive[i] = false;
                        rank += 1;
                    }
                    changed = true;
                }
            }
            for i in 0..nr {
                if !row_alive[i] {
                    continue;
                }
                let hits: Vec<usize> = (0..nc).filter(|&j| col_alive[j] && nz(i, j)).take(2).collect();
                if hits.len() <= 1 {
                    row_alive[i] = false;
                    if let [j] = hits[..] {
                        col_alive[j] = false;
                        rank += 1;
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        // union-find over rows 0..nr and columns nr..nr+nc
        let mut parent: Vec<usize> = (0..nr + nc).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for i in (0..nr).filter(|&i| row_alive[i]) {
            for j in (0..nc).filter(|&j| col_alive[j] && nz(i, j)) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, nr + j));
                parent[a] = b;
            }
        }
        let mut blocks: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
        for i in (0..nr).filter(|&i| row_alive[i]) {
            blocks.entry(find(&mut parent, i)).or_default().0.push(i);
        }
        for j in (0..nc).filter(|&j| col_alive[j]) {
            blocks.entry(find(&mut parent, nr + j)).or_default().1.push(j);
        }
        for (rows, cols) in blocks.values() {
            let sub = rows.iter().map(|&i| cols.iter().map(|&j| self.rows[i][j].clone()).collect()).collect();
            rank += PolyMatrix::new(self.nvars, self.ch, cols.len(), sub).eliminate()?.rank;
        }
        Ok(rank)
    }

    pub fn determinant(&self) -> Result<Poly> {
        assert_eq!(self.nrows(), self.ncols, "determinant of a non-square matrix");
        let e = self.eliminate()?;
        if e.rank < self.ncols {
            return Ok(Poly::zero(self.nvars, self.ch));
        }
        Ok(if e.odd_permutation { -&e.last_pivot } else { e.last_pivot })
    }

    /// A nonzero polynomial vector `x` with `A x = 0`, or `None` when the
    /// columns are independent over the fraction field. Built by Cramer's
    /// rule on a maximal nonvanishing minor, so every entry is a minor of `A`.
    pub fn kernel_vector(&self) -> Result<Option<Vec<Poly>>> {
        let e = self.eliminate()?;
        if e.rank == self.ncols {
            return Ok(None);
        }
        let zero = Poly::zero(self.nvars, self.ch);
        let mut x = vec![zero.clone(); self.ncols];
        // Zero columns give unit witnesses directly.
        if let Some(j) = (0..self.ncols).find(|&j| self.rows.iter().all(|r| r[j].is_zero())) {
            x[j] = Poly::one(self.nvars, self.ch);
            return Ok(Some(x));
        }
        let prows = &e.row_order[..e.rank];
        let pcols = &e.col_order[..e.rank];
        let free = e.col_order[e.rank];
        let square = |cols: &[usize]| -> PolyMatrix {
            let rows = prows.iter().map(|&i| cols.iter().map(|&j| self.rows[i][j].clone()).collect()).collect();
            PolyMatrix::new(self.nvars, self.ch, cols.len(), rows)
        };
        x[free] = square(pcols).determinant()?;
        for (k, &c) in pcols.iter().enumerate() {
            let mut cols = pcols.to_vec();
            cols[k] = free;
            x[c] = -&square(&cols).determinant()?;
        }
        Ok(Some(x))
    }

    pub fn apply(&self, x: &[Poly]) -> Vec<Poly> {
        self.rows
            .iter()
            .map(|row| {
                row.iter().zip(x).fold(Poly::zero(self.nvars, self.ch), |acc, (a, b)| {
                    if a.is_zero() || b.is_zero() {
                        acc
                    } else {
                        &acc + &(a * b)
                    }
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[&str]], n: usize, ch: Char) -> PolyMatrix {
        let ncols = rows.first().map_or(0, |r| r.len());
        PolyMatrix::new(
            n,
            ch,
            ncols,
            rows.iter().map(|r| r.iter().map(|s| Poly::parse(s, n, ch).unwrap()).collect()).collect(),
        )
    }

    #[test]
    fn determinant_of_symbolic_2x2() {
        let m = mat(&[&["t1", "t2"], &["t2", "t1"]], 2, Char::Zero);
        assert_eq!(m.determinant().unwrap(), Poly::parse("t1^2 - t2^2", 2, Char::Zero).unwrap());
        let m = mat(&[&["t1", "t2"], &["t2", "t1"]], 2, Char::Two);
        assert_eq!(m.determinant().unwrap(), Poly::parse("t1^2 + t2^2", 2, Char::Two).unwrap());
    }

    #[test]
    fn determinant_3x3_matches_expansion() {
        let m = mat(
            &[&["t1", "1", "t2"], &["0", "t2", "1"], &["t1*t2", "t1", "0"]],
            2,
            Char::Zero,
        );
        // cofactor expansion along the first row
        let expected = Poly::parse("-t1^2 + t1*t2 - t1*t2^3", 2, Char::Zero).unwrap();
        assert_eq!(m.determinant().unwrap(), expected);
    }

    #[test]
    fn rank_over_fraction_field() {
        // second row is t1 times the first
        let m = mat(&[&["1", "t2"], &["t1", "t1*t2"], &["0", "0"]], 2, Char::Zero);
        assert_eq!(m.rank().unwrap(), 1);
        let v = m.kernel_vector().unwrap().unwrap();
        assert!(m.apply(&v).iter().all(Poly::is_zero));
        assert!(v.iter().any(|p| !p.is_zero()));
    }

    #[test]
    fn zero_column_gives_unit_witness() {
        let m = mat(&[&["t1", "0"], &["1", "0"]], 1, Char::Zero);
        let v = m.kernel_vector().unwrap().unwrap();
        assert!(v[0].is_zero() && v[1].is_one());
    }

    #[test]
    fn full_column_rank_has_no_witness() {
        let m = mat(&[&["t1", "0"], &["0", "t2"], &["1", "1"]], 2, Char::Two);
        assert_eq!(m.rank().unwrap(), 2);
        assert_eq!(m.kernel_vector().unwrap(), None);
    }

    #[test]
    fn structural_reduction_preserves_rank() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for trial in 0..200 {
            let ch = if trial % 2 == 0 { Char::Zero } else { Char::Two };
            let (nr, nc) = (rng.random_range(1..7), rng.random_range(1..7));
            let rows = (0..nr)
                .map(|_| {
                    (0..nc)
                        .map(|_| {
                            if rng.random_bool(0.6) {
                                Poly::zero(2, ch)
                            } else {
                                crate::sampling::random_poly(2, ch, 2, 2, &mut rng)
                            }
                        })
                        .collect()
                })
                .collect();
            let m = PolyMatrix::new(2, ch, nc, rows);
            assert_eq!(m.rank().unwrap(), m.eliminate().unwrap().rank, "{m:?}");
        }
    }
}
