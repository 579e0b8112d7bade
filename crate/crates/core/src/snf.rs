//! Smith normal form over the integers, with an optional right transform
//! for computing classes in the quotient `Z^k / rowspan`.

use num::{Signed, Zero};

use crate::rat::Int;

/// Result of a Smith normal form computation on an `m x k` matrix `A`.
///
/// `diag` holds the diagonal `d_1 | d_2 | ...` (length `min(m, k)`, possibly
/// with trailing zeros). When requested, `right` is the accumulated
/// unimodular column transform `V` with `U A V = D`; the quotient
/// `Z^k / rowspan(A)` is then `x -> (x V) mod diag` componentwise.
#[derive(Debug, Clone)]
pub struct Snf {
    pub diag: Vec<Int>,
    pub cols: usize,
    pub right: Option<Vec<Vec<Int>>>,
}

impl Snf {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors > 1 (the torsion part of the cokernel).
    pub fn torsion(&self) -> Vec<Int> {
        self.diag.iter().filter(|d| d.abs() > Int::from(1)).cloned().collect()
    }

    /// Free rank of the cokernel `Z^cols / rowspan`.
    pub fn free_rank(&self) -> usize {
        self.cols - self.rank()
    }

    /// Class of a row vector in the cokernel: `(x V) mod d_i` per coordinate
    /// (coordinates past the diagonal keep their exact value; they correspond
    /// to free directions). Panics if the transform was not requested.
    pub fn class_of(&self, x: &[Int]) -> Vec<Int> {
        use num::Integer;
        let v = self.right.as_ref().expect("snf computed without right transform");
        assert_eq!(x.len(), self.cols);
        (0..self.cols)
            .map(|j| {
                let mut s = Int::zero();
                for (i, xi) in x.iter().enumerate() {
                    s += xi * &v[i][j];
                }
                match self.diag.get(j) {
                    Some(d) if !d.is_zero() => s.mod_floor(d),
                    _ => s,
                }
            })
            .collect()
    }
}

/// Order of the subgroup generated by residue vectors in the product of
/// cyclic groups `Z/d_i` (a `d_i` of zero means a free `Z` direction, which
/// makes the closure infinite; callers only use this on finite quotients).
pub fn closure_order(moduli: &[Int], gens: &[Vec<Int>]) -> u64 {
    use num::Integer;
    use std::collections::{BTreeSet, VecDeque};
    let width = gens.first().map(|g| g.len()).unwrap_or(moduli.len());
    let reduce = |v: Vec<Int>| -> Vec<Int> {
        v.into_iter()
            .enumerate()
            .map(|(j, x)| match moduli.get(j) {
                Some(d) if !d.is_zero() => x.mod_floor(d),
                _ => x,
            })
            .collect()
    };
    let zero = vec![Int::zero(); width];
    let mut seen: BTreeSet<Vec<Int>> = BTreeSet::from([zero.clone()]);
    let mut queue: VecDeque<Vec<Int>> = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for g in gens {
            let w = reduce(v.iter().zip(g).map(|(a, b)| a + b).collect());
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    seen.len() as u64
}

/// Compute the Smith normal form of `mat` (rows of equal length `cols`).
pub fn smith_normal_form(mat: &[Vec<Int>], cols: usize, want_right: bool) -> Snf {
    let m = mat.len();
    let mut a: Vec<Vec<Int>> = mat.to_vec();
    for row in &a {
        assert_eq!(row.len(), cols);
    }
    let mut v: Option<Vec<Vec<Int>>> = want_right.then(|| {
        (0..cols)
            .map(|i| (0..cols).map(|j| Int::from((i == j) as i32)).collect())
            .collect()
    });

    let steps = m.min(cols);
    let mut k = 0;
    while k < steps {
        // Find the entry of minimal nonzero magnitude in the trailing block.
        let pivot = {
            let mut best: Option<(usize, usize)> = None;
            for i in k..m {
                for j in k..cols {
                    if !a[i][j].is_zero()
                        && best
                            .map(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                            .unwrap_or(true)
                    {
                        best = Some((i, j));
                    }
                }
            }
            best
        };
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        swap_cols(&mut a, &mut v, k, pj);

        // Clear the pivot row and column; restart whenever a remainder
        // becomes the new smallest entry.
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in k + 1..m {
                if !a[i][k].is_zero() {
                    let q = div_round(&a[i][k], &a[k][k]);
                    for j in k..cols {
                        let t = &a[k][j] * &q;
                        a[i][j] -= t;
                    }
                    if !a[i][k].is_zero() {
                        a.swap(k, i);
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !a[k][j].is_zero() {
                    let q = div_round(&a[k][j], &a[k][k]);
                    col_sub(&mut a, &mut v, j, k, &q);
                    if !a[k][j].is_zero() {
                        swap_cols(&mut a, &mut v, k, j);
                        dirty = true;
                    }
                }
            }
        }

        // Enforce divisibility of the trailing block by the pivot.
        let mut fixed = false;
        'scan: for i in k + 1..m {
            for j in k + 1..cols {
                if !(&a[i][j] % &a[k][k]).is_zero() {
                    // fold column j into column k and redo this step
                    col_add(&mut a, &mut v, k, j);
                    fixed = true;
                    break 'scan;
                }
            }
        }
        if fixed {
            continue;
        }
        if a[k][k].is_negative() {
            for j in k..cols {
                a[k][j] = -a[k][j].clone();
            }
        }
        k += 1;
    }

    let diag = (0..steps).map(|i| a[i][i].clone()).collect();
    Snf { diag, cols, right: v }
}

fn swap_cols(a: &mut [Vec<Int>], v: &mut Option<Vec<Vec<Int>>>, j1: usize, j2: usize) {
    if j1 == j2 {
        return;
    }
    for row in a.iter_mut() {
        row.swap(j1, j2);
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            row.swap(j1, j2);
        }
    }
}

/// col_j -= q * col_src
fn col_sub(a: &mut [Vec<Int>], v: &mut Option<Vec<Vec<Int>>>, j: usize, src: usize, q: &Int) {
    for row in a.iter_mut() {
        let t = &row[src] * q;
        row[j] -= t;
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            let t = &row[src] * q;
            row[j] -= t;
        }
    }
}

/// col_dst += col_src
fn col_add(a: &mut [Vec<Int>], v: &mut Option<Vec<Vec<Int>>>, dst: usize, src: usize) {
    for row in a.iter_mut() {
        let t = row[src].clone();
        row[dst] += t;
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            let t = row[src].clone();
            row[dst] += t;
        }
    }
}

/// Quotient rounded toward the nearest integer (keeps remainders small).
fn div_round(a: &Int, b: &Int) -> Int {
    use num::Integer;
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * Int::from(2);
    if two_r > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
