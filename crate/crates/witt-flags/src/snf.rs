//! Exact integer linear algebra: Smith normal form with a right transform,
//! integer kernels, and dimensions of elementary-2 quotient groups.
//! All arithmetic is `i128`; debug builds keep overflow checks on.

use num_rational::Ratio;

pub type Int = i128;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    pub nrows: usize,
    pub ncols: usize,
    pub a: Vec<Vec<Int>>,
}

impl IntMat {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IntMat {
            nrows,
            ncols,
            a: vec![vec![0; ncols]; nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.a[i][i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols));
        IntMat {
            nrows,
            ncols,
            a: rows,
        }
    }

    pub fn from_cols(nrows: usize, cols: &[Vec<Int>]) -> Self {
        let mut m = IntMat::zero(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, &x) in col.iter().enumerate() {
                m.a[i][j] = x;
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<Int> {
        (0..self.nrows).map(|i| self.a[i][j]).collect()
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.ncols, other.nrows);
        let mut out = IntMat::zero(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let x = self.a[i][k];
                if x == 0 {
                    continue;
                }
                for j in 0..other.ncols {
                    out.a[i][j] += x * other.a[k][j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(self.ncols, v.len());
        self.a
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, &x)| a * x).sum())
            .collect()
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.a[i][j] += other.a[i][j];
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut out = self.clone();
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                out.a[i][j] -= other.a[i][j];
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|r| r.iter().all(|&x| x == 0))
    }
}

/// Smith normal form data: unimodular V with A·V ≡ U⁻¹·diag(d), d_i ≥ 0 and
/// d_i | d_{i+1}.  Only the right transform is kept; it is what kernel
/// extraction needs.
#[derive(Debug, Clone)]
pub struct Smith {
    pub d: Vec<Int>,
    pub v: IntMat,
}

pub fn smith(a: &IntMat) -> Smith {
    let mut m = a.clone();
    let mut v = IntMat::identity(a.ncols);
    let steps = a.nrows.min(a.ncols);
    for t in 0..steps {
        loop {
            // Pick the nonzero entry of smallest magnitude in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m.nrows {
                for j in t..m.ncols {
                    if m.a[i][j] != 0
                        && best.is_none_or(|(bi, bj)| m.a[i][j].abs() < m.a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.a.swap(t, pi);
            swap_cols(&mut m, t, pj);
            swap_cols(&mut v, t, pj);

            let mut dirty = false;
            let p = m.a[t][t];
            for i in t + 1..m.nrows {
                let q = div_round(m.a[i][t], p);
                if q != 0 {
                    for j in t..m.ncols {
                        m.a[i][j] -= q * m.a[t][j];
                    }
                }
                if m.a[i][t] != 0 {
                    dirty = true;
                }
            }
            let p = m.a[t][t];
            for j in t + 1..m.ncols {
                let q = div_round(m.a[t][j], p);
                if q != 0 {
                    add_col(&mut m, j, t, -q);
                    add_col(&mut v, j, t, -q);
                }
                if m.a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility: pivot must divide the whole trailing block.
            let p = m.a[t][t];
            let offender = (t + 1..m.nrows)
                .flat_map(|i| (t + 1..m.ncols).map(move |j| (i, j)))
                .find(|&(i, j)| m.a[i][j] % p != 0);
            match offender {
                None => break,
                Some((i, _)) => {
                    // Fold the offending row into row t and restart the step.
                    for j in t..m.ncols {
                        m.a[t][j] += m.a[i][j];
                    }
                }
            }
        }
        if m.a[t][t] < 0 {
            scale_col(&mut m, t, -1);
            scale_col(&mut v, t, -1);
        }
    }
    let d = (0..steps).map(|t| m.a[t][t]).collect();
    Smith { d, v }
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a != b {
        for row in &mut m.a {
            row.swap(a, b);
        }
    }
}

fn add_col(m: &mut IntMat, dst: usize, src: usize, factor: Int) {
    for row in &mut m.a {
        row[dst] += factor * row[src];
    }
}

fn scale_col(m: &mut IntMat, j: usize, factor: Int) {
    for row in &mut m.a {
        row[j] *= factor;
    }
}

/// Round-to-nearest division, keeping remainders at most |b|/2 so pivots
/// shrink geometrically.
fn div_round(a: Int, b: Int) -> Int {
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Basis of the right kernel { x : A·x = 0 }, as vectors of length `ncols`.
pub fn kernel(a: &IntMat) -> Vec<Vec<Int>> {
    let s = smith(a);
    let mut out = Vec::new();
    for j in 0..a.ncols {
        if j >= s.d.len() || s.d[j] == 0 {
            out.push(s.v.col(j));
        }
    }
    out
}

/// dim of ker/img as an F₂-vector space, where `ker` is a lattice basis and
/// `img` generates a sublattice with 2·ker ⊆ img ⊆ ker.  Panics when those
/// containments fail — callers only pass (S∓I)-kernels and (S±I)-images,
/// which satisfy them for any involution S.
pub fn elementary_two_quotient(ker: &[Vec<Int>], img: &[Vec<Int>]) -> usize {
    let k = ker.len();
    if k == 0 {
        return 0;
    }
    let n = ker[0].len();
    let kmat = IntMat::from_cols(n, ker);
    let nonzero_img: Vec<Vec<Int>> = img
        .iter()
        .filter(|v| v.iter().any(|&x| x != 0))
        .cloned()
        .collect();
    let y = solve_exact(&kmat, &nonzero_img);
    let s = smith(&y);
    assert_eq!(s.d.len().min(y.ncols.min(y.nrows)), s.d.len());
    let twos = s.d.iter().filter(|&&d| d == 2).count();
    let ones = s.d.iter().filter(|&&d| d == 1).count();
    assert_eq!(
        ones + twos,
        k,
        "quotient by the image is not an elementary 2-group"
    );
    twos
}

/// Solve K·Y = B column by column over ℚ and assert the result is integral.
/// K must have full column rank.
fn solve_exact(kmat: &IntMat, b_cols: &[Vec<Int>]) -> IntMat {
    type Q = Ratio<Int>;
    let n = kmat.nrows;
    let k = kmat.ncols;
    let m = b_cols.len();
    // Augmented rational elimination [K | B].
    let mut aug: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row: Vec<Q> = kmat.a[i].iter().map(|&x| Q::from_integer(x)).collect();
            row.extend(b_cols.iter().map(|c| Q::from_integer(c[i])));
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| aug[i][c] != Q::from_integer(0)) else {
            panic!("kernel basis matrix is column-rank-deficient");
        };
        aug.swap(r, p);
        let inv = aug[r][c];
        for x in &mut aug[r] {
            *x /= inv;
        }
        for i in 0..n {
            if i != r && aug[i][c] != Q::from_integer(0) {
                let f = aug[i][c];
                for j in 0..k + m {
                    let sub = f * aug[r][j];
                    aug[i][j] -= sub;
                }
            }
        }
        pivot_rows.push(r);
        r += 1;
    }
    // Rows beyond the pivots must be consistent (B inside the column span).
    for row in aug.iter().skip(r) {
        for (j, x) in row.iter().enumerate().skip(k) {
            assert!(
                *x == Q::from_integer(0),
                "image generator {} outside the kernel lattice span",
                j - k
            );
        }
    }
    let mut y = IntMat::zero(k, m);
    for (c, &pr) in pivot_rows.iter().enumerate() {
        for j in 0..m {
            let q = aug[pr][k + j];
            assert!(q.is_integer(), "image not contained in the kernel lattice");
            y.a[c][j] = q.to_integer();
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn smith_small() {
        let a = IntMat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let s = smith(&a);
        assert_eq!(s.d, vec![2, 4]);

        let a = IntMat::from_rows(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(smith(&a).d, vec![1, 1]);

        let a = IntMat::from_rows(vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(smith(&a).d, vec![0, 0]);
    }

    #[test]
    fn kernel_small() {
        let a = IntMat::from_rows(vec![vec![1, 1, 0]]);
        let ker = kernel(&a);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert_eq!(a.mul_vec(v), vec![0]);
        }
        let a = IntMat::identity(3);
        assert!(kernel(&a).is_empty());
    }

    #[test]
    fn quotient_dims() {
        let e1 = vec![1, 0];
        let e2 = vec![0, 1];
        let ker = vec![e1.clone(), e2.clone()];
        assert_eq!(
            elementary_two_quotient(&ker, &[vec![2, 0], vec![0, 1]]),
            1
        );
        assert_eq!(
            elementary_two_quotient(&ker, &[vec![2, 0], vec![0, 2]]),
            2
        );
        // Index-2 sublattice spanned by (1,1) and (0,2).
        assert_eq!(
            elementary_two_quotient(&ker, &[vec![1, 1], vec![0, 2]]),
            1
        );
        assert_eq!(elementary_two_quotient(&[], &[]), 0);
    }

    fn arb_mat() -> impl Strategy<Value = IntMat> {
        (1usize..5, 1usize..5).prop_flat_map(|(nr, nc)| {
            proptest::collection::vec(proptest::collection::vec(-6i128..7, nc), nr)
                .prop_map(IntMat::from_rows)
        })
    }

    proptest! {
        #[test]
        fn smith_invariants(a in arb_mat()) {
            let s = smith(&a);
            // Divisibility chain and nonnegativity.
            for w in s.d.windows(2) {
                prop_assert!(w[0] >= 0);
                if w[0] != 0 {
                    prop_assert_eq!(w[1] % w[0], 0);
                } else {
                    prop_assert_eq!(w[1], 0);
                }
            }
            // V is unimodular.
            let det = rational_det(&s.v);
            prop_assert!(det == 1 || det == -1);
            // Kernel vectors are solutions and there are ncols − rank of them.
            let ker = kernel(&a);
            let rank = s.d.iter().filter(|&&d| d != 0).count();
            prop_assert_eq!(ker.len(), a.ncols - rank);
            for v in &ker {
                prop_assert!(a.mul_vec(v).iter().all(|&x| x == 0));
            }
        }
    }

    fn rational_det(m: &IntMat) -> i128 {
        type Q = Ratio<i128>;
        let n = m.nrows;
        let mut a: Vec<Vec<Q>> = m
            .a
            .iter()
            .map(|r| r.iter().map(|&x| Q::from_integer(x)).collect())
            .collect();
        let mut det = Q::from_integer(1);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| a[i][c] != Q::from_integer(0)) else {
                return 0;
            };
            if p != c {
                a.swap(c, p);
                det = -det;
            }
            det *= a[c][c];
            let inv = a[c][c];
            for i in c + 1..n {
                if a[i][c] != Q::from_integer(0) {
                    let f = a[i][c] / inv;
                    for j in c..n {
                        let sub = f * a[c][j];
                        a[i][j] -= sub;
                    }
                }
            }
        }
        assert!(det.is_integer());
        det.to_integer()
    }
}
