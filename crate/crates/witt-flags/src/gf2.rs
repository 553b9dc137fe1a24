//! Linear algebra over GF(2) with bit-packed rows.  Everything here operates
//! on diagram-sized data (≤ 64 columns), so a row is a single `u64`.

/// Vector over GF(2): bit `j` is coordinate `j`.
pub type F2Vec = u64;

pub fn from_indices(idx: &[usize]) -> F2Vec {
    idx.iter().fold(0, |v, &i| v | (1 << i))
}

pub fn support(v: F2Vec) -> Vec<usize> {
    (0..64).filter(|&i| v >> i & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Matrix {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        assert!(ncols <= 64, "F2Matrix capped at 64 columns");
        F2Matrix {
            nrows,
            ncols,
            rows: vec![0; nrows],
        }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = F2Matrix::new(rows.len(), ncols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols);
            for (j, &x) in row.iter().enumerate() {
                if x.rem_euclid(2) == 1 {
                    m.set(i, j);
                }
            }
        }
        m
    }

    /// Build from columns (each a bit-vector over row indices).
    pub fn from_cols(nrows: usize, cols: &[F2Vec]) -> Self {
        let mut m = F2Matrix::new(nrows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for i in 0..nrows {
                if c >> i & 1 == 1 {
                    m.set(i, j);
                }
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i] |= 1 << j;
    }

    pub fn mul_vec(&self, v: F2Vec) -> F2Vec {
        let mut out = 0;
        for (i, &row) in self.rows.iter().enumerate() {
            out |= (((row & v).count_ones() as u64) & 1) << i;
        }
        out
    }

    /// Row-reduce in place; returns the pivot column of each non-zero row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if let Some(p) = (r..self.nrows).find(|&i| self.get(i, c)) {
                self.rows.swap(r, p);
                for i in 0..self.nrows {
                    if i != r && self.get(i, c) {
                        self.rows[i] ^= self.rows[r];
                    }
                }
                pivots.push(c);
                r += 1;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Right kernel as a canonical subspace.
    pub fn nullspace(&self) -> F2Subspace {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v: F2Vec = 1 << f;
            for (r, &p) in pivots.iter().enumerate() {
                if m.get(r, f) {
                    v |= 1 << p;
                }
            }
            basis.push(v);
        }
        F2Subspace::from_vectors(self.ncols, &basis)
    }

    /// One solution of `self · x = b` with all free variables zero, if any.
    pub fn solve(&self, b: F2Vec) -> Option<F2Vec> {
        let mut m = self.clone();
        let mut rhs = b;
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut r = 0;
        for c in 0..self.ncols {
            if let Some(p) = (r..self.nrows).find(|&i| m.get(i, c)) {
                m.rows.swap(r, p);
                let br = rhs >> r & 1;
                let bp = rhs >> p & 1;
                rhs = rhs & !(1 << r) & !(1 << p) | (bp << r) | (br << p);
                for i in 0..self.nrows {
                    if i != r && m.get(i, c) {
                        m.rows[i] ^= m.rows[r];
                        rhs ^= (rhs >> r & 1) << i;
                    }
                }
                pivots.push((r, c));
                r += 1;
            }
        }
        // Inconsistent if a zero row has RHS 1.
        for i in r..self.nrows {
            if rhs >> i & 1 == 1 {
                return None;
            }
        }
        let mut x = 0;
        for &(row, col) in &pivots {
            x |= (rhs >> row & 1) << col;
        }
        Some(x)
    }
}

/// Subspace of GF(2)^n held as a reduced-row-echelon basis, so equal
/// subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct F2Subspace {
    pub ncols: usize,
    pub basis: Vec<F2Vec>,
}

impl F2Subspace {
    pub fn zero(ncols: usize) -> Self {
        F2Subspace {
            ncols,
            basis: Vec::new(),
        }
    }

    pub fn from_vectors(ncols: usize, vecs: &[F2Vec]) -> Self {
        let mut m = F2Matrix {
            nrows: vecs.len(),
            ncols,
            rows: vecs.to_vec(),
        };
        let pivots = m.rref();
        let basis = m.rows[..pivots.len()].to_vec();
        F2Subspace { ncols, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: F2Vec) -> bool {
        let mut w = v;
        for &b in &self.basis {
            let lead = b.trailing_zeros();
            if w >> lead & 1 == 1 {
                w ^= b;
            }
        }
        w == 0
    }

    pub fn is_subspace_of(&self, other: &F2Subspace) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }

    /// All 2^dim elements; dims here never exceed diagram rank.
    pub fn elements(&self) -> Vec<F2Vec> {
        let mut out = vec![0];
        for &b in &self.basis {
            let mut more: Vec<F2Vec> = out.iter().map(|&v| v ^ b).collect();
            out.append(&mut more);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn solve_and_nullspace_tiny() {
        // x₁ + x₂ = 1, x₂ = 1 over GF(2).
        let m = F2Matrix::from_int_rows(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(m.solve(0b11), Some(0b10));
        assert_eq!(m.nullspace().dim(), 0);

        // Singular system: x₁ + x₂ = 1 twice; kernel = span{(1,1)}.
        let m = F2Matrix::from_int_rows(&[vec![1, 1], vec![1, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.dim(), 1);
        assert!(ns.contains(0b11));
        assert_eq!(m.solve(0b01), None); // rows demand 1 and 0
        assert_eq!(m.solve(0b11), Some(0b01));
    }

    #[test]
    fn canonical_subspaces_compare_equal() {
        let a = F2Subspace::from_vectors(3, &[0b011, 0b110]);
        let b = F2Subspace::from_vectors(3, &[0b101, 0b011]);
        assert_eq!(a, b);
        assert_eq!(a.elements().len(), 4);
    }

    fn arb_matrix() -> impl Strategy<Value = F2Matrix> {
        (1usize..7, 1usize..7).prop_flat_map(|(nr, nc)| {
            proptest::collection::vec(0u64..(1 << nc), nr)
                .prop_map(move |rows| F2Matrix { nrows: nr, ncols: nc, rows })
        })
    }

    proptest! {
        #[test]
        fn nullspace_vectors_are_solutions(m in arb_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(ns.dim() + m.rank(), m.ncols);
            for v in ns.elements() {
                prop_assert_eq!(m.mul_vec(v), 0);
            }
        }

        #[test]
        fn solve_finds_constructed_solutions(m in arb_matrix(), x in 0u64..64) {
            let x = x & ((1 << m.ncols) - 1);
            let b = m.mul_vec(x);
            let got = m.solve(b).expect("constructed system must be solvable");
            prop_assert_eq!(m.mul_vec(got), b);
            // Any two solutions differ by a kernel element.
            prop_assert!(m.nullspace().contains(got ^ x));
        }

        #[test]
        fn membership_closed_under_addition(m in arb_matrix()) {
            let ns = m.nullspace();
            let els = ns.elements();
            for &a in &els {
                for &b in &els {
                    prop_assert!(ns.contains(a ^ b));
                }
            }
        }
    }
}
