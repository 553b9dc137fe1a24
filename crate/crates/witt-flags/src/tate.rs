//! Tate cohomology of the twisted representation ring.
//!
//! The ring is A = ℤ[γ, γ′, μ, x^±]: one γ-pair per dual pair of Θ-nodes,
//! one μ per self-dual Θ-node, one invertible x per white node.  The duality
//! ★ sends γ ↦ γ′·x^{m}, μ_j ↦ μ_j·x^{m^j}, x ↦ x^{−1}; the twisted duality
//! ★_t multiplies by x^t.  Vanishing of the twisted Witt group is exactly
//! unsolvability of M̄·j̄ = t̄ over GF(2).
//!
//! `InvolutiveZModule` lives here too: finite-rank ℤ-modules with an
//! involution, whose Tate groups h± are computed by exact integer linear
//! algebra.  They provide the independent K-theory oracle.

use crate::dynkin::{DynkinDiagram, ParabolicSubset};
use crate::gf2::F2Vec;
use crate::snf::{elementary_two_quotient, kernel, Int, IntMat};
use crate::twists::{self, TwistMatrix};
use crate::weyl::circ_in_theta;
use crate::Result;

/// Dual pair of Θ-nodes ϑ ≠ ϑ°, with the shared twist vector m^ϑ = m^{ϑ°}.
#[derive(Debug, Clone)]
pub struct GammaPair {
    pub first: usize,
    pub second: usize,
    pub twist: Vec<i64>,
}

/// The twisted polynomial model of the representation ring of P.
#[derive(Debug, Clone)]
pub struct TwistedPolyRing {
    pub white: Vec<usize>,
    pub pairs: Vec<GammaPair>,
    pub matrix: TwistMatrix,
}

impl TwistedPolyRing {
    pub fn from_parabolic(d: &DynkinDiagram, p: &ParabolicSubset) -> Result<Self> {
        let matrix = twists::self_dual_twist_matrix(d, p)?;
        let mut pairs = Vec::new();
        for &t in &p.theta {
            let dual = circ_in_theta(p, t);
            if t < dual {
                pairs.push(GammaPair {
                    first: t,
                    second: dual,
                    twist: twists::twist_vector(d, p, t)?,
                });
            }
        }
        Ok(TwistedPolyRing {
            white: p.white.clone(),
            pairs,
            matrix,
        })
    }
}

/// Monomial μ^j·x^k of the self-dual subring; μ-exponents are listed in the
/// order of `TwistMatrix::self_dual`, x-exponents in white-node order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub mu: Vec<i64>,
    pub x: Vec<i64>,
}

impl Monomial {
    pub fn one(self_dual: usize, white: usize) -> Self {
        Monomial {
            mu: vec![0; self_dual],
            x: vec![0; white],
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            mu: self.mu.iter().zip(&other.mu).map(|(a, b)| a + b).collect(),
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
        }
    }

    /// ★_t(μ^j x^k) = μ^j x^{Mj − k + t}.
    pub fn star(&self, m: &TwistMatrix, t: &[i64]) -> Monomial {
        let mj = m.apply(&self.mu);
        Monomial {
            mu: self.mu.clone(),
            x: mj
                .iter()
                .zip(&self.x)
                .zip(t)
                .map(|((mj, k), t)| mj - k + t)
                .collect(),
        }
    }

    pub fn is_fixed(&self, m: &TwistMatrix, t: &[i64]) -> bool {
        self.star(m, t) == *self
    }
}

/// t̄ as a bit vector over white nodes.
pub fn twist_residue(m: &TwistMatrix, t: &[i64]) -> F2Vec {
    assert_eq!(t.len(), m.white.len());
    t.iter()
        .enumerate()
        .fold(0, |v, (i, &x)| v | ((x.rem_euclid(2) as u64) << i))
}

/// A solution j̄ of M̄·j̄ = t̄ (free variables zeroed), if one exists.
pub fn twist_solution(m: &TwistMatrix, t: &[i64]) -> Option<F2Vec> {
    m.f2().solve(twist_residue(m, t))
}

/// The twisted Witt group W^t vanishes iff M̄·j̄ = t̄ has no solution.
pub fn vanishes(m: &TwistMatrix, t: &[i64]) -> bool {
    twist_solution(m, t).is_none()
}

/// 0/1 integer lift of a GF(2) class.
pub fn minimal_lift(bits: F2Vec, n: usize) -> Vec<i64> {
    (0..n).map(|i| (bits >> i & 1) as i64).collect()
}

/// ζ_t = μ^{j₀}·x^{(M·j₀+t)/2} for the distinguished solution j₀, the minimal
/// ★_t-fixed monomial witnessing non-vanishing.
pub fn zeta(m: &TwistMatrix, t: &[i64]) -> Option<Monomial> {
    let j0 = twist_solution(m, t)?;
    let lift = minimal_lift(j0, m.self_dual.len());
    let mj = m.apply(&lift);
    let x: Vec<i64> = mj
        .iter()
        .zip(t)
        .map(|(mj, t)| {
            assert_eq!((mj + t).rem_euclid(2), 0, "solution lift with odd twist");
            (mj + t) / 2
        })
        .collect();
    let z = Monomial { mu: lift, x };
    assert!(z.is_fixed(m, t), "zeta must be a fixed monomial");
    Some(z)
}

/// Whenever ζ_{t₁} and ζ_{t₂} both exist, their product must be a valid
/// witness for t₁+t₂: ★_{t₁+t₂}-fixed, with μ-parity in the solution class
/// of the re-solved system.
pub fn zeta_product_valid(m: &TwistMatrix, t1: &[i64], t2: &[i64]) -> bool {
    let (Some(z1), Some(z2)) = (zeta(m, t1), zeta(m, t2)) else {
        return true;
    };
    let t12: Vec<i64> = t1.iter().zip(t2).map(|(a, b)| a + b).collect();
    let prod = z1.mul(&z2);
    if !prod.is_fixed(m, &t12) {
        return false;
    }
    let Some(j0) = twist_solution(m, &t12) else {
        return false;
    };
    let jprod = prod
        .mu
        .iter()
        .enumerate()
        .fold(0u64, |v, (i, &e)| v | ((e.rem_euclid(2) as u64) << i));
    m.f2().nullspace().contains(jprod ^ j0)
}

/// All ★_t-fixed monomials μ^j·x^k with 0 ≤ j_i ≤ `dmax` and |k_β| ≤ `emax`,
/// sorted.  Pure enumeration — the oracle side of the structure theorem.
pub fn brute_fixed_monomials(
    m: &TwistMatrix,
    t: &[i64],
    dmax: i64,
    emax: i64,
) -> Vec<Monomial> {
    let s = m.self_dual.len();
    let mut out = Vec::new();
    let mut j = vec![0i64; s];
    loop {
        let mj = m.apply(&j);
        let even = mj.iter().zip(t).all(|(mj, t)| (mj + t) % 2 == 0);
        if even {
            let x: Vec<i64> = mj.iter().zip(t).map(|(mj, t)| (mj + t) / 2).collect();
            if x.iter().all(|k| k.abs() <= emax) {
                let mono = Monomial { mu: j.clone(), x };
                assert!(mono.is_fixed(m, t));
                out.push(mono);
            }
        }
        // Odometer over [0, dmax]^s.
        let mut i = 0;
        loop {
            if i == s {
                out.sort();
                return out;
            }
            j[i] += 1;
            if j[i] <= dmax {
                break;
            }
            j[i] = 0;
            i += 1;
        }
    }
}

/// ν generator: the fixed monomial μ^{û}·x^{M·û/2} attached to a nonzero
/// kernel class ū of M̄.  One per class, not per basis vector: with
/// basis-indexed generators alone, classes whose minimal lifts overlap a
/// chosen basis lift are not monomial products of the generators.
#[derive(Debug, Clone)]
pub struct NuGen {
    pub class: F2Vec,
    pub monomial: Monomial,
}

/// Multiplicative relation among presentation generators:
/// ν_u·ν_v = σ^{û∧v̂} (u = v) or ν_u·ν_v = ν_{u⊕v}·σ^{û∧v̂} (u ≠ v).
#[derive(Debug, Clone)]
pub struct Relation {
    pub u: usize,
    pub v: usize,
    pub rhs_nu: Option<usize>,
    pub rhs_sigma: Vec<i64>,
}

/// Generators and relations of h⁺(A, ★_t), with h⁻ = 0.
///
/// h⁺(A, ★) is the F₂-algebra on the γ-pair classes, the σ_j = μ_j²x^{m^j},
/// and the ν_u, modulo the listed relations; h⁺(A, ★_t) is the free module
/// on the ζ-classes {ζ·ν_u}, cut down to the single witness ζ here.
#[derive(Debug, Clone)]
pub struct TatePresentation {
    pub ring: TwistedPolyRing,
    pub twist: Vec<i64>,
    pub nu: Vec<NuGen>,
    pub relations: Vec<Relation>,
    pub zeta: Option<Monomial>,
}

/// σ^e as a monomial: μ^{2e}·x^{M·e}.
pub fn sigma_monomial(m: &TwistMatrix, exp: &[i64]) -> Monomial {
    Monomial {
        mu: exp.iter().map(|e| 2 * e).collect(),
        x: m.apply(exp),
    }
}

pub fn presentation(ring: &TwistedPolyRing, t: &[i64]) -> TatePresentation {
    let m = &ring.matrix;
    let s = m.self_dual.len();
    let zero_t = vec![0i64; m.white.len()];
    let classes: Vec<F2Vec> = m
        .f2()
        .nullspace()
        .elements()
        .into_iter()
        .filter(|&c| c != 0)
        .collect();
    let mut classes = classes;
    classes.sort_unstable();
    let nu: Vec<NuGen> = classes
        .iter()
        .map(|&c| {
            let lift = minimal_lift(c, s);
            let mj = m.apply(&lift);
            let x: Vec<i64> = mj
                .iter()
                .map(|mj| {
                    assert_eq!(mj % 2, 0);
                    mj / 2
                })
                .collect();
            let monomial = Monomial { mu: lift, x };
            assert!(monomial.is_fixed(m, &zero_t));
            NuGen { class: c, monomial }
        })
        .collect();
    let index_of = |c: F2Vec| classes.binary_search(&c).ok();
    let mut relations = Vec::new();
    for u in 0..nu.len() {
        for v in u..nu.len() {
            let cu = nu[u].class;
            let cv = nu[v].class;
            let and: Vec<i64> = minimal_lift(cu & cv, s);
            let rhs_nu = if u == v { None } else { Some(index_of(cu ^ cv).unwrap()) };
            // Symbolic check: the relation must hold monomial-for-monomial.
            let lhs = nu[u].monomial.mul(&nu[v].monomial);
            let mut rhs = sigma_monomial(m, &and);
            if let Some(w) = rhs_nu {
                rhs = rhs.mul(&nu[w].monomial);
            }
            assert_eq!(lhs, rhs, "presentation relation failed symbolically");
            relations.push(Relation {
                u,
                v,
                rhs_nu,
                rhs_sigma: and,
            });
        }
    }
    TatePresentation {
        ring: ring.clone(),
        twist: t.to_vec(),
        nu,
        relations,
        zeta: zeta(m, t),
    }
}

impl TatePresentation {
    /// The fixed monomials the presentation generates inside the same box as
    /// `brute_fixed_monomials`: every ★_t-fixed monomial factors uniquely as
    /// (minimal lift of its own μ-parity class) · σ^r with r ≥ 0, and the
    /// parity classes are exactly {ζ̄ ⊕ ū}.
    pub fn generated_fixed_monomials(&self, dmax: i64, emax: i64) -> Vec<Monomial> {
        let m = &self.ring.matrix;
        let s = m.self_dual.len();
        let Some(z) = &self.zeta else {
            return Vec::new();
        };
        let zbits: F2Vec = z
            .mu
            .iter()
            .enumerate()
            .fold(0, |v, (i, &e)| v | (((e & 1) as u64) << i));
        let mut out = Vec::new();
        let mut bases: Vec<F2Vec> = vec![zbits];
        bases.extend(self.nu.iter().map(|n| n.class ^ zbits));
        for cbits in bases {
            let lift = minimal_lift(cbits, s);
            if lift.iter().any(|&l| l > dmax) {
                continue;
            }
            // σ^r multiples staying inside the μ-box.
            let caps: Vec<i64> = lift.iter().map(|l| (dmax - l) / 2).collect();
            let mut r = vec![0i64; s];
            loop {
                let j: Vec<i64> = lift.iter().zip(&r).map(|(l, r)| l + 2 * r).collect();
                let mj = m.apply(&j);
                let x: Vec<i64> = mj
                    .iter()
                    .zip(&self.twist)
                    .map(|(mj, t)| (mj + t) / 2)
                    .collect();
                if x.iter().all(|k| k.abs() <= emax) {
                    out.push(Monomial { mu: j, x });
                }
                let mut i = 0;
                loop {
                    if i == s {
                        break;
                    }
                    r[i] += 1;
                    if r[i] <= caps[i] {
                        break;
                    }
                    r[i] = 0;
                    i += 1;
                }
                if i == s {
                    break;
                }
            }
        }
        out.sort();
        out
    }
}

/// Finite-rank ℤ-module with involution; Tate groups by exact linear algebra.
#[derive(Debug, Clone)]
pub struct InvolutiveZModule {
    pub rank: usize,
    pub s: IntMat,
    pub labels: Vec<String>,
}

impl InvolutiveZModule {
    pub fn new(s: IntMat, labels: Vec<String>) -> Self {
        assert_eq!(s.nrows, s.ncols);
        let rank = s.nrows;
        assert_eq!(labels.len(), rank);
        assert!(
            s.mul(&s) == IntMat::identity(rank),
            "involution must square to the identity"
        );
        InvolutiveZModule { rank, s, labels }
    }

    pub fn trivial_plus() -> Self {
        InvolutiveZModule::new(IntMat::identity(1), vec!["e".into()])
    }

    pub fn trivial_minus() -> Self {
        InvolutiveZModule::new(
            IntMat::from_rows(vec![vec![-1]]),
            vec!["e".into()],
        )
    }

    pub fn swap_pair() -> Self {
        InvolutiveZModule::new(
            IntMat::from_rows(vec![vec![0, 1], vec![1, 0]]),
            vec!["e".into(), "f".into()],
        )
    }

    /// (dim h⁺, dim h⁻) with h⁺ = ker(S−I)/im(S+I), h⁻ = ker(S+I)/im(S−I).
    pub fn tate(&self) -> (usize, usize) {
        let id = IntMat::identity(self.rank);
        let sm = self.s.sub(&id);
        let sp = self.s.add(&id);
        let cols = |m: &IntMat| -> Vec<Vec<Int>> { (0..m.ncols).map(|j| m.col(j)).collect() };
        let h_plus = elementary_two_quotient(&kernel(&sm), &cols(&sp));
        let h_minus = elementary_two_quotient(&kernel(&sp), &cols(&sm));
        (h_plus, h_minus)
    }

    pub fn direct_sum(&self, other: &InvolutiveZModule) -> InvolutiveZModule {
        let n = self.rank + other.rank;
        let mut s = IntMat::zero(n, n);
        for i in 0..self.rank {
            for j in 0..self.rank {
                s.a[i][j] = self.s.a[i][j];
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                s.a[self.rank + i][self.rank + j] = other.s.a[i][j];
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| format!("{l}'")));
        InvolutiveZModule::new(s, labels)
    }

    /// Tensor product; basis e_i⊗f_j ordered with j fastest.
    pub fn tensor(&self, other: &InvolutiveZModule) -> InvolutiveZModule {
        let n = self.rank * other.rank;
        let mut s = IntMat::zero(n, n);
        for i1 in 0..self.rank {
            for j1 in 0..other.rank {
                for i2 in 0..self.rank {
                    for j2 in 0..other.rank {
                        s.a[i1 * other.rank + j1][i2 * other.rank + j2] =
                            self.s.a[i1][i2] * other.s.a[j1][j2];
                    }
                }
            }
        }
        let labels = (0..self.rank)
            .flat_map(|i| {
                (0..other.rank)
                    .map(move |j| (i, j))
            })
            .map(|(i, j)| format!("{}*{}", self.labels[i], other.labels[j]))
            .collect();
        InvolutiveZModule::new(s, labels)
    }

    /// Base change by a unimodular U: S ↦ U·S·U⁻¹.  Tate dims are invariant.
    pub fn conjugate(&self, u: &IntMat, u_inv: &IntMat) -> InvolutiveZModule {
        assert!(u.mul(u_inv) == IntMat::identity(self.rank));
        InvolutiveZModule::new(u.mul(&self.s).mul(u_inv), self.labels.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynkin::DynkinDiagram;
    use crate::dynkin::ParabolicSubset;

    fn ring(s: &str, theta: &[&str]) -> TwistedPolyRing {
        let d: DynkinDiagram = s.parse().unwrap();
        let p = ParabolicSubset::from_names(&d, theta).unwrap();
        TwistedPolyRing::from_parabolic(&d, &p).unwrap()
    }

    #[test]
    fn basic_module_dims() {
        assert_eq!(InvolutiveZModule::trivial_plus().tate(), (1, 0));
        assert_eq!(InvolutiveZModule::trivial_minus().tate(), (0, 1));
        assert_eq!(InvolutiveZModule::swap_pair().tate(), (0, 0));
    }

    #[test]
    fn projective_line_involution_dims() {
        // K₀(P¹) in the basis {1, [O(−1)]−…}: S = [[1,2],[0,−1]].
        let m = InvolutiveZModule::new(
            IntMat::from_rows(vec![vec![1, 2], vec![0, -1]]),
            vec!["1".into(), "h".into()],
        );
        assert_eq!(m.tate(), (1, 1));
    }

    #[test]
    fn tensor_and_sum_dims() {
        let p = InvolutiveZModule::trivial_plus();
        let m = InvolutiveZModule::trivial_minus();
        let w = InvolutiveZModule::swap_pair();
        assert_eq!(p.tensor(&m).tate(), (0, 1));
        assert_eq!(m.tensor(&m).tate(), (1, 0));
        assert_eq!(w.tensor(&m).tate(), (0, 0));
        assert_eq!(p.direct_sum(&m).direct_sum(&w).tate(), (1, 1));
    }

    #[test]
    fn projective_plane_point_vanishing() {
        // A₂, Θ = {2}: single self-dual μ with twist −1 at the white node.
        let r = ring("A2", &["2"]);
        assert_eq!(r.matrix.columns, vec![vec![-1]]);
        assert!(!vanishes(&r.matrix, &[0]));
        assert!(!vanishes(&r.matrix, &[1]));
        // ζ for odd twist is μ itself.
        let z = zeta(&r.matrix, &[1]).unwrap();
        assert_eq!(z, Monomial { mu: vec![1], x: vec![0] });
        // Fixed monomials of ★₀ in the box j ≤ 4, |k| ≤ 2: 1, μ²x⁻¹, μ⁴x⁻².
        let fixed = brute_fixed_monomials(&r.matrix, &[0], 4, 2);
        assert_eq!(
            fixed,
            vec![
                Monomial { mu: vec![0], x: vec![0] },
                Monomial { mu: vec![2], x: vec![-1] },
                Monomial { mu: vec![4], x: vec![-2] },
            ]
        );
        let fixed = brute_fixed_monomials(&r.matrix, &[0], 2, 2);
        assert_eq!(fixed.len(), 2);
    }

    #[test]
    fn grassmannian_presentation() {
        // A₃, Θ = {1,3}: h⁺-ring has σ₁, σ₃ and one ν with ν² = σ₁σ₃.
        let r = ring("A3", &["1", "3"]);
        let pres = presentation(&r, &[0]);
        assert_eq!(pres.nu.len(), 1);
        assert_eq!(
            pres.nu[0].monomial,
            Monomial { mu: vec![1, 1], x: vec![-1] }
        );
        assert_eq!(pres.relations.len(), 1);
        let rel = &pres.relations[0];
        assert_eq!((rel.u, rel.v, rel.rhs_nu), (0, 0, None));
        assert_eq!(rel.rhs_sigma, vec![1, 1]);
        assert!(pres.zeta.is_some());
    }

    #[test]
    fn overlapping_lift_classes_all_present() {
        // D₄, Θ = {1,3,4}: kernel of M̄ = [1 1 1] has three nonzero classes;
        // all three ν's are generators (a basis-indexed set misses weight-2
        // fixed monomials).
        let r = ring("D4", &["1", "3", "4"]);
        assert_eq!(r.matrix.columns.len(), 3);
        let pres = presentation(&r, &[0]);
        assert_eq!(pres.nu.len(), 3);
        let brute = brute_fixed_monomials(&r.matrix, &[0], 2, 3);
        assert_eq!(brute.len(), 14);
        let generated = pres.generated_fixed_monomials(2, 3);
        assert_eq!(brute, generated);
        // Six fixed monomials of total μ-degree 2.
        let weight2 = brute
            .iter()
            .filter(|m| m.mu.iter().sum::<i64>() == 2)
            .count();
        assert_eq!(weight2, 6);
    }

    #[test]
    fn vanishing_witness_roundtrip() {
        // A₇ with Θ = {1,2,4,5,6,7} has empty twist span: W^t = 0 for odd t.
        let d: DynkinDiagram = "A7".parse().unwrap();
        let p = ParabolicSubset::from_names(&d, &["1", "2", "4", "5", "6", "7"]).unwrap();
        let r = TwistedPolyRing::from_parabolic(&d, &p).unwrap();
        let f2 = r.matrix.f2();
        assert_eq!(f2.rank(), 0, "all twists even");
        assert!(!vanishes(&r.matrix, &[0]));
        assert!(vanishes(&r.matrix, &[1]));
        assert!(zeta(&r.matrix, &[1]).is_none());
        assert!(brute_fixed_monomials(&r.matrix, &[1], 4, 6).is_empty());
    }
}
