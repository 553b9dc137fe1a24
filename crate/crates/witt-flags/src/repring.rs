//! K-theory oracle: finite-rank models of K₀(G/P) with duality, built from
//! first principles.
//!
//! Rep(P) is the polynomial ring on Weyl-orbit sums w_ϑ (ϑ ∈ Θ) and unit
//! characters x_β (β white); K₀(G/P) is its quotient by the augmentation
//! ideal of Rep(G), generated by the full-orbit sums of the ambient
//! fundamental weights minus their orbit sizes.  The quotient is computed on
//! a finite monomial window by integer row echelon; the window is validated
//! (free rank = |W|/|W_Θ|, pivots ±1, S² = I) and retried doubled when too
//! small.  Everything downstream — Table-1 dimensions, ζ-multiplicativity —
//! runs through `InvolutiveZModule`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::dynkin::{DynkinDiagram, Family, ParabolicSubset, Rat};
use crate::snf::{kernel, Int, IntMat};
use crate::tate::{self, InvolutiveZModule};
use crate::twists::{self};
use crate::weyl::{circ_in_theta, fundamental_weight, reflect};
use crate::{Error, Result};

/// ℤ-linear combination of weights (keys in the fundamental-weight basis).
pub type Element = BTreeMap<Vec<Rat>, i64>;

const ORBIT_CAP: usize = 10_000;
const SUPPORT_CAP: usize = 200_000;
const WINDOW_CAP: usize = 200_000;

/// Orbit of a weight under the reflections at `nodes`, by closure BFS.
pub fn weyl_orbit(d: &DynkinDiagram, nodes: &[usize], w: &[Rat]) -> Result<Vec<Vec<Rat>>> {
    let cartan = d.cartan_matrix();
    let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
    let mut stack = vec![w.to_vec()];
    while let Some(v) = stack.pop() {
        if !seen.insert(v.clone()) {
            continue;
        }
        if seen.len() > ORBIT_CAP {
            return Err(Error::IterationCap("weyl_orbit"));
        }
        for &n in nodes {
            let mut r = v.clone();
            reflect(&cartan, &mut r, n);
            if !seen.contains(&r) {
                stack.push(r);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

pub fn orbit_sum(d: &DynkinDiagram, nodes: &[usize], w: &[Rat]) -> Result<Element> {
    Ok(weyl_orbit(d, nodes, w)?.into_iter().map(|v| (v, 1)).collect())
}

pub fn multiply(a: &Element, b: &Element) -> Result<Element> {
    let mut out = Element::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let w: Vec<Rat> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
            let e = out.entry(w).or_insert(0);
            *e += ca * cb;
            if *e == 0 {
                // keep support tight; zeros reappear via cancellation
            }
        }
        if out.len() > SUPPORT_CAP {
            return Err(Error::SupportCap("multiply"));
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

fn add_scaled(dst: &mut Element, src: &Element, c: i64) {
    for (w, cc) in src {
        let e = dst.entry(w.clone()).or_insert(0);
        *e += c * cc;
        if *e == 0 {
            dst.remove(w);
        }
    }
}

/// Monomial w^b·x^a in the Rep(P) generators; `b` over Θ in `p.theta` order
/// (all entries ≥ 0), `a` over white nodes (any sign).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub b: Vec<i64>,
    pub a: Vec<i64>,
}

impl Mono {
    pub fn one(nt: usize, nw: usize) -> Self {
        Mono {
            b: vec![0; nt],
            a: vec![0; nw],
        }
    }

    pub fn size(&self) -> i64 {
        self.b.iter().sum::<i64>() + self.a.iter().map(|x| x.abs()).sum::<i64>()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono {
            b: self.b.iter().zip(&o.b).map(|(x, y)| x + y).collect(),
            a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect(),
        }
    }
}

/// Echelon column order: size, then b, then a — all descending, so the
/// leading term of a row is its largest monomial.
fn mono_cmp_desc(x: &Mono, y: &Mono) -> std::cmp::Ordering {
    (y.size(), &y.b, &y.a).cmp(&(x.size(), &x.b, &x.a))
}

pub type GenPoly = BTreeMap<Mono, i64>;

/// Expansion cache for ∏ w_ϑ^{b_ϑ} as weight sums.
pub struct GenCache<'a> {
    d: &'a DynkinDiagram,
    p: &'a ParabolicSubset,
    wexp: Vec<Element>,
    powers: HashMap<Vec<i64>, Element>,
}

impl<'a> GenCache<'a> {
    pub fn new(d: &'a DynkinDiagram, p: &'a ParabolicSubset) -> Result<Self> {
        let n = d.node_count();
        let wexp = p
            .theta
            .iter()
            .map(|&t| orbit_sum(d, &p.theta, &fundamental_weight(n, t)))
            .collect::<Result<Vec<_>>>()?;
        let mut powers = HashMap::new();
        let mut one = Element::new();
        powers.insert(
            vec![0; p.theta.len()],
            {
                one.insert(vec![Rat::from_integer(0); n], 1);
                one
            },
        );
        Ok(GenCache {
            d,
            p,
            wexp,
            powers,
        })
    }

    fn w_power(&mut self, b: &[i64]) -> Result<Element> {
        if let Some(e) = self.powers.get(b) {
            return Ok(e.clone());
        }
        let i = b.iter().position(|&x| x > 0).unwrap();
        let mut smaller = b.to_vec();
        smaller[i] -= 1;
        let rec = self.w_power(&smaller)?;
        let out = multiply(&rec, &self.wexp[i])?;
        self.powers.insert(b.to_vec(), out.clone());
        Ok(out)
    }

    /// Full expansion of w^b·x^a as an Element.
    fn expand(&mut self, m: &Mono) -> Result<Element> {
        let base = self.w_power(&m.b)?;
        let n = self.d.node_count();
        let mut shift = vec![Rat::from_integer(0); n];
        for (&beta, &e) in self.p.white.iter().zip(&m.a) {
            shift[beta] = Rat::from_integer(e);
        }
        Ok(base
            .into_iter()
            .map(|(mut w, c)| {
                for (wi, si) in w.iter_mut().zip(&shift) {
                    *wi += si;
                }
                (w, c)
            })
            .collect())
    }
}

/// ρ∨-pairing per coordinate: row sums of the inverse Cartan, block per
/// ambient component.  `height(λ) = h·λ` is strictly maximal on the
/// Θ-dominant member of a W_Θ-orbit.
fn height_vector(d: &DynkinDiagram) -> Vec<Rat> {
    let mut h = Vec::with_capacity(d.node_count());
    for (ci, &(family, rank)) in d.components().iter().enumerate() {
        let inv = crate::dynkin::inverse_cartan(family, rank);
        for b in 1..=rank {
            let _ = ci;
            let sum: Rat = inv.a[b - 1].iter().sum();
            h.push(sum);
        }
    }
    h
}

fn height(h: &[Rat], w: &[Rat]) -> Rat {
    h.iter().zip(w).map(|(a, b)| a * b).sum()
}

/// Write a W_Θ-invariant element as a polynomial in the Rep(P) generators by
/// leading-term subtraction along the height order.
pub fn to_generator_polynomial(
    d: &DynkinDiagram,
    p: &ParabolicSubset,
    elem: &Element,
    cache: &mut GenCache,
) -> Result<GenPoly> {
    let hv = height_vector(d);
    let mut rest = elem.clone();
    let mut out = GenPoly::new();
    for _ in 0..SUPPORT_CAP {
        let Some((mu, &c)) = rest
            .iter()
            .max_by(|(wa, _), (wb, _)| {
                (height(&hv, wa), *wa).partial_cmp(&(height(&hv, wb), *wb)).unwrap()
            })
            .map(|(w, c)| (w.clone(), c))
        else {
            return Ok(out);
        };
        let mut b = Vec::with_capacity(p.theta.len());
        for &t in &p.theta {
            let x = mu[t];
            assert!(
                x.is_integer() && x >= Rat::from_integer(0),
                "leading weight must be Θ-dominant and integral"
            );
            b.push(x.to_integer());
        }
        let mut a = Vec::with_capacity(p.white.len());
        for &w in &p.white {
            assert!(mu[w].is_integer());
            a.push(mu[w].to_integer());
        }
        let g = Mono { b, a };
        let exp = cache.expand(&g)?;
        add_scaled(&mut rest, &exp, -c);
        *out.entry(g).or_insert(0) += c;
    }
    Err(Error::IterationCap("to_generator_polynomial"))
}

/// The defining relations of K₀(G/P) in the Rep(P) generators: one per
/// ambient node i — the full-W orbit sum of ω_i minus its orbit size.
pub fn relations(d: &DynkinDiagram, p: &ParabolicSubset) -> Result<Vec<GenPoly>> {
    let n = d.node_count();
    let all: Vec<usize> = (0..n).collect();
    let mut cache = GenCache::new(d, p)?;
    let mut out = Vec::new();
    for i in 0..n {
        let orbit = orbit_sum(d, &all, &fundamental_weight(n, i))?;
        let size = orbit.len() as i64;
        let mut poly = to_generator_polynomial(d, p, &orbit, &mut cache)?;
        let one = Mono::one(p.theta.len(), p.white.len());
        *poly.entry(one).or_insert(0) -= size;
        poly.retain(|_, c| *c != 0);
        out.push(poly);
    }
    Ok(out)
}

fn weyl_group_order(family: Family, rank: usize) -> u128 {
    let fact = |n: usize| -> u128 { (1..=n as u128).product() };
    match family {
        Family::A => fact(rank + 1),
        Family::B | Family::C => (1u128 << rank) * fact(rank),
        Family::D => (1u128 << (rank - 1)) * fact(rank),
        Family::E => match rank {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        Family::F => 1_152,
        Family::G => 12,
    }
}

/// |W| / |W_Θ| — the rank of K₀(G/P).
pub fn expected_rank(d: &DynkinDiagram, p: &ParabolicSubset) -> u128 {
    let total: u128 = d
        .components()
        .iter()
        .map(|&(f, r)| weyl_group_order(f, r))
        .product();
    let levi: u128 = p
        .components
        .iter()
        .map(|c| weyl_group_order(c.family, c.rank))
        .product();
    assert_eq!(total % levi, 0);
    total / levi
}

fn window_b(nt: usize, dmax: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; nt];
    fn rec(cur: &mut Vec<i64>, i: usize, left: i64, out: &mut Vec<Vec<i64>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(cur, i + 1, left - v, out);
        }
        cur[i] = 0;
    }
    rec(&mut cur, 0, dmax, &mut out);
    out
}

fn window_monomials(nt: usize, nw: usize, dmax: i64, emax: i64) -> Result<Vec<Mono>> {
    let bs = window_b(nt, dmax);
    let awidth = (2 * emax + 1) as usize;
    let count = bs.len().checked_mul(awidth.pow(nw as u32));
    if count.is_none_or(|c| c > WINDOW_CAP) {
        return Err(Error::SupportCap("k0 window"));
    }
    let mut out = Vec::with_capacity(count.unwrap());
    let mut a = vec![-emax; nw];
    loop {
        for b in &bs {
            out.push(Mono {
                b: b.clone(),
                a: a.clone(),
            });
        }
        let mut i = 0;
        loop {
            if i == nw {
                return Ok(out);
            }
            a[i] += 1;
            if a[i] <= emax {
                break;
            }
            a[i] = -emax;
            i += 1;
        }
    }
}

// Intermediate echelon coefficients can outgrow any fixed-width integer
// (Hermite-style coefficient swell), so rows carry bigints; the final
// back-substituted expressions convert to i128.
type Coeff = BigInt;
type SparseRow = Vec<(usize, Coeff)>;

fn row_axpy(a: &SparseRow, b: &SparseRow, q: &Coeff) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va + q * vb;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                let v = q * vb;
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = q * vb;
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn div_round(a: &Coeff, b: &Coeff) -> Coeff {
    let q = a / b;
    let r = a - &q * b;
    if r.abs() * 2 > b.abs() {
        q + if r.is_negative() == b.is_negative() { 1 } else { -1 }
    } else {
        q
    }
}

/// Incremental integer echelon kept fully inter-reduced: every pivot row's
/// tail is reduced against every other pivot, so rows stay short and
/// coefficients stay small.  `dirty` collects pivot columns whose rows
/// changed, for the saturation loop to re-shift.
#[derive(Default)]
struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
    /// column -> pivot columns whose tails still touch it
    occ: HashMap<usize, BTreeSet<usize>>,
    dirty: BTreeSet<usize>,
}

impl Echelon {
    /// Euclid-reduce every entry of `row` that sits at a pivot column.
    /// Entries introduced by an axpy always lie strictly to the right of the
    /// eliminated position, so a single left-to-right scan terminates.
    fn reduce_full(&self, mut row: SparseRow) -> SparseRow {
        let mut i = 0;
        while i < row.len() {
            let c = row[i].0;
            if let Some(p) = self.pivots.get(&c) {
                let q = div_round(&row[i].1, &p[0].1);
                if !q.is_zero() {
                    row = row_axpy(&row, p, &(-q));
                    continue;
                }
            }
            i += 1;
        }
        row
    }

    fn index_tail(&mut self, pc: usize, add: bool) {
        let tail: Vec<usize> = self.pivots[&pc].iter().skip(1).map(|e| e.0).collect();
        for c in tail {
            if add {
                self.occ.entry(c).or_default().insert(pc);
            } else if let Some(s) = self.occ.get_mut(&c) {
                s.remove(&pc);
            }
        }
    }

    fn insert(&mut self, row: SparseRow) -> bool {
        let mut queue = vec![row];
        let mut changed = false;
        while let Some(raw) = queue.pop() {
            let row = self.reduce_full(raw);
            if row.is_empty() {
                continue;
            }
            changed = true;
            let c = row[0].0;
            if let Some(old) = self.pivots.get(&c) {
                debug_assert!(row[0].1.abs() < old[0].1.abs());
                self.index_tail(c, false);
                let old = self.pivots.insert(c, row).unwrap();
                self.index_tail(c, true);
                self.dirty.insert(c);
                queue.push(old);
                continue;
            }
            self.pivots.insert(c, row);
            self.index_tail(c, true);
            self.dirty.insert(c);
            // Restore inter-reduction: clear column c from other tails.
            let holders: Vec<usize> = self.occ.remove(&c).unwrap_or_default().into_iter().collect();
            for pc in holders {
                let Some(prow) = self.pivots.get(&pc) else { continue };
                let Some(entry) = prow.iter().find(|e| e.0 == c) else { continue };
                let q = div_round(&entry.1, &self.pivots[&c][0].1);
                if q.is_zero() {
                    // remainder survives; keep the occurrence indexed
                    self.occ.entry(c).or_default().insert(pc);
                    continue;
                }
                self.index_tail(pc, false);
                let reduced = row_axpy(&self.pivots[&pc], &self.pivots[&c], &(-q));
                debug_assert_eq!(reduced[0].0, pc);
                self.pivots.insert(pc, reduced);
                self.index_tail(pc, true);
                self.dirty.insert(pc);
                if self.pivots[&pc].iter().skip(1).any(|e| e.0 == c) {
                    self.occ.entry(c).or_default().insert(pc);
                }
            }
        }
        changed
    }
}

/// Finite window model of K₀(G/P).
pub struct K0Model {
    pub theta: Vec<usize>,
    pub white: Vec<usize>,
    pub circ_pos: Vec<usize>,
    pub twist_cols: Vec<Vec<i64>>,
    pub basis: Vec<Mono>,
    pub labels: Vec<String>,
    pub window: (i64, i64),
    reductions: HashMap<Mono, Vec<Int>>,
    basis_index: HashMap<Mono, usize>,
}

impl K0Model {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Class of a window monomial in the free basis.
    pub fn reduce(&self, m: &Mono) -> Result<Vec<Int>> {
        if let Some(&i) = self.basis_index.get(m) {
            let mut v = vec![0; self.basis.len()];
            v[i] = 1;
            return Ok(v);
        }
        if let Some(v) = self.reductions.get(m) {
            return Ok(v.clone());
        }
        Err(Error::WindowTooSmall(format!(
            "monomial b={:?} a={:?} outside window {:?}",
            m.b, m.a, self.window
        )))
    }

    /// Matrix of the twisted duality S_t = (·x^t) ∘ S on the basis.
    pub fn s_matrix(&self, t: &[i64]) -> Result<IntMat> {
        assert_eq!(t.len(), self.white.len());
        let n = self.basis.len();
        let mut s = IntMat::zero(n, n);
        for (j, m) in self.basis.iter().enumerate() {
            let mut sb = vec![0i64; self.theta.len()];
            for (i, &e) in m.b.iter().enumerate() {
                sb[self.circ_pos[i]] += e;
            }
            let mut sa = t.to_vec();
            for (i, &e) in m.b.iter().enumerate() {
                for (k, &mc) in self.twist_cols[i].iter().enumerate() {
                    sa[k] += e * mc;
                }
            }
            for (k, &e) in m.a.iter().enumerate() {
                sa[k] -= e;
            }
            let img = self.reduce(&Mono { b: sb, a: sa })?;
            for (i, &v) in img.iter().enumerate() {
                s.a[i][j] = v;
            }
        }
        Ok(s)
    }

    pub fn involutive(&self, t: &[i64]) -> Result<InvolutiveZModule> {
        Ok(InvolutiveZModule::new(self.s_matrix(t)?, self.labels.clone()))
    }

    /// Class of m · (Σ v_i · basis_i).
    pub fn multiply_by(&self, m: &Mono, v: &[Int]) -> Result<Vec<Int>> {
        let mut out = vec![0; self.basis.len()];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let red = self.reduce(&m.mul(&self.basis[i]))?;
            for (o, r) in out.iter_mut().zip(&red) {
                *o += c * r;
            }
        }
        Ok(out)
    }
}

fn mono_label(d: &DynkinDiagram, p: &ParabolicSubset, m: &Mono) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.b.iter().enumerate() {
        if e != 0 {
            let name = d.node_name(p.theta[i]);
            parts.push(if e == 1 {
                format!("w{name}")
            } else {
                format!("w{name}^{e}")
            });
        }
    }
    for (i, &e) in m.a.iter().enumerate() {
        if e != 0 {
            let name = d.node_name(p.white[i]);
            parts.push(if e == 1 {
                format!("x{name}")
            } else {
                format!("x{name}^{e}")
            });
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn k0_model(
    d: &DynkinDiagram,
    p: &ParabolicSubset,
    dmax: i64,
    emax: i64,
) -> Result<K0Model> {
    let nt = p.theta.len();
    let nw = p.white.len();
    let twist_cols: Vec<Vec<i64>> = p
        .theta
        .iter()
        .map(|&t| twists::twist_vector(d, p, t))
        .collect::<Result<_>>()?;
    let circ_pos: Vec<usize> = p
        .theta
        .iter()
        .map(|&t| {
            let dual = circ_in_theta(p, t);
            p.theta.iter().position(|&x| x == dual).unwrap()
        })
        .collect();

    let mut cols = window_monomials(nt, nw, dmax, emax)?;
    cols.sort_by(mono_cmp_desc);
    let col_index: HashMap<Mono, usize> = cols
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let in_window =
        |m: &Mono| m.b.iter().sum::<i64>() <= dmax && m.a.iter().all(|x| x.abs() <= emax);

    // Seed rows: all monomial multiples of the relations that stay in the
    // window.  Shift monomials range over a wider x-box than the window
    // itself: a shift can re-center a relation into the window from outside.
    let rels = relations(d, p)?;
    let spread = rels
        .iter()
        .flat_map(|r| r.keys())
        .flat_map(|m| m.a.iter().map(|x| x.abs()))
        .max()
        .unwrap_or(0);
    let shifts = window_monomials(nt, nw, dmax, emax + spread)?;
    let mut ech = Echelon::default();
    for rel in &rels {
        let terms: Vec<(&Mono, i64)> = rel.iter().map(|(m, &c)| (m, c)).collect();
        for g in &shifts {
            let shifted: Option<SparseRow> = terms
                .iter()
                .map(|(m, c)| {
                    let mm = m.mul(g);
                    if in_window(&mm) {
                        Some((col_index[&mm], Coeff::from(*c)))
                    } else {
                        None
                    }
                })
                .collect();
            let Some(mut row) = shifted else { continue };
            row.sort_unstable_by_key(|&(c, _)| c);
            ech.insert(row);
        }
    }

    // Saturate: monomial multiples of the relations alone need not expose
    // every reducible leading term inside the window, so keep multiplying
    // discovered rows by the unit generator shifts until the span is stable.
    let mut unit_shifts: Vec<Mono> = Vec::new();
    for i in 0..nt {
        let mut m = Mono::one(nt, nw);
        m.b[i] = 1;
        unit_shifts.push(m);
    }
    for i in 0..nw {
        for e in [1, -1] {
            let mut m = Mono::one(nt, nw);
            m.a[i] = e;
            unit_shifts.push(m);
        }
    }
    loop {
        let dirty: Vec<usize> = std::mem::take(&mut ech.dirty).into_iter().collect();
        if dirty.is_empty() {
            break;
        }
        let mut candidates = Vec::new();
        for pc in dirty {
            let Some(row) = ech.pivots.get(&pc) else { continue };
            for s in &unit_shifts {
                let shifted: Option<SparseRow> = row
                    .iter()
                    .map(|(c, v)| {
                        let mm = cols[*c].mul(s);
                        if in_window(&mm) {
                            Some((col_index[&mm], v.clone()))
                        } else {
                            None
                        }
                    })
                    .collect();
                let Some(mut srow) = shifted else { continue };
                srow.sort_unstable_by_key(|&(c, _)| c);
                candidates.push(srow);
            }
        }
        for row in candidates {
            ech.insert(row);
        }
    }
    let mut pivots = ech.pivots;

    for row in pivots.values() {
        if row[0].1.abs() != Coeff::from(1) {
            return Err(Error::WindowTooSmall(format!(
                "pivot {} at monomial index {} (window {dmax},{emax})",
                row[0].1, row[0].0
            )));
        }
    }
    // Normalize pivots to +1 and back-substitute, smallest monomials first.
    let keys: Vec<usize> = pivots.keys().copied().collect();
    for &c in keys.iter().rev() {
        let mut row = pivots[&c].clone();
        if row[0].1 == Coeff::from(-1) {
            for e in &mut row {
                e.1 = -e.1.clone();
            }
        }
        loop {
            let hit = row
                .iter()
                .skip(1)
                .find(|(c2, _)| pivots.contains_key(c2))
                .cloned();
            let Some((c2, v)) = hit else { break };
            row = row_axpy(&row, &pivots[&c2], &(-v));
        }
        pivots.insert(c, row);
    }

    // Free columns, smallest monomial first.
    let mut basis: Vec<Mono> = Vec::new();
    let mut basis_pos: HashMap<usize, usize> = HashMap::new();
    for c in (0..cols.len()).rev() {
        if !pivots.contains_key(&c) {
            basis_pos.insert(c, basis.len());
            basis.push(cols[c].clone());
        }
    }

    let expected = expected_rank(d, p);
    if basis.len() as u128 != expected {
        return Err(Error::WindowTooSmall(format!(
            "free rank {} != |W|/|W_Theta| = {expected} (window {dmax},{emax})",
            basis.len()
        )));
    }

    let mut reductions: HashMap<Mono, Vec<Int>> = HashMap::new();
    for (c, row) in &pivots {
        let mut v = vec![0; basis.len()];
        for (c2, coeff) in row.iter().skip(1) {
            v[basis_pos[c2]] = Int::try_from(-coeff).map_err(|_| {
                Error::WindowTooSmall(format!(
                    "reduced coefficient exceeds i128 (window {dmax},{emax})"
                ))
            })?;
        }
        reductions.insert(cols[*c].clone(), v);
    }
    let basis_index: HashMap<Mono, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let labels: Vec<String> = basis.iter().map(|m| mono_label(d, p, m)).collect();

    let model = K0Model {
        theta: p.theta.clone(),
        white: p.white.clone(),
        circ_pos,
        twist_cols,
        basis,
        labels,
        window: (dmax, emax),
        reductions,
        basis_index,
    };

    // The untwisted duality must be a well-defined involution on the model.
    let zero = vec![0i64; nw];
    let s = model.s_matrix(&zero)?;
    if s.mul(&s) != IntMat::identity(model.rank()) {
        return Err(Error::WindowTooSmall(format!(
            "duality fails to square to identity on window ({dmax},{emax})"
        )));
    }
    Ok(model)
}

/// Retry a window-sized computation with doubled windows.
pub fn with_window_retry<T>(
    start: (i64, i64),
    attempts: usize,
    mut f: impl FnMut(i64, i64) -> Result<T>,
) -> Result<T> {
    let (mut dmax, mut emax) = start;
    let mut last = None;
    for _ in 0..attempts {
        match f(dmax, emax) {
            Err(Error::WindowTooSmall(msg)) => {
                last = Some(msg);
                dmax *= 2;
                emax *= 2;
            }
            other => return other,
        }
    }
    Err(Error::WindowTooSmall(format!(
        "gave up after {attempts} attempts: {}",
        last.unwrap_or_default()
    )))
}

pub fn k0_model_auto(
    d: &DynkinDiagram,
    p: &ParabolicSubset,
    start: (i64, i64),
) -> Result<K0Model> {
    with_window_retry(start, 3, |dm, em| k0_model(d, p, dm, em))
}

/// K₀(Pⁿ) = ℤ[H]/(H−1)^{n+1} with S(H^a) = H^{−a}, twisted by H^t.
pub fn projective_space_preset(n: usize, t: i64) -> InvolutiveZModule {
    let r = n + 1;
    // Multiplication by H on the basis {1, H, …, Hⁿ}.
    let mut x = IntMat::zero(r, r);
    for i in 0..n {
        x.a[i + 1][i] = 1;
    }
    // H^{n+1} = Σ_{k≤n} (−1)^{n−k} C(n+1,k) H^k.
    let mut sign = 1i128;
    for k in (0..=n).rev() {
        x.a[k][n] = sign * binom(n as u128 + 1, k as u128) as i128;
        sign = -sign;
    }
    // H^{−1} = Σ_k (−1)^k (H−1)^k, as a multiplication matrix.
    let id = IntMat::identity(r);
    let xm1 = x.sub(&id);
    let mut y = IntMat::zero(r, r);
    let mut pw = id.clone();
    let mut sign = 1i128;
    for _ in 0..=n {
        for i in 0..r {
            for j in 0..r {
                y.a[i][j] += sign * pw.a[i][j];
            }
        }
        pw = xm1.mul(&pw);
        sign = -sign;
    }
    assert!(x.mul(&y) == id, "H * H^{{-1}} must be 1");
    // S columns: S(H^a) = (H^{−1})^a · 1.
    let mut s = IntMat::zero(r, r);
    let mut col = {
        let mut e0 = vec![0; r];
        e0[0] = 1;
        e0
    };
    for a in 0..r {
        for i in 0..r {
            s.a[i][a] = col[i];
        }
        col = y.mul_vec(&col);
    }
    // Twist.
    let step = if t >= 0 { x } else { y };
    let mut st = s;
    for _ in 0..t.abs() {
        st = step.mul(&st);
    }
    let labels = (0..r).map(|k| format!("H^{k}")).collect();
    InvolutiveZModule::new(st, labels)
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut out = 1u128;
    for i in 0..k {
        out = out * (n - i) / (i + 1);
    }
    out
}

/// One row of the projective-space/Grassmannian dimension report.
#[derive(Debug, Clone)]
pub struct Table1Row {
    pub label: String,
    pub diagram: String,
    pub theta: Vec<String>,
    pub untwisted: (usize, usize),
    pub twisted: (usize, usize),
}

/// Tate dimensions of the K₀ models of P¹, P², P⁴ and two Grassmannians,
/// untwisted and twisted by the odd unit.
pub fn table1_report() -> Result<Vec<Table1Row>> {
    let specs: [(&str, &str, &[&str], (i64, i64)); 5] = [
        ("P1", "A1", &[], (0, 3)),
        ("P2", "A2", &["2"], (4, 6)),
        ("P4", "A4", &["2", "3", "4"], (4, 6)),
        ("Gr(2,4)", "A3", &["1", "3"], (4, 6)),
        ("Gr(2,6)", "A5", &["1", "3", "4", "5"], (5, 7)),
    ];
    let mut rows = Vec::new();
    for (label, diagram, theta, start) in specs {
        let d: DynkinDiagram = diagram.parse()?;
        let p = ParabolicSubset::from_names(&d, theta)?;
        let model = k0_model_auto(&d, &p, start)?;
        let untwisted = model.involutive(&vec![0; p.white.len()])?.tate();
        let twisted = model.involutive(&vec![1; p.white.len()])?.tate();
        rows.push(Table1Row {
            label: label.into(),
            diagram: diagram.into(),
            theta: theta.iter().map(|s| s.to_string()).collect(),
            untwisted,
            twisted,
        });
    }
    Ok(rows)
}

/// Outcome of the structure-theorem check on a K₀ model.
#[derive(Debug, Clone)]
pub struct ZetaCheck {
    pub vanishes: bool,
    pub dims: (usize, usize),
    pub untwisted_dims: (usize, usize),
    /// Vanishing twists give (0,0); non-vanishing twists give the untwisted
    /// dimensions, with ζ carrying fixed classes to twisted-fixed classes.
    pub ok: bool,
}

pub fn zeta_structure_check(
    d: &DynkinDiagram,
    p: &ParabolicSubset,
    model: &K0Model,
    t: &[i64],
) -> Result<ZetaCheck> {
    let sd = twists::self_dual_twist_matrix(d, p)?;
    let vanish = tate::vanishes(&sd, t);
    let m_t = model.involutive(t)?;
    let dims = m_t.tate();
    let untwisted_dims = model.involutive(&vec![0; t.len()])?.tate();
    if vanish {
        return Ok(ZetaCheck {
            vanishes: true,
            dims,
            untwisted_dims,
            ok: dims == (0, 0),
        });
    }
    let z = tate::zeta(&sd, t).expect("nonvanishing twist has a zeta witness");
    // Lift ζ to a Rep(P) monomial: self-dual μ-exponents land in Θ positions.
    let mut b = vec![0i64; model.theta.len()];
    for (pos, &node) in sd.self_dual.iter().enumerate() {
        let i = model.theta.iter().position(|&x| x == node).unwrap();
        b[i] = z.mu[pos];
    }
    let zmono = Mono { b, a: z.x.clone() };
    let id = IntMat::identity(model.rank());
    let s0 = model.s_matrix(&vec![0; t.len()])?;
    let st = m_t.s;
    for v in &kernel(&s0.sub(&id)) {
        let zv = model.multiply_by(&zmono, v)?;
        // ζ·(S-fixed) must be S_t-fixed.
        assert_eq!(st.mul_vec(&zv), zv, "zeta times a fixed class is fixed");
    }
    Ok(ZetaCheck {
        vanishes: false,
        dims,
        untwisted_dims,
        ok: dims == untwisted_dims,
    })
}
