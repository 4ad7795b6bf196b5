//! Reduced Khovanov homology over F2.
//!
//! Gradings: `u` is the homological grading and quantum gradings are stored
//! doubled (`q2`), so that the half-integral quantum grading of a link is an
//! integer here. With these units the unknot sits at `(0, 0)`, the Jones
//! polynomial is `Σ (-1)^u dim · t^(q2/2)` and `2δ = 2u - q2`.

pub mod cob;
pub mod cube;
pub mod scan;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diagram::{Basepoint, PlanarDiagram};
use crate::error::{Error, Result};
use crate::f2la::{BitMatrix, BitVec};
use scan::{Piece, TangleComplex};

/// Default ceiling on the number of crossings a diagram may have.
pub const DEFAULT_CAP: usize = 24;

/// Finitely supported table `(u, q2) -> dimension`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedVectorSpace {
    cells: BTreeMap<(i32, i32), usize>,
}

impl GradedVectorSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_cells(cells: impl IntoIterator<Item = ((i32, i32), usize)>) -> Self {
        let mut v = Self::new();
        for ((u, q2), d) in cells {
            v.add(u, q2, d);
        }
        v
    }

    pub fn add(&mut self, u: i32, q2: i32, dim: usize) {
        if dim == 0 {
            return;
        }
        *self.cells.entry((u, q2)).or_default() += dim;
    }

    pub fn get(&self, u: i32, q2: i32) -> usize {
        self.cells.get(&(u, q2)).copied().unwrap_or(0)
    }

    /// Nonzero cells in `(u, q2)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), usize)> + '_ {
        self.cells.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total_dim(&self) -> usize {
        self.cells.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// `(u, q2) -> (-u, -q2)`.
    pub fn reflect(&self) -> Self {
        Self::from_cells(self.iter().map(|((u, q), d)| ((-u, -q), d)))
    }

    /// Shifts every cell by `(du, dq2)`.
    pub fn shift(&self, du: i32, dq2: i32) -> Self {
        Self::from_cells(self.iter().map(|((u, q), d)| ((u + du, q + dq2), d)))
    }

    pub fn dims_by_u(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for ((u, _), d) in self.iter() {
            *out.entry(u).or_default() += d;
        }
        out
    }

    /// Table `(u, 2δ) -> dimension` with `2δ = 2u - q2`.
    pub fn delta_table(&self) -> BTreeMap<(i32, i32), usize> {
        let mut out = BTreeMap::new();
        for ((u, q), d) in self.iter() {
            *out.entry((u, 2 * u - q)).or_default() += d;
        }
        out
    }

    /// Direct sum.
    pub fn sum(&self, other: &Self) -> Self {
        let mut v = self.clone();
        for ((u, q), d) in other.iter() {
            v.add(u, q, d);
        }
        v
    }
}

/// Laurent polynomial in `t` with half-integral exponents, keyed by twice
/// the exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent {
    terms: BTreeMap<i32, i64>,
}

impl Laurent {
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut l = Laurent::default();
        for (e, c) in terms {
            *l.terms.entry(e).or_default() += c;
        }
        l.terms.retain(|_, c| *c != 0);
        l
    }

    /// Coefficient of `t^(two_exp / 2)`.
    pub fn coeff(&self, two_exp: i32) -> i64 {
        self.terms.get(&two_exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// `V(t) -> V(t^-1)`.
    pub fn invert(&self) -> Laurent {
        Laurent::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    /// Value at `t = -1` for integral exponents; `None` if some exponent is
    /// half-integral.
    pub fn at_minus_one(&self) -> Option<i64> {
        let mut s = 0;
        for (e, c) in self.terms() {
            if e % 2 != 0 {
                return None;
            }
            s += if (e / 2) % 2 == 0 { c } else { -c };
        }
        Some(s)
    }
}

impl fmt::Display for Laurent {
    /// Highest power first, e.g. `t^-4 + t^-6 - t^-10`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&e, &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            write!(f, "t")?;
            if e != 2 {
                if e % 2 == 0 {
                    write!(f, "^{}", e / 2)?;
                } else {
                    write!(f, "^{}/2", e)?;
                }
            }
        }
        Ok(())
    }
}

/// `Σ_u (-1)^u dim` per quantum grading.
pub fn jones_polynomial(v: &GradedVectorSpace) -> Laurent {
    Laurent::from_terms(v.iter().map(|((u, q), d)| (q, if u.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) })))
}

/// `|Σ (-1)^⌊δ⌋ dim|`; `None` when the δ gradings mix integers and half-integers.
pub fn determinant(v: &GradedVectorSpace) -> Option<u64> {
    let mut s: i64 = 0;
    let mut parity = None;
    for ((u, q), d) in v.iter() {
        let two_delta = 2 * u - q;
        // Links with an even number of components sit on odd 2δ; either way
        // every generator must share the parity.
        if *parity.get_or_insert(two_delta.rem_euclid(2)) != two_delta.rem_euclid(2) {
            return None;
        }
        let half = two_delta.div_euclid(2);
        s += if half.rem_euclid(2) == 0 { d as i64 } else { -(d as i64) };
    }
    Some(s.unsigned_abs())
}

/// Whether the support lies on a single δ diagonal.
pub fn is_thin(v: &GradedVectorSpace) -> bool {
    let mut ds = v.iter().map(|((u, q), _)| 2 * u - q);
    match ds.next() {
        None => true,
        Some(first) => ds.all(|d| d == first),
    }
}

/// Provenance of a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenLabel {
    /// Cube vertex (bit `i` = crossing `i` 1-resolved) and circle labels
    /// (bit `j` = circle `j` carries `x`).
    Cube { vertex: u64, labels: u64 },
    /// Object of a scanned complex and the labels of loops closed when
    /// capping it off.
    Scanned { object: u32, loops: u32 },
    /// Extra label for generators built by hand.
    Plain(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub u: i32,
    pub q2: i32,
    pub label: GenLabel,
}

/// A complex of F2 vector spaces graded by `(u, q2)`, with a differential
/// of degree `(1, 0)`. Generators are stored per `u`, sorted by `q2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    u_min: i32,
    levels: Vec<Vec<Generator>>,
    /// `diffs[k]`: level `k` to level `k + 1`.
    diffs: Vec<BitMatrix>,
}

impl GradedComplex {
    /// Builds a complex from generators in any order and differential
    /// entries `(source, target)` (repeated entries cancel). Fails if an
    /// entry is not of degree `(1, 0)`.
    pub fn from_parts(gens: &[Generator], edges: &[(usize, usize)]) -> Result<GradedComplex> {
        if gens.is_empty() {
            return Ok(GradedComplex { u_min: 0, levels: Vec::new(), diffs: Vec::new() });
        }
        let u_min = gens.iter().map(|g| g.u).min().unwrap();
        let u_max = gens.iter().map(|g| g.u).max().unwrap();
        let nl = (u_max - u_min + 1) as usize;
        let mut order: Vec<usize> = (0..gens.len()).collect();
        order.sort_by_key(|&i| (gens[i].u, gens[i].q2, i));
        let mut levels = vec![Vec::new(); nl];
        let mut pos = vec![0usize; gens.len()];
        for &i in &order {
            let k = (gens[i].u - u_min) as usize;
            pos[i] = levels[k].len();
            levels[k].push(gens[i]);
        }
        let mut diffs: Vec<BitMatrix> =
            (0..nl.saturating_sub(1)).map(|k| BitMatrix::zeros(levels[k + 1].len(), levels[k].len())).collect();
        for &(s, t) in edges {
            let (gs, gt) = (gens[s], gens[t]);
            if gt.u != gs.u + 1 || gt.q2 != gs.q2 {
                return Err(Error::Malformed {
                    reason: alloc::format!(
                        "differential entry from ({}, {}) to ({}, {})",
                        gs.u,
                        gs.q2,
                        gt.u,
                        gt.q2
                    ),
                    arcs: Vec::new(),
                });
            }
            diffs[(gs.u - u_min) as usize].flip(pos[t], pos[s]);
        }
        Ok(GradedComplex { u_min, levels, diffs })
    }

    /// `(u_min, u_max)`, or `None` for the zero complex.
    pub fn u_range(&self) -> Option<(i32, i32)> {
        if self.levels.is_empty() {
            None
        } else {
            Some((self.u_min, self.u_min + self.levels.len() as i32 - 1))
        }
    }

    fn level(&self, u: i32) -> Option<usize> {
        let k = u - self.u_min;
        (k >= 0 && (k as usize) < self.levels.len()).then_some(k as usize)
    }

    /// Generators in degree `u`, sorted by `q2`.
    pub fn gens(&self, u: i32) -> &[Generator] {
        self.level(u).map_or(&[], |k| &self.levels[k])
    }

    /// The differential `C^u -> C^(u+1)`.
    pub fn d(&self, u: i32) -> BitMatrix {
        match self.level(u) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => BitMatrix::zeros(self.gens(u + 1).len(), self.gens(u).len()),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    /// Dimensions of the chain groups.
    pub fn chain_dims(&self) -> GradedVectorSpace {
        GradedVectorSpace::from_cells(self.levels.iter().flatten().map(|g| ((g.u, g.q2), 1)))
    }

    /// d∘d = 0 and every entry joins generators of equal `q2`.
    pub fn is_chain_complex(&self) -> bool {
        for (k, d) in self.diffs.iter().enumerate() {
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if d.get(i, j) && self.levels[k + 1][i].q2 != self.levels[k][j].q2 {
                        return false;
                    }
                }
            }
        }
        self.diffs.windows(2).all(|w| w[1].mul(&w[0]).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// The mirror complex: dual, with gradings negated.
    pub fn mirror(&self) -> GradedComplex {
        let mut gens = Vec::new();
        for l in &self.levels {
            for g in l {
                gens.push(Generator { u: -g.u, q2: -g.q2, label: g.label });
            }
        }
        let mut edges = Vec::new();
        let mut base = 0;
        for (k, d) in self.diffs.iter().enumerate() {
            let nk = self.levels[k].len();
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if d.get(i, j) {
                        edges.push((base + nk + i, base + j));
                    }
                }
            }
            base += nk;
        }
        GradedComplex::from_parts(&gens, &edges).expect("dual of a graded complex")
    }

    /// Homology dimensions via `dim C - rank d^u - rank d^(u-1)`, blockwise
    /// in `q2`.
    pub fn homology_by_rank(&self) -> GradedVectorSpace {
        let mut out = GradedVectorSpace::new();
        let Some((lo, hi)) = self.u_range() else { return out };
        for u in lo..=hi {
            let gens = self.gens(u);
            let din = self.d(u - 1);
            let dout = self.d(u);
            for (q, idx) in q_blocks(gens) {
                let prev: Vec<usize> = indices_with_q(self.gens(u - 1), q);
                let next: Vec<usize> = indices_with_q(self.gens(u + 1), q);
                let r_in = din.submatrix(&idx, &prev).rank();
                let r_out = dout.submatrix(&next, &idx).rank();
                out.add(u, q, idx.len() - r_in - r_out);
            }
        }
        out
    }
}

fn q_blocks(gens: &[Generator]) -> BTreeMap<i32, Vec<usize>> {
    let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        out.entry(g.q2).or_default().push(i);
    }
    out
}

fn indices_with_q(gens: &[Generator], q: i32) -> Vec<usize> {
    (0..gens.len()).filter(|&i| gens[i].q2 == q).collect()
}

/// Incremental row echelon form for testing membership and extending bases.
struct Echelon {
    rows: Vec<(usize, BitVec)>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Adds `v` if it is independent of what is stored; reports whether it was.
    fn insert(&mut self, v: &BitVec) -> bool {
        let mut w = v.clone();
        for (p, r) in &self.rows {
            if w.get(*p) {
                w.xor_assign(r);
            }
        }
        match w.first_one() {
            None => false,
            Some(p) => {
                for (_, r) in self.rows.iter_mut() {
                    if r.get(p) {
                        r.xor_assign(&w);
                    }
                }
                self.rows.push((p, w));
                true
            }
        }
    }
}

/// A deformation retraction of a complex onto its homology: per `u`, an
/// inclusion of cycle representatives and a projection killing boundaries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    source_shape: Vec<(i32, usize)>,
    u_min: i32,
    reduced: Vec<Vec<i32>>,
    inclusion: Vec<BitMatrix>,
    projection: Vec<BitMatrix>,
}

impl Reduction {
    fn level(&self, u: i32) -> Option<usize> {
        let k = u - self.u_min;
        (k >= 0 && (k as usize) < self.reduced.len()).then_some(k as usize)
    }

    /// `q2` of the reduced generators in degree `u`.
    pub fn reduced_generators(&self, u: i32) -> &[i32] {
        self.level(u).map_or(&[], |k| &self.reduced[k])
    }

    /// `H^u -> C^u`.
    pub fn inclusion(&self, u: i32, source: &GradedComplex) -> BitMatrix {
        match self.level(u) {
            Some(k) => self.inclusion[k].clone(),
            None => BitMatrix::zeros(source.gens(u).len(), 0),
        }
    }

    /// `C^u -> H^u`.
    pub fn projection(&self, u: i32, source: &GradedComplex) -> BitMatrix {
        match self.level(u) {
            Some(k) => self.projection[k].clone(),
            None => BitMatrix::zeros(0, source.gens(u).len()),
        }
    }

    pub fn homology(&self) -> GradedVectorSpace {
        let mut v = GradedVectorSpace::new();
        for (k, l) in self.reduced.iter().enumerate() {
            for &q in l {
                v.add(self.u_min + k as i32, q, 1);
            }
        }
        v
    }

    /// Whether this reduction was computed from a complex of `c`'s shape.
    pub fn belongs_to(&self, c: &GradedComplex) -> bool {
        self.source_shape == shape(c)
    }

    /// Checks `π∘ι = 1`, `d∘ι = 0` and `π∘d = 0` against the source.
    pub fn verify(&self, c: &GradedComplex) -> bool {
        if !self.belongs_to(c) {
            return false;
        }
        let Some((lo, hi)) = c.u_range() else { return true };
        for u in lo..=hi {
            let i = self.inclusion(u, c);
            let p = self.projection(u, c);
            if p.mul(&i).ok() != Some(BitMatrix::identity(i.cols())) {
                return false;
            }
            if !c.d(u).mul(&i).map(|m| m.is_zero()).unwrap_or(false) {
                return false;
            }
            let pd = self.projection(u + 1, c).mul(&c.d(u));
            if !pd.map(|m| m.is_zero()).unwrap_or(false) {
                return false;
            }
        }
        true
    }
}

fn shape(c: &GradedComplex) -> Vec<(i32, usize)> {
    match c.u_range() {
        None => Vec::new(),
        Some((lo, hi)) => (lo..=hi).map(|u| (u, c.gens(u).len())).collect(),
    }
}

/// Splits each chain group as boundaries ⊕ homology ⊕ complement, block by
/// block in `q2`, and records the inclusion and projection for the middle
/// summand.
pub fn reduce_with_transfer(c: &GradedComplex) -> Reduction {
    let Some((lo, hi)) = c.u_range() else {
        return Reduction { source_shape: Vec::new(), u_min: 0, reduced: Vec::new(), inclusion: Vec::new(), projection: Vec::new() };
    };
    let mut reduced = Vec::new();
    let mut inclusion = Vec::new();
    let mut projection = Vec::new();
    for u in lo..=hi {
        let gens = c.gens(u);
        let n = gens.len();
        let din = c.d(u - 1);
        let dout = c.d(u);
        let mut cols: Vec<BitVec> = Vec::new();
        let mut rows: Vec<BitVec> = Vec::new();
        let mut qs = Vec::new();
        for (q, idx) in q_blocks(gens) {
            let prev = indices_with_q(c.gens(u - 1), q);
            let next = indices_with_q(c.gens(u + 1), q);
            let a = din.submatrix(&idx, &prev);
            let d = dout.submatrix(&next, &idx);
            let b = a.image_basis();
            let z = d.kernel_basis();
            let mut ech = Echelon::new();
            let mut basis: Vec<BitVec> = Vec::new();
            for v in b.basis() {
                let fresh = ech.insert(v);
                debug_assert!(fresh);
                basis.push(v.clone());
            }
            let nb = basis.len();
            for v in z.basis() {
                if ech.insert(v) {
                    basis.push(v.clone());
                }
            }
            let nh = basis.len() - nb;
            for i in 0..idx.len() {
                let e = BitVec::unit(idx.len(), i);
                if ech.insert(&e) {
                    basis.push(e);
                }
            }
            let m = BitMatrix::from_columns(idx.len(), &basis).expect("square basis");
            let inv = m.inverse().expect("basis is invertible");
            for h in nb..nb + nh {
                let mut col = BitVec::zeros(n);
                for i in basis[h].ones() {
                    col.set(idx[i], true);
                }
                cols.push(col);
                let mut row = BitVec::zeros(n);
                for j in 0..idx.len() {
                    if inv.get(h, j) {
                        row.set(idx[j], true);
                    }
                }
                rows.push(row);
                qs.push(q);
            }
        }
        inclusion.push(BitMatrix::from_columns(n, &cols).expect("inclusion columns"));
        projection.push(BitMatrix::from_rows(n, &rows).expect("projection rows"));
        reduced.push(qs);
    }
    Reduction { source_shape: shape(c), u_min: lo, reduced, inclusion, projection }
}

pub fn homology(c: &GradedComplex) -> GradedVectorSpace {
    reduce_with_transfer(c).homology()
}

/// Tensors a closed complex with `k` free unknotted circles.
fn with_free_loops(gens: Vec<Generator>, edges: Vec<(usize, usize)>, k: usize) -> (Vec<Generator>, Vec<(usize, usize)>) {
    let (mut gens, mut edges) = (gens, edges);
    for _ in 0..k {
        let n = gens.len();
        let mut g2 = Vec::with_capacity(2 * n);
        for s in [1, -1] {
            for g in &gens {
                g2.push(Generator { q2: g.q2 + s, ..*g });
            }
        }
        let mut e2 = edges.clone();
        e2.extend(edges.iter().map(|&(a, b)| (a + n, b + n)));
        gens = g2;
        edges = e2;
    }
    (gens, edges)
}

/// Converts a capped-off scanned complex (boundary of at most two points)
/// into a graded complex, applying the global shifts.
pub fn closed_to_graded(cx: &TangleComplex, n_plus: usize, n_minus: usize, free_loops: usize) -> GradedComplex {
    assert!(cx.boundary().len() <= 2, "complex is not closed");
    let live = cx.live();
    let mut index = BTreeMap::new();
    let mut gens = Vec::new();
    for &x in &live {
        let o = cx.obj(x);
        index.insert(x, gens.len());
        gens.push(Generator {
            u: o.h - n_minus as i32,
            q2: o.q + n_plus as i32 - 2 * n_minus as i32,
            label: GenLabel::Scanned { object: x as u32, loops: 0 },
        });
    }
    let mut edges = Vec::new();
    for &x in &live {
        for (y, m) in cx.out(x) {
            debug_assert_eq!(m.as_slice(), &[0]);
            edges.push((index[&x], index[y]));
        }
    }
    let (gens, edges) = with_free_loops(gens, edges, free_loops);
    GradedComplex::from_parts(&gens, &edges).expect("scanned complex is graded")
}

/// The pieces of a diagram in scanning order, with the basepoint arc cut
/// into two ends so the marked point stays on the boundary.
pub fn diagram_pieces(d: &PlanarDiagram) -> (Vec<[u32; 4]>, Option<u32>) {
    let mut crossings = d.crossings.clone();
    let marked = match d.basepoint {
        Basepoint::Arc(a) if !crossings.is_empty() => Some(a),
        _ => None,
    };
    let mut first = 0;
    if let Some(a) = marked {
        let fresh = crossings.iter().flatten().copied().max().unwrap_or(0) + 1;
        let occ: Vec<(usize, usize)> = (0..crossings.len())
            .flat_map(|i| (0..4).map(move |p| (i, p)))
            .filter(|&(i, p)| crossings[i][p] == a)
            .collect();
        first = occ[0].0;
        let (i, p) = occ[1];
        crossings[i][p] = fresh;
    }
    let order = scan::scan_order(&crossings, first);
    (order.into_iter().map(|i| crossings[i]).collect(), marked)
}

/// The reduced complex of a diagram, built by scanning and simplified to
/// its homology.
pub fn build_reduced_complex(d: &PlanarDiagram) -> Result<GradedComplex> {
    build_reduced_complex_capped(d, DEFAULT_CAP)
}

pub fn build_reduced_complex_capped(d: &PlanarDiagram, cap: usize) -> Result<GradedComplex> {
    d.check()?;
    if d.crossing_count() > cap {
        return Err(Error::ResourceCap { crossings: d.crossing_count(), cap });
    }
    let (pieces, marked) = diagram_pieces(d);
    let mut cx = TangleComplex::empty(marked);
    for c in pieces {
        cx = cx.add(Piece::Crossing(c));
    }
    if marked.is_none() && d.free_loops == 0 {
        return Err(Error::Malformed { reason: "diagram has no basepoint".into(), arcs: Vec::new() });
    }
    let (np, nm) = d.sign_counts();
    // With the basepoint on a free loop the crossings are scanned unmarked
    // and the marked loop contributes a single generator.
    let loops = if marked.is_some() { d.free_loops } else { d.free_loops - 1 };
    Ok(closed_to_graded(&cx, np, nm, loops))
}

/// Reduced homology of a diagram.
pub fn khovanov(d: &PlanarDiagram) -> Result<GradedVectorSpace> {
    Ok(homology(&build_reduced_complex(d)?))
}
