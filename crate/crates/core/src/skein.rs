//! Chain maps between the closures of a twist family.
//!
//! `T(i+1)` is the cone of the resolutions of its last twist crossing, one of
//! which is `T(i)`. For a positive crossing the map `C(T(i+1)) -> C(T(i))` is
//! the projection onto that resolution; for a negative one it is the inclusion
//! `C(T(i+1)) -> C(T(i))` of the other resolution. Both are carried through
//! every cancellation of the scanning construction, so the maps below are
//! honest chain maps between the simplified complexes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use alloc::string::String;
use core::fmt::Write;

use crate::diagram::{twist_layout, Arc, SuturedTangle};
use crate::error::{Error, Result};
use crate::f2la::BitMatrix;
use crate::khcomplex::scan::{extend_by_strand, scan_order, Piece, Pt, TangleComplex, TrackKind};
use crate::khcomplex::{closed_to_graded, homology, reduce_with_transfer, GenLabel, GradedComplex, GradedVectorSpace, Reduction};

/// A degree-`(0, q_shift2/2)` chain map, one block per homological degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: GradedComplex,
    target: GradedComplex,
    blocks: BTreeMap<i32, BitMatrix>,
    q_shift2: i32,
}

fn u_span(a: &GradedComplex, b: &GradedComplex) -> Option<(i32, i32)> {
    match (a.u_range(), b.u_range()) {
        (None, None) => None,
        (Some(r), None) | (None, Some(r)) => Some(r),
        (Some((a0, a1)), Some((b0, b1))) => Some((a0.min(b0), a1.max(b1))),
    }
}

impl ChainMap {
    /// Checks block shapes and quantum homogeneity, and asserts that the
    /// map commutes with the differentials.
    pub fn new(source: GradedComplex, target: GradedComplex, blocks: BTreeMap<i32, BitMatrix>, q_shift2: i32) -> Result<ChainMap> {
        for (&u, b) in &blocks {
            if b.rows() != target.gens(u).len() || b.cols() != source.gens(u).len() {
                return Err(Error::MismatchedComplexes);
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    if b.get(i, j) && target.gens(u)[i].q2 != source.gens(u)[j].q2 + q_shift2 {
                        return Err(Error::MismatchedComplexes);
                    }
                }
            }
        }
        let map = ChainMap { source, target, blocks, q_shift2 };
        if let Some((lo, hi)) = u_span(&map.source, &map.target) {
            for u in lo - 1..=hi {
                let left = map.target.d(u).mul(&map.block(u)).expect("shapes");
                let right = map.block(u + 1).mul(&map.source.d(u)).expect("shapes");
                assert_eq!(left, right, "not a chain map in degree {u}");
            }
        }
        Ok(map)
    }

    pub fn identity(c: &GradedComplex) -> ChainMap {
        let mut blocks = BTreeMap::new();
        if let Some((lo, hi)) = c.u_range() {
            for u in lo..=hi {
                blocks.insert(u, BitMatrix::identity(c.gens(u).len()));
            }
        }
        ChainMap { source: c.clone(), target: c.clone(), blocks, q_shift2: 0 }
    }

    pub fn source(&self) -> &GradedComplex {
        &self.source
    }

    pub fn target(&self) -> &GradedComplex {
        &self.target
    }

    /// Quantum degree, doubled.
    pub fn q_shift2(&self) -> i32 {
        self.q_shift2
    }

    pub fn block(&self, u: i32) -> BitMatrix {
        self.blocks
            .get(&u)
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(self.target.gens(u).len(), self.source.gens(u).len()))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ChainMap) -> Result<ChainMap> {
        if next.source != self.target {
            return Err(Error::MismatchedComplexes);
        }
        let mut blocks = BTreeMap::new();
        if let Some((lo, hi)) = u_span(&self.source, &next.target) {
            for u in lo..=hi {
                blocks.insert(u, next.block(u).mul(&self.block(u))?);
            }
        }
        Ok(ChainMap { source: self.source.clone(), target: next.target.clone(), blocks, q_shift2: self.q_shift2 + next.q_shift2 })
    }
}

/// A linear map between graded spaces, one block per homological degree.
pub type HomologyMap = BTreeMap<i32, BitMatrix>;

/// `π_tgt ∘ φ ∘ ι_src`, degree by degree.
pub fn induced_on_homology(phi: &ChainMap, r_src: &Reduction, r_tgt: &Reduction) -> Result<HomologyMap> {
    if !r_src.belongs_to(&phi.source) || !r_tgt.belongs_to(&phi.target) {
        return Err(Error::MismatchedComplexes);
    }
    let mut out = BTreeMap::new();
    if let Some((lo, hi)) = u_span(&phi.source, &phi.target) {
        for u in lo..=hi {
            let m = r_tgt.projection(u, &phi.target).mul(&phi.block(u))?.mul(&r_src.inclusion(u, &phi.source))?;
            out.insert(u, m);
        }
    }
    Ok(out)
}

pub fn rank_by_u(m: &HomologyMap) -> BTreeMap<i32, usize> {
    m.iter().map(|(&u, b)| (u, b.rank())).filter(|&(_, r)| r > 0).collect()
}

/// `g ∘ f` blockwise.
pub fn compose_homology(f: &HomologyMap, g: &HomologyMap) -> Result<HomologyMap> {
    let mut out = BTreeMap::new();
    for (u, fb) in f {
        if let Some(gb) = g.get(u) {
            out.insert(*u, gb.mul(fb)?);
        } else {
            out.insert(*u, BitMatrix::zeros(0, fb.cols()));
        }
    }
    Ok(out)
}

/// Tab-separated dump of a homology map: one block per degree, rows are
/// target generators.
pub fn dump_tsv(m: &HomologyMap) -> String {
    let mut s = String::new();
    for (u, b) in m {
        let _ = writeln!(s, "u\t{u}\t{}x{}", b.rows(), b.cols());
        for i in 0..b.rows() {
            let row: Vec<&str> = (0..b.cols()).map(|j| if b.get(i, j) { "1" } else { "0" }).collect();
            let _ = writeln!(s, "{}", row.join("\t"));
        }
    }
    s
}

struct ClosedLevel {
    complex: GradedComplex,
    /// (object of the open complex, loop labels) -> (u, position).
    index: BTreeMap<(usize, u32), (i32, usize)>,
}

fn close_level(cx: &TangleComplex, strand: [Pt; 2], np: usize, nm: usize) -> ClosedLevel {
    let (closed, origins) = cx.attach(Piece::Strand(strand));
    let complex = closed_to_graded(&closed, np, nm, 0);
    let mut at = BTreeMap::new();
    if let Some((lo, hi)) = complex.u_range() {
        for u in lo..=hi {
            for (p, g) in complex.gens(u).iter().enumerate() {
                if let GenLabel::Scanned { object, .. } = g.label {
                    at.insert(object as usize, (u, p));
                }
            }
        }
    }
    let index = origins.iter().enumerate().map(|(i, o)| ((o.old, o.labels), at[&i])).collect();
    ClosedLevel { complex, index }
}

/// One end of the family: the open complex at the extreme level built so far.
#[derive(Clone)]
struct Frontier {
    level: i64,
    cx: TangleComplex,
}

/// The complexes `C(T(i))` for `i` in a window, with the maps
/// `f_i: C(T(i+1)) -> C(T(i))` between neighbours.
pub struct TwistFamily {
    tangle: SuturedTangle,
    cap: usize,
    b0: Pt,
    b1: Pt,
    top: Frontier,
    bottom: Frontier,
    pos_base: Arc,
    neg_base: Arc,
    t0: Pt,
    t1: Pt,
    levels: BTreeMap<i64, ClosedLevel>,
    steps: BTreeMap<i64, ChainMap>,
}

impl TwistFamily {
    /// Builds levels `lo..=hi` (which must contain 0).
    pub fn build(t: &SuturedTangle, lo: i64, hi: i64, cap: usize) -> Result<TwistFamily> {
        if lo > 0 || hi < 0 {
            return Err(Error::InvalidWindow { n: lo, m: hi });
        }
        let report = t.validate()?;
        if !report.planar {
            return Err(Error::Malformed { reason: "tangle is not planar".into(), arcs: Vec::new() });
        }
        if !report.braid_like {
            return Err(Error::NotBraidLike);
        }
        let need = t.crossings.len() + lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
        if need > cap {
            return Err(Error::ResourceCap { crossings: need, cap });
        }
        let b = t.boundary;
        let mut fresh = t.max_arc() + 1;
        let used: alloc::collections::BTreeSet<Arc> = t.crossings.iter().flatten().copied().collect();
        // A strand without crossings gets a distinct point at its top end.
        let mut strands = Vec::new();
        let mut top_pt = |a: Arc, bottom: Arc| {
            if used.contains(&a) {
                a
            } else {
                let p = fresh;
                fresh += 1;
                strands.push([bottom, p]);
                p
            }
        };
        let bottom_of = |a: Arc| if b.b0 == a { b.b0 } else { b.b1 };
        let t0 = top_pt(b.t0, bottom_of(b.t0));
        let t1 = top_pt(b.t1, bottom_of(b.t1));
        let mut cx = TangleComplex::empty(Some(b.b0));
        for s in &strands {
            cx = cx.add(Piece::Strand(*s));
        }
        let first = t.crossings.iter().position(|c| c.contains(&b.b0)).unwrap_or(0);
        for i in scan_order(&t.crossings, first) {
            cx = cx.add(Piece::Crossing(t.crossings[i]));
        }
        let pos_base = fresh;
        let neg_base = fresh + (1 << 20);
        let mut fam = TwistFamily {
            tangle: t.clone(),
            cap,
            b0: b.b0,
            b1: b.b1,
            top: Frontier { level: 0, cx: cx.clone() },
            bottom: Frontier { level: 0, cx: cx.clone() },
            pos_base,
            neg_base,
            t0,
            t1,
            levels: BTreeMap::new(),
            steps: BTreeMap::new(),
        };
        let l0 = fam.close(0, &cx)?;
        fam.levels.insert(0, l0);
        fam.extend_to(lo, hi)?;
        Ok(fam)
    }

    pub fn tangle(&self) -> &SuturedTangle {
        &self.tangle
    }

    /// `(lowest, highest)` level built.
    pub fn range(&self) -> (i64, i64) {
        (self.bottom.level, self.top.level)
    }

    fn tops(&self, level: i64) -> (Pt, Pt) {
        let base = if level >= 0 { self.pos_base } else { self.neg_base };
        let layout = twist_layout(self.t0, self.t1, level, base);
        *layout.tops.last().expect("tops")
    }

    fn close(&self, level: i64, cx: &TangleComplex) -> Result<ClosedLevel> {
        let (np, nm) = self.tangle.closure(level)?.sign_counts();
        let (_, r) = self.tops(level);
        Ok(close_level(cx, [r, self.b1], np, nm))
    }

    /// Grows the window to `lo..=hi`.
    pub fn extend_to(&mut self, lo: i64, hi: i64) -> Result<()> {
        let need = self.tangle.crossings.len() + lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
        if need > self.cap {
            return Err(Error::ResourceCap { crossings: need, cap: self.cap });
        }
        while self.top.level < hi {
            let k = self.top.level;
            let layout = twist_layout(self.t0, self.t1, k + 1, self.pos_base);
            let c = layout.twist_crossings[k as usize];
            let (next, tracker, tracked) = self.top.cx.add_crossing(c, Some(TrackKind::Into));
            let tracker = tracker.expect("tracked");
            let closed = self.close(k + 1, &next)?;
            let (_, r) = layout.tops[k as usize + 1];
            let bdry = next.boundary().to_vec();
            let mut entries = Vec::new();
            for z in next.live() {
                for (&o, mor) in &tracker.maps[z] {
                    let (x, ref mo) = tracked[o];
                    let (ms, _, nt) = extend_by_strand(&bdry, Some(self.b0), [r, self.b1], &next.obj(z).m, mo, mor);
                    for (idx, m) in ms.iter().enumerate() {
                        if !m.is_empty() {
                            let lam = (idx >> nt) as u32;
                            let mu = (idx & ((1 << nt) - 1)) as u32;
                            entries.push((closed.index[&(z, lam)], self.levels[&k].index[&(x, mu)]));
                        }
                    }
                }
            }
            let map = assemble(&closed.complex, &self.levels[&k].complex, &entries, -1)?;
            self.steps.insert(k, map);
            self.levels.insert(k + 1, closed);
            self.top = Frontier { level: k + 1, cx: next };
        }
        while self.bottom.level > lo {
            let j = self.bottom.level;
            let layout = twist_layout(self.t0, self.t1, j - 1, self.neg_base);
            let c = layout.twist_crossings[(-j) as usize];
            let (next, tracker, tracked) = self.bottom.cx.add_crossing(c, Some(TrackKind::OutOf));
            let tracker = tracker.expect("tracked");
            let closed = self.close(j - 1, &next)?;
            let (_, r) = layout.tops[(-j) as usize + 1];
            let bdry = next.boundary().to_vec();
            let mut entries = Vec::new();
            for z in next.live() {
                for (&o, mor) in &tracker.maps[z] {
                    let (x, ref mo) = tracked[o];
                    let (ms, _, nt) = extend_by_strand(&bdry, Some(self.b0), [r, self.b1], mo, &next.obj(z).m, mor);
                    for (idx, m) in ms.iter().enumerate() {
                        if !m.is_empty() {
                            let lam = (idx >> nt) as u32;
                            let mu = (idx & ((1 << nt) - 1)) as u32;
                            entries.push((self.levels[&j].index[&(x, lam)], closed.index[&(z, mu)]));
                        }
                    }
                }
            }
            let map = assemble(&self.levels[&j].complex, &closed.complex, &entries, -1)?;
            self.steps.insert(j - 1, map);
            self.levels.insert(j - 1, closed);
            self.bottom = Frontier { level: j - 1, cx: next };
        }
        Ok(())
    }

    /// `C(T(i))`.
    pub fn complex(&self, i: i64) -> &GradedComplex {
        &self.levels[&i].complex
    }

    /// `f_i: C(T(i+1)) -> C(T(i))`.
    pub fn step(&self, i: i64) -> &ChainMap {
        &self.steps[&i]
    }

    /// `f_n ∘ ... ∘ f_(m-1): C(T(m)) -> C(T(n))`.
    pub fn composite(&self, m: i64, n: i64) -> Result<ChainMap> {
        if m <= n {
            return Err(Error::InvalidWindow { n, m });
        }
        let (lo, hi) = self.range();
        if n < lo || m > hi {
            return Err(Error::InvalidWindow { n, m });
        }
        let mut acc = self.step(m - 1).clone();
        for i in (n..m - 1).rev() {
            acc = acc.then(self.step(i))?;
        }
        Ok(acc)
    }

    pub fn homology(&self, i: i64) -> GradedVectorSpace {
        homology(self.complex(i))
    }
}

fn assemble(source: &GradedComplex, target: &GradedComplex, entries: &[((i32, usize), (i32, usize))], q_shift2: i32) -> Result<ChainMap> {
    let mut blocks: BTreeMap<i32, BitMatrix> = BTreeMap::new();
    for &((us, ps), (ut, pt)) in entries {
        assert_eq!(us, ut, "twist maps preserve the homological grading");
        blocks
            .entry(us)
            .or_insert_with(|| BitMatrix::zeros(target.gens(us).len(), source.gens(us).len()))
            .flip(pt, ps);
    }
    ChainMap::new(source.clone(), target.clone(), blocks, q_shift2)
}

/// `C(T(m)) -> C(T(n))` for `m > n`, as the composite of single twist maps.
pub fn twist_quotient_map(t: &SuturedTangle, m: i64, n: i64, cap: usize) -> Result<ChainMap> {
    if m <= n {
        return Err(Error::InvalidWindow { n, m });
    }
    let fam = TwistFamily::build(t, n.min(0), m.max(0), cap)?;
    fam.composite(m, n)
}

/// Outcome of checking the exact triangle at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleReport {
    pub level: i64,
    pub dim_source: usize,
    pub dim_target: usize,
    pub kernel: usize,
    pub cokernel: usize,
    pub third: usize,
    /// Per `u`: `dim coker f^u + dim ker f^(u+1)`, the third term as read
    /// off the sequence.
    pub third_by_u: BTreeMap<i32, usize>,
    /// Offset `s` with `third_by_u` equal to `Kh(T(1/0))` moved up by `s`.
    pub shift: Option<i32>,
    pub expected_shift: i64,
    pub holds: bool,
}

/// Exactness of `A_(i+1) -> A_i -> Kh(T(1/0))` at level `i`: kernel plus
/// cokernel of `f_i` account for the third term, degree by degree, with
/// the third term shifted by `c_T + i`.
pub fn triangle_check(fam: &TwistFamily, i: i64) -> Result<TriangleReport> {
    let t = fam.tangle();
    let inf = crate::khcomplex::khovanov(&t.closure_infinity()?)?;
    let c_t = t.c_t()?;
    let f = fam.step(i);
    let rs = reduce_with_transfer(f.source());
    let rt = reduce_with_transfer(f.target());
    let h = induced_on_homology(f, &rs, &rt)?;
    let hs = rs.homology().dims_by_u();
    let ht = rt.homology().dims_by_u();
    let ranks: BTreeMap<i32, usize> = h.iter().map(|(&u, b)| (u, b.rank())).collect();
    let kernel_u = |u: i32| hs.get(&u).copied().unwrap_or(0) - ranks.get(&u).copied().unwrap_or(0);
    let coker_u = |u: i32| ht.get(&u).copied().unwrap_or(0) - ranks.get(&u).copied().unwrap_or(0);
    let mut us: alloc::collections::BTreeSet<i32> = hs.keys().copied().collect();
    us.extend(ht.keys().copied());
    let mut third_by_u = BTreeMap::new();
    if let (Some(&lo), Some(&hi)) = (us.iter().next(), us.iter().next_back()) {
        for u in lo - 1..=hi {
            let d = coker_u(u) + kernel_u(u + 1);
            if d > 0 {
                third_by_u.insert(u, d);
            }
        }
    }
    let kernel: usize = hs.keys().map(|&u| kernel_u(u)).sum();
    let cokernel: usize = ht.keys().map(|&u| coker_u(u)).sum();
    let inf_u = inf.dims_by_u();
    let shift = match (third_by_u.keys().next(), inf_u.keys().next()) {
        (Some(&a), Some(&b)) => {
            let s = a - b;
            let moved: BTreeMap<i32, usize> = inf_u.iter().map(|(&u, &d)| (u + s, d)).collect();
            (moved == third_by_u).then_some(s)
        }
        (None, None) => Some(0),
        _ => None,
    };
    let expected_shift = c_t + i;
    let holds = kernel + cokernel == inf.total_dim() && shift.map(|s| s as i64 == expected_shift).unwrap_or(false);
    Ok(TriangleReport {
        level: i,
        dim_source: rs.homology().total_dim(),
        dim_target: rt.homology().total_dim(),
        kernel,
        cokernel,
        third: inf.total_dim(),
        third_by_u,
        shift,
        expected_shift,
        holds,
    })
}
