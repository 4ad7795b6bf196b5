//! The inverse system `A_i = Kh(T(i))` over a finite window of levels, its
//! eventual image, and the invariant kappa with its absolute `(u, 2δ)`
//! grading.
//!
//! Every map `f_i: A_(i+1) -> A_i` preserves `u` and lowers `q2` by one, so
//! images are computed one `(u, q2)` block at a time.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::diagram::SuturedTangle;
use crate::error::{Error, Result};
use crate::f2la::BitMatrix;
use crate::khcomplex::{khovanov, reduce_with_transfer, GradedVectorSpace, Reduction, DEFAULT_CAP};
use crate::skein::{induced_on_homology, HomologyMap, TwistFamily};

/// `(u, 2δ)` cells with their dimensions.
pub type BiTable = BTreeMap<(i32, i32), usize>;

/// Twist family with every level reduced to homology and every step map
/// induced on homology, grown on demand.
pub struct Tower {
    family: TwistFamily,
    reductions: BTreeMap<i64, Reduction>,
    steps: BTreeMap<i64, HomologyMap>,
}

impl Tower {
    pub fn new(t: &SuturedTangle, lo: i64, hi: i64, cap: usize) -> Result<Tower> {
        let family = TwistFamily::build(t, lo.min(0), hi.max(0), cap)?;
        let mut tower = Tower { family, reductions: BTreeMap::new(), steps: BTreeMap::new() };
        tower.fill()?;
        Ok(tower)
    }

    pub fn family(&self) -> &TwistFamily {
        &self.family
    }

    pub fn range(&self) -> (i64, i64) {
        self.family.range()
    }

    pub fn extend_to(&mut self, lo: i64, hi: i64) -> Result<()> {
        let (a, b) = self.range();
        self.family.extend_to(lo.min(a), hi.max(b))?;
        self.fill()
    }

    fn fill(&mut self) -> Result<()> {
        let (lo, hi) = self.range();
        for i in lo..=hi {
            self.reductions.entry(i).or_insert_with(|| reduce_with_transfer(self.family.complex(i)));
        }
        for i in lo..hi {
            if !self.steps.contains_key(&i) {
                let h = induced_on_homology(self.family.step(i), &self.reductions[&(i + 1)], &self.reductions[&i])?;
                self.steps.insert(i, h);
            }
        }
        Ok(())
    }

    /// The window `[n, m]`, which must lie inside the levels built so far.
    pub fn window(&self, n: i64, m: i64) -> Result<InverseWindow> {
        let (lo, hi) = self.range();
        if n >= m || n < lo || m > hi {
            return Err(Error::InvalidWindow { n, m });
        }
        let mut bases = BTreeMap::new();
        let mut spaces = BTreeMap::new();
        for i in n..=m {
            let r = &self.reductions[&i];
            spaces.insert(i, r.homology());
            let us: BTreeMap<i32, Vec<i32>> = r
                .homology()
                .dims_by_u()
                .keys()
                .map(|&u| (u, r.reduced_generators(u).to_vec()))
                .collect();
            bases.insert(i, us);
        }
        let steps: BTreeMap<i64, HomologyMap> = (n..m).map(|i| (i, self.steps[&i].clone())).collect();
        let mut w = InverseWindow {
            tangle: self.family.tangle().clone(),
            range: (n, m),
            spaces,
            bases,
            steps,
            composite: BTreeMap::new(),
            step_ranks: BTreeMap::new(),
        };
        w.step_ranks = (n..m).map(|i| (i, w.step_rank(i))).collect();
        w.composite = w.compose(m, n);
        Ok(w)
    }
}

/// The spaces `A_n, ..., A_m` and the composite `g: A_m -> A_n`.
#[derive(Clone, Debug)]
pub struct InverseWindow {
    tangle: SuturedTangle,
    range: (i64, i64),
    spaces: BTreeMap<i64, GradedVectorSpace>,
    /// `q2` of each homology basis vector, per level and `u`.
    bases: BTreeMap<i64, BTreeMap<i32, Vec<i32>>>,
    steps: BTreeMap<i64, HomologyMap>,
    composite: HomologyMap,
    step_ranks: BTreeMap<i64, usize>,
}

impl InverseWindow {
    pub fn tangle(&self) -> &SuturedTangle {
        &self.tangle
    }

    pub fn range(&self) -> (i64, i64) {
        self.range
    }

    /// `A_i`.
    pub fn space(&self, i: i64) -> &GradedVectorSpace {
        &self.spaces[&i]
    }

    /// Quantum gradings of the basis of `A_i` in degree `u`, in matrix order.
    pub fn basis(&self, i: i64, u: i32) -> &[i32] {
        self.bases[&i].get(&u).map_or(&[], |v| v.as_slice())
    }

    /// `f_i` on homology.
    pub fn step(&self, i: i64) -> &HomologyMap {
        &self.steps[&i]
    }

    pub fn step_ranks(&self) -> &BTreeMap<i64, usize> {
        &self.step_ranks
    }

    /// `g = f_n ∘ ... ∘ f_(m-1)` on homology, per `u`.
    pub fn composite(&self) -> &HomologyMap {
        &self.composite
    }

    fn dim(&self, i: i64, u: i32) -> usize {
        self.basis(i, u).len()
    }

    fn us(&self) -> BTreeSet<i32> {
        self.bases.values().flat_map(|b| b.keys().copied()).collect()
    }

    fn block(&self, i: i64, u: i32) -> BitMatrix {
        let (rows, cols) = (self.dim(i, u), self.dim(i + 1, u));
        match self.steps[&i].get(&u) {
            Some(b) if b.rows() == rows && b.cols() == cols => b.clone(),
            _ => BitMatrix::zeros(rows, cols),
        }
    }

    fn step_rank(&self, i: i64) -> usize {
        self.us().into_iter().map(|u| self.block(i, u).rank()).sum()
    }

    /// `A_hi -> A_lo` for `lo <= hi` inside the window, per `u`.
    pub fn compose(&self, hi: i64, lo: i64) -> HomologyMap {
        let mut out = BTreeMap::new();
        for u in self.us() {
            let mut acc = BitMatrix::identity(self.dim(hi, u));
            for i in (lo..hi).rev() {
                acc = self.block(i, u).mul(&acc).expect("block shapes agree");
            }
            out.insert(u, acc);
        }
        out
    }

    /// Image of `A_hi -> A_lo` as a bigraded space inside `A_lo`.
    pub fn image(&self, hi: i64, lo: i64) -> GradedVectorSpace {
        let g = self.compose(hi, lo);
        let mut v = GradedVectorSpace::new();
        for (u, m) in &g {
            for (q2, cols) in cells(self.basis(hi, *u)) {
                let r = m.submatrix(&(0..m.rows()).collect::<Vec<_>>(), &cols).rank();
                if r > 0 {
                    v.add(*u, q2 - (hi - lo) as i32, r);
                }
            }
        }
        v
    }

    /// `Kh(T(i))` recomputed from scratch, for spot checks.
    pub fn recompute(&self, i: i64, cap: usize) -> Result<GradedVectorSpace> {
        let d = self.tangle.closure(i)?;
        if d.crossing_count() > cap {
            return Err(Error::ResourceCap { crossings: d.crossing_count(), cap });
        }
        khovanov(&d)
    }
}

/// Column indices of a basis grouped by quantum grading.
fn cells(basis: &[i32]) -> BTreeMap<i32, Vec<usize>> {
    let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (j, &q) in basis.iter().enumerate() {
        out.entry(q).or_default().push(j);
    }
    out
}

fn ranks(g: &HomologyMap) -> BTreeMap<i32, usize> {
    g.iter().map(|(&u, m)| (u, m.rank())).filter(|&(_, r)| r > 0).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventualImage {
    /// Rank of the composite per `u`.
    pub ranks: BTreeMap<i32, usize>,
    pub surjective_top: bool,
    pub injective_bottom: bool,
    /// The composites over `[n, m-1]` and `[n+1, m]` have the same ranks.
    pub agrees_with_shorter: bool,
    pub stable: bool,
}

pub fn eventual_image(w: &InverseWindow) -> EventualImage {
    let (n, m) = w.range();
    let ranks_full = ranks(w.composite());
    let surjective_top = w.step_ranks[&(m - 1)] == w.space(m - 1).total_dim();
    let injective_bottom = w.step_ranks[&n] == w.space(n + 1).total_dim();
    let agrees_with_shorter = m - n >= 2 && ranks(&w.compose(m - 1, n)) == ranks_full && ranks(&w.compose(m, n + 1)) == ranks_full;
    EventualImage {
        ranks: ranks_full,
        surjective_top,
        injective_bottom,
        agrees_with_shorter,
        stable: surjective_top && injective_bottom && agrees_with_shorter,
    }
}

/// The growing diagonal at the top of the window, as `2δ` in `A_m`.
///
/// `A_m` must exceed `A_(m-1)` (moved up one quantum step to undo the
/// grading of `f_(m-1)`) in exactly one cell, and likewise one step lower,
/// on the same diagonal.
pub fn absolute_delta_lift(w: &InverseWindow) -> Result<i32> {
    let (n, m) = w.range();
    let growth = |i: i64| -> Option<(i32, i32)> {
        let hi = w.space(i);
        let lo = w.space(i - 1).shift(0, 1);
        let mut keys: BTreeSet<(i32, i32)> = hi.iter().map(|(k, _)| k).collect();
        keys.extend(lo.iter().map(|(k, _)| k));
        let mut found = None;
        for (u, q) in keys {
            match hi.get(u, q) as i64 - lo.get(u, q) as i64 {
                0 => {}
                1 if found.is_none() => found = Some((u, q)),
                _ => return None,
            }
        }
        found
    };
    let top = growth(m).ok_or(Error::UnstableTop { level: m })?;
    let top_delta = 2 * top.0 - top.1;
    if m - 1 > n {
        let below = growth(m - 1).ok_or(Error::UnstableTop { level: m - 1 })?;
        // One step down the quantum gradings sit one lower.
        if 2 * below.0 - (below.1 + 1) != top_delta {
            return Err(Error::UnstableTop { level: m - 1 });
        }
    }
    Ok(top_delta)
}

/// The eventual image read in `A_m`, keyed by `(u, 2δ)` in `A_m`'s own
/// gradings, before the absolute lift.
pub fn relative_table(w: &InverseWindow) -> BiTable {
    let (_, m) = w.range();
    let mut t = BiTable::new();
    for (u, g) in w.composite() {
        for (q2, cols) in cells(w.basis(m, *u)) {
            let r = g.submatrix(&(0..g.rows()).collect::<Vec<_>>(), &cols).rank();
            if r > 0 {
                *t.entry((*u, 2 * u - q2)).or_default() += r;
            }
        }
    }
    t
}

/// Evidence that a kappa table has stopped changing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub window: (i64, i64),
    /// Consecutive stable windows, ending with `window`, that gave the same table.
    pub agreements: usize,
    pub surjective_top: bool,
    pub injective_bottom: bool,
    pub windows_tried: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaInvariant {
    /// `(u, 2δ)` with odd `2δ`.
    pub table: BiTable,
    pub total_dim: usize,
    pub certificate: Certificate,
}

impl KappaInvariant {
    pub fn dims_by_u(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (&(u, _), &d) in &self.table {
            *out.entry(u).or_default() += d;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim == 0
    }
}

/// Kappa over one window: `None` if the window is not stable.
pub fn kappa_in_window(w: &InverseWindow) -> Result<Option<(BiTable, EventualImage)>> {
    let ei = eventual_image(w);
    if !ei.stable {
        return Ok(None);
    }
    let rel = relative_table(w);
    if rel.is_empty() {
        return Ok(Some((rel, ei)));
    }
    let star = absolute_delta_lift(w)?;
    let table = rel.into_iter().map(|((u, d), k)| ((u, d - star + 1), k)).collect();
    Ok(Some((table, ei)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowPolicy {
    pub start: (i64, i64),
    /// Levels added on each side per round.
    pub widen: i64,
    /// Stable windows in a row that must agree.
    pub agreements: usize,
    /// Largest closure allowed, in crossings.
    pub cap: usize,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy { start: (-4, 4), widen: 2, agreements: 3, cap: DEFAULT_CAP }
    }
}

/// Rejects tangles whose `T(1/0)` is not unknot-like.
pub fn check_admissible(t: &SuturedTangle) -> Result<()> {
    if !t.is_braid_like() {
        return Err(Error::NotBraidLike);
    }
    let dim = khovanov(&t.closure_infinity()?)?.total_dim();
    if dim != 1 {
        return Err(Error::Inadmissible { closure_dim: dim });
    }
    Ok(())
}

pub fn compute_window(t: &SuturedTangle, n: i64, m: i64, cap: usize) -> Result<InverseWindow> {
    if n >= m {
        return Err(Error::InvalidWindow { n, m });
    }
    check_admissible(t)?;
    Tower::new(t, n, m, cap)?.window(n, m)
}

fn needed(t: &SuturedTangle, n: i64, m: i64) -> usize {
    t.crossings.len() + n.unsigned_abs().max(m.unsigned_abs()) as usize
}

/// Widens the window until `policy.agreements` stable windows in a row give
/// the same table.
pub fn compute_kappa(t: &SuturedTangle, policy: &WindowPolicy) -> Result<KappaInvariant> {
    let (mut n, mut m) = policy.start;
    if n >= m || policy.widen < 1 {
        return Err(Error::InvalidWindow { n, m });
    }
    check_admissible(t)?;
    if needed(t, n, m) > policy.cap {
        return Err(Error::ResourceCap { crossings: needed(t, n, m), cap: policy.cap });
    }
    let mut tower = Tower::new(t, n, m, policy.cap)?;
    let mut last: Option<BiTable> = None;
    let mut agreements = 0;
    let mut tried = Vec::new();
    loop {
        tried.push((n, m));
        let w = tower.window(n, m)?;
        // A window too short to show clean growth at the top counts as unstable.
        let here = match kappa_in_window(&w) {
            Ok(x) => x,
            Err(Error::UnstableTop { .. }) => None,
            Err(e) => return Err(e),
        };
        match here {
            Some((table, ei)) => {
                if last.as_ref() == Some(&table) {
                    agreements += 1;
                } else {
                    agreements = 1;
                }
                if agreements >= policy.agreements {
                    let total_dim = table.values().sum();
                    return Ok(KappaInvariant {
                        table,
                        total_dim,
                        certificate: Certificate {
                            window: (n, m),
                            agreements,
                            surjective_top: ei.surjective_top,
                            injective_bottom: ei.injective_bottom,
                            windows_tried: tried,
                        },
                    });
                }
                last = Some(table);
            }
            None => agreements = 0,
        }
        let (n2, m2) = (n - policy.widen, m + policy.widen);
        if needed(t, n2, m2) > policy.cap {
            let partial = match last {
                Some(tb) => tb.into_iter().collect(),
                None => relative_table(&w).into_iter().collect(),
            };
            return Err(Error::Unstabilized { n, m, agreements, partial });
        }
        n = n2;
        m = m2;
        tower.extend_to(n, m)?;
    }
}

/// `(u, 2δ) -> (-u, -2δ)`.
pub fn mirror_reflect(k: &KappaInvariant) -> KappaInvariant {
    KappaInvariant {
        table: k.table.iter().map(|(&(u, d), &v)| ((-u, -d), v)).collect(),
        total_dim: k.total_dim,
        certificate: k.certificate.clone(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The `u`-graded tables differ, so no amphicheiral symmetry can carry
    /// this inversion to itself.
    Obstructed,
    Silent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmphicheiralityReport {
    pub verdict: Verdict,
    pub kappa: KappaInvariant,
    pub reflected: KappaInvariant,
}

/// Compares kappa of `t` with the reflection of kappa of `partner`, the
/// tangle of the inversion that the mirror is expected to produce. With
/// `partner = t` this is the test for a unique inversion.
pub fn amphicheirality_check_pair(t: &SuturedTangle, partner: &SuturedTangle, policy: &WindowPolicy) -> Result<AmphicheiralityReport> {
    let kappa = compute_kappa(t, policy)?;
    let reflected = if partner == t { mirror_reflect(&kappa) } else { mirror_reflect(&compute_kappa(partner, policy)?) };
    let verdict = if kappa.dims_by_u() == reflected.dims_by_u() { Verdict::Silent } else { Verdict::Obstructed };
    Ok(AmphicheiralityReport { verdict, kappa, reflected })
}

pub fn amphicheirality_check(t: &SuturedTangle, policy: &WindowPolicy) -> Result<AmphicheiralityReport> {
    amphicheirality_check_pair(t, t, policy)
}

/// Offsets of the pattern `V`: one dimension at `u = 0, 2, 3, 5` on a
/// single diagonal.
pub const V_PATTERN: [i32; 4] = [0, 2, 3, 5];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub total_dim: usize,
    pub residue_mod4: usize,
    /// `(u offset, 2δ)` of each translate used by the greedy tiling.
    pub translates: Vec<(i32, i32)>,
    /// Cells the tiling could not cover; empty on success.
    pub leftover: BiTable,
}

impl StructureReport {
    pub fn tiled(&self) -> bool {
        self.leftover.is_empty()
    }
}

/// Greedy tiling of the table by translates of `V`, lowest cell first.
pub fn structure_report(k: &KappaInvariant) -> StructureReport {
    let mut left = k.table.clone();
    let mut translates = Vec::new();
    let mut stuck = BiTable::new();
    while let Some((&(u, d), _)) = left.iter().find(|(c, _)| !stuck.contains_key(c)) {
        let fits = V_PATTERN.iter().all(|&o| left.get(&(u + o, d)).copied().unwrap_or(0) > 0);
        if !fits {
            stuck.insert((u, d), 1);
            continue;
        }
        for o in V_PATTERN {
            let e = left.get_mut(&(u + o, d)).expect("checked above");
            *e -= 1;
            if *e == 0 {
                left.remove(&(u + o, d));
            }
        }
        translates.push((u, d));
    }
    StructureReport { total_dim: k.total_dim, residue_mod4: k.total_dim % 4, translates, leftover: left }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitProfile {
    /// Per level `i`: the image of `A_m` in `A_i`, by `u`.
    pub levels: BTreeMap<i64, BTreeMap<i32, usize>>,
    /// The inverse limit by `u`, for `u <= certified_max_u`.
    pub limit: BTreeMap<i32, usize>,
    /// Degrees above this may still grow as the window widens.
    pub certified_max_u: i32,
}

/// The stable images inside each `A_i` and the inverse limit in the
/// degrees the window certifies: every kernel of `f_j` for `j >= m` sits in
/// degrees above the growth cell of `A_m`, so below it the limit is `A_m`.
pub fn limit_profile(w: &InverseWindow) -> Result<LimitProfile> {
    let (n, m) = w.range();
    let levels = (n..=m).map(|i| (i, if i == m { w.space(m).dims_by_u() } else { w.image(m, i).dims_by_u() })).collect();
    let star = absolute_delta_lift(w)?;
    let top = w.space(m);
    let lo = w.space(m - 1).shift(0, 1);
    let certified_max_u = top
        .iter()
        .find(|&((u, q), d)| d > lo.get(u, q) && 2 * u - q == star)
        .map(|((u, _), _)| u)
        .ok_or(Error::UnstableTop { level: m })?;
    let limit = top.dims_by_u().into_iter().filter(|&(u, _)| u <= certified_max_u).collect();
    Ok(LimitProfile { levels, limit, certified_max_u })
}
