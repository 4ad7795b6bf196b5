//! Crossing-by-crossing construction of the complex of a tangle in the
//! dotted cobordism category. Each step tensors with one elementary piece,
//! removes closed loops, and cancels every isomorphism it finds, so the
//! complex stays close to the size of its homology.

use super::cob::{compose, cycles, mor_add, Matching, Mor, Surface};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

/// A boundary point, named by the arc it lies on.
pub type Pt = u32;

/// An elementary tangle glued on in one scanning step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Piece {
    /// A crossing in the usual counterclockwise convention.
    Crossing([Pt; 4]),
    /// A crossingless arc between two points.
    Strand([Pt; 2]),
}

const CROSSING_SMOOTHINGS: [[(usize, usize); 2]; 2] = [[(0, 1), (2, 3)], [(0, 3), (1, 2)]];

impl Piece {
    fn slots(&self) -> &[Pt] {
        match self {
            Piece::Crossing(c) => c,
            Piece::Strand(s) => s,
        }
    }

    fn resolutions(&self) -> usize {
        match self {
            Piece::Crossing(_) => 2,
            Piece::Strand(_) => 1,
        }
    }

    fn arcs(&self, r: usize) -> &'static [(usize, usize)] {
        match self {
            Piece::Crossing(_) => &CROSSING_SMOOTHINGS[r],
            Piece::Strand(_) => &[(0, 1)],
        }
    }
}

/// An object of the complex: a matching in homological degree `h` with
/// quantum shift `q` (Bar-Natan's normalization, before global shifts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obj {
    pub m: Matching,
    pub h: i32,
    pub q: i32,
}

#[derive(Clone, Copy, Debug)]
enum Src {
    Old(usize),
    Slot(usize),
}

#[derive(Clone, Copy, Debug)]
enum Elem {
    Old(usize),
    Arc(usize),
}

#[derive(Clone, Debug)]
struct Glued {
    m: Matching,
    loops: Vec<Elem>,
}

/// Where a new object came from: old object, resolution of the new piece,
/// and the labels of the removed loops (bit set = lower summand).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Origin {
    pub old: usize,
    pub r: u8,
    pub labels: u32,
}

/// Geometry of gluing one piece onto a boundary.
pub struct Step {
    piece: Piece,
    old_n: usize,
    slot_old: Vec<Option<usize>>,
    slot_self: Vec<Option<usize>>,
    old_slot: Vec<Option<usize>>,
    new_bdry: Vec<Pt>,
    new_src: Vec<Src>,
    node_new: Vec<Option<usize>>,
    marked_new: Option<usize>,
    arc_of: Vec<Vec<usize>>,
}

impl Step {
    pub fn new(bdry: &[Pt], marked: Option<Pt>, piece: Piece) -> Step {
        let slots = piece.slots();
        let k = slots.len();
        let old_n = bdry.len();
        let mut slot_old = vec![None; k];
        let mut slot_self = vec![None; k];
        let mut old_slot = vec![None; old_n];
        for (s, &a) in slots.iter().enumerate() {
            if let Ok(i) = bdry.binary_search(&a) {
                assert!(old_slot[i].is_none(), "point {a} glued twice");
                slot_old[s] = Some(i);
                old_slot[i] = Some(s);
            } else if let Some(t) = (0..k).find(|&t| t != s && slots[t] == a) {
                slot_self[s] = Some(t);
            }
        }
        let mut fresh: Vec<(Pt, Src)> = Vec::new();
        for i in 0..old_n {
            if old_slot[i].is_none() {
                fresh.push((bdry[i], Src::Old(i)));
            }
        }
        for s in 0..k {
            if slot_old[s].is_none() && slot_self[s].is_none() {
                fresh.push((slots[s], Src::Slot(s)));
            }
        }
        fresh.sort_by_key(|f| f.0);
        for w in fresh.windows(2) {
            assert!(w[0].0 != w[1].0, "point {} appears twice on the boundary", w[0].0);
        }
        assert!(fresh.len() <= 64, "boundary too large");
        let mut node_new = vec![None; old_n + k];
        for (z, f) in fresh.iter().enumerate() {
            match f.1 {
                Src::Old(i) => node_new[i] = Some(z),
                Src::Slot(s) => node_new[old_n + s] = Some(z),
            }
        }
        let new_bdry: Vec<Pt> = fresh.iter().map(|f| f.0).collect();
        let new_src = fresh.iter().map(|f| f.1).collect();
        let marked_new = marked.and_then(|m| new_bdry.binary_search(&m).ok());
        let arc_of = (0..piece.resolutions())
            .map(|r| {
                let mut a = vec![0; k];
                for (j, &(x, y)) in piece.arcs(r).iter().enumerate() {
                    a[x] = j;
                    a[y] = j;
                }
                a
            })
            .collect();
        Step { piece, old_n, slot_old, slot_self, old_slot, new_bdry, new_src, node_new, marked_new, arc_of }
    }

    pub fn new_boundary(&self) -> &[Pt] {
        &self.new_bdry
    }

    fn arc_partner(&self, p: &[u8], r: usize, node: usize) -> usize {
        if node < self.old_n {
            p[node] as usize
        } else {
            let s = node - self.old_n;
            let (a, b) = self.piece.arcs(r)[self.arc_of[r][s]];
            self.old_n + if a == s { b } else { a }
        }
    }

    fn glue_partner(&self, node: usize) -> Option<usize> {
        if node < self.old_n {
            self.old_slot[node].map(|s| self.old_n + s)
        } else {
            let s = node - self.old_n;
            self.slot_old[s].or(self.slot_self[s].map(|t| self.old_n + t))
        }
    }

    fn glue(&self, p: &[u8], r: usize) -> Glued {
        let total = self.old_n + self.piece.slots().len();
        let mut seen = vec![false; total];
        let mut m = vec![0u8; self.new_bdry.len()];
        for z in 0..self.new_bdry.len() {
            let start = match self.new_src[z] {
                Src::Old(i) => i,
                Src::Slot(s) => self.old_n + s,
            };
            if seen[start] {
                continue;
            }
            let mut cur = start;
            let end = loop {
                seen[cur] = true;
                let nx = self.arc_partner(p, r, cur);
                seen[nx] = true;
                match self.glue_partner(nx) {
                    None => break nx,
                    Some(g) => cur = g,
                }
            };
            let e = self.node_new[end].expect("path ends on the new boundary");
            m[z] = e as u8;
            m[e] = z as u8;
        }
        let mut loops = Vec::new();
        for node in 0..total {
            if seen[node] {
                continue;
            }
            loops.push(if node < self.old_n {
                Elem::Old(node)
            } else {
                Elem::Arc(self.arc_of[r][node - self.old_n])
            });
            let mut cur = node;
            loop {
                seen[cur] = true;
                let nx = self.arc_partner(p, r, cur);
                seen[nx] = true;
                let g = self.glue_partner(nx).expect("closed loop");
                if g == node {
                    break;
                }
                cur = g;
            }
        }
        Glued { m, loops }
    }

    /// Caps the loops, evaluates, and accumulates into `out[λ·2^lt + μ]`.
    #[allow(clippy::too_many_arguments)]
    fn finish(
        &self,
        base: &Surface,
        src_loops: &[usize],
        tgt_loops: &[usize],
        m_src: &[u8],
        m_tgt: &[u8],
        owner_new: &[usize],
        out: &mut [Mor],
    ) {
        let (of, mins) = cycles(m_src, m_tgt);
        let circles: Vec<(usize, u8)> = mins.iter().map(|&m| (owner_new[m as usize], m)).collect();
        let marked = self.marked_new.map(|z| of[z] as usize);
        let nt = 1usize << tgt_loops.len();
        for lam in 0..(1usize << src_loops.len()) {
            for mu in 0..nt {
                let mut s = base.clone();
                for (i, &o) in src_loops.iter().enumerate() {
                    s.cap(o, (lam >> i) & 1 == 1);
                }
                for (j, &o) in tgt_loops.iter().enumerate() {
                    s.cap(o, (mu >> j) & 1 == 0);
                }
                let res = s.evaluate(&circles, marked);
                mor_add(&mut out[lam * nt + mu], &res);
            }
        }
    }

    /// `mor ⊗ id` on resolution `r`, between the delooped summands of the
    /// glued objects. Result indexed by `λ·2^(loops of gy) + μ`.
    fn extend(&self, r: usize, px: &[u8], gx: &Glued, py: &[u8], gy: &Glued, mor: &[u64]) -> Vec<Mor> {
        let mut out = vec![Vec::new(); (1 << gx.loops.len()) << gy.loops.len()];
        let (cyc, mins) = cycles(px, py);
        let nd = mins.len();
        let strip = |j: usize| nd + j;
        let owner = |e: Elem| match e {
            Elem::Old(i) => cyc[i] as usize,
            Elem::Arc(j) => strip(j),
        };
        let owner_new: Vec<usize> = self
            .new_src
            .iter()
            .map(|s| match *s {
                Src::Old(i) => cyc[i] as usize,
                Src::Slot(s) => strip(self.arc_of[r][s]),
            })
            .collect();
        let src_loops: Vec<usize> = gx.loops.iter().map(|&e| owner(e)).collect();
        let tgt_loops: Vec<usize> = gy.loops.iter().map(|&e| owner(e)).collect();
        for &t in mor {
            let mut s = Surface::with_capacity(nd + 2 + 2 * (src_loops.len() + tgt_loops.len()));
            for &m in &mins {
                s.piece(((t >> m) & 1) as u32);
            }
            for _ in self.piece.arcs(r) {
                s.piece(0);
            }
            for (slot, o) in self.slot_old.iter().enumerate() {
                if let Some(i) = *o {
                    s.glue(cyc[i] as usize, strip(self.arc_of[r][slot]));
                }
            }
            for (slot, o) in self.slot_self.iter().enumerate() {
                if let Some(t2) = *o {
                    if slot < t2 {
                        s.glue(strip(self.arc_of[r][slot]), strip(self.arc_of[r][t2]));
                    }
                }
            }
            self.finish(&s, &src_loops, &tgt_loops, &gx.m, &gy.m, &owner_new, &mut out);
        }
        out
    }

    /// `id ⊗ saddle` from resolution 0 to resolution 1 of a crossing.
    fn saddle(&self, px: &[u8], g0: &Glued, g1: &Glued) -> Vec<Mor> {
        let mut out = vec![Vec::new(); (1 << g0.loops.len()) << g1.loops.len()];
        let (cyc, mins) = cycles(px, px);
        let saddle = mins.len();
        let owner = |e: Elem| match e {
            Elem::Old(i) => cyc[i] as usize,
            Elem::Arc(_) => saddle,
        };
        let owner_new: Vec<usize> = self
            .new_src
            .iter()
            .map(|s| match *s {
                Src::Old(i) => cyc[i] as usize,
                Src::Slot(_) => saddle,
            })
            .collect();
        let mut s = Surface::with_capacity(saddle + 5);
        for _ in 0..=saddle {
            s.piece(0);
        }
        for o in self.slot_old.iter().flatten() {
            s.glue(cyc[*o] as usize, saddle);
        }
        for (slot, o) in self.slot_self.iter().enumerate() {
            if let Some(t) = *o {
                if slot < t {
                    s.glue(saddle, saddle);
                }
            }
        }
        let src_loops: Vec<usize> = g0.loops.iter().map(|&e| owner(e)).collect();
        let tgt_loops: Vec<usize> = g1.loops.iter().map(|&e| owner(e)).collect();
        self.finish(&s, &src_loops, &tgt_loops, &g0.m, &g1.m, &owner_new, &mut out);
        out
    }
}

/// Which induced map to carry through cancellations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrackKind {
    /// Maps from the current complex to the tracked objects.
    Into,
    /// Maps from the tracked objects to the current complex.
    OutOf,
}

/// A chain map between the current complex and a fixed list of objects,
/// updated as the complex is simplified.
#[derive(Clone, Debug)]
pub struct Tracker {
    pub kind: TrackKind,
    /// Matchings of the tracked objects.
    pub orig: Vec<Matching>,
    /// Per current object: tracked object → morphism.
    pub maps: Vec<BTreeMap<usize, Mor>>,
}

/// A complex over crossingless matchings of a boundary.
#[derive(Clone, Debug)]
pub struct TangleComplex {
    bdry: Vec<Pt>,
    marked: Option<Pt>,
    objs: Vec<Option<Obj>>,
    out: Vec<BTreeMap<usize, Mor>>,
    inc: Vec<BTreeSet<usize>>,
}

impl TangleComplex {
    /// The complex of the empty tangle: one empty matching.
    pub fn empty(marked: Option<Pt>) -> Self {
        TangleComplex {
            bdry: Vec::new(),
            marked,
            objs: vec![Some(Obj { m: Vec::new(), h: 0, q: 0 })],
            out: vec![BTreeMap::new()],
            inc: vec![BTreeSet::new()],
        }
    }

    pub fn boundary(&self) -> &[Pt] {
        &self.bdry
    }

    pub fn marked(&self) -> Option<Pt> {
        self.marked
    }

    fn marked_pos(&self) -> Option<usize> {
        self.marked.and_then(|m| self.bdry.binary_search(&m).ok())
    }

    /// Indices of live objects, ascending.
    pub fn live(&self) -> Vec<usize> {
        (0..self.objs.len()).filter(|&i| self.objs[i].is_some()).collect()
    }

    pub fn len(&self) -> usize {
        self.objs.iter().filter(|o| o.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn obj(&self, i: usize) -> &Obj {
        self.objs[i].as_ref().expect("live object")
    }

    /// Differential entries leaving object `i`.
    pub fn out(&self, i: usize) -> &BTreeMap<usize, Mor> {
        &self.out[i]
    }

    /// Glues one piece; the result is not simplified.
    pub fn attach(&self, piece: Piece) -> (TangleComplex, Vec<Origin>) {
        let step = Step::new(&self.bdry, self.marked, piece);
        let nr = piece.resolutions();
        let live = self.live();
        let mut glued: BTreeMap<usize, Vec<Glued>> = BTreeMap::new();
        let mut first: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut objs = Vec::new();
        let mut origins = Vec::new();
        for &x in &live {
            let ox = self.obj(x);
            let gs: Vec<Glued> = (0..nr).map(|r| step.glue(&ox.m, r)).collect();
            for (r, g) in gs.iter().enumerate() {
                first.insert((x, r), objs.len());
                let nl = g.loops.len();
                for lab in 0..(1u32 << nl) {
                    let shift: i32 = (0..nl).map(|i| if (lab >> i) & 1 == 1 { -1 } else { 1 }).sum();
                    objs.push(Some(Obj { m: g.m.clone(), h: ox.h + r as i32, q: ox.q + r as i32 + shift }));
                    origins.push(Origin { old: x, r: r as u8, labels: lab });
                }
            }
            glued.insert(x, gs);
        }
        let n = objs.len();
        let mut next = TangleComplex {
            bdry: step.new_bdry.clone(),
            marked: self.marked,
            objs,
            out: vec![BTreeMap::new(); n],
            inc: vec![BTreeSet::new(); n],
        };
        let put = |next: &mut TangleComplex, a0: usize, b0: usize, ntgt: usize, ms: Vec<Mor>| {
            for (k, m) in ms.into_iter().enumerate() {
                if !m.is_empty() {
                    next.add_entry(a0 + k / ntgt, b0 + k % ntgt, &m);
                }
            }
        };
        for &x in &live {
            let px = &self.obj(x).m;
            for (&y, mor) in &self.out[x] {
                let py = &self.obj(y).m;
                for r in 0..nr {
                    let (gx, gy) = (&glued[&x][r], &glued[&y][r]);
                    let ms = step.extend(r, px, gx, py, gy, mor);
                    put(&mut next, first[&(x, r)], first[&(y, r)], 1 << gy.loops.len(), ms);
                }
            }
            if nr == 2 {
                let (g0, g1) = (&glued[&x][0], &glued[&x][1]);
                let ms = step.saddle(px, g0, g1);
                put(&mut next, first[&(x, 0)], first[&(x, 1)], 1 << g1.loops.len(), ms);
            }
        }
        next.debug_check_degrees();
        (next, origins)
    }

    fn add_entry(&mut self, s: usize, t: usize, m: &[u64]) {
        let e = self.out[s].entry(t).or_default();
        mor_add(e, m);
        if e.is_empty() {
            self.out[s].remove(&t);
            self.inc[t].remove(&s);
        } else {
            self.inc[t].insert(s);
        }
    }

    fn remove(&mut self, v: usize) {
        for s in core::mem::take(&mut self.inc[v]) {
            self.out[s].remove(&v);
        }
        for t in core::mem::take(&mut self.out[v]).into_keys() {
            self.inc[t].remove(&v);
        }
        self.objs[v] = None;
    }

    fn is_iso(&self, x: usize, y: usize, m: &Mor) -> bool {
        let (a, b) = (self.obj(x), self.obj(y));
        m.len() == 1 && m[0] == 0 && a.q == b.q && a.m == b.m
    }

    /// Cancels isomorphisms until none remain.
    pub fn simplify(&mut self, mut tracker: Option<&mut Tracker>) {
        loop {
            let mut changed = false;
            for x in 0..self.objs.len() {
                if self.objs[x].is_none() {
                    continue;
                }
                let y = self.out[x].iter().find(|(y, m)| self.is_iso(x, **y, m)).map(|(y, _)| *y);
                if let Some(y) = y {
                    self.cancel(x, y, tracker.as_deref_mut());
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.debug_check_degrees();
    }

    /// Gaussian elimination along the identity entry `x -> y`.
    fn cancel(&mut self, x: usize, y: usize, tracker: Option<&mut Tracker>) {
        let mk = self.marked_pos();
        let mx = self.obj(x).m.clone();
        let sources: Vec<(usize, Mor)> =
            self.inc[y].iter().filter(|&&s| s != x).map(|&s| (s, self.out[s][&y].clone())).collect();
        let targets: Vec<(usize, Mor)> =
            self.out[x].iter().filter(|(t, _)| **t != y).map(|(t, m)| (*t, m.clone())).collect();
        for (s, ds) in &sources {
            for (t, gt) in &targets {
                let c = compose(&self.obj(*s).m, &mx, &self.obj(*t).m, ds, gt, mk);
                if !c.is_empty() {
                    self.add_entry(*s, *t, &c);
                }
            }
        }
        if let Some(tr) = tracker {
            match tr.kind {
                TrackKind::Into => {
                    let fx = core::mem::take(&mut tr.maps[x]);
                    for (s, ds) in &sources {
                        for (o, mu) in &fx {
                            let c = compose(&self.obj(*s).m, &mx, &tr.orig[*o], ds, mu, mk);
                            let e = tr.maps[*s].entry(*o).or_default();
                            mor_add(e, &c);
                            if e.is_empty() {
                                tr.maps[*s].remove(o);
                            }
                        }
                    }
                }
                TrackKind::OutOf => {
                    let gy = core::mem::take(&mut tr.maps[y]);
                    for (t, gt) in &targets {
                        for (o, nu) in &gy {
                            let c = compose(&tr.orig[*o], &mx, &self.obj(*t).m, nu, gt, mk);
                            let e = tr.maps[*t].entry(*o).or_default();
                            mor_add(e, &c);
                            if e.is_empty() {
                                tr.maps[*t].remove(o);
                            }
                        }
                    }
                }
            }
            tr.maps[x].clear();
            tr.maps[y].clear();
        }
        self.remove(x);
        self.remove(y);
    }

    fn debug_check_degrees(&self) {
        if cfg!(debug_assertions) {
            for x in self.live() {
                let ox = self.obj(x);
                for (&y, m) in &self.out[x] {
                    let oy = self.obj(y);
                    assert_eq!(oy.h, ox.h + 1);
                    for &t in m {
                        assert_eq!(super::cob::degree(&ox.m, &oy.m, t), ox.q - oy.q, "inhomogeneous differential");
                    }
                }
            }
        }
    }

    /// d∘d = 0, checked entry by entry.
    pub fn is_chain_complex(&self) -> bool {
        let mk = self.marked_pos();
        for x in self.live() {
            let mut acc: BTreeMap<usize, Mor> = BTreeMap::new();
            for (&y, a) in &self.out[x] {
                for (&z, b) in &self.out[y] {
                    let c = compose(&self.obj(x).m, &self.obj(y).m, &self.obj(z).m, a, b, mk);
                    mor_add(acc.entry(z).or_default(), &c);
                }
            }
            if acc.values().any(|m| !m.is_empty()) {
                return false;
            }
        }
        true
    }

    /// Glues a crossing and simplifies, optionally tracking the map to the
    /// resolution-0 part (`Into`) or from the resolution-1 part (`OutOf`).
    /// The tracked objects are listed by old object index.
    pub fn add_crossing(&self, c: [Pt; 4], track: Option<TrackKind>) -> (TangleComplex, Option<Tracker>, Vec<(usize, Matching)>) {
        let (mut next, origins) = self.attach(Piece::Crossing(c));
        let mut tracked = Vec::new();
        let tracker = track.map(|kind| {
            let want = if kind == TrackKind::Into { 0 } else { 1 };
            let mut maps = vec![BTreeMap::new(); origins.len()];
            let mut orig = Vec::new();
            for (i, o) in origins.iter().enumerate() {
                if o.r == want {
                    assert_eq!(o.labels, 0, "tracked resolution must not close loops");
                    maps[i].insert(orig.len(), vec![0]);
                    orig.push(next.obj(i).m.clone());
                    tracked.push((o.old, next.obj(i).m.clone()));
                }
            }
            Tracker { kind, orig, maps }
        });
        let mut tracker = tracker;
        next.simplify(tracker.as_mut());
        (next, tracker, tracked)
    }

    /// Glues a piece and simplifies.
    pub fn add(&self, piece: Piece) -> TangleComplex {
        let (mut next, _) = self.attach(piece);
        next.simplify(None);
        next
    }
}

/// Extends a morphism between two objects over `bdry` by a crossingless
/// strand, returning the scalar (or basis) entries between their delooped
/// summands, indexed `λ·2^(target loops) + μ`, plus the loop counts.
pub fn extend_by_strand(bdry: &[Pt], marked: Option<Pt>, strand: [Pt; 2], p: &[u8], q: &[u8], mor: &[u64]) -> (Vec<Mor>, usize, usize) {
    let step = Step::new(bdry, marked, Piece::Strand(strand));
    let gp = step.glue(p, 0);
    let gq = step.glue(q, 0);
    let out = step.extend(0, p, &gp, q, &gq, mor);
    (out, gp.loops.len(), gq.loops.len())
}

/// Greedy scan order: start at `first`, then repeatedly take the crossing
/// with the most ends already on the boundary.
pub fn scan_order(crossings: &[[Pt; 4]], first: usize) -> Vec<usize> {
    let n = crossings.len();
    let mut done = vec![false; n];
    let mut open: BTreeMap<Pt, usize> = BTreeMap::new();
    let mut order = Vec::with_capacity(n);
    let take = |i: usize, done: &mut Vec<bool>, open: &mut BTreeMap<Pt, usize>, order: &mut Vec<usize>| {
        done[i] = true;
        order.push(i);
        for &a in &crossings[i] {
            let e = open.entry(a).or_default();
            *e += 1;
        }
    };
    if n == 0 {
        return order;
    }
    take(first, &mut done, &mut open, &mut order);
    // Ends of an arc seen once are on the boundary; seen twice, interior.
    let mut total: BTreeMap<Pt, usize> = BTreeMap::new();
    for &a in crossings.iter().flatten() {
        *total.entry(a).or_default() += 1;
    }
    while order.len() < n {
        let score = |i: usize| -> (usize, i64) {
            let mut hits = 0;
            let mut fresh = 0i64;
            for &a in &crossings[i] {
                let seen = open.get(&a).copied().unwrap_or(0);
                if seen > 0 && seen < total[&a] {
                    hits += 1;
                } else {
                    fresh += 1;
                }
            }
            (hits, -fresh)
        };
        let best = (0..n).filter(|&i| !done[i]).max_by(|&a, &b| score(a).cmp(&score(b)).then(b.cmp(&a))).unwrap();
        take(best, &mut done, &mut open, &mut order);
    }
    order
}
