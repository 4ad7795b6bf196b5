//! Sutured tangles and closed link diagrams in PD notation.
//!
//! A crossing `[a, b, c, d]` lists its four arcs counterclockwise, starting
//! from an under-strand end, so `a`–`c` is the under strand and `b`–`d` the
//! over strand. The 0-smoothing joins `(a, b)` and `(c, d)`; the 1-smoothing
//! joins `(a, d)` and `(b, c)`. With under `a → c`, the crossing is positive
//! exactly when the over strand runs `d → b`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub type Arc = u32;
pub type Crossing = [Arc; 4];

/// A slot in a diagram: crossing index and position 0..4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub crossing: usize,
    pub pos: usize,
}

/// The four boundary slots of a tangle, each naming the arc that ends there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub b0: Arc,
    pub b1: Arc,
    pub t0: Arc,
    pub t1: Arc,
}

impl Boundary {
    /// Slots in counterclockwise order around the tangle disk.
    pub fn ccw(&self) -> [Arc; 4] {
        [self.b0, self.b1, self.t1, self.t0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuturedTangle {
    pub crossings: Vec<Crossing>,
    pub boundary: Boundary,
    pub name: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub endpoints: usize,
    pub planar: bool,
    pub braid_like: bool,
    pub closed_components: usize,
}

/// Where the reduced theory's basepoint sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basepoint {
    Arc(Arc),
    /// On a crossingless unknotted component.
    FreeLoop,
}

/// A closed, oriented link diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDiagram {
    pub crossings: Vec<Crossing>,
    /// `incoming[c][i]` is true when the strand enters crossing `c` at position `i`.
    pub incoming: Vec<[bool; 4]>,
    pub basepoint: Basepoint,
    /// Indices of the twist-region crossings, in twist order.
    pub distinguished: Vec<usize>,
    /// Crossingless components, each an unknot split from the rest.
    pub free_loops: usize,
}

fn malformed(reason: &str, arcs: Vec<Arc>) -> Error {
    Error::Malformed { reason: String::from(reason), arcs }
}

/// Slots of every arc in a crossing list.
fn arc_slots(crossings: &[Crossing]) -> BTreeMap<Arc, Vec<Slot>> {
    let mut m: BTreeMap<Arc, Vec<Slot>> = BTreeMap::new();
    for (c, x) in crossings.iter().enumerate() {
        for (pos, &a) in x.iter().enumerate() {
            m.entry(a).or_default().push(Slot { crossing: c, pos });
        }
    }
    m
}

/// Euler-characteristic planarity test for a 4-valent rotation system with an
/// optional extra vertex whose rotation is given explicitly. Every arc must
/// have exactly two ends among all vertices.
fn rotation_system_is_planar(crossings: &[Crossing], extra: Option<[Arc; 4]>) -> bool {
    // Darts: (vertex, position). Crossings are vertices 0..k, extra is k.
    let mut verts: Vec<[Arc; 4]> = crossings.to_vec();
    if let Some(e) = extra {
        verts.push(e);
    }
    let nv = verts.len();
    let mut ends: BTreeMap<Arc, Vec<(usize, usize)>> = BTreeMap::new();
    for (v, x) in verts.iter().enumerate() {
        for (p, &a) in x.iter().enumerate() {
            ends.entry(a).or_default().push((v, p));
        }
    }
    if ends.values().any(|e| e.len() != 2) {
        return false;
    }
    let dart = |v: usize, p: usize| v * 4 + p;
    let mut opposite = vec![0usize; nv * 4];
    for e in ends.values() {
        let (a, b) = (e[0], e[1]);
        opposite[dart(a.0, a.1)] = dart(b.0, b.1);
        opposite[dart(b.0, b.1)] = dart(a.0, a.1);
    }
    let mut seen = vec![false; nv * 4];
    let mut faces = 0usize;
    for d0 in 0..nv * 4 {
        if seen[d0] {
            continue;
        }
        faces += 1;
        let mut d = d0;
        while !seen[d] {
            seen[d] = true;
            let o = opposite[d];
            d = (o / 4) * 4 + (o % 4 + 1) % 4;
        }
    }
    // Connected components of the underlying graph.
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for e in ends.values() {
        let (a, b) = (find(&mut parent, e[0].0), find(&mut parent, e[1].0));
        parent[a] = b;
    }
    let comps = (0..nv).filter(|&v| find(&mut parent, v) == v).count();
    let v = nv as i64;
    let e = ends.len() as i64;
    v - e + faces as i64 == 2 * comps as i64
}

impl SuturedTangle {
    pub fn new(crossings: Vec<Crossing>, boundary: Boundary, name: impl Into<String>) -> Self {
        SuturedTangle { crossings, boundary, name: name.into() }
    }

    /// Largest arc identifier in use.
    pub fn max_arc(&self) -> Arc {
        let b = self.boundary.ccw();
        self.crossings.iter().flatten().chain(b.iter()).copied().max().unwrap_or(0)
    }

    /// Arc multiplicities, with boundary slots counted as arc ends.
    fn check_multiplicities(&self) -> Result<()> {
        let mut count: BTreeMap<Arc, usize> = BTreeMap::new();
        for &a in self.crossings.iter().flatten() {
            *count.entry(a).or_default() += 1;
        }
        let mut bad_zero = Vec::new();
        for a in self.boundary.ccw() {
            if a == 0 {
                bad_zero.push(a);
            }
            *count.entry(a).or_default() += 1;
        }
        if self.crossings.iter().flatten().any(|&a| a == 0) || !bad_zero.is_empty() {
            return Err(malformed("arc identifiers must be positive", vec![0]));
        }
        let bad: Vec<Arc> = count.iter().filter(|(_, &n)| n != 2).map(|(&a, _)| a).collect();
        if !bad.is_empty() {
            return Err(malformed("every arc needs exactly two ends", bad));
        }
        Ok(())
    }

    fn trace_from(
        &self,
        mut arc: Arc,
        mut entry: Slot,
        slots: &BTreeMap<Arc, Vec<Slot>>,
        mut path: Vec<(Arc, Option<Slot>)>,
    ) -> (Arc, Vec<(Arc, Option<Slot>)>) {
        loop {
            path.push((arc, Some(entry)));
            let exit = Slot { crossing: entry.crossing, pos: (entry.pos + 2) % 4 };
            let out = self.crossings[exit.crossing][exit.pos];
            let os = &slots[&out];
            if os.len() == 1 {
                path.push((out, None));
                return (out, path);
            }
            let nxt = if os[0] == exit { os[1] } else { os[0] };
            arc = out;
            entry = nxt;
        }
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        self.check_multiplicities()?;
        let b = self.boundary;
        let planar = rotation_system_is_planar(&self.crossings, Some([b.b0, b.t0, b.t1, b.b1]));
        let strands = self.open_strands();
        let braid_like = strands.len() == 2 && strands.iter().all(|&(from, to)| (from < 2) != (to < 2));
        let closed_components = self.closed_components().len();
        Ok(ValidationReport { endpoints: 4, planar, braid_like, closed_components })
    }

    /// The two open strands as pairs of boundary slots, with slots numbered
    /// b0 = 0, b1 = 1, t0 = 2, t1 = 3. Each pair starts at its lower slot.
    pub fn open_strands(&self) -> Vec<(usize, usize)> {
        let slots = arc_slots(&self.crossings);
        let b = self.boundary;
        let names = [b.b0, b.b1, b.t0, b.t1];
        let mut out = Vec::new();
        let mut used = [false; 4];
        for s in 0..4 {
            if used[s] {
                continue;
            }
            let start = names[s];
            let end_arc = match slots.get(&start) {
                None => start,
                Some(v) => self.trace_from(start, v[0], &slots, Vec::new()).0,
            };
            let Some(e) = (0..4).find(|&e| e != s && !used[e] && names[e] == end_arc) else {
                continue;
            };
            used[s] = true;
            used[e] = true;
            out.push((s, e));
        }
        out
    }

    /// Closed components inside the tangle, as sets of arcs.
    pub fn closed_components(&self) -> Vec<BTreeSet<Arc>> {
        let slots = arc_slots(&self.crossings);
        let mut on_strand: BTreeSet<Arc> = BTreeSet::new();
        let b = self.boundary;
        for start in [b.b0, b.b1, b.t0, b.t1] {
            if let Some(v) = slots.get(&start) {
                let (_, path) = self.trace_from(start, v[0], &slots, Vec::new());
                on_strand.extend(path.iter().map(|p| p.0));
            }
            on_strand.insert(start);
        }
        let mut comps = Vec::new();
        let mut seen = on_strand;
        for (&a, occ) in &slots {
            if seen.contains(&a) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut arc = a;
            let mut entry = occ[0];
            loop {
                comp.insert(arc);
                seen.insert(arc);
                let exit = Slot { crossing: entry.crossing, pos: (entry.pos + 2) % 4 };
                let out = self.crossings[exit.crossing][exit.pos];
                let os = &slots[&out];
                let nxt = if os[0] == exit { os[1] } else { os[0] };
                if out == a {
                    break;
                }
                arc = out;
                entry = nxt;
            }
            comps.push(comp);
        }
        comps
    }

    pub fn is_braid_like(&self) -> bool {
        self.validate().map(|r| r.braid_like).unwrap_or(false)
    }

    /// Crossings switched; the tangle's own crossing order and arcs are kept.
    /// Orientation of the tangle's crossings: open strands run from their
    /// lower-numbered slot (bottom first), closed components by first traversal.
    pub fn orientation(&self) -> Vec<[bool; 4]> {
        let slots = arc_slots(&self.crossings);
        let b = self.boundary;
        let names = [b.b0, b.b1, b.t0, b.t1];
        let seeds: Vec<(Arc, Slot)> = self
            .open_strands()
            .iter()
            .filter_map(|&(s, _)| slots.get(&names[s]).map(|v| (names[s], v[0])))
            .collect();
        orient(&self.crossings, &seeds)
    }

    /// Every crossing rotated to start at its incoming under-strand.
    pub fn normalized(&self) -> SuturedTangle {
        let inc = self.orientation();
        SuturedTangle {
            crossings: self.crossings.iter().zip(&inc).map(|(&x, &i)| normalize_crossing(x, i).0).collect(),
            boundary: self.boundary,
            name: self.name.clone(),
        }
    }

    /// All crossings switched. The result is normalized, so mirroring twice
    /// returns `self.normalized()`.
    pub fn mirror(&self) -> SuturedTangle {
        let inc = self.orientation();
        SuturedTangle {
            crossings: self.crossings.iter().zip(&inc).map(|(&x, &i)| mirror_crossing(x, i).0).collect(),
            boundary: self.boundary,
            name: self.name.clone(),
        }
    }
}

/// Rotates a crossing by two positions if needed so that it starts at the
/// incoming under-strand.
pub fn normalize_crossing(x: Crossing, inc: [bool; 4]) -> (Crossing, [bool; 4]) {
    if inc[0] {
        (x, inc)
    } else {
        ([x[2], x[3], x[0], x[1]], [inc[2], inc[3], inc[0], inc[1]])
    }
}

/// The switched crossing, starting at its incoming under-strand.
pub fn mirror_crossing(x: Crossing, inc: [bool; 4]) -> (Crossing, [bool; 4]) {
    normalize_crossing([x[1], x[2], x[3], x[0]], [inc[1], inc[2], inc[3], inc[0]])
}

/// Union-find over arc identifiers.
#[derive(Default)]
struct ArcJoin {
    parent: BTreeMap<Arc, Arc>,
}

impl ArcJoin {
    fn find(&mut self, a: Arc) -> Arc {
        let p = *self.parent.get(&a).unwrap_or(&a);
        if p == a {
            return a;
        }
        let r = self.find(p);
        self.parent.insert(a, r);
        r
    }

    /// Joins two arcs keeping `keep`'s representative.
    fn join(&mut self, keep: Arc, other: Arc) {
        let (k, o) = (self.find(keep), self.find(other));
        if k != o {
            self.parent.insert(o, k);
        }
    }
}

/// Layout of a twist closure: crossing list and the arcs at the top of the
/// twist region after each step.
#[derive(Clone, Debug)]
pub struct TwistLayout {
    pub twist_crossings: Vec<Crossing>,
    /// `tops[k]` = (left, right) arcs after `k` twists; `tops[0] = (t0, t1)`.
    pub tops: Vec<(Arc, Arc)>,
}

/// Builds `|n|` twist crossings on top of the tangle's `t0`, `t1` ends,
/// allocating fresh arc ids above `first_free`.
pub fn twist_layout(t0: Arc, t1: Arc, n: i64, first_free: Arc) -> TwistLayout {
    let mut next = first_free;
    let (mut x, mut y) = (t0, t1);
    let mut twist_crossings = Vec::new();
    let mut tops = vec![(x, y)];
    for _ in 0..n.unsigned_abs() {
        let (ne, nw) = (next, next + 1);
        next += 2;
        // Strands run upward: x enters at SW, y at SE.
        let c = if n > 0 { [y, ne, nw, x] } else { [x, y, ne, nw] };
        twist_crossings.push(c);
        x = nw;
        y = ne;
        tops.push((x, y));
    }
    TwistLayout { twist_crossings, tops }
}

fn rename(xs: &mut [Crossing], j: &mut ArcJoin) {
    for x in xs.iter_mut() {
        for a in x.iter_mut() {
            *a = j.find(*a);
        }
    }
}

/// Orients a closed crossing list. `seeds` gives arcs with the slot at
/// which they are entered; components not reached are oriented by first
/// traversal from their lowest arc.
pub fn orient(crossings: &[Crossing], seeds: &[(Arc, Slot)]) -> Vec<[bool; 4]> {
    let slots = arc_slots(crossings);
    let mut incoming = vec![[false; 4]; crossings.len()];
    let mut done: BTreeSet<Arc> = BTreeSet::new();
    let walk = |arc0: Arc, entry0: Slot, incoming: &mut Vec<[bool; 4]>, done: &mut BTreeSet<Arc>| {
        let (mut arc, mut entry) = (arc0, entry0);
        loop {
            if !done.insert(arc) {
                break;
            }
            incoming[entry.crossing][entry.pos] = true;
            let exit = Slot { crossing: entry.crossing, pos: (entry.pos + 2) % 4 };
            let out = crossings[exit.crossing][exit.pos];
            let os = &slots[&out];
            if os.len() < 2 {
                done.insert(out);
                break;
            }
            let nxt = if os[0] == exit { os[1] } else { os[0] };
            arc = out;
            entry = nxt;
        }
    };
    for &(a, s) in seeds {
        if !done.contains(&a) {
            walk(a, s, &mut incoming, &mut done);
        }
    }
    for (&a, occ) in &slots {
        if !done.contains(&a) && occ.len() == 2 {
            // First traversal leaves the first occurrence, entering the second.
            walk(a, occ[1], &mut incoming, &mut done);
        }
    }
    incoming
}

impl SuturedTangle {
    /// Braid-like orientation seeds: for each of b0, b1 the slot where the
    /// strand first enters a crossing of `crossings` (which extends the
    /// tangle's own crossing list with twist crossings).
    fn strand_seeds(&self, crossings: &[Crossing], join: &mut ArcJoin) -> Vec<(Arc, Slot)> {
        let slots = arc_slots(crossings);
        let own = arc_slots(&self.crossings);
        let mut seeds = Vec::new();
        for b in [self.boundary.b0, self.boundary.b1] {
            let rep = join.find(b);
            let Some(occ) = slots.get(&rep) else { continue };
            let slot = if let Some(o) = own.get(&b) {
                // The tangle crossing where b enters; same index in the closure.
                o[0]
            } else {
                // Crossingless strand: it enters the twist region from below,
                // i.e. at the SW or SE slot of the first twist crossing.
                *occ
                    .iter()
                    .find(|s| s.crossing >= self.crossings.len() && is_twist_input(crossings[s.crossing], rep, s.pos))
                    .unwrap_or(&occ[0])
            };
            seeds.push((rep, slot));
        }
        seeds
    }

    /// `T(n)`: `|n|` half-twists on top of `t0, t1`, then `b0`, `b1` joined
    /// to the left and right top ends.
    pub fn closure(&self, n: i64) -> Result<PlanarDiagram> {
        let report = self.validate()?;
        if !report.planar {
            return Err(malformed("tangle is not planar", Vec::new()));
        }
        if !report.braid_like {
            return Err(Error::NotBraidLike);
        }
        let b = self.boundary;
        let layout = twist_layout(b.t0, b.t1, n, self.max_arc() + 1);
        let (l, r) = *layout.tops.last().expect("tops is nonempty");
        let mut join = ArcJoin::default();
        join.join(b.b0, l);
        join.join(b.b1, r);
        let mut crossings = self.crossings.clone();
        let k = crossings.len();
        crossings.extend(layout.twist_crossings.iter().copied());
        rename(&mut crossings, &mut join);
        let seeds = self.strand_seeds(&crossings, &mut join);
        let incoming = orient(&crossings, &seeds);
        let used: BTreeSet<Arc> = crossings.iter().flatten().copied().collect();
        let reps: BTreeSet<Arc> = [b.b0, b.b1, b.t0, b.t1].iter().map(|&a| join.find(a)).collect();
        let free_loops = reps.iter().filter(|a| !used.contains(a)).count();
        let base = join.find(b.b0);
        let basepoint = if used.contains(&base) { Basepoint::Arc(base) } else { Basepoint::FreeLoop };
        Ok(PlanarDiagram {
            crossings,
            incoming,
            basepoint,
            distinguished: (k..k + layout.twist_crossings.len()).collect(),
            free_loops,
        })
    }

    /// `T(1/0)`: caps `b0`–`b1` and `t0`–`t1`.
    pub fn closure_infinity(&self) -> Result<PlanarDiagram> {
        let report = self.validate()?;
        if !report.planar {
            return Err(malformed("tangle is not planar", Vec::new()));
        }
        let b = self.boundary;
        let mut join = ArcJoin::default();
        join.join(b.b0, b.b1);
        join.join(b.t0, b.t1);
        let mut crossings = self.crossings.clone();
        rename(&mut crossings, &mut join);
        // Orientation: the b0 strand upward, then the rest by propagation,
        // which reverses the other open strand.
        let mut seeds = Vec::new();
        if report.braid_like {
            let own = arc_slots(&self.crossings);
            if let Some(o) = own.get(&b.b0) {
                seeds.push((join.find(b.b0), o[0]));
            }
        }
        let incoming = orient(&crossings, &seeds);
        let used: BTreeSet<Arc> = crossings.iter().flatten().copied().collect();
        let reps: BTreeSet<Arc> = [b.b0, b.t0].iter().map(|&a| join.find(a)).collect();
        let free_loops = reps.iter().filter(|a| !used.contains(a)).count();
        let base = join.find(b.b0);
        let basepoint = if used.contains(&base) { Basepoint::Arc(base) } else { Basepoint::FreeLoop };
        Ok(PlanarDiagram { crossings, incoming, basepoint, distinguished: Vec::new(), free_loops })
    }

    /// `n_-(T(1/0)) - n_-(T(0))`, with `T(1/0)` oriented by reversing one
    /// strand of the braid-like orientation.
    pub fn c_t(&self) -> Result<i64> {
        if !self.is_braid_like() {
            return Err(Error::NotBraidLike);
        }
        let inf = self.closure_infinity()?;
        let zero = self.closure(0)?;
        Ok(inf.sign_counts().1 as i64 - zero.sign_counts().1 as i64)
    }
}

fn is_twist_input(c: Crossing, arc: Arc, pos: usize) -> bool {
    // Positive twists list inputs at positions 0 (SE) and 3 (SW);
    // negative ones at 0 (SW) and 1 (SE).
    c[pos] == arc && (pos == 0 || pos == 3 || pos == 1)
}

/// Sign of one crossing from its incoming flags.
pub fn crossing_sign(inc: [bool; 4]) -> i8 {
    if (inc[0] && inc[3]) || (inc[2] && inc[1]) {
        1
    } else {
        -1
    }
}

impl PlanarDiagram {
    /// Builds a diagram from crossings alone, oriented by first traversal,
    /// with the basepoint on the lowest arc.
    pub fn from_crossings(crossings: Vec<Crossing>) -> Result<Self> {
        let slots = arc_slots(&crossings);
        let bad: Vec<Arc> = slots.iter().filter(|(_, v)| v.len() != 2).map(|(&a, _)| a).collect();
        if !bad.is_empty() {
            return Err(malformed("every arc must occur exactly twice", bad));
        }
        let d = PlanarDiagram {
            incoming: orient(&crossings, &[]),
            basepoint: Basepoint::FreeLoop,
            crossings,
            distinguished: Vec::new(),
            free_loops: 0,
        };
        let mut d = d;
        d.basepoint = match d.crossings.iter().flatten().min() {
            Some(&a) => Basepoint::Arc(a),
            None => {
                d.free_loops = 1;
                Basepoint::FreeLoop
            }
        };
        d.check()?;
        Ok(d)
    }

    /// The 0-crossing unknot.
    pub fn unknot() -> Self {
        PlanarDiagram {
            crossings: Vec::new(),
            incoming: Vec::new(),
            basepoint: Basepoint::FreeLoop,
            distinguished: Vec::new(),
            free_loops: 1,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Structural checks: arc multiplicities and orientation consistency.
    pub fn check(&self) -> Result<()> {
        let slots = arc_slots(&self.crossings);
        let bad: Vec<Arc> = slots.iter().filter(|(_, v)| v.len() != 2).map(|(&a, _)| a).collect();
        if !bad.is_empty() {
            return Err(malformed("every arc must occur exactly twice", bad));
        }
        if self.crossings.iter().flatten().any(|&a| a == 0) {
            return Err(malformed("arc identifiers must be positive", vec![0]));
        }
        if self.incoming.len() != self.crossings.len() {
            return Err(malformed("orientation table has the wrong length", Vec::new()));
        }
        for (c, inc) in self.incoming.iter().enumerate() {
            if inc[0] == inc[2] || inc[1] == inc[3] {
                return Err(malformed("inconsistent orientation at a crossing", self.crossings[c].to_vec()));
            }
        }
        for (&a, v) in &slots {
            let (s, t) = (v[0], v[1]);
            if self.incoming[s.crossing][s.pos] == self.incoming[t.crossing][t.pos] {
                return Err(malformed("arc oriented inconsistently", vec![a]));
            }
        }
        if let Basepoint::Arc(a) = self.basepoint {
            if !slots.contains_key(&a) {
                return Err(malformed("basepoint arc not in diagram", vec![a]));
            }
        }
        Ok(())
    }

    pub fn is_planar(&self) -> bool {
        rotation_system_is_planar(&self.crossings, None)
    }

    pub fn signs(&self) -> Vec<i8> {
        self.incoming.iter().map(|&inc| crossing_sign(inc)).collect()
    }

    /// `(n_plus, n_minus)`.
    pub fn sign_counts(&self) -> (usize, usize) {
        let p = self.signs().iter().filter(|&&s| s > 0).count();
        (p, self.crossings.len() - p)
    }

    pub fn mirror(&self) -> PlanarDiagram {
        let (crossings, incoming) =
            self.crossings.iter().zip(&self.incoming).map(|(&x, &i)| mirror_crossing(x, i)).unzip();
        PlanarDiagram {
            crossings,
            incoming,
            basepoint: self.basepoint,
            distinguished: self.distinguished.clone(),
            free_loops: self.free_loops,
        }
    }

    /// Number of link components, free loops included.
    pub fn component_count(&self) -> usize {
        let slots = arc_slots(&self.crossings);
        let mut seen: BTreeSet<Arc> = BTreeSet::new();
        let mut comps = 0;
        for (&a, occ) in &slots {
            if seen.contains(&a) {
                continue;
            }
            comps += 1;
            let (mut arc, mut entry) = (a, occ[0]);
            while seen.insert(arc) {
                let exit = Slot { crossing: entry.crossing, pos: (entry.pos + 2) % 4 };
                let out = self.crossings[exit.crossing][exit.pos];
                let os = &slots[&out];
                entry = if os[0] == exit { os[1] } else { os[0] };
                arc = out;
            }
        }
        comps + self.free_loops
    }
}

/// Free function forms of the operations.
pub fn validate(t: &SuturedTangle) -> Result<ValidationReport> {
    t.validate()
}

pub fn closure(t: &SuturedTangle, n: i64) -> Result<PlanarDiagram> {
    t.closure(n)
}

pub fn closure_infinity(t: &SuturedTangle) -> Result<PlanarDiagram> {
    t.closure_infinity()
}

pub fn crossing_signs(d: &PlanarDiagram) -> (usize, usize) {
    d.sign_counts()
}

pub fn c_t(t: &SuturedTangle) -> Result<i64> {
    t.c_t()
}
