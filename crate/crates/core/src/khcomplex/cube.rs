//! The cube of resolutions, built directly. Exponential in the number of
//! crossings; kept as an independent oracle for the scanning construction.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{GenLabel, Generator, GradedComplex};
use crate::diagram::{Basepoint, PlanarDiagram};
use crate::error::{Error, Result};

/// Largest diagram the cube builder accepts.
pub const CUBE_CAP: usize = 14;

struct Circles {
    /// Circle index of every arc (by position in the sorted arc list).
    of_arc: Vec<usize>,
    count: usize,
}

fn circles_at(d: &PlanarDiagram, arcs: &[u32], v: u64) -> Circles {
    let idx = |a: u32| arcs.binary_search(&a).expect("known arc");
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (i, c) in d.crossings.iter().enumerate() {
        let pairs = if (v >> i) & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
        for (a, b) in pairs {
            let (ra, rb) = (find(&mut parent, idx(c[a])), find(&mut parent, idx(c[b])));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut id = BTreeMap::new();
    let mut of_arc = Vec::with_capacity(arcs.len());
    for a in 0..arcs.len() {
        let r = find(&mut parent, a);
        let n = id.len();
        of_arc.push(*id.entry(r).or_insert(n));
    }
    Circles { of_arc, count: id.len() }
}

/// The Khovanov complex of `d` from the full cube. With `reduced`, the
/// subcomplex where the basepoint circle carries `x`, shifted so the unknot
/// sits at `(0, 0)`.
pub fn cube_complex(d: &PlanarDiagram, reduced: bool) -> Result<GradedComplex> {
    d.check()?;
    let n = d.crossing_count();
    if n > CUBE_CAP {
        return Err(Error::ResourceCap { crossings: n, cap: CUBE_CAP });
    }
    let mut arcs: Vec<u32> = d.crossings.iter().flatten().copied().collect();
    arcs.sort_unstable();
    arcs.dedup();
    let (np, nm) = d.sign_counts();
    let circ: Vec<Circles> = (0..1u64 << n).map(|v| circles_at(d, &arcs, v)).collect();
    // Free loops follow the diagram's own circles at every vertex.
    let marked = |v: u64| -> usize {
        match d.basepoint {
            Basepoint::Arc(a) => circ[v as usize].of_arc[arcs.binary_search(&a).expect("basepoint arc")],
            Basepoint::FreeLoop => circ[v as usize].count,
        }
    };
    let total = |v: u64| circ[v as usize].count + d.free_loops;
    let mut gens = Vec::new();
    let mut index: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for v in 0..1u64 << n {
        let k = total(v);
        let w = v.count_ones() as i32;
        for labels in 0..1u64 << k {
            if reduced && (labels >> marked(v)) & 1 == 0 {
                continue;
            }
            let xs = labels.count_ones() as i32;
            let raw = (k as i32 - xs) - xs + w;
            let q2 = raw + np as i32 - 2 * nm as i32 + if reduced { 1 } else { 0 };
            index.insert((v, labels), gens.len());
            gens.push(Generator { u: w - nm as i32, q2, label: GenLabel::Cube { vertex: v, labels } });
        }
    }
    let mut edges = Vec::new();
    let arc_idx = |a: u32| arcs.binary_search(&a).expect("known arc");
    for (&(v, labels), &src) in &index {
        let cv = &circ[v as usize];
        for (i, c) in d.crossings.iter().enumerate() {
            if (v >> i) & 1 == 1 {
                continue;
            }
            let w = v | (1 << i);
            let cw = &circ[w as usize];
            // Circles of v other than those at the crossing keep their arcs.
            let mut image = Vec::with_capacity(cv.count + d.free_loops);
            let mut rep = alloc::vec![usize::MAX; cv.count];
            for (a, &ci) in cv.of_arc.iter().enumerate() {
                if rep[ci] == usize::MAX {
                    rep[ci] = a;
                }
            }
            for &r in &rep {
                image.push(cw.of_arc[r]);
            }
            for f in 0..d.free_loops {
                image.push(cw.count + f);
            }
            let ca = cv.of_arc[arc_idx(c[0])];
            let cc = cv.of_arc[arc_idx(c[2])];
            let bit = |l: u64, j: usize| (l >> j) & 1 == 1;
            let mut base = 0u64;
            for (j, &t) in image.iter().enumerate() {
                if j != ca && j != cc && bit(labels, j) {
                    base |= 1 << t;
                }
            }
            let mut push = |l: u64| {
                if let Some(&t) = index.get(&(w, l)) {
                    edges.push((src, t));
                }
            };
            if ca != cc {
                let (la, lc) = (bit(labels, ca), bit(labels, cc));
                if la && lc {
                    continue;
                }
                let m = cw.of_arc[arc_idx(c[0])];
                push(base | if la || lc { 1 << m } else { 0 });
            } else {
                let (m1, m2) = (cw.of_arc[arc_idx(c[0])], cw.of_arc[arc_idx(c[1])]);
                if bit(labels, ca) {
                    push(base | 1 << m1 | 1 << m2);
                } else {
                    push(base | 1 << m1);
                    push(base | 1 << m2);
                }
            }
        }
    }
    GradedComplex::from_parts(&gens, &edges)
}
