//! Crossingless matchings and dotted cobordisms between them, over F2 with
//! `x^2 = 0` and one optional marked boundary point whose component may not
//! carry a dot.
//!
//! A morphism `P -> Q` is a sum of basis cobordisms: one disk per cycle of
//! `P ∪ Q`, each dotted or not. A basis element is stored as a bit mask with
//! bit `i` set when the cycle whose smallest boundary position is `i` carries
//! a dot.

use alloc::vec;
use alloc::vec::Vec;

/// Partner position of every boundary position.
pub type Matching = Vec<u8>;

/// An F2-linear combination of basis cobordisms, kept sorted without repeats.
pub type Mor = Vec<u64>;

pub fn mor_identity() -> Mor {
    vec![0]
}

/// `acc += other` over F2.
pub fn mor_add(acc: &mut Mor, other: &[u64]) {
    if other.is_empty() {
        return;
    }
    if acc.is_empty() {
        acc.extend_from_slice(other);
        return;
    }
    let mut out = Vec::with_capacity(acc.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < acc.len() && j < other.len() {
        match acc[i].cmp(&other[j]) {
            core::cmp::Ordering::Less => {
                out.push(acc[i]);
                i += 1;
            }
            core::cmp::Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            core::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&acc[i..]);
    out.extend_from_slice(&other[j..]);
    *acc = out;
}

/// Normalizes an unsorted list of terms with repeats into a `Mor`.
pub fn mor_from_terms(mut terms: Vec<u64>) -> Mor {
    terms.sort_unstable();
    let mut out: Vec<u64> = Vec::with_capacity(terms.len());
    for t in terms {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    out
}

/// Cycles of `P ∪ Q`: the cycle index of each position and the smallest
/// position of each cycle. Cycles are numbered by their smallest position.
pub fn cycles(p: &[u8], q: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let n = p.len();
    let mut of = vec![u8::MAX; n];
    let mut mins = Vec::new();
    for start in 0..n {
        if of[start] != u8::MAX {
            continue;
        }
        let c = mins.len() as u8;
        mins.push(start as u8);
        let mut j = start;
        loop {
            of[j] = c;
            let k = p[j] as usize;
            of[k] = c;
            j = q[k] as usize;
            if j == start {
                break;
            }
        }
    }
    (of, mins)
}

/// Bar-Natan degree of a basis element `P -> Q`.
pub fn degree(p: &[u8], q: &[u8], dots: u64) -> i32 {
    let (_, mins) = cycles(p, q);
    mins.len() as i32 - (p.len() / 2) as i32 - 2 * dots.count_ones() as i32
}

/// A surface assembled from pieces glued along intervals.
#[derive(Clone)]
pub struct Surface {
    parent: Vec<usize>,
    chi: Vec<i32>,
    dots: Vec<u32>,
}

impl Surface {
    pub fn new() -> Self {
        Surface { parent: Vec::new(), chi: Vec::new(), dots: Vec::new() }
    }

    pub fn with_capacity(n: usize) -> Self {
        Surface { parent: Vec::with_capacity(n), chi: Vec::with_capacity(n), dots: Vec::with_capacity(n) }
    }

    /// A disk-like piece (Euler characteristic 1).
    pub fn piece(&mut self, dots: u32) -> usize {
        self.parent.push(self.parent.len());
        self.chi.push(1);
        self.dots.push(dots);
        self.parent.len() - 1
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let n = self.parent[y];
            self.parent[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[rb] = ra;
            self.chi[ra] += self.chi[rb];
            self.dots[ra] += self.dots[rb];
        }
        ra
    }

    /// Glues two pieces along an interval.
    pub fn glue(&mut self, a: usize, b: usize) {
        let r = self.union(a, b);
        self.chi[r] -= 1;
    }

    /// Caps a boundary circle lying on piece `a` with a disk.
    pub fn cap(&mut self, a: usize, dotted: bool) {
        let d = self.piece(dotted as u32);
        self.union(a, d);
    }

    /// Evaluates the surface. `circles` lists each remaining boundary circle
    /// as (piece on it, bit position naming it in the target basis); `marked`
    /// indexes the circle through the marked point, whose component may
    /// carry no dot.
    pub fn evaluate(&mut self, circles: &[(usize, u8)], marked: Option<usize>) -> Mor {
        let n = self.parent.len();
        let mut circle_count = vec![0u32; n];
        let roots: Vec<usize> = circles.iter().map(|&(p, _)| self.find(p)).collect();
        for &r in &roots {
            circle_count[r] += 1;
        }
        let marked_root = marked.map(|m| roots[m]);
        let mut terms: Vec<u64> = vec![0];
        for r in 0..n {
            if self.parent[r] != r {
                continue;
            }
            let b = circle_count[r] as i32;
            let chi = self.chi[r];
            let g2 = 2 - chi - b;
            debug_assert!(g2 >= 0 && g2 % 2 == 0, "bad Euler characteristic");
            let d = self.dots[r];
            if g2 > 0 || d >= 2 {
                return Vec::new();
            }
            if b == 0 {
                if d != 1 {
                    return Vec::new();
                }
                continue;
            }
            let mine: Vec<u8> = circles.iter().zip(&roots).filter(|(_, &cr)| cr == r).map(|(c, _)| c.1).collect();
            let all: u64 = mine.iter().fold(0u64, |m, &bit| m | (1u64 << bit));
            if Some(r) == marked_root {
                if d > 0 {
                    return Vec::new();
                }
                let mbit = circles[marked.unwrap()].1;
                let opt = all & !(1u64 << mbit);
                for t in terms.iter_mut() {
                    *t |= opt;
                }
            } else if d == 1 {
                for t in terms.iter_mut() {
                    *t |= all;
                }
            } else {
                let mut next = Vec::with_capacity(terms.len() * mine.len());
                for &t in &terms {
                    for &bit in &mine {
                        next.push(t | (all & !(1u64 << bit)));
                    }
                }
                terms = next;
            }
        }
        mor_from_terms(terms)
    }
}

/// Composes `a: P -> Q` with `b: Q -> R`, giving a morphism `P -> R`.
/// `marked` is the position of the marked point, if present.
pub fn compose(p: &[u8], q: &[u8], r: &[u8], a: &[u64], b: &[u64], marked: Option<usize>) -> Mor {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let (pq_of, pq_min) = cycles(p, q);
    let (qr_of, qr_min) = cycles(q, r);
    let (pr_of, pr_min) = cycles(p, r);
    let n1 = pq_min.len();
    let mut out = Vec::new();
    for &ta in a {
        for &tb in b {
            let mut s = Surface::with_capacity(n1 + qr_min.len() + 2);
            for &m in &pq_min {
                s.piece(((ta >> m) & 1) as u32);
            }
            for &m in &qr_min {
                s.piece(((tb >> m) & 1) as u32);
            }
            for k in 0..q.len() {
                if k < q[k] as usize {
                    s.glue(pq_of[k] as usize, n1 + qr_of[k] as usize);
                }
            }
            let circles: Vec<(usize, u8)> = pr_min.iter().map(|&m| (pq_of[m as usize] as usize, m)).collect();
            let mk = marked.map(|m| pr_of[m] as usize);
            let res = s.evaluate(&circles, mk);
            out.extend(res);
        }
    }
    mor_from_terms(out)
}

impl Default for Surface {
    fn default() -> Self {
        Surface::new()
    }
}
