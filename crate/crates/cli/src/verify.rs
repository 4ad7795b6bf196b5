//! The acceptance checks, run against a dataset directory.
//!
//! Every check recomputes from the tangle files; nothing is cached between
//! runs. Randomized parts draw from a ChaCha stream seeded by the caller.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use kappa_core::diagram::{Boundary, PlanarDiagram, SuturedTangle};
use kappa_core::f2la::BitMatrix;
use kappa_core::khcomplex::cube::cube_complex;
use kappa_core::khcomplex::{build_reduced_complex, determinant, homology, is_thin, jones_polynomial, khovanov, GradedVectorSpace, Laurent};
use kappa_core::limit::{
    amphicheirality_check_pair, compute_kappa, compute_window, eventual_image, kappa_in_window, limit_profile, mirror_reflect,
    structure_report, BiTable, KappaInvariant, Verdict, WindowPolicy,
};
use kappa_core::skein::{ChainMap, TwistFamily};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::io;

pub const DEFAULT_SEED: u64 = 20240601;

/// Cap used for the torus-knot tangles, whose windows need more room.
pub const EXTENDED_CAP: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// Conjectural checks are reported but never fail a run.
    pub soft: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        let tag = match (self.passed, self.soft) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "WARN",
        };
        let soft = if self.soft { " (soft)" } else { "" };
        format!("{tag} {:>2} {}{soft}: {}", self.id, self.title, self.detail)
    }
}

/// True when every hard check passed.
pub fn all_hard_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed || c.soft)
}

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// A `(u, q)` cell with `q` halved back from its stored double, for messages.
fn show(c: (i32, i32)) -> String {
    format!("({}, {})", c.0, crate::format::q_string(c.1))
}

/// The first cell where two bigraded spaces disagree, in `(u, q)` order.
fn first_mismatch(want: &GradedVectorSpace, got: &GradedVectorSpace) -> Option<String> {
    let keys: BTreeSet<(i32, i32)> = want.iter().chain(got.iter()).map(|(k, _)| k).collect();
    keys.into_iter()
        .find(|&(u, q)| want.get(u, q) != got.get(u, q))
        .map(|(u, q)| format!("cell (u,q) = {}: expected {}, found {}", show((u, q)), want.get(u, q), got.get(u, q)))
}

fn first_table_mismatch(want: &BiTable, got: &BiTable) -> Option<String> {
    let keys: BTreeSet<(i32, i32)> = want.keys().chain(got.keys()).copied().collect();
    keys.into_iter().find(|k| want.get(k) != got.get(k)).map(|k| {
        format!(
            "cell (u,2delta) = ({}, {}): expected {}, found {}",
            k.0,
            k.1,
            want.get(&k).copied().unwrap_or(0),
            got.get(&k).copied().unwrap_or(0)
        )
    })
}

fn ones(cells: &[(i32, i32)]) -> BiTable {
    cells.iter().map(|&c| (c, 1)).collect()
}

fn ranks_total(m: &BTreeMap<i32, usize>) -> usize {
    m.values().sum()
}

/// Reduced homology of the trefoil tangle's first closure, `(u, q)` with `q` doubled.
pub const TREFOIL_T1: [(i32, i32); 7] = [(-7, -20), (-6, -18), (-5, -18), (-4, -14), (-3, -14), (-2, -12), (0, -8)];

pub struct Suite {
    data: PathBuf,
    seed: u64,
    kappas: RefCell<BTreeMap<String, Result<KappaInvariant, String>>>,
}

impl Suite {
    pub fn new(data: impl AsRef<Path>, seed: u64) -> Suite {
        Suite { data: data.as_ref().to_path_buf(), seed, kappas: RefCell::new(BTreeMap::new()) }
    }

    pub fn tangle(&self, name: &str) -> Result<SuturedTangle, String> {
        let p = self.data.join(format!("{name}.tangle.json"));
        io::read_tangle(&p.to_string_lossy()).map_err(err)
    }

    fn policy(name: &str) -> WindowPolicy {
        match name {
            "5_1" | "8_19" => WindowPolicy { cap: EXTENDED_CAP, ..Default::default() },
            "trefoil" | "unknot" => WindowPolicy::default(),
            _ => WindowPolicy { cap: 32, ..Default::default() },
        }
    }

    /// Kappa of a dataset tangle, or of its mirror for `name*`.
    pub fn kappa(&self, name: &str) -> Result<KappaInvariant, String> {
        if let Some(k) = self.kappas.borrow().get(name) {
            return k.clone();
        }
        let base = name.trim_end_matches('*');
        let k = self.tangle(base).and_then(|t| {
            let t = if name.ends_with('*') { t.mirror() } else { t };
            compute_kappa(&t, &Self::policy(base)).map_err(err)
        });
        self.kappas.borrow_mut().insert(name.to_string(), k.clone());
        k
    }

    fn run_one(&self, id: u8) -> Check {
        let (title, soft, outcome) = match id {
            1 => ("Kh anchor", false, self.kh_anchor()),
            2 => ("Jones anchor", false, self.jones_anchor()),
            3 => ("unknot composite and kappa", false, self.unknot()),
            4 => ("torus-link closures vs naive cube", false, self.torus_links()),
            5 => ("trefoil kappa", false, self.trefoil_kappa()),
            6 => ("trefoil window dims", false, self.trefoil_dims()),
            7 => ("Kh<- profile", false, self.profile()),
            8 => ("mirror", false, self.mirror()),
            9 => ("figure-eight", false, self.figure_eight()),
            10 => ("5_1 and 8_19", false, self.torus_knots()),
            11 => ("property suites", false, self.properties()),
            12 => ("soft diagnostics", true, self.soft()),
            _ => ("unknown", false, Err(format!("no criterion {id}"))),
        };
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        Check { id, title, passed, soft, detail }
    }

    pub fn run(&self) -> Vec<Check> {
        (1..=12).map(|id| self.run_one(id)).collect()
    }

    pub fn run_soft(&self) -> Vec<Check> {
        vec![self.run_one(12)]
    }

    fn trefoil_closure(&self, n: i64) -> Result<GradedVectorSpace, String> {
        let t = self.tangle("trefoil")?;
        khovanov(&t.closure(n).map_err(err)?).map_err(err)
    }

    fn kh_anchor(&self) -> Outcome {
        let h = self.trefoil_closure(1)?;
        let want = GradedVectorSpace::from_cells(TREFOIL_T1.iter().map(|&c| (c, 1)));
        match first_mismatch(&want, &h) {
            Some(m) => Err(m),
            None => Ok(format!("{} generators at the expected (u, q)", h.total_dim())),
        }
    }

    fn jones_anchor(&self) -> Outcome {
        let v = jones_polynomial(&self.trefoil_closure(1)?);
        let want = Laurent::from_terms([(-8, 1), (-12, 1), (-20, -1)]);
        ensure(v == want, || format!("V = {v}, expected {want}"))?;
        Ok(format!("V = {v}"))
    }

    fn unknot(&self) -> Outcome {
        let t = self.tangle("unknot")?;
        for (n, m) in [(0, 2), (-2, 2), (-1, 4), (-4, 4)] {
            let w = compute_window(&t, n, m, 24).map_err(err)?;
            let r = eventual_image(&w).ranks;
            ensure(r.is_empty(), || format!("composite over [{n}, {m}] has rank {}", ranks_total(&r)))?;
        }
        let k = self.kappa("unknot")?;
        ensure(k.is_zero(), || format!("kappa has dimension {}", k.total_dim))?;
        Ok("composite zero on [0,2], [-2,2], [-1,4], [-4,4]; kappa = 0".into())
    }

    fn torus_links(&self) -> Outcome {
        let t = self.tangle("unknot")?;
        let mut dims = Vec::new();
        for n in -5..=5 {
            let d = t.closure(n).map_err(err)?;
            let red = homology(&build_reduced_complex(&d).map_err(err)?);
            let cube = homology(&cube_complex(&d, false).map_err(err)?);
            let lifted = red.shift(0, 1).sum(&red.shift(0, -1));
            if let Some(m) = first_mismatch(&cube, &lifted) {
                return Err(format!("T({n}): {m}"));
            }
            dims.push(red.total_dim());
        }
        Ok(format!("reduced dims for n = -5..5: {dims:?}"))
    }

    fn trefoil_kappa(&self) -> Outcome {
        let k = self.kappa("trefoil")?;
        let want = ones(&[(-5, 1), (-3, 1), (-2, 1), (0, 1)]);
        if let Some(m) = first_table_mismatch(&want, &k.table) {
            return Err(m);
        }
        let c = &k.certificate;
        Ok(format!("total {} stable on [{}, {}] within cap 24", k.total_dim, c.window.0, c.window.1))
    }

    fn trefoil_dims(&self) -> Outcome {
        let t = self.tangle("trefoil")?;
        let w = compute_window(&t, 1, 9, 24).map_err(err)?;
        let dims: Vec<usize> = (1..=9).map(|i| w.space(i).total_dim()).collect();
        let want = vec![7, 6, 5, 6, 5, 6, 7, 8, 9];
        ensure(dims == want, || format!("A_1..A_9 = {dims:?}, expected {want:?}"))?;
        let jumps = dims.windows(2).all(|p| p[0].abs_diff(p[1]) == 1);
        ensure(jumps, || format!("a step of A_1..A_9 = {dims:?} is not +-1"))?;
        Ok(format!("A_1..A_9 = {dims:?}"))
    }

    fn profile(&self) -> Outcome {
        let t = self.tangle("trefoil")?;
        let w = compute_window(&t, -4, 12, 24).map_err(err)?;
        let p = limit_profile(&w).map_err(err)?;
        let mut want: BTreeMap<i32, usize> = [(-5, 1), (-4, 1), (-3, 1), (-2, 2), (-1, 1), (0, 2)].into();
        for u in 1..=p.certified_max_u {
            want.insert(u, 1);
        }
        ensure(p.certified_max_u >= 1, || format!("only u <= {} certified", p.certified_max_u))?;
        ensure(p.limit == want, || format!("profile {:?}, expected {want:?}", p.limit))?;
        Ok(format!("certified through u = {}", p.certified_max_u))
    }

    fn mirror(&self) -> Outcome {
        let k = self.kappa("trefoil")?;
        let km = self.kappa("trefoil*")?;
        if let Some(m) = first_table_mismatch(&mirror_reflect(&k).table, &km.table) {
            return Err(format!("mirror vs reflected: {m}"));
        }
        if let Some(m) = first_table_mismatch(&ones(&[(0, -1), (2, -1), (3, -1), (5, -1)]), &km.table) {
            return Err(m);
        }
        Ok("support {0,2,3,5} at 2delta = -1".into())
    }

    /// `T(1/0)` is unknotted and `det T(n) = |n|` for `|n| <= range`.
    fn derivation_checks(&self, name: &str, t: &SuturedTangle, range: i64, cap: usize) -> Result<(), String> {
        let inf = khovanov(&t.closure_infinity().map_err(err)?).map_err(err)?;
        ensure(inf.total_dim() == 1, || format!("{name}: T(1/0) has dimension {}", inf.total_dim()))?;
        for n in -range..=range {
            let h = closure_homology(t, n, cap)?;
            ensure(determinant(&h) == Some(n.unsigned_abs()), || format!("{name}: det T({n}) = {:?}", determinant(&h)))?;
        }
        Ok(())
    }

    fn figure_eight(&self) -> Outcome {
        let h1 = self.tangle("figure8-h1")?;
        let h2 = self.tangle("figure8-h2")?;
        self.derivation_checks("figure8-h1", &h1, 4, 32)?;
        let m = h1.mirror();
        ensure(m.crossings == h2.crossings && m.boundary == h2.boundary, || "figure8-h2 is not the mirror of figure8-h1".into())?;
        // T(-1) of h1 is the mirror of the trefoil tangle's T(-1).
        let tre = self.trefoil_closure(-1)?;
        let got = closure_homology(&h1, -1, 32)?;
        if let Some(m) = first_mismatch(&tre.reflect(), &got) {
            return Err(format!("figure8-h1 T(-1): {m}"));
        }
        let k1 = self.kappa("figure8-h1")?;
        let mut want = ones(&[(0, -3), (2, -3), (3, -3), (5, -3)]);
        want.extend(ones(&[(4, -1), (6, -1), (7, -1), (9, -1)]));
        if let Some(m) = first_table_mismatch(&want, &k1.table) {
            return Err(format!("h1: {m}"));
        }
        let k2 = self.kappa("figure8-h2")?;
        if let Some(m) = first_table_mismatch(&mirror_reflect(&k1).table, &k2.table) {
            return Err(format!("h2: {m}"));
        }
        let pair = amphicheirality_check_pair(&h1, &h2, &Self::policy("figure8-h1")).map_err(err)?;
        ensure(pair.verdict == Verdict::Silent, || "h1 against reflected h2 is not silent".into())?;
        Ok("derivation checks hold; h1 grid exact; h2 = reflected h1; pair check silent".into())
    }

    fn torus_knots(&self) -> Outcome {
        let mut notes = Vec::new();
        for (name, pq, lo) in [("5_1", 10i64, -2), ("8_19", 12, 1)] {
            let t = self.tangle(name)?;
            self.derivation_checks(name, &t, 3, EXTENDED_CAP)?;
            for n in [pq - 1, pq, pq + 1] {
                let h = closure_homology(&t, n, EXTENDED_CAP)?;
                let ok = is_thin(&h) && h.total_dim() as i64 == n;
                ensure(ok, || format!("{name}: T({n}) has dimension {}, thin {}", h.total_dim(), is_thin(&h)))?;
            }
            let k = self.kappa(name)?;
            let dims: Vec<usize> = (lo..lo + 7).map(|u| k.dims_by_u().get(&u).copied().unwrap_or(0)).collect();
            ensure(dims == vec![1, 1, 1, 2, 1, 1, 1] && k.total_dim == 8, || format!("{name}: dims {dims:?} from u = {lo}"))?;
            let diagonals: BTreeSet<i32> = k.table.keys().map(|c| c.1).collect();
            ensure(diagonals.len() == 1, || format!("{name}: kappa spans diagonals {diagonals:?}"))?;
            notes.push(format!("{name} on 2delta = {}", diagonals.iter().next().unwrap()));
        }
        Ok(format!("dims 1,1,1,2,1,1,1 exact; {}; cap {EXTENDED_CAP}", notes.join(", ")))
    }

    fn properties(&self) -> Outcome {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut done = Vec::new();

        // Differentials square to zero and preserve q on random braid closures.
        for _ in 0..12 {
            let d = random_braid_closure(&mut rng);
            let c = build_reduced_complex(&d).map_err(err)?;
            ensure(c.is_chain_complex(), || format!("d∘d or q-degree fails on {:?}", d.crossings))?;
            let cube = cube_complex(&d, true).map_err(err)?;
            ensure(homology(&cube) == homology(&c), || format!("scan and cube disagree on {:?}", d.crossings))?;
        }
        done.push("d∘d = 0");

        // Linear algebra identities.
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..30), rng.gen_range(1..30));
            let density = rng.gen_range(0.05..0.6);
            let m = BitMatrix::from_fn(r, c, |_, _| rng.gen_bool(density));
            let rank = m.rank();
            ensure(rank + m.kernel_basis().dim() == c, || format!("rank-nullity fails on a {r}x{c} matrix"))?;
            ensure(rank == m.transpose().rank(), || format!("transpose rank fails on a {r}x{c} matrix"))?;
        }
        done.push("rank-nullity");

        let names = ["unknot", "trefoil", "figure8-h1", "figure8-h2"];
        for name in names {
            let t = self.tangle(name)?;
            let fam = TwistFamily::build(&t, -4, 4, 32).map_err(err)?;
            for i in -4..4 {
                ensure(fam.complex(i).is_chain_complex(), || format!("{name}: C(T({i})) is not a complex"))?;
                ensure(map_is_homogeneous(fam.step(i)), || format!("{name}: f_{i} is not q-homogeneous"))?;
            }
            // dim ker f + dim coker f = dim Kh(T(1/0)) = 1 at every level.
            let w = compute_window(&t, -4, 4, 32).map_err(err)?;
            for (&i, &r) in w.step_ranks() {
                let ker = w.space(i + 1).total_dim() - r;
                let coker = w.space(i).total_dim() - r;
                ensure(ker + coker == 1, || format!("{name}: f_{i} has kernel {ker} and cokernel {coker}"))?;
            }
        }
        done.push("skein maps q-homogeneous");
        done.push("exactness");

        for name in ["trefoil", "figure8-h1", "5_1"] {
            let k = self.kappa(name)?;
            let t = self.tangle(name)?;
            let (n, m) = k.certificate.window;
            let w = compute_window(&t, n, m, Self::policy(name).cap).map_err(err)?;
            let again = kappa_in_window(&w).map_err(err)?;
            let ok = matches!(&again, Some((table, ei)) if ei.stable && *table == k.table);
            ensure(ok, || format!("{name}: certificate window [{n}, {m}] does not reproduce kappa"))?;
            ensure(mirror_reflect(&mirror_reflect(&k)) == k, || format!("{name}: reflect∘reflect is not the identity"))?;
        }
        done.push("certificates");
        done.push("reflect∘reflect");

        // Shuffled crossing order and renamed arcs change nothing.
        for name in ["trefoil", "figure8-h1"] {
            let t = self.tangle(name)?;
            let s = relabel(&t, &mut rng);
            for n in -2..=2 {
                let a = closure_homology(&t, n, 32)?;
                let b = closure_homology(&s, n, 32)?;
                if let Some(m) = first_mismatch(&a, &b) {
                    return Err(format!("{name} T({n}) after relabeling: {m}"));
                }
            }
            let k = self.kappa(name)?;
            let ks = compute_kappa(&s, &Self::policy(name)).map_err(err)?;
            ensure(k.table == ks.table, || format!("{name}: kappa changed after relabeling"))?;
        }
        done.push("determinism");
        Ok(format!("seed {}: {}", self.seed, done.join(", ")))
    }

    fn soft(&self) -> Outcome {
        let names = ["unknot", "trefoil", "trefoil*", "figure8-h1", "figure8-h2", "5_1", "8_19"];
        let mut rows = Vec::new();
        let mut bad = Vec::new();
        for name in names {
            let k = self.kappa(name)?;
            let s = structure_report(&k);
            rows.push(format!("{name} {}", k.total_dim));
            if s.residue_mod4 != 0 || !s.tiled() {
                bad.push(format!("{name}: dim {} mod 4 = {}, tiled {}", k.total_dim, s.residue_mod4, s.tiled()));
            }
        }
        if bad.is_empty() {
            Ok(format!("dim = 0 mod 4 and V-tiled: {}", rows.join(", ")))
        } else {
            Err(bad.join("; "))
        }
    }
}

/// Reduced homology of `T(n)` under an explicit crossing cap.
pub fn closure_homology(t: &SuturedTangle, n: i64, cap: usize) -> Result<GradedVectorSpace, String> {
    let d = t.closure(n).map_err(err)?;
    let c = kappa_core::khcomplex::build_reduced_complex_capped(&d, cap).map_err(err)?;
    Ok(homology(&c))
}

fn map_is_homogeneous(f: &ChainMap) -> bool {
    let Some((lo, hi)) = f.source().u_range() else { return true };
    (lo..=hi).all(|u| {
        let b = f.block(u);
        let (src, tgt) = (f.source().gens(u), f.target().gens(u));
        (0..b.rows()).all(|i| (0..b.cols()).all(|j| !b.get(i, j) || tgt[i].q2 == src[j].q2 + f.q_shift2()))
    })
}

/// Closure of a random braid on three strands with up to six letters.
fn random_braid_closure(rng: &mut ChaCha8Rng) -> PlanarDiagram {
    let strands = 3usize;
    let len = rng.gen_range(1..=6);
    let word: Vec<i32> = (0..len).map(|_| rng.gen_range(1..strands as i32) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
    let mut next = strands as u32 + 1;
    let mut pos: Vec<u32> = (1..=strands as u32).collect();
    let mut crossings = Vec::new();
    for &g in &word {
        let i = (g.unsigned_abs() - 1) as usize;
        let (x, y) = (pos[i], pos[i + 1]);
        let (ne, nw) = (next, next + 1);
        next += 2;
        crossings.push(if g > 0 { [y, ne, nw, x] } else { [x, y, ne, nw] });
        pos[i] = nw;
        pos[i + 1] = ne;
    }
    for c in crossings.iter_mut() {
        for a in c.iter_mut() {
            if let Some(p) = pos.iter().position(|&f| f == *a) {
                *a = p as u32 + 1;
            }
        }
    }
    let mut d = PlanarDiagram::from_crossings(crossings).expect("braid closures are well formed");
    // Strands the word never touches are split unknots.
    let used: BTreeSet<u32> = d.crossings.iter().flatten().copied().collect();
    d.free_loops = (1..=strands as u32).filter(|a| !used.contains(a)).count();
    d
}

/// The same tangle with its crossings in shuffled order and its arcs renamed.
pub fn relabel(t: &SuturedTangle, rng: &mut ChaCha8Rng) -> SuturedTangle {
    let max = t.max_arc();
    let mut ids: Vec<u32> = (1..=2 * max).collect();
    ids.shuffle(rng);
    let map = |a: u32| ids[(a - 1) as usize];
    let mut crossings: Vec<[u32; 4]> = t.crossings.iter().map(|c| c.map(map)).collect();
    crossings.shuffle(rng);
    let b = t.boundary;
    SuturedTangle::new(crossings, Boundary { b0: map(b.b0), b1: map(b.b1), t0: map(b.t0), t1: map(b.t1) }, t.name.clone())
}
