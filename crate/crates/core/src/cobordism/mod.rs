//! Chain maps induced by elementary cobordisms and their composites.
//!
//! The annulus cobordism contracting two adjacent, oppositely oriented cable
//! strands is presented as a movie: one saddle at the base-point
//! cross-section, a sequence of Reidemeister-II removals sliding the
//! turn-back along the doubled strand, and a final death of the resulting
//! crossing-free circle. Each step acts on chains in the diagonal basis with
//! at most a constant number of output terms per element, so movie maps are
//! applied by streaming rather than by materialized matrices. The
//! Reidemeister-II step maps come from cancelling, inside the four-state
//! square of the bigon, the two acyclic basis pairs; the closed forms used
//! here keep exactly the parallel-smoothing part plus one correction term
//! per circle-vertex element.

mod movie;

pub use movie::{
    annulus_movie, match_diagrams, r2_removal, relabel_chain, AnnulusMap, DiagramMatch,
};

use crate::barnatan::cube::StateCircles;
use crate::barnatan::EChain;
use crate::diagram::{Component, ComponentKind, Crossing, Diagram, End, LoopPlace, SlotRef};
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// Lazily traced circle tables per state of one diagram.
pub struct CircleCache {
    memo: HashMap<u64, StateCircles>,
}

impl CircleCache {
    pub fn new() -> CircleCache {
        CircleCache {
            memo: HashMap::new(),
        }
    }
    pub fn get(&mut self, d: &Diagram, state: u64) -> &StateCircles {
        self.memo
            .entry(state)
            .or_insert_with(|| StateCircles::trace(d, state))
    }
}

impl Default for CircleCache {
    fn default() -> Self {
        Self::new()
    }
}

/// Saddle along a cube edge: flip crossing `c` of `state` from 0 to 1.
/// Returns the relabelled mask, or None when a merge of unequal labels
/// kills the element.
pub fn edge_saddle(
    d: &Diagram,
    sc: &StateCircles,
    sc2: &StateCircles,
    c: usize,
    mask: u64,
) -> Option<u64> {
    let slots = &d.crossings[c].slots;
    let c0 = sc.arc_circle[slots[0].arc];
    let mut c1 = c0;
    for s in &slots[1..] {
        if sc.arc_circle[s.arc] != c0 {
            c1 = sc.arc_circle[s.arc];
            break;
        }
    }
    if c1 != c0 && ((mask >> c0) & 1) != ((mask >> c1) & 1) {
        return None;
    }
    let mut m2 = 0u64;
    let mut seen = 0u64;
    for (arc, &cj) in sc2.arc_circle.iter().enumerate() {
        let bit = 1u64 << cj;
        if seen & bit == 0 {
            seen |= bit;
            if (mask >> sc.arc_circle[arc]) & 1 == 1 {
                m2 |= bit;
            }
        }
    }
    Some(m2)
}

/// Data of one Reidemeister-II bigon removal.
#[derive(Clone, Debug)]
pub struct R2Data {
    /// Crossings of the bigon in the larger diagram.
    pub x: usize,
    pub y: usize,
    /// The two bigon sides: `tau` is the sliding tip arc, `mu` the segment
    /// of the transversal strand.
    pub tau: usize,
    pub mu: usize,
    /// Smoothing bits of the parallel (reduced-connectivity) vertex.
    pub r_x: bool,
    pub r_y: bool,
    /// big crossing -> small crossing (usize::MAX for x, y).
    pub cross_map: Vec<usize>,
    /// big arc -> small arc (total; bigon arcs map into their splices).
    pub arc_map: Vec<usize>,
    /// small arc -> a constituent big arc that is not tau or mu.
    pub rep_arc: Vec<usize>,
}

#[derive(Clone, Debug)]
pub enum StepKind {
    /// Fuse two antiparallel arcs. `arcs` are the two arc ids, stable across
    /// the surgery (the head slots are exchanged).
    Saddle { arcs: (usize, usize) },
    /// Fuse two crossing-free loops (components in the larger diagram);
    /// the first arc id survives.
    LoopSaddle { arcs: (usize, usize) },
    R2Remove(R2Data),
    R2Insert(R2Data),
    /// Remove the crossing-free circle with this arc id (in the larger
    /// diagram); `arc_map` reindexes the remaining arcs.
    Death { arc: usize, arc_map: Vec<usize> },
    Birth { arc: usize, arc_map: Vec<usize> },
}

/// A movie of elementary steps with all intermediate diagrams;
/// `diagrams[i] -> diagrams[i+1]` is performed by `steps[i]`.
pub struct Movie {
    pub diagrams: Vec<Diagram>,
    pub steps: Vec<StepKind>,
}

impl fmt::Display for Movie {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            let name = match s {
                StepKind::Saddle { .. } | StepKind::LoopSaddle { .. } => "saddle",
                StepKind::R2Remove(_) => "r2-remove",
                StepKind::R2Insert(_) => "r2-insert",
                StepKind::Death { .. } => "death",
                StepKind::Birth { .. } => "birth",
            };
            writeln!(
                f,
                "step {i}: {name} ({} -> {} crossings)",
                self.diagrams[i].n_crossings(),
                self.diagrams[i + 1].n_crossings()
            )?;
        }
        Ok(())
    }
}

impl Movie {
    pub fn source(&self) -> &Diagram {
        self.diagrams.first().expect("nonempty movie")
    }
    pub fn target(&self) -> &Diagram {
        self.diagrams.last().expect("nonempty movie")
    }

    /// The reverse movie (arrows read backwards).
    pub fn reversed(&self) -> Movie {
        let diagrams: Vec<Diagram> = self.diagrams.iter().rev().cloned().collect();
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| match s {
                StepKind::Saddle { arcs } => StepKind::Saddle { arcs: *arcs },
                StepKind::LoopSaddle { arcs } => StepKind::LoopSaddle { arcs: *arcs },
                StepKind::R2Remove(d) => StepKind::R2Insert(d.clone()),
                StepKind::R2Insert(d) => StepKind::R2Remove(d.clone()),
                StepKind::Death { arc, arc_map } => StepKind::Birth {
                    arc: *arc,
                    arc_map: arc_map.clone(),
                },
                StepKind::Birth { arc, arc_map } => StepKind::Death {
                    arc: *arc,
                    arc_map: arc_map.clone(),
                },
            })
            .collect();
        Movie { diagrams, steps }
    }

    /// Apply the whole movie to a chain.
    pub fn apply(&self, chain: &EChain) -> EChain {
        let mut caches: Vec<CircleCache> =
            (0..self.diagrams.len()).map(|_| CircleCache::new()).collect();
        let mut cur = chain.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let (a, b) = caches.split_at_mut(i + 1);
            cur = apply_step(
                step,
                &self.diagrams[i],
                &self.diagrams[i + 1],
                &mut a[i],
                &mut b[0],
                &cur,
            );
        }
        cur
    }
}

fn apply_step(
    step: &StepKind,
    src: &Diagram,
    dst: &Diagram,
    src_cache: &mut CircleCache,
    dst_cache: &mut CircleCache,
    chain: &EChain,
) -> EChain {
    let mut out = EChain::new();
    for &(s, m) in chain.iter() {
        match step {
            StepKind::Saddle { arcs } => {
                apply_saddle(src, dst, src_cache, dst_cache, *arcs, s, m, &mut out)
            }
            StepKind::LoopSaddle { arcs } => {
                apply_loop_saddle(src, dst, src_cache, dst_cache, *arcs, s, m, &mut out)
            }
            StepKind::R2Remove(data) => {
                apply_r2_forward(src, dst, src_cache, dst_cache, data, s, m, &mut out)
            }
            StepKind::R2Insert(data) => {
                apply_r2_backward(src, dst, src_cache, dst_cache, data, s, m, &mut out)
            }
            StepKind::Death { arc, arc_map } => {
                apply_death(src, dst, src_cache, dst_cache, *arc, arc_map, s, m, &mut out)
            }
            StepKind::Birth { arc, arc_map } => {
                apply_birth(src, dst, src_cache, dst_cache, *arc, arc_map, s, m, &mut out)
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn apply_saddle(
    src: &Diagram,
    dst: &Diagram,
    src_cache: &mut CircleCache,
    dst_cache: &mut CircleCache,
    arcs: (usize, usize),
    s: u64,
    m: u64,
    out: &mut EChain,
) {
    let (a, b) = arcs;
    let (ca, cb, merged_or_parent) = {
        let sc = src_cache.get(src, s);
        let ca = sc.arc_circle[a];
        let cb = sc.arc_circle[b];
        if ca != cb && ((m >> ca) & 1) != ((m >> cb) & 1) {
            return; // merge of distinct labels dies
        }
        (ca, cb, (m >> ca) & 1)
    };
    let _ = cb;
    let src_table = src_cache.get(src, s).arc_circle.clone();
    let sd = dst_cache.get(dst, s);
    let mut m2 = 0u64;
    let mut seen = 0u64;
    for (arc, &cj) in sd.arc_circle.iter().enumerate() {
        let bit = 1u64 << cj;
        if seen & bit != 0 {
            continue;
        }
        seen |= bit;
        // circles through the surgered arcs take the merge/split label
        let lab = if arc == a || arc == b {
            merged_or_parent
        } else {
            (m >> src_table[arc]) & 1
        };
        if lab == 1 {
            m2 |= bit;
        }
    }
    let _ = ca;
    out.toggle(s, m2);
}

#[allow(clippy::too_many_arguments)]
fn apply_loop_saddle(
    src: &Diagram,
    dst: &Diagram,
    src_cache: &mut CircleCache,
    dst_cache: &mut CircleCache,
    arcs: (usize, usize),
    s: u64,
    m: u64,
    out: &mut EChain,
) {
    // Fusing two crossing-free loops is a merge; read backwards (the
    // reversed movie) it splits one loop into two. Arc `b` disappears on the
    // fused side; arcs above it shift down by one.
    let (a, b) = arcs;
    let forward = src.n_arcs() > dst.n_arcs();
    let (big, small) = if forward { (src, dst) } else { (dst, src) };
    let shift = |arc: usize| if arc > b { arc - 1 } else { arc }; // big -> small
    let unshift = |arc: usize| if arc >= b { arc + 1 } else { arc }; // small -> big
    if forward {
        let sc = src_cache.get(big, s);
        let ca = sc.arc_circle[a];
        let cb = sc.arc_circle[b];
        if ca != cb && ((m >> ca) & 1) != ((m >> cb) & 1) {
            return;
        }
        let special = (m >> ca) & 1;
        let src_table = sc.arc_circle.clone();
        let sd = dst_cache.get(small, s);
        let mut m2 = 0u64;
        for (arc, &cj) in sd.arc_circle.iter().enumerate() {
            let old = unshift(arc);
            let lab = if old == a || old == b {
                special
            } else {
                (m >> src_table[old]) & 1
            };
            if lab == 1 {
                m2 |= 1u64 << cj;
            }
        }
        out.toggle(s, m2);
    } else {
        // split: both children inherit the parent's label
        let sc = src_cache.get(small, s);
        let parent = (m >> sc.arc_circle[shift(a)]) & 1;
        let src_table = sc.arc_circle.clone();
        let sd = dst_cache.get(big, s);
        let mut m2 = 0u64;
        for (arc, &cj) in sd.arc_circle.iter().enumerate() {
            let lab = if arc == a || arc == b {
                parent
            } else {
                (m >> src_table[shift(arc)]) & 1
            };
            if lab == 1 {
                m2 |= 1u64 << cj;
            }
        }
        out.toggle(s, m2);
    }
}

#[allow(clippy::too_many_arguments)]
fn apply_death(
    src: &Diagram,
    dst: &Diagram,
    src_cache: &mut CircleCache,
    dst_cache: &mut CircleCache,
    arc: usize,
    arc_map: &[usize],
    s: u64,
    m: u64,
    out: &mut EChain,
) {
    // Counit: both labels map to 1; drop the circle and reindex the rest.
    let src_table = src_cache.get(src, s).arc_circle.clone();
    let sd = dst_cache.get(dst, s);
    let mut m2 = 0u64;
    for (old_arc, &cj) in src_table.iter().enumerate() {
        if old_arc == arc {
            continue;
        }
        if (m >> cj) & 1 == 1 {
            m2 |= 1u64 << sd.arc_circle[arc_map[old_arc]];
        }
    }
    out.toggle(s, m2);
}

#[allow(clippy::too_many_arguments)]
fn apply_birth(
    src: &Diagram,
    dst: &Diagram,
    src_cache: &mut CircleCache,
    dst_cache: &mut CircleCache,
    arc: usize,
    arc_map: &[usize],
    s: u64,
    m: u64,
    out: &mut EChain,
) {
    // Unit: 1 = x + (1+x): the created circle takes both labels.
    // `arc_map` maps the arcs of dst (with the loop) to the arcs of src.
    let src_table = src_cache.get(src, s).arc_circle.clone();
    let sd = dst_cache.get(dst, s);
    let new_circle = sd.arc_circle[arc];
    let mut base = 0u64;
    for (big_arc, &cj) in sd.arc_circle.iter().enumerate() {
        if big_arc == arc {
            continue;
        }
        if (m >> src_table[arc_map[big_arc]]) & 1 == 1 {
            base |= 1u64 << cj;
        }
    }
    out.toggle(s, base);
    out.toggle(s, base | (1u64 << new_circle));
}

#[allow(clippy::too_many_arguments)]
fn apply_r2_forward(
    src: &Diagram,
    dst: &Diagram,
    src_cache: &mut CircleCache,
    dst_cache: &mut CircleCache,
    data: &R2Data,
    s: u64,
    m: u64,
    out: &mut EChain,
) {
    let bx = (s >> data.x) & 1 == 1;
    let by = (s >> data.y) & 1 == 1;
    if (bx, by) == (data.r_x, data.r_y) {
        // parallel vertex: carry over
        let (s2, m2) = transfer_to_small(src, dst, src_cache, dst_cache, data, s, m);
        out.toggle(s2, m2);
    } else if (bx, by) == (!data.r_x, !data.r_y) {
        // circle vertex: relabel to the source corner of the square, then
        // ride the saddle into the parallel vertex
        let o_bit = if data.r_x { data.y } else { data.x };
        let saddle_bit = if data.r_x { data.x } else { data.y };
        let s_a = s & !(1u64 << o_bit);
        let m_a = {
            let sc_o = src_cache.get(src, s).arc_circle.clone();
            let sc_a = src_cache.get(src, s_a);
            let mut v = 0u64;
            let mut seen = 0u64;
            // representative arcs avoiding the bigon sides
            let n_circ = sc_a.n;
            let mut rep = vec![usize::MAX; n_circ as usize];
            for (arc, &cj) in sc_a.arc_circle.iter().enumerate() {
                if arc != data.tau && arc != data.mu && rep[cj as usize] == usize::MAX {
                    rep[cj as usize] = arc;
                }
            }
            for (arc, &cj) in sc_a.arc_circle.iter().enumerate() {
                let bit = 1u64 << cj;
                if seen & bit != 0 {
                    continue;
                }
                seen |= bit;
                let r = rep[cj as usize];
                debug_assert!(r != usize::MAX, "circle with only bigon arcs at the source corner");
                let _ = arc;
                if (m >> sc_o[r]) & 1 == 1 {
                    v |= bit;
                }
            }
            v
        };
        let (sc_a, sc_r) = {
            let a = src_cache.get(src, s_a).clone();
            let r = src_cache.get(src, s_a | (1u64 << saddle_bit)).clone();
            (a, r)
        };
        if let Some(m_r) = edge_saddle(src, &sc_a, &sc_r, saddle_bit, m_a) {
            let s_r = s_a | (1u64 << saddle_bit);
            let (s2, m2) = transfer_to_small(src, dst, src_cache, dst_cache, data, s_r, m_r);
            out.toggle(s2, m2);
        }
    }
    // source and sink corners of the square die
}

fn compress_state(s: u64, x: usize, y: usize) -> u64 {
    let (lo, hi) = (x.min(y), x.max(y));
    let low = s & ((1u64 << lo) - 1);
    let mid = (s >> (lo + 1)) & ((1u64 << (hi - lo - 1)) - 1);
    let high = s >> (hi + 1);
    low | (mid << lo) | (high << (hi - 1))
}

fn expand_state(s: u64, x: usize, y: usize, bx: bool, by: bool) -> u64 {
    let (lo, hi) = (x.min(y), x.max(y));
    let low = s & ((1u64 << lo) - 1);
    let mid = (s >> lo) & ((1u64 << (hi - 1 - lo)) - 1);
    let high = s >> (hi - 1);
    let mut t = low | (mid << (lo + 1)) | (high << (hi + 1));
    if bx {
        t |= 1u64 << x;
    }
    if by {
        t |= 1u64 << y;
    }
    t
}

fn transfer_to_small(
    src: &Diagram,
    dst: &Diagram,
    src_cache: &mut CircleCache,
    dst_cache: &mut CircleCache,
    data: &R2Data,
    s: u64,
    m: u64,
) -> (u64, u64) {
    let s2 = compress_state(s, data.x, data.y);
    let src_table = src_cache.get(src, s).arc_circle.clone();
    let sd = dst_cache.get(dst, s2);
    let mut m2 = 0u64;
    let mut seen = 0u64;
    for (arc, &cj) in sd.arc_circle.iter().enumerate() {
        let bit = 1u64 << cj;
        if seen & bit != 0 {
            continue;
        }
        seen |= bit;
        let rep = data.rep_arc[arc];
        let _ = arc;
        if (m >> src_table[rep]) & 1 == 1 {
            m2 |= bit;
        }
    }
    (s2, m2)
}

#[allow(clippy::too_many_arguments)]
fn apply_r2_backward(
    small: &Diagram,
    big: &Diagram,
    small_cache: &mut CircleCache,
    big_cache: &mut CircleCache,
    data: &R2Data,
    s: u64,
    m: u64,
    out: &mut EChain,
) {
    // Inclusion quasi-inverse to the forward map: the parallel lift plus,
    // for each saddle image at the sink corner, the circle-vertex elements
    // with the small circle labelled by 1 = x + (1+x).
    let s_r = expand_state(s, data.x, data.y, data.r_x, data.r_y);
    let small_table = small_cache.get(small, s).arc_circle.clone();
    let m_r = {
        let sc_r = big_cache.get(big, s_r);
        let mut v = 0u64;
        let mut seen = 0u64;
        let n_circ = sc_r.n;
        let mut rep = vec![usize::MAX; n_circ as usize];
        for (arc, &cj) in sc_r.arc_circle.iter().enumerate() {
            if arc != data.tau && arc != data.mu && rep[cj as usize] == usize::MAX {
                rep[cj as usize] = arc;
            }
        }
        for &cj in sc_r.arc_circle.iter() {
            let bit = 1u64 << cj;
            if seen & bit != 0 {
                continue;
            }
            seen |= bit;
            let r = rep[cj as usize];
            debug_assert!(r != usize::MAX);
            if (m >> small_table[data.arc_map[r]]) & 1 == 1 {
                v |= bit;
            }
        }
        v
    };
    out.toggle(s_r, m_r);

    // Correction: saddle at the circle-vertex crossing, then reopen the
    // small circle with both labels.
    let o_bit = if data.r_x { data.y } else { data.x };
    let saddle_bit = o_bit; // flipping the zero bit of the parallel vertex
    let s_b = s_r | (1u64 << saddle_bit);
    let (sc_r, sc_b) = {
        let r = big_cache.get(big, s_r).clone();
        let b = big_cache.get(big, s_b).clone();
        (r, b)
    };
    if let Some(m_b) = edge_saddle(big, &sc_r, &sc_b, saddle_bit, m_r) {
        // s_o = s_b with the parallel-set crossing cleared
        let r_bit = if data.r_x { data.x } else { data.y };
        let s_o = s_b & !(1u64 << r_bit);
        let sc_o = big_cache.get(big, s_o).clone();
        let mut base = 0u64;
        let mut ostar = u64::MAX;
        let mut seen = 0u64;
        let mut rep = vec![usize::MAX; sc_o.n as usize];
        for (arc, &cj) in sc_o.arc_circle.iter().enumerate() {
            if arc != data.tau && arc != data.mu && rep[cj as usize] == usize::MAX {
                rep[cj as usize] = arc;
            }
        }
        for &cj in sc_o.arc_circle.iter() {
            let bit = 1u64 << cj;
            if seen & bit != 0 {
                continue;
            }
            seen |= bit;
            let r = rep[cj as usize];
            if r == usize::MAX {
                // the small circle consisting of the bigon sides
                ostar = cj as u64;
                continue;
            }
            if (m_b >> sc_b.arc_circle[r]) & 1 == 1 {
                base |= bit;
            }
        }
        debug_assert_ne!(ostar, u64::MAX, "circle vertex has the bigon circle");
        out.toggle(s_o, base);
        out.toggle(s_o, base | (1u64 << ostar));
    }
}

// ---------------------------------------------------------------------------
// Surgeries
// ---------------------------------------------------------------------------

/// A dart on the same face as the current outer marker whose arc avoids the
/// given set; used to keep the marker meaningful across local surgeries.
pub(crate) fn outer_dart_avoiding(
    d: &Diagram,
    avoid: impl Fn(usize) -> bool,
) -> Result<crate::diagram::Dart> {
    let outer = d
        .outer
        .ok_or_else(|| Error::InvalidDiagram("missing outer marker".into()))?;
    let faces = d.face_data();
    let f = faces.left_face(outer);
    let mut fallback = None;
    for arc in 0..d.n_arcs() {
        for fwd in [true, false] {
            let dart = crate::diagram::Dart { arc, fwd };
            if d.arrival(dart).is_some() && faces.left_face(dart) == f {
                if !avoid(arc) {
                    return Ok(dart);
                }
                fallback.get_or_insert(dart);
            }
        }
    }
    fallback.ok_or_else(|| Error::InvalidDiagram("outer face has no darts".into()))
}

/// Saddle between two antiparallel arcs: exchange their head slots.
pub fn saddle_surgery(d: &Diagram, a: usize, b: usize) -> Result<Diagram> {
    if a == b {
        return Err(Error::Invalid("saddle needs two distinct arcs".into()));
    }
    let ea = d.ends(a);
    let eb = d.ends(b);
    let (Some(ha), Some(hb)) = (ea.head, eb.head) else {
        return Err(Error::Invalid("saddle site arcs not present".into()));
    };
    // The saddle rewrites what arcs a and b are; move the unbounded-face
    // marker onto an untouched arc first.
    let outer = match d.outer {
        Some(_) => Some(outer_dart_avoiding(d, |arc| arc == a || arc == b)?),
        None => None,
    };
    let mut crossings = d.crossings.clone();
    crossings[ha.0].slots[ha.1 as usize] = SlotRef { arc: b, end: End::Head };
    crossings[hb.0].slots[hb.1 as usize] = SlotRef { arc: a, end: End::Head };
    rebuild_components(d, crossings, d.arc_component.len(), outer)
}

/// Rebuild component structure by walking strands; preserves the relative
/// order of surviving components (ordered by their smallest previous
/// component index, then the walk).
fn rebuild_components(
    d: &Diagram,
    crossings: Vec<Crossing>,
    n_arcs: usize,
    outer: Option<crate::diagram::Dart>,
) -> Result<Diagram> {
    let mut head_slot = vec![None; n_arcs];
    for (ci, x) in crossings.iter().enumerate() {
        for (si, s) in x.slots.iter().enumerate() {
            if s.end == End::Head {
                head_slot[s.arc] = Some((ci, si));
            }
        }
    }
    let mut comp_of = vec![usize::MAX; n_arcs];
    let mut components: Vec<Component> = Vec::new();
    // Seed walks from old component base arcs in order.
    let mut seeds: Vec<usize> = d.components.iter().map(|c| c.base()).collect();
    seeds.extend(0..n_arcs);
    for a0 in seeds {
        if comp_of[a0] != usize::MAX {
            continue;
        }
        if head_slot[a0].is_none() {
            // crossing-free loop: keep previous loop data if it was one
            let ki = components.len();
            comp_of[a0] = ki;
            let kind = match d.components[d.arc_component[a0]].kind {
                ComponentKind::FreeLoop { ccw, place } => ComponentKind::FreeLoop { ccw, place },
                ComponentKind::Closed => ComponentKind::FreeLoop {
                    ccw: true,
                    place: LoopPlace::Unplaced,
                },
            };
            components.push(Component {
                arcs: vec![a0],
                kind,
            });
            continue;
        }
        let ki = components.len();
        let mut arcs = Vec::new();
        let mut a = a0;
        loop {
            comp_of[a] = ki;
            arcs.push(a);
            let (c, s) = head_slot[a].unwrap();
            let nxt = crossings[c].slots[(s + 2) % 4];
            a = nxt.arc;
            if a == a0 {
                break;
            }
        }
        components.push(Component {
            arcs,
            kind: ComponentKind::Closed,
        });
    }
    Diagram::new(crossings, comp_of, components, outer)
}

/// Fuse two crossing-free loops; the first arc survives.
pub fn loop_saddle_surgery(d: &Diagram, a: usize, b: usize) -> Result<Diagram> {
    let ka = d.arc_component[a];
    let kb = d.arc_component[b];
    let (ccw_a, place_a) = match d.components[ka].kind {
        ComponentKind::FreeLoop { ccw, place } => (ccw, place),
        _ => return Err(Error::Invalid("loop saddle needs free loops".into())),
    };
    let place_b = match d.components[kb].kind {
        ComponentKind::FreeLoop { place, .. } => place,
        _ => return Err(Error::Invalid("loop saddle needs free loops".into())),
    };
    // The fused loop sits where the outer of the two sat: if b contains a
    // (a placed inside b) the fused loop takes b's place, otherwise a's.
    let fused_place = if place_a == LoopPlace::Inside(kb) {
        place_b
    } else {
        place_a
    };
    let mut components = Vec::new();
    let mut arc_comp = vec![usize::MAX; d.n_arcs() - 1];
    let remap = |arc: usize| if arc > b { arc - 1 } else { arc };
    let mut new_index = vec![usize::MAX; d.n_components()];
    let mut next = 0;
    for (ki, _) in d.components.iter().enumerate() {
        if ki == kb {
            continue;
        }
        new_index[ki] = next;
        next += 1;
    }
    for (ki, comp) in d.components.iter().enumerate() {
        if ki == kb {
            continue;
        }
        let kind = if ki == ka {
            ComponentKind::FreeLoop {
                ccw: ccw_a,
                place: map_place(fused_place, &new_index, ka, kb),
            }
        } else {
            match comp.kind {
                ComponentKind::FreeLoop { ccw, place } => ComponentKind::FreeLoop {
                    ccw,
                    place: map_place(place, &new_index, ka, kb),
                },
                ComponentKind::Closed => ComponentKind::Closed,
            }
        };
        let arcs: Vec<usize> = comp.arcs.iter().map(|&x| remap(x)).collect();
        for &x in &arcs {
            arc_comp[x] = new_index[ki];
        }
        components.push(Component { arcs, kind });
    }
    Diagram::new(vec![], arc_comp, components, None)
}

fn map_place(place: LoopPlace, new_index: &[usize], ka: usize, kb: usize) -> LoopPlace {
    match place {
        LoopPlace::Inside(m) => {
            let m2 = if m == kb { ka } else { m };
            LoopPlace::Inside(new_index[m2])
        }
        other => other,
    }
}

/// Matrices of a chain map between two materialized cube complexes, one per
/// degree of the source. Asserts nothing by itself; use
/// [`verify_chain_map`] to check commutation with the differentials.
pub fn materialize_map(
    src: &crate::barnatan::PublicCube,
    dst: &crate::barnatan::PublicCube,
    f: impl Fn(&EChain) -> EChain,
) -> Vec<crate::f2::F2Matrix> {
    use crate::f2::F2Matrix;
    let src_min = src.complex.min_degree;
    let dst_min = dst.complex.min_degree;
    let dst_dim = |deg: i32| -> usize {
        let di = deg - dst_min;
        if di < 0 {
            0
        } else {
            dst.complex.dims.get(di as usize).copied().unwrap_or(0)
        }
    };
    let mut mats: Vec<F2Matrix> = src
        .complex
        .dims
        .iter()
        .enumerate()
        .map(|(i, &n)| F2Matrix::zero(dst_dim(src_min + i as i32), n))
        .collect();
    let c = src.cube.diagram.n_crossings();
    for s in 0..(1u64 << c) {
        let n = src.cube.circles[s as usize].n;
        for w in 0..(1u64 << n) {
            let (deg_i, col) = src.position(s, w);
            let mut one = crate::barnatan::Chain::default();
            one.toggle(s, w);
            let img = f(&one.to_diagonal(|st| src.cube.circles[st as usize].n));
            let img_pub = img.to_public(|st| dst.cube.circles[st as usize].n);
            for &(s2, w2) in img_pub.iter() {
                let (dj, row) = dst.position(s2, w2);
                let deg = src_min + deg_i as i32;
                assert_eq!(dst_min + dj as i32, deg, "map is not degree preserving");
                mats[deg_i].flip(row, col);
            }
        }
    }
    mats
}

/// Check `d_dst . f = f . d_src` for a materialized map.
pub fn verify_chain_map(
    src: &crate::barnatan::PublicCube,
    dst: &crate::barnatan::PublicCube,
    mats: &[crate::f2::F2Matrix],
) -> bool {
    use crate::f2::F2Matrix;
    let src_min = src.complex.min_degree;
    let dst_min = dst.complex.min_degree;
    for i in 0..src.complex.d.len() {
        let deg = src_min + i as i32;
        let dj = deg - dst_min;
        let lhs = if dj >= 0 && (dj as usize) < dst.complex.d.len() {
            dst.complex.d[dj as usize].mul(&mats[i])
        } else {
            F2Matrix::zero(mats[i + 1].rows(), mats[i].cols())
        };
        let rhs = mats[i + 1].mul(&src.complex.d[i]);
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Remove a crossing-free loop component; returns the diagram and the arc
/// reindexing (old -> new).
pub fn death_surgery(d: &Diagram, loop_arc: usize) -> Result<(Diagram, Vec<usize>)> {
    let kd = d.arc_component[loop_arc];
    if !d.components[kd].is_loop() {
        return Err(Error::Invalid("death needs a crossing-free circle".into()));
    }
    let dead_place = match d.components[kd].kind {
        ComponentKind::FreeLoop { place, .. } => place,
        _ => unreachable!(),
    };
    let mut arc_map = vec![usize::MAX; d.n_arcs()];
    let mut next = 0;
    for a in 0..d.n_arcs() {
        if a != loop_arc {
            arc_map[a] = next;
            next += 1;
        }
    }
    let mut new_index = vec![usize::MAX; d.n_components()];
    let mut ni = 0;
    for ki in 0..d.n_components() {
        if ki != kd {
            new_index[ki] = ni;
            ni += 1;
        }
    }
    let crossings: Vec<Crossing> = d
        .crossings
        .iter()
        .map(|x| Crossing {
            slots: [0, 1, 2, 3].map(|i| SlotRef {
                arc: arc_map[x.slots[i].arc],
                end: x.slots[i].end,
            }),
            over: x.over,
        })
        .collect();
    let mut components = Vec::new();
    let mut arc_comp = vec![usize::MAX; d.n_arcs() - 1];
    for (ki, comp) in d.components.iter().enumerate() {
        if ki == kd {
            continue;
        }
        let kind = match comp.kind {
            ComponentKind::FreeLoop { ccw, place } => {
                let place = match place {
                    LoopPlace::Inside(m) if m == kd => dead_place,
                    other => other,
                };
                ComponentKind::FreeLoop {
                    ccw,
                    place: match place {
                        LoopPlace::Inside(m) => LoopPlace::Inside(new_index[m]),
                        other => other,
                    },
                }
            }
            ComponentKind::Closed => ComponentKind::Closed,
        };
        let arcs: Vec<usize> = comp.arcs.iter().map(|&x| arc_map[x]).collect();
        for &x in &arcs {
            arc_comp[x] = new_index[ki];
        }
        components.push(Component { arcs, kind });
    }
    let outer = d.outer.map(|o| crate::diagram::Dart {
        arc: arc_map[o.arc],
        fwd: o.fwd,
    });
    let nd = Diagram::new(crossings, arc_comp, components, outer)?;
    Ok((nd, arc_map))
}
