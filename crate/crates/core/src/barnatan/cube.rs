//! The cube of resolutions in the diagonal basis.
//!
//! Over F2 the Frobenius algebra splits in the basis `{x, 1+x}`: merges are
//! diagonal and splits duplicate the label, so the differential of a
//! labelled state has at most one term per cube edge. The complex decomposes
//! into connected components of the labelled-state graph, and homology is
//! computed per component by Gaussian elimination of the complex, tracking
//! enough data to project cycles onto the surviving basis.

use super::EChain;
use crate::diagram::{faces::trace_circles, Diagram};
use crate::par;
use crate::{Error, Result};
use std::collections::HashMap;

/// Per-state circle data.
#[derive(Clone, Debug)]
pub struct StateCircles {
    pub n: u8,
    pub arc_circle: Vec<u8>,
}

impl StateCircles {
    pub fn trace(d: &Diagram, state: u64) -> StateCircles {
        let (n, arc_circle) = trace_circles(d, state);
        StateCircles { n, arc_circle }
    }
}

pub struct Cube {
    pub diagram: Diagram,
    pub n_minus: usize,
    pub circles: Vec<StateCircles>,
    /// Element index base per state.
    pub offsets: Vec<u64>,
    pub total_elements: u64,
}

/// Hard limit on labelled basis elements for full-cube work.
const ELEMENT_LIMIT: u64 = 1 << 27;

impl Cube {
    pub fn build(diagram: &Diagram) -> Result<Cube> {
        let c = diagram.n_crossings();
        let guard = crate::cube_guard();
        if c > guard {
            return Err(Error::SizeGuard {
                crossings: c,
                limit: guard,
            });
        }
        let n_states = 1u64 << c;
        let circles: Vec<StateCircles> = par::map_range(n_states as usize, |s| {
            StateCircles::trace(diagram, s as u64)
        });
        let mut offsets = Vec::with_capacity(n_states as usize + 1);
        let mut acc = 0u64;
        for sc in &circles {
            offsets.push(acc);
            acc += 1u64 << sc.n;
        }
        offsets.push(acc);
        if acc > ELEMENT_LIMIT {
            return Err(Error::SizeGuard {
                crossings: c,
                limit: guard,
            });
        }
        Ok(Cube {
            diagram: diagram.clone(),
            n_minus: diagram.n_negative(),
            circles,
            offsets,
            total_elements: acc,
        })
    }

    pub fn n_crossings(&self) -> usize {
        self.circles.len().trailing_zeros() as usize
    }

    pub fn degree(&self, state: u64) -> i32 {
        (state.count_ones() as i32) - self.n_minus as i32
    }

    pub fn element_id(&self, state: u64, mask: u64) -> u64 {
        debug_assert!(mask < (1u64 << self.circles[state as usize].n));
        self.offsets[state as usize] + mask
    }

    pub fn element_of(&self, id: u64) -> (u64, u64) {
        let state = match self.offsets.binary_search(&id) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (state as u64, id - self.offsets[state])
    }

    /// Image of an element under the cube edge at crossing `c` (state bit 0 -> 1).
    /// Returns None when the merge kills it.
    pub fn edge_image(&self, state: u64, mask: u64, c: usize) -> Option<(u64, u64)> {
        debug_assert_eq!((state >> c) & 1, 0);
        let s2 = state | (1u64 << c);
        let sc = &self.circles[state as usize];
        let sc2 = &self.circles[s2 as usize];
        // circles at the crossing in the source state
        let slots = &self.diagram.crossings[c].slots;
        let c0 = sc.arc_circle[slots[0].arc] as u64;
        let mut other = c0;
        for s in &slots[1..] {
            let ci = sc.arc_circle[s.arc] as u64;
            if ci != c0 {
                other = ci;
                break;
            }
        }
        if other != c0 {
            // merge: labels must agree
            if ((mask >> c0) & 1) != ((mask >> other) & 1) {
                return None;
            }
        }
        // transfer labels through minimal arcs
        let mut m2 = 0u64;
        let mut seen = 0u64; // circles of s2 already labelled
        for (arc, &cj) in sc2.arc_circle.iter().enumerate() {
            let bit = 1u64 << cj;
            if seen & bit == 0 {
                seen |= bit;
                if (mask >> sc.arc_circle[arc]) & 1 == 1 {
                    m2 |= bit;
                }
            }
        }
        Some((s2, m2))
    }

    /// Differential of a single element, as an XOR set.
    pub fn boundary(&self, state: u64, mask: u64) -> EChain {
        let mut out = EChain::new();
        for c in 0..self.n_crossings() {
            if (state >> c) & 1 == 0 {
                if let Some((s2, m2)) = self.edge_image(state, mask, c) {
                    out.toggle(s2, m2);
                }
            }
        }
        out
    }

    pub fn boundary_chain(&self, ch: &EChain) -> EChain {
        let mut out = EChain::new();
        for &(s, m) in ch.iter() {
            for c in 0..self.n_crossings() {
                if (s >> c) & 1 == 0 {
                    if let Some((s2, m2)) = self.edge_image(s, m, c) {
                        out.toggle(s2, m2);
                    }
                }
            }
        }
        out
    }
}

/// Element partition into differential-connected components.
pub struct Components {
    /// Per element: component root (path-compressed).
    pub root: Vec<u32>,
    /// Element ids grouped by component.
    pub members: Vec<u32>,
    /// Offsets into `members` per component, parallel to `roots`.
    pub comp_offsets: Vec<u32>,
    /// Root id of each component.
    pub roots: Vec<u32>,
    pub root_to_comp: HashMap<u32, u32>,
}

pub fn components(cube: &Cube) -> Components {
    let n = cube.total_elements as usize;
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let g = parent[parent[x as usize] as usize];
            parent[x as usize] = g;
            x = g;
        }
        x
    }
    let c = cube.n_crossings();
    for s in 0..(1u64 << c) {
        let base = cube.offsets[s as usize];
        let n_masks = 1u64 << cube.circles[s as usize].n;
        for mask in 0..n_masks {
            for cr in 0..c {
                if (s >> cr) & 1 == 0 {
                    if let Some((s2, m2)) = cube.edge_image(s, mask, cr) {
                        let a = find(&mut parent, (base + mask) as u32);
                        let b = find(&mut parent, cube.element_id(s2, m2) as u32);
                        if a != b {
                            parent[a.max(b) as usize] = a.min(b);
                        }
                    }
                }
            }
        }
    }
    let mut root = vec![0u32; n];
    for x in 0..n as u32 {
        root[x as usize] = find(&mut parent, x);
    }
    let mut members: Vec<u32> = (0..n as u32).collect();
    members.sort_by_key(|&x| root[x as usize]);
    let mut comp_offsets = Vec::new();
    let mut roots = Vec::new();
    let mut root_to_comp = HashMap::new();
    for (i, &x) in members.iter().enumerate() {
        let r = root[x as usize];
        if roots.last() != Some(&r) {
            comp_offsets.push(i as u32);
            root_to_comp.insert(r, roots.len() as u32);
            roots.push(r);
        }
    }
    comp_offsets.push(n as u32);
    Components {
        root,
        members,
        comp_offsets,
        roots,
        root_to_comp,
    }
}

impl Components {
    pub fn members_of(&self, comp: u32) -> &[u32] {
        let a = self.comp_offsets[comp as usize] as usize;
        let b = self.comp_offsets[comp as usize + 1] as usize;
        &self.members[a..b]
    }
    pub fn comp_of_element(&self, elem: u32) -> u32 {
        self.root_to_comp[&self.root[elem as usize]]
    }
    pub fn n_components(&self) -> usize {
        self.roots.len()
    }
}

/// One elimination step: pivot pair plus the data needed to replay the
/// projection and inclusion maps.
struct LogEntry {
    b: u32,
    c: u32,
    /// d(b) at elimination time, without c.
    delta: Vec<u32>,
    /// sources of c at elimination time, without b.
    chi: Vec<u32>,
}

/// Fully reduced component: survivors and the elimination log.
pub struct ReducedComponent {
    /// local ids are indices into `elems`
    pub elems: Vec<u32>,
    pub survivors: Vec<u32>,
    log: Vec<LogEntry>,
    local: HashMap<u32, u32>,
}

impl ReducedComponent {
    /// Project a vector (set of global element ids, all in this component)
    /// onto the survivors.
    pub fn project(&self, v: &[u32]) -> Vec<u32> {
        let mut set: std::collections::HashSet<u32> = v
            .iter()
            .map(|g| *self.local.get(g).expect("element in component"))
            .collect();
        for e in &self.log {
            let had_c = set.remove(&e.c);
            set.remove(&e.b);
            if had_c {
                for &t in &e.delta {
                    if !set.insert(t) {
                        set.remove(&t);
                    }
                }
            }
        }
        let mut out: Vec<u32> = set.into_iter().collect();
        out.sort();
        out
    }

    /// Lift a survivor combination back to a cycle in the component.
    pub fn include(&self, survivors: &[u32]) -> Vec<u32> {
        let mut set: std::collections::HashSet<u32> = survivors.iter().copied().collect();
        for e in self.log.iter().rev() {
            let mut parity = 0;
            for &x in &e.chi {
                if set.contains(&x) {
                    parity ^= 1;
                }
            }
            if parity == 1 && !set.insert(e.b) {
                set.remove(&e.b);
            }
        }
        let mut out: Vec<u32> = set.iter().map(|&l| self.elems[l as usize]).collect();
        out.sort();
        out
    }
}

/// Eliminate a component completely; returns survivors (homology) and log.
pub fn reduce_component(cube: &Cube, members: &[u32]) -> ReducedComponent {
    let n = members.len();
    let local: HashMap<u32, u32> = members
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, i as u32))
        .collect();
    let mut out: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut inn: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, &g) in members.iter().enumerate() {
        let (s, m) = cube.element_of(g as u64);
        for c in 0..cube.n_crossings() {
            if (s >> c) & 1 == 0 {
                if let Some((s2, m2)) = cube.edge_image(s, m, c) {
                    let t = local[&(cube.element_id(s2, m2) as u32)];
                    toggle_sorted(&mut out[i], t);
                }
            }
        }
    }
    for i in 0..n {
        for &t in &out[i] {
            inn[t as usize].push(i as u32);
        }
    }
    for v in &mut inn {
        v.sort();
    }

    let mut alive = vec![true; n];
    let mut log: Vec<LogEntry> = Vec::new();
    let mut queue: std::collections::VecDeque<u32> = (0..n as u32).collect();

    loop {
        // Cheap pivots first: a source with a single target or a target with
        // a single source eliminates without fill.
        while let Some(i) = queue.pop_front() {
            let i = i as usize;
            if !alive[i] {
                continue;
            }
            let pick = if out[i].len() == 1 {
                Some((i as u32, out[i][0]))
            } else if inn[i].len() == 1 {
                Some((inn[i][0], i as u32))
            } else {
                None
            };
            if let Some((b, c)) = pick {
                eliminate(&mut out, &mut inn, &mut alive, &mut log, &mut queue, b, c);
            }
        }
        // Anything left gets the cheapest remaining pivot by scan.
        let mut best: Option<(u64, u32, u32)> = None;
        for b in 0..n {
            if !alive[b] {
                continue;
            }
            for &c in &out[b] {
                let cost = (out[b].len() as u64 - 1) * (inn[c as usize].len() as u64 - 1);
                if best.map_or(true, |(bc, _, _)| cost < bc) {
                    best = Some((cost, b as u32, c));
                }
            }
        }
        match best {
            Some((_, b, c)) => {
                eliminate(&mut out, &mut inn, &mut alive, &mut log, &mut queue, b, c);
            }
            None => break,
        }
    }

    let survivors: Vec<u32> = (0..n as u32).filter(|&i| alive[i as usize]).collect();
    debug_assert!(survivors
        .iter()
        .all(|&i| out[i as usize].is_empty() && inn[i as usize].is_empty()));
    ReducedComponent {
        elems: members.to_vec(),
        survivors,
        log,
        local,
    }
}

fn eliminate(
    out: &mut [Vec<u32>],
    inn: &mut [Vec<u32>],
    alive: &mut [bool],
    log: &mut Vec<LogEntry>,
    queue: &mut std::collections::VecDeque<u32>,
    b: u32,
    c: u32,
) {
    debug_assert!(alive[b as usize] && alive[c as usize]);
    debug_assert!(out[b as usize].contains(&c));
    let targets_of_b = out[b as usize].clone();
    let delta: Vec<u32> = targets_of_b.iter().copied().filter(|&t| t != c).collect();
    let chi: Vec<u32> = inn[c as usize]
        .iter()
        .copied()
        .filter(|&x| x != b)
        .collect();
    // d'(x) = d(x) + d(b) for every other source x of c.
    for &x in &chi {
        for &t in &targets_of_b {
            let now_present = !toggle_sorted(&mut out[x as usize], t);
            if t != c {
                // keep inn in sync
                let was = toggle_sorted(&mut inn[t as usize], x);
                debug_assert_eq!(was, !now_present);
            }
        }
        queue.push_back(x);
    }
    // Remove rows/columns of b and c.
    for &t in &delta {
        toggle_sorted(&mut inn[t as usize], b);
        queue.push_back(t);
    }
    for x in inn[b as usize].clone() {
        toggle_sorted(&mut out[x as usize], b);
        queue.push_back(x);
    }
    for t in out[c as usize].clone() {
        toggle_sorted(&mut inn[t as usize], c);
        queue.push_back(t);
    }
    out[b as usize].clear();
    inn[b as usize].clear();
    out[c as usize].clear();
    inn[c as usize].clear();
    alive[b as usize] = false;
    alive[c as usize] = false;
    log.push(LogEntry { b, c, delta, chi });
}

/// XOR-toggle membership in a sorted vec; returns true if it was present.
fn toggle_sorted(v: &mut Vec<u32>, x: u32) -> bool {
    match v.binary_search(&x) {
        Ok(i) => {
            v.remove(i);
            true
        }
        Err(i) => {
            v.insert(i, x);
            false
        }
    }
}
