//! Combinatorial oriented link diagrams.
//!
//! A diagram is a 4-valent plane graph given by a rotation system: each
//! crossing lists its four incident arc-ends in counter-clockwise order.
//! Planarity is a checked invariant (Euler formula on the traced faces),
//! never an assumption. Components without crossings are carried as free
//! loops with an explicit sense and nesting container.

mod cable;
mod census;
pub mod faces;
mod parse;

pub use cable::{cable, component_sense, delete_components, CableMap};
pub use census::{census, census_names, CensusEntry};
pub use faces::{FaceData, Resolution};
pub use parse::parse_diagram;

use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum End {
    Tail,
    Head,
}

/// One arc-end sitting in a crossing slot.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SlotRef {
    pub arc: usize,
    pub end: End,
}

/// Four slots in counter-clockwise rotation order. The over-strand occupies
/// slots `{over, over+2}` with `over` in `{0,1}`.
#[derive(Clone, Debug)]
pub struct Crossing {
    pub slots: [SlotRef; 4],
    pub over: u8,
}

/// A directed traversal of an arc.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Dart {
    pub arc: usize,
    pub fwd: bool,
}

impl Dart {
    pub fn rev(self) -> Dart {
        Dart {
            arc: self.arc,
            fwd: !self.fwd,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LoopPlace {
    /// Immediately inside the unbounded region.
    Outer,
    /// Immediately inside another free-loop component.
    Inside(usize),
    /// Placement unknown; nesting-dependent operations will refuse.
    Unplaced,
}

#[derive(Clone, Debug)]
pub enum ComponentKind {
    Closed,
    /// A crossing-free circle. `ccw` refers to the forward traversal of its
    /// single arc.
    FreeLoop { ccw: bool, place: LoopPlace },
}

#[derive(Clone, Debug)]
pub struct Component {
    /// Arcs in cyclic traversal order, starting at the base arc.
    pub arcs: Vec<usize>,
    pub kind: ComponentKind,
}

impl Component {
    pub fn base(&self) -> usize {
        self.arcs[0]
    }
    pub fn is_loop(&self) -> bool {
        matches!(self.kind, ComponentKind::FreeLoop { .. })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ArcEnds {
    pub tail: Option<(usize, u8)>,
    pub head: Option<(usize, u8)>,
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub crossings: Vec<Crossing>,
    /// Arc -> component index.
    pub arc_component: Vec<usize>,
    pub components: Vec<Component>,
    /// A dart whose left face is the unbounded region. Required whenever the
    /// diagram has crossings.
    pub outer: Option<Dart>,
    ends: Vec<ArcEnds>,
}

/// Symmetric linking matrix; diagonal entries are self-writhes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingData {
    pub lk: Vec<Vec<i64>>,
}

impl LinkingData {
    pub fn k(&self) -> usize {
        self.lk.len()
    }
    pub fn get(&self, i: usize, l: usize) -> i64 {
        self.lk[i][l]
    }
    pub fn framings(&self) -> Vec<i64> {
        (0..self.k()).map(|i| self.lk[i][i]).collect()
    }
    /// Synthetic data for model computations without a diagram.
    pub fn synthetic(lk: Vec<Vec<i64>>) -> Self {
        assert!(lk.iter().all(|r| r.len() == lk.len()));
        LinkingData { lk }
    }
    pub fn knot(framing: i64) -> Self {
        LinkingData {
            lk: vec![vec![framing]],
        }
    }
    pub fn two_component(f1: i64, f2: i64, lk: i64) -> Self {
        LinkingData {
            lk: vec![vec![f1, lk], vec![lk, f2]],
        }
    }
}

impl Diagram {
    pub fn new(
        crossings: Vec<Crossing>,
        arc_component: Vec<usize>,
        components: Vec<Component>,
        outer: Option<Dart>,
    ) -> Result<Diagram> {
        let n_arcs = arc_component.len();
        let mut ends = vec![ArcEnds::default(); n_arcs];
        for (ci, x) in crossings.iter().enumerate() {
            for (si, s) in x.slots.iter().enumerate() {
                if s.arc >= n_arcs {
                    return Err(Error::InvalidDiagram(format!(
                        "crossing {ci} references unknown arc {}",
                        s.arc
                    )));
                }
                let e = &mut ends[s.arc];
                let slot = match s.end {
                    End::Tail => &mut e.tail,
                    End::Head => &mut e.head,
                };
                if slot.is_some() {
                    return Err(Error::InvalidDiagram(format!(
                        "arc multiplicity: arc {} has a duplicated {} end",
                        s.arc,
                        if s.end == End::Tail { "tail" } else { "head" }
                    )));
                }
                *slot = Some((ci, si as u8));
            }
        }
        let d = Diagram {
            crossings,
            arc_component,
            components,
            outer,
            ends,
        };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        // Arc/component bookkeeping.
        let mut seen = vec![false; self.arc_component.len()];
        for (ki, comp) in self.components.iter().enumerate() {
            if comp.arcs.is_empty() {
                return Err(Error::InvalidDiagram(format!("component {ki} has no arcs")));
            }
            for &a in &comp.arcs {
                if a >= self.arc_component.len() || self.arc_component[a] != ki {
                    return Err(Error::InvalidDiagram(format!(
                        "arc {a} not assigned to component {ki}"
                    )));
                }
                if seen[a] {
                    return Err(Error::InvalidDiagram(format!(
                        "arc {a} listed in more than one component position"
                    )));
                }
                seen[a] = true;
            }
            match comp.kind {
                ComponentKind::FreeLoop { .. } => {
                    if comp.arcs.len() != 1 {
                        return Err(Error::InvalidDiagram(format!(
                            "free loop component {ki} must have exactly one arc"
                        )));
                    }
                    let a = comp.arcs[0];
                    if self.ends[a].tail.is_some() || self.ends[a].head.is_some() {
                        return Err(Error::InvalidDiagram(format!(
                            "free loop component {ki} meets a crossing"
                        )));
                    }
                }
                ComponentKind::Closed => {
                    // Orientation consistency: head of each arc meets the tail of
                    // the next at the same crossing, through opposite slots.
                    for w in 0..comp.arcs.len() {
                        let a = comp.arcs[w];
                        let b = comp.arcs[(w + 1) % comp.arcs.len()];
                        let (Some((ca, sa)), Some((cb, sb))) =
                            (self.ends[a].head, self.ends[b].tail)
                        else {
                            return Err(Error::InvalidDiagram(format!(
                                "inconsistent orientation: arc {a} or {b} misses a crossing end"
                            )));
                        };
                        if ca != cb || (sa + 2) % 4 != sb {
                            return Err(Error::InvalidDiagram(format!(
                                "inconsistent orientation: arcs {a} -> {b} do not pass through a crossing"
                            )));
                        }
                    }
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidDiagram("arc not covered by any component".into()));
        }
        // Every crossing-arc has both ends.
        for (a, e) in self.ends.iter().enumerate() {
            let is_loop = self.components[self.arc_component[a]].is_loop();
            if !is_loop && (e.tail.is_none() || e.head.is_none()) {
                return Err(Error::InvalidDiagram(format!(
                    "arc multiplicity: arc {a} does not occur exactly twice"
                )));
            }
        }
        // Free-loop placement forms a forest.
        for (ki, comp) in self.components.iter().enumerate() {
            if let ComponentKind::FreeLoop { place, .. } = comp.kind {
                let mut cur = place;
                let mut hops = 0;
                while let LoopPlace::Inside(next) = cur {
                    if !self
                        .components
                        .get(next)
                        .map(|c| c.is_loop())
                        .unwrap_or(false)
                    {
                        return Err(Error::InvalidDiagram(format!(
                            "loop {ki} placed inside non-loop component {next}"
                        )));
                    }
                    hops += 1;
                    if hops > self.components.len() {
                        return Err(Error::InvalidDiagram("loop placement cycle".into()));
                    }
                    cur = match self.components[next].kind {
                        ComponentKind::FreeLoop { place, .. } => place,
                        _ => unreachable!(),
                    };
                }
            }
        }
        if !self.crossings.is_empty() {
            // Connectivity of the crossing part.
            let mut vis = vec![false; self.crossings.len()];
            let mut stack = vec![0usize];
            vis[0] = true;
            while let Some(c) = stack.pop() {
                for s in &self.crossings[c].slots {
                    for other in [self.ends[s.arc].tail, self.ends[s.arc].head]
                        .into_iter()
                        .flatten()
                    {
                        if !vis[other.0] {
                            vis[other.0] = true;
                            stack.push(other.0);
                        }
                    }
                }
            }
            if !vis.iter().all(|&v| v) {
                return Err(Error::InvalidDiagram(
                    "crossing part of the diagram is disconnected".into(),
                ));
            }
            // Planarity via the Euler formula.
            let v = self.crossings.len() as i64;
            let e = self
                .ends
                .iter()
                .filter(|en| en.tail.is_some())
                .count() as i64;
            let f = self.face_count() as i64;
            if v - e + f != 2 {
                return Err(Error::InvalidDiagram(format!(
                    "non-planar rotation system: V - E + F = {v} - {e} + {f} != 2"
                )));
            }
            let outer = self.outer.ok_or_else(|| {
                Error::InvalidDiagram("diagram with crossings needs an outer face marker".into())
            })?;
            if self.components[self.arc_component[outer.arc]].is_loop() {
                return Err(Error::InvalidDiagram(
                    "outer dart must lie on a crossing component".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn n_arcs(&self) -> usize {
        self.arc_component.len()
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn ends(&self, arc: usize) -> ArcEnds {
        self.ends[arc]
    }

    /// Slot at which the dart arrives (head for forward, tail for backward).
    pub fn arrival(&self, d: Dart) -> Option<(usize, u8)> {
        if d.fwd {
            self.ends[d.arc].head
        } else {
            self.ends[d.arc].tail
        }
    }

    /// Dart leaving through the given slot.
    pub fn outgoing(&self, c: usize, slot: u8) -> Dart {
        let s = self.crossings[c].slots[slot as usize];
        Dart {
            arc: s.arc,
            fwd: s.end == End::Tail,
        }
    }

    /// Continue a strand through its crossing (opposite slot).
    pub fn through(&self, d: Dart) -> Option<Dart> {
        let (c, s) = self.arrival(d)?;
        Some(self.outgoing(c, (s + 2) % 4))
    }

    /// The slot pair of the under strand: `(over+1, over+3)`.
    pub fn under_slots(&self, c: usize) -> (u8, u8) {
        let o = self.crossings[c].over;
        ((o + 1) % 4, (o + 3) % 4)
    }

    pub fn over_slots(&self, c: usize) -> (u8, u8) {
        let o = self.crossings[c].over;
        (o, (o + 2) % 4)
    }

    fn arrival_slot_of_passage(&self, c: usize, s0: u8, s1: u8, reversed: &[bool]) -> u8 {
        // Of the two slots of a passage, the one where the (possibly
        // reoriented) strand arrives.
        for s in [s0, s1] {
            let sr = self.crossings[c].slots[s as usize];
            let comp = self.arc_component[sr.arc];
            let rev = reversed.get(comp).copied().unwrap_or(false);
            let arriving = match sr.end {
                End::Head => !rev,
                End::Tail => rev,
            };
            if arriving {
                return s;
            }
        }
        unreachable!("a passage has exactly one arriving end");
    }

    /// Crossing sign, with an optional per-component reorientation.
    pub fn sign_with(&self, c: usize, reversed: &[bool]) -> i8 {
        let (o0, o1) = self.over_slots(c);
        let (u0, u1) = self.under_slots(c);
        let i_over = self.arrival_slot_of_passage(c, o0, o1, reversed);
        let j_under = self.arrival_slot_of_passage(c, u0, u1, reversed);
        if (i_over + 1) % 4 == j_under {
            1
        } else {
            -1
        }
    }

    pub fn sign(&self, c: usize) -> i8 {
        self.sign_with(c, &[])
    }

    pub fn crossing_sign(&self, c: usize) -> Result<i8> {
        if c >= self.crossings.len() {
            return Err(Error::Invalid(format!("unknown crossing identifier {c}")));
        }
        Ok(self.sign(c))
    }

    pub fn writhe(&self) -> i64 {
        (0..self.n_crossings()).map(|c| self.sign(c) as i64).sum()
    }

    pub fn n_negative(&self) -> usize {
        (0..self.n_crossings()).filter(|&c| self.sign(c) < 0).count()
    }

    /// Components of the two passages at a crossing: (over component, under component).
    pub fn passage_components(&self, c: usize) -> (usize, usize) {
        let (o0, _) = self.over_slots(c);
        let (u0, _) = self.under_slots(c);
        let oa = self.crossings[c].slots[o0 as usize].arc;
        let ua = self.crossings[c].slots[u0 as usize].arc;
        (self.arc_component[oa], self.arc_component[ua])
    }

    pub fn linking_data(&self) -> LinkingData {
        let k = self.n_components();
        let mut m = vec![vec![0i64; k]; k];
        for c in 0..self.n_crossings() {
            let (i, l) = self.passage_components(c);
            let s = self.sign(c) as i64;
            if i == l {
                m[i][i] += s;
            } else {
                m[i][l] += s;
                m[l][i] += s;
            }
        }
        for i in 0..k {
            for l in 0..k {
                if i != l {
                    debug_assert!(m[i][l] % 2 == 0);
                    m[i][l] /= 2;
                }
            }
        }
        LinkingData { lk: m }
    }

    /// Deterministic structural encoding anchored at base points; two diagrams
    /// are isomorphic as based, ordered diagrams iff their encodings agree.
    pub fn canonical_encoding(&self) -> String {
        match self.matching(None) {
            Ok(code) => code,
            Err(e) => format!("invalid:{e}"),
        }
    }

    /// Walks the diagram in canonical order. With `other`, walks both in
    /// lockstep and returns the arc bijection self -> other.
    pub fn lockstep_match(&self, other: &Diagram) -> Option<(Vec<usize>, Vec<usize>)> {
        let code_a = self.matching(None).ok()?;
        let code_b = other.matching(None).ok()?;
        if code_a != code_b {
            return None;
        }
        let order_a = self.canonical_arc_order();
        let order_b = other.canonical_arc_order();
        let mut arc_map = vec![usize::MAX; self.n_arcs()];
        for (x, y) in order_a.iter().zip(order_b.iter()) {
            arc_map[*x] = *y;
        }
        // Crossing map via arc ends.
        let mut cross_map = vec![usize::MAX; self.n_crossings()];
        for (a, &b) in arc_map.iter().enumerate() {
            if b == usize::MAX {
                continue;
            }
            if let (Some((ca, _)), Some((cb, _))) = (self.ends[a].head, other.ends[b].head) {
                cross_map[ca] = cb;
            }
            if let (Some((ca, _)), Some((cb, _))) = (self.ends[a].tail, other.ends[b].tail) {
                cross_map[ca] = cb;
            }
        }
        Some((arc_map, cross_map))
    }

    fn canonical_arc_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n_arcs());
        for comp in &self.components {
            order.extend(comp.arcs.iter().copied());
        }
        order
    }

    fn matching(&self, _other: Option<&Diagram>) -> Result<String> {
        use std::fmt::Write;
        let order = self.canonical_arc_order();
        let mut arc_new = vec![usize::MAX; self.n_arcs()];
        for (i, &a) in order.iter().enumerate() {
            arc_new[a] = i;
        }
        let mut out = String::new();
        for comp in &self.components {
            match comp.kind {
                ComponentKind::Closed => {
                    write!(out, "C[{}]", comp.arcs.len()).unwrap();
                }
                ComponentKind::FreeLoop { ccw, place } => {
                    let p = match place {
                        LoopPlace::Outer => "o".to_string(),
                        LoopPlace::Inside(m) => format!("i{m}"),
                        LoopPlace::Unplaced => "?".to_string(),
                    };
                    write!(out, "L[{},{}]", if ccw { "ccw" } else { "cw" }, p).unwrap();
                }
            }
        }
        // Crossings in order of first encounter along the canonical arc order.
        let mut cross_order = Vec::new();
        let mut cross_new = vec![usize::MAX; self.n_crossings()];
        for &a in &order {
            if let Some((c, _)) = self.ends[a].head {
                if cross_new[c] == usize::MAX {
                    cross_new[c] = cross_order.len();
                    cross_order.push(c);
                }
            }
        }
        for &c in &cross_order {
            let x = &self.crossings[c];
            // Normalize rotation: start at the lexicographically smallest slot.
            let key = |s: &SlotRef| (arc_new[s.arc], s.end == End::Head);
            let rot = (0..4)
                .min_by_key(|&r| {
                    (0..4)
                        .map(|k| key(&x.slots[(r + k) % 4]))
                        .collect::<Vec<_>>()
                })
                .unwrap();
            write!(out, "X").unwrap();
            for k in 0..4 {
                let s = &x.slots[(rot + k) % 4];
                write!(
                    out,
                    "{}{}",
                    arc_new[s.arc],
                    if s.end == End::Head { "h" } else { "t" }
                )
                .unwrap();
                write!(out, ",").unwrap();
            }
            let over_new = (x.over as usize + 4 - rot) % 2;
            write!(out, "o{over_new};").unwrap();
        }
        if let Some(d) = self.outer {
            write!(out, "O{}{}", arc_new[d.arc], if d.fwd { "+" } else { "-" }).unwrap();
        }
        Ok(out)
    }

    /// Empty diagram (no components).
    pub fn empty() -> Diagram {
        Diagram {
            crossings: vec![],
            arc_component: vec![],
            components: vec![],
            outer: None,
            ends: vec![],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_diagrams_validate() {
        for name in census_names() {
            let e = census(name).unwrap();
            assert!(e.diagram.n_crossings() <= 8, "{name}");
        }
    }

    #[test]
    fn kink_has_writhe_one() {
        let d = census("kink+1").unwrap().diagram;
        assert_eq!(d.n_crossings(), 1);
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.sign(0), 1);
        assert_eq!(d.linking_data(), LinkingData::knot(1));
    }

    #[test]
    fn trefoil_signs() {
        let d = census("trefoil+").unwrap().diagram;
        assert_eq!(d.n_crossings(), 3);
        for c in 0..3 {
            assert_eq!(d.sign(c), 1);
        }
        assert_eq!(d.linking_data(), LinkingData::knot(3));
        let m = census("trefoil-").unwrap().diagram;
        for c in 0..3 {
            assert_eq!(m.sign(c), -1);
        }
    }

    #[test]
    fn hopf_linking() {
        let d = census("hopf+").unwrap().diagram;
        assert_eq!(d.linking_data(), LinkingData::two_component(0, 0, 1));
        let m = census("hopf-").unwrap().diagram;
        assert_eq!(m.linking_data(), LinkingData::two_component(0, 0, -1));
    }

    #[test]
    fn unknown_crossing_is_error() {
        let d = census("kink+1").unwrap().diagram;
        assert!(d.crossing_sign(5).is_err());
    }

    #[test]
    fn component_sign_sums_match_diagonal() {
        for name in census_names() {
            let d = census(name).unwrap().diagram;
            let lk = d.linking_data();
            let mut diag = vec![0i64; d.n_components()];
            for c in 0..d.n_crossings() {
                let (i, l) = d.passage_components(c);
                if i == l {
                    diag[i] += d.sign(c) as i64;
                }
            }
            for i in 0..d.n_components() {
                assert_eq!(diag[i], lk.get(i, i), "{name}");
            }
        }
    }
}
