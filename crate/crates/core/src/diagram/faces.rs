//! Faces of the rotation system, regions of a smoothing, circle nesting.
//!
//! A smoothing replaces every crossing by one of its two planar channel
//! pairs. Its complementary regions are original faces merged along the
//! opened channels, and the circles-versus-regions incidence forms a tree
//! rooted at the unbounded region; nesting depth and the clockwise /
//! counter-clockwise sense of every circle are read off that tree.

use super::{ComponentKind, Dart, Diagram, End, LoopPlace};
use crate::{Error, Result};

impl Diagram {
    /// Dart following `d` along the face on its left.
    pub fn next_on_left_face(&self, d: Dart) -> Option<Dart> {
        let (c, s) = self.arrival(d)?;
        Some(self.outgoing(c, (s + 3) % 4))
    }

    pub(crate) fn face_count(&self) -> usize {
        self.face_data().n_faces
    }

    /// Face orbits of the crossing part. Free loops do not participate.
    pub fn face_data(&self) -> FaceData {
        let n_arcs = self.n_arcs();
        let mut face_of = vec![usize::MAX; 2 * n_arcs];
        let idx = |d: Dart| d.arc * 2 + if d.fwd { 0 } else { 1 };
        let mut n_faces = 0;
        for a in 0..n_arcs {
            for fwd in [true, false] {
                let start = Dart { arc: a, fwd };
                if self.arrival(start).is_none() || face_of[idx(start)] != usize::MAX {
                    continue;
                }
                let mut d = start;
                loop {
                    face_of[idx(d)] = n_faces;
                    d = self.next_on_left_face(d).expect("closed crossing part");
                    if d == start {
                        break;
                    }
                }
                n_faces += 1;
            }
        }
        FaceData { face_of, n_faces }
    }
}

#[derive(Clone, Debug)]
pub struct FaceData {
    /// Indexed by dart (arc*2 + dir); the face on the LEFT of the dart.
    face_of: Vec<usize>,
    pub n_faces: usize,
}

impl FaceData {
    pub fn left_face(&self, d: Dart) -> usize {
        self.face_of[d.arc * 2 + if d.fwd { 0 } else { 1 }]
    }
}

/// The slot pairing of one smoothing choice at a crossing.
///
/// With the under strand occupying slots `(u, u+2)`, the 0-smoothing joins
/// `(u,u+1)` and `(u+2,u+3)`; the 1-smoothing joins the complementary
/// adjacent pairs. The 0-smoothing of a positive crossing is the oriented
/// one.
pub fn smoothing_partner(d: &Diagram, c: usize, bit: bool) -> [u8; 4] {
    let (u, _) = d.under_slots(c);
    let base = if bit { (u + 1) % 4 } else { u };
    let mut join = [0u8; 4];
    join[base as usize] = (base + 1) % 4;
    join[((base + 1) % 4) as usize] = base;
    join[((base + 2) % 4) as usize] = (base + 3) % 4;
    join[((base + 3) % 4) as usize] = (base + 2) % 4;
    join
}

/// Circles of one smoothing, with embedding data when requested.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// Per circle: arcs in trace order with the direction used by the trace.
    pub circles: Vec<Vec<Dart>>,
    /// arc -> circle index (total on arcs).
    pub arc_circle: Vec<u32>,
    /// Number of circles separating each circle from the unbounded region.
    pub depths: Vec<u32>,
    /// Whether each circle is counter-clockwise when traversed in trace order.
    pub ccw: Vec<bool>,
    /// Circle immediately containing each circle, if any.
    pub parent_circle: Vec<Option<usize>>,
}

impl Resolution {
    pub fn n_circles(&self) -> usize {
        self.circles.len()
    }
}

/// Trace the circles of a state, cheap form: circle count and arc->circle.
pub fn trace_circles(d: &Diagram, state: u64) -> (u8, Vec<u8>) {
    let n_arcs = d.n_arcs();
    let mut arc_circle = vec![u8::MAX; n_arcs];
    let joins: Vec<[u8; 4]> = (0..d.n_crossings())
        .map(|c| smoothing_partner(d, c, (state >> c) & 1 == 1))
        .collect();
    let mut n = 0u8;
    for a in 0..n_arcs {
        if arc_circle[a] != u8::MAX {
            continue;
        }
        // Free loop arcs are their own circle.
        if d.ends(a).tail.is_none() {
            arc_circle[a] = n;
            n += 1;
            continue;
        }
        let start = Dart { arc: a, fwd: true };
        let mut dart = start;
        loop {
            arc_circle[dart.arc] = n;
            let (c, s) = d.arrival(dart).unwrap();
            let j = joins[c][s as usize];
            dart = d.outgoing(c, j);
            if dart == start {
                break;
            }
        }
        n += 1;
    }
    (n, arc_circle)
}

/// Full resolution with nesting and orientation sense. Requires the outer
/// marker (when crossings exist) and placed free loops.
pub fn resolve(d: &Diagram, state: u64) -> Result<Resolution> {
    let n_arcs = d.n_arcs();
    let joins: Vec<[u8; 4]> = (0..d.n_crossings())
        .map(|c| smoothing_partner(d, c, (state >> c) & 1 == 1))
        .collect();
    let mut arc_circle = vec![u32::MAX; n_arcs];
    let mut circles: Vec<Vec<Dart>> = Vec::new();
    for a in 0..n_arcs {
        if arc_circle[a] != u32::MAX {
            continue;
        }
        let id = circles.len() as u32;
        let mut trace = Vec::new();
        if d.ends(a).tail.is_none() {
            arc_circle[a] = id;
            trace.push(Dart { arc: a, fwd: true });
            circles.push(trace);
            continue;
        }
        let start = Dart { arc: a, fwd: true };
        let mut dart = start;
        loop {
            arc_circle[dart.arc] = id;
            trace.push(dart);
            let (c, s) = d.arrival(dart).unwrap();
            dart = d.outgoing(c, joins[c][s as usize]);
            if dart == start {
                break;
            }
        }
        circles.push(trace);
    }

    // Regions: faces of the crossing part merged along opened channels, plus
    // one inner region per free loop.
    let faces = d.face_data();
    let mut uf = UnionFind::new(faces.n_faces.max(1));
    for c in 0..d.n_crossings() {
        let j = &joins[c];
        // The two corners NOT cut off by caps are connected through the
        // channel: corners between non-joined adjacent slot pairs.
        // Corner (i, i+1) is the left face of the dart arriving at slot i+1.
        for i in 0..4u8 {
            let nxt = (i + 1) % 4;
            if j[i as usize] != nxt {
                // corner (i, i+1) is swept into the channel; merge it with the
                // opposite swept corner (i+2, i+3).
                let f1 = corner_face(d, &faces, c, i);
                let f2 = corner_face(d, &faces, c, (i + 2) % 4);
                uf.union(f1, f2);
                break;
            }
        }
    }

    // Region nodes: merged face classes, then one node per free-loop inside.
    let n_loops = d
        .components
        .iter()
        .filter(|comp| comp.is_loop())
        .count();
    let mut loop_inner = vec![usize::MAX; d.n_components()];
    let mut next_node = uf.n_classes();
    let class_of = |uf: &mut UnionFind, f: usize| uf.class_index(f);
    let mut nodes = next_node + n_loops;
    for (ki, comp) in d.components.iter().enumerate() {
        if comp.is_loop() {
            loop_inner[ki] = next_node;
            next_node += 1;
        }
    }
    debug_assert_eq!(next_node, nodes);

    // Root region.
    let root = if d.n_crossings() > 0 {
        let outer = d
            .outer
            .ok_or_else(|| Error::InvalidDiagram("missing outer face marker".into()))?;
        class_of(&mut uf, faces.left_face(outer))
    } else {
        if uf.n_classes() == 0 {
            nodes += 1;
        }
        0
    };

    // Tree edges: one per circle, joining its two side regions.
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    let mut sides: Vec<(usize, usize)> = Vec::with_capacity(circles.len()); // (left, right) of trace
    for (ci, trace) in circles.iter().enumerate() {
        let first = trace[0];
        let comp = d.arc_component[first.arc];
        let (l, r) = if d.components[comp].is_loop() && d.ends(first.arc).tail.is_none() {
            let (ccw, place) = match d.components[comp].kind {
                ComponentKind::FreeLoop { ccw, place } => (ccw, place),
                _ => unreachable!(),
            };
            let outside = match place {
                LoopPlace::Outer => root,
                LoopPlace::Inside(m) => {
                    let node = loop_inner[m];
                    if node == usize::MAX {
                        return Err(Error::InvalidDiagram(
                            "loop placed inside a component that is not a loop".into(),
                        ));
                    }
                    node
                }
                LoopPlace::Unplaced => {
                    return Err(Error::InvalidDiagram(
                        "free loop without placement; nesting unavailable".into(),
                    ))
                }
            };
            let inside = loop_inner[comp];
            // left of forward trace: inside iff ccw
            if ccw {
                (inside, outside)
            } else {
                (outside, inside)
            }
        } else {
            let fl = class_of(&mut uf, faces.left_face(first));
            let fr = class_of(&mut uf, faces.left_face(first.rev()));
            (fl, fr)
        };
        adj[l].push((r, ci));
        adj[r].push((l, ci));
        sides.push((l, r));
    }

    // BFS depths over the region tree, remembering the circle crossed to
    // enter each region.
    let mut depth = vec![u32::MAX; nodes];
    let mut entered_by: Vec<Option<usize>> = vec![None; nodes];
    depth[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(w, ci) in &adj[v] {
            if depth[w] == u32::MAX {
                depth[w] = depth[v] + 1;
                entered_by[w] = Some(ci);
                queue.push_back(w);
            }
        }
    }
    if depth.iter().any(|&x| x == u32::MAX) {
        return Err(Error::InvalidDiagram(
            "smoothing regions do not form a tree reachable from the outer region".into(),
        ));
    }

    let mut depths = Vec::with_capacity(circles.len());
    let mut ccw = Vec::with_capacity(circles.len());
    let mut parent_circle = Vec::with_capacity(circles.len());
    for (ci, &(l, r)) in sides.iter().enumerate() {
        let (dl, dr) = (depth[l], depth[r]);
        debug_assert!(dl.abs_diff(dr) == 1, "region tree edge depths differ by 1");
        depths.push(dl.min(dr));
        // counter-clockwise iff the bounded side (deeper region) is on the left
        ccw.push(dl > dr);
        let outside = if dl < dr { l } else { r };
        let parent = entered_by[outside].filter(|&p| p != ci);
        parent_circle.push(parent);
    }

    Ok(Resolution {
        circles,
        arc_circle,
        depths,
        ccw,
        parent_circle,
    })
}

fn corner_face(d: &Diagram, faces: &FaceData, c: usize, i: u8) -> usize {
    // corner between slots i and i+1 = left face of the dart arriving at slot i+1
    let s = d.crossings[c].slots[((i + 1) % 4) as usize];
    let arriving = Dart {
        arc: s.arc,
        fwd: s.end == End::Head,
    };
    faces.left_face(arriving)
}

struct UnionFind {
    parent: Vec<usize>,
    index: Vec<usize>,
    indexed: bool,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            index: vec![],
            indexed: false,
        }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
        self.indexed = false;
    }
    fn build_index(&mut self) {
        let mut next = 0;
        self.index = vec![usize::MAX; self.parent.len()];
        for x in 0..self.parent.len() {
            let r = self.find(x);
            if self.index[r] == usize::MAX {
                self.index[r] = next;
                next += 1;
            }
        }
        self.indexed = true;
    }
    fn n_classes(&mut self) -> usize {
        if !self.indexed {
            self.build_index();
        }
        self.index.iter().filter(|&&i| i != usize::MAX).count()
    }
    fn class_index(&mut self, x: usize) -> usize {
        if !self.indexed {
            self.build_index();
        }
        let r = self.find(x);
        self.index[r]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::census;

    #[test]
    fn unknot_resolution() {
        let d = census("unknot").unwrap().diagram;
        let r = resolve(&d, 0).unwrap();
        assert_eq!(r.n_circles(), 1);
        assert_eq!(r.depths, vec![0]);
        assert!(r.ccw[0]);
    }

    #[test]
    fn hopf_zero_state_two_circles() {
        let d = census("hopf+").unwrap().diagram;
        let r = resolve(&d, 0).unwrap();
        assert_eq!(r.n_circles(), 2);
    }

    #[test]
    fn kink_disjoint_smoothing_depths() {
        let d = census("kink+1").unwrap().diagram;
        // one state has 2 circles, the other 1
        let counts: Vec<u8> = (0..2).map(|s| trace_circles(&d, s).0).collect();
        assert!(counts.contains(&1) && counts.contains(&2));
        let s2 = (0..2u64).find(|&s| trace_circles(&d, s).0 == 2).unwrap();
        let r = resolve(&d, s2).unwrap();
        assert_eq!(r.depths, vec![0, 0], "kink loop is unnested");
        // 0-smoothing of the positive kink is the oriented (2-circle) one
        assert_eq!(s2, 0);
    }

    #[test]
    fn euler_formula_census() {
        for name in census_names() {
            let d = census(name).unwrap().diagram;
            if d.n_crossings() > 0 {
                let f = d.face_data();
                let e = 2 * d.n_crossings();
                assert_eq!(
                    d.n_crossings() as i64 - e as i64 + f.n_faces as i64,
                    2,
                    "{name}"
                );
            }
        }
    }

    use crate::diagram::census_names;
}
