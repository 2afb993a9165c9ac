//! Blackboard-framed cables.
//!
//! Every arc is replaced by parallel copies numbered 1..n from left to right
//! relative to the arc direction, strand 1 keeping the original orientation
//! and adjacent strands alternating. Every crossing between an n_u-coloured
//! under passage and an n_o-coloured over passage becomes an n_u x n_o grid
//! of crossings carrying the same over/under pattern.

use super::{
    Component, ComponentKind, Crossing, Dart, Diagram, End, LoopPlace, SlotRef,
};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub enum ArcProvenance {
    /// Parallel copy of an original arc: (arc, strand).
    Copy(usize, usize),
    /// Internal grid arc of a cabled crossing.
    Grid(usize),
}

#[derive(Clone, Debug)]
pub struct CableMap {
    pub colours: Vec<usize>,
    /// Cable component -> (original component, strand index 1..n).
    pub strand_of_component: Vec<(usize, usize)>,
    /// Cable arc -> provenance.
    pub arc_provenance: Vec<ArcProvenance>,
    /// Cable crossing -> (original crossing, under strand, over strand).
    pub crossing_provenance: Vec<(usize, usize, usize)>,
    /// base_copy[orig component][strand-1] = cable arc id of the base-arc copy.
    pub base_copy: Vec<Vec<usize>>,
}

impl CableMap {
    /// Cable component index of (orig component, strand).
    pub fn component_index(&self, orig: usize, strand: usize) -> Option<usize> {
        self.strand_of_component
            .iter()
            .position(|&(c, j)| c == orig && j == strand)
    }
}

pub fn cable(d: &Diagram, colours: &[usize]) -> Result<(Diagram, CableMap)> {
    if colours.len() != d.n_components() {
        return Err(Error::Invalid(format!(
            "colour vector length {} does not match {} components",
            colours.len(),
            d.n_components()
        )));
    }
    if colours.iter().any(|&n| n == 0) {
        let remove: Vec<bool> = colours.iter().map(|&n| n == 0).collect();
        let (d2, kept) = delete_components(d, &remove)?;
        let sub_colours: Vec<usize> = kept.iter().map(|&old| colours[old]).collect();
        let (cabled, map2) = cable(&d2, &sub_colours)?;
        // Re-express component provenance in terms of the original diagram.
        let strand_of_component = map2
            .strand_of_component
            .iter()
            .map(|&(c, j)| (kept[c], j))
            .collect();
        let mut base_copy = vec![Vec::new(); d.n_components()];
        for (new_c, &old_c) in kept.iter().enumerate() {
            base_copy[old_c] = map2.base_copy[new_c].clone();
        }
        return Ok((
            cabled,
            CableMap {
                colours: colours.to_vec(),
                strand_of_component,
                arc_provenance: map2.arc_provenance,
                crossing_provenance: map2.crossing_provenance,
                base_copy,
            },
        ));
    }

    let has_loops = d.components.iter().any(|c| c.is_loop());
    if has_loops && d.n_crossings() > 0 {
        return Err(Error::Invalid(
            "cabling of mixed loop/crossing diagrams is not supported".into(),
        ));
    }
    if has_loops {
        return cable_loops(d, colours);
    }

    let k = d.n_components();
    // Arc copies.
    let mut copy_id: Vec<Vec<usize>> = Vec::with_capacity(d.n_arcs());
    let mut arc_provenance: Vec<ArcProvenance> = Vec::new();
    let mut arc_component_orig: Vec<(usize, usize)> = Vec::new(); // (orig comp, strand)
    for a in 0..d.n_arcs() {
        let ki = d.arc_component[a];
        let n = colours[ki];
        let mut ids = Vec::with_capacity(n);
        for j in 1..=n {
            ids.push(arc_provenance.len());
            arc_provenance.push(ArcProvenance::Copy(a, j));
            arc_component_orig.push((ki, j));
        }
        copy_id.push(ids);
    }

    let mut crossings: Vec<Crossing> = Vec::new();
    let mut crossing_provenance: Vec<(usize, usize, usize)> = Vec::new();

    for c in 0..d.n_crossings() {
        let (u0, u1) = d.under_slots(c);
        let (o0, o1) = d.over_slots(c);
        let u_in = d.arrival_slot_of_passage(c, u0, u1, &[]);
        let o_in = d.arrival_slot_of_passage(c, o0, o1, &[]);
        let pos_case = o_in == (u_in + 3) % 4;
        debug_assert!(pos_case || o_in == (u_in + 1) % 4);
        // Local compass in slot indices.
        let w = u_in as usize;
        let s = (w + 1) % 4;
        let e = (w + 2) % 4;
        let n_ = (w + 3) % 4;

        let under_arc_in = d.crossings[c].slots[w];
        let under_arc_out = d.crossings[c].slots[e];
        let over_north = d.crossings[c].slots[n_];
        let over_south = d.crossings[c].slots[s];
        let ku = d.arc_component[under_arc_in.arc];
        let ko = d.arc_component[over_north.arc];
        let n_u = colours[ku];
        let n_o = colours[ko];
        let strand_at_col = |x: usize| if pos_case { n_o + 1 - x } else { x };

        // Grid crossing ids.
        let base = crossings.len();
        let gid = |r: usize, x: usize| base + (r - 1) * n_o + (x - 1);

        // Internal arcs created on demand; reserve ids first.
        let mut horiz = vec![vec![usize::MAX; n_o.saturating_sub(1)]; n_u];
        let mut vert = vec![vec![usize::MAX; n_o]; n_u.saturating_sub(1)];
        for r in 1..=n_u {
            for x in 1..n_o {
                horiz[r - 1][x - 1] = arc_provenance.len();
                arc_provenance.push(ArcProvenance::Grid(c));
                arc_component_orig.push((ku, r));
            }
        }
        for r in 1..n_u {
            for x in 1..=n_o {
                vert[r - 1][x - 1] = arc_provenance.len();
                arc_provenance.push(ArcProvenance::Grid(c));
                arc_component_orig.push((ko, strand_at_col(x)));
            }
        }

        // Copy end at a boundary: strand-1 keeps the original end role,
        // even strands flip it.
        let copy_slot = |orig: SlotRef, strand: usize| -> SlotRef {
            let end = if strand % 2 == 1 {
                orig.end
            } else {
                match orig.end {
                    End::Head => End::Tail,
                    End::Tail => End::Head,
                }
            };
            SlotRef {
                arc: copy_id[orig.arc][strand - 1],
                end,
            }
        };

        for r in 1..=n_u {
            // Under strand r flows east iff odd.
            let under_east = r % 2 == 1;
            for x in 1..=n_o {
                let m = strand_at_col(x);
                // Over strand m flows south iff (pos_case XOR even).
                let over_south_flow = if pos_case { m % 2 == 1 } else { m % 2 == 0 };

                // W slot.
                let w_slot = if x == 1 {
                    copy_slot(under_arc_in, r)
                } else {
                    let arc = horiz[r - 1][x - 2];
                    // arc between (r, x-1) and (r, x): east-flowing arrives here
                    SlotRef {
                        arc,
                        end: if under_east { End::Head } else { End::Tail },
                    }
                };
                // E slot.
                let e_slot = if x == n_o {
                    copy_slot(under_arc_out, r)
                } else {
                    let arc = horiz[r - 1][x - 1];
                    SlotRef {
                        arc,
                        end: if under_east { End::Tail } else { End::Head },
                    }
                };
                // N slot.
                let n_slot = if r == 1 {
                    copy_slot(over_north, m)
                } else {
                    let arc = vert[r - 2][x - 1];
                    SlotRef {
                        arc,
                        end: if over_south_flow { End::Head } else { End::Tail },
                    }
                };
                // S slot.
                let s_slot = if r == n_u {
                    copy_slot(over_south, m)
                } else {
                    let arc = vert[r - 1][x - 1];
                    SlotRef {
                        arc,
                        end: if over_south_flow { End::Tail } else { End::Head },
                    }
                };

                debug_assert_eq!(gid(r, x), crossings.len());
                crossings.push(Crossing {
                    slots: [w_slot, s_slot, e_slot, n_slot],
                    over: 1, // vertical (over-bundle) strand occupies S,N = slots 1,3
                });
                crossing_provenance.push((c, r, m));
            }
        }
    }

    // Components by walking strands from base-arc copies.
    let n_arcs = arc_provenance.len();
    let mut head_slot: Vec<Option<(usize, usize)>> = vec![None; n_arcs];
    for (ci, x) in crossings.iter().enumerate() {
        for (si, sr) in x.slots.iter().enumerate() {
            if sr.end == End::Head {
                debug_assert!(head_slot[sr.arc].is_none(), "duplicate head end");
                head_slot[sr.arc] = Some((ci, si));
            }
        }
    }
    let mut arc_comp = vec![usize::MAX; n_arcs];
    let mut components = Vec::new();
    let mut strand_of_component = Vec::new();
    let mut base_copy = vec![Vec::new(); k];
    for ki in 0..k {
        let base = d.components[ki].base();
        for j in 1..=colours[ki] {
            let start = copy_id[base][j - 1];
            base_copy[ki].push(start);
            let comp_idx = components.len();
            let mut arcs = Vec::new();
            let mut a = start;
            loop {
                debug_assert_eq!(arc_comp[a], usize::MAX, "strand walk revisits arc");
                arc_comp[a] = comp_idx;
                arcs.push(a);
                let (ci, si) = head_slot[a].expect("cable arc has a head");
                let nxt = crossings[ci].slots[(si + 2) % 4];
                debug_assert_eq!(nxt.end, End::Tail);
                a = nxt.arc;
                if a == start {
                    break;
                }
            }
            components.push(Component {
                arcs,
                kind: ComponentKind::Closed,
            });
            strand_of_component.push((ki, j));
        }
    }
    debug_assert!(arc_comp.iter().all(|&x| x != usize::MAX));
    // Sanity: strands stay within their provenance component.
    for (a, &(ki, j)) in arc_component_orig.iter().enumerate() {
        debug_assert_eq!(strand_of_component[arc_comp[a]], (ki, j));
    }

    let outer = d.outer.map(|o| {
        let n = colours[d.arc_component[o.arc]];
        if o.fwd {
            Dart {
                arc: copy_id[o.arc][0],
                fwd: true,
            }
        } else {
            Dart {
                arc: copy_id[o.arc][n - 1],
                fwd: false,
            }
        }
    });

    let cabled = Diagram::new(crossings, arc_comp, components, outer)?;
    Ok((
        cabled,
        CableMap {
            colours: colours.to_vec(),
            strand_of_component,
            arc_provenance,
            crossing_provenance,
            base_copy,
        },
    ))
}

/// Cable of a crossing-free diagram: concentric copies of each loop.
fn cable_loops(d: &Diagram, colours: &[usize]) -> Result<(Diagram, CableMap)> {
    let k = d.n_components();
    let mut arc_provenance = Vec::new();
    let mut components: Vec<Component> = Vec::new();
    let mut strand_of_component = Vec::new();
    let mut arc_comp = Vec::new();
    let mut base_copy = vec![Vec::new(); k];
    // component index of each (orig, strand)
    let mut idx_of = vec![Vec::new(); k];
    for ki in 0..k {
        for j in 1..=colours[ki] {
            idx_of[ki].push(components.len() + (j - 1));
        }
        for j in 1..=colours[ki] {
            let arc = arc_provenance.len();
            arc_provenance.push(ArcProvenance::Copy(d.components[ki].base(), j));
            base_copy[ki].push(arc);
            arc_comp.push(components.len());
            let (ccw0, _) = loop_data(d, ki)?;
            let ccw = if j % 2 == 1 { ccw0 } else { !ccw0 };
            components.push(Component {
                arcs: vec![arc],
                kind: ComponentKind::FreeLoop {
                    ccw,
                    place: LoopPlace::Outer, // fixed below
                },
            });
            strand_of_component.push((ki, j));
        }
    }
    // Nesting: for a ccw loop, strand 1 (leftmost along the flow) is the
    // innermost copy; for a cw loop it is the outermost.
    let inner_strand = |ki: usize| -> Result<usize> {
        let (ccw0, _) = loop_data(d, ki)?;
        Ok(if ccw0 { 1 } else { colours[ki] })
    };
    for ki in 0..k {
        let (ccw0, place0) = loop_data(d, ki)?;
        let n = colours[ki];
        let mapped_place = match place0 {
            LoopPlace::Outer => LoopPlace::Outer,
            LoopPlace::Inside(m) => LoopPlace::Inside(idx_of[m][inner_strand(m)? - 1]),
            LoopPlace::Unplaced => LoopPlace::Unplaced,
        };
        for j in 1..=n {
            let me = idx_of[ki][j - 1];
            let place = if ccw0 {
                // strand j sits inside strand j+1
                if j < n {
                    LoopPlace::Inside(idx_of[ki][j])
                } else {
                    mapped_place
                }
            } else if j > 1 {
                LoopPlace::Inside(idx_of[ki][j - 2])
            } else {
                mapped_place
            };
            if let ComponentKind::FreeLoop { place: p, .. } = &mut components[me].kind {
                *p = place;
            }
        }
    }
    let cabled = Diagram::new(vec![], arc_comp, components, None)?;
    Ok((
        cabled,
        CableMap {
            colours: colours.to_vec(),
            strand_of_component,
            arc_provenance,
            crossing_provenance: vec![],
            base_copy,
        },
    ))
}

fn loop_data(d: &Diagram, ki: usize) -> Result<(bool, LoopPlace)> {
    match d.components[ki].kind {
        ComponentKind::FreeLoop { ccw, place } => Ok((ccw, place)),
        _ => Err(Error::Invalid(format!("component {ki} is not a loop"))),
    }
}

/// Delete the marked components, splicing surviving strands through the
/// removed crossings. Returns the new diagram and, per new component, the
/// old component index.
pub fn delete_components(d: &Diagram, remove: &[bool]) -> Result<(Diagram, Vec<usize>)> {
    assert_eq!(remove.len(), d.n_components());
    let keep_arc = |a: usize| !remove[d.arc_component[a]];
    // Union arcs spliced at removed crossings.
    let mut next: Vec<Option<usize>> = vec![None; d.n_arcs()]; // arc -> arc it splices into (following orientation)
    let mut keep_crossing = vec![true; d.n_crossings()];
    for c in 0..d.n_crossings() {
        let (oc, uc) = d.passage_components(c);
        let drop_o = remove[oc];
        let drop_u = remove[uc];
        if !drop_o && !drop_u {
            continue;
        }
        keep_crossing[c] = false;
        for pass in [d.over_slots(c), d.under_slots(c)] {
            let (s0, s1) = pass;
            let a0 = d.crossings[c].slots[s0 as usize];
            if remove[d.arc_component[a0.arc]] {
                continue;
            }
            // Kept passage: splice arriving arc into departing arc.
            let (head_arc, tail_arc) = match (a0.end, d.crossings[c].slots[s1 as usize].end) {
                (End::Head, End::Tail) => (a0.arc, d.crossings[c].slots[s1 as usize].arc),
                (End::Tail, End::Head) => (d.crossings[c].slots[s1 as usize].arc, a0.arc),
                _ => unreachable!("passage has one head and one tail"),
            };
            next[head_arc] = Some(tail_arc);
        }
    }
    // Chains of splices: representative = first arc of each chain (no
    // predecessor), or cycle representative for crossing-free results.
    let mut pred = vec![false; d.n_arcs()];
    for (a, nx) in next.iter().enumerate() {
        if keep_arc(a) {
            if let Some(b) = nx {
                pred[*b] = true;
            }
        }
    }
    let mut merged_into = vec![usize::MAX; d.n_arcs()];
    let mut chain_members: Vec<Vec<usize>> = Vec::new();
    let mut rep_of: Vec<usize> = Vec::new();
    for a in 0..d.n_arcs() {
        if !keep_arc(a) || merged_into[a] != usize::MAX || pred[a] {
            continue;
        }
        let rep = rep_of.len();
        let mut members = Vec::new();
        let mut cur = a;
        loop {
            merged_into[cur] = rep;
            members.push(cur);
            match next[cur] {
                Some(b) if merged_into[b] == usize::MAX => cur = b,
                _ => break,
            }
        }
        rep_of.push(a);
        chain_members.push(members);
    }
    // Pure cycles (components that lost all their crossings).
    for a in 0..d.n_arcs() {
        if keep_arc(a) && merged_into[a] == usize::MAX {
            let rep = rep_of.len();
            let mut members = Vec::new();
            let mut cur = a;
            while merged_into[cur] == usize::MAX {
                merged_into[cur] = rep;
                members.push(cur);
                cur = next[cur].expect("cycle chain");
            }
            rep_of.push(a);
            chain_members.push(members);
        }
    }
    let n_new_arcs = rep_of.len();

    // New crossings.
    let mut new_crossings = Vec::new();
    let mut old_to_new_crossing = vec![usize::MAX; d.n_crossings()];
    for c in 0..d.n_crossings() {
        if !keep_crossing[c] {
            continue;
        }
        old_to_new_crossing[c] = new_crossings.len();
        let x = &d.crossings[c];
        new_crossings.push(Crossing {
            slots: [0, 1, 2, 3].map(|i| {
                let s = x.slots[i];
                SlotRef {
                    arc: merged_into[s.arc],
                    end: s.end,
                }
            }),
            over: x.over,
        });
    }
    // But merged arcs keep only their outermost ends: drop interior ends.
    // The ends that survive in new crossings are exactly those at kept
    // crossings, which are chain-boundary ends by construction.

    // Components.
    let mut components = Vec::new();
    let mut kept = Vec::new();
    let mut new_arc_comp = vec![usize::MAX; n_new_arcs];
    for (ki, comp) in d.components.iter().enumerate() {
        if remove[ki] {
            continue;
        }
        let new_ki = components.len();
        kept.push(ki);
        let mut arcs = Vec::new();
        for &a in &comp.arcs {
            let m = merged_into[a];
            if arcs.last() != Some(&m) && arcs.first() != Some(&m) {
                arcs.push(m);
            }
        }
        for &m in &arcs {
            new_arc_comp[m] = new_ki;
        }
        let crossing_free = arcs
            .iter()
            .all(|&m| chain_members[m].iter().all(|&a| {
                let e = d.ends(a);
                let tail_kept = e.tail.map(|(c, _)| keep_crossing[c]).unwrap_or(false);
                let head_kept = e.head.map(|(c, _)| keep_crossing[c]).unwrap_or(false);
                !tail_kept && !head_kept
            }));
        let kind = if comp.is_loop() {
            comp.kind.clone()
        } else if crossing_free {
            debug_assert_eq!(arcs.len(), 1);
            let ccw = component_sense(d, ki)?;
            ComponentKind::FreeLoop {
                ccw,
                place: LoopPlace::Unplaced,
            }
        } else {
            ComponentKind::Closed
        };
        components.push(Component { arcs, kind });
    }
    // Loops placed in a now-empty diagram are all unnested.
    let any_crossings = new_crossings.iter().count() > 0;
    let n_loops = components.iter().filter(|c| c.is_loop()).count();
    if !any_crossings && n_loops == components.len() && n_loops <= 1 {
        for comp in &mut components {
            if let ComponentKind::FreeLoop { place, .. } = &mut comp.kind {
                *place = LoopPlace::Outer;
            }
        }
    }

    // Outer marker.
    let outer = if any_crossings {
        let faces = d.face_data();
        let old_outer = d
            .outer
            .ok_or_else(|| Error::InvalidDiagram("missing outer".into()))?;
        // Walk the old outer face and find a dart on a surviving arc whose
        // crossings survive too (so its left face still makes sense).
        let f = faces.left_face(old_outer);
        let mut found = None;
        for a in 0..d.n_arcs() {
            for fwd in [true, false] {
                let dart = Dart { arc: a, fwd };
                if d.arrival(dart).is_some() && faces.left_face(dart) == f && keep_arc(a) {
                    let m = merged_into[a];
                    let still_has_ends = new_crossings.iter().any(|x| {
                        x.slots.iter().any(|s| s.arc == m)
                    });
                    if still_has_ends {
                        found = Some(Dart { arc: m, fwd });
                        break;
                    }
                }
            }
            if found.is_some() {
                break;
            }
        }
        found
    } else {
        None
    };

    let nd = Diagram::new(new_crossings, new_arc_comp, components, outer)?;
    Ok((nd, kept))
}

/// Sense (counter-clockwise or not) of a component that is simple as a plane
/// curve, i.e. has no self-crossings. Faces are two-coloured by which side of
/// the curve they lie on; the curve is counter-clockwise iff the unbounded
/// face is on its right.
pub fn component_sense(d: &Diagram, ki: usize) -> Result<bool> {
    let comp = &d.components[ki];
    if comp.is_loop() {
        return match comp.kind {
            ComponentKind::FreeLoop { ccw, .. } => Ok(ccw),
            _ => unreachable!(),
        };
    }
    for c in 0..d.n_crossings() {
        let (o, u) = d.passage_components(c);
        if o == ki && u == ki {
            return Err(Error::Invalid(
                "component has self-crossings; sense undefined".into(),
            ));
        }
    }
    let faces = d.face_data();
    let on_curve: Vec<bool> = (0..d.n_arcs())
        .map(|a| d.arc_component[a] == ki)
        .collect();
    // Two-colour faces: crossing a curve arc flips the side.
    let mut side = vec![-1i8; faces.n_faces];
    let start = faces.left_face(Dart {
        arc: comp.arcs[0],
        fwd: true,
    });
    side[start] = 0;
    let mut stack = vec![start];
    while let Some(f) = stack.pop() {
        for a in 0..d.n_arcs() {
            if d.ends(a).tail.is_none() {
                continue;
            }
            let fl = faces.left_face(Dart { arc: a, fwd: true });
            let fr = faces.left_face(Dart { arc: a, fwd: false });
            for (x, y) in [(fl, fr), (fr, fl)] {
                if x == f {
                    let want = if on_curve[a] { 1 - side[f] } else { side[f] };
                    if side[y] == -1 {
                        side[y] = want;
                        stack.push(y);
                    } else if side[y] != want {
                        return Err(Error::Invalid(
                            "face two-colouring inconsistent; curve is not simple".into(),
                        ));
                    }
                }
            }
        }
    }
    let outer = d
        .outer
        .ok_or_else(|| Error::InvalidDiagram("missing outer".into()))?;
    let outer_side = side[faces.left_face(outer)];
    if outer_side == -1 {
        return Err(Error::Invalid("outer face unreachable in two-colouring".into()));
    }
    // side 0 = left of the curve; ccw iff the unbounded region is NOT on the left
    Ok(outer_side != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{census, LinkingData};

    #[test]
    fn trefoil_two_cable_counts() {
        let d = census("trefoil+").unwrap().diagram;
        let (c, cm) = cable(&d, &[2]).unwrap();
        assert_eq!(c.n_crossings(), 12);
        assert_eq!(c.n_components(), 2);
        assert_eq!(cm.strand_of_component, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn one_cable_is_isomorphic() {
        for name in ["kink+1", "hopf+", "trefoil-", "fig8", "unknot"] {
            let d = census(name).unwrap().diagram;
            let colours = vec![1; d.n_components()];
            let (c, _) = cable(&d, &colours).unwrap();
            assert_eq!(
                c.canonical_encoding(),
                d.canonical_encoding(),
                "1-cable of {name}"
            );
        }
    }

    #[test]
    fn colour_zero_deletes() {
        let d = census("trefoil+").unwrap().diagram;
        let (c, _) = cable(&d, &[0]).unwrap();
        assert_eq!(c.n_components(), 0);
        let h = census("hopf+").unwrap().diagram;
        let (c, cm) = cable(&h, &[2, 0]).unwrap();
        assert_eq!(c.n_components(), 2);
        assert_eq!(c.n_crossings(), 0, "2-cable of a bare unknot");
        assert_eq!(cm.strand_of_component, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn strand_linking_rule() {
        // lk(D_ij, D_lm) = (-1)^(j+m) lk(L_i, L_l), and for i = l the framing.
        for (name, colours) in [
            ("kink+1", vec![2usize]),
            ("kink-2", vec![3]),
            ("trefoil+", vec![2]),
            ("hopf+", vec![2, 2]),
            ("hopf-", vec![2, 3]),
            ("fig8", vec![2]),
        ] {
            let d = census(name).unwrap().diagram;
            let orig = d.linking_data();
            let (c, cm) = cable(&d, &colours).unwrap();
            let lk = c.linking_data();
            for (ci, &(i, j)) in cm.strand_of_component.iter().enumerate() {
                for (cl, &(l, m)) in cm.strand_of_component.iter().enumerate() {
                    if ci == cl {
                        continue;
                    }
                    let sign = if (j + m) % 2 == 0 { 1 } else { -1 };
                    let expect = sign * orig.get(i, l);
                    assert_eq!(
                        lk.get(ci, cl),
                        expect,
                        "{name} strands ({i},{j}) vs ({l},{m})"
                    );
                }
            }
        }
    }

    #[test]
    fn kink_two_cable_strand_framings() {
        // proof-of-grading instance: the 2-cable of the +1 kink has
        // lk(D_1, D_2) = -1.
        let d = census("kink+1").unwrap().diagram;
        let (c, _) = cable(&d, &[2]).unwrap();
        let lk = c.linking_data();
        assert_eq!(lk.get(0, 1), -1);
        // strand self-framings equal the original framing
        assert_eq!(lk.get(0, 0), 1);
        assert_eq!(lk.get(1, 1), 1);
    }

    #[test]
    fn unknot_cable_is_nested_loops() {
        let d = census("unknot").unwrap().diagram;
        let (c, _) = cable(&d, &[3]).unwrap();
        assert_eq!(c.n_components(), 3);
        assert!(c.components.iter().all(|x| x.is_loop()));
        let r = crate::diagram::faces::resolve(&c, 0).unwrap();
        let mut depths = r.depths.clone();
        depths.sort();
        assert_eq!(depths, vec![0, 1, 2]);
    }

    #[test]
    fn cable_functorial_on_ones() {
        let d = census("trefoil+").unwrap().diagram;
        let (c2, _) = cable(&d, &[2]).unwrap();
        let (c21, _) = cable(&c2, &[1, 1]).unwrap();
        assert_eq!(c2.canonical_encoding(), c21.canonical_encoding());
    }

    #[test]
    fn hopf_linking_consistency() {
        let d = census("hopf+").unwrap().diagram;
        let (c, _) = cable(&d, &[3, 2]).unwrap();
        assert_eq!(c.n_crossings(), 2 * 3 * 2);
        assert_eq!(d.linking_data(), LinkingData::two_component(0, 0, 1));
    }
}
