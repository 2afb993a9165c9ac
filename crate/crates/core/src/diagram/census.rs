//! Built-in diagrams: unknot, kinked unknots, Hopf links, trefoils, the
//! figure-eight, and two auxiliary unknot diagrams used by tests.
//!
//! Braid closures are assembled programmatically; the kinked unknots are
//! written in the file format directly.

use super::{parse_diagram, Component, ComponentKind, Crossing, Dart, Diagram, End, SlotRef};
use crate::Result;

pub struct CensusEntry {
    pub name: &'static str,
    pub diagram: Diagram,
}

pub fn census_names() -> Vec<&'static str> {
    vec![
        "unknot", "kink-2", "kink-1", "kink+1", "kink+2", "hopf+", "hopf-", "trefoil+",
        "trefoil-", "fig8", "unknot-r2", "kink+1-r2",
    ]
}

pub fn census(name: &str) -> Result<CensusEntry> {
    let diagram = match name {
        "unknot" => unknot(),
        "kink+1" => parse_diagram(KINK_P1)?,
        "kink-1" => parse_diagram(KINK_M1)?,
        "kink+2" => parse_diagram(KINK_P2)?,
        "kink-2" => parse_diagram(KINK_M2)?,
        "hopf+" => braid_closure(2, &[(0, false), (0, false)])?,
        "hopf-" => braid_closure(2, &[(0, true), (0, true)])?,
        "trefoil+" => braid_closure(2, &[(0, false), (0, false), (0, false)])?,
        "trefoil-" => braid_closure(2, &[(0, true), (0, true), (0, true)])?,
        "fig8" => braid_closure(3, &[(0, false), (1, true), (0, false), (1, true)])?,
        "unknot-r2" => parse_diagram(UNKNOT_R2)?,
        "kink+1-r2" => parse_diagram(KINK_P1_R2)?,
        _ => {
            return Err(crate::Error::Invalid(format!(
                "unknown census diagram `{name}`"
            )))
        }
    };
    let name = census_names()
        .into_iter()
        .find(|&n| n == name)
        .expect("validated above");
    Ok(CensusEntry { name, diagram })
}

fn unknot() -> Diagram {
    Diagram::new(
        vec![],
        vec![0],
        vec![Component {
            arcs: vec![0],
            kind: ComponentKind::FreeLoop {
                ccw: true,
                place: super::LoopPlace::Outer,
            },
        }],
        None,
    )
    .expect("unknot is valid")
}

/// Trace closure of a braid; strands run downward, closure arcs wrap around
/// the right of the braid (so the leftmost strand's closure arc is outermost
/// and the unbounded face lies on its right).
///
/// A letter `(i, over_left)` crosses strand positions `i, i+1`; when
/// `over_left` is false the NE-SW strand is the over strand, which makes the
/// crossing positive for downward orientations.
pub fn braid_closure(n_strands: usize, letters: &[(usize, bool)]) -> Result<Diagram> {
    assert!(n_strands >= 2);
    // Provisional arc ids; `pending[p]` flows down at position p.
    let mut next_arc = 0usize;
    let mut fresh = || {
        let a = next_arc;
        next_arc += 1;
        a
    };
    let start: Vec<usize> = (0..n_strands).map(|_| fresh()).collect();
    let mut pending = start.clone();
    struct ProtoCrossing {
        slots: [(usize, End); 4],
        over: u8,
    }
    let mut protos: Vec<ProtoCrossing> = Vec::new();
    for &(i, over_left) in letters {
        assert!(i + 1 < n_strands);
        let sw = fresh();
        let se = fresh();
        // CCW slots: [NE, NW, SW, SE]
        protos.push(ProtoCrossing {
            slots: [
                (pending[i + 1], End::Head),
                (pending[i], End::Head),
                (sw, End::Tail),
                (se, End::Tail),
            ],
            over: if over_left { 1 } else { 0 },
        });
        // strands swap: NW -> SE, NE -> SW
        pending[i + 1] = se;
        pending[i] = sw;
    }
    // Closure identifies bottom pending arcs with the top start arcs.
    let mut remap: Vec<usize> = (0..next_arc).collect();
    for p in 0..n_strands {
        if pending[p] == start[p] {
            return Err(crate::Error::Invalid(
                "braid strand without crossings".into(),
            ));
        }
        remap[pending[p]] = start[p];
    }
    // Compact ids.
    let mut compact = vec![usize::MAX; next_arc];
    let mut n_arcs = 0;
    for a in 0..next_arc {
        if remap[a] == a {
            compact[a] = n_arcs;
            n_arcs += 1;
        }
    }
    let arc_of = |a: usize| compact[remap[a]];

    let crossings: Vec<Crossing> = protos
        .iter()
        .map(|p| Crossing {
            slots: [
                SlotRef {
                    arc: arc_of(p.slots[0].0),
                    end: p.slots[0].1,
                },
                SlotRef {
                    arc: arc_of(p.slots[1].0),
                    end: p.slots[1].1,
                },
                SlotRef {
                    arc: arc_of(p.slots[2].0),
                    end: p.slots[2].1,
                },
                SlotRef {
                    arc: arc_of(p.slots[3].0),
                    end: p.slots[3].1,
                },
            ],
            over: p.over,
        })
        .collect();

    // Components by walking head -> next tail (opposite slot).
    let mut head_slot = vec![None; n_arcs];
    for (ci, x) in crossings.iter().enumerate() {
        for (si, s) in x.slots.iter().enumerate() {
            if s.end == End::Head {
                head_slot[s.arc] = Some((ci, si));
            }
        }
    }
    let mut comp_of = vec![usize::MAX; n_arcs];
    let mut components = Vec::new();
    for a0 in 0..n_arcs {
        if comp_of[a0] != usize::MAX {
            continue;
        }
        let ki = components.len();
        let mut arcs = Vec::new();
        let mut a = a0;
        loop {
            comp_of[a] = ki;
            arcs.push(a);
            let (c, s) = head_slot[a].expect("closed braid arc");
            let nxt = crossings[c].slots[(s + 2) % 4];
            debug_assert_eq!(nxt.end, End::Tail);
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
    let outer = Some(Dart {
        arc: arc_of(start[0]),
        fwd: false,
    });
    Diagram::new(crossings, comp_of, components, outer)
}

const KINK_P1: &str = "\
components 1
component 1 arcs 1 2
basepoint 1 1
X 2h 2t 1t 1h over 2t
outer -1
";

const KINK_M1: &str = "\
components 1
component 1 arcs 1 2
basepoint 1 1
X 2h 2t 1t 1h over 2h
outer -1
";

const KINK_P2: &str = "\
components 1
component 1 arcs 1 2 3 4
basepoint 1 1
X 2h 2t 3t 1h over 2t
X 4h 4t 1t 3h over 4t
outer -1
";

const KINK_M2: &str = "\
components 1
component 1 arcs 1 2 3 4
basepoint 1 1
X 2h 2t 3t 1h over 2h
X 4h 4t 1t 3h over 4h
outer -1
";

// A 2-crossing unknot whose crossings form a removable R2 bigon
// (a finger of the circle pushed over its east arc).
const UNKNOT_R2: &str = "\
components 1
component 1 arcs 1 2 3 4
basepoint 1 1
X 2t 2h 1h 3t over 2h
X 1t 4t 4h 3h over 4t
outer -4
";

// The unknot-r2 circle with a positive kink inserted at its north point:
// same framed unknot as kink+1, drawn with two extra crossings.
const KINK_P1_R2: &str = "\
components 1
component 1 arcs 1 2 3 4 5 6
basepoint 1 1
X 2t 2h 1h 3t over 2h
X 1t 4t 6h 3h over 4t
X 4h 5h 5t 6t over 4h
outer -6
";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_listing_size() {
        assert!(census_names().len() >= 8);
    }

    #[test]
    fn braid_closures_have_expected_writhe() {
        assert_eq!(census("hopf+").unwrap().diagram.writhe(), 2);
        assert_eq!(census("hopf-").unwrap().diagram.writhe(), -2);
        assert_eq!(census("trefoil+").unwrap().diagram.writhe(), 3);
        assert_eq!(census("trefoil-").unwrap().diagram.writhe(), -3);
        assert_eq!(census("fig8").unwrap().diagram.writhe(), 0);
    }

    #[test]
    fn auxiliary_unknots() {
        let d = census("unknot-r2").unwrap().diagram;
        assert_eq!(d.n_crossings(), 2);
        assert_eq!(d.writhe(), 0);
        let d = census("kink+1-r2").unwrap().diagram;
        assert_eq!(d.n_crossings(), 3);
        assert_eq!(d.writhe(), 1);
    }

    #[test]
    fn kink_framings() {
        assert_eq!(census("kink+2").unwrap().diagram.writhe(), 2);
        assert_eq!(census("kink-2").unwrap().diagram.writhe(), -2);
    }
}
