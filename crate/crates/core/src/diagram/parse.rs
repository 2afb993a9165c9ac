//! Line-oriented diagram file format.
//!
//! ```text
//! components 2
//! component 1 arcs 1 2
//! component 2 arcs 3 4
//! basepoint 1 1
//! X 3h 2h 4t 1t over 3h
//! X 2t 3t 1h 4h over 2t
//! outer +2
//! ```
//!
//! `X` lists the four half-edges of a crossing counter-clockwise; a half-edge
//! token is `<arc>h` (the arc arrives here) or `<arc>t` (the arc departs).
//! `over` repeats the token of the first or second slot and marks the strand
//! passing over. `outer` gives one or more darts (`+a` forward, `-a`
//! backward) whose left face is the unbounded region. Crossing-free
//! components are declared `component <id> loop ccw|cw [in <id>]`.

use super::{Component, ComponentKind, Crossing, Dart, Diagram, End, LoopPlace, SlotRef};
use crate::{Error, Result};
use std::collections::HashMap;

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let mut arc_ids: HashMap<String, usize> = HashMap::new();
    let mut arc_component: Vec<usize> = Vec::new();
    let mut components: Vec<Component> = Vec::new();
    let mut comp_ids: HashMap<String, usize> = HashMap::new();
    let mut crossings: Vec<Crossing> = Vec::new();
    let mut outer: Option<Dart> = None;
    let mut outer_extra: Vec<Dart> = Vec::new();
    let mut declared: Option<usize> = None;
    let mut basepoints: Vec<(usize, usize, usize)> = Vec::new(); // (line, comp, arc)
    let mut loop_placements: Vec<(usize, usize, String)> = Vec::new();

    let err = |line: usize, msg: String| Error::Parse { line, msg };

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.split('#').next().unwrap_or("").trim();
        if s.is_empty() {
            continue;
        }
        let tok: Vec<&str> = s.split_whitespace().collect();
        match tok[0] {
            "components" => {
                let n = tok
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(line, "expected `components <k>`".into()))?;
                declared = Some(n);
            }
            "component" => {
                let id = tok
                    .get(1)
                    .ok_or_else(|| err(line, "missing component id".into()))?;
                if comp_ids.contains_key(*id) {
                    return Err(err(line, format!("component {id} declared twice")));
                }
                let ki = components.len();
                comp_ids.insert(id.to_string(), ki);
                match tok.get(2) {
                    Some(&"arcs") => {
                        let mut arcs = Vec::new();
                        for t in &tok[3..] {
                            if arc_ids.contains_key(*t) {
                                return Err(err(
                                    line,
                                    format!("arc {t} already used by another component"),
                                ));
                            }
                            let a = arc_component.len();
                            arc_ids.insert(t.to_string(), a);
                            arc_component.push(ki);
                            arcs.push(a);
                        }
                        if arcs.is_empty() {
                            return Err(err(line, "component without arcs".into()));
                        }
                        components.push(Component {
                            arcs,
                            kind: ComponentKind::Closed,
                        });
                    }
                    Some(&"loop") => {
                        let ccw = match tok.get(3) {
                            Some(&"ccw") => true,
                            Some(&"cw") => false,
                            _ => return Err(err(line, "loop needs ccw|cw".into())),
                        };
                        let a = arc_component.len();
                        arc_ids.insert(format!("loop:{id}"), a);
                        arc_component.push(ki);
                        if let Some(&"in") = tok.get(4) {
                            let parent = tok
                                .get(5)
                                .ok_or_else(|| err(line, "loop `in` needs a component".into()))?;
                            loop_placements.push((line, ki, parent.to_string()));
                        }
                        components.push(Component {
                            arcs: vec![a],
                            kind: ComponentKind::FreeLoop {
                                ccw,
                                place: LoopPlace::Outer,
                            },
                        });
                    }
                    _ => return Err(err(line, "expected `arcs ...` or `loop ...`".into())),
                }
            }
            "basepoint" => {
                let comp = tok
                    .get(1)
                    .and_then(|t| comp_ids.get(*t))
                    .copied()
                    .ok_or_else(|| err(line, "basepoint references unknown component".into()))?;
                let arc = tok
                    .get(2)
                    .and_then(|t| arc_ids.get(*t))
                    .copied()
                    .ok_or_else(|| err(line, "basepoint references unknown arc".into()))?;
                basepoints.push((line, comp, arc));
            }
            "X" => {
                if tok.len() != 7 || tok[5] != "over" {
                    return Err(err(
                        line,
                        "crossing syntax: X <he> <he> <he> <he> over <he>".into(),
                    ));
                }
                let parse_he = |t: &str| -> Result<SlotRef> {
                    let (name, end) = if let Some(n) = t.strip_suffix('h') {
                        (n, End::Head)
                    } else if let Some(n) = t.strip_suffix('t') {
                        (n, End::Tail)
                    } else {
                        return Err(err(line, format!("half-edge `{t}` must end in h or t")));
                    };
                    let arc = arc_ids
                        .get(name)
                        .copied()
                        .ok_or_else(|| err(line, format!("unknown arc `{name}`")))?;
                    Ok(SlotRef { arc, end })
                };
                let slots = [
                    parse_he(tok[1])?,
                    parse_he(tok[2])?,
                    parse_he(tok[3])?,
                    parse_he(tok[4])?,
                ];
                let over = if tok[6] == tok[1] {
                    0
                } else if tok[6] == tok[2] {
                    1
                } else {
                    return Err(err(
                        line,
                        "`over` must repeat the first or second half-edge".into(),
                    ));
                };
                crossings.push(Crossing { slots, over });
            }
            "outer" => {
                for t in &tok[1..] {
                    let (fwd, name) = if let Some(n) = t.strip_prefix('+') {
                        (true, n)
                    } else if let Some(n) = t.strip_prefix('-') {
                        (false, n)
                    } else {
                        return Err(err(line, format!("outer dart `{t}` must start with + or -")));
                    };
                    let arc = arc_ids
                        .get(name)
                        .copied()
                        .ok_or_else(|| err(line, format!("unknown arc `{name}`")))?;
                    let d = Dart { arc, fwd };
                    if outer.is_none() {
                        outer = Some(d);
                    } else {
                        outer_extra.push(d);
                    }
                }
            }
            other => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }

    if let Some(k) = declared {
        if k != components.len() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("declared {k} components, found {}", components.len()),
            });
        }
    }
    // Loop placements now that all components exist.
    for (line, ki, parent) in loop_placements {
        let p = comp_ids
            .get(&parent)
            .copied()
            .ok_or_else(|| err(line, format!("unknown loop container `{parent}`")))?;
        if let ComponentKind::FreeLoop { place, .. } = &mut components[ki].kind {
            *place = LoopPlace::Inside(p);
        }
    }
    // Rotate components so the base arc comes first.
    for (line, comp, arc) in basepoints {
        let pos = components[comp]
            .arcs
            .iter()
            .position(|&a| a == arc)
            .ok_or_else(|| err(line, "basepoint arc not in component".into()))?;
        components[comp].arcs.rotate_left(pos);
    }

    let d = Diagram::new(crossings, arc_component, components, outer)?;
    // All outer darts must lie on the same face.
    if let Some(first) = d.outer {
        let faces = d.face_data();
        let f = faces.left_face(first);
        for e in outer_extra {
            if faces.left_face(e) != f {
                return Err(Error::Parse {
                    line: 0,
                    msg: "outer face walk is not a single face".into(),
                });
            }
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_kink() {
        let d = parse_diagram(
            "components 1\ncomponent 1 arcs 1 2\nbasepoint 1 1\nX 2h 2t 1t 1h over 2t\nouter -1\n",
        )
        .unwrap();
        assert_eq!(d.n_crossings(), 1);
        assert_eq!(d.sign(0), 1);
    }

    #[test]
    fn arc_multiplicity_error() {
        let e = parse_diagram(
            "components 1\ncomponent 1 arcs 1 2\nX 1h 2t 1t 1h over 1h\nouter -1\n",
        )
        .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("arc multiplicity") || msg.contains("duplicated"), "{msg}");
    }

    #[test]
    fn malformed_syntax_reports_line() {
        let e = parse_diagram("components 1\ncomponent 1 arcs 1 2\nX 1h 2t over\n").unwrap_err();
        assert!(e.to_string().contains("line 3"), "{e}");
    }

    #[test]
    fn nonplanar_rotation_rejected() {
        // trefoil with two slots of one crossing swapped: breaks the Euler count
        let good = "components 1\ncomponent 1 arcs 1 2 3 4 5 6\n\
             X 1h 4h 2t 5t over 1h\nX 3h 6h 4t 1t over 3h\nX 5h 2h 6t 3t over 5h\nouter +1\n";
        assert!(parse_diagram(good).is_ok());
        let bad = "components 1\ncomponent 1 arcs 1 2 3 4 5 6\n\
             X 4h 1h 2t 5t over 4h\nX 3h 6h 4t 1t over 3h\nX 5h 2h 6t 3t over 5h\nouter +1\n";
        let e = parse_diagram(bad).unwrap_err();
        let msg = e.to_string();
        assert!(
            msg.contains("non-planar") || msg.contains("inconsistent"),
            "{msg}"
        );
    }
}
