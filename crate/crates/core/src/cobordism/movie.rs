//! Building annulus movies and Reidemeister-II removals as diagram
//! surgeries, plus identification of isomorphic diagrams for re-keying
//! chains between a movie endpoint and a directly built cable.

use super::{
    death_surgery, loop_saddle_surgery, saddle_surgery, CircleCache, Movie, R2Data, StepKind,
};
use crate::barnatan::EChain;
use crate::diagram::faces::{resolve, smoothing_partner};
use crate::diagram::{cable, CableMap, Component, ComponentKind, Crossing, Diagram, End, LoopPlace, SlotRef};
use crate::{Error, Result};

/// Remove an R2 bigon at crossings `x, y` with tip arc `tau`.
pub fn r2_removal(d: &Diagram, x: usize, y: usize, tau: usize) -> Result<(Diagram, R2Data)> {
    let ends_of = |arc: usize| -> Option<(usize, u8, usize, u8)> {
        let e = d.ends(arc);
        let (tc, ts) = e.tail?;
        let (hc, hs) = e.head?;
        Some((tc, ts, hc, hs))
    };
    let (ttc, tts, thc, ths) = ends_of(tau).ok_or_else(|| {
        Error::Invalid("tip arc has no crossings".into())
    })?;
    if !((ttc == x && thc == y) || (ttc == y && thc == x)) {
        return Err(Error::Invalid(
            "crossings do not bound a bigon at the tip arc".into(),
        ));
    }
    // slot of tau at x and y
    let (tau_x, tau_y) = if ttc == x { (tts, ths) } else { (ths, tts) };
    // The other side of the bigon: the arc adjacent to tau at both crossings.
    let mut mu = usize::MAX;
    for cand in 0..d.n_arcs() {
        if cand == tau {
            continue;
        }
        let Some((ctc, cts, chc, chs)) = ends_of(cand) else {
            continue;
        };
        let slots_xy = if ctc == x && chc == y {
            Some((cts, chs))
        } else if ctc == y && chc == x {
            Some((chs, cts))
        } else {
            None
        };
        if let Some((sx, sy)) = slots_xy {
            if sx.abs_diff(tau_x) % 2 == 1 && sy.abs_diff(tau_y) % 2 == 1 {
                if mu != usize::MAX {
                    return Err(Error::Invalid("ambiguous bigon side".into()));
                }
                mu = cand;
            }
        }
    }
    if mu == usize::MAX {
        return Err(Error::Invalid("crossings do not bound a bigon".into()));
    }
    let mu_x = {
        let e = d.ends(mu);
        if e.tail.unwrap().0 == x {
            e.tail.unwrap().1
        } else {
            e.head.unwrap().1
        }
    };
    let mu_y = {
        let e = d.ends(mu);
        if e.tail.unwrap().0 == y {
            e.tail.unwrap().1
        } else {
            e.head.unwrap().1
        }
    };
    // Reidemeister-II pattern: the strand through tau is over at both
    // crossings or under at both.
    let over_at = |c: usize, slot: u8| {
        let (o0, o1) = d.over_slots(c);
        slot == o0 || slot == o1
    };
    if over_at(x, tau_x) != over_at(y, tau_y) {
        return Err(Error::Invalid(
            "bigon is clasped (mixed over/under), not a Reidemeister-II pair".into(),
        ));
    }
    // Parallel-vertex smoothing bits: the smoothing that does not cap the
    // bigon (does not pair tau with mu).
    let pass_bit = |c: usize, ts: u8, ms: u8| -> Result<bool> {
        let j0 = smoothing_partner(d, c, false);
        let j1 = smoothing_partner(d, c, true);
        match (j0[ts as usize] == ms, j1[ts as usize] == ms) {
            (true, false) => Ok(true),
            (false, true) => Ok(false),
            _ => Err(Error::Invalid("degenerate bigon smoothing".into())),
        }
    };
    let r_x = pass_bit(x, tau_x, mu_x)?;
    let r_y = pass_bit(y, tau_y, mu_y)?;
    if r_x == r_y {
        return Err(Error::Invalid(
            "bigon parallel vertex is not in middle degree".into(),
        ));
    }

    // Splice the four through-strands of x and y.
    let mut next: Vec<Option<usize>> = vec![None; d.n_arcs()];
    for &c in &[x, y] {
        for base in 0..2u8 {
            let s0 = d.crossings[c].slots[base as usize];
            let s1 = d.crossings[c].slots[(base + 2) as usize];
            let (head_arc, tail_arc) = match (s0.end, s1.end) {
                (End::Head, End::Tail) => (s0.arc, s1.arc),
                (End::Tail, End::Head) => (s1.arc, s0.arc),
                _ => unreachable!("through-strand has one head and one tail"),
            };
            next[head_arc] = Some(tail_arc);
        }
    }
    let mut pred = vec![false; d.n_arcs()];
    for nx in next.iter().flatten() {
        pred[*nx] = true;
    }
    let mut arc_map = vec![usize::MAX; d.n_arcs()];
    let mut chains: Vec<Vec<usize>> = Vec::new();
    for a in 0..d.n_arcs() {
        if arc_map[a] != usize::MAX || (pred[a] && next[a].is_some()) {
            continue;
        }
        if pred[a] {
            continue; // interior or terminal of a chain started elsewhere
        }
        let id = chains.len();
        let mut members = Vec::new();
        let mut cur = a;
        loop {
            arc_map[cur] = id;
            members.push(cur);
            match next[cur] {
                Some(b) if arc_map[b] == usize::MAX => cur = b,
                _ => break,
            }
        }
        chains.push(members);
    }
    // Closed chains (components that lose all crossings).
    for a in 0..d.n_arcs() {
        if arc_map[a] != usize::MAX {
            continue;
        }
        let id = chains.len();
        let mut members = Vec::new();
        let mut cur = a;
        while arc_map[cur] == usize::MAX {
            arc_map[cur] = id;
            members.push(cur);
            cur = next[cur].expect("closed splice chain");
        }
        chains.push(members);
    }
    let n_new = chains.len();
    let mut rep_arc = vec![usize::MAX; n_new];
    for (id, members) in chains.iter().enumerate() {
        rep_arc[id] = members
            .iter()
            .copied()
            .find(|&m| m != tau && m != mu)
            .ok_or_else(|| Error::Invalid("splice consists only of the bigon".into()))?;
    }

    let mut cross_map = vec![usize::MAX; d.n_crossings()];
    let mut new_crossings = Vec::new();
    for c in 0..d.n_crossings() {
        if c == x || c == y {
            continue;
        }
        cross_map[c] = new_crossings.len();
        new_crossings.push(Crossing {
            slots: [0, 1, 2, 3].map(|i| {
                let s = d.crossings[c].slots[i];
                SlotRef {
                    arc: arc_map[s.arc],
                    end: s.end,
                }
            }),
            over: d.crossings[c].over,
        });
    }

    // Components: walk crossings; chains with no remaining ends are loops.
    let small = rebuild_small(d, new_crossings, n_new, &arc_map, &chains, r_x, r_y, x, y)?;
    let data = R2Data {
        x,
        y,
        tau,
        mu,
        r_x,
        r_y,
        cross_map,
        arc_map,
        rep_arc,
    };
    Ok((small, data))
}

#[allow(clippy::too_many_arguments)]
fn rebuild_small(
    d: &Diagram,
    crossings: Vec<Crossing>,
    n_new: usize,
    arc_map: &[usize],
    chains: &[Vec<usize>],
    r_x: bool,
    r_y: bool,
    x: usize,
    y: usize,
) -> Result<Diagram> {
    let mut head_slot = vec![None; n_new];
    let mut has_end = vec![false; n_new];
    for (ci, xr) in crossings.iter().enumerate() {
        for (si, s) in xr.slots.iter().enumerate() {
            has_end[s.arc] = true;
            if s.end == End::Head {
                head_slot[s.arc] = Some((ci, si));
            }
        }
    }
    // Sense and nesting data for new crossing-free loops come from the
    // parallel smoothing of the removed bigon in the old diagram.
    let loop_state = {
        let mut s = 0u64;
        if r_x {
            s |= 1 << x;
        }
        if r_y {
            s |= 1 << y;
        }
        s
    };
    let loop_resolution = if has_end.iter().any(|&e| !e) {
        Some(resolve(d, loop_state)?)
    } else {
        None
    };

    let mut comp_of = vec![usize::MAX; n_new];
    let mut components: Vec<Component> = Vec::new();
    let mut loop_circle: Vec<(usize, usize)> = Vec::new(); // (component, circle in loop_resolution)
    let mut seeds: Vec<usize> = d
        .components
        .iter()
        .map(|c| arc_map[c.base()])
        .collect();
    seeds.extend(0..n_new);
    for a0 in seeds {
        if comp_of[a0] != usize::MAX {
            continue;
        }
        let ki = components.len();
        if !has_end[a0] {
            comp_of[a0] = ki;
            let res = loop_resolution.as_ref().expect("resolution for loops");
            let big_rep = chains[a0][0];
            let circ = res.arc_circle[big_rep] as usize;
            let ccw = loop_sense(d, d.arc_component[big_rep])?;
            loop_circle.push((ki, circ));
            components.push(Component {
                arcs: vec![a0],
                kind: ComponentKind::FreeLoop {
                    ccw,
                    place: LoopPlace::Unplaced,
                },
            });
            continue;
        }
        let mut arcs = Vec::new();
        let mut a = a0;
        loop {
            comp_of[a] = ki;
            arcs.push(a);
            let (c, s) = head_slot[a].ok_or_else(|| {
                Error::Invalid("splice chain with a dangling end".into())
            })?;
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
    // Loop placement: when the result is crossing-free we can nest the loops
    // by the containment of their circles in the parallel smoothing.
    if crossings.is_empty() {
        if let Some(res) = &loop_resolution {
            let comp_by_circle: std::collections::HashMap<usize, usize> =
                loop_circle.iter().map(|&(k, c)| (c, k)).collect();
            for &(ki, circ) in &loop_circle {
                let place = match res.parent_circle[circ] {
                    None => LoopPlace::Outer,
                    Some(p) => match comp_by_circle.get(&p) {
                        Some(&pk) => LoopPlace::Inside(pk),
                        None => LoopPlace::Unplaced,
                    },
                };
                if let ComponentKind::FreeLoop { place: pl, .. } = &mut components[ki].kind {
                    *pl = place;
                }
            }
        }
    }
    let outer = if components.iter().any(|c| !c.is_loop()) && d.outer.is_some() {
        // Prefer a marker on an arc untouched by the splices; a spliced arc
        // also keeps bordering the same region along its old stretch.
        let touched = |arc: usize| chains[arc_map[arc]].len() > 1;
        let o = crate::cobordism::outer_dart_avoiding(d, touched)?;
        Some(crate::diagram::Dart {
            arc: arc_map[o.arc],
            fwd: o.fwd,
        })
    } else {
        None
    };
    Diagram::new(crossings, comp_of, components, outer)
}

/// Sense of the simple closed curve a component becomes once its crossings
/// are removed by an isotopy. For a component without self-crossings this is
/// the face two-colouring; with self-crossings it is the Whitney rotation
/// number, computed as the signed count of the component's circles in the
/// oriented resolution (each counter-clockwise circle contributes +1).
fn loop_sense(d: &Diagram, comp: usize) -> Result<bool> {
    let has_self = (0..d.n_crossings()).any(|c| {
        let (o, u) = d.passage_components(c);
        o == comp && u == comp
    });
    if !has_self {
        return crate::diagram::component_sense(d, comp);
    }
    let theta = crate::barnatan::Orientation::original(d.n_components());
    let state = crate::barnatan::canonical_smoothing(d, &theta);
    let res = resolve(d, state)?;
    let mut rot = 0i32;
    for (j, trace) in res.circles.iter().enumerate() {
        if !trace.iter().all(|dd| d.arc_component[dd.arc] == comp) {
            continue;
        }
        debug_assert!(
            trace.iter().all(|dd| dd.fwd == trace[0].fwd),
            "oriented resolution circles are coherent"
        );
        let ccw = if trace[0].fwd {
            res.ccw[j]
        } else {
            !res.ccw[j]
        };
        rot += if ccw { 1 } else { -1 };
    }
    if rot.abs() != 1 {
        return Err(Error::Invalid(format!(
            "component rotation number {rot} does not describe a simple curve"
        )));
    }
    Ok(rot > 0)
}

/// The annulus movie contracting strands `l, l+1` of original component
/// `comp` in a cabled diagram: one saddle at the base-point cross-section,
/// R2 removals sliding the turn-back along the strand, one death.
pub fn annulus_movie(
    cabled: &Diagram,
    cm: &CableMap,
    comp: usize,
    l: usize,
) -> Result<Movie> {
    let n = cm.colours[comp];
    if l + 1 > n {
        return Err(Error::Invalid(format!(
            "strands ({l}, {}) not present in a {n}-cable",
            l + 1
        )));
    }
    let a = cm.base_copy[comp][l - 1];
    let b = cm.base_copy[comp][l];
    let comp_a = cabled.arc_component[a];
    let is_loop = cabled.components[comp_a].is_loop();

    let mut diagrams = vec![cabled.clone()];
    let mut steps = Vec::new();
    if is_loop {
        let d1 = loop_saddle_surgery(cabled, a, b)?;
        steps.push(StepKind::LoopSaddle { arcs: (a, b) });
        let fused_arc = if a > b { a - 1 } else { a };
        let (d2, arc_map) = death_surgery(&d1, fused_arc)?;
        diagrams.push(d1);
        steps.push(StepKind::Death {
            arc: fused_arc,
            arc_map,
        });
        diagrams.push(d2);
        return Ok(Movie { diagrams, steps });
    }

    let d1 = saddle_surgery(cabled, a, b)?;
    steps.push(StepKind::Saddle { arcs: (a, b) });
    diagrams.push(d1);

    // The forward tip follows the orientation of the original component:
    // the arc containing the forward half of the odd strand.
    let mut tip = if l % 2 == 1 { b } else { a };
    loop {
        let cur = diagrams.last().unwrap().clone();
        let e = cur.ends(tip);
        if e.head.is_none() {
            break; // the turn-back closed into a free circle
        }
        let x = e.head.unwrap().0;
        let y = e.tail.unwrap().0;
        if x == y {
            return Err(Error::Invalid(
                "tip arc loops at a single crossing; not an R2 slide".into(),
            ));
        }
        let (small, data) = r2_removal(&cur, x, y, tip)?;
        tip = data.arc_map[tip];
        steps.push(StepKind::R2Remove(data));
        diagrams.push(small);
    }
    // Death of the closed turn-back.
    let cur = diagrams.last().unwrap().clone();
    let (after, arc_map) = death_surgery(&cur, tip)?;
    steps.push(StepKind::Death { arc: tip, arc_map });
    diagrams.push(after);
    Ok(Movie { diagrams, steps })
}

/// Arc/crossing correspondence between isomorphic based diagrams.
pub struct DiagramMatch {
    pub arc_map: Vec<usize>,
    pub crossing_map: Vec<usize>,
}

pub fn match_diagrams(a: &Diagram, b: &Diagram) -> Result<DiagramMatch> {
    let (arc_map, crossing_map) = a
        .lockstep_match(b)
        .ok_or_else(|| Error::Invalid("diagrams are not isomorphic as based diagrams".into()))?;
    Ok(DiagramMatch {
        arc_map,
        crossing_map,
    })
}

/// Re-key a chain along a diagram isomorphism.
pub fn relabel_chain(
    ch: &EChain,
    src: &Diagram,
    dst: &Diagram,
    mat: &DiagramMatch,
) -> EChain {
    let mut src_cache = CircleCache::new();
    let mut dst_cache = CircleCache::new();
    let mut out = EChain::new();
    for &(s, m) in ch.iter() {
        let mut s2 = 0u64;
        for c in 0..src.n_crossings() {
            if (s >> c) & 1 == 1 {
                s2 |= 1u64 << mat.crossing_map[c];
            }
        }
        let st = src_cache.get(src, s).arc_circle.clone();
        let dt = dst_cache.get(dst, s2);
        let mut m2 = 0u64;
        for (arc, &cj) in st.iter().enumerate() {
            if (m >> cj) & 1 == 1 {
                m2 |= 1u64 << dt.arc_circle[mat.arc_map[arc]];
            }
        }
        out.toggle(s2, m2);
    }
    out
}

/// Movie plus the identification of its endpoint with a directly built
/// smaller cable.
pub struct AnnulusMap {
    pub movie: Movie,
    pub target: Diagram,
    target_match: DiagramMatch,
}

impl AnnulusMap {
    /// Construct the movie for contracting strands (l, l+1) of `comp` and
    /// identify its endpoint with `cable(d, colours - 2 e_comp)`.
    pub fn build(
        original: &Diagram,
        cabled: &Diagram,
        cm: &CableMap,
        comp: usize,
        l: usize,
    ) -> Result<AnnulusMap> {
        let movie = annulus_movie(cabled, cm, comp, l)?;
        let mut colours = cm.colours.clone();
        colours[comp] -= 2;
        let (target, _) = cable(original, &colours)?;
        let target_match = match_diagrams(movie.target(), &target)?;
        Ok(AnnulusMap {
            movie,
            target,
            target_match,
        })
    }

    pub fn apply(&self, chain: &EChain) -> EChain {
        let img = self.movie.apply(chain);
        relabel_chain(&img, self.movie.target(), &self.target, &self.target_match)
    }

    /// The reversed movie, as a map from chains on the small cable to chains
    /// on the large one.
    pub fn apply_reversed(&self, chain: &EChain) -> EChain {
        let mat_inv = DiagramMatch {
            arc_map: invert(&self.target_match.arc_map),
            crossing_map: invert(&self.target_match.crossing_map),
        };
        let on_movie_end = relabel_chain(chain, &self.target, self.movie.target(), &mat_inv);
        self.movie.reversed().apply(&on_movie_end)
    }
}

fn invert(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![usize::MAX; map.len()];
    for (i, &m) in map.iter().enumerate() {
        if m != usize::MAX {
            inv[m] = i;
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barnatan::{
        build_complex, canonical_cycle, canonical_element, Chain, Orientation,
    };
    use crate::cobordism::{materialize_map, verify_chain_map, Movie, StepKind};
    use crate::diagram::census;

    fn two_loops() -> Diagram {
        Diagram::new(
            vec![],
            vec![0, 1],
            vec![
                Component {
                    arcs: vec![0],
                    kind: ComponentKind::FreeLoop {
                        ccw: true,
                        place: LoopPlace::Outer,
                    },
                },
                Component {
                    arcs: vec![1],
                    kind: ComponentKind::FreeLoop {
                        ccw: true,
                        place: LoopPlace::Outer,
                    },
                },
            ],
            None,
        )
        .unwrap()
    }

    fn fuse_movie() -> Movie {
        let src = two_loops();
        let dst = loop_saddle_surgery(&src, 0, 1).unwrap();
        Movie {
            diagrams: vec![src, dst],
            steps: vec![StepKind::LoopSaddle { arcs: (0, 1) }],
        }
    }

    #[test]
    fn saddle_merge_is_frobenius_multiplication() {
        // two disjoint circles fused into one: 1*1 = 1, 1x = x1 = xx = x
        let movie = fuse_movie();
        let src = build_complex(&movie.diagrams[0]).unwrap();
        let dst = build_complex(&movie.diagrams[1]).unwrap();
        let mats = materialize_map(&src, &dst, |ch| movie.apply(ch));
        assert!(verify_chain_map(&src, &dst, &mats));
        let m = &mats[0];
        // basis order: labellings lex with 1 < x: [11, 1x, x1, xx] -> [1, x]
        assert!(m.get(0, 0) && !m.get(1, 0)); // 1*1 = 1
        assert!(!m.get(0, 1) && m.get(1, 1)); // 1*x = x
        assert!(!m.get(0, 2) && m.get(1, 2));
        assert!(!m.get(0, 3) && m.get(1, 3)); // x*x = x
    }

    #[test]
    fn reversed_saddle_is_comultiplication() {
        let movie = fuse_movie().reversed();
        let src = build_complex(&movie.diagrams[0]).unwrap();
        let dst = build_complex(&movie.diagrams[1]).unwrap();
        let mats = materialize_map(&src, &dst, |ch| movie.apply(ch));
        assert!(verify_chain_map(&src, &dst, &mats));
        let m = &mats[0];
        // Delta(1) = 1x + x1 + 11, Delta(x) = xx
        let col1: Vec<bool> = (0..4).map(|r| m.get(r, 0)).collect();
        assert_eq!(col1, vec![true, true, true, false]);
        let colx: Vec<bool> = (0..4).map(|r| m.get(r, 1)).collect();
        assert_eq!(colx, vec![false, false, false, true]);
    }

    #[test]
    fn death_and_birth_examples() {
        let one = loop_saddle_surgery(&two_loops(), 0, 1).unwrap();
        let (empty, arc_map) = death_surgery(&one, 0).unwrap();
        assert_eq!(empty.n_components(), 0);
        let death = Movie {
            diagrams: vec![one.clone(), empty.clone()],
            steps: vec![StepKind::Death {
                arc: 0,
                arc_map: arc_map.clone(),
            }],
        };
        // eps(x) = 1, eps(1) = 0, eps(1 + x) = 1
        let mut x = Chain::default();
        x.toggle(0, 1);
        let img = death.apply(&x.to_diagonal(|_| 1));
        assert_eq!(img.len(), 1, "x maps to the empty generator");
        let mut onev = Chain::default();
        onev.toggle(0, 0);
        assert!(death.apply(&onev.to_diagonal(|_| 1)).is_zero());
        let mut oneplusx = onev.clone();
        oneplusx.toggle(0, 1);
        assert_eq!(death.apply(&oneplusx.to_diagonal(|_| 1)).len(), 1);

        // birth then death is zero: eps(i(1)) = eps(1) = 0
        let birth = death.reversed();
        let unit = birth.apply(&crate::barnatan::EChain::singleton(0, 0));
        assert_eq!(unit.len(), 2, "1 = x + (1+x)");
        assert!(death.apply(&unit).is_zero());
    }

    #[test]
    fn saddle_then_death_counit_of_products() {
        // From the structure table: m(1+x, x) = x + x = 0, while
        // m(1+x, 1) = 1 + x survives the counit: eps(1+x) = 1.
        let movie = fuse_movie();
        let (after, arc_map) = death_surgery(&movie.diagrams[1], 0).unwrap();
        let death = Movie {
            diagrams: vec![movie.diagrams[1].clone(), after],
            steps: vec![StepKind::Death { arc: 0, arc_map }],
        };
        // (1+x) tensor x: terms 1x + xx (mask bit 1 = label x)
        let mut w = Chain::default();
        w.toggle(0, 0b10);
        w.toggle(0, 0b11);
        let fused = movie.apply(&w.to_diagonal(|_| 2));
        assert!(fused.is_zero(), "m(1+x, x) = 0 over F2");
        // (1+x) tensor 1: terms 11 + x1
        let mut v = Chain::default();
        v.toggle(0, 0b00);
        v.toggle(0, 0b01);
        let fused = movie.apply(&v.to_diagonal(|_| 2));
        assert_eq!(death.apply(&fused).len(), 1, "eps(m(1+x, 1)) = 1");
    }

    #[test]
    fn unknot_two_cable_movie_is_saddle_death() {
        let d = census("unknot").unwrap().diagram;
        let (c, cm) = crate::diagram::cable(&d, &[2]).unwrap();
        let movie = annulus_movie(&c, &cm, 0, 1).unwrap();
        assert_eq!(movie.steps.len(), 2);
        assert!(matches!(movie.steps[0], StepKind::LoopSaddle { .. }));
        assert!(matches!(movie.steps[1], StepKind::Death { .. }));
        assert_eq!(movie.target().n_components(), 0);
    }

    #[test]
    fn kink_two_cable_movie_counts() {
        let d = census("kink+1").unwrap().diagram;
        let (c, cm) = crate::diagram::cable(&d, &[2]).unwrap();
        assert_eq!(c.n_crossings(), 4);
        let movie = annulus_movie(&c, &cm, 0, 1).unwrap();
        let kinds: Vec<&str> = movie
            .steps
            .iter()
            .map(|s| match s {
                StepKind::Saddle { .. } => "saddle",
                StepKind::R2Remove(_) => "r2",
                StepKind::Death { .. } => "death",
                _ => "?",
            })
            .collect();
        assert_eq!(kinds, vec!["saddle", "r2", "r2", "death"]);
        assert_eq!(movie.target().n_crossings(), 0);
        assert_eq!(movie.target().n_components(), 0);
    }

    #[test]
    fn trefoil_two_cable_movie_has_six_r2() {
        let d = census("trefoil+").unwrap().diagram;
        let (c, cm) = crate::diagram::cable(&d, &[2]).unwrap();
        let movie = annulus_movie(&c, &cm, 0, 1).unwrap();
        let r2s = movie
            .steps
            .iter()
            .filter(|s| matches!(s, StepKind::R2Remove(_)))
            .count();
        assert_eq!(r2s, 6);
    }

    #[test]
    fn kink_movie_steps_are_chain_maps() {
        let d = census("kink+1").unwrap().diagram;
        let (c, cm) = crate::diagram::cable(&d, &[2]).unwrap();
        let movie = annulus_movie(&c, &cm, 0, 1).unwrap();
        for (i, step) in movie.steps.iter().enumerate() {
            let src = build_complex(&movie.diagrams[i]).unwrap();
            let dst = build_complex(&movie.diagrams[i + 1]).unwrap();
            let single = Movie {
                diagrams: vec![movie.diagrams[i].clone(), movie.diagrams[i + 1].clone()],
                steps: vec![clone_step(step)],
            };
            let mats = materialize_map(&src, &dst, |ch| single.apply(ch));
            assert!(
                verify_chain_map(&src, &dst, &mats),
                "step {i} is not a chain map"
            );
            // and so is the reverse
            let rev = single.reversed();
            let mats_rev = materialize_map(&dst, &src, |ch| rev.apply(ch));
            assert!(
                verify_chain_map(&dst, &src, &mats_rev),
                "reversed step {i} is not a chain map"
            );
        }
    }

    fn clone_step(s: &StepKind) -> StepKind {
        match s {
            StepKind::Saddle { arcs } => StepKind::Saddle { arcs: *arcs },
            StepKind::LoopSaddle { arcs } => StepKind::LoopSaddle { arcs: *arcs },
            StepKind::R2Remove(d) => StepKind::R2Remove(d.clone()),
            StepKind::R2Insert(d) => StepKind::R2Insert(d.clone()),
            StepKind::Death { arc, arc_map } => StepKind::Death {
                arc: *arc,
                arc_map: arc_map.clone(),
            },
            StepKind::Birth { arc, arc_map } => StepKind::Birth {
                arc: *arc,
                arc_map: arc_map.clone(),
            },
        }
    }

    #[test]
    fn lemma_rule_on_kink_two_cable() {
        // contracting the 2-cable sends opposite-orientation classes to the
        // generator and equal-orientation classes to zero
        for name in ["kink+1", "kink-1"] {
            let d = census(name).unwrap().diagram;
            let (c, cm) = crate::diagram::cable(&d, &[2]).unwrap();
            let am = AnnulusMap::build(&d, &c, &cm, 0, 1).unwrap();
            assert_eq!(am.target.n_components(), 0);
            for bits in 0..4u64 {
                let theta = Orientation::from_bits(2, bits);
                let (s, m) = canonical_element(&c, &theta).unwrap();
                let img = am.apply(&crate::barnatan::EChain::singleton(s, m));
                // strands are antiparallel in the reference orientation, so
                // equal reversal bits mean opposite actual directions
                let opposite = (bits & 1) == ((bits >> 1) & 1);
                if opposite {
                    assert_eq!(img.len(), 1, "{name} bits {bits:02b} maps to the generator");
                } else {
                    assert!(img.is_zero(), "{name} bits {bits:02b} maps to zero");
                }
            }
        }
    }

    #[test]
    fn r2_reduction_of_doubled_unknot() {
        let d = census("unknot-r2").unwrap().diagram;
        let (small, data) = r2_removal(&d, 0, 1, 2).unwrap();
        assert_eq!(small.n_crossings(), 0);
        assert_eq!(small.n_components(), 1);
        assert!(small.components[0].is_loop());
        // homology dims preserved
        let h_src = crate::barnatan::bn_homology(&d).unwrap();
        let h_dst = crate::barnatan::bn_homology(&small).unwrap();
        assert_eq!(h_src.dims, h_dst.dims);
        let movie = Movie {
            diagrams: vec![d.clone(), small.clone()],
            steps: vec![StepKind::R2Remove(data)],
        };
        // chain map, both ways
        let src = build_complex(&d).unwrap();
        let dst = build_complex(&small).unwrap();
        let mats = materialize_map(&src, &dst, |ch| movie.apply(ch));
        assert!(verify_chain_map(&src, &dst, &mats));
        let rev = movie.reversed();
        let mats_rev = materialize_map(&dst, &src, |ch| rev.apply(ch));
        assert!(verify_chain_map(&dst, &src, &mats_rev));
        // forward sends canonical cycles to the canonical cycles of the
        // reduced diagram for the compatible orientation
        for bits in 0..2u64 {
            let theta = Orientation::from_bits(1, bits);
            let (s, m) = canonical_element(&d, &theta).unwrap();
            let img = movie.apply(&crate::barnatan::EChain::singleton(s, m));
            let expected = canonical_cycle(&small, &theta)
                .unwrap()
                .to_diagonal(|st| crate::barnatan::cube::StateCircles::trace(&small, st).n);
            assert_eq!(img, expected, "bits {bits}");
        }
        // backward then forward is the identity on homology
        for bits in 0..2u64 {
            let theta = Orientation::from_bits(1, bits);
            let (s, m) = canonical_element(&d, &theta).unwrap();
            let z = crate::barnatan::EChain::singleton(s, m);
            let round = rev.apply(&movie.apply(&z));
            let p = h_src.project_batch(&[round, z]).unwrap();
            assert_eq!(p[0], p[1], "round trip class for bits {bits}");
        }
    }

    #[test]
    fn eliminating_zero_entry_rejected() {
        // r2_removal on a non-bigon pair errors
        let d = census("trefoil+").unwrap().diagram;
        assert!(r2_removal(&d, 0, 1, 0).is_err());
    }
}
