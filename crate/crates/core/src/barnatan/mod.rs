//! Bar-Natan homology of diagrams from the cube of resolutions, over F2.
//!
//! The theory is built on the two-dimensional Frobenius algebra spanned by
//! `1, x` with `m(a,b) = x` unless both are `1`, `Delta(1) = 1x + x1 + 11`,
//! `Delta(x) = xx`, unit `1` and counit `eps(x) = 1`. Internally chains are
//! stored in the diagonal basis `{x, 1+x}` where both structure maps become
//! label-preserving; the public `Chain` type uses the `{1, x}` labelling.

pub mod cube;

use crate::diagram::{faces::resolve, Diagram, LinkingData};
use crate::f2::Solver;
use crate::par;
use crate::{Error, Result};
use cube::{components, reduce_component, Components, Cube};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

/// A cable-strand reorientation: which components are reversed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub reversed: Vec<bool>,
}

impl Orientation {
    pub fn from_bits(k: usize, bits: u64) -> Orientation {
        Orientation {
            reversed: (0..k).map(|i| (bits >> i) & 1 == 1).collect(),
        }
    }
    pub fn original(k: usize) -> Orientation {
        Orientation {
            reversed: vec![false; k],
        }
    }
    /// The reversal set E as 1-based component indices.
    pub fn e_set(&self) -> Vec<usize> {
        self.reversed
            .iter()
            .enumerate()
            .filter_map(|(i, &r)| r.then_some(i + 1))
            .collect()
    }
    pub fn bits(&self) -> u64 {
        self.reversed
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | ((r as u64) << i))
    }
}

/// F2 chain in the diagonal basis: mask bit = 1 means the circle carries
/// `1+x`, bit = 0 means `x`. Circles are ordered by minimal arc.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EChain {
    set: HashSet<(u64, u64)>,
}

impl EChain {
    pub fn new() -> EChain {
        EChain {
            set: HashSet::new(),
        }
    }
    pub fn singleton(state: u64, emask: u64) -> EChain {
        let mut c = EChain::new();
        c.toggle(state, emask);
        c
    }
    pub fn toggle(&mut self, state: u64, emask: u64) {
        if !self.set.insert((state, emask)) {
            self.set.remove(&(state, emask));
        }
    }
    pub fn add(&mut self, other: &EChain) {
        for &(s, m) in &other.set {
            self.toggle(s, m);
        }
    }
    pub fn is_zero(&self) -> bool {
        self.set.is_empty()
    }
    pub fn len(&self) -> usize {
        self.set.len()
    }
    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = &(u64, u64)> {
        self.set.iter()
    }

    /// Expand into the public `{1, x}` labelling (x-bit masks).
    pub fn to_public(&self, circles_of: impl Fn(u64) -> u8) -> Chain {
        let mut out = Chain::default();
        for &(s, m) in &self.set {
            let n = circles_of(s);
            let full = mask_full(n);
            // e0 circles contribute a fixed x; each e1 circle contributes 1 and x.
            let base = full & !m;
            let mut sub = 0u64;
            loop {
                out.toggle(s, base | sub);
                if sub == m {
                    break;
                }
                sub = (sub.wrapping_sub(m)) & m; // next subset of m
            }
        }
        out
    }
}

fn mask_full(n: u8) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// F2 chain in the `{1, x}` basis: mask bit = 1 means label x.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    set: BTreeSet<(u64, u64)>,
}

impl Chain {
    pub fn toggle(&mut self, state: u64, xmask: u64) {
        if !self.set.insert((state, xmask)) {
            self.set.remove(&(state, xmask));
        }
    }
    pub fn is_zero(&self) -> bool {
        self.set.is_empty()
    }
    pub fn len(&self) -> usize {
        self.set.len()
    }
    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = &(u64, u64)> {
        self.set.iter()
    }
    pub fn contains(&self, state: u64, xmask: u64) -> bool {
        self.set.contains(&(state, xmask))
    }

    pub fn to_diagonal(&self, circles_of: impl Fn(u64) -> u8) -> EChain {
        let mut out = EChain::new();
        for &(s, w) in &self.set {
            let n = circles_of(s);
            let full = mask_full(n);
            // label x = e0; label 1 = e0 + e1: sum over choices on 1-labelled circles
            let ones = full & !w;
            let mut sub = 0u64;
            loop {
                out.toggle(s, sub);
                if sub == ones {
                    break;
                }
                sub = (sub.wrapping_sub(ones)) & ones;
            }
        }
        out
    }
}

/// The state smoothing all theta-positive crossings to 0.
pub fn canonical_smoothing(d: &Diagram, theta: &Orientation) -> u64 {
    let mut state = 0u64;
    for c in 0..d.n_crossings() {
        if d.sign_with(c, &theta.reversed) < 0 {
            state |= 1u64 << c;
        }
    }
    state
}

/// The canonical cycle of an orientation, as a single diagonal-basis element.
/// Circles in Group 0 (counter-clockwise under theta at even nesting depth,
/// or clockwise at odd depth) carry `1+x`, the others `x`.
pub fn canonical_element(d: &Diagram, theta: &Orientation) -> Result<(u64, u64)> {
    let state = canonical_smoothing(d, theta);
    let r = resolve(d, state)?;
    let mut emask = 0u64;
    for (j, trace) in r.circles.iter().enumerate() {
        // Direction the trace runs relative to theta; the oriented smoothing
        // makes this consistent along the whole circle.
        let dart0 = trace[0];
        let aligned0 = dart0.fwd == !theta.reversed[d.arc_component[dart0.arc]];
        for dart in trace {
            let aligned = dart.fwd == !theta.reversed[d.arc_component[dart.arc]];
            if aligned != aligned0 {
                return Err(Error::Invalid(
                    "smoothing circles are not coherently oriented".into(),
                ));
            }
        }
        let ccw = if aligned0 { r.ccw[j] } else { !r.ccw[j] };
        let group0 = ccw == (r.depths[j] % 2 == 0);
        if group0 {
            emask |= 1u64 << j;
        }
    }
    Ok((state, emask))
}

/// Canonical cycle in the public basis.
pub fn canonical_cycle(d: &Diagram, theta: &Orientation) -> Result<Chain> {
    let (state, emask) = canonical_element(d, theta)?;
    Ok(EChain::singleton(state, emask)
        .to_public(|s| cube::StateCircles::trace(d, s).n))
}

/// Degree formula `2 sum_{l in E, m not in E} lk(L_l, L_m)`.
pub fn canonical_degree(e_set: &[usize], lk: &LinkingData) -> i64 {
    let k = lk.k();
    let in_e: Vec<bool> = {
        let mut v = vec![false; k];
        for &l in e_set {
            v[l - 1] = true;
        }
        v
    };
    let mut acc = 0i64;
    for l in 0..k {
        if !in_e[l] {
            continue;
        }
        for m in 0..k {
            if !in_e[m] {
                acc += lk.get(l, m);
            }
        }
    }
    2 * acc
}

#[derive(Clone, Debug)]
pub struct CanonicalClass {
    pub orientation: Orientation,
    pub state: u64,
    pub emask: u64,
    pub degree: i32,
}

/// Bar-Natan homology with the canonical classes as verified basis.
pub struct BnHomology {
    pub dims: BTreeMap<i32, usize>,
    pub total: usize,
    pub classes: Vec<CanonicalClass>,
    cube: Cube,
    comps: Components,
}

impl BnHomology {
    pub fn cube(&self) -> &Cube {
        &self.cube
    }

    pub fn class_chain(&self, idx: usize) -> EChain {
        EChain::singleton(self.classes[idx].state, self.classes[idx].emask)
    }

    /// Degrees at which each class sits, ordered like `classes`.
    pub fn class_degrees(&self) -> Vec<i32> {
        self.classes.iter().map(|c| c.degree).collect()
    }

    /// Express cycles as combinations of canonical classes (bitmask per
    /// chain over class indices).
    pub fn project_batch(&self, chains: &[EChain]) -> Result<Vec<u64>> {
        for ch in chains {
            if !self.cube.boundary_chain(ch).is_zero() {
                return Err(Error::NotACycle);
            }
        }
        // Components touched by the chains.
        let mut involved: BTreeSet<u32> = BTreeSet::new();
        for ch in chains {
            for &(s, m) in ch.iter() {
                let id = self.cube.element_id(s, m) as u32;
                involved.insert(self.comps.comp_of_element(id));
            }
        }
        let mut class_elem: HashMap<u32, usize> = HashMap::new();
        for (i, cl) in self.classes.iter().enumerate() {
            class_elem.insert(self.cube.element_id(cl.state, cl.emask) as u32, i);
        }
        let mut coords = vec![0u64; chains.len()];
        for comp in involved {
            let members = self.comps.members_of(comp);
            let red = reduce_component(&self.cube, members);
            // classes living in this component
            let mut local_classes: Vec<usize> = Vec::new();
            for &g in members {
                if let Some(&i) = class_elem.get(&g) {
                    local_classes.push(i);
                }
            }
            let n_surv = red.survivors.len();
            let surv_index: HashMap<u32, usize> = red
                .survivors
                .iter()
                .enumerate()
                .map(|(i, &s)| (s, i))
                .collect();
            let mut solver = Solver::new(n_surv.max(1));
            let to_vec = |p: &[u32]| -> Vec<u64> {
                let mut v = vec![0u64; n_surv.div_ceil(64).max(1)];
                for &s in p {
                    let i = surv_index[&s];
                    v[i / 64] |= 1 << (i % 64);
                }
                v
            };
            for &ci in &local_classes {
                let cl = &self.classes[ci];
                let g = self.cube.element_id(cl.state, cl.emask) as u32;
                let p = red.project(&[g]);
                if !solver.push(&to_vec(&p)) {
                    return Err(Error::Invalid(
                        "canonical classes are dependent in homology".into(),
                    ));
                }
            }
            for (w, ch) in chains.iter().enumerate() {
                let part: Vec<u32> = ch
                    .iter()
                    .filter_map(|&(s, m)| {
                        let id = self.cube.element_id(s, m) as u32;
                        (self.comps.comp_of_element(id) == comp).then_some(id)
                    })
                    .collect();
                if part.is_empty() {
                    continue;
                }
                let p = red.project(&part);
                let combo = solver
                    .solve(&to_vec(&p))
                    .ok_or_else(|| Error::Invalid("cycle outside canonical span".into()))?;
                for (bi, &ci) in local_classes.iter().enumerate() {
                    if (combo[bi / 64] >> (bi % 64)) & 1 == 1 {
                        coords[w] |= 1u64 << ci;
                    }
                }
            }
        }
        Ok(coords)
    }

    /// Cycle representative for a class (here the canonical cycle itself).
    pub fn representative(&self, idx: usize) -> EChain {
        self.class_chain(idx)
    }

    pub fn emit_json(&self) -> serde_json::Value {
        let degrees: BTreeMap<String, usize> = self
            .dims
            .iter()
            .map(|(d, n)| (d.to_string(), *n))
            .collect();
        serde_json::json!({
            "degrees": degrees,
            "total": self.total,
            "canonical_classes": self.classes.iter().map(|c| serde_json::json!({
                "E": c.orientation.e_set(),
                "degree": c.degree,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Full Bar-Natan homology of a diagram. Computes per-degree dimensions by
/// eliminating each component of the labelled-state graph, checks that the
/// canonical cycles are cycles and form a basis, and keeps the data needed
/// to project further cycles onto that basis.
pub fn bn_homology(d: &Diagram) -> Result<BnHomology> {
    let cube = Cube::build(d)?;
    let comps = components(&cube);
    let k = d.n_components();
    if k > 32 {
        return Err(Error::Invalid("too many components".into()));
    }

    // Canonical classes, ordered by reversal bitmask.
    let mut classes = Vec::with_capacity(1 << k);
    for bits in 0..(1u64 << k) {
        let theta = Orientation::from_bits(k, bits);
        let (state, emask) = canonical_element(d, &theta)?;
        let degree = cube.degree(state);
        if !cube.boundary(state, emask).is_zero() {
            return Err(Error::Invalid(format!(
                "canonical chain for E={:?} is not a cycle",
                theta.e_set()
            )));
        }
        classes.push(CanonicalClass {
            orientation: theta,
            state,
            emask,
            degree,
        });
    }

    // Per-component homology dimensions.
    let class_by_comp: HashMap<u32, Vec<usize>> = {
        let mut m: HashMap<u32, Vec<usize>> = HashMap::new();
        for (i, cl) in classes.iter().enumerate() {
            let id = cube.element_id(cl.state, cl.emask) as u32;
            m.entry(comps.comp_of_element(id)).or_default().push(i);
        }
        m
    };
    let comp_ids: Vec<u32> = (0..comps.n_components() as u32).collect();
    let per_comp: Vec<(BTreeMap<i32, usize>, bool)> = par::map_collect(comp_ids, |comp| {
        let members = comps.members_of(comp);
        let red = reduce_component(&cube, members);
        let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
        for &s in &red.survivors {
            let g = members[s as usize];
            let (state, _) = cube.element_of(g as u64);
            *dims.entry(cube.degree(state)).or_insert(0) += 1;
        }
        // classes in this component must project independently onto survivors
        let ok = match class_by_comp.get(&comp) {
            None => red.survivors.is_empty(),
            Some(cls) => {
                if cls.len() != red.survivors.len() {
                    false
                } else {
                    let surv_index: HashMap<u32, usize> = red
                        .survivors
                        .iter()
                        .enumerate()
                        .map(|(i, &s)| (s, i))
                        .collect();
                    let n_surv = red.survivors.len();
                    let mut solver = Solver::new(n_surv.max(1));
                    cls.iter().all(|&ci| {
                        let cl = &classes[ci];
                        let g = cube.element_id(cl.state, cl.emask) as u32;
                        let p = red.project(&[g]);
                        let mut v = vec![0u64; n_surv.div_ceil(64).max(1)];
                        for &s in &p {
                            let i = surv_index[&s];
                            v[i / 64] |= 1 << (i % 64);
                        }
                        solver.push(&v)
                    })
                }
            }
        };
        (dims, ok)
    });

    let mut dims: BTreeMap<i32, usize> = BTreeMap::new();
    for (cd, ok) in &per_comp {
        if !ok {
            return Err(Error::Invalid(
                "canonical classes do not form a homology basis".into(),
            ));
        }
        for (&deg, &n) in cd {
            *dims.entry(deg).or_insert(0) += n;
        }
    }
    let total: usize = dims.values().sum();
    // Per-degree counts must match the canonical classes.
    let mut class_dims: BTreeMap<i32, usize> = BTreeMap::new();
    for cl in &classes {
        *class_dims.entry(cl.degree).or_insert(0) += 1;
    }
    if class_dims != dims {
        return Err(Error::Invalid(format!(
            "homology dimensions {dims:?} do not match canonical degrees {class_dims:?}"
        )));
    }

    Ok(BnHomology {
        dims,
        total,
        classes,
        cube,
        comps,
    })
}

/// Materialized cube complex in the public `{1, x}` basis: states in integer
/// order, labellings lexicographic with 1 < x, circles by minimal arc.
pub struct PublicCube {
    pub complex: crate::f2::Complex,
    pub cube: Cube,
    /// (degree index, position) of each element id.
    index: Vec<(usize, usize)>,
    pub dims_by_degree: BTreeMap<i32, usize>,
}

impl PublicCube {
    /// Index of a `{1, x}` basis vector inside its degree.
    pub fn position(&self, state: u64, xmask: u64) -> (usize, usize) {
        let n = self.cube.circles[state as usize].n;
        // lexicographic with circle 0 most significant
        let mut lex = 0u64;
        for j in 0..n {
            if (xmask >> j) & 1 == 1 {
                lex |= 1 << (n - 1 - j);
            }
        }
        self.index[(self.cube.offsets[state as usize] + lex) as usize]
    }

    pub fn chain_vector(&self, ch: &Chain, degree_index: usize) -> Vec<u64> {
        let dim = self.complex.dims[degree_index];
        let mut v = vec![0u64; dim.div_ceil(64).max(1)];
        for &(s, w) in ch.iter() {
            let (di, pos) = self.position(s, w);
            assert_eq!(di, degree_index, "chain is not homogeneous");
            v[pos / 64] ^= 1 << (pos % 64);
        }
        v
    }
}

/// Size limit for materialized complexes (dense matrices).
const MATERIALIZE_LIMIT: u64 = 1 << 17;

pub fn build_complex(d: &Diagram) -> Result<PublicCube> {
    let cube = Cube::build(d)?;
    if cube.total_elements > MATERIALIZE_LIMIT {
        return Err(Error::SizeGuard {
            crossings: d.n_crossings(),
            limit: d.n_crossings(),
        });
    }
    let c = d.n_crossings();
    let min_deg = -(cube.n_minus as i32);
    let max_deg = c as i32 - cube.n_minus as i32;
    let n_degrees = (max_deg - min_deg + 1) as usize;
    let mut dims = vec![0usize; n_degrees];
    let mut index = vec![(0usize, 0usize); cube.total_elements as usize];
    for s in 0..(1u64 << c) {
        let deg_i = (cube.degree(s) - min_deg) as usize;
        let n = cube.circles[s as usize].n;
        for lex in 0..(1u64 << n) {
            index[(cube.offsets[s as usize] + lex) as usize] = (deg_i, dims[deg_i]);
            dims[deg_i] += 1;
        }
    }
    let mut mats: Vec<crate::f2::F2Matrix> = (0..n_degrees - 1)
        .map(|i| crate::f2::F2Matrix::zero(dims[i + 1], dims[i]))
        .collect();
    let lex_of = |cube: &Cube, s: u64, xmask: u64| -> u64 {
        let n = cube.circles[s as usize].n;
        let mut lex = 0u64;
        for j in 0..n {
            if (xmask >> j) & 1 == 1 {
                lex |= 1 << (n - 1 - j);
            }
        }
        lex
    };
    for s in 0..(1u64 << c) {
        let deg_i = (cube.degree(s) - min_deg) as usize;
        let sc = &cube.circles[s as usize];
        for xmask in 0..(1u64 << sc.n) {
            let col = index[(cube.offsets[s as usize] + lex_of(&cube, s, xmask)) as usize].1;
            for cr in 0..c {
                if (s >> cr) & 1 == 1 {
                    continue;
                }
                let s2 = s | (1u64 << cr);
                let sc2 = &cube.circles[s2 as usize];
                // circles at the crossing
                let slots = &d.crossings[cr].slots;
                let c0 = sc.arc_circle[slots[0].arc];
                let mut c1 = c0;
                for sl in &slots[1..] {
                    if sc.arc_circle[sl.arc] != c0 {
                        c1 = sc.arc_circle[sl.arc];
                        break;
                    }
                }
                let transfer = |target_label_of_merged: &[u64]| -> Vec<u64> {
                    // build target masks: every target circle inherits the
                    // label of the source circle through its minimal arc;
                    // merged/split circles take the supplied labels.
                    let mut outs = Vec::new();
                    for &special in target_label_of_merged {
                        let mut m2 = 0u64;
                        let mut seen = 0u64;
                        for (arc, &cj) in sc2.arc_circle.iter().enumerate() {
                            let bit = 1u64 << cj;
                            if seen & bit != 0 {
                                continue;
                            }
                            seen |= bit;
                            let src_circle = sc.arc_circle[arc];
                            let was_involved = src_circle == c0 || src_circle == c1;
                            let lab = if was_involved {
                                (special >> cj) & 1
                            } else {
                                (xmask >> src_circle) & 1
                            };
                            if lab == 1 {
                                m2 |= bit;
                            }
                        }
                        outs.push(m2);
                    }
                    outs
                };
                let targets: Vec<u64> = if c1 != c0 {
                    // merge: m(1,1)=1 else x
                    let a = (xmask >> c0) & 1;
                    let b = (xmask >> c1) & 1;
                    let merged = a | b; // 1 means x
                    transfer(&[if merged == 1 { u64::MAX } else { 0 }])
                } else {
                    // split: Delta(x) = xx ; Delta(1) = 1x + x1 + 11
                    let a = (xmask >> c0) & 1;
                    if a == 1 {
                        transfer(&[u64::MAX])
                    } else {
                        // the two child circles of the split, as bits in s2
                        let mut child_bits = Vec::new();
                        let mut seen = 0u64;
                        for (arc, &cj) in sc2.arc_circle.iter().enumerate() {
                            if sc.arc_circle[arc] == c0 && seen & (1 << cj) == 0 {
                                seen |= 1 << cj;
                                child_bits.push(cj);
                            }
                        }
                        assert_eq!(child_bits.len(), 2, "split produces two circles");
                        let (p, q) = (child_bits[0], child_bits[1]);
                        transfer(&[1u64 << p, 1u64 << q, 0])
                    }
                };
                for m2 in targets {
                    let row =
                        index[(cube.offsets[s2 as usize] + lex_of(&cube, s2, m2)) as usize].1;
                    mats[deg_i].flip(row, col);
                }
            }
        }
    }
    let complex = crate::f2::Complex::new(min_deg, dims.clone(), mats)?;
    let dims_by_degree = dims
        .iter()
        .enumerate()
        .map(|(i, &n)| (min_deg + i as i32, n))
        .collect();
    Ok(PublicCube {
        complex,
        cube,
        index,
        dims_by_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::census;

    fn bn(name: &str) -> BnHomology {
        bn_homology(&census(name).unwrap().diagram).unwrap()
    }

    #[test]
    fn unknot_homology() {
        let h = bn("unknot");
        assert_eq!(h.total, 2);
        assert_eq!(h.dims.get(&0), Some(&2));
        // canonical cycle of the ccw orientation is 1 + x on a Group 0 circle
        let ch = canonical_cycle(
            &census("unknot").unwrap().diagram,
            &Orientation::original(1),
        )
        .unwrap();
        assert_eq!(ch.len(), 2);
        assert!(ch.contains(0, 0) && ch.contains(0, 1));
    }

    #[test]
    fn kink_complex_dims_and_homology() {
        let d = census("kink+1").unwrap().diagram;
        let p = build_complex(&d).unwrap();
        // oriented (0-)smoothing of the positive kink has two circles
        assert_eq!(p.dims_by_degree.get(&0), Some(&4));
        assert_eq!(p.dims_by_degree.get(&1), Some(&2));
        assert_eq!(p.complex.homology_dims(), vec![2, 0]);
        let h = bn("kink+1");
        assert_eq!(h.total, 2);
        assert_eq!(h.dims.get(&0), Some(&2));
    }

    #[test]
    fn figure_eight_total_two() {
        let h = bn("fig8");
        assert_eq!(h.total, 2);
        assert_eq!(h.dims.get(&0), Some(&2), "both classes in degree 0");
    }

    #[test]
    fn hopf_degrees() {
        let h = bn("hopf+");
        assert_eq!(h.total, 4);
        assert_eq!(h.dims.get(&0), Some(&2));
        assert_eq!(h.dims.get(&2), Some(&2));
        // degree formula: E = {1} gives 2*lk = 2
        let lk = census("hopf+").unwrap().diagram.linking_data();
        assert_eq!(canonical_degree(&[1], &lk), 2);
        assert_eq!(canonical_degree(&[], &lk), 0);
        assert_eq!(canonical_degree(&[1, 2], &lk), 0);
    }

    #[test]
    fn canonical_smoothing_examples() {
        let d = census("hopf+").unwrap().diagram;
        // reversing component 2 turns both crossings negative
        let s = canonical_smoothing(&d, &Orientation::from_bits(2, 0b10));
        assert_eq!(s, 0b11);
        // global reversal preserves signs
        let t = census("trefoil+").unwrap().diagram;
        assert_eq!(
            canonical_smoothing(&t, &Orientation::from_bits(1, 1)),
            canonical_smoothing(&t, &Orientation::original(1))
        );
        // original orientation marks negative crossings
        let f = census("fig8").unwrap().diagram;
        let s = canonical_smoothing(&f, &Orientation::original(1));
        for c in 0..4 {
            assert_eq!((s >> c) & 1 == 1, f.sign(c) < 0);
        }
    }

    #[test]
    fn homology_engines_agree() {
        for name in ["kink+1", "kink-2", "hopf+", "hopf-", "trefoil+", "fig8", "unknot-r2"] {
            let d = census(name).unwrap().diagram;
            let p = build_complex(&d).unwrap();
            let dense = p.complex.homology_dims();
            let h = bn_homology(&d).unwrap();
            let min = p.complex.min_degree;
            for (i, &dim) in dense.iter().enumerate() {
                let deg = min + i as i32;
                assert_eq!(
                    h.dims.get(&deg).copied().unwrap_or(0),
                    dim,
                    "{name} degree {deg}"
                );
            }
        }
    }

    #[test]
    fn projection_of_classes_is_identity() {
        let d = census("hopf+").unwrap().diagram;
        let h = bn_homology(&d).unwrap();
        let chains: Vec<EChain> = (0..4).map(|i| h.class_chain(i)).collect();
        let coords = h.project_batch(&chains).unwrap();
        for (i, &c) in coords.iter().enumerate() {
            assert_eq!(c, 1 << i);
        }
        // a boundary projects to zero
        let b = h.cube().boundary(0, 0);
        if !b.is_zero() {
            let z = h.project_batch(&[b]).unwrap();
            assert_eq!(z[0], 0);
        }
    }

    #[test]
    fn trefoil_two_cable_total_four() {
        let d = census("trefoil+").unwrap().diagram;
        let (c2, _) = crate::diagram::cable(&d, &[2]).unwrap();
        let h = bn_homology(&c2).unwrap();
        assert_eq!(h.total, 4);
    }

    #[test]
    fn complex_invariant_under_relabelling() {
        // same diagram with a rotated arc numbering: equal homology
        let d = census("trefoil+").unwrap().diagram;
        let mut comps = d.components.clone();
        comps[0].arcs.rotate_left(2);
        let d2 = Diagram::new(
            d.crossings.clone(),
            d.arc_component.clone(),
            comps,
            d.outer,
        )
        .unwrap();
        assert_eq!(
            bn_homology(&d).unwrap().dims,
            bn_homology(&d2).unwrap().dims
        );
    }

    #[test]
    fn empty_diagram() {
        let h = bn_homology(&Diagram::empty()).unwrap();
        assert_eq!(h.total, 1);
        assert_eq!(h.classes.len(), 1);
    }
}
