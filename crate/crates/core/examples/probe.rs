use cbn_core::barnatan::{canonical_smoothing, Orientation};
use cbn_core::cobordism::{annulus_movie, r2_removal};
use cbn_core::diagram::faces::resolve;
use cbn_core::diagram::{cable, census};

fn main() {
    let d = census("kink+1").unwrap().diagram;
    let (c, cm) = cable(&d, &[2]).unwrap();
    println!("cable outer: {:?}", c.outer);
    // build movie steps manually to see intermediates
    let s1 = cbn_core::cobordism::saddle_surgery(&c, cm.base_copy[0][0], cm.base_copy[0][1]).unwrap();
    println!("after saddle: {} crossings, outer {:?}", s1.n_crossings(), s1.outer);
    let tip = cm.base_copy[0][1];
    let e = s1.ends(tip);
    let (x, y) = (e.head.unwrap().0, e.tail.unwrap().0);
    let (s2, data) = r2_removal(&s1, x, y, tip).unwrap();
    println!("after r2: {} crossings, outer {:?}", s2.n_crossings(), s2.outer);
    let tip2 = data.arc_map[tip];
    // the failing rotation computation happens at the next r2
    let theta = Orientation::original(s2.n_components());
    let st = canonical_smoothing(&s2, &theta);
    let r = resolve(&s2, st).unwrap();
    println!("oriented state {st:b}, circles:");
    for (j, tr) in r.circles.iter().enumerate() {
        println!(
            "  {j}: {:?} depth {} ccw {} fwd0 {}",
            tr.iter().map(|dd| dd.arc).collect::<Vec<_>>(),
            r.depths[j],
            r.ccw[j],
            tr[0].fwd
        );
    }
    println!("faces of s2: n = {}", s2.face_data().n_faces);
    println!("tip2 = {tip2}, arcs {}", s2.n_arcs());
    for a in 0..s2.n_arcs() {
        println!("arc {a}: ends {:?}", s2.ends(a));
    }
}
