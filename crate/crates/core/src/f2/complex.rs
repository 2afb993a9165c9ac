//! Graded F2 chain complexes of dense matrices, homology with tracked
//! representatives, induced maps, and Gaussian elimination of complexes.

use super::matrix::{F2Matrix, Solver};
use crate::Error;

/// A cochain complex: `d[i]: C_i -> C_{i+1}` with `dims[i] = dim C_i`.
/// Degrees are `min_degree + i`.
#[derive(Clone, Debug)]
pub struct Complex {
    pub min_degree: i32,
    pub dims: Vec<usize>,
    pub d: Vec<F2Matrix>,
}

impl Complex {
    pub fn new(min_degree: i32, dims: Vec<usize>, d: Vec<F2Matrix>) -> Result<Self, Error> {
        assert_eq!(d.len() + 1, dims.len().max(1));
        for (i, m) in d.iter().enumerate() {
            assert_eq!(m.cols(), dims[i]);
            assert_eq!(m.rows(), dims[i + 1]);
        }
        let c = Complex { min_degree, dims, d };
        for i in 0..c.d.len().saturating_sub(1) {
            if !c.d[i + 1].mul(&c.d[i]).is_zero() {
                return Err(Error::NotAComplex);
            }
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn diff_out(&self, i: usize) -> Option<&F2Matrix> {
        self.d.get(i)
    }

    pub fn diff_in(&self, i: usize) -> Option<&F2Matrix> {
        if i == 0 {
            None
        } else {
            self.d.get(i - 1)
        }
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        (0..self.len())
            .map(|i| {
                let r_out = self.d.get(i).map_or(0, |m| m.rank());
                let r_in = if i == 0 { 0 } else { self.d[i - 1].rank() };
                self.dims[i] - r_out - r_in
            })
            .collect()
    }

    /// Alternating sum of space dimensions (equals that of homology dims).
    pub fn euler_characteristic(&self) -> i64 {
        let mut acc = 0i64;
        for (i, &n) in self.dims.iter().enumerate() {
            let deg = self.min_degree + i as i32;
            if deg.rem_euclid(2) == 0 {
                acc += n as i64;
            } else {
                acc -= n as i64;
            }
        }
        acc
    }
}

/// Homology of one degree with representatives and projection data.
pub struct HomologyData {
    pub dim: usize,
    /// Cycle representatives, as bit-vectors in the chain basis.
    pub representatives: Vec<Vec<u64>>,
    solver: Solver,
    n_boundaries: usize,
    space_dim: usize,
    d_out: Option<F2Matrix>,
}

impl HomologyData {
    /// Project a cycle to coordinates in the representative basis.
    pub fn project(&self, cycle: &[u64]) -> Result<Vec<u64>, Error> {
        if let Some(d) = &self.d_out {
            if d.apply(cycle).iter().any(|&w| w != 0) {
                return Err(Error::NotACycle);
            }
        }
        let combo = self.solver.solve(cycle).ok_or(Error::NotACycle)?;
        let mut out = vec![0u64; self.dim.div_ceil(64).max(1)];
        for i in 0..self.dim {
            let idx = self.n_boundaries + i;
            if (combo[idx / 64] >> (idx % 64)) & 1 == 1 {
                out[i / 64] |= 1 << (i % 64);
            }
        }
        Ok(out)
    }

    pub fn space_dim(&self) -> usize {
        self.space_dim
    }
}

/// Homology at the middle of `d_in: A -> B`, `d_out: B -> C`.
pub fn homology_at(d_out: &F2Matrix, d_in: &F2Matrix) -> Result<HomologyData, Error> {
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::NotAComplex);
    }
    homology_with(Some(d_out), Some(d_in), d_in.rows())
}

pub(crate) fn homology_with(
    d_out: Option<&F2Matrix>,
    d_in: Option<&F2Matrix>,
    dim: usize,
) -> Result<HomologyData, Error> {
    let mut solver = Solver::new(dim);
    let mut n_boundaries = 0;
    if let Some(din) = d_in {
        assert_eq!(din.rows(), dim);
        for c in 0..din.cols() {
            if solver.push(&din.column(c)) {
                n_boundaries += 1;
            }
        }
    }
    // Drop dependent boundary columns: rebuild solver with independent ones only,
    // so representative coordinates are well defined.
    let mut clean = Solver::new(dim);
    if let Some(din) = d_in {
        for c in 0..din.cols() {
            let col = din.column(c);
            if clean.rank() < n_boundaries {
                clean.push(&col);
            }
        }
    }
    let mut solver = clean;
    debug_assert_eq!(solver.rank(), n_boundaries);

    let kernel: Vec<Vec<u64>> = match d_out {
        Some(dout) => {
            assert_eq!(dout.cols(), dim);
            dout.kernel_basis()
        }
        None => (0..dim)
            .map(|i| {
                let mut v = vec![0u64; dim.div_ceil(64).max(1)];
                v[i / 64] |= 1 << (i % 64);
                v
            })
            .collect(),
    };
    let mut representatives = Vec::new();
    for k in kernel {
        if solver.push(&k) {
            representatives.push(k);
        }
    }
    Ok(HomologyData {
        dim: representatives.len(),
        representatives,
        solver,
        n_boundaries,
        space_dim: dim,
        d_out: d_out.cloned(),
    })
}

/// Matrix of the map induced on homology by a chain map `f` in one degree.
pub fn induced_map(
    f: &F2Matrix,
    src: &HomologyData,
    dst: &HomologyData,
) -> Result<F2Matrix, Error> {
    let mut out = F2Matrix::zero(dst.dim, src.dim);
    for (i, rep) in src.representatives.iter().enumerate() {
        let img = f.apply(rep);
        let coords = dst.project(&img).map_err(|_| Error::NotAChainMap)?;
        for j in 0..dst.dim {
            if (coords[j / 64] >> (j % 64)) & 1 == 1 {
                out.set(j, i, true);
            }
        }
    }
    Ok(out)
}

/// A chain map between complexes, one matrix per degree of the source.
#[derive(Clone, Debug)]
pub struct ComplexMap {
    pub maps: Vec<F2Matrix>,
}

impl ComplexMap {
    pub fn identity(c: &Complex) -> Self {
        ComplexMap {
            maps: c.dims.iter().map(|&n| F2Matrix::identity(n)).collect(),
        }
    }

    pub fn compose(&self, inner: &ComplexMap) -> ComplexMap {
        ComplexMap {
            maps: self
                .maps
                .iter()
                .zip(inner.maps.iter())
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn verify_chain_map(&self, src: &Complex, dst: &Complex) -> bool {
        for i in 0..src.d.len() {
            let lhs = dst.d[i].mul(&self.maps[i]);
            let rhs = self.maps[i + 1].mul(&src.d[i]);
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

/// Cancel the basis pair `(row of degree i+1, col of degree i)` where the
/// differential entry is 1. Returns the smaller complex together with the
/// forward (projection) and backward (inclusion) chain maps.
pub fn eliminate_entry(
    c: &Complex,
    degree_index: usize,
    row: usize,
    col: usize,
) -> Result<(Complex, ComplexMap, ComplexMap), Error> {
    let d = &c.d[degree_index];
    if !d.get(row, col) {
        return Err(Error::ZeroPivot);
    }
    let n_i = c.dims[degree_index];
    let n_j = c.dims[degree_index + 1];

    let keep = |n: usize, skip: usize| -> Vec<usize> { (0..n).filter(|&k| k != skip).collect() };
    let keep_i = keep(n_i, col);
    let keep_j = keep(n_j, row);

    // delta = d(col) with the `row` component removed.
    let mut delta = d.column(col);
    delta[row / 64] &= !(1 << (row % 64));

    let mut dims = c.dims.clone();
    dims[degree_index] -= 1;
    dims[degree_index + 1] -= 1;

    let mut new_d = Vec::with_capacity(c.d.len());
    for (k, m) in c.d.iter().enumerate() {
        let new_m = if k == degree_index {
            let mut nm = F2Matrix::zero(dims[k + 1], dims[k]);
            for (cj, &oc) in keep_i.iter().enumerate() {
                let mut colv = m.column(oc);
                if (colv[row / 64] >> (row % 64)) & 1 == 1 {
                    for (dw, sw) in colv.iter_mut().zip(delta.iter()) {
                        *dw ^= sw;
                    }
                    colv[row / 64] &= !(1 << (row % 64));
                }
                for (rj, &orow) in keep_j.iter().enumerate() {
                    if (colv[orow / 64] >> (orow % 64)) & 1 == 1 {
                        nm.set(rj, cj, true);
                    }
                }
            }
            nm
        } else if k + 1 == degree_index {
            // Drop the `col` row of the incoming differential.
            let mut nm = F2Matrix::zero(dims[k + 1], dims[k]);
            for cj in 0..c.dims[k] {
                for (rj, &orow) in keep_i.iter().enumerate() {
                    if m.get(orow, cj) {
                        nm.set(rj, cj, true);
                    }
                }
            }
            nm
        } else if k == degree_index + 1 {
            // Drop the `row` column of the outgoing differential.
            let mut nm = F2Matrix::zero(dims[k + 1], dims[k]);
            for (cj, &oc) in keep_j.iter().enumerate() {
                for rj in 0..c.dims[k + 2] {
                    if m.get(rj, oc) {
                        nm.set(rj, cj, true);
                    }
                }
            }
            nm
        } else {
            m.clone()
        };
        new_d.push(new_m);
    }

    // Forward map p: identity off the affected degrees; at degree i drop `col`;
    // at degree i+1: y |-> y|keep + <y,row>*delta|keep.
    let mut fwd = Vec::with_capacity(c.dims.len());
    let mut bwd = Vec::with_capacity(c.dims.len());
    for k in 0..c.dims.len() {
        if k == degree_index {
            let mut p = F2Matrix::zero(dims[k], c.dims[k]);
            for (nj, &oc) in keep_i.iter().enumerate() {
                p.set(nj, oc, true);
            }
            fwd.push(p);
            // iota at degree i: x |-> x + <d x, row> * col
            let mut inc = F2Matrix::zero(c.dims[k], dims[k]);
            for (nj, &oc) in keep_i.iter().enumerate() {
                inc.set(oc, nj, true);
                if d.get(row, oc) {
                    inc.flip(col, nj);
                }
            }
            bwd.push(inc);
        } else if k == degree_index + 1 {
            let mut p = F2Matrix::zero(dims[k], c.dims[k]);
            for (nj, &orow) in keep_j.iter().enumerate() {
                p.set(nj, orow, true);
                // contribution of the dropped basis vector via delta
                if (delta[orow / 64] >> (orow % 64)) & 1 == 1 {
                    p.flip(nj, row);
                }
            }
            fwd.push(p);
            let mut inc = F2Matrix::zero(c.dims[k], dims[k]);
            for (nj, &orow) in keep_j.iter().enumerate() {
                inc.set(orow, nj, true);
            }
            bwd.push(inc);
        } else {
            fwd.push(F2Matrix::identity(c.dims[k]));
            bwd.push(F2Matrix::identity(c.dims[k]));
        }
    }

    let reduced = Complex {
        min_degree: c.min_degree,
        dims,
        d: new_d,
    };
    debug_assert!(reduced
        .d
        .windows(2)
        .all(|w| w[1].mul(&w[0]).is_zero()));
    Ok((
        reduced,
        ComplexMap { maps: fwd },
        ComplexMap { maps: bwd },
    ))
}

/// Eliminate until the differential vanishes; returns the reduced complex
/// (whose dims are the homology dims) and the tracked maps.
pub fn reduce_fully(c: &Complex) -> (Complex, ComplexMap, ComplexMap) {
    let mut cur = c.clone();
    let mut fwd = ComplexMap::identity(c);
    let mut bwd = ComplexMap::identity(c);
    loop {
        let mut found = None;
        'outer: for k in 0..cur.d.len() {
            for col in 0..cur.dims[k] {
                for row in 0..cur.dims[k + 1] {
                    if cur.d[k].get(row, col) {
                        found = Some((k, row, col));
                        break 'outer;
                    }
                }
            }
        }
        let Some((k, row, col)) = found else { break };
        let (next, p, i) = eliminate_entry(&cur, k, row, col).expect("pivot is set");
        fwd = p.compose(&fwd);
        bwd = bwd.compose(&i);
        cur = next;
    }
    (cur, fwd, bwd)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> Complex {
        // 0 -> F2^2 -> F2^2 -> 0 with d = [[1,1],[1,1]]
        Complex::new(
            0,
            vec![2, 2],
            vec![F2Matrix::from_rows(2, 2, &[&[1, 1], &[1, 1]])],
        )
        .unwrap()
    }

    #[test]
    fn homology_at_examples() {
        // d_out = 0 (1 x n), d_in = 0 -> dimension n
        let h = homology_at(&F2Matrix::zero(1, 3), &F2Matrix::zero(3, 1)).unwrap();
        assert_eq!(h.dim, 3);
        let h = homology_at(&F2Matrix::identity(3), &F2Matrix::zero(3, 1)).unwrap();
        assert_eq!(h.dim, 0);
        // middle homology of the [[1,1],[1,1]] complex
        let c = two_by_two();
        assert_eq!(c.homology_dims(), vec![1, 1]);
    }

    #[test]
    fn not_a_complex_detected() {
        let err = homology_at(&F2Matrix::identity(2), &F2Matrix::identity(2));
        assert!(matches!(err, Err(Error::NotAComplex)));
    }

    #[test]
    fn projection_of_boundary_is_zero() {
        let c = two_by_two();
        let h = homology_at(&c.d[0], &F2Matrix::zero(2, 0)).unwrap();
        assert_eq!(h.dim, 1);
        let boundary = [0u64; 1];
        let z = h.project(&boundary).unwrap();
        assert!(z.iter().all(|&w| w == 0));
        // representative projects to the unit vector
        let p = h.project(&h.representatives[0]).unwrap();
        assert_eq!(p[0] & 1, 1);
    }

    #[test]
    fn induced_map_identity_and_zero() {
        let c = two_by_two();
        let h0 = homology_at(&c.d[0], &F2Matrix::zero(2, 0)).unwrap();
        let id = induced_map(&F2Matrix::identity(2), &h0, &h0).unwrap();
        assert_eq!(id, F2Matrix::identity(1));
        let z = induced_map(&F2Matrix::zero(2, 2), &h0, &h0).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn eliminate_acyclic_pair() {
        // 0 -> F2 -> F2 -> 0 with d = 1
        let c = Complex::new(0, vec![1, 1], vec![F2Matrix::identity(1)]).unwrap();
        let (r, _, _) = eliminate_entry(&c, 0, 0, 0).unwrap();
        assert_eq!(r.dims, vec![0, 0]);
        // eliminating a zero entry is an error
        let z = Complex::new(0, vec![1, 1], vec![F2Matrix::zero(1, 1)]).unwrap();
        assert!(matches!(
            eliminate_entry(&z, 0, 0, 0),
            Err(Error::ZeroPivot)
        ));
    }

    #[test]
    fn reduce_preserves_homology() {
        let c = two_by_two();
        let (r, fwd, bwd) = reduce_fully(&c);
        assert_eq!(r.dims, c.homology_dims());
        assert!(fwd.verify_chain_map(&c, &r));
        assert!(bwd.verify_chain_map(&r, &c));
    }
}
