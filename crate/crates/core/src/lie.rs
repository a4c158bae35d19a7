//! Numerical closure of the Lie algebra generated by few-body symmetric
//! couplings.
//!
//! Skew-Hermitian rotationally symmetric operators form a real Lie algebra
//! of dimension Catalan(n); the subalgebra reachable with couplings on at
//! most k sites misses exactly the high grades of the invariant basis. The
//! closure here is bare iterated commutators with orthogonal projection,
//! kept deterministic so dimensions are run-to-run identical.

use crate::cl_basis::max_body_label;
use crate::error::{Error, Result};
use crate::operator::{CMat, Operator};
use crate::sectors::{catalan, symmetry_residual};
use ndarray::{Array1, Array2, ArrayView2};
use num_complex::Complex64;

pub const MAX_CLOSURE_QUBITS: usize = 8;

/// Orthonormal basis of a real Lie algebra of skew-Hermitian symmetric
/// operators, stored flat for fast projection.
pub struct LieBasis {
    n: usize,
    /// Coupling locality the generators came from, when known.
    pub k: Option<usize>,
    /// Row-major flattened elements, stored conjugated: row b holds
    /// conj(E_b), which turns inner products against candidates into plain
    /// matrix products.
    conj_flat: Vec<Complex64>,
    pub rounds: usize,
    pub converged: bool,
}

impl LieBasis {
    fn empty(n: usize) -> Self {
        LieBasis {
            n,
            k: None,
            conj_flat: Vec::new(),
            rounds: 0,
            converged: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        let d2 = 1usize << (2 * self.n);
        self.conj_flat.len() / d2
    }

    pub fn element(&self, idx: usize) -> Operator {
        let d = 1usize << self.n;
        let row = &self.conj_flat[idx * d * d..(idx + 1) * d * d];
        let data = CMat::from_shape_vec((d, d), row.iter().map(|z| z.conj()).collect())
            .expect("row shape");
        Operator::new(self.n, data).expect("stored element")
    }

    fn rows(&self) -> ArrayView2<'_, Complex64> {
        let d2 = 1usize << (2 * self.n);
        ArrayView2::from_shape((self.dimension(), d2), &self.conj_flat).expect("flat shape")
    }

    /// Removes the basis span from x in place (two passes) and returns the
    /// remaining norm. Real-linear: only real combination coefficients.
    fn project_out(&self, x: &mut Array1<Complex64>) -> f64 {
        for _ in 0..2 {
            if self.dimension() == 0 {
                break;
            }
            let rows = self.rows();
            // rows hold conj(E_b), so rows.dot(x) gives <E_b, x> directly.
            let overlaps = rows.dot(&x.view());
            let coeffs = overlaps.mapv(|z| Complex64::new(z.re, 0.0));
            let correction = rows.t().dot(&coeffs);
            // correction = sum_b c_b conj(E_b); subtract its conjugate.
            for (xi, ci) in x.iter_mut().zip(correction.iter()) {
                *xi -= ci.conj();
            }
        }
        x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Projects every row of the batch off the current span (two passes).
    /// Rows are independent candidates; in-batch dependencies are resolved
    /// later, at acceptance time.
    fn project_batch(&self, batch: &mut Array2<Complex64>) {
        if self.dimension() == 0 {
            return;
        }
        for _ in 0..2 {
            let rows = self.rows();
            let overlaps = batch.dot(&rows.t());
            let coeffs = overlaps.mapv(|z| Complex64::new(z.re, 0.0));
            let correction = coeffs.dot(&rows);
            for (xi, ci) in batch.iter_mut().zip(correction.iter()) {
                *xi -= ci.conj();
            }
        }
    }

    fn push_conj_of(&mut self, x: &Array1<Complex64>) {
        self.conj_flat.extend(x.iter().map(|z| z.conj()));
    }

    /// Accepts batch rows (assumed pre-normalized) in order, keeping those
    /// whose residual after projection exceeds tol. Returns how many were
    /// kept. Stops early once the dimension reaches cap.
    fn accept_batch(&mut self, mut batch: Array2<Complex64>, tol: f64, cap: usize) -> usize {
        self.project_batch(&mut batch);
        let mut kept = 0usize;
        let mut fresh: Vec<Array1<Complex64>> = Vec::new();
        for row in batch.rows() {
            if self.dimension() >= cap {
                break;
            }
            let mut v = row.to_owned();
            // Settle against rows accepted earlier in this same batch.
            for _ in 0..2 {
                for f in &fresh {
                    let mut overlap = 0.0_f64;
                    for (a, b) in f.iter().zip(v.iter()) {
                        overlap += (a.conj() * b).re;
                    }
                    for (vi, fi) in v.iter_mut().zip(f.iter()) {
                        *vi -= Complex64::new(overlap, 0.0) * fi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > tol {
                v.mapv_inplace(|z| z / norm);
                self.push_conj_of(&v);
                fresh.push(v);
                kept += 1;
            }
        }
        kept
    }
}

fn flatten(op: &Operator) -> Array1<Complex64> {
    Array1::from_iter(op.matrix().iter().copied())
}

fn skew_residual(a: &Operator) -> f64 {
    a.add(&a.adjoint()).max_abs()
}

fn require_closure_input(a: &Operator) -> Result<()> {
    let scale = a.max_abs().max(1.0);
    let skew = skew_residual(a);
    if skew >= 1e-8 * scale {
        return Err(Error::NotSkewHermitian { residual: skew });
    }
    let sym = symmetry_residual(a);
    if sym >= 1e-8 * scale {
        return Err(Error::NotSymmetric {
            norm: sym,
            tol: 1e-8 * scale,
        });
    }
    Ok(())
}

/// Normalizes the rows of a candidate stack, dropping near-zero rows.
fn normalized_rows(stack: Vec<Array1<Complex64>>, d2: usize) -> Array2<Complex64> {
    let mut rows = Vec::new();
    for mut v in stack {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-13 {
            continue;
        }
        v.mapv_inplace(|z| z / norm);
        rows.push(v);
    }
    let mut out = Array2::zeros((rows.len(), d2));
    for (i, v) in rows.into_iter().enumerate() {
        out.row_mut(i).assign(&v);
    }
    out
}

/// Skew-Hermitian spanning family for couplings on at most k sites:
/// i times the identity, plus the Hermitian and skew parts (times i where
/// needed) of every ordered product of up to floor(k/2) distinct exchange
/// couplings. Products of that depth fit on k sites automatically.
/// The returned list is orthonormalized, so it is linearly independent.
pub fn symmetric_local_generators(n: usize, k: usize) -> Result<Vec<Operator>> {
    crate::operator::check_qubit_count(n)?;
    if k < 2 || k > n {
        return Err(Error::LocalityRange { k, n });
    }
    let depth = k / 2;
    let exchanges: Vec<Operator> = (1..=n)
        .flat_map(|r| ((r + 1)..=n).map(move |s| (r, s)))
        .map(|(r, s)| crate::operator::exchange_op(n, r, s))
        .collect::<Result<Vec<_>>>()?;
    let mut candidates: Vec<Operator> =
        vec![Operator::identity(n)?.scale(Complex64::new(0.0, 1.0))];
    // Ordered products over combinations of distinct pairs, lexicographic.
    fn emit(
        exchanges: &[Operator],
        stack: &mut Vec<usize>,
        depth_left: usize,
        start: usize,
        out: &mut Vec<Operator>,
    ) {
        if !stack.is_empty() {
            let mut m = exchanges[stack[0]].clone();
            for &idx in &stack[1..] {
                m = m.mul(&exchanges[idx]);
            }
            let mdag = m.adjoint();
            out.push(m.add(&mdag).scale(Complex64::new(0.0, 1.0)));
            let skew = m.sub(&mdag);
            if skew.max_abs() > 1e-12 {
                out.push(skew);
            }
        }
        if depth_left == 0 {
            return;
        }
        for idx in start..exchanges.len() {
            stack.push(idx);
            emit(exchanges, stack, depth_left - 1, idx + 1, out);
            stack.pop();
        }
    }
    let mut stack = Vec::new();
    emit(&exchanges, &mut stack, depth, 0, &mut candidates);
    let d2 = 1usize << (2 * n);
    let mut span = LieBasis::empty(n);
    let ambient = catalan(n) as usize;
    for chunk in candidates.chunks(128) {
        let stack: Vec<Array1<Complex64>> = chunk.iter().map(flatten).collect();
        span.accept_batch(normalized_rows(stack, d2), 1e-9, ambient);
    }
    Ok((0..span.dimension()).map(|i| span.element(i)).collect())
}

/// Iterated-commutator closure. Each round commutes the elements added by
/// the previous round against every generator, in index order, accepting
/// directions whose projection residual exceeds tol. Stops when a round
/// adds nothing, when the ambient bound Catalan(n) is reached (the full
/// skew symmetric space is itself closed), or at max_rounds.
pub fn lie_closure(generators: &[Operator], tol: f64, max_rounds: usize) -> Result<LieBasis> {
    let n = match generators.first() {
        Some(g) => g.n(),
        None => return Err(Error::Internal("empty generator list".into())),
    };
    for g in generators {
        if g.n() != n {
            return Err(Error::DimensionMismatch { dim: g.dim(), n });
        }
        require_closure_input(g)?;
    }
    let ambient = catalan(n) as usize;
    let d = 1usize << n;
    let d2 = d * d;
    let mut basis = LieBasis::empty(n);
    basis.accept_batch(
        normalized_rows(generators.iter().map(flatten).collect(), d2),
        tol,
        ambient,
    );
    // Generator stacks for batched products: columns [G_1 | G_2 | ...] and
    // the matching vertical stack.
    let gen_count = generators.len();
    let mut gens_h = Array2::<Complex64>::zeros((d, d * gen_count));
    let mut gens_v = Array2::<Complex64>::zeros((d * gen_count, d));
    for (i, g) in generators.iter().enumerate() {
        gens_h
            .slice_mut(ndarray::s![.., i * d..(i + 1) * d])
            .assign(g.matrix());
        gens_v
            .slice_mut(ndarray::s![i * d..(i + 1) * d, ..])
            .assign(g.matrix());
    }
    let mut frontier_start = 0usize;
    if basis.dimension() >= ambient {
        basis.converged = true;
    }
    while !basis.converged && basis.rounds < max_rounds {
        basis.rounds += 1;
        let frontier_end = basis.dimension();
        let mut added = 0usize;
        for idx in frontier_start..frontier_end {
            let elem = {
                let row = &basis.conj_flat[idx * d2..(idx + 1) * d2];
                CMat::from_shape_vec((d, d), row.iter().map(|z| z.conj()).collect())
                    .expect("row shape")
            };
            // All commutators with this element in two stacked products.
            let eg = elem.dot(&gens_h);
            let ge = gens_v.dot(&elem);
            let mut stack = Vec::with_capacity(gen_count);
            for i in 0..gen_count {
                let left = eg.slice(ndarray::s![.., i * d..(i + 1) * d]);
                let right = ge.slice(ndarray::s![i * d..(i + 1) * d, ..]);
                let mut v = Array1::zeros(d2);
                for (vi, (l, r)) in v.iter_mut().zip(left.iter().zip(right.iter())) {
                    *vi = l - r;
                }
                stack.push(v);
            }
            added += basis.accept_batch(normalized_rows(stack, d2), tol, ambient);
            if basis.dimension() >= ambient {
                basis.converged = true;
                break;
            }
        }
        frontier_start = frontier_end;
        if added == 0 {
            basis.converged = true;
        }
    }
    if basis.dimension() >= ambient {
        basis.converged = true;
    }
    Ok(basis)
}

/// Closure of the standard generator family for (n, k).
pub fn closure_for(n: usize, k: usize, tol: f64) -> Result<LieBasis> {
    if n > MAX_CLOSURE_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            cap: MAX_CLOSURE_QUBITS,
        });
    }
    let generators = symmetric_local_generators(n, k)?;
    let mut basis = lie_closure(&generators, tol, 64)?;
    basis.k = Some(k);
    Ok(basis)
}

/// Computed closure dimension next to the counting-formula value
/// Catalan(n) - floor(n/2) + floor(k/2).
pub fn closure_dimension(n: usize, k: usize) -> Result<(usize, i128)> {
    let formula = catalan(n) - (n / 2) as i128 + (k / 2) as i128;
    let basis = closure_for(n, k, 1e-9)?;
    if !basis.converged {
        return Err(Error::NotConverged {
            what: format!("closure for n={n} k={k}"),
            limit: basis.rounds,
        });
    }
    Ok((basis.dimension(), formula))
}

/// Membership test: projects a skew-Hermitian operator onto the closure.
/// Returns the verdict and the relative residual.
pub fn contains(basis: &LieBasis, a: &Operator, tol: f64) -> Result<(bool, f64)> {
    if a.n() != basis.n {
        return Err(Error::DimensionMismatch {
            dim: a.dim(),
            n: basis.n,
        });
    }
    let skew = skew_residual(a);
    if skew >= 1e-8 * a.max_abs().max(1.0) {
        return Err(Error::NotSkewHermitian { residual: skew });
    }
    if !basis.converged {
        return Err(Error::NotConverged {
            what: "membership basis".into(),
            limit: basis.rounds,
        });
    }
    let mut x = flatten(a);
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-14 {
        return Ok((true, 0.0));
    }
    x.mapv_inplace(|z| z / norm);
    let residual = basis.project_out(&mut x);
    Ok((residual < tol, residual))
}

#[derive(Clone, Debug)]
pub struct CenterReport {
    pub n: usize,
    pub k: usize,
    /// floor(k/2) + 1: one central direction per reachable grade.
    pub center_dim: usize,
    /// (grade l, max commutator norm against the generators,
    /// closure-membership residual) for each l <= 2*floor(k/2).
    pub grades: Vec<(usize, f64, f64)>,
    pub ok: bool,
}

/// Verifies that i times each reachable-grade basis element commutes with
/// every generator and lies in the closure: those elements span the center.
pub fn center_check(n: usize, k: usize) -> Result<CenterReport> {
    let generators = symmetric_local_generators(n, k)?;
    let basis = closure_for(n, k, 1e-9)?;
    let top = (2 * (k / 2)).min(max_body_label(n));
    let mut grades = Vec::new();
    let mut ok = basis.converged;
    for l in (0..=top).step_by(2) {
        let ic = crate::cl_basis::cl_operator(n, l)?.scale(Complex64::new(0.0, 1.0));
        let mut comm = 0.0_f64;
        for g in &generators {
            comm = comm.max(crate::operator::commutator(&ic, g).max_abs());
        }
        let (member, residual) = contains(&basis, &ic, 1e-7)?;
        ok = ok && member && comm < 1e-10 * ic.max_abs().max(1.0);
        grades.push((l, comm, residual));
    }
    Ok(CenterReport {
        n,
        k,
        center_dim: k / 2 + 1,
        grades,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cl_basis::cl_operator;
    use crate::operator::{commutator, exchange_op, pauli_string};
    use crate::sectors::is_symmetric;

    fn unit(a: &Operator) -> Operator {
        a.scale_re(1.0 / a.frobenius_norm())
    }

    #[test]
    fn pair_commutant_directions() {
        let gens = symmetric_local_generators(3, 2).unwrap();
        assert_eq!(gens.len(), 4);
        let gens4 = symmetric_local_generators(4, 2).unwrap();
        assert_eq!(gens4.len(), 7);
        for g in gens.iter().chain(gens4.iter()) {
            assert!(skew_residual(g) < 1e-10);
            assert!(is_symmetric(g, 1e-8));
        }
        assert!(matches!(
            symmetric_local_generators(4, 1),
            Err(Error::LocalityRange { .. })
        ));
        assert!(matches!(
            symmetric_local_generators(4, 5),
            Err(Error::LocalityRange { .. })
        ));
    }

    #[test]
    fn generator_span_contains_each_exchange() {
        let gens = symmetric_local_generators(3, 2).unwrap();
        let span = lie_closure(&gens, 1e-9, 0).unwrap();
        for (r, s) in [(1, 2), (1, 3), (2, 3)] {
            let ir = exchange_op(3, r, s)
                .unwrap()
                .scale(Complex64::new(0.0, 1.0));
            let mut x = flatten(&unit(&ir));
            let residual = span.project_out(&mut x);
            assert!(residual < 1e-9, "pair ({r},{s})");
        }
    }

    #[test]
    fn small_closure_dimensions() {
        for (n, k, want) in [
            (2usize, 2usize, 2usize),
            (3, 2, 5),
            (3, 3, 5),
            (4, 2, 13),
            (4, 3, 13),
            (4, 4, 14),
            (5, 2, 41),
            (5, 4, 42),
        ] {
            let (computed, formula) = closure_dimension(n, k).unwrap();
            assert_eq!(computed, want, "n={n} k={k}");
            assert_eq!(formula, want as i128, "n={n} k={k}");
        }
    }

    #[test]
    fn two_qubit_algebra_is_abelian() {
        let basis = closure_for(2, 2, 1e-9).unwrap();
        assert_eq!(basis.dimension(), 2);
        assert!(basis.converged);
        let a = basis.element(0);
        let b = basis.element(1);
        assert!(commutator(&a, &b).max_abs() < 1e-12);
    }

    #[test]
    fn closure_invariants_hold() {
        let basis = closure_for(4, 2, 1e-9).unwrap();
        assert!(basis.converged);
        let dim = basis.dimension();
        // Orthonormal, skew, symmetric.
        for i in 0..dim {
            let e = basis.element(i);
            assert!(skew_residual(&e) < 1e-10);
            assert!(is_symmetric(&e, 1e-8));
            for j in i..dim {
                let f = basis.element(j);
                let overlap = crate::operator::hs_inner(&e, &f).re;
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((overlap - want).abs() < 1e-9, "({i},{j})");
            }
        }
        // Closed under commutators.
        for i in 0..dim {
            for j in (i + 1)..dim {
                let br = commutator(&basis.element(i), &basis.element(j));
                let norm = br.frobenius_norm();
                if norm < 1e-12 {
                    continue;
                }
                let (member, residual) = contains(&basis, &br, 1e-7).unwrap();
                assert!(member, "bracket ({i},{j}) residual {residual:.2e}");
            }
        }
    }

    #[test]
    fn membership_verdicts() {
        let basis = closure_for(4, 2, 1e-9).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let r12r34 = exchange_op(4, 1, 2)
            .unwrap()
            .mul(&exchange_op(4, 3, 4).unwrap());
        let (in_alg, residual) = contains(&basis, &r12r34.scale(i), 1e-7).unwrap();
        assert!(!in_alg);
        assert!(residual > 1e-2);

        let crossed = r12r34.sub(
            &exchange_op(4, 1, 3)
                .unwrap()
                .mul(&exchange_op(4, 2, 4).unwrap()),
        );
        let (in_alg, residual) = contains(&basis, &crossed.scale(i), 1e-7).unwrap();
        assert!(in_alg, "residual {residual:.2e}");

        let (c2_in, _) = contains(&basis, &cl_operator(4, 2).unwrap().scale(i), 1e-7).unwrap();
        assert!(c2_in);
        let (c4_in, c4_res) = contains(&basis, &cl_operator(4, 4).unwrap().scale(i), 1e-7).unwrap();
        assert!(!c4_in);
        // The high grade is orthogonal to the whole algebra, not merely outside.
        assert!(c4_res > 0.99);

        let z = pauli_string(4, &[(1, 3)]).unwrap();
        assert!(contains(&basis, &z, 1e-7).is_err());
    }

    #[test]
    fn chirality_in_two_body_closure() {
        let basis = closure_for(3, 2, 1e-9).unwrap();
        let r12 = exchange_op(3, 1, 2).unwrap();
        let r23 = exchange_op(3, 2, 3).unwrap();
        // i times the Hermitian chirality combination.
        let chi = commutator(&r12, &r23).scale_re(2.0);
        let (member, residual) = contains(&basis, &chi, 1e-7).unwrap();
        assert!(member, "residual {residual:.2e}");
    }

    #[test]
    fn center_structure_small() {
        let report = center_check(4, 2).unwrap();
        assert_eq!(report.center_dim, 2);
        assert!(report.ok, "{report:?}");
        assert_eq!(report.grades.len(), 2);
        for (l, comm, member) in &report.grades {
            assert!(comm < &1e-10, "l={l}");
            assert!(member < &1e-7, "l={l}");
        }
        let report = center_check(4, 4).unwrap();
        assert_eq!(report.center_dim, 3);
        assert!(report.ok);
    }

    #[test]
    fn closure_span_stable_under_generator_shuffle() {
        let gens = symmetric_local_generators(4, 2).unwrap();
        let mut shuffled = gens.clone();
        // Deterministic shuffle.
        let mut state = 0x853c49e6748fea9bu64;
        for i in (1..shuffled.len()).rev() {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            shuffled.swap(i, j);
        }
        let a = lie_closure(&gens, 1e-9, 64).unwrap();
        let b = lie_closure(&shuffled, 1e-9, 64).unwrap();
        assert_eq!(a.dimension(), b.dimension());
        for i in 0..a.dimension() {
            let e = a.element(i);
            let (member, residual) = contains(&b, &e, 1e-8).unwrap();
            assert!(member, "element {i} residual {residual:.2e}");
        }
    }

    #[test]
    fn unconverged_basis_is_flagged_and_rejected() {
        let gens = symmetric_local_generators(4, 2).unwrap();
        let basis = lie_closure(&gens, 1e-9, 1).unwrap();
        assert!(!basis.converged);
        let probe = gens[1].clone();
        assert!(matches!(
            contains(&basis, &probe, 1e-7),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    #[ignore]
    fn six_qubit_grid_timing_probe() {
        for k in 2..=6usize {
            let start = std::time::Instant::now();
            let (computed, formula) = closure_dimension(6, k).unwrap();
            eprintln!(
                "n=6 k={k}: computed={computed} formula={formula} in {:?}",
                start.elapsed()
            );
            assert_eq!(computed as i128, formula);
        }
    }

    #[test]
    fn cap_enforced() {
        assert!(matches!(
            closure_dimension(9, 2),
            Err(Error::TooManyQubits { .. })
        ));
    }
}
