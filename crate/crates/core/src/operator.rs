//! Dense operators on a register of qubits.
//!
//! Sites are labelled 1..=n externally; site 1 maps to the most significant
//! bit of the basis index. Matrices are dense `Complex64` arrays, so the
//! register size is capped at [`MAX_DENSE_QUBITS`].

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest register handled by the dense representation.
pub const MAX_DENSE_QUBITS: usize = 12;

pub type CMat = Array2<Complex64>;
pub type CVec = Array1<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense linear operator on `n` qubits.
#[derive(Clone, Debug)]
pub struct Operator {
    n: usize,
    data: CMat,
}

impl Operator {
    /// Wraps a matrix, checking that its shape is 2^n x 2^n.
    pub fn new(n: usize, data: CMat) -> Result<Self> {
        check_qubit_count(n)?;
        let d = 1usize << n;
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::DimensionMismatch { dim: data.nrows(), n });
        }
        Ok(Operator { n, data })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(Operator { n, data: CMat::eye(1 << n) })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let d = 1 << n;
        Ok(Operator { n, data: CMat::zeros((d, d)) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.data
    }

    pub fn matrix_mut(&mut self) -> &mut CMat {
        &mut self.data
    }

    pub fn into_matrix(self) -> CMat {
        self.data
    }

    pub fn adjoint(&self) -> Operator {
        let data = self.data.t().mapv(|z| z.conj());
        Operator { n: self.n, data }
    }

    pub fn trace(&self) -> Complex64 {
        self.data.diag().sum()
    }

    /// Matrix product; both operands must live on the same register.
    pub fn mul(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.n, rhs.n, "operator register mismatch");
        Operator { n: self.n, data: self.data.dot(&rhs.data) }
    }

    pub fn add(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.n, rhs.n, "operator register mismatch");
        Operator { n: self.n, data: &self.data + &rhs.data }
    }

    pub fn sub(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.n, rhs.n, "operator register mismatch");
        Operator { n: self.n, data: &self.data - &rhs.data }
    }

    pub fn scale(&self, c: Complex64) -> Operator {
        Operator { n: self.n, data: self.data.mapv(|z| z * c) }
    }

    pub fn scale_re(&self, c: f64) -> Operator {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn apply(&self, v: &CVec) -> CVec {
        self.data.dot(v)
    }

    /// U A U^dag for a unitary U on the same register.
    pub fn conjugate_by(&self, u: &Operator) -> Operator {
        assert_eq!(self.n, u.n, "operator register mismatch");
        let ud = u.adjoint();
        Operator { n: self.n, data: u.data.dot(&self.data).dot(&ud.data) }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Max-entry distance from the adjoint.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r = 0.0_f64;
        let d = self.dim();
        for i in 0..d {
            for j in i..d {
                r = r.max((self.data[[i, j]] - self.data[[j, i]].conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn unitarity_residual(&self) -> f64 {
        let prod = self.adjoint().mul(self);
        let eye = CMat::eye(self.dim());
        (&prod.data - &eye).iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// Tensor product; `self` occupies the leading (most significant) sites.
    pub fn tensor(&self, rhs: &Operator) -> Result<Operator> {
        let n = self.n + rhs.n;
        check_qubit_count(n)?;
        Ok(Operator { n, data: kron(&self.data, &rhs.data) })
    }
}

pub(crate) fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits { n, cap: MAX_DENSE_QUBITS });
    }
    Ok(())
}

pub(crate) fn check_site(index: usize, n: usize) -> Result<()> {
    if index == 0 || index > n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    Ok(())
}

pub(crate) fn check_pair(r: usize, s: usize, n: usize) -> Result<()> {
    check_site(r, n)?;
    check_site(s, n)?;
    if r == s {
        return Err(Error::CoincidentPair { site: r });
    }
    Ok(())
}

/// Kronecker product with the left factor on the most significant bits.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMat::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Hilbert-Schmidt inner product Tr(A^dag B).
pub fn hs_inner(a: &Operator, b: &Operator) -> Complex64 {
    assert_eq!(a.n, b.n, "operator register mismatch");
    a.data
        .iter()
        .zip(b.data.iter())
        .map(|(x, y)| x.conj() * y)
        .sum()
}

/// AB - BA.
pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    assert_eq!(a.n, b.n, "operator register mismatch");
    let ab = a.data.dot(&b.data);
    let ba = b.data.dot(&a.data);
    Operator { n: a.n, data: ab - ba }
}

fn bit_of(index: usize, site: usize, n: usize) -> usize {
    (index >> (n - site)) & 1
}

pub(crate) fn flip_pair(index: usize, r: usize, s: usize, n: usize) -> usize {
    // Swaps the bits of sites r and s inside a basis index.
    let br = bit_of(index, r, n);
    let bs = bit_of(index, s, n);
    if br == bs {
        index
    } else {
        index ^ ((1 << (n - r)) | (1 << (n - s)))
    }
}

/// Permutation matrix exchanging the basis states of sites r and s.
pub fn swap_op(n: usize, r: usize, s: usize) -> Result<Operator> {
    check_qubit_count(n)?;
    check_pair(r, s, n)?;
    let d = 1 << n;
    let mut data = CMat::zeros((d, d));
    for b in 0..d {
        data[[flip_pair(b, r, s, n), b]] = ONE;
    }
    Ok(Operator { n, data })
}

/// Exchange coupling between sites r and s: half the dot product of the two
/// Pauli vectors, equal to the swap minus half the identity.
pub fn exchange_op(n: usize, r: usize, s: usize) -> Result<Operator> {
    let mut p = swap_op(n, r, s)?;
    let half = Complex64::new(0.5, 0.0);
    for i in 0..p.dim() {
        p.data[[i, i]] -= half;
    }
    Ok(p)
}

/// 2x2 Pauli matrix by axis index: 0 -> identity, 1 -> x, 2 -> y, 3 -> z.
pub fn pauli(axis: usize) -> CMat {
    let i = Complex64::new(0.0, 1.0);
    match axis {
        0 => ndarray::array![[ONE, ZERO], [ZERO, ONE]],
        1 => ndarray::array![[ZERO, ONE], [ONE, ZERO]],
        2 => ndarray::array![[ZERO, -i], [i, ZERO]],
        3 => ndarray::array![[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("pauli axis must be 0..=3"),
    }
}

/// Product of single-site Pauli factors; unlisted sites carry the identity.
pub fn pauli_string(n: usize, factors: &[(usize, usize)]) -> Result<Operator> {
    check_qubit_count(n)?;
    let mut axes = vec![0usize; n];
    for &(site, axis) in factors {
        check_site(site, n)?;
        assert!(axis <= 3, "pauli axis must be 0..=3");
        axes[site - 1] = axis;
    }
    let mut data = pauli(axes[0]);
    for &ax in &axes[1..] {
        data = kron(&data, &pauli(ax));
    }
    Ok(Operator { n, data })
}

/// Collective angular momentum component: half the sum of one Pauli axis
/// over all sites.
pub fn j_component(n: usize, axis: usize) -> Result<Operator> {
    check_qubit_count(n)?;
    assert!((1..=3).contains(&axis), "axis must be 1..=3");
    let mut acc = Operator::zero(n)?;
    for site in 1..=n {
        acc = acc.add(&pauli_string(n, &[(site, axis)])?);
    }
    Ok(acc.scale_re(0.5))
}

/// Partial trace onto the sites listed in `keep` (strictly ascending).
/// The result acts on the kept sites in their original order.
pub fn partial_trace(a: &Operator, keep: &[usize]) -> Result<Operator> {
    let n = a.n;
    if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadKeepSet);
    }
    for &site in keep {
        check_site(site, n)?;
    }
    let nk = keep.len();
    let nt = n - nk;
    let traced: Vec<usize> = (1..=n).filter(|site| !keep.contains(site)).collect();

    // Bit scatter tables: position of each kept / traced site inside the
    // full index, most significant site first.
    let keep_shift: Vec<usize> = keep.iter().map(|&site| n - site).collect();
    let traced_shift: Vec<usize> = traced.iter().map(|&site| n - site).collect();
    let compose = |sub: usize, shifts: &[usize]| -> usize {
        let w = shifts.len();
        let mut full = 0usize;
        for (pos, &sh) in shifts.iter().enumerate() {
            full |= ((sub >> (w - 1 - pos)) & 1) << sh;
        }
        full
    };

    let dk = 1usize << nk;
    let dt = 1usize << nt;
    let mut out = CMat::zeros((dk, dk));
    for ik in 0..dk {
        let ik_full = compose(ik, &keep_shift);
        for jk in 0..dk {
            let jk_full = compose(jk, &keep_shift);
            let mut acc = ZERO;
            for t in 0..dt {
                let t_full = compose(t, &traced_shift);
                acc += a.data[[ik_full | t_full, jk_full | t_full]];
            }
            out[[ik, jk]] = acc;
        }
    }
    Operator::new(nk, out)
}

/// Splits an operator into its Pauli-weight components. Entry `w` of the
/// result collects every Pauli string acting non-trivially on exactly `w`
/// sites; the components sum back to the input.
pub fn pauli_weight_components(a: &Operator) -> Vec<Operator> {
    let n = a.n;
    let d = a.dim();
    // Forward transform: per site, rewrite the 2x2 block structure in the
    // Pauli basis. Afterwards the entry at (row, col) is the coefficient of
    // the string whose site-q letter is encoded by the bit pair
    // (row_q, col_q): 00 -> I, 01 -> x, 10 -> y, 11 -> z.
    let half = Complex64::new(0.5, 0.0);
    let ihalf = Complex64::new(0.0, 0.5);
    let mut coeff = a.data.clone();
    for q in 0..n {
        let stride = 1usize << (n - 1 - q);
        for i in 0..d {
            if i & stride != 0 {
                continue;
            }
            for j in 0..d {
                if j & stride != 0 {
                    continue;
                }
                let a00 = coeff[[i, j]];
                let a01 = coeff[[i, j | stride]];
                let a10 = coeff[[i | stride, j]];
                let a11 = coeff[[i | stride, j | stride]];
                coeff[[i, j]] = (a00 + a11) * half;
                coeff[[i, j | stride]] = (a01 + a10) * half;
                coeff[[i | stride, j]] = (a01 - a10) * ihalf;
                coeff[[i | stride, j | stride]] = (a00 - a11) * half;
            }
        }
    }

    let minus_i = Complex64::new(0.0, -1.0);
    (0..=n)
        .map(|w| {
            let mut comp = CMat::zeros((d, d));
            for i in 0..d {
                for j in 0..d {
                    if (i | j).count_ones() as usize == w {
                        comp[[i, j]] = coeff[[i, j]];
                    }
                }
            }
            // Inverse transform, site by site.
            for q in 0..n {
                let stride = 1usize << (n - 1 - q);
                for i in 0..d {
                    if i & stride != 0 {
                        continue;
                    }
                    for j in 0..d {
                        if j & stride != 0 {
                            continue;
                        }
                        let ci = comp[[i, j]];
                        let cx = comp[[i, j | stride]];
                        let cy = comp[[i | stride, j]];
                        let cz = comp[[i | stride, j | stride]];
                        comp[[i, j]] = ci + cz;
                        comp[[i, j | stride]] = cx + cy * minus_i;
                        comp[[i | stride, j]] = cx - cy * minus_i;
                        comp[[i | stride, j | stride]] = ci - cz;
                    }
                }
            }
            Operator { n, data: comp }
        })
        .collect()
}

/// Permutation unitary sending site i to site perm[i-1] (1-based bijection).
pub fn site_permutation_op(n: usize, perm: &[usize]) -> Result<Operator> {
    check_qubit_count(n)?;
    if perm.len() != n {
        return Err(Error::Internal(format!(
            "permutation length {} does not match n={n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n + 1];
    for &p in perm {
        check_site(p, n)?;
        if seen[p] {
            return Err(Error::Internal(format!("permutation repeats site {p}")));
        }
        seen[p] = true;
    }
    let d = 1usize << n;
    let mut data = CMat::zeros((d, d));
    for b in 0..d {
        let mut target = 0usize;
        for site in 1..=n {
            if bit_of(b, site, n) == 1 {
                target |= 1 << (n - perm[site - 1]);
            }
        }
        data[[target, b]] = ONE;
    }
    Ok(Operator { n, data })
}

/// Seeded random symmetric Hamiltonian: the Hermitian part of a Gaussian
/// combination of all n! site-permutation unitaries. Spanning the group
/// algebra makes the sample generic within the symmetric operators.
pub fn random_symmetric_hamiltonian(n: usize, seed: u64) -> Result<Operator> {
    check_qubit_count(n)?;
    if n > 6 {
        return Err(Error::TooManyQubits { n, cap: 6 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = |rng: &mut ChaCha8Rng| {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen::<f64>();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let mut x = Operator::zero(n)?;
    let mut labels: Vec<usize> = (1..=n).collect();
    permute_all(&mut labels, 0, &mut |perm| {
        let g = Complex64::new(normal(&mut rng), normal(&mut rng));
        let p = site_permutation_op(n, perm).expect("valid permutation");
        x = x.add(&p.scale(g));
    });
    let h = x.add(&x.adjoint()).scale_re(0.5);
    Ok(h.scale_re(1.0 / h.frobenius_norm().max(1e-300)))
}

/// Recursive swap enumeration; visits permutations in a fixed order.
pub(crate) fn permute_all(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Seeded pseudo-random global rotation: the same single-qubit special
/// unitary applied to every site.
pub fn random_global_rotation(n: usize, seed: u64) -> Result<Operator> {
    check_qubit_count(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Unit quaternion via Box-Muller normals.
    let mut normals = [0.0_f64; 4];
    for pair in normals.chunks_mut(2) {
        let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.gen::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        pair[0] = r * (std::f64::consts::TAU * u2).cos();
        if pair.len() > 1 {
            pair[1] = r * (std::f64::consts::TAU * u2).sin();
        }
    }
    let norm = normals.iter().map(|x| x * x).sum::<f64>().sqrt();
    let [a, b, c, d] = normals.map(|x| x / norm);
    let u = ndarray::array![
        [Complex64::new(a, b), Complex64::new(c, d)],
        [Complex64::new(-c, d), Complex64::new(a, -b)]
    ];
    let mut data = u.clone();
    for _ in 1..n {
        data = kron(&data, &u);
    }
    Ok(Operator { n, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn assert_close(a: &Operator, b: &Operator, tol: f64) {
        assert_eq!(a.n(), b.n());
        let diff = a.sub(b).max_abs();
        assert!(diff <= tol, "operators differ by {diff:.3e}");
    }

    #[test]
    fn exchange_matches_pauli_construction() {
        for n in 2..=4 {
            for r in 1..=n {
                for s in 1..=n {
                    if r == s {
                        continue;
                    }
                    let rop = exchange_op(n, r, s).unwrap();
                    let mut acc = Operator::zero(n).unwrap();
                    for axis in 1..=3 {
                        acc = acc.add(
                            &pauli_string(n, &[(r, axis), (s, axis)]).unwrap(),
                        );
                    }
                    assert_close(&rop, &acc.scale_re(0.5), 1e-14);
                }
            }
        }
    }

    #[test]
    fn exchange_square_identity() {
        let r = exchange_op(3, 1, 3).unwrap();
        let lhs = r.mul(&r);
        let rhs = Operator::identity(3).unwrap().scale_re(0.75).sub(&r);
        assert_close(&lhs, &rhs, 1e-14);
    }

    #[test]
    fn swap_is_exchange_plus_half() {
        let p = swap_op(2, 1, 2).unwrap();
        let r = exchange_op(2, 1, 2).unwrap();
        let expect = r.add(&Operator::identity(2).unwrap().scale_re(0.5));
        assert_close(&p, &expect, 1e-15);
        assert_close(&p.mul(&p), &Operator::identity(2).unwrap(), 1e-15);
    }

    #[test]
    fn hs_inner_of_exchange_is_three() {
        let r = exchange_op(2, 1, 2).unwrap();
        let v = hs_inner(&r, &r);
        assert!((v.re - 3.0).abs() < 1e-13 && v.im.abs() < 1e-13);
    }

    #[test]
    fn exchange_is_traceless_hermitian() {
        let r = exchange_op(4, 2, 4).unwrap();
        assert!(r.trace().norm() < 1e-12);
        assert!(r.is_hermitian(1e-14));
    }

    #[test]
    fn commutator_flips_sign_under_relabelling() {
        let c = commutator(
            &exchange_op(3, 1, 2).unwrap(),
            &exchange_op(3, 2, 3).unwrap(),
        );
        // Relabelling 1 <-> 3 maps [R12, R23] to [R32, R21] = -[R12, R23].
        let p13 = swap_op(3, 1, 3).unwrap();
        let relabeled = c.conjugate_by(&p13);
        assert_close(&relabeled, &c.scale_re(-1.0), 1e-13);
    }

    #[test]
    fn partial_trace_of_tensor_factors() {
        let a = exchange_op(2, 1, 2).unwrap();
        let b = random_global_rotation(1, 7).unwrap();
        let ab = a.tensor(&b).unwrap();
        let back = partial_trace(&ab, &[1, 2]).unwrap();
        assert_close(&back, &a.scale(b.trace()), 1e-13);

        // Tracing site 3 out of an exchange on sites (1,2) leaves 2 R.
        let r3 = exchange_op(3, 1, 2).unwrap();
        let reduced = partial_trace(&r3, &[1, 2]).unwrap();
        assert_close(&reduced, &a.scale_re(2.0), 1e-13);
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let a = exchange_op(3, 1, 2).unwrap();
        assert!(partial_trace(&a, &[]).is_err());
        assert!(partial_trace(&a, &[2, 1]).is_err());
        assert!(partial_trace(&a, &[1, 4]).is_err());
    }

    #[test]
    fn pauli_components_split_exchange() {
        let r = exchange_op(3, 1, 2).unwrap();
        let comps = pauli_weight_components(&r);
        assert_eq!(comps.len(), 4);
        let mut total = Operator::zero(3).unwrap();
        for c in &comps {
            total = total.add(c);
        }
        assert_close(&total, &r, 1e-13);
        // Exchange is a pure weight-2 operator.
        assert!(comps[2].sub(&r).max_abs() < 1e-13);
        assert!(comps[0].max_abs() < 1e-14);
        assert!(comps[1].max_abs() < 1e-14);
        assert!(comps[3].max_abs() < 1e-14);
    }

    #[test]
    fn pauli_components_are_orthogonal() {
        // Mix weights deliberately: identity + single z + exchange.
        let n = 3;
        let mixed = Operator::identity(n)
            .unwrap()
            .add(&pauli_string(n, &[(2, 3)]).unwrap())
            .add(&exchange_op(n, 1, 3).unwrap());
        let comps = pauli_weight_components(&mixed);
        for (w1, c1) in comps.iter().enumerate() {
            for c2 in comps.iter().skip(w1 + 1) {
                assert!(hs_inner(c1, c2).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn chirality_is_weight_three() {
        // Triple product of distinct Pauli axes across three sites.
        let n = 3;
        let mut chi = Operator::zero(n).unwrap();
        for (a, b, c, sign) in [
            (1, 2, 3, 1.0),
            (2, 3, 1, 1.0),
            (3, 1, 2, 1.0),
            (3, 2, 1, -1.0),
            (2, 1, 3, -1.0),
            (1, 3, 2, -1.0),
        ] {
            chi = chi.add(
                &pauli_string(n, &[(1, a), (2, b), (3, c)])
                    .unwrap()
                    .scale_re(sign),
            );
        }
        let comps = pauli_weight_components(&chi);
        assert!(comps[3].sub(&chi).max_abs() < 1e-12);
        assert!(chi.is_hermitian(1e-12));
    }

    #[test]
    fn global_rotation_is_unitary_and_reproducible() {
        let u1 = random_global_rotation(3, 42).unwrap();
        let u2 = random_global_rotation(3, 42).unwrap();
        assert_close(&u1, &u2, 0.0);
        assert!(u1.unitarity_residual() < 1e-12);
        let r = exchange_op(3, 1, 3).unwrap();
        assert_close(&r.conjugate_by(&u1), &r, 1e-12);
    }

    #[test]
    fn rejects_out_of_range_sites() {
        assert!(matches!(
            exchange_op(3, 0, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            exchange_op(3, 1, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            exchange_op(3, 2, 2),
            Err(Error::CoincidentPair { site: 2 })
        ));
        assert!(matches!(
            Operator::identity(MAX_DENSE_QUBITS + 1),
            Err(Error::TooManyQubits { .. })
        ));
    }

    proptest! {
        #[test]
        fn exchange_properties(r in 1usize..5, s in 1usize..5) {
            prop_assume!(r != s);
            let op = exchange_op(4, r, s).unwrap();
            prop_assert!(op.is_hermitian(1e-14));
            prop_assert!(op.trace().norm() < 1e-12);
            let sq = op.mul(&op);
            let expect = Operator::identity(4).unwrap().scale_re(0.75).sub(&op);
            prop_assert!(sq.sub(&expect).max_abs() < 1e-13);
        }

        #[test]
        fn rotation_commutes_with_exchange(seed in 0u64..1000) {
            let u = random_global_rotation(2, seed).unwrap();
            let r = exchange_op(2, 1, 2).unwrap();
            prop_assert!(commutator(&u, &r).max_abs() < 1e-12);
        }
    }

    #[test]
    fn site_permutation_composes_from_swaps() {
        // The 3-cycle moving contents 1 -> 2 -> 3 -> 1 equals P12 P23
        // (rightmost factor acts first).
        let cycle = site_permutation_op(3, &[2, 3, 1]).unwrap();
        let via_swaps = swap_op(3, 1, 2).unwrap().mul(&swap_op(3, 2, 3).unwrap());
        assert!(cycle.sub(&via_swaps).max_abs() < 1e-15);
        assert!(cycle.unitarity_residual() < 1e-15);
        let id = site_permutation_op(3, &[1, 2, 3]).unwrap();
        assert!(id.sub(&Operator::identity(3).unwrap()).max_abs() < 1e-15);
        assert!(site_permutation_op(3, &[1, 1, 2]).is_err());
        assert!(site_permutation_op(3, &[1, 2]).is_err());
    }

    #[test]
    fn random_symmetric_hamiltonian_properties() {
        let h = random_symmetric_hamiltonian(3, 11).unwrap();
        assert!(h.is_hermitian(1e-12));
        assert!((h.frobenius_norm() - 1.0).abs() < 1e-12);
        for axis in 1..=3 {
            let j = j_component(3, axis).unwrap();
            assert!(commutator(&h, &j).max_abs() < 1e-12, "axis {axis}");
        }
        let again = random_symmetric_hamiltonian(3, 11).unwrap();
        assert!(h.sub(&again).max_abs() == 0.0);
        let other = random_symmetric_hamiltonian(3, 12).unwrap();
        assert!(h.sub(&other).max_abs() > 1e-3);
    }
}
