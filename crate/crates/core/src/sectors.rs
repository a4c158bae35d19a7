//! Total angular momentum sector structure of a qubit register.
//!
//! Every operator commuting with the three collective spin components is
//! block diagonal over the sectors of total angular momentum j. Half-integer
//! bookkeeping is avoided by carrying `twice_j` everywhere; valid values
//! share the parity of n and run from n mod 2 up to n.

use crate::error::{Error, Result};
use crate::operator::{
    check_qubit_count, commutator, j_component, random_global_rotation, CMat, Operator, ZERO,
};
use num_complex::Complex64;

/// Exact binomial coefficient; callers stay far below the i128 overflow range.
pub fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

pub fn catalan(n: usize) -> i128 {
    binomial(2 * n, n) / (n as i128 + 1)
}

/// Multiplicity of the sector `twice_j`, zero outside the valid range.
/// Accepts the out-of-range arguments that arise inside alternating sums.
pub fn multiplicity_or_zero(n: i64, twice_j: i64) -> i128 {
    if n < 0 || twice_j < 0 || twice_j > n || (n - twice_j) % 2 != 0 {
        return 0;
    }
    let b = binomial(n as usize, ((n - twice_j) / 2) as usize);
    let num = b * (twice_j + 1) as i128;
    let den = ((n + twice_j) / 2 + 1) as i128;
    debug_assert_eq!(num % den, 0, "multiplicity must be integral");
    num / den
}

/// Multiplicity of the sector `twice_j` of an n-site register.
pub fn multiplicity(n: usize, twice_j: usize) -> Result<i128> {
    validate_sector(n, twice_j)?;
    Ok(multiplicity_or_zero(n as i64, twice_j as i64))
}

pub(crate) fn validate_sector(n: usize, twice_j: usize) -> Result<()> {
    if twice_j > n || (n - twice_j) % 2 != 0 {
        return Err(Error::InvalidSector { n, twice_j });
    }
    Ok(())
}

/// Ascending list of valid `twice_j` labels for n sites.
pub fn sector_labels(n: usize) -> Vec<usize> {
    (0..=n).filter(|t| (n - t) % 2 == 0).collect()
}

/// j(j+1) for the sector label; exact in f64 (at most two fraction bits).
pub fn casimir_value(twice_j: usize) -> f64 {
    (twice_j * (twice_j + 2)) as f64 / 4.0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorInfo {
    pub twice_j: usize,
    pub multiplicity: i128,
    /// Dimension of the sector: (2j + 1) times the multiplicity.
    pub sector_trace: i128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorTable {
    pub n: usize,
    pub sectors: Vec<SectorInfo>,
}

pub fn sector_table(n: usize) -> Result<SectorTable> {
    if n == 0 {
        return Err(Error::TooManyQubits { n, cap: 0 });
    }
    let sectors = sector_labels(n)
        .into_iter()
        .map(|t| {
            let m = multiplicity_or_zero(n as i64, t as i64);
            SectorInfo {
                twice_j: t,
                multiplicity: m,
                sector_trace: (t as i128 + 1) * m,
            }
        })
        .collect();
    Ok(SectorTable { n, sectors })
}

/// Per-sector traces of an operator: the coordinates that decide which
/// symmetric Hamiltonians few-body couplings can reach.
#[derive(Clone, Debug)]
pub struct ChargeVector {
    pub n: usize,
    /// (twice_j, Tr(A . projector)) in ascending sector order.
    pub entries: Vec<(usize, f64)>,
}

impl ChargeVector {
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0_f64, |m, &(_, v)| m.max(v.abs()))
    }
}

/// Squared collective spin, built from its three components.
pub fn total_j2(n: usize) -> Result<Operator> {
    check_qubit_count(n)?;
    let mut acc = Operator::zero(n)?;
    for axis in 1..=3 {
        let jv = j_component(n, axis)?;
        acc = acc.add(&jv.mul(&jv));
    }
    Ok(acc)
}

/// Projector onto the sector `twice_j`, as the Lagrange polynomial of the
/// squared collective spin evaluated at the sector eigenvalues. Factors are
/// multiplied from the closest eigenvalue outward.
pub fn sector_projector(n: usize, twice_j: usize) -> Result<Operator> {
    validate_sector(n, twice_j)?;
    let j2 = total_j2(n)?;
    let a = casimir_value(twice_j);
    let mut others: Vec<usize> = sector_labels(n)
        .into_iter()
        .filter(|&t| t != twice_j)
        .collect();
    others.sort_by(|&x, &y| {
        let dx = (casimir_value(x) - a).abs();
        let dy = (casimir_value(y) - a).abs();
        dx.partial_cmp(&dy).unwrap()
    });
    let mut acc = Operator::identity(n)?;
    for t in others {
        let ap = casimir_value(t);
        let mut shifted = j2.clone();
        for i in 0..shifted.dim() {
            shifted.matrix_mut()[[i, i]] -= Complex64::new(ap, 0.0);
        }
        acc = acc.mul(&shifted).scale_re(1.0 / (a - ap));
    }
    Ok(acc)
}

/// Max commutator norm against the three collective spin components.
pub fn symmetry_residual(a: &Operator) -> f64 {
    let mut worst = 0.0_f64;
    for axis in 1..=3 {
        let jv = j_component(a.n(), axis).expect("register validated");
        worst = worst.max(commutator(a, &jv).max_abs());
    }
    worst
}

/// Rotational invariance: commutators with the collective spin components
/// stay below `tol`, cross-checked against two fixed pseudo-random global
/// rotations.
pub fn is_symmetric(a: &Operator, tol: f64) -> bool {
    if symmetry_residual(a) >= tol {
        return false;
    }
    for seed in [17u64, 101u64] {
        let u = random_global_rotation(a.n(), seed).expect("register validated");
        if a.conjugate_by(&u).sub(a).max_abs() >= tol {
            return false;
        }
    }
    true
}

pub fn charge_vector(h: &Operator) -> Result<ChargeVector> {
    let n = h.n();
    let entries = sector_labels(n)
        .into_iter()
        .map(|t| {
            let pi = sector_projector(n, t)?;
            let tr: Complex64 = pi.mul(h).trace();
            Ok((t, tr.re))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChargeVector { n, entries })
}

/// Orthonormal basis of the sector range, chosen by repeatedly taking the
/// projector column with the largest remaining diagonal. Deterministic.
pub fn sector_basis(n: usize, twice_j: usize) -> Result<CMat> {
    let pi = sector_projector(n, twice_j)?;
    let d = pi.dim();
    let rank = sector_table(n)?
        .sectors
        .iter()
        .find(|s| s.twice_j == twice_j)
        .map(|s| s.sector_trace as usize)
        .unwrap();
    let m = pi.matrix();
    let mut residual: Vec<f64> = (0..d).map(|i| m[[i, i]].re).collect();
    let mut basis = CMat::zeros((d, rank));
    for col in 0..rank {
        let (pivot, &best) = residual
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap();
        if best < 1e-10 {
            return Err(Error::Internal(format!(
                "sector basis rank deficit: {col} of {rank} columns found"
            )));
        }
        let mut v: Vec<Complex64> = (0..d).map(|i| m[[i, pivot]]).collect();
        // Two orthogonalization passes keep the basis clean to roundoff.
        for _ in 0..2 {
            for prev in 0..col {
                let mut ip = ZERO;
                for i in 0..d {
                    ip += basis[[i, prev]].conj() * v[i];
                }
                for i in 0..d {
                    let b = basis[[i, prev]];
                    v[i] -= ip * b;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..d {
            basis[[i, col]] = v[i] / norm;
            residual[i] = (residual[i] - basis[[i, col]].norm_sqr()).max(0.0);
        }
    }
    Ok(basis)
}

/// Restriction of a rotationally symmetric operator to one sector, in the
/// deterministic sector basis. Rejects non-symmetric input, reporting how
/// badly the collective-spin commutator is violated.
pub fn sector_block(v: &Operator, twice_j: usize) -> Result<CMat> {
    let norm = symmetry_residual(v);
    let tol = 1e-8 * v.max_abs().max(1.0);
    if norm >= tol {
        return Err(Error::NotSymmetric { norm, tol });
    }
    let basis = sector_basis(v.n(), twice_j)?;
    let bdag = basis.t().mapv(|z| z.conj());
    Ok(bdag.dot(v.matrix()).dot(&basis))
}
