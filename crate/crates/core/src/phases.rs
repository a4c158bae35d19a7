//! Sector phases and few-body phases of symmetric unitaries.
//!
//! A symmetric unitary carries one determinant phase per angular-momentum
//! sector. Recombining those with the integer invariant-basis eigenvalues
//! gives phases labelled by body count, which are well-defined mod 2pi,
//! observable for labels >= 2, and obstruct realizability by couplings of
//! fewer sites. The same phases arrive through a Hamiltonian path integral,
//! which is what makes them path-independent invariants of the unitary.

use crate::cl_basis::{cl_table, max_body_label, ClTable};
use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianSpec, Term};
use crate::linalg::{arg_det_unitary, expm_hermitian, wrap_angle};
use crate::operator::{hs_inner, Operator};
use crate::sectors::{multiplicity, sector_block, sector_labels, symmetry_residual};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct PhaseVector {
    pub n: usize,
    /// (twice_j, theta_j) with theta in (-pi, pi], ascending twice_j.
    pub theta: Vec<(usize, f64)>,
    /// (l, phi_l) with phi in (-pi, pi], even l ascending from 0.
    pub phi: Vec<(usize, f64)>,
}

impl PhaseVector {
    pub fn theta_at(&self, twice_j: usize) -> Option<f64> {
        self.theta
            .iter()
            .find(|&&(tj, _)| tj == twice_j)
            .map(|&(_, v)| v)
    }

    /// Body-phase lookup; labels beyond the defined range read as zero.
    pub fn phi_at(&self, l: usize) -> f64 {
        self.phi
            .iter()
            .find(|&&(ll, _)| ll == l)
            .map_or(0.0, |&(_, v)| v)
    }
}

fn require_symmetric_unitary(v: &Operator) -> Result<()> {
    let scale = v.max_abs().max(1.0);
    let sym = symmetry_residual(v);
    if sym >= 1e-8 * scale {
        return Err(Error::NotSymmetric {
            norm: sym,
            tol: 1e-8 * scale,
        });
    }
    let uni = v.unitarity_residual();
    if uni >= 1e-8 {
        return Err(Error::NotUnitary { residual: uni });
    }
    Ok(())
}

/// Determinant phase of each sector block, principal value.
pub fn sector_phases(v: &Operator) -> Result<Vec<(usize, f64)>> {
    require_symmetric_unitary(v)?;
    sector_labels(v.n())
        .into_iter()
        .map(|tj| Ok((tj, arg_det_unitary(&sector_block(v, tj)?))))
        .collect()
}

fn phi_from_theta(theta: &[(usize, f64)], table: &ClTable) -> Vec<(usize, f64)> {
    let mut phi = Vec::new();
    for row in &table.rows {
        // Integer eigenvalues make the combination well-defined mod 2pi even
        // though each theta is only known mod 2pi.
        let mut total = 0.0_f64;
        for (&(tj, th), &c) in theta.iter().zip(row.eigenvalues.iter()) {
            debug_assert!(table.eigenvalue(row.l, tj) == Some(c));
            total += c as f64 * th;
        }
        phi.push((row.l, wrap_angle(total)));
    }
    phi
}

/// Body phases of a symmetric unitary, from its sector determinants.
pub fn lbody_phases(v: &Operator) -> Result<PhaseVector> {
    let theta = sector_phases(v)?;
    let table = cl_table(v.n())?;
    let phi = phi_from_theta(&theta, &table);
    Ok(PhaseVector {
        n: v.n(),
        theta,
        phi,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PathSegment {
    pub duration: f64,
    /// Exchange-monomial terms, same shape as in a Hamiltonian spec.
    pub terms: Vec<Term>,
}

/// Piecewise-constant Hamiltonian schedule.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PiecewisePath {
    pub n: usize,
    pub segments: Vec<PathSegment>,
}

impl PiecewisePath {
    pub fn from_json(text: &str) -> Result<Self> {
        let path: PiecewisePath = serde_json::from_str(text)?;
        path.validate()?;
        Ok(path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("path serializes")
    }

    pub fn validate(&self) -> Result<()> {
        for (i, seg) in self.segments.iter().enumerate() {
            if !(seg.duration > 0.0) || !seg.duration.is_finite() {
                return Err(Error::InvalidSegment {
                    segment: i,
                    msg: format!("duration {} must be positive and finite", seg.duration),
                });
            }
            HamiltonianSpec::new(self.n, seg.terms.clone()).map_err(|e| {
                Error::InvalidSegment {
                    segment: i,
                    msg: e.to_string(),
                }
            })?;
        }
        Ok(())
    }

    /// Dense (duration, Hamiltonian) schedule.
    pub fn schedule(&self) -> Result<Vec<(f64, Operator)>> {
        self.validate()?;
        self.segments
            .iter()
            .map(|seg| {
                let h = HamiltonianSpec::new(self.n, seg.terms.clone())?.build()?;
                Ok((seg.duration, h))
            })
            .collect()
    }

    /// Time-ordered unitary: the first segment acts first.
    pub fn unitary(&self) -> Result<Operator> {
        let mut v = Operator::identity(self.n)?;
        for (t, h) in self.schedule()? {
            v = expm_hermitian(&h, t).mul(&v);
        }
        Ok(v)
    }
}

/// Body phases accumulated along a schedule of symmetric Hamiltonians:
/// minus the time integral of the overlap with each invariant basis element,
/// reduced mod 2pi. Matches the phases of the composed unitary.
pub fn lbody_phases_from_schedule(n: usize, schedule: &[(f64, Operator)]) -> Result<PhaseVector> {
    let table = cl_table(n)?;
    let labels = sector_labels(n);
    let mut theta_raw = vec![0.0_f64; labels.len()];
    let mut phi_raw = vec![0.0_f64; table.rows.len()];
    for (i, (t, h)) in schedule.iter().enumerate() {
        if h.n() != n {
            return Err(Error::InvalidSegment {
                segment: i,
                msg: format!("segment acts on {} qubits, path declares {n}", h.n()),
            });
        }
        let scale = h.max_abs().max(1.0);
        let sym = symmetry_residual(h);
        if sym >= 1e-8 * scale {
            return Err(Error::InvalidSegment {
                segment: i,
                msg: format!("segment Hamiltonian is not symmetric: residual {sym:.3e}"),
            });
        }
        let herm = h.hermiticity_residual();
        if herm >= 1e-8 * scale {
            return Err(Error::InvalidSegment {
                segment: i,
                msg: format!("segment Hamiltonian is not Hermitian: residual {herm:.3e}"),
            });
        }
        for (slot, &tj) in theta_raw.iter_mut().zip(labels.iter()) {
            let proj = crate::sectors::sector_projector(n, tj)?;
            *slot -= t * hs_inner(&proj, h).re;
        }
        for (slot, row) in phi_raw.iter_mut().zip(table.rows.iter()) {
            let cl = crate::cl_basis::cl_operator(n, row.l)?;
            *slot -= t * hs_inner(&cl, h).re;
        }
    }
    let theta: Vec<(usize, f64)> = labels
        .into_iter()
        .zip(theta_raw)
        .map(|(tj, th)| (tj, wrap_angle(th)))
        .collect();
    let phi: Vec<(usize, f64)> = table
        .rows
        .iter()
        .zip(phi_raw)
        .map(|(row, ph)| (row.l, wrap_angle(ph)))
        .collect();
    Ok(PhaseVector {
        n,
        theta,
        phi,
    })
}

/// Body phases of a schedule given as a path description.
pub fn lbody_phases_from_path(path: &PiecewisePath) -> Result<PhaseVector> {
    lbody_phases_from_schedule(path.n, &path.schedule()?)
}

/// Body phases of a tensor product from the factors' phases: each side is
/// amplified by the other side's Hilbert-space dimension. Labels beyond a
/// factor's range contribute zero.
pub fn compose_phases(
    phi_a: &[(usize, f64)],
    n_a: usize,
    phi_b: &[(usize, f64)],
    n_b: usize,
) -> Vec<(usize, f64)> {
    let read = |phi: &[(usize, f64)], l: usize| -> f64 {
        phi.iter()
            .find(|&&(ll, _)| ll == l)
            .map_or(0.0, |&(_, v)| v)
    };
    let weight_a = (1u64 << n_b) as f64;
    let weight_b = (1u64 << n_a) as f64;
    (0..=max_body_label(n_a + n_b))
        .step_by(2)
        .map(|l| {
            (
                l,
                wrap_angle(weight_a * read(phi_a, l) + weight_b * read(phi_b, l)),
            )
        })
        .collect()
}

/// Certifies (up to a fixed finite group) realizability by couplings on at
/// most k sites: all body phases above k must vanish mod 2pi. Returns the
/// verdict and the violating (l, phase) pairs.
pub fn k_locality_certificate(
    v: &Operator,
    k: usize,
    tol: f64,
) -> Result<(bool, Vec<(usize, f64)>)> {
    let phases = lbody_phases(v)?;
    let violations: Vec<(usize, f64)> = phases
        .phi
        .iter()
        .filter(|&&(l, ph)| l > k && ph.abs() >= tol)
        .copied()
        .collect();
    Ok((violations.is_empty(), violations))
}

/// Weights Tr(D_l Pi_j) of the inverse coordinate change, exact rationals
/// evaluated in doubles: rows indexed by sector, columns by body label.
pub fn recovery_weights(n: usize) -> Result<Vec<Vec<f64>>> {
    let table = cl_table(n)?;
    sector_labels(n)
        .into_iter()
        .map(|tj| {
            let sector_trace = (tj as i128 + 1) * multiplicity(n, tj)?;
            table
                .rows
                .iter()
                .map(|row| {
                    let c = table.eigenvalue(row.l, tj).expect("sector in table");
                    Ok((c * sector_trace) as f64 / row.norm as f64)
                })
                .collect()
        })
        .collect()
}

/// Searches integer offsets r_l in [-radius, radius] such that every sector
/// phase is reproduced from the body phases as
/// theta_j = sum_l Tr(D_l Pi_j) (phi_l + 2 pi r_l) mod 2pi.
/// Returns the offsets if some choice works for all sectors at once.
pub fn recover_sector_phases(
    theta: &[(usize, f64)],
    phi: &[(usize, f64)],
    n: usize,
    radius: i64,
    tol: f64,
) -> Result<Option<Vec<i64>>> {
    let weights = recovery_weights(n)?;
    let count = phi.len();
    assert_eq!(weights.first().map_or(0, |w| w.len()), count);
    assert_eq!(weights.len(), theta.len());
    let span = (2 * radius + 1) as usize;
    let total = span.pow(count as u32);
    let tau = std::f64::consts::TAU;
    'combo: for code in 0..total {
        let mut rest = code;
        let mut offsets = Vec::with_capacity(count);
        for _ in 0..count {
            offsets.push((rest % span) as i64 - radius);
            rest /= span;
        }
        for (w_row, &(_, th)) in weights.iter().zip(theta.iter()) {
            let mut acc = 0.0_f64;
            for ((w, &(_, ph)), &r) in w_row.iter().zip(phi.iter()).zip(offsets.iter()) {
                acc += w * (ph + tau * r as f64);
            }
            if wrap_angle(acc - th).abs() >= tol {
                continue 'combo;
            }
        }
        return Ok(Some(offsets));
    }
    Ok(None)
}
