//! Realizability of symmetric Hamiltonians under few-body symmetric couplings.
//!
//! Couplings acting on at most k sites can change a symmetric Hamiltonian
//! only inside the subspace orthogonal to the invariant basis elements of
//! grade above 2*floor(k/2). A target is reachable exactly when its overlaps
//! with those high grades vanish; the overlaps with the low grades fix the
//! per-sector average energies that any k-body realization must reproduce.

use crate::cl_basis::{cl_operator, cl_table};
use crate::error::{Error, Result};
use crate::linalg::solve_real;
use crate::operator::{hs_inner, pauli_weight_components, Operator};
use crate::sectors::{casimir_value, charge_vector, sector_table, symmetry_residual, ChargeVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::fmt;

fn require_symmetric(h: &Operator) -> Result<()> {
    let norm = symmetry_residual(h);
    let tol = 1e-8 * h.max_abs().max(1.0);
    if norm >= tol {
        return Err(Error::NotSymmetric { norm, tol });
    }
    Ok(())
}

fn require_hermitian(h: &Operator) -> Result<()> {
    let residual = h.hermiticity_residual();
    if residual >= 1e-8 * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RealizabilityReport {
    pub n: usize,
    pub k: usize,
    pub tol: f64,
    pub charge: ChargeVector,
    /// (l, Tr(H C_l)) for every grade above the reachable range.
    pub obstructions: Vec<(usize, f64)>,
    /// Grades whose obstruction sits within a decade of the tolerance;
    /// the verdict already counts them as violations.
    pub indeterminate: Vec<usize>,
    pub verdict: bool,
    /// Expansion coefficients q_l over the full graded basis.
    pub q: Vec<(usize, f64)>,
    /// Frobenius norm of the part orthogonal to every sector projector.
    pub h0_norm: f64,
}

impl fmt::Display for RealizabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "register n={}, coupling locality k={}", self.n, self.k)?;
        write!(f, "charge vector:")?;
        for (t, v) in &self.charge.entries {
            write!(f, " [2j={t}] {v:+.6e}")?;
        }
        writeln!(f)?;
        writeln!(f, "within-sector remainder norm: {:.6e}", self.h0_norm)?;
        if self.obstructions.is_empty() {
            writeln!(f, "no grades above the reachable range")?;
        }
        for (l, v) in &self.obstructions {
            let status = if v.abs() < self.tol {
                "ok"
            } else if self.indeterminate.contains(l) {
                "indeterminate"
            } else {
                "violated"
            };
            writeln!(
                f,
                "obstruction grade {l}: {v:+.6e} (tolerance {:.3e}) {status}",
                self.tol
            )?;
        }
        write!(
            f,
            "verdict: {}",
            if self.verdict { "realizable" } else { "obstructed" }
        )
    }
}

/// Decides whether k-site symmetric couplings can generate evolution under h.
///
/// Default tolerance scales with the Frobenius norm of h. Below k = 2 only
/// global phases are available, so the verdict degenerates to h being a real
/// multiple of the identity.
pub fn check_realizable(h: &Operator, k: usize, tol: Option<f64>) -> Result<RealizabilityReport> {
    require_hermitian(h)?;
    require_symmetric(h)?;
    let n = h.n();
    let tol = tol.unwrap_or(1e-8 * h.frobenius_norm().max(f64::MIN_POSITIVE));
    let table = cl_table(n)?;
    let reachable = 2 * (k / 2);
    let mut obstructions = Vec::new();
    let mut indeterminate = Vec::new();
    let mut q = Vec::new();
    for row in &table.rows {
        let overlap = hs_inner(&cl_operator(n, row.l)?, h).re;
        q.push((row.l, overlap / row.norm as f64));
        if row.l > reachable {
            obstructions.push((row.l, overlap));
            if overlap.abs() >= tol && overlap.abs() < 10.0 * tol {
                indeterminate.push(row.l);
            }
        }
    }
    let verdict = if k < 2 {
        let mean = h.trace().re / h.dim() as f64;
        h.sub(&Operator::identity(n)?.scale_re(mean)).frobenius_norm() < tol
    } else {
        obstructions.iter().all(|&(_, v)| v.abs() < tol)
    };
    let (h0, _) = decompose(h)?;
    Ok(RealizabilityReport {
        n,
        k,
        tol,
        charge: charge_vector(h)?,
        obstructions,
        indeterminate,
        verdict,
        q: q.clone(),
        h0_norm: h0.frobenius_norm(),
    })
}

/// Splits a symmetric Hamiltonian into the part with vanishing sector traces
/// and its expansion over the graded basis: h = h0 + sum_l q_l C_l.
pub fn decompose(h: &Operator) -> Result<(Operator, Vec<(usize, f64)>)> {
    require_symmetric(h)?;
    let n = h.n();
    let table = cl_table(n)?;
    let mut q = Vec::new();
    let mut rest = h.clone();
    for row in &table.rows {
        let c = cl_operator(n, row.l)?;
        let coeff = hs_inner(&c, h).re / row.norm as f64;
        rest = rest.sub(&c.scale_re(coeff));
        q.push((row.l, coeff));
    }
    Ok((rest, q))
}

#[derive(Clone, Debug)]
pub struct EnergyTable {
    pub n: usize,
    /// (twice_j, average energy over the sector).
    pub entries: Vec<(usize, f64)>,
}

/// Average energy per sector. Works for symmetry-broken h as well: the
/// averages only see the symmetric component.
pub fn average_energies(h: &Operator) -> Result<EnergyTable> {
    let n = h.n();
    let table = sector_table(n)?;
    let charge = charge_vector(h)?;
    let entries = charge
        .entries
        .iter()
        .zip(table.sectors.iter())
        .map(|(&(t, tr), info)| (t, tr / info.sector_trace as f64))
        .collect();
    Ok(EnergyTable { n, entries })
}

/// Least-squares fit of the sector energies by a polynomial in j(j+1) of
/// degree floor(k/2). A k-body realizable Hamiltonian fits exactly.
/// Returns (coefficients ascending, max absolute residual).
pub fn fit_energy_polynomial(table: &EnergyTable, k: usize) -> Result<(Vec<f64>, f64)> {
    let degree = k / 2;
    let max = table.n / 2;
    if degree > max {
        return Err(Error::DegreeTooLarge {
            degree,
            max,
            n: table.n,
        });
    }
    let points: Vec<(f64, f64)> = table
        .entries
        .iter()
        .map(|&(t, e)| (casimir_value(t), e))
        .collect();
    let dim = degree + 1;
    let mut normal = ndarray::Array2::<f64>::zeros((dim, dim));
    let mut rhs = vec![0.0; dim];
    for &(a, y) in &points {
        let mut powers = vec![1.0; dim];
        for p in 1..dim {
            powers[p] = powers[p - 1] * a;
        }
        for i in 0..dim {
            rhs[i] += powers[i] * y;
            for j in 0..dim {
                normal[[i, j]] += powers[i] * powers[j];
            }
        }
    }
    let coeffs = solve_real(&normal, &rhs);
    let mut residual = 0.0_f64;
    for &(a, y) in &points {
        let mut fit = 0.0;
        let mut power = 1.0;
        for c in &coeffs {
            fit += c * power;
            power *= a;
        }
        residual = residual.max((fit - y).abs());
    }
    Ok((coeffs, residual))
}

/// Swap between the front and back halves under the pairing
/// (1,2)(3,4)...(n-1,n): site 2i-1 trades places with site 2i.
pub fn swap_hamiltonian(n: usize) -> Result<Operator> {
    if n % 2 != 0 {
        return Err(Error::EvenQubitsRequired { n });
    }
    let mut op = Operator::zero(n)?;
    let dim = op.dim();
    let m = op.matrix_mut();
    for x in 0..dim {
        let mut y = x;
        for i in 1..=(n / 2) {
            y = crate::operator::flip_pair(y, 2 * i - 1, 2 * i, n);
        }
        m[[y, x]] = num_complex::Complex64::new(1.0, 0.0);
    }
    Ok(op)
}

/// Exact overlap of the half-register swap with the grade-l basis element.
/// Strictly positive for every grade in range, which is why no finite-body
/// coupling can generate the swap.
pub fn swap_overlap(n: usize, l: usize) -> Result<i128> {
    if n % 2 != 0 {
        return Err(Error::EvenQubitsRequired { n });
    }
    if l % 2 != 0 {
        return Err(Error::OddBodyLabel { l });
    }
    if l > n {
        return Err(Error::BodyLabelRange { l, n });
    }
    let table = cl_table(n)?;
    let norm = table.row(l).expect("grade in range").norm;
    let fact = |m: usize| -> BigInt {
        let mut acc = BigInt::one();
        for i in 2..=m {
            acc *= BigInt::from(i);
        }
        acc
    };
    let value = BigRational::new(
        fact(n - l) * fact(n / 2) * BigInt::from(norm),
        fact(n) * fact(n / 2 - l / 2) * (BigInt::one() << ((n - l) / 2)),
    );
    if !value.is_integer() || !value.is_positive() {
        return Err(Error::Internal(format!(
            "swap overlap n={n} l={l} evaluated to {value}"
        )));
    }
    value
        .to_integer()
        .to_i128()
        .ok_or_else(|| Error::Internal("swap overlap exceeds integer range".into()))
}

/// True when h is a combination of odd-site-count Pauli strings, which makes
/// every sector trace vanish and the Hamiltonian reachable with two-body
/// couplings regardless of its own support size.
pub fn time_reversal_realizable(h: &Operator) -> Result<bool> {
    require_symmetric(h)?;
    let scale = h.max_abs().max(1.0);
    let comps = pauli_weight_components(h);
    for (weight, comp) in comps.iter().enumerate() {
        if weight % 2 == 0 && comp.max_abs() >= 1e-10 * scale {
            return Ok(false);
        }
    }
    Ok(true)
}
