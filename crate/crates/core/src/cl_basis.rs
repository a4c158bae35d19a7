//! The graded orthogonal basis of the invariant operator space.
//!
//! Operators commuting with both global rotations and site permutations form
//! a space spanned by one operator per even body count l. The basis element
//! of grade l is a sum of exchange products over l distinct sites, acts as an
//! integer scalar c_l(j) on each angular momentum sector, and is orthogonal
//! to every operator supported on fewer than l sites. Grade 0 is the
//! identity; grades beyond 2*floor(n/2) vanish identically.
//!
//! Eigenvalue tables are computed in exact rational arithmetic and stored as
//! integers; dense matrices appear only where an operator is actually needed.

use crate::error::{Error, Result};
use crate::operator::{check_qubit_count, flip_pair, Operator};
use crate::sectors::{multiplicity_or_zero, sector_labels, sector_table, validate_sector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn rat(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

fn to_exact_integer(r: &BigRational, context: &str) -> Result<i128> {
    if !r.is_integer() {
        return Err(Error::NonInteger {
            context: context.to_string(),
            found: r.to_string(),
        });
    }
    r.to_integer().to_i128().ok_or_else(|| {
        Error::Internal(format!("{context}: value {r} exceeds the integer range"))
    })
}

/// j(j+1) as an exact rational, from the doubled sector label.
fn casimir_rational(twice_j: usize) -> BigRational {
    rat((twice_j * (twice_j + 2)) as i128) / rat(4)
}

/// Largest body count with a nonvanishing basis element on n sites.
pub fn max_body_label(n: usize) -> usize {
    2 * (n / 2)
}

fn check_body_label(l: usize) -> Result<()> {
    if l % 2 != 0 {
        return Err(Error::OddBodyLabel { l });
    }
    Ok(())
}

/// Visits every set of `d` disjoint site pairs from {1..n}, each set once,
/// pairs sorted by first element.
fn for_each_pairing<F: FnMut(&[(usize, usize)])>(n: usize, d: usize, f: &mut F) {
    fn recurse<F: FnMut(&[(usize, usize)])>(
        n: usize,
        d: usize,
        start: usize,
        used: &mut u64,
        pairs: &mut Vec<(usize, usize)>,
        f: &mut F,
    ) {
        if pairs.len() == d {
            f(pairs);
            return;
        }
        // Pruning bound: the remaining pairs need 2*(d - len) free sites above r.
        let needed = 2 * (d - pairs.len());
        for r in start..=n.saturating_sub(needed - 1) {
            if *used & (1 << r) != 0 {
                continue;
            }
            for s in (r + 1)..=n {
                if *used & (1 << s) != 0 {
                    continue;
                }
                *used |= (1 << r) | (1 << s);
                pairs.push((r, s));
                recurse(n, d, r + 1, used, pairs, f);
                pairs.pop();
                *used &= !((1 << r) | (1 << s));
            }
        }
    }
    if d == 0 {
        f(&[]);
        return;
    }
    if 2 * d > n {
        return;
    }
    let mut used = 0u64;
    let mut pairs = Vec::with_capacity(d);
    recurse(n, d, 1, &mut used, &mut pairs, f);
}

/// Dense basis element of grade l: the normalized sum of exchange products
/// over sets of l distinct sites. Zero for even l beyond range.
///
/// Expanding each exchange as swap minus half identity turns the sum into
/// signed permutation matrices with dyadic weights, so the entries come out
/// exact without any matrix products.
pub fn cl_operator(n: usize, l: usize) -> Result<Operator> {
    check_qubit_count(n)?;
    check_body_label(l)?;
    let mut op = Operator::zero(n)?;
    if l > max_body_label(n) {
        return Ok(op);
    }
    let d = l / 2;
    let dim = op.dim();
    let m = op.matrix_mut();
    for_each_pairing(n, d, &mut |pairs| {
        for mask in 0..(1u32 << d) {
            let chosen = mask.count_ones() as usize;
            let sign = if (d - chosen) % 2 == 0 { 1.0 } else { -1.0 };
            let coeff = Complex64::new(sign * (1u64 << chosen) as f64, 0.0);
            for x in 0..dim {
                let mut y = x;
                for (k, &(r, s)) in pairs.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        y = flip_pair(y, r, s, n);
                    }
                }
                m[[y, x]] += coeff;
            }
        }
    });
    Ok(op)
}

/// Sector eigenvalue of the grade-l basis element, as an exact integer.
/// The alternating sum over pair contractions reduces the eigenvalue to
/// multiplicity ratios; out-of-range multiplicities count as zero.
pub fn cl_eigenvalue_closed_form(n: usize, l: usize, twice_j: usize) -> Result<i128> {
    check_body_label(l)?;
    validate_sector(n, twice_j)?;
    if l > max_body_label(n) {
        return Ok(0);
    }
    let d = l / 2;
    let prefactor = BigRational::new(
        factorial(n),
        factorial(n - l) * BigInt::from(1i128 << d) * factorial(d),
    );
    let m_full = multiplicity_or_zero(n as i64, twice_j as i64);
    let mut sum = BigRational::zero();
    for r in 0..=d {
        let m_r = multiplicity_or_zero(n as i64 - 2 * r as i64, twice_j as i64);
        let binom = crate::sectors::binomial(d, r);
        let sign = rat((-4i128).pow(r as u32));
        sum += sign * rat(binom) * rat(m_r);
    }
    let value = prefactor * sum / rat(m_full);
    to_exact_integer(
        &value,
        &format!("sector eigenvalue n={n} l={l} twice_j={twice_j}"),
    )
}

/// Eigenvalues of all basis grades on one sector, by the three-term
/// recursion upward in l. Entry i holds the value for l = 2i.
fn cl_eigenvalues_recursive_for_sector(n: usize, twice_j: usize) -> Vec<BigRational> {
    let a = casimir_rational(twice_j);
    let two_a = &a * rat(2);
    let l_max = max_body_label(n);
    let mut vals = Vec::with_capacity(l_max / 2 + 1);
    vals.push(BigRational::one());
    if l_max == 0 {
        return vals;
    }
    vals.push(&two_a - rat(3 * n as i128) / rat(2));
    for l in (2..l_max).step_by(2) {
        let linear = &two_a - rat((l * (n - l - 1)) as i128) - rat(3 * n as i128) / rat(2);
        let pair_count = rat(crate::sectors::binomial(n - l + 2, 2));
        let next = (linear * &vals[l / 2] - rat((l + 1) as i128) * pair_count * &vals[l / 2 - 1])
            / rat((l / 2 + 1) as i128);
        vals.push(next);
    }
    vals
}

/// One grade of the eigenvalue table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClRow {
    pub l: usize,
    /// c_l(j) per sector, ascending twice_j.
    pub eigenvalues: Vec<i128>,
    /// Squared Frobenius norm of the basis element, an exact integer.
    pub norm: i128,
    /// Coefficients of 2^{l/2}(l/2)! c_l as a polynomial in a = j(j+1),
    /// ascending degree; length l/2 + 1, leading coefficient 2^l.
    pub poly: Vec<i128>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClTable {
    pub n: usize,
    pub rows: Vec<ClRow>,
}

impl ClTable {
    pub fn row(&self, l: usize) -> Option<&ClRow> {
        self.rows.iter().find(|r| r.l == l)
    }

    pub fn eigenvalue(&self, l: usize, twice_j: usize) -> Option<i128> {
        let idx = sector_labels(self.n).iter().position(|&t| t == twice_j)?;
        self.row(l).map(|r| r.eigenvalues[idx])
    }
}

fn assemble_table(n: usize, eigs_by_sector: Vec<Vec<BigRational>>) -> Result<ClTable> {
    let table = sector_table(n)?;
    let l_max = max_body_label(n);
    let mut rows = Vec::new();
    for l in (0..=l_max).step_by(2) {
        let mut eigenvalues = Vec::with_capacity(eigs_by_sector.len());
        let mut norm: i128 = 0;
        for (idx, info) in table.sectors.iter().enumerate() {
            let c = to_exact_integer(
                &eigs_by_sector[idx][l / 2],
                &format!("table entry n={n} l={l} twice_j={}", info.twice_j),
            )?;
            norm += info.sector_trace * c * c;
            eigenvalues.push(c);
        }
        let poly = fit_scaled_polynomial(n, l, &eigenvalues)?;
        rows.push(ClRow {
            l,
            eigenvalues,
            norm,
            poly,
        });
    }
    Ok(ClTable { n, rows })
}

/// Full eigenvalue table via the closed form.
pub fn cl_table(n: usize) -> Result<ClTable> {
    let labels = sector_labels(n);
    let l_max = max_body_label(n);
    let mut eigs = Vec::with_capacity(labels.len());
    for &t in &labels {
        let per_sector = (0..=l_max)
            .step_by(2)
            .map(|l| Ok(rat(cl_eigenvalue_closed_form(n, l, t)?)))
            .collect::<Result<Vec<_>>>()?;
        eigs.push(per_sector);
    }
    assemble_table(n, eigs)
}

/// Full eigenvalue table via the upward recursion; an independent route
/// that must agree with the closed form.
pub fn cl_table_recursive(n: usize) -> Result<ClTable> {
    let eigs = sector_labels(n)
        .into_iter()
        .map(|t| cl_eigenvalues_recursive_for_sector(n, t))
        .collect();
    assemble_table(n, eigs)
}

/// Exact-fit coefficients of 2^{l/2}(l/2)! c_l as a polynomial in a = j(j+1).
/// Fits through the lowest sectors and checks the rest, so a wrong degree
/// surfaces as an error instead of a silent bad fit.
pub fn cl_polynomial(n: usize, l: usize) -> Result<Vec<i128>> {
    check_body_label(l)?;
    if l > max_body_label(n) {
        return Err(Error::BodyLabelRange { l, n });
    }
    let labels = sector_labels(n);
    let eigenvalues = labels
        .iter()
        .map(|&t| cl_eigenvalue_closed_form(n, l, t))
        .collect::<Result<Vec<_>>>()?;
    fit_scaled_polynomial(n, l, &eigenvalues)
}

fn fit_scaled_polynomial(n: usize, l: usize, eigenvalues: &[i128]) -> Result<Vec<i128>> {
    let d = l / 2;
    let scale = BigRational::from_integer(BigInt::from(1i128 << d) * factorial(d));
    let labels = sector_labels(n);
    let points: Vec<(BigRational, BigRational)> = labels
        .iter()
        .zip(eigenvalues)
        .map(|(&t, &c)| (casimir_rational(t), &scale * rat(c)))
        .collect();
    debug_assert!(points.len() > d, "sector count bounds the degree");
    // Lagrange interpolation through the first d+1 sectors.
    let mut coeffs = vec![BigRational::zero(); d + 1];
    for i in 0..=d {
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for k in 0..=d {
            if k == i {
                continue;
            }
            // Multiply the basis polynomial by (x - a_k).
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (deg, c) in basis.iter().enumerate() {
                next[deg + 1] += c;
                next[deg] -= c * &points[k].0;
            }
            basis = next;
            denom *= &points[i].0 - &points[k].0;
        }
        let weight = &points[i].1 / denom;
        for (deg, c) in basis.iter().enumerate() {
            coeffs[deg] += c * &weight;
        }
    }
    // The remaining sectors must lie on the same polynomial exactly.
    for (x, y) in points.iter().skip(d + 1) {
        let mut acc = BigRational::zero();
        let mut power = BigRational::one();
        for c in &coeffs {
            acc += c * &power;
            power *= x;
        }
        if &acc != y {
            return Err(Error::Internal(format!(
                "degree {d} fit misses a sector for n={n} l={l}"
            )));
        }
    }
    coeffs
        .iter()
        .enumerate()
        .map(|(deg, c)| to_exact_integer(c, &format!("poly coeff a^{deg} n={n} l={l}")))
        .collect()
}

/// Basis element normalized by its squared norm, so traces against it read
/// off expansion coefficients directly.
pub fn dl_operator(n: usize, l: usize) -> Result<Operator> {
    check_body_label(l)?;
    if l < 2 || l > max_body_label(n) {
        return Err(Error::BodyLabelRange { l, n });
    }
    let table = sector_table(n)?;
    let mut norm: i128 = 0;
    for info in &table.sectors {
        let c = cl_eigenvalue_closed_form(n, l, info.twice_j)?;
        norm += info.sector_trace * c * c;
    }
    Ok(cl_operator(n, l)?.scale_re(1.0 / norm as f64))
}

/// Sum of swap products over sets of m distinct sites, together with its
/// expansion over the graded basis. The expansion mixes all grades up to m
/// because a swap is an exchange plus half the identity.
pub fn bm_operator(n: usize, m: usize) -> Result<(Operator, Vec<(usize, f64)>)> {
    check_qubit_count(n)?;
    check_body_label(m)?;
    if m < 2 || m > max_body_label(n) {
        return Err(Error::BodyLabelRange { l: m, n });
    }
    let d = m / 2;
    let mut op = Operator::zero(n)?;
    let dim = op.dim();
    let weight = Complex64::new((1u64 << d) as f64, 0.0);
    {
        let mat = op.matrix_mut();
        for_each_pairing(n, d, &mut |pairs| {
            for x in 0..dim {
                let mut y = x;
                for &(r, s) in pairs {
                    y = flip_pair(y, r, s, n);
                }
                mat[[y, x]] += weight;
            }
        });
    }
    let mut expansion = Vec::new();
    for l in (0..=m).step_by(2) {
        // 2^{(l-m)/2} (n-l)! / ((n-m)! (m/2 - l/2)!)
        let coeff = BigRational::new(
            factorial(n - l),
            factorial(n - m) * factorial((m - l) / 2) * BigInt::from(1i128 << ((m - l) / 2)),
        );
        expansion.push((l, coeff.to_f64().unwrap()));
    }
    Ok((op, expansion))
}
