//! Two-ancilla liftings that realize higher-body symmetric Hamiltonians with
//! pairwise exchange couplings alone.
//!
//! The device is always the same: append two qubits, couple through the
//! combination (F R_{rs})⊗I − F⊗R_ab, and prepare the ancillas in a triplet
//! state. The ancilla factor I/2 − R_ab annihilates the triplet subspace, so
//! the unwanted half of each pair never acts on triplet-prepared states while
//! the trace obstructions of the coupled pair cancel against each other.

use crate::cl_basis::{cl_operator, max_body_label};
use crate::constraints::decompose;
use crate::error::{Error, Result};
use crate::lie::{closure_for, contains, LieBasis};
use crate::linalg::expm_hermitian;
use crate::operator::{
    commutator, exchange_op, permute_all, Operator, MAX_DENSE_QUBITS,
};
use crate::sectors::symmetry_residual;
use num_complex::Complex64;

/// Number of ancilla qubits appended by every lift.
const ANCILLAS: usize = 2;

/// Largest lifted system for which `synthesize` builds its own closure basis.
const AUTO_CLOSURE_QUBITS: usize = 6;

fn require_symmetric(a: &Operator) -> Result<()> {
    let scale = a.max_abs().max(1.0);
    let tol = 1e-8 * scale;
    let norm = symmetry_residual(a);
    if norm > tol {
        return Err(Error::NotSymmetric { norm, tol });
    }
    Ok(())
}

fn require_hermitian(a: &Operator) -> Result<()> {
    let residual = a.hermiticity_residual();
    if residual > 1e-8 * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

fn check_body_label(n: usize, l: usize) -> Result<()> {
    if l % 2 != 0 {
        return Err(Error::OddBodyLabel { l });
    }
    if l < 2 || l > max_body_label(n) {
        return Err(Error::BodyLabelRange { l, n });
    }
    Ok(())
}

fn check_site(site: usize, n: usize) -> Result<()> {
    if site == 0 || site > n {
        return Err(Error::IndexOutOfRange { index: site, n });
    }
    Ok(())
}

/// Exchange acting on the two ancillas alone, as a two-qubit operator ready
/// to tensor onto a system operator.
fn ancilla_exchange() -> Operator {
    exchange_op(2, 1, 2).expect("two-qubit exchange")
}

fn identity_pair() -> Operator {
    Operator::identity(2).expect("two-qubit identity")
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Product of exchanges over the leading disjoint pairs:
/// R_{12} R_{34} ... R_{l-1,l}.
pub fn q_monomial(n: usize, l: usize) -> Result<Operator> {
    check_body_label(n, l)?;
    let mut product = Operator::identity(n)?;
    for left in (1..l).step_by(2) {
        product = product.mul(&exchange_op(n, left, left + 1)?);
    }
    Ok(product)
}

/// Lift of the monomial Q_l onto n+2 qubits:
/// 2^{-l/2} [ 2 Q_2⊗I + sum_{s=4,6,..,l} 2^{s/2} (Q_s⊗I − Q_{s-2}⊗R_ab) ].
///
/// The sum telescopes on any state with the ancillas in the triplet
/// subspace, leaving Q_l alone on the system.
pub fn q_tilde(n: usize, l: usize) -> Result<Operator> {
    check_body_label(n, l)?;
    if n + ANCILLAS > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n: n + ANCILLAS,
            cap: MAX_DENSE_QUBITS,
        });
    }
    let eye = identity_pair();
    let rab = ancilla_exchange();
    let mut acc = q_monomial(n, 2)?.tensor(&eye)?.scale_re(2.0);
    for s in (4..=l).step_by(2) {
        let paired = q_monomial(n, s)?
            .tensor(&eye)?
            .sub(&q_monomial(n, s - 2)?.tensor(&rab)?);
        acc = acc.add(&paired.scale_re((s as f64 / 2.0).exp2()));
    }
    Ok(acc.scale_re((-(l as f64) / 2.0).exp2()))
}

/// Conjugates by the permutation of the leading `perm.len()` sites; trailing
/// sites are untouched. Index remap, no matrix product.
fn conjugate_by_system_perm(a: &Operator, perm: &[usize]) -> Operator {
    let n_tot = a.n();
    let m = perm.len();
    let d = a.dim();
    let tail_mask = (1usize << (n_tot - m)) - 1;
    let mut map = vec![0usize; d];
    for (b, slot) in map.iter_mut().enumerate() {
        let mut out = b & tail_mask;
        for site in 1..=m {
            if (b >> (n_tot - site)) & 1 == 1 {
                out |= 1 << (n_tot - perm[site - 1]);
            }
        }
        *slot = out;
    }
    let mut result = Operator::zero(n_tot).expect("dims already validated");
    let src = a.matrix();
    let dst = result.matrix_mut();
    for i in 0..d {
        for j in 0..d {
            dst[[map[i], map[j]]] = src[[i, j]];
        }
    }
    result
}

/// Symmetrized lift whose triplet block is the full graded basis element:
/// E_l = n! / ((n-l)! (l/2)!) times the average of Q_l's lift over all
/// system-site permutations.
pub fn e_tilde(n: usize, l: usize) -> Result<Operator> {
    check_body_label(n, l)?;
    if n <= 6 {
        e_tilde_by_average(n, l)
    } else {
        e_tilde_closed_form(n, l)
    }
}

/// Direct permutation average; exact but costs n! conjugations.
pub(crate) fn e_tilde_by_average(n: usize, l: usize) -> Result<Operator> {
    let lifted = q_tilde(n, l)?;
    let mut sum = Operator::zero(n + ANCILLAS)?;
    let mut labels: Vec<usize> = (1..=n).collect();
    permute_all(&mut labels, 0, &mut |perm| {
        sum = sum.add(&conjugate_by_system_perm(&lifted, perm));
    });
    Ok(sum.scale_re(1.0 / (factorial(n - l) * factorial(l / 2))))
}

/// Same operator assembled from the graded basis directly. The permutation
/// orbit of each monomial Q_r is the pairing sum C_r / 2^{r/2}, counted with
/// stabilizer multiplicity (n-r)! (r/2)! 2^{r/2}, which gives
/// E_l = C_l⊗I + sum_r kappa_r C_r⊗(I/2 − R_ab) with
/// kappa_r = 2^{1+(r-l)/2} (n-r)! (r/2)! / ((n-l)! (l/2)!).
pub(crate) fn e_tilde_closed_form(n: usize, l: usize) -> Result<Operator> {
    if n + ANCILLAS > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n: n + ANCILLAS,
            cap: MAX_DENSE_QUBITS,
        });
    }
    let eye = identity_pair();
    let coupler = eye.scale_re(0.5).sub(&ancilla_exchange());
    let mut acc = cl_operator(n, l)?.tensor(&eye)?;
    for r in (2..l).step_by(2) {
        let kappa = (1.0 + (r as f64 - l as f64) / 2.0).exp2() * factorial(n - r)
            * factorial(r / 2)
            / (factorial(n - l) * factorial(l / 2));
        acc = acc.add(&cl_operator(n, r)?.tensor(&coupler)?.scale_re(kappa));
    }
    Ok(acc)
}

/// Pairwise lift: (F R_{rs})⊗I − F⊗R_ab on n+2 qubits. On triplet-prepared
/// ancillas this acts as F R_{rs} − F/2; when F does not touch sites r and s,
/// swapping (r,s) with the ancilla pair fixes every sector projector, so the
/// two halves contribute equal sector traces and the lift carries no charge.
pub fn lift_pairwise(f: &Operator, r: usize, s: usize) -> Result<Operator> {
    require_symmetric(f)?;
    let n = f.n();
    check_site(r, n)?;
    check_site(s, n)?;
    if r == s {
        return Err(Error::CoincidentPair { site: r });
    }
    if n + ANCILLAS > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n: n + ANCILLAS,
            cap: MAX_DENSE_QUBITS,
        });
    }
    let coupled = f.mul(&exchange_op(n, r, s)?).tensor(&identity_pair())?;
    Ok(coupled.sub(&f.tensor(&ancilla_exchange())?))
}

/// Worst-case deviation of `big` from acting as `small`⊗(identity on the
/// ancilla state): max over system basis columns of
/// ‖big (psi⊗chi) − (small psi)⊗chi‖_∞, with chi the given two-qubit
/// amplitudes in computational order |00>,|01>,|10>,|11>.
pub fn block_action_residual(
    big: &Operator,
    small: &Operator,
    ancilla_state: &[Complex64; 4],
) -> Result<f64> {
    if big.n() != small.n() + ANCILLAS {
        return Err(Error::DimensionMismatch {
            dim: big.dim(),
            n: small.n() + ANCILLAS,
        });
    }
    let d = small.dim();
    let b = big.matrix();
    let s = small.matrix();
    let mut worst = 0.0f64;
    for j in 0..d {
        for row in 0..4 * d {
            let mut acc = Complex64::new(0.0, 0.0);
            for (a, amp) in ancilla_state.iter().enumerate() {
                if amp.norm_sqr() > 0.0 {
                    acc += amp * b[[row, 4 * j + a]];
                }
            }
            let expected = s[[row >> 2, j]] * ancilla_state[row & 3];
            worst = worst.max((acc - expected).norm());
        }
    }
    Ok(worst)
}

/// Outcome of lifting a symmetric Hamiltonian onto two extra qubits.
#[derive(Clone, Debug)]
pub struct SynthesisResult {
    /// System qubits (the lifted operator acts on n + 2).
    pub n: usize,
    pub h_tilde: Operator,
    /// Deviation from acting as H − Tr(H)/2^n on triplet-prepared ancillas.
    pub block_residual: f64,
    /// Residual of iH-tilde against the two-local closure on n+2 qubits;
    /// absent when no closure basis was available.
    pub membership_residual: Option<f64>,
}

/// Builds the exchange-only lift of a symmetric Hamiltonian:
/// H-tilde = (H − Tr(H)/2^n)⊗I + sum_l q_l (E_l − C_l⊗I), with q_l the
/// graded expansion coefficients of H. Builds a fresh two-local closure for
/// the membership residual when the lifted system is small enough.
pub fn synthesize(h: &Operator) -> Result<SynthesisResult> {
    let basis = if h.n() + ANCILLAS <= AUTO_CLOSURE_QUBITS {
        Some(closure_for(h.n() + ANCILLAS, 2, 1e-9)?)
    } else {
        None
    };
    synthesize_with(h, basis.as_ref())
}

/// Same lift with a caller-supplied closure basis, so repeated syntheses on
/// the same system size can share one basis. The basis must be the two-local
/// closure on n+2 qubits.
pub fn synthesize_with(h: &Operator, basis: Option<&LieBasis>) -> Result<SynthesisResult> {
    require_symmetric(h)?;
    require_hermitian(h)?;
    let n = h.n();
    if n + ANCILLAS > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n: n + ANCILLAS,
            cap: MAX_DENSE_QUBITS,
        });
    }
    let (graded_free, q) = decompose(h)?;
    let mut h_tilde = graded_free.tensor(&identity_pair())?;
    for &(l, coeff) in &q {
        if l == 0 {
            continue;
        }
        h_tilde = h_tilde.add(&e_tilde(n, l)?.scale_re(coeff));
    }
    let trace_shift = h.trace().re / h.dim() as f64;
    let shifted = h.sub(&Operator::identity(n)?.scale_re(trace_shift));
    let block_residual = block_action_residual(
        &h_tilde,
        &shifted,
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )?;
    let membership_residual = match basis {
        Some(basis) => {
            let (_, residual) = contains(basis, &h_tilde.scale(Complex64::new(0.0, 1.0)), 1e-7)?;
            Some(residual)
        }
        None => None,
    };
    Ok(SynthesisResult {
        n,
        h_tilde,
        block_residual,
        membership_residual,
    })
}

/// Deviation of the lifted evolution from the system evolution at time t:
/// exp(−it H-tilde)(psi⊗|00>) against e^{i Tr(H) t / 2^n}(exp(−itH) psi)⊗|00>.
pub fn dynamical_residual(h: &Operator, h_tilde: &Operator, t: f64) -> Result<f64> {
    require_hermitian(h)?;
    let u_small = expm_hermitian(h, t);
    let u_big = expm_hermitian(h_tilde, t);
    let phase = Complex64::new(0.0, h.trace().re / h.dim() as f64 * t).exp();
    block_action_residual(
        &u_big,
        &u_small.scale(phase),
        &[
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    )
}

/// One signed term of a nested-commutator program. Leaves name exchange
/// pairs; the nesting is left-associated, so leaves (p1, p2, p3, ...) denote
/// [[[R_{p1}, R_{p2}], R_{p3}], ...].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProgramTerm {
    pub num: i64,
    pub den: i64,
    pub leaves: Vec<(usize, usize)>,
}

/// Exchange-only recipe for 4(Q_l − R_ab R_34 T_l) on l+2 qubits, with the
/// ancillas as the last two labels and T_l = R_56 ... R_{l-1,l}.
#[derive(Clone, Debug)]
pub struct CommutatorProgram {
    /// Body label of the target monomial; the program acts on l+2 qubits.
    pub l: usize,
    pub terms: Vec<ProgramTerm>,
}

/// Base identity: 4(R_12 R_34 − R_34 R_56) as four nested commutators on six
/// qubits, with (5,6) playing the ancilla pair.
fn base_terms() -> Vec<ProgramTerm> {
    let term = |num: i64, leaves: &[(usize, usize)]| ProgramTerm {
        num,
        den: 1,
        leaves: leaves.to_vec(),
    };
    vec![
        term(-1, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]),
        term(-1, &[(2, 3), (3, 4), (4, 5), (5, 6), (6, 2)]),
        term(-1, &[(1, 3), (3, 2), (2, 4)]),
        term(1, &[(3, 5), (5, 4), (4, 6)]),
    ]
}

/// One recursion step l -> l+2: the previous program is substituted, suitably
/// relabeled, for the first exchange of each base term's innermost
/// commutator. The relabeling sends the previous ancillas to the two least
/// base labels not used by the innermost commutator, where the substituted
/// factors commute with the appended leaves.
fn extend_program(prev: &CommutatorProgram) -> CommutatorProgram {
    let l = prev.l;
    let a = l + 3;
    let b = l + 4;
    // (sign, (r,s,t), appended outer leaves, (u,v)) per base term, with the
    // base labels 5,6 renamed to the new ancillas a,b.
    let skeleton: [(i64, (usize, usize, usize), Vec<(usize, usize)>, (usize, usize)); 4] = [
        (-1, (1, 2, 3), vec![(3, 4), (4, a), (a, 1)], (4, a)),
        (-1, (2, 3, 4), vec![(4, a), (a, b), (b, 2)], (1, a)),
        (-1, (1, 3, 2), vec![(2, 4)], (4, a)),
        (1, (3, a, 4), vec![(4, b)], (1, 2)),
    ];
    let mut terms = Vec::with_capacity(prev.terms.len() * 4);
    for (sign, (r, s, t), outer, (u, v)) in &skeleton {
        let relabel = |site: usize| -> usize {
            match site {
                1 => *r,
                2 => *s,
                x if x == l + 1 => *u,
                x if x == l + 2 => *v,
                x => x + 2,
            }
        };
        for old in &prev.terms {
            let mut leaves: Vec<(usize, usize)> = old
                .leaves
                .iter()
                .map(|&(p, q)| (relabel(p), relabel(q)))
                .collect();
            leaves.push((*s, *t));
            leaves.extend_from_slice(outer);
            terms.push(ProgramTerm {
                num: sign * old.num,
                den: old.den * 4,
                leaves,
            });
        }
    }
    CommutatorProgram { l: l + 2, terms }
}

/// Explicit exchange-only program for 4(Q_l − R_ab R_34 T_l), built
/// recursively from the six-qubit base identity.
pub fn nested_commutator_program(l: usize) -> Result<CommutatorProgram> {
    if l % 2 != 0 {
        return Err(Error::OddBodyLabel { l });
    }
    if l < 4 {
        return Err(Error::ProgramRange { l });
    }
    let mut program = CommutatorProgram {
        l: 4,
        terms: base_terms(),
    };
    while program.l < l {
        program = extend_program(&program);
    }
    Ok(program)
}

impl CommutatorProgram {
    pub fn qubits(&self) -> usize {
        self.l + 2
    }

    /// Dense evaluation of the signed nested commutators.
    pub fn evaluate(&self) -> Result<Operator> {
        let n = self.qubits();
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n,
                cap: MAX_DENSE_QUBITS,
            });
        }
        let mut total = Operator::zero(n)?;
        for term in &self.terms {
            let mut iter = term.leaves.iter();
            let &(p, q) = iter.next().ok_or_else(|| {
                Error::Internal("program term with no leaves".into())
            })?;
            let mut acc = exchange_op(n, p, q)?;
            for &(p, q) in iter {
                acc = commutator(&acc, &exchange_op(n, p, q)?);
            }
            total = total.add(&acc.scale_re(term.num as f64 / term.den as f64));
        }
        Ok(total)
    }

    /// The operator the program is supposed to produce:
    /// 4(Q_l − R_ab R_34 T_l) on l+2 qubits.
    pub fn target(&self) -> Result<Operator> {
        let n = self.qubits();
        let mut monomial = Operator::identity(n)?;
        for left in (1..self.l).step_by(2) {
            monomial = monomial.mul(&exchange_op(n, left, left + 1)?);
        }
        let mut swapped_head = exchange_op(n, self.l + 1, self.l + 2)?;
        for left in (3..self.l).step_by(2) {
            swapped_head = swapped_head.mul(&exchange_op(n, left, left + 1)?);
        }
        Ok(monomial.sub(&swapped_head).scale_re(4.0))
    }

    /// Bracket text, one signed term per line; the two ancilla labels print
    /// as a and b.
    pub fn to_text(&self) -> String {
        let label = |site: usize| -> String {
            if site == self.l + 1 {
                "a".into()
            } else if site == self.l + 2 {
                "b".into()
            } else {
                site.to_string()
            }
        };
        let mut lines = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mut expr = format!("R({},{})", label(term.leaves[0].0), label(term.leaves[0].1));
            for &(p, q) in &term.leaves[1..] {
                expr = format!("[{expr},R({},{})]", label(p), label(q));
            }
            let magnitude = if term.num.unsigned_abs() == 1 && term.den == 1 {
                String::new()
            } else if term.den == 1 {
                format!("{}*", term.num.unsigned_abs())
            } else {
                format!("{}/{}*", term.num.unsigned_abs(), term.den)
            };
            let sign = if term.num < 0 { "-" } else { "+" };
            lines.push(format!("{sign}{magnitude}{expr}"));
        }
        lines.join("\n")
    }
}
