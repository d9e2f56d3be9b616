//! Weighted Pauli sums, their text format, and qubit-wise commuting groups.
//!
//! Qubit `q` of an `n`-qubit register is the `q`-th Kronecker factor from the
//! left, i.e. bit `n - 1 - q` of a computational basis index.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, HermitianMatrix, SquareMatrix};
use crate::scalar::Real;

/// Coefficients below this magnitude are dropped on construction.
const ZERO_COEFFICIENT: f64 = 1e-14;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// `coefficient * P_{q0} P_{q1} ...`; an empty letter map is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm<T> {
    pub coefficient: T,
    pub letters: BTreeMap<usize, Pauli>,
}

impl<T: Real> PauliTerm<T> {
    pub fn new(coefficient: T, letters: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        Self {
            coefficient,
            letters: letters.into_iter().collect(),
        }
    }

    pub fn identity(coefficient: T) -> Self {
        Self {
            coefficient,
            letters: BTreeMap::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Adds `coefficient * P` to `m` in place.
    fn accumulate_into(&self, n_qubits: usize, m: &mut SquareMatrix<T>) {
        let dim = 1usize << n_qubits;
        let mut flip = 0usize;
        for (&q, &p) in &self.letters {
            if p != Pauli::Z {
                flip |= 1 << (n_qubits - 1 - q);
            }
        }
        let one = Complex::new(T::one(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        for col in 0..dim {
            let mut phase = one;
            for (&q, &p) in &self.letters {
                let bit = (col >> (n_qubits - 1 - q)) & 1;
                match (p, bit) {
                    (Pauli::X, _) => {}
                    (Pauli::Y, 0) => phase *= i,
                    (Pauli::Y, _) => phase *= -i,
                    (Pauli::Z, 0) => {}
                    (Pauli::Z, _) => phase = -phase,
                }
            }
            m[(col ^ flip, col)] += phase * self.coefficient;
        }
    }
}

/// Two Pauli strings commute qubit-wise when, on every shared qubit, their
/// letters agree.
pub fn qubitwise_commute<T>(a: &PauliTerm<T>, b: &PauliTerm<T>) -> bool {
    a.letters
        .iter()
        .all(|(q, p)| b.letters.get(q).is_none_or(|r| r == p))
}

/// `H = sum_j w_j P_j` on a fixed register size.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum<T> {
    n_qubits: usize,
    terms: Vec<PauliTerm<T>>,
}

impl<T: Real> PauliSum<T> {
    /// Merges duplicate letter maps (first occurrence keeps its position) and
    /// drops terms with `|w| < 1e-14`.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = PauliTerm<T>>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidPauli(
                "register must have at least one qubit".into(),
            ));
        }
        let mut merged: Vec<PauliTerm<T>> = Vec::new();
        for term in terms {
            if !term.coefficient.is_finite() {
                return Err(Error::InvalidPauli(format!(
                    "non-finite coefficient {}",
                    term.coefficient
                )));
            }
            if let Some(&q) = term.letters.keys().find(|&&q| q >= n_qubits) {
                return Err(Error::InvalidPauli(format!(
                    "qubit index {q} out of range for {n_qubits} qubits"
                )));
            }
            match merged.iter_mut().find(|t| t.letters == term.letters) {
                Some(existing) => existing.coefficient += term.coefficient,
                None => merged.push(term),
            }
        }
        let cutoff = T::lit(ZERO_COEFFICIENT);
        merged.retain(|t| t.coefficient.abs() >= cutoff);
        Ok(Self {
            n_qubits,
            terms: merged,
        })
    }

    /// Parses the text format, inferring the register size from the largest index.
    pub fn parse(text: &str) -> Result<Self> {
        let terms = parse_terms::<T>(text)?;
        let n = terms
            .iter()
            .flat_map(|t| t.letters.keys().copied())
            .max()
            .map_or(1, |q| q + 1);
        Self::new(n, terms)
    }

    /// Parses the text format on an explicit register size.
    pub fn parse_on(text: &str, n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, parse_terms::<T>(text)?)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm<T>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dense realization as a `2^n x 2^n` Hermitian matrix.
    pub fn to_matrix(&self) -> HermitianMatrix<T> {
        let mut m = SquareMatrix::zeros(self.dim());
        for term in &self.terms {
            term.accumulate_into(self.n_qubits, &mut m);
        }
        m.hermitian_part()
    }

    /// Same register, additional identity coefficient `c`.
    pub fn shifted(&self, c: T) -> Self {
        let mut terms = self.terms.clone();
        terms.push(PauliTerm::identity(c));
        Self::new(self.n_qubits, terms).expect("shift keeps a valid Pauli sum")
    }

    /// True if every pair of terms commutes qubit-wise.
    pub fn is_qubitwise_commuting(&self) -> bool {
        self.terms
            .iter()
            .enumerate()
            .all(|(i, a)| self.terms[i + 1..].iter().all(|b| qubitwise_commute(a, b)))
    }

    /// Joint single-qubit letter pattern of a qubit-wise commuting group.
    fn letter_pattern(&self) -> Option<BTreeMap<usize, Pauli>> {
        let mut pattern = BTreeMap::new();
        for term in &self.terms {
            for (&q, &p) in &term.letters {
                if *pattern.entry(q).or_insert(p) != p {
                    return None;
                }
            }
        }
        Some(pattern)
    }
}

impl<T: Real> fmt::Display for PauliSum<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            let c = term.coefficient;
            match (k, c < T::zero()) {
                (0, _) => write!(f, "{c}")?,
                (_, true) => write!(f, " - {}", -c)?,
                (_, false) => write!(f, " + {c}")?,
            }
            for (q, p) in &term.letters {
                write!(f, " {}{q}", p.letter())?;
            }
        }
        Ok(())
    }
}

/// Greedy first-fit partition into qubit-wise commuting groups.
///
/// Terms are visited by descending `|w|`, ties broken by the lexicographic
/// order of their letter maps, so the partition is deterministic.
pub fn group_qubitwise_commuting<T: Real>(h: &PauliSum<T>) -> Vec<PauliSum<T>> {
    let mut order: Vec<&PauliTerm<T>> = h.terms.iter().collect();
    order.sort_by(|a, b| {
        b.coefficient
            .abs()
            .partial_cmp(&a.coefficient.abs())
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.letters.cmp(&b.letters))
    });

    let mut groups: Vec<Vec<PauliTerm<T>>> = Vec::new();
    for term in order {
        match groups
            .iter_mut()
            .find(|g| g.iter().all(|t| qubitwise_commute(t, term)))
        {
            Some(g) => g.push(term.clone()),
            None => groups.push(vec![term.clone()]),
        }
    }
    groups
        .into_iter()
        .map(|terms| PauliSum {
            n_qubits: h.n_qubits,
            terms,
        })
        .collect()
}

/// Exact `(lambda_min, lambda_max)` of a qubit-wise commuting group.
///
/// In the joint eigenbasis each term `P_j` acts as the product of the signs
/// `s_q = +-1` of the qubits it touches, so the spectrum is the set of values
/// `sum_j w_j prod_{q in P_j} s_q` over all sign assignments. Non-commuting
/// input falls back to dense diagonalization.
pub fn group_spectrum<T: Real>(group: &PauliSum<T>) -> (T, T) {
    if group.terms.is_empty() {
        return (T::zero(), T::zero());
    }
    let Some(pattern) = group.letter_pattern() else {
        let e = eigenvalues(&group.to_matrix());
        return (e[0], e[e.len() - 1]);
    };
    let support: Vec<usize> = pattern.keys().copied().collect();
    let masks: Vec<(T, u64)> = group
        .terms
        .iter()
        .map(|t| {
            let mask = t.letters.keys().fold(0u64, |m, q| {
                let pos = support
                    .binary_search(q)
                    .expect("pattern covers all letters");
                m | (1 << pos)
            });
            (t.coefficient, mask)
        })
        .collect();

    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for assignment in 0u64..(1u64 << support.len()) {
        let value: T = masks
            .iter()
            .map(|&(w, mask)| {
                if (assignment & mask).count_ones() % 2 == 1 {
                    -w
                } else {
                    w
                }
            })
            .sum();
        lo = lo.min(value);
        hi = hi.max(value);
    }
    (lo, hi)
}

fn parse_terms<T: Real>(text: &str) -> Result<Vec<PauliTerm<T>>> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms = Vec::new();
    parser.skip_ws();
    if parser.at_end() {
        return Ok(terms);
    }
    let mut sign = parser.take_sign().unwrap_or(1.0);
    loop {
        terms.push(parser.term::<T>(sign)?);
        parser.skip_ws();
        if parser.at_end() {
            break;
        }
        sign = parser
            .take_sign()
            .ok_or_else(|| parser.error("expected '+' or '-' between terms"))?;
    }
    Ok(terms)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    /// Consumes any run of `+`/`-` signs and returns their product.
    fn take_sign(&mut self) -> Option<f64> {
        let mut sign = None;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => sign = Some(sign.unwrap_or(1.0)),
                Some(b'-') => sign = Some(-sign.unwrap_or(1.0)),
                _ => return sign,
            }
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<Option<f64>> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.peek().is_some_and(|c| c.is_ascii_digit()) {
                p.pos += 1;
            }
            p.pos > s
        };
        let int = digits(self);
        let mut frac = false;
        if self.peek() == Some(b'.') {
            self.pos += 1;
            frac = digits(self);
        }
        if !int && !frac {
            self.pos = start;
            return Ok(None);
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if !digits(self) {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>().map(Some).map_err(|_| Error::Parse {
            position: start,
            message: format!("invalid number '{text}'"),
        })
    }

    fn term<T: Real>(&mut self, sign: f64) -> Result<PauliTerm<T>> {
        self.skip_ws();
        let start = self.pos;
        let coefficient = self.number()?;
        self.skip_ws();
        if coefficient.is_some() && self.peek() == Some(b'*') {
            self.pos += 1;
            self.skip_ws();
        }
        let mut letters = BTreeMap::new();
        let mut any_letter = false;
        while let Some(c) = self.peek() {
            let pauli = match c.to_ascii_uppercase() {
                b'X' => Some(Pauli::X),
                b'Y' => Some(Pauli::Y),
                b'Z' => Some(Pauli::Z),
                b'I' => None,
                _ => break,
            };
            let letter_pos = self.pos;
            self.pos += 1;
            let idx_start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let index_text = std::str::from_utf8(&self.src[idx_start..self.pos]).expect("ascii");
            any_letter = true;
            // identity letters may carry an index and are dropped
            if let Some(p) = pauli {
                let q: usize = index_text.parse().map_err(|_| Error::Parse {
                    position: letter_pos,
                    message: "Pauli letter must be followed by a qubit index".into(),
                })?;
                if letters.insert(q, p).is_some() {
                    return Err(Error::Parse {
                        position: letter_pos,
                        message: format!("qubit {q} appears twice in one term"),
                    });
                }
            }
            self.skip_ws();
        }
        if coefficient.is_none() && !any_letter {
            return Err(Error::Parse {
                position: start,
                message: "expected a coefficient or a Pauli letter".into(),
            });
        }
        let value = sign * coefficient.unwrap_or(1.0);
        Ok(PauliTerm {
            coefficient: T::lit(value),
            letters,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sum(text: &str) -> PauliSum<f64> {
        PauliSum::parse(text).unwrap()
    }

    #[test]
    fn parses_reference_example() {
        let h = sum("-0.5 Z0 Z1 + 0.3 X0 + 1.2");
        assert_eq!(h.n_qubits(), 2);
        assert_eq!(h.len(), 3);
        assert_eq!(h.terms()[0].coefficient, -0.5);
        assert_eq!(
            h.terms()[0].letters,
            BTreeMap::from([(0, Pauli::Z), (1, Pauli::Z)])
        );
        assert_eq!(h.terms()[1].coefficient, 0.3);
        assert!(h.terms()[2].is_identity());
        assert_eq!(h.terms()[2].coefficient, 1.2);
    }

    #[test]
    fn parser_is_whitespace_and_case_insensitive() {
        let a = sum("-0.5 Z0 Z1 + 0.3 X0 + 1.2");
        let b = sum("-0.5z0z1+0.3x0+1.2");
        assert_eq!(a, b);
        let c = sum("  1e-3 * y2 - 2.5E+0 x0  ");
        assert_eq!(c.terms()[0].coefficient, 1e-3);
        assert_eq!(c.terms()[1].coefficient, -2.5);
        assert_eq!(c.n_qubits(), 3);
    }

    #[test]
    fn parser_reports_errors() {
        assert!(matches!(
            PauliSum::<f64>::parse("0.5 Z"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            PauliSum::<f64>::parse("0.5 Z0 0.3"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            PauliSum::<f64>::parse("Z0 Z0"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            PauliSum::<f64>::parse("+"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            PauliSum::<f64>::parse("0.5 Q1"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn merges_duplicates_and_drops_zeros() {
        let h = sum("0.5 Z0 + 0.25 X1 + 0.5 Z0 - 0.25 X1");
        assert_eq!(h.len(), 1);
        assert_eq!(h.terms()[0].coefficient, 1.0);
    }

    #[test]
    fn display_round_trips() {
        let h = sum("-0.5 Z0 Z1 + 0.3 X0 - 1.25 Y2 + 1.2");
        let again = sum(&h.to_string());
        assert_eq!(h, again);
    }

    #[test]
    fn pauli_y_matrix() {
        let y = sum("Y0").to_matrix();
        assert_eq!(y.get(0, 1), Complex::new(0.0, -1.0));
        assert_eq!(y.get(1, 0), Complex::new(0.0, 1.0));
    }

    #[test]
    fn grouping_examples() {
        assert_eq!(group_qubitwise_commuting(&sum("Z0")).len(), 1);
        assert_eq!(group_qubitwise_commuting(&sum("Z0 + Z0 Z1")).len(), 1);
        assert_eq!(group_qubitwise_commuting(&sum("X0 + Z0")).len(), 2);
    }

    #[test]
    fn grouping_order_is_deterministic() {
        let h = sum("0.1 X0 + 0.5 Z0 Z1 + 0.5 X1 + 0.2 Z1 + 0.3 Y0 + 1.0");
        let groups = group_qubitwise_commuting(&h);
        let rendered: Vec<String> = groups.iter().map(|g| g.to_string()).collect();
        // |w| descending; the tie 0.5 X1 / 0.5 Z0 Z1 resolves by letter map
        // order, where (0, Z) sorts before (1, X)
        assert_eq!(
            rendered,
            vec!["1 + 0.5 Z0 Z1 + 0.2 Z1", "0.5 X1 + 0.3 Y0", "0.1 X0"]
        );
    }

    #[test]
    fn group_spectrum_examples() {
        assert_eq!(group_spectrum(&sum("1.0 Z0")), (-1.0, 1.0));
        assert_eq!(group_spectrum(&sum("0.5 Z0 + 0.5 Z0 Z1")), (-1.0, 1.0));
        assert_eq!(group_spectrum(&sum("2.0")), (2.0, 2.0));
    }
}
