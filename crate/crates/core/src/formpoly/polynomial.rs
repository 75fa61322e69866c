use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;


use crate::multiindex::MultiIndex;
use crate::scalar::{self, Coefficient, Scalar};

/// Variable families. The derived order is the family order used in
/// monomial comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Xi,
    Eta,
    Omega,
    A,
    B,
    T,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Xi => "xi",
            Family::Eta => "eta",
            Family::Omega => "omega",
            Family::A => "a",
            Family::B => "b",
            Family::T => "t",
        }
    }
}

/// A component coordinate such as `ξ_I`, `η_J`, `a_i` or the line parameter `t`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub family: Family,
    pub index: MultiIndex,
}

impl Var {
    pub const T: Var = Var { family: Family::T, index: MultiIndex::EMPTY };

    pub fn new(family: Family, index: MultiIndex) -> Self {
        Var { family, index }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.family == Family::T {
            return write!(f, "t");
        }
        write!(f, "{}", self.family.name())?;
        for (p, i) in self.index.iter().enumerate() {
            if p > 0 {
                write!(f, "_")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Product of variable powers; factors sorted by variable, exponents positive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    degree: u32,
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial { degree: 1, factors: vec![(v, 1)] }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_default() += e;
            }
        }
        let degree = map.values().sum();
        Monomial { degree, factors: map.into_iter().collect() }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|p| self.factors[p].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, b) = (self.factors[i], other.factors[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    factors.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        Monomial { degree: self.degree + other.degree, factors }
    }

    /// Splits off the power of `v`: returns `(exponent, rest)`.
    pub fn split_var(&self, v: Var) -> (u32, Monomial) {
        match self.factors.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(p) => {
                let e = self.factors[p].1;
                let mut factors = self.factors.clone();
                factors.remove(p);
                (e, Monomial { degree: self.degree - e, factors })
            }
            Err(_) => (0, self.clone()),
        }
    }
}

/// Graded lexicographic: total degree first, then the factor lists.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (p, (v, e)) in self.factors.iter().enumerate() {
            if p > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::var(v), Scalar::one());
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// The value when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.factors.iter().map(|(v, _)| *v)).collect()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, factor: &Scalar) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect() }
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(Scalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces every variable for which `image` returns `Some` by that
    /// polynomial; other variables are kept.
    pub fn substitute(&self, image: impl Fn(Var) -> Option<Polynomial>) -> Polynomial {
        let mut images: HashMap<Var, Option<Polynomial>> = HashMap::new();
        let mut powers: HashMap<(Var, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut product = Polynomial::constant(c.clone());
            for &(v, e) in &m.factors {
                let img = images.entry(v).or_insert_with(|| image(v));
                match img {
                    None => kept.push((v, e)),
                    Some(p) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| p.pow(e));
                        product = product.mul(pw);
                    }
                }
                if product.is_zero() {
                    break;
                }
            }
            if product.is_zero() {
                continue;
            }
            let kept = Monomial::from_factors(kept);
            for (pm, pc) in product.terms {
                out.add_term(pm.mul(&kept), pc);
            }
        }
        out
    }

    /// Substitutes scalar values for the variables `values` covers.
    pub fn substitute_values(&self, values: &BTreeMap<Var, Scalar>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for &(v, e) in &m.factors {
                match values.get(&v) {
                    Some(x) => {
                        if x.is_zero() {
                            coeff = Scalar::zero();
                            break;
                        }
                        for _ in 0..e {
                            coeff *= x;
                        }
                    }
                    None => kept.push((v, e)),
                }
            }
            out.add_term(Monomial::from_factors(kept), coeff);
        }
        out
    }

    /// Full evaluation; variables missing from `values` count as zero.
    pub fn evaluate(&self, values: &BTreeMap<Var, Scalar>) -> Scalar {
        let mut acc = Scalar::zero();
        'terms: for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.factors {
                match values.get(&v) {
                    Some(x) if !x.is_zero() => {
                        for _ in 0..e {
                            t *= x;
                        }
                    }
                    _ => continue 'terms,
                }
            }
            acc += t;
        }
        acc
    }

    /// Coefficients of `v^0, v^1, ...` as polynomials in the other variables,
    /// with trailing zeros trimmed.
    pub fn collect_powers(&self, v: Var) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(v);
            let e = e as usize;
            if out.len() <= e {
                out.resize_with(e + 1, Polynomial::zero);
            }
            out[e].add_term(rest, c.clone());
        }
        while out.last().is_some_and(Polynomial::is_zero) {
            out.pop();
        }
        out
    }

    /// Homogeneous component of the given total degree in the variables
    /// selected by `in_group`.
    pub fn homogeneous_part(&self, in_group: impl Fn(Var) -> bool, degree: u32) -> Polynomial {
        Polynomial::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| {
                    m.factors.iter().filter(|(v, _)| in_group(*v)).map(|(_, e)| e).sum::<u32>()
                        == degree
                })
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }
}

impl Coefficient for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::constant(Scalar::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(self) -> Self {
        self.neg()
    }
    fn from_scalar(value: Scalar) -> Self {
        Polynomial::constant(value)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (p, (m, c)) in self.terms.iter().enumerate() {
            let neg = scalar::is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            match (p, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.factors.is_empty() {
                write!(f, "{}", scalar::format_scalar(&mag))?;
            } else if num::One::is_one(&mag) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", scalar::format_scalar(&mag))?;
            }
        }
        Ok(())
    }
}
