//! Character-sum equidistribution: `E_{n∈Φ_N} χ_1(p_1(n))⋯χ_k(p_k(n))`, its
//! Weyl-differencing linearisation and the coset reduction over good rings.

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{
    char_is_irrational, AlgebraError, Character, FolnerSequence, Ideal, Rational, Ring, RingElement,
    DEFAULT_PROBE_BUDGET,
};
use crate::polynomials::{is_independent, Degree, PolyError, PolySystem, RingPolynomial};
use crate::sums::mean_unit;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquidistError {
    #[error("{0}")]
    Mismatch(String),
    #[error("invalid input: {0}")]
    Config(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("the trivial character averages to 1 on every set; a nontrivial character is required")]
    TrivialCharacter,
    #[error("polynomials are linearly dependent over Q: coefficients {0:?} give a constant")]
    Dependent(Vec<String>),
    #[error("character {index} is not irrational: it is trivial on multiples of {witness}")]
    NotIrrational { index: usize, witness: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A product of characters evaluated along polynomials, averaged over a
/// Følner sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSumSpec {
    characters: Vec<Character>,
    polys: PolySystem,
    folner: FolnerSequence,
}

impl CharacterSumSpec {
    pub fn new(characters: Vec<Character>, polys: PolySystem, folner: FolnerSequence) -> Result<Self, EquidistError> {
        if characters.len() != polys.len() {
            return Err(EquidistError::Mismatch(format!(
                "{} characters for {} polynomials",
                characters.len(),
                polys.len()
            )));
        }
        if polys.nvars() != 1 {
            return Err(EquidistError::Mismatch("character sums run over polynomials in one variable".into()));
        }
        let ring = polys.ring();
        if characters.iter().any(|c| c.ring() != ring) || folner.ring() != ring {
            return Err(EquidistError::Mismatch(format!("characters, polynomials and Følner sets must all be over {ring}")));
        }
        Ok(Self { characters, polys, folner })
    }

    pub fn ring(&self) -> Ring {
        self.polys.ring()
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn polys(&self) -> &PolySystem {
        &self.polys
    }

    pub fn folner(&self) -> &FolnerSequence {
        &self.folner
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    /// Exact phase `Σ_i θ_i·p_i(n)` of the summand at `n`.
    pub fn phase(&self, n: &RingElement) -> Rational {
        let at = std::slice::from_ref(n);
        self.characters
            .iter()
            .zip(self.polys.polys())
            .map(|(c, p)| c.phase(&p.evaluate(at).expect("validated ring and arity")))
            .sum()
    }

    /// The equidistribution hypotheses: independent polynomials vanishing at
    /// zero and, over good rings, irrational characters.
    pub fn check_hypotheses(&self) -> Result<(), EquidistError> {
        if let Some(i) = self.polys.polys().iter().position(|p| !p.constant_term().is_zero()) {
            return Err(EquidistError::Config(format!("polynomial {} does not vanish at 0", i + 1)));
        }
        let ind = is_independent(&self.polys)?;
        if !ind.independent {
            let w = ind.witness.unwrap_or_default().iter().map(|x| x.to_string()).collect();
            return Err(EquidistError::Dependent(w));
        }
        if self.characters.iter().all(Character::is_trivial) {
            return Err(EquidistError::TrivialCharacter);
        }
        if self.ring().is_good() {
            for (i, c) in self.characters.iter().enumerate() {
                let v = char_is_irrational(c, DEFAULT_PROBE_BUDGET)?;
                if !v.irrational {
                    let witness = v.witness.map(|w| w.to_string()).unwrap_or_default();
                    return Err(EquidistError::NotIrrational { index: i + 1, witness });
                }
            }
        }
        Ok(())
    }
}

/// `E_{n∈Φ_N} Π_i χ_i(p_i(n))` by exact enumeration.
pub fn character_sum(spec: &CharacterSumSpec, n: u32) -> Result<Complex64, EquidistError> {
    let set = spec.folner.set(n)?;
    Ok(mean_unit(&set, |x: &RingElement| spec.phase(x)))
}

/// Default decay threshold `max(0.05, 8/√|Φ_N|)`.
pub fn default_threshold(size: usize) -> f64 {
    (8.0 / (size as f64).sqrt()).max(0.05)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylReduction {
    pub spec: CharacterSumSpec,
    /// Linear coefficient of each differenced polynomial of maximal degree.
    pub leading: Vec<RingElement>,
}

/// Apply `Δ_{h_1}⋯Δ_{h_{d−1}}` to every polynomial, `d` the maximal degree.
/// The top-degree polynomials become `a·n + b` with `a ≠ 0`; lower ones
/// become constants.
pub fn weyl_difference_reduce(spec: &CharacterSumSpec, shifts: &[RingElement]) -> Result<WeylReduction, EquidistError> {
    let d = spec
        .polys
        .polys()
        .iter()
        .filter_map(|p| p.degree().finite())
        .max()
        .ok_or_else(|| EquidistError::Config("all polynomials are zero".into()))?;
    if shifts.len() + 1 != d.max(1) as usize {
        return Err(EquidistError::Config(format!(
            "maximal degree {d} needs {} shifts, got {}",
            d.saturating_sub(1),
            shifts.len()
        )));
    }
    if shifts.iter().any(RingElement::is_zero) {
        return Err(EquidistError::Config("every shift h_j must be nonzero".into()));
    }
    let mut out = Vec::with_capacity(spec.len());
    let mut leading = Vec::new();
    for p in spec.polys.polys() {
        let mut q = p.clone();
        for h in shifts {
            q = q.difference(std::slice::from_ref(h))?;
        }
        if p.degree() == Degree::Finite(d) {
            let a = q.coefficient(&[1]);
            if a.is_zero() || q.degree() != Degree::Finite(1) {
                return Err(EquidistError::Integrity(format!("differenced polynomial {q} is not linear")));
            }
            leading.push(a);
        }
        out.push(q);
    }
    let spec = CharacterSumSpec::new(spec.characters.clone(), PolySystem::new(out)?, spec.folner.clone())?;
    Ok(WeylReduction { spec, leading })
}

/// `(p(b·n + r) − p(r), (p(b·n + r) − p(r)) / b)`, the second with an exact
/// division check on every coefficient.
pub fn coset_polynomials(
    p: &RingPolynomial,
    b: &RingElement,
    r: &RingElement,
) -> Result<(RingPolynomial, RingPolynomial), EquidistError> {
    let ring = p.ring();
    let lin = &RingPolynomial::variable(ring, 1, 0).scale(b) + &RingPolynomial::constant(r.clone(), 1);
    let recentred = &p.substitute(&[lin])? - &RingPolynomial::constant(p.evaluate(std::slice::from_ref(r))?, 1);
    let mut divided = Vec::new();
    for (e, c) in recentred.terms() {
        let q = c.checked_div(b).ok_or_else(|| {
            EquidistError::Integrity(format!("coefficient {c} of {recentred} is not divisible by {b}"))
        })?;
        divided.push((e.clone(), q));
    }
    let divided = RingPolynomial::from_terms(ring, 1, divided);
    Ok((recentred, divided))
}

/// One coset `b·A_N(i) + r_i` of the decomposition of `Φ_N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetSpec {
    pub representative: RingElement,
    /// `Σ_j θ_j·p_j(r_i)`, the constant phase split off by recentring.
    pub offset: Rational,
    /// Over `A_N(i)`, with `χ_k` eliminated through the relation.
    pub spec: CharacterSumSpec,
}

/// Split `Φ_N` into the cosets of `J = (b_k)` and use the relation
/// `Π_j χ_j(b_j ·) ≡ 1` to drop `χ_k`: on coset `i` the summand becomes
/// `e(offset_i) · Π_{j≠k} χ_j(p_{j,i}(n) − b_j·p_{k,i}(n))` with
/// `p_{j,i}(n) = p_j(b_k n + r_i) − p_j(r_i)` and
/// `p_{k,i} = (p_k(b_k n + r_i) − p_k(r_i)) / b_k`.
pub fn coset_reduction(
    spec: &CharacterSumSpec,
    witness: &[RingElement],
    eliminate: usize,
) -> Result<Vec<CosetSpec>, EquidistError> {
    let ring = spec.ring();
    if !ring.is_good() {
        return Err(EquidistError::Config(format!("coset reduction needs a good ring, not {ring}")));
    }
    if witness.len() != spec.len() || eliminate >= spec.len() {
        return Err(EquidistError::Config("relation witness must give one coefficient per character".into()));
    }
    let bk = &witness[eliminate];
    if bk.is_zero() {
        return Err(EquidistError::Config("the eliminated character needs a nonzero coefficient".into()));
    }
    let relation = spec
        .characters
        .iter()
        .zip(witness)
        .fold(Character::trivial(ring), |acc, (c, b)| acc.product(&c.scaled(b)));
    if !relation.is_trivial() {
        return Err(EquidistError::Integrity("the witness does not give a character relation".into()));
    }
    let ideal = Ideal::new(bk.clone())?;
    let mut out = Vec::new();
    for r in ideal.coset_representatives()? {
        let mut offset = Rational::from_integer(0.into());
        let mut recentred = Vec::with_capacity(spec.len());
        let mut divided_k = None;
        for (j, (c, p)) in spec.characters.iter().zip(spec.polys.polys()).enumerate() {
            offset += c.phase(&p.evaluate(std::slice::from_ref(&r))?);
            let (rec, div) = coset_polynomials(p, bk, &r)?;
            if j == eliminate {
                divided_k = Some(div);
            }
            recentred.push(rec);
        }
        let pk = divided_k.expect("eliminated index in range");
        let mut chars = Vec::new();
        let mut polys = Vec::new();
        for (j, (c, rec)) in spec.characters.iter().zip(recentred).enumerate() {
            if j == eliminate {
                continue;
            }
            chars.push(c.clone());
            polys.push(&rec - &pk.scale(&witness[j]));
        }
        if chars.is_empty() {
            return Err(EquidistError::Integrity(
                "the relation would eliminate the only character, which is then not irrational".into(),
            ));
        }
        let folner = FolnerSequence::coset_pullback(spec.folner.clone(), bk.clone(), r.clone())?;
        out.push(CosetSpec { representative: r, offset, spec: CharacterSumSpec::new(chars, PolySystem::new(polys)?, folner)? });
    }
    Ok(out)
}

/// `Σ_i (|A_N(i)|/|Φ_N|) · e(offset_i) · E_{n∈A_N(i)} (…)`, which equals the
/// original average exactly.
pub fn coset_recombine(parts: &[CosetSpec], base_size: usize, n: u32) -> Result<Complex64, EquidistError> {
    let mut total = Complex64::new(0.0, 0.0);
    for part in parts {
        let size = part.spec.folner.size(n)?;
        if size == 0 {
            continue;
        }
        let avg = character_sum(&part.spec, n)?;
        total += avg * crate::algebra::unit(&part.offset) * (size as f64 / base_size as f64);
    }
    Ok(total)
}

/// `E_{n∈Φ_N} χ(n)` for a nontrivial character.
pub fn single_character_average(chi: &Character, folner: &FolnerSequence, n: u32) -> Result<Complex64, EquidistError> {
    if chi.is_trivial() {
        return Err(EquidistError::TrivialCharacter);
    }
    if chi.ring() != folner.ring() {
        return Err(EquidistError::Mismatch(format!("character over {}, Følner sets over {}", chi.ring(), folner.ring())));
    }
    let set = folner.set(n)?;
    Ok(mean_unit(&set, |x: &RingElement| chi.phase(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomials::parse_polynomial;

    fn zbox() -> FolnerSequence {
        FolnerSequence::centered_box(Ring::Integers).unwrap()
    }

    fn spec(ring: Ring, chars: &[&[&str]], polys: &[&str], folner: FolnerSequence) -> CharacterSumSpec {
        let chars = chars.iter().map(|c| Character::parse(ring, c).unwrap()).collect();
        CharacterSumSpec::new(chars, PolySystem::parse(ring, 1, polys).unwrap(), folner).unwrap()
    }

    #[test]
    fn trivial_characters_give_one() {
        let s = spec(Ring::Integers, &[&["0"], &["3"]], &["n", "n^2"], zbox());
        for n in [1, 7, 50] {
            assert_eq!(character_sum(&s, n).unwrap(), Complex64::new(1.0, 0.0));
        }
        assert!(matches!(s.check_hypotheses(), Err(EquidistError::TrivialCharacter)));
    }

    #[test]
    fn weyl_sum_decays() {
        let s = spec(Ring::Integers, &[&["sqrt(2)-1"]], &["n^2"], zbox());
        assert!(character_sum(&s, 4096).unwrap().norm() < 0.05);
        s.check_hypotheses().unwrap();
    }

    #[test]
    fn rational_ladder_full_periods() {
        let q = spec(Ring::Rationals, &[&["1"]], &["n"], FolnerSequence::periodic_ladder());
        assert_eq!(character_sum(&q, 4).unwrap(), Complex64::new(0.0, 0.0));
        let sym = spec(Ring::Rationals, &[&["1"]], &["n"], FolnerSequence::rational_ladder());
        let v = character_sum(&sym, 4).unwrap();
        assert!((v - Complex64::new(1.0 / 193.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn weyl_reduction_examples() {
        let s = spec(Ring::Integers, &[&["sqrt(2)"]], &["n^2"], zbox());
        let one = RingElement::from_int(Ring::Integers, 1);
        let r = weyl_difference_reduce(&s, &[one.clone()]).unwrap();
        assert_eq!(r.spec.polys().polys()[0], parse_polynomial(Ring::Integers, "2*n+1", &["n"]).unwrap());
        let s3 = spec(Ring::Integers, &[&["sqrt(2)"], &["sqrt(3)"]], &["n^3", "n"], zbox());
        let r = weyl_difference_reduce(&s3, &[one.clone(), one.clone()]).unwrap();
        assert_eq!(r.spec.polys().polys()[0], parse_polynomial(Ring::Integers, "6*n+6", &["n"]).unwrap());
        assert!(r.spec.polys().polys()[1].is_constant());
        assert_eq!(r.leading, vec![RingElement::from_int(Ring::Integers, 6)]);
        let g = spec(
            Ring::GaussianIntegers,
            &[&["sqrt(2)", "sqrt(3)"]],
            &["n^2"],
            FolnerSequence::centered_box(Ring::GaussianIntegers).unwrap(),
        );
        let r = weyl_difference_reduce(&g, &[RingElement::gaussian(0, 1)]).unwrap();
        assert_eq!(r.spec.polys().polys()[0], parse_polynomial(Ring::GaussianIntegers, "2i*n - 1", &["n"]).unwrap());
        assert_eq!(r.leading, vec![RingElement::gaussian(0, 2)]);
        assert!(weyl_difference_reduce(&s, &[RingElement::zero(Ring::Integers)]).is_err());
    }

    #[test]
    fn coset_polynomial_division() {
        let p = parse_polynomial(Ring::GaussianIntegers, "n^2", &["n"]).unwrap();
        let b = RingElement::gaussian(1, 1);
        let reps = Ideal::new(b.clone()).unwrap().coset_representatives().unwrap();
        assert_eq!(reps.len(), 2);
        for r in &reps {
            let (rec, div) = coset_polynomials(&p, &b, r).unwrap();
            assert!(rec.constant_term().is_zero());
            assert_eq!(div.scale(&b), rec);
        }
    }

    #[test]
    fn coset_reduction_recombines_exactly() {
        // θ_2 = -θ_1/2 is a relation with b = (1, 2).
        let s = spec(Ring::Integers, &[&["sqrt(2)"], &["-sqrt(2)/2"]], &["n^2", "n"], zbox());
        let w = [RingElement::from_int(Ring::Integers, 1), RingElement::from_int(Ring::Integers, 2)];
        let parts = coset_reduction(&s, &w, 1).unwrap();
        assert_eq!(parts.len(), 2);
        for n in [5, 64] {
            let base = zbox().size(n).unwrap();
            let sizes: usize = parts.iter().map(|p| p.spec.folner().size(n).unwrap()).sum();
            assert_eq!(sizes, base);
            let direct = character_sum(&s, n).unwrap();
            let split = coset_recombine(&parts, base, n).unwrap();
            assert!((direct - split).norm() < 1e-12);
        }
        for p in &parts {
            assert_eq!(p.spec.len(), 1);
            let size = p.spec.folner().size(64).unwrap() as f64;
            assert!((size / (129.0 / 2.0) - 1.0).abs() < 0.1);
        }
        let unit = coset_reduction(
            &spec(Ring::Integers, &[&["sqrt(2)"], &["-sqrt(2)"]], &["n^2", "n"], zbox()),
            &[RingElement::from_int(Ring::Integers, 1), RingElement::from_int(Ring::Integers, 1)],
            1,
        )
        .unwrap();
        assert_eq!(unit.len(), 1);
        // A lone irrational character never satisfies a relation.
        let lone = spec(Ring::Integers, &[&["sqrt(2)"]], &["n^2"], zbox());
        assert!(coset_reduction(&lone, &[RingElement::from_int(Ring::Integers, 3)], 0).is_err());
    }

    #[test]
    fn single_character() {
        let half = Character::parse(Ring::Integers, &["1/2"]).unwrap();
        for n in [1, 2, 10, 11] {
            let v = single_character_average(&half, &zbox(), n).unwrap();
            assert!(v.norm() <= 1.0 / (2 * n + 1) as f64 + 1e-15);
        }
        let gold = Character::parse(Ring::Integers, &["(1+sqrt(5))/2"]).unwrap();
        assert!(single_character_average(&gold, &zbox(), 2048).unwrap().norm() < 0.01);
        assert!(single_character_average(&Character::trivial(Ring::Integers), &zbox(), 3).is_err());
    }
}
