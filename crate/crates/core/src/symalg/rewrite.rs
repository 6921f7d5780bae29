use serde::{Deserialize, Serialize};

use super::{Algebra, Family, Letter, Monomial};
use crate::coeff::Scalar;
use crate::error::{Error, Result};

/// A letter of an input word; `star` marks the adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RawLetter {
    pub letter: Letter,
    pub star: bool,
}

impl RawLetter {
    pub fn new(letter: Letter, star: bool) -> RawLetter {
        RawLetter { letter, star }
    }
}

pub type RawWord = Vec<RawLetter>;

/// The rewrite rules on adjacent letter pairs.
///
/// R1 `s_i* s_j → δ_ij`, R2 `t_r* t_l → δ_rl`, R3 `s_i* t_j → q̄_ij t_j s_i*`,
/// R4 `t_j* s_i → q_ij s_i t_j*`, R5 `t_j s_i → q̄_ij s_i t_j`,
/// R6 `s_i* t_j* → q_ij t_j* s_i*`. R5 and R6 exist only in unimodular modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl Rule {
    pub fn is_contraction(self) -> bool {
        matches!(self, Rule::R1 | Rule::R2)
    }
}

/// The rule matching the pair at `(i, i+1)`, ignoring the mode.
fn pair_rule(x: RawLetter, y: RawLetter) -> Option<Rule> {
    use Family::{S, T};
    match (x.star, x.letter.family, y.star, y.letter.family) {
        (true, S, false, S) => Some(Rule::R1),
        (true, T, false, T) => Some(Rule::R2),
        (true, S, false, T) => Some(Rule::R3),
        (true, T, false, S) => Some(Rule::R4),
        (false, T, false, S) => Some(Rule::R5),
        (true, S, true, T) => Some(Rule::R6),
        _ => None,
    }
}

fn rule_enabled<C>(alg: &Algebra<C>, rule: Rule) -> bool {
    alg.unimodular || !matches!(rule, Rule::R5 | Rule::R6)
}

/// All redex positions of `w` in the algebra's mode.
pub fn redexes<C: Scalar>(alg: &Algebra<C>, w: &[RawLetter]) -> Vec<(usize, Rule)> {
    w.windows(2)
        .enumerate()
        .filter_map(|(i, p)| pair_rule(p[0], p[1]).map(|r| (i, r)))
        .filter(|&(_, r)| rule_enabled(alg, r))
        .collect()
}

/// Applies `rule` at position `i`; `None` means the word rewrites to zero.
pub fn apply_rule<C: Scalar>(
    alg: &Algebra<C>,
    w: &[RawLetter],
    i: usize,
    rule: Rule,
) -> Result<Option<(C, RawWord)>> {
    if !rule_enabled(alg, rule) {
        return Err(Error::Mode(format!("{rule:?} requires a unimodular deformation")));
    }
    if i + 1 >= w.len() || pair_rule(w[i], w[i + 1]) != Some(rule) {
        return Err(Error::Config(format!("{rule:?} does not match at position {i}")));
    }
    let (x, y) = (w[i].letter, w[i + 1].letter);
    let mut out = w.to_vec();
    let coeff = match rule {
        Rule::R1 | Rule::R2 => {
            if x.index != y.index {
                return Ok(None);
            }
            out.drain(i..i + 2);
            return Ok(Some((alg.unit.clone(), out)));
        }
        Rule::R3 => alg.qbar_ij(x.index, y.index).clone(),
        Rule::R4 => alg.q_ij(y.index, x.index).clone(),
        Rule::R5 => alg.qbar_ij(y.index, x.index).clone(),
        Rule::R6 => alg.q_ij(x.index, y.index).clone(),
    };
    out.swap(i, i + 1);
    Ok(Some((coeff, out)))
}

fn to_monomial(w: &[RawLetter]) -> Monomial {
    let split = w.iter().position(|l| l.star).unwrap_or(w.len());
    debug_assert!(w[split..].iter().all(|l| l.star));
    Monomial {
        creation: w[..split].iter().map(|l| l.letter).collect(),
        annihilation: w[split..].iter().rev().map(|l| l.letter).collect(),
    }
}

/// Rewrites `c·w` to normal form, letting `choose` pick the next redex
/// among the candidates. Every rule maps a word to a multiple of one word,
/// so the result is a single term or zero.
pub fn normal_order_with<C: Scalar, F>(
    alg: &Algebra<C>,
    c: C,
    w: &[RawLetter],
    mut choose: F,
) -> Result<Option<(C, Monomial)>>
where
    F: FnMut(&[(usize, Rule)]) -> usize,
{
    for l in w {
        alg.check_letter(l.letter)?;
    }
    let bound = w.len() * w.len() + w.len();
    let mut coeff = c;
    let mut word = w.to_vec();
    let mut steps = 0usize;
    loop {
        let cands = redexes(alg, &word);
        if cands.is_empty() {
            break;
        }
        let (i, rule) = cands[choose(&cands)];
        steps += 1;
        assert!(steps <= bound, "rewrite exceeded the quadratic step bound");
        match apply_rule(alg, &word, i, rule)? {
            None => return Ok(None),
            Some((phase, next)) => {
                coeff = coeff.times(&phase);
                word = next;
            }
        }
    }
    if coeff.is_zero() {
        return Ok(None);
    }
    Ok(Some((coeff, to_monomial(&word))))
}

/// Deterministic rewriting: the leftmost contraction if any, otherwise the
/// leftmost redex.
pub fn normal_order<C: Scalar>(
    alg: &Algebra<C>,
    c: C,
    w: &[RawLetter],
) -> Result<Option<(C, Monomial)>> {
    normal_order_with(alg, c, w, |cands| {
        cands.iter().position(|(_, r)| r.is_contraction()).unwrap_or(0)
    })
}

/// Incremental normal form used by the algebra product: unstarred letters
/// travel left through the starred suffix, then the blocks are sorted.
pub(crate) struct Accumulator<'a, C> {
    alg: &'a Algebra<C>,
    coeff: C,
    creation: Vec<Letter>,
    starred: Vec<Letter>,
    zero: bool,
}

impl<'a, C: Scalar> Accumulator<'a, C> {
    pub(crate) fn new(alg: &'a Algebra<C>, coeff: C) -> Self {
        Accumulator { alg, coeff, creation: Vec::new(), starred: Vec::new(), zero: false }
    }

    pub(crate) fn push(&mut self, l: RawLetter) {
        if self.zero {
            return;
        }
        if l.star {
            self.starred.push(l.letter);
            return;
        }
        let y = l.letter;
        let mut k = self.starred.len();
        while k > 0 {
            let z = self.starred[k - 1];
            if z.family == y.family {
                if z.index == y.index {
                    self.starred.remove(k - 1);
                } else {
                    self.zero = true;
                }
                return;
            }
            let phase = match z.family {
                Family::S => self.alg.qbar_ij(z.index, y.index),
                Family::T => self.alg.q_ij(y.index, z.index),
            };
            self.coeff = self.coeff.times(phase);
            k -= 1;
        }
        self.creation.push(y);
    }

    pub(crate) fn push_monomial(&mut self, mono: &Monomial) {
        for &l in &mono.creation {
            self.push(RawLetter::new(l, false));
        }
        for &l in mono.annihilation.iter().rev() {
            self.push(RawLetter::new(l, true));
        }
    }

    pub(crate) fn finish(mut self) -> Option<(C, Monomial)> {
        if self.zero || self.coeff.is_zero() {
            return None;
        }
        if self.alg.unimodular {
            let creation = self.sort_block(self.creation.clone(), Family::T, |a, t, s| {
                a.qbar_ij(s.index, t.index).clone()
            });
            let starred = self.sort_block(self.starred.clone(), Family::S, |a, s, t| {
                a.q_ij(s.index, t.index).clone()
            });
            self.creation = creation;
            self.starred = starred;
        }
        let annihilation = self.starred.iter().rev().copied().collect();
        Some((self.coeff, Monomial { creation: self.creation, annihilation }))
    }

    /// Stable partition with `late` letters moved after the others; every
    /// inversion `(late, early)` contributes `phase(late, early)`.
    fn sort_block<F>(&mut self, word: Vec<Letter>, late: Family, phase: F) -> Vec<Letter>
    where
        F: Fn(&Algebra<C>, Letter, Letter) -> C,
    {
        let mut early = Vec::new();
        let mut lates = Vec::new();
        for &x in &word {
            if x.family == late {
                lates.push(x);
            } else {
                for &l in &lates {
                    self.coeff = self.coeff.times(&phase(self.alg, l, x));
                }
                early.push(x);
            }
        }
        early.extend(lates);
        early
    }
}
