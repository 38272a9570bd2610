//! Dense truncated tensor series over a finite alphabet.
//!
//! Level `n` stores `d^n` coefficients. A word `w_1 w_2 ... w_n` lives at
//! index `w_1 + d*w_2 + ... + d^(n-1)*w_n`, so the first letter is the least
//! significant digit and concatenation satisfies
//! `idx(u v) = idx(u) + d^|u| * idx(v)`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest supported alphabet.
pub const MAX_ALPHABET: usize = 8;
/// Largest supported truncation depth.
pub const MAX_DEPTH: usize = 20;
/// Cap on the total number of stored coefficients.
pub const MAX_COEFFS: usize = 1 << 21;

/// A word is a sequence of letter indices.
pub type Word = Vec<usize>;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Index of `word` at its own level.
pub fn word_index(d: usize, word: &[usize]) -> usize {
    word.iter().rev().fold(0, |acc, &a| acc * d + a)
}

/// Inverse of [`word_index`].
pub fn index_word(d: usize, n: usize, mut idx: usize) -> Word {
    let mut w = Vec::with_capacity(n);
    for _ in 0..n {
        w.push(idx % d);
        idx /= d;
    }
    w
}

/// Checks that a tensor with this shape fits under the storage caps.
pub fn check_shape(dim: usize, depth: usize) -> Result<()> {
    if dim == 0 || dim > MAX_ALPHABET || depth > MAX_DEPTH {
        return Err(Error::TooLarge { dim, depth });
    }
    let mut total: usize = 0;
    let mut size: usize = 1;
    for _ in 0..=depth {
        total = total.saturating_add(size);
        size = size.saturating_mul(dim);
    }
    if total > MAX_COEFFS {
        return Err(Error::TooLarge { dim, depth });
    }
    Ok(())
}

/// Truncated tensor series with complex coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedTensor {
    dim: usize,
    depth: usize,
    levels: Vec<Vec<C64>>,
}

impl GradedTensor {
    pub fn zeros(dim: usize, depth: usize) -> Result<Self> {
        check_shape(dim, depth)?;
        Ok(Self::zeros_unchecked(dim, depth))
    }

    fn zeros_unchecked(dim: usize, depth: usize) -> Self {
        let levels = (0..=depth).map(|n| vec![ZERO; dim.pow(n as u32)]).collect();
        Self { dim, depth, levels }
    }

    /// The unit `1`.
    pub fn one(dim: usize, depth: usize) -> Result<Self> {
        let mut t = Self::zeros(dim, depth)?;
        t.levels[0][0] = ONE;
        Ok(t)
    }

    /// The single letter `e_a`.
    pub fn letter(dim: usize, depth: usize, a: usize) -> Result<Self> {
        if a >= dim {
            return Err(Error::LetterOutOfRange { letter: a, dim });
        }
        let mut t = Self::zeros(dim, depth)?;
        if depth >= 1 {
            t.levels[1][a] = ONE;
        }
        Ok(t)
    }

    /// Degree-one tensor with the given coordinates.
    pub fn from_vector(dim: usize, depth: usize, v: &[C64]) -> Result<Self> {
        if v.len() != dim {
            return Err(Error::AlphabetMismatch(v.len(), dim));
        }
        let mut t = Self::zeros(dim, depth)?;
        if depth >= 1 {
            t.levels[1].copy_from_slice(v);
        }
        Ok(t)
    }

    /// Builds a tensor from explicit levels.
    pub fn from_levels(dim: usize, levels: Vec<Vec<C64>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidArgument("no levels given".into()));
        }
        let depth = levels.len() - 1;
        check_shape(dim, depth)?;
        for (n, l) in levels.iter().enumerate() {
            if l.len() != dim.pow(n as u32) {
                return Err(Error::InvalidArgument(format!(
                    "level {n} has {} coefficients, expected {}",
                    l.len(),
                    dim.pow(n as u32)
                )));
            }
            if l.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite coefficient at level {n}")));
            }
        }
        Ok(Self { dim, depth, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn level(&self, n: usize) -> &[C64] {
        &self.levels[n]
    }

    pub fn level_mut(&mut self, n: usize) -> &mut [C64] {
        &mut self.levels[n]
    }

    pub fn levels(&self) -> &[Vec<C64>] {
        &self.levels
    }

    pub fn scalar(&self) -> C64 {
        self.levels[0][0]
    }

    /// Coefficient of a word; zero beyond the truncation.
    pub fn coeff(&self, word: &[usize]) -> C64 {
        if word.len() > self.depth || word.iter().any(|&a| a >= self.dim) {
            return ZERO;
        }
        self.levels[word.len()][word_index(self.dim, word)]
    }

    pub fn set_coeff(&mut self, word: &[usize], c: C64) -> Result<()> {
        self.check_word(word)?;
        self.levels[word.len()][word_index(self.dim, word)] = c;
        Ok(())
    }

    pub fn add_coeff(&mut self, word: &[usize], c: C64) -> Result<()> {
        self.check_word(word)?;
        self.levels[word.len()][word_index(self.dim, word)] += c;
        Ok(())
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        if word.len() > self.depth {
            return Err(Error::DepthMismatch(word.len(), self.depth));
        }
        if let Some(&a) = word.iter().find(|&&a| a >= self.dim) {
            return Err(Error::LetterOutOfRange { letter: a, dim: self.dim });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::AlphabetMismatch(self.dim, other.dim));
        }
        if self.depth != other.depth {
            return Err(Error::DepthMismatch(self.depth, other.depth));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| l.iter().all(|c| *c == ZERO))
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = self.clone();
        out.scale_mut(c);
        out
    }

    pub fn scale_mut(&mut self, c: C64) {
        for l in &mut self.levels {
            for x in l.iter_mut() {
                *x *= c;
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign_scaled(other, ONE)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign_scaled(other, -ONE)?;
        Ok(out)
    }

    /// `self += c * other`
    pub fn add_assign_scaled(&mut self, other: &Self, c: C64) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.levels.iter_mut().zip(&other.levels) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        Ok(())
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_upto(other, self.depth))
    }

    /// Product with only levels `0..=m` computed; higher levels are zero.
    pub(crate) fn mul_upto(&self, other: &Self, m: usize) -> Self {
        let d = self.dim;
        let m = m.min(self.depth);
        let mut out = Self::zeros_unchecked(d, self.depth);
        let nz_a: Vec<bool> = self.levels.iter().map(|l| l.iter().any(|c| *c != ZERO)).collect();
        let nz_b: Vec<bool> = other.levels.iter().map(|l| l.iter().any(|c| *c != ZERO)).collect();
        for n in 0..=m {
            let target = &mut out.levels[n];
            for (i, &a_live) in nz_a.iter().enumerate().take(n + 1) {
                let j = n - i;
                if !a_live || !nz_b[j] {
                    continue;
                }
                let a = &self.levels[i];
                let stride = a.len();
                for (jb, &bv) in other.levels[j].iter().enumerate() {
                    if bv == ZERO {
                        continue;
                    }
                    let block = &mut target[jb * stride..(jb + 1) * stride];
                    for (o, &av) in block.iter_mut().zip(a) {
                        *o += av * bv;
                    }
                }
            }
        }
        out
    }

    /// Left multiplication by a letter, keeping the depth.
    pub fn letter_mul(&self, a: usize) -> Self {
        let d = self.dim;
        let mut out = Self::zeros_unchecked(d, self.depth);
        for n in 0..self.depth {
            for (idx, &c) in self.levels[n].iter().enumerate() {
                out.levels[n + 1][a + d * idx] = c;
            }
        }
        out
    }

    fn require_scalar(&self, expected: C64, what: &str) -> Result<()> {
        if (self.scalar() - expected).norm() > 1e-12 {
            return Err(Error::Domain(format!(
                "{what} needs scalar component {expected}, found {}",
                self.scalar()
            )));
        }
        Ok(())
    }

    fn without_scalar(&self) -> Self {
        let mut y = self.clone();
        y.levels[0][0] = ZERO;
        y
    }

    /// Truncated exponential; requires a zero scalar component.
    pub fn exp(&self) -> Result<Self> {
        self.require_scalar(ZERO, "exp")?;
        let x = self.without_scalar();
        let n_max = self.depth;
        let mut r = Self::one(self.dim, n_max)?;
        for k in (1..=n_max).rev() {
            let mut next = x.mul_upto(&r, n_max - k + 1);
            next.scale_mut(C64::new(1.0 / k as f64, 0.0));
            next.levels[0][0] += ONE;
            r = next;
        }
        Ok(r)
    }

    /// Truncated logarithm; requires scalar component 1.
    pub fn log(&self) -> Result<Self> {
        self.require_scalar(ONE, "log")?;
        let y = self.without_scalar();
        let n_max = self.depth;
        if n_max == 0 {
            return Self::zeros(self.dim, 0);
        }
        let coef = |n: usize| {
            let s = if n % 2 == 1 { 1.0 } else { -1.0 };
            C64::new(s / n as f64, 0.0)
        };
        let mut r = Self::zeros(self.dim, n_max)?;
        r.levels[0][0] = coef(n_max);
        for n in (1..n_max).rev() {
            let mut next = y.mul_upto(&r, n_max - n);
            next.levels[0][0] += coef(n);
            r = next;
        }
        Ok(y.mul_upto(&r, n_max))
    }

    /// Multiplicative inverse; requires scalar component 1.
    pub fn inv(&self) -> Result<Self> {
        self.require_scalar(ONE, "inv")?;
        let y = self.without_scalar();
        let n_max = self.depth;
        let mut r = Self::one(self.dim, n_max)?;
        for n in (1..=n_max).rev() {
            let mut next = y.mul_upto(&r, n_max - n + 1);
            next.scale_mut(-ONE);
            next.levels[0][0] += ONE;
            r = next;
        }
        Ok(r)
    }

    /// Commutator `self*other - other*self`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        let mut ab = self.mul(other)?;
        ab.add_assign_scaled(&other.mul(self)?, -ONE)?;
        Ok(ab)
    }

    /// Keeps levels `0..=m`, zeroing the rest. The depth is unchanged.
    pub fn truncated(&self, m: usize) -> Self {
        let mut out = self.clone();
        for l in out.levels.iter_mut().skip(m + 1) {
            l.fill(ZERO);
        }
        out
    }

    /// Keeps only level `n`.
    pub fn homogeneous(&self, n: usize) -> Self {
        let mut out = Self::zeros_unchecked(self.dim, self.depth);
        if n <= self.depth {
            out.levels[n].copy_from_slice(&self.levels[n]);
        }
        out
    }

    /// Same series viewed at another truncation depth.
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        let mut out = Self::zeros(self.dim, depth)?;
        for n in 0..=depth.min(self.depth) {
            out.levels[n].copy_from_slice(&self.levels[n]);
        }
        Ok(out)
    }

    /// ℓ1 norm of level `n`, used as the norm proxy.
    pub fn level_norm(&self, n: usize) -> f64 {
        self.levels.get(n).map_or(0.0, |l| l.iter().map(|c| c.norm()).sum())
    }

    /// Largest coefficientwise deviation.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(self
            .levels
            .iter()
            .zip(&other.levels)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.levels.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Restriction to words with exactly `m` copies of the second letter.
    pub fn dm_project(&self, m: usize) -> Result<Self> {
        if self.dim != 2 {
            return Err(Error::Domain(format!("D_m projection needs d = 2, got {}", self.dim)));
        }
        let mut out = self.clone();
        for l in &mut out.levels {
            for (idx, c) in l.iter_mut().enumerate() {
                if idx.count_ones() as usize != m {
                    *c = ZERO;
                }
            }
        }
        Ok(out)
    }

    /// Checks the shuffle relations `<x,u><x,v> = <x, u ш v>` for all
    /// nonempty words with `|u| + |v| <= N`. Returns the verdict and the
    /// worst residual.
    pub fn is_group_like(&self, tol: f64) -> Result<(bool, f64)> {
        self.require_scalar(ONE, "group-like test")?;
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for nu in 1..self.depth {
            for nv in 1..=(self.depth - nu) {
                for iu in 0..d.pow(nu as u32) {
                    let u = index_word(d, nu, iu);
                    let cu = self.levels[nu][iu];
                    for iv in 0..d.pow(nv as u32) {
                        let v = index_word(d, nv, iv);
                        let lhs = cu * self.levels[nv][iv];
                        let rhs = self.shuffle_pairing(&u, &v);
                        worst = worst.max((lhs - rhs).norm());
                    }
                }
            }
        }
        Ok((worst <= tol, worst))
    }

    /// `<self, u ш v>` without materialising the shuffle.
    fn shuffle_pairing(&self, u: &[usize], v: &[usize]) -> C64 {
        let n = u.len() + v.len();
        let d = self.dim;
        let level = &self.levels[n];
        let mut acc = ZERO;
        // Walk interleavings, accumulating the word index on the way.
        let mut stack: Vec<(usize, usize, usize, usize)> = vec![(0, 0, 0, 1)];
        while let Some((i, j, idx, pw)) = stack.pop() {
            if i == u.len() && j == v.len() {
                acc += level[idx];
                continue;
            }
            if i < u.len() {
                stack.push((i + 1, j, idx + pw * u[i], pw * d));
            }
            if j < v.len() {
                stack.push((i, j + 1, idx + pw * v[j], pw * d));
            }
        }
        acc
    }

    /// Right-nested bracketing map applied to level `n`:
    /// `a_1 ... a_n -> [a_1, [a_2, ..., [a_{n-1}, a_n]]]`.
    pub fn dynkin_level(&self, n: usize) -> Vec<C64> {
        dynkin_map(self.dim, n, &self.levels[n])
    }

    /// Dynkin test: each level `x_n` is Lie iff its right-nested
    /// bracketing equals `n x_n`. Returns the verdict and the largest
    /// residual `|r(x_n)/n - x_n|`.
    pub fn dynkin_is_lie(&self, tol: f64) -> (bool, f64) {
        let mut worst = self.scalar().norm();
        for n in 1..=self.depth {
            let r = self.dynkin_level(n);
            let s = 1.0 / n as f64;
            for (a, b) in r.iter().zip(&self.levels[n]) {
                worst = worst.max((a * s - b).norm());
            }
        }
        (worst <= tol, worst)
    }
}

fn dynkin_map(d: usize, n: usize, x: &[C64]) -> Vec<C64> {
    if n <= 1 {
        return x.to_vec();
    }
    let sub_len = x.len() / d;
    let mut out = vec![ZERO; x.len()];
    let mut part = vec![ZERO; sub_len];
    for a in 0..d {
        for (v, p) in part.iter_mut().enumerate() {
            *p = x[a + d * v];
        }
        let r = dynkin_map(d, n - 1, &part);
        // [a, r] = a r - r a
        for (v, &c) in r.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            out[a + d * v] += c;
            out[v + sub_len * a] -= c;
        }
    }
    out
}

/// All interleavings of `u` and `v`, with multiplicity.
pub fn shuffle(u: &[usize], v: &[usize]) -> Vec<Word> {
    if u.is_empty() {
        return vec![v.to_vec()];
    }
    if v.is_empty() {
        return vec![u.to_vec()];
    }
    let mut out = Vec::new();
    for mut w in shuffle(&u[..u.len() - 1], v) {
        w.push(u[u.len() - 1]);
        out.push(w);
    }
    for mut w in shuffle(u, &v[..v.len() - 1]) {
        w.push(v[v.len() - 1]);
        out.push(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn word_indexing_round_trips() {
        let w = vec![1, 0, 2, 2];
        assert_eq!(index_word(3, 4, word_index(3, &w)), w);
        assert_eq!(word_index(2, &[1, 0]), 1);
        assert_eq!(word_index(2, &[0, 1]), 2);
    }

    #[test]
    fn small_product() {
        let one = GradedTensor::one(2, 3).unwrap();
        let a = one.add(&GradedTensor::letter(2, 3, 0).unwrap()).unwrap();
        let b = one.add(&GradedTensor::letter(2, 3, 1).unwrap()).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coeff(&[]), c(1.0));
        assert_eq!(p.coeff(&[0]), c(1.0));
        assert_eq!(p.coeff(&[1]), c(1.0));
        assert_eq!(p.coeff(&[0, 1]), c(1.0));
        assert_eq!(p.coeff(&[1, 0]), c(0.0));
    }

    #[test]
    fn exp_of_letter_has_factorial_levels() {
        let e = GradedTensor::letter(2, 6, 0).unwrap().exp().unwrap();
        let mut f = 1.0;
        for n in 1..=6 {
            f *= n as f64;
            assert!((e.coeff(&vec![0; n]) - c(1.0 / f)).norm() < 1e-15);
        }
    }

    #[test]
    fn log_and_inv_of_one() {
        let one = GradedTensor::one(2, 5).unwrap();
        assert!(one.log().unwrap().is_zero());
        assert_eq!(one.inv().unwrap(), one);
    }

    #[test]
    fn domain_errors() {
        let one = GradedTensor::one(2, 3).unwrap();
        assert!(matches!(one.exp(), Err(Error::Domain(_))));
        let zero = GradedTensor::zeros(2, 3).unwrap();
        assert!(matches!(zero.log(), Err(Error::Domain(_))));
        assert!(matches!(zero.inv(), Err(Error::Domain(_))));
        let other = GradedTensor::zeros(3, 3).unwrap();
        assert!(matches!(one.mul(&other), Err(Error::AlphabetMismatch(2, 3))));
        assert!(GradedTensor::zeros(2, 21).is_err());
        assert!(GradedTensor::zeros(2, 20).is_ok());
    }

    #[test]
    fn bracket_level_two() {
        let e1 = GradedTensor::letter(2, 2, 0).unwrap();
        let e2 = GradedTensor::letter(2, 2, 1).unwrap();
        let b = e1.bracket(&e2).unwrap();
        assert_eq!(b.level_norm(2), 2.0);
        assert!(b.dynkin_is_lie(0.0).0);
        assert!(!e1.mul(&e2).unwrap().dynkin_is_lie(1e-9).0);
    }

    #[test]
    fn shuffle_small_cases() {
        assert_eq!(shuffle(&[1], &[2]).len(), 2);
        let s = shuffle(&[1, 2], &[3]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(&vec![1, 2, 3]) && s.contains(&vec![1, 3, 2]) && s.contains(&vec![3, 1, 2]));
        assert_eq!(shuffle(&[1, 2], &[3, 4]).len(), 6);
    }

    #[test]
    fn group_like_examples() {
        let e = GradedTensor::letter(2, 4, 0).unwrap().exp().unwrap();
        assert!(e.is_group_like(1e-15).unwrap().0);
        let mut x = GradedTensor::one(2, 4).unwrap();
        x.set_coeff(&[0, 1], c(1.0)).unwrap();
        assert!(!x.is_group_like(1e-6).unwrap().0);
    }

    #[test]
    fn dm_projection_examples() {
        let mut x = GradedTensor::zeros(2, 3).unwrap();
        x.set_coeff(&[0, 1], c(1.0)).unwrap();
        x.set_coeff(&[1, 1], c(1.0)).unwrap();
        let d1 = x.dm_project(1).unwrap();
        assert_eq!(d1.coeff(&[0, 1]), c(1.0));
        assert_eq!(d1.coeff(&[1, 1]), c(0.0));
        let lvl1 = GradedTensor::letter(2, 3, 1).unwrap();
        assert!(lvl1.dm_project(2).unwrap().is_zero());
        assert!(GradedTensor::zeros(3, 2).unwrap().dm_project(0).is_err());
    }
}
